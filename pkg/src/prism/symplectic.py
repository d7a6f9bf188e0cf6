"""Symplectic rank of coefficient vectors and genus lower bounds.

An invariant polynomial over the surface variables ``x1, y1, ..., xg, yg``
determines, term by term, a set of integer homology vectors (the (x,y)-part
of each monomial's exponent vector).  The rank of the symplectic form on the
span of those vectors, halved, bounds the genus of any surface carrying the
diagram from below.  Rank is computed exactly: over the rationals by
fraction-free row reduction of the Gram matrix, and over GF(2) for the
bracket's parity test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ring import ExponentVector, LaurentPoly


@dataclass(frozen=True)
class H1Vector:
    """An integer homology vector: coords in the order (x1, y1, ..., xg, yg)."""

    g: int
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != 2 * self.g:
            raise ValueError("expected %d coordinates, got %d"
                             % (2 * self.g, len(self.coords)))

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class SymplecticForm:
    """The standard alternating form with x_i . y_j = delta_ij."""

    g: int

    def pairing(self, u: H1Vector, v: H1Vector) -> int:
        if u.g != self.g or v.g != self.g:
            raise ValueError("genus mismatch")
        total = 0
        for i in range(self.g):
            total += u.coords[2 * i] * v.coords[2 * i + 1]
            total -= u.coords[2 * i + 1] * v.coords[2 * i]
        return total


def coefficient_vectors(p: LaurentPoly, g: int | None = None) -> set[H1Vector]:
    """The (x,y)-exponent vector of every term of p, de-duplicated.

    Exponents of variables outside the symplectic block (q, t, ...) are
    discarded.  The zero polynomial yields the empty set.
    """
    ctx = p.ctx
    if g is None:
        g = ctx.genus
    names = []
    for i in range(1, g + 1):
        names.append("x%d" % i)
        names.append("y%d" % i)
    indices = [ctx.var_index(name) for name in names]
    out: set[H1Vector] = set()
    for ev in p.terms:
        d = ev.as_dict()
        out.add(H1Vector(g, tuple(d.get(i, 0) for i in indices)))
    return out


def _rational_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix over the rationals, by exact elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(m)):
            if m[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] / pv
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def _gf2_rank(rows: list[list[int]]) -> int:
    m = [sum((x & 1) << i for i, x in enumerate(row)) for row in rows]
    rank = 0
    for col in range(max((len(row) for row in rows), default=0)):
        mask = 1 << col
        pivot = next((r for r in range(rank, len(m)) if m[r] & mask), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r] & mask:
                m[r] ^= m[rank]
        rank += 1
    return rank


def _gram(vs: list[H1Vector]) -> list[list[int]]:
    if not vs:
        return []
    form = SymplecticForm(vs[0].g)
    return [[form.pairing(u, v) for v in vs] for u in vs]


def symplectic_rank(vs: set[H1Vector] | list[H1Vector]) -> int:
    """Rank of the symplectic form on span(vs): rank of W/(W ∩ W⊥).

    Equals the rank of the Gram matrix on any generating set (appending a
    dependent generator changes the Gram matrix by dependent rows/columns),
    so no basis extraction is needed.  Always even.
    """
    vec = sorted(set(vs), key=lambda v: v.coords)
    return _rational_rank(_gram(vec))


def z2_symplectic_rank(vs: set[H1Vector] | list[H1Vector]) -> int:
    """The same rank with all arithmetic over GF(2)."""
    vec = sorted(set(vs), key=lambda v: v.coords)
    return _gf2_rank(_gram(vec))


def genus_lower_bound(p: LaurentPoly, g: int | None = None) -> int:
    """symplectic_rank of p's coefficient vectors, halved."""
    return symplectic_rank(coefficient_vectors(p, g)) // 2


def _standard_j(g: int) -> list[list[int]]:
    j = [[0] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        j[2 * i][2 * i + 1] = 1
        j[2 * i + 1][2 * i] = -1
    return j


def is_symplectic(m: tuple[tuple[int, ...], ...]) -> bool:
    """Whether MᵀJM = J for the standard form (coords x1,y1,...,xg,yg)."""
    n = len(m)
    if n % 2 or any(len(row) != n for row in m):
        return False
    g = n // 2
    j = _standard_j(g)
    for a in range(n):
        for b in range(n):
            s = sum(m[r][a] * j[r][c] * m[c][b]
                    for r in range(n) for c in range(n))
            if s != j[a][b]:
                return False
    return True


def apply_basis_change(p: LaurentPoly, m: tuple[tuple[int, ...], ...]) -> LaurentPoly:
    """Replace every (x,y)-exponent vector v of p by M·v.

    M must lie in Sp(2g, ℤ); exponents of non-symplectic variables are
    untouched.  This realizes a change of symplectic basis of the underlying
    surface on the invariant polynomial.
    """
    if not is_symplectic(m):
        raise ValueError("matrix is not symplectic")
    ctx = p.ctx
    g = len(m) // 2
    if g > ctx.genus:
        raise ValueError("matrix genus %d exceeds context genus %d"
                         % (g, ctx.genus))
    indices = [ctx.var_index(name) for name in ctx.symplectic_names[:2 * g]]
    index_set = set(indices)
    terms = {}
    for ev, c in p.terms.items():
        d = ev.as_dict()
        v = [d.get(i, 0) for i in indices]
        new = {i: e for i, e in d.items() if i not in index_set}
        for r in range(2 * g):
            e = sum(m[r][k] * v[k] for k in range(2 * g))
            if e:
                new[indices[r]] = e
        key = ExponentVector.from_dict(new)
        terms[key] = terms.get(key, 0) + c
    return LaurentPoly(ctx, terms)
