"""Diagonal-decorated Burau matrices, Fox calculus, and determinant pipelines.

Two routes to the Alexander-type polynomial of a decorated diagram live here:
the matrix route det(rho(word) - I) and the presentation route (Fox Jacobian
of an operator-group presentation).  The exterior-power functor bridges the
Burau matrices to the quantum side; the determinant-trace identity ties the
two together.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .diagram import Chi, Lambda, OMEGA, PrismaticBraidWord, Sigma
from .ring import (
    LaurentPoly,
    RingContext,
    divide_exact,
    parse,
)

T_MODES = ("t", "q^-2")


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RingMatrix:
    """Sparse matrix over one ring context; stored entries are nonzero."""

    ctx: RingContext
    rows: int
    cols: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        for (r, c), p in self.entries.items():
            if not 0 <= r < self.rows or not 0 <= c < self.cols:
                raise ValueError("entry (%d,%d) out of range" % (r, c))
            if not isinstance(p, LaurentPoly) or p.ctx != self.ctx:
                raise ValueError("entry (%d,%d) not in the matrix ring"
                                 % (r, c))
            if p.is_zero:
                raise ValueError("stored entries must be nonzero")

    @classmethod
    def build(cls, ctx, rows, cols, entries) -> "RingMatrix":
        clean = {}
        for (r, c), p in entries.items():
            if isinstance(p, int):
                p = LaurentPoly.integer(ctx, p)
            elif isinstance(p, str):
                p = parse(ctx, p)
            if not p.is_zero:
                clean[(r, c)] = p
        return cls(ctx, rows, cols, clean)

    @classmethod
    def identity(cls, ctx, n) -> "RingMatrix":
        one = LaurentPoly.one(ctx)
        return cls(ctx, n, n, {(i, i): one for i in range(n)})

    @classmethod
    def diagonal(cls, ctx, polys) -> "RingMatrix":
        polys = list(polys)
        return cls.build(ctx, len(polys), len(polys),
                         {(i, i): p for i, p in enumerate(polys)})

    @classmethod
    def from_rows(cls, ctx, rows) -> "RingMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        ent = {}
        for r, row in enumerate(rows):
            if len(row) != m:
                raise ValueError("ragged rows")
            for c, p in enumerate(row):
                ent[(r, c)] = p
        return cls.build(ctx, n, m, ent)

    def get(self, r, c) -> LaurentPoly:
        return self.entries.get((r, c), LaurentPoly.zero(self.ctx))

    def to_rows(self) -> list[list[LaurentPoly]]:
        zero = LaurentPoly.zero(self.ctx)
        out = [[zero] * self.cols for _ in range(self.rows)]
        for (r, c), p in self.entries.items():
            out[r][c] = p
        return out

    def __mul__(self, other) -> "RingMatrix":
        if not isinstance(other, RingMatrix):
            return NotImplemented
        if self.cols != other.rows or self.ctx != other.ctx:
            raise ValueError("matrix shapes/contexts do not match")
        by_row: dict[int, list] = {}
        for (r, k), p in self.entries.items():
            by_row.setdefault(r, []).append((k, p))
        by_col: dict[int, list] = {}
        for (k, c), p in other.entries.items():
            by_col.setdefault(k, []).append((c, p))
        acc: dict[tuple[int, int], LaurentPoly] = {}
        for r, left in by_row.items():
            for k, p in left:
                for c, q in by_col.get(k, ()):
                    key = (r, c)
                    prod = p * q
                    acc[key] = acc[key] + prod if key in acc else prod
        return RingMatrix(self.ctx, self.rows, other.cols,
                          {k: v for k, v in acc.items() if not v.is_zero})

    def __add__(self, other) -> "RingMatrix":
        if not isinstance(other, RingMatrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols) \
                or self.ctx != other.ctx:
            raise ValueError("matrix shapes/contexts do not match")
        acc = dict(self.entries)
        for key, p in other.entries.items():
            acc[key] = acc[key] + p if key in acc else p
        return RingMatrix(self.ctx, self.rows, self.cols,
                          {k: v for k, v in acc.items() if not v.is_zero})

    def __sub__(self, other) -> "RingMatrix":
        return self + other.scaled(-1)

    def scaled(self, p) -> "RingMatrix":
        if isinstance(p, int):
            p = LaurentPoly.integer(self.ctx, p)
        elif isinstance(p, str):
            p = parse(self.ctx, p)
        if p.is_zero:
            return RingMatrix(self.ctx, self.rows, self.cols, {})
        return RingMatrix(self.ctx, self.rows, self.cols,
                          {k: v * p for k, v in self.entries.items()})

    def trace(self) -> LaurentPoly:
        out = LaurentPoly.zero(self.ctx)
        for i in range(min(self.rows, self.cols)):
            out = out + self.get(i, i)
        return out

    def det(self) -> LaurentPoly:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return LaurentPoly.one(self.ctx)
        if n < 5:
            return _det_cofactor(self.to_rows(), self.ctx)
        return _det_bareiss(self.to_rows(), self.ctx)


def _det_cofactor(rows, ctx) -> LaurentPoly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    out = LaurentPoly.zero(ctx)
    for r in range(n):
        p = rows[r][0]
        if p.is_zero:
            continue
        minor = [row[1:] for i, row in enumerate(rows) if i != r]
        term = p * _det_cofactor(minor, ctx)
        out = out + (term if r % 2 == 0 else -term)
    return out


def _det_bareiss(rows, ctx) -> LaurentPoly:
    n = len(rows)
    m = [row[:] for row in rows]
    one = LaurentPoly.one(ctx)
    prev = one
    sign = 1
    for k in range(n - 1):
        if m[k][k].is_zero:
            for r in range(k + 1, n):
                if not m[r][k].is_zero:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return LaurentPoly.zero(ctx)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = divide_exact(num, prev) if not num.is_zero \
                    else num
            m[i][k] = LaurentPoly.zero(ctx)
        prev = m[k][k]
    out = m[n - 1][n - 1]
    return out if sign > 0 else -out


# ---------------------------------------------------------------------------
# the representation
# ---------------------------------------------------------------------------

def burau_context(word: PrismaticBraidWord, t_mode: str = "t") -> RingContext:
    if t_mode not in T_MODES:
        raise ValueError("t_mode must be one of %r" % (T_MODES,))
    head = "t" if t_mode == "t" else "q"
    names = [head] + list(word.palette.colors)
    if any(isinstance(t, Lambda) and t.color == OMEGA for t in word.tokens):
        names.append(OMEGA)
    return RingContext(tuple(names), genus=word.genus)


def _t_images(ctx: RingContext, t_mode: str):
    if t_mode == "t":
        t = LaurentPoly.variable(ctx, "t")
        t_inv = LaurentPoly.variable(ctx, "t", -1)
    else:
        t = LaurentPoly.variable(ctx, "q", -2)
        t_inv = LaurentPoly.variable(ctx, "q", 2)
    return t, t_inv


def rho(word: PrismaticBraidWord, t_mode: str = "t",
        ctx: RingContext | None = None) -> RingMatrix:
    """Left-to-right product of the generator matrices of the word."""
    if ctx is None:
        ctx = burau_context(word, t_mode)
    elif t_mode not in T_MODES:
        raise ValueError("t_mode must be one of %r" % (T_MODES,))
    n = word.n_alpha
    t, t_inv = _t_images(ctx, t_mode)
    one = LaurentPoly.one(ctx)
    out = RingMatrix.identity(ctx, n)
    for tok in word.tokens:
        ent = {(i, i): one for i in range(n)}
        if isinstance(tok, Sigma):
            i = tok.index - 1
            del ent[(i, i)], ent[(i + 1, i + 1)]
            if tok.sign > 0:
                ent[(i, i)] = one - t
                ent[(i, i + 1)] = t
                ent[(i + 1, i)] = one
            else:
                ent[(i, i + 1)] = one
                ent[(i + 1, i)] = t_inv
                ent[(i + 1, i + 1)] = one - t_inv
        elif isinstance(tok, Chi):
            i = tok.index - 1
            del ent[(i, i)], ent[(i + 1, i + 1)]
            ent[(i, i + 1)] = one
            ent[(i + 1, i)] = one
        else:
            j = tok.strand - 1
            ent[(j, j)] = LaurentPoly.variable(ctx, tok.color, tok.sign)
        gen = RingMatrix(ctx, n, n,
                         {k: v for k, v in ent.items() if not v.is_zero})
        out = out * gen
    return out


def csw_det(word: PrismaticBraidWord, t_mode: str = "t",
            ctx: RingContext | None = None) -> LaurentPoly:
    """det(rho(word) - I), the determinant form of the decorated Alexander
    polynomial of the word's closure (defined up to units)."""
    m = rho(word, t_mode, ctx)
    return (m - RingMatrix.identity(m.ctx, m.rows)).det()


# ---------------------------------------------------------------------------
# exterior powers and the determinant-trace identity
# ---------------------------------------------------------------------------

def _subset_to_tensor(subset: tuple[int, ...], n: int) -> int:
    """Wedge factor positions (1-indexed) -> tensor basis index where the odd
    slots sit at positions (i mod n) + 1."""
    idx = 0
    odd = {(i % n) + 1 for i in subset}
    for slot in range(1, n + 1):
        idx = 2 * idx + (1 if slot in odd else 0)
    return idx


def exterior_power(m: RingMatrix) -> RingMatrix:
    """The full exterior algebra of m, re-indexed into the 2^n tensor basis."""
    if m.rows != m.cols:
        raise ValueError("exterior power of a non-square matrix")
    n = m.rows
    rows = m.to_rows()
    ent = {}
    one = LaurentPoly.one(m.ctx)
    for k in range(n + 1):
        for ss in itertools.combinations(range(1, n + 1), k):
            for tt in itertools.combinations(range(1, n + 1), k):
                if k == 0:
                    minor = one
                else:
                    sub = [[rows[i - 1][j - 1] for j in tt] for i in ss]
                    minor = _det_cofactor(sub, m.ctx) if k < 5 else \
                        _det_bareiss(sub, m.ctx)
                if not minor.is_zero:
                    ent[(_subset_to_tensor(ss, n),
                         _subset_to_tensor(tt, n))] = minor
    return RingMatrix(m.ctx, 2 ** n, 2 ** n, ent)


def half_q_gauge(ctx: RingContext, n: int) -> tuple[RingMatrix, RingMatrix]:
    """The diagonal q^((2i-n-1)/2) gauge and its inverse (n=2: the printed
    diag(q^-1/2, q^1/2))."""
    fwd = [LaurentPoly.monomial(ctx, 1, None, q_half=2 * i - n - 1)
           for i in range(1, n + 1)]
    inv = [LaurentPoly.monomial(ctx, 1, None, q_half=-(2 * i - n - 1))
           for i in range(1, n + 1)]
    return RingMatrix.diagonal(ctx, fwd), RingMatrix.diagonal(ctx, inv)


def det_trace_identity_check(word: PrismaticBraidWord) -> bool:
    """det(rho - I) == (-1)^N sum_k (-1)^k tr(wedge^k rho), exactly."""
    m = rho(word)
    n = m.rows
    wedge = exterior_power(m)
    rhs = LaurentPoly.zero(m.ctx)
    for k in range(n + 1):
        for ss in itertools.combinations(range(1, n + 1), k):
            idx = _subset_to_tensor(ss, n)
            term = wedge.get(idx, idx)
            rhs = rhs + (term if k % 2 == 0 else -term)
    if n % 2 == 1:
        rhs = -rhs
    return csw_det(word) == rhs


# ---------------------------------------------------------------------------
# operator-group presentations and Fox calculus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Letter:
    """One symbol a^gamma or its inverse inside a relator."""

    gen: str
    operator: tuple[tuple[str, int], ...] = ()
    exponent: int = 1

    def __post_init__(self):
        if self.exponent not in (1, -1):
            raise ValueError("letter exponent must be +1 or -1")


GroupWord = tuple[Letter, ...]


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[GroupWord, ...]
    omega_map: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        gens = set(self.generators)
        if len(gens) != len(self.generators):
            raise ValueError("duplicate generators")
        for rel in self.relators:
            for let in rel:
                if let.gen not in gens:
                    raise ValueError("relator letter %r is not a declared "
                                     "generator" % let.gen)
                for sym, _ in let.operator:
                    if sym in gens:
                        raise ValueError("operator symbol %r clashes with a "
                                         "generator" % sym)

    @property
    def palette(self):
        """Symplectic palette of the surface the omega images name."""
        from .diagram import SymplecticPalette
        return SymplecticPalette(target_context(self).genus)

    @property
    def omega_letters(self) -> tuple[str, ...]:
        seen: list[str] = []
        for rel in self.relators:
            for let in rel:
                for sym, _ in let.operator:
                    if sym not in seen:
                        seen.append(sym)
        return tuple(seen)

    def omega_image(self, letter: str) -> str:
        for src, dst in self.omega_map:
            if src == letter:
                return dst
        return letter


_PRES_ATOM = re.compile(r"([A-Za-z]\w*)(?:\^(-?\d+))?$")


def _parse_operator(text: str) -> tuple[tuple[str, int], ...]:
    out = []
    for atom in text.split():
        m = _PRES_ATOM.match(atom)
        if not m:
            raise ValueError("bad operator atom %r" % atom)
        out.append((m.group(1), int(m.group(2) or 1)))
    return tuple(out)


def parse_presentation(text: str) -> Presentation:
    """Text format, one statement per ';':

    ``gens: a, b ;`` declares arc generators;
    ``rel: b[x^-1] a b[x^-1]~ b[x^-1 w x^-1]~ ;`` one relator, where ``[...]``
    is the operator word (space-separated symbols with optional integer
    powers) and a trailing ``~`` inverts the letter;
    ``omega: x = x1, w = y1 ;`` (optional) renames operator symbols to ring
    variables; unmapped symbols keep their names.  ``#`` starts a comment.
    """
    body = " ".join(line.split("#", 1)[0] for line in text.splitlines())
    gens: list[str] = []
    rels: list[GroupWord] = []
    omega: list[tuple[str, str]] = []
    for stmt in body.split(";"):
        stmt = stmt.strip()
        if not stmt:
            continue
        if stmt.startswith("gens:"):
            for name in stmt[5:].split(","):
                name = name.strip()
                if not re.match(r"^[A-Za-z]\w*$", name):
                    raise ValueError("bad generator name %r" % name)
                gens.append(name)
        elif stmt.startswith("rel:"):
            rels.append(_parse_relator(stmt[4:].strip()))
        elif stmt.startswith("omega:"):
            for clause in stmt[6:].split(","):
                src, eq, dst = clause.partition("=")
                if not eq:
                    raise ValueError("bad omega clause %r" % clause)
                omega.append((src.strip(), dst.strip()))
        else:
            raise ValueError("unknown statement %r" % stmt[:20])
    return Presentation(tuple(gens), tuple(rels), tuple(omega))


_REL_LETTER = re.compile(
    r"([A-Za-z]\w*)\s*(?:\[([^\]]*)\])?\s*(~?)\s*")


def _parse_relator(text: str) -> GroupWord:
    out: list[Letter] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _REL_LETTER.match(text, pos)
        if not m:
            raise ValueError("bad relator syntax at %r" % text[pos:pos + 12])
        gen, op, inv = m.group(1), m.group(2), m.group(3)
        out.append(Letter(gen, _parse_operator(op) if op else (),
                          -1 if inv else 1))
        pos = m.end()
    if not out:
        raise ValueError("empty relator")
    return tuple(out)


def carrier_context(p: Presentation) -> RingContext:
    """Commutative group-ring carrier: generators then operator symbols."""
    return RingContext(tuple(p.generators) + p.omega_letters)


def _operator_monomial(ctx: RingContext, op) -> LaurentPoly:
    out = LaurentPoly.one(ctx)
    for sym, e in op:
        out = out * LaurentPoly.variable(ctx, sym, e)
    return out


def _psi(ctx: RingContext, letter: Letter) -> LaurentPoly:
    """Abelianized image: the operator conjugation cancels, leaving gen^e."""
    return LaurentPoly.variable(ctx, letter.gen, letter.exponent)


def fox_derivative(word: GroupWord, gen: str,
                   ctx: RingContext) -> LaurentPoly:
    """Fox derivative in the commutative carrier.

    d(a^gamma)/da = gamma; d((a^gamma)^-1)/da = -gamma * a^-1;
    d(uv)/da = du/da + psi(u) dv/da.
    """
    out = LaurentPoly.zero(ctx)
    prefix = LaurentPoly.one(ctx)
    for letter in word:
        if letter.gen == gen:
            gamma = _operator_monomial(ctx, letter.operator)
            if letter.exponent == 1:
                contrib = gamma
            else:
                contrib = -(gamma * LaurentPoly.variable(ctx, gen, -1))
            out = out + prefix * contrib
        prefix = prefix * _psi(ctx, letter)
    return out


def target_context(p: Presentation) -> RingContext:
    """Ring of the Jacobian: t then the operator symbols' ring names, palette
    names in symplectic order first, then any verbatim leftovers."""
    names = [p.omega_image(s) for s in p.omega_letters]
    genus = 0
    for name in names:
        m = re.match(r"^[xy](\d+)$", name)
        if m:
            genus = max(genus, int(m.group(1)))
    while genus and not all(
            "%s%d" % (c, i) in names
            for i in range(1, genus + 1) for c in "xy"):
        genus -= 1
    ordered: list[str] = []
    for i in range(1, genus + 1):
        for c in ("x%d" % i, "y%d" % i):
            if c in names:
                ordered.append(c)
    for name in names:
        if name not in ordered:
            ordered.append(name)
    return RingContext(("t",) + tuple(ordered), genus=genus)


def jacobian(p: Presentation) -> RingMatrix:
    """phi(psi(d r_i / d a_j)) over the target ring: generators -> t,
    operator symbols -> their ring names."""
    carrier = carrier_context(p)
    target = target_context(p)
    mapping: dict[str, str] = {g: "t" for g in p.generators}
    for s in p.omega_letters:
        mapping[s] = p.omega_image(s)
    ent = {}
    for i, rel in enumerate(p.relators):
        for j, gen in enumerate(p.generators):
            d = fox_derivative(rel, gen, carrier)
            if not d.is_zero:
                ent[(i, j)] = d.substitute(mapping, ctx=target)
    return RingMatrix(target, len(p.relators), len(p.generators),
                      {k: v for k, v in ent.items() if not v.is_zero})


def csw_from_presentation(p: Presentation) -> LaurentPoly:
    """Jacobian-determinant form of the decorated Alexander polynomial."""
    if len(p.relators) != len(p.generators):
        raise ValueError("presentation is not square")
    return jacobian(p).det()
