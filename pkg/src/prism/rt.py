"""Quantum evaluation of decorated diagrams: R-matrices, slice contraction,
and the writhe-normalized closure polynomial.

The representation data lives in an ``RMatrixSet``: a positive/negative
classical crossing pair, a weighted virtual swap, the four bent identities
(cups and caps), the pivotal diagonal ``mu``, and the one-dimensional
decoration action.  ``evaluate_slices`` contracts a planar slice word against
these tables; ``f_polynomial`` closes a decorated braid word (first strand to
the left, the rest to the right) and normalizes by writhe.  ``gap``
specializes the (1|1) evaluation of the homological decoration to the
two-variable Green polynomial of an undecorated virtual braid.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .burau import RingMatrix
from .diagram import (
    ALPHA,
    Lambda,
    OMEGA,
    PCap,
    PCross,
    PCup,
    PId,
    POmega,
    PVirtual,
    PrismaticBraidWord,
    SliceWord,
    braid_to_slices,
    homology_zh,
)
from .ring import (
    LaurentPoly,
    RingContext,
    UnitSpec,
    canonical_form,
)


@dataclass(frozen=True)
class SuperDim:
    """A super vector space dimension (m|n), m even basis slots then n odd."""

    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError("both parts of a superdimension must be >= 1")

    @property
    def total(self) -> int:
        return self.m + self.n

    def parity(self, k: int) -> int:
        """Parity of the 1-indexed basis slot k: 0 for k <= m, else 1."""
        if not 1 <= k <= self.total:
            raise ValueError("basis slot %d out of range" % k)
        return 0 if k <= self.m else 1


def _as_dim(dim) -> SuperDim:
    if isinstance(dim, SuperDim):
        return dim
    m, n = dim
    return SuperDim(m, n)


# ---------------------------------------------------------------------------
# the representation tables
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RMatrixSet:
    """Crossing, bend, and decoration tables for one superdimension.

    ``pos``/``neg``/``virt`` act on ordered pairs of strands (big-endian
    pair index: (i, j) -> (i-1)*d + (j-1)).  ``cup_left``/``cap_right`` are
    the bends whose left leg points up; they carry the ``mu`` weights.
    ``cup_right``/``cap_left`` are their unweighted partners.  ``mu`` is the
    pivotal diagonal recovered by closing a single strand through
    ``cap_right`` and ``cup_left``.
    """

    ctx: RingContext
    dim: SuperDim
    pos: RingMatrix
    neg: RingMatrix
    virt: RingMatrix
    cup_left: RingMatrix
    cup_right: RingMatrix
    cap_left: RingMatrix
    cap_right: RingMatrix
    mu: RingMatrix

    def omega_action(self, color: str, sign: int) -> RingMatrix:
        """Action of one decoration arc: identity on the even slots, the
        color (to the power ``sign``) on the odd slots."""
        if sign not in (1, -1):
            raise ValueError("decoration sign must be +1 or -1")
        z = LaurentPoly.variable(self.ctx, color, sign)
        one = LaurentPoly.one(self.ctx)
        return RingMatrix.diagonal(
            self.ctx, [one] * self.dim.m + [z] * self.dim.n)

    def mu_diagonal(self) -> list[LaurentPoly]:
        return [self.mu.get(k, k) for k in range(self.dim.total)]

    def mu_inverse_diagonal(self) -> list[LaurentPoly]:
        return [p.monomial_inverse() for p in self.mu_diagonal()]


def build_rmatrices(dim, ctx: RingContext) -> RMatrixSet:
    """The tables for superdimension ``dim`` over ``ctx`` (must contain q)."""
    return _build_rmatrices(_as_dim(dim), ctx)


@lru_cache(maxsize=None)
def _build_rmatrices(dim: SuperDim, ctx: RingContext) -> RMatrixSet:
    if ctx.q_index is None:
        raise ValueError("R-matrix context must contain q")
    m, d = dim.m, dim.total
    pos: dict = {}
    neg: dict = {}
    virt: dict = {}
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            col = (i - 1) * d + (j - 1)
            swp = (j - 1) * d + (i - 1)
            sgn = -1 if (i > m and j > m) else 1
            if i == j:
                if i <= m:
                    pos[(col, col)] = "q"
                    neg[(col, col)] = "q^-1"
                    virt[(col, col)] = 1
                else:
                    pos[(col, col)] = "-q^-1"
                    neg[(col, col)] = "-q"
                    virt[(col, col)] = -1
            elif i < j:
                pos[(swp, col)] = sgn
                pos[(col, col)] = "q - q^-1"
                neg[(swp, col)] = sgn
            else:
                pos[(swp, col)] = sgn
                neg[(swp, col)] = sgn
                neg[(col, col)] = "q^-1 - q"
            if i != j:
                if i <= m and j <= m:
                    virt[(swp, col)] = 1
                elif i > m and j > m:
                    virt[(swp, col)] = -1
                elif i <= m:
                    virt[(swp, col)] = "q^-1"
                else:
                    virt[(swp, col)] = "q"
    mu_entries = []
    for k in range(1, d + 1):
        if k <= m:
            mu_entries.append(LaurentPoly.monomial(
                ctx, 1, {"q": -m + dim.n - 1 + 2 * k}))
        else:
            mu_entries.append(LaurentPoly.monomial(
                ctx, -1, {"q": 3 * m + dim.n + 1 - 2 * k}))
    one = LaurentPoly.one(ctx)
    cup_left = RingMatrix.build(
        ctx, d * d, 1, {((k - 1) * (d + 1), 0): 1 for k in range(1, d + 1)})
    cup_right = RingMatrix.build(
        ctx, d * d, 1, {((k - 1) * (d + 1), 0): mu_entries[k - 1].monomial_inverse()
                        for k in range(1, d + 1)})
    cap_left = RingMatrix.build(
        ctx, 1, d * d, {(0, (k - 1) * (d + 1)): 1 for k in range(1, d + 1)})
    cap_right = RingMatrix.build(
        ctx, 1, d * d, {(0, (k - 1) * (d + 1)): mu_entries[k - 1]
                        for k in range(1, d + 1)})
    mu = {}
    for k in range(d):
        for l in range(d):
            acc = LaurentPoly.zero(ctx)
            for j in range(d):
                acc = acc + cap_right.get(0, k * d + j) * cup_left.get(l * d + j, 0)
            if not acc.is_zero:
                mu[(k, l)] = acc
    return RMatrixSet(
        ctx=ctx,
        dim=dim,
        pos=RingMatrix.build(ctx, d * d, d * d, pos),
        neg=RingMatrix.build(ctx, d * d, d * d, neg),
        virt=RingMatrix.build(ctx, d * d, d * d, virt),
        cup_left=cup_left,
        cup_right=cup_right,
        cap_left=cap_left,
        cap_right=cap_right,
        mu=RingMatrix(ctx, d, d, mu),
    )


@lru_cache(maxsize=None)
def _pair_table(rms: RMatrixSet, which: str):
    """Column-sparse view of a pair operator: (in_a, in_b) -> [((out_a, out_b), w)]."""
    mat = getattr(rms, which)
    d = rms.dim.total
    table: dict[tuple[int, int], list] = {}
    for (row, col), p in mat.entries.items():
        key = (col // d, col % d)
        table.setdefault(key, []).append(((row // d, row % d), p))
    return table


# ---------------------------------------------------------------------------
# contexts
# ---------------------------------------------------------------------------

def quantum_context(word: PrismaticBraidWord) -> RingContext:
    """q, the word's palette, and om when an om decoration appears."""
    names = ["q"] + list(word.palette.colors)
    if any(isinstance(t, Lambda) and t.color == OMEGA for t in word.tokens):
        names.append(OMEGA)
    return RingContext(tuple(names), genus=word.genus)


def slice_context(word: SliceWord) -> RingContext:
    """q plus every color a slice word can evaluate through.

    The symplectic block is the largest complete x1,y1,...,xg,yg prefix of the
    colors present; remaining colors follow in sorted order.
    """
    colors: set[str] = set()
    for boundary in word.boundaries:
        colors.update(c for _, c in boundary)
    for sl in word.slices:
        for prim in sl:
            color = getattr(prim, "color", None)
            if color is not None:
                colors.add(color)
    colors.discard(ALPHA)
    genus = 0
    while {"x%d" % (genus + 1), "y%d" % (genus + 1)} <= colors:
        genus += 1
    block = []
    for i in range(1, genus + 1):
        block += ["x%d" % i, "y%d" % i]
    rest = sorted(colors - set(block))
    return RingContext(tuple(["q"] + block + rest), genus=genus)


# ---------------------------------------------------------------------------
# slice evaluation
# ---------------------------------------------------------------------------

def _compile_slice(rms: RMatrixSet, symbols_below, prims):
    """Ops consuming the retained (alpha) digits of a slice's later boundary.

    States travel from the last boundary of a word to the first (an operator
    product applies its rightmost factor first), so each slice consumes
    digits on its later boundary and emits digits on its earlier one.  A
    ``PCup`` therefore pairs the two strands it bounds (``cap_right`` weights
    when its left leg points up, ``cap_left`` otherwise) and a ``PCap`` emits
    a paired couple (``cup_left``, respectively ``cup_right``).  Crossings
    and decoration arcs are only defined over strands of standard
    orientation.
    """
    d = rms.dim.total
    m = rms.dim.m
    one = LaurentPoly.one(rms.ctx)
    ops = []
    pos = 0
    for prim in prims:
        if isinstance(prim, (PId, POmega)):
            syms = symbols_below[pos:pos + 1]
            pos += 1
        elif isinstance(prim, PCap):
            syms = ()
        else:
            syms = symbols_below[pos:pos + 2]
            pos += 2
        if isinstance(prim, PId):
            if syms[0][1] == ALPHA:
                ops.append(("keep",))
        elif isinstance(prim, POmega):
            if syms[0][0] != 1:
                raise ValueError(
                    "decoration arcs over reversed strands are not defined")
            z = LaurentPoly.variable(rms.ctx, prim.color, prim.sign)
            ops.append(("diag", [one] * m + [z] * (d - m)))
        elif isinstance(prim, PCross):
            if syms[0][0] != 1 or syms[1][0] != 1:
                raise ValueError(
                    "classical crossings of reversed strands are not defined;"
                    " rotate through cups and caps instead")
            which = "pos" if prim.sign > 0 else "neg"
            ops.append(("pair", _pair_table(rms, which)))
        elif isinstance(prim, PVirtual):
            retained = [s[1] == ALPHA for s in syms]
            if all(retained):
                if syms[0][0] != 1 or syms[1][0] != 1:
                    raise ValueError(
                        "virtual crossings of reversed strands are not defined")
                ops.append(("pair", _pair_table(rms, "virt")))
            elif any(retained):
                ops.append(("keep",))
        elif isinstance(prim, PCup):
            if prim.color == ALPHA:
                weights = (rms.mu_diagonal() if prim.left_up
                           else [one] * d)
                ops.append(("pair_close", weights))
        else:  # PCap
            if prim.color == ALPHA:
                weights = ([one] * d if prim.left_up
                           else rms.mu_inverse_diagonal())
                ops.append(("pair_open", weights))
    return ops


def _run_ops(ops, state, one, d):
    """All (out_state, weight) branches of one compiled slice on one state."""
    partials = [((), one)]
    pos = 0
    for op in ops:
        kind = op[0]
        if kind == "keep":
            digit = state[pos]
            pos += 1
            partials = [(out + (digit,), w) for out, w in partials]
        elif kind == "diag":
            digit = state[pos]
            pos += 1
            weight = op[1][digit]
            partials = [(out + (digit,), w * weight) for out, w in partials]
        elif kind == "pair":
            key = (state[pos], state[pos + 1])
            pos += 2
            branches = op[1].get(key, ())
            partials = [(out + pair, w * ww)
                        for out, w in partials
                        for pair, ww in branches]
        elif kind == "pair_open":
            partials = [(out + (k, k), w * op[1][k])
                        for out, w in partials
                        for k in range(d)]
        else:  # pair_close
            a, b = state[pos], state[pos + 1]
            pos += 2
            if a != b:
                return []
            weight = op[1][a]
            partials = [(out, w * weight) for out, w in partials]
        if not partials:
            return []
    return partials


def evaluate_slices(word: SliceWord, dim, ctx: RingContext | None = None) -> RingMatrix:
    """The matrix of a slice word on the alpha strands of its boundaries.

    The word denotes an operator product in list order: the first slice is
    the leftmost (outermost) factor, so the matrix has one column per state
    of the final boundary and one row per state of the first.  Palette- and
    om-colored strands carry one-dimensional summands and drop out of the
    tensor product; each alpha strand contributes a factor of dimension m+n
    (basis states indexed big-endian, leftmost strand most significant).  A
    fully closed word yields a 1x1 matrix.
    """
    dim = _as_dim(dim)
    if ctx is None:
        ctx = slice_context(word)
    rms = build_rmatrices(dim, ctx)
    d = dim.total
    one = LaurentPoly.one(ctx)
    boundaries = word.boundaries
    n_last = sum(1 for _, c in boundaries[-1] if c == ALPHA)
    amp: dict[tuple, dict[tuple, LaurentPoly]] = {
        state: {state: one}
        for state in itertools.product(range(d), repeat=n_last)
    }
    for symbols_below, prims in reversed(list(zip(boundaries[1:], word.slices))):
        ops = _compile_slice(rms, symbols_below, prims)
        new_amp: dict[tuple, dict[tuple, LaurentPoly]] = {}
        for state, sources in amp.items():
            for out_state, weight in _run_ops(ops, state, one, d):
                bucket = new_amp.setdefault(out_state, {})
                for in_state, coeff in sources.items():
                    term = coeff * weight
                    if in_state in bucket:
                        term = bucket[in_state] + term
                    if term.is_zero:
                        bucket.pop(in_state, None)
                    else:
                        bucket[in_state] = term
        amp = new_amp
    n_first = sum(1 for _, c in boundaries[0] if c == ALPHA)
    entries: dict[tuple[int, int], LaurentPoly] = {}
    for first_state, sources in amp.items():
        row = _pack(first_state, d)
        for last_state, coeff in sources.items():
            if not coeff.is_zero:
                entries[(row, _pack(last_state, d))] = coeff
    return RingMatrix(ctx, d ** n_first, d ** n_last, entries)


def _pack(digits, d: int) -> int:
    idx = 0
    for digit in digits:
        idx = idx * d + digit
    return idx


def _unpack(idx: int, d: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        idx, digit = divmod(idx, d)
        out.append(digit)
    return tuple(reversed(out))


# ---------------------------------------------------------------------------
# the closure polynomial
# ---------------------------------------------------------------------------

def braid_operator(word: PrismaticBraidWord, dim,
                   ctx: RingContext | None = None) -> RingMatrix:
    """The (m+n)^N endomorphism of a decorated braid word (no closure)."""
    if ctx is None:
        ctx = quantum_context(word)
    return evaluate_slices(braid_to_slices(word), dim, ctx=ctx)


def f_polynomial(word: PrismaticBraidWord, dim,
                 ctx: RingContext | None = None) -> LaurentPoly:
    """Writhe-normalized closure evaluation of a decorated braid word.

    The first strand closes to the left of the diagram and is weighted by
    mu^-1; the remaining strands close to the right with weight mu.  The
    result is scaled by q^(-(m-n) * writhe), which makes it stable under both
    classical stabilizations.
    """
    dim = _as_dim(dim)
    if ctx is None:
        ctx = quantum_context(word)
    rms = build_rmatrices(dim, ctx)
    op = braid_operator(word, dim, ctx=ctx)
    d = dim.total
    n = word.n_alpha
    mu = rms.mu_diagonal()
    mu_inv = rms.mu_inverse_diagonal()
    total = LaurentPoly.zero(ctx)
    for (row, col), p in op.entries.items():
        if row != col:
            continue
        digits = _unpack(row, d, n)
        weight = mu_inv[digits[0]]
        for s in range(1, n):
            weight = weight * mu[digits[s]]
        total = total + p * weight
    shift = -(dim.m - dim.n) * word.writhe()
    return total * LaurentPoly.monomial(ctx, 1, {"q": shift})


def tangle_closure(op: RingMatrix, dim) -> LaurentPoly:
    """Right closure of a single-strand operator: sum of op[k,k] * mu_k.

    For a (1|1) operator diag(a1, a2) this is the closure rule
    q*(a1 - a2) used when a 1-1 tangle has already been reduced to its
    diagonal matrix.
    """
    dim = _as_dim(dim)
    d = dim.total
    if op.rows != d or op.cols != d:
        raise ValueError("expected a %dx%d single-strand operator, got %dx%d"
                         % (d, d, op.rows, op.cols))
    rms = build_rmatrices(dim, op.ctx)
    mu = rms.mu_diagonal()
    total = LaurentPoly.zero(op.ctx)
    for k in range(d):
        total = total + op.get(k, k) * mu[k]
    return total


def base_point_insertion(word: PrismaticBraidWord, strand: int = 1,
                         inverse: bool = False) -> PrismaticBraidWord:
    """Connected sum with a parallel copy of the screen boundary.

    Prepends the boundary relator x1^-1 y1^-1 x1 y1 ... (or its inverse) as
    decorations on one strand: the decoration package an arc picks up when
    dragged once around the boundary of the screen.
    """
    package = []
    for i in range(1, word.palette.genus + 1):
        x, y = "x%d" % i, "y%d" % i
        package += [Lambda(strand, x, -1), Lambda(strand, y, -1),
                    Lambda(strand, x, 1), Lambda(strand, y, 1)]
    if inverse:
        package = [Lambda(t.strand, t.color, -t.sign)
                   for t in reversed(package)]
    return word.replaced(tuple(package) + word.tokens)


# ---------------------------------------------------------------------------
# the two-variable specialization
# ---------------------------------------------------------------------------

GAP_CONTEXT = RingContext(("q", "w"))

GAP_UNITS = UnitSpec.full(GAP_CONTEXT)


def gap(word: PrismaticBraidWord) -> LaurentPoly:
    """Green polynomial of the closure of an undecorated virtual braid word.

    Decorates every virtual crossing with its homological om package,
    evaluates at (1|1) with om as a variable, substitutes q -> q^-1 and
    om -> w^-1, and returns the canonical representative modulo units
    +-q^k w^l.  Classical words evaluate to zero.
    """
    if any(isinstance(t, Lambda) for t in word.tokens):
        raise ValueError("gap expects an undecorated virtual braid word")
    zh = homology_zh(word)
    names: tuple[str, ...] = ("q",)
    if any(isinstance(t, Lambda) for t in zh.tokens):
        names = ("q", OMEGA)
    value = f_polynomial(zh, SuperDim(1, 1), ctx=RingContext(names))
    mapping: dict[str, str] = {"q": "q^-1"}
    if OMEGA in names:
        mapping[OMEGA] = "w^-1"
    return canonical_form(value.substitute(mapping, GAP_CONTEXT), GAP_UNITS)
