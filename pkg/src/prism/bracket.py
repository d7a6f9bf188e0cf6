"""Surface bracket of decorated diagrams by state summation.

Every classical crossing of a braid-closure diagram is smoothed two ways
(A keeps the channel swept counterclockwise from the over-strand open, B the
other one); virtual crossings, over-arc decorations, and bends pass strands
through unchanged.  Each of the 2^c states leaves a crossing-free diagram
whose loops are traced; a loop picks up one parity per colored over-arc it
runs under, giving a length-2g vector over GF(2).  Loops with zero vector
are worth the classical loop value d = -A^2 - A^-2; the others contribute
the sum of their parity monomials.  The rank test asks whether the parity
vectors appearing in the resulting polynomial span a subspace on which the
mod-2 symplectic form is nondegenerate of full rank 2g, which certifies the
declared genus as minimal.

Classical diagrams make every state's monomial sum empty; by default that
empty sum counts as 1 so the genus-0 bracket is the usual Kauffman bracket,
and ``strict_paper_bracket`` restores the literal empty-sum-is-zero reading.

State enumeration is exponential in the crossing number and is capped at 20
crossings unless the caller raises the cap.  The environment variable
``PRISM_THREADS`` partitions the state stream across worker threads; the
reduction is a commutative sum, so any worker count yields the same
polynomial.
"""

from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .diagram import (_ARITY, ALPHA, PCap, PCross, PCup, PId, POmega,
                      PVirtual, PrismaticBraidWord, SliceWord,
                      SymplecticPalette, braid_to_slices)
from .ring import LaurentPoly, RingContext
from .symplectic import coefficient_vectors, z2_symplectic_rank

MAX_CROSSINGS_DEFAULT = 20

Word = Union[PrismaticBraidWord, SliceWord]


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BracketState:
    """One smoothing of the classical crossings and its traced loops.

    ``choices`` lists the smoothing letter per classical crossing in diagram
    order; ``trivial_loops`` counts loops whose parity vector vanishes, and
    ``decorated_loops`` holds the nonzero length-2g vectors of the rest, in
    the order the loops are first met.
    """

    choices: tuple[str, ...]
    n_A: int
    n_B: int
    trivial_loops: int
    decorated_loops: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if any(c not in ("A", "B") for c in self.choices):
            raise ValueError("smoothing choices must be 'A' or 'B'")
        if self.n_A + self.n_B != len(self.choices):
            raise ValueError("n_A + n_B must equal the crossing count")
        if any(not any(v) for v in self.decorated_loops):
            raise ValueError("decorated loop vectors must be nonzero")


@dataclass(frozen=True)
class _Skeleton:
    """Crossing-independent connectivity of a closed diagram.

    Nodes are the alpha-colored boundary positions; ``edges`` are the arcs
    that exist in every state (with the GF(2) decoration mask each carries),
    and ``crossings`` lists per classical crossing its sign and the node ids
    of its four legs (top pair, then bottom pair).
    """

    genus: int
    n_nodes: int
    edges: tuple[tuple[int, int, int], ...]
    crossings: tuple[tuple[int, int, int, int, int], ...]


def _infer_genus(d: SliceWord) -> int:
    g = 0
    pat = re.compile(r"[xy](\d+)$")
    colors = [c for (_o, c) in d.domain]
    for sl in d.slices:
        for p in sl:
            if isinstance(p, (POmega, PCup, PCap)):
                colors.append(p.color)
    for c in colors:
        m = pat.match(c)
        if m:
            g = max(g, int(m.group(1)))
    return g


def _skeleton(d: Word, genus: Optional[int],
              max_crossings: int) -> _Skeleton:
    if isinstance(d, PrismaticBraidWord):
        d = braid_to_slices(d)
    if genus is None:
        genus = _infer_genus(d)
    bit = {c: i for i, c in enumerate(SymplecticPalette(genus).colors)}

    ids: dict[tuple[int, int], int] = {}
    for k, bnd in enumerate(d.boundaries):
        for p, (_o, c) in enumerate(bnd):
            if c == ALPHA:
                ids[(k, p)] = len(ids)

    edges: list[tuple[int, int, int]] = []
    crossings: list[tuple[int, int, int, int, int]] = []
    for k, sl in enumerate(d.slices):
        at = ot = 0
        for prim in sl:
            ain, aout = _ARITY[type(prim)]
            ins = [(k, at + j) for j in range(ain)]
            outs = [(k + 1, ot + j) for j in range(aout)]
            if isinstance(prim, (PId, POmega)):
                if d.boundaries[k][at][1] == ALPHA:
                    mask = 0
                    if isinstance(prim, POmega) and prim.color in bit:
                        mask = 1 << bit[prim.color]
                    edges.append((ids[ins[0]], ids[outs[0]], mask))
            elif isinstance(prim, PVirtual):
                for i_, o_ in ((0, 1), (1, 0)):
                    if d.boundaries[k][at + i_][1] == ALPHA:
                        edges.append((ids[ins[i_]], ids[outs[o_]], 0))
            elif isinstance(prim, PCross):
                crossings.append((prim.sign, ids[ins[0]], ids[ins[1]],
                                  ids[outs[0]], ids[outs[1]]))
            elif isinstance(prim, PCup):
                if prim.color == ALPHA:
                    edges.append((ids[outs[0]], ids[outs[1]], 0))
            elif isinstance(prim, PCap):
                if prim.color == ALPHA:
                    edges.append((ids[ins[0]], ids[ins[1]], 0))
            at += ain
            ot += aout

    top = tuple(c for (_o, c) in d.boundaries[0])
    bottom = tuple(c for (_o, c) in d.boundaries[-1])
    if top != bottom:
        raise ValueError("right closure needs matching boundary colors: "
                         "%r vs %r" % (top, bottom))
    last = len(d.boundaries) - 1
    for p, c in enumerate(top):
        if c == ALPHA:
            edges.append((ids[(last, p)], ids[(0, p)], 0))

    if len(crossings) > max_crossings:
        raise ValueError(
            "diagram has %d classical crossings; the state sum is capped at "
            "%d (pass max_crossings to raise it)"
            % (len(crossings), max_crossings))
    return _Skeleton(genus, len(ids), tuple(edges), tuple(crossings))


def _trace(sk: _Skeleton, choices: tuple[str, ...]) -> BracketState:
    """Union the arcs of one smoothing and read off the loops."""
    parent = list(range(sk.n_nodes))
    acc = [0] * sk.n_nodes

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def join(a: int, b: int, mask: int):
        ra, rb = find(a), find(b)
        if ra == rb:
            acc[ra] ^= mask
        else:
            parent[rb] = ra
            acc[ra] ^= acc[rb] ^ mask

    for a, b, mask in sk.edges:
        join(a, b, mask)
    n_a = 0
    for choice, (sign, tl, tr, bl, br) in zip(choices, sk.crossings):
        if choice == "A":
            n_a += 1
        if (choice == "A") == (sign > 0):
            join(tl, bl, 0)
            join(tr, br, 0)
        else:
            join(tl, tr, 0)
            join(bl, br, 0)

    trivial = 0
    decorated: list[tuple[int, ...]] = []
    seen: set[int] = set()
    width = 2 * sk.genus
    for v in range(sk.n_nodes):
        r = find(v)
        if r in seen:
            continue
        seen.add(r)
        if acc[r]:
            decorated.append(tuple((acc[r] >> i) & 1 for i in range(width)))
        else:
            trivial += 1
    return BracketState(tuple(choices), n_a, len(choices) - n_a,
                        trivial, tuple(decorated))


def resolve_states(d: Word, genus: Optional[int] = None,
                   max_crossings: int = MAX_CROSSINGS_DEFAULT
                   ) -> Iterator[BracketState]:
    """All 2^c smoothings of the right closure of ``d``, traced lazily."""
    sk = _skeleton(d, genus, max_crossings)
    return (_trace(sk, choices)
            for choices in itertools.product("AB",
                                             repeat=len(sk.crossings)))


# ---------------------------------------------------------------------------
# the bracket polynomial
# ---------------------------------------------------------------------------

def bracket_context(g: int) -> RingContext:
    return RingContext(("A",) + SymplecticPalette(g).colors, genus=g)


def state_variable_sum(state: BracketState, ctx: RingContext,
                       strict: bool = False) -> LaurentPoly:
    """Sum of the parity monomials of the state's decorated loops.

    An empty sum is the unit by default (so undecorated diagrams keep their
    classical value) and zero under the strict reading.
    """
    if not state.decorated_loops:
        return (LaurentPoly.zero(ctx) if strict else LaurentPoly.one(ctx))
    names = ctx.symplectic_names
    total = LaurentPoly.zero(ctx)
    for vec in state.decorated_loops:
        exps = {names[i]: e for i, e in enumerate(vec) if e}
        total = total + LaurentPoly.monomial(ctx, 1, exps)
    return total


def _worker_count() -> int:
    raw = os.environ.get("PRISM_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError("PRISM_THREADS must be an integer, got %r" % raw)
    return max(1, n)


def surface_bracket(d: Word, g: Optional[int] = None,
                    strict_paper_bracket: bool = False,
                    max_crossings: int = MAX_CROSSINGS_DEFAULT,
                    ctx: Optional[RingContext] = None) -> LaurentPoly:
    """State sum  sum_S A^(#A - #B) d^(#trivial) [S]  with d = -A^2 - A^-2.

    The result lives in the ring generated by A and the palette variables,
    whose exponents are already in 0/1 normal form.
    """
    sk = _skeleton(d, g, max_crossings)
    if ctx is None:
        ctx = bracket_context(sk.genus)
    a2 = LaurentPoly.variable(ctx, "A", 2)
    d_loop = -a2 - a2.monomial_inverse()
    c = len(sk.crossings)

    def chunk_sum(start: int, stop: int) -> LaurentPoly:
        powers = {0: LaurentPoly.one(ctx)}
        total = LaurentPoly.zero(ctx)
        for i in range(start, stop):
            choices = tuple("AB"[(i >> (c - 1 - j)) & 1] for j in range(c))
            st = _trace(sk, choices)
            k = st.trivial_loops
            while k not in powers:
                m = max(powers)
                powers[m + 1] = powers[m] * d_loop
            term = (LaurentPoly.variable(ctx, "A", st.n_A - st.n_B)
                    * powers[k]
                    * state_variable_sum(st, ctx, strict_paper_bracket))
            total = total + term
        return total

    n_states = 1 << c
    workers = min(_worker_count(), n_states)
    if workers <= 1:
        return chunk_sum(0, n_states)
    from concurrent.futures import ThreadPoolExecutor
    step = -(-n_states // workers)
    spans = [(lo, min(lo + step, n_states))
             for lo in range(0, n_states, step)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda span: chunk_sum(*span), spans))
    total = LaurentPoly.zero(ctx)
    for part in parts:
        total = total + part
    return total


def dye_kauffman_minimal(b: LaurentPoly, g: int) -> bool:
    """Whether the bracket's parity vectors have full mod-2 rank 2g.

    True certifies that no destabilization can lower the genus of the
    carrying surface below g.
    """
    return z2_symplectic_rank(coefficient_vectors(b, g)) == 2 * g
