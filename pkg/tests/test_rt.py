"""Tests for the quantum evaluation pipeline: R-matrices, slice words,
closure polynomials, and the bridge to the determinant pipeline."""

from __future__ import annotations

import random

import pytest

from prism.burau import csw_det, exterior_power, half_q_gauge, rho
from prism.diagram import (
    ALPHA,
    Chi,
    Lambda,
    OMEGA,
    PCap,
    PCross,
    PCup,
    PId,
    POmega,
    PrismaticBraidWord,
    Sigma,
    SliceWord,
    SymplecticPalette,
    apply_move,
    braid_to_slices,
    find_moves,
    parse_braid,
    strand_flip,
    writhe,
)
from prism.ring import (
    LaurentPoly,
    RingContext,
    UnitSpec,
    canonical_form,
    eq_up_to_unit,
    parse,
)
from prism.rt import (
    GAP_CONTEXT,
    GAP_UNITS,
    SuperDim,
    base_point_insertion,
    braid_operator,
    build_rmatrices,
    evaluate_slices,
    f_polynomial,
    gap,
    quantum_context,
    tangle_closure,
)

import _golden as G

TREFOIL = parse_braid(G.TREFOIL_DSL)
CLASSICAL_TREFOIL = parse_braid(G.CLASSICAL_TREFOIL_DSL)
UNKNOT = parse_braid(G.UNKNOT_DSL)

ALL_DIMS = ((1, 1), (2, 1), (1, 2), (2, 2))


def P(ctx, text):
    return parse(ctx, text)


def random_word(rng, n, g, length):
    palette = SymplecticPalette(g)
    colors = list(palette.colors) + [OMEGA]
    toks = []
    for _ in range(length):
        kinds = ["O"] if n == 1 else ["S", "S", "V", "O"]
        k = rng.choice(kinds)
        if k == "S":
            toks.append(Sigma(rng.randrange(1, n), rng.choice((1, -1))))
        elif k == "V":
            toks.append(Chi(rng.randrange(1, n)))
        else:
            toks.append(Lambda(rng.randrange(1, n + 1), rng.choice(colors),
                               rng.choice((1, -1))))
    return PrismaticBraidWord(n, palette, tuple(toks))


def mat_eq(a, b):
    if a.rows != b.rows or a.cols != b.cols:
        return False
    keys = set(a.entries) | set(b.entries)
    return all(a.get(*k) == b.get(*k) for k in keys)


# ---------------------------------------------------------------------------
# R-matrix data
# ---------------------------------------------------------------------------

def test_superdim_validation():
    assert SuperDim(2, 1).total == 3
    assert SuperDim(2, 1).parity(1) == 0
    assert SuperDim(2, 1).parity(2) == 0
    assert SuperDim(2, 1).parity(3) == 1
    with pytest.raises(ValueError):
        SuperDim(0, 1)
    with pytest.raises(ValueError):
        SuperDim(1, 0)


def test_mu_at_one_one():
    ctx = RingContext(("q",))
    rms = build_rmatrices((1, 1), ctx)
    mu = rms.mu_diagonal()
    assert mu[0] == P(ctx, "q")
    assert mu[1] == P(ctx, "-q")
    inv = rms.mu_inverse_diagonal()
    assert inv[0] == P(ctx, "q^-1")
    assert inv[1] == P(ctx, "-q^-1")


@pytest.mark.parametrize("dim", ALL_DIMS)
def test_crossing_inverses_and_virtual_involution(dim):
    ctx = RingContext(("q",))
    rms = build_rmatrices(dim, ctx)
    d2 = (dim[0] + dim[1]) ** 2
    ident = rms.pos.identity(ctx, d2)
    assert mat_eq(rms.pos * rms.neg, ident)
    assert mat_eq(rms.neg * rms.pos, ident)
    assert mat_eq(rms.virt * rms.virt, ident)


@pytest.mark.parametrize("dim", ALL_DIMS)
def test_yang_baxter_on_three_strands(dim):
    ctx = RingContext(("q",))
    lhs = parse_braid("N=3 g=0 ; S(1) S(2) S(1)")
    rhs = parse_braid("N=3 g=0 ; S(2) S(1) S(2)")
    assert mat_eq(braid_operator(lhs, dim, ctx=ctx),
                  braid_operator(rhs, dim, ctx=ctx))
    lhs = parse_braid("N=3 g=0 ; V(1) V(2) V(1)")
    rhs = parse_braid("N=3 g=0 ; V(2) V(1) V(2)")
    assert mat_eq(braid_operator(lhs, dim, ctx=ctx),
                  braid_operator(rhs, dim, ctx=ctx))
    lhs = parse_braid("N=3 g=0 ; V(1) V(2) S(1)")
    rhs = parse_braid("N=3 g=0 ; S(2) V(1) V(2)")
    assert mat_eq(braid_operator(lhs, dim, ctx=ctx),
                  braid_operator(rhs, dim, ctx=ctx))


def test_omega_action_validation():
    ctx = RingContext(("q", "x1", "y1"), genus=1)
    rms = build_rmatrices((2, 1), ctx)
    act = rms.omega_action("x1", 1)
    assert act.get(0, 0) == P(ctx, "1")
    assert act.get(1, 1) == P(ctx, "1")
    assert act.get(2, 2) == P(ctx, "x1")
    assert rms.omega_action("x1", -1).get(2, 2) == P(ctx, "x1^-1")
    with pytest.raises(ValueError):
        rms.omega_action("x1", 2)


# ---------------------------------------------------------------------------
# slice evaluation semantics
# ---------------------------------------------------------------------------

def snake_words():
    """Both zig-zag words on an up alpha strand, and one on a down strand."""
    a = ALPHA
    snake1 = SliceWord(
        ((1, a),),
        (((PId(1, a), PCup(a, False)), (PCap(a, True), PId(1, a)))))
    snake2 = SliceWord(
        ((1, a),),
        (((PCup(a, True), PId(1, a)), (PId(1, a), PCap(a, False)))))
    rsnake = SliceWord(
        ((-1, a),),
        (((PId(-1, a), PCup(a, True)), (PCap(a, False), PId(-1, a)))))
    return snake1, snake2, rsnake


@pytest.mark.parametrize("dim", ALL_DIMS)
def test_snakes_are_identities(dim):
    ctx = RingContext(("q",))
    d = dim[0] + dim[1]
    for sw in snake_words():
        m = evaluate_slices(sw, dim, ctx=ctx)
        assert m.rows == d and m.cols == d
        assert mat_eq(m, m.identity(ctx, d))


@pytest.mark.parametrize("dim", ALL_DIMS)
def test_loops_give_quantum_superdimension(dim):
    # a closed loop is the trace of the pivotal twist; both orientations
    # agree and (1|1) vanishes identically
    ctx = RingContext(("q",))
    a = ALPHA
    rms = build_rmatrices(dim, ctx)
    expect = LaurentPoly.zero(ctx)
    for p in rms.mu_diagonal():
        expect = expect + p
    left_loop = SliceWord((), (((PCup(a, True),), (PCap(a, True),))))
    right_loop = SliceWord((), (((PCup(a, False),), (PCap(a, False),))))
    for sw in (left_loop, right_loop):
        val = evaluate_slices(sw, dim, ctx=ctx)
        assert val.rows == 1 and val.cols == 1
        assert val.get(0, 0) == expect
    if dim == (1, 1):
        assert expect.is_zero


def test_closure_rule_on_diagonal_tangle():
    # closing a diagonal (1|1) single-strand operator gives q*(a1 - a2)
    ctx = RingContext(("q", "x1", "y1"), genus=1)
    from prism.burau import RingMatrix
    op = RingMatrix.build(ctx, 2, 2, {(0, 0): "x1", (1, 1): "y1"})
    assert tangle_closure(op, (1, 1)) == P(ctx, "q*x1 - q*y1")
    with pytest.raises(ValueError):
        tangle_closure(op, (2, 1))


def test_decorated_loop_traces_with_closure_weights():
    # a decorated right loop is the mu^-1-weighted trace of the decoration:
    # the same weighting f_polynomial applies to the first strand
    ctx = RingContext(("q", "x1", "y1"), genus=1)
    a = ALPHA
    word = SliceWord(
        (),
        (
            (PCup(a, False),),
            (PId(-1, a), POmega("x1", 1)),
            (PCap(a, False),),
        ))
    val = evaluate_slices(word, (1, 1), ctx=ctx)
    assert val.get(0, 0) == P(ctx, "q^-1 - q^-1*x1")


def test_crossing_with_reversed_strand_raises():
    ctx = RingContext(("q",))
    a = ALPHA
    sw = SliceWord(((1, a), (-1, a), (1, a)),
                   ((PCross(1), PId(1, a)),))
    with pytest.raises(ValueError):
        evaluate_slices(sw, (1, 1), ctx=ctx)


def test_braid_operator_matches_slice_path():
    rng = random.Random(11)
    for _ in range(10):
        w = random_word(rng, 2, 1, 4)
        ctx = quantum_context(w)
        direct = braid_operator(w, (1, 1), ctx=ctx)
        via_slices = evaluate_slices(braid_to_slices(w), (1, 1), ctx=ctx)
        assert mat_eq(direct, via_slices)


# ---------------------------------------------------------------------------
# the closure polynomial: printed trefoil family
# ---------------------------------------------------------------------------

def test_trefoil_one_one():
    assert f_polynomial(TREFOIL, (1, 1), ctx=G.CTX_Q1) == P(G.CTX_Q1,
                                                            G.TREFOIL_F11)


def test_trefoil_two_one():
    assert f_polynomial(TREFOIL, (2, 1), ctx=G.CTX_Q1) == P(G.CTX_Q1,
                                                            G.TREFOIL_F21)


def test_trefoil_three_one():
    assert f_polynomial(TREFOIL, (3, 1), ctx=G.CTX_Q1) == P(G.CTX_Q1,
                                                            G.TREFOIL_F31)


def test_trefoil_two_two():
    assert f_polynomial(TREFOIL, (2, 2), ctx=G.CTX_Q1) == P(G.CTX_Q1,
                                                            G.TREFOIL_F22)


def test_unknot_vanishes_at_one_one():
    ctx = RingContext(("q",))
    assert f_polynomial(UNKNOT, (1, 1), ctx=ctx).is_zero


def test_unknot_other_dims_are_superdimension_over_q():
    # N=1 empty word closes strand 1 with mu^-1: the value is tr(mu^-1)
    ctx = RingContext(("q",))
    val = f_polynomial(UNKNOT, (2, 1), ctx=ctx)
    assert val == P(ctx, "1 + q^-2 - q^-2")
    assert val == P(ctx, "1")


# ---------------------------------------------------------------------------
# move invariance
# ---------------------------------------------------------------------------

def test_rotational_move_invariance_sweep():
    rng = random.Random(20260817)
    dims = ((1, 1), (2, 1))
    # one wide context so a rewritten word (which may introduce an om
    # decoration or touch another handle) evaluates in the same ring
    ctx = RingContext(("q", "x1", "y1", "x2", "y2", OMEGA), genus=2)
    for trial in range(25):
        w = random_word(rng, rng.choice((2, 3)), rng.choice((1, 2)),
                        rng.randrange(2, 7))
        moves = find_moves(w)
        if not moves:
            continue
        mv = rng.choice(moves)
        w2 = apply_move(w, mv)
        for dim in dims:
            before = f_polynomial(w, dim, ctx=ctx)
            after = f_polynomial(w2, dim, ctx=ctx)
            assert before == after, (trial, mv.kind, w.to_text(), w2.to_text())


def test_classical_stabilization_exact_all_dims():
    rng = random.Random(31)
    for _ in range(6):
        w = random_word(rng, 2, 1, 4)
        big = PrismaticBraidWord(3, w.palette,
                                 w.tokens + (Sigma(2, rng.choice((1, -1))),))
        for dim in ALL_DIMS:
            ctx = quantum_context(big)
            assert (f_polynomial(w, dim, ctx=ctx)
                    == f_polynomial(big, dim, ctx=ctx))


def test_virtual_stabilization_unit_at_one_one():
    rng = random.Random(32)
    ctx_units = None
    for _ in range(6):
        w = random_word(rng, 2, 1, 4)
        big = PrismaticBraidWord(3, w.palette, w.tokens + (Chi(2),))
        ctx = quantum_context(big)
        a = f_polynomial(w, (1, 1), ctx=ctx)
        b = f_polynomial(big, (1, 1), ctx=ctx)
        spec = UnitSpec(("q",))
        u = eq_up_to_unit(a, b, spec)
        assert u is not None
        if not a.is_zero:
            # the unit is exactly q^{+-1}
            assert u in (P(ctx, "q"), P(ctx, "q^-1"))


def test_base_point_insertion_fixes_value():
    for word in (TREFOIL,):
        for dim in ((1, 1), (2, 1)):
            ctx = quantum_context(word)
            base = f_polynomial(word, dim, ctx=ctx)
            once = f_polynomial(base_point_insertion(word), dim, ctx=ctx)
            twice = f_polynomial(
                base_point_insertion(base_point_insertion(word)),
                dim, ctx=ctx)
            inv = f_polynomial(base_point_insertion(word, inverse=True),
                               dim, ctx=ctx)
            assert base == once == twice == inv


# ---------------------------------------------------------------------------
# bridges to the determinant pipeline
# ---------------------------------------------------------------------------

def test_generator_bridges_two_strands():
    # gauge conjugation D^-1 rho D, wedge, and a q-shift reproduce the
    # two-strand braid operators exactly
    ctx = RingContext(("q",))
    d, dinv = half_q_gauge(ctx, 2)
    for text, shift in (("S(1)", 1), ("S'(1)", -1), ("V(1)", 0)):
        w = parse_braid("N=2 g=0 ; " + text)
        wedge = exterior_power(dinv * rho(w, "q^-2", ctx=ctx) * d)
        q_op = braid_operator(w, (1, 1), ctx=ctx)
        scale = LaurentPoly.monomial(ctx, 1, {"q": shift})
        assert mat_eq(wedge.scaled(scale), q_op)


def test_generator_bridges_decorations_one_strand():
    ctx = RingContext(("q", "x1", "y1"), genus=1)
    for text in ("O(1,x1)", "O'(1,x1)"):
        w = parse_braid("N=1 g=1 ; " + text)
        wedge = exterior_power(rho(w, "q^-2", ctx=ctx))
        q_op = braid_operator(w, (1, 1), ctx=ctx)
        assert mat_eq(wedge, q_op)


def test_wedge_slot_rule_shifts_decorated_strand():
    # on two strands the wedge identification swaps the decoration strands
    ctx = RingContext(("q", "x1", "y1"), genus=1)
    w1 = parse_braid("N=2 g=1 ; O(1,x1)")
    w2 = parse_braid("N=2 g=1 ; O(2,x1)")
    assert mat_eq(exterior_power(rho(w1, "q^-2", ctx=ctx)),
                  braid_operator(w2, (1, 1), ctx=ctx))
    assert mat_eq(exterior_power(rho(w2, "q^-2", ctx=ctx)),
                  braid_operator(w1, (1, 1), ctx=ctx))


def qpow(ctx, k):
    return LaurentPoly.monomial(ctx, 1, {"q": k})


def flip_law_holds(word, ctx):
    """f(word) at (1|1) == (-1)^N q^(writhe+N-2) det(rho(flip word) - I)."""
    f = f_polynomial(word, (1, 1), ctx=ctx)
    det = csw_det(strand_flip(word), "q^-2", ctx=ctx)
    want = det * qpow(ctx, writhe(word) + word.n_alpha - 2)
    if word.n_alpha % 2:
        want = -want
    return f == want


def test_flip_law_trefoil_strict():
    assert flip_law_holds(TREFOIL, G.CTX_Q1)


def test_flip_law_printed_values():
    # the printed determinant and trace displays satisfy the flip law's
    # two-strand instance: F = q^-2 * C(x1 -> y1^-1, y1 -> x1^-1) where
    # C = q^4 * (scaled printed determinant)
    ctx = G.CTX_Q1
    f11 = P(ctx, G.TREFOIL_F11)
    det = P(ctx, G.TREFOIL_CSW_SCALED) * qpow(ctx, 4)
    swapped = det.substitute({"x1": "y1^-1", "y1": "x1^-1"}, ctx)
    assert f11 == swapped * qpow(ctx, -2)


def test_flip_law_random_sweep_strict():
    rng = random.Random(97)
    ctx = RingContext(("q", "x1", "y1", "x2", "y2", OMEGA), genus=2)
    checked = 0
    for _ in range(60):
        w = random_word(rng, rng.choice((1, 2, 3)), 2, rng.randrange(1, 8))
        assert flip_law_holds(w, ctx), w.to_text()
        checked += 1
    assert checked == 60


def test_no_fixed_substitution_bridges_the_pipelines():
    # the literal inversion x,y -> x^-1,y^-1 does NOT relate the printed
    # trefoil values up to any unit +-q^(k/2) * monomial; the flip above is
    # genuinely needed
    ctx = G.CTX_Q1
    f11 = P(ctx, G.TREFOIL_F11)
    det = csw_det(TREFOIL, "q^-2", ctx=ctx)
    inverted = det.substitute({"x1": "x1^-1", "y1": "y1^-1"}, ctx)
    spec = UnitSpec.full(ctx, allow_half_q=True)
    assert eq_up_to_unit(f11, inverted, spec) is None
    assert eq_up_to_unit(f11, det, spec) is None


# ---------------------------------------------------------------------------
# the two-variable specialization
# ---------------------------------------------------------------------------

def test_gap_trefoil_matches_table():
    value = gap(parse_braid("N=2 g=0 ; V(1) S'(1) S'(1)"))
    expect = canonical_form(P(GAP_CONTEXT, G.TREFOIL_GAP), GAP_UNITS)
    assert value == expect


def test_gap_of_classical_words_vanishes():
    for text in ("N=2 g=0 ; S'(1) S'(1) S'(1)",
                 "N=2 g=0 ; S(1)",
                 "N=3 g=0 ; S(1) S(2) S(1)"):
        assert gap(parse_braid(text)).is_zero


def test_gap_rejects_decorated_words():
    with pytest.raises(ValueError):
        gap(TREFOIL)


def test_gap_specializes_the_table_polynomial():
    # G(q,w) is the printed two-variable table at s -> q^-2 w^-1, t -> w,
    # up to the declared unit group
    table = P(G.CTX_ST, G.TREFOIL_GAP_TABLE)
    specialized = table.substitute({"s": "q^-2*w^-1", "t": "w"}, GAP_CONTEXT)
    value = gap(parse_braid("N=2 g=0 ; V(1) S'(1) S'(1)"))
    assert eq_up_to_unit(value, specialized, GAP_UNITS) is not None
