"""Unit tests for braid/slice words, moves, vlk, and the Zh decorations."""

from __future__ import annotations

import random

import pytest

from prism.diagram import (
    ALL_ALPHA,
    Chi,
    Lambda,
    MoveSpec,
    OMEGA,
    PCup,
    PrismaticBraidWord,
    Sigma,
    SliceWord,
    SymplecticPalette,
    apply_move,
    braid_to_slices,
    find_moves,
    homology_class,
    homology_zh,
    homotopy_zh_from_braid,
    parse_braid,
    recolor,
    slices_to_braid,
    vlk,
    writhe,
)
from prism.symplectic import H1Vector

import _golden as G


TREFOIL = parse_braid(G.TREFOIL_DSL)
VIRT_TREFOIL = parse_braid("N=2 g=0 ; V(1) S'(1) S'(1)")


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def test_parse_trefoil_word():
    w = TREFOIL
    assert w.n_alpha == 2 and w.genus == 1
    assert w.tokens == (Lambda(2, "y1", -1), Lambda(1, "x1", 1), Chi(1),
                        Sigma(1, -1), Sigma(1, -1))


def test_parse_empty_and_comments():
    assert parse_braid("N=1 g=0 ;").tokens == ()
    w = parse_braid("# a knot\nN=2 g=1 ;  # header\n O(1,om) # arc\n V(1)")
    assert w.tokens == (Lambda(1, OMEGA, 1), Chi(1))


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_braid("N=2 g=1 ; S(3)")  # crossing index out of range
    with pytest.raises(ValueError):
        parse_braid("N=2 g=0 ; O(3,om)")  # strand out of range
    with pytest.raises(ValueError):
        parse_braid("N=2 g=0 ; O(1,x1)")  # color not in palette
    with pytest.raises(ValueError):
        parse_braid("S(1)")  # missing header
    with pytest.raises(ValueError):
        parse_braid("N=2 g=0 ; Q(1)")
    with pytest.raises(ValueError):
        parse_braid("N=2 g=0 ; S(1,x1)")
    with pytest.raises(ValueError):
        parse_braid("N=2 g=1 ; O(1)")


def test_text_and_json_round_trip():
    for dsl in (G.TREFOIL_DSL, G.CLASSICAL_TREFOIL_DSL, G.UNKNOT_DSL):
        w = parse_braid(dsl)
        assert parse_braid(w.to_text()) == w
        assert PrismaticBraidWord.from_json(w.to_json()) == w


# ---------------------------------------------------------------------------
# writhe, permutation, components
# ---------------------------------------------------------------------------

def test_writhe():
    assert writhe(TREFOIL) == -2
    assert writhe(parse_braid(G.UNKNOT_DSL)) == 0
    assert writhe(parse_braid("N=2 g=0 ; S(1) S'(1)")) == 0
    assert writhe(braid_to_slices(TREFOIL)) == -2


def test_closure_components():
    assert TREFOIL.closure_components() == (1, 1)  # a knot
    assert parse_braid("N=2 g=0 ;").closure_components() == (1, 2)
    hopf = parse_braid("N=2 g=0 ; S(1) S(1)")
    assert hopf.closure_components() == (1, 2)
    assert parse_braid("N=3 g=0 ; S(1) S(2)").closure_components() == \
        (1, 1, 1)


# ---------------------------------------------------------------------------
# slice words
# ---------------------------------------------------------------------------

def test_braid_slices_round_trip_boundaries():
    for dsl in (G.TREFOIL_DSL, G.CLASSICAL_TREFOIL_DSL,
                "N=3 g=2 ; V(2) O(3,y2) S(1)"):
        w = parse_braid(dsl)
        sw = braid_to_slices(w)
        expect = w.n_alpha + 2 * w.genus
        assert len(sw.domain) == expect
        assert sw.domain == sw.codomain
        for b in sw.boundaries:
            assert b == sw.domain
        assert slices_to_braid(sw) == w


def test_omega_words_carry_one_extra_column():
    w = homology_zh(VIRT_TREFOIL)
    sw = braid_to_slices(w)
    assert len(sw.domain) == w.n_alpha + 2 * w.genus + 1
    assert sw.domain[-1] == (1, OMEGA)
    assert slices_to_braid(sw) == w


def test_slice_word_rejects_mismatched_boundaries():
    with pytest.raises(ValueError):
        SliceWord(((1, "a"),), ((PCup("a", True),),))  # arity mismatch


def test_slices_to_braid_rejects_cups():
    sw = SliceWord((), ((PCup("a", True),),))
    with pytest.raises(ValueError):
        slices_to_braid(sw)


# ---------------------------------------------------------------------------
# vlk and homology class
# ---------------------------------------------------------------------------

def test_vlk_surface_over_alpha():
    assert vlk(TREFOIL, "x1", ALL_ALPHA) == 1
    assert vlk(TREFOIL, "y1", ALL_ALPHA) == -1
    assert vlk(TREFOIL, "x1", 1) == 1  # the closure is a knot
    assert vlk(TREFOIL, ALL_ALPHA, "x1") == 0  # surface is never under
    mirror = parse_braid("N=2 g=1 ; O(2,y1) O'(1,x1) V(1)")
    assert vlk(mirror, "x1", ALL_ALPHA) == -1
    assert vlk(mirror, "y1", ALL_ALPHA) == 1


def test_vlk_alpha_over_alpha():
    hopf = parse_braid("N=2 g=0 ; S(1) S(1)")
    assert vlk(hopf, 1, 2) == 1
    assert vlk(hopf, 2, 1) == 1
    neg = parse_braid("N=2 g=0 ; S'(1) S'(1)")
    assert vlk(neg, 1, 2) == -1
    assert vlk(neg, 2, 1) == -1
    split = parse_braid("N=2 g=0 ;")
    assert vlk(split, 1, 2) == 0
    assert vlk(TREFOIL, 1, 1) == -2  # signed self-crossings


def test_vlk_unknown_component():
    with pytest.raises(ValueError):
        vlk(TREFOIL, "x2", ALL_ALPHA)
    with pytest.raises(ValueError):
        vlk(TREFOIL, 3, ALL_ALPHA)


def test_vlk_additive_over_concatenation():
    w1 = parse_braid("N=2 g=1 ; O(1,x1) O'(2,y1)")
    w2 = parse_braid("N=2 g=1 ; O(2,x1) O(1,y1) O(1,x1)")
    joined = w1.replaced(w1.tokens + w2.tokens)
    for c in ("x1", "y1"):
        assert vlk(joined, c, ALL_ALPHA) == \
            vlk(w1, c, ALL_ALPHA) + vlk(w2, c, ALL_ALPHA)


def test_homology_class_values():
    assert homology_class(parse_braid("N=2 g=0 ; S(1) S(1)")) == \
        H1Vector(0, ())
    assert homology_class(parse_braid("N=1 g=1 ; O(1,x1)")) == \
        H1Vector(1, (-1, 0))
    assert homology_class(TREFOIL) == H1Vector(1, (-1, 1))
    balanced = parse_braid("N=2 g=1 ; O(1,x1) V(1) O'(2,x1)")
    assert homology_class(balanced) == H1Vector(1, (0, 0))


# ---------------------------------------------------------------------------
# decorations
# ---------------------------------------------------------------------------

def test_homology_zh_classical_input_unchanged():
    w = parse_braid(G.CLASSICAL_TREFOIL_DSL)
    assert homology_zh(w) == w


def test_homology_zh_trefoil_pattern():
    z = homology_zh(VIRT_TREFOIL)
    assert z.tokens == (Lambda(1, OMEGA, -1), Lambda(2, OMEGA, 1), Chi(1),
                        Sigma(1, -1), Sigma(1, -1))


def test_homology_zh_two_crossings_insert_four_arcs():
    w = parse_braid("N=3 g=0 ; V(1) V(2)")
    z = homology_zh(w)
    arcs = [t for t in z.tokens if isinstance(t, Lambda)]
    assert len(arcs) == 4
    assert all(t.color == OMEGA for t in arcs)
    # each pair is balanced, so the decorated diagram is homologically blank
    assert sum(t.sign for t in arcs) == 0


def test_homology_zh_rejects_decorated_words():
    with pytest.raises(ValueError):
        homology_zh(TREFOIL)


def test_homotopy_zh_trefoil():
    g, z = homotopy_zh_from_braid(VIRT_TREFOIL)
    assert g == 1 and z.genus == 1
    assert z.tokens == (Lambda(1, "x1", -1), Lambda(2, "y1", 1), Chi(1),
                        Sigma(1, -1), Sigma(1, -1))


def test_homotopy_zh_identification_matches_homology_zh():
    for dsl in ("N=2 g=0 ; V(1) S'(1) S'(1)",
                "N=3 g=0 ; V(1) S(2) V(2) S'(1) V(1)"):
        vb = parse_braid(dsl)
        g, z = homotopy_zh_from_braid(vb)
        ident = {c: OMEGA for k in range(1, g + 1)
                 for c in ("x%d" % k, "y%d" % k)}
        collapsed = recolor(z, ident, palette=SymplecticPalette(0))
        assert collapsed.tokens == homology_zh(vb).tokens


def test_homotopy_zh_no_virtual_crossings():
    w = parse_braid(G.CLASSICAL_TREFOIL_DSL)
    assert homotopy_zh_from_braid(w) == (0, w)


# ---------------------------------------------------------------------------
# moves
# ---------------------------------------------------------------------------

def test_r2_insert_then_delete_round_trip():
    w = TREFOIL
    ins = MoveSpec("R2", 2, "reverse", ("S", 1, 1))
    grown = apply_move(w, ins)
    assert len(grown.tokens) == len(w.tokens) + 2
    assert MoveSpec("R2", 2) in find_moves(grown)
    assert apply_move(grown, MoveSpec("R2", 2)) == w


def test_lambda_r2_pair():
    w = parse_braid("N=2 g=1 ; O(1,x1) O'(1,x1)")
    assert apply_move(w, MoveSpec("R2", 0)).tokens == ()
    w2 = apply_move(w, MoveSpec("R2", 1, "reverse", ("O", 2, "y1", -1)))
    assert w2.tokens[1] == Lambda(2, "y1", -1)


def test_vt2_round_trip():
    w = parse_braid("N=2 g=0 ; V(1) V(1)")
    assert apply_move(w, MoveSpec("VT2", 0)).tokens == ()
    assert apply_move(parse_braid("N=2 g=0 ;"),
                      MoveSpec("VT2", 0, "reverse", (1,))) == w


def test_r3_and_vt3_rewrites():
    w = parse_braid("N=3 g=0 ; S(1) S(2) S(1)")
    out = apply_move(w, MoveSpec("R3", 0))
    assert out.tokens == (Sigma(2, 1), Sigma(1, 1), Sigma(2, 1))
    assert out.permutation() == w.permutation()
    v = parse_braid("N=3 g=0 ; V(2) V(1) V(2)")
    assert apply_move(v, MoveSpec("VT3", 0)).tokens == \
        (Chi(1), Chi(2), Chi(1))
    with pytest.raises(ValueError):
        apply_move(parse_braid("N=3 g=0 ; S(1) S'(2) S(1)"),
                   MoveSpec("R3", 0))


def test_vt5_mixed_rewrites():
    w = parse_braid("N=3 g=0 ; S'(1) V(2) V(1)")
    out = apply_move(w, MoveSpec("VT5", 0))
    assert out.tokens == (Chi(2), Chi(1), Sigma(2, -1))
    assert apply_move(out, MoveSpec("VT5", 0)) == w
    w2 = parse_braid("N=3 g=0 ; V(1) V(2) S(1)")
    out2 = apply_move(w2, MoveSpec("VT5", 0))
    assert out2.tokens == (Sigma(2, 1), Chi(1), Chi(2))
    assert apply_move(out2, MoveSpec("VT5", 0)) == w2


def test_far_commutation_kinds():
    w = parse_braid("N=4 g=1 ; S(1) S'(3) O(2,x1) O(4,y1) V(1) O(1,om)")
    moves = find_moves(w)
    assert MoveSpec("VT4", 0) in moves          # S(1) vs S'(3)
    assert MoveSpec("VT6", 2) in moves          # arcs on strands 2 and 4
    assert MoveSpec("VT7", 3) in moves          # arc 4 vs V(1)
    out = apply_move(w, MoveSpec("VT4", 0))
    assert out.tokens[0] == Sigma(3, -1) and out.tokens[1] == Sigma(1, 1)
    with pytest.raises(ValueError):
        apply_move(w, MoveSpec("VT4", 4))       # V(1) vs O(1,om) overlap


def test_semi_welded_slides():
    w = parse_braid("N=2 g=1 ; O(1,x1) V(1)")
    out = apply_move(w, MoveSpec("semi-welded", 0))
    assert out.tokens == (Chi(1), Lambda(2, "x1", 1))
    assert apply_move(out, MoveSpec("semi-welded", 0)) == w
    # the classical crossing never lets an arc through
    bad = parse_braid("N=2 g=1 ; O(1,x1) S(1)")
    with pytest.raises(ValueError):
        apply_move(bad, MoveSpec("semi-welded", 0))
    assert not any(m.kind == "semi-welded" for m in find_moves(bad))


def test_commutator_round_trip():
    w = parse_braid("N=2 g=1 ; V(1)")
    grown = apply_move(w, MoveSpec("commutator", 1, "reverse", (2,)))
    assert [(t.color, t.sign) for t in grown.tokens[1:]] == \
        [("x1", -1), ("y1", -1), ("x1", 1), ("y1", 1)]
    assert homology_class(grown) == homology_class(w)
    back = apply_move(grown, MoveSpec("commutator", 1, "apply", (2,)))
    assert back == w
    assert MoveSpec("commutator", 1, "apply", (2,)) in find_moves(grown)


def test_r1_stabilizations():
    w = parse_braid("N=2 g=0 ; S(1)")
    up = apply_move(w, MoveSpec("classical-R1", 1, "apply", (-1,)))
    assert up.n_alpha == 3 and up.tokens[-1] == Sigma(2, -1)
    assert writhe(up) == writhe(w) - 1
    down = apply_move(up, MoveSpec("classical-R1", 1, "reverse", (-1,)))
    assert down == w
    vup = apply_move(w, MoveSpec("virtual-R1", 1, "apply"))
    assert vup.n_alpha == 3 and vup.tokens[-1] == Chi(2)
    assert apply_move(vup, MoveSpec("virtual-R1", 1, "reverse")) == w
    assert not MoveSpec("virtual-R1", 1).rotational_safe
    assert not MoveSpec("classical-R1", 1).rotational_safe
    assert MoveSpec("R2", 0).rotational_safe
    r1_moves = [m for m in find_moves(up, include_r1=True)
                if m.kind.endswith("R1")]
    assert MoveSpec("classical-R1", 1, "reverse", (-1,)) in r1_moves
    assert all(m.kind.endswith("R1") is False for m in find_moves(up))


def test_apply_move_on_slice_words():
    sw = braid_to_slices(parse_braid("N=2 g=0 ; S(1) S'(1)"))
    out = apply_move(sw, MoveSpec("R2", 0))
    assert isinstance(out, SliceWord)
    assert slices_to_braid(out).tokens == ()


def random_walk(word, rng, steps, max_len=14):
    for _ in range(steps):
        moves = [m for m in find_moves(word) if m.rotational_safe]
        if len(word.tokens) >= max_len:
            moves = [m for m in moves if m.direction == "apply"]
        if not moves:
            break
        kinds = sorted({m.kind for m in moves})
        kind = rng.choice(kinds)
        word = apply_move(word, rng.choice([m for m in moves
                                            if m.kind == kind]))
    return word


def test_moves_preserve_diagram_invariants():
    rng = random.Random(20260817)
    seeds = [TREFOIL, VIRT_TREFOIL,
             parse_braid("N=3 g=2 ; O(1,x2) V(2) S'(1) O'(3,y1) V(1)")]
    for base in seeds:
        base_class = homology_class(base)
        base_comp = len(set(base.closure_components()))
        base_writhe = writhe(base)
        for _ in range(12):
            w = random_walk(base, rng, 25)
            assert homology_class(w) == base_class
            assert len(set(w.closure_components())) == base_comp
            assert writhe(w) == base_writhe
