"""Formula solving, evaluation, move walks, and planar chain formulas."""

from fractions import Fraction

import pytest

from arrowforms import engine
from arrowforms.diagrams import ArrowDiagram, DiagramError, GaussDiagram
from arrowforms.engine import (
    ChainPresentation,
    Formula,
    GammaCollection,
    check_formula,
    enumerate_Un,
    evaluate,
    gv_formula,
    homogeneous_components,
    normalization_window,
    null_pair_formula,
    phi_gamma,
    sample_move,
    solve_formula_space,
    verify_invariance,
)
from arrowforms.lincomb import LinComb
from arrowforms.maps import double_angle
from arrowforms.relations import MarkingWindow, available_moves

from conftest import random_gauss_diagram, seeded


def test_formula_accessors():
    f = null_pair_formula(2, 5)
    assert list(f.degrees()) == [2]
    assert set(f.markings()) == {0, 2, 3}
    assert homogeneous_components(f) == [f]
    assert f == Formula(f.vector, 5, f.provenance)


def test_solver_small_window():
    w = MarkingWindow({1, 2}, 3)
    basis = solve_formula_space(2, w)
    assert len(basis) == 2
    for f in basis:
        assert check_formula(f, w)["passes"]


def test_solver_cache_round_trip(tmp_path):
    w = MarkingWindow({1, 2}, 3)
    first = solve_formula_space(2, w, cache_dir=str(tmp_path))
    files = list(tmp_path.rglob("*.basis"))
    assert len(files) == 1
    payload = files[0].read_bytes()
    second = solve_formula_space(2, w, cache_dir=str(tmp_path))
    assert second == first
    assert files[0].read_bytes() == payload


def test_check_formula_rejects_out_of_window_marks():
    f = null_pair_formula(2, 5)
    with pytest.raises(ValueError):
        check_formula(f, MarkingWindow({1, 2}, 5))


def test_check_formula_fails_non_invariant():
    bad = Formula(LinComb.single(ArrowDiagram(5, [(0, 1, 1, 0), (2, 3, 2, 0)])), 5)
    rep = check_formula(bad, MarkingWindow({1, 2, 3, 4}, 5))
    assert not rep["passes"]
    assert rep["consistent"]


def test_evaluate_matches_bracket_oracle():
    rng = seeded(51)
    f = gv_formula(2, (1, 1, 3))
    for _ in range(60):
        g = random_gauss_diagram(rng, rng.randint(1, 4), 5, marks=(0, 1, 2, 3, 4, 5))
        expected = sum(
            (c * double_angle(a, g) for a, c in f.vector.items()),
            Fraction(0),
        )
        assert evaluate(f, g) == expected


def test_evaluate_requires_matching_global_marking():
    f = gv_formula(2, (1, 1, 1))
    with pytest.raises(DiagramError):
        evaluate(f, GaussDiagram(2, [(0, 2, 1, 1), (1, 3, 1, 1)]))
    with pytest.raises(DiagramError):
        evaluate(f, ArrowDiagram(3, [(0, 2, 1, 0), (1, 3, 1, 0)]))


def test_sampled_moves_cover_the_available_set():
    rng = seeded(52)
    for _ in range(12):
        g = random_gauss_diagram(rng, rng.randint(1, 3), 2, marks=(0, 1, 2))
        avail = set(available_moves(g, {0, 1, 2}, max_degree=5))
        drawn = set()
        for _k in range(60 * max(1, len(avail))):
            mv = sample_move(g, {0, 1, 2}, rng, max_degree=5)
            drawn.add(mv)
            if drawn == avail:
                break
        assert drawn == avail


def test_invariance_walks_stay_constant():
    f = gv_formula(2, (1, 1, 1))
    g0 = GaussDiagram(3, [(0, 2, 1, 1), (1, 3, 2, -1)])
    rep = verify_invariance(f, g0, trials=5, walk_length=12, seed=3)
    assert rep["constant"]
    assert rep["value"] == evaluate(f, g0)


def test_invariance_walk_detects_a_fake():
    # counting mark-0 arrows is not invariant: a kink insertion changes it
    bad = Formula(LinComb.single(ArrowDiagram(3, [(0, 1, 0, 0)])), 3)
    g0 = GaussDiagram(3, [(0, 2, 1, 1), (1, 3, 2, -1)])
    rep = verify_invariance(bad, g0, trials=20, walk_length=12, seed=3)
    assert not rep["constant"]
    assert rep["violation"] is not None


def test_chain_presentation_counts():
    assert len(enumerate_Un(1)) == 1
    assert len(enumerate_Un(2)) == 3
    assert len(set(enumerate_Un(3))) == len(enumerate_Un(3))


def test_chain_presentation_validation():
    # crossing chords are not a chain presentation
    with pytest.raises(ValueError):
        ChainPresentation(((2, 0), (3, 1)), (1, 2, 1, 2))
    # numbering must decrease from tail side to head side
    good = enumerate_Un(2)[0]
    with pytest.raises(ValueError):
        ChainPresentation(good.arrows, tuple(reversed(good.arc_numbers)))


def test_gamma_collection_validation():
    assert GammaCollection((1, -2, 3)).K == 2
    with pytest.raises(ValueError):
        GammaCollection((1, 0, 2))
    with pytest.raises(ValueError):
        gv_formula(2, (1, 1))


def test_phi_gamma_mark_decoding():
    # weights 1/10/100 make the left-region sums readable in decimal: each
    # term's marks reveal which region numbers lie left of each arrow
    f = gv_formula(2, (1, 10, 100))
    assert f.K == 111
    mark_sets = sorted(
        tuple(sorted(a[2] for a in d.arrows)) for d in f.vector.keys()
    )
    assert mark_sets == [(1, 10), (1, 11), (11, 101)]


def test_gv_formula_passes_static_checks():
    for gamma in ((1, 1, 1), (1, 1, 3), (2, -1, 1)):
        f = gv_formula(2, gamma)
        w = MarkingWindow(set(f.markings()) | {0, f.K}, f.K)
        assert check_formula(f, w)["passes"]


def test_null_pair_formula_term_counts():
    assert len(null_pair_formula(2, 5).vector) == 5
    assert len(null_pair_formula(5, 5).vector) == 3
    f = null_pair_formula(1, 3)
    w = MarkingWindow(set(f.markings()) | {0, f.K}, f.K)
    assert check_formula(f, w)["passes"]


def test_normalization_window_is_generous():
    w = MarkingWindow({1, 2, 3, 4}, 5)
    wide = normalization_window(w)
    vals = set(wide.values())
    for a in w.values():
        for b in w.values():
            assert a + b - w.K in vals
            assert a + b in vals
