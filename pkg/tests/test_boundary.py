"""The boundary operator, triangle rewrites, and the six-term duality."""

import pytest

from arrowforms.boundary import (
    NormalizationError,
    a6t_based,
    based_6T_pairing_check,
    boundary_d,
    d_based,
    epsilon,
    eta,
    is_nice,
    normalize_triangle,
    triangle_relation,
)
from arrowforms.diagrams import (
    ArrowDiagram,
    BasedDiagram,
    DegenerateDiagram,
    arrows_cross,
)
from arrowforms.engine import normalization_window
from arrowforms.lincomb import LinComb
from arrowforms.relations import MarkingWindow, gen_family

from conftest import random_arrows, random_based_diagram, seeded

WIDE = normalization_window(MarkingWindow(range(-2, 4), 2))


def _random_monotonic(rng, n, K, marks):
    while True:
        b = random_based_diagram(rng, n, K, marks)
        dd = DegenerateDiagram(b)
        if dd.is_monotonic():
            return dd


def test_nice_basing_and_signs():
    d = ArrowDiagram(2, [(0, 2, 1, 0), (1, 3, 1, 0)])
    for arc in range(4):
        b = BasedDiagram(d, arc)
        assert is_nice(b)
        assert eta(b) == 1  # the two chords cross
        assert epsilon(b) in (1, -1)


def test_not_nice_basing_maps_to_zero():
    d = ArrowDiagram(2, [(0, 1, 1, 0), (2, 3, 1, 0)])
    # the arc between positions 0 and 1 is bounded by one arrow twice
    b = BasedDiagram(d, 0)
    assert not is_nice(b)
    assert d_based(b) == LinComb.zero()
    with pytest.raises(Exception):
        eta(b)


def test_triangle_relation_structure():
    rng = seeded(31)
    checked = 0
    for _ in range(400):
        b = random_based_diagram(rng, rng.randint(2, 3), 2, marks=(0, 1, 2))
        dd = DegenerateDiagram(b)
        if dd.is_monotonic():
            continue
        try:
            rel = triangle_relation(dd, WIDE)
        except NormalizationError:
            continue
        # the relation rewrites dd into at most two monotonic diagrams
        assert rel.coeff(dd) == 1
        rest = rel - LinComb.single(dd)
        assert len(rest) <= 2
        for k in rest.keys():
            assert k.is_monotonic()
        checked += 1
    assert checked > 100


def test_normalize_triangle_fixes_monotonic_terms():
    rng = seeded(32)
    for _ in range(100):
        dd = _random_monotonic(rng, rng.randint(2, 3), 2, (0, 1, 2))
        assert normalize_triangle(LinComb.single(dd), WIDE) == LinComb.single(dd)


def test_boundary_lands_in_the_monotonic_basis():
    rng = seeded(33)
    for _ in range(60):
        d = ArrowDiagram(2, random_arrows(rng, rng.randint(2, 3), marks=(0, 1, 2)))
        out = boundary_d(LinComb.single(d), WIDE)
        for k in out.keys():
            assert k.is_monotonic()
            assert k.n == d.n


def test_duality_on_random_pairs():
    rng = seeded(34)
    checked = 0
    while checked < 150:
        n = rng.randint(2, 3)
        b = random_based_diagram(rng, n, 2, marks=(0, 1, 2))
        dd = _random_monotonic(rng, n, 2, (0, 1, 2))
        assert based_6T_pairing_check(b, dd, WIDE)
        checked += 1


def test_based_six_term_noncrossing_structure():
    # each instance has six terms; the terms whose arrows are pairwise
    # non-crossing come in threes (one per pair slot) or not at all
    w = MarkingWindow({1, 2, 3, 4}, 5)
    insts = gen_family("based6t", 2, w)
    assert insts
    for inst in insts:
        assert len(inst.vector) == 6
        nc = sum(
            1
            for b in inst.vector.keys()
            if all(
                not arrows_cross(b.arrows[i], b.arrows[j])
                for i in range(b.n)
                for j in range(i + 1, b.n)
            )
        )
        assert nc in (0, 3)


def test_triangle_family_instances_are_window_supported():
    w = MarkingWindow({1, 2, 3, 4}, 5)
    for inst in gen_family("triangle", 2, w):
        for k in inst.vector.keys():
            assert all(a[2] in w.allowed for a in k.arrows)
