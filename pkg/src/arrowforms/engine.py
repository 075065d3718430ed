"""Top-level pipelines.

Four user-facing jobs live here:

  * solve_formula_space: basis of the space of degree-n arrow combinations
    (markings in a finite window) annihilating the kink, bigon, and 6-term
    constraint families; such a combination evaluates to a virtual knot
    invariant through the subset-counting bracket.
  * check_formula / verify_invariance: static and randomized validation of
    a candidate formula.
  * evaluate: the invariant's value on a decorated Gauss diagram.
  * enumerate_Un / phi_gamma / gv_formula: the planar-chain construction of
    invariants from a collection of nonzero homology classes.
"""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from pathlib import Path

from .diagrams import ArrowDiagram, DiagramError, GaussDiagram, arrows_cross
from .lincomb import LinComb, as_lincomb
from .moves import models
from .ratlinalg import DiagramIndexedMatrix, kernel
from .relations import (
    MarkingWindow,
    apply_R_move,
    enumerate_diagrams,
    gen_all_constraints,
    gen_family,
    r1_matches,
    r2_matches,
    r3_full_matches,
    _other_pos,
)


class Formula:
    """A rational combination of arrow diagrams sharing one global marking.

    Pairing it with the subdiagram expansion of a Gauss diagram (see
    `evaluate`) gives a number; the solver produces formulas for which that
    number is a virtual knot invariant."""

    __slots__ = ("vector", "K", "provenance")

    def __init__(self, vector, K, provenance="file"):
        vector = as_lincomb(vector)
        for k in vector.keys():
            if not isinstance(k, ArrowDiagram) or isinstance(k, GaussDiagram):
                raise DiagramError("formula keys must be arrow diagrams")
            if k.K != K:
                raise DiagramError(
                    "formula term has global marking %d, expected %d" % (k.K, K)
                )
        if provenance not in ("solver", "gv", "file"):
            raise ValueError("unknown provenance %r" % (provenance,))
        object.__setattr__(self, "vector", vector)
        object.__setattr__(self, "K", int(K))
        object.__setattr__(self, "provenance", provenance)

    def __setattr__(self, *a):
        raise AttributeError("formulas are immutable")

    def degrees(self):
        return sorted({k.n for k in self.vector.keys()})

    def markings(self):
        return sorted({a[2] for k in self.vector.keys() for a in k.arrows})

    def __eq__(self, other):
        return (
            isinstance(other, Formula)
            and self.K == other.K
            and self.vector == other.vector
        )

    def __hash__(self):
        return hash((self.K, self.vector))

    def __bool__(self):
        return bool(self.vector)

    def __repr__(self):
        return "Formula(K=%d, %d terms, degrees %s)" % (
            self.K, len(self.vector), self.degrees(),
        )


def homogeneous_components(f):
    """Split a formula by degree; the zero formula has no components."""
    return [
        Formula(f.vector.filtered(lambda k: k.n == d), f.K, f.provenance)
        for d in f.degrees()
    ]


# ---------------------------------------------------------------------------
# formula-space solver


def _template_hash():
    """Digest of the local move tables; a table change invalidates caches."""
    blob = repr([sorted(m.key for m in models(k)) for k in ("R1", "R2", "R3")])
    return hashlib.sha256(blob.encode()).hexdigest()


def _cache_path(cache_dir, n, window):
    tag = "window=%s;templates=%s" % (sorted(window.allowed), _template_hash())
    h = hashlib.sha256(tag.encode()).hexdigest()[:16]
    return Path(cache_dir) / str(window.K) / str(n) / ("%s.basis" % h)


MAX_SOLVER_COLUMNS = 200000


def solve_formula_space(n, window, cache_dir=None):
    """Basis of the degree-n formula space over the marking window.

    Constraint rows pair diagrams with the automorphism-rescaled product, so
    the kernel consists exactly of the window-supported combinations
    annihilating every kink, bigon, and 6-term instance.  Instances with
    terms outside the window are restricted to the window columns: that
    restriction is the exact pairing against window-supported vectors."""
    from . import textio

    path = None
    if cache_dir is not None:
        path = _cache_path(cache_dir, n, window)
        if path.exists():
            return textio.parse_basis(path.read_text())
    ncols = len(window.allowed) ** n * _matching_count(n) * 2 ** n if n else 1
    if ncols > MAX_SOLVER_COLUMNS:
        raise MemoryError(
            "estimated column count %d exceeds the solver guard (%d); "
            "basis size is at most the column count" % (ncols, MAX_SOLVER_COLUMNS)
        )
    columns = enumerate_diagrams("arrow", n, window)
    colset = set(columns)
    mat = DiagramIndexedMatrix(columns)
    for inst in gen_all_constraints(n, window, closure=False):
        row = {k: c * k.aut_order() for k, c in inst.vector.items() if k in colset}
        if row:
            mat.add_row(row)
    basis = [Formula(v, window.K, "solver") for v in kernel(mat)]
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(textio.print_basis(basis))
    return basis


def _matching_count(n):
    out = 1
    for k in range(1, 2 * n, 2):
        out *= k
    return out


# ---------------------------------------------------------------------------
# static checking


def _pair_with(f, inst):
    """<f, instance>: coefficients multiplied with the automorphism count."""
    total = Fraction(0)
    for k, c in inst.vector.items():
        cf = f.vector.coeff(k)
        if cf:
            total += cf * c * k.aut_order()
    return total


def normalization_window(window):
    """A window wide enough to normalize triangle rewrites of diagrams
    supported in `window`: rewrite targets carry markings that are signed
    sums of two window markings, shifted by at most the global marking."""
    vals = set(window.allowed) | {0, window.K}
    lo, hi = min(vals), max(vals)
    pad = (hi - lo) + abs(window.K) + 1
    return MarkingWindow(range(lo - pad, hi + pad + 1), window.K)


def check_formula(f, window):
    """Static report on one formula: the three constraint-family pairings,
    the boundary vanishing flag, and a cross-consistency verdict.

    The 6-term pairings and the boundary vanishing are two renderings of the
    same condition, so (given the kink and bigon checks pass) they must
    agree; a disagreement means one of the two machineries is broken."""
    from .boundary import boundary_d

    for m in f.markings():
        if m not in window:
            raise ValueError("formula marking %d outside the window" % m)
    families = {}
    support = list(f.vector.keys())
    for fam in ("ap1", "ap2", "a6t"):
        worst = Fraction(0)
        for deg in f.degrees():
            # only instances meeting f's support can pair nonzero, so
            # anchoring the generator there is exhaustive for this check
            for inst in gen_family(fam, deg, window, closure=False, hosts=support):
                worst = max(worst, abs(_pair_with(f, inst)))
        families[fam] = worst
    d = boundary_d(f.vector, normalization_window(window))
    zero_d = not d
    ap_ok = families["ap1"] == 0 and families["ap2"] == 0
    a6t_zero = families["a6t"] == 0
    consistent = (not ap_ok) or (a6t_zero == zero_d)
    return {
        "families": families,
        "boundary_zero": zero_d,
        "consistent": consistent,
        "passes": ap_ok and a6t_zero and zero_d,
    }


# ---------------------------------------------------------------------------
# evaluation


def evaluate(f, g):
    """Value of the formula on a Gauss diagram.

    Computed as the sum over subdiagrams of g: a subdiagram whose sign-less
    reduction is a term A of f contributes coeff(A) * |Aut(A)| * (product of
    its signs).  One subset scan per degree, no sign expansion."""
    if not isinstance(g, GaussDiagram):
        raise DiagramError("evaluate expects a Gauss diagram")
    if f.K != g.K:
        raise DiagramError(
            "global marking mismatch: formula K=%d, diagram K=%d" % (f.K, g.K)
        )
    total = Fraction(0)
    for deg in f.degrees():
        if deg > g.n:
            continue
        terms = {k: c for k, c in f.vector.items() if k.n == deg}
        for sub in combinations(range(g.n), deg):
            a = g.subdiagram(sub).forget_signs()
            c = terms.get(a)
            if c is None:
                continue
            prod = 1
            for i in sub:
                prod *= g.arrows[i][3]
            total += c * a.aut_order() * prod
    return total


# ---------------------------------------------------------------------------
# randomized move-invariance checking


def _move_census(g, marking_set, max_degree):
    """Counted move blocks mirroring relations.available_moves exactly.

    Insertion moves are counted arithmetically and materialized on demand,
    so one uniform draw never builds the full move list."""
    n = g.n
    M = max(1, 2 * n)
    signs = (1, -1) if g.signed else (0,)
    marks = sorted(marking_set)
    grow = max_degree is None or n < max_degree
    blocks = []
    if grow:
        blocks.append(("R1+", M * 2 * len(signs)))
    r1m = r1_matches(g)
    blocks.append(("R1-", len(r1m)))
    if grow and (max_degree is None or n + 2 <= max_degree):
        blocks.append(("R2+", (M * (M + 1) // 2) * len(models("R2")) * len(marks)))
    mode = "gauss" if g.signed else "plain"
    pairs = []
    seen = set()
    for m in r2_matches(g, mode):
        pair = (m.arrow_map[0], m.arrow_map[1])
        if pair not in seen:
            seen.add(pair)
            pairs.append(pair)
    blocks.append(("R2-", len(pairs)))
    triples = []
    seen = set()
    for m in r3_full_matches(g, mode):
        word = m.model.words[m.side][0]
        first = m.arrow_map[word[0][0]]
        pos = _other_pos(g, first, word[0][1])
        key = (tuple(m.arrow_map[c] for c in (0, 1, 2)), pos)
        if key not in seen:
            seen.add(key)
            triples.append(key)
    blocks.append(("R3", len(triples)))
    return blocks, signs, marks, M, r1m, pairs, triples


def sample_move(g, marking_set, rng, max_degree=None):
    """One move drawn uniformly from available_moves(g, ...), or None.

    Drawing and decoding agree with the explicit enumeration order, so the
    distribution is uniform over the same set."""
    blocks, signs, marks, M, r1m, pairs, triples = _move_census(
        g, marking_set, max_degree
    )
    total = sum(c for (_t, c) in blocks)
    if total == 0:
        return None
    u = rng.randrange(total)
    for tag, count in blocks:
        if u >= count:
            u -= count
            continue
        if tag == "R1+":
            ins, u = divmod(u, 2 * len(signs))
            kind, si = divmod(u, len(signs))
            return ("R1+", ins, (("ht", "th")[kind], signs[si]))
        if tag == "R1-":
            return ("R1-", r1m[u][0], ())
        if tag == "R2+":
            per_site = len(models("R2")) * len(marks)
            site, u = divmod(u, per_site)
            k, mi = divmod(u, len(marks))
            ins1 = 0
            while site >= M - ins1:
                site -= M - ins1
                ins1 += 1
            return ("R2+", (ins1, ins1 + site), (k, marks[mi]))
        if tag == "R2-":
            return ("R2-", pairs[u], ())
        return ("R3", triples[u], ())
    raise AssertionError("unreachable")


def verify_invariance(f, g0, trials, walk_length, seed, marking_set=None, max_degree=None):
    """Random move walks from g0, asserting the evaluation never changes.

    Each trial is an independent walk of `walk_length` uniform moves.  New
    bigon markings are drawn from `marking_set` (default: the formula's
    markings plus 0 and K); kink markings are forced by the move itself.
    Degree is capped to keep walks from drifting into ever larger diagrams.
    Returns a report; a violation records the first offending move."""
    if f.K != g0.K:
        raise DiagramError(
            "global marking mismatch: formula K=%d, diagram K=%d" % (f.K, g0.K)
        )
    if marking_set is None:
        marking_set = set(f.markings()) | {0, f.K}
    if max_degree is None:
        max_degree = g0.n + max(f.degrees(), default=0) + 4
    rng = random.Random(seed)
    base = evaluate(f, g0)
    report = {
        "trials": trials,
        "walk_length": walk_length,
        "value": base,
        "constant": True,
        "violation": None,
    }
    for t in range(trials):
        g = g0
        for step in range(walk_length):
            mv = sample_move(g, marking_set, rng, max_degree)
            if mv is None:
                break
            g = apply_R_move(g, *mv)
            if evaluate(f, g) != base:
                report["constant"] = False
                report["violation"] = {"trial": t, "step": step, "move": mv}
                return report
    return report


# ---------------------------------------------------------------------------
# planar chains


class GammaCollection(tuple):
    """Ordered collection of nonzero integers (homology classes)."""

    def __new__(cls, values):
        vals = tuple(int(v) for v in values)
        if any(v == 0 for v in vals):
            raise ValueError("homology classes must be nonzero")
        return super().__new__(cls, vals)

    @property
    def K(self):
        return sum(self)


def _noncrossing_matchings(points):
    if not points:
        yield ()
        return
    a = points[0]
    for i in range(1, len(points), 2):
        b = points[i]
        for mi in _noncrossing_matchings(points[1:i]):
            for mo in _noncrossing_matchings(points[i + 1:]):
                yield ((a, b),) + mi + mo


def _arc_regions(chords, size):
    """Region id of every circle arc (arc i lies between endpoints i, i+1).

    Two arcs share a region iff they sit on the same side of every chord;
    with non-crossing chords this yields exactly n+1 regions."""
    spans = [tuple(sorted(c)) for c in chords]
    ids = {}
    out = []
    for i in range(size):
        sig = tuple(p <= i < q for (p, q) in spans)
        out.append(ids.setdefault(sig, len(ids)))
    return out


def _left_arcs(t, h, size):
    """Arcs on the left of the arrow t -> h (the side swept from h to t)."""
    return [(h + j) % size for j in range((t - h) % size)]


class ChainPresentation:
    """Planar (non-crossing) oriented chord diagram with its n+1 regions
    numbered 1..n+1, increasing across every arrow from its left side to its
    right side.  Canonical up to rotation; reflections are distinct."""

    __slots__ = ("n", "arrows", "arc_numbers", "_key", "_hash")

    def __init__(self, arrows, arc_numbers):
        arrows = tuple((int(t), int(h)) for (t, h) in arrows)
        n = len(arrows)
        size = 2 * n
        arc_numbers = tuple(int(x) for x in arc_numbers)
        if len(arc_numbers) != size:
            raise DiagramError("expected one region number per arc")
        full = [(t, h, 0, 0) for (t, h) in arrows]
        for i in range(n):
            for j in range(i + 1, n):
                if arrows_cross(full[i], full[j]):
                    raise DiagramError("chords %d and %d intersect" % (i, j))
        regions = _arc_regions(arrows, size) if n else []
        by_region = {}
        for arc, r in enumerate(regions):
            num = arc_numbers[arc]
            if by_region.setdefault(r, num) != num:
                raise DiagramError("inconsistent numbers within one region")
        if sorted(by_region.values()) != list(range(1, n + 2)):
            raise DiagramError("region numbers must be a bijection onto 1..n+1")
        for t, h in arrows:
            if arc_numbers[h] >= arc_numbers[t]:
                raise DiagramError(
                    "numbering must increase from the left of an arrow to its right"
                )
        best = None
        for r in range(max(1, size)):
            word = tuple(sorted(
                (((t - r) % size, (h - r) % size) for (t, h) in arrows),
                key=min,
            ))
            nums = tuple(arc_numbers[(i + r) % size] for i in range(size))
            cand = (word, nums)
            if best is None or cand < best:
                best = cand
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "arrows", best[0])
        object.__setattr__(self, "arc_numbers", best[1])
        object.__setattr__(self, "_key", best)
        object.__setattr__(self, "_hash", hash(best))

    def __setattr__(self, *a):
        raise AttributeError("chain presentations are immutable")

    def __eq__(self, other):
        return isinstance(other, ChainPresentation) and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "ChainPresentation(%r, %r)" % (list(self.arrows), list(self.arc_numbers))

    def left_numbers(self, i):
        """Region numbers on the left of arrow i."""
        t, h = self.arrows[i]
        return sorted({self.arc_numbers[a] for a in _left_arcs(t, h, 2 * self.n)})


@lru_cache(maxsize=None)
def enumerate_Un(n):
    """All chain presentations of degree n, sorted canonically."""
    if n == 0:
        return (ChainPresentation((), ()),)
    size = 2 * n
    out = {}
    for matching in _noncrossing_matchings(list(range(size))):
        for bits in product((0, 1), repeat=n):
            arrows = tuple((p[b], p[1 - b]) for p, b in zip(matching, bits))
            regions = _arc_regions(arrows, size)
            nreg = max(regions) + 1
            for perm in permutations(range(1, n + 2), nreg):
                nums = tuple(perm[r] for r in regions)
                if all(nums[h] < nums[t] for (t, h) in arrows):
                    cp = ChainPresentation(arrows, nums)
                    out[cp._key] = cp
    return tuple(sorted(out.values()))


def phi_gamma(cp, gamma):
    """Arrow diagram of one chain presentation: arrow i is marked with the
    sum of the classes indexed by the region numbers on its left, and the
    circle carries the total sum."""
    gamma = GammaCollection(gamma)
    if len(gamma) != cp.n + 1:
        raise ValueError(
            "expected %d homology classes, got %d" % (cp.n + 1, len(gamma))
        )
    arrows = [
        (t, h, sum(gamma[j - 1] for j in cp.left_numbers(i)), 0)
        for i, (t, h) in enumerate(cp.arrows)
    ]
    return ArrowDiagram(gamma.K, arrows)


def gv_formula(n, gamma):
    """The planar-chain formula: the sum of phi_gamma over all degree-n
    chain presentations.  Coinciding terms merge with their multiplicity."""
    gamma = GammaCollection(gamma)
    if len(gamma) != n + 1:
        raise ValueError("expected %d homology classes, got %d" % (n + 1, len(gamma)))
    vec = LinComb((phi_gamma(cp, gamma), 1) for cp in enumerate_Un(n))
    return Formula(vec, gamma.K, "gv")


def null_pair_formula(a, K):
    """Degree-2 formula built from pairs involving a null-marked arrow.

    Four positive terms pair a mark-0 arrow with a mark-a arrow in the four
    relative positions that share no endpoint ordering, minus one correction
    term pairing marks a and K - a.  Generically the formula has five terms;
    at a = K the two terms with mark multiset {0, K} coincide and cancel,
    leaving three.  Passes check_formula over any window containing the
    marks {0, a, K - a, K}.
    """
    D = lambda arrows: ArrowDiagram(K, arrows)
    vec = LinComb([
        (D([(0, 1, 0, 0), (2, 3, a, 0)]), 1),
        (D([(0, 1, 0, 0), (3, 2, a, 0)]), 1),
        (D([(0, 2, 0, 0), (1, 3, a, 0)]), 1),
        (D([(0, 2, 0, 0), (3, 1, a, 0)]), 1),
        (D([(0, 1, a, 0), (2, 3, K - a, 0)]), -1),
    ])
    return Formula(vec, K, "solver")
