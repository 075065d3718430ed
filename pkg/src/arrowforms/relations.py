"""Relation families over a finite marking window.

Every relation instance is produced by matching a local move model
(module `moves`) inside a concrete diagram and splicing the other terms of
the model into the same host.  The host is everything the local picture
does not see: its arrows keep their decorations across all terms of an
instance.

Families (CLI tags):

  p1, p2, p2h1, p2h2, p3      relations among Gauss diagrams
  g6t, g2t                    homogeneous projections of p3
  ap1, ap2, a6t, a2t          arrow-diagram counterparts
  triangle, based6t           relations among degenerate/based diagrams

The same matching machinery drives Reidemeister rewriting (apply_R_move)
and the random walks used for invariance testing.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product

from .diagrams import ArrowDiagram, DiagramError, GaussDiagram
from .lincomb import LinComb
from .maps import subdiagram_expand_I
from .moves import HEAD, TAIL, models


class MarkingWindow:
    """Finite set of allowed arrow markings plus the global marking K."""

    __slots__ = ("allowed", "K")

    def __init__(self, allowed, K):
        self.allowed = frozenset(int(x) for x in allowed)
        self.K = int(K)
        if not self.allowed:
            raise ValueError("empty marking window")

    @classmethod
    def parse(cls, text, K):
        text = text.strip()
        if ".." in text:
            lo, hi = text.split("..", 1)
            return cls(range(int(lo), int(hi) + 1), K)
        return cls((int(t) for t in text.split(",") if t.strip()), K)

    def __contains__(self, m):
        return m in self.allowed

    def __eq__(self, other):
        return (
            isinstance(other, MarkingWindow)
            and self.allowed == other.allowed
            and self.K == other.K
        )

    def __hash__(self):
        return hash((self.allowed, self.K))

    def __repr__(self):
        return "MarkingWindow(%s, K=%d)" % (sorted(self.allowed), self.K)

    def values(self):
        return tuple(sorted(self.allowed))

    def complement_closed(self):
        """True iff the window is stable under x -> K - x."""
        return all(self.K - x in self.allowed for x in self.allowed)


FAMILY_SPECIES = {
    "p1": "gauss", "p2": "gauss", "p2h1": "gauss", "p2h2": "gauss",
    "p3": "gauss", "g6t": "gauss", "g2t": "gauss",
    "ap1": "arrow", "ap2": "arrow", "a6t": "arrow", "a2t": "arrow",
    "triangle": "degenerate", "based6t": "based",
}


class RelationInstance:
    """One concrete relation vector, deduplicated up to a global scalar."""

    __slots__ = ("family", "vector", "_key")

    def __init__(self, family, vector):
        if not vector:
            raise ValueError("relation instance must be a nonzero vector")
        self.family = family
        self.vector = vector
        norm = vector.normalized()
        self._key = tuple(sorted(norm.terms.items(), key=lambda t: t[0]))

    def key(self):
        return self._key

    def __repr__(self):
        return "RelationInstance(%s, %r)" % (self.family, self.vector)


# ---------------------------------------------------------------------------
# diagram enumeration


def _chord_matchings(points):
    """All perfect matchings of the list `points` as tuples of pairs."""
    if not points:
        yield ()
        return
    a = points[0]
    for i in range(1, len(points)):
        b = points[i]
        rest = points[1:i] + points[i + 1:]
        for sub in _chord_matchings(rest):
            yield ((a, b),) + sub


def enumerate_diagrams(species, n, window):
    """Sorted list of all canonical diagrams of one degree over the window."""
    cls = GaussDiagram if species == "gauss" else ArrowDiagram
    if n == 0:
        return [cls(window.K)]
    marks = window.values()
    signs = ((1,), (-1,)) if species == "gauss" else ((0,),)
    out = set()
    for matching in _chord_matchings(list(range(2 * n))):
        for orient in product((0, 1), repeat=n):
            ends = [(p[o], p[1 - o]) for p, o in zip(matching, orient)]
            for ms in product(marks, repeat=n):
                for ss in product(signs, repeat=n):
                    out.add(cls(window.K, [(t, h, m, s[0]) for (t, h), m, s in zip(ends, ms, ss)]))
    return sorted(out)


# ---------------------------------------------------------------------------
# marking arithmetic: solve gap classes from visible markings


def _solve_gaps(model, present, marks, K):
    """Solve the gap classes from the markings of the present crossings.

    Returns None when inconsistent, else (particular, kernel_basis) over the
    rationals.  The constraint matrices have the consecutive-ones property,
    so rational consistency with integer data implies integer solutions.
    """
    ns = model.nslots
    rows = [([Fraction(1)] * ns, Fraction(K))]
    for c in present:
        coeffs = [Fraction(1) if s in model.markexpr[c] else Fraction(0) for s in range(ns)]
        rows.append((coeffs, Fraction(marks[c])))
    # gaussian elimination on at most 3 unknowns
    mat = [list(co) + [r] for co, r in rows]
    pivots = []
    rix = 0
    for col in range(ns):
        piv = next((i for i in range(rix, len(mat)) if mat[i][col]), None)
        if piv is None:
            continue
        mat[rix], mat[piv] = mat[piv], mat[rix]
        mat[rix] = [x / mat[rix][col] for x in mat[rix]]
        for i in range(len(mat)):
            if i != rix and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rix])]
        pivots.append(col)
        rix += 1
    for i in range(rix, len(mat)):
        if mat[i][ns]:
            return None
    part = [Fraction(0)] * ns
    for r, col in enumerate(pivots):
        part[col] = mat[r][ns]
    free = [c for c in range(ns) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ns
        v[f] = Fraction(1)
        for r, col in enumerate(pivots):
            v[col] = -mat[r][f]
        basis.append(v)
    return part, basis


def _expr_values(model, c, solution, window):
    """Possible markings of crossing c on the solution space, window-filtered.

    Returns (values, determined): a single-element list when the marking is
    pinned by the visible ones, else all window values consistent with the
    system.
    """
    part, basis = solution
    expr = model.markexpr[c]
    v0 = sum(part[s] for s in expr)
    if all(sum(b[s] for s in expr) == 0 for b in basis):
        return ([int(v0)] if v0.denominator == 1 else []), True
    return sorted(window.allowed), False


_MARK_CACHE = {}


def _mark_options(model, present, marks, K, window):
    """Window-filtered completions of the visible marking assignment to all
    crossings of the model; cached, since the same (model, markings) pair
    recurs across many host diagrams."""
    key = (model.uid, present, tuple(sorted(marks.items())), K, window)
    hit = _MARK_CACHE.get(key)
    if hit is not None:
        return hit
    sol = _solve_gaps(model, present, marks, K)
    options = []
    if sol is not None:
        absent = [c for c in range(model.ncross) if c not in present]
        if not absent:
            options = [dict(marks)]
        else:
            c = absent[0]
            values, _det = _expr_values(model, c, sol, window)
            for mv in values:
                full = dict(marks)
                full[c] = mv
                if _solve_gaps(model, tuple(range(model.ncross)), full, K) is not None:
                    options.append(full)
    _MARK_CACHE[key] = options
    return options


# ---------------------------------------------------------------------------
# matching


class Match:
    """A local model term located inside a concrete diagram."""

    __slots__ = ("model", "side", "present", "arrow_map", "marks_options", "layout")

    def __init__(self, model, side, present, arrow_map, marks_options, layout):
        self.model = model
        self.side = side
        self.present = present
        self.arrow_map = arrow_map
        self.marks_options = marks_options
        self.layout = layout


class _Layout:
    """Host data shared by all terms of one instance: the invisible arrows,
    their cyclic word, and where each model slot attaches to it."""

    __slots__ = ("K", "host_arrows", "host_word", "slot_ranks")

    def __init__(self, K, host_arrows, host_word, slot_ranks):
        self.K = K
        self.host_arrows = host_arrows
        self.host_word = host_word
        self.slot_ranks = slot_ranks


def _extract_layout(d, arrow_map, anchors):
    """Cut the matched arrows out of d, remembering the attachment slots."""
    visible = set(arrow_map.values())
    ends = d.endpoint_roles()
    host_idx = {}
    host_arrows = []
    for i, a in enumerate(d.arrows):
        if i not in visible:
            host_idx[i] = len(host_arrows)
            host_arrows.append((a[2], a[3]))
    host_pos = []
    host_word = []
    for p in range(2 * d.n):
        i, role = ends[p]
        if i not in visible:
            host_pos.append(p)
            host_word.append((host_idx[i], role))
    slot_ranks = []
    for p_s in anchors:
        ins = sum(1 for q in host_pos if q < p_s)
        slot_ranks.append((ins, p_s))
    return _Layout(d.K, host_arrows, host_word, slot_ranks)


def _assemble_term(layout, model, present, side, marks, species):
    """Splice the model term for (present, side) into the layout's host.

    Returns (cls, arrows, slot_anchor): arrows in an un-rotated word whose
    positions are meaningful, slot_anchor[s] = position of the first spliced
    endpoint of slot s (None when the slot's group is empty)."""
    groups = {}
    for s in range(model.nslots):
        groups[s] = [(c, role) for (c, role) in model.words[side][s] if c in present]
    order = sorted(range(model.nslots), key=lambda s: layout.slot_ranks[s])
    word = []
    slot_anchor = {s: None for s in range(model.nslots)}
    gi = 0
    for i in range(len(layout.host_word) + 1):
        while gi < len(order) and layout.slot_ranks[order[gi]][0] == i:
            s = order[gi]
            if groups[s]:
                slot_anchor[s] = len(word)
            for c, role in groups[s]:
                word.append(("v", c, role))
            gi += 1
        if i < len(layout.host_word):
            hi, role = layout.host_word[i]
            word.append(("h", hi, role))
    tails, heads = {}, {}
    for pos, (kind, idx, role) in enumerate(word):
        key = (kind, idx)
        (tails if role == TAIL else heads)[key] = pos
    arrows = []
    for hi, (m, s) in enumerate(layout.host_arrows):
        arrows.append((tails[("h", hi)], heads[("h", hi)], m, s))
    for c in sorted(present):
        s = model.signs[c] if species == "gauss" else 0
        arrows.append((tails[("v", c)], heads[("v", c)], marks[c], s))
    cls = GaussDiagram if species == "gauss" else ArrowDiagram
    return cls, arrows, slot_anchor


def _build_term(layout, model, present, side, marks, species):
    cls, arrows, _anchor = _assemble_term(layout, model, present, side, marks, species)
    return cls(layout.K, arrows)


def _cyclic_ordered(anchors, size):
    """True iff the anchor positions occur in slot order around the circle."""
    a0 = anchors[0]
    rel = [(a - a0) % size for a in anchors]
    return all(rel[i] < rel[i + 1] for i in range(1, len(rel) - 1)) and all(r > 0 for r in rel[1:])


def _other_pos(d, arrow, role):
    a = d.arrows[arrow]
    return a[0] if role == TAIL else a[1]


def _normalize_model(model, rot, mode):
    """Slot-rotated copy of a model with crossings renamed canonically.

    Two descriptors whose normalized models agree (under the given sign
    mode) match the same sites and build the same instance terms, so one
    representative suffices.  Modes: 'gauss' keeps signs (they constrain
    the match), 'pairprod' keeps only products of sign pairs (all that the
    sign-forgotten 6-term coefficients use), 'plain' drops signs."""
    from .moves import LocalModel

    ns = model.nslots
    words = {
        side: tuple(model.words[side][(s + rot) % ns] for s in range(ns))
        for side in model.words
    }
    markexpr = [frozenset((x - rot) % ns for x in e) for e in model.markexpr]
    slots_of = {}
    for s in range(ns):
        for c, _r in words["L"][s]:
            slots_of.setdefault(c, []).append(s)
    order = sorted(slots_of, key=lambda c: tuple(slots_of[c]))
    rename = {c: i for i, c in enumerate(order)}
    new_words = {
        side: tuple(tuple((rename[c], r) for c, r in g) for g in words[side])
        for side in words
    }
    new_markexpr = tuple(markexpr[c] for c in order)
    signs = tuple(model.signs[c] for c in order)
    if mode == "pairprod":
        sig_signs = tuple(signs[i] * signs[j] for i, j in ((0, 1), (0, 2), (1, 2)))
    elif mode == "plain":
        sig_signs = ()
    else:
        sig_signs = signs
    nm = LocalModel(model.kind, ns, model.ncross, signs, new_markexpr, new_words)
    sig = (tuple(sorted(nm.words.items())), new_markexpr, sig_signs)
    return nm, sig


_PAIR_DESC = {}


def _pair_descriptors(mode):
    """Deduplicated two-crossing R3 term shapes, indexed by the role pair of
    the shared adjacent endpoints.  Entries: (model, side, pair, singles)
    with the shared strand normalized to slot 0 and
    singles = ((crossing, slot, role), (crossing, slot, role))."""
    if mode in _PAIR_DESC:
        return _PAIR_DESC[mode]
    table = {(TAIL, TAIL): {}, (TAIL, HEAD): {}, (HEAD, TAIL): {}, (HEAD, HEAD): {}}
    for model in models("R3"):
        for side in ("L", "R"):
            for shared in range(3):
                nm, base_sig = _normalize_model(model, shared, mode)
                word = nm.words[side]
                (c1, r1), (c2, r2) = word[0]
                pair = (c1, c2)
                singles = []
                for s in (1, 2):
                    for cc, rr in word[s]:
                        if cc in pair:
                            singles.append((cc, s, rr))
                table[(r1, r2)].setdefault((side, base_sig), (nm, side, pair, tuple(singles)))
    out = {k: list(v.values()) for k, v in table.items()}
    _PAIR_DESC[mode] = out
    return out


def r3_pair_matches(d, window, mode, fixed_positions=None):
    """Matches of a two-crossing term of an R3 model inside d.

    The two visible crossings share a strand; their endpoints there form an
    adjacent pair, which anchors the search.  `fixed_positions`, when given,
    restricts the shared pair to that position pair (p, p+1 mod 2n).
    """
    n = d.n
    if n < 2:
        return
    ends = d.endpoint_roles()
    size = 2 * n
    table = _pair_descriptors(mode)
    pos_range = [fixed_positions] if fixed_positions is not None else list(range(size))
    for p in pos_range:
        q = (p + 1) % size
        (u, ru), (v, rv) = ends[p], ends[q]
        if u == v:
            continue
        for model, side, pair, singles in table[(ru, rv)]:
            c1, c2 = pair
            arrow_map = {c1: u, c2: v}
            if mode == "gauss" and (
                d.arrows[u][3] != model.signs[c1] or d.arrows[v][3] != model.signs[c2]
            ):
                continue
            anchors = [p, None, None]
            for cc, s, rr in singles:
                anchors[s] = _other_pos(d, arrow_map[cc], rr)
            if not _cyclic_ordered(anchors, size):
                continue
            marks = {c: d.arrows[arrow_map[c]][2] for c in pair}
            options = _mark_options(model, pair, marks, d.K, window)
            if not options:
                continue
            layout = _extract_layout(d, arrow_map, anchors)
            yield Match(model, side, pair, arrow_map, options, layout)


_FULL_DESC = {}


def _full_descriptors(kind, mode):
    """Deduplicated complete local model shapes: list of (model, side)."""
    key = (kind, mode)
    if key in _FULL_DESC:
        return _FULL_DESC[key]
    table = {}
    sides = ("L", "R") if kind == "R3" else ("L",)
    for model in models(kind):
        for side in sides:
            best = None
            for rot in range(model.nslots):
                nm, base_sig = _normalize_model(model, rot, mode)
                if best is None or base_sig < best[1]:
                    best = (nm, base_sig)
            table.setdefault((side, best[1]), (best[0], side))
    out = list(table.values())
    _FULL_DESC[key] = out
    return out


def _full_anchor_table(kind, mode):
    """Full descriptors indexed by the role pair of their first slot group.

    Entry: (model, side, pair, rest) where pair maps the anchored group's
    two crossings and rest lists the remaining groups as (slot, group)."""
    key = ("anchor", kind, mode)
    if key in _FULL_DESC:
        return _FULL_DESC[key]
    table = {}
    for model, side in _full_descriptors(kind, mode):
        word = model.words[side]
        (c1, r1), (c2, r2) = word[0]
        rest = tuple((s, word[s]) for s in range(1, model.nslots))
        table.setdefault((r1, r2), []).append((model, side, (c1, c2), rest))
    _FULL_DESC[key] = table
    return table


def _full_matches(d, kind, mode):
    """Matches of a complete local model (all crossings visible) inside d.

    Anchored search: every slot group occupies consecutive positions, so
    fixing the first group on an adjacent endpoint pair determines the rest."""
    table = _full_anchor_table(kind, mode)
    ncross = 2 if kind == "R2" else 3
    if d.n < ncross:
        return
    size = 2 * d.n
    ends = d.endpoint_roles()
    for p in range(size):
        (u, ru), (v, rv) = ends[p], ends[(p + 1) % size]
        if u == v:
            continue
        for model, side, pair, rest in table.get((ru, rv), ()):
            if mode == "gauss" and (
                d.arrows[u][3] != model.signs[pair[0]]
                or d.arrows[v][3] != model.signs[pair[1]]
            ):
                continue
            arrow_map = {pair[0]: u, pair[1]: v}
            anchors = [p] + [None] * (model.nslots - 1)
            ok = True
            for s, grp in rest:
                base = next(
                    (j for j, (c, _r) in enumerate(grp) if c in arrow_map), None
                )
                if base is None:
                    ok = False
                    break
                bc, br = grp[base]
                q0 = (_other_pos(d, arrow_map[bc], br) - base) % size
                for j, (c, r) in enumerate(grp):
                    a, ar = ends[(q0 + j) % size]
                    if ar != r or arrow_map.setdefault(c, a) != a:
                        ok = False
                        break
                if not ok:
                    break
                anchors[s] = q0
            if not ok or len(set(arrow_map.values())) != ncross:
                continue
            if mode == "gauss" and any(
                d.arrows[arrow_map[c]][3] != model.signs[c] for c in range(ncross)
            ):
                continue
            if not _cyclic_ordered(anchors, size):
                continue
            marks = {c: d.arrows[arrow_map[c]][2] for c in range(ncross)}
            if _solve_gaps(model, tuple(range(ncross)), marks, d.K) is None:
                continue
            layout = _extract_layout(d, arrow_map, anchors)
            yield Match(model, side, tuple(range(ncross)), arrow_map, [marks], layout)


def _full_matches_scan(d, kind, mode):
    """Brute-force version of _full_matches (kept as a testing oracle)."""
    descs = _full_descriptors(kind, mode)
    ncross = descs[0][0].ncross
    if d.n < ncross:
        return
    size = 2 * d.n
    for arrows in permutations(range(d.n), ncross):
        for model, side in descs:
            if mode == "gauss" and any(
                d.arrows[a][3] != model.signs[c] for c, a in enumerate(arrows)
            ):
                continue
            word = model.words[side]
            anchors = []
            ok = True
            for s in range(model.nslots):
                grp = word[s]
                positions = [_other_pos(d, arrows[c], rr) for (c, rr) in grp]
                for j in range(1, len(positions)):
                    if positions[j] != (positions[0] + j) % size:
                        ok = False
                anchors.append(positions[0])
            if not ok or not _cyclic_ordered(anchors, size):
                continue
            marks = {c: d.arrows[arrows[c]][2] for c in range(ncross)}
            if _solve_gaps(model, tuple(range(ncross)), marks, d.K) is None:
                continue
            arrow_map = dict(enumerate(arrows))
            layout = _extract_layout(d, arrow_map, anchors)
            yield Match(model, side, tuple(range(ncross)), arrow_map, [marks], layout)


def r2_matches(d, mode):
    return _full_matches(d, "R2", mode)


def r3_full_matches(d, mode):
    return _full_matches(d, "R3", mode)


def r1_matches(d):
    """Isolated arrows carrying the kink markings."""
    out = []
    size = 2 * d.n
    for i, (t, h, m, _s) in enumerate(d.arrows):
        if t == (h + 1) % size and m == 0:
            out.append((i, "ht"))
        elif h == (t + 1) % size and m == d.K:
            out.append((i, "th"))
    return out


# ---------------------------------------------------------------------------
# family generators


def _flip_sign(d, i):
    arrows = list(d.arrows)
    t, h, m, s = arrows[i]
    arrows[i] = (t, h, m, -s)
    return GaussDiagram(d.K, arrows)


def _in_window(vec, window):
    return all(
        all(a[2] in window.allowed for a in k.arrows) for k in vec.keys()
    )


_SIDE_SIGN = {"L": 1, "R": -1}


def _gen_from_diagrams(family, n, window, skipped, closure=True, hosts=None):
    species = FAMILY_SPECIES[family]
    signed = species == "gauss"
    seen = {}

    def emit(vec):
        if not vec:
            return
        if not _in_window(vec, window):
            skipped[family] = skipped.get(family, 0) + 1
            if closure:
                return
        inst = RelationInstance(family, vec)
        seen.setdefault(inst.key(), inst)

    if hosts is None:
        hosts = enumerate_diagrams(species, n, window)
    else:
        hosts = [d for d in hosts if d.n == n]
    for d in hosts:
        mode = "gauss" if signed else "plain"
        if family in ("p1", "ap1"):
            for _i, _kind in r1_matches(d):
                emit(LinComb.single(d))
        elif family in ("p2h2", "ap2"):
            for _m in r2_matches(d, mode):
                emit(LinComb.single(d))
        elif family == "p2h1":
            for i in range(d.n):
                emit(LinComb.single(d) + LinComb.single(_flip_sign(d, i)))
        elif family == "p2":
            for m in r2_matches(d, mode):
                i, j = m.arrow_map[0], m.arrow_map[1]
                keep_i = d.subdiagram([k for k in range(d.n) if k != j])
                keep_j = d.subdiagram([k for k in range(d.n) if k != i])
                emit(LinComb.single(d) + LinComb.single(keep_i) + LinComb.single(keep_j))
        elif family in ("p3", "g2t", "a2t"):
            for m in r3_full_matches(d, mode):
                marks = m.marks_options[0]
                vec = LinComb()
                for side in ("L", "R"):
                    c = _SIDE_SIGN[side]
                    vec = vec + LinComb.single(
                        _build_term(m.layout, m.model, (0, 1, 2), side, marks, species), c
                    )
                    if family == "p3":
                        for pair in ((0, 1), (0, 2), (1, 2)):
                            vec = vec + LinComb.single(
                                _build_term(m.layout, m.model, pair, side, marks, species), c
                            )
                emit(vec)
        elif family in ("g6t", "a6t"):
            for m in r3_pair_matches(d, window, "gauss" if signed else "pairprod"):
                for marks in m.marks_options:
                    vec = LinComb()
                    for side in ("L", "R"):
                        for pair in ((0, 1), (0, 2), (1, 2)):
                            c = _SIDE_SIGN[side]
                            if species == "arrow":
                                c *= m.model.signs[pair[0]] * m.model.signs[pair[1]]
                            vec = vec + LinComb.single(
                                _build_term(m.layout, m.model, pair, side, marks, species), c
                            )
                    emit(vec)
        else:
            raise ValueError("unknown family tag %r" % family)
    return sorted(seen.values(), key=lambda r: r.key())


def gen_family(family, n, window, skipped=None, closure=True, hosts=None):
    """All inequivalent instances of one relation family at one degree.

    `skipped` may be a dict collecting the window-closure skip counts.
    With closure=False, instances with terms outside the window are kept
    (still counted): their restriction to window-supported vectors is an
    exact constraint, which is what the formula-space solver needs.

    `hosts` restricts the anchor diagrams: only instances containing one of
    the given diagrams as a term are produced.  Pairing a fixed vector v
    against a family needs only the instances meeting v's support, so
    hosts=support(v) is exhaustive for that purpose and much cheaper than
    enumerating the whole window."""
    if skipped is None:
        skipped = {}
    if family in ("triangle", "based6t"):
        from . import boundary

        return boundary.gen_degenerate_family(family, n, window, skipped)
    if family not in FAMILY_SPECIES:
        raise ValueError("unknown family tag %r" % family)
    return _gen_from_diagrams(family, n, window, skipped, closure, hosts)


def gen_all_constraints(n, window, skipped=None, closure=True):
    """The constraint set whose kernel is the degree-n formula space."""
    out = []
    for family in ("ap1", "ap2", "a6t"):
        out.extend(gen_family(family, n, window, skipped, closure))
    return out


# ---------------------------------------------------------------------------
# Reidemeister rewriting


def _insert_endpoints(d, inserts):
    """Rebuild d with new endpoints spliced in.

    `inserts`: list of (insertion index into the current word, list of
    (tag, role)) processed in order; returns (word, position maps)."""
    ends = d.endpoint_roles()
    word = [("old", *ends[p]) for p in range(2 * d.n)]
    out = []
    by_index = sorted(range(len(inserts)), key=lambda i: inserts[i][0])
    gi = 0
    for i in range(len(word) + 1):
        while gi < len(by_index) and inserts[by_index[gi]][0] == i:
            for tag, role in inserts[by_index[gi]][1]:
                out.append(("new", tag, role))
            gi += 1
        if i < len(word):
            out.append(word[i])
    return out


def _word_to_arrows(d, word, new_arrows):
    """word entries: ('old', arrow, role) | ('new', tag, role); new_arrows:
    tag -> (mark, sign)."""
    tails, heads = {}, {}
    for pos, (kind, idx, role) in enumerate(word):
        (tails if role == TAIL else heads)[(kind, idx)] = pos
    arrows = []
    for i, a in enumerate(d.arrows):
        arrows.append((tails[("old", i)], heads[("old", i)], a[2], a[3]))
    for tag in sorted(new_arrows):
        m, s = new_arrows[tag]
        arrows.append((tails[("new", tag)], heads[("new", tag)], m, s))
    return type(d)(d.K, arrows)


def apply_R_move(g, move, site, params=()):
    """Rewrite g by one Reidemeister move.

    move/site/params:
      'R1+'  site = insertion index 0..2n-1 (0 for the empty diagram);
             params = (kind 'ht'|'th', sign)
      'R1-'  site = arrow index (isolated, marking 0 or K as the kind demands)
      'R2+'  site = (ins1, ins2) insertion indices, ins1 <= ins2;
             params = (model index into moves.models('R2'), marking)
      'R2-'  site = (arrow_i, arrow_j) forming a bigon pair
      'R3'   site = (arrow triple, anchor position of the first strand)
    """
    if move == "R1+":
        kind, sign = params
        mark = 0 if kind == "ht" else g.K
        word = (0, HEAD) if kind == "ht" else (0, TAIL)
        order = ((0, HEAD), (0, TAIL)) if kind == "ht" else ((0, TAIL), (0, HEAD))
        if not 0 <= site <= 2 * g.n:
            raise DiagramError("R1 insertion index %r out of range" % (site,))
        w = _insert_endpoints(g, [(site, list(order))])
        return _word_to_arrows(g, w, {0: (mark, sign if g.signed else 0)})
    if move == "R1-":
        hits = dict(r1_matches(g))
        if site not in hits:
            raise DiagramError("arrow %r is not a removable kink" % (site,))
        return g.subdiagram([i for i in range(g.n) if i != site])
    if move == "R2+":
        k, mark = params
        model = models("R2")[k]
        ins1, ins2 = site
        if not (0 <= ins1 <= ins2 <= 2 * g.n):
            raise DiagramError("R2 insertion indices %r out of range" % (site,))
        gaps = _solve_gaps(model, (0,), {0: mark}, g.K)
        if gaps is None:
            raise DiagramError("marking %r inconsistent with the bigon model" % (mark,))
        inserts = [(ins1, list(model.words["L"][0])), (ins2, list(model.words["L"][1]))]
        w = _insert_endpoints(g, inserts)
        sig = g.signed
        return _word_to_arrows(
            g, w, {c: (mark, model.signs[c] if sig else 0) for c in (0, 1)}
        )
    if move == "R2-":
        for m in r2_matches(g, "gauss" if g.signed else "plain"):
            if (m.arrow_map[0], m.arrow_map[1]) == tuple(site):
                drop = set(site)
                return g.subdiagram([i for i in range(g.n) if i not in drop])
        raise DiagramError("arrows %r do not form a removable bigon" % (site,))
    if move == "R3":
        triple, anchor = site
        for m in r3_full_matches(g, "gauss" if g.signed else "plain"):
            if tuple(m.arrow_map[c] for c in (0, 1, 2)) != tuple(triple):
                continue
            word = m.model.words[m.side][0]
            first = m.arrow_map[word[0][0]]
            pos = _other_pos(g, first, word[0][1])
            if pos != anchor:
                continue
            other = "R" if m.side == "L" else "L"
            return _build_term(
                m.layout, m.model, (0, 1, 2), other, m.marks_options[0],
                "gauss" if g.signed else "arrow",
            )
        raise DiagramError("no R3 site at %r" % (site,))
    raise ValueError("unknown move %r" % (move,))


def available_moves(g, marking_set, max_degree=None):
    """Deterministic list of (move, site, params) applicable to g.

    R1 markings come from {0, K}; R2 markings from `marking_set`."""
    out = []
    grow = max_degree is None or g.n < max_degree
    if grow:
        for ins in range(max(1, 2 * g.n)):
            for kind in ("ht", "th"):
                for sign in ((1, -1) if g.signed else (0,)):
                    out.append(("R1+", ins, (kind, sign)))
    for i, kind in r1_matches(g):
        out.append(("R1-", i, ()))
    if grow and g.n + 2 <= (max_degree if max_degree is not None else g.n + 2):
        nmod = len(models("R2"))
        for ins1 in range(max(1, 2 * g.n)):
            for ins2 in range(ins1, max(1, 2 * g.n)):
                for k in range(nmod):
                    for m in sorted(marking_set):
                        out.append(("R2+", (ins1, ins2), (k, m)))
    seen_pairs = set()
    for m in r2_matches(g, "gauss" if g.signed else "plain"):
        pair = (m.arrow_map[0], m.arrow_map[1])
        if pair not in seen_pairs:
            seen_pairs.add(pair)
            out.append(("R2-", pair, ()))
    seen_r3 = set()
    for m in r3_full_matches(g, "gauss" if g.signed else "plain"):
        word = m.model.words[m.side][0]
        first = m.arrow_map[word[0][0]]
        pos = _other_pos(g, first, word[0][1])
        key = (tuple(m.arrow_map[c] for c in (0, 1, 2)), pos)
        if key not in seen_r3:
            seen_r3.add(key)
            out.append(("R3", key, ()))
    return out


# ---------------------------------------------------------------------------
# Polyak-span compatibility


def r_relation_vectors(n, window, limit_per_kind=None):
    """Differences g_after - g_before for moves within degree <= n, window-
    internal, enumerated deterministically."""
    out = []
    counts = {"R1": 0, "R2": 0, "R3": 0}
    for deg in range(0, n):
        for g in enumerate_diagrams("gauss", deg, window):
            if deg + 1 <= n and (limit_per_kind is None or counts["R1"] < limit_per_kind):
                for ins in range(max(1, 2 * g.n)):
                    for kind in ("ht", "th"):
                        mark = 0 if kind == "ht" else window.K
                        if mark not in window.allowed:
                            continue
                        for sign in (1, -1):
                            g2 = apply_R_move(g, "R1+", ins, (kind, sign))
                            out.append(("R1", LinComb.single(g2) - LinComb.single(g)))
                            counts["R1"] += 1
            if deg + 2 <= n and (limit_per_kind is None or counts["R2"] < limit_per_kind):
                for ins1 in range(max(1, 2 * g.n)):
                    for ins2 in range(ins1, max(1, 2 * g.n)):
                        for k in range(len(models("R2"))):
                            for m in window.values():
                                g2 = apply_R_move(g, "R2+", (ins1, ins2), (k, m))
                                out.append(("R2", LinComb.single(g2) - LinComb.single(g)))
                                counts["R2"] += 1
    for g in enumerate_diagrams("gauss", n, window) if n >= 3 else ():
        if limit_per_kind is not None and counts["R3"] >= limit_per_kind:
            break
        for m in r3_full_matches(g, "gauss"):
            g2 = _build_term(
                m.layout, m.model, (0, 1, 2), "R" if m.side == "L" else "L",
                m.marks_options[0], "gauss",
            )
            vec = LinComb.single(g2) - LinComb.single(g)
            if vec and _in_window(vec, window):
                out.append(("R3", vec))
                counts["R3"] += 1
                break
    return out


def check_I_span_compat(n, window, limit_per_kind=None):
    """Verify I(r) lies in the span of the P-relation instances for every
    R-relation vector r at degree <= n.  Returns a report dict."""
    from .ratlinalg import in_span

    rows = []
    skipped = {}
    for deg in range(1, n + 1):
        for family in ("p1", "p2", "p3"):
            for inst in gen_family(family, deg, window, skipped):
                rows.append(inst.vector)
    failures = []
    checked = 0
    for kind, r in r_relation_vectors(n, window, limit_per_kind):
        vec = subdiagram_expand_I(r)
        checked += 1
        if not in_span(vec, rows):
            failures.append((kind, r))
    return {"checked": checked, "failures": failures, "skipped": skipped}
