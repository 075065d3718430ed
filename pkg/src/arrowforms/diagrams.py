"""Decorated chord diagrams on an oriented circle.

A diagram of degree n has 2n endpoint slots, numbered 0..2n-1 in the
direction of the circle orientation.  Every arrow is an oriented chord
(tail -> head) carrying an integer marking; Gauss diagrams additionally
carry a sign (+1/-1) per arrow.  The whole circle carries a global integer
marking K.

Diagrams are considered up to rotation of the endpoint labels.  All classes
here store a canonical representative, so equality and hashing are cheap.

Internal arrow encoding: a 4-tuple (tail, head, mark, sign) with sign == 0
on sign-less (arrow) diagrams.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class DiagramError(ValueError):
    """Raised on structurally invalid diagram data."""


def _validate(n, arrows, signed):
    seen = {}
    for a in arrows:
        t, h, m, s = a
        if t == h:
            raise DiagramError("arrow with tail == head == %d" % t)
        for p in (t, h):
            if not 0 <= p < 2 * n:
                raise DiagramError("endpoint index %d out of range 0..%d" % (p, 2 * n - 1))
            if p in seen:
                raise DiagramError("duplicate endpoint index %d" % p)
            seen[p] = True
        if signed and s not in (1, -1):
            raise DiagramError("sign must be +1 or -1, got %r" % (s,))
        if not signed and s != 0:
            raise DiagramError("sign-less diagram with sign %r" % (s,))
    if len(seen) != 2 * n:
        missing = [p for p in range(2 * n) if p not in seen]
        raise DiagramError("missing endpoint indices %s" % missing)


def _endpoint_map(n, arrows):
    """pos -> (arrow index, role); role 0 = tail, 1 = head."""
    ends = [None] * (2 * n)
    for i, (t, h, _m, _s) in enumerate(arrows):
        ends[t] = (i, 0)
        ends[h] = (i, 1)
    return ends


def _stream(n, arrows, ends, r):
    """Token stream read from rotated position r, arrows relabelled by
    first occurrence.  Two diagrams are equal iff their minimal streams are."""
    relabel = {}
    out = []
    for q in range(2 * n):
        i, role = ends[(q + r) % (2 * n)]
        j = relabel.setdefault(i, len(relabel))
        t, h, m, s = arrows[i]
        out.append((j, role, m, s))
    return tuple(out)


def canonical_arrows(n, arrows):
    """Lexicographically least encoding over all 2n rotations.

    Returns the canonical arrow tuple (sorted by first endpoint occurrence,
    positions rotated accordingly).  Pure function; idempotent and constant
    on rotation orbits.
    """
    arrows = tuple(tuple(a) for a in arrows)
    if n == 0:
        return ()
    ends = _endpoint_map(n, arrows)
    best_r = 0
    best = _stream(n, arrows, ends, 0)
    for r in range(1, 2 * n):
        s = _stream(n, arrows, ends, r)
        if s < best:
            best, best_r = s, r
    # rebuild arrows from the winning rotation, ordered by first occurrence
    order = []
    seen = set()
    for q in range(2 * n):
        i, _role = ends[(q + best_r) % (2 * n)]
        if i not in seen:
            seen.add(i)
            order.append(i)
    shift = lambda p: (p - best_r) % (2 * n)
    return tuple((shift(t), shift(h), m, s) for (t, h, m, s) in (arrows[i] for i in order))


def best_rotation(n, arrows):
    """A rotation r that realizes the canonical encoding: position p of the
    input sits at (p - r) mod 2n in the canonical representative.  With a
    rotation symmetry present, any minimizing r is equivalent."""
    if n == 0:
        return 0
    ends = _endpoint_map(n, arrows)
    best_r = 0
    best = _stream(n, arrows, ends, 0)
    for r in range(1, 2 * n):
        s = _stream(n, arrows, ends, r)
        if s < best:
            best, best_r = s, r
    return best_r


def rotation_count(n, arrows):
    """Number of rotations fixing the diagram (= |Aut|); 1 for n == 0."""
    if n == 0:
        return 1
    ends = _endpoint_map(n, arrows)
    base = _stream(n, arrows, ends, 0)
    return sum(1 for r in range(2 * n) if _stream(n, arrows, ends, r) == base)


class _BaseDiagram:
    """Shared machinery for Gauss and arrow diagrams (canonical storage)."""

    __slots__ = ("K", "arrows", "_hash")
    signed = False

    def __init__(self, K, arrows=()):
        arrows = tuple(tuple(a) for a in arrows)
        _validate(len(arrows), arrows, self.signed)
        object.__setattr__(self, "K", int(K))
        object.__setattr__(self, "arrows", canonical_arrows(len(arrows), arrows))
        object.__setattr__(self, "_hash", hash((self.signed, self.K, self.arrows)))

    def __setattr__(self, *a):
        raise AttributeError("diagrams are immutable")

    @property
    def n(self):
        return len(self.arrows)

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self._hash == other._hash
            and self.K == other.K
            and self.arrows == other.arrows
        )

    def __lt__(self, other):
        return (self.K, self.arrows) < (other.K, other.arrows)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "%s(K=%d, %r)" % (type(self).__name__, self.K, list(self.arrows))

    def aut_order(self):
        """Number of rotations keeping the diagram unchanged; divides 2n."""
        return rotation_count(self.n, self.arrows)

    def endpoint_roles(self):
        """pos -> (arrow index, role) on the canonical representative."""
        return _endpoint_map(self.n, self.arrows)

    def subdiagram(self, indices):
        """Induced diagram on a subset of arrow indices (canonicalized)."""
        indices = sorted(set(indices))
        kept = [self.arrows[i] for i in indices]
        pos = sorted(p for (t, h, _m, _s) in kept for p in (t, h))
        renum = {p: q for q, p in enumerate(pos)}
        return type(self)(self.K, [(renum[t], renum[h], m, s) for (t, h, m, s) in kept])


class GaussDiagram(_BaseDiagram):
    """Signed decorated chord diagram (one virtual knot diagram in the annulus)."""

    __slots__ = ()
    signed = True

    def forget_signs(self):
        return ArrowDiagram(self.K, [(t, h, m, 0) for (t, h, m, _s) in self.arrows])


class ArrowDiagram(_BaseDiagram):
    """Sign-less decorated chord diagram."""

    __slots__ = ()
    signed = False

    def with_signs(self, signs):
        """Gauss diagram obtained by decorating arrow i with signs[i]."""
        if len(signs) != self.n:
            raise DiagramError("expected %d signs" % self.n)
        return GaussDiagram(self.K, [(t, h, m, s) for (t, h, m, _z), s in zip(self.arrows, signs)])


def empty_diagram(K, signed=False):
    return GaussDiagram(K) if signed else ArrowDiagram(K)


def arrows_cross(a, b):
    """True iff chords a and b interleave on the circle."""
    a0, a1 = sorted(a[:2])
    b0, b1 = sorted(b[:2])
    return (a0 < b0 < a1 < b1) or (b0 < a0 < b1 < a1)


class BasedDiagram:
    """Diagram with a distinguished arc; stored rotated so the base arc sits
    between endpoint positions 2n-1 and 0.  A based diagram has no rotation
    freedom left, so equality is plain tuple equality."""

    __slots__ = ("K", "arrows", "signed", "_hash")

    def __init__(self, diagram, base_arc):
        n = diagram.n
        if n == 0:
            raise DiagramError("the empty diagram has no arcs to base")
        if not 0 <= base_arc < 2 * n:
            raise DiagramError("base arc %d out of range" % base_arc)
        r = (base_arc + 1) % (2 * n)
        shift = lambda p: (p - r) % (2 * n)
        moved = [(shift(t), shift(h), m, s) for (t, h, m, s) in diagram.arrows]
        # order arrows by first endpoint occurrence for a unique tuple
        first = {i: min(a[0], a[1]) for i, a in enumerate(moved)}
        moved.sort(key=lambda a: min(a[0], a[1]))
        object.__setattr__(self, "K", diagram.K)
        object.__setattr__(self, "arrows", tuple(moved))
        object.__setattr__(self, "signed", diagram.signed)
        object.__setattr__(self, "_hash", hash(("based", diagram.K, self.arrows, diagram.signed)))

    @classmethod
    def from_word(cls, K, arrows, signed=False):
        """Based diagram from arrows already in the based rotation (the base
        arc between endpoint positions 2n-1 and 0)."""
        arrows = tuple(tuple(a) for a in arrows)
        n = len(arrows)
        if n == 0:
            raise DiagramError("the empty diagram has no arcs to base")
        _validate(n, arrows, signed)
        moved = tuple(sorted(arrows, key=lambda a: min(a[0], a[1])))
        b = cls.__new__(cls)
        object.__setattr__(b, "K", int(K))
        object.__setattr__(b, "arrows", moved)
        object.__setattr__(b, "signed", signed)
        object.__setattr__(b, "_hash", hash(("based", int(K), moved, signed)))
        return b

    def __setattr__(self, *a):
        raise AttributeError("based diagrams are immutable")

    @property
    def n(self):
        return len(self.arrows)

    def __eq__(self, other):
        return (
            isinstance(other, BasedDiagram)
            and self._hash == other._hash
            and (self.K, self.signed, self.arrows) == (other.K, other.signed, other.arrows)
        )

    def __lt__(self, other):
        return (self.K, self.arrows) < (other.K, other.arrows)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "BasedDiagram(K=%d, %r)" % (self.K, list(self.arrows))

    def underlying(self):
        cls = GaussDiagram if self.signed else ArrowDiagram
        return cls(self.K, self.arrows)

    def boundary_endpoints(self):
        """(before, after): the (arrow index, role) pairs bounding the base
        arc, in circle order.  'before' is the endpoint at position 2n-1."""
        ends = _endpoint_map(self.n, self.arrows)
        return ends[2 * self.n - 1], ends[0]

    def aut_order(self):
        return 1


class DegenerateDiagram:
    """Diagram with one arc shrunk to a point.

    Stored in the based rotation: the fused endpoints are the ones at
    positions 2n-1 and 0, in that circle order.  When the fused endpoints
    belong to two different arrows, the two circle orders give the same
    degenerate picture, so canonical equality identifies them; when they
    belong to one and the same arrow the order is an extra decoration and
    is kept.
    """

    __slots__ = ("K", "arrows", "signed", "_key", "_hash")

    def __init__(self, based):
        if based.signed:
            raise DiagramError("degenerate diagrams are defined over arrow diagrams")
        object.__setattr__(self, "K", based.K)
        object.__setattr__(self, "arrows", based.arrows)
        object.__setattr__(self, "signed", False)
        (bi, _br), (ai, _ar) = based.boundary_endpoints()
        n = len(based.arrows)
        if bi == ai:
            key = ("s", self.K, self.arrows)
        else:
            swapped = _swap_positions(self.arrows, 2 * n - 1, 0)
            key = ("d", self.K, min(self.arrows, swapped))
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __setattr__(self, *a):
        raise AttributeError("degenerate diagrams are immutable")

    @property
    def n(self):
        return len(self.arrows)

    def __eq__(self, other):
        return isinstance(other, DegenerateDiagram) and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "DegenerateDiagram(K=%d, %r)" % (self.K, list(self.arrows))

    def fused(self):
        """((arrow, role), (arrow, role)) at the degenerate point, in order."""
        ends = _endpoint_map(self.n, self.arrows)
        return ends[2 * self.n - 1], ends[0]

    def word(self):
        """Canonical based word: for a different-arrow fusion, the smaller of
        the two equivalent fused orders.  Printing this word and reparsing
        reproduces the object byte for byte."""
        return self._key[2]

    def is_monotonic(self):
        (bi, br), (ai, ar) = self.fused()
        return bi != ai and br != ar

    def to_based(self):
        """The based diagram this object was shrunk from (stored order)."""
        cls = ArrowDiagram
        d = cls(self.K, self.arrows)
        # self.arrows is already in based rotation (base between 2n-1 and 0);
        # rebuild through the public constructor for a clean object.
        b = BasedDiagram.__new__(BasedDiagram)
        object.__setattr__(b, "K", self.K)
        object.__setattr__(b, "arrows", self.arrows)
        object.__setattr__(b, "signed", False)
        object.__setattr__(b, "_hash", hash(("based", self.K, self.arrows, False)))
        return b


def _swap_positions(arrows, p, q):
    def mv(x):
        if x == p:
            return q
        if x == q:
            return p
        return x

    out = [(mv(t), mv(h), m, s) for (t, h, m, s) in arrows]
    out.sort(key=lambda a: min(a[0], a[1]))
    return tuple(out)


def based_to_degenerate(b):
    return DegenerateDiagram(b)


def degenerate_to_based(d):
    return d.to_based()
