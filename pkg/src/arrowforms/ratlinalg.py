"""Exact sparse linear algebra over the rationals, indexed by diagrams.

Rows are sparse mappings from orderable keys (canonical diagrams, or plain
column indices) to rationals.  Elimination is fraction-free: every stored
row is an integer row with content 1, so entries stay small and all results
are exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .lincomb import LinComb


def _int_row(vec):
    """Clear denominators and strip the content; dict key -> int."""
    items = vec.items() if isinstance(vec, (LinComb, dict)) else vec
    row = {}
    for k, c in items:
        c = Fraction(c)
        if c:
            row[k] = c
    if not row:
        return {}
    mult = lcm(*(c.denominator for c in row.values()))
    out = {k: int(c * mult) for k, c in row.items()}
    g = gcd(*(abs(v) for v in out.values()))
    if g > 1:
        out = {k: v // g for k, v in out.items()}
    return out


def _strip(row):
    row = {k: v for k, v in row.items() if v}
    if not row:
        return row
    g = gcd(*(abs(v) for v in row.values()))
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    return row


class Echelon:
    """Incremental fraction-free row echelon form, pivots keyed by the
    smallest key in each stored row."""

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots = {}

    def reduce(self, row):
        """Row with all pivot keys eliminated (content-stripped)."""
        row = dict(row)
        while row:
            lead = min(row)
            if lead not in self.pivots:
                break
            prow = self.pivots[lead]
            a, b = row[lead], prow[lead]
            new = {k: b * v for k, v in row.items()}
            for k, v in prow.items():
                new[k] = new.get(k, 0) - a * v
            row = _strip(new)
        return row

    def insert(self, row):
        """Reduce and store; returns True when the row added rank."""
        row = self.reduce(_strip(dict(row)))
        if not row:
            return False
        self.pivots[min(row)] = row
        return True

    def rank(self):
        return len(self.pivots)

    def back_substitute(self):
        """Make every pivot column the only nonzero in its pivot row."""
        for lead in sorted(self.pivots, reverse=True):
            prow = self.pivots[lead]
            for other_lead, orow in self.pivots.items():
                if other_lead >= lead or lead not in orow:
                    continue
                a, b = orow[lead], prow[lead]
                new = {k: b * v for k, v in orow.items()}
                for k, v in prow.items():
                    new[k] = new.get(k, 0) - a * v
                self.pivots[other_lead] = _strip(new)


class DiagramIndexedMatrix:
    """Sparse rational matrix whose columns are canonical diagrams."""

    __slots__ = ("columns", "rows")

    def __init__(self, columns, rows=()):
        self.columns = list(columns)
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("duplicate columns")
        self.rows = []
        for r in rows:
            self.add_row(r)

    def add_row(self, vec):
        row = _int_row(vec)
        known = set(self.columns)
        if any(k not in known for k in row):
            raise ValueError("row supported outside the column list")
        self.rows.append(row)


def rank(rows):
    """Exact rank of a list of sparse vectors."""
    ech = Echelon()
    for r in rows:
        ech.insert(_int_row(r))
    return ech.rank()


def in_span(v, rows, _ech_cache=None):
    """True iff v lies in the rational span of the rows."""
    if _ech_cache is None:
        _ech_cache = Echelon()
        for r in rows:
            _ech_cache.insert(_int_row(r))
    return not _ech_cache.reduce(_int_row(v))


def echelon_of(rows):
    """Prebuilt echelon for repeated in_span queries."""
    ech = Echelon()
    for r in rows:
        ech.insert(_int_row(r))
    return ech


def kernel(m):
    """Basis of {v : m v = 0} as LinComb vectors over m.columns.

    Each basis vector has integer entries with content 1 and a positive
    entry at its smallest-index support column."""
    index = {c: i for i, c in enumerate(m.columns)}
    ech = Echelon()
    for row in m.rows:
        ech.insert({index[k]: v for k, v in row.items()})
    ech.back_substitute()
    pivot_cols = sorted(ech.pivots)
    free_cols = [i for i in range(len(m.columns)) if i not in ech.pivots]
    basis = []
    for f in free_cols:
        vec = {f: Fraction(1)}
        for p in pivot_cols:
            prow = ech.pivots[p]
            if f in prow:
                vec[p] = Fraction(-prow[f], prow[p])
        row = _int_row(vec)
        lead = min(row)
        if row[lead] < 0:
            row = {k: -v for k, v in row.items()}
        basis.append(LinComb((m.columns[i], c) for i, c in row.items()))
    return basis
