"""Formal linear combinations of canonical diagrams over exact rationals."""

from __future__ import annotations

from fractions import Fraction


class LinComb:
    """Finite map {canonical diagram -> nonzero Fraction}.

    Keys may be any hashable diagram species; mixing species in one
    combination is the caller's bug and is not policed here.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        acc = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for k, c in items:
                c = Fraction(c)
                if c:
                    acc[k] = acc.get(k, Fraction(0)) + c
                    if not acc[k]:
                        del acc[k]
        self.terms = acc

    @classmethod
    def single(cls, key, coeff=1):
        return cls([(key, coeff)])

    @classmethod
    def zero(cls):
        return cls()

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, LinComb) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "LinComb(0)"
        return "LinComb(%s)" % ", ".join("%s*%r" % (c, k) for k, c in sorted(self.terms.items(), key=lambda t: t[0]))

    def coeff(self, key):
        return self.terms.get(key, Fraction(0))

    def items(self):
        return self.terms.items()

    def keys(self):
        return self.terms.keys()

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        r = LinComb.__new__(LinComb)
        r.terms = out
        return r

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return LinComb()
        r = LinComb.__new__(LinComb)
        r.terms = {k: v * c for k, v in self.terms.items()}
        return r

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def map_keys(self, f):
        """Apply f to every key and merge coefficients."""
        return LinComb((f(k), c) for k, c in self.terms.items())

    def map_terms(self, f):
        """f(key, coeff) -> LinComb; sum the images (linear extension)."""
        out = LinComb()
        for k, c in self.terms.items():
            out = out + f(k, c)
        return out

    def filtered(self, pred):
        return LinComb((k, c) for k, c in self.terms.items() if pred(k))

    def normalized(self):
        """Scale so the coefficient of the least key is 1 (for dedup)."""
        if not self.terms:
            return self
        lead = min(self.terms)
        return self.scale(1 / self.terms[lead])

    def max_degree(self):
        return max((k.n for k in self.terms), default=0)


def as_lincomb(x):
    return x if isinstance(x, LinComb) else LinComb.single(x)
