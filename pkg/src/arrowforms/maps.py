"""Structural maps between diagram spaces and the four pairings.

The maps: S (signed expansion of an arrow diagram), I (subdiagram sum of a
Gauss diagram), the degree projections, the orthonormal pairing ( , ), its
automorphism-normalized version < , >, and the subset-counting brackets
(( , )) and << , >>.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

from .diagrams import ArrowDiagram, BasedDiagram, GaussDiagram
from .lincomb import LinComb, as_lincomb


def sign_expand_S(x):
    """S(A) = sum over sign assignments s of sign(s) * A^s, extended linearly."""
    x = as_lincomb(x)

    def expand(a, c):
        out = []
        for signs in product((1, -1), repeat=a.n):
            prod = 1
            for s in signs:
                prod *= s
            out.append((a.with_signs(signs), c * prod))
        return LinComb(out)

    return x.map_terms(expand)


def subdiagram_expand_I(x):
    """I(G) = formal sum of all subdiagrams of G, extended linearly."""
    x = as_lincomb(x)

    def expand(g, c):
        out = []
        idx = range(g.n)
        for k in range(g.n + 1):
            for sub in combinations(idx, k):
                out.append((g.subdiagram(sub), c))
        return LinComb(out)

    return x.map_terms(expand)


def project_pi(x, n):
    """Orthogonal projection onto the degree-n part."""
    return as_lincomb(x).filtered(lambda k: k.n == n)


def principal_part(x):
    x = as_lincomb(x)
    return project_pi(x, x.max_degree())


def pair_ortho(x, y):
    """( , ): orthonormal with respect to the diagram basis."""
    x, y = as_lincomb(x), as_lincomb(y)
    if len(y) < len(x):
        x, y = y, x
    total = Fraction(0)
    for k, c in x.items():
        total += c * y.coeff(k)
    return total


def pair_norm(x, y):
    """< , >: ( , ) rescaled by |Aut| of the diagram."""
    x, y = as_lincomb(x), as_lincomb(y)
    if len(y) < len(x):
        x, y = y, x
    total = Fraction(0)
    for k, c in x.items():
        cy = y.coeff(k)
        if cy:
            total += c * cy * k.aut_order()
    return total


def double_paren(a, g):
    """((A, G)): over subdiagrams of G matching A after forgetting signs,
    sum the products of signs.  Zero when deg A > deg G."""
    k = a.n
    if k > g.n:
        return 0
    total = 0
    for sub in combinations(range(g.n), k):
        d = g.subdiagram(sub)
        if d.forget_signs() == a:
            prod = 1
            for i in sub:
                prod *= g.arrows[i][3]
            total += prod
    return total


def double_angle(a, g):
    """<<A, G>> = |Aut(A)| * ((A, G)), extended bilinearly."""
    a, g = as_lincomb(a), as_lincomb(g)
    total = Fraction(0)
    for ka, ca in a.items():
        aut = ka.aut_order()
        for kg, cg in g.items():
            total += ca * cg * aut * double_paren(ka, kg)
    return total


def base_expand(a):
    """The sum of all based diagrams obtained by choosing a base arc.

    The empty diagram has no arcs, so it maps to 0.  Extended linearly."""
    a = as_lincomb(a)

    def expand(d, c):
        return LinComb((BasedDiagram(d, arc), c) for arc in range(2 * d.n))

    return a.map_terms(expand)
