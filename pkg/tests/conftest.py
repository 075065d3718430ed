"""Shared random-diagram generators for the test suite."""

import random

from arrowforms.diagrams import ArrowDiagram, BasedDiagram, GaussDiagram

DEFAULT_MARKS = tuple(range(-2, 4))


def random_arrows(rng, n, marks=DEFAULT_MARKS, signed=False):
    pos = list(range(2 * n))
    rng.shuffle(pos)
    return [
        (
            pos[2 * i],
            pos[2 * i + 1],
            rng.choice(marks),
            rng.choice((1, -1)) if signed else 0,
        )
        for i in range(n)
    ]


def random_arrow_diagram(rng, n, K, marks=DEFAULT_MARKS):
    return ArrowDiagram(K, random_arrows(rng, n, marks))


def random_gauss_diagram(rng, n, K, marks=DEFAULT_MARKS):
    return GaussDiagram(K, random_arrows(rng, n, marks, signed=True))


def random_based_diagram(rng, n, K, marks=DEFAULT_MARKS):
    d = random_arrow_diagram(rng, n, K, marks)
    return BasedDiagram(d, rng.randrange(2 * d.n))


def seeded(seed=0):
    return random.Random(seed)
