"""Shared generators and golden fixtures for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from minctrl.linalg import rank_exact
from minctrl.matrices import RationalMatrix
from minctrl.reductions import HittingSetInstance

# Golden 8x8 pair for the four-set instance over {1,2,3}: the eigenvector
# matrix and the system matrix it conjugates out of diag(1..8).
GOLDEN_INSTANCE_SETS = [[1, 2], [2, 3], [1, 3], [1, 2, 3]]

GOLDEN_V_ROWS = [
    [2, 0, 0, 0, 0, 0, 0, 1],
    [0, 2, 0, 0, 0, 0, 0, 1],
    [0, 0, 2, 0, 0, 0, 0, 1],
    [1, 1, 0, 4, 0, 0, 0, 0],
    [0, 1, 1, 0, 4, 0, 0, 0],
    [1, 0, 1, 0, 0, 4, 0, 0],
    [1, 1, 1, 0, 0, 0, 4, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
]

GOLDEN_A_ROWS = [
    ["1", "0", "0", "0", "0", "0", "0", "-7/2"],
    ["0", "2", "0", "0", "0", "0", "0", "-3"],
    ["0", "0", "3", "0", "0", "0", "0", "-5/2"],
    ["3/4", "1/2", "0", "4", "0", "0", "0", "13/8"],
    ["0", "3/4", "1/2", "0", "5", "0", "0", "11/8"],
    ["5/4", "0", "3/4", "0", "0", "6", "0", "3/2"],
    ["3/2", "5/4", "1", "0", "0", "0", "7", "9/4"],
    ["0", "0", "0", "0", "0", "0", "0", "8"],
]


def golden_instance() -> HittingSetInstance:
    return HittingSetInstance.from_sets(3, GOLDEN_INSTANCE_SETS)


def golden_V() -> RationalMatrix:
    return RationalMatrix.from_rows(GOLDEN_V_ROWS)


def golden_A() -> RationalMatrix:
    return RationalMatrix.from_rows(GOLDEN_A_ROWS)


def random_instance(rng: random.Random, max_m: int = 5, max_p: int = 5) -> HittingSetInstance:
    """Random valid instance: nonempty sets, every element covered."""
    m = rng.randint(2, max_m)
    p = rng.randint(1, max_p)
    sets = [
        set(rng.sample(range(1, m + 1), rng.randint(1, m))) for _ in range(p)
    ]
    for element in range(1, m + 1):
        if not any(element in s for s in sets):
            sets[rng.randrange(p)].add(element)
    return HittingSetInstance.from_sets(m, [sorted(s) for s in sets])


def random_invertible_rational(rng: random.Random, n: int, magnitude: int = 5) -> RationalMatrix:
    """Random integer-entry matrix, resampled until exactly invertible."""
    while True:
        rows = [
            [rng.randint(-magnitude, magnitude) for _ in range(n)]
            for _ in range(n)
        ]
        mat = RationalMatrix.from_rows(rows)
        if rank_exact(mat) == n:
            return mat


def random_unimodular(rng: random.Random, n: int, ops: int = 12) -> RationalMatrix:
    """Product of integer elementary row operations: det +-1, integer inverse."""
    rows = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(ops):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
    return RationalMatrix.from_rows(rows)


def random_jordan_spec(rng: random.Random, max_n: int = 6):
    """Random exact Jordan data: distinct eigenvalues, invertible transform."""
    from minctrl.linalg import JordanSpec

    n = rng.randint(2, max_n)
    sizes = []
    left = n
    while left:
        d = rng.randint(1, left)
        sizes.append(d)
        left -= d
    eigenvalues = rng.sample(range(-6, 7), len(sizes))
    t_inv = random_invertible_rational(rng, n, magnitude=3)
    return JordanSpec(
        block_eigenvalues=tuple(Fraction(e) for e in eigenvalues),
        block_sizes=tuple(sizes),
        t_inverse=t_inv,
    )
