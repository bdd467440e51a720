"""Greedy actuator-selection solvers.

Three solvers, all built on the same sweep structure: repeatedly scan the
unused coordinates, score each candidate by the rank increase it gives the
controllability matrix, and commit the best one (ties go to the lowest
index, then the lowest probe value). A sweep that cannot increase the rank
ends the solve.

* ``randomized_greedy_vector`` -- scores coordinate ``j`` with a fresh
  standard-normal draw placed at ``j`` (seeded, reproducible).
* ``deterministic_greedy_vector`` -- replaces the random draw by probing the
  values ``1..2n+1``; a nonzero rank-increase polynomial of degree <= 2n
  cannot vanish on all of them, so the best probe attains the generic
  increase.
* ``greedy_diagonal`` -- grows a diagonal input matrix one unit entry at a
  time.

Rank backends: ``"exact"`` (fraction-free elimination over the rationals),
``"pbh"`` (count eigenvectors non-orthogonal to the candidate; distinct
eigenvalues only, far better conditioned than SVD on the controllability
matrix), and ``"svd"`` (thresholded singular values).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Callable, Iterable, Sequence

import numpy as np

from minctrl._kernels import integer_rank
from minctrl.errors import (
    BackendPreconditionError,
    InternalVerificationError,
    InvalidInputError,
)
from minctrl.linalg import (
    DEFAULT_EIGEN_GAP,
    DEFAULT_ORTH_TOL_SCALE,
    left_eigensystem,
    rank_numeric,
)
from minctrl.matrices import Matrix, RationalMatrix, as_dense, as_rational

RANK_BACKENDS = ("exact", "pbh", "svd")


@dataclass(frozen=True)
class TraceStep:
    step: int
    chosen_index: int
    chosen_value: float
    rank_before: int
    rank_after: int


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one greedy solve, with the full per-step trace."""

    n: int
    support: tuple[int, ...]
    values: tuple[float, ...]
    final_rank: int
    controllable: bool
    backend: str
    trace: tuple[TraceStep, ...]

    def __post_init__(self):
        if len(set(self.support)) != len(self.support):
            raise InternalVerificationError("duplicate support index")
        if len(self.values) != len(self.support):
            raise InternalVerificationError("values/support length mismatch")
        ranks = [t.rank_before for t in self.trace] + (
            [self.trace[-1].rank_after] if self.trace else []
        )
        if any(b >= a for b, a in zip(ranks, ranks[1:])):
            raise InternalVerificationError("trace ranks must strictly increase")
        if self.controllable and self.final_rank != self.n:
            raise InternalVerificationError("controllable requires full rank")

    @property
    def sparsity(self) -> int:
        return len(self.support)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "n": self.n,
            "support": list(self.support),
            "values": list(self.values),
            "final_rank": self.final_rank,
            "controllable": self.controllable,
            "backend": self.backend,
            "trace": [
                {
                    "step": t.step,
                    "chosen_index": t.chosen_index,
                    "chosen_value": t.chosen_value,
                    "rank_before": t.rank_before,
                    "rank_after": t.rank_after,
                }
                for t in self.trace
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


# ---------------------------------------------------------------------------
# rank oracles


def _reduce_column(col: list[int]) -> list[int]:
    g = 0
    for v in col:
        g = gcd(g, v)
    if g > 1:
        return [v // g for v in col]
    return col


class _ExactPowers:
    """Integer-scaled powers of a rational matrix, stored column-wise.

    Scaling ``A`` by the common denominator multiplies the k-th power block
    of the controllability matrix by a positive constant, which leaves every
    rank unchanged, so all arithmetic stays in (fast) plain integers.
    """

    def __init__(self, A: RationalMatrix):
        n = A.rows
        if A.cols != n:
            raise InvalidInputError(f"A must be square, got {A.rows}x{A.cols}")
        self.n = n
        scale = reduce(lcm, (x.denominator for row in A.data for x in row), 1)
        scaled = [[int(x * scale) for x in row] for row in A.data]
        power = [[int(i == j) for j in range(n)] for i in range(n)]
        self.columns: list[list[list[int]]] = []  # [k][j] -> column vector
        for k in range(n):
            if k:
                power = [
                    [
                        sum(prow[t] * scaled[t][j] for t in range(n))
                        for j in range(n)
                    ]
                    for prow in power
                ]
            self.columns.append(
                [[power[i][j] for i in range(n)] for j in range(n)]
            )

    def vector_columns(self, b_int: list[int]) -> list[list[int]]:
        n = self.n
        cols = []
        for k in range(n):
            pk = self.columns[k]
            cols.append(
                [
                    sum(pk[j][i] * b_int[j] for j in range(n) if b_int[j])
                    for i in range(n)
                ]
            )
        return cols


class _ExactVectorOracle:
    name = "exact"
    zero = Fraction(0)

    def __init__(self, A: Matrix, **_):
        self._powers = _ExactPowers(as_rational(A))
        self.n = self._powers.n
        self._scale = 1
        self._cols: list[list[int]] = []

    @staticmethod
    def value(x) -> Fraction:
        return Fraction(x)

    def begin_sweep(self, b: list[Fraction]) -> None:
        scale = reduce(lcm, (x.denominator for x in b), 1)
        self._scale = scale
        self._cols = self._powers.vector_columns([int(x * scale) for x in b])

    def rank(self, b: list[Fraction]) -> int:
        self.begin_sweep(b)
        return integer_rank([_reduce_column(c) for c in self._cols])

    def rank_with(self, b: list[Fraction], j: int, value: Fraction) -> int:
        scale = lcm(self._scale, value.denominator)
        mult = scale // self._scale
        shift = int(value * scale)
        cols = []
        for k in range(self.n):
            base = self._cols[k]
            pcol = self._powers.columns[k][j]
            cols.append(
                _reduce_column(
                    [mult * base[i] + shift * pcol[i] for i in range(self.n)]
                )
            )
        return integer_rank(cols)


class _PbhVectorOracle:
    name = "pbh"
    zero = 0.0

    def __init__(
        self,
        A: Matrix,
        gap_threshold: float = DEFAULT_EIGEN_GAP,
        orth_tol_scale: float = DEFAULT_ORTH_TOL_SCALE,
    ):
        dense = as_dense(A)
        if dense.rows != dense.cols:
            raise InvalidInputError(f"A must be square, got {dense.rows}x{dense.cols}")
        eig = left_eigensystem(dense, cluster_gap=gap_threshold)
        if eig.min_pairwise_gap <= gap_threshold:
            raise BackendPreconditionError(
                "pbh rank backend requires distinct eigenvalues "
                f"(min gap {eig.min_pairwise_gap:.3e} <= {gap_threshold:.3e})"
            )
        self.n = dense.rows
        self._rows = eig.left_eigenvectors
        self._tol_scale = orth_tol_scale
        self._products = np.zeros(self.n, dtype=complex)
        self._norm_sq = 0.0

    @staticmethod
    def value(x) -> float:
        return float(x)

    def begin_sweep(self, b: list[float]) -> None:
        vec = np.asarray(b, dtype=np.float64)
        self._products = self._rows @ vec
        self._norm_sq = float(vec @ vec)

    def _count(self, products: np.ndarray, norm_sq: float) -> int:
        tol = self._tol_scale * float(np.sqrt(norm_sq))
        return int(self.n - np.count_nonzero(np.abs(products) <= tol))

    def rank(self, b: list[float]) -> int:
        self.begin_sweep(b)
        return self._count(self._products, self._norm_sq)

    def rank_with(self, b: list[float], j: int, value: float) -> int:
        products = self._products + value * self._rows[:, j]
        return self._count(products, self._norm_sq + value * value)


class _SvdVectorOracle:
    name = "svd"
    zero = 0.0

    def __init__(self, A: Matrix, **_):
        dense = as_dense(A)
        if dense.rows != dense.cols:
            raise InvalidInputError(f"A must be square, got {dense.rows}x{dense.cols}")
        self.n = dense.rows
        self._arr = dense.array

    @staticmethod
    def value(x) -> float:
        return float(x)

    def begin_sweep(self, b: list[float]) -> None:
        pass

    def rank(self, b: list[float]) -> int:
        n = self.n
        ctrb = np.empty((n, n))
        v = np.asarray(b, dtype=np.float64)
        for k in range(n):
            ctrb[:, k] = v
            v = self._arr @ v
        return rank_numeric(ctrb)

    def rank_with(self, b: list[float], j: int, value: float) -> int:
        candidate = list(b)
        candidate[j] = candidate[j] + value
        return self.rank(candidate)


class _ExactDiagonalOracle:
    name = "exact"

    def __init__(self, A: Matrix, **_):
        self._powers = _ExactPowers(as_rational(A))
        self.n = self._powers.n

    def _columns(self, support: Sequence[int]) -> list[list[int]]:
        return [
            _reduce_column(self._powers.columns[k][j])
            for j in support
            for k in range(self.n)
        ]

    def begin_sweep(self, support: Sequence[int]) -> None:
        pass

    def rank(self, support: Sequence[int]) -> int:
        if not support:
            return 0
        return integer_rank(self._columns(support))

    def rank_with(self, support: Sequence[int], j: int) -> int:
        return self.rank(list(support) + [j])


class _PbhDiagonalOracle:
    name = "pbh"

    def __init__(
        self,
        A: Matrix,
        gap_threshold: float = DEFAULT_EIGEN_GAP,
        orth_tol_scale: float = DEFAULT_ORTH_TOL_SCALE,
    ):
        vec_oracle = _PbhVectorOracle(A, gap_threshold, orth_tol_scale)
        self.n = vec_oracle.n
        # unit-norm rows and unit probe values: a fixed entry threshold
        self._nonzero = np.abs(vec_oracle._rows) > orth_tol_scale
        self._covered = np.zeros(self.n, dtype=bool)

    def begin_sweep(self, support: Sequence[int]) -> None:
        if support:
            self._covered = self._nonzero[:, list(support)].any(axis=1)
        else:
            self._covered = np.zeros(self.n, dtype=bool)

    def rank(self, support: Sequence[int]) -> int:
        self.begin_sweep(support)
        return int(np.count_nonzero(self._covered))

    def rank_with(self, support: Sequence[int], j: int) -> int:
        return int(np.count_nonzero(self._covered | self._nonzero[:, j]))


class _SvdDiagonalOracle:
    name = "svd"

    def __init__(self, A: Matrix, **_):
        dense = as_dense(A)
        if dense.rows != dense.cols:
            raise InvalidInputError(f"A must be square, got {dense.rows}x{dense.cols}")
        self.n = dense.rows
        n = self.n
        power = np.eye(n)
        self._power_cols = []
        for _ in range(n):
            self._power_cols.append(power.copy())
            power = dense.array @ power

    def begin_sweep(self, support: Sequence[int]) -> None:
        pass

    def rank(self, support: Sequence[int]) -> int:
        if not support:
            return 0
        cols = np.column_stack(
            [p[:, j] for j in support for p in self._power_cols]
        )
        return rank_numeric(cols)

    def rank_with(self, support: Sequence[int], j: int) -> int:
        return self.rank(list(support) + [j])


_VECTOR_ORACLES = {
    "exact": _ExactVectorOracle,
    "pbh": _PbhVectorOracle,
    "svd": _SvdVectorOracle,
}
_DIAGONAL_ORACLES = {
    "exact": _ExactDiagonalOracle,
    "pbh": _PbhDiagonalOracle,
    "svd": _SvdDiagonalOracle,
}


def _make_oracle(table: dict, A: Matrix, backend: str, gap_threshold: float):
    if backend not in table:
        raise InvalidInputError(
            f"unknown rank backend {backend!r}; expected one of {RANK_BACKENDS}"
        )
    return table[backend](A, gap_threshold=gap_threshold)


# ---------------------------------------------------------------------------
# solver loops


def _solve_vector(
    oracle, probe_values: Callable[[int], Iterable], backend: str
) -> SolveResult:
    n = oracle.n
    b = [oracle.zero] * n
    rank_b = oracle.rank(b)
    trace: list[TraceStep] = []
    step = 0
    while rank_b < n:
        oracle.begin_sweep(b)
        cap = n - rank_b
        best_c = 0
        best_j = -1
        best_v = oracle.zero
        stop = False
        for j in range(n):
            if b[j] != oracle.zero:
                continue
            for value in probe_values(j):
                c = oracle.rank_with(b, j, value) - rank_b
                if c > best_c:
                    best_c, best_j, best_v = c, j, value
                    if c == cap:
                        stop = True
                        break
            if stop:
                break
        if best_c <= 0:
            break
        b[best_j] = best_v
        trace.append(
            TraceStep(step, best_j, float(best_v), rank_b, rank_b + best_c)
        )
        rank_b += best_c
        step += 1
    support = tuple(t.chosen_index for t in trace)
    values = tuple(t.chosen_value for t in trace)
    return SolveResult(
        n=n,
        support=support,
        values=values,
        final_rank=rank_b,
        controllable=rank_b == n,
        backend=backend,
        trace=tuple(trace),
    )


def randomized_greedy_vector(
    A: Matrix,
    seed: int,
    rank_backend: str = "exact",
    *,
    gap_threshold: float = DEFAULT_EIGEN_GAP,
) -> SolveResult:
    """Greedy sparse-vector solve scored with standard-normal draws.

    Draws come from numpy's PCG64 generator seeded with ``seed``; one fresh
    draw per still-zero coordinate per sweep, consumed in index order, so
    identical ``(A, seed)`` always produce identical results.
    """
    oracle = _make_oracle(_VECTOR_ORACLES, A, rank_backend, gap_threshold)
    rng = np.random.default_rng(seed)

    def probes(_j: int):
        return (oracle.value(rng.standard_normal()),)

    return _solve_vector(oracle, probes, rank_backend)


def deterministic_greedy_vector(
    A: Matrix,
    rank_backend: str = "exact",
    *,
    gap_threshold: float = DEFAULT_EIGEN_GAP,
) -> SolveResult:
    """Greedy sparse-vector solve probing each coordinate with 1..2n+1."""
    oracle = _make_oracle(_VECTOR_ORACLES, A, rank_backend, gap_threshold)
    probe_range = range(1, 2 * oracle.n + 2)

    def probes(_j: int):
        return (oracle.value(p) for p in probe_range)

    return _solve_vector(oracle, probes, rank_backend)


def greedy_diagonal(
    A: Matrix,
    rank_backend: str = "exact",
    *,
    gap_threshold: float = DEFAULT_EIGEN_GAP,
) -> SolveResult:
    """Greedy diagonal-input solve: add unit diagonal entries until full rank.

    Because the identity input always controls the system, an exact rank
    backend can stall only at full rank.
    """
    oracle = _make_oracle(_DIAGONAL_ORACLES, A, rank_backend, gap_threshold)
    n = oracle.n
    support: list[int] = []
    rank_s = oracle.rank(support)
    trace: list[TraceStep] = []
    step = 0
    while rank_s < n:
        oracle.begin_sweep(support)
        cap = n - rank_s
        best_c = 0
        best_j = -1
        for j in range(n):
            if j in support:
                continue
            c = oracle.rank_with(support, j) - rank_s
            if c > best_c:
                best_c, best_j = c, j
                if c == cap:
                    break
        if best_c <= 0:
            break
        support.append(best_j)
        trace.append(TraceStep(step, best_j, 1.0, rank_s, rank_s + best_c))
        rank_s += best_c
        step += 1
    return SolveResult(
        n=n,
        support=tuple(support),
        values=tuple(1.0 for _ in support),
        final_rank=rank_s,
        controllable=rank_s == n,
        backend=rank_backend,
        trace=tuple(trace),
    )
