"""Compensated accumulation of the four prime sums S, A, Q, L.

S(x) = sum 1/p, A(x) = sum ln(p)/p, Q(x) = sum 1/p^2 and
L(x) = sum ln(p)/(p^2 - p), each over primes p <= x.

Accumulation is Kahan-Neumaier, applied term by term in ascending prime
order.  Because the running (sum, compensation) pair is carried across
segment boundaries, the result depends only on the term sequence, never on
how the sieve windows were sized or which worker produced them.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .sieve import (
    DEFAULT_SEGMENT_SIZE,
    iter_checkpoint_events,
    iter_prime_arrays,
    _validate_points,
)

EPS = sys.float_info.epsilon

# Numeric caps standing in for boundedness claims: Q is below sum 1/i^2
# (pi^2/6 ~ 1.6449) and L is below the convergent sum ln(j)/(j^2 - j).
Q_CAP = 1.645
L_CAP = 2.0

NO_NUMBA_ENV = "MERTENS_NO_NUMBA"


def _kahan_neumaier_py(s: float, c: float, terms) -> tuple[float, float]:
    for x in terms:
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s, c


def _kahan_neumaier_loop(s, c, arr):  # numba-compilable twin of the above
    for i in range(arr.shape[0]):
        x = arr[i]
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s, c


_kernel = None


def _array_kernel():
    """Return the array accumulation kernel, JIT-compiled when available."""
    global _kernel
    if _kernel is None:
        _kernel = lambda s, c, arr: _kahan_neumaier_py(s, c, arr.tolist())
        if not os.environ.get(NO_NUMBA_ENV):
            try:
                from numba import njit

                _kernel = njit(cache=True)(_kahan_neumaier_loop)
            except ImportError:
                pass
    return _kernel


class CompensatedAccumulator:
    """Kahan-Neumaier running sum: float result plus a compensation term.

    After k additions of magnitude <= 1 the accumulated error stays below
    4*k*eps*max|partial|, far better than naive addition's k*eps growth.
    """

    __slots__ = ("sum", "compensation")

    def __init__(self, value: float = 0.0) -> None:
        self.sum = float(value)
        self.compensation = 0.0

    def add(self, x: float) -> None:
        self.sum, self.compensation = _kahan_neumaier_py(self.sum, self.compensation, (x,))

    def add_array(self, arr: np.ndarray) -> None:
        self.sum, self.compensation = _array_kernel()(self.sum, self.compensation, arr)

    @property
    def value(self) -> float:
        return self.sum + self.compensation

    def __repr__(self) -> str:
        return f"CompensatedAccumulator({self.value!r})"


@dataclass
class CheckpointRow:
    """The four prime sums (plus the exact prime count) at threshold x."""

    x: int
    pi_x: int
    s: float
    a: float
    q: float
    l: float


def _term_arrays(values: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    pf = values.astype(np.float64)
    inv = 1.0 / pf
    logs = np.log(pf)
    return inv, logs / pf, 1.0 / (pf * pf), logs / (pf * pf - pf)


def accumulate_checkpoints(
    n_max: int,
    points: Sequence[int],
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> list[CheckpointRow]:
    """One sieve pass emitting a CheckpointRow per requested point.

    Points must be strictly ascending with points[-1] <= n_max.  Rows are
    bit-identical for any segment size and worker count.
    """
    pts = _validate_points(points)
    if pts[-1] > n_max:
        raise ValueError(f"last checkpoint {pts[-1]} exceeds n_max {n_max}")
    acc_s = CompensatedAccumulator()
    acc_a = CompensatedAccumulator()
    acc_q = CompensatedAccumulator()
    acc_l = CompensatedAccumulator()
    count = 0
    rows: list[CheckpointRow] = []
    arrays = iter_prime_arrays(pts[-1], segment_size, workers)
    for kind, payload in iter_checkpoint_events(arrays, pts):
        if kind == "terms":
            t_s, t_a, t_q, t_l = _term_arrays(payload)
            acc_s.add_array(t_s)
            acc_a.add_array(t_a)
            acc_q.add_array(t_q)
            acc_l.add_array(t_l)
            count += len(payload)
        else:
            rows.append(
                CheckpointRow(
                    x=payload,
                    pi_x=count,
                    s=acc_s.value,
                    a=acc_a.value,
                    q=acc_q.value,
                    l=acc_l.value,
                )
            )
    return rows


def rows_as_arrays(rows: Sequence[CheckpointRow]) -> dict[str, np.ndarray]:
    """Columnar view of checkpoint rows for vectorized scans."""
    return {
        "x": np.array([r.x for r in rows], dtype=np.int64),
        "pi": np.array([r.pi_x for r in rows], dtype=np.int64),
        "s": np.array([r.s for r in rows], dtype=np.float64),
        "a": np.array([r.a for r in rows], dtype=np.float64),
        "q": np.array([r.q for r in rows], dtype=np.float64),
        "l": np.array([r.l for r in rows], dtype=np.float64),
    }
