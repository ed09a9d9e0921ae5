"""Exact and near-exact identity checks over primes and finite sequences.

Everything here evaluates both sides of an identity by independent routes
and reports the disagreement.  Sums are accumulated with math.fsum (exact
to one final rounding), so the tolerances below are dominated by per-term
rounding, not by accumulation.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bounds import log_spaced_integers
from .sieve import DEFAULT_SEGMENT_SIZE, primes_array
from .sums import accumulate_checkpoints

EPS = sys.float_info.epsilon

REL_TOL_EXACT = 1e-12  # identities exact in real arithmetic
REL_TOL_LOG_SUMS = 1e-10  # n-term log sums, n up to 1e5
LOG_BOUND_SLACK = 4.0 * EPS


@dataclass
class IdentityVerdict:
    lhs: float
    rhs: float
    abs_diff: float
    rel_diff: float
    passed: bool


def _verdict(lhs: float, rhs: float, tol: float) -> IdentityVerdict:
    abs_diff = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    rel_diff = abs_diff / scale if scale > 0.0 else 0.0
    passed = rel_diff <= tol or (abs(lhs) < 1.0 and abs_diff <= tol)
    return IdentityVerdict(lhs, rhs, abs_diff, rel_diff, passed)


def log_one_minus_bound(x: float) -> IdentityVerdict:
    """Check -ln(1 - x) <= x + x^2 on [0, 1/2] (equality only at 0)."""
    if not 0.0 <= x <= 0.5:
        raise ValueError(f"bound holds on [0, 0.5], got {x}")
    lhs = -math.log1p(-x)
    rhs = x + x * x
    v = _verdict(lhs, rhs, REL_TOL_EXACT)
    v.passed = lhs <= rhs + LOG_BOUND_SLACK
    return v


@dataclass
class SequencePair:
    """Finite sequences f, g over the index window [m, n+1].

    Position i - m of each list holds the value at index i; both lists must
    reach index n + 1 because the summation-by-parts identity references
    f_{n+1} and g_{n+1}.
    """

    f: Sequence[float]
    g: Sequence[float]
    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValueError(f"window start must be >= 1, got m={self.m}")
        if self.n < self.m:
            raise ValueError(f"window must satisfy m <= n, got [{self.m}, {self.n}]")
        need = self.n - self.m + 2
        if len(self.f) < need or len(self.g) < need:
            raise IndexError(
                f"sequences must cover indices {self.m}..{self.n + 1} "
                f"({need} entries), got lengths {len(self.f)} and {len(self.g)}"
            )


def abel_identity_eval(seq: SequencePair) -> IdentityVerdict:
    """Evaluate both sides of summation by parts and compare.

    sum_{i=m}^{n} f_i (g_{i+1} - g_i)
        = f_{n+1} g_{n+1} - f_m g_m - sum_{i=m}^{n} g_{i+1} (f_{i+1} - f_i)
    """
    m, n = seq.m, seq.n
    f = [float(v) for v in seq.f[: n - m + 2]]
    g = [float(v) for v in seq.g[: n - m + 2]]
    lhs = math.fsum(f[i] * (g[i + 1] - g[i]) for i in range(n - m + 1))
    tail = math.fsum(g[i + 1] * (f[i + 1] - f[i]) for i in range(n - m + 1))
    rhs = f[-1] * g[-1] - f[0] * g[0] - tail
    return _verdict(lhs, rhs, REL_TOL_EXACT)


def _stieltjes_rhs(x: int, primes: np.ndarray) -> float:
    # pi(x)/x + integral of pi(t)/t^2 over [1.9, x], the integral taken
    # exactly as a finite sum over the jumps of the step function pi.
    k = int(np.searchsorted(primes, x, side="right"))
    ps = primes[:k].astype(np.float64)
    inv = 1.0 / ps
    nxt = np.empty_like(inv)
    nxt[:-1] = inv[1:]
    nxt[-1] = 1.0 / float(x)
    weights = np.arange(1, k + 1, dtype=np.float64)
    integral = math.fsum((weights * (inv - nxt)).tolist())
    return k / float(x) + integral


def stieltjes_identity_check(
    x: int,
    primes: np.ndarray | None = None,
    s_lhs: float | None = None,
) -> IdentityVerdict:
    """S(x) against pi(x)/x + integral(pi(t)/t^2, t=1.9..x), exactly.

    pi vanishes on [1.9, 2), so the literal lower limit 1.9 contributes
    nothing; it is kept to match the partial-integration statement.
    """
    x = int(x)
    if x < 2:
        raise ValueError(f"identity needs x >= 2, got {x}")
    if primes is None:
        primes = primes_array(x)
    if s_lhs is None:
        s_lhs = accumulate_checkpoints(x, [x])[0].s
    return _verdict(s_lhs, _stieltjes_rhs(x, primes), REL_TOL_EXACT)


def stieltjes_grid(limit: int, prime_limit: int = 10**4) -> list[int]:
    """Scan grid: log-spaced thresholds plus every prime and prime+/-1."""
    xs = set(log_spaced_integers(2, limit))
    for p in primes_array(min(prime_limit, limit)).tolist():
        for x in (p - 1, p, p + 1):
            if 2 <= x <= limit:
                xs.add(x)
    return sorted(xs)


def stieltjes_scan(
    xs: Sequence[int],
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> list[tuple[int, IdentityVerdict]]:
    """stieltjes_identity_check at many thresholds from one sieve pass."""
    pts = sorted({int(x) for x in xs})
    if not pts or pts[0] < 2:
        raise ValueError("scan needs a non-empty list of thresholds >= 2")
    rows = accumulate_checkpoints(pts[-1], pts, segment_size, workers)
    primes = primes_array(pts[-1])
    return [
        (row.x, stieltjes_identity_check(row.x, primes=primes, s_lhs=row.s))
        for row in rows
    ]


def _require_prime(p: int) -> None:
    if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"{p} is not prime")


def _vp_unchecked(n: int, p: int) -> int:
    total = 0
    q = p
    while q <= n:
        total += n // q
        q *= p
    return total


def legendre_vp(n: int, p: int) -> int:
    """Exponent of the prime p in n!, i.e. sum of floor(n / p^k)."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    _require_prime(p)
    return _vp_unchecked(n, p)


@dataclass
class FactorialLogCheck:
    identity: IdentityVerdict
    stirling_ratio: float  # (ln n! - n ln n) / n, in [-1, 0] for n >= 1
    stirling_ok: bool


def factorial_log_identity(n: int) -> FactorialLogCheck:
    """ln(n!) summed directly against its prime-power decomposition.

    lhs = sum of ln j for j = 2..n; rhs = sum over primes p <= n of
    ln(p) * vp(n!).  Also reports the weak-Stirling ratio, which stays in
    [-1, 0] because (n/e)^n <= n! <= n^n.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    lhs = math.fsum(np.log(np.arange(2, n + 1, dtype=np.float64)).tolist())
    rhs = math.fsum(
        math.log(p) * _vp_unchecked(n, p) for p in primes_array(n).tolist()
    )
    ratio = (lhs - n * math.log(n)) / n
    return FactorialLogCheck(
        identity=_verdict(lhs, rhs, REL_TOL_LOG_SUMS),
        stirling_ratio=ratio,
        stirling_ok=-1.0 <= ratio <= 0.0,
    )


@dataclass
class EulerProductCheck:
    product: Fraction  # exact finite Euler product over p <= n
    partial_smooth_sum: float  # sum of 1/j over n-smooth j <= cutoff
    bracket_ok: bool


def _smooth_values(primes: list[int], cutoff: int) -> list[int]:
    # Every n-smooth value <= cutoff, generated by multiplying prime powers
    # with non-decreasing factors; no integer is ever factored.
    out = [1]

    def extend(start: int, value: int) -> None:
        for i in range(start, len(primes)):
            nxt = value * primes[i]
            if nxt > cutoff:
                break
            out.append(nxt)
            extend(i, nxt)

    extend(0, 1)
    return out


def euler_product_check(n: int, cutoff: int) -> EulerProductCheck:
    """Bracket the finite Euler product by partial sums over smooth numbers.

    prod_{p <= n} (1 - 1/p)^(-1) equals the full sum of 1/j over n-smooth j,
    so truncating at a cutoff must undershoot the exact rational product,
    with the gap shrinking as the cutoff grows (checked at cutoff/2).
    """
    if not 2 <= n <= 50:
        raise ValueError(f"exact product supported for 2 <= n <= 50, got {n}")
    if cutoff < n:
        raise ValueError(f"cutoff must be >= n, got {cutoff} < {n}")
    ps = [int(p) for p in primes_array(n)]
    product = Fraction(1)
    for p in ps:
        product *= Fraction(p, p - 1)
    smooth = _smooth_values(ps, cutoff)
    partial = math.fsum(1.0 / j for j in smooth)
    partial_half = math.fsum(1.0 / j for j in smooth if j <= cutoff // 2)
    bracket_ok = Fraction(partial) < product and partial > partial_half
    return EulerProductCheck(product, partial, bracket_ok)
