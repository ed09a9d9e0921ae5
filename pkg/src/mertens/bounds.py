"""Inequality scans, the Mertens constant, and beyond-sieve extrapolation.

Every check reports a BoundReport with the worst signed margin (rhs - lhs)
over the scanned range; a violation is a strictly negative margin.  Scans
are exhaustive where cheap and log-spaced (256 points per decade) beyond,
since the scanned quantities only change at primes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .sieve import DEFAULT_SEGMENT_SIZE, primes_array
from .sums import CheckpointRow, L_CAP, Q_CAP, accumulate_checkpoints, rows_as_arrays


@dataclass(frozen=True)
class MertensConstants:
    """Reference constants for the prime harmonic sum S(x) ~ ln ln x + B."""

    B: float = 0.261497212847643
    euler_slack: float = 0.48  # S(n) >= ln ln n - euler_slack
    rs_min_n: int = 286  # threshold for the Rosser-Schoenfeld envelope


CONSTANTS = MertensConstants()
MERTENS_B = CONSTANTS.B
RESIDUAL_CAP = 2.0  # |A(x) - ln x| stays below this on every scanned range

LOG_POINTS_PER_DECADE = 256


@dataclass
class BoundReport:
    name: str
    lo: int
    hi: int
    scanned: int
    violations: int
    worst_margin: float
    worst_arg: int


@dataclass
class RosserSchoenfeldCheck:
    """Both variants of the envelope's upper correction, reported separately.

    symmetric uses 1/(2 (ln n)^2) on both sides (the standard form);
    asymmetric keeps the lower correction but tightens the upper one to
    1/((2 ln n)^2) = 1/(4 (ln n)^2).  The asymmetric form is numerically
    false near n = 286, so callers normally gate on `symmetric`.
    """

    symmetric: BoundReport
    asymmetric: BoundReport


def _combined_report(
    name: str, lo: int, hi: int, xs: np.ndarray, margin_sets: Sequence[np.ndarray]
) -> BoundReport:
    scanned = 0
    violations = 0
    best = (math.inf, -1)
    for margins in margin_sets:
        scanned += len(margins)
        violations += int(np.count_nonzero(margins < 0.0))
        i = int(np.argmin(margins))  # first occurrence = lowest argument
        cand = (float(margins[i]), int(xs[i]))
        if cand[0] < best[0] or (cand[0] == best[0] and cand[1] < best[1]):
            best = cand
    return BoundReport(name, lo, hi, scanned, violations, best[0], best[1])


def _rows_for_points(
    points: Sequence[int],
    rows: Sequence[CheckpointRow] | None,
    segment_size: int,
    workers: int,
) -> list[CheckpointRow]:
    if rows is None:
        return accumulate_checkpoints(points[-1], points, segment_size, workers)
    if len(rows) != len(points) or any(r.x != p for r, p in zip(rows, points)):
        raise ValueError("precomputed rows do not match the requested points")
    return list(rows)


def pi_table(limit: int) -> np.ndarray:
    """Dense table t with t[i] = pi(i) for 0 <= i <= limit."""
    flags = np.zeros(limit + 1, dtype=bool)
    ps = primes_array(limit)
    flags[ps] = True
    return np.cumsum(flags, dtype=np.int64)


def log_spaced_integers(lo: int, hi: int, per_decade: int = LOG_POINTS_PER_DECADE) -> list[int]:
    """Distinct integers ~log-uniform in [lo, hi], endpoints included."""
    if lo < 1 or hi < lo:
        raise ValueError(f"need 1 <= lo <= hi, got [{lo}, {hi}]")
    out = {lo, hi}
    k_lo = math.floor(per_decade * math.log10(lo))
    k_hi = math.ceil(per_decade * math.log10(hi))
    for k in range(k_lo, k_hi + 1):
        x = round(10.0 ** (k / per_decade))
        if lo <= x <= hi:
            out.add(x)
    return sorted(out)


def binomial_prime_product_check(n: int) -> BoundReport:
    """Exact big-integer check of the chain behind pi(x) = O(x / ln x).

    Verifies n^(pi(2n) - pi(n)) <= prod_{n < p <= 2n} p <= C(2n, n) <= 4^n.
    Margins are reported in log space (nats); verdicts use exact integers.
    """
    if not 1 <= n <= 5000:
        raise ValueError(f"binomial check supports 1 <= n <= 5000, got {n}")
    ps = [int(p) for p in primes_array(2 * n) if p > n]
    prod = math.prod(ps)
    binom = math.comb(2 * n, n)
    power4 = 4**n
    npow = n ** len(ps)
    margins = np.array(
        [
            math.log(prod) - math.log(npow),
            math.log(binom) - math.log(prod),
            math.log(power4) - math.log(binom),
        ]
    )
    violations = int(npow > prod) + int(prod > binom) + int(binom > power4)
    return BoundReport(
        name="binomial_prime_product",
        lo=n,
        hi=n,
        scanned=3,
        violations=violations,
        worst_margin=float(margins.min()),
        worst_arg=n,
    )


def binomial_prime_product_scan(lo: int, hi: int) -> BoundReport:
    """binomial_prime_product_check over every n in [lo, hi], incrementally.

    The central binomial, the prime product over (n, 2n] and 4^n are all
    updated in O(number-length) per step, so scanning [1, 2000] stays fast.
    """
    if not 1 <= lo <= hi <= 5000:
        raise ValueError(f"scan range must satisfy 1 <= lo <= hi <= 5000, got [{lo}, {hi}]")
    flags = np.zeros(2 * hi + 2, dtype=bool)
    flags[primes_array(2 * hi + 1)] = True
    is_prime = flags.tolist()

    binom = math.comb(2 * lo, lo)
    window = [p for p in range(lo + 1, 2 * lo + 1) if is_prime[p]]
    prod = math.prod(window)
    delta = len(window)
    power4 = 4**lo

    worst = (math.inf, -1)
    violations = 0
    scanned = 0
    n = lo
    while True:
        npow = n**delta
        margins = (
            math.log(prod) - math.log(npow),
            math.log(binom) - math.log(prod),
            math.log(power4) - math.log(binom),
        )
        violations += int(npow > prod) + int(prod > binom) + int(binom > power4)
        scanned += 3
        m = min(margins)
        if m < worst[0]:
            worst = (m, n)
        if n == hi:
            break
        # slide (n, 2n] to (n+1, 2n+2]: drop n+1, pick up 2n+1
        if is_prime[n + 1]:
            prod //= n + 1
            delta -= 1
        if is_prime[2 * n + 1]:
            prod *= 2 * n + 1
            delta += 1
        binom = binom * (2 * (2 * n + 1)) // (n + 1)
        power4 *= 4
        n += 1
    return BoundReport("binomial_prime_product", lo, hi, scanned, violations, worst[0], worst[1])


def chebyshev_dyadic_check(
    lo: int, hi: int, pi: np.ndarray | None = None
) -> BoundReport:
    """Scan the dyadic prime-count bound and its telescoped consequence.

    For integer y in [lo, hi]: pi(y) - pi(y/2) <= 4 (y/ln y - (y/2)/ln(y/2));
    for integer x in the same range: pi(x) - pi(16) <= 4 x / ln x.
    """
    if lo < 16:
        raise ValueError(f"dyadic bound needs lo >= 16, got {lo}")
    if hi < lo:
        raise ValueError(f"empty scan range [{lo}, {hi}]")
    if pi is None:
        pi = pi_table(hi)
    ys = np.arange(lo, hi + 1, dtype=np.int64)
    yf = ys.astype(np.float64)
    half = yf * 0.5
    dyadic = 4.0 * (yf / np.log(yf) - half / np.log(half)) - (pi[ys] - pi[ys // 2])
    telescoped = 4.0 * yf / np.log(yf) - (pi[ys] - pi[16]).astype(np.float64)
    return _combined_report("chebyshev_dyadic", lo, hi, ys, [dyadic, telescoped])


def mertens_residual_scan(
    points: Sequence[int],
    rows: Sequence[CheckpointRow] | None = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> list[tuple[int, float]]:
    """r(x) = A(x) - ln x at each point; raises if |r| ever exceeds the cap."""
    if points[0] < 2:
        raise ValueError(f"residual scan needs points >= 2, got {points[0]}")
    rows = _rows_for_points(points, rows, segment_size, workers)
    out = [(r.x, r.a - math.log(r.x)) for r in rows]
    for x, r in out:
        if abs(r) > RESIDUAL_CAP:
            raise ArithmeticError(f"residual cap {RESIDUAL_CAP} exceeded: r({x}) = {r}")
    return out


def residual_caps_check(rows: Sequence[CheckpointRow]) -> list[BoundReport]:
    """Cap checks at precomputed checkpoints: |A - ln x| <= 2, Q < 1.645, L < 2."""
    cols = rows_as_arrays(rows)
    xs = cols["x"]
    lo, hi = int(xs[0]), int(xs[-1])
    resid = np.abs(cols["a"] - np.log(xs.astype(np.float64)))
    return [
        _combined_report("mertens_residual_cap", lo, hi, xs, [RESIDUAL_CAP - resid]),
        _combined_report("q_cap", lo, hi, xs, [Q_CAP - cols["q"]]),
        _combined_report("l_cap", lo, hi, xs, [L_CAP - cols["l"]]),
    ]


def euler_lower_bound_check(
    points: Sequence[int],
    rows: Sequence[CheckpointRow] | None = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> BoundReport:
    """Scan ln ln n <= S(n) + Q(n) and S(n) >= ln ln n - euler_slack."""
    if points[0] < 2:
        raise ValueError(f"euler lower bound needs points >= 2, got {points[0]}")
    rows = _rows_for_points(points, rows, segment_size, workers)
    cols = rows_as_arrays(rows)
    xs = cols["x"]
    lnln = np.log(np.log(xs.astype(np.float64)))
    with_q = (cols["s"] + cols["q"]) - lnln
    with_slack = cols["s"] - (lnln - CONSTANTS.euler_slack)
    return _combined_report(
        "euler_lower_bound", int(xs[0]), int(xs[-1]), xs, [with_q, with_slack]
    )


def rosser_schoenfeld_check(
    points: Sequence[int],
    rows: Sequence[CheckpointRow] | None = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> RosserSchoenfeldCheck:
    """Two-sided envelope ln ln n + B +/- corrections, for n >= 286."""
    if points[0] < CONSTANTS.rs_min_n:
        raise ValueError(
            f"envelope holds for n >= {CONSTANTS.rs_min_n}, got point {points[0]}"
        )
    rows = _rows_for_points(points, rows, segment_size, workers)
    cols = rows_as_arrays(rows)
    xs = cols["x"]
    s = cols["s"]
    ln = np.log(xs.astype(np.float64))
    lnln = np.log(ln)
    lower = s - (lnln - 1.0 / (2.0 * ln * ln) + CONSTANTS.B)
    upper_sym = (lnln + 1.0 / (2.0 * ln * ln) + CONSTANTS.B) - s
    upper_asym = (lnln + 1.0 / (2.0 * ln) ** 2 + CONSTANTS.B) - s
    lo, hi = int(xs[0]), int(xs[-1])
    return RosserSchoenfeldCheck(
        symmetric=_combined_report(
            "rs_envelope_symmetric", lo, hi, xs, [lower, upper_sym]
        ),
        asymmetric=_combined_report(
            "rs_envelope_asymmetric_upper", lo, hi, xs, [lower, upper_asym]
        ),
    )


def envelope_halfwidth(x: float) -> float:
    """Guaranteed |S(x) - ln ln x - B| when the symmetric envelope holds."""
    return 1.0 / (2.0 * math.log(x) ** 2)


def estimate_mertens_B(
    x: int,
    s_value: float | None = None,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    workers: int = 1,
) -> float:
    """S(x) - ln ln x; within envelope_halfwidth(x) of B for x >= 286."""
    if x < CONSTANTS.rs_min_n:
        raise ValueError(f"estimate needs x >= {CONSTANTS.rs_min_n}, got {x}")
    if s_value is None:
        s_value = accumulate_checkpoints(x, [x], segment_size, workers)[0].s
    return s_value - math.log(math.log(x))


@dataclass
class ExtrapolationQuery:
    """A threshold far beyond sieve range, given as log10(x)."""

    log10_x: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.log10_x) or self.log10_x <= 0.0:
            raise ValueError(f"log10_x must be finite and positive, got {self.log10_x}")


_LOG10_FLOOR = 1.0 / math.log(10.0)


def extrapolate_sum(query: ExtrapolationQuery | float) -> float:
    """ln ln x + B without ever forming x, from log10(x) alone."""
    log10_x = query.log10_x if isinstance(query, ExtrapolationQuery) else float(query)
    if not math.isfinite(log10_x) or log10_x <= _LOG10_FLOOR:
        raise ValueError(f"extrapolation needs log10_x > 1/ln(10), got {log10_x}")
    return math.log(log10_x * math.log(10.0)) + CONSTANTS.B
