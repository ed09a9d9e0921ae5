import math

import pytest

from mertens.bounds import (
    CONSTANTS,
    ExtrapolationQuery,
    binomial_prime_product_check,
    binomial_prime_product_scan,
    chebyshev_dyadic_check,
    envelope_halfwidth,
    estimate_mertens_B,
    euler_lower_bound_check,
    extrapolate_sum,
    log_spaced_integers,
    mertens_residual_scan,
    residual_caps_check,
    rosser_schoenfeld_check,
    pi_table,
)
from mertens.sums import accumulate_checkpoints


# --- prime product <= central binomial <= 4^n --------------------------------


def test_binomial_chain_at_one():
    rep = binomial_prime_product_check(1)
    assert rep.violations == 0
    assert rep.worst_margin == 0.0  # product over (1,2] equals C(2,1) = 2


def test_binomial_chain_at_five():
    rep = binomial_prime_product_check(5)
    assert rep.violations == 0
    # tightest link is 5^1 <= 7 (the only prime in (5, 10])
    assert math.isclose(rep.worst_margin, math.log(7) - math.log(5), rel_tol=1e-12)


def test_binomial_chain_at_2000_exact():
    rep = binomial_prime_product_check(2000)
    assert rep.violations == 0
    assert rep.worst_margin > 0.0


def test_binomial_scan_agrees_with_single_point_checks():
    for n in (1, 2, 3, 17, 100, 777, 2000):
        single = binomial_prime_product_check(n)
        scanned = binomial_prime_product_scan(n, n)
        assert scanned.violations == single.violations
        assert math.isclose(scanned.worst_margin, single.worst_margin, rel_tol=1e-12)


def test_binomial_scan_range_is_clean():
    rep = binomial_prime_product_scan(1, 2000)
    assert rep.violations == 0
    assert rep.worst_margin >= 0.0


def test_binomial_range_errors():
    for bad in (0, 5001):
        with pytest.raises(ValueError):
            binomial_prime_product_check(bad)
    with pytest.raises(ValueError):
        binomial_prime_product_scan(0, 10)


# --- dyadic prime-count bound ------------------------------------------------


def test_chebyshev_hand_values_at_16_and_100():
    pi = pi_table(200)
    assert pi[16] - pi[8] == 2
    rhs16 = 4.0 * (16.0 / math.log(16.0) - 8.0 / math.log(8.0))
    assert math.isclose(rhs16, 7.694, rel_tol=1e-3)
    rep16 = chebyshev_dyadic_check(16, 16, pi=pi)
    assert rep16.violations == 0
    assert math.isclose(rep16.worst_margin, rhs16 - 2.0, rel_tol=1e-12)

    assert pi[100] - pi[16] == 19
    assert 4.0 * 100.0 / math.log(100.0) > 86.8


def test_chebyshev_scan_to_1e5_is_clean():
    rep = chebyshev_dyadic_check(16, 10**5)
    assert rep.violations == 0
    assert rep.worst_margin > 0.0


def test_chebyshev_domain_errors():
    with pytest.raises(ValueError):
        chebyshev_dyadic_check(15, 100)
    with pytest.raises(ValueError):
        chebyshev_dyadic_check(20, 19)


# --- A(x) - ln x -------------------------------------------------------------


def test_residual_at_two_hand_value():
    (x, r), = mertens_residual_scan([2])
    assert x == 2
    assert math.isclose(r, math.log(2.0) / 2.0 - math.log(2.0), abs_tol=1e-15)


def test_residual_capped_and_settling(shared_scan):
    points = shared_scan.cap_points
    rows = [shared_scan.by_x[x] for x in points]
    pairs = mertens_residual_scan(points, rows=rows)
    assert all(abs(r) <= 2.0 for _, r in pairs)
    # r settles onto a plateau near -1.33, deeper than anything in [2, 1e3],
    # so "settling" means the min-max band narrows, not that |r| shrinks.
    early = [r for x, r in pairs if x <= 10**3]
    late = [r for x, r in pairs if 10**3 <= x <= 10**7]
    assert max(late) - min(late) < max(early) - min(early)
    assert max(late) - min(late) < 0.1


def test_residual_domain_error():
    with pytest.raises(ValueError):
        mertens_residual_scan([1, 10])


def test_caps_reports_on_checkpoints(shared_scan):
    rows = [shared_scan.by_x[x] for x in shared_scan.cap_points]
    for rep in residual_caps_check(rows):
        assert rep.violations == 0, rep


# --- Euler lower bound ---------------------------------------------------------


def test_euler_lower_bound_hand_values():
    rep = euler_lower_bound_check([3])
    assert rep.violations == 0
    lnln3 = math.log(math.log(3.0))
    assert math.isclose(lnln3, 0.0940, abs_tol=5e-4)
    # margin of the S+Q form: 0.8333 + 0.3611 - 0.0940
    s3, q3 = 1.0 / 2 + 1.0 / 3, 1.0 / 4 + 1.0 / 9
    assert math.isclose(rep.worst_margin, min(s3 + q3 - lnln3, s3 - lnln3 + 0.48), rel_tol=1e-12)


def test_euler_lower_bound_allows_two():
    rep = euler_lower_bound_check([2])
    assert rep.violations == 0  # ln ln 2 < 0 makes both forms easy


def test_euler_lower_bound_on_primes(shared_scan):
    points = shared_scan.euler_points
    rows = [shared_scan.by_x[x] for x in points]
    rep = euler_lower_bound_check(points, rows=rows)
    assert rep.violations == 0
    assert rep.scanned == 2 * len(points)


def test_euler_lower_bound_domain_error():
    with pytest.raises(ValueError):
        euler_lower_bound_check([1, 5])


# --- Rosser-Schoenfeld envelope ------------------------------------------------


def test_envelope_at_286_separates_the_two_variants():
    check = rosser_schoenfeld_check([286])
    assert check.symmetric.violations == 0
    assert math.isclose(check.symmetric.worst_margin, 4.0002e-4, rel_tol=1e-3)
    # the tightened upper variant fails right at the threshold
    assert check.asymmetric.violations == 1
    assert math.isclose(check.asymmetric.worst_margin, -7.4149e-3, rel_tol=1e-3)


def test_envelope_scan_census(shared_scan):
    points = shared_scan.rs_points
    rows = [shared_scan.by_x[x] for x in points]
    check = rosser_schoenfeld_check(points, rows=rows)
    assert check.symmetric.violations == 0
    assert check.symmetric.worst_margin > 0.0
    # measured once with exact arithmetic and frozen: the tightened variant
    # fails on exactly 467 integers, all in [286, 1675]
    dense = [x for x in points if x <= 10**5]
    dense_rows = [shared_scan.by_x[x] for x in dense]
    dense_check = rosser_schoenfeld_check(dense, rows=dense_rows)
    assert dense_check.asymmetric.violations == 467
    assert dense_check.asymmetric.worst_arg == 286


def test_envelope_domain_error():
    with pytest.raises(ValueError):
        rosser_schoenfeld_check([285, 400])


# --- Mertens constant and extrapolation ----------------------------------------


def test_estimate_b_at_1e6_and_286():
    assert abs(estimate_mertens_B(10**6) - CONSTANTS.B) < 0.003
    assert abs(estimate_mertens_B(286) - CONSTANTS.B) < 0.0157
    with pytest.raises(ValueError):
        estimate_mertens_B(285)


def test_estimate_b_cauchy_sequence(shared_scan):
    for k in range(3, 8):
        b_lo = estimate_mertens_B(10**k, s_value=shared_scan.by_x[10**k].s)
        b_hi = estimate_mertens_B(10 ** (k + 1), s_value=shared_scan.by_x[10 ** (k + 1)].s)
        assert abs(b_lo - b_hi) <= 1.0 / (2.0 * (k * math.log(10.0)) ** 2)


def test_extrapolation_values():
    v100 = extrapolate_sum(100.0)
    assert 5.65 <= v100 <= 5.75
    assert math.isclose(v100, 5.70070, abs_tol=5e-5)
    assert f"{extrapolate_sum(9.0):.3f}" == "3.293"


def test_extrapolation_matches_sieved_value_at_1e6():
    s = accumulate_checkpoints(10**6, [10**6])[0].s
    assert f"{extrapolate_sum(6.0):.3f}" == f"{s:.3f}"


def test_extrapolation_consistency_with_sieve(shared_scan):
    for x in shared_scan.cap_points:
        if x < CONSTANTS.rs_min_n:
            continue
        row = shared_scan.by_x[x]
        err = abs(row.s - extrapolate_sum(math.log10(x)))
        assert err <= envelope_halfwidth(x) + 1e-9


def test_extrapolation_domain_errors():
    for bad in (0.2, 1.0 / math.log(10.0), -3.0, math.inf, math.nan):
        with pytest.raises(ValueError):
            extrapolate_sum(bad)
    with pytest.raises(ValueError):
        ExtrapolationQuery(-1.0)
    assert extrapolate_sum(ExtrapolationQuery(2.0)) == extrapolate_sum(2.0)


# --- scan plumbing ---------------------------------------------------------------


def test_log_spaced_integers_shape():
    pts = log_spaced_integers(286, 10**5)
    assert pts[0] == 286 and pts[-1] == 10**5
    assert all(b > a for a, b in zip(pts, pts[1:]))
    per_decade = sum(1 for p in pts if 10**3 <= p < 10**4)
    assert 250 <= per_decade <= 262
