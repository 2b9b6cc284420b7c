import math

import pytest
from hypothesis import given, settings, strategies as st

from genli.errors import DomainError, RadiusTooLargeError
from genli.li import (
    LiParams,
    LiValue,
    Method,
    TaylorSeries,
    k_from_lambda,
    k_sums_from_zeros,
    lambda_from_coeffs,
    mobius_base,
    sign_scan,
    tail_estimate,
    taylor_coeffs_cauchy,
    taylor_coeffs_from_zeros,
    theta_at,
    verify_identity,
    zero_term,
)
from genli.precision import PrecisionContext
from genli.zeros import ZeroCatalog

CTX = PrecisionContext(128)

# lambda(n, a), from mpmath.taylor on mpmath's own zeta/gamma at 80 digits
ORACLE = {
    "0": ["0.0230957089661210338143102479065", "0.0923457352280466703857284861921",
          "0.207638920554324803791492046618", "0.368790479492241638590511489638",
          "0.575542714461177452431106405493"],
    "0.25": ["0.0115513351954906185106376456681", "0.0462006964587986478007462750653",
             "0.103934155321985366721019471775", "0.184728512671821768786543250955",
             "0.28855132123169030128152413759"],
    "-1": ["0.0690662315300006762251659192625", "0.275278515086742835394251675122",
           "0.615711587586328095637202272221", "1.0856018554269013500886880558",
           "1.6785103618472104961882706167"],
}


@pytest.fixture(scope="module")
def cauchy():
    return {a: taylor_coeffs_cauchy(a, 6, ctx=CTX) for a in ORACLE}


# -- Möbius geometry -----------------------------------------------------------------

def test_mobius_base_on_line_is_unimodular():
    s = mobius_base("0.5+14.134725j", 0)
    assert abs(abs(s) - 1) < 1e-70


def test_mobius_base_pole():
    with pytest.raises(DomainError):
        mobius_base(1, 0)


@settings(max_examples=50, deadline=None)
@given(st.floats(-5, 0.49), st.floats(-3, 3), st.floats(0.1, 100))
def test_mobius_maps_left_half_plane_into_disk(a, x_off, y):
    # for a < sigma, Re rho < sigma gives |s| < 1 and Re rho > sigma gives |s| > 1
    rho = complex(0.5 + x_off, y)
    s = abs(mobius_base(rho, a, ctx=CTX))
    if x_off < -1e-9:
        assert s < 1
    elif x_off > 1e-9:
        assert s > 1


@settings(max_examples=50, deadline=None)
@given(st.floats(-10, 10).filter(lambda a: abs(a - 0.5) > 1e-6), st.floats(1, 1e5))
def test_theta_matches_argument_of_base(a, T):
    m = CTX.mp
    s = mobius_base(m.mpc(0.5, T), a, ctx=CTX)
    assert abs(theta_at(T, a, CTX) - m.arg(s)) < 1e-30


def test_theta_vanishes_at_half():
    assert theta_at(50, 0.5, CTX) == 0


def test_zero_term_pair_contribution():
    zt = zero_term("0.5+21.022039638771554993j", 0, 3, ctx=CTX)
    assert abs(zt.pair_contribution - 2 * (1 - CTX.mp.cos(3 * zt.theta))) < 1e-30


# -- tail bounds -------------------------------------------------------------------------

def test_tail_estimate_scaling():
    t = tail_estimate(0, 1, 1e4)
    assert tail_estimate(0, 2, 1e4) == pytest.approx(4 * t)
    assert tail_estimate(-0.5, 1, 1e4) == pytest.approx(4 * t)
    assert tail_estimate(0.5, 7, 1e4) == 0
    assert tail_estimate(0, 1, 1e5) < t


def test_tail_estimate_domain():
    with pytest.raises(DomainError):
        tail_estimate(0, 1, 50)


def test_tail_bounds_the_truncation(catalog):
    # the part of k(n, 0) between 1e4 and t_max is below the tail bound at 1e4
    full = k_sums_from_zeros(catalog, 0, 10, CTX)
    cut = k_sums_from_zeros(catalog, 0, 10, CTX, t_cutoff=1e4)
    for f, c in zip(full, cut):
        assert 0 <= f.value - c.value <= c.tail_bound


# -- zero sums ----------------------------------------------------------------------------

def test_k_at_half_is_exactly_zero(catalog):
    for v in k_sums_from_zeros(catalog, 0.5, 100, CTX, t_cutoff=1000):
        assert v.value == 0 and v.tail_bound == 0


def test_zero_sum_matches_direct_complex_sum():
    cat = ZeroCatalog(("14.134725141734693790", "21.022039638771554993", "25.010857580145688763"))
    m = CTX.mp
    for n in (1, 5, 12):
        direct = m.mpf(0)
        for t in cat.ordinates:
            rho = m.mpc(0.5, m.mpf(t))
            for r in (rho, m.conj(rho)):
                direct += (1 - ((r + m.mpf("0.7")) / (r - m.mpf("0.7") - 1)) ** n).real
        assert abs(_k_small_table(cat, -0.7, n) - direct) < 1e-30


def _k_small_table(cat, a, n):
    # tables below T = 100 have no tail bound; go through the chunk routine directly
    from genli.li import _zero_sum_chunk
    from genli.precision import GUARD_BITS

    acc, _ = _zero_sum_chunk((cat.ordinates, cat.multiplicities, str(a), n, CTX.precision_bits))
    return 2 * CTX.mp.ldexp(acc[n], -(CTX.precision_bits + GUARD_BITS))


def test_multiplicity_counts_twice():
    single = ZeroCatalog(("14.134725141734693790",))
    double = ZeroCatalog(("14.134725141734693790",), (2,))
    assert _k_small_table(double, 0, 4) == 2 * _k_small_table(single, 0, 4)


def test_zero_sums_are_chunking_invariant(catalog_1e4):
    a = k_sums_from_zeros(catalog_1e4, 0.25, 8, CTX, chunk_size=4096)
    b = k_sums_from_zeros(catalog_1e4, 0.25, 8, CTX, chunk_size=777)
    assert [x.value for x in a] == [y.value for y in b]


def test_zero_sums_are_worker_invariant(catalog_1e4):
    a = k_sums_from_zeros(catalog_1e4, -1, 5, CTX, chunk_size=2000)
    b = k_sums_from_zeros(catalog_1e4, -1, 5, CTX, chunk_size=2000, workers=2)
    assert [x.value for x in a] == [y.value for y in b]


def test_zero_sum_rejects_other_sigma(catalog_1e4):
    with pytest.raises(DomainError):
        k_sums_from_zeros(catalog_1e4, 0, 3, CTX, sigma=0.6)


def test_params_validation():
    with pytest.raises(DomainError):
        LiParams(0, 0)
    with pytest.raises(DomainError):
        LiValue(1, 0, 0, Method.ZERO_SUM, tail_bound=-1.0)


def test_symmetry_is_exact_for_catalog_sums(catalog_1e4):
    lo = k_sums_from_zeros(catalog_1e4, 0.25, 20, CTX)
    hi = k_sums_from_zeros(catalog_1e4, 0.75, 20, CTX)
    assert [x.value for x in lo] == [y.value for y in hi]


# -- derivative route ----------------------------------------------------------------------

@pytest.mark.parametrize("a", sorted(ORACLE))
def test_lambda_from_cauchy_coefficients_matches_oracle(cauchy, a):
    for n, want in enumerate(ORACLE[a], start=1):
        lv = lambda_from_coeffs(cauchy[a], a, n, CTX)
        assert abs(lv.value - CTX.mp.mpf(want)) < 1e-28
        assert lv.error_bound < 1e-28


def test_lambda_small_n_closed_forms(cauchy):
    ts = cauchy["0"]
    c1, c2 = ts.coeffs[1].real, ts.coeffs[2].real
    assert abs(lambda_from_coeffs(ts, 0, 1, CTX).value - c1) < 1e-35
    assert abs(lambda_from_coeffs(ts, 0, 2, CTX).value - 2 * (c1 + c2)) < 1e-35


def test_lambda_binomial_weights():
    # synthetic series: lambda(n) = n * sum_j C(n-1, j) h^(n-1-j) c_(n-j)
    m = CTX.mp
    coeffs = tuple(m.mpc(k + 1) for k in range(8))
    ts = TaylorSeries(m.mpc(1 - m.mpf("0.2")), coeffs, "synthetic", (0.0,) * 8, "0.2")
    h = 1 - 2 * m.mpf("0.2")
    for n in range(1, 8):
        want = n * sum(math.comb(n - 1, j) * h ** (n - 1 - j) * (n - j + 1) for j in range(n))
        assert abs(lambda_from_coeffs(ts, "0.2", n, CTX).value - want) < 1e-30


def test_lambda_needs_enough_coefficients(cauchy):
    with pytest.raises(DomainError):
        lambda_from_coeffs(cauchy["0"], 0, 7, CTX)
    with pytest.raises(DomainError):
        lambda_from_coeffs(cauchy["0"], "0.25", 2, CTX)


def test_k_from_lambda_scales_by_one_minus_two_a(cauchy):
    lv = lambda_from_coeffs(cauchy["-1"], "-1", 3, CTX)
    kv = k_from_lambda(lv, "-1")
    assert abs(kv.value - 3 * lv.value) < 1e-35
    with pytest.raises(DomainError):
        k_from_lambda(lv, "0")


def test_cauchy_radius_must_avoid_zeros():
    with pytest.raises(RadiusTooLargeError):
        taylor_coeffs_cauchy(0, 3, radius=15, ctx=CTX)


def test_taylor_from_zeros_matches_cauchy(catalog, cauchy):
    tz = taylor_coeffs_from_zeros(catalog, 0, 6, CTX)
    tc = cauchy["0"]
    for k in range(1, 7):
        assert abs(tz.coeffs[k] - tc.coeffs[k]) <= tz.error_bounds[k] + tc.error_bounds[k]
    assert abs(tz.coeffs[0] - tc.coeffs[0]) < 1e-30


def test_verify_identity_small(catalog_1e4, cauchy):
    rep = verify_identity(catalog_1e4, "0.25", 5, CTX, taylor=cauchy["0.25"])
    assert rep.passed, rep.flagged
    assert len(rep.rows) == 5


def test_identity_rejects_half(catalog_1e4):
    with pytest.raises(DomainError):
        verify_identity(catalog_1e4, 0.5, 3, CTX)


def test_sign_scan_reports_consistent(catalog_1e4, cauchy):
    (entry,) = sign_scan(catalog_1e4, ["-1"], 5, CTX, taylor={"-1": cauchy["-1"]})
    assert entry.verdict == "CONSISTENT"
    assert entry.min_k_margin > 0
