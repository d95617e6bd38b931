"""Special-function kernel tests.

Reference values were computed once with mpmath at 40 digits and frozen
here as literals; erfc-based closed forms use math.erfc directly, which is
independent of the series code under test.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bihilfer import (
    DomainError,
    KilbasSaigoParams,
    gamma_ratio,
    kilbas_saigo,
    kilbas_saigo_coefficients,
    log_gamma,
    log_gamma_ratio,
    mittag_leffler,
)

# (p, q, ln Gamma(p) - ln Gamma(q)) frozen from a 40-digit computation
LGAMMA_RATIO_REFERENCE = [
    (25.7, 25.0, 2.249024509582432923832),
    (22.4, 19.5, 8.750007014389183463664),
    (433.43, 430.53, 17.59493655323995893658),
    (983.1, 980.2, 19.97730259380821958034),
    (1000000.5, 1000000.0, 6.907755153982137052059),
    (47.2, 50.0, -10.84484511880641959334),
    (20.0, 21.0, -2.995732273553990993435),
]

# (x, ln Gamma(x)) frozen from a 40-digit computation
LGAMMA_REFERENCE = [
    (1e-6, 13.81550998074943166921),
    (0.25, 1.288022524698077457371),
    (0.5, 0.5723649429247000870717),
    (1.0, 0.0),
    (1.5, -0.1207822376352452223455),
    (2.0, 0.0),
    (2.5, 0.2846828704729191596325),
    (3.7, 1.428072326665387921872),
    (10.0, 12.80182748008146961121),
    (170.25, 702.7206616776804649751),
    (1000.0, 5905.220423209181211826),
    (1e6, 12815504.56914761165998),
]


class TestLogGamma:
    @pytest.mark.parametrize("x,expected", LGAMMA_REFERENCE)
    def test_reference_values(self, x, expected):
        assert abs(log_gamma(x) - expected) <= 1e-13 * max(1.0, abs(expected))

    def test_trivial_zeros(self):
        assert log_gamma(1.0) == 0.0
        assert log_gamma(2.0) == 0.0

    def test_half_integer(self):
        assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-14)

    @pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            log_gamma(x)

    @given(st.floats(min_value=1e-3, max_value=1e5))
    def test_functional_equation(self, x):
        # Gamma(x+1) = x Gamma(x)
        lhs = log_gamma(x + 1.0)
        rhs = log_gamma(x) + math.log(x)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


class TestLogGammaRatio:
    @pytest.mark.parametrize("p,q,expected", LGAMMA_RATIO_REFERENCE)
    def test_reference_values(self, p, q, expected):
        # unlike a plain lgamma difference, the stabilized ratio keeps
        # absolute accuracy at the scale of the result itself
        assert abs(log_gamma_ratio(p, q) - expected) <= 2e-14 * max(1.0, abs(expected))

    def test_equal_arguments_exact_zero(self):
        for x in (0.5, 19.0, 20.0, 433.2, 1e6):
            assert log_gamma_ratio(x, x) == 0.0

    def test_antisymmetry(self):
        for p, q in [(25.7, 25.0), (433.43, 430.53), (5.0, 3.5)]:
            assert log_gamma_ratio(p, q) == pytest.approx(-log_gamma_ratio(q, p), rel=1e-15)

    @given(
        st.floats(min_value=18.0, max_value=1e4),
        st.floats(min_value=-3.0, max_value=3.0),
    )
    @settings(max_examples=200)
    def test_consistent_with_lgamma_difference(self, q, nu):
        p = q + nu
        direct = math.lgamma(p) - math.lgamma(q)
        stable = log_gamma_ratio(p, q)
        # the direct difference itself carries ~|lgamma|*eps of rounding
        slack = 8e-16 * max(abs(math.lgamma(p)), abs(math.lgamma(q)), 1.0)
        assert abs(stable - direct) <= slack + 1e-14


class TestGammaRatio:
    def test_examples(self):
        assert gamma_ratio(3.0, 1.0) == pytest.approx(2.0, rel=1e-13)
        assert gamma_ratio(7.3, 7.3) == 1.0
        assert gamma_ratio(1.5, 1.0) == pytest.approx(0.8862269254527580, rel=1e-13)

    def test_large_arguments_no_overflow(self):
        # Gamma(500.5) alone overflows; the ratio must not.
        r = gamma_ratio(500.5, 500.0)
        assert math.isfinite(r)
        assert r == pytest.approx(math.exp(0.5 * math.log(500.0)), rel=1e-3)

    @pytest.mark.parametrize("p,q", [(0.0, 1.0), (1.0, 0.0), (-2.0, 3.0)])
    def test_domain(self, p, q):
        with pytest.raises(DomainError):
            gamma_ratio(p, q)

    @given(
        st.floats(min_value=0.1, max_value=50.0),
        st.floats(min_value=0.1, max_value=50.0),
    )
    @settings(max_examples=200)
    def test_reciprocal(self, p, q):
        assert abs(gamma_ratio(p, q) * gamma_ratio(q, p) - 1.0) <= 1e-12


class TestKilbasSaigoParams:
    def test_validation(self):
        with pytest.raises(DomainError, match="alpha > 0"):
            KilbasSaigoParams(alpha=0.0, m=1.0, l=0.0)
        with pytest.raises(DomainError, match="m > 0"):
            KilbasSaigoParams(alpha=1.0, m=0.0, l=0.0)
        with pytest.raises(DomainError, match=r"alpha\*l > -1"):
            KilbasSaigoParams(alpha=1.0, m=1.0, l=-1.0)

    def test_boundary_admissible(self):
        KilbasSaigoParams(alpha=0.5, m=1.0, l=-1.999)  # alpha*l = -0.9995 > -1


class TestKilbasSaigo:
    def test_value_at_zero_is_one_exactly(self):
        for params in [
            KilbasSaigoParams(0.5, 1.0, 0.0),
            KilbasSaigoParams(1.7, 2.3, -0.2),
            KilbasSaigoParams(0.3, 0.9, 4.0),
        ]:
            report = kilbas_saigo(params, 0.0)
            assert report.value == 1.0
            assert report.terms_used == 1
            assert report.converged

    def test_exponential_case(self):
        report = kilbas_saigo(KilbasSaigoParams(1.0, 1.0, 0.0), 1.0)
        assert report.converged
        assert abs(report.value - math.e) <= 1e-12 * math.e

    def test_erfc_closed_form(self):
        # E_{1/2,1,0}(z) = exp(z^2) erfc(-z) on the real axis
        params = KilbasSaigoParams(0.5, 1.0, 0.0)
        for z in (1.0, -1.0, 2.0, -2.5):
            expected = math.exp(z * z) * math.erfc(-z)
            report = kilbas_saigo(params, z)
            assert report.converged
            assert abs(report.value - expected) <= 1e-10 * max(1.0, abs(expected))

    def test_known_digit_values(self):
        params = KilbasSaigoParams(0.5, 1.0, 0.0)
        assert kilbas_saigo(params, 1.0).value.real == pytest.approx(5.0089800, abs=1e-6)
        assert kilbas_saigo(params, -1.0).value.real == pytest.approx(0.4275836, abs=1e-6)

    def test_report_invariant(self):
        tol = 1e-12
        for params, z in [
            (KilbasSaigoParams(0.5, 1.0, 0.0), 3.0 + 1.0j),
            (KilbasSaigoParams(0.8, 1.5, 0.3), -2.0),
            (KilbasSaigoParams(1.0, 1.0, 0.0), 4.9),
        ]:
            report = kilbas_saigo(params, z, tol=tol)
            assert report.converged
            assert report.last_term_magnitude <= tol * max(1.0, abs(report.value))

    def test_nonconverged_flag_value_still_returned(self):
        # Terms overflow long before the rule can fire.
        report = kilbas_saigo(KilbasSaigoParams(0.3, 1.0, 0.0), 50.0, n_max=2000)
        assert not report.converged

    def test_complex_argument(self):
        params = KilbasSaigoParams(1.0, 1.0, 0.0)
        z = 0.7 + 0.4j
        report = kilbas_saigo(params, z)
        import cmath

        assert abs(report.value - cmath.exp(z)) <= 1e-12 * abs(cmath.exp(z))


class TestMittagLeffler:
    def test_exponential(self):
        assert abs(mittag_leffler(1.0, 1.0, 1.0) - math.e) <= 1e-12 * math.e

    def test_zero_argument(self):
        for a, b in [(0.5, 1.0), (1.3, 2.7)]:
            expected = math.exp(-math.lgamma(b))
            assert mittag_leffler(a, b, 0.0) == pytest.approx(expected, rel=1e-14)

    def test_erfc_closed_form(self):
        expected = math.e * math.erfc(-1.0)
        assert abs(mittag_leffler(0.5, 1.0, 1.0) - expected) <= 1e-10 * expected

    def test_domain(self):
        with pytest.raises(DomainError):
            mittag_leffler(0.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            mittag_leffler(1.0, -1.0, 1.0)


class TestReductions:
    """E_{alpha,m,l} collapses to Mittag-Leffler forms when m = 1.

    The z-range shrinks with alpha: the alternating sums develop huge
    intermediate terms (the peak grows like exp(|z|^(1/alpha))), and once
    term rounding alone exceeds the tolerance no double-precision summation
    pair can agree. The bounds below keep the comparison meaningful.
    """

    CASES = [(0.3, 1.5), (0.5, 2.5), (0.8, 5.0), (1.0, 6.0)]

    @pytest.mark.parametrize("alpha,z_max", CASES)
    def test_first_reduction(self, alpha, z_max):
        tol = 1e-12
        params = KilbasSaigoParams(alpha, 1.0, 0.0)
        for z in [z_max * x / 10.0 for x in range(-10, 11)]:
            ks = kilbas_saigo(params, z, tol=tol).value
            ml = mittag_leffler(alpha, 1.0, z, tol=tol)
            assert abs(ks - ml) <= 10.0 * tol * max(1.0, abs(ks))

    @pytest.mark.parametrize("alpha,z_max", CASES)
    def test_second_reduction(self, alpha, z_max):
        tol = 1e-12
        params = KilbasSaigoParams(alpha, 1.0, 1.0)
        scale = math.exp(math.lgamma(alpha + 1.0))
        for z in [z_max * x / 10.0 for x in range(-10, 11)]:
            ks = kilbas_saigo(params, z, tol=tol).value
            ml = scale * mittag_leffler(alpha, alpha + 1.0, z, tol=tol)
            assert abs(ks - ml) <= 10.0 * tol * max(1.0, abs(ks))


class TestCoefficients:
    SWEEP = [
        KilbasSaigoParams(a, m, l)
        for a in (0.3, 0.5, 1.0, 1.7)
        for m in (0.5, 1.0, 2.0)
        for l in (-0.4, 0.0, 1.0, 3.0)
        if a * l > -1.0
    ]

    def test_first_coefficient_is_one(self):
        for params in self.SWEEP:
            assert kilbas_saigo_coefficients(params, 1) == [1.0]

    def test_positivity_and_decay(self):
        ratio_checked = 0
        for params in self.SWEEP:
            coeffs = kilbas_saigo_coefficients(params, 202)
            assert all(c >= 0.0 for c in coeffs)
            # Fast-decaying sequences underflow before k = 200; positivity
            # can only be meaningful while the doubles are nonzero.
            first_zero = next((k for k, c in enumerate(coeffs) if c == 0.0), None)
            if first_zero is not None:
                assert first_zero > 50
                assert all(c == 0.0 for c in coeffs[first_zero:])
            else:
                assert all(c > 0.0 for c in coeffs)
                assert coeffs[201] / coeffs[200] < 0.5
                ratio_checked += 1
        assert ratio_checked >= 8

    def test_cache_is_consistent(self):
        params = KilbasSaigoParams(0.6, 1.2, 0.1)
        short = kilbas_saigo_coefficients(params, 10)
        long = kilbas_saigo_coefficients(params, 50)
        assert long[:10] == short

    def test_concurrent_evaluation_shares_cache_safely(self):
        import threading

        params = KilbasSaigoParams(0.55, 1.35, 0.25)
        reference = kilbas_saigo(params, 2.5).value
        results = []
        errors = []

        def work():
            try:
                for _ in range(50):
                    results.append(kilbas_saigo(params, 2.5).value)
            except Exception as exc:  # pragma: no cover - failure path
                errors.append(exc)

        threads = [threading.Thread(target=work) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        assert all(v == reference for v in results)
        coeffs = kilbas_saigo_coefficients(params, 60)
        assert all(
            a == b for a, b in zip(coeffs, kilbas_saigo_coefficients(params, 60))
        )
