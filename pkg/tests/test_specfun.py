import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plasmon_cqed.errors import (
    InvalidArgumentError,
    SingularityError,
    UnsupportedOrderError,
)
from plasmon_cqed.specfun import (
    double_factorial,
    riccati_bundle,
    spherical_bessel_j,
    spherical_hankel1,
    spherical_jn_ladder,
    spherical_yn_ladder,
)


def series_jn_oracle(n, z, terms=60):
    """Direct partial sum of the defining power series,
    j_n(z) = z^n sum_k (-z^2/2)^k / (k! (2n+2k+1)!!), in 50-digit arithmetic
    so cancellation at large |z| cannot contaminate the reference."""
    import mpmath

    with mpmath.workdps(50):
        zz = mpmath.mpc(z)
        total = mpmath.mpc(1)
        term = mpmath.mpc(1)
        for k in range(1, terms):
            term *= (-zz * zz / 2) / (k * (2 * n + 2 * k + 1))
            total += term
        val = zz**n / double_factorial(2 * n + 1) * total
        return complex(val)


class TestDoubleFactorial:
    def test_small_values(self):
        assert double_factorial(7) == 105
        assert double_factorial(-1) == 1
        assert double_factorial(0) == 1

    def test_product_oracle(self):
        assert double_factorial(15) == 2027025
        for n in range(1, 40):
            assert double_factorial(n) == math.prod(range(n, 0, -2))

    def test_rejects_below_convention(self):
        with pytest.raises(InvalidArgumentError):
            double_factorial(-2)


class TestSphericalBessel:
    def test_closed_form_j0(self):
        assert spherical_bessel_j(0, 1.0) == pytest.approx(math.sin(1.0), rel=1e-12)

    def test_small_argument_limit(self):
        # z^n/(2n+1)!! leading behaviour
        val = spherical_bessel_j(3, 1e-4)
        assert val.real == pytest.approx(9.52380951851852e-15, rel=1e-10)

    def test_complex_value_against_series(self):
        val = spherical_bessel_j(5, 2.0 + 0.5j)
        assert val == pytest.approx(0.0012755268915548847 + 0.0028231928670882462j,
                                    rel=1e-10)

    def test_series_agreement_moderate_arguments(self):
        for n, z in [(0, 3.0), (7, 10.0 - 1.0j), (15, 4.0 + 0.3j), (2, 40.0),
                     (20, 50.0), (3, 30.0 + 2.0j)]:
            ref = series_jn_oracle(n, complex(z), terms=260)
            assert spherical_bessel_j(n, z) == pytest.approx(ref, rel=1e-10)

    def test_order_cap(self):
        with pytest.raises(UnsupportedOrderError):
            spherical_bessel_j(201, 1.0)

    def test_nan_rejected(self):
        with pytest.raises(InvalidArgumentError):
            spherical_bessel_j(1, complex(float("nan"), 0.0))


class TestSphericalHankel:
    def test_closed_form_h0(self):
        # h_0(z) = -i e^{iz}/z
        val = spherical_hankel1(0, 1.0)
        ref = -1j * cmath.exp(1j) / 1.0
        assert val == pytest.approx(ref, rel=1e-12)

    def test_small_argument_divergence(self):
        # h_n ~ -i (2n-1)!!/z^(n+1)
        val = spherical_hankel1(2, 1e-3)
        assert val.imag == pytest.approx(-3e9, rel=1e-4)

    def test_complex_value(self):
        val = spherical_hankel1(4, 1.5 + 0.2j)
        assert val == pytest.approx(-9.001077646861498 - 12.706783717253671j,
                                    rel=1e-9)

    def test_origin_is_singular(self):
        with pytest.raises(SingularityError):
            spherical_hankel1(0, 0.0)


class TestRiccati:
    def test_frozen_bundle(self):
        b = riccati_bundle(2, 1.0 + 1.0j)
        assert b.psi == pytest.approx(-0.11326018829129904 + 0.15129130943231914j,
                                      rel=1e-9)
        assert b.psi_prime == pytest.approx(0.09494960180600476 + 0.3925993747599943j,
                                            rel=1e-9)
        assert b.zeta == pytest.approx(-1.3701980201720196 - 0.4317643510933044j,
                                       rel=1e-9)
        assert b.zeta_prime == pytest.approx(1.6585931437163026 - 1.502156537297461j,
                                             rel=1e-9)

    def test_small_argument_psi_prime(self):
        # psi'_n ~ (n+1) z^n/(2n+1)!!
        b = riccati_bundle(1, 1e-3)
        assert b.psi_prime.real == pytest.approx(2e-3 / 3.0, rel=1e-4)

    def test_small_argument_zeta_prime(self):
        # zeta'_n ~ i n (2n-1)!! / z^(n+1)
        b = riccati_bundle(2, 1e-3)
        assert b.zeta_prime.imag == pytest.approx(6e9, rel=1e-4)

    def test_psi0_at_pi(self):
        assert abs(riccati_bundle(0, math.pi).psi) < 1e-12

    def test_finite_difference_oracle(self):
        h = 1e-6
        for n, z in [(2, 1.0 + 1.0j), (4, 2.5 - 0.5j)]:
            b = riccati_bundle(n, z)
            fd_psi = (riccati_bundle(n, z + h).psi
                      - riccati_bundle(n, z - h).psi) / (2 * h)
            fd_zeta = (riccati_bundle(n, z + h).zeta
                       - riccati_bundle(n, z - h).zeta) / (2 * h)
            assert b.psi_prime == pytest.approx(fd_psi, rel=1e-8)
            assert b.zeta_prime == pytest.approx(fd_zeta, rel=1e-8)


@given(
    r=st.floats(min_value=0.1, max_value=20.0),
    im=st.floats(min_value=-1.0, max_value=1.0),
    n=st.integers(min_value=1, max_value=20),
)
@settings(max_examples=60, deadline=None)
def test_wronskian_identity(r, im, n):
    z = complex(r, im)
    j = spherical_jn_ladder(n + 1, z)
    y = spherical_yn_ladder(n + 1, z)
    jp = j[n - 1] - (n + 1) / z * j[n]
    yp = y[n - 1] - (n + 1) / z * y[n]
    assert z * z * (j[n] * yp - jp * y[n]) == pytest.approx(1.0, rel=1e-8)


@given(
    r=st.floats(min_value=0.1, max_value=20.0),
    im=st.floats(min_value=-1.5, max_value=1.5),
    n=st.integers(min_value=1, max_value=20),
)
@settings(max_examples=60, deadline=None)
def test_recurrence_closure(r, im, n):
    z = complex(r, im)
    j = spherical_jn_ladder(n + 1, z)
    lhs = j[n - 1] + j[n + 1]
    rhs = (2 * n + 1) / z * j[n]
    scale = max(abs(lhs), abs(rhs), abs(j[n]))
    assert abs(lhs - rhs) <= 1e-8 * max(scale, 1e-30)


@pytest.mark.parametrize("n", range(7))
def test_small_argument_limits(n):
    z = 1e-3
    lead = z**n / double_factorial(2 * n + 1)
    assert spherical_bessel_j(n, z).real == pytest.approx(lead, rel=1e-4)
    if n >= 1:
        h = spherical_hankel1(n, z)
        assert h.imag == pytest.approx(-double_factorial(2 * n - 1) / z ** (n + 1),
                                       rel=1e-4)
