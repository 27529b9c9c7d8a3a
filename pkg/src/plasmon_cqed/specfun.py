"""Spherical Bessel/Hankel and Riccati-Bessel functions of complex argument.

Evaluation strategy: power series below |z|^2 < 1e-6*(2n+3), Miller downward
recurrence (normalized against j_0/j_1) for j_n elsewhere, plain upward
recurrence for y_n which is stable in that direction.  Orders are capped at
N_ORDER_MAX = 200, far beyond the <= 30 multipoles any scenario here needs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, SingularityError, UnsupportedOrderError

N_ORDER_MAX = 200

_RESCALE_LIMIT = 1e250
_MILLER_BUFFER = 32


def double_factorial(n: int) -> int:
    """n!! with the conventions (-1)!! = 0!! = 1, exact for any order."""
    if n < -1:
        raise InvalidArgumentError(f"double factorial undefined for n={n}")
    out = 1
    k = n
    while k > 1:
        out *= k
        k -= 2
    return out


def log_double_factorial(n: int) -> float:
    """log(n!!), overflow-safe companion used for large-order prefactors."""
    if n < -1:
        raise InvalidArgumentError(f"double factorial undefined for n={n}")
    out = 0.0
    k = n
    while k > 1:
        out += math.log(k)
        k -= 2
    return out


def _check_order(n: int) -> None:
    if n < 0:
        raise InvalidArgumentError(f"negative order n={n}")
    if n > N_ORDER_MAX:
        raise UnsupportedOrderError(f"order n={n} exceeds cap {N_ORDER_MAX}")


def _check_argument(z: complex) -> complex:
    z = complex(z)
    if not (cmath.isfinite(z)):
        raise InvalidArgumentError(f"non-finite argument z={z}")
    return z


def _series_jn(n: int, z: complex) -> complex:
    # j_n(z) = z^n/(2n+1)!! * sum_k (-z^2/2)^k / (k! (2n+3)(2n+5)...(2n+2k+1))
    # leading factor built in log space so huge orders underflow gracefully
    if z == 0:
        return 1.0 + 0.0j if n == 0 else 0.0 + 0.0j
    log_lead = n * cmath.log(z) - log_double_factorial(2 * n + 1)
    if log_lead.real < -745.0:  # below double underflow
        return 0.0 + 0.0j
    lead = cmath.exp(log_lead)
    total = 1.0 + 0.0j
    term = 1.0 + 0.0j
    for k in range(1, 200):
        term *= -0.5 * z * z / (k * (2 * n + 2 * k + 1))
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return lead * total


def spherical_jn_ladder(n_max: int, z: complex) -> np.ndarray:
    """j_0(z)..j_nmax(z) by Miller downward recurrence or series."""
    _check_order(n_max)
    z = _check_argument(z)
    if abs(z) ** 2 < 1e-6 * (2 * n_max + 3):
        return np.array([_series_jn(n, z) for n in range(n_max + 1)])

    m = max(n_max, int(abs(z))) + _MILLER_BUFFER
    f = np.zeros(m + 2, dtype=complex)
    f[m + 1] = 0.0
    f[m] = 1e-280
    for k in range(m, 0, -1):
        f[k - 1] = (2 * k + 1) / z * f[k] - f[k + 1]
        if abs(f[k - 1]) > _RESCALE_LIMIT:
            f[k - 1:] *= 1e-250
    j0 = cmath.sin(z) / z
    j1 = cmath.sin(z) / z**2 - cmath.cos(z) / z
    # normalize against whichever anchor is farther from a zero
    if abs(f[0]) >= abs(f[1]):
        scale = j0 / f[0]
    else:
        scale = j1 / f[1]
    return f[: n_max + 1] * scale


def spherical_yn_ladder(n_max: int, z: complex) -> np.ndarray:
    """y_0(z)..y_nmax(z) by upward recurrence (stable for y)."""
    _check_order(n_max)
    z = _check_argument(z)
    if z == 0:
        raise SingularityError("y_n singular at z=0")
    y = np.zeros(n_max + 1, dtype=complex)
    y[0] = -cmath.cos(z) / z
    if n_max >= 1:
        y[1] = -cmath.cos(z) / z**2 - cmath.sin(z) / z
    for k in range(1, n_max):
        y[k + 1] = (2 * k + 1) / z * y[k] - y[k - 1]
    return y


def spherical_bessel_j(n: int, z: complex) -> complex:
    """Spherical Bessel function of the first kind, complex argument."""
    _check_order(n)
    z = _check_argument(z)
    return complex(spherical_jn_ladder(n, z)[n])


def spherical_hankel1(n: int, z: complex) -> complex:
    """Spherical Hankel function of the first kind, h_n = j_n + i y_n."""
    _check_order(n)
    z = _check_argument(z)
    if z == 0:
        raise SingularityError("h_n^(1) singular at z=0")
    return complex(spherical_jn_ladder(n, z)[n] + 1j * spherical_yn_ladder(n, z)[n])


@dataclass(frozen=True)
class RiccatiBundle:
    """psi_n, zeta_n and their derivatives at a single (n, z)."""

    psi: complex
    psi_prime: complex
    zeta: complex
    zeta_prime: complex


def riccati_ladders(n_max: int, z: complex):
    """(psi, psi', zeta, zeta') arrays for orders 0..n_max.

    psi_n = z j_n, zeta_n = z h_n^(1); derivatives use
    psi'_n = z j_{n-1} - n j_n with j_{-1} = cos(z)/z (and h_{-1} = e^{iz}/z).
    """
    _check_order(n_max)
    z = _check_argument(z)
    if z == 0:
        raise SingularityError("Riccati-Bessel zeta singular at z=0")
    j = spherical_jn_ladder(n_max, z)
    y = spherical_yn_ladder(n_max, z)
    h = j + 1j * y
    orders = np.arange(n_max + 1)
    j_lower = np.concatenate(([cmath.cos(z) / z], j[:-1]))
    h_lower = np.concatenate(([cmath.exp(1j * z) / z], h[:-1]))
    psi = z * j
    zeta = z * h
    psi_prime = z * j_lower - orders * j
    zeta_prime = z * h_lower - orders * h
    return psi, psi_prime, zeta, zeta_prime


def riccati_bundle(n: int, z: complex) -> RiccatiBundle:
    """Riccati-Bessel bundle {psi_n, psi'_n, zeta_n, zeta'_n} at z."""
    psi, psip, zeta, zetap = riccati_ladders(n, z)
    return RiccatiBundle(
        psi=complex(psi[n]),
        psi_prime=complex(psip[n]),
        zeta=complex(zeta[n]),
        zeta_prime=complex(zetap[n]),
    )
