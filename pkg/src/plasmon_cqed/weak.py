"""Closed-form weak-coupling observables: adiabatic elimination, Lamb shift,
per-mode Purcell factors, golden-rule rate from the exact Green function,
thermally broadened rates and their Fano-modified counterparts.

The Lamb shift is reported but never folded back into omega0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .medium import EmitterSpec, Geometry, MaterialModel
from .mie import DEFAULT_N_MAX, green_rr_scattered
from .constants import HBAR_C_EV_NM


@dataclass(frozen=True)
class WeakCouplingReport:
    """Per-scenario rate budget (eV) with per-mode arrays indexed by LSP order."""

    method: str
    lamb_shift: float
    gamma_tot: float
    gamma0: float
    gamma_n: np.ndarray
    purcell: np.ndarray = field(default_factory=lambda: np.array([]))
    quality: np.ndarray = field(default_factory=lambda: np.array([]))
    purcell_rad: np.ndarray | None = None

    @property
    def enhancement(self) -> float:
        return self.gamma_tot / self.gamma0


def adiabatic_rates(modes, emitter: EmitterSpec) -> WeakCouplingReport:
    """Lamb shift and total decay rate from adiabatic plasmon elimination."""
    omega0, gamma0 = emitter.omega0, emitter.gamma0
    delta_w = 0.0
    gam = []
    for m in modes:
        d = omega0 - m.omega_n
        den = d**2 + (m.gamma_n / 2) ** 2
        delta_w += m.g**2 * d / den
        gam.append(m.g**2 * m.gamma_n / den)
    gam = np.asarray(gam)
    return WeakCouplingReport(
        method="adiabatic",
        lamb_shift=delta_w,
        gamma_tot=gamma0 + float(np.sum(gam)),
        gamma0=gamma0,
        gamma_n=gam,
        purcell=np.array([4 * m.g**2 / (gamma0 * m.gamma_n) for m in modes]),
        quality=np.array([m.omega_n / m.gamma_n for m in modes]),
    )


def purcell_factors(modes, emitter: EmitterSpec) -> WeakCouplingReport:
    """Per-mode Purcell factors F_p^n = 4 g_n^2/(gamma0 Gamma_n) together with
    the detuning-weighted contribution of each mode; F_rad where the
    radiative split is resolved."""
    gamma0 = emitter.gamma0
    fp = np.array([4 * m.g**2 / (gamma0 * m.gamma_n) for m in modes])
    q = np.array([m.omega_n / m.gamma_n for m in modes])
    detuned = np.array([
        f / (1 + 4 * qq**2 * ((emitter.omega0 - m.omega_n) / m.omega_n) ** 2)
        for f, qq, m in zip(fp, q, modes)
    ])
    f_rad = None
    if all(m.gamma_rad is not None for m in modes):
        f_rad = np.array([
            4 * m.g**2 / (emitter.gamma0_rad * m.gamma_rad) if m.gamma_rad > 0 else 0.0
            for m in modes
        ])
    return WeakCouplingReport(
        method="purcell",
        lamb_shift=0.0,
        gamma_tot=gamma0 * (1 + float(np.sum(detuned))),
        gamma0=gamma0,
        gamma_n=gamma0 * detuned,
        purcell=fp,
        quality=q,
        purcell_rad=f_rad,
    )


def fermi_rate(omega0: float, geometry: Geometry, material: MaterialModel,
               emitter: EmitterSpec, n_max: int = DEFAULT_N_MAX) -> float:
    """Golden-rule enhancement gamma_tot/gamma0 = 1 + eta (6 pi/k_b) Im G^rr
    from the exact Mie Green function."""
    kb = geometry.n_b * omega0 / HBAR_C_EV_NM
    g = green_rr_scattered(omega0, geometry, material, n_max)
    return 1.0 + emitter.eta * 6 * math.pi / kb * g.total.imag


def broadened_rate(modes, emitter: EmitterSpec) -> np.ndarray:
    """Per-mode rate for a Lorentzian emitter line: the two-Lorentzian
    convolution replaces Gamma_n by gamma0 + Gamma_n."""
    out = []
    for m in modes:
        width = emitter.gamma0 + m.gamma_n
        out.append(m.g**2 * width /
                   ((emitter.omega0 - m.omega_n) ** 2 + (width / 2) ** 2))
    return np.asarray(out)


def fano_adiabatic(modes, emitter: EmitterSpec) -> WeakCouplingReport:
    """Adiabatic rates for the Fano effective Hamiltonian (leaky modes).

    Per-mode rate carries the asymmetry bracket
    [1 - alpha^2/4 + 2 alpha Q (omega0-omega_n)/omega_n]; it changes sign at
    the Fano dip, so individual gamma_n may be negative while the total rate
    stays physical.
    """
    omega0, gamma0 = emitter.omega0, emitter.gamma0
    delta_w = 0.0
    gam = []
    fp = []
    q = []
    for m in modes:
        alpha = m.alpha or 0.0
        d = omega0 - m.omega_n
        den = d**2 + (m.gamma_n / 2) ** 2
        delta_w += -m.g**2 * ((1 - alpha**2 / 4) * (m.omega_n - omega0)
                              + alpha * m.gamma_n / 2) / den
        gam.append(m.g**2 * ((1 - alpha**2 / 4) * m.gamma_n
                             - 2 * alpha * (m.omega_n - omega0)) / den)
        fp.append(4 * m.g**2 / (gamma0 * m.gamma_n))
        q.append(m.omega_n / m.gamma_n)
    gam = np.asarray(gam)
    return WeakCouplingReport(
        method="fano",
        lamb_shift=delta_w,
        gamma_tot=gamma0 + float(np.sum(gam)),
        gamma0=gamma0,
        gamma_n=gam,
        purcell=np.asarray(fp),
        quality=np.asarray(q),
    )


def fano_dip_frequency(mode) -> float:
    """Emission frequency where the Fano bracket vanishes (rate suppression)."""
    alpha = mode.alpha or 0.0
    if alpha == 0.0:
        return math.inf
    q = mode.omega_n / mode.gamma_n
    return mode.omega_n * (1.0 - (1 - alpha**2 / 4) / (2 * alpha * q))
