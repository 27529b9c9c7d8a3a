"""Independent-oracle verification suite, wired to `plasmon-cqed run --verify`.

Every check recomputes its expected value through a route that does not share
code with the path being validated: direct power series, Wronskian and
recurrence identities, finite differences, quadrature, matrix inverses,
adaptive integration, and brute-force operator algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR_C_EV_NM
from .coupling import (
    CouplingSpectrum,
    ModeParams,
    fano_rate_model,
    fit_fano_rate,
    fit_lorentzian,
    lorentzian_kappa2,
)
from .heff import (
    build_fano,
    build_standard,
    eigendecompose,
    evolve,
    flip_coupling_gauge,
    polarization_integral,
    polarization_spectrum,
)
from .lindblad import (
    build_dissipators,
    build_liouvillian,
    build_state_space,
    build_system_hamiltonian,
    dissipator_action,
    effective_hamiltonian_from_lindblad,
    evolve_master,
    pure_state,
    single_excitation_projection,
)
from .medium import EmitterSpec, Geometry, permittivity, silver
from .mie import (
    green_rr_quasistatic,
    green_rr_scattered,
    mie_coefficients,
    qs_polarizability,
    qs_resonance_frequency,
    radial_mode_fractions,
)
from .specfun import (
    double_factorial,
    riccati_bundle,
    spherical_jn_ladder,
    spherical_yn_ladder,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _series_jn_oracle(n, z, terms=60):
    # independent: plain partial sum of the defining power series
    total = 0.0 + 0.0j
    for k in range(terms):
        num = (-z * z / 2.0) ** k
        den = math.factorial(k) * double_factorial(2 * n + 2 * k + 1)
        total += num / den
    return z**n * total


def check_bessel_series() -> CheckResult:
    worst = 0.0
    for n, z in [(0, 1.0 + 0.0j), (5, 2.0 + 0.5j), (3, 1e-4 + 0j),
                 (12, 7.0 - 0.4j), (2, 0.3 + 2.0j)]:
        ours = spherical_jn_ladder(n, z)[n]
        ref = _series_jn_oracle(n, z)
        worst = max(worst, abs(ours - ref) / max(abs(ref), 1e-300))
    return CheckResult("bessel-series", worst < 1e-10, f"max rel err {worst:.2e}")


def check_wronskian() -> CheckResult:
    # z^2 (j_n y'_n - j'_n y_n) = 1, derivatives by recurrence.
    # |Im z| stays moderate: the identity itself is exact but its floating
    # point conditioning degrades like e^(2 Im z).
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(40):
        re = 0.1 + 19.9 * rng.random()
        z = complex(re, 1.5 * (2 * rng.random() - 1))
        n = int(rng.integers(1, 21))
        j = spherical_jn_ladder(n + 1, z)
        y = spherical_yn_ladder(n + 1, z)
        jp = j[n - 1] - (n + 1) / z * j[n]
        yp = y[n - 1] - (n + 1) / z * y[n]
        w = z * z * (j[n] * yp - jp * y[n])
        worst = max(worst, abs(w - 1.0))
    return CheckResult("wronskian", worst < 1e-8, f"max |W-1| {worst:.2e}")


def check_riccati_derivatives() -> CheckResult:
    # central finite differences on psi, zeta with step 1e-6
    step = 1e-6
    worst = 0.0
    for n, z in [(2, 1.0 + 1.0j), (1, 0.4 + 0.1j), (6, 3.0 - 0.8j)]:
        b = riccati_bundle(n, z)
        fd_psi = (riccati_bundle(n, z + step).psi
                  - riccati_bundle(n, z - step).psi) / (2 * step)
        fd_zeta = (riccati_bundle(n, z + step).zeta
                   - riccati_bundle(n, z - step).zeta) / (2 * step)
        worst = max(worst, abs(b.psi_prime - fd_psi) / max(abs(fd_psi), 1e-30),
                    abs(b.zeta_prime - fd_zeta) / max(abs(fd_zeta), 1e-30))
    return CheckResult("riccati-derivatives", worst < 1e-8,
                       f"max rel err {worst:.2e}")


def check_drude() -> CheckResult:
    # direct complex arithmetic against the library evaluation
    w, eps_inf, wp, gp = 2.94, 6.0, 7.90, 0.051
    ref = eps_inf - wp**2 / complex(w**2, gp * w)
    ours = permittivity(silver(), w)
    err = abs(ours - ref)
    return CheckResult("drude-permittivity", err < 1e-14, f"err {err:.2e}")


def check_sum_rule() -> CheckResult:
    worst = 0.0
    for x in (0.1, 0.5, 2.0):
        total = float(np.sum(radial_mode_fractions(60, x)))
        worst = max(worst, abs(total - 1.0))
    return CheckResult("gamma0n-sum-rule", worst < 1e-6, f"max |sum-1| {worst:.2e}")


def check_qs_resonance() -> CheckResult:
    from .medium import MaterialModel

    metal = MaterialModel.drude(1.0, 5.0, 0.0)
    worst = 0.0
    for n in range(1, 7):
        ref = 5.0 * math.sqrt(n / (2 * n + 1))
        ours = qs_resonance_frequency(n, metal, 1.0)
        worst = max(worst, abs(ours - ref) / ref)
    return CheckResult("qs-resonance", worst < 1e-6, f"max rel err {worst:.2e}")


def check_qs_mie_agreement() -> CheckResult:
    # B_1 exact vs quasi-static closed form at R=8 nm
    geo = Geometry.from_surface_distance(8.0, 2.0)
    w = 2.9
    b_exact = mie_coefficients(1, w, geo, silver()).b
    alpha_qs, _ = qs_polarizability(1, w, geo, silver())
    kb = w / HBAR_C_EV_NM
    b_qs = 1j * 2.0 * kb**3 * alpha_qs / 3.0
    rel = abs(b_exact - b_qs) / abs(b_exact)
    return CheckResult("qs-mie-agreement", rel < 0.05, f"rel dev {rel:.3f}")


def check_green_quasistatic() -> CheckResult:
    geo = Geometry.from_surface_distance(8.0, 2.0)
    em = EmitterSpec(omega0=2.8, d_eg=1.0, eta=1.0, gamma0=1e-9)
    w = 2.80
    exact = green_rr_scattered(w, geo, silver(), 1).per_mode[0]
    approx = green_rr_quasistatic(w, geo, silver(), em, 1)
    rel = abs(approx.imag - exact.imag) / abs(exact.imag)
    return CheckResult("green-quasistatic", rel < 0.15, f"Im rel dev {rel:.3f}")


def _synthetic_modes(rng, n_modes):
    modes = []
    for k in range(n_modes):
        modes.append(ModeParams(
            n=k + 1,
            omega_n=2.3 + 0.6 * rng.random(),
            gamma_n=0.02 + 0.08 * rng.random(),
            g=0.005 + 0.05 * rng.random(),
        ))
    return modes


def check_lorentzian_roundtrip() -> CheckResult:
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(20):
        wn = 2.4 + 0.8 * rng.random()
        gam = 0.01 + 0.1 * rng.random()
        g = 10 ** (-3 + 2 * rng.random())
        grid = np.linspace(wn - 5 * gam, wn + 5 * gam, 161)
        fitted = fit_lorentzian(CouplingSpectrum(
            n=1, grid=grid, values=lorentzian_kappa2(grid, wn, gam, g)))
        worst = max(worst,
                    abs(fitted.omega_n - wn) / wn,
                    abs(fitted.gamma_n - gam) / gam,
                    abs(fitted.g - g) / g)
    return CheckResult("lorentzian-roundtrip", worst < 1e-6,
                       f"max rel err {worst:.2e}")


def check_fano_roundtrip() -> CheckResult:
    rng = np.random.default_rng(5)
    geo = Geometry.from_surface_distance(50.0, 30.0)
    em = EmitterSpec.from_dipole(2.6, 1.0)
    worst = 0.0
    for _ in range(10):
        wn = 2.5 + 0.2 * rng.random()
        grad = 0.15 + 0.2 * rng.random()
        g = (1 if rng.random() < 0.5 else -1) * 10 ** (-4.3 + 0.6 * rng.random())
        grid = np.linspace(wn - 3 * grad, wn + 3 * grad, 201)
        data = fano_rate_model(grid, 1, geo, em, wn, grad, g)
        fitted = fit_fano_rate(grid, data, 1, geo, em)
        sign = 1.0 if fitted.alpha >= 0 else -1.0
        worst = max(worst,
                    abs(fitted.omega_n - wn) / wn,
                    abs(fitted.gamma_rad - grad) / grad,
                    abs(sign * fitted.g - g) / abs(g))
    return CheckResult("fano-roundtrip", worst < 1e-6, f"max rel err {worst:.2e}")


def arrowhead_secular_residual(matrix: np.ndarray, lam: complex) -> float:
    """Scaled det(H - lambda) via the arrowhead structure, an eigenvalue oracle."""
    d0 = matrix[0, 0]
    diag = np.diag(matrix)[1:]
    arms = matrix[0, 1:]
    prod_all = np.prod(diag - lam)
    terms = [(d0 - lam) * prod_all]
    for k in range(arms.size):
        others = np.prod(np.delete(diag, k) - lam)
        terms.append(-arms[k] ** 2 * others)
    scale = max(sum(abs(t) for t in terms), 1e-300)
    return abs(sum(terms)) / scale


def check_secular() -> CheckResult:
    rng = np.random.default_rng(9)
    em = EmitterSpec(omega0=2.7, d_eg=10.0, eta=0.5, gamma0=0.01)
    ham = build_standard(_synthetic_modes(rng, 8), em)
    dressed = eigendecompose(ham)
    worst = max(arrowhead_secular_residual(ham.matrix, lam)
                for lam in dressed.eigenvalues)
    return CheckResult("arrowhead-secular", worst < 1e-8, f"max residual {worst:.2e}")


def check_biorthogonality() -> CheckResult:
    rng = np.random.default_rng(13)
    em = EmitterSpec(omega0=2.7, d_eg=10.0, eta=0.5, gamma0=0.012)
    ham = build_standard(_synthetic_modes(rng, 8), em)
    dressed = eigendecompose(ham)
    gram = dressed.left.conj().T @ dressed.right
    err1 = float(np.max(np.abs(gram - np.eye(gram.shape[0]))))
    # independent oracle: T_L^dag must equal T_R^{-1}
    err2 = float(np.max(np.abs(dressed.left.conj().T
                               - np.linalg.inv(dressed.right))))
    worst = max(err1, err2)
    return CheckResult("biorthogonality", worst < 1e-10, f"max err {worst:.2e}")


def check_spectral_vs_rk() -> CheckResult:
    from scipy.integrate import solve_ivp

    rng = np.random.default_rng(17)
    em = EmitterSpec(omega0=2.7, d_eg=10.0, eta=0.5, gamma0=0.02)
    ham = build_standard(_synthetic_modes(rng, 6), em)
    psi0 = np.zeros(7, dtype=complex)
    psi0[0] = 1.0
    times = np.linspace(0.0, 10.0 / 0.02, 40)
    spectral = evolve(ham, psi0, times)
    sol = solve_ivp(lambda _t, y: -1j * (ham.matrix @ y), (0, times[-1]), psi0,
                    t_eval=times, rtol=1e-11, atol=1e-14)
    worst = 0.0
    for k, state in enumerate(spectral):
        ref = sol.y[:, k]
        ours = np.concatenate(([state.c_e], state.c_n))
        worst = max(worst, float(np.max(np.abs(ours - ref))))
    return CheckResult("spectral-vs-rk", worst < 1e-8, f"max err {worst:.2e}")


def check_polarization_integral() -> CheckResult:
    rng = np.random.default_rng(19)
    em = EmitterSpec(omega0=2.7, d_eg=10.0, eta=0.5, gamma0=0.02)
    ham = build_standard(_synthetic_modes(rng, 5), em)
    closed = polarization_integral(ham)
    # dense core plus log-spaced 1/w^2 tails out to +-1000 eV
    core = np.linspace(em.omega0 - 10.0, em.omega0 + 10.0, 400001)
    hi = em.omega0 + 10.0 * np.logspace(0, 2, 2000)
    lo = em.omega0 - 10.0 * np.logspace(0, 2, 2000)[::-1]
    quad = 0.0
    for grid in (lo, core, hi):
        quad += float(np.trapezoid(polarization_spectrum(ham, grid).values, grid))
    quad /= 2 * math.pi
    rel = abs(closed - quad) / abs(closed)
    return CheckResult("polarization-integral", rel < 1e-3,
                       f"closed {closed:.6e} vs quad {quad:.6e}")


def check_gauge_invariance() -> CheckResult:
    rng = np.random.default_rng(23)
    em = EmitterSpec(omega0=2.7, d_eg=10.0, eta=0.5, gamma0=0.02)
    ham = build_standard(_synthetic_modes(rng, 6), em)
    flipped = flip_coupling_gauge(ham, [-1, 1, -1, 1, 1, -1])
    lam1 = np.sort_complex(eigendecompose(ham).eigenvalues)
    lam2 = np.sort_complex(eigendecompose(flipped).eigenvalues)
    grid = np.linspace(2.0, 3.4, 301)
    p1 = polarization_spectrum(ham, grid).values
    p2 = polarization_spectrum(flipped, grid).values
    worst = max(float(np.max(np.abs(lam1 - lam2))),
                float(np.max(np.abs(p1 - p2) / p1.max())))
    return CheckResult("gauge-invariance", worst < 1e-10, f"max dev {worst:.2e}")


def check_dissipator_expansion() -> CheckResult:
    # Eq-style collective dissipator equals emitter + LSP + cross terms
    rng = np.random.default_rng(29)
    space = build_state_space(1)
    g0n, grad = 0.004, 0.06
    c = math.sqrt(g0n) * space.sigma_ge + math.sqrt(grad) * space.lowering[0]
    rho = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    rho = 0.5 * (rho + rho.conj().T)
    combined = dissipator_action(c, rho)
    d_emit = dissipator_action(math.sqrt(g0n) * space.sigma_ge, rho)
    d_lsp = dissipator_action(math.sqrt(grad) * space.lowering[0], rho)
    a, sge, seg = space.lowering[0], space.sigma_ge, space.sigma_eg
    cross = -0.5 * math.sqrt(g0n * grad) * (
        seg @ a @ rho + rho @ seg @ a - 2 * a @ rho @ seg
        + a.conj().T @ sge @ rho + rho @ a.conj().T @ sge
        - 2 * sge @ rho @ a.conj().T
    )
    err = float(np.max(np.abs(combined - (d_emit + d_lsp + cross))))
    return CheckResult("dissipator-expansion", err < 1e-12, f"max err {err:.2e}")


def check_lindblad_equivalence() -> CheckResult:
    rng = np.random.default_rng(31)
    worst = 0.0
    for _ in range(5):
        n_modes = int(rng.integers(1, 5))
        em = EmitterSpec(omega0=2.5, d_eg=8.0, eta=0.6 + 0.3 * rng.random(),
                         gamma0=0.005 + 0.01 * rng.random())
        frac = rng.dirichlet(np.ones(n_modes + 1))[:n_modes]
        modes = []
        for k in range(n_modes):
            grad = 0.02 + 0.05 * rng.random()
            g = 0.01 + 0.05 * rng.random()
            alpha = math.sqrt(frac[k] * em.gamma0_rad * grad) / g
            if rng.random() < 0.5:
                alpha = -alpha
            modes.append(ModeParams(
                n=k + 1, omega_n=2.3 + 0.5 * rng.random(),
                gamma_n=grad + 0.01, g=g, gamma_rad=grad, gamma_nr=0.01,
                alpha=alpha))
        space = build_state_space(n_modes)
        h_s = build_system_hamiltonian(modes, em, space)
        times = np.linspace(0.0, 150.0, 16)
        psi0 = np.zeros(n_modes + 1, dtype=complex)
        psi0[0] = 1.0
        for kind in ("standard", "fano_radiative", "fano_full"):
            dis = build_dissipators(kind, modes, em, space)
            liou = build_liouvillian(h_s, dis, space)
            states = evolve_master(liou, pure_state(space, 1), times, method="eig")
            amps = evolve(effective_hamiltonian_from_lindblad(h_s, dis),
                          psi0, times)
            for s, a in zip(states, amps):
                psi = np.concatenate(([a.c_e], a.c_n))
                worst = max(worst, float(np.max(np.abs(
                    single_excitation_projection(s) - np.outer(psi, psi.conj())))))
    return CheckResult("lindblad-equivalence", worst < 1e-6, f"max dev {worst:.2e}")


def check_fano_reduction() -> CheckResult:
    rng = np.random.default_rng(37)
    em = EmitterSpec(omega0=2.5, d_eg=8.0, eta=0.7, gamma0=0.01)
    modes = [m for m in _synthetic_modes(rng, 4)]
    zeroed = [ModeParams(n=m.n, omega_n=m.omega_n, gamma_n=m.gamma_n, g=m.g,
                         gamma_rad=m.gamma_n, gamma_nr=0.0, alpha=0.0)
              for m in modes]
    h_fano = build_fano(zeroed, em, variant="general")
    h_std = build_standard(zeroed, em)
    err = float(np.max(np.abs(h_fano.matrix - h_std.matrix)))
    return CheckResult("fano-alpha0-reduction", err == 0.0, f"max dev {err:.2e}")


ALL_CHECKS = (
    check_bessel_series,
    check_wronskian,
    check_riccati_derivatives,
    check_drude,
    check_sum_rule,
    check_qs_resonance,
    check_qs_mie_agreement,
    check_green_quasistatic,
    check_lorentzian_roundtrip,
    check_fano_roundtrip,
    check_secular,
    check_biorthogonality,
    check_spectral_vs_rk,
    check_polarization_integral,
    check_gauge_invariance,
    check_dissipator_expansion,
    check_lindblad_equivalence,
    check_fano_reduction,
)


def run_all(verbose: bool = True) -> list[CheckResult]:
    results = []
    for check in ALL_CHECKS:
        result = check()
        results.append(result)
        if verbose:
            status = "PASS" if result.passed else "FAIL"
            print(f"[{status}] {result.name}: {result.detail}")
    return results
