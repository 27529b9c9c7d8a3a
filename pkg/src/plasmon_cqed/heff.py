"""Non-hermitian effective Hamiltonians, biorthogonal dressed states,
amplitude dynamics and emission spectra.

Matrices live in the rotating frame at the emitter frequency: diagonal
entries are (Delta_n - i Gamma_n/2) with Delta_n = omega_n - omega0 and the
emitter entry -i gamma0/2.  All stored Hamiltonians are complex symmetric
(H[0,n] = H[n,0]), so left eigenvectors are conjugated right eigenvectors up
to the diagonal phase gauge handled by left_from_right.  Absolute frequencies
reappear only in the spectra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    IncompleteModesError,
    InvalidArgumentError,
    NearDefectiveError,
    NumericalFailureError,
    SingularityError,
)
from .medium import EmitterSpec, Geometry, MaterialModel, radiative_rate
from .mie import qs_polarizability

BIORTHO_FLOOR = 1e-10


@dataclass(frozen=True)
class EffectiveHamiltonian:
    """(N+1)x(N+1) rotating-frame matrix over {|e,0>, |g,1_1>..|g,1_N>}."""

    kind: str  # "standard" | "fano"
    matrix: np.ndarray
    modes: tuple
    emitter: EmitterSpec

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] - 1

    @property
    def basis_labels(self) -> list[str]:
        return ["|e,0>"] + [f"|g,1_{m.n}>" for m in self.modes]


def build_standard(modes, emitter: EmitterSpec) -> EffectiveHamiltonian:
    """Standard effective Hamiltonian: diagonal losses, real couplings g_n."""
    if not modes:
        raise InvalidArgumentError("at least one mode required")
    n = len(modes)
    h = np.zeros((n + 1, n + 1), dtype=complex)
    h[0, 0] = -0.5j * emitter.gamma0
    for i, mode in enumerate(modes, start=1):
        if not mode.gamma_n > 0:
            raise InvalidArgumentError(f"mode {mode.n} has non-positive width")
        h[i, i] = mode.detuning(emitter) - 0.5j * mode.gamma_n
        h[0, i] = h[i, 0] = mode.g
    return EffectiveHamiltonian(kind="standard", matrix=h, modes=tuple(modes),
                                emitter=emitter)


def build_fano(modes, emitter: EmitterSpec,
               variant: str = "general") -> EffectiveHamiltonian:
    """Fano effective Hamiltonian with leaky off-diagonals g_n(1 - i alpha_n/2).

    radiative_only keeps only the radiative widths on the diagonal (lossless
    heuristic); general uses the full gamma0 and Gamma_n = Gamma_rad + Gamma_nr.
    """
    if variant not in ("radiative_only", "general"):
        raise InvalidArgumentError(f"unknown Fano variant {variant!r}")
    if not modes:
        raise InvalidArgumentError("at least one mode required")
    n = len(modes)
    h = np.zeros((n + 1, n + 1), dtype=complex)
    for mode in modes:
        if mode.alpha is None or mode.gamma_rad is None:
            raise IncompleteModesError(
                f"mode {mode.n} lacks the Fano split (alpha/gamma_rad)")
    if variant == "radiative_only":
        h[0, 0] = -0.5j * emitter.gamma0_rad
    else:
        h[0, 0] = -0.5j * emitter.gamma0
    for i, mode in enumerate(modes, start=1):
        if variant == "radiative_only":
            width = mode.gamma_rad
        else:
            width = mode.gamma_rad + (mode.gamma_nr or 0.0)
        h[i, i] = mode.detuning(emitter) - 0.5j * width
        h[0, i] = h[i, 0] = mode.g * (1.0 - 0.5j * mode.alpha)
    return EffectiveHamiltonian(kind="fano", matrix=h, modes=tuple(modes),
                                emitter=emitter)


@dataclass(frozen=True)
class DressedSet:
    """Biorthogonal eigensystem: lambda_m = omega_m - i gamma_m/2 plus paired
    right/left vectors with <L_m|R_m'> = delta.  weights[m] is the resolvent
    residue on the emitter entry (the m0^2 of the polarization spectrum)."""

    eigenvalues: np.ndarray
    right: np.ndarray  # columns
    left: np.ndarray   # columns
    weights: np.ndarray

    @property
    def frequencies(self) -> np.ndarray:
        return self.eigenvalues.real

    @property
    def widths(self) -> np.ndarray:
        return -2.0 * self.eigenvalues.imag

    def emitter_fraction(self, m: int) -> float:
        """|m0|^2 of dressed state m in the paper-gauge normalization."""
        return float(np.abs(self.weights[m]))

    def weight_table(self) -> np.ndarray:
        """|<basis_k|Pi_m^R>|^2, rows = dressed states, columns = basis."""
        return np.abs(self.right.T) ** 2


def left_from_right(right: np.ndarray, thetas=None, kappa: float = 0.0):
    """Dual (left) basis from right eigenvectors via the diagonal phase gauge.

    For a Hamiltonian with off-diagonal phases theta_i the left vectors are
    S S^T conj(right) with S = diag(1, e^{-i theta_1}, ...) e^{i kappa}; the
    symmetric storage used here has theta_i = 0, reducing to plain
    conjugation, while theta_i = pi/2, kappa = pi/2 reproduces the
    sign-flipped first component of the hermitian-phase gauge.
    """
    right = np.asarray(right, dtype=complex)
    dim = right.shape[0]
    if thetas is None:
        thetas = np.zeros(dim - 1)
    phases = np.concatenate(([1.0], np.exp(-2j * np.asarray(thetas, dtype=float))))
    ss_t = np.exp(2j * kappa) * phases
    left = ss_t[:, None] * np.conj(right)
    overlap = np.sum(np.conj(left) * right, axis=0)
    small = np.abs(overlap) < BIORTHO_FLOOR
    if np.any(small):
        raise NearDefectiveError(
            f"biorthogonal overlap underflow for states {np.nonzero(small)[0]}")
    return left / np.conj(overlap)[None, :]


def eigendecompose(h: EffectiveHamiltonian | np.ndarray) -> DressedSet:
    """All eigenpairs of the dense complex matrix, sorted by real part,
    normalized so <Pi_L|Pi_R> = 1 with left vectors from the symmetric gauge."""
    matrix = h.matrix if isinstance(h, EffectiveHamiltonian) else np.asarray(h)
    if not np.all(np.isfinite(matrix)):
        raise InvalidArgumentError("Hamiltonian has non-finite entries")
    try:
        lam, vec = np.linalg.eig(matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigensolver failed: {exc}") from exc
    order = np.argsort(lam.real)
    lam, vec = lam[order], vec[:, order]
    # complex-symmetric normalization v^T v = 1
    q = np.sum(vec * vec, axis=0)
    if np.any(np.abs(q) < BIORTHO_FLOOR):
        raise NearDefectiveError("eigenbasis nearly defective (v^T v underflow)")
    vec = vec / np.sqrt(q)[None, :]
    left = left_from_right(vec)
    # resolvent residue on the emitter entry: <e,0|Pi_m^R><Pi_m^L|e,0>
    weights = vec[0, :] * np.conj(left[0, :])
    return DressedSet(eigenvalues=lam, right=vec, left=left, weights=weights)


@dataclass(frozen=True)
class AmplitudeState:
    """Single-excitation amplitudes at time t (hbar/eV units)."""

    t: float
    c_e: complex
    c_n: np.ndarray

    @property
    def norm_sq(self) -> float:
        return float(abs(self.c_e) ** 2 + np.sum(np.abs(self.c_n) ** 2))


def evolve(h: EffectiveHamiltonian, psi0, times) -> list[AmplitudeState]:
    """Spectral propagation psi(t) = sum_m eta_m |Pi_m^R> e^{-i lambda_m t}.

    Exact for the rational spectrum (no time-stepping error); falls back to
    adaptive integration only if the eigenbasis is near defective.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    times = np.asarray(times, dtype=float)
    try:
        dressed = eigendecompose(h)
        eta = dressed.left.conj().T @ psi0
        phases = np.exp(-1j * np.outer(times, dressed.eigenvalues))
        traj = (phases * eta[None, :]) @ dressed.right.T
    except NearDefectiveError:
        traj = _evolve_rk(h.matrix, psi0, times)
    return [AmplitudeState(t=float(t), c_e=complex(row[0]), c_n=row[1:].copy())
            for t, row in zip(times, traj)]


def _evolve_rk(matrix, psi0, times):
    from scipy.integrate import solve_ivp

    def rhs(_t, y):
        return -1j * (matrix @ y)

    t0, t1 = 0.0, float(np.max(times)) if len(times) else 0.0
    sol = solve_ivp(rhs, (t0, max(t1, 1e-12)), psi0, t_eval=times,
                    rtol=1e-10, atol=1e-13)
    if not sol.success:
        raise NumericalFailureError(f"time stepping failed: {sol.message}")
    return sol.y.T


@dataclass(frozen=True)
class PolarizationSpectrum:
    grid: np.ndarray          # absolute hbar*omega, eV
    values: np.ndarray
    dressed_frequencies: np.ndarray  # omega0 + omega_m
    dressed_widths: np.ndarray       # gamma_m


def polarization_spectrum(h: EffectiveHamiltonian, grid) -> PolarizationSpectrum:
    """Near-field polarization spectrum for an initially excited emitter,
    P(w) = |sum_m m0^2 / (w - (omega0 + omega_m) + i gamma_m/2)|^2."""
    grid = np.asarray(grid, dtype=float)
    dressed = eigendecompose(h)
    u = grid[:, None] - h.emitter.omega0 - dressed.eigenvalues[None, :]
    values = np.abs(np.sum(dressed.weights[None, :] / u, axis=1)) ** 2
    return PolarizationSpectrum(
        grid=grid,
        values=values,
        dressed_frequencies=h.emitter.omega0 + dressed.frequencies,
        dressed_widths=dressed.widths,
    )


def polarization_integral(h: EffectiveHamiltonian) -> float:
    """Closed form of int P(w) dw / 2pi by residues,
    sum_{m,m'} w_m conj(w_m') / (i (lambda_m - conj(lambda_m')))."""
    dressed = eigendecompose(h)
    lam, w = dressed.eigenvalues, dressed.weights
    denom = 1j * (lam[:, None] - np.conj(lam)[None, :])
    return float(np.real(np.sum(w[:, None] * np.conj(w)[None, :] / denom)))


def amplitude_response(h: EffectiveHamiltonian, grid) -> np.ndarray:
    """Frequency-domain amplitudes C(w) = i (u I - H)^{-1} |e,0>, u = w - omega0.

    Direct linear solve per grid point: exact for the rational spectrum, no
    windowing artifacts.
    """
    grid = np.asarray(grid, dtype=float)
    dim = h.matrix.shape[0]
    source = np.zeros(dim, dtype=complex)
    source[0] = 1.0
    out = np.empty((grid.size, dim), dtype=complex)
    eye = np.eye(dim)
    for i, w in enumerate(grid):
        u = w - h.emitter.omega0
        try:
            out[i] = 1j * np.linalg.solve(u * eye - h.matrix, source)
        except np.linalg.LinAlgError as exc:
            raise SingularityError(
                f"resolvent singular at hbar*omega={w} eV") from exc
    return out


@dataclass(frozen=True)
class RadiatedSpectrum:
    grid: np.ndarray
    p_rad: np.ndarray
    lsp1_population: np.ndarray   # |C_1(w)|^2 far-field proxy
    gamma_rad: np.ndarray         # frequency-dependent radiative rate, eV


def radiated_spectrum(h: EffectiveHamiltonian, grid, geometry: Geometry,
                      material: MaterialModel) -> RadiatedSpectrum:
    """Total radiated power P_rad(w) = gamma_rad(w) P(w) / 2pi and the bright
    dipolar-mode population proxy |C_1(w)|^2.

    gamma_rad(w) uses the dipolar-polarizability enhancement
    gamma0_rad(w) [1 + 4 |alpha_1^eff(w)|^2 / r_d^6].
    """
    grid = np.asarray(grid, dtype=float)
    amps = amplitude_response(h, grid)
    p_of_w = np.abs(amps[:, 0]) ** 2
    g_rad = np.empty_like(grid)
    for i, w in enumerate(grid):
        _, alpha_eff = qs_polarizability(1, w, geometry, material)
        g_rad[i] = radiative_rate(w, h.emitter.d_eg, geometry.n_b) \
            * (1.0 + 4.0 * abs(alpha_eff) ** 2 / geometry.r_d**6)
    p_rad = g_rad * p_of_w / (2.0 * math.pi)
    lsp1 = np.abs(amps[:, 1]) ** 2 if h.n_modes >= 1 else np.zeros_like(grid)
    return RadiatedSpectrum(grid=grid, p_rad=p_rad, lsp1_population=lsp1,
                            gamma_rad=g_rad)


def flip_coupling_gauge(h: EffectiveHamiltonian, signs) -> EffectiveHamiltonian:
    """Flip the sign of selected off-diagonals (diagonal gauge transformation);
    observables must be invariant."""
    signs = np.asarray(signs, dtype=float)
    if signs.size != h.n_modes:
        raise InvalidArgumentError("one sign per mode required")
    s = np.concatenate(([1.0], signs))
    matrix = (s[:, None] * h.matrix) * s[None, :]
    return EffectiveHamiltonian(kind=h.kind, matrix=matrix, modes=h.modes,
                                emitter=h.emitter)
