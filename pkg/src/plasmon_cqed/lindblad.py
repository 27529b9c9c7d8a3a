"""Density-matrix evolution in the ground + single-excitation sector and its
equivalence with the non-hermitian effective Hamiltonian route.

Basis order: {|g,0>, |e,0>, |g,1_1>, ..., |g,1_N>}, dimension N+2.  The
sector truncation is exact here: with no pump, every dissipator moves
excitation downward, so the ground population only grows.

The paper-style dissipators carry the 1/2 convention folded in; they equal
the standard Lindblad form D[c]rho = c rho c+ - {c+c, rho}/2 with c = sqrt(rate)*op,
which is what is assembled below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ContractViolationError,
    InvalidArgumentError,
    InvalidRateError,
    StiffnessError,
)
from .heff import EffectiveHamiltonian
from .medium import EmitterSpec

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-9
POSITIVITY_FLOOR = -1e-9


@dataclass(frozen=True)
class StateSpace:
    """Operators of the truncated emitter + N-plasmon sector."""

    n_modes: int
    sigma_ge: np.ndarray
    sigma_eg: np.ndarray
    lowering: tuple  # a_n, n = 1..N
    labels: tuple

    @property
    def dim(self) -> int:
        return self.n_modes + 2


def _from_triplets(dim, triplets):
    out = np.zeros((dim, dim), dtype=complex)
    for row, col, val in triplets:
        out[row, col] = val
    return out


def build_state_space(n_modes: int) -> StateSpace:
    """Sector-restricted sigma and a_n matrices from their (row, col, value)
    triplets; a_n |g,1_m> = delta_nm |g,0>, sigma_ge |e,0> = |g,0>."""
    if n_modes < 0:
        raise InvalidArgumentError("n_modes must be >= 0")
    dim = n_modes + 2
    sigma_ge = _from_triplets(dim, [(0, 1, 1.0)])
    lowering = tuple(
        _from_triplets(dim, [(0, 2 + k, 1.0)]) for k in range(n_modes)
    )
    labels = ("|g,0>", "|e,0>") + tuple(f"|g,1_{k+1}>" for k in range(n_modes))
    return StateSpace(
        n_modes=n_modes,
        sigma_ge=sigma_ge,
        sigma_eg=sigma_ge.conj().T,
        lowering=lowering,
        labels=labels,
    )


@dataclass(frozen=True)
class DissipatorSpec:
    """Collapse channels c_k (rates folded in as amplitudes) for one of the
    three master equations."""

    kind: str  # standard | fano_radiative | fano_full
    channels: tuple  # (label, matrix)
    modes: tuple
    emitter: EmitterSpec
    space: StateSpace


def _require_rate(value, label):
    if value is None or value < 0:
        raise InvalidRateError(f"{label} must be a nonnegative rate, got {value}")
    return value


def build_dissipators(kind: str, modes, emitter: EmitterSpec,
                      space: StateSpace) -> DissipatorSpec:
    """Collapse channels for the standard, Fano-radiative or full-Fano kinds.

    standard:        sqrt(gamma0) sigma_ge and sqrt(Gamma_n) a_n.
    fano_radiative:  collective c_n = sqrt(gamma0n_rad) sigma_ge + sqrt(Gamma_n_rad) a_n,
                     whose expansion is D_0 + D_LSPn + the cross relaxation.
    fano_full:       fano_radiative plus sqrt(Gamma_n_nr) a_n and, when the
                     emitter has an intrinsic non-radiative rate, the
                     sqrt(gamma0_nr) sigma_ge channel so the induced effective
                     Hamiltonian carries the full gamma0.

    The bath sums behind the collective channels run over every multipole;
    truncating to N modes leaves a residual free-space radiative weight
    gamma0_rad - sum_n gamma0n_rad, carried by a plain emitter channel so the
    induced effective Hamiltonian keeps the full radiative diagonal and the
    alpha -> 0 limit collapses exactly onto the standard dissipators.
    """
    if kind not in ("standard", "fano_radiative", "fano_full"):
        raise InvalidArgumentError(f"unknown dissipator kind {kind!r}")
    if len(modes) != space.n_modes:
        raise InvalidArgumentError("mode count does not match state space")
    channels = []
    if kind == "standard":
        g0 = _require_rate(emitter.gamma0, "gamma0")
        channels.append(("emitter", math.sqrt(g0) * space.sigma_ge))
        for mode, a in zip(modes, space.lowering):
            g = _require_rate(mode.gamma_n, f"Gamma_{mode.n}")
            channels.append((f"lsp{mode.n}", math.sqrt(g) * a))
    else:
        gamma0n_total = 0.0
        for mode, a in zip(modes, space.lowering):
            g_rad = _require_rate(mode.gamma_rad, f"Gamma_{mode.n}^rad")
            alpha = mode.alpha if mode.alpha is not None else 0.0
            # signed emitter-bath amplitude: alpha*g = +-sqrt(gamma0n_rad * Gamma_rad)
            zeta = alpha * mode.g / math.sqrt(g_rad) if g_rad > 0 else 0.0
            gamma0n_total += zeta**2
            channels.append(
                (f"collective{mode.n}",
                 zeta * space.sigma_ge + math.sqrt(g_rad) * a)
            )
        rest = emitter.gamma0_rad - gamma0n_total
        if rest < -1e-9 * max(emitter.gamma0_rad, 1e-300):
            raise InvalidRateError(
                "per-mode gamma0n_rad weights exceed the free-space radiative rate")
        if rest > 0:
            channels.append(("emitter_rad_rest", math.sqrt(rest) * space.sigma_ge))
        if kind == "fano_full":
            for mode, a in zip(modes, space.lowering):
                g_nr = _require_rate(mode.gamma_nr or 0.0, f"Gamma_{mode.n}^nr")
                if g_nr > 0:
                    channels.append((f"nonrad{mode.n}", math.sqrt(g_nr) * a))
            if emitter.gamma0_nr > 0:
                channels.append(
                    ("emitter_nr", math.sqrt(emitter.gamma0_nr) * space.sigma_ge))
    return DissipatorSpec(kind=kind, channels=tuple(channels), modes=tuple(modes),
                          emitter=emitter, space=space)


def build_system_hamiltonian(modes, emitter: EmitterSpec,
                             space: StateSpace) -> np.ndarray:
    """Hermitian rotating-frame H_S = sum Delta_n a+a + sum g_n (sigma_eg a_n + h.c.)."""
    h = np.zeros((space.dim, space.dim), dtype=complex)
    for mode, a in zip(modes, space.lowering):
        h += mode.detuning(emitter) * (a.conj().T @ a)
        h += mode.g * (space.sigma_eg @ a + a.conj().T @ space.sigma_ge)
    return h


def dissipator_action(channel: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """D[c]rho = c rho c+ - (c+c rho + rho c+c)/2."""
    cd = channel.conj().T
    cdc = cd @ channel
    return channel @ rho @ cd - 0.5 * (cdc @ rho + rho @ cdc)


def build_liouvillian(h_s: np.ndarray, dissipators: DissipatorSpec,
                      space: StateSpace) -> np.ndarray:
    """Column-stacked superoperator: d vec(rho)/dt = L vec(rho)."""
    h_s = np.asarray(h_s, dtype=complex)
    if np.max(np.abs(h_s - h_s.conj().T)) > HERMITICITY_TOL:
        raise ContractViolationError("system Hamiltonian must be hermitian")
    dim = space.dim
    eye = np.eye(dim)
    liou = -1j * (np.kron(eye, h_s) - np.kron(h_s.T, eye))
    for _, c in dissipators.channels:
        cdc = c.conj().T @ c
        liou += np.kron(c.conj(), c) \
            - 0.5 * (np.kron(eye, cdc) + np.kron(cdc.T, eye))
    return liou


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, trace <= 1, positive-semidefinite state snapshot."""

    rho: np.ndarray
    t: float = 0.0

    def validate(self) -> None:
        rho = self.rho
        if np.max(np.abs(rho - rho.conj().T)) > HERMITICITY_TOL:
            raise ContractViolationError("density matrix not hermitian")
        tr = float(np.real(np.trace(rho)))
        if not -TRACE_TOL <= tr <= 1.0 + TRACE_TOL:
            raise ContractViolationError(f"trace {tr} outside [0, 1]")
        if float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)))) < POSITIVITY_FLOOR:
            raise ContractViolationError("density matrix not positive semidefinite")

    def population(self, index: int) -> float:
        return float(np.real(self.rho[index, index]))

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.rho)))


def pure_state(space: StateSpace, index: int) -> DensityMatrix:
    rho = np.zeros((space.dim, space.dim), dtype=complex)
    rho[index, index] = 1.0
    return DensityMatrix(rho=rho)


RK_RTOL = 1e-10
RK_ATOL = 1e-13


def evolve_master(liouvillian: np.ndarray, rho0: DensityMatrix, times,
                  method: str = "rk45") -> list[DensityMatrix]:
    """Propagate the vectorized master equation to the requested times.

    rk45: adaptive embedded Runge-Kutta 5(4).  Tolerances sit an order below
          the state-validation floors so integration error can never trip the
          positivity check.
    eig:  dense Liouvillian eigendecomposition; exact propagation, the
          reference path for stiff rate hierarchies.
    """
    times = np.asarray(times, dtype=float)
    rho0.validate()
    dim = rho0.rho.shape[0]
    v0 = rho0.rho.flatten(order="F")
    if method == "eig":
        lam, w = np.linalg.eig(liouvillian)
        coeff = np.linalg.solve(w, v0)
        states = []
        for t in times:
            vec = w @ (coeff * np.exp(lam * t))
            states.append(DensityMatrix(rho=vec.reshape((dim, dim), order="F"),
                                        t=float(t)))
    elif method == "rk45":
        from scipy.integrate import solve_ivp

        sol = solve_ivp(
            lambda _t, v: liouvillian @ v,
            (0.0, float(max(times.max(), 1e-12))),
            v0,
            t_eval=times,
            rtol=RK_RTOL,
            atol=RK_ATOL,
        )
        if not sol.success:
            raise StiffnessError(
                f"RK45 failed ({sol.message}); use method='eig' (spectral path)")
        states = [
            DensityMatrix(rho=sol.y[:, i].reshape((dim, dim), order="F"),
                          t=float(t))
            for i, t in enumerate(times)
        ]
    else:
        raise InvalidArgumentError(f"unknown method {method!r}")
    for s in states:
        s.validate()
    return states


def effective_hamiltonian_from_lindblad(h_s: np.ndarray,
                                        dissipators: DissipatorSpec) -> EffectiveHamiltonian:
    """H_eff = H_S - (i/2) sum c+c restricted to the single-excitation block.

    Reproduces the standard matrix for the standard kind and the Fano
    matrices (leaky off-diagonals) for the collective kinds.
    """
    h_s = np.asarray(h_s, dtype=complex)
    total = h_s.astype(complex).copy()
    for _, c in dissipators.channels:
        total = total - 0.5j * (c.conj().T @ c)
    block = total[1:, 1:]
    kind = "standard" if dissipators.kind == "standard" else "fano"
    return EffectiveHamiltonian(kind=kind, matrix=block,
                                modes=dissipators.modes,
                                emitter=dissipators.emitter)


def single_excitation_projection(state: DensityMatrix) -> np.ndarray:
    """Restriction of rho to the {|e,0>, |g,1_n>} block."""
    return state.rho[1:, 1:]
