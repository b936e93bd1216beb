"""Deterministic fixed-step propagation of the open-chain dynamics.

Three engines share one RK4 core:

* evolve            - density matrix stacked with the per-site memory
                      operators (finite-memory baths),
* lindblad_evolve   - density matrix under the white-noise limit,
* closed_evolve     - pure Schroedinger state, no baths.

The stacked integration state is ordered (rho, oz_1..oz_N, ow_1..ow_N) as
one complex array of shape (2N+1, d, d).  Trace, Hermiticity, and
finiteness of rho are monitored at every recorded sample and violations
are hard errors; positivity is only monitored (reported via observers and
the runner), except for the Lindblad engine where eigenvalues below
-1e-8 indicate integration failure.

Default representation is the smallest exact sector space for the chosen
coupling channel: sector {1} for sigma_z (it conserves excitation number)
and sectors {0, 1} for sigma_minus.  The sigma_minus model is defined on
that vacuum-plus-single-excitation manifold; "full" mode embeds the same
generator in the 2^N space and exists to validate the sector bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import bath as bath_mod
from . import hilbert, model
from .bath import BathSpec, CHANNEL_SIGMA_MINUS, CHANNEL_SIGMA_Z
from .control import NO_CONTROL, ControlSpec
from .errors import (
    ConfigInvalid,
    DimMismatch,
    HermiticityDrift,
    InvariantViolation,
    NonFiniteValue,
    PositivityViolation,
    TraceDrift,
)

TRACE_TOL = 1e-6
HERM_TOL = 1e-8
POSITIVITY_FLOOR = -1e-8
NORM_DRIFT_RATE = 1e-9  # closed-engine norm drift allowance per unit time

MODE_SECTOR = "sector"
MODE_FULL = "full"


@dataclass
class IntegratorConfig:
    """Fixed-step settings.  dt is nudged to S / round(S/dt) at run time so
    the grid lands exactly on the protocol end; record_every thins the
    recorded samples."""

    dt: float = 1e-3
    method: str = "rk4"
    record_every: int = 1
    diagnostics: bool = True

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigInvalid(f"dt must be positive, got {self.dt}")
        if self.method != "rk4":
            raise ConfigInvalid(f"unknown integration method {self.method!r}")
        if self.record_every < 1:
            raise ConfigInvalid("record_every must be >= 1")


@dataclass
class NonMarkovianState:
    """One recorded sample: time, density matrix, memory operator stacks."""

    t: float
    rho: np.ndarray
    oz: np.ndarray
    ow: np.ndarray


def resolve_steps(total_time: float, dt: float) -> tuple[int, float]:
    """Number of steps and the adjusted dt whose grid ends exactly at S."""
    n = max(1, round(total_time / dt))
    return n, total_time / n


def simulation_space(channel: str, n_sites: int, mode: str = MODE_SECTOR) -> hilbert.HilbertSpec:
    """Representation used by the engines for a given coupling channel."""
    if mode == MODE_FULL:
        return hilbert.HilbertSpec.full(n_sites)
    if mode != MODE_SECTOR:
        raise ConfigInvalid(f"unknown mode {mode!r}, expected sector|full")
    if channel == CHANNEL_SIGMA_Z:
        return hilbert.HilbertSpec.sector(n_sites, (1,))
    return hilbert.HilbertSpec.sector(n_sites, (0, 1))


def coupling_operators(channel: str, space: hilbert.HilbertSpec) -> np.ndarray:
    """Stacked L_j for all sites in the requested space.

    sigma_z embeds exactly in any space.  The sigma_minus model lives on
    the {0,1} manifold, so in a full space its couplings are the {0,1}
    block of sigma_minus embedded with zeros elsewhere; higher sectors
    stay frozen by construction.
    """
    n = space.n_sites
    if channel == CHANNEL_SIGMA_Z:
        return np.stack(
            [hilbert.site_operator(hilbert.SIGMA_Z, j, space) for j in range(1, n + 1)])
    if channel != CHANNEL_SIGMA_MINUS:
        raise ConfigInvalid(f"unknown channel {channel!r}")
    manifold = hilbert.HilbertSpec.sector(n, (0, 1))
    ls = np.stack(
        [hilbert.site_operator(hilbert.SIGMA_MINUS, j, manifold) for j in range(1, n + 1)])
    if space == manifold:
        return ls
    return np.stack([hilbert.embed_operator(l, manifold, space) for l in ls])


def master_rhs(state: NonMarkovianState, h_active: np.ndarray,
               ls: Sequence[np.ndarray], spec: BathSpec):
    """Full stacked derivative (drho, doz, dow) of the memory-closure
    master equation at the given active Hamiltonian."""
    ls = np.asarray(ls, dtype=complex)
    if ls.shape[0] != spec.n_sites:
        raise DimMismatch(f"expected {spec.n_sites} coupling operators")
    ldag = ls.conj().transpose(0, 2, 1)
    wz, ww, decay = bath_mod._weights(spec)
    doz, dow = bath_mod.o_rhs_stacked(h_active, ls, ldag, state.oz, state.ow,
                                      wz, ww, decay)
    rho = state.rho
    drho = -1j * (h_active @ rho - rho @ h_active)
    drho += bath_mod.dissipator_rhs(rho, ls, ldag, state.oz, state.ow)
    return drho, doz, dow


def _check_rho(rho: np.ndarray, t: float) -> None:
    if not np.all(np.isfinite(rho.view(float))):
        raise NonFiniteValue(f"non-finite density matrix at t={t:.6f}")
    tr_err = abs(np.trace(rho) - 1.0)
    if tr_err > TRACE_TOL:
        raise TraceDrift(f"|tr rho - 1| = {tr_err:.3e} > {TRACE_TOL:.0e} at t={t:.6f}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERM_TOL:
        raise HermiticityDrift(
            f"max|rho - rho^+| = {herm:.3e} > {HERM_TOL:.0e} at t={t:.6f}")


def _rk4_step(rhs: Callable, t: float, y: np.ndarray, dt: float,
              k1: np.ndarray | None = None) -> np.ndarray:
    # accumulator form keeps at most four state-sized arrays alive
    k = rhs(t, y) if k1 is None else k1
    acc = k.copy()
    k = rhs(t + 0.5 * dt, y + (0.5 * dt) * k)
    acc += 2.0 * k
    k = rhs(t + 0.5 * dt, y + (0.5 * dt) * k)
    acc += 2.0 * k
    k = rhs(t + dt, y + dt * k)
    acc += k
    acc *= dt / 6.0
    acc += y
    return acc


def _as_density_matrix(initial: np.ndarray | None, chain: model.ChainSpec,
                       space: hilbert.HilbertSpec) -> np.ndarray:
    if initial is None:
        psi = model.initial_state(chain, space)
        return np.outer(psi, psi.conj())
    initial = np.asarray(initial, dtype=complex)
    if initial.ndim == 1:
        if initial.shape != (space.dim,):
            raise DimMismatch(f"state length {initial.shape[0]} != dim {space.dim}")
        nrm = np.linalg.norm(initial)
        if abs(nrm - 1.0) > 1e-9:
            raise ConfigInvalid(f"initial state norm {nrm!r} != 1")
        return np.outer(initial, initial.conj())
    if initial.shape != (space.dim, space.dim):
        raise DimMismatch(f"density matrix shape {initial.shape} != dim {space.dim}")
    if abs(np.trace(initial) - 1.0) > 1e-9:
        raise ConfigInvalid("initial density matrix must have unit trace")
    return initial.copy()


def evolve(initial: np.ndarray | None, chain: model.ChainSpec, bath: BathSpec,
           ctrl: ControlSpec = NO_CONTROL,
           cfg: IntegratorConfig | None = None,
           observer: Callable[[NonMarkovianState, np.ndarray], None] | None = None,
           mode: str = MODE_SECTOR,
           keep_trajectory: bool = True) -> list[NonMarkovianState]:
    """Propagate (rho, oz, ow) from t=0 to t=S with memory operators
    starting at zero.  Returns the recorded trajectory; the observer, if
    given, additionally receives each sample with the exact drho/dt.
    """
    cfg = cfg or IntegratorConfig()
    if bath.n_sites != chain.n_sites:
        raise ConfigInvalid("bath and chain disagree on n_sites")
    space = simulation_space(bath.channel, chain.n_sites, mode)
    ls = coupling_operators(bath.channel, space)
    ldag = ls.conj().transpose(0, 2, 1)
    wz, ww, decay = bath_mod._weights(bath)
    n = chain.n_sites
    d = space.dim

    rho0 = _as_density_matrix(initial, chain, space)
    y = np.zeros((2 * n + 1, d, d), dtype=complex)
    y[0] = rho0

    def rhs(t: float, state: np.ndarray) -> np.ndarray:
        h = model.controlled_hamiltonian(chain, ctrl, t, space)
        oz = state[1:n + 1]
        ow = state[n + 1:]
        doz, dow = bath_mod.o_rhs_stacked(h, ls, ldag, oz, ow, wz, ww, decay)
        out = np.empty_like(state)
        rho = state[0]
        out[0] = -1j * (h @ rho - rho @ h)
        out[0] += bath_mod.dissipator_rhs(rho, ls, ldag, oz, ow)
        out[1:n + 1] = doz
        out[n + 1:] = dow
        return out

    n_steps, dt = resolve_steps(chain.total_time, cfg.dt)
    trajectory: list[NonMarkovianState] = []
    for step in range(n_steps + 1):
        t = step * dt
        record = (step % cfg.record_every == 0) or step == n_steps
        k1 = rhs(t, y)
        if record:
            _check_rho(y[0], t)
            sample = NonMarkovianState(
                t=t, rho=y[0].copy(), oz=y[1:n + 1].copy(), ow=y[n + 1:].copy())
            if keep_trajectory:
                trajectory.append(sample)
            if observer is not None:
                observer(sample, k1[0].copy())
        if step < n_steps:
            y = _rk4_step(rhs, t, y, dt, k1=k1)
    if not keep_trajectory and trajectory == []:
        # always hand back the endpoint so callers have something concrete
        trajectory.append(NonMarkovianState(
            t=n_steps * dt, rho=y[0].copy(), oz=y[1:n + 1].copy(), ow=y[n + 1:].copy()))
    return trajectory


def lindblad_evolve(initial: np.ndarray | None, chain: model.ChainSpec,
                    bath: BathSpec, ctrl: ControlSpec = NO_CONTROL,
                    cfg: IntegratorConfig | None = None,
                    observer: Callable[[float, np.ndarray, np.ndarray], None] | None = None,
                    mode: str = MODE_SECTOR) -> list[tuple[float, np.ndarray]]:
    """Propagate rho under the white-noise master equation."""
    cfg = cfg or IntegratorConfig()
    if bath.n_sites != chain.n_sites:
        raise ConfigInvalid("bath and chain disagree on n_sites")
    space = simulation_space(bath.channel, chain.n_sites, mode)
    ls = coupling_operators(bath.channel, space)

    def rhs(t: float, rho: np.ndarray) -> np.ndarray:
        h = model.controlled_hamiltonian(chain, ctrl, t, space)
        return bath_mod.lindblad_rhs(rho, h, ls, bath)

    y = _as_density_matrix(initial, chain, space)
    n_steps, dt = resolve_steps(chain.total_time, cfg.dt)
    trajectory: list[tuple[float, np.ndarray]] = []
    for step in range(n_steps + 1):
        t = step * dt
        record = (step % cfg.record_every == 0) or step == n_steps
        k1 = rhs(t, y)
        if record:
            _check_rho(y, t)
            if cfg.diagnostics:
                low = float(np.linalg.eigvalsh(0.5 * (y + y.conj().T))[0])
                if low < POSITIVITY_FLOOR:
                    raise PositivityViolation(
                        f"rho eigenvalue {low:.3e} below {POSITIVITY_FLOOR:.0e} "
                        f"at t={t:.6f}")
            trajectory.append((t, y.copy()))
            if observer is not None:
                observer(t, y.copy(), k1.copy())
        if step < n_steps:
            y = _rk4_step(rhs, t, y, dt, k1=k1)
    return trajectory


def closed_evolve(initial: np.ndarray | None, chain: model.ChainSpec,
                  ctrl: ControlSpec = NO_CONTROL,
                  cfg: IntegratorConfig | None = None,
                  observer: Callable[[float, np.ndarray], None] | None = None,
                  space: hilbert.HilbertSpec | None = None) -> list[tuple[float, np.ndarray]]:
    """Schroedinger propagation of a pure state (no baths)."""
    cfg = cfg or IntegratorConfig()
    if space is None:
        space = hilbert.HilbertSpec.sector(chain.n_sites, (1,))
    if initial is None:
        psi = model.initial_state(chain, space)
    else:
        psi = np.asarray(initial, dtype=complex)
        if psi.shape != (space.dim,):
            raise DimMismatch(f"state length {psi.shape} != dim {space.dim}")

    def rhs(t: float, state: np.ndarray) -> np.ndarray:
        h = model.controlled_hamiltonian(chain, ctrl, t, space)
        return -1j * (h @ state)

    y = psi.copy()
    n_steps, dt = resolve_steps(chain.total_time, cfg.dt)
    trajectory: list[tuple[float, np.ndarray]] = []
    for step in range(n_steps + 1):
        t = step * dt
        record = (step % cfg.record_every == 0) or step == n_steps
        if record:
            if not np.all(np.isfinite(y.view(float))):
                raise NonFiniteValue(f"non-finite state at t={t:.6f}")
            drift = abs(np.linalg.norm(y) - 1.0)
            if drift > NORM_DRIFT_RATE * max(1.0, t):
                raise InvariantViolation(
                    f"norm drift {drift:.3e} exceeds allowance at t={t:.6f}")
            trajectory.append((t, y.copy()))
            if observer is not None:
                observer(t, y.copy())
        if step < n_steps:
            y = _rk4_step(rhs, t, y, dt)
    return trajectory
