"""Thermodynamic bookkeeping along a trajectory.

Sign conventions: heat_current J_Q = Re tr(drho/dt H) is positive when
energy flows from the baths into the chain; power P = tr(rho dH/dt) is
positive when the drive pumps energy in.  The energy current obeys the
balance d<H>/dt = J_Q + P exactly in continuous time; a centered
finite-difference estimate over the recorded samples must agree with the
analytic sum within balance_tol = 10 * spacing^2 * max||H||^2.

Under pulse control every quantity refers to the active Hamiltonian
(1 + c(t)) H(t) by default; pass use_control_hamiltonian=False to the
sampler to account against the bare H(t) instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hilbert, model
from .control import ControlSpec
from .errors import DimMismatch, NegativeExpectation, NumericFailure

IM_TOL = 1e-10  # relative imaginary-part tolerance on real observables


@dataclass
class ThermoRecord:
    """Observables at one recorded sample."""

    t: float
    heat_current: float
    energy_current: float
    power: float
    fidelity: float
    trace_error: float
    min_eig: float | None = None
    energy: float = 0.0
    h_norm: float = 0.0


def _real_trace(a: np.ndarray, b: np.ndarray, what: str) -> float:
    val = hilbert.expectation(a, b)
    scale = max(1.0, float(np.linalg.norm(a)) * float(np.linalg.norm(b)))
    if abs(val.imag) > IM_TOL * scale:
        raise NumericFailure(
            f"{what} has imaginary part {val.imag:.3e} beyond roundoff scale")
    return float(val.real)


def heat_current(drho: np.ndarray, h: np.ndarray) -> float:
    """Re tr(drho/dt H) evaluated from the exact equation-of-motion rhs."""
    return _real_trace(drho, h, "heat current")


def _space_for(rho: np.ndarray, chain: model.ChainSpec) -> hilbert.HilbertSpec:
    d = rho.shape[0]
    n = chain.n_sites
    for space in (hilbert.HilbertSpec.sector(n, (1,)),
                  hilbert.HilbertSpec.sector(n, (0, 1)),
                  hilbert.HilbertSpec.full(n)):
        if space.dim == d:
            return space
    raise DimMismatch(f"no canonical space of dimension {d} for {n} sites")


def power(rho: np.ndarray, chain: model.ChainSpec, ctrl: ControlSpec,
          t: float, space: hilbert.HilbertSpec | None = None,
          use_control_hamiltonian: bool = True) -> float:
    """tr(rho dH_active/dt); the drive term enters through the pulse."""
    if space is None:
        space = _space_for(rho, chain)
    if use_control_hamiltonian:
        dh = model.dcontrolled_hamiltonian_dt(chain, ctrl, t, space)
    else:
        dh = model.dhamiltonian_dt(chain, t, space)
    return _real_trace(rho, dh, "power")


def energy_current(heat: float, pwr: float) -> float:
    """Analytic energy current d<H>/dt = J_Q + P."""
    return heat + pwr


def energy_current_fd(prev: tuple[float, float], nxt: tuple[float, float]) -> float:
    """Centered finite-difference energy current from two (t, <H>) samples."""
    (t0, e0), (t1, e1) = prev, nxt
    if t1 == t0:
        raise DimMismatch("finite difference needs distinct sample times")
    return (e1 - e0) / (t1 - t0)


def fidelity(rho: np.ndarray, target: np.ndarray) -> float:
    """sqrt(<target| rho |target>) for a pure target state."""
    target = np.asarray(target)
    if rho.shape != (target.size, target.size):
        raise DimMismatch(
            f"density matrix {rho.shape} incompatible with target ({target.size},)")
    val = complex(target.conj() @ rho @ target)
    if abs(val.imag) > 1e-10 * max(1.0, abs(val)):
        raise NumericFailure(f"fidelity overlap has imaginary part {val.imag:.3e}")
    overlap = val.real
    if overlap < -1e-9:
        raise NegativeExpectation(f"<target|rho|target> = {overlap:.3e} < -1e-9")
    return float(np.sqrt(min(max(overlap, 0.0), 1.0)))


def accumulate(records: list[ThermoRecord]) -> dict[str, np.ndarray]:
    """Trapezoid-cumulated work and heat along the recorded samples."""
    t = np.array([r.t for r in records])
    p = np.array([r.power for r in records])
    q = np.array([r.heat_current for r in records])
    if len(records) < 2:
        zero = np.zeros(len(records))
        return {"t": t, "work": zero.copy(), "heat": zero.copy()}
    dt = np.diff(t)
    work = np.concatenate(([0.0], np.cumsum(0.5 * (p[1:] + p[:-1]) * dt)))
    heat = np.concatenate(([0.0], np.cumsum(0.5 * (q[1:] + q[:-1]) * dt)))
    return {"t": t, "work": work, "heat": heat}


def first_law_report(records: list[ThermoRecord]) -> dict[str, float | bool]:
    """Check d<H>/dt (finite difference) against J_Q + P at interior samples.

    balance_tol scales with the sample spacing squared and the squared
    Frobenius norm of the active Hamiltonian seen along the run.  The
    Frobenius norm (not the spectral norm) is required so that the bound
    also covers the finite-difference truncation error under strong fast
    pulses, where d^3<H>/dt^3 is dominated by the drive frequency.
    """
    if len(records) < 3:
        return {"max_residual": 0.0, "tol": float("inf"), "ok": True}
    t = np.array([r.t for r in records])
    e = np.array([r.energy for r in records])
    analytic = np.array([r.energy_current for r in records])
    fd = (e[2:] - e[:-2]) / (t[2:] - t[:-2])
    residual = float(np.max(np.abs(fd - analytic[1:-1])))
    spacing = float(np.max(np.diff(t)))
    h_norm = max(r.h_norm for r in records)
    tol = 10.0 * spacing**2 * h_norm**2
    return {"max_residual": residual, "tol": tol, "ok": residual < tol}


class ThermoSampler:
    """Observer that turns engine samples into ThermoRecords.

    Use on_nonmarkov / on_lindblad as the engine callback; records pile up
    in .records and must not be mutated by other observers.
    """

    def __init__(self, chain: model.ChainSpec, ctrl: ControlSpec,
                 space: hilbert.HilbertSpec, target: np.ndarray | None = None,
                 diagnostics: bool = True, use_control_hamiltonian: bool = True):
        self.chain = chain
        self.ctrl = ctrl
        self.space = space
        self.target = model.target_state(chain, space) if target is None else target
        self.diagnostics = diagnostics
        self.use_control = use_control_hamiltonian
        self.records: list[ThermoRecord] = []

    def _accounting_h(self, t: float) -> np.ndarray:
        if self.use_control:
            return model.controlled_hamiltonian(self.chain, self.ctrl, t, self.space)
        return model.hamiltonian(self.chain, t, self.space)

    def sample(self, t: float, rho: np.ndarray, drho: np.ndarray) -> None:
        h = self._accounting_h(t)
        jq = heat_current(drho, h)
        p = power(rho, self.chain, self.ctrl, t, self.space,
                  use_control_hamiltonian=self.use_control)
        rec = ThermoRecord(
            t=t,
            heat_current=jq,
            energy_current=energy_current(jq, p),
            power=p,
            fidelity=fidelity(rho, self.target),
            trace_error=float(abs(np.trace(rho) - 1.0)),
            energy=_real_trace(rho, h, "energy"),
            h_norm=float(np.linalg.norm(h)),
        )
        if self.diagnostics:
            rec.min_eig = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
        self.records.append(rec)

    def on_nonmarkov(self, state, drho: np.ndarray) -> None:
        self.sample(state.t, state.rho, drho)

    def on_lindblad(self, t: float, rho: np.ndarray, drho: np.ndarray) -> None:
        self.sample(t, rho, drho)

    def on_closed(self, t: float, psi: np.ndarray) -> None:
        rho = np.outer(psi, psi.conj())
        h = model.controlled_hamiltonian(self.chain, self.ctrl, t, self.space)
        self.sample(t, rho, -1j * (h @ rho - rho @ h))
