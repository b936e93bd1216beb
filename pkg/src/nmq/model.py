"""Time-cut XY ring model.

H(t) = sum_bonds J_{i,i+1} (sx_i sx_{i+1} + sy_i sy_{i+1}) on a periodic
ring of N sites with uniform coupling J, except that one bond carries the
schedule J cos(Omega t) with Omega = pi / (2 S).  At t=0 the ring is
closed, at t=S the cut bond has been switched off and an open chain
remains.  The protocol starts in the ring's single-excitation ground
state and targets the open chain's single-excitation ground state.

Each xy bond acts on the excitation basis as a hop of amplitude 2 J, so
every operator here conserves excitation number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import hilbert
from .control import GAP_FLOOR, ControlSpec, pulse_value
from .errors import ConfigInvalid, GapCollapse, TimeOutOfRange

# Relative slack on the [0, S] window so that integrator stage times
# landing on S + (few ulp) are not rejected.
_TIME_SLACK = 1e-9


@dataclass(frozen=True)
class ChainSpec:
    """Ring geometry and cutting schedule.

    cut_bond = j means the bond between sites j and j+1 (site N+1 is
    site 1) is the one being switched off; None picks the (N, 1) bond so
    the surviving open chain keeps natural site order.
    """

    n_sites: int
    total_time: float
    coupling: float = -1.0
    cut_bond: int | None = None

    def __post_init__(self):
        if self.n_sites < 3:
            raise ConfigInvalid(
                f"need at least 3 sites for an unambiguous ring, got {self.n_sites}")
        if not self.total_time > 0:
            raise ConfigInvalid(f"total_time must be positive, got {self.total_time}")
        if self.cut_bond is None:
            object.__setattr__(self, "cut_bond", self.n_sites)
        if not 1 <= self.cut_bond <= self.n_sites:
            raise ConfigInvalid(
                f"cut_bond {self.cut_bond} outside 1..{self.n_sites}")

    @property
    def omega(self) -> float:
        """Cut schedule frequency; omega * total_time = pi/2 exactly."""
        return 0.5 * math.pi / self.total_time


def _check_time(spec: ChainSpec, t: float) -> None:
    slack = _TIME_SLACK * max(1.0, spec.total_time)
    if not -slack <= t <= spec.total_time + slack:
        raise TimeOutOfRange(
            f"t={t!r} outside protocol window [0, {spec.total_time!r}]")


@lru_cache(maxsize=None)
def _bond_matrices(chain: ChainSpec, space: hilbert.HilbertSpec):
    """(static part, cut-bond operator), both already multiplied by J.

    The xy bond (sx sx + sy sy) swaps an adjacent up/down pair with
    amplitude 2, acting on basis integers directly so the same code
    serves Full and Sector spaces.
    """
    if space.n_sites != chain.n_sites:
        raise ConfigInvalid("chain and space disagree on n_sites")

    def bond(i: int) -> np.ndarray:
        j = i % chain.n_sites + 1
        bit_i, bit_j = 1 << (i - 1), 1 << (j - 1)

        def act(bits: int):
            occ_i, occ_j = bool(bits & bit_i), bool(bits & bit_j)
            if occ_i != occ_j:
                yield bits ^ bit_i ^ bit_j, 2.0
        return hilbert.operator_from_action(space, act)

    static = np.zeros((space.dim, space.dim), dtype=complex)
    for i in range(1, chain.n_sites + 1):
        if i != chain.cut_bond:
            static += chain.coupling * bond(i)
    cut = chain.coupling * bond(chain.cut_bond)
    return static, cut


def hamiltonian(chain: ChainSpec, t: float,
                space: hilbert.HilbertSpec | None = None) -> np.ndarray:
    """Chain Hamiltonian at time t in the requested space (sector-1 default)."""
    if space is None:
        space = hilbert.HilbertSpec.sector(chain.n_sites, (1,))
    _check_time(chain, t)
    static, cut = _bond_matrices(chain, space)
    return static + math.cos(chain.omega * t) * cut


def dhamiltonian_dt(chain: ChainSpec, t: float,
                    space: hilbert.HilbertSpec | None = None) -> np.ndarray:
    """Time derivative of the bare Hamiltonian; only the cut bond moves."""
    if space is None:
        space = hilbert.HilbertSpec.sector(chain.n_sites, (1,))
    _check_time(chain, t)
    _, cut = _bond_matrices(chain, space)
    return -chain.omega * math.sin(chain.omega * t) * cut


def energy_gap_E21(chain: ChainSpec, t: float) -> float:
    """Instantaneous E2 - E1 gap of the single-excitation block."""
    sector1 = hilbert.HilbertSpec.sector(chain.n_sites, (1,))
    evals = np.linalg.eigvalsh(hamiltonian(chain, t, sector1))
    gap = float(evals[1] - evals[0])
    if gap <= GAP_FLOOR:
        raise GapCollapse(
            f"E21 gap {gap:.3e} at t={t:.6f} at or below floor {GAP_FLOOR:.0e}")
    return gap


def controlled_hamiltonian(chain: ChainSpec, ctrl: ControlSpec, t: float,
                           space: hilbert.HilbertSpec | None = None) -> np.ndarray:
    """(1 + c(t)) H(t); the pulse multiplies the whole chain Hamiltonian."""
    h = hamiltonian(chain, t, space)
    if ctrl.kind == "none":
        return h
    gap = energy_gap_E21(chain, t) if ctrl.gap_rescaled else None
    return (1.0 + pulse_value(ctrl, t, gap)) * h


def _gap_derivative(chain: ChainSpec, t: float, h: float = 1e-6) -> float:
    # centered difference, one-sided at the window edges
    lo, hi = max(0.0, t - h), min(chain.total_time, t + h)
    if hi <= lo:
        return 0.0
    return (energy_gap_E21(chain, hi) - energy_gap_E21(chain, lo)) / (hi - lo)


def pulse_derivative(chain: ChainSpec, ctrl: ControlSpec, t: float) -> float:
    """d c / d t, differentiating the gap factor numerically when present."""
    if ctrl.kind == "none":
        return 0.0
    w = ctrl.omega
    base = ctrl.intensity * (ctrl.b + ctrl.a * math.sin(w * t))
    dbase = ctrl.intensity * ctrl.a * w * math.cos(w * t)
    if not ctrl.gap_rescaled:
        return dbase
    gap = energy_gap_E21(chain, t)
    return dbase / gap - base * _gap_derivative(chain, t) / gap**2


def dcontrolled_hamiltonian_dt(chain: ChainSpec, ctrl: ControlSpec, t: float,
                               space: hilbert.HilbertSpec | None = None) -> np.ndarray:
    """Time derivative of the active Hamiltonian including the drive."""
    dh = dhamiltonian_dt(chain, t, space)
    if ctrl.kind == "none":
        return dh
    gap = energy_gap_E21(chain, t) if ctrl.gap_rescaled else None
    c = pulse_value(ctrl, t, gap)
    cdot = pulse_derivative(chain, ctrl, t)
    return cdot * hamiltonian(chain, t, space) + (1.0 + c) * dh


def initial_state(chain: ChainSpec,
                  space: hilbert.HilbertSpec | None = None) -> np.ndarray:
    """Ring ground state: the uniform single-excitation superposition."""
    sector1 = hilbert.HilbertSpec.sector(chain.n_sites, (1,))
    vec = np.full(chain.n_sites, 1.0 / math.sqrt(chain.n_sites), dtype=complex)
    if space is None or space == sector1:
        return vec
    return hilbert.embed_state(vec, sector1, space)


def target_state(chain: ChainSpec,
                 space: hilbert.HilbertSpec | None = None) -> np.ndarray:
    """Open-chain ground state at t = S within the single-excitation block."""
    sector1 = hilbert.HilbertSpec.sector(chain.n_sites, (1,))
    _, evecs = hilbert.hermitian_eigensystem(
        hamiltonian(chain, chain.total_time, sector1))
    vec = evecs[:, 0]
    if space is None or space == sector1:
        return vec
    return hilbert.embed_state(vec, sector1, space)
