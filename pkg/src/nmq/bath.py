"""Independent bosonic baths with exponential memory, one per site.

Each site couples through L_j (sigma_minus or sigma_z) to its own
Lorentz-Drude bath taken in the high-temperature regime, where the bath
correlation functions become single exponentials with decay gamma_j.
The open-system dynamics then closes over one pair of auxiliary memory
operators per site:

    d oz_j/dt = weight_z L_j   - gamma_j oz_j - [frame, oz_j]
    d ow_j/dt = weight_w L_j^+ - gamma_j ow_j - [frame, ow_j]
    frame     = i H + sum_k (L_k^+ oz_k + L_k ow_k)

with weight_z = Gamma T gamma / 2 - i Gamma gamma^2 / 2 and
weight_w = Gamma T gamma / 2.  Memory operators start at zero.  In the
white-noise limit (gamma -> inf) the same couplings reduce to the double
Lindblad dissipator at rate Gamma T / 2 implemented by lindblad_rhs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigInvalid, DimMismatch

CHANNEL_SIGMA_MINUS = "sigma_minus"
CHANNEL_SIGMA_Z = "sigma_z"
CHANNELS = (CHANNEL_SIGMA_MINUS, CHANNEL_SIGMA_Z)


@dataclass(frozen=True)
class BathSpec:
    """Per-site bath parameters: coupling Gamma, memory frequency gamma,
    temperature, and the shared coupling channel."""

    Gamma: tuple[float, ...]
    gamma: tuple[float, ...]
    temperature: tuple[float, ...]
    channel: str = CHANNEL_SIGMA_MINUS

    def __post_init__(self):
        object.__setattr__(self, "Gamma", tuple(float(g) for g in self.Gamma))
        object.__setattr__(self, "gamma", tuple(float(g) for g in self.gamma))
        object.__setattr__(
            self, "temperature", tuple(float(t) for t in self.temperature))
        n = len(self.Gamma)
        if n == 0 or len(self.gamma) != n or len(self.temperature) != n:
            raise ConfigInvalid("Gamma, gamma, temperature must have equal nonzero length")
        if self.channel not in CHANNELS:
            raise ConfigInvalid(f"unknown channel {self.channel!r}")
        if any(g < 0 for g in self.Gamma):
            raise ConfigInvalid("Gamma must be >= 0")
        if any(g <= 0 for g in self.gamma):
            raise ConfigInvalid("gamma must be > 0")
        if any(t < 0 for t in self.temperature):
            raise ConfigInvalid("temperature must be >= 0")

    @classmethod
    def uniform(cls, n_sites: int, Gamma: float, gamma: float,
                temperature: float, channel: str = CHANNEL_SIGMA_MINUS) -> "BathSpec":
        return cls((Gamma,) * n_sites, (gamma,) * n_sites,
                   (temperature,) * n_sites, channel)

    @property
    def n_sites(self) -> int:
        return len(self.Gamma)


def spectral_density(omega: float, Gamma: float, gamma: float) -> float:
    """Lorentz-Drude density J(w) = (Gamma/pi) w / (1 + (w/gamma)^2)."""
    from .errors import NumericFailure

    if omega < 0:
        raise NumericFailure(f"spectral density needs omega >= 0, got {omega}")
    return (Gamma / math.pi) * omega / (1.0 + (omega / gamma) ** 2)


@dataclass(frozen=True)
class CorrelationParams:
    """Exponential correlation weights for one site's bath."""

    weight_z: complex
    weight_w: float
    decay: float


def correlation_params(spec: BathSpec, site: int) -> CorrelationParams:
    """Closure weights for site j (1-based); Re weight_z == weight_w."""
    if not 1 <= site <= spec.n_sites:
        raise DimMismatch(f"site {site} outside 1..{spec.n_sites}")
    G = spec.Gamma[site - 1]
    g = spec.gamma[site - 1]
    T = spec.temperature[site - 1]
    wz = 0.5 * G * T * g - 0.5j * G * g * g
    return CorrelationParams(weight_z=wz, weight_w=wz.real, decay=g)


def _weights(spec: BathSpec):
    G = np.array(spec.Gamma)
    g = np.array(spec.gamma)
    T = np.array(spec.temperature)
    wz = 0.5 * G * T * g - 0.5j * G * g * g
    return wz.astype(complex), (0.5 * G * T * g).astype(float), g.astype(float)


def coupling_frame(h_active: np.ndarray, ls: np.ndarray,
                   oz: np.ndarray, ow: np.ndarray) -> np.ndarray:
    """i H + sum_k (L_k^+ oz_k + L_k ow_k), the common commutator frame."""
    ldag = ls.conj().transpose(0, 2, 1)
    return 1j * h_active + np.sum(ldag @ oz, axis=0) + np.sum(ls @ ow, axis=0)


def o_operator_rhs(h_active: np.ndarray, ls: Sequence[np.ndarray],
                   oz: Sequence[np.ndarray], ow: Sequence[np.ndarray],
                   spec: BathSpec, site: int):
    """Time derivative of the memory-operator pair for one site."""
    ls = np.asarray(ls, dtype=complex)
    oz = np.asarray(oz, dtype=complex)
    ow = np.asarray(ow, dtype=complex)
    if not (ls.shape == oz.shape == ow.shape) or ls.shape[0] != spec.n_sites:
        raise DimMismatch("ls/oz/ow must be N stacked equally-shaped operators")
    params = correlation_params(spec, site)
    frame = coupling_frame(h_active, ls, oz, ow)
    lj = ls[site - 1]
    oz_j = oz[site - 1]
    ow_j = ow[site - 1]
    doz = params.weight_z * lj - params.decay * oz_j - (frame @ oz_j - oz_j @ frame)
    dow = (params.weight_w * lj.conj().T - params.decay * ow_j
           - (frame @ ow_j - ow_j @ frame))
    return doz, dow


def o_rhs_stacked(h_active: np.ndarray, ls: np.ndarray, ldag: np.ndarray,
                  oz: np.ndarray, ow: np.ndarray,
                  wz: np.ndarray, ww: np.ndarray, decay: np.ndarray):
    """Vectorized o_operator_rhs over all sites; used by the integrator."""
    frame = 1j * h_active + np.sum(ldag @ oz, axis=0) + np.sum(ls @ ow, axis=0)
    doz = (wz[:, None, None] * ls - decay[:, None, None] * oz
           - (frame @ oz - oz @ frame))
    dow = (ww[:, None, None] * ldag - decay[:, None, None] * ow
           - (frame @ ow - ow @ frame))
    return doz, dow


def dissipator_rhs(rho: np.ndarray, ls: np.ndarray, ldag: np.ndarray,
                   oz: np.ndarray, ow: np.ndarray) -> np.ndarray:
    """Memory-operator dissipator entering the master equation:

    sum_j [L_j, rho oz_j^+] - [L_j^+, oz_j rho]
        + [L_j^+, rho ow_j^+] - [L_j, ow_j rho]
    """
    ozd = oz.conj().transpose(0, 2, 1)
    owd = ow.conj().transpose(0, 2, 1)
    a = rho @ ozd
    b = oz @ rho
    c = rho @ owd
    d = ow @ rho
    term = (ls @ a - a @ ls) - (ldag @ b - b @ ldag)
    term += (ldag @ c - c @ ldag) - (ls @ d - d @ ls)
    return np.sum(term, axis=0)


def lindblad_rhs(rho: np.ndarray, h: np.ndarray,
                 ls: Sequence[np.ndarray], spec: BathSpec) -> np.ndarray:
    """White-noise limit: -i[H, rho] plus symmetric double dissipators.

    Each site contributes (Gamma T / 2) [ (2 L rho L^+ - {L^+L, rho})
    + (2 L^+ rho L - {L L^+, rho}) ].
    """
    ls = np.asarray(ls, dtype=complex)
    if ls.shape[0] != spec.n_sites:
        raise DimMismatch(f"expected {spec.n_sites} coupling operators")
    ldag = ls.conj().transpose(0, 2, 1)
    rates = 0.5 * np.array(spec.Gamma) * np.array(spec.temperature)

    ldl = ldag @ ls
    lld = ls @ ldag
    terms = (2.0 * (ls @ rho @ ldag) - ldl @ rho - rho @ ldl
             + 2.0 * (ldag @ rho @ ls) - lld @ rho - rho @ lld)
    out = -1j * (h @ rho - rho @ h)
    out += np.sum(rates[:, None, None] * terms, axis=0)
    return out
