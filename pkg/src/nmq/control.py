"""Zero-area sine-pulse control: Bessel evaluation, zeros, and validity.

A control pulse multiplies the chain Hamiltonian as H -> (1 + c(t)) H with
c(t) = I_eff (b + a sin(w t)), w = pi/tau and tau half the pulse period.
The pulse leaves the adiabatic dynamics unchanged when the phase integral
of c over one full period vanishes, which for integer n = I b / w reduces
to J_n(I a / w) = 0.  This module provides the Bessel machinery, the
quadrature cross-check of that condition, and a pulse designer that picks
the intensity from a Bessel zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigInvalid,
    DimMismatch,
    GapCollapse,
    NonIntegerN,
    OutOfValidatedRange,
)

# accuracy of bessel_j is only guaranteed inside this box
MAX_ORDER = 20
MAX_ARGUMENT = 50.0

ZERO_TOL = 1e-8          # strict |J_n(z)| threshold for a valid pulse
PAPER_COMPAT_TOL = 5e-4  # loose threshold for 4-digit rounded intensities
GAP_FLOOR = 1e-6         # minimum usable E2-E1 gap

PULSE_NONE = "none"
PULSE_SINE = "sine_pulse"


@dataclass(frozen=True)
class ControlSpec:
    """Pulse parameters.  kind 'none' means free (uncontrolled) evolution.

    With gap_rescaled the drive amplitude is divided by the instantaneous
    E2-E1 gap of the single-excitation chain block.
    """

    kind: str = PULSE_NONE
    intensity: float = 0.0
    a: float = 1.0
    b: float = 0.0
    half_period: float = 0.0
    gap_rescaled: bool = False

    def __post_init__(self):
        if self.kind not in (PULSE_NONE, PULSE_SINE):
            raise ConfigInvalid(f"unknown control kind {self.kind!r}")
        if self.kind == PULSE_SINE and not self.half_period > 0:
            raise ConfigInvalid("sine pulse needs half_period > 0")

    @property
    def omega(self) -> float:
        """Pulse angular frequency; omega * half_period = pi by construction."""
        if self.kind == PULSE_NONE:
            raise ConfigInvalid("free evolution has no pulse frequency")
        return math.pi / self.half_period


NO_CONTROL = ControlSpec()


def pulse_value(ctrl: ControlSpec, t: float, gap: float | None = None) -> float:
    """Instantaneous drive c(t); pass the current gap when gap_rescaled."""
    if ctrl.kind == PULSE_NONE:
        return 0.0
    base = ctrl.intensity * (ctrl.b + ctrl.a * math.sin(ctrl.omega * t))
    if not ctrl.gap_rescaled:
        return base
    if gap is None:
        raise DimMismatch("gap_rescaled pulse evaluated without a gap value")
    if not gap > GAP_FLOOR:
        raise GapCollapse(f"gap {gap:.3e} at t={t:.6f} below floor {GAP_FLOOR:.0e}")
    return base / gap


def bessel_j(n: int, x: float) -> float:
    """Bessel function of the first kind, J_n(x).

    Power series below x=12, else Miller's backward recurrence normalized
    with J_0 + 2*sum J_2k = 1.  Absolute error < 1e-10 on the validated
    box n <= 20, 0 <= x <= 50.
    """
    if n != int(n) or n < 0:
        raise OutOfValidatedRange(f"order must be a non-negative integer, got {n}")
    n = int(n)
    if not np.isfinite(x) or x < 0:
        raise OutOfValidatedRange(f"argument must be finite and >= 0, got {x}")
    if n > MAX_ORDER or x > MAX_ARGUMENT:
        raise OutOfValidatedRange(
            f"(n={n}, x={x}) outside validated box n<={MAX_ORDER}, x<={MAX_ARGUMENT}")
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x <= 12.0:
        return _series_jn(n, x)
    return _miller_jn(n, x)


def _series_jn(n: int, x: float) -> float:
    half = 0.5 * x
    term = half**n / math.factorial(n)
    total = term
    for m in range(1, 200):
        term *= -(half * half) / (m * (n + m))
        total += term
        if abs(term) < 1e-18 * max(abs(total), 1e-30):
            break
    return total


def _miller_jn(n: int, x: float) -> float:
    # start high enough that the downward recurrence has converged at n
    top = max(n, int(x)) + 1 + int(math.ceil(math.sqrt(40.0 * max(n, x))))
    if top % 2:
        top += 1
    jp = 0.0          # J_{k+1} proxy
    jc = 1e-30        # J_k proxy
    norm = 0.0
    result = 0.0
    for k in range(top, 0, -1):
        jm = (2.0 * k / x) * jc - jp
        jp, jc = jc, jm
        if abs(jc) > 1e10:  # rescale to dodge overflow
            jc *= 1e-10
            jp *= 1e-10
            norm *= 1e-10
            result *= 1e-10
        if k - 1 == n:
            result = jc
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * jc
    norm += jc  # jc now proxies J_0
    return result / norm


def _bessel_prime(n: int, x: float) -> float:
    if n == 0:
        return -bessel_j(1, x)
    return 0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x))


def bessel_zero(n: int, k: int) -> float:
    """k-th positive root of J_n, found by bracketing plus Newton polish."""
    if k < 1:
        raise OutOfValidatedRange(f"zero index must be >= 1, got {k}")
    lo = max(float(n), 1.0)
    hi = min(float(n) + 20.0 * k, MAX_ARGUMENT)
    xs = np.arange(lo, hi, 0.05)
    prev_x, prev_f = xs[0], bessel_j(n, float(xs[0]))
    found = 0
    for x in xs[1:]:
        f = bessel_j(n, float(x))
        if prev_f == 0.0 or (prev_f < 0) != (f < 0):
            found += 1
            if found == k:
                root = _refine_zero(n, float(prev_x), float(x))
                return root
        prev_x, prev_f = x, f
    raise OutOfValidatedRange(
        f"zero {k} of J_{n} not found below x={hi}")


def _refine_zero(n: int, lo: float, hi: float) -> float:
    flo = bessel_j(n, lo)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        fmid = bessel_j(n, mid)
        if fmid == 0.0:
            lo = hi = mid
            break
        if (flo < 0) != (fmid < 0):
            hi = mid
        else:
            lo, flo = mid, fmid
        if hi - lo < 1e-14:
            break
    root = 0.5 * (lo + hi)
    for _ in range(3):  # Newton polish
        slope = _bessel_prime(n, root)
        if slope == 0.0:
            break
        root -= bessel_j(n, root) / slope
    return root


@dataclass(frozen=True)
class PulseCondition:
    """Classification of a sine pulse against the zero-area condition."""

    n: int
    z: float
    residual: complex
    jn_abs: float
    is_valid: bool


def condition_residual(ctrl: ControlSpec, nodes: int = 8193) -> PulseCondition:
    """Quadrature evaluation of the zero-area condition.

    Integrates exp(i * phase(s)) over one full pulse period and halves it,
    so |residual| equals tau * |J_n(z)| exactly in the continuum limit
    (the half-period integral alone keeps a Struve-function part that does
    not vanish at Bessel zeros).  The inner integral of the sine pulse is
    analytic: phase(s) = I b s + (I a / w)(1 - cos(w s)).

    The classification always refers to the bare design pulse; for
    gap_rescaled controls the rescaling is applied downstream and does not
    change (n, z).
    """
    if ctrl.kind != PULSE_SINE:
        raise ConfigInvalid("condition_residual needs a sine pulse")
    tau = ctrl.half_period
    w = ctrl.omega
    n_float = ctrl.intensity * ctrl.b / w
    n = int(round(n_float))
    if abs(n_float - n) > 1e-9:
        raise NonIntegerN(
            f"I*b/omega = {n_float!r} is not an integer within 1e-9")
    z = ctrl.intensity * ctrl.a / w

    if nodes % 2 == 0:
        nodes += 1
    s = np.linspace(0.0, 2.0 * tau, nodes)
    phase = ctrl.intensity * ctrl.b * s + z * (1.0 - np.cos(w * s))
    residual = 0.5 * _simpson(np.exp(1j * phase), s[1] - s[0])

    jn_abs = abs(bessel_j(abs(n), abs(z)))
    return PulseCondition(
        n=n, z=z, residual=residual, jn_abs=jn_abs, is_valid=jn_abs < ZERO_TOL)


def _simpson(values: np.ndarray, h: float) -> complex:
    acc = values[0] + values[-1] + 4.0 * values[1:-1:2].sum() + 2.0 * values[2:-2:2].sum()
    return complex(acc * h / 3.0)


def design_pulse(n: int, zero_index: int, half_period: float,
                 gap_rescaled: bool = False) -> ControlSpec:
    """Sine pulse whose intensity sits exactly on the k-th zero of J_n.

    With a = 1 the intensity is z_k * w and the offset b = n / z_k, so the
    classification indices come out as (n, z_k) by construction.
    """
    if half_period <= 0:
        raise ConfigInvalid("half_period must be positive")
    w = math.pi / half_period
    z = bessel_zero(n, zero_index)
    intensity = z * w
    b = n / z
    return ControlSpec(
        kind=PULSE_SINE, intensity=intensity, a=1.0, b=b,
        half_period=half_period, gap_rescaled=gap_rescaled)
