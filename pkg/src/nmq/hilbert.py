"""Spin-1/2 chain Hilbert spaces with excitation-number sector bookkeeping.

Conventions, fixed once for the whole package:

* Sites are numbered 1..N.  Site j is stored in bit (j-1) of a basis
  integer, so site 1 is the least significant bit.  A set bit means spin
  up; the excitation number of a basis state is its popcount.
* A space is either Full (all 2^N states) or Sector (the union of the
  listed excitation sectors).  The basis is ordered by ascending sector,
  and inside a sector by ascending integer encoding.  For the
  single-excitation sector this puts |site 1 up>, |site 2 up>, ... in
  natural site order.
* Operators are dense complex ndarrays in that basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from .errors import DimMismatch, NotHermitian, SectorViolation

SIGMA_X = "sigma_x"
SIGMA_Y = "sigma_y"
SIGMA_Z = "sigma_z"
SIGMA_PLUS = "sigma_plus"
SIGMA_MINUS = "sigma_minus"

OPERATOR_KINDS = (SIGMA_X, SIGMA_Y, SIGMA_Z, SIGMA_PLUS, SIGMA_MINUS)


@dataclass(frozen=True)
class HilbertSpec:
    """A Full or sector-restricted chain space.

    ``sectors`` is None for the full 2^N space, otherwise a sorted tuple
    of excitation numbers to keep.
    """

    n_sites: int
    sectors: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n_sites < 1:
            raise DimMismatch(f"n_sites must be >= 1, got {self.n_sites}")
        if self.sectors is not None:
            ks = tuple(sorted(set(self.sectors)))
            if not ks:
                raise DimMismatch("sector list must not be empty")
            if ks[0] < 0 or ks[-1] > self.n_sites:
                raise SectorViolation(
                    f"sectors {ks} outside 0..{self.n_sites}")
            object.__setattr__(self, "sectors", ks)

    @classmethod
    def full(cls, n_sites: int) -> "HilbertSpec":
        return cls(n_sites, None)

    @classmethod
    def sector(cls, n_sites: int, ks: Iterable[int]) -> "HilbertSpec":
        return cls(n_sites, tuple(ks))

    @property
    def is_full(self) -> bool:
        return self.sectors is None

    @property
    def dim(self) -> int:
        return len(basis_states(self))

    def includes_sector(self, k: int) -> bool:
        return self.is_full or k in self.sectors


@lru_cache(maxsize=None)
def _basis(n_sites: int, sectors: tuple[int, ...] | None) -> tuple[int, ...]:
    if sectors is None:
        wanted = set(range(n_sites + 1))
    else:
        wanted = set(sectors)
    states = [b for b in range(1 << n_sites) if bin(b).count("1") in wanted]
    states.sort(key=lambda b: (bin(b).count("1"), b))
    return tuple(states)


def basis_states(spec: HilbertSpec) -> tuple[int, ...]:
    """Basis integers in the fixed (sector-ascending, then integer) order."""
    return _basis(spec.n_sites, spec.sectors)


@lru_cache(maxsize=None)
def _index_map(n_sites: int, sectors: tuple[int, ...] | None) -> dict:
    return {b: i for i, b in enumerate(_basis(n_sites, sectors))}


def state_index(spec: HilbertSpec, bits: int) -> int:
    """Position of the basis integer ``bits`` inside the spec's basis."""
    return _index_map(spec.n_sites, spec.sectors)[bits]


def operator_from_action(
    spec: HilbertSpec,
    action: Callable[[int], Iterable[tuple[int, complex]]],
) -> np.ndarray:
    """Build a dense operator from its action on basis integers.

    ``action(bits)`` yields (target_bits, amplitude) pairs.  A nonzero
    amplitude leaving the space raises SectorViolation: sector-restricted
    calculus is only exact when nothing couples outside.
    """
    idx = _index_map(spec.n_sites, spec.sectors)
    basis = basis_states(spec)
    mat = np.zeros((len(basis), len(basis)), dtype=complex)
    for col, bits in enumerate(basis):
        for target, amp in action(bits):
            if amp == 0:
                continue
            row = idx.get(target)
            if row is None:
                raise SectorViolation(
                    f"action maps state {bits:0{spec.n_sites}b} to "
                    f"{target:0{spec.n_sites}b} outside sectors {spec.sectors}")
            mat[row, col] += amp
    return mat


def site_operator(kind: str, site: int, spec: HilbertSpec) -> np.ndarray:
    """Single-site Pauli/ladder operator embedded in the chosen space.

    sigma_z is always representable; ladder and xy operators must map
    every included sector into an included sector.
    """
    if kind not in OPERATOR_KINDS:
        raise DimMismatch(f"unknown operator kind {kind!r}")
    if not 1 <= site <= spec.n_sites:
        raise DimMismatch(
            f"site {site} outside 1..{spec.n_sites}")
    bit = 1 << (site - 1)

    def act(bits: int):
        up = bool(bits & bit)
        if kind == SIGMA_Z:
            yield bits, 1.0 if up else -1.0
        elif kind == SIGMA_PLUS:
            if not up:
                yield bits | bit, 1.0
        elif kind == SIGMA_MINUS:
            if up:
                yield bits & ~bit, 1.0
        elif kind == SIGMA_X:
            yield bits ^ bit, 1.0
        elif kind == SIGMA_Y:
            # sigma_y |down> = -i |up>,  sigma_y |up> = +i |down>
            yield bits ^ bit, (1j if up else -1j)

    return operator_from_action(spec, act)


def basis_positions(sub: HilbertSpec, sup: HilbertSpec) -> np.ndarray:
    """Positions of sub's basis states inside sup's basis."""
    if sub.n_sites != sup.n_sites:
        raise DimMismatch("spaces must share n_sites")
    idx = _index_map(sup.n_sites, sup.sectors)
    try:
        return np.array([idx[b] for b in basis_states(sub)], dtype=int)
    except KeyError as exc:
        raise SectorViolation(
            f"sub-space state {exc.args[0]} missing from target space") from exc


def embed_state(vec: np.ndarray, sub: HilbertSpec, sup: HilbertSpec) -> np.ndarray:
    """Pad a state vector of ``sub`` with zeros into ``sup``."""
    vec = np.asarray(vec)
    if vec.shape != (sub.dim,):
        raise DimMismatch(f"state has shape {vec.shape}, expected ({sub.dim},)")
    out = np.zeros(sup.dim, dtype=complex)
    out[basis_positions(sub, sup)] = vec
    return out


def embed_operator(op: np.ndarray, sub: HilbertSpec, sup: HilbertSpec) -> np.ndarray:
    """Embed an operator of ``sub`` into ``sup`` (zero outside the block)."""
    op = np.asarray(op)
    if op.shape != (sub.dim, sub.dim):
        raise DimMismatch(f"operator shape {op.shape} != ({sub.dim}, {sub.dim})")
    pos = basis_positions(sub, sup)
    out = np.zeros((sup.dim, sup.dim), dtype=complex)
    out[np.ix_(pos, pos)] = op
    return out


def restrict_operator(op: np.ndarray, sup: HilbertSpec, sub: HilbertSpec) -> np.ndarray:
    """Cut the ``sub`` block out of an operator living on ``sup``."""
    op = np.asarray(op)
    if op.shape != (sup.dim, sup.dim):
        raise DimMismatch(f"operator shape {op.shape} != ({sup.dim}, {sup.dim})")
    pos = basis_positions(sub, sup)
    return op[np.ix_(pos, pos)]


def sector_of_index(spec: HilbertSpec, i: int) -> int:
    """Excitation number of the i-th basis state."""
    return bin(basis_states(spec)[i]).count("1")


def expectation(rho: np.ndarray, obs: np.ndarray) -> complex:
    """trace(rho @ obs) without forming the product matrix."""
    rho = np.asarray(rho)
    obs = np.asarray(obs)
    if rho.shape != obs.shape or rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimMismatch(f"incompatible shapes {rho.shape} and {obs.shape}")
    return complex(np.einsum("ij,ji->", rho, obs))


def hermitian_eigensystem(h: np.ndarray, tol: float = 1e-10):
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian h.

    Each eigenvector is rephased so its largest-magnitude component
    (first such index on ties) is real and positive, which makes the
    output deterministic for non-degenerate spectra.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise DimMismatch(f"expected square matrix, got {h.shape}")
    if np.max(np.abs(h - h.conj().T)) >= tol:
        raise NotHermitian(
            f"matrix deviates from Hermiticity by {np.max(np.abs(h - h.conj().T)):.3e}")
    evals, evecs = np.linalg.eigh(h)
    for i in range(evecs.shape[1]):
        col = evecs[:, i]
        pivot = int(np.argmax(np.abs(col)))
        phase = col[pivot] / abs(col[pivot])
        evecs[:, i] = col / phase
    return evals, evecs
