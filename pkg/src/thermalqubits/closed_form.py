"""Exact dynamics of two qubits exchanging excitations with one cavity mode.

The resonant interaction conserves the total excitation number, so the
Hamiltonian splits into finite blocks.  Labelling blocks by ``n`` (the block
reached from the doubly excited atoms with ``n`` photons), each one carries
two Rabi frequencies Omega_plus and Omega_minus obtained from

    Lambda_n = sqrt((l1^2 + l2^2)^2 (2n+3)^2 - 4 (l1^2 - l2^2)^2 (n+2)(n+1))
    Omega_{pm}^2 = ((l1^2 + l2^2)(2n+3) pm Lambda_n) / 2

and the evolution of any basis state is a short combination of
cos(Omega t) and sin(Omega t)/Omega terms.  This module evaluates those
combinations directly, with no matrix diagonalization; the numerically
diagonalized reference lives in :mod:`thermalqubits.oracle`.

Two corners need care and get exact treatment rather than generic formulas:

* at indices -1 and -2 the discriminant collapses, Lambda = (l1^2+l2^2)|2n+3|
  exactly, and mu_minus = 0 must not pick up a rounding residue because it
  multiplies terms that would otherwise grow like cosh;
* index -2 is the empty block (both atoms and the field in the ground state),
  where Omega_minus^2 = -(l1^2+l2^2) is negative and every term carrying it
  is dropped: nothing evolves there.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .fock_thermal import PhaseState

__all__ = [
    "ATOM_LABELS",
    "AmplitudeSet",
    "CouplingPair",
    "ManifoldSpectrum",
    "amplitude_table",
    "amplitudes",
    "manifold_spectrum",
    "phase_propagator",
    "propagate_phase_state",
]

# Row order used for the atomic part of every joint vector and matrix.
ATOM_LABELS = ("ee", "eg", "ge", "gg")

# Block index reached from |label, n photons>: ee sits in block n, eg in n-1,
# gg in n-2.
_BLOCK_SHIFT = {"ee": 0, "eg": -1, "gg": -2}

# Photon shift of each arrival state relative to the start, rows ordered as
# ATOM_LABELS.
_ARRIVAL_SHIFTS = {
    "ee": (0, 1, 1, 2),
    "eg": (-1, 0, 0, 1),
    "gg": (-2, -1, -1, 0),
}


@dataclass(frozen=True)
class CouplingPair:
    """Coupling strengths of the two qubits to the mode.

    Atom 1 must couple (lambda1 > 0); atom 2 may decouple entirely
    (lambda2 = 0), which is the gamma = 1 end of the one-parameter family
    lambda1 = 1 + gamma, lambda2 = 1 - gamma built by ``from_gamma``.
    """

    lambda1: float
    lambda2: float

    def __post_init__(self) -> None:
        if not self.lambda1 > 0.0:
            raise ValueError(f"coupling of atom 1 must be positive, got {self.lambda1}")
        if self.lambda2 < 0.0:
            raise ValueError(f"coupling of atom 2 must be nonnegative, got {self.lambda2}")

    @classmethod
    def from_gamma(cls, gamma: float) -> "CouplingPair":
        if not 0.0 <= gamma <= 1.0:
            raise ValueError(f"asymmetry must lie in [0, 1], got {gamma}")
        return cls(1.0 + gamma, 1.0 - gamma)

    @property
    def gamma(self) -> float:
        """Relative asymmetry (lambda1 - lambda2) / (lambda1 + lambda2)."""
        return (self.lambda1 - self.lambda2) / (self.lambda1 + self.lambda2)


@dataclass(frozen=True)
class ManifoldSpectrum:
    """Spectral data of one excitation block.

    Lambda is the discriminant root splitting the two Rabi branches,
    mu_plus and mu_minus its sum and difference partners; the amplitude
    formulas use all of them.  The block eigenvalues are +-Omega_plus and
    +-Omega_minus.  In the empty block (index -2) Omega_minus is imaginary;
    dynamics never uses that branch because every term carrying it has an
    exactly vanishing coefficient there.
    """

    manifold_index: int
    Lambda: float
    mu_plus: float
    mu_minus: float
    Omega_plus: complex
    Omega_minus: complex


def manifold_spectrum(n: int, couplings: CouplingPair) -> ManifoldSpectrum:
    """Rabi frequencies of block ``n``; the lowest block is n = -2."""
    if n < -2:
        raise ValueError(f"block index must be at least -2, got {n}")
    l1, l2 = couplings.lambda1, couplings.lambda2
    s2 = l1 * l1 + l2 * l2
    d2 = l1 * l1 - l2 * l2
    if (n + 1) * (n + 2) == 0:
        # Collapsed discriminant: take it exactly so mu_minus comes out 0.0.
        big_lambda = s2 * abs(2 * n + 3)
    else:
        big_lambda = math.sqrt(
            (s2 * (2 * n + 3)) ** 2 - 4.0 * d2 * d2 * (n + 2) * (n + 1)
        )
    omega_plus_sq = (s2 * (2 * n + 3) + big_lambda) / 2.0
    omega_minus_sq = (s2 * (2 * n + 3) - big_lambda) / 2.0
    if n >= -1:
        # sqrt may land one ulp high when the couplings coincide; the true
        # value is never negative outside the empty block.
        omega_minus_sq = max(omega_minus_sq, 0.0)
    return ManifoldSpectrum(
        manifold_index=n,
        Lambda=big_lambda,
        mu_plus=s2 + big_lambda,
        mu_minus=s2 - big_lambda,
        Omega_plus=cmath.sqrt(omega_plus_sq),
        Omega_minus=cmath.sqrt(omega_minus_sq),
    )


@lru_cache(maxsize=64)
def _spectrum_arrays(couplings: CouplingPair, m_max: int):
    """Block spectra for m = -2 .. m_max as read-only arrays indexed by m + 2."""
    m = np.arange(-2, m_max + 1)
    l1, l2 = couplings.lambda1, couplings.lambda2
    s2 = l1 * l1 + l2 * l2
    d2 = l1 * l1 - l2 * l2
    two_m3 = 2 * m + 3
    gap = np.sqrt((s2 * two_m3) ** 2 - 4.0 * d2 * d2 * (m + 2) * (m + 1))
    gap = np.where((m == -1) | (m == -2), s2 * np.abs(two_m3), gap)
    mu_plus = s2 + gap
    mu_minus = s2 - gap
    omega_plus_sq = (s2 * two_m3 + gap) / 2.0
    omega_minus_sq = (s2 * two_m3 - gap) / 2.0
    omega_minus_sq = np.where(m >= -1, np.maximum(omega_minus_sq, 0.0), omega_minus_sq)
    out = (gap, mu_plus, mu_minus, omega_plus_sq, omega_minus_sq)
    for arr in out:
        arr.setflags(write=False)
    return out


def _sin_ratio(t: float, omega_sq: np.ndarray) -> np.ndarray:
    """sin(t sqrt(omega_sq)) / sqrt(omega_sq), continuous through omega = 0."""
    omega = np.sqrt(omega_sq)
    x = t * omega
    small = np.abs(x) < 1e-4
    x2 = x * x
    series = t * (1.0 - x2 / 6.0 + x2 * x2 / 120.0)
    return np.where(small, series, np.sin(x) / np.where(small, 1.0, omega))


def amplitude_table(
    label: str, n_max: int, t: float, couplings: CouplingPair
) -> np.ndarray:
    """Arrival amplitudes from |label, n> for every n = 0 .. n_max at once.

    Returns a complex array of shape (4, n_max + 1); row q holds the
    amplitude on arrival state ATOM_LABELS[q], whose photon number is
    n + _ARRIVAL_SHIFTS[label][q].  Columns are unit vectors (unitarity)
    and column n equals ``amplitudes(label, n, t, couplings)``.

    Only "ee", "eg" and "gg" starts are provided.  "ge" follows from "eg"
    by swapping the two couplings and the middle rows, and accepting it
    here would silently mean a different qubit than the caller thinks.
    """
    if label == "ge":
        raise ValueError(
            "no amplitudes for a 'ge' start: swap the couplings and use 'eg'"
        )
    if label not in _BLOCK_SHIFT:
        raise ValueError(f"unknown atomic start {label!r}")
    if n_max < 0:
        raise ValueError(f"photon cutoff must be nonnegative, got {n_max}")

    shift = _BLOCK_SHIFT[label]
    n = np.arange(n_max + 1)
    m = n + shift
    gap, mu_p, mu_m, op2, om2 = (
        arr[m + 2] for arr in _spectrum_arrays(couplings, n_max)
    )
    l1, l2 = couplings.lambda1, couplings.lambda2

    empty = m == -2
    om2_safe = np.where(empty, 0.0, om2)
    cos_p = np.cos(t * np.sqrt(op2))
    cos_m = np.where(empty, 0.0, np.cos(t * np.sqrt(om2_safe)))
    g_p = _sin_ratio(t, op2)
    g_m = np.where(empty, 0.0, _sin_ratio(t, om2_safe))

    if label == "ee":
        w1 = -mu_m / (2.0 * gap)
        x1 = w1 * cos_p + (1.0 - w1) * cos_m
        x2 = (
            -1j * l2 * np.sqrt(n + 1) / (2.0 * gap)
            * ((4.0 * l1 * l1 * (n + 2) - mu_m) * g_p
               - (4.0 * l1 * l1 * (n + 2) - mu_p) * g_m)
        )
        x3 = (
            -1j * l1 * np.sqrt(n + 1) / (2.0 * gap)
            * ((4.0 * l2 * l2 * (n + 2) - mu_m) * g_p
               - (4.0 * l2 * l2 * (n + 2) - mu_p) * g_m)
        )
        x4 = 2.0 * l1 * l2 * np.sqrt((n + 1) * (n + 2)) / gap * (cos_p - cos_m)
    elif label == "eg":
        x1 = (
            1j * l2 * np.sqrt(n) / (2.0 * gap)
            * ((mu_m - 4.0 * l1 * l1 * (n + 1)) * g_p
               + (4.0 * l1 * l1 * (n + 1) - mu_p) * g_m)
        )
        w2 = (l1 * l1 - l2 * l2 + gap) / (2.0 * gap)
        x2 = w2 * cos_p + (1.0 - w2) * cos_m
        x3 = l1 * l2 * (2 * n + 1) / gap * (cos_p - cos_m)
        x4 = (
            1j * l1 * np.sqrt(n + 1) / (2.0 * gap)
            * ((mu_m + 4.0 * l2 * l2 * n) * g_m
               - (mu_p + 4.0 * l2 * l2 * n) * g_p)
        )
    else:
        x1 = 2.0 * l1 * l2 * np.sqrt(n * (n - 1)) / gap * (cos_p - cos_m)
        x2 = (
            -1j * l1 * np.sqrt(n) / (2.0 * gap)
            * ((4.0 * l2 * l2 * (n - 1) + mu_p) * g_p
               - (4.0 * l2 * l2 * (n - 1) + mu_m) * g_m)
        )
        x3 = (
            -1j * l2 * np.sqrt(n) / (2.0 * gap)
            * ((4.0 * l1 * l1 * (n - 1) + mu_p) * g_p
               - (4.0 * l1 * l1 * (n - 1) + mu_m) * g_m)
        )
        w4 = mu_p / (2.0 * gap)
        x4 = w4 * cos_p + (1.0 - w4) * cos_m
    return np.stack([x1 + 0j, x2 + 0j, x3 + 0j, x4 + 0j])


@dataclass(frozen=True)
class AmplitudeSet:
    """The four arrival amplitudes from one start |initial_label, n photons>.

    Iterates in arrival order ee, eg, ge, gg; the arrival photon numbers are
    manifold_index plus the shifts (0,1,1,2), (-1,0,0,1) or (-2,-1,-1,0) for
    an ee, eg or gg start respectively.
    """

    initial_label: str
    manifold_index: int
    X1: complex
    X2: complex
    X3: complex
    X4: complex

    def __iter__(self) -> Iterator[complex]:
        return iter((self.X1, self.X2, self.X3, self.X4))


def amplitudes(label: str, n: int, t: float, couplings: CouplingPair) -> AmplitudeSet:
    """Arrival amplitudes from the single start |label, n photons>.

    The weights multiplying cos(Omega t) in the diagonal entries are convex,
    so at t = 0 the start state is recovered exactly, not merely to rounding.
    """
    if n < 0 or n != int(n):
        raise ValueError(f"photon number must be a nonnegative integer, got {n}")
    table = amplitude_table(label, int(n), t, couplings)
    x1, x2, x3, x4 = table[:, int(n)]
    return AmplitudeSet(
        initial_label=label,
        manifold_index=int(n),
        X1=complex(x1),
        X2=complex(x2),
        X3=complex(x3),
        X4=complex(x4),
    )


def _assemble(
    coefficients: np.ndarray, label: str, t: float, couplings: CouplingPair
) -> np.ndarray:
    """Joint atoms+field vector from field coefficients C_0..C_N at time t.

    The result is flat with layout q * (n_max + 3) + f, q running over
    ATOM_LABELS and f over Fock levels 0 .. n_max + 2; the extra two levels
    hold the photons released by an "ee" start at the truncation edge.
    """
    n_max = len(coefficients) - 1
    fock_dim = n_max + 3
    table = amplitude_table(label, n_max, t, couplings)
    shifts = _ARRIVAL_SHIFTS[label]
    out = np.zeros((4, fock_dim), dtype=complex)
    for q in range(4):
        contrib = coefficients * table[q]
        off = shifts[q]
        if off >= 0:
            out[q, off : off + n_max + 1] = contrib
        else:
            # entries that would land below Fock 0 carry a sqrt(n) or
            # sqrt(n(n-1)) factor and are exact zeros; drop them (possibly
            # all of them, when the cutoff sits below the shift)
            keep = max(0, n_max + 1 + off)
            out[q, :keep] = contrib[n_max + 1 - keep :]
    return out.reshape(-1)


def propagate_phase_state(
    z: PhaseState, label: str, t: float, couplings: CouplingPair
) -> np.ndarray:
    """Joint atoms+field vector at time t from the start |label> x |z>."""
    return _assemble(z.coefficients, label, t, couplings)


def phase_propagator(couplings: CouplingPair) -> Callable[[np.ndarray, str, float], np.ndarray]:
    """Bind the couplings, yielding a solver the mixture engine can drive.

    The returned callable maps (field coefficients, atomic label, t) to the
    flat joint vector of :func:`propagate_phase_state`.
    """

    def solver(coefficients: np.ndarray, label: str, t: float) -> np.ndarray:
        return _assemble(coefficients, label, t, couplings)

    return solver
