"""Negativity of the atom pair, general and closed form.

The measure used throughout is twice the absolute sum of the negative
eigenvalues of the partial transpose (so a Bell pair scores 1).  For the
X-shaped densities produced by :mod:`thermalqubits.reduction` the partial
transpose moves the central coherence into the corner block, and the only
eigenvalue that can go negative is available in closed form; the general
eigenvalue route stays the primary path and the closed form rides along as
an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .reduction import TwoQubitDensity

__all__ = [
    "NegativityResult",
    "closed_form_gamma",
    "closed_form_negativity",
    "negativity",
    "upsilon_witness",
]

# Eigenvalues this close below zero are rounding residue of an exact zero,
# not entanglement; treat them as zero on both routes.
_NEGATIVE_EIGENVALUE_FLOOR = -1e-12


def _as_matrix(rho: TwoQubitDensity | np.ndarray) -> np.ndarray:
    m = rho.matrix if isinstance(rho, TwoQubitDensity) else np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"need a 4x4 density matrix, got shape {m.shape}")
    if np.abs(m - m.conj().T).max() > 1e-8:
        raise ValueError("density matrix is not Hermitian")
    return m


@dataclass(frozen=True, eq=False)
class NegativityResult:
    """Negativity plus its ingredients and the sign witness.

    ``negative_eigenvalues`` lists the partial-transpose eigenvalues that
    survive below zero after flooring rounding residue, ascending, so
    ``xi == -2 * sum(negative_eigenvalues)``.  ``upsilon`` is
    B_ee * B_gg - |B_coh|^2, which for X states goes negative exactly when
    xi goes positive.
    """

    xi: float
    negative_eigenvalues: tuple[float, ...]
    upsilon: float


def negativity(rho: TwoQubitDensity | np.ndarray) -> NegativityResult:
    """Twice the absolute sum of negative partial-transpose eigenvalues.

    Accepts any Hermitian 4x4 density (ordering ee, eg, ge, gg); the
    transpose is taken over the second qubit.
    """
    m = _as_matrix(rho)
    pt = m.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)
    eigs = np.linalg.eigvalsh(pt)
    eigs = np.where((eigs > _NEGATIVE_EIGENVALUE_FLOOR) & (eigs < 0.0), 0.0, eigs)
    negative = tuple(float(e) for e in eigs if e < 0.0)
    # the leading 0.0 turns the empty case into +0.0 rather than -0.0
    xi = 0.0 - 2.0 * sum(negative)
    upsilon = float(m[0, 0].real * m[3, 3].real) - abs(complex(m[1, 2])) ** 2
    return NegativityResult(xi=xi, negative_eigenvalues=negative, upsilon=upsilon)


def closed_form_gamma(B_ee: float, B_gg: float, B_coh: complex) -> float:
    """The one partial-transpose eigenvalue of an X state that can go negative.

    The partial transpose sends the eg/ge coherence to the ee/gg corner, so
    the candidate eigenvalue mixes the corner populations with the
    coherence magnitude:

        (B_ee + B_gg - sqrt((B_ee - B_gg)^2 + 4 |B_coh|^2)) / 2
    """
    spread = np.hypot(B_ee - B_gg, 2.0 * abs(B_coh))
    return float((B_ee + B_gg - spread) / 2.0)


def closed_form_negativity(rho: TwoQubitDensity) -> float:
    """Negativity from :func:`closed_form_gamma`, same floor as the general route."""
    gamma = closed_form_gamma(rho.B_ee, rho.B_gg, rho.B_coh)
    if gamma >= _NEGATIVE_EIGENVALUE_FLOOR:
        return 0.0
    return -2.0 * gamma


def upsilon_witness(rho: TwoQubitDensity) -> float:
    """Sign witness for X-state entanglement: B_ee * B_gg - |B_coh|^2.

    Negative exactly when :func:`closed_form_gamma` is negative, i.e. when
    the central coherence outweighs the corner populations; it carries the
    sign of the entanglement decision without its magnitude.
    """
    return rho.B_ee * rho.B_gg - abs(rho.B_coh) ** 2
