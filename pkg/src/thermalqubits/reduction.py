"""Closed-form reduced dynamics of the atom pair.

For a field that starts diagonal in photon number, each component
|label, n> evolves inside one excitation block and the field trace pairs
only arrivals with equal photon count.  Of the four arrival states from any
start, exactly one pair shares a photon number: eg and ge.  The atomic
density therefore keeps an X shape for all times, five numbers per instant:
four populations and the single eg/ge coherence.  This module assembles
those five from the closed-form amplitude tables, photon component by
photon component, with compensated summation so long thermal tails do not
accumulate rounding drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .closed_form import CouplingPair, amplitude_table
from .fock_thermal import ThermalFieldSpec

__all__ = [
    "AtomicMixtureSpec",
    "TwoQubitDensity",
    "reduced_density",
]


@dataclass(frozen=True)
class AtomicMixtureSpec:
    """Diagonal two-atom starting mixture on two angles.

    The eg weight is cos(theta)^2; the remainder sin(theta)^2 splits
    between ee and gg as cos(vartheta)^2 to sin(vartheta)^2, so the three
    weights partition one by construction.
    """

    theta: float
    vartheta: float

    def weights(self) -> dict[str, float]:
        excited = math.sin(self.theta) ** 2
        return {
            "ee": excited * math.cos(self.vartheta) ** 2,
            "eg": math.cos(self.theta) ** 2,
            "gg": excited * math.sin(self.vartheta) ** 2,
        }


@dataclass(frozen=True, eq=False)
class TwoQubitDensity:
    """4x4 atomic density in the basis ee, eg, ge, gg.

    Only X-shaped matrices arise here: four populations plus the central
    eg/ge coherence.  The closed-form assembly leaves the corner entries
    exactly zero because no pair of arrival states other than eg/ge ever
    shares a photon number; densities traced out of a quadrature average
    carry rounding there instead, below 1e-14.
    """

    matrix: np.ndarray

    @classmethod
    def from_components(
        cls,
        B_ee: float,
        B_egeg: float,
        B_gege: float,
        B_gg: float,
        B_coh: complex,
    ) -> "TwoQubitDensity":
        m = np.zeros((4, 4), dtype=complex)
        m[0, 0] = B_ee
        m[1, 1] = B_egeg
        m[2, 2] = B_gege
        m[3, 3] = B_gg
        m[1, 2] = B_coh
        m[2, 1] = complex(B_coh).conjugate()
        return cls(matrix=m)

    @property
    def B_ee(self) -> float:
        return float(self.matrix[0, 0].real)

    @property
    def B_egeg(self) -> float:
        return float(self.matrix[1, 1].real)

    @property
    def B_gege(self) -> float:
        return float(self.matrix[2, 2].real)

    @property
    def B_gg(self) -> float:
        return float(self.matrix[3, 3].real)

    @property
    def B_coh(self) -> complex:
        return complex(self.matrix[1, 2])

    @property
    def trace(self) -> float:
        return float(np.real(np.trace(self.matrix)))


def reduced_density(
    spec: ThermalFieldSpec,
    mixture: AtomicMixtureSpec,
    couplings: CouplingPair,
    t: float,
) -> TwoQubitDensity:
    """Atomic density at time t with the field traced out, in closed form.

    Each starting label of the mixture contributes |X_q|^2 to the
    populations and X2 X3* to the coherence, weighted by w_label p(n) and
    summed over photon components with math.fsum.  No phase average is
    needed: every product that survives the field trace pairs equal photon
    numbers, where the phases cancel.
    """
    probs = spec.probabilities()
    pieces: dict[str, list[float]] = {
        "ee": [], "egeg": [], "gege": [], "gg": [], "re": [], "im": []
    }
    for label, w_label in mixture.weights().items():
        if w_label == 0.0:
            continue
        table = amplitude_table(label, spec.truncation, t, couplings)
        scaled = w_label * probs
        mags = np.abs(table) ** 2
        cross = scaled * table[1] * np.conj(table[2])
        pieces["ee"].extend(scaled * mags[0])
        pieces["egeg"].extend(scaled * mags[1])
        pieces["gege"].extend(scaled * mags[2])
        pieces["gg"].extend(scaled * mags[3])
        pieces["re"].extend(cross.real)
        pieces["im"].extend(cross.imag)
    return TwoQubitDensity.from_components(
        B_ee=math.fsum(pieces["ee"]),
        B_egeg=math.fsum(pieces["egeg"]),
        B_gege=math.fsum(pieces["gege"]),
        B_gg=math.fsum(pieces["gg"]),
        B_coh=complex(math.fsum(pieces["re"]), math.fsum(pieces["im"])),
    )
