"""Plane-wave (pure state) flavor evolution in the ultra-relativistic limit."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .params import FLAVORS, OscillationParams, build_pmns
from .qinfo import DensityMatrix
from .units import PHASE_CONST

NORMALIZATION_TOL = 1e-12

#: basis index of the occupancy state of each flavor mode: |100>, |010>, |001>
OCCUPANCY_INDEX = {"e": 4, "mu": 2, "tau": 1}


@dataclass(frozen=True)
class FlavorAmplitudes:
    """Amplitudes of an evolved flavor state onto (e, mu, tau), at L/E in km/GeV."""

    initial_flavor: str
    a: np.ndarray
    phase_arg: float

    def __post_init__(self):
        if self.initial_flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.initial_flavor!r}")
        a = np.array(self.a, dtype=complex)
        if a.shape != (3,):
            raise ValueError(f"expected 3 amplitudes, got shape {a.shape}")
        norm_gap = abs(float(np.abs(a) @ np.abs(a)) - 1.0)
        if norm_gap > NORMALIZATION_TOL:
            raise ValueError(f"amplitudes not normalized: deviation {norm_gap:.3e}")
        if self.phase_arg == 0.0:
            delta = np.zeros(3)
            delta[FLAVORS.index(self.initial_flavor)] = 1.0
            if np.abs(np.abs(a) - delta).max() > NORMALIZATION_TOL:
                raise ValueError("amplitudes at L/E = 0 must be the initial flavor")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)


def evolve_amplitudes(alpha: str, params: OscillationParams,
                      l_over_e: float) -> FlavorAmplitudes:
    """Amplitudes a_{alpha beta} = sum_i U*_{alpha i} e^{-i phi_i} U_{beta i}.

    Only relative phases are physical; the global e^{-i phi_1} is factored
    out, so phi = PHASE_CONST * (0, dm2_21, dm2_31) * L/E.
    """
    if alpha not in FLAVORS:
        raise ValueError(f"unknown flavor {alpha!r}")
    if not math.isfinite(l_over_e) or l_over_e < 0:
        raise ValueError(f"L/E must be finite and >= 0, got {l_over_e}")
    u = build_pmns(params).u
    phases = PHASE_CONST * np.array(params.mass_ladder()) * l_over_e
    row = u[FLAVORS.index(alpha)]
    a = (row.conj() * np.exp(-1j * phases)) @ u.T
    return FlavorAmplitudes(alpha, a, l_over_e)


def transition_probabilities(amps: FlavorAmplitudes) -> tuple[float, float, float]:
    """(P_{alpha e}, P_{alpha mu}, P_{alpha tau}) = squared moduli."""
    p = np.abs(amps.a) ** 2
    return (float(p[0]), float(p[1]), float(p[2]))


def pure_density_matrix(amps: FlavorAmplitudes) -> DensityMatrix:
    """Projector onto the evolved state in the 3-qubit flavor-mode basis.

    The only nonzero block sits on rows/columns {|001>, |010>, |100>}, i.e.
    0-based indices 1, 2, 4.
    """
    psi = np.zeros(8, dtype=complex)
    for flavor, amp in zip(FLAVORS, amps.a):
        psi[OCCUPANCY_INDEX[flavor]] = amp
    return DensityMatrix(np.outer(psi, psi.conj()), FLAVORS)
