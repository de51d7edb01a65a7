"""Oscillation parameters and the PMNS mixing matrix."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

FLAVORS = ("e", "mu", "tau")

#: |dm2_32 - (dm2_31 - dm2_21)| must not exceed this (eV^2); the quoted
#: experimental values satisfy it to rounding.
DM2_CONSISTENCY_TOL = 1e-5

UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class OscillationParams:
    """Mixing angles (radians), CP phase (radians) and mass splittings (eV^2)."""

    theta12: float
    theta13: float
    theta23: float
    delta_cp: float
    dm2_21: float
    dm2_31: float
    dm2_32: float

    def __post_init__(self):
        for name in ("theta12", "theta13", "theta23", "delta_cp",
                     "dm2_21", "dm2_31", "dm2_32"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"non-finite parameter {name}")
        gap = abs(self.dm2_32 - (self.dm2_31 - self.dm2_21))
        if gap > DM2_CONSISTENCY_TOL:
            raise ValueError(
                f"inconsistent mass splittings: |dm2_32 - (dm2_31 - dm2_21)| = "
                f"{gap:.3e} eV^2 exceeds {DM2_CONSISTENCY_TOL:.0e}")

    def mass_ladder(self) -> tuple[float, float, float]:
        """m_j^2 offsets relative to m_1^2; all internal phases use these."""
        return (0.0, self.dm2_21, self.dm2_31)


@dataclass(frozen=True)
class MixingMatrix:
    """3x3 unitary PMNS matrix; rows are flavors (e, mu, tau), columns mass states."""

    u: np.ndarray

    def __post_init__(self):
        u = np.array(self.u, dtype=complex)
        if u.shape != (3, 3):
            raise ValueError(f"PMNS matrix must be 3x3, got {u.shape}")
        gap = np.abs(u @ u.conj().T - np.eye(3)).max()
        if gap > UNITARITY_TOL:
            raise ValueError(f"PMNS matrix not unitary: max deviation {gap:.3e}")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)


def default_params() -> OscillationParams:
    """Current experimental best-fit values, with delta_CP set to zero."""
    return OscillationParams(
        theta12=math.radians(33.48),
        theta13=math.radians(8.50),
        theta23=math.radians(42.3),
        delta_cp=0.0,
        dm2_21=7.50e-5,
        dm2_31=2.46e-3,
        dm2_32=2.38e-3,
    )


def build_pmns(params: OscillationParams) -> MixingMatrix:
    """Standard-parameterization PMNS matrix (s13*e^{-i delta} in entry (1,3))."""
    c12, s12 = math.cos(params.theta12), math.sin(params.theta12)
    c13, s13 = math.cos(params.theta13), math.sin(params.theta13)
    c23, s23 = math.cos(params.theta23), math.sin(params.theta23)
    if params.delta_cp == 0.0:
        ep = em = 1.0  # keeps entries exactly real
    else:
        ep = complex(math.cos(params.delta_cp), math.sin(params.delta_cp))
        em = ep.conjugate()
    u = np.array([
        [c12 * c13, s12 * c13, s13 * em],
        [-s12 * c23 - c12 * s23 * s13 * ep,
         c12 * c23 - s12 * s23 * s13 * ep,
         s23 * c13],
        [s12 * s23 - c12 * c23 * s13 * ep,
         -c12 * s23 - s12 * c23 * s13 * ep,
         c23 * c13],
    ], dtype=complex)
    return MixingMatrix(u)


def params_from_dict(cfg: dict) -> OscillationParams:
    """Build parameters from config keys (angles in degrees, splittings in eV^2).

    Expects theta12_deg, theta13_deg, theta23_deg, delta_cp_deg, dm2_21_ev2,
    dm2_31_ev2 and optionally dm2_32_ev2 (derived from the other two when absent).
    """
    try:
        theta12 = math.radians(float(cfg["theta12_deg"]))
        theta13 = math.radians(float(cfg["theta13_deg"]))
        theta23 = math.radians(float(cfg["theta23_deg"]))
        delta_cp = math.radians(float(cfg["delta_cp_deg"]))
        dm2_21 = float(cfg["dm2_21_ev2"])
        dm2_31 = float(cfg["dm2_31_ev2"])
    except KeyError as exc:
        raise ValueError(f"config is missing key {exc.args[0]!r}") from exc
    dm2_32 = float(cfg.get("dm2_32_ev2", dm2_31 - dm2_21))
    return OscillationParams(theta12, theta13, theta23, delta_cp,
                             dm2_21, dm2_31, dm2_32)


def load_config(path) -> dict:
    """Read a JSON config file; raises ValueError on malformed content."""
    with open(path, encoding="utf-8") as fh:
        try:
            cfg = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ValueError(f"config {path} must contain a JSON object")
    return cfg
