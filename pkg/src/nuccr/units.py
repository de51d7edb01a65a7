"""Unit constants for oscillation phases and wave-packet damping.

The library works throughout in lab units: squared-mass differences in eV^2,
baselines/positions in km, energies in GeV and packet widths in m.  The
evolution formulas want dimensionless arguments in natural units, so two
conversion constants are needed; both derive from the single input hbar*c.

With hbar*c = 197.3269804 MeV*fm:

* 1 km = 1e18 fm = 1e18 / (197.3269804e-3 GeV*fm) GeV^-1,
* 1 eV^2 = 1e-18 GeV^2,

so the oscillation phase dm2 * L / (2E) in radians is

    PHASE_CONST * dm2[eV^2] * L[km] / E[GeV],   PHASE_CONST ~= 2.5339

(twice the 1.267 of the familiar sin^2(1.267 dm2 L/E) probability formula),
and the Gaussian damping argument dm2 * x / (4*sqrt(2)*E^2*sigma_x) is

    DAMPING_CONST * dm2[eV^2] * x[km] / (E[GeV]^2 * sigma_x[m]).

In the damping constant the hbar*c factors cancel between the km and the m
conversion, leaving exactly 1e-15 / (4*sqrt(2)).
"""

import math

HBARC_MEV_FM = 197.3269804

_HBARC_GEV_M = HBARC_MEV_FM * 1e-3 * 1e-15  # GeV * m
KM_IN_INV_GEV = 1e3 / _HBARC_GEV_M
M_IN_INV_GEV = 1.0 / _HBARC_GEV_M
EV2_IN_GEV2 = 1e-18

PHASE_CONST = 0.5 * EV2_IN_GEV2 * KM_IN_INV_GEV

DAMPING_CONST = EV2_IN_GEV2 * KM_IN_INV_GEV / (4.0 * math.sqrt(2.0) * M_IN_INV_GEV)
