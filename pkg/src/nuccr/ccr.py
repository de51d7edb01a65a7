"""Correlation budgets: every additive identity, the residuals and the
genuine tripartite quantifiers, each carrying an auditable closure error.

All term values come from the generic pipeline (partial trace + Jacobi
eigensolver); closed-form expressions exist only in the test suite, as the
independent oracle side.
"""

from __future__ import annotations

from dataclasses import dataclass

from .params import FLAVORS
from .planewave import FlavorAmplitudes, pure_density_matrix
from .qinfo import (DensityMatrix, coherence_hs, partial_trace,
                    predictability_hs, vn_entropy, vn_entropy_diag)
from .wavepacket import FlavorCoefficients, mixed_density_matrix

#: dimensional target of each identity, in bits (PURE_HS_SINGLE in HS units)
BUDGET_TARGETS = {
    "PURE_HS_SINGLE": 0.5,
    "PURE_VN_SINGLE": 1.0,
    "PURE_VN_BIPART": 2.0,
    "PURE_RESIDUAL": 1.0,
    "MIXED_BIPART": 2.0,
    "MIXED_SINGLE": 1.0,
    "MIXED_RESIDUAL": 1.0,
}

#: the two internal genuine-correlation routes must agree this tightly
ROUTE_AGREEMENT_TOL = 1e-9


@dataclass(frozen=True)
class CcrBudget:
    """Named additive terms of one identity, its target, and the closure error."""

    identity_id: str
    subsystem: str
    terms: tuple[tuple[str, float], ...]
    target: float
    closure_error: float


def _budget(identity_id: str, subsystem: str, terms) -> CcrBudget:
    target = BUDGET_TARGETS[identity_id]
    total = sum(v for _, v in terms)
    return CcrBudget(identity_id, subsystem, tuple(terms), target,
                     abs(total - target))


def canonical_pair(pair) -> tuple[str, str]:
    a, b = pair
    for f in (a, b):
        if f not in FLAVORS:
            raise ValueError(f"unknown flavor {f!r}")
    if a == b:
        raise ValueError(f"pair must contain two distinct flavors, got {pair}")
    return tuple(sorted((a, b), key=FLAVORS.index))


def subsystem_id(labels) -> str:
    """Stable name of a flavor subset: 'e', 'emu', 'mutau', ..."""
    return "".join(sorted(labels, key=FLAVORS.index))


def _others(single: str) -> tuple[str, str]:
    if single not in FLAVORS:
        raise ValueError(f"unknown flavor {single!r}")
    return tuple(f for f in FLAVORS if f != single)


class _StateView:
    """Per-state cache of reductions and their entropies (one scan point)."""

    def __init__(self, rho: DensityMatrix):
        self.rho = rho
        self._reductions: dict[tuple[str, ...], DensityMatrix] = {
            rho.qubit_labels: rho}
        self._entropy: dict[tuple[str, ...], float] = {}
        self._entropy_diag: dict[tuple[str, ...], float] = {}

    def reduction(self, labels) -> DensityMatrix:
        key = tuple(sorted(labels, key=FLAVORS.index))
        if key not in self._reductions:
            self._reductions[key] = partial_trace(self.rho, key)
        return self._reductions[key]

    def entropy(self, labels) -> float:
        key = tuple(sorted(labels, key=FLAVORS.index))
        if key not in self._entropy:
            self._entropy[key] = vn_entropy(self.reduction(key))
        return self._entropy[key]

    def entropy_diag(self, labels) -> float:
        key = tuple(sorted(labels, key=FLAVORS.index))
        if key not in self._entropy_diag:
            self._entropy_diag[key] = vn_entropy_diag(self.reduction(key))
        return self._entropy_diag[key]

    # mixed-state budget pieces, as functions of the partition
    def mutual(self, part) -> float:
        rest = tuple(f for f in self.rho.qubit_labels if f not in set(part))
        return self.entropy(part) + self.entropy(rest) - self.entropy(self.rho.qubit_labels)

    def conditional(self, part) -> float:
        rest = tuple(f for f in self.rho.qubit_labels if f not in set(part))
        return self.entropy(self.rho.qubit_labels) - self.entropy(rest)

    def discord(self, part) -> float:
        return self.mutual(part) + self.conditional(part)

    def residual(self, single: str) -> float:
        o1, o2 = _others(single)
        return (self.entropy((single,))
                - self.entropy((single, o1)) - self.entropy((single, o2)))

    def residual_discord(self, single: str) -> float:
        o1, o2 = _others(single)
        return (self.discord((single,))
                - self.discord((single, o1)) - self.discord((single, o2)))


# ---------------------------------------------------------------- pure state

def _assemble_pure_hs_single(view: _StateView, single: str) -> CcrBudget:
    o1, o2 = _others(single)
    terms = [
        (f"P_hs_{single}", predictability_hs(view.reduction((single,)))),
        (f"C_hs_{single}", coherence_hs(view.reduction((single,)))),
        (f"C_hs_{subsystem_id((single, o1))}",
         coherence_hs(view.reduction((single, o1)))),
        (f"C_hs_{subsystem_id((single, o2))}",
         coherence_hs(view.reduction((single, o2)))),
    ]
    return _budget("PURE_HS_SINGLE", single, terms)


def _assemble_vn_terms(view: _StateView, labels) -> list[tuple[str, float]]:
    name = subsystem_id(labels)
    s = view.entropy(labels)
    s_diag = view.entropy_diag(labels)
    d_bits = len(labels)
    return [
        (f"C_re_{name}", s_diag - s),
        (f"P_vn_{name}", d_bits - s_diag),
        (f"S_vn_{name}", s),
    ]


def _assemble_pure_vn_single(view: _StateView, single: str) -> CcrBudget:
    return _budget("PURE_VN_SINGLE", single, _assemble_vn_terms(view, (single,)))


def _assemble_pure_vn_bipartite(view: _StateView, pair) -> CcrBudget:
    pair = canonical_pair(pair)
    return _budget("PURE_VN_BIPART", subsystem_id(pair),
                   _assemble_vn_terms(view, pair))


def _assemble_pure_residual(view: _StateView, single: str) -> CcrBudget:
    o1, o2 = _others(single)
    s_diag = view.entropy_diag((single,))
    terms = [
        (f"P_vn_{single}", 1.0 - s_diag),
        (f"C_re_{single}", s_diag - view.entropy((single,))),
        (f"S_R_{single}", view.residual(single)),
        (f"S_vn_{subsystem_id((single, o1))}", view.entropy((single, o1))),
        (f"S_vn_{subsystem_id((single, o2))}", view.entropy((single, o2))),
    ]
    return _budget("PURE_RESIDUAL", single, terms)


def budget_pure_hs_single(amps: FlavorAmplitudes, single: str) -> CcrBudget:
    """Hilbert-Schmidt identity for one mode, split over the two pair coherences."""
    return _assemble_pure_hs_single(_StateView(pure_density_matrix(amps)), single)


def budget_pure_vn_single(amps: FlavorAmplitudes, single: str) -> CcrBudget:
    """Entropic identity C_re + P_vn + S_vn = 1 for a single mode."""
    return _assemble_pure_vn_single(_StateView(pure_density_matrix(amps)), single)


def budget_pure_vn_bipartite(amps: FlavorAmplitudes, pair) -> CcrBudget:
    """Entropic identity for a pair of modes; target log2(4) = 2."""
    return _assemble_pure_vn_bipartite(_StateView(pure_density_matrix(amps)), pair)


def budget_pure_residual(amps: FlavorAmplitudes, single: str) -> CcrBudget:
    """Entropic identity with the residual correlation split out; target 1."""
    return _assemble_pure_residual(_StateView(pure_density_matrix(amps)), single)


def _pure_suite(view: _StateView) -> tuple[CcrBudget, ...]:
    budgets = []
    for single in FLAVORS:
        budgets.append(_assemble_pure_hs_single(view, single))
        budgets.append(_assemble_pure_vn_single(view, single))
        budgets.append(_assemble_pure_residual(view, single))
    for pair in (("e", "mu"), ("e", "tau"), ("mu", "tau")):
        budgets.append(_assemble_pure_vn_bipartite(view, pair))
    return tuple(budgets)


def pure_budget_suite(amps: FlavorAmplitudes) -> tuple[CcrBudget, ...]:
    """All twelve pure-state budgets of one scan point, sharing reductions."""
    return _pure_suite(_StateView(pure_density_matrix(amps)))


# --------------------------------------------------------------- mixed state

def _assemble_mixed_bipartite(view: _StateView, pair) -> CcrBudget:
    pair = canonical_pair(pair)
    name = subsystem_id(pair)
    s_diag = view.entropy_diag(pair)
    terms = [
        (f"P_vn_{name}", 2.0 - s_diag),
        (f"C_re_{name}", s_diag - view.entropy(pair)),
        (f"S_cond_{name}", view.conditional(pair)),
        (f"I_{name}", view.mutual(pair)),
    ]
    return _budget("MIXED_BIPART", name, terms)


def _assemble_mixed_single(view: _StateView, single: str) -> CcrBudget:
    s_diag = view.entropy_diag((single,))
    terms = [
        (f"P_vn_{single}", 1.0 - s_diag),
        (f"C_re_{single}", s_diag - view.entropy((single,))),
        (f"S_cond_{single}", view.conditional((single,))),
        (f"I_{single}", view.mutual((single,))),
    ]
    return _budget("MIXED_SINGLE", single, terms)


def _assemble_mixed_residual(view: _StateView, single: str) -> CcrBudget:
    o1, o2 = _others(single)
    s_diag = view.entropy_diag((single,))
    terms = [
        (f"P_vn_{single}", 1.0 - s_diag),
        (f"C_re_{single}", s_diag - view.entropy((single,))),
        (f"QD_R_{single}", view.residual_discord(single)),
        (f"QD_{subsystem_id((single, o1))}", view.discord((single, o1))),
        (f"QD_{subsystem_id((single, o2))}", view.discord((single, o2))),
    ]
    return _budget("MIXED_RESIDUAL", single, terms)


def budget_mixed_bipartite(fc: FlavorCoefficients, pair) -> CcrBudget:
    """Mixed-state identity for a pair: P_vn + C_re + S_cond + I = 2."""
    return _assemble_mixed_bipartite(_StateView(mixed_density_matrix(fc)), pair)


def budget_mixed_single(fc: FlavorCoefficients, single: str) -> CcrBudget:
    """Mixed-state identity for one mode: P_vn + C_re + S_cond + I = 1."""
    return _assemble_mixed_single(_StateView(mixed_density_matrix(fc)), single)


def budget_mixed_residual(fc: FlavorCoefficients, single: str) -> CcrBudget:
    """Mixed-state identity with the residual discord split out; target 1."""
    return _assemble_mixed_residual(_StateView(mixed_density_matrix(fc)), single)


def _mixed_suite(view: _StateView) -> tuple[CcrBudget, ...]:
    budgets = []
    for single in FLAVORS:
        budgets.append(_assemble_mixed_single(view, single))
        budgets.append(_assemble_mixed_residual(view, single))
    for pair in (("e", "mu"), ("e", "tau"), ("mu", "tau")):
        budgets.append(_assemble_mixed_bipartite(view, pair))
    return tuple(budgets)


def mixed_budget_suite(fc: FlavorCoefficients) -> tuple[CcrBudget, ...]:
    """All nine mixed-state budgets of one scan point, sharing reductions."""
    return _mixed_suite(_StateView(mixed_density_matrix(fc)))


# ----------------------------------------------------- genuine tripartite

def residual_entropy(amps: FlavorAmplitudes, single: str) -> float:
    """S^R for one mode of the pure state: S(single) - S(pair1) - S(pair2)."""
    return _StateView(pure_density_matrix(amps)).residual(single)


def residual_discord(fc: FlavorCoefficients, single: str) -> float:
    """QD^R for one mode of the mixed state (discord polygamy residual)."""
    return _StateView(mixed_density_matrix(fc)).residual_discord(single)


def genuine_residual_average(rho: DensityMatrix) -> float:
    """Average of the three residual correlations of any 3-mode state.

    This is the state-level form of both genuine quantifiers (the discord
    residuals telescope to the entropy residuals), used for permutation
    checks on relabeled states.
    """
    view = _StateView(rho)
    return sum(view.residual(f) for f in rho.qubit_labels) / 3.0


def genuine_tripartite_entanglement(amps: FlavorAmplitudes) -> float:
    """Genuine tripartite correlation of the pure state, in bits.

    Computed over two routes that must agree: the average of the three
    residual correlations, and the weighted average of the bipartition
    entropies (1/3) sum_x [S(full) - S(complement of x)].  Disagreement
    beyond ROUTE_AGREEMENT_TOL signals an implementation bug.
    """
    view = _StateView(pure_density_matrix(amps))
    via_residuals = sum(view.residual(f) for f in FLAVORS) / 3.0
    s_full = view.entropy(FLAVORS)
    via_bipartitions = sum(
        s_full - view.entropy(_others(f)) for f in FLAVORS) / 3.0
    if abs(via_residuals - via_bipartitions) > ROUTE_AGREEMENT_TOL:
        raise RuntimeError(
            f"genuine-correlation routes disagree: {via_residuals!r} vs "
            f"{via_bipartitions!r}")
    return via_residuals


def genuine_tripartite_discord(fc: FlavorCoefficients) -> float:
    """Genuine tripartite discord: average of the three residual discords."""
    view = _StateView(mixed_density_matrix(fc))
    return sum(view.residual_discord(f) for f in FLAVORS) / 3.0
