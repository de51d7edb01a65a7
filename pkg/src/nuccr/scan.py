"""Scan orchestration: quantity registry, grid evaluation, CSV/plot emission
and the identity audit.

Quantity identifiers are stable strings (CSV columns use them verbatim):
probabilities `prob_e`..., measure values like `P_hs_e`, `C_hs_emu`,
`S_vn_etau`, `QD_R_mu`, the genuine quantifiers `S_G` / `QD_G`, and budget
identifiers like `ccr_pure_hs_e` which expand into their term columns plus a
`<id>_closure` column.  `available_quantities(model)` lists everything.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import ccr
from .ccr import subsystem_id
from .params import FLAVORS, OscillationParams
from .planewave import evolve_amplitudes, pure_density_matrix, transition_probabilities
from .qinfo import (coherence_hs, jacobi_eigh, nonlocal_coherence_hs_tripartite,
                    partial_trace, permute_qubits, vn_entropy)
from .wavepacket import (DEFAULT_SCAN_MAX_KM, WavePacketConfig,
                         flavor_coefficients, mixed_density_matrix,
                         wp_transition_probability)

MODELS = ("plane", "wavepacket")
PAIRS = (("e", "mu"), ("e", "tau"), ("mu", "tau"))

DEFAULT_PLANE_GRID = (0.0, 2e4, 2000)
DEFAULT_WAVEPACKET_GRID = (0.0, DEFAULT_SCAN_MAX_KM, 2000)

CSV_FORMAT = "%.12e"


class ScanError(RuntimeError):
    """A scan point failed; carries the offending axis value."""

    def __init__(self, axis_value: float, message: str):
        super().__init__(f"at axis value {axis_value!r}: {message}")
        self.axis_value = axis_value


# ------------------------------------------------------------------ registry

def _pair_ids():
    return [subsystem_id(p) for p in PAIRS]


def _scalar_registry() -> dict[str, tuple[frozenset, str]]:
    """id -> (models it applies to, description)."""
    both = frozenset(MODELS)
    plane = frozenset(("plane",))
    wp = frozenset(("wavepacket",))
    reg = {}
    for f in FLAVORS:
        reg[f"prob_{f}"] = (both, f"oscillation probability into flavor {f}")
    reg["purity"] = (both, "state purity Tr rho^2")
    subsets = [(f,) for f in FLAVORS] + list(PAIRS)
    for labels in subsets:
        name = subsystem_id(labels)
        reg[f"S_vn_{name}"] = (both, f"von Neumann entropy of subsystem {name}")
        reg[f"P_vn_{name}"] = (both, f"entropic predictability of {name}")
        reg[f"C_re_{name}"] = (both, f"relative entropy of coherence of {name}")
    for f in FLAVORS:
        reg[f"P_hs_{f}"] = (plane, f"Hilbert-Schmidt predictability of {f}")
        reg[f"C_hs_{f}"] = (plane, f"Hilbert-Schmidt coherence of {f}")
        reg[f"C_hs_nl_{f}"] = (plane, f"non-local coherence {f} vs the rest")
        reg[f"S_R_{f}"] = (plane, f"residual correlation of {f}")
    for pid in _pair_ids():
        reg[f"C_hs_{pid}"] = (plane, f"Hilbert-Schmidt coherence of pair {pid}")
    reg["S_G"] = (plane, "genuine tripartite correlation (entropy average)")
    for f in FLAVORS:
        reg[f"S_cond_{f}"] = (wp, f"conditional ignorance S({f}|rest)")
        reg[f"I_{f}"] = (wp, f"mutual information I({f}:rest)")
        reg[f"QD_{f}"] = (wp, f"quantum discord of {f} vs the rest")
        reg[f"QD_R_{f}"] = (wp, f"residual discord of {f}")
    for pid in _pair_ids():
        reg[f"S_cond_{pid}"] = (wp, f"conditional ignorance S({pid}|rest)")
        reg[f"I_{pid}"] = (wp, f"mutual information I({pid}:rest)")
        reg[f"QD_{pid}"] = (wp, f"quantum discord of pair {pid} vs the rest")
    reg["QD_G"] = (wp, "genuine tripartite discord (residual average)")
    return reg


def _budget_registry() -> dict[str, tuple[str, str, str]]:
    """id -> (model, identity_id, subsystem)."""
    reg = {}
    for f in FLAVORS:
        reg[f"ccr_pure_hs_{f}"] = ("plane", "PURE_HS_SINGLE", f)
        reg[f"ccr_pure_vn_{f}"] = ("plane", "PURE_VN_SINGLE", f)
        reg[f"ccr_pure_res_{f}"] = ("plane", "PURE_RESIDUAL", f)
        reg[f"ccr_mixed_single_{f}"] = ("wavepacket", "MIXED_SINGLE", f)
        reg[f"ccr_mixed_res_{f}"] = ("wavepacket", "MIXED_RESIDUAL", f)
    for pair in PAIRS:
        pid = subsystem_id(pair)
        reg[f"ccr_pure_vn_{pid}"] = ("plane", "PURE_VN_BIPART", pid)
        reg[f"ccr_mixed_{pid}"] = ("wavepacket", "MIXED_BIPART", pid)
    return reg


_SCALARS = _scalar_registry()
_BUDGETS = _budget_registry()


def _budget_term_names(identity_id: str, subsystem: str) -> list[str]:
    if identity_id in ("PURE_VN_SINGLE", "PURE_VN_BIPART"):
        return [f"C_re_{subsystem}", f"P_vn_{subsystem}", f"S_vn_{subsystem}"]
    if identity_id == "MIXED_BIPART":
        return [f"P_vn_{subsystem}", f"C_re_{subsystem}",
                f"S_cond_{subsystem}", f"I_{subsystem}"]
    single = subsystem
    pids = [subsystem_id((single, other)) for other in FLAVORS if other != single]
    if identity_id == "PURE_HS_SINGLE":
        return [f"P_hs_{single}", f"C_hs_{single}"] + [f"C_hs_{p}" for p in pids]
    if identity_id == "PURE_RESIDUAL":
        return [f"P_vn_{single}", f"C_re_{single}", f"S_R_{single}"] + \
               [f"S_vn_{p}" for p in pids]
    if identity_id == "MIXED_SINGLE":
        return [f"P_vn_{single}", f"C_re_{single}",
                f"S_cond_{single}", f"I_{single}"]
    if identity_id == "MIXED_RESIDUAL":
        return [f"P_vn_{single}", f"C_re_{single}", f"QD_R_{single}"] + \
               [f"QD_{p}" for p in pids]
    raise ValueError(f"unknown identity {identity_id!r}")


def available_quantities(model: str) -> dict[str, str]:
    """All quantity and budget identifiers valid for `model`, with descriptions."""
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    out = {qid: desc for qid, (models, desc) in _SCALARS.items()
           if model in models}
    for bid, (bmodel, identity_id, sub) in _BUDGETS.items():
        if bmodel == model:
            out[bid] = f"budget {identity_id}({sub}): term columns plus " \
                       f"{bid}_closure"
    return out


def default_budget_quantities(model: str) -> tuple[str, ...]:
    """The model's budget identifiers, the default for a scan."""
    return tuple(bid for bid, (m, _, _) in _BUDGETS.items() if m == model)


# ------------------------------------------------------------------- request

@dataclass(frozen=True)
class ScanRequest:
    """A scan of `quantities` over [start, stop] with `points` samples.

    The axis is L/E in km/GeV for the plane model and x in km for the
    wave-packet model; `wp` is required exactly for the latter.
    """

    model: str
    initial_flavor: str
    start: float
    stop: float
    points: int
    quantities: tuple[str, ...]
    params: OscillationParams
    wp: WavePacketConfig | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; pick from {MODELS}")
        if self.initial_flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.initial_flavor!r}")
        if not (math.isfinite(self.start) and self.start >= 0):
            raise ValueError(f"start must be finite and >= 0, got {self.start}")
        if not (math.isfinite(self.stop) and self.stop > self.start):
            raise ValueError(f"stop must exceed start, got {self.stop}")
        if self.points < 2:
            raise ValueError(f"need at least 2 points, got {self.points}")
        if (self.wp is None) == (self.model == "wavepacket"):
            raise ValueError("wp config is required for the wavepacket model "
                             "and must be omitted for the plane model")
        object.__setattr__(self, "quantities", tuple(self.quantities))
        if not self.quantities:
            raise ValueError("quantities must not be empty")
        known = set(available_quantities(self.model))
        for qid in self.quantities:
            if qid not in known:
                raise ValueError(
                    f"unknown quantity {qid!r} for model {self.model!r}; "
                    f"see available_quantities()")

    @property
    def axis_name(self) -> str:
        return "l_over_e_km_per_gev" if self.model == "plane" else "x_km"

    def axis_values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)

    def columns(self) -> tuple[str, ...]:
        cols = []
        for qid in self.quantities:
            if qid in _BUDGETS:
                _, identity_id, sub = _BUDGETS[qid]
                cols.extend(_budget_term_names(identity_id, sub))
                cols.append(f"{qid}_closure")
            else:
                cols.append(qid)
        return tuple(cols)


@dataclass(frozen=True)
class ScanRow:
    axis_value: float
    values: tuple[float, ...]
    columns: tuple[str, ...]


# -------------------------------------------------------------- point worker

class _PointContext:
    """Lazy per-point cache shared by the requested quantity evaluators."""

    def __init__(self, req: ScanRequest, axis_value: float):
        self.req = req
        self.axis_value = axis_value

    @cached_property
    def amps(self):
        return evolve_amplitudes(self.req.initial_flavor, self.req.params,
                                 self.axis_value)

    @cached_property
    def fc(self):
        return flavor_coefficients(self.req.initial_flavor, self.axis_value,
                                   self.req.wp)

    @cached_property
    def rho(self):
        if self.req.model == "plane":
            return pure_density_matrix(self.amps)
        return mixed_density_matrix(self.fc)

    @cached_property
    def probs(self):
        if self.req.model == "plane":
            return transition_probabilities(self.amps)
        return tuple(wp_transition_probability(self.fc, f) for f in FLAVORS)

    @cached_property
    def suite(self):
        if self.req.model == "plane":
            return ccr.pure_budget_suite(self.amps)
        return ccr.mixed_budget_suite(self.fc)

    @cached_property
    def suite_values(self) -> dict[str, float]:
        return {name: value for b in self.suite for name, value in b.terms}

    @cached_property
    def closures(self) -> dict[tuple[str, str], float]:
        return {(b.identity_id, b.subsystem): b.closure_error
                for b in self.suite}

    @cached_property
    def genuine(self) -> float:
        if self.req.model == "plane":
            return ccr.genuine_tripartite_entanglement(self.amps)
        return ccr.genuine_tripartite_discord(self.fc)

    def subsystem_entropy(self, labels) -> float:
        return vn_entropy(partial_trace(self.rho, labels))


#: subsystem name -> label tuple, e.g. "emu" -> ("e", "mu")
_SUBSYSTEM_LABELS = {subsystem_id(ls): ls for ls in
                     [(f,) for f in FLAVORS] + list(PAIRS)}


def _scalar_value(ctx: _PointContext, qid: str) -> float:
    if qid.startswith("prob_"):
        return ctx.probs[FLAVORS.index(qid[len("prob_"):])]
    if qid == "purity":
        return ctx.rho.purity()
    if qid in ("S_G", "QD_G"):
        return ctx.genuine
    if qid.startswith("C_hs_nl_"):
        return nonlocal_coherence_hs_tripartite(ctx.rho, qid[len("C_hs_nl_"):])
    if qid.startswith("QD_") and not qid.startswith("QD_R_"):
        sub = qid[len("QD_"):]
        return ctx.suite_values[f"I_{sub}"] + ctx.suite_values[f"S_cond_{sub}"]
    if qid in ctx.suite_values:
        return ctx.suite_values[qid]
    if qid.startswith("S_vn_"):
        # wavepacket subsystem entropies are not among the budget terms
        return ctx.subsystem_entropy(_SUBSYSTEM_LABELS[qid[len("S_vn_"):]])
    raise KeyError(qid)


def _evaluate_point(req: ScanRequest, columns, axis_value: float) -> ScanRow:
    ctx = _PointContext(req, axis_value)
    try:
        values = []
        for qid in req.quantities:
            if qid in _BUDGETS:
                _, identity_id, sub = _BUDGETS[qid]
                for term in _budget_term_names(identity_id, sub):
                    values.append(ctx.suite_values[term])
                values.append(ctx.closures[(identity_id, sub)])
            else:
                values.append(_scalar_value(ctx, qid))
    except ScanError:
        raise
    except Exception as exc:
        raise ScanError(axis_value, str(exc)) from exc
    for col, v in zip(columns, values):
        if not math.isfinite(v):
            raise ScanError(axis_value, f"non-finite value for {col}")
    return ScanRow(float(axis_value), tuple(float(v) for v in values), columns)


def run_scan(req: ScanRequest, max_workers: int | None = None) -> list[ScanRow]:
    """Evaluate the request over its grid, rows in ascending axis order.

    Points are independent; with `max_workers` > 1 they are evaluated by a
    thread pool, and the output is identical to the sequential run.
    """
    columns = req.columns()
    axis = req.axis_values()
    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(lambda x: _evaluate_point(req, columns, x), axis))
    else:
        rows = [_evaluate_point(req, columns, x) for x in axis]
    return rows


# ------------------------------------------------------------------ emission

def format_csv(rows: list[ScanRow]) -> str:
    """CSV text: header `axis,<columns>`, 13 significant digits, LF newlines."""
    if not rows:
        raise ValueError("no rows to emit")
    columns = rows[0].columns
    lines = ["axis," + ",".join(columns)]
    for row in rows:
        if row.columns != columns:
            raise ValueError("rows carry inconsistent columns")
        cells = [CSV_FORMAT % row.axis_value]
        for v in row.values:
            if not math.isfinite(v):
                raise ValueError(f"non-finite value at axis {row.axis_value}")
            cells.append(CSV_FORMAT % v)
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def emit_csv(rows: list[ScanRow], path) -> None:
    """Write rows to `path` as CSV (see format_csv)."""
    text = format_csv(rows)
    try:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def emit_plot(rows: list[ScanRow], path, axis_label: str = "axis") -> None:
    """Write a self-contained vector plot (SVG unless the suffix says otherwise),
    one polyline per column, legend from the column names."""
    if not rows:
        raise ValueError("no rows to emit")
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    axis = [r.axis_value for r in rows]
    columns = rows[0].columns
    fig, ax = plt.subplots(figsize=(9, 5.5))
    for i, name in enumerate(columns):
        ax.plot(axis, [r.values[i] for r in rows], lw=1.0, label=name)
    ax.set_xlabel(axis_label)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize="small", ncol=2)
    fig.tight_layout()
    suffix = str(path).rsplit(".", 1)
    fmt = suffix[1].lower() if len(suffix) == 2 and suffix[1] else "svg"
    if fmt not in ("svg", "pdf"):
        fmt = "svg"
    try:
        fig.savefig(path, format=fmt)
    except OSError as exc:
        raise OSError(f"cannot write plot to {path}: {exc}") from exc
    finally:
        plt.close(fig)


# --------------------------------------------------------------------- audit

@dataclass(frozen=True)
class AuditCheck:
    name: str
    threshold: float
    worst: float
    worst_axis: float
    passed: bool


@dataclass(frozen=True)
class AuditReport:
    model: str
    initial_flavor: str
    points: int
    checks: tuple[AuditCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def format_table(self) -> str:
        width = max(len(c.name) for c in self.checks)
        lines = [f"audit: model={self.model} flavor={self.initial_flavor} "
                 f"points={self.points}"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"  {status}  {c.name:<{width}}  worst={c.worst:.3e} "
                         f"(limit {c.threshold:.1e}) at axis={c.worst_axis:.6g}")
        lines.append("audit result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


class _Worst:
    __slots__ = ("value", "axis")

    def __init__(self):
        self.value = 0.0
        self.axis = 0.0

    def update(self, value: float, axis: float):
        if value > self.value:
            self.value = value
            self.axis = axis


_PERMUTATIONS = (
    ("e", "mu", "tau"), ("e", "tau", "mu"), ("mu", "e", "tau"),
    ("mu", "tau", "e"), ("tau", "e", "mu"), ("tau", "mu", "e"),
)


def audit(req: ScanRequest, state_transform=None) -> AuditReport:
    """Evaluate every applicable budget and invariant over the grid.

    `state_transform(entries, axis_value) -> entries` lets tests inject a
    corrupted state; when it is given, only the state sanity checks run (the
    budgets are functions of the untouched domain objects, so a corrupted
    matrix cannot flow into them) and the report flags the violation.
    """
    trackers: dict[str, tuple[float, _Worst]] = {}

    def track(name: str, threshold: float, value: float, axis: float):
        if name not in trackers:
            trackers[name] = (threshold, _Worst())
        trackers[name][1].update(value, axis)

    spread_total = 0
    spread_distinct = 0
    prev_purity = None

    for x in req.axis_values():
        if req.model == "plane":
            amps = evolve_amplitudes(req.initial_flavor, req.params, x)
            rho = pure_density_matrix(amps)
            probs = transition_probabilities(amps)
        else:
            fc = flavor_coefficients(req.initial_flavor, x, req.wp)
            rho = mixed_density_matrix(fc)
            probs = tuple(wp_transition_probability(fc, f) for f in FLAVORS)

        entries = np.array(rho.entries)
        if state_transform is not None:
            entries = state_transform(entries, x)
        track("state_trace", 1e-10, abs(entries.trace().real - 1.0), x)
        herm = float(np.abs(entries - entries.conj().T).max())
        track("state_hermiticity", 1e-12, herm, x)
        if herm <= 1e-12:
            values, _ = jacobi_eigh(entries)
            track("state_psd", 1e-10, max(0.0, -float(values.min())), x)
        track("prob_sum", 1e-10, abs(sum(probs) - 1.0), x)

        if state_transform is not None:
            continue

        view = ccr._StateView(rho)
        suite = (ccr._pure_suite(view) if req.model == "plane"
                 else ccr._mixed_suite(view))
        for b in suite:
            track(f"closure_{b.identity_id}", 1e-9, b.closure_error, x)

        residuals = [view.residual(f) for f in FLAVORS]
        if x > 0:  # the x = 0 product state is trivially symmetric
            spread_total += 1
            if max(residuals) - min(residuals) > 1e-9:
                spread_distinct += 1

        base = sum(residuals) / 3.0
        perm_err = 0.0
        for perm in _PERMUTATIONS[1:]:
            g = ccr.genuine_residual_average(permute_qubits(rho, perm))
            perm_err = max(perm_err, abs(g - base))
        track("genuine_permutation", 1e-12, perm_err, x)

        if req.model == "plane":
            track("purity_pure", 1e-12, abs(rho.purity() - 1.0), x)
            for f in FLAVORS:
                others = [o for o in FLAVORS if o != f]
                nl = nonlocal_coherence_hs_tripartite(rho, f)
                split = sum(coherence_hs(view.reduction((f, o))) for o in others)
                track("hs_additivity", 1e-10, abs(nl - split), x)
                track("polygamy", 1e-10, view.residual(f), x)
            s_full = view.entropy(FLAVORS)
            via_bipart = sum(s_full - view.entropy(tuple(o for o in FLAVORS if o != f))
                             for f in FLAVORS) / 3.0
            track("route_agreement", 1e-10, abs(base - via_bipart), x)
        else:
            purity = rho.purity()
            if prev_purity is not None:
                track("purity_monotone", 1e-12, purity - prev_purity, x)
            prev_purity = purity

    if state_transform is None and spread_total:
        frac = spread_distinct / spread_total
        track("residual_spread", 0.1, 1.0 - frac, req.stop)

    checks = tuple(
        AuditCheck(name, thr, w.value, w.axis, w.value <= thr)
        for name, (thr, w) in sorted(trackers.items()))
    return AuditReport(req.model, req.initial_flavor, req.points, checks)
