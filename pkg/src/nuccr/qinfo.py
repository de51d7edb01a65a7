"""Quantum-information primitives on small multi-qubit density matrices.

Conventions used throughout:

* A state lives on an ordered tuple of qubit labels, e.g. ("e", "mu", "tau").
  The first label is the most significant bit of the basis index, so for the
  flavor-mode triple the occupancy states are |100> -> index 4, |010> -> 2,
  |001> -> 1.
* All entropies and entropy-like measures are in bits (log base 2).
* Eigenvalues in [-EIG_CLAMP, 0) are treated as zero; anything below
  -EIG_CLAMP is a positivity violation and raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import atan2, cos, log2, sin

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
EIG_CLAMP = 1e-10

JACOBI_OFF_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


class ConvergenceError(RuntimeError):
    """The Jacobi sweep limit was hit; the input is non-Hermitian or corrupted."""


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace matrix over an ordered set of qubit modes.

    Positivity is not checked at construction (that would cost a full
    eigendecomposition per intermediate state); it is enforced wherever a
    spectrum is actually consumed, via the EIG_CLAMP window.
    """

    entries: np.ndarray
    qubit_labels: tuple[str, ...]

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        labels = tuple(self.qubit_labels)
        d = 2 ** len(labels)
        if m.shape != (d, d):
            raise ValueError(f"expected a {d}x{d} matrix for {len(labels)} "
                             f"qubits, got {m.shape}")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate qubit labels {labels}")
        herm = np.abs(m - m.conj().T).max()
        if herm > HERMITICITY_TOL:
            raise ValueError(f"matrix not Hermitian: max |m - m^dag| = {herm:.3e}")
        trace_gap = abs(m.trace().real - 1.0)
        if trace_gap > TRACE_TOL or abs(m.trace().imag) > TRACE_TOL:
            raise ValueError(f"trace deviates from 1 by {trace_gap:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "qubit_labels", labels)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def purity(self) -> float:
        return float(np.vdot(self.entries, self.entries).real)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order plus the worst eigenpair residual."""

    eigenvalues: tuple[float, ...]
    residual: float


def jacobi_eigh(matrix, tol: float = JACOBI_OFF_TOL,
                max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigen-decompose a Hermitian matrix with cyclic complex Jacobi rotations.

    Returns (values, vectors) with vectors in columns, unordered.  Rows whose
    off-diagonal part is exactly zero are split off first as finished
    eigenpairs, which keeps the scan-sized inputs (mostly 3x3 blocks embedded
    in 8x8 zeros) cheap.  Raises ConvergenceError if the off-diagonal norm is
    not below `tol` within `max_sweeps` sweeps.
    """
    m = np.asarray(matrix, dtype=complex)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError(f"expected a square matrix, got {m.shape}")

    values = np.zeros(n)
    vectors = np.zeros((n, n), dtype=complex)
    active = [i for i in range(n)
              if any(m[i, j] != 0 for j in range(n) if j != i)]
    done = [i for i in range(n) if i not in set(active)]
    for i in done:
        values[i] = m[i, i].real
        vectors[i, i] = 1.0
    if not active:
        return values, vectors

    k = len(active)
    a = [[complex(m[p, q]) for q in active] for p in active]
    v = [[1.0 + 0j if i == j else 0j for j in range(k)] for i in range(k)]

    for _ in range(max_sweeps):
        off = 0.0
        for p in range(k - 1):
            row = a[p]
            for q in range(p + 1, k):
                x = row[q]
                off += x.real * x.real + x.imag * x.imag
        if (2.0 * off) ** 0.5 <= tol:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = a[p][q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                # Unitary rotation in the (p, q) plane annihilating a[p][q]:
                # angle from tan(2*theta) = 2|apq| / (app - aqq), phase from
                # arg(apq).
                ph = apq / mag
                theta = 0.5 * atan2(2.0 * mag, (a[p][p] - a[q][q]).real)
                c = cos(theta)
                s = sin(theta)
                sp = s * ph
                spc = sp.conjugate()
                for i in range(k):
                    row = a[i]
                    aip, aiq = row[p], row[q]
                    row[p] = c * aip + spc * aiq
                    row[q] = -sp * aip + c * aiq
                ap, aq = a[p], a[q]
                for i in range(k):
                    api, aqi = ap[i], aq[i]
                    ap[i] = c * api + sp * aqi
                    aq[i] = -spc * api + c * aqi
                for i in range(k):
                    row = v[i]
                    vip, viq = row[p], row[q]
                    row[p] = c * vip + spc * viq
                    row[q] = -sp * vip + c * viq
    else:
        raise ConvergenceError(
            f"Jacobi rotations did not converge in {max_sweeps} sweeps; "
            f"input is likely non-Hermitian or corrupted")

    for j, col in enumerate(active):
        values[col] = a[j][j].real
        for i, row in enumerate(active):
            vectors[row, col] = v[i][j]
    return values, vectors


def eigenvalues_hermitian(rho: DensityMatrix) -> Spectrum:
    """Full spectrum of a density matrix, descending, with residual check."""
    values, vectors = jacobi_eigh(rho.entries)
    resid = float(np.abs(rho.entries @ vectors - vectors * values[None, :]).max())
    order = np.argsort(values)[::-1]
    return Spectrum(tuple(float(values[i]) for i in order), resid)


def _clamped(values, context: str):
    out = []
    for lam in values:
        if lam < -EIG_CLAMP:
            raise ValueError(
                f"{context}: eigenvalue {lam:.3e} below -{EIG_CLAMP:.0e}, "
                f"state is not positive semidefinite")
        out.append(max(lam, 0.0))
    return out


def _entropy_bits(values) -> float:
    # 0*log(0) = 0 by convention
    return -sum(lam * log2(lam) for lam in values if lam > 0.0)


def vn_entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy in bits."""
    spec = eigenvalues_hermitian(rho)
    return _entropy_bits(_clamped(spec.eigenvalues, "vn_entropy"))


def vn_entropy_diag(rho: DensityMatrix) -> float:
    """Entropy of the dephased (diagonal) state, in bits."""
    diag = rho.entries.diagonal().real
    return _entropy_bits(_clamped(diag, "vn_entropy_diag"))


def predictability_hs(rho: DensityMatrix) -> float:
    """Hilbert-Schmidt predictability: sum of squared populations minus 1/d."""
    diag = rho.entries.diagonal().real
    return float((diag ** 2).sum() - 1.0 / rho.dim)


def coherence_hs(rho: DensityMatrix) -> float:
    """Hilbert-Schmidt coherence: sum of |off-diagonal|^2."""
    sq = np.abs(rho.entries) ** 2
    return float(sq.sum() - sq.diagonal().sum())


def relative_entropy_coherence(rho: DensityMatrix) -> float:
    """Relative entropy of coherence: S(diag(rho)) - S(rho)."""
    return vn_entropy_diag(rho) - vn_entropy(rho)


def predictability_vn(rho: DensityMatrix) -> float:
    """Entropic predictability: log2(d) - S(diag(rho))."""
    return log2(rho.dim) - vn_entropy_diag(rho)


def _positions(rho: DensityMatrix, labels) -> list[int]:
    pos = []
    for lab in labels:
        if lab not in rho.qubit_labels:
            raise ValueError(f"unknown qubit label {lab!r}; state has "
                             f"{rho.qubit_labels}")
        pos.append(rho.qubit_labels.index(lab))
    return pos


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every mode not in `keep` (a non-empty proper label subset).

    Kept modes stay in their original order.  Basis indices are decomposed
    MSB-first over the label tuple, so the reduction is pure index
    arithmetic.
    """
    keep = tuple(keep)
    if len(set(keep)) != len(keep):
        raise ValueError(f"duplicate labels in keep={keep}")
    keep_pos = sorted(_positions(rho, keep))
    n = len(rho.qubit_labels)
    if not keep_pos or len(keep_pos) == n:
        raise ValueError("keep must be a non-empty proper subset of the modes")
    tr_pos = [p for p in range(n) if p not in keep_pos]
    nk, nt = len(keep_pos), len(tr_pos)

    # bit p of an n-qubit index sits at shift n-1-p (MSB-first)
    def scatter(bits, positions):
        idx = 0
        for b, p in zip(bits, positions):
            idx |= b << (n - 1 - p)
        return idx

    m = rho.entries
    out = np.zeros((2 ** nk, 2 ** nk), dtype=complex)
    for ki in range(2 ** nk):
        kbits_i = [(ki >> (nk - 1 - t)) & 1 for t in range(nk)]
        base_i = scatter(kbits_i, keep_pos)
        for kj in range(2 ** nk):
            kbits_j = [(kj >> (nk - 1 - t)) & 1 for t in range(nk)]
            base_j = scatter(kbits_j, keep_pos)
            acc = 0j
            for t in range(2 ** nt):
                tbits = [(t >> (nt - 1 - u)) & 1 for u in range(nt)]
                off = scatter(tbits, tr_pos)
                acc += m[base_i | off, base_j | off]
            out[ki, kj] = acc
    labels = tuple(rho.qubit_labels[p] for p in keep_pos)
    return DensityMatrix(out, labels)


def permute_qubits(rho: DensityMatrix, order) -> DensityMatrix:
    """Relabel the mode order; the physical state is unchanged."""
    order = tuple(order)
    if sorted(order) != sorted(rho.qubit_labels):
        raise ValueError(f"{order} is not a permutation of {rho.qubit_labels}")
    n = len(order)
    src = [rho.qubit_labels.index(lab) for lab in order]

    def remap(idx):
        out = 0
        for newpos, oldpos in enumerate(src):
            bit = (idx >> (n - 1 - oldpos)) & 1
            out |= bit << (n - 1 - newpos)
        return out

    d = rho.dim
    new_index = [remap(i) for i in range(d)]
    out = np.zeros((d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            out[new_index[i], new_index[j]] = rho.entries[i, j]
    return DensityMatrix(out, order)


def nonlocal_coherence_hs_bipartite(rho: DensityMatrix) -> float:
    """Coherence shared between the two modes of a 2-qubit state.

    Index-restricted Hilbert-Schmidt sum: |rho_{ij,kl}|^2 over i!=k, j!=l,
    minus twice Re(rho_{ij,kj} rho_{il,kl}^*) over i!=k, j<l.
    """
    if len(rho.qubit_labels) != 2:
        raise ValueError(f"expected a 2-qubit state, got {rho.qubit_labels}")
    m = rho.entries

    def e(i, j, k, l):
        return m[2 * i + j, 2 * k + l]

    total = 0.0
    for i in range(2):
        for k in range(2):
            if i == k:
                continue
            for j in range(2):
                for l in range(2):
                    if j != l:
                        total += abs(e(i, j, k, l)) ** 2
            for j in range(2):
                for l in range(j + 1, 2):
                    total -= 2.0 * (e(i, j, k, j) * e(i, l, k, l).conjugate()).real
    return total


def nonlocal_coherence_hs_tripartite(rho: DensityMatrix, single: str) -> float:
    """Coherence the `single` mode shares with the other two, on a 3-qubit state."""
    if len(rho.qubit_labels) != 3:
        raise ValueError(f"expected a 3-qubit state, got {rho.qubit_labels}")
    if single != rho.qubit_labels[0]:
        rest = [lab for lab in rho.qubit_labels if lab != single]
        rho = permute_qubits(rho, (single, *rest))
    m = rho.entries

    def e(i, j, k, l, mm, nn):
        return m[4 * i + 2 * j + k, 4 * l + 2 * mm + nn]

    # The three index restrictions on each sum union to: rest-multi-index
    # (j,k) differs from (m,n) for the quadratic part, and (j,k) < (m,n)
    # lexicographically for the cross part.
    bc = [(j, k) for j in range(2) for k in range(2)]
    quad = 0.0
    cross = 0.0
    for i in range(2):
        for l in range(2):
            if i == l:
                continue
            for j, k in bc:
                for mm, nn in bc:
                    if (j, k) != (mm, nn):
                        quad += abs(e(i, j, k, l, mm, nn)) ** 2
                    if (j, k) < (mm, nn):
                        cross += (e(i, j, k, l, j, k)
                                  * e(i, mm, nn, l, mm, nn).conjugate()).real
    return quad - 2.0 * cross


def _complement(rho: DensityMatrix, part) -> tuple[str, ...]:
    part = tuple(part)
    pos = _positions(rho, part)
    if not pos or len(pos) == len(rho.qubit_labels):
        raise ValueError("part must be a non-empty proper subset of the modes")
    return tuple(lab for lab in rho.qubit_labels if lab not in set(part))


def mutual_information(rho: DensityMatrix, part) -> float:
    """I(part : rest) = S(part) + S(rest) - S(full), in bits."""
    rest = _complement(rho, part)
    return (vn_entropy(partial_trace(rho, part))
            + vn_entropy(partial_trace(rho, rest))
            - vn_entropy(rho))


def conditional_ignorance(rho: DensityMatrix, part) -> float:
    """S(part | rest) = S(full) - S(rest): what looking at `part` alone misses."""
    rest = _complement(rho, part)
    return vn_entropy(rho) - vn_entropy(partial_trace(rho, rest))


def discord_sum(rho: DensityMatrix, part) -> float:
    """Sum of the two non-local budget terms, I(part:rest) + S(part|rest).

    This is the closed-form identification of quantum discord used by the
    budget identities, not the measurement-optimized definition.
    """
    return mutual_information(rho, part) + conditional_ignorance(rho, part)
