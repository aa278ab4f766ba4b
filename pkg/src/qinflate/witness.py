"""Incompatibility witnesses for the triangle network.

Builds the inclusion-exclusion operator Delta from subset marginals, the cut
witnesses I_xy (quantum and classical), renders verdicts, and implements the
structural checks used throughout: support/kernel intersection, the
antiunitary decomposition of Delta for pure three-qubit states, fidelity
flags, and the closed-form spectra of the named state families.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

import numpy as np

from .errors import (
    DimensionError,
    InconsistentMarginals,
    InvalidParameter,
    MissingMarginal,
    OddCardinalityRequired,
    UnknownLabel,
)
from .linalg import (
    VERDICT_TOL,
    DensityMatrix,
    HermitianOperator,
    Spectrum,
    SubsystemLayout,
    embed,
    hermitian_eig,
    identity,
    kron,
    partial_trace,
    permute_subsystems,
    subspace_intersects,
    support_kernel_projectors,
)
from .states import (
    Distribution,
    PureState,
    ghz_state,
    nu_decomposition,
    qutrit_pair,
    schmidt224,
    tri_bell,
    w_state,
)

EQUIMARGINAL_TOL = 1e-8
CLUSTER_TOL = 1e-7


@dataclass(frozen=True)
class _UnvalidatedState:
    """Duck-typed stand-in for DensityMatrix that skips the PSD check."""

    op: HermitianOperator

    @property
    def layout(self) -> SubsystemLayout:
        return self.op.layout

    @property
    def entries(self) -> np.ndarray:
        return self.op.entries


@dataclass(frozen=True)
class WitnessOperator:
    """Hermitian witness with its spectrum computed at construction."""

    op: HermitianOperator
    kind: str
    spectrum: Spectrum = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "spectrum", hermitian_eig(self.op))

    @property
    def layout(self) -> SubsystemLayout:
        return self.op.layout

    @property
    def entries(self) -> np.ndarray:
        return self.op.entries

    def min_eigenvalue(self) -> float:
        return float(self.spectrum.eigenvalues[0])

    def eigenvalue_clusters(self, tol: float = CLUSTER_TOL) -> list[tuple[float, int]]:
        """Ascending (value, multiplicity) pairs, grouping eigenvalues within tol."""
        clusters: list[list[float]] = []
        for lam in self.spectrum.eigenvalues:
            if clusters and lam - clusters[-1][-1] <= tol:
                clusters[-1].append(float(lam))
            else:
                clusters.append([float(lam)])
        return [(float(np.mean(c)), len(c)) for c in clusters]


@dataclass(frozen=True)
class Evidence:
    """Certificate attached to a witnessed-incompatible verdict."""

    kind: str
    min_value: float
    vector: Optional[np.ndarray] = None
    outcome: Optional[tuple[int, ...]] = None


@dataclass(frozen=True)
class Verdict:
    """Either witnessed incompatibility (with evidence) or no conclusion."""

    status: str  # "witnessed_incompatible" | "inconclusive"
    evidence: Optional[Evidence] = None

    @property
    def witnessed(self) -> bool:
        return self.status == "witnessed_incompatible"


def _full_layout_from_marginals(
    marginals: Mapping[frozenset, DensityMatrix]
) -> SubsystemLayout:
    labels = sorted(set().union(*(set(k) for k in marginals if k)))
    dims = []
    for lab in labels:
        key = frozenset({lab})
        if key not in marginals:
            raise MissingMarginal(f"missing singleton marginal for {lab!r}")
        dims.append(marginals[key].layout.total_dim)
    return SubsystemLayout(tuple(dims), tuple(labels))


def _check_equimarginal(marginals: Mapping[frozenset, DensityMatrix]) -> None:
    for key, rho in marginals.items():
        for lab in key:
            sub = key - {lab}
            if not sub or sub not in marginals:
                continue
            reduced = partial_trace(rho.op, sub)
            reduced = permute_subsystems(reduced, marginals[sub].layout.labels)
            dev = np.max(np.abs(reduced.entries - marginals[sub].entries))
            if dev > EQUIMARGINAL_TOL:
                raise InconsistentMarginals(
                    f"marginal of {sorted(key)} on {sorted(sub)} deviates by {dev:.3e}"
                )


def hall_delta(marginals: Mapping[frozenset, DensityMatrix]) -> WitnessOperator:
    """Alternating-sign sum of subset marginals, tensored with identities.

    Delta = sum over proper subsets X of the node set of (-1)^|X| sigma_X (x) 1,
    the empty set contributing +1. Positive semidefinite whenever the
    marginals come from a single joint state on an odd number of nodes.
    """
    marginals = {frozenset(k): v for k, v in marginals.items() if k}
    full = _full_layout_from_marginals(marginals)
    n = full.n_subsystems
    if n % 2 == 0:
        raise OddCardinalityRequired(f"need an odd number of nodes, got {n}")
    for r in range(1, n):
        for combo in itertools.combinations(full.labels, r):
            if frozenset(combo) not in marginals:
                raise MissingMarginal(f"missing marginal for {combo}")
    _check_equimarginal(marginals)
    acc = identity(full)
    for key, rho in marginals.items():
        sign = -1.0 if len(key) % 2 else 1.0
        acc = acc + sign * embed(rho.op, full)
    return WitnessOperator(acc, "hall_delta")


def marginals_of(rho: DensityMatrix) -> dict[frozenset, DensityMatrix]:
    """All proper nonempty subset marginals of a joint state."""
    labels = rho.layout.labels
    out: dict[frozenset, DensityMatrix] = {}
    for r in range(1, len(labels)):
        for combo in itertools.combinations(labels, r):
            out[frozenset(combo)] = DensityMatrix(partial_trace(rho.op, set(combo)))
    return out


def _dist_marginal_axes(
    marginals: Mapping[frozenset, Distribution], n: int
) -> dict[frozenset, Distribution]:
    out = {frozenset(int(i) for i in k): v for k, v in marginals.items() if k}
    for key in out:
        if any(i < 0 or i >= n for i in key):
            raise UnknownLabel(f"variable positions {sorted(key)} out of range")
    return out


def classical_delta(
    marginals: Mapping[frozenset, Distribution]
) -> np.ndarray:
    """Pointwise 1 - sum(singles) + sum(pairs) over the full outcome space.

    Marginals are keyed by frozensets of variable positions (0-based).
    """
    keys = [frozenset(k) for k in marginals if k]
    n = max(max(k) for k in keys) + 1
    margs = _dist_marginal_axes(marginals, n)
    dims = [0] * n
    for i in range(n):
        key = frozenset({i})
        if key not in margs:
            raise MissingMarginal(f"missing singleton marginal for variable {i}")
        dims[i] = margs[key].outcome_dims[0]
    for r in range(1, n):
        for combo in itertools.combinations(range(n), r):
            if frozenset(combo) not in margs:
                raise MissingMarginal(f"missing marginal for variables {combo}")
    # equimarginal consistency between pairs and singletons
    for key, d in margs.items():
        for i in key:
            sub = key - {i}
            if not sub or sub not in margs:
                continue
            pos = sorted(key)
            reduced = d.tensor.sum(axis=pos.index(i))
            dev = np.max(np.abs(reduced.reshape(-1) - margs[sub].probs))
            if dev > 1e-10:
                raise InconsistentMarginals(
                    f"marginal of {pos} on {sorted(sub)} deviates by {dev:.3e}"
                )
    acc = np.ones(tuple(dims))
    for key, d in margs.items():
        sign = -1.0 if len(key) % 2 else 1.0
        shape = tuple(dims[i] if i in key else 1 for i in range(n))
        acc = acc + sign * d.tensor.reshape(shape)
    return acc


def cut_witness_quantum(
    rho: Union[DensityMatrix, HermitianOperator], cut: tuple[str, str]
) -> WitnessOperator:
    """I_xy = 1 - rho_x - rho_y - rho_z + rho_x (x) rho_y + rho_xz + rho_yz.

    Materialized on the alphabetically sorted label order, so matrices print
    in the canonical product basis regardless of the cut. A raw unit-trace
    Hermitian operator is accepted so spectrum identities can be checked on
    family members outside the PSD range.
    """
    if isinstance(rho, HermitianOperator):
        if abs(rho.trace() - 1.0) > 1e-10:
            raise InvalidParameter(f"trace is {rho.trace()!r}, expected 1")
        rho = _UnvalidatedState(rho)
    if rho.layout.n_subsystems != 3:
        raise DimensionError("cut witness needs exactly three subsystems")
    x, y = cut
    if x == y:
        raise UnknownLabel(f"cut labels must differ, got ({x}, {y})")
    labels = rho.layout.labels
    for lab in (x, y):
        if lab not in labels:
            raise UnknownLabel(f"cut label {lab!r} not in layout {labels}")
    (z,) = [lab for lab in labels if lab not in (x, y)]
    full = rho.layout.sorted()
    m = {s: partial_trace(rho.op, set(s)) for s in ((x,), (y,), (z,), (x, z), (y, z))}
    prod_xy = kron(m[(x,)], m[(y,)])
    acc = identity(full)
    for term in ((x,), (y,), (z,)):
        acc = acc - embed(m[term], full)
    for term in ((x, z), (y, z)):
        acc = acc + embed(m[term], full)
    acc = acc + embed(prod_xy, full)
    return WitnessOperator(acc, f"cut:{x}{y}")


def cut_witness_classical(p: Distribution, cut: tuple[str, str]) -> np.ndarray:
    """Pointwise cut inequality tensor for a three-variable distribution.

    Variables are addressed by the letters A, B, C in tensor-axis order.
    """
    if len(p.outcome_dims) != 3:
        raise DimensionError("classical cut witness needs exactly three variables")
    labels = string.ascii_uppercase[:3]
    x, y = cut
    if x == y or x not in labels or y not in labels:
        raise UnknownLabel(f"cut ({x}, {y}) must name two distinct variables of {labels}")
    ax, ay = labels.index(x), labels.index(y)
    (az,) = [i for i in range(3) if i not in (ax, ay)]
    t = p.tensor
    dims = p.outcome_dims

    def single(i: int) -> np.ndarray:
        shape = tuple(dims[j] if j == i else 1 for j in range(3))
        return t.sum(axis=tuple(k for k in range(3) if k != i)).reshape(shape)

    def pair(i: int, j: int) -> np.ndarray:
        drop = [k for k in range(3) if k not in (i, j)][0]
        shape = tuple(dims[k] if k != drop else 1 for k in range(3))
        return t.sum(axis=drop).reshape(shape)

    return (
        np.ones(dims)
        - single(ax)
        - single(ay)
        - single(az)
        + single(ax) * single(ay)
        + pair(min(ax, az), max(ax, az))
        + pair(min(ay, az), max(ay, az))
    )


def verdict(
    w: Union[WitnessOperator, np.ndarray], tol: float = VERDICT_TOL
) -> Verdict:
    """Witnessed incompatibility iff the minimum eigenvalue/entry is < -tol.

    A nonnegative witness is never proof of compatibility, hence the
    inconclusive branch carries no evidence.
    """
    if isinstance(w, WitnessOperator):
        lam = w.min_eigenvalue()
        if lam < -tol:
            vec = w.spectrum.eigenvectors[:, 0]
            return Verdict(
                "witnessed_incompatible", Evidence(w.kind, lam, vector=vec)
            )
        return Verdict("inconclusive")
    t = np.asarray(w, dtype=float)
    lo = float(t.min())
    if lo < -tol:
        outcome = tuple(int(i) for i in np.unravel_index(int(t.argmin()), t.shape))
        return Verdict(
            "witnessed_incompatible",
            Evidence("classical", lo, outcome=outcome),
        )
    return Verdict("inconclusive")


def supp_ker_test(rho: DensityMatrix, cut: tuple[str, str]) -> bool:
    """True iff supp(nu_minus (x) 1_z) meets ker(Delta of the marginals)."""
    if rho.layout.n_subsystems != 3:
        raise DimensionError("support/kernel test needs exactly three subsystems")
    x, y = cut
    (z,) = [lab for lab in rho.layout.labels if lab not in (x, y)]
    nu = nu_decomposition(rho, x, y)
    full = rho.layout.sorted()
    nu_minus_full = embed(nu.nu_minus, full)
    if nu_minus_full.trace() < 1e-12:
        return False
    p_nu, _ = support_kernel_projectors(nu_minus_full)
    delta = hall_delta(marginals_of(rho))
    _, p_ker = support_kernel_projectors(delta.op)
    return subspace_intersects(p_nu, p_ker)


def pure_delta_structure(psi: PureState) -> HermitianOperator:
    """Conjugate of a pure three-qubit projector by the spin-flip antiunitary.

    The antiunitary sends sum a_ijk |ijk> to sum (-1)^(i+j+k) conj(a_ijk)
    |i' j' k'> with flipped bits. The returned operator satisfies
    Delta(marginals of rho) = rho + result, which is checked here.
    """
    if psi.layout.dims != (2, 2, 2):
        raise DimensionError("antiunitary decomposition is defined for three qubits")
    a = psi.amplitudes
    flipped = np.zeros(8, dtype=complex)
    for idx in range(8):
        parity = bin(idx).count("1") % 2
        flipped[idx ^ 7] = (-1.0) ** parity * np.conj(a[idx])
    conj = np.outer(flipped, flipped.conj())
    out = HermitianOperator(psi.layout, conj)
    rho = psi.to_density()
    delta = hall_delta(marginals_of(rho))
    delta_sorted = permute_subsystems(delta.op, psi.layout.labels)
    dev = np.max(np.abs(delta_sorted.entries - (rho.entries + conj)))
    if dev > 1e-9:
        raise InvalidParameter(f"antiunitary decomposition deviates by {dev:.3e}")
    return out


GHZ_FIDELITY_THRESHOLD = (1 + np.sqrt(3)) / 4
W_FIDELITY_THRESHOLD = 0.7602


def fidelity_witness(rho: DensityMatrix) -> tuple[float, float, bool]:
    """GHZ and W fidelities plus the flag of the fidelity-based sufficient test."""
    if rho.layout.dims != (2, 2, 2):
        raise DimensionError("fidelity witness is defined for three qubits")
    m = permute_subsystems(rho.op, ("A", "B", "C")) if rho.layout.labels != (
        "A",
        "B",
        "C",
    ) else rho.op
    f_ghz = float(np.real(ghz_state().amplitudes.conj() @ m.entries @ ghz_state().amplitudes))
    f_w = float(np.real(w_state().amplitudes.conj() @ m.entries @ w_state().amplitudes))
    flagged = f_ghz >= GHZ_FIDELITY_THRESHOLD or f_w >= W_FIDELITY_THRESHOLD
    return f_ghz, f_w, flagged


def tri_bell_cubic(t: float) -> tuple[tuple[float, float, float], np.ndarray, float]:
    """Monic cubic whose roots, divided by t^2, are the nontrivial I_AB eigenvalues.

    Returns (coefficients (b, c, d) of x^3 + b x^2 + c x + d, real roots
    ascending, product of roots by Vieta).
    """
    from .errors import DomainError

    t = float(t)
    if t <= 2:
        raise DomainError(f"parameter t={t} must exceed 2")
    b = -t * t + t - 2
    c = t**3 - 5 * t**2 + 8 * t - 4
    d = t**4 - 5 * t**3 + 14 * t**2 - 20 * t + 8
    roots = _real_cubic_roots(b, c, d)
    return (b, c, d), roots, -d


def _real_cubic_roots(b: float, c: float, d: float) -> np.ndarray:
    """All-real roots of x^3 + b x^2 + c x + d via the trigonometric method."""
    p = c - b * b / 3
    q = 2 * b**3 / 27 - b * c / 3 + d
    shift = -b / 3
    if abs(p) < 1e-14:
        r = np.cbrt(-q)
        return np.sort(np.array([r, r, r]) + shift)
    m = 2 * np.sqrt(max(-p, 0.0) / 3)
    arg = np.clip(3 * q / (p * m), -1.0, 1.0)
    theta = np.arccos(arg) / 3
    roots = m * np.cos(theta - 2 * np.pi * np.arange(3) / 3) + shift
    return np.sort(roots)


def tri_bell_eigs(t: float) -> np.ndarray:
    """Closed-form ascending spectrum of I_AB on the tri-Bell state at t."""
    _, roots, _ = tri_bell_cubic(t)
    vals = np.concatenate([roots / t**2, [(t - 2) / t**2]])
    return np.sort(np.repeat(vals, 2))


def schmidt224_entry(
    alpha0: float,
    alpha4: float,
    alpha5: float,
    alpha6: float,
    alpha7: float,
    phi0: float = 0.0,
) -> float:
    """<010| I_AC |010> for the qubit-qubit-ququart family, equal to
    -alpha0^2 (1 - alpha0^2 - alpha4^2); cross-checked against the assembled
    witness."""
    psi = schmidt224(
        (alpha0, 0.0, 0.0, 0.0, alpha4, alpha5, alpha6, alpha7),
        phi0=phi0,
        enforce_ordering=False,
    )
    w = cut_witness_quantum(psi.to_density(), ("A", "C"))
    entry = float(np.real(w.entries[4, 4]))  # |010> in the (2,2,4) product basis
    closed = -(alpha0**2) * (1 - alpha0**2 - alpha4**2)
    if abs(entry - closed) > 1e-9:
        raise InvalidParameter(
            f"assembled entry {entry!r} deviates from closed form {closed!r}"
        )
    return entry


def werner_ghz_eigs(p: float) -> np.ndarray:
    """Closed-form ascending I_xy spectrum for GHZ mixed with white noise."""
    vals = [0.25] * 4 + [(1 - 2 * p) / 4] * 2 + [(1 + 2 * p) / 4] * 2
    return np.sort(np.array(vals))


def werner_w_eigs(p: float) -> np.ndarray:
    """Closed-form ascending I_xy spectrum for the W state mixed with white noise."""
    s = np.sqrt(297 * p**2 + 6 * p**3 + p**4)
    vals = [
        (9 - p * p) / 36,
        (9 - 6 * p + p * p) / 36,
        (9 + 3 * p + s) / 36,
        (9 + 3 * p - s) / 36,
    ]
    return np.sort(np.repeat(vals, 2))


@dataclass(frozen=True)
class WernerReport:
    """Noise thresholds below which the cut witnesses stay positive."""

    ghz_threshold: float
    w_threshold: float


def _bisect_crossing(f, lo: float, hi: float, iters: int = 60) -> float:
    """Locate the sign change of a decreasing function on [lo, hi]."""
    for _ in range(iters):
        mid = (lo + hi) / 2
        if f(mid) >= 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def werner_thresholds() -> WernerReport:
    """Critical noise parameters where the closed-form minimum eigenvalue crosses 0."""
    ghz = _bisect_crossing(lambda p: float(werner_ghz_eigs(p)[0]), 0.0, 1.0)
    w = _bisect_crossing(lambda p: float(werner_w_eigs(p)[0]), 0.0, 1.0)
    return WernerReport(ghz, w)


def toth_acin_eigs(c: float) -> np.ndarray:
    """Closed-form ascending I_AB spectrum of the Pauli-diagonal family at c."""
    c = float(c)
    s = 2 * np.sqrt(4 + 6 * c + 9 * c * c)
    vals = [(8 - 3 * c) / 24] * 4 + [(4 + 3 * c - s) / 24] * 2 + [(4 + 3 * c + s) / 24] * 2
    return np.sort(np.array(vals))


QUTRIT_MIXED_REFERENCE = np.sort(
    np.concatenate([[7 / 9] * 3, [4 / 9] * 12, [1 / 9] * 12])
)


@dataclass(frozen=True)
class QutritReport:
    """Cut-witness spectra for the qutrit superposition/mixture pair."""

    pure_spectra: dict[str, np.ndarray]
    mixed_spectra: dict[str, np.ndarray]
    mixed_matches_reference: bool
    pure_verdicts: dict[str, Verdict]


def qutrit_witnesses(p0: float, p1: float) -> QutritReport:
    """Spectra of all three cut witnesses for the qutrit pair at (p0, p1).

    The mixed-state spectra are independent of the weights; deviation from
    the reference spectrum beyond 1e-9 raises.
    """
    pure, mixed = qutrit_pair(p0, p1)
    cuts = {"AB": ("A", "B"), "AC": ("A", "C"), "BC": ("B", "C")}
    pure_spec: dict[str, np.ndarray] = {}
    mixed_spec: dict[str, np.ndarray] = {}
    verdicts: dict[str, Verdict] = {}
    ok = True
    rho_pure = pure.to_density()
    for name, cut in cuts.items():
        wp = cut_witness_quantum(rho_pure, cut)
        wm = cut_witness_quantum(mixed, cut)
        pure_spec[name] = wp.spectrum.eigenvalues
        mixed_spec[name] = wm.spectrum.eigenvalues
        verdicts[name] = verdict(wp)
        if np.max(np.abs(mixed_spec[name] - QUTRIT_MIXED_REFERENCE)) > 1e-9:
            ok = False
    if not ok:
        raise InvalidParameter("mixed-state spectrum deviates from the reference")
    return QutritReport(pure_spec, mixed_spec, ok, verdicts)
