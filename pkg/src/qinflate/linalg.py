"""Dense complex linear algebra over labelled tensor-product spaces.

Operators carry a :class:`SubsystemLayout` naming their tensor factors, so
partial traces, partial transposes and embeddings can be requested by label
rather than by axis bookkeeping at every call site.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionError,
    DuplicateLabel,
    InvalidParameter,
    NoConvergence,
    NotHermitian,
    NotProjector,
    UnknownLabel,
)

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
DEFAULT_RANK_TOL = 1e-8
DEFAULT_ANGLE_TOL = 1e-6
PROJECTOR_TOL = 1e-7

#: An operator counts as non-positive iff its minimum eigenvalue is below this.
VERDICT_TOL = 1e-8


@dataclass(frozen=True)
class SubsystemLayout:
    """Ordered local dimensions with distinct labels, e.g. (2,2,2) / (A,B,C)."""

    dims: tuple[int, ...]
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        if len(self.dims) != len(self.labels) or len(self.dims) < 1:
            raise DimensionError("layout needs one label per dimension, at least one")
        if any(d < 1 for d in self.dims):
            raise DimensionError(f"local dimensions must be >= 1, got {self.dims}")
        if len(set(self.labels)) != len(self.labels):
            raise DuplicateLabel(f"repeated labels in {self.labels}")

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def axis(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"label {label!r} not in layout {self.labels}") from None

    def dim_of(self, label: str) -> int:
        return self.dims[self.axis(label)]

    def restrict(self, keep: Iterable[str]) -> "SubsystemLayout":
        """Sub-layout of `keep`, preserving this layout's order."""
        keep = set(keep)
        for lab in keep:
            self.axis(lab)
        pairs = [(d, s) for d, s in zip(self.dims, self.labels) if s in keep]
        return SubsystemLayout(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    def sorted(self) -> "SubsystemLayout":
        """The same factors in alphabetical label order."""
        pairs = sorted(zip(self.labels, self.dims))
        return SubsystemLayout(tuple(p[1] for p in pairs), tuple(p[0] for p in pairs))


def _as_matrix(entries: np.ndarray | Sequence, side: int) -> np.ndarray:
    m = np.array(entries, dtype=complex)
    if m.shape != (side, side):
        raise DimensionError(f"expected a {side}x{side} matrix, got shape {m.shape}")
    return m


@dataclass(frozen=True)
class HermitianOperator:
    """Dense Hermitian matrix on the total space of `layout`."""

    layout: SubsystemLayout
    entries: np.ndarray

    def __post_init__(self) -> None:
        m = _as_matrix(self.entries, self.layout.total_dim)
        dev = np.max(np.abs(m - m.conj().T))
        if dev > HERMITICITY_TOL:
            raise NotHermitian(f"max deviation from conjugate transpose is {dev:.3e}")
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def side(self) -> int:
        return self.layout.total_dim

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def __add__(self, other: "HermitianOperator") -> "HermitianOperator":
        self._check_same_layout(other)
        return HermitianOperator(self.layout, self.entries + other.entries)

    def __sub__(self, other: "HermitianOperator") -> "HermitianOperator":
        self._check_same_layout(other)
        return HermitianOperator(self.layout, self.entries - other.entries)

    def __mul__(self, scalar: float) -> "HermitianOperator":
        return HermitianOperator(self.layout, self.entries * float(scalar))

    __rmul__ = __mul__

    def _check_same_layout(self, other: "HermitianOperator") -> None:
        if self.layout != other.layout:
            raise DimensionError(
                f"layout mismatch: {self.layout.labels} vs {other.layout.labels}"
            )


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace PSD Hermitian operator."""

    op: HermitianOperator

    def __post_init__(self) -> None:
        tr = self.op.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidParameter(f"trace is {tr!r}, expected 1")
        lo = float(np.linalg.eigvalsh(self.op.entries)[0])
        if lo < -PSD_TOL:
            raise InvalidParameter(f"minimum eigenvalue {lo:.3e} below -{PSD_TOL:.0e}")

    @property
    def layout(self) -> SubsystemLayout:
        return self.op.layout

    @property
    def entries(self) -> np.ndarray:
        return self.op.entries


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with a matched unitary of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def identity(layout: SubsystemLayout) -> HermitianOperator:
    return HermitianOperator(layout, np.eye(layout.total_dim))


def kron(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """Kronecker product; the result layout concatenates the operand layouts."""
    common = set(a.layout.labels) & set(b.layout.labels)
    if common:
        raise DuplicateLabel(f"labels {sorted(common)} appear on both operands")
    layout = SubsystemLayout(a.layout.dims + b.layout.dims, a.layout.labels + b.layout.labels)
    return HermitianOperator(layout, np.kron(a.entries, b.entries))


def _tensorized(x: HermitianOperator) -> np.ndarray:
    return x.entries.reshape(x.layout.dims * 2)


def permute_subsystems(x: HermitianOperator, new_labels: Sequence[str]) -> HermitianOperator:
    """Reorder the tensor factors of `x` to the given label order."""
    new_labels = tuple(new_labels)
    if sorted(new_labels) != sorted(x.layout.labels):
        raise UnknownLabel(f"{new_labels} is not a permutation of {x.layout.labels}")
    n = x.layout.n_subsystems
    perm = [x.layout.axis(lab) for lab in new_labels]
    t = _tensorized(x).transpose(perm + [n + p for p in perm])
    layout = SubsystemLayout(tuple(x.layout.dims[p] for p in perm), new_labels)
    d = layout.total_dim
    return HermitianOperator(layout, t.reshape(d, d))


def embed(x: HermitianOperator, full: SubsystemLayout) -> HermitianOperator:
    """Tensor `x` with identities on the factors of `full` it does not cover."""
    missing = [lab for lab in full.labels if lab not in x.layout.labels]
    for lab in x.layout.labels:
        if lab not in full.labels:
            raise UnknownLabel(f"label {lab!r} not in target layout {full.labels}")
        if full.dim_of(lab) != x.layout.dim_of(lab):
            raise DimensionError(f"dimension mismatch on label {lab!r}")
    out = x
    if missing:
        rest = SubsystemLayout(tuple(full.dim_of(s) for s in missing), tuple(missing))
        out = kron(x, identity(rest))
    return permute_subsystems(out, full.labels)


def partial_trace(x: HermitianOperator, keep: Iterable[str]) -> HermitianOperator:
    """Trace out every subsystem not in `keep`; kept factors stay in layout order."""
    keep = set(keep)
    for lab in keep:
        x.layout.axis(lab)
    n = x.layout.n_subsystems
    t = _tensorized(x)
    # trace axes from the back so earlier axis indices stay valid
    for ax in reversed(range(n)):
        if x.layout.labels[ax] not in keep:
            cur = t.ndim // 2
            t = np.trace(t, axis1=ax, axis2=cur + ax)
    layout = x.layout.restrict(keep)
    d = layout.total_dim
    return HermitianOperator(layout, t.reshape(d, d))


def partial_transpose(x: HermitianOperator, sub: str) -> HermitianOperator:
    """Transpose the single factor `sub`."""
    ax = x.layout.axis(sub)
    n = x.layout.n_subsystems
    axes = list(range(2 * n))
    axes[ax], axes[n + ax] = axes[n + ax], axes[ax]
    t = _tensorized(x).transpose(axes)
    d = x.layout.total_dim
    return HermitianOperator(x.layout, t.reshape(d, d))


def hermitian_eig(x: HermitianOperator) -> Spectrum:
    """Full eigendecomposition with ascending eigenvalues.

    Backed by LAPACK's Hermitian solver; an independent cyclic-Jacobi
    implementation cross-checks it in the test suite.
    """
    m = np.asarray(x.entries)
    dev = np.max(np.abs(m - m.conj().T))
    if dev > 10 * HERMITICITY_TOL:
        raise NotHermitian(f"max deviation from conjugate transpose is {dev:.3e}")
    try:
        vals, vecs = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return Spectrum(np.asarray(vals, dtype=float), vecs)


def min_eigenvalue(x: HermitianOperator) -> float:
    return float(hermitian_eig(x).eigenvalues[0])


def support_kernel_projectors(
    x: HermitianOperator, rank_tol: float = DEFAULT_RANK_TOL
) -> tuple[HermitianOperator, HermitianOperator]:
    """Projectors onto the support (|eigenvalue| > rank_tol) and its complement."""
    spec = hermitian_eig(x)
    mask = np.abs(spec.eigenvalues) > rank_tol
    u = spec.eigenvectors[:, mask]
    p_supp = u @ u.conj().T
    p_ker = np.eye(x.side) - p_supp
    return (
        HermitianOperator(x.layout, p_supp),
        HermitianOperator(x.layout, p_ker),
    )


def projector_rank(p: HermitianOperator, tol: float = 0.5) -> int:
    """Rank of a projector, read off the trace."""
    return int(round(p.trace()))


def _check_projector(p: HermitianOperator) -> None:
    dev = np.max(np.abs(p.entries @ p.entries - p.entries))
    if dev > PROJECTOR_TOL:
        raise NotProjector(f"idempotency deviation {dev:.3e}")


def subspace_intersects(
    p: HermitianOperator, q: HermitianOperator, angle_tol: float = DEFAULT_ANGLE_TOL
) -> bool:
    """True iff ran(p) and ran(q) share a direction (principal angle ~ 0)."""
    _check_projector(p)
    _check_projector(q)
    if p.layout.total_dim != q.layout.total_dim:
        raise DimensionError("projectors act on spaces of different dimension")
    top = float(np.linalg.eigvalsh(p.entries @ q.entries @ p.entries)[-1])
    return top >= 1.0 - angle_tol
