"""State and distribution constructors for the triangle-network analyses.

Covers the named three-qubit families (GHZ, W, tri-Bell, white-noise
mixtures, the Toth-Acin family), the qutrit twirl pair, the 2x2x4 canonical
form, local-measurement-induced distributions and the orthogonal
positive/negative split of rho_x (x) rho_y - rho_xy.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    ConstraintViolated,
    DimensionError,
    DomainError,
    InvalidParameter,
    UnknownLabel,
)
from .linalg import (
    DensityMatrix,
    HermitianOperator,
    SubsystemLayout,
    hermitian_eig,
    kron,
    partial_trace,
    permute_subsystems,
)

NORM_TOL = 1e-10
PROB_CLAMP = 1e-12

QUBIT3 = SubsystemLayout((2, 2, 2), ("A", "B", "C"))
QUTRIT3 = SubsystemLayout((3, 3, 3), ("A", "B", "C"))
QQQ4 = SubsystemLayout((2, 2, 4), ("A", "B", "C"))

PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PureState:
    """Unit vector on the total space of `layout`."""

    layout: SubsystemLayout
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if v.shape != (self.layout.total_dim,):
            raise DimensionError(
                f"expected {self.layout.total_dim} amplitudes, got {v.shape[0]}"
            )
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidParameter(f"norm is {norm!r}, expected 1")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    def projector(self) -> HermitianOperator:
        return HermitianOperator(self.layout, np.outer(self.amplitudes, self.amplitudes.conj()))

    def to_density(self) -> DensityMatrix:
        return DensityMatrix(self.projector())


@dataclass(frozen=True)
class Distribution:
    """Probability tensor over a product outcome space, stored flat row-major."""

    outcome_dims: tuple[int, ...]
    probs: np.ndarray

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.outcome_dims)
        object.__setattr__(self, "outcome_dims", dims)
        p = np.array(self.probs, dtype=float).reshape(-1)
        if p.shape != (int(np.prod(dims)),):
            raise DimensionError(
                f"expected {int(np.prod(dims))} probabilities, got {p.shape[0]}"
            )
        if np.min(p) < -PROB_CLAMP:
            raise InvalidParameter(f"negative probability {np.min(p):.3e}")
        p = np.maximum(p, 0.0)
        total = float(p.sum())
        if abs(total - 1.0) > 1e-10:
            raise InvalidParameter(f"probabilities sum to {total!r}, expected 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def tensor(self) -> np.ndarray:
        return self.probs.reshape(self.outcome_dims)

    def marginal(self, keep: Sequence[int]) -> "Distribution":
        """Marginal on the given variable positions (kept in ascending order)."""
        keep = sorted(set(int(k) for k in keep))
        n = len(self.outcome_dims)
        if any(k < 0 or k >= n for k in keep):
            raise UnknownLabel(f"variable positions {keep} out of range for {n} variables")
        drop = tuple(i for i in range(n) if i not in keep)
        t = self.tensor.sum(axis=drop) if drop else self.tensor
        return Distribution(tuple(self.outcome_dims[k] for k in keep), t.reshape(-1))


@dataclass(frozen=True)
class LocalBasis:
    """One orthonormal measurement basis per subsystem (columns are outcomes)."""

    matrices: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        mats = []
        for m in self.matrices:
            u = np.array(m, dtype=complex)
            if u.ndim != 2 or u.shape[0] != u.shape[1]:
                raise DimensionError("basis matrices must be square")
            dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
            if dev > 1e-10:
                raise InvalidParameter(f"basis matrix unitarity deviation {dev:.3e}")
            u.setflags(write=False)
            mats.append(u)
        object.__setattr__(self, "matrices", tuple(mats))

    @classmethod
    def computational(cls, layout: SubsystemLayout) -> "LocalBasis":
        return cls(tuple(np.eye(d) for d in layout.dims))

    @classmethod
    def pauli_x(cls, n: int = 3) -> "LocalBasis":
        h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
        return cls((h,) * n)


@dataclass(frozen=True)
class NuPair:
    """Orthogonal PSD parts of rho_x (x) rho_y - rho_xy."""

    nu_plus: HermitianOperator
    nu_minus: HermitianOperator


def _pure(layout: SubsystemLayout, pairs: dict[int, complex]) -> PureState:
    v = np.zeros(layout.total_dim, dtype=complex)
    for idx, amp in pairs.items():
        v[idx] = amp
    return PureState(layout, v)


def ghz_state() -> PureState:
    s = 1 / np.sqrt(2)
    return _pure(QUBIT3, {0: s, 7: s})


def w_state() -> PureState:
    s = 1 / np.sqrt(3)
    return _pure(QUBIT3, {1: s, 2: s, 4: s})


def ghz_distn() -> Distribution:
    p = np.zeros(8)
    p[0] = p[7] = 0.5
    return Distribution((2, 2, 2), p)


def w_distn() -> Distribution:
    p = np.zeros(8)
    p[1] = p[2] = p[4] = 1 / 3
    return Distribution((2, 2, 2), p)


def encode_distribution(d: Distribution) -> DensityMatrix:
    """Density matrix diagonal in the computational basis with entries d."""
    n = len(d.outcome_dims)
    labels = tuple(string.ascii_uppercase[:n])
    layout = SubsystemLayout(d.outcome_dims, labels)
    return DensityMatrix(HermitianOperator(layout, np.diag(d.probs.astype(complex))))


def tri_bell(t: float) -> PureState:
    """sqrt((t-2)/t)|100> + (1/sqrt(t))|001> + (1/sqrt(t))|010>, t >= 3."""
    t = float(t)
    if t < 3:
        raise DomainError(f"tri-Bell parameter t={t} must be >= 3")
    return _pure(QUBIT3, {4: np.sqrt((t - 2) / t), 1: 1 / np.sqrt(t), 2: 1 / np.sqrt(t)})


def tri_bell_t_from_amplitude(a: float) -> float:
    """Invert a = sqrt((t-2)/t) to t = 2/(1-a^2)."""
    a = float(a)
    if not (1 / np.sqrt(3) - 1e-12 <= a < 1):
        raise DomainError(f"amplitude {a} outside [1/sqrt(3), 1)")
    return 2.0 / (1.0 - a * a)


def omega_example() -> DensityMatrix:
    """0.3 |psi_1><psi_1| + 0.7 |0++><0++| with the stated psi_1."""
    r = np.sqrt(0.19 / 2)
    psi1 = _pure(QUBIT3, {0: 0.9, 5: r, 6: r})
    plus = np.full(4, 0.5)
    zpp = np.zeros(8, dtype=complex)
    zpp[:4] = plus
    psi2 = PureState(QUBIT3, zpp)
    m = 0.3 * psi1.projector().entries + 0.7 * psi2.projector().entries
    return DensityMatrix(HermitianOperator(QUBIT3, m))


def white_noise_mixture(psi: PureState, p: float) -> DensityMatrix:
    """p |psi><psi| + (1-p)/8 * identity, for a three-qubit pure state."""
    if psi.layout.dims != (2, 2, 2):
        raise DimensionError("white-noise mixture is defined for three qubits")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"noise parameter p={p} outside [0, 1]")
    m = p * psi.projector().entries + (1 - p) / 8 * np.eye(8)
    return DensityMatrix(HermitianOperator(psi.layout, m))


def toth_acin_operator(c: float) -> HermitianOperator:
    """Pauli expansion of the c-family as a unit-trace Hermitian operator.

    Not PSD for every c; use :func:`toth_acin` for validated states.
    """
    c = float(c)
    eye2 = np.eye(2, dtype=complex)
    m = np.eye(8, dtype=complex) / 8
    for k in ("X", "Y", "Z"):
        s = PAULI[k]
        m += np.kron(eye2, np.kron(s, s)) / 24
        m -= c / 16 * (np.kron(s, np.kron(eye2, s)) + np.kron(s, np.kron(s, eye2)))
    return HermitianOperator(QUBIT3, m)


def toth_acin(c: float) -> DensityMatrix:
    """Pauli-diagonal three-qubit family; validates PSD-ness numerically."""
    op = toth_acin_operator(c)
    lo = float(np.linalg.eigvalsh(op.entries)[0])
    if lo < -1e-10:
        raise InvalidParameter(f"c={c} gives a non-PSD operator (min eigenvalue {lo:.3e})")
    return DensityMatrix(op)


def _qutrit_component(i: int) -> np.ndarray:
    v = np.zeros(27, dtype=complex)
    for x in range(3):
        for y in range(3):
            z = (i - x - y) % 3
            v[x * 9 + y * 3 + z] = 1 / 3
    return v


def z3_twirl(rho: DensityMatrix) -> DensityMatrix:
    """Average over conjugation by Z3^k (x) Z3^k (x) Z3^k, k = 0, 1, 2."""
    if rho.layout.dims != (3, 3, 3):
        raise DimensionError("twirl is defined for three qutrits")
    w = np.exp(2j * np.pi / 3)
    z3 = np.diag([1, w, w * w])
    acc = np.zeros((27, 27), dtype=complex)
    for k in range(3):
        u = np.linalg.matrix_power(z3, k)
        u3 = np.kron(u, np.kron(u, u))
        acc += u3 @ rho.entries @ u3.conj().T
    return DensityMatrix(HermitianOperator(rho.layout, acc / 3))


def qutrit_pair(p0: float, p1: float) -> tuple[PureState, DensityMatrix]:
    """Superposition and matching mixture of the three charge-sector qutrit states.

    The mixed state equals the Z3 twirl of the pure-state projector.
    """
    p0, p1 = float(p0), float(p1)
    p2 = 1.0 - p0 - p1
    if min(p0, p1, p2) < -1e-12 or max(p0, p1) > 1 + 1e-12:
        raise DomainError(f"weights (p0, p1) = ({p0}, {p1}) outside the simplex")
    p2 = max(p2, 0.0)
    comps = [_qutrit_component(i) for i in range(3)]
    vec = np.sqrt(p0) * comps[0] + np.sqrt(p1) * comps[1] + np.sqrt(p2) * comps[2]
    pure = PureState(QUTRIT3, vec)
    m = sum(
        w * np.outer(v, v.conj()) for w, v in zip((p0, p1, p2), comps)
    )
    mixed = DensityMatrix(HermitianOperator(QUTRIT3, m))
    dev = np.max(np.abs(z3_twirl(pure.to_density()).entries - mixed.entries))
    if dev > 1e-10:
        raise InvalidParameter(f"twirl consistency deviation {dev:.3e}")
    return pure, mixed


# Index map for the 2x2x4 canonical form: position of alpha_l in the
# flattened (A,B,C) amplitude vector, in lexicographic ket order.
_SCHMIDT224_KETS = (
    (0, 0, 0),  # alpha_0, phase phi_0
    (0, 1, 1),  # alpha_1
    (1, 0, 1),  # alpha_2
    (1, 0, 2),  # alpha_3, phase phi_1
    (1, 1, 0),  # alpha_4
    (1, 1, 1),  # alpha_5
    (1, 1, 2),  # alpha_6
    (1, 1, 3),  # alpha_7
)
_SCHMIDT224_FORBIDDEN = {
    (0, 0, 1): "zero-pattern (condition 1)",
    (0, 1, 0): "zero-pattern (condition 1)",
    (1, 0, 0): "zero-pattern (condition 1)",
    (0, 0, 2): "zero-pattern (condition 1)",
    (0, 0, 3): "zero-pattern (condition 1)",
    (0, 1, 2): "forbidden index (1,2,3) in B0 (condition 3)",
    (0, 1, 3): "forbidden index (1,2,4) in B0 (condition 3)",
    (1, 0, 3): "forbidden index (2,1,4) in B0 (condition 3)",
}


def _ket_index(ket: tuple[int, int, int]) -> int:
    a, b, c = ket
    return a * 8 + b * 4 + c


def schmidt224(
    alphas: Sequence[float],
    phi0: float = 0.0,
    phi1: float = 0.0,
    enforce_ordering: bool = True,
) -> PureState:
    """Canonical-form qubit-qubit-ququart pure state from its eight coefficients.

    The leading-coefficient ordering pins down a unique representative per
    state; pass enforce_ordering=False to build valid states outside the
    canonical order (e.g. restricted families parametrized directly).
    """
    al = np.array(alphas, dtype=float).reshape(-1)
    if al.shape != (8,):
        raise DimensionError(f"expected 8 coefficients, got {al.shape[0]}")
    if np.min(al) < 0:
        raise ConstraintViolated("coefficients must be nonnegative (condition 4)")
    total = float(np.sum(al**2))
    if abs(total - 1.0) > NORM_TOL:
        raise ConstraintViolated(f"squared coefficients sum to {total!r}, expected 1")
    if enforce_ordering and al[0] < al[5] - 1e-12:
        raise ConstraintViolated("ordering |alpha_0| >= |alpha_5| (condition 5)")
    v = np.zeros(16, dtype=complex)
    phases = {0: np.exp(1j * float(phi0)), 3: np.exp(1j * float(phi1))}
    for l, ket in enumerate(_SCHMIDT224_KETS):
        v[_ket_index(ket)] = al[l] * phases.get(l, 1.0)
    return PureState(QQQ4, v)


def validate_schmidt224_amplitudes(amplitudes: Sequence[complex]) -> None:
    """Check a full 16-entry amplitude vector against the canonical-form constraints.

    Raises ConstraintViolated naming the violated condition.
    """
    v = np.array(amplitudes, dtype=complex).reshape(-1)
    if v.shape != (16,):
        raise DimensionError(f"expected 16 amplitudes, got {v.shape[0]}")
    for ket, reason in _SCHMIDT224_FORBIDDEN.items():
        if abs(v[_ket_index(ket)]) > 1e-12:
            raise ConstraintViolated(f"amplitude at ket {ket} must vanish: {reason}")
    for l, ket in enumerate(_SCHMIDT224_KETS):
        if l in (0, 3):
            continue
        amp = v[_ket_index(ket)]
        if abs(amp.imag) > 1e-12 or amp.real < -1e-12:
            raise ConstraintViolated(
                f"amplitude at ket {ket} must be real nonnegative (condition 4)"
            )
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > NORM_TOL:
        raise ConstraintViolated(f"norm is {norm!r}, expected 1")
    if abs(v[_ket_index((0, 0, 0))]) < abs(v[_ket_index((1, 1, 1))]) - 1e-12:
        raise ConstraintViolated("ordering |alpha_0| >= |alpha_5| (condition 5)")


def measure_local(rho: DensityMatrix, bases: LocalBasis) -> Distribution:
    """Outcome distribution of a product projective measurement on rho."""
    if len(bases.matrices) != rho.layout.n_subsystems:
        raise DimensionError("one basis per subsystem required")
    for u, d in zip(bases.matrices, rho.layout.dims):
        if u.shape[0] != d:
            raise DimensionError(f"basis of side {u.shape[0]} on a dimension-{d} factor")
    u_full = bases.matrices[0]
    for u in bases.matrices[1:]:
        u_full = np.kron(u_full, u)
    probs = np.real(np.einsum("ij,ji->i", u_full.conj().T @ rho.entries, u_full))
    return Distribution(rho.layout.dims, probs)


def nu_decomposition(rho: DensityMatrix, x: str, y: str) -> NuPair:
    """Orthogonal PSD split nu+ - nu- of rho_x (x) rho_y - rho_xy."""
    if x == y:
        raise UnknownLabel(f"cut labels must differ, got ({x}, {y})")
    rho_xy = partial_trace(rho.op, {x, y})
    rho_x = partial_trace(rho.op, {x})
    rho_y = partial_trace(rho.op, {y})
    prod = permute_subsystems(kron(rho_x, rho_y), rho_xy.layout.labels)
    diff = prod - rho_xy
    spec = hermitian_eig(diff)
    vals, vecs = spec.eigenvalues, spec.eigenvectors
    pos = (vecs[:, vals > 0] * vals[vals > 0]) @ vecs[:, vals > 0].conj().T
    neg = (vecs[:, vals < 0] * (-vals[vals < 0])) @ vecs[:, vals < 0].conj().T
    return NuPair(
        HermitianOperator(diff.layout, pos),
        HermitianOperator(diff.layout, neg),
    )


def is_biseparable_pure(
    psi: PureState, tol: float = 1e-8
) -> Optional[tuple[str, tuple[str, ...]]]:
    """Single-node bipartition across which psi factorizes, or None.

    Checks each cut {x}|{rest} by purity of the reduced state on x.
    """
    labels = psi.layout.labels
    if len(labels) < 2:
        raise DimensionError("biseparability needs at least two subsystems")
    proj = psi.projector()
    for x in labels:
        red = partial_trace(proj, {x})
        top = float(hermitian_eig(red).eigenvalues[-1])
        if top >= 1.0 - tol:
            return x, tuple(l for l in labels if l != x)
    return None


def random_pure_state(layout: SubsystemLayout, rng: np.random.Generator) -> PureState:
    """Haar-like pure state from normalized complex Gaussian amplitudes."""
    d = layout.total_dim
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(layout, v / np.linalg.norm(v))


def random_density_matrix(layout: SubsystemLayout, rng: np.random.Generator) -> DensityMatrix:
    """Random mixed state: partial trace of a doubled-dimension random pure state."""
    env = SubsystemLayout(
        layout.dims + (layout.total_dim,), layout.labels + ("__env__",)
    )
    psi = random_pure_state(env, rng)
    red = partial_trace(psi.projector(), set(layout.labels))
    red = permute_subsystems(red, layout.labels)
    # absorb tiny negative eigenvalue noise from the trace-out
    m = (red.entries + red.entries.conj().T) / 2
    return DensityMatrix(HermitianOperator(layout, m / np.trace(m).real))
