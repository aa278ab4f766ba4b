"""Independent reference implementations used to validate the library.

Everything here is deliberately naive and self-contained: straightforward
loops and textbook formulas, sharing no code with the package under test.
"""

from __future__ import annotations

import numpy as np


def jacobi_eigh(m: np.ndarray, sweeps: int = 100, tol: float = 1e-13) -> np.ndarray:
    """Eigenvalues of a complex Hermitian matrix by cyclic Jacobi rotations.

    Returns the ascending eigenvalues. Convergence criterion: off-diagonal
    Frobenius norm below tol.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    for _ in range(sweeps):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < 1e-300:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                # phase rotation to make the pivot real, then a real Jacobi
                # rotation to annihilate it
                phase = apq / abs(apq)
                tau = (aqq - app) / (2 * abs(apq))
                t = np.sign(tau) / (abs(tau) + np.sqrt(1 + tau * tau)) if tau != 0 else 1.0
                c = 1 / np.sqrt(1 + t * t)
                s = t * c
                r = np.eye(n, dtype=complex)
                r[p, p] = c
                r[q, q] = c
                r[p, q] = s * phase
                r[q, p] = -s * np.conj(phase)
                a = r.conj().T @ a @ r
    return np.sort(np.diag(a).real)


def eig2x2(m: np.ndarray) -> np.ndarray:
    """Closed-form ascending eigenvalues of a 2x2 Hermitian matrix."""
    a = float(m[0, 0].real)
    d = float(m[1, 1].real)
    b = complex(m[0, 1])
    mean = (a + d) / 2
    rad = np.sqrt(((a - d) / 2) ** 2 + abs(b) ** 2)
    return np.array([mean - rad, mean + rad])


def kron_oracle(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product by the index formula (a (x) b)[(i,k),(j,l)] = a[i,j] b[k,l]."""
    n, m = a.shape
    p, q = b.shape
    out = np.zeros((n * p, m * q), dtype=complex)
    for i in range(n):
        for j in range(m):
            for k in range(p):
                for l in range(q):
                    out[i * p + k, j * q + l] = a[i, j] * b[k, l]
    return out


def partial_trace_oracle(m: np.ndarray, dims: tuple[int, ...], keep: tuple[int, ...]) -> np.ndarray:
    """Partial trace by explicit index summation over the traced subsystems."""
    import itertools

    n = len(dims)
    keep = tuple(sorted(keep))
    traced = tuple(i for i in range(n) if i not in keep)
    kdims = [dims[i] for i in keep]
    out_dim = int(np.prod(kdims)) if kdims else 1
    out = np.zeros((out_dim, out_dim), dtype=complex)

    def flat(idx: tuple[int, ...]) -> int:
        f = 0
        for i, d in zip(idx, dims):
            f = f * d + i
        return f

    def kflat(idx: tuple[int, ...]) -> int:
        f = 0
        for i, d in zip(idx, kdims):
            f = f * d + i
        return f

    kept_ranges = [range(dims[i]) for i in keep]
    traced_ranges = [range(dims[i]) for i in traced]
    for kr in itertools.product(*kept_ranges):
        for kc in itertools.product(*kept_ranges):
            total = 0.0 + 0.0j
            for t in itertools.product(*traced_ranges):
                row = [0] * n
                col = [0] * n
                for pos, i in zip(keep, kr):
                    row[pos] = i
                for pos, i in zip(keep, kc):
                    col[pos] = i
                for pos, i in zip(traced, t):
                    row[pos] = i
                    col[pos] = i
                total += m[flat(tuple(row)), flat(tuple(col))]
            out[kflat(kr), kflat(kc)] = total
    return out


def ancestors_oracle(
    edges: set[tuple[str, str]], node: str, all_nodes: set[str]
) -> set[str]:
    """Ancestor set (inclusive) by repeated relaxation until a fixed point."""
    anc = {node}
    changed = True
    while changed:
        changed = False
        for p, c in edges:
            if c in anc and p not in anc:
                anc.add(p)
                changed = True
    return anc & all_nodes


def classical_cut_tensor_oracle(p: np.ndarray, ax: int, ay: int) -> np.ndarray:
    """Pointwise cut inequality for a 3-variable distribution by explicit loops."""
    dims = p.shape
    az = [i for i in range(3) if i not in (ax, ay)][0]
    out = np.zeros(dims)
    for a in range(dims[0]):
        for b in range(dims[1]):
            for c in range(dims[2]):
                o = (a, b, c)

                def single(axis, val):
                    tot = 0.0
                    for idx in np.ndindex(*dims):
                        if idx[axis] == val:
                            tot += p[idx]
                    return tot

                def pair(ax1, v1, ax2, v2):
                    tot = 0.0
                    for idx in np.ndindex(*dims):
                        if idx[ax1] == v1 and idx[ax2] == v2:
                            tot += p[idx]
                    return tot

                out[o] = (
                    1
                    - single(ax, o[ax])
                    - single(ay, o[ay])
                    - single(az, o[az])
                    + single(ax, o[ax]) * single(ay, o[ay])
                    + pair(ax, o[ax], az, o[az])
                    + pair(ay, o[ay], az, o[az])
                )
    return out
