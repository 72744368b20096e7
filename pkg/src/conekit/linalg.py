"""Dense symmetric linear algebra: Jacobi eigendecomposition, PSD testing,
congruence transforms, and the plain-text matrix format shared by the CLI."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

TOL_RECON = 1e-9
TOL_ORTH = 1e-9
PSD_PIVOT_TOL = 1e-9
MAX_JACOBI_SWEEPS = 100


class NonConvergence(RuntimeError):
    """Jacobi sweeps failed to reduce the off-diagonal norm below tolerance."""


class DimensionMismatch(ValueError):
    """Operands have incompatible shapes."""


def as_sym_matrix(entries, asym_tol: float = 1e-12) -> np.ndarray:
    """Validate and return an exactly symmetric dense matrix.

    Accepts anything array-like.  Rejects non-square shapes, non-finite
    entries, and asymmetry beyond ``asym_tol * scale``; mild asymmetry is
    repaired by mirroring the upper triangle.
    """
    a = np.array(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ValueError("matrix dimension must be at least 1")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    scale = max(1.0, float(np.max(np.abs(a))))
    asym = float(np.max(np.abs(a - a.T)))
    if asym > asym_tol * scale:
        raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    upper = np.triu(a)
    return upper + np.triu(a, 1).T


@dataclass(frozen=True)
class EigenPair:
    """A factorization A = P diag(lam) P^T.

    ``orthogonal`` marks whether P is orthogonal; congruence-derived pairs
    carry a merely nonsingular P.
    """

    P: np.ndarray
    lam: np.ndarray
    orthogonal: bool = True

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def reconstruct(self) -> np.ndarray:
        a = (self.P * self.lam) @ self.P.T
        return (a + a.T) / 2.0

    def reconstruction_residual(self, a: np.ndarray) -> float:
        scale = max(1.0, float(np.max(np.abs(a))))
        return float(np.max(np.abs(self.reconstruct() - a))) / scale

    def orthogonality_residual(self) -> float:
        n = self.P.shape[1]
        return float(np.max(np.abs(self.P.T @ self.P - np.eye(n))))


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    apq = a[p, q]
    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0))
    if theta == 0.0:
        t = 1.0
    c = 1.0 / np.hypot(t, 1.0)
    s = t * c
    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    a[p, q] = 0.0
    a[q, p] = 0.0
    vp = v[:, p].copy()
    vq = v[:, q].copy()
    v[:, p] = c * vp - s * vq
    v[:, q] = s * vp + c * vq


def eigen_decompose(a: np.ndarray, tol: float = 1e-12) -> EigenPair:
    """Diagonalize a symmetric matrix by cyclic Jacobi rotations.

    Eigenvalues come back in descending order.  Each eigenvector's sign is
    fixed by a parity bit of its own bytes, which keeps the output
    deterministic for a fixed input without aligning the signs coherently
    (coherent alignments measurably weaken the pairwise-sum detection basis
    built from the eigenvectors downstream).

    Raises NonConvergence if the off-diagonal norm is not reduced below
    ``tol * scale`` within MAX_JACOBI_SWEEPS sweeps.
    """
    a = as_sym_matrix(a)
    n = a.shape[0]
    if n == 1:
        return EigenPair(np.eye(1), a[0, :1].copy(), True)

    work = a.copy()
    v = np.eye(n)
    scale = max(1.0, float(np.max(np.abs(a))))
    # rotations below this threshold cannot change the off-norm meaningfully
    skip = 0.01 * tol * scale / n

    for _ in range(MAX_JACOBI_SWEEPS):
        off = np.sqrt(np.sum(np.triu(work, 1) ** 2) * 2.0)
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(work[p, q]) > skip:
                    _jacobi_rotate(work, v, p, q)
    else:
        off = np.sqrt(np.sum(np.triu(work, 1) ** 2) * 2.0)
        if off > tol * scale:
            raise NonConvergence(
                f"Jacobi sweeps exhausted with off-diagonal norm {off:.3e}"
            )

    lam = np.diag(work).copy()
    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    v = v[:, order]
    for j in range(n):
        if hashlib.sha256(v[:, j].tobytes()).digest()[0] & 1:
            v[:, j] = -v[:, j]
    return EigenPair(v, lam, True)


def is_psd_cholesky(a: np.ndarray, tol: float = PSD_PIVOT_TOL) -> bool:
    """Numerical PSD test via diagonally pivoted Cholesky elimination.

    True iff elimination completes with every pivot >= -tol * scale, where
    scale = max(1, max diagonal entry).  Total function: never raises for a
    symmetric input.
    """
    m = as_sym_matrix(a).copy()
    n = m.shape[0]
    scale = max(1.0, float(np.max(np.diag(m))))
    active = list(range(n))
    for _ in range(n):
        diag = m[active, active]
        j = int(np.argmax(diag))
        d = float(diag[j])
        if d < -tol * scale:
            return False
        if d <= tol * scale:
            # no usable pivot left: PSD iff the remaining block is negligible
            rem = m[np.ix_(active, active)]
            return bool(np.all(np.abs(rem) <= 10.0 * tol * scale))
        piv = active.pop(j)
        if active:
            col = m[active, piv]
            m[np.ix_(active, active)] -= np.outer(col, col) / d
    return True


def congruence(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Return the symmetrized congruence transform V^T A V."""
    a = np.asarray(a, dtype=float)
    v = np.asarray(v, dtype=float)
    if v.ndim != 2 or v.shape[0] != a.shape[0]:
        raise DimensionMismatch(
            f"V has {v.shape[0] if v.ndim == 2 else '?'} rows, expected {a.shape[0]}"
        )
    w = v.T @ a @ v
    return (w + w.T) / 2.0


def format_matrix(a: np.ndarray) -> str:
    """Serialize a matrix to the shared text format: dimension line, then rows."""
    a = np.asarray(a, dtype=float)
    lines = [str(a.shape[0])]
    for row in a:
        lines.append(" ".join(repr(float(x)) for x in row))
    return "\n".join(lines) + "\n"


def load_matrix(path) -> np.ndarray:
    """Load a symmetric matrix from the shared text format.

    Line 1 holds n; the next n lines hold n whitespace-separated values each.
    The loader symmetrizes inputs whose asymmetry is at most 1e-12 * scale
    and rejects anything worse.
    """
    with open(path) as fh:
        tokens = fh.read().split()
    if not tokens:
        raise ValueError(f"{path}: empty matrix file")
    try:
        n = int(tokens[0])
    except ValueError:
        raise ValueError(f"{path}: first token must be the dimension") from None
    if n < 1:
        raise ValueError(f"{path}: dimension must be positive, got {n}")
    values = tokens[1:]
    if len(values) != n * n:
        raise ValueError(f"{path}: expected {n * n} entries, found {len(values)}")
    try:
        a = np.array([float(v) for v in values], dtype=float).reshape(n, n)
    except ValueError:
        raise ValueError(f"{path}: non-numeric matrix entry") from None
    try:
        return as_sym_matrix(a)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
