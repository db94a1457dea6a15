"""Smallest Laplacian eigenpairs via Lanczos with full reorthogonalization.

The solver grows an orthonormal Krylov basis (re-orthogonalizing every new
vector against the whole basis, twice), restarts from a fresh random vector
on breakdown (invariant subspace hit, e.g. disconnected graphs), and
extracts Ritz pairs by a dense Rayleigh-Ritz solve on the projected matrix.
Residuals are checked explicitly, never inferred from recurrence
coefficients.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass

import numpy as np

from .graph import Graph, Laplacian


def default_n_eig(n_nodes: int) -> int:
    """Default eigenbasis size: 80 up to 20k nodes, 100 beyond."""
    return 80 if n_nodes <= 20_000 else 100


class EigenConvergenceError(RuntimeError):
    """Raised when the iteration budget is exhausted; carries best residuals."""

    def __init__(self, message: str, residuals: np.ndarray):
        super().__init__(message)
        self.residuals = residuals


@dataclass(frozen=True)
class EigenBasis:
    """The n_eig smallest eigenvalue/eigenvector pairs of a graph Laplacian.

    eigenvalues are sorted ascending and clamped to >= 0 within tolerance;
    eigenvectors are unit columns of `vectors` (shape N x n_eig), pairwise
    orthonormal; `residuals[s]` = ||L phi_s - lambda_s phi_s||_2.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray

    @property
    def n_pairs(self) -> int:
        return len(self.eigenvalues)

    @property
    def n_nodes(self) -> int:
        return self.vectors.shape[0]


def smallest_eigenpairs(lap: Laplacian, n_eig: int, tol: float = 1e-8,
                        seed: int = 0, max_cycles: int = 5) -> EigenBasis:
    """Compute the n_eig smallest eigenpairs of the Laplacian.

    Parameters
    ----------
    lap : Laplacian
    n_eig : int
        Number of pairs, 1 <= n_eig <= N.
    tol : float
        Residual tolerance: ||L v - lam v|| <= tol * max(1, lam).
    seed : int
        Seed for the random start vector (restarts included).
    max_cycles : int
        Basis-growth cycles of 10*n_eig + 100 matvecs each before giving up.

    Raises
    ------
    ValueError
        If n_eig is out of range or tol <= 0.
    EigenConvergenceError
        If residuals are not met within the matvec budget.
    """
    n = lap.n
    if not 1 <= n_eig <= n:
        raise ValueError(f"n_eig must be in [1, {n}], got {n_eig}")
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")

    rng = np.random.default_rng(seed)
    chunk = 10 * n_eig + 100
    m_cap = min(n, max_cycles * chunk)

    mat = lap.matrix
    scale = max(1.0, float(np.abs(mat.diagonal()).max(initial=0.0)))
    breakdown_tol = 1e-10 * scale

    V = np.empty((n, min(n, chunk)))
    AV = np.empty_like(V)
    j = 0

    def _grow(buf, cols):
        if cols <= buf.shape[1]:
            return buf
        out = np.empty((n, cols))
        out[:, :buf.shape[1]] = buf
        return out

    def _fresh_vector():
        # random vector orthogonal to the current basis
        for _ in range(50):
            v = rng.standard_normal(n)
            if j:
                v -= V[:, :j] @ (V[:, :j].T @ v)
                v -= V[:, :j] @ (V[:, :j].T @ v)
            norm = np.linalg.norm(v)
            if norm > 1e-8:
                return v / norm
        raise EigenConvergenceError(
            "could not generate a vector orthogonal to the Krylov basis",
            np.full(n_eig, np.inf))

    v = _fresh_vector()
    best_res = np.full(n_eig, np.inf)

    while True:
        target = min(m_cap, j + chunk, n)
        V = _grow(V, target)
        AV = _grow(AV, target)
        while j < target:
            V[:, j] = v
            AV[:, j] = mat @ v
            w = AV[:, j].copy()
            w -= V[:, :j + 1] @ (V[:, :j + 1].T @ w)
            w -= V[:, :j + 1] @ (V[:, :j + 1].T @ w)
            j += 1
            beta = np.linalg.norm(w)
            if beta <= breakdown_tol:
                if j < n:  # invariant subspace hit: restart afresh
                    v = _fresh_vector()
            else:
                v = w / beta

        # Rayleigh-Ritz on the accumulated basis
        proj = V[:, :j].T @ AV[:, :j]
        proj = 0.5 * (proj + proj.T)
        theta, s_mat = np.linalg.eigh(proj)
        sel = s_mat[:, :n_eig]
        lam = theta[:n_eig]
        vecs = V[:, :j] @ sel
        avecs = AV[:, :j] @ sel
        res = np.linalg.norm(avecs - vecs * lam, axis=0)
        best_res = np.minimum(best_res, res)

        if np.all(res <= tol * np.maximum(1.0, np.abs(lam))):
            lam = lam.copy()
            lam[(lam < 0) & (lam >= -tol)] = 0.0
            if np.any(lam < 0):
                raise EigenConvergenceError(
                    f"negative Ritz value {lam.min():.3e} beyond tolerance", res)
            order = np.argsort(lam, kind="stable")
            basis = EigenBasis(lam[order], np.ascontiguousarray(vecs[:, order]),
                               res[order])
            basis.eigenvalues.setflags(write=False)
            basis.vectors.setflags(write=False)
            basis.residuals.setflags(write=False)
            return basis

        if j >= min(m_cap, n):
            raise EigenConvergenceError(
                f"eigensolver did not converge within {j} matvecs "
                f"(worst residual {res.max():.3e}, tol {tol:.1e})", best_res)


# ---------------------------------------------------------------------------
# optional on-disk cache, keyed by the graph's canonical edge list
# ---------------------------------------------------------------------------

def basis_cache_key(g: Graph, n_eig: int) -> str:
    """Content hash of (N, canonical edges, n_eig)."""
    h = hashlib.sha256()
    h.update(np.int64(g.n_nodes).tobytes())
    h.update(g.edge_i.tobytes())
    h.update(g.edge_j.tobytes())
    h.update(g.edge_w.tobytes())
    h.update(np.int64(n_eig).tobytes())
    return h.hexdigest()


def save_basis(basis: EigenBasis, path: str) -> None:
    np.savez_compressed(path, eigenvalues=basis.eigenvalues,
                        vectors=basis.vectors, residuals=basis.residuals)


def load_basis(path: str) -> EigenBasis:
    with np.load(path) as data:
        return EigenBasis(data["eigenvalues"], data["vectors"], data["residuals"])


def cached_eigenpairs(g: Graph, lap: Laplacian, n_eig: int, tol: float = 1e-8,
                      seed: int = 0, cache_dir: str | None = None) -> EigenBasis:
    """smallest_eigenpairs with an optional directory cache."""
    if cache_dir is None:
        return smallest_eigenpairs(lap, n_eig, tol=tol, seed=seed)
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, basis_cache_key(g, n_eig) + ".npz")
    if os.path.exists(path):
        return load_basis(path)
    basis = smallest_eigenpairs(lap, n_eig, tol=tol, seed=seed)
    save_basis(basis, path)
    return basis
