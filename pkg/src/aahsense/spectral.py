"""Eigenpairs of real symmetric tridiagonal matrices.

Backed by LAPACK bisection plus inverse iteration (``?stebz`` / ``?stein``)
through :func:`scipy.linalg.eigh_tridiagonal`; the matrix is never densified.
MRRR (``?stemr``) is faster but loses orthogonality to ~1e-11 near L = 10^3.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .model import TridiagonalHamiltonian

DEGENERACY_TOL = 1e-12


class SpectralError(RuntimeError):
    """Eigensolver failure. ``spec`` is the lattice that produced the matrix, if known."""

    def __init__(self, message: str, spec=None):
        super().__init__(f"{message} (spec={spec!r})")
        self.spec = spec


@dataclass(frozen=True, eq=False)
class Spectrum:
    energies: np.ndarray
    orbitals: np.ndarray

    @property
    def k(self) -> int:
        return len(self.energies)

    @property
    def gap(self) -> float:
        if self.k < 2:
            raise ValueError("gap needs at least two eigenpairs")
        return float(self.energies[1] - self.energies[0])

    def level_gap(self, n: int) -> float:
        """``E_n - E_{n-1}`` (0-based), e.g. the Fermi-level gap for ``n = n_f``."""
        return float(self.energies[n] - self.energies[n - 1])

    @property
    def degenerate(self) -> bool:
        """True if any two returned levels are closer than ``DEGENERACY_TOL``."""
        return bool(self.k > 1 and np.min(np.diff(self.energies)) < DEGENERACY_TOL)


def fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so the entry of largest magnitude in each is positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def eigendecompose(H: TridiagonalHamiltonian, k: int | str = "all") -> Spectrum:
    """Lowest ``k`` eigenpairs of ``H`` (all of them for ``k="all"``), ascending."""
    L = H.L
    if k == "all":
        k = L
    if not 1 <= k <= L:
        raise ValueError(f"k must satisfy 1 <= k <= L={L}, got {k}")
    try:
        w, v = eigh_tridiagonal(
            H.diagonal, H.offdiagonal, select="i", select_range=(0, k - 1),
            lapack_driver="stebz",
        )
    except (LinAlgError, ValueError) as exc:
        raise SpectralError(f"tridiagonal eigensolver failed: {exc}", H.spec) from exc
    if w.shape != (k,) or not np.all(np.isfinite(w)):
        raise SpectralError("tridiagonal eigensolver returned an incomplete spectrum", H.spec)
    v = fix_signs(v)
    w.setflags(write=False)
    v.setflags(write=False)
    return Spectrum(w, v)


def ground_gap(H: TridiagonalHamiltonian) -> float:
    """``E_1 - E_0``; callers treat values below ``DEGENERACY_TOL`` as degenerate."""
    w = eigh_tridiagonal(
        H.diagonal, H.offdiagonal, eigvals_only=True, select="i", select_range=(0, 1)
    )
    return float(max(w[1] - w[0], 0.0))
