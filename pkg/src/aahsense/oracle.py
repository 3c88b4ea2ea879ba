"""Brute-force many-body check in the fixed-particle-number Fock space.

Basis states are occupation bitmasks with site 0 as the least significant bit,
listed in ascending integer order. The fermionic sign of ``c_i`` acting on a
state is the parity of the occupied sites below ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .model import LatticeSpec, build_hamiltonian
from .observables import DiagonalObservable

MAX_DIM = 100_000
# Above this the ground state comes from Lanczos instead of a dense eigh.
DENSE_DIM = 3000


class FockCapExceeded(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FockBasis:
    L: int
    n_f: int
    states: np.ndarray

    def __len__(self) -> int:
        return len(self.states)

    def occupations(self) -> np.ndarray:
        """``(dim, L)`` 0/1 matrix of site occupations."""
        return ((self.states[:, None] >> np.arange(self.L)) & 1).astype(float)


def fock_basis(L: int, n_f: int) -> FockBasis:
    if not 0 <= n_f <= L:
        raise ValueError(f"n_f must satisfy 0 <= n_f <= L, got n_f={n_f}, L={L}")
    dim = comb(L, n_f)
    if dim > MAX_DIM:
        raise FockCapExceeded(f"C({L}, {n_f}) = {dim} exceeds the Fock cap {MAX_DIM}")
    states = sorted(sum(1 << i for i in occ) for occ in combinations(range(L), n_f))
    return FockBasis(L, n_f, np.array(states, dtype=np.int64))


def _parity_below(state: int, site: int) -> int:
    return bin(state & ((1 << site) - 1)).count("1") & 1


def hop(state: int, i: int, j: int) -> tuple[int, int] | None:
    """``c_i^dag c_j |state>`` as ``(new_state, sign)``, or None if it vanishes."""
    if not (state >> j) & 1:
        return None
    s = state & ~(1 << j)
    sign = _parity_below(state, j)
    if (s >> i) & 1:
        return None
    sign ^= _parity_below(s, i)
    return s | (1 << i), -1 if sign else 1


def fock_hamiltonian(spec: LatticeSpec, basis: FockBasis) -> sp.csr_matrix:
    H1 = build_hamiltonian(spec)
    index = {int(s): k for k, s in enumerate(basis.states)}
    rows, cols, vals = [], [], []
    occ = basis.occupations()
    diag = occ @ H1.diagonal
    rows.extend(range(len(basis)))
    cols.extend(range(len(basis)))
    vals.extend(diag)
    for k, s in enumerate(basis.states):
        s = int(s)
        for i, t in enumerate(H1.offdiagonal):
            for a, b in ((i, i + 1), (i + 1, i)):
                out = hop(s, a, b)
                if out is not None:
                    new, sign = out
                    rows.append(index[new])
                    cols.append(k)
                    vals.append(sign * t)
    n = len(basis)
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def fock_ground_state(spec: LatticeSpec, n_f: int) -> tuple[float, np.ndarray, FockBasis]:
    """``(energy, amplitudes, basis)`` of the many-body ground state."""
    basis = fock_basis(spec.L, n_f)
    H = fock_hamiltonian(spec, basis)
    if len(basis) == 1:
        return float(H[0, 0]), np.ones(1), basis
    if len(basis) <= DENSE_DIM:
        w, v = np.linalg.eigh(H.toarray())
        energy, psi = w[0], v[:, 0]
    else:
        w, v = eigsh(H, k=1, which="SA", tol=1e-14)
        energy, psi = w[0], v[:, 0]
    psi = psi / np.linalg.norm(psi)
    psi = psi * np.sign(psi[np.argmax(np.abs(psi))])
    return float(energy), psi, basis


def fock_fidelity(spec: LatticeSpec, n_f: int, delta_h: float) -> float:
    """``|<Psi0(h)|Psi0(h + delta_h)>|`` computed directly in the Fock basis."""
    _, a, _ = fock_ground_state(spec, n_f)
    _, b, _ = fock_ground_state(spec.with_h(spec.h + delta_h), n_f)
    return float(min(abs(a @ b), 1.0))


def fock_moments(spec: LatticeSpec, n_f: int, obs: DiagonalObservable) -> tuple[float, float]:
    """``(<O>, <O^2> - <O>^2)`` in the many-body ground state."""
    _, psi, basis = fock_ground_state(spec, n_f)
    p = psi**2
    o = basis.occupations() @ obs.weights
    mean = float(p @ o)
    return mean, float(p @ o**2 - mean**2)


def fock_variance(spec: LatticeSpec, n_f: int, obs: DiagonalObservable) -> float:
    return fock_moments(spec, n_f, obs)[1]
