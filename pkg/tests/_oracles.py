"""Brute-force reference implementations shared by the test modules.

Everything here is built the slow, obvious way — explicit Kronecker
products, dense expm, matrix commutators — precisely so it shares no code
path with the package internals it is used to check.
"""

import numpy as np
from scipy.linalg import expm

from otocsim.model import build_couplings

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = {"x": SX, "y": SY, "z": SZ}


def kron_site_operator(op, site, n_sites):
    """Single-site operator via explicit Kronecker products.

    Site k lives in bit k of the basis index (bit 0 least significant),
    which under np.kron means the *last* factor acts on site 0.
    """
    mat = np.array([[1.0]], dtype=complex)
    for k in range(n_sites - 1, -1, -1):
        mat = np.kron(mat, op if k == site else np.eye(2, dtype=complex))
    return mat


def kron_pair_sum(axis, spec):
    """sum_{i<j} J_ij s^axis_i s^axis_j, dense."""
    n = spec.n_sites
    couplings = build_couplings(spec)
    out = np.zeros((2**n, 2**n), dtype=complex)
    for i in range(n - 1):
        for j in range(i + 1, n):
            if couplings[i, j] != 0.0:
                out += couplings[i, j] * (
                    kron_site_operator(PAULI[axis], i, n)
                    @ kron_site_operator(PAULI[axis], j, n)
                )
    return out


def kron_field_sum(axis, fields):
    n = len(fields)
    out = np.zeros((2**n, 2**n), dtype=complex)
    for i, h in enumerate(fields):
        if h != 0.0:
            out += h * kron_site_operator(PAULI[axis], i, n)
    return out


def kron_hamiltonian(spec, fields, zz_scale=None):
    """Reference XXZ (or Ising when zz_scale is given: no flip-flop part)."""
    ising = zz_scale is not None
    scale = zz_scale if ising else spec.anisotropy
    h = scale * kron_pair_sum("z", spec)
    if not ising:
        h = h + kron_pair_sum("x", spec) + kron_pair_sum("y", spec)
    return h + kron_field_sum("z", fields)


def heisenberg_pauli(h_dense, axis, site, n_sites, t):
    """W(t) = exp(+iHt) W exp(-iHt), dense."""
    w = kron_site_operator(PAULI[axis], site, n_sites)
    u = expm(-1j * t * h_dense)
    return u.conj().T @ w @ u


def brute_state_otoc(h_dense, psi, site_i, site_j, axis, t, n_sites):
    wt = heisenberg_pauli(h_dense, axis, site_i, n_sites, t)
    v = kron_site_operator(PAULI[axis], site_j, n_sites)
    f = psi.conj() @ (wt @ v @ wt @ (v @ psi))
    return 2.0 * (1.0 - f.real)


def brute_trace_otoc(h_dense, site_i, site_j, axis, t, n_sites):
    """Infinite-temperature OTOC through the cancellation-free commutator norm."""
    wt = heisenberg_pauli(h_dense, axis, site_i, n_sites, t)
    v = kron_site_operator(PAULI[axis], site_j, n_sites)
    comm = wt @ v - v @ wt
    return np.linalg.norm(comm, "fro") ** 2 / h_dense.shape[0]
