"""Unitary time evolution under real symmetric spin Hamiltonians.

Two interchangeable engines share the ``evolve(x, t, scale)`` interface,
which applies ``exp(-1j * scale * t * H)`` to a vector or to a stack of
column vectors:

* ``Propagator`` — full spectral decomposition, the workhorse for long
  times and many repeated evolutions of the same Hamiltonian.  When H
  conserves total magnetization the basis is sorted by sector and each
  block is diagonalized separately, which cuts the eigensolve cost by
  roughly 35x at 13 sites compared to one dense factorization.
* ``KrylovPropagator`` — adaptive Lanczos stepping for dimensions past
  the dense cap, where a spectral decomposition would not fit.

Amplitude ordering always follows the basis handed in (``FullBasis`` or
``SectorBasis``); the sector sorting is an internal detail.
"""

from __future__ import annotations

import dataclasses

import numpy as np
from scipy import sparse
from scipy.linalg import eigh, eigh_tridiagonal

from .errors import DimensionCapError, KrylovConvergenceError
from .model import (
    ChainSpec,
    DisorderRealization,
    FullBasis,
    HamiltonianMatrix,
    SectorBasis,
    build_hamiltonian,
    build_ising_hamiltonian,
    build_sector,
)

DENSE_DIMENSION_CAP = 8192


@dataclasses.dataclass
class SpinState:
    """An amplitude vector tagged with the basis it lives in."""

    amplitudes: np.ndarray
    basis: object = None

    @property
    def dimension(self) -> int:
        return len(self.amplitudes)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclasses.dataclass
class _SpectralBlock:
    span: slice  # positions in sorted order
    energies: np.ndarray
    vectors: np.ndarray | None  # None: H is diagonal on this block


def _real_matmul(v: np.ndarray, x: np.ndarray) -> np.ndarray:
    """v @ x where v is real; complex x goes through one real GEMM.

    Viewing a C-contiguous complex (d, k) block as real (d, 2k) keeps the
    multiply in dgemm instead of zgemm, which matters because every evolve
    is four such products.
    """
    if not np.iscomplexobj(x) or np.iscomplexobj(v):
        return v @ x
    xr = np.ascontiguousarray(x)
    d, k = xr.shape
    return (v @ xr.view(np.float64).reshape(d, 2 * k)).view(np.complex128)


class Propagator:
    """exp(-1j t H) applied through a (block) spectral decomposition."""

    def __init__(self, basis, blocks, order):
        self.basis = basis
        self.blocks = blocks
        self.order = order
        position = np.empty_like(order)
        position[order] = np.arange(len(order))
        self.position = position  # basis index -> sorted position
        self.trivial_order = bool(np.array_equal(order, np.arange(len(order))))

    @property
    def dimension(self) -> int:
        return len(self.order)

    @property
    def eigenvalues(self) -> np.ndarray:
        """All eigenvalues of H, ascending."""
        return np.sort(np.concatenate([b.energies for b in self.blocks]))

    def evolve(self, x: np.ndarray, t: float, scale: float = 1.0) -> np.ndarray:
        """exp(-1j*scale*t*H) @ x for x of shape (D,) or (D, k), basis order."""
        x = np.asarray(x)
        single = x.ndim == 1
        if single:
            x = x[:, None]
        if x.shape[0] != self.dimension:
            raise ValueError(
                f"state has dimension {x.shape[0]}, propagator {self.dimension}"
            )
        xs = x if self.trivial_order else x[self.order]
        ys = self.evolve_sorted(xs, t, scale)
        if not self.trivial_order:
            out = np.empty_like(ys)
            out[self.order] = ys
            ys = out
        return ys[:, 0] if single else ys

    def evolve_sorted(self, xs: np.ndarray, t: float, scale: float = 1.0) -> np.ndarray:
        """Same as ``evolve`` but for 2-D blocks already in sorted order."""
        out = np.empty(xs.shape, dtype=np.complex128)
        for block in self.blocks:
            seg = xs[block.span]
            phases = np.exp((-1j * scale * t) * block.energies)
            if block.vectors is None:
                out[block.span] = phases[:, None] * seg
            else:
                modes = _real_matmul(block.vectors.T, seg)
                if np.iscomplexobj(modes):
                    modes *= phases[:, None]
                else:
                    modes = modes * phases[:, None]
                out[block.span] = _real_matmul(block.vectors, modes)
        return out


def _block_propagator_from_groups(basis, groups):
    """Assemble a Propagator from (indices, energies, vectors) groups."""
    order = np.concatenate([g[0] for g in groups])
    blocks = []
    start = 0
    for indices, energies, vectors in groups:
        stop = start + len(indices)
        blocks.append(_SpectralBlock(slice(start, stop), energies, vectors))
        start = stop
    return Propagator(basis=basis, blocks=blocks, order=order)


def diagonalize(h: HamiltonianMatrix, dense_cap: int = DENSE_DIMENSION_CAP) -> Propagator:
    """Spectral decomposition of an assembled ``HamiltonianMatrix``.

    Diagonal Hamiltonians cost nothing; magnetization-conserving ones are
    diagonalized sector by sector; anything else gets one dense ``eigh``.
    Blocks larger than ``dense_cap`` raise ``DimensionCapError`` — use the
    Krylov propagator instead at those sizes.
    """
    basis = h.basis
    dim = basis.dimension
    identity = np.arange(dim, dtype=np.int64)
    if h.diagonal:
        energies = np.asarray(h.matrix, dtype=float)
        return _block_propagator_from_groups(basis, [(identity, energies, None)])

    def dense_block(mat, what):
        if mat.shape[0] > dense_cap:
            raise DimensionCapError(
                f"{what} has dimension {mat.shape[0]} > dense cap {dense_cap};"
                " use KrylovPropagator/evolve_krylov instead"
            )
        energies, vectors = eigh(mat, driver="evd")
        return energies, vectors

    matrix = h.matrix
    if h.conserves_magnetization and isinstance(basis, FullBasis):
        groups = []
        counts = np.bitwise_count(basis.states)
        for n_down in range(basis.n_sites + 1):
            idx = identity[counts == n_down]
            sub = (
                matrix[np.ix_(idx, idx)]
                if isinstance(matrix, np.ndarray)
                else matrix[idx][:, idx].toarray()
            )
            energies, vectors = dense_block(sub, f"magnetization block {n_down}")
            groups.append((idx, energies, vectors))
        return _block_propagator_from_groups(basis, groups)

    if sparse.issparse(matrix):
        if dim > dense_cap:
            raise DimensionCapError(
                f"dimension {dim} > dense cap {dense_cap};"
                " use KrylovPropagator/evolve_krylov instead"
            )
        matrix = matrix.toarray()
    energies, vectors = dense_block(matrix, "Hamiltonian")
    return _block_propagator_from_groups(basis, [(identity, energies, vectors)])


def spectral_propagator(
    spec: ChainSpec,
    disorder: DisorderRealization,
    basis=None,
    ising: bool = False,
    dense_cap: int = DENSE_DIMENSION_CAP,
) -> Propagator:
    """Build and diagonalize the chain Hamiltonian without materializing it.

    For a full basis the XXZ Hamiltonian is assembled sector by sector, so
    the peak memory is one sector block (about 24 MB at 13 sites) instead
    of the 537 MB dense matrix.  ``ising=True`` selects the longitudinal
    model, whose "diagonalization" is free.
    """
    if basis is None:
        basis = FullBasis(spec.n_sites)
    if ising:
        return diagonalize(build_ising_hamiltonian(spec, disorder, basis), dense_cap)
    if isinstance(basis, SectorBasis):
        if basis.dimension > dense_cap:
            raise DimensionCapError(
                f"sector dimension {basis.dimension} > dense cap {dense_cap};"
                " use KrylovPropagator/evolve_krylov instead"
            )
        return diagonalize(
            build_hamiltonian(spec, disorder, basis, storage="dense"), dense_cap
        )
    groups = []
    for n_up in range(spec.n_sites, -1, -1):
        sector = build_sector(spec.n_sites, n_up)
        if sector.dimension > dense_cap:
            raise DimensionCapError(
                f"magnetization sector n_up={n_up} has dimension"
                f" {sector.dimension} > dense cap {dense_cap};"
                " use KrylovPropagator/evolve_krylov instead"
            )
        sub = build_hamiltonian(spec, disorder, sector, storage="dense").matrix
        energies, vectors = eigh(sub, driver="evd")
        groups.append((basis.index_of(sector.states), energies, vectors))
    return _block_propagator_from_groups(basis, groups)


def evolve_exact(propagator: Propagator, state, t: float, scale: float = 1.0):
    """Evolve a ``SpinState`` (or bare amplitudes) and return the same kind."""
    if isinstance(state, SpinState):
        return SpinState(
            amplitudes=propagator.evolve(state.amplitudes, t, scale), basis=state.basis
        )
    return propagator.evolve(state, t, scale)


# ---------------------------------------------------------------------------
# Lanczos (Krylov) propagation


def _lanczos_step(matvec, y, tau, tol, max_dim):
    """One attempted step exp(-1j*tau*H) y; returns (result, error_estimate).

    Plain Lanczos without reorthogonalization: local loss of orthogonality
    costs a few extra iterations but never the accuracy of exp(T) in the
    generated subspace.  The error estimate is the usual last-component
    one, ``beta_m * |[exp(-1j*tau*T)]_{m,1}|``.
    """
    norm_y = np.linalg.norm(y)
    basis_vectors = np.empty((max_dim, len(y)), dtype=np.complex128)
    basis_vectors[0] = y / norm_y
    alphas = np.empty(max_dim)
    betas = np.empty(max_dim)
    m = 0
    breakdown = False
    for m in range(1, max_dim + 1):
        w = matvec(basis_vectors[m - 1])
        alphas[m - 1] = np.vdot(basis_vectors[m - 1], w).real
        w = w - alphas[m - 1] * basis_vectors[m - 1]
        if m > 1:
            w = w - betas[m - 2] * basis_vectors[m - 2]
        beta = np.linalg.norm(w)
        betas[m - 1] = beta
        if beta < 1e-12 * max(1.0, abs(alphas[m - 1])):
            breakdown = True  # exact invariant subspace: result is exact
            break
        if m < max_dim:
            basis_vectors[m] = w / beta
    evals, evecs = eigh_tridiagonal(alphas[:m], betas[: m - 1])
    # exp(-1j*tau*T) e1 in the Lanczos basis
    small = evecs @ (np.exp(-1j * tau * evals) * evecs[0, :])
    error = 0.0 if breakdown else float(abs(betas[m - 1] * small[-1]))
    result = norm_y * (small @ basis_vectors[:m])
    return result, error


def _expm_multiply_lanczos(matvec, x, tau, tol, max_dim, max_halvings=40):
    """exp(-1j*tau*H) x via adaptive substeps of Lanczos width max_dim."""
    if tau == 0.0:
        return x.astype(np.complex128, copy=True)
    y = x.astype(np.complex128, copy=True)
    remaining = float(tau)
    dt = remaining
    direction = np.sign(remaining)
    while direction * remaining > 0.0:
        if direction * dt > direction * remaining:
            dt = remaining
        halvings = 0
        while True:
            candidate, error = _lanczos_step(matvec, y, dt, tol, max_dim)
            if error <= tol:
                break
            dt /= 2.0
            halvings += 1
            if halvings > max_halvings:
                raise KrylovConvergenceError(
                    f"Lanczos step stalled at dt={dt:.3e}"
                    f" (error estimate {error:.3e} > tol {tol:.3e})",
                    residual=error,
                )
        y = candidate
        remaining -= dt
        if halvings == 0:
            dt *= 2.0  # cheap step: try growing back
    return y


class KrylovPropagator:
    """Lanczos-based ``evolve(x, t, scale)`` for Hamiltonians past the dense cap.

    Accepts a ``HamiltonianMatrix``, a sparse matrix or a dense array.
    Diagonal Hamiltonians short-circuit to exact phase multiplication.
    """

    def __init__(self, h, tol: float = 1e-8, max_dim: int = 30):
        if isinstance(h, HamiltonianMatrix):
            self.basis = h.basis
            self._diagonal = np.asarray(h.matrix, dtype=float) if h.diagonal else None
            operator = h.matrix
            self._dim = h.dimension
        else:
            self.basis = None
            self._diagonal = None
            operator = h
            self._dim = h.shape[0]
        self._matvec = (lambda v: operator @ v) if self._diagonal is None else None
        self.tol = float(tol)
        self.max_dim = int(max_dim)

    @property
    def dimension(self) -> int:
        return self._dim

    def evolve(self, x: np.ndarray, t: float, scale: float = 1.0) -> np.ndarray:
        x = np.asarray(x)
        single = x.ndim == 1
        if single:
            x = x[:, None]
        if x.shape[0] != self._dim:
            raise ValueError(
                f"state has dimension {x.shape[0]}, propagator {self._dim}"
            )
        if self._diagonal is not None:
            phases = np.exp((-1j * scale * t) * self._diagonal)
            out = phases[:, None] * x
            return out[:, 0] if single else out
        tau = scale * t
        out = np.empty(x.shape, dtype=np.complex128)
        for k in range(x.shape[1]):
            out[:, k] = _expm_multiply_lanczos(
                self._matvec, x[:, k], tau, self.tol, self.max_dim
            )
        return out[:, 0] if single else out

    # Engine compatibility with Propagator: no sector reordering needed.
    trivial_order = True

    def evolve_sorted(self, xs: np.ndarray, t: float, scale: float = 1.0) -> np.ndarray:
        return self.evolve(xs, t, scale)


def krylov_propagator(
    spec: ChainSpec,
    disorder: DisorderRealization,
    basis=None,
    tol: float = 1e-8,
    max_dim: int = 30,
) -> KrylovPropagator:
    """Sparse-matrix Lanczos propagator for the XXZ chain in ``basis``."""
    h = build_hamiltonian(spec, disorder, basis, storage="sparse")
    return KrylovPropagator(h, tol=tol, max_dim=max_dim)


def evolve_krylov(h, state, t: float, scale: float = 1.0, tol: float = 1e-8, max_dim: int = 30):
    """One-shot Lanczos evolution of a state under ``h``."""
    prop = KrylovPropagator(h, tol=tol, max_dim=max_dim)
    if isinstance(state, SpinState):
        return SpinState(
            amplitudes=prop.evolve(state.amplitudes, t, scale), basis=state.basis
        )
    return prop.evolve(state, t, scale)


# ---------------------------------------------------------------------------
# Time grids


def log_time_grid(start: float, stop: float, points: int) -> np.ndarray:
    """Logarithmically spaced times, inclusive of both endpoints."""
    if start <= 0 or stop <= 0:
        raise ValueError("log grid needs strictly positive endpoints")
    if stop <= start:
        raise ValueError("need stop > start")
    if points < 2:
        raise ValueError("need at least 2 points")
    return np.geomspace(start, stop, points)


def linear_time_grid(start: float, stop: float, points: int) -> np.ndarray:
    """Linearly spaced times, inclusive of both endpoints."""
    if stop <= start:
        raise ValueError("need stop > start")
    if points < 2:
        raise ValueError("need at least 2 points")
    return np.linspace(start, stop, points)
