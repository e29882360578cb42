"""Disordered XXZ spin-1/2 chains: couplings, bases, Hamiltonians, Pauli ops.

The Hamiltonian family is

    H = sum_{i<j} J_ij (sx_i sx_j + sy_i sy_j + anisotropy * sz_i sz_j)
        + sum_i h_i sz_i

on an open chain, with ``J_ij`` either nearest-neighbour (``J`` for
``|i-j| == 1``) or power-law (``J / |i-j|**alpha``), and on-site fields
``h_i`` drawn uniformly from ``[-W, W]``.  A purely longitudinal (Ising)
variant ``sum_{i<j} J_ij sz_i sz_j + sum_i h_i sz_i`` is kept as a plain
diagonal, since it never needs a matrix representation.

Basis convention, used everywhere in the package: basis state ``n``
encodes site ``k`` in bit ``k`` (bit 0 = least significant), and a *clear*
bit means spin up, so ``sz_k |n> = (1 - 2*((n >> k) & 1)) |n>``.  The XX
part flips pairs of anti-aligned spins and conserves total magnetization,
which is what the sector bases below exploit.
"""

from __future__ import annotations

import dataclasses
from math import comb

import numpy as np
from scipy import sparse


NEAREST_NEIGHBOR = "nearest-neighbor"
POWER_LAW = "power-law"

_PAULI_AXES = ("x", "y", "z")


@dataclasses.dataclass(frozen=True)
class ChainSpec:
    """Static description of a chain: geometry and coupling law.

    ``alpha`` is the power-law exponent and must be given if and only if
    ``interaction == "power-law"``.  ``coupling`` is the nearest-neighbour
    energy scale J; all times in the package are measured in 1/J when
    ``coupling == 1`` (the default).
    """

    n_sites: int
    interaction: str
    anisotropy: float
    alpha: float | None = None
    coupling: float = 1.0

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError(f"need at least 2 sites, got {self.n_sites}")
        if self.interaction not in (NEAREST_NEIGHBOR, POWER_LAW):
            raise ValueError(
                f"interaction must be {NEAREST_NEIGHBOR!r} or {POWER_LAW!r},"
                f" got {self.interaction!r}"
            )
        if self.interaction == POWER_LAW:
            if self.alpha is None or self.alpha <= 0:
                raise ValueError("power-law interaction needs alpha > 0")
        elif self.alpha is not None:
            raise ValueError("alpha is only meaningful for power-law interaction")


def build_couplings(spec: ChainSpec) -> np.ndarray:
    """Return the symmetric coupling matrix J_ij (zero diagonal)."""
    idx = np.arange(spec.n_sites)
    dist = np.abs(idx[:, None] - idx[None, :]).astype(float)
    if spec.interaction == NEAREST_NEIGHBOR:
        return np.where(dist == 1.0, float(spec.coupling), 0.0)
    with np.errstate(divide="ignore"):
        j = np.where(dist > 0.0, spec.coupling / dist**spec.alpha, 0.0)
    return j


def coupling_at_distance(spec: ChainSpec, r: int) -> float:
    """J_ij for a pair at distance ``r >= 1`` (independent of position)."""
    if r < 1:
        raise ValueError(f"distance must be >= 1, got {r}")
    if spec.interaction == NEAREST_NEIGHBOR:
        return float(spec.coupling) if r == 1 else 0.0
    return float(spec.coupling) / float(r) ** spec.alpha


@dataclasses.dataclass(frozen=True)
class DisorderRealization:
    """One draw of the on-site longitudinal fields h_i."""

    fields: np.ndarray
    strength: float

    def __post_init__(self):
        fields = np.array(self.fields, dtype=float)
        fields.flags.writeable = False
        object.__setattr__(self, "fields", fields)


def sample_disorder(strength: float, n_sites: int, seed) -> DisorderRealization:
    """Draw h_i uniformly from [-strength, strength]."""
    if strength < 0:
        raise ValueError(f"disorder strength must be >= 0, got {strength}")
    rng = np.random.default_rng(seed)
    fields = rng.uniform(-strength, strength, size=n_sites)
    return DisorderRealization(fields=fields, strength=float(strength))


def zero_disorder(n_sites: int) -> DisorderRealization:
    """The clean chain: all fields zero."""
    return DisorderRealization(fields=np.zeros(n_sites), strength=0.0)


# ---------------------------------------------------------------------------
# Bases


@dataclasses.dataclass(frozen=True)
class FullBasis:
    """The complete 2**n_sites product basis, indexed by the states themselves."""

    n_sites: int

    @property
    def dimension(self) -> int:
        return 1 << self.n_sites

    @property
    def states(self) -> np.ndarray:
        return np.arange(self.dimension, dtype=np.int64)

    def index_of(self, states):
        """Basis index of each encoded state (the identity map here)."""
        return np.asarray(states, dtype=np.int64)


@dataclasses.dataclass(frozen=True)
class SectorBasis:
    """Fixed-magnetization subspace with ``n_up`` up spins (ascending states)."""

    n_sites: int
    n_up: int
    states: np.ndarray

    def __post_init__(self):
        states = np.array(self.states, dtype=np.int64)
        states.flags.writeable = False
        object.__setattr__(self, "states", states)

    @property
    def dimension(self) -> int:
        return len(self.states)

    def index_of(self, states):
        """Position of each encoded state within the sector's ordering."""
        return np.searchsorted(self.states, np.asarray(states, dtype=np.int64))


def build_sector(n_sites: int, n_up: int) -> SectorBasis:
    """All basis states with exactly ``n_up`` up spins.

    Up spins are *clear* bits, so the selected states carry
    ``n_sites - n_up`` set bits; the dimension is ``comb(n_sites, n_up)``.
    """
    if not 0 <= n_up <= n_sites:
        raise ValueError(f"n_up must lie in [0, {n_sites}], got {n_up}")
    every = np.arange(1 << n_sites, dtype=np.int64)
    picked = every[np.bitwise_count(every) == (n_sites - n_up)]
    return SectorBasis(n_sites=n_sites, n_up=n_up, states=picked)


def largest_sector(n_sites: int) -> SectorBasis:
    """The magnetization sector of maximal dimension (n_up = n_sites // 2)."""
    return build_sector(n_sites, n_sites // 2)


def z_values(basis) -> np.ndarray:
    """sz eigenvalues per (state, site): shape (dimension, n_sites), entries +-1."""
    bits = (basis.states[:, None] >> np.arange(basis.n_sites)[None, :]) & 1
    return 1.0 - 2.0 * bits


# ---------------------------------------------------------------------------
# Hamiltonians


@dataclasses.dataclass
class HamiltonianMatrix:
    """A Hamiltonian in an explicit basis.

    ``matrix`` is a dense ``(D, D)`` array, a CSR matrix, or — when
    ``diagonal`` is true — just the 1-D vector of diagonal entries.
    ``conserves_magnetization`` records whether the operator is block
    diagonal over fixed-``n_up`` sectors, which the spectral propagator
    uses to diagonalize block by block.
    """

    matrix: object
    basis: object
    diagonal: bool = False
    conserves_magnetization: bool = True

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    def dense(self) -> np.ndarray:
        """The full (D, D) array, materializing sparse/diagonal storage."""
        if self.diagonal:
            return np.diag(np.asarray(self.matrix, dtype=float))
        if sparse.issparse(self.matrix):
            return self.matrix.toarray()
        return np.asarray(self.matrix)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Apply H to a vector or a stack of column vectors."""
        if self.diagonal:
            d = np.asarray(self.matrix)
            return d[:, None] * x if x.ndim == 2 else d * x
        return self.matrix @ x


def _diagonal_elements(spec, disorder, basis, zz_scale):
    """sum_{i<j} zz_scale*J_ij z_i z_j + sum_i h_i z_i for every basis state."""
    z = z_values(basis)
    couplings = build_couplings(spec)
    # J has a zero diagonal and the einsum double-counts ordered pairs.
    interaction = 0.5 * zz_scale * np.einsum("ni,ij,nj->n", z, couplings, z)
    return interaction + z @ np.asarray(disorder.fields, dtype=float)


def _flip_flop_entries(spec, basis):
    """Row/column indices and values of the XX flip-flop part.

    Yields the matrix elements ``<m| 2 J_ij |n>`` connecting each state
    ``n`` to ``m = n XOR (bit i | bit j)`` whenever sites i and j are
    anti-aligned.  Both orderings are emitted, keeping the result
    manifestly symmetric.
    """
    states = basis.states
    couplings = build_couplings(spec)
    rows, cols, vals = [], [], []
    for i in range(spec.n_sites - 1):
        for j in range(i + 1, spec.n_sites):
            j_ij = couplings[i, j]
            if j_ij == 0.0:
                continue
            mask = (1 << i) | (1 << j)
            differ = ((states >> i) & 1) != ((states >> j) & 1)
            src = states[differ]
            dst = src ^ mask
            rows.append(basis.index_of(dst))
            cols.append(basis.index_of(src))
            vals.append(np.full(len(src), 2.0 * j_ij))
    if not rows:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty, np.empty(0, dtype=float)
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)


def build_hamiltonian(
    spec: ChainSpec,
    disorder: DisorderRealization,
    basis=None,
    storage: str = "auto",
    dense_cap: int = 8192,
) -> HamiltonianMatrix:
    """Assemble the XXZ Hamiltonian in ``basis`` (full basis by default).

    ``storage`` is ``"dense"``, ``"sparse"`` or ``"auto"`` (dense up to
    ``dense_cap`` states, CSR beyond).  The operator conserves total
    magnetization, so a ``SectorBasis`` is legitimate and gives the
    restriction of H to that sector.
    """
    if basis is None:
        basis = FullBasis(spec.n_sites)
    if basis.n_sites != spec.n_sites:
        raise ValueError("basis and spec disagree on the number of sites")
    if len(np.asarray(disorder.fields)) != spec.n_sites:
        raise ValueError("disorder realization has the wrong number of sites")
    if storage not in ("auto", "dense", "sparse"):
        raise ValueError(f"unknown storage {storage!r}")

    dim = basis.dimension
    diag = _diagonal_elements(spec, disorder, basis, zz_scale=spec.anisotropy)
    rows, cols, vals = _flip_flop_entries(spec, basis)

    use_dense = storage == "dense" or (storage == "auto" and dim <= dense_cap)
    if use_dense:
        h = np.zeros((dim, dim))
        np.add.at(h, (rows, cols), vals)
        h[np.arange(dim), np.arange(dim)] = diag
        matrix = h
    else:
        all_rows = np.concatenate([rows, np.arange(dim)])
        all_cols = np.concatenate([cols, np.arange(dim)])
        all_vals = np.concatenate([vals, diag])
        matrix = sparse.csr_matrix((all_vals, (all_rows, all_cols)), shape=(dim, dim))
    return HamiltonianMatrix(matrix=matrix, basis=basis, diagonal=False)


def build_ising_hamiltonian(
    spec: ChainSpec, disorder: DisorderRealization, basis=None
) -> HamiltonianMatrix:
    """The purely longitudinal model: diagonal energies, stored as a vector."""
    if basis is None:
        basis = FullBasis(spec.n_sites)
    if basis.n_sites != spec.n_sites:
        raise ValueError("basis and spec disagree on the number of sites")
    diag = _diagonal_elements(spec, disorder, basis, zz_scale=1.0)
    return HamiltonianMatrix(matrix=diag, basis=basis, diagonal=True)


# ---------------------------------------------------------------------------
# Local Pauli operators


@dataclasses.dataclass
class PauliOp:
    """A single-site Pauli operator as a permutation with phases.

    The action on an amplitude vector is
    ``(P psi)[k] = coefficients[k] * psi[permutation[k]]``, with a missing
    ``permutation`` meaning the identity and missing ``coefficients``
    meaning all ones.  This keeps sx/sy/sz applications O(D) and free of
    matrix storage.
    """

    axis: str
    site: int
    basis: object
    permutation: np.ndarray | None
    coefficients: np.ndarray | None

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        """P @ amplitudes for a vector (D,) or column stack (D, k)."""
        out = amplitudes if self.permutation is None else amplitudes[self.permutation]
        if self.coefficients is None:
            return out.copy() if out is amplitudes else out
        coeff = self.coefficients
        if amplitudes.ndim == 2:
            coeff = coeff[:, None]
        return out * coeff

    def matrix(self, as_sparse: bool = False):
        """Explicit (D, D) matrix, mainly for cross-checks and small systems."""
        dim = self.basis.dimension
        perm = (
            np.arange(dim, dtype=np.int64) if self.permutation is None else self.permutation
        )
        coeff = np.ones(dim) if self.coefficients is None else self.coefficients
        mat = sparse.csr_matrix(
            (coeff, (np.arange(dim), perm)), shape=(dim, dim)
        )
        return mat if as_sparse else mat.toarray()


def local_pauli(axis: str, site: int, basis) -> PauliOp:
    """The Pauli operator ``axis`` in {'x','y','z'} on ``site`` in ``basis``.

    sx and sy move amplitude between magnetization sectors, so they are
    only defined on a ``FullBasis``; asking for them on a ``SectorBasis``
    raises ``ValueError``.
    """
    if axis not in _PAULI_AXES:
        raise ValueError(f"axis must be one of {_PAULI_AXES}, got {axis!r}")
    if not 0 <= site < basis.n_sites:
        raise ValueError(f"site {site} outside chain of {basis.n_sites} sites")
    states = basis.states
    bit = (states >> site) & 1
    if axis == "z":
        return PauliOp(axis, site, basis, permutation=None, coefficients=1.0 - 2.0 * bit)
    if isinstance(basis, SectorBasis):
        raise ValueError(
            f"s{axis} on site {site} leaves the fixed-magnetization sector;"
            " use the full basis"
        )
    perm = basis.index_of(states ^ (1 << site))
    if axis == "x":
        return PauliOp(axis, site, basis, permutation=perm, coefficients=None)
    # sy|up> = i|down>, sy|down> = -i|up>: the element <n|sy|n^mask> is +i
    # when site's bit in n is set (down) and -i when clear (up).
    coeff = np.where(bit == 1, 1j, -1j)
    return PauliOp(axis, site, basis, permutation=perm, coefficients=coeff)


def sector_dimension(n_sites: int, n_up: int) -> int:
    """comb(n_sites, n_up) without building the basis."""
    return comb(n_sites, n_up)
