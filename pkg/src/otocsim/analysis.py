"""Disorder-ensemble statistics and the derived observables built on them.

Four stories live here:

* disorder ensembles — many realizations of the strongly disordered
  chain, each measured with one of the OTOC estimators, reduced to
  means, standard errors, per-realization distributions (the averaged
  curve hides a broad, eventually multimodal spread) and the fraction of
  realizations growing slower than the bare Ising dephasing value;
* light cones — threshold crossing times t_theta(r) of the averaged
  OTOC and log-space least-squares fits discriminating an exponential
  front t ~ e^(b r) from an algebraic one t ~ r^b;
* initial-state ensembles — Haar, random-bitstring and random-product
  states, including magnetization-sector variants;
* the sampling study — how fast the sample mean of C_z converges for
  each ensemble as a function of sample count and system size, and what
  that costs in actual measurements.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy.signal import find_peaks
from scipy.stats import gaussian_kde
from threadpoolctl import threadpool_limits

from .errors import NumericalError
from .evolve import DENSE_DIMENSION_CAP, SpinState, krylov_propagator, spectral_propagator
from .model import (
    ChainSpec,
    FullBasis,
    build_sector,
    largest_sector,
    sample_disorder,
    zero_disorder,
)
from .otoc import (
    _squared_otoc_chain,
    haar_state,
    ising_otoc_closed_form,
    otoc_exact_trace,
    otoc_typicality,
)
from .seeds import (
    TAG_BITSTRING,
    TAG_DISORDER,
    TAG_HAAR,
    TAG_PRODUCT,
    derive_seed,
    seed_sequence,
    spawn_rng,
)

ENSEMBLE_KINDS = ("haar", "random-bitstring", "random-product")


# ---------------------------------------------------------------------------
# Disorder ensembles

@dataclasses.dataclass(frozen=True)
class OTOCRequest:
    """What to measure for every disorder realization.

    ``estimator`` is "typicality" (Haar-averaged, ``n_haar`` vectors with
    fresh draws per realization) or "exact-trace" (the full normalized
    trace, affordable only for small chains).
    """

    site_i: int
    sites_j: tuple
    axis: str = "x"
    times: tuple = ()
    estimator: str = "typicality"
    n_haar: int | None = None
    n_up: int | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "sites_j", tuple(int(j) for j in np.atleast_1d(self.sites_j))
        )
        object.__setattr__(
            self, "times", tuple(float(t) for t in np.atleast_1d(self.times))
        )
        if self.axis not in ("x", "y", "z"):
            raise ValueError(f"axis must be 'x', 'y' or 'z', got {self.axis!r}")
        if self.estimator not in ("typicality", "exact-trace"):
            raise ValueError(
                f"estimator must be 'typicality' or 'exact-trace', got"
                f" {self.estimator!r}"
            )
        if not self.times:
            raise ValueError("times must be non-empty")
        if self.n_up is not None and self.axis != "z":
            raise ValueError(
                "magnetization sectors only support the z axis; transverse"
                " Paulis connect different sectors"
            )


@dataclasses.dataclass(frozen=True)
class EnsembleResult:
    """Per-realization OTOC series at a single disorder strength."""

    series: tuple
    strength: float
    n_realizations: int
    master_seed: int

    def __post_init__(self):
        if self.n_realizations < 1:
            raise ValueError("need at least one realization")
        if len(self.series) != self.n_realizations:
            raise ValueError("series count does not match n_realizations")
        first = self.series[0]
        for s in self.series[1:]:
            if not (
                np.array_equal(s.times, first.times)
                and np.array_equal(s.distances, first.distances)
            ):
                raise ValueError("all realizations must share time/distance grids")

    @property
    def times(self) -> np.ndarray:
        return self.series[0].times

    @property
    def distances(self) -> np.ndarray:
        return self.series[0].distances

    def stacked_values(self) -> np.ndarray:
        """All realizations as one (n_realizations, n_r, n_t) array."""
        return np.stack([s.values for s in self.series])


def _realization(args):
    """One disorder draw, measured; module-level so worker pools can pickle it.

    BLAS is pinned to a single thread so the result is bitwise identical
    whether computed here or in a process pool.
    """
    spec, strength, request, master_seed, index = args
    with threadpool_limits(limits=1):
        disorder = sample_disorder(
            strength, spec.n_sites, seed_sequence(master_seed, TAG_DISORDER, index)
        )
        basis = (
            None if request.n_up is None else build_sector(spec.n_sites, request.n_up)
        )
        propagator = spectral_propagator(spec, disorder, basis=basis)
        if request.estimator == "typicality":
            return otoc_typicality(
                propagator,
                request.site_i,
                request.sites_j,
                request.axis,
                request.times,
                n_haar=request.n_haar,
                seed=derive_seed(master_seed, TAG_HAAR, index),
            )
        return otoc_exact_trace(
            propagator, request.site_i, request.sites_j, request.axis, request.times
        )


def run_disorder_ensemble(
    spec: ChainSpec,
    strength: float,
    n_realizations: int,
    request: OTOCRequest,
    master_seed: int = 0,
    n_workers: int | None = None,
) -> EnsembleResult:
    """Measure ``n_realizations`` independent disorder draws.

    Realization ``k`` uses the derived disorder stream ``(master_seed,
    k)`` and, for the typicality estimator, its own Haar stream, so the
    result is a pure function of the arguments: fixed reduction order,
    and identical output for any ``n_workers``.
    """
    if n_realizations < 1:
        raise ValueError("n_realizations must be >= 1")
    jobs = [
        (spec, strength, request, master_seed, k) for k in range(n_realizations)
    ]
    if n_workers is not None and n_workers > 1:
        chunk = max(1, n_realizations // (8 * n_workers))
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            series = tuple(pool.map(_realization, jobs, chunksize=chunk))
    else:
        series = tuple(map(_realization, jobs))
    return EnsembleResult(
        series=series,
        strength=float(strength),
        n_realizations=n_realizations,
        master_seed=int(master_seed),
    )


def ensemble_mean_sem(result: EnsembleResult):
    """Unbiased mean and standard error over realizations, shape (n_r, n_t).

    A single realization has no spread estimate: the SEM is None.
    """
    values = result.stacked_values()
    mean = values.mean(axis=0)
    if result.n_realizations == 1:
        return mean, None
    sem = values.std(axis=0, ddof=1) / np.sqrt(result.n_realizations)
    return mean, sem


def _samples_at(result: EnsembleResult, r: int, t: float) -> np.ndarray:
    """Per-realization C values at one (distance, time) grid point."""
    matches = np.nonzero(result.distances == r)[0]
    if len(matches) == 0:
        raise ValueError(
            f"distance {r} not measured (have {result.distances.tolist()})"
        )
    time_idx = np.nonzero(np.isclose(result.times, t, rtol=1e-9, atol=1e-12))[0]
    if len(time_idx) == 0:
        raise ValueError(f"time {t} is not on the measurement grid")
    return result.stacked_values()[:, matches[0], time_idx[0]]


@dataclasses.dataclass(frozen=True)
class DensityEstimate:
    """Histogram plus kernel-smoothed density of C over realizations.

    ``kde_density`` is None when every realization produced the same
    value (a zero-width distribution has no kernel bandwidth); ``modes``
    counts local maxima of the smoothed density above the noise floor.
    """

    samples: np.ndarray
    bin_edges: np.ndarray
    histogram: np.ndarray
    kde_grid: np.ndarray
    kde_density: np.ndarray | None
    modes: int


def estimate_pdf(
    result: EnsembleResult, r: int, t: float, bins: int = 80
) -> DensityEstimate:
    """Distribution of C(r, t) across the ensemble on the [0, 4] support.

    The histogram uses fixed equal-width bins (so panels at different
    times share axes); the Gaussian KDE uses Silverman bandwidth and a
    slightly padded grid so edge peaks at C = 0 and C = 4 are resolved.
    Modes are KDE peaks with prominence above 5% of the maximum —
    multimodality is the signature observable here, distinguishing
    frozen realizations from scrambling ones.
    """
    samples = _samples_at(result, r, t)
    histogram, bin_edges = np.histogram(
        samples, bins=bins, range=(0.0, 4.0), density=True
    )
    kde_grid = np.linspace(-0.25, 4.25, 512)
    if np.ptp(samples) == 0.0:
        return DensityEstimate(
            samples=samples,
            bin_edges=bin_edges,
            histogram=histogram,
            kde_grid=kde_grid,
            kde_density=None,
            modes=1,
        )
    kde = gaussian_kde(samples, bw_method="silverman")
    kde_density = kde(kde_grid)
    peaks, _ = find_peaks(kde_density, prominence=0.05 * kde_density.max())
    return DensityEstimate(
        samples=samples,
        bin_edges=bin_edges,
        histogram=histogram,
        kde_grid=kde_grid,
        kde_density=kde_density,
        modes=int(len(peaks)),
    )


def slow_fraction(
    result: EnsembleResult, r: int, t: float, cutoff_spec: ChainSpec
) -> float:
    """Fraction of realizations strictly below the Ising value C^I(r, t).

    The cutoff is the closed-form dephasing OTOC of ``cutoff_spec`` —
    pass the power-law chain whose exponent defines "as slow as no
    flip-flops at all".  Strictly below: an ensemble that exactly
    reproduces Ising dynamics scores 0, not 1.
    """
    cutoff = ising_otoc_closed_form(cutoff_spec, [r], [t]).values[0, 0]
    samples = _samples_at(result, r, t)
    return float(np.mean(samples < cutoff))


# ---------------------------------------------------------------------------
# Light cones

def threshold_crossings(times, values, theta: float) -> np.ndarray:
    """First time each row of ``values`` reaches ``theta``, or NaN.

    Interpolates linearly in (ln t, C) between the bracketing grid
    points, matching the log-spaced grids the growth curves live on.  A
    curve already at or above ``theta`` at the first sample reports the
    first sample time.
    """
    if not 0.0 < theta < 4.0:
        raise ValueError(f"theta must lie in (0, 4), got {theta}")
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) < 2:
        raise ValueError("need a 1-D grid of at least two times")
    if np.any(times <= 0.0) or np.any(np.diff(times) <= 0.0):
        raise ValueError("times must be positive and strictly increasing")
    values = np.atleast_2d(np.asarray(values, dtype=float))
    if values.shape[1] != len(times):
        raise ValueError("values and times disagree on grid length")
    log_t = np.log(times)
    out = np.full(values.shape[0], np.nan)
    for d, row in enumerate(values):
        above = row >= theta
        if not above.any():
            continue
        k = int(np.argmax(above))
        if k == 0:
            out[d] = times[0]
            continue
        frac = (theta - row[k - 1]) / (row[k] - row[k - 1])
        out[d] = np.exp(log_t[k - 1] + frac * (log_t[k] - log_t[k - 1]))
    return out


@dataclasses.dataclass(frozen=True)
class LightConeFit:
    """Least-squares front shape: ln t_theta against r or ln r."""

    model: str
    beta: float
    beta_stderr: float
    residual: float
    n_points: int
    r_min: int
    threshold: float | None
    distances: np.ndarray
    crossing_times: np.ndarray


def fit_lightcone(
    distances,
    crossing_times,
    model: str,
    r_min: int = 2,
    theta: float | None = None,
) -> LightConeFit:
    """Fit the tail (r > r_min) of the crossing times to a front model.

    ``model`` "exponential" regresses ln t on r (t ~ e^(beta r));
    "algebraic" regresses ln t on ln r (t ~ r^beta).  Undefined
    crossings (NaN) are dropped before fitting; the residual sum of
    squares is comparable between the two models because both live in
    the same log-time coordinates.
    """
    if model not in ("exponential", "algebraic"):
        raise ValueError(f"model must be 'exponential' or 'algebraic', got {model!r}")
    distances = np.asarray(distances, dtype=float)
    crossing_times = np.asarray(crossing_times, dtype=float)
    keep = (distances > r_min) & np.isfinite(crossing_times) & (crossing_times > 0)
    r = distances[keep]
    t = crossing_times[keep]
    if len(r) < 3:
        raise ValueError(
            f"need at least 3 defined crossings beyond r = {r_min}, have {len(r)}"
        )
    x = r if model == "exponential" else np.log(r)
    y = np.log(t)
    design = np.column_stack([x, np.ones_like(x)])
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    prediction = design @ coef
    residual = float(np.sum((y - prediction) ** 2))
    dof = len(r) - 2
    variance = residual / dof if dof > 0 else np.nan
    stderr = float(np.sqrt(variance / np.sum((x - x.mean()) ** 2)))
    return LightConeFit(
        model=model,
        beta=float(coef[0]),
        beta_stderr=stderr,
        residual=residual,
        n_points=int(len(r)),
        r_min=int(r_min),
        threshold=theta,
        distances=distances,
        crossing_times=crossing_times,
    )


# ---------------------------------------------------------------------------
# Initial-state ensembles

_BITSTRING_VECTORS = {
    "z": (np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex)),
    "x": (
        np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
        np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0),
    ),
    "y": (
        np.array([1.0, 1.0j], dtype=complex) / np.sqrt(2.0),
        np.array([1.0, -1.0j], dtype=complex) / np.sqrt(2.0),
    ),
}


def _product_amplitudes(site_vectors, states) -> np.ndarray:
    """Amplitudes <n|prod_k psi_k> for the given basis-state indices."""
    amps = np.ones(len(states), dtype=complex)
    for k, vec in enumerate(site_vectors):
        amps *= vec[(states >> k) & 1]
    return amps


def random_bitstring_state(axis, n_sites, seed, n_up: int | None = None) -> SpinState:
    """Every site an independent +/- eigenstate of the chosen Pauli axis.

    With ``n_up`` the draw is a uniformly random configuration of the
    corresponding magnetization sector — only meaningful for the z axis,
    since transverse bitstrings are not sector states.
    """
    rng = np.random.default_rng(seed)
    if n_up is not None:
        if axis != "z":
            raise ValueError(
                "sector-restricted bitstrings exist only for axis 'z'"
            )
        basis = build_sector(n_sites, n_up)
        amplitudes = np.zeros(basis.dimension, dtype=complex)
        amplitudes[rng.integers(basis.dimension)] = 1.0
        return SpinState(amplitudes=amplitudes, basis=basis)
    if axis not in _BITSTRING_VECTORS:
        raise ValueError(f"axis must be 'x', 'y' or 'z', got {axis!r}")
    plus, minus = _BITSTRING_VECTORS[axis]
    site_vectors = [plus if rng.integers(2) == 0 else minus for _ in range(n_sites)]
    basis = FullBasis(n_sites)
    return SpinState(
        amplitudes=_product_amplitudes(site_vectors, basis.states), basis=basis
    )


def random_product_state(n_sites, seed, n_up: int | None = None) -> SpinState:
    """Independent Haar-random single-spin states on every site.

    With ``n_up`` the product state is projected onto that magnetization
    sector and renormalized (a generic product state overlaps every
    sector, so the projection is almost surely nonzero).
    """
    rng = np.random.default_rng(seed)
    single = rng.standard_normal((n_sites, 2)) + 1j * rng.standard_normal((n_sites, 2))
    single /= np.linalg.norm(single, axis=1, keepdims=True)
    basis = FullBasis(n_sites) if n_up is None else build_sector(n_sites, n_up)
    amplitudes = _product_amplitudes(single, basis.states)
    if n_up is not None:
        norm = np.linalg.norm(amplitudes)
        if norm < 1e-12:
            raise NumericalError(
                f"product state has no weight in the n_up = {n_up} sector"
            )
        amplitudes = amplitudes / norm
    return SpinState(amplitudes=amplitudes, basis=basis)


# ---------------------------------------------------------------------------
# Sampling study

@dataclasses.dataclass(frozen=True)
class SamplingStudyResult:
    """Convergence economics of one initial-state ensemble.

    ``sem[a, b]`` is the standard error of the sample mean of C_z
    (averaged over probes and times) at ``system_sizes[a]`` with
    ``sample_counts[b]`` states; ``cost`` holds the experimental
    measurement count behind each estimate (NaN for Haar states, which
    are not preparable shot by shot).
    """

    ensemble: str
    system_sizes: tuple
    sample_counts: tuple
    sem: np.ndarray
    cost: np.ndarray
    pool_size: int
    site_i: int
    times: np.ndarray
    master_seed: int


def _study_states(ensemble, n_sites, basis, pool_size, master_seed) -> np.ndarray:
    states = np.empty((basis.dimension, pool_size), dtype=complex)
    n_up = basis.n_up
    for s in range(pool_size):
        if ensemble == "haar":
            states[:, s] = haar_state(
                basis.dimension, spawn_rng(master_seed, TAG_HAAR, n_sites, s)
            ).amplitudes
        elif ensemble == "random-bitstring":
            states[:, s] = random_bitstring_state(
                "z",
                n_sites,
                spawn_rng(master_seed, TAG_BITSTRING, n_sites, s),
                n_up=n_up,
            ).amplitudes
        else:
            states[:, s] = random_product_state(
                n_sites, spawn_rng(master_seed, TAG_PRODUCT, n_sites, s), n_up=n_up
            ).amplitudes
    return states


def sampling_study(
    spec: ChainSpec,
    ensemble: str,
    sample_counts,
    system_sizes,
    times=None,
    site_i: int = 3,
    master_seed: int = 0,
    pool_size: int | None = None,
    dense_cap: int = DENSE_DIMENSION_CAP,
) -> SamplingStudyResult:
    """SEM of the (r, t)-averaged C_z estimate versus sample count.

    Runs the ordered chain (``spec`` with ``n_sites`` replaced per entry
    of ``system_sizes``) in its largest magnetization sector, measures
    the z-OTOC from ``site_i`` to every other site over ``times``
    (default: 20 linear steps from 0.1 to 2), and draws one pool of
    ``pool_size`` states per size.  The per-state spread of the pool
    gives the sampling error: SEM(n_s) = std / sqrt(n_s).  A pool of one
    state has no spread estimate, so every SEM is NaN.

    Chains whose sector fits under ``dense_cap`` use the dense spectral
    propagator; larger ones fall back to Krylov evolution.
    """
    if ensemble not in ENSEMBLE_KINDS:
        raise ValueError(f"ensemble must be one of {ENSEMBLE_KINDS}, got {ensemble!r}")
    sample_counts = tuple(int(c) for c in np.atleast_1d(sample_counts))
    system_sizes = tuple(int(n) for n in np.atleast_1d(system_sizes))
    if any(c < 1 for c in sample_counts):
        raise ValueError("sample counts must be >= 1")
    if times is None:
        times = np.linspace(0.1, 2.0, 20)
    times = np.asarray(times, dtype=float)
    if pool_size is None:
        pool_size = max(sample_counts)
    if pool_size < max(sample_counts):
        raise ValueError("pool_size must cover the largest sample count")

    sem = np.empty((len(system_sizes), len(sample_counts)))
    counts = np.asarray(sample_counts, dtype=float)
    for a, n_sites in enumerate(system_sizes):
        if not 0 <= site_i < n_sites:
            raise ValueError(f"site_i = {site_i} outside chain of {n_sites} sites")
        size_spec = dataclasses.replace(spec, n_sites=n_sites)
        disorder = zero_disorder(n_sites)
        basis = largest_sector(n_sites)
        if basis.dimension <= dense_cap:
            propagator = spectral_propagator(
                size_spec, disorder, basis=basis, dense_cap=dense_cap
            )
        else:
            propagator = krylov_propagator(size_spec, disorder, basis=basis)
        states = _study_states(ensemble, n_sites, basis, pool_size, master_seed)
        sites_j = [j for j in range(n_sites) if j != site_i]
        per_state = _squared_otoc_chain(
            propagator, site_i, sites_j, "z", times, states, want="norm2"
        )
        averaged = per_state.mean(axis=(1, 2))  # \bar{C}_z per pool state
        spread = averaged.std(ddof=1) if pool_size > 1 else np.nan
        sem[a] = spread / np.sqrt(counts)

    if ensemble == "haar":
        cost = np.full(sem.shape, np.nan)
    elif ensemble == "random-bitstring":
        cost = np.broadcast_to(counts, sem.shape).copy()
    else:
        cost = np.asarray(system_sizes, dtype=float)[:, None] * counts
    return SamplingStudyResult(
        ensemble=ensemble,
        system_sizes=system_sizes,
        sample_counts=sample_counts,
        sem=sem,
        cost=cost,
        pool_size=int(pool_size),
        site_i=int(site_i),
        times=times,
        master_seed=int(master_seed),
    )
