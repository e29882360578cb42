"""Out-of-time-order correlators in disordered XXZ spin chains.

The package is organized as a pipeline: ``model`` builds sector-blocked
Hamiltonians for the disordered chain, ``evolve`` turns them into exact
or Krylov propagators, ``otoc`` measures squared commutators through a
cancellation-free state-norm identity, ``floquet`` engineers the chain
with pulse sequences and runs the echo protocol that makes OTOCs
measurable, and ``analysis`` reduces disorder ensembles to light cones,
distributions and sampling-cost curves.  ``cli`` wraps the experiments
into reproducible command-line runs.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DimensionCapError,
    KrylovConvergenceError,
    NumericalError,
    OtocsimError,
)
from .model import (
    NEAREST_NEIGHBOR,
    POWER_LAW,
    ChainSpec,
    DisorderRealization,
    FullBasis,
    SectorBasis,
    build_couplings,
    build_hamiltonian,
    build_ising_hamiltonian,
    build_sector,
    coupling_at_distance,
    largest_sector,
    local_pauli,
    sample_disorder,
    sector_dimension,
    z_values,
    zero_disorder,
)
from .evolve import (
    DENSE_DIMENSION_CAP,
    KrylovPropagator,
    Propagator,
    SpinState,
    diagonalize,
    evolve_exact,
    evolve_krylov,
    krylov_propagator,
    linear_time_grid,
    log_time_grid,
    spectral_propagator,
)
from .otoc import (
    OTOCSeries,
    default_n_haar,
    haar_state,
    ising_otoc_closed_form,
    otoc_exact_trace,
    otoc_state,
    otoc_typicality,
)
from .floquet import (
    EchoProtocolConfig,
    EchoRunner,
    Pulse,
    PulseSequence,
    ToggleFrameAverage,
    echo_otoc_series,
    effective_chain,
    effective_hamiltonian,
    frame_schedule,
    modified_wahuha_sequence,
    neel_x_state,
    simulate_driven,
    simulate_echo_protocol,
    toggling_average,
    wahuha_sequence,
)
from .analysis import (
    ENSEMBLE_KINDS,
    DensityEstimate,
    EnsembleResult,
    LightConeFit,
    OTOCRequest,
    SamplingStudyResult,
    ensemble_mean_sem,
    estimate_pdf,
    fit_lightcone,
    random_bitstring_state,
    random_product_state,
    run_disorder_ensemble,
    sampling_study,
    slow_fraction,
    threshold_crossings,
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
