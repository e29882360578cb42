"""Floquet engineering of the XXZ chain from a driven XX + field model.

During driving the lab Hamiltonian is the flip-flop chain plus on-site
fields,

    H_lab = sum_{i<j} J_ij (sx_i sx_j + sy_i sy_j) + sum_i h_i sz_i,

interrupted by global pi/2 pulses.  In the toggling frame each segment k
contributes

    H_k = sum_{i<j} J_ij (Heis_ij - s^a_i s^a_j) + sign_k sum_i h_i s^a_i,

where (a, sign) says where the pulses have rotated the z axis.  Averaging
over a cycle yields an XXZ chain whose anisotropy is set purely by how
long the frame spends along each axis: a solid-echo (WAHUHA-style) cycle
with interior intervals tau and edge intervals tau_1 realizes

    J_perp = 2 J / (2 + anisotropy),   J_par = anisotropy * J_perp,

together with a rescaled longitudinal field h (2 - anisotropy)/(2 +
anisotropy).  The plain four-pulse cycle leaves residual transverse
fields of relative weight anisotropy/(2 + anisotropy); the symmetrized
eight-pulse variant cancels them along with the entire first-order
Magnus correction.

The echo protocol turns all of this into an OTOC measurement: evolve
forward n cycles, kick one site with a local pi pulse, evolve backward
(sign-flipped couplings, optionally sped up k-fold) and read out a
single-site expectation value in an initial product state that is an
eigenstate of the probe operator.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import NumericalError
from .evolve import SpinState, spectral_propagator
from .model import (
    ChainSpec,
    DisorderRealization,
    FullBasis,
    HamiltonianMatrix,
    build_couplings,
    build_hamiltonian,
    local_pauli,
)

_AXIS_VECTORS = {
    "x": np.array([1.0, 0.0, 0.0]),
    "y": np.array([0.0, 1.0, 0.0]),
    "z": np.array([0.0, 0.0, 1.0]),
}

HALF_PI = np.pi / 2.0


@dataclasses.dataclass(frozen=True)
class Pulse:
    """A global rotation exp(-1j*angle/2 * sum_i s^axis_i) at time offset."""

    offset: float
    axis: str
    angle: float

    def __post_init__(self):
        if self.axis not in ("x", "y"):
            raise ValueError(f"pulse axis must be 'x' or 'y', got {self.axis!r}")


@dataclasses.dataclass(frozen=True)
class PulseSequence:
    """One drive cycle: pulses at strictly increasing offsets inside (0, cycle_time)."""

    cycle_time: float
    pulses: tuple
    label: str = ""

    def __post_init__(self):
        if self.cycle_time <= 0:
            raise ValueError("cycle_time must be positive")
        offsets = [p.offset for p in self.pulses]
        if any(not 0.0 < o < self.cycle_time for o in offsets):
            raise ValueError("pulse offsets must lie strictly inside the cycle")
        if any(b <= a for a, b in zip(offsets, offsets[1:])):
            raise ValueError("pulse offsets must be strictly increasing")

    def to_dict(self) -> dict:
        return {
            "cycle_time": self.cycle_time,
            "label": self.label,
            "pulses": [
                {"offset": p.offset, "axis": p.axis, "angle": p.angle}
                for p in self.pulses
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PulseSequence":
        pulses = tuple(
            Pulse(offset=p["offset"], axis=p["axis"], angle=p["angle"])
            for p in data["pulses"]
        )
        return cls(cycle_time=data["cycle_time"], pulses=pulses, label=data.get("label", ""))


def _conjugation_rotation(axis: str, angle: float) -> np.ndarray:
    """The SO(3) matrix R with  p^dag (sigma . n) p = sigma . (R n)
    for p = exp(-1j*angle/2 * s^axis): a rotation about ``axis`` by ``-angle``.
    """
    e = _AXIS_VECTORS[axis]
    c, s = np.cos(-angle), np.sin(-angle)
    cross = np.array(
        [[0.0, -e[2], e[1]], [e[2], 0.0, -e[0]], [-e[1], e[0], 0.0]]
    )
    return c * np.eye(3) + s * cross + (1.0 - c) * np.outer(e, e)


@dataclasses.dataclass(frozen=True)
class FrameSegment:
    """Between pulses the z axis sits along ``sign * axis`` for ``duration``."""

    duration: float
    axis: str
    sign: int
    vector: np.ndarray


def _match_axis(vector: np.ndarray):
    for axis, e in _AXIS_VECTORS.items():
        for sign in (1, -1):
            if np.allclose(vector, sign * e, atol=1e-9):
                return axis, sign
    raise NumericalError(
        f"toggling frame {vector} is not aligned with a coordinate axis;"
        " only pi/2-pulse cycles are supported"
    )


def frame_schedule(sequence: PulseSequence) -> list:
    """Where the toggling frame points during each inter-pulse segment.

    Tracks M_k = R_1 R_2 ... R_k so that the Heisenberg-frame z operator
    after k pulses is sigma . (M_k z); the schedule must return to z at
    the end of the cycle (checked) for the cycle to stroboscopically
    represent an average Hamiltonian.
    """
    boundaries = [0.0] + [p.offset for p in sequence.pulses] + [sequence.cycle_time]
    m = np.eye(3)
    segments = []
    for k, duration in enumerate(np.diff(boundaries)):
        vector = m @ _AXIS_VECTORS["z"]
        axis, sign = _match_axis(vector)
        segments.append(
            FrameSegment(duration=float(duration), axis=axis, sign=sign, vector=vector)
        )
        if k < len(sequence.pulses):
            pulse = sequence.pulses[k]
            m = m @ _conjugation_rotation(pulse.axis, pulse.angle)
    if not np.allclose(m, np.eye(3), atol=1e-9):
        raise NumericalError(
            f"pulse cycle {sequence.label!r} does not return the frame to identity"
        )
    return segments


# Candidate pi/2 pulses and where each sends the z axis (conjugation sense).
_PULSE_CANDIDATES = (
    ("x", HALF_PI),
    ("x", -HALF_PI),
    ("y", HALF_PI),
    ("y", -HALF_PI),
)


def _sequence_from_frames(cycle_time, frame_targets, durations, label) -> PulseSequence:
    """Solve for the pi/2 pulse train that walks through ``frame_targets``.

    ``frame_targets`` are (axis, sign) pairs per segment, starting and
    ending on +z.  Between segments k and k+1 the pulse must satisfy
    R_pulse z = M_k^T f_{k+1}; the four pi/2 candidates cover every move
    between coordinate axes adjacent to z in the octahedral orbit.
    """
    vectors = [sign * _AXIS_VECTORS[axis] for axis, sign in frame_targets]
    m = np.eye(3)
    pulses = []
    offset = 0.0
    for k in range(len(vectors) - 1):
        offset += durations[k]
        needed = m.T @ vectors[k + 1]
        for axis, angle in _PULSE_CANDIDATES:
            rot = _conjugation_rotation(axis, angle)
            if np.allclose(rot @ _AXIS_VECTORS["z"], needed, atol=1e-12):
                pulses.append(Pulse(offset=offset, axis=axis, angle=angle))
                m = m @ rot
                break
        else:
            raise NumericalError(
                f"no pi/2 pulse moves the frame from {vectors[k]} to {vectors[k + 1]}"
            )
    if not np.allclose(m, np.eye(3), atol=1e-12):
        raise NumericalError(f"frame walk for {label!r} does not close")
    return PulseSequence(cycle_time=cycle_time, pulses=tuple(pulses), label=label)


def _sequence_timings(anisotropy: float, cycle_time: float, interior_segments: int):
    if not 0.0 <= anisotropy < 2.0:
        raise ValueError(
            f"pulse timings exist only for anisotropy in [0, 2), got {anisotropy}"
        )
    if cycle_time <= 0:
        raise ValueError("cycle_time must be positive")
    tau_edge = 0.5 * cycle_time * (2.0 - anisotropy) / (2.0 + anisotropy)
    tau = (cycle_time - 2.0 * tau_edge) / interior_segments
    return tau_edge, tau


def wahuha_sequence(anisotropy: float, cycle_time: float) -> PulseSequence:
    """The four-pulse solid-echo cycle realizing the target anisotropy.

    Frame walk z -> y -> x -> y -> z with interior durations
    (tau, 2 tau, tau) and edges tau_1; the time shares solve
    J_par / J_perp = anisotropy.  At anisotropy = 0 no pulses are needed
    and the bare flip-flop chain is already the target.
    """
    tau_edge, tau = _sequence_timings(anisotropy, cycle_time, interior_segments=4)
    if anisotropy == 0.0:
        return PulseSequence(cycle_time=cycle_time, pulses=(), label="wahuha")
    targets = [("z", 1), ("y", 1), ("x", 1), ("y", 1), ("z", 1)]
    durations = [tau_edge, tau, 2.0 * tau, tau, tau_edge]
    return _sequence_from_frames(cycle_time, targets, durations, "wahuha")


def modified_wahuha_sequence(anisotropy: float, cycle_time: float) -> PulseSequence:
    """The symmetrized eight-pulse cycle: same averages, cleaner errors.

    The palindromic frame walk z -> y -> x -> -y -> -x -> -y -> x -> y -> z
    spends equal signed time along +a and -a for both transverse axes, so
    residual transverse fields cancel exactly, and its time symmetry kills
    the entire first-order Magnus correction.
    """
    tau_edge, tau = _sequence_timings(anisotropy, cycle_time, interior_segments=8)
    if anisotropy == 0.0:
        return PulseSequence(cycle_time=cycle_time, pulses=(), label="modified-wahuha")
    targets = [
        ("z", 1),
        ("y", 1),
        ("x", 1),
        ("y", -1),
        ("x", -1),
        ("y", -1),
        ("x", 1),
        ("y", 1),
        ("z", 1),
    ]
    durations = [tau_edge, tau, tau, tau, 2.0 * tau, tau, tau, tau, tau_edge]
    return _sequence_from_frames(cycle_time, targets, durations, "modified-wahuha")


# ---------------------------------------------------------------------------
# Average Hamiltonian

# Signed axis times below this (relative to the cycle) are pure roundoff
# from the floating-point pulse offsets, not a physical residual field.
_TRANSVERSE_TOLERANCE = 1e-12


@dataclasses.dataclass
class ToggleFrameAverage:
    """Zeroth-order average Hamiltonian of a pulse cycle, plus diagnostics.

    ``j_perp``/``j_par`` are the nearest-neighbour transverse and
    longitudinal couplings (all J_ij rescale by the same two factors);
    ``field_scales[a]`` multiplies every bare field h_i to give the
    residual field along axis ``a``.  ``first_order_norm`` is
    ||H^(1)||_F / sqrt(D) of the first Magnus correction, or None when
    the Hilbert space exceeded ``first_order_cap``.
    """

    sequence: PulseSequence
    frames: list
    j_perp: float
    j_par: float
    field_scales: dict
    fields: dict
    first_order_norm: float | None


def _axis_times(frames):
    spent = {"x": 0.0, "y": 0.0, "z": 0.0}
    signed = {"x": 0.0, "y": 0.0, "z": 0.0}
    for seg in frames:
        spent[seg.axis] += seg.duration
        signed[seg.axis] += seg.sign * seg.duration
    return spent, signed


def _pair_operator(axis, spec, basis):
    """sum_{i<j} J_ij s^axis_i s^axis_j as a dense matrix (small systems)."""
    couplings = build_couplings(spec)
    dim = basis.dimension
    out = np.zeros((dim, dim), dtype=complex)
    ops = [local_pauli(axis, i, basis).matrix(as_sparse=True) for i in range(spec.n_sites)]
    for i in range(spec.n_sites - 1):
        for j in range(i + 1, spec.n_sites):
            if couplings[i, j] != 0.0:
                out += couplings[i, j] * (ops[i] @ ops[j]).toarray()
    return out


def _field_operator(axis, fields, basis):
    dim = basis.dimension
    out = np.zeros((dim, dim), dtype=complex)
    for i, h in enumerate(fields):
        if h != 0.0:
            out += h * local_pauli(axis, i, basis).matrix()
    return out


def _first_order_magnus_norm(frames, spec, disorder, cap) -> float | None:
    """|| -1j/(2 t_c) sum_{a>b} d_a d_b [H_a, H_b] ||_F / sqrt(D), dense."""
    basis = FullBasis(spec.n_sites)
    if basis.dimension > cap:
        return None
    cycle_time = sum(seg.duration for seg in frames)
    pair_ops = {a: _pair_operator(a, spec, basis) for a in ("x", "y", "z")}
    heisenberg = sum(pair_ops.values())

    def frame_hamiltonian(seg):
        h = heisenberg - pair_ops[seg.axis]
        h = h + seg.sign * _field_operator(seg.axis, disorder.fields, basis)
        return h

    # Segments sharing (axis, sign) have identical frame Hamiltonians, so
    # fold the d_a*d_b weights over unique frame types before commuting.
    keys = [(seg.axis, seg.sign) for seg in frames]
    unique = list(dict.fromkeys(keys))
    weights = {}
    for a in range(len(frames)):
        for b in range(a):
            if keys[a] == keys[b]:
                continue
            pair = (keys[a], keys[b])
            weights[pair] = weights.get(pair, 0.0) + frames[a].duration * frames[b].duration
    total = np.zeros((basis.dimension, basis.dimension), dtype=complex)
    mats = {key: frame_hamiltonian(seg) for key, seg in zip(keys, frames) if key in unique}
    for (ka, kb), w in weights.items():
        total += w * (mats[ka] @ mats[kb] - mats[kb] @ mats[ka])
    correction = (-0.5j / cycle_time) * total
    return float(np.linalg.norm(correction, "fro") / np.sqrt(basis.dimension))


def toggling_average(
    sequence: PulseSequence,
    spec: ChainSpec,
    disorder: DisorderRealization,
    first_order_cap: int = 1024,
) -> ToggleFrameAverage:
    """Average the driven chain over one cycle in the toggling frame."""
    frames = frame_schedule(sequence)
    spent, signed = _axis_times(frames)
    t_c = sequence.cycle_time
    c_x = 1.0 - spent["x"] / t_c
    c_y = 1.0 - spent["y"] / t_c
    c_z = 1.0 - spent["z"] / t_c
    if abs(c_x - c_y) > 1e-12:
        raise NumericalError(
            f"cycle {sequence.label!r} averages sx sx and sy sy differently"
            f" ({c_x} vs {c_y}); not an XXZ target"
        )
    field_scales = {a: signed[a] / t_c for a in ("x", "y", "z")}
    fields = {a: field_scales[a] * np.asarray(disorder.fields) for a in ("x", "y", "z")}
    return ToggleFrameAverage(
        sequence=sequence,
        frames=frames,
        j_perp=c_x * spec.coupling,
        j_par=c_z * spec.coupling,
        field_scales=field_scales,
        fields=fields,
        first_order_norm=_first_order_magnus_norm(frames, spec, disorder, first_order_cap),
    )


def effective_chain(average: ToggleFrameAverage, spec: ChainSpec):
    """The average Hamiltonian as a (ChainSpec, DisorderRealization) pair.

    Only valid when the residual transverse fields vanish (the
    symmetrized sequence, or zero disorder); then the average is again an
    XXZ chain with anisotropy j_par/j_perp, rescaled coupling and fields,
    and every solver in the package applies to it unchanged.
    """
    for a in ("x", "y"):
        if np.max(np.abs(average.fields[a]), initial=0.0) > _TRANSVERSE_TOLERANCE:
            raise ValueError(
                "average Hamiltonian has transverse fields; it is not an XXZ"
                " chain (use effective_hamiltonian for the full matrix)"
            )
    if average.j_perp == 0.0:
        raise ValueError("average Hamiltonian has no flip-flop part")
    eff_spec = dataclasses.replace(
        spec, anisotropy=average.j_par / average.j_perp, coupling=average.j_perp
    )
    eff_fields = average.fields["z"]
    # strength is bookkeeping (the sampling box does not survive a rescale
    # exactly); record the realized bound.
    eff_disorder = DisorderRealization(
        fields=eff_fields, strength=float(np.max(np.abs(eff_fields), initial=0.0))
    )
    return eff_spec, eff_disorder


def effective_hamiltonian(
    average: ToggleFrameAverage, spec: ChainSpec
) -> HamiltonianMatrix:
    """Dense average Hamiltonian including any residual transverse fields."""
    basis = FullBasis(spec.n_sites)
    xxz_spec = dataclasses.replace(
        spec, anisotropy=average.j_par / average.j_perp, coupling=average.j_perp
    )
    h = build_hamiltonian(
        xxz_spec, DisorderRealization(average.fields["z"], 0.0), storage="dense"
    ).matrix.astype(complex)
    transverse = False
    for a in ("x", "y"):
        if np.max(np.abs(average.fields[a]), initial=0.0) > _TRANSVERSE_TOLERANCE:
            h += _field_operator(a, average.fields[a], basis)
            transverse = True
    return HamiltonianMatrix(
        matrix=h if transverse else h.real,
        basis=basis,
        conserves_magnetization=not transverse,
    )


# ---------------------------------------------------------------------------
# Driven evolution and the echo protocol


def _apply_global_rotation(amplitudes, n_sites, axis, angle):
    """exp(-1j*angle/2 * sum_i s^axis_i) acting site by site."""
    c = np.cos(angle / 2.0)
    s = np.sin(angle / 2.0)
    if axis == "x":
        gate = np.array([[c, -1j * s], [-1j * s, c]])
    elif axis == "y":
        gate = np.array([[c, -s], [s, c]])
    else:
        raise ValueError(f"global pulses are 'x' or 'y', got {axis!r}")
    out = amplitudes.astype(complex)
    for site in range(n_sites):
        shaped = out.reshape(-1, 2, 1 << site)
        out = np.einsum("ab,hbl->hal", gate, shaped).reshape(-1)
    return out


def simulate_driven(
    spec: ChainSpec,
    disorder: DisorderRealization,
    sequence: PulseSequence,
    state,
    n_cycles: int,
    scale: float = 1.0,
    propagator=None,
):
    """Evolve through ``n_cycles`` of the pulsed flip-flop chain.

    Free segments evolve under ``scale * (XX chain + fields)`` — the lab
    model, with the chain's anisotropy playing no role beyond having set
    the pulse timings — and pulses are applied as instantaneous global
    rotations, unaffected by ``scale``.
    """
    if n_cycles < 0 or int(n_cycles) != n_cycles:
        raise ValueError(f"n_cycles must be a non-negative integer, got {n_cycles}")
    if propagator is None:
        propagator = spectral_propagator(
            dataclasses.replace(spec, anisotropy=0.0), disorder
        )
    amps = state.amplitudes if isinstance(state, SpinState) else np.asarray(state)
    boundaries = [0.0] + [p.offset for p in sequence.pulses] + [sequence.cycle_time]
    durations = np.diff(boundaries)
    for _ in range(int(n_cycles)):
        for k, duration in enumerate(durations):
            if duration > 0.0:
                amps = propagator.evolve(amps, duration, scale)
            if k < len(sequence.pulses):
                pulse = sequence.pulses[k]
                amps = _apply_global_rotation(amps, spec.n_sites, pulse.axis, pulse.angle)
    if isinstance(state, SpinState):
        return SpinState(amplitudes=amps, basis=state.basis)
    return amps


def neel_x_state(n_sites: int) -> SpinState:
    """|+x -x +x ...>: the staggered product eigenstate of every sx_j.

    Site j carries sx eigenvalue (-1)^j, so one echo run measures the
    OTOC at every probe site simultaneously.
    """
    dim = 1 << n_sites
    odd_mask = sum(1 << k for k in range(1, n_sites, 2))
    states = np.arange(dim, dtype=np.int64)
    signs = 1.0 - 2.0 * (np.bitwise_count(states & odd_mask) & 1)
    amps = signs / np.sqrt(dim)
    return SpinState(amplitudes=amps, basis=FullBasis(n_sites))


@dataclasses.dataclass(frozen=True)
class EchoProtocolConfig:
    """How to run the forward/backward OTOC measurement.

    ``sequence=None`` means no driving: both halves evolve under the bare
    XXZ chain itself (the idealized check against direct OTOCs).
    ``reversal_k`` speeds the backward half up k-fold, which a faithful
    reversal must accompany with k-scaled flipped fields; setting
    ``flip_disorder=False`` deliberately breaks that and leaves the bare
    fields in place during the backward half.
    """

    site_i: int
    sites_j: tuple
    axis: str = "x"
    sequence: PulseSequence | None = None
    reversal_k: int = 1
    flip_disorder: bool = True

    def __post_init__(self):
        if self.reversal_k < 1 or int(self.reversal_k) != self.reversal_k:
            raise ValueError("reversal_k must be a positive integer")
        if self.axis not in ("x", "y", "z"):
            raise ValueError(f"axis must be 'x', 'y' or 'z', got {self.axis!r}")
        object.__setattr__(self, "sites_j", tuple(np.atleast_1d(self.sites_j).tolist()))


class EchoRunner:
    """Propagators and probe operators prepared once, reused across times."""

    def __init__(self, config: EchoProtocolConfig, spec, disorder, state):
        self.config = config
        self.spec = spec
        self.disorder = disorder
        basis = FullBasis(spec.n_sites)
        amps = state.amplitudes if isinstance(state, SpinState) else np.asarray(state)
        if len(amps) != basis.dimension:
            raise ValueError("echo protocol needs a full-basis state")
        self.amplitudes = amps
        self.kick = local_pauli(config.axis, config.site_i, basis)
        self.probes = [local_pauli(config.axis, j, basis) for j in config.sites_j]
        self.eigenvalues = []
        for j, probe in zip(config.sites_j, self.probes):
            lam = np.vdot(amps, probe.apply(amps)).real
            if abs(abs(lam) - 1.0) > 1e-9:
                raise ValueError(
                    f"initial state is not an eigenstate of s{config.axis}_{j}"
                    f" (<s> = {lam:.6f}); the echo readout requires one"
                )
            self.eigenvalues.append(round(lam))
        lab_spec = (
            dataclasses.replace(spec, anisotropy=0.0)
            if config.sequence is not None
            else spec
        )
        self.forward = spectral_propagator(lab_spec, disorder)
        if config.flip_disorder:
            # Faithful reversal: H -> -k H is the same propagator, scale=-k.
            self.backward = self.forward
            self.backward_scale = -float(config.reversal_k)
        else:
            # Couplings flip and speed up, fields stay bare.
            flipped = dataclasses.replace(
                lab_spec, coupling=-config.reversal_k * lab_spec.coupling
            )
            self.backward = spectral_propagator(flipped, disorder)
            self.backward_scale = 1.0

    def _cycles(self, duration: float, what: str) -> int:
        t_c = self.config.sequence.cycle_time
        n = duration / t_c
        if abs(n - round(n)) > 1e-9:
            raise ValueError(
                f"{what} duration {duration} is not an integer number of"
                f" cycles (cycle_time {t_c})"
            )
        return int(round(n))

    def measure(self, time: float) -> np.ndarray:
        """lambda_j <s^a_j> after forward(t) + kick + backward(t/k), per probe."""
        cfg = self.config
        k = cfg.reversal_k
        if cfg.sequence is not None:
            amps = simulate_driven(
                self.spec,
                self.disorder,
                cfg.sequence,
                self.amplitudes,
                self._cycles(time, "forward"),
                scale=1.0,
                propagator=self.forward,
            )
            amps = self.kick.apply(amps)
            amps = simulate_driven(
                self.spec,
                self.disorder,
                cfg.sequence,
                amps,
                self._cycles(time / k, "backward"),
                scale=self.backward_scale,
                propagator=self.backward,
            )
        else:
            amps = self.forward.evolve(self.amplitudes, time)
            amps = self.kick.apply(amps)
            amps = self.backward.evolve(amps, time / k, self.backward_scale)
        values = np.empty(len(self.probes))
        for d, (lam, probe) in enumerate(zip(self.eigenvalues, self.probes)):
            values[d] = lam * np.vdot(amps, probe.apply(amps)).real
        return values


def simulate_echo_protocol(
    config: EchoProtocolConfig, spec, disorder, state, time: float
) -> np.ndarray:
    """One echo run: the measured OTOC values F at each probe site."""
    return EchoRunner(config, spec, disorder, state).measure(time)


def echo_otoc_series(
    config: EchoProtocolConfig, spec, disorder, state, times
) -> "OTOCSeries":
    """C(r, t) = 2 (1 - F) from repeated echo runs over a time grid."""
    from .otoc import OTOCSeries

    runner = EchoRunner(config, spec, disorder, state)
    times = np.asarray(times, dtype=float)
    values = np.empty((len(config.sites_j), len(times)))
    for k, t in enumerate(times):
        values[:, k] = 2.0 * (1.0 - runner.measure(t))
    method = "echo-driven" if config.sequence is not None else "echo"
    return OTOCSeries(
        times=times,
        distances=np.abs(np.asarray(config.sites_j) - config.site_i),
        values=values,
        site_i=config.site_i,
        axis=config.axis,
        estimator={
            "method": method,
            "reversal_k": config.reversal_k,
            "flip_disorder": config.flip_disorder,
        },
    )
