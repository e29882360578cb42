"""Pulse-sequence engineering and the echo protocol, checked brute force.

Oracles: frame rotations against 2x2 expm conjugation, driven cycles
against explicit expm products of segment and pulse unitaries, toggling
averages against the hand-derived time-share formulas, and the echo
protocol against the direct OTOC estimators it exists to reproduce.
"""

import dataclasses

import numpy as np
import pytest
from scipy.linalg import expm

from otocsim.errors import NumericalError
from otocsim.evolve import SpinState, spectral_propagator
from otocsim.floquet import (
    EchoProtocolConfig,
    Pulse,
    PulseSequence,
    _apply_global_rotation,
    _conjugation_rotation,
    echo_otoc_series,
    effective_chain,
    effective_hamiltonian,
    frame_schedule,
    modified_wahuha_sequence,
    neel_x_state,
    simulate_driven,
    toggling_average,
    wahuha_sequence,
)
from otocsim.model import (
    ChainSpec,
    FullBasis,
    build_hamiltonian,
    local_pauli,
    sample_disorder,
    zero_disorder,
)
from otocsim.otoc import otoc_state

from _oracles import PAULI, kron_field_sum, kron_hamiltonian, kron_pair_sum

HALF_PI = np.pi / 2.0
AXES = ("x", "y", "z")

# Hand-derived pi/2 train for the four-pulse cycle: X(+) takes the frame
# z -> y, Y(-) then y -> x (in the conjugation sense), and the mirrored
# pair walks back.
WAHUHA_TRAIN = [("x", HALF_PI), ("y", -HALF_PI), ("y", HALF_PI), ("x", -HALF_PI)]


def brute_cycle_unitary(sequence, h_lab, n_sites, scale=1.0):
    """One cycle as an explicit product of expm segment/pulse factors."""
    dim = 2**n_sites
    u = np.eye(dim, dtype=complex)
    bounds = [0.0] + [p.offset for p in sequence.pulses] + [sequence.cycle_time]
    for k, duration in enumerate(np.diff(bounds)):
        if duration > 0.0:
            u = expm(-1j * duration * scale * h_lab) @ u
        if k < len(sequence.pulses):
            pulse = sequence.pulses[k]
            generator = kron_field_sum(pulse.axis, np.ones(n_sites))
            u = expm(-0.5j * pulse.angle * generator) @ u
    return u


class TestRotations:
    @pytest.mark.parametrize("axis", ["x", "y"])
    @pytest.mark.parametrize("angle", [HALF_PI, -HALF_PI, 0.73])
    def test_conjugation_matches_two_level_expm(self, axis, angle):
        # The defining property: p^dag sigma_b p = sum_c R[c, b] sigma_c
        # for p = exp(-1j*angle/2 sigma_axis).
        r = _conjugation_rotation(axis, angle)
        p = expm(-0.5j * angle * PAULI[axis])
        for b, name_b in enumerate(AXES):
            conjugated = p.conj().T @ PAULI[name_b] @ p
            recombined = sum(r[c, b] * PAULI[name_c] for c, name_c in enumerate(AXES))
            np.testing.assert_allclose(conjugated, recombined, atol=1e-12)

    @pytest.mark.parametrize("axis", ["x", "y"])
    @pytest.mark.parametrize("angle", [HALF_PI, -1.1])
    def test_global_rotation_matches_kron_expm(self, axis, angle):
        rng = np.random.default_rng(11)
        psi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        rotated = _apply_global_rotation(psi, 3, axis, angle)
        brute = expm(-0.5j * angle * kron_field_sum(axis, np.ones(3))) @ psi
        np.testing.assert_allclose(rotated, brute, atol=1e-12)

    def test_global_rotation_rejects_z(self):
        with pytest.raises(ValueError, match="global pulses"):
            _apply_global_rotation(np.ones(4), 2, "z", HALF_PI)


class TestSequenceBuilders:
    def test_four_pulse_cycle_timings(self):
        seq = wahuha_sequence(0.5, 0.1)
        assert seq.label == "wahuha"
        # tau_1 = (t_c/2)(2 - 0.5)/(2 + 0.5) = 0.03, tau = 0.01
        assert [p.offset for p in seq.pulses] == pytest.approx([0.03, 0.04, 0.06, 0.07])
        assert [(p.axis, p.angle) for p in seq.pulses] == WAHUHA_TRAIN

    def test_four_pulse_frame_walk(self):
        frames = frame_schedule(wahuha_sequence(0.5, 0.1))
        assert [seg.axis for seg in frames] == ["z", "y", "x", "y", "z"]
        assert [seg.sign for seg in frames] == [1, 1, 1, 1, 1]
        durations = [seg.duration for seg in frames]
        assert durations == pytest.approx([0.03, 0.01, 0.02, 0.01, 0.03])

    def test_eight_pulse_cycle_timings(self):
        seq = modified_wahuha_sequence(0.5, 0.1)
        assert seq.label == "modified-wahuha"
        assert len(seq.pulses) == 8
        expected = [0.03, 0.035, 0.04, 0.045, 0.055, 0.06, 0.065, 0.07]
        assert [p.offset for p in seq.pulses] == pytest.approx(expected)
        assert all(abs(p.angle) == pytest.approx(HALF_PI) for p in seq.pulses)
        assert seq.pulses[0].axis == "x" and seq.pulses[0].angle == HALF_PI

    def test_eight_pulse_frame_walk(self):
        frames = frame_schedule(modified_wahuha_sequence(0.5, 0.1))
        walk = [(seg.axis, seg.sign) for seg in frames]
        assert walk == [
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
        durations = [seg.duration for seg in frames]
        tau = 0.005
        assert durations == pytest.approx(
            [0.03, tau, tau, tau, 2 * tau, tau, tau, tau, 0.03]
        )

    @pytest.mark.parametrize(
        "builder", [wahuha_sequence, modified_wahuha_sequence]
    )
    def test_zero_anisotropy_needs_no_pulses(self, builder):
        seq = builder(0.0, 0.1)
        assert seq.pulses == ()
        assert seq.cycle_time == 0.1

    @pytest.mark.parametrize("builder", [wahuha_sequence, modified_wahuha_sequence])
    @pytest.mark.parametrize("anisotropy", [0.1, 0.5, 1.0, 1.9])
    def test_segment_durations_fill_the_cycle(self, builder, anisotropy):
        frames = frame_schedule(builder(anisotropy, 0.08))
        assert all(seg.duration >= 0.0 for seg in frames)
        assert sum(seg.duration for seg in frames) == pytest.approx(0.08)

    @pytest.mark.parametrize("builder", [wahuha_sequence, modified_wahuha_sequence])
    @pytest.mark.parametrize("anisotropy", [-0.1, 2.0, 2.3])
    def test_unreachable_anisotropy_rejected(self, builder, anisotropy):
        with pytest.raises(ValueError, match="anisotropy"):
            builder(anisotropy, 0.1)

    def test_nonpositive_cycle_time_rejected(self):
        with pytest.raises(ValueError, match="cycle_time"):
            wahuha_sequence(0.5, 0.0)


class TestFrameSchedule:
    def test_open_cycle_rejected(self):
        seq = PulseSequence(cycle_time=0.1, pulses=(Pulse(0.05, "x", HALF_PI),))
        with pytest.raises(NumericalError, match="return the frame"):
            frame_schedule(seq)

    def test_off_axis_frame_rejected(self):
        # Closes back to the identity, but the middle frame points between
        # coordinate axes, which the toggling average cannot represent.
        seq = PulseSequence(
            cycle_time=0.1,
            pulses=(Pulse(0.03, "x", np.pi / 3), Pulse(0.06, "x", -np.pi / 3)),
        )
        with pytest.raises(NumericalError, match="not aligned"):
            frame_schedule(seq)


class TestSerialization:
    @pytest.mark.parametrize("builder", [wahuha_sequence, modified_wahuha_sequence])
    def test_round_trip(self, builder):
        seq = builder(0.7, 0.25)
        assert PulseSequence.from_dict(seq.to_dict()) == seq

    def test_pulse_axis_validation(self):
        with pytest.raises(ValueError, match="pulse axis"):
            Pulse(0.1, "z", HALF_PI)

    def test_offset_validation(self):
        with pytest.raises(ValueError, match="inside the cycle"):
            PulseSequence(cycle_time=0.1, pulses=(Pulse(0.1, "x", HALF_PI),))
        with pytest.raises(ValueError, match="strictly increasing"):
            PulseSequence(
                cycle_time=0.1,
                pulses=(Pulse(0.06, "x", HALF_PI), Pulse(0.04, "x", -HALF_PI)),
            )
        with pytest.raises(ValueError, match="cycle_time"):
            PulseSequence(cycle_time=-1.0, pulses=())


class TestTogglingAverage:
    @pytest.mark.parametrize("builder", [wahuha_sequence, modified_wahuha_sequence])
    @pytest.mark.parametrize("anisotropy", [0.25, 0.5, 1.0, 1.5])
    def test_time_share_formulas(self, builder, anisotropy):
        spec = ChainSpec(
            n_sites=4, interaction="power-law", anisotropy=anisotropy, alpha=3.0
        )
        disorder = sample_disorder(7.0, 4, seed=2)
        avg = toggling_average(builder(anisotropy, 0.1), spec, disorder)
        assert avg.j_perp == pytest.approx(2.0 / (2.0 + anisotropy))
        assert avg.j_par == pytest.approx(anisotropy * avg.j_perp)
        assert avg.field_scales["z"] == pytest.approx(
            (2.0 - anisotropy) / (2.0 + anisotropy)
        )
        np.testing.assert_allclose(
            avg.fields["z"], avg.field_scales["z"] * disorder.fields
        )
        if builder is modified_wahuha_sequence:
            # The palindromic walk spends equal signed time along +/-a;
            # the cancellation is exact by design, limited only by the
            # floating-point representation of the pulse offsets.
            assert avg.field_scales["x"] == pytest.approx(0.0, abs=1e-14)
            assert avg.field_scales["y"] == pytest.approx(0.0, abs=1e-14)
        else:
            residual = anisotropy / (2.0 + anisotropy)
            assert avg.field_scales["x"] == pytest.approx(residual)
            assert avg.field_scales["y"] == pytest.approx(residual)

    def test_coupling_rescales_with_chain(self):
        spec = ChainSpec(
            n_sites=4,
            interaction="nearest-neighbor",
            anisotropy=0.5,
            coupling=1.5,
        )
        avg = toggling_average(wahuha_sequence(0.5, 0.1), spec, zero_disorder(4))
        assert avg.j_perp == pytest.approx(1.5 * 0.8)
        assert avg.j_par == pytest.approx(1.5 * 0.4)

    @pytest.mark.parametrize("builder", [wahuha_sequence, modified_wahuha_sequence])
    def test_first_magnus_correction_vanishes(self, builder):
        # Both cycles are time-symmetric about their midpoint (palindromic
        # durations and frames), so the first-order commutator terms cancel
        # pairwise; the norm is pure roundoff even at strong disorder.
        spec = ChainSpec(
            n_sites=4, interaction="power-law", anisotropy=0.5, alpha=3.0
        )
        disorder = sample_disorder(14.0, 4, seed=0)
        avg = toggling_average(builder(0.5, 0.1), spec, disorder)
        assert avg.first_order_norm is not None
        assert avg.first_order_norm < 1e-12

    def test_first_order_norm_skipped_over_cap(self):
        spec = ChainSpec(
            n_sites=4, interaction="power-law", anisotropy=0.5, alpha=3.0
        )
        avg = toggling_average(
            wahuha_sequence(0.5, 0.1), spec, zero_disorder(4), first_order_cap=8
        )
        assert avg.first_order_norm is None

    def test_transverse_imbalance_rejected(self):
        # z -> y -> z spends time on y but never on x: not an XXZ average.
        seq = PulseSequence(
            cycle_time=0.1,
            pulses=(Pulse(0.03, "x", HALF_PI), Pulse(0.07, "x", -HALF_PI)),
        )
        spec = ChainSpec(n_sites=3, interaction="nearest-neighbor", anisotropy=0.5)
        with pytest.raises(NumericalError, match="not an XXZ target"):
            toggling_average(seq, spec, zero_disorder(3))


class TestEffectiveModels:
    def test_symmetrized_cycle_gives_designed_chain(self):
        spec = ChainSpec(
            n_sites=4, interaction="power-law", anisotropy=0.5, alpha=3.0
        )
        disorder = sample_disorder(14.0, 4, seed=0)
        avg = toggling_average(modified_wahuha_sequence(0.5, 0.1), spec, disorder)
        eff_spec, eff_disorder = effective_chain(avg, spec)
        assert eff_spec.anisotropy == pytest.approx(0.5)
        assert eff_spec.coupling == pytest.approx(0.8)
        np.testing.assert_allclose(eff_disorder.fields, 0.6 * disorder.fields)
        assert eff_disorder.strength == pytest.approx(
            np.max(np.abs(eff_disorder.fields))
        )

    def test_residual_transverse_fields_rejected(self):
        spec = ChainSpec(
            n_sites=4, interaction="power-law", anisotropy=0.5, alpha=3.0
        )
        disorder = sample_disorder(14.0, 4, seed=0)
        avg = toggling_average(wahuha_sequence(0.5, 0.1), spec, disorder)
        with pytest.raises(ValueError, match="transverse fields"):
            effective_chain(avg, spec)

    def test_four_pulse_cycle_clean_without_disorder(self):
        spec = ChainSpec(
            n_sites=4, interaction="power-law", anisotropy=0.8, alpha=3.0
        )
        avg = toggling_average(wahuha_sequence(0.8, 0.1), spec, zero_disorder(4))
        eff_spec, eff_disorder = effective_chain(avg, spec)
        assert eff_spec.anisotropy == pytest.approx(0.8)
        assert not np.any(eff_disorder.fields)

    @pytest.mark.parametrize("builder", [wahuha_sequence, modified_wahuha_sequence])
    def test_effective_hamiltonian_matches_kron_average(self, builder):
        spec = ChainSpec(
            n_sites=3, interaction="power-law", anisotropy=0.5, alpha=3.0
        )
        disorder = sample_disorder(6.0, 3, seed=4)
        seq = builder(0.5, 0.1)
        avg = toggling_average(seq, spec, disorder)
        # Independent route: average the per-segment toggled Hamiltonians
        # sum J_ij (Heis - s^a s^a) + sign * sum h_i s^a_i with their time
        # weights, all via explicit Kronecker products.
        heis = sum(kron_pair_sum(a, spec) for a in AXES)
        oracle = np.zeros((8, 8), dtype=complex)
        for seg in frame_schedule(seq):
            toggled = heis - kron_pair_sum(seg.axis, spec)
            toggled = toggled + seg.sign * kron_field_sum(seg.axis, disorder.fields)
            oracle += (seg.duration / seq.cycle_time) * toggled
        built = effective_hamiltonian(avg, spec)
        np.testing.assert_allclose(built.dense(), oracle, atol=1e-12)
        if builder is modified_wahuha_sequence:
            assert built.conserves_magnetization
            assert not np.iscomplexobj(built.matrix)
        else:
            assert not built.conserves_magnetization


class TestSimulateDriven:
    @pytest.mark.parametrize("builder", [wahuha_sequence, modified_wahuha_sequence])
    @pytest.mark.parametrize("n_cycles,scale", [(1, 1.0), (2, 1.0), (1, -2.0)])
    def test_matches_expm_product(self, builder, n_cycles, scale):
        spec = ChainSpec(
            n_sites=3, interaction="power-law", anisotropy=0.5, alpha=3.0
        )
        disorder = sample_disorder(3.0, 3, seed=2)
        seq = builder(0.5, 0.12)
        # The lab chain during driving is the flip-flop model plus fields;
        # the chain spec's anisotropy only set the pulse timings.
        h_lab = kron_hamiltonian(
            dataclasses.replace(spec, anisotropy=0.0), disorder.fields
        )
        u = brute_cycle_unitary(seq, h_lab, 3, scale)
        rng = np.random.default_rng(9)
        psi = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        psi /= np.linalg.norm(psi)
        expected = np.linalg.matrix_power(u, n_cycles) @ psi
        driven = simulate_driven(spec, disorder, seq, psi, n_cycles, scale=scale)
        np.testing.assert_allclose(driven, expected, atol=1e-10)

    def test_zero_cycles_is_identity(self):
        spec = ChainSpec(n_sites=3, interaction="nearest-neighbor", anisotropy=0.5)
        seq = wahuha_sequence(0.5, 0.1)
        state = neel_x_state(3)
        out = simulate_driven(spec, zero_disorder(3), seq, state, 0)
        assert isinstance(out, SpinState)
        np.testing.assert_allclose(out.amplitudes, state.amplitudes)

    @pytest.mark.parametrize("n_cycles", [-1, 1.5])
    def test_invalid_cycle_count(self, n_cycles):
        spec = ChainSpec(n_sites=3, interaction="nearest-neighbor", anisotropy=0.5)
        seq = wahuha_sequence(0.5, 0.1)
        with pytest.raises(ValueError, match="n_cycles"):
            simulate_driven(spec, zero_disorder(3), seq, neel_x_state(3), n_cycles)

    def test_stroboscopic_error_scales_quadratically(self):
        # With the first Magnus order gone, halving the cycle time should
        # quarter the deviation from the designed chain (measured ratio
        # 0.248 for this seed; the absolute error at t_c = 0.05 is 4.0e-4).
        spec = ChainSpec(
            n_sites=4, interaction="power-law", anisotropy=0.5, alpha=3.0
        )
        disorder = sample_disorder(2.0, 4, seed=3)
        psi = neel_x_state(4).amplitudes
        total_time = 1.0
        errors = {}
        for cycle_time in (0.1, 0.05):
            seq = modified_wahuha_sequence(0.5, cycle_time)
            avg = toggling_average(seq, spec, disorder)
            eff_spec, eff_disorder = effective_chain(avg, spec)
            target = spectral_propagator(eff_spec, eff_disorder).evolve(
                psi, total_time
            )
            driven = simulate_driven(
                spec, disorder, seq, psi, int(round(total_time / cycle_time))
            )
            errors[cycle_time] = np.linalg.norm(driven - target)
        assert errors[0.05] < 1e-3
        assert errors[0.05] / errors[0.1] < 0.35


class TestNeelState:
    def test_staggered_transverse_eigenstate(self):
        state = neel_x_state(4)
        assert state.norm() == pytest.approx(1.0)
        basis = FullBasis(4)
        for j in range(4):
            sx = local_pauli("x", j, basis)
            expect = np.vdot(state.amplitudes, sx.apply(state.amplitudes)).real
            assert expect == pytest.approx((-1.0) ** j)
            sz = local_pauli("z", j, basis)
            assert np.vdot(state.amplitudes, sz.apply(state.amplitudes)).real == (
                pytest.approx(0.0, abs=1e-12)
            )


class TestEchoProtocol:
    @pytest.fixture
    def chain(self):
        spec = ChainSpec(
            n_sites=4, interaction="power-law", anisotropy=-2.0, alpha=3.0
        )
        disorder = sample_disorder(5.0, 4, seed=1)
        return spec, disorder

    @pytest.mark.parametrize("reversal_k", [1, 2])
    def test_reduces_to_direct_otoc(self, chain, reversal_k):
        # Forward t, kick, backward under -k H for t/k is algebraically the
        # Heisenberg-picture OTOC whenever the readout state is a probe
        # eigenstate, for any speed-up k.
        spec, disorder = chain
        times = [0.5, 1.0, 2.0, 4.0]
        prop = spectral_propagator(spec, disorder)
        state = neel_x_state(4)
        reference = otoc_state(prop, state.amplitudes, 0, [1, 2, 3], "x", times)
        config = EchoProtocolConfig(
            site_i=0, sites_j=(1, 2, 3), axis="x", reversal_k=reversal_k
        )
        series = echo_otoc_series(config, spec, disorder, state, times)
        np.testing.assert_allclose(series.values, reference.values, atol=1e-10)
        assert series.estimator["method"] == "echo"
        np.testing.assert_array_equal(series.distances, [1, 2, 3])

    def test_longitudinal_probe_on_bitstring(self, chain):
        spec, disorder = chain
        amps = np.zeros(16)
        amps[0b0110] = 1.0
        state = SpinState(amplitudes=amps, basis=FullBasis(4))
        times = [0.3, 1.2]
        prop = spectral_propagator(spec, disorder)
        reference = otoc_state(prop, amps, 0, [1, 2, 3], "z", times)
        config = EchoProtocolConfig(site_i=0, sites_j=(1, 2, 3), axis="z")
        series = echo_otoc_series(config, spec, disorder, state, times)
        np.testing.assert_allclose(series.values, reference.values, atol=1e-10)

    def test_unflipped_disorder_breaks_reversal(self, chain):
        # Speeding the backward half up k-fold is only faithful if the
        # fields flip (and scale) along with the couplings; leaving them
        # bare wrecks the echo (measured deviation 2.7 for this draw).
        spec, disorder = chain
        times = [0.5, 1.0, 2.0, 4.0]
        prop = spectral_propagator(spec, disorder)
        state = neel_x_state(4)
        reference = otoc_state(prop, state.amplitudes, 0, [1, 2, 3], "x", times)
        broken = echo_otoc_series(
            EchoProtocolConfig(
                site_i=0,
                sites_j=(1, 2, 3),
                axis="x",
                reversal_k=2,
                flip_disorder=False,
            ),
            spec,
            disorder,
            state,
            times,
        )
        assert np.max(np.abs(broken.values - reference.values)) > 0.5

    def test_empty_sequence_equals_undriven_flip_flop(self):
        # A pulse-free cycle must reproduce the bare lab model: the XX
        # chain, whatever anisotropy the designed target carried.
        spec = ChainSpec(
            n_sites=4, interaction="power-law", anisotropy=0.5, alpha=3.0
        )
        disorder = sample_disorder(4.0, 4, seed=6)
        state = neel_x_state(4)
        times = [0.3, 0.7]
        driven = echo_otoc_series(
            EchoProtocolConfig(
                site_i=0, sites_j=(1, 2), axis="x", sequence=wahuha_sequence(0.0, 0.1)
            ),
            spec,
            disorder,
            state,
            times,
        )
        undriven = echo_otoc_series(
            EchoProtocolConfig(site_i=0, sites_j=(1, 2), axis="x"),
            dataclasses.replace(spec, anisotropy=0.0),
            disorder,
            state,
            times,
        )
        np.testing.assert_allclose(driven.values, undriven.values, atol=1e-10)
        assert driven.estimator["method"] == "echo-driven"

    def test_driven_echo_tracks_designed_model(self):
        spec = ChainSpec(
            n_sites=4, interaction="power-law", anisotropy=0.5, alpha=3.0
        )
        disorder = sample_disorder(2.0, 4, seed=5)
        seq = modified_wahuha_sequence(0.5, 0.05)
        avg = toggling_average(seq, spec, disorder)
        eff_spec, eff_disorder = effective_chain(avg, spec)
        eff_prop = spectral_propagator(eff_spec, eff_disorder)
        state = neel_x_state(4)
        times = [0.2, 0.4, 0.8]
        reference = otoc_state(eff_prop, state.amplitudes, 0, [1, 2, 3], "x", times)
        series = echo_otoc_series(
            EchoProtocolConfig(site_i=0, sites_j=(1, 2, 3), axis="x", sequence=seq),
            spec,
            disorder,
            state,
            times,
        )
        # Zeroth-order average-Hamiltonian accuracy at t_c = 0.05: the
        # measured gap is 8.3e-4 here; 5e-3 leaves margin without letting
        # a broken frame average slip through.
        assert np.max(np.abs(series.values - reference.values)) < 5e-3

    def test_fractional_cycles_rejected(self):
        spec = ChainSpec(
            n_sites=3, interaction="power-law", anisotropy=0.5, alpha=3.0
        )
        disorder = zero_disorder(3)
        seq = modified_wahuha_sequence(0.5, 0.1)
        state = neel_x_state(3)
        config = EchoProtocolConfig(site_i=0, sites_j=(1,), axis="x", sequence=seq)
        with pytest.raises(ValueError, match="integer number of cycles"):
            echo_otoc_series(config, spec, disorder, state, [0.25])
        halved = EchoProtocolConfig(
            site_i=0, sites_j=(1,), axis="x", sequence=seq, reversal_k=2
        )
        # Forward 3 cycles is fine; backward 1.5 cycles is not.
        with pytest.raises(ValueError, match="backward"):
            echo_otoc_series(halved, spec, disorder, state, [0.3])

    def test_requires_probe_eigenstate(self, chain):
        spec, disorder = chain
        config = EchoProtocolConfig(site_i=0, sites_j=(1, 2), axis="z")
        with pytest.raises(ValueError, match="eigenstate"):
            echo_otoc_series(config, spec, disorder, neel_x_state(4), [0.5])

    def test_config_validation(self):
        with pytest.raises(ValueError, match="reversal_k"):
            EchoProtocolConfig(site_i=0, sites_j=(1,), reversal_k=0)
        with pytest.raises(ValueError, match="reversal_k"):
            EchoProtocolConfig(site_i=0, sites_j=(1,), reversal_k=1.5)
        with pytest.raises(ValueError, match="axis"):
            EchoProtocolConfig(site_i=0, sites_j=(1,), axis="q")
        assert EchoProtocolConfig(site_i=0, sites_j=2).sites_j == (2,)
