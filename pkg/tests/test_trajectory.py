import numpy as np
import pytest

from sshjump.gaussian import (
    CovarianceState,
    SpectrumError,
    dee,
    default_partition,
    ground_state,
)
from sshjump.model import (
    ChannelKind,
    DissipatorKind,
    JumpChannel,
    build_channels,
    build_hamiltonian,
)
from sshjump.trajectory import (
    Dissipator,
    apply_jump,
    channel_rates,
    drift_step,
    lambda_expect,
    run_trajectory,
    sample_jump_time,
    select_channel,
)

from conftest import make_spec


def spd_spec(n_cells=2, v=1.0, w=2.0, gamma=1.0, alpha=1.0):
    return make_spec(n_cells, v, w, gamma=gamma, alpha=alpha,
                     dissipator=DissipatorKind.SPD)


def sbd_spec(n_cells=2, v=1.0, w=2.0, gamma=1.0, alpha=1.0):
    return make_spec(n_cells, v, w, gamma=gamma, alpha=alpha,
                     dissipator=DissipatorKind.SBD)


class StubRng:
    def __init__(self, values):
        self.values = list(values)

    def random(self):
        return self.values.pop(0)


class TestLambdaExpect:
    def test_dimerized_gs_edge_loss_rate(self, dimerized_gs_l4):
        spec = spd_spec(gamma=2.0)
        lam, rates = lambda_expect(dimerized_gs_l4, build_channels(spec))
        assert abs(rates[0] - 2.0 * 0.5) < 1e-12  # gamma * G_11
        assert abs(lam - 0.5 * rates.sum()) < 1e-12

    def test_empty_chain_gain_rate(self):
        spec = spd_spec(gamma=1.0)
        state = CovarianceState(np.zeros((4, 4)))
        _, rates = lambda_expect(state, build_channels(spec))
        gain = [r for r, c in zip(rates, build_channels(spec)) if c.kind is ChannelKind.GAIN]
        assert np.allclose(gain, 1.0)
        loss = [r for r, c in zip(rates, build_channels(spec)) if c.kind is ChannelKind.LOSS]
        assert np.allclose(loss, 0.0)

    def test_dimerized_gs_sbd_link_rate(self, dimerized_gs_l4):
        # G11 = G22 = 1/2, G12 = 0 -> rate gamma on link (1,2)
        spec = sbd_spec(gamma=1.0)
        _, rates = lambda_expect(dimerized_gs_l4, build_channels(spec))
        assert abs(rates[0] - 1.0) < 1e-12

    def test_edge_and_bulk_loss_rates_equal_on_dimerized_gs(self, dimerized_gs_l8):
        spec = spd_spec(n_cells=4)
        chans = build_channels(spec)
        _, rates = lambda_expect(dimerized_gs_l8, chans)
        loss_rates = [r for r, c in zip(rates, chans) if c.kind is ChannelKind.LOSS]
        assert np.allclose(loss_rates, 0.5)

    def test_nan_is_hard_error(self):
        g = np.full((4, 4), np.nan, dtype=complex)
        with pytest.raises(FloatingPointError):
            channel_rates(g, build_channels(spd_spec()))

    def test_negative_rate_is_integrator_failure_signal(self):
        g = np.diag([-1e-3, 0.5, 0.5, 0.5]).astype(complex)
        with pytest.raises(SpectrumError, match="negative jump rate"):
            channel_rates(g, build_channels(spd_spec()))

    def test_fast_path_matches_generic_loop(self):
        rng = np.random.default_rng(5)
        m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        q, _ = np.linalg.qr(m)
        g = (q * rng.random(8)) @ q.conj().T
        for spec in (spd_spec(4, alpha=0.7), sbd_spec(4, alpha=0.9)):
            dis = Dissipator(build_channels(spec), 8)
            assert np.allclose(dis.rates(g), channel_rates(g, dis.channels), atol=1e-13)


class TestDriftStep:
    def test_unitary_limit_preserves_spectrum(self):
        spec = make_spec(4, 1.0, 2.0, gamma=0.0, dissipator=DissipatorKind.NONE)
        h = build_hamiltonian(spec)
        # quenched start so the state actually moves
        state = ground_state(build_hamiltonian(make_spec(4, 2.0, 1.0)))
        e0 = np.sort(np.linalg.eigvalsh(state.g))
        tr0 = np.trace(state.g).real
        for _ in range(1000):
            state = drift_step(state, h, [], 1e-3)
        assert abs(np.trace(state.g).real - tr0) < 1e-10
        assert np.abs(np.sort(np.linalg.eigvalsh(state.g)) - e0).max() < 1e-10
        assert state.log_norm == 0.0

    def test_half_filled_uniform_flow_direction(self):
        # H = 0, SPD, G = I/2: the no-click flow empties loss sites and
        # fills gain sites at rate gamma/4 while conserving the trace;
        # Lambda starts at L*gamma/4.
        spec = spd_spec(n_cells=2, gamma=1.0)
        chans = build_channels(spec)
        state = CovarianceState(0.5 * np.eye(4))
        lam, _ = lambda_expect(state, chans)
        assert abs(lam - 4 * 1.0 / 4.0) < 1e-12
        dt = 1e-3
        out = drift_step(state, np.zeros((4, 4)), chans, dt)
        dg = (out.g - state.g) / dt
        expected = np.diag([-0.25, 0.25, -0.25, 0.25])
        assert np.abs(dg - expected).max() < 1e-6
        assert abs(np.trace(out.g).real - 2.0) < 1e-12

    def test_matches_closed_form_two_site_loss(self):
        # single loss channel at site 1 of a two-site superposition:
        # |psi(t)> ~ (e^{-gt/2} c1† + c2†)|0>, so G_11 = 1/(1+e^{gt}),
        # G_12 = 1/(2 cosh(gt/2)) and n(t) = (e^{-gt} + 1)/2.
        gamma = 1.0
        chan = [JumpChannel(0, ChannelKind.LOSS, (0,), (np.sqrt(gamma),))]
        state = CovarianceState(0.5 * np.ones((2, 2)))
        h = np.zeros((2, 2))
        dt, t_final = 1e-3, 1.0
        for _ in range(int(t_final / dt)):
            state = drift_step(state, h, chan, dt)
        t = t_final
        assert abs(state.g[0, 0].real - 1.0 / (1.0 + np.exp(gamma * t))) < 1e-8
        assert abs(state.g[1, 1].real - 1.0 / (1.0 + np.exp(-gamma * t))) < 1e-8
        assert abs(state.g[0, 1].real - 0.5 / np.cosh(gamma * t / 2.0)) < 1e-8
        assert abs(np.exp(state.log_norm) - 0.5 * (np.exp(-gamma * t) + 1.0)) < 1e-8

    def test_sbd_trace_decreases(self):
        spec = sbd_spec(n_cells=3)
        h = build_hamiltonian(spec)
        chans = build_channels(spec)
        state = ground_state(h)
        traces = [np.trace(state.g).real]
        for _ in range(500):
            state = drift_step(state, h, chans, 1e-3)
            traces.append(np.trace(state.g).real)
        assert np.all(np.diff(traces) <= 1e-12)

    def test_gamma_dt_cap_enforced(self):
        spec = spd_spec(gamma=20.0)
        state = ground_state(build_hamiltonian(spec))
        with pytest.raises(ValueError, match="gamma\\*dt"):
            drift_step(state, build_hamiltonian(spec), build_channels(spec), 1e-3)

    def test_spectrum_guard(self):
        bad = CovarianceState(np.diag([1.5, 0.2]))
        with pytest.raises(SpectrumError):
            drift_step(bad, np.zeros((2, 2)),
                       [JumpChannel(0, ChannelKind.LOSS, (0,), (1.0,))], 1e-3)


class TestSampleJumpTime:
    def test_zero_rates_never_jump(self):
        state = CovarianceState(0.5 * np.eye(4))
        h = build_hamiltonian(make_spec(2, 1.0, 2.0))
        t, out = sample_jump_time(state, h, [], np.random.default_rng(0), 1e-2, 1.0)
        assert t is None and abs(out.time - 1.0) < 1e-12

    def test_unit_threshold_jumps_immediately(self):
        chan = [JumpChannel(0, ChannelKind.LOSS, (0,), (1.0,))]
        state = CovarianceState(np.eye(1))
        t, _ = sample_jump_time(state, np.zeros((1, 1)), chan, StubRng([1.0]), 1e-3, 1.0)
        assert t == pytest.approx(1e-3)

    def test_waiting_times_exponential(self):
        # dark occupied site: constant Lambda = gamma/2, waiting time
        # ~ Exp(gamma); empirical mean within 3 sigma over 2000 draws
        gamma, dt = 2.0, 5e-3
        chan = [JumpChannel(0, ChannelKind.LOSS, (0,), (np.sqrt(gamma),))]
        h = np.zeros((1, 1))
        rng = np.random.default_rng(123)
        draws = []
        for _ in range(2000):
            state = CovarianceState(np.eye(1))
            t, _ = sample_jump_time(state, h, chan, rng, dt, 50.0)
            assert t is not None
            draws.append(t)
        mean = np.mean(draws)
        sigma = (1.0 / gamma) / np.sqrt(len(draws))
        assert abs(mean - 1.0 / gamma) < 3.0 * sigma + dt

    def test_requires_reset_norm(self):
        state = CovarianceState(np.eye(1), log_norm=-0.5)
        with pytest.raises(ValueError, match="log_norm"):
            sample_jump_time(state, np.zeros((1, 1)), [], np.random.default_rng(0), 1e-3, 1.0)


class TestSelectChannel:
    def test_single_nonzero_rate(self):
        assert select_channel(np.array([0.0, 3.0, 0.0]), np.random.default_rng(0)) == 1

    def test_even_split(self):
        rng = np.random.default_rng(7)
        picks = [select_channel(np.array([1.0, 1.0]), rng) for _ in range(10_000)]
        frac = np.mean(picks)
        assert abs(frac - 0.5) < 3.0 * 0.5 / np.sqrt(10_000)

    def test_all_zero_is_hard_error(self):
        with pytest.raises(SpectrumError):
            select_channel(np.zeros(3), np.random.default_rng(0))


class TestApplyJump:
    def test_edge_loss_on_dimerized_gs(self, dimerized_gs_l4):
        chan = JumpChannel(0, ChannelKind.LOSS, (0,), (1.0,))
        part = default_partition(4)
        before = dee(dimerized_gs_l4, part)
        out = apply_jump(dimerized_gs_l4, chan)
        g = out.g
        assert max(abs(g[0, 0]), abs(g[3, 3]), abs(g[0, 3])) < 1e-12
        assert abs((dee(out, part) - before) + 2.0) < 1e-9
        assert out.log_norm == 0.0

    def test_gain_on_empty_chain(self):
        state = CovarianceState(np.zeros((4, 4)))
        out = apply_jump(state, JumpChannel(0, ChannelKind.GAIN, (2,), (1.0,)))
        expected = np.zeros((4, 4))
        expected[2, 2] = 1.0
        assert np.abs(out.g - expected).max() < 1e-12

    def test_sbd_link_jump_partial_disentangling_entropy(self, dimerized_gs_l4):
        from sshjump.gaussian import entropy_bits, reduced

        chan = JumpChannel(0, ChannelKind.LOSS, (0, 1), (1.0, 1.0))
        out = apply_jump(dimerized_gs_l4, chan)
        part = default_partition(4)
        s_aub = entropy_bits(reduced(out.g, part.idx_a_union_b))
        assert abs(s_aub - (2.0 - 0.75 * np.log2(3.0))) < 1e-9

    def test_loss_is_idempotent_through_zero_rate(self, dimerized_gs_l4):
        chan = JumpChannel(0, ChannelKind.LOSS, (0,), (1.0,))
        once = apply_jump(dimerized_gs_l4, chan)
        assert abs(once.g[0, 0]) < 1e-12
        with pytest.raises(SpectrumError):
            apply_jump(once, chan)

    def test_gain_saturates_through_zero_rate(self):
        state = CovarianceState(np.zeros((2, 2)))
        chan = JumpChannel(0, ChannelKind.GAIN, (1,), (1.0,))
        once = apply_jump(state, chan)
        assert abs(once.g[1, 1] - 1.0) < 1e-12
        with pytest.raises(SpectrumError):
            apply_jump(once, chan)

    def test_purity_preserved(self, dimerized_gs_l8):
        out = apply_jump(dimerized_gs_l8, JumpChannel(0, ChannelKind.LOSS, (2,), (1.0,)))
        assert out.purity_defect() < 1e-12


class TestRunTrajectory:
    def test_stationary_without_dissipation(self):
        # dimerized unquenched chain: S^D stays exactly at 2
        spec = make_spec(4, 0.0, 2.0, gamma=0.0, dissipator=DissipatorKind.NONE)
        init = ground_state(build_hamiltonian(spec))
        rec = run_trajectory(spec, init, 10.0, 1e-3, 0.5, seed=3)
        assert rec.events == []
        assert np.abs(rec.sdee - 2.0).max() < 1e-6

    def test_stationary_ground_state_generic_ratio(self):
        spec = make_spec(4, 0.2, 2.0, gamma=0.0, dissipator=DissipatorKind.NONE)
        init = ground_state(build_hamiltonian(spec))
        rec = run_trajectory(spec, init, 5.0, 1e-3, 0.5, seed=3)
        assert np.abs(rec.sdee - rec.sdee[0]).max() < 1e-6

    def test_deterministic_given_seed(self):
        spec = spd_spec(n_cells=4, v=2.0, w=20.0)
        init = ground_state(build_hamiltonian(spec))
        rec1 = run_trajectory(spec, init, 2.0, 1e-3, 0.1, seed=11)
        rec2 = run_trajectory(spec, init, 2.0, 1e-3, 0.1, seed=11)
        assert [(e.time, e.channel_id) for e in rec1.events] == [
            (e.time, e.channel_id) for e in rec2.events
        ]
        assert np.array_equal(rec1.sdee, rec2.sdee)
        assert len(rec1.events) > 0

    def test_event_fields(self):
        spec = spd_spec(n_cells=4, v=2.0, w=20.0)
        init = ground_state(build_hamiltonian(spec))
        rec = run_trajectory(spec, init, 2.0, 1e-3, 0.1, seed=11)
        times = [e.time for e in rec.events]
        assert times == sorted(times)
        for e in rec.events:
            assert np.isfinite(e.dsd)
            assert e.rate_at_jump > 0
            assert abs((e.sdee_after - e.sdee_before) - e.dsd) < 1e-12
            assert all(1 <= s <= 8 for s in e.support)

    def test_purity_and_spectrum_along_trajectory(self):
        spec = spd_spec(n_cells=4, v=2.0, w=20.0)
        init = ground_state(build_hamiltonian(spec))
        rec = run_trajectory(spec, init, 2.0, 1e-3, 0.1, seed=5, record_g=True)
        assert rec.purity_max < 1e-6
        for g in rec.g_snapshots:
            zeta = np.linalg.eigvalsh(g)
            assert zeta.min() > -1e-6 and zeta.max() < 1.0 + 1e-6

    def test_split_integrator_matches_rk4_scripted(self):
        spec = sbd_spec(n_cells=4, v=2.0, w=20.0)
        init = ground_state(build_hamiltonian(spec))
        sched = [(0.2, 0), (0.9, 3)]
        recs = {
            name: run_trajectory(spec, init, 1.5, 1e-3, 0.1, schedule=sched,
                                 record_g=True, integrator=name)
            for name in ("rk4", "split")
        }
        dg = max(
            np.abs(a - b).max()
            for a, b in zip(recs["rk4"].g_snapshots, recs["split"].g_snapshots)
        )
        assert dg < 1e-6

    def test_matches_ensemble_batch_member(self):
        from sshjump.ensemble import run_ensemble

        spec = spd_spec(n_cells=2, v=1.0, w=2.0)
        init = ground_state(build_hamiltonian(spec))
        solo = [run_trajectory(spec, init, 1.0, 1e-3, 0.25, seed=s) for s in (0, 1, 2)]
        ens = run_ensemble(spec, 3, 1.0, 1e-3, 0.25, base_seed=0)
        mean = np.mean([r.sdee for r in solo], axis=0)
        assert np.abs(mean - ens.sdee_mean).max() < 1e-10

    def test_seed_required_without_schedule(self):
        spec = spd_spec()
        init = ground_state(build_hamiltonian(spec))
        with pytest.raises(ValueError, match="seed"):
            run_trajectory(spec, init, 1.0, 1e-3, 0.1)

    def test_sample_dt_must_divide(self):
        spec = spd_spec()
        init = ground_state(build_hamiltonian(spec))
        with pytest.raises(ValueError, match="multiple"):
            run_trajectory(spec, init, 1.0, 1e-3, 0.0015, seed=0)
