import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shuttleqec.anneal import (
    AnnealConfig,
    AnnealState,
    Objective,
    anneal,
    anneal_chains,
    cost_delta,
    default_state,
    evaluate,
    format_trace,
    propose_move,
)
from shuttleqec.gf2codes import build_golay
from shuttleqec.schedule import LogicalNetwork, build_network
from shuttleqec.shuttle import distance_stats, initial_layout, parse_network, serialize_network, shuttle_transform

from .oracles import replay_separations

SMALL = dict(steps_per_temperature=150, temperature_levels=30, reheat_cycles=2)


@pytest.fixture(scope="module")
def golay_net():
    return build_network(build_golay())


@pytest.fixture(scope="module")
def golay_run(golay_net):
    return anneal(golay_net, AnnealConfig(seed=4, **SMALL))


def lex(row):
    return (row.best_max, row.best_j, row.best_rms)


class TestCost:
    def test_fewer_at_max(self):
        assert cost_delta(Objective(12, 3, 5.0), Objective(12, 2, 5.0)) == -12

    def test_identical(self):
        assert cost_delta(Objective(12, 3, 5.0), Objective(12, 3, 5.0)) == 0

    def test_rms_fallback(self):
        assert cost_delta(Objective(12, 3, 6.1), Objective(12, 3, 5.9)) == pytest.approx(-0.2)

    def test_product_tie_uses_rms(self):
        # 12*2 == 8*3: product unchanged, rms decides
        assert cost_delta(Objective(12, 2, 4.0), Objective(8, 3, 4.5)) == pytest.approx(0.5)

    def test_ordering(self):
        assert Objective(12, 9, 9.0) < Objective(13, 1, 1.0)
        assert Objective(12, 2, 9.0) < Objective(12, 3, 1.0)
        assert Objective(12, 2, 1.0) < Objective(12, 2, 1.5)


class TestProposeMove:
    def test_single_primitive_moves(self, golay_net):
        rng = np.random.default_rng(0)
        state = default_state(golay_net)
        kinds = {"order": 0, "mover": 0}
        for _ in range(10_000):
            new = propose_move(state, rng)
            diff_order = [i for i, (a, b) in enumerate(zip(state.order, new.order)) if a != b]
            diff_mov = [i for i, (a, b) in enumerate(zip(state.movers, new.movers)) if a != b]
            if diff_order:
                assert len(diff_order) == 2 and not diff_mov
                i, j = diff_order
                assert (new.order[i], new.order[j]) == (state.order[j], state.order[i])
                kinds["order"] += 1
            else:
                assert len(diff_mov) == 1
                kinds["mover"] += 1
            assert sorted(new.order) == list(range(golay_net.n))
            state = new
        assert 0.27 < kinds["order"] / 10_000 < 0.33

    def test_proposed_states_shuttle(self, golay_net):
        rng = np.random.default_rng(1)
        state = default_state(golay_net)
        for _ in range(200):
            state = propose_move(state, rng)
            sn = shuttle_transform(golay_net, initial_layout(23, 12, state.order), state.movers)
            assert sorted(sn.final.line) == list(range(35))
            assert evaluate(golay_net, state) == Objective.of(distance_stats(sn))

    def test_mix_extremes(self):
        rng = np.random.default_rng(2)
        s = AnnealState((0, 1, 2), (0, 0))
        assert propose_move(s, rng, move_mix=0.0).order == s.order
        assert propose_move(s, rng, move_mix=1.0).movers == s.movers
        # one ancilla: no transposition exists, so only mover flips
        one = AnnealState((0,), (0,))
        assert propose_move(one, rng, move_mix=1.0).movers == (1,)


class TestIncremental:
    @pytest.mark.parametrize("kind", ["verification", "generation"])
    def test_golay_matches_full_replay(self, kind):
        net = build_network(build_golay(), kind)
        anneal(net, AnnealConfig(seed=3, steps_per_temperature=100, temperature_levels=15, reheat_cycles=2), verify=True)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_random_networks(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 10))
        v = int(rng.integers(0, 5))
        gates = []
        for t in range(1, int(rng.integers(1, 6)) + 1):
            perm = rng.permutation(n + v)
            for i in range(int(rng.integers(1, (n + v) // 2 + 1))):
                gates.append((t, int(perm[2 * i]), int(perm[2 * i + 1])))
        net = LogicalNetwork(tuple(gates), n=n, v=v)
        anneal(net, AnnealConfig(seed=seed % 1000, initial_temperature=3.0, steps_per_temperature=50,
                                 temperature_levels=4, reheat_cycles=2, move_mix=0.5), verify=True)


class TestAnneal:
    def test_best_monotone(self, golay_run):
        best = [lex(r) for r in golay_run.trace]
        assert all(b <= a for a, b in zip(best, best[1:]))
        assert (golay_run.objective.max_s, golay_run.objective.j_max) == best[-1][:2]
        assert golay_run.objective.rms == pytest.approx(best[-1][2])

    def test_improves_on_start(self, golay_net, golay_run):
        assert golay_run.objective < evaluate(golay_net, default_state(golay_net))

    def test_result_replay_verified(self, golay_net, golay_run):
        sn = golay_run.network
        s_ref, _, final = replay_separations(list(golay_net.gates), list(golay_run.state.movers), sn.initial.line)
        by_gate = {(g.step, g.row_bit, g.col_bit): g.s for g in sn.gates}
        assert [by_gate[g] for g in golay_net.gates] == s_ref
        assert list(sn.final.line) == final
        assert parse_network(serialize_network(sn)) == sn
        assert golay_run.stats == distance_stats(sn)

    def test_deterministic(self, golay_net, golay_run):
        again = anneal(golay_net, AnnealConfig(seed=4, **SMALL))
        assert format_trace(again.trace) == format_trace(golay_run.trace)
        assert serialize_network(again.network) == serialize_network(golay_run.network)
        other = anneal(golay_net, AnnealConfig(seed=5, **SMALL))
        assert format_trace(other.trace) != format_trace(golay_run.trace)

    def test_schedule(self, golay_net):
        cfg = AnnealConfig(initial_temperature=100.0, cooling_factor=0.5, steps_per_temperature=1,
                           temperature_levels=3, reheat_cycles=2, reheat_factor=10.0)
        temps = [r.temperature for r in anneal(golay_net, cfg).trace]
        assert temps == pytest.approx([100, 50, 25, 125, 62.5, 31.25])
        assert [r.cycle for r in anneal(golay_net, cfg).trace] == [0, 0, 0, 1, 1, 1]

    def test_greedy_limit(self, golay_net):
        cfg = AnnealConfig(initial_temperature=1e-12, steps_per_temperature=200, temperature_levels=40,
                           reheat_cycles=1, seed=9)
        res = anneal(golay_net, cfg)
        assert res.counts["uphill_accepted"] == 0
        assert res.counts["uphill_proposed"] >= 1000
        cur = [(r.max_s * r.j_max, r.rms) for r in res.trace]
        assert all(b <= a for a, b in zip(cur, cur[1:]))
        assert res.counts["uphill_accepted"] / res.counts["uphill_proposed"] < 0.01

    def test_high_temperature(self, golay_net):
        cfg = AnnealConfig(initial_temperature=1e9, steps_per_temperature=1000, temperature_levels=4,
                           reheat_cycles=1, seed=2)
        c = anneal(golay_net, cfg).counts
        assert c["uphill_proposed"] >= 1000
        assert c["uphill_accepted"] / c["uphill_proposed"] > 0.9

    def test_start_state(self, golay_net, golay_run):
        cfg = AnnealConfig(initial_temperature=1e-12, steps_per_temperature=10, temperature_levels=2, reheat_cycles=1)
        res = anneal(golay_net, cfg, start=golay_run.state)
        assert res.objective <= golay_run.objective
        with pytest.raises(ValueError):
            anneal(golay_net, cfg, start=AnnealState(golay_run.state.order, (0,)))

    def test_chains(self, golay_net):
        best, runs = anneal_chains(golay_net, AnnealConfig(seed=10, **SMALL), chains=3, workers=2)
        assert [r.seed for r in runs] == [10, 11, 12]
        assert all(best.objective <= r.objective for r in runs)
        solo = anneal(golay_net, AnnealConfig(seed=11, **SMALL))
        assert format_trace(solo.trace) == format_trace(runs[1].trace)
        with pytest.raises(ValueError):
            anneal_chains(golay_net, AnnealConfig(), chains=0)


class TestConfig:
    @pytest.mark.parametrize(
        "kw",
        [
            {"initial_temperature": 0},
            {"cooling_factor": 1.0},
            {"cooling_factor": 0},
            {"steps_per_temperature": 0},
            {"temperature_levels": 0},
            {"reheat_cycles": 0},
            {"reheat_factor": 1.0},
            {"move_mix": 1.5},
            {"seed": -1},
            {"seed": 1.5},
        ],
    )
    def test_rejects(self, kw):
        with pytest.raises(ValueError):
            AnnealConfig(**kw)

    def test_defaults(self):
        cfg = AnnealConfig()
        assert (cfg.cooling_factor, cfg.reheat_cycles, cfg.reheat_factor, cfg.move_mix) == (0.995, 5, 10.0, 0.3)
