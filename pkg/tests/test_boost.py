from __future__ import annotations
import math
import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st
from hypothesis.extra.numpy import arrays
from optipac.boost import (BoostConfig, RandomString, WeightState, adaboost_sample, inverse_cdf, inverse_cdf_many, margin_bound_base,
                           margin_loss_bound, round_success_tail, rounds_for, step_size, target_for)
from optipac.core import TrainingSequence, empirical_margin_loss
from optipac.errors import BadParams, StreamExhausted
from optipac.ledger import CostLedger
from optipac.oracles import ThresholdERM, ThresholdHypothesis
from conftest import ConstantERM, threshold_sample


class RecordingERM(ThresholdERM):
    """Remembers every sample it was handed. Every other call answers all-negative, which gets rejected on a balanced sample."""

    def __init__(self) -> None:
        super().__init__()
        self.samples: list[np.ndarray] = []

    def _train(self, S: TrainingSequence, ledger: CostLedger) -> ThresholdHypothesis:
        self.samples.append(S.indices.copy())
        if len(self.samples) % 2 == 0:
            return ThresholdHypothesis(2.0, 1)
        return super()._train(S, ledger)


def linear_scan(C: np.ndarray, u: float) -> int:
    return next(l for l in range(1, len(C) + 1) if u < C[l - 1])


def desk_run(m: int, seed: int, **changes):
    S = threshold_sample(m, seed)
    cfg = BoostConfig.for_sample(m, 0.1, 1, "desk")
    if changes:
        cfg = BoostConfig(**{**cfg.to_dict(), **changes})
    r = RandomString(seed, cfg.rounds_n, cfg.sample_size_s)
    return S, cfg, adaboost_sample(S, r, ThresholdERM(), cfg)


class TestFormulas:
    def test_step_size(self):
        assert step_size(0.75, 0.45) == pytest.approx(0.5 * math.log(19 / 7), abs=1e-12)

    def test_per_round_base(self):
        assert margin_bound_base(0.75, 0.45) <= 0.96 + 1e-12

    def test_margin_loss_bound(self):
        assert margin_loss_bound(0.75, 0.45, 100) == pytest.approx(margin_bound_base(0.75, 0.45) ** 100)
        assert margin_loss_bound(0.75, 0.45, 100) <= (24 / 25) ** 100 * (1 + 1e-9)
        assert margin_loss_bound(0.75, 0.45, 0) == 1

    def test_margin_loss_bound_bad_params(self):
        with pytest.raises(BadParams):
            margin_loss_bound(0.75, 0.45, -1)
        with pytest.raises(BadParams):
            margin_loss_bound(0.95, 0.45, 3)

    def test_round_success_tail(self):
        assert round_success_tail(12) == pytest.approx(0.83 ** 12)
        with pytest.raises(BadParams):
            round_success_tail(0)

    def test_counts(self):
        assert target_for(36) == math.ceil(200 * math.log(36))
        assert rounds_for(36, 0.1) == 6 * math.ceil(200 * math.log(2880))
        assert target_for(1) == 1


class TestBoostConfig:
    def test_full_profile(self):
        cfg = BoostConfig.for_sample(36, 0.1, 1, "full")
        assert cfg.sample_size_s == 550
        assert cfg.target_t == 717
        assert cfg.rounds_n == 9564
        assert not cfg.early_stop

    def test_desk_profile_scales(self):
        full = BoostConfig.for_sample(216, 0.1, 2, "full")
        desk = BoostConfig.for_sample(216, 0.1, 2, "desk")
        assert desk.sample_size_s == math.ceil(1100 * 0.2)
        assert desk.target_t < full.target_t and desk.rounds_n < full.rounds_n
        assert desk.rounds_n >= desk.target_t
        assert desk.early_stop

    def test_row_size_sets_target(self):
        cfg = BoostConfig.for_sample(216, 0.1, 1, "full", m_row=44)
        assert cfg.target_t == target_for(44)
        assert cfg.rounds_n == rounds_for(216, 0.1)

    def test_validation(self):
        with pytest.raises(BadParams):
            BoostConfig(sample_size_s=10, rounds_n=5, target_t=6)
        with pytest.raises(BadParams):
            BoostConfig(sample_size_s=0, rounds_n=5, target_t=1)
        with pytest.raises(BadParams):
            BoostConfig.for_sample(36, 1.5, 1)
        with pytest.raises(ValueError):
            BoostConfig.for_sample(36, 0.1, 1, "nope")


class TestRandomString:
    def test_blocks_are_reproducible(self):
        a, b = RandomString(3, 10, 5), RandomString(3, 10, 5)
        assert np.array_equal(a.block(4), b.block(4))
        assert not np.array_equal(a.block(4), a.block(5))

    def test_keys_split_streams(self):
        assert not np.array_equal(RandomString(3, 10, 5).block(1), RandomString(3, 10, 5, key=(6, 0)).block(1))

    def test_exhausted(self):
        r = RandomString(0, 3, 2)
        with pytest.raises(StreamExhausted):
            r.block(0)
        with pytest.raises(StreamExhausted):
            r.block(4)
        assert len(r.block(3)) == 2


class TestSampler:
    @given(arrays(np.float64, st.integers(1, 60), elements=st.floats(0.01, 1)), st.lists(st.floats(0, 1, exclude_max=True), min_size=1, max_size=20))
    @hyp_settings(max_examples=200)
    def test_matches_linear_scan(self, weights, us):
        state = WeightState.reweight(WeightState.uniform(len(weights)), weights)
        C = state.C
        fast = inverse_cdf_many(C, np.asarray(us))
        assert fast.tolist() == [linear_scan(C, u) for u in us]

    def test_boundaries(self):
        C = np.array([0.25, 0.5, 1.0])
        assert inverse_cdf(C, 0.0) == 1
        assert inverse_cdf(C, 0.25) == 2
        assert inverse_cdf(C, 0.4999) == 2
        assert inverse_cdf(C, 0.5) == 3
        assert inverse_cdf(C, np.nextafter(1.0, 0)) == 3

    def test_cumulative_ends_at_one(self):
        state = WeightState.uniform(7)
        assert state.C[-1] == 1.0
        assert math.fsum(state.reweight(np.arange(1, 8, dtype=float)).D) == pytest.approx(1.0, abs=1e-12)


class TestAdaBoostSample:
    @pytest.mark.parametrize("seed", range(4))
    def test_certified_vote(self, seed):
        S, cfg, res = desk_run(36, seed)
        assert not res.fallback
        assert res.vote.t == cfg.target_t
        assert empirical_margin_loss(res.vote, S, cfg.theta) == 0
        assert res.ledger.fallback_train_calls == 0

    def test_every_train_call_gets_s_examples(self):
        _, cfg, res = desk_run(36, 1)
        assert set(res.ledger.train_sizes) == {cfg.sample_size_s}
        assert res.ledger.erm_train_calls == len(res.trace.rounds)
        assert res.ledger.sampler_draws == cfg.sample_size_s * len(res.trace.rounds)

    def test_partial_losses_follow_bound(self):
        _, cfg, res = desk_run(36, 2)
        base = margin_bound_base(cfg.theta, cfg.gamma)
        for rec in res.trace.rounds:
            if rec.partial_loss is not None:
                assert rec.partial_loss <= base ** rec.counter

    def test_trace_records(self):
        _, cfg, res = desk_run(36, 3)
        accepted = [r for r in res.trace.rounds if r.accepted]
        assert res.trace.accepted == len(accepted) >= cfg.target_t
        assert all(r.epsilon <= 0.5 - cfg.gamma + cfg.error_tolerance for r in accepted)
        assert all(r.Z_vote is not None for r in accepted[:cfg.target_t])
        assert len(res.trace.weighted) == len(accepted)
        assert res.trace.normalizer_product() > 0

    def test_normalizer_product_matches_exponential_loss(self):
        S, _, res = desk_run(36, 3)
        F = sum(alpha * h.predict(S.X).astype(float) for alpha, h in res.trace.weighted)
        assert res.trace.normalizer_product() == pytest.approx(np.mean(np.exp(-S.y * F)), rel=1e-9)

    def test_rejected_rounds_leave_weights_alone(self):
        S = threshold_sample(36, 0)
        cfg = BoostConfig(sample_size_s=20, rounds_n=30, target_t=5)
        r = RandomString(0, cfg.rounds_n, cfg.sample_size_s)
        erm = RecordingERM()
        res = adaboost_sample(S, r, erm, cfg)
        assert any(not rec.accepted for rec in res.trace.rounds)

        # replay the weights: each round's draws must come from the weighting left by the accepted rounds only
        state = WeightState.uniform(len(S))
        for rec, drawn in zip(res.trace.rounds, erm.samples):
            assert np.array_equal(drawn, inverse_cdf_many(state.C, r.block(rec.index)) - 1)
            if rec.accepted:
                state = state.reweight(np.exp(-cfg.alpha * rec.hypothesis.predict(S.X) * S.y))

    def test_early_stop_ends_at_target(self):
        _, cfg, res = desk_run(36, 0)
        assert cfg.early_stop
        assert res.trace.rounds[-1].counter == cfg.target_t

    def test_early_stop_keeps_the_vote(self):
        _, _, stopped = desk_run(36, 4)
        _, _, literal = desk_run(36, 4, early_stop=False)
        assert stopped.fallback == literal.fallback
        assert [h.params() for h in stopped.vote.voters] == [h.params() for h in literal.vote.voters]

    def test_literal_loop_runs_every_round(self):
        _, cfg, res = desk_run(36, 0, early_stop=False, rounds_n=200)
        assert len(res.trace.rounds) == 200
        assert res.vote.t == cfg.target_t
        # accepted rounds past the target still reweight
        assert len(res.trace.weighted) == res.trace.accepted

    def test_deterministic(self):
        _, _, a = desk_run(36, 5)
        _, _, b = desk_run(36, 5)
        assert [h.params() for h in a.vote.voters] == [h.params() for h in b.vote.voters]
        assert a.ledger == b.ledger

    def test_fallback(self):
        S = threshold_sample(36, 0)
        cfg = BoostConfig(sample_size_s=20, rounds_n=12, target_t=2)
        res = adaboost_sample(S, RandomString(0, 12, 20), ConstantERM(), cfg)
        assert res.fallback and res.branch == "fallback"
        assert res.vote.t == 2
        assert res.vote.voters[0] is res.vote.voters[1]
        assert res.vote.voters[0].provenance["fallback"]
        assert res.ledger.fallback_train_calls == 1
        assert res.ledger.train_sizes[36] == 1
        # skipped rounds never reweight
        assert res.trace.accepted == 0 and res.trace.weighted == []

    def test_random_string_shape_checked(self):
        S = threshold_sample(36, 0)
        cfg = BoostConfig(sample_size_s=20, rounds_n=12, target_t=2)
        with pytest.raises(BadParams):
            adaboost_sample(S, RandomString(0, 12, 19), ThresholdERM(), cfg)

    def test_shared_ledger(self):
        S = threshold_sample(36, 0)
        cfg = BoostConfig.for_sample(36, 0.1, 1, "desk")
        ledger = CostLedger(erm_train_calls=5)
        res = adaboost_sample(S, RandomString(0, cfg.rounds_n, cfg.sample_size_s), ThresholdERM(), cfg, ledger)
        assert res.ledger is ledger
        assert ledger.erm_train_calls == 5 + len(res.trace.rounds)
