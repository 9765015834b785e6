"""Rate against transmitted content: solver vs grid search, frontier shape."""

import functools
import math
import random

import numpy as np
import pytest

from semcomm.errors import InfeasibleTargetError
from semcomm.inductive import constituent_prior
from semcomm.lossy import (LossyConfig, RDPoint, _argmax_point, _ba_point,
                           _ln_probs, candidate_reconstructions, content_cap,
                           lossy_optimize, payoff_matrix, rd_sweep,
                           receiver_prior, relative_informativeness)
from semcomm.measures import MessagePartition, cont_sentence

from conftest import random_model

_LN2 = math.log(2.0)


def _dual_objective(probs, payoff, beta, q):
    """Channel-free scalarized objective at output marginal q.

    For a fixed marginal the best conditional tilts each row by
    2^(beta*payoff) against q, and the minimized objective collapses to
    -sum_i p_i log2 sum_j q_j 2^(beta*payoff_ij).  Scanning q over the
    simplex therefore bounds the true optimum from above with no channel
    parameters at all.
    """
    inner = (q[None, :] * np.exp2(beta * payoff)).sum(axis=1)
    return float(-(probs * np.log2(inner)).sum())


def _grid_min_2(probs, payoff, beta, steps=400):
    t = np.linspace(0.0, 1.0, steps + 1)
    q = np.stack([t, 1.0 - t], axis=1)
    inner = q @ np.exp2(beta * payoff).T
    vals = -(probs[None, :] * np.log2(inner)).sum(axis=1)
    return float(vals.min())


def _grid_min_3(probs, payoff, beta, steps=30):
    pts = []
    for i in range(steps + 1):
        for j in range(steps + 1 - i):
            pts.append((i / steps, j / steps, (steps - i - j) / steps))
    q = np.array(pts)
    inner = q @ np.exp2(beta * payoff).T
    vals = -(probs[None, :] * np.log2(inner)).sum(axis=1)
    return float(vals.min())


@pytest.mark.parametrize("beta", [0.0, 0.5, 1.0, 2.0, 4.0])
def test_solver_matches_grid_two_by_two(beta):
    probs = np.array([0.35, 0.65])
    payoff = np.array([[1.0, 0.2], [0.1, 0.8]])
    point = _ba_point(_ln_probs(probs), payoff, beta, 2000, 1e-12)
    got = point.rate_bits - beta * point.cont_info
    want = _grid_min_2(probs, payoff, beta)
    assert abs(got - want) <= 1e-3


@pytest.mark.parametrize("beta", [0.0, 1.0, 2.0, 3.0])
def test_solver_matches_grid_three_by_three(beta):
    rnd = np.random.default_rng(17)
    probs = np.array([0.5, 0.3, 0.2])
    payoff = rnd.uniform(0.0, 1.0, size=(3, 3))
    point = _ba_point(_ln_probs(probs), payoff, beta, 4000, 1e-13)
    got = point.rate_bits - beta * point.cont_info
    want = _grid_min_3(probs, payoff, beta)
    assert abs(got - want) <= 1e-3


def test_dual_objective_consistent_with_solver():
    # the solver's own induced marginal must reproduce its objective
    probs = np.array([0.4, 0.6])
    payoff = np.array([[0.9, 0.3], [0.2, 0.7]])
    beta = 1.5
    point = _ba_point(_ln_probs(probs), payoff, beta, 3000, 1e-13)
    cond = np.array(point.conditional)
    q = probs @ cond
    direct = point.rate_bits - beta * point.cont_info
    assert abs(direct - _dual_objective(probs, payoff, beta, q)) <= 1e-6


def test_zero_beta_spends_no_rate():
    probs = np.array([0.25, 0.25, 0.5])
    payoff = np.random.default_rng(2).uniform(size=(3, 4))
    point = _ba_point(_ln_probs(probs), payoff, 0.0, 500, 1e-12)
    assert point.rate_bits <= 1e-9


def test_conditional_rows_normalize():
    probs = np.array([0.3, 0.7])
    payoff = np.array([[1.0, 0.0], [0.0, 1.0]])
    point = _ba_point(_ln_probs(probs), payoff, 3.0, 500, 1e-12)
    for row in point.conditional:
        assert math.fsum(row) == pytest.approx(1.0, abs=1e-9)


def test_argmax_point_attains_cap():
    probs = np.array([0.5, 0.5])
    payoff = np.array([[0.8, 0.1], [0.3, 0.9]])
    point = _argmax_point(_ln_probs(probs), payoff)
    assert point.cont_info == pytest.approx(0.5 * 0.8 + 0.5 * 0.9, abs=1e-12)
    assert point.beta == math.inf


@functools.lru_cache(maxsize=4)
def _story_setup(seed=13, slack=1):
    rnd = random.Random(seed)
    model = random_model(rnd, slack=slack)
    source = MessagePartition.from_model(model)
    receiver = receiver_prior(model.sublang, model.params)
    alphabet = candidate_reconstructions(model)
    return model, source, receiver, alphabet


def test_payoff_entailment_mask():
    model, source, receiver, alphabet = _story_setup()
    payoff = payoff_matrix(source, alphabet, receiver)
    for i, msg in enumerate(source.members):
        for j, recon in enumerate(alphabet):
            if msg.constituents <= recon.constituents:
                want = cont_sentence(recon, receiver)
                assert payoff[i, j] == pytest.approx(want, abs=1e-12)
            else:
                assert payoff[i, j] == 0.0


def test_candidate_alphabet_is_upset_family():
    model, _, _, alphabet = _story_setup()
    sl = model.sublang
    assert len(alphabet) == 2 ** model.big_k
    all_cons = frozenset(sl.all_constituents())
    assert any(s.constituents == all_cons for s in alphabet)  # tautology
    for s in alphabet:
        for c in s.constituents:
            # upward closed: adding kinds never leaves the sentence
            for d in all_cons:
                if c.kinds <= d.kinds:
                    assert d in s.constituents


def test_candidate_cap_respected():
    model, _, _, _ = _story_setup()
    capped = candidate_reconstructions(model, cap=3)
    assert 1 <= len(capped) <= 3


def test_receiver_prior_weights():
    model, _, receiver, _ = _story_setup()
    sl = model.sublang
    for c in sl.all_constituents():
        want = constituent_prior(c.width, sl.big_k, model.params).to_float()
        got = receiver.sentence_probability(sl.sentence([c]))
        assert got == pytest.approx(want, rel=1e-12)


def test_sweep_frontier_monotone():
    model, source, receiver, alphabet = _story_setup()
    points = rd_sweep(source, alphabet, LossyConfig(), receiver)
    assert points
    rates = [pt.rate_bits for pt in points]
    infos = [pt.cont_info for pt in points]
    assert rates == sorted(rates)
    assert infos == sorted(infos)
    # non-dominated: every extra bit of rate buys strictly more content
    for a, b in zip(points, points[1:]):
        assert b.cont_info > a.cont_info
    assert points[0].rate_bits <= 1e-9


def test_sweep_capped_by_deterministic_channel():
    model, source, receiver, alphabet = _story_setup()
    cap = content_cap(source, alphabet, receiver)
    for pt in rd_sweep(source, alphabet, LossyConfig(), receiver):
        assert pt.cont_info <= cap.cont_info + 1e-9


def test_optimize_zero_floor_is_free():
    model, source, receiver, alphabet = _story_setup()
    point = lossy_optimize(source, alphabet, LossyConfig(d_star=0.0), receiver)
    assert point.rate_bits <= 1e-9


def test_optimize_meets_floor():
    model, source, receiver, alphabet = _story_setup()
    cap = content_cap(source, alphabet, receiver)
    floor = 0.5 * cap.cont_info
    point = lossy_optimize(source, alphabet, LossyConfig(d_star=floor), receiver)
    assert point.cont_info >= floor


def test_optimize_infeasible_floor():
    model, source, receiver, alphabet = _story_setup()
    cap = content_cap(source, alphabet, receiver)
    bad = cap.cont_info * 1.5 + 0.1
    with pytest.raises(InfeasibleTargetError) as exc:
        lossy_optimize(source, alphabet, LossyConfig(d_star=bad), receiver)
    assert exc.value.achievable == pytest.approx(cap.cont_info, rel=1e-12)


def test_relative_informativeness_tops_at_one():
    model, source, receiver, alphabet = _story_setup()
    cap = content_cap(source, alphabet, receiver)
    assert relative_informativeness(cap, cap.cont_info) == pytest.approx(1.0)
    assert relative_informativeness(cap, 0.0) == 0.0


def test_config_validation():
    with pytest.raises(ValueError):
        LossyConfig(d_star=-1.0)
    with pytest.raises(ValueError):
        LossyConfig(beta_grid=())
    with pytest.raises(ValueError):
        LossyConfig(beta_grid=(2.0, 1.0))
    with pytest.raises(ValueError):
        LossyConfig(max_iters=0)


def test_rd_point_json():
    pt = RDPoint(1.5, 0.25, 8.0, ((1.0,),))
    assert pt.as_json() == {"beta": 8.0, "rate_bits": 1.5, "cont_info": 0.25}
