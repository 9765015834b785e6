"""Lossy content-semantic compression by alternating minimization.

Trades channel rate against transmitted content: minimize the Shannon
mutual information between source messages and reconstructions while the
expected transmitted-content payoff stays above a floor.  The scalarized
objective rate - beta*payoff is minimized by the classic alternating
scheme: with the conditional fixed, the best output marginal is the
induced one; with the marginal fixed, the best conditional tilts each
row by 2^(beta*payoff) and renormalizes.  Both half-steps lower the
objective, which is checked on every pass.

A reconstruction only transmits content when the source message entails
it: weakening a true description keeps it true, while a reconstruction
that rules the source out misleads rather than informs, so its payoff is
zero.  For entailed pairs the transmitted content reduces to the content
of the reconstruction itself.  Payoffs are the normalized values; the
raw volume factor is a positive constant that rescales the floor without
moving any argmin, so the optimizer never materializes it.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleTargetError
from .inductive import constituent_prior
from .measures import FixedMeasure, MessagePartition, transcont
from .sublang import Sentence

_LN2 = math.log(2.0)
_MONOTONE_SLACK = 1e-9
DEFAULT_CANDIDATE_CAP = 1 << 12


@dataclass(frozen=True, slots=True)
class LossyConfig:
    """Constraint floor and solver controls for the rate sweep."""

    d_star: float = 0.0
    beta_grid: tuple[float, ...] = (0.0,) + tuple(float(1 << i) for i in range(14))
    max_iters: int = 500
    tol: float = 1e-10

    def __post_init__(self):
        if not math.isfinite(self.d_star) or self.d_star < 0.0:
            raise ValueError("d_star must be finite and nonnegative")
        grid = tuple(float(b) for b in self.beta_grid)
        if not grid:
            raise ValueError("beta_grid must be non-empty")
        if any(not math.isfinite(b) or b < 0.0 for b in grid):
            raise ValueError("beta values must be finite and nonnegative")
        if list(grid) != sorted(grid):
            raise ValueError("beta_grid must be sorted ascending")
        object.__setattr__(self, "beta_grid", grid)
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True, slots=True)
class RDPoint:
    """One solved trade-off point on the rate curve."""

    rate_bits: float
    cont_info: float
    beta: float
    conditional: tuple[tuple[float, ...], ...]

    def as_json(self) -> dict:
        return {
            "beta": self.beta,
            "rate_bits": self.rate_bits,
            "cont_info": self.cont_info,
        }


def payoff_matrix(source: MessagePartition, alphabet: list[Sentence],
                  model) -> np.ndarray:
    """Transmitted content between each source message and reconstruction.

    Entailed reconstructions earn their transmitted content; pairings the
    source rules out earn zero.
    """
    if not alphabet:
        raise ValueError("reconstruction alphabet must be non-empty")
    if not source.members:
        raise ValueError("source partition carries no message sentences")
    return np.array([[transcont(recon, msg, model)
                      if msg.constituents <= recon.constituents else 0.0
                      for recon in alphabet]
                     for msg in source.members])


def _mutual_bits(ln_p: np.ndarray, ln_cond: np.ndarray,
                 payoff: np.ndarray) -> tuple[float, float]:
    """True mutual information (bits) and expected payoff of a channel."""
    ln_joint = ln_p[:, None] + ln_cond
    ln_q = np.logaddexp.reduce(ln_joint, axis=0)
    w = np.exp(ln_joint)
    with np.errstate(invalid="ignore"):
        gain = ln_cond - ln_q[None, :]
        terms = np.where(w > 0.0, w * gain, 0.0)
    rate = max(float(terms.sum()) / _LN2, 0.0)
    return rate, float((w * payoff).sum())


def _ln_probs(probs) -> np.ndarray:
    p = np.asarray(probs, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(p)


def _ba_point(ln_p: np.ndarray, payoff: np.ndarray, beta: float,
              max_iters: int, tol: float) -> RDPoint:
    n, m = payoff.shape
    tilt = beta * _LN2 * payoff
    ln_cond = np.full((n, m), -math.log(m))
    prev_rate = math.inf
    prev_obj = math.inf
    rate, mean_payoff = math.inf, 0.0
    for _ in range(max_iters):
        ln_q = np.logaddexp.reduce(ln_p[:, None] + ln_cond, axis=0)
        ln_cond = ln_q[None, :] + tilt
        ln_cond = ln_cond - np.logaddexp.reduce(ln_cond, axis=1)[:, None]
        rate, mean_payoff = _mutual_bits(ln_p, ln_cond, payoff)
        obj = rate - beta * mean_payoff
        assert obj <= prev_obj + _MONOTONE_SLACK, "objective increased"
        prev_obj = obj
        if abs(rate - prev_rate) < tol:
            break
        prev_rate = rate
    conditional = tuple(tuple(row) for row in np.exp(ln_cond))
    return RDPoint(rate, mean_payoff, beta, conditional)


def _argmax_point(ln_p: np.ndarray, payoff: np.ndarray) -> RDPoint:
    """Deterministic best-reconstruction channel; attains the payoff cap."""
    n, m = payoff.shape
    best = payoff.argmax(axis=1)
    ln_cond = np.full((n, m), -np.inf)
    ln_cond[np.arange(n), best] = 0.0
    rate, mean_payoff = _mutual_bits(ln_p, ln_cond, payoff)
    conditional = tuple(tuple(row) for row in np.exp(ln_cond))
    return RDPoint(rate, mean_payoff, math.inf, conditional)


def lossy_optimize(source: MessagePartition, reconstruction_alphabet: list[Sentence],
                   cfg: LossyConfig, model) -> RDPoint:
    """Cheapest channel whose transmitted content reaches cfg.d_star.

    d_star is in normalized content units (same scale as the payoff
    matrix).  The multiplier grid is scanned, a deterministic
    best-reconstruction channel is kept as the final candidate, and the
    smallest-rate point meeting the floor wins.  A floor above what even
    the deterministic channel transmits raises InfeasibleTargetError
    naming that maximum.
    """
    ln_p = _ln_probs(source.probs)
    payoff = payoff_matrix(source, reconstruction_alphabet, model)
    cap_point = _argmax_point(ln_p, payoff)
    if cfg.d_star > cap_point.cont_info:
        raise InfeasibleTargetError(cfg.d_star, cap_point.cont_info)
    candidates = [_ba_point(ln_p, payoff, beta, cfg.max_iters, cfg.tol)
                  for beta in cfg.beta_grid]
    candidates.append(cap_point)
    feasible = [pt for pt in candidates if pt.cont_info >= cfg.d_star]
    return min(feasible, key=lambda pt: (pt.rate_bits, pt.beta))


def rd_sweep(source: MessagePartition, alphabet: list[Sentence],
             cfg: LossyConfig, model) -> list[RDPoint]:
    """One solved point per multiplier, pruned to the efficient frontier.

    Retained points are sorted by rate, no retained point spends more
    rate for less transmitted content than another, and exact duplicates
    collapse to the smallest multiplier that produced them.
    """
    ln_p = _ln_probs(source.probs)
    payoff = payoff_matrix(source, alphabet, model)
    with ThreadPoolExecutor(max_workers=min(8, len(cfg.beta_grid))) as pool:
        points = list(pool.map(
            lambda beta: _ba_point(ln_p, payoff, beta, cfg.max_iters, cfg.tol),
            cfg.beta_grid))
    points.sort(key=lambda pt: (pt.rate_bits, -pt.cont_info, pt.beta))
    frontier: list[RDPoint] = []
    best = -math.inf
    for pt in points:
        if pt.cont_info > best + 1e-12:
            frontier.append(pt)
            best = pt.cont_info
    return frontier


def candidate_reconstructions(model, cap: int = DEFAULT_CANDIDATE_CAP) -> list[Sentence]:
    """Reconstruction sentences: every way of weakening a source message.

    Dropping conjuncts from a maximally specific description leaves the
    claim that some subset of kinds is exemplified, whose sentence is the
    upward closure of that subset.  All kind subsets are offered, from the
    full-detail claims down to the empty one (the tautology, the free
    zero-content reconstruction).  When the subsets outnumber the cap, a
    greedy pass keeps the ones adding the most posterior-weighted
    transmitted content.
    """
    if cap < 1:
        raise ValueError("candidate cap must be positive")
    sl = model.sublang
    big_k = model.big_k
    sentences = []
    for size in range(big_k, -1, -1):
        for kinds in itertools.combinations(range(big_k), size):
            sentences.append(sl.upset(kinds))
        if len(sentences) > 8 * cap:
            break
    if len(sentences) <= cap:
        return sentences

    source = MessagePartition.from_model(model)
    ln_p = _ln_probs(source.probs)
    p = np.exp(ln_p)
    payoff = payoff_matrix(source, sentences, model)
    chosen: list[int] = []
    covered = np.zeros(len(source.members))
    remaining = set(range(len(sentences)))
    while len(chosen) < cap and remaining:
        gains = {j: float((p * np.maximum(covered, payoff[:, j])).sum())
                 for j in remaining}
        j_best = max(sorted(remaining), key=lambda j: gains[j])
        if chosen and gains[j_best] <= float((p * covered).sum()):
            break
        chosen.append(j_best)
        remaining.discard(j_best)
        covered = np.maximum(covered, payoff[:, j_best])
    return [sentences[j] for j in chosen]


def content_cap(source: MessagePartition, alphabet: list[Sentence],
                model) -> RDPoint:
    """Deterministic best-reconstruction channel: the payoff ceiling."""
    return _argmax_point(_ln_probs(source.probs),
                         payoff_matrix(source, alphabet, model))


def receiver_prior(sublang, params=None) -> FixedMeasure:
    """The constituent-prior measure: a receiver who has seen no evidence.

    Transmitted content is valued against this measure; under the
    sender's own posterior every evidence-entailed reconstruction is
    already certain and so transmits nothing.
    """
    weights = {c: constituent_prior(c.width, sublang.big_k, params).to_float()
               for c in sublang.all_constituents()}
    return FixedMeasure(weights)


def relative_informativeness(point: RDPoint, source_entropy: float) -> float:
    """Transmitted content as a fraction of the source's content entropy."""
    if source_entropy <= 0.0:
        return 0.0
    return point.cont_info / source_entropy
