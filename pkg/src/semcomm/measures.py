"""Content and surprise measures over posterior-weighted message spaces.

The two base measures price a message by what it rules out (cont = 1 - p)
and by how unexpected it is (inf = 1/p).  The entropy built on cont is
volume-scaled by 2^(predicates x entities), a factor that is never
materialized in the linear domain; quantities carrying it live in
ExtremeReal.  Complements such as 1 - p are always accumulated directly
over the excluded hypotheses, never as a subtraction from one, so they
survive p within 10^-15000 of certainty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import DomainMismatchError
from .inductive import InductiveModel
from .sublang import Constituent, Sentence
from .xreal import ExtremeReal, xsum

_NORM_TOL = 1e-9


def cont(p: float) -> float:
    """Content of a message with probability p: what it excludes, 1 - p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return 1.0 - p


def inf_measure(p: float) -> float:
    """Reciprocal surprise measure 1/p; p = 0 signals infinite information."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if p == 0.0:
        return math.inf
    return 1.0 / p


def inf_entropy(alphabet_probs: Sequence[float]) -> float:
    """Expected log surprise sum p_i * log2(1/p_i) in bits."""
    probs = list(alphabet_probs)
    if any(p < 0 for p in probs):
        raise ValueError("probabilities must be nonnegative")
    if abs(math.fsum(probs) - 1.0) > _NORM_TOL:
        raise ValueError("probabilities must sum to one")
    return math.fsum(p * math.log2(1.0 / p) for p in probs if p > 0.0)


@dataclass(frozen=True, slots=True)
class UniverseSignature:
    """Size of the describable world: predicate and entity counts."""

    n_pred: int
    n_ent: int

    def __post_init__(self):
        if self.n_pred < 0 or self.n_ent < 0:
            raise ValueError("counts must be nonnegative")

    @property
    def volume_exponent(self) -> int:
        """Bits of raw state space, never expanded to 2**exponent directly."""
        return self.n_pred * self.n_ent

    def as_json(self) -> dict:
        return {"p": self.n_pred, "e": self.n_ent,
                "volume_exponent": self.volume_exponent}


@dataclass(frozen=True)
class MessagePartition:
    """Disjoint, exhaustive messages with their confirmation weights.

    ``ln_probs`` and ``ln_complements`` optionally carry the natural-log
    weight and the directly summed log of (1 - weight) per member; partition
    builders that know the posterior in log space supply them so entropy
    terms keep their meaning when weights sit within 10^-15000 of 0 or 1.
    """

    members: tuple[Sentence, ...]
    probs: tuple[float, ...]
    ln_probs: tuple[float, ...] | None = None
    ln_complements: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.members and len(self.members) != len(self.probs):
            raise ValueError("one weight per member")
        if any(p < 0 or p > 1 for p in self.probs):
            raise ValueError("weights must lie in [0, 1]")
        if abs(math.fsum(self.probs) - 1.0) > _NORM_TOL:
            raise ValueError("weights must sum to one")
        for ln in (self.ln_probs, self.ln_complements):
            if ln is not None and len(ln) != len(self.probs):
                raise ValueError("log columns must align with the weights")
        for i, a in enumerate(self.members):
            for b in self.members[i + 1:]:
                if a.constituents & b.constituents:
                    raise ValueError("partition members must be disjoint")

    def __len__(self) -> int:
        return len(self.probs)

    @classmethod
    def from_probs(cls, probs: Sequence[float]) -> "MessagePartition":
        """Synthetic partition given by weights alone (no sentences)."""
        p = tuple(float(x) for x in probs)
        ln = tuple(-math.inf if x == 0.0 else math.log(x) for x in p)
        lc = tuple(-math.inf if x == 1.0 else math.log1p(-x) for x in p)
        return cls((), p, ln, lc)

    @classmethod
    def from_model(cls, model: InductiveModel) -> "MessagePartition":
        """The hypothesis partition of the model's sub-language.

        Incompatible hypotheses keep weight zero; compatible ones get the
        posterior of their width class, with complements summed over the
        remaining hypotheses in log space.
        """
        sl = model.sublang
        members = []
        probs = []
        lns = []
        lcs = []
        need = set(range(model.summary.c))
        for constituent in sl.all_constituents():
            members.append(sl.sentence([constituent]))
            if not need <= constituent.kinds:
                probs.append(0.0)
                lns.append(-math.inf)
                lcs.append(0.0)
                continue
            w = constituent.width
            probs.append(model.unit_posterior(w))
            x = model.constituent_posterior(constituent)
            lns.append(x.ln_mag if not x.is_zero else -math.inf)
            lcs.append(model.ln_unit_complement(w))
        return cls(tuple(members), tuple(probs), tuple(lns), tuple(lcs))


@dataclass(frozen=True, slots=True)
class ContEntropy:
    """Volume-scaled and normalized expected content of a source."""

    raw: ExtremeReal
    normalized: ExtremeReal
    members: int

    @property
    def normalized_float(self) -> float:
        return self.normalized.to_float()

    def as_json(self) -> dict:
        return {
            "raw": self.raw.as_json(),
            "normalized": self.normalized.as_json(),
            "normalized_float": self.normalized_float,
            "members": self.members,
        }


def cont_entropy(partition: MessagePartition,
                 sig: UniverseSignature) -> ContEntropy:
    """Expected content sum p_i * (1 - p_i), raw copy scaled by 2^(p x e).

    The normalized value lies in [0, 1 - 1/M]; both it and the raw value are
    returned as ExtremeReal because real sources push the sum far below the
    smallest positive float.
    """
    if partition.ln_probs is not None and partition.ln_complements is not None:
        pairs = zip(partition.ln_probs, partition.ln_complements)
    else:
        pairs = (((-math.inf if p == 0.0 else math.log(p)),
                  (-math.inf if p == 1.0 else math.log1p(-p)))
                 for p in partition.probs)
    terms = [ExtremeReal.from_ln(ln_p + ln_c)
             for ln_p, ln_c in pairs
             if ln_p != -math.inf and ln_c != -math.inf]
    normalized = xsum(terms) if terms else ExtremeReal.zero()
    raw = normalized * ExtremeReal.from_log2(float(sig.volume_exponent))
    return ContEntropy(raw=raw, normalized=normalized, members=len(partition))


def scale_entropies(normalized_values: Sequence) -> dict:
    """Each value divided by the column minimum and maximum, in log space."""
    values = [v if isinstance(v, ExtremeReal) else ExtremeReal.from_float(v)
              for v in normalized_values]
    if not values:
        raise ValueError("need at least one value to scale")
    if any(v.is_zero or v.sign < 0 for v in values):
        raise ValueError("scaling needs strictly positive values")
    lo = min(values)
    hi = max(values)
    return {
        "min_scaled": [v / lo for v in values],
        "max_scaled": [v / hi for v in values],
    }


class FixedMeasure:
    """Message space with explicitly assigned hypothesis weights.

    Stands in for the posterior engine wherever a plain distribution over
    partition cells is wanted, such as a uniform weighting of state
    descriptions.
    """

    def __init__(self, weights: Mapping[Constituent, float]):
        total = math.fsum(weights.values())
        if abs(total - 1.0) > _NORM_TOL:
            raise ValueError("weights must sum to one")
        if any(w < 0 for w in weights.values()):
            raise ValueError("weights must be nonnegative")
        self._weights = dict(weights)

    def sentence_probability(self, s: Sentence) -> float:
        return math.fsum(self._weights.get(c, 0.0) for c in s.constituents)

    def difference_probability(self, s1: Sentence, s2: Sentence) -> float:
        """Weight of s1's cells outside s2, summed directly."""
        return math.fsum(self._weights.get(c, 0.0)
                         for c in s1.constituents - s2.constituents)

    def complement_probability(self, s: Sentence) -> float:
        return math.fsum(w for c, w in self._weights.items()
                         if c not in s.constituents)


def _is_engine(model) -> bool:
    return isinstance(model, InductiveModel)


def cont_sentence(s: Sentence, model) -> float:
    """Content of a sentence: the weight of everything it excludes."""
    if _is_engine(model):
        counts = model.complement_width_counts(model.member_width_counts(s))
        return math.fsum(model.probability_terms(counts))
    return model.complement_probability(s)


def cond_cont(s2: Sentence, s1: Sentence, model) -> float:
    """Content s2 adds on top of s1: weight of s1's cells that s2 rejects."""
    if _is_engine(model):
        have = model.member_width_counts(s1)
        keep = model.member_width_counts(s1 & s2)
        diff = {w: have[w] - keep.get(w, 0) for w in have}
        return math.fsum(model.probability_terms(diff))
    return model.difference_probability(s1, s2)


def transcont(s2: Sentence, s1: Sentence, model) -> float:
    """Content shared by the two sentences: weight excluded by both."""
    if _is_engine(model):
        union = model.member_width_counts(s1 | s2)
        return math.fsum(model.probability_terms(
            model.complement_width_counts(union)))
    return model.complement_probability(s1 | s2)


def cont_sentence_extreme(s: Sentence, model: InductiveModel) -> ExtremeReal:
    return model.complement_probability_extreme(s)


def cond_cont_extreme(s2: Sentence, s1: Sentence,
                      model: InductiveModel) -> ExtremeReal:
    have = model.member_width_counts(s1)
    keep = model.member_width_counts(s1 & s2)
    diff = {w: have[w] - keep.get(w, 0) for w in have}
    ln = model._table.ln_mass(diff)
    if ln == -math.inf:
        return ExtremeReal.zero()
    return ExtremeReal.from_ln(ln - model.ln_normalizer)


def transcont_extreme(s2: Sentence, s1: Sentence,
                      model: InductiveModel) -> ExtremeReal:
    return model.complement_probability_extreme(s1 | s2)


@dataclass(frozen=True)
class JointMessageDistribution:
    """Joint weights over sent and reconstructed messages.

    The joint matrix is supplied by the caller (typically a compressor's
    transition choice); union confirmations are derived from the model so
    the two conditional measures can be taken per pair.
    """

    row_messages: tuple[Sentence, ...]
    col_messages: tuple[Sentence, ...]
    joint: tuple[tuple[float, ...], ...]
    union_conf: tuple[tuple[float, ...], ...]
    model: InductiveModel = field(repr=False)

    def __post_init__(self):
        rows, cols = len(self.row_messages), len(self.col_messages)
        if len(self.joint) != rows or any(len(r) != cols for r in self.joint):
            raise ValueError("joint matrix shape must match the messages")
        flat = [x for row in self.joint for x in row]
        if any(x < 0 for x in flat):
            raise ValueError("joint weights must be nonnegative")
        if abs(math.fsum(flat) - 1.0) > _NORM_TOL:
            raise ValueError("joint weights must sum to one")
        for row in self.union_conf:
            if any(not 0.0 <= x <= 1.0 for x in row):
                raise ValueError("union confirmations must lie in [0, 1]")

    @classmethod
    def from_matrix(cls, rows: Sequence[Sentence], cols: Sequence[Sentence],
                    joint: Sequence[Sequence[float]],
                    model: InductiveModel) -> "JointMessageDistribution":
        rows = tuple(rows)
        cols = tuple(cols)
        jm = tuple(tuple(float(x) for x in row) for row in joint)
        conf = tuple(
            tuple(min(1.0, model.sentence_probability(s | r)) for r in cols)
            for s in rows)  # a full-cover union sums to 1 + O(ulp)
        return cls(rows, cols, jm, conf, model)


def cond_cont_entropy(joint: JointMessageDistribution,
                      sig: UniverseSignature) -> ExtremeReal:
    """Expected volume-scaled content the receiver still lacks per pair."""
    terms = []
    for i, s in enumerate(joint.row_messages):
        for j, r in enumerate(joint.col_messages):
            p = joint.joint[i][j]
            if p == 0.0:
                continue
            contrib = cond_cont_extreme(s, r, joint.model)
            if not contrib.is_zero:
                terms.append(ExtremeReal.from_float(p) * contrib)
    total = xsum(terms) if terms else ExtremeReal.zero()
    return total * ExtremeReal.from_log2(float(sig.volume_exponent))


def mutual_cont_information(joint: JointMessageDistribution,
                            sig: UniverseSignature) -> ExtremeReal:
    """Expected volume-scaled content shared between the matched messages."""
    terms = []
    for i, s in enumerate(joint.row_messages):
        for j, r in enumerate(joint.col_messages):
            p = joint.joint[i][j]
            if p == 0.0:
                continue
            contrib = transcont_extreme(s, r, joint.model)
            if not contrib.is_zero:
                terms.append(ExtremeReal.from_float(p) * contrib)
    total = xsum(terms) if terms else ExtremeReal.zero()
    return total * ExtremeReal.from_log2(float(sig.volume_exponent))


def is_l_exclusive(m1: Sentence, m2: Sentence, model=None) -> bool:
    """True when the sentences share no hypothesis (no common world)."""
    if m1.sublang_token != m2.sublang_token:
        raise DomainMismatchError("sentences belong to different sub-languages")
    return not (m1.constituents & m2.constituents)


def is_inductively_independent(m1: Sentence, m2: Sentence, model,
                               tol: float = _NORM_TOL) -> bool:
    """True when the joint weight factorizes over the two sentences."""
    p1 = model.sentence_probability(m1)
    p2 = model.sentence_probability(m2)
    p12 = model.sentence_probability(m1 & m2)
    return abs(p12 - p1 * p2) <= tol
