"""Confirmation and justification measures over elicited probabilities.

Every measure shares one sign convention: positive means the evidence
confirms the claim, zero means irrelevance, negative means disconfirmation.
Log measures use the natural logarithm throughout so outputs are bit-stable.
Singular inputs (probabilities 0/1 inside logs or odds) yield ``defined=False``
with a signed infinity rather than failing, except where the operation's
precondition names ``SingularInput``; what-if sliders routinely hit endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .errors import InconsistentElicitation, InsufficientFields, SingularInput

EXACT_EPSILON = 1e-9
QUALITATIVE_EPSILON = 0.05

QUALITATIVE_VALUES = {"low": 0.1, "medium": 0.5, "high": 0.9}


class Qual(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class Measure(str, Enum):
    KEYNES = "keynes"
    EELLS = "eells"
    L_KEYNES = "l_keynes"
    L_EELLS = "l_eells"
    GOOD = "good"
    KEMENY_OPPENHEIM = "kemeny_oppenheim"
    CARNAP = "carnap"
    SHOGENJI = "shogenji"


_PROB_FIELDS = ("p_c", "p_c_given_e", "p_e", "p_e_given_c", "p_e_given_not_c")


@dataclass(frozen=True)
class EvidenceAssessment:
    """Elicited probabilities for one evidence-incorporation step.

    Fields may be numeric or qualitative (``Qual``); qualitative entries are
    mapped to representative numbers 0.1/0.5/0.9 and recorded, which widens
    the default consistency tolerance from 1e-9 to 0.05.
    """

    p_c: Optional[float] = None              # prior P(C)
    p_c_given_e: Optional[float] = None      # posterior P(C|E)
    p_e: Optional[float] = None
    p_e_given_c: Optional[float] = None
    p_e_given_not_c: Optional[float] = None
    epsilon: Optional[float] = None
    qualitative_fields: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        qualitative = set(self.qualitative_fields)
        for name in _PROB_FIELDS:
            value = getattr(self, name)
            if value is None:
                continue
            if isinstance(value, (Qual, str)):
                key = value.value if isinstance(value, Qual) else str(value).lower()
                if key not in QUALITATIVE_VALUES:
                    raise InsufficientFields(f"{name} has no numeric or qualitative value: {value!r}")
                object.__setattr__(self, name, QUALITATIVE_VALUES[key])
                qualitative.add(name)
                continue
            value = float(value)
            if not 0.0 <= value <= 1.0:
                raise InsufficientFields(f"{name} must lie in [0,1], got {value}")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "qualitative_fields", frozenset(qualitative))
        if self.epsilon is None:
            eps = QUALITATIVE_EPSILON if qualitative else EXACT_EPSILON
            object.__setattr__(self, "epsilon", eps)

    def consistency_errors(self) -> list:
        """Bayes / total-probability violations beyond the tolerance."""
        errors = []
        eps = self.epsilon
        if None not in (self.p_e, self.p_e_given_c, self.p_c, self.p_c_given_e) and self.p_e > 0:
            implied = self.p_e_given_c * self.p_c / self.p_e
            if abs(self.p_c_given_e - implied) > eps:
                errors.append(
                    "posterior is inconsistent with the likelihoods: "
                    f"P(C|E)={self.p_c_given_e:.6g} but P(E|C)P(C)/P(E)={implied:.6g}"
                )
        if None not in (self.p_e_given_c, self.p_e_given_not_c, self.p_c, self.p_e):
            implied = self.p_e_given_c * self.p_c + self.p_e_given_not_c * (1.0 - self.p_c)
            if abs(self.p_e - implied) > eps:
                errors.append(
                    "P(E) breaks the law of total probability: "
                    f"stated {self.p_e:.6g}, implied {implied:.6g}"
                )
        return errors

    @classmethod
    def from_joint(cls, p_ce, p_c_not_e, p_not_c_e, p_not_c_not_e, epsilon=None) -> "EvidenceAssessment":
        """Build a fully consistent assessment from a joint distribution over (C, E)."""
        total = p_ce + p_c_not_e + p_not_c_e + p_not_c_not_e
        if not math.isclose(float(total), 1.0, rel_tol=0, abs_tol=1e-12):
            raise InsufficientFields(f"joint cells must sum to 1, got {float(total)}")
        p_c = p_ce + p_c_not_e
        p_e = p_ce + p_not_c_e
        return cls(
            p_c=float(p_c),
            p_c_given_e=float(p_ce / p_e) if p_e > 0 else None,
            p_e=float(p_e),
            p_e_given_c=float(p_ce / p_c) if p_c > 0 else None,
            p_e_given_not_c=float(p_not_c_e / (1 - p_c)) if p_c < 1 else None,
            epsilon=epsilon,
        )


@dataclass(frozen=True)
class MeasureResult:
    measure: Measure
    value: float
    defined: bool = True
    note: str = ""

    @property
    def sign(self) -> int:
        if self.value > 0:
            return 1
        if self.value < 0:
            return -1
        return 0


def _require(a: EvidenceAssessment, *names):
    missing = [n for n in names if getattr(a, n) is None]
    if missing:
        raise InsufficientFields(f"assessment lacks: {', '.join(missing)}")


def keynes(a: EvidenceAssessment) -> MeasureResult:
    """log( P(C|E) / P(C) ): ratio distance from prior to posterior."""
    _require(a, "p_c", "p_c_given_e")
    if a.p_c == 0:
        raise SingularInput("keynes is undefined for a zero prior")
    if a.p_c_given_e == 0:
        return MeasureResult(Measure.KEYNES, -math.inf, defined=False)
    return MeasureResult(Measure.KEYNES, math.log(a.p_c_given_e / a.p_c))


def eells(a: EvidenceAssessment) -> MeasureResult:
    """P(C|E) - P(C): arithmetic distance from prior to posterior."""
    _require(a, "p_c", "p_c_given_e")
    return MeasureResult(Measure.EELLS, a.p_c_given_e - a.p_c)


def l_keynes(a: EvidenceAssessment) -> MeasureResult:
    """log( P(E|C) / P(E) ); equals keynes on Bayes-consistent assessments."""
    _require(a, "p_e", "p_e_given_c")
    if a.p_e == 0:
        raise SingularInput("l_keynes is undefined when the evidence has probability zero")
    if a.p_e_given_c == 0:
        return MeasureResult(Measure.L_KEYNES, -math.inf, defined=False)
    return MeasureResult(Measure.L_KEYNES, math.log(a.p_e_given_c / a.p_e))


def l_eells(a: EvidenceAssessment) -> MeasureResult:
    """P(E|C) - P(E)."""
    _require(a, "p_e", "p_e_given_c")
    return MeasureResult(Measure.L_EELLS, a.p_e_given_c - a.p_e)


def good(a: EvidenceAssessment) -> MeasureResult:
    """Log likelihood ratio log( P(E|C) / P(E|not C) ), a.k.a. log odds.

    Falls back to the posterior-odds form log( O(C|E) / O(C) ) when only the
    prior/posterior pair is available; the two agree on consistent inputs.
    """
    if a.p_e_given_c is not None and a.p_e_given_not_c is not None:
        if a.p_e_given_not_c == 0:
            if a.p_e_given_c == 0:
                raise SingularInput("good is undefined when both likelihoods are zero")
            return MeasureResult(Measure.GOOD, math.inf, defined=False)
        if a.p_e_given_c == 0:
            return MeasureResult(Measure.GOOD, -math.inf, defined=False)
        return MeasureResult(Measure.GOOD, math.log(a.p_e_given_c / a.p_e_given_not_c))
    _require(a, "p_c", "p_c_given_e")
    if not (0 < a.p_c < 1 and 0 < a.p_c_given_e < 1):
        raise SingularInput("odds are undefined at probabilities 0 and 1")
    odds_posterior = a.p_c_given_e / (1 - a.p_c_given_e)
    odds_prior = a.p_c / (1 - a.p_c)
    return MeasureResult(Measure.GOOD, math.log(odds_posterior / odds_prior))


def kemeny_oppenheim(a: EvidenceAssessment) -> MeasureResult:
    """( P(E|C) - P(E|notC) ) / ( P(E|C) + P(E|notC) ), bounded in [-1, 1]."""
    _require(a, "p_e_given_c", "p_e_given_not_c")
    total = a.p_e_given_c + a.p_e_given_not_c
    if total == 0:
        raise SingularInput("kemeny-oppenheim is undefined when both likelihoods are zero")
    return MeasureResult(Measure.KEMENY_OPPENHEIM, (a.p_e_given_c - a.p_e_given_not_c) / total)


def carnap(a: EvidenceAssessment) -> MeasureResult:
    """P(C and E) - P(C)P(E); depends on P(E), so it can be swayed by
    irrelevant evidence (flagged in the result note)."""
    _require(a, "p_c", "p_c_given_e", "p_e")
    value = a.p_c_given_e * a.p_e - a.p_c * a.p_e
    return MeasureResult(Measure.CARNAP, value, note="depends nontrivially on P(E)")


def shogenji(a: EvidenceAssessment) -> MeasureResult:
    """1 - log P(C|E) / log P(C): a justification measure (closed under
    conjunction of independent claims at any threshold)."""
    _require(a, "p_c", "p_c_given_e")
    if not (0 < a.p_c < 1) or not (0 < a.p_c_given_e < 1):
        raise SingularInput("shogenji needs prior and posterior strictly inside (0,1)")
    return MeasureResult(Measure.SHOGENJI, 1.0 - math.log(a.p_c_given_e) / math.log(a.p_c))


_MEASURE_FN = {
    Measure.KEYNES: keynes,
    Measure.EELLS: eells,
    Measure.L_KEYNES: l_keynes,
    Measure.L_EELLS: l_eells,
    Measure.GOOD: good,
    Measure.KEMENY_OPPENHEIM: kemeny_oppenheim,
    Measure.CARNAP: carnap,
    Measure.SHOGENJI: shogenji,
}


def compute(measure: Measure, a: EvidenceAssessment) -> MeasureResult:
    return _MEASURE_FN[measure](a)


def all_measures(a: EvidenceAssessment) -> list:
    """Every measure the supplied fields support, in enum order."""
    results = []
    for measure, fn in _MEASURE_FN.items():
        try:
            results.append(fn(a))
        except (InsufficientFields, SingularInput):
            continue
    return results


def diversity_boost(p_c_given_e1, p_c_given_e1e2, p_e2_given_e1, p_e2_given_c_e1) -> tuple:
    """Both sides of the chain-rule identity governing diverse evidence.

    lhs is the boost a second evidence item gives the posterior; rhs is how
    surprising that item is without the claim versus with it.  On any
    consistent joint they coincide, so rhs > 1 (surprising unless the claim
    holds) is exactly what buys confirmation.
    """
    if p_c_given_e1 <= 0 or p_e2_given_e1 <= 0:
        raise SingularInput("diversity boost needs positive conditioning probabilities")
    lhs = p_c_given_e1e2 / p_c_given_e1
    rhs = p_e2_given_c_e1 / p_e2_given_e1
    return lhs, rhs


@dataclass(frozen=True)
class ThresholdPolicy:
    """Acceptance policy: which measure to read and the inclusive threshold.

    No measure or threshold is canonical; the shipped default (keynes at
    ln 2, i.e. the posterior at least doubling the prior) is a documented
    example, not a recommendation.
    """

    measure: Measure = Measure.KEYNES
    threshold: float = math.log(2.0)


@dataclass(frozen=True)
class AcceptanceResult:
    accepted: bool
    policy: ThresholdPolicy
    results: tuple
    qualitative_fields: frozenset = field(default_factory=frozenset)

    def result_for(self, measure: Measure) -> Optional[MeasureResult]:
        for r in self.results:
            if r.measure == measure:
                return r
        return None


def accept_evidence(a: EvidenceAssessment, policy: ThresholdPolicy) -> AcceptanceResult:
    """Threshold the configured measure; inconsistent elicitations are refused
    so the assessor gets feedback instead of a silently wrong verdict."""
    errors = a.consistency_errors()
    if errors:
        raise InconsistentElicitation("; ".join(errors))
    results = all_measures(a)
    chosen = compute(policy.measure, a)
    accepted = chosen.defined and chosen.value >= policy.threshold
    if not chosen.defined and chosen.value == math.inf:
        accepted = True  # infinitely strong confirmation
    return AcceptanceResult(
        accepted=accepted,
        policy=policy,
        results=tuple(results),
        qualitative_fields=a.qualitative_fields,
    )
