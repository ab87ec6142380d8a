"""Confirmation measures: frozen values, identities, and the classic scenarios.

Expected values for the non-trivial scenarios are computed by exact
rational-arithmetic oracles (fractions.Fraction) inside this module, then the
float implementation is checked against them.
"""

import itertools
import json
import math
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casecalc.confirmation import (
    EvidenceAssessment,
    Measure,
    Qual,
    ThresholdPolicy,
    accept_evidence,
    all_measures,
    carnap,
    compute,
    diversity_boost,
    eells,
    good,
    kemeny_oppenheim,
    keynes,
    l_eells,
    l_keynes,
    shogenji,
)
from casecalc.errors import InconsistentElicitation, InsufficientFields, SingularInput

FIXTURES = Path(__file__).parent / "fixtures"


# --- oracles -----------------------------------------------------------------


def joint_assessment(p_ce, p_c_not_e, p_not_c_e, p_not_c_not_e):
    """Exact-rational joint over (C, E) -> fully consistent assessment."""
    return EvidenceAssessment.from_joint(
        Fraction(p_ce), Fraction(p_c_not_e), Fraction(p_not_c_e), Fraction(p_not_c_not_e)
    )


def raven_two_world_oracle():
    """Two equiprobable worlds; evidence = a uniformly drawn bird is a black raven.

    World one: 100 black ravens, no non-black ravens, 1,000,000 other birds.
    World two: 1000 black ravens, 1 white raven, 1,000,000 other birds.
    The claim 'all ravens are black' holds exactly in world one.
    """
    p_e_w1 = Fraction(100, 1_000_100)
    p_e_w2 = Fraction(1000, 1_001_001)
    prior = Fraction(1, 2)
    p_e = prior * p_e_w1 + prior * p_e_w2
    posterior = prior * p_e_w1 / p_e
    return {
        "p_c": prior,
        "p_c_given_e": posterior,
        "p_e": p_e,
        "p_e_given_c": p_e_w1,
        "p_e_given_not_c": p_e_w2,
    }


def random_consistent_assessment(rng):
    cells = [rng.random() + 1e-3 for _ in range(4)]
    total = sum(cells)
    cells = [Fraction(c / total).limit_denominator(10**6) for c in cells]
    cells[3] = 1 - cells[0] - cells[1] - cells[2]
    return EvidenceAssessment.from_joint(*cells)


# --- direct evaluations ----------------------------------------------------------


class TestKeynes:
    def test_irrelevance_is_zero(self):
        assert keynes(EvidenceAssessment(p_c=0.5, p_c_given_e=0.5)).value == 0.0

    def test_doubled_posterior(self):
        result = keynes(EvidenceAssessment(p_c=0.25, p_c_given_e=0.5))
        assert result.value == pytest.approx(math.log(2), abs=1e-15)

    def test_zero_prior_is_singular(self):
        with pytest.raises(SingularInput):
            keynes(EvidenceAssessment(p_c=0.0, p_c_given_e=0.5))

    def test_zero_posterior_reports_undefined(self):
        result = keynes(EvidenceAssessment(p_c=0.5, p_c_given_e=0.0))
        assert not result.defined and result.value == -math.inf


class TestEells:
    def test_irrelevance(self):
        assert eells(EvidenceAssessment(p_c=0.5, p_c_given_e=0.5)).value == 0.0

    def test_arithmetic(self):
        assert eells(EvidenceAssessment(p_c=0.3, p_c_given_e=0.9)).value == pytest.approx(0.6)

    def test_raven_case_is_negative(self):
        oracle = raven_two_world_oracle()
        a = EvidenceAssessment(p_c=float(oracle["p_c"]), p_c_given_e=float(oracle["p_c_given_e"]))
        assert eells(a).value < 0


class TestLikelihoodVariants:
    def test_l_keynes_equals_keynes_on_consistent_assessment(self):
        a = joint_assessment(Fraction(1, 5), Fraction(1, 20), Fraction(1, 5), Fraction(11, 20))
        assert l_keynes(a).value == pytest.approx(keynes(a).value, abs=1e-12)

    def test_fixed_consistent_example(self):
        # p_c = 0.25, p_c_given_e = 0.5, p_e = 0.4, p_e_given_c = 0.8
        a = joint_assessment(Fraction(1, 5), Fraction(1, 20), Fraction(1, 5), Fraction(11, 20))
        assert a.p_c == pytest.approx(0.25)
        assert a.p_c_given_e == pytest.approx(0.5)
        assert a.p_e == pytest.approx(0.4)
        assert a.p_e_given_c == pytest.approx(0.8)
        assert l_keynes(a).value == pytest.approx(math.log(2), abs=1e-12)

    def test_irrelevant_evidence(self):
        a = EvidenceAssessment(p_e=0.4, p_e_given_c=0.4)
        assert l_keynes(a).value == 0.0
        assert l_eells(a).value == 0.0

    def test_zero_evidence_probability_singular(self):
        with pytest.raises(SingularInput):
            l_keynes(EvidenceAssessment(p_e=0.0, p_e_given_c=0.5))

    def test_carnap_equals_l_eells_times_prior(self):
        a = joint_assessment(Fraction(1, 5), Fraction(1, 20), Fraction(1, 5), Fraction(11, 20))
        assert carnap(a).value == pytest.approx(l_eells(a).value * a.p_c, abs=1e-12)
        assert carnap(a).value == pytest.approx(0.1, abs=1e-12)


class TestGood:
    def test_non_discriminating_evidence(self):
        assert good(EvidenceAssessment(p_e_given_c=0.3, p_e_given_not_c=0.3)).value == 0.0

    def test_posterior_odds_form(self):
        result = good(EvidenceAssessment(p_c=0.5, p_c_given_e=0.8))
        assert result.value == pytest.approx(math.log(4), abs=1e-12)

    def test_certain_posterior_is_singular(self):
        with pytest.raises(SingularInput):
            good(EvidenceAssessment(p_c=0.5, p_c_given_e=1.0))

    def test_both_forms_agree_on_consistent_assessment(self):
        a = joint_assessment(Fraction(1, 5), Fraction(1, 20), Fraction(1, 5), Fraction(11, 20))
        likelihood_form = good(a)
        odds_form = good(EvidenceAssessment(p_c=a.p_c, p_c_given_e=a.p_c_given_e))
        assert likelihood_form.value == pytest.approx(odds_form.value, abs=1e-9)


class TestKemenyOppenheim:
    def test_irrelevance(self):
        assert kemeny_oppenheim(EvidenceAssessment(p_e_given_c=0.4, p_e_given_not_c=0.4)).value == 0.0

    def test_arithmetic(self):
        result = kemeny_oppenheim(EvidenceAssessment(p_e_given_c=0.9, p_e_given_not_c=0.1))
        assert result.value == pytest.approx(0.8)

    def test_both_zero_singular(self):
        with pytest.raises(SingularInput):
            kemeny_oppenheim(EvidenceAssessment(p_e_given_c=0.0, p_e_given_not_c=0.0))

    @settings(max_examples=80, deadline=None)
    @given(st.floats(0.01, 0.99), st.floats(0.01, 0.99))
    def test_sign_always_agrees_with_good(self, pec, penc):
        a = EvidenceAssessment(p_e_given_c=pec, p_e_given_not_c=penc)
        assert kemeny_oppenheim(a).sign == good(a).sign


class TestCarnap:
    def test_independence_gives_zero(self):
        a = EvidenceAssessment(p_c=0.3, p_c_given_e=0.3, p_e=0.4)
        assert carnap(a).value == pytest.approx(0.0, abs=1e-15)

    def test_missing_p_e(self):
        with pytest.raises(InsufficientFields):
            carnap(EvidenceAssessment(p_c=0.3, p_c_given_e=0.5))

    def test_flagged_as_p_e_dependent(self):
        a = EvidenceAssessment(p_c=0.25, p_c_given_e=0.5, p_e=0.4)
        assert "P(E)" in carnap(a).note


class TestShogenji:
    def test_irrelevance(self):
        assert shogenji(EvidenceAssessment(p_c=0.25, p_c_given_e=0.25)).value == 0.0

    def test_direct_value(self):
        result = shogenji(EvidenceAssessment(p_c=0.25, p_c_given_e=0.5))
        assert result.value == pytest.approx(0.5, abs=1e-15)

    def test_endpoints_singular(self):
        with pytest.raises(SingularInput):
            shogenji(EvidenceAssessment(p_c=0.25, p_c_given_e=1.0))


# --- scenario suites --------------------------------------------------------------


class TestRavenScenario:
    def test_oracle_posterior(self):
        oracle = raven_two_world_oracle()
        assert float(oracle["p_c_given_e"]) == pytest.approx(0.0910, abs=5e-5)

    def test_every_measure_disconfirms(self):
        oracle = raven_two_world_oracle()
        a = EvidenceAssessment(
            p_c=float(oracle["p_c"]),
            p_c_given_e=float(oracle["p_c_given_e"]),
            p_e=float(oracle["p_e"]),
            p_e_given_c=float(oracle["p_e_given_c"]),
            p_e_given_not_c=float(oracle["p_e_given_not_c"]),
        )
        results = all_measures(a)
        assert {r.measure for r in results} == set(Measure)
        for result in results:
            assert result.value < 0, result.measure


class TestLindaScenario:
    """Evidence irrelevant to the base claim but supporting the added conjunct
    confirms the conjunction more, even though the conjunction is less probable."""

    def build(self):
        # joint over (B, F, E): B independent of (F, E); F raised by E
        p_b = Fraction(1, 20)
        p_f = Fraction(3, 10)
        p_f_given_e = Fraction(9, 10)
        p_e = Fraction(1, 5)
        p_f_given_not_e = (p_f - p_e * p_f_given_e) / (1 - p_e)
        assert 0 <= p_f_given_not_e <= 1
        c1 = EvidenceAssessment(p_c=float(p_b), p_c_given_e=float(p_b), p_e=float(p_e),
                                p_e_given_c=float(p_e))
        p_c2 = p_b * p_f
        p_c2_given_e = p_b * p_f_given_e
        p_e_given_c2 = p_c2_given_e * p_e / p_c2
        c2 = EvidenceAssessment(p_c=float(p_c2), p_c_given_e=float(p_c2_given_e),
                                p_e=float(p_e), p_e_given_c=float(p_e_given_c2))
        return c1, c2

    def test_conjunction_less_probable_but_more_confirmed(self):
        c1, c2 = self.build()
        assert c2.p_c_given_e <= c1.p_c_given_e
        for measure in (Measure.KEYNES, Measure.EELLS, Measure.L_KEYNES,
                        Measure.L_EELLS, Measure.GOOD, Measure.SHOGENJI, Measure.CARNAP):
            first = compute(measure, c1).value
            second = compute(measure, c2).value
            assert second > first, measure


class TestDiversityBoost:
    def test_conditionally_independent_second_item_gives_no_boost(self):
        lhs, rhs = diversity_boost(0.6, 0.6, 0.5, 0.5)
        assert rhs == 1.0 and lhs == 1.0

    def test_identity_on_exhaustive_rational_joints(self):
        """lhs = rhs on every consistent three-variable joint distribution."""
        weights = [Fraction(1, 4), Fraction(1, 2), Fraction(1, 1), Fraction(2, 1)]
        checked = 0
        for combo in itertools.product(weights, repeat=8):
            total = sum(combo)
            cells = {
                bits: combo[i] / total
                for i, bits in enumerate(itertools.product((0, 1), repeat=3))
            }  # bits = (c, e1, e2)
            p_e1 = sum(v for (c, e1, e2), v in cells.items() if e1)
            p_e1e2 = sum(v for (c, e1, e2), v in cells.items() if e1 and e2)
            p_ce1 = sum(v for (c, e1, e2), v in cells.items() if c and e1)
            p_ce1e2 = sum(v for (c, e1, e2), v in cells.items() if c and e1 and e2)
            if 0 in (p_e1, p_e1e2, p_ce1):
                continue
            lhs_exact = (p_ce1e2 / p_e1e2) / (p_ce1 / p_e1)
            rhs_exact = (p_ce1e2 / p_ce1) / (p_e1e2 / p_e1)
            assert lhs_exact == rhs_exact
            lhs, rhs = diversity_boost(
                float(p_ce1 / p_e1), float(p_ce1e2 / p_e1e2),
                float(p_e1e2 / p_e1), float(p_ce1e2 / p_ce1),
            )
            assert lhs == pytest.approx(rhs, abs=1e-12)
            checked += 1
            if checked >= 400:
                return

    def test_surprising_but_expected_given_claim_boosts(self):
        # second item unlikely on its own (0.2) yet likely when the claim holds (0.9)
        lhs, rhs = diversity_boost(0.5, 0.5 * 0.9 / 0.2, 0.2, 0.9)
        assert rhs > 1.0 and lhs == pytest.approx(rhs)


class TestConditionFour:
    """Conjunction-threshold closure over independent claim pairs."""

    @staticmethod
    def independent_pairs():
        """All small rational joints with C1, C2 unconditionally independent
        and conditionally independent given E."""
        grid = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)]
        for e, a1, b1, a0, b0 in itertools.product(grid, repeat=5):
            p1 = e * a1 + (1 - e) * a0
            p2 = e * b1 + (1 - e) * b0
            c0 = (p1 * p2 - e * a1 * b1) / (1 - e)
            if not (max(Fraction(0), a0 + b0 - 1) <= c0 <= min(a0, b0)):
                continue
            p12 = e * a1 * b1 + (1 - e) * c0
            post12 = a1 * b1
            if not all(0 < x < 1 for x in (p1, p2, p12, a1, b1, post12)):
                continue
            yield (p1, a1), (p2, b1), (p12, post12)

    def test_shogenji_closure_exhaustive(self):
        count = 0
        for (p1, q1), (p2, q2), (p12, q12) in self.independent_pairs():
            s1 = shogenji(EvidenceAssessment(p_c=float(p1), p_c_given_e=float(q1))).value
            s2 = shogenji(EvidenceAssessment(p_c=float(p2), p_c_given_e=float(q2))).value
            s12 = shogenji(EvidenceAssessment(p_c=float(p12), p_c_given_e=float(q12))).value
            lo, hi = min(s1, s2), max(s1, s2)
            assert lo - 1e-9 <= s12 <= hi + 1e-9, (s1, s2, s12)
            count += 1
        assert count > 50  # the enumeration genuinely exercised the space

    def test_keynes_violates_condition_four_committed_counterexample(self):
        """Both claims beat the threshold -0.5 but their conjunction does not.

        Frozen joint: P(E)=1/2, posteriors 1/3 each (conditionally independent
        given E), priors 1/2 each, conjunction prior 1/4 and posterior 1/9;
        independence was verified exactly during construction.
        """
        e, a1, b1, a0, b0 = (Fraction(1, 2), Fraction(1, 3), Fraction(1, 3),
                             Fraction(2, 3), Fraction(2, 3))
        p1 = e * a1 + (1 - e) * a0
        p2 = e * b1 + (1 - e) * b0
        c0 = (p1 * p2 - e * a1 * b1) / (1 - e)
        assert max(Fraction(0), a0 + b0 - 1) <= c0 <= min(a0, b0)
        p12 = e * a1 * b1 + (1 - e) * c0
        assert p12 == p1 * p2  # unconditional independence, exactly

        threshold = -0.5
        k1 = keynes(EvidenceAssessment(p_c=float(p1), p_c_given_e=float(a1))).value
        k2 = keynes(EvidenceAssessment(p_c=float(p2), p_c_given_e=float(b1))).value
        k12 = keynes(EvidenceAssessment(p_c=float(p12), p_c_given_e=float(a1 * b1))).value
        assert k1 > threshold and k2 > threshold
        assert k12 < threshold


class TestOrdinalReversal:
    def test_committed_witness(self):
        witness = json.loads((FIXTURES / "ordinal_reversal.json").read_text())
        a = EvidenceAssessment(**witness["a"])
        b = EvidenceAssessment(**witness["b"])
        assert keynes(a).value > keynes(b).value
        assert eells(a).value < eells(b).value


# --- invariants across measures ------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(st.randoms(use_true_random=False))
def test_sign_trichotomy_on_consistent_assessments(rng):
    a = random_consistent_assessment(rng)
    signs = {r.measure: r.sign for r in all_measures(a)}
    assert len(signs) >= 6
    assert len(set(signs.values())) == 1, signs


@settings(max_examples=120, deadline=None)
@given(
    st.floats(0.05, 0.9),
    st.floats(0.05, 0.9),
    st.floats(1e-4, 0.05),
)
def test_condition_two_and_three_monotonicity(p_c, p_ce, delta):
    """Measures expressible in (prior, posterior) rise with the posterior and
    fall with the prior (finite differences over the interior)."""
    for measure in (Measure.KEYNES, Measure.EELLS, Measure.GOOD, Measure.SHOGENJI):
        base = compute(measure, EvidenceAssessment(p_c=p_c, p_c_given_e=p_ce)).value
        up = compute(measure, EvidenceAssessment(p_c=p_c, p_c_given_e=p_ce + delta)).value
        assert up > base, measure
        worse = compute(measure, EvidenceAssessment(p_c=p_c + delta, p_c_given_e=p_ce)).value
        assert worse < base, measure


# --- elicitation handling -------------------------------------------------------------


class TestAssessments:
    def test_qualitative_mapping(self):
        a = EvidenceAssessment(p_c=Qual.LOW, p_c_given_e=Qual.HIGH)
        assert (a.p_c, a.p_c_given_e) == (0.1, 0.9)
        assert a.qualitative_fields == {"p_c", "p_c_given_e"}
        assert a.epsilon == 0.05

    def test_exact_epsilon_default(self):
        assert EvidenceAssessment(p_c=0.2, p_c_given_e=0.4).epsilon == 1e-9

    def test_out_of_range_rejected(self):
        with pytest.raises(InsufficientFields):
            EvidenceAssessment(p_c=1.2)

    def test_bayes_consistency_detected(self):
        a = EvidenceAssessment(p_c=0.25, p_c_given_e=0.9, p_e=0.4, p_e_given_c=0.8)
        assert a.consistency_errors()

    def test_total_probability_detected(self):
        a = EvidenceAssessment(p_c=0.5, p_e=0.9, p_e_given_c=0.2, p_e_given_not_c=0.2)
        assert a.consistency_errors()


class TestAcceptance:
    def test_boundary_is_inclusive(self):
        policy = ThresholdPolicy(Measure.KEYNES, math.log(2))
        a = EvidenceAssessment(p_c=0.25, p_c_given_e=0.5)
        assert accept_evidence(a, policy).accepted

    def test_irrelevant_evidence_rejected_under_positive_threshold(self):
        policy = ThresholdPolicy(Measure.KEYNES, 1e-6)
        a = EvidenceAssessment(p_c=0.5, p_c_given_e=0.5)
        assert not accept_evidence(a, policy).accepted

    def test_inconsistent_elicitation_refused(self):
        a = EvidenceAssessment(p_c=0.25, p_c_given_e=0.9, p_e=0.4, p_e_given_c=0.8)
        with pytest.raises(InconsistentElicitation):
            accept_evidence(a, ThresholdPolicy())

    def test_provenance_keeps_all_measures(self):
        a = joint_assessment(Fraction(1, 5), Fraction(1, 20), Fraction(1, 5), Fraction(11, 20))
        result = accept_evidence(a, ThresholdPolicy())
        assert {r.measure for r in result.results} == set(Measure)
