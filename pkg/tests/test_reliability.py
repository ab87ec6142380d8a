"""Failure-probability and survival arithmetic against a high-precision oracle."""

import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casecalc.reliability import (
    CbiStatus,
    ReliabilityScenario,
    bootstrap_schedule,
    cbi_gate,
    logspace_exposures,
    pfd,
    psrv,
    survival_table,
)


def psrv_oracle(c, p, n, dps=60):
    """Arbitrary-precision evaluation of c + (1-c) * (1-p)^n."""
    with mpmath.workdps(dps):
        return float(mpmath.mpf(c) + (1 - mpmath.mpf(c)) * (1 - mpmath.mpf(p)) ** n)


class TestPfd:
    def test_zero_confidence_regime(self):
        # no credit for assurance: failure probability is all in the testing bound
        assert pfd(ReliabilityScenario(p_conf_top=0.0, p_fif=1e-3)) == pytest.approx(1e-3)

    def test_confidence_buys_a_weaker_testing_bound(self):
        assert pfd(ReliabilityScenario(p_conf_top=0.9, p_fif=1e-2)) == pytest.approx(1e-3)

    def test_nonfaulty_systems_never_fail(self):
        assert pfd(ReliabilityScenario(p_conf_top=1.0, p_fif=0.5)) == 0.0


class TestPsrv:
    def test_certain_failure_if_faulty_hits_floor_immediately(self):
        s = ReliabilityScenario(p_conf_top=0.8, p_fif=1.0, n=1)
        assert psrv(s) == pytest.approx(0.8)

    def test_no_exposure_means_certain_survival(self):
        assert psrv(ReliabilityScenario(p_conf_top=0.2, p_fif=0.9, n=0)) == 1.0

    def test_reference_point(self):
        s = ReliabilityScenario(p_conf_top=0.9, p_fif=1e-4, n=10**4)
        assert psrv(s) == pytest.approx(psrv_oracle(0.9, 1e-4, 10**4), abs=1e-6)
        assert psrv(s) == pytest.approx(0.9368, abs=5e-5)

    def test_monotone_decreasing_to_the_floor(self):
        s_small = ReliabilityScenario(p_conf_top=0.7, p_fif=1e-3, n=10)
        s_large = ReliabilityScenario(p_conf_top=0.7, p_fif=1e-3, n=10**7)
        assert psrv(s_small) >= psrv(s_large) >= 0.7

    def test_extreme_exposure_is_stable(self):
        s = ReliabilityScenario(p_conf_top=0.9, p_fif=1e-12, n=10**12)
        oracle = psrv_oracle(0.9, 1e-12, 10**12)
        assert psrv(s) == pytest.approx(oracle, rel=1e-6)

    @settings(max_examples=150, deadline=None)
    @given(
        c=st.floats(0.0, 1.0),
        p=st.floats(1e-12, 1.0),
        n=st.integers(0, 10**12),
    )
    def test_floor_and_oracle_agreement(self, c, p, n):
        s = ReliabilityScenario(p_conf_top=c, p_fif=p, n=n)
        value = psrv(s)
        assert value >= c - 1e-12
        assert value == pytest.approx(psrv_oracle(c, p, n), rel=1e-6, abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(c=st.floats(0.0, 1.0), p=st.floats(0.0, 1.0))
    def test_consistent_with_pfd_at_one_demand(self, c, p):
        s = ReliabilityScenario(p_conf_top=c, p_fif=p, n=1)
        assert 1.0 - psrv(s) == pytest.approx(pfd(s), abs=1e-12)

    def test_monotone_in_parameters(self):
        base = ReliabilityScenario(p_conf_top=0.8, p_fif=1e-3, n=10**4)
        more_conf = ReliabilityScenario(p_conf_top=0.9, p_fif=1e-3, n=10**4)
        worse_fif = ReliabilityScenario(p_conf_top=0.8, p_fif=2e-3, n=10**4)
        assert psrv(more_conf) >= psrv(base)
        assert psrv(worse_fif) <= psrv(base)


class TestCbiGate:
    def test_supported(self):
        s = ReliabilityScenario(p_conf_top=0.91, p_fif=0.0, n=100, r=11)
        assert cbi_gate(s).status == CbiStatus.SUPPORTED

    def test_certification_exposure_dwarfs_flight_test(self):
        s = ReliabilityScenario(p_conf_top=0.91, p_fif=0.0, n=10**8, r=10**3)
        assert cbi_gate(s).status == CbiStatus.NOT_SUPPORTED

    def test_boundary_is_strict(self):
        at = ReliabilityScenario(p_conf_top=0.95, p_fif=0.0, n=100, r=10)
        above = ReliabilityScenario(p_conf_top=0.95, p_fif=0.0, n=100, r=11)
        assert cbi_gate(at).status == CbiStatus.NOT_SUPPORTED
        assert cbi_gate(above).status == CbiStatus.SUPPORTED

    def test_confidence_boundary_is_strict(self):
        s = ReliabilityScenario(p_conf_top=0.9, p_fif=0.0, n=10, r=100)
        assert cbi_gate(s).status == CbiStatus.NOT_SUPPORTED

    def test_gate_reports_floor_without_margin(self):
        gate = cbi_gate(ReliabilityScenario(p_conf_top=0.93, p_fif=0.0, n=100, r=20))
        assert gate.floor == 0.93


class TestBootstrap:
    def test_accumulating_experience(self):
        schedule = bootstrap_schedule(1000, [5000, 20000, 80000], 0.95)
        assert [row.prior_failure_free for row in schedule.periods] == [1000, 6000, 26000]
        assert all(row.gate.supported for row in schedule.periods)
        assert schedule.all_pass

    def test_first_gate_fails_when_exposure_too_large(self):
        schedule = bootstrap_schedule(100, [2000, 100], 0.95)
        assert schedule.first_failure == 0
        assert not schedule.periods[0].gate.supported

    def test_empty_schedule(self):
        schedule = bootstrap_schedule(100, [], 0.95)
        assert schedule.periods == ()
        assert schedule.all_pass


class TestSweeps:
    def test_survival_table_matches_pointwise(self):
        s = ReliabilityScenario(p_conf_top=0.9, p_fif=1e-4)
        rows = survival_table(s, [1, 10, 100])
        for n, value in rows:
            assert value == pytest.approx(psrv_oracle(0.9, 1e-4, n), rel=1e-9)

    def test_logspace_exposures_cover_endpoints(self):
        exposures = logspace_exposures(10**6, 20)
        assert exposures[0] == 1
        assert exposures[-1] == 10**6
        assert exposures == sorted(set(exposures))
