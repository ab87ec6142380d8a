"""Bridge from confidence in nonfaultiness to failure probability and survival.

A system that is nonfaulty never suffers the critical failure under
consideration, so failure on a demand requires being faulty AND failing given
faulty.  Confidence in the top claim therefore caps the failure probability
and floors the long-run survival probability, independently of exposure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


@dataclass(frozen=True)
class ReliabilityScenario:
    p_conf_top: float        # confidence the system is nonfaulty
    p_fif: float             # probability of failure per demand, given faulty
    n: int = 0               # future demands of exposure
    r: int = 0               # previously observed failure-free demands
    demand_unit: str = "demand"

    def __post_init__(self):
        if not 0.0 <= self.p_conf_top <= 1.0:
            raise ValueError(f"p_conf_top must lie in [0,1], got {self.p_conf_top}")
        if not 0.0 <= self.p_fif <= 1.0:
            raise ValueError(f"p_fif must lie in [0,1], got {self.p_fif}")
        if self.n < 0 or self.r < 0:
            raise ValueError("exposure counts must be non-negative")


def pfd(s: ReliabilityScenario) -> float:
    """Probability of failure on a randomly selected demand."""
    return s.p_fif * (1.0 - s.p_conf_top)


def psrv(s: ReliabilityScenario) -> float:
    """Probability of surviving n independent demands without failure.

    Evaluated as c + (1-c) * exp(n * log1p(-p_fif)) so that extreme exposures
    (n up to 1e12 and beyond) neither underflow nor lose the floor at c.
    """
    if s.n == 0:
        return 1.0
    c = s.p_conf_top
    if s.p_fif == 0.0:
        return 1.0
    if s.p_fif == 1.0:
        return c
    return c + (1.0 - c) * math.exp(s.n * math.log1p(-s.p_fif))


class CbiStatus(str, Enum):
    SUPPORTED = "supported_by_cbi"
    NOT_SUPPORTED = "not_supported"


@dataclass(frozen=True)
class CbiGateResult:
    status: CbiStatus
    floor: float             # survival floor independent of n
    required_r: float        # strict lower bound on prior failure-free demands

    @property
    def supported(self) -> bool:
        return self.status == CbiStatus.SUPPORTED


def cbi_gate(s: ReliabilityScenario) -> CbiGateResult:
    """Sufficient condition for worst-case-prior Bayesian support.

    Survival stays well above the floor when confidence exceeds 0.9 and prior
    failure-free demands exceed a tenth of the future exposure (strictly).
    This encodes only the stated sufficient condition; it computes no
    posterior and fabricates no margin.
    """
    required = s.n / 10.0
    supported = s.p_conf_top > 0.9 and s.r > required
    return CbiGateResult(
        status=CbiStatus.SUPPORTED if supported else CbiStatus.NOT_SUPPORTED,
        floor=s.p_conf_top,
        required_r=required,
    )


@dataclass(frozen=True)
class BootstrapPeriod:
    period: int
    exposure: int
    prior_failure_free: int
    gate: CbiGateResult


@dataclass(frozen=True)
class BootstrapSchedule:
    periods: tuple
    first_failure: int = -1    # index of the first failing period, -1 if none

    @property
    def all_pass(self) -> bool:
        return self.first_failure < 0


def bootstrap_schedule(initial_r: int, exposures, p_conf_top: float) -> BootstrapSchedule:
    """Gate each operating period, accumulating failure-free experience.

    Each period's gate sees the experience gathered before it starts: the
    initial record plus all previously survived exposure.
    """
    r = int(initial_r)
    rows = []
    first_failure = -1
    for index, n_k in enumerate(exposures):
        n_k = int(n_k)
        if n_k <= 0:
            raise ValueError("per-period exposures must be positive")
        gate = cbi_gate(ReliabilityScenario(p_conf_top=p_conf_top, p_fif=0.0, n=n_k, r=r))
        rows.append(BootstrapPeriod(period=index + 1, exposure=n_k, prior_failure_free=r, gate=gate))
        if not gate.supported and first_failure < 0:
            first_failure = index
        r += n_k
    return BootstrapSchedule(periods=tuple(rows), first_failure=first_failure)


def survival_table(s: ReliabilityScenario, exposures) -> list:
    """(n, P_srv) rows for a sweep of exposures, e.g. for plotting."""
    rows = []
    for n in exposures:
        scenario = ReliabilityScenario(
            p_conf_top=s.p_conf_top, p_fif=s.p_fif, n=int(n), r=s.r, demand_unit=s.demand_unit
        )
        rows.append((int(n), psrv(scenario)))
    return rows


def logspace_exposures(n_max: int, points: int = 50) -> list:
    """Roughly log-spaced integer exposures from 1 to n_max, deduplicated."""
    if n_max < 1:
        return []
    if points < 2 or n_max == 1:
        return [1, n_max] if n_max > 1 else [1]
    out = []
    log_max = math.log10(n_max)
    for i in range(points):
        value = int(round(10 ** (log_max * i / (points - 1))))
        if not out or value > out[-1]:
            out.append(value)
    if out[-1] != n_max:
        out.append(n_max)
    return out
