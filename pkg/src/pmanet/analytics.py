"""Run metrics and closed-form control-overhead models.

Sums over node sets in the overhead models are read as cardinalities: one
packet per member per interval. Integrals of change indicators over the run
are read as counts of change events.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional

UNDEFINED = None  # NRL marker when nothing was delivered


@dataclass
class MetricsReport:
    throughput: float
    avg_e2ed: Optional[float]
    nrl: Optional[float]
    delivered: int
    generated: int
    control_transmissions: int
    drops_by_cause: Dict[str, int] = field(default_factory=dict)
    delivered_bytes: int = 0


def compute_metrics(
    delivered: int,
    delivered_bytes: int,
    delay_sum: float,
    generated: int,
    control_transmissions: int,
    tau_nl: float,
    drops_by_cause: Optional[Mapping[str, int]] = None,
) -> MetricsReport:
    """Throughput (b/s over the whole run), mean end-to-end delay and NRL.

    NRL and delay are ``None`` when no packet was delivered.
    """
    if delivered < 0 or generated < 0:
        raise ValueError("counters must be non-negative")
    throughput = delivered_bytes * 8 / tau_nl if tau_nl > 0 else 0.0
    avg = delay_sum / delivered if delivered else None
    nrl = control_transmissions / delivered if delivered else UNDEFINED
    return MetricsReport(
        throughput=throughput,
        avg_e2ed=avg,
        nrl=nrl,
        delivered=delivered,
        generated=generated,
        control_transmissions=control_transmissions,
        drops_by_cause=dict(drops_by_cause or {}),
        delivered_bytes=delivered_bytes,
    )


@dataclass
class CostReport:
    packet_cost: float
    time_cost: float

    @property
    def combined(self) -> float:
        return self.packet_cost * self.time_cost


def cost_report(report: MetricsReport) -> CostReport:
    """Packet cost is the control transmission count, time cost the mean delay."""
    return CostReport(float(report.control_transmissions), report.avg_e2ed or 0.0)


@dataclass
class AnalyticParams:
    n: float = 0
    tau_nl: float = 0.0
    tau_per: float = 15.0
    link_changes: float = 0
    tau_in: float = 5.0
    tau_out: float = 20.0
    n_in: float = 0.0
    n_out: float = 0.0
    tau_hello: float = 2.0
    tau_tc: float = 5.0
    mpr_changes: float = 0
    selected: float = 0
    avg_nbr: float = 0.0
    avg_mpr: float = 0.0
    alpha: float = 0.0
    alpha_in: float = 0.0
    alpha_out: float = 0.0

    def __post_init__(self):
        for name, value in vars(self).items():
            if value < 0:
                raise ValueError(f"{name} must be non-negative")


def _positive(**values: float) -> None:
    for name, v in values.items():
        if not v > 0:
            raise ValueError(f"{name} must be > 0")


def dsdv_periodic(p: AnalyticParams) -> float:
    _positive(tau_per=p.tau_per)
    return p.tau_nl / p.tau_per * p.n


def dsdv_trigger(p: AnalyticParams) -> float:
    return p.link_changes * p.n


def cost_dsdv(p: AnalyticParams) -> float:
    """Periodic plus triggered DSDV control packets."""
    return dsdv_periodic(p) + dsdv_trigger(p)


@dataclass(frozen=True)
class FsrCost:
    emissions: float  # one packet per node per interval
    entry_weighted: float  # proportional to entries carried


def cost_fsr(p: AnalyticParams) -> FsrCost:
    """FSR periodic cost for ``p.n`` emitting nodes.

    ``n_in``/``n_out`` are average per-node scope sizes.
    """
    _positive(tau_in=p.tau_in, tau_out=p.tau_out)
    emissions = p.n * p.tau_nl * (1.0 / p.tau_in + 1.0 / p.tau_out)
    weighted = p.tau_nl * (p.n * p.n_in / p.tau_in + p.n * p.n_out / p.tau_out)
    return FsrCost(emissions, weighted)


def olsr_hello(p: AnalyticParams) -> float:
    _positive(tau_hello=p.tau_hello)
    return p.tau_nl / p.tau_hello * p.n


def olsr_tc_default(p: AnalyticParams) -> float:
    """Periodic TC originations by the ``p.selected`` nodes that have MPR selectors."""
    _positive(tau_tc=p.tau_tc)
    return p.tau_nl / p.tau_tc * p.selected


def olsr_tc_trigger(p: AnalyticParams) -> float:
    return float(p.mpr_changes)


def cost_olsr(p: AnalyticParams) -> float:
    return olsr_hello(p) + olsr_tc_trigger(p) + olsr_tc_default(p)


def util_model(protocol: str, p: AnalyticParams) -> float:
    """Expected control packets from advertisement rates."""
    if protocol == "dsdv":
        return p.n * p.tau_nl * p.alpha
    if protocol == "fsr":
        return p.n_in * p.tau_nl * p.alpha_in + p.n_out * p.tau_nl * p.alpha_out
    raise ValueError(f"no utilisation model for {protocol!r}")


@dataclass(frozen=True)
class MprUtilizationParams:
    b_available: float
    b_requested: float
    e_available: float
    e_transmit: float
    delay: float

    def __post_init__(self):
        for name in ("b_available", "b_requested", "e_available", "e_transmit", "delay"):
            v = getattr(self, name)
            if not v > 0 or math.isinf(v):
                raise ValueError(f"{name} must be a finite positive number, got {v}")


def mpr_utilization(q: MprUtilizationParams) -> float:
    """Bandwidth factor times energy factor, per second of relay delay."""
    bandwidth_factor = q.b_available / q.b_requested
    energy_factor = q.e_available / q.e_transmit
    return bandwidth_factor * energy_factor / q.delay


def mean_std(values: Iterable[float]):
    """Mean and sample standard deviation (``None`` for fewer than two values)."""
    vals = [v for v in values if v is not None]
    if not vals:
        return None, None
    mean = math.fsum(vals) / len(vals)
    if len(vals) < 2:
        return mean, None
    var = math.fsum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
    return mean, math.sqrt(var)
