"""Single runs, sweep families and analytic comparisons, with their file formats."""
from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .analytics import AnalyticParams, cost_dsdv, cost_fsr, cost_olsr, mean_std
from .config import PRESETS, PROTOCOLS, ConfigError, ScenarioConfig
from .network import AUDIT_COLUMNS, RunResult, run_network

WORKERS_ENV = "PMANET_WORKERS"
UNDEFINED = "NA"

RECORD_COLUMNS = (
    "protocol",
    "preset",
    "nodes",
    "rate",
    "seed",
    "throughput_bps",
    "avg_e2ed_s",
    "nrl",
    "delivered",
    "generated",
    "control_tx",
    "drops_noroute",
    "drops_ttl",
    "drops_queue",
    "drops_link",
)

AGGREGATE_METRICS = ("throughput_bps", "avg_e2ed_s", "nrl", "delivered", "control_tx")
AGGREGATE_COLUMNS = ("protocol", "preset", "nodes", "rate", "runs") + tuple(
    f"{m}_{s}" for m in AGGREGATE_METRICS for s in ("mean", "std")
)

COMPARE_COLUMNS = (
    "protocol",
    "preset",
    "nodes",
    "seed",
    "simulated",
    "predicted",
    "abs_deviation",
    "rel_deviation",
)

FAMILIES = {
    # family -> (swept key, default points, fixed overrides)
    "scalability": ("nodes", tuple(range(10, 101, 10)), {"traffic.packet_size": 512}),
    "traffic": ("traffic.rate", (2.0, 4.0, 8.0, 16.0, 32.0), {"nodes": 50, "traffic.packet_size": 64}),
}


class SweepError(RuntimeError):
    """A run inside a sweep failed; the message names the run."""


def fmt(value) -> str:
    """Stable text form for record fields."""
    if value is None:
        return UNDEFINED
    if isinstance(value, float):
        if math.isnan(value):
            return UNDEFINED
        return repr(value)
    return str(value)


# single runs


def run_scenario(config: ScenarioConfig, audit: bool = False) -> RunResult:
    config.validate()
    return run_network(config, audit=audit)


def record_of(result: RunResult) -> Dict[str, object]:
    cfg = result.config
    rep = result.report
    drops = rep.drops_by_cause
    return {
        "protocol": cfg.protocol,
        "preset": cfg.preset,
        "nodes": cfg.nodes,
        "rate": cfg.traffic.rate,
        "seed": cfg.seed,
        "throughput_bps": rep.throughput,
        "avg_e2ed_s": rep.avg_e2ed,
        "nrl": rep.nrl,
        "delivered": rep.delivered,
        "generated": rep.generated,
        "control_tx": rep.control_transmissions,
        "drops_noroute": drops.get("noroute", 0),
        "drops_ttl": drops.get("ttl", 0),
        "drops_queue": drops.get("queue", 0),
        "drops_link": drops.get("link", 0),
    }


def _table_text(columns: Sequence[str], rows: Iterable[Dict[str, object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(row[c]) for c in columns])
    return buf.getvalue()


def records_text(records: Iterable[Dict[str, object]]) -> str:
    return _table_text(RECORD_COLUMNS, records)


def audit_text(audit: Sequence[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(AUDIT_COLUMNS)
    for row in audit:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    """Write through a temporary sibling so a failed run leaves no partial file."""
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def metrics_from_audit(audit: Sequence[tuple], tau_nl: float) -> Dict[str, object]:
    """Recompute the headline metrics from an audit log alone."""
    delivered = 0
    delivered_bytes = 0
    delay_sum = 0.0
    generated = 0
    control = 0
    for t, event, node, label, size, peer, origin, seq, value in audit:
        if event == "deliver":
            delivered += 1
            delivered_bytes += size
            delay_sum += value
        elif event == "gen":
            generated += 1
        elif event == "send":
            control += 1
    return {
        "throughput_bps": delivered_bytes * 8 / tau_nl if tau_nl > 0 else 0.0,
        "avg_e2ed_s": delay_sum / delivered if delivered else None,
        "nrl": control / delivered if delivered else None,
        "delivered": delivered,
        "generated": generated,
        "control_tx": control,
    }


# sweeps


@dataclass
class SweepSpec:
    family: str
    points: Sequence[float] = ()
    seeds: Sequence[int] = (1,)
    protocols: Sequence[str] = PROTOCOLS
    presets: Sequence[str] = PRESETS
    base: Optional[ScenarioConfig] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"sweep family must be one of {tuple(FAMILIES)}, got {self.family!r}")
        if not self.points:
            self.points = FAMILIES[self.family][1]
        if self.base is None:
            self.base = family_base(self.family)
        if not self.seeds:
            raise ConfigError("sweep needs at least one seed")
        for p in self.protocols:
            if p not in PROTOCOLS:
                raise ConfigError(f"unknown protocol {p!r}")
        for p in self.presets:
            if p not in PRESETS:
                raise ConfigError(f"unknown preset {p!r}")

    def configs(self) -> List[ScenarioConfig]:
        """One validated config per run, in output order."""
        key = FAMILIES[self.family][0]
        base = self.base
        out = []
        for proto in self.protocols:
            for pre in self.presets:
                for point in self.points:
                    for seed in self.seeds:
                        cfg = base.with_values({"protocol": proto, "preset": pre, key: point, "seed": seed})
                        out.append(cfg.validate())
        return out


def family_base(family: str, config: Optional[ScenarioConfig] = None) -> ScenarioConfig:
    """Base scenario of a sweep family: the family's fixed values over ``config``."""
    return (config or ScenarioConfig()).with_values(FAMILIES[family][2])


def worker_count(default: Optional[int] = None) -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw is None or raw.strip() == "":
        return default or os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"{WORKERS_ENV} must be >= 1")
    return n


def _describe(cfg: ScenarioConfig) -> str:
    return f"protocol={cfg.protocol} preset={cfg.preset} nodes={cfg.nodes} rate={cfg.traffic.rate} seed={cfg.seed}"


def _run_record(cfg: ScenarioConfig) -> Dict[str, object]:
    try:
        return record_of(run_network(cfg))
    except Exception as exc:
        raise SweepError(f"run {_describe(cfg)} failed: {type(exc).__name__}: {exc}") from exc


def run_many(configs: Sequence[ScenarioConfig], workers: Optional[int] = None) -> List[Dict[str, object]]:
    """Records in the order of ``configs`` regardless of completion order."""
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(configs) <= 1:
        return [_run_record(c) for c in configs]
    with ProcessPoolExecutor(max_workers=min(workers, len(configs))) as pool:
        return list(pool.map(_run_record, configs))


def aggregate(records: Sequence[Dict[str, object]]) -> List[Dict[str, object]]:
    """Mean and sample std per (protocol, preset, nodes, rate), in first-seen order."""
    groups: Dict[Tuple, List[Dict[str, object]]] = {}
    for r in records:
        groups.setdefault((r["protocol"], r["preset"], r["nodes"], r["rate"]), []).append(r)
    rows = []
    for (proto, pre, nodes, rate), members in groups.items():
        row: Dict[str, object] = {"protocol": proto, "preset": pre, "nodes": nodes, "rate": rate, "runs": len(members)}
        for m in AGGREGATE_METRICS:
            mean, std = mean_std(float(r[m]) if r[m] is not None else None for r in members)
            row[f"{m}_mean"] = mean
            row[f"{m}_std"] = std
        rows.append(row)
    return rows


def aggregate_text(rows: Iterable[Dict[str, object]]) -> str:
    return _table_text(AGGREGATE_COLUMNS, rows)


def run_sweep(spec: SweepSpec, workers: Optional[int] = None):
    """(records, aggregate rows) for every protocol x preset x point x seed."""
    records = run_many(spec.configs(), workers)
    return records, aggregate(records)


# analytic comparison


def analytic_prediction(result: RunResult) -> float:
    """Closed-form control count for the run's protocol, fed with observed change counts.

    OLSR is compared on originations only (HELLO plus TC), so relayed TCs
    are left out of both sides.
    """
    cfg = result.config
    pc = cfg.protocol_config()
    ev = result.counters.events
    tau = cfg.sim_time
    if cfg.protocol == "dsdv":
        p = AnalyticParams(
            n=cfg.nodes, tau_nl=tau, tau_per=pc.periodic_interval, link_changes=ev.get("dsdv-active-break", 0)
        )
        return cost_dsdv(p)
    if cfg.protocol == "fsr":
        p = AnalyticParams(n=cfg.nodes, tau_nl=tau, tau_in=pc.inner_interval, tau_out=pc.outer_interval)
        return cost_fsr(p).emissions
    ticks = ev.get("olsr-tc-ticks", 0)
    census = ev.get("olsr-tc-census", 0)
    rounds = ticks / cfg.nodes if cfg.nodes else 0
    selected = census / rounds if rounds else 0.0
    p = AnalyticParams(
        n=cfg.nodes,
        tau_nl=tau,
        tau_hello=pc.hello_interval,
        tau_tc=pc.tc_interval,
        selected=selected,
        mpr_changes=ev.get("olsr-mpr-change", 0),
    )
    return cost_olsr(p)


def simulated_control(result: RunResult) -> int:
    """Control packets counted the same way as :func:`analytic_prediction`."""
    labels = result.counters.tx_by_label
    if result.audit is not None:
        labels = {}
        for row in result.audit:
            if row[1] == "send":
                labels[row[3]] = labels.get(row[3], 0) + 1
    if result.config.protocol == "olsr":
        return sum(v for k, v in labels.items() if k != "olsr-tc-forward")
    return sum(labels.values())


def emit_analytic_comparison(result: RunResult) -> Dict[str, object]:
    cfg = result.config
    sim = simulated_control(result)
    pred = analytic_prediction(result)
    dev = sim - pred
    return {
        "protocol": cfg.protocol,
        "preset": cfg.preset,
        "nodes": cfg.nodes,
        "seed": cfg.seed,
        "simulated": sim,
        "predicted": pred,
        "abs_deviation": abs(dev),
        "rel_deviation": abs(dev) / pred if pred else None,
    }


def comparison_text(rows: Iterable[Dict[str, object]]) -> str:
    return _table_text(COMPARE_COLUMNS, rows)
