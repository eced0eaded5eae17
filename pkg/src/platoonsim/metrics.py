"""Post-run summarization: delays, percentiles, delivery ratio, CSV.

Works off the event log alone (plus the run's configuration for the
warmup boundary and provenance fields), so a summary can be recomputed
from a written log file and must agree with the live run.

Warmup handling: packets *generated* before the warmup boundary are
excluded from every statistic, whenever they complete.  The delivery
ratio is completed over generated (measured stream, post-warmup);
packets still in flight when the run ends (the drain grace period
expired on them) count against it and are also reported separately.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

from .events import EventLog

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3


def fnv1a_64(data: bytes | str) -> int:
    """FNV-1a 64-bit hash; stable across platforms and Python versions."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    h = FNV64_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV64_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def config_digest(canonical_text: bytes | str) -> str:
    """16-hex-digit digest of a canonical configuration rendering."""
    return f"{fnv1a_64(canonical_text):016x}"


def e2e_delay_ms(packet, tail=None) -> float:
    """End-to-end delay of a completed packet, in milliseconds.

    Raises:
        ValueError: If the packet has no hops beyond its origin, or if
            ``tail`` is given and the last hop is not ``tail``.
    """
    trace = packet.hop_trace
    if len(trace) < 2:
        raise ValueError(
            f"packet {packet.seq} has not completed (no hops recorded)"
        )
    last_vehicle, last_ms = trace[-1]
    if tail is not None and last_vehicle != tail:
        raise ValueError(
            f"packet {packet.seq} ended at {last_vehicle}, expected {tail}"
        )
    return last_ms - packet.gen_time_ms


def percentile(values: list[float], p: float) -> float:
    """Nearest-rank percentile (no interpolation).

    ``percentile(v, 50)`` of ``[10, 20, 30]`` is 20; of ``[10, 20]`` it
    is 10 (rank ceil(0.5 * 2) = 1).

    Raises:
        ValueError: On an empty list or ``p`` outside (0, 100].
    """
    if not values:
        raise ValueError("percentile of an empty list")
    if not 0.0 < p <= 100.0:
        raise ValueError(f"percentile p must be in (0, 100], got {p}")
    ordered = sorted(values)
    rank = math.ceil(p / 100.0 * len(ordered))
    return ordered[rank - 1]


@dataclass(frozen=True)
class RunSummary:
    """Post-warmup statistics of one run (one architecture, one seed)."""

    arch: str
    seed: int
    samples: int
    mean_ms: float | None
    p50_ms: float | None
    p95_ms: float | None
    p99_ms: float | None
    pdr: float | None
    generated: int
    completed: int
    lost: int
    inflight: int
    config_hash: str
    per_edge_mean_ms: dict[str, float] = field(default_factory=dict)


def recount_from_events(log: EventLog) -> dict[str, int]:
    """Packet-conservation recount over the whole log (no warmup filter):
    every generated measured packet is completed, lost, or in flight."""
    generated = completed = lost = 0
    for ev in log.events:
        kind = ev[0]
        if kind == "gen":
            generated += 1
        elif kind == "e2e":
            completed += 1
        elif kind == "lost":
            lost += 1
    return {
        "generated": generated,
        "completed": completed,
        "lost": lost,
        "inflight": generated - completed - lost,
    }


def summarize(log: EventLog, config) -> RunSummary:
    """Summarize a run from its event log.

    ``config`` supplies the warmup boundary, TTI duration, architecture,
    seed and configuration digest (an ``EngineConfig`` or anything with
    those attributes).
    """
    warmup_ms = config.warmup_s * 1000.0
    tti_ms = config.tti_ms
    measured: set[int] = set()
    delays: list[float] = []
    lost = 0
    edge_sums: dict[str, float] = {}
    edge_counts: dict[str, int] = {}
    for ev in log.events:
        kind = ev[0]
        if kind == "gen":
            if ev[1] * tti_ms >= warmup_ms:
                measured.add(ev[3])
        elif kind == "e2e":
            if ev[2] not in measured:
                continue
            delays.append(ev[4])
            trace = ev[5]
            for (va, ta), (vb, tb) in zip(trace, trace[1:]):
                key = f"{va}>{vb}"
                edge_sums[key] = edge_sums.get(key, 0.0) + (tb - ta)
                edge_counts[key] = edge_counts.get(key, 0) + 1
        elif kind == "lost":
            if ev[2] in measured:
                lost += 1
    samples = len(delays)
    generated = len(measured)
    return RunSummary(
        arch=config.architecture,
        seed=config.seed,
        samples=samples,
        mean_ms=sum(delays) / samples if samples else None,
        p50_ms=percentile(delays, 50) if samples else None,
        p95_ms=percentile(delays, 95) if samples else None,
        p99_ms=percentile(delays, 99) if samples else None,
        pdr=samples / generated if generated else None,
        generated=len(measured),
        completed=samples,
        lost=lost,
        inflight=len(measured) - samples - lost,
        config_hash=config.config_hash,
        per_edge_mean_ms={
            key: edge_sums[key] / edge_counts[key]
            for key in sorted(edge_sums)
        },
    )


CSV_HEADER = (
    "arch",
    "seed",
    "samples",
    "mean_ms",
    "p50_ms",
    "p95_ms",
    "p99_ms",
    "pdr",
    "config_hash",
)


def _cell(value: float | None) -> str:
    return "" if value is None else f"{value:.3f}"


def export_csv(summaries: list[RunSummary], path) -> None:
    """Write run summaries as CSV, sorted by (arch, seed), one row each.

    Floats are fixed to three decimals; absent statistics (a run with no
    completed packets) render as empty cells.  The byte content is fully
    determined by the summaries.

    Raises:
        ValueError: On an empty summary list.
        OSError: If the file cannot be written (message names the path).
    """
    if not summaries:
        raise ValueError("no run summaries to export")
    rows = sorted(summaries, key=lambda s: (s.arch, s.seed))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(CSV_HEADER) + "\n")
        for s in rows:
            fh.write(
                ",".join(
                    (
                        s.arch,
                        str(s.seed),
                        str(s.samples),
                        _cell(s.mean_ms),
                        _cell(s.p50_ms),
                        _cell(s.p95_ms),
                        _cell(s.p99_ms),
                        _cell(s.pdr),
                        s.config_hash,
                    )
                )
                + "\n"
            )


def read_results_csv(path) -> list[dict]:
    """Read a results CSV back into typed dicts (inverse of export_csv)."""
    out: list[dict] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_HEADER:
            raise ValueError(
                f"{path}: unexpected results header {reader.fieldnames}"
            )
        for row in reader:
            out.append(
                {
                    "arch": row["arch"],
                    "seed": int(row["seed"]),
                    "samples": int(row["samples"]),
                    "mean_ms": float(row["mean_ms"]) if row["mean_ms"] else None,
                    "p50_ms": float(row["p50_ms"]) if row["p50_ms"] else None,
                    "p95_ms": float(row["p95_ms"]) if row["p95_ms"] else None,
                    "p99_ms": float(row["p99_ms"]) if row["p99_ms"] else None,
                    "pdr": float(row["pdr"]) if row["pdr"] else None,
                    "config_hash": row["config_hash"],
                }
            )
    return out
