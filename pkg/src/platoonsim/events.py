"""Line-delimited event log: schema, serialization, parsing.

A log file starts with the schema header ``#platoonsim-log v1``,
followed by ``# key = value`` comment lines echoing the run metadata and
the canonical configuration, then one event per line, chronologically
ordered by TTI.  Field order per event type (all fields
space-separated; vehicles printed as ``platoon.position``; floats with
three fractional digits):

``gen <tti> <vehicle> <seq>``
    A measured-stream packet was generated.
``grant <tti> <vehicle> <anchor_tti> <subchannel> <rri_ttis> <counter> <kind>``
    A grant was (re)acquired; kind is ``initial``, ``keep`` or
    ``reselect``.  ``anchor_tti`` is the grant's next firing instant.
``tx <tti> <vehicle> <subchannel> <n_packets> <n_measured>``
    A grant fired and broadcast the queue contents (possibly empty).
``rx_ok <tti> <tx_vehicle> <rx_vehicle> <sinr_db> <n_measured>``
    A measured-stream-carrying broadcast was decoded by a receiver of
    the target platoon.
``rx_fail <tti> <tx_vehicle> <rx_vehicle> <cause>``
    Same, but decoding failed; cause is ``sinr``, ``half-duplex`` or
    ``collision``.
``lifi_tx <tti> <src> <dst> <seq> <latency_us>``
    A measured packet departed on the optical link.
``e2e <tti> <seq> <gen_ms> <delay_ms> <path>``
    A measured packet reached the target platoon's tail vehicle; path
    is ``vehicle@arrival_ms`` hops joined by ``>``.
``lost <tti> <seq> <vehicle> <cause>``
    The last live copy of a measured packet died at ``vehicle``.

Only the measured stream is logged per-packet; background traffic is
visible through its ``grant``/``tx`` records.  Logs are
replay-deterministic: identical config and seed produce byte-identical
files.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .scenario import VehicleId, parse_vehicle

SCHEMA_HEADER = "#platoonsim-log v1"

RX_FAIL_CAUSES = ("sinr", "half-duplex", "collision")


@dataclass
class EventLog:
    """Append-only event sequence plus run metadata.

    ``meta`` holds at least arch, seed and config_hash; ``config_lines``
    is the canonical ``key = value`` echo.  ``counters`` carries the
    engine's internal totals (generated/completed/lost/inflight over the
    whole run) for cross-checking; they are not serialized.
    """

    meta: dict[str, str] = field(default_factory=dict)
    config_lines: tuple[str, ...] = ()
    events: list[tuple] = field(default_factory=list)
    counters: dict[str, int] = field(default_factory=dict)

    def append(self, event: tuple) -> None:
        self.events.append(event)

    def to_lines(self) -> Iterator[str]:
        """Serialize header, metadata echo, and every event."""
        yield SCHEMA_HEADER
        for key, value in self.meta.items():
            yield f"# {key} = {value}"
        for line in self.config_lines:
            yield f"# cfg {line}"
        for event in self.events:
            yield format_event(event)

    def write(self, path: str) -> None:
        """Write the log to ``path`` (newline-terminated lines)."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for line in self.to_lines():
                fh.write(line)
                fh.write("\n")


def _f(value: float) -> str:
    return f"{value:.3f}"


def format_event(event: tuple) -> str:
    """One event tuple -> its log line."""
    kind = event[0]
    if kind == "gen":
        _, tti, vehicle, seq = event
        return f"gen {tti} {vehicle} {seq}"
    if kind == "grant":
        _, tti, vehicle, anchor, subchannel, rri, counter, how = event
        return (
            f"grant {tti} {vehicle} {anchor} {subchannel} {rri} "
            f"{counter} {how}"
        )
    if kind == "tx":
        _, tti, vehicle, subchannel, n_packets, n_measured = event
        return f"tx {tti} {vehicle} {subchannel} {n_packets} {n_measured}"
    if kind == "rx_ok":
        _, tti, tx_vehicle, rx_vehicle, sinr_db, n_measured = event
        return (
            f"rx_ok {tti} {tx_vehicle} {rx_vehicle} {_f(sinr_db)} "
            f"{n_measured}"
        )
    if kind == "rx_fail":
        _, tti, tx_vehicle, rx_vehicle, cause = event
        return f"rx_fail {tti} {tx_vehicle} {rx_vehicle} {cause}"
    if kind == "lifi_tx":
        _, tti, src, dst, seq, latency_us = event
        return f"lifi_tx {tti} {src} {dst} {seq} {_f(latency_us)}"
    if kind == "e2e":
        _, tti, seq, gen_ms, delay_ms, trace = event
        path = ">".join(f"{v}@{_f(ms)}" for v, ms in trace)
        return f"e2e {tti} {seq} {_f(gen_ms)} {_f(delay_ms)} {path}"
    if kind == "lost":
        _, tti, seq, vehicle, cause = event
        return f"lost {tti} {seq} {vehicle} {cause}"
    raise ValueError(f"unknown event kind {kind!r}")


def _parse_trace(text: str) -> tuple[tuple[VehicleId, float], ...]:
    hops = []
    for hop in text.split(">"):
        vehicle, _, ms = hop.partition("@")
        hops.append((parse_vehicle(vehicle), float(ms)))
    return tuple(hops)


def parse_line(line: str) -> tuple:
    """One log line -> its event tuple (inverse of format_event).

    Raises:
        ValueError: On malformed lines or unknown event kinds.
    """
    parts = line.split(" ")
    kind = parts[0]
    try:
        if kind == "gen":
            return ("gen", int(parts[1]), parse_vehicle(parts[2]), int(parts[3]))
        if kind == "grant":
            return (
                "grant",
                int(parts[1]),
                parse_vehicle(parts[2]),
                int(parts[3]),
                int(parts[4]),
                int(parts[5]),
                int(parts[6]),
                parts[7],
            )
        if kind == "tx":
            return (
                "tx",
                int(parts[1]),
                parse_vehicle(parts[2]),
                int(parts[3]),
                int(parts[4]),
                int(parts[5]),
            )
        if kind == "rx_ok":
            return (
                "rx_ok",
                int(parts[1]),
                parse_vehicle(parts[2]),
                parse_vehicle(parts[3]),
                float(parts[4]),
                int(parts[5]),
            )
        if kind == "rx_fail":
            return (
                "rx_fail",
                int(parts[1]),
                parse_vehicle(parts[2]),
                parse_vehicle(parts[3]),
                parts[4],
            )
        if kind == "lifi_tx":
            return (
                "lifi_tx",
                int(parts[1]),
                parse_vehicle(parts[2]),
                parse_vehicle(parts[3]),
                int(parts[4]),
                float(parts[5]),
            )
        if kind == "e2e":
            return (
                "e2e",
                int(parts[1]),
                int(parts[2]),
                float(parts[3]),
                float(parts[4]),
                _parse_trace(parts[5]),
            )
        if kind == "lost":
            return (
                "lost",
                int(parts[1]),
                int(parts[2]),
                parse_vehicle(parts[3]),
                parts[4],
            )
    except (IndexError, ValueError) as exc:
        raise ValueError(f"malformed event line {line!r}: {exc}") from None
    raise ValueError(f"unknown event kind {kind!r} in line {line!r}")


def parse_log(lines: Iterable[str]) -> EventLog:
    """Parse serialized log lines back into an EventLog.

    Float fields come back at the serialized 3-digit precision.

    Raises:
        ValueError: If the schema header is missing or does not match,
            or any line is malformed.
    """
    log = EventLog()
    config_lines: list[str] = []
    first = True
    for raw in lines:
        line = raw.rstrip("\n")
        if first:
            if line != SCHEMA_HEADER:
                raise ValueError(
                    f"unsupported log schema: expected {SCHEMA_HEADER!r}, "
                    f"got {line!r}"
                )
            first = False
            continue
        if not line:
            continue
        if line.startswith("# cfg "):
            config_lines.append(line[len("# cfg "):])
            continue
        if line.startswith("# "):
            key, _, value = line[2:].partition(" = ")
            log.meta[key] = value
            continue
        log.append(parse_line(line))
    if first:
        raise ValueError("empty log: missing schema header")
    log.config_lines = tuple(config_lines)
    return log


def read_log(path: str) -> EventLog:
    """Parse a log file written by ``EventLog.write``."""
    with io.open(path, "r", encoding="utf-8") as fh:
        return parse_log(fh)
