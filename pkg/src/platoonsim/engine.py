"""The discrete-event core: TTI clock, traffic, grants, receptions, relaying.

The world advances strictly TTI by TTI (1 TTI = ``tti_ms`` of simulated
time, 1 ms with defaults).  Within a TTI the phases run in a fixed
order:

(a) traffic generation for sources whose generation instant falls in
    this TTI (every vehicle emits ``packets_per_rri`` packets per
    period; the target platoon's leader emits the measured stream);
(b) optical deliveries due this TTI mature and hand their packet to the
    destination MAC queue (exact microsecond arrival timestamps are
    kept in the hop trace);
(c) every vehicle whose grant fires transmits: the whole queue is
    aggregated into one broadcast; receivers are adjudicated per
    subchannel with the aggregate interferer set of all simultaneous
    same-subchannel transmissions; half-duplex receivers (themselves
    transmitting) always fail;
(d) the relay plan enqueues decoded measured packets on their next hop;
(e) all non-transmitting vehicles fold this TTI's observations into
    their sensing history.

Anomalies never raise mid-run: failed receptions become ``rx_fail``
events and dead packet copies become ``lost`` events.

Replay determinism: every vehicle owns an RNG stream seeded from
``(seed, vehicle index)``, the engine owns one for the optional
shadowing draws, and all iteration orders are fixed (ascending vehicle
index, ascending subchannel), so identical configs produce
byte-identical event logs regardless of host or thread count.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import cv2x as cv2x_phy
from . import lifi as lifi_phy
from . import metrics as metrics_io
from . import sps as sbsps
from .events import EventLog
from .packet import Packet
from .scenario import ScenarioLayout, VehicleId, distance_m

ARCHITECTURES = ("plf", "bdl", "hybrid")

LINK_CV2X = "cv2x"
LINK_LIFI = "lifi"


class ConfigError(ValueError):
    """A configuration problem detected before any stepping."""


@dataclass(frozen=True)
class Edge:
    """One directed forwarding edge of a relay plan."""

    src: VehicleId
    dst: VehicleId
    link: str  # LINK_CV2X or LINK_LIFI


@dataclass(frozen=True)
class RelayPlan:
    """Forwarding topology for the target platoon's measured stream.

    The edges form a DAG from the platoon leader to its tail; only plan
    edges trigger forwarding (off-plan receptions are logged, never
    forwarded).
    """

    architecture: str
    edges: tuple[Edge, ...]


def build_relay_plan(
    architecture: str, layout: ScenarioLayout, leader_links: bool = False
) -> RelayPlan:
    """Relay plan for ``architecture`` over the target platoon.

    * ``plf``: the chain 1 -> 2 -> ... -> n, every edge a radio hop.
      With ``leader_links`` the leader additionally broadcasts directly
      to every follower (the classical many-receiver variant); chain
      forwarding is unchanged.
    * ``bdl``: one long radio hop from the leader to the platoon middle
      (vehicle ``n//2 + 1``), then the chain from there to the tail.
    * ``hybrid``: same edge set as ``bdl`` with the leader-to-middle
      edge carried by the optical link instead of the radio.

    Raises:
        ConfigError: On an unknown architecture tag.
    """
    p = layout.target_platoon
    n = layout.platoon_size
    chain = [
        Edge(VehicleId(p, k), VehicleId(p, k + 1), LINK_CV2X)
        for k in range(1, n)
    ]
    mid = n // 2 + 1
    reach = [
        Edge(VehicleId(p, k), VehicleId(p, k + 1), LINK_CV2X)
        for k in range(mid, n)
    ]
    if architecture == "plf":
        edges = list(chain)
        if leader_links:
            edges += [
                Edge(VehicleId(p, 1), VehicleId(p, k), LINK_CV2X)
                for k in range(3, n + 1)
            ]
    elif architecture == "bdl":
        edges = [Edge(VehicleId(p, 1), VehicleId(p, mid), LINK_CV2X)] + reach
    elif architecture == "hybrid":
        edges = [Edge(VehicleId(p, 1), VehicleId(p, mid), LINK_LIFI)] + reach
    else:
        raise ConfigError(
            f"unknown architecture {architecture!r}; "
            f"expected one of {ARCHITECTURES}"
        )
    plan = RelayPlan(architecture=architecture, edges=tuple(edges))
    _check_plan_is_dag(plan, layout)
    return plan


def _check_plan_is_dag(plan: RelayPlan, layout: ScenarioLayout) -> None:
    """Defensive invariant: edges form a DAG reaching tail from leader."""
    succ: dict[VehicleId, list[VehicleId]] = {}
    for e in plan.edges:
        succ.setdefault(e.src, []).append(e.dst)
        if e.dst.position <= e.src.position:
            raise ConfigError(f"relay edge {e.src}->{e.dst} goes backwards")
    frontier = [layout.leader()]
    reached = set(frontier)
    while frontier:
        v = frontier.pop()
        for d in succ.get(v, ()):
            if d not in reached:
                reached.add(d)
                frontier.append(d)
    if layout.tail() not in reached:
        raise ConfigError(
            f"relay plan for {plan.architecture!r} does not reach the tail"
        )


@dataclass(frozen=True)
class EngineConfig:
    """Everything one run needs; immutable and picklable.

    ``config_lines``/``config_hash`` carry the canonical configuration
    echo for log headers and CSV provenance (set by the config loader;
    empty when an EngineConfig is constructed directly).
    """

    layout: ScenarioLayout
    cv2x: cv2x_phy.Cv2xParams
    lifi: lifi_phy.LifiParams
    sps: sbsps.SpsParams
    architecture: str = "hybrid"
    duration_s: float = 60.0
    warmup_s: float = 1.0
    seed: int = 1
    tti_ms: float = 1.0
    packet_size_bytes: int = 300
    packets_per_rri: int = 10
    plf_leader_links: bool = False
    lifi_deviation_deg: float = 0.0
    config_lines: tuple[str, ...] = ()
    config_hash: str = ""


def _validate(config: EngineConfig) -> None:
    if config.architecture not in ARCHITECTURES:
        raise ConfigError(
            f"unknown architecture {config.architecture!r}; "
            f"expected one of {ARCHITECTURES}"
        )
    if config.duration_s < 0:
        raise ConfigError(f"duration_s must be >= 0, got {config.duration_s}")
    if config.warmup_s < 0:
        raise ConfigError(f"warmup_s must be >= 0, got {config.warmup_s}")
    if config.tti_ms <= 0:
        raise ConfigError(f"tti_ms must be > 0, got {config.tti_ms}")
    if config.packet_size_bytes <= 0:
        raise ConfigError(
            f"packet_size_bytes must be > 0, got {config.packet_size_bytes}"
        )
    if config.packets_per_rri < 1:
        raise ConfigError(
            f"packets_per_rri must be >= 1, got {config.packets_per_rri}"
        )
    if config.sps.ttis_per_period % config.packets_per_rri != 0:
        raise ConfigError(
            f"packets_per_rri ({config.packets_per_rri}) must divide "
            f"ttis_per_period ({config.sps.ttis_per_period})"
        )
    if config.lifi_deviation_deg < 0:
        raise ConfigError(
            f"lifi_deviation_deg must be >= 0, got {config.lifi_deviation_deg}"
        )


class Simulation:
    """One run's mutable world; create, then ``run_to_end()``.

    Exposed for step-level tests; most callers should use ``run()``.
    """

    def __init__(self, config: EngineConfig) -> None:
        _validate(config)
        self.config = config
        layout = config.layout
        self._layout = layout
        vids = layout.vehicles()
        self._vids = vids
        n = len(vids)
        self._n = n
        self._tti_ms = config.tti_ms
        self._n_ttis = round(config.duration_s * 1000.0 / config.tti_ms)
        self._gen_interval = (
            config.sps.ttis_per_period // config.packets_per_rri
        )

        # Relay plan and per-vehicle forwarding tables.
        plan = build_relay_plan(
            config.architecture, layout, config.plf_leader_links
        )
        self.plan = plan
        idx = layout.index
        self._successors: list[list[int]] = [[] for _ in range(n)]
        self._lifi_out: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        packet_bits = config.packet_size_bytes * 8
        for e in plan.edges:
            if e.link == LINK_CV2X:
                self._successors[idx(e.src)].append(idx(e.dst))
            else:
                latency_s = lifi_phy.hop_latency_s(
                    config.lifi,
                    distance_m(layout, e.src, e.dst),
                    packet_bits,
                    config.lifi_deviation_deg,
                )  # raises LinkUnavailable before any stepping
                self._lifi_out[idx(e.src)].append(
                    (idx(e.dst), latency_s * 1000.0)
                )
        for succ in self._successors:
            succ.sort()
        self._has_cv2x_out = [bool(s) for s in self._successors]

        target = layout.target_platoon
        self._src_idx = idx(VehicleId(target, 1))
        self._tail_idx = idx(VehicleId(target, layout.platoon_size))
        self._target_indices = [
            idx(VehicleId(target, k))
            for k in range(1, layout.platoon_size + 1)
        ]

        # Propagation tables: received power (dBm), clear-channel decode
        # verdict and clear-channel SINR per (tx, rx) pair.  The decode
        # table is filled by the literal phy decision so the fast path
        # is a memoized cv2x_phy.decode_success, not a reimplementation.
        noise = config.cv2x.noise_power_dbm
        self._noise_dbm = noise
        pd: list[list[float]] = []
        clear: list[list[bool]] = []
        clear_sinr: list[list[float]] = []
        for i in range(n):
            row_p, row_c, row_s = [], [], []
            for j in range(n):
                if i == j:
                    row_p.append(0.0)
                    row_c.append(False)
                    row_s.append(0.0)
                    continue
                p = cv2x_phy.rx_power_dbm(
                    config.cv2x, distance_m(layout, vids[i], vids[j])
                )
                attempt = cv2x_phy.RxAttempt(
                    signal_dbm=p, interferer_dbms=(), noise_dbm=noise
                )
                row_p.append(p)
                row_c.append(cv2x_phy.decode_success(config.cv2x, attempt))
                row_s.append(cv2x_phy.sinr_db(attempt))
            pd.append(row_p)
            clear.append(row_c)
            clear_sinr.append(row_s)
        self._pd = pd
        self._clear = clear
        self._clear_sinr = clear_sinr
        self._shadow_sigma = config.cv2x.shadowing_sigma_db

        # Per-vehicle MAC state and RNG streams; one engine stream for
        # shadowing draws.  String seeding is platform-stable.
        self._macs = [
            sbsps.new_mac_state(
                config.sps, random.Random(f"{config.seed}:{i}")
            )
            for i in range(n)
        ]
        self._engine_rng = random.Random(f"{config.seed}:engine")

        # Schedules: TTI -> payloads.  Vehicles join the channel one
        # after another, each only once every earlier joiner has had to
        # fire at least once (selection window span + 1 apart): a
        # vehicle therefore always holds the earlier joiners' announced
        # reservations before its first selection, so simultaneous
        # cold-start picks of the same TTI cannot happen.  The join
        # ORDER is a seeded shuffle — a fixed order would space
        # neighbouring grant phases by the join gap and bias relay
        # waiting times away from the uniform phase residual.
        self._select_at: dict[int, list[int]] = {}
        self._tx_at: dict[int, list[int]] = {}
        self._lifi_due: dict[int, list[tuple[int, Packet, float]]] = {}
        join_spacing = config.sps.selection_window_max_ttis + 1
        join_order = list(range(n))
        self._engine_rng.shuffle(join_order)
        for slot, i in enumerate(join_order):
            self._select_at.setdefault(slot * join_spacing, []).append(i)

        # Measured-stream bookkeeping.
        self._seq = [0] * n
        self._live: dict[int, int] = {}  # seq -> live copy count
        self._completed: set[int] = set()
        self._generated = 0
        self._completed_n = 0
        self._lost_n = 0
        self._draining = False

        self.log = EventLog(
            meta={
                "arch": config.architecture,
                "seed": str(config.seed),
                "config_hash": config.config_hash,
            },
            config_lines=config.config_lines,
        )
        self._events = self.log.events
        self._now = -1

    # -- public clock -------------------------------------------------

    @property
    def now_tti(self) -> int:
        return self._now

    @property
    def n_ttis(self) -> int:
        return self._n_ttis

    def step(self, tti: int | None = None) -> None:
        """Advance the world by exactly one TTI.

        Raises:
            ValueError: If ``tti`` is given and is not ``now + 1``.
        """
        expected = self._now + 1
        if tti is not None and tti != expected:
            raise ValueError(f"step out of order: expected {expected}, got {tti}")
        self._now = t = expected
        if not self._draining and t % self._gen_interval == 0:
            self._generate(t)
        due = self._lifi_due.pop(t, None)
        if due:
            self._deliver_lifi(t, due)
        sel = self._select_at.pop(t, None)
        if sel:
            self._acquire_grants(t, sel)
        txs = self._tx_at.pop(t, None)
        if txs:
            self._transmit(t, txs)

    def run_to_end(self) -> None:
        """Step through the generation horizon, then drain.

        Generation stops after ``duration_s``; the world keeps stepping
        (grants keep firing, so channel conditions persist) until every
        in-flight measured packet has completed or been lost, bounded
        by a grace period of 100 periods.  Packets still alive at the
        cap are reported as in-flight.
        """
        for _ in range(self._n_ttis):
            self.step()
        self._draining = True
        grace = 100 * self.config.sps.ttis_per_period
        deadline = self._now + grace
        while self._live and self._now < deadline:
            self.step()
        self._finalize()

    # -- phases ---------------------------------------------------------

    def _generate(self, t: int) -> None:
        gen_ms = t * self._tti_ms
        vids = self._vids
        macs = self._macs
        size = self.config.packet_size_bytes
        src = self._src_idx
        for i in range(self._n):
            seq = self._seq[i]
            self._seq[i] = seq + 1
            if i != src:
                sbsps.enqueue(macs[i], Packet(vids[i], seq, gen_ms, size))
                continue
            pkt = Packet(vids[i], seq, gen_ms, size, traced=True)
            self._events.append(("gen", t, vids[i], seq))
            self._generated += 1
            copies = 0
            for dst, latency_ms in self._lifi_out[i]:
                arrival_ms = gen_ms + latency_ms
                mature = int(arrival_ms // self._tti_ms) + 1
                self._lifi_due.setdefault(mature, []).append(
                    (dst, pkt, arrival_ms)
                )
                self._events.append(
                    ("lifi_tx", t, vids[i], vids[dst], seq, latency_ms * 1000.0)
                )
                copies += 1
            if self._has_cv2x_out[i]:
                sbsps.enqueue(macs[i], pkt)
                copies += 1
            if copies == 0:
                raise ConfigError(
                    "measured source has no outgoing edge in the relay plan"
                )
            self._live[seq] = copies

    def _deliver_lifi(
        self, t: int, due: list[tuple[int, Packet, float]]
    ) -> None:
        for dst, pkt, arrival_ms in due:
            if pkt.seq in self._completed:
                continue
            if dst == self._tail_idx:
                self._complete(t, pkt, arrival_ms)
            else:
                sbsps.enqueue(
                    self._macs[dst], pkt.with_hop(self._vids[dst], arrival_ms)
                )

    def _acquire_grants(self, t: int, indices: list[int]) -> None:
        for i in indices:
            mac = self._macs[i]
            grant = sbsps.select_resource(mac, t, mac.rng)
            mac.grant = grant
            self._tx_at.setdefault(grant.anchor_tti, []).append(i)
            self._events.append(
                (
                    "grant",
                    t,
                    self._vids[i],
                    grant.anchor_tti,
                    grant.subchannel,
                    grant.rri_ttis,
                    grant.reselection_counter,
                    "initial",
                )
            )

    def _transmit(self, t: int, txs: list[int]) -> None:
        txs.sort()
        vids = self._vids
        events = self._events
        fired: list[tuple[int, int, list[Packet], int]] = []
        for i in txs:
            mac = self._macs[i]
            subchannel = mac.grant.subchannel
            packets, change = sbsps.on_transmission(mac, t, mac.rng)
            grant = mac.grant
            self._tx_at.setdefault(grant.anchor_tti, []).append(i)
            n_traced = 0
            for p in packets:
                if p.traced:
                    n_traced += 1
            events.append(("tx", t, vids[i], subchannel, len(packets), n_traced))
            if change is not None:
                events.append(
                    (
                        "grant",
                        t,
                        vids[i],
                        grant.anchor_tti,
                        grant.subchannel,
                        grant.rri_ttis,
                        grant.reselection_counter,
                        change,
                    )
                )
            fired.append((i, subchannel, packets, n_traced))

        if len(fired) == 1 and self._shadow_sigma == 0.0:
            self._resolve_single(t, *fired[0])
        else:
            self._resolve_general(t, fired)

    def _resolve_single(
        self, t: int, i: int, subchannel: int, packets: list[Packet], n_traced: int
    ) -> None:
        """Reception with exactly one transmitter and no shadowing: no
        interference, no half-duplex conflicts; decode verdicts come
        from the precomputed clear-channel table."""
        macs = self._macs
        pd_row = self._pd[i]
        clear_row = self._clear[i]
        grant = macs[i].grant
        announcement = sbsps.Reservation(grant.rri_ttis, grant.reselection_counter)
        # Every vehicle but the transmitter listens this TTI (nobody
        # else fired), so the record_sensing half-duplex guard cannot
        # trip and the per-receiver sensing fold-in goes straight to
        # the sensing store.
        for r in range(self._n):
            if r == i:
                continue
            macs[r].sensing.add(
                t,
                subchannel,
                pd_row[r],
                announcement if clear_row[r] else None,
            )
        if not n_traced:
            return
        rx_result: dict[int, tuple[bool, object]] = {}
        sinr_row = self._clear_sinr[i]
        for r in self._target_indices:
            if r == i:
                continue
            if clear_row[r]:
                rx_result[r] = (True, sinr_row[r])
            else:
                rx_result[r] = (False, "sinr")
        self._forward(
            t, i, [p for p in packets if p.traced], rx_result
        )

    def _resolve_general(
        self, t: int, fired: list[tuple[int, int, list[Packet], int]]
    ) -> None:
        """Full reception resolution: aggregate same-subchannel
        interference, half-duplex blindness, optional shadowing.

        Shadowing draws consume the engine RNG in a fixed order
        (ascending receiver, then firing order, i.e. ascending
        transmitter within each subchannel group).
        """
        params = self.config.cv2x
        sigma = self._shadow_sigma
        erng = self._engine_rng
        macs = self._macs
        noise = self._noise_dbm
        tx_set = {f[0] for f in fired}
        by_subch: dict[int, list[int]] = {}
        for i, subchannel, _, _ in fired:
            by_subch.setdefault(subchannel, []).append(i)
        announcements = {
            i: sbsps.Reservation(
                macs[i].grant.rri_ttis, macs[i].grant.reselection_counter
            )
            for i in tx_set
        }
        # decode_map[(i, r)] = (ok, sinr_db or cause)
        decode_map: dict[tuple[int, int], tuple[bool, object]] = {}
        for r in range(self._n):
            if r in tx_set:
                continue
            observations = []
            for subchannel, group in by_subch.items():
                powers_dbm = []
                for i in group:
                    p = self._pd[i][r]
                    if sigma > 0.0:
                        p -= erng.gauss(0.0, sigma)
                    powers_dbm.append(p)
                best_announcement = None
                best_power = None
                for k, i in enumerate(group):
                    interferers = tuple(
                        powers_dbm[m] for m in range(len(group)) if m != k
                    )
                    attempt = cv2x_phy.RxAttempt(
                        signal_dbm=powers_dbm[k],
                        interferer_dbms=interferers,
                        noise_dbm=noise,
                    )
                    if cv2x_phy.decode_success(params, attempt):
                        decode_map[(i, r)] = (True, cv2x_phy.sinr_db(attempt))
                        # strongest decoded transmitter's announcement
                        # wins the slot (ties: lowest index, fixed order)
                        if best_power is None or powers_dbm[k] > best_power:
                            best_power = powers_dbm[k]
                            best_announcement = announcements[i]
                    else:
                        cause = "collision" if len(group) > 1 else "sinr"
                        decode_map[(i, r)] = (False, cause)
                total_mw = sum(cv2x_phy.dbm_to_mw(p) for p in powers_dbm)
                observations.append(
                    (
                        (t, subchannel),
                        cv2x_phy.mw_to_dbm(total_mw),
                        best_announcement,
                    )
                )
            sbsps.record_sensing(macs[r], t, observations)

        for i, _, packets, n_traced in fired:
            if not n_traced:
                continue
            rx_result: dict[int, tuple[bool, object]] = {}
            for r in self._target_indices:
                if r == i:
                    continue
                if r in tx_set:
                    rx_result[r] = (False, "half-duplex")
                else:
                    rx_result[r] = decode_map[(i, r)]
            self._forward(t, i, [p for p in packets if p.traced], rx_result)

    def _forward(
        self,
        t: int,
        i: int,
        traced_packets: list[Packet],
        rx_result: dict[int, tuple[bool, object]],
    ) -> None:
        """Log receptions of a measured-carrying broadcast and move
        packet copies along the plan edges (phase d)."""
        vids = self._vids
        events = self._events
        vi = vids[i]
        for r in self._target_indices:
            if r == i:
                continue
            ok, info = rx_result[r]
            if ok:
                events.append(
                    ("rx_ok", t, vi, vids[r], info, len(traced_packets))
                )
            else:
                events.append(("rx_fail", t, vi, vids[r], info))
        arrival_ms = (t + 1) * self._tti_ms
        successors = self._successors[i]
        tail = self._tail_idx
        for pkt in traced_packets:
            seq = pkt.seq
            if seq in self._completed:
                continue  # a faster path already delivered this one
            new_copies = 0
            last_cause = "sinr"
            delivered = False
            for r in successors:
                ok, info = rx_result[r]
                if not ok:
                    last_cause = info
                    continue
                if r == tail:
                    self._complete(t, pkt, arrival_ms)
                    delivered = True
                    break
                sbsps.enqueue(self._macs[r], pkt.with_hop(vids[r], arrival_ms))
                new_copies += 1
            if delivered:
                continue
            count = self._live.get(seq, 0) - 1 + new_copies
            if count > 0:
                self._live[seq] = count
            else:
                self._live.pop(seq, None)
                self._lost_n += 1
                events.append(("lost", t, seq, vi, last_cause))

    def _complete(self, t: int, pkt: Packet, arrival_ms: float) -> None:
        seq = pkt.seq
        self._completed.add(seq)
        self._live.pop(seq, None)
        self._completed_n += 1
        trace = (*pkt.hop_trace, (self._vids[self._tail_idx], arrival_ms))
        self._events.append(
            (
                "e2e",
                t,
                seq,
                pkt.gen_time_ms,
                arrival_ms - pkt.gen_time_ms,
                trace,
            )
        )

    def _finalize(self) -> None:
        self.log.counters = {
            "generated": self._generated,
            "completed": self._completed_n,
            "lost": self._lost_n,
            "inflight": len(self._live),
        }


def step(sim: Simulation, tti: int) -> None:
    """Advance ``sim`` to ``tti``, which must be ``sim.now_tti + 1``."""
    sim.step(tti)


def run(config: EngineConfig) -> tuple[EventLog, "metrics_io.RunSummary"]:
    """Execute a full run: validate, step duration/tti_ms times, summarize.

    Returns the complete event log and the post-warmup summary.  The
    summary statistics recomputed from the log are cross-checked against
    the engine's internal counters; a mismatch raises RuntimeError (it
    would mean the log and the world disagreed).

    Raises:
        ConfigError: On invalid configuration, before any stepping.
    """
    sim = Simulation(config)
    sim.run_to_end()
    log = sim.log
    summary = metrics_io.summarize(log, config)
    recount = metrics_io.recount_from_events(log)
    if recount != log.counters:
        raise RuntimeError(
            f"event log disagrees with engine counters: {recount} != "
            f"{log.counters}"
        )
    return log, summary
