"""Per-vehicle sensing-based semi-persistent scheduling (SB-SPS).

Each vehicle autonomously reserves one periodic ``(TTI, subchannel)``
resource on a grid of ``ttis_per_period`` TTIs x ``num_subchannels``
subchannels and re-uses it every resource reservation interval (RRI).
A countdown (the reselection counter) is decremented on every use; when
it expires the vehicle keeps the same resource with probability
``keep_probability`` and otherwise reselects.

Reselection is sensing-based, using the last ``sensing_window_ttis`` of
observations:

1. Candidates are all resources in the selection window
   ``[now + selection_window_min_ttis, now + selection_window_max_ttis]``
   across all subchannels.
2. Candidates whose TTI collides with a decoded reservation
   announcement measured above the RSRP exclusion threshold are
   removed (announcements are projected forward by their announced
   RRI).  A transmitter is deaf while it transmits (half-duplex), so a
   whole TTI is excluded, not just the announced subchannel.  If fewer
   than ``candidate_keep_fraction`` of the original candidates survive,
   the threshold is raised by ``rsrp_escalation_step_db`` and the step
   repeats, which guarantees termination.
3. Survivors are ranked by mean sensed power over the window (resources
   never heard rank best); one of the lowest-power
   ``candidate_keep_fraction`` tranche (of the ORIGINAL candidate
   count) is chosen uniformly at random.
4. A fresh reselection counter is drawn uniformly from
   ``[counter_min, counter_max]``.

Determinism: for a fixed RNG stream and observation sequence the grant
sequence is reproducible.  RNG consumption order is part of the
contract: selection draws the resource choice first, then the counter;
an expiry draws the keep/reselect coin first, then whatever the chosen
branch needs.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .packet import Packet


class ResourceId(NamedTuple):
    """One cell of the scheduling grid at an absolute TTI."""

    tti: int
    subchannel: int


class Reservation(NamedTuple):
    """The reservation a transmission announces in-band.

    The announced resource itself is the one the transmission used; the
    announcement adds the period it will repeat with and the remaining
    counter.  It is decodable iff the carrying packet decodes.
    """

    rri_ttis: int
    counter: int


class Observation(NamedTuple):
    """One sensed transmission: where, how strong, and what it announced."""

    resource: ResourceId
    power_dbm: float
    reservation: Reservation | None


@dataclass
class Grant:
    """An active reservation: transmit on ``subchannel`` at
    ``anchor_tti``, then every ``rri_ttis`` (``anchor_tti`` always holds
    the NEXT transmission instant)."""

    anchor_tti: int
    subchannel: int
    rri_ttis: int
    reselection_counter: int


@dataclass(frozen=True)
class SpsParams:
    """Scheduler parameters; defaults give the 100 TTI x 4 subchannel grid.

    ``rri_ttis`` is the grant period in TTIs.  ``ttis_per_period`` is the
    grid length used for resource bookkeeping (equal to ``rri_ttis``
    except in multi-grant mode, where a grant fires several times per
    grid period).
    """

    num_subchannels: int = 4
    ttis_per_period: int = 100
    rri_ttis: int = 100
    sensing_window_ttis: int = 1000
    selection_window_min_ttis: int = 1
    selection_window_max_ttis: int = 20
    keep_probability: float = 0.4
    counter_min: int = 5
    counter_max: int = 15
    rsrp_exclude_threshold_dbm: float = -110.0
    rsrp_escalation_step_db: float = 3.0
    candidate_keep_fraction: float = 0.2

    def __post_init__(self) -> None:
        if self.num_subchannels < 1:
            raise ValueError(
                f"num_subchannels must be >= 1, got {self.num_subchannels}"
            )
        if self.ttis_per_period < 1:
            raise ValueError(
                f"ttis_per_period must be >= 1, got {self.ttis_per_period}"
            )
        if self.rri_ttis < 1:
            raise ValueError(f"rri_ttis must be >= 1, got {self.rri_ttis}")
        if self.sensing_window_ttis < 1:
            raise ValueError(
                f"sensing_window_ttis must be >= 1, "
                f"got {self.sensing_window_ttis}"
            )
        if self.selection_window_min_ttis < 1:
            raise ValueError(
                "selection_window_min_ttis must be >= 1, "
                f"got {self.selection_window_min_ttis}"
            )
        if self.selection_window_max_ttis < self.selection_window_min_ttis:
            raise ValueError(
                "selection_window_max_ttis must be >= "
                "selection_window_min_ttis, got "
                f"{self.selection_window_max_ttis}"
            )
        if not 0.0 <= self.keep_probability <= 1.0:
            raise ValueError(
                f"keep_probability must be in [0, 1], "
                f"got {self.keep_probability}"
            )
        if not 1 <= self.counter_min <= self.counter_max:
            raise ValueError(
                "counter range must satisfy 1 <= counter_min <= counter_max, "
                f"got [{self.counter_min}, {self.counter_max}]"
            )
        if self.rsrp_escalation_step_db <= 0:
            raise ValueError(
                "rsrp_escalation_step_db must be > 0, "
                f"got {self.rsrp_escalation_step_db}"
            )
        if not 0.0 < self.candidate_keep_fraction <= 1.0:
            raise ValueError(
                "candidate_keep_fraction must be in (0, 1], "
                f"got {self.candidate_keep_fraction}"
            )


class SensingRecord:
    """Ring buffer of sensed power and decoded reservations.

    Entries are keyed by grid slot (``tti mod ttis_per_period``,
    subchannel); anything older than the sensing window is evicted
    lazily on access.  Power history is kept in linear milliwatts so the
    ranking mean needs no conversions.
    """

    __slots__ = ("_period", "_nsub", "_window", "_power", "_reservations")

    def __init__(self, params: SpsParams) -> None:
        self._period = params.ttis_per_period
        self._nsub = params.num_subchannels
        self._window = params.sensing_window_ttis
        # slot key -> deque of (tti, power_mw); slot key -> latest
        # (tti, power_dbm, announced rri)
        self._power: dict[int, deque[tuple[int, float]]] = {}
        self._reservations: dict[int, tuple[int, float, int]] = {}

    def _key(self, tti: int, subchannel: int) -> int:
        return (tti % self._period) * self._nsub + subchannel

    def add(
        self,
        tti: int,
        subchannel: int,
        power_dbm: float,
        reservation: Reservation | None,
    ) -> None:
        """Record one observation made at ``tti``."""
        key = (tti % self._period) * self._nsub + subchannel
        dq = self._power.get(key)
        if dq is None:
            dq = self._power[key] = deque()
        else:
            cutoff = tti - self._window
            while dq and dq[0][0] < cutoff:
                dq.popleft()
        dq.append((tti, 10.0 ** (power_dbm * 0.1)))
        if reservation is not None:
            self._reservations[key] = (tti, power_dbm, reservation.rri_ttis)

    def mean_sensed_mw(self, tti: int, subchannel: int, now: int) -> float | None:
        """Mean linear power sensed for a grid slot within the window.

        Returns None when the slot was never heard in the window.
        """
        dq = self._power.get(self._key(tti, subchannel))
        if not dq:
            return None
        cutoff = now - self._window
        while dq and dq[0][0] < cutoff:
            dq.popleft()
        if not dq:
            return None
        return sum(p for _, p in dq) / len(dq)

    def blocked_ttis(
        self, now: int, lo: int, hi: int, threshold_dbm: float
    ) -> set[int]:
        """Absolute TTIs in ``[lo, hi]`` hit by a projected reservation.

        A reservation announced at ``tti_a`` (within the sensing window,
        measured strictly above ``threshold_dbm``) occupies
        ``tti_a + k * rri`` for k >= 1.  The whole TTI is blocked
        regardless of subchannel: transmitting there would leave this
        vehicle deaf to that neighbour (and vice versa).
        """
        blocked: set[int] = set()
        cutoff = now - self._window
        for tti_a, power_dbm, rri in self._reservations.values():
            if tti_a < cutoff or power_dbm <= threshold_dbm:
                continue
            k = max(1, -((tti_a - lo) // rri))  # ceil((lo - tti_a) / rri)
            t = tti_a + k * rri
            while t <= hi:
                blocked.add(t)
                t += rri
        return blocked


@dataclass
class MacState:
    """Everything one vehicle's scheduler owns.

    The queue is FIFO in arrival order (own traffic at generation,
    relayed copies at hand-off).  ``last_tx_tti`` backs the half-duplex
    precondition of ``record_sensing``.
    """

    params: SpsParams
    rng: random.Random
    grant: Grant | None = None
    queue: list[Packet] = field(default_factory=list)
    sensing: SensingRecord = None  # type: ignore[assignment]
    last_tx_tti: int = -1

    def __post_init__(self) -> None:
        if self.sensing is None:
            self.sensing = SensingRecord(self.params)


def new_mac_state(params: SpsParams, rng: random.Random) -> MacState:
    """Fresh scheduler state with empty history and no grant."""
    return MacState(params=params, rng=rng)


def enqueue(state: MacState, packet: Packet) -> None:
    """Append a packet for the next transmission opportunity."""
    state.queue.append(packet)


def record_sensing(
    state: MacState, tti: int, observations: list[Observation]
) -> None:
    """Fold one TTI's observations into the sensing history.

    Raises:
        ValueError: If called for a TTI in which this vehicle itself
            transmitted — a half-duplex radio senses nothing then.
    """
    if tti == state.last_tx_tti:
        raise ValueError(
            f"half-duplex: cannot record observations at own-TX TTI {tti}"
        )
    sensing = state.sensing
    for resource, power_dbm, reservation in observations:
        # index access keeps plain (tti, subchannel) tuples acceptable
        # alongside ResourceId in the hot path
        sensing.add(tti, resource[1], power_dbm, reservation)


def select_resource(state: MacState, now_tti: int, rng: random.Random) -> Grant:
    """Pick a new grant via the four-step sensing procedure (see module
    docstring).

    The returned grant's first transmission lies in
    ``[now + selection_window_min_ttis, now + selection_window_max_ttis]``.
    """
    p = state.params
    lo = now_tti + p.selection_window_min_ttis
    hi = now_tti + p.selection_window_max_ttis
    candidates = [
        (t, s) for t in range(lo, hi + 1) for s in range(p.num_subchannels)
    ]
    tranche_size = math.ceil(p.candidate_keep_fraction * len(candidates))

    threshold_dbm = p.rsrp_exclude_threshold_dbm
    while True:
        blocked = state.sensing.blocked_ttis(now_tti, lo, hi, threshold_dbm)
        remaining = [c for c in candidates if c[0] not in blocked]
        if len(remaining) >= tranche_size:
            break
        threshold_dbm += p.rsrp_escalation_step_db

    sensing = state.sensing
    neg_inf = -math.inf

    # Rank by mean sensed linear power, never-sensed resources ranking
    # best.  Ties (typically the large never-sensed class) are broken
    # uniformly at random so equally-ranked resources are equally
    # likely to enter the tranche; a positional tie-break would crowd
    # selections into the front of the window and make independent
    # selectors collide on the same TTI far more often.  One draw per
    # candidate in fixed (tti, subchannel) order keeps replays exact.
    def rank_key(candidate: tuple[int, int]) -> tuple[float, float]:
        t, s = candidate
        mean = sensing.mean_sensed_mw(t, s, now_tti)
        return (neg_inf if mean is None else mean, rng.random())

    remaining.sort(key=rank_key)
    tranche = remaining[:tranche_size]
    anchor, subchannel = tranche[rng.randrange(len(tranche))]
    counter = rng.randint(p.counter_min, p.counter_max)
    return Grant(
        anchor_tti=anchor,
        subchannel=subchannel,
        rri_ttis=p.rri_ttis,
        reselection_counter=counter,
    )


def on_transmission(
    state: MacState, now_tti: int, rng: random.Random
) -> tuple[list[Packet], str | None]:
    """Execute the grant firing at ``now_tti``.

    Dequeues ALL queued packets into this transmission (the beacon
    aggregates whatever is pending), decrements the reselection counter
    and, on expiry, keeps the resource with ``keep_probability``
    (redrawing the counter) or reselects.

    Returns:
        ``(packets, change)`` where change is None (grant merely
        advanced one period), "keep", or "reselect".

    Raises:
        ValueError: If there is no grant or ``now_tti`` is not its
            transmission instant.
    """
    grant = state.grant
    if grant is None:
        raise ValueError("on_transmission called with no active grant")
    if now_tti != grant.anchor_tti:
        raise ValueError(
            f"on_transmission at TTI {now_tti} but grant fires at "
            f"{grant.anchor_tti}"
        )
    packets = state.queue
    state.queue = []
    state.last_tx_tti = now_tti

    grant.reselection_counter -= 1
    change: str | None = None
    if grant.reselection_counter <= 0:
        if rng.random() < state.params.keep_probability:
            grant.anchor_tti += grant.rri_ttis
            grant.reselection_counter = rng.randint(
                state.params.counter_min, state.params.counter_max
            )
            change = "keep"
        else:
            state.grant = select_resource(state, now_tti, rng)
            change = "reselect"
    else:
        grant.anchor_tti += grant.rri_ttis
    return packets, change


def next_tx_tti(state: MacState, now_tti: int) -> int:
    """First grant transmission instant strictly after ``now_tti``.

    Raises:
        ValueError: If no grant is active.
    """
    grant = state.grant
    if grant is None:
        raise ValueError("no active grant")
    anchor = grant.anchor_tti
    if now_tti < anchor:
        return anchor
    k = (now_tti - anchor) // grant.rri_ttis + 1
    return anchor + k * grant.rri_ttis
