"""Simulation engine: relay plans, stepping, determinism, conservation."""

import math

import pytest

from platoonsim.config import make_config
from platoonsim.engine import (
    ConfigError,
    Edge,
    LINK_CV2X,
    LINK_LIFI,
    Simulation,
    build_relay_plan,
    run,
    step,
)
from platoonsim.lifi import LinkUnavailable
from platoonsim.metrics import recount_from_events
from platoonsim.scenario import ScenarioLayout, VehicleId

LAYOUT = ScenarioLayout()  # 3 platoons of 10, target platoon 1
V = VehicleId


def _cfg(**over):
    base = {"run.duration_s": 2.0}
    base.update(over)
    return make_config(**base)


def _ideal(**over):
    over.setdefault("cv2x.sinr_threshold_db", -math.inf)
    return _cfg(**over)


# -- relay plans -------------------------------------------------------


def test_plf_plan_is_the_full_chain():
    plan = build_relay_plan("plf", LAYOUT)
    assert plan.edges == tuple(
        Edge(V(1, k), V(1, k + 1), LINK_CV2X) for k in range(1, 10)
    )


def test_plf_leader_links_adds_direct_edges():
    plan = build_relay_plan("plf", LAYOUT, leader_links=True)
    chain = set(build_relay_plan("plf", LAYOUT).edges)
    extra = set(plan.edges) - chain
    assert extra == {Edge(V(1, 1), V(1, k), LINK_CV2X) for k in range(3, 11)}


def test_bdl_plan_jumps_to_the_middle():
    plan = build_relay_plan("bdl", LAYOUT)
    assert plan.edges[0] == Edge(V(1, 1), V(1, 6), LINK_CV2X)
    assert plan.edges[1:] == tuple(
        Edge(V(1, k), V(1, k + 1), LINK_CV2X) for k in range(6, 10)
    )


def test_hybrid_plan_is_bdl_with_an_optical_first_hop():
    hybrid = build_relay_plan("hybrid", LAYOUT)
    bdl = build_relay_plan("bdl", LAYOUT)
    assert hybrid.edges[0] == Edge(V(1, 1), V(1, 6), LINK_LIFI)
    assert hybrid.edges[1:] == bdl.edges[1:]


def test_bdl_middle_for_odd_platoon():
    layout = ScenarioLayout(platoon_size=9)
    plan = build_relay_plan("bdl", layout)
    assert plan.edges[0].dst == V(1, 5)
    assert plan.edges[-1].dst == V(1, 9)


def test_unknown_architecture_rejected():
    with pytest.raises(ConfigError, match="unknown architecture"):
        build_relay_plan("mesh", LAYOUT)


# -- construction ------------------------------------------------------


def test_blocked_optical_link_fails_before_stepping():
    cfg = _cfg(**{
        "run.architecture": "hybrid",
        "lifi.angular_deviation_deg": 20.0,  # beyond the 15 deg half-FOV
    })
    with pytest.raises(LinkUnavailable):
        Simulation(cfg)
    # radio-only architectures do not care
    Simulation(_cfg(**{
        "run.architecture": "plf",
        "lifi.angular_deviation_deg": 20.0,
    }))


# -- stepping ---------------------------------------------------------


def test_step_enforces_tti_order():
    sim = Simulation(_ideal())
    sim.step(0)
    step(sim, 1)
    with pytest.raises(ValueError, match="out of order"):
        sim.step(1)
    with pytest.raises(ValueError, match="out of order"):
        sim.step(3)
    sim.step()  # unnumbered step continues from 1


def test_generation_cadence_and_source():
    log, summary = run(_ideal(**{"run.architecture": "plf"}))
    gens = [ev for ev in log.events if ev[0] == "gen"]
    # 10 packets per 100-TTI period over the 2000-TTI horizon [0, 2000)
    assert len(gens) == 200
    assert [ev[1] for ev in gens] == list(range(0, 2000, 10))
    assert all(ev[2] == V(1, 1) for ev in gens)
    # post-warmup: generated at >= 1000 ms
    assert summary.generated == 100


def test_event_ttis_are_nondecreasing():
    log, _ = run(_ideal())
    ttis = [ev[1] for ev in log.events]
    assert all(a <= b for a, b in zip(ttis, ttis[1:]))


def test_zero_duration_run_is_empty_but_valid():
    log, summary = run(_ideal(**{"run.duration_s": 0.0}))
    assert log.events == []
    assert summary.samples == 0 and summary.generated == 0
    assert summary.mean_ms is None and summary.pdr is None


# -- architecture-specific behaviour -----------------------------------


def test_hybrid_routes_first_hop_optically():
    log, _ = run(_ideal())
    lifi = [ev for ev in log.events if ev[0] == "lifi_tx"]
    gens = [ev for ev in log.events if ev[0] == "gen"]
    assert len(lifi) == len(gens)  # one optical departure per packet
    assert all(ev[2] == V(1, 1) and ev[3] == V(1, 6) for ev in lifi)
    assert all(ev[5] < 1.0 for ev in lifi)  # sub-microsecond latency


def test_radio_architectures_never_use_the_optical_link():
    for arch in ("plf", "bdl"):
        log, _ = run(_ideal(**{"run.architecture": arch}))
        assert not any(ev[0] == "lifi_tx" for ev in log.events)


def test_e2e_traces_span_leader_to_tail():
    for arch, hops in (("plf", 10), ("bdl", 6), ("hybrid", 6)):
        log, summary = run(_ideal(**{"run.architecture": arch}))
        e2es = [ev for ev in log.events if ev[0] == "e2e"]
        assert summary.samples > 0
        for ev in e2es:
            trace = ev[5]
            assert trace[0][0] == V(1, 1)
            assert trace[-1][0] == V(1, 10)
            assert len(trace) == hops
            times = [ms for _, ms in trace]
            assert all(a < b for a, b in zip(times, times[1:]))
            assert ev[4] == pytest.approx(times[-1] - ev[3], abs=5e-4)


def test_plf_slower_than_bdl_slower_than_hybrid_on_one_seed():
    means = {}
    for arch in ("plf", "bdl", "hybrid"):
        _, summary = run(_ideal(**{"run.architecture": arch, "run.seed": 3}))
        means[arch] = summary.mean_ms
    assert means["hybrid"] < means["bdl"] < means["plf"]


# -- determinism and conservation --------------------------------------


def test_identical_config_gives_byte_identical_logs():
    cfg = _cfg(**{"run.seed": 5})
    log_a, sum_a = run(cfg)
    log_b, sum_b = run(cfg)
    assert list(log_a.to_lines()) == list(log_b.to_lines())
    assert sum_a == sum_b


def test_different_seed_changes_the_log():
    lines_1 = list(run(_cfg(**{"run.seed": 1}))[0].to_lines())
    lines_2 = list(run(_cfg(**{"run.seed": 2}))[0].to_lines())
    assert lines_1 != lines_2


def test_packet_conservation_under_contention():
    log, summary = run(_cfg(**{"run.seed": 9}))
    counts = recount_from_events(log)
    assert counts == log.counters
    assert counts["generated"] == (
        counts["completed"] + counts["lost"] + counts["inflight"]
    )
    assert summary.generated == summary.completed + summary.lost + summary.inflight


def test_ideal_channel_loses_nothing():
    log, summary = run(_ideal(**{"run.seed": 4}))
    assert log.counters["lost"] == 0
    assert log.counters["inflight"] == 0
    assert summary.pdr == 1.0


def test_grant_events_respect_the_selection_window():
    log, _ = run(_cfg(**{"run.seed": 6}))
    kinds = set()
    for ev in log.events:
        if ev[0] != "grant":
            continue
        _, tti, _, anchor, subch, rri, counter, kind = ev
        kinds.add(kind)
        assert 0 <= subch < 4
        assert 5 <= counter <= 15
        if kind in ("initial", "reselect"):
            assert 1 <= anchor - tti <= 20
        else:
            assert kind == "keep" and anchor - tti == rri
    assert "initial" in kinds


def test_log_metadata_names_the_run():
    cfg = _cfg(**{"run.architecture": "bdl", "run.seed": 11})
    log, _ = run(cfg)
    assert log.meta["arch"] == "bdl"
    assert log.meta["seed"] == "11"
    assert log.meta["config_hash"] == cfg.config_hash
    assert log.config_lines == cfg.config_lines
