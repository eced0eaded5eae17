"""Summarization: hashing, percentiles, warmup filtering, CSV."""

import types

import pytest
from hypothesis import given, strategies as st

from platoonsim.events import EventLog
from platoonsim.metrics import (
    RunSummary,
    config_digest,
    e2e_delay_ms,
    export_csv,
    fnv1a_64,
    percentile,
    read_results_csv,
    recount_from_events,
    summarize,
)
from platoonsim.packet import Packet
from platoonsim.scenario import VehicleId


# -- hashing ----------------------------------------------------------


def test_fnv1a_64_reference_vectors():
    assert fnv1a_64(b"") == 0xCBF29CE484222325
    assert fnv1a_64(b"a") == 0xAF63DC4C8601EC8C
    assert fnv1a_64(b"foobar") == 0x85944171F73967E8
    assert fnv1a_64("hello world") == 0x779A65E7023CD2E7
    assert fnv1a_64("abc") == fnv1a_64(b"abc")


def test_config_digest_is_16_hex():
    digest = config_digest("run.seed = 1\n")
    assert len(digest) == 16
    assert int(digest, 16) == fnv1a_64("run.seed = 1\n")
    assert config_digest("") == "cbf29ce484222325"


# -- delay and percentiles --------------------------------------------


def test_e2e_delay_from_trace():
    p = Packet(VehicleId(1, 1), 0, 100.0)
    p = p.with_hop(VehicleId(1, 10), 564.789)
    assert e2e_delay_ms(p) == pytest.approx(464.789)
    assert e2e_delay_ms(p, tail=VehicleId(1, 10)) == pytest.approx(464.789)


def test_e2e_delay_rejects_incomplete_or_wrong_tail():
    p = Packet(VehicleId(1, 1), 0, 100.0)
    with pytest.raises(ValueError, match="not completed"):
        e2e_delay_ms(p)
    q = p.with_hop(VehicleId(1, 5), 200.0)
    with pytest.raises(ValueError, match="ended at"):
        e2e_delay_ms(q, tail=VehicleId(1, 10))


def test_percentile_nearest_rank_oracles():
    assert percentile([10.0, 20.0, 30.0], 50) == 20.0
    assert percentile([10.0, 20.0], 50) == 10.0
    hundred = [float(k) for k in range(1, 101)]
    assert percentile(hundred, 95) == 95.0
    assert percentile(hundred, 99) == 99.0
    assert percentile(hundred, 100) == 100.0
    assert percentile(hundred, 1) == 1.0
    assert percentile([7.0], 50) == 7.0
    assert percentile([30.0, 10.0, 20.0], 50) == 20.0  # sorts internally


def test_percentile_rejects_bad_input():
    with pytest.raises(ValueError, match="empty"):
        percentile([], 50)
    for bad in (0.0, -1.0, 100.5):
        with pytest.raises(ValueError, match="must be in"):
            percentile([1.0], bad)


@given(st.lists(st.floats(0, 1e6), min_size=1, max_size=200))
def test_percentiles_ordered_and_members(values):
    p50 = percentile(values, 50)
    p95 = percentile(values, 95)
    p99 = percentile(values, 99)
    assert p50 <= p95 <= p99
    assert {p50, p95, p99} <= set(values)


# -- summarize --------------------------------------------------------

V = VehicleId  # brevity


def _config(**overrides):
    base = dict(
        warmup_s=1.0,
        tti_ms=1.0,
        architecture="plf",
        seed=3,
        config_hash="0123456789abcdef",
    )
    base.update(overrides)
    return types.SimpleNamespace(**base)


def _synthetic_log():
    log = EventLog(meta={"arch": "plf", "seed": "3"})
    trace1 = ((V(1, 1), 1000.0), (V(1, 6), 1050.5), (V(1, 10), 1464.789))
    log.events = [
        ("gen", 500, V(1, 1), 0),  # pre-warmup: excluded from stats
        ("gen", 1000, V(1, 1), 1),  # boundary itself counts
        ("gen", 1100, V(1, 1), 2),
        ("gen", 1200, V(1, 1), 3),
        ("e2e", 900, 0, 500.0, 400.0, ((V(1, 1), 500.0), (V(1, 10), 900.0))),
        ("e2e", 1464, 1, 1000.0, 464.789, trace1),
        ("lost", 3000, 2, V(1, 7), "expired"),
        # seq 3 never terminates: in flight
    ]
    return log


def test_summarize_applies_warmup_by_generation_time():
    s = summarize(_synthetic_log(), _config())
    assert s.generated == 3  # seq 0 filtered out
    assert s.samples == 1 and s.completed == 1
    assert s.lost == 1 and s.inflight == 1
    assert s.pdr == pytest.approx(1.0 / 3.0)
    assert s.mean_ms == pytest.approx(464.789)
    assert s.p50_ms == s.p95_ms == s.p99_ms == pytest.approx(464.789)
    assert s.arch == "plf" and s.seed == 3
    assert s.config_hash == "0123456789abcdef"


def test_summarize_per_edge_means():
    s = summarize(_synthetic_log(), _config())
    assert s.per_edge_mean_ms == {
        "1.1>1.6": pytest.approx(50.5),
        "1.6>1.10": pytest.approx(414.289),
    }


def test_summarize_empty_run_has_no_stats():
    log = EventLog()
    s = summarize(log, _config())
    assert s.samples == 0 and s.generated == 0
    assert s.mean_ms is None and s.p50_ms is None
    assert s.p95_ms is None and s.p99_ms is None and s.pdr is None


def test_recount_ignores_warmup():
    counts = recount_from_events(_synthetic_log())
    assert counts == {
        "generated": 4,
        "completed": 2,
        "lost": 1,
        "inflight": 1,
    }


# -- CSV --------------------------------------------------------------


def _summary(arch, seed, mean=200.0):
    return RunSummary(
        arch=arch,
        seed=seed,
        samples=590,
        mean_ms=mean,
        p50_ms=mean - 1.0,
        p95_ms=mean + 50.0,
        p99_ms=mean + 80.0,
        pdr=1.0,
        generated=590,
        completed=590,
        lost=0,
        inflight=0,
        config_hash="00ff00ff00ff00ff",
    )


def test_export_csv_golden_bytes(tmp_path):
    path = tmp_path / "results.csv"
    # deliberately unsorted input: export sorts by (arch, seed)
    export_csv([_summary("plf", 2), _summary("bdl", 1, 250.5)], path)
    assert path.read_bytes() == (
        b"arch,seed,samples,mean_ms,p50_ms,p95_ms,p99_ms,pdr,config_hash\n"
        b"bdl,1,590,250.500,249.500,300.500,330.500,1.000,00ff00ff00ff00ff\n"
        b"plf,2,590,200.000,199.000,250.000,280.000,1.000,00ff00ff00ff00ff\n"
    )


def test_export_csv_none_stats_render_empty(tmp_path):
    path = tmp_path / "results.csv"
    empty = RunSummary(
        arch="plf", seed=1, samples=0, mean_ms=None, p50_ms=None,
        p95_ms=None, p99_ms=None, pdr=None, generated=0, completed=0,
        lost=0, inflight=0, config_hash="ab" * 8,
    )
    export_csv([empty], path)
    assert path.read_text().splitlines()[1] == (
        "plf,1,0,,,,,," + "ab" * 8
    )


def test_export_csv_round_trips(tmp_path):
    path = tmp_path / "results.csv"
    export_csv([_summary("hybrid", 7, 201.25)], path)
    rows = read_results_csv(path)
    assert rows == [
        {
            "arch": "hybrid",
            "seed": 7,
            "samples": 590,
            "mean_ms": 201.25,
            "p50_ms": 200.25,
            "p95_ms": 251.25,
            "p99_ms": 281.25,
            "pdr": 1.0,
            "config_hash": "00ff00ff00ff00ff",
        }
    ]


def test_export_csv_rejects_empty_list(tmp_path):
    with pytest.raises(ValueError, match="no run summaries"):
        export_csv([], tmp_path / "results.csv")


def test_read_results_rejects_foreign_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError, match="header"):
        read_results_csv(path)
