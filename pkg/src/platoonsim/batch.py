"""Running many independent simulations, optionally in parallel.

Each job is one full run (one architecture, one seed).  Jobs never
share state — every worker builds its own world from the picklable
configuration — so results and event logs are byte-identical whether
jobs run inline or across a process pool, and input order is preserved
in the output.

Worker count: the ``PLATOONSIM_THREADS`` environment variable wins,
otherwise the CPU count.  A failing job is captured as an error string
on its result; it never aborts sibling jobs.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import engine
from .metrics import RunSummary

Job = tuple  # (EngineConfig, event-log path or None)


@dataclass(frozen=True)
class JobResult:
    """Outcome of one run: a summary or an error message, never both."""

    arch: str
    seed: int
    summary: RunSummary | None
    log_path: str | None
    error: str | None


def default_workers() -> int:
    """Worker count: PLATOONSIM_THREADS if set, else the CPU count."""
    env = os.environ.get("PLATOONSIM_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(
                f"PLATOONSIM_THREADS must be an integer, got {env!r}"
            ) from None
        if n < 1:
            raise ValueError(f"PLATOONSIM_THREADS must be >= 1, got {n}")
        return n
    return os.cpu_count() or 1


def execute_job(job: Job) -> JobResult:
    """Run one job to completion, writing its event log if requested."""
    config, log_path = job
    try:
        log, summary = engine.run(config)
        if log_path is not None:
            log.write(log_path)
        return JobResult(
            arch=config.architecture,
            seed=config.seed,
            summary=summary,
            log_path=str(log_path) if log_path is not None else None,
            error=None,
        )
    except Exception as exc:  # capture, never kill sibling jobs
        return JobResult(
            arch=config.architecture,
            seed=config.seed,
            summary=None,
            log_path=str(log_path) if log_path is not None else None,
            error=f"{type(exc).__name__}: {exc}",
        )


def run_jobs(jobs: list[Job], max_workers: int | None = None) -> list[JobResult]:
    """Execute all jobs; results align with input order."""
    if max_workers is None:
        max_workers = default_workers()
    if max_workers < 1:
        raise ValueError(f"max_workers must be >= 1, got {max_workers}")
    jobs = list(jobs)
    if max_workers == 1 or len(jobs) <= 1:
        return [execute_job(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(execute_job, jobs))
