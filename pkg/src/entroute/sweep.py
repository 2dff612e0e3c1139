"""Batch experiments: random networks x star search, one CSV row per instance."""

from __future__ import annotations

import csv
import json
import sys
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import TextIO

from .netgen import ConfigError, GeneratorConfig, derive_seed, generate, sample_terminals
from .star import t_star_exact

COLUMNS = ("model", "N", "T", "seed", "runtime_ms", "num_pareto_stars", "best_f", "best_xi", "feasible")

_GEN_KEYS = ("p_min", "t_min", "t_max", "sigma_min", "sigma_max", "f_trunc", "alpha")


class SweepConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    models: tuple[tuple[str, float], ...]  # (model, avg_degree)
    N: tuple[int, ...]
    T: int
    instances: int
    master_seed: int
    params: tuple[tuple[str, float], ...] = ()


@dataclass(frozen=True)
class SweepRecord:
    model: str
    N: int
    T: int
    seed: int
    runtime_ms: float | None
    num_pareto_stars: int
    best_f: float | None
    best_xi: float | None
    feasible: bool


@dataclass(frozen=True)
class _Task:
    model: str
    avg_degree: float
    N: int
    T: int
    seed: int
    params: tuple[tuple[str, float], ...]
    timing: bool


def parse_sweep_config(doc: dict) -> SweepConfig:
    if not isinstance(doc, dict):
        raise SweepConfigError("sweep config must be a JSON object")
    try:
        models = []
        for m in doc["models"]:
            if isinstance(m, str):
                raise SweepConfigError(f"model {m!r} needs an avg_degree: use {{\"model\": ..., \"avg_degree\": ...}}")
            models.append((str(m["model"]), float(m["avg_degree"])))
        Ns = tuple(int(n) for n in doc["N"])
        T = int(doc.get("T", 3))
        instances = int(doc["instances"])
        master = int(doc["master_seed"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SweepConfigError):
            raise
        raise SweepConfigError(f"bad sweep config: {exc!r}") from exc
    unknown = set(doc) - {"models", "N", "T", "instances", "master_seed", *_GEN_KEYS}
    if unknown:
        raise SweepConfigError(f"unknown sweep config keys: {sorted(unknown)}")
    params = tuple((k, float(doc[k])) for k in _GEN_KEYS if k in doc)
    if not models or not Ns:
        raise SweepConfigError("sweep config needs at least one model and one N")
    if instances < 1 or T < 2:
        raise SweepConfigError("need instances >= 1 and T >= 2")
    if any(T > n for n in Ns):
        raise SweepConfigError("T exceeds a network size in the grid")
    # Fail early on invalid generator settings.
    for model, deg in models:
        for n in Ns:
            try:
                GeneratorConfig(model=model, N=n, avg_degree=deg, seed=0, **dict(params))
            except ConfigError as exc:
                raise SweepConfigError(str(exc)) from exc
    return SweepConfig(tuple(models), Ns, T, instances, master, params)


def load_sweep_config(path: str) -> SweepConfig:
    with open(path, encoding="utf-8") as fh:
        try:
            return parse_sweep_config(json.load(fh))
        except json.JSONDecodeError as exc:
            raise SweepConfigError(f"malformed sweep config: {exc}") from exc


def _tasks(cfg: SweepConfig, timing: bool) -> list[_Task]:
    tasks = []
    index = 0
    for model, deg in cfg.models:
        for n in cfg.N:
            for _ in range(cfg.instances):
                seed = derive_seed(cfg.master_seed, index)
                tasks.append(_Task(model, deg, n, cfg.T, seed, cfg.params, timing))
                index += 1
    return tasks


def run_instance(task: _Task) -> SweepRecord:
    gen = GeneratorConfig(model=task.model, N=task.N, avg_degree=task.avg_degree, seed=task.seed, **dict(task.params))
    net = generate(gen)
    terminals = sample_terminals(net, task.T, derive_seed(task.seed, 1))
    start = time.perf_counter()
    result = t_star_exact(net, terminals)
    elapsed = (time.perf_counter() - start) * 1000.0
    sols = result.solutions
    return SweepRecord(
        model=gen.model,
        N=task.N,
        T=task.T,
        seed=task.seed,
        runtime_ms=elapsed if task.timing else None,
        num_pareto_stars=len(sols),
        best_f=max((s.f for s in sols), default=None),
        best_xi=max((s.xi for s in sols), default=None),
        feasible=bool(sols),
    )


def run_sweep(cfg: SweepConfig, *, jobs: int = 1, timing: bool = True, progress: bool = False) -> list[SweepRecord]:
    """Run every instance; rows come back in instance order whatever ``jobs`` is."""
    tasks = _tasks(cfg, timing)
    if jobs <= 1:
        rows = []
        for i, task in enumerate(tasks):
            rows.append(run_instance(task))
            if progress:
                print(f"[{i + 1}/{len(tasks)}] {task.model} N={task.N}", file=sys.stderr)
        return rows
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_instance, tasks, chunksize=1))


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def summarize(rows: list[SweepRecord]) -> list[dict]:
    groups: dict[tuple[str, int], list[SweepRecord]] = defaultdict(list)
    for r in rows:
        groups[(r.model, r.N)].append(r)
    out = []
    for (model, n), rs in groups.items():
        feasible = [r for r in rs if r.feasible]
        times = [r.runtime_ms for r in rs if r.runtime_ms is not None]
        out.append(
            {
                "model": model,
                "N": n,
                "instances": len(rs),
                "feasible_fraction": len(feasible) / len(rs),
                "mean_runtime_ms": sum(times) / len(times) if times else None,
                "mean_num_pareto_stars": (
                    sum(r.num_pareto_stars for r in feasible) / len(feasible) if feasible else None
                ),
            }
        )
    return out


def write_sweep(rows: list[SweepRecord], fh: TextIO, *, timing: bool = True) -> None:
    """CSV rows in fixed column order, then one ``# summary`` comment line per (model, N)."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in rows:
        writer.writerow([_fmt(getattr(r, c)) for c in COLUMNS])
    for s in summarize(rows):
        fh.write("# summary," + ",".join(f"{k}={_fmt(v)}" for k, v in s.items()) + "\n")


def read_sweep(fh: TextIO) -> list[dict]:
    """Data rows of a sweep CSV as dicts (summary comment lines skipped)."""
    lines = [line for line in fh if not line.startswith("#")]
    return list(csv.DictReader(lines))

