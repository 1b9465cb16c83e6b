"""Batch verification over the inequality registry.

Instance ``i`` of cell ``(id, dim)`` is drawn from the stream addressed by
``(seed, id, dim, i, attempt)``; invalid draws are retried with the next
attempt number. Cells are independent, so they can be spread over worker
processes without changing any number in the report.
"""

import csv
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import __version__
from .generators import RNG_ALGORITHM
from .inequalities import ALL_IDS, REGISTRY, InvalidInstance, evaluate, parse_id, sample_instance
from .linalg import DEFAULT_TOL, Tolerances

MAX_ATTEMPTS = 100


@dataclass
class CellRecord:
    id: str
    dim: int
    trials: int
    violations: int = 0
    regenerations: int = 0
    exhausted: int = 0  # instances still invalid after MAX_ATTEMPTS draws
    min_slack: float = math.inf
    min_margin: float = math.inf
    max_ratio: float = -math.inf
    worst_instance: dict = None


@dataclass
class SuiteReport:
    tool_version: str
    master_seed: int
    rng_algorithm: str
    tolerances: dict
    cells: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def violations(self):
        return sum(c.violations for c in self.cells)

    @property
    def exhausted(self):
        return sum(c.exhausted for c in self.cells)

    @property
    def passed(self):
        return self.violations == 0 and self.exhausted == 0

    def to_json(self):
        obj = asdict(self)
        for cell in obj["cells"]:
            for key in ("min_slack", "min_margin", "max_ratio"):
                cell[key] = _enc(cell[key])
        return obj

    @classmethod
    def from_json(cls, obj):
        cells = []
        for c in obj["cells"]:
            c = dict(c)
            for key in ("min_slack", "min_margin", "max_ratio"):
                c[key] = _dec(c[key])
            cells.append(CellRecord(**c))
        return cls(
            obj["tool_version"],
            obj["master_seed"],
            obj["rng_algorithm"],
            obj["tolerances"],
            cells,
            obj["wall_time"],
        )

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def write(self, path):
        with open(path, "w") as fh:
            fh.write(self.dumps())

    def write_csv(self, path):
        cols = [
            "id",
            "dim",
            "trials",
            "violations",
            "regenerations",
            "exhausted",
            "min_slack",
            "min_margin",
            "max_ratio",
            "worst_seed",
            "worst_index",
            "worst_attempt",
        ]
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(cols)
            for c in self.cells:
                fp = c.worst_instance or {}
                w.writerow(
                    [c.id, c.dim, c.trials, c.violations, c.regenerations, c.exhausted]
                    + [repr(c.min_slack), repr(c.min_margin), repr(c.max_ratio)]
                    + [fp.get("seed", ""), fp.get("index", ""), fp.get("attempt", "")]
                )


def _enc(x):
    # JSON has no infinities; keep them as strings so the report round-trips
    return x if math.isfinite(x) else repr(x)


def _dec(x):
    return float(x)


def load_report(path):
    with open(path) as fh:
        return SuiteReport.from_json(json.load(fh))


def margin(verdict):
    """Smallest normalized slack over the main comparison and every link.

    Inequality links contribute ``slack / (1 + scale)``, identity links
    ``-|slack| / (1 + scale)``; negative values beyond ``-check_tol`` are
    what a violation looks like.
    """
    out = verdict.slack / (1 + max(abs(verdict.lhs), abs(verdict.rhs)))
    if REGISTRY[verdict.id].kind == "identity":
        out = -abs(out)
    for link in verdict.chain:
        s = link.slack / (1 + max(abs(link.lhs), abs(link.rhs)))
        out = min(out, -abs(s) if link.identity else s)
    return out


def run_cell(id_, dim, trials, seed, tol=DEFAULT_TOL):
    id_ = parse_id(id_)
    rec = CellRecord(id_.value, int(dim), int(trials))
    worst_key = None
    for i in range(int(trials)):
        verdict = None
        for attempt in range(MAX_ATTEMPTS):
            inst = sample_instance(id_, dim, seed, i, attempt)
            try:
                verdict = evaluate(id_, inst, tol)
                break
            except InvalidInstance:
                rec.regenerations += 1
        if verdict is None:
            rec.exhausted += 1
            continue
        if not verdict.holds:
            rec.violations += 1
        m = margin(verdict)
        rec.min_slack = min(rec.min_slack, verdict.slack)
        rec.min_margin = min(rec.min_margin, m)
        if verdict.rhs > 0:
            rec.max_ratio = max(rec.max_ratio, verdict.lhs / verdict.rhs)
        key = (verdict.holds, m)
        if worst_key is None or key < worst_key:
            worst_key, rec.worst_instance = key, dict(inst.fingerprint)
    return rec


def _run_cell_args(args):
    id_, dim, trials, seed, tol = args
    return run_cell(id_, dim, trials, seed, Tolerances(**tol))


def worker_count():
    raw = os.environ.get("BUZANO_LAB_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"BUZANO_LAB_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError("BUZANO_LAB_THREADS must be non-negative")
    return n if n > 0 else (os.cpu_count() or 1)


def suite_run(ids=None, dims=(2, 3, 4, 8, 16), trials=1000, seed=42, tol=DEFAULT_TOL, workers=None):
    """Evaluate ``trials`` instances of every (id, dim) cell and aggregate."""
    if int(trials) < 1:
        raise ValueError("trials must be at least 1")
    ids = ALL_IDS if ids is None else [parse_id(i) for i in ids]
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise ValueError("dimensions must be positive")
    if not 0 <= int(seed) < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    jobs = [(i.value, d, int(trials), int(seed), tol.as_dict()) for i in ids for d in dims]
    workers = worker_count() if workers is None else int(workers)
    start = time.perf_counter()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            cells = list(pool.map(_run_cell_args, jobs))
    else:
        cells = [_run_cell_args(job) for job in jobs]
    return SuiteReport(
        tool_version=__version__,
        master_seed=int(seed),
        rng_algorithm=RNG_ALGORITHM,
        tolerances=tol.as_dict(),
        cells=cells,
        wall_time=time.perf_counter() - start,
    )
