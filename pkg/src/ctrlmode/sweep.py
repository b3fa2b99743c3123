"""Parameter sweeps over generated networks, one CSV row per (k, rep).

Every cell is independent: generate, classify, alter, verify. Rows come out
sorted by ``(k, rep)`` whatever order the cells finish in, and a fixed base
seed reproduces the file byte for byte.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .alter import apply_and_verify, plan_for
from .control import CENTRALIZED, DISTRIBUTED, INPUT, REDUNDANT, classify, components
from .generate import GenParams, GeneratorError, generate
from .matching import maximum_matching

__all__ = ["SCHEMA_LINE", "SweepConfig", "SweepRecord", "cell_seed", "k_values", "run_sweep", "write_csv"]

SCHEMA_LINE = "# ctrlmode-sweep v1"
BOTH = "both"


@dataclass(frozen=True)
class SweepRecord:
    model: str
    n: int
    k_target: float
    k_actual: float
    rep: int
    seed: int
    nu: int = 0
    n_d: float = 0.0
    i_d: float = 0.0
    cc_input_max_frac: float = 0.0
    cc_redundant_max_frac: float = 0.0
    mode_before: str = ""
    flip_direction: str = ""
    removed: int = 0
    p_removed: float = 0.0
    delta_nd: float = 0.0
    efficiency: float | None = None  # delta_nd / p_removed
    mode_after: str = ""
    status: str = "ok"

    @classmethod
    def header(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def row(self) -> list:
        out = []
        for v in asdict(self).values():
            if v is None:
                out.append("")
            elif isinstance(v, float):
                out.append(f"{v:.6g}")
            else:
                out.append(v)
        return out


@dataclass(frozen=True)
class SweepConfig:
    model: str = "sf"
    n: int = 2000
    k_min: float = 5.0
    k_max: float = 40.0
    k_step: float = 5.0
    reps: int = 20
    seed: int = 0
    direction: str = BOTH
    gamma_in: float = 3.0
    gamma_out: float = 3.0
    break_all_cycles: bool = False

    def validate(self) -> None:
        if self.direction not in (CENTRALIZED, DISTRIBUTED, BOTH):
            raise ValueError(f"unknown direction {self.direction!r}")
        if self.k_step <= 0 or self.k_max < self.k_min:
            raise ValueError("need k_step > 0 and k_max >= k_min")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")


def k_values(k_min: float, k_max: float, k_step: float) -> list[float]:
    count = int(np.floor((k_max - k_min) / k_step + 1e-9)) + 1
    return [round(k_min + i * k_step, 10) for i in range(count)]


def cell_seed(base: int, k_index: int, rep: int) -> int:
    ss = np.random.SeedSequence(base, spawn_key=(k_index, rep))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_cell(cfg: SweepConfig, k: float, rep: int, seed: int) -> SweepRecord:
    base = dict(model=cfg.model, n=cfg.n, k_target=k, rep=rep, seed=seed)
    try:
        g = generate(GenParams(cfg.n, k, cfg.gamma_in, cfg.gamma_out, seed, cfg.model))
    except GeneratorError as exc:
        return SweepRecord(k_actual=0.0, status=f"failed: {exc}", **base)
    m = maximum_matching(g)
    c = classify(g, m)
    cc = components(g, m, c)
    n = g.n
    direction = cfg.direction
    if direction == BOTH:
        direction = CENTRALIZED if c.mode == DISTRIBUTED else DISTRIBUTED
    plan = plan_for(g, direction, cfg.break_all_cycles)
    report, _ = apply_and_verify(g, plan)
    return SweepRecord(
        k_actual=g.average_degree,
        nu=c.nu,
        n_d=c.n_d,
        i_d=c.i_d,
        cc_input_max_frac=len(cc.largest(INPUT)) / n,
        cc_redundant_max_frac=len(cc.largest(REDUNDANT)) / n,
        mode_before=c.mode,
        flip_direction=direction,
        removed=report.n_removed,
        p_removed=report.p,
        delta_nd=report.delta_nd,
        efficiency=report.delta_nd / report.p if report.p > 0 else None,
        mode_after=report.mode_after,
        status="ok" if plan.removals else f"noop: {plan.reason}",
        **base,
    )


def _run_cell_args(args):
    return run_cell(*args)


def run_sweep(cfg: SweepConfig, jobs: int = 1) -> list[SweepRecord]:
    cfg.validate()
    tasks = []
    for i, k in enumerate(k_values(cfg.k_min, cfg.k_max, cfg.k_step)):
        for rep in range(cfg.reps):
            tasks.append((cfg, k, rep, cell_seed(cfg.seed, i, rep)))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            records = list(ex.map(_run_cell_args, tasks, chunksize=4))
    else:
        records = [_run_cell_args(t) for t in tasks]
    return sorted(records, key=lambda r: (r.k_target, r.rep))


def write_csv(records, fh=None, header: bool = True) -> str:
    """Render records as CSV; append-safe when ``header`` is False."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if header:
        buf.write(SCHEMA_LINE + "\n")
        w.writerow(SweepRecord.header())
    for r in records:
        w.writerow(r.row())
    text = buf.getvalue()
    if fh is not None:
        fh.write(text)
    return text
