"""Instance runs, density sweeps and report serialisation."""
from __future__ import annotations

import csv
import io
import json
import logging
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .baseline import SearchLimits, SolveResult, solve_baseline
from .bnb import BnbParams, solve_decomposition
from .decomposition import SubgradientParams
from .graph import Graph, erdos_renyi, parse_dimacs

logger = logging.getLogger(__name__)

ALGORITHMS = ("baseline", "reps")
FORMATS = ("json", "csv", "text")
CSV_HEADER = ("instance", "n", "m", "density", "algorithm", "workers", "status",
              "best_value", "dual_bound", "nodes", "iters", "wall_seconds")


class SweepDisagreement(RuntimeError):
    """Two solvers proved different optima on the same instance."""


@dataclass
class RunConfig:
    input_path: str | None = None
    n: int | None = None
    p: float | None = None
    seed: int | None = None
    algorithm: str = "reps"
    workers: int = 1
    ordering_strategy: str = "max_degree"
    limits: SearchLimits = field(default_factory=SearchLimits)
    root_iters: int = 500
    node_iters: int = 50
    output_format: str = "text"

    def __post_init__(self):
        has_path = self.input_path is not None
        has_gen = self.n is not None or self.p is not None
        if has_path == has_gen:
            raise ValueError("give exactly one of an input path or a generator spec (n, p, seed)")
        if has_gen and (self.n is None or self.p is None):
            raise ValueError("generator spec needs both n and p")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.output_format not in FORMATS:
            raise ValueError(f"unknown output format {self.output_format!r}")

    def bnb_params(self) -> BnbParams:
        return BnbParams(
            limits=self.limits,
            sub=SubgradientParams(max_iters=self.node_iters),
            root_sub=SubgradientParams(max_iters=self.root_iters),
            workers=self.workers,
            ordering_strategy=self.ordering_strategy,
        )


@dataclass
class InstanceReport:
    instance: dict
    algorithm: str
    workers: int
    status: str
    best_value: float
    dual_bound: float
    nodes: int
    subgradient_iters_total: int
    wall_seconds: float
    seed_info: dict | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "InstanceReport":
        return cls(**d)


@dataclass
class SweepReport:
    rows: list[InstanceReport]
    metadata: dict

    @classmethod
    def from_dict(cls, d: dict) -> "SweepReport":
        return cls([InstanceReport.from_dict(r) for r in d["rows"]], d["metadata"])


def load_instance(cfg: RunConfig) -> tuple[Graph, str, dict | None]:
    if cfg.input_path is not None:
        path = Path(cfg.input_path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise OSError(f"cannot read {cfg.input_path}: {exc.strerror or exc}") from exc
        return parse_dimacs(text), path.stem, None
    seed = 0 if cfg.seed is None else cfg.seed
    g = erdos_renyi(cfg.n, cfg.p, seed)
    return g, f"er_n{cfg.n}_p{cfg.p:g}_s{seed}", {"seed": seed, "p": cfg.p}


def solve_instance(g: Graph, cfg: RunConfig) -> SolveResult:
    if cfg.algorithm == "baseline":
        return solve_baseline(g, limits=cfg.limits)
    return solve_decomposition(g, params=cfg.bnb_params())


def _report(g: Graph, name: str, seed_info, cfg: RunConfig, res: SolveResult, wall: float):
    return InstanceReport(
        instance={"name": name, "n": g.n, "m": g.m, "density": round(g.density, 6)},
        algorithm=cfg.algorithm,
        workers=cfg.workers if cfg.algorithm == "reps" else 1,
        status=res.status,
        best_value=res.best_value,
        dual_bound=res.dual_bound,
        nodes=res.nodes,
        subgradient_iters_total=res.iterations,
        wall_seconds=round(wall, 6),
        seed_info=seed_info,
    )


def run_instance_full(cfg: RunConfig) -> tuple[InstanceReport, SolveResult]:
    g, name, seed_info = load_instance(cfg)
    t0 = time.perf_counter()
    res = solve_instance(g, cfg)
    wall = time.perf_counter() - t0
    return _report(g, name, seed_info, cfg, res, wall), res


def run_instance(cfg: RunConfig) -> InstanceReport:
    """Load or generate the instance, solve it and fill the report.

    Wall time covers the solver call only.
    """
    return run_instance_full(cfg)[0]


def exit_code(report: InstanceReport) -> int:
    return 0 if report.status == "optimal" else 2


def parse_densities(spec: str) -> list[float]:
    """``"a:b:step"`` (inclusive) or a comma list."""
    spec = spec.strip()
    if not spec:
        return []
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"density range must be a:b:step, got {spec!r}")
        a, b, step = map(float, parts)
        if step <= 0:
            raise ValueError("density step must be positive")
        out = []
        k = 0
        while a + k * step <= b + 1e-9:
            out.append(round(a + k * step, 10))
            k += 1
    else:
        out = [float(x) for x in spec.split(",")]
    for p in out:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"density {p} outside [0, 1]")
    return out


def density_sweep(cfg: RunConfig, densities, seeds_per_density: int, algorithms=ALGORITHMS,
                  workers_list=(1,)) -> SweepReport:
    """Run every (p, seed, algorithm, workers) cell on ``erdos_renyi(n, p, base_seed + k)``.

    Cells run one after another. Raises :class:`SweepDisagreement` if two
    optimal cells of one instance report different values.
    """
    base_seed = cfg.seed or 0
    rows = []
    for p in densities:
        for k in range(seeds_per_density):
            seed = base_seed + k
            cells = []
            for alg in algorithms:
                for workers in (workers_list if alg == "reps" else (1,)):
                    cell = RunConfig(n=cfg.n, p=p, seed=seed, algorithm=alg, workers=workers,
                                     ordering_strategy=cfg.ordering_strategy, limits=cfg.limits,
                                     root_iters=cfg.root_iters, node_iters=cfg.node_iters)
                    rep = run_instance(cell)
                    logger.info("p=%g seed=%d %s/%d: %s %g in %.3fs", p, seed, alg, workers,
                                rep.status, rep.best_value, rep.wall_seconds)
                    cells.append(rep)
            optimal = {r.best_value for r in cells if r.status == "optimal"}
            if len(optimal) > 1:
                dump = json.dumps([asdict(r) for r in cells], indent=2)
                raise SweepDisagreement(f"optimal values disagree on n={cfg.n} p={p} seed={seed}:\n{dump}")
            rows.extend(cells)
    metadata = {
        "n": cfg.n,
        "densities": list(densities),
        "seeds_per_density": seeds_per_density,
        "base_seed": base_seed,
        "algorithms": list(algorithms),
        "workers": list(workers_list),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "tool_version": __version__,
    }
    return SweepReport(rows, metadata)


def _fmt_value(x: float) -> str:
    x = float(x)
    return str(int(x)) if x.is_integer() else repr(x)


def _csv_row(r: InstanceReport) -> list[str]:
    inst = r.instance
    return [inst["name"], str(inst["n"]), str(inst["m"]), f"{inst['density']:.6f}", r.algorithm,
            str(r.workers), r.status, _fmt_value(r.best_value), _fmt_value(r.dual_bound),
            str(r.nodes), str(r.subgradient_iters_total), f"{r.wall_seconds:.6f}"]


def emit_report(report: InstanceReport | SweepReport, fmt: str = "text") -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    rows = report.rows if isinstance(report, SweepReport) else [report]
    if fmt == "json":
        return json.dumps(asdict(report), indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(_csv_row(r) for r in rows)
        return buf.getvalue()
    table = [list(CSV_HEADER)] + [_csv_row(r) for r in rows]
    widths = [max(len(row[i]) for row in table) for i in range(len(CSV_HEADER))]
    lines = ["  ".join(cell.rjust(wd) if i else cell.ljust(wd) for i, (cell, wd)
                       in enumerate(zip(row, widths))).rstrip() for row in table]
    return "\n".join(lines) + "\n"
