"""``cover`` command line tool.

Exit status: 0 on success, 2 when a verification fails, 1 on any error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .covering import Cover, CoverTooLargeError, naive_cover
from .kernels import FAMILIES, KernelError, KernelSpec
from .lowerbound import combinatorial_bound, hamming_count, packing_certificate, witness_grid
from .oracle import verify_cover
from .pipeline import PipelineConfig, build_cover
from .sampling import SampleSizeConfig, cover_sample_size, draw_sample, kde_sample_size
from .signatures import PointSetError, load_points, save_points
from .terminal_jl import EmbeddingInfeasible, SolverConfig, embed_with_retries

log = logging.getLogger("kernelcover")

COMMANDS = ("build", "verify", "sample", "embed", "lowerbound", "bound", "bench")
EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    report: str | None = None
    kernel: str = "gaussian"
    sigma: float = 1.0
    trunc_tau: float = 0.1
    eps: float | None = None
    delta: float = 0.1
    seed: int = 0
    trials: int = 10_000
    C_vc: float = 0.5
    C_rec: float = 1.0
    C_pd: float = 1.0 / 49.0
    C_jl: float = 8.0
    max_iters: int = 5000
    feas_tol: float = 1e-6
    threads: int = 1
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.input is not None and not Path(self.input).exists():
            raise UsageError(f"input file not found: {self.input}")
        if self.eps is not None and not (0.0 < self.eps < 1.0) and self.command not in ("bound", "lowerbound"):
            raise UsageError(f"--eps must lie in (0, 1), got {self.eps}")
        if not (0 <= self.seed < 2**64):
            raise UsageError("--seed must be an unsigned 64-bit integer")

    def kernel_spec(self) -> KernelSpec:
        return KernelSpec(self.kernel, self.sigma, self.trunc_tau)

    def sample_cfg(self, mode: str = "vc") -> SampleSizeConfig:
        return SampleSizeConfig(mode, self.C_vc, self.C_rec, self.C_pd, self.delta)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def _kernel_flags(p):
    p.add_argument("--kernel", default="gaussian", help=f"one of {', '.join(FAMILIES)}")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--trunc-tau", type=float, default=0.1)


def _const_flags(p):
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--c-vc", type=float, default=0.5)
    p.add_argument("--c-rec", type=float, default=1.0)
    p.add_argument("--c-pd", type=float, default=1.0 / 49.0)
    p.add_argument("--c-jl", type=float, default=8.0)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cover", description="Covers of kernel range spaces.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--threads", type=int, default=None)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="construct a cover")
    p.add_argument("--input", required=True)
    _kernel_flags(p)
    _const_flags(p)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=("pipeline", "naive"), default="pipeline")
    p.add_argument("--mode", choices=("vc", "pd", "recursive"), default="vc")
    p.add_argument("--max-points", type=int, default=2_000_000)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--feas-tol", type=float, default=1e-6)
    p.add_argument("--out", required=True)
    p.add_argument("--report")

    p = sub.add_parser("verify", help="Monte Carlo check of a cover")
    p.add_argument("--input", required=True)
    p.add_argument("--cover", required=True)
    p.add_argument("--eps", type=float, help="threshold (default: the cover's epsilon)")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--report")

    p = sub.add_parser("sample", help="sample sizes and random cover-samples")
    p.add_argument("--input")
    p.add_argument("--dim", type=int)
    _kernel_flags(p)
    p.add_argument("--mode", choices=("vc", "pd", "recursive", "kde"), default="vc")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--c", type=float, help="constant for the chosen mode")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = sub.add_parser("embed", help="terminal embedding of query points")
    p.add_argument("--input", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--eps-prime", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--c-jl", type=float, default=8.0)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--feas-tol", type=float, default=1e-6)
    p.add_argument("--out", required=True)
    p.add_argument("--report")

    p = sub.add_parser("lowerbound", help="level-set witness grid and packing")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--out")

    p = sub.add_parser("bound", help="combinatorial lower bound")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--dim", type=int, required=True)

    p = sub.add_parser("bench", help="sweep an (n, d, eps) grid from a TOML file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    return parser


def _threads(arg) -> int:
    env = os.environ.get("COVER_THREADS")
    if env:
        return max(1, int(env))
    return max(1, arg or os.cpu_count() or 1)


def config_from_args(args) -> RunConfig:
    ns = vars(args)
    known = {f for f in RunConfig.__dataclass_fields__}
    rename = {"out": "output", "c_vc": "C_vc", "c_rec": "C_rec", "c_pd": "C_pd", "c_jl": "C_jl"}
    kw, extra = {}, {}
    for k, v in ns.items():
        k2 = rename.get(k, k)
        if k2 in known and k2 not in ("threads", "extra"):
            if v is not None:
                kw[k2] = v
        elif k not in ("verbose", "threads"):
            extra[k] = v
    cfg = RunConfig(threads=_threads(ns.get("threads")), extra=extra, **kw)
    cfg.validate()
    return cfg


def _write_report(path, payload):
    if path:
        Path(path).write_text(json.dumps(payload, indent=2, default=_jsonable))


def _jsonable(o):
    if isinstance(o, KernelSpec):
        return o.to_dict()
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


def cmd_build(cfg: RunConfig) -> int:
    spec = cfg.kernel_spec()
    X = load_points(cfg.input)
    t0 = time.perf_counter()
    if cfg.extra["method"] == "naive":
        cover = naive_cover(spec, X, cfg.eps, threads=cfg.threads, max_points=cfg.extra["max_points"], seed=cfg.seed)
    else:
        pcfg = PipelineConfig(cfg.sample_cfg(cfg.extra["mode"]), cfg.C_jl,
                              SolverConfig(cfg.max_iters, cfg.feas_tol),
                              max_points=cfg.extra["max_points"], threads=cfg.threads)
        cover = build_cover(spec, X, cfg.eps, pcfg, seed=cfg.seed)
    cover.meta["seed"] = cfg.seed
    cover.save(cfg.output)
    meta = cover.meta
    report = {
        "config": asdict(cfg),
        "S_size": meta.get("sample_size"),
        "m": meta.get("m"),
        "QS_size": meta.get("QS_size"),
        "Q_size": meta.get("Q_size"),
        "Q_prime_size": len(cover),
        "warnings": meta.get("warnings", 0),
        "wall_time": time.perf_counter() - t0,
    }
    _write_report(cfg.report, report)
    print(f"cover with {len(cover)} points written to {cfg.output}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    X = load_points(cfg.input)
    cover = Cover.load(cfg.extra["cover"])
    spec = cover.meta.get("kernel") or cfg.kernel_spec()
    eps = cfg.eps if cfg.eps is not None else cover.meta.get("epsilon")
    if eps is None:
        raise UsageError("cover file has no epsilon; pass --eps")
    rep = verify_cover(spec, X, cover, eps, cfg.trials, cfg.seed)
    _write_report(cfg.report, {"config": asdict(cfg), **rep.to_dict()})
    status = "PASS" if rep.passed else "FAIL"
    print(f"{status}: max covering error {rep.max_error:.6g} (threshold {eps}) worst witness {rep.worst_witness}")
    return EXIT_OK if rep.passed else EXIT_FAILED


def cmd_sample(cfg: RunConfig) -> int:
    spec = cfg.kernel_spec()
    mode = cfg.extra["mode"]
    c = cfg.extra.get("c")
    X = load_points(cfg.input) if cfg.input else None
    d = X.d if X is not None else cfg.extra.get("dim")
    consts = {"vc": "C_vc", "pd": "C_pd", "recursive": "C_rec", "kde": "C_rec"}
    scfg = SampleSizeConfig("recursive" if mode == "kde" else mode, cfg.C_vc, cfg.C_rec, cfg.C_pd, cfg.delta)
    if c is not None:
        scfg = SampleSizeConfig(scfg.mode, **{**{k: getattr(scfg, k) for k in ("C_vc", "C_rec", "C_pd")},
                                             consts[mode]: c}, delta=cfg.delta)
    if mode == "kde":
        size = kde_sample_size(spec, cfg.eps, scfg)
    else:
        if mode == "vc" and d is None:
            raise UsageError("vc mode needs --input or --dim")
        size = cover_sample_size(spec, cfg.eps, scfg, d or 1)
    print(size)
    if X is not None and cfg.output:
        save_points(cfg.output, draw_sample(X, size, cfg.seed).points)
    return EXIT_OK


def cmd_embed(cfg: RunConfig) -> int:
    S = load_points(cfg.input)
    Q = load_points(cfg.extra["queries"])
    emb, images, redraws = embed_with_retries(
        S, Q.points, cfg.extra["eps_prime"], cfg.seed, C_jl=cfg.C_jl,
        solver_cfg=SolverConfig(cfg.max_iters, cfg.feas_tol))
    save_points(cfg.output, images)
    _write_report(cfg.report, {"config": asdict(cfg), "m": emb.m, "redraws": redraws})
    print(f"{len(images)} points embedded into R^{emb.m + 1} ({redraws} redraws)")
    return EXIT_OK


def cmd_lowerbound(cfg: RunConfig) -> int:
    d = cfg.extra["dim"]
    grid = witness_grid(cfg.eps, d)
    cert = packing_certificate(KernelSpec("gaussian", 1.0), grid)
    out = {
        "epsilon": cfg.eps,
        "dim": d,
        "indices": list(grid.indices),
        "corners": grid.corners.tolist(),
        "index_vectors": grid.index_vectors.tolist(),
        "max_residual": grid.max_residual,
        "annulus_cells": grid.annulus_cells,
        "packing_size": cert.size,
        "packing_witnesses": cert.witnesses.tolist(),
    }
    if cfg.output:
        Path(cfg.output).write_text(json.dumps(out))
    print(f"{len(grid.corners)} corners, {grid.annulus_cells} cells, packing size {cert.size}")
    return EXIT_OK


def cmd_bound(cfg: RunConfig) -> int:
    d = cfg.extra["dim"]
    M = combinatorial_bound(cfg.eps, d)
    N = hamming_count(d, cfg.eps)
    print(f"M={M:.10g}")
    print(f"N={N}")
    print(f"2^d/N={2**d / N:.10g}")
    return EXIT_OK


def cmd_bench(cfg: RunConfig) -> int:
    from .signatures import PointSet

    try:
        import tomllib
    except ModuleNotFoundError:  # Python < 3.11
        import tomli as tomllib

    conf = tomllib.loads(Path(cfg.extra["config"]).read_text())
    grid = conf.get("grid", conf)
    spec = KernelSpec(grid.get("kernel", "gaussian"), float(grid.get("sigma", 1.0)))
    method = grid.get("method", "naive")
    trials = int(grid.get("trials", 2000))
    seed = int(grid.get("seed", 0))
    rows = []
    for n in grid.get("n", [50]):
        for d in grid.get("d", [2]):
            for eps in grid.get("eps", [0.3]):
                rng = np.random.default_rng([seed, n, d])
                X = PointSet(rng.uniform(0, 1, (n, d)))
                t0 = time.perf_counter()
                row = {"n": n, "d": d, "eps": eps, "method": method}
                try:
                    if method == "pipeline":
                        cover = build_cover(spec, X, eps, seed=seed)
                    else:
                        cover = naive_cover(spec, X, eps)
                    rep = verify_cover(spec, X, cover, eps, trials, seed)
                    row.update(cover_size=len(cover), max_error=rep.max_error, passed=rep.passed, error="")
                except (CoverTooLargeError, EmbeddingInfeasible) as e:
                    row.update(cover_size="", max_error="", passed=False, error=str(e))
                row["wall_time"] = time.perf_counter() - t0
                rows.append(row)
    with open(cfg.output, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    print(f"{len(rows)} runs written to {cfg.output}")
    return EXIT_OK


HANDLERS = {
    "build": cmd_build, "verify": cmd_verify, "sample": cmd_sample, "embed": cmd_embed,
    "lowerbound": cmd_lowerbound, "bound": cmd_bound, "bench": cmd_bench,
}


def run(cfg: RunConfig) -> int:
    return HANDLERS[cfg.command](cfg)


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(config_from_args(args))
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"cover: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (KernelError, PointSetError, CoverTooLargeError, EmbeddingInfeasible, ValueError, OSError) as e:
        print(f"cover: error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
