"""Configuration-driven command line front end.

Usage:
    lps <task> --config <path> [--seed S] [--out PATH] [--format csv|jsonl]
        [--threads N] [--no-timestamp]

Tasks: basis, kernel, gfun, verify, czscan, lemmas.  The config file is flat
``key = value`` text mirroring RunConfig; unknown keys are errors (exit 2).
Reports are CSV or JSON-lines with floats at 17 significant digits, so a
seeded run reproduces byte-identically (the timestamp header line can be
suppressed).  Exit status 0 means every assertion of the task passed; 1 means
a numerical assertion failed (the worst record is echoed); 2 means the
configuration was invalid.
"""

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import basis as basis_mod
from . import czcheck
from .basis import PLAIN, basis_eval, differentiated
from .czcheck import lemma_suite, random_expansion, riesz_identity_check
from .gfunctions import GFunctionKind, gfun_l2_exact, gfun_l2_norm
from .kernels import (
    KERNEL_TAGS,
    KernelKind,
    ZetaGrid,
    heat_kernel_closed,
    heat_kernel_schlafli,
    heat_kernel_spectral,
    subordination_u_rule,
)
from .measure import as_alpha

__all__ = ["RunConfig", "run", "main"]

TASKS = ("basis", "kernel", "gfun", "verify", "czscan", "lemmas")
THREAD_ENV = "LPS_THREADS"


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    alpha: tuple
    task: str
    dimension: int = 0
    zeta_order: int = 12
    zeta_levels: int = 40
    quad_order: int = 64
    cutoff: int = 8
    count: int = 100
    seed: int | None = None
    box_lo: float = 0.05
    box_hi: float = 10.0
    kind: str = "all"
    estimate: str = "all"
    out: str = ""
    format: str = "csv"
    threads: str = "auto"
    timestamp: bool = True
    refine: bool = False

    def validate(self):
        if self.task not in TASKS:
            raise ConfigError(f"task: unknown task {self.task!r}, expected one of {TASKS}")
        try:
            a = as_alpha(self.alpha)
        except ValueError as exc:
            raise ConfigError(f"alpha: {exc}") from exc
        if self.dimension and self.dimension != a.d:
            raise ConfigError(
                f"dimension: {self.dimension} contradicts alpha of length {a.d}"
            )
        # czscan/lemmas scan the standard estimates, kernel/verify use the
        # integral representation: all need the restricted type-index range
        if self.task in ("czscan", "lemmas", "kernel", "verify") and not a.cz_eligible:
            raise ConfigError(
                f"alpha: task {self.task!r} requires alpha in [-1/2, inf)^d, got {a.components}"
            )
        if self.task != "basis" and self.seed is None:
            raise ConfigError(f"seed: task {self.task!r} samples randomly and needs a seed")
        if self.format not in ("csv", "jsonl"):
            raise ConfigError(f"format: expected csv or jsonl, got {self.format!r}")
        if self.kind != "all" and self.kind not in KERNEL_TAGS:
            raise ConfigError(f"kind: unknown kernel kind {self.kind!r}")
        if self.estimate not in ("all", "growth", "smooth_x", "smooth_y"):
            raise ConfigError(
                f"estimate: expected all, growth, smooth_x or smooth_y, got {self.estimate!r}"
            )
        if self.count < 1:
            raise ConfigError("count: must be >= 1")
        if not 0 < self.box_lo < self.box_hi:
            raise ConfigError("box_lo/box_hi: need 0 < box_lo < box_hi")
        return a

    def thread_count(self) -> int:
        env = os.environ.get(THREAD_ENV)
        raw = env if env else self.threads
        if raw == "auto":
            return min(os.cpu_count() or 1, 8)
        try:
            n = int(raw)
        except ValueError as exc:
            raise ConfigError(f"threads: expected an integer or 'auto', got {raw!r}") from exc
        if n < 1:
            raise ConfigError("threads: must be >= 1")
        return n


_BOOL = {"true": True, "false": False, "yes": True, "no": False, "1": True, "0": False}

_FIELD_PARSERS = {
    "alpha": lambda v: tuple(float(p) for p in v.replace(",", " ").split()),
    "task": str,
    "dimension": int,
    "zeta_order": int,
    "zeta_levels": int,
    "quad_order": int,
    "cutoff": int,
    "count": int,
    "seed": int,
    "box_lo": float,
    "box_hi": float,
    "kind": str,
    "estimate": str,
    "out": str,
    "format": str,
    "threads": str,
    "timestamp": lambda v: _BOOL[v.lower()],
    "refine": lambda v: _BOOL[v.lower()],
}


def parse_config(path: str) -> dict:
    """Flat key = value config text; '#' starts a comment; unknown keys error."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{ln}: expected 'key = value', got {raw.rstrip()!r}")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key not in _FIELD_PARSERS:
                raise ConfigError(f"{path}:{ln}: unknown key {key!r}")
            try:
                values[key] = _FIELD_PARSERS[key](val)
            except (ValueError, KeyError) as exc:
                raise ConfigError(f"{path}:{ln}: bad value for {key}: {val!r}") from exc
    return values


def _fmt(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, (tuple, list, np.ndarray)):
        return "(" + " ".join(format(float(c), ".17g") for c in v) + ")"
    return str(v)


class Report:
    """Row-oriented report with a fixed column order."""

    def __init__(self, columns):
        self.columns = list(columns)
        self.rows = []

    def add(self, **kw):
        self.rows.append([kw.get(c, "") for c in self.columns])

    def write(self, path: str, fmt: str, header_lines):
        with open(path, "w", encoding="utf-8") as fh:
            if fmt == "csv":
                for line in header_lines:
                    fh.write(f"# {line}\n")
                fh.write(",".join(self.columns) + "\n")
                for row in self.rows:
                    fh.write(",".join(_fmt(v) for v in row) + "\n")
            else:
                for line in header_lines:
                    fh.write(json.dumps({"header": line}) + "\n")
                for row in self.rows:
                    rec = {c: (_fmt(v) if isinstance(v, (float, tuple, list, np.ndarray)) else v)
                           for c, v in zip(self.columns, row)}
                    fh.write(json.dumps(rec) + "\n")


def _chunks(n: int, parts: int):
    step = max(1, math.ceil(n / parts))
    return [(s, min(s + step, n)) for s in range(0, n, step)]


def _task_basis(cfg: RunConfig, alpha, report: Report):
    families = [PLAIN] + [differentiated(j) for j in range(1, alpha.d + 1)]
    worst = 0.0
    worst_row = None
    pts, w = basis_mod._quad_grid(alpha, cfg.quad_order)
    for fam in families:
        idx = basis_mod._family_indices(fam, alpha.d, cfg.cutoff)
        vals = np.stack([basis_eval(alpha, fam, k, pts) for k in idx])
        gram = (vals * w) @ vals.T
        dev = np.abs(gram - np.eye(len(idx)))
        fam_name = "plain" if fam.is_plain else f"diff{fam.j}"
        for a in range(len(idx)):
            for b in range(a, len(idx)):
                report.add(family=fam_name, k=idx[a], l=idx[b],
                           gram=float(gram[a, b]), deviation=float(dev[a, b]))
                if dev[a, b] > worst:
                    worst = float(dev[a, b])
                    worst_row = (fam_name, idx[a], idx[b], float(gram[a, b]))
    return worst, worst_row, worst <= 1e-9


def _task_kernel(cfg: RunConfig, alpha, report: Report):
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    worst_row = None
    for _ in range(cfg.count):
        t = float(rng.uniform(0.1, 2.0))
        x = rng.uniform(max(cfg.box_lo, 0.2), min(cfg.box_hi, 4.0), alpha.d)
        y = rng.uniform(max(cfg.box_lo, 0.2), min(cfg.box_hi, 4.0), alpha.d)
        closed = heat_kernel_closed(alpha, t, x, y)
        schlafli = heat_kernel_schlafli(alpha, t, x, y, order=cfg.quad_order)
        spectral = heat_kernel_spectral(alpha, t, x, y, cutoff=60)
        dev = max(abs(schlafli - closed), abs(spectral - closed)) / closed
        report.add(t=t, x=tuple(x), y=tuple(y), closed=closed,
                   schlafli=schlafli, spectral=spectral, rel_dev=float(dev))
        if dev > worst:
            worst = float(dev)
            worst_row = (t, tuple(x), tuple(y), closed)
    return worst, worst_row, worst <= 1e-7


_VERTICAL = ("gVT", "gVP", "gVTmod", "gVPmod")


def _gfun_rows(cfg: RunConfig, alpha, report: Report):
    rng = np.random.default_rng(cfg.seed)
    worst = 0.0
    worst_row = None
    for n in range(cfg.count):
        seed = int(rng.integers(0, 2**31))
        for tag in _VERTICAL:
            mod = tag.endswith("mod")
            fam = differentiated(1) if mod else PLAIN
            e = random_expansion(alpha, fam, nmodes=8, max_level=cfg.cutoff, seed=seed)
            kind = GFunctionKind(tag, j=1) if mod else GFunctionKind(tag)
            norm = gfun_l2_norm(kind, e, order=cfg.quad_order)
            dev = abs(norm - 0.5 * e.l2_norm()) / (0.5 * e.l2_norm())
            report.add(check=f"isometry_{tag}", sample=n, deviation=float(dev))
            if dev > worst:
                worst, worst_row = float(dev), (f"isometry_{tag}", n)
        # horizontal: combined square sum against the spectral closed form
        e = random_expansion(alpha, PLAIN, nmodes=8, max_level=cfg.cutoff, seed=seed + 1)
        quad = sum(gfun_l2_norm(GFunctionKind("gHT", i=i), e, order=cfg.quad_order) ** 2
                   for i in range(1, alpha.d + 1))
        exact = sum(gfun_l2_exact(GFunctionKind("gHT", i=i), e) ** 2
                    for i in range(1, alpha.d + 1))
        dev = abs(quad - exact) / max(exact, 1e-300)
        report.add(check="horizontal_heat_sum", sample=n, deviation=float(dev))
        if dev > worst:
            worst, worst_row = float(dev), ("horizontal_heat_sum", n)
    return worst, worst_row


def _task_gfun(cfg: RunConfig, alpha, report: Report):
    worst, worst_row = _gfun_rows(cfg, alpha, report)
    return worst, worst_row, worst <= 1e-6


def _task_verify(cfg: RunConfig, alpha, report: Report):
    checks = []
    worst, worst_row, ok = _task_kernel(cfg, alpha, report)
    checks.append(("kernel_triple", worst, 1e-7, ok, worst_row))
    w, wr = _gfun_rows(cfg, alpha, report)
    checks.append(("gfun_identities", w, 1e-6, w <= 1e-6, wr))
    # per-mode subordination identity
    u, uw = subordination_u_rule()
    sub_worst = 0.0
    for lam in range(1, 51):
        for t in (0.1, 1.0, 5.0):
            got = float(np.sum(uw * np.exp(-(t * t) * lam / (4.0 * u))))
            sub_worst = max(sub_worst, abs(got - math.exp(-t * math.sqrt(lam))))
    report.add(check="subordination", sample=0, deviation=sub_worst)
    checks.append(("subordination", sub_worst, 1e-10, sub_worst <= 1e-10, None))
    rng = np.random.default_rng(cfg.seed)
    e = random_expansion(alpha, PLAIN, nmodes=10, max_level=cfg.cutoff,
                         seed=int(rng.integers(0, 2**31)))
    xg = np.exp(rng.uniform(math.log(0.2), math.log(4.0), (30, alpha.d)))
    dev = riesz_identity_check(alpha, 1, e, (0.1, 0.5, 1.0, 2.0), xg)
    report.add(check="riesz_identity", sample=0, deviation=dev)
    checks.append(("riesz_identity", dev, 1e-9, dev <= 1e-9, None))
    if alpha.d == 1:
        xs = np.linspace(0.1, 5.0, 60)
        _, _, dev = czcheck.counterexample_profile(alpha.components[0], xs)
        report.add(check="counterexample_profile", sample=0, deviation=dev)
        checks.append(("counterexample_profile", dev, 1e-7, dev <= 1e-7, None))
    bad = [c for c in checks if not c[3]]
    worst = max(c[1] / c[2] for c in checks)  # scaled by each tolerance
    wrow = bad[0] if bad else None
    return worst, wrow, not bad


def _scan_kinds(alpha, kind_name: str):
    d = alpha.d
    out = []
    for tag in KERNEL_TAGS if kind_name == "all" else (kind_name,):
        if tag in ("hT", "hP"):
            out.append(KernelKind(tag, i=1))
        elif tag in ("hTmod", "hPmod"):
            if d < 2:
                continue  # the mixed-derivative kinds need a second coordinate
            out.append(KernelKind(tag, i=2, j=1))
        elif tag in ("dTmod", "dPmod", "hTmodStar", "hPmodStar"):
            out.append(KernelKind(tag, j=1))
        else:
            out.append(KernelKind(tag))
    return out


def _task_czscan(cfg: RunConfig, alpha, report: Report):
    grid = ZetaGrid(order=cfg.zeta_order, levels_zero=cfg.zeta_levels,
                    levels_one=cfg.zeta_levels)
    nthreads = cfg.thread_count()
    x, y = czcheck.sample_pairs(alpha.d, cfg.count, cfg.seed, cfg.box_lo, cfg.box_hi)
    xp = czcheck.sample_perturbed(x, y, cfg.seed + 1)
    yp = czcheck.sample_perturbed(y, x, cfg.seed + 2)
    spans = _chunks(cfg.count, nthreads)

    def scan(kind, which, g):
        # work split by sample index; merge preserves sample order
        def one(span):
            a, b = span
            if which == "growth":
                return czcheck.scan_growth(alpha, kind, grid=g, pairs=(x[a:b], y[a:b]))
            if which == "smooth_x":
                return czcheck.scan_smoothness(alpha, kind, "x", grid=g,
                                               pairs=(x[a:b], y[a:b]), pert=xp[a:b])
            return czcheck.scan_smoothness(alpha, kind, "y", grid=g,
                                           pairs=(x[a:b], y[a:b]), pert=yp[a:b])

        if nthreads == 1 or len(spans) == 1:
            parts = [one(s) for s in spans]
        else:
            with ThreadPoolExecutor(max_workers=nthreads) as pool:
                parts = list(pool.map(one, spans))
        return [r for part in parts for r in part]

    worst_ratio = 0.0
    worst_row = None
    all_finite = True
    stable = True
    which_list = ("growth", "smooth_x", "smooth_y") if cfg.estimate == "all" else (cfg.estimate,)
    for kind in _scan_kinds(alpha, cfg.kind):
        for which in which_list:
            reports = scan(kind, which, grid)
            kmax = max(r.ratio for r in reports)
            if cfg.refine:
                refined = scan(kind, which, grid.refined())
                rmax = max(r.ratio for r in refined)
                drift = abs(rmax - kmax) / max(rmax, 1e-300)
                stable = stable and drift < 0.05
            for r in reports:
                all_finite = all_finite and math.isfinite(r.ratio)
                report.add(kind=r.kind, estimate=which, x=r.x, y=r.y,
                           perturbed=r.perturbed, kernel_norm=r.kernel_norm,
                           ball_measure=r.ball_measure, ratio=r.ratio,
                           constraint_ok=r.constraint_ok)
                if r.ratio > worst_ratio:
                    worst_ratio = r.ratio
                    worst_row = (r.kind, which, r.x, r.y, r.ratio)
    return worst_ratio, worst_row, all_finite and stable


def _task_lemmas(cfg: RunConfig, alpha, report: Report):
    results = lemma_suite(alpha, samples=cfg.count, seed=cfg.seed)
    ok = True
    worst = 0.0
    worst_row = None
    for r in results:
        report.add(lemma=r.name, passed=r.passed, margin=r.margin,
                   samples=r.samples, detail=r.detail)
        ok = ok and r.passed
        if r.margin > worst:
            worst, worst_row = r.margin, (r.name, r.margin)
    return worst, worst_row, ok


_COLUMNS = {
    "basis": ["family", "k", "l", "gram", "deviation"],
    "kernel": ["t", "x", "y", "closed", "schlafli", "spectral", "rel_dev"],
    "gfun": ["check", "sample", "deviation"],
    "verify": ["t", "x", "y", "closed", "schlafli", "spectral", "rel_dev",
               "check", "sample", "deviation"],
    "czscan": ["kind", "estimate", "x", "y", "perturbed", "kernel_norm",
               "ball_measure", "ratio", "constraint_ok"],
    "lemmas": ["lemma", "passed", "margin", "samples", "detail"],
}

_RUNNERS = {
    "basis": _task_basis,
    "kernel": _task_kernel,
    "gfun": _task_gfun,
    "verify": _task_verify,
    "czscan": _task_czscan,
    "lemmas": _task_lemmas,
}


def run(cfg: RunConfig) -> int:
    """Execute the configured task; returns the process exit status."""
    try:
        alpha = cfg.validate()
        cfg.thread_count()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    report = Report(_COLUMNS[cfg.task])
    worst, worst_row, ok = _RUNNERS[cfg.task](cfg, alpha, report)
    elapsed = time.perf_counter() - t0
    out = cfg.out or f"lps_{cfg.task}.{ 'csv' if cfg.format == 'csv' else 'jsonl' }"
    header = [
        f"task={cfg.task} alpha={_fmt(cfg.alpha)} seed={cfg.seed} count={cfg.count}",
    ]
    if cfg.timestamp:
        header.append(f"generated={time.strftime('%Y-%m-%dT%H:%M:%S')}")
    report.write(out, cfg.format, header)
    print(
        f"{cfg.task}: rows={len(report.rows)} worst={worst:.3e} "
        f"wall={elapsed:.2f}s -> {out}"
    )
    if not ok:
        print(f"FAILED: worst record {worst_row}", file=sys.stderr)
        return 1
    return 0


def build_config(args) -> RunConfig:
    values = parse_config(args.config) if args.config else {}
    values["task"] = args.task or values.get("task", "")
    if args.seed is not None:
        values["seed"] = args.seed
    if args.out:
        values["out"] = args.out
    if args.format:
        values["format"] = args.format
    if args.threads:
        values["threads"] = args.threads
    if args.no_timestamp:
        values["timestamp"] = False
    if "alpha" not in values:
        raise ConfigError("alpha: missing (required)")
    return RunConfig(**values)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="lps", description=__doc__)
    parser.add_argument("task", choices=TASKS)
    parser.add_argument("--config", required=False, help="flat key = value config file")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default="")
    parser.add_argument("--format", choices=("csv", "jsonl"), default="")
    parser.add_argument("--threads", default="")
    parser.add_argument("--no-timestamp", action="store_true")
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
