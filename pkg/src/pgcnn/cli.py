"""Command-line front end: ``pgcnn {dim,fiber,identities,table}``.

Exit codes: 0 pass, 1 verification failure, 2 usage or config error,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np

from . import config as _config
from .errors import BudgetExceeded, GroupParseError
from .fibers import random_collision_probe, verify_fiber
from .groups import parse_group
from .identities import run_identity_suite
from .jacobian import certify_trial, parse_ring_policy, trial_rng
from .maps import Architecture, sample_parameters
from .poly import monomial_count
from .report import RunConfig, VerificationReport, join_observed
from .rings import QQ

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

TABLE_GRID = (
    ("C2", 4), ("C3", 3), ("C4", 2), ("C2xC2", 2),
    ("C5", 2), ("C6", 2), ("C2xC3", 2), ("S3", 2),
)
DEFAULT_RINGS = {"dim": "fp3", "fiber": "QQ", "identities": "QQ", "table": "fp3+QQ"}


class UsageError(ValueError):
    pass


def _pool_map(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, *zip(*items)))


def _architecture(spec: str, L: int, r: int, cfg: RunConfig) -> Architecture:
    G = parse_group(spec, cfg.max_group_order)
    return Architecture(G, L, r, cfg.max_group_order, cfg.max_monomials)


# workers take plain values so they can run in a process pool

def _dim_trial(spec: str, L: int, r: int, ring: str, cfg: RunConfig, t: int) -> list[dict]:
    arch = _architecture(spec, L, r, cfg)
    reports = certify_trial(arch, parse_ring_policy(ring), cfg.seed, t)
    return [rep.to_dict() for rep in reports]


def _fiber_trial(spec: str, L: int, r: int, ring: str, cfg: RunConfig, t: int) -> list[dict]:
    arch = _architecture(spec, L, r, cfg)
    theta = sample_parameters(arch, QQ, trial_rng(cfg.seed, t))
    out = []
    for R in parse_ring_policy(ring).rings:
        th = theta.to_ring(R)
        rep = verify_fiber(arch, th, seed=cfg.seed, trial=t).to_dict()
        rep["ring"] = R.descriptor
        if cfg.probe_samples:
            probe = random_collision_probe(
                arch, th, cfg.probe_samples, np.random.default_rng([cfg.seed, t, 1]), seed=cfg.seed
            )
            rep["probe"] = probe.to_dict()
        out.append(rep)
    return out


def _dim_rows(spec: str, n: int, L: int, r: int, results: list[dict]) -> list[tuple]:
    rows = []
    for tag in ("phi", "Phi"):
        sel = [d for d in results if d["map"] == tag and not d["superseded"]]
        if sel:
            rows.append((spec, n, L, r, tag, sel[0]["predicted_rank"],
                         join_observed(d["observed_rank"] for d in sel), all(d["passed"] for d in sel)))
    return rows


def _fiber_rows(spec: str, n: int, L: int, r: int, results: list[dict]) -> list[tuple]:
    rows = []
    if not results:
        return rows
    predicted = results[0]["predicted_size"]
    for key, tag in (("phi_matches", "fiber_phi"), ("Phi_matches", "fiber_Phi"), ("distinct_orbits", "fiber_orbits")):
        vals = [d[key] for d in results]
        rows.append((spec, n, L, r, tag, predicted, join_observed(vals), all(v == predicted for v in vals)))
    return rows


def _probe_info(results: list[dict]) -> list[str]:
    out = []
    for d in results:
        probe = d.get("probe")
        if probe:
            out.append(
                f"probe {probe['architecture']} trial {d['trial']}: {probe['samples']} samples, "
                f"{probe['proportional']} proportional, {probe['unpredicted']} unpredicted"
            )
    return out


def _probe_warnings(results: list[dict]) -> list[str]:
    out = []
    for d in results:
        probe = d.get("probe")
        if probe and probe["unpredicted"]:
            out.append(
                f"{probe['architecture']} trial {d['trial']}: {probe['unpredicted']} unpredicted "
                f"projective collisions in {probe['samples']} samples"
            )
    return out


def _require_arch(cfg: RunConfig) -> None:
    missing = [k for k in ("group", "layers", "degree") if getattr(cfg, k) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join('--' + m for m in missing)}")
    if cfg.layers < 1 or cfg.degree < 1:
        raise UsageError("--layers and --degree must be >= 1")


def _validate(cfg: RunConfig) -> None:
    """Turn bad group specs and ring policies into usage errors up front."""
    try:
        if cfg.group is not None:
            parse_group(cfg.group, cfg.max_group_order)
        parse_ring_policy(cfg.ring or DEFAULT_RINGS[cfg.command])
    except BudgetExceeded:
        raise
    except (GroupParseError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_dim(cfg: RunConfig) -> VerificationReport:
    _require_arch(cfg)
    _validate(cfg)
    ring = cfg.ring or DEFAULT_RINGS["dim"]
    arch = _architecture(cfg.group, cfg.layers, cfg.degree, cfg)
    arch.check_phi_budget()
    arch.check_Phi_budget()
    t0 = time.perf_counter()
    items = [(cfg.group, cfg.layers, cfg.degree, ring, cfg, t) for t in range(cfg.trials)]
    results = [d for batch in _pool_map(_dim_trial, items, cfg.jobs) for d in batch]
    rep = VerificationReport(cfg, results)
    rep.csv_rows = _dim_rows(arch.group.spec, arch.n, cfg.layers, cfg.degree, results)
    rep.wall_clock_seconds = time.perf_counter() - t0
    return rep


def cmd_fiber(cfg: RunConfig) -> VerificationReport:
    _require_arch(cfg)
    _validate(cfg)
    ring = cfg.ring or DEFAULT_RINGS["fiber"]
    arch = _architecture(cfg.group, cfg.layers, cfg.degree, cfg)
    arch.check_phi_budget()
    arch.check_Phi_budget()
    t0 = time.perf_counter()
    items = [(cfg.group, cfg.layers, cfg.degree, ring, cfg, t) for t in range(cfg.trials)]
    results = [d for batch in _pool_map(_fiber_trial, items, cfg.jobs) for d in batch]
    rep = VerificationReport(cfg, results, warnings=_probe_warnings(results), info=_probe_info(results))
    rep.csv_rows = _fiber_rows(arch.group.spec, arch.n, cfg.layers, cfg.degree, results)
    rep.wall_clock_seconds = time.perf_counter() - t0
    return rep


def cmd_identities(cfg: RunConfig) -> VerificationReport:
    if cfg.group is None:
        raise UsageError("missing required option: --group")
    _validate(cfg)
    r = cfg.degree or 2
    G = parse_group(cfg.group, cfg.max_group_order)
    if G.order**r > _config.max_group_order(cfg.max_group_order):
        raise BudgetExceeded(f"Kronecker power lives on a group of order {G.order**r}")
    t0 = time.perf_counter()
    results = []
    rows = []
    for R in parse_ring_policy(cfg.ring or DEFAULT_RINGS["identities"]).rings:
        suite = run_identity_suite(G, cfg.trials, cfg.seed, r, R, budget=cfg.max_group_order).to_dict()
        suite["ring"] = R.descriptor
        results.append(suite)
        for res in suite["results"]:
            rows.append((G.spec, G.order, "", r, res["name"], res["trials"], res["holds"], res["passed"]))
    rep = VerificationReport(cfg, results)
    for suite in results:
        rep.info.append(
            f"{suite['ring']}: det(kron_power) exponents measured {suite['kron_exponents']} "
            f"(derived r*n^(r-1) = {suite['derived_kron_exponent']}, printed r*n^r = {suite['stated_kron_exponent']}); "
            f"det(extend_diagonal) exponents measured {suite['ext_exponents']} (stated {suite['stated_ext_exponent']})"
        )
    rep.csv_rows = rows
    rep.wall_clock_seconds = time.perf_counter() - t0
    return rep


def _fits(spec: str, L: int, r: int, cfg: RunConfig) -> bool:
    n = parse_group(spec).order
    m = r ** (L - 1)
    return (
        n**m <= _config.max_group_order(cfg.max_group_order)
        and monomial_count(n, m) <= _config.max_monomials(cfg.max_monomials)
    )


def table_cells(cfg: RunConfig) -> list[tuple[str, int]]:
    """The grid; a row moves to depth ``max_layers_override`` only if that depth fits the budgets."""
    r = cfg.degree or 2
    cells = []
    for spec, L in TABLE_GRID:
        N = cfg.max_layers_override
        if N is not None and N > L and _fits(spec, N, r, cfg):
            L = N
        cells.append((spec, L))
    return cells


def _table_cell(spec: str, L: int, r: int, ring: str, cfg: RunConfig) -> dict:
    t0 = time.perf_counter()
    cell: dict = {"group": spec, "layers": L, "degree": r}
    try:
        dim = [d for t in range(cfg.trials) for d in _dim_trial(spec, L, r, ring, cfg, t)]
        fib = [d for t in range(cfg.trials) for d in _fiber_trial(spec, L, r, "QQ", cfg, t)]
    except BudgetExceeded as exc:
        cell.update(status="budget", passed=False, error=str(exc), dim=[], fiber=[])
    else:
        ok = all(d["passed"] for d in dim if not d["superseded"]) and all(d["passed"] for d in fib)
        cell.update(status="pass" if ok else "fail", passed=ok, dim=dim, fiber=fib)
    cell["wall_clock_seconds"] = time.perf_counter() - t0
    return cell


def cmd_table(cfg: RunConfig) -> VerificationReport:
    _validate(cfg)
    r = cfg.degree or 2
    ring = cfg.ring or DEFAULT_RINGS["table"]
    t0 = time.perf_counter()
    items = [(spec, L, r, ring, cfg) for spec, L in table_cells(cfg)]
    cells = _pool_map(_table_cell, items, cfg.jobs)
    rep = VerificationReport(cfg, cells)
    for cell in cells:
        n = parse_group(cell["group"]).order
        rep.csv_rows += _dim_rows(cell["group"], n, cell["layers"], r, cell["dim"])
        rep.csv_rows += _fiber_rows(cell["group"], n, cell["layers"], r, cell["fiber"])
        rep.warnings += _probe_warnings(cell["fiber"])
        rep.info += _probe_info(cell["fiber"])
        if cell["status"] == "budget":
            rep.budget_exceeded = True
            rep.warnings.append(f"{cell['group']} L={cell['layers']}: {cell['error']}")
    rep.wall_clock_seconds = time.perf_counter() - t0
    return rep


COMMANDS = {"dim": cmd_dim, "fiber": cmd_fiber, "identities": cmd_identities, "table": cmd_table}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pgcnn",
        description="Exact verification of dimension, kernel and fiber claims for polynomial group CNNs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("dim", "certify Jacobian ranks and kernels"),
        ("fiber", "verify the predicted fiber by forward evaluation"),
        ("identities", "randomized group-algebra identity suite"),
        ("table", "run dim and fiber over the reference grid"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--group", help="group spec, e.g. C4, S3, D4, C2xC3")
        p.add_argument("--layers", "-L", type=int)
        p.add_argument("--degree", "-r", type=int)
        p.add_argument("--ring", help="QQ, fp3, fp:<p>, or a '+'-joined combination")
        p.add_argument("--trials", type=int, default=100 if name == "identities" else 3)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-group-order", type=int)
        p.add_argument("--max-monomials", type=int)
        p.add_argument("--output", "-o", help="write the report here ('-' for stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--probe-samples", type=int, default=0,
                       help="random collision probe samples per trial (fiber, table)")
        p.add_argument("--max-layers-override", type=int,
                       help="table: deepen each row up to this depth where budgets allow")
        p.add_argument("--jobs", "-j", type=int, default=1)
    return parser


def summary(rep: VerificationReport) -> str:
    cfg = rep.config
    lines = []
    for row in rep.csv_rows:
        group, n, L, r, tag, predicted, observed, ok = row
        where = f"{group} L={L} r={r}" if L != "" else f"{group} r={r}"
        lines.append(f"{'PASS' if ok else 'FAIL'}  {where:<20} {tag:<28} predicted={predicted} observed={observed}")
    lines += rep.info
    for w in rep.warnings:
        lines.append(f"WARN  {w}")
    lines.append(f"{cfg.command}: {'PASS' if rep.passed else 'FAIL'} ({rep.wall_clock_seconds:.2f}s)")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(**{k: v for k, v in vars(args).items()})
        rep = COMMANDS[cfg.command](cfg)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, GroupParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text = rep.render(cfg.format)
    if cfg.output == "-":
        sys.stdout.write(text)
    else:
        if cfg.output:
            with open(cfg.output, "w") as fh:
                fh.write(text)
        print(summary(rep))
    if not rep.passed:
        return EXIT_BUDGET if rep.budget_exceeded and all(
            c.get("status") != "fail" for c in rep.results
        ) else EXIT_FAIL
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
