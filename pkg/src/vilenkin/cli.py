"""Command-line experiment drivers.

Five subcommands: kernel-profile, identity-check, converge, classify-weights
and bench-transform.  Options come from an optional JSON config file plus
flags (flags win).  Numeric artifacts are written as CSV with 15 significant
digits and rows sorted by order n, so reruns are byte-identical; one summary
line per check goes to stdout.  Exit status: 0 success, 1 a numerical check
failed its tolerance, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .group import GroupSpec, parse_element, parse_group
from .kernels import identity_residual, l1_profile
from .means import WeightSequence, abel_weight_residual, classify, parse_weights, t_mean
from .points import convergence_profile
from .transform import GridFunction, forward

CHECK_TOL = 1e-12
AGREE_TOL = 1e-10
# Keep CLI-driven grids well inside addressable/allocatable range.
MAX_CLI_SIZE = 1 << 22


class ConfigError(ValueError):
    """Bad configuration: reported on stderr with exit status 2."""


@dataclass(frozen=True)
class ExperimentConfig:
    group: str = "2,3,2,3"
    levels: int | None = None
    weights: str = "constant"
    family: str = "fejer"
    n_max: int | None = None
    tail_rank: int = 1
    function: str = "random"
    point: str | None = None
    p: float = 1.0
    seed: int = 0
    form: str = "t"
    mode: str = "all"
    out: str | None = None


_CONFIG_KEYS = {f.name for f in fields(ExperimentConfig)}


def load_config(path: str | Path | None, overrides: dict) -> ExperimentConfig:
    """Defaults, then JSON file values, then explicitly passed flags."""
    cfg = ExperimentConfig()
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        unknown = set(raw) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        cfg = replace(cfg, **raw)
    flags = {k: v for k, v in overrides.items() if v is not None}
    return replace(cfg, **flags)


def _fmt(x: float) -> str:
    return f"{x:.15g}"


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _build_spec(cfg: ExperimentConfig) -> GroupSpec:
    try:
        spec = parse_group(cfg.group, cfg.levels)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if spec.size > MAX_CLI_SIZE:
        raise ConfigError(
            f"resolution overflow: M_N = {spec.size} exceeds the CLI cap {MAX_CLI_SIZE}"
        )
    return spec


def _build_weights(cfg: ExperimentConfig) -> WeightSequence:
    try:
        return parse_weights(cfg.weights)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _build_function(cfg: ExperimentConfig, spec: GroupSpec) -> GridFunction:
    text = cfg.function
    name, _, rest = text.partition(":")
    try:
        if name == "constant":
            return GridFunction.constant(spec, 1.0)
        if name == "character":
            return GridFunction.character(spec, int(rest))
        if name == "indicator":
            rank_s, _, cell_s = rest.partition(",")
            return GridFunction.indicator(spec, int(rank_s), int(cell_s or 0))
        if name == "random":
            if not rest:
                return GridFunction.random(spec, cfg.seed)
            seed_s, _, rank_s = rest.partition(",")
            rank = int(rank_s) if rank_s else None
            return GridFunction.random(spec, int(seed_s), rank)
    except ValueError as exc:
        raise ConfigError(f"bad function spec {text!r}: {exc}") from None
    raise ConfigError(
        f"unknown function spec {text!r}; expected constant, character:K, "
        f"indicator:RANK,CELL or random:SEED[,RANK]"
    )


def _resolve_n_max(cfg: ExperimentConfig, spec: GroupSpec) -> int:
    n_max = cfg.n_max if cfg.n_max is not None else spec.size
    if not 1 <= n_max <= spec.size:
        raise ConfigError(f"n-max {n_max} outside [1, M_N = {spec.size}]")
    return n_max


def _orders(start: int, n_max: int, spec: GroupSpec, mode: str) -> list[int]:
    if mode == "block":
        return [b for b in spec.M if start <= b <= n_max]
    return list(range(start, n_max + 1))


# --- subcommands -------------------------------------------------------------


def _run_kernel_profile(cfg: ExperimentConfig, out: Path) -> int:
    spec = _build_spec(cfg)
    w = _build_weights(cfg)
    n_max = _resolve_n_max(cfg, spec)
    if cfg.family not in ("dirichlet", "fejer", "t", "norlund"):
        raise ConfigError(f"unknown kernel family {cfg.family!r}")
    if not 0 <= cfg.tail_rank <= spec.levels:
        raise ConfigError(f"tail-rank {cfg.tail_rank} outside [0, {spec.levels}]")
    start = 1 if cfg.family in ("dirichlet", "fejer") else w.n0
    ns = _orders(start, n_max, spec, cfg.mode)
    rows = l1_profile(cfg.family, ns, spec, weights=w, tail_rank=cfg.tail_rank)
    csv_rows = [
        [str(r.n), _fmt(r.l1), _fmt(r.integral.real), _fmt(r.integral.imag), _fmt(r.tail)]
        for r in rows
    ]
    _write_csv(out, ["n", "l1", "integral_re", "integral_im", "tail"], csv_rows)
    sup_l1 = max(r.l1 for r in rows)
    print(
        f"kernel-profile {cfg.family}[{w.label()}] on {spec}: {len(rows)} rows, "
        f"sup l1 = {sup_l1:.6g}, final tail(rank {cfg.tail_rank}) = {rows[-1].tail:.6g}"
    )
    print(f"wrote {out}")
    return 0


def _run_identity_check(cfg: ExperimentConfig, out: Path) -> int:
    spec = _build_spec(cfg)
    w = _build_weights(cfg)
    n_max = _resolve_n_max(cfg, spec)
    f = _build_function(cfg, spec)
    rows: list[list[str]] = []
    failures = 0

    def record(check: str, n: int, j: int | None, residual: float) -> None:
        nonlocal failures
        if residual > CHECK_TOL:
            failures += 1
        rows.append([check, str(n), "" if j is None else str(j), _fmt(residual)])

    def summarize(check: str, residuals: list[float]) -> None:
        worst = max(residuals) if residuals else 0.0
        status = "ok" if worst <= CHECK_TOL else "FAIL"
        print(
            f"identity-check {check}: max residual {worst:.3e} "
            f"over {len(residuals)} cases -> {status}"
        )

    got: list[float] = []
    for rank in range(spec.levels + 1):
        for j in range(spec.M[rank]):
            r = identity_residual("reflection", spec, rank=rank, j=j)
            record("reflection", rank, j, r)
            got.append(r)
    summarize("reflection", got)

    ns = list(range(w.n0, n_max + 1))
    got = []
    for n in ns:
        r = abel_weight_residual(w, n)
        record("weight-sum", n, None, r)
        got.append(r)
    summarize("weight-sum", got)

    got = []
    for n in ns:
        r = identity_residual("abel-kernel", spec, weights=w, n=n)
        record("abel-kernel", n, None, r)
        got.append(r)
    summarize("abel-kernel", got)

    got = []
    for n in ns:
        direct = t_mean(f, w, n, method="direct")
        abel = t_mean(f, w, n, method="abel")
        r = float(np.max(np.abs(direct.values - abel.values)))
        record("abel-mean", n, None, r)
        got.append(r)
    summarize("abel-mean", got)

    got = []
    for rank in range(spec.levels + 1):
        if w.Q(spec.M[rank]) <= 0:
            continue
        r = identity_residual("block", spec, weights=w, rank=rank)
        record("block", rank, None, r)
        got.append(r)
    summarize("block", got)

    rows.sort(key=lambda row: (row[0], int(row[1]), int(row[2] or -1)))
    _write_csv(out, ["check", "n", "j", "residual"], rows)
    print(f"wrote {out}")
    return 1 if failures else 0


def _run_converge(cfg: ExperimentConfig, out: Path) -> int:
    spec = _build_spec(cfg)
    w = _build_weights(cfg)
    n_max = _resolve_n_max(cfg, spec)
    f = _build_function(cfg, spec)
    point = None
    if cfg.point is not None:
        try:
            point = parse_element(cfg.point, spec)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    if cfg.form not in ("t", "norlund", "partial"):
        raise ConfigError(f"unknown mean form {cfg.form!r}")
    if point is None and cfg.p < 1:
        raise ConfigError(f"p must be >= 1, got {cfg.p}")
    start = 1 if cfg.form == "partial" else w.n0
    ns = _orders(start, n_max, spec, cfg.mode)
    rows = convergence_profile(
        f,
        w,
        ns,
        form=cfg.form,
        point=point,
        p=None if point is not None else cfg.p,
        mode=cfg.mode,
    )
    csv_rows = [[str(r.n), _fmt(r.err), r.mean_id, r.mode] for r in rows]
    _write_csv(out, ["n", "err", "mean_id", "mode"], csv_rows)
    where = f"point {cfg.point}" if point is not None else f"L{cfg.p:g} norm"
    print(
        f"converge {rows[0].mean_id} ({cfg.mode}, {where}) on {spec}: "
        f"{len(rows)} rows, final err = {rows[-1].err:.6e}"
    )
    print(f"wrote {out}")
    return 0


def _run_classify_weights(cfg: ExperimentConfig, out: Path) -> int:
    w = _build_weights(cfg)
    n_max = cfg.n_max if cfg.n_max is not None else 10_000
    try:
        c = classify(w, n_max)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    header = [
        "family",
        "n_max",
        "q0",
        "monotonicity",
        "fn01_sup",
        "fn011_sup",
        "regular",
        "growth_ratio",
        "gate",
    ]
    row = [
        c.label,
        str(c.n_max),
        _fmt(c.q0),
        c.monotonicity,
        _fmt(c.fn01_sup),
        _fmt(c.fn011_sup),
        str(int(c.regular)),
        _fmt(c.growth_ratio),
        c.gate,
    ]
    _write_csv(out, header, [row])
    print(
        f"classify-weights {c.label}: monotonicity={c.monotonicity}, "
        f"fn01_sup={c.fn01_sup:.6g}, fn011_sup={c.fn011_sup:.6g}, "
        f"regular={c.regular}, gate={c.gate}"
    )
    print(f"wrote {out}")
    return 0


def _run_bench_transform(cfg: ExperimentConfig, out: Path) -> int:
    spec = _build_spec(cfg)
    f = _build_function(cfg, spec)

    t0 = time.perf_counter()
    naive = forward(f, method="naive")
    naive_s = time.perf_counter() - t0
    t0 = time.perf_counter()
    fast = forward(f, method="fast")
    fast_s = time.perf_counter() - t0
    diff = float(np.max(np.abs(naive.coeffs - fast.coeffs)))
    ok = diff <= AGREE_TOL
    _write_csv(
        out,
        ["method", "seconds", "max_abs_diff"],
        [
            ["naive", f"{naive_s:.6g}", _fmt(diff)],
            ["fast", f"{fast_s:.6g}", _fmt(diff)],
        ],
    )
    status = "ok" if ok else "FAIL"
    speed = naive_s / fast_s if fast_s > 0 else float("inf")
    print(
        f"bench-transform on {spec} (M_N = {spec.size}): naive {naive_s:.4g}s, "
        f"fast {fast_s:.4g}s (x{speed:.1f}), agreement {diff:.3e} -> {status}"
    )
    print(f"wrote {out}")
    return 0 if ok else 1


_COMMANDS = {
    "kernel-profile": _run_kernel_profile,
    "identity-check": _run_identity_check,
    "converge": _run_converge,
    "classify-weights": _run_classify_weights,
    "bench-transform": _run_bench_transform,
}


def run(command: str, cfg: ExperimentConfig) -> int:
    """Run one subcommand against a fully merged config; returns exit status."""
    if command not in _COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    out = Path(cfg.out) if cfg.out is not None else Path(f"{command.replace('-', '_')}.csv")
    return _COMMANDS[command](cfg, out)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override it")
    common.add_argument("--group", help="radix pattern, e.g. 2,3,2")
    common.add_argument("--levels", type=int, help="resolution N (pattern cycles)")
    common.add_argument("--weights", help="constant | cesaro:A | icesaro:A | power:A | riesz | nlog | logpow:A")
    common.add_argument("--family", help="kernel family: dirichlet | fejer | t | norlund")
    common.add_argument("--n-max", dest="n_max", type=int, help="largest order n")
    common.add_argument("--tail-rank", dest="tail_rank", type=int, help="interval rank for kernel tails")
    common.add_argument("--function", help="constant | character:K | indicator:RANK,CELL | random:SEED[,RANK]")
    common.add_argument("--point", help="digit vector, e.g. 0,1,0")
    common.add_argument("--p", type=float, help="L_p exponent for norm errors")
    common.add_argument("--seed", type=int, help="seed for random functions")
    common.add_argument("--form", help="mean form: t | norlund | partial")
    common.add_argument(
        "--block",
        action="store_const",
        const="block",
        dest="mode",
        help="restrict orders to the block subsequence M_0, M_1, ...",
    )
    common.add_argument("--out", help="output CSV path (default <command>.csv)")

    parser = argparse.ArgumentParser(
        prog="vilenkin",
        description="Harmonic analysis diagnostics on bounded Vilenkin groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("kernel-profile", "L1 norms, integrals and tails of a kernel family"),
        ("identity-check", "run the algebraic identity suite at tolerance 1e-12"),
        ("converge", "pointwise or L_p error profile of a summability mean"),
        ("classify-weights", "monotonicity and sup statistics of a weight family"),
        ("bench-transform", "time the naive vs fast transform and check agreement"),
    ]:
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports its own message
        return int(exc.code) if exc.code else 0
    flag_values = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        cfg = load_config(args.config, flag_values)
        return run(args.command, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
