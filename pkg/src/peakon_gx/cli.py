"""Command-line front end: validate, solve, verify, asymptotics, characteristics, integrate."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Any, Sequence

import numpy as np

from . import __version__
from .asymptotics import asymptote_table
from .characteristics import char_residuals, default_thetas, enumerate_families, xi
from .config import ConfigParseError, RunConfig, RunOptions, load_config
from .determinants import CapacityError
from .field import OrderingError, integrate, residual_of
from .fixtures import FIXTURES, get
from .solver import Solution
from .spectral import ConfigError, validate

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_TOLERANCE = 4
EXIT_CAPACITY = 5
EXIT_ORDERING = 6
EXIT_OUTPUT = 7

EXIT_CODES = {
    EXIT_OK: "success",
    EXIT_INVALID: "configuration violates a constraint (validate lists the codes)",
    EXIT_USAGE: "bad command line or run options",
    EXIT_PARSE: "configuration file missing or malformed (message gives the location)",
    EXIT_TOLERANCE: "verify: residual or RK4 deviation above --tolerance",
    EXIT_CAPACITY: "determinant size above PEAKON_GX_MAX_K",
    EXIT_ORDERING: "integrate/verify: RK4 lost the peakon ordering",
    EXIT_OUTPUT: "cannot write the output file",
}

DEFAULTS = {
    "solve": RunOptions(t0=-20.0, t1=20.0, samples=401, format="csv"),
    "verify": RunOptions(t0=-20.0, t1=20.0, samples=5, steps=10_000, tolerance=1e-6, format="csv"),
    "asymptotics": RunOptions(t0=-220.0, t1=220.0, samples=41, format="csv"),
    "characteristics": RunOptions(t0=-20.0, t1=20.0, samples=41, format="csv"),
    "integrate": RunOptions(t0=0.0, t1=1.0, steps=10_000, format="csv"),
    "validate": RunOptions(format="csv"),
}


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


# ---------------------------------------------------------------------------
# output

def _fmt(v: Any) -> str:
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _jsonable(v: Any) -> Any:
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, (np.integer,)):
        return int(v)
    return v


def _meta(cfg: RunConfig, command: str) -> dict:
    lay = cfg.fixture.layout
    return {"command": command, "config": cfg.fixture.name, "parity": lay.parity, "K": lay.K,
            "sizes": {"x": list(lay.x_sizes), "y": list(lay.y_sizes)}}


def render(meta: dict, columns: Sequence[str], rows: Sequence[Sequence[Any]], fmt: str) -> str:
    """CSV (header row, 17 significant digits) or the JSON {meta, columns, rows} document."""
    if fmt == "json":
        doc = {"meta": meta, "columns": list(columns),
               "rows": [[_jsonable(v) for v in r] for r in rows]}
        return json.dumps(doc, indent=1, allow_nan=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise _Fail(EXIT_OUTPUT, f"cannot write {out}: {exc.strerror or exc}") from None


# ---------------------------------------------------------------------------
# commands

def cmd_validate(cfg: RunConfig, opts: RunOptions) -> tuple[int, str]:
    rep = validate(*cfg.args)
    lines = [rep.summary() if rep.ok else "INVALID"]
    if not rep.ok:
        lines += [f"  {v}" for v in rep.violations]
    lines += [f"  warning: {w}" for w in rep.warnings]
    if opts.format == "json":
        rows = [[v.code, v.group, v.member, v.message] for v in rep.violations]
        meta = _meta(cfg, "validate") | {"ok": rep.ok, "warnings": [str(w) for w in rep.warnings]}
        return (EXIT_OK if rep.ok else EXIT_INVALID), render(meta, ["code", "group", "member", "message"], rows, "json")
    return (EXIT_OK if rep.ok else EXIT_INVALID), "\n".join(lines) + "\n"


def _grid(opts: RunOptions) -> np.ndarray:
    return np.linspace(opts.t0, opts.t1, opts.samples)


def solve_table(cfg: RunConfig, ts: np.ndarray) -> tuple[list[str], list[list[float]]]:
    st = Solution(*cfg.args).physical(ts)
    labels = st.chain_labels()
    amp_labels = [("m" if lab[0] == "x" else "n") + lab[1:] for lab in labels]
    pos = st.chain_positions()
    amps = []
    for kind, idx, _ in cfg.fixture.layout.chain():
        amps.append(st.group(kind, idx)[1])
    amp = np.exp(np.concatenate(amps, axis=0))
    rows = [[float(t)] + list(pos[:, k]) + list(amp[:, k]) for k, t in enumerate(st.t)]
    return ["t"] + labels + amp_labels, rows


def cmd_solve(cfg: RunConfig, opts: RunOptions) -> tuple[int, str]:
    cols, rows = solve_table(cfg, _grid(opts))
    return EXIT_OK, render(_meta(cfg, "solve"), cols, rows, opts.format)


def _rk4_deviation(sol: Solution, t0: float, t1: float, steps: int) -> tuple[float, float]:
    start = sol.physical([t0])
    end = integrate(start, t0, t1, steps)
    ref = sol.physical([t1])
    dpos = max(float(np.max(np.abs(end.x - ref.x), initial=0.0)),
               float(np.max(np.abs(end.y - ref.y), initial=0.0)))
    # amplitudes compared relatively: |m_rk4 / m - 1|
    damp = max(float(np.max(np.abs(np.expm1(end.log_m - ref.log_m)), initial=0.0)),
               float(np.max(np.abs(np.expm1(end.log_n - ref.log_n)), initial=0.0)))
    return dpos, damp


def cmd_verify(cfg: RunConfig, opts: RunOptions) -> tuple[int, str]:
    sol = Solution(*cfg.args)
    rows = []
    worst = 0.0
    for t in _grid(opts):
        r = residual_of(sol, float(t), opts.h)
        worst = max(worst, r)
        rows.append(["residual", float(t), r])
    rk_t0, rk_t1 = 0.0, 1.0
    try:
        dpos, damp = _rk4_deviation(sol, rk_t0, rk_t1, opts.steps)
    except OrderingError as exc:
        raise _Fail(EXIT_ORDERING, f"RK4 cross-check: {exc}") from None
    rows.append(["rk4-position", rk_t1, dpos])
    rows.append(["rk4-amplitude", rk_t1, damp])
    ok = worst <= opts.tolerance and dpos <= opts.tolerance and damp <= opts.tolerance
    meta = _meta(cfg, "verify") | {"tolerance": opts.tolerance, "ok": ok, "max_residual": worst,
                                   "rk4_steps": opts.steps, "rk4_interval": [rk_t0, rk_t1]}
    text = render(meta, ["check", "t", "value"], rows, opts.format)
    return (EXIT_OK if ok else EXIT_TOLERANCE), text


def cmd_asymptotics(cfg: RunConfig, opts: RunOptions) -> tuple[int, str]:
    # slopes are fitted over |t| in [T - 40, T] with T = max(|t0|, |t1|); gaps are taken at T - 20
    at = max(abs(opts.t0), abs(opts.t1)) - 20.0
    if at <= 20.0:
        raise ValueError("asymptotics needs max(|t0|, |t1|) > 40")
    rows = asymptote_table(Solution(*cfg.args), at=at, window=20.0, samples=opts.samples)
    out = [[r.target, r.kind, r.direction, r.line.slope, r.line.intercept, r.measured_slope, r.gap,
            int(r.line.degenerate)] for r in rows]
    cols = ["target", "kind", "direction", "c", "d", "measured_slope", f"gap_at_{_fmt(at)}", "degenerate"]
    return EXIT_OK, render(_meta(cfg, "asymptotics") | {"at": at, "window": 20.0}, cols, out, opts.format)


def cmd_characteristics(cfg: RunConfig, opts: RunOptions) -> tuple[int, str]:
    sol = Solution(*cfg.args)
    ts = _grid(opts)
    rows = []
    for fam in enumerate_families(*cfg.args, solution=sol):
        if opts.thetas is not None:
            lo, hi = fam.theta_range
            thetas = [th for th in opts.thetas if lo < th < hi]
        else:
            thetas = list(default_thetas(fam))
        for th in thetas:
            vals = np.broadcast_to(xi(fam, th, ts), ts.shape)
            res = char_residuals(fam, th, ts, opts.h)
            for t, v, r in zip(ts, vals, res):
                rows.append([fam.label, float(th), float(t), float(v), float(r)])
    cols = ["family", "theta", "t", "xi", "residual"]
    return EXIT_OK, render(_meta(cfg, "characteristics"), cols, rows, opts.format)


def cmd_integrate(cfg: RunConfig, opts: RunOptions) -> tuple[int, str]:
    sol = Solution(*cfg.args)
    start = sol.physical([opts.t0])
    if np.any(np.diff(start.chain_positions()[:, 0]) <= 0):
        raise _Fail(EXIT_ORDERING, f"peakons coincide in floating point at t0={_fmt(opts.t0)}; "
                                   "start nearer t = 0")
    try:
        end = integrate(start, opts.t0, opts.t1, opts.steps)
    except OrderingError as exc:
        raise _Fail(EXIT_ORDERING, str(exc)) from None
    ref = sol.physical([opts.t1])
    rows = []
    for kind, idx, _ in cfg.fixture.layout.chain():
        p_rk, a_rk = end.group(kind, idx)
        p_cf, a_cf = ref.group(kind, idx)
        for i in range(p_rk.shape[0]):
            rows.append([f"{kind.lower()}[{idx}.{i + 1}]", float(p_cf[i, 0]), float(p_rk[i, 0]),
                         abs(float(p_rk[i, 0] - p_cf[i, 0])), float(a_cf[i, 0]), float(a_rk[i, 0]),
                         abs(float(np.expm1(a_rk[i, 0] - a_cf[i, 0])))])
    cols = ["target", "position_closed", "position_rk4", "abs_error",
            "log_amplitude_closed", "log_amplitude_rk4", "rel_error_amplitude"]
    meta = _meta(cfg, "integrate") | {"t0": opts.t0, "t1": opts.t1, "steps": opts.steps}
    return EXIT_OK, render(meta, cols, rows, opts.format)


COMMANDS = {
    "validate": cmd_validate,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "asymptotics": cmd_asymptotics,
    "characteristics": cmd_characteristics,
    "integrate": cmd_integrate,
}


# ---------------------------------------------------------------------------
# argument handling

def _thetas(s: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in s.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad theta list {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    codes = "\n".join(f"  {k}  {v}" for k, v in EXIT_CODES.items())
    epilog = (f"exit codes:\n{codes}\n\nfixtures: {', '.join(FIXTURES)}\n"
              "env: PEAKON_GX_MAX_K caps the determinant size (default 12)")
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", metavar="PATH", help="JSON configuration file")
    src.add_argument("--fixture", metavar="NAME", choices=sorted(FIXTURES), help="built-in configuration")
    common.add_argument("--t0", type=float)
    common.add_argument("--t1", type=float)
    common.add_argument("--samples", type=int, help="number of time samples")
    common.add_argument("--h", type=float, help="finite-difference step (default 1e-5 max(1,|t|))")
    common.add_argument("--steps", type=int, help="RK4 steps")
    common.add_argument("--tolerance", type=float, help="verify pass threshold")
    common.add_argument("--thetas", type=_thetas, help="comma-separated theta values (characteristics)")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="peakon-gx", description=__doc__, epilog=epilog,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "validate": "check the constraints and name every violation",
        "solve": "sample positions and amplitudes on a time grid",
        "verify": "ODE residual over the grid plus an RK4 cross-check on [0, 1]",
        "asymptotics": "theorem lines, measured slopes and gaps at large |t|",
        "characteristics": "sample characteristic-curve families xi(t; theta)",
        "integrate": "RK4 from the closed form at t0 to t1, compared with the closed form",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name], epilog=epilog,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    return p


def _options(cfg: RunConfig, command: str, ns: argparse.Namespace) -> RunOptions:
    base = DEFAULTS[command].merged(**{k: getattr(cfg.run, k) for k in vars(cfg.run)})
    opts = base.merged(t0=ns.t0, t1=ns.t1, samples=ns.samples, h=ns.h, steps=ns.steps,
                       tolerance=ns.tolerance, thetas=ns.thetas, format=ns.format, out=ns.out)
    opts.check()
    return opts


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(ns.config) if ns.config else RunConfig(get(ns.fixture))
        opts = _options(cfg, ns.command, ns)
        code, text = COMMANDS[ns.command](cfg, opts)
        _emit(text, opts.out)
        return code
    except ConfigParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            print(f"error: invalid configuration: {exc}", file=sys.stderr)
            return EXIT_INVALID
        if isinstance(exc, CapacityError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CAPACITY
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _Fail as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
