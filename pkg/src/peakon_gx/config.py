"""JSON run configurations.

A configuration is one JSON object:

    {
      "layout":   {"x": [1, 2], "y": [1, 1]},
      "spectral": {"lambdas": [0.2, 1], "mus": [0.333], "a0": [1e-4, 10],
                   "b0": [1e-6], "C": 1e20, "D": 1e18},
      "groups":   {"x": [{}, {"taus": [1e10], "sigmas": [1e5]}],
                   "y": [{}, {}]},
      "run":      {"t0": -20, "t1": 20, "samples": 401}
    }

"groups" may be omitted when every group is a singleton, and so may "run".
Numbers may use scientific notation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace
from typing import Any

from .fixtures import Fixture
from .spectral import Group, GroupLayout, GroupParams, SpectralData


class ConfigParseError(ValueError):
    """A configuration document is malformed; `location` names the offending spot."""

    def __init__(self, message: str, location: str):
        self.location = location
        super().__init__(f"{location}: {message}")


@dataclass(frozen=True)
class RunOptions:
    t0: float | None = None
    t1: float | None = None
    samples: int | None = None
    h: float | None = None
    steps: int | None = None
    tolerance: float | None = None
    thetas: tuple[float, ...] | None = None
    format: str | None = None
    out: str | None = None

    def merged(self, **over) -> "RunOptions":
        """Copy with every non-None override applied."""
        return replace(self, **{k: v for k, v in over.items() if v is not None})

    def check(self) -> None:
        if self.t0 is not None and self.t1 is not None and not self.t0 < self.t1:
            raise ValueError(f"t0 must be < t1 (got {self.t0}, {self.t1})")
        if self.samples is not None and self.samples < 2:
            raise ValueError(f"samples must be >= 2 (got {self.samples})")
        if self.h is not None and not self.h > 0:
            raise ValueError(f"h must be > 0 (got {self.h})")
        if self.steps is not None and self.steps < 1:
            raise ValueError(f"steps must be >= 1 (got {self.steps})")
        if self.tolerance is not None and not self.tolerance > 0:
            raise ValueError(f"tolerance must be > 0 (got {self.tolerance})")
        if self.format is not None and self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json (got {self.format})")


@dataclass(frozen=True)
class RunConfig:
    fixture: Fixture
    run: RunOptions = field(default_factory=RunOptions)

    @property
    def args(self):
        return self.fixture.args


def _num(v: Any, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float, str)):
        raise ConfigParseError(f"expected a number, got {type(v).__name__}", where)
    try:
        return float(v)
    except ValueError:
        raise ConfigParseError(f"expected a number, got {v!r}", where) from None


def _int(v: Any, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigParseError(f"expected an integer, got {v!r}", where)
    return v


def _nums(v: Any, where: str) -> list[float]:
    if not isinstance(v, list):
        raise ConfigParseError("expected a list of numbers", where)
    return [_num(x, f"{where}[{i}]") for i, x in enumerate(v)]


def _obj(d: dict, key: str, where: str, required: bool = True) -> Any:
    if key not in d:
        if required:
            raise ConfigParseError(f"missing key {key!r}", where)
        return None
    return d[key]


def parse_config(doc: Any, name: str = "config") -> RunConfig:
    """Build a RunConfig from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise ConfigParseError("top level must be an object", "$")
    unknown = set(doc) - {"layout", "spectral", "groups", "run", "name", "description"}
    if unknown:
        raise ConfigParseError(f"unknown key(s) {sorted(unknown)}", "$")

    lay = _obj(doc, "layout", "$")
    if not isinstance(lay, dict):
        raise ConfigParseError("expected an object", "$.layout")
    xs = [_int(v, f"$.layout.x[{i}]") for i, v in enumerate(_obj(lay, "x", "$.layout") or [])]
    ys = [_int(v, f"$.layout.y[{i}]") for i, v in enumerate(_obj(lay, "y", "$.layout") or [])]
    layout = GroupLayout(xs, ys)

    sp = _obj(doc, "spectral", "$")
    if not isinstance(sp, dict):
        raise ConfigParseError("expected an object", "$.spectral")
    spectral = SpectralData(
        _nums(_obj(sp, "lambdas", "$.spectral"), "$.spectral.lambdas"),
        _nums(_obj(sp, "mus", "$.spectral"), "$.spectral.mus"),
        _nums(_obj(sp, "a0", "$.spectral"), "$.spectral.a0"),
        _nums(_obj(sp, "b0", "$.spectral"), "$.spectral.b0"),
        _num(_obj(sp, "C", "$.spectral"), "$.spectral.C"),
        _num(_obj(sp, "D", "$.spectral"), "$.spectral.D"),
    )

    gr = _obj(doc, "groups", "$", required=False)
    if gr is None:
        if any(n != 1 for n in xs + ys):
            raise ConfigParseError("required when a group has more than one peakon", "$.groups")
        params = GroupParams.singletons(layout)
    else:
        if not isinstance(gr, dict):
            raise ConfigParseError("expected an object", "$.groups")
        lists = {}
        for kind in ("x", "y"):
            raw = _obj(gr, kind, "$.groups")
            if not isinstance(raw, list):
                raise ConfigParseError("expected a list of group objects", f"$.groups.{kind}")
            out = []
            for i, g in enumerate(raw):
                where = f"$.groups.{kind}[{i}]"
                if not isinstance(g, dict):
                    raise ConfigParseError("expected an object", where)
                out.append(Group(_nums(g.get("taus", []), where + ".taus"),
                                 _nums(g.get("sigmas", []), where + ".sigmas")))
            lists[kind] = out
        params = GroupParams(lists["x"], lists["y"])

    run_doc = _obj(doc, "run", "$", required=False) or {}
    if not isinstance(run_doc, dict):
        raise ConfigParseError("expected an object", "$.run")
    known = {f.name for f in fields(RunOptions)}
    bad = set(run_doc) - known
    if bad:
        raise ConfigParseError(f"unknown key(s) {sorted(bad)}", "$.run")
    kw: dict[str, Any] = {}
    for k, v in run_doc.items():
        where = f"$.run.{k}"
        if k in ("samples", "steps"):
            kw[k] = _int(v, where)
        elif k == "thetas":
            kw[k] = tuple(_nums(v, where))
        elif k in ("format", "out"):
            if not isinstance(v, str):
                raise ConfigParseError("expected a string", where)
            kw[k] = v
        else:
            kw[k] = _num(v, where)
    run = RunOptions(**kw)
    try:
        run.check()
    except ValueError as exc:
        raise ConfigParseError(str(exc), "$.run") from None
    fix = Fixture(str(doc.get("name", name)), layout, spectral, params, str(doc.get("description", "")))
    return RunConfig(fix, run)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigParseError(exc.strerror or str(exc), path) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None
    return parse_config(doc, name=path)


def fixture_document(fix: Fixture) -> dict:
    """The JSON document describing a fixture (inverse of parse_config)."""
    s = fix.spectral
    return {
        "name": fix.name,
        "description": fix.description,
        "layout": {"x": list(fix.layout.x_sizes), "y": list(fix.layout.y_sizes)},
        "spectral": {"lambdas": list(s.lambdas), "mus": list(s.mus), "a0": list(s.a0),
                     "b0": list(s.b0), "C": s.bigC, "D": s.bigD},
        "groups": {kind: [{"taus": list(g.taus), "sigmas": list(g.sigmas)} for g in groups]
                   for kind, groups in (("x", fix.params.x), ("y", fix.params.y))},
    }
