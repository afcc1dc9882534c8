"""Validation of JSON run configurations.

Parsing is fail-closed: unknown keys, wrong types and out-of-range values
all raise ConfigError naming the offending field, before any computation.
File references are resolved relative to the config file.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .evolve import Free, Harmonic, Potential
from .grid import GridSpec, WaveFunction, gaussian_coherent, hermite_basis
from .weakval import Observable

SUBCOMMANDS = ("wigner", "weakvalue", "analytic", "evolve", "reconstruct", "compass", "selftest")

_ALLOWED = {
    "wigner": {"grid", "phi", "psi"},
    "weakvalue": {"grid", "phi", "psi", "observable", "eps", "write_rho"},
    "analytic": {"evaluations"},
    "evolve": {"grid", "psi_in", "phi_fin", "hamiltonian", "t_in", "t_fin",
               "observable", "sample_times", "method"},
    "reconstruct": {"grid", "field", "phi", "gamma", "truth"},
    "compass": {"grid", "centers"},
    "selftest": {"grid", "pairs"},
}
_REQUIRED = {
    "wigner": {"grid", "phi"},
    "weakvalue": {"grid", "phi", "psi", "observable"},
    "analytic": {"evaluations"},
    "evolve": {"grid", "psi_in", "phi_fin", "hamiltonian", "t_in", "t_fin", "observable",
               "sample_times"},
    "reconstruct": {"grid", "field", "phi", "gamma"},
    "compass": {"grid", "centers"},
    "selftest": set(),
}


@dataclass
class RunConfig:
    scenario: str
    raw: dict
    base_dir: Path = field(default_factory=Path.cwd)
    grid: GridSpec | None = None


def _keys(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(obj) - set(allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    missing = set(required) - set(obj)
    if missing:
        raise ConfigError(f"{where}: missing key(s) {sorted(missing)}")


def number(v, where, positive=False) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError(f"{where}: must be finite")
    if positive and v <= 0:
        raise ConfigError(f"{where}: must be positive")
    return v


def vector(v, where, length=None) -> list[float]:
    if not isinstance(v, list) or (length is not None and len(v) != length):
        n = "a list" if length is None else f"a list of {length} numbers"
        raise ConfigError(f"{where}: expected {n}")
    return [number(x, f"{where}[{i}]") for i, x in enumerate(v)]


def parse_grid(obj) -> GridSpec:
    _keys(obj, {"M", "L", "hbar"}, {"M", "L"}, "grid")
    m = obj["M"]
    if isinstance(m, bool) or not isinstance(m, int):
        raise ConfigError(f"grid.M: expected an integer, got {m!r}")
    if m < 8 or m & (m - 1):
        raise ConfigError(f"grid.M: must be a power of two >= 8, got {m}")
    return GridSpec(m, number(obj["L"], "grid.L", True), number(obj.get("hbar", 1.0), "grid.hbar", True))


def load(path, scenario: str) -> RunConfig:
    if scenario not in SUBCOMMANDS:
        raise ConfigError(f"unknown scenario {scenario!r}")
    if path is None:
        raw = {}
        base = Path.cwd()
    else:
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        base = path.parent
    return validate(raw, scenario, base)


def validate(raw: dict, scenario: str, base_dir: Path | None = None) -> RunConfig:
    raw = dict(raw)
    declared = raw.pop("scenario", scenario)
    if declared != scenario:
        raise ConfigError(f"scenario: config is for {declared!r}, subcommand is {scenario!r}")
    _keys(raw, _ALLOWED[scenario], _REQUIRED[scenario], "config")
    cfg = RunConfig(scenario, raw, base_dir or Path.cwd())
    if "grid" in raw:
        cfg.grid = parse_grid(raw["grid"])
    return cfg


class Resolver:
    """Builds library objects from validated config fragments."""

    def __init__(self, cfg: RunConfig, reader=None):
        self.cfg = cfg
        self.grid = cfg.grid
        self.reader = reader

    def path(self, p, where) -> Path:
        if not isinstance(p, str) or not p:
            raise ConfigError(f"{where}: expected a file path")
        p = Path(p)
        return p if p.is_absolute() else self.cfg.base_dir / p

    def state(self, spec, where) -> WaveFunction:
        from . import io

        if not isinstance(spec, dict) or len(spec) == 0:
            raise ConfigError(f"{where}: expected a state specification")
        _keys(spec, {"coherent", "hermite", "file", "superposition", "coeff"}, set(), where)
        kinds = [k for k in ("coherent", "hermite", "file", "superposition") if k in spec]
        if len(kinds) != 1:
            raise ConfigError(f"{where}: give exactly one of coherent/hermite/file/superposition")
        kind = kinds[0]
        if kind == "coherent":
            psi = gaussian_coherent(vector(spec["coherent"], f"{where}.coherent", 2), self.grid)
        elif kind == "hermite":
            n = spec["hermite"]
            if isinstance(n, bool) or not isinstance(n, int) or n < 0:
                raise ConfigError(f"{where}.hermite: expected a nonnegative integer")
            psi = hermite_basis(n, self.grid)
        elif kind == "file":
            psi = io.read_state(self.path(spec["file"], f"{where}.file"))
            if psi.grid != self.grid:
                raise ConfigError(f"{where}.file: state grid {psi.grid} differs from config grid")
        else:
            parts = spec["superposition"]
            if not isinstance(parts, list) or not parts:
                raise ConfigError(f"{where}.superposition: expected a non-empty list")
            total = np.zeros(self.grid.num_points, dtype=complex)
            for i, part in enumerate(parts):
                sub = self.state(part, f"{where}.superposition[{i}]")
                total = total + sub.samples
            psi = WaveFunction(self.grid, total)
        if "coeff" in spec:
            c = vector(spec["coeff"], f"{where}.coeff", 2)
            psi = complex(c[0], c[1]) * psi
        return psi

    def observable(self, spec, where="observable") -> Observable:
        from . import io

        if not isinstance(spec, dict):
            raise ConfigError(f"{where}: expected an object")
        _keys(spec, {"poly", "sampled"}, set(), where)
        if len(spec) != 1:
            raise ConfigError(f"{where}: give exactly one of poly/sampled")
        if "poly" in spec:
            triples = spec["poly"]
            if not isinstance(triples, list) or not triples:
                raise ConfigError(f"{where}.poly: expected a list of [a, b, coefficient]")
            terms = {}
            for i, t in enumerate(triples):
                w = f"{where}.poly[{i}]"
                if not isinstance(t, list) or len(t) != 3:
                    raise ConfigError(f"{w}: expected [a, b, coefficient]")
                a, b = t[0], t[1]
                if any(isinstance(v, bool) or not isinstance(v, int) or v < 0 for v in (a, b)):
                    raise ConfigError(f"{w}: exponents must be nonnegative integers")
                if a + b > 4:
                    raise ConfigError(f"{w}: degree {a + b} exceeds 4")
                terms[(a, b)] = terms.get((a, b), 0.0) + number(t[2], f"{w}[2]")
            return Observable.poly(terms)
        f = io.read_field(self.path(spec["sampled"], f"{where}.sampled"))
        if f.grid != self.grid:
            raise ConfigError(f"{where}.sampled: field grid differs from config grid")
        try:
            return Observable.sampled(f)
        except ValueError as exc:
            raise ConfigError(f"{where}.sampled: {exc}") from None

    def hamiltonian(self, spec, where="hamiltonian"):
        if not isinstance(spec, dict) or len(spec) != 1:
            raise ConfigError(f"{where}: give exactly one of free/harmonic/potential")
        (kind, params), = spec.items()
        w = f"{where}.{kind}"
        if kind == "free":
            _keys(params, {"mass"}, set(), w)
            return Free(number(params.get("mass", 1.0), f"{w}.mass", True))
        if kind == "harmonic":
            _keys(params, {"mass", "omega"}, set(), w)
            return Harmonic(
                number(params.get("mass", 1.0), f"{w}.mass", True),
                number(params.get("omega", 1.0), f"{w}.omega", True),
            )
        if kind == "potential":
            _keys(params, {"mass", "values"}, {"values"}, w)
            values = vector(params["values"], f"{w}.values", self.grid.num_points)
            return Potential(number(params.get("mass", 1.0), f"{w}.mass", True), np.array(values))
        raise ConfigError(f"{where}: unknown Hamiltonian {kind!r}")
