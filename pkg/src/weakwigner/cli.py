"""Command-line entry point.

Subcommands: wigner, weakvalue, analytic, evolve, reconstruct, compass,
selftest.  Each reads a JSON config (``--config``) and writes CSV files
into ``--out``.  Exit codes: 0 success, 1 selftest failure, 2 invalid
configuration, 3 numerical-domain error, 4 I/O error.

Outputs are assembled in memory and only written once the whole run has
succeeded, so a rejected config never leaves partial files behind.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import coherent, io
from .config import SUBCOMMANDS, Resolver, RunConfig, load, number, vector
from .errors import ConfigError, WeakWignerError
from .evolve import TwoStateScenario, sweep
from .grid import inner_product
from .reconstruct import ReconstructionInput, fitted_scale, phase_align, reconstruct
from .weakval import EPS_OVERLAP, compare_methods, rho
from .xwigner import (
    FieldLabel,
    PhaseSpaceField,
    compass_wigner,
    cross_wigner,
    marginal_over_p,
    marginal_over_x,
    wigner,
)

log = logging.getLogger("weakwigner")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4


def _marginals_text(field: PhaseSpaceField) -> str:
    g = field.grid
    mx = marginal_over_p(field)
    mp = marginal_over_x(field)
    lines = [io.header(g, "marginals", label=field.label.value).rstrip("\n"),
             "node,re_marginal_x,im_marginal_x,p,re_marginal_p,im_marginal_p"]
    for x, a, p, b in zip(g.x, mx, g.p, mp):
        lines.append(",".join(io.fmt(v) for v in (x, a.real, a.imag, p, b.real, b.imag)))
    return "\n".join(lines) + "\n"


def run_wigner(cfg: RunConfig, res: Resolver, args) -> dict:
    phi = res.state(cfg.raw["phi"], "phi")
    if "psi" in cfg.raw:
        field = cross_wigner(phi, res.state(cfg.raw["psi"], "psi"))
        name = "cross_wigner"
    else:
        field = wigner(phi)
        name = "wigner"
    return {f"{name}.csv": io.field_to_text(field), "marginals.csv": _marginals_text(field)}


def run_weakvalue(cfg: RunConfig, res: Resolver, args) -> dict:
    phi = res.state(cfg.raw["phi"], "phi")
    psi = res.state(cfg.raw["psi"], "psi")
    A = res.observable(cfg.raw["observable"])
    eps = number(cfg.raw.get("eps", EPS_OVERLAP), "eps", True)
    write_rho = cfg.raw.get("write_rho", False)
    if not isinstance(write_rho, bool):
        raise ConfigError("write_rho: expected true or false")
    quad, direct = compare_methods(A, phi, psi, eps, args.stride)
    text = io.header(cfg.grid, "weakvalue", stride=args.stride) + io.REPORT_COLUMNS + "\n"
    text += io.report_row(quad) + "\n" + io.report_row(direct) + "\n"
    out = {"weakvalue.csv": text}
    if write_rho:
        out["rho.csv"] = io.field_to_text(rho(phi, psi, eps))
    print(f"quadrature {quad.value:.12g}  direct {direct.value:.12g}  "
          f"residual {quad.residual_vs_alternate:.3e}")
    return out


_ANALYTIC_KEYS = {"quantity", "z", "z0", "hbar", "alpha", "beta", "sup_abs"}
_ANALYTIC_NEEDS = {
    "overlap": {"z0"},
    "fiducial_wigner": {"z"},
    "cross_wigner": {"z", "z0"},
    "rho": {"z", "z0"},
    "chi": {"alpha", "beta", "z"},
    "bound": {"z0"},
}


def run_analytic(cfg: RunConfig, res: Resolver, args) -> dict:
    evals = cfg.raw["evaluations"]
    if not isinstance(evals, list) or not evals:
        raise ConfigError("evaluations: expected a non-empty list")
    rows = []
    for i, ev in enumerate(evals):
        where = f"evaluations[{i}]"
        if not isinstance(ev, dict) or ev.get("quantity") not in _ANALYTIC_NEEDS:
            raise ConfigError(f"{where}.quantity: one of {sorted(_ANALYTIC_NEEDS)}")
        q = ev["quantity"]
        unknown = set(ev) - _ANALYTIC_KEYS
        missing = _ANALYTIC_NEEDS[q] - set(ev)
        if unknown or missing:
            raise ConfigError(f"{where}: unknown {sorted(unknown)} / missing {sorted(missing)}")
        h = number(ev.get("hbar", 1.0), f"{where}.hbar", True)
        vec = {k: vector(ev[k], f"{where}.{k}") for k in ("z", "z0", "alpha", "beta") if k in ev}
        lengths = {len(v) for v in vec.values()}
        if len(lengths) != 1 or lengths.pop() % 2:
            raise ConfigError(f"{where}: vectors must share one even length 2N")
        if q == "overlap":
            val, extra = complex(coherent.overlap_antipodal(vec["z0"], h)), ""
        elif q == "fiducial_wigner":
            val, extra = complex(coherent.fiducial_wigner(vec["z"], h)), ""
        elif q == "cross_wigner":
            val, extra = complex(coherent.cross_wigner_antipodal(vec["z"], vec["z0"], h)), ""
        elif q == "rho":
            val, extra = complex(coherent.rho_antipodal(vec["z"], vec["z0"], h)), ""
        elif q == "chi":
            val, extra = complex(coherent.chi_phase(vec["alpha"], vec["beta"], vec["z"])), ""
        else:
            b = coherent.amplification_bound(vec["z0"], h, number(ev.get("sup_abs", 1.0), f"{where}.sup_abs"))
            val = complex(np.nan if b.overflow else b.value)
            extra = f"overflow:log={io.fmt(b.log_value)}" if b.overflow else ""
        rows.append((q, val, extra))
        print(f"{q:16s} {val.real:.17g} {val.imag:+.17g}j {extra}".rstrip())
    text = io.header(None, "analytic") + "quantity,re,im,note\n"
    text += "".join(f"{q},{io.fmt(v.real)},{io.fmt(v.imag)},{e}\n" for q, v, e in rows)
    return {"analytic.csv": text}


def run_evolve(cfg: RunConfig, res: Resolver, args) -> dict:
    r = cfg.raw
    method = r.get("method", "split")
    if method not in ("split", "exact"):
        raise ConfigError("method: expected 'split' or 'exact'")
    try:
        scen = TwoStateScenario(
            psi_in=res.state(r["psi_in"], "psi_in"),
            phi_fin=res.state(r["phi_fin"], "phi_fin"),
            hamiltonian=res.hamiltonian(r["hamiltonian"]),
            t_in=number(r["t_in"], "t_in"),
            t_fin=number(r["t_fin"], "t_fin"),
            observable=res.observable(r["observable"]),
            sample_times=tuple(vector(r["sample_times"], "sample_times")),
            method=method,
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"scenario: {exc}") from None
    lines = [io.header(cfg.grid, "evolve", method=method).rstrip("\n"),
             "t,re_value,im_value,re_overlap,im_overlap,residual"]
    for row in sweep(scen):
        ov = row.overlap if row.overlap is not None else complex(np.nan)
        if row.report is None:
            lines.append(f"{io.fmt(row.t)},,,{io.fmt(ov.real)},{io.fmt(ov.imag)},")
        else:
            v = row.report.value
            lines.append(",".join(io.fmt(x) for x in (
                row.t, v.real, v.imag, ov.real, ov.imag, row.report.residual_vs_alternate)))
    return {"evolve.csv": "\n".join(lines) + "\n"}


def run_reconstruct(cfg: RunConfig, res: Resolver, args) -> dict:
    r = cfg.raw
    field = io.read_field(res.path(r["field"], "field"))
    if field.grid != cfg.grid:
        raise ConfigError("field: grid in file differs from config grid")
    phi = res.state(r["phi"], "phi")
    gamma = res.state(r["gamma"], "gamma")
    rec = reconstruct(ReconstructionInput(field, phi, gamma))
    out = {"reconstructed.csv": io.state_to_text(rec)}
    text = io.header(cfg.grid, "reconstruction") + "quantity,re,im\n"
    ov = inner_product(phi, gamma)
    text += f"overlap_phi_gamma,{io.fmt(ov.real)},{io.fmt(ov.imag)}\n"
    if "truth" in r:
        truth = res.state(r["truth"], "truth")
        al = phase_align(rec, truth)
        s = fitted_scale(rec, truth)
        text += f"alignment_phase,{io.fmt(al.phase.real)},{io.fmt(al.phase.imag)}\n"
        text += f"alignment_residual,{io.fmt(al.residual)},0\n"
        text += f"fitted_scale,{io.fmt(s.real)},{io.fmt(s.imag)}\n"
        print(f"alignment residual {al.residual:.3e}")
    out["reconstruction.csv"] = text
    return out


def run_compass(cfg: RunConfig, res: Resolver, args) -> dict:
    centers = cfg.raw["centers"]
    if not isinstance(centers, list) or not 2 <= len(centers) <= 8:
        raise ConfigError("centers: expected a list of 2..8 [x, p] pairs")
    pts = [vector(c, f"centers[{i}]", 2) for i, c in enumerate(centers)]
    comp = compass_wigner(pts, cfg.grid)
    out = {"compass_total.csv": io.field_to_text(comp.total)}
    for (i, j), term in comp.pair_terms.items():
        out[f"compass_pair_{i}_{j}.csv"] = io.field_to_text(term.relabel(FieldLabel.GENERIC))
    return out


def run_selftest(cfg: RunConfig, res: Resolver, args) -> dict:
    from . import selftest

    grid = cfg.grid or selftest.default_grid()
    pairs = cfg.raw.get("pairs", 5)
    if isinstance(pairs, bool) or not isinstance(pairs, int) or pairs < 1:
        raise ConfigError("pairs: expected a positive integer")
    results = selftest.run(grid, np.random.default_rng(args.seed), pairs)
    table = selftest.format_table(results)
    print(table)
    args.selftest_ok = all(r.passed for r in results)
    return {"selftest.txt": io.header(grid, "selftest", seed=args.seed) + table + "\n"}


RUNNERS = {
    "wigner": run_wigner,
    "weakvalue": run_weakvalue,
    "analytic": run_analytic,
    "evolve": run_evolve,
    "reconstruct": run_reconstruct,
    "compass": run_compass,
    "selftest": run_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakwigner", description="Cross-Wigner transforms and weak values on a phase-space grid."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, required=name != "selftest", help="JSON run configuration")
        p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
        p.add_argument("--seed", type=int, default=0, help="seed for randomised suites")
        p.add_argument(
            "--stride", type=int, default=1,
            help="keep every k-th momentum node in the Grossmann-Royer sum (faster, aliases)",
        )
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.seed < 0 or args.seed >= 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_CONFIG
    if args.stride < 1:
        print("error: --stride must be a positive integer", file=sys.stderr)
        return EXIT_CONFIG
    args.selftest_ok = True
    try:
        cfg = load(args.config, args.command)
        res = Resolver(cfg)
        outputs = RUNNERS[args.command](cfg, res, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except WeakWignerError as exc:
        print(f"numerical error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        args.out.mkdir(parents=True, exist_ok=True)
        for name, text in outputs.items():
            (args.out / name).write_text(text)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    log.info("wrote %d file(s) to %s", len(outputs), args.out)
    return EXIT_OK if args.selftest_ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
