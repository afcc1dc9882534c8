"""Plain-text CSV serialisation of states, fields and weak-value reports.

Every file starts with ``# key=value`` header lines (M, L, hbar, kind,
sign_ledger, ...).  Numbers are written with 17 significant digits so that
doubles survive a write/read round trip bit for bit.
"""

from __future__ import annotations

import io as _io
from pathlib import Path

import numpy as np

from .conventions import SIGN_LEDGER
from .errors import ConfigError
from .grid import GridSpec, WaveFunction
from .xwigner import FieldLabel, PhaseSpaceField

FMT = "%.17g"


def fmt(v: float) -> str:
    return FMT % v


def header(grid: GridSpec | None, kind: str, **extra) -> str:
    lines = []
    if grid is not None:
        lines += [f"# M={grid.num_points}", f"# L={fmt(grid.half_width)}", f"# hbar={fmt(grid.hbar)}"]
    lines.append(f"# kind={kind}")
    for k, v in extra.items():
        lines.append(f"# {k}={v}")
    lines.append(f"# sign_ledger={SIGN_LEDGER}")
    return "\n".join(lines) + "\n"


def parse_header(lines) -> tuple[dict, list]:
    meta = {}
    body = []
    for line in lines:
        if line.startswith("#"):
            key, sep, value = line[1:].strip().partition("=")
            if sep:
                meta[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    return meta, body


def grid_from_meta(meta: dict) -> GridSpec:
    try:
        return GridSpec(int(meta["M"]), float(meta["L"]), float(meta["hbar"]))
    except KeyError as exc:
        raise ConfigError(f"file header lacks grid key {exc}") from None


def state_to_text(psi: WaveFunction) -> str:
    out = _io.StringIO()
    out.write(header(psi.grid, "state", rep=psi.rep))
    out.write("node,re,im\n")
    for x, v in zip(psi.nodes, psi.samples):
        out.write(f"{fmt(x)},{fmt(v.real)},{fmt(v.imag)}\n")
    return out.getvalue()


def state_from_text(text: str) -> WaveFunction:
    meta, body = parse_header(text.splitlines())
    if meta.get("kind") != "state":
        raise ConfigError(f"expected a state file, found kind={meta.get('kind')!r}")
    grid = grid_from_meta(meta)
    rows = [line.split(",") for line in body[1:]]
    if len(rows) != grid.num_points:
        raise ConfigError(f"state file has {len(rows)} rows, expected {grid.num_points}")
    data = np.array([[float(r[1]), float(r[2])] for r in rows])
    return WaveFunction(grid, data[:, 0] + 1j * data[:, 1], meta.get("rep", "position"))


def field_to_text(field: PhaseSpaceField) -> str:
    """Row j holds x_j; columns are (re, im) pairs for p_0 .. p_{M-1}."""
    v = np.asarray(field.values, dtype=complex)
    out = _io.StringIO()
    out.write(header(field.grid, "field", label=field.label.value, columns="re_im_pairs_by_p"))
    pairs = np.empty((v.shape[0], 2 * v.shape[1]))
    pairs[:, 0::2] = v.real
    pairs[:, 1::2] = v.imag
    np.savetxt(out, pairs, fmt=FMT, delimiter=",")
    return out.getvalue()


def field_from_text(text: str) -> PhaseSpaceField:
    meta, body = parse_header(text.splitlines())
    if meta.get("kind") != "field":
        raise ConfigError(f"expected a field file, found kind={meta.get('kind')!r}")
    grid = grid_from_meta(meta)
    data = np.loadtxt(_io.StringIO("\n".join(body)), delimiter=",", ndmin=2)
    m = grid.num_points
    if data.shape != (m, 2 * m):
        raise ConfigError(f"field file has shape {data.shape}, expected {(m, 2 * m)}")
    values = data[:, 0::2] + 1j * data[:, 1::2]
    try:
        label = FieldLabel(meta.get("label", "generic"))
    except ValueError:
        raise ConfigError(f"unknown field label {meta.get('label')!r}") from None
    if label is FieldLabel.WIGNER or (label is FieldLabel.OBSERVABLE and not np.any(values.imag)):
        values = values.real
    return PhaseSpaceField(grid, values, label)


def write_state(path, psi: WaveFunction):
    Path(path).write_text(state_to_text(psi))


def read_state(path) -> WaveFunction:
    return state_from_text(Path(path).read_text())


def write_field(path, field: PhaseSpaceField):
    Path(path).write_text(field_to_text(field))


def read_field(path) -> PhaseSpaceField:
    return field_from_text(Path(path).read_text())


REPORT_COLUMNS = "method,re_value,im_value,re_overlap,im_overlap,residual"


def report_row(rep) -> str:
    res = "" if rep.residual_vs_alternate is None else fmt(rep.residual_vs_alternate)
    return ",".join(
        [rep.method.value, fmt(rep.value.real), fmt(rep.value.imag),
         fmt(rep.overlap.real), fmt(rep.overlap.imag), res]
    )
