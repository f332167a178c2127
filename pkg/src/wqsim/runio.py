"""Config-file parsing and deterministic CSV / manifest output.

Config format: flat UTF-8 key/value text with `#` comments and sections.
Top-level keys `omega_a` and optional `label` precede the sections
`[atom.1]`, `[atom.2]` (optional) with keys z, gamma_l, gamma_r, and an
optional `[run]` section with t_end, dt, k_points, k_halfwidth.

CSV: header row, comma separated, floats serialized with 17 significant
digits (lossless double round-trip), complex columns split into _re/_im.
Data files carry no timestamps; the run manifest does.
"""
from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError
from .model import AtomParams, NetworkConfig


@dataclass
class RunSettings:
    """Numerical settings attached to a config file or preset."""

    t_end: float | None = None
    dt: float | None = None
    k_points: int | None = None
    k_halfwidth: float | None = None

    def merged(self, **overrides) -> "RunSettings":
        vals = {k: (overrides[k] if overrides.get(k) is not None else getattr(self, k))
                for k in ("t_end", "dt", "k_points", "k_halfwidth")}
        return RunSettings(**vals)


_ATOM_KEYS = {"z", "gamma_l", "gamma_r"}
_RUN_KEYS = {"t_end", "dt", "k_points", "k_halfwidth"}
_TOP_KEYS = {"omega_a", "label"}


def parse_config_text(text: str, origin: str = "<string>"
                      ) -> tuple[NetworkConfig, RunSettings]:
    """Parse the config format; raises ParseError with line/field context."""
    top: dict[str, str] = {}
    atoms: dict[str, dict[str, float]] = {}
    run: dict[str, float] = {}
    section: str | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in ("atom.1", "atom.2", "run"):
                raise ParseError(f"{origin}:{lineno}: unknown section [{section}]")
            if section.startswith("atom."):
                atoms.setdefault(section, {})
            continue
        if "=" not in line:
            raise ParseError(f"{origin}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = (s.strip() for s in line.partition("="))
        if section is None:
            if key not in _TOP_KEYS:
                raise ParseError(f"{origin}:{lineno}: unknown top-level field {key!r}")
            top[key] = value
        elif section == "run":
            if key not in _RUN_KEYS:
                raise ParseError(f"{origin}:{lineno}: unknown [run] field {key!r}")
            run[key] = _number(value, key, origin, lineno)
        else:
            if key not in _ATOM_KEYS:
                raise ParseError(f"{origin}:{lineno}: unknown [{section}] field {key!r}")
            atoms[section][key] = _number(value, key, origin, lineno)

    if "omega_a" not in top:
        raise ParseError(f"{origin}: missing required field 'omega_a'")
    if "atom.1" not in atoms:
        raise ParseError(f"{origin}: missing required section [atom.1]")

    omega_a = _number(top["omega_a"], "omega_a", origin, 0)

    def build_atom(sec: str) -> AtomParams:
        d = atoms[sec]
        missing = _ATOM_KEYS - d.keys()
        if missing:
            raise ParseError(
                f"{origin}: [{sec}] missing field(s) {sorted(missing)}")
        return AtomParams(position=d["z"], gamma_l=d["gamma_l"],
                          gamma_r=d["gamma_r"])

    atom_list = [build_atom("atom.1")]
    if "atom.2" in atoms:
        atom_list.append(build_atom("atom.2"))
    config = NetworkConfig(atoms=tuple(atom_list), omega_a=omega_a,
                           label=top.get("label", ""))
    settings = RunSettings(
        t_end=run.get("t_end"), dt=run.get("dt"),
        k_points=None if "k_points" not in run else int(run["k_points"]),
        k_halfwidth=run.get("k_halfwidth"))
    return config, settings


def _number(value: str, key: str, origin: str, lineno: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise ParseError(
            f"{origin}:{lineno}: field {key!r} is not a number: {value!r}"
        ) from None


def parse_config_file(path: str | Path) -> tuple[NetworkConfig, RunSettings]:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{p}: cannot read config: {exc}") from exc
    return parse_config_text(text, origin=str(p))


def format_config(config: NetworkConfig, settings: RunSettings | None = None
                  ) -> str:
    """Inverse of parse_config_text; values round-trip exactly."""
    lines = [f"omega_a = {fmt(config.omega_a)}"]
    if config.label:
        lines.append(f"label = {config.label}")
    for i, atom in enumerate(config.atoms, start=1):
        lines += [f"[atom.{i}]",
                  f"z = {fmt(atom.position)}",
                  f"gamma_l = {fmt(atom.gamma_l)}",
                  f"gamma_r = {fmt(atom.gamma_r)}"]
    if settings is not None:
        entries = [(k, getattr(settings, k))
                   for k in ("t_end", "dt", "k_points", "k_halfwidth")]
        entries = [(k, v) for k, v in entries if v is not None]
        if entries:
            lines.append("[run]")
            lines += [f"{k} = {v if isinstance(v, int) else fmt(v)}"
                      for k, v in entries]
    return "\n".join(lines) + "\n"


def fmt(x: float) -> str:
    """17-significant-digit float serialization (lossless round trip)."""
    return format(float(x), ".17g")


def write_csv(path: str | Path, header: list[str],
              columns: list[np.ndarray]) -> Path:
    """Deterministic CSV: given identical arrays, the bytes are identical."""
    if len(header) != len(columns):
        raise ValueError("header/column count mismatch")
    n = len(columns[0])
    if any(len(c) != n for c in columns):
        raise ValueError("columns must share a length")
    out = [",".join(header)]
    cols = [np.asarray(c) for c in columns]
    for i in range(n):
        out.append(",".join(fmt(c[i]) for c in cols))
    p = Path(path)
    p.write_text("\n".join(out) + "\n", encoding="utf-8")
    return p


def complex_columns(name: str, values: np.ndarray
                    ) -> tuple[list[str], list[np.ndarray]]:
    """Split a complex array into `{name}_re`, `{name}_im` columns."""
    v = np.asarray(values)
    return [f"{name}_re", f"{name}_im"], [v.real, v.imag]


def write_manifest(path: str | Path, entries: dict) -> Path:
    """Structured key=value manifest; carries the only timestamp of a run."""
    lines = [f"timestamp = {_dt.datetime.now(_dt.timezone.utc).isoformat()}"]
    for key in sorted(entries):
        lines.append(f"{key} = {entries[key]}")
    p = Path(path)
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return p
