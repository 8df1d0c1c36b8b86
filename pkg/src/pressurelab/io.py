"""Plain-text system, potential and config files.

System file::

    A=2
    theta=0.5
    1 1
    1 0

Potential file: ``kind=locally_constant`` with ``w=<window>``, or
``kind=geometric`` with ``rho=<real>``, then one value per line
(lexicographic word order, or one per symbol for ``geometric``).
Config files hold ``key=value`` pairs, one per line, ``#`` starts a comment.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import ConfigError
from .symbolic import GeometricSeries, LocallyConstant, SftSystem


def _lines(text: str) -> list:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _key(line: str, name: str) -> str:
    key, sep, value = line.partition("=")
    if not sep or key.strip() != name:
        raise ConfigError(f"expected '{name}=...', got {line!r}")
    return value.strip()


def parse_system(text: str) -> SftSystem:
    lines = _lines(text)
    if len(lines) < 2:
        raise ConfigError("system file needs A= and theta= lines")
    try:
        A = int(_key(lines[0], "A"))
        theta = float(_key(lines[1], "theta"))
        rows = [[int(t) for t in line.split()] for line in lines[2:]]
    except ValueError as exc:
        raise ConfigError(f"bad system file: {exc}") from exc
    if A < 1 or len(rows) != A or any(len(r) != A for r in rows):
        raise ConfigError(f"transition matrix must be {A} x {A}")
    if any(v not in (0, 1) for r in rows for v in r):
        raise ConfigError("transition entries must be 0 or 1")
    return SftSystem(np.array(rows, dtype=bool), theta)


def format_system(sys: SftSystem) -> str:
    rows = "\n".join(" ".join(str(int(v)) for v in r) for r in sys.transitions)
    return f"A={sys.alphabet_size}\ntheta={sys.theta!r}\n{rows}\n"


def load_system(spec) -> SftSystem:
    """Read a system file, or build ``builtin:full:<A>`` / ``builtin:golden`` (optional ``:theta``)."""
    spec = str(spec)
    if spec.startswith("builtin:"):
        parts = spec.split(":")[1:]
        try:
            if parts[0] == "full":
                A = int(parts[1]) if len(parts) > 1 else 2
                theta = float(parts[2]) if len(parts) > 2 else 0.5
                return SftSystem.full_shift(A, theta)
            if parts[0] == "golden":
                return SftSystem.golden_mean(float(parts[1]) if len(parts) > 1 else 0.5)
        except (ValueError, IndexError) as exc:
            raise ConfigError(f"bad builtin system {spec!r}") from exc
        raise ConfigError(f"unknown builtin system {spec!r}")
    return parse_system(_read(spec))


def parse_potential(text: str, alphabet_size: int):
    lines = _lines(text)
    if len(lines) < 2:
        raise ConfigError("potential file needs kind= and w=/rho= lines")
    kind = _key(lines[0], "kind")
    try:
        if kind == "locally_constant":
            w = int(_key(lines[1], "w"))
            return LocallyConstant(alphabet_size, w, [float(v) for v in lines[2:]])
        if kind == "geometric":
            rho = float(_key(lines[1], "rho"))
            values = [float(v) for v in lines[2:]]
            if len(values) != alphabet_size:
                raise ConfigError(f"geometric potential needs {alphabet_size} symbol values")
            return GeometricSeries(rho, values)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad potential file: {exc}") from exc
    raise ConfigError(f"unknown potential kind {kind!r}")


def format_potential(phi) -> str:
    if isinstance(phi, LocallyConstant):
        head = f"kind=locally_constant\nw={phi.window}\n"
        values = phi.table
    else:
        head = f"kind=geometric\nrho={phi.rho!r}\n"
        values = phi.symbol_values
    return head + "".join(f"{float(v)!r}\n" for v in values)


def load_potential(spec, alphabet_size: int):
    """Read a potential file; ``zero`` and ``first:<beta>`` (window 1, ``[0, beta, ...]``) are built in."""
    spec = str(spec)
    if spec in ("zero", "builtin:zero"):
        return LocallyConstant.zero(alphabet_size)
    if spec.startswith("first:"):
        try:
            beta = float(spec.split(":", 1)[1])
        except ValueError as exc:
            raise ConfigError(f"bad potential {spec!r}") from exc
        return LocallyConstant(alphabet_size, 1, beta * np.arange(alphabet_size) / max(1, alphabet_size - 1))
    return parse_potential(_read(spec), alphabet_size)


def parse_config(text: str) -> dict:
    out = {}
    for line in _lines(text):
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"config lines must be key=value, got {line!r}")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def load_config(path) -> dict:
    return parse_config(_read(path))
