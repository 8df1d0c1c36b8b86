"""Command-line experiment driver.

Every subcommand reads an optional ``--config`` file of ``key=value`` lines;
flags given on the command line override it. Output is CSV (``--out`` or
stdout) and is byte-identical across reruns unless ``--timing`` adds a wall
clock column.

Exit codes: 0 success, 2 config error, 3 tolerance failure, 4 size guard.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from .balls import lemma_check
from .errors import ConfigError, InstanceTooLarge, NotIrreducible
from .io import load_config, load_potential, load_system
from .mistake import MistakeFunction, eval_budget
from .oracles import naive_m_infimum, transfer_spectrum, word_count_pressure
from .pressure_ball import DEFAULT_SPAN, KINDS, STRATEGIES, critical_point
from .pressure_cover import (CylinderCover, cover_critical_point, stirling_bound,
                             stirling_gamma, substitution_count)
from .symbolic import LocallyConstant, count_words
from .zset import WholeSpace, parse_z

EXIT_OK, EXIT_CONFIG, EXIT_TOL, EXIT_GUARD = 0, 2, 3, 4

DEFAULTS = {
    "system": "builtin:full:2",
    "potential": "zero",
    "Z": "whole",
    "g": "linear",
    "eps0": "1.0",
    "seed": "0",
    "tol": "0.05",
    "deltas": "1,2,3,4",
    "Ns": "8,10,12,14",
    "L": "1,2,3,4",
    "kind": "bowen",
    "strategy": "uniform",
    "span": str(DEFAULT_SPAN),
    "samples": "100000",
    "which": "transfer",
    "gparams": "",
    "s": "0",
    "N": "8",
}


def _ints(text: str) -> list:
    text = text.strip()
    if not text:
        return []
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if ".." in tok:
            a, b = tok.split("..")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(tok))
    return out


def _floats(text: str) -> list:
    return [float(t) for t in text.split(",") if t.strip()]


class Settings:
    """Flag value, else config-file value, else built-in default."""

    def __init__(self, args):
        self.args = args
        self.file = load_config(args.config) if getattr(args, "config", None) else {}

    def raw(self, key):
        v = getattr(self.args, key, None)
        if v is not None:
            return str(v)
        if key in self.file:
            return self.file[key]
        return DEFAULTS.get(key)

    def get(self, key, conv=str):
        v = self.raw(key)
        if v is None:
            raise ConfigError(f"missing setting {key!r}")
        try:
            return conv(v)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {v!r}") from exc

    def problem(self):
        system = load_system(self.get("system"))
        phi = load_potential(self.get("potential"), system.alphabet_size)
        Z = parse_z(self.get("Z"), system)
        return system, phi, Z

    def mistake(self, spec=None):
        return MistakeFunction.parse(spec or self.get("g"), self.get("eps0", float))

    def choice(self, key, allowed):
        v = self.get(key)
        if v not in allowed:
            raise ConfigError(f"{key} must be one of {', '.join(allowed)}")
        return v


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(x) -> str:
    return repr(float(x))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PRESSURELAB_THREADS", "1")))
    except ValueError as exc:
        raise ConfigError("PRESSURELAB_THREADS must be an integer") from exc


def _schedule(cfg, key):
    Ls, Ns = cfg.get(key, _ints), cfg.get("Ns", _ints)
    if not Ls or not Ns:
        raise ConfigError("schedules must be nonempty")
    if len(Ns) == 1:
        Ns = Ns * len(Ls)
    if len(Ls) != len(Ns):
        raise ConfigError(f"{key} and Ns must have matching lengths")
    return Ls, Ns


def _oracle_value(system, phi, Z):
    """Transfer-matrix pressure when it applies, else None."""
    if not isinstance(Z, WholeSpace) or not isinstance(phi, LocallyConstant) or phi.window > 2:
        return None
    try:
        return transfer_spectrum(system, phi).pressure
    except NotIrreducible:
        return None


# ---------------------------------------------------------------------------
# subcommands


def cmd_pressure(args, cfg):
    system, phi, Z = cfg.problem()
    kind = cfg.choice("kind", KINDS)
    strategy = cfg.choice("strategy", STRATEGIES)
    g = cfg.mistake() if kind == "mistake" else None
    span, tol = cfg.get("span", int), cfg.get("tol", float)
    Ls, Ns = _schedule(cfg, "deltas")
    rows = []
    for L, N in zip(Ls, Ns):
        t0 = time.perf_counter()
        s, m = critical_point(system, Z, phi, N, system.radius(L), kind, g, strategy, span, min(tol, 1e-9))
        rows.append(_trace_row(args, system.radius(L), N, s, m, t0))
    _emit(args, _csv(_trace_header(args), rows))
    return EXIT_OK


def cmd_cover_pressure(args, cfg):
    system, phi, Z = cfg.problem()
    strategy = cfg.choice("strategy", STRATEGIES)
    g = cfg.mistake() if cfg.get("kind") == "mistake" else None
    span, tol = cfg.get("span", int), cfg.get("tol", float)
    Ls, Ns = _schedule(cfg, "L")
    rows = []
    for L, N in zip(Ls, Ns):
        t0 = time.perf_counter()
        cover = CylinderCover(system, L)
        s, m = cover_critical_point(system, Z, phi, cover, N, g, strategy, span, min(tol, 1e-9))
        rows.append(_trace_row(args, cover.diam, N, s, m, t0))
    _emit(args, _csv(_trace_header(args), rows))
    return EXIT_OK


def _trace_header(args):
    return ["delta", "N", "critical_s", "m_at_critical"] + (["wall_ms"] if args.timing else [])


def _trace_row(args, delta, N, s, m, t0):
    row = [_fmt(delta), N, _fmt(s), _fmt(m)]
    if args.timing:
        row.append(f"{1000 * (time.perf_counter() - t0):.3f}")
    return row


PIPELINES = ("bowen", "mistake", "avg", "cover", "cover_mistake")


def _pipelines(system, phi, Z, L, N, g, strategy, span):
    cover = CylinderCover(system, L)
    delta = system.radius(L)
    return {
        "bowen": critical_point(system, Z, phi, N, delta, "bowen", None, strategy, span)[0],
        "mistake": critical_point(system, Z, phi, N, delta, "mistake", g, strategy, span)[0],
        "avg": critical_point(system, Z, phi, N, delta, "avg", None, strategy, span)[0],
        "cover": cover_critical_point(system, Z, phi, cover, N, None, strategy, span)[0],
        "cover_mistake": cover_critical_point(system, Z, phi, cover, N, g, strategy, span)[0],
    }


def cmd_compare(args, cfg):
    system, phi, Z = cfg.problem()
    g = cfg.mistake()
    strategy = cfg.choice("strategy", STRATEGIES)
    span, tol = cfg.get("span", int), cfg.get("tol", float)
    Ls, Ns = _schedule(cfg, "deltas")
    oracle = _oracle_value(system, phi, Z)
    pairs = list(itertools.combinations(PIPELINES, 2))
    header = ["L", "delta", "N"] + list(PIPELINES) + [f"{a}-{b}" for a, b in pairs] + ["oracle"]
    rows, last = [], None
    for L, N in zip(Ls, Ns):
        last = _pipelines(system, phi, Z, L, N, g, strategy, span)
        rows.append([L, _fmt(system.radius(L)), N] + [_fmt(last[p]) for p in PIPELINES]
                    + [_fmt(abs(last[a] - last[b])) for a, b in pairs]
                    + ["" if oracle is None else _fmt(oracle)])
    _emit(args, _csv(header, rows))
    diffs = {f"|{a} - {b}|": abs(last[a] - last[b]) for a, b in pairs}
    if oracle is not None:
        diffs.update({f"|{p} - oracle|": abs(last[p] - oracle) for p in PIPELINES})
    worst = max(diffs, key=diffs.get)
    if diffs[worst] > tol:
        print(f"compare: FAIL {worst} = {diffs[worst]:.3e} > tol {tol:g}", file=sys.stderr)
        return EXIT_TOL
    print(f"compare: ok, largest difference {worst} = {diffs[worst]:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_lemma_check(args, cfg):
    system = load_system(cfg.get("system"))
    t0 = time.perf_counter()
    res = lemma_check(system, cfg.get("samples", int), cfg.get("seed", int))
    buf = io.StringIO()
    res.write_csv(buf)
    _emit(args, buf.getvalue())
    msg = f"violations={res.violations} samples={res.samples}"
    if args.timing:
        msg += f" wall_ms={1000 * (time.perf_counter() - t0):.1f}"
    print(msg, file=sys.stderr if args.out is None else sys.stdout)
    return EXIT_OK if res.violations == 0 else EXIT_TOL


def cmd_stirling(args, cfg):
    m, b, C = cfg.get("m", int), cfg.get("budget", int), cfg.get("coversize", int)
    try:
        count = substitution_count(m, b, C)
        bound = stirling_bound(m, b, C)
        gamma = stirling_gamma(m, b, C)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _emit(args, _csv(["m", "budget", "cover_size", "count", "bound", "gamma"],
                     [[m, b, C, count, bound, _fmt(gamma)]]))
    return EXIT_OK


def _g_variants(cfg):
    spec = cfg.get("g")
    params = cfg.get("gparams", _floats)
    family = spec.partition(":")[0]
    if not params or family in ("zero", "linear"):
        return [cfg.mistake(spec)]
    return [cfg.mistake(f"{family}:{p!r}") for p in params]


def cmd_sweep(args, cfg):
    system, phi, Z = cfg.problem()
    strategy = cfg.choice("strategy", STRATEGIES)
    span = cfg.get("span", int)
    Ls, Ns = cfg.get("deltas", _ints), cfg.get("Ns", _ints)
    grid = list(itertools.product(Ls, Ns, _g_variants(cfg)))

    def point(item):
        L, N, g = item
        t0 = time.perf_counter()
        cover = CylinderCover(system, L)
        delta = system.radius(L)
        b = eval_budget(g, N, delta)
        row = [L, _fmt(delta), N, g.spec(), b,
               _fmt(critical_point(system, Z, phi, N, delta, "bowen", None, strategy, span)[0]),
               _fmt(critical_point(system, Z, phi, N, delta, "mistake", g, strategy, span)[0]),
               _fmt(cover_critical_point(system, Z, phi, cover, N, None, strategy, span)[0]),
               _fmt(cover_critical_point(system, Z, phi, cover, N, g, strategy, span)[0]),
               _fmt(stirling_gamma(N, b, count_words(system.transitions, L)))]
        if args.timing:
            row.append(f"{1000 * (time.perf_counter() - t0):.3f}")
        return row

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(point, grid))
    header = ["L", "delta", "N", "g", "budget", "bowen_s", "mistake_s", "cover_s",
              "cover_mistake_s", "gamma"] + (["wall_ms"] if args.timing else [])
    _emit(args, _csv(header, rows))
    return EXIT_OK


def cmd_oracle(args, cfg):
    system, phi, Z = cfg.problem()
    which = cfg.choice("which", ("transfer", "wordcount", "naive-m"))
    if which == "transfer":
        if not isinstance(Z, WholeSpace):
            raise ConfigError("transfer oracle applies to Z = whole only")
        try:
            r = transfer_spectrum(system, phi)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        except NotIrreducible as exc:
            raise ConfigError(str(exc)) from exc
        text = _csv(["which", "pressure", "eigenvalue", "lower", "upper", "iterations"],
                    [[which, _fmt(r.pressure), _fmt(r.eigenvalue), _fmt(r.lower), _fmt(r.upper),
                      r.iterations]])
    elif which == "wordcount":
        N = cfg.get("N", int)
        text = _csv(["which", "N", "pressure"],
                    [[which, N, _fmt(word_count_pressure(system, Z, phi, N))]])
    else:
        N, s = cfg.get("N", int), cfg.get("s", float)
        L = cfg.get("deltas", _ints)[0]
        kind = cfg.choice("kind", KINDS)
        g = cfg.mistake() if kind == "mistake" else None
        span = cfg.get("span", int)
        m = naive_m_infimum(system, Z, s, phi, N, system.radius(L), kind, g, span)
        text = _csv(["which", "L", "N", "s", "kind", "m"], [[which, L, N, _fmt(s), kind, _fmt(m)]])
    _emit(args, text)
    return EXIT_OK


COMMANDS = {
    "pressure": cmd_pressure,
    "cover-pressure": cmd_cover_pressure,
    "compare": cmd_compare,
    "lemma-check": cmd_lemma_check,
    "stirling": cmd_stirling,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", help="key=value file; flags override it")
    shared.add_argument("--system", help="SFT file, builtin:full:<A>[:theta] or builtin:golden[:theta]")
    shared.add_argument("--potential", help="potential file, 'zero' or 'first:<beta>'")
    shared.add_argument("--Z", dest="Z", help="whole | subsft:FILE | cylinders:w1,w2,...")
    shared.add_argument("--g", help="zero | const:<c> | linear | log:<alpha>")
    shared.add_argument("--eps0", type=float)
    shared.add_argument("--seed", type=int)
    shared.add_argument("--out", help="output CSV (default stdout)")
    shared.add_argument("--tol", type=float)
    shared.add_argument("--timing", action="store_true", help="add a wall_ms column")
    shared.add_argument("--strategy", help="uniform | greedy | exhaustive")
    shared.add_argument("--span", type=int, help="extra ball lengths N..N+span for optimised covers")
    shared.add_argument("--kind", help="bowen | mistake | avg")
    shared.add_argument("--Ns", dest="Ns", help="comma list of N (a..b ranges allowed)")

    p = argparse.ArgumentParser(prog="pressurelab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("pressure", "compare", "sweep"):
        sp = sub.add_parser(name, parents=[shared])
        sp.add_argument("--deltas", help="radius exponents L (delta = theta**L), comma list")
        if name == "sweep":
            sp.add_argument("--gparams", help="family parameters for const/log mistake functions")
    sp = sub.add_parser("cover-pressure", parents=[shared])
    sp.add_argument("--L", dest="L", help="cover scales, comma list")
    sp = sub.add_parser("lemma-check", parents=[shared])
    sp.add_argument("--samples", type=int)
    sp = sub.add_parser("stirling", parents=[shared])
    sp.add_argument("--m", type=int)
    sp.add_argument("--budget", type=int)
    sp.add_argument("--coversize", type=int)
    sp = sub.add_parser("oracle", parents=[shared])
    sp.add_argument("--which", help="transfer | wordcount | naive-m")
    sp.add_argument("--N", dest="N", type=int)
    sp.add_argument("--s", dest="s", type=float)
    sp.add_argument("--deltas", help="radius exponent L for naive-m")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = Settings(args)
        return COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InstanceTooLarge as exc:
        print(f"instance too large: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
