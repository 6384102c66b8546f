"""
Command-line front end.

Subcommands: ``evolve``, ``sweep-l``, ``sweep-alpha``, ``hitting``, ``verify``.
Each experiment command writes a CSV: one ``#`` comment line with the
resolved configuration, a header row, then rows sorted by the sweep key.
Floats are written with 12 significant digits.

Parameters come from flags and/or ``--config FILE`` (flat ``key=value``
lines, ``#`` comments, keys named like the flags). Flags win over the file.

Exit codes: 0 success, 1 invalid configuration, 2 runtime failure,
3 verification failure.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import __version__
from .classical import classical_evolve
from .coin import Alpha, format_alpha, parse_alpha
from .evolve import WalkConfig, evolve, position_distribution
from .hitting import DEFAULT_EPSILON, DEFAULT_MAX_STEPS
from .sweeps import DEFAULT_ALPHAS, hitting_sweep, log_grid, sweep_alpha, sweep_loop
from .topology import BinaryTree, DirectedRing, Topology, UndirectedLine
from .verify import CHECKS, PROPERTY_SUITE, run_checks

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_VERIFY = 3

TOPOLOGIES = {
    "undirected-line": "undirected-line",
    "directed-line": "directed-line",
    "directed-ring": "directed-line",
    "binary-tree": "binary-tree",
    "tree": "binary-tree",
}


class ConfigError(ValueError):
    pass


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".12g")


# -- configuration -------------------------------------------------------------


@dataclass
class ExperimentConfig:
    """Resolved parameters of one CLI invocation."""

    command: str
    topology: str = "directed-line"
    sites: int | None = None
    depth: int | None = None
    loop: tuple[float, ...] = ()
    loop_grid: tuple[float, float, int] | None = None
    alpha: tuple[Alpha, ...] = ()
    alpha_grid: tuple[float, float, int] | None = None
    steps: int = 100
    epsilon: float = DEFAULT_EPSILON
    max_steps: int = DEFAULT_MAX_STEPS
    include_absorbed: bool = True
    out: str | None = None
    jobs: int = 1

    def header(self) -> str:
        skip = {"command", "out", "jobs"}
        parts = [f"lqwalk {__version__}", self.command]
        for f in fields(self):
            if f.name in skip:
                continue
            value = getattr(self, f.name)
            if value is None or value == ():
                continue
            if isinstance(value, tuple):
                value = ",".join(format_alpha(v) if f.name == "alpha" else fmt(v) for v in value)
            elif isinstance(value, bool):
                value = str(value).lower()
            elif isinstance(value, float):
                value = fmt(value)
            parts.append(f"{f.name.replace('_', '-')}={value}")
        return "# " + " ".join(parts)

    def build_topology(self, default_sites: int | None = None) -> Topology:
        kind = self.topology
        if kind == "binary-tree":
            return BinaryTree(self.depth if self.depth is not None else 10)
        if kind == "undirected-line":
            return UndirectedLine(self.sites if self.sites is not None else max(self.steps, 1))
        size = self.sites if self.sites is not None else default_sites
        return DirectedRing(size if size is not None else self.steps + 2)

    def loop_values(self, required=True) -> list[float]:
        values = list(self.loop)
        if self.loop_grid is not None:
            values += list(log_grid(*self.loop_grid))
        if required and not values:
            raise ConfigError("give --loop or --loop-grid")
        return values


def read_config_file(path: str) -> dict[str, str]:
    """Parse a flat ``key=value`` file; ``#`` starts a comment."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value, got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-").replace("_", "-")] = value
    return out


def _floats(text) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in str(text).split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


def _grid(text, name) -> tuple[float, float, int]:
    parts = str(text).split(",")
    if len(parts) != 3:
        raise ConfigError(f"--{name} expects start,stop,points, got {text!r}")
    try:
        start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"--{name} expects start,stop,points, got {text!r}") from None
    if not (start > 0 and stop > 0 and points >= 1):
        raise ConfigError(f"--{name} must be strictly positive with points >= 1")
    return start, stop, points


def _alphas(text) -> tuple[Alpha, ...]:
    try:
        return tuple(parse_alpha(v) for v in str(text).split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"bad alpha list {text!r}: {exc}") from None


def _int(text, name, minimum=0) -> int:
    try:
        value = int(str(text))
    except ValueError:
        raise ConfigError(f"--{name} expects an integer, got {text!r}") from None
    if value < minimum:
        raise ConfigError(f"--{name} must be >= {minimum}")
    return value


def _bool(text) -> bool:
    key = str(text).strip().lower()
    if key in ("1", "true", "yes", "on"):
        return True
    if key in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    values = read_config_file(args.config) if getattr(args, "config", None) else {}
    for key in ("topology", "sites", "depth", "loop", "loop-grid", "alpha", "alpha-grid", "steps",
                "epsilon", "max-steps", "include-absorbed", "out", "jobs"):
        flag = getattr(args, key.replace("-", "_"), None)
        if flag is not None:
            values[key] = flag
    known = {"topology", "sites", "depth", "loop", "loop-grid", "alpha", "alpha-grid", "steps",
             "epsilon", "max-steps", "include-absorbed", "out", "jobs", "config"}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")

    cfg = ExperimentConfig(command=args.command)
    if "topology" in values:
        name = str(values["topology"]).strip().lower()
        if name not in TOPOLOGIES:
            raise ConfigError(f"unknown topology {name!r}; choose from {sorted(set(TOPOLOGIES))}")
        cfg.topology = TOPOLOGIES[name]
    if "sites" in values:
        cfg.sites = _int(values["sites"], "sites", 1)
    if "depth" in values:
        cfg.depth = _int(values["depth"], "depth", 1)
    if "loop" in values:
        cfg.loop = _floats(values["loop"])
    if "loop-grid" in values:
        cfg.loop_grid = _grid(values["loop-grid"], "loop-grid")
    if "alpha" in values:
        cfg.alpha = _alphas(values["alpha"])
    if "alpha-grid" in values:
        cfg.alpha_grid = _grid(values["alpha-grid"], "alpha-grid")
    if "steps" in values:
        cfg.steps = _int(values["steps"], "steps", 0)
    if "epsilon" in values:
        cfg.epsilon = _floats(values["epsilon"])[0]
        if not 0 < cfg.epsilon < 1:
            raise ConfigError("--epsilon must lie in (0, 1)")
    if "max-steps" in values:
        cfg.max_steps = _int(values["max-steps"], "max-steps", 1)
    if "include-absorbed" in values:
        v = values["include-absorbed"]
        cfg.include_absorbed = v if isinstance(v, bool) else _bool(v)
    if "out" in values:
        cfg.out = str(values["out"])
    if "jobs" in values:
        cfg.jobs = _int(values["jobs"], "jobs", 1)
    for l in cfg.loop:
        if not (math.isfinite(l) and l >= 0):
            raise ConfigError(f"loop weights must be finite and >= 0, got {l}")
    return cfg


# -- commands --------------------------------------------------------------------


def _csv(cfg: ExperimentConfig, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(cfg.header() + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")
    return buf.getvalue()


def cmd_evolve(cfg: ExperimentConfig) -> str:
    """Quantum and classical position distributions after ``steps`` steps."""
    if len(cfg.loop) != 1 or cfg.loop_grid is not None:
        raise ConfigError("evolve takes exactly one --loop value")
    if len(cfg.alpha) > 1:
        raise ConfigError("evolve takes at most one --alpha value")
    l = cfg.loop[0]
    alpha = cfg.alpha[0] if cfg.alpha else 0.0
    cfg.alpha = (alpha,)
    topo = cfg.build_topology()
    config = WalkConfig(topo, l, alpha, cfg.steps)
    pq = position_distribution(evolve(config), topo, cfg.include_absorbed).probabilities
    pc = classical_evolve(topo, l, cfg.steps).probabilities
    rows = [[int(x), a, b] for x, a, b in zip(topo.labels, pq, pc)]
    return _csv(cfg, ["position", "p_quantum", "p_classical"], rows)


def cmd_sweep_l(cfg: ExperimentConfig) -> str:
    """Mean position against loop weight for each alpha, plus the classical walker."""
    alphas = cfg.alpha or DEFAULT_ALPHAS
    cfg.alpha = tuple(alphas)
    topo = cfg.build_topology()
    rows = sweep_loop(topo, cfg.loop_values(), cfg.steps, alphas, cfg.include_absorbed, cfg.jobs)
    names = [format_alpha(a) for a in alphas]
    header = ["l"] + [f"mean_x_quantum_alpha_{n}" for n in names] + ["mean_x_classical", "status"]
    body = [[r.key] + [r.quantum[n] for n in names] + [r.classical["classical"], r.status] for r in rows]
    return _csv(cfg, header, body)


def cmd_sweep_alpha(cfg: ExperimentConfig) -> str:
    """Mean position against a finite alpha grid at fixed loop weights."""
    alphas = [float(a) for a in cfg.alpha if not isinstance(a, str)]
    if any(isinstance(a, str) for a in cfg.alpha):
        raise ConfigError("sweep-alpha needs numeric alpha values")
    if cfg.alpha_grid is not None:
        alphas += list(log_grid(*cfg.alpha_grid))
    if not alphas:
        raise ConfigError("give --alpha-grid or a numeric --alpha list")
    if any(math.isinf(a) for a in alphas):
        raise ConfigError("sweep-alpha needs finite alpha values")
    ls = cfg.loop_values()
    topo = cfg.build_topology()
    rows = sweep_alpha(topo, alphas, ls, cfg.steps, cfg.include_absorbed, cfg.jobs)
    names = [format(l, ".12g") for l in ls]
    header = (["alpha"] + [f"mean_x_quantum_l_{n}" for n in names]
              + [f"mean_x_classical_l_{n}" for n in names] + ["status"])
    body = [[r.key] + [r.quantum[n] for n in names] + [r.classical[n] for n in names] + [r.status]
            for r in rows]
    return _csv(cfg, header, body)


def cmd_hitting(cfg: ExperimentConfig) -> str:
    """Truncated mean hitting times against loop weight."""
    alphas = cfg.alpha or DEFAULT_ALPHAS
    cfg.alpha = tuple(alphas)
    topo = cfg.build_topology(default_sites=101)
    if isinstance(topo, UndirectedLine):
        raise ConfigError("hitting needs a directed-line or binary-tree topology")
    rows = hitting_sweep(topo, cfg.loop_values(), alphas, cfg.epsilon, cfg.max_steps, cfg.jobs)
    names = [format_alpha(a) for a in alphas]
    header = (["l"] + [f"tau_quantum_alpha_{n}" for n in names] + ["tau_classical"]
              + [f"T_quantum_alpha_{n}" for n in names] + [f"residual_alpha_{n}" for n in names]
              + ["T_classical", "status"])
    body = [
        [r.l] + [r.tau_quantum[n] for n in names] + [r.tau_classical]
        + [r.T_quantum[n] for n in names] + [r.residual[n] for n in names]
        + [r.T_classical, r.status]
        for r in rows
    ]
    return _csv(cfg, header, body)


def cmd_verify(checks=None, coin_factory=None, stream=None) -> int:
    """Run the self-checks, print one line per check, return the exit code."""
    stream = stream or sys.stdout
    kwargs = {} if coin_factory is None else {"coin_factory": coin_factory}
    results = run_checks(checks, **kwargs)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{status} {r.name:<18} observed={fmt(r.observed)} expected {r.expected} ({r.seconds:.2f}s)"
        if r.detail:
            line += f" -- {r.detail}"
        print(line, file=stream)
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed", file=stream)
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {
    "evolve": cmd_evolve,
    "sweep-l": cmd_sweep_l,
    "sweep-alpha": cmd_sweep_alpha,
    "hitting": cmd_hitting,
}


# -- argument parsing ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lqwalk", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"lqwalk {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="key=value file; flags override it")
        p.add_argument("--topology", help="undirected-line | directed-line | binary-tree")
        p.add_argument("--sites", help="ring size N, or half-width n of the undirected line")
        p.add_argument("--depth", help="binary tree depth (default 10)")
        p.add_argument("--steps", help="number of walk steps t (default 100)")
        p.add_argument("--out", help="output CSV path (default stdout)")
        p.add_argument("--jobs", help="worker processes for sweeps (default 1)")
        p.add_argument("--loop", help="loop weight l, or a comma-separated list")
        p.add_argument("--alpha", help="alpha: decimal, 'l' or 'inf'; comma list for sweeps")
        g = p.add_mutually_exclusive_group()
        g.add_argument("--include-absorbed", dest="include_absorbed", action="store_const", const=True,
                       help="count absorbed leaf mass at the leaf level (default)")
        g.add_argument("--exclude-absorbed", dest="include_absorbed", action="store_const", const=False)

    p = sub.add_parser("evolve", help="position distributions at time t")
    common(p)
    p = sub.add_parser("sweep-l", help="mean position against loop weight")
    common(p)
    p.add_argument("--loop-grid", help="log grid start,stop,points")
    p = sub.add_parser("sweep-alpha", help="mean position against alpha")
    common(p)
    p.add_argument("--alpha-grid", help="log grid start,stop,points")
    p = sub.add_parser("hitting", help="mean hitting times against loop weight")
    common(p)
    p.add_argument("--loop-grid", help="log grid start,stop,points")
    p.add_argument("--epsilon", help="uncaptured probability tolerance (default 1e-6)")
    p.add_argument("--max-steps", help="step cap per measured walk (default 1e7)")
    p = sub.add_parser("verify", help="run the self-check suite")
    p.add_argument("--checks", help=f"comma list from: {', '.join(CHECKS)}")
    p.add_argument("--suite", choices=("all", "properties"), default="all")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        if args.checks:
            names = [c.strip() for c in args.checks.split(",") if c.strip()]
            unknown = [c for c in names if c not in CHECKS]
            if unknown:
                print(f"lqwalk: unknown checks: {', '.join(unknown)}", file=sys.stderr)
                return EXIT_CONFIG
        else:
            names = list(PROPERTY_SUITE) if args.suite == "properties" else None
        return cmd_verify(names)
    try:
        cfg = resolve_config(args)
        text = COMMANDS[args.command](cfg)
    except (ValueError, TypeError) as exc:
        print(f"lqwalk: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RuntimeError as exc:
        print(f"lqwalk: runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
