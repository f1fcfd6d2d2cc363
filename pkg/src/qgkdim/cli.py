"""Command-line front end: ``qgkdim {report,growth,verify,quotient,weyl}``.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 unstable series
or exhausted window budget.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import hashlib
import json
import os
import platform
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .checks import LEVELS, SUITES, alpha_d_generators, chi_generators, laurent_generators, pqt_generators, run_suite
from .growth import Backend, InsufficientRowsError, WindowPolicy, degree_detect, gkdim_report, span_growth
from .quotient import gkdim_quotient, parse_lattice
from .weyl import FAMILIES, WeylFamily, longest_element, longest_parts, weyl_group

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSTABLE = 0, 1, 2, 3
PRESETS = ("laurent", "pqt", "alpha-d")

GROWTH_SCHEMA = {
    "type": "object",
    "required": ["config", "series", "degree", "diagnostics", "versions"],
    "properties": {
        "config": {"type": "object"},
        "series": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["m", "d", "window_Rz", "window_Rf", "stable"],
                "properties": {
                    "m": {"type": "integer", "minimum": 1},
                    "d": {"type": "integer", "minimum": 1},
                    "window_Rz": {"type": "integer", "minimum": 0},
                    "window_Rf": {"type": "integer", "minimum": 0},
                    "stable": {"type": "boolean"},
                },
            },
        },
        "degree": {
            "type": ["object", "null"],
            "properties": {
                "degree": {"type": "integer", "minimum": 0},
                "method": {"type": "string"},
                "differences": {"type": "array", "items": {"type": "integer"}},
                "slope": {"type": ["number", "null"]},
                "residual": {"type": ["number", "null"]},
            },
        },
        "diagnostics": {"type": "object", "required": ["backend", "generators", "all_stable"]},
        "versions": {"type": "object"},
    },
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    family: str | None = None
    rank: int | None = None
    word: str = "longest"
    preset: str | None = None
    d: int = 1
    q0: str = "1/2"
    backend: str = "multipoint"
    m_max: int = 8
    fock_cap: int = 8
    laurent_radius: int = 0
    step: int = 2
    budget: int = 24
    cache_dir: str | None = None
    format: str = "table"

    def __post_init__(self):
        q = Fraction(self.q0)
        if not 0 < q < 1:
            raise UsageError(f"q0 must lie in (0, 1), got {self.q0}")
        if self.m_max < 1:
            raise UsageError("m_max must be >= 1")
        if self.budget < self.fock_cap:
            raise UsageError("window budget must be at least the initial radius")
        if self.backend not in ("numeric", "multipoint"):
            raise UsageError(f"unknown backend {self.backend!r}")
        if self.format not in ("json", "csv", "table"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.preset is None and (self.family is None or self.rank is None):
            raise UsageError("growth needs --preset or --family with --rank")
        if self.preset is not None and self.preset not in PRESETS:
            raise UsageError(f"unknown preset {self.preset!r}")

    def payload_key(self) -> dict:
        """Fields that determine the computed result."""
        out = dataclasses.asdict(self)
        for k in ("cache_dir", "format"):
            out.pop(k)
        return out

    def cache_hash(self) -> str:
        blob = json.dumps(self.payload_key(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:24]

    def window(self) -> WindowPolicy:
        return WindowPolicy(self.fock_cap, self.laurent_radius, self.step, self.budget)

    def make_backend(self) -> Backend:
        if self.backend == "numeric":
            return Backend("numeric", q0=Fraction(self.q0))
        return Backend("multipoint")


def _parse_word(text: str, family: str, rank: int) -> tuple[int, ...]:
    if text == "longest":
        return longest_parts(weyl_group(family, rank)).letters
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise UsageError(f"bad word {text!r}") from None


def generators_for(cfg: RunConfig):
    if cfg.preset == "laurent":
        return laurent_generators()
    if cfg.preset == "pqt":
        return pqt_generators()
    if cfg.preset == "alpha-d":
        return alpha_d_generators(cfg.d)
    word = _parse_word(cfg.word, cfg.family, cfg.rank)
    return chi_generators(cfg.family, cfg.rank, word)


def versions() -> dict:
    return {"qgkdim": __version__, "python": platform.python_version(), "numpy": np.__version__}


def growth_payload(cfg: RunConfig, threads: int = 1) -> tuple[dict, str, bool]:
    gens = generators_for(cfg)
    series = span_growth(gens, cfg.m_max, cfg.window(), cfg.make_backend(), threads=threads)
    try:
        est = degree_detect(series)
        degree = {
            "degree": est.degree,
            "method": est.method,
            "differences": [int(x) for x in est.differences],
            "slope": None if np.isnan(est.slope) else round(est.slope, 9),
            "residual": None if np.isnan(est.residual) else round(est.residual, 9),
        }
        note = ""
    except InsufficientRowsError as exc:
        degree, note = None, str(exc)
    rows = [
        {"m": r.m, "d": r.d, "window_Rz": r.window_rz, "window_Rf": r.window_rf, "stable": r.stable} for r in series.rows
    ]
    payload = {
        "config": cfg.payload_key(),
        "series": rows,
        "degree": degree,
        "diagnostics": {
            "backend": series.backend,
            "generators": series.generators,
            "adjoint_closed": gens.adjoint_closed,
            "all_stable": series.all_stable,
            "history": series.history,
            "note": note,
        },
        "versions": versions(),
    }
    jsonschema.validate(payload, GROWTH_SCHEMA)
    return payload, series.to_csv(), series.all_stable


def _table(payload: dict) -> str:
    lines = [f"{'m':>4} {'d(m)':>10} {'R_f':>5} stable"]
    for r in payload["series"]:
        lines.append(f"{r['m']:>4} {r['d']:>10} {r['window_Rf']:>5} {'yes' if r['stable'] else 'no'}")
    deg = payload["degree"]
    lines.append(f"degree: {deg['degree']} ({deg['method']})" if deg else f"degree: n/a ({payload['diagnostics']['note']})")
    return "\n".join(lines) + "\n"


def render(payload: dict, csv_text: str, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        return csv_text
    return _table(payload)


# --------------------------------------------------------------------------- #
# config handling
# --------------------------------------------------------------------------- #

_INT_FIELDS = {"rank", "d", "m_max", "fock_cap", "laurent_radius", "step", "budget"}


def read_config_file(path: str) -> dict:
    """key = value lines, optionally under section headers (all sections merged)."""
    text = Path(path).read_text()
    parser = configparser.ConfigParser()
    parser.read_string("[__top__]\n" + text)
    out = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            key = key.replace("-", "_")
            if key not in {f.name for f in dataclasses.fields(RunConfig)}:
                raise UsageError(f"unknown config key {key!r}")
            out[key] = int(value) if key in _INT_FIELDS else value
    return out


def build_config(args: argparse.Namespace) -> RunConfig:
    values = read_config_file(args.config) if args.config else {}
    if os.environ.get("QGROWTH_CACHE"):
        values["cache_dir"] = os.environ["QGROWTH_CACHE"]
    for f in dataclasses.fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    if values.get("family") is not None:
        values["family"] = str(values["family"]).upper()
    return RunConfig(**values)


# --------------------------------------------------------------------------- #
# commands
# --------------------------------------------------------------------------- #


def cmd_report(args) -> int:
    rep = gkdim_report(args.family, args.rank)
    data = {
        "family": rep.family,
        "n": rep.n,
        "longest_length": rep.longest_length,
        "gkdim": rep.gkdim,
        "manifold_dim": rep.manifold_dim,
        "match": rep.match,
        "enumerated": rep.enumerated,
    }
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        how = "enumerated" if rep.enumerated else "formula"
        print(f"{rep.family}_{rep.n}: l(w0) = {rep.longest_length} ({how})")
        print(f"GKdim = 2l + n = {rep.gkdim}, dim G = {rep.manifold_dim}, match = {rep.match}")
    return EXIT_OK if rep.match else EXIT_FAIL


def cmd_growth(args) -> int:
    cfg = build_config(args)
    cache_dir = Path(cfg.cache_dir) if cfg.cache_dir else None
    entry = cache_dir / f"growth-{cfg.cache_hash()}.json" if cache_dir else None
    if entry is not None and entry.exists():
        stored = json.loads(entry.read_text())
        payload, csv_text, stable = stored["payload"], stored["csv"], stored["payload"]["diagnostics"]["all_stable"]
    else:
        payload, csv_text, stable = growth_payload(cfg, threads=args.threads)
        if entry is not None:
            cache_dir.mkdir(parents=True, exist_ok=True)
            entry.write_text(json.dumps({"payload": payload, "csv": csv_text}, sort_keys=True))
    if args.out:
        Path(args.out + ".csv").write_text(csv_text)
        Path(args.out + ".json").write_text(render(payload, csv_text, "json"))
    sys.stdout.write(render(payload, csv_text, cfg.format))
    return EXIT_OK if stable else EXIT_UNSTABLE


def cmd_verify(args) -> int:
    checks = run_suite(args.suite, args.level)
    summary = {
        "suite": args.suite,
        "level": args.level,
        "passed": all(c.passed for c in checks),
        "checks": [c.to_json() for c in checks],
    }
    if args.format == "json":
        print(json.dumps(summary, indent=2))
    else:
        for c in checks:
            print(f"[{'PASS' if c.passed else 'FAIL'}] {c.suite}: {c.name} ({c.seconds:.2f}s) {c.detail}")
        print(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    if args.json:
        Path(args.json).write_text(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK if summary["passed"] else EXIT_FAIL


def cmd_quotient(args) -> int:
    S = [int(x) for x in args.S.replace(",", " ").split()] if args.S else []
    lattice = parse_lattice(args.lattice, args.rank - len(set(S))) if args.lattice else None
    rep = gkdim_quotient(args.family, args.rank, S, lattice)
    data = {
        "family": rep.family,
        "n": rep.n,
        "S": list(rep.S),
        "coset_length": rep.coset_length,
        "k": rep.k,
        "value": rep.value,
        "torsion": list(rep.torsion),
        "proven": rep.proven,
    }
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        print(f"{rep.family}_{rep.n}, S = {set(rep.S) or '{}'}: l(w^S) = {rep.coset_length}, k = {rep.k}")
        print(f"GKdim = 2l + k = {rep.value}" + ("" if rep.proven else "  (S outside the proven families)"))
        if rep.torsion:
            print(f"torsion in the character group ignored: {list(rep.torsion)}")
    return EXIT_OK


def cmd_weyl(args) -> int:
    group = weyl_group(args.family, args.rank)
    w0 = longest_element(group)
    parts = longest_parts(group)
    data = {
        "family": args.family,
        "n": args.rank,
        "order": group.order(),
        "longest_word": list(w0.letters),
        "longest_length": len(w0),
        "parts": [list(p.letters) for p in parts.parts],
        "formula_length": WeylFamily(args.family, args.rank).longest_length_formula,
    }
    if args.format == "json":
        print(json.dumps(data, indent=2))
    else:
        print(f"W({args.family}_{args.rank}): order {data['order']}, l(w0) = {data['longest_length']}")
        print("w0 = " + " ".join(f"s{i}" for i in w0.letters))
        print("parts: " + " | ".join(" ".join(f"s{i}" for i in p) or "e" for p in data["parts"]))
    return EXIT_OK


# --------------------------------------------------------------------------- #
# parser
# --------------------------------------------------------------------------- #


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _family(text: str) -> str:
    text = text.upper()
    if text not in FAMILIES:
        raise argparse.ArgumentTypeError(f"family must be one of {', '.join(FAMILIES)}")
    return text


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qgkdim", description="Growth and GK dimension of quantum function algebras at desk scale.")
    p.add_argument("--version", action="version", version=f"qgkdim {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("report", help="length and GKdim tables")
    r.add_argument("--family", type=_family, required=True)
    r.add_argument("--rank", type=int, required=True)
    r.add_argument("--format", choices=("table", "json"), default="table")
    r.set_defaults(func=cmd_report)

    g = sub.add_parser("growth", help="span growth d(m) of a generating set")
    g.add_argument("--config", help="INI-style key = value file")
    g.add_argument("--preset", choices=PRESETS)
    g.add_argument("--d", type=int, help="parameter of the alpha-d preset")
    g.add_argument("--family", type=_family)
    g.add_argument("--rank", type=int)
    g.add_argument("--word", help='"longest" or letters such as 1,2,1')
    g.add_argument("--q0")
    g.add_argument("--backend", choices=("numeric", "multipoint"))
    g.add_argument("--m-max", dest="m_max", type=int)
    g.add_argument("--fock-cap", dest="fock_cap", type=int)
    g.add_argument("--laurent-radius", dest="laurent_radius", type=int)
    g.add_argument("--step", type=int)
    g.add_argument("--budget", type=int)
    g.add_argument("--cache-dir", dest="cache_dir")
    g.add_argument("--format", choices=("table", "json", "csv"))
    g.add_argument("--out", help="write PREFIX.csv and PREFIX.json")
    g.add_argument("--threads", type=int, default=1)
    g.set_defaults(func=cmd_growth)

    v = sub.add_parser("verify", help="run property suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--level", choices=LEVELS, default="smoke")
    v.add_argument("--format", choices=("table", "json"), default="table")
    v.add_argument("--json", help="also write the JSON summary here")
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("quotient", help="GKdim of a quotient space")
    q.add_argument("--family", type=_family, required=True)
    q.add_argument("--rank", type=int, required=True)
    q.add_argument("--S", default="", help="subset of simple reflections, e.g. 1,2")
    q.add_argument("--lattice", help='annihilator lattice rows, e.g. "1 0; 0 2"')
    q.add_argument("--format", choices=("table", "json"), default="table")
    q.set_defaults(func=cmd_quotient)

    w = sub.add_parser("weyl", help="Weyl group data")
    w.add_argument("--family", type=_family, required=True)
    w.add_argument("--rank", type=int, required=True)
    w.add_argument("--format", choices=("table", "json"), default="table")
    w.set_defaults(func=cmd_weyl)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"qgkdim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
