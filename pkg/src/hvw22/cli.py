"""Command-line interface: ``hvw22 <command> [options]``.

Exit codes: 0 success, 1 a certificate failed, 2 invalid input, 3 I/O failure.
Reports are deterministic; every rational is written as an ``"a/b"`` string.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .algebra import AlgebraKind, CentralCharges, format_rational, make_charges, rational
from .characters import hv_irr_character, p2_series, w22_irr_character
from .embedding import branch, verma_branch_decomposition
from .invariants import SUITES, run_suite
from .pbw import ModuleVector
from .screening import screening_report
from .verma import HighestWeightSpec, classify, find_cosingular, find_singular, gram_matrix, irr_graded_dims, verma

FORMAT_VERSION = 1
MAX_LEVEL_UNFORCED = 12
COMMANDS = ("char", "singular", "cosingular", "gram", "branch", "decompose", "kernel", "verify")

# option name -> default; None means "required by some commands, no default"
DEFAULTS: dict[str, Any] = {
    "algebra": "hv",
    "h": None,
    "hi": None,
    "hw": None,
    "p": None,
    "cl": "1",
    "cli": "1",
    "levels": 8,
    "level": None,
    "module": "irr",
    "suite": "all",
    "seed": 0,
    "format": "text",
    "output": None,
    "cache_dir": None,
    "force": False,
    "timing": False,
}


class InputError(Exception):
    """Bad user input; maps to exit code 2."""


@dataclass
class RunConfig:
    command: str
    options: dict[str, Any]

    def __getattr__(self, name):
        try:
            return self.options[name]
        except KeyError:
            raise AttributeError(name) from None

    def echo(self) -> dict:
        keep = {k: v for k, v in self.options.items() if k not in ("output", "cache_dir", "format", "timing") and v is not None}
        return {"command": self.command, **{k: keep[k] for k in sorted(keep)}}


@dataclass
class Report:
    config: RunConfig
    atypicality: dict | None = None
    tables: dict[str, dict[int, Any]] = field(default_factory=dict)
    data: dict[str, Any] = field(default_factory=dict)
    certificates: list[dict] = field(default_factory=list)
    checks: list[dict] = field(default_factory=list)
    timing: float | None = None

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.certificates + self.checks)

    def as_dict(self) -> dict:
        out: dict[str, Any] = {
            "format_version": FORMAT_VERSION,
            "command": self.config.echo(),
            "atypicality": self.atypicality,
            "tables": {name: {str(k): v for k, v in sorted(t.items())} for name, t in self.tables.items()},
            "data": self.data,
            "certificates": self.certificates,
            "checks": self.checks,
            "passed": self.passed,
        }
        if self.timing is not None:
            out["timing_seconds"] = f"{self.timing:.3f}"
        return out


# ---------------------------------------------------------------------------
# parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hvw22", description="Highest-weight modules over W(2,2) and the twisted Heisenberg-Virasoro algebra.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    helps = {
        "char": "graded dimensions of a Verma or irreducible module",
        "singular": "singular vectors of a Verma module",
        "cosingular": "cosingular vectors of a reducible Verma module",
        "gram": "contravariant pairing matrix at one level",
        "branch": "restriction of an irreducible H-module to W(2,2)",
        "decompose": "W(2,2) decomposition of V^H(h, (1-p) c_LI) for typical h",
        "kernel": "kernel of the screening operator S_1(0) on the vacuum module",
        "verify": "run the bundled invariant suites",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name], argument_default=None)
        p.add_argument("--config", help="JSON file with option values; command-line flags win")
        p.add_argument("--algebra", choices=["hv", "w22"])
        p.add_argument("--h", help="L(0) weight, exact rational 'a' or 'a/b'")
        p.add_argument("--hi", help="I(0) weight h_I (hv)")
        p.add_argument("--hw", help="W(0) weight h_W (w22)")
        p.add_argument("--p", help="chain step p for decompose (alternative to --hi)")
        p.add_argument("--cl", help="central charge c_L (default 1)")
        p.add_argument("--cli", help="central charge c_LI, nonzero (default 1)")
        p.add_argument("--levels", type=int, help="maximal level N (default 8)")
        p.add_argument("--level", type=int, help="a single level (singular, cosingular, gram)")
        p.add_argument("--module", choices=["irr", "verma"], help="module for char (default irr)")
        p.add_argument("--suite", choices=["all", *SUITES], help="suite for verify (default all)")
        p.add_argument("--seed", type=int, help="seed for the randomized checks of verify")
        p.add_argument("--format", choices=["text", "json"], help="report format (default text)")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--cache-dir", dest="cache_dir", help="directory for memoized graded dimensions")
        p.add_argument("--force", action="store_const", const=True, help=f"allow N > {MAX_LEVEL_UNFORCED}")
        p.add_argument("--timing", action="store_const", const=True, help="include wall time (makes reports non-reproducible)")
    return parser


def load_config(path: str) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as e:
        raise InputError(f"cannot read config {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"config {path} is not valid JSON: {e}") from None
    if not isinstance(raw, dict):
        raise InputError("config must be a JSON object")
    out = {}
    for k, v in raw.items():
        key = k.replace("-", "_")
        if key not in DEFAULTS:
            raise InputError(f"unknown config key {k!r}")
        if isinstance(v, float):
            raise InputError(f"config key {k!r}: floats are not accepted, write rationals as strings 'a/b'")
        out[key] = v
    return out


def resolve(args: argparse.Namespace) -> RunConfig:
    file_opts = load_config(args.config) if args.config else {}
    opts = {}
    for key, default in DEFAULTS.items():
        val = getattr(args, key, None)
        if val is None:
            val = file_opts.get(key, default)
        opts[key] = val
    cfg = RunConfig(args.command, opts)
    validate(cfg)
    return cfg


def _rat(name: str, value) -> str | None:
    if value is None:
        return None
    try:
        return format_rational(rational(value))
    except (ValueError, TypeError) as e:
        raise InputError(f"--{name}: {e}") from None


def validate(cfg: RunConfig) -> None:
    o = cfg.options
    if o["algebra"] not in ("hv", "w22"):
        raise InputError("--algebra must be 'hv' or 'w22'")
    for k in ("h", "hi", "hw", "cl", "cli", "p"):
        o[k] = _rat(k, o[k])
    if rational(o["cli"]) == 0:
        raise InputError("c_LI must be nonzero")
    for k in ("levels", "level", "seed"):
        v = o[k]
        if v is not None and (isinstance(v, bool) or not isinstance(v, int)):
            raise InputError(f"--{k} must be an integer")
    if o["levels"] < 0:
        raise InputError("--levels must be >= 0")
    if o["level"] is not None and o["level"] < 0:
        raise InputError("--level must be >= 0")
    top = max(o["levels"], o["level"] or 0)
    if top > MAX_LEVEL_UNFORCED and not o["force"]:
        raise InputError(f"level {top} exceeds {MAX_LEVEL_UNFORCED}; exact elimination grows like P2(N)^3, pass --force to proceed")
    if o["module"] not in ("irr", "verma"):
        raise InputError("--module must be 'irr' or 'verma'")
    if o["format"] not in ("text", "json"):
        raise InputError("--format must be 'text' or 'json'")
    if o["suite"] not in ("all", *SUITES):
        raise InputError(f"unknown suite {o['suite']!r}")


def charges_of(cfg: RunConfig) -> CentralCharges:
    return make_charges(cfg.cl, cfg.cli)


def weight_of(cfg: RunConfig, kind: AlgebraKind | None = None) -> HighestWeightSpec:
    kind = kind or (AlgebraKind.HV if cfg.algebra == "hv" else AlgebraKind.W22)
    cc = charges_of(cfg)
    if cfg.h is None:
        raise InputError("--h is required")
    if kind is AlgebraKind.HV:
        if cfg.hw is not None:
            raise InputError("--hw is a W(2,2) weight; use --hi with --algebra hv")
        if cfg.hi is None:
            raise InputError("--hi is required for the hv algebra")
        return HighestWeightSpec.hv(cc, cfg.h, cfg.hi)
    if cfg.hi is not None:
        raise InputError("--hi is an H weight; use --hw with --algebra w22")
    if cfg.hw is None:
        raise InputError("--hw is required for the w22 algebra")
    return HighestWeightSpec.w22(cc, cfg.h, cfg.hw)


def _levels(cfg: RunConfig, lo: int = 1) -> list[int]:
    if cfg.level is not None:
        if cfg.level < lo:
            raise InputError(f"--level must be >= {lo}")
        return [cfg.level]
    return list(range(lo, cfg.levels + 1))


def _vec(model, v: ModuleVector) -> dict:
    return {"text": model.format(v), "terms": [[str(m.key(model.spec.xfam)), format_rational(c)] for m, c in sorted(v.terms.items(), key=lambda t: t[0].sort_key(), reverse=True)]}


def _cert(name: str, passed: bool, detail: str = "", level: int | None = None) -> dict:
    return {"name": name, "passed": bool(passed), "detail": detail, "level": level}


# ---------------------------------------------------------------------------
# commands


def _cached_irr_dims(cfg: RunConfig, spec: HighestWeightSpec, N: int) -> list[int]:
    if not cfg.cache_dir:
        return irr_graded_dims(spec, N)
    cc = spec.charges
    key = f"{spec.kind.value}|{format_rational(cc.c_L)}|{format_rational(cc.c_LI)}|{format_rational(spec.h)}|{format_rational(spec.second)}"
    name = hashlib.sha256(key.encode()).hexdigest()[:24] + ".json"
    path = Path(cfg.cache_dir) / name
    try:
        if path.exists():
            data = json.loads(path.read_text())
            if data.get("key") == key and len(data.get("dims", [])) > N:
                return data["dims"][: N + 1]
    except (OSError, json.JSONDecodeError):
        pass
    dims = irr_graded_dims(spec, N)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps({"key": key, "dims": dims}))
    except OSError as e:
        raise OSError(f"cache directory {cfg.cache_dir}: {e}") from e
    return dims


def cmd_char(cfg: RunConfig, rep: Report) -> None:
    spec = weight_of(cfg)
    at = classify(spec)
    rep.atypicality = at.as_dict()
    N = cfg.levels
    if cfg.module == "verma":
        dims = p2_series(N)
        rep.tables["dims"] = dict(enumerate(dims))
        return
    dims = _cached_irr_dims(cfg, spec, N)
    formula = hv_irr_character(N, at.p) if spec.kind is AlgebraKind.HV else w22_irr_character(N, at.p, at.r)
    rep.tables["dims"] = dict(enumerate(dims))
    rep.tables["character_formula"] = dict(enumerate(formula))
    rep.checks.append(_cert("pairing ranks equal the character formula", dims == formula))


def cmd_singular(cfg: RunConfig, rep: Report) -> None:
    spec = weight_of(cfg)
    rep.atypicality = classify(spec).as_dict()
    V = verma(spec)
    rep.tables["singular"] = {n: [_vec(V, v) for v in find_singular(spec, n)] for n in _levels(cfg)}


def cmd_cosingular(cfg: RunConfig, rep: Report) -> None:
    spec = weight_of(cfg)
    at = classify(spec)
    rep.atypicality = at.as_dict()
    if at.p is None:
        raise InputError(f"{spec.label()} has an irreducible Verma module; there are no cosingular vectors")
    V = verma(spec)
    rep.tables["cosingular"] = {n: [_vec(V, v) for v in find_cosingular(spec, n)] for n in _levels(cfg)}


def cmd_gram(cfg: RunConfig, rep: Report) -> None:
    spec = weight_of(cfg)
    rep.atypicality = classify(spec).as_dict()
    n = cfg.level if cfg.level is not None else 1
    g = gram_matrix(spec, n)
    V = verma(spec)
    xf = V.spec.xfam
    rep.data = {
        "level": n,
        "basis": [m.key(xf) for m in g.matrix.col_labels],
        "matrix": [[format_rational(c) for c in row] for row in g.matrix.dense()],
        "rank": g.rank,
        "radical": [_vec(V, v) for v in g.radical],
    }


def cmd_branch(cfg: RunConfig, rep: Report) -> None:
    if cfg.algebra != "hv":
        raise InputError("branch restricts an H-module; use --algebra hv")
    spec = weight_of(cfg, AlgebraKind.HV)
    b = branch(spec, cfg.levels)
    rep.atypicality = b.atypicality.as_dict()
    rep.tables["host"] = dict(enumerate(b.host_dims))
    rep.tables["submodule"] = dict(enumerate(b.sub_dims))
    rep.tables["quotient"] = dict(enumerate(b.quotient_dims))
    rep.tables["w_singular"] = {n: list(vs) for n, vs in b.w_singular.items()}
    rep.data = {"nonsplit_level": b.nonsplit_level, "w22_weight": {"h": format_rational(spec.h), "h_W": format_rational(spec.h_W)}}
    rep.certificates = [c.as_dict() for c in b.certificates]
    rep.checks = [c.as_dict() for c in b.checks]


def cmd_decompose(cfg: RunConfig, rep: Report) -> None:
    cc = charges_of(cfg)
    if cfg.h is None:
        raise InputError("--h is required")
    if cfg.p is not None:
        p = rational(cfg.p)
        if cfg.hi is not None and rational(cfg.hi) != (1 - p) * cc.c_LI:
            raise InputError("--hi and --p disagree: need h_I = (1 - p) c_LI")
    elif cfg.hi is not None:
        p = 1 - rational(cfg.hi) / cc.c_LI
    else:
        raise InputError("decompose needs --p or --hi")
    if p.denominator != 1 or p < 1:
        raise InputError(f"p = {format_rational(p)} is not a positive integer; decompose needs h_I = (1 - p) c_LI")
    p = int(p)
    spec = HighestWeightSpec.hv(cc, cfg.h, (1 - p) * cc.c_LI)
    at = classify(spec)
    rep.atypicality = at.as_dict()
    if at.atypical:
        raise InputError(f"{spec.label()} is atypical (p={at.p}, r={at.r}); the decomposition needs a typical weight, use branch")
    d = verma_branch_decomposition(spec.h, p, cc, cfg.levels)
    rep.data = {"p": p, "chain_levels": d.chain_levels}
    for lvl, dims in zip(d.chain_levels, d.closure_dims):
        rep.tables[f"closure_{lvl}"] = dict(enumerate(dims))
    rep.tables["sum"] = dict(enumerate(d.union_dims))
    rep.tables["verma"] = dict(enumerate(d.verma_dims))
    rep.checks = [
        _cert("chain vectors are H-singular", all(d.h_singular)),
        _cert("chain vectors are W(2,2)-singular", all(d.w_singular)),
        _cert("closure dims equal the W(2,2) irreducible characters", d.closure_dims == d.expected_dims),
        _cert("closures are independent", d.independent),
        _cert("closures fill the Verma module", d.union_dims == d.verma_dims),
        _cert("telescoping character identity", d.telescoping),
    ]


def cmd_kernel(cfg: RunConfig, rep: Report) -> None:
    sr = screening_report(charges_of(cfg), cfg.levels)
    rep.tables["kernel"] = dict(enumerate(sr.kernel_dims))
    rep.tables["w_closure"] = dict(enumerate(sr.closure_dims))
    rep.tables["character"] = dict(enumerate(sr.character))
    rep.tables["vacuum"] = dict(enumerate(sr.vacuum_dims))
    rep.tables["rank"] = dict(enumerate(sr.ranks))
    rep.tables["U"] = dict(enumerate(sr.u_dims))
    rep.checks = [c.as_dict() for c in sr.certificates]


def cmd_verify(cfg: RunConfig, rep: Report) -> None:
    checks = run_suite(cfg.suite, cfg.levels, seed=cfg.seed)
    rep.checks = [{"name": f"[{c.suite}] {c.name}", "passed": c.passed, "detail": c.detail, "level": None} for c in checks]


HANDLERS = {
    "char": cmd_char,
    "singular": cmd_singular,
    "cosingular": cmd_cosingular,
    "gram": cmd_gram,
    "branch": cmd_branch,
    "decompose": cmd_decompose,
    "kernel": cmd_kernel,
    "verify": cmd_verify,
}


def run(cfg: RunConfig) -> tuple[Report, int]:
    rep = Report(cfg)
    start = time.perf_counter()
    HANDLERS[cfg.command](rep.config, rep)
    if cfg.timing:
        rep.timing = time.perf_counter() - start
    return rep, 0 if rep.passed else 1


# ---------------------------------------------------------------------------
# output


def render_text(rep: Report) -> str:
    lines = [f"# {rep.config.command}  " + " ".join(f"{k}={v}" for k, v in rep.config.echo().items() if k != "command")]
    if rep.atypicality:
        a = rep.atypicality
        extra = ", ".join(f"{k}={a[k]}" for k in ("p", "r", "branch") if a.get(k) is not None)
        lines.append(f"classification: {a['classification']}" + (f" ({extra})" if extra else ""))
    for name, table in rep.tables.items():
        if table and all(isinstance(v, int) for v in table.values()):
            lines.append(f"{name}: " + ",".join(str(table[k]) for k in sorted(table)))
        else:
            lines.append(f"{name}:")
            for lvl in sorted(table):
                vs = table[lvl]
                if not vs:
                    lines.append(f"  level {lvl}: none")
                for v in vs:
                    lines.append(f"  level {lvl}: {v['text'] if isinstance(v, dict) else v}")
    if rep.config.command == "gram":
        d = rep.data
        lines.append(f"level {d['level']} basis: " + ", ".join(d["basis"]))
        for row in d["matrix"]:
            lines.append("  [" + ", ".join(row) + "]")
        lines.append(f"rank: {d['rank']}")
        for v in d["radical"]:
            lines.append(f"radical: {v['text']}")
    elif rep.data:
        for k, v in rep.data.items():
            lines.append(f"{k}: {json.dumps(v, sort_keys=True)}")
    for c in rep.certificates + rep.checks:
        tail = f"  ({c['detail']})" if c.get("detail") else ""
        lines.append(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}{tail}")
    if rep.timing is not None:
        lines.append(f"timing: {rep.timing:.3f}s")
    return "\n".join(lines) + "\n"


def render(rep: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep.as_dict(), indent=2, sort_keys=True) + "\n"
    return render_text(rep)


def emit_report(rep: Report, fmt: str, output: str | None) -> None:
    text = render(rep, fmt)
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        cfg = resolve(args)
        if cfg.levels > MAX_LEVEL_UNFORCED:
            print(f"warning: N = {cfg.levels} above {MAX_LEVEL_UNFORCED}; this may take a long time", file=sys.stderr)
        rep, code = run(cfg)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    try:
        emit_report(rep, cfg.format, cfg.output)
    except OSError as e:
        print(f"error: cannot write report: {e}", file=sys.stderr)
        return 3
    return code


if __name__ == "__main__":
    sys.exit(main())
