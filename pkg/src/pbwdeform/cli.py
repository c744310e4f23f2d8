"""Command line front end: ``python -m pbwdeform COMMAND FILE.alg [options]``.

Every command prints one JSON report.  Exit status is 0 when all verdicts
pass, 1 when a mathematical verdict fails, 2 on usage or parse errors and 3
when a computation would exceed a cap.
"""

import argparse
import json
import sys
import time
from fractions import Fraction
from importlib import resources

from . import __version__
from .core import CapacityError, FreeElement
from .deformation import (PreconditionError, check_weak_pbw, extract_phi,
                          synthesize_cochains, verify_associativity)
from .filtered import build_filtered, pbw_check, rees, verify_theorems
from .koszul import hochschild_dim, tor3_concentration
from .parser import ParseError, load

SCHEMA_VERSION = 1
DEFAULT_DEGREE_CAP = 6
EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3

COMMANDS = ("check-pbw", "tor3", "synthesize", "verify-assoc", "extract-phi",
            "gr-dims", "rees-dims", "verify-theorems", "hh-dims")


def bundled_path(name):
    """Filesystem path of a bundled example such as ``weyl``."""
    return str(resources.files("pbwdeform") / "data" / f"{name}.alg")


class Context:
    def __init__(self, alg, args):
        self.alg = alg
        self.names = alg.generators
        caps = alg.caps
        self.degree_cap = _pick(args.degree_cap, caps.get("degree"), DEFAULT_DEGREE_CAP)
        # caps declared in the file are defaults and never exceed the degree cap
        file_weight = caps.get("weight")
        if file_weight is not None:
            file_weight = min(file_weight, self.degree_cap)
        self.weight_cap = _pick(args.weight_cap, file_weight, self.degree_cap)
        self.level_cap = _pick(args.level_cap, caps.get("level"), alg.N + 1)
        if self.weight_cap > self.degree_cap:
            raise CapacityError(f"weight cap {self.weight_cap} exceeds degree cap {self.degree_cap}")
        self.waive_tor3 = args.waive_tor3
        self.args = args
        self.pres = alg.presentation(self.degree_cap)
        self.phi = alg.phi_map(self.pres)
        self._series = None

    def caps(self):
        return {"degree": self.degree_cap, "level": self.level_cap, "weight": self.weight_cap}

    def poly(self, elem):
        return FreeElement(elem).format(self.names)

    def word(self, w):
        return self.poly({w: 1}) if w else "1"

    def series(self):
        if self._series is None:
            self._series = synthesize_cochains(self.pres, self.phi, self.level_cap,
                                               self.weight_cap, waive_tor3=self.waive_tor3)
        return self._series


def _pick(*options):
    return next(o for o in options if o is not None)


def jsonable(obj):
    """Fractions become "p/q" strings; tuples become lists; keys become strings."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


# -- commands -----------------------------------------------------------------

def cmd_check_pbw(ctx):
    res = check_weak_pbw(ctx.pres, ctx.phi)
    failures = [{"condition": f["condition"], "witness": ctx.poly(f["witness"]),
                 "residual": ctx.poly(f["residual"])} for f in res["failures"]]
    D = ctx.degree_cap
    crit = pbw_check(build_filtered(ctx.pres, ctx.phi, D), D)
    return res["passed"], {
        "conditions": res["conditions"],
        "failures": failures,
        "basisSize": res["basisSize"],
        "jCriterion": {"passed": crit["passed"], "firstFailure": crit["firstFailure"]},
    }


def cmd_tor3(ctx):
    res = tor3_concentration(ctx.pres, ctx.weight_cap)
    res = dict(res)
    res["witnessWeight"] = res["violatingWeights"][0] if res["violatingWeights"] else None
    res["verdict"] = "concentrated" if res["concentrated"] else "not concentrated"
    return res["concentrated"], res


def _psi_table(ctx, series):
    rows = []
    for level in range(1, series.level_cap + 1):
        for (a, b), v in sorted(series.psi(level).values.items(),
                                key=lambda kv: (len(kv[0][0]) + len(kv[0][1]), kv[0])):
            rows.append({"level": level, "left": ctx.word(a), "right": ctx.word(b),
                         "value": ctx.poly(v)})
    return rows


def cmd_synthesize(ctx):
    series = ctx.series()
    return True, {"levelCap": series.level_cap, "weightCap": series.weight_cap,
                  "tor3Waived": series.meta.get("tor3Waived", False),
                  "psi": _psi_table(ctx, series)}


def cmd_verify_assoc(ctx):
    res = verify_associativity(ctx.series())
    for key in ("equations", "direct"):
        if res[key]:
            res[key] = {"level": res[key]["level"],
                        "triple": [ctx.word(w) for w in res[key]["triple"]]}
    return res["passed"], res


def cmd_extract_phi(ctx):
    recovered = extract_phi(ctx.series())
    rows = ctx.pres.R.rows
    table = [{"relation": ctx.poly(r), "input": ctx.poly(ctx.phi(r)),
              "recovered": ctx.poly(recovered(r))} for r in rows]
    ok = recovered == ctx.phi
    return ok, {"roundTrip": ok, "values": table}


def cmd_gr_dims(ctx):
    D = ctx.degree_cap
    crit = pbw_check(build_filtered(ctx.pres, ctx.phi, D), D)
    per = crit["perDegree"]
    return crit["grMatchesA"], {
        "grDims": [per[d]["grDim"] for d in range(D + 1)],
        "dimA": [per[d]["dimA"] for d in range(D + 1)],
        "jCriterion": {"passed": crit["passed"], "firstFailure": crit["firstFailure"]},
    }


def cmd_rees_dims(ctx):
    rep = rees(build_filtered(ctx.pres, ctx.phi, ctx.degree_cap)).report()
    per = rep["perDegree"]
    return rep["passed"], {"perDegree": [dict(per[d], degree=d) for d in sorted(per)]}


def cmd_verify_theorems(ctx):
    series = None
    if ctx.level_cap >= ctx.degree_cap:
        series = ctx.series()
    res = verify_theorems(ctx.pres, ctx.phi, series=series, D=ctx.degree_cap,
                          L=ctx.level_cap, waive_tor3=ctx.waive_tor3)
    res["failures"] = [{"check": f["check"], "witness": _stringify(ctx, f["witness"])}
                       for f in res["failures"]]
    return res["passed"], res


def _stringify(ctx, obj):
    if obj is None:
        return None
    return json.loads(json.dumps(jsonable(obj), sort_keys=True, default=repr))


def cmd_hh_dims(ctx):
    degrees = ctx.args.hh_degree or [0, 1, 2, 3]
    weights = ctx.args.hh_weight or list(range(-ctx.pres.N, 1))
    def input_cap(w):
        return min(ctx.weight_cap, ctx.degree_cap - max(w, 0))

    table = []
    for i in degrees:
        for w in weights:
            table.append({"degree": i, "weight": w,
                          "dim": hochschild_dim(ctx.pres, i, w, input_cap(w))})
    return True, {"inputWeightCap": ctx.weight_cap, "dims": table}


HANDLERS = {
    "check-pbw": cmd_check_pbw, "tor3": cmd_tor3, "synthesize": cmd_synthesize,
    "verify-assoc": cmd_verify_assoc, "extract-phi": cmd_extract_phi,
    "gr-dims": cmd_gr_dims, "rees-dims": cmd_rees_dims,
    "verify-theorems": cmd_verify_theorems, "hh-dims": cmd_hh_dims,
}


# -- entry point ----------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="pbwdeform",
                                description="PBW deformations of N-homogeneous algebras.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", help="an .alg presentation file, or bundled:NAME")
    p.add_argument("--degree-cap", type=int)
    p.add_argument("--level-cap", type=int)
    p.add_argument("--weight-cap", type=int)
    p.add_argument("--waive-tor3", action="store_true",
                   help="synthesize even when Tor_3 is not concentrated")
    p.add_argument("--json-out", metavar="PATH")
    p.add_argument("--seedless", action="store_true",
                   help="forbid nondeterminism (every computation here is already deterministic)")
    p.add_argument("--timing", action="store_true", help="record wall-clock seconds")
    p.add_argument("--hh-degree", type=int, action="append", help="repeatable; default 0..3")
    p.add_argument("--hh-weight", type=int, action="append", help="repeatable; default -N..0")
    return p


class _UsageError(Exception):
    pass


def run(argv=None):
    """Return (exit code, report dict, parsed arguments); the report is None on usage errors."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = EXIT_PASS if exc.code == 0 else EXIT_USAGE
        return code, None, None
    report = {"schemaVersion": SCHEMA_VERSION, "version": __version__,
              "command": args.command, "input": args.file, "seedless": args.seedless,
              "caps": None, "verdict": None, "result": None, "error": None, "timing": None}
    start = time.perf_counter()
    code = EXIT_PASS
    try:
        path = args.file
        if path.startswith("bundled:"):
            path = bundled_path(path[len("bundled:"):])
        for name in ("degree_cap", "level_cap", "weight_cap"):
            val = getattr(args, name)
            if val is not None and val < 0:
                raise _UsageError(f"--{name.replace('_', '-')} must be non-negative")
        ctx = Context(load(path), args)
        report["caps"] = ctx.caps()
        passed, result = HANDLERS[args.command](ctx)
        report["verdict"] = "pass" if passed else "fail"
        report["result"] = result
        code = EXIT_PASS if passed else EXIT_FAIL
    except (ParseError, _UsageError, OSError, ValueError) as exc:
        report["verdict"] = "error"
        report["error"] = {"kind": type(exc).__name__ if not isinstance(exc, OSError) else "IOError",
                           "message": str(exc)}
        if isinstance(exc, ParseError):
            report["error"].update(line=exc.line, column=exc.col)
        code = EXIT_USAGE
    except CapacityError as exc:
        report["verdict"] = "error"
        report["error"] = {"kind": "CapacityError", "message": str(exc)}
        code = EXIT_CAPACITY
    except PreconditionError as exc:
        report["verdict"] = "fail"
        report["error"] = {"kind": "PreconditionError", "message": str(exc)}
        code = EXIT_FAIL
    if args.timing:
        report["timing"] = round(time.perf_counter() - start, 3)
    return code, jsonable(report), args


def render(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def main(argv=None):
    code, report, args = run(argv)
    if report is None:
        return code
    text = render(report)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code
