"""Command line: ``extkit <command> ...``.

Every command builds a JSON payload; the human output is a rendering of
that payload.  Exit status: 0 success, 1 Unknown/undetermined verdict
under --strict (and failed verify suites), 2 input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import jsonschema

from . import schemas
from .classifier import classify, verdict_json
from .extension import ExtElement, ExtensionError, baer_sum, is_p_pure, is_pure_subgroup, purity_failures, split_test
from .fgab.group import FgError, FgGroup, subgroup
from .fgab.homext import ext_fg
from .groupdsl import ast as A
from .groupdsl import parse, to_text
from .groupdsl.parser import DslError
from .groupdsl.semantics import Unsupported, check
from .invariants import p_basic_subgroup, ulm_bound_beta, ulm_subgroup
from .limtools import Tower, jensen_check, lim1_tower, lim_tower

DEFAULT_DEPTH = 8
EXIT_OK, EXIT_UNDECIDED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def default_depth() -> int:
    raw = os.environ.get("EXTKIT_DEPTH")
    if raw is None:
        return DEFAULT_DEPTH
    try:
        d = int(raw)
    except ValueError:
        raise InputError(f"EXTKIT_DEPTH must be an integer, got {raw!r}")
    if d < 2:
        raise InputError("EXTKIT_DEPTH must be at least 2")
    return d


# -- input helpers ---------------------------------------------------


def _expr(text: str, args):
    e = parse(text, {"p": args.prime})
    check(e)
    return e


def _fg(text: str, args) -> FgGroup:
    e = _expr(text, args)
    if not isinstance(e, A.Fg):
        raise InputError(f"{text!r} is not finitely generated")
    return e.group


def _load(path: str, kind: str):
    try:
        obj = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    try:
        schemas.check(obj, kind)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(x) for x in exc.absolute_path) or "top level"
        raise InputError(f"{path}: schema violation at {where}: {exc.message}")
    return obj


# -- commands --------------------------------------------------------


def cmd_classify(args):
    c, a = _expr(args.C, args), _expr(args.A, args)
    cls, tr = classify(c, a, args.depth)
    out = verdict_json(c, a, cls, tr)
    return out, not cls.is_known


def cmd_ext(args):
    g, h = _fg(args.G, args), _fg(args.H, args)
    e = ext_fg(g, h)
    return {"ext": str(e), "invariant_factors": list(e.invariant_factors), "order": e.order if e.is_finite else "inf"}, False


def cmd_split(args):
    e = ExtElement.from_json(_load(args.file, "extension"))
    s = split_test(e)
    out = {"split": s is not None, "class": list(e.klass())}
    if s is not None:
        out["section"] = [list(r) for r in s.matrix]
    return out, False


def cmd_baer(args):
    e1 = ExtElement.from_json(_load(args.file1, "extension"))
    e2 = ExtElement.from_json(_load(args.file2, "extension"))
    s = baer_sum(e1, e2)
    return {"sum": s.to_json(), "class": list(s.klass()), "split": s.is_split()}, False


def cmd_pbasic(args):
    rep = p_basic_subgroup(_expr(args.K, args), args.p, args.depth)
    out = rep.to_json()
    return out, not rep.stable


def cmd_ulm(args):
    d = _expr(args.descr, args)
    if not isinstance(d, A.PGroup):
        raise InputError("ulm expects a pgroup descriptor")
    return {"ulm_subgroup": to_text(ulm_subgroup(d, args.k))}, False


def cmd_beta(args):
    b = ulm_bound_beta(_expr(args.descr, args))
    return {"beta": b.to_json()}, False


def cmd_lim1(args):
    t = Tower.from_json(_load(args.file, "tower"))
    cert = lim1_tower(t)
    lim = lim_tower(t)
    return {"certificate": cert.to_json(), "lim": lim.to_json()}, cert.verdict == "undetermined"


def cmd_jensen(args):
    rep = jensen_check(_expr(args.C, args), _expr(args.A, args), args.depth)
    return rep.to_json(), rep.verdict == "undetermined"


def cmd_purity(args):
    amb = _fg(args.amb, args)
    try:
        gens = json.loads(args.sub)
    except json.JSONDecodeError as exc:
        raise InputError(f"subgroup generators must be a JSON list of vectors: {exc.msg}")
    if not isinstance(gens, list) or not all(isinstance(v, list) and len(v) == amb.ngens for v in gens):
        raise InputError(f"subgroup generators must be vectors of length {amb.ngens}")
    _, inc = subgroup(amb, [amb.reduce(v) for v in gens])
    out = {"ambient": str(amb), "subgroup": str(inc.domain)}
    if args.p_pure:
        out["p"] = args.prime
        out["p_pure"] = is_p_pure(inc, args.prime)
    else:
        out["pure"] = is_pure_subgroup(inc)
        out["failures"] = purity_failures(inc)
    return out, False


def cmd_verify(args):
    root = Path(args.corpus)
    if not root.is_dir():
        raise InputError(f"missing corpus directory: {root}")
    files = sorted(root.glob("*.json"))
    suites = []
    warnings = []
    if not files:
        warnings.append("empty corpus: nothing to verify")
    failed = False
    for f in files:
        spec = _load(str(f), "corpus")
        rows = []
        for case in spec["cases"]:
            argv = [a.replace("{corpus}", str(root)) for a in case["args"]]
            code, payload, _ = run(argv + ["--json"])
            ok = code == case.get("exit", 0) and _matches(payload, case.get("expect", {}))
            rows.append({"case": case["name"], "ok": ok, "exit": code})
            failed |= not ok
        suites.append({"suite": spec["suite"], "file": f.name, "passed": sum(r["ok"] for r in rows), "total": len(rows), "cases": rows})
    out = {"suites": suites, "warnings": warnings, "ok": not failed}
    if failed:
        raise _VerifyFailed(out)
    return out, False


class _VerifyFailed(Exception):
    def __init__(self, payload):
        self.payload = payload


def _matches(payload, expect) -> bool:
    if isinstance(expect, dict):
        return isinstance(payload, dict) and all(k in payload and _matches(payload[k], v) for k, v in expect.items())
    return payload == expect


# -- parser ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the JSON payload")
    common.add_argument("--depth", type=int, default=None, help="truncation depth / window (default 8 or EXTKIT_DEPTH)")
    common.add_argument("--strict", action="store_true", help="exit 1 on Unknown or undetermined verdicts")
    common.add_argument("--trace", action="store_true", help="show the justification trace")
    common.add_argument("--prime", type=int, default=2, help="value bound to the symbol p in descriptions")

    ap = argparse.ArgumentParser(prog="extkit", description="Extensions of abelian groups: computation and classification.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, helptext, *params):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        for p, kw in params:
            sp.add_argument(p, **kw)
        sp.set_defaults(fn=fn)
        return sp

    add("classify", cmd_classify, "complexity class of R_Ext(C, A)", ("C", {}), ("A", {}))
    add("ext", cmd_ext, "Ext(G, H) for finitely generated groups", ("G", {}), ("H", {}))
    add("split", cmd_split, "split test for an extension file", ("file", {}))
    add("baer", cmd_baer, "Baer sum of two extension files", ("file1", {}), ("file2", {}))
    add("pbasic", cmd_pbasic, "p-basic subgroup report", ("K", {}), ("p", {"type": int}))
    add("ulm", cmd_ulm, "k-th Ulm subgroup of a descriptor", ("descr", {}), ("k", {"type": int}))
    add("beta", cmd_beta, "least beta with A^beta bounded", ("descr", {}))
    add("lim1", cmd_lim1, "lim and lim^1 certificate of a tower file", ("file", {}))
    add("jensen", cmd_jensen, "lim^1 Hom tower against pure-extension evidence", ("C", {}), ("A", {}))
    sp = add("purity", cmd_purity, "purity of a subgroup (JSON generators) in a group", ("sub", {}), ("amb", {}))
    sp.add_argument("--p-pure", action="store_true", help="test p-purity for p = --prime")
    add("verify", cmd_verify, "run a corpus of golden cases", ("corpus", {}))
    return ap


# -- rendering -------------------------------------------------------


def render(payload, trace: bool, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    if isinstance(payload, dict):
        for k, v in payload.items():
            if k in ("trace", "subreports", "chains") and not trace:
                continue
            if _has_dict(v) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render(v, trace, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_flat(v)}")
    elif isinstance(payload, list):
        for v in payload:
            if _has_dict(v):
                lines.append(f"{pad}-")
                lines.append(render(v, trace, indent + 1))
            else:
                lines.append(f"{pad}- {_flat(v)}")
    else:
        lines.append(f"{pad}{_flat(payload)}")
    return "\n".join(x for x in lines if x)


def _has_dict(v) -> bool:
    if isinstance(v, dict):
        return True
    return isinstance(v, list) and any(_has_dict(x) for x in v)


def _flat(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, ensure_ascii=False)
    return str(v)


def render_verify(payload, trace: bool) -> str:
    lines = []
    for s in payload["suites"]:
        mark = "PASS" if s["passed"] == s["total"] else "FAIL"
        lines.append(f"{mark}  {s['suite']}: {s['passed']}/{s['total']}  ({s['file']})")
        for c in s["cases"]:
            if trace or not c["ok"]:
                lines.append(f"      {'ok ' if c['ok'] else 'BAD'} {c['case']} (exit {c['exit']})")
    lines.append("all suites passed" if payload["ok"] else "some suites failed")
    return "\n".join(lines)


def run(argv) -> tuple[int, dict, str]:
    """Execute one command; returns (exit code, payload, rendered text)."""
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        code = EXIT_INPUT if exc.code else EXIT_OK
        return code, {"error": "usage"}, ""
    try:
        if args.depth is None:
            args.depth = default_depth()
        if args.depth < 2:
            raise InputError("--depth must be at least 2")
        payload, undecided = args.fn(args)
        code = EXIT_UNDECIDED if (undecided and args.strict) else EXIT_OK
    except _VerifyFailed as exc:
        payload, code = exc.payload, EXIT_UNDECIDED
    except DslError as exc:
        payload, code = {"error": str(exc), "line": exc.line, "column": exc.col}, EXIT_INPUT
    except (InputError, FgError, ExtensionError, Unsupported, ValueError, KeyError) as exc:
        payload, code = {"error": str(exc)}, EXIT_INPUT
    if args.json:
        text = json.dumps(payload, ensure_ascii=False, indent=2)
    elif args.command == "verify" and "suites" in payload:
        text = render_verify(payload, args.trace)
    else:
        text = render(payload, args.trace)
    return code, payload, text


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, payload, text = run(argv)
    if text:
        stream = sys.stderr if "error" in payload and code == EXIT_INPUT else sys.stdout
        print(text, file=stream)
    if isinstance(payload, dict):
        for w in payload.get("warnings", []):
            print(f"warning: {w}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
