"""Command-line front door.

    shiftcodes analyze X
    shiftcodes verify CODE --property open --property bict
    shiftcodes construct X Y
    shiftcodes gallery NAME
    shiftcodes sgap --members 1,2 | --rule odds --bound 10000

X and Y are presentation documents (JSON files) or builtin names:
``full:K`` / ``full:abc``, ``golden-mean``, ``even``, ``cycle:ab``.
CODE is a code document or one of ``even-cover``, ``yoo``, ``identity:X``.
Reports are JSON with sorted keys; exit status 0 = decided,
2 = some verdict unknown-bounded, 1 = error.
"""

import argparse
import json
import os
import sys
import tempfile

from . import gallery as gal
from .codes import SlidingBlockCode, code_from_document, code_to_document, is_factor_onto
from .errors import CapExceeded, NotFactor, NotSFTDomain, ParseError, ShiftError
from .language import classify, find_synchronizing_word
from .presentations import (as_labeled, cycle, even_shift, from_document, full_shift,
                            golden_mean, sgap_explicit, to_document)
from .spectral import cyclic_cover, entropy_bracket, periodic_profile
from .verify import (VerificationReport, _plain, bict_report, bounded_falsify, certify,
                     closing_delay, one_block, open_decision, search_retract)

SCHEMA_VERSION = 1
PROPERTIES = ("factor", "open", "bict", "right-retract", "left-retract",
              "right-closing", "left-closing")


# -- inputs ----------------------------------------------------------------

def _read_json(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(str(exc), path) from None
    if not text.strip():
        raise ParseError("empty document", path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}", path) from None


def load_presentation(arg):
    if os.path.exists(arg):
        return from_document(_read_json(arg))
    if arg == "golden-mean":
        return as_labeled(golden_mean())
    if arg == "even":
        return even_shift()
    if arg.startswith("full:"):
        spec = arg[5:]
        syms = [str(i) for i in range(int(spec))] if spec.isdigit() else list(spec)
        return as_labeled(full_shift(syms))
    if arg.startswith("cycle:") and arg[6:]:
        return cycle(arg[6:])
    raise ParseError(f"no such file or builtin presentation: {arg!r}", arg)


def load_code(arg):
    if os.path.exists(arg):
        return code_from_document(_read_json(arg))
    if arg == "even-cover":
        return gal.even_cover()
    if arg == "yoo":
        return gal.yoo_code()
    if arg.startswith("identity:"):
        return SlidingBlockCode.identity(load_presentation(arg[9:]))
    raise ParseError(f"no such file or builtin code: {arg!r}", arg)


# -- commands --------------------------------------------------------------

def cmd_analyze(X, cfg):
    cls = classify(X)
    lo, hi = entropy_bracket(X, cfg.tol)
    prof = periodic_profile(X, 12)
    out = {"classify": cls, "entropy": [lo, hi],
           "periodic": {"p": prof.p, "q": prof.q, "per": prof.per}}
    if cls["irreducible"]:
        cc = cyclic_cover(X)
        out["cyclic_cover"] = {"p": cc.p, "component_states":
                               [len(D.base.states) for D in cc.components]}
    w = find_synchronizing_word(X, cfg.list_cap)
    out["synchronizing_word"] = None if w is None else list(w)
    return out, []


def _verify_one(code, prop, cfg):
    if prop == "factor":
        ans = is_factor_onto(code)
        return VerificationReport("factor", "yes" if ans.ok else "no", {},
                                  None if ans.ok else {"word": list(ans.witness)})
    if prop in ("right-closing", "left-closing"):
        D = closing_delay(code, prop.split("-")[0])
        return VerificationReport(prop, "no" if D is None else "yes", {"delay": D})
    sft = classify(code.domain)["sft"] and classify(code.codomain)["sft"]
    if prop in ("right-retract", "left-retract"):
        side = prop.split("-")[0]
        if not sft:
            return bounded_falsify(code, prop, horizon=cfg.horizon, n=cfg.n, seed=cfg.seed)
        res = search_retract(one_block(code), side, cfg.retract_cap)
        verdict = {"found": "yes", "none": "no", "cap": "unknown-bounded"}[res.status]
        return VerificationReport(prop, verdict, {"n": res.n, "cap": res.cap}, res.witness)
    if prop in ("open", "bict"):
        if not is_factor_onto(code).ok:
            raise NotFactor("openness needs a code onto its codomain")
        try:
            rep = open_decision(code, cfg.retract_cap)
        except NotSFTDomain:
            return VerificationReport(prop, "unknown-bounded", {},
                                      None, ["strictly sofic domain: not decided"])
        return rep if prop == "open" else bict_report(rep)
    raise ParseError(f"unknown property {prop!r}; choose from {', '.join(PROPERTIES)}",
                     "--property")


def cmd_verify(code, props, cfg):
    reports = [_verify_one(code, p, cfg) for p in props or ("factor",)]
    return {"code": {"memory": code.memory, "anticipation": code.anticipation}}, reports


def _code_document(code, plan):
    try:
        return code_to_document(code)
    except CapExceeded:
        # the rule-based marker code is too wide to tabulate
        doc = {"kind": "rule", "domain": to_document(code.domain),
               "codomain": to_document(code.codomain),
               "memory": code.memory, "anticipation": code.anticipation,
               "window": code.window}
        if plan is not None:
            doc["rule"] = "marker decoder determined by the plan"
        return doc


def cmd_construct(X, Y, cfg):
    from .construct import construct_factor
    code, plan = construct_factor(X, Y, tol=cfg.tol)
    bound = plan.retract_bound if plan is not None else None
    reports = certify(code, retract_bound=bound, seed=cfg.seed, horizon=cfg.horizon)
    out = {"code": _code_document(code, plan),
           "plan": None if plan is None else plan.to_document()}
    return out, reports


def cmd_gallery(name, cfg):
    kw = {}
    if name in ("yoo",):
        kw = {"horizon": cfg.horizon, "seed": cfg.seed}
    claims = gal.run_gallery(name, **kw)
    return {"gallery": name, "claims": claims}, []


def _sgap_set(args):
    if args.members:
        try:
            members = [int(v) for v in args.members.split(",") if v.strip()]
        except ValueError:
            raise ParseError("members must be comma-separated integers", "--members") from None
        return sgap_explicit(members, "members")
    if args.rule:
        if args.rule not in gal.SGAP_FIXTURES:
            raise ParseError(f"unknown rule {args.rule!r}; choose from "
                             f"{', '.join(gal.SGAP_FIXTURES)}", "--rule")
        return gal.sgap_fixture(args.rule, args.bound)
    raise ParseError("give --members or --rule", "sgap")


def cmd_sgap(S, cfg):
    return {"sgap": S.name, "result": gal.sgap_classify(S, cfg.gap_cap)}, []


# -- output ----------------------------------------------------------------

def render(command, cfg, result, reports):
    doc = {"schema_version": SCHEMA_VERSION, "command": command,
           "config": {"tol": cfg.tol, "retract_cap": cfg.retract_cap,
                      "horizon": cfg.horizon, "seed": cfg.seed},
           "result": _plain(result), "reports": [r.to_document() for r in reports]}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".shiftcodes-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def exit_status(result, reports):
    verdicts = [r.verdict for r in reports]
    if isinstance(result, dict) and "claims" in result:
        if not all(c["match"] for c in result["claims"]):
            return 1
        verdicts += ["unknown-bounded" for c in result["claims"] if c["status"] != "decided"]
    if isinstance(result, dict) and "sgap" in result:
        if not result["result"]["basis"].startswith("exact"):
            verdicts.append("unknown-bounded")
    return 2 if "unknown-bounded" in verdicts else 0


def _positive(kind):
    def parse(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError("must be positive")
        return v
    return parse


def parser():
    p = argparse.ArgumentParser(prog="shiftcodes", description=__doc__.split("\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive(float), default=1e-9)
    common.add_argument("--retract-cap", type=_positive(int), default=64)
    common.add_argument("--horizon", type=_positive(int), default=20)
    common.add_argument("--list-cap", type=_positive(int), default=12)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write the report here (atomically)")
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", parents=[common])
    a.add_argument("presentation")
    v = sub.add_parser("verify", parents=[common])
    v.add_argument("code")
    v.add_argument("--property", action="append", choices=PROPERTIES)
    v.add_argument("--n", type=int, default=0, help="retract for bounded falsification")
    c = sub.add_parser("construct", parents=[common])
    c.add_argument("X")
    c.add_argument("Y")
    g = sub.add_parser("gallery", parents=[common])
    g.add_argument("name")
    s = sub.add_parser("sgap", parents=[common])
    s.add_argument("--members")
    s.add_argument("--rule")
    s.add_argument("--bound", type=_positive(int), default=10 ** 4)
    s.add_argument("--gap-cap", type=_positive(int), default=None)
    return p


def run(argv):
    """Parse argv and run one command; returns (exit status, report text)."""
    args = parser().parse_args(argv)
    try:
        if args.command == "analyze":
            result, reports = cmd_analyze(load_presentation(args.presentation), args)
        elif args.command == "verify":
            result, reports = cmd_verify(load_code(args.code), args.property, args)
        elif args.command == "construct":
            result, reports = cmd_construct(load_presentation(args.X),
                                            load_presentation(args.Y), args)
        elif args.command == "gallery":
            result, reports = cmd_gallery(args.name, args)
        else:
            result, reports = cmd_sgap(_sgap_set(args), args)
    except ShiftError as exc:
        err = {"schema_version": SCHEMA_VERSION, "command": args.command,
               "error": {"type": type(exc).__name__, "message": str(exc)}}
        return 1, json.dumps(err, sort_keys=True, indent=2) + "\n"
    return exit_status(result, reports), render(args.command, args, result, reports)


def main(argv=None):
    args = sys.argv[1:] if argv is None else argv
    status, text = run(args)
    out = parser().parse_args(args).out
    if out and status != 1:
        write_atomic(out, text)
    else:
        (sys.stderr if status == 1 else sys.stdout).write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
