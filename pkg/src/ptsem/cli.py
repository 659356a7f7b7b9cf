"""Command-line front end.

Exit status: 0 for an affirmative answer or a passing check, 1 for a negative
answer or a failing check, 2 for bad usage or unreadable input.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from . import cps as C
from .bases import (RuleSyntaxError, UnknownAtomError, derive_tree, derives, format_base,
                    parse_base, parse_rule)
from .completeness import (ReservedAtomError, build_base_N, check_dagger, derivation_to_nd,
                           prove_via_base_witness)
from .g4ip import g4ip_provable
from .natded import nd_check
from .nuclei import equivalence_counterexamples
from .search import ProgramSyntaxError, event_json, parse_program, solve
from .support import UniverseError, infers, parse_universe, supports
from .syntax import FormulaSyntaxError, formulas_up_to_depth, parse_formula, parse_sequent, print_sequent

INPUT_ERRORS = (FormulaSyntaxError, RuleSyntaxError, UnknownAtomError, UniverseError,
                ReservedAtomError, C.TermSyntaxError, ProgramSyntaxError, OSError, ValueError)


@dataclass
class Outcome:
    ok: bool
    result: Any
    text: str
    counterexamples: list = field(default_factory=list)


def _read(path: str) -> str:
    return Path(path).read_text()


def _atom_list(text: str) -> list[str]:
    return [a.strip() for a in text.split(",") if a.strip()]


def _tree_text(tree, indent=0) -> str:
    pad = "  " * indent
    ctx = ", ".join(sorted(tree.context))
    if hasattr(tree, "rule"):
        head = f"{pad}{tree.conclusion}  by {tree.rule}  [context: {ctx}]"
        return "\n".join([head] + [_tree_text(s, indent + 1) for s in tree.subtrees])
    return f"{pad}{tree.conclusion}  by Ref  [context: {ctx}]"


# -- handlers -----------------------------------------------------------------

def cmd_derive(a) -> Outcome:
    base = parse_base(_read(a.base))
    ctx = _atom_list(a.context)
    ok = derives(base, ctx, a.atom)
    text = f"{a.atom} is {'derivable' if ok else 'not derivable'} from {{{', '.join(ctx)}}}"
    if ok and a.tree:
        text += "\n" + _tree_text(derive_tree(base, ctx, a.atom))
    return Outcome(ok, {"derivable": ok}, text)


def _world(W, spec: str) -> int:
    spec = spec.strip()
    if spec.startswith("{"):
        return W.index(int(x) for x in _atom_list(spec.strip("{}")))
    return W.index(int(spec))


def cmd_support(a) -> Outcome:
    W = parse_universe(_read(a.universe))
    i = _world(W, a.at)
    phi = parse_formula(a.formula)
    if a.assume:
        theta = [parse_formula(t) for t in a.assume]
        ok = infers(W, i, theta, phi)
        text = f"{', '.join(a.assume)} {'infer' if ok else 'do not infer'} {a.formula} at base {W.label(i)}"
    else:
        ok = supports(W, i, phi)
        text = f"base {W.label(i)} {'supports' if ok else 'does not support'} {a.formula}"
    return Outcome(ok, {"base": W.label(i), "holds": ok}, text)


def cmd_valid(a) -> Outcome:
    W = parse_universe(_read(a.universe))
    s = parse_sequent(a.sequent)
    failing = [i for i in range(len(W)) if not infers(W, i, s.antecedents, s.succedent)]
    ok = not failing
    cex = [{"base": W.label(i)} for i in failing[:20]]
    text = f"{print_sequent(s)} is {'valid' if ok else 'not valid'} over {len(W)} bases"
    if failing:
        text += "\nfails at: " + " ".join(W.label(i) for i in failing[:20])
    return Outcome(ok, {"valid": ok}, text, cex)


def cmd_prove(a) -> Outcome:
    s = parse_sequent(a.sequent)
    ok = g4ip_provable(s.antecedents, s.succedent)
    return Outcome(ok, {"provable": ok, "method": "g4ip"},
                   f"{print_sequent(s)} is {'provable' if ok else 'not provable'}")


def cmd_prove_via_base(a) -> Outcome:
    s = parse_sequent(a.sequent)
    ok, tree, nb = prove_via_base_witness(s)
    result: dict = {"provable": ok, "method": "base-N"}
    text = f"{print_sequent(s)} is {'provable' if ok else 'not provable'} (derivability in N, {len(nb.base.rules)} rules)"
    if ok:
        proof = derivation_to_nd(tree, nb)
        result["witness"] = {"natural_deduction": proof.to_json(), "checked": nd_check(proof, s)}
        if a.nd:
            text += "\n" + proof.render()
    return Outcome(ok, result, text)


def cmd_flatten(a) -> Outcome:
    s = parse_sequent(a.sequent)
    nb = build_base_N(s)
    header = [f"N for {print_sequent(s)}"] + [f"{k} = {f}" for k, f in nb.flatmap.fresh()]
    text = format_base(nb.base, header).rstrip("\n")
    result = {"flatmap": {k: str(f) for k, f in nb.flatmap.fresh()},
              "atoms": nb.atoms, "rules": [str(r) for r in nb.base.sorted_rules()]}
    return Outcome(True, result, text)


def cmd_dagger(a) -> Outcome:
    s = parse_sequent(a.sequent)
    rep = check_dagger(s, [parse_rule(r) for r in a.extra], close_under_promotion=not a.literal)
    text = (f"(dagger) {'holds' if rep.ok else 'FAILS'} for {print_sequent(s)}: "
            f"{rep.checks} checks over {rep.worlds} bases")
    for c in rep.counterexamples[:20]:
        text += f"\n  base {c['base']}: {c['formula']} supported={c['supports_formula']}, " \
                f"{c['atom']} supported={c['supports_atom']}"
    d = rep.as_dict()
    cex = d.pop("counterexamples")
    return Outcome(rep.ok, d, text, cex)


def cmd_equiv(a) -> Outcome:
    W = parse_universe(_read(a.universe))
    names = _atom_list(a.atoms) if a.atoms else sorted(x for x in W.atom_universe if not x.startswith("#"))
    formulas = formulas_up_to_depth(a.max_depth, names)
    cex = equivalence_counterexamples(W, formulas, limit=a.limit)
    ok = not cex
    text = (f"support and the J-interpretation {'agree' if ok else 'DISAGREE'} on "
            f"{len(formulas)} formulas x {len(W)} bases")
    for c in cex:
        text += f"\n  {c['formula']} at {c['base']}: supports={c['supports']} J={c['in_J_interpretation']}"
    return Outcome(ok, {"formulas": len(formulas), "bases": len(W), "agree": ok}, text, cex)


def _term(a) -> C.Term:
    return C.parse_term(a.term)


def _env(text: Optional[str]) -> dict:
    env = {}
    if text:
        for item in text.split(","):
            if ":" not in item:
                raise C.TermSyntaxError(f"environment entries look like 'x: a -> b', got {item.strip()!r}")
            name, ty = item.split(":", 1)
            env[name.strip()] = C.parse_type(ty)
    return env


def cmd_cps(a) -> Outcome:
    e = _term(a)
    if a.action == "transform":
        out = C.cps_transform(e)
        return Outcome(True, {"term": C.print_term(out)}, C.print_term(out))
    if a.action == "type":
        env = _env(a.env)
        try:
            ty = C.typecheck(env, e)
        except C.CPSTypeError as err:
            return Outcome(False, {"typable": False, "error": str(err)}, f"type error: {err}")
        result = {"typable": True, "type": C.print_type(ty)}
        text = f"{C.print_term(e)} : {C.print_type(ty)}"
        if a.transformed:
            target = C.cps_type(ty)
            preserved = C.check(C.cps_env(env), C.cps_transform(e), target)
            result.update(cps_type=C.print_type(target), preserved=preserved)
            text += f"\ntransform checks against {C.print_type(target)}: {'yes' if preserved else 'NO'}"
            return Outcome(preserved, result, text)
        return Outcome(True, result, text)
    try:
        if a.action == "eval":
            r = C.evaluate(e, a.steps, record=a.trace)
            lines = [C.print_term(t) for t in r.trace] if a.trace else []
            value = r.value
        else:
            r = C.run_cps(e, a.steps, record=a.trace)
            lines = [C.render_step(t, r.continuation_names) for t in r.trace] if a.trace else []
            value = r.value
    except C.EvalTimeout as err:
        return Outcome(False, {"value": None, "timeout": True, "steps": err.steps}, f"timeout: {err}")
    except C.Stuck as err:
        return Outcome(False, {"value": None, "stuck": str(err)}, f"stuck: {err}")
    text = "\n".join([f"{'   ' if n else ''}{'~> ' if n else ''}{t}" for n, t in enumerate(lines)]
                     + [f"value: {C.print_term(value)} ({r.steps} steps)"])
    result = {"value": C.print_term(value), "steps": r.steps}
    if a.trace:
        result["trace"] = lines
    return Outcome(True, result, text)


def cmd_search(a) -> Outcome:
    p = parse_program(_read(a.program))
    r = solve(p, a.goal, a.depth_cap)
    text = f"{a.goal}: {r.status}"
    if a.trace:
        text = "\n".join([str(e) for e in r.trace] + [text])
    return Outcome(bool(r.value), {"status": r.status, "trace": [event_json(e) for e in r.trace]}, text)


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ptsem", description="Base-extension semantics workbench.")
    p.add_argument("--json", action="store_true", help="print a JSON report")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print a JSON report")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("derive", cmd_derive, "atomic derivability in a base")
    sp.add_argument("--base", required=True, help="base file")
    sp.add_argument("--context", default="", help="comma-separated atoms")
    sp.add_argument("--atom", required=True)
    sp.add_argument("--tree", action="store_true", help="print a derivation tree")

    sp = add("support", cmd_support, "support (or inference with --assume) at one base")
    sp.add_argument("--universe", required=True)
    sp.add_argument("--at", required=True, help="rule-index set like {0,2}, or a world number")
    sp.add_argument("--formula", required=True)
    sp.add_argument("--assume", action="append", default=[], help="hypothesis (repeatable)")

    sp = add("valid", cmd_valid, "validity of a sequent over a universe")
    sp.add_argument("--universe", required=True)
    sp.add_argument("--sequent", required=True)

    sp = add("prove", cmd_prove, "intuitionistic provability (G4ip)")
    sp.add_argument("--sequent", required=True)

    sp = add("prove-via-base", cmd_prove_via_base, "provability as derivability in the base N")
    sp.add_argument("--sequent", required=True)
    sp.add_argument("--nd", action="store_true", help="print the natural-deduction proof")

    sp = add("flatten", cmd_flatten, "fresh atoms and the base N, in base-file format")
    sp.add_argument("--sequent", required=True)

    sp = add("dagger-check", cmd_dagger, "support of each subformula vs. derivability of its atom")
    sp.add_argument("--sequent", required=True)
    sp.add_argument("--extra", action="append", default=[], help="extra rule (repeatable)")
    sp.add_argument("--literal", action="store_true",
                    help="do not add the promotion axioms (=> [phi]) to the rule universe")

    sp = add("equiv-check", cmd_equiv, "support vs. the J-interpretation on all small formulas")
    sp.add_argument("--universe", required=True)
    sp.add_argument("--max-depth", type=int, default=3)
    sp.add_argument("--atoms", default="", help="atoms for formula generation (default: the universe's)")
    sp.add_argument("--limit", type=int, default=20, help="maximum counterexamples reported")

    sp = add("cps", cmd_cps, "lambda terms: transform, eval, run, type")
    sp.add_argument("action", choices=["transform", "eval", "run", "type"])
    sp.add_argument("term", help="lambda term, e.g. '(\\x. x) C'")
    sp.add_argument("--steps", type=int, default=10_000, help="step budget")
    sp.add_argument("--trace", action="store_true", help="print every reduction step")
    sp.add_argument("--env", help="typing environment, e.g. 'f: a -> b, C: a'")
    sp.add_argument("--transformed", action="store_true",
                    help="with 'type': also check the transform against the CPS type")

    sp = add("search", cmd_search, "continuation-based proof search")
    sp.add_argument("--program", required=True, help="program file")
    sp.add_argument("--goal", required=True)
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("--depth-cap", type=int, default=64)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    command = " ".join(argv if argv is not None else sys.argv[1:])
    t0 = time.perf_counter()
    try:
        out = a.fn(a)
    except INPUT_ERRORS as e:
        if a.json:
            print(json.dumps({"command": command, "error": str(e)}))
        else:
            print(f"error: {e}", file=sys.stderr)
        return 2
    elapsed = time.perf_counter() - t0
    if a.json:
        print(json.dumps({"command": command, "result": out.result,
                          "counterexamples": out.counterexamples,
                          "timing": {"seconds": round(elapsed, 6)}}, indent=2))
    else:
        print(out.text)
    return 0 if out.ok else 1


if __name__ == "__main__":
    sys.exit(main())
