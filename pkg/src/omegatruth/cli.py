"""Command-line front end.

Exit codes: 0 on success, 1 when a proof fails to check (or a demo needs an
inactive schema), 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .coding import CodingError, decode, encode, value
from .kernel import (
    AxiomRejection, CheckError, CheckedTheorem, GAMMA, MissingSchema,
    Refutation, SIGMA, TheoryConfig, check,
)
from .proofscript import ScriptError, parse_script
from .syntax import (
    Eq, Formula, ParseError, Succ, ZERO, parse_formula, parse_term,
    pretty_print, var_index, var_name,
)
from .tactics import (
    TacticError, derive_A1, derive_A2, diagonal_lemma, eval_closed, refl,
)

_MCGEE_NOTES = {
    "1": "diagonal fixed point",
    "2": "from 1 by T-Intro and T-Imp",
    "3": "from 2 by Cons",
    "4": "from 3 by A1",
    "5": "A2",
    "6": "from 4 and 5",
    "7": "from 1 and 6",
    "omega": "omega rule over the truth-iteration family",
}

_LOEB_NOTES = {
    "q": "Robinson arithmetic",
    "internal-consistency": "by T-Intro and Cons",
    "omega-consistency": "by A2, contraposed",
    "reflection": "vacuous reflection from omega-consistency",
    "loeb": "Loeb's theorem for the omega-truth predicate",
}


def _config(args) -> TheoryConfig:
    base = GAMMA if args.theory == "gamma" else SIGMA
    kwargs = {"omega_samples": args.samples}
    if args.max_omega != "unlimited":
        kwargs["max_omega_count"] = int(args.max_omega)
    return replace(base, **kwargs)


def _print_cert(name: str, cert: CheckedTheorem, quiet: bool) -> None:
    c = cert.certificate()
    line = (
        f"{name}: omega_count={c['omega_count']}"
        f" samples_checked={c['samples_checked']} proof_size={c['proof_size']}"
    )
    print(line)
    if not quiet:
        print(f"  formula: {c['formula']}")


def _print_refutation(ref: Refutation, notes: dict, quiet: bool) -> None:
    if not quiet:
        print(f"refutation under {ref.positive.theory.preset_name()}: "
              "both sides below are machine-checked")
        for label, formula in ref.narrative:
            note = notes.get(label, "")
            suffix = f"    ; {note}" if note else ""
            print(f"  {label}. {pretty_print(formula)}{suffix}")
        print()
    _print_cert("positive", ref.positive, quiet)
    _print_cert("negative", ref.negative, quiet)


def _refutation_json(name: str, ref: Refutation) -> dict:
    return {
        "demo": name,
        "positive": ref.positive.certificate(),
        "negative": ref.negative.certificate(),
        "narrative": [
            {"label": label, "formula": pretty_print(f)} for label, f in ref.narrative
        ],
    }


def _cmd_check(args) -> int:
    with open(args.script, encoding="utf-8") as fh:
        text = fh.read()
    script = parse_script(text)
    theory = args.theory or script.theory or "gamma"
    base = GAMMA if theory == "gamma" else SIGMA
    samples = args.samples if args.samples is not None else (script.samples or 8)
    kwargs = {"omega_samples": samples}
    if args.max_omega != "unlimited":
        kwargs["max_omega_count"] = int(args.max_omega)
    cert = check(script.proof, replace(base, **kwargs))
    if args.json:
        print(json.dumps(cert.certificate()))
    else:
        _print_cert("checked", cert, args.quiet)
    return 0


def _cmd_demo(args) -> int:
    from . import theorems as TH

    config = _config(args)
    name = args.name
    if name == "mcgee":
        ref = TH.mcgee_original(config)
        if args.json:
            print(json.dumps(_refutation_json(name, ref)))
        else:
            _print_refutation(ref, _MCGEE_NOTES, args.quiet)
        return 0
    if name == "mcgee-via-loeb":
        ref = TH.mcgee_via_loeb(config)
        if args.json:
            print(json.dumps(_refutation_json(name, ref)))
        else:
            _print_refutation(ref, _LOEB_NOTES, args.quiet)
        return 0
    if name == "loeb":
        zero = Eq(ZERO, ZERO)
        z01 = Eq(ZERO, Succ(ZERO))
        pp = TH.tomega_provability()
        results = {
            "m1": TH.m1(check(refl(ZERO).proof, config)),
            "m2": TH.m2(z01, zero, config),
            "m3": TH.m3(zero, config),
            "a1": check(derive_A1(zero).proof, config),
            "a2": check(derive_A2(zero).proof, config),
            "formalized_loeb": TH.formalized_loeb(pp, z01, config),
        }
        if args.json:
            print(json.dumps({"demo": name, **{k: v.certificate() for k, v in results.items()}}))
        else:
            if not args.quiet:
                print(f"derivability conditions and Loeb's theorem under {config.preset_name()}:")
            for k, v in results.items():
                _print_cert(k, v, args.quiet)
        return 0
    # witness
    report = TH.omega_witness(config, args.samples)
    if args.json:
        print(json.dumps({
            "demo": "witness",
            "family": pretty_print(report.family),
            "var": var_name(report.var),
            "universal_negation": report.universal_negation.certificate(),
            "instances": [c.certificate() for c in report.instances],
        }))
        return 0
    if not args.quiet:
        print(f"witness family psi({var_name(report.var)}) = {pretty_print(report.family)}")
        print("refutable universally, yet provable at every instance (all finitary):")
    _print_cert("~forall", report.universal_negation, args.quiet)
    for n, inst in enumerate(report.instances):
        _print_cert(f"psi({n})", inst, args.quiet)
    return 0


def _parse_expr(text: str):
    try:
        return parse_formula(text)
    except ParseError as formula_err:
        try:
            return parse_term(text)
        except ParseError:
            raise formula_err from None


def _cmd_code(args) -> int:
    expr = _parse_expr(args.expr)
    c = encode(expr)
    if args.json:
        print(json.dumps({
            "kind": "formula" if isinstance(expr, Formula) else "term",
            "text": pretty_print(expr),
            "code_dec": str(c),
            "code_hex": hex(c),
        }))
    else:
        print(f"dec: {c}")
        print(f"hex: {hex(c)}")
    return 0


def _cmd_decode(args) -> int:
    code = int(args.code, 16 if args.code.lower().startswith("0x") else 10)
    expr = decode(code)
    kind = "formula" if isinstance(expr, Formula) else "term"
    if args.json:
        print(json.dumps({"kind": kind, "text": pretty_print(expr)}))
    else:
        print(f"{kind}: {pretty_print(expr)}")
    return 0


def _cmd_diag(args) -> int:
    phi = parse_formula(args.formula)
    v = var_index(args.var)
    if v is None:
        raise ParseError(f"unknown variable {args.var!r}", 0, args.var)
    dr = diagonal_lemma(phi, v)
    cert = check(dr.equivalence_proof, _config(args))
    if args.json:
        print(json.dumps({
            "theta": pretty_print(dr.theta),
            "gamma": pretty_print(dr.gamma),
            "certificate": cert.certificate(),
        }))
        return 0
    if not args.quiet:
        print(f"theta: {pretty_print(dr.theta)}")
        print(f"gamma: {pretty_print(dr.gamma)}")
    _print_cert("equivalence", cert, args.quiet)
    return 0


def _cmd_eval(args) -> int:
    t = parse_term(args.term)
    v = value(t)
    th = eval_closed(t)
    cert = check(th.proof, _config(args))
    if args.json:
        print(json.dumps({
            "term": pretty_print(t),
            "value": str(v),
            "equation": pretty_print(cert.formula),
            "certificate": cert.certificate(),
        }))
        return 0
    if not args.quiet:
        print(f"value: {v}")
        print(f"equation: {pretty_print(cert.formula)}")
    _print_cert("evaluation", cert, args.quiet)
    return 0


def _add_common(p: argparse.ArgumentParser, samples_default=8) -> None:
    p.add_argument("--theory", choices=["gamma", "sigma"], default="gamma",
                   help="axiom schema preset (default gamma)")
    p.add_argument("--samples", type=int, default=samples_default,
                   help="omega-rule generator samples (default 8)")
    p.add_argument("--max-omega", default="unlimited",
                   help="cap on nested omega applications, or 'unlimited'")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--quiet", action="store_true", help="certificates only")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omegatruth",
        description="Proof checker for truth theories over Robinson arithmetic "
                    "with a finitely certified omega-rule.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check a proof script and print its certificate")
    p.add_argument("script", help="path to a proof script")
    p.add_argument("--theory", choices=["gamma", "sigma"], default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--max-omega", default="unlimited")
    p.add_argument("--json", action="store_true")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("demo", help="build and check a bundled derivation")
    p.add_argument("name", choices=["mcgee", "mcgee-via-loeb", "loeb", "witness"])
    _add_common(p)
    p.set_defaults(func=_cmd_demo)

    p = sub.add_parser("code", help="print the code of a formula or term")
    p.add_argument("expr")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_code)

    p = sub.add_parser("decode", help="decode a natural number (decimal or 0x hex)")
    p.add_argument("code")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("diag", help="diagonalize a one-variable formula")
    p.add_argument("formula", help="formula with one free variable")
    p.add_argument("var", help="the distinguished variable")
    _add_common(p)
    p.set_defaults(func=_cmd_diag)

    p = sub.add_parser("eval", help="evaluate a closed term with a proof")
    p.add_argument("term")
    _add_common(p)
    p.set_defaults(func=_cmd_eval)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ScriptError, CodingError, ValueError) as e:
        if isinstance(e, (CheckError, MissingSchema, AxiomRejection, TacticError)):
            print(f"check failure: {e}", file=sys.stderr)
            return 1
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2


run = main


if __name__ == "__main__":
    sys.exit(main())
