"""Command-line front end.

Exit status: 0 when the entailment holds / no counterexample was found,
1 when the entailment fails / a counterexample was found, 2 on usage or
resource errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from matcons import catalog
from matcons.atlas import Atlas, as_atlas, lindenbaum_theories, product_atlas
from matcons.conformity import (
    SearchBudget,
    check_couniform_class,
    check_couniform_syntactic,
    check_uniform_bundle,
    check_uniform_syntactic,
    render,
    revalidate,
    single_matrix_report,
)
from matcons.errors import MatconsError
from matcons.extension import (
    LiftedConsequence,
    conservativity_check,
    lifted_entails,
    validate_wojcicki_witness,
    wojcicki_entails,
)
from matcons.language import (
    Fragment,
    Language,
    extend_language,
    format_formula_set,
    parse_formula,
    parse_formula_set,
    print_formula,
)
from matcons.matrix import MatrixClass, as_class, countermodel, entails_class, sigma_family
from matcons.matrixfile import load_matrix_file

COMMANDS = ("check", "sigma", "theories", "product", "uniformity", "couniformity",
            "single-matrix", "wojcicki", "conservativity")


class UsageError(MatconsError):
    pass


def emit_report(records: Sequence[tuple[str, str]], fmt: str = "text") -> str:
    if fmt == "tsv":
        return "".join(f"{k}\t{v}\n" for k, v in records)
    if fmt != "text":
        raise UsageError(f"unknown format {fmt}")
    width = max((len(k) for k, _ in records), default=0)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in records)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--matrices", metavar="FILE", help="matrix file to load")
    common.add_argument("--use", default="CL2", metavar="NAME[,NAME...]",
                        help="matrices/atlases forming the class (default CL2)")
    common.add_argument("--vars", default="p,q", help="fragment variables")
    common.add_argument("--depth", type=int, default=1, help="fragment depth bound")
    common.add_argument("--set-size", type=int, default=2)
    common.add_argument("--family-size", type=int, default=3)
    common.add_argument("--samples", type=int, default=10_000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "tsv"), default="text")

    p = argparse.ArgumentParser(prog="matcons", description="Matrix consequence workbench.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name in ("check", "wojcicki"):
            sp.add_argument("--premises", default="", help='comma-separated, e.g. "p,(imp p q)"')
            sp.add_argument("--conclusion", required=True)
        if name in ("wojcicki", "conservativity"):
            sp.add_argument("--extend", default="", help="new variables of the extended language")
        if name in ("uniformity", "couniformity"):
            sp.add_argument("--mode", choices=("syntactic", "semantic"), default="syntactic")
        if name == "theories":
            sp.add_argument("--method", choices=("closure", "brute"), default="closure")
    return p


def _names(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _load_class(args) -> tuple[MatrixClass, object]:
    entries = catalog.builtins()
    if args.matrices:
        entries.update(load_matrix_file(args.matrices).entries)
    picked = []
    for name in _names(args.use):
        if name not in entries:
            raise UsageError(f"unknown matrix or atlas {name}")
        picked.append(entries[name])
    if not picked:
        raise UsageError("--use names no matrices")
    subject = picked[0] if len(picked) == 1 else picked
    return as_class(subject), subject


def _budget(args, frag: Fragment) -> SearchBudget:
    return SearchBudget(len(frag.vars), frag.depth, args.set_size, args.family_size,
                        args.samples, args.seed)


def run(argv: Sequence[str] | None = None) -> tuple[int, str]:
    """Execute one command; returns (exit status, report text)."""
    args = _parser().parse_args(argv)
    M, subject = _load_class(args)
    frag = Fragment(tuple(_names(args.vars)), args.depth)
    budget = _budget(args, frag)
    head = [("command", args.command), ("use", args.use)]
    records: list[tuple[str, str]]
    status = 0

    if args.command == "check":
        X = parse_formula_set(args.premises, M.signature) if args.premises else ()
        a = parse_formula(args.conclusion, M.signature)
        ok = entails_class(M, X, a)
        records = [("premises", format_formula_set(X)), ("conclusion", print_formula(a)),
                   ("entails", render(ok))]
        if not ok:
            for i, m in enumerate(M):
                cm = countermodel(m, X, a)
                if cm is not None:
                    records.append(("countermodel.member", str(i)))
                    records.append(("countermodel.valuation",
                                    ",".join(f"{v}={x}" for v, x in cm.items())))
                    break
        status = 0 if ok else 1

    elif args.command == "sigma":
        records = [("fragment", render(frag))]
        for i, m in enumerate(M):
            fam = sigma_family(m, frag)
            records.append((f"member.{i}.sets", str(len(fam))))
            records.append((f"member.{i}.properly_extendable", render(fam.properly_extendable)))
            for k, mask in enumerate(fam.masks):
                records.append((f"member.{i}.set.{k}", format_formula_set(
                    f for j, f in enumerate(fam.formulas) if mask >> j & 1)))

    elif args.command == "theories":
        fam = lindenbaum_theories(M, frag, method=args.method)
        records = [("fragment", render(frag)), ("fragment_size", str(len(fam.formulas))),
                   ("theories", str(len(fam)))]
        for k, mask in enumerate(fam.masks):
            records.append((f"theory.{k}", format_formula_set(
                f for j, f in enumerate(fam.formulas) if mask >> j & 1)))

    elif args.command == "product":
        prod = product_atlas(M)
        records = [("factors", str(len(M))), ("carrier", str(prod.algebra.size)),
                   ("filter_sizes", ",".join(str(len(d)) for d in prod.filters))]

    elif args.command in ("uniformity", "couniformity"):
        if args.command == "uniformity":
            if args.mode == "syntactic":
                v = check_uniform_syntactic(M, budget, frag)
            else:
                atlas = as_atlas(subject if isinstance(subject, Atlas) else M)
                if atlas is None:
                    raise UsageError("semantic uniformity needs a bundle (one shared algebra)")
                subject = atlas
                v = check_uniform_bundle(atlas, frag, budget)
        else:
            v = (check_couniform_syntactic(M, budget, frag) if args.mode == "syntactic"
                 else check_couniform_class(M, frag, budget))
        records = [("fragment", render(frag))] + budget.records() + v.records()
        if v.found:
            target = subject if v.check == "uniform-bundle" else M
            records.append(("witness.revalidated", render(revalidate(v, target))))
            status = 1

    elif args.command == "single-matrix":
        report = single_matrix_report(M, frag, budget)
        records = [("fragment", render(frag))] + budget.records() + report.records()
        status = 0 if report.positive else 1

    elif args.command in ("wojcicki", "conservativity"):
        base = Language(M.signature, tuple(frag.vars))
        ext = extend_language(base, _names(args.extend))
        lc = LiftedConsequence(M, base, ext)
        records = [("base_vars", ",".join(base.named_vars)),
                   ("extended_vars", ",".join(ext.named_vars))]
        if args.command == "wojcicki":
            X = parse_formula_set(args.premises, M.signature) if args.premises else ()
            a = parse_formula(args.conclusion, M.signature)
            res = wojcicki_entails(lc, X, a, budget)
            records += [("premises", format_formula_set(X)), ("conclusion", print_formula(a)),
                        ("found", render(res.found)), ("candidates", str(res.candidates)),
                        ("budget_exhausted", render(res.exhausted)),
                        ("lifted_entails", render(lifted_entails(lc, X, a)))]
            if res.found:
                records += [("witness.Y", format_formula_set(res.Y)),
                            ("witness.beta", print_formula(res.beta)),
                            ("witness.sigma", render(dict(res.sigma))),
                            ("witness.revalidated",
                             render(validate_wojcicki_witness(lc, X, a, res)))]
            status = 0 if res.found else 1
        else:
            v = conservativity_check(lc, frag, budget)
            records += [("fragment", render(frag))] + budget.records() + v.records()
            status = 1 if v.found else 0

    return status, emit_report(head + records, args.format)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        status, text = run(argv)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except (MatconsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
