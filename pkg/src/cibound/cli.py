"""Command-line interface: ``cibound <command> [options]``.

Exit codes: 0 success, 1 failed internal assertion, 2 invalid input,
3 inconclusive (``smooth --strict``, or too few provably smooth samples
in ``verify``), 4 orbit budget exceeded, 5 divisibility violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from importlib import resources

from . import bounds
from .errors import (
    CharMismatch,
    DivisibilityViolation,
    DivisionByZero,
    FieldMismatch,
    FormSyntaxError,
    InhomogeneousError,
    InsufficientSmoothSamples,
    InvalidInput,
    OrbitBudgetExceeded,
    UnsupportedField,
    UnsupportedSize,
)
from .exactnum import extension, field_of_order, parse_field, prime_to_p_part
from .forms import FormTuple, format_form, parse_form, parse_tuple
from .grouporbit import (
    DEFAULT_BUDGET,
    GroupKind,
    GroupSpec,
    linear_stabilizer,
    projective_stabilizer,
    verify_divisibility,
)
from .resultant import (
    SUPPORTED_SYMBOLIC,
    Verdict,
    cached_discriminant_polynomial,
    discriminant_value,
    is_singular,
)
from .tangent import infinitesimal_symmetries

SCHEMA = 1

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_INVALID = 2
EXIT_INCONCLUSIVE = 3
EXIT_BUDGET = 4
EXIT_VIOLATION = 5

INVALID_ERRORS = (
    InvalidInput,
    FormSyntaxError,
    InhomogeneousError,
    UnsupportedSize,
    UnsupportedField,
    CharMismatch,
    FieldMismatch,
    DivisionByZero,
)


# ---------------------------------------------------------------------------
# corpus


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    field_spec: str
    n: int
    forms: tuple

    def parse(self) -> FormTuple:
        return parse_tuple(";".join(self.forms), self.n, parse_field(self.field_spec))


def parse_corpus(text: str) -> dict:
    entries = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("|")
        if len(parts) != 4:
            raise InvalidInput(f"corpus line {lineno}: expected name|field|n|forms")
        name, fspec, n, forms = (p.strip() for p in parts)
        entry = CorpusEntry(name, fspec, int(n), tuple(s.strip() for s in forms.split(";")))
        entry.parse()
        entries[name] = entry
    return entries


def load_corpus(path=None) -> dict:
    if path is None:
        text = resources.files("cibound").joinpath("data/corpus.txt").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse_corpus(text)


def _corpus_entry(name: str, path=None) -> CorpusEntry:
    corpus = load_corpus(path)
    if name not in corpus:
        raise InvalidInput(f"no corpus entry {name!r}; known: {', '.join(sorted(corpus))}")
    return corpus[name]


# ---------------------------------------------------------------------------
# reporting


def make_report(args, inputs: dict, outputs: dict, timings: dict | None = None, seed=None) -> dict:
    return {
        "schema": SCHEMA,
        "command": args.command,
        "inputs": inputs,
        "outputs": outputs,
        "seed": seed,
        "timings": timings or {},
    }


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def strip_timings(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timings"}


def _emit(args, report: dict, text_lines):
    if getattr(args, "json", False):
        print(dumps(report))
    else:
        for line in text_lines:
            print(line)


def _input_tuple(args) -> FormTuple:
    """Resolve --corpus / --form / --tuple with --field and --n."""
    if getattr(args, "corpus", None):
        return _corpus_entry(args.corpus, args.corpus_file).parse()
    if not getattr(args, "field", None):
        raise InvalidInput("--field is required unless --corpus is given")
    F = parse_field(args.field)
    text = getattr(args, "tuple", None) or getattr(args, "form", None)
    if text is None:
        raise InvalidInput("give --form, --tuple or --corpus")
    return parse_tuple(text, args.n, F)


# ---------------------------------------------------------------------------
# commands


def cmd_bound(args):
    t0 = time.perf_counter()
    if args.specialized:
        bv = bounds.specialized_bound(args.specialized, args.d)
        expected_n = bounds.SPECIALIZED[args.specialized][0]
        if args.n is not None and args.n != expected_n:
            raise InvalidInput(f"--specialized {args.specialized} needs n = {expected_n}")
        n = expected_n
    elif args.vector:
        n = args.n
        bv = bounds.BoundValue(bounds.vector_bound(n, args.d), bounds.Provenance.VECTOR_GL)
    else:
        n = args.n
        bv = bounds.BoundValue(bounds.projective_bound(n, args.d), bounds.Provenance.PROJECTIVE_PGL)
    outputs = {"value": bv.value, "provenance": bv.provenance.value}
    if args.all_checks:
        bad = list(bounds.check_specializations())
        if bad:
            raise AssertionError(f"specialization identities failed at {bad}")
        for nn in range(1, 7):
            for dd in range(3, 21):
                bounds.projective_bound(nn, dd)
        outputs["checks"] = "specializations and integrality hold"
    report = make_report(args, {"n": n, "d": args.d}, outputs, {"total": time.perf_counter() - t0})
    _emit(args, report, [str(bv.value)])
    return EXIT_OK


def cmd_smooth(args):
    t0 = time.perf_counter()
    t = _input_tuple(args)
    res = is_singular(t, args.max_ext)
    inputs = {"field": t.field.spec, "n": t.n, "forms": [format_form(f) for f in t], "max_ext": args.max_ext}
    report = make_report(args, inputs, res.as_dict(), {"total": time.perf_counter() - t0})
    line = f"{res.verdict.value} (method: {res.method})"
    if res.witness is not None:
        line += f" witness ({' : '.join(str(x.field.format(x.value)) for x in res.witness)}) over {res.witness[0].field}"
    _emit(args, report, [line])
    if res.verdict is Verdict.INCONCLUSIVE and args.strict:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_stab(args):
    t0 = time.perf_counter()
    if args.corpus:
        t = _corpus_entry(args.corpus, args.corpus_file).parse()
        if len(t) != 1:
            raise InvalidInput("stabilizers are computed for single forms")
        f = t[0]
        if args.q is not None and args.q != f.field.order:
            raise InvalidInput(f"corpus entry lives over {f.field}, not GF({args.q})")
    else:
        if args.q is None or args.form is None:
            raise InvalidInput("give --q and --form, or --corpus")
        f = parse_form(args.form, args.n, field_of_order(args.q))
    if args.field_ext > 1:
        f = f.change_field(extension(f.field, args.field_ext))
    F = f.field
    smooth = is_singular(f, args.max_ext)
    if not smooth.is_smooth and not args.allow_singular:
        raise InvalidInput(
            f"form is not provably smooth ({smooth.verdict.value}); pass --allow-singular to continue anyway"
        )
    spec = GroupSpec(GroupKind(args.group.upper()), f.n + 1, F)
    if spec.kind is GroupKind.PGL:
        rep = projective_stabilizer(f, spec, args.method, args.budget)
    else:
        rep = linear_stabilizer(f, spec, args.method, args.budget)
    outputs = rep.as_dict()
    outputs["smoothness"] = smooth.verdict.value
    p = F.characteristic
    part = prime_to_p_part(rep.stabilizer_order, p)
    outputs["prime_to_p_part"] = part
    if f.d >= 3:
        bound = bounds.projective_bound(f.n, f.d) if spec.kind is GroupKind.PGL else bounds.vector_bound(f.n, f.d)
        verdict = bounds.divisibility_verdict(rep.stabilizer_order, p, bound)
        outputs["divisibility"] = verdict.as_dict()
        # the bounds only speak about smooth hypersurfaces
        outputs["divisibility"]["applies"] = smooth.is_smooth
        if not verdict.divides and smooth.is_smooth:
            report = make_report(args, {"field": F.spec, "form": format_form(f), "group": str(spec)}, outputs)
            print(dumps(report))
            raise DivisibilityViolation("stabilizer order does not divide the bound", format_form(f), outputs)
    inputs = {"field": F.spec, "form": format_form(f), "group": str(spec), "method": args.method}
    report = make_report(args, inputs, outputs, {"stabilizer": rep.elapsed, "total": time.perf_counter() - t0})
    print(dumps(report))
    return EXIT_OK


def cmd_verify(args):
    t0 = time.perf_counter()
    if args.d <= 2:
        raise InvalidInput(f"verify needs d > 2, got {args.d}")
    inputs = {"n": args.n, "d": args.d, "q": args.q, "samples": args.samples, "max_ext": args.max_ext}
    code = EXIT_OK
    try:
        reps = verify_divisibility(
            args.n, args.d, args.q, args.samples, args.seed, args.max_ext, args.budget, args.workers
        )
        status = "all divide"
    except InsufficientSmoothSamples as exc:
        reps = exc.reports
        status = str(exc)
        code = EXIT_INCONCLUSIVE
    outputs = {
        "status": status,
        "tested": sum(1 for r in reps if r.status == "tested"),
        "skipped": sum(1 for r in reps if r.status != "tested"),
        "vector_bound": bounds.vector_bound(args.n, args.d),
        "projective_bound": bounds.projective_bound(args.n, args.d),
        "samples": [r.as_dict() for r in reps],
    }
    timings = {"total": time.perf_counter() - t0, "per_sample": [r.elapsed for r in reps]}
    report = make_report(args, inputs, outputs, timings, seed=args.seed)
    lines = []
    for r in reps:
        if r.status == "tested":
            lines.append(
                f"[{r.index}] |Stab_GL| = {r.linear_order}, |Stab_PGL| = {r.projective_order}: divides  ({r.form})"
            )
        else:
            lines.append(f"[{r.index}] {r.status}  ({r.form})")
    lines.append(f"{outputs['tested']} tested, {outputs['skipped']} skipped: {status}")
    _emit(args, report, lines)
    return code


def cmd_tangent(args):
    t0 = time.perf_counter()
    t = _input_tuple(args)
    rep = infinitesimal_symmetries(t)
    inputs = {"field": t.field.spec, "n": t.n, "forms": [format_form(f) for f in t]}
    report = make_report(args, inputs, rep.as_dict(), {"total": time.perf_counter() - t0})
    print(dumps(report))
    return EXIT_OK


def cmd_disc(args):
    t0 = time.perf_counter()
    if args.form is not None:
        if not args.field:
            raise InvalidInput("--field is required with --form")
        f = parse_form(args.form, args.n, parse_field(args.field))
        value = discriminant_value(f)
        res = is_singular(f, args.max_ext)
        inputs = {"field": f.field.spec, "form": format_form(f)}
        outputs = {"value": str(value), "smoothness": res.as_dict()}
        report = make_report(args, inputs, outputs, {"total": time.perf_counter() - t0})
        _emit(args, report, [f"{value.field.format(value.value)}  ({res.verdict.value}, method: {res.method})"])
        return EXIT_OK
    if args.n is None or args.d is None:
        raise InvalidInput("give --n and --d for the symbolic discriminant, or --field and --form")
    if (args.n, args.d) not in SUPPORTED_SYMBOLIC:
        raise UnsupportedSize(
            f"symbolic discriminant supported for (n, d) in {sorted(SUPPORTED_SYMBOLIC)}, got ({args.n}, {args.d})"
        )
    poly, path = cached_discriminant_polynomial(args.n, args.d, args.cache_dir, args.refresh)
    outputs = {"polynomial": poly.format(), "terms": len(poly.coeffs), "content": poly.content(), "cache": str(path)}
    report = make_report(args, {"n": args.n, "d": args.d}, outputs, {"total": time.perf_counter() - t0})
    _emit(args, report, [poly.format(), f"cache: {path}"])
    return EXIT_OK


def cmd_corpus(args):
    corpus = load_corpus(args.corpus_file)
    for name, e in corpus.items():
        print(f"{name}: {e.field_spec}, n={e.n}: {'; '.join(e.forms)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _max_ext(text: str):
    if text == "auto":
        return None
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("--max-ext must be >= 1 or 'auto'")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cibound", description="Automorphism bounds for smooth hypersurfaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="exact divisibility bounds")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int, required=True)
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--projective", action="store_true", help="PGL bound (default)")
    kind.add_argument("--vector", action="store_true", help="GL bound")
    kind.add_argument("--specialized", choices=sorted(bounds.SPECIALIZED))
    p.add_argument("--all-checks", action="store_true", help="also assert the specialization identities")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bound)

    def add_input(p, tuple_ok=True):
        p.add_argument("--field", help="QQ, GF(p) or GF(p^m)")
        p.add_argument("--form")
        if tuple_ok:
            p.add_argument("--tuple", help="forms separated by ';'")
        p.add_argument("--n", type=int, help="number of variables minus one (inferred if omitted)")
        p.add_argument("--corpus", metavar="NAME", help="use a named corpus entry")
        p.add_argument("--corpus-file", help="alternative corpus file")

    p = sub.add_parser("smooth", help="decide smoothness of V(f_1, ..., f_k)")
    add_input(p)
    p.add_argument("--max-ext", type=_max_ext, default=4, help="largest extension degree searched, or 'auto'")
    p.add_argument("--strict", action="store_true", help="exit 3 when the verdict is inconclusive")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_smooth)

    p = sub.add_parser("stab", help="stabilizer of a form in GL, SL or PGL")
    p.add_argument("--group", choices=["gl", "sl", "pgl"], default="pgl")
    p.add_argument("--q", type=int)
    p.add_argument("--field-ext", type=int, default=1, help="compute over GF(q^m)")
    p.add_argument("--form")
    p.add_argument("--n", type=int)
    p.add_argument("--corpus", metavar="NAME")
    p.add_argument("--corpus-file")
    p.add_argument("--method", choices=["bfs", "exhaustive"], default="bfs")
    p.add_argument("--allow-singular", action="store_true")
    p.add_argument("--max-ext", type=_max_ext, default=None,
                   help="extension degree for the smoothness check (default: the Bezout bound)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="largest orbit kept in memory")
    p.set_defaults(func=cmd_stab)

    p = sub.add_parser("verify", help="check both bounds on random smooth forms")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-ext", type=_max_ext, default=4)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("tangent", help="infinitesimal projective symmetries")
    add_input(p)
    p.set_defaults(func=cmd_tangent)

    p = sub.add_parser("disc", help="discriminant: symbolic (--n --d) or numeric (--field --form)")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--field")
    p.add_argument("--form")
    p.add_argument("--max-ext", type=_max_ext, default=4)
    p.add_argument("--cache-dir", help="overrides CIBOUND_CACHE_DIR")
    p.add_argument("--refresh", action="store_true", help="recompute even if cached")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_disc)

    p = sub.add_parser("corpus", help="list the named corpus")
    p.add_argument("--corpus-file")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except INVALID_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OrbitBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DivisibilityViolation as exc:
        print(f"VIOLATION: {exc}; form: {exc.form_text}", file=sys.stderr)
        return EXIT_VIOLATION
    except InsufficientSmoothSamples as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except AssertionError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return EXIT_ASSERTION


if __name__ == "__main__":
    sys.exit(main())
