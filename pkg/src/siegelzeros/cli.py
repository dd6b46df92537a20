"""Command-line front end: identity suites, coefficients, zero scans, residues.

L-series expression language (``--spec``)::

    spec    := factor ( '*' factor )*
    factor  := tensor ( '^' INT )?
    tensor  := atom ( 'x' atom )*
    atom    := 'zeta' | 'chi(' INT ')' | rep '(' FORM ')'
    rep     := 'sym' INT | 'std' | 'isob'

``symJ(f)`` is the J-th symmetric power twisted to trivial central character
when J is even (arithmetic normalization when J is odd), ``std(f)`` is sym1
and ``isob(f)`` is the isobaric sum 1 + sym2 + sym4.  ``x`` is the tensor
(Rankin-Selberg) product of rep atoms on at most two distinct forms; ``*`` is
the product of L-series.  Examples: ``zeta*chi(-163)``,
``sym2(delta)xsym2(delta)``, ``isob(delta)xisob(delta)``.

Exit codes: 0 success, 1 identity mismatch, 2 usage error, 3 accuracy failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import re
import sys
from dataclasses import dataclass
from typing import Optional

import mpmath
import yaml

from . import analytic_scan as an
from .archimedean import c_of_pi, stirling_ratio_check, thickened_conductor
from .char_ring import CharPoly, external, irreducible_char, unit
from .forms_data import MaassFormData, NotFundamental, load_form_file
from .global_series import (
    EXACT,
    FLOAT,
    CharacterFactor,
    FormBank,
    LSeriesSpec,
    RepFactor,
    expand_coeffs,
    log_deriv_coeffs,
    positivity_report,
)
from .identities import REGISTRY, UnknownIdentityTag, run_identity

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_ACCURACY = 0, 1, 2, 3


class UsageError(ValueError):
    pass


class SpecParseError(UsageError):
    def __init__(self, text: str, pos: int, message: str):
        self.pos = pos
        super().__init__(f"{message} at position {pos}\n  {text}\n  {' ' * pos}^")


# -- spec mini-language ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[()*^]))")


def _tokenize(text: str) -> list:
    tokens, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        # after a closing parenthesis a bare 'x' is the tensor operator
        if tokens and tokens[-1][1] == ")":
            m = re.match(r"\s*x", text[pos:])
            if m:
                tokens.append(("sym", "x", pos + m.end() - 1))
                pos += m.end()
                continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SpecParseError(text, pos + len(text[pos:]) - len(text[pos:].lstrip()), "unexpected character")
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


@dataclass
class _Atom:
    kind: str  # "char" | "rep"
    D: int = 1
    form: str = ""
    char: Optional[CharPoly] = None


class SpecParser:
    def __init__(self, text: str, bank: FormBank):
        self.text = text
        self.bank = bank
        self.tokens = _tokenize(text)
        self.i = 0

    def _peek(self):
        return self.tokens[self.i]

    def _take(self, kind=None, value=None):
        tok = self.tokens[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = repr(value) if value is not None else kind
            got = repr(tok[1]) if tok[0] != "end" else "end of input"
            raise SpecParseError(self.text, tok[2], f"expected {want}, found {got}")
        self.i += 1
        return tok

    def parse(self) -> LSeriesSpec:
        factors = [self._factor()]
        while self._peek()[1] == "*":
            self._take()
            factors.append(self._factor())
        self._take("end")
        return self._assemble(factors)

    def _factor(self):
        start = self._peek()[2]
        atoms = [self._atom()]
        while self._peek()[1] == "x":
            self._take()
            atoms.append(self._atom())
        exponent = 1
        if self._peek()[1] == "^":
            self._take()
            tok = self._take("int")
            exponent = int(tok[1])
            if exponent < 1:
                raise SpecParseError(self.text, tok[2], "exponent must be positive")
        return self._factor_from(atoms, exponent, start)

    def _atom(self) -> _Atom:
        tok = self._take("name")
        name, pos = tok[1], tok[2]
        if name == "zeta":
            return _Atom("char", 1)
        if name == "chi":
            self._take("sym", "(")
            d = self._take("int")
            self._take("sym", ")")
            D = int(d[1])
            try:
                CharacterFactor(D)
            except NotFundamental:
                raise SpecParseError(self.text, d[2], f"{D} is not a fundamental discriminant") from None
            return _Atom("char", D)
        m = re.fullmatch(r"sym(\d+)|std|isob", name)
        if not m:
            raise SpecParseError(self.text, pos, f"unknown constructor {name!r}")
        self._take("sym", "(")
        ftok = self._take("name")
        self._take("sym", ")")
        if ftok[1] not in self.bank.names():
            raise SpecParseError(self.text, ftok[2], f"unknown form {ftok[1]!r}")
        if name == "isob":
            char = unit() + irreducible_char(2, -1) + irreducible_char(4, -2)
        else:
            j = 1 if name == "std" else int(m.group(1))
            char = irreducible_char(j, -j // 2 if j % 2 == 0 else 0)
        return _Atom("rep", form=ftok[1], char=char)

    def _factor_from(self, atoms, exponent, pos):
        if len(atoms) == 1 and atoms[0].kind == "char":
            return CharacterFactor(atoms[0].D, exponent)
        if any(a.kind == "char" for a in atoms):
            raise SpecParseError(self.text, pos, "characters cannot appear in a tensor product")
        forms, chars = [], {}
        for a in atoms:
            if a.form not in chars:
                forms.append(a.form)
                chars[a.form] = a.char
            else:
                chars[a.form] = chars[a.form] * a.char
        if len(forms) > 2:
            raise SpecParseError(self.text, pos, "at most two distinct forms per tensor product")
        char = chars[forms[0]] if len(forms) == 1 else external(chars[forms[0]], chars[forms[1]])
        return RepFactor(tuple(forms), char, exponent)

    def _assemble(self, factors) -> LSeriesSpec:
        pole = 0
        N = 1
        mode = EXACT
        for f in factors:
            if isinstance(f, CharacterFactor):
                pole += f.exponent if f.D == 1 else 0
                N *= abs(f.D) ** f.exponent
                continue
            for part in f.rep.parts:
                *label, mult = part
                if all(x == 0 for x in label):
                    pole += mult * f.exponent
            for name in f.forms:
                form = self.bank.form(name)
                if isinstance(form, MaassFormData):
                    mode = FLOAT
                if getattr(form, "level", 1) != 1:
                    raise UsageError(f"form {name!r} has level {form.level}; only level one is supported")
        return LSeriesSpec(self.text.replace(" ", ""), tuple(factors), mode=mode, conductor=N,
                           pole_order=pole)


def parse_spec(text: str, bank: FormBank) -> LSeriesSpec:
    return SpecParser(text, bank).parse()


# -- output ------------------------------------------------------------------------

def fmt(v) -> str:
    """Deterministic text for a real number."""
    if isinstance(v, int):
        return str(v)
    f = float(v)
    if math.isfinite(f):
        return repr(f)
    return mpmath.nstr(v, 17)


@dataclass
class Output:
    text: str
    header: list
    rows: list
    doc: dict

    def render(self, fmt_name: str) -> str:
        if fmt_name == "text":
            return self.text if self.text.endswith("\n") else self.text + "\n"
        if fmt_name == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.header)
            w.writerows(self.rows)
            return buf.getvalue()
        return yaml.safe_dump(self.doc, sort_keys=True, explicit_start=True)


# -- subcommands -------------------------------------------------------------------

def _forms(args) -> list:
    out = []
    for item in args.form or []:
        out += [x for x in item.split(",") if x and "=" not in x]
    return out


def cmd_verify(args, bank):
    tags = []
    for item in args.identity or []:
        tags += sorted(REGISTRY) if item == "all" else item.split(",")
    if not tags:
        raise UsageError("verify needs --identity")
    for tag in tags:
        if tag not in REGISTRY:
            raise UnknownIdentityTag(tag)
    forms = tuple(_forms(args)) or None
    lines, rows, docs = [], [], []
    code = EXIT_OK
    for tag in tags:
        report = run_identity(tag, forms, args.pmax, bank)
        entry = REGISTRY[tag]
        flag = ""
        if entry.informational:
            flag = " (informational: printed typo)"
        elif not report.all_match:
            code = EXIT_MISMATCH
        lines.append(f"{tag} [{report.annotation}] {report.status}{flag}")
        if report.mismatches:
            key, _, idx, a, b = report.mismatches[0]
            lines.append(f"  first difference at {key}, coefficient {idx}: {a} vs {b}")
        for key, status, idx, a, b in report.rows:
            rows.append([tag, str(key), status, "" if idx is None else idx,
                         "" if a is None else str(a), "" if b is None else str(b)])
        doc = report.to_document()
        doc["informational"] = entry.informational
        docs.append(doc)
    out = Output("\n".join(lines), ["tag", "key", "status", "coefficient_index", "lhs", "rhs"], rows,
                 {"identities": docs})
    return out, code


def cmd_coeffs(args, bank):
    spec = _spec(args, bank)
    X = args.xmax
    coeffs = expand_coeffs(spec, X, bank)
    pos = positivity_report(coeffs)
    header = ["n", "a_n"]
    logd = None
    if args.logderiv:
        logd = log_deriv_coeffs(spec, X, bank)
        header.append("c_n")
    rows = []
    for n in range(1, X + 1):
        row = [n, str(coeffs[n])]
        if logd is not None:
            row.append(fmt(logd[n - 1]))
        rows.append(row)
    lines = [f"spec: {spec.name} (degree {spec.degree}, mode {spec.mode})",
             f"coefficients: {pos.describe()}"]
    doc = {"spec": spec.name, "degree": spec.degree, "xmax": X,
           "positivity": {"first_negative": pos.first_violation, "checked": pos.checked},
           "coefficients": [r[1] for r in rows]}
    if logd is not None:
        doc["log_derivative"] = [r[2] for r in rows]
        if spec.mode == FLOAT:
            lpos = positivity_report([float(v) for v in logd], FLOAT)
        else:
            lpos = _exact_sign_report(logd)
        lines.append(f"-L'/L coefficients: {lpos.describe()}")
        doc["log_derivative_positivity"] = {"first_negative": lpos.first_violation, "checked": lpos.checked}
    return Output("\n".join(lines), header, rows, doc), EXIT_OK


def _exact_sign_report(values):
    # the log-derivative values carry the exact sign of the trace
    return positivity_report([0 if v == 0 else (1 if v > 0 else -1) for v in values], EXACT)


def _spec(args, bank) -> LSeriesSpec:
    if not args.spec:
        raise UsageError("this subcommand needs --spec")
    return parse_spec(args.spec, bank)


def _interval(args, M: float):
    if args.interval is None:
        return an.siegel_interval(M, args.c), True
    m = re.fullmatch(r"\s*([0-9.eE+-]+)\s*:\s*([0-9.eE+-]+)\s*", args.interval)
    if not m:
        raise UsageError(f"malformed interval {args.interval!r}; expected a:b")
    try:
        a, b = float(m.group(1)), float(m.group(2))
    except ValueError:
        raise UsageError(f"malformed interval {args.interval!r}; expected a:b") from None
    if not 0 < a < b <= 1:
        raise UsageError(f"interval must satisfy 0 < a < b <= 1, got {a}:{b}")
    return (a, b), False


def cmd_scan(args, bank):
    spec = _spec(args, bank)
    ev = an.prepare(spec, None, bank)
    M = thickened_conductor(ev.conductor, ev.inf)
    (a, b), siegel = _interval(args, M)
    cfg = an.ScanConfig((a, b), args.grid, args.tol, c=args.c, threads=args.threads)
    result = an.scan_real_zeros(ev, None, cfg)
    flags = {z.bracket[0] for z in result.zeros}
    rows = [[fmt(s), fmt(v), 1 if s in flags else 0] for s, v in result.grid]
    lines = [f"spec: {spec.name} (degree {spec.degree}, pole order {ev.pole_order})",
             f"interval: ({fmt(a)}, {fmt(b)}) grid {cfg.grid}",
             f"zeros found: {len(result.zeros)}"]
    zdocs = []
    for z in result.zeros:
        lines.append(f"  {fmt(z.location)} in [{fmt(z.bracket[0])}, {fmt(z.bracket[1])}] {z.status}")
        zdocs.append({"location": fmt(z.location), "bracket": [fmt(x) for x in z.bracket], "status": z.status})
    doc = {"spec": spec.name, "interval": [fmt(a), fmt(b)], "grid": cfg.grid,
           "pole_order": ev.pole_order, "zeros": zdocs, "values": [[r[0], r[1]] for r in rows]}
    if siegel:
        pos = positivity_report(expand_coeffs(spec, args.xmax, bank))
        verdict = "PASS" if pos.ok and len(result.zeros) <= ev.pole_order else "FAIL"
        lines.append(f"thickened conductor M = {fmt(M)}, c = {args.c}")
        lines.append(f"coefficients: {pos.describe()}")
        lines.append(f"zero count bound: {len(result.zeros)} <= {ev.pole_order}: {verdict}")
        doc.update({"M": fmt(M), "c": args.c, "positivity_first_negative": pos.first_violation,
                    "verdict": verdict})
    return Output("\n".join(lines), ["s", "Lambda", "bracket"], rows, doc), EXIT_OK


def cmd_residue(args, bank):
    spec = _spec(args, bank)
    ev = an.prepare(spec, None, bank, target=1e-10)
    methods = ["direct", "richardson"] if args.method == "both" else [args.method]
    values = {m: an.residue_at_one(ev, method=m) for m in methods}
    lines = [f"spec: {spec.name}"] + [f"residue ({m}): {fmt(v)}" for m, v in values.items()]
    doc = {"spec": spec.name, "residue": {m: fmt(v) for m, v in values.items()}}
    rows = [[m, fmt(v)] for m, v in values.items()]
    if args.lower_bound:
        pos = positivity_report(expand_coeffs(spec, args.xmax, bank))
        cfg = an.ScanConfig(grid=args.grid, c=args.c, threads=args.threads)
        res, bound, verdict, cmax = an.siegel_lower_bound_check(ev, cfg, pos)
        lines.append(f"lower bound c/log M = {fmt(bound)}: {verdict} (largest passing c = {fmt(cmax)})")
        doc["lower_bound"] = {"c": args.c, "c_over_logM": fmt(bound), "verdict": verdict,
                              "max_c": fmt(cmax)}
    return Output("\n".join(lines), ["method", "residue"], rows, doc), EXIT_OK


def cmd_gamma(args, bank):
    lines, rows, doc = [], [], {}
    if args.spec:
        spec = parse_spec(args.spec, bank)
        inf = an.spec_infinity(spec, bank)
        shifts = [fmt(b.real) if b.imag == 0 else f"{fmt(b.real)}{'+' if b.imag > 0 else '-'}{fmt(abs(b.imag))}i"
                  for b in inf.shifts]
        lines.append(f"spec: {spec.name}")
        lines.append("gamma factor: prod Gamma_R(s + b), b in {" + ", ".join(shifts) + "}")
        lines.append(f"Lambda = sum |b| = {fmt(inf.analytic_conductor_weight)}")
        rows += [["shift", x] for x in shifts]
        doc.update({"spec": spec.name, "shifts": shifts, "Lambda": fmt(inf.analytic_conductor_weight)})
    if args.t is not None:
        value = c_of_pi(args.t)
        lines.append(f"c(t) = 1/(cosh(2 pi t) cosh(pi t)^2) at t = {args.t}: {fmt(value)}")
        rows.append(["c_of_pi", fmt(value)])
        doc["c_of_pi"] = {"t": args.t, "value": fmt(value)}
        if args.t >= 10:
            dev = stirling_ratio_check(args.t)
            lines.append(f"Stirling ratio deviation: {fmt(dev)}")
            rows.append(["stirling_deviation", fmt(dev)])
            doc["stirling_deviation"] = fmt(dev)
    if not lines:
        raise UsageError("gamma needs --spec or --t")
    return Output("\n".join(lines), ["quantity", "value"], rows, doc), EXIT_OK


def cmd_conductor(args, bank):
    spec = _spec(args, bank)
    inf = an.spec_infinity(spec, bank)
    M = thickened_conductor(spec.conductor, inf)
    a, b = an.siegel_interval(M, args.c)
    rows = [["N", spec.conductor], ["Lambda", fmt(inf.analytic_conductor_weight)], ["M", fmt(M)],
            ["interval_lo", fmt(a)], ["interval_hi", fmt(b)]]
    lines = [f"spec: {spec.name} (degree {spec.degree})",
             f"N = {spec.conductor}, Lambda = {fmt(inf.analytic_conductor_weight)}, M = {fmt(M)}",
             f"interval for c = {args.c}: ({fmt(a)}, {fmt(b)})"]
    doc = {"spec": spec.name, "N": spec.conductor, "Lambda": fmt(inf.analytic_conductor_weight),
           "M": fmt(M), "c": args.c, "interval": [fmt(a), fmt(b)]}
    return Output("\n".join(lines), ["quantity", "value"], rows, doc), EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "coeffs": cmd_coeffs,
    "scan": cmd_scan,
    "residue": cmd_residue,
    "gamma": cmd_gamma,
    "conductor": cmd_conductor,
}


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="siegelzeros", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--form", action="append",
                       help="form name (comma separated allowed) or name=path to load a form file")
        p.add_argument("--identity", action="append", help="identity tag, comma list, or 'all'")
        p.add_argument("--spec", help="L-series expression (see the module docstring for the grammar)")
        p.add_argument("--pmax", type=_positive_int, default=200)
        p.add_argument("--xmax", type=_positive_int, default=1000)
        p.add_argument("--interval", help="scan interval a:b with 0 < a < b <= 1")
        p.add_argument("--grid", type=_positive_int, default=200)
        p.add_argument("--tol", type=_positive_float, default=1e-9)
        p.add_argument("--c", type=_positive_float, default=0.1)
        p.add_argument("--t", type=float)
        p.add_argument("--method", choices=["direct", "richardson", "both"], default="both")
        p.add_argument("--logderiv", action="store_true")
        p.add_argument("--lower-bound", action="store_true")
        p.add_argument("--threads", type=_positive_int, default=1)
        p.add_argument("--out")
        p.add_argument("--format", choices=["text", "csv", "structured"], default="text")
    return parser


def _bank(args) -> FormBank:
    bank = FormBank()
    for item in args.form or []:
        for part in item.split(","):
            if "=" in part:
                name, path = part.split("=", 1)
                bank.register(name, load_form_file(path))
    return bank


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.grid < 2:
            raise UsageError("grid must be at least 2")
        bank = _bank(args)
        out, code = COMMANDS[args.command](args, bank)
    except (an.AccuracyUnreachable, an.RootNumberMismatch) as exc:
        print(f"accuracy failure: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except UnknownIdentityTag as exc:
        print(f"unknown identity tag: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, ValueError, KeyError, OSError, an.NotSelfDual, an.PrerequisiteFailed,
            an.PositivityUnverified) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    data = out.render(args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)
    return code


if __name__ == "__main__":
    sys.exit(main())
