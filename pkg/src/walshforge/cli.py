"""Command-line front end: analyze, reproduce, verify, selftest.

All JSON output carries the schema tag ``walsh-forge/1`` and is emitted
with sorted keys so that identical inputs, seed, and version produce
byte-identical bytes.  Reproduction and verification outputs contain no
wall-clock data; analysis reports carry timings in a dedicated field that
is documented as the only run-dependent part of any report.

Exit codes: 0 success, 1 mismatch/failed promise, 2 invalid spec or
violated hypothesis, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

import numpy as np

from . import __version__
from .boolfun import BooleanFunction, classify, walsh_direct
from .constructions import (
    DEFAULT_SEED,
    ConstructionSpec,
    DOProduct,
    NihoTrinomial,
    Quadrinomial,
    TraceLinear,
    find_fourbe_cs,
    parameterize,
    parse_spec,
    sample_do,
    sample_quadrinomial,
    valid_trace_linear_cs,
)
from .errors import HypothesisViolated, InvalidSpec, WalshForgeError
from .field import field_new, field_text, parse_field_text
from .oracles import CASE_IDS, TheoremCase, verify_theorem

SCHEMA = "walsh-forge/1"
TABLE_TARGETS = ("table1", "table3", "table4")


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write_text(path, text: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _histogram_cell(pairs) -> str:
    return ";".join(f"{v}:{c}" for v, c in pairs)


def _csv_text(rows) -> str:
    buf = []
    out = csv.writer(_ListWriter(buf), lineterminator="\n")
    out.writerow(["n", "family", "params", "histogram", "nl", "degree", "ai", "class"])
    for r in rows:
        out.writerow([r["n"], r["family"], r["params"], _histogram_cell(r["histogram"]),
                      r["nl"], r["degree"], "" if r["ai"] is None else r["ai"], r["class"]])
    return "".join(buf)


class _ListWriter:
    def __init__(self, sink):
        self.sink = sink

    def write(self, chunk):
        self.sink.append(chunk)


def _matching_cases(spec: ConstructionSpec) -> list[TheoremCase]:
    """The spectral claims that apply to a fully-specified construction."""
    if isinstance(spec, NihoTrinomial):
        if spec.variant == "one-fifth":
            return [TheoremCase("four-valued-dist", m=spec.m, c=spec.c)]
        return [TheoremCase("prop-fourbe", m=spec.m, k=spec.k,
                            variant=spec.variant, c=spec.c)]
    if isinstance(spec, Quadrinomial):
        return [TheoremCase("plateaued-quadrinomial", m=spec.m, condition=cond,
                            a=spec.a, b=spec.b, c=spec.c)
                for cond in spec.conditions()]
    if isinstance(spec, DOProduct):
        if spec.shape in (1, 2):
            return [TheoremCase("do-ex1", n=spec.n, m=spec.m, shape=spec.shape, a=spec.a)]
        return [TheoremCase("do-ex2", m=spec.m, a=spec.a)]
    if isinstance(spec, TraceLinear):
        cid = {"gold": "pl2", "halved": "pl3", "double": "pl4"}[spec.shape]
        return [TheoremCase(cid, m=spec.m, k=spec.k, i=spec.i, c=spec.c)]
    return []


def _measure(spec: ConstructionSpec, skip_ai: bool) -> dict:
    timings = {}
    t0 = time.perf_counter()
    f = parameterize(spec)
    timings["parameterize_s"] = round(time.perf_counter() - t0, 6)
    t0 = time.perf_counter()
    spectrum = f.walsh()
    timings["spectrum_s"] = round(time.perf_counter() - t0, 6)
    ai = None
    if not skip_ai:
        t0 = time.perf_counter()
        ai = f.algebraic_immunity()
        timings["ai_s"] = round(time.perf_counter() - t0, 6)
    return {
        "function": f,
        "histogram": [list(p) for p in spectrum.histogram_items()],
        "nl": f.nonlinearity(),
        "degree": f.degree(),
        "ai": ai,
        "class": classify(spectrum).tag,
        "balanced": f.is_balanced(),
        "timings": timings,
    }


# -- analyze -------------------------------------------------------------------


def cmd_analyze(args) -> int:
    try:
        text = args.spec
        if args.spec_file:
            with open(args.spec_file) as fh:
                text = fh.read().strip()
        if not text:
            print("analyze: provide --spec or --spec-file", file=sys.stderr)
            return 2
        field = parse_field_text(args.field) if args.field else None
        spec = parse_spec(text, field=field)
        validity = spec.validate()
        if not validity.ok:
            print(f"analyze: invalid spec: {validity.clause}", file=sys.stderr)
            return 2
    except WalshForgeError as exc:
        print(f"analyze: {exc}", file=sys.stderr)
        return 2
    measured = _measure(spec, args.skip_ai)
    verdicts = []
    for case in _matching_cases(spec):
        try:
            verdicts.append(verify_theorem(case).to_dict())
        except HypothesisViolated as exc:
            verdicts.append({"case_id": case.case_id, "pass": False,
                             "error": f"hypothesis violated: {exc}"})
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "seed": args.seed,
        "field": {"n": spec.field.n, "modulus": f"0x{spec.field.modulus:x}"},
        "construction": spec.params(),
        "spec_text": spec.text(),
        "balanced": measured["balanced"],
        "histogram": measured["histogram"],
        "nonlinearity": measured["nl"],
        "degree": measured["degree"],
        "algebraic_immunity": measured["ai"],
        "ai_skipped": bool(args.skip_ai),
        "classification": measured["class"],
        "theorem_verdicts": verdicts,
        "timings": measured["timings"],
    }
    row = {"n": spec.field.n, "family": spec.family,
           "params": " ".join(spec.text().split()[1:]),
           "histogram": [tuple(p) for p in measured["histogram"]],
           "nl": measured["nl"], "degree": measured["degree"],
           "ai": measured["ai"], "class": measured["class"]}
    payload = _csv_text([row]) if args.format == "csv" else _dump_json(report)
    try:
        if args.out:
            _write_text(args.out, payload)
        else:
            sys.stdout.write(payload)
    except OSError as exc:
        print(f"analyze: cannot write output: {exc}", file=sys.stderr)
        return 3
    return 0


# -- reproduce ------------------------------------------------------------------


def load_reference_table(target: str) -> dict:
    if target not in TABLE_TARGETS:
        raise InvalidSpec(f"unknown table target {target!r}")
    with resources.files("walshforge.data").joinpath(f"{target}.json").open() as fh:
        return json.load(fh)


def _reproduce_row(row: dict, skip_ai: bool) -> dict:
    spec = parse_spec(row["spec"])
    measured = _measure(spec, skip_ai)
    cells = {}
    expected_hist = [tuple(p) for p in row["histogram"]]
    cells["histogram"] = "pass" if [tuple(p) for p in measured["histogram"]] == expected_hist \
        else "FAIL"
    for key in ("nl", "degree", "class"):
        cells[key] = "pass" if measured[key] == row[key] else "FAIL"
    if skip_ai:
        cells["ai"] = "skipped"
    else:
        cells["ai"] = "pass" if measured["ai"] == row["ai"] else "FAIL"
    ok = all(v != "FAIL" for v in cells.values())
    return {
        "n": row["n"],
        "family": spec.family,
        "spec": row["spec"],
        "params": " ".join(spec.text().split()[1:]),
        "expected": {k: row[k] for k in ("histogram", "nl", "degree", "ai", "class")},
        "measured": {k: measured[k] for k in ("histogram", "nl", "degree", "ai", "class")},
        "cells": cells,
        "pass": ok,
    }


def cmd_reproduce(args) -> int:
    try:
        table = load_reference_table(args.target)
    except (InvalidSpec, OSError) as exc:
        print(f"reproduce: {exc}", file=sys.stderr)
        return 2
    rows = [r for r in table["rows"] if r["n"] <= args.max_n]
    workers = max(1, args.threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda r: _reproduce_row(r, args.skip_ai), rows))
    else:
        results = [_reproduce_row(r, args.skip_ai) for r in rows]
    all_ok = all(r["pass"] for r in results)
    for r in results:
        cells = " ".join(f"{k}={v}" for k, v in sorted(r["cells"].items()))
        sys.stdout.write(f"{args.target} n={r['n']} {cells}\n")
    sys.stdout.write(f"{args.target}: {'PASS' if all_ok else 'FAIL'}\n")
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "seed": args.seed,
        "target": args.target,
        "max_n": args.max_n,
        "rows": results,
        "pass": all_ok,
    }
    csv_rows = [{"n": r["n"], "family": r["family"], "params": r["params"],
                 "histogram": [tuple(p) for p in r["measured"]["histogram"]],
                 "nl": r["measured"]["nl"], "degree": r["measured"]["degree"],
                 "ai": r["measured"]["ai"], "class": r["measured"]["class"]}
                for r in results]
    try:
        if args.out:
            _write_text(f"{args.out}.json", _dump_json(report))
            _write_text(f"{args.out}.csv", _csv_text(csv_rows))
    except OSError as exc:
        print(f"reproduce: cannot write output: {exc}", file=sys.stderr)
        return 3
    return 0 if all_ok else 1


# -- verify ---------------------------------------------------------------------


def _coeff_arg(field, text):
    from .constructions import parse_coefficient
    return None if text is None else parse_coefficient(field, text)


def _build_cases(args) -> list[TheoremCase]:
    cid = args.case_id
    samples = args.samples
    if cid == "four-valued-dist":
        if args.m is None:
            raise HypothesisViolated("four-valued-dist needs --m")
        field = field_new(2 * args.m)
        if args.c is not None:
            cs = [_coeff_arg(field, args.c)]
        else:
            w = field.subfield_embed(2)
            cs = [w, field.sqr(w)]
        return [TheoremCase(cid, m=args.m, c=c) for c in cs]
    if cid == "prop-fourbe":
        if None in (args.m, args.k) or args.variant is None:
            raise HypothesisViolated("prop-fourbe needs --m, --k, --variant")
        field = field_new(2 * args.m)
        if args.c is not None:
            cs = [_coeff_arg(field, args.c)]
        else:
            cs = find_fourbe_cs(args.m, args.k, args.variant, count=samples)
            if not cs:
                raise HypothesisViolated("no c makes this trinomial a permutation")
        return [TheoremCase(cid, m=args.m, k=args.k, variant=args.variant, c=c) for c in cs]
    if cid == "plateaued-quadrinomial":
        if args.m is None:
            raise HypothesisViolated("plateaued-quadrinomial needs --m")
        field = field_new(2 * args.m)
        if all(v is not None for v in (args.a, args.b, args.c)):
            return [TheoremCase(cid, m=args.m, condition=args.condition,
                                a=_coeff_arg(field, args.a), b=_coeff_arg(field, args.b),
                                c=_coeff_arg(field, args.c))]
        if args.condition is None:
            raise HypothesisViolated("pass --condition to sample coefficients")
        specs = sample_quadrinomial(args.m, args.condition, count=samples, seed=args.seed)
        return [TheoremCase(cid, m=args.m, condition=args.condition,
                            a=s.a, b=s.b, c=s.c) for s in specs]
    if cid == "do-ex1":
        if None in (args.n, args.m) or args.shape is None:
            raise HypothesisViolated("do-ex1 needs --n, --m, --shape")
        field = field_new(args.n)
        if args.shape == 1:
            return [TheoremCase(cid, n=args.n, m=args.m, shape=1)]
        if args.a is not None:
            return [TheoremCase(cid, n=args.n, m=args.m, shape=2,
                                a=_coeff_arg(field, args.a))]
        specs = sample_do(args.n, args.m, 2, count=samples, seed=args.seed)
        return [TheoremCase(cid, n=args.n, m=args.m, shape=2, a=s.a) for s in specs]
    if cid == "do-ex2":
        if args.m is None:
            raise HypothesisViolated("do-ex2 needs --m")
        field = field_new(3 * args.m)
        if args.a is not None:
            return [TheoremCase(cid, m=args.m, a=_coeff_arg(field, args.a))]
        specs = sample_do(3 * args.m, args.m, 3, count=samples, seed=args.seed)
        return [TheoremCase(cid, m=args.m, a=s.a) for s in specs]
    if cid in ("pl2", "pl3", "pl4"):
        if None in (args.m, args.k):
            raise HypothesisViolated(f"{cid} needs --m and --k")
        shape = {"pl2": "gold", "pl3": "halved", "pl4": "double"}[cid]
        field = field_new(args.k * args.m)
        if args.c is not None:
            cs = [_coeff_arg(field, args.c)]
        else:
            cs = valid_trace_linear_cs(args.m, args.k, shape, i=args.i)[:samples]
            if not cs:
                raise HypothesisViolated(f"no valid c exists for {cid} at these parameters")
        return [TheoremCase(cid, m=args.m, k=args.k, i=args.i, c=c) for c in cs]
    raise HypothesisViolated(f"unknown case id {cid!r}; expected one of {CASE_IDS}")


def cmd_verify(args) -> int:
    try:
        cases = _build_cases(args)
        workers = max(1, args.threads)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                verdicts = list(pool.map(verify_theorem, cases))
        else:
            verdicts = [verify_theorem(c) for c in cases]
    except HypothesisViolated as exc:
        print(f"verify: hypothesis violated: {exc}", file=sys.stderr)
        return 2
    except WalshForgeError as exc:
        print(f"verify: {exc}", file=sys.stderr)
        return 2
    all_ok = all(v.ok for v in verdicts)
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "seed": args.seed,
        "case_id": args.case_id,
        "runs": [v.to_dict() for v in verdicts],
        "pass": all_ok,
    }
    payload = _dump_json(report)
    try:
        if args.out:
            _write_text(args.out, payload)
        else:
            sys.stdout.write(payload)
    except OSError as exc:
        print(f"verify: cannot write output: {exc}", file=sys.stderr)
        return 3
    return 0 if all_ok else 1


# -- selftest -------------------------------------------------------------------


def cmd_selftest(args) -> int:
    checks = []

    def check(name, fn):
        try:
            fn()
            checks.append((name, True, ""))
        except Exception as exc:  # noqa: BLE001 - report, do not crash
            checks.append((name, False, str(exc)))

    def field_sanity():
        F = field_new(4)
        for x in range(1, 16):
            assert F.mul(x, F.inv(x)) == 1
            assert F.pow(x, 16) == x

    def fast_vs_direct():
        F = field_new(4)
        rng = np.random.default_rng(args.seed)
        for _ in range(5):
            f = BooleanFunction(F, rng.integers(0, 2, size=16, dtype=np.uint8))
            assert np.array_equal(f.walsh().values, walsh_direct(f))

    def four_valued():
        verify_theorem(TheoremCase("four-valued-dist", m=3)).require()

    def semi_bent():
        verify_theorem(TheoremCase("pl3", m=2, k=3,
                                   c=field_new(6).subfield_embed(2))).require()

    check("field arithmetic", field_sanity)
    check("fast transform vs direct definition", fast_vs_direct)
    check("four-valued distribution m=3", four_valued)
    check("semi-bent trace-linear m=2 k=3", semi_bent)
    ok = all(c[1] for c in checks)
    for name, passed, msg in checks:
        line = f"selftest {name}: {'ok' if passed else 'FAIL ' + msg}"
        sys.stdout.write(line + "\n")
    return 0 if ok else 1


# -- argument plumbing ------------------------------------------------------------


def _add_common(parser):
    parser.add_argument("--field", help="field override, e.g. 'n=6 modulus=0x43'")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed recorded in reports and used for sampling")
    parser.add_argument("--out", help="output path (base path for reproduce)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--skip-ai", action="store_true",
                        help="skip algebraic immunity (reported as not computed)")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for independent rows/cases")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="walsh-forge",
        description="Walsh spectra of balanced Boolean functions built from "
                    "2-to-1 compositions of permutation polynomials over GF(2^n)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full pipeline for one construction spec")
    p.add_argument("--spec", help="spec text, e.g. 'family=do n=6 m=2 shape=1'")
    p.add_argument("--spec-file", help="file containing the spec text")
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reproduce", help="recompute a reference table and diff it")
    p.add_argument("target", choices=TABLE_TARGETS)
    p.add_argument("--max-n", type=int, choices=(6, 10, 14), default=14)
    _add_common(p)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("verify", help="check one spectral claim")
    p.add_argument("case_id", choices=CASE_IDS)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--shape", type=int)
    p.add_argument("--variant", choices=("one-fifth", "plus", "minus"))
    p.add_argument("--condition", type=int, choices=(1, 2, 3))
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--c")
    p.add_argument("--samples", type=int, default=5,
                   help="sampled coefficient sets when not fully specified")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("selftest", help="quick built-in verification battery")
    _add_common(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry() -> None:
    raise SystemExit(main())
