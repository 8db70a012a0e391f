"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.
Integers that may not fit in 64 bits are written as JSON strings.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import random
import sys

from . import bounds, census, constructions, enumeration
from .render import RenderError, render_svg

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _int_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _names(value: str) -> list:
    return list(constructions.NAMES) if value == "all" else [value]


# -- subcommands --------------------------------------------------------------


def cmd_construct(a) -> tuple:
    arr = constructions.build(a.construction, a.m)
    doc = {
        "construction": arr.name,
        "m": arr.m,
        "k": arr.spec.k,
        "lines": [
            {
                "bundle": l.bundle,
                "index": l.index_in_bundle,
                "alpha": str(l.alpha),
                "beta": str(l.beta),
                "gamma": str(l.gamma),
            }
            for l in arr.lines
        ],
    }
    return _dumps(doc) + "\n", EXIT_OK


def cmd_census(a) -> tuple:
    if a.verify:
        m_list = a.m_list or ([a.m] if a.m else None)
        if not m_list:
            raise UsageError("--verify needs --m-list (or --m)")
        rep = census.verify_asymptotics(a.construction, m_list, slack=a.slack, engine=a.engine, threads=a.threads)
        doc = {
            "construction": rep.name,
            "m_list": list(rep.m_list),
            "slack": str(rep.slack),
            "ok": rep.ok,
            "lambda": [
                {
                    "m": r.m,
                    "i": r.i,
                    "observed": str(r.observed),
                    "coefficient": str(r.coefficient),
                    "residual_over_m": f"{r.residual_over_m:.6f}",
                    "ok": r.ok,
                }
                for r in rep.lambda_rows
            ],
            "types": [
                {
                    "m": r.m,
                    "signature": list(r.signature),
                    "labels": list(r.labels),
                    "observed": str(r.observed),
                    "residual_over_m": f"{r.residual_over_m:.6f}",
                    "ok": r.ok,
                }
                for r in rep.type_rows
            ],
            "failures": rep.failures(),
        }
        return _dumps(doc) + "\n", EXIT_OK if rep.ok else EXIT_FAIL
    if a.m is None:
        raise UsageError("census needs --m")
    c = census.crossing_census(constructions.build(a.construction, a.m), engine=a.engine, threads=a.threads)
    ok = census.conservation_holds(c)
    text = census.census_to_csv(c) if a.format == "csv" else census.census_to_json(c) + "\n"
    return text, EXIT_OK if ok else EXIT_FAIL


def cmd_areas(a) -> tuple:
    docs, ok = [], True
    for name in _names(a.construction):
        spec = constructions.get_spec(name)
        areas = constructions.coverage_areas(name)
        lam = constructions.predicted_lambda_coefficients(name)
        match = areas == spec.paper_area_table and lam == spec.paper_lambda_coeffs
        ok &= match
        docs.append(
            {
                "construction": name,
                "areas": {str(i): str(v) for i, v in areas.items()},
                "lambda_coefficients": {str(i): str(v) for i, v in lam.items()},
                "matches_table": match,
            }
        )
    return _dumps(docs if len(docs) > 1 else docs[0]) + "\n", EXIT_OK if ok else EXIT_FAIL


def cmd_types(a) -> tuple:
    c = census.crossing_census(constructions.build(a.construction, a.m), threads=a.threads)
    rep = census.classify_types(c)
    doc = {
        "construction": rep.name,
        "m": rep.m,
        "ok": rep.ok,
        "types": [
            {"signature": sorted(s), "labels": rep.labels[s], "count": str(n)}
            for s, n in rep.counts.items()
        ],
        "unexpected": rep.unexpected,
        "missing": rep.missing,
    }
    return _dumps(doc) + "\n", EXIT_OK if rep.ok else EXIT_FAIL


def cmd_enumerate(a) -> tuple:
    def a_row(n):
        r = enumeration.count_reduced_words(n) if a.method == "brute" else enumeration.stanley_A(n)
        return r

    def b_row(n):
        return enumeration.count_commutation_classes(n, allow_9=a.allow_9)

    ok = True
    if a.what == "A":
        r = a_row(a.n)
        ok = enumeration.TABLE_A.get(a.n, r.value) == r.value
        doc = {"n": a.n, "A_n": str(r.value), "method": r.method}
        if a.timing:
            doc["seconds"] = round(r.seconds, 3)
        return _dumps(doc) + "\n", EXIT_OK if ok else EXIT_FAIL
    if a.what == "B":
        r = b_row(a.n)
        ok = enumeration.TABLE_B.get(a.n, r.value) == r.value
        doc = {"n": a.n, "B_n": str(r.value)}
        if a.timing:
            doc.update(method=r.method, seconds=round(r.seconds, 3))
        return _dumps(doc) + "\n", EXIT_OK if ok else EXIT_FAIL
    rows = []
    for n in range(1, a.n + 1):
        ra = enumeration.stanley_A(n)
        rb = b_row(n)
        ok &= enumeration.TABLE_B[n] == rb.value
        row = {"n": n, "A_n": str(ra.value), "B_n": str(rb.value), "method": rb.method}
        if a.timing:
            row["seconds"] = round(ra.seconds + rb.seconds, 3)
        rows.append(row)
    return "\n".join(_dumps(r) for r in rows) + "\n", EXIT_OK if ok else EXIT_FAIL


def cmd_tilings(a) -> tuple:
    out, ok = [], True
    if a.box:
        i, j, k = a.box
        p = enumeration.macmahon_P(i, j, k).value
        doc = {"i": i, "j": j, "k": k, "P": str(p)}
        if a.oracle:
            q = enumeration.count_plane_partitions_box(i, j, k).value
            doc["oracle"] = str(q)
            ok &= p == q
        out.append(doc)
    if a.trace:
        vals = enumeration.fv_constant_trace(a.trace, digits=a.digits or 30)
        out.append({"trace": [{"n": n, "log2_P_over_n2": str(v)} for n, v in zip(a.trace, vals)]})
    if a.symmetry_samples:
        rng = random.Random(a.seed)
        bad = 0
        for _ in range(a.symmetry_samples):
            t = [rng.randint(0, 12) for _ in range(3)]
            ref = enumeration.macmahon_P(*t).value
            perms = [(t[0], t[2], t[1]), (t[1], t[0], t[2]), (t[1], t[2], t[0]), (t[2], t[0], t[1]), (t[2], t[1], t[0])]
            bad += any(enumeration.macmahon_P(*q).value != ref for q in perms)
        ok &= bad == 0
        out.append({"symmetry_samples": a.symmetry_samples, "seed": a.seed, "asymmetric": bad})
    if not out:
        raise UsageError("tilings needs --box, --trace or --symmetry-samples")
    return "\n".join(_dumps(d) for d in out) + "\n", EXIT_OK if ok else EXIT_FAIL


def cmd_bounds(a) -> tuple:
    digits = a.digits
    if a.which == "constants":
        rows, ok = [], True
        for name in constructions.NAMES:
            c = bounds.construction_constant(name, digits)
            lb = bounds.construction_constant_bound(name)
            row = {"construction": name, "c": str(c), "exact": lb.exact()}
            th = bounds.CONSTANT_THRESHOLDS.get(name)
            if th is not None:
                row["threshold"] = str(th)
                row["exceeds"] = c > th
                ok &= c > th
            else:
                row["equals_one_sixth"] = lb.is_rational() and lb.rational * 6 == 1
                ok &= row["equals_one_sixth"]
            rows.append(row)
        return "\n".join(_dumps(r) for r in rows) + "\n", EXIT_OK if ok else EXIT_FAIL
    if a.n is None:
        raise UsageError(f"bounds --which {a.which} needs --n")
    if a.which == "upper":
        ub = bounds.knuth_upper(a.n)
        doc = {"name": "knuth_upper", "n": a.n, "log2_upper": ub.exact(), "value": str(ub.evaluate(digits, "up"))}
        return _dumps(doc) + "\n", EXIT_OK
    if a.which == "unrolled":
        if not a.construction:
            raise UsageError("bounds --which unrolled needs --construction")
        rep = bounds.unrolled_lower(a.construction, a.n, digits, threads=a.threads)
    else:
        rep = bounds.prior_report(a.which, a.n, digits)
    return _dumps(rep.to_dict()) + "\n", EXIT_OK


def cmd_render(a) -> tuple:
    arr = constructions.build(a.construction, a.m)
    return render_svg(arr, markers=not a.no_markers), EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker threads (output does not depend on it)")
    common.add_argument("--seed", type=int, default=20240229, help="seed for randomized checks")
    common.add_argument("--precision", dest="digits", type=int, default=None,
                        help="decimal digits (default: $PSB_PRECISION or 50)")
    common.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")

    p = argparse.ArgumentParser(prog="psb", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    cons = dict(choices=constructions.NAMES, required=True)

    s = add("construct", "list the lines of an arrangement")
    s.add_argument("--construction", **cons)
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(func=cmd_construct)

    s = add("census", "crossing census, or asymptotic verification with --verify")
    s.add_argument("--construction", **cons)
    s.add_argument("--m", type=int)
    s.add_argument("--m-list", type=_int_list)
    s.add_argument("--verify", action="store_true")
    s.add_argument("--slack", type=int, default=census.DEFAULT_SLACK)
    s.add_argument("--engine", choices=("fast", "exact"), default="fast")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.set_defaults(func=cmd_census)

    s = add("areas", "exact coverage areas and predicted lambda coefficients")
    s.add_argument("--construction", choices=constructions.NAMES + ("all",), default="all")
    s.set_defaults(func=cmd_areas)

    s = add("types", "classify off-grid crossings against the type table")
    s.add_argument("--construction", **cons)
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(func=cmd_types)

    s = add("enumerate", "count reduced words (A) or arrangements (B)")
    s.add_argument("--what", choices=("A", "B", "all"), required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--method", choices=("closed", "brute"), default="closed", help="for --what A")
    s.add_argument("--allow-9", action="store_true", help="permit n = 9 for B (slow, memory hungry)")
    s.add_argument("--timing", action="store_true", help="include wall-clock seconds (not deterministic)")
    s.set_defaults(func=cmd_enumerate)

    s = add("tilings", "rhombic tilings of hexagons")
    s.add_argument("--box", type=int, nargs=3, metavar=("I", "J", "K"))
    s.add_argument("--oracle", action="store_true", help="cross-check with plane partition search")
    s.add_argument("--trace", type=_int_list, help="n values for log2 P(n,n,n)/n^2")
    s.add_argument("--symmetry-samples", type=int, default=0)
    s.set_defaults(func=cmd_tilings)

    s = add("bounds", "construction constants and bound recurrences")
    s.add_argument("--which", choices=("constants", "knuth", "matousek", "fv", "unrolled", "upper"), required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--construction", choices=constructions.NAMES)
    s.set_defaults(func=cmd_bounds)

    s = add("render", "SVG drawing of an arrangement")
    s.add_argument("--construction", **cons)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--no-markers", action="store_true")
    s.set_defaults(func=cmd_render)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if a.threads < 1:
        print("psb: --threads must be >= 1", file=stderr)
        return EXIT_USAGE
    try:
        text, code = a.func(a)
    except (UsageError, constructions.ConstructionError, enumeration.EnumerationCapError, RenderError) as e:
        print(f"psb {a.command}: {e}", file=stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"psb {a.command}: {e}", file=stderr)
        return EXIT_USAGE
    except census.CensusError as e:
        print(f"psb {a.command}: verification failed: {e}", file=stderr)
        return EXIT_FAIL
    if a.output:
        with open(a.output, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
