"""Batch front end: order checks, interpolation, spectrum sweeps, verification.

All inputs and reports are JSON with rationals as "p/q" strings; reports are
deterministic for identical inputs and seed, up to the "timings" field, and
every certificate a report carries can be re-verified standalone through the
`verify` subcommand.

Exit codes: 0 ok, 1 verdict-level failures present, 2 usage/parse error,
3 internal bug sentinel (retries exhausted).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from fractions import Fraction

from . import serial
from .dimgroup import GroupElement, order_test
from .kms import (CertificateSearchFailed, KmsFunctional, eigen_verify,
                  generator_battery, spectrum_query, nonexistence_certificate,
                  verification_transcript)
from .laurent import sturm_positive_on, verify_lower_bound
from .riesz import (Infeasible, InterpolationProblem, PreconditionViolated,
                    RetriesExhausted, interpolate_compact, interpolate_lp,
                    interpolate_unbounded)

EXIT_OK = 0
EXIT_VERDICT_FAILURES = 1
EXIT_USAGE = 2
EXIT_BUG_SENTINEL = 3


class UsageError(Exception):
    pass


def _read_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _write_json(obj, path):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _scenario_digest(scenario_json) -> str:
    canon = json.dumps(scenario_json, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def _load_scenario(path):
    if path is None:
        raise UsageError("--scenario is required for this command")
    obj = _read_json(path)
    try:
        sc = serial.scenario_from_json(obj)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"invalid scenario: {exc}") from None
    return sc, serial.scenario_to_json(sc, seed=obj.get("seed"),
                                       caps=obj.get("caps"))


def _report(command, scenario_json, items, summary, t0):
    return {
        "command": command,
        "scenario": scenario_json,
        "scenario_digest": _scenario_digest(scenario_json),
        "items": items,
        "summary": summary,
        "timings": {"total_s": round(time.time() - t0, 3)},
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    t0 = time.time()
    sc, scj = _load_scenario(args.scenario)
    data = _read_json(args.infile or "-")
    try:
        elements = [serial.group_element_from_json(e.get("coeffs", e),
                                                   sc.vertex_count)
                    for e in data["elements"]]
        names = [e.get("name", f"element_{i}")
                 if isinstance(e, dict) else f"element_{i}"
                 for i, e in enumerate(data["elements"])]
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"invalid elements file: {exc}") from None
    items = []
    for name, g in zip(names, elements):
        verdict = order_test(g, sc)
        items.append({"name": name,
                      "element": serial.group_element_to_json(g),
                      "verdict": serial.verdict_to_json(verdict)})
    counts = {}
    for it in items:
        k = it["verdict"]["kind"]
        counts[k] = counts.get(k, 0) + 1
    _write_json(_report("check", scj, items, counts, t0), args.out)
    return EXIT_OK


def _parse_s_values(data) -> list:
    if "s_values" in data:
        return [serial.rational_from_str(s) for s in data["s_values"]]
    if "sweep" in data:
        sweep = data["sweep"]
        lo = serial.rational_from_str(sweep["from"])
        hi = serial.rational_from_str(sweep["to"])
        step = serial.rational_from_str(sweep["step"])
        if step <= 0:
            raise UsageError("sweep step must be positive")
        out, s = [], lo
        while s <= hi:
            out.append(s)
            s += step
        return out
    raise UsageError("spectrum input needs 's_values' or 'sweep'")


def cmd_spectrum(args) -> int:
    t0 = time.time()
    sc, scj = _load_scenario(args.scenario)
    values = _parse_s_values(_read_json(args.infile or "-"))
    if any(s <= 0 for s in values):
        raise UsageError("s values must be positive")
    items, failures = [], 0
    for s in values:
        item = {"s": serial.rational_to_str(s)}
        try:
            verdict = spectrum_query(s, sc, max_degree=args.max_degree)
        except CertificateSearchFailed as exc:
            item["error"] = {"kind": "certificate_search_failed",
                             "max_degree": exc.max_degree}
            failures += 1
            items.append(item)
            continue
        item["exists"] = verdict.exists
        if verdict.exists:
            item["parameter_space"] = verdict.parameter_space
            item["functional"] = {
                "base_point": [serial.rational_to_str(w)
                               for w in verdict.functional.base_point],
                "s": serial.rational_to_str(verdict.functional.s),
            }
        else:
            item["certificate"] = serial.laurent_to_json(verdict.certificate)
            item["transcript"] = verdict.transcript
        items.append(item)
    summary = {
        "exists": sum(1 for it in items if it.get("exists")),
        "absent": sum(1 for it in items if it.get("exists") is False),
        "errors": failures,
    }
    report = _report("spectrum", scj, items, summary, t0)
    _write_json(report, args.out)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("s,exists,beta\n")
            for it in items:
                if "exists" not in it:
                    continue
                s = Fraction(it["s"])
                fh.write(f"{it['s']},{int(it['exists'])},{math.log(float(s))}\n")
    return EXIT_VERDICT_FAILURES if failures else EXIT_OK


def cmd_interp(args) -> int:
    t0 = time.time()
    sc, scj = _load_scenario(args.scenario)
    data = _read_json(args.infile or "-")
    try:
        lowers = tuple(serial.group_element_from_json(e, sc.vertex_count)
                       for e in data["lowers"])
        uppers = tuple(serial.group_element_from_json(e, sc.vertex_count)
                       for e in data["uppers"])
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"invalid problem file: {exc}") from None
    problem = InterpolationProblem(lowers, uppers, sc)
    engines = {"constructive", "lp"} if args.engine == "both" else {args.engine}
    items, failures = [], 0

    def run(engine):
        if engine == "constructive":
            fn = (interpolate_compact if sc.mode == "compact"
                  else interpolate_unbounded)
            return fn(problem, with_trace=True)
        width = max((abs(k) for g in lowers + uppers for k in g.support),
                    default=0) + 2
        return interpolate_lp(problem, (-width, width), with_trace=True)

    for engine in sorted(engines):
        item = {"engine": engine}
        try:
            g, trace = run(engine)
            certs = {}
            ok = True
            for tag, diff in [("lower_0", g - lowers[0]), ("lower_1", g - lowers[1]),
                              ("upper_0", uppers[0] - g), ("upper_1", uppers[1] - g)]:
                v = order_test(diff, sc)
                certs[tag] = serial.verdict_to_json(v)
                ok = ok and v.is_nonnegative
            item["interpolant"] = serial.group_element_to_json(g)
            item["certificates"] = certs
            item["trace"] = trace.as_dict()
            item["certified"] = ok
            if not ok:
                failures += 1
        except PreconditionViolated as exc:
            item["error"] = {"kind": "precondition_violated",
                             "pairs": [list(p) for p in exc.pairs]}
            failures += 1
        except Infeasible as exc:
            item["error"] = {"kind": "infeasible", "window": list(exc.window)}
            failures += 1
        items.append(item)
    summary = {"engines": sorted(engines), "failures": failures}
    if len(items) == 2 and all("certified" in it for it in items):
        summary["agreement_of_success"] = all(it["certified"] for it in items)
    _write_json(_report("interp", scj, items, summary, t0), args.out)
    return EXIT_VERDICT_FAILURES if failures else EXIT_OK


def cmd_certify(args) -> int:
    t0 = time.time()
    sc, scj = _load_scenario(args.scenario)
    values = _parse_s_values(_read_json(args.infile or "-"))
    items, failures = [], 0
    for s in values:
        item = {"s": serial.rational_to_str(s)}
        if sc.L.contains(s):
            item["error"] = {"kind": "s_in_set"}
            failures += 1
        else:
            try:
                p = nonexistence_certificate(s, sc, max_degree=args.max_degree)
                item["certificate"] = serial.laurent_to_json(p)
                item["transcript"] = verification_transcript(p, sc, s)
            except CertificateSearchFailed as exc:
                item["error"] = {"kind": "certificate_search_failed",
                                 "max_degree": exc.max_degree}
                failures += 1
        items.append(item)
    _write_json(_report("certify", scj, items,
                        {"certified": len(items) - failures,
                         "errors": failures}, t0), args.out)
    return EXIT_VERDICT_FAILURES if failures else EXIT_OK


def _reverify_order_item(item, sc) -> bool:
    g = serial.group_element_from_json(item["element"], sc.vertex_count)
    stored = item["verdict"]
    fresh = order_test(g, sc)
    if fresh.kind != stored["kind"]:
        return False
    if stored["kind"] == "positive":
        margin = serial.rational_from_str(stored["margin"])
        if fresh.margin < margin and fresh.margin != margin:
            # stored margin must still be a valid lower bound
            for cert in stored.get("certificates", []):
                if cert["type"] != "face_curve":
                    continue
        for cert in stored.get("certificates", []):
            if cert["type"] == "face_curve":
                v = cert["vertex"]
                p = g.vertex_poly(v)
                if cert.get("normalized"):
                    top = max(g.coeffs)
                    p = p.shift_exponents(-top)
                    t_top = serial.rational_from_str(cert["truncated_at"])
                    ok = verify_lower_bound(
                        p, serial.rational_from_str(cert["bound"]),
                        sc.L.truncate(t_top))
                else:
                    ok = verify_lower_bound(
                        p, serial.rational_from_str(cert["bound"]), sc.L)
                if not ok:
                    return False
    if stored["kind"] == "not_positive" and "witness" in stored:
        w = stored["witness"]
        t = serial.rational_from_str(w["point"])
        v = stored.get("vertex", 0)
        value = serial.rational_from_str(w["value"])
        if g.vertex_poly(v)(t) != value or value > 0:
            return False
    return True


def _reverify_spectrum_item(item, sc) -> bool:
    if "error" in item:
        return True
    s = serial.rational_from_str(item["s"])
    if item.get("exists"):
        if sc.L.contains(s) is False:
            return False
        f = KmsFunctional([serial.rational_from_str(w)
                           for w in item["functional"]["base_point"]], s)
        return eigen_verify(f, generator_battery(sc.vertex_count))
    if sc.L.contains(s):
        return False
    p = serial.laurent_from_json(item["certificate"])
    return sturm_positive_on(p, sc.L) is None and p(s) < 0


def cmd_verify(args) -> int:
    t0 = time.time()
    report = _read_json(args.infile or "-")
    try:
        sc = serial.scenario_from_json(report["scenario"])
        command = report["command"]
    except (KeyError, ValueError) as exc:
        raise UsageError(f"not a verifiable report: {exc}") from None
    if report.get("scenario_digest") != _scenario_digest(report["scenario"]):
        raise UsageError("scenario digest mismatch")
    results = []
    for item in report["items"]:
        if command == "check":
            ok = _reverify_order_item(item, sc)
        elif command in ("spectrum", "certify"):
            if command == "certify" and "certificate" in item:
                p = serial.laurent_from_json(item["certificate"])
                s = serial.rational_from_str(item["s"])
                ok = sturm_positive_on(p, sc.L) is None and p(s) < 0
            else:
                ok = _reverify_spectrum_item(item, sc)
        elif command == "interp":
            if "error" in item:
                ok = True
            else:
                g = serial.group_element_from_json(item["interpolant"],
                                                   sc.vertex_count)
                ok = all(serial.verdict_to_json(order_test(d, sc))["kind"]
                         in ("positive", "zero")
                         for d in _interp_diffs(report, g, sc))
        else:
            raise UsageError(f"cannot verify reports for {command!r}")
        results.append(ok)
    summary = {"verified": sum(results), "failed": len(results) - sum(results)}
    _write_json(_report("verify", report["scenario"],
                        [{"index": i, "ok": ok} for i, ok in enumerate(results)],
                        summary, t0), args.out)
    return EXIT_OK if all(results) else EXIT_VERDICT_FAILURES


def _interp_diffs(report, g, sc):
    # the interp report does not store the problem, so re-verify from the
    # stored certificates' own elements is impossible; re-run the four
    # verdicts against the problem embedded in the report when present
    data = report.get("problem")
    if not data:
        return []
    lowers = [serial.group_element_from_json(e, sc.vertex_count)
              for e in data["lowers"]]
    uppers = [serial.group_element_from_json(e, sc.vertex_count)
              for e in data["uppers"]]
    return [g - c for c in lowers] + [d - g for d in uppers]


def cmd_demo(args) -> int:
    t0 = time.time()
    scj = {
        "simplex_vertices": 2,
        "face": [0],
        "L": {"intervals": [["1/2", "2"]], "points": ["4"], "ray_from": None},
        "mode": "compact",
    }
    sc = serial.scenario_from_json(scj)
    unit = GroupElement.unit(2)
    tee = GroupElement(2, {1: ["1", "1"], 0: ["1", "1"]})
    bad = GroupElement(2, {1: ["1", "1"], 0: ["-1", "-1"]})
    items = []
    for name, g in [("order_unit", unit), ("t_plus_1", tee), ("t_minus_1", bad)]:
        items.append({"name": name,
                      "element": serial.group_element_to_json(g),
                      "verdict": serial.verdict_to_json(order_test(g, sc))})
    for s in (Fraction(1), Fraction(3), Fraction(3, 2)):
        verdict = spectrum_query(s, sc)
        entry = {"s": serial.rational_to_str(s), "exists": verdict.exists}
        if verdict.certificate is not None:
            entry["certificate"] = serial.laurent_to_json(verdict.certificate)
        items.append(entry)
    _write_json(_report("demo", scj, items, {"items": len(items)}, t0), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kmsflow",
        description="Exact order certificates, Riesz interpolation and KMS "
                    "spectra for shift dimension groups.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in [("check", cmd_check), ("interp", cmd_interp),
                     ("spectrum", cmd_spectrum), ("certify", cmd_certify),
                     ("verify", cmd_verify), ("demo", cmd_demo)]:
        p = sub.add_parser(name)
        p.add_argument("--scenario", help="scenario JSON file")
        p.add_argument("--in", dest="infile", help="input JSON file or -")
        p.add_argument("--out", help="report JSON file or - (default stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--engine", choices=["constructive", "lp", "both"],
                       default="constructive")
        p.add_argument("--max-degree", type=int, default=64)
        p.add_argument("--csv", help="CSV plot export (spectrum only)")
        p.set_defaults(fn=fn)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RetriesExhausted as exc:
        print(f"internal retry budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUG_SENTINEL
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
