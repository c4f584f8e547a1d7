"""Thin command-line client for the verification service.

Every subcommand calls the HTTP API (in process by default, or a remote
server via --url) and renders the response as canonical JSON or CSV.
Exit codes: 0 all checks passed, 1 a mathematical assertion failed,
2 usage errors or invalid generator specifications.
"""

from __future__ import annotations

import argparse
import json
import sys

EXIT_OK = 0
EXIT_ASSERTION = 1
EXIT_USAGE = 2


def _make_client(url: str | None):
    if url:
        import httpx

        return httpx.Client(base_url=url, timeout=None)
    import warnings

    with warnings.catch_warnings():
        # some starlette builds warn about the httpx-backed TestClient; the
        # in-process transport is still the supported sync ASGI client here
        warnings.simplefilter("ignore", UserWarning)
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app)


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list):
        return " ".join(_csv_cell(v) for v in value)
    return str(value)


def _csv_table(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _render_lines(doc, fmt):
    if fmt == "json":
        return _dump_json(doc)
    header = ["index", "name", "coeffs", "meets"]
    rows = [[r["index"], r["name"], r["coeffs"], r["meets"]] for r in doc["reports"]]
    return _csv_table(header, rows)


def _render_lemma21(doc, fmt):
    if fmt == "json":
        return _dump_json(doc)
    rep = doc["report"]
    header = [
        "tuples_checked",
        "with_sixth",
        "without_sixth",
        "equivalence_failures",
        "uniqueness_failures",
    ]
    return _csv_table(header, [[rep[k] for k in header]])


def _render_fibrations(doc, fmt):
    if fmt == "json":
        return _dump_json(doc)
    header = [
        "index",
        "line",
        "F",
        "pairs",
        "pair_count",
        "pairs_meet",
        "pair_sums_match_fiber",
        "base_dot_fiber",
        "fiber_self_intersection",
        "one_per_pair_choices_skew",
    ]
    rows = []
    for r in doc["reports"]:
        c = r["checks"]
        pairs = " ".join(f"{a}:{b}" for a, b in r["pairs"])
        rows.append(
            [
                r["index"],
                r["line"],
                r["F"],
                pairs,
                c["pair_count"],
                c["pairs_meet"],
                c["pair_sums_match_fiber"],
                c["base_dot_fiber"],
                c["fiber_self_intersection"],
                c["one_per_pair_choices_skew"],
            ]
        )
    return _csv_table(header, rows)


def _render_verify(doc, fmt):
    if fmt == "json":
        return _dump_json(doc)
    header = [
        "order",
        "orbit_sizes",
        "rank_fixed",
        "quotient_torsion",
        "quotient_free_rank",
        "fixed_line",
        "h1_torsion",
        "h1_free_rank",
        "pass_finite",
        "pass_three_primary",
        "pass_line_implies_trivial",
    ]
    rows = []
    for r in doc["reports"]:
        rows.append(
            [
                r["signature"]["order"],
                r["signature"]["orbit_sizes"],
                r["rank_fixed"],
                r["quotient"]["torsion"],
                r["quotient"]["free_rank"],
                r["fixed_line"],
                r["h1"]["torsion"],
                r["h1"]["free_rank"],
                r["pass"]["finite"],
                r["pass"]["three_primary"],
                r["pass"]["line_implies_trivial"],
            ]
        )
    return _csv_table(header, rows)


def _render_thm23(doc, fmt):
    if fmt == "json":
        return _dump_json(doc)
    header = [
        "order",
        "orbit_sizes",
        "line",
        "section_exists",
        "skew_fixed_line_exists",
        "forward_ok",
        "equivalence_ok",
        "fiber_annihilation_ok",
        "quotient_trivial",
    ]
    rows = []
    for r in doc["reports"]:
        rows.append(
            [
                r["signature"]["order"],
                r["signature"]["orbit_sizes"],
                r["line"],
                r["section_exists"],
                r["skew_fixed_line_exists"],
                r["forward_ok"],
                r["equivalence_ok"],
                r["fiber_annihilation_ok"],
                r["quotient_trivial"],
            ]
        )
    return _csv_table(header, rows)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _request(args, method, path, body=None):
    client = _make_client(args.url)
    try:
        if method == "get":
            response = client.get(path)
        else:
            response = client.post(path, json=body)
    finally:
        client.close()
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        print(f"error: {detail}", file=sys.stderr)
        return None
    return response.json()


def _sweep_body(args) -> dict:
    return {
        "seed": args.seed,
        "random_count": args.random,
        "include_cyclic": not args.no_cyclic,
        "include_stabilizers": not args.no_stabilizers,
        "jobs": args.jobs,
        "max_gens": args.max_gens,
        "gens": args.gens,
    }


def cmd_lines(args) -> int:
    doc = _request(args, "get", "/lines")
    if doc is None:
        return EXIT_USAGE
    _emit(_render_lines(doc, args.format), args.out)
    return EXIT_OK


def cmd_lemma21(args) -> int:
    doc = _request(args, "post", "/lemma21", {"self_test": args.self_test})
    if doc is None:
        return EXIT_USAGE
    _emit(_render_lemma21(doc, args.format), args.out)
    return EXIT_OK if doc["summary"]["failures"] == 0 else EXIT_ASSERTION


def cmd_fibrations(args) -> int:
    doc = _request(args, "get", "/fibrations")
    if doc is None:
        return EXIT_USAGE
    _emit(_render_fibrations(doc, args.format), args.out)
    return EXIT_OK if doc["summary"]["failures"] == 0 else EXIT_ASSERTION


def cmd_verify(args) -> int:
    doc = _request(args, "post", "/verify", _sweep_body(args))
    if doc is None:
        return EXIT_USAGE
    _emit(_render_verify(doc, args.format), args.out)
    return EXIT_OK if doc["summary"]["failures"] == 0 else EXIT_ASSERTION


def cmd_thm23(args) -> int:
    doc = _request(args, "post", "/thm23", _sweep_body(args))
    if doc is None:
        return EXIT_USAGE
    _emit(_render_thm23(doc, args.format), args.out)
    s = doc["summary"]
    bad = (
        s["forward_failures"]
        + s["equivalence_divergences"]
        + s["annihilation_failures"]
        + s["quotient_failures"]
    )
    return EXIT_OK if bad == 0 else EXIT_ASSERTION


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("cubiclines.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def _add_common(parser):
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", metavar="FILE", default=None, help="write output to FILE")
    parser.add_argument("--url", default=None, help="remote service URL (default: in-process)")


def _add_sweep_options(parser):
    parser.add_argument("--seed", type=int, default=0, help="seed for the SplitMix64 stream")
    parser.add_argument("--random", type=int, default=0, help="number of random subgroups to draw")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes")
    parser.add_argument("--max-gens", type=int, default=3, dest="max_gens")
    parser.add_argument("--no-cyclic", action="store_true", help="skip the cyclic family")
    parser.add_argument("--no-stabilizers", action="store_true", help="skip the 27 stabilizers")
    parser.add_argument(
        "--gens",
        action="append",
        default=None,
        metavar="SPEC",
        help="analyse the subgroup generated by SPECs instead of a family; "
        "SPEC is cycle notation over line names or basis assignments "
        "like 'E1->E2;E2->E3;E3->E1'",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubiclines",
        description="Verification reports for the divisor lattice of the 27 "
        "lines on a cubic surface.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lines", help="dump the 27-line table")
    _add_common(p)
    p.set_defaults(func=cmd_lines)

    p = sub.add_parser("lemma21", help="exhaustive sixth-skew-line equivalence check")
    _add_common(p)
    p.add_argument(
        "--self-test",
        action="store_true",
        dest="self_test",
        help="run against a deliberately corrupted table (must fail)",
    )
    p.set_defaults(func=cmd_lemma21)

    p = sub.add_parser("fibrations", help="per-line conic fibration structure checks")
    _add_common(p)
    p.set_defaults(func=cmd_fibrations)

    p = sub.add_parser("thm23", help="section-criterion sweep over fixed lines")
    _add_common(p)
    _add_sweep_options(p)
    p.set_defaults(func=cmd_thm23)

    p = sub.add_parser("verify", help="norm-span quotient sweep over subgroup families")
    _add_common(p)
    _add_sweep_options(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
