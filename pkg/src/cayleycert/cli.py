"""Command line front end: ``cayleycert verify | ball | construct``.

Exit codes: 0 success, 1 usage or configuration error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from . import halgebra as ha
from .certificate import RunConfig
from .groups import DEFAULT_BSGS_DEGREE_CAP, DEFAULT_CLOSURE_CAP

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2
PRINT_CYCLES_MAX_DEGREE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad input, which would collide with
    # the verification-failure code.
    def error(self, message):
        raise UsageError(message)


def parse_m_range(text: str) -> list[int]:
    """``"4..8"`` -> [4, 5, 6, 7, 8]; a single integer is accepted too."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise UsageError(f"empty m range {text!r}")
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise UsageError(f"cannot parse m range {text!r}; expected e.g. 4..8") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cayleycert", description="Verify the cubic Cayley graphs Gamma_m on Alt(2^m - 1).")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    v = sub.add_parser("verify", help="run the checks and write a certificate")
    g = v.add_mutually_exclusive_group(required=True)
    g.add_argument("--m", type=int)
    g.add_argument("--m-range")
    v.add_argument("--lemmas", default="all", help="'all' or a comma separated list of check ids")
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--strategy", choices=["auto", "chain", "jordan"], default="auto")
    v.add_argument("--bsgs-degree-cap", type=int, default=DEFAULT_BSGS_DEGREE_CAP)
    v.add_argument("--closure-cap", type=int, default=DEFAULT_CLOSURE_CAP)
    v.add_argument("--jordan-budget", type=int, default=100_000)
    v.add_argument("--ball-radius", type=int, default=4)
    v.add_argument("--out", help="write the JSON certificate here")
    v.add_argument("--format", choices=["json", "text"], default="text")

    b = sub.add_parser("ball", help="explore a ball of Cay(Alt(H*), {x, y, z})")
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--radius", type=int, default=3)
    b.add_argument("--export", choices=["dot", "json"], default="json")
    b.add_argument("--max-vertices", type=int, default=200_000)
    b.add_argument("--out", help="write the export here instead of stdout")

    c = sub.add_parser("construct", help="print x, y, z and the key elements of H")
    c.add_argument("--m", type=int, required=True)
    return p


def cmd_verify(args) -> int:
    from .lemmas import CHECK_IDS, run_all

    ms = [args.m] if args.m is not None else parse_m_range(args.m_range)
    lemmas = None
    if args.lemmas != "all":
        lemmas = [s.strip() for s in args.lemmas.split(",") if s.strip()]
        unknown = [s for s in lemmas if s not in CHECK_IDS]
        if unknown:
            raise UsageError(f"unknown check ids {unknown}; known: {', '.join(CHECK_IDS)}")
    try:
        cfg = RunConfig(m_values=ms, lemmas=lemmas, seed=args.seed, strategy=args.strategy,
                        bsgs_degree_cap=args.bsgs_degree_cap, closure_cap=args.closure_cap,
                        jordan_budget=args.jordan_budget, ball_radius=args.ball_radius)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cert = run_all(ms, cfg)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(cert.to_json())
    sys.stdout.write(cert.to_json() if args.format == "json" else cert.to_text())
    for r in cert.failures():
        print(f"FAILED m={r.m} {r.id}: {r.anchor}", file=sys.stderr)
    return EXIT_OK if cert.status == "pass" else EXIT_FAIL


def cmd_ball(args) -> int:
    from . import explorer

    if args.radius < 0 or args.max_vertices < 1:
        raise UsageError("radius must be >= 0 and max-vertices positive")
    ha.check_m(args.m)
    ball = explorer.bfs_ball(args.m, args.radius, args.max_vertices)
    data = explorer.export(ball, args.export)
    summary = {
        "m": args.m,
        "radius": args.radius,
        "vertices": len(ball.vertices),
        "edges": len(ball.edges),
        "frontier_sizes": ball.frontier_sizes,
        "truncated": ball.truncated,
        "girth": explorer.girth_report(ball),
        **explorer.ball_structure(ball),
    }
    text = json.dumps(summary, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
        sys.stdout.write(text)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        sys.stderr.write(text)
    return EXIT_OK


def cmd_construct(args) -> int:
    from .construction import build
    from .perm import compose, cycle_decomposition, format_cycles, parity

    m = ha.check_m(args.m)
    con = build(m)
    print(f"m = {m}, |H| = {1 << m}, points encoded as a^i b^j c^v -> i + 4j + 8v")
    print(f"h = {ha.h_element(m)}")
    if m % 2 == 0:
        print(f"h1 = {ha.h1_element(m)}")
    print(f"|U| = {len(ha.U_elements(m))}")
    for name, p in zip("xyz", con.connection_set()):
        ct = cycle_decomposition(p).cycle_type()
        invol = compose(p, p).is_identity()
        print(f"{name}: {parity(p)}, involution={invol}, cycle type {dict(sorted(ct.items()))}")
        if p.degree <= PRINT_CYCLES_MAX_DEGREE:
            print(f"  {format_cycles(p)}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        handler = {"verify": cmd_verify, "ball": cmd_ball, "construct": cmd_construct}[args.command]
        return handler(args)
    except UsageError as exc:
        print(f"cayleycert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"cayleycert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
