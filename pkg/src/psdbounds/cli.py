"""Command-line front end.

Matrices and patterns travel in the shared text format (stdin by default),
embeddings/factorizations/certificates as JSON documents; ``--json``
switches every command to machine-readable output.  Exit status: 0 ok,
1 verification failure or inconclusive certificate, 2 usage error,
3 search budget or retry cap exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import formats
from .cutpoly import appendix_reduction_check, graph_H, iter_slack_rows
from .embed import (
    embedding_from_psd,
    embedding_from_rank_factorization,
    embrkl_bounds,
    psd_from_embedding,
    verify_embedding,
)
from .linalg import rank
from .pattern import SearchBudgetExceeded, boolean_rank, support, triangular_rank
from .psd import (
    RealizationError,
    generate_sn,
    min_sqrt_rank,
    order3_exclusion,
    realize_support,
    verify_psd_factorization,
)
from .reduction import ReductionError, reduce_factor_ranks

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_EXHAUSTED = 3

THREADS_ENV = "PSDBOUNDS_THREADS"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(doc: dict, human: str, as_json: bool):
    if as_json:
        doc = {"schema": formats.SCHEMA_VERSION, **doc}
        print(json.dumps(doc, indent=2))
    else:
        print(human)


def _index_list(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad index list {text!r}")
    if any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("indices are 1-based")
    return values


@dataclass(frozen=True)
class BoundReport:
    """Everything the support and the exact entries certify about a matrix."""

    identity: str
    rank: int
    triangular_rank: int
    boolean_rank: int | None
    boolean_rank_bounds: tuple[int, int] | None
    embedding_dim_bounds: tuple[int, int]
    psd_lower_bound: int
    psd_lower_bound_source: str

    def to_doc(self) -> dict:
        return {
            "kind": "bound_report",
            "matrix": self.identity,
            "rank": {"value": self.rank, "via": "fraction-free elimination"},
            "triangular_rank": {
                "value": self.triangular_rank,
                "via": "triangular_rank branch and bound",
            },
            "boolean_rank": {
                "value": self.boolean_rank,
                "bounds": list(self.boolean_rank_bounds)
                if self.boolean_rank_bounds
                else None,
                "via": "minimum_biclique_cover branch and bound",
            },
            "embedding_dim_bounds": {
                "value": list(self.embedding_dim_bounds),
                "via": "embrkl_bounds (triangular rank / rank)",
            },
            "psd_rank_lower_bound": {
                "value": self.psd_lower_bound,
                "via": self.psd_lower_bound_source,
            },
        }

    def to_text(self) -> str:
        lines = [f"matrix:               {self.identity}"]
        lines.append(f"rank:                 {self.rank}")
        lines.append(f"triangular rank:      {self.triangular_rank}")
        if self.boolean_rank is not None:
            lines.append(f"boolean rank:         {self.boolean_rank}")
        else:
            lo, hi = self.boolean_rank_bounds
            lines.append(f"boolean rank:         unknown, bounds [{lo},{hi}]")
        lo, hi = self.embedding_dim_bounds
        lines.append(f"embedding dimension:  between {lo} and {hi}")
        lines.append(
            f"psd rank lower bound: {self.psd_lower_bound}"
            f" (via {self.psd_lower_bound_source})"
        )
        return "\n".join(lines)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psdbounds",
        description="Exact lower bounds on positive semidefinite and nonnegative rank.",
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get(THREADS_ENV, "1")),
        help=f"worker threads for enumerations (default ${THREADS_ENV} or 1)",
    )
    # the same flags are accepted after the subcommand; SUPPRESS keeps a
    # subparser from clobbering values given before it
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)

    sub = parser.add_subparsers(dest="command", required=True)

    def command(owner, name, **kw):
        return owner.add_parser(name, parents=[common], **kw)

    def with_input(p):
        p.add_argument("file", nargs="?", default="-", help="input file or - for stdin")
        return p

    with_input(command(sub, "rank", help="exact rank of a matrix"))
    with_input(command(sub, "trirank", help="triangular rank of the support"))
    p = with_input(command(sub, "boolrank", help="boolean rank of the support"))
    p.add_argument("--budget", type=int, default=2_000_000, help="search node cap")
    p = with_input(command(sub, "bounds", help="full bound report"))
    p.add_argument("--budget", type=int, default=2_000_000)

    p_embed = sub.add_parser("embed", help="build embeddings")
    embed_sub = p_embed.add_subparsers(dest="mode", required=True)
    with_input(command(embed_sub, "from-rank", help="embedding from a matrix"))
    with_input(command(embed_sub, "from-psd", help="embedding from a factorization JSON"))

    p_psd = sub.add_parser("psd", help="build psd factorizations")
    psd_sub = p_psd.add_subparsers(dest="mode", required=True)
    with_input(
        command(psd_sub, "from-embedding", help="projection factorization of an embedding")
    )

    p_verify = sub.add_parser("verify", help="check certificates")
    verify_sub = p_verify.add_subparsers(dest="mode", required=True)
    p = command(verify_sub, "psd", help="factorization against a matrix")
    p.add_argument("factorization", help="factorization JSON file")
    p.add_argument("matrix", help="matrix text file")
    p = command(verify_sub, "embedding", help="embedding against a pattern")
    p.add_argument("embedding", help="embedding JSON file")
    p.add_argument("pattern", help="pattern text file")

    p = with_input(
        command(sub, "realize-support", help="rational matrix realizing the support")
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tries", type=int, default=5)

    p = with_input(
        command(sub, "sqrt-bound", help="minimum rank over entrywise square roots")
    )
    p.add_argument("--rows", type=_index_list, required=True, help="1-based, e.g. 3,4,5,6")
    p.add_argument("--cols", type=_index_list, required=True, help="1-based, e.g. 1,2,3,4")
    p.add_argument("--no-sign-fix", action="store_true", help="enumerate all 2^z signs")

    p = with_input(command(sub, "order3-exclude", help="psd rank >= 4 certificate"))
    p.add_argument("--no-sign-fix", action="store_true")

    p = with_input(command(sub, "reduce-rank", help="reduce factor ranks (floats)"))
    p.add_argument("--tol", type=float, default=1e-9)

    p_gen = sub.add_parser("gen", help="generators")
    gen_sub = p_gen.add_subparsers(dest="mode", required=True)
    p = command(gen_sub, "sn", help="the banded rank-3 family")
    p.add_argument("n", type=int)
    p = command(gen_sub, "cutpoly", help="clique-inequality slack matrix of K_n")
    p.add_argument("n", type=int)
    p = command(gen_sub, "disjointness", help="disjointness graph on l-subsets")
    p.add_argument("n", type=int, metavar="N")
    p.add_argument("l", type=int, metavar="L")
    p.add_argument(
        "--which",
        choices=["h", "hbar"],
        default="h",
        help="h: disjoint pairs; hbar: unique-intersection pairs",
    )

    p = command(sub, "appendix-check", help="verify the cover reduction identity")
    p.add_argument("n", type=int)
    return parser


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return _dispatch(args)
    except formats.FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except RealizationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except ReductionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (ValueError, OSError) as exc:
        # precondition violations and unreadable inputs are usage errors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "rank":
        value = rank(formats.parse_matrix(_read(args.file)))
        _emit({"kind": "rank", "value": value}, str(value), args.json)
        return EXIT_OK

    if cmd == "trirank":
        value = triangular_rank(support(formats.parse_matrix(_read(args.file))))
        _emit({"kind": "triangular_rank", "value": value}, str(value), args.json)
        return EXIT_OK

    if cmd == "boolrank":
        pat = support(formats.parse_matrix(_read(args.file)))
        try:
            value = boolean_rank(pat, budget=args.budget, threads=args.threads)
        except SearchBudgetExceeded as exc:
            _emit(
                {
                    "kind": "boolean_rank",
                    "value": None,
                    "bounds": [exc.lower, exc.upper],
                },
                f"unknown, bounds [{exc.lower},{exc.upper}]",
                args.json,
            )
            return EXIT_EXHAUSTED
        _emit({"kind": "boolean_rank", "value": value}, str(value), args.json)
        return EXIT_OK

    if cmd == "bounds":
        return _cmd_bounds(args)

    if cmd == "embed" and args.mode == "from-rank":
        emb = embedding_from_rank_factorization(formats.parse_matrix(_read(args.file)))
        print(formats.embedding_to_json(emb), end="")
        return EXIT_OK

    if cmd == "embed" and args.mode == "from-psd":
        fact = formats.factorization_from_json(_read(args.file))
        emb = embedding_from_psd(fact)
        print(formats.embedding_to_json(emb), end="")
        return EXIT_OK

    if cmd == "psd" and args.mode == "from-embedding":
        emb = formats.embedding_from_json(_read(args.file))
        fact, t = psd_from_embedding(emb)
        doc = json.loads(formats.factorization_to_json(fact))
        doc["T"] = [[str(v) for v in t.row(i)] for i in range(t.rows)]
        print(json.dumps(doc, indent=2))
        return EXIT_OK

    if cmd == "verify" and args.mode == "psd":
        fact = formats.factorization_from_json(_read(args.factorization))
        matrix = formats.parse_matrix(_read(args.matrix))
        report = verify_psd_factorization(fact, matrix)
        doc = {
            "kind": "verification",
            "passed": report.passed,
            "psd_ok": report.psd_ok,
            "trace_mismatches": [[k + 1, l + 1] for k, l in report.mismatches],
        }
        _emit(doc, "pass" if report.passed else f"FAIL: {report.summary()}", args.json)
        return EXIT_OK if report.passed else EXIT_VERIFICATION

    if cmd == "verify" and args.mode == "embedding":
        emb = formats.embedding_from_json(_read(args.embedding))
        pat = formats.parse_pattern(_read(args.pattern))
        ok = verify_embedding(emb, pat)
        _emit({"kind": "verification", "passed": ok}, "pass" if ok else "FAIL", args.json)
        return EXIT_OK if ok else EXIT_VERIFICATION

    if cmd == "realize-support":
        fact = formats.factorization_from_json(_read(args.file))
        t = realize_support(fact, seed=args.seed, max_tries=args.tries)
        if args.json:
            _emit(_matrix_doc(t), "", True)
        else:
            print(formats.format_matrix(t), end="")
        return EXIT_OK

    if cmd == "sqrt-bound":
        matrix = formats.parse_matrix(_read(args.file))
        rows = [k - 1 for k in args.rows]
        cols = [l - 1 for l in args.cols]
        result = min_sqrt_rank(
            matrix, rows, cols,
            fix_global_sign=not args.no_sign_fix, threads=args.threads,
        )
        doc = {
            "kind": "sqrt_bound",
            "min_rank": result.min_rank,
            "assignments_checked": result.assignments_checked,
            "witness": formats.sign_assignment_doc(result.witness),
        }
        human = (
            f"minimum rank {result.min_rank} over "
            f"{result.assignments_checked} sign assignments"
        )
        _emit(doc, human, args.json)
        return EXIT_OK

    if cmd == "order3-exclude":
        matrix = formats.parse_matrix(_read(args.file))
        cert = order3_exclusion(
            matrix, fix_global_sign=not args.no_sign_fix, threads=args.threads
        )
        if args.json:
            print(formats.certificate_to_json(cert), end="")
        elif cert.conclusive:
            print(
                f"psd rank >= {cert.bound}: rows {[k + 1 for k in cert.rows]} x "
                f"cols {[l + 1 for l in cert.cols]}, all "
                f"{cert.assignments_checked} sign assignments have rank >= 4"
            )
        else:
            print(f"inconclusive: {cert.reason}")
        return EXIT_OK if cert.conclusive else EXIT_VERIFICATION

    if cmd == "reduce-rank":
        a_rows, b_rows, order = formats.float_factors_from_json(_read(args.file))
        a = [np.array(e).reshape(order, order) for e in a_rows]
        b = [np.array(e).reshape(order, order) for e in b_rows]
        report = reduce_factor_ranks(a, b, tol=args.tol)
        doc = {
            "kind": "rank_reduction",
            "a_ranks": list(report.a_ranks),
            "b_ranks": list(report.b_ranks),
            "max_residual": report.max_residual,
            "min_eigenvalue": report.min_eigenvalue,
        }
        human = (
            f"A ranks {list(report.a_ranks)}, B ranks {list(report.b_ranks)}, "
            f"max residual {report.max_residual:.2e}, "
            f"min eigenvalue {report.min_eigenvalue:.2e}"
        )
        _emit(doc, human, args.json)
        return EXIT_OK

    if cmd == "gen":
        return _cmd_gen(args)

    if cmd == "appendix-check":
        result = appendix_reduction_check(args.n)
        doc = {
            "kind": "appendix_check",
            "passed": result.ok,
            "pairs_checked": result.pairs_checked,
            "ground_size": result.ground_size,
            "subset_size": result.subset_size,
        }
        human = (
            f"{'pass' if result.ok else 'FAIL'}: {result.pairs_checked} pairs, "
            f"N={result.ground_size}, l={result.subset_size}"
        )
        _emit(doc, human, args.json)
        return EXIT_OK if result.ok else EXIT_VERIFICATION

    raise AssertionError(f"unhandled command {cmd}")  # pragma: no cover


def _matrix_doc(m) -> dict:
    return {
        "kind": "matrix",
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[str(v) for v in m.row(i)] for i in range(m.rows)],
    }


def _cmd_bounds(args) -> int:
    matrix = formats.parse_matrix(_read(args.file))
    pat = support(matrix)
    rk = rank(matrix)
    tri = triangular_rank(pat)
    try:
        brank, bbounds = boolean_rank(pat, budget=args.budget, threads=args.threads), None
    except SearchBudgetExceeded as exc:
        brank, bbounds = None, (exc.lower, exc.upper)
    emb_lo, emb_hi = embrkl_bounds(matrix)
    psd_lb, source = tri, "triangular rank"
    if matrix.is_nonnegative():
        # keep the report snappy: small enumeration cap and few blocks here,
        # the dedicated order3-exclude command has the full defaults
        cert = order3_exclusion(matrix, cap=12, max_attempts=8, threads=args.threads)
        if cert.conclusive and cert.bound > psd_lb:
            psd_lb, source = cert.bound, "order-3 exclusion certificate"
    report = BoundReport(
        identity=args.file if args.file != "-" else "stdin",
        rank=rk,
        triangular_rank=tri,
        boolean_rank=brank,
        boolean_rank_bounds=bbounds,
        embedding_dim_bounds=(emb_lo, emb_hi),
        psd_lower_bound=psd_lb,
        psd_lower_bound_source=source,
    )
    _emit(report.to_doc(), report.to_text(), args.json)
    return EXIT_OK


def _cmd_gen(args) -> int:
    if args.mode == "sn":
        m = generate_sn(args.n)
        if args.json:
            _emit(_matrix_doc(m), "", True)
        else:
            print(formats.format_matrix(m), end="")
        return EXIT_OK
    if args.mode == "cutpoly":
        if args.json:
            from .cutpoly import slack_matrix_cut_clique

            _emit(_matrix_doc(slack_matrix_cut_clique(args.n)), "", True)
            return EXIT_OK
        first = True
        for row in iter_slack_rows(args.n):
            if first:
                n_cliques = (1 << args.n) - 1 - args.n
                print(f"{n_cliques} {1 << (args.n - 1)}")
                first = False
            print(" ".join(str(v) for v in row))
        return EXIT_OK
    if args.mode == "disjointness":
        h, hbar = graph_H(args.n, args.l)
        g = h if args.which == "h" else hbar
        if args.json:
            doc = {
                "kind": "graph",
                "left": g.left_count,
                "right": g.right_count,
                "adj": [
                    [v + 1 for v in range(g.right_count) if g.has_edge(u, v)]
                    for u in range(g.left_count)
                ],
            }
            _emit(doc, "", True)
        else:
            print(formats.format_graph(g), end="")
        return EXIT_OK
    raise AssertionError(f"unhandled gen mode {args.mode}")  # pragma: no cover


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
