"""Command-line front end.

Every subcommand prints exactly one JSON document to stdout; progress and
diagnostics go to stderr so sweeps stay scriptable.  Group orders, tree
counts, and invariant factors are serialized as decimal strings because
they outgrow fixed-width integers quickly.  Exit status: 0 on success or
agreement, 1 when independent computation routes disagree or a
verification sweep fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import abelian
from .arith import prime_power
from .circulant import (
    enumeration_cap,
    quotient_group_closed,
    star_group_closed,
    unit_group_brute,
)
from .closed_form import sand_dune_group, sandpile_group, sigma_relation_matrix
from .digraphs import (
    build_consecutive_d,
    de_bruijn,
    kautz,
    sandpile_group_snf,
    spanning_tree_count,
)
from .exact_linalg import parse_matrix, smith_group, smith_normal_form
from .verify import SweepConfig, VerificationFailure, run_all


def _elapsed_ms(t0: float) -> int:
    return int(round((time.perf_counter() - t0) * 1000))


def _cmd_family(args: argparse.Namespace) -> tuple[dict, int]:
    """db / kautz: closed forms and SNF oracles side by side."""
    t0 = time.perf_counter()
    n, d, root = args.n, args.d, args.root
    if args.command == "db":
        family = "de_bruijn"
        graph = de_bruijn(n, d)
        signed_d = d
    else:
        family = "kautz"
        graph = kautz(n, d)
        signed_d = -d
    sandpile_closed = sandpile_group(n, signed_d)
    dune_closed = sand_dune_group(n, signed_d)
    sandpile_snf = sandpile_group_snf(graph, root)
    free_rank, dune_snf = smith_group(sigma_relation_matrix(n, signed_d))
    trees = spanning_tree_count(graph, root)
    agrees = (
        sandpile_snf == sandpile_closed
        and free_rank == 0
        and dune_snf == dune_closed
        and trees == sandpile_closed.order
    )
    if not agrees:
        print(
            f"disagreement at (n, d) = ({n}, {signed_d}):\n"
            f"  sandpile closed form  {sandpile_closed}\n"
            f"  sandpile SNF oracle   {sandpile_snf}\n"
            f"  sand dune closed form {dune_closed}\n"
            f"  sand dune SNF oracle  {dune_snf} (free rank {free_rank})\n"
            f"  spanning trees at root {root}: {trees}",
            file=sys.stderr,
        )
    doc = {
        "command": args.command,
        "n": n,
        "d": d,
        "family": family,
        "sandpile": sandpile_closed.to_json_dict(),
        "sand_dune": dune_closed.to_json_dict(),
        "spanning_trees": str(trees),
        "agrees": agrees,
        "method": "closed_form+snf",
        "elapsed_ms": _elapsed_ms(t0),
    }
    return doc, 0 if agrees else 1


def _cmd_consecutive(args: argparse.Namespace) -> tuple[dict, int]:
    t0 = time.perf_counter()
    graph = build_consecutive_d(args.d, args.n, args.q, args.r)
    group = sandpile_group_snf(graph, args.root)
    doc = {
        "command": "consecutive",
        "d": args.d,
        "n": args.n,
        "q": args.q,
        "r": args.r,
        "root": args.root,
        "sandpile": group.to_json_dict(),
        "method": "snf",
        "elapsed_ms": _elapsed_ms(t0),
    }
    return doc, 0


def _cmd_snf(args: argparse.Namespace) -> tuple[dict, int]:
    t0 = time.perf_counter()
    matrix = parse_matrix(Path(args.file).read_text())
    result = smith_normal_form(matrix)
    doc = {
        "command": "snf",
        "file": args.file,
        "rows": matrix.rows,
        "cols": matrix.cols,
        "rank": result.rank,
        "invariant_factors": [str(s) for s in result.invariant_factors],
        "method": "snf",
        "elapsed_ms": _elapsed_ms(t0),
    }
    return doc, 0


def _circulant_closed(n: int, q: int, restricted: bool, mod_x: bool):
    base, method = (
        quotient_group_closed(n, q) if mod_x else star_group_closed(n, q)
    )
    if restricted:
        return base, method
    # The full unit group adds the scalar subgroup F_q^* on top of the
    # restricted one; <x> sits inside the restricted part, so the same
    # splitting works for the quotient.
    return abelian.direct_sum(base, abelian.from_cyclic_orders([q - 1])), method


def _cmd_circulant(args: argparse.Namespace) -> tuple[dict, int]:
    t0 = time.perf_counter()
    n, q = args.n, args.q
    if prime_power(q) is None:
        raise ValueError(f"{q} is not a prime power")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if args.brute:
        group = unit_group_brute(
            n, q, restricted=args.restricted, modulo_x=args.mod_x, cap=args.cap
        )
        method = "brute"
    elif args.closed:
        group, method = _circulant_closed(n, q, args.restricted, args.mod_x)
    else:
        try:
            group, method = _circulant_closed(n, q, args.restricted, args.mod_x)
        except ValueError:
            print(
                f"no closed decomposition for this case; enumerating "
                f"{q}^{n} ring elements",
                file=sys.stderr,
            )
            group = unit_group_brute(
                n, q, restricted=args.restricted, modulo_x=args.mod_x, cap=args.cap
            )
            method = "brute"
    doc = {
        "command": "circulant",
        "n": n,
        "q": q,
        "restricted": args.restricted,
        "mod_x": args.mod_x,
        "group": group.to_json_dict(),
        "method": method,
        "elapsed_ms": _elapsed_ms(t0),
    }
    return doc, 0


def _cmd_verify(args: argparse.Namespace) -> tuple[dict, int]:
    t0 = time.perf_counter()
    config = SweepConfig(
        n_max=args.n_max,
        d_max=args.d_max,
        q_max=args.q_max,
        brute_cap=args.brute_cap,
    )
    doc = {
        "command": "verify",
        "n_max": config.n_max,
        "d_max": config.d_max,
        "q_max": config.q_max,
        "brute_cap": config.brute_cap,
    }

    def progress(message: str) -> None:
        print(message, file=sys.stderr, flush=True)

    try:
        totals = run_all(config, progress=progress)
    except VerificationFailure as failure:
        print(f"verification failed: {failure}", file=sys.stderr)
        doc.update(
            passed=False, failure=str(failure), elapsed_ms=_elapsed_ms(t0)
        )
        return doc, 1
    doc.update(
        passed=True,
        checks={name: count for name, count in totals.items()},
        total_comparisons=sum(totals.values()),
        elapsed_ms=_elapsed_ms(t0),
    )
    return doc, 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sandpiles",
        description=(
            "Sandpile groups of generalized de Bruijn and Kautz digraphs, "
            "and unit groups of circulants over finite fields, computed "
            "exactly by closed forms and Smith normal form oracles."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    db = sub.add_parser(
        "db", help="sandpile and sand dune groups of de Bruijn DB(n, d)"
    )
    db.add_argument("n", type=int, help="number of vertices")
    db.add_argument("d", type=int, help="degree (arcs v -> d*v + j)")
    db.add_argument("--root", type=int, default=0, help="root vertex for the SNF oracle")

    ktz = sub.add_parser(
        "kautz", help="sandpile and sand dune groups of Kautz Ktz(n, d)"
    )
    ktz.add_argument("n", type=int, help="number of vertices")
    ktz.add_argument("d", type=int, help="degree (arcs v -> -d*v - j)")
    ktz.add_argument("--root", type=int, default=0, help="root vertex for the SNF oracle")

    cons = sub.add_parser(
        "consecutive",
        help="SNF sandpile group of the consecutive-d digraph (arcs v -> q*v + r + i)",
    )
    cons.add_argument("d", type=int, help="out-degree (consecutive targets)")
    cons.add_argument("n", type=int, help="number of vertices")
    cons.add_argument("q", type=int, help="multiplier")
    cons.add_argument("r", type=int, help="offset")
    cons.add_argument("--root", type=int, default=0, help="root vertex")

    snf = sub.add_parser("snf", help="Smith normal form of a matrix file")
    snf.add_argument(
        "file",
        help='text file: first line "rows cols", then one signed decimal row per line',
    )

    circ = sub.add_parser(
        "circulant", help="unit group of circulant matrices over F_q"
    )
    circ.add_argument("--n", type=int, required=True, help="matrix size / modulus x^n - 1")
    circ.add_argument("--q", type=int, required=True, help="field size (prime power)")
    circ.add_argument(
        "--restricted",
        action="store_true",
        help="restrict to circulants fixing the all-ones vector (C')",
    )
    circ.add_argument(
        "--mod-x",
        action="store_true",
        help="quotient by the cyclic subgroup generated by x",
    )
    route = circ.add_mutually_exclusive_group()
    route.add_argument(
        "--brute", action="store_true", help="force brute-force enumeration"
    )
    route.add_argument(
        "--closed", action="store_true", help="force the closed-form route"
    )
    circ.add_argument(
        "--cap",
        type=int,
        default=None,
        help=f"enumeration cap on q^n (default {enumeration_cap()})",
    )

    ver = sub.add_parser("verify", help="run the full property sweep")
    ver.add_argument("--n-max", type=int, default=SweepConfig.n_max)
    ver.add_argument("--d-max", type=int, default=SweepConfig.d_max)
    ver.add_argument("--q-max", type=int, default=SweepConfig.q_max)
    ver.add_argument(
        "--brute-cap",
        type=int,
        default=None,
        help="enumeration cap for the brute-force circulant sweep",
    )
    return parser


_HANDLERS = {
    "db": _cmd_family,
    "kautz": _cmd_family,
    "consecutive": _cmd_consecutive,
    "snf": _cmd_snf,
    "circulant": _cmd_circulant,
    "verify": _cmd_verify,
}


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        doc, code = _HANDLERS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"internal disagreement: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(doc, indent=2))
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
