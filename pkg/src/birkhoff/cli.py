"""Command line front end.

Exit codes: 0 success, 2 usage error, 3 invalid face, 4 record budget
exceeded, 5 internal consistency failure (a --verify cross-check failed).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import ehrhart, fastcount, montecarlo, simplices, triangulate, young
from .matrix import (
    MAX_ORDER,
    BinaryMatrix,
    InvalidFaceError,
    UsageError,
    dimension,
    face_closure,
    is_face,
)

EXIT_OK, EXIT_USAGE, EXIT_INVALID_FACE, EXIT_BUDGET, EXIT_CONSISTENCY = 0, 2, 3, 4, 5

log = logging.getLogger("birkhoff")


class ConsistencyError(RuntimeError):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _require_n(args, lo=1, hi=MAX_ORDER) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    if not lo <= args.n <= hi:
        raise UsageError(f"--n must be in {lo}..{hi}")
    return args.n


def _lattice_report(n, top, args):
    """Relative volume plus per-level record counts for the face ``top``."""
    if n >= 7:
        # one level at a time keeps memory flat at the sizes n = 7 reaches
        sizes: list[int] = []
        vol = triangulate.relative_volume_streaming(
            top, memory_cap=args.memory_cap, threads=args.threads, stats=sizes
        )
        return vol, sizes
    lattice = triangulate.build_lattice(top, memory_cap=args.memory_cap, threads=args.threads)
    return triangulate.accumulate_volumes(lattice)[0][0], lattice.level_sizes()


def _leading_ehrhart(n: int) -> int:
    counter = fastcount.magic_counts if n >= 7 else None
    return ehrhart.ehrhart_polynomial(n, counter=counter).leading


def cmd_volume(args) -> int:
    n = _require_n(args)
    vol, sizes = _lattice_report(n, triangulate.birkhoff(n), args)
    tv = triangulate.true_volume(n, vol)
    payload = {
        "n": n,
        "relative_volume": str(vol),
        "true_volume": f"{tv.numerator}/{tv.denominator}",
        "level_sizes": sizes,
        "records": sum(sizes),
    }
    if args.verify:
        lead = _leading_ehrhart(n)
        payload["ehrhart_leading"] = str(lead)
        if lead != vol:
            raise ConsistencyError(f"triangulation gives {vol}, Ehrhart polynomial gives {lead}")
    text = (
        f"n = {n}\nrelative volume: {vol}\ntrue volume: {tv}\n"
        f"records: {sum(sizes)} over {len(sizes)} levels {sizes}"
    )
    _emit(args, payload, text)
    return EXIT_OK


def cmd_face_volume(args) -> int:
    if not args.face:
        raise UsageError("--face is required")
    face = BinaryMatrix.from_text(Path(args.face).read_text())
    closed = False
    if not is_face(face):
        face2 = face_closure(face)
        if face2.bits == 0:
            raise InvalidFaceError("the matrix contains no permutation matrix")
        print("warning: input is not a face; using its face closure", file=sys.stderr)
        face, closed = face2, True
    vol, sizes = _lattice_report(face.n, face, args)
    payload = {
        "n": face.n,
        "face": face.to_text(),
        "closed": closed,
        "dimension": dimension(face),
        "relative_volume": str(vol),
        "level_sizes": sizes,
    }
    text = f"{face}\ndimension: {dimension(face)}\nrelative volume: {vol}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_ehrhart(args) -> int:
    n = _require_n(args)
    if args.verify and n > 7:
        raise UsageError("--verify for ehrhart needs a triangulation, limited to n <= 7")
    counter = fastcount.magic_counts if n >= 7 else None
    poly = ehrhart.ehrhart_polynomial(n, counter=counter)
    payload = poly.to_json()
    if args.verify:
        vol, _ = _lattice_report(n, triangulate.birkhoff(n), args)
        payload["relative_volume"] = str(vol)
        if vol != poly.leading:
            raise ConsistencyError(f"leading coefficient {poly.leading} != volume {vol}")
    _emit(args, payload, f"e(B_{n},t) = {poly}")
    return EXIT_OK


def cmd_magic_count(args) -> int:
    n = _require_n(args)
    if args.t is None or args.t < 0:
        raise UsageError("--t must be a nonnegative integer")
    if n >= 7 and args.t > 0:
        count = fastcount.magic_counts(n, [args.t])[0]
    else:
        count = ehrhart.magic_count(n, args.t)
    _emit(args, {"n": n, "t": args.t, "count": str(count)}, str(count))
    return EXIT_OK


def _known_relvol(n: int):
    if n <= 5:
        return triangulate.relative_volume(triangulate.birkhoff(n), backend="python")
    if n <= 7:
        return _leading_ehrhart(n)
    return None


def cmd_montecarlo(args) -> int:
    n = _require_n(args, lo=2)
    if args.trials is None or args.trials < 1:
        raise UsageError("--trials must be a positive integer")
    relvol = _known_relvol(n)
    exact = None if relvol is None else montecarlo.exact_alpha(n, relvol)
    if exact is not None and exact * args.trials < 10:
        print(
            f"warning: expected about {float(exact * args.trials):.3g} hits; "
            "the estimate is meaningless at this size",
            file=sys.stderr,
        )
    rep = montecarlo.estimate_alpha(
        n, args.trials, seed=args.seed, partitions=args.partitions, threads=args.threads or 1
    )
    payload = rep.to_json()
    if exact is not None:
        payload["exact_alpha"] = f"{exact.numerator}/{exact.denominator}"
    text = f"alpha_hat = {rep.hits}/{rep.trials} = {rep.hits / rep.trials:.6f} +- {rep.stderr:.6f}"
    if exact is not None:
        text += f"\nexact alpha = {exact} = {float(exact):.6f}"
    if args.verify and exact is not None and abs(rep.hits / rep.trials - exact) > 5 * rep.stderr:
        _emit(args, payload, text)
        raise ConsistencyError("estimate is more than 5 standard errors from the exact value")
    _emit(args, payload, text)
    return EXIT_OK


def cmd_conjecture(args) -> int:
    n = _require_n(args, lo=2)
    vol, _ = _lattice_report(n, young.staircase_face(n), args)
    expected = young.catalan_product(n)
    ok = vol == expected
    payload = {"n": n, "relative_volume": str(vol), "catalan_product": str(expected), "verified": ok}
    _emit(args, payload, f"verified: {vol}" if ok else f"FAILED: volume {vol}, product {expected}")
    return EXIT_OK if ok else EXIT_CONSISTENCY


def cmd_census(args) -> int:
    n = _require_n(args)
    if n != 4:
        raise UsageError("the census is only supported for n = 4")
    total, std = simplices.census_minimal_simplices(n)
    payload = {"n": n, "total": str(total), "in_standard": str(std)}
    _emit(args, payload, f"minimal simplices: {total}\nin some standard triangulation: {std}")
    return EXIT_OK


COMMANDS = {
    "volume": cmd_volume,
    "face-volume": cmd_face_volume,
    "ehrhart": cmd_ehrhart,
    "magic-count": cmd_magic_count,
    "montecarlo": cmd_montecarlo,
    "conjecture": cmd_conjecture,
    "census": cmd_census,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--t", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--partitions", type=int, default=1, help="Monte Carlo seed streams")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--memory-cap", type=int, default=triangulate.DEFAULT_MEMORY_CAP)
    common.add_argument("--json", action="store_true")
    common.add_argument("--verify", action="store_true", help="run cross-method checks")
    common.add_argument("--face", help="face file: n lines of n characters 0/1")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="birkhoff", description="Volumes and Ehrhart polynomials of the Birkhoff polytope"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "volume": "relative and true volume of B_n by triangulation",
        "face-volume": "relative volume of a face given in a file",
        "ehrhart": "Ehrhart polynomial of B_n from magic-square counts",
        "magic-count": "number of n x n magic squares with line sum t",
        "montecarlo": "Monte Carlo estimate of vol(A_n)/vol(C_n)",
        "conjecture": "staircase face volume against the Catalan product",
        "census": "minimal simplices on the vertices of B_4",
    }
    for name, h in helps.items():
        sub.add_parser(name, parents=[common], help=h)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(message)s",
    )
    logging.getLogger("numba").setLevel(logging.WARNING)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidFaceError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID_FACE if isinstance(e, InvalidFaceError) else EXIT_USAGE
    except triangulate.BudgetExceededError as e:
        if args.json:
            partial = {"error": "budget exceeded", "cap": e.cap, "level_sizes": e.level_sizes}
            print(json.dumps(partial, sort_keys=True))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ConsistencyError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
