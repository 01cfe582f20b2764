"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 counterexample or engine/oracle
mismatch, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from .engine import colour_target
from .enumerate import DEFAULT_BOUND, enumerate_triangle_free_plane_graphs
from .errors import EngineError, NoColouringError, TfplcError
from .fuzz import compare_engine_vs_oracle, fuzz
from .io import parse_instance, read_planar_code, write_planar_code
from .oracle import Status, sweep_corpus
from .target import Target, validity_report

log = logging.getLogger("tfplc")

EXIT_OK, EXIT_INPUT, EXIT_FOUND, EXIT_INTERNAL = 0, 1, 2, 3


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _load_target(path: str) -> Target:
    obj = parse_instance(Path(path).read_text())
    if not isinstance(obj, Target):
        raise TfplcError("NOT_A_TARGET", f"{path} has no lists")
    return obj


def _read_corpus_instances(path: str) -> list:
    p = Path(path)
    if p.is_dir():
        texts = [f.read_text() for f in sorted(p.glob("*.tgt"))]
    else:
        texts, cur = [], []
        for line in p.read_text().splitlines():
            if line.strip() == "---":
                texts.append("\n".join(cur))
                cur = []
            else:
                cur.append(line)
        if any(x.strip() for x in cur):
            texts.append("\n".join(cur))
    out = []
    for text in texts:
        try:
            out.append(parse_instance(text))
        except TfplcError as exc:
            out.append(exc)
    return out


def cmd_colour(args) -> int:
    t = _load_target(args.file)
    rep = validity_report(t)
    if not rep.is_valid:
        _emit({"error": "INVALID_TARGET", **rep.to_dict()})
        return EXIT_INPUT
    try:
        out = colour_target(t, allow_fallback=not args.no_fallback)
    except NoColouringError as exc:
        _emit({"error": exc.code, "message": str(exc)})
        return EXIT_FOUND
    except EngineError as exc:
        _emit({"error": exc.code, "message": str(exc)})
        return EXIT_INTERNAL
    if args.report:
        _emit(
            {
                "colouring": {str(v): c for v, c in sorted(out.colouring.items())},
                "trace": [k.value for k in out.trace],
                "fallback_used": out.fallback_used,
            }
        )
    else:
        _emit({str(v): c for v, c in sorted(out.colouring.items())})
    return EXIT_OK


def cmd_validate(args) -> int:
    t = _load_target(args.file)
    _emit(validity_report(t).to_dict())
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.corpus:
        graphs = list(read_planar_code(Path(args.corpus).read_bytes()))
    else:
        graphs = list(enumerate_triangle_free_plane_graphs(args.max_n, bound=DEFAULT_BOUND))
    verdict = sweep_corpus(
        graphs,
        mode=args.mode,
        universe_cap=args.universe_cap,
        prune=not args.no_prune,
        jobs=args.jobs,
        checkpoint=args.checkpoint,
    )
    _emit(verdict.to_dict())
    return EXIT_FOUND if verdict.status == Status.COUNTEREXAMPLE else EXIT_OK


def cmd_fuzz(args) -> int:
    rep = fuzz(args.count, seed=args.seed, max_n=args.max_n, archive_dir=os.environ.get("TFPLC_DISCREPANCY_DIR"))
    _emit(rep.to_dict())
    return EXIT_FOUND if rep.mismatches or rep.fallbacks else EXIT_OK


def cmd_enumerate(args) -> int:
    data = write_planar_code(enumerate_triangle_free_plane_graphs(args.max_n, bound=DEFAULT_BOUND))
    if args.output:
        Path(args.output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return EXIT_OK


def cmd_compare(args) -> int:
    items = _read_corpus_instances(args.corpus)
    rep = compare_engine_vs_oracle(
        [x for x in items if not isinstance(x, Exception)], archive_dir=os.environ.get("TFPLC_DISCREPANCY_DIR")
    )
    rep.rejected += [f"parse error: {x}" for x in items if isinstance(x, Exception)]
    _emit(rep.to_dict())
    return EXIT_FOUND if rep.mismatches or rep.fallbacks else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tfplc", description="List colouring of triangle-free plane graphs.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("colour", help="colour a target with the reduction engine")
    p.add_argument("file")
    p.add_argument("--report", action="store_true", help="include trace and fallback flag")
    p.add_argument("--no-fallback", action="store_true", help="fail instead of using the backtracker")
    p.set_defaults(func=cmd_colour)

    p = sub.add_parser("validate", help="print the validity report of a target")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("verify", help="sweep 3-sufficiency of independent sets")
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--universe-cap", type=int, default=6)
    p.add_argument("--corpus", help="planar_code file used instead of the built-in enumerator")
    p.add_argument("--mode", choices=("maximal", "all"), default="maximal")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-prune", action="store_true", help="do not drop vertices with more colours than neighbours")
    p.add_argument("--checkpoint", help="resumable progress file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fuzz", help="engine against oracle on random valid targets")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=12)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("enumerate", help="write small triangle-free plane graphs as planar_code")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("compare", help="engine against oracle on a corpus of instance files")
    p.add_argument("--corpus", required=True, help="directory of .tgt files or one file with '---' separators")
    p.set_defaults(func=cmd_compare)
    return ap


def run_command(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (TfplcError, OSError, ValueError) as exc:
        code = getattr(exc, "code", type(exc).__name__)
        _emit({"error": code, "message": str(exc)})
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        _emit({"error": "INTERNAL", "message": str(exc)})
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
