"""Command-line interface.

Inputs are JSON files; results go to stdout or ``--out`` as JSON or CSV.
Exit codes: 0 success, 1 usage or parse error, 2 validation or property failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import warnings
from contextlib import contextmanager
from dataclasses import dataclass
from typing import List, Optional

from . import conelab, geom, qtypes, serialize, suites
from .numeric import Mode, format_scalar, parse_scalar
from .pieces import PieceError
from .serialize import ParseError
from .treeprod import Descriptor, InvalidDescriptor, divergence, dist, validate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2


class Failure(Exception):
    """Raised inside a command to exit with code 2."""


@dataclass
class RunConfig:
    mode: Mode = Mode.EXACT
    seed: int = 0
    samples: int = 1000
    out: Optional[str] = None
    strict: bool = True
    corrupt: bool = False


@contextmanager
def _output(path: Optional[str]):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit(cfg: RunConfig, text: str) -> None:
    with _output(cfg.out) as fh:
        fh.write(text if text.endswith("\n") else text + "\n")


def _emit_csv(cfg: RunConfig, header: list, rows: List[list]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    _emit(cfg, buf.getvalue())


def _load_descriptor(path: str, mode: Mode, check: bool = True) -> Descriptor:
    f = serialize.descriptor_from_json(serialize.load_json(path), mode)
    if check:
        bad = validate(f)
        if bad is not None:
            raise Failure(f"{path}: {bad}")
    return f


def _type_json(t) -> dict:
    if isinstance(t, qtypes.QType):
        return {"kind": "type", **serialize.qtype_to_json(t)}
    return {"kind": "trivial" if t == qtypes.TRIVIAL else "non_limit"}


# -- commands ----------------------------------------------------------------

def cmd_validate(args, cfg: RunConfig) -> int:
    f = _load_descriptor(args.file, cfg.mode, check=False)
    bad = validate(f)
    if bad is None:
        _emit(cfg, f"ok: {len(f)} steps, length {format_scalar(f.d)}")
        return EXIT_OK
    _emit(cfg, f"invalid: {bad.rule} at {bad.index}: {bad.message}")
    return EXIT_FAILURE


def cmd_dist(args, cfg: RunConfig) -> int:
    f = _load_descriptor(args.f, cfg.mode)
    g = _load_descriptor(args.g, cfg.mode)
    dv = divergence(f, g)
    _emit(cfg, f"{format_scalar(dist(f, g))} {dv.case} s={format_scalar(dv.s)}")
    return EXIT_OK


def cmd_geodesic(args, cfg: RunConfig) -> int:
    f = _load_descriptor(args.f, cfg.mode)
    g = _load_descriptor(args.g, cfg.mode)
    t = parse_scalar(args.t, cfg.mode)
    p = geom.geodesic_point(f, g, t, args.order)
    _emit(cfg, serialize.dumps(serialize.descriptor_to_json(p)))
    return EXIT_OK


def cmd_phi(args, cfg: RunConfig) -> int:
    f = _load_descriptor(args.f, cfg.mode)
    g = _load_descriptor(args.g, cfg.mode)
    out = geom.phi_inv(f, g) if args.inverse else geom.phi(f, g)
    _emit(cfg, serialize.dumps(serialize.descriptor_to_json(out)))
    return EXIT_OK


def cmd_median(args, cfg: RunConfig) -> int:
    f, g, h = (_load_descriptor(p, cfg.mode) for p in (args.f, args.g, args.h))
    _emit(cfg, serialize.dumps(serialize.median_to_json(geom.median(f, g, h))))
    return EXIT_OK


def cmd_type(args, cfg: RunConfig) -> int:
    f = _load_descriptor(args.f, cfg.mode)
    if args.at:
        f = geom.phi(_load_descriptor(args.at, cfg.mode), f)
    _emit(cfg, serialize.dumps(_type_json(qtypes.type_of(f))))
    return EXIT_OK


def cmd_realize(args, cfg: RunConfig) -> int:
    t = serialize.qtype_from_json(serialize.load_json(args.type), cfg.mode)
    at = _load_descriptor(args.at, cfg.mode) if args.at else Descriptor()
    g = qtypes.realize_type(at, t, args.salt)
    _emit(cfg, serialize.dumps(serialize.descriptor_to_json(g)))
    return EXIT_OK


CONVERGE_HEADER = ["pair_id", "n", "dist", "scaled", "D", "abs_error", "bound_C"]


def cmd_converge(args, cfg: RunConfig) -> int:
    if not args.n:
        raise ParseError("--n needs at least one scale")
    corpus = conelab.descriptor_corpus(args.seed, args.count)
    rows = []
    ok = True
    for pid, (f, g) in enumerate(corpus):
        rep = conelab.converge_check(f, g, args.n, pair_id=pid, strict=cfg.strict)
        ok = ok and rep.ok
        for r in rep.rows:
            rows.append([r.pair_id, r.n, r.dist, format_scalar(r.scaled), format_scalar(r.D),
                         format_scalar(r.abs_error), r.bound_C])
    _emit_csv(cfg, CONVERGE_HEADER, rows)
    return EXIT_OK if ok else EXIT_FAILURE


def cmd_suite(args, cfg: RunConfig) -> int:
    res = suites.run_suite(args.name, cfg.seed, cfg.samples, cfg.mode, cfg.corrupt)
    _emit_csv(cfg, suites.CSV_HEADER, res.csv_rows())
    for check, st in sorted(res.checks.items()):
        if st.violations:
            print(f"{res.name}/{check}: {st.violations} violations; first: {st.first_failure}",
                  file=sys.stderr)
    return EXIT_OK if res.ok else EXIT_FAILURE


# -- parser ------------------------------------------------------------------

def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=["exact", "float"], default=argparse.SUPPRESS,
                        help="numeric mode (default exact)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="treegraded", parents=[common],
                                     description="Exact computations in tree products of metric spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a descriptor file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("dist", parents=[common], help="distance, case tag and divergence")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("geodesic", parents=[common], help="point at distance t from f towards g")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--t", required=True)
    p.add_argument("--order", choices=["forward", "reverse"], default="forward",
                   help="coordinate order of the L1 geodesic selector")
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("phi", parents=[common], help="translate g by the isometry sending f to the base")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--inverse", action="store_true", help="apply the inverse isometry instead")
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("median", parents=[common], help="median of three points")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("h")
    p.set_defaults(func=cmd_median)

    p = sub.add_parser("type", parents=[common], help="type of the direction from the base (or --at) to f")
    p.add_argument("f")
    p.add_argument("--at")
    p.set_defaults(func=cmd_type)

    p = sub.add_parser("realize", parents=[common], help="a point whose direction has the given type")
    p.add_argument("type")
    p.add_argument("--salt", required=True)
    p.add_argument("--at")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("converge", parents=[common], help="word metric against the tree-product metric")
    p.add_argument("--seed", type=_seed, default=42)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--n", type=int, nargs="*", default=[16, 64, 256, 1024, 4096])
    p.add_argument("--no-strict", dest="strict", action="store_false",
                   help="round misaligned scales with a warning instead of failing")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("suite", parents=[common], help="run a seeded property suite")
    p.add_argument("name", choices=suites.SUITES)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--corrupt", action="store_true", help="inject a known fault (runner self-test)")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    cfg = RunConfig(
        mode=Mode.FLOAT if getattr(args, "mode", "exact") == "float" else Mode.EXACT,
        seed=getattr(args, "seed", 0),
        samples=getattr(args, "samples", 1000),
        out=getattr(args, "out", None),
        strict=getattr(args, "strict", True),
        corrupt=getattr(args, "corrupt", False),
    )
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            return args.func(args, cfg)
    except Failure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except InvalidDescriptor as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (ParseError, PieceError, qtypes.QTypeError, conelab.NotAligned,
            conelab.UnsupportedSpec, conelab.NonRationalCoordinate, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
