"""Command-line front end: ``relrips <command> [options]``.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 resource cap.
Errors are written to stderr as a single JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .brown import (FiltrationIndex, check_essential_triviality, FiltrationContext,
                    run_theorem_pipeline)
from .cayley import build_ball, peripheral_ball
from .coned import build_coned_ball
from .errors import RelRipsError
from .homology import reduced_homology, ChainComplex
from .hyperbolicity import delta_four_point, derive_params, estimate_rbcp
from .presentation import bounded_confluence_check, load_presentation, resolve_fixture
from .rips import RipsParams, build_plain_rips, build_relative_rips

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _config(args) -> dict:
    # the kernel backend is left out on purpose: both give identical numbers
    return {k: v for k, v in vars(args).items() if k not in ("func", "out")}


def _load(args):
    pres, peripheral = load_presentation(args.fixture)
    return pres, peripheral


def _require_peripheral(peripheral, fixture):
    if peripheral is None:
        raise RelRipsError(f"fixture {fixture} declares no peripheral subgroup")
    return peripheral


def _coned(args, R=None):
    pres, peripheral = _load(args)
    _require_peripheral(peripheral, args.fixture)
    ball = build_ball(pres, args.R if R is None else R)
    return ball, build_coned_ball(ball, peripheral)


# ---------------------------------------------------------------------------
# commands; each returns a report (dict) or a list of flat rows


def cmd_parse(args):
    pres, peripheral = load_presentation(args.path)
    report = {"presentation": pres.summary(), "file": str(resolve_fixture(args.path))}
    length = args.confluence_length or pres.confluence_length
    report["confluence"] = bounded_confluence_check(pres, length).to_json()
    report["peripheral"] = None if peripheral is None else {
        "generators": [pres.gens.symbols[g] for g in peripheral.generator_list()],
        "normal_form_closed": peripheral.normal_form_closed,
    }
    report["valid"] = True
    return report


def cmd_ball(args):
    pres, peripheral = _load(args)
    if args.peripheral:
        ball = peripheral_ball(pres, _require_peripheral(peripheral, args.fixture), args.R)
    else:
        ball = build_ball(pres, args.R)
    if args.edges:
        return ball.export_edge_list()
    return ball.summary()


def cmd_cone(args):
    _, cb = _coned(args)
    return cb.summary()


def _sweep(args, fn):
    rows = []
    for R in args.R:
        rows.append(dict(R=R, **fn(R)))
    return rows


def cmd_delta(args):
    def one(R):
        pres, peripheral = _load(args)
        ball = build_ball(pres, R)
        graph = ball
        if not args.cayley:
            graph = build_coned_ball(ball, _require_peripheral(peripheral, args.fixture))
        sample = "all" if args.sample is None else (args.sample, args.seed)
        est = delta_four_point(graph, sample=sample, boundary_margin=args.margin)
        return {"delta": str(est.delta), "exact": est.exact, "vertices": est.vertices,
                "blocks": est.blocks}
    return _sweep(args, one)


def cmd_bcp(args):
    def one(R):
        _, cb = _coned(args, R)
        est = estimate_rbcp(cb, Fraction(args.T), args.d_max, args.sources)
        return {"T": str(est.T), "d_max": est.d_max, "r_hat": est.r_hat,
                "paths": est.paths_examined, "pairs": est.pairs_examined}
    return _sweep(args, one)


def cmd_params(args):
    def one(R):
        _, cb = _coned(args, R)
        delta = delta_four_point(cb)
        pt = derive_params(delta, cb, args.d_max)
        return {"delta": str(delta.delta), "r_hat": pt.bcp.r_hat, "T": str(pt.bcp.T),
                "r": pt.r, "d": pt.d, "s": pt.s, "regime_ok": pt.satisfies_regime()}
    return _sweep(args, one)


def _complex(args):
    pres, peripheral = _load(args)
    peripheral = _require_peripheral(peripheral, args.fixture)
    if args.plain:
        return build_plain_rips(peripheral_ball(pres, peripheral, args.R), args.s, args.k_max)
    if args.r is None or args.d is None:
        raise UsageError("relative complexes need --r and --d (or pass --plain)")
    ball = build_ball(pres, args.R)
    cb = build_coned_ball(ball, peripheral)
    return build_relative_rips(ball, cb, RipsParams(args.r, args.d, args.s, args.k_max, args.R))


def cmd_rips(args):
    X = _complex(args)
    if args.export:
        return X.export()
    return {"params": X.params, "counts": {str(j): c for j, c in X.counts().items()},
            "euler_characteristic": X.euler_characteristic()}


def cmd_homology(args):
    if args.k_max is None:
        args.k_max = args.k + 1
    if args.k_max < args.k + 1:
        raise UsageError(f"--k-max must be at least k+1 = {args.k + 1}")
    X = _complex(args)
    H = reduced_homology(ChainComplex(X, args.k + 1), args.k)
    return H.to_json()


def cmd_brown(args):
    if args.plain:
        alpha = FiltrationIndex.plain(args.alpha_s)
    else:
        if args.alpha_r is None or args.alpha_d is None:
            raise UsageError("relative filtration needs --alpha-r and --alpha-d")
        alpha = FiltrationIndex(args.alpha_r, args.alpha_d, args.alpha_s)
    k_max = args.k + 1 if args.k_max is None else args.k_max
    ctx = FiltrationContext.load(args.fixture, args.R, args.plain, k_max)
    cert = check_essential_triviality(args.fixture, args.k, alpha, args.budget,
                                      plain=args.plain, k_max=k_max, context=ctx)
    report = cert.to_json()
    if args.out:
        cert_path, side = cert.write(args.out)
        report["evidence_file"] = side.name
    return report


def cmd_pipeline(args):
    return run_theorem_pipeline(args.fixture, args.n, args.budget, args.R, args.plain_alpha)


# ---------------------------------------------------------------------------
# output


def _render(result, args) -> str:
    if isinstance(result, str):
        return result
    fmt = args.format
    if fmt == "csv":
        rows = result if isinstance(result, list) else [result]
        flat = [{k: v for k, v in r.items() if not isinstance(v, (dict, list))} for r in rows]
        buf = io.StringIO()
        fields = list(flat[0]) if flat else []
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
        return buf.getvalue()
    if fmt == "text":
        rows = result if isinstance(result, list) else [result]
        lines = []
        for r in rows:
            lines.extend(f"{k}: {json.dumps(v, sort_keys=True, default=_json_default)}"
                         for k, v in sorted(r.items()))
            lines.append("")
        return "\n".join(lines)
    if isinstance(result, list):
        result = {"rows": result}
    return dumps(dict(result, config=_config(args)))


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="relrips", description="Relative Rips complexes and Brown's criterion "
                                            "on finite balls of relatively hyperbolic groups.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", type=Path, help="write the report into this directory")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for sampled estimators (exact modes ignore it)")
    fixture = _Parser(add_help=False)
    fixture.add_argument("--fixture", required=True,
                         help="presentation file or bundled fixture name")
    radius = _Parser(add_help=False)
    radius.add_argument("--R", type=int, default=4, help="ball radius (default 4)")
    sweep = _Parser(add_help=False)
    sweep.add_argument("--R", type=int, nargs="+", default=[4],
                       help="one or more ball radii (one output row each)")
    cx = _Parser(add_help=False)
    cx.add_argument("--plain", action="store_true", help="plain Rips complex of K")
    cx.add_argument("--r", type=int)
    cx.add_argument("--d", type=int)
    cx.add_argument("--s", type=int, required=True)

    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("parse", parents=[common], help="validate a presentation")
    sp.add_argument("path")
    sp.add_argument("--confluence-length", type=int)
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("ball", parents=[common, fixture, radius], help="Cayley ball summary")
    sp.add_argument("--peripheral", action="store_true", help="ball of K on its own generators")
    sp.add_argument("--edges", action="store_true", help="emit the edge list instead")
    sp.set_defaults(func=cmd_ball)

    sp = sub.add_parser("cone", parents=[common, fixture, radius], help="coned-off ball summary")
    sp.set_defaults(func=cmd_cone)

    sp = sub.add_parser("delta", parents=[common, fixture, sweep], help="four-point delta")
    sp.add_argument("--cayley", action="store_true", help="use the Cayley graph, not the coned one")
    sp.add_argument("--sample", type=int, help="number of random quadruples (default: all)")
    sp.add_argument("--margin", type=int, default=0, help="skip vertices this close to the boundary")
    sp.set_defaults(func=cmd_delta)

    sp = sub.add_parser("bcp", parents=[common, fixture, sweep], help="empirical BCP constant")
    sp.add_argument("--T", default="2", help="quasi-geodesic constant (default 2)")
    sp.add_argument("--d-max", type=int, default=3)
    sp.add_argument("--sources", choices=("identity", "interior"), default="identity")
    sp.set_defaults(func=cmd_bcp)

    sp = sub.add_parser("params", parents=[common, fixture, sweep], help="derive (r, d, s)")
    sp.add_argument("--d-max", type=int, default=3)
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("rips", parents=[common, fixture, radius, cx], help="build a Rips complex")
    sp.add_argument("--k-max", type=int, default=3)
    sp.add_argument("--export", action="store_true", help="emit the simplex list")
    sp.set_defaults(func=cmd_rips)

    sp = sub.add_parser("homology", parents=[common, fixture, radius, cx], help="reduced homology")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--k-max", type=int)
    sp.set_defaults(func=cmd_homology)

    sp = sub.add_parser("brown", parents=[common, fixture, radius], help="essential triviality")
    sp.add_argument("--plain", action="store_true")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--alpha-r", type=int)
    sp.add_argument("--alpha-d", type=int)
    sp.add_argument("--alpha-s", type=int, required=True)
    sp.add_argument("--budget", type=int, default=4, help="increments per coordinate")
    sp.add_argument("--k-max", type=int)
    sp.set_defaults(func=cmd_brown)

    sp = sub.add_parser("pipeline", parents=[common, fixture, radius], help="both filtrations")
    sp.add_argument("--n", type=int, default=2, help="check degrees k < n")
    sp.add_argument("--budget", type=int, default=4)
    sp.add_argument("--plain-alpha", type=int, default=1, help="starting s for K's filtration")
    sp.set_defaults(func=cmd_pipeline)
    return p


def _fail(code: int, payload: dict) -> int:
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        result = args.func(args)
        text = _render(result, args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, {"error": "UsageError", "message": str(exc)})
    except RelRipsError as exc:
        return _fail(exc.exit_code, exc.to_json())
    except FileNotFoundError as exc:
        return _fail(EXIT_DOMAIN, {"error": "FileNotFoundError", "message": str(exc)})
    except ValueError as exc:
        return _fail(EXIT_USAGE, {"error": "ValueError", "message": str(exc)})
    if getattr(args, "out", None) is not None:
        ext = {"json": "json", "csv": "csv", "text": "txt"}[args.format]
        _write_atomic(Path(args.out) / f"{args.command}.{ext}", text)
    sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
