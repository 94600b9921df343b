"""Command-line interface.

Exit status: 0 on success, 1 on input errors, 2 when a verdict is undetermined.
"""
import argparse
import csv
import sys
import threading
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .analyzer import AnalysisConfig, analyze, is_undetermined
from .io import InputError, dumps, fmt, fmt_vec, load_json
from .jnorm import jnat, properness_certificate
from .filtration import ToricFiltration
from .model import ModelError, ToricFanoModel
from .plfunction import PLFunction
from .polytope import DegeneratePolytopeError

EXIT_OK, EXIT_INPUT, EXIT_UNDETERMINED = 0, 1, 2

CSV_COLUMNS = ["name", "dim", "vol", "bc", "delta_toric", "verdicts"]


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def load_model(path):
    obj = load_json(path)
    try:
        model = ToricFanoModel.from_json(obj)
    except (ModelError, DegeneratePolytopeError, ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    if model.polytope.name is None:
        model.polytope.name = Path(path).stem
    return model


def _write(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _config(args):
    return AnalysisConfig(m_cap=args.m_cap, tol=args.tol, samples=args.samples, seed=args.seed)


def cmd_analyze(args):
    model = load_model(args.polytope)
    report = analyze(model, _config(args))
    _write(dumps(report), args.out)
    return EXIT_UNDETERMINED if is_undetermined(report) else EXIT_OK


def _analyze_file(path, config):
    return analyze(load_model(path), config)


def _verdict_cell(verdicts):
    return ";".join(f"{k}={str(v).lower()}" for k, v in sorted(verdicts.items()))


def cmd_batch(args):
    folder = Path(args.directory)
    if not folder.is_dir():
        raise InputError(f"{folder} is not a directory")
    files = sorted(folder.glob("*.json"))
    if not files:
        raise InputError(f"no .json files in {folder}")
    config = _config(args)
    results = {}
    lock = threading.Lock()

    def store(path, report):
        with lock:
            results[path.name] = report

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = {path: pool.submit(_analyze_file, path, config) for path in files}
            for path, fut in futures.items():
                store(path, fut.result())
    else:
        for path in files:
            store(path, _analyze_file(path, config))

    reports = [results[p.name] for p in files]
    _write(dumps({"reports": reports}), args.out)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for r in reports:
                writer.writerow(
                    [
                        r["name"],
                        r["dim"],
                        r["volume"],
                        " ".join(r["barycenter"]),
                        r["delta_toric"],
                        _verdict_cell(r["verdicts"]),
                    ]
                )
    return EXIT_UNDETERMINED if any(is_undetermined(r) for r in reports) else EXIT_OK


def cmd_delta(args):
    model = load_model(args.polytope)
    out = {
        "name": model.name,
        "delta_toric": fmt(model.delta_toric),
        "witness_ray": list(model.delta_witness),
        "barycenter": fmt_vec(model.barycenter),
    }
    _write(dumps(out), None)
    return EXIT_OK


def cmd_jnorm(args):
    model = load_model(args.polytope)
    try:
        f = PLFunction.from_json(model.polytope, load_json(args.pl))
        filt = ToricFiltration(model, f)
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"{args.pl}: {exc}") from exc
    res = jnat(filt)
    cert = properness_certificate(filt)
    out = {
        "name": model.name,
        "jna": fmt(filt.jna),
        "jnat": fmt(res.minimum),
        "argmin": fmt_vec(res.argmin),
        "optimal_face_dim": res.face_dim,
        "product": res.is_product,
        "certificate": {"theta": fmt(cert.theta), "C1": fmt(cert.C1), "C2": fmt(cert.C2)},
    }
    _write(dumps(out), None)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # bad arguments are input errors, not undetermined verdicts
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="toricstab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def analysis_opts(p):
        p.add_argument("--m-cap", type=int, default=40, help="largest level m (default 40)")
        p.add_argument("--tol", type=_rational, default=Fraction(1, 20), help="tolerance for limits")
        p.add_argument("--samples", type=int, default=24, help="CM audit sample count")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("analyze", help="full invariant report for one polytope")
    p.add_argument("polytope")
    analysis_opts(p)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("batch", help="analyze every *.json in a directory")
    p.add_argument("directory")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", help="summary CSV path")
    p.add_argument("--out", help="write the combined JSON here instead of stdout")
    analysis_opts(p)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("delta", help="toric delta invariant")
    p.add_argument("polytope")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("jnorm", help="reduced J-norm of a PL function")
    p.add_argument("polytope")
    p.add_argument("--pl", required=True, help="PL pieces JSON")
    p.set_defaults(func=cmd_jnorm)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
