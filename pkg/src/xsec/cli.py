"""Command-line front end.

Subcommands ``estimate``, ``oracle``, ``scan``, ``counterexample``,
``mixed-disc`` and ``density-check`` each emit a flat table of rows as JSON
(default) or CSV. Subspaces are read from JSON files::

    {"n": 3, "given_as": "complement", "rows": [[1, 1, 1]]}

where ``given_as`` is ``"H"`` (rows span H) or ``"complement"`` (rows span
the orthogonal complement of H). The ``XSEC_THREADS`` environment variable
caps the number of worker threads; it never changes the output.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings

import numpy as np

from . import analysis, estimators, oracle
from .numkit import RankDeficientError
from .section_model import as_dilation, make_subspace, to_dilation
from .streams import MCConfig

__all__ = ["parse_args", "run", "main", "load_subspace", "encode", "decode_csv"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_GEOMETRY = 4
EXIT_OVERFLOW = 5
EXIT_VALUE = 6

DEFAULT_SEED = 42


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed number list {text!r}") from None


def _positive_list(text):
    vals = _float_list(text)
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    if not all(v > 0 and math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError("dilation entries must be positive")
    return vals


def _finite_list(text):
    vals = _float_list(text)
    if not vals or not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError("log-dilation entries must be finite")
    return vals


def _grid(text):
    """Comma list ``t1,t2,...`` or ``start:stop:num`` (inclusive linspace)."""
    if ":" in text:
        try:
            start, stop, num = text.split(":")
            return list(np.linspace(float(start), float(stop), int(num)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"grid must be start:stop:num, got {text!r}") from None
    return _finite_list(text)


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _build_parser():
    parser = argparse.ArgumentParser(prog="xsec", description="Volumes of sections of dilated cross-polytopes.")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=("json", "csv"), default="json")
    common.add_argument("--output", dest="output_path", default=None, help="write here instead of stdout")

    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--samples", type=_positive_int, default=100_000)
    mc.add_argument("--batches", type=_positive_int, default=100)
    mc.add_argument("--seed", type=_seed, default=DEFAULT_SEED)

    dil = argparse.ArgumentParser(add_help=False)
    group = dil.add_mutually_exclusive_group(required=True)
    group.add_argument("--a", type=_positive_list, help="positive scales a_1,...,a_n")
    group.add_argument("--t", type=_finite_list, help="log-scales t_1,...,t_n (a_i = e^t_i)")

    p = sub.add_parser("estimate", parents=[common, mc, dil], help="Monte Carlo section volume")
    p.add_argument("--subspace", required=True)
    p.add_argument("--mode", choices=("codim", "dim"), default="codim")
    p.add_argument("--estimator", choices=("mean", "median_of_means"), default="mean")

    p = sub.add_parser("oracle", parents=[common, mc, dil], help="reference section volume")
    p.add_argument("--subspace", required=True)

    p = sub.add_parser("scan", parents=[common, mc], help="midpoint log-concavity scan")
    p.add_argument("--subspace", required=True)
    p.add_argument("--mode", choices=("codim", "dim"), default="codim")
    p.add_argument("--box", type=_positive_float, default=2.0)
    p.add_argument("--triples", type=_positive_int, default=100)

    p = sub.add_parser("counterexample", parents=[common], help="planar strong-B counterexample")
    p.add_argument("--grid", type=_grid, default=list(np.linspace(-20.0, 20.0, 41)))

    p = sub.add_parser("mixed-disc", parents=[common], help="mixed discriminant of k matrices")
    p.add_argument("--matrices", required=True, help="JSON file: list of k x k matrices")
    p.add_argument("--weights", type=_finite_list, default=None, help="also check the det expansion at x")

    p = sub.add_parser("density-check", parents=[common], help="Gaussian-mixture density identity")
    p.add_argument("--x", type=_finite_list, default=[0.0, 1.0, 3.0])
    p.add_argument("--points", type=_positive_int, default=800)
    return parser


def parse_args(argv=None):
    """Parse and validate ``argv``; usage errors exit with status 2."""
    cfg = _build_parser().parse_args(argv)
    if hasattr(cfg, "samples"):
        if cfg.batches < 2:
            _build_parser().error("--batches must be at least 2")
        if cfg.samples % cfg.batches:
            _build_parser().error("--batches must divide --samples")
    if getattr(cfg, "points", 800) < 100:
        _build_parser().error("--points must be at least 100")
    return cfg


def load_subspace(path):
    with open(path) as fh:
        doc = json.load(fh)
    missing = {"n", "given_as", "rows"} - set(doc)
    if missing:
        raise KeyError(f"subspace file {path} lacks keys {sorted(missing)}")
    return make_subspace(doc["n"], doc["given_as"], doc["rows"])


def _dilation(cfg, n):
    if cfg.a is not None:
        return as_dilation(cfg.a, n)
    t = np.asarray(cfg.t, dtype=float)
    if t.size != n:
        raise ValueError(f"--t has {t.size} entries, expected n={n}")
    return to_dilation(t)


def _mc(cfg):
    return MCConfig(cfg.samples, cfg.batches, cfg.seed)


def _cmd_estimate(cfg):
    s = load_subspace(cfg.subspace)
    a = _dilation(cfg, s.n)
    est = estimators.estimate_volume(s, a, cfg.mode, _mc(cfg), cfg.estimator)
    return [{"n": s.n, "dim_H": s.dim_H, **est.as_dict(), "estimator": cfg.estimator}]


def _cmd_oracle(cfg):
    s = load_subspace(cfg.subspace)
    a = _dilation(cfg, s.n)
    est = oracle.oracle_volume(s, a, _mc(cfg))
    row = {"n": s.n, "dim_H": s.dim_H, **est.as_dict()}
    # exact oracles draw nothing, but rows still record the requested seed
    row["seed"] = cfg.seed
    return [row]


def _cmd_scan(cfg):
    s = load_subspace(cfg.subspace)
    report = analysis.logconcavity_scan(s, cfg.triples, cfg.box, _mc(cfg), cfg.mode)
    rows = []
    for r in report.rows():
        r["t0"] = ";".join(repr(x) for x in r["t0"])
        r["t1"] = ";".join(repr(x) for x in r["t1"])
        rows.append({**r, "mode": cfg.mode, "seed": cfg.seed, "samples": cfg.samples})
    return rows


def _cmd_counterexample(cfg):
    rows = [
        {"kind": "curve", "t": t, "f": f, "t_mid": None, "t_end": None, "margin": None, "seed": None, "samples": 0}
        for t, f in analysis.counterexample_curve(cfg.grid)
    ]
    (t0, tm, t1), margin = analysis.counterexample_violation()
    rows.append({"kind": "certificate", "t": t0, "f": None, "t_mid": tm, "t_end": t1, "margin": margin,
                 "seed": None, "samples": 0})
    return rows


def _cmd_mixed_disc(cfg):
    with open(cfg.matrices) as fh:
        doc = json.load(fh)
    ms = doc["matrices"] if isinstance(doc, dict) else doc
    ms = [np.asarray(m, dtype=float) for m in ms]
    k = ms[0].shape[0]
    row = {"k": k, "count": len(ms), "value": None, "residual": None}
    if len(ms) == k:
        row["value"] = analysis.mixed_discriminant(ms)
    if cfg.weights is not None:
        row["residual"] = analysis.det_expansion_check(ms, cfg.weights)
    if row["value"] is None and row["residual"] is None:
        raise ValueError(f"{len(ms)} matrices of order {k}: give exactly k matrices or --weights")
    return [row]


def _cmd_density_check(cfg):
    return [{"x": x, "points": cfg.points, "error": estimators.density_identity_check(x, cfg.points)} for x in cfg.x]


COMMANDS = {
    "estimate": _cmd_estimate,
    "oracle": _cmd_oracle,
    "scan": _cmd_scan,
    "counterexample": _cmd_counterexample,
    "mixed-disc": _cmd_mixed_disc,
    "density-check": _cmd_density_check,
}


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v) if not math.isfinite(v) else f"{v:.17g}"
    return str(v)


def encode(command, rows, output_format):
    """Serialize rows. CSV floats carry 17 significant digits so they round-trip."""
    rows = [{k: (float(v) if isinstance(v, np.floating) else v) for k, v in r.items()} for r in rows]
    if output_format == "json":
        return json.dumps({"command": command, "rows": rows}, indent=2) + "\n"
    header = []
    for r in rows:
        header.extend(k for k in r if k not in header)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([_csv_cell(r.get(k)) for k in header])
    return buf.getvalue()


def decode_csv(text):
    """Parse CSV output back into rows with JSON-comparable values."""

    def cell(v):
        if v == "":
            return None
        if v in ("true", "false"):
            return v == "true"
        for conv in (int, float):
            try:
                return conv(v)
            except ValueError:
                pass
        return v

    return [{k: cell(v) for k, v in r.items()} for r in csv.DictReader(io.StringIO(text))]


def run(cfg):
    """Execute a parsed command; returns the process exit status."""
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", estimators.HeavyTailWarning)
            rows = COMMANDS[cfg.command](cfg)
        for w in caught:
            print(f"xsec: warning: {w.message}", file=sys.stderr)
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"xsec: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RankDeficientError as exc:
        print(f"xsec: geometry error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except OverflowError as exc:
        print(f"xsec: overflow: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except ValueError as exc:
        print(f"xsec: error: {exc}", file=sys.stderr)
        return EXIT_VALUE

    text = encode(cfg.command, rows, cfg.output_format)
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None):
    sys.exit(run(parse_args(argv)))


if __name__ == "__main__":
    main()
