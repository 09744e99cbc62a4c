"""Command line interface: generate, analyze, rescale, verify, bench.

An instance file holds one vector-sequence pair as JSON with [real,
imag] coordinate entries printed to 17 significant digits, so files
round-trip bit-exactly; corpora are directories of such files.  Reports
are JSON with a flat comma-separated twin next to them.  Exit codes:
0 all checks passed, 1 a check failed, 2 bad usage or input.
"""

import argparse
import csv
import hashlib
import json
import os
import sys
import time

import numpy as np

from .frames import FramePair, bessel_and_frame_bounds, pair_operator
from .instances import GENERATOR_KINDS, generate
from .linalg import jacobi_eigh, top_singular_triplet
from .multiplier import norm_lower_alternating, norm_oracle_grid
from .rescale import build_dilation, extract_scaling, optimize
from .verify import RatioConfig, VerificationError, ratio_experiment, run_suite

FORMAT_VERSION = 1
INSTANCE_SUFFIX = ".frame.json"
SEED_ENV_VAR = "FRAMESCALE_SEED"
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class InstanceFormatError(ValueError):
    """An instance file is malformed; the message carries the location."""


def _fmt(v: float) -> str:
    # 17 significant digits round-trip any double exactly
    return "%.17g" % v


def serialize_instance(pair: FramePair, metadata=None) -> str:
    """Render one pair as instance-file text; deterministic per value."""

    def vec(v):
        return ("["
                + ",".join(f"[{_fmt(z.real)},{_fmt(z.imag)}]" for z in v)
                + "]")

    pairs = ",".join('{"x":%s,"y":%s}' % (vec(pair.xs[k]), vec(pair.ys[k]))
                     for k in range(pair.n))
    meta = json.dumps(metadata or {}, sort_keys=True, separators=(",", ":"))
    return ('{"dim":%d,"format_version":%d,"metadata":%s,"pairs":[%s]}\n'
            % (pair.dim, FORMAT_VERSION, meta, pairs))


def save_instance(path: str, pair: FramePair, metadata=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_instance(pair, metadata))


def _vector_from_json(entry, dim: int, where: str) -> np.ndarray:
    if not isinstance(entry, list) or len(entry) != dim:
        raise InstanceFormatError(
            f"{where}: expected {dim} coordinates, got "
            f"{len(entry) if isinstance(entry, list) else type(entry).__name__}")
    out = np.zeros(dim, dtype=np.complex128)
    for j, part in enumerate(entry):
        if (not isinstance(part, list) or len(part) != 2
                or not all(isinstance(p, (int, float))
                           and not isinstance(p, bool) for p in part)):
            raise InstanceFormatError(
                f"{where}[{j}]: expected a [real, imag] number pair")
        out[j] = complex(part[0], part[1])
    return out


def load_instance(path: str):
    """Read one instance file; returns (pair, metadata)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: "
            f"{exc.msg}") from exc
    if not isinstance(doc, dict):
        raise InstanceFormatError(f"{path}: top level must be an object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise InstanceFormatError(
            f"{path}: format_version must be {FORMAT_VERSION}, got {version!r}")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise InstanceFormatError(f"{path}: 'dim' must be a positive integer")
    raw = doc.get("pairs")
    if not isinstance(raw, list) or not raw:
        raise InstanceFormatError(f"{path}: 'pairs' must be a nonempty list")
    xs = np.zeros((len(raw), dim), dtype=np.complex128)
    ys = np.zeros((len(raw), dim), dtype=np.complex128)
    for k, item in enumerate(raw):
        where = f"{path}: pairs[{k}]"
        if not isinstance(item, dict):
            raise InstanceFormatError(f"{where}: expected an object")
        xs[k] = _vector_from_json(item.get("x"), dim, f"{where}.x")
        ys[k] = _vector_from_json(item.get("y"), dim, f"{where}.y")
    try:
        pair = FramePair(xs, ys)
    except ValueError as exc:
        raise InstanceFormatError(f"{path}: {exc}") from exc
    return pair, doc.get("metadata", {})


def load_corpus(path: str):
    """A file or a directory of files; returns [(label, pair, metadata)].

    Directory entries are processed in sorted name order so corpus
    reports merge deterministically.
    """
    if os.path.isdir(path):
        names = sorted(name for name in os.listdir(path)
                       if name.endswith(".json"))
        if not names:
            raise InstanceFormatError(f"{path}: no instance files found")
        out = []
        for name in names:
            pair, metadata = load_instance(os.path.join(path, name))
            label = name[:-len(INSTANCE_SUFFIX)] if name.endswith(
                INSTANCE_SUFFIX) else os.path.splitext(name)[0]
            out.append((label, pair, metadata))
        return out
    pair, metadata = load_instance(path)
    label = os.path.basename(path)
    if label.endswith(INSTANCE_SUFFIX):
        label = label[:-len(INSTANCE_SUFFIX)]
    else:
        label = os.path.splitext(label)[0]
    return [(label, pair, metadata)]


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def _flat_cell(value):
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return ";".join(_flat_cell(v) for v in value)
    return value


def write_report(path: str, report: dict) -> None:
    """Write a JSON report; a flat CSV twin lands next to it."""
    report = _plain(report)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, sort_keys=True, separators=(",", ":"))
        fh.write("\n")
    records = report.get("records")
    if not records:
        return
    flat_rows = []
    fields = []
    for rec in records:
        row = {}
        for key, value in rec.items():
            if isinstance(value, dict):
                for sub, subvalue in value.items():
                    row[f"{key}.{sub}"] = _flat_cell(subvalue)
            else:
                row[key] = _flat_cell(value)
        for key in row:
            if key not in fields:
                fields.append(key)
        flat_rows.append(row)
    stem, _ = os.path.splitext(path)
    with open(stem + ".csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(flat_rows)


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise InstanceFormatError(
                f"environment variable {SEED_ENV_VAR} must be an integer, "
                f"got {env!r}") from exc
    return 0


def _cmd_gen(args) -> int:
    seed = _resolve_seed(args)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
    scaling = (args.scaling_range[0], args.scaling_range[1])
    metadata = {"seed": seed, "generator": args.kind,
                "description": f"{args.kind} n={args.n} d={args.d}"}
    pairs = [generate(args.kind, rng, args.n, args.d, scaling_range=scaling)
             for _ in range(args.instances)]
    if args.instances == 1 and not os.path.isdir(args.out):
        save_instance(args.out, pairs[0], metadata)
        print(f"wrote 1 instance to {args.out}")
        return EXIT_OK
    os.makedirs(args.out, exist_ok=True)
    for i, pair in enumerate(pairs):
        name = f"instance-{i:03d}{INSTANCE_SUFFIX}"
        save_instance(os.path.join(args.out, name), pair, metadata)
    print(f"wrote {len(pairs)} instance(s) to {args.out}/")
    return EXIT_OK


def _oracle_allowed(pair: FramePair, phase_steps: int) -> bool:
    return phase_steps > 0 and pair.n <= 6


def _cmd_analyze(args) -> int:
    corpus = load_corpus(args.infile)
    seed = _resolve_seed(args)
    records = []
    for label, pair, _ in corpus:
        bx = bessel_and_frame_bounds(pair.xs)
        by = bessel_and_frame_bounds(pair.ys)
        dev, _, _ = top_singular_triplet(pair_operator(pair) - np.eye(pair.dim))
        alt = norm_lower_alternating(pair, seed=seed)
        rec = {"instance": label, "n": pair.n, "d": pair.dim,
               "bessel_x": [bx.lower, bx.upper],
               "bessel_y": [by.lower, by.upper],
               "phi_norm_lower": alt.value,
               "check_results": {"identity_deviation": float(dev),
                                 "x_is_frame": bx.is_frame,
                                 "y_is_frame": by.is_frame}}
        if _oracle_allowed(pair, args.phase_steps):
            rec["phi_norm_oracle"] = norm_oracle_grid(
                pair, phase_steps=args.phase_steps).value
        records.append(rec)
        oracle = rec.get("phi_norm_oracle")
        extra = f" phi_oracle={oracle:.6g}" if oracle is not None else ""
        print(f"{label}: n={pair.n} d={pair.dim} "
              f"identity_dev={rec['check_results']['identity_deviation']:.3g} "
              f"phi_lower={alt.value:.6g}{extra}")
    report = {"format_version": FORMAT_VERSION, "command": "analyze",
              "records": records,
              "summary": {"instances": len(records), "failures": 0}}
    if args.out:
        write_report(args.out, report)
    return EXIT_OK


def _cmd_rescale(args) -> int:
    corpus = load_corpus(args.infile)
    seed = _resolve_seed(args)
    records = []
    failures = 0
    ratios = []
    for label, pair, _ in corpus:
        bracket = optimize(pair, max_iters=args.max_iters, tol=args.tol,
                           seed=seed)
        scaling = extract_scaling(pair, bracket.log_weights)
        checks = {
            "bound_respected": bool(
                scaling.bounds_x.upper <= bracket.m_upper + 1e-8
                and scaling.bounds_y.upper <= bracket.m_upper + 1e-8),
            "bracket_ordered": bool(
                bracket.m_lower <= bracket.m_upper + 1e-8),
        }
        if args.dilation:
            dil = build_dilation(pair, bracket.log_weights, bracket.m_upper)
            eye = np.eye(pair.dim)
            checks["dilation_defect"] = max(
                float(np.max(np.abs(dil.v1.conj().T @ dil.v1 - eye))),
                float(np.max(np.abs(dil.v2.conj().T @ dil.v2 - eye))))
            checks["dilation_isometric"] = checks["dilation_defect"] <= 1e-8
        rec = {"instance": label, "n": pair.n, "d": pair.dim,
               "phi_norm_lower": norm_lower_alternating(pair, seed=seed).value,
               "M_upper": bracket.m_upper, "M_lower": bracket.m_lower,
               "weights": [float(t) for t in bracket.log_weights],
               "bessel_x": [scaling.bounds_x.lower, scaling.bounds_x.upper],
               "bessel_y": [scaling.bounds_y.lower, scaling.bounds_y.upper],
               "check_results": checks}
        if _oracle_allowed(pair, args.phase_steps):
            oracle = norm_oracle_grid(pair, phase_steps=args.phase_steps).value
            rec["phi_norm_oracle"] = oracle
            rec["ratio"] = bracket.m_upper / oracle
            ratios.append(rec["ratio"])
        ok = all(v for v in checks.values() if isinstance(v, bool))
        if not ok:
            failures += 1
        records.append(rec)
        ratio_note = f" ratio={rec['ratio']:.4f}" if "ratio" in rec else ""
        print(f"{label}: M_lower={bracket.m_lower:.6g} "
              f"M_upper={bracket.m_upper:.6g} "
              f"bessel=({scaling.bounds_x.upper:.6g}, "
              f"{scaling.bounds_y.upper:.6g}){ratio_note} ok={ok}")
    summary = {"instances": len(records), "failures": failures}
    if ratios:
        summary["max_ratio"] = max(ratios)
    report = {"format_version": FORMAT_VERSION, "command": "rescale",
              "records": records, "summary": summary}
    if args.out:
        write_report(args.out, report)
    return EXIT_OK if failures == 0 else EXIT_CHECK_FAILED


def _cmd_verify(args) -> int:
    seed = _resolve_seed(args)
    try:
        if args.suite == "ratio":
            cfg = RatioConfig(instances=args.instances, seed=seed,
                              phase_steps=args.phase_steps)
            report = ratio_experiment(cfg)
        else:
            report = run_suite(args.suite, seed=seed)
    except VerificationError as exc:
        failure = {"format_version": FORMAT_VERSION, "command": "verify",
                   "suite": args.suite, "seed": seed, "error": str(exc),
                   "record": _plain(exc.record),
                   "summary": {"failures": 1}}
        out = args.out or f"verify-{args.suite}-failure.json"
        write_report(out, failure)
        print(f"FAIL {args.suite}: {exc}", file=sys.stderr)
        print(f"failure details written to {out}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    report = {"format_version": FORMAT_VERSION, "command": "verify",
              **report}
    subs = report.get("reports")
    if subs is None:
        report.setdefault("summary", {})["failures"] = 0
        printable = [report]
    else:
        printable = subs
        report["summary"] = {"failures": 0}
    if args.out:
        write_report(args.out, report)
    for sub in printable:
        print(f"PASS {sub['suite']}: {json.dumps(_plain(sub['summary']))}")
    return EXIT_OK


def _parse_grid(text: str):
    cells = []
    if not text:
        return cells
    for part in text.split(","):
        bits = part.lower().split("x")
        if len(bits) != 2:
            raise InstanceFormatError(
                f"bad grid cell {part!r}; expected NxD like 4x2")
        try:
            n, d = int(bits[0]), int(bits[1])
        except ValueError as exc:
            raise InstanceFormatError(
                f"bad grid cell {part!r}; expected integers") from exc
        if n < 1 or d < 1:
            raise InstanceFormatError(f"bad grid cell {part!r}; need n, d >= 1")
        cells.append((n, d))
    return cells


def _cmd_bench(args) -> int:
    seed = _resolve_seed(args)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 99]))
    records = []
    for n, d in _parse_grid(args.grid):
        pair = generate("gaussian", rng, n, d)
        checksum = hashlib.sha256(
            serialize_instance(pair).encode("utf-8")).hexdigest()[:16]
        t0 = time.perf_counter()
        jacobi_eigh(pair.xs.conj().T @ pair.xs)
        t_eig = time.perf_counter() - t0
        t0 = time.perf_counter()
        grid_ok = _oracle_allowed(pair, args.phase_steps)
        if grid_ok:
            norm_oracle_grid(pair, phase_steps=args.phase_steps)
        t_grid = time.perf_counter() - t0
        t0 = time.perf_counter()
        optimize(pair)
        t_opt = time.perf_counter() - t0
        rec = {"n": n, "d": d, "workload_checksum": checksum,
               "eig_seconds": t_eig,
               "grid_seconds": t_grid if grid_ok else None,
               "optimize_seconds": t_opt}
        records.append(rec)
        grid_note = f" grid={t_grid:.4f}s" if grid_ok else ""
        print(f"n={n} d={d} [{checksum}]: eig={t_eig:.4f}s{grid_note} "
              f"optimize={t_opt:.4f}s")
    if not records:
        print("empty grid, nothing to time")
    if args.out:
        write_report(args.out, {"format_version": FORMAT_VERSION,
                                "command": "bench", "records": records,
                                "summary": {"cases": len(records),
                                            "failures": 0}})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="framescale",
        description="Frame multiplier bounds, rescaling, and inequality checks")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate random instance files")
    gen.add_argument("--kind", choices=GENERATOR_KINDS, default="gaussian")
    gen.add_argument("--n", type=int, default=4)
    gen.add_argument("--d", type=int, default=2)
    gen.add_argument("--instances", type=int, default=1,
                     help="more than one writes a corpus directory")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--scaling-range", type=float, nargs=2,
                     default=[1e-3, 1e3], metavar=("LO", "HI"))
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_gen)

    analyze = sub.add_parser("analyze",
                             help="frame bounds and multiplier estimates")
    analyze.add_argument("--in", dest="infile", required=True,
                         help="instance file or corpus directory")
    analyze.add_argument("--seed", type=int, default=None)
    analyze.add_argument("--phase-steps", type=int, default=0,
                         help="grid oracle resolution; 0 disables the grid")
    analyze.add_argument("--out", default=None)
    analyze.set_defaults(func=_cmd_analyze)

    rescale = sub.add_parser("rescale",
                             help="optimize weights and certify the bound")
    rescale.add_argument("--in", dest="infile", required=True,
                         help="instance file or corpus directory")
    rescale.add_argument("--seed", type=int, default=None)
    rescale.add_argument("--max-iters", type=int, default=2000)
    rescale.add_argument("--tol", type=float, default=1e-7)
    rescale.add_argument("--phase-steps", type=int, default=0,
                         help="also run the grid oracle and report the ratio")
    rescale.add_argument("--dilation", action="store_true",
                         help="also build the dilation and check isometries")
    rescale.add_argument("--out", default=None)
    rescale.set_defaults(func=_cmd_rescale)

    ver = sub.add_parser("verify", help="run an inequality suite")
    ver.add_argument("--suite", default="all",
                     choices=["khintchine", "trace", "chain", "ratio",
                              "dilation", "all"])
    ver.add_argument("--seed", type=int, default=None)
    ver.add_argument("--instances", type=int, default=200,
                     help="instance count for the ratio suite")
    ver.add_argument("--phase-steps", type=int, default=48)
    ver.add_argument("--out", default=None)
    ver.set_defaults(func=_cmd_verify)

    bench = sub.add_parser("bench", help="time the core operations")
    bench.add_argument("--seed", type=int, default=None)
    bench.add_argument("--grid", default="4x2,5x3",
                       help="comma-separated NxD cells; empty for none")
    bench.add_argument("--phase-steps", type=int, default=24)
    bench.add_argument("--out", default=None)
    bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
