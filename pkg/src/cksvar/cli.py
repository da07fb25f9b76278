"""Command-line front end.

Commands: ``classify``, ``verify``, ``simulate``, ``limit``, ``mc``, ``jsr``,
``examples``.  Exit codes: 0 success, 1 I/O or parse error, 2 validation or
assumption failure (with a machine-readable reason on stderr).  Numeric
output uses 17 significant digits so CSV files round-trip losslessly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .errors import CksvarError, ModelFileError
from .model import CksvarModel, load_model, threshold_shift, to_canonical
from .vecm import Case, classify_case, vecm_decompose
from .companion import verify_assumptions
from .jsr import CompanionSet, jsr_bounds
from .simulate import InnovationSpec, simulate
from .limits import brownian_grid, limit_case1, limit_case2
from .examples import EXAMPLES, build_example, list_examples
from .montecarlo import McSpec, run_mc

FMT = "%.17g"


def _fmt(v: float) -> str:
    return FMT % v


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _emit_report(data: dict, fmt: str, out: str | None) -> None:
    if fmt == "json":
        _write_text(out, json.dumps(data, indent=2, default=_json_default) + "\n")
    else:
        lines = ["key,value"]

        def flatten(prefix, node):
            if isinstance(node, dict):
                for key, val in node.items():
                    flatten(f"{prefix}.{key}" if prefix else str(key), val)
            elif isinstance(node, (list, tuple)):
                lines.append(f"{prefix},\"{json.dumps(node, default=_json_default)}\"")
            else:
                val = _fmt(node) if isinstance(node, float) else str(node)
                lines.append(f"{prefix},{val}")

        flatten("", data)
        _write_text(out, "\n".join(lines) + "\n")


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serialisable: {type(o)}")


EXAMPLE_FLAGS = (
    ("chi", float),
    ("psi", float),
    ("gamma", float),
    ("theta", float),
    ("mu", float),
    ("delta", float),
    ("sigma_eta", float),
    ("sigma_eps", float),
    ("sigma", float),
    ("c", float),
    ("phi_plus", str),
    ("phi_minus", str),
)


def _add_model_args(sub: argparse.ArgumentParser) -> None:
    grp = sub.add_mutually_exclusive_group(required=True)
    grp.add_argument("--model", help="JSON model file")
    grp.add_argument("--example", choices=sorted(EXAMPLES), help="built-in fixture")
    for name, typ in EXAMPLE_FLAGS:
        sub.add_argument(f"--{name.replace('_', '-')}", type=typ, default=None, dest=f"ex_{name}")


def _resolve_model(args) -> CksvarModel:
    if args.model:
        return load_model(args.model)
    params = {}
    for name, _ in EXAMPLE_FLAGS:
        val = getattr(args, f"ex_{name}")
        if val is None:
            continue
        if name in ("phi_plus", "phi_minus"):
            val = tuple(float(tok) for tok in val.split(","))
        params[name] = val
    return build_example(args.example, **params)


def _add_common(sub: argparse.ArgumentParser, fmt_default: str = "json") -> None:
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", default=None, help="output file (stdout when omitted)")
    sub.add_argument("--format", choices=("csv", "json"), default=fmt_default)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _cmd_classify(args) -> int:
    model = threshold_shift(_resolve_model(args))
    cls = classify_case(vecm_decompose(model), tol=args.tol)
    _emit_report(cls.to_dict(), args.format, args.out)
    return 0


def _cmd_verify(args) -> int:
    model = _resolve_model(args)
    report = verify_assumptions(model, tol=args.tol, depth=args.depth, budget=args.budget)
    _emit_report(report.to_dict(), args.format, args.out)
    if not report.all_ok:
        failing = [m for m in report.messages] or ["assumption checks failed"]
        print(json.dumps({"error": "assumption_failure", "messages": failing}), file=sys.stderr)
        return 2
    return 0


def _csv_rows(header: list[str], rows) -> str:
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(out) + "\n"


def _cmd_simulate(args) -> int:
    model = _resolve_model(args)
    init = None
    if args.init:
        with open(args.init) as fh:
            data = json.load(fh)
        init = (np.asarray(data["y"], float), np.asarray(data["x"], float))
    elif args.diffuse:
        z0 = np.array([float(tok) for tok in args.diffuse.split(",")]) * np.sqrt(args.n)
        init = (np.full(model.k, z0[0]), np.tile(z0[1:], (model.k, 1)))
    spec = InnovationSpec(Sigma=model.Sigma, seed=args.seed)
    path = simulate(model, args.n, spec, init=init)
    p = path.p
    header = ["t", "y", "y_plus", "y_minus"] + [f"x_{j + 1}" for j in range(p - 1)] + [
        f"u_{j + 1}" for j in range(p)
    ]
    if args.format == "json":
        _emit_report(
            {
                "t": list(range(1, path.n + 1)),
                "y": path.y.tolist(),
                "y_plus": path.y_plus.tolist(),
                "y_minus": path.y_minus.tolist(),
                "x": path.x.tolist(),
                "u": path.innovations.tolist(),
            },
            "json",
            args.out,
        )
    else:
        rows = (
            [t + 1, float(path.y[t]), float(path.y_plus[t]), float(path.y_minus[t])]
            + [float(v) for v in path.x[t]]
            + [float(v) for v in path.innovations[t]]
            for t in range(path.n)
        )
        _write_text(args.out, _csv_rows(header, rows))
    if args.plot:
        from .plotting import plot_path

        png = _png_name(args.out, "path")
        plot_path(np.arange(1, path.n + 1), path.y, path.x, png)
    return 0


def _png_name(out: str | None, stem: str) -> str:
    if out is None:
        return f"{stem}.png"
    root, _ = os.path.splitext(out)
    return f"{root}.png"


def _cmd_limit(args) -> int:
    model = _resolve_model(args)
    canon = to_canonical(model)
    vecm = vecm_decompose(canon)
    cls = classify_case(vecm)
    pattern = cls.pattern()
    case = args.case
    if case == "auto":
        if pattern is Case.REGULATED:
            case = "i"
        elif pattern is Case.KINKED:
            case = "ii"
        else:
            raise CksvarError(f"no limit construction for configuration {cls.case.value}")
    z0 = None
    if args.z0:
        z0 = np.array([float(tok) for tok in args.z0.split(",")])
    U = brownian_grid(canon.model.Sigma, args.m, seed=args.seed)
    lp = limit_case1(vecm, U, Z0=z0) if case == "i" else limit_case2(vecm, U, Z0=z0)
    if args.format == "json":
        _emit_report({"lambda": lp.grid.tolist(), "Y": lp.Y.tolist(), "X": lp.X.tolist(), "kind": lp.kind}, "json", args.out)
    else:
        header = ["lambda", "Y"] + [f"X_{j + 1}" for j in range(lp.X.shape[0])]
        rows = ([float(lp.grid[i]), float(lp.Y[i])] + [float(v) for v in lp.X[:, i]] for i in range(lp.grid.size))
        _write_text(args.out, _csv_rows(header, rows))
    if args.plot:
        from .plotting import plot_limit

        plot_limit(lp.grid, lp.Y, lp.X, lp.kind, _png_name(args.out, "limit"))
    return 0


def _cmd_mc(args) -> int:
    model = _resolve_model(args)
    expected = None
    if args.expect:
        expected = {"i": Case.REGULATED, "ii": Case.KINKED, "linear": Case.LINEAR}[args.expect]
    spec = McSpec(
        model=model,
        n_list=tuple(int(tok) for tok in args.n_list.split(",")),
        reps=args.reps,
        functionals=tuple(args.functionals.split(",")),
        seed=args.seed,
        expected_case=expected,
        limit_reps=args.limit_reps,
        grid_m=args.m,
    )
    report = run_mc(spec)
    _emit_report(report.to_dict(), "json", args.out)
    if args.out:
        stem, _ = os.path.splitext(args.out)
        for name in spec.functionals:
            rows = []
            for n, per_fn in report.samples_model.items():
                rows.extend(["model", n, float(v)] for v in per_fn[name])
            rows.extend(["limit", "", float(v)] for v in report.samples_limit[name])
            _write_text(f"{stem}.{name}.csv", _csv_rows(["source", "n", "value"], rows))
        if not args.no_plot:
            from .plotting import plot_mc_report

            plot_mc_report(report, f"{stem}.png")
    if not report.all_passed:
        print(json.dumps({"error": "mc_thresholds_exceeded"}), file=sys.stderr)
        return 2
    return 0


def _cmd_jsr(args) -> int:
    with open(args.set) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFileError(f"{args.set}: {exc}") from exc
    mats = data.get("matrices")
    if not isinstance(mats, list) or not mats:
        raise ModelFileError("matrix-set file needs a nonempty 'matrices' list")
    cset = CompanionSet(tuple(np.asarray(m, dtype=float) for m in mats), tuple(data.get("labels", ())))
    est = jsr_bounds(cset, depth=args.depth, budget=args.budget)
    _emit_report(est.to_dict(), args.format, args.out)
    return 0


def _cmd_examples(args) -> int:
    _emit_report({"examples": list_examples()}, args.format, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cksvar", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", help="rank-pattern classification of the long-run matrices")
    _add_model_args(s)
    _add_common(s)
    s.add_argument("--tol", type=float, default=1e-8)
    s.set_defaults(func=_cmd_classify)

    s = sub.add_parser("verify", help="check unit-root, rank, span, and stability conditions")
    _add_model_args(s)
    _add_common(s)
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--depth", type=int, default=12)
    s.add_argument("--budget", type=int, default=10**6)
    s.set_defaults(func=_cmd_verify)

    s = sub.add_parser("simulate", help="simulate a path and emit it as CSV")
    _add_model_args(s)
    _add_common(s, fmt_default="csv")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--init", default=None, help="JSON file with presample {'y': [...], 'x': [[...]]}")
    s.add_argument("--diffuse", default=None, help="comma list: start point scaled by sqrt(n)")
    s.add_argument("--plot", action="store_true", help="render a PNG next to the output")
    s.set_defaults(func=_cmd_simulate)

    s = sub.add_parser("limit", help="sample a discretised limit process")
    _add_model_args(s)
    _add_common(s, fmt_default="csv")
    s.add_argument("--case", choices=("auto", "i", "ii"), default="auto")
    s.add_argument("--m", type=int, default=2048)
    s.add_argument("--z0", default=None, help="comma list, start point in the common-trend space")
    s.add_argument("--plot", action="store_true")
    s.set_defaults(func=_cmd_limit)

    s = sub.add_parser("mc", help="Monte Carlo comparison of paths against the limit")
    _add_model_args(s)
    _add_common(s)
    s.add_argument("--n-list", default="5000,20000")
    s.add_argument("--reps", type=int, default=500)
    s.add_argument("--functionals", default="terminal_value,path_sup,occupation_fraction_negative")
    s.add_argument("--limit-reps", type=int, default=None)
    s.add_argument("--m", type=int, default=2048)
    s.add_argument("--expect", choices=("i", "ii", "linear"), default=None)
    s.add_argument("--no-plot", action="store_true")
    s.set_defaults(func=_cmd_mc)

    s = sub.add_parser("jsr", help="joint-spectral-radius bounds for a matrix set")
    s.add_argument("--set", required=True, help="JSON file with 'matrices' (list of square matrices)")
    s.add_argument("--depth", type=int, default=12)
    s.add_argument("--budget", type=int, default=10**6)
    _add_common(s)
    s.set_defaults(func=_cmd_jsr)

    s = sub.add_parser("examples", help="list built-in fixtures with defaults and ranges")
    _add_common(s)
    s.set_defaults(func=_cmd_examples)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ModelFileError as exc:
        print(json.dumps({"error": "parse_error", "message": str(exc)}), file=sys.stderr)
        return 1
    except CksvarError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    except OSError as exc:
        print(json.dumps({"error": "io_error", "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
