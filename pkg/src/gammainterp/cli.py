"""Command-line front end: ``gamma-interp <command> ...``.

Exit codes: 0 success, 2 the degree-one condition fails, 3 unsolvable,
4 inconclusive or not constructed, 5 superficial map, 1 other failure,
64 usage or parse error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import corpus
from .config import DEFAULT_GRIDS, DEFAULT_TOL
from .cpick import _pencil_batch, _lmin_batch, check_c_nu
from .diamond import DiamondProblem, diamond_feasible, diamond_solve, make_diamond
from .errors import DegenerateDataError, GammaInterpError, SuperficialMapError
from .gamma import GammaMap, circle_royal_nodes, is_royal_map, royal_nodes
from .pipeline import classify, solve_3pt, verify_interpolant
from .problem import FORMAT_VERSION, InterpProblem, cpair, dumps

MAP_VERSION = "gamma-map/1"
EXIT_OK, EXIT_FAIL, EXIT_C1_FAILS, EXIT_UNSOLVABLE, EXIT_INCONCLUSIVE, EXIT_SUPERFICIAL = 0, 1, 2, 3, 4, 5
EXIT_USAGE = 64

SOLVE_EXIT = {"solved": EXIT_OK, "unsolvable_c1": EXIT_UNSOLVABLE, "inconclusive": EXIT_INCONCLUSIVE,
              "diamond_infeasible": EXIT_INCONCLUSIVE, "verification_failed": EXIT_INCONCLUSIVE}


class UsageError(Exception):
    pass


def _parse_pairs(text: str | None) -> dict:
    """``"key=value,key=value"`` into a dict of floats."""
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {item!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError as exc:
            raise UsageError(f"not a number: {value!r}") from exc
    return out


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_problem(args) -> InterpProblem:
    try:
        prob = InterpProblem.from_dict(_load_json(args.problem))
        prob.tol = prob.tol.updated(_parse_pairs(args.tol))
        prob.grids = prob.grids.updated({k: int(v) for k, v in _parse_pairs(args.grid).items()})
    except (DegenerateDataError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    return prob


def map_to_dict(h: GammaMap) -> dict:
    return {"version": MAP_VERSION, **h.to_dict()}


def map_from_dict(d: dict) -> GammaMap:
    if d.get("version") != MAP_VERSION:
        raise UsageError(f"unsupported map version {d.get('version')!r}")
    try:
        return GammaMap.from_dict(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed map file: {exc}") from exc


def _emit(payload, out: str | None) -> None:
    text = dumps(payload) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_plot_files(h: GammaMap, prefix: str, samples: int = DEFAULT_GRIDS.boundary_samples) -> list[Path]:
    """Boundary ``|s|`` and the royal node table as CSV files next to ``prefix``."""
    theta = 2 * np.pi * np.arange(samples) / samples
    abs_s = np.abs(h.s(np.exp(1j * theta)))
    files = [Path(f"{prefix}_boundary.csv"), Path(f"{prefix}_royal.csv")]
    _write_csv(files[0], ["theta", "abs_s"], ((repr(float(t)), repr(float(a))) for t, a in zip(theta, abs_s)))
    rows = []
    if not is_royal_map(h):
        for node in royal_nodes(h):
            if node.value is None:
                continue
            t = 0.5 * np.conj(h.s(node.value)) if node.on_circle else complex(np.nan, np.nan)
            rows.append((repr(node.value.real), repr(node.value.imag), node.multiplicity,
                         int(node.on_circle), repr(float(np.real(t))), repr(float(np.imag(t)))))
    _write_csv(files[1], ["node_re", "node_im", "multiplicity", "on_circle", "target_re", "target_im"], rows)
    return files


def cmd_check(args) -> int:
    prob = _load_problem(args)
    report = check_c_nu(prob, args.nu)
    if args.plot:
        # smallest pencil eigenvalue along constant upsilon
        n = prob.grids.constant_samples
        theta = 2 * np.pi * np.arange(n) / n
        u = np.exp(1j * theta)[:, None] * np.ones(len(prob))[None, :]
        lmin = _lmin_batch(_pencil_batch(prob.nodes, prob.s, prob.p, u))
        _write_csv(Path(f"{args.plot}_pencil.csv"), ["theta", "min_eigenvalue"],
                   ((repr(float(t)), repr(float(v))) for t, v in zip(theta, lmin)))
    _emit(report.to_dict(), args.out)
    return EXIT_C1_FAILS if report.status == "fails" else EXIT_OK


def cmd_solve(args) -> int:
    prob = _load_problem(args)
    report = solve_3pt(prob, seed=args.seed)
    if args.plot and report.h is not None:
        write_plot_files(report.h, args.plot, prob.grids.boundary_samples)
    _emit(report.to_dict(), args.out)
    return SOLVE_EXIT[report.status]


def cmd_classify(args) -> int:
    h = map_from_dict(_load_json(args.map))
    try:
        cls = classify(h)
    except SuperficialMapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SUPERFICIAL
    payload = cls.to_dict()
    payload["table"] = [{"node": cpair(w), "target": cpair(t)} for w, t in zip(cls.nodes, cls.targets)]
    _emit(payload, args.out)
    return EXIT_OK


def cmd_diamond(args) -> int:
    data = _load_json(args.problem)
    if data.get("version") == FORMAT_VERSION:
        prob = _load_problem(args)
        if prob.fixed_m is None:
            report = check_c_nu(prob, 1)
            m, q = report.auxiliary_extremal, report.q
        else:
            m, q = prob.fixed_m, prob.fixed_q
        if m is None or q is None:
            print("error: no auxiliary extremal available", file=sys.stderr)
            return EXIT_INCONCLUSIVE
        tol = prob.tol
        dp = make_diamond(prob.nodes, prob.p, m, q, tol)
    else:
        try:
            dp = DiamondProblem.from_dict(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed diamond file: {exc}") from exc
        tol = DEFAULT_TOL.updated(_parse_pairs(args.tol))
    feas = diamond_feasible(dp, tol)
    payload = {"problem": dp.to_dict(), "feasibility": feas.to_dict(), "p": None}
    code = EXIT_OK
    if feas.feasible:
        try:
            payload["p"] = diamond_solve(dp, feas, seed=args.seed, tol=tol).to_dict()
        except GammaInterpError as exc:
            payload["error"] = str(exc)
            code = EXIT_INCONCLUSIVE
    else:
        code = EXIT_INCONCLUSIVE
    _emit(payload, args.out)
    return code


def cmd_examples(args) -> int:
    if args.name not in corpus.CATALOGUE:
        print(f"error: unknown example {args.name!r}; choose from {', '.join(corpus.CATALOGUE)}",
              file=sys.stderr)
        return EXIT_USAGE
    params = {}
    for item in args.param or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"expected key=value, got {item!r}")
        params[key] = [complex(v) for v in value.split(";")] if key == "zeros" else complex(value)
        if key != "zeros" and params[key].imag == 0:
            params[key] = params[key].real
    try:
        h = corpus.build(args.name, **params)
    except TypeError as exc:
        raise UsageError(f"bad parameter for {args.name}: {exc}") from exc
    nodes = [complex(z) for z in args.nodes.split(",")] if args.nodes else list(corpus.DEFAULT_NODES)
    prob = InterpProblem.from_map(h, nodes)
    payload = prob.to_dict()
    payload["reference_map"] = map_to_dict(h)
    _emit(payload, args.out)
    if args.map_out:
        Path(args.map_out).write_text(dumps(map_to_dict(h)) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_verify(args) -> int:
    prob = _load_problem(args)
    h = map_from_dict(_load_json(args.map))
    report = verify_interpolant(h, prob)
    payload = report.to_dict()
    payload["circle_royal_nodes"] = [] if is_royal_map(h) else [cpair(w) for w in circle_royal_nodes(h)]
    _emit(payload, args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gamma-interp",
                                     description="Three-point interpolation into the symmetrised bidisc.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, problem=True):
        if problem:
            p.add_argument("problem", help="problem file (JSON)")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--seed", type=int, default=0, help="seed for multistart searches")
        p.add_argument("--grid", help="grid overrides, e.g. radial=32,angular=128")
        p.add_argument("--tol", help="tolerance overrides, e.g. extremal=1e-7")

    p = sub.add_parser("check", help="test the degree-one Pick condition")
    common(p)
    p.add_argument("--nu", type=int, default=1, choices=(0, 1))
    p.add_argument("--plot", help="prefix for the pencil eigenvalue CSV")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="solve end to end")
    common(p)
    p.add_argument("--plot", help="prefix for boundary |s| and royal node CSV files")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("classify", help="classify a map file")
    p.add_argument("map", help="map file (JSON)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("diamond", help="feasibility and solution of the mixed problem")
    common(p)
    p.set_defaults(func=cmd_diamond)

    p = sub.add_parser("examples", help="write a fixture from the example catalogue")
    p.add_argument("name")
    p.add_argument("--param", action="append", help="generator parameter, e.g. r=0.5 or zeros=0.3;0.1j")
    p.add_argument("--nodes", help="comma-separated complex nodes, e.g. 0.3,-0.2,0.4j")
    p.add_argument("--out")
    p.add_argument("--map-out", help="also write the closed-form map here")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("verify", help="verify a map against a problem")
    common(p)
    p.add_argument("map", help="map file (JSON)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GammaInterpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
