"""``hamsplit`` command-line interface.

Every subcommand reads one JSON document (or a scenario name), runs one
library operation and writes JSON (plus CSV/SVG where meaningful).  Exit
codes: 0 success, 2 an honest negative answer (no split, not separable,
not certified, scenario mismatch), 1 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from . import scenarios
from .auxiliary import curve_svg, sample_central_sphere, turning_number
from .geometry import Ball, ConvexSet, Hyperplane, Polytope
from .measures import Measure, Mixture, SmoothCap, UniformBall, UniformPolytope, measure_from_dict
from .partitions import PartitionError, two_line_partition
from .separability import check_separable
from .solver import NotFound, Problem, ProblemError, SplitConfig, certify_split, find_split, verify_split
from .svg import Canvas

EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE = 0, 1, 2


class InputError(Exception):
    """Problem with the user's input; reported on stderr with exit code 1."""


# ---------------------------------------------------------------------------
# configuration


@dataclass
class RunConfig:
    mass_tol: float | None = None
    grid: int | None = None
    starts: int = 4
    seed: int = 0
    methods: tuple[str, ...] = ("grid", "newton", "miranda")
    out: Path | None = None
    emit: tuple[str, ...] = ("json",)
    certify: bool = False

    def __post_init__(self):
        if self.mass_tol is not None and not self.mass_tol > 0:
            raise InputError("--tol must be positive")
        if self.grid is not None and self.grid < 1:
            raise InputError("--grid must be at least 1")
        if self.starts < 1:
            raise InputError("--starts must be at least 1")
        bad = set(self.emit) - {"json", "csv", "svg"}
        if bad:
            raise InputError(f"unknown --emit kinds: {', '.join(sorted(bad))}")

    def split_config(self) -> SplitConfig:
        try:
            return SplitConfig(
                mass_tol=self.mass_tol,
                grid=self.grid,
                starts=self.starts,
                seed=self.seed,
                methods=self.methods,
                certify=self.certify,
            )
        except ValueError as exc:
            raise InputError(str(exc)) from exc


def _config_from(args) -> RunConfig:
    base: dict = {}
    if args.config:
        base = load_json(args.config)
        if not isinstance(base, dict):
            raise InputError("config file must hold a JSON object")
    flags = {
        "mass_tol": args.tol,
        "grid": args.grid,
        "starts": args.starts,
        "seed": args.seed,
        "out": args.out,
        "emit": args.emit,
        "certify": args.certify or None,
    }
    merged = {k: base.get(k, base.get("tol") if k == "mass_tol" else None) for k in flags}
    merged.update({k: v for k, v in flags.items() if v is not None})
    merged["methods"] = base.get("methods")
    kwargs = {k: v for k, v in merged.items() if v is not None}
    if "emit" in kwargs and isinstance(kwargs["emit"], str):
        kwargs["emit"] = tuple(s.strip() for s in kwargs["emit"].split(",") if s.strip())
    if "out" in kwargs:
        kwargs["out"] = Path(kwargs["out"])
    if "methods" in kwargs:
        kwargs["methods"] = tuple(kwargs["methods"])
    try:
        return RunConfig(**kwargs)
    except TypeError as exc:
        raise InputError(f"bad config: {exc}") from exc


# ---------------------------------------------------------------------------
# I/O helpers


def load_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def schema(name: str) -> dict:
    return json.loads(resources.files("hamsplit").joinpath("schema", f"{name}.json").read_text())


def validate(doc, name: str):
    try:
        jsonschema.validate(doc, schema(name))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"{name} schema violation at {where}: {exc.message}") from exc


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(cfg: RunConfig, stem: str, doc: dict, schema_name: str | None, csv: str | None = None, svg: str | None = None):
    if schema_name:
        jsonschema.validate(doc, schema(schema_name))
    if cfg.out is None:
        if "json" in cfg.emit:
            sys.stdout.write(dumps(doc))
        return
    cfg.out.mkdir(parents=True, exist_ok=True)
    if "json" in cfg.emit:
        (cfg.out / f"{stem}.json").write_text(dumps(doc))
    if "csv" in cfg.emit and csv is not None:
        (cfg.out / f"{stem}.csv").write_text(csv)
    if "svg" in cfg.emit and svg is not None:
        (cfg.out / f"{stem}.svg").write_text(svg)


def _parse_floats(text: str | None, name: str):
    if text is None:
        return None
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"{name} must be a comma-separated list of numbers") from exc


def load_problem(path, alphas=None) -> Problem:
    doc = load_json(path)
    validate(doc, "problem")
    try:
        if alphas is not None:
            doc = dict(doc, alphas=list(alphas))
        return Problem.from_dict(doc)
    except (ProblemError, ValueError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# pictures


def _outline(canvas: Canvas, m, stroke="#2c3e50"):
    if isinstance(m, (UniformBall, SmoothCap)):
        canvas.circle(m.center, m.radius, stroke=stroke)
    elif isinstance(m, UniformPolytope):
        canvas.polygon(m.vertices, stroke=stroke)
    elif isinstance(m, Mixture):
        for c in m.components:
            _outline(canvas, c, stroke)
    elif isinstance(m, Ball):
        canvas.circle(m.center, m.radius, stroke=stroke)
    elif isinstance(m, Polytope):
        canvas.polygon(m.vertices, stroke=stroke)


def _extent(objs) -> np.ndarray:
    pts = []
    for m in objs:
        c, r = m.bounding_ball() if isinstance(m, Measure) else (np.asarray(m.centroid), 0.0)
        if isinstance(m, Polytope):
            pts.append(np.asarray(m.vertices))
        else:
            pts.append(c + r * np.array([[1, 1], [-1, -1]]))
    return np.vstack(pts)


def picture(measures, lines=(), extra=()) -> str:
    canvas = Canvas.fit(_extent(measures), 480)
    palette = ["#2c3e50", "#8e44ad", "#16a085", "#d35400"]
    for i, m in enumerate(measures):
        _outline(canvas, m, palette[i % len(palette)])
    for H in lines:
        canvas.line(H.normal, H.offset, stroke="#c0392b", width=1.5)
    for p in extra:
        canvas.circle(p, 0.03 * float(np.max(canvas.hi - canvas.lo)), stroke="#c0392b", fill="#c0392b")
    return canvas.render()


# ---------------------------------------------------------------------------
# subcommands


def cmd_split(args, cfg: RunConfig) -> int:
    problem = load_problem(args.problem, _parse_floats(args.alpha, "--alpha"))
    res = find_split(problem, cfg.split_config())
    if isinstance(res, NotFound):
        _emit(cfg, "split", res.to_dict(), "split_result")
        return EXIT_NEGATIVE
    tol = cfg.split_config().tolerance(problem)
    ver = verify_split(problem, res.hyperplane, tol, seed=cfg.seed)
    doc = dict(res.to_dict(), verify=ver.to_dict())
    svg = picture(problem.measures, [res.hyperplane]) if problem.dim == 2 else None
    _emit(cfg, "split", doc, "split_result", svg=svg)
    return EXIT_OK if ver.passed else EXIT_NEGATIVE


def _set_from(d):
    if isinstance(d, dict) and "points" in d:
        return np.asarray(d["points"], dtype=float)
    if isinstance(d, dict):
        return ConvexSet.from_dict(d)
    return np.asarray(d, dtype=float)


def cmd_separability(args, cfg: RunConfig) -> int:
    doc = load_json(args.sets)
    try:
        sets = [_set_from(s) for s in doc["sets"]]
        report = check_separable(sets, doc.get("margin"))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{args.sets}: {exc}") from exc
    _emit(cfg, "separability", report.to_dict(), "separability_report")
    return EXIT_OK if report.separable else EXIT_NEGATIVE


def _measure_doc(path):
    doc = load_json(path)
    if not isinstance(doc, dict) or "measure" not in doc:
        raise InputError(f"{path}: expected an object with a 'measure' entry")
    try:
        return doc, measure_from_dict(doc["measure"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def cmd_central_sphere(args, cfg: RunConfig) -> int:
    doc, m = _measure_doc(args.input)
    alpha = _parse_floats(args.alpha, "--alpha")
    alpha = alpha[0] if alpha else float(doc.get("alpha", 0.5))
    try:
        S = ConvexSet.from_dict(doc["container"]) if "container" in doc else Polytope(m.support_points())
        curve = sample_central_sphere(m, S, alpha, cfg.grid or 1440)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    k = turning_number(curve)
    out = {
        "schema": 1,
        "alpha": alpha,
        "grid": len(curve.angles),
        "turning_number": abs(k),
        "signed_turning_number": k,
        "fallback_count": int(curve.flags.sum()),
    }
    outline = np.asarray(S.vertices) if isinstance(S, Polytope) else None
    _emit(cfg, "central_sphere", out, "central_sphere", csv=curve.to_csv(), svg=curve_svg(curve, outline))
    return EXIT_OK


def cmd_two_lines(args, cfg: RunConfig) -> int:
    doc, m = _measure_doc(args.input)
    alphas = _parse_floats(args.alpha, "--alpha") or tuple(doc.get("alphas", ()))
    v = tuple(doc.get("v", (0.0, 1.0)))
    try:
        part = two_line_partition(m, alphas, v, cfg.split_config() if cfg.grid or cfg.mass_tol else None)
    except PartitionError as exc:
        sys.stderr.write(f"hamsplit: {exc}\n")
        return EXIT_NEGATIVE
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(cfg, "two_lines", part.to_dict(), "two_lines", svg=picture([m], [part.H1, part.H2]))
    return EXIT_OK


def cmd_certify(args, cfg: RunConfig) -> int:
    problem = load_problem(args.problem, _parse_floats(args.alpha, "--alpha"))
    doc = load_json(args.problem)
    if "hyperplane" in doc:
        H = Hyperplane.from_dict(doc["hyperplane"])
    else:
        res = find_split(problem, cfg.split_config())
        if isinstance(res, NotFound):
            _emit(cfg, "certificate", {"schema": 1, "box": None, "grid_density": 17, "verdict": "none", "conditions": []}, "certificate")
            return EXIT_NEGATIVE
        H = res.hyperplane
    cert = certify_split(problem, H, cfg.split_config())
    if cert is None:
        _emit(cfg, "certificate", {"schema": 1, "box": None, "grid_density": 17, "verdict": "none", "conditions": []}, "certificate")
        return EXIT_NEGATIVE
    _emit(cfg, "certificate", dict(cert.to_dict(), hyperplane=H.to_dict()), "certificate")
    return EXIT_OK if cert.certified else EXIT_NEGATIVE


def _scenario_svgs(sc, report) -> dict[str, str]:
    if sc.kind == "central_sphere":
        return {"central_sphere": curve_svg(report.artifacts["curve"], np.asarray(sc.container.vertices))}
    if sc.kind == "discontinuity":
        probe = report.artifacts["probes"][0]
        s, c = np.sin(probe.epsilon), np.cos(probe.epsilon)
        lines = [Hyperplane([-s, c], float(np.array([-s, c]) @ probe.left)), Hyperplane([s, c], float(np.array([s, c]) @ probe.right))]
        return {"three_caps": picture([sc.measure], lines, [probe.left, probe.right])}
    if sc.problem is not None and sc.problem.dim == 2:
        res = report.artifacts.get("result")
        lines = [res.hyperplane] if res is not None and not isinstance(res, NotFound) else []
        return {sc.name: picture(sc.problem.measures, lines)}
    return {}


def cmd_scenario(args, cfg: RunConfig) -> int:
    params = {}
    if args.alpha is not None:
        if args.name != "pentagon":
            raise InputError("--alpha applies to the pentagon scenario only")
        params["alpha"] = _parse_floats(args.alpha, "--alpha")[0]
    if args.name == "random_separated":
        params.update(seed=cfg.seed if args.seed is not None else 7, n=args.n)
    try:
        sc = scenarios.build(args.name, **params)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from exc
    report = scenarios.run(sc, cfg.split_config())
    doc = report.to_dict()
    jsonschema.validate(doc, schema("scenario_report"))
    if cfg.out is None:
        sys.stdout.write(dumps(doc))
    else:
        cfg.out.mkdir(parents=True, exist_ok=True)
        if "json" in cfg.emit:
            (cfg.out / f"{sc.name}.json").write_text(dumps(doc))
        if "svg" in cfg.emit:
            for stem, svg in _scenario_svgs(sc, report).items():
                (cfg.out / f"{stem}.svg").write_text(svg)
        if "csv" in cfg.emit and "curve" in report.artifacts:
            (cfg.out / f"{sc.name}.csv").write_text(report.artifacts["curve"].to_csv())
    return EXIT_OK if report.passed else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", help="comma-separated target masses (overrides the input file)")
    common.add_argument("--tol", type=float, help="mass tolerance (default 1e-6 analytic, 1e-3 quadrature)")
    common.add_argument("--grid", type=int, help="scan / curve resolution")
    common.add_argument("--starts", type=int, help="number of multistart points (default 4)")
    common.add_argument("--seed", type=int, help="seed for lattice rotation and Monte-Carlo checks (default 0)")
    common.add_argument("--out", help="output directory (default: JSON on stdout)")
    common.add_argument("--emit", help="artifact kinds to write: json,csv,svg (default json)")
    common.add_argument("--certify", action="store_true", help="run a Miranda certification pass")
    common.add_argument("--config", help="JSON file with defaults; command-line flags win")

    p = argparse.ArgumentParser(prog="hamsplit", description="Hyperplane splittings of measures with prescribed masses.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("split", parents=[common], help="find a hyperplane with prescribed masses (exit 2 if none found)")
    s.add_argument("problem", help="problem JSON (schema 1)")
    s.set_defaults(func=cmd_split)
    s = sub.add_parser("separability", parents=[common], help="check strict separability of n sets in R^n")
    s.add_argument("sets", help='JSON {"sets": [...], "margin": optional}')
    s.set_defaults(func=cmd_separability)
    s = sub.add_parser("central-sphere", parents=[common], help="sample a planar central sphere and its turning number")
    s.add_argument("input", help='JSON {"measure": ..., "container": optional, "alpha": ...}')
    s.set_defaults(func=cmd_central_sphere)
    s = sub.add_parser("two-lines", parents=[common], help="cut a planar measure into four parts by two lines")
    s.add_argument("input", help='JSON {"measure": ..., "alphas": [a1, a2, a3, a4], "v": optional}')
    s.set_defaults(func=cmd_two_lines)
    s = sub.add_parser("certify", parents=[common], help="Miranda certificate for a split (found first unless given)")
    s.add_argument("problem", help='problem JSON, optionally with a "hyperplane" entry')
    s.set_defaults(func=cmd_certify)
    s = sub.add_parser("scenario", parents=[common], help="run a built-in example and compare with its expected outcome")
    s.add_argument("name", choices=scenarios.NAMES)
    s.add_argument("--n", type=int, default=3, help="dimension for random_separated (default 3)")
    s.set_defaults(func=cmd_scenario)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = _config_from(args)
        return args.func(args, cfg)
    except InputError as exc:
        sys.stderr.write(f"hamsplit: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
