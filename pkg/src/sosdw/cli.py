"""Command line front end: route comparison, verification suites, benchmarks.

Exit codes: 0 on success, 1 on numerical failure (including any failing
verification row), 2 on usage or validation failure.  Validation failures
print a machine-readable error object to standard error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass

from .closed_form import partition_permutation_sum
from .contour import ContourSpec, partition_quadrature_info
from .core import (
    ModelParams,
    NumericalError,
    ROUTES,
    ValidationError,
)
from .face_model import count_configurations, enumerate_partition
from .sampling import draw_model
from .verify import SUITE_NAMES, run_suite
from .yb_algebra import partition_algebraic

DEFAULT_TOLERANCES = {"route_agreement": 1e-9}

_CONFIG_KEYS = {"L", "gamma", "theta", "mu", "lambda", "routes", "seed",
                "tolerances", "contour"}
_CONTOUR_KEYS = {"center", "radius", "nodes"}


class ConfigError(ValidationError):
    """The job configuration file is malformed."""


def _need_number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number")
    return float(value)


def _parse_complex(obj, where) -> complex:
    if not isinstance(obj, dict) or set(obj) != {"re", "im"}:
        raise ConfigError(
            f"{where} must be an object with exactly the keys 're' and 'im'"
        )
    return complex(_need_number(obj["re"], f"{where}.re"),
                   _need_number(obj["im"], f"{where}.im"))


@dataclass(frozen=True)
class JobConfig:
    """A fully parsed and validated compute job."""

    params: ModelParams
    lambdas: tuple
    routes: tuple
    seed: int
    tolerances: dict
    contour: ContourSpec | None


def load_job_config(path: str) -> JobConfig:
    """Parse the strict JSON job format; unknown keys are errors."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in ("L", "gamma", "theta", "mu", "lambda", "routes"):
        if key not in raw:
            raise ConfigError(f"missing config key: {key}")

    if isinstance(raw["L"], bool) or not isinstance(raw["L"], int):
        raise ConfigError("L must be an integer")
    L = raw["L"]
    gamma = _parse_complex(raw["gamma"], "gamma")
    theta = _parse_complex(raw["theta"], "theta")
    for key in ("mu", "lambda"):
        if not isinstance(raw[key], list) or len(raw[key]) != L:
            raise ConfigError(f"{key} must be an array of length L")
    mu = tuple(_parse_complex(z, f"mu[{i}]")
               for i, z in enumerate(raw["mu"]))
    lambdas = tuple(_parse_complex(z, f"lambda[{i}]")
                    for i, z in enumerate(raw["lambda"]))

    routes = raw["routes"]
    if (not isinstance(routes, list) or not routes
            or any(r not in ROUTES for r in routes)
            or len(set(routes)) != len(routes)):
        raise ConfigError(
            f"routes must be a nonempty list of distinct entries from "
            f"{list(ROUTES)}"
        )

    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("seed must be a nonnegative integer")

    tolerances = dict(DEFAULT_TOLERANCES)
    if "tolerances" in raw:
        if not isinstance(raw["tolerances"], dict):
            raise ConfigError("tolerances must be an object")
        unknown = set(raw["tolerances"]) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance keys: {sorted(unknown)}")
        for key, value in raw["tolerances"].items():
            tolerances[key] = _need_number(value, f"tolerances.{key}")

    spec = None
    if "contour" in raw:
        cobj = raw["contour"]
        if not isinstance(cobj, dict) or set(cobj) - _CONTOUR_KEYS:
            raise ConfigError(
                f"contour must be an object with keys among "
                f"{sorted(_CONTOUR_KEYS)}"
            )
        if "center" not in cobj or "radius" not in cobj:
            raise ConfigError("contour needs 'center' and 'radius'")
        nodes = cobj.get("nodes", 64)
        if isinstance(nodes, bool) or not isinstance(nodes, int):
            raise ConfigError("contour.nodes must be an integer")
        spec = ContourSpec(
            center=_parse_complex(cobj["center"], "contour.center"),
            radius=_need_number(cobj["radius"], "contour.radius"),
            nodes=nodes,
        )

    params = ModelParams(gamma=gamma, theta=theta, mu=mu, L=L)
    return JobConfig(params=params, lambdas=lambdas, routes=tuple(routes),
                     seed=seed, tolerances=tolerances, contour=spec)


def _g17(x: float) -> str:
    return f"{x:.17g}"


def _route_value(route: str, cfg: JobConfig):
    """Evaluate one route; returns (value, workload size)."""
    params, lams = cfg.params, cfg.lambdas
    if route == "face":
        return enumerate_partition(params, lams), count_configurations(
            params.L)
    if route == "algebra":
        return partition_algebraic(params, lams), 1 << params.L
    if route == "permutation":
        return partition_permutation_sum(params, lams), math.factorial(
            params.L)
    if route == "residue":
        from .contour import partition_residue
        return partition_residue(params, lams), math.factorial(params.L)
    if route == "quadrature":
        value, nodes = partition_quadrature_info(params, lams, cfg.contour)
        return value, nodes
    raise ValueError(f"unknown route {route!r}")


def compute_report(cfg: JobConfig, with_timings: bool = True) -> dict:
    """Run every requested route and assemble the comparison report."""
    routes = {}
    for route in cfg.routes:
        t0 = time.perf_counter()
        value, _ = _route_value(route, cfg)
        wall_ms = (time.perf_counter() - t0) * 1e3
        entry = {"value": {"re": value.real, "im": value.imag}}
        if with_timings:
            entry["wall_ms"] = wall_ms
        routes[route] = entry

    tol = cfg.tolerances["route_agreement"]
    deviations = []
    names = list(cfg.routes)
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            za = complex(routes[names[a]]["value"]["re"],
                         routes[names[a]]["value"]["im"])
            zb = complex(routes[names[b]]["value"]["re"],
                         routes[names[b]]["value"]["im"])
            scale = max(abs(za), abs(zb))
            rel = abs(za - zb) / scale if scale > 0 else 0.0
            deviations.append({
                "routes": [names[a], names[b]],
                "relative": rel,
                "within_tolerance": rel < tol,
            })

    ratio = None
    if "face" in routes and "algebra" in routes:
        zf = complex(routes["face"]["value"]["re"],
                     routes["face"]["value"]["im"])
        za = complex(routes["algebra"]["value"]["re"],
                     routes["algebra"]["value"]["im"])
        if abs(zf) > 0:
            r = za / zf
            ratio = {"re": r.real, "im": r.imag}

    return {
        "L": cfg.params.L,
        "routes": routes,
        "deviations": deviations,
        "reconciliation_ratio": ratio,
        "tolerances": cfg.tolerances,
    }


def render_report(report: dict, with_timings: bool) -> str:
    """Human table form of a compute report, floats at 17 digits."""
    lines = [f"partition function report  L={report['L']}"]
    header = f"{'route':<13}{'value':<58}"
    if with_timings:
        header += "wall_ms"
    lines.append(header)
    for route, entry in report["routes"].items():
        v = entry["value"]
        val = f"{_g17(v['re'])} {v['im']:+.17g}j"
        line = f"{route:<13}{val:<58}"
        if with_timings:
            line += f"{entry['wall_ms']:.3f}"
        lines.append(line)
    tol = report["tolerances"]["route_agreement"]
    if report["deviations"]:
        lines.append(f"pairwise relative deviations "
                     f"(tolerance {_g17(tol)}):")
        for dev in report["deviations"]:
            tag = "PASS" if dev["within_tolerance"] else "FAIL"
            pair = "|".join(dev["routes"])
            lines.append(f"  {pair:<24}{_g17(dev['relative']):<26}{tag}")
    ratio = report["reconciliation_ratio"]
    if ratio is not None:
        lines.append(
            f"reconciliation ratio (algebra/face): "
            f"{_g17(ratio['re'])} {ratio['im']:+.17g}j"
        )
    return "\n".join(lines)


def cmd_compute(args) -> int:
    cfg = load_job_config(args.config)
    report = compute_report(cfg, with_timings=not args.no_timings)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(render_report(report, with_timings=not args.no_timings))
    if any(not dev["within_tolerance"] for dev in report["deviations"]):
        return 1
    return 0


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed, args.draws)
    print(report.render())
    return 0 if report.passed else 1


_BENCH_CAPS = {"face": None, "algebra": 10, "permutation": 8, "residue": 8,
               "quadrature": 3}


def cmd_bench(args) -> int:
    routes = [r.strip() for r in args.routes.split(",") if r.strip()]
    if not routes or any(r not in ROUTES for r in routes):
        raise ConfigError(
            f"routes must be a comma list drawn from {list(ROUTES)}"
        )
    if args.lmin < 1 or args.lmax < args.lmin:
        raise ConfigError("need 1 <= lmin <= lmax")

    from .face_model import face_cap
    import random as _random

    rows = ["route,L,nodes_or_terms,wall_ms,value_re,value_im"]
    for route in routes:
        cap = _BENCH_CAPS[route]
        if cap is None:
            cap = face_cap()
        for L in range(args.lmin, args.lmax + 1):
            if L > cap:
                continue
            rng = _random.Random(1000 + L)
            params, lams = draw_model(rng, L, routes=("face", "permutation"))
            cfg = JobConfig(params=params, lambdas=lams, routes=(route,),
                            seed=0, tolerances=dict(DEFAULT_TOLERANCES),
                            contour=None)
            t0 = time.perf_counter()
            value, workload = _route_value(route, cfg)
            wall_ms = (time.perf_counter() - t0) * 1e3
            rows.append(
                f"{route},{L},{workload},{wall_ms:.3f},"
                f"{_g17(value.real)},{_g17(value.imag)}"
            )
    text = "\n".join(rows)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {len(rows) - 1} rows to {args.csv}")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sosdw",
        description="Domain-wall partition function: compute, verify, bench.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser(
        "compute", help="evaluate the partition function by chosen routes"
    )
    p_compute.add_argument("--config", required=True,
                           help="path to a JSON job file")
    p_compute.add_argument("--json", action="store_true",
                           help="machine-readable report")
    p_compute.add_argument("--no-timings", action="store_true",
                           help="omit wall times for bit-reproducible output")
    p_compute.set_defaults(func=cmd_compute)

    p_verify = sub.add_parser(
        "verify", help="run one randomized identity suite"
    )
    p_verify.add_argument("--suite", required=True, choices=SUITE_NAMES)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--draws", type=int, default=20)
    p_verify.set_defaults(func=cmd_verify)

    p_bench = sub.add_parser(
        "bench", help="time each route across a range of system sizes"
    )
    p_bench.add_argument("--lmin", type=int, required=True)
    p_bench.add_argument("--lmax", type=int, required=True)
    p_bench.add_argument("--routes", default=",".join(ROUTES),
                         help="comma list of routes")
    p_bench.add_argument("--csv", default=None,
                         help="write the table to this path")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(json.dumps({"error": {"type": type(exc).__name__,
                                    "message": str(exc)}}),
              file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(json.dumps({"error": {"type": type(exc).__name__,
                                    "message": str(exc)}}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
