"""Batch front end: ``conescal run <spec>`` and ``conescal validate <spec>``.

Exit status: 0 when the task ran and every check passed, 1 when checks
found counterexamples, 2 on unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import itertools
import sys
import time
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__
from .cone_metric import (
    ConeMetricSpace,
    InducedMetric,
    check_ball_equality,
    check_cone_metric_axioms,
    check_metric_axioms,
)
from .cone_norm import ConeNormedSpace, check_cone_norm_axioms, check_norm_axioms, random_sample
from .cones import as_vector, validate
from .fixed_point import ConvergenceError, estimate_contraction_factor, solve_contraction
from .report import CheckReport
from .scalarization import DEFAULT_TOL
from .specfile import FORMAT_VERSION, SpecError, TaskSpec, dumps, load_spec, to_jsonable

ORACLE_RTOL = 1e-7


# -- payload helpers ------------------------------------------------------------


def _vector_fn(spec: dict, dim: int, where: str) -> Callable[[np.ndarray], np.ndarray]:
    """``abs`` (componentwise modulus) or ``scaled_norm`` (``||v||_p * w``)."""
    kind = spec.get("kind")
    if kind == "abs":
        return np.abs
    if kind == "scaled_norm":
        try:
            w = as_vector(spec["w"], dim)
        except (KeyError, ValueError) as exc:
            raise SpecError(f"{where}.w", str(exc)) from None
        p = spec.get("p", 2)
        return lambda v: np.linalg.norm(v, ord=p) * w
    raise SpecError(f"{where}.kind", f"unknown kind {kind!r}; expected 'abs' or 'scaled_norm'")


def _metric(ts: TaskSpec) -> InducedMetric:
    spec = ts.payload.get("metric", {"kind": "abs"})
    f = _vector_fn(spec, ts.cone.dim, "payload.metric")
    space = ConeMetricSpace(ts.cone, lambda x, y: f(np.asarray(x) - np.asarray(y)))
    return InducedMetric(space, ts.scal)


def _points(ts: TaskSpec, dim: int) -> list[tuple[float, ...]]:
    p = ts.payload
    if "points" in p:
        try:
            return [tuple(as_vector(x, dim)) for x in p["points"]]
        except ValueError as exc:
            raise SpecError("payload.points", str(exc)) from None
    if "grid" in p:
        g = p["grid"]
        axis = np.linspace(float(g.get("low", -1)), float(g.get("high", 1)), int(g.get("num", 11)))
        return [tuple(map(float, pt)) for pt in itertools.product(axis, repeat=dim)]
    if "random" in p:
        g = p["random"]
        if ts.seed is None:
            raise SpecError("payload.seed", "random points need an explicit seed")
        rng = np.random.default_rng(ts.seed)
        X = rng.uniform(float(g.get("low", -1)), float(g.get("high", 1)), size=(int(g["count"]), dim))
        return [tuple(map(float, x)) for x in X]
    raise SpecError("payload", "expected one of 'points', 'grid' or 'random'")


def _counterexamples(rep: CheckReport) -> list[dict]:
    return [to_jsonable({"clause": c.clause, "inputs": c.inputs, "values": c.values}) for c in rep.counterexamples]


# -- tasks ------------------------------------------------------------------------


def task_scalarize(ts: TaskSpec, tol: float | None) -> tuple[CheckReport, dict]:
    tol = tol or ts.payload.get("tol", DEFAULT_TOL)
    pts = _points(ts, ts.cone.dim)
    rep = CheckReport()
    values, oracle = [], []
    for i, y in enumerate(pts):
        v, o = ts.scal.xi(y), ts.scal.xi_oracle(y, tol)
        values.append(v)
        oracle.append(o)
        rep.record(abs(v - o) <= tol + ORACLE_RTOL * (1 + abs(v)), "closed form agrees with oracle", (i,), (v, o))
    return rep, {"values": values, "oracle": oracle}


def task_metric_check(ts: TaskSpec, tol: float | None) -> tuple[CheckReport, dict]:
    m = _metric(ts)
    pts = _points(ts, ts.cone.dim)
    rep = check_cone_metric_axioms(m.space, pts, rng_seed=ts.seed)
    rep.merge(check_metric_axioms(m, pts, rng_seed=ts.seed))
    return rep, {"points": len(pts)}


def task_ball_check(ts: TaskSpec, tol: float | None) -> tuple[CheckReport, dict]:
    m = _metric(ts)
    pts = _points(ts, ts.cone.dim)
    center = tuple(ts.payload.get("center", [0.0] * ts.cone.dim))
    r = float(ts.payload.get("r", 1.0))
    if r <= 0:
        raise SpecError("payload.r", "radius must be positive")
    rep = check_ball_equality(m, center, r, pts, c=ts.payload.get("c"))
    return rep, {"r": r, "compared": rep.checked, "mismatches": rep.failed, "band_excluded": rep.excluded}


def task_fixpoint(ts: TaskSpec, tol: float | None) -> tuple[CheckReport, dict]:
    m = _metric(ts)
    p = ts.payload
    try:
        M = np.asarray(p["map"]["M"], dtype=float)
        b = as_vector(p["map"]["b"], ts.cone.dim)
        x0 = as_vector(p["x0"], ts.cone.dim)
        lam = float(p["lambda"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError("payload", f"fixpoint needs map.M, map.b, x0 and lambda ({exc})") from None
    if M.shape != (ts.cone.dim, ts.cone.dim):
        raise SpecError("payload.map.M", f"expected a {ts.cone.dim}x{ts.cone.dim} matrix")

    def T(x):
        return (M * np.asarray(x)[None, :]).sum(axis=1) + b

    tol = tol or float(p.get("tol", 1e-8))
    rep = CheckReport()
    try:
        res = solve_contraction(m, T, x0, lam, tol=tol, max_iter=int(p.get("max_iter", 10_000)))
    except ValueError as exc:
        raise SpecError("payload.lambda", str(exc)) from None
    except ConvergenceError as exc:
        rep.record(False, "convergence", (), (exc.iterations,))
        return rep, {"point": exc.best}
    rep.record(True, "convergence")
    trace = [x0]
    for _ in range(res.iterations):
        trace.append(T(trace[-1]))
    pairs = [(trace[k], trace[k + 1]) for k in range(len(trace) - 1) if m.distance(trace[k], trace[k + 1]) > 0]
    est = estimate_contraction_factor(m, T, pairs) if pairs else 0.0
    rep.record(est <= lam * (1 + 1e-9), "observed factor within claimed lambda", (), (est, lam))
    return rep, {
        "point": res.point,
        "iterations": res.iterations,
        "residual": res.residual,
        "apriori_bound": res.apriori_bound,
        "aposteriori_bound": res.aposteriori_bound,
        "estimated_factor": est,
        "steps": res.trace,
    }


def task_norm_check(ts: TaskSpec, tol: float | None) -> tuple[CheckReport, dict]:
    p = ts.payload
    k = int(p.get("dim", ts.cone.dim))
    f = _vector_fn(p.get("vnorm", {"kind": "abs"}), ts.cone.dim, "payload.vnorm")
    ns = ConeNormedSpace(ts.cone, f, k, complex_field=bool(p.get("complex", False)))
    rng = np.random.default_rng(ts.seed)
    sample, scalars = random_sample(ns, rng, int(p.get("count", 200)))
    rep = check_cone_norm_axioms(ns, sample, scalars, rng_seed=ts.seed)
    rep.merge(check_norm_axioms(ns, ts.scal, sample, scalars, r=float(p.get("r", 1.0)), rng_seed=ts.seed))
    return rep, {"count": len(sample)}


def task_validate(ts: TaskSpec, tol: float | None) -> tuple[CheckReport, dict]:
    vr = validate(ts.cone, probe_count=int(ts.payload.get("probe_count", 1000)), rng_seed=ts.seed)
    rep = CheckReport()
    rep.record(vr.pointed, "pointedness")
    rep.record(vr.interior_witness is not None, "interior witness")
    for name, cex in vr.failures:
        if name not in ("pointedness", "interior"):
            rep.record(False, name, cex)
    values = {
        "pointed": vr.pointed,
        "interior_witness": vr.interior_witness,
        "failures": [{"property": n, "counterexample": c} for n, c in vr.failures],
    }
    return rep, values


TASK_RUNNERS = {
    "scalarize": task_scalarize,
    "metric-check": task_metric_check,
    "ball-check": task_ball_check,
    "fixpoint": task_fixpoint,
    "norm-check": task_norm_check,
    "validate": task_validate,
}


def run(spec_path: str | Path, output_path: str | Path | None = None, tol: float | None = None,
        seed: int | None = None, timing: bool = False, stdout=None) -> int:
    """Execute a spec file and write its result document. Returns the exit status."""
    stdout = stdout or sys.stdout
    try:
        ts = load_spec(spec_path, seed=seed)
        t0 = time.perf_counter()
        rep, values = TASK_RUNNERS[ts.task](ts, tol)
        elapsed = (time.perf_counter() - t0) * 1e3
    except SpecError as exc:
        print(f"conescal: error in {spec_path}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"conescal: cannot read {spec_path}: {exc}", file=sys.stderr)
        return 2
    except (KeyError, TypeError, ValueError) as exc:
        print(f"conescal: error in {spec_path}: payload: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2

    doc: dict[str, Any] = {
        "version": FORMAT_VERSION,
        "task": ts.task,
        # Band-excluded sample points were examined and are not failures.
        "summary": {
            "checked": rep.checked + rep.excluded,
            "passed": rep.passed + rep.excluded,
            "excluded": rep.excluded,
        },
        "values": to_jsonable(values),
    }
    if rep.counterexamples:
        doc["counterexamples"] = _counterexamples(rep)
    doc["timing_ms"] = round(elapsed, 3) if timing else None
    text = dumps(doc) + "\n"
    if output_path is None:
        stdout.write(text)
    else:
        Path(output_path).write_text(text, encoding="utf-8")
    return 0 if rep.ok else 1


def _u64(s: str) -> int:
    v = int(s, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="conescal", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({FORMAT_VERSION})")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="execute a task spec file")
    r.add_argument("spec")
    r.add_argument("--out", help="write the result document here instead of stdout")
    r.add_argument("--tol", type=float, help="override the task tolerance")
    r.add_argument("--seed", type=_u64, help="override the payload seed")
    r.add_argument("--timing", action="store_true", help="record wall time in timing_ms (breaks byte-identity)")
    v = sub.add_parser("validate", help="parse a spec file and check e without running the task")
    v.add_argument("spec")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return run(args.spec, args.out, tol=args.tol, seed=args.seed, timing=args.timing)
    try:
        ts = load_spec(args.spec)
    except SpecError as exc:
        print(f"conescal: error in {args.spec}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"conescal: cannot read {args.spec}: {exc}", file=sys.stderr)
        return 2
    print(f"{args.spec}: ok ({ts.task}, cone dim {ts.cone.dim})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
