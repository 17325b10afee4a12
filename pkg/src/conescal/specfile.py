"""Task spec files and result documents (JSON, version ``conescal/1``)."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .cones import Cone, cone_from_spec
from .scalarization import NotInteriorError, Scalarizer

FORMAT_VERSION = "conescal/1"
TASKS = ("scalarize", "metric-check", "ball-check", "fixpoint", "norm-check", "validate")
RANDOMIZED = ("metric-check", "norm-check", "validate")


class SpecError(ValueError):
    """Malformed spec file. ``where`` names the offending field or line."""

    def __init__(self, where: str, msg: str):
        super().__init__(f"{where}: {msg}")
        self.where = where


@dataclass
class TaskSpec:
    cone: Cone
    task: str
    payload: dict = field(default_factory=dict)
    scal: Scalarizer | None = None
    seed: int | None = None


def _get(d: dict, key: str, where: str, kind=None, required=True, default=None):
    if key not in d:
        if required:
            raise SpecError(f"{where}.{key}", "missing required field")
        return default
    val = d[key]
    if kind is not None and not isinstance(val, kind):
        raise SpecError(f"{where}.{key}", f"expected {getattr(kind, '__name__', kind)}, got {type(val).__name__}")
    return val


def parse_spec(doc: Any, seed: int | None = None) -> TaskSpec:
    """Validate a decoded spec document. ``seed`` overrides the payload's."""
    if not isinstance(doc, dict):
        raise SpecError("<root>", "spec must be a JSON object")
    version = _get(doc, "version", "<root>", str)
    if version != FORMAT_VERSION:
        raise SpecError("version", f"unsupported version {version!r}, expected {FORMAT_VERSION!r}")
    task = _get(doc, "task", "<root>", str)
    if task not in TASKS:
        raise SpecError("task", f"unknown task {task!r}; expected one of {', '.join(TASKS)}")
    try:
        cone = cone_from_spec(_get(doc, "cone", "<root>", dict))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError("cone", str(exc)) from None
    payload = _get(doc, "payload", "<root>", dict, required=False, default={})

    scal = None
    if "e" in doc or task != "validate":
        e = _get(doc, "e", "<root>", list)
        try:
            scal = Scalarizer(cone, e)
        except NotInteriorError:
            raise SpecError("e", "e must be an algebraic interior point of the cone "
                                 "(the scalarization is only defined for e in aint P)") from None
        except (TypeError, ValueError) as exc:
            raise SpecError("e", str(exc)) from None

    if seed is None:
        seed = payload.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64):
        raise SpecError("payload.seed", "seed must be an unsigned 64-bit integer")
    if task in RANDOMIZED and seed is None:
        raise SpecError("payload.seed", f"task {task!r} is randomized and needs an explicit seed")
    return TaskSpec(cone=cone, task=task, payload=payload, scal=scal, seed=seed)


def load_spec(path: str | Path, seed: int | None = None) -> TaskSpec:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    return parse_spec(doc, seed=seed)


# -- result documents ---------------------------------------------------------


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if obj is None or isinstance(obj, str):
        return obj
    return repr(obj)


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    return json.dumps(obj)
