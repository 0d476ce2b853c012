"""Solver output records, their JSON form, and report verification."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .core import (
    Assignment,
    CspInstance,
    DenseCspError,
    DenseGraph,
    evaluate_csp,
    evaluate_cut,
    read_instance,
)

SCHEMA_VERSION = 1
ALGORITHMS = ("maxcut", "rcsp", "rcsp-parallel", "oracle", "exact-greedy")


@dataclass
class RunReport:
    algorithm: str
    value: int
    assignment: Assignment
    probes: int = 0
    audit_probes: int = 0
    wall_ms: float = 0.0
    params: dict[str, Any] = field(default_factory=dict)
    branches: int | None = None
    t0: int | None = None
    fallback: bool = False
    best_branch: int | None = None
    # r-CSP fields
    t1: int | None = None
    phase1_probes: int | None = None
    phase2_probes: int | None = None
    branch_count: int | None = None
    fallback_phase2_skipped: bool | None = None
    # parallel runner fields
    supersteps: int | None = None
    superstep_sizes: list[int] | None = None
    instance: str | None = None

    def to_dict(self, include_wall: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {"schema": SCHEMA_VERSION}
        for name in self.__dataclass_fields__:
            val = getattr(self, name)
            if name == "assignment":
                out["assignment"] = val.tolist()
                out["k"] = val.k
            elif name == "wall_ms" and not include_wall:
                continue
            elif val is not None:
                out[name] = _plain(val)
        return out

    def to_json(self, include_wall: bool = True) -> str:
        return json.dumps(self.to_dict(include_wall), sort_keys=True, indent=2) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunReport":
        data = dict(data)
        data.pop("schema", None)
        k = data.pop("k", 2)
        values = data.pop("assignment")
        data["assignment"] = Assignment(len(values), k, np.asarray(values, dtype=np.int64))
        return cls(**data)


def _plain(val: Any) -> Any:
    if isinstance(val, dict):
        return {str(k): _plain(v) for k, v in val.items()}
    if isinstance(val, (list, tuple)):
        return [_plain(v) for v in val]
    if isinstance(val, np.generic):
        return val.item()
    return val


@dataclass
class CheckResult:
    name: str
    ok: bool
    message: str = ""


def verify(report_file: str | Path, instance_file: str | Path | None = None) -> list[CheckResult]:
    """Re-check a report against its instance.

    The instance comes from ``instance_file`` or from the report's
    ``instance`` field (resolved relative to the report's directory).
    """
    report_path = Path(report_file)
    data = json.loads(report_path.read_text())
    if instance_file is None:
        ref = data.get("instance")
        if not ref:
            raise DenseCspError("report has no instance reference")
        instance_file = Path(ref)
        if not instance_file.is_absolute():
            instance_file = report_path.parent / instance_file
    instance_file = Path(instance_file)
    if not instance_file.exists():
        raise FileNotFoundError(f"instance file not found: {instance_file}")
    return check_report(data, read_instance(instance_file))


def check_report(data: dict[str, Any], instance: DenseGraph | CspInstance) -> list[CheckResult]:
    results = []
    values = data.get("assignment")
    k = data.get("k", 2 if isinstance(instance, DenseGraph) else getattr(instance, "k", 2))
    expected_k = 2 if isinstance(instance, DenseGraph) else instance.k
    valid = (
        isinstance(values, list)
        and len(values) == instance.n
        and k == expected_k
        and all(isinstance(v, int) and 0 <= v < expected_k for v in values)
    )
    if not valid:
        results.append(CheckResult("assignment", False, "invalid assignment"))
    else:
        results.append(CheckResult("assignment", True))
        a = Assignment(instance.n, expected_k, np.asarray(values, dtype=np.int64))
        actual = evaluate_cut(instance, a) if isinstance(instance, DenseGraph) else evaluate_csp(instance, a)
        if actual == data.get("value"):
            results.append(CheckResult("value", True))
        else:
            results.append(CheckResult("value", False, f"value mismatch: report {data.get('value')}, recomputed {actual}"))

    probes, audit = data.get("probes"), data.get("audit_probes")
    ok = isinstance(probes, int) and isinstance(audit, int) and probes >= 0 and audit >= 0
    msg = "" if ok else "probe fields missing or negative"
    p1, p2 = data.get("phase1_probes"), data.get("phase2_probes")
    if ok and p1 is not None and p2 is not None and p1 + p2 != probes:
        ok, msg = False, f"phase probes {p1} + {p2} != probes {probes}"
    results.append(CheckResult("probes", ok, msg))
    return results
