"""Instance, distribution, results and trace files.

Instances are JSON documents::

    {"format": "mcmatchup-instance", "version": 1,
     "tasks": [{"id": 0, "criticality": 2, "proc": [3, 7],
                "level_probabilities": [0.9, 0.1]}, ...]}

``level_probabilities`` is optional and only used by simulation.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import IO, Any, Iterable, Mapping, Sequence

from .core import FShape, InputError, Instance, TaskId
from .shaping import ConfidenceLevels, DiscreteDistribution

INSTANCE_FORMAT = "mcmatchup-instance"
DISTRIBUTION_FORMAT = "mcmatchup-distributions"
VERSION = 1

RESULT_COLUMNS = ("instance_id", "n", "solver", "elapsed_s", "makespan", "optimal", "gap_pct", "certificate", "note")
TRACE_COLUMNS = ("task", "start", "end", "status")


class ParseError(InputError):
    """Malformed input file; the message names the offending location."""


@dataclass
class InstanceFile:
    instance: Instance
    level_probabilities: dict[TaskId, list[float]] = field(default_factory=dict)


def _load_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _header(doc: Any, source: str, kind: str) -> None:
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    if doc.get("format") != kind:
        raise ParseError(f"{source}: field 'format' must be {kind!r}, got {doc.get('format')!r}")
    if doc.get("version") != VERSION:
        raise ParseError(f"{source}: unsupported version {doc.get('version')!r}")


def _field(obj: Mapping, name: str, where: str) -> Any:
    if not isinstance(obj, dict) or name not in obj:
        raise ParseError(f"{where}: missing field {name!r}")
    return obj[name]


def _int_list(value: Any, where: str) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise ParseError(f"{where}: expected a list of integers")
    return value


def parse_instance(text: str, source: str = "<instance>") -> InstanceFile:
    doc = _load_json(text, source)
    _header(doc, source, INSTANCE_FORMAT)
    raw_tasks = _field(doc, "tasks", source)
    if not isinstance(raw_tasks, list):
        raise ParseError(f"{source}: field 'tasks' must be a list")
    tasks = []
    probs: dict[TaskId, list[float]] = {}
    for k, raw in enumerate(raw_tasks):
        where = f"{source}: tasks[{k}]"
        tid = _field(raw, "id", where)
        if not isinstance(tid, (int, str)) or isinstance(tid, bool):
            raise ParseError(f"{where}.id: must be an integer or string")
        crit = _field(raw, "criticality", where)
        if not isinstance(crit, int) or isinstance(crit, bool):
            raise ParseError(f"{where}.criticality: must be an integer")
        proc = _int_list(_field(raw, "proc", where), f"{where}.proc")
        try:
            tasks.append(FShape(tid, crit, tuple(proc)))
        except InputError as exc:
            raise ParseError(f"{where}: {exc}") from None
        if "level_probabilities" in raw:
            lp = raw["level_probabilities"]
            if not isinstance(lp, list) or not all(isinstance(v, (int, float)) for v in lp):
                raise ParseError(f"{where}.level_probabilities: expected a list of numbers")
            probs[tid] = [float(v) for v in lp]
    try:
        instance = Instance(tuple(tasks))
    except InputError as exc:
        raise ParseError(f"{source}: {exc}") from None
    return InstanceFile(instance, probs)


def dump_instance(inst: Instance, level_probabilities: Mapping[TaskId, Sequence[float]] | None = None) -> str:
    tasks = []
    for t in inst:
        row: dict[str, Any] = {"id": t.id, "criticality": t.criticality, "proc": list(t.proc)}
        if level_probabilities and t.id in level_probabilities:
            row["level_probabilities"] = list(level_probabilities[t.id])
        tasks.append(row)
    doc = {"format": INSTANCE_FORMAT, "version": VERSION, "tasks": tasks}
    return json.dumps(doc, indent=1) + "\n"


def read_instance(path: str) -> InstanceFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    return parse_instance(text, path)


def write_instance(path: str, inst: Instance, level_probabilities=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_instance(inst, level_probabilities))


@dataclass
class DistributionTask:
    id: TaskId
    criticality: int
    distribution: DiscreteDistribution


def parse_distributions(text: str, source: str = "<distributions>") -> tuple[ConfidenceLevels, list[DistributionTask]]:
    """``{"format": "mcmatchup-distributions", "version": 1, "levels": [...],
    "tasks": [{"id": .., "criticality": .., "distribution": [[t, p], ...]}]}``"""
    doc = _load_json(text, source)
    _header(doc, source, DISTRIBUTION_FORMAT)
    try:
        levels = ConfidenceLevels(tuple(_field(doc, "levels", source)))
    except (InputError, TypeError, ValueError) as exc:
        raise ParseError(f"{source}.levels: {exc}") from None
    out = []
    for k, raw in enumerate(_field(doc, "tasks", source)):
        where = f"{source}: tasks[{k}]"
        pairs = _field(raw, "distribution", where)
        try:
            dist = DiscreteDistribution.from_pairs([(int(t), float(p)) for t, p in pairs])
        except (InputError, TypeError, ValueError) as exc:
            raise ParseError(f"{where}.distribution: {exc}") from None
        out.append(DistributionTask(_field(raw, "id", where), int(_field(raw, "criticality", where)), dist))
    return levels, out


def write_results(fh: IO[str], records: Iterable[Any]) -> None:
    """Bench records as CSV in ``RESULT_COLUMNS`` order."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(RESULT_COLUMNS)
    for r in records:
        w.writerow([
            r.instance_id, r.n, r.solver, f"{r.elapsed:.6f}",
            "" if r.makespan is None else r.makespan,
            int(r.optimal),
            "" if r.gap is None else f"{r.gap:.4f}",
            r.certificate or "",
            r.note or "",
        ])


def write_trace(fh: IO[str], rows: Iterable[Any]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for r in rows:
        w.writerow([r.task, r.start, "" if r.end is None else r.end, r.status])
