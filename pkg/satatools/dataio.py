"""Utilities to load and save instances and assignments as JSON.

Instance files look like::

    {
      "gamma": 0.5,
      "skills": 5,
      "workers": [{"id": 0, "x": 0.0, "y": 0.0,
                   "skills": [{"skill": 0, "fee": 3.0}]}],
      "tasks": [{"id": 0, "x": 1.0, "y": 2.0, "required": [0],
                 "budget": 20.0}],
      "distances": [[2.23606797749979]]
    }

`skills` (size of the skill universe) and `distances` (|W| rows of |T|
distances, or one flat row-major list) are optional. Assignment files hold
the contracts and the completed task ids.
"""
import json
import math

from .errors import DataError, InstanceFormatError
from .model import Assignment, Contract, Instance, Task, Worker
from .utils import get_logger


__all__ = ["instance_to_dict", "instance_from_dict", "load_instance",
           "save_instance", "assignment_to_dict", "assignment_from_dict",
           "load_assignment", "save_assignment", "instance_nbytes"]


LOG = get_logger(__name__)


def _get(d, key, loc, kind=None):
    if not isinstance(d, dict):
        raise InstanceFormatError(loc, "expected an object")
    if key not in d:
        raise InstanceFormatError(loc, "missing key '%s'" % key)
    value = d[key]
    where = "%s.%s" % (loc, key) if loc else key
    if kind is not None:
        return _as(value, kind, where)
    return value


def _as(value, kind, loc):
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise InstanceFormatError(loc, "expected an integer, got %r"
                                      % (value,))
        return value
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InstanceFormatError(loc, "expected a number, got %r"
                                      % (value,))
        value = float(value)
        if not math.isfinite(value):
            raise InstanceFormatError(loc, "expected a finite number")
        return value
    if kind is list:
        if not isinstance(value, list):
            raise InstanceFormatError(loc, "expected a list")
        return value
    raise ValueError("unknown kind %s" % kind)


def _build(loc, cls, **kwargs):
    try:
        return cls(**kwargs)
    except DataError as e:
        raise InstanceFormatError(loc, str(e))


def _parse_entities(items, loc, parse):
    """Parses workers or tasks and orders them by id."""
    parsed = {}
    for i, item in enumerate(items):
        where = "%s[%d]" % (loc, i)
        entity = parse(item, where)
        if entity.id in parsed:
            raise InstanceFormatError(where + ".id", "duplicate id %d"
                                      % entity.id)
        parsed[entity.id] = entity
    ids = sorted(parsed)
    if ids != list(range(len(ids))):
        raise InstanceFormatError(loc, "ids should be 0..%d, got %s"
                                  % (len(ids) - 1, ids))
    return [parsed[i] for i in ids]


def _parse_worker(d, loc):
    skills = []
    for j, entry in enumerate(_get(d, "skills", loc, list)):
        where = "%s.skills[%d]" % (loc, j)
        skills.append((_get(entry, "skill", where, int),
                       _get(entry, "fee", where, float)))
    return _build(loc, Worker, id=_get(d, "id", loc, int),
                  x=_get(d, "x", loc, float), y=_get(d, "y", loc, float),
                  skills=skills)


def _parse_task(d, loc):
    required = [_as(s, int, "%s.required[%d]" % (loc, j))
                for j, s in enumerate(_get(d, "required", loc, list))]
    return _build(loc, Task, id=_get(d, "id", loc, int),
                  x=_get(d, "x", loc, float), y=_get(d, "y", loc, float),
                  required=required, budget=_get(d, "budget", loc, float))


def _parse_distances(value, n_w, n_t):
    value = _as(value, list, "distances")
    if len(value) == n_w*n_t and all(not isinstance(v, list) for v in value):
        flat = [_as(v, float, "distances[%d]" % i)
                for i, v in enumerate(value)]
        return [flat[i*n_t:(i + 1)*n_t] for i in range(n_w)]
    if len(value) != n_w:
        raise InstanceFormatError("distances", "expected %d rows of %d "
                                  "distances" % (n_w, n_t))
    rows = []
    for i, row in enumerate(value):
        row = _as(row, list, "distances[%d]" % i)
        if len(row) != n_t:
            raise InstanceFormatError("distances[%d]" % i, "expected %d "
                                      "distances" % n_t)
        rows.append([_as(v, float, "distances[%d][%d]" % (i, j))
                     for j, v in enumerate(row)])
    return rows


def instance_from_dict(d):
    """Builds an Instance from its JSON representation.

    Raises:
        InstanceFormatError: with the location of the first problem found.
    """
    if not isinstance(d, dict):
        raise InstanceFormatError("", "expected an object at the top level")
    workers = _parse_entities(_get(d, "workers", "", list), "workers",
                              _parse_worker)
    tasks = _parse_entities(_get(d, "tasks", "", list), "tasks", _parse_task)
    n_skills = None
    if "skills" in d:
        n_skills = _get(d, "skills", "", int)
    override = None
    if d.get("distances") is not None:
        override = _parse_distances(d["distances"], len(workers), len(tasks))
    return _build("", Instance, workers=workers, tasks=tasks,
                  gamma=_get(d, "gamma", "", float), n_skills=n_skills,
                  distance_override=override)


def instance_to_dict(instance):
    d = {
        "gamma": instance.gamma,
        "skills": instance.n_skills,
        "workers": [{"id": w.id, "x": w.x, "y": w.y,
                     "skills": [{"skill": s, "fee": f} for s, f in w.skills]}
                    for w in instance.workers],
        "tasks": [{"id": t.id, "x": t.x, "y": t.y,
                   "required": list(t.required), "budget": t.budget}
                  for t in instance.tasks],
    }
    if instance.distance_override is not None:
        d["distances"] = [list(row) for row in instance.distance_override]
    return d


def _read_json(path):
    try:
        with open(path) as fid:
            return json.load(fid)
    except OSError as e:
        raise DataError("could not read %s: %s" % (path, e))
    except ValueError as e:
        raise DataError("malformed JSON in %s: %s" % (path, e))


def _write_json(d, path):
    with open(path, "w") as fid:
        json.dump(d, fid, indent=2)
        fid.write("\n")


def load_instance(path):
    """Reads an instance from a JSON file."""
    try:
        instance = instance_from_dict(_read_json(path))
    except InstanceFormatError as e:
        raise InstanceFormatError("%s: %s" % (path, e.location),
                                  e.message)
    LOG.debug("loaded %s from %s", instance, path)
    return instance


def save_instance(instance, path):
    """Writes an instance to a JSON file."""
    _write_json(instance_to_dict(instance), path)
    LOG.debug("saved %s to %s", instance, path)


def assignment_to_dict(assignment):
    return {
        "contracts": [{"worker": c.worker, "task": c.task,
                       "used_skills": list(c.used_skills),
                       "transport_fee": c.transport_fee,
                       "labor_fee": c.labor_fee}
                      for c in assignment.contracts],
        "completed": sorted(assignment.completed),
    }


def assignment_from_dict(d):
    contracts = []
    for i, c in enumerate(_get(d, "contracts", "", list)):
        loc = "contracts[%d]" % i
        used = [_as(s, int, "%s.used_skills[%d]" % (loc, j))
                for j, s in enumerate(_get(c, "used_skills", loc, list))]
        contracts.append(Contract(
            worker=_get(c, "worker", loc, int), task=_get(c, "task", loc, int),
            used_skills=used,
            transport_fee=_get(c, "transport_fee", loc, float),
            labor_fee=_get(c, "labor_fee", loc, float)))
    completed = [_as(t, int, "completed[%d]" % i)
                 for i, t in enumerate(_get(d, "completed", "", list))]
    return Assignment(contracts=contracts, completed=completed)


def load_assignment(path):
    """Reads an assignment from a JSON file."""
    return assignment_from_dict(_read_json(path))


def save_assignment(assignment, path):
    """Writes an assignment to a JSON file."""
    _write_json(assignment_to_dict(assignment), path)


def instance_nbytes(instance):
    """Rough size of an instance in memory, 8 bytes per stored number."""
    items = sum(3 + 2*len(w.skills) for w in instance.workers)
    items += sum(4 + len(t.required) for t in instance.tasks)
    if instance.distance_override is not None:
        items += len(instance.workers)*len(instance.tasks)
    return 8*(items + 2)
