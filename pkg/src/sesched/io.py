"""JSON instance files and tag corpora."""

from __future__ import annotations

import json
from collections import Counter
from pathlib import Path
from typing import Any

from .errors import InputError, LoadError
from .instancegen import build_instance_from_tags
from .model import CandidateEvent, CompetingEvent, Instance, User, validate_instance


def instance_to_dict(instance: Instance) -> dict[str, Any]:
    return {
        "theta": instance.theta,
        "intervals": list(instance.intervals),
        "events": [{"id": e.id, "location": e.location, "resources": e.required_resources}
                   for e in instance.events],
        "competing": [{"id": c.id, "interval": c.interval} for c in instance.competing],
        "users": [{"id": u.id, "activity": dict(u.activity), "interest": dict(u.interest)}
                  for u in instance.users],
    }


def _dupes(label: str, ids: list[str]) -> None:
    d = sorted(x for x, n in Counter(ids).items() if n > 1)
    if d:
        raise LoadError(f"duplicate {label} ids: {', '.join(map(repr, d))}")


def _real(value: Any, what: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise LoadError(f"{what} must be a number, got {value!r}")
    return float(value)


def instance_from_dict(data: dict[str, Any], *, strict: bool = True) -> Instance:
    """Parse the canonical instance mapping.

    Structural problems and duplicate ids raise :class:`LoadError`; with
    ``strict`` so do range violations reported by ``validate_instance``.
    """
    try:
        theta = _real(data["theta"], "theta")
        intervals = [str(t) for t in data["intervals"]]
        events = [CandidateEvent(str(e["id"]), str(e["location"]),
                                 _real(e.get("resources", 0.0), f"resources of {e['id']!r}"))
                  for e in data.get("events", [])]
        competing = [CompetingEvent(str(c["id"]), str(c["interval"]))
                     for c in data.get("competing", [])]
        users = [User(str(u["id"]),
                      {str(k): _real(v, f"interest of {u['id']!r}")
                       for k, v in u.get("interest", {}).items()},
                      {str(k): _real(v, f"activity of {u['id']!r}")
                       for k, v in u.get("activity", {}).items()})
                 for u in data.get("users", [])]
    except (KeyError, TypeError, AttributeError) as exc:
        raise LoadError(f"malformed instance: {exc!r}") from exc
    _dupes("interval", intervals)
    _dupes("event", [e.id for e in events])
    _dupes("competing event", [c.id for c in competing])
    _dupes("user", [u.id for u in users])
    _dupes("event/competing", [e.id for e in events] + [c.id for c in competing])
    try:
        instance = Instance.from_users(theta, intervals, events, competing, users)
    except InputError as exc:
        raise LoadError(str(exc)) from exc
    if strict:
        bad = validate_instance(instance)
        if bad:
            raise LoadError("invalid instance: " + "; ".join(map(str, bad[:10])))
    return instance


def dump_instance(instance: Instance, path: str | Path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(instance), separators=(",", ":")) + "\n",
                          encoding="utf-8")


def load_instance(path: str | Path, *, strict: bool = True) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LoadError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise LoadError(f"{path}: top level must be an object")
    return instance_from_dict(data, strict=strict)


def instance_from_tag_corpus(data: dict[str, Any]) -> Instance:
    """Build an instance from a tag corpus mapping.

    Besides the documented keys, a user entry may carry an optional
    ``"activity"`` map (interval id to probability); users without one are
    treated as always active.
    """
    try:
        users = data["users"]
        events = data["events"]
        competing = data.get("competing", [])
        intervals = [str(t) for t in data["intervals"]]
        theta = _real(data["theta"], "theta")
        _dupes("user", [str(u["id"]) for u in users])
        _dupes("event", [str(e["id"]) for e in events])
        _dupes("competing event", [str(c["id"]) for c in competing])
        _dupes("interval", intervals)
        activity = {str(u["id"]): {str(t): _real(v, "activity") for t, v in u["activity"].items()}
                    for u in users if "activity" in u}
        return build_instance_from_tags(
            {str(u["id"]): [str(t) for t in u.get("tags", [])] for u in users},
            {str(e["id"]): [str(t) for t in e.get("tags", [])] for e in events},
            {str(c["id"]): [str(t) for t in c.get("tags", [])] for c in competing},
            {str(c["id"]): str(c["interval"]) for c in competing},
            theta,
            {str(e["id"]): _real(e.get("resources", 0.0), "resources") for e in events},
            location_map={str(e["id"]): str(e["location"]) for e in events if "location" in e},
            intervals=intervals,
            activity=activity,
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise LoadError(f"malformed tag corpus: {exc!r}") from exc
    except InputError as exc:
        raise LoadError(str(exc)) from exc


def load_tag_corpus(path: str | Path) -> Instance:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise LoadError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise LoadError(f"{path}: top level must be an object")
    return instance_from_tag_corpus(data)
