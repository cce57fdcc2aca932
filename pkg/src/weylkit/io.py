"""JSON interchange format for groupoids, cocycles, gradings and markings.

The format is a single JSON object: name, units, arrows (id/source/target
records), a compose table keyed by "g,h", an optional cocycle table of
phase strings "a/b", an optional grading, and an optional marked
subgroupoid.  Schema problems raise SchemaError with a path to the
offending entry; mathematical problems surface via validate_groupoid.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .cocycle import TwoCocycle
from .errors import SchemaError
from .groupoid import FiniteGroupoid, Grading, validate_groupoid
from .phases import Phase


@dataclass
class GroupoidFile:
    """Parsed and validated contents of a groupoid file."""

    name: str
    G: FiniteGroupoid
    omega: TwoCocycle
    c: Optional[Grading]
    marked: Optional[frozenset]


def _expect(cond, path, message):
    if not cond:
        raise SchemaError(f"{path}: {message}")


def _split_pair(key, path):
    parts = key.split(",")
    _expect(len(parts) == 2, path, f"key {key!r} is not of the form 'g,h'")
    return parts[0], parts[1]


def parse_groupoid_data(data: dict) -> GroupoidFile:
    """Validate a decoded JSON object and build the groupoid it describes."""
    _expect(isinstance(data, dict), "/", "top level must be an object")
    name = data.get("name", "G")
    _expect(isinstance(name, str), "/name", "must be a string")

    units = data.get("units")
    _expect(isinstance(units, list) and units, "/units", "must be a nonempty list")
    for i, u in enumerate(units):
        _expect(isinstance(u, str), f"/units/{i}", "unit ids must be strings")

    raw_arrows = data.get("arrows")
    _expect(isinstance(raw_arrows, list) and raw_arrows, "/arrows", "must be a nonempty list")
    arrows = {}
    for i, rec in enumerate(raw_arrows):
        path = f"/arrows/{i}"
        _expect(isinstance(rec, dict), path, "must be an object")
        for key in ("id", "source", "target"):
            _expect(isinstance(rec.get(key), str), f"{path}/{key}", "must be a string")
        _expect("," not in rec["id"], f"{path}/id", "arrow ids must not contain commas")
        _expect(rec["id"] not in arrows, f"{path}/id", f"duplicate arrow id {rec['id']!r}")
        arrows[rec["id"]] = (rec["source"], rec["target"])

    raw_compose = data.get("compose")
    _expect(isinstance(raw_compose, dict), "/compose", "must be an object")
    compose = {}
    for key, val in raw_compose.items():
        path = f"/compose/{key}"
        g, h = _split_pair(key, path)
        _expect(isinstance(val, str), path, "composite must be an arrow id string")
        compose[(g, h)] = val

    G = validate_groupoid(units, arrows, compose, name=name)

    raw_cocycle = data.get("cocycle", {})
    _expect(isinstance(raw_cocycle, dict), "/cocycle", "must be an object")
    values = {}
    for key, val in raw_cocycle.items():
        path = f"/cocycle/{key}"
        pair = _split_pair(key, path)
        _expect(isinstance(val, str), path, "phase must be a string 'a/b'")
        try:
            values[pair] = Phase.parse(val)
        except SchemaError as exc:
            raise SchemaError(f"{path}: {exc}") from exc
    omega = TwoCocycle(G, values)

    c = None
    raw_grading = data.get("grading")
    if raw_grading is not None:
        _expect(isinstance(raw_grading, dict), "/grading", "must be an object")
        group = raw_grading.get("group")
        _expect(
            isinstance(group, list) and all(isinstance(n, int) and n >= 0 for n in group),
            "/grading/group",
            "must be a list of nonnegative cyclic orders",
        )
        raw_values = raw_grading.get("values")
        _expect(isinstance(raw_values, dict), "/grading/values", "must be an object")
        grading_values = {}
        for gid, vec in raw_values.items():
            path = f"/grading/values/{gid}"
            _expect(gid in arrows, path, "unknown arrow id")
            _expect(
                isinstance(vec, list) and len(vec) == len(group)
                and all(isinstance(x, int) for x in vec),
                path,
                f"must be a list of {len(group)} integers",
            )
            grading_values[gid] = tuple(vec)
        missing = set(arrows) - set(grading_values)
        _expect(not missing, "/grading/values", f"missing arrows: {sorted(missing)[:4]}")
        c = Grading(group=tuple(group), values=grading_values)

    marked = None
    raw_marked = data.get("marked_subgroupoid")
    if raw_marked is not None:
        _expect(isinstance(raw_marked, list), "/marked_subgroupoid", "must be a list")
        for i, gid in enumerate(raw_marked):
            _expect(gid in arrows, f"/marked_subgroupoid/{i}", f"unknown arrow id {gid!r}")
        marked = frozenset(raw_marked)

    return GroupoidFile(name=name, G=G, omega=omega, c=c, marked=marked)


def load_groupoid(path: str) -> GroupoidFile:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    return parse_groupoid_data(data)


def emit_groupoid_data(
    G: FiniteGroupoid,
    omega: Optional[TwoCocycle] = None,
    c: Optional[Grading] = None,
    marked=None,
    name: Optional[str] = None,
) -> dict:
    """Serialize to the interchange dict with deterministic ordering."""
    for g in G.arrows:
        if "," in g:
            raise SchemaError(f"arrow id {g!r} contains a comma and cannot be serialized")
    data = {
        "name": name or G.name,
        "units": list(G.units),
        "arrows": [
            {"id": g, "source": G.src[g], "target": G.tgt[g]} for g in G.arrows
        ],
        "compose": {
            f"{g},{h}": k for (g, h), k in sorted(G.compose.items())
        },
    }
    if omega is not None and omega.values:
        data["cocycle"] = {
            f"{g},{h}": str(ph) for (g, h), ph in sorted(omega.values.items())
        }
    if c is not None:
        data["grading"] = {
            "group": list(c.group),
            "values": {g: list(c.value(g)) for g in G.arrows},
        }
    if marked is not None:
        data["marked_subgroupoid"] = sorted(marked)
    return data


def save_groupoid(path: str, G, omega=None, c=None, marked=None, name=None) -> None:
    data = emit_groupoid_data(G, omega, c, marked, name)
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
