"""Scenario documents: loading, dotted-path overrides and structural checks.

A scenario is a YAML mapping with optional ``name``, ``description`` and
``output_dir`` keys plus at least one computational section.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

from .errors import FuncEconError

__all__ = [
    "SECTIONS",
    "ScenarioError",
    "ParseError",
    "ValidationError",
    "IoError",
    "Scenario",
    "load_scenario",
    "parse_scenario",
    "apply_overrides",
    "bundled_names",
    "bundled_path",
    "list_scenarios",
]

SECTIONS = ("behavior", "bid", "dynamics", "exchange", "industrialization", "valuation")
META_KEYS = ("name", "description", "output_dir")

# required keys per section; everything else is optional
_REQUIRED = {
    "exchange": ("specs",),
    "valuation": ("capacity",),
    "bid": ("matrix", "E", "I"),
    "industrialization": ("base", "block_orders", "blocks", "E", "I"),
    "dynamics": (),
    "behavior": ("regimes",),
}


class ScenarioError(FuncEconError):
    pass


class ParseError(ScenarioError, ValueError):
    """Malformed scenario text; ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class ValidationError(ScenarioError, ValueError):
    """Structurally invalid scenario; ``invariant`` names the broken rule."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"[{invariant}] {message}")
        self.invariant = invariant


class IoError(ScenarioError, OSError):
    pass


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    sections: dict
    output_dir: str | None = None

    def section_names(self) -> list:
        return sorted(self.sections)


def parse_scenario(text: str, name: str = "scenario") -> dict:
    try:
        doc = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line = mark.line + 1 if mark else None
        col = mark.column + 1 if mark else None
        raise ParseError(f"{name}: {exc.problem or exc}", line, col) from exc
    except yaml.YAMLError as exc:
        raise ParseError(f"{name}: {exc}") from exc
    return doc


def _set_path(doc: dict, dotted: str, value) -> None:
    keys = dotted.split(".")
    node = doc
    for depth, key in enumerate(keys):
        last = depth == len(keys) - 1
        if isinstance(node, list):
            try:
                idx = int(key)
                node[idx]
            except (ValueError, IndexError) as exc:
                raise ValidationError("override-path", f"{dotted!r}: bad list index {key!r}") from exc
            if last:
                node[idx] = value
            else:
                node = node[idx]
        elif isinstance(node, dict):
            if last:
                node[key] = value
            else:
                node = node.setdefault(key, {})
        else:
            raise ValidationError("override-path", f"{dotted!r}: {key!r} is not inside a mapping or list")


def apply_overrides(doc, overrides) -> dict:
    """Apply ``key.path=value`` strings; values are parsed as YAML scalars or lists."""
    doc = copy.deepcopy(doc) if doc is not None else {}
    if not isinstance(doc, dict):
        raise ValidationError("document-is-mapping", "scenario root must be a mapping")
    for item in overrides or ():
        if "=" not in item:
            raise ValidationError("override-syntax", f"override {item!r} is not key=value")
        key, raw = item.split("=", 1)
        key = key.strip()
        if not key:
            raise ValidationError("override-syntax", f"override {item!r} has an empty key")
        value = parse_scenario(raw, f"override {key}")
        _set_path(doc, key, value)
    return doc


def validate(doc, default_name: str = "scenario") -> Scenario:
    if doc is None:
        raise ValidationError("non-empty", "scenario is empty")
    if not isinstance(doc, dict):
        raise ValidationError("document-is-mapping", "scenario root must be a mapping")
    unknown = sorted(set(doc) - set(SECTIONS) - set(META_KEYS))
    if unknown:
        raise ValidationError("known-keys", f"unknown top-level keys: {', '.join(map(str, unknown))}")
    sections = {k: doc[k] for k in SECTIONS if k in doc}
    if not sections:
        raise ValidationError("at-least-one-section", "no computational section present")
    for key, body in sections.items():
        if not isinstance(body, dict):
            raise ValidationError("section-is-mapping", f"section {key!r} must be a mapping")
        missing = [r for r in _REQUIRED[key] if r not in body]
        if missing:
            raise ValidationError("required-keys", f"section {key!r} lacks {', '.join(missing)}")
    if "dynamics" in sections and not ({"canonical", "curves"} & set(sections["dynamics"])):
        raise ValidationError("required-keys", "section 'dynamics' needs 'canonical' or 'curves'")
    return Scenario(
        name=str(doc.get("name", default_name)),
        description=str(doc.get("description", "")),
        sections=sections,
        output_dir=doc.get("output_dir"),
    )


def bundled_names() -> list:
    root = resources.files("funcecon") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".yaml"))


def bundled_path(name: str):
    return resources.files("funcecon") / "scenarios" / f"{name}.yaml"


def _read(source) -> tuple:
    """Return ``(text, default_name)`` for a path or a bundled scenario name."""
    path = Path(source)
    if path.exists():
        try:
            return path.read_text(encoding="utf-8"), path.stem
        except OSError as exc:
            raise IoError(f"cannot read {path}: {exc}") from exc
    if str(source) in bundled_names():
        return bundled_path(str(source)).read_text(encoding="utf-8"), str(source)
    raise IoError(f"no scenario file or bundled scenario named {source!r}")


def load_scenario(source, overrides=()) -> Scenario:
    text, default_name = _read(source)
    doc = parse_scenario(text, str(source))
    doc = apply_overrides(doc, overrides) if overrides else doc
    return validate(doc, default_name)


def list_scenarios() -> list:
    """``[(name, description), ...]`` for the bundled scenarios."""
    out = []
    for name in bundled_names():
        doc = parse_scenario(bundled_path(name).read_text(encoding="utf-8"), name) or {}
        out.append((name, str(doc.get("description", "")).strip()))
    return out
