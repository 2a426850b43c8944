"""Bundled fixtures: fans with boundary and face choices, and affine models."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .clemens import AdelicFaceSpec, ClemensFace, PlaceFace
from .fan import Fan, load_fan

FANS = ("p1", "p2", "a2", "p1xp1", "bl2p2", "quadric_cone", "quadric_cone_compact")
MODELS = ("quadric_model",)


def _text(name: str) -> str:
    return resources.files("toricpoints").joinpath("data").joinpath(f"{name}.json").read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def _document(name: str) -> str:
    if name not in FANS + MODELS:
        raise KeyError(f"no bundled fixture {name!r}; known: {', '.join(FANS + MODELS)}")
    return _text(name)


def document(name: str) -> dict:
    return json.loads(_document(name))


def fan(name: str) -> Fan:
    return load_fan(document(name))


def resolve(arg: str) -> dict:
    """A fixture name or a path to a JSON document."""
    if arg in FANS or arg in MODELS:
        return document(arg)
    return json.loads(Path(arg).read_text(encoding="utf-8"))


def default_spec(doc: dict) -> AdelicFaceSpec:
    return AdelicFaceSpec(tuple(
        PlaceFace(str(p["name"]), str(p.get("kind", "real")), ClemensFace(frozenset(p["face_rays"])))
        for p in doc.get("places", [])
    ))
