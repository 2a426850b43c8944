"""Fans, their validation, finite group actions and fan-file ingestion."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .polycore import (
    ConeData, det, dual_cone, dot, is_primitive, lattice_index, rank, solve, transpose,
)

GROUP_CAP = 10_000


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class Place:
    name: str
    kind: str  # "real" | "complex"
    face_rays: frozenset[int]


@dataclass(frozen=True)
class Fan:
    """A simplicial rational fan given by rays and maximal cones.

    Cones are sorted ray-index sets; ``cones`` holds the full face poset,
    including the zero cone ``frozenset()``.
    """

    lattice_rank: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[frozenset[int], ...]
    boundary_rays: frozenset[int] | None = None
    places: tuple[Place, ...] = ()
    action_generators: tuple[tuple[int, ...], ...] | None = None
    cones: frozenset[frozenset[int]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        maxc = tuple(frozenset(int(i) for i in c) for c in self.max_cones)
        # drop listed cones that are faces of other listed cones
        maxc = tuple(c for c in dict.fromkeys(maxc) if not any(c < d for d in maxc))
        object.__setattr__(self, "max_cones", maxc)
        _validate(self)
        faces = {frozenset()}
        for c in maxc:
            for k in range(1, len(c) + 1):
                faces.update(frozenset(s) for s in combinations(sorted(c), k))
        for i in range(len(rays)):
            faces.add(frozenset({i}))
        object.__setattr__(self, "cones", frozenset(faces))

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def cone_data(self, cone: Iterable[int]) -> ConeData:
        return ConeData(self.lattice_rank, tuple(self.rays[i] for i in sorted(cone)))

    def is_cone(self, s: Iterable[int]) -> bool:
        return frozenset(s) in self.cones

    @cached_property
    def cones_by_dim(self) -> dict[int, list[frozenset[int]]]:
        out: dict[int, list[frozenset[int]]] = {}
        for c in sorted(self.cones, key=lambda c: (len(c), sorted(c))):
            out.setdefault(len(c), []).append(c)
        return out

    @cached_property
    def primitive_collections(self) -> list[frozenset[int]]:
        """Minimal ray sets that are not cones."""
        out = []
        n = self.n_rays
        for k in range(2, n + 1):
            for s in combinations(range(n), k):
                fs = frozenset(s)
                if fs in self.cones:
                    continue
                if all(fs - {i} in self.cones for i in fs):
                    out.append(fs)
        return out

    def rays_span(self) -> bool:
        return rank(self.rays) == self.lattice_rank if self.rays else self.lattice_rank == 0

    def to_document(self) -> dict:
        doc = {
            "lattice_rank": self.lattice_rank,
            "rays": [list(r) for r in self.rays],
            "max_cones": [sorted(c) for c in self.max_cones],
        }
        if self.action_generators:
            doc["action"] = {"generators": [list(g) for g in self.action_generators]}
        if self.boundary_rays is not None:
            doc["boundary_rays"] = sorted(self.boundary_rays)
        if self.places:
            doc["places"] = [{"name": p.name, "kind": p.kind, "face_rays": sorted(p.face_rays)}
                             for p in self.places]
        return doc


def _validate(f: Fan) -> None:
    n = f.lattice_rank
    for i, r in enumerate(f.rays):
        if len(r) != n:
            raise FanError(f"ray {i} has length {len(r)}, expected {n}")
        if not any(r):
            raise FanError(f"ray {i} is zero")
        if not is_primitive(r):
            raise FanError(f"ray {i} {r} not primitive")
    if len(set(f.rays)) != len(f.rays):
        raise FanError("duplicate rays")
    for c in f.max_cones:
        for i in c:
            if not 0 <= i < len(f.rays):
                raise FanError(f"cone {sorted(c)} has dangling ray index {i}")
        if c and rank([f.rays[i] for i in c]) != len(c):
            raise FanError(f"cone {sorted(c)} rays linearly dependent")
    for c1, c2 in combinations(f.max_cones, 2):
        _check_intersection(f, c1, c2)
    if f.boundary_rays is not None:
        for i in f.boundary_rays:
            if not 0 <= i < len(f.rays):
                raise FanError(f"boundary ray index {i} out of range")
    for p in f.places:
        if p.kind not in ("real", "complex"):
            raise FanError(f"place {p.name}: kind must be 'real' or 'complex'")


def _check_intersection(f: Fan, c1: frozenset, c2: frozenset) -> None:
    """The geometric intersection of two cones must be the cone on their common rays."""
    n = f.lattice_rank
    common = c1 & c2
    h1 = f.cone_data(c1).inequalities
    h2 = f.cone_data(c2).inequalities
    inter = dual_cone(ConeData.from_vectors(list(h1) + list(h2), ambient_rank=n))
    target = f.cone_data(common) if common else ConeData(n, ())
    ineq = target.inequalities if common else None
    for g in inter.generators:
        if common:
            ok = all(dot(h, g) >= 0 for h in ineq)
        else:
            ok = not any(g)
        if not ok:
            raise FanError(
                f"cones {sorted(c1)} and {sorted(c2)} intersect outside their common face {sorted(common)}")


def load_fan(document: str | dict | Path) -> Fan:
    """Build a validated fan from a fan-file document (JSON text, dict or path)."""
    if isinstance(document, Path):
        document = document.read_text(encoding="utf-8")
    if isinstance(document, str):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise FanError(f"malformed fan document: {exc}") from exc
    else:
        doc = document
    try:
        n = int(doc["lattice_rank"])
        rays = [tuple(int(x) for x in r) for r in doc["rays"]]
        max_cones = [frozenset(int(i) for i in c) for c in doc["max_cones"]]
    except (KeyError, TypeError) as exc:
        raise FanError(f"fan document missing field: {exc}") from exc
    boundary = doc.get("boundary_rays")
    places = tuple(
        Place(str(p["name"]), str(p.get("kind", "real")), frozenset(int(i) for i in p["face_rays"]))
        for p in doc.get("places", [])
    )
    action = doc.get("action")
    gens = None
    if action:
        gens = tuple(tuple(int(i) for i in g) for g in action.get("generators", []))
    fan = Fan(n, tuple(rays), tuple(max_cones),
              frozenset(boundary) if boundary is not None else None, places, gens)
    if gens:
        attach_action(fan, gens)
    return fan


def is_smooth(f: Fan) -> bool:
    """Every maximal cone's rays extend to a lattice basis."""
    return all(lattice_index([f.rays[i] for i in c]) == 1 for c in f.max_cones if c)


def is_complete(f: Fan) -> bool:
    n = f.lattice_rank
    if not f.max_cones or any(len(c) != n for c in f.max_cones):
        return False
    count: dict[frozenset, int] = {}
    for c in f.max_cones:
        for i in c:
            facet = c - {i}
            count[facet] = count.get(facet, 0) + 1
    return all(v == 2 for v in count.values())


def subfan(f: Fan, allowed_rays: Iterable[int]) -> Fan:
    """Fan of all cones of ``f`` whose rays lie in ``allowed_rays``; rays are re-indexed.

    Returns the subfan; the old indices of its rays are ``sorted(allowed_rays)``.
    """
    allowed = sorted(set(allowed_rays))
    for i in allowed:
        if not 0 <= i < f.n_rays:
            raise FanError(f"ray index {i} out of range")
    pos = {old: new for new, old in enumerate(allowed)}
    cones = [c for c in f.cones if c <= set(allowed)]
    maxc = [c for c in cones if not any(c < d for d in cones)]
    new_max = tuple(frozenset(pos[i] for i in c) for c in maxc)
    return Fan(f.lattice_rank, tuple(f.rays[i] for i in allowed), new_max)


# ---------------------------------------------------------------------------
# group actions

def _compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """(p o q)(i) = p[q[i]]"""
    return tuple(p[i] for i in q)


@dataclass(frozen=True)
class GroupAction:
    fan: Fan
    generators: tuple[tuple[int, ...], ...]
    elements: tuple[tuple[int, ...], ...]
    lattice_maps: dict = field(compare=False, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def ray_orbits(self) -> list[frozenset[int]]:
        return _orbits(range(self.fan.n_rays), lambda g, i: g[i], self.elements)

    @cached_property
    def cone_orbits(self) -> list[frozenset[frozenset[int]]]:
        return _orbits(self.fan.cones, lambda g, c: frozenset(g[i] for i in c), self.elements)

    def fixed_cones(self, elements: Iterable[Sequence[int]] | None = None) -> list[frozenset[int]]:
        els = self.elements if elements is None else list(elements)
        return [c for c in self.fan.cones
                if all(frozenset(g[i] for i in c) == c for g in els)]


def _orbits(items, act, elements):
    seen = set()
    out = []
    for x in sorted(items, key=lambda c: (len(c), sorted(c)) if isinstance(c, frozenset) else c):
        if x in seen:
            continue
        orb = frozenset(act(g, x) for g in elements)
        seen |= orb
        out.append(orb)
    return out


def attach_action(f: Fan, perms: Iterable[Sequence[int]]) -> GroupAction:
    """Validate permutations of ray indices as a fan automorphism group."""
    gens = tuple(tuple(int(i) for i in p) for p in perms)
    n = f.n_rays
    maps = {}
    for g in gens:
        if sorted(g) != list(range(n)):
            raise FanError(f"{g} is not a permutation of the {n} ray indices")
        for c in f.max_cones:
            img = frozenset(g[i] for i in c)
            if img not in f.cones or not any(img == d for d in f.max_cones):
                raise FanError(f"permutation {g} maps cone {sorted(c)} to {sorted(img)}, not a cone")
        maps[g] = _lattice_map(f, g)
    ident = tuple(range(n))
    elements = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                h = _compose(g, e)
                if h not in elements:
                    elements.add(h)
                    nxt.append(h)
                    if len(elements) > GROUP_CAP:
                        raise FanError(f"group exceeds {GROUP_CAP} elements")
        frontier = nxt
    return GroupAction(f, gens, tuple(sorted(elements)), maps)


def _lattice_map(f: Fan, g: Sequence[int]):
    """Integer matrix A with A n_rho = n_g(rho), or an error."""
    if not f.rays_span():
        return None
    n = f.lattice_rank
    src = list(f.rays)
    dst = [f.rays[g[i]] for i in range(f.n_rays)]
    rows = []
    # A^T solves src . A^T = dst column by column
    for j in range(n):
        col = solve(src, [d[j] for d in dst])
        if col is None or any(x.denominator != 1 for x in col):
            raise FanError(f"permutation {tuple(g)} is not induced by a lattice automorphism")
        rows.append([int(x) for x in col])
    for i in range(f.n_rays):
        if tuple(dot(r, src[i]) for r in rows) != tuple(dst[i]):
            raise FanError(f"permutation {tuple(g)} is not induced by a linear map")
    if abs(det(rows)) != 1:
        raise FanError(f"permutation {tuple(g)} is not induced by a lattice automorphism")
    return rows
