"""Dart-based oriented combinatorial maps on the sphere.

A map is stored as three parallel arrays indexed by dart number:

    origin[d]  node the dart leaves from
    twin[d]    the opposite dart of the same segment (alpha)
    next[d]    counterclockwise successor around ``origin[d]`` (sigma)

Faces are the orbits of ``phi = next o twin``.  With a counterclockwise
``next`` this walks every face with its interior on the right, so the
corner between ``d`` and ``next[d]`` belongs to the face of ``next[d]``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DisconnectedMapError

__all__ = [
    "NodeKind",
    "Dart",
    "Diagnostic",
    "CombMap",
    "face_orbits",
    "euler_characteristic",
    "validate_local_structure",
    "natural_key",
]

_DIGITS = re.compile(r"(\d+)")


def natural_key(text: str) -> tuple:
    """Sort key ordering ``e2`` before ``e10``."""
    parts = _DIGITS.split(text)
    return tuple((0, int(p)) if p.isdigit() else (1, p) for p in parts)


class NodeKind(enum.Enum):
    VERTEX = "GraphVertex"
    CROSSING = "Crossing"


@dataclass(frozen=True)
class Dart:
    id: str
    origin: str
    twin: str
    next: str


@dataclass(frozen=True)
class Diagnostic:
    """One violated rule, with the node/dart/edge/face it concerns."""

    rule: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.where}: {self.message}"


class CombMap:
    """Immutable oriented combinatorial map.

    ``labels[d]`` names the parent edge of the segment carrying dart ``d``;
    ``names[d]`` is the dart's external identifier.
    """

    __slots__ = ("origin", "twin", "next", "kinds", "labels", "names", "__dict__")

    def __init__(
        self,
        origin: Sequence[str],
        twin: Sequence[int],
        next: Sequence[int],
        kinds: dict[str, NodeKind],
        labels: Sequence[str] | None = None,
        names: Sequence[str] | None = None,
    ):
        n = len(origin)
        if len(twin) != n or len(next) != n:
            raise ValueError("origin, twin and next must have equal length")
        self.origin = tuple(origin)
        self.twin = tuple(twin)
        self.next = tuple(next)
        self.kinds = dict(kinds)
        self.labels = tuple(labels) if labels is not None else tuple("" for _ in range(n))
        self.names = tuple(names) if names is not None else tuple(f"d{i}" for i in range(n))

    @classmethod
    def from_rotations(
        cls,
        rotations: dict[str, Sequence[int]],
        twin: Sequence[int],
        kinds: dict[str, NodeKind],
        labels: Sequence[str] | None = None,
        names: Sequence[str] | None = None,
    ) -> "CombMap":
        """Build from per-node counterclockwise dart lists and a twin table."""
        n = len(twin)
        origin: list[str | None] = [None] * n
        nxt = [-1] * n
        for node, darts in rotations.items():
            for i, d in enumerate(darts):
                if origin[d] is not None:
                    raise ValueError(f"dart {d} listed twice in rotations")
                origin[d] = node
                nxt[d] = darts[(i + 1) % len(darts)]
        if any(o is None for o in origin):
            raise ValueError("every dart must appear in exactly one rotation")
        return cls(origin, twin, nxt, kinds, labels, names)  # type: ignore[arg-type]

    def __len__(self) -> int:
        return len(self.origin)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CombMap):
            return NotImplemented
        return (
            self.origin == other.origin
            and self.twin == other.twin
            and self.next == other.next
            and self.kinds == other.kinds
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return hash((self.origin, self.twin, self.next))

    def dart(self, d: int) -> Dart:
        return Dart(self.names[d], self.origin[d], self.names[self.twin[d]], self.names[self.next[d]])

    def darts(self) -> Iterable[Dart]:
        return (self.dart(d) for d in range(len(self)))

    @cached_property
    def prev(self) -> tuple[int, ...]:
        p = [0] * len(self)
        for d, e in enumerate(self.next):
            p[e] = d
        return tuple(p)

    def phi(self, d: int) -> int:
        return self.next[self.twin[d]]

    @cached_property
    def rotations(self) -> dict[str, tuple[int, ...]]:
        """Counterclockwise dart cycle at each node, starting at its smallest dart."""
        out: dict[str, tuple[int, ...]] = {}
        seen = [False] * len(self)
        for d in range(len(self)):
            if seen[d]:
                continue
            cyc = []
            e = d
            while not seen[e]:
                seen[e] = True
                cyc.append(e)
                e = self.next[e]
            out.setdefault(self.origin[d], tuple(cyc))
        return out

    @property
    def nodes(self) -> list[str]:
        return sorted(self.kinds, key=natural_key)

    def is_vertex(self, node: str) -> bool:
        return self.kinds[node] is NodeKind.VERTEX

    @cached_property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        orbits = []
        seen = [False] * len(self)
        nxt, twin = self.next, self.twin
        for d in range(len(self)):
            if seen[d]:
                continue
            orbit = []
            e = d
            while not seen[e]:
                seen[e] = True
                orbit.append(e)
                e = nxt[twin[e]]
            orbits.append(tuple(orbit))
        return tuple(orbits)

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        """Index into :attr:`faces` for every dart."""
        out = [0] * len(self)
        for i, orbit in enumerate(self.faces):
            for d in orbit:
                out[d] = i
        return tuple(out)

    @property
    def n_nodes(self) -> int:
        return len(self.kinds)

    @property
    def n_edges(self) -> int:
        return len(self) // 2

    def components(self) -> list[set[str]]:
        """Connected components of the node set (isolated nodes included)."""
        adj: dict[str, set[str]] = {v: set() for v in self.kinds}
        for d in range(len(self)):
            adj[self.origin[d]].add(self.origin[self.twin[d]])
        comps = []
        seen: set[str] = set()
        for v in sorted(self.kinds, key=natural_key):
            if v in seen:
                continue
            stack, comp = [v], {v}
            seen.add(v)
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.add(w)
                        stack.append(w)
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1


def face_orbits(cmap: CombMap) -> list[tuple[int, ...]]:
    """Faces of ``cmap`` as cyclic dart sequences, in deterministic order."""
    return list(cmap.faces)


def euler_characteristic(cmap: CombMap) -> int:
    """``V - E + F`` of a connected map; raises on disconnected input."""
    if not cmap.is_connected():
        raise DisconnectedMapError(f"map has {len(cmap.components())} components")
    # an isolated node contributes one face of its own
    isolated = sum(1 for v in cmap.kinds if v not in cmap.rotations)
    return cmap.n_nodes - cmap.n_edges + len(cmap.faces) + isolated


def validate_local_structure(cmap: CombMap) -> list[Diagnostic]:
    """Check dart and crossing invariants; returns an empty list on success."""
    out: list[Diagnostic] = []
    n = len(cmap)
    for d in range(n):
        t = cmap.twin[d]
        if not 0 <= t < n or t == d or cmap.twin[t] != d:
            out.append(Diagnostic("TwinInvolution", cmap.names[d], "twin is not a fixed-point-free involution"))
    if sorted(cmap.next) != list(range(n)):
        out.append(Diagnostic("NextPermutation", "map", "next is not a permutation of the darts"))
        return out
    for d in range(n):
        if cmap.origin[cmap.next[d]] != cmap.origin[d]:
            out.append(Diagnostic("NextOrigin", cmap.names[d], "next leaves the origin node"))
    if out:
        return out
    counted: dict[str, int] = {}
    for node, cyc in cmap.rotations.items():
        counted[node] = counted.get(node, 0) + 1
        if node not in cmap.kinds:
            out.append(Diagnostic("UnknownNode", node, "dart origin is not a declared node"))
    for node, k in counted.items():
        if k > 1:
            out.append(Diagnostic("SplitRotation", node, f"darts form {k} separate rotation cycles"))

    for node, kind in sorted(cmap.kinds.items(), key=lambda kv: natural_key(kv[0])):
        if kind is not NodeKind.CROSSING:
            continue
        cyc = cmap.rotations.get(node, ())
        if len(cyc) != 4:
            out.append(Diagnostic("CrossingDegree", node, f"crossing has degree {len(cyc)}, expected 4"))
            continue
        a, b, c, e = (cmap.labels[d] for d in cyc)
        if len({a, b, c, e}) == 1:
            out.append(Diagnostic("SelfCrossing", node, f"edge {a} crosses itself"))
        elif a != c or b != e:
            out.append(
                Diagnostic("CrossingAlternation", node, f"passing edges ordered {a},{b},{c},{e} around the crossing")
            )
        elif a == b:
            out.append(Diagnostic("SelfCrossing", node, f"edge {a} crosses itself"))
    return out
