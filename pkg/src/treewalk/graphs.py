"""Weighted tree graphs, their matrix operators and walker initial states.

Vertices are numbered from 1 everywhere in the public interface. Family
builders always put the center vertex last.

Vertex layouts
--------------
Star ``S_n``: leaves ``1..n``, center ``n+1``.

Spider ``S_{b,L}``: branch ``j`` (0-based) holds ``j*L+1 .. j*L+L`` ordered
from the leaf inward, center ``b*L+1``::

    S_{3,2}:   1 - 2 \\
               3 - 4 - 7
               5 - 6 /

Cayley ``C_{3,m}``: each branch is a binary subtree numbered in post-order
(children before their parent), branch after branch, center last::

    C_{3,2}:  1,2 -> 3 ;  4,5 -> 6 ;  7,8 -> 9 ;  3,6,9 -> 10
    C_{3,3}:  1,2 -> 3 ;  4,5 -> 6 ;  3,6 -> 7 ;  (branch 2: 8..14) ... center 22

so the branch state ``(|1> + |2> + |4> + |5>) / 2`` lands on the
four leaves of the first branch.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidSpecError

FAMILIES = ("star", "spider", "cayley", "cycle")
ROLES = ("leaf", "internal", "center")

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class GraphFamilySpec:
    """Parameters of a graph family.

    ``branches`` is the number of branches for stars and spiders and the
    coordination number for Cayley trees; ``branch_length`` is the spider
    layer count or the Cayley level count. For a cycle, ``branches`` is the
    vertex count and ``off_hopping`` the uniform weight.
    """

    family: str
    branches: int
    branch_length: int = 1
    central_hopping: float = 1.0
    off_hopping: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidSpecError(
                f"unknown family {self.family!r}; expected one of {FAMILIES}"
            )
        if int(self.branches) != self.branches or self.branches < 1:
            raise InvalidSpecError(f"branches must be a positive integer, got {self.branches}")
        if int(self.branch_length) != self.branch_length or self.branch_length < 1:
            raise InvalidSpecError(
                f"branch_length must be a positive integer, got {self.branch_length}"
            )
        if self.family == "star" and self.branch_length != 1:
            raise InvalidSpecError("star graphs require branch_length = 1")
        if self.family == "cycle" and self.branches < 3:
            raise InvalidSpecError("cycle requires at least 3 vertices")
        for name in ("central_hopping", "off_hopping"):
            value = getattr(self, name)
            if value is None:
                continue
            if not math.isfinite(value) or value == 0:
                raise InvalidSpecError(f"{name} must be finite and nonzero, got {value}")

    @property
    def resolved_off_hopping(self) -> float:
        if self.off_hopping is not None:
            return float(self.off_hopping)
        if self.family == "cayley":
            return 1.0 / math.sqrt(self.branches - 1)
        return 1.0

    def build(self) -> "WeightedGraph":
        if self.family == "star":
            return build_star(self.branches, self.central_hopping)
        if self.family == "spider":
            return build_spider(
                self.branches, self.branch_length, self.central_hopping, self.resolved_off_hopping
            )
        if self.family == "cayley":
            return build_cayley(
                self.branches, self.branch_length, self.central_hopping, self.resolved_off_hopping
            )
        return build_cycle(self.branches, self.resolved_off_hopping)


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with real, nonzero edge weights.

    ``edges`` holds ``(i, j, weight)`` with ``1 <= i < j <= num_vertices``,
    one entry per unordered pair.
    """

    num_vertices: int
    edges: tuple[tuple[int, int, float], ...]
    labels: tuple[str, ...] | None = None
    spec: GraphFamilySpec | None = field(default=None, compare=False)

    def __post_init__(self):
        if int(self.num_vertices) != self.num_vertices or self.num_vertices < 1:
            raise InvalidSpecError(f"num_vertices must be positive, got {self.num_vertices}")
        canonical = {}
        for i, j, w in self.edges:
            if i == j:
                raise InvalidSpecError(f"self-loop at vertex {i}")
            if not (1 <= i <= self.num_vertices and 1 <= j <= self.num_vertices):
                raise InvalidSpecError(f"edge ({i}, {j}) out of range")
            w = float(w)
            if w == 0 or not math.isfinite(w):
                raise InvalidSpecError(f"edge ({i}, {j}) has invalid weight {w}")
            key = (min(i, j), max(i, j))
            if key in canonical:
                raise InvalidSpecError(f"duplicate edge {key}")
            canonical[key] = w
        edges = tuple((i, j, w) for (i, j), w in sorted(canonical.items()))
        object.__setattr__(self, "edges", edges)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.num_vertices:
                raise InvalidSpecError("labels must have one entry per vertex")
            bad = set(labels) - set(ROLES)
            if bad:
                raise InvalidSpecError(f"unknown vertex roles {sorted(bad)}")
            object.__setattr__(self, "labels", labels)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def center(self) -> int | None:
        """1-based index of the center vertex, if the graph has one."""
        if self.labels is None or "center" not in self.labels:
            return None
        return self.labels.index("center") + 1

    def leaves(self) -> list[int]:
        if self.labels is None:
            return []
        return [v + 1 for v, role in enumerate(self.labels) if role == "leaf"]

    def weight(self, i: int, j: int) -> float:
        key = (min(i, j), max(i, j))
        for a, b, w in self.edges:
            if (a, b) == key:
                return w
        return 0.0

    def neighbors(self, v: int) -> list[int]:
        out = []
        for a, b, _ in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)

    def is_connected(self) -> bool:
        seen = {1}
        queue = deque([1])
        while queue:
            v = queue.popleft()
            for u in self.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return len(seen) == self.num_vertices

    def is_tree(self) -> bool:
        return self.num_edges == self.num_vertices - 1 and self.is_connected()


def _check_hopping(name, value):
    if not math.isfinite(value) or value == 0:
        raise InvalidSpecError(f"{name} must be finite and nonzero, got {value}")


def build_star(n: int, J: float) -> WeightedGraph:
    """Star ``S_n``: leaves ``1..n`` joined to center ``n+1`` with weight ``J``."""
    if int(n) != n or n < 1:
        raise InvalidSpecError(f"star needs n >= 1 leaves, got {n}")
    _check_hopping("J", J)
    edges = tuple((k, n + 1, float(J)) for k in range(1, n + 1))
    labels = ("leaf",) * n + ("center",)
    return WeightedGraph(n + 1, edges, labels, GraphFamilySpec("star", n, 1, J))


def build_spider(b: int, L: int, J: float, off: float = 1.0) -> WeightedGraph:
    """Spider ``S_{b,L}``: ``b`` paths of ``L`` vertices hanging off one center.

    Edges inside a branch weigh ``off``; the edge from the innermost vertex
    of each branch to the center weighs ``J``.
    """
    if int(b) != b or b < 1:
        raise InvalidSpecError(f"spider needs b >= 1 branches, got {b}")
    if L not in (1, 2, 3):
        raise InvalidSpecError(f"spider branch length {L} unsupported (1, 2 or 3)")
    _check_hopping("J", J)
    _check_hopping("off", off)
    if L == 1:
        star = build_star(b, J)
        return WeightedGraph(
            star.num_vertices, star.edges, star.labels, GraphFamilySpec("spider", b, 1, J, off)
        )
    center = b * L + 1
    edges = []
    labels = []
    for j in range(b):
        base = j * L
        for k in range(1, L):
            edges.append((base + k, base + k + 1, float(off)))
        edges.append((base + L, center, float(J)))
        labels.extend(["leaf"] + ["internal"] * (L - 1))
    labels.append("center")
    return WeightedGraph(
        center, tuple(edges), tuple(labels), GraphFamilySpec("spider", b, L, J, off)
    )


def build_cayley(coord: int, levels: int, J: float, off: float | None = None) -> WeightedGraph:
    """Cayley tree ``C_{coord,levels}`` with center edges ``J`` and all others ``off``.

    Only ``coord = 3`` with ``levels`` in {2, 3} is supported. ``off``
    defaults to ``1/sqrt(coord - 1)``, the weight that maps the symmetric
    branch sector onto the spider ``S_{coord,levels}`` with unit hoppings.
    """
    if (coord, levels) not in ((3, 2), (3, 3)):
        raise InvalidSpecError(f"Cayley tree C_{{{coord},{levels}}} unsupported")
    if off is None:
        off = 1.0 / math.sqrt(coord - 1)
    _check_hopping("J", J)
    _check_hopping("off", off)
    arity = coord - 1
    edges = []
    labels = []
    counter = [0]

    def subtree(depth):
        # post-order: children first, then the node itself
        children = []
        if depth < levels:
            children = [subtree(depth + 1) for _ in range(arity)]
        counter[0] += 1
        node = counter[0]
        for child in children:
            edges.append((child, node, float(off)))
        labels.append("leaf" if depth == levels else "internal")
        return node

    roots = [subtree(1) for _ in range(coord)]
    center = counter[0] + 1
    for r in roots:
        edges.append((r, center, float(J)))
    labels.append("center")
    return WeightedGraph(
        center, tuple(edges), tuple(labels), GraphFamilySpec("cayley", coord, levels, J, off)
    )


def build_cycle(k: int, w: float = 1.0) -> WeightedGraph:
    """Cycle on ``k`` vertices with uniform weight ``w`` (a regular-graph fixture)."""
    if int(k) != k or k < 3:
        raise InvalidSpecError(f"cycle needs k >= 3 vertices, got {k}")
    _check_hopping("w", w)
    edges = tuple((i, i % k + 1, float(w)) for i in range(1, k + 1))
    return WeightedGraph(k, edges, None, GraphFamilySpec("cycle", k, 1, w, w))


def adjacency(g: WeightedGraph) -> np.ndarray:
    A = np.zeros((g.num_vertices, g.num_vertices))
    for i, j, w in g.edges:
        A[i - 1, j - 1] = w
        A[j - 1, i - 1] = w
    return A


def degree_matrix(g: WeightedGraph) -> np.ndarray:
    return np.diag(adjacency(g).sum(axis=1))


def laplacian(g: WeightedGraph) -> np.ndarray:
    """Graph Laplacian with the sign convention ``L = A - D``.

    This is the negative of the more common ``D - A``; the two generate the
    same probabilities up to time reversal.
    """
    A = adjacency(g)
    return A - np.diag(A.sum(axis=1))


def generator_matrix(g: WeightedGraph, generator: str) -> np.ndarray:
    if generator == "adjacency":
        return adjacency(g)
    if generator == "laplacian":
        return laplacian(g)
    raise InvalidSpecError(f"unknown generator {generator!r}")


# -- initial states ---------------------------------------------------------


def _frozen(vec):
    vec = np.asarray(vec, dtype=complex)
    vec.setflags(write=False)
    return vec


def basis_state(g: WeightedGraph, v: int) -> np.ndarray:
    if not 1 <= v <= g.num_vertices:
        raise InvalidSpecError(f"vertex {v} outside 1..{g.num_vertices}")
    psi = np.zeros(g.num_vertices, dtype=complex)
    psi[v - 1] = 1.0
    return _frozen(psi)


def leaf_superposition(g: WeightedGraph, coefficients) -> np.ndarray:
    """State supported on leaves, from ``(vertex, amplitude)`` pairs.

    The amplitudes must already be normalized; they are not rescaled.
    """
    leaves = set(g.leaves())
    psi = np.zeros(g.num_vertices, dtype=complex)
    for v, a in coefficients:
        if v not in leaves:
            raise InvalidSpecError(f"vertex {v} is not a leaf")
        psi[v - 1] += a
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > _NORM_TOL:
        raise InvalidSpecError(f"amplitudes have squared norm {norm2!r}, expected 1")
    return _frozen(psi)


def balanced_leaf_state(g: WeightedGraph, leaves=None) -> np.ndarray:
    leaves = g.leaves() if leaves is None else list(leaves)
    if not leaves:
        raise InvalidSpecError("graph has no labelled leaves")
    amp = 1.0 / math.sqrt(len(leaves))
    return leaf_superposition(g, [(v, amp) for v in leaves])


def phased_leaf_state(g: WeightedGraph) -> np.ndarray:
    """Leaf state with amplitudes ``exp(2 pi i k / b) / sqrt(b)`` on branch ``k``'s leaf."""
    spec = g.spec
    if spec is None or spec.family not in ("star", "spider"):
        raise InvalidSpecError("phased leaf state needs a star or spider graph")
    b, L = spec.branches, spec.branch_length
    psi = np.zeros(g.num_vertices, dtype=complex)
    for k in range(b):
        psi[k * L] = np.exp(2j * np.pi * k / b) / math.sqrt(b)
    return _frozen(psi)


def cayley_branch_state(g: WeightedGraph) -> np.ndarray:
    """Equal-amplitude superposition over the leaves of the first Cayley branch."""
    spec = g.spec
    if spec is None or spec.family != "cayley":
        raise InvalidSpecError("cayley_branch_state needs a Cayley tree")
    branch_size = (g.num_vertices - 1) // spec.branches
    leaves = [v for v in g.leaves() if v <= branch_size]
    return balanced_leaf_state(g, leaves)


def validate_state(psi, num_vertices: int, tol: float = _NORM_TOL) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (num_vertices,):
        raise InvalidSpecError(
            f"state has shape {psi.shape}, expected ({num_vertices},)"
        )
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > tol:
        raise InvalidSpecError(f"state has squared norm {norm2!r}, expected 1")
    return psi


# -- export -----------------------------------------------------------------


def to_dot(g: WeightedGraph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v in range(1, g.num_vertices + 1):
        role = g.labels[v - 1] if g.labels else "internal"
        lines.append(f'  {v} [role="{role}"];')
    for i, j, w in g.edges:
        lines.append(f'  {i} -- {j} [weight="{w:.17g}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(g: WeightedGraph) -> str:
    payload = {
        "num_vertices": g.num_vertices,
        "edges": [[i, j, w] for i, j, w in g.edges],
    }
    if g.labels is not None:
        payload["labels"] = list(g.labels)
    return json.dumps(payload)


def from_json(text: str) -> WeightedGraph:
    """Inverse of :func:`to_json`; lines starting with ``#`` are ignored."""
    body = "\n".join(line for line in text.splitlines() if not line.lstrip().startswith("#"))
    data = json.loads(body)
    edges = tuple((int(i), int(j), float(w)) for i, j, w in data["edges"])
    labels = tuple(data["labels"]) if data.get("labels") is not None else None
    return WeightedGraph(int(data["num_vertices"]), edges, labels)
