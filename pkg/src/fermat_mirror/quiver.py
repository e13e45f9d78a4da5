"""The three quiver families: Dynkin ``A_{n-1}``, its ``n``-fold tensor power, and
the Beilinson quiver with ``n`` labelled arrows between consecutive vertices.

Tensor vertices are ``n``-tuples over ``range(n)``; linear vertices are ints.
Arrow labels are 1-based: a tensor arrow incrementing coordinate ``j`` (1-based)
carries label ``j``, matching the Beilinson labels ``1..n``.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import NamedTuple, Union

from .errors import InvalidParameter, NotAdjacent, NotFound, ResourceLimit

DYNKIN_A = "dynkinA"
TENSOR = "tensor"
BEILINSON = "beilinson"
KINDS = (DYNKIN_A, TENSOR, BEILINSON)

DEFAULT_MAX_N = 6

Vertex = Union[int, tuple]


class Arrow(NamedTuple):
    source: Vertex
    target: Vertex
    label: int

    def key(self) -> str:
        return f"{vertex_key(self.source)}>{vertex_key(self.target)}#{self.label}"


Path = tuple  # tuple[Arrow, ...] in the order the arrows are traversed


class Relation(NamedTuple):
    """Commutativity relation ``left == right`` between two length-2 paths."""

    left: Path
    right: Path

    @property
    def labels(self) -> tuple[int, int]:
        """Labels of the left path in traversal order."""
        return (self.left[0].label, self.left[1].label)

    def unordered(self) -> frozenset:
        return frozenset((self.left, self.right))


def vertex_key(v: Vertex) -> str:
    if isinstance(v, tuple):
        return "".join(str(c) for c in v)
    return str(v)


class Quiver:
    """An immutable quiver of one of the three families.

    Vertices, arrows and relations are kept in canonical lexicographic order.
    Two quivers compare equal iff they have the same kind and ``n``.
    """

    def __init__(self, kind: str, n: int, vertices, arrows, relations):
        self.kind = kind
        self.n = n
        self.vertices: tuple = tuple(vertices)
        self.arrows: tuple[Arrow, ...] = tuple(sorted(arrows))
        self.relations: tuple[Relation, ...] = tuple(sorted(relations))
        self._vertex_set = frozenset(self.vertices)
        self._out: dict = {v: [] for v in self.vertices}
        self._in: dict = {v: [] for v in self.vertices}
        self._between: dict = {}
        for a in self.arrows:
            self._out[a.source].append(a)
            self._in[a.target].append(a)
            self._between.setdefault((a.source, a.target), []).append(a)
        self._by_key = {vertex_key(v): v for v in self.vertices}
        self._by_index: dict = {}
        for v in self.vertices:
            self._by_index.setdefault(self.index(v), []).append(v)

    def __repr__(self):
        return f"Quiver({self.kind!r}, n={self.n})"

    def __eq__(self, other):
        return isinstance(other, Quiver) and (self.kind, self.n) == (other.kind, other.n)

    def __hash__(self):
        return hash((self.kind, self.n))

    def __contains__(self, v) -> bool:
        return v in self._vertex_set

    @property
    def max_index(self) -> int:
        return self.n * (self.n - 1) if self.kind == TENSOR else self.n - 1

    def index(self, v: Vertex) -> int:
        return sum(v) if self.kind == TENSOR else v

    def out_arrows(self, v: Vertex) -> list[Arrow]:
        return self._out[v]

    def in_arrows(self, v: Vertex) -> list[Arrow]:
        return self._in[v]

    def arrows_between(self, a: Vertex, b: Vertex) -> list[Arrow]:
        return self._between.get((a, b), [])

    def vertices_of_index(self, k: int) -> list:
        return self._by_index.get(k, [])

    def vertex_from_key(self, key: str) -> Vertex:
        try:
            return self._by_key[key]
        except KeyError:
            raise NotFound(f"no vertex {key!r} in {self!r}") from None

    def arrow(self, source: Vertex, target: Vertex, label: int) -> Arrow:
        a = Arrow(source, target, label)
        if a not in self.arrows_between(source, target):
            raise NotFound(f"no arrow {a.key()} in {self!r}")
        return a

    def arrow_from_key(self, key: str) -> Arrow:
        try:
            st, label = key.split("#")
            s, t = st.split(">")
            return self.arrow(self.vertex_from_key(s), self.vertex_from_key(t), int(label))
        except ValueError:
            raise InvalidParameter(f"malformed arrow key {key!r}") from None

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n}


def _check_n(n):
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise InvalidParameter(f"n must be an integer >= 2, got {n!r}")


@lru_cache(maxsize=None)
def build_dynkin_A(n: int) -> Quiver:
    """Linear quiver ``0 -> 1 -> ... -> n-1`` with no relations."""
    _check_n(n)
    return Quiver(DYNKIN_A, n, range(n), [Arrow(i, i + 1, 1) for i in range(n - 1)], [])


def build_tensor_power(n: int, max_n: int = DEFAULT_MAX_N) -> Quiver:
    """The ``n``-fold tensor power of ``A_{n-1}`` with all commuting squares.

    ``n**n`` vertices, so ``n`` is capped at ``max_n``.
    """
    _check_n(n)
    if n > max_n:
        raise ResourceLimit(f"tensor power for n={n} exceeds max_n={max_n} ({n**n} vertices)")
    return _tensor_power(n)


def _step(v: tuple, j: int) -> tuple:
    """Increment the 1-based coordinate ``j``."""
    return v[: j - 1] + (v[j - 1] + 1,) + v[j:]


@lru_cache(maxsize=None)
def _tensor_power(n: int) -> Quiver:
    vertices = list(itertools.product(range(n), repeat=n))
    arrows, relations = [], []
    for v in vertices:
        open_coords = [j for j in range(1, n + 1) if v[j - 1] < n - 1]
        for j in open_coords:
            arrows.append(Arrow(v, _step(v, j), j))
        for j, k in itertools.combinations(open_coords, 2):
            vj, vk = _step(v, j), _step(v, k)
            top = _step(vj, k)
            relations.append(Relation(
                (Arrow(v, vj, j), Arrow(vj, top, k)),
                (Arrow(v, vk, k), Arrow(vk, top, j)),
            ))
    return Quiver(TENSOR, n, vertices, arrows, relations)


@lru_cache(maxsize=None)
def build_beilinson(n: int) -> Quiver:
    """Vertices ``0..n-1`` with arrows ``i -s-> i+1`` for ``s = 1..n``.

    Relations ``E^s_{i,i+1} E^{s'}_{i-1,i} = E^{s'}_{i,i+1} E^s_{i-1,i}``, one per
    level ``i`` and unordered label pair ``s < s'``.
    """
    _check_n(n)
    arrows = [Arrow(i, i + 1, s) for i in range(n - 1) for s in range(1, n + 1)]
    relations = []
    for i in range(1, n - 1):
        for s, t in itertools.combinations(range(1, n + 1), 2):
            relations.append(Relation(
                (Arrow(i - 1, i, t), Arrow(i, i + 1, s)),
                (Arrow(i - 1, i, s), Arrow(i, i + 1, t)),
            ))
    return Quiver(BEILINSON, n, range(n), arrows, relations)


def build(kind: str, n: int, max_n: int = DEFAULT_MAX_N) -> Quiver:
    if kind == TENSOR:
        return build_tensor_power(n, max_n=max_n)
    if kind == BEILINSON:
        return build_beilinson(n)
    if kind == DYNKIN_A:
        return build_dynkin_A(n)
    raise InvalidParameter(f"unknown quiver kind {kind!r}; expected one of {KINDS}")


def quiver_from_json(data: dict, max_n: int = DEFAULT_MAX_N) -> Quiver:
    try:
        return build(data["kind"], data["n"], max_n=max_n)
    except (KeyError, TypeError):
        raise InvalidParameter(f"quiver JSON needs 'kind' and 'n': {data!r}") from None


def index_of(q: Quiver, v: Vertex) -> int:
    """Coordinate sum for tensor vertices, the vertex number otherwise."""
    if v not in q:
        raise NotFound(f"vertex {v!r} not in {q!r}")
    return q.index(v)


def arrow_label(q: Quiver, a: Vertex, b: Vertex) -> int:
    """Label of the unique arrow ``a -> b``, or 0 when ``a == b``."""
    for v in (a, b):
        if v not in q:
            raise NotFound(f"vertex {v!r} not in {q!r}")
    if a == b:
        return 0
    found = q.arrows_between(a, b)
    if not found:
        raise NotAdjacent(f"no arrow {vertex_key(a)} -> {vertex_key(b)}")
    if len(found) > 1:
        raise NotAdjacent(
            f"{len(found)} parallel arrows {vertex_key(a)} -> {vertex_key(b)}; label is ambiguous"
        )
    return found[0].label


def to_dot(q: Quiver) -> str:
    """Graphviz export with vertices named by their joined coordinates."""
    lines = [f"digraph {q.kind}_{q.n} {{"]
    for v in q.vertices:
        lines.append(f'  "{vertex_key(v)}";')
    for a in q.arrows:
        lines.append(f'  "{vertex_key(a.source)}" -> "{vertex_key(a.target)}" [label={a.label}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
