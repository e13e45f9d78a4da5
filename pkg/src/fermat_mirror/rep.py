"""Quiver representations with relations over an exact or floating field."""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .errors import (
    Incompatible,
    InvalidParameter,
    MalformedRepresentation,
    NotFound,
    ResourceLimit,
    UnsupportedDimension,
    ZeroPoint,
)
from .fields import QI, Field, field_from_tag
from .quiver import BEILINSON, Arrow, Quiver, Relation, quiver_from_json, vertex_key

DEFAULT_MAX_SUBREPS = 1 << 18


class Representation:
    """Dimension per vertex plus a ``dims[target] x dims[source]`` matrix per arrow.

    Only arrows whose endpoints both have positive dimension carry a stored
    matrix; missing ones default to zero. Shapes are checked on construction.
    """

    def __init__(self, quiver: Quiver, dims: dict, mats: dict | None = None, field: Field = QI):
        self.quiver = quiver
        self.field = field
        self.dims = {}
        for v, d in dims.items():
            if v not in quiver:
                raise NotFound(f"vertex {v!r} not in {quiver!r}")
            if not isinstance(d, (int, np.integer)) or d < 0:
                raise MalformedRepresentation(f"bad dimension {d!r} at {vertex_key(v)}")
            if d:
                self.dims[v] = int(d)
        self.mats: dict[Arrow, np.ndarray] = {}
        for a, m in (mats or {}).items():
            if a not in quiver.arrows_between(a.source, a.target):
                raise NotFound(f"arrow {a.key()} not in {quiver!r}")
            m = np.asarray(m, dtype=object)
            shape = (self.dim(a.target), self.dim(a.source))
            if m.shape != shape:
                raise MalformedRepresentation(
                    f"matrix on {a.key()} has shape {m.shape}, expected {shape}"
                )
            if 0 not in shape:
                self.mats[a] = m
        for v in self.dims:
            for a in quiver.out_arrows(v):
                if a not in self.mats and self.dim(a.target):
                    self.mats[a] = linalg.zeros(self.dim(a.target), self.dim(v), field)

    def dim(self, v) -> int:
        return self.dims.get(v, 0)

    def mat(self, a: Arrow) -> np.ndarray:
        m = self.mats.get(a)
        if m is None:
            return linalg.zeros(self.dim(a.target), self.dim(a.source), self.field)
        return m

    def path_product(self, path) -> np.ndarray:
        out = self.mat(path[0])
        for a in path[1:]:
            out = linalg.matmul(self.mat(a), out, self.field)
        return out

    @property
    def support(self) -> list:
        return [v for v in self.quiver.vertices if v in self.dims]

    def dim_vector(self) -> tuple:
        return tuple(self.dim(v) for v in self.quiver.vertices)

    def is_zero(self) -> bool:
        return not self.dims

    def is_thin(self) -> bool:
        return all(d <= 1 for d in self.dims.values())

    def nonzero_arrows(self) -> list[Arrow]:
        return [a for a, m in self.mats.items() if not linalg.is_zero(m, self.field)]

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        if self.quiver != other.quiver or self.dims != other.dims:
            return False
        f = self.field if self.field.exact else other.field
        return all(linalg.mat_eq(m, other.mat(a), f) for a, m in self.mats.items())

    __hash__ = None

    def __repr__(self):
        dims = ",".join(f"{vertex_key(v)}:{d}" for v, d in sorted(self.dims.items()))
        return f"Representation({self.quiver!r}, dims={{{dims}}}, field={self.field.tag})"


@dataclass
class Violation:
    relation: Relation
    left: np.ndarray
    right: np.ndarray

    @property
    def labels(self) -> tuple[int, int]:
        return self.relation.labels

    def describe(self) -> str:
        r = self.relation
        return (f"relation at {vertex_key(r.left[0].source)} with labels "
                f"{r.left[0].label},{r.left[1].label} fails")


@dataclass
class ValidationReport:
    violations: list[Violation] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [
                {
                    "source": vertex_key(v.relation.left[0].source),
                    "target": vertex_key(v.relation.left[1].target),
                    "labels": sorted(v.labels),
                }
                for v in self.violations
            ],
        }


def validate(rep: Representation) -> ValidationReport:
    """Check every commuting relation of the quiver on ``rep``."""
    for a, m in rep.mats.items():
        if m.shape != (rep.dim(a.target), rep.dim(a.source)):
            raise MalformedRepresentation(f"matrix on {a.key()} has shape {m.shape}")
    report = ValidationReport()
    for rel in rep.quiver.relations:
        if not rep.dim(rel.left[0].source) or not rep.dim(rel.left[1].target):
            continue
        left, right = rep.path_product(rel.left), rep.path_product(rel.right)
        if not linalg.mat_eq(left, right, rep.field):
            report.violations.append(Violation(rel, left, right))
    return report


def zero_rep(q: Quiver, field: Field = QI) -> Representation:
    return Representation(q, {}, {}, field)


def simple_at(q: Quiver, v, field: Field = QI) -> Representation:
    if v not in q:
        raise NotFound(f"vertex {v!r} not in {q!r}")
    return Representation(q, {v: 1}, {}, field)


def thin_rep_from_point(q: Quiver, x, field: Field = QI) -> Representation:
    """Thin full-support Beilinson rep whose level-``i`` arrow ``s`` acts by ``x[s-1]``."""
    if q.kind != BEILINSON:
        raise InvalidParameter("thin_rep_from_point needs a Beilinson quiver")
    xs = [field.coerce(c) for c in x]
    if len(xs) != q.n:
        raise InvalidParameter(f"point needs {q.n} coordinates, got {len(xs)}")
    if all(field.is_zero(c) for c in xs):
        raise ZeroPoint("the zero vector is not a projective point")
    mats = {a: linalg.matrix([[xs[a.label - 1]]], field) for a in q.arrows}
    return Representation(q, {v: 1 for v in q.vertices}, mats, field)


def thin_rep_from_levels(q: Quiver, levels, field: Field = QI) -> Representation:
    """Thin full-support Beilinson rep with an explicit vector per level."""
    if q.kind != BEILINSON or len(levels) != q.n - 1:
        raise InvalidParameter(f"need {q.n - 1} level vectors on a Beilinson quiver")
    mats = {}
    for i, vec in enumerate(levels):
        if len(vec) != q.n:
            raise InvalidParameter(f"level {i} needs {q.n} entries")
        for s, c in enumerate(vec, start=1):
            mats[Arrow(i, i + 1, s)] = linalg.matrix([[c]], field)
    return Representation(q, {v: 1 for v in q.vertices}, mats, field)


def level_vector(rep: Representation, i: int) -> list:
    """Entries ``(E^s_{i,i+1})_s`` of a thin Beilinson rep."""
    return [rep.mat(Arrow(i, i + 1, s))[0, 0] if rep.dim(i) and rep.dim(i + 1)
            else rep.field.zero for s in range(1, rep.quiver.n + 1)]


@dataclass(frozen=True)
class Subrep:
    """Subrepresentation of a thin rep, identified by its support."""

    support: frozenset

    def sorted_support(self) -> list:
        return sorted(self.support)

    def __repr__(self):
        return "Subrep({" + ",".join(vertex_key(v) for v in self.sorted_support()) + "})"

    def to_json(self) -> list[str]:
        return [vertex_key(v) for v in self.sorted_support()]


def _require_thin(rep: Representation):
    if not rep.is_thin():
        raise UnsupportedDimension("only thin representations are supported")


def subreps_thin(rep: Representation, max_count: int = DEFAULT_MAX_SUBREPS) -> list[Subrep]:
    """All nonempty proper subsets of the support closed under nonzero arrows.

    Supports are generated as up-sets, deciding vertices from the highest index
    down so a vertex is only admitted once all its successors are.
    """
    _require_thin(rep)
    support = sorted(rep.support, key=lambda v: (-rep.quiver.index(v), v))
    succ = {v: set() for v in support}
    for a in rep.nonzero_arrows():
        succ[a.source].add(a.target)
    found: list[frozenset] = []
    chosen: set = set()

    def walk(k: int):
        if k == len(support):
            if 0 < len(chosen) < len(support):
                if len(found) >= max_count:
                    raise ResourceLimit(f"more than {max_count} subrepresentations")
                found.append(frozenset(chosen))
            return
        v = support[k]
        walk(k + 1)
        if succ[v] <= chosen:
            chosen.add(v)
            walk(k + 1)
            chosen.discard(v)

    walk(0)
    found.sort(key=lambda s: (len(s), sorted(s)))
    return [Subrep(s) for s in found]


def _components(rep: Representation) -> list[list]:
    """Connected components of the support under nonzero arrows (undirected)."""
    adj = {v: [] for v in rep.support}
    for a in rep.nonzero_arrows():
        adj[a.source].append(a.target)
        adj[a.target].append(a.source)
    seen, comps = set(), []
    for v in rep.support:
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_indecomposable_thin(rep: Representation) -> bool:
    _require_thin(rep)
    return not rep.is_zero() and len(_components(rep)) == 1


def is_isomorphic_thin(a: Representation, b: Representation) -> bool:
    """Isomorphism of thin reps under per-vertex nonzero rescaling.

    On each connected component the scalars are propagated by a traversal and
    every arrow is then rechecked.
    """
    if a.quiver != b.quiver:
        raise Incompatible("representations live on different quivers")
    _require_thin(a)
    _require_thin(b)
    if a.dims != b.dims:
        return False
    f = a.field if not a.field.exact else b.field
    za = {x for x in a.nonzero_arrows()}
    zb = {x for x in b.nonzero_arrows()}
    if za != zb:
        return False
    scale = {}
    for comp in _components(a):
        scale[comp[0]] = f.one
        stack = [comp[0]]
        while stack:
            u = stack.pop()
            for arr in a.quiver.out_arrows(u):
                if arr in za and arr.target not in scale:
                    # c_t * a = b * c_u
                    scale[arr.target] = b.mat(arr)[0, 0] * scale[u] / a.mat(arr)[0, 0]
                    stack.append(arr.target)
            for arr in a.quiver.in_arrows(u):
                if arr in za and arr.source not in scale:
                    scale[arr.source] = a.mat(arr)[0, 0] * scale[u] / b.mat(arr)[0, 0]
                    stack.append(arr.source)
    for arr in za:
        lhs = scale[arr.target] * a.mat(arr)[0, 0]
        rhs = b.mat(arr)[0, 0] * scale[arr.source]
        if not f.eq(lhs, rhs):
            return False
    return True


def direct_sum(a: Representation, b: Representation) -> Representation:
    if a.quiver != b.quiver:
        raise Incompatible("representations live on different quivers")
    if a.field.tag != b.field.tag:
        raise Incompatible(f"fields differ: {a.field.tag} vs {b.field.tag}")
    f = a.field
    q = a.quiver
    dims = {v: a.dim(v) + b.dim(v) for v in set(a.dims) | set(b.dims)}
    mats = {}
    for arr in set(a.mats) | set(b.mats) | {x for v in dims for x in q.out_arrows(v)}:
        rows, cols = dims.get(arr.target, 0), dims.get(arr.source, 0)
        if not rows or not cols:
            continue
        m = linalg.zeros(rows, cols, f)
        ma, mb = a.mat(arr), b.mat(arr)
        m[: ma.shape[0], : ma.shape[1]] = ma
        m[ma.shape[0]:, ma.shape[1]:] = mb
        mats[arr] = m
    return Representation(q, dims, mats, f)


@dataclass
class Morphism:
    """Family of matrices ``f_v : source_v -> target_v``."""

    source: Representation
    target: Representation
    maps: dict

    def at(self, v) -> np.ndarray:
        m = self.maps.get(v)
        if m is None:
            return linalg.zeros(self.target.dim(v), self.source.dim(v), self.source.field)
        return m

    def is_morphism(self) -> bool:
        f = self.source.field
        for v in set(self.source.dims) | set(self.target.dims):
            if self.at(v).shape != (self.target.dim(v), self.source.dim(v)):
                return False
        for arr in self.source.quiver.arrows:
            lhs = linalg.matmul(self.at(arr.target), self.source.mat(arr), f)
            rhs = linalg.matmul(self.target.mat(arr), self.at(arr.source), f)
            if not linalg.mat_eq(lhs, rhs, f):
                return False
        return True

    def is_isomorphism(self) -> bool:
        if not self.is_morphism():
            return False
        f = self.source.field
        return all(linalg.is_invertible(self.at(v), f)
                   for v in set(self.source.dims) | set(self.target.dims))


# random sampling ---------------------------------------------------------

def random_scalar(field: Field, rng: random.Random, bound: int = 2):
    re = rng.randint(-bound, bound)
    if field.tag == "Q":
        return field.coerce(re)
    return field.coerce((re, rng.randint(-bound, bound)))


def random_matrix(rows: int, cols: int, field: Field, rng: random.Random, bound: int = 2):
    return linalg.matrix([[random_scalar(field, rng, bound) for _ in range(cols)]
                          for _ in range(rows)], field, shape=(rows, cols))


def random_beilinson_rep(n: int, dims, field: Field = QI, rng: random.Random | None = None,
                         bound: int = 2) -> Representation:
    """Random rep of the Beilinson quiver satisfying its commuting relations.

    Level 0 is drawn freely; each later level is a random small-integer
    combination of a nullspace basis of the commuting constraints against the
    previous level.
    """
    from .quiver import build_beilinson

    if not field.exact:
        raise InvalidParameter("random Beilinson reps are generated over exact fields")
    rng = rng or random.Random(0)
    q = build_beilinson(n)
    dims = list(dims)
    if len(dims) != n:
        raise InvalidParameter(f"need {n} dimensions")
    mats = {}
    prev = None
    for i in range(n - 1):
        r, c = dims[i + 1], dims[i]
        if r == 0 or c == 0:
            prev = None
            continue
        if prev is None:
            cur = [random_matrix(r, c, field, rng, bound) for _ in range(n)]
        else:
            cur = _solve_level(prev, r, c, n, field, rng, bound)
        for s in range(1, n + 1):
            mats[Arrow(i, i + 1, s)] = cur[s - 1]
        prev = cur
    return Representation(q, dict(enumerate(dims)), mats, field)


def _solve_level(prev, r, c, n, field, rng, bound):
    """Random ``X^s`` (``r x c``) with ``X^s A^t = X^t A^s`` for all ``s < t``."""
    p = prev[0].shape[1]
    nvar = n * r * c

    def var(s, i, k):
        return (s * r + i) * c + k

    eqs = []
    for s in range(n):
        for t in range(s + 1, n):
            for i in range(r):
                for j in range(p):
                    row = [field.zero] * nvar
                    for k in range(c):
                        row[var(s, i, k)] += prev[t][k, j]
                        row[var(t, i, k)] -= prev[s][k, j]
                    eqs.append(row)
    basis = linalg.nullspace(linalg.matrix(eqs, field), field) if eqs else \
        [linalg.identity(nvar, field)[:, k].copy() for k in range(nvar)]
    sol = np.empty(nvar, dtype=object)
    sol.fill(field.zero)
    for b in basis:
        coef = field.coerce(rng.randint(-bound, bound))
        sol = sol + coef * b
    out = []
    for s in range(n):
        m = linalg.zeros(r, c, field)
        for i in range(r):
            for k in range(c):
                m[i, k] = sol[var(s, i, k)]
        out.append(m)
    return out


# JSON --------------------------------------------------------------------

def matrix_to_json(m: np.ndarray, field: Field) -> list:
    """Row-major flat list of ``[re, im]`` pairs; the shape comes from ``dims``."""
    return [field.to_json(x) for x in m.flat]


def matrix_from_json(data, rows: int, cols: int, field: Field) -> np.ndarray:
    entries = [field.from_json(x) for x in data]
    if len(entries) != rows * cols:
        raise MalformedRepresentation(
            f"matrix has {len(entries)} entries, expected {rows}x{cols}"
        )
    if rows * cols == 0:
        return np.empty((rows, cols), dtype=object)
    return linalg.matrix([entries[k * cols:(k + 1) * cols] for k in range(rows)], field)


def rep_to_json(rep: Representation) -> dict:
    return {
        "quiver": rep.quiver.to_json(),
        "field": rep.field.tag,
        "dims": {vertex_key(v): rep.dims[v] for v in rep.support},
        "mats": {a.key(): matrix_to_json(rep.mats[a], rep.field) for a in sorted(rep.mats)},
    }


def rep_from_json(data: dict, eps: float | None = None, max_n: int | None = None) -> Representation:
    try:
        q = quiver_from_json(data["quiver"], **({"max_n": max_n} if max_n else {}))
        fld = field_from_tag(data.get("field", "Qi"), **({"eps": eps} if eps else {}))
        dims = {q.vertex_from_key(k): int(d) for k, d in data.get("dims", {}).items()}
        mats = {}
        for key, entries in data.get("mats", {}).items():
            a = q.arrow_from_key(key)
            mats[a] = matrix_from_json(entries, dims.get(a.target, 0), dims.get(a.source, 0), fld)
    except (KeyError, TypeError) as exc:
        raise MalformedRepresentation(f"bad representation JSON: {exc}") from None
    return Representation(q, dims, mats, fld)
