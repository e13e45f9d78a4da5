"""Framed representations of the tensor-power quiver and the equivalence with
Beilinson-quiver representations.

A framing is a coherent family of isomorphisms ``phi[a, b] : E_a -> E_b``
between vertices of equal index. It is stored relative to one basepoint per
index (the lexicographically least vertex) as ``phi[v, base]`` and extended by
composition; explicit pairwise overrides are allowed so that incoherent data
can be represented and rejected.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg
from .errors import InvalidParameter, MalformedFraming, UnsupportedSupport
from .fields import QI, Field
from .quiver import BEILINSON, TENSOR, Arrow, Quiver, build_beilinson, build_tensor_power, vertex_key
from .rep import Morphism, Representation, random_beilinson_rep, random_matrix, rep_from_json, \
    rep_to_json, matrix_from_json, matrix_to_json, validate


def default_basepoints(q: Quiver, indices=None) -> list:
    """Lexicographically least vertex of each index (``0..n-1`` by default)."""
    indices = range(q.n) if indices is None else indices
    return [min(q.vertices_of_index(k)) for k in indices]


class FramingData:
    """Framing isomorphisms over a representation's support.

    ``relative[v]`` is ``phi[v, base]`` with ``base`` the default basepoint of
    ``v``'s index; absent entries mean identity. ``overrides`` pins individual
    ordered pairs.
    """

    def __init__(self, rep: Representation, relative: dict | None = None,
                 overrides: dict | None = None):
        self.rep = rep
        self.field = rep.field
        self.relative = dict(relative or {})
        self.overrides = dict(overrides or {})
        self._inv: dict = {}
        self._phi: dict = {}
        q = rep.quiver
        self._base = {k: min(q.vertices_of_index(k)) for k in {q.index(v) for v in rep.support}}

    def base(self, v):
        return self._base[self.rep.quiver.index(v)]

    def to_base(self, v) -> np.ndarray:
        m = self.relative.get(v)
        return linalg.identity(self.rep.dim(v), self.field) if m is None else m

    def from_base(self, v) -> np.ndarray:
        if v not in self._inv:
            try:
                self._inv[v] = linalg.inverse(self.to_base(v), self.field)
            except ZeroDivisionError:
                raise MalformedFraming(f"framing at {vertex_key(v)} is not invertible") from None
        return self._inv[v]

    def phi(self, a, b) -> np.ndarray:
        """``phi[a, b] : E_a -> E_b`` for vertices of equal index."""
        q = self.rep.quiver
        if q.index(a) != q.index(b):
            raise InvalidParameter(f"{vertex_key(a)} and {vertex_key(b)} have different indices")
        if (a, b) in self.overrides:
            return self.overrides[(a, b)]
        key = (a, b)
        if key not in self._phi:
            if not self.rep.dim(a) and not self.rep.dim(b):
                m = np.empty((0, 0), dtype=object)
            elif a == b:
                m = linalg.identity(self.rep.dim(a), self.field)
            else:
                m = linalg.matmul(self.from_base(b), self.to_base(a), self.field)
            self._phi[key] = m
        return self._phi[key]


@dataclass
class FramedRep:
    rep: Representation
    framing: FramingData

    @property
    def quiver(self) -> Quiver:
        return self.rep.quiver

    @property
    def field(self) -> Field:
        return self.rep.field

    def phi(self, a, b):
        return self.framing.phi(a, b)


def framed(rep: Representation, relative: dict | None = None, overrides: dict | None = None) -> FramedRep:
    return FramedRep(rep, FramingData(rep, relative, overrides))


@dataclass
class FramedReport:
    violations: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": self.violations}


def _index_classes(fr: FramedRep) -> dict:
    q = fr.quiver
    classes: dict = {}
    for v in fr.rep.support:
        classes.setdefault(q.index(v), []).append(v)
    return classes


def _check_shapes(fr: FramedRep, classes: dict):
    q, rep = fr.quiver, fr.rep
    for k, verts in classes.items():
        full = q.vertices_of_index(k)
        d = rep.dim(verts[0])
        if len(verts) != len(full) or any(rep.dim(v) != d for v in verts):
            raise MalformedFraming(f"vertices of index {k} do not all have the same dimension")
    entries = [((v, v), m) for v, m in fr.framing.relative.items()]
    entries += list(fr.framing.overrides.items())
    for (a, b), m in entries:
        d = rep.dim(a)
        if rep.dim(b) != d or m.shape != (d, d):
            raise MalformedFraming(
                f"framing matrix at {vertex_key(a)},{vertex_key(b)} has shape {m.shape}, expected {(d, d)}")
        if d and not linalg.is_invertible(m, fr.field):
            raise MalformedFraming(f"framing matrix at {vertex_key(a)},{vertex_key(b)} is not invertible")


def check_framed(fr: FramedRep, exhaustive: bool = False) -> FramedReport:
    """Check the relations, the framing cocycle and compatibility with arrows.

    The default checks the cocycle as ``phi[a,a] = 1`` and
    ``phi[a,c] = phi[base,c] phi[a,base]``, then compatibility on pairs
    ``phi[a',c'] E[a,a'] = E[c,c'] phi[a,c]``; given the cocycle this is the
    same as the three-vertex condition. ``exhaustive=True`` checks the
    three-vertex condition and the cocycle over all triples verbatim.
    """
    if fr.quiver.kind != TENSOR:
        raise InvalidParameter("framings live on tensor-power quivers")
    classes = _index_classes(fr)
    _check_shapes(fr, classes)
    f = fr.field
    report = FramedReport()
    if not validate(fr.rep):
        report.violations.append({"kind": "relation"})
    phi = fr.phi
    for k, verts in sorted(classes.items()):
        base = fr.framing._base[k]
        for a in verts:
            if not linalg.mat_eq(phi(a, a), linalg.identity(fr.rep.dim(a), f), f):
                report.violations.append({"kind": "identity", "vertices": [vertex_key(a)]})
        if exhaustive:
            for a, b, c in itertools.product(verts, repeat=3):
                if not linalg.mat_eq(linalg.matmul(phi(b, c), phi(a, b), f), phi(a, c), f):
                    report.violations.append(
                        {"kind": "cocycle", "vertices": [vertex_key(x) for x in (a, b, c)]})
        else:
            for a, c in itertools.product(verts, repeat=2):
                via = linalg.matmul(phi(base, c), phi(a, base), f)
                if not linalg.mat_eq(via, phi(a, c), f):
                    report.violations.append(
                        {"kind": "cocycle", "vertices": [vertex_key(x) for x in (a, base, c)]})
    q, rep = fr.quiver, fr.rep
    for k, verts in sorted(classes.items()):
        for label in range(1, q.n + 1):
            outs = {}
            for v in verts:
                for arr in q.out_arrows(v):
                    if arr.label == label:
                        outs[v] = arr
            if exhaustive:
                triples = ((a, b, c) for a, b, c in itertools.product(verts, repeat=3)
                           if a in outs and c in outs)
            else:
                triples = ((a, None, c) for a, c in itertools.product(verts, repeat=2)
                           if a in outs and c in outs)
            for a, b, c in triples:
                aa, cc = outs[a], outs[c]
                if not rep.dim(aa.target) and not rep.dim(cc.target):
                    continue
                lhs = linalg.matmul(phi(aa.target, cc.target), rep.mat(aa), f)
                mid = phi(a, c) if b is None else linalg.matmul(phi(b, c), phi(a, b), f)
                rhs = linalg.matmul(rep.mat(cc), mid, f)
                if not linalg.mat_eq(lhs, rhs, f):
                    names = [vertex_key(x) for x in ((a, c) if b is None else (a, b, c))]
                    report.violations.append(
                        {"kind": "compatibility", "vertices": names, "label": label})
    return report


@dataclass
class FramedMorphism:
    source: FramedRep
    target: FramedRep
    maps: dict

    def as_morphism(self) -> Morphism:
        return Morphism(self.source.rep, self.target.rep, self.maps)

    def at(self, v) -> np.ndarray:
        return self.as_morphism().at(v)

    def check(self) -> bool:
        """Intertwines arrows and ``phi^F[b,b'] f_b phi^E[b',b] = f_b'``."""
        if not self.as_morphism().is_morphism():
            return False
        f = self.source.field
        q = self.source.quiver
        support = sorted(set(self.source.rep.support) | set(self.target.rep.support))
        classes: dict = {}
        for v in support:
            classes.setdefault(q.index(v), []).append(v)
        for verts in classes.values():
            for b, b2 in itertools.product(verts, repeat=2):
                lhs = linalg.chain([self.target.phi(b, b2), self.at(b), self.source.phi(b2, b)], f)
                if not linalg.mat_eq(lhs, self.at(b2), f):
                    return False
        return True

    def is_isomorphism(self) -> bool:
        return self.check() and self.as_morphism().is_isomorphism()


def _check_low_support(fr: FramedRep):
    n = fr.quiver.n
    bad = [v for v in fr.rep.support if fr.quiver.index(v) > n - 1]
    if bad:
        raise UnsupportedSupport(
            f"support reaches index {max(fr.quiver.index(v) for v in bad)} > {n - 1}")


def _resolve_basepoints(q: Quiver, basepoints) -> list:
    if basepoints is None:
        return default_basepoints(q)
    basepoints = list(basepoints)
    if len(basepoints) != q.n:
        raise InvalidParameter(f"need {q.n} basepoints, one per index 0..{q.n - 1}")
    for i, a in enumerate(basepoints):
        if a not in q or q.index(a) != i:
            raise InvalidParameter(f"basepoint {a!r} does not have index {i}")
    return basepoints


def trivialize(fr: FramedRep, basepoints=None) -> tuple[FramedRep, FramedMorphism]:
    """Isomorphic framed rep with identity framings and the isomorphism ``t``.

    ``t_a = phi[a, a_k]`` with ``a_k`` the basepoint of ``a``'s index ``k``.
    """
    _check_low_support(fr)
    q = fr.quiver
    bps = _resolve_basepoints(q, basepoints)
    if not check_framed(fr):
        raise MalformedFraming("input does not satisfy the framing conditions")
    f, rep = fr.field, fr.rep
    t = {a: fr.phi(a, bps[q.index(a)]) for a in rep.support}
    mats = {}
    for arr, m in rep.mats.items():
        i = q.index(arr.source)
        mats[arr] = linalg.chain(
            [fr.phi(arr.target, bps[i + 1]), m, fr.phi(bps[i], arr.source)], f)
    new = framed(Representation(q, dict(rep.dims), mats, f))
    return new, FramedMorphism(fr, new, t)


def functor_F(E: Representation, max_n: int | None = None) -> FramedRep:
    """Spread a Beilinson rep over the tensor quiver: ``F(E)_a = E_{index(a)}``."""
    if E.quiver.kind != BEILINSON:
        raise InvalidParameter("functor_F takes a Beilinson-quiver representation")
    n = E.quiver.n
    q = build_tensor_power(n, **({"max_n": max_n} if max_n else {}))
    dims, mats = {}, {}
    for i in range(n):
        if E.dim(i):
            for v in q.vertices_of_index(i):
                dims[v] = E.dim(i)
    for i in range(n - 1):
        if not E.dim(i) or not E.dim(i + 1):
            continue
        for v in q.vertices_of_index(i):
            for arr in q.out_arrows(v):
                mats[arr] = E.mat(Arrow(i, i + 1, arr.label)).copy()
    return framed(Representation(q, dims, mats, E.field))


def functor_F_morphism(f: Morphism) -> FramedMorphism:
    src, tgt = functor_F(f.source), functor_F(f.target)
    q = src.quiver
    maps = {v: f.at(q.index(v)).copy() for k in range(q.n) for v in q.vertices_of_index(k)
            if src.rep.dim(v) or tgt.rep.dim(v)}
    return FramedMorphism(src, tgt, maps)


def functor_G(fr: FramedRep, basepoints=None) -> Representation:
    """Collapse a framed rep with support in indices ``0..n-1`` to the Beilinson quiver.

    ``G(E)^c_{i,i+1} = phi[b, a_{i+1}] E[a,b] phi[a_i, a]`` for any arrow ``a -> b``
    of label ``c`` leaving index ``i``; every choice is computed and compared.
    """
    _check_low_support(fr)
    q = fr.quiver
    bps = _resolve_basepoints(q, basepoints)
    if not check_framed(fr):
        raise MalformedFraming("input does not satisfy the framing conditions")
    f, rep = fr.field, fr.rep
    n = q.n
    B = build_beilinson(n)
    dims = {i: rep.dim(bps[i]) for i in range(n)}
    mats = {}
    for i in range(n - 1):
        if not dims[i] or not dims[i + 1]:
            continue
        for label in range(1, n + 1):
            value = None
            for v in q.vertices_of_index(i):
                for arr in q.out_arrows(v):
                    if arr.label != label:
                        continue
                    cand = linalg.chain(
                        [fr.phi(arr.target, bps[i + 1]), rep.mat(arr), fr.phi(bps[i], v)], f)
                    if value is None:
                        value = cand
                    elif not linalg.mat_eq(value, cand, f):
                        raise MalformedFraming(
                            f"G is not well defined: label {label} at level {i} depends on the arrow")
            mats[Arrow(i, i + 1, label)] = value
    return Representation(B, dims, mats, f)


def functor_G_morphism(m: FramedMorphism, basepoints=None) -> Morphism:
    q = m.source.quiver
    bps = _resolve_basepoints(q, basepoints)
    src, tgt = functor_G(m.source, bps), functor_G(m.target, bps)
    return Morphism(src, tgt, {i: m.at(bps[i]).copy() for i in range(q.n)})


def lemma_identities(fr: FramedRep, basepoints=None) -> dict[str, bool]:
    """The identities used to show that the trivialization is a framed isomorphism.

    * ``arrows_agree``: trivialized arrow maps depend only on level and label;
    * ``relations``: the trivialized rep satisfies the commuting squares;
    * ``intertwines``: ``t_{b'} E[b,b'] = E'[b,b'] t_b``;
    * ``framed_invariant``: ``phi'[b,b'] t_b phi[b',b] = t_{b'}``.
    """
    new, t = trivialize(fr, basepoints)
    q, f = fr.quiver, fr.field
    agree = True
    by_level: dict = {}
    for arr, m in new.rep.mats.items():
        key = (q.index(arr.source), arr.label)
        if key in by_level and not linalg.mat_eq(by_level[key], m, f):
            agree = False
        by_level.setdefault(key, m)
    intertwines = t.as_morphism().is_morphism()
    return {
        "arrows_agree": agree,
        "relations": validate(new.rep).ok,
        "intertwines": intertwines,
        "framed_invariant": t.check(),
    }


def are_equivalent(fr1: FramedRep, fr2: FramedRep, basepoints=None) -> bool:
    """Exact equality after trivializing both at the same basepoints."""
    a, _ = trivialize(fr1, basepoints)
    b, _ = trivialize(fr2, basepoints)
    return a.rep == b.rep


def random_invertible(d: int, field: Field, rng: random.Random, bound: int = 2) -> np.ndarray:
    while True:
        m = random_matrix(d, d, field, rng, bound)
        if linalg.is_invertible(m, field):
            return m


def conjugate(fr: FramedRep, g: dict) -> FramedRep:
    """Transport ``fr`` along vertexwise isomorphisms ``g_a``."""
    f, rep, q = fr.field, fr.rep, fr.quiver
    ginv = {v: linalg.inverse(m, f) for v, m in g.items()}
    mats = {arr: linalg.chain([g[arr.target], m, ginv[arr.source]], f)
            for arr, m in rep.mats.items()}
    new = Representation(q, dict(rep.dims), mats, f)
    relative = {}
    for v in rep.support:
        base = fr.framing.base(v)
        relative[v] = linalg.chain([g[base], fr.phi(v, base), ginv[v]], f)
    return framed(new, relative)


def random_framed_rep(n: int, dims, field: Field = QI, rng: random.Random | None = None) -> FramedRep:
    """``F`` of a random Beilinson rep, transported by random invertible matrices."""
    rng = rng or random.Random(0)
    fr = functor_F(random_beilinson_rep(n, dims, field, rng))
    g = {v: random_invertible(fr.rep.dim(v), field, rng) for v in fr.rep.support}
    return conjugate(fr, g)


# JSON --------------------------------------------------------------------

def framed_to_json(fr: FramedRep) -> dict:
    """Representation JSON plus ``phi[v, base]`` grouped by index."""
    out = rep_to_json(fr.rep)
    phi: dict = {}
    for v in fr.rep.support:
        k = fr.quiver.index(v)
        phi.setdefault(f"index-{k}", {})[vertex_key(v)] = matrix_to_json(
            fr.phi(v, fr.framing.base(v)), fr.field)
    out["phi"] = phi
    return out


def framed_from_json(data: dict, **kw) -> FramedRep:
    rep = rep_from_json(data, **kw)
    relative = {}
    for group in data.get("phi", {}).values():
        for key, entries in group.items():
            v = rep.quiver.vertex_from_key(key)
            d = rep.dim(v)
            relative[v] = matrix_from_json(entries, d, d, rep.field)
    return framed(rep, relative)


def morphism_to_json(m) -> dict:
    """Vertexwise matrices of a (framed) morphism."""
    src = m.source.rep if isinstance(m, FramedMorphism) else m.source
    tgt = m.target.rep if isinstance(m, FramedMorphism) else m.target
    out = {}
    for v in sorted(set(src.dims) | set(tgt.dims)):
        out[vertex_key(v)] = matrix_to_json(m.at(v), src.field)
    return {"maps": out}
