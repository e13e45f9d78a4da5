"""Serre-de Rham complexes of Beilinson-quiver representations.

The differential from slot ``i`` is ``sum_j E^j_{i,i+1} (x) dx^j_i``. The formal
symbols anticommute across consecutive levels,
``dx^j_i dx^{j'}_{i-1} = - dx^{j'}_i dx^j_{i-1}``, so a word on consecutive
levels is alternating in its labels: its normal form lists labels in
increasing order along increasing level, with the sign of the sorting
permutation, and vanishes when a label repeats.

The objects ``O_n^i`` are opaque labels; no sheaf theory is computed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import NamedTuple

import numpy as np

from . import linalg
from .errors import (
    FieldError,
    InternalInconsistency,
    InvalidParameter,
    MalformedRepresentation,
    NotStable,
    UnsupportedDimension,
    ZeroPoint,
)
from .fields import Field
from .quiver import BEILINSON, Arrow
from .rep import Morphism, Representation, level_vector, validate


class ExteriorSymbol(NamedTuple):
    """Generator ``dx^label_level``."""

    level: int
    label: int


def normalize_labels(labels, order=None) -> tuple[int, tuple]:
    """Sort ``labels`` by adjacent transpositions, each contributing ``-1``.

    Returns ``(sign, sorted_labels)``, with sign 0 when a label repeats.
    ``order`` optionally lists the adjacent positions to try swapping first
    (used to test that the result does not depend on the swap order).
    """
    labels = list(labels)
    if len(set(labels)) != len(labels):
        return 0, tuple(sorted(labels))
    sign = 1
    pending = list(order or [])
    while True:
        k = None
        while pending:
            p = pending.pop()
            if 0 <= p < len(labels) - 1 and labels[p] > labels[p + 1]:
                k = p
                break
        if k is None:
            k = next((p for p in range(len(labels) - 1) if labels[p] > labels[p + 1]), None)
        if k is None:
            return sign, tuple(labels)
        labels[k], labels[k + 1] = labels[k + 1], labels[k]
        sign = -sign


@dataclass(frozen=True)
class SymbolWord:
    """Normal-form word: symbols on consecutive increasing levels."""

    start: int
    labels: tuple

    @property
    def factors(self) -> tuple[ExteriorSymbol, ...]:
        return tuple(ExteriorSymbol(self.start + k, j) for k, j in enumerate(self.labels))

    @property
    def levels(self) -> range:
        return range(self.start, self.start + len(self.labels))

    def to_json(self) -> list:
        return [[f.level, f.label] for f in self.factors]


def word(factors) -> tuple[int, SymbolWord | None]:
    """Normalize a list of symbols given in any level order.

    Returns ``(sign, word)``; the word is ``None`` when the product vanishes.
    """
    factors = sorted(factors, key=lambda f: f.level)
    levels = [f.level for f in factors]
    if levels != list(range(levels[0], levels[0] + len(levels))):
        raise InvalidParameter(f"symbols do not chain by level: {levels}")
    sign, labels = normalize_labels([f.label for f in factors])
    if sign == 0:
        return 0, None
    return sign, SymbolWord(levels[0], labels)


class SymbolSum:
    """Linear combination of normal-form words with scalar coefficients."""

    def __init__(self, field: Field, terms: dict | None = None):
        self.field = field
        self.terms: dict[SymbolWord, object] = {}
        for w, c in (terms or {}).items():
            self._add(w, c)

    @classmethod
    def symbol(cls, field: Field, level: int, label: int, coef) -> SymbolSum:
        return cls(field, {SymbolWord(level, (label,)): coef})

    def _add(self, w: SymbolWord, c):
        total = self.terms.get(w, self.field.zero) + c
        if self.field.is_zero(total):
            self.terms.pop(w, None)
        else:
            self.terms[w] = total

    def __add__(self, other: SymbolSum) -> SymbolSum:
        out = SymbolSum(self.field, self.terms)
        for w, c in other.terms.items():
            out._add(w, c)
        return out

    def compose(self, earlier: SymbolSum) -> SymbolSum:
        """``self o earlier``: ``earlier``'s words sit on the lower levels."""
        out = SymbolSum(self.field)
        for w1, c1 in self.terms.items():
            for w0, c0 in earlier.terms.items():
                sign, w = word(list(w0.factors) + list(w1.factors))
                if sign:
                    out._add(w, sign * (c1 * c0))
        return out

    def scale(self, c) -> SymbolSum:
        return SymbolSum(self.field, {w: c * x for w, x in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, SymbolSum):
            return NotImplemented
        return (self + other.scale(-self.field.one)).is_zero()

    __hash__ = None

    def __repr__(self):
        parts = [f"({c})*" + "".join(f"dx{f.label}_{f.level}" for f in w.factors)
                 for w, c in sorted(self.terms.items(), key=lambda t: (t[0].start, t[0].labels))]
        return " + ".join(parts) or "0"

    def to_json(self) -> list:
        return [{"coef": self.field.to_json(c), "word": w.to_json()}
                for w, c in sorted(self.terms.items(), key=lambda t: (t[0].start, t[0].labels))]


def _sym_matmul(later, earlier, field) -> list[list[SymbolSum]]:
    rows, inner, cols = len(later), len(earlier), len(earlier[0]) if earlier else 0
    out = []
    for r in range(rows):
        row = []
        for c in range(cols):
            acc = SymbolSum(field)
            for k in range(inner):
                acc = acc + later[r][k].compose(earlier[k][c])
            row.append(acc)
        out.append(row)
    return out


@dataclass
class SdRComplex:
    """``E_0 (x) O^0 -> E_1 (x) O^1 -> ... -> E_{n-1} (x) O^{n-1}``.

    ``differentials[i]`` is a ``dims[i+1] x dims[i]`` nested list of
    :class:`SymbolSum` entries, all on level ``i``.
    """

    n: int
    dims: tuple
    differentials: list
    field: Field

    @property
    def objects(self) -> list[str]:
        return [f"E_{i}^{d} (x) O_{self.n}^{i}" for i, d in enumerate(self.dims)]

    def to_json(self) -> dict:
        diffs = []
        for d in self.differentials:
            entries = []
            for r, row in enumerate(d):
                for c, e in enumerate(row):
                    entries.append({"row": r, "col": c, "terms": e.to_json()})
            diffs.append(entries)
        return {"n": self.n, "field": self.field.tag, "dims": list(self.dims),
                "objects": self.objects, "differentials": diffs}


def _require_beilinson(E: Representation):
    if E.quiver.kind != BEILINSON:
        raise InvalidParameter("expected a Beilinson-quiver representation")


def build_sdr(E: Representation, strict: bool = True) -> SdRComplex:
    """Symbolic complex of ``E``; ``strict=False`` skips relation checking."""
    _require_beilinson(E)
    if strict and not validate(E):
        raise MalformedRepresentation("representation violates the Beilinson relations")
    n, f = E.quiver.n, E.field
    dims = tuple(E.dim(i) for i in range(n))
    diffs = []
    for i in range(n - 1):
        rows, cols = dims[i + 1], dims[i]
        mat = [[SymbolSum(f) for _ in range(cols)] for _ in range(rows)]
        for j in range(1, n + 1):
            m = E.mat(Arrow(i, i + 1, j))
            for r in range(rows):
                for c in range(cols):
                    if not f.is_zero(m[r, c]):
                        mat[r][c] = mat[r][c] + SymbolSum.symbol(f, i, j, m[r, c])
        diffs.append(mat)
    return SdRComplex(n, dims, diffs, f)


@dataclass
class ComplexReport:
    nonzero: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.nonzero

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "nonzero": self.nonzero}


def check_complex(c: SdRComplex) -> ComplexReport:
    """Every composite ``d_i o d_{i-1}`` must normalize to zero.

    A surviving word ``dx^a_{i-1} dx^b_i`` (``a < b``) carries the coefficient
    ``E^b_{i,i+1} E^a_{i-1,i} - E^a_{i,i+1} E^b_{i-1,i}``, so the report names
    the label pair of the broken commuting relation.
    """
    report = ComplexReport()
    for i in range(1, len(c.differentials)):
        comp = _sym_matmul(c.differentials[i], c.differentials[i - 1], c.field)
        for r, row in enumerate(comp):
            for col, e in enumerate(row):
                for w in sorted(e.terms, key=lambda w: w.labels):
                    report.nonzero.append({"slot": i, "row": r, "col": col,
                                           "labels": list(w.labels)})
    return report


@dataclass
class ChainMap:
    """Components ``f_i (x) id`` of the chain map induced by a morphism."""

    source: SdRComplex
    target: SdRComplex
    components: list

    def is_chain_map(self) -> bool:
        f = self.source.field
        for i, (d_src, d_tgt) in enumerate(zip(self.source.differentials, self.target.differentials)):
            fi, fj = self.components[i], self.components[i + 1]
            lhs = _sym_scalar_left(fj, d_src, f)
            rhs = _sym_scalar_right(d_tgt, fi, f)
            if any(not (a == b) for ra, rb in zip(lhs, rhs) for a, b in zip(ra, rb)):
                return False
        return True


def _sym_scalar_left(m: np.ndarray, sym, f: Field):
    rows, inner = m.shape
    cols = len(sym[0]) if sym else 0
    out = [[SymbolSum(f) for _ in range(cols)] for _ in range(rows)]
    for r in range(rows):
        for c in range(cols):
            for k in range(inner):
                out[r][c] = out[r][c] + sym[k][c].scale(m[r, k])
    return out


def _sym_scalar_right(sym, m: np.ndarray, f: Field):
    inner, cols = m.shape
    rows = len(sym)
    out = [[SymbolSum(f) for _ in range(cols)] for _ in range(rows)]
    for r in range(rows):
        for c in range(cols):
            for k in range(inner):
                out[r][c] = out[r][c] + sym[r][k].scale(m[k, c])
    return out


def sdr_morphism(f: Morphism) -> ChainMap:
    src, tgt = build_sdr(f.source), build_sdr(f.target)
    return ChainMap(src, tgt, [f.at(i) for i in range(f.source.quiver.n)])


# projective points -------------------------------------------------------

class ProjectivePoint:
    """Point of projective space, normalized so the first nonzero coordinate is 1."""

    def __init__(self, coords, field: Field):
        xs = [field.coerce(c) for c in coords]
        if field.exact:
            lead = next((x for x in xs if x != 0), None)
        else:
            top = max(abs(x) for x in xs) if xs else 0.0
            lead = next((x for x in xs if abs(x) > field.eps * max(top, 1.0)), None)
        if lead is None:
            raise ZeroPoint("the zero vector is not a projective point")
        inv = field.inverse(lead)
        self.coords = tuple(x * inv for x in xs)
        self.field = field

    @property
    def n(self) -> int:
        return len(self.coords)

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint) or other.n != self.n:
            return NotImplemented
        f = self.field if not self.field.exact else other.field
        return all(f.eq(a, b) for a, b in zip(self.coords, other.coords))

    def __hash__(self):
        if not self.field.exact:
            raise TypeError("floating projective points are not hashable")
        return hash(self.coords)

    def sort_key(self):
        return tuple(self.field.sort_key(x) for x in self.coords)

    def __repr__(self):
        return "[" + ":".join(str(c) for c in self.coords) + "]"

    def to_json(self) -> list:
        return [self.field.to_json(c) for c in self.coords]


def fermat_value(p: ProjectivePoint, n: int | None = None):
    """``sum_s x_s^n`` in the point's field."""
    n = p.n if n is None else n
    if n != p.n:
        raise InvalidParameter(f"point has {p.n} coordinates, the Fermat form needs {n}")
    f = p.field
    try:
        return f.coerce(sum((x ** n for x in p.coords), f.zero))
    except (TypeError, OverflowError) as exc:
        raise FieldError(str(exc)) from None


def on_fermat(p: ProjectivePoint, n: int | None = None) -> bool:
    v = fermat_value(p, n)
    if p.field.exact:
        return v == 0
    scale = sum(abs(x) ** p.n for x in p.coords)
    return abs(v) <= p.field.eps * scale


def extract_point(E: Representation, Z, check_stable: bool = True) -> ProjectivePoint:
    """Projective class of the level-0 vector of a stable thin full-support rep.

    The scalars ``k_i`` with ``k_i E^s_{i,i+1} = E^s_{i-1,i}`` for all ``s`` are
    computed and must exist.
    """
    from .stability import is_stable

    _require_beilinson(E)
    n = E.quiver.n
    if any(E.dim(i) != 1 for i in range(n)):
        if not E.is_thin():
            raise UnsupportedDimension("extract_point needs a thin representation")
        raise NotStable("extract_point needs dimension vector (1,...,1)")
    if check_stable:
        verdict = is_stable(E, Z)
        if not verdict.stable:
            raise NotStable(f"representation is {verdict.status.value} (witness {verdict.witness})")
    level_scalars(E)
    return ProjectivePoint(level_vector(E, 0), E.field)


def level_scalars(E: Representation) -> list:
    """``[k_1, ..., k_{n-2}]`` with ``k_i * v_i = v_{i-1}`` for level vectors ``v``."""
    f = E.field
    n = E.quiver.n
    ks = []
    for i in range(1, n - 1):
        prev, cur = level_vector(E, i - 1), level_vector(E, i)
        s = next((k for k, x in enumerate(cur) if not f.is_zero(x)), None)
        if s is None:
            raise InternalInconsistency(f"level {i} vector vanishes")
        k = prev[s] / cur[s]
        if f.is_zero(k) or not all(f.eq(k * b, a) for a, b in zip(prev, cur)):
            raise InternalInconsistency(f"levels {i - 1} and {i} are not proportional")
        ks.append(k)
    return ks


@dataclass(frozen=True)
class SupportVerdict:
    kind: str  # "point-on-fermat" or "zero-object"
    point: ProjectivePoint
    value: object

    @property
    def on_fermat(self) -> bool:
        return self.kind == "point-on-fermat"


def classify_support(E: Representation, Z) -> SupportVerdict:
    p = extract_point(E, Z)
    v = fermat_value(p)
    return SupportVerdict("point-on-fermat" if on_fermat(p) else "zero-object", p, v)


def single_violation_mutant(n: int, level: str, s: int, t: int, coef, field: Field) -> Representation:
    """Thin rep with all levels ``e_s`` plus ``coef`` on the label-``t`` arrow of the
    first or last level; exactly one commuting relation fails.
    """
    from .quiver import build_beilinson
    from .rep import thin_rep_from_levels

    if n < 3 or s == t:
        raise InvalidParameter("need n >= 3 and distinct labels")
    base = [field.one if k == s else field.zero for k in range(1, n + 1)]
    levels = [list(base) for _ in range(n - 1)]
    target = 0 if level == "first" else n - 2
    levels[target][t - 1] = field.coerce(coef)
    return thin_rep_from_levels(build_beilinson(n), levels, field)


def random_mutant(n: int, field: Field, rng: random.Random) -> Representation:
    s, t = rng.sample(range(1, n + 1), 2)
    coef = 0
    while coef == 0:
        coef = rng.randint(-3, 3)
    return single_violation_mutant(n, rng.choice(["first", "last"]), s, t, coef, field)

