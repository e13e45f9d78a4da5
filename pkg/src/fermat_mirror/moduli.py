"""Moduli chart of stable thin Beilinson representations and the mirror-side report.

A chart maps sampled projective points to their thin representations, checks
stability under a decreasing-phase stability function, recovers the point from
the representation, and records whether it lies on the Fermat hypersurface.
"""
from __future__ import annotations

import cmath
import itertools
import json
import random
from dataclasses import dataclass, field as dc_field

from .errors import InvalidStabilityFunction, SearchExhausted, TheoremViolation, InvalidParameter
from .fields import Field, GaussianRational
from .quiver import build_beilinson, vertex_key
from .rep import is_indecomposable_thin, level_vector, simple_at, thin_rep_from_levels, \
    thin_rep_from_point, validate
from .sdr import ProjectivePoint, classify_support, extract_point, fermat_value, on_fermat
from .stability import Status, StabilityFunction, is_stable, make_Zn, mirror, phase_cmp

DEFAULT_HEIGHT = 3
MIRROR_ALPHABET = ("0", "1", "-1", "2", "-2", "i", "-i")
MAX_EXHAUSTIVE_FAMILY = 10**4


def _units(field: Field) -> list:
    if field.tag == "Q":
        return [field.coerce(1), field.coerce(-1)]
    return [field.coerce(u) for u in ("1", "-1", "i", "-i")]


def _dedup(points: list[ProjectivePoint]) -> list[ProjectivePoint]:
    if all(p.field.exact for p in points):
        return sorted(set(points), key=ProjectivePoint.sort_key)
    out: list[ProjectivePoint] = []
    for p in sorted(points, key=ProjectivePoint.sort_key):
        if not any(p == o for o in out):
            out.append(p)
    return out


def _exact_fermat_points(n: int, field: Field, height: int) -> list[ProjectivePoint]:
    found = []
    # one pair (1, zeta) with zeta^n = -1, zeros elsewhere
    for p, q in itertools.combinations(range(n), 2):
        for z in _units(field):
            if z ** n == -1:
                coords = [field.zero] * n
                coords[p], coords[q] = field.one, z
                found.append(ProjectivePoint(coords, field))
    # small-height search, meet in the middle: sum over the head = -(sum over the tail)
    rng = range(-height, height + 1)
    if field.tag == "Q":
        values = [field.coerce(a) for a in rng]
    else:
        values = [field.coerce((a, b)) for a in rng for b in rng]
    power = {v: v ** n for v in values}
    h = n // 2
    heads: dict = {}
    for head in itertools.product(values, repeat=h):
        heads.setdefault(sum((power[x] for x in head), field.zero), []).append(head)
    for tail in itertools.product(values, repeat=n - h):
        target = -sum((power[x] for x in tail), field.zero)
        for head in heads.get(target, ()):
            coords = list(head) + list(tail)
            if any(c != 0 for c in coords):
                found.append(ProjectivePoint(coords, field))
    return _dedup(found)


def _nth_root(z: complex, n: int) -> complex:
    return cmath.exp(cmath.log(z) / n) if z != 0 else 0j


def sample_fermat_points(n: int, field: Field, count: int, seed: int = 0,
                         height: int = DEFAULT_HEIGHT) -> list[ProjectivePoint]:
    """Points with vanishing Fermat form, sorted by normal form.

    Exact fields: every point found by the unit-pair family and a search over
    Gaussian (or plain) integers of height ``<= height``; if more than ``count``
    exist a seeded subset is returned. Floating: ``n-1`` random coordinates and
    a solved last coordinate.
    """
    if count < 1:
        raise InvalidParameter("count must be >= 1")
    rng = random.Random(seed)
    if field.exact:
        pts = _exact_fermat_points(n, field, height)
        if not pts:
            raise SearchExhausted(f"no {field.tag}-points on the degree-{n} Fermat form up to height {height}")
        if len(pts) > count:
            pts = sorted(rng.sample(pts, count), key=ProjectivePoint.sort_key)
        return pts
    out = []
    while len(out) < count:
        head = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n - 1)]
        s = sum(x ** n for x in head)
        branch = cmath.exp(2j * cmath.pi * rng.randrange(n) / n)
        # w^n = -s with w = (-s)^(1/n) * root of unity
        w = _nth_root(-s, n) * branch
        p = ProjectivePoint(head + [w], field)
        if on_fermat(p):
            out.append(p)
    return _dedup(out)


def sample_control_points(n: int, field: Field, count: int, seed: int = 0,
                          height: int = DEFAULT_HEIGHT) -> list[ProjectivePoint]:
    """Seeded points off the Fermat hypersurface (negative controls)."""
    rng = random.Random(seed + 7919)
    out: list[ProjectivePoint] = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 1000 * count:
            raise SearchExhausted("could not find enough off-locus control points")
        if field.exact:
            coords = [field.coerce(rng.randint(-height, height)) if field.tag == "Q"
                      else field.coerce((rng.randint(-height, height), rng.randint(-height, height)))
                      for _ in range(n)]
            if all(c == 0 for c in coords):
                continue
        else:
            coords = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(n)]
        p = ProjectivePoint(coords, field)
        if not on_fermat(p) and not any(p == o for o in out):
            out.append(p)
    return sorted(out, key=ProjectivePoint.sort_key)


@dataclass
class ChartEntry:
    point: ProjectivePoint
    value: object
    verdict: str  # "on-fermat" or "zero-object"
    stability: str = Status.STABLE.value

    @property
    def rep(self):
        return thin_rep_from_point(build_beilinson(self.point.n), self.point.coords, self.point.field)

    def to_json(self) -> dict:
        f = self.point.field
        return {"point": self.point.to_json(), "levels": self.point.to_json(),
                "fermat_value": f.to_json(self.value), "verdict": self.verdict,
                "stability": self.stability}


@dataclass
class ModuliChart:
    n: int
    field: Field
    Z: StabilityFunction
    entries: list = dc_field(default_factory=list)
    excluded: list = dc_field(default_factory=list)
    strategy: str = "given"
    seed: int | None = None

    def on_fermat_points(self) -> list[ProjectivePoint]:
        return [e.point for e in self.entries if e.verdict == "on-fermat"]

    def summary(self) -> dict:
        on = sum(e.verdict == "on-fermat" for e in self.entries)
        return {"n": self.n, "field": self.field.tag, "entries": len(self.entries),
                "on_fermat": on, "zero_object": len(self.entries) - on,
                "excluded_semistable": len(self.excluded)}

    def provenance(self) -> dict:
        return {"stability": self.Z.to_json(), "strategy": self.strategy, "seed": self.seed}

    def to_jsonl(self, provenance: bool = True) -> str:
        lines = [json.dumps(e.to_json(), sort_keys=True, separators=(",", ":")) for e in self.entries]
        tail = {"summary": self.summary()}
        if provenance:
            tail["provenance"] = self.provenance()
        lines.append(json.dumps(tail, sort_keys=True, separators=(",", ":")))
        return "\n".join(lines) + "\n"


def _require_decreasing(n: int, Z: StabilityFunction):
    if Z.n != n:
        raise InvalidStabilityFunction(f"stability function is for n={Z.n}, pipeline for n={n}")
    for k in range(len(Z.charges) - 1):
        if phase_cmp(Z.charge(k), Z.charge(k + 1), Z.eps) <= 0:
            raise InvalidStabilityFunction("pipeline needs phases strictly decreasing in the index")


def syz_pipeline(n: int, Z: StabilityFunction, points, strategy: str = "given",
                 seed: int | None = None) -> ModuliChart:
    """Run every point through rep construction, stability, extraction and support.

    Raises :class:`TheoremViolation` when a point representation is unstable or
    does not give back its point.
    """
    _require_decreasing(n, Z)
    B = build_beilinson(n)
    pts = _dedup(list(points))
    field = pts[0].field if pts else None
    chart = ModuliChart(n, field, Z, strategy=strategy, seed=seed)
    for p in pts:
        if p.n != n:
            raise InvalidParameter(f"point {p} does not have {n} coordinates")
        E = thin_rep_from_point(B, p.coords, p.field)
        verdict = is_stable(E, Z)
        if verdict.status is Status.SEMISTABLE_ONLY:
            chart.excluded.append(p)
            continue
        if verdict.status is Status.UNSTABLE:
            raise TheoremViolation(f"point representation {p} is unstable (witness {verdict.witness})")
        got = extract_point(E, Z, check_stable=False)
        if not got == p:
            raise TheoremViolation(f"extracted point {got} differs from {p}")
        sup = classify_support(E, Z)
        chart.entries.append(ChartEntry(
            p, sup.value, "on-fermat" if sup.on_fermat else "zero-object", verdict.status.value))
    if field is None:
        chart.field = Field("Qi")
    return chart


def build_chart(n: int, field: Field, count: int, seed: int = 0, Z: StabilityFunction | None = None,
                control_fraction: float = 0.25, height: int = DEFAULT_HEIGHT) -> ModuliChart:
    """Sample Fermat points plus off-locus controls and run the pipeline."""
    Z = Z or make_Zn(n, exact=field.exact)
    n_controls = max(1, round(count * control_fraction))
    on = sample_fermat_points(n, field, max(1, count - n_controls), seed, height)
    # exact fields may have very few small points on the locus; top up with controls
    off = sample_control_points(n, field, max(n_controls, count - len(on)), seed, height)
    strategy = f"fermat-sample+controls(fraction={control_fraction},height={height})"
    return syz_pipeline(n, Z, on + off, strategy=strategy, seed=seed)


# mirror side ---------------------------------------------------------------

def _projective_classes(n: int, alphabet, field: Field) -> list[list]:
    vals = [field.coerce(a) for a in alphabet]
    classes: dict = {}
    for v in itertools.product(vals, repeat=n):
        if all(field.is_zero(x) for x in v):
            continue
        key = ProjectivePoint(v, field).coords
        classes.setdefault(key, []).append(list(v))
    return [classes[k] for k in sorted(classes, key=lambda c: tuple(field.sort_key(x) for x in c))]


def thin_family(n: int, field: Field, alphabet=MIRROR_ALPHABET, seed: int = 0,
                max_exhaustive: int = MAX_EXHAUSTIVE_FAMILY, sample_size: int = 2000):
    """Thin full-support indecomposable Beilinson reps with arrow values in ``alphabet``.

    Valid ones have all level vectors nonzero and mutually proportional, so the
    family is enumerated class by class. Returns ``(reps, family_size, exhaustive)``.
    """
    B = build_beilinson(n)
    classes = _projective_classes(n, alphabet, field)
    size = sum(len(c) ** (n - 1) for c in classes)
    if size <= max_exhaustive:
        reps = [thin_rep_from_levels(B, levels, field)
                for c in classes for levels in itertools.product(c, repeat=n - 1)]
        return reps, size, True
    rng = random.Random(seed)
    weights = [len(c) ** (n - 1) for c in classes]
    reps = []
    for c in rng.choices(classes, weights=weights, k=sample_size):
        reps.append(thin_rep_from_levels(B, [rng.choice(c) for _ in range(n - 1)], field))
    return reps, size, False


@dataclass
class MirrorReport:
    n: int
    Z: StabilityFunction
    mirror_Z: StabilityFunction
    entries: list = dc_field(default_factory=list)
    family_size: int = 0
    exhaustive: bool = True

    def to_json(self) -> dict:
        return {"n": self.n, "stability": self.Z.to_json(), "mirror": self.mirror_Z.to_json(),
                "family_size": self.family_size, "exhaustive": self.exhaustive,
                "tested": len(self.entries), "entries": self.entries}


def mirror_report(n: int, Z: StabilityFunction | None = None, family=None, seed: int = 0,
                  field: Field | None = None, max_exhaustive: int = MAX_EXHAUSTIVE_FAMILY,
                  sample_size: int = 2000) -> MirrorReport:
    """Verdicts of simples and thin indecomposables under ``Z`` and its mirror.

    Simples must be stable on both sides; every other family member must be
    stable under ``Z`` and unstable under the mirror.
    """
    field = field or Field("Qi")
    Z = Z or make_Zn(n)
    _require_decreasing(n, Z)
    M = mirror(Z)
    B = build_beilinson(n)
    report = MirrorReport(n, Z, M)
    for i in range(n):
        S = simple_at(B, i, field)
        vz, vm = is_stable(S, Z), is_stable(S, M)
        if not (vz.stable and vm.stable):
            raise TheoremViolation(f"simple S_{i} is not stable on both sides")
        report.entries.append({"object": f"S_{i}", "Z": vz.to_json(), "mirror": vm.to_json()})
    if family is None:
        family, report.family_size, report.exhaustive = thin_family(
            n, field, seed=seed, max_exhaustive=max_exhaustive, sample_size=sample_size)
    else:
        family = list(family)
        report.family_size = len(family)
    for E in family:
        if not validate(E) or not is_indecomposable_thin(E):
            raise InvalidParameter("family members must be valid thin indecomposables")
        vz, vm = is_stable(E, Z, check=False), is_stable(E, M, check=False)
        levels = [[field.to_json(x) for x in level_vector(E, i)] for i in range(n - 1)]
        if vm.status is not Status.UNSTABLE or vm.witness is None:
            raise TheoremViolation(f"non-simple thin rep {levels} is {vm.status.value} under the mirror")
        if len(E.support) == n and not vz.stable:
            raise TheoremViolation(f"point representation {levels} is not stable under Z")
        report.entries.append({"object": "thin", "levels": levels,
                               "Z": vz.to_json(), "mirror": vm.to_json()})
    return report


def support_key(support) -> list[str]:
    return [vertex_key(v) for v in sorted(support)]
