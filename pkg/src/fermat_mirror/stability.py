"""Stability functions constant on index classes, their mirrors, stability of
thin representations and walls along straight segments of stability functions.

Phases are compared exactly through the sign of ``Im(conj(u) * w)``; for
charges in the open upper half-plane this orders ``arg`` without trigonometry.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .errors import (
    Incompatible,
    InvalidParameter,
    InvalidStabilityFunction,
    MalformedRepresentation,
    MirrorUndefined,
    ZeroObject,
)
from .fields import DEFAULT_EPS, GaussianRational, cross, dot, imag_part, phase, _frac
from .quiver import Quiver
from .rep import Representation, Subrep, subreps_thin, validate, _require_thin

RATIONAL_DENOMINATOR = 10**6


def num_classes(n: int) -> int:
    return n * (n - 1) + 1


class StabilityFunction:
    """Central charge ``Z_k`` per index class ``k = 0..n(n-1)``.

    Charges are either all :class:`GaussianRational` (exact) or all ``complex``.
    """

    def __init__(self, n: int, charges, eps: float = DEFAULT_EPS):
        if not isinstance(n, int) or n < 2:
            raise InvalidParameter(f"n must be an integer >= 2, got {n!r}")
        charges = list(charges)
        if len(charges) != num_classes(n):
            raise InvalidStabilityFunction(
                f"n={n} needs {num_classes(n)} charges, got {len(charges)}"
            )
        if all(isinstance(z, GaussianRational) for z in charges):
            self.exact = True
        else:
            charges = [complex(z) for z in charges]
            self.exact = False
        for k, z in enumerate(charges):
            if not imag_part(z) > 0:
                raise InvalidStabilityFunction(f"charge Z_{k} = {z} is not in the open upper half-plane")
        self.n = n
        self.charges = tuple(charges)
        self.eps = eps

    def charge(self, k: int):
        return self.charges[k]

    def phases(self) -> list[float]:
        return [phase(z) for z in self.charges]

    def __eq__(self, other):
        return (isinstance(other, StabilityFunction) and self.n == other.n
                and self.charges == other.charges)

    def __hash__(self):
        return hash((self.n, self.charges))

    def __repr__(self):
        kind = "exact" if self.exact else "C64"
        return f"StabilityFunction(n={self.n}, {kind})"

    def to_json(self) -> dict:
        if self.exact:
            from .fields import QI
            enc = [QI.to_json(z) for z in self.charges]
        else:
            enc = [[z.real, z.imag] for z in self.charges]
        return {"n": self.n, "charges": enc}

    @classmethod
    def from_json(cls, data: dict, eps: float = DEFAULT_EPS) -> StabilityFunction:
        try:
            n, raw = data["n"], data["charges"]
        except (KeyError, TypeError):
            raise InvalidStabilityFunction("stability JSON needs 'n' and 'charges'") from None
        exact = all(not isinstance(p, float) for pair in raw for p in pair)
        if exact:
            charges = [GaussianRational(_frac(re), _frac(im)) for re, im in raw]
        else:
            charges = [complex(float(re), float(im)) for re, im in raw]
        return cls(n, charges, eps=eps)


def phase_cmp(a, b, eps: float = 0.0) -> int:
    """Sign of ``phase(a) - phase(b)`` for charges in the upper half-plane."""
    c = cross(b, a)
    if isinstance(c, float):
        tol = eps * abs(complex(a)) * abs(complex(b))
        if abs(c) <= tol:
            return 0
    return (c > 0) - (c < 0)


def _unit_rational(theta: float) -> GaussianRational:
    """Exact rational point on the unit circle near angle ``theta`` in (0, pi)."""
    u = Fraction(math.tan(theta / 2)).limit_denominator(RATIONAL_DENOMINATOR)
    d = 1 + u * u
    return GaussianRational((1 - u * u) / d, 2 * u / d)


def make_Zn(n: int, profile=None, exact: bool = True) -> StabilityFunction:
    """Stability function with strictly decreasing phases in the index.

    The default puts ``Z_k`` on the unit circle at angle ``pi*(N+1-k)/(N+2)``,
    ``N = n(n-1)``; exact mode replaces each by a nearby rational point.
    """
    if not isinstance(n, int) or n < 2:
        raise InvalidParameter(f"n must be an integer >= 2, got {n!r}")
    N = n * (n - 1)
    if profile is None:
        angles = [math.pi * (N + 1 - k) / (N + 2) for k in range(N + 1)]
        if exact:
            charges = [_unit_rational(t) for t in angles]
        else:
            charges = [complex(math.cos(t), math.sin(t)) for t in angles]
    else:
        charges = list(profile)
    Z = StabilityFunction(n, charges)
    for k in range(N):
        if phase_cmp(Z.charge(k), Z.charge(k + 1), Z.eps) <= 0:
            raise InvalidStabilityFunction(
                f"phases must strictly decrease with the index; fails at Z_{k}, Z_{k + 1}"
            )
    return Z


def mirror(Z: StabilityFunction) -> StabilityFunction:
    """``Z_k -> -conj(Z_k)``; phases map ``p -> 1 - p``."""
    for k, z in enumerate(Z.charges):
        if not imag_part(z) > 0:
            raise MirrorUndefined(f"charge Z_{k} is not strictly in the upper half-plane")
    return StabilityFunction(Z.n, [-z.conjugate() for z in Z.charges], eps=Z.eps)


def is_framed_invariant(Z, q: Quiver) -> bool:
    """Whether a charge assignment is constant on the index classes of ``q``.

    ``Z`` is a :class:`StabilityFunction` (constant by construction) or a mapping
    from vertices of ``q`` to charges.
    """
    if isinstance(Z, StabilityFunction):
        return Z.n == q.n
    seen = {}
    for v, z in Z.items():
        k = q.index(v)
        if k in seen and seen[k] != z:
            return False
        seen[k] = z
    return True


def _check_quiver(Z: StabilityFunction, rep: Representation):
    if rep.quiver.n != Z.n:
        raise Incompatible(f"stability function for n={Z.n} applied to {rep.quiver!r}")


def charge_of_support(Z: StabilityFunction, q: Quiver, support, dims=None):
    total = GaussianRational(0) if Z.exact else 0j
    for v in support:
        total = total + (dims[v] if dims else 1) * Z.charge(q.index(v))
    return total


def central_charge(Z: StabilityFunction, rep: Representation):
    _check_quiver(Z, rep)
    if rep.is_zero():
        raise ZeroObject("the zero representation has no central charge phase")
    return charge_of_support(Z, rep.quiver, rep.support, rep.dims)


class Status(str, enum.Enum):
    STABLE = "stable"
    SEMISTABLE_ONLY = "semistable-only"
    UNSTABLE = "unstable"


@dataclass(frozen=True)
class StabilityVerdict:
    status: Status
    witness: Subrep | None = None

    @property
    def stable(self) -> bool:
        return self.status is Status.STABLE

    def to_json(self) -> dict:
        return {"status": self.status.value,
                "witness": self.witness.to_json() if self.witness else None}


def is_stable(rep: Representation, Z: StabilityFunction, check: bool = True) -> StabilityVerdict:
    """Compare the phase of every proper subobject with that of ``rep``.

    An unstable verdict carries a subobject of maximal phase (first in the
    deterministic enumeration order among ties).
    """
    _check_quiver(Z, rep)
    _require_thin(rep)
    if rep.is_zero():
        raise ZeroObject("the zero representation is neither stable nor unstable")
    if check and not validate(rep):
        raise MalformedRepresentation("representation violates its relations")
    total = central_charge(Z, rep)
    best, best_z, tie = None, None, None
    for sub in subreps_thin(rep):
        z = charge_of_support(Z, rep.quiver, sub.support)
        if best is None or phase_cmp(z, best_z, Z.eps) > 0:
            best, best_z = sub, z
    if best is None:
        return StabilityVerdict(Status.STABLE)
    c = phase_cmp(best_z, total, Z.eps)
    if c > 0:
        return StabilityVerdict(Status.UNSTABLE, best)
    if c == 0:
        return StabilityVerdict(Status.SEMISTABLE_ONLY, best)
    return StabilityVerdict(Status.STABLE)


def interpolate(Z0: StabilityFunction, Z1: StabilityFunction, t) -> StabilityFunction:
    """Point ``(1-t) Z0 + t Z1`` of the segment; exact when both ends and ``t`` are."""
    if Z0.n != Z1.n:
        raise Incompatible("segment endpoints have different n")
    if Z0.exact and Z1.exact and not isinstance(t, float):
        t = GaussianRational(_frac(t))
        return StabilityFunction(Z0.n, [(1 - t) * a + t * b for a, b in zip(Z0.charges, Z1.charges)],
                                 Z0.eps)
    t = float(t)
    return StabilityFunction(Z0.n, [(1 - t) * complex(a) + t * complex(b)
                                     for a, b in zip(Z0.charges, Z1.charges)], Z0.eps)


@dataclass(frozen=True)
class Wall:
    """Parameter ``t`` where ``witness`` and the whole object share a phase.

    ``coefficients`` are ``(a, b, c)`` of ``a t^2 + b t + c``, the signed phase
    comparison ``Im(conj(Z_t(rep)) Z_t(witness))``. ``exact_t`` is the root as a
    :class:`~fractions.Fraction` when it is rational.
    """

    t: float
    witness: Subrep
    coefficients: tuple
    exact_t: Fraction | None = None

    def to_json(self) -> dict:
        return {"t": self.t, "witness": self.witness.to_json(),
                "exact_t": None if self.exact_t is None else str(self.exact_t)}


def _surd_sign(x: Fraction, s: int, disc: Fraction) -> int:
    """Sign of ``x + s*sqrt(disc)`` for rational ``x``, ``disc > 0``, ``s = +-1``."""
    if x == 0 or (x > 0) == (s > 0):
        return s if x == 0 else (1 if x > 0 else -1)
    sq = x * x
    if sq > disc:
        return 1 if x > 0 else -1
    if sq < disc:
        return s
    return 0


def _rational_sqrt(q: Fraction) -> Fraction | None:
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _exact_roots_in_unit(a: Fraction, b: Fraction, c: Fraction) -> list[tuple[float, Fraction | None]]:
    """Simple (sign-changing) roots of ``a t^2 + b t + c`` strictly inside (0, 1)."""
    if a == 0:
        if b == 0:
            return []
        t = -c / b
        return [(float(t), t)] if 0 < t < 1 else []
    disc = b * b - 4 * a * c
    if disc <= 0:
        return []
    out = []
    root = _rational_sqrt(disc)
    for s in (-1, 1):
        if root is not None:
            t = (-b + s * root) / (2 * a)
            if 0 < t < 1:
                out.append((float(t), t))
            continue
        sa = 1 if a > 0 else -1
        # sign(t - q) = sign(2a) * sign(-b - 2aq + s*sqrt(disc))
        above0 = sa * _surd_sign(-b, s, disc)
        below1 = sa * _surd_sign(-b - 2 * a, s, disc)
        if above0 > 0 and below1 < 0:
            with localcontext() as ctx:
                ctx.prec = 60
                D = Decimal(disc.numerator) / Decimal(disc.denominator)
                val = (Decimal(-b.numerator) / Decimal(b.denominator) + s * D.sqrt()) / (
                    2 * Decimal(a.numerator) / Decimal(a.denominator))
            out.append((float(val), None))
    return sorted(out)


def _float_roots_in_unit(a: float, b: float, c: float, eps: float) -> list[tuple[float, None]]:
    scale = max(abs(a), abs(b), abs(c), 1e-300)
    if abs(a) <= eps * scale:
        if abs(b) <= eps * scale:
            return []
        t = -c / b
        return [(t, None)] if 0 < t < 1 else []
    disc = b * b - 4 * a * c
    if disc <= eps * scale * scale:
        return []
    r = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(r, b))
    roots = sorted({q / a, c / q} if q != 0 else {-b / (2 * a)})
    return [(t, None) for t in roots if 0 < t < 1]


def segment_coefficients(Z0, Z1, q: Quiver, sub_support, full_support, dims=None):
    """``(a, b, c)`` with ``Im(conj(R_t) A_t) = a t^2 + b t + c`` on the segment."""
    A0 = charge_of_support(Z0, q, sub_support)
    A1 = charge_of_support(Z1, q, sub_support)
    R0 = charge_of_support(Z0, q, full_support, dims)
    R1 = charge_of_support(Z1, q, full_support, dims)
    dA, dR = A1 - A0, R1 - R0
    c = cross(R0, A0)
    b = cross(R0, dA) + cross(dR, A0)
    a = cross(dR, dA)
    return a, b, c


def walls_on_segment(Z0: StabilityFunction, Z1: StabilityFunction,
                     rep: Representation) -> list[Wall]:
    """Walls of ``rep`` on ``Z_t = (1-t) Z0 + t Z1``, ``0 < t < 1``, sorted by ``t``.

    Tangential (double) roots are skipped: the comparison keeps its sign there.
    """
    if Z0.n != Z1.n:
        raise Incompatible("segment endpoints have different n")
    _check_quiver(Z0, rep)
    _require_thin(rep)
    if rep.is_zero():
        raise ZeroObject("the zero representation has no walls")
    q = rep.quiver
    exact = Z0.exact and Z1.exact
    if not exact:
        Z0 = StabilityFunction(Z0.n, [complex(z) for z in Z0.charges], Z0.eps)
        Z1 = StabilityFunction(Z1.n, [complex(z) for z in Z1.charges], Z1.eps)
    walls = []
    for sub in subreps_thin(rep):
        a, b, c = segment_coefficients(Z0, Z1, q, sub.support, rep.support, rep.dims)
        if exact:
            roots = _exact_roots_in_unit(a, b, c)
        else:
            roots = _float_roots_in_unit(a, b, c, Z0.eps)
        for t, t_exact in roots:
            Zt = interpolate(Z0, Z1, t)
            A = charge_of_support(Zt, q, sub.support)
            R = charge_of_support(Zt, q, rep.support, rep.dims)
            if dot(R, A) > 0:
                walls.append(Wall(t, sub, (a, b, c), t_exact))
    walls.sort(key=lambda w: (w.t, len(w.witness.support), w.witness.sorted_support()))
    return walls


def charges_svg(Z: StabilityFunction, size: int = 400) -> str:
    """Scatter of the charges in the complex plane, one dot per index class."""
    pts = [complex(z) for z in Z.charges]
    r = max(1.0, max(abs(p) for p in pts)) * 1.1
    half = size / 2

    def xy(p):
        return half + p.real / r * half, size - 20 - p.imag / r * (size - 40)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f'<line x1="0" y1="{size - 20}" x2="{size}" y2="{size - 20}" stroke="black"/>',
           f'<line x1="{half}" y1="0" x2="{half}" y2="{size}" stroke="black"/>']
    for k, p in enumerate(pts):
        x, y = xy(p)
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="4" fill="black"><title>Z_{k}</title></circle>')
        out.append(f'<text x="{x + 6:.3f}" y="{y - 6:.3f}" font-size="10">{k}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

