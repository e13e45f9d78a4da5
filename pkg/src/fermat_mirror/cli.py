"""Command-line interface.

Every subcommand reads and writes JSON (DOT or SVG where asked). Exit status is
0 on success, 1 on a domain error, 2 on a usage error and 3 when a checked
theorem fails.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import FermatMirrorError, InvalidParameter, TheoremViolation
from .fields import DEFAULT_EPS, field_from_tag
from .framed import (are_equivalent, check_framed, framed_from_json, framed_to_json, functor_F,
                     functor_G, lemma_identities, morphism_to_json, trivialize)
from .moduli import DEFAULT_HEIGHT, build_chart, mirror_report, sample_fermat_points, syz_pipeline
from .quiver import DEFAULT_MAX_N, KINDS, TENSOR, build, quiver_from_json, to_dot
from .rep import rep_from_json, rep_to_json, thin_rep_from_point, validate
from .sdr import ProjectivePoint, build_sdr, check_complex, classify_support, extract_point, \
    fermat_value, on_fermat
from .stability import StabilityFunction, charges_svg, is_stable, make_Zn, mirror, walls_on_segment

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_THEOREM = 0, 1, 2, 3


class UsageError(Exception):
    pass


# I/O helpers -----------------------------------------------------------------

def _read_json(path):
    if path is None:
        raise UsageError("this command needs an input file (--in or a specific flag)")
    try:
        with (sys.stdin if path == "-" else open(path)) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidParameter(f"{path} is not valid JSON: {exc}") from None


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _config(args) -> dict:
    return {"n": args.n, "field": args.field or "Qi", "seed": args.seed, "epsilon": args.epsilon,
            "max_n": args.max_n, "version": __version__}


def _emit(args, payload, kind: str = "json"):
    fmt = args.format or kind
    if fmt != kind:
        raise UsageError(f"--format {fmt} is not available for this command (use {kind})")
    if kind == "json":
        if isinstance(payload, dict) and not args.no_provenance:
            payload = dict(payload, provenance=_config(args))
        text = _dump(payload)
    else:
        text = payload if payload.endswith("\n") else payload + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _strip(data):
    if isinstance(data, dict):
        data = {k: v for k, v in data.items() if k != "provenance"}
    return data


def _field(args):
    return field_from_tag(args.field or "Qi", eps=args.epsilon)


def _resolve(args, n: int, tag: str):
    # unset flags take their values from the input, so provenance echoes what was used
    if args.n is None:
        args.n = n
    if args.field is None:
        args.field = tag


def _load_rep(args, path):
    E = rep_from_json(_strip(_read_json(path)), eps=args.epsilon, max_n=args.max_n)
    _resolve(args, E.quiver.n, E.field.tag)
    return E


def _load_framed(args, path):
    fr = framed_from_json(_strip(_read_json(path)), eps=args.epsilon, max_n=args.max_n)
    _resolve(args, fr.quiver.n, fr.field.tag)
    return fr


def _load_Z(args, path):
    Z = StabilityFunction.from_json(_strip(_read_json(path)), eps=args.epsilon)
    _resolve(args, Z.n, "Qi" if Z.exact else "C64")
    return Z


def _need_n(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    return args.n


def _parse_point(text: str, field) -> ProjectivePoint:
    return ProjectivePoint([field.coerce(t.strip()) for t in text.split(",")], field)


def _load_points(args, path, field) -> list[ProjectivePoint]:
    data = _strip(_read_json(path))
    if isinstance(data, dict):
        data = data.get("points", [])
    if not isinstance(data, list):
        raise InvalidParameter("points file must be a list of coordinate lists")
    return [ProjectivePoint([field.from_json(c) for c in p], field) for p in data]


# quiver ------------------------------------------------------------------------

def cmd_quiver_build(args):
    q = build(args.kind, _need_n(args), max_n=args.max_n)
    out = q.to_json()
    out["counts"] = {"vertices": len(q.vertices), "arrows": len(q.arrows), "relations": len(q.relations)}
    _emit(args, out)


def cmd_quiver_export_dot(args):
    if args.inp:
        q = quiver_from_json(_strip(_read_json(args.inp)), max_n=args.max_n)
    else:
        q = build(args.kind, _need_n(args), max_n=args.max_n)
    _emit(args, to_dot(q), "dot")


# rep ----------------------------------------------------------------------------

def cmd_rep_validate(args):
    report = validate(_load_rep(args, args.inp))
    _emit(args, report.to_json())
    return EXIT_OK if report.ok else EXIT_DOMAIN


def cmd_rep_from_point(args):
    f = _field(args)
    coords = [f.coerce(t.strip()) for t in args.point.split(",")]
    q = build("beilinson", len(coords), max_n=args.max_n)
    _emit(args, rep_to_json(thin_rep_from_point(q, coords, f)))


# stability ----------------------------------------------------------------------

def cmd_stability_make(args):
    n = _need_n(args)
    _emit(args, make_Zn(n, exact=_field(args).exact).to_json())


def cmd_stability_mirror(args):
    _emit(args, mirror(_load_Z(args, args.inp)).to_json())


def cmd_stability_check(args):
    E = _load_rep(args, args.rep)
    Z = _load_Z(args, args.stability) if args.stability else make_Zn(E.quiver.n, exact=E.field.exact)
    _emit(args, is_stable(E, Z).to_json())


def cmd_stability_walls(args):
    E = _load_rep(args, args.rep)
    Z0 = _load_Z(args, args.start) if args.start else make_Zn(E.quiver.n, exact=E.field.exact)
    Z1 = _load_Z(args, args.end) if args.end else mirror(Z0)
    walls = walls_on_segment(Z0, Z1, E)
    _emit(args, {"walls": [w.to_json() for w in walls]})


def cmd_stability_plot_svg(args):
    Z = _load_Z(args, args.inp) if args.inp else make_Zn(_need_n(args))
    _emit(args, charges_svg(Z), "svg")


# framed -------------------------------------------------------------------------

def cmd_framed_check(args):
    report = check_framed(_load_framed(args, args.inp), exhaustive=args.exhaustive)
    _emit(args, report.to_json())
    return EXIT_OK if report.ok else EXIT_DOMAIN


def cmd_framed_trivialize(args):
    triv, iso = trivialize(_load_framed(args, args.inp))
    _emit(args, {"framed": framed_to_json(triv), "isomorphism": morphism_to_json(iso)})


def cmd_framed_functor_f(args):
    _emit(args, framed_to_json(functor_F(_load_rep(args, args.inp), max_n=args.max_n)))


def cmd_framed_functor_g(args):
    _emit(args, rep_to_json(functor_G(_load_framed(args, args.inp))))


def cmd_framed_roundtrip(args):
    data = _strip(_read_json(args.inp))
    if data.get("quiver", {}).get("kind") == TENSOR:
        fr = framed_from_json(data, eps=args.epsilon, max_n=args.max_n)
        E = functor_G(fr)
    else:
        E = rep_from_json(data, eps=args.epsilon, max_n=args.max_n)
        fr = functor_F(E, max_n=args.max_n)
    out = {
        "G_of_F_equals": functor_G(functor_F(E, max_n=args.max_n)) == E,
        "F_of_G_isomorphic": are_equivalent(fr, functor_F(functor_G(fr), max_n=args.max_n)),
        "lemma": lemma_identities(fr),
    }
    _emit(args, out)
    if not (out["G_of_F_equals"] and out["F_of_G_isomorphic"] and all(out["lemma"].values())):
        return EXIT_THEOREM


# sdr ------------------------------------------------------------------------------

def cmd_sdr_build(args):
    _emit(args, build_sdr(_load_rep(args, args.rep)).to_json())


def cmd_sdr_check(args):
    report = check_complex(build_sdr(_load_rep(args, args.rep), strict=False))
    _emit(args, report.to_json())
    if not report.ok:
        for item in report.nonzero:
            print(f"d o d nonzero: slot {item['slot']} entry ({item['row']},{item['col']}) "
                  f"labels {item['labels']}", file=sys.stderr)
        return EXIT_DOMAIN


def cmd_sdr_extract_point(args):
    E = _load_rep(args, args.rep)
    Z = _load_Z(args, args.stability) if args.stability else make_Zn(E.quiver.n, exact=E.field.exact)
    p = extract_point(E, Z)
    verdict = classify_support(E, Z)
    _emit(args, {"point": p.to_json(), "support": verdict.kind})


def cmd_sdr_fermat(args):
    p = _parse_point(args.point, _field(args))
    n = args.n or p.n
    v = fermat_value(p, n)
    _emit(args, {"point": p.to_json(), "value": p.field.to_json(v), "on_fermat": on_fermat(p, n)})


# moduli ---------------------------------------------------------------------------

def cmd_moduli_sample(args):
    n, f = _need_n(args), _field(args)
    pts = sample_fermat_points(n, f, args.count, seed=args.seed, height=args.height)
    _emit(args, {"n": n, "field": f.tag, "points": [p.to_json() for p in pts]})


def cmd_moduli_pipeline(args):
    n, f = _need_n(args), _field(args)
    Z = _load_Z(args, args.stability) if args.stability else make_Zn(n, exact=f.exact)
    if args.points:
        chart = syz_pipeline(n, Z, _load_points(args, args.points, f), seed=None)
    else:
        chart = build_chart(n, f, args.count, seed=args.seed, Z=Z, height=args.height)
    text = chart.to_jsonl(provenance=not args.no_provenance)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_moduli_mirror_report(args):
    n = _need_n(args)
    Z = _load_Z(args, args.stability) if args.stability else make_Zn(n)
    r = mirror_report(n, Z, seed=args.seed, sample_size=args.count)
    out = r.to_json()
    if args.summary:
        out.pop("entries")
    _emit(args, out)


# parser -------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--n", type=int)
    p.add_argument("--field", choices=["Q", "Qi", "C64"], help="default Qi, or the input's field")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPS)
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    p.add_argument("--in", dest="inp")
    p.add_argument("--out")
    p.add_argument("--format", choices=["json", "dot", "svg"])
    p.add_argument("--no-provenance", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="fermat-mirror", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    groups = parser.add_subparsers(dest="group", required=True)

    def add(group, name, func, **extra):
        sp = group.add_parser(name, parents=[common])
        for flag, kw in extra.items():
            sp.add_argument("--" + flag.replace("_", "-"), **kw)
        sp.set_defaults(func=func)
        return sp

    g = groups.add_parser("quiver").add_subparsers(dest="cmd", required=True)
    add(g, "build", cmd_quiver_build, kind=dict(choices=KINDS, default=TENSOR))
    add(g, "export-dot", cmd_quiver_export_dot, kind=dict(choices=KINDS, default=TENSOR))

    g = groups.add_parser("rep").add_subparsers(dest="cmd", required=True)
    add(g, "validate", cmd_rep_validate)
    add(g, "from-point", cmd_rep_from_point, point=dict(required=True, help="comma-separated, e.g. 1,-1,0"))

    g = groups.add_parser("stability").add_subparsers(dest="cmd", required=True)
    add(g, "make", cmd_stability_make)
    add(g, "mirror", cmd_stability_mirror)
    add(g, "check", cmd_stability_check, rep=dict(required=True), stability=dict())
    add(g, "walls", cmd_stability_walls, rep=dict(required=True), start=dict(), end=dict())
    add(g, "plot-svg", cmd_stability_plot_svg)

    g = groups.add_parser("framed").add_subparsers(dest="cmd", required=True)
    add(g, "check", cmd_framed_check, exhaustive=dict(action="store_true"))
    add(g, "trivialize", cmd_framed_trivialize)
    add(g, "functor-f", cmd_framed_functor_f)
    add(g, "functor-g", cmd_framed_functor_g)
    add(g, "roundtrip", cmd_framed_roundtrip)

    g = groups.add_parser("sdr").add_subparsers(dest="cmd", required=True)
    add(g, "build", cmd_sdr_build, rep=dict())
    add(g, "check", cmd_sdr_check, rep=dict())
    add(g, "extract-point", cmd_sdr_extract_point, rep=dict(), stability=dict())
    add(g, "fermat", cmd_sdr_fermat, point=dict(required=True))

    g = groups.add_parser("moduli").add_subparsers(dest="cmd", required=True)
    add(g, "sample", cmd_moduli_sample, count=dict(type=int, default=20), height=dict(type=int, default=DEFAULT_HEIGHT))
    add(g, "pipeline", cmd_moduli_pipeline, points=dict(), stability=dict(),
        count=dict(type=int, default=20), height=dict(type=int, default=DEFAULT_HEIGHT))
    add(g, "mirror-report", cmd_moduli_mirror_report, stability=dict(),
        count=dict(type=int, default=2000, help="sample size when the family is too large"),
        summary=dict(action="store_true", help="omit the per-object table"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    # --rep and --in are interchangeable where a rep is read
    if getattr(args, "rep", "unset") is None:
        args.rep = args.inp
    try:
        if args.n is not None and args.n < 2:
            raise UsageError("--n must be >= 2")
        if args.epsilon <= 0:
            raise UsageError("--epsilon must be positive")
        status = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TheoremViolation as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        return EXIT_THEOREM
    except FermatMirrorError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ZeroDivisionError as exc:
        print(f"error [singular]: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return status or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
