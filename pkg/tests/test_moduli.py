"""Moduli chart pipeline and the mirror-side report."""
import itertools

import pytest

from fermat_mirror import moduli
from fermat_mirror.errors import InvalidStabilityFunction, SearchExhausted, TheoremViolation
from fermat_mirror.fields import C64, Q, QI, GaussianRational, I
from fermat_mirror.quiver import build_beilinson
from fermat_mirror.rep import is_isomorphic_thin, simple_at, thin_rep_from_point
from fermat_mirror.sdr import ProjectivePoint, extract_point, fermat_value, on_fermat
from fermat_mirror.stability import Status, StabilityFunction, StabilityVerdict, is_stable, make_Zn, mirror
from fermat_mirror.moduli import build_chart, mirror_report, sample_control_points, \
    sample_fermat_points, syz_pipeline, thin_family


def P(*xs, field=QI):
    return ProjectivePoint(list(xs), field)


def test_rational_cubic_points():
    pts = sample_fermat_points(3, Q, 50)
    assert set(pts) >= {P(1, -1, 0, field=Q), P(1, 0, -1, field=Q), P(0, 1, -1, field=Q)}
    assert all(on_fermat(p) for p in pts)
    assert P(3, 4, -5, field=Q) not in pts
    assert fermat_value(P(3, 4, -5, field=Q)) == Q.coerce("-34/27")  # normalized by 3^3


def test_search_brute_force():
    # every Gaussian integer vector of height <= 1 for n = 3, checked directly
    vals = [GaussianRational(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)]
    brute = set()
    for v in itertools.product(vals, repeat=3):
        if any(c != 0 for c in v) and sum((c ** 3 for c in v), GaussianRational(0)) == 0:
            brute.add(ProjectivePoint(v, QI))
    assert brute <= set(sample_fermat_points(3, QI, 100, height=1))


def test_quartic_exact_search_reports_bound():
    with pytest.raises(SearchExhausted, match=f"height {moduli.DEFAULT_HEIGHT}"):
        sample_fermat_points(4, QI, 10)
    with pytest.raises(SearchExhausted, match="height 6"):
        sample_fermat_points(4, QI, 10, height=6)


def test_float_quartic_points():
    pts = sample_fermat_points(4, C64, 30, seed=3)
    assert len(pts) == 30
    for p in pts:
        assert abs(sum(x ** 4 for x in p.coords)) <= 1e-9
    again = sample_fermat_points(4, C64, 30, seed=3)
    assert all(a == b for a, b in zip(pts, again))


def test_controls_are_off_locus():
    for f in (Q, QI, C64):
        assert not any(on_fermat(p) for p in sample_control_points(3, f, 15, seed=1))


def test_pipeline_example():
    chart = syz_pipeline(3, make_Zn(3), [P(1, -1, 0), P(0, 1, -1), P(1, 1, 1)])
    verdicts = {e.point: e.verdict for e in chart.entries}
    assert verdicts == {P(1, -1, 0): "on-fermat", P(0, 1, -1): "on-fermat", P(1, 1, 1): "zero-object"}
    assert syz_pipeline(3, make_Zn(3), []).entries == []
    dup = syz_pipeline(3, make_Zn(3), [P(1, -1, 0), P(2, -2, 0), P(I, -I, 0)])
    assert len(dup.entries) == 1


def test_pipeline_rejects_bad_Z():
    with pytest.raises(InvalidStabilityFunction):
        syz_pipeline(3, mirror(make_Zn(3)), [P(1, -1, 0)])
    with pytest.raises(InvalidStabilityFunction):
        syz_pipeline(3, make_Zn(4), [P(1, -1, 0)])


def test_pipeline_surfaces_violations(monkeypatch):
    def fake(rep, Z, check=True):
        return StabilityVerdict(Status.UNSTABLE, None)
    monkeypatch.setattr(moduli, "is_stable", fake)
    with pytest.raises(TheoremViolation):
        syz_pipeline(3, make_Zn(3), [P(1, -1, 0)])


@pytest.mark.parametrize("n,field", [(3, Q), (3, QI), (3, C64), (4, C64)])
def test_chart_invariants(n, field):
    chart = build_chart(n, field, 24, seed=5)
    Z = chart.Z
    on = [e for e in chart.entries if e.verdict == "on-fermat"]
    off = [e for e in chart.entries if e.verdict == "zero-object"]
    assert len(off) >= 6 and on
    for e in chart.entries:
        assert is_stable(e.rep, Z).stable
        assert extract_point(e.rep, Z) == e.point
        assert (e.verdict == "on-fermat") == on_fermat(e.point)
    for a, b in itertools.combinations(chart.entries, 2):
        assert not (a.point == b.point)
        if field.exact:
            assert not is_isomorphic_thin(a.rep, b.rep)


def test_chart_deterministic():
    a = build_chart(4, C64, 20, seed=11).to_jsonl()
    b = build_chart(4, C64, 20, seed=11).to_jsonl()
    assert a == b
    assert build_chart(3, QI, 20, seed=11).to_jsonl() == build_chart(3, QI, 20, seed=11).to_jsonl()
    assert a != build_chart(4, C64, 20, seed=12).to_jsonl()


def test_family_size_n3():
    reps, size, exhaustive = thin_family(3, QI)
    assert exhaustive and size == len(reps) == 1140


def test_mirror_report_n3():
    r = mirror_report(3)
    assert r.exhaustive and r.family_size == 1140
    simples = [e for e in r.entries if e["object"].startswith("S_")]
    assert len(simples) == 3
    assert all(e["mirror"]["status"] == "stable" for e in simples)
    thin = [e for e in r.entries if e["object"] == "thin"]
    assert all(e["mirror"]["status"] == "unstable" and e["mirror"]["witness"] for e in thin)
    # dichotomy: the only objects stable on both sides are the simples
    both = [e for e in r.entries if e["Z"]["status"] == "stable" and e["mirror"]["status"] == "stable"]
    assert both == simples
    target = next(e for e in thin if e["levels"] == [[[1, 0], [-1, 0], [0, 0]]] * 2)
    assert target["mirror"]["witness"] == ["2"] and target["Z"]["status"] == "stable"


def test_mirror_report_custom_family():
    B = build_beilinson(3)
    # a simple placed in the non-simple family is stable under the mirror
    with pytest.raises(TheoremViolation):
        mirror_report(3, family=[simple_at(B, 0)])
    r = mirror_report(3, family=[thin_rep_from_point(B, [1, 2, 3])])
    assert r.family_size == 1
