"""Symbol algebra, SdR complexes and point extraction."""
import random

import pytest
from hypothesis import given, strategies as st

from fermat_mirror import linalg
from fermat_mirror.errors import NotStable, ZeroPoint
from fermat_mirror.fields import C64, Q, QI, GaussianRational, I
from fermat_mirror.quiver import Arrow, build_beilinson
from fermat_mirror.rep import Morphism, Representation, is_isomorphic_thin, random_beilinson_rep, \
    simple_at, thin_rep_from_levels, thin_rep_from_point, validate, zero_rep
from fermat_mirror.sdr import ExteriorSymbol, ProjectivePoint, SymbolSum, build_sdr, check_complex, \
    classify_support, extract_point, fermat_value, normalize_labels, on_fermat, random_mutant, \
    sdr_morphism, single_violation_mutant, word
from fermat_mirror.stability import is_stable, make_Zn, mirror

from test_rep import point


def permutation_sign(xs):
    """Sign by counting inversions."""
    inv = sum(1 for i in range(len(xs)) for j in range(i + 1, len(xs)) if xs[i] > xs[j])
    return -1 if inv % 2 else 1


@given(st.lists(st.integers(1, 6), min_size=1, max_size=4), st.lists(st.integers(0, 3), max_size=12))
def test_normalization_confluent(labels, order):
    sign, out = normalize_labels(labels, order)
    assert (sign, out) == normalize_labels(labels)
    assert out == tuple(sorted(labels))
    if len(set(labels)) < len(labels):
        assert sign == 0
    else:
        assert sign == permutation_sign(labels)


@given(st.lists(st.integers(1, 5), min_size=2, max_size=4, unique=True), st.randoms())
def test_word_ignores_factor_order(labels, r):
    factors = [ExteriorSymbol(k, j) for k, j in enumerate(labels)]
    shuffled = list(factors)
    r.shuffle(shuffled)
    assert word(factors) == word(shuffled)


@given(st.lists(st.integers(1, 4), min_size=3, max_size=3), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_compose_associative(labels, coefs):
    a, b, c = (SymbolSum.symbol(QI, k, j, GaussianRational(x or 1))
               for k, (j, x) in enumerate(zip(labels, coefs)))
    assert c.compose(b).compose(a) == c.compose(b.compose(a))


def test_differential_example():
    E = thin_rep_from_point(build_beilinson(3), [1, -1, 0])
    d0 = build_sdr(E).differentials[0]
    assert len(d0) == 1 and len(d0[0]) == 1
    expected = SymbolSum.symbol(QI, 0, 1, 1) + SymbolSum.symbol(QI, 0, 2, -1)
    assert d0[0][0] == expected
    assert d0[0][0].to_json() == [{"coef": [1, 0], "word": [[0, 1]]}, {"coef": [-1, 0], "word": [[0, 2]]}]


def test_shapes_and_trivial_complexes():
    B = build_beilinson(3)
    c = build_sdr(zero_rep(B))
    assert c.dims == (0, 0, 0) and all(len(d) == 0 for d in c.differentials)
    E = random_beilinson_rep(3, [2, 1, 1], QI, random.Random(0))
    d0 = build_sdr(E).differentials[0]
    assert (len(d0), len(d0[0])) == (1, 2)
    assert check_complex(build_sdr(thin_rep_from_point(build_beilinson(2), [1, 5]))).ok


@given(st.integers(0, 10**6))
def test_valid_reps_give_complexes(seed):
    rng = random.Random(seed)
    n = rng.choice([3, 4, 5])
    E = random_beilinson_rep(n, [rng.randint(0, 2) for _ in range(n)], QI, rng)
    assert check_complex(build_sdr(E)).ok


@pytest.mark.parametrize("level", ["first", "last"])
@pytest.mark.parametrize("n", [3, 4, 5])
def test_single_violation_names_pair(n, level):
    E = single_violation_mutant(n, level, 1, 3, 2, QI)
    assert len(validate(E).violations) == 1
    report = check_complex(build_sdr(E, strict=False))
    assert not report.ok
    assert {tuple(x["labels"]) for x in report.nonzero} == {(1, 3)}


@given(st.integers(3, 5).flatmap(lambda n: st.lists(point(n), min_size=n - 1, max_size=n - 1)))
def test_surviving_words_are_the_failed_relations(levels):
    # independent oracle: the label pairs of the failing relations
    E = thin_rep_from_levels(build_beilinson(len(levels[0])), levels)
    failed = {tuple(sorted(v.labels)) for v in validate(E).violations}
    found = {tuple(x["labels"]) for x in check_complex(build_sdr(E, strict=False)).nonzero}
    assert found == failed


def test_random_mutants_fail(rng):
    for _ in range(20):
        E = random_mutant(rng.choice([3, 4, 5]), QI, rng)
        assert len(validate(E).violations) == 1
        assert not check_complex(build_sdr(E, strict=False)).ok


def test_chain_map(rng):
    E = random_beilinson_rep(3, [1, 2, 1], QI, rng)
    f = Morphism(E, E, {i: linalg.scalar(GaussianRational(2, 1), QI) if E.dim(i) == 1
                        else linalg.matrix([[GaussianRational(2, 1), 0], [0, GaussianRational(2, 1)]], QI)
                        for i in range(3)})
    assert f.is_morphism()
    assert sdr_morphism(f).is_chain_map()


def test_extract_examples():
    B = build_beilinson(3)
    Z = make_Zn(3)
    E = thin_rep_from_point(B, [1, -1, 0])
    assert extract_point(E, Z) == ProjectivePoint([1, -1, 0], QI)
    scaled = thin_rep_from_levels(B, [[1, -1, 0], [7, -7, 0]])
    assert extract_point(scaled, Z) == ProjectivePoint([1, -1, 0], QI)
    with pytest.raises(NotStable):
        extract_point(simple_at(B, 1), Z)
    with pytest.raises(NotStable):
        extract_point(E, mirror(Z))


def test_fermat_examples():
    assert fermat_value(ProjectivePoint([1, -1, 0], Q), 3) == 0
    assert fermat_value(ProjectivePoint([1, 2, 1], Q), 3) == 10
    assert fermat_value(ProjectivePoint([1, I, 1, I], QI), 4) == 4
    with pytest.raises(ZeroPoint):
        ProjectivePoint([0, 0, 0], Q)


def test_classify_examples():
    B = build_beilinson(3)
    Z = make_Zn(3)
    v = classify_support(thin_rep_from_point(B, [1, -1, 0]), Z)
    assert v.kind == "point-on-fermat" and v.point == ProjectivePoint([1, -1, 0], QI)
    v = classify_support(thin_rep_from_point(B, [1, 1, 1]), Z)
    assert v.kind == "zero-object" and v.value == 3
    assert classify_support(thin_rep_from_point(B, [0, 1, -1]), Z).on_fermat


@given(st.integers(2, 5).flatmap(point))
def test_extract_roundtrip(x):
    n = len(x)
    E = thin_rep_from_point(build_beilinson(n), x)
    Z = make_Zn(n)
    if is_stable(E, Z).stable:
        assert extract_point(E, Z) == ProjectivePoint(x, QI)


@given(st.lists(st.integers(2, 3).flatmap(point), min_size=2, max_size=2).filter(lambda p: len(p[0]) == len(p[1])))
def test_points_distinguish_isomorphism_classes(pair):
    x, y = pair
    B = build_beilinson(len(x))
    Z = make_Zn(len(x))
    a, b = thin_rep_from_point(B, x), thin_rep_from_point(B, y)
    assert (extract_point(a, Z) == extract_point(b, Z)) == is_isomorphic_thin(a, b)


@given(st.integers(2, 5).flatmap(point), st.sampled_from(["2", "-1/3", "1+i", "-2i"]))
def test_fermat_homogeneous(x, lam):
    n = len(x)
    xs = [QI.coerce(c) for c in x]
    l = QI.coerce(lam)
    raw = lambda v: sum((c ** n for c in v), GaussianRational(0))
    assert raw([l * c for c in xs]) == l ** n * raw(xs)
    p, q = ProjectivePoint(xs, QI), ProjectivePoint([l * c for c in xs], QI)
    assert p == q and on_fermat(p) == on_fermat(q)


def test_float_points():
    p = ProjectivePoint([1, -1 + 1e-13, 0], C64)
    assert on_fermat(p)
    assert not on_fermat(ProjectivePoint([1, 2, 1], C64))
    assert p == ProjectivePoint([2, -2, 0], C64)
