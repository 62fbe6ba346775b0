from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

import oracles as O
from reflekt import linalg as la
from reflekt.lattice import (EnumerationCapExceeded, IntegerLattice, LatticeError, cartan_matrix,
                             discriminant_action_is_minus_identity, discriminant_forms_match, div,
                             dual_lattice_rescaled, eichler_equivalent, eichler_invariants, lattice_L,
                             min_norm_per_class, paramodular_lattice, parse_lattice, primitive_multiple,
                             reflection, root_lattice, roots, short_vectors)

PROPS = settings(max_examples=120, deadline=None)

LABELS = [f"A{n}" for n in range(1, 9)] + [f"D{n}" for n in range(4, 9)] + ["E6", "E7", "E8"]
SMALL = ["A1", "A2", "A3", "A4", "D4"]


class TestParsing:
    def test_mini_language(self):
        assert parse_lattice("2U+A7(-1)").signature() == (2, 9)
        assert parse_lattice("2U(3)+A2(-1)").det == 81 * 3
        lat = parse_lattice("2U+<-42>")
        assert lat.splits_2u and lat.signature() == (2, 3)

    def test_rejects_garbage(self):
        with pytest.raises(LatticeError):
            parse_lattice("2U+Q5")
        with pytest.raises(LatticeError):
            parse_lattice("U+<3>")

    def test_degenerate_rejected(self):
        with pytest.raises(LatticeError):
            IntegerLattice([[2, 2], [2, 2]])


class TestDiscriminant:
    @pytest.mark.parametrize("label,desc", [("A2", "C3"), ("D4", "C2xC2"), ("D5", "C4"), ("E6", "C3"),
                                            ("E7", "C2"), ("E8", "trivial"), ("A7", "C8")])
    def test_root_lattices(self, label, desc):
        assert root_lattice(label).discriminant_group().describe() == desc

    def test_paramodular(self):
        lat = paramodular_lattice(21)
        assert lat.discriminant_group().describe() == "C42"
        assert lat.signature() == (2, 3)

    def test_quadratic_form_values(self):
        dg = root_lattice("A2").discriminant_group()
        assert sorted(dg.q(a) for a in dg.elements()) == [0, Fraction(2, 3), Fraction(2, 3)]


class TestShortVectors:
    @pytest.mark.parametrize("label", LABELS)
    def test_root_counts(self, label):
        n = int(label[1:])
        expected = {"A": n * (n + 1), "D": 2 * n * (n - 1)}.get(label[0]) or {6: 72, 7: 126, 8: 240}[n]
        assert len(roots(root_lattice(label))) == expected

    @pytest.mark.parametrize("label", SMALL)
    def test_box_cross_check(self, label):
        assert len(roots(root_lattice(label))) == O.box_roots(cartan_matrix(label))

    def test_negative_definite(self):
        g = [[-x for x in row] for row in cartan_matrix("A2")]
        vs = short_vectors(g, 2)
        assert len(vs) == 6 and all(nv == -2 for _, nv in vs)

    def test_cap(self):
        with pytest.raises(EnumerationCapExceeded):
            short_vectors(cartan_matrix("E8"), 4, cap=100)

    def test_env_cap(self, monkeypatch):
        monkeypatch.setenv("REFLEKT_MAX_ENUM", "50")
        with pytest.raises(EnumerationCapExceeded):
            roots(root_lattice("E8"))


class TestMinNorms:
    @PROPS
    @given(st.integers(1, 8))
    def test_an_formula(self, n):
        mins = min_norm_per_class(root_lattice(f"A{n}"))
        assert sorted(mins.values()) == O.an_min_norms(n)

    def test_e6(self):
        mins = min_norm_per_class(root_lattice("E6"))
        assert sorted(mins.values()) == [0, Fraction(4, 3), Fraction(4, 3)]

    def test_dual_rescaling(self):
        L = lattice_L(root_lattice("A2"))
        assert discriminant_forms_match(dual_lattice_rescaled(L, 3), parse_lattice("2U(3)+A2(-1)"))
        assert not discriminant_forms_match(L, parse_lattice("2U(3)+A2(-1)"))


class TestVectors:
    def test_div_and_primitive(self):
        lat = paramodular_lattice(21)
        v = primitive_multiple([0, 2, Fraction(14, 42), 1, 0])
        assert v == [0, 6, 1, 3, 0]
        assert lat.norm(v) == -6 and div(v, lat) == 3

    def test_sigma_v_involution_on_discriminant(self):
        lat = paramodular_lattice(21)
        r = reflection([0, 6, 1, 3, 0], lat)
        assert r.integral and not r.stable
        assert not discriminant_action_is_minus_identity(r, lat)

    def test_eichler(self):
        lat = paramodular_lattice(21)
        assert eichler_invariants([1, 0, 0, 0, -1], lat) == (-2, 1, (0,))
        assert eichler_equivalent([1, 0, 0, 0, -1], [0, 1, 0, -1, 0], lat)
        with pytest.raises(LatticeError):
            eichler_equivalent([1, 0], [1, 0], root_lattice("A2"))


def _lattices():
    return st.sampled_from(["A2", "A3", "D4", "E6", "2U+A2(-1)", "2U+<-42>", "2U+D5(-1)", "U+A1(-1)"])


@PROPS
@given(_lattices(), st.lists(st.integers(-3, 3), min_size=9, max_size=9))
def test_reflection_properties(spec, coords):
    lat = root_lattice(spec) if "U" not in spec else parse_lattice(spec)
    v = coords[: lat.rank]
    assume(any(v) and lat.norm(v) != 0)
    r = reflection(v, lat)
    g = lat.gram
    # Gram preservation and involutivity hold over Q regardless of integrality
    m = r.matrix
    assert la.matmul(la.matmul(la.transpose(m), g), m) == [[Fraction(x) for x in row] for row in g]
    assert la.matmul(m, m) == la.identity(lat.rank)
    assert r.apply(v) == [-x for x in v]
    if lat.norm(v) in (2, -2):
        assert r.integral


@st.composite
def int_matrices(draw):
    rows = draw(st.integers(1, 4))
    cols = draw(st.integers(1, 4))
    return [[draw(st.integers(-6, 6)) for _ in range(cols)] for _ in range(rows)]


@PROPS
@given(int_matrices())
def test_smith_normal_form(a):
    d, u, v = la.smith_normal_form(a)
    prod = la.matmul(la.matmul(u, a), v)
    for i, row in enumerate(prod):
        for j, x in enumerate(row):
            assert x == (d[i] if i == j else 0)
    assert abs(la.det(u)) == 1 and abs(la.det(v)) == 1
    nz = [x for x in d if x]
    assert all(x > 0 for x in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


@PROPS
@given(st.sampled_from(["A2", "A3", "D4", "A1"]), st.lists(st.integers(-2, 2), min_size=16, max_size=16))
def test_discriminant_order_is_det(label, entries):
    c = cartan_matrix(label)
    n = len(c)
    b = [entries[i * n:(i + 1) * n] for i in range(n)]
    det_b = O.int_det(b)
    assume(det_b != 0)
    g = la.matmul(la.matmul(la.transpose(b), c), b)
    lat = IntegerLattice(g)
    assert lat.discriminant_group().order == abs(O.int_det(g))
