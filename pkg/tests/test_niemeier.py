from fractions import Fraction

import pytest

from reflekt import niemeier as nm
from reflekt.lattice import root_lattice, roots

# (S, N, weight) for the full-component placement in the default model
EXPECTED = [
    ("A2", 33, 45), ("2A2", 30, 42), ("3A2", 27, 39), ("A3", 42, 54), ("2A3", 36, 48), ("A4", 50, 62),
    ("A5", 57, 69), ("A6", 63, 75), ("A7", 68, 80), ("D5", 76, 88), ("D7", 102, 114), ("E6", 108, 120),
]


def test_parse_and_format():
    assert nm.parse_root_sum("2A7+2D5") == ("A7", "A7", "D5", "D5")
    assert nm.parse_root_sum("2A7 ⊕ 2D5") == ("A7", "A7", "D5", "D5")
    assert nm.parse_root_sum("Leech") == ()
    assert nm.format_root_sum(("A2", "A2", "A2")) == "3A2"
    with pytest.raises(nm.EmbeddingError):
        nm.parse_root_sum("2X7")


def test_table_has_24_systems():
    systems = nm.niemeier_systems()
    assert len(systems) == 24
    assert all(s.rank == 24 for s in systems if s.components)


@pytest.mark.parametrize("system", [s for s in nm.niemeier_systems() if s.components], ids=lambda s: s.name)
def test_root_count_is_24h(system):
    total = sum(len(roots(root_lattice(c))) for c in system.components)
    assert total == system.classical_root_count


def test_unknown_system():
    with pytest.raises(nm.EmbeddingError):
        nm.niemeier("2A7+D5")


@pytest.mark.parametrize("S,N,weight", EXPECTED)
def test_quasi_pullback_weights(S, N, weight):
    rep = nm.quasi_pullback(S, nm.THEOREM_MODELS[S])
    assert rep.N == N and rep.weight == weight and rep.cusp
    assert rep.strongly_reflective
    assert rep.weight > rep.dimension


def test_leech_and_e8():
    rep = nm.quasi_pullback("", "Leech")
    assert (rep.N, rep.weight, rep.cusp) == (0, 12, False)
    rep = nm.quasi_pullback("E8", "3E8")
    assert (rep.weight, rep.cusp) == (252, True)


def test_a7_discrepancy_surfaced():
    rep = nm.quasi_pullback("A7", "2A7+2D5")
    notes = " ".join(rep.notes)
    assert "136" in notes and "96" in notes and "80" in notes and "60" in notes
    assert rep.to_dict()["notes"] == rep.notes


def test_a8_not_strongly_reflective():
    rep = nm.quasi_pullback("A8", "3A8")
    assert not rep.strongly_reflective
    assert rep.trace.max_class_norm == Fraction(20, 9)


def test_no_embedding():
    with pytest.raises(nm.EmbeddingError):
        nm.quasi_pullback("E8", "24A1")


def test_placements_are_deduplicated():
    # A2 sits in exactly one way inside A2 up to the automorphisms we quotient by
    embs = nm.embed_component(("A2",), nm.niemeier("12A2"))
    assert len(embs) == 1


@pytest.mark.parametrize("n", range(1, 9))
def test_primitivity_bound(n):
    ok, got = nm.primitivity_bound_check(n)
    assert ok and got == Fraction(n, n + 1)


def test_scan_models_contains_default():
    names = {name for name, _, _ in nm.scan_models("A6")}
    assert "4A6" in names
