"""Tests for fomod.hanf: sphere enumeration, Hanf types, sphere formulas and the HNF converter."""
import itertools
from collections import defaultdict

import pytest

from fomod.errors import ConsistencyError, DomainError
from fomod.hanf.enumerate import count_spheres, enumerate_spheres
from fomod.hanf.formulas import HanfFormula, HanfNormalForm, HanfRef
from fomod.hanf.hnf import hnf_convert, hnf_parameters, is_hanf_normal_form
from fomod.hanf.oracle import brute_equivalent
from fomod.hanf.types import hanf_type, nurmonen_condition, nurmonen_parameters, sphere_census, sphere_counts
from fomod.logic.evaluate import ModelChecker, evaluate
from fomod.logic.measures import qr
from fomod.logic.parser import parse_formula
from fomod.logic.sphere_formula import sphere_formula
from fomod.model.enumerate import StructureClass, all_structures, iso_classes
from fomod.model.nu import DegreeBound, parse_nu
from fomod.model.signature import Signature
from fomod.model.spheres import realizations, sphere_key, sphere_of
from fomod.model.structure import Structure, disjoint_union

SIG = Signature.parse("E/2")


def path(n: int) -> Structure:
    return Structure.build(SIG, n, {"E": [(a, a + 1) for a in range(n - 1)]})


def cycle(n: int) -> Structure:
    return Structure.build(SIG, n, {"E": [(a, (a + 1) % n) for a in range(n)]})


# ============================================================================
# Sphere enumeration
# ============================================================================


def test_radius_zero_spheres():
    """Test that a single centre of radius 0 is a point with or without a loop."""
    spheres = enumerate_spheres(SIG, parse_nu("d:2"), 0, 1)
    assert len(spheres) == 2
    assert {len(t.structure.rel("E")) for t in spheres} == {0, 1}


def test_two_centre_spheres_of_radius_zero():
    """Test that two centres either coincide (2 spheres) or span 16 ordered pairs."""
    assert count_spheres(SIG, parse_nu("d:2"), 0, centres=2) == 18


def test_radius_one_spheres_of_degree_one():
    """Test the spheres of radius 1 when every element has at most one neighbour."""
    # 2 isolated points, and 2 loops x 2 loops x 3 edge directions with a neighbour
    assert count_spheres(SIG, DegreeBound(d=1), 1) == 14


def test_enumerated_spheres_are_canonical():
    """Test that enumeration returns canonical copies in key order."""
    spheres = enumerate_spheres(SIG, DegreeBound(d=1), 1, 1)
    assert [t.key for t in spheres] == sorted(t.key for t in spheres)
    for t in spheres:
        assert t.canonical().structure == t.structure


def test_sphere_enumeration_rejects_bad_arguments():
    """Test that zero centres and negative radii are refused."""
    with pytest.raises(DomainError):
        enumerate_spheres(SIG, DegreeBound(d=1), 1, 0)
    with pytest.raises(DomainError):
        enumerate_spheres(SIG, DegreeBound(d=1), -1, 1)


# ============================================================================
# Hanf types
# ============================================================================


class TestHanfType:
    """Test suite for sphere censuses and Hanf types."""

    def test_census_of_a_path(self):
        """Test that the 1-spheres of a 3-path are its two ends and its middle."""
        census = sphere_census(path(3), 1)
        assert sorted(count for count, _ in census.values()) == [1, 1, 1]
        assert hanf_type(path(3), 0, 2, 1).entries[0][1:] == (2, 0)

    def test_truncation_and_residue(self):
        """Test that counts are cut at the threshold and reduced modulo m."""
        tp = hanf_type(cycle(5), 1, 3, 2)
        assert len(tp.entries) == 1
        assert tp.entries[0][1:] == (3, 1)

    def test_equal_types_of_cycles(self):
        """Test that C8 and C4 ⊎ C4 share their radius-1 type, which C5 does not."""
        union, _ = disjoint_union([cycle(4), cycle(4)])
        assert hanf_type(union, 1, 10, 4) == hanf_type(cycle(8), 1, 10, 4)
        assert hanf_type(union, 1, 10, 1) != hanf_type(cycle(5), 1, 10, 1)
        assert hanf_type(union, 1, 10, 4).digest() == hanf_type(cycle(8), 1, 10, 4).digest()

    def test_unrealised_entry(self):
        """Test that an absent sphere reads as (0, 0)."""
        tp = hanf_type(cycle(3), 0, 2, 2)
        assert tp.entry(sphere_key(path(1), (0,), 0)) == (2, 1)
        assert tp.entry((0, "nothing")) == (0, 0)

    def test_nurmonen_parameters(self):
        """Test r = 3^q, e = 1 + largest ball, t = q·e + 1."""
        assert nurmonen_parameters(path(3), path(3), 1) == (3, 4, 5)

    def test_nurmonen_condition(self):
        """Test that the condition holds reflexively and fails on different large spheres."""
        union, _ = disjoint_union([cycle(3), cycle(3)])
        assert nurmonen_condition(cycle(6), cycle(6), 1, 2)
        assert not nurmonen_condition(cycle(6), union, 1, 1)


# ============================================================================
# Soundness of the Nurmonen condition
# ============================================================================


def _rank_one_pool() -> list[str]:
    """Sentences of quantifier rank 1 over E/2, built from eight basic ones."""
    basic = [
        "E x. E(x,x)",
        "E x. !E(x,x)",
        "A x. E(x,x)",
        "A x. !E(x,x)",
        "Emod 2 x. E(x,x)",
        "Emod 2 x. !E(x,x)",
        "Emod 2 x. x=x",
        "Emod 2 x. (E(x,x) | x=x)",
    ]
    pool = basic + [f"!{b}" for b in basic]
    for left, right in itertools.combinations(basic, 2):
        pool += [f"({left} {op} {right})" for op in ("&", "|", "->", "<->")]
        pool += [f"({left} {op} !{right})" for op in ("&", "|", "->")]
    return pool


RANK_ONE_POOL = _rank_one_pool()


def _edgeless(n: int, loops: int) -> Structure:
    return Structure.build(SIG, n, {"E": [(a, a) for a in range(loops)]})


@pytest.fixture(scope="module")
def degree_two_table() -> dict[int, list[Structure]]:
    """Degree-2 E/2-structures up to size 4, one per isomorphism type."""
    table = defaultdict(list)
    for A in iso_classes(SIG, 4, max_degree=2):
        table[A.size].append(A)
    return table


def test_rank_one_pool():
    """Test that the pool has 200 sentences of rank 1."""
    sentences = [parse_formula(text) for text in RANK_ONE_POOL]
    assert len(set(sentences)) >= 200
    assert all(qr(phi) == 1 for phi in sentences)


def test_nurmonen_condition_is_sound(degree_two_table):
    """Test that pairs satisfying the condition for q=1, m=2 agree on every rank-1 sentence.

    Up to six elements, two different structures can only meet the condition when
    both are edgeless, so beyond size 4 the family adds every edgeless structure
    and, as near misses, the directed paths and cycles.
    """
    family = [A for n in sorted(degree_two_table) for A in degree_two_table[n]]
    family += [_edgeless(n, loops) for n in (5, 6) for loops in range(n + 1)]
    family += [path(n) for n in (5, 6)] + [cycle(n) for n in (5, 6)]
    sentences = [parse_formula(text) for text in RANK_ONE_POOL]

    # the condition needs equal support and equal residues of the radius-3 sphere counts
    buckets = defaultdict(list)
    for A in family:
        buckets[frozenset((key, c % 2) for key, c in sphere_counts(A, 3).items())].append(A)

    vectors: dict[int, tuple[bool, ...]] = {}

    def vector(A: Structure) -> tuple[bool, ...]:
        if id(A) not in vectors:
            checker = ModelChecker(A)
            vectors[id(A)] = tuple(checker.holds(phi) for phi in sentences)
        return vectors[id(A)]

    agreeing = 0
    for members in buckets.values():
        for A, B in itertools.combinations(members, 2):
            if nurmonen_condition(A, B, 1, 2):
                agreeing += 1
                assert vector(A) == vector(B), (A, B)
    assert agreeing >= 1
    assert nurmonen_condition(_edgeless(3, 0), _edgeless(5, 0), 1, 2)


# ============================================================================
# Sphere formulas and Hanf formulas
# ============================================================================


@pytest.mark.parametrize("centre", [0, 1, 2])
def test_sphere_formula_defines_realizations(centre):
    """Test that sph_τ(x) holds exactly at the realizations of τ."""
    P = path(3)
    t = sphere_of(P, (centre,), 1)
    phi = sphere_formula(t)
    satisfied = {(a,) for a in P.universe if evaluate(P, phi, {"x1": a})}
    assert satisfied == realizations(P, t)
    assert (centre,) in satisfied


def test_hanf_formula_counts_realizations():
    """Test ∃^{≥k} y sph_τ(y) against a direct count."""
    t = sphere_of(path(3), (1,), 1)
    middle = HanfFormula(1, t)
    assert middle.count(path(5)) == 3
    assert middle.holds(path(3))
    assert not HanfFormula(2, t).holds(path(3))
    assert evaluate(path(5), HanfFormula(3, t).to_formula())
    assert not evaluate(path(4), HanfFormula(3, t).to_formula())
    assert middle.describe().startswith("Ege 1 y. sph(y)[radius 1; centres (")


def test_hanf_formula_validation():
    """Test threshold and free-variable checks."""
    t = sphere_of(path(3), (1,), 1)
    with pytest.raises(DomainError):
        HanfFormula(0, t)
    with pytest.raises(DomainError):
        HanfFormula(1, t, free=("x",))


def test_normal_form_needs_an_atom_per_leaf():
    """Test that a skeleton may only mention H_1..H_L."""
    t = sphere_of(path(3), (1,), 1)
    with pytest.raises(DomainError):
        HanfNormalForm((HanfFormula(1, t),), HanfRef(2))


# ============================================================================
# Brute-force equivalence
# ============================================================================


class TestBruteEquivalent:
    """Test suite for the brute-force equivalence oracle."""

    def test_counterexample_is_a_loop(self):
        """Test that 'there is a loop' and 'false' differ on the one-element loop."""
        phi, psi = parse_formula("E x. E(x,x)"), parse_formula("false")
        A = brute_equivalent(phi, psi, all_structures(), 2, SIG)
        assert A is not None
        assert A.size == 1
        assert evaluate(A, phi)

    def test_equivalent_sentences(self):
        """Test that dual quantifiers agree on every small structure."""
        phi, psi = parse_formula("A x. E(x,x)"), parse_formula("!E x. !E(x,x)")
        assert brute_equivalent(phi, psi, all_structures(), 3, SIG, up_to_iso=True) is None

    def test_rejects_open_formulas_and_bad_caps(self):
        """Test argument validation."""
        with pytest.raises(DomainError, match="not a sentence"):
            brute_equivalent(parse_formula("E(x,x)"), parse_formula("true"), all_structures(), 2, SIG)
        with pytest.raises(DomainError):
            brute_equivalent(parse_formula("true"), parse_formula("true"), all_structures(), 0, SIG)


# ============================================================================
# Hanf normal form
# ============================================================================


class TestHnfConvert:
    """Test suite for the semantic HNF converter."""

    NU = parse_nu("d:2")

    def test_parameters(self):
        """Test r = 3^q and t = q·(ν(r)+1)+1 with the modulus lcm."""
        params = hnf_parameters(parse_formula("Emod 2 x. E(x,x)"), self.NU)
        assert (params.q, params.modulus, params.radius) == (1, 2, 3)
        assert params.threshold == 1 * (self.NU.value(3) + 1) + 1

    def test_loop_sentence(self):
        """Test that 'there is a loop' becomes a radius-0 Hanf normal form that agrees on all witnesses."""
        phi = parse_formula("E x. E(x,x)")
        hnf, cert = hnf_convert(phi, SIG, self.NU, 3)
        assert is_hanf_normal_form(hnf)
        assert cert.radius == 3
        assert cert.radius_used == 0
        assert all(atom.radius == 0 for atom in hnf.atoms)
        for A in iso_classes(SIG, 3, max_degree=2):
            assert hnf.evaluate(A) == evaluate(A, phi)
        assert cert.format().startswith("certificate {")

    def test_formula_agrees_with_normal_form(self):
        """Test that the FO rendering of the normal form has the same truth values."""
        phi = parse_formula("E x. E(x,x)")
        hnf, _ = hnf_convert(phi, SIG, self.NU, 2, up_to_iso=True)
        psi = hnf.to_formula()
        for A in iso_classes(SIG, 2, max_degree=2):
            assert evaluate(A, psi) == evaluate(A, phi)

    def test_full_radius(self):
        """Test that radius minimisation can be switched off."""
        _, cert = hnf_convert(parse_formula("E x. E(x,x)"), SIG, self.NU, 2, minimize_radius=False)
        assert cert.radius_used == cert.radius == 3

    def test_modulo_sentence(self):
        """Test a sentence counting loops modulo 2."""
        phi = parse_formula("Emod 2 x. E(x,x)")
        hnf, _ = hnf_convert(phi, SIG, self.NU, 3, up_to_iso=True)
        for A in iso_classes(SIG, 3, max_degree=2):
            assert hnf.evaluate(A) == evaluate(A, phi)

    def test_open_formula_rejected(self):
        """Test that only sentences are converted."""
        with pytest.raises(DomainError):
            hnf_convert(parse_formula("E(x,x)"), SIG, self.NU, 2)

    def test_clash_reports_the_pair(self, monkeypatch):
        """Test that witnesses sharing a type but not a truth value raise ConsistencyError."""
        monkeypatch.setattr("fomod.hanf.hnf.hanf_type", lambda A, r, t, m: "one bucket")
        with pytest.raises(ConsistencyError) as info:
            hnf_convert(parse_formula("E x. E(x,x)"), SIG, self.NU, 1)
        A, B = info.value.pair
        assert evaluate(A, parse_formula("E x. E(x,x)")) != evaluate(B, parse_formula("E x. E(x,x)"))


# ============================================================================
# Pooled Hanf normal forms
# ============================================================================

HNF_POOL = [
    "E x. E(x,x)",
    "A x. E(x,x)",
    "Emod 2 x. E(x,x)",
    "Emod 2 x. x=x",
    "E x. E y. (E(x,y) & !x=y)",
    "A x. E y. E(x,y)",
    "E x. A y. !E(y,x)",
    "E x. E y. (E(x,y) & E(y,x))",
    "A x. A y. (E(x,y) -> E(y,x))",
    "Emod 2 x. E y. E(x,y)",
    "E x. Emod 2 y. E(x,y)",
    "(E x. E(x,x) & Emod 2 y. y=y)",
    "(A x. !E(x,x) | E x. E y. (E(x,y) & E(y,y)))",
    "!E x. E y. (E(x,y) & !E(y,x))",
    "E x. (E(x,x) & A y. (E(x,y) -> x=y))",
]

RADIUS_ZERO_POOL = [
    "E x. E(x,x)",
    "A x. E(x,x)",
    "Emod 2 x. E(x,x)",
    "Emod 2 x. x=x",
    "(E x. E(x,x) & Emod 2 y. y=y)",
    "(E x. E(x,x) <-> Emod 2 y. y=y)",
]


@pytest.fixture(scope="module")
def degree_two_class(degree_two_table) -> StructureClass:
    """The ν-bounded class for d:2, answering from the size-4 table."""
    return StructureClass(
        "degree<=2",
        lambda A: A.degree <= 2,
        max_degree=2,
        generator=lambda sig, n: degree_two_table[n],
    )


@pytest.mark.parametrize("text", HNF_POOL)
def test_normal_form_agrees_on_witnesses(text, degree_two_table):
    """Test that each converted sentence is a consistent HNF with the sentence's truth values."""
    phi = parse_formula(text)
    witnesses = [A for n in (1, 2, 3) for A in degree_two_table[n]]
    hnf, cert = hnf_convert(phi, SIG, parse_nu("d:2"), 3, witnesses=witnesses)
    assert is_hanf_normal_form(hnf)
    assert cert.consistent
    assert cert.witnesses == len(witnesses)
    for A in witnesses:
        assert hnf.evaluate(A) == evaluate(A, phi), A


@pytest.mark.parametrize("text", RADIUS_ZERO_POOL)
def test_normal_form_is_equivalent_up_to_four(text, degree_two_table, degree_two_class):
    """Test that sentences about loops and size convert at radius 0 and stay equivalent up to size 4."""
    phi = parse_formula(text)
    witnesses = [A for n in sorted(degree_two_table) for A in degree_two_table[n]]
    hnf, cert = hnf_convert(phi, SIG, parse_nu("d:2"), 4, witnesses=witnesses)
    assert cert.radius_used == 0
    assert brute_equivalent(phi, hnf.to_formula(), degree_two_class, 4, SIG, up_to_iso=True) is None
