"""Tests for fomod.fv: reduction sequences, decompositions, transductions and the collision search."""
import itertools

import pytest

from fomod.errors import DomainError, ParseError, UnsupportedError
from fomod.fv.decompose import decompose, decompose_hanf, sum_parts, sum_witnesses
from fomod.fv.lower_bound import premise_holds, refute_decomposition
from fomod.fv.reduction import (
    ReductionSequence,
    eval_reduction,
    format_reduction,
    parse_reduction,
    truth_assignment,
)
from fomod.fv.transduction import (
    Transduction,
    apply_transduction_formula,
    apply_transduction_structure,
    decompose_product,
    parse_transduction,
    product_transduction,
)
from fomod.hanf.enumerate import enumerate_spheres
from fomod.hanf.formulas import HanfFormula
from fomod.logic.evaluate import evaluate
from fomod.logic.parser import parse_formula
from fomod.logic.prop import Prop, parse_prop
from fomod.logic.syntax import FALSE
from fomod.model.enumerate import nu_bounded
from fomod.model.nu import parse_nu
from fomod.model.signature import Signature
from fomod.model.spheres import Sphere, sphere_of
from fomod.model.structure import Structure, direct_product, disjoint_sum

SIG = Signature.parse("E/2")
NU = parse_nu("d:2")

POINT = Structure.build(SIG, 1)
LOOP = Structure.build(SIG, 1, {"E": [(0, 0)]})
EDGE = Structure.build(SIG, 2, {"E": [(0, 1)]})

LOOP_SENTENCE = parse_formula("E y. E(y,y)")

EXAMPLE = """\
decomposition {
  s = 2 ;
  vars = x ;
  delta 1 {
    X_1_1 : E(x,x) ;
    X_1_2 : E y. E(y,y) ;
  }
  delta 2 { }
  beta = (X_1_1 | !X_1_2)
}
"""

PRODUCT_TEXT = """\
transduction {
  t = 2 ;
  theta = (P_1(x1) & P_2(x2)) ;
  relation E/2 = (E(x1_1,x2_1) & E(x1_2,x2_2)) ;
}
"""


def same_loops() -> ReductionSequence:
    """Both parts have a loop, or neither does: one proposition per part."""
    return ReductionSequence(2, (), ((LOOP_SENTENCE,), (LOOP_SENTENCE,)), parse_prop("(X_1_1 <-> X_2_1)"))


# ============================================================================
# Reduction sequences
# ============================================================================


class TestReductionSequence:
    """Test suite for the text form and evaluation of reduction sequences."""

    def test_parse(self):
        """Test that the text form yields the declared formulas and β."""
        D = parse_reduction(EXAMPLE)
        assert D.s == 2
        assert D.variables == ("x",)
        assert D.deltas == ((parse_formula("E(x,x)"), LOOP_SENTENCE), ())
        assert D.propositions() == [Prop(1, 1), Prop(1, 2)]

    def test_format_is_parsed_back(self):
        """Test that formatting gives text that parses to the same sequence."""
        D = parse_reduction(EXAMPLE)
        assert format_reduction(D) == EXAMPLE
        assert parse_reduction(format_reduction(D)) == D

    def test_size(self):
        """Test |β| plus the formula sizes."""
        D = parse_reduction(EXAMPLE)
        # β = (X_1_1 | !X_1_2) has 6 tokens, E(x,x) has 6 and E y. E(y,y) has 8
        assert D.size() == 6 + 6 + 8

    def test_hosting_of_free_variables(self):
        """Test that X_i_j needs its free variables placed in part i."""
        D = parse_reduction(EXAMPLE)
        mu = truth_assignment(D, [LOOP, POINT], [(0, 0)])
        assert mu[Prop(1, 1)] and mu[Prop(1, 2)]
        mu = truth_assignment(D, [LOOP, POINT], [(1, 0)])
        assert not mu[Prop(1, 1)]
        assert eval_reduction(D, [LOOP, POINT], [(0, 0)])
        assert not eval_reduction(D, [LOOP, POINT], [(1, 0)])
        assert eval_reduction(D, [POINT, LOOP], [(1, 0)])

    def test_assignment_errors(self):
        """Test part counts, element counts and part indices."""
        D = parse_reduction(EXAMPLE)
        with pytest.raises(DomainError):
            eval_reduction(D, [LOOP], [(0, 0)])
        with pytest.raises(DomainError):
            eval_reduction(D, [LOOP, POINT], [])
        with pytest.raises(DomainError):
            eval_reduction(D, [LOOP, POINT], [(2, 0)])
        with pytest.raises(DomainError):
            eval_reduction(D, [LOOP, POINT], [(0, 5)])

    def test_validation(self):
        """Test undeclared variables and propositions that name no formula."""
        with pytest.raises(DomainError, match="undeclared"):
            ReductionSequence(1, (), ((parse_formula("E(x,x)"),),), parse_prop("X_1_1"))
        with pytest.raises(DomainError, match="does not name"):
            ReductionSequence(2, (), ((LOOP_SENTENCE,), ()), parse_prop("X_2_1"))
        with pytest.raises(DomainError):
            ReductionSequence(2, (), ((),), FALSE)

    @pytest.mark.parametrize(
        "text",
        [
            "decomposition { s = 1 ; vars = ; delta 1 { X_1_2 : true ; } beta = X_1_2 }",
            "decomposition { s = 1 ; vars = ; delta 1 { } delta 1 { } beta = false }",
            "decomposition { s = 1 ; vars = ; delta 2 { } beta = false }",
            "decomposition { s = 1 ; vars = ; beta = }",
        ],
    )
    def test_parse_errors(self, text):
        """Test misnumbered labels, repeated or out-of-range blocks, and syntax errors."""
        with pytest.raises(ParseError):
            parse_reduction(text)


# ============================================================================
# Decomposition
# ============================================================================


def test_sum_parts():
    """Test that every element must sit in exactly one part and edges stay inside parts."""
    S, _ = disjoint_sum([EDGE, LOOP])
    assert sum_parts(S, 2) == {0: 1, 1: 1, 2: 2}
    sig = SIG.with_partition(2)
    crossing = Structure.build(sig, 2, {"E": [(0, 1)], "P_1": [0], "P_2": [1]})
    assert sum_parts(crossing, 2) is None
    with pytest.raises(DomainError):
        sum_parts(S, 3)


def test_sphere_in_two_parts_is_unsatisfiable():
    """Test that a sphere whose centre lies in two parts decomposes to false."""
    T = Structure.build(SIG.with_partition(2), 1, {"P_1": [0], "P_2": [0]})
    D = decompose_hanf(HanfFormula(1, Sphere(T, (0,), 0)), 2)
    assert D.beta == FALSE
    assert D.deltas == ((), ())


def test_sum_witnesses():
    """Test that the witnesses are all sums of one-element parts."""
    witnesses = sum_witnesses(SIG, 2, NU, 1)
    assert len(witnesses) == 4
    assert all(A.size == 2 for A in witnesses)


class TestDecompose:
    """Test suite for decompositions of sentences about disjoint sums."""

    def test_loop_in_first_part(self):
        """Test that 'the first part has a loop' is answered by the parts."""
        phi = parse_formula("E x. (P_1(x) & E(x,x))")
        D, cert = decompose(phi, 2, NU, 1, SIG)
        assert D.variables == ()
        assert cert.witnesses == 4
        for A, B in itertools.product([POINT, LOOP], repeat=2):
            assert eval_reduction(D, [A, B]) == evaluate(disjoint_sum([A, B])[0], phi)

    def test_formulas_use_the_base_signature(self):
        """Test that no partition predicate survives in the Δ_i."""
        D, _ = decompose(parse_formula("E x. (P_2(x) & E(x,x))"), 2, NU, 1, SIG)
        assert "P_" not in format_reduction(D).split("beta")[0]

    def test_rejects_open_formulas_and_foreign_relations(self):
        """Test argument validation."""
        with pytest.raises(DomainError):
            decompose(parse_formula("E(x,x)"), 2, NU, 1, SIG)
        with pytest.raises(DomainError):
            decompose(parse_formula("E x. P_3(x)"), 2, NU, 1, SIG)


# ============================================================================
# Pooled decompositions on small sums
# ============================================================================

SIG2 = SIG.with_partition(2)
TWO_CYCLE = Structure.build(SIG, 2, {"E": [(0, 1), (1, 0)]})
LOOPED_EDGE = Structure.build(SIG, 2, {"E": [(0, 1), (1, 1)]})


def _sums(parts):
    return [(A, B, *disjoint_sum([A, B])) for A, B in itertools.product(parts, repeat=2)]


@pytest.fixture(scope="module")
def small_parts() -> list[Structure]:
    """Every ν-bounded E/2-structure of size at most 2, one per isomorphism type."""
    return list(nu_bounded(NU).members(SIG, 2, up_to_iso=True))


@pytest.fixture(scope="module")
def small_sums(small_parts):
    return _sums(small_parts)


@pytest.fixture(scope="module")
def panel_sums():
    return _sums([POINT, LOOP, EDGE, TWO_CYCLE, LOOPED_EDGE])


def _spheres(sums, centres: int) -> list[Sphere]:
    """Every radius-0 sphere over σ_2, and every sphere of radius at most 1 realised on one of the sums."""
    found = {t.key: t for t in enumerate_spheres(SIG2, NU, 0, centres)}
    for _, _, S, _ in sums:
        for r in (0, 1):
            for tup in itertools.product(S.universe, repeat=centres):
                t = sphere_of(S, tup, r)
                found.setdefault(t.key, t)
    return list(found.values())


@pytest.mark.parametrize("k", [1, 2])
def test_hanf_sentences_decompose_on_every_small_sum(k, small_sums):
    """Test (A ⊕ B) ⊨ ψ iff (A, B) ⊨ decompose_hanf(ψ) for one-centre Hanf formulas."""
    for t in _spheres(small_sums, 1):
        psi = HanfFormula(k, t)
        D = decompose_hanf(psi, 2)
        for A, B, S, _ in small_sums:
            assert eval_reduction(D, [A, B]) == psi.holds(S), (psi.describe(), A, B)


@pytest.mark.parametrize("k", [1, 2])
def test_hanf_formulas_with_a_free_variable_decompose(k, panel_sums):
    """Test (A ⊕ B, a) ⊨ ψ iff (A, B, π(a)) ⊨ decompose_hanf(ψ) for every element a."""
    for t in _spheres(panel_sums, 2):
        psi = HanfFormula(k, t, ("x",))
        D = decompose_hanf(psi, 2)
        for A, B, S, pi in panel_sums:
            for a in S.universe:
                assert eval_reduction(D, [A, B], [pi[a]]) == psi.holds(S, {"x": a}), (psi.describe(), A, B, a)


SUM_SENTENCES = [
    "E x. (P_1(x) & E(x,x))",
    "(E x. (P_1(x) & E(x,x)) & Emod 2 y. (P_2(y) & E(y,y)))",
    "A x. (P_2(x) -> E y. E(x,y))",
    "E x. E y. (P_1(x) & (P_2(y) & (E(x,x) <-> E(y,y))))",
    "Emod 2 x. P_1(x)",
    "E x. (P_2(x) & !E y. E(y,x))",
    "A x. A y. ((P_1(x) & P_2(y)) -> (E(x,x) | !E(y,y)))",
    "E x. E y. (!x=y & (P_1(x) & (P_1(y) & E(x,y))))",
    "(Emod 2 x. E(x,x) <-> E x. (P_2(x) & E(x,x)))",
    "A x. (E(x,x) -> P_1(x))",
]


@pytest.mark.parametrize("text", SUM_SENTENCES)
def test_decomposition_agrees_on_every_pair(text, small_parts):
    """Test that the full pipeline answers a sentence about A ⊕ B from A and B, for all parts up to the witness cap."""
    phi = parse_formula(text)
    D, cert = decompose(phi, 2, NU, 2, SIG)
    assert cert.consistent
    assert cert.witnesses == len(small_parts) ** 2
    for A, B in itertools.product(small_parts, repeat=2):
        assert eval_reduction(D, [A, B]) == evaluate(disjoint_sum([A, B])[0], phi), (A, B)


# ============================================================================
# Transductions
# ============================================================================


class TestTransduction:
    """Test suite for t-transductions."""

    def test_parse_product(self):
        """Test that the text form of the product transduction parses to the built one."""
        T = parse_transduction(PRODUCT_TEXT, SIG.with_partition(2))
        assert T == product_transduction(SIG, 2)
        assert T.target == SIG
        assert T.parameter_rank == 0
        assert T.format() == PRODUCT_TEXT

    def test_parse_checks_the_host(self):
        """Test that host-signature errors are parse errors."""
        with pytest.raises(ParseError):
            parse_transduction(PRODUCT_TEXT, SIG)
        with pytest.raises(ParseError):
            parse_transduction("transduction { t = 1 ; theta = }")

    def test_free_variables_are_checked(self):
        """Test that θ may only use x1..xt."""
        with pytest.raises(DomainError):
            Transduction(1, parse_formula("E(x1,x2)"), ())

    def test_product_of_a_sum(self):
        """Test that the product transduction maps A ⊕ B to A ⊗ B."""
        T = product_transduction(SIG, 2)
        for parts in ([EDGE, EDGE], [LOOP, EDGE], [EDGE, LOOP]):
            assert apply_transduction_structure(T, disjoint_sum(parts)[0]) == direct_product(parts)

    @pytest.mark.parametrize(
        "text",
        ["E x. E(x,x)", "A x. E y. E(x,y)", "E x. E y. (!x=y & E(x,y))", "A x. A y. (E(x,y) -> x=y)"],
    )
    def test_formula_translation(self, text):
        """Test Θ(A) ⊨ φ iff A ⊨ Θ(φ)."""
        T = product_transduction(SIG, 2)
        phi = parse_formula(text)
        psi = apply_transduction_formula(T, phi)
        for parts in ([EDGE, EDGE], [LOOP, EDGE], [LOOP, LOOP]):
            assert evaluate(disjoint_sum(parts)[0], psi) == evaluate(direct_product(parts), phi)

    def test_modulo_quantifiers_are_unsupported(self):
        """Test that ∃^{0 mod m} has no translation."""
        with pytest.raises(UnsupportedError):
            apply_transduction_formula(product_transduction(SIG, 2), parse_formula("Emod 2 x. E(x,x)"))

    def test_empty_universe(self):
        """Test that θ must define at least one element."""
        T = Transduction(1, parse_formula("!x1=x1"), ())
        with pytest.raises(DomainError):
            apply_transduction_structure(T, LOOP)

    def test_decompose_product(self):
        """Test that 'the product has a loop' is answered by the parts."""
        phi = parse_formula("E x. E(x,x)")
        D, _ = decompose_product(phi, 2, NU, 1, SIG)
        for A, B in itertools.product([POINT, LOOP], repeat=2):
            assert eval_reduction(D, [A, B]) == evaluate(direct_product([A, B]), phi)


# ============================================================================
# Collision search
# ============================================================================


class TestRefuteDecomposition:
    """Test suite for the pigeonhole refuter of 2-disjoint decompositions."""

    def test_equal_vectors_collide(self):
        """Test that two loop-free parts with equal truth vectors are confused."""
        collision = refute_decomposition(same_loops(), [POINT, LOOP, EDGE])
        assert collision is not None
        assert (collision.i, collision.j) == (0, 2)
        assert collision.claimed and not collision.expected
        assert collision.pigeonhole

    def test_no_collision(self):
        """Test that the decomposition is right on a point and a loop."""
        assert refute_decomposition(same_loops(), [POINT, LOOP]) is None

    def test_direct_check(self):
        """Test a pair found without a vector collision."""
        D = ReductionSequence(2, (), ((LOOP_SENTENCE,), (LOOP_SENTENCE,)), parse_prop("X_1_1"))
        collision = refute_decomposition(D, [POINT, LOOP])
        assert collision is not None
        assert not collision.pigeonhole

    def test_only_for_two_part_sentences(self):
        """Test that other shapes are refused."""
        with pytest.raises(DomainError):
            refute_decomposition(ReductionSequence(1, (), ((),), FALSE), [POINT])
        with pytest.raises(DomainError):
            refute_decomposition(parse_reduction(EXAMPLE), [POINT])

    def test_premise(self):
        """Test A_i ⊎ A_j ⊨ φ iff i = j."""
        phi = parse_formula("!E x. E(x,x)")
        assert premise_holds(phi, [POINT], with_partition=False)
        assert not premise_holds(phi, [POINT, LOOP], with_partition=False)
