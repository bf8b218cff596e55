"""Tests for fomod.encodings: the tower function, tree encodings and the arithmetic formulas."""
import pytest

from fomod.encodings.formulas import (
    gen_dist_eq,
    gen_dist_le,
    gen_enc,
    gen_eq,
    gen_gamma,
    gen_less,
    gen_max,
    gen_min,
    gen_succ,
)
from fomod.encodings.sentences import gen_phi_fv
from fomod.encodings.tower import bit, set_bits, tower
from fomod.encodings.trees import (
    TREE_SIGNATURE,
    TreeDecoder,
    decode_number,
    decode_roots,
    encode_forest,
    encode_number,
    height_of,
    is_binary_forest,
    render_tree,
    roots,
)
from fomod.errors import DomainError, ResourceError
from fomod.logic.evaluate import ModelChecker, evaluate
from fomod.logic.measures import free_vars, is_sentence, size
from fomod.model.structure import Structure

# ============================================================================
# Tower
# ============================================================================


@pytest.mark.parametrize("h, expected", [(0, 1), (1, 2), (2, 4), (3, 16), (4, 65536)])
def test_tower_values(h, expected):
    """Test the first values of the tower function."""
    assert tower(h) == expected


def test_tower_limits():
    """Test that negative heights are refused and huge ones are reported as resource errors."""
    with pytest.raises(DomainError):
        tower(-1)
    with pytest.raises(ResourceError):
        tower(6)
    assert tower(5).bit_length() == 65537


def test_bits():
    """Test bit extraction and set-bit listing."""
    assert set_bits(10) == [1, 3]
    assert set_bits(0) == []
    assert [bit(i, 5) for i in range(3)] == [1, 0, 1]


# ============================================================================
# Tree encodings
# ============================================================================


class TestEncodeNumber:
    """Test suite for building and reading tree encodings."""

    @pytest.mark.parametrize("i, nodes", [(0, 1), (1, 2), (2, 3), (3, 4)])
    def test_base_shapes(self, i, nodes):
        """Test the four fixed shapes for h = -1."""
        T = encode_number(-1, i)
        assert T.size == nodes
        assert roots(T) == [0]
        assert decode_number(T, -1) == i

    def test_base_shape_heights(self):
        """Test that no base shape is deeper than two edges."""
        assert [height_of(encode_number(-1, i)) for i in range(4)] == [0, 1, 2, 2]

    @pytest.mark.parametrize("i", range(16))
    def test_parameter_zero_round_trip(self, i):
        """Test decode(encode(i)) = i for every number with parameter 0."""
        assert decode_number(encode_number(0, i), 0) == i

    @pytest.mark.parametrize("i", [0, 1, 5, 1000, 65535])
    def test_parameter_one_samples(self, i):
        """Test sample numbers with parameter 1."""
        assert decode_number(encode_number(1, i), 1) == i

    def test_sizes(self):
        """Test node counts: a complete part of 3 nodes plus the attached base shapes."""
        assert encode_number(0, 0).size == 3
        assert encode_number(0, 5).size == 3 + 1 + 3
        assert encode_number(0, 15).size == 3 + 1 + 2 + 3 + 4
        assert encode_number(1, 5).size == 15 + 3 + 6

    def test_range_checks(self):
        """Test that numbers outside [0, Tower(h+3)-1] and h < -1 are refused."""
        with pytest.raises(DomainError):
            encode_number(-1, 4)
        with pytest.raises(DomainError):
            encode_number(0, 16)
        with pytest.raises(DomainError):
            encode_number(-2, 0)

    def test_slot_order_builds_other_members(self):
        """Test that permuted slots give a different tree that encodes the same number."""
        plain = encode_number(0, 3)
        moved = encode_number(0, 3, slot_order=[3, 2, 1, 0])
        assert plain != moved
        assert decode_number(moved, 0) == 3
        with pytest.raises(DomainError):
            encode_number(0, 3, slot_order=[0, 0, 1, 2])

    def test_wrong_parameter_does_not_decode(self):
        """Test that an encoding is not read at another parameter."""
        assert decode_number(encode_number(0, 0), -1) is None
        assert decode_number(encode_number(-1, 2), 0) is None

    def test_forest(self):
        """Test that a forest keeps its trees in value order."""
        F = encode_forest(0, [3, 0, 3])
        assert len(roots(F)) == 3
        assert decode_roots(F, 0) == [3, 0, 3]
        assert decode_number(F, 0) is None
        with pytest.raises(DomainError):
            encode_forest(0, [])


def test_non_forests_are_refused():
    """Test that cycles and nodes with three children are not binary forests."""
    loop = Structure.build(TREE_SIGNATURE, 2, {"E": [(0, 1), (1, 0)]})
    claw = Structure.build(TREE_SIGNATURE, 4, {"E": [(0, 1), (0, 2), (0, 3)]})
    assert not is_binary_forest(loop)
    assert not is_binary_forest(claw)
    assert decode_number(claw, -1) is None
    with pytest.raises(DomainError):
        TreeDecoder(loop)


def test_render_tree():
    """Test that the rendering has one branch per root."""
    tree = render_tree(encode_forest(-1, [1, 2]), -1)
    assert tree.label == "forest"
    assert len(tree.children) == 2
    assert "= 2" in tree.children[1].label


# ============================================================================
# Distance and completeness formulas
# ============================================================================


def chain(n: int) -> Structure:
    return Structure.build(TREE_SIGNATURE, n, {"E": [(a, a + 1) for a in range(n - 1)]})


@pytest.mark.parametrize("d", [0, 1, 2, 3, 4, 5])
def test_distance_formulas_on_a_chain(d):
    """Test δ_{≤d} and δ_{=d} against the distance along a directed chain."""
    C = chain(7)
    le, eq = ModelChecker(C), ModelChecker(C)
    phi_le, phi_eq = gen_dist_le(d), gen_dist_eq(d)
    for a in C.universe:
        for b in C.universe:
            env = {"x": a, "y": b}
            assert le.holds(phi_le, env) == (0 <= b - a <= d)
            assert eq.holds(phi_eq, env) == (b - a == d)


def test_distance_formulas_grow_logarithmically():
    """Test that doubling the distance adds a constant number of tokens."""
    steps = [size(gen_dist_le(2**k)) for k in range(1, 8)]
    gaps = {b - a for a, b in zip(steps, steps[1:])}
    assert len(gaps) == 1
    assert size(gen_dist_le(1024)) < 10 * size(gen_dist_le(2))
    assert free_vars(gen_dist_le(9)) == {"x", "y"}


def test_gamma_on_complete_trees():
    """Test γ_d at the root of a complete binary tree of depth 1."""
    full = encode_number(0, 0)
    assert evaluate(full, gen_gamma(1), {"x": 0})
    assert not evaluate(full, gen_gamma(2), {"x": 0})
    assert not evaluate(chain(3), gen_gamma(1), {"x": 0})
    with pytest.raises(DomainError):
        gen_gamma(-1)


# ============================================================================
# Arithmetic on encodings
# ============================================================================


def _pair_contracts(h: int, i: int, j: int) -> None:
    F = encode_forest(h, [i, j])
    x, y = roots(F)
    checker = ModelChecker(F)
    env = {"x": x, "y": y}
    assert checker.holds(gen_enc(h), {"x": x})
    assert checker.holds(gen_min(h), {"x": x}) == (i == 0)
    assert checker.holds(gen_max(h), {"x": x}) == (i == tower(h + 3) - 1)
    assert checker.holds(gen_eq(h), env) == (i == j)
    assert checker.holds(gen_less(h), env) == (i < j)
    assert checker.holds(gen_succ(h), env) == (j == i + 1)


@pytest.mark.parametrize("i", range(4))
@pytest.mark.parametrize("j", range(4))
def test_base_arithmetic(i, j):
    """Test enc, min, max, eq, less and succ on pairs of base shapes."""
    _pair_contracts(-1, i, j)


@pytest.mark.parametrize("i", range(4))
@pytest.mark.parametrize("j", range(4))
def test_parameter_zero_arithmetic(i, j):
    """Test the arithmetic formulas on pairs of small encodings with parameter 0."""
    _pair_contracts(0, i, j)


@pytest.mark.parametrize("i, j", [(14, 15), (15, 14), (7, 8), (11, 11), (5, 9)])
def test_parameter_zero_arithmetic_large(i, j):
    """Test carries, the maximum and ties among the larger numbers with parameter 0."""
    _pair_contracts(0, i, j)


def test_enc_rejects_other_trees():
    """Test that enc_0 fails on a tree that is not an encoding."""
    assert not evaluate(chain(4), gen_enc(0), {"x": 0})
    assert not evaluate(encode_number(-1, 2), gen_enc(0), {"x": 0})
    # B_{-1}(3) has the shape of B_0(1)
    assert evaluate(encode_number(-1, 3), gen_enc(0), {"x": 0})


def test_arithmetic_sizes_increase_with_the_parameter():
    """Test that eq_h grows with h and keeps exactly x and y free."""
    sizes = [size(gen_eq(h)) for h in (-1, 0, 1)]
    assert sizes == sorted(sizes)
    assert len(set(sizes)) == 3
    for h in (-1, 0, 1):
        assert free_vars(gen_eq(h)) == {"x", "y"}
        assert free_vars(gen_succ(h)) == {"x", "y"}
    with pytest.raises(DomainError):
        gen_eq(-2)


# ============================================================================
# The pairing sentence
# ============================================================================


@pytest.mark.parametrize("values, expected", [([1, 1], True), ([1, 2], False), ([0, 3, 3, 0], True), ([2, 2, 2], True)])
def test_phi_fv_pairs_roots(values, expected):
    """Test that every root must share its number with another root."""
    phi = gen_phi_fv(-1)
    assert is_sentence(phi)
    assert evaluate(encode_forest(-1, values), phi) == expected


def test_phi_fv_on_parameter_zero():
    """Test the pairing sentence on encodings with parameter 0."""
    phi = gen_phi_fv(0)
    assert evaluate(encode_forest(0, [5, 5]), phi)
    assert not evaluate(encode_forest(0, [5, 4]), phi)
