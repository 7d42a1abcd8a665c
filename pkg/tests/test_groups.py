"""Tests for group elements, balls and growth."""

import pytest

from gibbs_subshift.config import settings
from gibbs_subshift.errors import (
    DomainError,
    ResourceError,
    UsageError,
    ValidationError,
)
from gibbs_subshift.groups import (
    GeneratorSet,
    GroupFamily,
    GroupSpec,
    ball,
    ball_sizes,
    distance,
    growth_table,
    shell_growth_constant,
    shell_sizes,
    shortlex_key,
    sphere_ratio_sup,
    support_key,
    word_length,
)

pytestmark = [pytest.mark.unit, pytest.mark.groups]


class TestGroupSpec:
    """Test group descriptors."""

    def test_parse_lattices(self) -> None:
        """Test parsing integer lattices with both generating sets."""
        z = GroupSpec.parse("Z")
        assert z.family is GroupFamily.LATTICE
        assert z.rank == 1
        box = GroupSpec.parse("Z^2:box")
        assert box.rank == 2
        assert box.generator_set is GeneratorSet.BOX
        assert box.describe() == "Z^2:box"

    def test_parse_free_and_heisenberg(self) -> None:
        """Test parsing free and Heisenberg groups."""
        assert GroupSpec.parse("F2").family is GroupFamily.FREE
        assert GroupSpec.parse("F3").rank == 3
        heisenberg = GroupSpec.parse("H")
        assert heisenberg.family is GroupFamily.HEISENBERG
        assert heisenberg.rank == 3

    def test_parse_rejects_unknown(self) -> None:
        """Test that unknown descriptors are rejected with a path."""
        with pytest.raises(ValidationError) as info:
            GroupSpec.parse("Q7")
        assert info.value.diagnostics[0]["path"] == "group"

    def test_generators_are_symmetric(self) -> None:
        """Test that every generator has its inverse in the set."""
        for text in ("Z", "Z^2", "Z^2:box", "F2", "H"):
            spec = GroupSpec.parse(text)
            gens = set(spec.generators)
            assert all(g.inverse() in gens for g in gens)

    def test_generator_counts(self) -> None:
        """Test the size of the generating sets."""
        assert len(GroupSpec.parse("Z^3").generators) == 6
        assert len(GroupSpec.parse("Z^2:box").generators) == 8
        assert len(GroupSpec.parse("F2").generators) == 4

    def test_element_validates_coordinates(self) -> None:
        """Test that malformed normal forms are rejected."""
        with pytest.raises(ValidationError):
            GroupSpec.parse("Z^2").element((1,))
        with pytest.raises(ValidationError):
            GroupSpec.parse("F2").element((3,))


class TestElements:
    """Test multiplication, inverses and the word metric."""

    def test_lattice_arithmetic(self) -> None:
        """Test addition and word length on Z^2."""
        spec = GroupSpec.parse("Z^2")
        g = spec.element((2, -1))
        h = spec.element((-1, 4))
        assert (g * h).form == (1, 3)
        assert word_length(g) == 3
        assert (g * g.inverse()).is_identity

    def test_box_metric(self) -> None:
        """Test the sup-norm word length of box generators."""
        spec = GroupSpec.parse("Z^2:box")
        assert word_length(spec.element((2, -3))) == 3

    def test_free_reduction(self) -> None:
        """Test free reduction of products."""
        spec = GroupSpec.parse("F2")
        a = spec.element((1,))
        b = spec.element((2,))
        word = a * b * b.inverse() * a
        assert word.form == (1, 1)
        assert word_length(a * b.inverse()) == 2

    def test_heisenberg_commutator(self) -> None:
        """Test that the central commutator has length four."""
        spec = GroupSpec.parse("H")
        a = spec.element((1, 0, 0))
        b = spec.element((0, 1, 0))
        commutator = a * b * a.inverse() * b.inverse()
        assert commutator.form == (0, 0, 1)
        assert word_length(commutator) == 4
        assert a * b != b * a

    def test_mixed_groups_rejected(self) -> None:
        """Test that elements of different groups do not multiply."""
        z = GroupSpec.parse("Z").element((1,))
        f = GroupSpec.parse("F2").element((1,))
        with pytest.raises(UsageError):
            _ = z * f

    def test_distance_is_left_invariant(self) -> None:
        """Test ``d(gx, gy) = d(x, y)`` on the free group."""
        spec = GroupSpec.parse("F2")
        x = spec.element((1, 2))
        y = spec.element((-2,))
        g = spec.element((2, 2, -1))
        assert distance(g * x, g * y) == distance(x, y)

    def test_describe(self) -> None:
        """Test textual descriptors of elements."""
        assert GroupSpec.parse("Z").element((-3,)).describe() == "-3"
        assert GroupSpec.parse("Z^2").element((1, -2)).describe() == "(1,-2)"
        assert GroupSpec.parse("F2").element((1, -2)).describe() == "aB"
        assert GroupSpec.parse("F2").identity.describe() == "e"


class TestShortlex:
    """Test the shortlex order."""

    def test_integer_order(self) -> None:
        """Test the order 0, 1, -1, 2, -2 on Z."""
        spec = GroupSpec.parse("Z")
        values = [spec.element((v,)) for v in (2, -1, 0, -2, 1)]
        assert [g.form[0] for g in sorted(values)] == [0, 1, -1, 2, -2]

    def test_identity_is_minimal(self) -> None:
        """Test that the identity is shortlex-minimal in every ball."""
        for text in ("Z^2", "F2", "H"):
            spec = GroupSpec.parse(text)
            assert min(ball(spec, 3).elements()) == spec.identity

    def test_key_records_length(self) -> None:
        """Test that keys start with the word length."""
        spec = GroupSpec.parse("F2")
        g = spec.element((1, -2, 1))
        assert shortlex_key(g)[0] == 3
        assert len(shortlex_key(g)[1]) == 3

    def test_support_key_is_sorted(self) -> None:
        """Test that support keys ignore the input order."""
        spec = GroupSpec.parse("Z")
        first = [spec.element((v,)) for v in (0, 1, -1)]
        assert support_key(first) == support_key(reversed(first))


class TestBalls:
    """Test ball enumeration."""

    def test_open_ball_convention(self) -> None:
        """Test that ``B_1 = {e}`` and ``|B_0| = 0``."""
        table = ball(GroupSpec.parse("Z"), 3)
        assert table.elements(1) == (GroupSpec.parse("Z").identity,)
        assert table.ball_size(0) == 0
        assert table.ball_size(3) == 5
        assert table.ball_size(2, closed=True) == 5

    def test_shells_match_lengths(self) -> None:
        """Test that shell ``k`` holds exactly the elements of length k."""
        table = ball(GroupSpec.parse("F2"), 4)
        for k, shell in enumerate(table.shells):
            assert all(word_length(g) == k for g in shell)
            assert list(shell) == sorted(shell)

    def test_radius_must_be_positive(self) -> None:
        """Test that empty balls are rejected."""
        with pytest.raises(UsageError):
            ball(GroupSpec.parse("Z"), 0)

    def test_element_budget(self) -> None:
        """Test that the element budget is enforced."""
        with (
            settings.override(max_elements=50),
            pytest.raises(ResourceError),
        ):
            ball(GroupSpec.parse("Z^4"), 4)

    def test_table_answers_only_its_radius(self) -> None:
        """Test that a table refuses larger radii."""
        table = ball(GroupSpec.parse("Z"), 2)
        with pytest.raises(UsageError):
            table.elements(3)


class TestGrowth:
    """Test shell counts and sphere ratios."""

    def test_closed_forms_match_enumeration(self) -> None:
        """Test the closed-form shell sizes against breadth-first search."""
        for text in ("Z", "Z^2", "Z^3", "Z^2:box", "F2", "F3"):
            spec = GroupSpec.parse(text)
            assert shell_sizes(spec, 5) == list(ball(spec, 6).sizes)

    def test_known_shell_sizes(self) -> None:
        """Test the standard lattice and free group shells."""
        assert shell_sizes(GroupSpec.parse("Z"), 4) == [1, 2, 2, 2, 2]
        assert shell_sizes(GroupSpec.parse("Z^2"), 4)[1:] == [4, 8, 12, 16]
        assert shell_sizes(GroupSpec.parse("F2"), 3) == [1, 4, 12, 36]

    def test_ball_sizes(self) -> None:
        """Test cumulative ball sizes with the empty ball first."""
        assert ball_sizes(GroupSpec.parse("Z"), 3) == [0, 1, 3, 5]
        assert ball_sizes(GroupSpec.parse("Z^2"), 3) == [0, 1, 5, 13]

    def test_free_group_ratio(self) -> None:
        """Test that F2 shells grow by exactly 3 past the identity shell."""
        spec = GroupSpec.parse("F2")
        assert sphere_ratio_sup(spec, 10, start=2) == 3.0
        assert sphere_ratio_sup(spec, 10) == 4.0

    def test_ratio_monotone_in_kmax(self) -> None:
        """Test that the supremum is nondecreasing in kmax."""
        spec = GroupSpec.parse("Z^2")
        values = [sphere_ratio_sup(spec, k) for k in range(2, 21)]
        assert values == sorted(values)

    def test_offset_ratio(self) -> None:
        """Test the ratio with a larger offset on Z^2."""
        spec = GroupSpec.parse("Z^2")
        # |S_2| / |S_0| = 8
        assert sphere_ratio_sup(spec, 10, n=2) == 8.0

    def test_growth_table(self) -> None:
        """Test the growth table rows and summary."""
        report = growth_table(GroupSpec.parse("Z^2"), 6)
        assert report.rows[0].ball_size == 1
        assert report.rows[2].ball_size == 13
        assert report.rows[2].shell_size == 8
        assert report.sup_ratio == 4.0
        assert report.stabilized
        assert report.rows[-1].ratio is None

    def test_growth_table_arguments(self) -> None:
        """Test that inconsistent arguments are rejected."""
        with pytest.raises(UsageError):
            growth_table(GroupSpec.parse("Z"), 2, n=2)

    def test_shell_growth_constant(self) -> None:
        """Test ``|S_k| / k^{d-1}`` on lattices."""
        assert shell_growth_constant(GroupSpec.parse("Z^2"), 5) == 4.0
        box = shell_growth_constant(GroupSpec.parse("Z^2:box"), 5)
        assert box == 8.0
        with pytest.raises(UsageError):
            shell_growth_constant(GroupSpec.parse("F2"), 3)

    def test_box_growth_constant_limit(self) -> None:
        """Test that box shells approach ``2^d · d`` by ``k = 100``."""
        for d in (1, 2, 3):
            value = shell_growth_constant(GroupSpec.parse(f"Z^{d}:box"), 100)
            assert value == pytest.approx(2**d * d, rel=0.05)
        cube = shell_growth_constant(GroupSpec.parse("Z^3:box"), 100)
        assert cube == pytest.approx(24 + 2 / 100**2)

    def test_heisenberg_shells(self) -> None:
        """Test the first Heisenberg shells and their word-metric layers."""
        spec = GroupSpec.parse("H")
        assert shell_sizes(spec, 5) == [1, 4, 12, 36, 82, 164]
        table = ball(spec, 6)
        for k, shell in enumerate(table.shells):
            assert table.ball_size(k + 1) - table.ball_size(k) == len(shell)
            if k == 0:
                continue
            for g in shell:
                assert any(
                    word_length(g * s) == k - 1 for s in spec.generators
                )

    def test_nontrivial_sup_ratio(self) -> None:
        """Test the ratio supremum without the identity shell."""
        free = growth_table(GroupSpec.parse("F2"), 8)
        assert free.sup_ratio == 4.0
        assert free.nontrivial_sup_ratio == 3.0
        lattice = growth_table(GroupSpec.parse("Z^2"), 6)
        assert lattice.nontrivial_sup_ratio == 2.0
        line = GroupSpec.parse("Z")
        assert growth_table(line, 4).nontrivial_sup_ratio == 1.0
        assert growth_table(line, 2).nontrivial_sup_ratio is None

    def test_empty_shell_is_domain_error(self) -> None:
        """Test that ratios over empty shells are refused."""
        from gibbs_subshift.groups.balls import _exact_ratios

        with pytest.raises(DomainError):
            _exact_ratios([1, 0, 0], 3, 1, 2)


if __name__ == "__main__":
    pytest.main([__file__])
