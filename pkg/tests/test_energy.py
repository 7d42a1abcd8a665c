"""Tests for interactions, potentials, norms and translate weighting."""

import math
from fractions import Fraction

import numpy as np
import pytest

from gibbs_subshift.energy import (
    DictatorRule,
    Interaction,
    LocalPotential,
    LocalTerm,
    PeriodicView,
    PotentialTerm,
    RadialTail,
    SchemeKind,
    SeriesPotential,
    WeightScheme,
    b_norm,
    check_same_cocycle,
    cocycle_interaction,
    cocycle_potential,
    constant_potential,
    counterexample_interaction,
    energy_of_translates,
    full_dimensional_bound,
    hamiltonian,
    interaction_from_potential,
    interaction_translates,
    is_full_dimensional,
    mean_energy,
    partial_sum_f_m,
    shell_norm,
    sv_norm,
    translate_weight,
    variation,
    variations,
    volume_norm,
)
from gibbs_subshift.errors import DomainError, UsageError, ValidationError
from gibbs_subshift.fixtures import (
    BITS,
    SPINS,
    golden_mean_interaction,
    golden_mean_shift,
    inverse_square_interaction,
    ising_interaction,
    plaquette_interaction,
    product_potential,
)
from gibbs_subshift.groups import Element, GroupSpec, ball
from gibbs_subshift.shifts import Pattern, PointMass, Semantics

pytestmark = [pytest.mark.unit, pytest.mark.energy]

Z = GroupSpec.parse("Z")
Z2 = GroupSpec.parse("Z^2")


def line(values: dict[int, int]) -> Pattern:
    """Build a pattern on ``Z`` from ``{position: symbol}``."""
    return Pattern((Z.element((i,)), s) for i, s in values.items())


def constant_line(low: int, high: int, symbol: int) -> Pattern:
    """Return the constant pattern on ``[low, high]``."""
    return line(dict.fromkeys(range(low, high + 1), symbol))


def random_spins(rng: np.random.Generator, radius: int) -> Pattern:
    """Return uniform random spins on the box ``[-radius, radius]^2``."""
    span = range(-radius, radius + 1)
    return Pattern(
        (Z2.element((i, j)), SPINS.symbols[int(rng.integers(2))])
        for i in span
        for j in span
    )


def random_sites(rng: np.random.Generator, radius: int) -> list[Element]:
    """Return a nonempty random subset of the box ``[-radius, radius]^2``."""
    span = range(-radius, radius + 1)
    sites = [Z2.element((i, j)) for i in span for j in span]
    keep = rng.random(len(sites)) < 0.5
    return [g for g, k in zip(sites, keep, strict=True) if k] or sites[:1]


def refill(
    rng: np.random.Generator, x: Pattern, sites: list[Element]
) -> Pattern:
    """Return ``x`` with fresh random spins on ``sites``."""
    fresh = Pattern((g, SPINS.symbols[int(rng.integers(2))]) for g in sites)
    return x.override(fresh)


class TestInteractions:
    """Test local terms, tails and Hamiltonians."""

    def test_ising_hamiltonian(self) -> None:
        """Test ``H_{0}`` of the all-plus configuration."""
        value = hamiltonian(
            ising_interaction(), [Z.identity], constant_line(-2, 2, 1)
        )
        assert value.value == -2.0
        assert value.truncation_error == 0.0

    def test_ising_cocycle(self) -> None:
        """Test the cocycle of a single spin flip."""
        x = constant_line(-2, 2, 1)
        y = x.override(line({0: -1}))
        phi = cocycle_interaction(ising_interaction(), x, y, [Z.identity])
        assert phi.value == -4.0

    def test_cocycle_needs_agreement_outside_delta(self) -> None:
        """Test that windows differing outside ``Δ`` are rejected."""
        x = constant_line(-2, 2, 1)
        y = x.override(line({1: -1}))
        with pytest.raises(UsageError):
            cocycle_interaction(ising_interaction(), x, y, [Z.identity])

    def test_missing_coordinate(self) -> None:
        """Test that an incomplete window is a domain error."""
        with pytest.raises(DomainError):
            hamiltonian(ising_interaction(), [Z.identity], line({0: 1, 1: 1}))

    def test_term_validation(self) -> None:
        """Test that supports contain the identity and match table keys."""
        one = Z.element((1,))
        with pytest.raises(ValidationError):
            LocalTerm((one,), {(1,): 1.0})
        with pytest.raises(ValidationError):
            LocalTerm((Z.identity, one), {(1,): 1.0})

    def test_unknown_symbols(self) -> None:
        """Test that interaction tables use the alphabet."""
        term = LocalTerm((Z.identity,), {(5,): 1.0})
        with pytest.raises(ValidationError) as info:
            Interaction(Z, SPINS, (term,))
        assert info.value.diagnostics[0]["path"] == "terms[0].table"

    def test_b_norm(self) -> None:
        """Test ``‖Φ‖_B`` of bond and plaquette interactions."""
        assert b_norm(ising_interaction()).value == 2.0
        assert b_norm(ising_interaction(dimension=2)).value == 4.0
        assert b_norm(plaquette_interaction(2.0)).value == 8.0

    def test_full_dimensionality(self) -> None:
        """Test the least constants ``C`` for bonds and plaquettes."""
        ising = is_full_dimensional(ising_interaction(), ball(Z, 3))
        assert ising.holds
        assert ising.constant == 1.5
        plaquette = is_full_dimensional(
            plaquette_interaction(), ball(GroupSpec.parse("Z^2"), 4)
        )
        assert plaquette.constant == 3.25

    def test_arithmetic(self) -> None:
        """Test scaling and addition of finite-range interactions."""
        doubled = ising_interaction().scaled(2.0)
        assert b_norm(doubled).value == 4.0
        total = ising_interaction() + ising_interaction()
        assert len(total.terms) == 2
        with pytest.raises(UsageError):
            _ = ising_interaction() + ising_interaction(dimension=2)


class TestRadialTail:
    """Test summable pair tails."""

    def test_tail_validation(self) -> None:
        """Test symmetry and the tail-bound grammar."""
        with pytest.raises(ValidationError):
            RadialTail({(0, 1): 1.0})
        with pytest.raises(ValidationError):
            RadialTail({(1, 1): 1.0}, tail_bound_formula="log n")

    def test_tail_bound(self) -> None:
        """Test evaluation of the declared tail bound."""
        assert RadialTail({(1, 1): 1.0}).tail_bound(10) == pytest.approx(0.2)
        cubic = RadialTail({(1, 1): 1.0}, 1.0, 3.0, "3/n^2")
        assert cubic.tail_bound(10) == pytest.approx(0.03)
        assert math.isinf(cubic.tail_bound(0))

    def test_truncation(self) -> None:
        """Test that each pair orbit becomes one term."""
        truncated = inverse_square_interaction().truncated(3)
        assert truncated.is_finite_range
        assert len(truncated.terms) == 3
        assert truncated.terms[1].table[(1, 1)] == pytest.approx(0.25)

    def test_tail_hamiltonian(self) -> None:
        """Test ``H_{0}`` of the all-ones sequence with its error bound."""
        window = constant_line(-100, 100, 1)
        value = hamiltonian(
            inverse_square_interaction(), [Z.identity], window, tail_radius=100
        )
        expected = 2 * math.fsum(1 / j**2 for j in range(1, 101))
        assert value.value == pytest.approx(expected, abs=1e-12)
        assert value.truncation_error == pytest.approx(0.02)

    def test_tail_b_norm(self) -> None:
        """Test that the B-norm converges to ``π²/3``."""
        norm = b_norm(inverse_square_interaction(), radius=10_000)
        assert abs(norm.value - math.pi**2 / 3) < 1e-3
        assert norm.tail_bound == pytest.approx(2e-4)

    def test_tail_is_not_full_dimensional(self) -> None:
        """Test that a tail never certifies full dimensionality."""
        check = is_full_dimensional(inverse_square_interaction(), ball(Z, 5))
        assert not check.holds
        assert check.truncation_radius == 4


class TestPotentials:
    """Test variations and variation norms."""

    def test_product_variations(self) -> None:
        """Test ``v(x_0 x_1) = (1, 2, 0, ...)``."""
        f = product_potential()
        assert f.radius == 2
        assert variations(f, None, 3) == [1.0, 2.0, 0.0, 0.0]
        assert variation(f, None, 1) == 2.0

    def test_product_norms(self) -> None:
        """Test the shell, volume and SV norms of ``x_0 x_1``."""
        f = product_potential()
        balls = ball(Z, 3)
        shell = shell_norm(f, balls, 2)
        assert shell.value == 5.0
        assert shell.exact
        assert shell.partial_sums == (1.0, 5.0, 5.0)
        assert volume_norm(f, balls, 2).value == 2.0
        assert sv_norm(f, balls, 2).value == 3.0
        assert not shell.diverges

    def test_constant_potential(self) -> None:
        """Test that constants have only a sup-norm."""
        f = constant_potential(Z, SPINS, -3.0)
        assert variations(f, None, 2) == [3.0, 0.0, 0.0]
        assert volume_norm(f, ball(Z, 2), 2).value == 0.0

    def test_sv_norm_needs_lattice(self) -> None:
        """Test that the SV norm is lattice only."""
        spec = GroupSpec.parse("F2")
        f = constant_potential(spec, SPINS, 1.0)
        with pytest.raises(UsageError):
            sv_norm(f, ball(spec, 2), 2)

    def test_constrained_variations(self) -> None:
        """Test variations over golden-mean patterns."""
        identity = Z.identity
        one = Z.element((1,))
        f = LocalPotential(
            Z, BITS, (PotentialTerm((identity, one), {(0, 1): 1.0}),)
        )
        sft = golden_mean_shift()
        exact = variations(f, sft, 1, semantics=Semantics.EXACT)
        assert exact == [1.0, 1.0]
        report = shell_norm(f, ball(Z, 3), 1, sft, Semantics.LOCAL)
        assert not report.exact

    def test_series_potential(self) -> None:
        """Test declared variation bounds of a series potential."""
        f = SeriesPotential(Z, SPINS, (), lambda k: 2.0**-k)
        report = shell_norm(f, ball(Z, 1), 4)
        assert report.variations == (1.0, 0.5, 0.25, 0.125, 0.0625)
        assert report.partial_sums[-1] == pytest.approx(1 + 2 * 0.9375)
        assert report.tail_bound == pytest.approx(0.125)
        assert report.value == pytest.approx(3.0)
        assert not report.diverges

    def test_series_constant_bound(self) -> None:
        """Test that a bound stuck at a positive constant has no finite tail."""
        f = SeriesPotential(
            Z, SPINS, (), lambda k: [2.0, 1.0, 0.25][min(k, 2)], constant_from=2
        )
        report = shell_norm(f, ball(Z, 1), 4)
        assert report.partial_sums[-1] == pytest.approx(2 + 2 * 1.75)
        assert math.isinf(report.tail_bound)
        assert math.isinf(report.value)
        assert not report.diverges

    def test_series_vanishing_bound(self) -> None:
        """Test a bound that vanishes from a declared index on."""
        f = SeriesPotential(
            Z, SPINS, (), lambda k: [1.0, 0.5, 0.0][min(k, 2)], constant_from=2
        )
        report = shell_norm(f, ball(Z, 1), 0)
        assert report.tail_bound == 1.0
        assert report.value == 2.0
        assert shell_norm(f, ball(Z, 1), 3).tail_bound == 0.0

    def test_series_slow_decay(self) -> None:
        """Test that ``1/k`` bounds leave an unbounded tail."""
        f = SeriesPotential(Z, SPINS, (), lambda k: 1.0 / (k + 1))
        report = shell_norm(f, ball(Z, 1), 5)
        assert math.isinf(report.value)
        assert not report.diverges

    def test_partial_sum(self) -> None:
        """Test ``f_m`` on the all-plus sequence."""
        f = product_potential()
        assert partial_sum_f_m(f, 2, constant_line(-3, 3, 1)) == 3.0
        with pytest.raises(UsageError):
            partial_sum_f_m(f, 0, constant_line(-3, 3, 1))

    def test_potential_cocycle(self) -> None:
        """Test that ``x_0 x_1`` and the Ising bonds share a cocycle."""
        x = constant_line(-3, 3, 1)
        y = x.override(line({0: -1}))
        phi = cocycle_potential(product_potential(), x, y, [Z.identity])
        assert phi.value == -4.0


class TestWeightSchemes:
    """Test weighting schemes and their images."""

    def test_parse(self) -> None:
        """Test the textual scheme forms."""
        assert WeightScheme.parse("uniform").kind is SchemeKind.UNIFORM
        scheme = WeightScheme.parse("dictator:lex-middle")
        assert scheme.rule is DictatorRule.LEX_MIDDLE
        assert WeightScheme.parse("dictator").describe() == (
            "dictator:shortlex-min"
        )
        for text in ("explicit", "uniform:lex-min", "bogus", "dictator:x"):
            with pytest.raises(UsageError):
                WeightScheme.parse(text)

    def test_uniform_weights(self) -> None:
        """Test that uniform weights are ``1/|Λ|``."""
        term = plaquette_interaction().terms[0]
        assert WeightScheme().weights_for(0, term) == [Fraction(1, 4)] * 4

    def test_lex_middle(self) -> None:
        """Test the middle designation on a three-site support."""
        support = tuple(Z.element((i,)) for i in range(3))
        term = LocalTerm(support, {(1, 1, 1): 1.0})
        scheme = WeightScheme(SchemeKind.DICTATOR, DictatorRule.LEX_MIDDLE)
        assert scheme.weights_for(0, term) == [0, 1, 0]

    def test_lex_rules_need_lattice(self) -> None:
        """Test that lexicographic rules refuse free groups."""
        spec = GroupSpec.parse("F2")
        term = LocalTerm((spec.identity, spec.element((1,))), {(1, 1): 1.0})
        interaction = Interaction(spec, SPINS, (term,))
        scheme = WeightScheme(SchemeKind.DICTATOR, DictatorRule.LEX_MIN)
        with pytest.raises(UsageError):
            translate_weight(interaction, scheme)

    def test_explicit_weights(self) -> None:
        """Test validation of explicit weights."""
        term = ising_interaction().terms[0]
        good = WeightScheme(
            SchemeKind.EXPLICIT, weights={0: (Fraction(1, 3), Fraction(2, 3))}
        )
        assert sum(good.weights_for(0, term)) == 1
        bad = WeightScheme(
            SchemeKind.EXPLICIT, weights={0: (Fraction(1, 3), Fraction(1, 3))}
        )
        with pytest.raises(ValidationError):
            bad.weights_for(0, term)
        with pytest.raises(ValidationError):
            good.weights_for(1, term)

    def test_uniform_image(self) -> None:
        """Test ``A_Φ = ½ x_0 x_1 + ½ x_{-1} x_0`` for Ising bonds."""
        potential = translate_weight(ising_interaction(), WeightScheme())
        assert [t.weight for t in potential.terms] == [-0.5, -0.5]
        assert potential.evaluate(constant_line(-1, 1, 1)) == 1.0

    def test_full_dimensional_bound_ising(self) -> None:
        """Test ``5 <= 2 · 3/2 · 2`` for one-dimensional Ising bonds."""
        bound = full_dimensional_bound(ising_interaction(), WeightScheme())
        assert bound.shell_norm == 5.0
        assert bound.constant == 1.5
        assert bound.bound == 6.0
        assert bound.holds

    def test_full_dimensional_bound_plaquette(self) -> None:
        """Test ``25J <= 26J`` for plaquettes."""
        bound = full_dimensional_bound(plaquette_interaction(), WeightScheme())
        assert bound.shell_norm == pytest.approx(25.0)
        assert bound.bound == pytest.approx(26.0)
        assert bound.margin == pytest.approx(1.0)

    def test_same_cocycle_full_shift(self) -> None:
        """Test that uniform and dictator images share the cocycle."""
        report = check_same_cocycle(
            ising_interaction(),
            WeightScheme(),
            WeightScheme.parse("dictator"),
            trials=25,
            seed=3,
        )
        assert report.max_discrepancy < 1e-10
        assert report.pairs_tested == 25

    def test_same_cocycle_golden_mean(self) -> None:
        """Test the cocycle identity on the golden-mean shift."""
        report = check_same_cocycle(
            golden_mean_interaction(),
            WeightScheme(),
            WeightScheme.parse("dictator:lex-min"),
            sft=golden_mean_shift(),
            trials=25,
            semantics=Semantics.EXACT,
        )
        assert report.max_discrepancy < 1e-10
        assert report.semantics is Semantics.EXACT

    def test_same_cocycle_free_group(self) -> None:
        """Test uniform and dictator images of bonds and a triangle on F2."""
        spec = GroupSpec.parse("F2")
        e = spec.identity
        a = spec.element((1,))
        b = spec.element((2,))
        bond = {(s, t): -float(s * t) for s in SPINS for t in SPINS}
        terms = (
            LocalTerm((e, a), bond),
            LocalTerm((e, b), bond),
            LocalTerm((e, a, a * b), {(1, 1, 1): 0.5}),
        )
        report = check_same_cocycle(
            Interaction(spec, SPINS, terms),
            WeightScheme(),
            WeightScheme.parse("dictator"),
            trials=30,
            seed=5,
        )
        assert report.max_discrepancy < 1e-10
        assert report.pairs_tested == 30

    def test_same_cocycle_rejects_tails(self) -> None:
        """Test that tails are refused."""
        with pytest.raises(UsageError):
            check_same_cocycle(
                inverse_square_interaction(), WeightScheme(), WeightScheme()
            )


class TestCocycleLaws:
    """Test Hamiltonian and cocycle identities on random lattice windows."""

    def setup_method(self) -> None:
        """Mix bonds and plaquettes on ``Z^2``."""
        self.rng = np.random.default_rng(11)
        self.interaction = ising_interaction(0.7, 2) + plaquette_interaction(
            0.3
        )

    def test_interaction_chain_rule(self) -> None:
        """Test ``φ_Φ(x, z) = φ_Φ(x, y) + φ_Φ(y, z)``."""
        for _ in range(20):
            delta = random_sites(self.rng, 1)
            x = random_spins(self.rng, 4)
            y = refill(self.rng, x, delta)
            z = refill(self.rng, x, delta)
            xy = cocycle_interaction(self.interaction, x, y, delta).value
            yz = cocycle_interaction(self.interaction, y, z, delta).value
            xz = cocycle_interaction(self.interaction, x, z, delta).value
            assert xz == pytest.approx(xy + yz, abs=1e-12)

    def test_potential_chain_rule(self) -> None:
        """Test ``φ_f(x, z) = φ_f(x, y) + φ_f(y, z)``."""
        f = translate_weight(self.interaction, WeightScheme.parse("dictator"))
        for _ in range(20):
            delta = random_sites(self.rng, 1)
            x = random_spins(self.rng, 4)
            y = refill(self.rng, x, delta)
            z = refill(self.rng, x, delta)
            xy = cocycle_potential(f, x, y, delta).value
            yz = cocycle_potential(f, y, z, delta).value
            xz = cocycle_potential(f, x, z, delta).value
            assert xz == pytest.approx(xy + yz, abs=1e-12)

    def test_hamiltonian_translation(self) -> None:
        """Test ``H_{gΛ}(g·x) = H_Λ(x)``."""
        for _ in range(10):
            x = random_spins(self.rng, 4)
            region = random_sites(self.rng, 2)
            g = Z2.element(tuple(int(c) for c in self.rng.integers(-5, 6, 2)))
            moved = hamiltonian(
                self.interaction, [g * h for h in region], x.shifted(g)
            )
            here = hamiltonian(self.interaction, region, x)
            assert moved.value == pytest.approx(here.value, abs=1e-12)

    def test_hamiltonian_additivity(self) -> None:
        """Test that ``H`` of a union corrects for translates met twice."""
        for _ in range(10):
            x = random_spins(self.rng, 4)
            sites = random_sites(self.rng, 2)
            first = sites[::2]
            second = sites[1::2]
            shared = set(interaction_translates(self.interaction, first))
            shared &= set(interaction_translates(self.interaction, second))
            total = hamiltonian(self.interaction, sites, x).value
            parts = (
                hamiltonian(self.interaction, first, x).value
                + hamiltonian(self.interaction, second, x).value
                - energy_of_translates(self.interaction, shared, x)
            )
            assert total == pytest.approx(parts, abs=1e-12)

    def test_cocycle_bound(self) -> None:
        """Test ``|φ_Φ(x, y)| <= 2|Δ| ‖Φ‖_B``."""
        norm = b_norm(self.interaction).value
        for _ in range(30):
            delta = random_sites(self.rng, 2)
            x = random_spins(self.rng, 4)
            y = refill(self.rng, x, delta)
            value = cocycle_interaction(self.interaction, x, y, delta).value
            assert abs(value) <= 2 * len(delta) * norm + 1e-12

    def test_translate_weight_is_linear(self) -> None:
        """Test ``A_{αΦ+Ψ} = α A_Φ + A_Ψ`` for both scheme kinds."""
        phi = ising_interaction(1.0, 2)
        psi = plaquette_interaction(0.4)
        alpha = -1.5
        for text in ("uniform", "dictator"):
            scheme = WeightScheme.parse(text)
            combined = translate_weight(phi.scaled(alpha) + psi, scheme)
            first = translate_weight(phi, scheme)
            second = translate_weight(psi, scheme)
            for _ in range(10):
                x = random_spins(self.rng, 3)
                expected = alpha * first.evaluate(x) + second.evaluate(x)
                assert combined.evaluate(x) == pytest.approx(
                    expected, abs=1e-12
                )


class TestConversions:
    """Test inverse maps, mean energies and the long-range example."""

    def test_interaction_from_potential(self) -> None:
        """Test the constructive preimage of ``x_0 x_1``."""
        f = product_potential()
        interaction = interaction_from_potential(f)
        assert b_norm(interaction).value == 3.0
        image = translate_weight(interaction, WeightScheme.parse("dictator"))
        window = line({-1: 1, 0: -1, 1: -1, 2: 1})
        assert image.evaluate(window) == f.evaluate(window)

    def test_mean_energy_all_plus(self) -> None:
        """Test ``∫ A_Φ dμ = 1`` at the all-plus point mass."""
        measure = PointMass(constant_line(0, 3, 1))
        result = mean_energy(ising_interaction(), measure, WeightScheme())
        assert result.weighted == pytest.approx(1.0)
        assert result.closed_form == pytest.approx(1.0)

    def test_mean_energy_is_weight_free(self) -> None:
        """Test that the dictator image has the same mean energy."""
        measure = PointMass(line({0: 1, 1: 1, 2: -1, 3: -1}))
        for text in ("uniform", "dictator", "dictator:lex-min"):
            result = mean_energy(
                ising_interaction(), measure, WeightScheme.parse(text)
            )
            assert result.deviation < 1e-12

    def test_periodic_view_needs_box(self) -> None:
        """Test that mean energies need a coordinate box."""
        with pytest.raises(DomainError):
            PeriodicView(line({0: 1, 2: 1}))

    def test_counterexample(self) -> None:
        """Test the inverse-square pair interaction and its dictator image."""
        result = counterexample_interaction(50)
        expected = 2 * math.fsum(1 / j**2 for j in range(1, 51))
        assert result.b_norm.value == pytest.approx(expected)
        assert result.norm.variations[1] == pytest.approx(math.pi**2 / 6)
        assert result.norm.diverges
        assert math.isinf(result.norm.value)
        assert result.norm.certificate is not None
        assert result.norm.certificate.witness == 83

    def test_counterexample_radius(self) -> None:
        """Test that the truncation radius is positive."""
        with pytest.raises(UsageError):
            counterexample_interaction(0)

    @pytest.mark.slow
    def test_counterexample_large_radius(self) -> None:
        """Test the B-norm partial sum at ``R = 10^4``."""
        result = counterexample_interaction(10_000)
        assert abs(result.b_norm.value - math.pi**2 / 3) < 1e-3


if __name__ == "__main__":
    pytest.main([__file__])
