"""Exact-mixture construction and the four distribution-function flavors."""

import math
from fractions import Fraction

import pytest

from dualquant import (
    NEG_INF,
    POS_INF,
    Atom,
    BadValueError,
    BadWeightError,
    DistFnFlavor,
    EmptyDataError,
    MixtureDistribution,
    UniformSegment,
    as_extended,
    as_level,
    breakpoints,
    describe,
    dist_fn,
    essential_bounds,
    is_continuous,
    is_strictly_monotone_on_hull,
    make_empirical,
    negate,
)

F_CLOSED = DistFnFlavor.LEFT_CLOSED
F_OPEN = DistFnFlavor.LEFT_OPEN
G_CLOSED = DistFnFlavor.RIGHT_CLOSED
G_OPEN = DistFnFlavor.RIGHT_OPEN

ALL_FLAVORS = tuple(DistFnFlavor)


def uniform(lo, hi, mass=Fraction(1)):
    return UniformSegment(float(lo), float(hi), mass)


@pytest.fixture
def touching_segments():
    return MixtureDistribution(
        atoms=(), segments=(uniform(0, 1, Fraction(1, 2)), uniform(1, 2, Fraction(1, 2)))
    )


@pytest.fixture
def gapped_segments():
    return MixtureDistribution(
        atoms=(), segments=(uniform(0, 1, Fraction(1, 2)), uniform(2, 3, Fraction(1, 2)))
    )


@pytest.fixture
def atom_in_segment():
    return MixtureDistribution(
        atoms=(Atom(0.5, Fraction(1, 2)),), segments=(uniform(0, 1, Fraction(1, 2)),)
    )


class TestLevelCoercion:
    def test_float_levels_follow_decimal_intent(self):
        # float 0.2 denotes the typed decimal 1/5, not the nearest double
        assert as_level(0.2) == Fraction(1, 5)
        assert as_level(0.1) == Fraction(1, 10)

    def test_string_and_fraction_and_int(self):
        assert as_level("0.25") == Fraction(1, 4)
        assert as_level("3/10") == Fraction(3, 10)
        assert as_level(Fraction(7, 8)) == Fraction(7, 8)
        assert as_level(1) == Fraction(1)
        assert as_level(0) == Fraction(0)

    @pytest.mark.parametrize("bad", [-0.1, 1.5, float("nan"), float("inf"), "x", "1/0"])
    def test_rejects_bad_levels(self, bad):
        with pytest.raises(BadValueError):
            as_level(bad)

    def test_rejects_non_numeric_types(self):
        with pytest.raises(TypeError):
            as_level(None)


class TestExtendedCoercion:
    def test_collapses_lossless_rationals_to_floats(self):
        out = as_extended(Fraction(1, 2))
        assert out == 0.5 and isinstance(out, float)

    def test_keeps_lossy_rationals_exact(self):
        out = as_extended(Fraction(1, 3))
        assert out == Fraction(1, 3) and isinstance(out, Fraction)

    def test_keeps_overflowing_rationals_exact(self):
        big = Fraction(10) ** 400
        assert as_extended(big) == big and isinstance(as_extended(big), Fraction)


class TestConstruction:
    def test_empirical_uniform_weights(self):
        d = make_empirical([3.0, 1.0, 2.0])
        assert [a.location for a in d.atoms] == [1.0, 2.0, 3.0]
        assert all(a.mass == Fraction(1, 3) for a in d.atoms)
        assert d.segments == ()

    def test_empirical_pools_duplicate_values(self):
        d = make_empirical([2.0, 1.0, 2.0])
        assert [(a.location, a.mass) for a in d.atoms] == [
            (1.0, Fraction(1, 3)),
            (2.0, Fraction(2, 3)),
        ]

    def test_empirical_weights(self):
        d = make_empirical([1.0, 2.0], weights=[1, 3])
        assert [(a.location, a.mass) for a in d.atoms] == [
            (1.0, Fraction(1, 4)),
            (2.0, Fraction(3, 4)),
        ]

    def test_empirical_weights_accept_strings_and_fractions(self):
        d = make_empirical([1.0, 2.0], weights=["0.5", Fraction(3, 2)])
        assert d.atoms[0].mass == Fraction(1, 4)
        assert d.atoms[1].mass == Fraction(3, 4)

    def test_mixture_normalizes_total_mass(self):
        d = MixtureDistribution(
            atoms=(Atom(0.0, Fraction(2)),), segments=(uniform(1, 2, Fraction(2)),)
        )
        assert d.atoms[0].mass == Fraction(1, 2)
        assert d.segments[0].mass == Fraction(1, 2)

    def test_mixture_sorts_components(self):
        d = MixtureDistribution(
            atoms=(Atom(2.0, Fraction(1, 4)), Atom(-1.0, Fraction(1, 4))),
            segments=(uniform(5, 6, Fraction(1, 4)), uniform(3, 4, Fraction(1, 4))),
        )
        assert [a.location for a in d.atoms] == [-1.0, 2.0]
        assert [s.lo for s in d.segments] == [3.0, 5.0]

    def test_segment_width(self):
        assert uniform(1, 3).width == 2.0

    @pytest.mark.parametrize(
        "ctor",
        [
            lambda: Atom(float("inf"), Fraction(1, 2)),
            lambda: Atom(float("nan"), Fraction(1, 2)),
            lambda: UniformSegment(1.0, 1.0, Fraction(1)),
            lambda: UniformSegment(2.0, 1.0, Fraction(1)),
            lambda: MixtureDistribution(
                (Atom(1.0, Fraction(1, 2)), Atom(1.0, Fraction(1, 2))), ()
            ),
            lambda: MixtureDistribution(
                (), (uniform(0, 2, Fraction(1, 2)), uniform(1, 3, Fraction(1, 2)))
            ),
        ],
    )
    def test_rejects_malformed_components(self, ctor):
        with pytest.raises(BadValueError):
            ctor()

    @pytest.mark.parametrize("mass", [Fraction(0), Fraction(-1, 2)])
    def test_rejects_nonpositive_masses(self, mass):
        with pytest.raises(BadWeightError):
            Atom(0.0, mass)
        with pytest.raises(BadWeightError):
            UniformSegment(0.0, 1.0, mass)

    def test_rejects_empty_mixture(self):
        with pytest.raises(EmptyDataError):
            MixtureDistribution((), ())
        with pytest.raises(EmptyDataError):
            make_empirical([])

    def test_rejects_bad_weight_lists(self):
        with pytest.raises(BadWeightError):
            make_empirical([1.0, 2.0], weights=[1, 0])
        with pytest.raises(BadWeightError):
            make_empirical([1.0, 2.0], weights=[1])

    def test_rejects_non_finite_values(self):
        with pytest.raises(BadValueError):
            make_empirical([float("nan")])
        with pytest.raises(BadValueError):
            make_empirical([float("inf")])

    def test_touching_segments_allowed(self, touching_segments):
        assert len(touching_segments.segments) == 2


class TestDistFn:
    def test_four_flavors_at_an_atom(self, ph_dist):
        x = 4.8327  # second-smallest sample point
        assert dist_fn(ph_dist, F_CLOSED, x) == Fraction(1, 5)
        assert dist_fn(ph_dist, F_OPEN, x) == Fraction(1, 10)
        assert dist_fn(ph_dist, G_CLOSED, x) == Fraction(9, 10)
        assert dist_fn(ph_dist, G_OPEN, x) == Fraction(4, 5)

    def test_flavors_agree_between_atoms(self, ph_dist):
        x = 4.9
        assert dist_fn(ph_dist, F_CLOSED, x) == dist_fn(ph_dist, F_OPEN, x) == Fraction(3, 10)
        assert dist_fn(ph_dist, G_CLOSED, x) == dist_fn(ph_dist, G_OPEN, x) == Fraction(7, 10)

    @pytest.mark.parametrize(
        "x", [4.0, 4.7336, 4.8, 4.8327, 5.0, 5.6105, 6.0, NEG_INF, POS_INF]
    )
    def test_complement_identities_hold_exactly(self, ph_dist, x):
        assert dist_fn(ph_dist, F_CLOSED, x) + dist_fn(ph_dist, G_OPEN, x) == 1
        assert dist_fn(ph_dist, F_OPEN, x) + dist_fn(ph_dist, G_CLOSED, x) == 1

    def test_limits_at_infinities(self, ph_dist):
        assert dist_fn(ph_dist, F_CLOSED, NEG_INF) == 0
        assert dist_fn(ph_dist, F_OPEN, NEG_INF) == 0
        assert dist_fn(ph_dist, G_CLOSED, NEG_INF) == 1
        assert dist_fn(ph_dist, G_OPEN, NEG_INF) == 1
        assert dist_fn(ph_dist, F_CLOSED, POS_INF) == 1
        assert dist_fn(ph_dist, F_OPEN, POS_INF) == 1
        assert dist_fn(ph_dist, G_CLOSED, POS_INF) == 0
        assert dist_fn(ph_dist, G_OPEN, POS_INF) == 0

    def test_segment_mass_is_exactly_linear(self):
        u = MixtureDistribution(atoms=(), segments=(uniform(0, 1),))
        assert dist_fn(u, F_CLOSED, 0.25) == Fraction(1, 4)
        assert dist_fn(u, F_CLOSED, 0.5) == Fraction(1, 2)
        assert dist_fn(u, F_OPEN, 0.5) == Fraction(1, 2)  # no atom: both flavors agree
        assert dist_fn(u, G_CLOSED, 0.75) == Fraction(1, 4)

    def test_atom_sitting_inside_a_segment(self, atom_in_segment):
        d = atom_in_segment
        assert dist_fn(d, F_CLOSED, 0.5) == Fraction(3, 4)
        assert dist_fn(d, F_OPEN, 0.5) == Fraction(1, 4)
        assert dist_fn(d, G_CLOSED, 0.5) == Fraction(3, 4)
        assert dist_fn(d, G_OPEN, 0.5) == Fraction(1, 4)


class TestNegate:
    def test_involution(self, ph_dist, atom_in_segment):
        for d in (ph_dist, atom_in_segment):
            assert negate(negate(d)) == d

    def test_component_mirroring(self):
        d = MixtureDistribution(
            atoms=(Atom(2.0, Fraction(1, 2)),), segments=(uniform(0, 1, Fraction(1, 2)),)
        )
        nd = negate(d)
        assert [(a.location, a.mass) for a in nd.atoms] == [(-2.0, Fraction(1, 2))]
        assert [(s.lo, s.hi, s.mass) for s in nd.segments] == [(-1.0, 0.0, Fraction(1, 2))]

    @pytest.mark.parametrize("x", [4.0, 4.7336, 4.8327, 5.0, 5.6105, 6.0])
    def test_mirror_swaps_tail_functions(self, ph_dist, x):
        nd = negate(ph_dist)
        assert dist_fn(nd, F_CLOSED, -x) == dist_fn(ph_dist, G_CLOSED, x)
        assert dist_fn(nd, F_OPEN, -x) == dist_fn(ph_dist, G_OPEN, x)


class TestShapePredicates:
    def test_essential_bounds(self, ph_dist):
        assert essential_bounds(ph_dist) == (4.7336, 5.6105)
        d = MixtureDistribution(
            atoms=(Atom(5.0, Fraction(1, 2)),), segments=(uniform(-1, 3, Fraction(1, 2)),)
        )
        assert essential_bounds(d) == (-1.0, 5.0)

    def test_breakpoints_cover_all_component_edges(self, atom_in_segment):
        assert breakpoints(atom_in_segment) == (0.0, 0.5, 1.0)

    def test_continuity_means_no_atoms(self, ph_dist, touching_segments):
        for flavor in ALL_FLAVORS:
            assert not is_continuous(ph_dist, flavor)
            assert is_continuous(touching_segments, flavor)

    def test_strict_monotonicity_witnesses(
        self, ph_dist, touching_segments, gapped_segments, atom_in_segment
    ):
        single = make_empirical([1.5])
        for flavor in ALL_FLAVORS:
            assert is_strictly_monotone_on_hull(touching_segments, flavor)
            assert not is_strictly_monotone_on_hull(gapped_segments, flavor)
            assert not is_strictly_monotone_on_hull(ph_dist, flavor)  # flat between atoms
            assert is_strictly_monotone_on_hull(atom_in_segment, flavor)
            assert is_strictly_monotone_on_hull(single, flavor)

    def test_predicates_are_flavor_independent(
        self, ph_dist, touching_segments, gapped_segments, atom_in_segment
    ):
        for d in (ph_dist, touching_segments, gapped_segments, atom_in_segment):
            assert len({is_continuous(d, fl) for fl in ALL_FLAVORS}) == 1
            assert len({is_strictly_monotone_on_hull(d, fl) for fl in ALL_FLAVORS}) == 1


class TestDescribe:
    def test_mentions_every_component(self, atom_in_segment):
        text = describe(atom_in_segment)
        assert "0.5" in text and "U[0, 1]" in text

    def test_total_mass_is_one(self):
        d = make_empirical([1.0, 2.0, 3.0], weights=[1, 2, 3])
        assert sum(a.mass for a in d.atoms) == 1
        assert math.isclose(float(sum(a.mass for a in d.atoms)), 1.0)
