import numpy as np
import pytest
from hypothesis import given, strategies as st

from foxbird.core import (
    Individual,
    Population,
    clamp,
    evaluate,
    init_population,
    make_rng,
    make_search_space,
    select_best,
)


def sphere(x):
    return float(np.dot(x, x))


class TestSearchSpace:
    def test_unit_cube(self):
        space = make_search_space([0, 0, 0], [1, 1, 1])
        assert space.dims == 3

    def test_rastrigin_box(self):
        space = make_search_space([-5.12] * 10, [5.12] * 10)
        assert space.dims == 10

    def test_inverted_bound(self):
        with pytest.raises(ValueError, match="inverted bound at j=1"):
            make_search_space([0, 1], [1, 0])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            make_search_space([0, 0], [1, 1, 1])


class TestInitPopulation:
    def test_bounds_and_size(self):
        space = make_search_space([0, 0, 0], [1, 1, 1])
        pop = init_population(space, 30, make_rng(7))
        assert len(pop) == 30
        for m in pop:
            assert np.all(m.position >= 0) and np.all(m.position <= 1)
            assert m.fitness is None

    def test_determinism(self):
        space = make_search_space([0, 0, 0], [1, 1, 1])
        p1 = init_population(space, 30, make_rng(7))
        p2 = init_population(space, 30, make_rng(7))
        assert np.array_equal(p1.positions(), p2.positions())

    def test_too_small(self):
        space = make_search_space([0], [1])
        with pytest.raises(ValueError):
            init_population(space, 3, make_rng(0))


class TestEvaluate:
    def test_origin_is_best(self):
        pop = Population([Individual(np.array([1.0, 1.0])),
                          Individual(np.zeros(2))])
        evaluate(pop, sphere)
        assert pop.members[1].fitness == 0.0
        assert pop.best_index == 1

    def test_hand_values(self):
        pop = Population([Individual(np.array([1.0, 1.0])),
                          Individual(np.array([2.0, 2.0]))])
        evaluate(pop, sphere)
        assert pop.members[0].fitness == 2.0
        assert pop.members[1].fitness == 8.0
        assert pop.best_index == 0

    def test_non_finite_rejected(self):
        pop = Population([Individual(np.zeros(2))])
        with pytest.raises(ValueError, match="non-finite fitness"):
            evaluate(pop, lambda x: float("nan"))


class TestSelectBest:
    def _pop(self, fits):
        return Population([Individual(np.array([float(i)]), f)
                           for i, f in enumerate(fits)])

    def test_sorted_prefix(self):
        best = select_best(self._pop([3, 1, 2]), 2)
        assert [b.fitness for b in best] == [1, 2]

    def test_full_sort(self):
        best = select_best(self._pop([3, 1, 2]), 3)
        assert [b.fitness for b in best] == [1, 2, 3]

    def test_tie_lowest_index(self):
        best = select_best(self._pop([5, 5]), 1)
        assert best[0].position[0] == 0.0

    def test_unevaluated_rejected(self):
        pop = Population([Individual(np.zeros(1)), Individual(np.zeros(1), 1.0)])
        with pytest.raises(ValueError, match="unevaluated"):
            select_best(pop, 1)

    def test_k_too_large(self):
        with pytest.raises(ValueError):
            select_best(self._pop([1, 2]), 3)

    def test_k_smallest_multiset(self):
        rng = make_rng(3)
        fits = list(rng.random(20))
        got = [b.fitness for b in select_best(self._pop(fits), 7)]
        assert got == sorted(fits)[:7]


class TestClamp:
    def test_above(self):
        space = make_search_space([0], [1])
        assert clamp(np.array([1.5]), space)[0] == 1.0

    def test_identity(self):
        space = make_search_space([0, 0], [1, 1])
        x = np.array([0.3, 0.7])
        assert np.array_equal(clamp(x, space), x)

    def test_below(self):
        space = make_search_space([-5.12], [5.12])
        assert clamp(np.array([-7.0]), space)[0] == -5.12

    def test_length_mismatch(self):
        space = make_search_space([0], [1])
        with pytest.raises(ValueError, match="length mismatch"):
            clamp(np.array([0.5, 0.5]), space)

    @given(st.lists(st.floats(-100, 100), min_size=3, max_size=3))
    def test_always_in_box(self, vals):
        space = make_search_space([-1, 0, 2], [1, 5, 3])
        out = clamp(np.array(vals), space)
        assert np.all(out >= space.lower) and np.all(out <= space.upper)
