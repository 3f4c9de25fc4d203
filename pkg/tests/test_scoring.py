import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mfmod.depgraph import CONTROL, DATA, Edge
from mfmod.transform.lower import lower, lower_baseline
from mfmod.transform.scoring import (
    DeviationScores,
    TransformWeights,
    dice_dissimilarity,
    ir_edges,
    objective,
    original_edges,
    score_candidate,
    select,
)
from mfmod.verify import generate_tests


def scored(e):
    return [DeviationScores(0.0, 0.0, x) for x in e]


def test_objective_example():
    assert objective(0.2, 0.1, TransformWeights(0.5, 0.5)) == pytest.approx(0.15, abs=1e-12)


def test_dice_example():
    base = {Edge("a", "b", CONTROL), Edge("a", "c", CONTROL), Edge("b", "c", DATA, "x"), Edge("c", "d", CONTROL)}
    extra = base | {Edge("d", "a", DATA, "y")}
    # 1 - 2*4/(4+5)
    assert dice_dissimilarity(base, extra) == Fraction(1, 9)
    assert dice_dissimilarity(set(), set()) == 0
    assert dice_dissimilarity(base, set()) == 1


def test_select_examples():
    assert select([None] * 3, scored([0.3, 0.15, 0.4])) == 1
    assert select([None] * 3, scored([0.2, 0.2, 0.5])) == 0
    assert select([None], scored([0.9])) == 0
    with pytest.raises(ValueError):
        select([], [])
    with pytest.raises(ValueError):
        select([None, None], scored([0.1]))


def test_weights():
    assert TransformWeights.from_options(0.3, None).beta == pytest.approx(0.7)
    assert TransformWeights.from_options(None, None) == TransformWeights(0.5, 0.5)
    for a, b in [(0.7, 0.7), (-0.1, 1.1)]:
        with pytest.raises(ValueError):
            TransformWeights(a, b)


def brute_argmin(values):
    lo = min(values)
    return [i for i, v in enumerate(values) if v == lo][0]


def random_score_sets(n_sets=100, seed=11):
    """Score sets on a dyadic grid, so scaling by the constants below is exact in floats."""
    rng = random.Random(seed)
    out = []
    for _ in range(n_sets):
        w = TransformWeights(*(lambda a: (a, 1 - a))(rng.randrange(9) / 8))
        k = rng.randrange(1, 8)
        pairs = [(rng.randrange(65) / 64, rng.randrange(65) / 64) for _ in range(k)]
        out.append((w, pairs))
    return out


def agrees_with_oracle(w, pairs) -> bool:
    scores = [DeviationScores(s, p, objective(s, p, w)) for s, p in pairs]
    return select([None] * len(pairs), scores) == brute_argmin([sc.e_trans for sc in scores])


def scaling_invariant(w, pairs, c) -> bool:
    before = select([None] * len(pairs), [DeviationScores(s, p, objective(s, p, w)) for s, p in pairs])
    after = select(
        [None] * len(pairs), [DeviationScores(c * s, c * p, objective(c * s, c * p, w)) for s, p in pairs]
    )
    return before == after


def test_select_matches_bruteforce_on_100_sets():
    assert all(agrees_with_oracle(w, pairs) for w, pairs in random_score_sets())


@pytest.mark.parametrize("c", [0.25, 2.0, 3.0, 1000.0])
def test_weight_scaling_invariance(c):
    assert all(scaling_invariant(w, pairs, c) for w, pairs in random_score_sets())


@given(
    st.floats(0, 1),
    st.floats(0, 1),
    st.floats(0, 1),
    st.floats(0.001, 1),
)
def test_objective_monotone(a, s, p, bump):
    w = TransformWeights(a, 1 - a)
    assert objective(s + bump, p, w) >= objective(s, p, w)
    assert objective(s, p + bump, w) >= objective(s, p, w)


def test_baseline_has_zero_deviation(corpus):
    for name, p in corpus:
        tests = generate_tests(p, 10, 42)
        base = lower_baseline(p)
        assert ir_edges(base.ir) == original_edges(p), name
        sc = score_candidate(base, p, TransformWeights(), tests)
        assert sc == DeviationScores(0.0, 0.0, 0.0), name


def test_loop_rewrite_costs_steps(corpus):
    seen = False
    for _, p in corpus:
        tests = generate_tests(p, 10, 42)
        for c in lower(p):
            sc = score_candidate(c, p, TransformWeights(), tests)
            assert 0 <= sc.s_d <= 1 and sc.p_d >= 0
            if c.label == "for-to-while":
                assert sc.p_d > 0
                seen = True
    assert seen
