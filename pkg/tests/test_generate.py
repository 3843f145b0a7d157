import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subdivrules import RuleBounds, build_history, random_rule, validate_rule


def test_same_seed_same_rule():
    assert random_rule(7) == random_rule(7)


@pytest.mark.parametrize("seed", range(1, 26))
def test_generated_rules_are_valid(seed):
    assert validate_rule(random_rule(seed)).ok


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_any_seed_expands(seed):
    rule = random_rule(seed, RuleBounds(vertex_symbols=3, edge_symbols=2, max_children=2, max_edge_children=2))
    h = build_history(rule, 3)
    assert h.sizes()[1] == len(rule.seed.vertices)


def test_bad_bounds():
    with pytest.raises(ValueError):
        random_rule(1, RuleBounds(vertex_symbols=0))
