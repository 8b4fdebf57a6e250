import pytest

from .. import acceptance, corpus
from ..acceptance import MAX_REPORTED, SuiteResult


def test_suite_result_records():
    result = SuiteResult('demo')
    assert result
    for idx in range(MAX_REPORTED + 5):
        result.record(idx == 0, lambda: f'check {idx}')
    assert not result
    assert result.checked == MAX_REPORTED + 5
    assert result.failures == MAX_REPORTED + 4
    assert len(result.mismatches) == MAX_REPORTED
    assert result.mismatches[0] == 'check 1'
    assert result.summary().startswith(f'demo: FAILED ({result.failures})')


@pytest.mark.parametrize('suite, kwargs', [
    (acceptance.spatial_elimination, dict(unary_size=2, edge_size=1)),
    (acceptance.second_order_elimination, dict(max_size=1)),
    (acceptance.fixpoint_elimination, dict(unary_size=2, binary_size=2)),
    (acceptance.forest_split_closure, dict(edge_size=3, pair_size=2)),
    (acceptance.forest_evaluation, dict(max_size=2)),
    (acceptance.adjunction, dict(max_size=1)),
    (acceptance.two_variable_reduction, dict(max_size=2)),
    (acceptance.monadic_pipeline, dict()),
    (acceptance.spatial_algebra, dict(max_size=1)),
    (acceptance.determinism, dict(command_runs=False)),
])
def test_quick_suites(suite, kwargs):
    result = suite(**kwargs)
    assert result.ok, result.mismatches
    assert result.checked > 0
    assert result.name == suite.__name__.replace('_', '-')


def test_spatial_algebra_covers_all_pairs():
    count = sum(corpus.spatial_signature(text) == corpus.UNARY_SIG
                for text in corpus.SPATIAL)
    result = acceptance.spatial_algebra(max_size=1, sample=2)
    assert result.ok, result.mismatches
    assert result.checked == count * (count - 1) // 2 + 2 ** 3 + 2 * count


@pytest.mark.slow
def test_determinism_of_commands():
    result = acceptance.determinism()
    assert result.ok, result.mismatches


@pytest.mark.slow
def test_run_all():
    results = acceptance.run_all()
    assert all(results), [result.summary() for result in results
                          if not result]
