import pytest
from hypothesis import assume, given, settings

from .. import corpus
from ..evaluator import (BudgetExceeded, EvalBudget, Evaluator,
                         UnboundNameError, all_relations, eval_lfp, evaluate,
                         iterate_lfp, split_shape)
from ..modelfinder import enumerate_structures
from ..parser import parse_formula
from ..structures import full_relation
from ..syntax import (Atom, CountExists, ExistsFO, Not, PositivityError,
                      SpatialAnd, Verum, desugar, rename_bound_so)
from ..translate import split_constraint
from .strategies import formulas, structures, variables


@pytest.mark.parametrize('text, expected', [
    ('(P x)', True),
    ('(Q x)', False),
    ('(= x x)', True),
    ('(exists-ge 2 y (P y))', True),
    ('(exists-ge 3 y (P y))', False),
    ('(exists-ge 4 y true)', False),
    ('(exists-exactly 1 y (Q y))', True),
    ('(exists-exactly 2 y true)', False),
    ('(forall y (or (P y) (Q y)))', True),
    ('(iff (P x) (not (Q x)))', True),
    ('(implies (Q x) false)', True),
])
def test_first_order(unary_structure, text, expected):
    formula = parse_formula(text, unary_structure.vocab)
    assert evaluate(formula, unary_structure) is expected


@pytest.mark.parametrize('text, expected', [
    ('(sep (P x) (P x))', False),
    ('(sep (P x) (not (P x)))', True),
    ('(sep (exists y (Q y)) (exists y (Q y)))', False),
    ('(sep-on (P) (exists y (Q y)) (exists y (Q y)))', True),
    ('(sep-on (P) (exists-ge 2 y (P y)) (forall y (not (P y))))', True),
    ('(sep (exists-exactly 1 y (P y)) (exists-exactly 1 y (P y)))', True),
    ('(wand (P x) false)', True),
    ('(wand true (exists y (Q y)))', True),
    ('(wand (exists y (Q y)) (exists-ge 2 y (Q y)))', True),
    ('(exists2 R (and (R x) (not (P x))))', False),
    ('(exists2 R (exists-exactly 2 y (R y)))', True),
    ('(forall2 R (or (R x) (not (R x))))', True),
    ('(forall2 R (implies (R x) (Q x)))', False),
])
def test_second_order_and_spatial(unary_structure, text, expected):
    formula = parse_formula(text, unary_structure.vocab)
    assert evaluate(formula, unary_structure) is expected


def test_wand_sees_free_room(unary_structure):
    # element 2 is not in P, so an extension can add it
    formula = parse_formula('(wand (P x) false)', unary_structure.vocab)
    assert not evaluate(formula, unary_structure.update_var('x', 2))


def test_exactly_one_edge_each_side(two_cycle, edge_vocab):
    one = corpus.EXACTLY_ONE_EDGE
    formula = parse_formula(f'(sep {one} {one})', edge_vocab)
    assert evaluate(formula, two_cycle)
    single = two_cycle.update_pred('E', [(0, 1)])
    assert not evaluate(formula, single)


def test_transitive_closure(path3):
    closure = parse_formula(corpus.TRANSITIVE_CLOSURE, path3.vocab)
    relation = eval_lfp(closure.pred, closure.params, closure.body, path3)
    assert relation == {(0, 1), (1, 2), (0, 2)}

    stages = list(iterate_lfp(closure.pred, closure.params, closure.body,
                              path3))
    assert stages == [frozenset(), {(0, 1), (1, 2)},
                      {(0, 1), (1, 2), (0, 2)}]

    assert evaluate(closure, path3.update_var('u', 0).update_var('v', 2))
    assert not evaluate(closure, path3.update_var('u', 2).update_var('v', 0))


def test_lfp_needs_positive_body(path3):
    with pytest.raises(PositivityError):
        eval_lfp('S', ('x', ), Not(Atom('S', ('x', ))), path3)


def test_letrec(unary_structure):
    formula = parse_formula(
        '(letrec S (x) (or (Q x) (S x)) (forall y (iff (S y) (Q y))))',
        unary_structure.vocab)
    assert evaluate(formula, unary_structure)


def test_unbound_names(unary_structure):
    with pytest.raises(UnboundNameError):
        evaluate(parse_formula('(P y)'), unary_structure)
    with pytest.raises(UnboundNameError):
        evaluate(parse_formula('(R x)'), unary_structure)
    with pytest.raises(UnboundNameError):
        evaluate(parse_formula('(sep-on (R) true true)'), unary_structure)


def test_budget(unary_structure):
    formula = parse_formula('(sep false true)')
    with pytest.raises(BudgetExceeded):
        Evaluator(EvalBudget.uniform(2)).evaluate(formula, unary_structure)
    # 3 tuples give 8 splits
    assert not Evaluator(EvalBudget.uniform(8)).evaluate(formula,
                                                         unary_structure)


def test_budget_validation():
    with pytest.raises(ValueError):
        EvalBudget(max_split_pairs=0)


def test_all_relations():
    assert len(all_relations(2, 1)) == 4
    assert len(all_relations(2, 2)) == 16
    assert all_relations(2, 1)[1] == {(0, )}
    assert all_relations(2, 1)[2] == {(1, )}
    assert all_relations(1, 0) == (frozenset(), frozenset({()}))


def test_split_shape():
    constraint = split_constraint('P', 'P_1', 'P_2', 1)
    assert split_shape(constraint) == ('P', 'P_1', 'P_2')
    assert split_shape(parse_formula('(forall x (P x))')) is None


@settings(max_examples=100, deadline=None)
@given(formulas(max_leaves=8), structures())
def test_desugar_preserves_truth(formula, e):
    budget = EvalBudget.uniform(10 ** 4)
    try:
        expected = Evaluator(budget).evaluate(formula, e)
        desugared = Evaluator(budget).evaluate(desugar(formula), e)
    except BudgetExceeded:
        assume(False)
    assert desugared == expected


def test_rename_bound_so_preserves_truth(unary_structure):
    formula = parse_formula(
        '(and (exists2 R (R x)) (and (P x) (forall2 P (or (P x) true))))',
        unary_structure.vocab)
    renamed = rename_bound_so(formula)
    assert renamed != formula
    assert evaluate(renamed, unary_structure) == evaluate(formula,
                                                          unary_structure)


@settings(max_examples=100, deadline=None)
@given(formulas(max_leaves=6), structures(), variables)
def test_count_one_is_exists(formula, e, var):
    budget = EvalBudget.uniform(10 ** 4)
    try:
        counted = Evaluator(budget).evaluate(CountExists(1, var, formula), e)
        exists = Evaluator(budget).evaluate(ExistsFO(var, formula), e)
    except BudgetExceeded:
        assume(False)
    assert counted == exists


def larger_structures(e):
    'Every structure with one more tuple in one relation than ``e``'
    for symbol in e.vocab:
        relation = e.relation(symbol.name)
        for row in full_relation(e.size, symbol.arity) - relation:
            yield e.update_pred(symbol.name, relation | {row})


@pytest.mark.parametrize('text', [
    '(P x)',
    '(E x x)',
    '(exists y (E x y))',
    '(and (P x) (exists y (E y x)))',
    '(or (P x) (E x x))',
    '(forall y (P y))',
    '(exists-ge 2 y (P y))',
])
def test_spatial_true_is_monotone(text):
    vocab = corpus.vocabulary(corpus.FOREST_SIG)
    formula = SpatialAnd(parse_formula(text, vocab), Verum())
    for size in (1, 2):
        for e in enumerate_structures(vocab, size, ['x']):
            if not evaluate(formula, e):
                continue
            for larger in larger_structures(e):
                assert evaluate(formula, larger), (e, larger)
