import pytest

from ..parser import parse_formula
from ..syntax import (And, ArityError, Atom, CountExists, ExistsFO, ExistsSO,
                      LfpAtom, Not, Or, PredicateSet, Verum, Vocabulary,
                      check_arities, check_positivity, conjunction, conjuncts,
                      desugar, expand_letrec, fo_var_names, free_fo_vars,
                      free_so_vars, fresh_name, is_core, node_count,
                      predicate_arities, rename_bound_so, so_var_names,
                      substitute_predicate, substitute_var)


def test_vocabulary_order_and_lookup():
    vocab = Vocabulary.from_arities([('E', 2), ('P', 1)])
    assert vocab.names == ('E', 'P')
    assert vocab.max_arity == 2
    assert vocab.arity('P') == 1
    assert vocab.of_arity(2) == ('E', )
    assert 'E' in vocab
    assert 'Q' not in vocab
    with pytest.raises(KeyError):
        vocab.arity('Q')


def test_vocabulary_rejects_duplicates():
    with pytest.raises(ValueError):
        Vocabulary.from_arities([('P', 1), ('P', 2)])


def test_vocabulary_extended():
    vocab = Vocabulary.from_arities({'P': 1})
    assert vocab.extended('P', 1) is vocab
    assert vocab.extended('E', 2).names == ('P', 'E')
    with pytest.raises(ArityError):
        vocab.extended('P', 2)


def test_predicate_set_iterates_sorted():
    assert list(PredicateSet(frozenset({'Q', 'E', 'P'}))) == ['E', 'P', 'Q']


def test_counting_needs_positive_count():
    with pytest.raises(ValueError):
        CountExists(0, 'x', Verum())


def test_lfp_argument_count():
    with pytest.raises(ArityError):
        LfpAtom('S', ('x', ), Verum(), ('x', 'y'))


def test_conjunction_helpers():
    parts = [Atom('P', ('x', )), Atom('Q', ('x', )), Verum()]
    assert conjunction([]) == Verum()
    assert conjunction(parts[:1]) == parts[0]
    assert conjuncts(conjunction(parts)) == tuple(parts)


@pytest.mark.parametrize('text, free', [
    ('(exists x (E x y))', {'y'}),
    ('(and (P x) (forall x (P x)))', {'x'}),
    ('(lfp S (x) (or (Q x) (S z)) (y))', {'y', 'z'}),
    ('(exists-ge 2 x (= x y))', {'y'}),
])
def test_free_fo_vars(text, free):
    assert free_fo_vars(parse_formula(text)) == free


def test_free_and_bound_predicates():
    formula = parse_formula('(exists2 R (and (R x) (sep-on (Q) (P x) true)))')
    assert free_so_vars(formula) == {'P', 'Q'}
    assert so_var_names(formula) == {'P', 'Q', 'R'}
    assert fo_var_names(formula) == {'x'}


def test_predicate_arities():
    formula = parse_formula('(and (E x y) (exists2 R (R x)))')
    assert predicate_arities(formula) == {'E': 2, 'R': 1}
    with pytest.raises(ArityError):
        predicate_arities(And(Atom('P', ('x', )), Atom('P', ('x', 'y'))))


def test_node_count():
    assert node_count(parse_formula('(and (P x) (not (Q x)))')) == 4


@pytest.mark.parametrize('base, taken, expected', [
    ('P', {'P'}, 'P_1'),
    ('P', {'P', 'P_1'}, 'P_2'),
    ('P_1', {'P_1'}, 'P_2'),
    ('x', set(), 'x_1'),
])
def test_fresh_name(base, taken, expected):
    assert fresh_name(base, taken) == expected


def test_substitute_predicate():
    formula = parse_formula('(and (P x) (exists2 P (P y)))')
    renamed = substitute_predicate(formula, 'P', 'Q')
    assert renamed == And(Atom('Q', ('x', )),
                          ExistsSO('P', 1, Atom('P', ('y', ))))


def test_substitute_predicate_renames_sigma():
    formula = parse_formula('(sep-on (P) (P x) true)')
    renamed = substitute_predicate(formula, 'P', 'R')
    assert renamed.sigma == PredicateSet(frozenset({'R'}))


def test_substitute_predicate_errors():
    formula = parse_formula('(and (P x) (Q x))')
    with pytest.raises(ValueError):
        substitute_predicate(formula, 'P', 'Q')
    vocab = Vocabulary.from_arities({'P': 1, 'E': 2})
    with pytest.raises(ArityError):
        substitute_predicate(parse_formula('(P x)'), 'P', 'E', vocab=vocab)


def test_rename_bound_so():
    formula = parse_formula('(and (exists2 R (R x)) (exists2 R (not (R x))))')
    renamed = rename_bound_so(formula)
    assert renamed == And(
        ExistsSO('R_1', 1, Atom('R_1', ('x', ))),
        ExistsSO('R_2', 1, Not(Atom('R_2', ('x', )))))


def test_rename_bound_so_keeps_distinct_names():
    formula = parse_formula('(exists2 R (and (R x) (P x)))')
    assert rename_bound_so(formula) is formula


def test_rename_bound_so_separates_free_occurrence():
    formula = parse_formula('(and (R x) (exists2 R (R x)))')
    renamed = rename_bound_so(formula)
    assert free_so_vars(renamed) == {'R'}
    assert renamed.right.pred == 'R_1'


def test_substitute_var_avoids_capture():
    formula = parse_formula('(exists y (E x y))')
    result = substitute_var(formula, 'x', 'y')
    assert result == ExistsFO('y_1', Atom('E', ('y', 'y_1')))
    assert free_fo_vars(result) == {'y'}


def test_substitute_var_stops_at_binder():
    formula = parse_formula('(exists x (P x))')
    assert substitute_var(formula, 'x', 'y') == formula


def test_expand_letrec():
    formula = parse_formula(
        '(letrec S (x) (or (Q x) (S x)) (exists y (S y)))')
    body = Or(Atom('Q', ('x', )), Atom('S', ('x', )))
    assert expand_letrec(formula) == ExistsFO(
        'y', LfpAtom('S', ('x', ), body, ('y', )))


@pytest.mark.parametrize('text, positive', [
    ('(or (Q x) (S x))', True),
    ('(not (not (S x)))', True),
    ('(not (S x))', False),
    ('(implies (S x) (Q x))', False),
    ('(implies (Q x) (S x))', True),
    ('(iff (S x) (Q x))', False),
    ('(exists-exactly 1 y (S y))', False),
    ('(exists2 S (not (S x)))', True),
    ('(wand (S x) true)', False),
])
def test_check_positivity(text, positive):
    assert check_positivity(parse_formula(text), 'S') is positive


@pytest.mark.parametrize('text', [
    '(forall x (implies (P x) (Q x)))',
    '(iff (P x) (exists-exactly 2 y (E x y)))',
    '(forall2 R (or (R x) false))',
])
def test_desugar_gives_core(text):
    formula = parse_formula(text)
    assert not is_core(formula)
    assert is_core(desugar(formula))


def test_check_arities():
    vocab = Vocabulary.from_arities({'P': 1})
    check_arities(parse_formula('(exists2 P (P x y))'), vocab)
    with pytest.raises(ArityError):
        check_arities(Atom('P', ('x', 'y')), vocab)
