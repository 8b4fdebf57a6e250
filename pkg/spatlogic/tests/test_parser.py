import pytest
from hypothesis import given, settings

from .. import corpus
from ..parser import (FormulaSyntaxError, infer_vocabulary, parse_formula,
                      parse_vocabulary, print_formula, print_vocabulary,
                      read_sexpr)
from ..syntax import (And, Atom, CountExists, Eq, ExistsSO, Falsum, ForallSO,
                      LetRec, LfpAtom, Not, PredicateSet, SpatialAnd,
                      SpatialImpl, Verum)
from .strategies import VOCAB, formulas


@pytest.mark.parametrize('text, expected', [
    ('true', Verum()),
    ('false', Falsum()),
    ('(= x y)', Eq('x', 'y')),
    ('(P x)', Atom('P', ('x', ))),
    ('(Z)', Atom('Z', ())),
    ('(and (P x) (not (Q x)))',
     And(Atom('P', ('x', )), Not(Atom('Q', ('x', ))))),
    ('(exists-ge 2 x (P x))', CountExists(2, 'x', Atom('P', ('x', )))),
    ('(sep (P x) (Q x))', SpatialAnd(Atom('P', ('x', )), Atom('Q', ('x', )))),
    ('(sep-on (Q P) true false)',
     SpatialAnd(Verum(), Falsum(), PredicateSet(frozenset({'P', 'Q'})))),
    ('(wand true (P x))', SpatialImpl(Verum(), Atom('P', ('x', )))),
    ('(exists2 R (R x y))', ExistsSO('R', 2, Atom('R', ('x', 'y')))),
    ('(forall2 R true)', ForallSO('R', 0, Verum())),
    ('(exists2 (R 1) true)', ExistsSO('R', 1, Verum())),
    ('(forall2 (R 2) (R x y))', ForallSO('R', 2, Atom('R', ('x', 'y')))),
    ('(lfp S (x) (S x) (y))',
     LfpAtom('S', ('x', ), Atom('S', ('x', )), ('y', ))),
    ('(letrec S () (S) (not (S)))',
     LetRec('S', (), Atom('S', ()), Not(Atom('S', ())))),
])
def test_parse(text, expected):
    assert parse_formula(text) == expected


def test_comments_and_whitespace():
    text = '''
    ; a comment
    (and (P x)   ; trailing
         (Q x))
    '''
    assert parse_formula(text) == And(Atom('P', ('x', )), Atom('Q', ('x', )))


def test_bound_arity_falls_back_to_vocabulary(spatial_vocab):
    assert parse_formula('(exists2 E true)', spatial_vocab).arity == 2


def test_print_states_binder_arity():
    formula = ExistsSO('R', 1, Verum())
    assert print_formula(formula) == '(exists2 (R 1) true)'
    assert parse_formula(print_formula(formula)) == formula
    assert parse_formula('(exists2 R true)') != formula


def test_print_sorts_predicate_set():
    formula = SpatialAnd(Verum(), Verum(), PredicateSet(frozenset('QP')))
    assert print_formula(formula) == '(sep-on (P Q) true true)'


@pytest.mark.parametrize('text, message, lineno, col', [
    ('(and (P x)', 'Syntax error', 1, None),
    ('(P x) (Q x)', 'Syntax error', 1, None),
    ('(frob (P x))', 'Unknown operator', 1, 2),
    ('(and (P x))', 'and takes 2 arguments', 1, 1),
    ('(exists X (P x))', 'Not a variable name', 1, 9),
    ('(exists-ge 0 x (P x))', 'Expected a positive count', 1, 12),
    ('(and (P x)\n     (P x y))', 'Arity mismatch', 2, 7),
    ('(lfp S (x) (S x) (y z))', 'Arity mismatch', 1, 18),
    ('(exists2 (R 1) (R x y))', 'Arity mismatch', 1, 17),
    ('(exists2 (R) true)', 'exists2 binder takes 1 arguments', 1, 10),
    ('(forall2 (R k) true)', 'Expected an arity', 1, 13),
])
def test_syntax_errors(text, message, lineno, col):
    with pytest.raises(FormulaSyntaxError) as excinfo:
        parse_formula(text)
    assert message in str(excinfo.value)
    assert excinfo.value.lineno == lineno
    if col is not None:
        assert excinfo.value.col == col


def test_undeclared_predicate(unary_vocab):
    with pytest.raises(FormulaSyntaxError, match='Undeclared predicate: E'):
        parse_formula('(exists y (E x y))', unary_vocab)
    with pytest.raises(FormulaSyntaxError, match='Undeclared predicate: E'):
        parse_formula('(sep-on (E) true true)', unary_vocab)


def test_declared_arity_is_enforced(unary_vocab):
    with pytest.raises(FormulaSyntaxError, match='Arity mismatch'):
        parse_formula('(P x y)', unary_vocab)


def test_read_sexpr_rejects_empty_input():
    with pytest.raises(FormulaSyntaxError):
        read_sexpr('   ')


def test_vocabulary_text():
    vocab = parse_vocabulary('(sig (P 1) (E 2))')
    assert vocab.names == ('P', 'E')
    assert print_vocabulary(vocab) == '(sig (P 1) (E 2))'
    with pytest.raises(FormulaSyntaxError, match='Duplicate'):
        parse_vocabulary('(sig (P 1) (P 2))')
    with pytest.raises(FormulaSyntaxError):
        parse_vocabulary('(signature (P 1))')


def test_infer_vocabulary(unary_vocab):
    formula = parse_formula('(and (E x y) (exists2 R (R x)))')
    assert infer_vocabulary(formula).names == ('E', )
    assert infer_vocabulary(formula, unary_vocab).names == ('P', 'Q', 'E')


@pytest.mark.parametrize('texts, sig', [
    (corpus.SPATIAL, corpus.SPATIAL_SIG),
    (corpus.SECOND_ORDER, corpus.UNARY_SIG),
    (corpus.MONADIC_UNNESTED, corpus.SPATIAL_SIG),
    (corpus.FOREST, corpus.FOREST_SIG),
])
def test_corpus_round_trip(texts, sig):
    vocab = corpus.vocabulary(sig)
    for formula in corpus.formulas(texts, sig):
        printed = print_formula(formula)
        assert parse_formula(printed, vocab) == formula
        assert print_formula(parse_formula(printed, vocab)) == printed


def test_fixpoint_corpus_round_trip():
    for formula, vocab in corpus.fixpoints():
        assert parse_formula(print_formula(formula), vocab) == formula


@settings(max_examples=200, deadline=None)
@given(formulas(second_order=True))
def test_print_parse_round_trip(formula):
    assert parse_formula(print_formula(formula), VOCAB) == formula
