import pytest

from ..parser import FormulaSyntaxError, parse_vocabulary
from ..structures import (Structure, enumerate_splits, erased_graph,
                          full_relation, is_forest, parse_structure,
                          print_structure, split_count, split_relation,
                          update_pred, update_var)
from ..syntax import ArityError


def test_construction_checks(unary_vocab, edge_vocab):
    with pytest.raises(ValueError):
        Structure(0, unary_vocab)
    with pytest.raises(ValueError):
        Structure(2, unary_vocab, relations={'P': [(2, )]})
    with pytest.raises(ArityError):
        Structure(2, edge_vocab, relations={'E': [(0, )]})
    with pytest.raises(ValueError):
        Structure(2, unary_vocab, relations={'E': [(0, 1)]})
    with pytest.raises(ValueError):
        Structure(2, unary_vocab, assignment={'x': 5})


def test_missing_relations_are_empty(spatial_vocab):
    e = Structure(2, spatial_vocab)
    assert e.relation('E') == frozenset()
    with pytest.raises(KeyError):
        e.relation('R')
    with pytest.raises(KeyError):
        e.value('x')


def test_updates(unary_structure):
    moved = update_var(unary_structure, 'x', 2)
    assert moved.value('x') == 2
    assert unary_structure.value('x') == 0
    with pytest.raises(ValueError):
        update_var(unary_structure, 'x', 3)

    emptied = update_pred(unary_structure, 'P', [])
    assert emptied.relation('P') == frozenset()
    with pytest.raises(KeyError):
        update_pred(unary_structure, 'R', [])


def test_declare_shadows_arity(unary_structure):
    declared = unary_structure.declare('P', 2, [(0, 1)])
    assert declared.vocab.arity('P') == 2
    assert declared.vocab.names == ('P', 'Q')
    added = unary_structure.declare('R', 0, [()])
    assert added.vocab.names == ('P', 'Q', 'R')
    assert added.relation('R') == frozenset({()})


def test_equality_and_hash(unary_vocab):
    first = Structure(1, unary_vocab, relations={'P': [(0, )]})
    second = Structure(1, unary_vocab, relations={'P': {(0, )}, 'Q': ()})
    assert first == second
    assert hash(first) == hash(second)
    assert len({first, second}) == 1
    assert Structure(1, unary_vocab) < first


def test_split_relation():
    pairs = list(split_relation(frozenset({(0, ), (1, )})))
    assert len(pairs) == 4
    for left, right in pairs:
        assert left | right == {(0, ), (1, )}
        assert not left & right
    assert pairs[0] == (frozenset(), frozenset({(0, ), (1, )}))


def test_enumerate_splits(unary_structure):
    pairs = list(enumerate_splits(unary_structure, ['P']))
    assert len(pairs) == split_count(unary_structure, ['P']) == 4
    for pair in pairs:
        assert pair.left.relation('Q') == unary_structure.relation('Q')
        assert pair.right.relation('Q') == unary_structure.relation('Q')
        assert pair.left.assignment == {'x': 0}
        assert (pair.left.relation('P') | pair.right.relation('P') ==
                unary_structure.relation('P'))

    assert len(list(enumerate_splits(unary_structure, ['P', 'Q']))) == 8
    assert len(list(enumerate_splits(unary_structure, []))) == 1


def test_enumerate_splits_unknown_name(unary_structure):
    with pytest.raises(KeyError):
        list(enumerate_splits(unary_structure, ['E']))


def test_erased_graph_needs_small_arity():
    vocab = parse_vocabulary('(sig (T 3))')
    with pytest.raises(ValueError):
        erased_graph(Structure(1, vocab))


@pytest.mark.parametrize('edges, forest', [
    ([], True),
    ([(0, 0)], False),
    ([(0, 1), (0, 2)], True),
    ([(0, 2), (1, 2)], False),
    ([(0, 1), (1, 2), (2, 0)], False),
])
def test_is_forest(edge_vocab, edges, forest):
    e = Structure(3, edge_vocab, relations={'E': edges})
    assert is_forest(e) is forest


def test_is_forest_unions_labels():
    vocab = parse_vocabulary('(sig (P 2) (Q 2) (U 1))')
    e = Structure(2, vocab, relations={'P': [(0, 1)], 'Q': [(1, 0)],
                                       'U': [(0, ), (1, )]})
    assert not is_forest(e)
    assert is_forest(update_pred(e, 'Q', []))


STRUCTURE_TEXT = '''
(structure
  (size 3)
  (sig (P 1) (E 2))
  (assign (x 0) (y 2))
  (rel P (1))
  (rel E (0 1) (1 2)))
'''


def test_parse_structure():
    vocab, e = parse_structure(STRUCTURE_TEXT)
    assert vocab.names == ('P', 'E')
    assert e.size == 3
    assert e.assignment == {'x': 0, 'y': 2}
    assert e.relation('E') == {(0, 1), (1, 2)}


def test_print_structure(path3):
    assert print_structure(path3) == \
        '(structure (size 3) (sig (E 2)) (rel E (0 1) (1 2)))'
    _, e = parse_structure(STRUCTURE_TEXT)
    assert parse_structure(print_structure(e))[1] == e


@pytest.mark.parametrize('text, message', [
    ('(structure (size 2) (sig (P 1)) (rel P (0) (0)))', 'Duplicate tuple'),
    ('(structure (size 2) (sig (P 1)) (rel P (2)))', 'outside the universe'),
    ('(structure (size 2) (sig (P 1)) (rel E (0 1)))', 'Undeclared'),
    ('(structure (size 2) (sig (P 1)) (rel P) (rel P))', 'Second'),
    ('(structure (size 2) (sig (P 1)) (rel P (0 1)))', 'expected 1'),
    ('(structure (size 2) (sig (P 1)) (rel P) (assign (x 0)))', 'Expected'),
    ('(structure (sig (P 1)) (size 2))', 'Expected'),
    ('(structure (size 0) (sig))', 'universe size'),
])
def test_structure_errors(text, message):
    with pytest.raises(FormulaSyntaxError, match=message):
        parse_structure(text)


def test_full_relation():
    assert full_relation(2, 2) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    assert full_relation(3, 0) == {()}
