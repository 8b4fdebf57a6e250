'''
Finite relational structures over the universe {0, ..., n-1}, together with
their first-order assignment.

Structure files look like::

    (structure (size 2)
               (sig (P 1) (E 2))
               (assign (x 0))
               (rel P (1))
               (rel E (0 1) (1 1)))

A declared symbol without a ``rel`` entry is empty; ``(rel Z ())`` makes the
nullary ``Z`` true.
'''
import functools
import itertools
import logging
from typing import Dict, FrozenSet, Iterable, Iterator, NamedTuple, Tuple

from . import utils
from .parser import (FormulaSyntaxError, SList, expect_int, expect_list,
                     expect_predicate, expect_token, expect_variable,
                     print_vocabulary, read_sexpr, vocabulary_from_sexpr)
from .syntax import ArityError, PredicateSymbol, Vocabulary

logger = logging.getLogger(__name__)

Relation = FrozenSet[Tuple[int, ...]]


@functools.lru_cache(maxsize=None)
def full_relation(size: int, arity: int) -> Relation:
    'All ``size ** arity`` tuples over the universe'
    return frozenset(itertools.product(range(size), repeat=arity))


@functools.total_ordering
class Structure:
    '''
    A finite structure: universe size, interpreted vocabulary, first-order
    assignment and one relation per predicate symbol

    Instances are immutable; updates return new structures.

    Parameters
    ----------
    size : int
        Universe size n (at least 1)
    vocab : Vocabulary
        The interpreted symbols
    assignment : dict, optional
        First-order variable name to element
    relations : dict, optional
        Predicate name to an iterable of tuples; missing names are empty
    '''
    __slots__ = ('size', 'vocab', 'assignment', 'relations', '_hash')

    def __init__(self, size: int, vocab: Vocabulary, assignment=None,
                 relations=None):
        if size < 1:
            raise ValueError(f'Universe size must be positive, got {size}')
        assignment = dict(assignment or {})
        relations = dict(relations or {})
        for var, value in assignment.items():
            _check_element(value, size, f'variable {var}')

        unknown = set(relations) - set(vocab.names)
        if unknown:
            raise ValueError(f'Relations for undeclared predicates: '
                             f'{sorted(unknown)}')

        checked = {}
        for symbol in vocab:
            checked[symbol.name] = _check_relation(
                symbol.name, relations.get(symbol.name, ()), symbol.arity,
                size)

        self._init(size, vocab, assignment, checked)

    def _init(self, size, vocab, assignment, relations):
        self.size = size
        self.vocab = vocab
        self.assignment = assignment
        self.relations = relations
        self._hash = None

    @classmethod
    def _unchecked(cls, size, vocab, assignment, relations):
        instance = cls.__new__(cls)
        instance._init(size, vocab, assignment, relations)
        return instance

    @classmethod
    def empty(cls, size: int, vocab: Vocabulary, assignment=None):
        return cls(size, vocab, assignment)

    @property
    def universe(self) -> range:
        return range(self.size)

    def relation(self, name) -> Relation:
        try:
            return self.relations[name]
        except KeyError:
            raise KeyError(f'Uninterpreted predicate: {name}') from None

    def value(self, var) -> int:
        try:
            return self.assignment[var]
        except KeyError:
            raise KeyError(f'Unassigned variable: {var}') from None

    def update_var(self, var: str, value: int) -> 'Structure':
        'A copy with ``var`` mapped to ``value``'
        _check_element(value, self.size, f'variable {var}')
        return self.with_var(var, value)

    def update_pred(self, name: str, relation) -> 'Structure':
        'A copy with the declared ``name`` interpreted as ``relation``'
        arity = self.vocab.arity(name)
        relation = _check_relation(name, relation, arity, self.size)
        return self.with_relation(name, relation)

    def declare(self, name: str, arity: int, relation=()) -> 'Structure':
        '''
        A copy interpreting ``name``, adding it to the vocabulary if needed

        Used for predicates bound by quantifiers and fixpoints; a bound name
        may shadow a symbol of another arity.
        '''
        relation = _check_relation(name, relation, arity, self.size)
        if name in self.vocab and self.vocab.arity(name) != arity:
            vocab = Vocabulary(tuple(
                PredicateSymbol(name, arity) if sym.name == name else sym
                for sym in self.vocab))
        else:
            vocab = self.vocab.extended(name, arity)
        relations = dict(self.relations)
        relations[name] = relation
        return Structure._unchecked(self.size, vocab, self.assignment,
                                    relations)

    def with_var(self, var, value) -> 'Structure':
        'Unvalidated variant of `update_var`'
        assignment = dict(self.assignment)
        assignment[var] = value
        return Structure._unchecked(self.size, self.vocab, assignment,
                                    self.relations)

    def with_relation(self, name, relation) -> 'Structure':
        'Unvalidated variant of `update_pred`; ``relation`` is a frozenset'
        relations = dict(self.relations)
        relations[name] = relation
        return Structure._unchecked(self.size, self.vocab, self.assignment,
                                    relations)

    def with_relations(self, relations: Dict[str, Relation]) -> 'Structure':
        merged = dict(self.relations)
        merged.update(relations)
        return Structure._unchecked(self.size, self.vocab, self.assignment,
                                    merged)

    def restricted(self, vocab: Vocabulary) -> 'Structure':
        'A copy interpreting only the symbols of ``vocab``'
        return Structure._unchecked(
            self.size, vocab, self.assignment,
            {name: self.relations[name] for name in vocab.names})

    def _key(self):
        return (self.size, self.vocab.names,
                tuple(sorted(self.assignment.items())),
                tuple(tuple(sorted(self.relations[name]))
                      for name in self.vocab.names))

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return self._key() == other._key()

    def __lt__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return self._key() < other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        relations = {name: sorted(rel) for name, rel in self.relations.items()}
        return (f'<Structure size={self.size} assignment={self.assignment} '
                f'relations={relations}>')


def _check_element(value, size, what):
    if not isinstance(value, int) or not 0 <= value < size:
        raise ValueError(f'Element {value!r} of {what} is outside the '
                         f'universe 0..{size - 1}')


def _check_relation(name, relation, arity, size) -> Relation:
    result = set()
    for tup in relation:
        tup = tuple(tup)
        if len(tup) != arity:
            raise ArityError(f'Tuple {tup} for {name} does not have arity '
                             f'{arity}')
        for value in tup:
            _check_element(value, size, f'predicate {name}')
        result.add(tup)
    return frozenset(result)


def update_var(e: Structure, var: str, value: int) -> Structure:
    return e.update_var(var, value)


def update_pred(e: Structure, name: str, relation) -> Structure:
    return e.update_pred(name, relation)


# Splits
# -----------------------------------------------------------------------------

class SplitPair(NamedTuple):
    left: Structure
    right: Structure


def split_relation(relation: Relation) -> Iterator[Tuple[Relation, Relation]]:
    '''
    Every disjoint ``(left, right)`` with ``left | right == relation``

    Tuples are sorted; the i-th tuple goes left when bit i of a binary counter
    is set.
    '''
    tuples = sorted(relation)
    for mask in range(1 << len(tuples)):
        left = frozenset(tup for idx, tup in enumerate(tuples)
                         if mask >> idx & 1)
        yield left, relation - left


def split_count(e: Structure, sigma: Iterable[str]) -> int:
    return 1 << sum(len(e.relation(name)) for name in set(sigma))


def enumerate_splits(e: Structure,
                     sigma: Iterable[str]) -> Iterator[SplitPair]:
    '''
    Enumerate the ways of splitting the predicates in ``sigma``

    Parameters
    ----------
    e : Structure
    sigma : iterable of str
        Names to split; every other predicate is shared by both halves

    Yields
    ------
    SplitPair
        ``prod(2 ** len(e(P)) for P in sigma)`` pairs in a fixed order.
        Predicates vary in vocabulary order, the last one fastest.  Both
        halves keep the first-order assignment of ``e``.
    '''
    sigma = set(sigma)
    undeclared = sigma - set(e.vocab.names)
    if undeclared:
        raise KeyError(f'Cannot split uninterpreted predicates: '
                       f'{sorted(undeclared)}')

    names = [name for name in e.vocab.names if name in sigma]
    choices = [list(split_relation(e.relations[name])) for name in names]
    for combination in itertools.product(*choices):
        left = {name: part[0] for name, part in zip(names, combination)}
        right = {name: part[1] for name, part in zip(names, combination)}
        yield SplitPair(e.with_relations(left), e.with_relations(right))


def erased_graph(e: Structure):
    '''
    The unlabeled digraph whose edges are the union of all binary relations

    Raises
    ------
    ValueError
        If the structure interprets a predicate of arity above 2
    '''
    if e.vocab.max_arity > 2:
        raise ValueError(f'Forest check needs arities of at most 2, got '
                         f'{e.vocab.max_arity}')
    edges = set()
    for name in e.vocab.of_arity(2):
        edges |= e.relations[name]
    return utils.edge_graph(e.universe, edges)


def is_forest(e: Structure) -> bool:
    'No directed cycle and in-degree at most one, after erasing labels'
    return utils.is_forest_graph(erased_graph(e))


# Structure files
# -----------------------------------------------------------------------------

def _expect_section(expr, text, name) -> SList:
    section = expect_list(expr, text, f'({name} ...)')
    if not section.items or \
            expect_token(section.items[0], text, name).text != name:
        raise FormulaSyntaxError(f'Expected ({name} ...)', text, section.loc)
    return section


def parse_structure(text: str) -> Tuple[Vocabulary, Structure]:
    '''
    Read a structure file

    Returns
    -------
    vocab : Vocabulary
    structure : Structure

    Raises
    ------
    FormulaSyntaxError
        On malformed input, duplicate tuples or elements outside the universe
    '''
    expr = read_sexpr(text)
    top = _expect_section(expr, text, 'structure')
    sections = list(top.items[1:])
    if len(sections) < 2:
        raise FormulaSyntaxError('A structure needs (size ...) and (sig ...)',
                                 text, top.loc)

    size_section = _expect_section(sections.pop(0), text, 'size')
    if len(size_section.items) != 2:
        raise FormulaSyntaxError('(size N) takes one argument', text,
                                 size_section.loc)
    size = expect_int(size_section.items[1], text, 'a universe size',
                      minimum=1)
    vocab = vocabulary_from_sexpr(sections.pop(0), text)

    assignment = {}
    relations = {}
    seen_assign = False
    for item in sections:
        section = expect_list(item, text, '(assign ...) or (rel ...)')
        head = expect_token(section.items[0], text, 'a section name') \
            if section.items else None
        if head is not None and head.text == 'assign' and not seen_assign \
                and not relations:
            seen_assign = True
            for pair in section.items[1:]:
                pair = expect_list(pair, text, '(var element)', 2)
                var = expect_variable(pair.items[0], text)
                if var in assignment:
                    raise FormulaSyntaxError(f'Variable {var} assigned twice',
                                             text, pair.loc)
                assignment[var] = _read_element(pair.items[1], text, size)
        elif head is not None and head.text == 'rel':
            if len(section.items) < 2:
                raise FormulaSyntaxError('(rel Name ...) needs a name', text,
                                         section.loc)
            name = expect_predicate(section.items[1], text)
            if name not in vocab:
                raise FormulaSyntaxError(f'Undeclared predicate: {name}',
                                         text, section.items[1].loc)
            if name in relations:
                raise FormulaSyntaxError(f'Second (rel {name} ...) entry',
                                         text, section.loc)
            relations[name] = _read_tuples(section, name, vocab.arity(name),
                                           text, size)
        else:
            raise FormulaSyntaxError('Expected (assign ...) or (rel ...)',
                                     text, section.loc)

    return vocab, Structure(size, vocab, assignment, relations)


def _read_element(expr, text, size) -> int:
    value = expect_int(expr, text, 'an element')
    if value >= size:
        raise FormulaSyntaxError(
            f'Element {value} is outside the universe 0..{size - 1}', text,
            expr.loc)
    return value


def _read_tuples(section, name, arity, text, size):
    tuples = set()
    for item in section.items[2:]:
        tup = expect_list(item, text, 'a tuple')
        if len(tup.items) != arity:
            raise FormulaSyntaxError(
                f'Tuple for {name} has {len(tup.items)} elements, expected '
                f'{arity}', text, tup.loc)
        values = tuple(_read_element(value, text, size)
                       for value in tup.items)
        if values in tuples:
            raise FormulaSyntaxError(f'Duplicate tuple {values} for {name}',
                                     text, tup.loc)
        tuples.add(values)
    return tuples


def print_structure(e: Structure) -> str:
    'Canonical text of ``e``; `parse_structure` reads it back unchanged'
    parts = [f'(structure (size {e.size}) {print_vocabulary(e.vocab)}']
    if e.assignment:
        parts.append(' (assign' + ''.join(
            f' ({var} {value})' for var, value in sorted(e.assignment.items()))
            + ')')
    for name in e.vocab.names:
        tuples = ''.join(' (' + ' '.join(map(str, tup)) + ')'
                         for tup in sorted(e.relations[name]))
        parts.append(f' (rel {name}{tuples})')
    parts.append(')')
    return ''.join(parts)
