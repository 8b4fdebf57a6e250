'''
Structures whose binary relations, with labels erased, form a forest: no
directed cycle (self-loops included) and in-degree at most one.
'''
import itertools
import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterator, Optional, Tuple

from . import utils
from .analysis import classify
from .evaluator import EvalBudget, Evaluator
from .modelfinder import enumerate_structures
from .structures import SplitPair, Structure, enumerate_splits, is_forest
from .syntax import Formula, Vocabulary, free_fo_vars
from .translate import spatial_to_sol

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ForestFilter:
    '''
    Selects the forests among the structures over ``vocab``

    Parameters
    ----------
    vocab : Vocabulary
        Predicates of arity at most 2; every binary one contributes edges
    max_size : int
        Largest universe size enumerated by `forests`
    '''
    vocab: Vocabulary
    max_size: int

    def __post_init__(self):
        if self.vocab.max_arity > 2:
            raise ValueError(f'Forests need arities of at most 2, got '
                             f'{self.vocab.max_arity}')
        if self.max_size < 1:
            raise ValueError(f'max_size must be positive, got '
                             f'{self.max_size}')

    def __call__(self, e: Structure) -> bool:
        return is_forest(e)

    def _check_size(self, size):
        if size > self.max_size:
            raise ValueError(f'Size {size} is above the bound '
                             f'{self.max_size}')

    def forests(self, size: int, free_vars=()) -> Iterator[Structure]:
        self._check_size(size)
        return filter(self, enumerate_structures(self.vocab, size,
                                                 free_vars))

    def generate(self, size: int, free_vars=()) -> Iterator[Structure]:
        '''
        The forests of `forests`, built from parent maps instead of filtered
        out of every structure

        Each edge carries a nonempty set of binary labels.  The remaining
        predicates and the free variables range over all their values.
        '''
        self._check_size(size)
        binary = self.vocab.of_arity(2)
        labelings = [labels for count in range(1, len(binary) + 1)
                     for labels in itertools.combinations(binary, count)]
        rest = Vocabulary.from_arities(
            [(symbol.name, symbol.arity) for symbol in self.vocab
             if symbol.arity != 2])
        bases = list(enumerate_structures(rest, size, free_vars))
        for edges in parent_maps(size):
            for labels in itertools.product(labelings, repeat=len(edges)):
                relations = {name: set() for name in binary}
                for edge, names in zip(edges, labels):
                    for name in names:
                        relations[name].add(edge)
                for base in bases:
                    yield Structure(size, self.vocab, base.assignment,
                                    dict(base.relations, **relations))

    def all_forests(self) -> Iterator[Structure]:
        'Forests of every size up to ``max_size``'
        for size in range(1, self.max_size + 1):
            yield from self.forests(size)


def enumerate_forests(vocab: Vocabulary, size: int,
                      free_vars=()) -> Iterator[Structure]:
    'The forests of ``size`` elements, in structure enumeration order'
    return ForestFilter(vocab, size).forests(size, free_vars)


@dataclass(frozen=True)
class SplitClosureResult:
    ok: bool
    counterexample: Optional[Tuple[Structure, SplitPair]] = None
    forests_checked: int = 0
    splits_checked: int = 0

    def __bool__(self):
        return self.ok


def check_split_closure(vocab: Vocabulary,
                        max_size: int) -> SplitClosureResult:
    '''
    Check that splitting a forest over all predicates gives two forests

    Returns
    -------
    SplitClosureResult
        With the first failing forest and split, if any
    '''
    forest_filter = ForestFilter(vocab, max_size)
    forests_checked = 0
    splits_checked = 0
    for size in range(1, max_size + 1):
        for forest in forest_filter.generate(size):
            forests_checked += 1
            for pair in enumerate_splits(forest, vocab.names):
                splits_checked += 1
                if not (is_forest(pair.left) and is_forest(pair.right)):
                    logger.warning('Split of a forest is not a forest: %s',
                                   pair)
                    return SplitClosureResult(False, (forest, pair),
                                              forests_checked,
                                              splits_checked)
        logger.debug('Split closure holds up to size %d (%d forests)', size,
                     forests_checked)
    return SplitClosureResult(True, None, forests_checked, splits_checked)


@dataclass(frozen=True)
class ForestEvaluation:
    '''
    The forests satisfying a formula, computed directly and through its
    second-order translation
    '''
    direct: FrozenSet[Structure]
    translated: FrozenSet[Structure]
    forests: int

    @property
    def agree(self) -> bool:
        return self.direct == self.translated


def eval_over_forests(formula: Formula, vocab: Vocabulary, size: int,
                      budget: Optional[EvalBudget] = None
                      ) -> ForestEvaluation:
    '''
    Evaluate ``formula`` and ``spatial_to_sol(formula)`` on every forest

    Raises
    ------
    ValueError
        If ``formula`` splits a predicate of arity above 1
    '''
    if not classify(formula, vocab).uses_only_unary_split:
        raise ValueError('Forest evaluation needs spatial conjunctions that '
                         'split unary predicates only')
    translated = spatial_to_sol(formula, vocab)
    evaluator = Evaluator(budget)
    direct, via_translation = set(), set()
    count = 0
    for forest in enumerate_forests(vocab, size, free_fo_vars(formula)):
        count += 1
        if evaluator.evaluate(formula, forest):
            direct.add(forest)
        if evaluator.evaluate(translated, forest):
            via_translation.add(forest)
    logger.debug('%d of %d forests of size %d satisfy the formula',
                 len(direct), count, size)
    return ForestEvaluation(frozenset(direct), frozenset(via_translation),
                            count)


def parent_maps(size: int) -> Iterator[Tuple[Tuple[int, int], ...]]:
    'Edge sets giving each of ``size`` nodes at most one parent, acyclic'
    choices = [None] + list(range(size))
    for parents in itertools.product(choices, repeat=size):
        edges = tuple((parent, child) for child, parent in enumerate(parents)
                      if parent is not None)
        if utils.find_cycle(utils.edge_graph(range(size), edges)) is None:
            yield edges


def count_forests_by_parent_map(size: int) -> int:
    '''
    Count forests on ``size`` labeled nodes with a single edge label, built
    from parent maps rather than by filtering relations
    '''
    return sum(1 for _ in parent_maps(size))
