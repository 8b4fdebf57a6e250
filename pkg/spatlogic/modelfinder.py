'''
Bounded model search by exhaustive enumeration of finite structures.

Structures of one size are numbered in a fixed order: assignments of the
sorted free variables vary slowest, then one relation bitmap per predicate in
vocabulary order (bit i set when the i-th lexicographic tuple is present).
Searches scan sizes upwards and report the least index, so results are the
same whatever the number of worker processes.
'''
import concurrent.futures
import enum
import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Optional, Tuple

from .evaluator import BudgetExceeded, EvalBudget, Evaluator, all_relations
from .parser import infer_vocabulary
from .structures import Structure
from .syntax import Formula, Iff, Not, Vocabulary, free_fo_vars

logger = logging.getLogger(__name__)


class SearchStatus(str, enum.Enum):
    WITNESS = 'WITNESS'
    EXHAUSTED = 'EXHAUSTED'
    BUDGET = 'BUDGET'


@dataclass(frozen=True)
class SearchResult:
    '''
    Outcome of `sat_bounded`

    Attributes
    ----------
    status : SearchStatus
        ``EXHAUSTED`` only refutes models up to the largest size tried
    witness : Structure or None
        The first satisfying structure, for ``WITNESS``
    sizes_tried : tuple of int
    structures_checked : int
        Structures evaluated, counted as a sequential scan would
    '''
    status: SearchStatus
    witness: Optional[Structure]
    sizes_tried: Tuple[int, ...]
    structures_checked: int


def structure_count(vocab: Vocabulary, size: int, free_vars=()) -> int:
    count = size ** len(tuple(free_vars))
    for symbol in vocab:
        count *= 2 ** (size ** symbol.arity)
    return count


def enumerate_structures(vocab: Vocabulary, size: int,
                         free_vars: Iterable[str] = ()) -> Iterator[Structure]:
    '''
    Every structure of ``size`` over ``vocab`` with an assignment of
    ``free_vars``, each exactly once, in enumeration order
    '''
    if size < 1:
        raise ValueError(f'Universe size must be positive, got {size}')
    free_vars = sorted(set(free_vars))
    names = vocab.names
    choices = [all_relations(size, symbol.arity) for symbol in vocab]
    for values in itertools.product(range(size), repeat=len(free_vars)):
        assignment = dict(zip(free_vars, values))
        for relations in itertools.product(*choices):
            yield Structure._unchecked(size, vocab, assignment,
                                       dict(zip(names, relations)))


class _ScanResult(NamedTuple):
    witness_index: Optional[int] = None
    witness: Optional[Structure] = None
    budget_index: Optional[int] = None
    count: int = 0


class _ScanTask(NamedTuple):
    formula: Formula
    vocab: Vocabulary
    size: int
    free_vars: Tuple[str, ...]
    budget: EvalBudget
    offset: int
    stride: int
    limit: int
    first_only: bool


def _scan(task: _ScanTask) -> _ScanResult:
    'Evaluate the structures with index = offset (mod stride) below limit'
    evaluator = Evaluator(task.budget)
    count = 0
    structures = itertools.islice(
        enumerate(enumerate_structures(task.vocab, task.size,
                                       task.free_vars)),
        task.offset, task.limit, task.stride)
    for index, e in structures:
        try:
            value = evaluator.evaluate(task.formula, e)
        except BudgetExceeded:
            return _ScanResult(budget_index=index, count=count)
        if value:
            if task.first_only:
                return _ScanResult(witness_index=index, witness=e)
            count += 1
    return _ScanResult(count=count)


def _run_scan(formula, vocab, size, free_vars, budget, limit, first_only,
              jobs) -> _ScanResult:
    '''
    Scan indices below ``limit``, split over ``jobs`` processes, and merge
    into the result a sequential scan would give
    '''
    tasks = [_ScanTask(formula, vocab, size, tuple(free_vars), budget, offset,
                       jobs, limit, first_only)
             for offset in range(jobs)]
    if jobs == 1:
        return _scan(tasks[0])

    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_scan, tasks))

    def least(attr):
        indices = [getattr(res, attr) for res in results
                   if getattr(res, attr) is not None]
        return min(indices, default=None)

    witness_index = least('witness_index')
    budget_index = least('budget_index')
    if budget_index is not None and (witness_index is None or
                                     budget_index < witness_index):
        return _ScanResult(budget_index=budget_index)
    if witness_index is not None:
        witness = next(res.witness for res in results
                       if res.witness_index == witness_index)
        return _ScanResult(witness_index=witness_index, witness=witness)
    return _ScanResult(count=sum(res.count for res in results))


def _check_jobs(jobs):
    if jobs < 1:
        raise ValueError(f'jobs must be positive, got {jobs}')


def sat_bounded(formula: Formula, max_size: int,
                vocab: Optional[Vocabulary] = None,
                budget: Optional[EvalBudget] = None, *,
                min_size: int = 1, jobs: int = 1) -> SearchResult:
    '''
    Look for a model of ``formula`` of size ``min_size`` .. ``max_size``

    Free first-order variables are part of the search.

    Parameters
    ----------
    formula : Formula
    max_size : int
    vocab : Vocabulary, optional
        Interpreted predicates; free predicates of ``formula`` are added
    budget : EvalBudget, optional
        Per-evaluation limits plus ``max_structures`` for the whole search
    min_size : int, optional
    jobs : int, optional
        Worker processes

    Returns
    -------
    SearchResult
        ``BUDGET`` whenever a limit was hit before the search could decide
    '''
    _check_jobs(jobs)
    vocab = infer_vocabulary(formula, vocab)
    budget = budget or EvalBudget()
    free_vars = sorted(free_fo_vars(formula))
    checked = 0
    sizes = []
    for size in range(min_size, max_size + 1):
        sizes.append(size)
        total = structure_count(vocab, size, free_vars)
        limit = min(total, budget.max_structures - checked)
        logger.info('Searching %d of %d structures of size %d', limit, total,
                    size)
        result = _run_scan(formula, vocab, size, free_vars, budget, limit,
                           True, jobs)
        if result.budget_index is not None:
            logger.warning('Evaluation budget exceeded at size %d', size)
            return SearchResult(SearchStatus.BUDGET, None, tuple(sizes),
                                checked + result.budget_index)
        if result.witness_index is not None:
            return SearchResult(SearchStatus.WITNESS, result.witness,
                                tuple(sizes),
                                checked + result.witness_index + 1)
        checked += limit
        if limit < total:
            logger.warning('Structure budget of %d exceeded at size %d',
                           budget.max_structures, size)
            return SearchResult(SearchStatus.BUDGET, None, tuple(sizes),
                                checked)
    return SearchResult(SearchStatus.EXHAUSTED, None, tuple(sizes), checked)


def equiv_bounded(first: Formula, second: Formula, max_size: int,
                  vocab: Optional[Vocabulary] = None,
                  budget: Optional[EvalBudget] = None, *,
                  jobs: int = 1) -> Optional[Structure]:
    '''
    The first structure of size at most ``max_size`` on which the formulas
    disagree, or None

    Raises
    ------
    BudgetExceeded
    '''
    vocab = infer_vocabulary(second, infer_vocabulary(first, vocab))
    difference = Not(Iff(first, second))
    result = sat_bounded(difference, max_size, vocab, budget, jobs=jobs)
    if result.status == SearchStatus.BUDGET:
        raise BudgetExceeded(f'Equivalence check exceeded its budget after '
                             f'{result.structures_checked} structures')
    return result.witness


def count_models(formula: Formula, size: int,
                 vocab: Optional[Vocabulary] = None,
                 budget: Optional[EvalBudget] = None, *,
                 jobs: int = 1) -> int:
    '''
    Number of interpretations of the predicates over ``size`` elements that
    satisfy the sentence ``formula``

    Raises
    ------
    ValueError
        If ``formula`` has free first-order variables
    BudgetExceeded
    '''
    _check_jobs(jobs)
    free_vars = free_fo_vars(formula)
    if free_vars:
        raise ValueError(f'count_models needs a sentence; free variables: '
                         f'{sorted(free_vars)}')
    vocab = infer_vocabulary(formula, vocab)
    budget = budget or EvalBudget()
    total = structure_count(vocab, size)
    if total > budget.max_structures:
        raise BudgetExceeded(f'{total} structures of size {size} exceed the '
                             f'budget of {budget.max_structures}')
    result = _run_scan(formula, vocab, size, (), budget, total, False, jobs)
    if result.budget_index is not None:
        raise BudgetExceeded(f'Evaluation budget exceeded on structure '
                             f'{result.budget_index}')
    return result.count
