'''
Exhaustive oracle checks over the formula collections of `spatlogic.corpus`.

Every suite returns a `SuiteResult`; ``spatlogic selftest`` runs them all at
the default sizes and the test suite runs them at reduced sizes.
'''
import functools
import itertools
import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from . import corpus
from .analysis import Fragment, classify, in_fragment
from .evaluator import EvalBudget, Evaluator, eval_lfp
from .forests import check_split_closure, eval_over_forests
from .modelfinder import enumerate_structures, equiv_bounded, sat_bounded
from .parser import parse_formula, print_formula
from .structures import Structure
from .syntax import (Falsum, Formula, Implies, SpatialAnd, SpatialImpl,
                     Vocabulary, free_fo_vars)
from .translate import (lfp_to_sol, reduce_to_two_vars, sol_to_spatial,
                        spatial_to_sol, with_full_bound_predicates)

logger = logging.getLogger(__name__)

#: mismatches kept per suite
MAX_REPORTED = 10


@dataclass
class SuiteResult:
    '''
    Outcome of one acceptance suite

    Attributes
    ----------
    name : str
    checked : int
        Individual comparisons made
    mismatches : list of str
        Descriptions of the first failing comparisons
    elapsed : float
        Seconds spent
    '''
    name: str
    checked: int = 0
    mismatches: List[str] = field(default_factory=list)
    failures: int = 0
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def __bool__(self):
        return self.ok

    def record(self, agreed: bool, description: Callable[[], str]):
        self.checked += 1
        if not agreed:
            self.failures += 1
            if len(self.mismatches) < MAX_REPORTED:
                self.mismatches.append(description())

    def summary(self) -> str:
        status = 'OK' if self.ok else f'FAILED ({self.failures})'
        return (f'{self.name}: {status}, {self.checked} checks, '
                f'{self.elapsed:.1f}s')


def _suite(func):
    'Time the suite and log its outcome'
    @functools.wraps(func)
    def wrapped(*args, **kwargs):
        t0 = time.monotonic()
        result = func(*args, **kwargs)
        result.elapsed = time.monotonic() - t0
        if result.ok:
            logger.info('%s', result.summary())
        else:
            logger.warning('%s: %s', result.summary(), result.mismatches)
        return result

    return wrapped


def _structures(vocab: Vocabulary, size: int, free_vars,
                fixed: Optional[int] = None):
    'All structures of ``size``, or only those mapping every variable to fixed'
    if fixed is None:
        yield from enumerate_structures(vocab, size, free_vars)
        return
    for e in enumerate_structures(vocab, size):
        for var in sorted(free_vars):
            e = e.with_var(var, fixed)
        yield e


def _agreement(result: SuiteResult, label: str, first: Formula,
               second: Formula, structures, evaluator: Evaluator,
               adjust=None):
    for e in structures:
        left = evaluator.evaluate(first, e)
        right = evaluator.evaluate(second, adjust(e) if adjust else e)
        result.record(left == right,
                      lambda: f'{label} differs on {e!r}: {left} / {right}')


@_suite
def spatial_elimination(unary_size: int = 3, edge_size: int = 2,
                        budget: Optional[EvalBudget] = None) -> SuiteResult:
    '''
    Spatial connectives against their second-order translation

    Formulas over unary predicates only are checked on every structure up to
    ``unary_size``; formulas mentioning E on every structure up to
    ``edge_size`` with the free variables fixed to element 0.
    '''
    result = SuiteResult('spatial-elimination')
    evaluator = Evaluator(budget)
    for text in corpus.SPATIAL:
        sig = corpus.spatial_signature(text)
        vocab = corpus.vocabulary(sig)
        formula = parse_formula(text, vocab)
        translated = spatial_to_sol(formula, vocab)
        free_vars = free_fo_vars(formula)
        unary = sig == corpus.UNARY_SIG
        for size in range(1, (unary_size if unary else edge_size) + 1):
            structures = _structures(vocab, size, free_vars,
                                     None if unary else 0)
            _agreement(result, text, formula, translated, structures,
                       evaluator)
    return result


@_suite
def second_order_elimination(max_size: int = 2,
                             budget: Optional[EvalBudget] = None
                             ) -> SuiteResult:
    '''
    Second-order quantifiers against spatial conjunction: pointwise with the
    formerly bound predicates set to full relations, and by satisfiability
    '''
    result = SuiteResult('second-order-elimination')
    evaluator = Evaluator(budget)
    vocab = corpus.vocabulary(corpus.UNARY_SIG)
    for text in corpus.SECOND_ORDER:
        formula = parse_formula(text, vocab)
        translated = sol_to_spatial(formula, vocab)
        for size in range(1, max_size + 1):
            structures = enumerate_structures(vocab, size,
                                              free_fo_vars(formula))
            _agreement(
                result, text, formula, translated, structures, evaluator,
                adjust=lambda e: with_full_bound_predicates(e, formula,
                                                            vocab))

        original = sat_bounded(formula, max_size, vocab, budget).status
        via_spatial = sat_bounded(translated, max_size, vocab, budget).status
        result.record(original == via_spatial,
                      lambda: f'{text}: satisfiability {original.value} / '
                              f'{via_spatial.value}')
    return result


@_suite
def fixpoint_elimination(unary_size: int = 3, binary_size: int = 2,
                         budget: Optional[EvalBudget] = None) -> SuiteResult:
    'Least fixpoints against their second-order definition'
    result = SuiteResult('fixpoint-elimination')
    evaluator = Evaluator(budget)
    for formula, vocab in corpus.fixpoints():
        translated = lfp_to_sol(formula)
        label = print_formula(formula)
        max_size = unary_size if vocab.max_arity <= 1 else binary_size
        for size in range(1, max_size + 1):
            structures = enumerate_structures(vocab, size,
                                              free_fo_vars(formula))
            _agreement(result, label, formula, translated, structures,
                       evaluator)

    # a path of two edges closes to three pairs
    closure = parse_formula(corpus.TRANSITIVE_CLOSURE,
                            corpus.vocabulary(corpus.EDGE_SIG))
    path = Structure(3, corpus.vocabulary(corpus.EDGE_SIG),
                     relations={'E': [(0, 1), (1, 2)]})
    relation = eval_lfp(closure.pred, closure.params, closure.body, path,
                        budget)
    expected = frozenset({(0, 1), (1, 2), (0, 2)})
    result.record(relation == expected,
                  lambda: f'transitive closure gave {sorted(relation)}')
    return result


@_suite
def forest_split_closure(edge_size: int = 4, pair_size: int = 3
                         ) -> SuiteResult:
    'Splitting a forest gives two forests'
    result = SuiteResult('forest-split-closure')
    for sig, size in ((corpus.EDGE_SIG, edge_size),
                      (corpus.TWO_BINARY_SIG, pair_size)):
        closure = check_split_closure(corpus.vocabulary(sig), size)
        result.record(closure.ok,
                      lambda: f'{sig} up to {size}: {closure.counterexample}')
    return result


@_suite
def forest_evaluation(max_size: int = 3,
                      budget: Optional[EvalBudget] = None) -> SuiteResult:
    'Unary splitting on forests, evaluated directly and through translation'
    result = SuiteResult('forest-evaluation')
    vocab = corpus.vocabulary(corpus.FOREST_SIG)
    for text in corpus.FOREST:
        formula = parse_formula(text, vocab)
        for size in range(1, max_size + 1):
            evaluation = eval_over_forests(formula, vocab, size, budget)
            result.record(
                evaluation.agree,
                lambda: f'{text} at size {size}: '
                        f'{len(evaluation.direct)} direct / '
                        f'{len(evaluation.translated)} translated')
    return result


def _valid_per_size(formula: Formula, vocab: Vocabulary, max_size: int,
                    evaluator: Evaluator, free_vars) -> Tuple[bool, ...]:
    return tuple(
        all(evaluator.evaluate(formula, e)
            for e in enumerate_structures(vocab, size, free_vars))
        for size in range(1, max_size + 1)
    )


@_suite
def adjunction(max_size: int = 2,
               budget: Optional[EvalBudget] = None) -> SuiteResult:
    '''
    ``F1 ⊛ F2 → F3`` is valid exactly when ``F1 → (F2 −⊛ F3)`` is, size by
    size
    '''
    result = SuiteResult('adjunction')
    evaluator = Evaluator(budget)
    vocab = corpus.vocabulary(corpus.UNARY_SIG)
    for texts in corpus.ADJUNCTION_TRIPLES:
        first, second, third = (parse_formula(text, vocab) for text in texts)
        conjunctive = Implies(SpatialAnd(first, second), third)
        implicative = Implies(first, SpatialImpl(second, third))
        free_vars = free_fo_vars(conjunctive)
        left = _valid_per_size(conjunctive, vocab, max_size, evaluator,
                               free_vars)
        right = _valid_per_size(implicative, vocab, max_size, evaluator,
                                free_vars)
        result.record(left == right,
                      lambda: f'{texts}: validity {left} / {right}')
    return result


@_suite
def two_variable_reduction(max_size: int = 3,
                           budget: Optional[EvalBudget] = None
                           ) -> SuiteResult:
    '''
    Reduced formulas use two variable names and agree with their input on
    satisfiability
    '''
    result = SuiteResult('two-variable-reduction')
    vocab = corpus.vocabulary(corpus.EDGE_SIG)
    for text in corpus.THREE_VARIABLE:
        formula = parse_formula(text, vocab)
        reduced = reduce_to_two_vars(formula, vocab)
        variables = classify(reduced, vocab).fo_var_count
        result.record(variables <= 2,
                      lambda: f'{text}: {variables} variables after reduction')
        original = sat_bounded(formula, max_size, vocab, budget).status
        after = sat_bounded(reduced, max_size, vocab, budget).status
        result.record(original == after,
                      lambda: f'{text}: satisfiability {original.value} / '
                              f'{after.value}')
    return result


@_suite
def monadic_pipeline() -> SuiteResult:
    '''
    Monadic quantification over unnested formulas translates into spatial
    conjunction over unnested operands
    '''
    result = SuiteResult('monadic-pipeline')
    vocab = corpus.vocabulary(corpus.SPATIAL_SIG)
    for text in corpus.MONADIC_UNNESTED:
        formula = parse_formula(text, vocab)
        source = in_fragment(formula, Fragment.PROP5_INPUT, vocab)
        result.record(source.ok,
                      lambda: f'{text}: input violations {source.violations}')
        translated = sol_to_spatial(formula, vocab)
        target = in_fragment(translated, Fragment.FACT1, vocab)
        result.record(target.ok,
                      lambda: f'{text}: output violations '
                              f'{target.violations}')
    return result


EMPTY_UNARY = '(and (forall x (not (P x))) (forall x (not (Q x))))'


@_suite
def spatial_algebra(max_size: int = 2,
                    budget: Optional[EvalBudget] = None,
                    sample: int = 4) -> SuiteResult:
    '''
    Commutativity, associativity, the empty structure as unit and false as
    zero, on the unary spatial formulas

    Commutativity is checked on every pair of formulas, associativity on
    every triple drawn from the first ``sample`` formulas.
    '''
    result = SuiteResult('spatial-algebra')
    vocab = corpus.vocabulary(corpus.UNARY_SIG)
    formulas = [parse_formula(text, vocab) for text in corpus.SPATIAL
                if corpus.spatial_signature(text) == corpus.UNARY_SIG]
    emp = parse_formula(EMPTY_UNARY, vocab)

    laws = []
    for first, second in itertools.combinations(formulas, 2):
        laws.append(('commutativity', SpatialAnd(first, second),
                     SpatialAnd(second, first)))
    for first, second, third in itertools.product(formulas[:sample],
                                                  repeat=3):
        laws.append(('associativity',
                     SpatialAnd(SpatialAnd(first, second), third),
                     SpatialAnd(first, SpatialAnd(second, third))))
    for formula in formulas:
        laws.append(('unit', SpatialAnd(formula, emp), formula))
        laws.append(('zero', SpatialAnd(formula, Falsum()), Falsum()))

    for law, left, right in laws:
        witness = equiv_bounded(left, right, max_size, vocab, budget)
        result.record(witness is None,
                      lambda: f'{law} fails for {print_formula(left)} on '
                              f'{witness!r}')
    return result


#: structure used for the ``eval`` runs of the determinism check
DETERMINISM_STRUCTURE = '''
(structure
  (size 2)
  (sig (P 1) (Q 1) (E 2))
  (assign (x 0))
  (rel P (0))
  (rel Q (1))
  (rel E (0 1) (1 0)))
'''


def _command_runs(spatial_texts, sol_texts, fixpoint_texts, three_var_texts):
    for text in spatial_texts:
        yield ['translate', '--mode', 'sep2sol', '--vocab',
               corpus.SPATIAL_SIG, text]
        yield ['classify', '--vocab', corpus.SPATIAL_SIG, text]
        yield ['eval', '--vocab', corpus.SPATIAL_SIG, text,
               DETERMINISM_STRUCTURE]
    for text in sol_texts:
        yield ['translate', '--mode', 'sol2sep', '--vocab', corpus.UNARY_SIG,
               text]
        yield ['solve', '--max-size', '1', '--vocab', corpus.UNARY_SIG, text]
    for text in fixpoint_texts:
        yield ['translate', '--mode', 'lfp2sol', text]
    for text in three_var_texts:
        yield ['translate', '--mode', 'twovar', text]
        yield ['count', '--size', '1', text]
    yield ['forests', '--size', '2', '--vocab', corpus.EDGE_SIG]


@_suite
def determinism(command_runs: bool = True) -> SuiteResult:
    '''
    Printing then parsing gives the same formula, and every command prints
    the same bytes when run twice
    '''
    from .main import run_command

    result = SuiteResult('determinism')
    collections: Dict[str, Tuple[str, ...]] = {
        corpus.SPATIAL_SIG: corpus.SPATIAL,
        corpus.UNARY_SIG: corpus.SECOND_ORDER + tuple(
            itertools.chain.from_iterable(corpus.ADJUNCTION_TRIPLES)),
        corpus.EDGE_SIG: corpus.THREE_VARIABLE,
        corpus.FOREST_SIG: corpus.FOREST,
    }
    collections[corpus.SPATIAL_SIG] += corpus.MONADIC_UNNESTED
    for sig, texts in collections.items():
        for formula in corpus.formulas(texts, sig):
            printed = print_formula(formula)
            reparsed = parse_formula(printed, corpus.vocabulary(sig))
            result.record(reparsed == formula,
                          lambda: f'{printed} does not read back')
    for formula, vocab in corpus.fixpoints():
        printed = print_formula(formula)
        result.record(parse_formula(printed, vocab) == formula,
                      lambda: f'{printed} does not read back')

    if command_runs:
        fixpoint_texts = [text for text, _ in corpus.FIXPOINTS]
        for argv in _command_runs(corpus.SPATIAL, corpus.SECOND_ORDER,
                                  fixpoint_texts, corpus.THREE_VARIABLE):
            first = run_command(argv)
            second = run_command(argv)
            result.record(first == second,
                          lambda: f'{argv[0]} output changed between runs')
    return result


def run_all(quick: bool = False,
            budget: Optional[EvalBudget] = None) -> List[SuiteResult]:
    '''
    Run every suite

    Parameters
    ----------
    quick : bool, optional
        Use smaller universes (one size less where the suite allows it)
    budget : EvalBudget, optional
    '''
    if quick:
        calls = [
            lambda: spatial_elimination(2, 1, budget),
            lambda: second_order_elimination(1, budget),
            lambda: fixpoint_elimination(2, 2, budget),
            lambda: forest_split_closure(3, 2),
            lambda: forest_evaluation(2, budget),
            lambda: adjunction(2, budget),
            lambda: two_variable_reduction(2, budget),
            monadic_pipeline,
            lambda: spatial_algebra(1, budget),
            lambda: determinism(command_runs=False),
        ]
    else:
        calls = [
            lambda: spatial_elimination(budget=budget),
            lambda: second_order_elimination(budget=budget),
            lambda: fixpoint_elimination(budget=budget),
            forest_split_closure,
            lambda: forest_evaluation(budget=budget),
            lambda: adjunction(budget=budget),
            lambda: two_variable_reduction(budget=budget),
            monadic_pipeline,
            lambda: spatial_algebra(budget=budget),
            determinism,
        ]

    results = []
    for call in calls:
        results.append(call())
    return results

