'''
Truth of formulas on finite structures.

Quantifiers over relations are decided by trying every relation of the right
arity, spatial conjunction by trying every split and spatial implication by
trying every disjoint extension; all three are counted against an
`EvalBudget`.
'''
import functools
import itertools
import logging
import os
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

from .structures import Relation, Structure, enumerate_splits, full_relation
from .syntax import (And, Atom, ExistsSO, ForallFO, ForallSO, Formula, Iff,
                     Implies, Not, Or, PositivityError, SpatialAnd,
                     SpatialImpl, check_positivity, conjuncts, expand_letrec,
                     free_fo_vars, free_so_vars, node_count)

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = int(os.environ.get('SPATLOGIC_BUDGET', 10 ** 7))


class BudgetExceeded(RuntimeError):
    'An enumeration limit of the `EvalBudget` was reached; no truth value'


class UnboundNameError(ValueError):
    'A free variable or predicate is not interpreted by the structure'


@dataclass(frozen=True)
class EvalBudget:
    '''
    Limits on the exponential enumerations of one evaluation

    Parameters
    ----------
    max_split_pairs : int
        Split pairs tried for spatial conjunctions
    max_extension_structures : int
        Candidate relations tried for second-order quantifiers and
        extensions tried for spatial implications
    max_structures : int
        Structures checked by one model search
    '''
    max_split_pairs: int = DEFAULT_BUDGET
    max_extension_structures: int = DEFAULT_BUDGET
    max_structures: int = DEFAULT_BUDGET

    def __post_init__(self):
        for name in ('max_split_pairs', 'max_extension_structures',
                     'max_structures'):
            if getattr(self, name) < 1:
                raise ValueError(f'{name} must be positive, got '
                                 f'{getattr(self, name)}')

    @classmethod
    def uniform(cls, limit: int) -> 'EvalBudget':
        return cls(limit, limit, limit)


@functools.lru_cache(maxsize=64)
def all_relations(size: int, arity: int) -> Tuple[Relation, ...]:
    '''
    Every relation of ``arity`` over a universe of ``size`` elements

    The i-th lexicographic tuple belongs to relation number m iff bit i of m
    is set.
    '''
    tuples = sorted(full_relation(size, arity))
    return tuple(
        frozenset(tup for idx, tup in enumerate(tuples) if mask >> idx & 1)
        for mask in range(1 << len(tuples))
    )


def _implicit_dependency(formula: Formula) -> bool:
    'True if ``formula`` reads every interpreted predicate'
    return any(isinstance(node, SpatialImpl) or
               (isinstance(node, SpatialAnd) and node.sigma is None)
               for node in formula.walk())


def split_shape(formula: Formula) -> Optional[Tuple[str, str, str]]:
    '''
    ``(whole, part1, part2)`` if ``formula`` reads

        ∀x̄. (whole(x̄) ↔ part1(x̄) ∨ part2(x̄)) ∧ ¬(part1(x̄) ∧ part2(x̄))

    with distinct names, else None
    '''
    variables = []
    node = formula
    while isinstance(node, ForallFO):
        variables.append(node.var)
        node = node.body
    if not (isinstance(node, And) and isinstance(node.left, Iff) and
            isinstance(node.right, Not) and isinstance(node.right.body, And)):
        return None
    whole, union = node.left.left, node.left.right
    if not (isinstance(whole, Atom) and isinstance(union, Or) and
            isinstance(union.left, Atom) and isinstance(union.right, Atom)):
        return None
    first, second = union.left, union.right
    args = tuple(variables)
    if len(set(args)) != len(args) or \
            any(atom.args != args for atom in (whole, first, second)):
        return None
    if node.right.body != And(first, second):
        return None
    names = (whole.pred, first.pred, second.pred)
    if len(set(names)) != 3:
        return None
    return names


@dataclass(frozen=True)
class _BlockPlan:
    '''
    Search order for a block of second-order binders over a conjunction

    ``checks[i]`` holds the conjuncts decided once binders ``0..i`` are
    assigned; ``splits[i]`` the split constraints among them that fix the
    relation of binder ``i`` outright.
    '''
    binders: Tuple[Tuple[str, int], ...]
    unconditional: Tuple[Formula, ...]
    checks: Tuple[Tuple[Formula, ...], ...]
    splits: Tuple[Tuple[Tuple[str, str, str], ...], ...]


def _plan_block(binders, matrix_conjuncts) -> _BlockPlan:
    names = {name for name, _ in binders}
    deps = []
    for conj in matrix_conjuncts:
        if _implicit_dependency(conj):
            deps.append(frozenset(names))
        else:
            deps.append(free_so_vars(conj) & names)

    # binders mentioned by the most selective conjuncts come first
    ranked = sorted(range(len(matrix_conjuncts)), key=lambda i: len(deps[i]))
    order = []
    for idx in ranked:
        for name, arity in binders:
            if name in deps[idx] and (name, arity) not in order:
                order.append((name, arity))
    order.extend(binder for binder in binders if binder not in order)

    unconditional = tuple(conj for conj, dep in zip(matrix_conjuncts, deps)
                          if not dep)
    checks = []
    splits = []
    assigned = set()
    scheduled = set()
    for name, _ in order:
        assigned.add(name)
        level = []
        for idx, conj in enumerate(matrix_conjuncts):
            if deps[idx] and idx not in scheduled and deps[idx] <= assigned:
                scheduled.add(idx)
                level.append(conj)
        level.sort(key=node_count)
        checks.append(tuple(level))
        shapes = (split_shape(conj) for conj in level)
        splits.append(tuple(shape for shape in shapes
                            if shape is not None and name in shape))
    return _BlockPlan(tuple(order), unconditional, tuple(checks),
                      tuple(splits))


def _determined(name, size, arity, splits, e) -> Tuple[Relation, ...]:
    'Candidate relations for ``name``, narrowed by a split constraint'
    if not splits:
        return all_relations(size, arity)
    whole, first, second = splits[0]
    if name == whole:
        left, right = e.relations[first], e.relations[second]
        return () if left & right else (left | right, )
    other = e.relations[second if name == first else first]
    total = e.relations[whole]
    return (total - other, ) if other <= total else ()


class Evaluator:
    '''
    Evaluates formulas, counting enumeration work against a budget

    Parameters
    ----------
    budget : EvalBudget, optional
        Defaults to `DEFAULT_BUDGET` for every limit
    '''
    def __init__(self, budget: Optional[EvalBudget] = None):
        self.budget = budget or EvalBudget()
        self._handlers = {}
        self._plans = {}
        self._lfp_cache = {}
        self.reset()

    def reset(self):
        self.split_pairs = 0
        self.extension_structures = 0
        self._plans.clear()
        self._lfp_cache.clear()

    def evaluate(self, formula: Formula, e: Structure) -> bool:
        '''
        Truth value of ``formula`` on ``e``

        Raises
        ------
        UnboundNameError
            If a free name of ``formula`` is not interpreted by ``e``
        BudgetExceeded
        PositivityError
            If a fixpoint body uses its predicate negatively
        '''
        missing_vars = free_fo_vars(formula) - set(e.assignment)
        if missing_vars:
            raise UnboundNameError(
                f'Unassigned variables: {sorted(missing_vars)}')
        missing_preds = free_so_vars(formula) - set(e.vocab.names)
        if missing_preds:
            raise UnboundNameError(
                f'Uninterpreted predicates: {sorted(missing_preds)}')
        self.reset()
        return self.eval(formula, e)

    def eval(self, formula: Formula, e: Structure) -> bool:
        cls = type(formula)
        try:
            handler = self._handlers[cls]
        except KeyError:
            handler = getattr(self, f'_eval_{cls.__name__}', None)
            if handler is None:
                raise TypeError(f'Not a formula: {formula!r}') from None
            self._handlers[cls] = handler
        return handler(formula, e)

    def _count_splits(self):
        self.split_pairs += 1
        if self.split_pairs > self.budget.max_split_pairs:
            raise BudgetExceeded(f'More than {self.budget.max_split_pairs} '
                                 f'split pairs')

    def _count_extensions(self):
        self.extension_structures += 1
        if self.extension_structures > self.budget.max_extension_structures:
            raise BudgetExceeded(
                f'More than {self.budget.max_extension_structures} '
                f'extension structures')

    # First-order and propositional
    # -------------------------------------------------------------------------

    def _eval_Verum(self, formula, e):
        return True

    def _eval_Falsum(self, formula, e):
        return False

    def _eval_Eq(self, formula, e):
        return e.assignment[formula.left] == e.assignment[formula.right]

    def _eval_Atom(self, formula, e):
        assignment = e.assignment
        try:
            relation = e.relations[formula.pred]
        except KeyError:
            raise UnboundNameError(
                f'Uninterpreted predicate: {formula.pred}') from None
        return tuple(assignment[arg] for arg in formula.args) in relation

    def _eval_And(self, formula, e):
        return self.eval(formula.left, e) and self.eval(formula.right, e)

    def _eval_Or(self, formula, e):
        return self.eval(formula.left, e) or self.eval(formula.right, e)

    def _eval_Implies(self, formula, e):
        return not self.eval(formula.left, e) or self.eval(formula.right, e)

    def _eval_Iff(self, formula, e):
        return self.eval(formula.left, e) == self.eval(formula.right, e)

    def _eval_Not(self, formula, e):
        return not self.eval(formula.body, e)

    def _eval_ExistsFO(self, formula, e):
        return any(self.eval(formula.body, e.with_var(formula.var, value))
                   for value in e.universe)

    def _eval_ForallFO(self, formula, e):
        return all(self.eval(formula.body, e.with_var(formula.var, value))
                   for value in e.universe)

    def _witnesses(self, formula, e, stop_at):
        count = 0
        for value in e.universe:
            if self.eval(formula.body, e.with_var(formula.var, value)):
                count += 1
                if count >= stop_at:
                    break
        return count

    def _eval_CountExists(self, formula, e):
        if formula.count > e.size:
            return False
        return self._witnesses(formula, e, formula.count) >= formula.count

    def _eval_ExistsExactly(self, formula, e):
        if formula.count > e.size:
            return False
        return self._witnesses(formula, e, formula.count + 1) == formula.count

    # Second order
    # -------------------------------------------------------------------------

    def _block(self, formula, binder_type):
        binders = []
        node = formula
        while isinstance(node, binder_type):
            binders.append((node.pred, node.arity))
            node = node.body
        if len({name for name, _ in binders}) != len(binders):
            # shadowing inside the block: only the innermost binder counts
            return [(formula.pred, formula.arity)], formula.body
        return binders, node

    def _plan(self, formula):
        try:
            node, plan = self._plans[id(formula)]
        except KeyError:
            pass
        else:
            if node is formula:
                return plan

        if isinstance(formula, ExistsSO):
            binders, matrix = self._block(formula, ExistsSO)
            plan = _plan_block(binders, conjuncts(matrix))
        else:
            binders, matrix = self._block(formula, ForallSO)
            if isinstance(matrix, Implies):
                parts = conjuncts(matrix.left) + (Not(matrix.right), )
            else:
                parts = (Not(matrix), )
            plan = _plan_block(binders, parts)
        self._plans[id(formula)] = (formula, plan)
        return plan

    def _search(self, plan: _BlockPlan, e: Structure) -> bool:
        'True iff some choice of relations for the block satisfies all checks'
        if not all(self.eval(conj, e) for conj in plan.unconditional):
            return False

        for name, arity in plan.binders:
            e = e.declare(name, arity)

        def search(level, e):
            if level == len(plan.binders):
                return True
            name, arity = plan.binders[level]
            checks = plan.checks[level]
            candidates = _determined(name, e.size, arity, plan.splits[level],
                                     e)
            for relation in candidates:
                self._count_extensions()
                candidate = e.with_relation(name, relation)
                if all(self.eval(conj, candidate) for conj in checks) and \
                        search(level + 1, candidate):
                    return True
            return False

        return search(0, e)

    def _eval_ExistsSO(self, formula, e):
        return self._search(self._plan(formula), e)

    def _eval_ForallSO(self, formula, e):
        return not self._search(self._plan(formula), e)

    # Spatial
    # -------------------------------------------------------------------------

    def _eval_SpatialAnd(self, formula, e):
        if formula.sigma is None:
            sigma = e.vocab.names
        else:
            sigma = formula.sigma.members
            missing = set(sigma) - set(e.vocab.names)
            if missing:
                raise UnboundNameError(
                    f'Cannot split uninterpreted predicates: '
                    f'{sorted(missing)}')

        for left, right in enumerate_splits(e, sigma):
            self._count_splits()
            if self.eval(formula.left, left) and \
                    self.eval(formula.right, right):
                return True
        return False

    def extensions(self, e: Structure) -> Iterator[Tuple[Structure,
                                                         Structure]]:
        '''
        Every ``(e1, e2)`` where ``e1`` is disjoint from ``e`` on every
        predicate and ``e2`` is their union
        '''
        names = e.vocab.names
        choices = []
        for name in names:
            arity = e.vocab.arity(name)
            free = full_relation(e.size, arity) - e.relations[name]
            choices.append([rel for rel in all_relations(e.size, arity)
                            if rel <= free])
        for combination in itertools.product(*choices):
            self._count_extensions()
            added = dict(zip(names, combination))
            union = {name: e.relations[name] | added[name] for name in names}
            yield e.with_relations(added), e.with_relations(union)

    def _eval_SpatialImpl(self, formula, e):
        for added, union in self.extensions(e):
            if self.eval(formula.left, added) and \
                    not self.eval(formula.right, union):
                return False
        return True

    # Fixpoints
    # -------------------------------------------------------------------------

    def iterate_lfp(self, pred: str, params: Sequence[str], body: Formula,
                    e: Structure) -> Iterator[Relation]:
        '''
        The approximation chain of the least fixpoint, starting from the
        empty relation and ending at the fixpoint

        Raises
        ------
        PositivityError
        '''
        if not check_positivity(body, pred):
            raise PositivityError(f'{pred} occurs negatively in its '
                                  f'fixpoint body')
        params = tuple(params)
        arity = len(params)
        universe = sorted(full_relation(e.size, arity))
        stage = frozenset()
        e = e.declare(pred, arity)
        yield stage
        while True:
            current = e.with_relation(pred, stage)
            following = frozenset(
                tup for tup in universe
                if self.eval(body, _assign(current, params, tup)))
            if following == stage:
                return
            stage = following
            yield stage

    def eval_lfp(self, pred: str, params: Sequence[str], body: Formula,
                 e: Structure) -> Relation:
        stage = frozenset()
        for stage in self.iterate_lfp(pred, params, body, e):
            pass
        return stage

    def _eval_LfpAtom(self, formula, e):
        free_vars = sorted(free_fo_vars(formula.body) - set(formula.params))
        free_preds = sorted(free_so_vars(formula.body) - {formula.pred})
        key = (formula.pred, formula.params, formula.body, e.size,
               tuple(e.assignment[var] for var in free_vars),
               tuple(e.relations.get(name) for name in free_preds))
        try:
            relation = self._lfp_cache[key]
        except KeyError:
            relation = self.eval_lfp(formula.pred, formula.params,
                                     formula.body, e)
            self._lfp_cache[key] = relation
        return tuple(e.assignment[arg] for arg in formula.args) in relation

    def _eval_LetRec(self, formula, e):
        return self.eval(expand_letrec(formula), e)


def _assign(e, params, values):
    for param, value in zip(params, values):
        e = e.with_var(param, value)
    return e


def evaluate(formula: Formula, e: Structure,
             budget: Optional[EvalBudget] = None) -> bool:
    'Truth value of ``formula`` on ``e``; see `Evaluator.evaluate`'
    return Evaluator(budget).evaluate(formula, e)


def eval_lfp(pred: str, params: Sequence[str], body: Formula, e: Structure,
             budget: Optional[EvalBudget] = None) -> Relation:
    '''
    Least fixpoint of ``r -> {v | body holds with pred := r, params := v}``

    Parameters
    ----------
    pred : str
        The defined predicate; it must occur only positively in ``body``
    params : sequence of str
        The bound variables, one per argument position
    body : Formula
    e : Structure
        Interprets the other free names of ``body``
    budget : EvalBudget, optional
    '''
    return Evaluator(budget).eval_lfp(pred, params, body, e)


def iterate_lfp(pred: str, params: Sequence[str], body: Formula, e: Structure,
                budget: Optional[EvalBudget] = None) -> Iterator[Relation]:
    return Evaluator(budget).iterate_lfp(pred, params, body, e)
