'''
Formula-to-formula translations

* `spatial_to_sol`: spatial conjunction and implication into second-order
  quantifiers over split copies of the predicates
* `sol_to_spatial`: second-order quantifiers into spatial conjunction
* `lfp_to_sol`: least fixpoints into universal second-order quantifiers
* `reduce_to_two_vars`: first-order variables into singleton unary predicates
'''
import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Sequence, Set, Tuple

from .parser import infer_vocabulary
from .structures import Structure, full_relation
from .syntax import (SO_BINDERS, And, Atom, CountExists, Eq, ExistsExactly,
                     ExistsFO, ExistsSO, ForallFO, ForallSO, Formula, Iff,
                     Implies, LetRec, LfpAtom, Not, Or, PositivityError,
                     PredicateSet, SpatialAnd, SpatialImpl, Verum, Vocabulary,
                     ArityError, bound_so_vars, check_positivity, conjunction,
                     exists_preds, expand_letrec, fo_var_names, forall_preds,
                     forall_vars, free_fo_vars, fresh_name,
                     predicate_arities, rename_bound_so, so_var_names,
                     substitute_predicate)

logger = logging.getLogger(__name__)

_PREFERRED_VARIABLES = ('x', 'y', 'z', 'u', 'v', 'w')


@dataclass
class TranslationContext:
    '''
    State shared by one translation pass

    Parameters
    ----------
    vocab : Vocabulary
        The signature Σ of the input formula
    global_so_vars : frozenset of str
        Every predicate name of the input formula, fixed at the start
    taken : set of str
        Names fresh predicates must avoid; grows as names are issued
    issued : int
        Number of fresh names handed out so far
    '''
    vocab: Vocabulary
    global_so_vars: FrozenSet[str]
    taken: Set[str] = field(default_factory=set)
    issued: int = 0

    @classmethod
    def for_formula(cls, formula: Formula,
                    vocab: Optional[Vocabulary] = None):
        vocab = infer_vocabulary(formula, vocab)
        names = so_var_names(formula)
        return cls(vocab=vocab, global_so_vars=frozenset(names),
                   taken=set(names) | set(vocab.names))

    def fresh_predicate(self, base: str) -> str:
        name = fresh_name(base, self.taken)
        self.taken.add(name)
        self.issued += 1
        return name


def block_variables(count: int, preferred=()) -> Tuple[str, ...]:
    '''
    ``count`` distinct variable names for a closed quantifier block

    Names already used by the formula come first so that the result does not
    add to its variable count.
    '''
    candidates = []
    for name in sorted(preferred) + list(_PREFERRED_VARIABLES):
        if name not in candidates:
            candidates.append(name)
    while len(candidates) < count:
        candidates.append(fresh_name('x', candidates))
    return tuple(candidates[:count])


def split_constraint(whole: str, part1: str, part2: str, arity: int,
                     variables: Sequence[str] = None) -> Formula:
    '''
    ``whole`` is the disjoint union of ``part1`` and ``part2``::

        ∀x̄. (whole(x̄) ↔ part1(x̄) ∨ part2(x̄)) ∧ ¬(part1(x̄) ∧ part2(x̄))
    '''
    if variables is None:
        variables = block_variables(arity)
    args = tuple(variables[:arity])
    first, second = Atom(part1, args), Atom(part2, args)
    return forall_vars(args, And(Iff(Atom(whole, args), Or(first, second)),
                                 Not(And(first, second))))


# Spatial connectives into second-order logic
# -----------------------------------------------------------------------------

def _rename_all(formula, renames, vocab=None):
    for old, new in renames:
        formula = substitute_predicate(formula, old, new, vocab=vocab)
    return formula


class _SpatialEliminator:
    def __init__(self, context: TranslationContext, fo_names):
        self.context = context
        self.fo_names = fo_names

    def split_names(self, sigma, scope):
        '''
        The predicates split at this point, with arities, in signature order
        followed by enclosing binders
        '''
        interpreted = dict((sym.name, sym.arity)
                           for sym in self.context.vocab)
        interpreted.update(scope)
        if sigma is None:
            return list(interpreted.items())
        try:
            return [(name, interpreted[name]) for name in sigma]
        except KeyError as ex:
            raise ValueError(f'Cannot split uninterpreted predicate '
                             f'{ex.args[0]}') from None

    def copies(self, names):
        first = [(self.context.fresh_predicate(name), arity)
                 for name, arity in names]
        second = [(self.context.fresh_predicate(name), arity)
                  for name, arity in names]
        return first, second

    def variables(self, arity):
        return block_variables(arity, self.fo_names)

    def translate(self, formula, scope):
        if isinstance(formula, SpatialAnd):
            left = self.translate(formula.left, scope)
            right = self.translate(formula.right, scope)
            names = self.split_names(formula.sigma, scope)
            if not names:
                return And(left, right)
            first, second = self.copies(names)
            constraints = [
                split_constraint(name, p1, p2, arity, self.variables(arity))
                for (name, arity), (p1, _), (p2, _) in zip(names, first,
                                                           second)
            ]
            left = _rename_all(left, [(name, p1) for (name, _), (p1, _)
                                      in zip(names, first)])
            right = _rename_all(right, [(name, p2) for (name, _), (p2, _)
                                        in zip(names, second)])
            logger.debug('Eliminating spatial conjunction over %s',
                         [name for name, _ in names])
            return exists_preds(first + second,
                                conjunction(constraints + [left, right]))

        if isinstance(formula, SpatialImpl):
            left = self.translate(formula.left, scope)
            right = self.translate(formula.right, scope)
            names = self.split_names(None, scope)
            if not names:
                return Implies(left, right)
            added, union = self.copies(names)
            constraints = [
                split_constraint(p2, name, p1, arity, self.variables(arity))
                for (name, arity), (p1, _), (p2, _) in zip(names, added,
                                                           union)
            ]
            left = _rename_all(left, [(name, p1) for (name, _), (p1, _)
                                      in zip(names, added)])
            right = _rename_all(right, [(name, p2) for (name, _), (p2, _)
                                        in zip(names, union)])
            logger.debug('Eliminating spatial implication over %s',
                         [name for name, _ in names])
            return forall_preds(added + union,
                                Implies(conjunction(constraints + [left]),
                                        right))

        if isinstance(formula, SO_BINDERS):
            scope = dict(scope, **{formula.pred: formula.arity})
        elif isinstance(formula, (LfpAtom, LetRec)):
            scope = dict(scope, **{formula.pred: len(formula.params)})
        return formula.map_children(lambda child: self.translate(child,
                                                                 scope))


def spatial_to_sol(formula: Formula,
                   vocab: Optional[Vocabulary] = None,
                   context: Optional[TranslationContext] = None) -> Formula:
    '''
    An equivalent formula without spatial conjunction or implication

    Each ``F1 ⊛_σ F2`` becomes an existential block over two fresh copies of
    every predicate in σ, constrained to split the original, with ``F1`` and
    ``F2`` reading the first and the second copies.  Each ``F1 −⊛ F2`` becomes
    a universal block over a disjoint addition and the union.

    Parameters
    ----------
    formula : Formula
    vocab : Vocabulary, optional
        The signature Σ; free predicates of ``formula`` are added to it
    context : TranslationContext, optional
        Reuse the fresh-name state of an enclosing pass
    '''
    context = context or TranslationContext.for_formula(formula, vocab)
    eliminator = _SpatialEliminator(context, fo_var_names(formula))
    return eliminator.translate(formula, {})


# Second-order logic into spatial conjunction
# -----------------------------------------------------------------------------

def _has_non_sol(formula: Formula) -> bool:
    return any(isinstance(node, (SpatialAnd, SpatialImpl, LfpAtom, LetRec))
               for node in formula.walk())


def prepare_sol(formula: Formula,
                vocab: Optional[Vocabulary] = None) -> Formula:
    '''
    The formula `sol_to_spatial` actually translates: fixpoints and spatial
    connectives eliminated, bound predicates renamed apart
    '''
    if _has_non_sol(formula):
        formula = spatial_to_sol(lfp_to_sol(formula), vocab)
    return rename_bound_so(formula)


def bound_predicates(formula: Formula,
                     vocab: Optional[Vocabulary] = None
                     ) -> Tuple[Tuple[str, int], ...]:
    '''
    ``(name, arity)`` of the bound predicates of `prepare_sol`, sorted by
    name; these are free in the output of `sol_to_spatial`
    '''
    prepared = prepare_sol(formula, vocab)
    arities = predicate_arities(prepared)
    return tuple((name, arities[name])
                 for name in sorted(bound_so_vars(prepared)))


def with_full_bound_predicates(e: Structure, formula: Formula,
                               vocab: Optional[Vocabulary] = None
                               ) -> Structure:
    'Extend ``e`` with every bound predicate of ``formula`` set to U^k'
    for name, arity in bound_predicates(formula, vocab):
        e = e.declare(name, arity, full_relation(e.size, arity))
    return e


class _SecondOrderEliminator:
    def __init__(self, global_so_vars, arities, sigma, fo_names):
        self.global_so_vars = global_so_vars
        self.arities = arities
        self.sigma = sigma
        self.fo_names = fo_names

    def nonebut(self, pred) -> Formula:
        'Every other predicate of the formula is empty (on the split set)'
        others = sorted(self.global_so_vars - {pred})
        if self.sigma is not None:
            others = [name for name in others if name in self.sigma]
        return _uniform_block(others, self.arities, self.fo_names,
                              negate=True)

    def translate(self, formula):
        if isinstance(formula, ExistsSO):
            return SpatialAnd(self.nonebut(formula.pred),
                              self.translate(formula.body), self.sigma)
        if isinstance(formula, ForallSO):
            return Not(SpatialAnd(self.nonebut(formula.pred),
                                  Not(self.translate(formula.body)),
                                  self.sigma))
        return formula.map_children(self.translate)


def _uniform_block(names, arities, fo_names, *, negate=False) -> Formula:
    '''
    ``∀x1..xk. ⋀ Q(x1..x_ar(Q))`` over ``names`` (negated atoms if
    ``negate``), with k the largest arity
    '''
    if not names:
        return Verum()
    width = max(arities[name] for name in names)
    variables = block_variables(width, fo_names)
    atoms = []
    for name in names:
        atom = Atom(name, variables[:arities[name]])
        atoms.append(Not(atom) if negate else atom)
    return forall_vars(variables, conjunction(atoms))


def sol_to_spatial(formula: Formula,
                   vocab: Optional[Vocabulary] = None) -> Formula:
    '''
    A formula without second-order quantifiers, using spatial conjunction

    ``∃P.F`` becomes ``nonebut(P) ⊛ F`` where ``nonebut(P)`` empties every
    other predicate of the formula, and ``∀P.F`` becomes
    ``¬(nonebut(P) ⊛ ¬F)``.  The result is conjoined with an assertion that
    every formerly bound predicate is full, so on structures interpreting
    those predicates as U^k it agrees with the input, and it is satisfiable
    iff the input is.

    If every quantified predicate has arity at most one, the spatial
    conjunctions split only the unary predicates (and nullary bound ones);
    otherwise they split everything.

    Spatial connectives and fixpoints in the input are eliminated first, so
    the only non-first-order construct of the result is spatial conjunction.
    '''
    vocab = infer_vocabulary(formula, vocab)
    prepared = prepare_sol(formula, vocab)
    arities = dict((sym.name, sym.arity) for sym in vocab)
    arities.update(predicate_arities(prepared))
    bound = sorted(bound_so_vars(prepared))
    global_so_vars = frozenset(so_var_names(prepared))

    if all(arities[name] <= 1 for name in bound):
        sigma = PredicateSet(
            frozenset(name for name in set(vocab.names) | global_so_vars
                      if arities[name] == 1) | frozenset(bound))
    else:
        sigma = None

    fo_names = fo_var_names(prepared)
    eliminator = _SecondOrderEliminator(global_so_vars, arities, sigma,
                                        fo_names)
    translated = eliminator.translate(prepared)
    full = _uniform_block(bound, arities, fo_names)
    if isinstance(full, Verum):
        return translated
    return And(full, translated)


def to_spatial(formula: Formula,
               vocab: Optional[Vocabulary] = None) -> Formula:
    '''
    Express fixpoints, spatial implication, parameterized spatial
    conjunction and second-order quantifiers with spatial conjunction alone
    '''
    return sol_to_spatial(formula, vocab)


# Fixpoints into second-order logic
# -----------------------------------------------------------------------------

def lfp_to_sol(formula: Formula) -> Formula:
    '''
    Replace ``lfp P x̄ F ȳ`` by ``∀P. (∀x̄. F ↔ P(x̄)) → P(ȳ)``

    ``letrec`` is expanded into fixpoint terms first.

    Raises
    ------
    PositivityError
        If a fixpoint body uses its predicate negatively
    '''
    def translate(node):
        if isinstance(node, LfpAtom) and \
                not check_positivity(node.body, node.pred):
            raise PositivityError(f'{node.pred} occurs negatively in its '
                                  f'fixpoint body')
        node = node.map_children(translate)
        if not isinstance(node, LfpAtom):
            return node
        fixpoint = forall_vars(node.params,
                               Iff(node.body, Atom(node.pred, node.params)))
        return ForallSO(node.pred, len(node.params),
                        Implies(fixpoint, Atom(node.pred, node.args)))

    return translate(expand_letrec(formula))


# Two-variable reduction
# -----------------------------------------------------------------------------

class _TwoVariableReducer:
    first, second = 'u', 'v'

    def __init__(self, context: TranslationContext):
        self.context = context

    def singleton(self, pred) -> Formula:
        return ExistsExactly(1, self.first, Atom(pred, (self.first, )))

    def binder(self, var, body, env, universal):
        pred = self.context.fresh_predicate(f'P_{var}')
        inner = self.translate(body, dict(env, **{var: pred}))
        if universal:
            return ForallSO(pred, 1, Implies(self.singleton(pred), inner))
        return ExistsSO(pred, 1, And(self.singleton(pred), inner))

    def counting(self, formula, env):
        u, v = self.first, self.second
        pred = self.context.fresh_predicate(f'P_{formula.var}')
        inner = self.translate(formula.body, dict(env, **{formula.var: pred}))
        pinned = ForallFO(v, Iff(Atom(pred, (v, )), Eq(v, u)))
        return type(formula)(formula.count, u,
                             ExistsSO(pred, 1, And(pinned, inner)))

    def atom(self, formula, env):
        u, v = self.first, self.second
        if len(formula.args) == 0:
            return formula
        if len(formula.args) == 1:
            marker = env[formula.args[0]]
            return ForallFO(u, Implies(Atom(marker, (u, )),
                                       Atom(formula.pred, (u, ))))
        if len(formula.args) == 2:
            x, y = formula.args
            if x == y:
                return ForallFO(u, Implies(Atom(env[x], (u, )),
                                           Atom(formula.pred, (u, u))))
            return forall_vars((u, v), Implies(
                And(Atom(env[x], (u, )), Atom(env[y], (v, ))),
                Atom(formula.pred, (u, v))))
        raise ArityError(f'Two-variable reduction needs arities of at most '
                         f'2, found {formula.pred}/{len(formula.args)}')

    def translate(self, formula, env):
        if isinstance(formula, Atom):
            return self.atom(formula, env)
        if isinstance(formula, Eq):
            u = self.first
            return ForallFO(u, Implies(Atom(env[formula.left], (u, )),
                                       Atom(env[formula.right], (u, ))))
        if isinstance(formula, ExistsFO):
            return self.binder(formula.var, formula.body, env, False)
        if isinstance(formula, ForallFO):
            return self.binder(formula.var, formula.body, env, True)
        if isinstance(formula, CountExists) and formula.count == 1:
            return self.binder(formula.var, formula.body, env, False)
        if isinstance(formula, (CountExists, ExistsExactly)):
            return self.counting(formula, env)
        if isinstance(formula, (SpatialAnd, SpatialImpl, LfpAtom, LetRec)):
            raise ValueError(f'Two-variable reduction needs first- or '
                             f'second-order input, found '
                             f'{type(formula).__name__}')
        return formula.map_children(lambda child: self.translate(child, env))


def reduce_to_two_vars(formula: Formula,
                       vocab: Optional[Vocabulary] = None) -> Formula:
    '''
    An equisatisfiable formula with at most two first-order variables

    Every first-order variable becomes a fresh unary predicate holding
    exactly one element.  Free variables become free singleton predicates,
    guarded at the top level.  A counting quantifier over x keeps counting
    with the variable u and binds P_x to exactly ``{u}``.

    Raises
    ------
    ArityError
        On predicates of arity above 2
    ValueError
        On spatial or fixpoint constructs
    '''
    context = TranslationContext.for_formula(formula, vocab)
    reducer = _TwoVariableReducer(context)
    free = sorted(free_fo_vars(formula))
    env = {var: context.fresh_predicate(f'P_{var}') for var in free}
    translated = reducer.translate(formula, env)
    guards = [reducer.singleton(env[var]) for var in free]
    logger.debug('Reduced %d first-order binders to unary predicates',
                 context.issued)
    return conjunction(guards + [translated])
