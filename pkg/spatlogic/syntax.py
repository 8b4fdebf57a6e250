'''
Vocabularies and the formula tree of second-order logic with spatial
conjunction, plus the syntactic operations every translation relies on.

All values are immutable; every operation here is a pure function.
'''
import dataclasses
import itertools
import logging
import re
from dataclasses import dataclass
from typing import (Dict, FrozenSet, Iterable, Iterator, Mapping, Optional,
                    Tuple)

logger = logging.getLogger(__name__)

_RE_SUFFIXED = re.compile(r'^(?P<base>.*?)_(?P<counter>\d+)$')


class ArityError(ValueError):
    'An atom, binder or substitution disagrees with a declared arity'


class PositivityError(ValueError):
    'A fixpoint body mentions its predicate under an odd number of negations'


@dataclass(frozen=True)
class PredicateSymbol:
    name: str
    arity: int

    def __post_init__(self):
        if not self.name:
            raise ValueError('Predicate symbols need a name')
        if self.arity < 0:
            raise ArityError(f'Negative arity for {self.name}: {self.arity}')


@dataclass(frozen=True)
class Vocabulary:
    '''
    An ordered, duplicate-free signature of predicate symbols

    Parameters
    ----------
    symbols : tuple of PredicateSymbol
        Declaration order is kept and used as the iteration order everywhere
        (splits, structure enumeration, printing).
    '''
    symbols: Tuple[PredicateSymbol, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'symbols', tuple(self.symbols))
        seen = set()
        for symbol in self.symbols:
            if symbol.name in seen:
                raise ValueError(f'Duplicate predicate symbol: {symbol.name}')
            seen.add(symbol.name)
        object.__setattr__(
            self, '_arities', {sym.name: sym.arity for sym in self.symbols})

    @classmethod
    def from_arities(cls, arities):
        'Build a vocabulary from ``{name: arity}`` or ``[(name, arity)]``'
        if isinstance(arities, Mapping):
            arities = arities.items()
        return cls(tuple(PredicateSymbol(name, arity)
                         for name, arity in arities))

    def __iter__(self) -> Iterator[PredicateSymbol]:
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, name):
        return name in self._arities

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(sym.name for sym in self.symbols)

    @property
    def max_arity(self) -> int:
        'The maximal arity C (0 for an empty vocabulary)'
        return max((sym.arity for sym in self.symbols), default=0)

    def arity(self, name) -> int:
        try:
            return self._arities[name]
        except KeyError:
            raise KeyError(f'Undeclared predicate: {name}') from None

    def of_arity(self, arity) -> Tuple[str, ...]:
        'Names of the symbols of the given arity, in declaration order'
        return tuple(sym.name for sym in self.symbols if sym.arity == arity)

    def extended(self, name, arity) -> 'Vocabulary':
        'A vocabulary with ``name`` appended (or unchanged, if declared)'
        if name in self._arities:
            if self._arities[name] != arity:
                raise ArityError(
                    f'{name} is declared with arity {self._arities[name]}, '
                    f'not {arity}')
            return self
        return Vocabulary(self.symbols + (PredicateSymbol(name, arity), ))

    def merged(self, other: 'Vocabulary') -> 'Vocabulary':
        vocab = self
        for sym in other:
            vocab = vocab.extended(sym.name, sym.arity)
        return vocab


@dataclass(frozen=True)
class PredicateSet:
    'The set of predicates split by a parameterized spatial conjunction'
    members: FrozenSet[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, 'members', frozenset(self.members))

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, name):
        return name in self.members

    def __len__(self):
        return len(self.members)

    def check_against(self, vocab: Vocabulary):
        'Raise if a member is not declared in ``vocab``'
        missing = sorted(self.members - set(vocab.names))
        if missing:
            raise ValueError(f'Predicates not in the vocabulary: {missing}')


# Formula tree
# -----------------------------------------------------------------------------

class Formula:
    '''
    Base class of all formula variants

    Subclasses are frozen dataclasses and list the names of their formula
    fields in ``_children``.
    '''
    _children: Tuple[str, ...] = ()

    @property
    def children(self) -> Tuple['Formula', ...]:
        return tuple(getattr(self, attr) for attr in self._children)

    def map_children(self, func) -> 'Formula':
        'Return a copy with ``func`` applied to every direct subformula'
        if not self._children:
            return self
        changes = {}
        for attr in self._children:
            old = getattr(self, attr)
            new = func(old)
            if new is not old:
                changes[attr] = new
        if not changes:
            return self
        return dataclasses.replace(self, **changes)

    def walk(self) -> Iterator['Formula']:
        'Pre-order traversal of all subformulas, including this one'
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


@dataclass(frozen=True)
class Verum(Formula):
    pass


@dataclass(frozen=True)
class Falsum(Formula):
    pass


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'args', tuple(self.args))


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula
    _children = ('left', 'right')


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula
    _children = ('left', 'right')


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula
    _children = ('left', 'right')


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula
    _children = ('left', 'right')


@dataclass(frozen=True)
class Not(Formula):
    body: Formula
    _children = ('body', )


@dataclass(frozen=True)
class ExistsFO(Formula):
    var: str
    body: Formula
    _children = ('body', )


@dataclass(frozen=True)
class ForallFO(Formula):
    var: str
    body: Formula
    _children = ('body', )


@dataclass(frozen=True)
class CountExists(Formula):
    'At least ``count`` elements satisfy the body'
    count: int
    var: str
    body: Formula
    _children = ('body', )

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f'Counting quantifier needs a positive count, '
                             f'got {self.count}')


@dataclass(frozen=True)
class ExistsExactly(Formula):
    count: int
    var: str
    body: Formula
    _children = ('body', )

    def __post_init__(self):
        if self.count < 1:
            raise ValueError(f'Counting quantifier needs a positive count, '
                             f'got {self.count}')


@dataclass(frozen=True)
class ExistsSO(Formula):
    pred: str
    arity: int
    body: Formula
    _children = ('body', )


@dataclass(frozen=True)
class ForallSO(Formula):
    pred: str
    arity: int
    body: Formula
    _children = ('body', )


@dataclass(frozen=True)
class SpatialAnd(Formula):
    '''
    Spatial conjunction; ``sigma=None`` splits every predicate the structure
    interprets at this point (including enclosing second-order binders)
    '''
    left: Formula
    right: Formula
    sigma: Optional[PredicateSet] = None
    _children = ('left', 'right')


@dataclass(frozen=True)
class SpatialImpl(Formula):
    left: Formula
    right: Formula
    _children = ('left', 'right')


@dataclass(frozen=True)
class LfpAtom(Formula):
    'Membership of ``args`` in the least fixpoint of ``pred(params) = body``'
    pred: str
    params: Tuple[str, ...]
    body: Formula
    args: Tuple[str, ...]
    _children = ('body', )

    def __post_init__(self):
        object.__setattr__(self, 'params', tuple(self.params))
        object.__setattr__(self, 'args', tuple(self.args))
        if len(self.params) != len(self.args):
            raise ArityError(
                f'lfp {self.pred}: {len(self.params)} bound variables but '
                f'{len(self.args)} arguments')


@dataclass(frozen=True)
class LetRec(Formula):
    pred: str
    params: Tuple[str, ...]
    body: Formula
    scope: Formula
    _children = ('body', 'scope')

    def __post_init__(self):
        object.__setattr__(self, 'params', tuple(self.params))


CORE_TYPES = (Verum, Eq, Atom, And, Not, ExistsFO, CountExists, ExistsSO,
              SpatialAnd, SpatialImpl, LfpAtom, LetRec)
SUGAR_TYPES = (Falsum, Or, Implies, Iff, ForallFO, ForallSO, ExistsExactly)
FO_BINDERS = (ExistsFO, ForallFO, CountExists, ExistsExactly)
SO_BINDERS = (ExistsSO, ForallSO)
SPATIAL_TYPES = (SpatialAnd, SpatialImpl)
FIXPOINT_TYPES = (LfpAtom, LetRec)


# Construction helpers
# -----------------------------------------------------------------------------

def conjunction(formulas: Iterable[Formula]) -> Formula:
    'Right-nested conjunction; the empty conjunction is ``Verum()``'
    formulas = list(formulas)
    if not formulas:
        return Verum()
    result = formulas[-1]
    for formula in reversed(formulas[:-1]):
        result = And(formula, result)
    return result


def conjuncts(formula: Formula) -> Tuple[Formula, ...]:
    'Flatten nested ``And`` nodes into a tuple of conjuncts'
    if isinstance(formula, And):
        return conjuncts(formula.left) + conjuncts(formula.right)
    return (formula, )


def forall_vars(variables, body) -> Formula:
    for var in reversed(tuple(variables)):
        body = ForallFO(var, body)
    return body


def exists_preds(binders, body) -> Formula:
    'Wrap ``body`` in ``ExistsSO`` for each ``(name, arity)`` of binders'
    for name, arity in reversed(tuple(binders)):
        body = ExistsSO(name, arity, body)
    return body


def forall_preds(binders, body) -> Formula:
    for name, arity in reversed(tuple(binders)):
        body = ForallSO(name, arity, body)
    return body


# Free and bound names
# -----------------------------------------------------------------------------

def free_fo_vars(formula: Formula) -> FrozenSet[str]:
    'First-order variables occurring free in ``formula``'
    if isinstance(formula, Eq):
        return frozenset((formula.left, formula.right))
    if isinstance(formula, Atom):
        return frozenset(formula.args)
    if isinstance(formula, FO_BINDERS):
        return free_fo_vars(formula.body) - {formula.var}
    if isinstance(formula, LfpAtom):
        return ((free_fo_vars(formula.body) - set(formula.params)) |
                set(formula.args))
    if isinstance(formula, LetRec):
        return ((free_fo_vars(formula.body) - set(formula.params)) |
                free_fo_vars(formula.scope))
    result = frozenset()
    for child in formula.children:
        result |= free_fo_vars(child)
    return result


def free_so_vars(formula: Formula) -> FrozenSet[str]:
    '''
    Predicate names occurring free in ``formula``

    Members of an explicit ``sep-on`` predicate set count as occurrences.
    '''
    if isinstance(formula, Atom):
        return frozenset((formula.pred, ))
    if isinstance(formula, SO_BINDERS):
        return free_so_vars(formula.body) - {formula.pred}
    if isinstance(formula, LfpAtom):
        return free_so_vars(formula.body) - {formula.pred}
    if isinstance(formula, LetRec):
        return ((free_so_vars(formula.body) | free_so_vars(formula.scope)) -
                {formula.pred})
    result = frozenset()
    if isinstance(formula, SpatialAnd) and formula.sigma is not None:
        result = formula.sigma.members
    for child in formula.children:
        result |= free_so_vars(child)
    return result


def bound_so_vars(formula: Formula) -> FrozenSet[str]:
    'Predicate names introduced by some second-order binder in ``formula``'
    return frozenset(
        node.pred for node in formula.walk()
        if isinstance(node, SO_BINDERS + FIXPOINT_TYPES)
    )


def so_var_names(formula: Formula) -> FrozenSet[str]:
    'Every predicate name in ``formula``, free or bound'
    return free_so_vars(formula) | bound_so_vars(formula)


def fo_var_names(formula: Formula) -> FrozenSet[str]:
    'Every first-order variable name in ``formula``, free or bound'
    names = set()
    for node in formula.walk():
        if isinstance(node, Eq):
            names.update((node.left, node.right))
        elif isinstance(node, Atom):
            names.update(node.args)
        elif isinstance(node, FO_BINDERS):
            names.add(node.var)
        elif isinstance(node, LfpAtom):
            names.update(node.params + node.args)
        elif isinstance(node, LetRec):
            names.update(node.params)
    return frozenset(names)


def predicate_arities(formula: Formula) -> Dict[str, int]:
    '''
    Arity of every predicate name in ``formula``, read from atoms and binders

    Raises
    ------
    ArityError
        If one name is used with two different arities
    '''
    arities = {}

    def record(name, arity):
        if arities.setdefault(name, arity) != arity:
            raise ArityError(f'{name} is used with arities {arities[name]} '
                             f'and {arity}')

    for node in formula.walk():
        if isinstance(node, Atom):
            record(node.pred, len(node.args))
        elif isinstance(node, SO_BINDERS):
            record(node.pred, node.arity)
        elif isinstance(node, FIXPOINT_TYPES):
            record(node.pred, len(node.params))
    return arities


def node_count(formula: Formula) -> int:
    return sum(1 for _ in formula.walk())


# Fresh names and renaming
# -----------------------------------------------------------------------------

def fresh_name(base: str, taken) -> str:
    '''
    ``base`` + ``_`` + the least positive counter not in ``taken``

    A base that already ends in ``_<digits>`` keeps counting from its stem,
    so renaming ``P_1`` gives ``P_2`` rather than ``P_1_1``.
    '''
    match = _RE_SUFFIXED.match(base)
    if match and match.group('base'):
        base = match.group('base')
    for counter in itertools.count(1):
        candidate = f'{base}_{counter}'
        if candidate not in taken:
            return candidate


def _rename_free_pred(formula: Formula, old: str, new: str) -> Formula:
    'Replace free occurrences of predicate ``old``; no checks'
    if isinstance(formula, Atom):
        if formula.pred == old:
            return Atom(new, formula.args)
        return formula
    if isinstance(formula, SO_BINDERS) and formula.pred == old:
        return formula
    if isinstance(formula, LfpAtom) and formula.pred == old:
        return formula
    if isinstance(formula, LetRec) and formula.pred == old:
        return formula
    if isinstance(formula, SpatialAnd) and formula.sigma is not None:
        if old in formula.sigma:
            members = (formula.sigma.members - {old}) | {new}
            formula = dataclasses.replace(formula,
                                          sigma=PredicateSet(members))
    return formula.map_children(
        lambda child: _rename_free_pred(child, old, new))


def substitute_predicate(formula: Formula, old: str, new: str, *,
                         vocab: Optional[Vocabulary] = None) -> Formula:
    '''
    Rename the free predicate ``old`` to ``new``

    Binders for ``old`` are not traversed past.  For every relation r,
    evaluating the result with ``new := r`` equals evaluating ``formula`` with
    ``old := r``.

    Parameters
    ----------
    formula : Formula
    old : str
        The predicate to replace
    new : str
        The replacement name; it must not occur in ``formula``
    vocab : Vocabulary, optional
        If given, the declared arities of ``old`` and ``new`` must agree

    Raises
    ------
    ValueError
        If ``new`` already occurs in ``formula``
    ArityError
        If the arities of ``old`` and ``new`` differ
    '''
    if new in so_var_names(formula):
        raise ValueError(f'{new} already occurs in the formula')
    if vocab is not None and old in vocab and new in vocab:
        if vocab.arity(old) != vocab.arity(new):
            raise ArityError(f'Cannot substitute {new}/{vocab.arity(new)} for '
                             f'{old}/{vocab.arity(old)}')
    return _rename_free_pred(formula, old, new)


def rename_bound_so(formula: Formula) -> Formula:
    '''
    Alpha-rename second-order binders so that all bound names are pairwise
    distinct and distinct from the free ones

    Names that are bound once and never free are kept.  Every binder of a
    clashing name is renamed to ``<name>_<k>``, with the least counter not
    already used anywhere in the formula, in pre-order.
    '''
    free = free_so_vars(formula)
    binder_counts = {}
    for node in formula.walk():
        if isinstance(node, SO_BINDERS + FIXPOINT_TYPES):
            binder_counts[node.pred] = binder_counts.get(node.pred, 0) + 1

    clashing = {name for name, count in binder_counts.items()
                if count > 1 or name in free}
    if not clashing:
        return formula

    taken = set(so_var_names(formula))

    def rename(node):
        if isinstance(node, SO_BINDERS + FIXPOINT_TYPES) and \
                node.pred in clashing:
            new = fresh_name(node.pred, taken)
            taken.add(new)
            logger.debug('Renaming bound predicate %s to %s', node.pred, new)
            if isinstance(node, LetRec):
                node = dataclasses.replace(
                    node, pred=new,
                    body=_rename_free_pred(node.body, node.pred, new),
                    scope=_rename_free_pred(node.scope, node.pred, new))
            else:
                node = dataclasses.replace(
                    node, pred=new,
                    body=_rename_free_pred(node.body, node.pred, new))
        return node.map_children(rename)

    return rename(formula)


def substitute_var(formula: Formula, old: str, new: str) -> Formula:
    '''
    Capture-avoiding replacement of the free first-order variable ``old`` by
    ``new``
    '''
    def swap(name):
        return new if name == old else name

    if old == new:
        return formula
    if isinstance(formula, Eq):
        return Eq(swap(formula.left), swap(formula.right))
    if isinstance(formula, Atom):
        return Atom(formula.pred, tuple(swap(arg) for arg in formula.args))
    if isinstance(formula, FO_BINDERS):
        if formula.var == old:
            return formula
        if formula.var == new and old in free_fo_vars(formula.body):
            taken = fo_var_names(formula) | {old, new}
            var = fresh_name(formula.var, taken)
            body = substitute_var(formula.body, formula.var, var)
            formula = dataclasses.replace(formula, var=var, body=body)
        return dataclasses.replace(
            formula, body=substitute_var(formula.body, old, new))
    if isinstance(formula, (LfpAtom, LetRec)):
        params, body = formula.params, formula.body
        if old not in params:
            if new in params and old in free_fo_vars(body):
                taken = fo_var_names(formula) | {old, new}
                fresh = fresh_name(new, taken)
                body = substitute_var(body, new, fresh)
                params = tuple(fresh if p == new else p for p in params)
            body = substitute_var(body, old, new)
        if isinstance(formula, LfpAtom):
            return LfpAtom(formula.pred, params, body,
                           tuple(swap(arg) for arg in formula.args))
        return LetRec(formula.pred, params, body,
                      substitute_var(formula.scope, old, new))
    return formula.map_children(lambda child: substitute_var(child, old, new))


def expand_letrec(formula: Formula) -> Formula:
    '''
    Replace each ``letrec P(x̄) = B in G`` by ``G[P := lfp P x̄ B]``

    Binders of ``G`` that would capture a free name of the fixpoint term are
    renamed first.
    '''
    if isinstance(formula, LetRec):
        body = expand_letrec(formula.body)
        scope = expand_letrec(formula.scope)
        return _plug_lfp(scope, formula.pred, formula.params, body)
    return formula.map_children(expand_letrec)


def _plug_lfp(formula, pred, params, body):
    term_fo = free_fo_vars(body) - set(params)
    term_so = free_so_vars(body) - {pred}

    def plug(node):
        if isinstance(node, Atom) and node.pred == pred:
            return LfpAtom(pred, params, body, node.args)
        if isinstance(node, SO_BINDERS + FIXPOINT_TYPES):
            if node.pred == pred:
                return node
            if node.pred in term_so:
                taken = so_var_names(node) | so_var_names(body) | {pred}
                new = fresh_name(node.pred, taken)
                if isinstance(node, LetRec):
                    node = dataclasses.replace(
                        node, pred=new,
                        body=_rename_free_pred(node.body, node.pred, new),
                        scope=_rename_free_pred(node.scope, node.pred, new))
                else:
                    node = dataclasses.replace(
                        node, pred=new,
                        body=_rename_free_pred(node.body, node.pred, new))
        if isinstance(node, FO_BINDERS) and node.var in term_fo:
            taken = fo_var_names(node) | fo_var_names(body)
            var = fresh_name(node.var, taken)
            node = dataclasses.replace(
                node, var=var, body=substitute_var(node.body, node.var, var))
        if isinstance(node, (LfpAtom, LetRec)) and \
                set(node.params) & term_fo:
            taken = set(fo_var_names(node) | fo_var_names(body))
            new_params = []
            new_body = node.body
            for param in node.params:
                if param in term_fo:
                    fresh = fresh_name(param, taken)
                    taken.add(fresh)
                    new_body = substitute_var(new_body, param, fresh)
                    param = fresh
                new_params.append(param)
            node = dataclasses.replace(node, params=tuple(new_params),
                                       body=new_body)
        return node.map_children(plug)

    return plug(formula)


# Polarity
# -----------------------------------------------------------------------------

def _polarities(formula: Formula, pred: str, positive: bool) -> Iterator[bool]:
    'Yield the polarity of every free occurrence of ``pred``'
    if isinstance(formula, Atom):
        if formula.pred == pred:
            yield positive
        return
    if isinstance(formula, SO_BINDERS + FIXPOINT_TYPES) and \
            formula.pred == pred:
        return
    if isinstance(formula, Not):
        yield from _polarities(formula.body, pred, not positive)
    elif isinstance(formula, Implies):
        yield from _polarities(formula.left, pred, not positive)
        yield from _polarities(formula.right, pred, positive)
    elif isinstance(formula, SpatialImpl):
        yield from _polarities(formula.left, pred, not positive)
        yield from _polarities(formula.right, pred, positive)
    elif isinstance(formula, (Iff, ExistsExactly)):
        for child in formula.children:
            for polarity in _polarities(child, pred, positive):
                yield polarity
                yield not polarity
    else:
        for child in formula.children:
            yield from _polarities(child, pred, positive)


def check_positivity(formula: Formula, pred: str) -> bool:
    '''
    True iff every free occurrence of ``pred`` sits under an even number of
    negations

    ``Iff`` and exact counting contain their operands in both polarities; the
    left side of an implication or spatial implication is negative.
    '''
    return all(_polarities(formula, pred, True))


# Desugaring
# -----------------------------------------------------------------------------

def desugar(formula: Formula) -> Formula:
    '''
    Rewrite every abbreviation into core variants

    ``∀`` becomes ``¬∃¬``, ``∃^{=c}`` becomes ``∃^{≥c} ∧ ¬∃^{≥c+1}``, and the
    propositional abbreviations use ``¬`` and ``∧`` only.
    '''
    formula = formula.map_children(desugar)
    if isinstance(formula, Falsum):
        return Not(Verum())
    if isinstance(formula, Or):
        return Not(And(Not(formula.left), Not(formula.right)))
    if isinstance(formula, Implies):
        return Not(And(formula.left, Not(formula.right)))
    if isinstance(formula, Iff):
        return And(Not(And(formula.left, Not(formula.right))),
                   Not(And(formula.right, Not(formula.left))))
    if isinstance(formula, ForallFO):
        return Not(ExistsFO(formula.var, Not(formula.body)))
    if isinstance(formula, ForallSO):
        return Not(ExistsSO(formula.pred, formula.arity, Not(formula.body)))
    if isinstance(formula, ExistsExactly):
        return And(CountExists(formula.count, formula.var, formula.body),
                   Not(CountExists(formula.count + 1, formula.var,
                                   formula.body)))
    return formula


def is_core(formula: Formula) -> bool:
    return all(isinstance(node, CORE_TYPES) for node in formula.walk())


def check_arities(formula: Formula, vocab: Vocabulary):
    '''
    Check every free atom against ``vocab`` and every bound atom against its
    binder

    Raises
    ------
    ArityError
    '''
    def check(node, scope):
        if isinstance(node, Atom):
            expected = scope.get(node.pred)
            if expected is None and node.pred in vocab:
                expected = vocab.arity(node.pred)
            if expected is not None and expected != len(node.args):
                raise ArityError(
                    f'{node.pred} has arity {expected} but is applied to '
                    f'{len(node.args)} arguments')
            return
        if isinstance(node, SO_BINDERS):
            scope = dict(scope, **{node.pred: node.arity})
        elif isinstance(node, LfpAtom):
            scope = dict(scope, **{node.pred: len(node.params)})
        elif isinstance(node, LetRec):
            scope = dict(scope, **{node.pred: len(node.params)})
        for child in node.children:
            check(child, scope)

    check(formula, {})
