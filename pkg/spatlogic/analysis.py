'''
Syntactic metrics and fragment membership.

Depths are measured on the desugared core, so ``∀x`` counts exactly like
``¬∃x¬`` and an exact counting quantifier like one counting quantifier.  A
block of k quantifiers is k levels deep; fixpoint parameters count as k
binders over the fixpoint body.
'''
import enum
import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from .syntax import (SO_BINDERS, CountExists, ExistsFO, Formula, LetRec,
                     LfpAtom, SpatialAnd, SpatialImpl, Vocabulary, desugar,
                     fo_var_names, free_so_vars, predicate_arities)

logger = logging.getLogger(__name__)


class Fragment(str, enum.Enum):
    #: spatial conjunction over operands without nested quantifiers, in
    #: two-variable logic with counting
    FACT1 = 'FACT1'
    #: monadic second-order quantification over unnested counting formulas
    PROP5_INPUT = 'PROP5_INPUT'
    TWO_VAR = 'TWO_VAR'
    #: monadic second-order quantifiers and unary-only splitting
    MSO = 'MSO'


@dataclass(frozen=True)
class FragmentReport:
    '''
    Syntactic measurements of one formula

    Attributes
    ----------
    fo_depth : int
        Maximal nesting of first-order and counting quantifiers
    counting_depth : int
        Maximal nesting of counting quantifiers alone
    fo_var_count : int
        Distinct first-order variable names, free or bound
    is_monadic_so : bool
        Every second-order binder (fixpoints included) has arity at most 1
    spatial_operand_max_fo_depth : int
        Largest `fo_depth` of an operand of a spatial connective, 0 if none
    uses_only_unary_split : bool
        Every spatial connective splits predicates of arity at most 1 only
    node_count : int
    '''
    fo_depth: int
    counting_depth: int
    fo_var_count: int
    is_monadic_so: bool
    spatial_operand_max_fo_depth: int
    uses_only_unary_split: bool
    node_count: int = 0


@dataclass(frozen=True)
class FragmentCheck:
    'Outcome of `in_fragment`; violations are paths like ``body/left``'
    fragment: Fragment
    ok: bool
    violations: Tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self):
        return self.ok


def _depth(formula: Formula, counting_only: bool) -> int:
    if isinstance(formula, LfpAtom):
        own = 0 if counting_only else len(formula.params)
        return own + _depth(formula.body, counting_only)
    if isinstance(formula, LetRec):
        own = 0 if counting_only else len(formula.params)
        return max(own + _depth(formula.body, counting_only),
                   _depth(formula.scope, counting_only))

    if isinstance(formula, CountExists):
        own = 1
    elif isinstance(formula, ExistsFO):
        own = 0 if counting_only else 1
    else:
        own = 0
    return own + max((_depth(child, counting_only)
                      for child in formula.children), default=0)


def fo_depth(formula: Formula) -> int:
    return _depth(desugar(formula), counting_only=False)


def counting_depth(formula: Formula) -> int:
    return _depth(desugar(formula), counting_only=True)


def walk_paths(formula: Formula, path: Tuple[str, ...] = (),
               scope: Optional[Dict[str, int]] = None
               ) -> Iterator[Tuple[str, Formula, Dict[str, int]]]:
    '''
    Pre-order traversal yielding ``(path, node, scope)``

    ``scope`` maps the predicates bound above ``node`` to their arity.
    '''
    scope = scope or {}
    yield '/'.join(path), formula, scope
    if isinstance(formula, SO_BINDERS):
        scope = dict(scope, **{formula.pred: formula.arity})
    elif isinstance(formula, (LfpAtom, LetRec)):
        scope = dict(scope, **{formula.pred: len(formula.params)})
    for attr in formula._children:
        yield from walk_paths(getattr(formula, attr), path + (attr, ), scope)


def _split_arities(node, scope, arities) -> List[int]:
    if isinstance(node, SpatialAnd) and node.sigma is not None:
        return [scope.get(name, arities.get(name, 0)) for name in node.sigma]
    return list(arities.values()) + list(scope.values())


def _binder_arity(node) -> Optional[int]:
    if isinstance(node, SO_BINDERS):
        return node.arity
    if isinstance(node, (LfpAtom, LetRec)):
        return len(node.params)
    return None


def classify(formula: Formula,
             vocab: Optional[Vocabulary] = None) -> FragmentReport:
    '''
    Measure ``formula``

    Parameters
    ----------
    formula : Formula
    vocab : Vocabulary, optional
        The signature that spatial connectives without an explicit predicate
        set split; defaults to the free predicates of ``formula``
    '''
    arities = _signature_arities(formula, vocab)
    operand_depth = 0
    monadic = True
    unary_split = True
    nodes = 0
    for _, node, scope in walk_paths(formula):
        nodes += 1
        arity = _binder_arity(node)
        if arity is not None and arity > 1:
            monadic = False
        if isinstance(node, (SpatialAnd, SpatialImpl)):
            operand_depth = max(operand_depth, fo_depth(node.left),
                                fo_depth(node.right))
            if any(k > 1 for k in _split_arities(node, scope, arities)):
                unary_split = False

    return FragmentReport(
        fo_depth=fo_depth(formula),
        counting_depth=counting_depth(formula),
        fo_var_count=len(fo_var_names(formula)),
        is_monadic_so=monadic,
        spatial_operand_max_fo_depth=operand_depth,
        uses_only_unary_split=unary_split,
        node_count=nodes,
    )


def _signature_arities(formula, vocab) -> Dict[str, int]:
    arities = {}
    if vocab is not None:
        arities.update((sym.name, sym.arity) for sym in vocab)
    used = predicate_arities(formula)
    for name in free_so_vars(formula):
        if name not in arities and name in used:
            arities[name] = used[name]
    return arities


def in_fragment(formula: Formula, fragment,
                vocab: Optional[Vocabulary] = None) -> FragmentCheck:
    '''
    Check membership in one of the `Fragment` classes

    Returns
    -------
    FragmentCheck
        ``ok`` plus the paths of the offending subformulas; a violation of a
        whole-formula condition is reported at the root path ``''``
    '''
    fragment = Fragment(fragment)
    arities = _signature_arities(formula, vocab)
    violations = []

    if fragment in (Fragment.FACT1, Fragment.PROP5_INPUT, Fragment.TWO_VAR):
        if len(fo_var_names(formula)) > 2:
            violations.append('')

    for path, node, scope in walk_paths(formula):
        prefix = f'{path}/' if path else ''
        if fragment == Fragment.FACT1:
            if isinstance(node, (SpatialAnd, SpatialImpl)):
                violations.extend(f'{prefix}{side}'
                                  for side in ('left', 'right')
                                  if fo_depth(getattr(node, side)) > 1)
        elif fragment == Fragment.PROP5_INPUT:
            if isinstance(node, (SpatialAnd, SpatialImpl, LfpAtom, LetRec)):
                violations.append(path)
            elif isinstance(node, SO_BINDERS):
                if node.arity > 1:
                    violations.append(path)
                elif fo_depth(node.body) > 1:
                    violations.append(f'{prefix}body')
        elif fragment == Fragment.MSO:
            arity = _binder_arity(node)
            if arity is not None and arity > 1:
                violations.append(path)
            elif isinstance(node, (SpatialAnd, SpatialImpl)) and \
                    any(k > 1 for k in _split_arities(node, scope, arities)):
                violations.append(path)

    if violations:
        logger.debug('%s violations: %s', fragment.value, violations)
    return FragmentCheck(fragment, not violations, tuple(violations))


def format_report(report: FragmentReport) -> str:
    'Flat ``key: value`` lines, one per metric'
    lines = []
    for key, value in asdict(report).items():
        if isinstance(value, bool):
            value = str(value).lower()
        lines.append(f'{key}: {value}')
    return '\n'.join(lines)
