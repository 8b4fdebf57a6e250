'''
Concrete syntax: a parenthesized prefix notation for formulas, signatures and
(through :mod:`spatlogic.structures`) structure files.

Formulas::

    true  false  (= x y)  (P x1 ... xk)
    (and F G)  (or F G)  (not F)  (implies F G)  (iff F G)
    (exists x F)  (forall x F)  (exists-ge c x F)  (exists-exactly c x F)
    (exists2 P F)  (forall2 P F)  (exists2 (P k) F)  (forall2 (P k) F)
    (sep F G)  (sep-on (P1 ... Pm) F G)  (wand F G)
    (lfp P (x1 ... xk) F (y1 ... yk))  (letrec P (x1 ... xk) F G)

First-order variables start with a lowercase letter, predicates with an
uppercase letter.  A bare second-order binder takes its arity from the first
use in the body; ``(P k)`` states it.  ``;`` starts a comment running to
the end of the line.
'''
import logging
import re
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import pyparsing as pp

from .syntax import (And, ArityError, Atom, CountExists, Eq, ExistsExactly,
                     ExistsFO, ExistsSO, Falsum, ForallFO, ForallSO, Formula,
                     Iff, Implies, LetRec, LfpAtom, Not, Or, PredicateSet,
                     SpatialAnd, SpatialImpl, Verum, Vocabulary, free_so_vars,
                     predicate_arities)

logger = logging.getLogger(__name__)

_RE_VARIABLE = re.compile(r'^[a-z][A-Za-z0-9_]*$')
_RE_PREDICATE = re.compile(r'^[A-Z][A-Za-z0-9_]*$')

KEYWORDS = frozenset((
    'true', 'false', 'and', 'or', 'not', 'implies', 'iff', 'exists', 'forall',
    'exists-ge', 'exists-exactly', 'exists2', 'forall2', 'sep', 'sep-on',
    'wand', 'lfp', 'letrec',
))


class FormulaSyntaxError(ValueError):
    '''
    Malformed input, with the position of the offending token

    Attributes
    ----------
    msg : str
        The bare message
    loc : int
        Character offset into the input
    lineno, col : int
        1-based line and column of ``loc``
    '''
    def __init__(self, msg, text='', loc=0):
        self.msg = msg
        self.loc = loc
        self.lineno = pp.lineno(loc, text) if text else 1
        self.col = pp.col(loc, text) if text else 1
        super().__init__(f'{msg} (line {self.lineno}, column {self.col})')


# S-expression reader
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    text: str
    loc: int


@dataclass(frozen=True)
class SList:
    items: Tuple[Union[Token, 'SList'], ...]
    loc: int


def _make_token(instring, loc, tokens):
    return Token(tokens[0], loc)


def _make_list(instring, loc, tokens):
    return SList(tuple(tokens[0]), loc)


_COMMENT = pp.Regex(r';[^\n]*')
_ATOM = pp.Regex(r'[^\s();]+').setParseAction(_make_token)
_SEXPR = pp.Forward()
_LIST = pp.Group(pp.Suppress('(') + pp.ZeroOrMore(_SEXPR) +
                 pp.Suppress(')')).setParseAction(_make_list)
_SEXPR <<= _ATOM | _LIST
_SEXPR.ignore(_COMMENT)
_SEXPR.setName('s-expression')


def read_sexpr(text: str) -> Union[Token, SList]:
    '''
    Read exactly one s-expression from ``text``

    Raises
    ------
    FormulaSyntaxError
        On unbalanced parentheses, trailing input or empty input
    '''
    try:
        result = _SEXPR.parseString(text, parseAll=True)
    except pp.ParseBaseException as ex:
        raise FormulaSyntaxError(f'Syntax error: {ex.msg}', text,
                                 ex.loc) from None
    return result[0]


def expect_list(expr, text, what, length=None) -> SList:
    if not isinstance(expr, SList):
        raise FormulaSyntaxError(f'Expected {what}, found {expr.text!r}',
                                 text, expr.loc)
    if length is not None and len(expr.items) != length:
        raise FormulaSyntaxError(
            f'{what} takes {length - 1} arguments, found '
            f'{len(expr.items) - 1}', text, expr.loc)
    return expr


def expect_token(expr, text, what) -> Token:
    if not isinstance(expr, Token):
        raise FormulaSyntaxError(f'Expected {what}, found a list', text,
                                 expr.loc)
    return expr


def expect_int(expr, text, what, *, minimum=0) -> int:
    token = expect_token(expr, text, what)
    if not token.text.isdigit() or int(token.text) < minimum:
        raise FormulaSyntaxError(f'Expected {what}, found {token.text!r}',
                                 text, token.loc)
    return int(token.text)


def expect_variable(expr, text) -> str:
    token = expect_token(expr, text, 'a variable')
    if not _RE_VARIABLE.match(token.text) or token.text in KEYWORDS:
        raise FormulaSyntaxError(f'Not a variable name: {token.text!r}',
                                 text, token.loc)
    return token.text


def expect_predicate(expr, text) -> str:
    token = expect_token(expr, text, 'a predicate')
    if not _RE_PREDICATE.match(token.text):
        raise FormulaSyntaxError(f'Not a predicate name: {token.text!r}',
                                 text, token.loc)
    return token.text


# Formulas
# -----------------------------------------------------------------------------

class _FormulaReader:
    '''
    Converts an s-expression tree into a `Formula`

    ``scope`` maps predicates bound by an enclosing binder to a one-element
    list holding their arity (``None`` until the first use fixes it).
    '''
    _binary = {
        'and': And, 'or': Or, 'implies': Implies, 'iff': Iff,
        'sep': SpatialAnd, 'wand': SpatialImpl,
    }

    def __init__(self, text, vocab: Optional[Vocabulary]):
        self.text = text
        self.vocab = vocab
        self.inferred = {}

    def error(self, msg, expr):
        return FormulaSyntaxError(msg, self.text, expr.loc)

    def predicate_arity(self, name, scope):
        if name in scope:
            return scope[name][0]
        if self.vocab is not None:
            if name in self.vocab:
                return self.vocab.arity(name)
            return KeyError
        return self.inferred.get(name)

    def formula(self, expr, scope) -> Formula:
        text = self.text
        if isinstance(expr, Token):
            if expr.text == 'true':
                return Verum()
            if expr.text == 'false':
                return Falsum()
            raise self.error(f'Expected a formula, found {expr.text!r}', expr)

        if not expr.items:
            raise self.error('Empty formula', expr)

        head = expect_token(expr.items[0], text, 'an operator or predicate')
        args = expr.items[1:]
        op = head.text

        if _RE_PREDICATE.match(op):
            return self.atom(head, args, scope)
        if op == '=':
            expect_list(expr, text, '=', 3)
            return Eq(expect_variable(args[0], text),
                      expect_variable(args[1], text))
        if op in self._binary:
            expect_list(expr, text, op, 3)
            return self._binary[op](self.formula(args[0], scope),
                                    self.formula(args[1], scope))
        if op == 'not':
            expect_list(expr, text, op, 2)
            return Not(self.formula(args[0], scope))
        if op in ('exists', 'forall'):
            expect_list(expr, text, op, 3)
            cls = ExistsFO if op == 'exists' else ForallFO
            return cls(expect_variable(args[0], text),
                       self.formula(args[1], scope))
        if op in ('exists-ge', 'exists-exactly'):
            expect_list(expr, text, op, 4)
            cls = CountExists if op == 'exists-ge' else ExistsExactly
            return cls(expect_int(args[0], text, 'a positive count',
                                  minimum=1),
                       expect_variable(args[1], text),
                       self.formula(args[2], scope))
        if op in ('exists2', 'forall2'):
            expect_list(expr, text, op, 3)
            return self.so_quantifier(op, args, scope)
        if op == 'sep-on':
            expect_list(expr, text, op, 4)
            members = expect_list(args[0], text, 'a predicate list')
            names = []
            for item in members.items:
                name = expect_predicate(item, text)
                if self.predicate_arity(name, scope) is KeyError:
                    raise self.error(f'Undeclared predicate: {name}', item)
                names.append(name)
            return SpatialAnd(self.formula(args[1], scope),
                              self.formula(args[2], scope),
                              PredicateSet(frozenset(names)))
        if op in ('lfp', 'letrec'):
            expect_list(expr, text, op, 5)
            return self.fixpoint(op, args, scope)
        raise self.error(f'Unknown operator: {op!r}', head)

    def atom(self, head, args, scope):
        name = head.text
        variables = tuple(expect_variable(arg, self.text) for arg in args)
        arity = self.predicate_arity(name, scope)
        if arity is KeyError:
            raise self.error(f'Undeclared predicate: {name}', head)
        if arity is None:
            if name in scope:
                scope[name][0] = len(variables)
            else:
                self.inferred[name] = len(variables)
        elif arity != len(variables):
            raise FormulaSyntaxError(
                f'Arity mismatch: {name} has arity {arity}, used with '
                f'{len(variables)} arguments', self.text, head.loc)
        return Atom(name, variables)

    def so_quantifier(self, op, args, scope):
        binder = args[0]
        if isinstance(binder, SList):
            expect_list(binder, self.text, f'{op} binder', 2)
            name = expect_predicate(binder.items[0], self.text)
            cell = [expect_int(binder.items[1], self.text, 'an arity')]
        else:
            name = expect_predicate(binder, self.text)
            cell = [None]
        body = self.formula(args[1], dict(scope, **{name: cell}))
        arity = cell[0]
        if arity is None:
            outer = self.predicate_arity(name, scope)
            arity = outer if isinstance(outer, int) else 0
        cls = ExistsSO if op == 'exists2' else ForallSO
        return cls(name, arity, body)

    def fixpoint(self, op, args, scope):
        text = self.text
        name = expect_predicate(args[0], text)
        params = tuple(
            expect_variable(item, text)
            for item in expect_list(args[1], text, 'a variable list').items)
        if len(set(params)) != len(params):
            raise self.error(f'Repeated bound variable in {op} {name}',
                             args[1])
        inner = dict(scope, **{name: [len(params)]})
        body = self.formula(args[2], inner)
        if op == 'lfp':
            actuals = expect_list(args[3], text, 'an argument list')
            values = tuple(expect_variable(item, text)
                           for item in actuals.items)
            if len(values) != len(params):
                raise FormulaSyntaxError(
                    f'Arity mismatch: lfp {name} binds {len(params)} '
                    f'variables but is applied to {len(values)}', text,
                    actuals.loc)
            return LfpAtom(name, params, body, values)
        return LetRec(name, params, body, self.formula(args[3], inner))


def parse_formula(text: str, vocab: Optional[Vocabulary] = None) -> Formula:
    '''
    Parse one formula

    Parameters
    ----------
    text : str
        Formula text in the concrete grammar
    vocab : Vocabulary, optional
        Declares every free predicate.  If omitted, free predicates are
        accepted and their arity is fixed by their first use.

    Raises
    ------
    FormulaSyntaxError
        On syntax errors, undeclared predicates and arity mismatches
    '''
    reader = _FormulaReader(text, vocab)
    return reader.formula(read_sexpr(text), {})


def infer_vocabulary(formula: Formula,
                     base: Optional[Vocabulary] = None) -> Vocabulary:
    '''
    ``base`` extended by the free predicates of ``formula``, in order of first
    appearance
    '''
    vocab = base if base is not None else Vocabulary()
    free = free_so_vars(formula)
    arities = predicate_arities(formula)
    for node in formula.walk():
        if isinstance(node, Atom) and node.pred in free and \
                node.pred not in vocab:
            vocab = vocab.extended(node.pred, arities[node.pred])
    for name in sorted(free - set(vocab.names)):
        if name not in arities:
            raise ArityError(f'Cannot infer the arity of {name}')
        vocab = vocab.extended(name, arities[name])
    return vocab


def _print(formula, out):
    if isinstance(formula, Verum):
        out.append('true')
    elif isinstance(formula, Falsum):
        out.append('false')
    elif isinstance(formula, Eq):
        out.append(f'(= {formula.left} {formula.right})')
    elif isinstance(formula, Atom):
        out.append('(' + ' '.join((formula.pred, ) + formula.args) + ')')
    elif isinstance(formula, Not):
        out.append('(not ')
        _print(formula.body, out)
        out.append(')')
    elif isinstance(formula, SpatialAnd) and formula.sigma is not None:
        out.append('(sep-on (' + ' '.join(formula.sigma) + ') ')
        _print(formula.left, out)
        out.append(' ')
        _print(formula.right, out)
        out.append(')')
    elif isinstance(formula, tuple(_BINARY_KEYWORDS)):
        out.append(f'({_BINARY_KEYWORDS[type(formula)]} ')
        _print(formula.left, out)
        out.append(' ')
        _print(formula.right, out)
        out.append(')')
    elif isinstance(formula, (ExistsFO, ForallFO)):
        keyword = 'exists' if isinstance(formula, ExistsFO) else 'forall'
        out.append(f'({keyword} {formula.var} ')
        _print(formula.body, out)
        out.append(')')
    elif isinstance(formula, (CountExists, ExistsExactly)):
        keyword = ('exists-ge' if isinstance(formula, CountExists)
                   else 'exists-exactly')
        out.append(f'({keyword} {formula.count} {formula.var} ')
        _print(formula.body, out)
        out.append(')')
    elif isinstance(formula, (ExistsSO, ForallSO)):
        keyword = 'exists2' if isinstance(formula, ExistsSO) else 'forall2'
        out.append(f'({keyword} ({formula.pred} {formula.arity}) ')
        _print(formula.body, out)
        out.append(')')
    elif isinstance(formula, LfpAtom):
        out.append(f'(lfp {formula.pred} (' + ' '.join(formula.params) +
                   ') ')
        _print(formula.body, out)
        out.append(' (' + ' '.join(formula.args) + '))')
    elif isinstance(formula, LetRec):
        out.append(f'(letrec {formula.pred} (' + ' '.join(formula.params) +
                   ') ')
        _print(formula.body, out)
        out.append(' ')
        _print(formula.scope, out)
        out.append(')')
    else:
        raise TypeError(f'Not a formula: {formula!r}')


_BINARY_KEYWORDS = {
    And: 'and', Or: 'or', Implies: 'implies', Iff: 'iff', SpatialAnd: 'sep',
    SpatialImpl: 'wand',
}


def print_formula(formula: Formula) -> str:
    'Canonical text: single spaces, ``sep-on`` members sorted'
    out = []
    _print(formula, out)
    return ''.join(out)


# Signatures
# -----------------------------------------------------------------------------

def vocabulary_from_sexpr(expr, text) -> Vocabulary:
    'Read ``(sig (Name Arity) ...)`` from an already-read s-expression'
    sig = expect_list(expr, text, '(sig ...)')
    if not sig.items or expect_token(sig.items[0], text,
                                     'sig').text != 'sig':
        raise FormulaSyntaxError('Expected (sig ...)', text, sig.loc)
    symbols = []
    for item in sig.items[1:]:
        entry = expect_list(item, text, '(Name Arity)', 2)
        name = expect_predicate(entry.items[0], text)
        arity = expect_int(entry.items[1], text, 'an arity')
        if name in (sym for sym, _ in symbols):
            raise FormulaSyntaxError(f'Duplicate predicate symbol: {name}',
                                     text, entry.loc)
        symbols.append((name, arity))
    return Vocabulary.from_arities(symbols)


def parse_vocabulary(text: str) -> Vocabulary:
    return vocabulary_from_sexpr(read_sexpr(text), text)


def print_vocabulary(vocab: Vocabulary) -> str:
    return '(sig' + ''.join(f' ({sym.name} {sym.arity})'
                            for sym in vocab) + ')'
