'''
Formula collections used by the acceptance checks and the test suite, kept
as concrete syntax.
'''
import functools
from typing import List, Tuple

from .parser import parse_formula, parse_vocabulary
from .syntax import Formula, Vocabulary

SPATIAL_SIG = '(sig (P 1) (Q 1) (E 2))'
UNARY_SIG = '(sig (P 1) (Q 1))'
LFP_UNARY_SIG = '(sig (Q 1) (R 1))'
EDGE_SIG = '(sig (E 2))'
FOREST_SIG = '(sig (P 1) (E 2))'
TWO_BINARY_SIG = '(sig (P 2) (Q 2))'

EXACTLY_ONE_EDGE = '''
(and (exists x (exists y (E x y)))
     (and (not (exists-ge 2 x (exists y (E x y))))
          (forall x (not (exists-ge 2 y (E x y))))))
'''

TRANSITIVE_CLOSURE = \
    '(lfp T (x y) (or (E x y) (exists z (and (E x z) (T z y)))) (u v))'

#: spatial formulas over P, Q (unary) and E (binary)
SPATIAL = (
    '(sep (P x) (Q x))',
    '(sep (P x) true)',
    '(sep (P x) (P x))',
    '(sep (exists x (P x)) (exists x (P x)))',
    '(sep (forall x (not (P x))) (exists x (P x)))',
    '(sep-on (P) (exists x (P x)) (exists x (P x)))',
    '(sep-on (P) (P x) (not (P x)))',
    '(sep-on (P Q) (P x) (Q x))',
    '(sep (and (P x) (not (Q x))) (Q x))',
    '(sep (not (P x)) (not (Q x)))',
    '(wand (P x) (P x))',
    '(wand (exists x (P x)) (exists x (P x)))',
    '(wand (forall x (P x)) (forall x (P x)))',
    '(wand (Q x) (sep (Q x) true))',
    '(sep (sep (P x) (Q x)) true)',
    '(sep-on (Q) (forall y (not (Q y))) (Q x))',
    '(not (sep (P x) (not (P x))))',
    '(sep (exists-ge 2 y (P y)) (forall y (not (P y))))',
    '(sep (exists-exactly 1 y (P y)) (exists-exactly 1 y (P y)))',
    '(or (sep (P x) (Q x)) (wand (P x) false))',
    '(sep (exists y (E x y)) (exists y (E y x)))',
    '(sep (E x x) true)',
    '(sep-on (E) (exists y (E x y)) (forall y (not (E x y))))',
    '(sep-on (P) (and (P x) (exists y (E x y))) '
    '(exists y (and (P y) (E y x))))',
    '(sep (forall y (not (E x y))) (exists y (E y y)))',
    '(wand (E x x) (exists y (E y y)))',
    f'(sep {EXACTLY_ONE_EDGE} {EXACTLY_ONE_EDGE})',
    '(sep-on (E) (E x x) (not (E x x)))',
    '(wand (exists y (E y x)) (exists y (E y x)))',
    '(sep (and (P x) (E x x)) (Q x))',
    '(sep-on (P Q) (forall y (iff (P y) (Q y))) (exists y (E y x)))',
    '(sep (exists y (and (P y) (E y y))) (not (exists y (E y y))))',
)

#: second-order formulas over P and Q
SECOND_ORDER = (
    '(exists2 R (forall x (iff (R x) (not (P x)))))',
    '(exists2 R (and (exists x (R x)) (forall x (implies (R x) (P x)))))',
    '(forall2 R (implies (forall x (R x)) (exists x (R x))))',
    '(exists2 R (exists2 S (forall x (and (iff (R x) (P x)) '
    '(iff (S x) (Q x))))))',
    '(forall2 R (or (exists x (R x)) (forall x (not (R x)))))',
    '(exists2 R (and (R x) (not (P x))))',
    '(exists2 R (exists-exactly 1 x (R x)))',
    '(forall2 R (implies (exists-exactly 1 x (R x)) '
    '(exists x (and (R x) (P x)))))',
    '(exists2 R (forall x (iff (R x) (and (P x) (Q x)))))',
    '(exists2 R (and (forall x (implies (P x) (R x))) '
    '(not (exists x (and (R x) (Q x))))))',
    '(exists2 R (exists-ge 2 x (R x)))',
    '(forall2 R (exists2 S (forall x (iff (S x) (not (R x))))))',
    '(exists2 R (forall2 S (implies (forall x (implies (S x) (R x))) '
    '(forall x (implies (S x) (P x))))))',
    '(exists2 Z (and (Z) (P x)))',
    '(exists2 R (and (exists x (and (R x) (P x))) '
    '(exists x (and (R x) (not (P x))))))',
    '(not (exists2 R (forall x (and (R x) (not (R x))))))',
    '(exists2 R (forall x (exists y (and (R y) (iff (R x) (Q x))))))',
    '(exists2 F (forall x (exists y (F x y))))',
    '(exists2 F (and (forall x (forall y (implies (F x y) (F y x)))) '
    '(exists x (F x x))))',
    '(forall2 R (implies (exists x (R x)) (exists x (R x))))',
    '(exists2 R (exists2 S (and (forall x (iff (R x) (not (S x)))) '
    '(and (exists x (R x)) (exists x (S x))))))',
    '(exists2 R (and (forall x (iff (R x) (P x))) '
    '(exists2 S (forall x (iff (S x) (and (R x) (Q x)))))))',
)

#: fixpoint formulas with the signature their structures interpret
FIXPOINTS = (
    ('(lfp S (x) (or (Q x) (S x)) (y))', LFP_UNARY_SIG),
    ('(lfp S (x) (S x) (y))', LFP_UNARY_SIG),
    ('(lfp S (x) true (y))', LFP_UNARY_SIG),
    ('(lfp S (x) (or (Q x) (exists z (and (S z) (R x)))) (y))',
     LFP_UNARY_SIG),
    ('(lfp S (x) (and (R x) (exists z (or (Q z) (S z)))) (y))',
     LFP_UNARY_SIG),
    ('(exists y (lfp S (x) (or (Q x) (and (R x) (exists z (S z)))) (y)))',
     LFP_UNARY_SIG),
    ('(forall y (implies (Q y) (lfp S (x) (or (Q x) (S x)) (y))))',
     LFP_UNARY_SIG),
    ('(letrec S (x) (or (Q x) (S x)) (forall y (iff (S y) (Q y))))',
     LFP_UNARY_SIG),
    ('(lfp Z () (exists x (Q x)) ())', LFP_UNARY_SIG),
    ('(letrec S (x) (or (R x) (exists y (and (Q y) (S y)))) '
     '(exists x (S x)))', LFP_UNARY_SIG),
    (TRANSITIVE_CLOSURE, EDGE_SIG),
    ('(lfp T (x y) (or (= x y) (exists z (and (E x z) (T z y)))) (u v))',
     EDGE_SIG),
    ('(exists u (lfp S (x) (or (forall y (not (E y x))) '
     '(exists y (and (E y x) (S y)))) (u)))', EDGE_SIG),
)

#: (F1, F2, F3) over P and Q for the adjunction of spatial conjunction and
#: spatial implication
ADJUNCTION_TRIPLES = (
    ('(P x)', '(Q x)', '(sep (P x) (Q x))'),
    ('true', 'true', 'true'),
    ('(exists x (P x))', '(exists x (P x))', '(exists-ge 2 x (P x))'),
    ('(P x)', '(P x)', 'false'),
    ('(forall x (not (P x)))', '(P x)', '(P x)'),
    ('(Q x)', 'true', '(Q x)'),
    ('(exists x (Q x))', '(forall x (not (Q x)))', '(exists x (Q x))'),
    ('(P x)', '(not (P x))', '(exists x (P x))'),
    ('(forall x (not (Q x)))', '(forall x (not (P x)))',
     '(forall x (and (not (P x)) (not (Q x))))'),
    ('(exists-exactly 1 x (P x))', '(exists-exactly 1 x (P x))',
     '(exists-exactly 2 x (P x))'),
    ('(Q x)', '(P x)', '(or (P x) (Q x))'),
)

#: first-order sentences over E using three variable names
THREE_VARIABLE = (
    '(exists x (exists y (exists z (and (E x y) (E y z)))))',
    '(exists x (exists y (exists z (and (E x y) (and (E y z) (E z x))))))',
    '(forall x (exists y (exists z (and (E x y) (E y z)))))',
    '(exists x (exists y (exists z (and (not (= x y)) '
    '(and (not (= y z)) (not (= x z)))))))',
    '(forall x (forall y (forall z (implies (and (E x y) (E y z)) '
    '(E x z)))))',
    '(exists x (forall y (forall z (implies (E y z) (= y x)))))',
    '(exists x (exists y (and (E x y) (forall z (not (E z x))))))',
    '(forall x (forall y (forall z (implies (and (E x y) (E x z)) '
    '(= y z)))))',
    '(exists x (exists y (exists z (and (E x y) (and (E x z) '
    '(not (= y z)))))))',
    '(and (exists x (exists y (E x y))) (forall x (forall y (forall z '
    '(implies (and (E x y) (E y z)) (not (E x z)))))))',
    '(exists x (exists y (exists z (and (E x x) (not (E y z))))))',
)

#: monadic second-order quantifiers over two-variable matrices without
#: nested quantifiers, over P, Q and E
MONADIC_UNNESTED = (
    '(exists2 R (and (exists x (R x)) (forall x (implies (R x) (P x)))))',
    '(exists2 R (exists-ge 2 x (and (R x) (Q x))))',
    '(forall2 R (or (exists x (R x)) (forall x (not (R x)))))',
    '(exists2 R (exists2 S (and (forall x (iff (R x) (not (S x)))) '
    '(exists x (S x)))))',
    '(exists2 R (forall x (iff (R x) (P x))))',
    '(exists2 R (and (exists-exactly 1 x (R x)) '
    '(forall y (implies (R y) (Q y)))))',
    '(forall2 R (implies (exists-ge 2 x (R x)) '
    '(exists x (and (R x) (P x)))))',
    '(exists2 R (and (R x) (exists y (and (R y) (not (= x y))))))',
    '(exists2 R (exists2 S (forall x (or (R x) (S x)))))',
    '(and (exists x (P x)) (exists2 R (forall y (implies (R y) (Q y)))))',
    '(exists2 Z (and (Z) (exists x (P x))))',
    '(exists2 R (and (E x x) (forall y (implies (R y) (E y y)))))',
)

#: formulas splitting only the unary P, evaluated over forests of E
FOREST = (
    'true',
    '(exists x (not (= x x)))',
    '(sep-on (P) (exists x (P x)) (exists x (P x)))',
    '(sep-on (P) (forall x (not (P x))) '
    '(exists x (and (P x) (exists y (E y x)))))',
    '(sep-on (P) (exists x (and (P x) (forall y (not (E y x))))) '
    '(exists x (P x)))',
    '(sep-on (P) (exists-exactly 1 x (P x)) '
    '(forall x (implies (P x) (exists y (E x y)))))',
    '(not (sep-on (P) (exists x (P x)) (forall x (not (P x)))))',
    '(sep-on (P) (forall x (implies (P x) (exists y (and (E x y) (P y))))) '
    '(exists x (P x)))',
    '(exists x (sep-on (P) (P x) (exists y (and (E x y) (P y)))))',
    '(sep-on (P) (sep-on (P) (exists x (P x)) (exists x (P x))) '
    '(exists x (P x)))',
    '(forall x (or (P x) (sep-on (P) true (exists y (E y x)))))',
)


@functools.lru_cache(maxsize=None)
def vocabulary(sig: str) -> Vocabulary:
    return parse_vocabulary(sig)


def formulas(texts, sig: str) -> List[Formula]:
    'Parse ``texts`` against the signature text ``sig``'
    vocab = vocabulary(sig)
    return [parse_formula(text, vocab) for text in texts]


def spatial_signature(text: str) -> str:
    'The smallest signature for a spatial corpus entry'
    return SPATIAL_SIG if '(E ' in text else UNARY_SIG


def fixpoints() -> List[Tuple[Formula, Vocabulary]]:
    return [(parse_formula(text, vocabulary(sig)), vocabulary(sig))
            for text, sig in FIXPOINTS]
