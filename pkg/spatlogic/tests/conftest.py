import pytest

from ..parser import parse_vocabulary
from ..structures import Structure


@pytest.fixture(scope='session')
def unary_vocab():
    return parse_vocabulary('(sig (P 1) (Q 1))')


@pytest.fixture(scope='session')
def edge_vocab():
    return parse_vocabulary('(sig (E 2))')


@pytest.fixture(scope='session')
def spatial_vocab():
    return parse_vocabulary('(sig (P 1) (Q 1) (E 2))')


@pytest.fixture(scope='function')
def two_cycle(edge_vocab):
    'Two elements with an edge each way'
    return Structure(2, edge_vocab, relations={'E': [(0, 1), (1, 0)]})


@pytest.fixture(scope='function')
def path3(edge_vocab):
    return Structure(3, edge_vocab, relations={'E': [(0, 1), (1, 2)]})


@pytest.fixture(scope='function')
def unary_structure(unary_vocab):
    return Structure(3, unary_vocab, assignment={'x': 0},
                     relations={'P': [(0, ), (1, )], 'Q': [(2, )]})
