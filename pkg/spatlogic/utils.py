import logging

import networkx


logger = logging.getLogger(__name__)


def edge_graph(nodes, edges):
    '''
    Directed graph over ``nodes`` with the given ``(src, dest)`` edges

    Parameters
    ----------
    nodes : iterable
        All vertices, including isolated ones
    edges : iterable of (src, dest)
        Directed edges; duplicates collapse into one edge
    '''
    dig = networkx.DiGraph()
    dig.add_nodes_from(nodes)
    dig.add_edges_from(edges)
    return dig


def find_cycle(dig):
    'A list of edges forming a directed cycle in ``dig``, or None'
    try:
        return networkx.find_cycle(dig)
    except networkx.NetworkXNoCycle:
        return None


def max_in_degree(dig):
    return max((degree for _, degree in dig.in_degree()), default=0)


def is_forest_graph(dig):
    '''
    True iff ``dig`` has no directed cycle and every node has at most one
    incoming edge

    Self-loops are cycles.  The graph without nodes counts as a forest.
    '''
    if not dig or networkx.is_branching(dig):
        return True
    logger.debug('Not a forest: in-degree %d, cycle %s', max_in_degree(dig),
                 find_cycle(dig))
    return False
