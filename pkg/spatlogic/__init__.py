from ._version import __version__

from . import analysis
from . import evaluator
from . import forests
from . import modelfinder
from . import parser
from . import structures
from . import syntax
from . import translate

from .analysis import Fragment, FragmentReport, classify, in_fragment
from .evaluator import BudgetExceeded, EvalBudget, Evaluator, evaluate
from .forests import check_split_closure, enumerate_forests, eval_over_forests
from .modelfinder import (SearchResult, SearchStatus, count_models,
                          equiv_bounded, sat_bounded)
from .parser import (FormulaSyntaxError, parse_formula, parse_vocabulary,
                     print_formula)
from .structures import Structure, parse_structure, print_structure
from .syntax import Formula, PredicateSymbol, Vocabulary
from .translate import (lfp_to_sol, reduce_to_two_vars, sol_to_spatial,
                        spatial_to_sol, to_spatial)

__all__ = [
    '__version__',
    'analysis', 'evaluator', 'forests', 'modelfinder', 'parser',
    'structures', 'syntax', 'translate',

    'Fragment',
    'FragmentReport',
    'classify',
    'in_fragment',

    'BudgetExceeded',
    'EvalBudget',
    'Evaluator',
    'evaluate',

    'check_split_closure',
    'enumerate_forests',
    'eval_over_forests',

    'SearchResult',
    'SearchStatus',
    'count_models',
    'equiv_bounded',
    'sat_bounded',

    'FormulaSyntaxError',
    'parse_formula',
    'parse_vocabulary',
    'print_formula',

    'Structure',
    'parse_structure',
    'print_structure',

    'Formula',
    'PredicateSymbol',
    'Vocabulary',

    'lfp_to_sol',
    'reduce_to_two_vars',
    'sol_to_spatial',
    'spatial_to_sol',
    'to_spatial',
    ]
