import argparse
import logging
import pathlib
import sys
from typing import Optional, Tuple

from . import acceptance
from .analysis import Fragment, classify, format_report, in_fragment
from .evaluator import BudgetExceeded, EvalBudget, Evaluator
from .forests import check_split_closure, enumerate_forests
from .modelfinder import SearchStatus, count_models, sat_bounded
from .parser import parse_formula, parse_vocabulary, print_formula
from .structures import parse_structure, print_structure
from .syntax import Vocabulary
from .translate import (lfp_to_sol, reduce_to_two_vars, sol_to_spatial,
                        spatial_to_sol)

logger = logging.getLogger(__name__)

TRANSLATIONS = {
    'sep2sol': spatial_to_sol,
    'sol2sep': sol_to_spatial,
    'lfp2sol': lambda formula, vocab: lfp_to_sol(formula),
    'twovar': reduce_to_two_vars,
}

DEFAULT_FOREST_SIG = '(sig (E 2))'


def read_text(source: str) -> str:
    '''
    Inline text if ``source`` starts with a parenthesis or names no file,
    otherwise the contents of the file
    '''
    if source.lstrip().startswith('('):
        return source
    path = pathlib.Path(source)
    if path.is_file():
        logger.debug('Reading %s', path)
        return path.read_text()
    return source


def _vocab(args) -> Optional[Vocabulary]:
    if args.vocab is None:
        return None
    return parse_vocabulary(read_text(args.vocab))


def _budget(args) -> EvalBudget:
    if args.budget is None:
        return EvalBudget()
    return EvalBudget.uniform(args.budget)


def _formula(args, vocab=None):
    if vocab is None:
        vocab = _vocab(args)
    return parse_formula(read_text(args.formula), vocab)


def cmd_eval(args) -> Tuple[int, str]:
    structure_vocab, e = parse_structure(read_text(args.structure))
    formula = _formula(args, structure_vocab)
    value = Evaluator(_budget(args)).evaluate(formula, e)
    return (0 if value else 1), str(value).lower()


def cmd_translate(args) -> Tuple[int, str]:
    vocab = _vocab(args)
    formula = _formula(args)
    translated = TRANSLATIONS[args.mode](formula, vocab)
    return 0, print_formula(translated)


def cmd_solve(args) -> Tuple[int, str]:
    formula = _formula(args)
    result = sat_bounded(formula, args.max_size, _vocab(args), _budget(args),
                         jobs=args.jobs)
    logger.info('Checked %d structures of sizes %s',
                result.structures_checked, result.sizes_tried)
    if result.status == SearchStatus.BUDGET:
        raise BudgetExceeded(f'Search stopped after '
                             f'{result.structures_checked} structures')
    if result.status == SearchStatus.WITNESS:
        return 0, f'WITNESS\n{print_structure(result.witness)}'
    return 1, 'EXHAUSTED'


def cmd_count(args) -> Tuple[int, str]:
    formula = _formula(args)
    count = count_models(formula, args.size, _vocab(args), _budget(args),
                         jobs=args.jobs)
    return 0, str(count)


def cmd_classify(args) -> Tuple[int, str]:
    vocab = _vocab(args)
    formula = _formula(args)
    member_of = [fragment.value for fragment in Fragment
                 if in_fragment(formula, fragment, vocab)]
    lines = [format_report(classify(formula, vocab)),
             f'fragments: {" ".join(member_of)}'.rstrip()]
    return 0, '\n'.join(lines)


def cmd_forests(args) -> Tuple[int, str]:
    vocab = parse_vocabulary(read_text(args.vocab or DEFAULT_FOREST_SIG))
    count = sum(1 for _ in enumerate_forests(vocab, args.size))
    closure = check_split_closure(vocab, args.size)
    lines = [f'forests: {count}']
    if closure.ok:
        lines.append('closure: OK')
        return 0, '\n'.join(lines)

    forest, _ = closure.counterexample
    lines.append('closure: FAILED')
    lines.append(print_structure(forest))
    return 1, '\n'.join(lines)


def cmd_selftest(args) -> Tuple[int, str]:
    results = acceptance.run_all(quick=args.quick, budget=_budget(args))
    lines = [result.summary() for result in results]
    for result in results:
        lines.extend(f'  {mismatch}' for mismatch in result.mismatches)
    return (0 if all(results) else 1), '\n'.join(lines)


COMMANDS = {
    'eval': cmd_eval,
    'translate': cmd_translate,
    'solve': cmd_solve,
    'count': cmd_count,
    'classify': cmd_classify,
    'forests': cmd_forests,
    'selftest': cmd_selftest,
}


def _build_arg_parser():
    parser = argparse.ArgumentParser()
    parser.description = ('spatlogic - spatial conjunction and second-order '
                          'logic on finite structures')

    parser.add_argument(
        '--log', '-l', dest='log_level',
        default='WARNING',
        type=str,
        help='Python logging level (e.g. DEBUG, INFO, WARNING)'
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        '--vocab',
        type=str,
        default=None,
        help='Signature file, or inline text such as "(sig (P 1) (E 2))"'
    )
    common.add_argument(
        '--budget',
        type=int,
        default=None,
        help='Limit on splits, extensions and structures checked'
    )
    common.add_argument(
        '--jobs',
        type=int,
        default=1,
        help='Worker processes for structure enumeration'
    )

    subparsers = parser.add_subparsers(dest='command', required=True)

    sub = subparsers.add_parser('eval', parents=[common],
                                help='Evaluate a formula on a structure')
    sub.add_argument('formula', type=str)
    sub.add_argument('structure', type=str)

    sub = subparsers.add_parser('translate', parents=[common],
                                help='Translate a formula')
    sub.add_argument('formula', type=str)
    sub.add_argument('--mode', choices=sorted(TRANSLATIONS), required=True)

    sub = subparsers.add_parser('solve', parents=[common],
                                help='Search for a model up to a size')
    sub.add_argument('formula', type=str)
    sub.add_argument('--max-size', type=int, required=True)

    sub = subparsers.add_parser('count', parents=[common],
                                help='Count the models of a sentence')
    sub.add_argument('formula', type=str)
    sub.add_argument('--size', type=int, required=True)

    sub = subparsers.add_parser('classify', parents=[common],
                                help='Report syntactic metrics')
    sub.add_argument('formula', type=str)

    sub = subparsers.add_parser('forests', parents=[common],
                                help='Count forests and check split closure')
    sub.add_argument('--size', type=int, required=True)

    sub = subparsers.add_parser('selftest', parents=[common],
                                help='Run the acceptance suites')
    sub.add_argument('--quick', action='store_true',
                     help='Use smaller universes')

    return parser


def execute(args) -> Tuple[int, str]:
    'Run the command in ``args``, returning the exit code and the output'
    return COMMANDS[args.command](args)


def run_command(argv) -> Tuple[int, str]:
    '''
    Run a command line without printing; errors give exit code 2 and their
    message as output
    '''
    args = _build_arg_parser().parse_args(argv)
    try:
        return execute(args)
    except Exception as ex:
        return 2, f'{type(ex).__name__}: {ex}'


def _entry_point():
    parser = _build_arg_parser()
    args = parser.parse_args()
    sys.exit(main(**vars(args)))


def main(command, *, log_level='WARNING', **kwargs):
    logger = logging.getLogger('spatlogic')
    logger.setLevel(log_level)
    logging.basicConfig()

    args = argparse.Namespace(command=command, **kwargs)
    try:
        code, output = execute(args)
    except Exception as ex:
        logger.error('%s: %s', type(ex).__name__, ex,
                     exc_info=logger.isEnabledFor(logging.DEBUG))
        return 2

    print(output)
    return code

