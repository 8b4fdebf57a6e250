import pytest

from ..main import _build_arg_parser, main, read_text, run_command

EMPTY_STRUCTURE = '(structure (size 1) (sig) (assign (x 0)))'


def run_main(argv):
    args = _build_arg_parser().parse_args(argv)
    return main(**vars(args))


def test_read_text(tmp_path):
    path = tmp_path / 'formula.sl'
    path.write_text('(P x)\n')
    assert read_text(str(path)) == '(P x)\n'
    assert read_text('(Q x)') == '(Q x)'
    assert read_text('true') == 'true'


def test_eval():
    assert run_command(['eval', '(= x x)', EMPTY_STRUCTURE]) == (0, 'true')
    assert run_command(['eval', '(not (= x x))', EMPTY_STRUCTURE]) == \
        (1, 'false')


def test_eval_structure_file(tmp_path):
    path = tmp_path / 'structure.sl'
    path.write_text('(structure (size 2) (sig (P 1)) (assign (x 1)) '
                    '(rel P (1)))')
    assert run_command(['eval', '(P x)', str(path)]) == (0, 'true')


def test_eval_undeclared_predicate():
    code, output = run_command(['eval', '(P x)', EMPTY_STRUCTURE])
    assert code == 2
    assert output.startswith('FormulaSyntaxError')
    assert 'Undeclared predicate: P' in output


def test_translate_is_deterministic():
    argv = ['translate', '(sep (P x) (exists y (Q y)))', '--mode', 'sep2sol',
            '--vocab', '(sig (P 1) (Q 1))']
    first = run_command(argv)
    assert first[0] == 0
    assert first[1].startswith('(exists2 (P_1 1)')
    assert run_command(argv) == first


@pytest.mark.parametrize('mode, text, prefix', [
    ('lfp2sol', '(lfp S (x) (or (Q x) (S x)) (y))', '(forall2 (S 1)'),
    ('sol2sep', '(exists2 R (R x))', '(and (forall'),
    ('twovar', '(exists x (P x))', '(exists2 (P_x_1 1)'),
])
def test_translate_modes(mode, text, prefix):
    code, output = run_command(['translate', text, '--mode', mode])
    assert code == 0
    assert output.startswith(prefix)


def test_solve():
    code, output = run_command(['solve', '(exists-ge 2 x (P x))',
                                '--max-size', '2'])
    assert code == 0
    assert output.splitlines()[0] == 'WITNESS'
    assert output.splitlines()[1].startswith('(structure (size 2)')

    assert run_command(['solve', '(exists x (not (= x x)))',
                        '--max-size', '2']) == (1, 'EXHAUSTED')


def test_solve_budget():
    code, output = run_command(['solve', '(and (P x) (not (P x)))',
                                '--max-size', '2', '--budget', '1'])
    assert code == 2
    assert output.startswith('BudgetExceeded')


def test_count():
    assert run_command(['count', 'true', '--size', '2',
                        '--vocab', '(sig (P 1))']) == (0, '4')


def test_classify():
    code, output = run_command(['classify', '(forall x (P x))'])
    assert code == 0
    lines = output.splitlines()
    assert 'fo_depth: 1' in lines
    assert lines[-1] == 'fragments: FACT1 PROP5_INPUT TWO_VAR MSO'


def test_classify_outside_fragments():
    code, output = run_command(['classify', '(exists2 R (exists x (exists y '
                                '(exists z (R x y z)))))'])
    assert code == 0
    assert output.splitlines()[-1] == 'fragments:'


def test_forests():
    assert run_command(['forests', '--size', '2']) == \
        (0, 'forests: 3\nclosure: OK')


def test_main_prints_output(capsys):
    assert run_main(['count', 'true', '--size', '2',
                     '--vocab', '(sig (P 1))']) == 0
    assert capsys.readouterr().out == '4\n'


def test_main_reports_errors(capsys):
    assert run_main(['--log', 'DEBUG', 'eval', '(P x)',
                     EMPTY_STRUCTURE]) == 2
    assert capsys.readouterr().out == ''
