import pytest

from src.cli import cmd_bench, cmd_predict, cmd_sweep_c, cmd_train
from src.model.serialization import load_model


def test_xor_train_and_predict(tmp_path, data_dir, capsys):
    model_path = tmp_path / 'xor.model'
    code = cmd_train([
        '--data', str(data_dir / 'xor.libsvm'), '--model', str(model_path),
        '--solver', 'mfw', '--kernel', 'rbf', '--C', '100', '--init', 'two-point',
    ])
    assert code == 0
    assert load_model(model_path).classes == (-1, 1)
    assert 'training accuracy: 100.00%' in capsys.readouterr().out

    output = tmp_path / 'labels.txt'
    code = cmd_predict(['--model', str(model_path), '--data', str(data_dir / 'xor.libsvm'),
                        '--output', str(output)])
    assert code == 0
    assert output.read_text().split() == ['1', '1', '-1', '-1']
    assert 'accuracy: 100.00% (4/4)' in capsys.readouterr().out


def test_core_vector_with_unnormalized_kernel_is_a_usage_error(tmp_path, data_dir, capsys):
    code = cmd_train([
        '--data', str(data_dir / 'xor.libsvm'), '--model', str(tmp_path / 'm'),
        '--solver', 'bc', '--kernel', 'polyh', '--C', '1',
    ])
    assert code == 1
    assert 'normalized kernel' in capsys.readouterr().err
    assert not (tmp_path / 'm').exists()


def test_missing_required_flag():
    assert cmd_train(['--data', 'x.libsvm', '--model', 'm']) == 1


def test_unknown_solver_flag(data_dir, tmp_path):
    assert cmd_train(['--data', str(data_dir / 'xor.libsvm'), '--model', str(tmp_path / 'm'),
                      '--solver', 'smo', '--C', '1']) == 1


def test_predict_on_empty_file(tmp_path, data_dir):
    model_path = tmp_path / 'xor.model'
    assert cmd_train(['--data', str(data_dir / 'xor.libsvm'), '--model', str(model_path), '--C', '10']) == 0
    empty = tmp_path / 'empty.libsvm'
    empty.write_text('# nothing here\n\n')
    assert cmd_predict(['--model', str(model_path), '--data', str(empty)]) == 2


def test_malformed_data_names_the_line(tmp_path, capsys):
    bad = tmp_path / 'bad.libsvm'
    bad.write_text('1 1:0.5\n2 4:1 2:1\n')
    assert cmd_train(['--data', str(bad), '--model', str(tmp_path / 'm'), '--C', '1']) == 2
    assert 'non-increasing index at line 2' in capsys.readouterr().err


def test_missing_model_file(tmp_path, data_dir):
    assert cmd_predict(['--model', str(tmp_path / 'absent'), '--data', str(data_dir / 'xor.libsvm')]) == 2


def test_iteration_cap_exit_code(tmp_path, data_dir):
    model_path = tmp_path / 'tri.model'
    code = cmd_train([
        '--data', str(data_dir / 'tri_train.libsvm'), '--model', str(model_path),
        '--solver', 'fw', '--C', '16', '--max-iter', '2', '--init', 'two-point',
    ])
    assert code == 3
    assert model_path.exists()


def test_trace_flag_writes_per_pair_files(tmp_path, data_dir):
    code = cmd_train([
        '--data', str(data_dir / 'tri_train.libsvm'), '--model', str(tmp_path / 'tri.model'),
        '--C', '16', '--epsilon', '1e-4', '--trace', str(tmp_path / 'trace.csv'),
    ])
    assert code == 0
    assert (tmp_path / 'trace_0_1.csv').read_text().startswith('iteration,step,')


def test_bench_with_explicit_files(tmp_path, data_dir, capsys):
    out = tmp_path / 'bench' / 'report.csv'
    code = cmd_bench([
        '--train', str(data_dir / 'tri_train.libsvm'), '--test', str(data_dir / 'tri_test.libsvm'),
        '--C', '16', '--epsilon', '1e-4', '--out', str(out), '--solvers', 'bc,mfw',
    ])
    assert code == 0
    assert out.read_text().splitlines()[0] == 'dataset,solver,accuracy,time_s,speedup,coreset,iters'
    assert (tmp_path / 'bench' / 'summary.md').exists()
    assert 'tri_train,mfw,' in capsys.readouterr().out


def test_bench_demo_suite(tmp_path):
    out = tmp_path / 'report.csv'
    assert cmd_bench(['--suite', 'demo', '--out', str(out)]) == 0
    assert len(out.read_text().splitlines()) == 4


def test_bench_needs_a_source():
    assert cmd_bench(['--out', 'unused.csv']) == 1


def test_bench_rejects_unknown_solver(data_dir, tmp_path):
    assert cmd_bench(['--train', str(data_dir / 'tri_train.libsvm'), '--C', '1',
                      '--solvers', 'fw,smo', '--out', str(tmp_path / 'r.csv')]) == 1


def test_sweep_c(tmp_path, data_dir, capsys):
    out = tmp_path / 'sweep.csv'
    code = cmd_sweep_c(['--data', str(data_dir / 'tri_train.libsvm'), '--epsilon', '1e-3',
                        '--init', 'two-point', '--out', str(out)])
    assert code == 0
    assert len(out.read_text().splitlines()) == 14
    assert 'best C for mfw:' in capsys.readouterr().out


@pytest.mark.parametrize("flag", [['--workers', '0'], ['--init', 'three-point'], ['--epsilon', '2']])
def test_bad_solver_flags(tmp_path, data_dir, flag):
    argv = ['--data', str(data_dir / 'xor.libsvm'), '--model', str(tmp_path / 'm'), '--C', '1'] + flag
    assert cmd_train(argv) == 1
