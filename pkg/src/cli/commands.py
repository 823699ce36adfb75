"""
Command-line entry points: train, predict, bench and sweep-c.

Each command parses its flags, layers them over the file and environment
configuration, and returns a process exit code: 0 on success, 1 for
usage errors, 2 for data errors, 3 when a solver did not converge.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, List, Optional

from src.bench.harness import BenchRunner, best_c, load_suite, sweep_c, C_GRID, VALIDATION_FRACTION
from src.bench.report import BenchReport
from src.config import Config, KernelConfig, SolverConfig, build_solver_config
from src.data.libsvm import load_dataset
from src.data.statistics import random_split
from src.model.ovo import accuracy, train_ovo
from src.model.serialization import load_model, save_model
from src.solvers import SOLVERS
from src.utils.errors import CoreballError, UsageError
from src.utils.file_operations import write_lines
from src.utils.logger import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_NOT_CONVERGED = 3


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument('--verbose', action='store_true', help='Log at DEBUG level')
    parser.add_argument('--log-file', help='Also write the log to this file')
    parser.add_argument('--config', type=Path, help='Solver YAML (default config/solver.yaml)')


def _add_kernel(parser: argparse.ArgumentParser, require_c: bool = True):
    parser.add_argument('--kernel', choices=['rbf', 'linear', 'poly', 'polyh'], default='rbf')
    parser.add_argument('--sigma2', default='auto', help="rbf width or 'auto' (mean squared distance)")
    parser.add_argument('--gamma', default='auto', help="polyh scale or 'auto' (inverse mean squared distance)")
    parser.add_argument('--degree', type=int, default=2)
    if require_c:
        parser.add_argument('--C', dest='C', type=float, required=True, help='Regularisation constant')


def _add_solver(parser: argparse.ArgumentParser):
    parser.add_argument('--epsilon', type=float)
    parser.add_argument('--sample-size', type=int)
    parser.add_argument('--init', help="'two-point' or 'random-meb:<p>'")
    parser.add_argument('--seed', type=int)
    parser.add_argument('--max-iter', type=int)
    parser.add_argument('--cache-mb', type=float)
    parser.add_argument('--no-exact-check', action='store_true',
                        help='Accept a sampled stop without the exhaustive rescan')
    parser.add_argument('--debug-checks', action='store_true',
                        help='Verify incremental quantities densely after every step')
    parser.add_argument('--workers', type=int, help='Threads for one-versus-one subproblems')


def _kernel_config(args: argparse.Namespace) -> KernelConfig:
    return KernelConfig(
        kind=args.kernel,
        sigma2=KernelConfig.parse_value(args.sigma2),
        gamma=KernelConfig.parse_value(args.gamma),
        degree=args.degree
    )


def _solver_config(args: argparse.Namespace, config: Config) -> SolverConfig:
    overrides = {
        'epsilon': args.epsilon,
        'sample_size': args.sample_size,
        'init': args.init,
        'seed': args.seed,
        'max_iterations': args.max_iter,
        'cache_mb': args.cache_mb,
    }
    if args.no_exact_check:
        overrides['exact_final_check'] = False
    if args.debug_checks:
        overrides['debug'] = True
    return build_solver_config(overrides, config.solver)


def _workers(args: argparse.Namespace, config: Config) -> int:
    workers = args.workers if args.workers is not None else config.runtime.workers
    if workers < 1:
        raise UsageError(f"--workers must be >= 1, got {workers}")
    return workers


def _solver_list(text: str) -> List[str]:
    solvers = [s.strip() for s in text.split(',') if s.strip()]
    unknown = [s for s in solvers if s not in SOLVERS]
    if not solvers or unknown:
        raise UsageError(f"--solvers takes a comma list of {sorted(SOLVERS)}, got '{text}'")
    return solvers


def _run(parser: argparse.ArgumentParser, handler: Callable, argv: Optional[List[str]]) -> int:
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else UsageError.exit_code
    try:
        config = Config(args.config)
        level = logging.DEBUG if args.verbose else config.runtime.log_level
        setup_logging(level, args.log_file or config.runtime.log_file)
        return handler(args, config)
    except CoreballError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.error(f"{parser.prog} failed: {e}", exc_info=True)
        raise


def _train(args: argparse.Namespace, config: Config) -> int:
    solver_config = _solver_config(args, config)
    kernel_config = _kernel_config(args)
    if args.solver == 'bc' and not kernel_config.normalized:
        raise UsageError(
            f"--solver bc needs a normalized kernel (constant k(x, x)); {kernel_config.kind} is not, "
            "so the ball equivalence the core vector machine relies on does not hold. Use fw or mfw."
        )
    dataset = load_dataset(args.data)
    kernel = kernel_config.resolve(dataset, seed=solver_config.seed)
    model, stats = train_ovo(
        dataset, kernel, args.C, args.solver, solver_config,
        workers=_workers(args, config), trace_path=args.trace
    )
    save_model(model, args.model)

    for machine, stat in zip(model.machines, stats):
        print(f"[{machine.positive_class} vs {machine.negative_class}] {stat.summary()}")
    total_time = sum(s.wall_time_seconds for s in stats)
    print(f"kernel: {kernel.describe()}, C={args.C:g}, training time {total_time:.3f}s")
    print(f"training accuracy: {accuracy(model, dataset):.2f}%")

    if not all(s.converged for s in stats):
        logger.warning("At least one subproblem hit max_iterations; the model was written anyway")
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_train(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog='train', description='Train an L2-SVM with a ball solver')
    parser.add_argument('--data', required=True, help='LIBSVM training file')
    parser.add_argument('--model', required=True, help='Model file to write')
    parser.add_argument('--solver', choices=sorted(SOLVERS), default='mfw')
    parser.add_argument('--trace', help='CSV file for the per-iteration trace')
    _add_kernel(parser)
    _add_solver(parser)
    _add_common(parser)
    return _run(parser, _train, argv)


def _predict(args: argparse.Namespace, config: Config) -> int:
    model = load_model(args.model)
    dataset = load_dataset(args.data)
    predicted = model.predict(dataset)
    if args.output:
        write_lines(args.output, [str(int(label)) for label in predicted])
    else:
        for label in predicted:
            print(int(label))
    score = accuracy(model, dataset)
    print(f"accuracy: {score:.2f}% ({int(round(score * len(dataset) / 100))}/{len(dataset)})")
    return EXIT_OK


def cmd_predict(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog='predict', description='Predict with a saved model')
    parser.add_argument('--model', required=True)
    parser.add_argument('--data', required=True, help='LIBSVM file to classify')
    parser.add_argument('--output', help='One predicted class id per line (default stdout)')
    _add_common(parser)
    return _run(parser, _predict, argv)


def _bench(args: argparse.Namespace, config: Config) -> int:
    solver_config = _solver_config(args, config)
    runner = BenchRunner(solver_config, _workers(args, config), args.trace_dir, config.runtime.data_dir)
    if args.suite:
        suite = load_suite(args.suite_file or config.project_root / 'config' / 'benchmarks.yaml', args.suite)
        report = runner.run_suite(suite)
    else:
        if not args.train or args.C is None:
            raise UsageError("bench needs --suite, or --train and --C")
        train = load_dataset(args.train)
        if args.test:
            test = load_dataset(args.test)
        else:
            train, test = random_split(train, args.test_fraction, solver_config.seed)
        name = args.name or Path(args.train).stem
        report = BenchReport()
        runner.run_dataset(name, train, test, _kernel_config(args), args.C, _solver_list(args.solvers), report)

    runner.write(report, args.out)
    print(report.to_frame().to_csv(index=False, na_rep='', float_format='%.6g'), end='')
    if not all(row.converged for row in report.rows):
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_bench(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog='bench', description='Compare solvers on the same problems')
    parser.add_argument('--suite', help='Suite name from the benchmarks file')
    parser.add_argument('--suite-file', type=Path, help='Benchmarks YAML (default config/benchmarks.yaml)')
    parser.add_argument('--train', help='LIBSVM training file')
    parser.add_argument('--test', help='LIBSVM test file (default: hold out --test-fraction)')
    parser.add_argument('--test-fraction', type=float, default=0.2)
    parser.add_argument('--name', help='Dataset name in the report')
    parser.add_argument('--solvers', default='bc,fw,mfw')
    parser.add_argument('--out', default='bench/report.csv', help='Report CSV; summary.md goes beside it')
    parser.add_argument('--trace-dir', type=Path, help='Write <dataset>_<solver>.csv traces here')
    _add_kernel(parser, require_c=False)
    parser.add_argument('--C', dest='C', type=float)
    _add_solver(parser)
    _add_common(parser)
    return _run(parser, _bench, argv)


def _sweep(args: argparse.Namespace, config: Config) -> int:
    solver_config = _solver_config(args, config)
    dataset = load_dataset(args.data)
    solvers = _solver_list(args.solvers)
    results = sweep_c(
        dataset, _kernel_config(args), solvers, solver_config,
        fraction=args.fraction, workers=_workers(args, config)
    )
    text = results.to_csv(index=False, float_format='%.6g')
    if args.out:
        write_lines(args.out, text.splitlines())
    print(text, end='')
    for solver in results['solver'].unique():
        print(f"best C for {solver}: {best_c(results, solver):g}")
    return EXIT_OK


def cmd_sweep_c(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog='sweep_c', description=(
        f"Validation accuracy over C = 2^0..2^{len(C_GRID) - 1} on a held-out split"
    ))
    parser.add_argument('--data', required=True)
    parser.add_argument('--solvers', default='mfw')
    parser.add_argument('--fraction', type=float, default=VALIDATION_FRACTION)
    parser.add_argument('--out', help='CSV of C, solver, validation_accuracy, time_s')
    _add_kernel(parser, require_c=False)
    _add_solver(parser)
    _add_common(parser)
    return _run(parser, _sweep, argv)
