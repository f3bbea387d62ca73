#!/usr/bin/env python3
"""
Verificador de estructura block Toeplitz
Decide Toeplitz-idad, productos y diferencias de productos, e igualdad de
productos mediante vectores ala, y clasifica matrices block Toeplitz
normales con entradas diagonales.

Códigos de salida: 0 = la propiedad se cumple, 1 = no se cumple,
2 = error de uso/IO/formato, 3 = desacuerdo con el oráculo denso.
"""

import argparse
import os
import sys
import time
from typing import Callable, List, Optional, Tuple

from loguru import logger
from pydantic import ValidationError

from config import Config
from structures.blocks import BlockToeplitz, Tolerance
from structures.displacement import interior_residual, is_block_toeplitz
from structures.errors import BlockToeplitzError, SizeLimitError
from structures.normality import block_normal_classify, normal_oracle
from structures.products import (
    difference_residual, gap_residual, product_scale, products_equal, difference_is_toeplitz,
)
from verification.bench import bench
from verification.generators import BRANCHES, KINDS, generate
from verification.matrix_file import MatrixFile, load, save, serialize
from verification.oracle import dense_expand, dense_product_check, diagonal_scan_is_toeplitz
from verification.report import Report

EXIT_HOLDS = 0
EXIT_FAILS = 1
EXIT_ERROR = 2
EXIT_DISAGREE = 3


def _timed(fn: Callable, *args) -> Tuple[object, int]:
    start = time.perf_counter_ns()
    result = fn(*args)
    return result, time.perf_counter_ns() - start


class ToeplitzVerifier:
    def __init__(self, config: Config, command: List[str], use_oracle: bool = False):
        self.config = config
        self.command = command
        self.use_oracle = use_oracle
        self.tol: Tolerance = config.tol()
        self.disagreement = False

    def load(self, path: str) -> MatrixFile:
        matrix = load(path, self.config.structured_nd_cap)
        logger.debug(f"Loaded {path}: {matrix.kind} n={matrix.n} d={matrix.d}")
        return matrix

    def operands(self, paths: List[str]) -> List[BlockToeplitz]:
        """Carga operandos; los densos pasan por toeplitz_factor"""
        operands = [self.load(p).to_block_toeplitz(self.tol) for p in paths]
        shapes = {(t.n, t.d) for t in operands}
        if len(shapes) != 1:
            raise BlockToeplitzError(f"operands disagree in (n, d): {sorted(shapes)}")
        return operands

    def check_oracle_size(self, n: int, d: int):
        if n * d > self.config.dense_nd_cap:
            raise SizeLimitError(f"--oracle limited to nd <= {self.config.dense_nd_cap}, got n={n}, d={d}")

    def check_toeplitz(self, path: str) -> Report:
        grid = self.load(path).to_grid()
        verdict, elapsed = _timed(is_block_toeplitz, grid, self.tol)
        report = Report(command=self.command, verdict=verdict,
                        residual=interior_residual(grid), threshold=self.tol.threshold(grid.blocks),
                        timings={'structured': elapsed})
        if self.use_oracle:
            self.check_oracle_size(grid.n, grid.d)
            report.oracle, report.timings['oracle'] = _timed(diagonal_scan_is_toeplitz, grid, self.tol)
        return report

    def check_products(self, a: BlockToeplitz, b: BlockToeplitz,
                       c: BlockToeplitz, d: BlockToeplitz, equality: bool) -> Report:
        """AB - CD Toeplitz (equality=False) o AB = CD (equality=True)"""
        if equality:
            verdict, elapsed = _timed(products_equal, a, b, c, d, self.tol)
            residual = difference_residual(a, b, c, d)
        else:
            verdict, elapsed = _timed(difference_is_toeplitz, a, b, c, d, self.tol)
            residual = gap_residual(a, b, c, d)
        report = Report(command=self.command, verdict=verdict, residual=residual,
                        threshold=self.tol.eps * product_scale((a, b), (c, d)),
                        timings={'structured': elapsed})
        if self.use_oracle:
            self.check_oracle_size(a.n, a.d)
            mode = 'equal' if equality else 'toeplitz'
            report.oracle, report.timings['oracle'] = _timed(
                dense_product_check, a, b, c, d, mode, self.tol, self.config.dense_nd_cap)
        return report

    def check_product(self, paths: List[str]) -> Report:
        a, b = self.operands(paths)
        zero = BlockToeplitz.zeros(a.n, a.d)
        return self.check_products(a, b, zero, zero, equality=False)

    def check_difference(self, paths: List[str]) -> Report:
        return self.check_products(*self.operands(paths), equality=False)

    def check_equal(self, paths: List[str]) -> Report:
        return self.check_products(*self.operands(paths), equality=True)

    def check_commute(self, paths: List[str]) -> Report:
        a, b = self.operands(paths)
        return self.check_products(a, b, b, a, equality=True)

    def check_normal(self, path: str) -> Report:
        t = self.load(path).to_diagonal(self.tol)
        verdict, elapsed = _timed(block_normal_classify, t, self.tol)
        report = Report.from_normality(self.command, verdict, timings={'structured': elapsed})
        if self.use_oracle:
            self.check_oracle_size(t.n, t.d)
            dense = dense_expand(t.to_block_toeplitz(), self.config.dense_nd_cap)
            report.oracle, report.timings['oracle'] = _timed(normal_oracle, dense, self.tol)
        return report

    def run_bench(self, n: int, d: int, min_speedup: Optional[float]) -> Report:
        result = bench(n, d, self.config.bench_reps, self.config.seed, self.tol, self.config.dense_nd_cap)
        verdict = min_speedup is None or result.speedup >= min_speedup
        if not result.verdicts_agree:
            logger.error("❌ Structured and dense arms disagree")
            self.disagreement = True
        return Report(command=self.command, verdict=verdict, speedup=result.speedup,
                      timings={'structured': result.structured_median_ns, 'dense': result.dense_median_ns})


def write_generated(files: List[MatrixFile], out: Optional[str]):
    """Escribe a --out (PREFIX_a.json .. PREFIX_d.json para el cuádruple) o a stdout"""
    if out is None:
        for f in files:
            sys.stdout.write(serialize(f))
        return
    if len(files) == 1:
        save(files[0], out)
        logger.info(f"Wrote {out}")
        return
    stem, ext = os.path.splitext(out)
    for letter, f in zip('abcd', files):
        path = f"{stem}_{letter}{ext or '.json'}"
        save(f, path)
        logger.info(f"Wrote {path}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--tol', type=float, default=Config().tolerance, help='relative tolerance (default 1e-9)')
    common.add_argument('--oracle', action='store_true', help='cross-check against the dense oracle')
    common.add_argument('--json', action='store_true', help='print the report as JSON')
    common.add_argument('--seed', type=int, default=Config().seed, help='RNG seed (u64)')
    common.add_argument('--verbose', action='store_true', help='debug logging on stderr')
    common.add_argument('--log-file', default=None, help='also log to this file')

    parser = argparse.ArgumentParser(prog='main.py', description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    commands = parser.add_subparsers(dest='command', required=True)

    check = commands.add_parser('check', help='decide a structural property')
    checks = check.add_subparsers(dest='property', required=True)
    for name, arity in (('toeplitz', 1), ('product', 2), ('difference', 4),
                        ('equal', 4), ('commute', 2), ('normal', 1)):
        sub = checks.add_parser(name, parents=[common])
        sub.add_argument('files', nargs=arity, metavar='FILE')

    gen = commands.add_parser('gen', parents=[common], help='generate structured instances')
    gen.add_argument('kind', choices=KINDS)
    gen.add_argument('--n', type=int, required=True)
    gen.add_argument('--d', type=int, required=True)
    gen.add_argument('--out', default=None)
    gen.add_argument('--lam', type=complex, default=None, help="unimodular lambda for normal-slices, e.g. '1j'")
    gen.add_argument('--branches', choices=BRANCHES, default='mixed')

    bench_cmd = commands.add_parser('bench', parents=[common], help='structured vs dense timing')
    bench_cmd.add_argument('--n', type=int, required=True)
    bench_cmd.add_argument('--d', type=int, required=True)
    bench_cmd.add_argument('--reps', type=int, default=Config().bench_reps,
                           help='timed repetitions per arm (default 5)')
    bench_cmd.add_argument('--min-speedup', type=float, default=None)
    return parser


def configure_logging(config: Config):
    logger.remove()
    logger.add(sys.stderr, level=config.log_level)
    if config.log_file:
        logger.add(config.log_file, rotation="1 day", retention="7 days", level=config.log_level)


def dispatch(verifier: ToeplitzVerifier, args: argparse.Namespace) -> Optional[Report]:
    if args.command == 'gen':
        write_generated(generate(args.kind, args.n, args.d, args.seed, args.lam, args.branches), args.out)
        return None
    if args.command == 'bench':
        return verifier.run_bench(args.n, args.d, args.min_speedup)

    handlers = {
        'toeplitz': lambda files: verifier.check_toeplitz(files[0]),
        'product': verifier.check_product,
        'difference': verifier.check_difference,
        'equal': verifier.check_equal,
        'commute': verifier.check_commute,
        'normal': lambda files: verifier.check_normal(files[0]),
    }
    return handlers[args.property](args.files)


def cli_main(argv: List[str]) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_HOLDS

    try:
        log_level = 'DEBUG' if args.verbose else Config().log_level
        # sinks antes de validar el resto de flags
        configure_logging(Config(log_level=log_level, log_file=args.log_file))
        config = Config(tolerance=args.tol, seed=args.seed, log_file=args.log_file, log_level=log_level,
                        bench_reps=getattr(args, 'reps', Config().bench_reps))
        verifier = ToeplitzVerifier(config, list(argv), args.oracle)
        report = dispatch(verifier, args)
    except (BlockToeplitzError, ValidationError, OSError, ValueError) as e:
        logger.error(f"❌ {e}")
        return EXIT_ERROR

    if report is None:
        return EXIT_HOLDS

    print(report.to_json() if args.json else report.render())
    if report.oracle is not None and report.oracle != report.verdict:
        logger.error("❌ Structured verdict disagrees with the dense oracle")
        return EXIT_DISAGREE
    if verifier.disagreement:
        return EXIT_DISAGREE
    return EXIT_HOLDS if report.verdict else EXIT_FAILS


def main():
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
