import argparse
import contextlib
import logging
import os
import sys
from fractions import Fraction

import numpy as np
from tqdm import tqdm

from fdagenum.dag import D0, expand, read_fdag, read_fdags, reduce, to_line, write_fdag
from fdagenum.enumeration import (
    COPYING,
    INCREMENTAL,
    Constraint,
    ConstraintError,
    constrained_predicate,
    freeze,
    level_counts,
    random_fdag,
    redundant_forests,
    reverse_search,
    successors,
    time_successors,
)
from fdagenum.fishburn import (
    enumerate_matrices,
    from_matrix,
    read_matrix,
    to_matrix,
    write_matrix,
)
from fdagenum.patterns import (
    enumerate_subfdags,
    frequent_subfdags,
    mining_quotient,
    origins,
    pattern_fdag,
)
from fdagenum.trees import read_forest, write_forest
from fdagenum.utils import LoadFromFile, LogWriter, save_argparse

logger = logging.getLogger("fdagenum")


def _fraction(text):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid fraction {text!r}")
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError(f"{text} is not in [0, 1]")
    return value


def _nonnegative(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"{text} is negative")
    return value


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w") as f:
            yield f


def _input(path):
    return sys.stdin if path == "-" else path


def _write(out, d, fmt, first):
    if fmt == "line":
        out.write(to_line(d) + "\n")
    else:
        if not first:
            out.write("\n")
        write_fdag(d, out)


def run_enumerate(args):
    c = Constraint(args.max_vertices, args.max_height, args.max_outdegree, args.steps)
    g = constrained_predicate(c)
    total = 0
    with _output(args.output) as out:
        for d in reverse_search(D0, g, strategy=args.strategy):
            if args.repetitions:
                pis = [p.counts for p in redundant_forests(freeze(d), args.repetitions)]
                line = to_line(d)
                out.write(line + "\n")
                for counts in pis:
                    out.write(f"{line} @ {' '.join(str(x) for x in counts)}\n")
            else:
                _write(out, d, args.format, total == 0)
            total += 1
    logger.info("Enumerated %d FDAGs", total)


def run_count(args):
    counts = level_counts(
        args.steps,
        strategy=args.strategy,
        parallel=args.parallel,
        workers=args.workers,
        progress=args.verbose,
    )
    with _output(args.output) as out:
        out.write(",".join(str(c) for c in counts) + "\n")


def run_compress(args):
    trees = read_forest(_input(args.input))
    d = reduce(trees)
    with _output(args.output) as out:
        _write(out, d, args.format, True)


def run_expand(args):
    d = read_fdag(_input(args.input))
    with _output(args.output) as out:
        write_forest(expand(d), out)


def run_validate(args):
    n = sum(1 for _ in read_fdags(_input(args.input)))
    logger.debug("%d valid FDAG records", n)
    with _output(args.output) as out:
        out.write("ok\n")


def run_subfdags(args):
    d = read_fdag(_input(args.input))
    n = 0
    with _output(args.output) as out:
        for state in enumerate_subfdags(d):
            out.write(to_line(pattern_fdag(d, state)) + "\n")
            n += 1
        out.write(f"count {n}\n")


def run_mine(args):
    trees = read_forest(_input(args.input))
    d, roots = reduce(trees, return_roots=True)
    origin = origins(d, roots)
    ntrees = len(trees)
    n = 0
    with _output(args.output) as out:
        for state in frequent_subfdags(d, args.sigma, origin=origin, ntrees=ntrees):
            out.write(f"{len(state.origin)}/{ntrees} {to_line(pattern_fdag(d, state))}\n")
            n += 1
        out.write(f"count {n}\n")


def run_quotient(args):
    d = read_fdag(_input(args.input))
    q = mining_quotient(d)
    with _output(args.output) as out:
        out.write(f"{q.numerator}/{q.denominator}\n")


def run_random(args):
    d = random_fdag(args.steps, rng=args.rng)
    with _output(args.output) as out:
        _write(out, d, args.format, True)


def run_to_matrix(args):
    d = read_fdag(_input(args.input))
    with _output(args.output) as out:
        write_matrix(to_matrix(d), out)


def run_from_matrix(args):
    m = read_matrix(_input(args.input))
    with _output(args.output) as out:
        write_fdag(from_matrix(m), out)


def run_matrices(args):
    counts = [0] * (args.max_size + 1)
    with _output(args.output) as out:
        for m in enumerate_matrices(args.max_size):
            counts[m.size] += 1
            if m.size == 0:
                continue
            if sum(counts[1:]) > 1:
                out.write("\n")
            write_matrix(m, out)
    for size, c in enumerate(counts):
        logger.info("size %d: %d matrices", size, c)


def _bench(args, keys, measure):
    with LogWriter(args.output, keys=keys, name=f"{args.verb}_{args.bench_verb}.csv", timed=False) as log:
        for k in tqdm(range(1, args.max_steps + 1), disable=not args.verbose):
            for _ in range(args.samples_per_step):
                d = random_fdag(k, rng=args.rng)
                row = measure(d)
                row["vertices"] = d.nvertices
                log.write_row(row)


def run_bench_successors(args):
    _bench(args, ("vertices", "successors"), lambda d: {"successors": len(successors(d))})


def run_bench_delay(args):
    def measure(d):
        total, amortized = time_successors(d, repeat=args.repeat)
        return {"total_ns": total, "amortized": amortized}

    _bench(args, ("vertices", "total_ns", "amortized"), measure)


def run_bench_quotient(args):
    _bench(args, ("vertices", "Q"), lambda d: {"Q": float(mining_quotient(d))})


def _build_parser():
    parser = argparse.ArgumentParser(prog="fdagenum", description="Enumeration of forests of unordered trees through their DAG reductions")
    parser.add_argument('--conf', action=LoadFromFile, help='Use a configuration file, e.g. fdagenum --conf input.yaml count')
    parser.add_argument('--log-dir', default=None, help='Directory where the run configuration is saved')
    parser.add_argument('-v', '--verbose', action='store_true', help='Debug logging and progress bars')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--output', default='-', help='Output file, "-" for stdout')
    common.add_argument('--seed', type=int, default=0, help='random seed (default: 0)')

    strategy = argparse.ArgumentParser(add_help=False)
    strategy.add_argument('--strategy', choices=(INCREMENTAL, COPYING), default=INCREMENTAL, help='Successor construction: in-place deltas or copies')

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument('--format', choices=('fdag', 'line'), default=None, help='FDAG records or one-line serializations (default: fdag, line with --repetitions)')

    infile = argparse.ArgumentParser(add_help=False)
    infile.add_argument('input', nargs='?', default='-', help='Input file, "-" for stdin')

    leaves = {}
    sub = parser.add_subparsers(dest='verb', required=True)

    def leaf(subparsers, name, func, parents, help):
        p = subparsers.add_parser(name, parents=parents, help=help)
        p.set_defaults(func=func)
        leaves[p.prog] = p
        return p

    p = leaf(sub, 'enumerate', run_enumerate, [common, strategy, fmt], 'Stream all FDAGs under the given bounds')
    p.add_argument('--steps', type=_nonnegative, default=None, help='Maximum number of expansion steps')
    p.add_argument('--max-vertices', type=_nonnegative, default=None, help='Maximum number of vertices')
    p.add_argument('--max-outdegree', type=_nonnegative, default=None, help='Maximum outdegree')
    p.add_argument('--max-height', type=_nonnegative, default=None, help='Maximum height')
    p.add_argument('--repetitions', type=_nonnegative, default=0, help='Also list the redundant forests within this many repetitions')

    p = leaf(sub, 'count', run_count, [common, strategy], 'Count FDAGs by number of expansion steps')
    p.add_argument('--steps', type=_nonnegative, default=7, help='Deepest level to count')
    p.add_argument('--parallel', action='store_true', help='Explore subtrees on a process pool')
    p.add_argument('--workers', type=int, default=None, help='Number of worker processes')

    p = leaf(sub, 'compress', run_compress, [common, fmt, infile], 'Reduce a forest file to its FDAG')
    p = leaf(sub, 'expand', run_expand, [common, infile], 'Expand a FDAG file back to its forest')
    p = leaf(sub, 'validate', run_validate, [common, infile], 'Check the records of a FDAG file')
    p = leaf(sub, 'subfdags', run_subfdags, [common, infile], 'List the subFDAGs of a FDAG')
    p = leaf(sub, 'mine', run_mine, [common, infile], 'Frequent subFDAGs of a forest')
    p.add_argument('--sigma', type=_fraction, default=Fraction(0), help='Support threshold p/q')
    p = leaf(sub, 'quotient', run_quotient, [common, infile], 'Patterns mined on the FDAG over patterns mined per tree')

    p = leaf(sub, 'random', run_random, [common, fmt], 'FDAG reached by uniform random expansions')
    p.add_argument('--steps', type=_nonnegative, default=10, help='Number of expansion steps')

    fishburn = sub.add_parser('fishburn', help='Row-Fishburn matrices')
    fsub = fishburn.add_subparsers(dest='fishburn_verb', required=True)
    leaf(fsub, 'to-matrix', run_to_matrix, [common, infile], 'FDAG file to matrix')
    leaf(fsub, 'from-matrix', run_from_matrix, [common, infile], 'Matrix file to FDAG')
    p = leaf(fsub, 'enumerate', run_matrices, [common], 'All matrices up to a given size')
    p.add_argument('--max-size', type=_nonnegative, default=3, help='Maximum matrix size')

    bench = sub.add_parser('bench', help='CSV benchmarks over random FDAGs')
    bsub = bench.add_subparsers(dest='bench_verb', required=True)
    for name, func in (('successors', run_bench_successors), ('delay', run_bench_delay), ('quotient', run_bench_quotient)):
        p = leaf(bsub, name, func, [common], f'Benchmark: {name}')
        p.add_argument('--samples-per-step', type=_nonnegative, default=10, help='Random FDAGs drawn per number of steps')
        p.add_argument('--max-steps', type=_nonnegative, default=100, help='Largest number of steps')
        if name == 'delay':
            p.add_argument('--repeat', type=int, default=1, help='Timing repetitions averaged per FDAG')

    return parser, leaves


def _leaf(leaves, args):
    words = ['fdagenum', args.verb]
    for extra in ('fishburn_verb', 'bench_verb'):
        if getattr(args, extra, None):
            words.append(getattr(args, extra))
    return leaves[' '.join(words)]


def get_args(arguments=None):
    parser, leaves = _build_parser()
    args = parser.parse_args(args=arguments)

    if args.conf:
        # loaded values become defaults, explicit flags still win
        conf = {k: v for k, v in args.conf.items() if k != 'conf'}
        parser.set_defaults(**conf)
        _leaf(leaves, args).set_defaults(**conf)
        args = parser.parse_args(args=arguments)

    if args.verb == 'enumerate':
        try:
            Constraint(args.max_vertices, args.max_height, args.max_outdegree, args.steps).kind
        except ConstraintError as e:
            parser.error(str(e))
        if args.repetitions and args.format == 'fdag':
            parser.error('--repetitions writes one-line records, it cannot be combined with --format fdag')
    if hasattr(args, 'format') and args.format is None:
        args.format = 'line' if getattr(args, 'repetitions', 0) else 'fdag'
    if args.verb == 'bench' and args.bench_verb == 'delay' and args.repeat < 1:
        parser.error('--repeat must be positive')

    if args.log_dir is not None:
        os.makedirs(args.log_dir, exist_ok=True)
        save_argparse(args, os.path.join(args.log_dir, 'input.yaml'), exclude=['conf', 'func'])

    return args


def setup(args):
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    args.rng = np.random.default_rng(args.seed)


def main(arguments=None):
    args = get_args(arguments)
    setup(args)
    try:
        args.func(args)
    except BrokenPipeError:
        pass
    except (OSError, ValueError) as e:
        print(f"fdagenum: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
