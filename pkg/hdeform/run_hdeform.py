import argparse
import sys

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_ERROR = 2


def parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--weight', type=int, help='Truncation weight W, overrides the fixture', required=False)
    common.add_argument('--ring', type=str, help="Coefficient ring, 't_adic:N[:g]' or 'square_zero:g0,g1,...'",
                        required=False)
    common.add_argument('--format', dest='out_format', choices=['text', 'structured'], default='text',
                        help='Report format')
    common.add_argument('--threads', dest='n_threads', type=int, default=1, help='Threads for matrix assembly')

    arg_parser = argparse.ArgumentParser(prog='hdeform',
                                         description='Deformations of A∞ algebras with ∞ inner products')
    arg_parser.add_argument('--version', action='store_true', help='hdeform version', required=False)
    commands = arg_parser.add_subparsers(dest='command')

    check = commands.add_parser('check', parents=[common], help='Check that (D, I) is a polarization')
    check.add_argument('fixture', type=str, help='Path to a fixture file or a builtin fixture name')

    terms = commands.add_parser('terms', parents=[common], help='List the insertion terms of δ_f on a (k, l) form')
    terms.add_argument('k', type=int)
    terms.add_argument('l', type=int)

    bracket = commands.add_parser('bracket', parents=[common], help='Bracket of two fixture blocks')
    bracket.add_argument('fixture', type=str)
    bracket.add_argument('--left', default='structure', choices=['structure', 'perturbation', 'generator'])
    bracket.add_argument('--right', default='structure', choices=['structure', 'perturbation', 'generator'])

    for name, text in (('differential', 'Differential d = [(D, I), -] of a fixture block'),
                       ('cyclic', 'Check that a coderivation is cyclic and maps to the Hochschild complex')):
        command = commands.add_parser(name, parents=[common], help=text)
        command.add_argument('fixture', type=str)
        command.add_argument('--block', default=None, choices=['structure', 'perturbation', 'generator'])

    mc = commands.add_parser('mc', parents=[common], help='Maurer-Cartan residual of the fixture perturbation')
    mc.add_argument('fixture', type=str)

    gauge = commands.add_parser('gauge', parents=[common], help='Gauge the trivial extension by the fixture generator')
    gauge.add_argument('fixture', type=str)

    tangent = commands.add_parser('tangent', parents=[common], help='Cohomology of the truncated 𝔥')
    tangent.add_argument('fixture', type=str)
    tangent.add_argument('--degree', dest='degrees', default='1', help="Degrees, 'n', 'n,m' or 'low:high'")

    selftest = commands.add_parser('selftest', parents=[common], help='Compare the engine with the brute force oracle')
    selftest.add_argument('fixture', type=str, nargs='?', default='dual_numbers')
    selftest.add_argument('--seed', type=int, default=0)
    selftest.add_argument('--trials', type=int, default=3)
    return arg_parser


def configure_command(args):
    from hdeform.pipeline.steps import COMMANDS
    kwargs = {'weight': args.weight, 'ring': args.ring, 'out_format': args.out_format, 'n_threads': args.n_threads}
    step = COMMANDS[args.command]
    if args.command == 'terms':
        return step(args.k, args.l, **kwargs)
    if args.command == 'bracket':
        return step(args.fixture, left=args.left, right=args.right, **kwargs)
    if args.command in ('differential', 'cyclic'):
        return step(args.fixture, block=args.block, **kwargs)
    if args.command == 'tangent':
        return step(args.fixture, degrees=args.degrees, **kwargs)
    if args.command == 'selftest':
        return step(args.fixture, seed=args.seed, trials=args.trials, **kwargs)
    return step(args.fixture, **kwargs)


def main(argv=None) -> int:
    args = parser().parse_args(argv)

    if args.version:
        from hdeform.__version__ import __version__
        print(__version__)
        return EXIT_OK

    if args.command is None:
        parser().print_usage(sys.stderr)
        return EXIT_ERROR

    from hdeform.pipeline import hdeform_logger as logger
    try:
        step = configure_command(args)
        result = step()
    except (RuntimeError, ValueError) as e:
        logger.error(str(e))
        return EXIT_ERROR

    print(step.render(result))
    return EXIT_OK if result.ok else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
