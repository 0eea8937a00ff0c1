"""`compopt gradcheck`: finite-difference check of a built-in problem's oracles."""
from compopt.commands.common import EXIT_FAILED, EXIT_INVALID, EXIT_OK
from compopt.config import GRADCHECK_TOL, PROBLEM_FAMILIES
from compopt.core.gradcheck import check_gradients, random_trial_points
from compopt.exceptions import CompoptError
from compopt.models.schemas import ProblemSpec
from compopt.problems import build_problem
from compopt.services.prng import PrngStream


def handle(args) -> int:
    seed = args.seed_override if args.seed_override is not None else args.seed
    try:
        spec = ProblemSpec(
            family=args.problem, n=args.n, m=args.m, N=args.N, M=args.M,
            kappa=args.kappa, lam=args.lam, seed=seed,
        )
        problem = build_problem(spec)
        points = random_trial_points(problem, args.points, PrngStream(seed, "gradcheck").generator)
        report = check_gradients(problem, points, tol=args.tol)
    except (CompoptError, ValueError) as exc:
        print(f"❌ {exc}")
        return EXIT_INVALID

    print(f"📊 {problem!r}: {len(report.components)} components at {report.num_points} points")
    for failure in report.failures:
        print(f"   ❌ {failure.kind}_{failure.index}: error {failure.max_rel_error:.3e} "
              f"at point {failure.worst_point}")
    if report.passed:
        print(f"✅ All gradients match (max relative error {report.max_error:.3e} <= {report.tol:g})")
        return EXIT_OK
    print(f"❌ {len(report.failures)} component(s) failed")
    return EXIT_FAILED


def register(subparsers) -> None:
    parser = subparsers.add_parser("gradcheck", help="Check problem gradients by finite differences")
    parser.add_argument("--problem", choices=PROBLEM_FAMILIES, default="mean-variance")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--points", type=int, default=20, help="Random trial points")
    parser.add_argument("--tol", type=float, default=GRADCHECK_TOL)
    parser.add_argument("--n", type=int, default=20)
    parser.add_argument("--m", type=int, default=10)
    parser.add_argument("--N", type=int, default=5)
    parser.add_argument("--M", type=int, default=None)
    parser.add_argument("--kappa", type=float, default=10.0)
    parser.add_argument("--lambda", dest="lam", type=float, default=0.1)
    parser.set_defaults(handler=handle)
