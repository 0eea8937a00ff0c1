"""`compopt bounds`: evaluate a step/batch bound for a file of problem constants."""
from pathlib import Path

from pydantic import ValidationError

from compopt.commands.common import EXIT_FAILED, EXIT_INVALID, EXIT_OK
from compopt.exceptions import ConfigurationError
from compopt.models.theory_schemas import ProblemConstants
from compopt.theory.bounds import saga_bounds, svrg_contraction_factor, svrg_step_bound


def load_constants(path) -> ProblemConstants:
    """Read ``B_F = ...`` style lines (``#`` comments allowed)."""
    values = {}
    for number, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{number}: expected 'name = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key] = value
    return ProblemConstants(**values)


def handle(args) -> int:
    try:
        constants = load_constants(args.constants)
    except (OSError, ValidationError, ConfigurationError) as exc:
        print(f"❌ Cannot load constants: {exc}")
        return EXIT_INVALID

    convex = args.theorem in (2, 4)
    try:
        if args.theorem in (1, 2):
            if args.batch is None:
                raise ConfigurationError("--batch is required for the SCDF-SVRG bounds")
            result = svrg_step_bound(constants, args.lam, args.n, args.batch, convex_outer=convex, d=args.d)
            print(result.model_dump_json(indent=2))
            usable = not result.vacuous
            if usable and args.K is not None:
                eta = args.eta if args.eta is not None else result.eta_max
                for form in ("theorem", "lemma") if not convex else ("theorem",):
                    factor = svrg_contraction_factor(constants, args.lam, args.n, args.K, args.batch, eta,
                                                     convex_outer=convex, d=args.d, d2_form=form)
                    print(factor.model_dump_json(indent=2))
        else:
            result = saga_bounds(constants, args.lam, args.n, A=args.batch, eta=args.eta,
                                 convex_outer=convex, d=args.d)
            print(result.model_dump_json(indent=2))
            usable = result.feasible
    except ConfigurationError as exc:
        print(f"❌ {exc}")
        return EXIT_INVALID

    print("✅ Bound is usable" if usable else f"⚠️  Bound is vacuous or infeasible: {result.message}")
    return EXIT_OK if usable else EXIT_FAILED


def register(subparsers) -> None:
    parser = subparsers.add_parser("bounds", help="Evaluate SCDF-SVRG / SCDF-SAGA step and batch bounds")
    parser.add_argument("--theorem", type=int, choices=(1, 2, 3, 4), required=True,
                        help="1/2: SVRG non-convex/convex F_i; 3/4: SAGA non-convex/convex F_i")
    parser.add_argument("--constants", required=True, help="File with B_F, L_F, B_G, L_G, L_f, R_x")
    parser.add_argument("--lambda", dest="lam", type=float, required=True)
    parser.add_argument("--n", type=int, required=True, help="Number of outer components")
    parser.add_argument("--batch", type=int, default=None, help="Inner mini-batch size A")
    parser.add_argument("--eta", type=float, default=None)
    parser.add_argument("--d", type=float, default=None, help="Convexity margin for theorems 2 and 4")
    parser.add_argument("--K", type=int, default=None, help="Inner iterations for the contraction factor")
    parser.set_defaults(handler=handle)
