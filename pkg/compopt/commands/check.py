"""`compopt check <config>`: validate a config without running it."""
from compopt.commands.common import EXIT_INVALID, EXIT_OK, load_config, print_issues
from compopt.exceptions import ConfigParseError


def handle(args) -> int:
    try:
        cfg = load_config(args.config, args.out, args.seed_override)
    except ConfigParseError as exc:
        print_issues(exc)
        return EXIT_INVALID
    except OSError as exc:
        print(f"❌ Cannot read {args.config}: {exc}")
        return EXIT_INVALID

    cells = cfg.cells()
    print(f"✅ {args.config} is valid")
    print(f"📊 {len(cells)} cell(s) x {len(cfg.algorithms)} algorithm(s) on {cfg.problem.family}")
    for spec in cfg.algorithms:
        step = f"eta={spec.eta:g}" if spec.eta is not None else "eta=theoretical"
        print(f"   - {spec.label}: {spec.name}, {step}, epochs={spec.epochs}, inner_iters={spec.inner_iters}")
    print(f"📁 Outputs would go to {cfg.output_dir}")
    return EXIT_OK


def register(subparsers) -> None:
    parser = subparsers.add_parser("check", help="Validate an experiment config")
    parser.add_argument("config", help="Path to the config file")
    parser.set_defaults(handler=handle)
