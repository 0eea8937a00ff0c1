"""`compopt run <config>`: execute every cell and algorithm of a config."""
from compopt.commands.common import EXIT_INVALID, load_config, print_issues
from compopt.exceptions import ConfigParseError
from compopt.services.experiment_service import experiment_service


def handle(args) -> int:
    try:
        cfg = load_config(args.config, args.out, args.seed_override)
    except ConfigParseError as exc:
        print_issues(exc)
        return EXIT_INVALID
    except OSError as exc:
        print(f"❌ Cannot read {args.config}: {exc}")
        return EXIT_INVALID

    print(f"🚀 Running {len(cfg.cells())} cell(s) with {args.jobs} job(s)")
    outcome = experiment_service.run(cfg, jobs=args.jobs, progress=not args.quiet)

    print("\n📊 Summary")
    print(outcome.summary_path.read_text(encoding="utf-8"))
    for row in outcome.rows:
        if row.status != "ok":
            print(f"⚠️  {row.cell}/{row.label}: {row.status} ({row.message})")
    print(f"📁 Outputs in {outcome.out_dir}")
    print("✅ All runs finished" if outcome.ok else "❌ Some runs diverged or failed")
    return outcome.exit_code


def register(subparsers) -> None:
    parser = subparsers.add_parser("run", help="Run an experiment config")
    parser.add_argument("config", help="Path to the config file")
    parser.add_argument("--quiet", action="store_true", help="Hide the progress bar")
    parser.set_defaults(handler=handle)
