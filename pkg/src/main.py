import argparse
import sys
from pathlib import Path

from joblib import Parallel, delayed

project_root = Path(__file__).resolve().parent.parent
if str(project_root) not in sys.path:
    sys.path.append(str(project_root))

from src.pipeline.commands import run_command
from src.pipeline.output import write_result
from src.utils.config import load_run_config, load_settings, load_sweep, run_config_from_dict
from src.utils.logging import set_global_level, setup_logger
from src.utils.validation import ConfigError, DomainError, TopologyError

logger = setup_logger("main")

EXIT_PASS = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_DOMAIN = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Stationary measures of inhomogeneous two-state quantum walks")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", type=str, help="Path to a YAML run config")
    source.add_argument("--sweep", type=str, help="Path to a YAML list of run configs")
    parser.add_argument("--out", type=str, default=None, help="Output directory (default from settings)")
    parser.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE", help="Override a tolerance (repeatable)")
    parser.add_argument("--seed", type=int, default=None, help="Seed for randomized initial states")
    parser.add_argument("--jobs", type=int, default=1, help="Parallel workers for --sweep")
    parser.add_argument("--settings", type=str, default=None, help="Alternative settings.yaml")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="Debug logging and progress bars")
    verbosity.add_argument("--quiet", action="store_true", help="Only warnings and errors")
    return parser


def execute(load_config, out_dir: str | None, progress: bool = False) -> int:
    """
    Load, run and write one configuration, mapping failures to exit codes.
    """
    try:
        cfg = load_config()
        result = run_command(cfg, progress=progress)
        write_result(result, out_dir or cfg.output_dir)
    except (ConfigError, TopologyError) as e:
        logger.error(f"Config error: {e}")
        return EXIT_CONFIG
    except (DomainError, ValueError) as e:
        logger.error(f"Domain error: {e}")
        return EXIT_DOMAIN

    if not result.passed:
        failed = [name for name, item in result.summary["checks"].items() if not item["passed"]]
        logger.error(f"{cfg.command} failed checks: {', '.join(failed)}")
        return EXIT_FAILED
    logger.info(f"{cfg.command} passed")
    return EXIT_PASS


def _sweep_run(index: int, doc: dict, settings: dict, args: argparse.Namespace, root: Path) -> int:
    command = doc.get("command", "run") if isinstance(doc, dict) else "run"
    out_dir = root / f"{index:03d}_{command}"
    return execute(lambda: run_config_from_dict(doc, settings, args.tol, args.seed), str(out_dir))


def run_sweep(args: argparse.Namespace, settings: dict) -> int:
    docs = load_sweep(args.sweep)
    root = Path(args.out or settings["defaults"]["output_dir"])
    logger.info(f"Sweep of {len(docs)} runs into {root} (jobs={args.jobs})")
    statuses = Parallel(n_jobs=args.jobs)(
        delayed(_sweep_run)(i, doc, settings, args, root) for i, doc in enumerate(docs)
    )
    for i, status in enumerate(statuses):
        if status != EXIT_PASS:
            logger.warning(f"Sweep run {i} exited with status {status}")
    return max(statuses)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = load_settings(args.settings)
    except ConfigError as e:
        logger.error(f"Config error: {e}")
        return EXIT_CONFIG

    level = "DEBUG" if args.verbose else "WARNING" if args.quiet else settings["logging"].get("level", "INFO")
    set_global_level(level)

    if args.sweep:
        try:
            return run_sweep(args, settings)
        except ConfigError as e:
            logger.error(f"Config error: {e}")
            return EXIT_CONFIG

    return execute(
        lambda: load_run_config(args.config, settings, args.tol, args.seed),
        args.out,
        progress=args.verbose,
    )


if __name__ == "__main__":
    sys.exit(main())
