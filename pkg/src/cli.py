"""Command line interface for the adversarial robustness benchmark."""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from rich.console import Console

from src import __version__
from src.attack import SweepRecord
from src.data import CANCER, NORMAL, load_pgm, synth_dataset, write_manifest
from src.errors import ConfigError, DataError, ReportError
from src.experiment import ExperimentConfig, load_config, prepare_data, read_sweep_csv, run_experiment, train_stage
from src.experiment.charts import write_charts
from src.metrics import DEFAULT_WINDOW, ssim_images
from src.nn import load_checkpoint, save_checkpoint

from .logging_config import configure_logging
from .utils import epoch_progress, sweep_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_DATA = 4
EXIT_RUNTIME = 5
EXIT_INTERRUPT = 130

MODEL_FILE = "model.ckpt"
TRAIN_JSON = "train.json"


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, default=None, help="Path to YAML experiment config (default: built-in)")
    parser.add_argument("--seed", type=int, default=None, help="Override the config seed")
    parser.add_argument(
        "--out", type=str, default=None, help="Output directory (default: config, then $ADVBENCH_OUT_DIR)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="advbench", description="FGSM adversarial robustness benchmark for a from-scratch CNN"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        default=False,
        help="Enable verbose logging (default: False)",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    synth = commands.add_parser("synth", help="Generate a synthetic dataset as PGM files plus manifest.csv")
    synth.add_argument("--out", type=str, required=True, help="Directory to write images/ and manifest.csv into")
    synth.add_argument("--n", type=int, default=100, help="Number of images (default: 100)")
    synth.add_argument("--size", type=int, default=64, help="Image side length in pixels (default: 64)")
    synth.add_argument("--seed", type=int, default=0, help="Generator seed (default: 0)")

    train = commands.add_parser("train", help="Train the classifier; writes model.ckpt and train.json")
    _add_run_flags(train)

    attack = commands.add_parser("attack", help="Run the ε sweep against a saved model")
    _add_run_flags(attack)
    attack.add_argument("--model", type=str, required=True, help="Checkpoint written by 'train'")

    sweep = commands.add_parser("sweep", help="Train and attack in one run, writing all report files")
    _add_run_flags(sweep)

    report = commands.add_parser("report", help="Re-render charts and print the table of an existing run")
    report.add_argument("--run", type=str, required=True, help="Run directory containing sweep.csv")

    ssim = commands.add_parser("ssim", help="Mean SSIM between two PGM images")
    ssim.add_argument("a", type=str, help="First PGM image")
    ssim.add_argument("b", type=str, help="Second PGM image")
    ssim.add_argument("--window", type=int, default=DEFAULT_WINDOW, help=f"Window size (default: {DEFAULT_WINDOW})")
    ssim.add_argument("--dynamic-range", type=float, default=1.0, help="Pixel value range L (default: 1.0)")

    return parser


def _load_run_config(args: argparse.Namespace) -> ExperimentConfig:
    logger.debug("Loading configuration from: %s", args.config or "<defaults>")
    config = load_config(args.config)
    if args.seed is not None:
        logger.warning("Config override: seed = %d (was: %d)", args.seed, config.seed)
    if args.out is not None:
        logger.warning("Config override: output directory = %s (was: %s)", args.out, config.output.path)
    return config.with_overrides(seed=args.seed, out=args.out)


def _record_rows(records: List[SweepRecord]) -> List[Dict]:
    return [
        {
            "epsilon": r.epsilon,
            "accuracy": r.accuracy,
            "mean_ssim": r.mean_ssim,
            "n_samples": r.n_samples,
            "accuracy_normal": r.accuracy_normal,
            "accuracy_cancer": r.accuracy_cancer,
            "success_rate": r.success_rate,
        }
        for r in records
    ]


def cmd_synth(args: argparse.Namespace, console: Console) -> int:
    dataset = synth_dataset(args.n, args.size, args.seed)
    manifest = write_manifest(dataset, args.out)
    counts = dataset.class_counts()
    console.print(f"Wrote {len(dataset)} images ({counts[NORMAL]} normal, {counts[CANCER]} cancer) to {manifest}")
    return EXIT_OK


def cmd_train(args: argparse.Namespace, console: Console) -> int:
    config = _load_run_config(args)
    _, train_set, test_set = prepare_data(config)
    with epoch_progress(console, config.train.epochs) as on_epoch:
        result = train_stage(config, train_set, test_set, on_epoch)

    out_dir = config.output.path
    save_checkpoint(result.model, out_dir / MODEL_FILE)
    summary = {
        "test_accuracy": result.test_accuracy,
        "history": [{"epoch": h.epoch, "mean_loss": h.mean_loss, "accuracy": h.accuracy} for h in result.history],
        "seconds": result.seconds,
    }
    try:
        (out_dir / TRAIN_JSON).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as e:
        raise ReportError(out_dir / TRAIN_JSON, f"could not write training summary: {e.strerror or e}") from e
    console.print(
        f"Clean test accuracy: [bold]{result.test_accuracy:.3f}[/bold] (model saved to {out_dir / MODEL_FILE})"
    )
    return EXIT_OK


def cmd_attack(args: argparse.Namespace, console: Console) -> int:
    config = _load_run_config(args)
    model = load_checkpoint(args.model)
    report = run_experiment(config, model=model)
    console.print(sweep_table(_record_rows(report.records)))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, console: Console) -> int:
    config = _load_run_config(args)
    with epoch_progress(console, config.train.epochs) as on_epoch:
        report = run_experiment(config, on_epoch=on_epoch)
    console.print(sweep_table(_record_rows(report.records)))
    if report.stealth is not None:
        console.print(
            f"Largest ε with mean SSIM ≥ {config.attack.ssim_floor:g}: "
            f"[bold]{report.stealth.epsilon:g}[/bold] (accuracy {report.stealth.accuracy:.3f})"
        )
    console.print(f"Reports written to {config.output.path}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace, console: Console) -> int:
    run_dir = Path(args.run)
    rows = read_sweep_csv(run_dir / "sweep.csv")
    write_charts([(r["epsilon"], r["accuracy"], r["mean_ssim"]) for r in rows], run_dir)
    console.print(sweep_table(rows, title=f"ε sweep: {run_dir}"))
    return EXIT_OK


def cmd_ssim(args: argparse.Namespace, console: Console) -> int:
    value = ssim_images(load_pgm(args.a), load_pgm(args.b), args.window, args.dynamic_range)
    # Plain stdout, no rich markup
    print(f"{value:.6f}")
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, Console], int]] = {
    "synth": cmd_synth,
    "train": cmd_train,
    "attack": cmd_attack,
    "sweep": cmd_sweep,
    "report": cmd_report,
    "ssim": cmd_ssim,
}


def run(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv`` and dispatch; returns the process exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK

    configure_logging(args.verbose)
    console = Console()

    try:
        return COMMANDS[args.command](args, console)
    except KeyboardInterrupt:
        logger.info("Received keyboard interrupt, shutting down...")
        return EXIT_INTERRUPT
    except ConfigError as e:
        console.print(f"[red]Configuration error: {e}[/red]")
        return EXIT_CONFIG
    except DataError as e:
        console.print(f"[red]Data error: {e}[/red]")
        return EXIT_DATA
    except Exception as e:
        if args.verbose:
            logger.exception("Unexpected error occurred")
        console.print(f"[red]Error: {str(e)}[/red]")
        return EXIT_RUNTIME
    finally:
        logger.debug("Cleanup complete")


def main() -> None:
    """Main entry point for the CLI."""
    sys.exit(run())


if __name__ == "__main__":
    main()
