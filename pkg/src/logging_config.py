"""Logging configuration for the application."""

import logging

from rich.logging import RichHandler


def configure_logging(verbose: bool = False) -> None:
    """Configure logging with different verbosity levels."""
    # Set up root logger
    root_logger = logging.getLogger()
    root_logger.setLevel(logging.WARNING)  # Default to WARNING for all loggers

    # Remove any existing handlers
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    # Create and configure rich handler
    rich_handler = RichHandler(
        rich_tracebacks=True,
        markup=False,
        show_time=False,
        show_path=verbose,
        enable_link_path=verbose,
        level=logging.DEBUG if verbose else logging.INFO,
    )
    rich_handler.setFormatter(logging.Formatter("%(message)s"))
    root_logger.addHandler(rich_handler)

    # App loggers report progress at INFO; verbose adds I/O and shape details
    app_namespaces = [
        "src",
        "src.tensor",
        "src.nn",
        "src.attack",
        "src.metrics",
        "src.data",
        "src.experiment",
    ]

    for namespace in app_namespaces:
        logger = logging.getLogger(namespace)
        logger.setLevel(logging.DEBUG if verbose else logging.INFO)

    # Disable matplotlib font manager logging as it's particularly noisy
    logging.getLogger("matplotlib.font_manager").disabled = True
    logging.getLogger("PIL").setLevel(logging.WARNING)
