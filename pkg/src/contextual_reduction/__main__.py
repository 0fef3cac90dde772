"""Run the contextual-reduction command line."""

import logging
import os
import sys

from .main import run_cli


def main() -> None:
    """Configure logging from the environment, then hand over to the CLI."""
    level = os.environ.get("CONTEXTUAL_REDUCTION_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
