"""Main entry point: ``python main.py <command> ...`` runs the ``atmet`` CLI."""
import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
