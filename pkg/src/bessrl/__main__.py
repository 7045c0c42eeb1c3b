"""Module execution hook: ``python -m bessrl`` behaves like the CLI."""

from .cli import main

if __name__ == "__main__":
    raise SystemExit(main())
