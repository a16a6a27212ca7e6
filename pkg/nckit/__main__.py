#!/usr/bin/env python3
"""Main entry point for the nckit CLI."""

from .cli import main


if __name__ == "__main__":
    main()
