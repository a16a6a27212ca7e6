"""UI utilities for consistent CLI interface."""

from collections.abc import Iterator
from contextlib import contextmanager

from rich.console import Console
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn


console = Console()
# Progress and errors go to stderr so stdout stays parseable.
err_console = Console(stderr=True)


@contextmanager
def progress_bar(*, transient: bool = True, enabled: bool = True) -> Iterator[Progress]:
    """Create a standardized progress bar on stderr.

    Args:
        transient: Whether the progress bar should be cleared after completion
        enabled: Render nothing when False (used for ``--json`` output)

    Returns:
        Progress context manager for use in with statement
    """
    with Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        TextColumn("{task.completed}/{task.total}"),
        TimeElapsedColumn(),
        transient=transient,
        console=err_console,
        disable=not enabled,
    ) as progress:
        yield progress
