"""
Decorator utilities for the nckit command line.

Library code raises ``NckitError`` subclasses and returns verdicts; the
decorator here is the single place where both become process exit codes.
"""

from collections.abc import Callable
from functools import wraps
from typing import Any

from click import Context
from rich.markup import escape

from .exceptions import BudgetExceededError, NckitError
from .ui import err_console


EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def with_exit_codes(f: Callable[..., bool | None]) -> Callable[..., None]:
    """Decorator mapping a command's verdict and errors to exit codes.

    The decorated function receives the click.Context first and returns the
    answer to the question the command asks: True (or None for commands that
    only produce output) exits 0, False exits 1.

    Args:
        f: Command body. Should accept a click.Context as first argument.

    Returns:
        A wrapped function that always leaves through ``ctx.exit``.

    The wrapped function will:
    1. Run the command body
    2. Print a one-line message on stderr for any nckit error
    3. Exit 3 when a budget was exceeded and 2 for any other nckit error
    """

    @wraps(f)
    def wrapper(ctx: Context, *args: Any, **kwargs: Any) -> None:
        try:
            verdict = f(ctx, *args, **kwargs)
        except BudgetExceededError as e:
            err_console.print(f"[red]Budget exceeded:[/red] {escape(str(e))}")
            ctx.exit(EXIT_BUDGET)
        except NckitError as e:
            err_console.print(f"[red]Error:[/red] {escape(str(e))}")
            ctx.exit(EXIT_USAGE)
        ctx.exit(EXIT_NO if verdict is False else EXIT_YES)

    return wrapper
