"""
polarsym workbench

Command-line runs over a channel and block length: class counts,
enumerations, verification suites and the class-count table.
"""

from .commands import (
    Method,
    OutputFormat,
    RunConfig,
    cmd_count,
    cmd_enumerate,
    cmd_table,
    cmd_validate_channel,
    cmd_verify,
)
from .reports import render
from .suites import SUITES, SuiteResult, SuiteStatus

__all__ = [
    'Method',
    'OutputFormat',
    'RunConfig',
    'cmd_count',
    'cmd_enumerate',
    'cmd_table',
    'cmd_validate_channel',
    'cmd_verify',
    'render',
    'SUITES',
    'SuiteResult',
    'SuiteStatus',
    'run_workbench',
]


def run_workbench(channel: str, n: int, indices: str = "all", **kwargs) -> dict:
    """
    Convenience function to run every verification suite programmatically.

    Example:
        >>> from polarsym.workbench import run_workbench
        >>> report = run_workbench("bsc:1/3", 4)
        >>> report["failures"]
        []
    """
    return cmd_verify(RunConfig.build(channel, n, indices, **kwargs))
