"""
The workbench operations behind each subcommand.

Every ``cmd_*`` takes a ``RunConfig`` and returns a plain report
dictionary; rendering and exit codes are left to the command line.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional, Union

from ..channel import (
    SymmetricChannel,
    channel_to_dict,
    distinct_d_check,
    is_degenerate,
    resolve_channel,
)
from ..config import DEFAULT_LIMITS, Limits
from ..counting import (
    APrimePolicy,
    CountInstance,
    class_count,
    naive_bound,
)
from ..equivalence import default_domain, domain_size, enumerate_classes, is_bsc_like, report_to_dict
from ..errors import CapExceededError, ChannelError, ChannelValidationError, DimensionError
from ..gf2 import block_exponent
from .suites import SUITES, run_suites

log = logging.getLogger(__name__)

SCHEMA = "polarsym.report/1"


class Method(Enum):
    FORMULA = "formula"
    BRUTE = "brute"
    BOTH = "both"


class OutputFormat(Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"


def parse_indices(text: str, n: int) -> tuple[int, ...]:
    """
    Read ``all``, a single index, an inclusive range ``a-b``, or a comma
    separated mix of those into sorted bit indices in ``0..n``.
    """
    text = text.strip().lower()
    if text == "all":
        return tuple(range(n + 1))
    indices = set()
    for piece in text.split(","):
        piece = piece.strip()
        lo, sep, hi = piece.partition("-")
        try:
            if sep:
                indices.update(range(int(lo), int(hi) + 1))
            else:
                indices.add(int(piece))
        except ValueError:
            raise DimensionError(f"cannot read bit index {piece!r}") from None
    bad = [i for i in indices if not 0 <= i <= n]
    if bad or not indices:
        raise DimensionError(f"bit indices must lie in 0..{n}, got {text!r}")
    return tuple(sorted(indices))


def parse_a_prime(text: str) -> Union[APrimePolicy, int]:
    try:
        return APrimePolicy(text.lower())
    except ValueError:
        pass
    try:
        return int(text)
    except ValueError:
        raise DimensionError(f"a' must be 'auto', 'sqrt' or a power of two, got {text!r}") from None


@dataclass(frozen=True)
class RunConfig:
    """
    Everything a workbench run depends on.

    Attributes
    ----------
    channel : SymmetricChannel
        The validated channel.
    channel_spec : str
        How the channel was given (``bsc:1/3``, ``bec:1/2`` or a path).
    n : int
        Block length, a power of two.
    indices : tuple of int
        Bit indices to process.
    method : Method
        Which counting paths to run.
    fmt : OutputFormat
        How the report is rendered.
    limits : Limits
        Size caps.
    workers : int
        Worker processes for enumeration; output does not depend on it.
    seed : int
        Seed for sampled verification.
    samples : int
        Sample size when verification is not exhaustive.
    suites : tuple of str
        Verification suites to run.
    a_prime : APrimePolicy or int
        Reduction policy for the closed-form count.
    """

    channel: SymmetricChannel
    channel_spec: str
    n: int
    indices: tuple[int, ...]
    method: Method = Method.BOTH
    fmt: OutputFormat = OutputFormat.JSON
    limits: Limits = DEFAULT_LIMITS
    workers: int = 1
    seed: int = 0
    samples: int = 200
    suites: tuple[str, ...] = field(default_factory=lambda: tuple(SUITES))
    a_prime: Union[APrimePolicy, int] = APrimePolicy.AUTO

    def __post_init__(self):
        block_exponent(self.n)
        if any(not 0 <= i <= self.n for i in self.indices):
            raise DimensionError(f"bit indices must lie in 0..{self.n}")
        if self.workers < 1:
            raise DimensionError("workers must be at least 1")
        if self.samples < 1:
            raise DimensionError("samples must be at least 1")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise DimensionError(f"unknown suites {unknown}; choose from {list(SUITES)}")

    @staticmethod
    def build(channel_spec: str, n: int, indices: str = "all", **kwargs: Any) -> RunConfig:
        return RunConfig(
            resolve_channel(channel_spec), channel_spec, n, parse_indices(indices, n), **kwargs
        )

    @property
    def n_exp(self) -> int:
        return block_exponent(self.n)

    def to_dict(self) -> dict[str, Any]:
        # worker count is left out so reports do not depend on it
        a_prime = self.a_prime.value if isinstance(self.a_prime, APrimePolicy) else self.a_prime
        return {
            "channel": self.channel_spec,
            "n": self.n,
            "i": list(self.indices),
            "method": self.method.value,
            "format": self.fmt.value,
            "a_prime": a_prime,
            "max_domain": self.limits.max_domain,
            "max_row_space": self.limits.max_row_space,
            "seed": self.seed,
            "samples": self.samples,
        }


def make_report(
    command: str,
    config: Optional[dict[str, Any]],
    results: list[Any],
    failures: list[Any],
) -> dict[str, Any]:
    return {
        "schema": SCHEMA,
        "command": command,
        "config": config or {},
        "results": results,
        "failures": failures,
    }


def _brute_count(cfg: RunConfig, i: int, required: bool) -> Optional[int]:
    ch = cfg.channel
    size = domain_size(ch, cfg.n, i, default_domain(ch))
    rows = 1 << (cfg.n - i)
    if size > cfg.limits.max_domain or rows > cfg.limits.max_row_space:
        if required:
            what, value, cap = (
                ("domain", size, cfg.limits.max_domain)
                if size > cfg.limits.max_domain
                else ("row space", rows, cfg.limits.max_row_space)
            )
            raise CapExceededError(what, value, cap, "lower --n or use --method formula")
        return None
    return enumerate_classes(ch, cfg.n_exp, i, workers=cfg.workers, limits=cfg.limits).count


def cmd_count(cfg: RunConfig) -> dict[str, Any]:
    """Formula count, brute count and naive bound per bit index."""
    ch = cfg.channel
    degenerate = is_degenerate(ch)
    results, failures = [], []
    for i in cfg.indices:
        row: dict[str, Any] = {"i": i, "naive": naive_bound(ch, i), "degenerate": degenerate}
        formula = None
        if cfg.method is not Method.BRUTE:
            formula = class_count(ch, CountInstance.for_channel(ch, cfg.n, i), cfg.a_prime, cfg.limits)
            row.update(
                formula=formula.value,
                exactness=formula.exactness.value,
                a_prime=formula.a_prime,
            )
        brute = None
        if cfg.method is not Method.FORMULA:
            brute = _brute_count(cfg, i, required=True)
            row["brute"] = brute
        if formula is not None and brute is not None:
            row["agree"] = brute == formula.value
            if brute > formula.value:
                failures.append({"i": i, "reason": f"brute count {brute} exceeds bound {formula.value}"})
            elif formula.exact and brute != formula.value:
                failures.append({"i": i, "reason": f"exact count {formula.value} but brute {brute}"})
        results.append(row)
        log.info("count i=%d: %s", i, row)
    return make_report("count", cfg.to_dict(), results, failures)


def cmd_enumerate(cfg: RunConfig) -> dict[str, Any]:
    """Full class listings per bit index."""
    results = []
    for i in cfg.indices:
        report = enumerate_classes(cfg.channel, cfg.n_exp, i, workers=cfg.workers, limits=cfg.limits)
        results.append(report_to_dict(report, cfg.channel))
    return make_report("enumerate", cfg.to_dict(), results, [])


def cmd_verify(cfg: RunConfig) -> dict[str, Any]:
    """Run the selected verification suites."""
    suites = run_suites(cfg, list(cfg.suites))
    failures = [f for s in suites for f in s.failures]
    return make_report("verify", cfg.to_dict(), [s.to_dict() for s in suites], failures)


def cmd_table(cfg: RunConfig) -> dict[str, Any]:
    """
    One row per ``a = N, N/2, ..., 1`` with ``i = N - a``: the formula count,
    the brute count where it fits the caps, and the naive bound.
    """
    ch = cfg.channel
    if not is_bsc_like(ch):
        raise ChannelError(f"the table is defined for BSC-like channels, not {ch}")
    results, failures = [], []
    a = cfg.n
    while a >= 1:
        i = cfg.n - a
        formula = class_count(ch, CountInstance.for_channel(ch, cfg.n, i), cfg.a_prime, cfg.limits)
        brute = _brute_count(cfg, i, required=False) if cfg.method is not Method.FORMULA else None
        results.append(
            {"i": i, "formula": formula.value, "brute": brute, "naive": naive_bound(ch, i)}
        )
        if brute is not None and (
            brute > formula.value or (formula.exact and brute != formula.value)
        ):
            failures.append({"i": i, "reason": f"formula {formula.value} vs brute {brute}"})
        a //= 2
    return make_report("table", cfg.to_dict(), results, failures)


def cmd_validate_channel(channel_spec: str) -> dict[str, Any]:
    """Load a channel and report its structure, or every violation it has."""
    try:
        ch = resolve_channel(channel_spec)
    except ChannelValidationError as exc:
        return make_report("validate-channel", {"channel": channel_spec}, [], list(exc.violations))
    part = ch.partition
    result = {
        "channel": channel_to_dict(ch),
        "s1": part.s1,
        "s2": part.s2,
        "degenerate": is_degenerate(ch),
        "distinct_d": distinct_d_check(ch),
    }
    return make_report("validate-channel", {"channel": channel_spec}, [result], [])
