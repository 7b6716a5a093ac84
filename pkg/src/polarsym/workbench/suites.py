"""
Verification suites run by ``polarsym verify``.

Each suite checks one structural result against brute force and returns a
``SuiteResult``. Checks are exhaustive at ``N <= 8`` when the domain fits
the cap and use a seeded sample of received vectors otherwise.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Any, Callable, Optional

from ..channel import ReceivedVector, apply_mask
from ..config import Limits
from ..counting import CountInstance, valid_a_primes
from ..equivalence import (
    Domain,
    ProbCache,
    bsc_canonicalize,
    cached_split_prob,
    domain_size,
    enumerate_classes,
    is_bsc_like,
    iter_domain,
    symmetry_orbit,
    verify_blocklength_invariance,
    verify_bound_i0,
    verify_doubling,
    verify_permutation_theorem,
    verify_reduction,
)
from ..errors import CapExceededError
from ..gf2 import block_exponent, polar_tail, row_space

if TYPE_CHECKING:
    from .commands import RunConfig

log = logging.getLogger(__name__)

EXHAUSTIVE_MAX_N = 8
ORBIT_MEMBER_SAMPLES = 8


class SuiteStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


@dataclass
class SuiteResult:
    """
    Outcome of one suite.

    Attributes
    ----------
    name : str
        Suite name.
    status : SuiteStatus
        ``FAIL`` as soon as one failure is recorded.
    checks : int
        Number of individual checks made.
    failures : list of dict
        One entry per failed check, with a counterexample where one exists.
    notes : list of str
        Checks left out and why.
    observations : list of dict
        Outcomes recorded without being asserted; they never fail a suite.
    """

    name: str
    status: SuiteStatus = SuiteStatus.PASS
    checks: int = 0
    failures: list[dict[str, Any]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    observations: list[dict[str, Any]] = field(default_factory=list)

    def check(self, ok: bool, **failure: Any):
        self.checks += 1
        if not ok:
            self.status = SuiteStatus.FAIL
            self.failures.append({"suite": self.name, **failure})

    def observe(self, held: bool, **outcome: Any):
        self.observations.append({"suite": self.name, "held": held, **outcome})

    def skip(self, reason: str) -> SuiteResult:
        self.status = SuiteStatus.SKIPPED
        self.notes.append(reason)
        return self

    @property
    def passed(self) -> bool:
        return self.status is not SuiteStatus.FAIL

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.name,
            "status": self.status.value,
            "checks": self.checks,
            "failures": list(self.failures),
            "notes": list(self.notes),
            "observations": list(self.observations),
        }


class _Context:
    """Per-run state shared by the suites: the sample source and probability caches."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.ch = cfg.channel
        self.n = cfg.n
        self.n_exp = block_exponent(cfg.n)
        self.limits: Limits = cfg.limits
        self._caches: dict[tuple[int, int], ProbCache] = {}

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.cfg.seed}:{salt}")

    def cache(self, n: int, i: int) -> ProbCache:
        return self._caches.setdefault((n, i), {})

    def exhaustive(self, domain: Domain, i: int) -> bool:
        return (
            self.n <= EXHAUSTIVE_MAX_N
            and domain_size(self.ch, self.n, i, domain) <= self.limits.max_domain
        )

    def vectors(self, domain: Domain, i: int, salt: str) -> list[ReceivedVector]:
        """The whole domain when exhaustive, otherwise a seeded sample of it."""
        if self.exhaustive(domain, i):
            return list(iter_domain(self.ch, self.n, i, domain))
        rng = self.rng(f"{salt}:{i}")
        size = domain_size(self.ch, self.n, i, domain)
        picks = sorted({rng.randrange(size) for _ in range(self.cfg.samples)})
        return [next(iter_domain(self.ch, self.n, i, domain, k, k + 1)) for k in picks]

    def prob(self, i: int, y: ReceivedVector):
        return cached_split_prob(self.ch, i, y, self.cache(len(y), i), self.limits)

    def row_space_fits(self, n: int, i: int) -> bool:
        return (1 << (n - i)) <= self.limits.max_row_space and n <= self.limits.max_matrix_size

    def labels(self, y: ReceivedVector) -> list[str]:
        return y.labels(self.ch)


def _candidate_permutations(n: int) -> list[tuple[int, ...]]:
    # XOR translations of the position index, then the bit reversal
    perms = [tuple(j ^ c for j in range(n)) for c in range(n)]
    width = block_exponent(n)
    reversal = tuple(int(format(j, f"0{width}b")[::-1], 2) if width else 0 for j in range(n))
    if reversal not in perms:
        perms.append(reversal)
    return perms


def suite_permutation(ctx: _Context) -> SuiteResult:
    result = SuiteResult("permutation")
    perms = _candidate_permutations(ctx.n)
    for i in ctx.cfg.indices:
        if not ctx.row_space_fits(ctx.n, i):
            result.notes.append(f"i={i}: row space over the cap")
            continue
        vectors = ctx.vectors(Domain.FULL, i, "permutation")
        for perm in perms:
            verdict = verify_permutation_theorem(
                ctx.ch, i, perm, vectors, ctx.cache(ctx.n, i), ctx.limits
            )
            if not verdict.premise_holds:
                continue
            bad = verdict.counterexample
            result.check(
                verdict.passed,
                i=i,
                perm=list(perm),
                y=ctx.labels(bad) if bad else None,
            )
    return result


def suite_orbit(ctx: _Context) -> SuiteResult:
    result = SuiteResult("orbit")
    for i in ctx.cfg.indices:
        if not ctx.row_space_fits(ctx.n, i):
            result.notes.append(f"i={i}: row space over the cap")
            continue
        vectors = ctx.vectors(Domain.FULL, i, "orbit")
        rng = ctx.rng(f"orbit-pick:{i}")
        if len(vectors) > ctx.cfg.samples:
            vectors = sorted(rng.sample(vectors, ctx.cfg.samples))
        exhaustive = ctx.exhaustive(Domain.FULL, i)
        A = polar_tail(ctx.n_exp, i, ctx.limits)
        for y in vectors:
            if exhaustive:
                orbit = symmetry_orbit(ctx.ch, i, y, ctx.limits)
                size = len(orbit)
                result.check(
                    (1 << (ctx.n - i)) % size == 0, i=i, y=ctx.labels(y), orbit_size=size
                )
                members = sorted(orbit)
            else:
                steps = sorted(rng.randrange(1 << A.nrows) for _ in range(ORBIT_MEMBER_SAMPLES))
                members = [
                    apply_mask(ctx.ch, next(row_space(A, k, k + 1, ctx.limits)), y) for k in steps
                ]
            p = ctx.prob(i, y)
            for v in members:
                if ctx.prob(i, v) != p:
                    result.check(False, i=i, y=ctx.labels(y), v=ctx.labels(v))
                    break
            else:
                result.check(True)
    return result


def suite_canonicalization(ctx: _Context) -> SuiteResult:
    result = SuiteResult("canonicalization")
    if not is_bsc_like(ctx.ch):
        return result.skip(f"{ctx.ch} is not BSC-like")
    for i in ctx.cfg.indices:
        if not ctx.row_space_fits(ctx.n, i):
            result.notes.append(f"i={i}: row space over the cap")
            continue
        for y in ctx.vectors(Domain.FULL, i, "canonicalization"):
            c = bsc_canonicalize(ctx.ch, i, y, ctx.limits)
            ok = (
                not any(c.syms[i:])
                and bsc_canonicalize(ctx.ch, i, c, ctx.limits) == c
                and ctx.prob(i, c) == ctx.prob(i, y)
            )
            result.check(ok, i=i, y=ctx.labels(y), canonical=ctx.labels(c))
        if ctx.exhaustive(Domain.FULL, i):
            full = enumerate_classes(ctx.ch, ctx.n_exp, i, Domain.FULL, ctx.cfg.workers, ctx.limits)
            canon = enumerate_classes(
                ctx.ch, ctx.n_exp, i, Domain.BSC_CANONICAL, ctx.cfg.workers, ctx.limits
            )
            result.check(
                full.count == canon.count, i=i, full_count=full.count, canonical_count=canon.count
            )
    return result


def suite_doubling(ctx: _Context) -> SuiteResult:
    result = SuiteResult("doubling")
    binary = is_bsc_like(ctx.ch)
    domain = Domain.BSC_CANONICAL if binary else Domain.FULL
    # the lift is only asserted for binary alphabets; other alphabets are recorded
    record = result.check if binary else result.observe
    for i in ctx.cfg.indices:
        if not ctx.row_space_fits(2 * ctx.n, i):
            result.notes.append(f"i={i}: row space at N={2 * ctx.n} over the cap")
            continue
        vectors = ctx.vectors(domain, i, "doubling")
        for companion in range(ctx.ch.size):
            verdict = verify_doubling(
                ctx.ch, ctx.n_exp, i, companion, vectors, ctx.cache(ctx.n, i), ctx.limits
            )
            pair = verdict.counterexample
            record(
                verdict.passed,
                i=i,
                companion=ctx.ch.symbols[companion],
                pair=[ctx.labels(v) for v in pair] if pair else None,
            )
    return result


def suite_blocklength(ctx: _Context) -> SuiteResult:
    result = SuiteResult("blocklength")
    if not is_bsc_like(ctx.ch):
        return result.skip(f"{ctx.ch} is not BSC-like")
    for i in ctx.cfg.indices:
        if not ctx.row_space_fits(2 * ctx.n, i) or (1 << i) > ctx.limits.max_domain:
            result.notes.append(f"i={i}: brute force at N={2 * ctx.n} over the cap")
            continue
        verdict = verify_blocklength_invariance(
            ctx.ch, i, ctx.n_exp, ctx.n_exp + 1, ctx.cfg.workers, ctx.limits
        )
        result.check(verdict.passed, i=i, counts={str(n): c for n, c in verdict.counts.items()})
    return result


def suite_reduction(ctx: _Context) -> SuiteResult:
    result = SuiteResult("reduction")
    for i in ctx.cfg.indices:
        original: Optional[int] = None
        for a_prime in valid_a_primes(CountInstance.for_channel(ctx.ch, ctx.n, i)):
            try:
                verdict = verify_reduction(
                    ctx.ch, ctx.n_exp, i, a_prime, ctx.cfg.workers, original, ctx.limits
                )
            except CapExceededError as exc:
                result.notes.append(f"i={i}, a'={a_prime}: {exc}")
                continue
            original = verdict.original_count
            result.check(
                verdict.passed,
                i=i,
                a_prime=a_prime,
                original_count=verdict.original_count,
                reduced_count=verdict.reduced_count,
            )
    return result


def suite_bound(ctx: _Context) -> SuiteResult:
    result = SuiteResult("bound")
    for n_exp in range(ctx.n_exp + 1):
        try:
            verdict = verify_bound_i0(ctx.ch, n_exp, ctx.cfg.workers, ctx.limits)
        except CapExceededError as exc:
            result.notes.append(f"N={1 << n_exp}: {exc}")
            continue
        result.check(
            verdict.passed,
            n=verdict.n,
            brute=verdict.brute,
            bound=verdict.bound,
            exactness=verdict.exactness.value,
        )
    return result


SUITES: dict[str, Callable[[_Context], SuiteResult]] = {
    "permutation": suite_permutation,
    "orbit": suite_orbit,
    "canonicalization": suite_canonicalization,
    "doubling": suite_doubling,
    "blocklength": suite_blocklength,
    "reduction": suite_reduction,
    "bound": suite_bound,
}


def run_suites(cfg: RunConfig, names: list[str]) -> list[SuiteResult]:
    ctx = _Context(cfg)
    results = []
    for name in names:
        suite = SUITES[name](ctx)
        log.info("suite %s: %s (%d checks)", name, suite.status.value, suite.checks)
        results.append(suite)
    return results
