"""Learning the safe-path set by sampling and oracle generalization.

The loop draws a budgeted number of safe example sequences, turns each
into a fully-bound monomial, and tries to drop one bound position at a
time, keeping a drop only when the membership oracle confirms the more
general monomial still covers exclusively safe behaviour. Examples
already implied by the accumulated set are skipped but still consume
budget: the sample-size bound counts draws, not distinct ones.

Oracle semantics deserve a word. The default ("all-safe") answers true
only when EVERY concrete sequence the candidate covers is safe, which
is what soundness of the learned set requires. The "paper-literal"
variant instead answers true as soon as ONE covered sequence is safe.
It is provided for comparison because published pseudocode for this
kind of oracle sometimes reads that way, but it is unsound: it happily
generalizes over unsafe behaviour. Nothing in this package uses it
except by explicit request.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass

from .errors import SamplingCapError, ValidationError
from .monomials import Monomial, MonomialSet
from .sul import SafetyQuery

__all__ = ["LearnerConfig", "LearnerStats", "learn_safe_set",
           "draw_safe_example", "query_oracle",
           "ORACLE_ALL_SAFE", "ORACLE_PAPER_LITERAL"]

log = logging.getLogger(__name__)

ORACLE_ALL_SAFE = "all-safe"
ORACLE_PAPER_LITERAL = "paper-literal"

DEFAULT_SAMPLE_ATTEMPT_CAP = 100_000
DEFAULT_ORACLE_EXPANSION_CAP = 1_000_000


@dataclass(frozen=True)
class LearnerConfig:
    horizon: int
    sample_budget: int
    max_sample_attempts: int = DEFAULT_SAMPLE_ATTEMPT_CAP
    rng_seed: int = 0
    generalization_order: tuple[int, ...] | None = None
    oracle_semantics: str = ORACLE_ALL_SAFE
    oracle_expansion_cap: int = DEFAULT_ORACLE_EXPANSION_CAP

    def __post_init__(self):
        if self.horizon < 1:
            raise ValidationError(f"horizon must be >= 1, got {self.horizon}")
        if self.sample_budget < 1:
            raise ValidationError("sample budget must be >= 1")
        if self.max_sample_attempts < 1:
            raise ValidationError("max_sample_attempts must be >= 1")
        if self.oracle_expansion_cap < 1:
            raise ValidationError("oracle_expansion_cap must be >= 1")
        if self.oracle_semantics not in (ORACLE_ALL_SAFE,
                                         ORACLE_PAPER_LITERAL):
            raise ValidationError(
                f"unknown oracle semantics {self.oracle_semantics!r}")
        if self.generalization_order is not None:
            if sorted(self.generalization_order) != \
                    list(range(1, self.horizon + 1)):
                raise ValidationError(
                    "generalization_order must be a permutation of "
                    f"1..{self.horizon}")

    @property
    def order(self) -> tuple[int, ...]:
        if self.generalization_order is not None:
            return self.generalization_order
        return tuple(range(1, self.horizon + 1))


@dataclass
class LearnerStats:
    """Work accounting for one learning run.

    ``sample_attempts`` counts every rejection-sampling draw, safe or
    not; together with ``oracle_sequence_queries`` it accounts for every
    query the adapter answered:
    query_count delta == sample_attempts + oracle_sequence_queries.
    """

    examples_drawn: int = 0
    examples_skipped_implied: int = 0
    sample_attempts: int = 0
    oracle_calls: int = 0
    oracle_sequence_queries: int = 0
    wall_time: float = 0.0


def draw_safe_example(sul: SafetyQuery, horizon: int, rng: random.Random,
                      max_attempts: int) -> Monomial:
    """Rejection-sample a safe sequence; return it fully bound.

    Raises SamplingCapError when max_attempts uniform draws all come
    back unsafe, the signature of a (near-)zero safety probability.
    """
    if max_attempts < 1:
        raise ValidationError("max_attempts must be >= 1")
    for _ in range(max_attempts):
        seq = sul.random_input(horizon, rng)
        if sul.is_safe(seq):
            return Monomial.from_sequence(seq)
    raise SamplingCapError(max_attempts)


def query_oracle(sul: SafetyQuery, candidate: Monomial,
                 semantics: str = ORACLE_ALL_SAFE,
                 expansion_cap: int = DEFAULT_ORACLE_EXPANSION_CAP,
                 stats: LearnerStats | None = None) -> bool:
    """Decide whether a candidate generalization is acceptable.

    All-safe: true iff every covered sequence is safe (stops at the
    first unsafe one). Paper-literal: true iff any covered sequence is
    safe (stops at the first safe one; unsound, see module docstring).

    A candidate whose expansion exceeds ``expansion_cap`` is rejected
    with a logged warning rather than queried: "too big to check" must
    degrade to "keep the binding", never to a fabricated verdict.
    """
    if stats is not None:
        stats.oracle_calls += 1
    size = candidate.expansion_size(len(sul.input_alphabet))
    if size > expansion_cap:
        log.warning(
            "not generalizing %s: expansion of %d sequences exceeds cap %d",
            candidate, size, expansion_cap)
        return False
    want_all = semantics == ORACLE_ALL_SAFE
    if not want_all and semantics != ORACLE_PAPER_LITERAL:
        raise ValidationError(f"unknown oracle semantics {semantics!r}")
    before = sul.query_count
    try:
        for seq in candidate.expand(sul.input_alphabet):
            safe = sul.is_safe(seq)
            if want_all and not safe:
                return False
            if not want_all and safe:
                return True
        return want_all
    finally:
        if stats is not None:
            stats.oracle_sequence_queries += sul.query_count - before


def learn_safe_set(sul: SafetyQuery,
                   cfg: LearnerConfig) -> tuple[MonomialSet, LearnerStats]:
    """Run the full budgeted learning loop.

    Returns the learned disjunction of monomials plus the work stats.
    With the default all-safe oracle every sequence the result covers is
    safe; the result never claims safety it has not checked.
    """
    rng = random.Random(cfg.rng_seed)
    learned = MonomialSet(cfg.horizon, ())
    stats = LearnerStats()
    started = time.perf_counter()
    for _ in range(cfg.sample_budget):
        before = sul.query_count
        example = draw_safe_example(sul, cfg.horizon, rng,
                                    cfg.max_sample_attempts)
        stats.sample_attempts += sul.query_count - before
        stats.examples_drawn += 1
        if learned.implies(example):
            stats.examples_skipped_implied += 1
            continue
        calls_before = stats.oracle_calls
        for pos in cfg.order:
            if pos not in example.binding_map:
                continue
            candidate = example.without(pos)
            if query_oracle(sul, candidate, cfg.oracle_semantics,
                            cfg.oracle_expansion_cap, stats):
                example = candidate
        learned = learned.add(example)
        log.info("appended %s (oracle calls %d)", example,
                 stats.oracle_calls - calls_before)
    stats.wall_time = time.perf_counter() - started
    return learned, stats
