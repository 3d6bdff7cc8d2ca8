"""The single question every engine asks: is this input sequence safe?

SafetyQuery abstracts over where the answer comes from. The in-process
adapter wraps a MealyMachine and reads the verdict off the final state;
the wire adapter (see wire.py) drives an external process or socket and
classifies the final output token. The learner, the Monte Carlo
baseline and the CLI all talk to this interface only, so a model file
and a live black box are interchangeable.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from typing import Sequence

from .errors import ValidationError
from .mealy import MealyMachine

__all__ = ["SafetyQuery", "MachineSafetyQuery"]


class SafetyQuery(ABC):
    """Deterministic safety membership queries over a fixed input alphabet.

    ``query_count`` increments once per answered query; failed queries
    (transport errors and the like) do not count. Implementations must
    be deterministic: the same sequence always gets the same verdict.
    """

    def __init__(self):
        self.query_count = 0

    @property
    @abstractmethod
    def input_alphabet(self) -> tuple[str, ...]:
        """The ordered input alphabet; the order is canonical."""

    @abstractmethod
    def _answer(self, seq: tuple[str, ...]) -> bool:
        """Produce the verdict for one sequence."""

    def is_safe(self, seq: Sequence[str]) -> bool:
        symbols = tuple(seq)
        alphabet = set(self.input_alphabet)
        unknown = [s for s in symbols if s not in alphabet]
        if unknown:
            raise ValidationError(f"symbols not in alphabet: {unknown}")
        verdict = self._answer(symbols)
        self.query_count += 1
        return verdict

    def random_input(self, n: int, rng: random.Random) -> tuple[str, ...]:
        """n symbols drawn independently, uniformly from the alphabet."""
        if n < 1:
            raise ValidationError(f"horizon must be >= 1, got {n}")
        alphabet = self.input_alphabet
        return tuple(rng.choice(alphabet) for _ in range(n))


class MachineSafetyQuery(SafetyQuery):
    """In-process adapter: run the machine, check the final state."""

    def __init__(self, machine: MealyMachine):
        super().__init__()
        self.machine = machine

    @property
    def input_alphabet(self) -> tuple[str, ...]:
        return self.machine.inputs

    def _answer(self, seq: tuple[str, ...]) -> bool:
        return self.machine.trace(seq).safe
