"""Width-style novelty over object-position tuples, capped at size 3.

The novelty of a generated state is the size of the smallest set of
(object, position) assignments that has never appeared together in any
previously recorded state; 4 is the "not novel up to the cap" sentinel.
Novelty must be queried before the state is recorded.
"""
from __future__ import annotations

from itertools import combinations

from .core import State

NOVELTY_CAP = 3
NOT_NOVEL = NOVELTY_CAP + 1


class NoveltyArchive:
    """Monotone membership structure over 1-, 2- and 3-tuples of assignments."""

    def __init__(self) -> None:
        self.seen1: set = set()
        self.seen2: set = set()
        self.seen3: set = set()

    def novelty(self, state: State) -> int:
        """Smallest k <= 3 with an unseen k-tuple in `state`, else 4."""
        atoms = tuple(enumerate(state))
        seen1 = self.seen1
        for atom in atoms:
            if atom not in seen1:
                return 1
        seen2 = self.seen2
        for pair in combinations(atoms, 2):
            if pair not in seen2:
                return 2
        seen3 = self.seen3
        for triple in combinations(atoms, 3):
            if triple not in seen3:
                return 3
        return NOT_NOVEL

    def record(self, state: State) -> None:
        """Insert every 1-, 2- and 3-tuple of the state; never removes."""
        atoms = tuple(enumerate(state))
        self.seen1.update(atoms)
        self.seen2.update(combinations(atoms, 2))
        self.seen3.update(combinations(atoms, 3))
