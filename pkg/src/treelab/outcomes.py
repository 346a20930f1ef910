"""Branch outcomes: the test an instance must pass to follow an arc."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Equals:
    value: int

    nominal = True

    def matches(self, cell):
        return cell is not None and cell == self.value


@dataclass(frozen=True)
class InSubset:
    values: frozenset

    nominal = True

    def __post_init__(self):
        object.__setattr__(self, "values", frozenset(self.values))

    def matches(self, cell):
        return cell is not None and cell in self.values


@dataclass(frozen=True)
class LE:
    threshold: float

    nominal = False

    def matches(self, cell):
        return cell is not None and cell <= self.threshold


@dataclass(frozen=True)
class GT:
    threshold: float

    nominal = False

    def matches(self, cell):
        return cell is not None and cell > self.threshold


Outcome = Equals | InSubset | LE | GT
