"""Fidelity ledger: per-truncation targets from a global minimum fidelity.

The final fidelity of a truncated simulation is estimated by the product of
the individual truncation fidelities. Given ``n`` planned truncations and a
floor ``f_min`` the naive schedule asks every truncation for
``f_min ** (1 / n)``. The adaptive strategies reinvest the surplus that
accumulates because achieved fidelities always overshoot their targets:

* ``nearest`` hands the whole surplus (or deficit) to the next truncation,
  leaving later targets at the naive value;
* ``global`` spreads it evenly over all remaining truncations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

STRATEGIES = ("naive", "nearest", "global")


class LedgerError(RuntimeError):
    """Ledger used out of order (e.g. asked for a target when complete)."""


@dataclass
class FidelityLedger:
    f_min: float
    n_planned: int
    strategy: str = "naive"
    noisy: bool = False
    achieved: list[float] = field(default_factory=list)
    targets: list[float] = field(default_factory=list)
    capped: list[bool] = field(default_factory=list)
    estimate: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.f_min <= 1.0:
            raise ValueError(f"f_min must be in (0, 1], got {self.f_min}")
        if self.n_planned < 0:
            raise ValueError(f"n_planned must be >= 0, got {self.n_planned}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")

    @property
    def base_target(self) -> float:
        return self.f_min ** (1.0 / self.n_planned) if self.n_planned else 1.0

    @property
    def remaining(self) -> int:
        return self.n_planned - len(self.achieved)

    @property
    def complete(self) -> bool:
        return self.remaining <= 0

    @property
    def guarantee_held(self) -> bool:
        """False once a bond cap forced a truncation below its target."""
        return not any(c and a < t for a, t, c in zip(self.achieved, self.targets, self.capped))

    def next_target(self) -> float:
        if self.complete:
            raise LedgerError(f"all {self.n_planned} planned truncations already recorded")
        base = self.base_target
        if self.strategy == "naive":
            t = base
        elif self.strategy == "global":
            t = (self.f_min / self.estimate) ** (1.0 / self.remaining)
        else:
            t = self.f_min / (self.estimate * base ** (self.remaining - 1))
        return min(t, 1.0)

    @property
    def targets_remaining(self) -> list[float]:
        if self.complete:
            return []
        t = self.next_target()
        rest = self.remaining - 1
        if self.strategy == "global":
            return [t] * (rest + 1)
        return [t] + [self.base_target] * rest

    def record(self, f_achieved: float, target: float | None = None, capped: bool = False) -> FidelityLedger:
        """Append one truncation fidelity and advance the schedule."""
        if not 0.0 < f_achieved <= 1.0:
            raise ValueError(f"achieved fidelity must be in (0, 1], got {f_achieved}")
        if target is None:
            target = self.next_target()
        elif self.complete:
            raise LedgerError(f"all {self.n_planned} planned truncations already recorded")
        self.achieved.append(float(f_achieved))
        self.targets.append(float(target))
        self.capped.append(bool(capped))
        self.estimate *= f_achieved
        return self

    def product(self) -> float:
        return math.prod(self.achieved)


def make_ledger(f_min: float, n: int, strategy: str = "naive", noisy: bool = False) -> FidelityLedger:
    return FidelityLedger(f_min=f_min, n_planned=n, strategy=strategy, noisy=noisy)


@dataclass(frozen=True)
class Certificate:
    estimate: float
    is_lower_bound: bool
    guarantee_held: bool


def certify(ledger: FidelityLedger) -> Certificate:
    """Product estimate of the final fidelity.

    For noisy runs the product is a lower bound (noise shrinks what later
    truncations have to discard); for noiseless runs it is an approximation.
    """
    return Certificate(ledger.estimate, ledger.noisy, ledger.guarantee_held)
