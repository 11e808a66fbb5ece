import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from mbcsma.errors import OracleTooLargeError
from mbcsma.phy.channel import BandPlan

DEFAULT_ASSIGNMENT_BUDGET = 2_000_000


@dataclass(frozen=True)
class SlotOracle:
    """Exact outcome probabilities of one round where every transmitter picks one band uniformly."""

    n_transmitters: int
    n_bands: int
    p_station_collision: float
    p_round_success: float


def slot_oracle(n_transmitters: int, plan: BandPlan, budget: int = DEFAULT_ASSIGNMENT_BUDGET) -> SlotOracle:
    """
    Enumerate all N^n band assignments of n single-band RTS.

    `p_station_collision` is the chance that a tagged transmitter (the first) shares its band;
    `p_round_success` is the chance that at least one band carries exactly one RTS.

    :raises OracleTooLargeError: If N^n exceeds `budget`
    """
    if n_transmitters < 1:
        raise ValueError(f"n_transmitters must be at least 1, got {n_transmitters}")
    total = plan.n_bands**n_transmitters
    if total > budget:
        raise OracleTooLargeError(
            f"{plan.n_bands}^{n_transmitters} = {total} assignments exceed the budget of {budget}"
        )

    tagged_collided = 0
    successful = 0
    for assignment in itertools.product(range(plan.n_bands), repeat=n_transmitters):
        load = Counter(assignment)
        if load[assignment[0]] >= 2:
            tagged_collided += 1
        if 1 in load.values():
            successful += 1
    return SlotOracle(
        n_transmitters=n_transmitters,
        n_bands=plan.n_bands,
        p_station_collision=float(Fraction(tagged_collided, total)),
        p_round_success=float(Fraction(successful, total)),
    )
