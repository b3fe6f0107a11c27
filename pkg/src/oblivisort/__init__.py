"""Randomized data-oblivious sorting: Spin-the-bottle sort and Annealing sort."""

from .algorithms import (
    CheckSorted,
    FixedBudget,
    SortReport,
    annealing_pass,
    annealing_sort,
    bubble_sort,
    default_spin_budget,
    guess_sort,
    oracle_sort,
    spin_round,
    spin_the_bottle_sort,
)
from .core import ContractError, RngStream, TaggedElement, compare_exchange, tag, uniform_in_range
from .schedule import (
    AnnealingSchedule,
    ScheduleParams,
    practical_schedule,
    schedule_cost,
    theoretical_schedule,
    validate,
)
from .trace import Trace, network_depth, obliviousness_check, replay, verify_zero_one

__version__ = "0.1.0"
