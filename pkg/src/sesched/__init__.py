"""Social event scheduling: pick k candidate events and their time intervals
so that expected total attendance is maximal.

Quick start::

    from sesched import GenParams, generate, solve_grd
    report = solve_grd(generate(GenParams(k=20, num_users=500)), k=20)
    report.utility, report.pairs()
"""

from .errors import InputError, InvariantError, LoadError, SESError, SizeError
from .instancegen import GenParams, build_instance_from_tags, build_interest, generate
from .io import dump_instance, load_instance, load_tag_corpus
from .model import (Assignment, CandidateEvent, CompetingEvent, Instance, Schedule, User,
                    insert_assignment, is_feasible_assignment, is_valid_assignment,
                    validate_instance)
from .scoring import (ScoreState, apply_assignment, assignment_score, attendance_probability,
                      expected_attendance, total_utility)
from .solvers import SolveReport, solve, solve_exact, solve_grd, solve_rand, solve_top

__version__ = "0.1.0"

__all__ = [
    "Assignment", "CandidateEvent", "CompetingEvent", "GenParams", "InputError", "Instance",
    "InvariantError", "LoadError", "SESError", "Schedule", "ScoreState", "SizeError",
    "SolveReport", "User", "apply_assignment", "assignment_score", "attendance_probability",
    "build_instance_from_tags", "build_interest", "dump_instance", "expected_attendance",
    "generate", "insert_assignment", "is_feasible_assignment", "is_valid_assignment",
    "load_instance", "load_tag_corpus", "solve", "solve_exact", "solve_grd", "solve_rand",
    "solve_top", "total_utility", "validate_instance",
]
