"""Asymptotic lines c t + d of positions and log amplitudes as t -> +-inf.

Two independent routes produce the lines: theorems.py transcribes the
theorem clauses, engine.py reads the dominant exponentials off the formula
table.  The test suite requires them to agree.
"""

from .engine import engine_lines
from .lines import AsymptoteLine, direction_name, direction_sign, empirical_slope
from .report import AsymptoteRow, asymptote_table, trajectories
from .theorems import ClauseError, asymptote, asymptote_even, asymptote_odd, theorem_lines
