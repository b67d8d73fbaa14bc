# vlft_lab/core/exceptions.py
from __future__ import annotations

from typing import Sequence


class VlftError(Exception):
    """Base class for every error raised by the toolkit."""


class ChannelDomainError(VlftError, ValueError):
    """Invalid channel parameters or an undefined information density."""


class PolicyError(VlftError, ValueError):
    """A scaling policy was evaluated outside its domain."""


class OracleLimitError(VlftError):
    """The exhaustive oracle refuses instances above its enumeration limit."""


class NonConvergenceError(VlftError):
    def __init__(self, message: str, partial_sum: float, last_index: int):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.last_index = last_index


class InfeasibleScheduleError(VlftError):
    def __init__(self, message: str, xi_value: float, block_length: int):
        super().__init__(message)
        self.xi_value = xi_value
        self.block_length = block_length


class CensoringError(VlftError):
    def __init__(self, censored: int, trials: int, limit: float):
        super().__init__(
            f"{censored}/{trials} trials hit the symbol cap "
            f"(limit {limit:.2%} of trials)"
        )
        self.censored = censored
        self.trials = trials


class ConfigValidationError(VlftError):
    def __init__(self, problems: Sequence[str], source: str = "config"):
        self.problems = list(problems)
        joined = "\n  - ".join(self.problems)
        super().__init__(f"Invalid {source}:\n  - {joined}")
