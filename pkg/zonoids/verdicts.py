import enum
from dataclasses import dataclass, field
from typing import Optional

from . import arith
from .conf import logbm_settings


class Verdict(str, enum.Enum):
    HOLDS = 'holds'
    EQUALITY = 'equality'
    VIOLATED = 'violated'
    # Float bounds bracket the threshold.
    INCONCLUSIVE = 'inconclusive'

    @property
    def exit_code(self):
        return 2 if self is Verdict.VIOLATED else 0


def float_tolerance(*values):
    return logbm_settings.TOLERANCE['FLOAT'] * max([1.0] + [abs(float(v)) for v in values])


def decide(lhs, rhs, tolerance=None) -> Verdict:
    """Exact sign of lhs - rhs, or a tolerance band when either side is a float."""
    deficit = lhs - rhs
    if tolerance is None and arith.backend_of(lhs, rhs).exact:
        if deficit == 0:
            return Verdict.EQUALITY
        return Verdict.HOLDS if deficit > 0 else Verdict.VIOLATED
    if tolerance is None:
        tolerance = float_tolerance(lhs, rhs)
    if abs(deficit) <= tolerance:
        return Verdict.EQUALITY
    return Verdict.HOLDS if deficit > 0 else Verdict.VIOLATED


@dataclass
class InequalityReport:
    name: str
    dim: int
    lhs: object
    rhs: object
    verdict: Verdict
    form: str = ''
    error_bound: Optional[float] = None
    details: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)

    @property
    def deficit(self):
        return self.lhs - self.rhs

    @property
    def exact(self):
        return arith.backend_of(self.lhs, self.rhs).exact and self.error_bound is None

    @classmethod
    def build(cls, name, dim, lhs, rhs, form='', tolerance=None, **extra):
        return cls(name, dim, lhs, rhs, decide(lhs, rhs, tolerance), form=form, **extra)
