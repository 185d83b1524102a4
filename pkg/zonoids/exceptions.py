"""
Errors raised by the verification engine.

Every error carries the process exit code the CLI reports for it; the
management commands turn them into ``CommandError(returncode=...)``.
"""


class VerificationError(Exception):
    exit_code = 1
    default_detail = 'Verification failed.'

    def __init__(self, detail=None):
        self.detail = detail if detail is not None else self.default_detail
        super().__init__(self.detail)

    def __str__(self):
        return str(self.detail)


class DimensionMismatch(VerificationError):
    exit_code = 3
    default_detail = 'Operands live in different dimensions.'


class UnsupportedCombination(VerificationError):
    exit_code = 3
    default_detail = 'Unsupported combination of slot bodies.'


class UnsupportedBackend(VerificationError):
    exit_code = 3
    default_detail = 'Operation is not available on this scalar backend.'


class DegenerateBody(VerificationError):
    exit_code = 3
    default_detail = 'Body is not full-dimensional.'


class InsufficientDirections(DegenerateBody):
    default_detail = 'Sampled directions do not bound the intersection.'


class PreconditionViolation(VerificationError):
    exit_code = 3
    default_detail = 'Precondition violated.'


class ConvexityViolation(PreconditionViolation):
    default_detail = 'Support function is not strictly convex at a node.'


class NotSymmetric(PreconditionViolation):
    default_detail = 'Input is not origin-symmetric.'


class InstanceParseError(VerificationError):
    exit_code = 4
    default_detail = 'Instance file could not be parsed.'
