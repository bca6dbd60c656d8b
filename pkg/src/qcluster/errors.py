"""Exception types shared across the package."""


class QClusterError(Exception):
    """Base class for all errors raised by qcluster."""


class UnknownType(QClusterError, ValueError):
    pass


class InvalidMove(QClusterError, ValueError):
    pass


class SizeLimit(QClusterError):
    pass


class NotACycle(QClusterError, ValueError):
    pass


class UnsupportedRank(QClusterError):
    """A G2-type (m_ij = 6) move showed up where only rank-3 A/B windows are handled."""


class FrozenVertex(QClusterError, ValueError):
    pass


class SeedMismatch(QClusterError, ValueError):
    pass


class NotDivisible(QClusterError, ArithmeticError):
    pass


class ParseError(QClusterError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NonLaurent(QClusterError, ArithmeticError):
    """Mutation image is not a Laurent polynomial in the target seed.

    ``report`` carries the offending terms and the divisor that failed;
    ``stage`` is filled in by sequence runners.
    """

    def __init__(self, report, stage=None):
        self.report = report
        self.stage = stage
        where = "" if stage is None else f" (stage {stage})"
        super().__init__(f"image is not Laurent{where}: {report}")
