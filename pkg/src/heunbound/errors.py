"""Exception hierarchy shared by all heunbound modules."""


class HeunboundError(Exception):
    """Base class for every error raised by this package."""


class InvalidConfig(HeunboundError, ValueError):
    pass


class DegenerateOperator(HeunboundError, ValueError):
    """Raised when neither the oscillator nor the linear term confines (omega = chi = 0)."""


class ZeroCoupling(HeunboundError, ValueError):
    pass


class ConvergenceFailure(HeunboundError, ArithmeticError):
    pass


class NoPhysicalRoot(HeunboundError):
    """No real, strictly positive permitted frequency exists.

    ``real_roots`` carries whatever real candidates were found before the
    physicality filter (cubic roots in ``s`` for the n=1 linear case), and
    ``cubic`` the full root classification when there was one.
    """

    def __init__(self, message, real_roots=(), cubic=None):
        super().__init__(message)
        self.real_roots = tuple(real_roots)
        self.cubic = cubic


class BracketExhausted(NoPhysicalRoot):
    """The frequency scan saw no sign change; widening the range may help."""


class NegativeRadicand(HeunboundError, ArithmeticError):
    def __init__(self, value):
        super().__init__(f"energy radicand is negative: {value!r}")
        self.value = value


class NotTruncated(HeunboundError, ValueError):
    pass


class InvalidDomain(HeunboundError, ValueError):
    pass


class MismatchReport(HeunboundError):
    """Oracle and analytic spectra disagree; ``report`` holds every comparison."""

    def __init__(self, report):
        bad = [e for e in report.entries if not e.passed]
        lines = ", ".join(
            f"(omega={e.omega:.9g}, analytic={e.lambda_analytic:.9g}, "
            f"oracle={e.lambda_oracle:.9g}, node={e.node_index})"
            for e in bad
        )
        super().__init__(f"oracle mismatch: {lines}")
        self.report = report
