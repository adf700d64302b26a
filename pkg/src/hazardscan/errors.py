"""Exception hierarchy shared by all hazardscan modules."""


class HazardScanError(Exception):
    """Base class for every error raised by this package."""


class ParseError(HazardScanError, ValueError):
    """Malformed expression, delay or netlist text."""

    def __init__(self, message, line=1, col=1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class ArityError(HazardScanError, ValueError):
    pass


class UnknownVariable(HazardScanError, KeyError):
    def __str__(self):
        return f"unassigned variable {self.args[0]!r}"


class NotBooleanValued(HazardScanError, ValueError):
    pass


class UndefinedSignal(HazardScanError, ValueError):
    pass


class DuplicateName(HazardScanError, ValueError):
    pass


class CycleDetected(HazardScanError, ValueError):
    pass


class NegativeDelay(HazardScanError, ValueError):
    pass


class NonPositiveDelay(HazardScanError, ValueError):
    pass


class MissingDelayAssignment(HazardScanError, KeyError):
    def __str__(self):
        return f"no value assigned to delay symbol {self.args[0]!r}"


class TooManyInputs(HazardScanError, ValueError):
    pass


class AmbiguousOrdering(HazardScanError):
    """Two step times whose order depends on the values of the delay symbols.

    Raised by the waveform operations; :func:`hazardscan.analyze.propagate`
    re-raises it with ``gate`` set to the gate where the comparison failed.
    """

    def __init__(self, a, b, gate=None):
        self.a = a
        self.b = b
        self.gate = gate
        where = f" at gate {gate}" if gate is not None else ""
        super().__init__(
            f"cannot order step times {a} and {b}{where}; "
            "their order depends on the delay values (supply concrete delays, e.g. --delay tau=1)"
        )
