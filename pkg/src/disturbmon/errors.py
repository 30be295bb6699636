"""Exception types shared across the toolkit."""


class DisturbmonError(Exception):
    pass


class OutOfDomain(DisturbmonError):
    """Queried time lies outside the trace domain."""


class VehicleAbsent(DisturbmonError):
    """Vehicle has no recorded sample covering the queried time."""


class EmptyDomain(DisturbmonError):
    """Trim window retains fewer than two samples."""


class InvalidChain(DisturbmonError):
    """Lanelet pred/succ references are inconsistent."""


class DuplicateMembership(DisturbmonError):
    """A lanelet would belong to more than one lane."""


class FormulaSyntaxError(DisturbmonError):
    """Formula text failed to parse; carries the 0-based offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class MalformedInterval(FormulaSyntaxError):
    """Temporal interval with negative or reversed bounds."""


class UnboundName(DisturbmonError):
    """Formula references a name with no binding in the context."""


class ArityMismatch(DisturbmonError):
    """Wrong number of vehicles supplied to a scenario constructor."""


class InvalidTemplate(DisturbmonError):
    """Signal template for exemplification is unusable."""


class DataError(DisturbmonError):
    """Input data (tracks, metadata, map, manifest) failed validation."""


class ManifestMismatch(DataError):
    """Stored trace parameters disagree with the evaluation config."""
