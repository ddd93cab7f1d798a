"""Exception types shared across the simulator."""


class ConfigError(ValueError):
    """Invalid configuration, topology, schedule, or input file."""


class ProtocolViolation(RuntimeError):
    """A guarantee the protocols are supposed to uphold was broken.

    Raised for contract breaches that indicate either a harness bug or a
    run outside the parameter regime the protocols are designed for
    (e.g. an empty free-slot set, or a search phase that outlives a full
    period).
    """


class InternalInconsistencyError(RuntimeError):
    """An impossible state was reached; indicates a bug, not bad input."""
