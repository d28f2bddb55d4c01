"""Exceptions raised by satatools."""


__all__ = ["SataError", "UsageError", "DataError", "InstanceFormatError",
           "OracleLimitError", "ConfigError", "ValidationFailure"]


class SataError(Exception):
    """Base class for all satatools errors."""


class UsageError(SataError, ValueError):
    """A caller broke a precondition (bad id, invalid parameters...)."""


class DataError(SataError, ValueError):
    """External data is malformed or breaks an invariant."""


class InstanceFormatError(DataError):
    """An instance or assignment file does not follow the schema.

    Args:
        location(str): where the problem was found, e.g. "workers[2].id".
        message(str): what is wrong.
    """

    def __init__(self, location, message):
        self.location = location
        self.message = message
        super(InstanceFormatError, self).__init__(
            "{}: {}".format(location, message))

    def __reduce__(self):
        return (self.__class__, (self.location, self.message))


class OracleLimitError(UsageError):
    """The exact oracle refuses an instance beyond its enumeration bound."""


class ConfigError(UsageError):
    """A configuration file overrides a parameter with no default."""


class ValidationFailure(SataError):
    """A solver produced an assignment that breaks the problem constraints.

    Args:
        algorithm(str): name of the offending solver.
        report(satatools.ValidationReport): the violations found.
    """

    def __init__(self, algorithm, report):
        self.algorithm = algorithm
        self.report = report
        super(ValidationFailure, self).__init__(
            "{} produced an invalid assignment:\n{}".format(algorithm, report))

    def __reduce__(self):
        return (self.__class__, (self.algorithm, self.report))
