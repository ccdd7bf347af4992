"""Exception hierarchy shared by every module in the package."""


class DomainError(ValueError):
    """An input lies outside the domain of the operation."""


class ZeroVarianceError(DomainError):
    """Rating changes have no spread, so a volatility cannot be estimated."""


class DatasetError(DomainError):
    """Base class for problems found while reading or validating a dataset.

    ``line`` is the 1-based line number in the source file when known.
    """

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        prefix = ":".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class DatasetNotFoundError(DatasetError):
    pass


class HeaderError(DatasetError):
    pass


class FieldParseError(DatasetError):
    pass


class OutcomeError(DatasetError):
    pass


class InconsistentRatingChangeError(DatasetError):
    pass


class MissingRatingChangeError(DatasetError):
    pass
