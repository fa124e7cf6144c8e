"""Exception hierarchy shared across the package."""

from __future__ import annotations


class XIndexError(Exception):
    """Base class for every error raised by xindex."""


# manifest / input validation


class ManifestError(XIndexError):
    pass


class DuplicateId(ManifestError):
    def __init__(self, dataset_id: str):
        super().__init__(f"duplicate dataset_id {dataset_id!r}")
        self.dataset_id = dataset_id


class MissingField(ManifestError):
    def __init__(self, row: int, column: str):
        super().__init__(f"row {row}: missing required field {column!r}")
        self.row = row
        self.column = column


class MalformedCount(ManifestError):
    def __init__(self, row: int, value: object = None):
        super().__init__(f"row {row}: citation_override must be a non-negative integer, got {value!r}")
        self.row = row
        self.value = value


# provider


class ProviderError(XIndexError):
    pass


class NetworkError(ProviderError):
    pass


class NotFound(ProviderError):
    def __init__(self, identifier: str):
        super().__init__(f"not found: {identifier!r}")
        self.identifier = identifier


class SeedNotFound(NotFound):
    pass


class BudgetExceeded(ProviderError):
    def __init__(self, message: str, partial: list | None = None):
        super().__init__(message)
        self.partial = list(partial or [])


class MalformedUrl(ProviderError, ValueError):
    pass


class StorageError(ProviderError):
    pass


class CorruptEntry(StorageError):
    pass


# numeric kernels


class DomainError(XIndexError, ValueError):
    pass


class DimensionMismatch(XIndexError, ValueError):
    pass


class NoSource(XIndexError, ValueError):
    pass


class WrongArity(XIndexError, ValueError):
    pass


class NegativeScore(XIndexError, ValueError):
    pass


class DegenerateInput(XIndexError, ValueError):
    pass


class IdMismatch(XIndexError):
    def __init__(self, only_left: list[str], only_right: list[str]):
        parts = []
        if only_left:
            parts.append("missing rater scores for: " + ", ".join(only_left))
        if only_right:
            parts.append("missing V-scores for: " + ", ".join(only_right))
        super().__init__("; ".join(parts) or "dataset id sets differ")
        self.only_left = only_left
        self.only_right = only_right


class MissingVScore(XIndexError):
    def __init__(self, dataset_id: str):
        super().__init__(f"no V-score for dataset {dataset_id!r}")
        self.dataset_id = dataset_id
