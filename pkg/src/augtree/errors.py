"""Exception types shared across the toolkit."""


class AugtreeError(Exception):
    """Base class for all augtree errors."""


class ParseError(AugtreeError):
    """Malformed CoNLL-U / CoNLL-09 input; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class TreeError(AugtreeError):
    """Dependency-tree invariant violation (missing root, cycle, dangling head)."""


class ConfigError(AugtreeError):
    """Invalid augmentation configuration, including technique/task viability."""


class EmbeddingError(AugtreeError):
    """Malformed embedding file or lookup on an ill-formed table."""
