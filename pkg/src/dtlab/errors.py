"""Exception types shared across the package.

The CLI maps these onto exit codes (2 config, 3 budget, 4 I/O).
"""


class DtlabError(Exception):
    pass


class ConfigError(DtlabError, ValueError):
    """Invalid parameters: unsupported weight, bad interval, malformed grid."""


class CapacityError(DtlabError):
    """A request exceeds a configured memory or enumeration budget."""


class CacheFormatError(DtlabError, OSError):
    """A coefficient cache file is malformed or does not match its header."""
