"""Exception hierarchy shared across the toolkit.

Each error class carries the process exit code the CLI maps it to.
"""


class GecPipeError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ConfigError(GecPipeError):
    """Invalid configuration file, rule file, or argument combination."""

    exit_code = 2


class IOFailure(GecPipeError):
    """Filesystem or stream failure while reading or writing."""

    exit_code = 3


class FormatError(GecPipeError):
    """Malformed input file (bad column count, bad escape, bad M2 line...)."""

    exit_code = 4

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}:"
            if line is not None:
                prefix += f"{line}:"
            prefix += " "
        super().__init__(prefix + message)


class ExhaustedError(GecPipeError):
    """Corpus ran out before the requested number of items was produced."""

    exit_code = 5


class EditIntegrityError(GecPipeError):
    """An edit log does not match the text it claims to describe."""

    exit_code = 1
