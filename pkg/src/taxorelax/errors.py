"""Exception hierarchy shared by the library and the command line."""


class TaxorelaxError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ConfigError(TaxorelaxError, ValueError):
    """Invalid run configuration (unknown constraint code, bad threshold...)."""

    exit_code = 2


class InputError(TaxorelaxError, ValueError):
    """An input file does not conform to its format."""

    exit_code = 3

    def __init__(self, message, path=None, lineno=None):
        self.path = path
        self.lineno = lineno
        where = ""
        if path is not None:
            where = f"{path}:{lineno}: " if lineno is not None else f"{path}: "
        elif lineno is not None:
            where = f"line {lineno}: "
        super().__init__(where + message)


class MalformedLineError(InputError):
    pass


class DuplicateSynsetError(InputError):
    pass


class EmptySynsetError(InputError):
    pass


class DanglingHypernymError(InputError):
    pass


class CycleError(InputError):
    def __init__(self, cycle, path=None):
        self.cycle = list(cycle)
        super().__init__("hypernym cycle: " + " -> ".join(self.cycle), path=path)
