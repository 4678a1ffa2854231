# every library error derives from PseudomodeError so the shell can catch them in one place
# messages follow the 'ERROR: ...' convention used across the console


class PseudomodeError(Exception):
    pass


class DuplicateRole(PseudomodeError):
    pass


class UnknownRole(PseudomodeError):
    pass


class NotHermitian(PseudomodeError):
    pass


class LayoutMismatch(PseudomodeError):
    pass


class InvalidState(PseudomodeError):
    pass


class SingularSpectralDensity(PseudomodeError):
    pass


class CutoffTooSmall(PseudomodeError):
    pass


class ConfigError(PseudomodeError):
    pass


class IntegrationUnstable(PseudomodeError):
    def __init__(self, message: str, time: float):
        super().__init__(message)
        self.time = time
