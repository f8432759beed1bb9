from typing import Optional


class InvalidCutoffsError(ValueError):
    pass


class CutoffFileError(InvalidCutoffsError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ManifestError(ValueError):
    pass


class NonMonotoneCutoffsWarning(UserWarning):
    pass


class ConvergenceWarning(UserWarning):
    pass
