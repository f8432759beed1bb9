from importlib.metadata import PackageNotFoundError, version


def _from_metadata() -> str:
    try:
        return version("stopkit")
    except PackageNotFoundError:
        return "0.0.0"


try:
    # written by hatch-vcs at build time
    from .._version import __version__  # ty: ignore[unresolved-import]
except ModuleNotFoundError:
    __version__ = _from_metadata()

__version_tuple__ = tuple(
    int(part) if part.isdigit() else part for part in __version__.split(".")
)
