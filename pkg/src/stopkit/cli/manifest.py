"""Batch jobs read from a TOML manifest."""

import tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from ..exceptions import ManifestError

COMMANDS = frozenset(
    {"cutoffs", "probs", "optimize", "simulate", "compare", "asymptote", "plot-data"}
)
SEEDED = frozenset({"simulate", "compare"})

_FIELDS = frozenset(
    {
        "command",
        "n",
        "strategy",
        "strategies",
        "runs",
        "seed",
        "output",
        "format",
        "k",
        "k_file",
        "tol",
        "init",
        "monotone",
        "max_iterations",
        "figure",
        "strict",
        "threshold",
    }
)


@dataclass(frozen=True)
class Job:
    command: str
    output: str
    n: Optional[int] = None
    strategies: tuple[str, ...] = ()
    runs: Optional[int] = None
    seed: Optional[int] = None
    format: Optional[str] = None
    k: Optional[float] = None
    k_file: Optional[str] = None
    tol: Optional[float] = None
    init: Optional[str] = None
    monotone: Optional[str] = None
    max_iterations: Optional[int] = None
    figure: Optional[str] = None
    strict: bool = False
    threshold: Optional[float] = None

    def to_argv(self) -> list[str]:
        """Command line equivalent of this job."""
        argv = [self.command]
        if self.command == "plot-data":
            argv.append(self.figure or "")
        if self.command in ("cutoffs", "probs", "simulate") and self.strategies:
            argv.append(self.strategies[0])
        if self.command in ("compare", "plot-data") and self.strategies:
            argv += ["--strategies", *self.strategies]
        options: dict[str, Any] = {
            "-n": self.n,
            "--runs": self.runs,
            "--seed": self.seed,
            "--k": self.k,
            "--k-file": self.k_file,
            "--tol": self.tol,
            "--init": self.init,
            "--monotone": self.monotone,
            "--max-iterations": self.max_iterations,
            "--threshold": self.threshold,
        }
        for flag, value in options.items():
            if value is not None:
                argv += [flag, str(value)]
        if self.strict:
            argv.append("--strict")
        if self.format is not None:
            argv += ["--format", self.format]
        argv += ["--output", self.output]
        return argv


@dataclass(frozen=True)
class RunManifest:
    jobs: tuple[Job, ...] = field(default_factory=tuple)
    source: Optional[Path] = None


def _job(entry: dict[str, Any], index: int) -> list[Job]:
    where = f"job {index}"
    unknown = set(entry) - _FIELDS
    if unknown:
        raise ManifestError(f"{where}: unknown fields {sorted(unknown)}")

    command = entry.get("command")
    if command not in COMMANDS:
        raise ManifestError(f"{where}: unknown command {command!r}")
    if "output" not in entry:
        raise ManifestError(f"{where}: output is required")
    if command in SEEDED and "seed" not in entry:
        raise ManifestError(f"{where}: {command} jobs need an explicit seed")

    strategies = entry.get("strategies", [])
    if "strategy" in entry:
        strategies = [entry["strategy"], *strategies]
    if isinstance(strategies, str):
        strategies = [strategies]

    ns = entry.get("n")
    ns_list = ns if isinstance(ns, list) else [ns]
    output = str(entry["output"])
    if len(ns_list) > 1 and "{n}" not in output:
        raise ManifestError(f"{where}: several n need an output pattern with {{n}}")

    base = {key: value for key, value in entry.items() if key not in ("strategy",)}
    jobs = []
    for n in ns_list:
        if n is not None and (not isinstance(n, int) or n < 1):
            raise ManifestError(f"{where}: n must be a positive integer, got {n!r}")
        fields = dict(base)
        fields.update(
            n=n,
            strategies=tuple(str(s) for s in strategies),
            output=output.replace("{n}", str(n)),
        )
        try:
            jobs.append(Job(**fields))
        except TypeError as exc:
            raise ManifestError(f"{where}: {exc}") from None
    return jobs


def parse_manifest(data: dict[str, Any], source: Optional[Path] = None) -> RunManifest:
    defaults = data.get("defaults", {})
    entries = data.get("job", [])
    if not isinstance(entries, list) or not entries:
        raise ManifestError("a manifest needs at least one [[job]] table")
    jobs: list[Job] = []
    for index, entry in enumerate(entries, start=1):
        jobs += _job({**defaults, **entry}, index)
    return RunManifest(jobs=tuple(jobs), source=source)


def load_manifest(path: str | Path) -> RunManifest:
    path = Path(path)
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ManifestError(f"{path}: {exc}") from None
    return parse_manifest(data, source=path)
