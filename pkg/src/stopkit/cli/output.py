import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from ..exceptions import CutoffFileError
from ..simulation.report import format_number
from ..types import MONOTONE_TOL, CutoffVector


def resolve_output(target: Optional[str], output_dir: Path) -> Optional[Path]:
    """``None`` or ``-`` means stdout; bare file names land in ``output_dir``."""
    if target is None or target == "-":
        return None
    path = Path(target)
    if path.is_absolute() or path.parent != Path("."):
        return path
    return output_dir / path


def write_text(path: Optional[Path], text: str) -> None:
    """Writes ``text`` to ``path`` through a temp file and ``os.replace``."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def table_csv(
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    display: Sequence[str] = (),
) -> str:
    """
    CSV with floats at 17 significant digits; each column named in
    ``display`` gets an extra ``<name>_display`` column rounded to 4 places.
    """
    positions = [columns.index(name) for name in display]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([*columns, *(f"{name}_display" for name in display)])
    for row in rows:
        cells = [format_number(v) if isinstance(v, float) else v for v in row]
        writer.writerow([*cells, *(f"{row[i]:.4f}" for i in positions)])
    return buffer.getvalue()


def to_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def parse_cutoffs(text: str, permissive: bool = False) -> CutoffVector:
    """
    Reads one decision number per line (``#`` comments and blank lines are
    skipped); errors carry the offending line number.
    """
    values: list[float] = []
    lines: list[int] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            value = float(line)
        except ValueError:
            raise CutoffFileError(f"not a number: {line!r}", line=number) from None
        if not 0.0 <= value <= 1.0:
            raise CutoffFileError(f"{value} is outside [0, 1]", line=number)
        if values and value - values[-1] > MONOTONE_TOL and not permissive:
            raise CutoffFileError(
                f"{value} is larger than the previous cutoff {values[-1]}", line=number
            )
        values.append(value)
        lines.append(number)

    if not values:
        raise CutoffFileError("no cutoffs found")
    if values[-1] != 0.0:
        raise CutoffFileError(f"the last cutoff must be 0, got {values[-1]}", line=lines[-1])
    return CutoffVector.of(values, permissive=permissive)


def read_cutoff_file(path: str | Path, permissive: bool = False) -> CutoffVector:
    return parse_cutoffs(Path(path).read_text(encoding="utf-8"), permissive=permissive)
