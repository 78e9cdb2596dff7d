"""
Sweep output: CSV table and a standalone matplotlib script.

CSV contract:
- header row with the SweepRow columns in fixed order
- floats written as '%.17e' so they round-trip exactly
- empty field for an absent value, 'undefined' for an undefined zeta
- the error column carries per-point diagnostics (empty when all paths ran)
"""

import csv
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Union

from xmoncoupler.errors import OutputError
from xmoncoupler.logging_config import get_logger
from xmoncoupler.schemas import SweepRow

logger = get_logger(__name__)

PathLike = Union[str, Path]


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17e}"
    return str(value)


@contextmanager
def writing(path: PathLike) -> Iterator[None]:
    """Turn an OSError raised while writing ``path`` into an OutputError."""
    try:
        yield
    except OSError as e:
        logger.error("output_write_failed", path=str(path), error=str(e))
        raise OutputError(
            f"cannot write {path}: {e.strerror or e}",
            context={"path": str(path)},
            original_error=e,
        ) from e


def emit_csv(rows: Iterable[SweepRow], path: PathLike) -> int:
    """
    Write sweep rows to a CSV file.

    Returns:
        Number of data rows written

    Raises:
        OutputError: no rows, or the file cannot be written
    """
    rows = list(rows)
    if not rows:
        raise OutputError("no sweep rows to write", context={"path": str(path)})
    with writing(path), open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(SweepRow.COLUMNS)
        for row in rows:
            data = row.model_dump()
            writer.writerow([_format(data[column]) for column in SweepRow.COLUMNS])
    logger.info("csv_written", path=str(path), rows=len(rows))
    return len(rows)


def read_csv(path: PathLike) -> List[SweepRow]:
    """Read a CSV produced by emit_csv back into SweepRow objects."""
    rows: List[SweepRow] = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        for record in reader:
            values = {key: (value if value != "" else None) for key, value in record.items()}
            rows.append(SweepRow.model_validate(values))
    return rows


# Panels: (title, y label, [(column, legend label, style)])
_PANELS = [
    ("Transverse coupling", "g / 2pi (MHz)", [
        ("g_weak_MHz", "weak coupling", ":"),
        ("g_linear_MHz", "linear network", "--"),
        ("g_tot_MHz", "g + dg", "-."),
        ("half_splitting_MHz", "exact |g|", "-"),
    ]),
    ("Qubit frequency", "omega_q / 2pi (GHz)", [
        ("omega_q_GHz", "linear network", "-"),
    ]),
    ("Diagonal coupling", "J / 2pi (kHz)", [
        ("J_approx_kHz", "g_tot^2 / eta", "--"),
        ("J_ED_kHz", "exact", "-"),
    ]),
    ("Coupler phase", "delta (rad)", [
        ("delta_rad", "delta", "-"),
    ]),
]

_SCRIPT_HEADER = '''"""Plot a coupler flux sweep. Generated by xmoncoupler; reads {csv_name}."""

import csv
import os
from contextlib import contextmanager

import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
CSV_PATH = os.path.join(HERE, {csv_name!r})


def load_columns(path):
    columns = {{}}
    with open(path, newline="") as handle:
        for record in csv.DictReader(handle):
            for key, value in record.items():
                try:
                    number = float(value)
                except ValueError:
                    number = float("nan")
                columns.setdefault(key, []).append(number)
    return columns


data = load_columns(CSV_PATH)
if "splitting_ED_MHz" in data:
    data["half_splitting_MHz"] = [0.5 * v for v in data["splitting_ED_MHz"]]
flux = data["phi_ext_over_pi"]

fig, axes = plt.subplots({n_panels}, 1, figsize=(7, {height}), sharex=True, squeeze=False)
'''

_PANEL_TEMPLATE = '''
# panel {index}: {title}
ax = axes[{index}][0]
{curves}ax.set_ylabel({ylabel!r})
ax.set_title({title!r})
ax.legend(loc="best")
'''

_CURVE_TEMPLATE = 'ax.plot(flux, data[{column!r}], {style!r}, label={label!r})\n'

_SCRIPT_FOOTER = '''
axes[-1][0].set_xlabel("phi_ext / pi")
fig.tight_layout()
fig.savefig(os.path.join(HERE, {png_name!r}), dpi=150)
plt.show()
'''


def _present_columns(rows: List[SweepRow]) -> set:
    present = set()
    for row in rows:
        for column, value in row.model_dump().items():
            if value is not None:
                present.add(column)
    if "splitting_ED_MHz" in present:
        present.add("half_splitting_MHz")
    return present


def emit_plot_script(rows: Iterable[SweepRow], path: PathLike, csv_path: Optional[PathLike] = None) -> int:
    """
    Write a matplotlib script with one panel per quantity group that has data.

    The script references the CSV by file name relative to its own location.

    Returns:
        Number of panels written
    """
    rows = list(rows)
    path = Path(path)
    csv_name = os.path.basename(str(csv_path)) if csv_path else path.stem.replace("_plot", "") + ".csv"
    present = _present_columns(rows)

    panels = []
    for title, ylabel, curves in _PANELS:
        kept = [curve for curve in curves if curve[0] in present]
        if kept:
            panels.append((title, ylabel, kept))

    parts = [_SCRIPT_HEADER.format(
        csv_name=csv_name, n_panels=max(1, len(panels)), height=2.5 * max(1, len(panels)) + 1
    )]
    for index, (title, ylabel, curves) in enumerate(panels):
        curve_text = "".join(
            _CURVE_TEMPLATE.format(column=column, style=style, label=label)
            for column, label, style in curves
        )
        parts.append(_PANEL_TEMPLATE.format(index=index, title=title, ylabel=ylabel, curves=curve_text))
    parts.append(_SCRIPT_FOOTER.format(png_name=path.stem + ".png"))

    with writing(path):
        path.write_text("".join(parts), encoding="utf-8")
    logger.info("plot_script_written", path=str(path), panels=len(panels))
    return len(panels)
