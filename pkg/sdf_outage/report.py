"""
    CSV and plot-script output of the sweeps.

    Column names and order are part of the file format. Floats are written
    with ``repr`` so they parse back to the same value.
"""

import csv
import dataclasses
import logging
import os
import typing

from .mcsim import OutageEstimate


logger = logging.getLogger(__name__)

ANALYTIC_COLUMNS = (
    "snr_db", "op_total_probability", "op_paper_literal", "op_asymptotic"
)
OPTIMAL_COLUMN = "op_optimal_split"
VALIDATE_COLUMNS = (
    "snr_db", "op_analytic", "op_mc", "mc_stderr", "z_score", "status"
)
OPTIMIZE_COLUMNS = (
    "variant", "beta0", "beta1", "beta2", "objective", "grid_objective"
)

Z_LIMIT = 3.0
MIN_EVENTS = 100.0

Cell = typing.Union[None, int, float, str]


def format_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, bool) or isinstance(value, str):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def write_csv(
    stream: typing.TextIO,
    columns: typing.Sequence[str],
    rows: typing.Iterable[typing.Sequence[Cell]]
) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f'row has {len(row)} cells for {len(columns)} columns')
        writer.writerow([format_cell(cell) for cell in row])


def write_csv_file(
    path: str,
    columns: typing.Sequence[str],
    rows: typing.Iterable[typing.Sequence[Cell]]
) -> None:
    with open(path, mode="w", encoding="utf-8", newline="") as csv_fd:
        write_csv(csv_fd, columns, rows)
    logger.info("Wrote %s", path)


@dataclasses.dataclass(frozen=True)
class ValidationRecord:
    "One SNR point of the analytic-versus-simulation comparison."
    snr_db: float
    op_analytic: float
    estimate: OutageEstimate


    @property
    def z_score(self) -> float:
        return self.estimate.z_score(self.op_analytic)


    @property
    def gated(self) -> bool:
        "Enough outage events for the z-score to mean something."
        return self.estimate.expected_events >= MIN_EVENTS


    @property
    def status(self) -> str:
        if not self.gated:
            return "insufficient events"
        return "ok" if abs(self.z_score) <= Z_LIMIT else "fail"


    def row(self) -> typing.Tuple[Cell, ...]:
        return (
            self.snr_db,
            self.op_analytic,
            self.estimate.p_hat,
            self.estimate.stderr,
            self.z_score,
            self.status,
        )


_PLOT_TEMPLATE = '''\
#!/usr/bin/env python3
"Plot {csv_name}. Generated by sdf-outage."

import csv
import os

import matplotlib.pyplot as plt


HERE = os.path.dirname(os.path.abspath(__file__))
COLUMNS = {columns!r}


def main():
    with open(os.path.join(HERE, {csv_path!r}), newline="") as csv_fd:
        rows = list(csv.DictReader(csv_fd))
    snr_db = [float(row["snr_db"]) for row in rows]
    fig, ax = plt.subplots()
    for column in COLUMNS:
        points = [
            (x, float(row[column]))
            for x, row in zip(snr_db, rows)
            if row.get(column) not in (None, "") and float(row[column]) > 0
        ]
        if points:
            ax.semilogy(*zip(*points), marker="o", label=column)
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("Outage probability")
    ax.grid(True, which="both")
    ax.legend()
    plt.show()


if __name__ == "__main__":
    main()
'''


def write_plot_script(
    script_path: str,
    csv_path: str,
    columns: typing.Sequence[str]
) -> None:
    """
    Write a matplotlib script that plots ``columns`` of ``csv_path`` against
    snr_db. The CSV is referenced relative to the script's directory.
    """
    script_dir = os.path.dirname(os.path.abspath(script_path))
    relative = os.path.relpath(os.path.abspath(csv_path), script_dir)
    with open(script_path, mode="w", encoding="utf-8", newline="\n") as script_fd:
        script_fd.write(_PLOT_TEMPLATE.format(
            csv_name=os.path.basename(csv_path),
            columns=tuple(columns),
            csv_path=relative
        ))
    logger.info("Wrote plot script %s", script_path)
