"""History CSV and field snapshot serialization.

Floats are written with 17 significant digits so that parse -> rewrite is
byte-identical and regression files are bit-stable.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .diagnostics import HistoryRecord
from .grid import GridSpec, RealField

CSV_HEADER = "step,t,mass,energy,r,xi,sav_r,h2,dissipation,linf_err,l2_err"


def _fmt(value: float | None) -> str:
    if value is None:
        return ""
    return format(value, ".17g")


def write_history_csv(records: list[HistoryRecord], path: Path | str) -> None:
    """Write records under the fixed header, one row each; None -> empty cell."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                [
                    str(r.step),
                    _fmt(r.t),
                    _fmt(r.mass),
                    _fmt(r.energy),
                    _fmt(r.r),
                    _fmt(r.xi),
                    _fmt(r.sav_r),
                    _fmt(r.h2),
                    _fmt(r.dissipation),
                    _fmt(r.linf_err),
                    _fmt(r.l2_err),
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_history_csv(path: Path | str) -> list[HistoryRecord]:
    """Parse a file written by :func:`write_history_csv`."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"unexpected history header in {path}")

    def opt(cell: str) -> float | None:
        return None if cell == "" else float(cell)

    records = []
    for line in lines[1:]:
        c = line.split(",")
        records.append(
            HistoryRecord(
                step=int(c[0]),
                t=float(c[1]),
                mass=float(c[2]),
                energy=float(c[3]),
                r=opt(c[4]),
                xi=opt(c[5]),
                sav_r=opt(c[6]),
                h2=float(c[7]),
                dissipation=float(c[8]),
                linf_err=opt(c[9]),
                l2_err=opt(c[10]),
            )
        )
    return records


def write_snapshot(phi: RealField, t: float, path: Path | str) -> None:
    """Write a field snapshot: 5 text header lines, a blank line, then the
    nx*ny values as little-endian float64, row-major."""
    grid = phi.grid
    header = (
        f"nx {grid.nx}\n"
        f"ny {grid.ny}\n"
        f"lx {_fmt(grid.lx)}\n"
        f"ly {_fmt(grid.ly)}\n"
        f"t {_fmt(t)}\n"
        "\n"
    )
    payload = np.ascontiguousarray(phi.values, dtype="<f8").tobytes()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(payload)


def read_snapshot(path: Path | str) -> tuple[RealField, float]:
    """Read a snapshot back; bit-exact inverse of :func:`write_snapshot`."""
    raw = Path(path).read_bytes()
    head, _, rest = raw.partition(b"\n\n")
    fields = {}
    for line in head.decode("ascii").splitlines():
        key, value = line.split(" ", 1)
        fields[key] = value
    nx, ny = int(fields["nx"]), int(fields["ny"])
    grid = GridSpec(nx=nx, ny=ny, lx=float(fields["lx"]), ly=float(fields["ly"]))
    values = np.frombuffer(rest, dtype="<f8", count=nx * ny).reshape(nx, ny)
    return RealField(grid, values.copy()), float(fields["t"])
