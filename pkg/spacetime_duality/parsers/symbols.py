"""Plain-text symbol grids of coupled cat-map orbits.

The first line holds ``N T nu``; then follow ``T`` rows (one per time step) of
``N`` integers (one per site).
"""
import typing as ty

import numpy as np

from spacetime_duality.calculations.catmap_classical import SymbolArray


def parse_symbol_grid(filecontent: ty.List[str]) -> SymbolArray:
    """Parse a symbol grid.

    :param filecontent: lines of the file; blank lines and ``#`` comments are skipped.
    :raises ValueError: on a malformed header or a row of the wrong length.
    """
    lines = [line.split("#", 1)[0].strip() for line in filecontent]
    lines = [line for line in lines if line]
    if not lines:
        raise ValueError("empty symbol grid")

    header = lines[0].split()
    if len(header) != 3:
        raise ValueError(f"header must read `N T nu`, got `{lines[0]}`")
    size, period, nu = (int(_) for _ in header)

    rows = [[int(_) for _ in line.split()] for line in lines[1:]]
    if len(rows) != period:
        raise ValueError(f"expected {period} rows, got {len(rows)}")
    for index, row in enumerate(rows):
        if len(row) != size:
            raise ValueError(f"row {index} has {len(row)} entries, expected {size}")

    return SymbolArray(np.array(rows, dtype=int).T, nu)


def format_symbol_grid(symbols: SymbolArray, nu: ty.Optional[int] = None) -> str:
    """Inverse of :func:`parse_symbol_grid`."""
    nu = symbols.nu if nu is None else nu
    if nu is None:
        raise ValueError("`nu` is needed for the header")
    size, period = symbols.shape
    lines = [f"{size} {period} {nu}"]
    for time in range(period):
        lines.append(" ".join(str(value) for value in symbols.m[:, time]))
    return "\n".join(lines) + "\n"
