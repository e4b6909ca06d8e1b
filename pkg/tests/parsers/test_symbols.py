"""Tests for the symbol grid parser."""
import pytest


def test_parse_symbol_grid(data_regression, filepath_parsers_fixtures):
    """Test a symbol grid with a comment and a blank line."""
    from spacetime_duality.parsers.symbols import parse_symbol_grid

    filepath = filepath_parsers_fixtures / "symbols" / "grid.txt"
    with open(filepath) as handle:
        filecontent = handle.readlines()

    symbols = parse_symbol_grid(filecontent)

    data_regression.check({"m": symbols.m.tolist(), "nu": symbols.nu, "shape": list(symbols.shape)})


def test_parse_symbol_grid_rows(filepath_parsers_fixtures):
    """Test a symbol grid with fewer rows than announced."""
    from spacetime_duality.parsers.symbols import parse_symbol_grid

    filepath = filepath_parsers_fixtures / "symbols" / "short.txt"
    with open(filepath) as handle:
        filecontent = handle.readlines()

    with pytest.raises(ValueError, match="expected 3 rows"):
        parse_symbol_grid(filecontent)


@pytest.mark.parametrize(
    "filecontent",
    (
        [],
        ["3 2\n", "0 1 2\n", "3 4 5\n"],
        ["3 2 13\n", "0 1\n", "3 4 5\n"],
        ["2 1 13\n", "0 20\n"],
    ),
)
def test_parse_symbol_grid_invalid(filecontent):
    """Test malformed symbol grids."""
    from spacetime_duality.parsers.symbols import parse_symbol_grid

    with pytest.raises(ValueError):
        parse_symbol_grid(filecontent)


def test_format_symbol_grid(filepath_parsers_fixtures):
    """Test ``format_symbol_grid`` writes the layout read by ``parse_symbol_grid``."""
    from spacetime_duality.parsers.symbols import format_symbol_grid, parse_symbol_grid

    with open(filepath_parsers_fixtures / "symbols" / "grid.txt") as handle:
        symbols = parse_symbol_grid(handle.readlines())

    assert format_symbol_grid(symbols) == "3 2 13\n0 1 2\n3 4 5\n"
