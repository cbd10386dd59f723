from typing import Literal

Color = Literal["red", "blue"]

RED: Color = "red"
BLUE: Color = "blue"
COLORS: tuple[Color, Color] = (RED, BLUE)


def other(color: Color) -> Color:
    """Return the complementary color."""
    if color == RED:
        return BLUE
    if color == BLUE:
        return RED
    raise ValueError(f"Unknown color {color!r}, expected 'red' or 'blue'")
