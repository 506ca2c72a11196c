"""
Grid maze model
"""

from dataclasses import dataclass
from typing import Iterator, Tuple

from ..core.exceptions import InputError

Cell = Tuple[int, int]

FREE = "."
OBSTACLE = "#"
START = "S"
TARGET = "T"


@dataclass(frozen=True)
class MazeGrid:
    """n x n grid; `obstacles[r][c]` is True for blocked cells.

    Start is the top-left cell, target the bottom-right cell.
    """

    side: int
    obstacles: Tuple[Tuple[bool, ...], ...]
    seed: int = 0

    @property
    def start(self) -> Cell:
        return (0, 0)

    @property
    def target(self) -> Cell:
        return (self.side - 1, self.side - 1)

    @property
    def obstacle_count(self) -> int:
        return sum(sum(row) for row in self.obstacles)

    def is_free(self, r: int, c: int) -> bool:
        return 0 <= r < self.side and 0 <= c < self.side and not self.obstacles[r][c]

    def free_cells(self) -> Iterator[Cell]:
        """Free cells in row-major order."""
        for r in range(self.side):
            for c in range(self.side):
                if not self.obstacles[r][c]:
                    yield (r, c)

    def to_text(self) -> str:
        rows = []
        for r in range(self.side):
            chars = []
            for c in range(self.side):
                if (r, c) == self.start:
                    chars.append(START)
                elif (r, c) == self.target:
                    chars.append(TARGET)
                else:
                    chars.append(OBSTACLE if self.obstacles[r][c] else FREE)
            rows.append("".join(chars))
        return "\n".join(rows) + "\n"


def parse_maze_text(text: str, seed: int = 0) -> MazeGrid:
    """Read the n-line maze format back into a MazeGrid."""
    rows = [row for row in text.split("\n") if row]
    side = len(rows)
    if side < 2 or any(len(row) != side for row in rows):
        raise InputError("Maze text must be n lines of n characters, n >= 2")
    if rows[0][0] != START or rows[-1][-1] != TARGET:
        raise InputError("Maze must have 'S' top-left and 'T' bottom-right")
    allowed = {FREE, OBSTACLE, START, TARGET}
    if any(ch not in allowed for row in rows for ch in row):
        raise InputError("Maze text may only contain '.', '#', 'S', 'T'")
    obstacles = tuple(tuple(ch == OBSTACLE for ch in row) for row in rows)
    return MazeGrid(side, obstacles, seed)
