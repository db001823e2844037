"""Tic-tac-toe, playable locally or across two locations.

The game logic (board, win detection, move validation, brains) is the
same code in both variants.  The distributed version adds only the
location of each computation: the mover picks a move with `locally` and
shares the new board with `broadcast`, after which both players check
the status with an ordinary conditional.  With deterministic brains the
two variants produce the identical move sequence.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .. import wire
from ..core import Choreography, LocatedValue, Location, LocationSet

_LINES = (
    (0, 1, 2), (3, 4, 5), (6, 7, 8),  # rows
    (0, 3, 6), (1, 4, 7), (2, 5, 8),  # columns
    (0, 4, 8), (2, 4, 6),             # diagonals
)


class GameStatus(enum.Enum):
    IN_PROGRESS = "in_progress"
    WON_X = "won_x"
    WON_O = "won_o"
    DRAW = "draw"

    @property
    def winner(self) -> str | None:
        return {"won_x": "X", "won_o": "O"}.get(self.value)


class IllegalMoveError(Exception):
    """A brain proposed a move outside the board or onto a taken cell."""


@dataclass(frozen=True)
class Board:
    """3x3 grid in row-major order; cells hold "X", "O", or None."""

    cells: tuple = (None,) * 9

    @classmethod
    def empty(cls) -> "Board":
        return cls()

    def apply_move(self, index: int, mark: str) -> "Board":
        if mark not in ("X", "O"):
            raise IllegalMoveError(f"unknown mark {mark!r}")
        if not (isinstance(index, int) and 0 <= index < 9):
            raise IllegalMoveError(f"cell {index!r} is off the board")
        if self.cells[index] is not None:
            raise IllegalMoveError(f"cell {index} is already taken")
        cells = list(self.cells)
        cells[index] = mark
        return Board(tuple(cells))

    def status(self) -> GameStatus:
        for a, b, c in _LINES:
            if self.cells[a] is not None and self.cells[a] == self.cells[b] == self.cells[c]:
                return GameStatus.WON_X if self.cells[a] == "X" else GameStatus.WON_O
        if all(cell is not None for cell in self.cells):
            return GameStatus.DRAW
        return GameStatus.IN_PROGRESS

    def open_cells(self) -> list[int]:
        return [i for i, cell in enumerate(self.cells) if cell is None]


wire.register_codec(
    Board,
    "ttt.board",
    lambda b: {"cells": list(b.cells)},
    lambda f: Board(tuple(f["cells"])),
)

# A brain is a deterministic move chooser for one fixed mark.
Brain = Callable[[Board], int]


def first_empty_brain(mark: str) -> Brain:
    """Takes the lowest-index open cell."""
    return lambda board: board.open_cells()[0]


def last_empty_brain(mark: str) -> Brain:
    """Takes the highest-index open cell."""
    return lambda board: board.open_cells()[-1]


def minimax_brain(mark: str) -> Brain:
    """Perfect play via exhaustive search; ties break to the lowest cell."""

    def choose(board: Board) -> int:
        best_cell, best_value = -1, -2
        for cell in board.open_cells():
            value = -_game_value(board.apply_move(cell, mark).cells, _other(mark))
            if value > best_value:
                best_cell, best_value = cell, value
        return best_cell

    return choose


def _other(mark: str) -> str:
    return "O" if mark == "X" else "X"


@lru_cache(maxsize=None)
def _game_value(cells: tuple, to_move: str) -> int:
    """Value of the position for the player about to move: +1 win, 0 draw."""
    board = Board(cells)
    status = board.status()
    if status is not GameStatus.IN_PROGRESS:
        # Any finished win belongs to the player who just moved.
        return 0 if status is GameStatus.DRAW else -1
    return max(
        -_game_value(board.apply_move(cell, to_move).cells, _other(to_move))
        for cell in board.open_cells()
    )


def _move(board: Board, brain: Brain, mark: str) -> Board:
    # Shared by both variants so legality is enforced identically.
    return board.apply_move(brain(board), mark)


def play_local_game(brain_x: Brain, brain_o: Brain) -> tuple[GameStatus, list[Board]]:
    """Single-machine variant; returns the outcome and every board state."""
    board = Board.empty()
    history = []
    mark = "X"
    while True:
        board = _move(board, brain_x if mark == "X" else brain_o, mark)
        history.append(board)
        status = board.status()
        if status is not GameStatus.IN_PROGRESS:
            return status, history
        mark = _other(mark)


class DistributedGame(Choreography):
    """Two players on their own nodes; returns the agreed final status."""

    def __init__(
        self,
        player_x: Location,
        player_o: Location,
        brain_x: LocatedValue,
        brain_o: LocatedValue,
    ):
        self.player_x = player_x
        self.player_o = player_o
        self.location_set = LocationSet(player_x, player_o)
        self.brain_x = brain_x
        self.brain_o = brain_o

    def run(self, op):
        board = Board.empty()
        mark = "X"
        while True:
            mover = self.player_x if mark == "X" else self.player_o
            brain = self.brain_x if mark == "X" else self.brain_o
            moved = op.locally(
                mover, lambda un, b=board, m=mark: _move(b, un.unwrap(brain), m)
            )
            board = op.broadcast(mover, moved)
            status = board.status()
            if status is not GameStatus.IN_PROGRESS:
                return status
            mark = _other(mark)
