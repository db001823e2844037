"""Worked protocols: reusable choreographies plus handwritten baselines."""

from .bookseller import UNKNOWN_TITLE, Bookseller
from .catalog import Catalog, demo_catalog
from .kvs import (
    AckResponse,
    GetRequest,
    PutRequest,
    ReplicatedKv,
    ValueResponse,
    random_requests,
    replay_reference,
    run_handwritten,
)
from .password import PasswordAuth
from .tictactoe import (
    Board,
    DistributedGame,
    GameStatus,
    IllegalMoveError,
    first_empty_brain,
    last_empty_brain,
    minimax_brain,
    play_local_game,
)
from .two_buyer import TwoBuyerEnclave, TwoBuyerNaive

__all__ = [
    "UNKNOWN_TITLE",
    "Bookseller",
    "Catalog",
    "demo_catalog",
    "AckResponse",
    "GetRequest",
    "PutRequest",
    "ReplicatedKv",
    "ValueResponse",
    "random_requests",
    "replay_reference",
    "run_handwritten",
    "PasswordAuth",
    "Board",
    "DistributedGame",
    "GameStatus",
    "IllegalMoveError",
    "first_empty_brain",
    "last_empty_brain",
    "minimax_brain",
    "play_local_game",
    "TwoBuyerEnclave",
    "TwoBuyerNaive",
]
