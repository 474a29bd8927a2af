"""Mahjong Solitaire solvability engine and analysis toolkit."""

from .board import (Board, BoardFileError, FormatError, GroupSizeError,
                    IllegalMoveError, Layout, Move, OddCountError, Slot,
                    SlotOverlapError, UnsupportedSlotError, apply_move,
                    legal_moves, parse_board, parse_layout, playable,
                    serialize_board, serialize_layout, shuffle, undo_move)
from .harness import ScanReport, scan_layout
from .layouts import get_layout, layout_names, row4_demo, turtle, two_stacks_demo
from .rng import SplitMix64, derive_seed
from .scan import (PairingAssignment, ScanResult, pairing_feasibility,
                   prune_scan, simultaneous_removal_flags)
from .solver import (OracleSizeError, RandomResult, Verdict, clean,
                     default_attempts, oracle_solve, random_solve,
                     solve_group_directed, solve_match_directed,
                     verify_solution)
from .theory import (BlockedCycle, CnfFormula, DimacsError,
                     ExpectimaxSizeError, LowLayoutError, Stuck,
                     brute_force_satisfiable, detect_blocked_cycle,
                     expectimax_no_peek, no_peek_policy, one_level,
                     parse_dimacs, reduce_3sat, solve_low_peek,
                     visible_labels)

__version__ = "0.1.0"
