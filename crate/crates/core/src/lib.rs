//! Exact solving and strategy-stealing verification for n-Sim, the game in
//! which two players alternately colour edges of `K_n` and whoever first
//! completes a triangle in their own colour loses.

pub mod board;
pub mod format;
pub mod preset;
pub mod reference;
pub mod report;
pub mod solver;
pub mod steal;
pub mod symmetry;
pub mod verify;

pub use board::{edge_endpoints, edge_index, triangles, BoardError, Color, EdgeId, EdgeSet, GameStatus, Position, Triangle};
pub use format::{parse_position, position_to_json, FormatError, PositionDoc};
pub use solver::{best_moves, engine_reply, solve, Budget, GameValue, SolveError, SolveOptions, SolveStats, Solved, Solver};
pub use symmetry::{
    apply_permutation, automorphism_group, canonical_key, find_color_swap_isomorphism, find_isomorphism,
    uncolored_edge_orbits, CanonicalKey, Perm, SymmetryError,
};
