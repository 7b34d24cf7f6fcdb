//! Plain recursive reference solver.
//!
//! Works on an adjacency matrix of colours and detects triangles by scanning
//! third vertices, with no transposition table, no symmetry reduction and no
//! use of the edge numbering or triangle tables. It exists to cross-check
//! [`crate::solver`] and is only practical for small numbers of open edges.

use crate::board::{Color, Position, MAX_N};
use crate::solver::GameValue;

const NONE: u8 = 0;

fn code(c: Color) -> u8 {
    match c {
        Color::Green => 1,
        Color::Red => 2,
    }
}

/// Exact value of a live position, by exhaustive negamax.
pub fn reference_value(p: &Position) -> GameValue {
    let n = p.n();
    let mut m = [[NONE; MAX_N]; MAX_N];
    for c in [Color::Green, Color::Red] {
        for (a, b) in p.pairs(c) {
            m[a][b] = code(c);
            m[b][a] = code(c);
        }
    }
    let mover = p.player_to_move();
    match negamax(&mut m, n, mover) {
        1 => GameValue::win_for(mover),
        0 => GameValue::Draw,
        _ => GameValue::win_for(mover.opposite()),
    }
}

/// +1 win, 0 draw, -1 loss for `mover`.
fn negamax(m: &mut [[u8; MAX_N]; MAX_N], n: usize, mover: Color) -> i8 {
    let c = code(mover);
    let mut any_move = false;
    let mut best = -1i8;
    for i in 0..n {
        for j in i + 1..n {
            if m[i][j] != NONE {
                continue;
            }
            any_move = true;
            let loses = (0..n).any(|k| k != i && k != j && m[i][k] == c && m[j][k] == c);
            let v = if loses {
                -1
            } else {
                m[i][j] = c;
                m[j][i] = c;
                let v = -negamax(m, n, mover.opposite());
                m[i][j] = NONE;
                m[j][i] = NONE;
                v
            };
            if v > best {
                best = v;
                if best == 1 {
                    return 1;
                }
            }
        }
    }
    if any_move {
        best
    } else {
        0
    }
}
