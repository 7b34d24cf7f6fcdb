//! Exact misère evaluation by memoized exhaustive search.
//!
//! Values are computed relative to the player to move (win > draw > loss)
//! and stored in a transposition table keyed by the raw `(green, red)` masks,
//! or by their canonical form when `canonical_memo` is set (n ≤ 7). A node
//! stops expanding as soon as one child is proven a win for the mover.
//! Moves that close one of the mover's own triangles are never expanded:
//! they lose on the spot, so they only decide a node when nothing else is left.

use std::time::{Duration, Instant};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{BoardError, BoardTables, Color, EdgeId, GameStatus, Position};
use crate::symmetry::{canonical_masks, MAX_CANONICAL_N};

/// Absolute game outcome under perfect play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameValue {
    GreenWins,
    RedWins,
    Draw,
}

impl GameValue {
    pub fn win_for(c: Color) -> GameValue {
        match c {
            Color::Green => GameValue::GreenWins,
            Color::Red => GameValue::RedWins,
        }
    }

    /// Value of a finished or drawn position; `None` while live.
    pub fn from_status(s: GameStatus) -> Option<GameValue> {
        match s {
            GameStatus::Live => None,
            GameStatus::Draw => Some(GameValue::Draw),
            GameStatus::Finished { loser } => Some(GameValue::win_for(loser.opposite())),
        }
    }

    /// 2 for a win by `c`, 1 for a draw, 0 for a loss.
    pub fn score_for(self, c: Color) -> u8 {
        match self {
            GameValue::Draw => DRAW,
            v if v == GameValue::win_for(c) => WIN,
            _ => LOSS,
        }
    }

    fn from_score(score: u8, mover: Color) -> GameValue {
        match score {
            WIN => GameValue::win_for(mover),
            DRAW => GameValue::Draw,
            _ => GameValue::win_for(mover.opposite()),
        }
    }
}

impl std::fmt::Display for GameValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GameValue::GreenWins => "GreenWins",
            GameValue::RedWins => "RedWins",
            GameValue::Draw => "Draw",
        })
    }
}

const LOSS: u8 = 0;
const DRAW: u8 = 1;
const WIN: u8 = 2;

/// Search limits. `None` means unlimited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub const DEFAULT_MAX_NODES: u64 = 1_000_000_000;
    pub const DEFAULT_MAX_TIME: Duration = Duration::from_secs(30 * 60);

    pub fn unlimited() -> Budget {
        Budget { max_nodes: None, max_time: None }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: Some(Self::DEFAULT_MAX_NODES),
            max_time: Some(Self::DEFAULT_MAX_TIME),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub budget: Budget,
    /// Key the table by canonical form. Only honoured for n ≤ 7.
    pub canonical_memo: bool,
    /// Split the root move list across worker threads.
    pub parallel: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub table_entries: u64,
    #[serde(serialize_with = "ser_millis", rename = "elapsed_ms")]
    pub elapsed: Duration,
    pub budget_hit: bool,
}

fn ser_millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("search budget exceeded after {} nodes", .0.nodes)]
    BudgetExceeded(SolveStats),
    #[error("position is not live ({0:?})")]
    GameOver(GameStatus),
    #[error(transparent)]
    Board(#[from] BoardError),
}

struct Abort;

/// Memoizing solver. The table survives across calls on the same instance.
pub struct Solver {
    opts: SolveOptions,
    memo: FxHashMap<u128, u8>,
    nodes: u64,
    started: Instant,
    deadline: Option<Instant>,
    node_limit: u64,
}

impl Solver {
    pub fn new(opts: SolveOptions) -> Solver {
        Solver {
            opts,
            memo: FxHashMap::default(),
            nodes: 0,
            started: Instant::now(),
            deadline: None,
            node_limit: u64::MAX,
        }
    }

    pub fn options(&self) -> &SolveOptions {
        &self.opts
    }

    fn begin(&mut self) {
        self.nodes = 0;
        self.started = Instant::now();
        self.deadline = self.opts.budget.max_time.map(|d| self.started + d);
        self.node_limit = self.opts.budget.max_nodes.unwrap_or(u64::MAX);
    }

    /// Stats of the most recent call.
    pub fn stats(&self) -> SolveStats {
        SolveStats {
            nodes: self.nodes,
            table_entries: self.memo.len() as u64,
            elapsed: self.started.elapsed(),
            budget_hit: false,
        }
    }

    fn exceeded(&self) -> SolveError {
        SolveError::BudgetExceeded(SolveStats { budget_hit: true, ..self.stats() })
    }

    fn require_live(p: &Position) -> Result<(), SolveError> {
        match p.status()? {
            GameStatus::Live => Ok(()),
            s => Err(SolveError::GameOver(s)),
        }
    }

    /// Exact value of a live position.
    pub fn solve(&mut self, p: &Position) -> Result<GameValue, SolveError> {
        Self::require_live(p)?;
        self.begin();
        if self.opts.parallel {
            return self.solve_parallel(p);
        }
        let mover = p.player_to_move();
        let score = self.root_score(p).map_err(|_| self.exceeded())?;
        Ok(GameValue::from_score(score, mover))
    }

    fn root_score(&mut self, p: &Position) -> Result<u8, Abort> {
        let t = p.tables();
        let canonical = self.opts.canonical_memo && p.n() <= MAX_CANONICAL_N;
        let (mine, theirs) = mover_masks(p);
        let mut ctx = Ctx { t, canonical };
        self.search(&mut ctx, mine, theirs, p.player_to_move() == Color::Green)
    }

    /// Every uncoloured edge with the value of the position after the mover takes it,
    /// sorted by edge.
    pub fn best_moves(&mut self, p: &Position) -> Result<Vec<(EdgeId, GameValue)>, SolveError> {
        Self::require_live(p)?;
        self.begin();
        let t = p.tables();
        let mover = p.player_to_move();
        let canonical = self.opts.canonical_memo && p.n() <= MAX_CANONICAL_N;
        let (mine, theirs) = mover_masks(p);
        let mut out = Vec::new();
        for e in p.uncolored().iter() {
            let v = if t.closes_triangle(mine, e) {
                GameValue::win_for(mover.opposite())
            } else {
                let mut ctx = Ctx { t, canonical };
                let child_green_moves = mover == Color::Red;
                let s = self
                    .search(&mut ctx, theirs, mine | e.bit(), child_green_moves)
                    .map_err(|_| self.exceeded())?;
                GameValue::from_score(s, mover.opposite())
            };
            out.push((e, v));
        }
        Ok(out)
    }

    /// Lowest-numbered edge achieving the mover's optimal value.
    pub fn engine_reply(&mut self, p: &Position) -> Result<EdgeId, SolveError> {
        let mover = p.player_to_move();
        let moves = self.best_moves(p)?;
        let best = moves.iter().map(|(_, v)| v.score_for(mover)).max().expect("live position has an open edge");
        Ok(moves.into_iter().find(|(_, v)| v.score_for(mover) == best).map(|(e, _)| e).expect("max is attained"))
    }

    fn solve_parallel(&mut self, p: &Position) -> Result<GameValue, SolveError> {
        let t = p.tables();
        let mover = p.player_to_move();
        let (mine, theirs) = mover_masks(p);
        let safe: Vec<EdgeId> = p.uncolored().iter().filter(|&e| !t.closes_triangle(mine, e)).collect();
        if safe.is_empty() {
            return Ok(GameValue::win_for(mover.opposite()));
        }
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(safe.len());
        let chunks: Vec<Vec<EdgeId>> = (0..workers).map(|w| safe.iter().copied().skip(w).step_by(workers).collect()).collect();
        let opts = SolveOptions { parallel: false, ..self.opts };
        let deadline = self.deadline;
        let node_limit = self.node_limit;
        let results: Vec<Result<(u8, u64, u64), ()>> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|chunk| {
                    scope.spawn(move || {
                        let mut s = Solver::new(opts);
                        s.begin();
                        s.deadline = deadline;
                        s.node_limit = node_limit;
                        let canonical = opts.canonical_memo && p.n() <= MAX_CANONICAL_N;
                        let mut best = LOSS;
                        for &e in chunk {
                            let mut ctx = Ctx { t, canonical };
                            let child = s.search(&mut ctx, theirs, mine | e.bit(), mover == Color::Red).map_err(|_| ())?;
                            best = best.max(WIN - child);
                            if best == WIN {
                                break;
                            }
                        }
                        Ok((best, s.nodes, s.memo.len() as u64))
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("solver worker panicked")).collect()
        });
        let mut best = LOSS;
        for r in results {
            match r {
                Ok((score, nodes, _)) => {
                    self.nodes += nodes;
                    best = best.max(score);
                }
                Err(()) => return Err(self.exceeded()),
            }
        }
        Ok(GameValue::from_score(best, mover))
    }

    fn search(&mut self, ctx: &mut Ctx, mine: u64, theirs: u64, green_moves: bool) -> Result<u8, Abort> {
        self.nodes += 1;
        if self.nodes >= self.node_limit {
            return Err(Abort);
        }
        if self.nodes & 0xfff == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    return Err(Abort);
                }
            }
        }
        let t = ctx.t;
        let open = t.full & !(mine | theirs);
        if open == 0 {
            return Ok(DRAW);
        }
        let key = ctx.key(mine, theirs, green_moves);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let mut best = LOSS;
        let mut rest = open;
        while rest != 0 {
            let e = EdgeId(rest.trailing_zeros() as u8);
            rest &= rest - 1;
            if t.closes_triangle(mine, e) {
                continue;
            }
            let child = self.search(ctx, theirs, mine | e.bit(), !green_moves)?;
            let v = WIN - child;
            if v > best {
                best = v;
                if best == WIN {
                    break;
                }
            }
        }
        self.memo.insert(key, best);
        Ok(best)
    }
}

struct Ctx {
    t: &'static BoardTables,
    canonical: bool,
}

impl Ctx {
    #[inline]
    fn key(&self, mine: u64, theirs: u64, green_moves: bool) -> u128 {
        let (g, r) = if green_moves { (mine, theirs) } else { (theirs, mine) };
        let (g, r) = if self.canonical {
            canonical_masks(self.t.n, g, r).expect("canonical size checked")
        } else {
            (g, r)
        };
        // masks use at most 45 bits; the board size goes above them
        (g as u128) | ((r as u128) << 64) | ((self.t.n as u128) << 56)
    }
}

fn mover_masks(p: &Position) -> (u64, u64) {
    match p.player_to_move() {
        Color::Green => (p.green().0, p.red().0),
        Color::Red => (p.red().0, p.green().0),
    }
}

/// Result of a one-shot solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Solved {
    pub value: GameValue,
    pub stats: SolveStats,
}

pub fn solve(p: &Position, opts: SolveOptions) -> Result<Solved, SolveError> {
    let mut s = Solver::new(opts);
    let value = s.solve(p)?;
    Ok(Solved { value, stats: s.stats() })
}

pub fn best_moves(p: &Position, opts: SolveOptions) -> Result<Vec<(EdgeId, GameValue)>, SolveError> {
    Solver::new(opts).best_moves(p)
}

pub fn engine_reply(p: &Position, opts: SolveOptions) -> Result<EdgeId, SolveError> {
    Solver::new(opts).engine_reply(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::edge_index;
    use crate::preset::{build_preset, PresetName};

    fn opts() -> SolveOptions {
        SolveOptions::default()
    }

    #[test]
    fn empty_boards() {
        let v = |n| solve(&Position::empty(n).unwrap(), opts()).unwrap().value;
        assert_eq!(v(3), GameValue::Draw);
        assert_eq!(v(4), GameValue::Draw);
        // pinned by the reference solver
        assert_eq!(v(5), GameValue::Draw);
        assert_eq!(v(6), GameValue::RedWins);
    }

    #[test]
    fn prop_t7_is_a_green_win() {
        let p = build_preset(PresetName::PropT { n: 7 }).unwrap();
        assert_eq!(solve(&p, opts()).unwrap().value, GameValue::GreenWins);
        assert_eq!(engine_reply(&p, opts()).unwrap(), edge_index(5, 6, 7).unwrap());
    }

    #[test]
    fn thm2_move_values() {
        let p = build_preset(PresetName::Thm2 { n: 7 }).unwrap();
        let moves = best_moves(&p, opts()).unwrap();
        assert_eq!(moves.len(), p.uncolored().len());
        assert!(moves.windows(2).all(|w| w[0].0 < w[1].0));
        let completing = edge_index(0, 2, 7).unwrap();
        assert_eq!(moves.iter().find(|m| m.0 == completing).unwrap().1, GameValue::GreenWins);
        assert!(moves.iter().any(|m| m.1 == GameValue::RedWins));
        // lowest winning edge
        assert_eq!(engine_reply(&p, opts()).unwrap(), edge_index(0, 5, 7).unwrap());

        let p = build_preset(PresetName::Thm2 { n: 6 }).unwrap();
        let moves = best_moves(&p, opts()).unwrap();
        assert_eq!(moves.iter().find(|m| m.0 == edge_index(0, 2, 6).unwrap()).unwrap().1, GameValue::RedWins);
    }

    #[test]
    fn forced_self_triangle() {
        // Red's only edge (2,3) closes 1-2-3.
        let p = Position::from_edge_lists(4, &[(0, 1), (0, 2), (0, 3)], &[(1, 2), (1, 3)]).unwrap();
        let moves = best_moves(&p, opts()).unwrap();
        assert_eq!(moves, vec![(edge_index(2, 3, 4).unwrap(), GameValue::GreenWins)]);
        assert_eq!(solve(&p, opts()).unwrap().value, GameValue::GreenWins);
    }

    #[test]
    fn single_safe_move_is_chosen() {
        // (1,2) closes 0-1-2, so (0,3) is the only move that does not lose at once.
        let p = Position::from_edge_lists(4, &[(0, 1), (0, 2)], &[(1, 3), (2, 3)]).unwrap();
        assert_eq!(engine_reply(&p, opts()).unwrap(), edge_index(0, 3, 4).unwrap());
    }

    #[test]
    fn not_live_is_rejected() {
        let p = build_preset(PresetName::DrawnK5 { n: 5 }).unwrap();
        assert_eq!(solve(&p, opts()).unwrap_err(), SolveError::GameOver(GameStatus::Draw));
        assert!(matches!(engine_reply(&p, opts()), Err(SolveError::GameOver(_))));
    }

    #[test]
    fn budget_exceeded_returns_no_value() {
        let o = SolveOptions { budget: Budget { max_nodes: Some(1000), max_time: None }, ..opts() };
        match solve(&Position::empty(6).unwrap(), o) {
            Err(SolveError::BudgetExceeded(st)) => {
                assert!(st.budget_hit);
                assert!(st.nodes >= 1);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
        let o = SolveOptions { budget: Budget { max_nodes: None, max_time: Some(Duration::ZERO) }, ..opts() };
        assert!(matches!(solve(&Position::empty(6).unwrap(), o), Err(SolveError::BudgetExceeded(_))));
    }

    #[test]
    fn canonical_and_parallel_modes_agree() {
        for name in [PresetName::Thm3 { n: 6 }, PresetName::Thm2 { n: 7 }, PresetName::PropT { n: 7 }] {
            let p = build_preset(name).unwrap();
            let plain = solve(&p, opts()).unwrap();
            let canon = solve(&p, SolveOptions { canonical_memo: true, ..opts() }).unwrap();
            let par = solve(&p, SolveOptions { parallel: true, ..opts() }).unwrap();
            assert_eq!(plain.value, canon.value);
            assert_eq!(plain.value, par.value);
            assert!(canon.stats.table_entries <= plain.stats.table_entries);
        }
        let empty = Position::empty(6).unwrap();
        assert_eq!(solve(&empty, SolveOptions { parallel: true, ..opts() }).unwrap().value, GameValue::RedWins);
    }

    #[test]
    fn stats_are_populated() {
        let s = solve(&Position::empty(6).unwrap(), opts()).unwrap().stats;
        assert!(s.nodes >= 1);
        assert!(s.table_entries >= 1);
        assert!(!s.budget_hit);
    }
}
