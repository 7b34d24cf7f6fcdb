//! Board representation for n-Sim.
//!
//! Edges of `K_n` are numbered row by row: the pair `(i, j)` with `i < j`
//! maps to `i*n - i*(i+1)/2 + (j - i - 1)`. A position stores the green and
//! red edge sets as bitmasks over that numbering; whose turn it is follows
//! from the two counts (green moves first).

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Smallest supported board.
pub const MIN_N: usize = 3;
/// Largest supported board.
pub const MAX_N: usize = 10;
/// Number of edges of `K_MAX_N`.
pub const MAX_EDGES: usize = MAX_N * (MAX_N - 1) / 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    #[error("board size {0} outside supported range {MIN_N}..={MAX_N}")]
    BoardSize(usize),
    #[error("vertex pair ({0}, {1}) is not valid on a board of size {2}")]
    InvalidPair(usize, usize, usize),
    #[error("edge index {0} out of range for board size {1}")]
    EdgeOutOfRange(usize, usize),
    #[error("edge ({0}, {1}) listed more than once")]
    DuplicateEdge(usize, usize),
    #[error("count rule violated: {green} green vs {red} red edges")]
    CountRuleViolation { green: usize, red: usize },
    #[error("position already contains a {0} triangle {1}")]
    DeadPosition(Color, Triangle),
    #[error("edge ({0}, {1}) is already colored")]
    EdgeOccupied(usize, usize),
    #[error("game is over")]
    GameOver,
    #[error("both colors contain a monochromatic triangle")]
    IllegalPosition,
    #[error("green and red edge sets overlap")]
    Overlap,
}

/// Player colour. Green always belongs to the first player, red to the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Green,
    Red,
}

impl Color {
    #[inline]
    pub fn opposite(self) -> Color {
        match self {
            Color::Green => Color::Red,
            Color::Red => Color::Green,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Green => "green",
            Color::Red => "red",
        })
    }
}

/// Index of an edge of `K_n` under the row-major numbering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u8);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn bit(self) -> u64 {
        1u64 << self.0
    }
}

/// Number of edges of `K_n`.
#[inline]
pub fn edge_count(n: usize) -> usize {
    n * (n - 1) / 2
}

fn check_size(n: usize) -> Result<(), BoardError> {
    if (MIN_N..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(BoardError::BoardSize(n))
    }
}

/// Maps the vertex pair `(i, j)`, `i < j < n`, to its edge index.
pub fn edge_index(i: usize, j: usize, n: usize) -> Result<EdgeId, BoardError> {
    check_size(n)?;
    if i >= j || j >= n {
        return Err(BoardError::InvalidPair(i, j, n));
    }
    Ok(EdgeId((i * n - i * (i + 1) / 2 + (j - i - 1)) as u8))
}

/// Inverse of [`edge_index`].
pub fn edge_endpoints(e: EdgeId, n: usize) -> Result<(usize, usize), BoardError> {
    let t = tables(n)?;
    t.endpoints
        .get(e.index())
        .map(|&(a, b)| (a as usize, b as usize))
        .ok_or(BoardError::EdgeOutOfRange(e.index(), n))
}

/// A triangle of `K_n`, vertices in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triangle {
    pub vertices: [usize; 3],
    pub edges: [EdgeId; 3],
}

impl Triangle {
    #[inline]
    pub fn mask(&self) -> u64 {
        self.edges.iter().fold(0, |m, e| m | e.bit())
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.vertices;
        write!(f, "({a}, {b}, {c})")
    }
}

/// Precomputed per-size lookup data.
#[derive(Debug)]
pub struct BoardTables {
    pub n: usize,
    /// Endpoints per edge index.
    pub endpoints: Vec<(u8, u8)>,
    /// All triangles in lexicographic vertex order.
    pub triangles: Vec<Triangle>,
    /// For each edge, the masks of the other two edges of every triangle through it.
    pub partners: Vec<Vec<u64>>,
    /// Mask with every edge set.
    pub full: u64,
    index: [[u8; MAX_N]; MAX_N],
}

impl BoardTables {
    fn build(n: usize) -> BoardTables {
        let mut index = [[u8::MAX; MAX_N]; MAX_N];
        let mut endpoints = Vec::with_capacity(edge_count(n));
        for i in 0..n {
            for j in i + 1..n {
                let e = endpoints.len() as u8;
                index[i][j] = e;
                index[j][i] = e;
                endpoints.push((i as u8, j as u8));
            }
        }
        let mut triangles = Vec::new();
        let mut partners = vec![Vec::with_capacity(n.saturating_sub(2)); endpoints.len()];
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let edges = [
                        EdgeId(index[a][b]),
                        EdgeId(index[a][c]),
                        EdgeId(index[b][c]),
                    ];
                    let tri = Triangle { vertices: [a, b, c], edges };
                    let m = tri.mask();
                    for e in edges {
                        partners[e.index()].push(m & !e.bit());
                    }
                    triangles.push(tri);
                }
            }
        }
        let full = if endpoints.len() == 64 { u64::MAX } else { (1u64 << endpoints.len()) - 1 };
        BoardTables { n, endpoints, triangles, partners, full, index }
    }

    /// Edge between two distinct vertices, either order.
    #[inline]
    pub fn edge(&self, u: usize, v: usize) -> EdgeId {
        debug_assert!(u != v && u < self.n && v < self.n);
        EdgeId(self.index[u][v])
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    /// Whether adding `e` to the edge set `own` closes a triangle.
    #[inline]
    pub fn closes_triangle(&self, own: u64, e: EdgeId) -> bool {
        self.partners[e.index()].iter().any(|&m| own & m == m)
    }

    /// First triangle fully contained in `set`.
    pub fn first_triangle_in(&self, set: u64) -> Option<Triangle> {
        self.triangles.iter().find(|t| set & t.mask() == t.mask()).copied()
    }
}

/// Lookup tables for board size `n`, built on first use.
pub fn tables(n: usize) -> Result<&'static BoardTables, BoardError> {
    static TABLES: OnceLock<Vec<BoardTables>> = OnceLock::new();
    check_size(n)?;
    let all = TABLES.get_or_init(|| (0..=MAX_N).map(|k| BoardTables::build(k.max(MIN_N))).collect());
    Ok(&all[n])
}

/// All triangles of `K_n` in lexicographic order.
pub fn triangles(n: usize) -> Result<&'static [Triangle], BoardError> {
    Ok(&tables(n)?.triangles)
}

/// A set of edges stored as a bitmask over edge indices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(pub u64);

impl EdgeSet {
    #[inline]
    pub fn contains(self, e: EdgeId) -> bool {
        self.0 & e.bit() != 0
    }

    #[inline]
    pub fn with(self, e: EdgeId) -> EdgeSet {
        EdgeSet(self.0 | e.bit())
    }

    #[inline]
    pub fn without(self, e: EdgeId) -> EdgeSet {
        EdgeSet(self.0 & !e.bit())
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = EdgeId> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let e = rest.trailing_zeros() as u8;
                rest &= rest - 1;
                Some(EdgeId(e))
            }
        })
    }
}

/// Outcome state of a position. Serialized as `{"state": "Live"}`,
/// `{"state": "Finished", "loser": "green"}` or `{"state": "Draw"}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "state")]
pub enum GameStatus {
    Live,
    /// Someone completed a triangle in their own colour.
    Finished { loser: Color },
    /// Every edge is coloured and no monochromatic triangle exists.
    Draw,
}

/// An edge-coloured `K_n`.
///
/// Positions built through [`Position::from_edge_lists`] or reached through
/// [`Position::apply_move`] always satisfy the count rule. [`Position::from_masks`]
/// skips the count and triangle checks so terminal colourings can be examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Position {
    n: u8,
    green: EdgeSet,
    red: EdgeSet,
}

impl Position {
    pub fn empty(n: usize) -> Result<Position, BoardError> {
        check_size(n)?;
        Ok(Position { n: n as u8, green: EdgeSet(0), red: EdgeSet(0) })
    }

    /// Builds a colouring without turn or triangle validation.
    pub fn from_masks(n: usize, green: u64, red: u64) -> Result<Position, BoardError> {
        let t = tables(n)?;
        if green & red != 0 {
            return Err(BoardError::Overlap);
        }
        let stray = (green | red) & !t.full;
        if stray != 0 {
            return Err(BoardError::EdgeOutOfRange(stray.trailing_zeros() as usize, n));
        }
        Ok(Position { n: n as u8, green: EdgeSet(green), red: EdgeSet(red) })
    }

    /// Builds and validates a live-or-terminal-free position from vertex pairs.
    pub fn from_edge_lists(
        n: usize,
        green: &[(usize, usize)],
        red: &[(usize, usize)],
    ) -> Result<Position, BoardError> {
        let t = tables(n)?;
        let mut seen = 0u64;
        let mut masks = [0u64; 2];
        for (slot, list) in [green, red].into_iter().enumerate() {
            for &(i, j) in list {
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                if a == b || b >= n {
                    return Err(BoardError::InvalidPair(i, j, n));
                }
                let e = t.edge(a, b);
                if seen & e.bit() != 0 {
                    return Err(BoardError::DuplicateEdge(a, b));
                }
                seen |= e.bit();
                masks[slot] |= e.bit();
            }
        }
        let p = Position { n: n as u8, green: EdgeSet(masks[0]), red: EdgeSet(masks[1]) };
        p.validate()?;
        Ok(p)
    }

    /// Checks that neither colour holds a triangle, then the count rule.
    pub fn validate(&self) -> Result<(), BoardError> {
        for c in [Color::Green, Color::Red] {
            if let Some(tri) = self.mono_triangle(c) {
                return Err(BoardError::DeadPosition(c, tri));
            }
        }
        let (g, r) = (self.green.len(), self.red.len());
        if g != r && g != r + 1 {
            return Err(BoardError::CountRuleViolation { green: g, red: r });
        }
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn green(&self) -> EdgeSet {
        self.green
    }

    #[inline]
    pub fn red(&self) -> EdgeSet {
        self.red
    }

    #[inline]
    pub fn edges_of(&self, c: Color) -> EdgeSet {
        match c {
            Color::Green => self.green,
            Color::Red => self.red,
        }
    }

    #[inline]
    pub fn tables(&self) -> &'static BoardTables {
        tables(self.n()).expect("position size validated at construction")
    }

    pub fn colored(&self) -> EdgeSet {
        EdgeSet(self.green.0 | self.red.0)
    }

    pub fn uncolored(&self) -> EdgeSet {
        EdgeSet(self.tables().full & !(self.green.0 | self.red.0))
    }

    pub fn color_of(&self, e: EdgeId) -> Option<Color> {
        if self.green.contains(e) {
            Some(Color::Green)
        } else if self.red.contains(e) {
            Some(Color::Red)
        } else {
            None
        }
    }

    /// Green when the counts are level, red otherwise.
    #[inline]
    pub fn player_to_move(&self) -> Color {
        if self.green.len() == self.red.len() {
            Color::Green
        } else {
            Color::Red
        }
    }

    /// Same board with the two colour classes exchanged.
    pub fn color_swapped(&self) -> Position {
        Position { n: self.n, green: self.red, red: self.green }
    }

    /// Adds `e` in the given colour without turn checks.
    pub fn with_edge(&self, e: EdgeId, c: Color) -> Result<Position, BoardError> {
        if e.index() >= self.tables().edge_count() {
            return Err(BoardError::EdgeOutOfRange(e.index(), self.n()));
        }
        if self.color_of(e).is_some() {
            let (a, b) = self.tables().endpoints[e.index()];
            return Err(BoardError::EdgeOccupied(a as usize, b as usize));
        }
        let mut p = *self;
        match c {
            Color::Green => p.green = p.green.with(e),
            Color::Red => p.red = p.red.with(e),
        }
        Ok(p)
    }

    /// Removes `e` from whichever colour holds it.
    pub fn without_edge(&self, e: EdgeId) -> Position {
        Position { n: self.n, green: self.green.without(e), red: self.red.without(e) }
    }

    /// Colours `e` for the player to move.
    pub fn apply_move(&self, e: EdgeId) -> Result<Position, BoardError> {
        if self.status()? != GameStatus::Live {
            return Err(BoardError::GameOver);
        }
        self.with_edge(e, self.player_to_move())
    }

    pub fn mono_triangle(&self, c: Color) -> Option<Triangle> {
        self.tables().first_triangle_in(self.edges_of(c).0)
    }

    pub fn status(&self) -> Result<GameStatus, BoardError> {
        let g = self.mono_triangle(Color::Green);
        let r = self.mono_triangle(Color::Red);
        match (g, r) {
            (Some(_), Some(_)) => Err(BoardError::IllegalPosition),
            (Some(_), None) => Ok(GameStatus::Finished { loser: Color::Green }),
            (None, Some(_)) => Ok(GameStatus::Finished { loser: Color::Red }),
            (None, None) if self.uncolored().is_empty() => Ok(GameStatus::Draw),
            (None, None) => Ok(GameStatus::Live),
        }
    }

    pub fn is_live(&self) -> bool {
        matches!(self.status(), Ok(GameStatus::Live))
    }

    /// Vertex pairs of one colour class in increasing edge order.
    pub fn pairs(&self, c: Color) -> Vec<(usize, usize)> {
        let t = self.tables();
        self.edges_of(c)
            .iter()
            .map(|e| {
                let (a, b) = t.endpoints[e.index()];
                (a as usize, b as usize)
            })
            .collect()
    }

    /// Per-vertex (green degree, red degree).
    pub fn degrees(&self) -> Vec<(u8, u8)> {
        let t = self.tables();
        let mut d = vec![(0u8, 0u8); self.n()];
        for e in self.green.iter() {
            let (a, b) = t.endpoints[e.index()];
            d[a as usize].0 += 1;
            d[b as usize].0 += 1;
        }
        for e in self.red.iter() {
            let (a, b) = t.endpoints[e.index()];
            d[a as usize].1 += 1;
            d[b as usize].1 += 1;
        }
        d
    }
}
