//! Vertex relabelings of positions: isomorphism witnesses, automorphism
//! groups, canonical keys and edge orbits.
//!
//! Witness searches assign images to vertices `0, 1, ..` in order and try
//! candidate images in increasing order, so the first witness found is the
//! lexicographically smallest image array. Candidates must match the
//! source vertex's (green degree, red degree) signature in the target.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::board::{BoardTables, EdgeId, Position};

/// Largest board handled by full-enumeration canonical keys.
pub const MAX_CANONICAL_N: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("permutation has length {got}, board has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("not a permutation: {0:?}")]
    NotBijective(Vec<usize>),
    #[error("board size {0} too large for canonical keys (max {MAX_CANONICAL_N})")]
    TooLarge(usize),
    #[error("positions have different board sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),
}

/// A bijection on the vertices `0..n`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u8).collect())
    }

    pub fn new(images: Vec<usize>) -> Result<Perm, SymmetryError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(SymmetryError::NotBijective(images));
            }
            seen[v] = true;
        }
        Ok(Perm(images.into_iter().map(|v| v as u8).collect()))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn image(&self, v: usize) -> usize {
        self.0[v] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v as usize).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&v| self.0[v as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (v, &img) in self.0.iter().enumerate() {
            inv[img as usize] = v as u8;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(v, &img)| v == img as usize)
    }

    #[inline]
    pub fn map_edge(&self, t: &BoardTables, e: EdgeId) -> EdgeId {
        let (a, b) = t.endpoints[e.index()];
        t.edge(self.0[a as usize] as usize, self.0[b as usize] as usize)
    }

    pub fn map_mask(&self, t: &BoardTables, mask: u64) -> u64 {
        let mut out = 0;
        let mut rest = mask;
        while rest != 0 {
            let e = EdgeId(rest.trailing_zeros() as u8);
            rest &= rest - 1;
            out |= self.map_edge(t, e).bit();
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = SymmetryError;

    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        Perm::new(v)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.images()
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images())
    }
}

/// Relabels every coloured edge of `p` through `s`; colours are kept.
pub fn apply_permutation(p: &Position, s: &Perm) -> Result<Position, SymmetryError> {
    if s.len() != p.n() {
        return Err(SymmetryError::LengthMismatch { expected: p.n(), got: s.len() });
    }
    let t = p.tables();
    let pos = Position::from_masks(p.n(), s.map_mask(t, p.green().0), s.map_mask(t, p.red().0))
        .expect("relabeling preserves disjointness");
    Ok(pos)
}

/// Edge colour matrix: 0 uncoloured, 1 green, 2 red.
struct ColorMatrix {
    n: usize,
    cells: [[u8; crate::board::MAX_N]; crate::board::MAX_N],
    sig: Vec<(u8, u8)>,
}

impl ColorMatrix {
    fn new(t: &BoardTables, green: u64, red: u64) -> ColorMatrix {
        let n = t.n;
        let mut cells = [[0u8; crate::board::MAX_N]; crate::board::MAX_N];
        let mut sig = vec![(0u8, 0u8); n];
        for (e, &(a, b)) in t.endpoints.iter().enumerate() {
            let (a, b) = (a as usize, b as usize);
            let c = if green >> e & 1 == 1 {
                sig[a].0 += 1;
                sig[b].0 += 1;
                1
            } else if red >> e & 1 == 1 {
                sig[a].1 += 1;
                sig[b].1 += 1;
                2
            } else {
                0
            };
            cells[a][b] = c;
            cells[b][a] = c;
        }
        ColorMatrix { n, cells, sig }
    }
}

/// Backtracking search for vertex maps sending `src` onto `dst` cell by cell.
/// `visit` returns `false` to stop the search.
fn search_maps(src: &ColorMatrix, dst: &ColorMatrix, mut visit: impl FnMut(&[u8]) -> bool) {
    let n = src.n;
    let mut a = src.sig.clone();
    let mut b = dst.sig.clone();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return;
    }
    let mut images = vec![0u8; n];
    let mut used = vec![false; n];
    fn go(
        v: usize,
        src: &ColorMatrix,
        dst: &ColorMatrix,
        images: &mut [u8],
        used: &mut [bool],
        visit: &mut dyn FnMut(&[u8]) -> bool,
    ) -> bool {
        let n = src.n;
        if v == n {
            return visit(images);
        }
        for cand in 0..n {
            if used[cand] || dst.sig[cand] != src.sig[v] {
                continue;
            }
            let consistent =
                (0..v).all(|u| src.cells[u][v] == dst.cells[images[u] as usize][cand]);
            if !consistent {
                continue;
            }
            images[v] = cand as u8;
            used[cand] = true;
            let keep_going = go(v + 1, src, dst, images, used, visit);
            used[cand] = false;
            if !keep_going {
                return false;
            }
        }
        true
    }
    go(0, src, dst, &mut images, &mut used, &mut visit);
}

fn first_map(src: &ColorMatrix, dst: &ColorMatrix) -> Option<Perm> {
    let mut found = None;
    search_maps(src, dst, |img| {
        found = Some(Perm(img.to_vec()));
        false
    });
    found
}

/// Smallest `s` with `apply_permutation(p, s) == q`, if any.
pub fn find_isomorphism(p: &Position, q: &Position) -> Option<Perm> {
    if p.n() != q.n() || p.green().len() != q.green().len() || p.red().len() != q.red().len() {
        return None;
    }
    let t = p.tables();
    let src = ColorMatrix::new(t, p.green().0, p.red().0);
    let dst = ColorMatrix::new(t, q.green().0, q.red().0);
    first_map(&src, &dst)
}

/// Smallest `s` sending green(p) onto red(q) and red(p) onto green(q), if any.
pub fn find_color_swap_isomorphism(p: &Position, q: &Position) -> Option<Perm> {
    find_isomorphism(p, &q.color_swapped())
}

/// All colour-preserving self-maps of `p`, in increasing image order.
pub fn automorphism_group(p: &Position) -> Vec<Perm> {
    let t = p.tables();
    let m = ColorMatrix::new(t, p.green().0, p.red().0);
    let mut all = Vec::new();
    search_maps(&m, &m, |img| {
        all.push(Perm(img.to_vec()));
        true
    });
    all
}

/// Isomorphism-class key: the smallest `(green, red)` mask pair over all relabelings.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Edge image tables for every permutation of `0..n`.
struct PermTable {
    edge_images: Vec<Vec<u8>>,
}

fn perm_table(n: usize) -> &'static PermTable {
    static TABLES: OnceLock<Vec<PermTable>> = OnceLock::new();
    let all = TABLES.get_or_init(|| {
        (0..=MAX_CANONICAL_N)
            .map(|k| {
                if k < crate::board::MIN_N {
                    return PermTable { edge_images: Vec::new() };
                }
                let t = crate::board::tables(k).expect("size in range");
                let edge_images = all_permutations(k)
                    .into_iter()
                    .map(|s| (0..t.edge_count()).map(|e| s.map_edge(t, EdgeId(e as u8)).0).collect())
                    .collect();
                PermTable { edge_images }
            })
            .collect()
    });
    &all[n]
}

/// Every permutation of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Perm> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![Perm(cur.clone())];
    // next lexicographic permutation
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("pivot exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Perm(cur.clone()));
    }
}

#[inline]
fn map_with(images: &[u8], mask: u64) -> u64 {
    let mut out = 0;
    let mut rest = mask;
    while rest != 0 {
        out |= 1u64 << images[rest.trailing_zeros() as usize];
        rest &= rest - 1;
    }
    out
}

/// Minimal `(green, red)` masks over all relabelings of the colouring.
pub fn canonical_masks(n: usize, green: u64, red: u64) -> Result<(u64, u64), SymmetryError> {
    if n > MAX_CANONICAL_N {
        return Err(SymmetryError::TooLarge(n));
    }
    let table = perm_table(n);
    let mut best = (u64::MAX, u64::MAX);
    for images in &table.edge_images {
        let g = map_with(images, green);
        if g > best.0 {
            continue;
        }
        let r = map_with(images, red);
        if (g, r) < best {
            best = (g, r);
        }
    }
    Ok(best)
}

/// Key equal for two positions exactly when they are isomorphic (colours kept).
pub fn canonical_key(p: &Position) -> Result<CanonicalKey, SymmetryError> {
    let (g, r) = canonical_masks(p.n(), p.green().0, p.red().0)?;
    let mut bytes = Vec::with_capacity(17);
    bytes.push(p.n() as u8);
    bytes.extend_from_slice(&g.to_be_bytes());
    bytes.extend_from_slice(&r.to_be_bytes());
    Ok(CanonicalKey(bytes))
}

/// Partition of the uncoloured edges into orbits under [`automorphism_group`],
/// ordered by smallest member.
pub fn uncolored_edge_orbits(p: &Position) -> Vec<Vec<EdgeId>> {
    orbits_under(p, &automorphism_group(p))
}

/// Orbits of the uncoloured edges under a given set of automorphisms.
pub fn orbits_under(p: &Position, group: &[Perm]) -> Vec<Vec<EdgeId>> {
    let t = p.tables();
    let m = t.edge_count();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let open = p.uncolored();
    for s in group {
        for e in open.iter() {
            let f = s.map_edge(t, e);
            let (a, b) = (find(&mut parent, e.index()), find(&mut parent, f.index()));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut orbits: Vec<Vec<EdgeId>> = Vec::new();
    let mut slot = vec![usize::MAX; m];
    for e in open.iter() {
        let root = find(&mut parent, e.index());
        if slot[root] == usize::MAX {
            slot[root] = orbits.len();
            orbits.push(Vec::new());
        }
        orbits[slot[root]].push(e);
    }
    orbits
}
