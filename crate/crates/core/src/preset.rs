//! Named positions: the drawn K5, its disjoint unions and the configurations
//! the stealing arguments start from.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::board::{edge_index, tables, BoardError, Color, EdgeId, Position, MAX_N};

/// Green 5-cycle of the drawn K5.
pub const K5_GREEN: [(usize, usize); 5] = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)];
/// Red chords of the drawn K5.
pub const K5_RED: [(usize, usize); 5] = [(0, 2), (1, 3), (2, 4), (0, 3), (1, 4)];
/// Red edge left open in the `thm2` preset.
pub const THM2_MISSING: (usize, usize) = (0, 2);
/// Edge joining the two isolated vertices of `prop-T(7)`.
pub const XY: (usize, usize) = (5, 6);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresetError {
    #[error("unknown preset {0:?}")]
    Unknown(String),
    #[error("preset {name} does not accept {param}={value}")]
    OutOfRange { name: &'static str, param: &'static str, value: usize },
    #[error("preset {0} violates its defining constraints: {1}")]
    Constraint(&'static str, String),
    #[error(transparent)]
    Board(#[from] BoardError),
}

/// Preset family, before parameters are attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresetKind {
    DrawnK5,
    Thm1,
    Thm2,
    Thm3,
    PropT,
    PropTXY,
}

impl PresetKind {
    pub const ALL: [PresetKind; 6] = [
        PresetKind::DrawnK5,
        PresetKind::Thm1,
        PresetKind::Thm2,
        PresetKind::Thm3,
        PresetKind::PropT,
        PresetKind::PropTXY,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PresetKind::DrawnK5 => "drawn-k5",
            PresetKind::Thm1 => "thm1",
            PresetKind::Thm2 => "thm2",
            PresetKind::Thm3 => "thm3",
            PresetKind::PropT => "prop-T",
            PresetKind::PropTXY => "prop-T-XY",
        }
    }

    /// Attaches parameters. `thm1` reads `k`; everything else reads `n`.
    pub fn with_params(self, n: Option<usize>, k: Option<usize>) -> Result<PresetName, PresetError> {
        let name = self.name();
        let need_n = |default: usize| n.unwrap_or(default);
        let p = match self {
            PresetKind::Thm1 => PresetName::Thm1 { k: k.unwrap_or(2) },
            PresetKind::DrawnK5 => PresetName::DrawnK5 { n: need_n(5) },
            PresetKind::Thm2 => PresetName::Thm2 { n: need_n(6) },
            PresetKind::Thm3 => PresetName::Thm3 { n: need_n(6) },
            PresetKind::PropT => PresetName::PropT { n: need_n(6) },
            PresetKind::PropTXY => PresetName::PropTXY { n: need_n(7) },
        };
        p.check_range().map_err(|(param, value)| PresetError::OutOfRange { name, param, value })?;
        Ok(p)
    }
}

impl FromStr for PresetKind {
    type Err = PresetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PresetKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| PresetError::Unknown(s.to_string()))
    }
}

/// A fully parameterised preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresetName {
    DrawnK5 { n: usize },
    Thm1 { k: usize },
    Thm2 { n: usize },
    Thm3 { n: usize },
    PropT { n: usize },
    PropTXY { n: usize },
}

impl PresetName {
    pub fn kind(self) -> PresetKind {
        match self {
            PresetName::DrawnK5 { .. } => PresetKind::DrawnK5,
            PresetName::Thm1 { .. } => PresetKind::Thm1,
            PresetName::Thm2 { .. } => PresetKind::Thm2,
            PresetName::Thm3 { .. } => PresetKind::Thm3,
            PresetName::PropT { .. } => PresetKind::PropT,
            PresetName::PropTXY { .. } => PresetKind::PropTXY,
        }
    }

    /// Board size the preset lives on.
    pub fn n(self) -> usize {
        match self {
            PresetName::Thm1 { k } => 5 * k,
            PresetName::DrawnK5 { n }
            | PresetName::Thm2 { n }
            | PresetName::Thm3 { n }
            | PresetName::PropT { n }
            | PresetName::PropTXY { n } => n,
        }
    }

    fn check_range(self) -> Result<(), (&'static str, usize)> {
        let ok = match self {
            PresetName::Thm1 { k } => (1..=2).contains(&k),
            PresetName::DrawnK5 { n } | PresetName::Thm2 { n } | PresetName::PropT { n } => (5..=MAX_N).contains(&n),
            PresetName::Thm3 { n } => (4..=MAX_N).contains(&n),
            PresetName::PropTXY { n } => (7..=MAX_N).contains(&n),
        };
        if ok {
            Ok(())
        } else {
            match self {
                PresetName::Thm1 { k } => Err(("k", k)),
                other => Err(("n", other.n())),
            }
        }
    }

    /// Parameters as a small JSON object.
    pub fn params(self) -> serde_json::Value {
        match self {
            PresetName::Thm1 { k } => serde_json::json!({ "k": k }),
            other => serde_json::json!({ "n": other.n() }),
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresetName::Thm1 { k } => write!(f, "thm1({k})"),
            other => write!(f, "{}({})", other.kind().name(), other.n()),
        }
    }
}

/// Presets offered to clients.
pub fn preset_grid() -> Vec<PresetName> {
    vec![
        PresetName::DrawnK5 { n: 5 },
        PresetName::DrawnK5 { n: 6 },
        PresetName::DrawnK5 { n: 7 },
        PresetName::Thm1 { k: 2 },
        PresetName::Thm2 { n: 6 },
        PresetName::Thm2 { n: 7 },
        PresetName::Thm3 { n: 6 },
        PresetName::Thm3 { n: 7 },
        PresetName::PropT { n: 6 },
        PresetName::PropT { n: 7 },
        PresetName::PropTXY { n: 7 },
    ]
}

fn drawn_k5_lists(offsets: &[usize]) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let shift = |list: &[(usize, usize)], o: usize| list.iter().map(move |&(a, b)| (a + o, b + o)).collect::<Vec<_>>();
    let mut green = Vec::new();
    let mut red = Vec::new();
    for &o in offsets {
        green.extend(shift(&K5_GREEN, o));
        red.extend(shift(&K5_RED, o));
    }
    (green, red)
}

pub fn build_preset(name: PresetName) -> Result<Position, PresetError> {
    name.check_range()
        .map_err(|(param, value)| PresetError::OutOfRange { name: name.kind().name(), param, value })?;
    let n = name.n();
    let p = match name {
        PresetName::DrawnK5 { .. } | PresetName::PropT { .. } => {
            let (g, r) = drawn_k5_lists(&[0]);
            Position::from_edge_lists(n, &g, &r)?
        }
        PresetName::Thm1 { k } => {
            let offsets: Vec<usize> = (0..k).map(|c| 5 * c).collect();
            let (g, r) = drawn_k5_lists(&offsets);
            Position::from_edge_lists(n, &g, &r)?
        }
        PresetName::Thm2 { .. } => {
            let (g, mut r) = drawn_k5_lists(&[0]);
            r.retain(|&e| e != THM2_MISSING);
            Position::from_edge_lists(n, &g, &r)?
        }
        PresetName::PropTXY { .. } => {
            let (mut g, r) = drawn_k5_lists(&[0]);
            g.push(XY);
            Position::from_edge_lists(n, &g, &r)?
        }
        PresetName::Thm3 { .. } => {
            let labels = Thm3Labels::standard(n)?;
            let p = labels.configuration()?;
            labels.check_constraints(&p)?;
            p
        }
    };
    Ok(p)
}

/// Named edges of the three-move configuration: `f`, `g` green, `h` red,
/// and `e` the uncoloured edge closing the green pair into a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Thm3Labels {
    pub n: usize,
    pub e: EdgeId,
    pub f: EdgeId,
    pub g: EdgeId,
    pub h: EdgeId,
}

impl Thm3Labels {
    /// Green cherry (0,1), (0,2); red (1,3); e = (1,2).
    pub fn standard(n: usize) -> Result<Thm3Labels, PresetError> {
        Thm3Labels::with_red(n, (1, 3))
    }

    /// Same green cherry with the red edge `h` chosen freely. `f` is the green
    /// edge meeting `h`, `g` the other one.
    pub fn with_red(n: usize, h: (usize, usize)) -> Result<Thm3Labels, PresetError> {
        if !(4..=MAX_N).contains(&n) {
            return Err(PresetError::OutOfRange { name: "thm3", param: "n", value: n });
        }
        let e01 = edge_index(0, 1, n)?;
        let e02 = edge_index(0, 2, n)?;
        let h = edge_index(h.0.min(h.1), h.0.max(h.1), n)?;
        let t = tables(n)?;
        let (ha, hb) = t.endpoints[h.index()];
        let touches = |e: EdgeId| {
            let (a, b) = t.endpoints[e.index()];
            [a, b].iter().any(|v| *v == ha || *v == hb)
        };
        let (f, g) = if touches(e01) && !touches(e02) { (e01, e02) } else { (e02, e01) };
        Ok(Thm3Labels { n, e: edge_index(1, 2, n)?, f, g, h })
    }

    pub fn configuration(&self) -> Result<Position, PresetError> {
        Ok(Position::from_masks(self.n, self.f.bit() | self.g.bit(), self.h.bit())?)
    }

    /// The frame the second player pretends to face: `e`, `h` red and `g` green.
    pub fn pretend_frame(&self) -> Result<Position, PresetError> {
        Ok(Position::from_masks(self.n, self.g.bit(), self.e.bit() | self.h.bit())?)
    }

    /// f, g green and sharing a vertex; e closes their triangle; h red and meeting e.
    pub fn check_constraints(&self, u: &Position) -> Result<(), PresetError> {
        let t = tables(self.n)?;
        let fail = |msg: &str| Err(PresetError::Constraint("thm3", msg.to_string()));
        let ends = |e: EdgeId| {
            let (a, b) = t.endpoints[e.index()];
            [a as usize, b as usize]
        };
        let shares = |x: EdgeId, y: EdgeId| ends(x).iter().any(|v| ends(y).contains(v));
        if u.color_of(self.f) != Some(Color::Green) || u.color_of(self.g) != Some(Color::Green) {
            return fail("f and g must be green");
        }
        if !shares(self.f, self.g) {
            return fail("f and g must share a vertex");
        }
        let closes = t.triangles.iter().any(|tri| [self.e, self.f, self.g].iter().all(|&x| tri.contains(x)));
        if !closes || u.color_of(self.e).is_some() {
            return fail("e must be the uncoloured edge closing f and g");
        }
        if u.color_of(self.h) != Some(Color::Red) || !shares(self.h, self.e) {
            return fail("h must be red and meet e");
        }
        if u.green().len() != 2 || u.red().len() != 1 {
            return fail("configuration must consist of exactly three moves");
        }
        Ok(())
    }
}
