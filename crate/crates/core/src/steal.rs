//! Mechanical checks of strategy-stealing premises.
//!
//! A stealing argument lets the second player reinterpret the board: one
//! real edge is ignored or one imaginary edge is assumed, and the resulting
//! frame must be the colour-swapped image of a position the first player is
//! supposed to win from. It only works when the edge being pretended about is
//! insured: colouring it would close a triangle for whoever might be asked to
//! colour it. These routines find and re-check the relabeling witnesses and
//! insurance triangles; they do not touch the game tree.

use serde::Serialize;
use thiserror::Error;

use crate::board::{BoardError, Color, EdgeId, GameStatus, Position, Triangle};
use crate::preset::{build_preset, PresetError, PresetName, Thm3Labels};
use crate::report::{Check, Report};
use crate::symmetry::{apply_permutation, automorphism_group, find_color_swap_isomorphism, orbits_under, Perm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StealError {
    #[error("position is not live")]
    NotLive,
    #[error("expected {0} to move")]
    WrongMover(Color),
    #[error("edge {0:?} is already coloured")]
    EdgeColored(EdgeId),
    #[error("the ignored and reply edges must differ")]
    SameEdge,
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Board(#[from] BoardError),
    #[error(transparent)]
    Preset(#[from] PresetError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StealReport {
    pub frame_iso: Option<Perm>,
    pub insurance_triangle: Option<Triangle>,
    pub orbit_count: usize,
    pub counts_ok: bool,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl StealReport {
    fn new() -> StealReport {
        StealReport { frame_iso: None, insurance_triangle: None, orbit_count: 0, counts_ok: true, pass: true, checks: Vec::new() }
    }

    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.pass &= pass;
        self.checks.push(Check { name: name.to_string(), pass, detail: detail.into() });
    }

    pub fn into_report(self, name: impl Into<String>) -> Report {
        let mut r = Report::new(name);
        for c in &self.checks {
            r.check(c.name.clone(), c.pass, c.detail.clone());
        }
        r.datum("frame_iso", &self.frame_iso);
        r.datum("insurance_triangle", self.insurance_triangle.map(|t| t.vertices));
        r.datum("orbit_count", self.orbit_count);
        r
    }
}

/// `apply_permutation(src, s)` is `dst` with its colours exchanged.
pub fn swap_witness_holds(src: &Position, dst: &Position, s: &Perm) -> bool {
    apply_permutation(src, s).is_ok_and(|q| q == dst.color_swapped())
}

/// First triangle through `e` whose other two edges lie in `set`.
pub fn insurance_triangle(p: &Position, e: EdgeId, set: u64) -> Option<Triangle> {
    p.tables()
        .triangles
        .iter()
        .find(|t| t.contains(e) && (t.mask() & !e.bit()) & set == t.mask() & !e.bit())
        .copied()
}

fn require_live(p: &Position, mover: Color) -> Result<(), StealError> {
    if p.status()? != GameStatus::Live {
        return Err(StealError::NotLive);
    }
    if p.player_to_move() != mover {
        return Err(StealError::WrongMover(mover));
    }
    Ok(())
}

fn require_open(p: &Position, e: EdgeId) -> Result<(), StealError> {
    if e.index() >= p.tables().edge_count() {
        return Err(BoardError::EdgeOutOfRange(e.index(), p.n()).into());
    }
    if p.color_of(e).is_some() {
        return Err(StealError::EdgeColored(e));
    }
    Ok(())
}

fn pair(p: &Position, e: EdgeId) -> String {
    let (a, b) = p.tables().endpoints[e.index()];
    format!("({a}, {b})")
}

/// Green is to move from `p` and plays `g`; the second player ignores `g`
/// and answers with `r` as if opening the colour-swapped game.
pub fn check_ignore_and_reply(p: &Position, g: EdgeId, r: EdgeId) -> Result<StealReport, StealError> {
    require_live(p, Color::Green)?;
    require_open(p, g)?;
    require_open(p, r)?;
    if g == r {
        return Err(StealError::SameEdge);
    }
    let mut rep = StealReport::new();
    rep.counts_ok = p.green().len() == p.red().len();
    rep.check("counts", rep.counts_ok, format!("{} green, {} red", p.green().len(), p.red().len()));

    let assumed = p.with_edge(g, Color::Green)?;
    let pretend = p.with_edge(r, Color::Red)?;
    rep.frame_iso = find_color_swap_isomorphism(&pretend, &assumed);
    let frame_ok = rep.frame_iso.as_ref().is_some_and(|s| swap_witness_holds(&pretend, &assumed, s));
    rep.check(
        "frame_iso",
        frame_ok,
        match &rep.frame_iso {
            Some(s) => format!("{s} maps the pretend frame onto the colour-swapped assumed frame"),
            None => "pretend frame is not colour-swap isomorphic to the assumed frame".into(),
        },
    );

    let red_after = pretend.red().0;
    rep.insurance_triangle = insurance_triangle(p, g, red_after);
    rep.check(
        "insurance",
        rep.insurance_triangle.is_some(),
        match rep.insurance_triangle {
            Some(t) => format!("ignored edge {} would close red triangle {t}", pair(p, g)),
            None => format!("no triangle through {} has two red edges", pair(p, g)),
        },
    );

    rep.orbit_count = orbits_under(p, &automorphism_group(p)).len();
    Ok(rep)
}

/// Red is to move from `p`; the second player pretends `e` is already red
/// and plays on as the first player of the colour-swapped game.
pub fn check_pretend_extra_red(p: &Position, e: EdgeId) -> Result<StealReport, StealError> {
    require_live(p, Color::Red)?;
    require_open(p, e)?;
    let mut rep = StealReport::new();
    let frame = p.with_edge(e, Color::Red)?;
    rep.counts_ok = frame.green().len() == frame.red().len();
    rep.check("counts", rep.counts_ok, format!("{} green, {} red after pretending", frame.green().len(), frame.red().len()));
    rep.frame_iso = find_color_swap_isomorphism(&frame, &frame);
    let frame_ok = rep.frame_iso.as_ref().is_some_and(|s| swap_witness_holds(&frame, &frame, s));
    rep.check(
        "frame_iso",
        frame_ok,
        match &rep.frame_iso {
            Some(s) => format!("{s} swaps the colour classes of the pretend frame"),
            None => "pretend frame is not isomorphic to its colour swap".into(),
        },
    );
    rep.insurance_triangle = insurance_triangle(p, e, p.green().0);
    rep.check(
        "insurance",
        rep.insurance_triangle.is_some(),
        match rep.insurance_triangle {
            Some(t) => format!("green can never take {}: it closes {t}", pair(p, e)),
            None => format!("no triangle through {} has two green edges", pair(p, e)),
        },
    );
    rep.orbit_count = orbits_under(p, &automorphism_group(p)).len();
    Ok(rep)
}

/// Premises for the three-move configuration on `K_n`.
pub fn check_thm3_premises(n: usize) -> Result<StealReport, StealError> {
    if !(6..=7).contains(&n) {
        return Err(StealError::Unsupported(format!("thm3 premises checked for n in 6..=7, got {n}")));
    }
    check_thm3_premises_with(Thm3Labels::standard(n)?)
}

/// Same checks for an arbitrary labelling of the configuration.
pub fn check_thm3_premises_with(labels: Thm3Labels) -> Result<StealReport, StealError> {
    let u = labels.configuration()?;
    let mut rep = StealReport::new();
    rep.counts_ok = labels.check_constraints(&u).is_ok();
    rep.check("constraints", rep.counts_ok, "f, g green sharing a vertex; e closes them; h red meeting e");
    let frame = labels.pretend_frame()?;
    rep.frame_iso = find_color_swap_isomorphism(&u, &frame);
    let frame_ok = rep.frame_iso.as_ref().is_some_and(|s| swap_witness_holds(&u, &frame, s));
    rep.check(
        "frame_iso",
        frame_ok,
        match &rep.frame_iso {
            Some(s) => format!("{s} maps the configuration onto the colour-swapped frame {{e, h red; g green}}"),
            None => "frame {e, h red; g green} is not a colour-swapped copy of the configuration".into(),
        },
    );
    rep.insurance_triangle = insurance_triangle(&u, labels.e, u.green().0);
    let ok = rep.insurance_triangle.is_some_and(|t| t.contains(labels.f) && t.contains(labels.g));
    rep.check(
        "insurance",
        ok,
        match rep.insurance_triangle {
            Some(t) => format!("e = {} closes green triangle {t} with f and g", pair(&u, labels.e)),
            None => "e does not close a green triangle".into(),
        },
    );
    rep.orbit_count = orbits_under(&u, &automorphism_group(&u)).len();
    Ok(rep)
}

/// Premises for `k` disjoint drawn K5s.
pub fn check_thm1_premises(k: usize) -> Result<StealReport, StealError> {
    if k != 2 {
        return Err(StealError::Unsupported(format!("thm1 premises checked for k = 2, got {k}")));
    }
    check_disjoint_union_premises(&build_preset(PresetName::Thm1 { k })?)
}

/// Colour-swap self-symmetry, a single move orbit, and an insured
/// ignore-and-reply pair, for any position with green to move.
pub fn check_disjoint_union_premises(s: &Position) -> Result<StealReport, StealError> {
    require_live(s, Color::Green)?;
    let mut rep = StealReport::new();
    rep.counts_ok = s.green().len() == s.red().len();
    rep.check("counts", rep.counts_ok, format!("{} green, {} red", s.green().len(), s.red().len()));

    let self_swap = find_color_swap_isomorphism(s, s);
    let swap_ok = self_swap.as_ref().is_some_and(|w| swap_witness_holds(s, s, w));
    rep.check(
        "self_swap",
        swap_ok,
        match &self_swap {
            Some(w) => format!("{w} exchanges the colour classes"),
            None => "position is not isomorphic to its colour swap".into(),
        },
    );

    let aut = automorphism_group(s);
    let orbits = orbits_under(s, &aut);
    rep.orbit_count = orbits.len();
    rep.check("single_orbit", orbits.len() == 1, format!("{} orbit(s) of uncoloured edges, |Aut| = {}", orbits.len(), aut.len()));

    let mut found = None;
    if let Some(g) = orbits.first().map(|o| o[0]) {
        for r in s.uncolored().iter().filter(|&r| r != g) {
            let sub = check_ignore_and_reply(s, g, r)?;
            if sub.pass {
                found = Some((g, r, sub));
                break;
            }
        }
    }
    match found {
        Some((g, r, sub)) => {
            rep.frame_iso = sub.frame_iso;
            rep.insurance_triangle = sub.insurance_triangle;
            rep.check("ignore_and_reply", true, format!("ignore green {}, reply red {}", pair(s, g), pair(s, r)));
        }
        None => rep.check("ignore_and_reply", false, "no insured reply found"),
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::edge_index;

    fn e(i: usize, j: usize, n: usize) -> EdgeId {
        edge_index(i, j, n).unwrap()
    }

    #[test]
    fn thm1_ignore_and_reply() {
        let s = build_preset(PresetName::Thm1 { k: 2 }).unwrap();
        let rep = check_ignore_and_reply(&s, e(0, 5, 10), e(2, 5, 10)).unwrap();
        assert!(rep.pass, "{:?}", rep.checks);
        assert_eq!(rep.insurance_triangle.unwrap().vertices, [0, 2, 5]);
        assert_eq!(rep.orbit_count, 1);
    }

    #[test]
    fn prop_t_ignore_and_reply() {
        let t = build_preset(PresetName::PropT { n: 6 }).unwrap();
        let rep = check_ignore_and_reply(&t, e(0, 5, 6), e(2, 5, 6)).unwrap();
        assert!(rep.pass, "{:?}", rep.checks);
        assert_eq!(rep.insurance_triangle.unwrap().vertices, [0, 2, 5]);
        // i -> 2i + 2 mod 5 on the K5, vertex 5 fixed, sends the assumed frame
        // onto the pretend one; the report stores a map in the other direction.
        let witness = Perm::new(vec![2, 4, 1, 3, 0, 5]).unwrap();
        let assumed = t.with_edge(e(0, 5, 6), Color::Green).unwrap();
        let pretend = t.with_edge(e(2, 5, 6), Color::Red).unwrap();
        assert!(swap_witness_holds(&assumed, &pretend, &witness));
        assert!(swap_witness_holds(&pretend, &assumed, &witness.inverse()));
        assert!(swap_witness_holds(&pretend, &assumed, rep.frame_iso.as_ref().unwrap()));

        let rep = check_ignore_and_reply(&t, e(0, 5, 6), e(1, 5, 6)).unwrap();
        assert!(!rep.pass);
        assert!(rep.insurance_triangle.is_none());
    }

    #[test]
    fn ignore_and_reply_preconditions() {
        let t = build_preset(PresetName::PropT { n: 6 }).unwrap();
        assert_eq!(check_ignore_and_reply(&t, e(0, 5, 6), e(0, 5, 6)), Err(StealError::SameEdge));
        assert_eq!(check_ignore_and_reply(&t, e(0, 1, 6), e(0, 5, 6)), Err(StealError::EdgeColored(e(0, 1, 6))));
        let thm2 = build_preset(PresetName::Thm2 { n: 6 }).unwrap();
        assert_eq!(check_ignore_and_reply(&thm2, e(0, 5, 6), e(1, 5, 6)), Err(StealError::WrongMover(Color::Green)));
    }

    #[test]
    fn pretend_extra_red() {
        for n in [6, 7] {
            let p = build_preset(PresetName::Thm2 { n }).unwrap();
            let rep = check_pretend_extra_red(&p, e(0, 2, n)).unwrap();
            assert!(rep.pass, "{:?}", rep.checks);
            assert_eq!(rep.insurance_triangle.unwrap().vertices, [0, 1, 2]);
        }
        let p = build_preset(PresetName::Thm2 { n: 6 }).unwrap();
        let rep = check_pretend_extra_red(&p, e(0, 5, 6)).unwrap();
        assert!(!rep.pass);
        assert!(rep.frame_iso.is_none());
        let t = build_preset(PresetName::PropT { n: 6 }).unwrap();
        assert_eq!(check_pretend_extra_red(&t, e(0, 5, 6)), Err(StealError::WrongMover(Color::Red)));
    }

    #[test]
    fn thm3_premises() {
        for n in [6, 7] {
            let rep = check_thm3_premises(n).unwrap();
            assert!(rep.pass, "{:?}", rep.checks);
            let l = Thm3Labels::standard(n).unwrap();
            let mut img: Vec<usize> = vec![1, 2, 3, 0];
            img.extend(4..n);
            let cycle = Perm::new(img).unwrap();
            assert!(swap_witness_holds(&l.configuration().unwrap(), &l.pretend_frame().unwrap(), &cycle));
        }
        assert!(check_thm3_premises(5).is_err());
    }

    #[test]
    fn thm3_mirrored_red_edge() {
        let rep = check_thm3_premises_with(Thm3Labels::with_red(6, (2, 3)).unwrap()).unwrap();
        assert!(rep.pass, "{:?}", rep.checks);
    }

    #[test]
    fn thm1_premises() {
        let rep = check_thm1_premises(2).unwrap();
        assert!(rep.pass, "{:?}", rep.checks);
        assert_eq!(rep.orbit_count, 1);
        assert!(rep.checks.iter().any(|c| c.detail.contains("|Aut| = 200")));
        assert!(check_thm1_premises(1).is_err());
    }

    #[test]
    fn corrupted_thm1_fails() {
        // Second copy loses chord (5,7); a red cross edge (0,5) keeps the counts level.
        let (mut green, mut red) = (Vec::new(), Vec::new());
        for off in [0, 5] {
            green.extend(crate::preset::K5_GREEN.iter().map(|&(a, b)| (a + off, b + off)));
            red.extend(crate::preset::K5_RED.iter().map(|&(a, b)| (a + off, b + off)));
        }
        red.retain(|&p| p != (5, 7));
        red.push((0, 5));
        let s = Position::from_edge_lists(10, &green, &red).unwrap();
        let rep = check_disjoint_union_premises(&s).unwrap();
        assert!(!rep.pass);
        assert!(rep.checks.iter().any(|c| c.name == "self_swap" && !c.pass));
    }
}
