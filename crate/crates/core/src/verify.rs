//! Finite claims about n-Sim checked by enumeration or by the solver, and the
//! `verify all` driver that runs every check in a fixed order.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::board::{edge_index, tables, Color, EdgeId, GameStatus, Position};
use crate::preset::{build_preset, PresetName, Thm3Labels, THM2_MISSING, XY};
use crate::reference::reference_value;
use crate::report::Report;
use crate::solver::{GameValue, SolveError, SolveOptions, Solver};
use crate::steal::{
    check_ignore_and_reply, check_pretend_extra_red, check_thm1_premises, check_thm3_premises,
    check_thm3_premises_with, swap_witness_holds, StealError, StealReport,
};
use crate::symmetry::{apply_permutation, canonical_key, find_isomorphism, uncolored_edge_orbits, Perm};

/// Seed for the randomized suites.
pub const DEFAULT_SEED: u64 = 0x5eed_0f51;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown verification target {0:?}")]
    UnknownTarget(String),
    #[error("{0} is not checked on n = {1}")]
    Unsupported(&'static str, usize),
    #[error(transparent)]
    Steal(#[from] StealError),
}

/// Solver-backed theorem instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    Slany6,
    Prop1i,
    Prop1ii,
    Thm2,
    Thm3,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::Slany6 => "slany6",
            Theorem::Prop1i => "prop1i",
            Theorem::Prop1ii => "prop1ii",
            Theorem::Thm2 => "thm2",
            Theorem::Thm3 => "thm3",
        }
    }

    /// Board sizes on which the instance is checked.
    pub fn sizes(self) -> &'static [usize] {
        match self {
            Theorem::Slany6 => &[6],
            Theorem::Prop1ii => &[7],
            Theorem::Prop1i | Theorem::Thm2 | Theorem::Thm3 => &[6, 7],
        }
    }
}

/// Everything `verify` accepts on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    DrawnK5Unique,
    K6NoDraw,
    Prop1Structure,
    Theorem(Theorem),
    StealThm1,
    StealThm2,
    StealProp1,
    StealThm3,
    Oracle,
    Properties,
    All,
}

impl Target {
    pub const NAMES: [&'static str; 15] = [
        "drawn-k5-unique",
        "k6-no-draw",
        "prop1-structure",
        "slany6",
        "prop1i",
        "prop1ii",
        "thm2",
        "thm3",
        "steal-thm1",
        "steal-thm2",
        "steal-prop1",
        "steal-thm3",
        "oracle",
        "properties",
        "all",
    ];
}

impl FromStr for Target {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "drawn-k5-unique" => Target::DrawnK5Unique,
            "k6-no-draw" => Target::K6NoDraw,
            "prop1-structure" => Target::Prop1Structure,
            "slany6" => Target::Theorem(Theorem::Slany6),
            "prop1i" => Target::Theorem(Theorem::Prop1i),
            "prop1ii" => Target::Theorem(Theorem::Prop1ii),
            "thm2" => Target::Theorem(Theorem::Thm2),
            "thm3" => Target::Theorem(Theorem::Thm3),
            "steal-thm1" => Target::StealThm1,
            "steal-thm2" => Target::StealThm2,
            "steal-prop1" => Target::StealProp1,
            "steal-thm3" => Target::StealThm3,
            "oracle" => Target::Oracle,
            "properties" => Target::Properties,
            "all" => Target::All,
            other => return Err(VerifyError::UnknownTarget(other.to_string())),
        })
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn timed(name: &str, body: impl FnOnce(&mut Report)) -> Report {
    let start = Instant::now();
    let mut r = Report::new(name);
    body(&mut r);
    r.finish(start.elapsed())
}

fn is_cycle(n: usize, mask: u64) -> bool {
    let t = tables(n).expect("size in range");
    let mut adj = vec![Vec::new(); n];
    let mut rest = mask;
    while rest != 0 {
        let (a, b) = t.endpoints[rest.trailing_zeros() as usize];
        rest &= rest - 1;
        adj[a as usize].push(b as usize);
        adj[b as usize].push(a as usize);
    }
    if adj.iter().any(|nb| nb.len() != 2) {
        return false;
    }
    // walk the cycle from vertex 0
    let (mut prev, mut cur, mut len) = (0usize, adj[0][0], 1);
    while cur != 0 {
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
        len += 1;
    }
    len == n
}

/// All balanced complete colourings of K5: how many are draws, and how many
/// isomorphism classes the draws fall into.
pub fn verify_drawn_k5_uniqueness() -> Report {
    timed("drawn-k5-unique", |r| {
        let t = tables(5).expect("K5");
        let drawn = build_preset(PresetName::DrawnK5 { n: 5 }).expect("preset");
        let mut colorings = 0usize;
        let mut draws = Vec::new();
        for green in 0..=t.full {
            if green.count_ones() != 5 {
                continue;
            }
            colorings += 1;
            let p = Position::from_masks(5, green, t.full & !green).expect("disjoint");
            if p.status() == Ok(GameStatus::Draw) {
                draws.push(p);
            }
        }
        let classes: HashSet<_> = draws.iter().map(|p| canonical_key(p).expect("n = 5")).collect();
        let cycles = draws.iter().filter(|p| is_cycle(5, p.green().0) && is_cycle(5, p.red().0)).count();
        let iso_to_preset = draws.iter().filter(|p| find_isomorphism(&drawn, p).is_some()).count();
        r.datum("colorings", colorings);
        r.datum("labeled_draws", draws.len());
        r.datum("classes", classes.len());
        r.check("colorings", colorings == 252, format!("{colorings} balanced colourings enumerated"));
        r.check("labeled_draws", draws.len() == 12, format!("{} labelled draws", draws.len()));
        r.check("one_class", classes.len() == 1, format!("{} isomorphism class(es)", classes.len()));
        r.check("five_cycles", cycles == draws.len(), format!("{cycles} draws split into two 5-cycles"));
        r.check("matches_preset", iso_to_preset == draws.len(), format!("{iso_to_preset} draws relabel onto the preset"));
    })
}

/// Every 2-colouring of K6 has a monochromatic triangle.
pub fn verify_k6_no_draw() -> Report {
    timed("k6-no-draw", |r| {
        let t = tables(6).expect("K6");
        let mut checked = 0u64;
        let mut clean = 0u64;
        for green in 0..=t.full {
            checked += 1;
            let red = t.full & !green;
            if t.first_triangle_in(green).is_none() && t.first_triangle_in(red).is_none() {
                clean += 1;
            }
        }
        // extensions of the drawn K5 by vertex 5
        let k5 = build_preset(PresetName::DrawnK5 { n: 6 }).expect("preset");
        let spokes: Vec<EdgeId> = (0..5).map(|v| t.edge(v, 5)).collect();
        let mut ext_clean = 0;
        for bits in 0u32..32 {
            let (mut g, mut rd) = (k5.green().0, k5.red().0);
            for (i, e) in spokes.iter().enumerate() {
                if bits >> i & 1 == 1 {
                    g |= e.bit();
                } else {
                    rd |= e.bit();
                }
            }
            if t.first_triangle_in(g).is_none() && t.first_triangle_in(rd).is_none() {
                ext_clean += 1;
            }
        }
        r.datum("colorings_checked", checked);
        r.datum("without_mono_triangle", clean);
        r.check("checked", checked == 1 << 15, format!("{checked} colourings checked"));
        r.check("no_draw", clean == 0, format!("{clean} colourings avoid monochromatic triangles"));
        r.check("k5_extensions", ext_clean == 0, format!("{ext_clean} of 32 drawn-K5 extensions avoid one"));
    })
}

/// Every three vertices of the drawn K5 span a green and a red edge, so a
/// vertex outside it can take at most two same-coloured spokes.
pub fn verify_prop1_structure() -> Report {
    timed("prop1-structure", |r| {
        let p = build_preset(PresetName::DrawnK5 { n: 5 }).expect("preset");
        let t = p.tables();
        let (mut subsets, mut no_green, mut no_red) = (0, 0, 0);
        for a in 0..5 {
            for b in a + 1..5 {
                for c in b + 1..5 {
                    subsets += 1;
                    let m = t.edge(a, b).bit() | t.edge(a, c).bit() | t.edge(b, c).bit();
                    no_green += usize::from(m & p.green().0 == 0);
                    no_red += usize::from(m & p.red().0 == 0);
                }
            }
        }
        r.check("subsets", subsets == 10, format!("{subsets} vertex triples"));
        r.check("green_hits", no_green == 0, format!("{no_green} triples without a green edge"));
        r.check("red_hits", no_red == 0, format!("{no_red} triples without a red edge"));
    })
}

fn preset(name: PresetName) -> Position {
    build_preset(name).expect("grid presets are valid")
}

/// Solve with budget handling folded into the report. `None` means the budget ran out.
fn solve_into(r: &mut Report, s: &mut Solver, p: &Position, label: &str) -> Option<GameValue> {
    match s.solve(p) {
        Ok(v) => {
            r.add_nodes(s.stats().nodes);
            Some(v)
        }
        Err(SolveError::BudgetExceeded(st)) => {
            r.add_nodes(st.nodes);
            r.budget_hit(format!("{label}: budget exceeded after {} nodes", st.nodes));
            None
        }
        Err(e) => {
            r.check(label, false, e.to_string());
            None
        }
    }
}

fn moves_into(r: &mut Report, s: &mut Solver, p: &Position, label: &str) -> Option<Vec<(EdgeId, GameValue)>> {
    match s.best_moves(p) {
        Ok(v) => {
            r.add_nodes(s.stats().nodes);
            Some(v)
        }
        Err(SolveError::BudgetExceeded(st)) => {
            r.add_nodes(st.nodes);
            r.budget_hit(format!("{label}: budget exceeded after {} nodes", st.nodes));
            None
        }
        Err(e) => {
            r.check(label, false, e.to_string());
            None
        }
    }
}

fn value_of(moves: &[(EdgeId, GameValue)], e: EdgeId) -> GameValue {
    moves.iter().find(|(m, _)| *m == e).map(|(_, v)| *v).expect("edge is open")
}

/// Solver check of one theorem instance.
pub fn verify_theorem(thm: Theorem, n: usize, opts: SolveOptions) -> Result<Report, VerifyError> {
    if !thm.sizes().contains(&n) {
        return Err(VerifyError::Unsupported(thm.name(), n));
    }
    let mut solver = Solver::new(opts);
    let s = &mut solver;
    Ok(timed(&format!("{thm}({n})"), |r| match thm {
        Theorem::Slany6 => {
            if let Some(v) = solve_into(r, s, &Position::empty(6).expect("K6"), "empty") {
                r.datum("value", v);
                r.check("value", v == GameValue::RedWins, format!("empty K6 is {v}"));
            }
        }
        Theorem::Prop1i => {
            let t = preset(PresetName::PropT { n });
            let Some(moves) = moves_into(r, s, &t, "prop-T") else { return };
            let joins = |e: EdgeId| {
                let (a, b) = t.tables().endpoints[e.index()];
                (a < 5) != (b < 5)
            };
            for orbit in uncolored_edge_orbits(&t).iter().filter(|o| joins(o[0])) {
                let rep = value_of(&moves, orbit[0]);
                let coherent = orbit.iter().all(|&e| value_of(&moves, e) == rep);
                let (a, b) = t.tables().endpoints[orbit[0].index()];
                r.check(
                    format!("join({a},{b})"),
                    rep == GameValue::RedWins && coherent,
                    format!("orbit of {} join edges valued {rep}, coherent: {coherent}", orbit.len()),
                );
            }
        }
        Theorem::Prop1ii => {
            let t = preset(PresetName::PropT { n: 7 });
            if let Some(v) = solve_into(r, s, &t, "prop-T") {
                r.datum("value", v);
                r.check("value", v == GameValue::GreenWins, format!("prop-T(7) is {v}"));
            }
            let Some(moves) = moves_into(r, s, &t, "prop-T moves") else { return };
            let xy = edge_index(XY.0, XY.1, 7).expect("edge");
            let winning: Vec<Vec<EdgeId>> = uncolored_edge_orbits(&t)
                .into_iter()
                .filter(|o| value_of(&moves, o[0]) == GameValue::GreenWins)
                .collect();
            let only_xy = winning.len() == 1 && winning[0] == vec![xy];
            r.check("unique_winning_orbit", only_xy, format!("{} winning first-move orbit(s)", winning.len()));
            if let Some(v) = solve_into(r, s, &preset(PresetName::PropTXY { n: 7 }), "prop-T-XY") {
                r.check("after_xy", v == GameValue::GreenWins, format!("prop-T-XY(7) is {v}"));
            }
        }
        Theorem::Thm2 => {
            let p = preset(PresetName::Thm2 { n });
            if let Some(v) = solve_into(r, s, &p, "thm2") {
                r.datum("value", v);
                r.check("value", v == GameValue::RedWins, format!("thm2({n}) is {v}"));
            }
            let Some(moves) = moves_into(r, s, &p, "thm2 moves") else { return };
            let completing = edge_index(THM2_MISSING.0, THM2_MISSING.1, n).expect("edge");
            let cv = value_of(&moves, completing);
            r.datum("completing_move", cv);
            if n == 7 {
                r.check("completing_loses", cv == GameValue::GreenWins, format!("completing move valued {cv}"));
                let some_win = moves.iter().any(|(_, v)| *v == GameValue::RedWins);
                r.check("winning_move_exists", some_win, "some red move keeps the win");
                if let Some(tv) = solve_into(r, s, &preset(PresetName::PropT { n: 7 }), "prop-T") {
                    r.check("agrees_with_prop_t", tv == cv, format!("prop-T(7) solved directly is {tv}"));
                }
            } else {
                r.check("completing_wins", cv == GameValue::RedWins, format!("completing move valued {cv}"));
            }
        }
        Theorem::Thm3 => {
            let p = preset(PresetName::Thm3 { n });
            if let Some(v) = solve_into(r, s, &p, "thm3") {
                r.datum("value", v);
                r.check("value", v == GameValue::RedWins, format!("thm3({n}) is {v}"));
            }
        }
    }))
}

fn steal_report(name: &str, rep: Result<StealReport, StealError>) -> Report {
    match rep {
        Ok(s) => s.into_report(name),
        Err(e) => {
            let mut r = Report::new(name);
            r.check("preconditions", false, e.to_string());
            r
        }
    }
}

pub fn verify_steal_thm1() -> Report {
    let start = Instant::now();
    let mut r = steal_report("steal-thm1", check_thm1_premises(2));
    let s = preset(PresetName::Thm1 { k: 2 });
    r.datum("aut_order", crate::symmetry::automorphism_group(&s).len());
    let orbit_one = r.data.get("orbit_count").and_then(|v| v.as_u64()) == Some(1);
    r.check("orbit_count", orbit_one, "uncoloured edges form one orbit");
    r.finish(start.elapsed())
}

pub fn verify_steal_thm2() -> Report {
    timed("steal-thm2", |r| {
        for n in [6, 7] {
            let p = preset(PresetName::Thm2 { n });
            let e = edge_index(THM2_MISSING.0, THM2_MISSING.1, n).expect("edge");
            r.absorb(&steal_report(&format!("n={n}"), check_pretend_extra_red(&p, e)));
        }
    })
}

pub fn verify_steal_prop1() -> Report {
    timed("steal-prop1", |r| {
        for n in [6, 7] {
            let p = preset(PresetName::PropT { n });
            // every join from the K5 to an isolated vertex, with the reply two steps round the cycle
            for v in 0..5 {
                for w in 5..n {
                    let g = edge_index(v, w, n).expect("edge");
                    let reply = edge_index((v + 2) % 5, w, n).expect("edge");
                    r.absorb(&steal_report(&format!("n={n} g=({v},{w})"), check_ignore_and_reply(&p, g, reply)));
                }
            }
        }
    })
}

pub fn verify_steal_thm3() -> Report {
    timed("steal-thm3", |r| {
        for n in [6, 7] {
            r.absorb(&steal_report(&format!("n={n}"), check_thm3_premises(n)));
        }
        let mirrored = Thm3Labels::with_red(6, (2, 3)).map_err(StealError::from).and_then(check_thm3_premises_with);
        r.absorb(&steal_report("mirrored-h", mirrored));
    })
}

/// Live positions reachable from the empty board.
pub fn reachable_positions(n: usize) -> Vec<Position> {
    let mut seen = HashSet::new();
    let mut stack = vec![Position::empty(n).expect("size in range")];
    let mut out = Vec::new();
    while let Some(p) = stack.pop() {
        if !seen.insert((p.green(), p.red())) {
            continue;
        }
        out.push(p);
        for e in p.uncolored().iter() {
            let q = p.apply_move(e).expect("open edge on live position");
            if q.is_live() {
                stack.push(q);
            }
        }
    }
    out.sort_by_key(|p| (p.colored().len(), p.green(), p.red()));
    out
}

/// Random live position reached by play, with exactly `colored` edges, or
/// `None` if the playout got stuck first.
pub fn random_position(rng: &mut impl Rng, n: usize, colored: usize) -> Option<Position> {
    let mut p = Position::empty(n).ok()?;
    while p.colored().len() < colored {
        let mover = p.edges_of(p.player_to_move()).0;
        let t = p.tables();
        let safe: Vec<EdgeId> = p.uncolored().iter().filter(|&e| !t.closes_triangle(mover, e)).collect();
        let &e = safe.choose(rng)?;
        p = p.apply_move(e).ok()?;
    }
    p.is_live().then_some(p)
}

fn random_positions(rng: &mut StdRng, n: usize, colored: std::ops::RangeInclusive<usize>, count: usize) -> Vec<Position> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = rng.random_range(colored.clone());
        if let Some(p) = random_position(rng, n, k) {
            out.push(p);
        }
    }
    out
}

fn random_perm(rng: &mut StdRng, n: usize) -> Perm {
    let mut img: Vec<usize> = (0..n).collect();
    img.shuffle(rng);
    Perm::new(img).expect("shuffle is a bijection")
}

/// Optimized solver against the reference on every reachable position of
/// n ≤ 5 and on random n = 6 positions with at least 7 coloured edges.
pub fn verify_oracle_equivalence(seed: u64, random_count: usize) -> Report {
    timed("oracle", |r| {
        let mut solver = Solver::new(SolveOptions::default());
        for n in 3..=5 {
            let all = reachable_positions(n);
            let mismatches = all.iter().filter(|p| solver.solve(p).ok() != Some(reference_value(p))).count();
            r.datum(&format!("reachable_n{n}"), all.len());
            r.check(format!("n={n}"), mismatches == 0, format!("{mismatches} mismatches over {} positions", all.len()));
        }
        let mut rng = StdRng::seed_from_u64(seed);
        let sample = random_positions(&mut rng, 6, 7..=13, random_count);
        let mismatches = sample.iter().filter(|p| solver.solve(p).ok() != Some(reference_value(p))).count();
        r.check("n=6 random", mismatches == 0, format!("{mismatches} mismatches over {} positions", sample.len()));
        let canon = Solver::new(SolveOptions { canonical_memo: true, ..SolveOptions::default() });
        let mut canon = canon;
        let mismatches = sample.iter().take(200).filter(|p| canon.solve(p).ok() != Some(reference_value(p))).count();
        r.check("n=6 canonical memo", mismatches == 0, format!("{mismatches} mismatches over 200 positions"));
    })
}

fn mover_optimum(mover: Color, values: impl Iterator<Item = GameValue>) -> Option<GameValue> {
    values.max_by_key(|v| v.score_for(mover))
}

/// Randomized invariants: relabeling invariance, orbit coherence, witness
/// re-validation, canonical key agreement and negamax self-consistency.
pub fn verify_properties(seed: u64) -> Report {
    timed("properties", |r| {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut solver = Solver::new(SolveOptions::default());

        // relabeling invariance: 50 positions x 100 permutations
        let positions = random_positions(&mut rng, 6, 5..=10, 50);
        let mut violations = 0;
        for p in &positions {
            let v = solver.solve(p).expect("small position");
            for _ in 0..100 {
                let q = apply_permutation(p, &random_perm(&mut rng, 6)).expect("length");
                violations += usize::from(solver.solve(&q).expect("small position") != v);
            }
        }
        r.check("relabeling_invariance", violations == 0, format!("{violations} violations over 5000 relabelings"));

        // engine replies on relabeled boards reach the same value
        let mut violations = 0;
        for p in positions.iter().take(20) {
            let s = random_perm(&mut rng, 6);
            let q = apply_permutation(p, &s).expect("length");
            let mover = p.player_to_move();
            let vp = value_of(&solver.best_moves(p).expect("live"), solver.engine_reply(p).expect("live"));
            let vq = value_of(&solver.best_moves(&q).expect("live"), solver.engine_reply(&q).expect("live"));
            violations += usize::from(vp.score_for(mover) != vq.score_for(mover));
        }
        r.check("engine_reply_invariance", violations == 0, format!("{violations} violations over 20 boards"));

        // orbit coherence on boards with at most 12 open edges
        let mut boards = random_positions(&mut rng, 6, 3..=9, 40);
        boards.extend(random_positions(&mut rng, 5, 0..=6, 10));
        for name in [PresetName::PropT { n: 6 }, PresetName::PropT { n: 7 }, PresetName::Thm2 { n: 6 }, PresetName::Thm2 { n: 7 }, PresetName::Thm3 { n: 6 }] {
            boards.push(preset(name));
        }
        let mut violations = 0;
        for p in &boards {
            let moves = solver.best_moves(p).expect("live");
            for orbit in uncolored_edge_orbits(p) {
                let v = value_of(&moves, orbit[0]);
                violations += orbit.iter().filter(|&&e| value_of(&moves, e) != v).count();
            }
        }
        r.check("orbit_coherence", violations == 0, format!("{violations} violations over {} boards", boards.len()));

        // isomorphism witnesses and canonical keys
        let mut bad_witness = 0;
        let mut key_disagree = 0;
        let pool = random_positions(&mut rng, 6, 2..=9, 60);
        for p in &pool {
            let q = apply_permutation(p, &random_perm(&mut rng, 6)).expect("length");
            match find_isomorphism(p, &q) {
                Some(s) => bad_witness += usize::from(apply_permutation(p, &s).ok() != Some(q)),
                None => bad_witness += 1,
            }
        }
        for pair in pool.chunks(2) {
            let (a, b) = (&pair[0], &pair[1]);
            let same_key = canonical_key(a).ok() == canonical_key(b).ok();
            let iso = find_isomorphism(a, b);
            key_disagree += usize::from(same_key != iso.is_some());
            if let Some(s) = iso {
                bad_witness += usize::from(apply_permutation(a, &s).ok() != Some(*b));
            }
        }
        // pairs built to be isomorphic, and near misses
        for p in pool.iter().take(30) {
            let q = apply_permutation(p, &random_perm(&mut rng, 6)).expect("length");
            key_disagree += usize::from(canonical_key(p).ok() != canonical_key(&q).ok());
            if let Some(e) = q.uncolored().iter().next() {
                let mover = q.player_to_move();
                if let Ok(q2) = q.with_edge(e, mover) {
                    let same_key = canonical_key(p).ok() == canonical_key(&q2).ok();
                    key_disagree += usize::from(same_key != find_isomorphism(p, &q2).is_some());
                }
            }
        }
        // steal report witnesses
        let steal_witnesses = [
            (preset(PresetName::Thm1 { k: 2 }), check_thm1_premises(2)),
            (preset(PresetName::Thm2 { n: 6 }), {
                let p = preset(PresetName::Thm2 { n: 6 });
                check_pretend_extra_red(&p, edge_index(0, 2, 6).expect("edge"))
            }),
        ];
        for (p, rep) in steal_witnesses {
            let Ok(rep) = rep else {
                bad_witness += 1;
                continue;
            };
            let Some(s) = rep.frame_iso else {
                bad_witness += 1;
                continue;
            };
            if p.player_to_move() == Color::Red {
                let frame = p.with_edge(edge_index(0, 2, 6).expect("edge"), Color::Red).expect("open");
                bad_witness += usize::from(!swap_witness_holds(&frame, &frame, &s));
            } else if let Some(tri) = rep.insurance_triangle {
                bad_witness += usize::from(tri.edges.iter().filter(|&&e| p.red().contains(e)).count() != 1);
            }
        }
        r.check("witness_revalidation", bad_witness == 0, format!("{bad_witness} witnesses failed to re-validate"));
        r.check("canonical_key_iff_isomorphic", key_disagree == 0, format!("{key_disagree} disagreements"));

        // negamax self-consistency
        let mut violations = 0;
        for p in random_positions(&mut rng, 6, 5..=10, 60).iter().chain(random_positions(&mut rng, 7, 11..=14, 20).iter()) {
            let v = solver.solve(p).expect("small position");
            let mover = p.player_to_move();
            let children = p.uncolored().iter().map(|e| {
                let q = p.apply_move(e).expect("open");
                match q.status().expect("legal") {
                    GameStatus::Live => solver.solve(&q).expect("small position"),
                    s => GameValue::from_status(s).expect("terminal"),
                }
            });
            violations += usize::from(mover_optimum(mover, children) != Some(v));
        }
        r.check("negamax_consistency", violations == 0, format!("{violations} violations over 80 positions"));
    })
}

/// Every check, in acceptance order.
pub fn verify_all(opts: SolveOptions) -> Vec<Report> {
    let mut out = vec![verify_drawn_k5_uniqueness(), verify_k6_no_draw(), verify_prop1_structure()];
    for thm in [Theorem::Slany6, Theorem::Prop1i, Theorem::Prop1ii, Theorem::Thm2, Theorem::Thm3] {
        for &n in thm.sizes() {
            out.push(verify_theorem(thm, n, opts).expect("supported size"));
        }
    }
    out.push(verify_steal_thm1());
    out.push(verify_steal_thm2());
    out.push(verify_steal_prop1());
    out.push(verify_steal_thm3());
    out.push(verify_oracle_equivalence(DEFAULT_SEED, 1000));
    out.push(verify_properties(DEFAULT_SEED));
    out
}

/// Runs one target. `n` restricts theorem instances to one board size.
pub fn verify_target(target: Target, n: Option<usize>, opts: SolveOptions) -> Result<Vec<Report>, VerifyError> {
    Ok(match target {
        Target::All => verify_all(opts),
        Target::DrawnK5Unique => vec![verify_drawn_k5_uniqueness()],
        Target::K6NoDraw => vec![verify_k6_no_draw()],
        Target::Prop1Structure => vec![verify_prop1_structure()],
        Target::Theorem(thm) => match n {
            Some(n) => vec![verify_theorem(thm, n, opts)?],
            None => thm.sizes().iter().map(|&n| verify_theorem(thm, n, opts)).collect::<Result<_, _>>()?,
        },
        Target::StealThm1 => vec![verify_steal_thm1()],
        Target::StealThm2 => vec![verify_steal_thm2()],
        Target::StealProp1 => vec![verify_steal_prop1()],
        Target::StealThm3 => vec![verify_steal_thm3()],
        Target::Oracle => vec![verify_oracle_equivalence(DEFAULT_SEED, 1000)],
        Target::Properties => vec![verify_properties(DEFAULT_SEED)],
    })
}
