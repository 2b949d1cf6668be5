//! Simulations for restorative similarity types: condition checking,
//! greatest (plain / symmetric / ablated) simulations by fixpoint
//! refinement, distinguishing-formula extraction from the deletion trace,
//! and the directed / concrete presentations for two-model settings.

use crate::kripke::{KripkeModel, World};
use crate::relation::Relation;
use crate::syntax::{Formula, SimilarityType, UnaryOp};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use std::str::FromStr;
use thiserror::Error;

/// Which condition a pair fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CondTag {
    Letter(u32),
    Smile,
    Frown,
    Con,
    Det,
    Inc,
    Und,
    /// Symmetric mode only: deleted as the mirror of a violating pair.
    Mirror,
}

impl CondTag {
    pub fn tag(self) -> &'static str {
        match self {
            CondTag::Letter(_) => "Sim_k",
            CondTag::Smile => "Sim_smile",
            CondTag::Frown => "Sim_frown",
            CondTag::Con => "Sim_con",
            CondTag::Det => "Sim_det",
            CondTag::Inc => "Sim_inc",
            CondTag::Und => "Sim_und",
            CondTag::Mirror => "Sym_mirror",
        }
    }
}

/// A pair together with the first condition it violates.
#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub pair: (World, World),
    pub cond: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub letter: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offender: Option<World>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimMode {
    Plain,
    /// Requires (and produces) a symmetric relation.
    Symmetric,
    /// Drops the reflexive first disjunct of the restoration conditions
    /// for the listed operators.
    Ablated(SimilarityType),
}

impl std::fmt::Display for SimMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SimMode::Plain => f.write_str("plain"),
            SimMode::Symmetric => f.write_str("symmetric"),
            SimMode::Ablated(ops) => write!(f, "ablated:{ops}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ModeError {
    #[error("unknown mode `{0}`: expected plain, symmetric, or ablated:<ops>")]
    Unknown(String),
    #[error("ablated mode only applies to con, det, inc, und (got `{0}`)")]
    BadAblatedOp(UnaryOp),
}

impl FromStr for SimMode {
    type Err = ModeError;

    fn from_str(s: &str) -> Result<Self, ModeError> {
        match s {
            "plain" => Ok(SimMode::Plain),
            "symmetric" => Ok(SimMode::Symmetric),
            _ => match s.strip_prefix("ablated:") {
                Some(ops) => {
                    let lambda: SimilarityType =
                        ops.parse().map_err(|_| ModeError::Unknown(s.to_string()))?;
                    for op in lambda.iter() {
                        if !matches!(
                            op,
                            UnaryOp::Con | UnaryOp::Det | UnaryOp::Inc | UnaryOp::Und
                        ) {
                            return Err(ModeError::BadAblatedOp(op));
                        }
                    }
                    Ok(SimMode::Ablated(lambda))
                }
                None => Err(ModeError::Unknown(s.to_string())),
            },
        }
    }
}

impl SimMode {
    fn dashed_kept(&self, op: UnaryOp) -> bool {
        match self {
            SimMode::Ablated(dropped) => !dropped.contains(op),
            _ => true,
        }
    }
}

/// Internal record of why a pair fails; `vw_in_s` snapshots whether the
/// reversed pair (v, w) was present, which selects the witness subcase for
/// `con` and `und`.
#[derive(Debug, Clone, Copy)]
struct Failure {
    cond: CondTag,
    offender: Option<World>,
    vw_in_s: bool,
}

impl Failure {
    fn to_violation(self, pair: (World, World)) -> Violation {
        Violation {
            pair,
            cond: self.cond.tag().to_string(),
            letter: match self.cond {
                CondTag::Letter(k) => Some(k),
                _ => None,
            },
            offender: self.offender,
        }
    }
}

/// First condition (w, v) violates with respect to `s`, or None.
fn first_failure(
    m: &KripkeModel,
    lambda: &SimilarityType,
    mode: &SimMode,
    s: &Relation,
    w: World,
    v: World,
) -> Option<Failure> {
    for k in m.letters() {
        if m.world_has_letter(w, k) && !m.world_has_letter(v, k) {
            return Some(Failure {
                cond: CondTag::Letter(k),
                offender: None,
                vw_in_s: false,
            });
        }
    }
    let succ_w = m.successors(w);
    let succ_v = m.successors(v);
    if lambda.contains(UnaryOp::Smile) {
        for &sw in succ_w {
            if !succ_v.iter().any(|&t| s.contains(t, sw)) {
                return Some(Failure {
                    cond: CondTag::Smile,
                    offender: Some(sw),
                    vw_in_s: false,
                });
            }
        }
    }
    if lambda.contains(UnaryOp::Frown) {
        for &t in succ_v {
            if !succ_w.iter().any(|&sw| s.contains(t, sw)) {
                return Some(Failure {
                    cond: CondTag::Frown,
                    offender: Some(t),
                    vw_in_s: false,
                });
            }
        }
    }
    if lambda.contains(UnaryOp::Con) {
        for &t in succ_v {
            let dashed = mode.dashed_kept(UnaryOp::Con) && s.contains(v, t);
            let main = s.contains(v, w) && succ_w.iter().any(|&sw| s.contains(sw, t));
            if !dashed && !main {
                return Some(Failure {
                    cond: CondTag::Con,
                    offender: Some(t),
                    vw_in_s: s.contains(v, w),
                });
            }
        }
    }
    if lambda.contains(UnaryOp::Det) {
        for &t in succ_v {
            let dashed = mode.dashed_kept(UnaryOp::Det) && s.contains(t, v);
            let main = succ_w.iter().any(|&sw| s.contains(t, sw));
            if !dashed && !main {
                return Some(Failure {
                    cond: CondTag::Det,
                    offender: Some(t),
                    vw_in_s: false,
                });
            }
        }
    }
    if lambda.contains(UnaryOp::Inc) {
        for &sw in succ_w {
            let dashed = mode.dashed_kept(UnaryOp::Inc) && s.contains(w, sw);
            let main = succ_v.iter().any(|&t| s.contains(t, sw));
            if !dashed && !main {
                return Some(Failure {
                    cond: CondTag::Inc,
                    offender: Some(sw),
                    vw_in_s: false,
                });
            }
        }
    }
    if lambda.contains(UnaryOp::Und) {
        for &sw in succ_w {
            let dashed = mode.dashed_kept(UnaryOp::Und) && s.contains(sw, w);
            let main = s.contains(v, w) && succ_v.iter().any(|&t| s.contains(sw, t));
            if !dashed && !main {
                return Some(Failure {
                    cond: CondTag::Und,
                    offender: Some(sw),
                    vw_in_s: s.contains(v, w),
                });
            }
        }
    }
    None
}

/// Checks one pair of a candidate relation.
pub fn check_pair(
    m: &KripkeModel,
    lambda: &SimilarityType,
    mode: &SimMode,
    s: &Relation,
    w: World,
    v: World,
) -> Option<Violation> {
    first_failure(m, lambda, mode, s, w, v).map(|f| f.to_violation((w, v)))
}

/// Checks every pair of `s`; in symmetric mode also requires symmetry.
pub fn verify_simulation(
    m: &KripkeModel,
    lambda: &SimilarityType,
    mode: &SimMode,
    s: &Relation,
) -> ViolationReport {
    let mut violations = Vec::new();
    if *mode == SimMode::Symmetric {
        for (w, v) in s.pairs() {
            if !s.contains(v, w) {
                violations.push(Violation {
                    pair: (w, v),
                    cond: CondTag::Mirror.tag().to_string(),
                    letter: None,
                    offender: None,
                });
            }
        }
    }
    for (w, v) in s.pairs() {
        if let Some(vio) = check_pair(m, lambda, mode, s, w, v) {
            violations.push(vio);
        }
    }
    ViolationReport {
        ok: violations.is_empty(),
        violations,
    }
}

/// Per-pair deletion record from the fixpoint computation.
#[derive(Debug, Clone, Copy)]
pub struct Deletion {
    pub round: usize,
    cond: CondTag,
    offender: Option<World>,
    vw_in_s: bool,
}

pub type Trace = HashMap<(World, World), Deletion>;

/// Greatest simulation by downward refinement from the full relation:
/// each round simultaneously deletes every currently violating pair. In
/// symmetric mode every batch is mirror-closed, so the result is the
/// greatest symmetric simulation.
pub fn greatest_simulation_traced(
    m: &KripkeModel,
    lambda: &SimilarityType,
    mode: &SimMode,
) -> (Relation, Trace) {
    let n = m.n_worlds();
    let mut s = Relation::full(n);
    let mut trace = Trace::new();
    let mut round = 0;
    loop {
        let mut batch: Vec<((World, World), Failure)> = Vec::new();
        for (w, v) in s.pairs() {
            if let Some(f) = first_failure(m, lambda, mode, &s, w, v) {
                batch.push(((w, v), f));
            }
        }
        if batch.is_empty() {
            return (s, trace);
        }
        if *mode == SimMode::Symmetric {
            let deleted: BTreeSet<(World, World)> = batch.iter().map(|&(p, _)| p).collect();
            let mirrors: Vec<(World, World)> = deleted
                .iter()
                .map(|&(w, v)| (v, w))
                .filter(|p| !deleted.contains(p) && s.contains(p.0, p.1))
                .collect();
            for (v, w) in mirrors {
                batch.push((
                    (v, w),
                    Failure {
                        cond: CondTag::Mirror,
                        offender: None,
                        vw_in_s: false,
                    },
                ));
            }
        }
        for ((w, v), f) in batch {
            s.remove(w, v);
            trace.insert(
                (w, v),
                Deletion {
                    round,
                    cond: f.cond,
                    offender: f.offender,
                    vw_in_s: f.vw_in_s,
                },
            );
        }
        round += 1;
    }
}

pub fn greatest_simulation(m: &KripkeModel, lambda: &SimilarityType, mode: &SimMode) -> Relation {
    greatest_simulation_traced(m, lambda, mode).0
}

/// Builds, for any pair outside the greatest plain simulation, a formula of
/// the type's language true at the first world and false at the second.
/// Every returned formula is re-checked against the satisfaction relation.
pub struct WitnessEngine<'a> {
    m: &'a KripkeModel,
    sim: Relation,
    trace: Trace,
    memo: HashMap<(World, World), Formula>,
}

impl<'a> WitnessEngine<'a> {
    pub fn new(m: &'a KripkeModel, lambda: &SimilarityType) -> Self {
        assert!(
            lambda.is_restorative(),
            "witnesses require a restorative type"
        );
        let (sim, trace) = greatest_simulation_traced(m, lambda, &SimMode::Plain);
        WitnessEngine {
            m,
            sim,
            trace,
            memo: HashMap::new(),
        }
    }

    pub fn simulation(&self) -> &Relation {
        &self.sim
    }

    /// None iff (w, v) is in the greatest simulation (no witness exists).
    pub fn witness(&mut self, w: World, v: World) -> Option<Formula> {
        if self.sim.contains(w, v) {
            return None;
        }
        Some(self.build(w, v))
    }

    fn build(&mut self, w: World, v: World) -> Formula {
        if let Some(phi) = self.memo.get(&(w, v)) {
            return phi.clone();
        }
        let del = *self
            .trace
            .get(&(w, v))
            .expect("pair outside the greatest simulation must be in the trace");
        let succ = |world: World| self.m.successors(world).to_vec();
        let phi = match del.cond {
            CondTag::Letter(k) => Formula::Letter(k),
            // every t reachable from v fails to cover the offending
            // successor s of w, so each contributes a disjunct
            CondTag::Smile => {
                let s = del.offender.unwrap();
                let parts = succ(v).into_iter().map(|t| self.build(t, s)).collect();
                Formula::unary(UnaryOp::Smile, Formula::disj(parts))
            }
            CondTag::Frown => {
                let t = del.offender.unwrap();
                let parts = succ(w).into_iter().map(|s| self.build(t, s)).collect();
                Formula::unary(UnaryOp::Frown, Formula::conj(parts))
            }
            CondTag::Con => {
                let t = del.offender.unwrap();
                if !del.vw_in_s {
                    let chi = self.build(v, t);
                    let xi = self.build(v, w);
                    Formula::unary(UnaryOp::Con, Formula::and(chi, xi))
                } else {
                    let parts = succ(w).into_iter().map(|s| self.build(s, t)).collect();
                    let chi = self.build(v, t);
                    Formula::unary(UnaryOp::Con, Formula::or(Formula::disj(parts), chi))
                }
            }
            CondTag::Det => {
                let t = del.offender.unwrap();
                let parts = succ(w).into_iter().map(|s| self.build(t, s)).collect();
                let chi = self.build(t, v);
                Formula::unary(UnaryOp::Det, Formula::and(Formula::conj(parts), chi))
            }
            CondTag::Inc => {
                let s = del.offender.unwrap();
                let parts = succ(v).into_iter().map(|t| self.build(t, s)).collect();
                let chi = self.build(w, s);
                Formula::unary(UnaryOp::Inc, Formula::or(Formula::disj(parts), chi))
            }
            CondTag::Und => {
                let s = del.offender.unwrap();
                if !del.vw_in_s {
                    let chi = self.build(s, w);
                    let xi = self.build(v, w);
                    Formula::unary(UnaryOp::Und, Formula::or(chi, xi))
                } else {
                    let parts = succ(v).into_iter().map(|t| self.build(s, t)).collect();
                    let chi = self.build(s, w);
                    Formula::unary(UnaryOp::Und, Formula::and(Formula::conj(parts), chi))
                }
            }
            CondTag::Mirror => unreachable!("plain-mode trace has no mirror deletions"),
        };
        let ts = crate::semantics::truth_set(self.m, &phi);
        assert!(
            ts.contains(w) && !ts.contains(v),
            "internal error: witness for ({w}, {v}) does not distinguish the pair"
        );
        self.memo.insert((w, v), phi.clone());
        phi
    }
}

/// Greatest Kripke bisimulation of one model (atoms plus forth and back
/// on the accessibility relation).
pub fn kripke_bisimulation(m: &KripkeModel) -> Relation {
    let n = m.n_worlds();
    let mut b = Relation::empty(n);
    for w in 0..n {
        for v in 0..n {
            if m.letters()
                .all(|k| m.world_has_letter(w, k) == m.world_has_letter(v, k))
            {
                b.insert(w, v);
            }
        }
    }
    loop {
        let mut next = b.clone();
        for (w, v) in b.pairs() {
            let forth = m
                .successors(w)
                .iter()
                .all(|&s| m.successors(v).iter().any(|&t| b.contains(s, t)));
            let back = m
                .successors(v)
                .iter()
                .all(|&t| m.successors(w).iter().any(|&s| b.contains(s, t)));
            if !(forth && back) {
                next.remove(w, v);
            }
        }
        if next == b {
            return b;
        }
        b = next;
    }
}

/// Two-model presentation for types within {smile, frown}: a forward part
/// on W1 x W2 and a backward part on W2 x W1, each with local indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DirectedSim {
    pub fwd: BTreeSet<(World, World)>,
    pub back: BTreeSet<(World, World)>,
}

fn assert_directed_type(lambda: &SimilarityType) {
    assert!(
        lambda
            .iter()
            .all(|op| matches!(op, UnaryOp::Smile | UnaryOp::Frown)),
        "directed simulations are defined for types within {{smile, frown}}"
    );
}

/// All violations of the directed conditions.
pub fn verify_directed(
    m1: &KripkeModel,
    m2: &KripkeModel,
    lambda: &SimilarityType,
    d: &DirectedSim,
) -> Vec<Violation> {
    assert_directed_type(lambda);
    let mut out = Vec::new();
    for &(w1, w2) in &d.fwd {
        for k in m1.letters() {
            if m1.world_has_letter(w1, k) && !m2.world_has_letter(w2, k) {
                out.push(Violation {
                    pair: (w1, w2),
                    cond: CondTag::Letter(k).tag().to_string(),
                    letter: Some(k),
                    offender: None,
                });
            }
        }
        if lambda.contains(UnaryOp::Smile) {
            for &s1 in m1.successors(w1) {
                if !m2
                    .successors(w2)
                    .iter()
                    .any(|&t2| d.back.contains(&(t2, s1)))
                {
                    out.push(Violation {
                        pair: (w1, w2),
                        cond: CondTag::Smile.tag().to_string(),
                        letter: None,
                        offender: Some(s1),
                    });
                }
            }
        }
        if lambda.contains(UnaryOp::Frown) {
            for &t2 in m2.successors(w2) {
                if !m1
                    .successors(w1)
                    .iter()
                    .any(|&s1| d.back.contains(&(t2, s1)))
                {
                    out.push(Violation {
                        pair: (w1, w2),
                        cond: CondTag::Frown.tag().to_string(),
                        letter: None,
                        offender: Some(t2),
                    });
                }
            }
        }
    }
    for &(w2, w1) in &d.back {
        for k in m2.letters() {
            if m2.world_has_letter(w2, k) && !m1.world_has_letter(w1, k) {
                out.push(Violation {
                    pair: (w2, w1),
                    cond: CondTag::Letter(k).tag().to_string(),
                    letter: Some(k),
                    offender: None,
                });
            }
        }
        if lambda.contains(UnaryOp::Smile) {
            for &s2 in m2.successors(w2) {
                if !m1
                    .successors(w1)
                    .iter()
                    .any(|&t1| d.fwd.contains(&(t1, s2)))
                {
                    out.push(Violation {
                        pair: (w2, w1),
                        cond: CondTag::Smile.tag().to_string(),
                        letter: None,
                        offender: Some(s2),
                    });
                }
            }
        }
        if lambda.contains(UnaryOp::Frown) {
            for &t1 in m1.successors(w1) {
                if !m2
                    .successors(w2)
                    .iter()
                    .any(|&s2| d.fwd.contains(&(t1, s2)))
                {
                    out.push(Violation {
                        pair: (w2, w1),
                        cond: CondTag::Frown.tag().to_string(),
                        letter: None,
                        offender: Some(t1),
                    });
                }
            }
        }
    }
    out
}

fn fwd_pair_ok(
    m1: &KripkeModel,
    m2: &KripkeModel,
    lambda: &SimilarityType,
    d: &DirectedSim,
    w1: World,
    w2: World,
) -> bool {
    m1.letters()
        .all(|k| !m1.world_has_letter(w1, k) || m2.world_has_letter(w2, k))
        && (!lambda.contains(UnaryOp::Smile)
            || m1.successors(w1).iter().all(|&s1| {
                m2.successors(w2)
                    .iter()
                    .any(|&t2| d.back.contains(&(t2, s1)))
            }))
        && (!lambda.contains(UnaryOp::Frown)
            || m2.successors(w2).iter().all(|&t2| {
                m1.successors(w1)
                    .iter()
                    .any(|&s1| d.back.contains(&(t2, s1)))
            }))
}

fn back_pair_ok(
    m1: &KripkeModel,
    m2: &KripkeModel,
    lambda: &SimilarityType,
    d: &DirectedSim,
    w2: World,
    w1: World,
) -> bool {
    m2.letters()
        .all(|k| !m2.world_has_letter(w2, k) || m1.world_has_letter(w1, k))
        && (!lambda.contains(UnaryOp::Smile)
            || m2.successors(w2).iter().all(|&s2| {
                m1.successors(w1)
                    .iter()
                    .any(|&t1| d.fwd.contains(&(t1, s2)))
            }))
        && (!lambda.contains(UnaryOp::Frown)
            || m1.successors(w1).iter().all(|&t1| {
                m2.successors(w2)
                    .iter()
                    .any(|&s2| d.fwd.contains(&(t1, s2)))
            }))
}

/// Greatest directed simulation by joint refinement of both parts.
pub fn greatest_directed(
    m1: &KripkeModel,
    m2: &KripkeModel,
    lambda: &SimilarityType,
) -> DirectedSim {
    assert_directed_type(lambda);
    let mut d = DirectedSim {
        fwd: (0..m1.n_worlds())
            .flat_map(|a| (0..m2.n_worlds()).map(move |b| (a, b)))
            .collect(),
        back: (0..m2.n_worlds())
            .flat_map(|a| (0..m1.n_worlds()).map(move |b| (a, b)))
            .collect(),
    };
    loop {
        let fwd_bad: BTreeSet<(World, World)> = d
            .fwd
            .iter()
            .copied()
            .filter(|&(w1, w2)| !fwd_pair_ok(m1, m2, lambda, &d, w1, w2))
            .collect();
        let back_bad: BTreeSet<(World, World)> = d
            .back
            .iter()
            .copied()
            .filter(|&(w2, w1)| !back_pair_ok(m1, m2, lambda, &d, w2, w1))
            .collect();
        if fwd_bad.is_empty() && back_bad.is_empty() {
            return d;
        }
        for p in &fwd_bad {
            d.fwd.remove(p);
        }
        for p in &back_bad {
            d.back.remove(p);
        }
    }
}

/// Cross-block extraction: a relation on the disjoint union of two models
/// (left block first) yields the directed parts in local indices.
pub fn to_directed(s: &Relation, n1: usize) -> DirectedSim {
    let mut d = DirectedSim::default();
    for (a, b) in s.pairs() {
        if a < n1 && b >= n1 {
            d.fwd.insert((a, b - n1));
        } else if a >= n1 && b < n1 {
            d.back.insert((a - n1, b));
        }
    }
    d
}

/// Embeds directed parts as a relation on the disjoint union.
pub fn from_directed(d: &DirectedSim, n1: usize, n2: usize) -> Relation {
    let mut s = Relation::empty(n1 + n2);
    for &(w1, w2) in &d.fwd {
        s.insert(w1, n1 + w2);
    }
    for &(w2, w1) in &d.back {
        s.insert(n1 + w2, w1);
    }
    s
}

/// The four blocks of a relation on a disjoint union, in the order
/// (1,1), (1,2), (2,1), (2,2); union-model indices throughout.
pub fn to_concrete(s: &Relation, n1: usize) -> [Relation; 4] {
    let n = s.n_worlds();
    [
        s.block(0, n1, 0, n1),
        s.block(0, n1, n1, n),
        s.block(n1, n, 0, n1),
        s.block(n1, n, n1, n),
    ]
}

pub fn from_concrete(blocks: &[Relation; 4]) -> Relation {
    blocks[1..]
        .iter()
        .fold(blocks[0].clone(), |acc, b| acc.union(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::truth_set;
    use crate::syntax::parse_formula;

    fn lambda(s: &str) -> SimilarityType {
        s.parse().unwrap()
    }

    // W = {w, v, u} as 0, 1, 2; edge (w, u); empty valuation
    fn three_world() -> KripkeModel {
        KripkeModel::new(3, [(0, 2)], []).unwrap()
    }

    // W = {w, v, u, t} as 0..3; edges (w, u), (v, t); P0 = {v, u, t}
    fn four_world() -> KripkeModel {
        KripkeModel::new(4, [(0, 2), (1, 3)], [(0, [1, 2, 3].into())]).unwrap()
    }

    // W = {w, v, t} as 0, 1, 2; edge (v, t); P0 = {t}
    fn dashed_world() -> KripkeModel {
        KripkeModel::new(3, [(1, 2)], [(0, [2].into())]).unwrap()
    }

    #[test]
    fn inc_simulation_from_example() {
        let m = three_world();
        let s = Relation::from_pairs(3, [(0, 2), (0, 1)]);
        assert!(verify_simulation(&m, &lambda("inc"), &SimMode::Plain, &s).ok);
        // but (0, 1) is not a {smile}-simulation pair: w has a successor, v none
        let report = verify_simulation(&m, &lambda("smile"), &SimMode::Plain, &s);
        assert!(!report.ok);
        assert!(report
            .violations
            .iter()
            .any(|x| x.pair == (0, 1) && x.cond == "Sim_smile"));
    }

    #[test]
    fn smile_inc_simulation_from_example() {
        let m = four_world();
        let s = Relation::from_pairs(4, [(0, 1), (2, 3), (3, 2)]);
        assert!(verify_simulation(&m, &lambda("smile,inc"), &SimMode::Plain, &s).ok);
        // the same relation is not a {smile,con}-simulation: at (0, 1) the
        // successor t of v is reached neither via (v, t) nor via (v, w)
        let con = verify_simulation(&m, &lambda("smile,con"), &SimMode::Plain, &s);
        assert!(con
            .violations
            .iter()
            .any(|x| x.pair == (0, 1) && x.cond == "Sim_con"));
        // (1, 0) fails on the letter: v carries p0, w does not
        let bad = s.union(&Relation::from_pairs(4, [(1, 0)]));
        let report = verify_simulation(&m, &lambda("smile,inc"), &SimMode::Plain, &bad);
        assert!(report
            .violations
            .iter()
            .any(|x| x.pair == (1, 0) && x.cond == "Sim_k" && x.letter == Some(0)));
    }

    #[test]
    fn dashed_disjunct_separates_modes() {
        let m = dashed_world();
        let s = Relation::from_pairs(3, [(0, 1), (1, 2)]);
        assert!(verify_simulation(&m, &lambda("con"), &SimMode::Plain, &s).ok);
        // without (1, 2) the pair (0, 1) no longer satisfies the con condition
        let small = Relation::from_pairs(3, [(0, 1)]);
        assert!(!verify_simulation(&m, &lambda("con"), &SimMode::Plain, &small).ok);
        // ablating the first disjunct kills (0, 1): w has no successors at all
        let ablated = SimMode::Ablated(lambda("con"));
        let report = verify_simulation(&m, &lambda("con"), &ablated, &s);
        assert!(report
            .violations
            .iter()
            .any(|x| x.pair == (0, 1) && x.cond == "Sim_con"));
        let g_plain = greatest_simulation(&m, &lambda("con"), &SimMode::Plain);
        let g_abl = greatest_simulation(&m, &lambda("con"), &ablated);
        assert!(g_plain.contains(0, 1));
        assert!(!g_abl.contains(0, 1));
        assert!(g_abl.is_subset(&g_plain));
    }

    #[test]
    fn greatest_is_a_simulation_and_maximal() {
        let m = crate::kripke::random_model(5, 2, 0.4, 0.5, 3);
        for ops in ["smile", "frown", "con,und", "smile,frown,con,det,inc,und"] {
            let l = lambda(ops);
            let g = greatest_simulation(&m, &l, &SimMode::Plain);
            assert!(verify_simulation(&m, &l, &SimMode::Plain, &g).ok);
            // adding any missing pair breaks it
            for w in m.worlds() {
                for v in m.worlds() {
                    if !g.contains(w, v) {
                        let mut bigger = g.clone();
                        bigger.insert(w, v);
                        assert!(!verify_simulation(&m, &l, &SimMode::Plain, &bigger).ok);
                    }
                }
            }
        }
    }

    #[test]
    fn symmetric_mode_is_symmetric_and_contained() {
        let m = crate::kripke::random_model(6, 2, 0.4, 0.5, 9);
        let l = lambda("smile,frown");
        let sym = greatest_simulation(&m, &l, &SimMode::Symmetric);
        assert!(sym.is_symmetric());
        assert!(verify_simulation(&m, &l, &SimMode::Symmetric, &sym).ok);
        assert!(sym.is_subset(&greatest_simulation(&m, &l, &SimMode::Plain)));
    }

    #[test]
    fn symmetric_smile_frown_matches_bisimulation() {
        for seed in 0..20 {
            let m = crate::kripke::random_model(5, 2, 0.4, 0.5, seed);
            let sym = greatest_simulation(&m, &lambda("smile,frown"), &SimMode::Symmetric);
            assert_eq!(sym, kripke_bisimulation(&m), "seed {seed}");
        }
    }

    #[test]
    fn witnesses_distinguish_all_deleted_pairs() {
        for seed in 0..10 {
            let m = crate::kripke::random_model(4, 2, 0.5, 0.5, 100 + seed);
            for ops in [
                "smile,con",
                "frown,det",
                "inc,und",
                "smile,frown,con,det,inc,und",
            ] {
                let l = lambda(ops);
                let mut eng = WitnessEngine::new(&m, &l);
                let sim = eng.simulation().clone();
                for w in m.worlds() {
                    for v in m.worlds() {
                        match eng.witness(w, v) {
                            None => assert!(sim.contains(w, v)),
                            Some(phi) => {
                                assert!(phi.in_language(&l));
                                let ts = truth_set(&m, &phi);
                                assert!(ts.contains(w) && !ts.contains(v));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn witness_for_letter_gap_is_the_letter() {
        let m = four_world();
        let mut eng = WitnessEngine::new(&m, &lambda("smile"));
        assert_eq!(eng.witness(1, 0), Some(parse_formula("p0").unwrap()));
    }

    #[test]
    fn directed_round_trip_and_greatest() {
        let m1 = crate::kripke::random_model(3, 2, 0.5, 0.5, 21);
        let m2 = crate::kripke::random_model(4, 2, 0.5, 0.5, 22);
        let l = lambda("smile,frown");
        let d = greatest_directed(&m1, &m2, &l);
        assert!(verify_directed(&m1, &m2, &l, &d).is_empty());
        let s = from_directed(&d, m1.n_worlds(), m2.n_worlds());
        assert_eq!(to_directed(&s, m1.n_worlds()), d);
        // cross blocks of the greatest union simulation agree with it
        let (u, _) = m1.disjoint_union(&m2);
        let g = greatest_simulation(&u, &l, &SimMode::Plain);
        assert_eq!(to_directed(&g, m1.n_worlds()), d);
    }

    #[test]
    fn concrete_blocks_round_trip() {
        let m1 = crate::kripke::random_model(3, 1, 0.4, 0.5, 31);
        let m2 = crate::kripke::random_model(3, 1, 0.4, 0.5, 32);
        let (u, _) = m1.disjoint_union(&m2);
        let g = greatest_simulation(&u, &lambda("con,inc"), &SimMode::Plain);
        let blocks = to_concrete(&g, m1.n_worlds());
        assert_eq!(from_concrete(&blocks), g);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("plain".parse::<SimMode>().unwrap(), SimMode::Plain);
        assert_eq!("symmetric".parse::<SimMode>().unwrap(), SimMode::Symmetric);
        assert_eq!(
            "ablated:con,und".parse::<SimMode>().unwrap(),
            SimMode::Ablated(lambda("con,und"))
        );
        assert!("ablated:smile".parse::<SimMode>().is_err());
        assert!("fancy".parse::<SimMode>().is_err());
    }
}
