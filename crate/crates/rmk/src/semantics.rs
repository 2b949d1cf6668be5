//! Satisfaction and truth sets for all operators, the exact
//! definable-truth-set closure, the subsumption relation computed from it,
//! and local sequent validity.

use crate::kripke::{random_model, KripkeModel, World};
use crate::relation::Relation;
use crate::rng::{sub_seed, SplitMix64};
use crate::syntax::{Formula, SimilarityType, UnaryOp};
use crate::trials::TrialConfig;
use serde::Serialize;
use std::collections::HashMap;
use thiserror::Error;

/// A set of worlds of a fixed model, as a bitset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruthSet {
    n: usize,
    words: Vec<u64>,
}

impl TruthSet {
    pub fn empty(n: usize) -> Self {
        TruthSet {
            n,
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut t = TruthSet::empty(n);
        for w in 0..n {
            t.insert(w);
        }
        t
    }

    pub fn from_worlds(n: usize, worlds: impl IntoIterator<Item = World>) -> Self {
        let mut t = TruthSet::empty(n);
        for w in worlds {
            t.insert(w);
        }
        t
    }

    pub fn n_worlds(&self) -> usize {
        self.n
    }

    pub fn contains(&self, w: World) -> bool {
        self.words[w / 64] >> (w % 64) & 1 == 1
    }

    pub fn insert(&mut self, w: World) {
        assert!(w < self.n);
        self.words[w / 64] |= 1 << (w % 64);
    }

    pub fn union(&self, other: &TruthSet) -> TruthSet {
        assert_eq!(self.n, other.n);
        TruthSet {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn intersect(&self, other: &TruthSet) -> TruthSet {
        assert_eq!(self.n, other.n);
        TruthSet {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn complement(&self) -> TruthSet {
        let mut t = TruthSet::empty(self.n);
        for w in 0..self.n {
            if !self.contains(w) {
                t.insert(w);
            }
        }
        t
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> + '_ {
        (0..self.n).filter(|&w| self.contains(w))
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
}

/// The transformer on truth sets realizing one unary satisfaction clause.
pub fn operator_transformer(op: UnaryOp, m: &KripkeModel, t: &TruthSet) -> TruthSet {
    let n = m.n_worlds();
    assert_eq!(t.n_worlds(), n);
    let some_successor_out = |w: World| m.successors(w).iter().any(|&v| !t.contains(v));
    let some_successor_in = |w: World| m.successors(w).iter().any(|&v| t.contains(v));
    let mut out = TruthSet::empty(n);
    for w in 0..n {
        let holds = match op {
            UnaryOp::Not => !t.contains(w),
            UnaryOp::Box => !some_successor_out(w),
            UnaryOp::Dia => some_successor_in(w),
            UnaryOp::Smile => some_successor_out(w),
            UnaryOp::Frown => !some_successor_in(w),
            UnaryOp::Con => !t.contains(w) || !some_successor_out(w),
            UnaryOp::Det => t.contains(w) || !some_successor_in(w),
            UnaryOp::Inc => t.contains(w) && some_successor_out(w),
            UnaryOp::Und => !t.contains(w) && some_successor_in(w),
        };
        if holds {
            out.insert(w);
        }
    }
    out
}

pub fn truth_set(m: &KripkeModel, phi: &Formula) -> TruthSet {
    let n = m.n_worlds();
    match phi {
        Formula::Top => TruthSet::full(n),
        Formula::Bot => TruthSet::empty(n),
        Formula::Letter(k) => match m.letter_set(*k) {
            Some(members) => TruthSet::from_worlds(n, members.iter().copied()),
            None => TruthSet::empty(n),
        },
        Formula::And(a, b) => truth_set(m, a).intersect(&truth_set(m, b)),
        Formula::Or(a, b) => truth_set(m, a).union(&truth_set(m, b)),
        Formula::Unary(op, a) => operator_transformer(*op, m, &truth_set(m, a)),
    }
}

pub fn satisfies(m: &KripkeModel, w: World, phi: &Formula) -> bool {
    truth_set(m, phi).contains(w)
}

#[derive(Debug, Error)]
pub enum ClosureError {
    #[error("closure cap of {cap} sets exceeded")]
    CapExceeded { cap: usize },
    #[error("operator `{0}` has no closure transformer (similarity type must be restorative, optionally with `not`)")]
    UnsupportedOp(UnaryOp),
}

/// The exact family of truth sets definable over a finite model in the
/// language of a similarity type. Each member carries a generating formula
/// whose truth set it is.
#[derive(Debug, Clone)]
pub struct ClosureFamily {
    sets: Vec<TruthSet>,
    formulas: Vec<Formula>,
    index: HashMap<TruthSet, usize>,
}

impl ClosureFamily {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[TruthSet] {
        &self.sets
    }

    pub fn contains_set(&self, t: &TruthSet) -> bool {
        self.index.contains_key(t)
    }

    pub fn generator(&self, i: usize) -> &Formula {
        &self.formulas[i]
    }

    /// A definable set containing `w` but not `v`, if any.
    pub fn separator(&self, w: World, v: World) -> Option<(&TruthSet, &Formula)> {
        self.sets
            .iter()
            .position(|t| t.contains(w) && !t.contains(v))
            .map(|i| (&self.sets[i], &self.formulas[i]))
    }
}

/// Least family containing the empty set, all worlds, and every listed
/// letter's truth set, closed under union, intersection and the
/// transformers of the type's operators (complement iff `not` is present).
/// Worklist order: unions, then intersections, then unary transformers.
pub fn definable_closure(
    m: &KripkeModel,
    lambda: &SimilarityType,
    cap: usize,
) -> Result<ClosureFamily, ClosureError> {
    for op in lambda.iter() {
        if !op.is_restorative() && op != UnaryOp::Not {
            return Err(ClosureError::UnsupportedOp(op));
        }
    }
    let n = m.n_worlds();
    let mut fam = ClosureFamily {
        sets: Vec::new(),
        formulas: Vec::new(),
        index: HashMap::new(),
    };

    let add = |fam: &mut ClosureFamily, t: TruthSet, phi: Formula| -> Result<bool, ClosureError> {
        if fam.index.contains_key(&t) {
            return Ok(false);
        }
        if fam.sets.len() >= cap {
            return Err(ClosureError::CapExceeded { cap });
        }
        fam.index.insert(t.clone(), fam.sets.len());
        fam.sets.push(t);
        fam.formulas.push(phi);
        Ok(true)
    };

    add(&mut fam, TruthSet::empty(n), Formula::Bot)?;
    add(&mut fam, TruthSet::full(n), Formula::Top)?;
    for k in m.letters() {
        add(
            &mut fam,
            truth_set(m, &Formula::Letter(k)),
            Formula::Letter(k),
        )?;
    }

    loop {
        let mut changed = false;
        let len = fam.sets.len();
        for i in 0..len {
            for j in 0..len {
                let t = fam.sets[i].union(&fam.sets[j]);
                if !fam.index.contains_key(&t) {
                    let phi = Formula::or(fam.formulas[i].clone(), fam.formulas[j].clone());
                    changed |= add(&mut fam, t, phi)?;
                }
            }
        }
        let len = fam.sets.len();
        for i in 0..len {
            for j in 0..len {
                let t = fam.sets[i].intersect(&fam.sets[j]);
                if !fam.index.contains_key(&t) {
                    let phi = Formula::and(fam.formulas[i].clone(), fam.formulas[j].clone());
                    changed |= add(&mut fam, t, phi)?;
                }
            }
        }
        for op in lambda.iter() {
            let len = fam.sets.len();
            for i in 0..len {
                let t = operator_transformer(op, m, &fam.sets[i]);
                if !fam.index.contains_key(&t) {
                    let phi = Formula::unary(op, fam.formulas[i].clone());
                    changed |= add(&mut fam, t, phi)?;
                }
            }
        }
        if !changed {
            return Ok(fam);
        }
    }
}

/// The subsumption preorder: (w, v) iff every definable set containing w
/// contains v, i.e. every formula of the language true at w is true at v.
pub fn subsumption(
    m: &KripkeModel,
    lambda: &SimilarityType,
    cap: usize,
) -> Result<Relation, ClosureError> {
    let fam = definable_closure(m, lambda, cap)?;
    Ok(subsumption_from_closure(m, &fam))
}

pub fn subsumption_from_closure(m: &KripkeModel, fam: &ClosureFamily) -> Relation {
    let n = m.n_worlds();
    let mut rel = Relation::full(n);
    for t in fam.sets() {
        for w in t.worlds() {
            for v in 0..n {
                if !t.contains(v) {
                    rel.remove(w, v);
                }
            }
        }
    }
    rel
}

/// Premises and conclusions of a local multiple-conclusion judgment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub premises: Vec<Formula>,
    pub conclusions: Vec<Formula>,
}

impl Sequent {
    pub fn new(
        premises: impl IntoIterator<Item = Formula>,
        conclusions: impl IntoIterator<Item = Formula>,
    ) -> Self {
        Sequent {
            premises: premises.into_iter().collect(),
            conclusions: conclusions.into_iter().collect(),
        }
    }

    /// Parses `"phi1, phi2 |- psi1, psi2"`; either side may be empty.
    pub fn parse(text: &str) -> Result<Sequent, crate::syntax::ParseError> {
        let (lhs, rhs) = match text.split_once("|-") {
            Some((l, r)) => (l, r),
            None => (text, ""),
        };
        let side = |s: &str| -> Result<Vec<Formula>, crate::syntax::ParseError> {
            s.split(',')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(crate::syntax::parse_formula)
                .collect()
        };
        Ok(Sequent {
            premises: side(lhs)?,
            conclusions: side(rhs)?,
        })
    }

    /// True iff every premise is true and every conclusion false at (m, w).
    /// Such a point is a countermodel to the sequent's validity, and at the
    /// same time a witness that asserting the premises is compatible with
    /// denying the conclusions.
    pub fn countermodel_at(&self, m: &KripkeModel, w: World) -> bool {
        self.premises.iter().all(|phi| satisfies(m, w, phi))
            && self.conclusions.iter().all(|phi| !satisfies(m, w, phi))
    }
}

impl std::fmt::Display for Sequent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let side = |fs: &[Formula]| {
            fs.iter()
                .map(crate::syntax::print_formula)
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "{} |- {}", side(&self.premises), side(&self.conclusions))
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    ValidUpToSearch,
    Countermodel {
        model: serde_json::Value,
        world: World,
    },
}

/// Every model with up to `max_worlds` worlds over letters 0..`max_letters`:
/// all edge subsets and all valuations, enumerated deterministically.
pub fn enumerate_models(max_worlds: usize, max_letters: u32) -> Vec<KripkeModel> {
    let mut out = Vec::new();
    for n in 1..=max_worlds {
        let n_edge_bits = n * n;
        let n_val_bits = n as u32 * max_letters;
        for edge_mask in 0u64..(1 << n_edge_bits) {
            for val_mask in 0u64..(1 << n_val_bits) {
                let edges = (0..n_edge_bits)
                    .filter(|i| edge_mask >> i & 1 == 1)
                    .map(|i| (i / n, i % n));
                let valuation = (0..max_letters).map(|k| {
                    let members = (0..n)
                        .filter(|w| val_mask >> (k * n as u32 + *w as u32) & 1 == 1)
                        .collect();
                    (k, members)
                });
                out.push(KripkeModel::new(n, edges, valuation).expect("enumeration in range"));
            }
        }
    }
    out
}

/// Searches for a world making all premises true and all conclusions false:
/// exhaustively over all models with <= 3 worlds and <= 2 letters, then over
/// `cfg.trials` random models at the configured sizes.
pub fn find_countermodel(seq: &Sequent, cfg: &TrialConfig) -> Option<(KripkeModel, World)> {
    let exhaustive_worlds = cfg.max_worlds.min(3);
    let exhaustive_letters = cfg.max_letters.min(2);
    for m in enumerate_models(exhaustive_worlds, exhaustive_letters) {
        for w in m.worlds() {
            if seq.countermodel_at(&m, w) {
                return Some((m, w));
            }
        }
    }
    let mut rng = SplitMix64::new(cfg.seed);
    for trial in 0..cfg.trials {
        let n = 1 + rng.below(cfg.max_worlds as u64) as usize;
        let m = random_model(
            n,
            cfg.max_letters,
            cfg.edge_prob,
            cfg.letter_prob,
            sub_seed(cfg.seed, trial),
        );
        for w in m.worlds() {
            if seq.countermodel_at(&m, w) {
                return Some((m, w));
            }
        }
    }
    None
}

/// Local multiple-conclusion validity, decided by countermodel search.
pub fn sequent_valid(seq: &Sequent, cfg: &TrialConfig) -> Verdict {
    match find_countermodel(seq, cfg) {
        None => Verdict::ValidUpToSearch,
        Some((m, w)) => Verdict::Countermodel {
            model: serde_json::from_str(&m.to_json()).expect("model json"),
            world: w,
        },
    }
}
