//! Finite Kripke models: validation, JSON persistence, disjoint unions,
//! and a seeded random generator.
//!
//! Model JSON schema:
//!
//! ```json
//! { "worlds": 3,
//!   "edges": [[0, 2]],
//!   "valuation": { "p0": [1, 2] } }
//! ```
//!
//! Missing letters mean an empty truth set. Duplicate edges are tolerated
//! (set semantics); out-of-range world ids are rejected.

use crate::rng::SplitMix64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Worlds are dense 0-based indices into the model.
pub type World = usize;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("model must have at least one world")]
    Empty,
    #[error("dangling world id {id} (model has {worlds} worlds)")]
    DanglingWorld { id: usize, worlds: usize },
    #[error("bad letter key `{0}`: expected `p<N>`")]
    BadLetterKey(String),
    #[error("malformed model JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    n_worlds: usize,
    edges: BTreeSet<(World, World)>,
    valuation: BTreeMap<u32, BTreeSet<World>>,
    // successor lists, kept sorted; the image R[w] of each world
    succ: Vec<Vec<World>>,
}

impl KripkeModel {
    pub fn new(
        n_worlds: usize,
        edges: impl IntoIterator<Item = (World, World)>,
        valuation: impl IntoIterator<Item = (u32, BTreeSet<World>)>,
    ) -> Result<Self, ModelError> {
        if n_worlds == 0 {
            return Err(ModelError::Empty);
        }
        let edges: BTreeSet<(World, World)> = edges.into_iter().collect();
        for &(a, b) in &edges {
            for id in [a, b] {
                if id >= n_worlds {
                    return Err(ModelError::DanglingWorld {
                        id,
                        worlds: n_worlds,
                    });
                }
            }
        }
        let valuation: BTreeMap<u32, BTreeSet<World>> = valuation.into_iter().collect();
        for members in valuation.values() {
            for &id in members {
                if id >= n_worlds {
                    return Err(ModelError::DanglingWorld {
                        id,
                        worlds: n_worlds,
                    });
                }
            }
        }
        let mut succ = vec![Vec::new(); n_worlds];
        for &(a, b) in &edges {
            succ[a].push(b);
        }
        Ok(KripkeModel {
            n_worlds,
            edges,
            valuation,
            succ,
        })
    }

    pub fn n_worlds(&self) -> usize {
        self.n_worlds
    }

    pub fn worlds(&self) -> impl Iterator<Item = World> {
        0..self.n_worlds
    }

    pub fn edges(&self) -> impl Iterator<Item = (World, World)> + '_ {
        self.edges.iter().copied()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: World, b: World) -> bool {
        self.edges.contains(&(a, b))
    }

    /// R[w], sorted.
    pub fn successors(&self, w: World) -> &[World] {
        &self.succ[w]
    }

    /// Letters present in the valuation map (empty truth sets included
    /// only if explicitly listed).
    pub fn letters(&self) -> impl Iterator<Item = u32> + '_ {
        self.valuation.keys().copied()
    }

    pub fn letter_set(&self, k: u32) -> Option<&BTreeSet<World>> {
        self.valuation.get(&k)
    }

    pub fn world_has_letter(&self, w: World, k: u32) -> bool {
        self.valuation.get(&k).is_some_and(|s| s.contains(&w))
    }

    pub fn from_json(json: &str) -> Result<Self, ModelError> {
        let raw: ModelJson = serde_json::from_str(json)?;
        raw.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ModelJson::from(self)).expect("model serialization")
    }

    /// Left-block-first disjoint union; worlds of `self` keep their ids,
    /// worlds of `other` are shifted by `self.n_worlds()`.
    pub fn disjoint_union(&self, other: &KripkeModel) -> (KripkeModel, UnionInjections) {
        let n1 = self.n_worlds;
        let n = n1 + other.n_worlds;
        let edges = self
            .edges()
            .chain(other.edges().map(|(a, b)| (a + n1, b + n1)));
        let mut valuation: BTreeMap<u32, BTreeSet<World>> = BTreeMap::new();
        for (k, members) in &self.valuation {
            valuation
                .entry(*k)
                .or_default()
                .extend(members.iter().copied());
        }
        for (k, members) in &other.valuation {
            valuation
                .entry(*k)
                .or_default()
                .extend(members.iter().map(|&w| w + n1));
        }
        let union = KripkeModel::new(n, edges, valuation).expect("union of valid models");
        let inj = UnionInjections {
            left: (0..n1).collect(),
            right: (0..other.n_worlds).map(|w| w + n1).collect(),
        };
        (union, inj)
    }
}

/// The two inclusion maps into a disjoint union.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnionInjections {
    pub left: Vec<World>,
    pub right: Vec<World>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelJson {
    worlds: usize,
    edges: Vec<(usize, usize)>,
    valuation: BTreeMap<String, Vec<usize>>,
}

impl TryFrom<ModelJson> for KripkeModel {
    type Error = ModelError;

    fn try_from(raw: ModelJson) -> Result<Self, ModelError> {
        let mut valuation = BTreeMap::new();
        for (key, members) in raw.valuation {
            let k = key
                .strip_prefix('p')
                .and_then(|rest| rest.parse::<u32>().ok())
                .ok_or_else(|| ModelError::BadLetterKey(key.clone()))?;
            valuation.insert(k, members.into_iter().collect::<BTreeSet<World>>());
        }
        KripkeModel::new(raw.worlds, raw.edges, valuation)
    }
}

impl From<&KripkeModel> for ModelJson {
    fn from(m: &KripkeModel) -> Self {
        ModelJson {
            worlds: m.n_worlds,
            edges: m.edges.iter().copied().collect(),
            valuation: m
                .valuation
                .iter()
                .map(|(k, members)| (format!("p{k}"), members.iter().copied().collect()))
                .collect(),
        }
    }
}

/// Seeded random model; deterministic for fixed inputs (see `rng`).
/// Draw order: edges row-major (w, v) for w, v in 0..n, then letter
/// membership for each letter 0..n_letters and each world 0..n.
pub fn random_model(
    n_worlds: usize,
    n_letters: u32,
    edge_prob: f64,
    letter_prob: f64,
    seed: u64,
) -> KripkeModel {
    assert!(n_worlds >= 1);
    assert!((0.0..=1.0).contains(&edge_prob) && (0.0..=1.0).contains(&letter_prob));
    let mut rng = SplitMix64::new(seed);
    let mut edges = BTreeSet::new();
    for w in 0..n_worlds {
        for v in 0..n_worlds {
            if rng.chance(edge_prob) {
                edges.insert((w, v));
            }
        }
    }
    let mut valuation = BTreeMap::new();
    for k in 0..n_letters {
        let mut members = BTreeSet::new();
        for w in 0..n_worlds {
            if rng.chance(letter_prob) {
                members.insert(w);
            }
        }
        valuation.insert(k, members);
    }
    KripkeModel::new(n_worlds, edges, valuation).expect("generator respects bounds")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn load_example_model() {
        // the 3-world model with a single edge and empty valuation
        let m = KripkeModel::from_json(r#"{"worlds":3,"edges":[[0,2]],"valuation":{}}"#).unwrap();
        assert_eq!(m.n_worlds(), 3);
        assert_eq!(m.successors(0), &[2]);
        assert!(m.successors(1).is_empty());
    }

    #[test]
    fn load_single_world() {
        let m = KripkeModel::from_json(r#"{"worlds":1,"edges":[],"valuation":{}}"#).unwrap();
        assert_eq!(m.n_worlds(), 1);
    }

    #[test]
    fn reject_dangling_world() {
        let err =
            KripkeModel::from_json(r#"{"worlds":2,"edges":[[0,5]],"valuation":{}}"#).unwrap_err();
        assert!(matches!(err, ModelError::DanglingWorld { id: 5, .. }));
    }

    #[test]
    fn reject_empty_model() {
        let err = KripkeModel::from_json(r#"{"worlds":0,"edges":[],"valuation":{}}"#).unwrap_err();
        assert!(matches!(err, ModelError::Empty));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let m = KripkeModel::new(2, [(0, 1), (0, 1)], []).unwrap();
        assert_eq!(m.n_edges(), 1);
    }

    #[test]
    fn union_block_structure() {
        let m1 = KripkeModel::new(3, [(0, 2)], []).unwrap();
        let m2 = KripkeModel::new(4, [(0, 2), (1, 3)], [(0, BTreeSet::from([1, 2, 3]))]).unwrap();
        let (u, inj) = m1.disjoint_union(&m2);
        assert_eq!(u.n_worlds(), 7);
        assert_eq!(u.n_edges(), 3);
        assert_eq!(inj.left, vec![0, 1, 2]);
        assert_eq!(inj.right, vec![3, 4, 5, 6]);
        assert!(u.has_edge(3, 5));
        assert!(u.world_has_letter(4, 0));
        assert!(!u.world_has_letter(0, 0));
        // no cross-block edges
        for (a, b) in u.edges() {
            assert_eq!(a < 3, b < 3);
        }
    }

    #[test]
    fn union_of_singletons() {
        let m = KripkeModel::new(1, [], []).unwrap();
        let (u, _) = m.disjoint_union(&m);
        assert_eq!(u.n_worlds(), 2);
        assert_eq!(u.n_edges(), 0);
    }

    #[test]
    fn generator_extremes() {
        let m = random_model(1, 0, 0.0, 0.0, 17);
        assert_eq!(m.n_worlds(), 1);
        assert_eq!(m.n_edges(), 0);
        let m = random_model(4, 2, 1.0, 1.0, 17);
        assert_eq!(m.n_edges(), 16);
        assert_eq!(m.letter_set(0).unwrap().len(), 4);
        assert_eq!(m.letter_set(1).unwrap().len(), 4);
    }

    #[test]
    fn generator_deterministic() {
        let a = random_model(5, 2, 0.4, 0.5, 42);
        let b = random_model(5, 2, 0.4, 0.5, 42);
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn json_round_trip() {
        let m = random_model(6, 2, 0.4, 0.5, 7);
        let back = KripkeModel::from_json(&m.to_json()).unwrap();
        assert_eq!(m, back);
    }
}
