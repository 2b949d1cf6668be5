//! Binary relations over the worlds of one model, stored as a dense
//! boolean matrix. Desk-scale models make this the fastest and simplest
//! representation; JSON form is a sorted pair list.

use crate::kripke::World;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn full(n: usize) -> Self {
        Relation {
            n,
            bits: vec![true; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::empty(n);
        for w in 0..n {
            r.insert(w, w);
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (World, World)>) -> Self {
        let mut r = Relation::empty(n);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    pub fn n_worlds(&self) -> usize {
        self.n
    }

    pub fn contains(&self, a: World, b: World) -> bool {
        self.bits[a * self.n + b]
    }

    pub fn insert(&mut self, a: World, b: World) {
        self.bits[a * self.n + b] = true;
    }

    pub fn remove(&mut self, a: World, b: World) {
        self.bits[a * self.n + b] = false;
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (World, World)> + '_ {
        (0..self.n).flat_map(move |a| {
            (0..self.n).filter_map(move |b| {
                if self.contains(a, b) {
                    Some((a, b))
                } else {
                    None
                }
            })
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(a, b)| self.contains(b, a))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs().all(|(a, b)| other.contains(a, b))
    }

    pub fn union(&self, other: &Relation) -> Relation {
        assert_eq!(self.n, other.n);
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| a || b)
            .collect();
        Relation { n: self.n, bits }
    }

    /// Restriction to pairs whose first component is in [a0, a1) and whose
    /// second is in [b0, b1); used to split relations on a disjoint union
    /// into blocks.
    pub fn block(&self, a0: usize, a1: usize, b0: usize, b1: usize) -> Relation {
        let mut out = Relation::empty(self.n);
        for (a, b) in self.pairs() {
            if (a0..a1).contains(&a) && (b0..b1).contains(&b) {
                out.insert(a, b);
            }
        }
        out
    }

    pub fn from_json(n: usize, json: &str) -> Result<Relation, serde_json::Error> {
        let raw: RelationJson = serde_json::from_str(json)?;
        Ok(Relation::from_pairs(n, raw.pairs))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RelationJson {
            pairs: self.pairs().collect(),
        })
        .expect("relation serialization")
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct RelationJson {
    pairs: Vec<(World, World)>,
}
