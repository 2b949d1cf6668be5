//! Restorative modal logics over finite Kripke models: satisfaction,
//! simulations and similarity, the definable-closure subsumption oracle,
//! distinguishing formulas, and the standard translation to first-order
//! logic, with randomized verification suites for the underlying theory.

pub mod kripke;
pub mod lab;
pub mod relation;
pub mod rng;
pub mod semantics;
pub mod simulation;
pub mod syntax;
pub mod translation;
pub mod trials;
