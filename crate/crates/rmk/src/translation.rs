//! Standard translation into first-order logic over the signature
//! { R, P0, P1, ..., = }, a Tarskian evaluator on finite models, and a
//! textual FOL form with a parser inverting it.
//!
//! Variables are numeric: variable 0 prints as `x`, variable n >= 1 as
//! `y{n-1}`. The translator allocates bound variables from a monotone
//! counter, so nothing is ever captured under nesting.
//!
//! Text grammar (lowest to highest precedence; `->` is right-associative):
//!
//! ```text
//! implies := or ("->" implies)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | ("forall" | "exists") VAR "." unary | atom
//! atom    := "(" implies ")" | "P" NUM "(" VAR ")"
//!          | "R" "(" VAR "," VAR ")" | VAR "=" VAR
//! ```

use crate::kripke::{KripkeModel, World};
use crate::semantics::satisfies;
use crate::syntax::{Formula, UnaryOp};
use std::collections::{BTreeSet, HashMap};
use thiserror::Error;

pub type Var = u32;

pub fn var_name(v: Var) -> String {
    if v == 0 {
        "x".to_string()
    } else {
        format!("y{}", v - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FolFormula {
    Pred(u32, Var),
    Rel(Var, Var),
    Eq(Var, Var),
    Not(Box<FolFormula>),
    And(Box<FolFormula>, Box<FolFormula>),
    Or(Box<FolFormula>, Box<FolFormula>),
    Implies(Box<FolFormula>, Box<FolFormula>),
    Forall(Var, Box<FolFormula>),
    Exists(Var, Box<FolFormula>),
}

impl FolFormula {
    // builder matching the other connectives; `ops::Not` fits poorly here
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: FolFormula) -> FolFormula {
        FolFormula::Not(Box::new(a))
    }

    pub fn and(a: FolFormula, b: FolFormula) -> FolFormula {
        FolFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: FolFormula, b: FolFormula) -> FolFormula {
        FolFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: FolFormula, b: FolFormula) -> FolFormula {
        FolFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: Var, a: FolFormula) -> FolFormula {
        FolFormula::Forall(v, Box::new(a))
    }

    pub fn exists(v: Var, a: FolFormula) -> FolFormula {
        FolFormula::Exists(v, Box::new(a))
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<Var>) {
        match self {
            FolFormula::Pred(_, v) => {
                out.insert(*v);
            }
            FolFormula::Rel(a, b) | FolFormula::Eq(a, b) => {
                out.insert(*a);
                out.insert(*b);
            }
            FolFormula::Not(a) => a.collect_free(out),
            FolFormula::And(a, b) | FolFormula::Or(a, b) | FolFormula::Implies(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            FolFormula::Forall(v, a) | FolFormula::Exists(v, a) => {
                let mut inner = BTreeSet::new();
                a.collect_free(&mut inner);
                inner.remove(v);
                out.extend(inner);
            }
        }
    }
}

fn alloc(fresh: &mut Var) -> Var {
    let v = *fresh;
    *fresh += 1;
    v
}

fn st(x: Var, phi: &Formula, fresh: &mut Var) -> FolFormula {
    match phi {
        Formula::Top => FolFormula::Eq(x, x),
        Formula::Bot => FolFormula::not(FolFormula::Eq(x, x)),
        Formula::Letter(k) => FolFormula::Pred(*k, x),
        Formula::And(a, b) => {
            let fa = st(x, a, fresh);
            FolFormula::and(fa, st(x, b, fresh))
        }
        Formula::Or(a, b) => {
            let fa = st(x, a, fresh);
            FolFormula::or(fa, st(x, b, fresh))
        }
        Formula::Unary(op, a) => match op {
            UnaryOp::Not => FolFormula::not(st(x, a, fresh)),
            UnaryOp::Box => {
                let y = alloc(fresh);
                FolFormula::forall(
                    y,
                    FolFormula::implies(FolFormula::Rel(x, y), st(y, a, fresh)),
                )
            }
            UnaryOp::Dia => {
                let y = alloc(fresh);
                FolFormula::exists(y, FolFormula::and(FolFormula::Rel(x, y), st(y, a, fresh)))
            }
            UnaryOp::Smile => {
                let y = alloc(fresh);
                FolFormula::exists(
                    y,
                    FolFormula::and(FolFormula::Rel(x, y), FolFormula::not(st(y, a, fresh))),
                )
            }
            UnaryOp::Frown => {
                let y = alloc(fresh);
                FolFormula::forall(
                    y,
                    FolFormula::implies(FolFormula::Rel(x, y), FolFormula::not(st(y, a, fresh))),
                )
            }
            UnaryOp::Con => {
                let at_x = FolFormula::not(st(x, a, fresh));
                let y = alloc(fresh);
                let all = FolFormula::forall(
                    y,
                    FolFormula::implies(FolFormula::Rel(x, y), st(y, a, fresh)),
                );
                FolFormula::or(at_x, all)
            }
            UnaryOp::Det => {
                let at_x = st(x, a, fresh);
                let y = alloc(fresh);
                let none = FolFormula::forall(
                    y,
                    FolFormula::implies(FolFormula::Rel(x, y), FolFormula::not(st(y, a, fresh))),
                );
                FolFormula::or(at_x, none)
            }
            UnaryOp::Inc => {
                let at_x = st(x, a, fresh);
                let y = alloc(fresh);
                let some = FolFormula::exists(
                    y,
                    FolFormula::and(FolFormula::Rel(x, y), FolFormula::not(st(y, a, fresh))),
                );
                FolFormula::and(at_x, some)
            }
            UnaryOp::Und => {
                let at_x = FolFormula::not(st(x, a, fresh));
                let y = alloc(fresh);
                let some =
                    FolFormula::exists(y, FolFormula::and(FolFormula::Rel(x, y), st(y, a, fresh)));
                FolFormula::and(at_x, some)
            }
        },
    }
}

/// Translates a modal formula to a FOL formula whose only free variable is
/// `x`. Bound variables are allocated from a counter starting above `x`.
pub fn standard_translation(x: Var, phi: &Formula) -> FolFormula {
    let mut fresh = x + 1;
    st(x, phi, &mut fresh)
}

pub type Assignment = HashMap<Var, World>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unassigned free variable `{}`", var_name(*.0))]
    Unassigned(Var),
}

/// Tarskian evaluation: Pred is valuation membership, Rel is an edge test,
/// quantifiers range over all worlds.
pub fn fol_eval(m: &KripkeModel, alpha: &FolFormula, a: &Assignment) -> Result<bool, EvalError> {
    let lookup = |v: Var| a.get(&v).copied().ok_or(EvalError::Unassigned(v));
    match alpha {
        FolFormula::Pred(k, v) => Ok(m.world_has_letter(lookup(*v)?, *k)),
        FolFormula::Rel(v1, v2) => Ok(m.has_edge(lookup(*v1)?, lookup(*v2)?)),
        FolFormula::Eq(v1, v2) => Ok(lookup(*v1)? == lookup(*v2)?),
        FolFormula::Not(f) => Ok(!fol_eval(m, f, a)?),
        FolFormula::And(f, g) => Ok(fol_eval(m, f, a)? && fol_eval(m, g, a)?),
        FolFormula::Or(f, g) => Ok(fol_eval(m, f, a)? || fol_eval(m, g, a)?),
        FolFormula::Implies(f, g) => Ok(!fol_eval(m, f, a)? || fol_eval(m, g, a)?),
        FolFormula::Forall(v, f) => {
            for w in m.worlds() {
                let mut b = a.clone();
                b.insert(*v, w);
                if !fol_eval(m, f, &b)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        FolFormula::Exists(v, f) => {
            for w in m.worlds() {
                let mut b = a.clone();
                b.insert(*v, w);
                if fol_eval(m, f, &b)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// True iff modal satisfaction and translated FOL evaluation agree at
/// (m, w) for phi.
pub fn st_check(m: &KripkeModel, w: World, phi: &Formula) -> bool {
    let alpha = standard_translation(0, phi);
    let a = Assignment::from([(0, w)]);
    satisfies(m, w, phi) == fol_eval(m, &alpha, &a).expect("x is the only free variable")
}

// Precedence: Implies < Or < And < prefix (Not / quantifiers) < atom.
fn fol_prec(alpha: &FolFormula) -> u8 {
    match alpha {
        FolFormula::Implies(..) => 1,
        FolFormula::Or(..) => 2,
        FolFormula::And(..) => 3,
        FolFormula::Not(..) | FolFormula::Forall(..) | FolFormula::Exists(..) => 4,
        _ => 5,
    }
}

fn print_fol_at(alpha: &FolFormula, min: u8, out: &mut String) {
    let need_parens = fol_prec(alpha) < min;
    if need_parens {
        out.push('(');
    }
    match alpha {
        FolFormula::Pred(k, v) => {
            out.push_str(&format!("P{}({})", k, var_name(*v)));
        }
        FolFormula::Rel(a, b) => {
            out.push_str(&format!("R({},{})", var_name(*a), var_name(*b)));
        }
        FolFormula::Eq(a, b) => {
            out.push_str(&format!("{} = {}", var_name(*a), var_name(*b)));
        }
        FolFormula::Not(f) => {
            out.push('!');
            print_fol_at(f, 5, out);
        }
        FolFormula::And(f, g) => {
            print_fol_at(f, 3, out);
            out.push_str(" & ");
            print_fol_at(g, 4, out);
        }
        FolFormula::Or(f, g) => {
            print_fol_at(f, 2, out);
            out.push_str(" | ");
            print_fol_at(g, 3, out);
        }
        FolFormula::Implies(f, g) => {
            print_fol_at(f, 2, out);
            out.push_str(" -> ");
            print_fol_at(g, 1, out);
        }
        FolFormula::Forall(v, f) | FolFormula::Exists(v, f) => {
            let kw = if matches!(alpha, FolFormula::Forall(..)) {
                "forall"
            } else {
                "exists"
            };
            out.push_str(kw);
            out.push(' ');
            out.push_str(&var_name(*v));
            out.push_str(". (");
            print_fol_at(f, 0, out);
            out.push(')');
        }
    }
    if need_parens {
        out.push(')');
    }
}

/// Deterministic textual form; `parse_fol` inverts it.
pub fn print_fol(alpha: &FolFormula) -> String {
    let mut out = String::new();
    print_fol_at(alpha, 0, &mut out);
    out
}

impl std::fmt::Display for FolFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print_fol(self))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("FOL syntax error at byte {offset}: expected {expected}")]
pub struct FolParseError {
    pub offset: usize,
    pub expected: String,
}

struct FolParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> FolParser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn err(&self, expected: &str) -> FolParseError {
        FolParseError {
            offset: self.pos,
            expected: expected.to_string(),
        }
    }

    fn number(&mut self) -> Result<u32, FolParseError> {
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.err("number"))
    }

    fn var(&mut self) -> Result<Var, FolParseError> {
        self.skip_ws();
        if self.eat("x") {
            Ok(0)
        } else if self.eat("y") {
            Ok(self.number()? + 1)
        } else {
            Err(self.err("variable"))
        }
    }

    fn implies(&mut self) -> Result<FolFormula, FolParseError> {
        let lhs = self.or()?;
        if self.eat("->") {
            let rhs = self.implies()?;
            Ok(FolFormula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<FolFormula, FolParseError> {
        let mut acc = self.and()?;
        while {
            self.skip_ws();
            // don't confuse `|` with nothing else here; `->` starts with `-`
            self.src[self.pos..].starts_with('|')
        } {
            self.pos += 1;
            acc = FolFormula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<FolFormula, FolParseError> {
        let mut acc = self.unary()?;
        while self.eat("&") {
            acc = FolFormula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<FolFormula, FolParseError> {
        self.skip_ws();
        if self.eat("!") {
            return Ok(FolFormula::not(self.unary()?));
        }
        for (kw, is_forall) in [("forall", true), ("exists", false)] {
            if self.src[self.pos..].starts_with(kw) {
                self.pos += kw.len();
                let v = self.var()?;
                if !self.eat(".") {
                    return Err(self.err("`.`"));
                }
                let body = self.unary()?;
                return Ok(if is_forall {
                    FolFormula::forall(v, body)
                } else {
                    FolFormula::exists(v, body)
                });
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<FolFormula, FolParseError> {
        self.skip_ws();
        if self.eat("(") {
            let inner = self.implies()?;
            if !self.eat(")") {
                return Err(self.err("`)`"));
            }
            return Ok(inner);
        }
        if self.eat("P") {
            let k = self.number()?;
            if !self.eat("(") {
                return Err(self.err("`(`"));
            }
            let v = self.var()?;
            if !self.eat(")") {
                return Err(self.err("`)`"));
            }
            return Ok(FolFormula::Pred(k, v));
        }
        if self.eat("R") {
            if !self.eat("(") {
                return Err(self.err("`(`"));
            }
            let a = self.var()?;
            if !self.eat(",") {
                return Err(self.err("`,`"));
            }
            let b = self.var()?;
            if !self.eat(")") {
                return Err(self.err("`)`"));
            }
            return Ok(FolFormula::Rel(a, b));
        }
        let a = self.var()?;
        if !self.eat("=") {
            return Err(self.err("`=`"));
        }
        let b = self.var()?;
        Ok(FolFormula::Eq(a, b))
    }
}

pub fn parse_fol(text: &str) -> Result<FolFormula, FolParseError> {
    let mut p = FolParser { src: text, pos: 0 };
    let alpha = p.implies()?;
    p.skip_ws();
    if p.pos == p.src.len() {
        Ok(alpha)
    } else {
        Err(p.err("end of input"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kripke::random_model;
    use crate::rng::SplitMix64;
    use crate::syntax::parse_formula;

    fn tr(x: Var, s: &str) -> FolFormula {
        standard_translation(x, &parse_formula(s).unwrap())
    }

    #[test]
    fn translation_examples() {
        assert_eq!(print_fol(&tr(0, "T")), "x = x");
        assert_eq!(
            print_fol(&tr(0, "smile p0")),
            "exists y0. (R(x,y0) & !P0(y0))"
        );
        assert_eq!(
            print_fol(&tr(0, "frown p1")),
            "forall y0. (R(x,y0) -> !P1(y0))"
        );
        assert_eq!(
            print_fol(&tr(0, "con (smile p0)")),
            "!(exists y0. (R(x,y0) & !P0(y0))) \
             | forall y1. (R(x,y1) -> exists y2. (R(y1,y2) & !P0(y2)))"
        );
    }

    #[test]
    fn free_variable_contract() {
        for s in [
            "p0",
            "T",
            "con (smile p0)",
            "det p1 & und (p0 | inc p2)",
            "not box p0",
        ] {
            let alpha = tr(0, s);
            assert_eq!(alpha.free_vars(), BTreeSet::from([0]), "{s}");
        }
    }

    #[test]
    fn eval_examples() {
        let m = KripkeModel::new(4, [(0, 2), (1, 3)], [(0, [1, 2, 3].into())]).unwrap();
        let a = Assignment::from([(0, 1usize)]);
        assert!(fol_eval(&m, &parse_fol("x = x").unwrap(), &a).unwrap());
        assert!(fol_eval(&m, &parse_fol("P0(x)").unwrap(), &a).unwrap());

        // world with no successors validates the empty-box encoding
        let m = KripkeModel::new(2, [(0, 0)], []).unwrap();
        let at_v = Assignment::from([(0, 1usize)]);
        let box_bot = parse_fol("forall y0. (R(x,y0) -> !(y0 = y0))").unwrap();
        assert!(fol_eval(&m, &box_bot, &at_v).unwrap());
        let at_w = Assignment::from([(0, 0usize)]);
        assert!(!fol_eval(&m, &box_bot, &at_w).unwrap());
    }

    #[test]
    fn unassigned_variable_is_an_error() {
        let m = KripkeModel::new(1, [], []).unwrap();
        let err = fol_eval(&m, &parse_fol("P0(x)").unwrap(), &Assignment::new()).unwrap_err();
        assert_eq!(err, EvalError::Unassigned(0));
    }

    #[test]
    fn st_check_spot_cases() {
        let m = KripkeModel::new(3, [(0, 2)], []).unwrap();
        assert!(st_check(&m, 0, &parse_formula("smile p0").unwrap()));
        assert!(st_check(&m, 0, &parse_formula("F").unwrap()));
    }

    #[test]
    fn st_check_random_triples() {
        let mut rng = SplitMix64::new(5);
        for trial in 0..300 {
            let n = 1 + rng.below(5) as usize;
            let m = random_model(n, 2, 0.4, 0.5, 1000 + trial);
            let phi = crate::lab::random_formula(
                &mut rng,
                &"smile,frown,con,det,inc,und".parse().unwrap(),
                2,
                4,
            );
            for w in m.worlds() {
                assert!(st_check(&m, w, &phi), "{} at {w}", phi);
            }
        }
    }

    #[test]
    fn fol_round_trip_random() {
        let mut rng = SplitMix64::new(77);
        for _ in 0..100 {
            let alpha = random_fol(&mut rng, 4);
            let text = print_fol(&alpha);
            assert_eq!(parse_fol(&text).unwrap(), alpha, "{text}");
        }
    }

    fn random_fol(rng: &mut SplitMix64, depth: usize) -> FolFormula {
        let atom = |rng: &mut SplitMix64| match rng.below(3) {
            0 => FolFormula::Pred(rng.below(3) as u32, rng.below(4) as Var),
            1 => FolFormula::Rel(rng.below(4) as Var, rng.below(4) as Var),
            _ => FolFormula::Eq(rng.below(4) as Var, rng.below(4) as Var),
        };
        if depth == 0 {
            return atom(rng);
        }
        match rng.below(7) {
            0 => atom(rng),
            1 => FolFormula::not(random_fol(rng, depth - 1)),
            2 => FolFormula::and(random_fol(rng, depth - 1), random_fol(rng, depth - 1)),
            3 => FolFormula::or(random_fol(rng, depth - 1), random_fol(rng, depth - 1)),
            4 => FolFormula::implies(random_fol(rng, depth - 1), random_fol(rng, depth - 1)),
            5 => FolFormula::forall(rng.below(4) as Var, random_fol(rng, depth - 1)),
            _ => FolFormula::exists(rng.below(4) as Var, random_fol(rng, depth - 1)),
        }
    }
}
