//! Formula AST, similarity types, parser and pretty-printer.
//!
//! Concrete syntax uses ASCII operator names in place of the circle glyphs:
//! `smile` (paraconsistent negation), `frown` (paracomplete negation),
//! `con` (consistency), `det` (determinedness), `inc` (inconsistency),
//! `und` (undeterminedness), plus the classical `not`, `box`, `dia`.
//! Precedence: unary > `&` > `|`; binary operators are left-associative.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnaryOp {
    Not,
    Box,
    Dia,
    Smile,
    Frown,
    Con,
    Det,
    Inc,
    Und,
}

pub const ALL_OPS: [UnaryOp; 9] = [
    UnaryOp::Not,
    UnaryOp::Box,
    UnaryOp::Dia,
    UnaryOp::Smile,
    UnaryOp::Frown,
    UnaryOp::Con,
    UnaryOp::Det,
    UnaryOp::Inc,
    UnaryOp::Und,
];

/// The six restoration-style operators.
pub const RESTORATIVE_OPS: [UnaryOp; 6] = [
    UnaryOp::Smile,
    UnaryOp::Frown,
    UnaryOp::Con,
    UnaryOp::Det,
    UnaryOp::Inc,
    UnaryOp::Und,
];

impl UnaryOp {
    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Not => "not",
            UnaryOp::Box => "box",
            UnaryOp::Dia => "dia",
            UnaryOp::Smile => "smile",
            UnaryOp::Frown => "frown",
            UnaryOp::Con => "con",
            UnaryOp::Det => "det",
            UnaryOp::Inc => "inc",
            UnaryOp::Und => "und",
        }
    }

    pub fn from_name(name: &str) -> Option<UnaryOp> {
        ALL_OPS.iter().copied().find(|op| op.name() == name)
    }

    pub fn is_restorative(self) -> bool {
        RESTORATIVE_OPS.contains(&self)
    }
}

impl fmt::Display for UnaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of unary operators fixing a modal language.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilarityType {
    ops: BTreeSet<UnaryOp>,
}

impl SimilarityType {
    pub fn empty() -> Self {
        SimilarityType::default()
    }

    pub fn of(ops: impl IntoIterator<Item = UnaryOp>) -> Self {
        SimilarityType {
            ops: ops.into_iter().collect(),
        }
    }

    pub fn contains(&self, op: UnaryOp) -> bool {
        self.ops.contains(&op)
    }

    pub fn insert(&mut self, op: UnaryOp) {
        self.ops.insert(op);
    }

    pub fn iter(&self) -> impl Iterator<Item = UnaryOp> + '_ {
        self.ops.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn is_subset(&self, other: &SimilarityType) -> bool {
        self.ops.is_subset(&other.ops)
    }

    /// True iff all operators are among the six restoration-style ones.
    pub fn is_restorative(&self) -> bool {
        self.ops.iter().all(|op| op.is_restorative())
    }

    /// True iff the type is `{not}` plus a restorative set.
    pub fn is_classical_restorative(&self) -> bool {
        self.contains(UnaryOp::Not)
            && self
                .ops
                .iter()
                .all(|&op| op == UnaryOp::Not || op.is_restorative())
    }

    /// The restorative part, with `not` (and anything else) stripped.
    pub fn restorative_part(&self) -> SimilarityType {
        SimilarityType::of(self.ops.iter().copied().filter(|op| op.is_restorative()))
    }

    pub fn with(&self, op: UnaryOp) -> SimilarityType {
        let mut out = self.clone();
        out.insert(op);
        out
    }
}

impl fmt::Display for SimilarityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.ops.iter().map(|op| op.name()).collect();
        f.write_str(&names.join(","))
    }
}

impl FromStr for SimilarityType {
    type Err = ParseError;

    /// Parses a comma-separated operator list; the empty string is the
    /// empty (positive-fragment) similarity type.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut ops = BTreeSet::new();
        for part in s.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let op = UnaryOp::from_name(part).ok_or_else(|| ParseError {
                offset: 0,
                expected: vec!["operator name".into()],
                found: part.to_string(),
            })?;
            ops.insert(op);
        }
        Ok(SimilarityType { ops })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bot,
    Letter(u32),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Unary(UnaryOp, Box<Formula>),
}

impl Formula {
    pub fn letter(k: u32) -> Formula {
        Formula::Letter(k)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn unary(op: UnaryOp, a: Formula) -> Formula {
        Formula::Unary(op, Box::new(a))
    }

    /// Conjunction of a list; the empty conjunction is `T`.
    pub fn conj(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::Top,
            _ => {
                let mut acc = parts.remove(0);
                for p in parts {
                    acc = Formula::and(acc, p);
                }
                acc
            }
        }
    }

    /// Disjunction of a list; the empty disjunction is `F`.
    pub fn disj(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::Bot,
            _ => {
                let mut acc = parts.remove(0);
                for p in parts {
                    acc = Formula::or(acc, p);
                }
                acc
            }
        }
    }

    /// Nesting depth of unary operators.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Letter(_) => 0,
            Formula::And(a, b) | Formula::Or(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Unary(_, a) => 1 + a.modal_depth(),
        }
    }

    pub fn letters(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Top | Formula::Bot => {}
            Formula::Letter(k) => {
                out.insert(*k);
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_letters(out);
                b.collect_letters(out);
            }
            Formula::Unary(_, a) => a.collect_letters(out),
        }
    }

    /// True iff every unary operator occurring in the formula is in `lambda`.
    pub fn in_language(&self, lambda: &SimilarityType) -> bool {
        match self {
            Formula::Top | Formula::Bot | Formula::Letter(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.in_language(lambda) && b.in_language(lambda)
            }
            Formula::Unary(op, a) => lambda.contains(*op) && a.in_language(lambda),
        }
    }

    pub fn ops(&self) -> SimilarityType {
        let mut out = SimilarityType::empty();
        self.collect_ops(&mut out);
        out
    }

    fn collect_ops(&self, out: &mut SimilarityType) {
        match self {
            Formula::Top | Formula::Bot | Formula::Letter(_) => {}
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_ops(out);
                b.collect_ops(out);
            }
            Formula::Unary(op, a) => {
                out.insert(*op);
                a.collect_ops(out);
            }
        }
    }
}

// Precedence levels for printing: Or < And < Unary < atom.
fn prec(phi: &Formula) -> u8 {
    match phi {
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        Formula::Unary(..) => 3,
        _ => 4,
    }
}

fn print_at(phi: &Formula, min: u8, out: &mut String) {
    let p = prec(phi);
    let need_parens = p < min;
    if need_parens {
        out.push('(');
    }
    match phi {
        Formula::Top => out.push('T'),
        Formula::Bot => out.push('F'),
        Formula::Letter(k) => {
            out.push('p');
            out.push_str(&k.to_string());
        }
        Formula::And(a, b) => {
            print_at(a, 2, out);
            out.push_str(" & ");
            print_at(b, 3, out);
        }
        Formula::Or(a, b) => {
            print_at(a, 1, out);
            out.push_str(" | ");
            print_at(b, 2, out);
        }
        Formula::Unary(op, a) => {
            out.push_str(op.name());
            out.push(' ');
            print_at(a, 3, out);
        }
    }
    if need_parens {
        out.push(')');
    }
}

/// Minimal-parenthesis textual form; `parse_formula` inverts it.
pub fn print_formula(phi: &Formula) -> String {
    let mut out = String::new();
    print_at(phi, 0, &mut out);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: expected {}, found `{found}`", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn err(&self, expected: &[&str]) -> ParseError {
        let found = match self.peek_char() {
            Some(c) => c.to_string(),
            None => "end of input".to_string(),
        };
        ParseError {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found,
        }
    }

    fn word(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek_char() {
            if c.is_ascii_alphanumeric() {
                self.pos += 1;
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conj()?;
        loop {
            self.skip_ws();
            if self.peek_char() == Some('|') {
                self.pos += 1;
                let rhs = self.conj()?;
                acc = Formula::or(acc, rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            if self.peek_char() == Some('&') {
                self.pos += 1;
                let rhs = self.unary()?;
                acc = Formula::and(acc, rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        match self.peek_char() {
            Some('T') => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some('F') => {
                self.pos += 1;
                Ok(Formula::Bot)
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.disj()?;
                self.skip_ws();
                if self.peek_char() == Some(')') {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    Err(self.err(&["`)`"]))
                }
            }
            Some(c) if c.is_ascii_lowercase() => {
                let start = self.pos;
                let w = self.word();
                if let Some(rest) = w.strip_prefix('p') {
                    if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                        let k: u32 = rest.parse().map_err(|_| ParseError {
                            offset: start,
                            expected: vec!["letter index".into()],
                            found: w.to_string(),
                        })?;
                        return Ok(Formula::Letter(k));
                    }
                }
                match UnaryOp::from_name(w) {
                    Some(op) => {
                        let arg = self.unary()?;
                        Ok(Formula::unary(op, arg))
                    }
                    None => Err(ParseError {
                        offset: start,
                        expected: vec!["operator name".into(), "letter".into()],
                        found: w.to_string(),
                    }),
                }
            }
            _ => Err(self.err(&["`T`", "`F`", "letter", "operator", "`(`"])),
        }
    }
}

/// Parses the grammar `disj := conj ("|" conj)*`, `conj := unary ("&" unary)*`,
/// `unary := OP unary | atom`. Whitespace-insensitive.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text);
    let phi = p.disj()?;
    p.skip_ws();
    if p.pos == p.src.len() {
        Ok(phi)
    } else {
        Err(p.err(&["end of input"]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Formula as F;

    #[test]
    fn parse_atoms() {
        assert_eq!(parse_formula("T").unwrap(), F::Top);
        assert_eq!(parse_formula("F").unwrap(), F::Bot);
        assert_eq!(parse_formula("p12").unwrap(), F::Letter(12));
    }

    #[test]
    fn parse_grammar_forced() {
        let phi = parse_formula("con (p0 & smile p1)").unwrap();
        assert_eq!(
            phi,
            F::unary(
                UnaryOp::Con,
                F::and(F::Letter(0), F::unary(UnaryOp::Smile, F::Letter(1)))
            )
        );
    }

    #[test]
    fn precedence_and_over_or() {
        let phi = parse_formula("p0 & p1 | p2").unwrap();
        assert_eq!(phi, F::or(F::and(F::Letter(0), F::Letter(1)), F::Letter(2)));
    }

    #[test]
    fn left_associativity() {
        let phi = parse_formula("p0 & p1 & p2").unwrap();
        assert_eq!(
            phi,
            F::and(F::and(F::Letter(0), F::Letter(1)), F::Letter(2))
        );
    }

    #[test]
    fn print_examples() {
        assert_eq!(print_formula(&F::Top), "T");
        assert_eq!(
            print_formula(&F::unary(UnaryOp::Smile, F::Letter(3))),
            "smile p3"
        );
        assert_eq!(
            print_formula(&F::and(F::or(F::Letter(0), F::Letter(1)), F::Letter(2))),
            "(p0 | p1) & p2"
        );
    }

    #[test]
    fn print_right_nested_needs_parens() {
        let phi = F::and(F::Letter(0), F::and(F::Letter(1), F::Letter(2)));
        let s = print_formula(&phi);
        assert_eq!(s, "p0 & (p1 & p2)");
        assert_eq!(parse_formula(&s).unwrap(), phi);
    }

    #[test]
    fn syntax_error_has_offset() {
        let err = parse_formula("p0 & ").unwrap_err();
        assert_eq!(err.offset, 5);
        let err = parse_formula("blah p0").unwrap_err();
        assert_eq!(err.offset, 0);
        assert_eq!(err.found, "blah");
    }

    #[test]
    fn modal_depth_cases() {
        assert_eq!(parse_formula("p0").unwrap().modal_depth(), 0);
        assert_eq!(parse_formula("smile (con p0)").unwrap().modal_depth(), 2);
        assert_eq!(parse_formula("p0 & frown p1").unwrap().modal_depth(), 1);
    }

    #[test]
    fn in_language_cases() {
        let smile_p0 = parse_formula("smile p0").unwrap();
        assert!(!smile_p0.in_language(&SimilarityType::of([UnaryOp::Con])));
        assert!(parse_formula("p0 & p1")
            .unwrap()
            .in_language(&SimilarityType::empty()));
        let both = SimilarityType::of([UnaryOp::Smile, UnaryOp::Con]);
        assert!(parse_formula("con (smile p0)").unwrap().in_language(&both));
    }

    #[test]
    fn similarity_type_classes() {
        let restorative: SimilarityType = "smile,frown,con,det,inc,und".parse().unwrap();
        assert!(restorative.is_restorative());
        assert!(!restorative.is_classical_restorative());
        let classical: SimilarityType = "not,con,inc".parse().unwrap();
        assert!(!classical.is_restorative());
        assert!(classical.is_classical_restorative());
        let boxy: SimilarityType = "box,dia".parse().unwrap();
        assert!(!boxy.is_restorative());
        assert!(!boxy.is_classical_restorative());
    }
}
