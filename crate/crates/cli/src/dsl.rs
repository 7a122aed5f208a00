//! The equation language.
//!
//! ```text
//! equation := [ "n" ] diff "f" "=" rhs ( ";" ic )*
//! diff     := "D" | "D2"
//! rhs      := [sign] term { sign term }
//! term     := [ rat "*" ] ( "n" [ "^" int ] | int "/n" [ "^2" ] | rat )
//! ic       := ( "f" | "Df" ) "(" int ")" "=" [sign] rat
//! rat      := int [ "/" int ]
//! sign     := "+" | "-" | "−"
//! ```
//!
//! Whitespace is ignored between tokens. Missing initial conditions parse
//! and are then reported as a [`SemanticError`] naming what is missing.

use std::collections::BTreeSet;

use delta_laplace::{
    linear_combine, Coefficient, DifferenceEquation, IcKind, InitialCondition, Rat, RecipPow,
    SeqExpr,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Highest power of `n` accepted on a right-hand side.
const MAX_POWER: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at byte {offset}: expected {}, found {found}", expected_list(.expected))]
pub struct ParseError {
    pub offset: usize,
    pub expected: BTreeSet<&'static str>,
    pub found: String,
}

fn expected_list(expected: &BTreeSet<&'static str>) -> String {
    let items: Vec<&str> = expected.iter().copied().collect();
    match items.as_slice() {
        [one] => (*one).to_string(),
        _ => format!("one of {}", items.join(", ")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemanticError {
    #[error("missing initial condition {0}")]
    MissingInitialCondition(String),
    #[error("duplicate initial condition {0}")]
    DuplicateInitialCondition(String),
    #[error("too many initial conditions: order {order} takes {order}, got {got}")]
    TooManyInitialConditions { order: u32, got: usize },
    #[error("unsupported difference order {0} (use D or D2)")]
    UnsupportedOrder(String),
    #[error("the n coefficient is only supported with D, not D2")]
    UnsupportedCoefficient,
    #[error("unsupported term {0}")]
    UnsupportedTerm(String),
    #[error("invalid index {0}: indices start at 1")]
    InvalidIndex(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DslError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Semantic(#[from] SemanticError),
}

pub fn parse_equation(text: &str) -> Result<DifferenceEquation, DslError> {
    let mut p = Parser::new(text);
    let coefficient = if p.eat('n') {
        Coefficient::N
    } else {
        Coefficient::One
    };
    let order = p.diff()?;
    p.expect('f', "f")?;
    p.expect('=', "=")?;
    let rhs = p.rhs(&[";"])?;
    let mut ics = Vec::new();
    while p.eat(';') {
        ics.push(p.ic()?);
    }
    p.end(&[";"])?;
    check(coefficient, order, rhs, ics)
}

/// A right-hand-side expression on its own, e.g. `"1/n^2"` or `"3*n - 1/2"`.
pub fn parse_sequence(text: &str) -> Result<SeqExpr, DslError> {
    let mut p = Parser::new(text);
    let seq = p.rhs(&[])?;
    p.end(&[])?;
    Ok(seq)
}

fn check(
    coefficient: Coefficient,
    order: u32,
    rhs: SeqExpr,
    ics: Vec<InitialCondition>,
) -> Result<DifferenceEquation, DslError> {
    if coefficient == Coefficient::N && order != 1 {
        return Err(SemanticError::UnsupportedCoefficient.into());
    }
    for (i, ic) in ics.iter().enumerate() {
        if ics[..i].iter().any(|o| o.kind == ic.kind && o.index == ic.index) {
            return Err(SemanticError::DuplicateInitialCondition(ic_name(ic.kind, ic.index)).into());
        }
    }
    if ics.len() > order as usize {
        return Err(SemanticError::TooManyInitialConditions {
            order,
            got: ics.len(),
        }
        .into());
    }
    if ics.len() < order as usize {
        return Err(SemanticError::MissingInitialCondition(missing_ic(&ics)).into());
    }
    DifferenceEquation::new(coefficient, order, rhs, ics)
        .map_err(|e| SemanticError::Invalid(e.to_string()).into())
}

/// Names the condition to add, anchoring at `n = 1` by default.
fn missing_ic(present: &[InitialCondition]) -> String {
    let has = |kind| present.iter().any(|ic| ic.kind == kind && ic.index == 1);
    if !has(IcKind::Value) {
        ic_name(IcKind::Value, 1)
    } else {
        ic_name(IcKind::FirstDifference, 1)
    }
}

fn ic_name(kind: IcKind, index: usize) -> String {
    match kind {
        IcKind::Value => format!("f({index})"),
        IcKind::FirstDifference => format!("Df({index})"),
    }
}

/// Prints an equation in the DSL; parsing the output gives back an equal
/// equation whenever the right-hand side is built from constants, powers
/// of `n`, `1/n` and `1/n^2`.
pub fn format_equation(eq: &DifferenceEquation) -> String {
    let mut out = String::new();
    if eq.coefficient == Coefficient::N {
        out.push_str("n ");
    }
    out.push_str(if eq.order == 2 { "D2 f = " } else { "D f = " });
    out.push_str(&format_rhs(&eq.rhs));
    for ic in &eq.ics {
        out.push_str(&format!(" ; {} = {}", ic_name(ic.kind, ic.index), ic.value));
    }
    out
}

fn format_rhs(rhs: &SeqExpr) -> String {
    let terms = split_terms(&rhs.simplify());
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (c, unit)) in terms.iter().enumerate() {
        let sep = match (i, c.is_negative()) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        };
        out.push_str(sep);
        let c = c.abs();
        let body = match unit {
            SeqExpr::Const(_) => {
                out.push_str(&c.to_string());
                continue;
            }
            SeqExpr::Mono(1) => "n".to_string(),
            SeqExpr::Mono(k) => format!("n^{k}"),
            SeqExpr::Recip(RecipPow::One) => "1/n".to_string(),
            SeqExpr::Recip(RecipPow::Two) => "1/n^2".to_string(),
            other => other.to_text(),
        };
        if c.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&format!("{c}*{body}"));
        }
    }
    out
}

/// `(coefficient, unit term)` pairs of a simplified sequence, where a
/// constant `c` is reported as `(c, Const(1))`.
pub fn split_terms(seq: &SeqExpr) -> Vec<(Rat, SeqExpr)> {
    let children = match seq {
        SeqExpr::Sum(children) => children.clone(),
        other if other.is_zero() => Vec::new(),
        other => vec![other.clone()],
    };
    children
        .into_iter()
        .map(|term| match term {
            SeqExpr::Const(c) => (c, SeqExpr::one()),
            SeqExpr::Scale(c, inner) => (c, *inner),
            other => (Rat::one(), other),
        })
        .collect()
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

enum Factor {
    Number(Rat),
    Unit(Rat, SeqExpr),
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn error(&mut self, expected: &[&'static str]) -> ParseError {
        let found = match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".into(),
        };
        ParseError {
            offset: self.pos,
            expected: expected.iter().copied().collect(),
            found,
        }
    }

    fn expect(&mut self, c: char, name: &'static str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn end(&mut self, alternatives: &[&'static str]) -> Result<(), ParseError> {
        if self.peek().is_none() {
            return Ok(());
        }
        let mut expected = alternatives.to_vec();
        expected.push("end of input");
        Err(self.error(&expected))
    }

    fn integer(&mut self) -> Result<(usize, BigInt), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.text[start..]
            .bytes()
            .take_while(u8::is_ascii_digit)
            .count();
        if digits == 0 {
            return Err(self.error(&["integer"]));
        }
        self.pos += digits;
        let value = self.text[start..self.pos]
            .parse()
            .expect("ASCII digits form an integer");
        Ok((start, value))
    }

    fn small(&mut self) -> Result<(usize, Option<u32>), ParseError> {
        let (at, v) = self.integer()?;
        Ok((at, v.to_u32()))
    }

    fn sign(&mut self) -> Option<bool> {
        match self.peek() {
            Some('+') => {
                self.pos += 1;
                Some(false)
            }
            Some(c @ ('-' | '−')) => {
                self.pos += c.len_utf8();
                Some(true)
            }
            _ => None,
        }
    }

    fn diff(&mut self) -> Result<u32, DslError> {
        if !self.eat('D') {
            let expected: &[&str] = if self.pos == 0 { &["n", "D", "D2"] } else { &["D", "D2"] };
            return Err(self.error(expected).into());
        }
        // The order digits must follow "D" directly.
        if !self.text[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            return Ok(1);
        }
        let (_, order) = self.integer()?;
        match order.to_u32() {
            Some(2) => Ok(2),
            _ => Err(SemanticError::UnsupportedOrder(format!("D{order}")).into()),
        }
    }

    fn rat(&mut self) -> Result<Rat, ParseError> {
        let (_, p) = self.integer()?;
        if self.eat('/') {
            let (at, q) = self.integer()?;
            if q.is_zero() {
                return Err(ParseError {
                    offset: at,
                    expected: ["nonzero denominator"].into_iter().collect(),
                    found: "0".into(),
                });
            }
            return Ok(Rat::new(p, q));
        }
        Ok(Rat::from_integer(p))
    }

    fn rhs(&mut self, followers: &[&'static str]) -> Result<SeqExpr, DslError> {
        let mut terms = Vec::new();
        let mut negative = self.sign().unwrap_or(false);
        loop {
            let (c, unit) = self.term()?;
            terms.push((if negative { -c } else { c }, unit));
            match self.sign() {
                Some(neg) => negative = neg,
                None => break,
            }
        }
        if self.peek().is_some() && !followers.iter().any(|f| self.text[self.pos..].starts_with(f)) {
            let mut expected = vec!["+", "-"];
            expected.extend_from_slice(followers);
            expected.push("end of input");
            return Err(self.error(&expected).into());
        }
        Ok(linear_combine(&terms))
    }

    fn term(&mut self) -> Result<(Rat, SeqExpr), DslError> {
        match self.factor()? {
            Factor::Unit(c, unit) => Ok((c, unit)),
            Factor::Number(c) if self.eat('*') => match self.factor()? {
                Factor::Unit(d, unit) => Ok((c * d, unit)),
                Factor::Number(d) => Ok((c * d, SeqExpr::one())),
            },
            Factor::Number(c) => Ok((c, SeqExpr::one())),
        }
    }

    fn factor(&mut self) -> Result<Factor, DslError> {
        if self.eat('n') {
            if !self.eat('^') {
                return Ok(Factor::Unit(Rat::one(), SeqExpr::n()));
            }
            let (at, k) = self.small()?;
            return match k {
                Some(k) if k <= MAX_POWER => Ok(Factor::Unit(Rat::one(), SeqExpr::Mono(k))),
                _ => Err(SemanticError::UnsupportedTerm(format!(
                    "n^{} (powers above {MAX_POWER} are not supported)",
                    &self.text[at..self.pos]
                ))
                .into()),
            };
        }
        if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            return Err(self.error(&["n", "integer"]).into());
        }
        let (_, p) = self.integer()?;
        if !self.eat('/') {
            return Ok(Factor::Number(Rat::from_integer(p)));
        }
        if self.eat('n') {
            let power = if self.eat('^') { self.small()?.1 } else { Some(1) };
            let c = Rat::from_integer(p);
            return match power.and_then(RecipPow::from_exponent) {
                Some(pow) => Ok(Factor::Unit(c, SeqExpr::Recip(pow))),
                None => Err(SemanticError::UnsupportedTerm(
                    "1/n^k is supported for k = 1, 2 only".into(),
                )
                .into()),
            };
        }
        let (at, q) = self.integer().map_err(|mut e| {
            e.expected.insert("n");
            e
        })?;
        if q.is_zero() {
            return Err(ParseError {
                offset: at,
                expected: ["nonzero denominator"].into_iter().collect(),
                found: "0".into(),
            }
            .into());
        }
        Ok(Factor::Number(Rat::new(p, q)))
    }

    fn ic(&mut self) -> Result<InitialCondition, DslError> {
        let kind = if self.eat('D') {
            self.expect('f', "f")?;
            IcKind::FirstDifference
        } else if self.eat('f') {
            IcKind::Value
        } else {
            return Err(self.error(&["f", "Df"]).into());
        };
        self.expect('(', "(")?;
        let (at, index) = self.integer()?;
        let index = match index.to_usize() {
            Some(i) if i >= 1 => i,
            _ => return Err(SemanticError::InvalidIndex(self.text[at..self.pos].to_string()).into()),
        };
        self.expect(')', ")")?;
        self.expect('=', "=")?;
        let negative = self.sign().unwrap_or(false);
        let value = self.rat()?;
        Ok(InitialCondition {
            kind,
            index,
            value: if negative { -value } else { value },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use delta_laplace::rational::{int, rat};

    #[test]
    fn grammar_examples() {
        let eq = parse_equation("D f = n ; f(1) = 1").unwrap();
        assert_eq!(eq.coefficient, Coefficient::One);
        assert_eq!(eq.order, 1);
        assert_eq!(eq.rhs, SeqExpr::n());
        assert_eq!(eq.ics, vec![InitialCondition::value(1, int(1))]);

        let eq = parse_equation("n D f = 1 ; f(2) = 2").unwrap();
        assert_eq!(eq.coefficient, Coefficient::N);
        assert_eq!(eq.rhs, SeqExpr::one());
        assert_eq!(eq.ics, vec![InitialCondition::value(2, int(2))]);

        let eq = parse_equation("D2 f = n ; f(1) = 1 ; Df(1) = 2").unwrap();
        assert_eq!(eq.order, 2);
        assert_eq!(eq.ics[1], InitialCondition::first_difference(1, int(2)));
    }

    #[test]
    fn whitespace_and_signs() {
        let spaced = parse_equation("D f = 3/2*n^2 − 1/n + 2/n^2 - 7 ; f(1) = -1/3").unwrap();
        let packed = parse_equation("Df=3/2*n^2-1/n+2/n^2-7;f(1)=-1/3").unwrap();
        assert_eq!(spaced, packed);
        assert_eq!(packed.ics[0].value, rat(-1, 3));
        assert_eq!(packed.rhs.eval(1), rat(3, 2) - int(1) + int(2) - int(7));
        assert_eq!(parse_sequence("-2*1/n").unwrap(), parse_sequence("-2/n").unwrap());
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let DslError::Parse(e) = parse_equation("D f = n ; f(1) = ").unwrap_err() else {
            panic!("expected a parse error");
        };
        assert_eq!(e.offset, 17);
        assert!(e.expected.contains("integer"));

        let DslError::Parse(e) = parse_equation("D g = n").unwrap_err() else {
            panic!("expected a parse error");
        };
        assert_eq!(e.offset, 2);
        assert_eq!(e.expected, ["f"].into_iter().collect());

        let DslError::Parse(e) = parse_equation("D f = n ) ; f(1) = 1").unwrap_err() else {
            panic!("expected a parse error");
        };
        assert_eq!(e.offset, 8);
        assert!(e.expected.contains(";"));
    }

    #[test]
    fn semantic_errors() {
        let missing = parse_equation("D f = n").unwrap_err();
        assert_eq!(missing, SemanticError::MissingInitialCondition("f(1)".into()).into());
        assert!(missing.to_string().contains("f(1)"));
        let missing = parse_equation("D2 f = n ; f(1) = 1").unwrap_err();
        assert!(missing.to_string().contains("Df(1)"));
        assert!(matches!(
            parse_equation("D3 f = n ; f(1) = 1"),
            Err(DslError::Semantic(SemanticError::UnsupportedOrder(_)))
        ));
        assert!(matches!(
            parse_equation("n D2 f = n ; f(1) = 1 ; f(2) = 1"),
            Err(DslError::Semantic(SemanticError::UnsupportedCoefficient))
        ));
        assert!(matches!(
            parse_equation("D2 f = n ; f(1) = 1 ; f(1) = 2"),
            Err(DslError::Semantic(SemanticError::DuplicateInitialCondition(_)))
        ));
        assert!(matches!(
            parse_equation("D f = 1/n^3 ; f(1) = 1"),
            Err(DslError::Semantic(SemanticError::UnsupportedTerm(_)))
        ));
        assert!(matches!(
            parse_equation("D f = n ; f(0) = 1"),
            Err(DslError::Semantic(SemanticError::InvalidIndex(_)))
        ));
    }

    #[test]
    fn printer_round_trips() {
        for text in [
            "D f = n ; f(1) = 1",
            "n D f = 1 ; f(2) = 2",
            "D2 f = n ; f(1) = 1 ; Df(1) = 2",
            "D f = -1/2*n^3 + 4 - 3/n^2 ; f(3) = -5/7",
            "D f = 0 ; f(1) = 0",
        ] {
            let eq = parse_equation(text).unwrap();
            let printed = format_equation(&eq);
            assert_eq!(parse_equation(&printed).unwrap(), eq, "{printed}");
        }
        let eq = parse_equation("D f = n ; f(1) = 1").unwrap();
        assert_eq!(format_equation(&eq), "D f = n ; f(1) = 1");
    }
}
