//! Plain-text and LaTeX rendering of simplified sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::normal::{Atom, NormalForm};
use super::RecipPow;
use crate::rational::Rat;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Style {
    Text,
    Latex,
}

pub(super) fn text(nf: &NormalForm) -> String {
    join(pieces(nf, Style::Text), Style::Text)
}

pub(super) fn latex(nf: &NormalForm) -> String {
    join(pieces(nf, Style::Latex), Style::Latex)
}

/// `(negative, magnitude)` pairs.
fn pieces(nf: &NormalForm, style: Style) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let poly = nf.polynomial();
    let c0 = poly.coeff(0);
    if !c0.is_zero() {
        out.push((c0.is_negative(), rat_str(&c0.abs(), style)));
    }
    let higher: Vec<(usize, Rat)> = poly
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect();
    if !higher.is_empty() {
        push_polynomial(&mut out, &higher, style);
    }
    for (atom, c) in &nf.atoms {
        out.push((c.is_negative(), atom_str(atom, &c.abs(), style)));
    }
    out
}

/// Non-constant polynomial terms over their common denominator, e.g.
/// `(n^2 - n)/2`.
fn push_polynomial(out: &mut Vec<(bool, String)>, terms: &[(usize, Rat)], style: Style) {
    let denom = terms
        .iter()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let ints: Vec<(usize, BigInt)> = terms
        .iter()
        .map(|(k, c)| (*k, (c * Rat::from_integer(denom.clone())).to_integer()))
        .collect();
    if denom.is_one() {
        for (k, a) in &ints {
            out.push((a.is_negative(), monomial_str(&a.abs(), *k, style)));
        }
        return;
    }
    let negative = ints[0].1.is_negative();
    let flip = |a: &BigInt| if negative { -a } else { a.clone() };
    let mut body = String::new();
    for (i, (k, a)) in ints.iter().enumerate() {
        let a = flip(a);
        let term = monomial_str(&a.abs(), *k, style);
        match (i, a.is_negative(), style) {
            (0, _, _) => body.push_str(&term),
            (_, true, Style::Text) => body.push_str(&format!(" - {term}")),
            (_, false, Style::Text) => body.push_str(&format!(" + {term}")),
            (_, true, Style::Latex) => body.push_str(&format!("-{term}")),
            (_, false, Style::Latex) => body.push_str(&format!("+{term}")),
        }
    }
    let grouped = match style {
        Style::Latex => format!("\\frac{{{body}}}{{{denom}}}"),
        Style::Text if ints.len() == 1 => format!("{body}/{denom}"),
        Style::Text => format!("({body})/{denom}"),
    };
    out.push((negative, grouped));
}

fn monomial_str(coeff: &BigInt, k: usize, style: Style) -> String {
    let c = if coeff.is_one() {
        String::new()
    } else {
        coeff.to_string()
    };
    match (k, style) {
        (1, _) => format!("{c}n"),
        (_, Style::Text) => format!("{c}n^{k}"),
        (_, Style::Latex) => format!("{c}n^{{{k}}}"),
    }
}

fn rat_str(r: &Rat, style: Style) -> String {
    match style {
        Style::Latex if !r.is_integer() => format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom()),
        _ => r.to_string(),
    }
}

fn recip_str(p: RecipPow, numer: &BigInt, denom: &BigInt, style: Style) -> String {
    let power = match (p, style) {
        (RecipPow::One, _) => "n".to_string(),
        (RecipPow::Two, Style::Text) => "n^2".to_string(),
        (RecipPow::Two, Style::Latex) => "n^{2}".to_string(),
    };
    match style {
        Style::Latex if denom.is_one() => format!("\\frac{{{numer}}}{{{power}}}"),
        Style::Latex => format!("\\frac{{{numer}}}{{{denom}{power}}}"),
        Style::Text if denom.is_one() => format!("{numer}/{power}"),
        Style::Text => format!("{numer}/({denom}{power})"),
    }
}

fn atom_str(atom: &Atom, coeff: &Rat, style: Style) -> String {
    if let (Some(p), 0) = (atom.single_recip(), atom.ones) {
        return recip_str(p, coeff.numer(), coeff.denom(), style);
    }
    let body = match (atom.single_recip(), atom.ones, style) {
        (Some(RecipPow::One), 1, Style::Text) => "sum_{k=1}^{n-1} 1/k".to_string(),
        (Some(RecipPow::Two), 1, Style::Text) => "sum_{k=1}^{n-1} 1/k^2".to_string(),
        (Some(RecipPow::One), 1, Style::Latex) => "\\sum_{k=1}^{n-1}\\frac{1}{k}".to_string(),
        (Some(RecipPow::Two), 1, Style::Latex) => {
            "\\sum_{k=1}^{n-1}\\frac{1}{k^{2}}".to_string()
        }
        _ => conv_str(atom, style),
    };
    if coeff.is_one() {
        return body;
    }
    match style {
        Style::Text if coeff.is_integer() => format!("{coeff}*{body}"),
        Style::Text => format!("({coeff})*{body}"),
        Style::Latex => format!("{}{body}", rat_str(coeff, style)),
    }
}

fn conv_str(atom: &Atom, style: Style) -> String {
    let one = BigInt::one();
    let mut factors: Vec<String> = atom
        .recips()
        .map(|p| recip_str(p, &one, &one, style))
        .collect();
    if atom.ones > 0 {
        let j = atom.ones - 1;
        factors.push(match style {
            Style::Text => format!("C(n-1, {j})"),
            Style::Latex => format!("\\binom{{n-1}}{{{j}}}"),
        });
    }
    match style {
        Style::Text => format!("conv({})", factors.join(", ")),
        Style::Latex => format!("\\left({}\\right)", factors.join("\\ast ")),
    }
}

fn join(pieces: Vec<(bool, String)>, style: Style) -> String {
    if pieces.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (negative, body)) in pieces.into_iter().enumerate() {
        let sep = match (i, negative, style) {
            (0, true, _) => "-",
            (0, false, _) => "",
            (_, true, Style::Text) => " - ",
            (_, false, Style::Text) => " + ",
            (_, true, Style::Latex) => "-",
            (_, false, Style::Latex) => "+",
        };
        out.push_str(sep);
        out.push_str(&body);
    }
    out
}
