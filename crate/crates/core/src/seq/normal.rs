//! Normal form of the sequence class.
//!
//! A sequence is a polynomial in `n`, held in the basis `C(n-1, j)`, plus a
//! combination of convolution atoms `(1/n)^{∗l} ∗ (1/n²)^{∗d} ∗ 1^{∗ones}`.
//! Since `C(n-1, j) = 1^{∗(j+1)}`, convolution is exponent addition in both
//! parts (Vandermonde and hockey-stick identities), and `Δ` lowers `ones`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{RecipPow, SeqExpr};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{self, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Atom {
    pub l: u32,
    pub d: u32,
    pub ones: u32,
}

impl Atom {
    fn key(&self) -> (u32, u32, u32, u32) {
        (self.l + self.d, self.d, self.ones, self.l)
    }

    /// Number of convolution factors.
    pub fn factors(&self) -> u32 {
        self.l + self.d + self.ones
    }

    pub fn recips(&self) -> impl Iterator<Item = RecipPow> {
        std::iter::repeat_n(RecipPow::One, self.l as usize)
            .chain(std::iter::repeat_n(RecipPow::Two, self.d as usize))
    }

    /// `Some(p)` for the single-reciprocal atoms `1/n^p` and `H_p`.
    pub fn single_recip(&self) -> Option<RecipPow> {
        match (self.l, self.d) {
            (1, 0) => Some(RecipPow::One),
            (0, 1) => Some(RecipPow::Two),
            _ => None,
        }
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct NormalForm {
    /// Coefficient of `C(n-1, j)` at index `j`; no trailing zeros.
    pub binom: Vec<Rat>,
    pub atoms: BTreeMap<Atom, Rat>,
}

impl NormalForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut out = Self::zero();
        out.add_binom(0, c);
        out
    }

    pub fn atom(atom: Atom, c: Rat) -> Self {
        let mut out = Self::zero();
        out.add_atom(atom, c);
        out
    }

    pub fn add_binom(&mut self, j: usize, c: Rat) {
        if c.is_zero() {
            return;
        }
        if self.binom.len() <= j {
            self.binom.resize(j + 1, Rat::zero());
        }
        self.binom[j] += c;
        while self.binom.last().is_some_and(Zero::is_zero) {
            self.binom.pop();
        }
    }

    pub fn add_atom(&mut self, atom: Atom, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.atoms.entry(atom).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.atoms.remove(&atom);
        }
    }

    pub fn add(&mut self, other: &NormalForm) {
        for (j, c) in other.binom.iter().enumerate() {
            self.add_binom(j, c.clone());
        }
        for (a, c) in &other.atoms {
            self.add_atom(*a, c.clone());
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        NormalForm {
            binom: self.binom.iter().map(|b| b * c).collect(),
            atoms: self.atoms.iter().map(|(a, v)| (*a, v * c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.binom.is_empty() && self.atoms.is_empty()
    }

    pub fn from_tree(expr: &SeqExpr) -> Self {
        match expr {
            SeqExpr::Const(c) => Self::constant(c.clone()),
            SeqExpr::Mono(k) => Self::from_poly(&Poly::monomial(Rat::one(), *k as usize)),
            SeqExpr::Recip(p) => Self::atom(p.atom(0), Rat::one()),
            SeqExpr::Harmonic(p) => Self::atom(p.atom(1), Rat::one()),
            SeqExpr::Binom(j) => {
                let mut out = Self::zero();
                out.add_binom(*j as usize, Rat::one());
                out
            }
            SeqExpr::Scale(c, inner) => Self::from_tree(inner).scale(c),
            SeqExpr::Sum(children) => {
                let mut out = Self::zero();
                for child in children {
                    out.add(&Self::from_tree(child));
                }
                out
            }
            SeqExpr::Conv(a, b) => Self::from_tree(a).convolve(&Self::from_tree(b)),
        }
    }

    pub fn convolve(&self, other: &NormalForm) -> Self {
        let mut out = Self::zero();
        for (i, a) in self.binom.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.binom.iter().enumerate() {
                out.add_binom(i + j + 1, a * b);
            }
            for (atom, b) in &other.atoms {
                out.add_atom(shift_ones(atom, i as u32 + 1), a * b);
            }
        }
        for (atom, a) in &self.atoms {
            for (j, b) in other.binom.iter().enumerate() {
                out.add_atom(shift_ones(atom, j as u32 + 1), a * b);
            }
            for (other_atom, b) in &other.atoms {
                let merged = Atom {
                    l: atom.l + other_atom.l,
                    d: atom.d + other_atom.d,
                    ones: atom.ones + other_atom.ones,
                };
                out.add_atom(merged, a * b);
            }
        }
        out
    }

    /// `Δ`, exact on the class except for atoms with no `1` factor.
    pub fn difference(&self) -> Result<Self> {
        let mut out = Self::zero();
        for (j, c) in self.binom.iter().enumerate().skip(1) {
            out.add_binom(j - 1, c.clone());
        }
        for (atom, c) in &self.atoms {
            if atom.ones == 0 {
                let expr = Self::atom(*atom, Rat::one()).to_tree();
                return Err(Error::UnsupportedDifference(expr.to_string()));
            }
            out.add_atom(atom.with_ones(atom.ones - 1), c.clone());
        }
        Ok(out)
    }

    /// Pointwise product with `n`.
    pub fn times_n(&self) -> Result<Self> {
        let mut out = Self::zero();
        // n C(n-1, j) = (j+1) C(n-1, j+1) + (j+1) C(n-1, j)
        for (j, c) in self.binom.iter().enumerate() {
            let w = c * rational::int(j as i64 + 1);
            out.add_binom(j + 1, w.clone());
            out.add_binom(j, w);
        }
        for (atom, c) in &self.atoms {
            match (atom.single_recip(), atom.ones) {
                (Some(RecipPow::One), 0) => out.add_binom(0, c.clone()),
                (Some(RecipPow::Two), 0) => out.add_atom(RecipPow::One.atom(0), c.clone()),
                _ => {
                    let expr = Self::atom(*atom, Rat::one()).to_tree();
                    return Err(Error::UnsupportedSequence(format!("n*({expr})")));
                }
            }
        }
        Ok(out)
    }

    pub fn from_poly(p: &Poly) -> Self {
        // Newton forward differences at n = 1 give the C(n-1, j) coefficients.
        let Some(deg) = p.degree() else {
            return Self::zero();
        };
        let mut values: Vec<Rat> = (1..=deg as i64 + 1)
            .map(|n| p.eval(&rational::int(n)))
            .collect();
        let mut out = Self::zero();
        for j in 0..=deg {
            out.add_binom(j, values[0].clone());
            values = values.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        out
    }

    /// The polynomial part in the monomial basis of `n`.
    pub fn polynomial(&self) -> Poly {
        let mut acc = Poly::zero();
        for (j, c) in self.binom.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &binomial_poly(j as u32).scale(c);
        }
        acc
    }

    pub fn to_tree(&self) -> SeqExpr {
        let mut terms = Vec::new();
        let poly = self.polynomial();
        let c0 = poly.coeff(0);
        if !c0.is_zero() {
            terms.push(SeqExpr::Const(c0));
        }
        for (k, c) in poly.coeffs().iter().enumerate().skip(1).rev() {
            if !c.is_zero() {
                terms.push(scaled(c, SeqExpr::Mono(k as u32)));
            }
        }
        for (atom, c) in &self.atoms {
            terms.push(scaled(c, atom_tree(atom)));
        }
        match terms.len() {
            0 => SeqExpr::Const(Rat::zero()),
            1 => terms.pop().unwrap(),
            _ => SeqExpr::Sum(terms),
        }
    }

    /// `(M, d)` with `|f(n)| <= M n^d` for every `n >= 1`.
    pub fn growth_bound(&self) -> (f64, u32) {
        let poly = self.polynomial();
        let mut bound = 0.0;
        let mut degree = poly.degree().unwrap_or(0) as u32;
        for c in poly.coeffs() {
            bound += rational::to_f64(&c.abs());
        }
        // A convolution of r factors each bounded by 1 is at most n^{r-1}.
        for (atom, c) in &self.atoms {
            bound += rational::to_f64(&c.abs());
            degree = degree.max(atom.factors() - 1);
        }
        (bound, degree)
    }
}

impl Atom {
    fn with_ones(mut self, ones: u32) -> Self {
        self.ones = ones;
        self
    }
}

fn shift_ones(atom: &Atom, by: u32) -> Atom {
    Atom {
        ones: atom.ones + by,
        ..*atom
    }
}

fn scaled(c: &Rat, expr: SeqExpr) -> SeqExpr {
    if c.is_one() {
        expr
    } else {
        SeqExpr::Scale(c.clone(), Box::new(expr))
    }
}

fn atom_tree(atom: &Atom) -> SeqExpr {
    match (atom.single_recip(), atom.ones) {
        (Some(p), 0) => return SeqExpr::Recip(p),
        (Some(p), 1) => return SeqExpr::Harmonic(p),
        _ => {}
    }
    let chain = atom
        .recips()
        .map(SeqExpr::Recip)
        .reduce(|acc, r| SeqExpr::Conv(Box::new(acc), Box::new(r)))
        .expect("atoms carry at least one reciprocal factor");
    if atom.ones == 0 {
        chain
    } else {
        SeqExpr::Conv(Box::new(chain), Box::new(SeqExpr::Binom(atom.ones - 1)))
    }
}

/// `C(n-1, j)` expanded in powers of `n`.
pub(crate) fn binomial_poly(j: u32) -> Poly {
    let mut acc = Poly::one();
    for i in 0..j {
        acc = &acc * &Poly::new(vec![-rational::int(i as i64 + 1), Rat::one()]);
    }
    acc.scale(&(Rat::one() / Rat::from_integer(rational::factorial(j as u64))))
}
