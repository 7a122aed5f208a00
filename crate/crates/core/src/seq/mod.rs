//! Closed-form sequences `f : {1, 2, 3, ..} -> Q`.
//!
//! Convolution is `(f ∗ g)(n) = Σ_{k=1}^{n-1} f(k) g(n-k)`, empty at `n = 1`,
//! so that `n ∗ 1 = (n² - n)/2` and `(1/n) ∗ 1 = H_{n-1}`. Harmonic sums use
//! the same lower index: `Harmonic(p)(n) = Σ_{k=1}^{n-1} 1/k^p`.

mod normal;
mod render;

use std::fmt;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::exec::Exec;
use crate::rational::{self, Rat};

pub(crate) use normal::{Atom, NormalForm};

/// Exponent of a reciprocal power `1/n^p`; higher powers would need
/// polylogarithms beyond `Li₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RecipPow {
    One,
    Two,
}

impl RecipPow {
    pub fn exponent(self) -> u32 {
        match self {
            RecipPow::One => 1,
            RecipPow::Two => 2,
        }
    }

    pub fn from_exponent(p: u32) -> Option<Self> {
        match p {
            1 => Some(RecipPow::One),
            2 => Some(RecipPow::Two),
            _ => None,
        }
    }

    pub(crate) fn atom(self, ones: u32) -> Atom {
        match self {
            RecipPow::One => Atom { l: 1, d: 0, ones },
            RecipPow::Two => Atom { l: 0, d: 1, ones },
        }
    }

    fn at(self, n: usize) -> Rat {
        Rat::one() / rational::pow(&rational::int(n as i64), self.exponent())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SeqExpr {
    Const(Rat),
    /// `n^k`.
    Mono(u32),
    /// `1/n^p`.
    Recip(RecipPow),
    /// `Σ_{k=1}^{n-1} 1/k^p`.
    Harmonic(RecipPow),
    /// `C(n-1, j)`, the `(j+1)`-fold convolution power of `1`.
    Binom(u32),
    Scale(Rat, Box<SeqExpr>),
    Sum(Vec<SeqExpr>),
    Conv(Box<SeqExpr>, Box<SeqExpr>),
}

impl SeqExpr {
    pub fn constant(c: Rat) -> Self {
        SeqExpr::Const(c)
    }

    pub fn one() -> Self {
        SeqExpr::Const(Rat::one())
    }

    pub fn zero() -> Self {
        SeqExpr::Const(Rat::zero())
    }

    /// The identity sequence `n`.
    pub fn n() -> Self {
        SeqExpr::Mono(1)
    }

    pub fn scale(c: Rat, inner: SeqExpr) -> Self {
        SeqExpr::Scale(c, Box::new(inner))
    }

    pub fn conv(a: SeqExpr, b: SeqExpr) -> Self {
        SeqExpr::Conv(Box::new(a), Box::new(b))
    }

    pub fn is_zero(&self) -> bool {
        self.normal_form().is_zero()
    }

    pub(crate) fn normal_form(&self) -> NormalForm {
        NormalForm::from_tree(self)
    }

    /// Canonical tree: a constant, then monomials by descending degree, then
    /// reciprocal, harmonic and convolution terms, without nested sums or unit
    /// scales. Unmatched convolutions stay as explicit `Conv` nodes.
    pub fn simplify(&self) -> SeqExpr {
        self.normal_form().to_tree()
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.simplify()
    }

    /// Exact value at `n >= 1`. Panics at `n = 0`.
    pub fn eval(&self, n: usize) -> Rat {
        assert!(n >= 1, "sequences are indexed from n = 1");
        match self {
            SeqExpr::Const(c) => c.clone(),
            SeqExpr::Mono(k) => rational::pow(&rational::int(n as i64), *k),
            SeqExpr::Recip(p) => p.at(n),
            SeqExpr::Harmonic(p) => (1..n).map(|k| p.at(k)).sum(),
            SeqExpr::Binom(j) => rational::binomial(n as u64 - 1, *j as u64),
            SeqExpr::Scale(c, inner) => c * inner.eval(n),
            SeqExpr::Sum(children) => children.iter().map(|c| c.eval(n)).sum(),
            SeqExpr::Conv(a, b) => {
                let (a, b) = (a.eval_range(n - 1), b.eval_range(n - 1));
                (1..n).map(|k| &a[k - 1] * &b[n - k - 1]).sum()
            }
        }
    }

    /// `[f(1), .., f(n_max)]`.
    pub fn eval_range(&self, n_max: usize) -> Vec<Rat> {
        self.eval_range_with(n_max, Exec::default())
    }

    pub fn eval_range_with(&self, n_max: usize, exec: Exec) -> Vec<Rat> {
        match self {
            SeqExpr::Const(c) => vec![c.clone(); n_max],
            SeqExpr::Mono(_) | SeqExpr::Recip(_) | SeqExpr::Binom(_) => {
                exec.map_range(1, n_max, |n| self.eval(n))
            }
            SeqExpr::Harmonic(p) => {
                let mut out = Vec::with_capacity(n_max);
                let mut acc = Rat::zero();
                for n in 1..=n_max {
                    if n > 1 {
                        acc = rational::add(&acc, &p.at(n - 1));
                    }
                    out.push(acc.clone());
                }
                out
            }
            SeqExpr::Scale(c, inner) => inner
                .eval_range_with(n_max, exec)
                .into_iter()
                .map(|v| c * v)
                .collect(),
            SeqExpr::Sum(children) => {
                let mut acc = vec![Rat::zero(); n_max];
                for child in children {
                    for (slot, v) in acc.iter_mut().zip(child.eval_range_with(n_max, exec)) {
                        *slot = rational::add(slot, &v);
                    }
                }
                acc
            }
            SeqExpr::Conv(a, b) => {
                let inner = n_max.saturating_sub(1);
                // g ∗ C(n-1, j) is j + 1 shifted prefix sums of g.
                let ones = |e: &SeqExpr| match e {
                    SeqExpr::Binom(j) => Some(*j + 1),
                    _ => None,
                };
                if let Some((g, j)) = ones(b).map(|j| (a, j)).or_else(|| ones(a).map(|j| (b, j))) {
                    let mut values = g.eval_range_with(n_max, exec);
                    for _ in 0..j {
                        let mut acc = Rat::zero();
                        for v in values.iter_mut() {
                            let next = rational::add(&acc, v);
                            *v = std::mem::replace(&mut acc, next);
                        }
                    }
                    return values;
                }
                let (a, b) = (a.eval_range_with(inner, exec), b.eval_range_with(inner, exec));
                exec.map_range(1, n_max, |n| {
                    (1..n).map(|k| &a[k - 1] * &b[n - k - 1]).sum()
                })
            }
        }
    }

    /// `(M, d)` such that `|f(n)| <= M n^d` for all `n >= 1`.
    pub fn growth_bound(&self) -> (f64, u32) {
        self.normal_form().growth_bound()
    }

    /// Pointwise product with `n`, when it stays in the class.
    pub fn times_n(&self) -> Result<SeqExpr> {
        Ok(self.normal_form().times_n()?.to_tree())
    }

    pub fn to_text(&self) -> String {
        render::text(&self.normal_form())
    }

    pub fn to_latex(&self) -> String {
        render::latex(&self.normal_form())
    }
}

/// Convolution followed by simplification. Polynomials convolve in closed
/// form through the `C(n-1, j)` basis; a reciprocal against `1` becomes a
/// harmonic sum; everything else remains an explicit `Conv` node.
pub fn convolve(f: &SeqExpr, g: &SeqExpr) -> SeqExpr {
    SeqExpr::conv(f.clone(), g.clone()).simplify()
}

/// `Δ^order f` with `Δf(n) = f(n+1) - f(n)`.
pub fn forward_difference(f: &SeqExpr, order: u32) -> Result<SeqExpr> {
    let mut nf = f.normal_form();
    for _ in 0..order {
        nf = nf.difference()?;
    }
    Ok(nf.to_tree())
}

pub fn linear_combine(terms: &[(Rat, SeqExpr)]) -> SeqExpr {
    SeqExpr::Sum(
        terms
            .iter()
            .map(|(c, e)| SeqExpr::scale(c.clone(), e.clone()))
            .collect(),
    )
    .simplify()
}

impl fmt::Display for SeqExpr {
    /// Raw tree rendering; see [`SeqExpr::to_text`] for the simplified form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqExpr::Const(c) => write!(f, "{c}"),
            SeqExpr::Mono(1) => f.write_str("n"),
            SeqExpr::Mono(k) => write!(f, "n^{k}"),
            SeqExpr::Recip(RecipPow::One) => f.write_str("1/n"),
            SeqExpr::Recip(RecipPow::Two) => f.write_str("1/n^2"),
            SeqExpr::Harmonic(RecipPow::One) => f.write_str("sum_{k=1}^{n-1} 1/k"),
            SeqExpr::Harmonic(RecipPow::Two) => f.write_str("sum_{k=1}^{n-1} 1/k^2"),
            SeqExpr::Binom(j) => write!(f, "C(n-1, {j})"),
            SeqExpr::Scale(c, inner) => write!(f, "{c}*({inner})"),
            SeqExpr::Sum(children) if children.is_empty() => f.write_str("0"),
            SeqExpr::Sum(children) => {
                for (i, child) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{child}")?;
                }
                Ok(())
            }
            SeqExpr::Conv(a, b) => write!(f, "conv({a}, {b})"),
        }
    }
}
