//! Transform-domain expressions.
//!
//! Every image the solver meets is a finite sum `Σ r(x) L^a D^b` with
//! `x = e^s`, rational coefficients `r`, and the two transcendental
//! generators
//!
//! * `L = s - ln(e^s - 1)`, the image of `1/n`,
//! * `D = Li₂(e^{-s}) = Σ e^{-sn}/n²`, the image of `1/n²`.
//!
//! The set is closed under `d/ds` because `dx/ds = x`,
//! `dL/ds = -1/(x - 1)` and `dD/ds = -L`. Products of generators only arise
//! from convolving two reciprocal sequences; the antiderivative is restricted
//! to the linear span of `{1, L, D}`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{write_poly, Poly};
use crate::ratfunc::RatFunc;
use crate::rational::{self, Rat};

/// `L^l D^d`, ordered by total degree and then with `L` first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub l: u32,
    pub d: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { l: 0, d: 0 };
    pub const L: Monomial = Monomial { l: 1, d: 0 };
    pub const D: Monomial = Monomial { l: 0, d: 1 };

    pub fn degree(self) -> u32 {
        self.l + self.d
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.d).cmp(&(other.degree(), other.d))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial {
            l: self.l + rhs.l,
            d: self.d + rhs.d,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("L", self.l), ("D", self.d)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Canonical sum of `r(x) · monomial` with no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SExpr {
    terms: BTreeMap<Monomial, RatFunc>,
}

impl SExpr {
    pub fn zero() -> Self {
        SExpr::default()
    }

    pub fn term(mono: Monomial, coeff: RatFunc) -> Self {
        let mut out = SExpr::zero();
        out.accumulate(mono, coeff);
        out
    }

    pub fn rational(r: RatFunc) -> Self {
        Self::term(Monomial::ONE, r)
    }

    /// `L = s - ln(e^s - 1)`.
    pub fn l() -> Self {
        Self::term(Monomial::L, RatFunc::one())
    }

    /// `D = Li₂(e^{-s})`.
    pub fn d() -> Self {
        Self::term(Monomial::D, RatFunc::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, mono: Monomial) -> RatFunc {
        self.terms.get(&mono).cloned().unwrap_or_else(RatFunc::zero)
    }

    /// Coefficient of `1`.
    pub fn rational_part(&self) -> RatFunc {
        self.coefficient(Monomial::ONE)
    }

    pub fn l_coefficient(&self) -> RatFunc {
        self.coefficient(Monomial::L)
    }

    pub fn d_coefficient(&self) -> RatFunc {
        self.coefficient(Monomial::D)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &RatFunc)> {
        self.terms.iter().map(|(m, r)| (*m, r))
    }

    /// True when no product of generators occurs, i.e. the expression lies
    /// in `span{1, L, D}`.
    pub fn is_linear(&self) -> bool {
        self.terms.keys().all(|m| m.degree() <= 1)
    }

    fn accumulate(&mut self, mono: Monomial, coeff: RatFunc) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&mono) {
            Some(prev) => {
                let sum = &prev + &coeff;
                if !sum.is_zero() {
                    self.terms.insert(mono, sum);
                }
            }
            None => {
                self.terms.insert(mono, coeff);
            }
        }
    }

    pub fn mul_rat(&self, r: &RatFunc) -> Self {
        let mut out = SExpr::zero();
        for (m, c) in &self.terms {
            out.accumulate(*m, c * r);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        self.mul_rat(&RatFunc::constant(c.clone()))
    }

    /// d/ds.
    pub fn diff_s(&self) -> Self {
        let mut out = SExpr::zero();
        for (m, r) in &self.terms {
            out.accumulate(*m, r.derivative_s());
            if m.l > 0 {
                let lowered = Monomial { l: m.l - 1, d: m.d };
                let factor = RatFunc::pole_at_one(-rational::int(m.l as i64), 1);
                out.accumulate(lowered, r * &factor);
            }
            if m.d > 0 {
                let traded = Monomial {
                    l: m.l + 1,
                    d: m.d - 1,
                };
                out.accumulate(traded, r.scale(&-rational::int(m.d as i64)));
            }
        }
        out
    }

    /// An antiderivative in `s`, without the free constant.
    ///
    /// Writing `G = g0 + g1·L + g2·D`, `dG/ds = self` splits by generator into
    /// `X g2 = f2`, `X g1 = f1 + g2`, `X g0 = f0 + g1/(x - 1)` with
    /// `X = x d/dx`. Each level is integrated by Hermite reduction; the
    /// constant parts of `g2` and `g1` are the only freedom and are chosen to
    /// cancel the logarithmic remainder of the level below. Anything left over
    /// needs generators outside the span.
    pub fn antiderivative_s(&self) -> Result<SExpr> {
        let not_integrable = || Error::NotIntegrableInAlgebra(self.to_string());
        if !self.is_linear() {
            return Err(not_integrable());
        }
        let x = RatFunc::x();
        let x_integrate = |r: &RatFunc| (r / &x).hermite_reduce();

        let (g2_rational, rem2) = x_integrate(&self.d_coefficient());
        if !rem2.is_zero() {
            return Err(not_integrable());
        }

        // The remainder must be k/x, absorbed by the constant -k in g2.
        let (g1_rational, rem1) = x_integrate(&(&self.l_coefficient() + &g2_rational));
        let c2 = -(&rem1 * &x).as_constant().ok_or_else(not_integrable)?;
        let g2 = &g2_rational + &RatFunc::constant(c2);

        // Here it must be k/(x(x - 1)), absorbed by the constant -k in g1.
        let below = &g1_rational * &RatFunc::pole_at_one(Rat::one(), 1);
        let (g0, rem0) = x_integrate(&(&self.rational_part() + &below));
        let x_xm1 = RatFunc::from_poly(&Poly::x() * &Poly::x_minus_one());
        let c1 = -(&rem0 * &x_xm1).as_constant().ok_or_else(not_integrable)?;
        let g1 = &g1_rational + &RatFunc::constant(c1);

        let mut out = SExpr::zero();
        out.accumulate(Monomial::ONE, g0);
        out.accumulate(Monomial::L, g1);
        out.accumulate(Monomial::D, g2);
        debug_assert_eq!(&out.diff_s(), self);
        Ok(out)
    }

    /// Floating-point value at real `s > 0`.
    pub fn eval_numeric(&self, s: f64) -> f64 {
        let (l, d) = generators_at(s);
        self.terms
            .iter()
            .map(|(m, r)| r.eval_at_exp(s) * l.powi(m.l as i32) * d.powi(m.d as i32))
            .sum()
    }
}

/// `(L(s), D(s))`. `D` is summed until the geometric tail
/// `e^{-sN}/(1 - e^{-s})` drops below `1e-14`.
pub fn generators_at(s: f64) -> (f64, f64) {
    let l = s - s.exp_m1().ln();
    let q = (-s).exp();
    let denom = -(-s).exp_m1();
    let mut n = 1usize;
    while q.powi(n as i32) / denom >= 1e-14 {
        n += 1;
    }
    let d = (1..=n)
        .rev()
        .map(|k| (-s * k as f64).exp() / (k * k) as f64)
        .sum();
    (l, d)
}

/// `r = Σ a_j (x - 1)^{-j}` for proper `r` whose denominator is a power of
/// `x - 1`, returned as `(j, a_j)` pairs with `a_j ≠ 0`, ascending in `j`.
pub fn partial_fractions_at_one(r: &RatFunc) -> Result<Vec<(u32, Rat)>> {
    if !r.is_proper() {
        return Err(Error::ImproperRational(r.to_string()));
    }
    let order = r
        .pole_order_at_one()
        .ok_or_else(|| Error::UnsupportedPole(r.to_string()))?;
    // Rewriting x = (x - 1) + 1 turns the numerator into Σ b_i (x - 1)^i.
    let shifted = r.numerator().shift_to_one();
    Ok((1..=order)
        .map(|j| (j, shifted.coeff((order - j) as usize)))
        .filter(|(_, a)| !a.is_zero())
        .collect())
}

/// An image determined up to a free scalar `C`:
/// `particular + C · constant_coefficient`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SExprWithConstant {
    pub particular: SExpr,
    pub constant_coefficient: SExpr,
}

impl SExprWithConstant {
    pub fn instantiate(&self, c: &Rat) -> SExpr {
        &self.particular + &self.constant_coefficient.scale(c)
    }
}

impl fmt::Display for SExprWithConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + C*({})", self.particular, self.constant_coefficient)
    }
}

impl Add for &SExpr {
    type Output = SExpr;
    fn add(self, rhs: &SExpr) -> SExpr {
        let mut out = self.clone();
        for (m, r) in &rhs.terms {
            out.accumulate(*m, r.clone());
        }
        out
    }
}

impl Sub for &SExpr {
    type Output = SExpr;
    fn sub(self, rhs: &SExpr) -> SExpr {
        self + &(-rhs)
    }
}

impl Neg for &SExpr {
    type Output = SExpr;
    fn neg(self) -> SExpr {
        SExpr {
            terms: self.terms.iter().map(|(m, r)| (*m, -r)).collect(),
        }
    }
}

impl Mul for &SExpr {
    type Output = SExpr;
    fn mul(self, rhs: &SExpr) -> SExpr {
        let mut out = SExpr::zero();
        for (ma, ra) in &self.terms {
            for (mb, rb) in &rhs.terms {
                out.accumulate(*ma * *mb, ra * rb);
            }
        }
        out
    }
}

/// `numerator * monomial / denominator`, the numerator parenthesised when it
/// is not a single integer-coefficient term.
pub(crate) fn write_term(out: &mut impl fmt::Write, r: &RatFunc, mono: &str) -> fmt::Result {
    let num = r.numerator();
    let nonzero: Vec<_> = num.coeffs().iter().filter(|c| !c.is_zero()).collect();
    let simple = nonzero.len() == 1 && nonzero[0].is_integer();
    let mut head = String::new();
    if !mono.is_empty() && nonzero.len() == 1 && nonzero[0].abs().is_one() && num.degree() == Some(0) {
        if nonzero[0].is_negative() {
            head.push('-');
        }
        head.push_str(mono);
    } else {
        if simple || r.denominator().is_constant() && mono.is_empty() {
            write_poly(&mut head, num, "x")?;
        } else {
            head.push('(');
            write_poly(&mut head, num, "x")?;
            head.push(')');
        }
        if !mono.is_empty() {
            write!(head, "*{mono}")?;
        }
    }
    out.write_str(&head)?;
    let den = r.denominator();
    if den.is_constant() {
        return Ok(());
    }
    out.write_str("/")?;
    match r.pole_order_at_one() {
        Some(1) => out.write_str("(x - 1)"),
        Some(d) => write!(out, "(x - 1)^{d}"),
        None if den.coeffs().iter().filter(|c| !c.is_zero()).count() == 1 => {
            write_poly(out, den, "x")
        }
        None => {
            out.write_str("(")?;
            write_poly(out, den, "x")?;
            out.write_str(")")
        }
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, r)) in self.terms.iter().enumerate() {
            let mono = if *m == Monomial::ONE {
                String::new()
            } else {
                m.to_string()
            };
            let mut piece = String::new();
            write_term(&mut piece, r, &mono)?;
            match (i, piece.strip_prefix('-')) {
                (0, _) => f.write_str(&piece)?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {piece}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn pole(c: i64, order: u32) -> RatFunc {
        RatFunc::pole_at_one(int(c), order)
    }

    fn x_over(order: u32) -> RatFunc {
        &RatFunc::x() * &pole(1, order)
    }

    #[test]
    fn add_and_scale() {
        let a = SExpr::rational(pole(1, 1));
        assert_eq!(&a + &SExpr::zero(), a);
        assert_eq!(SExpr::l().mul_rat(&pole(1, 1)).to_string(), "L/(x - 1)");
        // 1/(x-1) + x/(x-1)^2 = (2x-1)/(x-1)^2
        let sum = &a + &SExpr::rational(x_over(2));
        let expected = RatFunc::new(Poly::from_ints(&[-1, 2]), Poly::x_minus_one().pow(2));
        assert_eq!(sum, SExpr::rational(expected));
        let e = std::f64::consts::E;
        assert!((sum.eval_numeric(1.0) - (2.0 * e - 1.0) / (e - 1.0).powi(2)).abs() < 1e-13);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn derivative_table() {
        assert_eq!(
            SExpr::rational(pole(1, 1)).diff_s(),
            SExpr::rational(-&x_over(2))
        );
        assert_eq!(SExpr::l().diff_s(), SExpr::rational(pole(-1, 1)));
        assert_eq!(SExpr::d().diff_s(), -&SExpr::l());
    }

    #[test]
    fn antiderivative_table() {
        assert_eq!(
            SExpr::rational(pole(-1, 1)).antiderivative_s().unwrap(),
            SExpr::l()
        );
        assert_eq!(SExpr::l().antiderivative_s().unwrap(), -&SExpr::d());
        assert_eq!(
            SExpr::rational(x_over(2)).antiderivative_s().unwrap(),
            SExpr::rational(pole(-1, 1))
        );
        assert!(SExpr::zero().antiderivative_s().unwrap().is_zero());
    }

    #[test]
    fn antiderivative_rejects_outside_span() {
        // L·x/(x-1) integrates to -L²/2 - D, which needs a product.
        let f = SExpr::l().mul_rat(&x_over(1));
        assert!(matches!(f.antiderivative_s(), Err(Error::NotIntegrableInAlgebra(_))));
        // ∫ 1 ds = s is not in the algebra.
        assert!(SExpr::rational(RatFunc::one()).antiderivative_s().is_err());
        assert!((&SExpr::l() * &SExpr::l()).antiderivative_s().is_err());
    }

    #[test]
    fn partial_fractions() {
        assert_eq!(
            partial_fractions_at_one(&x_over(2)).unwrap(),
            vec![(1, int(1)), (2, int(1))]
        );
        assert_eq!(
            partial_fractions_at_one(&x_over(3)).unwrap(),
            vec![(2, int(1)), (3, int(1))]
        );
        assert_eq!(partial_fractions_at_one(&pole(1, 1)).unwrap(), vec![(1, int(1))]);
        assert!(partial_fractions_at_one(&RatFunc::zero()).unwrap().is_empty());
        assert!(matches!(
            partial_fractions_at_one(&x_over(1)),
            Err(Error::ImproperRational(_))
        ));
        let off = RatFunc::new(Poly::one(), Poly::from_ints(&[-2, 1]));
        assert!(matches!(
            partial_fractions_at_one(&off),
            Err(Error::UnsupportedPole(_))
        ));
    }

    #[test]
    fn numeric_values() {
        let ln2 = std::f64::consts::LN_2;
        assert!((SExpr::rational(pole(1, 1)).eval_numeric(ln2) - 1.0).abs() < 1e-15);
        assert!((SExpr::l().eval_numeric(ln2) - ln2).abs() < 1e-15);
        // Σ 2^{-n}/n², 60 terms.
        let oracle: f64 = (1..=60).map(|n| 0.5f64.powi(n) / (n * n) as f64).sum();
        assert!((SExpr::d().eval_numeric(ln2) - oracle).abs() < 1e-15);
        assert!((oracle - 0.582_240_526_5).abs() < 1e-10);
    }

    #[test]
    fn display() {
        let image = &(&SExpr::rational(pole(1, 1)) + &SExpr::l().mul_rat(&pole(1, 1)))
            - &SExpr::d();
        assert_eq!(image.to_string(), "1/(x - 1) + L/(x - 1) - D");
        let lx = SExpr::l().mul_rat(&x_over(2));
        assert_eq!(lx.to_string(), "x*L/(x - 1)^2");
    }
}
