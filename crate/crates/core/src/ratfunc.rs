//! The field of rational functions in `x = e^s` over the rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::rational::Rat;

/// `numerator / denominator` in lowest terms with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Panics on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = (num.exact_div(&g), den.exact_div(&g));
        let inv = Rat::one() / den.leading().unwrap();
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    /// `c / (x - 1)^order`.
    pub fn pole_at_one(c: Rat, order: u32) -> Self {
        Self::new(Poly::constant(c), Poly::x_minus_one().pow(order))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    pub fn is_proper(&self) -> bool {
        self.num.degree().is_none_or(|n| Some(n) < self.den.degree())
    }

    /// `d` when the denominator is exactly `(x - 1)^d`.
    pub fn pole_order_at_one(&self) -> Option<u32> {
        let d = self.den.degree()? as u32;
        (Poly::x_minus_one().pow(d) == self.den).then_some(d)
    }

    /// Splits into polynomial part and proper remainder.
    pub fn split_polynomial(&self) -> (Poly, RatFunc) {
        let (q, r) = self.num.div_rem(&self.den);
        (
            q,
            RatFunc {
                num: r,
                den: self.den.clone(),
            },
        )
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, exp: u32) -> Self {
        RatFunc {
            num: self.num.pow(exp),
            den: self.den.pow(exp),
        }
    }

    /// d/dx.
    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(num, self.den.pow(2))
    }

    /// d/ds under `x = e^s`, i.e. `x * d/dx`.
    pub fn derivative_s(&self) -> Self {
        &Self::x() * &self.derivative()
    }

    pub fn eval(&self, at: &Rat) -> Option<Rat> {
        let d = self.den.eval(at);
        (!d.is_zero()).then(|| self.num.eval(at) / d)
    }

    /// Value at `x = e^s`. Both polynomials are expanded around `x = 1` and
    /// evaluated at `t = e^s - 1 = expm1(s)`, which avoids the cancellation
    /// an expanded `(x - 1)^d` suffers near `s = 0`.
    pub fn eval_at_exp(&self, s: f64) -> f64 {
        let t = s.exp_m1();
        self.num.shift_to_one().eval_f64(t) / self.den.shift_to_one().eval_f64(t)
    }

    /// Hermite reduction: returns `(g, h)` with `g' + h = self` (d/dx), where
    /// `h` is proper with a square-free denominator. `self` has a rational
    /// antiderivative exactly when `h` is zero; `h` is unique and linear in
    /// `self`.
    pub fn hermite_reduce(&self) -> (RatFunc, RatFunc) {
        let (poly, proper) = self.split_polynomial();
        let mut g = RatFunc::from_poly(poly.integral());
        let mut a = proper.num;
        let mut d = proper.den;
        let parts = d.squarefree();
        for (idx, v) in parts.iter().enumerate().skip(1) {
            let i = idx as u32 + 1;
            if v.is_constant() {
                continue;
            }
            let u = d.exact_div(&v.pow(i));
            let uv_prime = &u * &v.derivative();
            for j in (1..i).rev() {
                let rhs = a.scale(&(-Rat::one() / Rat::from_integer(j.into())));
                let (b, c) = Poly::diophantine(&uv_prime, v, &rhs)
                    .expect("square-free factor is coprime to its cofactor");
                g = &g + &RatFunc::new(b.clone(), v.pow(j));
                a = &c.scale(&-Rat::from_integer(j.into())) - &(&u * &b.derivative());
            }
            d = &u * v;
        }
        (g, RatFunc::new(a, d))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    /// Panics when dividing by zero.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFunc {
    /// Denominators that are a pure power of `x - 1` print factored.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::sexpr::write_term(f, self, "")
    }
}
