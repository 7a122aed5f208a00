//! The discrete Laplace transform `ℓ{f}(s) = Σ_{n≥1} e^{-sn} f(n)`, written
//! in `x = e^s`.
//!
//! Forward images come from the table `ℓ{1} = 1/(x-1)`, `ℓ{1/n} = L`,
//! `ℓ{1/n²} = D`, the rule `ℓ{n f} = -d/ds ℓ{f}` and the convolution theorem
//! `ℓ{f ∗ g} = ℓ{f} ℓ{g}`. The inverse is defined on images whose rational
//! coefficients only have poles at `x = 1`.

use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::rational::{self, Rat};
use crate::seq::{Atom, NormalForm, RecipPow, SeqExpr};
use crate::sexpr::{partial_fractions_at_one, Monomial, SExpr};
use crate::solver::{IcKind, InitialCondition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformPair {
    pub sequence: SeqExpr,
    pub image: SExpr,
}

pub fn transform(f: &SeqExpr) -> Result<SExpr> {
    Ok(match f {
        SeqExpr::Const(c) => SExpr::rational(RatFunc::pole_at_one(c.clone(), 1)),
        SeqExpr::Mono(k) => {
            let mut image = SExpr::rational(RatFunc::pole_at_one(Rat::one(), 1));
            for _ in 0..*k {
                image = transform_times_n(&image);
            }
            image
        }
        SeqExpr::Recip(RecipPow::One) => SExpr::l(),
        SeqExpr::Recip(RecipPow::Two) => SExpr::d(),
        SeqExpr::Harmonic(p) => {
            transform(&SeqExpr::Recip(*p))?.mul_rat(&RatFunc::pole_at_one(Rat::one(), 1))
        }
        SeqExpr::Binom(j) => SExpr::rational(RatFunc::pole_at_one(Rat::one(), j + 1)),
        SeqExpr::Scale(c, inner) => transform(inner)?.scale(c),
        SeqExpr::Sum(children) => {
            let mut acc = SExpr::zero();
            for child in children {
                acc = &acc + &transform(child)?;
            }
            acc
        }
        SeqExpr::Conv(a, b) => &transform(a)? * &transform(b)?,
    })
}

/// `ℓ{n f} = -dF/ds`.
pub fn transform_times_n(image: &SExpr) -> SExpr {
    -&image.diff_s()
}

/// `A(x)·F + B(x)`, the image of a difference operator applied to the
/// unknown with image `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub a: RatFunc,
    pub b: RatFunc,
}

/// Image of `Δ^order f` in terms of `F = ℓ{f}` and the initial data:
///
/// * order 1: `(x - 1) F - f(1)`
/// * order 2: `(x - 1)² F - (x - 2) f(1) - f(2)`, with `f(2) = f(1) + Δf(1)`
///
/// The initial data are read from value conditions at `n = 1, 2` and a
/// first-difference condition at `n = 1`.
pub fn transform_difference(order: u32, ics: &[InitialCondition]) -> Result<LinearForm> {
    let value_at = |n: usize| {
        ics.iter()
            .find(|ic| ic.kind == IcKind::Value && ic.index == n)
            .map(|ic| ic.value.clone())
    };
    let f1 = value_at(1).ok_or_else(|| Error::MissingInitialCondition("f(1)".into()))?;
    let xm1 = RatFunc::from_poly(Poly::x_minus_one());
    match order {
        1 => Ok(LinearForm {
            a: xm1,
            b: RatFunc::constant(-f1),
        }),
        2 => {
            let df1 = ics
                .iter()
                .find(|ic| ic.kind == IcKind::FirstDifference && ic.index == 1)
                .map(|ic| &f1 + &ic.value);
            let f2 = df1
                .or_else(|| value_at(2))
                .ok_or_else(|| Error::MissingInitialCondition("Df(1) or f(2)".into()))?;
            let x_minus_two = RatFunc::from_poly(Poly::from_ints(&[-2, 1]));
            Ok(LinearForm {
                a: xm1.pow(2),
                b: -&(&x_minus_two.scale(&f1) + &RatFunc::constant(f2)),
            })
        }
        _ => Err(Error::MalformedEquation(format!(
            "difference order {order} is not supported"
        ))),
    }
}

/// Inverts images of the form `r₀ + Σ r_m · L^a D^b` where `r₀` is proper
/// and every `r` has poles only at `x = 1`; the generator coefficients may
/// also carry a constant term (`c·L ↔ c/n`).
///
/// `(x - 1)^{-j} ↔ C(n-1, j-1)` and `L^a D^b (x - 1)^{-j}` becomes the
/// convolution `(1/n)^{∗a} ∗ (1/n²)^{∗b} ∗ 1^{∗j}`, after which the
/// simplification rules apply.
pub fn inverse_transform(image: &SExpr) -> Result<SeqExpr> {
    let mut nf = NormalForm::zero();
    for (mono, r) in image.terms() {
        let (poly, proper) = r.split_polynomial();
        let fractions = partial_fractions_at_one(&proper)?;
        if mono == Monomial::ONE {
            if !poly.is_zero() {
                return Err(Error::NonCausalImage(image.to_string()));
            }
            for (j, a) in fractions {
                nf.add_binom(j as usize - 1, a);
            }
        } else {
            if !poly.is_constant() {
                return Err(Error::NonCausalImage(image.to_string()));
            }
            let atom = |ones| Atom {
                l: mono.l,
                d: mono.d,
                ones,
            };
            nf.add_atom(atom(0), poly.coeff(0));
            for (j, a) in fractions {
                nf.add_atom(atom(j), a);
            }
        }
    }
    Ok(nf.to_tree())
}

/// Reference pairs for the `table` listing and the numeric checks.
pub fn table() -> Vec<TransformPair> {
    let seqs = [
        SeqExpr::one(),
        SeqExpr::n(),
        SeqExpr::Mono(2),
        SeqExpr::Mono(3),
        SeqExpr::Recip(RecipPow::One),
        SeqExpr::Recip(RecipPow::Two),
        SeqExpr::Harmonic(RecipPow::One),
        SeqExpr::Harmonic(RecipPow::Two),
        SeqExpr::Binom(2),
        SeqExpr::conv(SeqExpr::Recip(RecipPow::One), SeqExpr::Binom(1)),
    ];
    seqs.into_iter()
        .map(|sequence| {
            let image = transform(&sequence).expect("table sequences are in the class");
            TransformPair { sequence, image }
        })
        .collect()
}

/// `c · x^k / (x - 1)^d`.
pub fn x_power_over_pole(c: i64, k: usize, d: u32) -> RatFunc {
    RatFunc::new(
        Poly::monomial(rational::int(c), k),
        Poly::x_minus_one().pow(d),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::seq::linear_combine;

    fn rational(r: RatFunc) -> SExpr {
        SExpr::rational(r)
    }

    #[test]
    fn forward_table() {
        assert_eq!(transform(&SeqExpr::one()).unwrap(), rational(x_power_over_pole(1, 0, 1)));
        assert_eq!(transform(&SeqExpr::n()).unwrap(), rational(x_power_over_pole(1, 1, 2)));
        assert_eq!(transform(&SeqExpr::Recip(RecipPow::One)).unwrap(), SExpr::l());
        // x(x+1)/(x-1)^3
        let n2 = RatFunc::new(Poly::from_ints(&[0, 1, 1]), Poly::x_minus_one().pow(3));
        assert_eq!(transform(&SeqExpr::Mono(2)).unwrap(), rational(n2));
    }

    #[test]
    fn times_n_rule() {
        let one = rational(x_power_over_pole(1, 0, 1));
        let n = rational(x_power_over_pole(1, 1, 2));
        assert_eq!(transform_times_n(&one), n);
        assert_eq!(transform_times_n(&n), transform(&SeqExpr::Mono(2)).unwrap());
        assert!(transform_times_n(&SExpr::zero()).is_zero());
    }

    #[test]
    fn difference_forms() {
        let ic = |kind, index, v| InitialCondition {
            kind,
            index,
            value: int(v),
        };
        let first = transform_difference(1, &[ic(IcKind::Value, 1, 1)]).unwrap();
        assert_eq!(first.a, RatFunc::from_poly(Poly::x_minus_one()));
        assert_eq!(first.b, RatFunc::constant(int(-1)));

        let second = transform_difference(
            2,
            &[ic(IcKind::Value, 1, 1), ic(IcKind::FirstDifference, 1, 2)],
        )
        .unwrap();
        assert_eq!(second.a, RatFunc::from_poly(Poly::x_minus_one().pow(2)));
        assert_eq!(second.b, RatFunc::from_poly(Poly::from_ints(&[-1, -1])));

        let zero = transform_difference(
            2,
            &[ic(IcKind::Value, 1, 0), ic(IcKind::FirstDifference, 1, 0)],
        )
        .unwrap();
        assert!(zero.b.is_zero());

        assert!(matches!(
            transform_difference(1, &[ic(IcKind::Value, 2, 2)]),
            Err(Error::MissingInitialCondition(_))
        ));
        assert!(matches!(
            transform_difference(2, &[ic(IcKind::Value, 1, 2)]),
            Err(Error::MissingInitialCondition(_))
        ));
    }

    #[test]
    fn inverse_examples() {
        // 1/(x-1) + x/(x-1)^3 -> 1 + (n^2 - n)/2
        let image = rational(&x_power_over_pole(1, 0, 1) + &x_power_over_pole(1, 1, 3));
        let expected = linear_combine(&[
            (int(1), SeqExpr::one()),
            (crate::rational::rat(1, 2), SeqExpr::Mono(2)),
            (crate::rational::rat(-1, 2), SeqExpr::n()),
        ]);
        assert_eq!(inverse_transform(&image).unwrap(), expected);

        let image = rational(
            &(&x_power_over_pole(1, 0, 2) + &x_power_over_pole(1, 1, 2))
                + &x_power_over_pole(1, 1, 4),
        );
        let f = inverse_transform(&image).unwrap();
        for n in 1..=30usize {
            let m = int(n as i64);
            let expected = &m * int(2) - int(1) + &m * (&m - int(1)) * (&m - int(2)) / int(6);
            assert_eq!(f.eval(n), expected);
        }

        let image = &rational(x_power_over_pole(1, 0, 1)) + &SExpr::l().mul_rat(&x_power_over_pole(1, 0, 1));
        assert_eq!(
            inverse_transform(&image).unwrap(),
            linear_combine(&[
                (int(1), SeqExpr::one()),
                (int(1), SeqExpr::Harmonic(RecipPow::One))
            ])
        );
    }

    #[test]
    fn inverse_rejects_out_of_class() {
        let improper = rational(x_power_over_pole(1, 1, 1));
        assert!(matches!(inverse_transform(&improper), Err(Error::NonCausalImage(_))));
        let off_pole = rational(RatFunc::new(Poly::one(), Poly::from_ints(&[-2, 1])));
        assert!(matches!(inverse_transform(&off_pole), Err(Error::UnsupportedPole(_))));
        let shifted_l = SExpr::l().mul_rat(&RatFunc::x());
        assert!(matches!(inverse_transform(&shifted_l), Err(Error::NonCausalImage(_))));
    }

    #[test]
    fn higher_pole_log_terms_stay_convolutions() {
        let image = SExpr::l().mul_rat(&x_power_over_pole(1, 0, 2));
        let f = inverse_transform(&image).unwrap();
        assert_eq!(f, SeqExpr::conv(SeqExpr::Recip(RecipPow::One), SeqExpr::Binom(1)));
        assert_eq!(transform(&f).unwrap(), image);
    }
}
