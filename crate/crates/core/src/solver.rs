//! Initial value problems `a(n) Δ^k f(n) = rhs(n)` with `a ∈ {1, n}`,
//! `k ∈ {1, 2}`, solved through the transform domain.
//!
//! The equation is taken to hold for every `n >= 1`, also when the initial
//! condition is anchored later: the transform sums from `n = 1`, so the
//! orbit is determined by extending the equation backwards.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{self, LinearSolution};
use crate::oracle::{self, VerificationResult, VerifyOptions};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::rational::{self, Rat};
use crate::seq::SeqExpr;
use crate::sexpr::{SExpr, SExprWithConstant};
use crate::transform::{inverse_transform, transform, transform_difference, LinearForm};

/// Multiplier of the highest difference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficient {
    One,
    N,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IcKind {
    /// `f(index) = value`
    Value,
    /// `Δf(index) = value`
    FirstDifference,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InitialCondition {
    pub kind: IcKind,
    pub index: usize,
    pub value: Rat,
}

impl InitialCondition {
    pub fn value(index: usize, value: Rat) -> Self {
        InitialCondition {
            kind: IcKind::Value,
            index,
            value,
        }
    }

    pub fn first_difference(index: usize, value: Rat) -> Self {
        InitialCondition {
            kind: IcKind::FirstDifference,
            index,
            value,
        }
    }

    /// Largest index of `f` the condition reads.
    pub fn reach(&self) -> usize {
        match self.kind {
            IcKind::Value => self.index,
            IcKind::FirstDifference => self.index + 1,
        }
    }

    /// The condition's left-hand side on a trajectory `[f(1), f(2), ..]`.
    pub fn read(&self, values: &[Rat]) -> Rat {
        let at = |n: usize| &values[n - 1];
        match self.kind {
            IcKind::Value => at(self.index).clone(),
            IcKind::FirstDifference => at(self.index + 1) - at(self.index),
        }
    }
}

impl fmt::Display for InitialCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            IcKind::Value => write!(f, "f({}) = {}", self.index, self.value),
            IcKind::FirstDifference => write!(f, "Df({}) = {}", self.index, self.value),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceEquation {
    pub coefficient: Coefficient,
    pub order: u32,
    pub rhs: SeqExpr,
    pub ics: Vec<InitialCondition>,
}

impl DifferenceEquation {
    pub fn new(
        coefficient: Coefficient,
        order: u32,
        rhs: SeqExpr,
        ics: Vec<InitialCondition>,
    ) -> Result<Self> {
        let eq = DifferenceEquation {
            coefficient,
            order,
            rhs,
            ics,
        };
        eq.validate()?;
        Ok(eq)
    }

    /// Order 1 takes one condition, order 2 takes two, and the `n`
    /// coefficient is only supported at order 1.
    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.order) {
            return Err(Error::MalformedEquation(format!(
                "difference order {} is not supported (use 1 or 2)",
                self.order
            )));
        }
        if self.coefficient == Coefficient::N && self.order != 1 {
            return Err(Error::MalformedEquation(
                "the n coefficient is only supported for first-order equations".into(),
            ));
        }
        if let Some(ic) = self.ics.iter().find(|ic| ic.index == 0) {
            return Err(Error::MalformedEquation(format!(
                "{ic}: indices start at 1"
            )));
        }
        for (i, ic) in self.ics.iter().enumerate() {
            if self.ics[..i]
                .iter()
                .any(|o| o.kind == ic.kind && o.index == ic.index)
            {
                return Err(Error::MalformedEquation(format!(
                    "duplicate initial condition at {ic}"
                )));
            }
        }
        let needed = self.order as usize;
        match self.ics.len() {
            n if n < needed => Err(Error::MissingInitialCondition(format!(
                "order {} equation needs {} initial condition(s), got {}",
                self.order, needed, n
            ))),
            n if n > needed => Err(Error::MalformedEquation(format!(
                "order {} equation takes {} initial condition(s), got {}",
                self.order, needed, n
            ))),
            _ => Ok(()),
        }
    }

    /// Left-hand side `a(n) Δ^k f(n)` evaluated on a trajectory, for `n` up
    /// to `values.len() - order`.
    pub fn lhs_at(&self, values: &[Rat], n: usize) -> Rat {
        let at = |m: usize| &values[m - 1];
        let diff = match self.order {
            1 => at(n + 1) - at(n),
            _ => at(n + 2) - rational::int(2) * at(n + 1) + at(n),
        };
        match self.coefficient {
            Coefficient::One => diff,
            Coefficient::N => rational::int(n as i64) * diff,
        }
    }
}

/// Which s-domain route produced the image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// `A(x) F + B(x) = ℓ{rhs}` solved for `F` directly.
    Algebraic,
    /// First-order linear ODE in `s` from the multiply-by-`n` rule.
    SDomainOde,
    /// Algebraic, with the unknown early values kept as free constants and
    /// fixed from the conditions in sequence space.
    FreeConstants,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Algebraic => "algebraic",
            Method::SDomainOde => "s-domain ODE",
            Method::FreeConstants => "free constants",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub equation: DifferenceEquation,
    pub method: Method,
    pub image: SExpr,
    pub solution: SeqExpr,
    pub verification: VerificationResult,
}

pub fn solve_ivp(eq: &DifferenceEquation) -> Result<SolveReport> {
    solve_ivp_with(eq, &VerifyOptions::default())
}

/// Solves and verifies; a closed form the oracle rejects is returned as
/// [`Error::VerificationFailed`], never as a report.
pub fn solve_ivp_with(eq: &DifferenceEquation, opts: &VerifyOptions) -> Result<SolveReport> {
    eq.validate()?;
    let (method, image) = solve_image(eq)?;
    let solution = inverse_transform(&image)?;
    let verification = oracle::verify_solution(eq, &solution, &image, opts);
    if !verification.passed {
        return Err(Error::VerificationFailed(Box::new(verification)));
    }
    Ok(SolveReport {
        equation: eq.clone(),
        method,
        image,
        solution,
        verification,
    })
}

fn solve_image(eq: &DifferenceEquation) -> Result<(Method, SExpr)> {
    let rhs_image = transform(&eq.rhs)?;
    let pole = |order| RatFunc::pole_at_one(Rat::one(), order);
    match (eq.coefficient, eq.order) {
        (Coefficient::N, _) => Ok((Method::SDomainOde, ode_route(&rhs_image, &eq.ics[0])?)),
        (Coefficient::One, 1) => {
            let ic = &eq.ics[0];
            if ic.kind == IcKind::Value && ic.index == 1 {
                let form = transform_difference(1, &eq.ics)?;
                return Ok((Method::Algebraic, algebraic_solve(&form, &rhs_image)));
            }
            // Anchored later: rewrite as n Δf = n·rhs when that stays in the class.
            if let Ok(scaled) = eq.rhs.times_n() {
                return Ok((Method::SDomainOde, ode_route(&transform(&scaled)?, ic)?));
            }
            let image = fix_constants(
                &rhs_image.mul_rat(&pole(1)),
                &[SExpr::rational(pole(1))],
                &eq.ics,
            )?;
            Ok((Method::FreeConstants, image))
        }
        (Coefficient::One, _) => match transform_difference(2, &eq.ics) {
            Ok(form) => Ok((Method::Algebraic, algebraic_solve(&form, &rhs_image))),
            Err(Error::MissingInitialCondition(_)) => {
                // F = R/(x-1)² + f(1)·(x-2)/(x-1)² + f(2)/(x-1)²
                let x_minus_two = RatFunc::from_poly(Poly::from_ints(&[-2, 1]));
                let directions = [
                    SExpr::rational(&x_minus_two * &pole(2)),
                    SExpr::rational(pole(2)),
                ];
                let image = fix_constants(&rhs_image.mul_rat(&pole(2)), &directions, &eq.ics)?;
                Ok((Method::FreeConstants, image))
            }
            Err(e) => Err(e),
        },
    }
}

/// `n Δf = rhs` transforms to `(x-1)(-F') - xF = R`, i.e.
/// `F' + x/(x-1) F = -R/(x-1)`.
fn ode_route(rhs_image: &SExpr, ic: &InitialCondition) -> Result<SExpr> {
    let r = -&rhs_image.mul_rat(&RatFunc::pole_at_one(Rat::one(), 1));
    let general = sdomain_ode_solve(&r)?;
    determine_constant(&general, ic)
}

/// Solves `F' + x/(x-1) F = r` in the s-domain. The integrating factor
/// `x - 1` turns the left side into `((x-1) F)'`, so
/// `F = (∫(x-1) r ds + C)/(x-1)`.
pub fn sdomain_ode_solve(r: &SExpr) -> Result<SExprWithConstant> {
    let xm1 = RatFunc::from_poly(Poly::x_minus_one());
    let antiderivative = r.mul_rat(&xm1).antiderivative_s()?;
    let inv = xm1.inv();
    Ok(SExprWithConstant {
        particular: antiderivative.mul_rat(&inv),
        constant_coefficient: SExpr::rational(inv),
    })
}

/// Fixes `C` by imposing `ic` on the inverse transforms of both parts.
pub fn determine_constant(general: &SExprWithConstant, ic: &InitialCondition) -> Result<SExpr> {
    fix_constants(
        &general.particular,
        std::slice::from_ref(&general.constant_coefficient),
        std::slice::from_ref(ic),
    )
}

/// `F = (rhs - B)/A`.
pub fn algebraic_solve(form: &LinearForm, rhs_image: &SExpr) -> SExpr {
    (rhs_image - &SExpr::rational(form.b.clone())).mul_rat(&form.a.inv())
}

/// `particular + Σ c_i directions[i]` with the `c_i` chosen so that the
/// inverse transform meets every condition.
fn fix_constants(
    particular: &SExpr,
    directions: &[SExpr],
    ics: &[InitialCondition],
) -> Result<SExpr> {
    let reach = ics.iter().map(InitialCondition::reach).max().unwrap_or(1);
    let base = inverse_transform(particular)?.eval_range(reach);
    let dirs = directions
        .iter()
        .map(|d| Ok(inverse_transform(d)?.eval_range(reach)))
        .collect::<Result<Vec<_>>>()?;
    let rows = ics
        .iter()
        .map(|ic| dirs.iter().map(|d| ic.read(d)).collect())
        .collect();
    let rhs = ics.iter().map(|ic| &ic.value - ic.read(&base)).collect();
    let describe = || {
        ics.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ")
    };
    match linalg::solve(rows, rhs, directions.len()) {
        LinearSolution::Unique(c) => Ok(directions
            .iter()
            .zip(&c)
            .fold(particular.clone(), |acc, (d, c)| &acc + &d.scale(c))),
        LinearSolution::Inconsistent => Err(Error::InconsistentIc(describe())),
        LinearSolution::Underdetermined => Err(Error::ConstantUnsolvable(describe())),
    }
}
