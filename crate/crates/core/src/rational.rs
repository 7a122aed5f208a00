//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rat {
    Rat::from_integer(BigInt::from(value))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// `p/q` form, including `/1` for integers.
pub fn to_pq(value: &Rat) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &Rat) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Overflowing magnitudes; the sign is all that survives.
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Binomial coefficient C(n, k) for non-negative n; zero when k > n.
pub fn binomial(n: u64, k: u64) -> Rat {
    if k > n {
        return zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rat::from_integer(acc)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `a + b`. When one denominator `q` fits in 32 bits the common factor of
/// the unreduced sum divides `gcd(q, d)^2`, so the result is reduced with a
/// single-word gcd instead of a full one.
pub fn add(a: &Rat, b: &Rat) -> Rat {
    let (big, small) = if a.denom().bits() >= b.denom().bits() {
        (a, b)
    } else {
        (b, a)
    };
    let Some(q) = small.denom().to_u64().filter(|&q| q <= u64::from(u32::MAX)) else {
        return a + b;
    };
    let d = big.denom();
    let x = big.numer() * q + small.numer() * d;
    if x.is_zero() {
        return zero();
    }
    let shared = q.gcd(&(d % q).to_u64().expect("remainder below q"));
    let bound = shared * shared;
    let g = bound.gcd(&x.mod_floor(&BigInt::from(bound)).to_u64().expect("remainder below bound"));
    Rat::new_raw(x / g, d * q / g)
}

pub fn pow(base: &Rat, exp: u32) -> Rat {
    num_traits::pow(base.clone(), exp as usize)
}
