//! Dense univariate polynomials in `t` with arbitrary-precision integer
//! coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A polynomial `c0 + c1 t + c2 t^2 + ...`. The coefficient list never has
/// trailing zeros, so the zero polynomial is the empty list.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        IntPoly::new(vec![c.into()])
    }

    /// `c t^k`.
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c.into();
        IntPoly::new(v)
    }

    /// The polynomial `t`.
    pub fn t() -> Self {
        IntPoly::monomial(1, 1)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `t^k`.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    /// The polynomial `p(t + shift)`.
    pub fn shift(&self, shift: &BigInt) -> IntPoly {
        let linear = IntPoly::new(vec![shift.clone(), BigInt::one()]);
        self.coeffs.iter().rev().fold(IntPoly::zero(), |acc, c| acc * linear.clone() + IntPoly::constant(c.clone()))
    }

    /// Inverse in `Z[t]`: exists only for the constants `1` and `-1`.
    pub fn unit_inverse(&self) -> Option<IntPoly> {
        if self.coeffs.len() == 1 && self.coeffs[0].abs().is_one() {
            Some(self.clone())
        } else {
            None
        }
    }
}

impl Zero for IntPoly {
    fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for IntPoly {
    fn one() -> Self {
        IntPoly::constant(1)
    }
}

impl Add for IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: IntPoly) -> IntPoly {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() { (self, rhs) } else { (rhs, self) };
        for (a, b) in long.coeffs.iter_mut().zip(short.coeffs) {
            *a += b;
        }
        long.normalize();
        long
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Sub for IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: IntPoly) -> IntPoly {
        self + (-rhs)
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl fmt::Display for IntPoly {
    /// Ascending powers: `t^2 + t^3`, `-1 + 2t`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mag = c.abs();
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}
