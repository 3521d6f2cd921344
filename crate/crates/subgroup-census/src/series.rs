//! Truncated Laurent/Taylor series with extended-precision coefficients.
//!
//! A series holds the coefficients of (s - center)^o for o in
//! `lowest ..= valid_through()`; everything above `valid_through()` is unknown
//! (truncated), everything below `lowest` is an exact zero. Multiplication
//! tracks how far the product is still trustworthy, so residue extraction can
//! assert it has enough orders instead of silently reading garbage.

use rug::Float;

use crate::error::{Error, Result};
use crate::mp::{real, zero, PREC};

#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    center: f64,
    lowest: i32,
    coeffs: Vec<Float>,
}

impl TruncatedSeries {
    /// Builds a series from coefficients of (s-center)^lowest, ^{lowest+1}, ...
    pub fn new(center: f64, lowest: i32, coeffs: Vec<Float>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        Self { center, lowest, coeffs }
    }

    /// A constant c known through order `valid_through` (>= 0).
    pub fn constant(center: f64, value: Float, valid_through: i32) -> Self {
        assert!(valid_through >= 0);
        let mut coeffs = vec![zero(); valid_through as usize + 1];
        coeffs[0] = value;
        Self { center, lowest: 0, coeffs }
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn lowest_order(&self) -> i32 {
        self.lowest
    }

    /// Highest order whose coefficient is still meaningful.
    pub fn valid_through(&self) -> i32 {
        self.lowest + self.coeffs.len() as i32 - 1
    }

    /// Coefficient of (s-center)^order. Zero below the lowest order; orders
    /// beyond the truncation are unknown and panic.
    pub fn coeff(&self, order: i32) -> Float {
        if order < self.lowest {
            return zero();
        }
        assert!(
            order <= self.valid_through(),
            "coefficient of order {order} beyond truncation {}",
            self.valid_through()
        );
        self.coeffs[(order - self.lowest) as usize].clone()
    }

    pub fn coeffs(&self) -> &[Float] {
        &self.coeffs
    }

    /// Relabels the expansion point (used after substituting a scaled variable).
    pub fn with_center(mut self, center: f64) -> Self {
        self.center = center;
        self
    }

    fn assert_same_center(&self, other: &Self) {
        assert!(
            (self.center - other.center).abs() < 1e-12,
            "series centers differ: {} vs {}",
            self.center,
            other.center
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_center(other);
        let lowest = self.lowest.min(other.lowest);
        let valid = self.valid_through().min(other.valid_through());
        let mut coeffs = Vec::with_capacity((valid - lowest + 1) as usize);
        for o in lowest..=valid {
            let mut c = if o >= self.lowest && o <= self.valid_through() {
                self.coeff(o)
            } else {
                zero()
            };
            if o >= other.lowest && o <= other.valid_through() {
                c += other.coeff(o);
            }
            coeffs.push(c);
        }
        Self { center: self.center, lowest, coeffs }
    }

    pub fn neg(&self) -> Self {
        Self {
            center: self.center,
            lowest: self.lowest,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_center(other);
        let lowest = self.lowest + other.lowest;
        let valid = (self.valid_through() + other.lowest)
            .min(other.valid_through() + self.lowest);
        let len = (valid - lowest + 1) as usize;
        let mut coeffs = vec![zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let o = self.lowest + i as i32 + other.lowest + j as i32;
                if o >= lowest && o <= valid {
                    coeffs[(o - lowest) as usize] += Float::with_val(PREC, a * b);
                }
            }
        }
        Self { center: self.center, lowest, coeffs }
    }

    pub fn mul_scalar(&self, c: &Float) -> Self {
        Self {
            center: self.center,
            lowest: self.lowest,
            coeffs: self.coeffs.iter().map(|a| Float::with_val(PREC, a * c)).collect(),
        }
    }

    /// Multiplies by (s-center)^delta.
    pub fn shift(&self, delta: i32) -> Self {
        Self {
            center: self.center,
            lowest: self.lowest + delta,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Substitutes v = lambda * u: the coefficient of u^o picks up lambda^o.
    pub fn scale_variable(&self, lambda: &Float) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        let mut lp = lambda.clone().pow(self.lowest);
        for c in &self.coeffs {
            coeffs.push(Float::with_val(PREC, c * &lp));
            lp *= lambda;
        }
        Self { center: self.center, lowest: self.lowest, coeffs }
    }

    /// Reciprocal of a series whose leading coefficient is a unit.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::InvalidArgument(
                "reciprocal needs a nonzero leading coefficient".into(),
            ));
        }
        let m = self.coeffs.len();
        let mut b = Vec::with_capacity(m);
        b.push(Float::with_val(PREC, a0.clone().recip()));
        for n in 1..m {
            let mut s = zero();
            for j in 1..=n {
                s += Float::with_val(PREC, &self.coeffs[j] * &b[n - j]);
            }
            b.push(Float::with_val(PREC, -(s / a0)));
        }
        Ok(Self {
            center: self.center,
            lowest: -self.lowest,
            coeffs: b,
        })
    }

    /// Integer power (n >= 1) under the same truncation tracking as `mul`.
    pub fn powi(&self, n: u32) -> Self {
        assert!(n >= 1);
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self);
        }
        acc
    }
}

use rug::ops::Pow;
