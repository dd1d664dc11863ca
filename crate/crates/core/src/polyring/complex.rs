use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use super::PolyError;

/// Relative remainder bound for [`CxLaurentPoly::div_exact`].
pub const DIVISION_TOLERANCE: f64 = 1e-9;

/// Laurent polynomial with double-precision complex coefficients.
///
/// Every stored coefficient has modulus strictly above `prune_tolerance`.
/// Arithmetic results inherit the larger tolerance of their operands.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CxLaurentPoly {
    coeffs: BTreeMap<i64, Complex64>,
    prune_tolerance: f64,
}

impl CxLaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Complex64, exp: i64) -> Self {
        Self::from_terms([(exp, c)])
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Complex64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p.prune();
        p
    }

    /// Real-coefficient convenience constructor: `sum coeffs[i] t^(lowest+i)`.
    pub fn from_real(lowest: i64, coeffs: &[f64]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (lowest + i as i64, Complex64::new(*c, 0.0))),
        )
    }

    fn add_term(&mut self, exp: i64, c: Complex64) {
        if c.is_zero() {
            return;
        }
        *self.coeffs.entry(exp).or_insert_with(Complex64::zero) += c;
    }

    fn prune(&mut self) {
        let tol = self.prune_tolerance;
        self.coeffs.retain(|_, c| c.norm() > tol && !c.is_zero());
    }

    pub fn prune_tolerance(&self) -> f64 {
        self.prune_tolerance
    }

    /// Copy with a new absolute pruning tolerance applied.
    pub fn pruned(&self, tolerance: f64) -> Self {
        let mut out = self.clone();
        out.prune_tolerance = tolerance.max(0.0);
        out.prune();
        out
    }

    /// Prunes below `relative * max |coeff|`.
    pub fn pruned_relative(&self, relative: f64) -> Self {
        self.pruned(relative * self.max_abs())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Complex64 {
        self.coeffs.get(&exp).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, *c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn span(&self) -> Option<i64> {
        Some(self.max_exp()? - self.min_exp()?)
    }

    pub fn leading_coeff(&self) -> Option<Complex64> {
        self.coeffs.values().next_back().copied()
    }

    /// Largest coefficient modulus (0 for the zero polynomial).
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, *c)).collect(),
            prune_tolerance: self.prune_tolerance,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * s)).collect(),
            prune_tolerance: self.prune_tolerance,
        };
        out.prune();
        out
    }

    /// `p(1/t)`.
    pub fn reciprocal(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, *c)).collect(),
            prune_tolerance: self.prune_tolerance,
        }
    }

    /// Dense ascending coefficients of `self * t^(-min_exp)`.
    pub fn dense(&self) -> Vec<Complex64> {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else {
            return Vec::new();
        };
        let mut out = vec![Complex64::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.coeffs {
            out[(e - lo) as usize] = *c;
        }
        out
    }

    /// Horner evaluation of the shifted ordinary polynomial.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, PolyError> {
        let Some(lo) = self.min_exp() else {
            return Ok(Complex64::zero());
        };
        if z.is_zero() {
            return if lo < 0 {
                Err(PolyError::ZeroBase)
            } else {
                Ok(self.coeff(0))
            };
        }
        let dense = self.dense();
        let body = dense
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * z + c);
        Ok(body * z.powi(lo as i32))
    }

    /// Quotient `q` with `self = divisor * q`, accepted when the remainder
    /// norm is at most `1e-9 * norm(self)`.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        self.div_exact_with(divisor, DIVISION_TOLERANCE)
    }

    /// Exact division accepting a remainder up to `relative` times the norm
    /// of `self`.
    pub fn div_exact_with(&self, divisor: &Self, relative: f64) -> Result<Self, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let d_lo = divisor.min_exp().unwrap();
        let d = divisor.dense();
        let deg_d = d.len() - 1;
        let lead = d[deg_d];
        let a_lo = self.min_exp().unwrap();
        let mut rem = self.dense();
        if rem.len() < d.len() {
            return Err(PolyError::NotDivisible {
                remainder: self.norm(),
            });
        }
        let q_len = rem.len() - deg_d;
        let mut q = vec![Complex64::zero(); q_len];
        for i in (0..q_len).rev() {
            let c = rem[i + deg_d] / lead;
            q[i] = c;
            for (j, dj) in d.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
        let remainder = rem.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if remainder > relative * self.norm() {
            return Err(PolyError::NotDivisible { remainder });
        }
        let tol = self.prune_tolerance.max(divisor.prune_tolerance);
        Ok(Self::from_terms(
            q.into_iter()
                .enumerate()
                .map(|(i, c)| (a_lo - d_lo + i as i64, c)),
        )
        .pruned(tol))
    }

    /// Maximum over exponents of `|c(e) - c(-e)| / max|c|`.
    pub fn symmetry_defect(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for (e, c) in &self.coeffs {
            worst = worst.max((c - self.coeff(-e)).norm());
        }
        worst / scale
    }

    /// Coefficientwise distance `max_e |a(e) - b(e)|`.
    pub fn max_distance(&self, other: &Self) -> f64 {
        let mut exps: Vec<i64> = self.coeffs.keys().copied().collect();
        exps.extend(other.coeffs.keys().copied());
        exps.into_iter()
            .map(|e| (self.coeff(e) - other.coeff(e)).norm())
            .fold(0.0, f64::max)
    }

    fn combine(&self, rhs: &Self, sign: f64) -> Self {
        let mut out = self.clone();
        out.prune_tolerance = self.prune_tolerance.max(rhs.prune_tolerance);
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c * sign);
        }
        out.prune();
        out
    }
}

impl Add<&CxLaurentPoly> for &CxLaurentPoly {
    type Output = CxLaurentPoly;
    fn add(self, rhs: &CxLaurentPoly) -> CxLaurentPoly {
        self.combine(rhs, 1.0)
    }
}

impl Sub<&CxLaurentPoly> for &CxLaurentPoly {
    type Output = CxLaurentPoly;
    fn sub(self, rhs: &CxLaurentPoly) -> CxLaurentPoly {
        self.combine(rhs, -1.0)
    }
}

impl Mul<&CxLaurentPoly> for &CxLaurentPoly {
    type Output = CxLaurentPoly;
    fn mul(self, rhs: &CxLaurentPoly) -> CxLaurentPoly {
        let mut out = CxLaurentPoly {
            coeffs: BTreeMap::new(),
            prune_tolerance: self.prune_tolerance.max(rhs.prune_tolerance),
        };
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out.prune();
        out
    }
}

impl Neg for &CxLaurentPoly {
    type Output = CxLaurentPoly;
    fn neg(self) -> CxLaurentPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Add for CxLaurentPoly {
    type Output = CxLaurentPoly;
    fn add(self, rhs: CxLaurentPoly) -> CxLaurentPoly {
        &self + &rhs
    }
}

impl Sub for CxLaurentPoly {
    type Output = CxLaurentPoly;
    fn sub(self, rhs: CxLaurentPoly) -> CxLaurentPoly {
        &self - &rhs
    }
}

impl Mul for CxLaurentPoly {
    type Output = CxLaurentPoly;
    fn mul(self, rhs: CxLaurentPoly) -> CxLaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for CxLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.10}{:+.10}i)", c.re, c.im)?;
            match *e {
                0 => {}
                1 => write!(f, "*t")?,
                _ => write!(f, "*t^{e}")?,
            }
        }
        Ok(())
    }
}
