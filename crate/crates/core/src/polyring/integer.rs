use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{CxLaurentPoly, PolyError};

/// Laurent polynomial with arbitrary-precision integer coefficients.
///
/// Stored sparsely as exponent -> coefficient; zero coefficients are never
/// stored, so the zero polynomial is the empty map.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntLaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl IntLaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    /// Builds `sum coeffs[i] * t^(lowest + i)`.
    pub fn from_dense<C: Into<BigInt> + Clone>(lowest: i64, coeffs: &[C]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (lowest + i as i64, c.clone().into())),
        )
    }

    /// Sums the given terms; repeated exponents accumulate.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `max_exp - min_exp`, or `None` for the zero polynomial.
    pub fn span(&self) -> Option<i64> {
        Some(self.max_exp()? - self.min_exp()?)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.values().next_back()
    }

    pub fn trailing_coeff(&self) -> Option<&BigInt> {
        self.coeffs.values().next()
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e + k, c.clone()))
                .collect(),
        }
    }

    /// Dense ascending coefficients of the ordinary polynomial
    /// `self * t^(-min_exp)`. Empty for the zero polynomial.
    pub fn dense(&self) -> Vec<BigInt> {
        let (Some(lo), Some(hi)) = (self.min_exp(), self.max_exp()) else {
            return Vec::new();
        };
        let mut out = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.coeffs {
            out[(e - lo) as usize] = c.clone();
        }
        out
    }

    /// Gcd of the coefficients (nonnegative); zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Exact value at an integer point; `None` at zero with negative exponents.
    pub fn eval_int(&self, z: i64) -> Option<BigInt> {
        if z == 0 {
            if self.min_exp().is_some_and(|e| e < 0) {
                return None;
            }
            return Some(self.coeff(0));
        }
        // Only +-1 keep negative powers integral.
        if z.abs() != 1 && self.min_exp().is_some_and(|e| e < 0) {
            return None;
        }
        let zb = BigInt::from(z);
        let mut acc = BigInt::zero();
        for (e, c) in &self.coeffs {
            let pow = if z.abs() == 1 {
                if e.rem_euclid(2) == 0 || z == 1 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                }
            } else {
                num_traits::pow(zb.clone(), *e as usize)
            };
            acc += c * pow;
        }
        Some(acc)
    }

    /// Horner evaluation of the shifted ordinary polynomial.
    pub fn eval(&self, z: Complex64) -> Result<Complex64, PolyError> {
        self.to_cx().eval(z)
    }

    pub fn to_cx(&self) -> CxLaurentPoly {
        CxLaurentPoly::from_terms(
            self.coeffs
                .iter()
                .map(|(e, c)| (*e, Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))),
        )
    }

    /// `t -> t^k` substitution (k may be negative).
    pub fn substitute_power(&self, k: i64) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(e, c)| (e * k, c.clone())))
    }

    /// `p(1/t)`.
    pub fn reciprocal(&self) -> Self {
        self.substitute_power(-1)
    }

    /// True when the coefficient of `t^e` equals that of `t^-e` for all `e`.
    pub fn is_palindromic(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(e, c)| self.coeffs.get(&-e) == Some(c))
    }

    /// Exact quotient in the Laurent ring.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let d_lo = divisor.min_exp().unwrap();
        let d_hi = divisor.max_exp().unwrap();
        let lead = divisor.leading_coeff().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(r_hi) = rem.max_exp() {
            let r_lo = rem.min_exp().unwrap();
            if r_hi - r_lo < d_hi - d_lo {
                break;
            }
            let (q, r) = rem.leading_coeff().unwrap().div_rem(&lead);
            if !r.is_zero() {
                break;
            }
            let shift = r_hi - d_hi;
            quot.add_term(shift, q.clone());
            for (e, c) in divisor.terms() {
                rem.add_term(e + shift, -(c * &q));
            }
        }
        if rem.is_zero() {
            Ok(quot)
        } else {
            let norm = rem
                .coeffs
                .values()
                .map(|c| c.to_f64().unwrap_or(f64::INFINITY).powi(2))
                .sum::<f64>()
                .sqrt();
            Err(PolyError::NotDivisible { remainder: norm })
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Negates when the sign of the value at `t = 1` is negative.
    pub fn normalize_sign_at_one(&self) -> Self {
        match self.eval_int(1) {
            Some(v) if v.is_negative() => -self,
            _ => self.clone(),
        }
    }
}

impl Add<&IntLaurentPoly> for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn add(self, rhs: &IntLaurentPoly) -> IntLaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub<&IntLaurentPoly> for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn sub(self, rhs: &IntLaurentPoly) -> IntLaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul<&IntLaurentPoly> for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn mul(self, rhs: &IntLaurentPoly) -> IntLaurentPoly {
        let mut out = IntLaurentPoly::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn neg(self) -> IntLaurentPoly {
        IntLaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<IntLaurentPoly> for IntLaurentPoly {
            type Output = IntLaurentPoly;
            fn $m(self, rhs: IntLaurentPoly) -> IntLaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&IntLaurentPoly> for IntLaurentPoly {
            type Output = IntLaurentPoly;
            fn $m(self, rhs: &IntLaurentPoly) -> IntLaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntLaurentPoly {
    type Output = IntLaurentPoly;
    fn neg(self) -> IntLaurentPoly {
        -&self
    }
}

impl fmt::Display for IntLaurentPoly {
    /// Descending exponents, e.g. `-t + 3 - t^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = mag.is_one();
            match *e {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "t")?,
                1 => write!(f, "{mag}*t")?,
                _ if unit => write!(f, "t^{e}")?,
                _ => write!(f, "{mag}*t^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(lo: i64, c: &[i64]) -> IntLaurentPoly {
        IntLaurentPoly::from_dense(lo, c)
    }

    #[test]
    fn difference_of_squares() {
        let a = p(0, &[-1, 1]);
        let b = p(0, &[1, 1]);
        assert_eq!(&a * &b, p(0, &[-1, 0, 1]));
    }

    #[test]
    fn addition_cancels_to_monomial() {
        let a = p(-1, &[1, 0, 1]);
        let b = p(-1, &[-1]);
        assert_eq!(&a + &b, IntLaurentPoly::t());
    }

    #[test]
    fn sum_of_cubes_product() {
        let a = p(0, &[1, -1, 1]);
        let b = p(0, &[1, 1]);
        assert_eq!(&a * &b, p(0, &[1, 0, 0, 1]));
    }

    #[test]
    fn eval_at_minus_one() {
        let q = p(-1, &[1, -1, 1]);
        assert_eq!(
            q.eval(Complex64::new(-1.0, 0.0)).unwrap(),
            Complex64::new(-3.0, 0.0)
        );
        assert_eq!(q.eval_int(-1), Some(BigInt::from(-3)));
    }

    #[test]
    fn eval_constant_anywhere() {
        let one = IntLaurentPoly::one();
        assert_eq!(
            one.eval(Complex64::new(0.3, -2.0)).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(
            one.eval(Complex64::new(0.0, 0.0)).unwrap(),
            Complex64::new(1.0, 0.0)
        );
    }

    #[test]
    fn eval_zero_base_rejected() {
        let q = IntLaurentPoly::monomial(1, -1);
        assert_eq!(q.eval(Complex64::new(0.0, 0.0)), Err(PolyError::ZeroBase));
    }

    #[test]
    fn exact_division() {
        assert_eq!(
            p(0, &[-1, 0, 1]).div_exact(&p(0, &[-1, 1])).unwrap(),
            p(0, &[1, 1])
        );
        assert_eq!(
            p(0, &[1, 0, 0, 1]).div_exact(&p(0, &[1, 1])).unwrap(),
            p(0, &[1, -1, 1])
        );
        assert!(matches!(
            p(0, &[1, 0, 1]).div_exact(&p(0, &[-1, 1])),
            Err(PolyError::NotDivisible { .. })
        ));
    }

    #[test]
    fn laurent_division_keeps_offsets() {
        let d = p(-1, &[1, -1, 1]);
        let q = p(-2, &[2, 0, 5]);
        assert_eq!((&d * &q).div_exact(&d).unwrap(), q);
    }

    #[test]
    fn display_descending() {
        assert_eq!(p(-1, &[-1, 3, -1]).to_string(), "-t + 3 - t^-1");
        assert_eq!(p(0, &[2, -5, 2]).to_string(), "2*t^2 - 5*t + 2");
        assert_eq!(IntLaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn palindromic_check() {
        assert!(p(-1, &[1, -1, 1]).is_palindromic());
        assert!(!p(0, &[1, -1, 1]).is_palindromic());
    }
}
