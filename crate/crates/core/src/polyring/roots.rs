use num_complex::Complex64;
use num_traits::Zero;

use super::{PolyError, ToComplexPoly};

/// Iteration cap for the simultaneous Aberth–Ehrlich update.
pub const MAX_ITERATIONS: usize = 200;
/// Residual certification factor: `|p(r)| <= 1e-9 * sum|c| * max(|r|,1)^deg`.
pub const CERTIFY: f64 = 1e-9;

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// Factorization data `p(t) = c t^k prod (t - r_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub leading: Complex64,
    pub lowest_exp: i64,
}

impl RootSet {
    /// Roots of `p` with multiplicity, each certified by its residual.
    pub fn of<P: ToComplexPoly + ?Sized>(p: &P) -> Result<Self, PolyError> {
        let p = p.to_complex();
        let lowest_exp = p.min_exp().ok_or(PolyError::ZeroPolynomial)?;
        let coeffs = p.dense();
        let leading = *coeffs.last().expect("nonzero polynomial");
        let roots = aberth(&coeffs);
        certify(&coeffs, &roots)?;
        Ok(Self {
            roots,
            leading,
            lowest_exp,
        })
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// Smallest `||r| - 1|` over all roots (infinite for constants).
    pub fn unit_circle_margin(&self) -> f64 {
        self.roots
            .iter()
            .map(|r| (r.norm() - 1.0).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Coefficients (lowest first) of `prod (t - r_i)`.
    pub fn monic_coefficients(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(1.0, 0.0)];
        for r in &self.roots {
            let mut next = vec![Complex64::zero(); out.len() + 1];
            for (i, c) in out.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * r;
            }
            out = next;
        }
        out
    }
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    match n {
        0 => return Vec::new(),
        1 => return vec![-c[0] / c[1]],
        _ => {}
    }
    let radius = (c[0].norm() / c[n].norm()).powf(1.0 / n as f64);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64
                + GOLDEN_ANGLE * k as f64 / n as f64
                + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    for _ in 0..MAX_ITERATIONS {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(c, z[k]);
            if p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if w.is_finite() {
                z[k] -= w;
                moved = moved.max(w.norm() / z[k].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(c, *r);
            let step = p / dp;
            let cand = *r - step;
            if !cand.is_finite() || horner(c, cand).0.norm() >= p.norm() {
                break;
            }
            *r = cand;
        }
    }
    z
}

fn certify(c: &[Complex64], roots: &[Complex64]) -> Result<(), PolyError> {
    let deg = (c.len() - 1) as i32;
    let size: f64 = c.iter().map(|x| x.norm()).sum();
    for (index, r) in roots.iter().enumerate() {
        let residual = horner(c, *r).0.norm();
        let bound = CERTIFY * size * r.norm().max(1.0).powi(deg);
        if residual.is_nan() || residual > bound {
            return Err(PolyError::RootCertification {
                index,
                residual,
                bound,
            });
        }
    }
    Ok(())
}
