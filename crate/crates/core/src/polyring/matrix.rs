use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::{CxLaurentPoly, IntLaurentPoly, PolyError};

/// Relative pruning threshold applied to determinant coefficients.
pub const DET_PRUNE: f64 = 1e-8;
/// A node matrix whose smallest LU pivot is below this fraction of its
/// largest entry counts as singular; the determinant is zero when every
/// node is singular.
pub const SINGULAR_PIVOT: f64 = 1e-11;

/// Dense matrix of complex Laurent polynomials, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<CxLaurentPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![CxLaurentPoly::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<CxLaurentPoly>>) -> Result<Self, PolyError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(PolyError::NotSquare {
                rows: r,
                cols: bad.len(),
            });
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CxLaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: CxLaurentPoly) {
        self.entries[i * self.cols + j] = p;
    }

    /// Copy without the listed rows and columns.
    pub fn minor(&self, drop_rows: &[usize], drop_cols: &[usize]) -> Self {
        let keep_r: Vec<usize> = (0..self.rows).filter(|i| !drop_rows.contains(i)).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|j| !drop_cols.contains(j)).collect();
        let mut out = Self::zeros(keep_r.len(), keep_c.len());
        for (a, &i) in keep_r.iter().enumerate() {
            for (b, &j) in keep_c.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Entry-wise evaluation at `z` after multiplying row `i` by `t^shift[i]`.
    fn eval_shifted(&self, z: Complex64, shift: &[i64]) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.entries.len());
        for (i, &s) in shift.iter().enumerate().take(self.rows) {
            for j in 0..self.cols {
                let p = self.get(i, j);
                let v = p
                    .terms()
                    .map(|(e, c)| c * z.powi((e + s) as i32))
                    .sum::<Complex64>();
                out.push(v);
            }
        }
        out
    }

    /// Determinant by evaluation at roots of unity and FFT interpolation.
    pub fn det(&self) -> Result<CxLaurentPoly, PolyError> {
        poly_det(self)
    }
}

/// Determinant of a complex matrix by LU with partial pivoting (max modulus).
pub fn complex_det(a: Vec<Complex64>, n: usize) -> Complex64 {
    lu_det(a, n).0
}

/// Determinant by partial-pivot LU together with the smallest pivot relative
/// to the largest input entry (0 for an exactly singular or zero matrix).
fn lu_det(mut a: Vec<Complex64>, n: usize) -> (Complex64, f64) {
    let size = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if size == 0.0 {
        return (Complex64::zero(), 0.0);
    }
    let mut det = Complex64::one();
    let mut smallest = f64::INFINITY;
    for k in 0..n {
        let (piv, best) = (k..n)
            .map(|i| (i, a[i * n + k].norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == 0.0 {
            return (Complex64::zero(), 0.0);
        }
        smallest = smallest.min(best / size);
        if piv != k {
            for j in 0..n {
                a.swap(k * n + j, piv * n + j);
            }
            det = -det;
        }
        let p = a[k * n + k];
        det *= p;
        for i in k + 1..n {
            let f = a[i * n + k] / p;
            if f.is_zero() {
                continue;
            }
            for j in k + 1..n {
                let v = a[k * n + j];
                a[i * n + j] -= f * v;
            }
        }
    }
    (det, smallest)
}

/// Determinant of a square polynomial matrix by evaluation–interpolation.
///
/// Row `i` is shifted by its lowest exponent so every entry is an ordinary
/// polynomial; the degree bound is the sum of the row spans. Values at
/// `N >= bound + 1` roots of unity (a power of two) are interpolated by FFT
/// and coefficients below `1e-8` of the largest are dropped.
pub fn poly_det(m: &PolyMatrix) -> Result<CxLaurentPoly, PolyError> {
    if m.rows != m.cols {
        return Err(PolyError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(CxLaurentPoly::one());
    }
    let mut shift = vec![0i64; n];
    let mut bound = 0i64;
    for (i, s) in shift.iter_mut().enumerate() {
        let row: Vec<&CxLaurentPoly> = (0..n).map(|j| m.get(i, j)).collect();
        let lo = row.iter().filter_map(|p| p.min_exp()).min();
        let hi = row.iter().filter_map(|p| p.max_exp()).max();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Ok(CxLaurentPoly::zero());
        };
        *s = -lo;
        bound += hi - lo;
    }
    let nodes = ((bound + 1) as usize).next_power_of_two();
    let evaluated: Vec<(Complex64, f64)> = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / nodes as f64);
            lu_det(m.eval_shifted(z, &shift), n)
        })
        .collect();
    if evaluated.iter().all(|&(_, pivot)| pivot <= SINGULAR_PIVOT) {
        return Ok(CxLaurentPoly::zero());
    }
    let mut buf: Vec<Complex64> = evaluated.into_iter().map(|(d, _)| d).collect();
    FftPlanner::new().plan_fft_forward(nodes).process(&mut buf);
    let inv = 1.0 / nodes as f64;
    let offset: i64 = shift.iter().sum();
    let raw = CxLaurentPoly::from_terms(
        buf.into_iter()
            .enumerate()
            .take(bound as usize + 1)
            .map(|(j, c)| (j as i64 - offset, c * inv)),
    );
    Ok(raw.pruned_relative(DET_PRUNE))
}

/// Exact determinant over `Z[t, t^-1]` by fraction-free Bareiss elimination.
pub fn bareiss_det(rows: &[Vec<IntLaurentPoly>]) -> Result<IntLaurentPoly, PolyError> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(PolyError::NotSquare {
            rows: n,
            cols: bad.len(),
        });
    }
    if n == 0 {
        return Ok(IntLaurentPoly::one());
    }
    let mut offset = 0i64;
    let mut a: Vec<Vec<IntLaurentPoly>> = Vec::with_capacity(n);
    for row in rows {
        let lo = row.iter().filter_map(|p| p.min_exp()).min().unwrap_or(0);
        offset += lo;
        a.push(row.iter().map(|p| p.shift(-lo)).collect());
    }
    let mut negate = false;
    let mut prev = IntLaurentPoly::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(piv) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(IntLaurentPoly::zero());
            };
            a.swap(k, piv);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev)?;
            }
            a[i][k] = IntLaurentPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].shift(offset);
    Ok(if negate { -det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(lowest: i64, c: &[f64]) -> CxLaurentPoly {
        CxLaurentPoly::from_real(lowest, c)
    }

    fn int(lowest: i64, c: &[i64]) -> IntLaurentPoly {
        IntLaurentPoly::from_dense(lowest, c)
    }

    #[test]
    fn one_by_one() {
        let m = PolyMatrix::from_rows(vec![vec![cx(1, &[1.0])]]).unwrap();
        assert!(m.det().unwrap().max_distance(&cx(1, &[1.0])) < 1e-12);
    }

    #[test]
    fn diagonal() {
        let t = cx(1, &[1.0]);
        let m = PolyMatrix::from_rows(vec![
            vec![t.clone(), CxLaurentPoly::zero()],
            vec![CxLaurentPoly::zero(), t],
        ])
        .unwrap();
        assert!(m.det().unwrap().max_distance(&cx(2, &[1.0])) < 1e-12);
    }

    #[test]
    fn two_by_two() {
        let t = cx(1, &[1.0]);
        let one = CxLaurentPoly::one();
        let m = PolyMatrix::from_rows(vec![vec![t.clone(), one.clone()], vec![one, t]]).unwrap();
        let d = m.det().unwrap();
        assert!(d.max_distance(&cx(0, &[-1.0, 0.0, 1.0])) < 1e-12, "{d}");
    }

    #[test]
    fn negative_exponents() {
        let m = PolyMatrix::from_rows(vec![
            vec![cx(-1, &[1.0]), cx(0, &[2.0])],
            vec![cx(0, &[3.0]), cx(1, &[1.0])],
        ])
        .unwrap();
        let d = m.det().unwrap();
        assert!(d.max_distance(&cx(0, &[-5.0])) < 1e-12, "{d}");
    }

    #[test]
    fn singular_is_zero() {
        let p = cx(0, &[1.0, 2.0]);
        let m =
            PolyMatrix::from_rows(vec![vec![p.clone(), p.clone()], vec![p.clone(), p]]).unwrap();
        assert!(m.det().unwrap().is_zero());
    }

    #[test]
    fn not_square() {
        let m = PolyMatrix::zeros(2, 3);
        assert_eq!(m.det(), Err(PolyError::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn bareiss_matches_hand_expansion() {
        // [[t, 1], [1, t]] -> t^2 - 1
        let d = bareiss_det(&[
            vec![int(1, &[1]), int(0, &[1])],
            vec![int(0, &[1]), int(1, &[1])],
        ])
        .unwrap();
        assert_eq!(d, int(0, &[-1, 0, 1]));
    }

    #[test]
    fn bareiss_with_pivoting() {
        let d = bareiss_det(&[
            vec![IntLaurentPoly::zero(), int(0, &[1]), int(0, &[2])],
            vec![int(0, &[1]), IntLaurentPoly::zero(), int(0, &[3])],
            vec![int(0, &[4]), int(0, &[5]), int(-1, &[1])],
        ])
        .unwrap();
        // 0*(0*t^-1 - 15) - 1*(t^-1 - 12) + 2*(5 - 0) = -t^-1 + 22
        assert_eq!(d, int(-1, &[-1, 22]));
    }

    #[test]
    fn large_entries_are_not_zero() {
        // eight blocks [[40, t - 30], [30, 40]] mixed by unimodular row
        // operations: det = (2500 - 30 t)^8
        let n = 16;
        let mut m = PolyMatrix::zeros(n, n);
        for b in 0..n / 2 {
            let (i, j) = (2 * b, 2 * b + 1);
            m.set(i, i, cx(0, &[40.0]));
            m.set(i, j, cx(0, &[-30.0, 1.0]));
            m.set(j, i, cx(0, &[30.0]));
            m.set(j, j, cx(0, &[40.0]));
        }
        for i in 1..n {
            for j in 0..n {
                let sum = m.get(i, j) + m.get(i - 1, j);
                m.set(i, j, sum);
            }
        }
        let block = cx(0, &[2500.0, -30.0]);
        let expect = (0..n / 2).fold(CxLaurentPoly::one(), |acc, _| &acc * &block);
        let d = m.det().unwrap();
        assert!(d.max_distance(&expect) <= 1e-9 * expect.max_abs(), "{d}");
        let mut singular = m.clone();
        for j in 0..n {
            let row = singular.get(1, j).scale(Complex64::new(3.0, 0.0));
            singular.set(2, j, row);
        }
        assert!(singular.det().unwrap().is_zero());
    }
}
