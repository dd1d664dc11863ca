//! Mahler measures of one-variable Laurent polynomials.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::polyring::{PolyError, RootSet, ToComplexPoly};

/// Nodes closer than this to a zero of `|p|` are dropped by quadrature.
pub const QUADRATURE_SKIP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MahlerMethod {
    Roots,
    Quadrature,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MahlerValue {
    pub measure: f64,
    pub log_measure: f64,
    pub method: MahlerMethod,
    /// `min ||r| - 1|` over the roots; only the root method computes it.
    pub root_margin: Option<f64>,
}

/// Jensen's formula: `m(p) = |c| prod max(|r|, 1)`.
pub fn mahler_roots<P: ToComplexPoly + ?Sized>(p: &P) -> Result<MahlerValue, PolyError> {
    let roots = RootSet::of(p)?;
    let mut terms: Vec<f64> = cluster_moduli(&roots.roots)
        .into_iter()
        .map(|r| r.max(1.0).ln())
        .collect();
    terms.push(roots.leading.norm().ln());
    let log_measure = crate::stats::stable_sum(terms);
    Ok(MahlerValue {
        measure: log_measure.exp(),
        log_measure,
        method: MahlerMethod::Roots,
        root_margin: Some(roots.unit_circle_margin()),
    })
}

/// Roots closer than this (relative to their size) are one cluster.
pub const CLUSTER_RADIUS: f64 = 1e-6;

/// Root moduli with each tight cluster replaced by its centroid, repeated
/// once per member. A multiple root splits into a ring of radius about
/// `eps^(1/k)` around the true value while the centroid stays accurate.
fn cluster_moduli(roots: &[Complex64]) -> Vec<f64> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in i + 1..n {
            let scale = roots[i].norm().max(roots[j].norm()).max(1.0);
            if (roots[i] - roots[j]).norm() <= CLUSTER_RADIUS * scale {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut sums = vec![(Complex64::new(0.0, 0.0), 0usize); n];
    for (i, r) in roots.iter().enumerate() {
        let c = find(&mut parent, i);
        sums[c].0 += r;
        sums[c].1 += 1;
    }
    (0..n)
        .map(|i| {
            let (s, k) = sums[find(&mut parent, i)];
            (s / k as f64).norm()
        })
        .collect()
}

/// Rectangle rule for the mean of `ln |p(e^(i theta))|`.
pub fn mahler_quadrature<P: ToComplexPoly + ?Sized>(
    p: &P,
    nodes: usize,
) -> Result<MahlerValue, PolyError> {
    if nodes < 16 || !nodes.is_power_of_two() {
        return Err(PolyError::NodeCount(nodes));
    }
    let p = p.to_complex();
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut logs = Vec::with_capacity(nodes);
    for k in 0..nodes {
        let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / nodes as f64);
        let v = p.eval(z)?.norm();
        if v >= QUADRATURE_SKIP {
            logs.push(v.ln());
        }
    }
    let used = logs.len().max(1) as f64;
    let log_measure = crate::stats::stable_sum(logs) / used;
    Ok(MahlerValue {
        measure: log_measure.exp(),
        log_measure,
        method: MahlerMethod::Quadrature,
        root_margin: None,
    })
}

/// `ln m(p)` by the root method.
pub fn log_mahler<P: ToComplexPoly + ?Sized>(p: &P) -> Result<f64, PolyError> {
    Ok(mahler_roots(p)?.log_measure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{CxLaurentPoly, IntLaurentPoly};
    use approx::assert_relative_eq;

    fn poly(lo: i64, c: &[i64]) -> IntLaurentPoly {
        IntLaurentPoly::from_dense(lo, c)
    }

    const GOLDEN_SQ: f64 = 2.618_033_988_749_895;

    #[test]
    fn monomials() {
        assert_eq!(mahler_roots(&poly(1, &[1])).unwrap().measure, 1.0);
        assert_eq!(mahler_roots(&poly(-3, &[-1])).unwrap().measure, 1.0);
    }

    #[test]
    fn root_examples() {
        assert_relative_eq!(
            mahler_roots(&poly(0, &[2, -5, 2])).unwrap().measure,
            4.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            mahler_roots(&poly(-1, &[-1, 3, -1])).unwrap().measure,
            GOLDEN_SQ,
            epsilon = 1e-12
        );
    }

    #[test]
    fn logs() {
        assert!(log_mahler(&poly(-1, &[1, -1, 1])).unwrap().abs() < 1e-12);
        assert_relative_eq!(
            log_mahler(&poly(-1, &[-1, 3, -1])).unwrap(),
            0.962_423_650_1,
            epsilon = 1e-10
        );
        assert_relative_eq!(log_mahler(&IntLaurentPoly::constant(5)).unwrap(), 5f64.ln());
    }

    #[test]
    fn quadrature_examples() {
        let one = mahler_quadrature(&IntLaurentPoly::one(), 16).unwrap();
        assert_eq!(one.measure, 1.0);
        let f8 = mahler_quadrature(&poly(-1, &[-1, 3, -1]), 4096).unwrap();
        assert_relative_eq!(f8.measure, GOLDEN_SQ, max_relative = 1e-8);
        let tre = mahler_quadrature(&poly(0, &[1, -1, 1]), 4096).unwrap();
        assert!((tre.measure - 1.0).abs() < 1e-2);
    }

    #[test]
    fn quadrature_rejects_bad_nodes() {
        assert_eq!(
            mahler_quadrature(&IntLaurentPoly::one(), 100),
            Err(PolyError::NodeCount(100))
        );
        assert_eq!(
            mahler_quadrature(&CxLaurentPoly::zero(), 16),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn double_root_on_circle() {
        let p = &poly(0, &[1, -1, 1, 9, 6]) * &poly(0, &[-2, 2, -4, 3, 7, 0, -4]);
        let m = mahler_roots(&p).unwrap().measure;
        assert_relative_eq!(m, 49.804_667_455_746_26, max_relative = 1e-12);
        let sq = &poly(0, &[1, 1]) * &poly(0, &[1, 1]);
        assert_eq!(
            mahler_roots(&(&sq * &poly(0, &[2, -5, 2])))
                .unwrap()
                .measure,
            4.0
        );
    }

    #[test]
    fn kronecker() {
        let p = &poly(0, &[1, -1, 1]) * &poly(0, &[1, 1]);
        assert!((mahler_roots(&p).unwrap().measure - 1.0).abs() < 1e-9);
    }
}
