//! Wirtinger presentations, Fox calculus and the Alexander polynomial.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::notation::KnotDiagram;
use crate::polyring::{bareiss_det, resultant_with_cyclotomic_family, IntLaurentPoly, PolyError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlexanderError {
    #[error("Fox matrix minor vanishes identically; the diagram is degenerate")]
    DegenerateDiagram,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A generator (edge label) raised to `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Letter {
    pub generator: u32,
    pub exponent: i8,
}

impl Letter {
    fn new(generator: u32, exponent: i8) -> Self {
        Self {
            generator,
            exponent,
        }
    }
}

/// Knot group presentation with one generator per PD edge label.
///
/// Crossing `[a, b, c, d]` with sign `s` and over-strand generator `x_b`
/// contributes `x_c x_b^s x_a^-1 x_b^-s`. The two edges `b`, `d` of an
/// over-strand carry the same meridian; these identifications are kept in
/// `arc_of`, which maps each edge to its Wirtinger arc.
#[derive(Clone, Debug, PartialEq)]
pub struct WirtingerPresentation {
    generator_count: usize,
    relators: Vec<[Letter; 4]>,
    arc_of: Vec<usize>,
    arc_count: usize,
}

impl WirtingerPresentation {
    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[[Letter; 4]] {
        &self.relators
    }

    /// Wirtinger arc (0-based) containing edge `label`.
    pub fn arc_of(&self, label: u32) -> usize {
        self.arc_of[label as usize - 1]
    }

    /// Number of arcs, equal to the number of crossings.
    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    /// Edge labels grouped by arc, arcs ordered by their smallest label.
    pub fn arcs(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.arc_count];
        for (i, &a) in self.arc_of.iter().enumerate() {
            out[a].push(i as u32 + 1);
        }
        out
    }

    /// Exponent sum of each relator after identifying all generators.
    pub fn abelianized_exponents(&self) -> Vec<i32> {
        self.relators
            .iter()
            .map(|r| r.iter().map(|l| l.exponent as i32).sum())
            .collect()
    }
}

pub fn wirtinger(d: &KnotDiagram) -> WirtingerPresentation {
    let m = d.arc_count() as usize;
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &[_, b, _, dd] in d.crossings() {
        let (rb, rd) = (
            find(&mut parent, b as usize - 1),
            find(&mut parent, dd as usize - 1),
        );
        let (lo, hi) = (rb.min(rd), rb.max(rd));
        parent[hi] = lo;
    }
    let mut index = vec![usize::MAX; m];
    let mut arc_of = vec![0; m];
    let mut arc_count = 0;
    for (e, slot) in arc_of.iter_mut().enumerate() {
        let r = find(&mut parent, e);
        if index[r] == usize::MAX {
            index[r] = arc_count;
            arc_count += 1;
        }
        *slot = index[r];
    }
    let relators = d
        .crossings()
        .iter()
        .enumerate()
        .map(|(i, &[a, b, c, _])| {
            let s = d.sign(i) as i8;
            [
                Letter::new(c, 1),
                Letter::new(b, s),
                Letter::new(a, -1),
                Letter::new(b, -s),
            ]
        })
        .collect();
    WirtingerPresentation {
        generator_count: m,
        relators,
        arc_of,
        arc_count,
    }
}

/// Abelianized Fox matrix: rows are relators, columns are arcs.
pub fn fox_matrix(w: &WirtingerPresentation) -> Vec<Vec<IntLaurentPoly>> {
    let mut rows = Vec::with_capacity(w.relators.len());
    for r in &w.relators {
        let mut row = vec![IntLaurentPoly::zero(); w.arc_count];
        let mut prefix = 0i64;
        for l in r {
            let col = w.arc_of(l.generator);
            if l.exponent > 0 {
                row[col] = &row[col] + &IntLaurentPoly::monomial(1, prefix);
                prefix += 1;
            } else {
                prefix -= 1;
                row[col] = &row[col] - &IntLaurentPoly::monomial(1, prefix);
            }
        }
        rows.push(row);
    }
    rows
}

/// Alexander polynomial with its determinant.
#[derive(Clone, Debug, PartialEq)]
pub struct AlexanderResult {
    /// Canonical form: `delta(t) = delta(1/t)` and `delta(1) = 1`.
    pub delta: IntLaurentPoly,
    pub determinant: BigUint,
}

/// Centres exponents about zero and fixes `p(1) > 0`. Fails when the
/// exponent span is odd.
pub fn canonicalize(p: &IntLaurentPoly) -> Option<IntLaurentPoly> {
    let (lo, hi) = (p.min_exp()?, p.max_exp()?);
    if (lo + hi) % 2 != 0 {
        return None;
    }
    let q = p.shift(-(lo + hi) / 2);
    Some(if q.eval_int(1)?.is_negative() { -q } else { q })
}

pub fn alexander_poly(d: &KnotDiagram) -> Result<AlexanderResult, AlexanderError> {
    if d.is_unknot_diagram() {
        return Ok(AlexanderResult {
            delta: IntLaurentPoly::one(),
            determinant: BigUint::from(1u32),
        });
    }
    let w = wirtinger(d);
    let fox = fox_matrix(&w);
    let drop_col = w.arc_of(1);
    let minor: Vec<Vec<IntLaurentPoly>> = fox[..fox.len() - 1]
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(j, _)| *j != drop_col)
                .map(|(_, p)| p.clone())
                .collect()
        })
        .collect();
    let det = bareiss_det(&minor)?;
    if det.is_zero() {
        return Err(AlexanderError::DegenerateDiagram);
    }
    let delta = canonicalize(&det).ok_or(AlexanderError::DegenerateDiagram)?;
    let determinant = delta
        .eval_int(-1)
        .expect("integer evaluation at -1")
        .abs()
        .to_biguint()
        .expect("absolute value");
    Ok(AlexanderResult { delta, determinant })
}

/// Order of the first homology of the `n`-fold branched cyclic cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverOrder {
    Finite(BigUint),
    Infinite,
}

pub fn cyclic_cover_order(delta: &IntLaurentPoly, n: u32) -> Result<CoverOrder, PolyError> {
    let r = resultant_with_cyclotomic_family(delta, n)?;
    Ok(if r.is_zero() {
        CoverOrder::Infinite
    } else {
        CoverOrder::Finite(r)
    })
}

/// Natural logarithm of a positive big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit head");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_bigint_abs(x: &BigInt) -> f64 {
    ln_biguint(&x.magnitude().clone())
}

/// One term of the Silver–Williams sequence; `value` is `None` when the
/// cover has infinite homology (the entry is skipped).
#[derive(Clone, Debug, PartialEq)]
pub struct SwEntry {
    pub n: u32,
    pub value: Option<f64>,
}

impl SwEntry {
    pub fn skipped(&self) -> bool {
        self.value.is_none()
    }
}

/// `(n, ln(a_n) / n)` for `n = 2..=n_max`.
pub fn silver_williams_sequence(
    delta: &IntLaurentPoly,
    n_max: u32,
) -> Result<Vec<SwEntry>, PolyError> {
    (2..=n_max.max(1))
        .into_par_iter()
        .map(|n| {
            let value = match cyclic_cover_order(delta, n)? {
                CoverOrder::Finite(a) => Some(ln_biguint(&a) / n as f64),
                CoverOrder::Infinite => None,
            };
            Ok(SwEntry { n, value })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::{braid_to_diagram, parse_braid, parse_pd};

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
    const FIGURE_EIGHT: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";

    fn poly(lo: i64, c: &[i64]) -> IntLaurentPoly {
        IntLaurentPoly::from_dense(lo, c)
    }

    #[test]
    fn presentation_shape() {
        let w = wirtinger(&parse_pd(TREFOIL).unwrap());
        assert_eq!((w.generator_count(), w.relators().len()), (6, 3));
        assert_eq!(w.arc_count(), 3);
        let w = wirtinger(&parse_pd(FIGURE_EIGHT).unwrap());
        assert_eq!((w.generator_count(), w.relators().len()), (8, 4));
        assert!(w.abelianized_exponents().iter().all(|&e| e == 0));
        assert!(w.relators().iter().all(|r| r.len() == 4));
    }

    #[test]
    fn trefoil() {
        let r = alexander_poly(&parse_pd(TREFOIL).unwrap()).unwrap();
        assert_eq!(r.delta, poly(-1, &[1, -1, 1]));
        assert_eq!(r.determinant, 3u32.into());
    }

    #[test]
    fn figure_eight() {
        let r = alexander_poly(&parse_pd(FIGURE_EIGHT).unwrap()).unwrap();
        assert_eq!(r.delta, poly(-1, &[-1, 3, -1]));
        assert_eq!(r.delta.to_string(), "-t + 3 - t^-1");
        assert_eq!(r.determinant, 5u32.into());
    }

    #[test]
    fn unknot() {
        let d = braid_to_diagram(&parse_braid("1:").unwrap()).unwrap();
        let r = alexander_poly(&d).unwrap();
        assert_eq!(r.delta, IntLaurentPoly::one());
        assert_eq!(r.determinant, 1u32.into());
    }

    #[test]
    fn braid_and_pd_agree() {
        let b = braid_to_diagram(&parse_braid("2: 1 1 1").unwrap()).unwrap();
        assert_eq!(
            alexander_poly(&b).unwrap(),
            alexander_poly(&parse_pd(TREFOIL).unwrap()).unwrap()
        );
        let f = braid_to_diagram(&parse_braid("3: 1 -2 1 -2").unwrap()).unwrap();
        assert_eq!(alexander_poly(&f).unwrap().determinant, 5u32.into());
    }

    #[test]
    fn cover_orders() {
        let d = poly(-1, &[1, -1, 1]);
        assert_eq!(
            cyclic_cover_order(&d, 2).unwrap(),
            CoverOrder::Finite(3u32.into())
        );
        assert_eq!(
            cyclic_cover_order(&d, 4).unwrap(),
            CoverOrder::Finite(3u32.into())
        );
        assert_eq!(cyclic_cover_order(&d, 6).unwrap(), CoverOrder::Infinite);
    }

    #[test]
    fn trefoil_sequence() {
        let seq = silver_williams_sequence(&poly(-1, &[1, -1, 1]), 100).unwrap();
        assert_eq!(seq.len(), 99);
        for e in &seq {
            assert_eq!(e.skipped(), e.n % 6 == 0, "n = {}", e.n);
            if let Some(v) = e.value {
                assert!(v <= 4f64.ln() / e.n as f64 + 1e-12);
            }
        }
    }

    #[test]
    fn figure_eight_sequence() {
        let seq = silver_williams_sequence(&poly(-1, &[-1, 3, -1]), 100).unwrap();
        let last = seq.last().unwrap().value.unwrap();
        let limit = ((3.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((last - limit).abs() < 0.05);
    }

    #[test]
    fn trivial_sequence() {
        let seq = silver_williams_sequence(&IntLaurentPoly::one(), 20).unwrap();
        assert!(seq.iter().all(|e| e.value == Some(0.0)));
    }

    #[test]
    fn big_logs() {
        let x = BigUint::from(3u32).pow(2000);
        assert!((ln_biguint(&x) - 2000.0 * 3f64.ln()).abs() < 1e-9);
    }
}
