//! Kauffman bracket state sum and the Jones polynomial.

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::notation::KnotDiagram;
use crate::polyring::IntLaurentPoly;

/// Largest diagram accepted by the state sum.
pub const MAX_CROSSINGS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JonesError {
    #[error("{0} crossings exceed the state-sum limit of {MAX_CROSSINGS}")]
    TooManyCrossings(usize),
}

/// Laurent polynomial in `t^(1/4)`: exponent `e` stands for `t^(e/4)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarterLaurentPoly(IntLaurentPoly);

impl QuarterLaurentPoly {
    pub fn from_quarters(p: IntLaurentPoly) -> Self {
        Self(p)
    }

    pub fn quarters(&self) -> &IntLaurentPoly {
        &self.0
    }

    /// True when every exponent is an integer power of `t`.
    pub fn is_integral(&self) -> bool {
        self.0.terms().all(|(e, _)| e % 4 == 0)
    }

    /// The polynomial in `t` when all exponents are integral.
    pub fn to_t_poly(&self) -> Option<IntLaurentPoly> {
        self.is_integral()
            .then(|| IntLaurentPoly::from_terms(self.0.terms().map(|(e, c)| (e / 4, c.clone()))))
    }
}

impl fmt::Display for QuarterLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_t_poly() {
            Some(p) => write!(f, "{p}"),
            None => write!(f, "{} (t^(1/4) exponents)", self.0),
        }
    }
}

pub fn writhe(d: &KnotDiagram) -> i32 {
    d.signs().iter().sum()
}

struct Dsu(Vec<u32>);

impl Dsu {
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[x as usize];
            self.0[x as usize] = self.0[p as usize];
            x = p;
        }
        x
    }

    /// Returns true when the union merged two classes.
    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb) as usize] = ra.min(rb);
        true
    }
}

/// Kauffman bracket in the variable `A` (exponents are powers of `A`).
///
/// Crossing `[a, b, c, d]` expands as `A <a-b, c-d> + A^-1 <a-d, b-c>`.
/// With this choice the table trefoil code `X(1,4,2,5) X(3,6,4,1)
/// X(5,2,6,3)` has bracket `A^7 - A^3 - A^-5`.
pub fn kauffman_bracket(d: &KnotDiagram) -> Result<IntLaurentPoly, JonesError> {
    let n = d.crossing_count();
    if n > MAX_CROSSINGS {
        return Err(JonesError::TooManyCrossings(n));
    }
    if n == 0 {
        return Ok(IntLaurentPoly::one());
    }
    let m = d.arc_count();
    let xs = d.crossings().to_vec();
    // counts[k][loops]: states with k A-smoothings and the given loop count
    let states: u64 = 1 << n;
    let chunk = 1u64 << n.saturating_sub(8).min(14);
    let chunks: Vec<u64> = (0..states.div_ceil(chunk)).collect();
    let partial: Vec<Vec<Vec<u64>>> = chunks
        .par_iter()
        .map(|&c| {
            let mut counts = vec![vec![0u64; n + 2]; n + 1];
            let mut dsu = Dsu((0..=m).collect());
            for s in c * chunk..((c + 1) * chunk).min(states) {
                for (i, x) in dsu.0.iter_mut().enumerate() {
                    *x = i as u32;
                }
                let mut comps = m;
                for (i, &[a, b, cc, dd]) in xs.iter().enumerate() {
                    let (p, q) = if s >> i & 1 == 0 {
                        ((a, b), (cc, dd))
                    } else {
                        ((a, dd), (b, cc))
                    };
                    comps -= dsu.union(p.0, p.1) as u32;
                    comps -= dsu.union(q.0, q.1) as u32;
                }
                let a_count = n - s.count_ones() as usize;
                counts[a_count][comps as usize] += 1;
            }
            counts
        })
        .collect();
    let mut total = vec![vec![0u64; n + 2]; n + 1];
    for part in &partial {
        for (k, row) in part.iter().enumerate() {
            for (l, v) in row.iter().enumerate() {
                total[k][l] += v;
            }
        }
    }
    let loop_factor = IntLaurentPoly::from_dense(-2, &[-1, 0, 0, 0, -1]);
    let mut powers = vec![IntLaurentPoly::one()];
    for l in 1..=n + 1 {
        powers.push(&powers[l - 1] * &loop_factor);
    }
    let mut out = IntLaurentPoly::zero();
    for (k, row) in total.iter().enumerate() {
        let a_exp = k as i64 - (n - k) as i64;
        for (l, &count) in row.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let term = &powers[l - 1] * &IntLaurentPoly::monomial(BigInt::from(count), a_exp);
            out = &out + &term;
        }
    }
    Ok(out)
}

/// Jones polynomial `(-A^3)^(-w) <D>` with `A = t^(-1/4)`.
pub fn jones_poly(d: &KnotDiagram) -> Result<QuarterLaurentPoly, JonesError> {
    let bracket = kauffman_bracket(d)?;
    let w = writhe(d) as i64;
    let sign = if w % 2 == 0 { 1 } else { -1 };
    let normalized = &bracket * &IntLaurentPoly::monomial(sign, -3 * w);
    Ok(QuarterLaurentPoly(IntLaurentPoly::from_terms(
        normalized.terms().map(|(e, c)| (-e, c.clone())),
    )))
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
    fn unknot() {
        let u = KnotDiagram::unknot();
        assert_eq!(kauffman_bracket(&u).unwrap(), IntLaurentPoly::one());
        assert_eq!(
            jones_poly(&u).unwrap().to_t_poly().unwrap(),
            IntLaurentPoly::one()
        );
    }

    #[test]
    fn trefoil_bracket_pins_mirror() {
        let t = parse_pd(TREFOIL).unwrap();
        // A^7 - A^3 - A^-5 for the table code, its mirror -A^5 - A^-3 + A^-7
        let expect = &(&IntLaurentPoly::monomial(1, 7) - &IntLaurentPoly::monomial(1, 3))
            - &IntLaurentPoly::monomial(1, -5);
        assert_eq!(kauffman_bracket(&t).unwrap(), expect);
        let mirror = &(&IntLaurentPoly::monomial(-1, 5) - &IntLaurentPoly::monomial(1, -3))
            + &IntLaurentPoly::monomial(1, -7);
        assert_eq!(kauffman_bracket(&t.mirror()).unwrap(), mirror);
    }

    #[test]
    fn trefoil_jones() {
        let t = parse_pd(TREFOIL).unwrap();
        let j = jones_poly(&t).unwrap().to_t_poly().unwrap();
        assert_eq!(j, poly(-4, &[-1, 1, 0, 1]));
        assert_eq!(j.eval_int(-1).unwrap(), BigInt::from(-3));
        assert_eq!(writhe(&t), -3);
        assert_eq!(writhe(&t.mirror()), 3);
    }

    #[test]
    fn figure_eight_jones() {
        let f = parse_pd(FIGURE_EIGHT).unwrap();
        let j = jones_poly(&f).unwrap().to_t_poly().unwrap();
        assert_eq!(j, poly(-2, &[1, -1, 1, -1, 1]));
        assert_eq!(writhe(&f), 0);
    }

    #[test]
    fn too_many() {
        let word = format!("2: {}", "1 ".repeat(25));
        let d = braid_to_diagram(&parse_braid(&word).unwrap()).unwrap();
        assert_eq!(kauffman_bracket(&d), Err(JonesError::TooManyCrossings(25)));
        assert_eq!(jones_poly(&d), Err(JonesError::TooManyCrossings(25)));
    }
}
