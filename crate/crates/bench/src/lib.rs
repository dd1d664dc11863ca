//! Inputs shared by the benchmarks in benches/.

use knotvol::notation::{braid_to_diagram, parse_braid, parse_pd, KnotDiagram};
use knotvol::polyring::IntLaurentPoly;

pub const FIGURE_EIGHT: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";

pub fn figure_eight() -> KnotDiagram {
    parse_pd(FIGURE_EIGHT).expect("valid PD")
}

/// Closure of `(s1 s2^-1)^k` on three strands, a knot with `2k` crossings
/// when `k` is not a multiple of 3.
pub fn alternating_braid(k: usize) -> KnotDiagram {
    let word = format!("3: {}", "1 -2 ".repeat(k));
    braid_to_diagram(&parse_braid(&word).expect("valid braid")).expect("closure is a knot")
}

/// Dense integer polynomial with coefficients cycling through `-4..=4`.
pub fn test_poly(degree: usize) -> IntLaurentPoly {
    let mut c: Vec<i64> = (0..=degree).map(|i| (i as i64 * 7 + 3) % 9 - 4).collect();
    if c[0] == 0 {
        c[0] = 1;
    }
    if c[degree] == 0 {
        c[degree] = 1;
    }
    IntLaurentPoly::from_dense(0, &c)
}
