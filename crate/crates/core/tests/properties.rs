use std::f64::consts::PI;

use knotvol::alexander::{alexander_poly, silver_williams_sequence};
use knotvol::mahler::{mahler_quadrature, mahler_roots};
use knotvol::notation::{braid_to_diagram, parse_pd, BraidWord, KnotDiagram};
use knotvol::polyring::{
    poly_det, resultant_with_cyclotomic_family, CxLaurentPoly, IntLaurentPoly, PolyMatrix, RootSet,
};
use knotvol::stats::{average, pearson_r, stable_sum, std_dev, Quantity, Sample};
use num_bigint::BigUint;
use num_complex::Complex64;
use proptest::prelude::*;

fn int_poly(max_len: usize, bound: i64) -> impl Strategy<Value = IntLaurentPoly> {
    (
        -3i64..=3,
        prop::collection::vec(-bound..=bound, 1..=max_len),
    )
        .prop_map(|(lo, c)| IntLaurentPoly::from_dense(lo, &c))
}

/// Integer polynomial of exact degree `1..=max_deg` with nonzero constant term.
fn honest_poly(max_deg: usize, bound: i64) -> impl Strategy<Value = IntLaurentPoly> {
    let nz = prop_oneof![-bound..=-1i64, 1..=bound];
    (
        nz.clone(),
        prop::collection::vec(-bound..=bound, 0..max_deg),
        nz,
    )
        .prop_map(|(a, mid, b)| {
            let mut c = vec![a];
            c.extend(mid);
            c.push(b);
            IntLaurentPoly::from_dense(0, &c)
        })
}

fn cx_poly() -> impl Strategy<Value = CxLaurentPoly> {
    prop::collection::vec((-5i32..=5, -5i32..=5), 1..=3).prop_map(|c| {
        CxLaurentPoly::from_terms(
            c.into_iter()
                .enumerate()
                .map(|(e, (re, im))| (e as i64 - 1, Complex64::new(re as f64, im as f64))),
        )
    })
}

fn laplace3(m: &[Vec<CxLaurentPoly>]) -> CxLaurentPoly {
    let mut out = CxLaurentPoly::zero();
    for (j, sign) in [(0usize, 1.0), (1, -1.0), (2, 1.0)] {
        let (a, b) = match j {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor = &(&m[1][a] * &m[2][b]) - &(&m[1][b] * &m[2][a]);
        let term = &m[0][j] * &minor;
        out = &out + &term.scale(Complex64::new(sign, 0.0));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(p in int_poly(6, 9), q in int_poly(6, 9), r in int_poly(6, 9)) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
    }

    #[test]
    fn exact_division_inverts_multiplication(p in int_poly(5, 9), q in honest_poly(4, 9)) {
        prop_assert_eq!((&p * &q).div_exact(&q).unwrap(), p);
    }

    #[test]
    fn interpolated_det_matches_laplace(entries in prop::collection::vec(cx_poly(), 9)) {
        let rows: Vec<Vec<CxLaurentPoly>> = entries.chunks(3).map(|c| c.to_vec()).collect();
        let expect = laplace3(&rows);
        let got = poly_det(&PolyMatrix::from_rows(rows).unwrap()).unwrap();
        let scale = expect.max_abs().max(1.0);
        prop_assert!(got.max_distance(&expect) <= 1e-8 * scale, "{} vs {}", got, expect);
    }

    #[test]
    fn roots_are_certified(p in honest_poly(12, 20)) {
        let rs = RootSet::of(&p).unwrap();
        let cx = p.to_cx();
        let norm: f64 = cx.terms().map(|(_, c)| c.norm()).sum();
        let deg = rs.degree() as i32;
        for r in &rs.roots {
            let res = cx.eval(*r).unwrap().norm();
            prop_assert!(res <= 1e-9 * norm * r.norm().max(1.0).powi(deg));
        }
        let monic = rs.monic_coefficients();
        let dense = cx.dense();
        let lead = *dense.last().unwrap();
        let size = dense.iter().map(|c| (c / lead).norm()).fold(1.0, f64::max);
        for (a, b) in monic.iter().zip(&dense) {
            prop_assert!((a - b / lead).norm() <= 1e-6 * size);
        }
    }

    #[test]
    fn cyclotomic_resultant_matches_float_product(p in honest_poly(8, 6), n in 2u32..=50) {
        let cx = p.to_cx();
        let mut prod = Complex64::new(1.0, 0.0);
        for j in 1..n {
            prod *= cx.eval(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)).unwrap();
        }
        let exact = resultant_with_cyclotomic_family(&p, n).unwrap();
        let float = prod.norm();
        if float > 0.5 && float < (1u64 << 40) as f64 {
            prop_assert_eq!(exact, BigUint::from(float.round() as u64));
        } else if float > 0.5 {
            let e: f64 = exact.to_string().parse().unwrap();
            prop_assert!((e - float).abs() <= 1e-10 * float, "{e} vs {float}");
        }
    }

    #[test]
    fn mahler_methods_agree(p in honest_poly(20, 9)) {
        let roots = mahler_roots(&p).unwrap();
        let margin = roots.root_margin.unwrap();
        prop_assume!(margin > 1e-3);
        let nodes = ((40.0 / margin) as usize).next_power_of_two().clamp(64, 1 << 16);
        let quad = mahler_quadrature(&p, nodes).unwrap();
        prop_assert!((roots.measure - quad.measure).abs() / roots.measure <= 1e-6,
            "{} vs {} margin {margin}", roots.measure, quad.measure);
    }

    #[test]
    fn mahler_is_multiplicative(p in honest_poly(8, 9), q in honest_poly(8, 9)) {
        let (mp, mq) = (mahler_roots(&p).unwrap().measure, mahler_roots(&q).unwrap().measure);
        let mpq = mahler_roots(&(&p * &q)).unwrap().measure;
        prop_assert!((mpq - mp * mq).abs() <= 1e-9 * mpq);
    }

    #[test]
    fn mahler_ignores_units(p in honest_poly(8, 9), k in -5i64..=5) {
        let m = mahler_roots(&p).unwrap().log_measure;
        prop_assert_eq!(mahler_roots(&p.shift(k)).unwrap().log_measure, m);
        prop_assert_eq!(mahler_roots(&-&p).unwrap().log_measure, m);
    }

    #[test]
    fn pearson_in_range(pairs in prop::collection::vec((-1e3f64..1e3, 0.1f64..50.0), 2..40)) {
        if let Ok(r) = pearson_r(&Sample::from_pairs(&pairs).unwrap()) {
            prop_assert!((-1.0..=1.0).contains(&r));
        }
    }

    #[test]
    fn pearson_affine_invariant(
        pairs in prop::collection::vec((-1e2f64..1e2, 0.1f64..50.0), 3..40),
        a in 0.01f64..100.0,
        b in -100f64..100.0,
    ) {
        let s = Sample::from_pairs(&pairs).unwrap();
        prop_assume!(pearson_r(&s).is_ok());
        let moved: Vec<(f64, f64)> = pairs.iter().map(|&(x, v)| (a * x + b, v)).collect();
        let r0 = pearson_r(&s).unwrap();
        let r1 = pearson_r(&Sample::from_pairs(&moved).unwrap()).unwrap();
        prop_assert!((r0 - r1).abs() <= 1e-12, "{r0} {r1}");
    }

    #[test]
    fn statistics_ignore_order(
        pairs in prop::collection::vec((-1e3f64..1e3, 0.1f64..50.0), 1..40),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = pairs.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let (s, t) = (Sample::from_pairs(&pairs).unwrap(), Sample::from_pairs(&shuffled).unwrap());
        for q in [Quantity::Phi, Quantity::PhiOverVol] {
            prop_assert_eq!(average(&s, q).unwrap(), average(&t, q).unwrap());
            prop_assert_eq!(std_dev(&s, q).unwrap(), std_dev(&t, q).unwrap());
        }
        prop_assert_eq!(
            stable_sum(pairs.iter().map(|p| p.0)),
            stable_sum(shuffled.iter().map(|p| p.0))
        );
    }

    #[test]
    fn braid_closures_are_valid_knots(
        strands in 2u32..=5,
        raw in prop::collection::vec((1i32..=4, any::<bool>()), 0..14),
    ) {
        let letters: Vec<i32> = raw
            .iter()
            .map(|&(g, s)| {
                let g = (g - 1) % (strands as i32 - 1) + 1;
                if s { g } else { -g }
            })
            .collect();
        let word = BraidWord::new(strands, letters).unwrap();
        prop_assume!(word.components() == 1);
        let d = braid_to_diagram(&word).unwrap();
        let again = KnotDiagram::new(d.crossings().to_vec()).unwrap();
        prop_assert_eq!(&again, &d);
        prop_assert_eq!(parse_pd(&d.to_string()).unwrap(), d.clone());
        let delta = alexander_poly(&d).unwrap().delta;
        prop_assert!(delta.is_palindromic());
        prop_assert_eq!(delta.eval_int(1).unwrap(), 1.into());
    }
}

#[test]
fn figure_eight_sequence_converges() {
    let delta = IntLaurentPoly::from_dense(-1, &[-1, 3, -1]);
    let ln_m = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    let seq = silver_williams_sequence(&delta, 200).unwrap();
    let c = seq
        .iter()
        .filter(|e| e.n >= 10)
        .map(|e| (e.value.unwrap() - ln_m).abs() * e.n as f64)
        .fold(0.0, f64::max);
    assert!(c < 10.0, "fitted constant {c}");
}

#[test]
fn kronecker_products_have_measure_one() {
    let p = &IntLaurentPoly::from_dense(0, &[1, -1, 1]) * &IntLaurentPoly::from_dense(0, &[1, 1]);
    assert!((mahler_roots(&p).unwrap().measure - 1.0).abs() <= 1e-9);
}
