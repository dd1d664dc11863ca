//! Twisted Alexander polynomial of a knot for an ingested SL(2,C)
//! representation.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, BufReader, Read};
use std::ops::{Mul, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::alexander::{wirtinger, WirtingerPresentation};
use crate::mahler::log_mahler;
use crate::notation::KnotDiagram;
use crate::polyring::DET_PRUNE;
use crate::polyring::{CxLaurentPoly, PolyError, PolyMatrix};

/// Default validation slack for representation files.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TwistedError {
    #[error("malformed representation file: {0}")]
    MalformedSyntax(String),
    #[error("representation does not match the diagram: {0}")]
    ArcMismatch(String),
    #[error("matrix of arc {label} has determinant {det}, not 1")]
    NotSL2 { label: u32, det: Complex64 },
    #[error("not a representation: {0}")]
    NotARepresentation(String),
    #[error("representation is reducible (all commutator traces equal 2)")]
    Reducible,
    #[error("twisted quotient is not exact (remainder {remainder:e})")]
    DivisionFailure { remainder: f64 },
    #[error("no deletable generator column")]
    DegenerateColumn,
    #[error("empirical constant of an empty list")]
    EmptyInput,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// 2x2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        let (o, z) = (Complex64::one(), Complex64::zero());
        Mat2([[o, z], [z, o]])
    }

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn inverse(&self) -> Self {
        let m = &self.0;
        let d = self.det();
        Mat2([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn frobenius(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn pow(&self, e: i8) -> Self {
        match e {
            1 => *self,
            -1 => self.inverse(),
            _ => {
                let base = if e < 0 { self.inverse() } else { *self };
                (0..e.unsigned_abs()).fold(Mat2::identity(), |acc, _| acc * base)
            }
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[Complex64::zero(); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ])
    }
}

/// Matrices assigned to the edge labels of a diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2Rep {
    pub name: String,
    pub arc_matrices: BTreeMap<u32, Mat2>,
    pub tolerance: f64,
}

impl Sl2Rep {
    /// Every matrix replaced by `P M P^-1`.
    pub fn conjugated(&self, p: &Mat2) -> Self {
        let pi = p.inverse();
        Self {
            name: self.name.clone(),
            arc_matrices: self
                .arc_matrices
                .iter()
                .map(|(k, m)| (*k, *p * *m * pi))
                .collect(),
            tolerance: self.tolerance,
        }
    }

    fn matrix(&self, label: u32) -> Mat2 {
        self.arc_matrices[&label]
    }

    /// Checks arc labels, SL(2,C) membership, the Wirtinger relators (and
    /// over-strand identifications) and irreducibility.
    ///
    /// Relator residuals are measured against the product of the factors'
    /// Frobenius norms so that large-entry representations are not rejected
    /// for rounding.
    pub fn validate(&self, d: &KnotDiagram) -> Result<(), TwistedError> {
        let m = d.arc_count();
        let labels: Vec<u32> = self.arc_matrices.keys().copied().collect();
        if labels != (1..=m).collect::<Vec<_>>() {
            return Err(TwistedError::ArcMismatch(format!(
                "diagram has labels 1..{m}, file has {} entries",
                labels.len()
            )));
        }
        let tol = self.tolerance;
        for (&label, mat) in &self.arc_matrices {
            let det = mat.det();
            if (det - 1.0).norm() > tol {
                return Err(TwistedError::NotSL2 { label, det });
            }
        }
        let w = wirtinger(d);
        for (i, r) in w.relators().iter().enumerate() {
            let mut prod = Mat2::identity();
            let mut scale = 1.0;
            for l in r {
                let f = self.matrix(l.generator).pow(l.exponent);
                scale *= f.frobenius();
                prod = prod * f;
            }
            let dev = (prod - Mat2::identity()).frobenius();
            if dev > tol * scale.max(1.0) {
                return Err(TwistedError::NotARepresentation(format!(
                    "relator of crossing {} deviates from the identity by {dev:e}",
                    i + 1
                )));
            }
        }
        for (i, &[_, b, _, dd]) in d.crossings().iter().enumerate() {
            let (mb, md) = (self.matrix(b), self.matrix(dd));
            let dev = (mb - md).frobenius();
            if dev > tol * mb.frobenius().max(1.0) {
                return Err(TwistedError::NotARepresentation(format!(
                    "over-strand edges {b} and {dd} of crossing {} differ by {dev:e}",
                    i + 1
                )));
            }
        }
        let arcs: Vec<Mat2> = w.arcs().iter().map(|a| self.matrix(a[0])).collect();
        let irreducible = arcs.iter().enumerate().any(|(i, a)| {
            arcs[i + 1..].iter().any(|b| {
                let comm = *a * *b * a.inverse() * b.inverse();
                (comm.trace() - 2.0).norm() > tol
            })
        });
        if !irreducible {
            return Err(TwistedError::Reducible);
        }
        Ok(())
    }
}

impl fmt::Display for Sl2Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "knot {} arcs {} tolerance {:e}",
            self.name,
            self.arc_matrices.len(),
            self.tolerance
        )?;
        for (label, m) in &self.arc_matrices {
            write!(f, "arc {label}")?;
            for c in m.0.iter().flatten() {
                write!(f, " {:e} {:e}", c.re, c.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn parse_rep<R: Read>(stream: R) -> Result<Sl2Rep, TwistedError> {
    let bad = |line: usize, msg: &str| TwistedError::MalformedSyntax(format!("line {line}: {msg}"));
    let mut header: Option<(String, usize, f64)> = None;
    let mut mats = BTreeMap::new();
    for (i, line) in BufReader::new(stream).lines().enumerate() {
        let line = line.map_err(|e| TwistedError::MalformedSyntax(e.to_string()))?;
        let n = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tok: Vec<&str> = line.split_whitespace().collect();
        match (tok[0], &header) {
            ("knot", None) => {
                if tok.len() != 6 || tok[2] != "arcs" || tok[4] != "tolerance" {
                    return Err(bad(
                        n,
                        "expected `knot <name> arcs <count> tolerance <real>`",
                    ));
                }
                let count = tok[3].parse().map_err(|_| bad(n, "arc count"))?;
                let tol: f64 = tok[5].parse().map_err(|_| bad(n, "tolerance"))?;
                if tol.is_nan() || tol <= 0.0 {
                    return Err(bad(n, "tolerance must be positive"));
                }
                header = Some((tok[1].to_string(), count, tol));
            }
            ("knot", Some(_)) => return Err(bad(n, "second header")),
            ("arc", Some(_)) => {
                if tok.len() != 10 {
                    return Err(bad(n, "expected `arc <label>` and eight reals"));
                }
                let label: u32 = tok[1].parse().map_err(|_| bad(n, "arc label"))?;
                let v = tok[2..]
                    .iter()
                    .map(|t| {
                        t.parse::<f64>()
                            .map_err(|_| bad(n, &format!("number {t:?}")))
                    })
                    .collect::<Result<Vec<f64>, _>>()?;
                let c = |k: usize| Complex64::new(v[2 * k], v[2 * k + 1]);
                if mats
                    .insert(label, Mat2::new(c(0), c(1), c(2), c(3)))
                    .is_some()
                {
                    return Err(TwistedError::ArcMismatch(format!(
                        "arc {label} listed twice"
                    )));
                }
            }
            ("arc", None) => return Err(bad(n, "arc line before header")),
            (other, _) => return Err(bad(n, &format!("unknown record {other:?}"))),
        }
    }
    let (name, count, tolerance) = header.ok_or_else(|| bad(0, "missing header"))?;
    if mats.len() != count {
        return Err(TwistedError::ArcMismatch(format!(
            "header announces {count} arcs, file lists {}",
            mats.len()
        )));
    }
    Ok(Sl2Rep {
        name,
        arc_matrices: mats,
        tolerance,
    })
}

/// Reads and validates a representation file against `diagram`.
pub fn load_rep<R: Read>(stream: R, diagram: &KnotDiagram) -> Result<Sl2Rep, TwistedError> {
    let rep = parse_rep(stream)?;
    if rep.arc_matrices.len() != diagram.arc_count() as usize {
        return Err(TwistedError::ArcMismatch(format!(
            "file has {} arcs, diagram has {}",
            rep.arc_matrices.len(),
            diagram.arc_count()
        )));
    }
    rep.validate(diagram)?;
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TwistedResult {
    pub t_poly: CxLaurentPoly,
    pub eval_minus_one: Complex64,
    pub eval_plus_one: Complex64,
    pub log_mahler: f64,
}

/// `t^k M` as a 2x2 block of Laurent polynomials.
fn block(m: &Mat2, k: i64) -> [[CxLaurentPoly; 2]; 2] {
    let e = |i: usize, j: usize| CxLaurentPoly::monomial(m.0[i][j], k);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Fox matrix twisted by `x -> t rho(x)`, relators by arcs in 2x2 blocks.
fn twisted_fox(w: &WirtingerPresentation, rep: &Sl2Rep) -> PolyMatrix {
    let n = w.arc_count();
    let mut out = PolyMatrix::zeros(2 * w.relators().len(), 2 * n);
    for (i, r) in w.relators().iter().enumerate() {
        let mut prefix = Mat2::identity();
        let mut power = 0i64;
        for l in r {
            let x = rep.matrix(l.generator).pow(l.exponent);
            let (term, k) = if l.exponent > 0 {
                (prefix, power)
            } else {
                (prefix * x, power + l.exponent as i64)
            };
            let sign = if l.exponent > 0 { 1.0 } else { -1.0 };
            let b = block(&term.scale(Complex64::new(sign, 0.0)), k);
            let j = w.arc_of(l.generator);
            for (a, row) in b.iter().enumerate() {
                for (c, p) in row.iter().enumerate() {
                    let cur = out.get(2 * i + a, 2 * j + c).clone();
                    out.set(2 * i + a, 2 * j + c, &cur + p);
                }
            }
            prefix = prefix * x;
            power += l.exponent as i64;
        }
    }
    out
}

/// Recentres exponents about zero and makes `Re T(1) >= 0`.
pub fn normalize(p: &CxLaurentPoly) -> CxLaurentPoly {
    let (Some(lo), Some(hi)) = (p.min_exp(), p.max_exp()) else {
        return p.clone();
    };
    let q = p.shift(-(lo + hi).div_euclid(2));
    let at_one: Complex64 = q.terms().map(|(_, c)| c).sum();
    if at_one.re < 0.0 {
        -&q
    } else {
        q
    }
}

/// Twisted polynomial with the column block of Wirtinger arc `arc` deleted
/// (together with the last relator).
pub fn twisted_alexander_with(
    d: &KnotDiagram,
    rep: &Sl2Rep,
    arc: usize,
) -> Result<TwistedResult, TwistedError> {
    let w = wirtinger(d);
    if arc >= w.arc_count() {
        return Err(TwistedError::DegenerateColumn);
    }
    let fox = twisted_fox(&w, rep);
    let last = w.relators().len() - 1;
    let minor = fox.minor(&[2 * last, 2 * last + 1], &[2 * arc, 2 * arc + 1]);
    let numerator = minor.det()?;
    let x = rep.matrix(w.arcs()[arc][0]);
    let denominator =
        CxLaurentPoly::from_terms([(0, Complex64::one()), (1, -x.trace()), (2, x.det())]);
    if numerator.is_zero() || denominator.max_abs() < rep.tolerance {
        return Err(TwistedError::DegenerateColumn);
    }
    let spread = rep
        .arc_matrices
        .values()
        .map(|m| m.frobenius().powi(2))
        .fold(1.0, f64::max);
    let quotient = numerator
        .div_exact_with(&denominator, DET_PRUNE * spread)
        .map_err(|e| match e {
            PolyError::NotDivisible { remainder } => TwistedError::DivisionFailure { remainder },
            other => other.into(),
        })?;
    let t_poly = normalize(&quotient);
    Ok(TwistedResult {
        eval_minus_one: t_poly.eval(Complex64::new(-1.0, 0.0))?,
        eval_plus_one: t_poly.eval(Complex64::one())?,
        log_mahler: log_mahler(&t_poly)?,
        t_poly,
    })
}

/// Normalized twisted Alexander polynomial, deleting the arc through edge 1
/// when it is usable and otherwise the first usable arc.
pub fn twisted_alexander(d: &KnotDiagram, rep: &Sl2Rep) -> Result<TwistedResult, TwistedError> {
    if d.is_unknot_diagram() {
        return Err(TwistedError::Reducible);
    }
    let w = wirtinger(d);
    let first = w.arc_of(1);
    let order = std::iter::once(first).chain((0..w.arc_count()).filter(|&j| j != first));
    for arc in order {
        match twisted_alexander_with(d, rep, arc) {
            Err(TwistedError::DegenerateColumn) => continue,
            other => return other,
        }
    }
    Err(TwistedError::DegenerateColumn)
}

/// Mean of `log_mahler / volume` over the list.
pub fn empirical_constant(records: &[(f64, f64)]) -> Result<f64, TwistedError> {
    if records.is_empty() {
        return Err(TwistedError::EmptyInput);
    }
    Ok(crate::stats::stable_sum(records.iter().map(|(m, v)| m / v)) / records.len() as f64)
}
