//! Population statistics of an invariant against hyperbolic volume.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::notation::CensusRecord;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("statistic of an empty sample")]
    EmptyInput,
    #[error("correlation undefined: a coordinate has zero variance")]
    DegenerateSample,
    #[error("no invariant value for knot {0:?}")]
    MissingValue(String),
    #[error("population filter selects no knots")]
    EmptyPopulation,
    #[error("knot {name:?} has non-positive volume {volume}")]
    NonPositiveVolume { name: String, volume: f64 },
}

/// Sum in order of increasing magnitude, so the result does not depend on
/// the input order.
pub fn stable_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
    v.into_iter().sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplePoint {
    pub name: String,
    pub phi: f64,
    pub volume: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Sample {
    points: Vec<SamplePoint>,
}

impl Sample {
    pub fn new(points: Vec<SamplePoint>) -> Result<Self, StatsError> {
        if let Some(p) = points.iter().find(|p| p.volume.is_nan() || p.volume <= 0.0) {
            return Err(StatsError::NonPositiveVolume {
                name: p.name.clone(),
                volume: p.volume,
            });
        }
        Ok(Self { points })
    }

    /// Unnamed points from `(phi, volume)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self, StatsError> {
        Self::new(
            pairs
                .iter()
                .enumerate()
                .map(|(i, &(phi, volume))| SamplePoint {
                    name: i.to_string(),
                    phi,
                    volume,
                })
                .collect(),
        )
    }

    pub fn points(&self) -> &[SamplePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn values(&self, of: Quantity) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| match of {
                Quantity::Phi => p.phi,
                Quantity::PhiOverVol => p.phi / p.volume,
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Phi,
    PhiOverVol,
}

fn mean(v: &[f64]) -> f64 {
    stable_sum(v.iter().copied()) / v.len() as f64
}

fn population_sd(v: &[f64]) -> f64 {
    let m = mean(v);
    (stable_sum(v.iter().map(|x| (x - m) * (x - m))) / v.len() as f64).sqrt()
}

pub fn average(s: &Sample, of: Quantity) -> Result<f64, StatsError> {
    if s.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    Ok(mean(&s.values(of)))
}

/// Population standard deviation (divides by the sample size).
pub fn std_dev(s: &Sample, of: Quantity) -> Result<f64, StatsError> {
    if s.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    Ok(population_sd(&s.values(of)))
}

/// Pearson correlation of `phi` and volume,
/// `sum(dphi dv) / sqrt(sum dphi^2 * sum dv^2)`.
pub fn pearson_r(s: &Sample) -> Result<f64, StatsError> {
    if s.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let x = s.values(Quantity::Phi);
    let y: Vec<f64> = s.points.iter().map(|p| p.volume).collect();
    let constant = |v: &[f64]| v.iter().all(|a| *a == v[0]);
    if s.len() < 2 || constant(&x) || constant(&y) {
        return Err(StatsError::DegenerateSample);
    }
    let (mx, my) = (mean(&x), mean(&y));
    let dx: Vec<f64> = x.iter().map(|a| a - mx).collect();
    let dy: Vec<f64> = y.iter().map(|a| a - my).collect();
    let sxy = stable_sum(dx.iter().zip(&dy).map(|(a, b)| a * b));
    let sxx = stable_sum(dx.iter().map(|a| a * a));
    let syy = stable_sum(dy.iter().map(|a| a * a));
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::DegenerateSample);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Population {
    Alternating,
    NonAlternating,
    All,
}

impl Population {
    pub const ALL: [Population; 3] = [
        Population::Alternating,
        Population::NonAlternating,
        Population::All,
    ];

    pub fn admits(self, alternating: bool) -> bool {
        match self {
            Population::Alternating => alternating,
            Population::NonAlternating => !alternating,
            Population::All => true,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Population::Alternating => "alternating",
            Population::NonAlternating => "nonalternating",
            Population::All => "all",
        }
    }
}

impl fmt::Display for Population {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Population {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "alternating" => Ok(Population::Alternating),
            "nonalternating" | "non_alternating" => Ok(Population::NonAlternating),
            "all" => Ok(Population::All),
            other => Err(format!("unknown population {other:?}")),
        }
    }
}

/// One row of a statistics table. `pearson_r` is `None` when the sample is
/// degenerate (fewer than two knots or a constant coordinate).
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationReport {
    pub invariant_name: String,
    pub population: Population,
    pub n: usize,
    pub a_vol: f64,
    pub sigma_vol: f64,
    pub big_sigma_vol: f64,
    pub pearson_r: Option<f64>,
}

/// Statistics of `values` over the census knots admitted by `population`
/// with at most `max_crossings` crossings.
pub fn report(
    census: &[CensusRecord],
    values: &BTreeMap<String, f64>,
    invariant_name: &str,
    population: Population,
    max_crossings: u32,
) -> Result<CorrelationReport, StatsError> {
    let mut points = Vec::new();
    for r in census
        .iter()
        .filter(|r| population.admits(r.alternating) && r.crossings <= max_crossings)
    {
        let phi = *values
            .get(&r.name)
            .ok_or_else(|| StatsError::MissingValue(r.name.clone()))?;
        points.push(SamplePoint {
            name: r.name.clone(),
            phi,
            volume: r.volume,
        });
    }
    if points.is_empty() {
        return Err(StatsError::EmptyPopulation);
    }
    let s = Sample::new(points)?;
    let a_vol = average(&s, Quantity::PhiOverVol)?;
    let sigma_vol = std_dev(&s, Quantity::PhiOverVol)?;
    let pearson_r = match pearson_r(&s) {
        Ok(r) => Some(r),
        Err(StatsError::DegenerateSample) => None,
        Err(e) => return Err(e),
    };
    Ok(CorrelationReport {
        invariant_name: invariant_name.to_string(),
        population,
        n: s.len(),
        a_vol,
        sigma_vol,
        big_sigma_vol: sigma_vol / a_vol,
        pearson_r,
    })
}
