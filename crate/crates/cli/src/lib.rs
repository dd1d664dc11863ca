//! Census pipeline: per-knot invariants, population tables, scatter data and
//! cyclic-cover convergence tables.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use knotvol::alexander::{alexander_poly, ln_biguint, silver_williams_sequence};
use knotvol::jones::jones_poly;
use knotvol::mahler::{log_mahler, mahler_roots};
use knotvol::notation::{parse_census, CensusRecord, KnotDiagram};
use knotvol::polyring::IntLaurentPoly;
use knotvol::stats::{report, CorrelationReport, Population, StatsError};
use knotvol::twisted::{load_rep, twisted_alexander};
use log::{info, warn};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("census error: {0}")]
    Census(String),
    #[error("knot {0:?} is not in the census")]
    UnknownKnot(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Invariant {
    LnDet,
    LnMahlerAlex,
    LnTMinus1,
    LnTPlus1,
    LnMahlerT,
    LnMahlerJones,
}

impl Invariant {
    /// Table row order; figure `k` plots `ALL[k - 1]`.
    pub const ALL: [Invariant; 6] = [
        Invariant::LnDet,
        Invariant::LnMahlerAlex,
        Invariant::LnTMinus1,
        Invariant::LnTPlus1,
        Invariant::LnMahlerT,
        Invariant::LnMahlerJones,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Invariant::LnDet => "ln_det",
            Invariant::LnMahlerAlex => "ln_mahler_alex",
            Invariant::LnTMinus1 => "ln_T_minus1",
            Invariant::LnTPlus1 => "ln_T_plus1",
            Invariant::LnMahlerT => "ln_mahler_T",
            Invariant::LnMahlerJones => "ln_mahler_jones",
        }
    }

    pub fn needs_rep(self) -> bool {
        matches!(
            self,
            Invariant::LnTMinus1 | Invariant::LnTPlus1 | Invariant::LnMahlerT
        )
    }

    pub fn figure(self) -> usize {
        Invariant::ALL.iter().position(|&i| i == self).unwrap() + 1
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Invariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Invariant::ALL
            .into_iter()
            .find(|i| i.as_str() == s)
            .ok_or_else(|| format!("unknown invariant {s:?}"))
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub census_path: PathBuf,
    pub rep_dir: Option<PathBuf>,
    pub max_crossings: u32,
    pub invariants: Vec<Invariant>,
    pub output_dir: PathBuf,
    pub thread_count: usize,
    pub sw_nmax: u32,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.max_crossings < 3 {
            return Err(CliError::Config(format!(
                "max crossings {} is below 3",
                self.max_crossings
            )));
        }
        if self.invariants.is_empty() {
            return Err(CliError::Config("no invariants selected".into()));
        }
        if self.rep_dir.is_none() {
            if let Some(i) = self.invariants.iter().find(|i| i.needs_rep()) {
                return Err(CliError::Config(format!(
                    "{i} requires a representation directory"
                )));
            }
        }
        if self.thread_count == 0 {
            return Err(CliError::Config("thread count must be positive".into()));
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool, CliError> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.thread_count)
            .build()
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

/// `x` with 10 significant digits; exponent form outside `[1e-6, 1e10)`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.9e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-6..10).contains(&exp) {
        format!("{:.*}", (9 - exp) as usize, x)
    } else {
        sci
    }
}

pub fn read_census(path: &Path) -> Result<Vec<CensusRecord>, CliError> {
    let file = File::open(path).map_err(io_err(path))?;
    parse_census(file).map_err(|e| CliError::Census(format!("{}: {e}", path.display())))
}

/// One row of `invariants.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantRow {
    pub name: String,
    pub crossings: u32,
    pub alternating: bool,
    pub volume: f64,
    pub values: BTreeMap<Invariant, Option<f64>>,
}

/// Per-knot computation. Errors in the untwisted invariants are census-level;
/// representation problems only blank the twisted columns.
pub fn compute_row(
    record: &CensusRecord,
    selection: &[Invariant],
    rep_dir: Option<&Path>,
) -> Result<InvariantRow, CliError> {
    let name = &record.name;
    let ctx = |e: &dyn fmt::Display| CliError::Census(format!("{name}: {e}"));
    let d = record
        .pd
        .as_ref()
        .ok_or_else(|| CliError::Census(format!("{name}: no PD code")))?;
    let mut values = BTreeMap::new();
    let alex = if selection
        .iter()
        .any(|i| matches!(i, Invariant::LnDet | Invariant::LnMahlerAlex))
    {
        Some(alexander_poly(d).map_err(|e| ctx(&e))?)
    } else {
        None
    };
    let twisted = if selection.iter().any(|i| i.needs_rep()) {
        twisted_for(record, d, rep_dir.expect("validated config"))
    } else {
        None
    };
    for &inv in selection {
        let v = match inv {
            Invariant::LnDet => Some(ln_biguint(&alex.as_ref().unwrap().determinant)),
            Invariant::LnMahlerAlex => {
                Some(log_mahler(&alex.as_ref().unwrap().delta).map_err(|e| ctx(&e))?)
            }
            Invariant::LnMahlerJones => {
                let j = jones_poly(d).map_err(|e| ctx(&e))?;
                let t = j.to_t_poly().ok_or_else(|| {
                    CliError::Census(format!("{name}: Jones polynomial not integral"))
                })?;
                Some(log_mahler(&t).map_err(|e| ctx(&e))?)
            }
            Invariant::LnTMinus1 => twisted.as_ref().map(|t| t.eval_minus_one.norm().ln()),
            Invariant::LnTPlus1 => twisted.as_ref().map(|t| t.eval_plus_one.norm().ln()),
            Invariant::LnMahlerT => twisted.as_ref().map(|t| t.log_mahler),
        };
        values.insert(inv, v);
    }
    Ok(InvariantRow {
        name: name.clone(),
        crossings: record.crossings,
        alternating: record.alternating,
        volume: record.volume,
        values,
    })
}

/// Location of the representation file of a census knot.
pub fn rep_path(record: &CensusRecord, rep_dir: &Path) -> PathBuf {
    match &record.rep_path {
        Some(p) => rep_dir.join(p),
        None => rep_dir.join(format!("{}.rep", record.name)),
    }
}

fn twisted_for(
    record: &CensusRecord,
    d: &KnotDiagram,
    rep_dir: &Path,
) -> Option<knotvol::twisted::TwistedResult> {
    let path = rep_path(record, rep_dir);
    let file = match File::open(&path) {
        Ok(f) => f,
        Err(e) => {
            warn!(
                "{}: skipping twisted invariants, {}: {e}",
                record.name,
                path.display()
            );
            return None;
        }
    };
    let rep = match load_rep(file, d) {
        Ok(r) => r,
        Err(e) => {
            warn!("{}: skipping twisted invariants, {e}", record.name);
            return None;
        }
    };
    match twisted_alexander(d, &rep) {
        Ok(t) => Some(t),
        Err(e) => {
            warn!("{}: skipping twisted invariants, {e}", record.name);
            None
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(io_err(path))?))
}

/// Computes the selected invariants for every census knot with at most
/// `max_crossings` crossings and writes `invariants.csv`.
pub fn run_invariants(cfg: &RunConfig) -> Result<Vec<InvariantRow>, CliError> {
    cfg.validate()?;
    let census = read_census(&cfg.census_path)?;
    let records: Vec<&CensusRecord> = census
        .iter()
        .filter(|r| r.crossings <= cfg.max_crossings)
        .collect();
    info!(
        "computing {} knots on {} threads",
        records.len(),
        cfg.thread_count
    );
    let mut rows = cfg.pool()?.install(|| {
        records
            .par_iter()
            .map(|r| compute_row(r, &cfg.invariants, cfg.rep_dir.as_deref()))
            .collect::<Result<Vec<_>, _>>()
    })?;
    rows.sort_by(|a, b| a.name.cmp(&b.name));
    write_invariants(
        &cfg.output_dir.join("invariants.csv"),
        &cfg.invariants,
        &rows,
    )?;
    Ok(rows)
}

pub fn write_invariants(
    path: &Path,
    selection: &[Invariant],
    rows: &[InvariantRow],
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let csv_err = |e: csv::Error| CliError::Census(format!("{}: {e}", path.display()));
    let mut header = vec!["name", "crossings", "alternating", "volume"];
    header.extend(selection.iter().map(|i| i.as_str()));
    w.write_record(&header).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![
            r.name.clone(),
            r.crossings.to_string(),
            (r.alternating as u8).to_string(),
            fmt_sig(r.volume),
        ];
        rec.extend(selection.iter().map(|i| {
            r.values
                .get(i)
                .copied()
                .flatten()
                .map(fmt_sig)
                .unwrap_or_default()
        }));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(path))
}

/// Reads `invariants.csv` back; returns the invariant columns in file order.
pub fn read_invariants(path: &Path) -> Result<(Vec<Invariant>, Vec<InvariantRow>), CliError> {
    let bad = |m: String| CliError::Census(format!("{}: {m}", path.display()));
    let file = File::open(path).map_err(io_err(path))?;
    let mut rdr = csv::Reader::from_reader(file);
    let headers = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    if headers.len() < 4 || &headers[0] != "name" || &headers[3] != "volume" {
        return Err(bad("not an invariants table".into()));
    }
    let selection = headers
        .iter()
        .skip(4)
        .map(Invariant::from_str)
        .collect::<Result<Vec<_>, _>>()
        .map_err(bad)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| bad(format!("bad number {s:?}")))
        };
        let mut values = BTreeMap::new();
        for (k, inv) in selection.iter().enumerate() {
            let s = &rec[4 + k];
            values.insert(*inv, if s.is_empty() { None } else { Some(num(s)?) });
        }
        rows.push(InvariantRow {
            name: rec[0].to_string(),
            crossings: rec[1].parse().map_err(|_| bad("crossings".into()))?,
            alternating: &rec[2] == "1",
            volume: num(&rec[3])?,
            values,
        });
    }
    Ok((selection, rows))
}

/// Census view of the rows that have a value for `inv`.
fn population_input(
    rows: &[InvariantRow],
    inv: Invariant,
) -> (Vec<CensusRecord>, BTreeMap<String, f64>) {
    let mut census = Vec::new();
    let mut values = BTreeMap::new();
    for r in rows {
        if let Some(Some(v)) = r.values.get(&inv) {
            census.push(CensusRecord {
                name: r.name.clone(),
                crossings: r.crossings,
                alternating: r.alternating,
                volume: r.volume,
                pd: None,
                rep_path: None,
            });
            values.insert(r.name.clone(), *v);
        }
    }
    (census, values)
}

/// Statistics of every invariant column over one population.
pub fn table(
    rows: &[InvariantRow],
    selection: &[Invariant],
    population: Population,
    max_crossings: u32,
) -> Vec<(Invariant, Result<CorrelationReport, StatsError>)> {
    selection
        .iter()
        .map(|&inv| {
            let (census, values) = population_input(rows, inv);
            (
                inv,
                report(&census, &values, inv.as_str(), population, max_crossings),
            )
        })
        .collect()
}

/// Writes `table_alternating.csv`, `table_nonalternating.csv` and
/// `table_all.csv` from `invariants.csv` in the output directory.
pub fn run_report(cfg: &RunConfig) -> Result<(), CliError> {
    let (selection, rows) = read_invariants(&cfg.output_dir.join("invariants.csv"))?;
    for population in Population::ALL {
        let path = cfg.output_dir.join(format!("table_{population}.csv"));
        let mut w = create(&path)?;
        let mut out = String::from("invariant,A_vol,sigma_vol,Sigma_vol,r\n");
        for (inv, rep) in table(&rows, &selection, population, cfg.max_crossings) {
            match rep {
                Ok(r) => out.push_str(&format!(
                    "{inv},{},{},{},{}\n",
                    fmt_sig(r.a_vol),
                    fmt_sig(r.sigma_vol),
                    fmt_sig(r.big_sigma_vol),
                    r.pearson_r
                        .map(fmt_sig)
                        .unwrap_or_else(|| "DegenerateSample".into())
                )),
                Err(StatsError::EmptyPopulation) => {
                    warn!("{inv}: no {population} knots");
                    out.push_str(&format!("{inv},EmptyPopulation,,,\n"));
                }
                Err(e) => return Err(CliError::Census(format!("{inv}: {e}"))),
            }
        }
        w.write_all(out.as_bytes()).map_err(io_err(&path))?;
        w.flush().map_err(io_err(&path))?;
    }
    Ok(())
}

/// Writes `fig<k>_alternating.tsv` and `fig<k>_nonalternating.tsv` for each
/// invariant column of `invariants.csv`.
pub fn run_figures(cfg: &RunConfig) -> Result<(), CliError> {
    let (selection, rows) = read_invariants(&cfg.output_dir.join("invariants.csv"))?;
    for inv in selection {
        for population in [Population::Alternating, Population::NonAlternating] {
            let path = cfg
                .output_dir
                .join(format!("fig{}_{population}.tsv", inv.figure()));
            let mut out = format!("name\t{inv}\tvolume\n");
            for r in rows
                .iter()
                .filter(|r| population.admits(r.alternating) && r.crossings <= cfg.max_crossings)
            {
                if let Some(Some(v)) = r.values.get(&inv) {
                    out.push_str(&format!(
                        "{}\t{}\t{}\n",
                        r.name,
                        fmt_sig(*v),
                        fmt_sig(r.volume)
                    ));
                }
            }
            let mut w = create(&path)?;
            w.write_all(out.as_bytes()).map_err(io_err(&path))?;
            w.flush().map_err(io_err(&path))?;
        }
    }
    Ok(())
}

/// Convergence table `n, ln(a_n)/n, ln m(delta), difference, skipped`.
pub fn sw_table(delta: &IntLaurentPoly, n_max: u32) -> Result<String, CliError> {
    let ctx = |e: knotvol::polyring::PolyError| CliError::Census(e.to_string());
    let ln_m = mahler_roots(delta).map_err(ctx)?.log_measure;
    let mut out = String::from("n\tvalue\tln_m\tdifference\tskipped\n");
    for e in silver_williams_sequence(delta, n_max).map_err(ctx)? {
        match e.value {
            Some(v) => out.push_str(&format!(
                "{}\t{}\t{}\t{}\t0\n",
                e.n,
                fmt_sig(v),
                fmt_sig(ln_m),
                fmt_sig(v - ln_m)
            )),
            None => out.push_str(&format!("{}\t\t{}\t\t1\n", e.n, fmt_sig(ln_m))),
        }
    }
    Ok(out)
}

fn find_knot<'a>(census: &'a [CensusRecord], name: &str) -> Result<&'a CensusRecord, CliError> {
    census
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| CliError::UnknownKnot(name.to_string()))
}

/// Writes `sw_<name>.tsv`. The names `unknot` and `0_1` need no census entry.
pub fn run_sw(cfg: &RunConfig, name: &str) -> Result<PathBuf, CliError> {
    let delta = if name == "unknot" || name == "0_1" {
        IntLaurentPoly::one()
    } else {
        let census = read_census(&cfg.census_path)?;
        let r = find_knot(&census, name)?;
        let d =
            r.pd.as_ref()
                .ok_or_else(|| CliError::Census(format!("{name}: no PD code")))?;
        alexander_poly(d)
            .map_err(|e| CliError::Census(format!("{name}: {e}")))?
            .delta
    };
    let text = cfg.pool()?.install(|| sw_table(&delta, cfg.sw_nmax))?;
    let path = cfg.output_dir.join(format!("sw_{name}.tsv"));
    let mut w = create(&path)?;
    w.write_all(text.as_bytes()).map_err(io_err(&path))?;
    w.flush().map_err(io_err(&path))?;
    Ok(path)
}

/// Mahler measures of the polynomials in a text file, one per line,
/// optionally labelled `label: polynomial`. Returns a TSV.
pub fn mahler_file(text: &str) -> Result<String, CliError> {
    let mut out = String::from("label\tmeasure\tln_measure\troot_margin\n");
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (label, body) = match line.split_once(':') {
            Some((l, b)) => (l.trim().to_string(), b),
            None => ((i + 1).to_string(), line),
        };
        let p: IntLaurentPoly = body
            .parse()
            .map_err(|e| CliError::Census(format!("line {}: {e}", i + 1)))?;
        let m = mahler_roots(&p).map_err(|e| CliError::Census(format!("line {}: {e}", i + 1)))?;
        out.push_str(&format!(
            "{label}\t{}\t{}\t{}\n",
            fmt_sig(m.measure),
            fmt_sig(m.log_measure),
            m.root_margin.map(fmt_sig).unwrap_or_default()
        ));
    }
    Ok(out)
}

/// Human-readable twisted polynomial summary for one census knot.
pub fn twisted_summary(cfg: &RunConfig, name: &str) -> Result<String, CliError> {
    let rep_dir = cfg
        .rep_dir
        .as_deref()
        .ok_or_else(|| CliError::Config("twisted requires a representation directory".into()))?;
    let census = read_census(&cfg.census_path)?;
    let r = find_knot(&census, name)?;
    let d =
        r.pd.as_ref()
            .ok_or_else(|| CliError::Census(format!("{name}: no PD code")))?;
    let path = rep_path(r, rep_dir);
    let ctx = |e: &dyn fmt::Display| CliError::Census(format!("{name}: {e}"));
    let rep = load_rep(File::open(&path).map_err(io_err(&path))?, d).map_err(|e| ctx(&e))?;
    let t = twisted_alexander(d, &rep).map_err(|e| ctx(&e))?;
    Ok(format!(
        "knot\t{name}\nT\t{}\nT(-1)\t{} {}\nT(+1)\t{} {}\nln_mahler_T\t{}\nvolume\t{}\nratio\t{}\n",
        t.t_poly,
        fmt_sig(t.eval_minus_one.re),
        fmt_sig(t.eval_minus_one.im),
        fmt_sig(t.eval_plus_one.re),
        fmt_sig(t.eval_plus_one.im),
        fmt_sig(t.log_mahler),
        fmt_sig(r.volume),
        fmt_sig(t.log_mahler / r.volume)
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.2965097482), "0.2965097482");
        assert_eq!(fmt_sig(5f64.ln()), "1.609437912");
        assert_eq!(fmt_sig(2.029883212819), "2.029883213");
        assert_eq!(fmt_sig(-0.000123456789012), "-0.0001234567890");
        assert_eq!(fmt_sig(9.99999999999), "10.00000000");
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.5e12), "1.500000000e12");
    }

    #[test]
    fn invariant_names() {
        for i in Invariant::ALL {
            assert_eq!(i.as_str().parse::<Invariant>().unwrap(), i);
        }
        assert_eq!(Invariant::LnDet.figure(), 1);
        assert_eq!(Invariant::LnMahlerJones.figure(), 6);
        assert!("ln_foo".parse::<Invariant>().is_err());
    }

    fn config() -> RunConfig {
        RunConfig {
            census_path: "census.csv".into(),
            rep_dir: None,
            max_crossings: 12,
            invariants: vec![Invariant::LnDet],
            output_dir: "out".into(),
            thread_count: 1,
            sw_nmax: 10,
        }
    }

    #[test]
    fn config_checks() {
        assert!(config().validate().is_ok());
        let mut c = config();
        c.invariants.push(Invariant::LnMahlerT);
        let e = c.validate().unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let mut c = config();
        c.max_crossings = 2;
        assert!(c.validate().is_err());
        let mut c = config();
        c.invariants.clear();
        assert!(c.validate().is_err());
    }

    #[test]
    fn mahler_lines() {
        let out = mahler_file("# sample\nfig8: -t + 3 - t^-1\n\nt^2 - t + 1\n").unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("fig8\t2.618033989\t0.9624236501"));
        assert!(lines[2].starts_with("4\t1.000000000\t"));
        assert!(mahler_file("x: t +* 2").is_err());
    }

    #[test]
    fn trefoil_sw_flags() {
        let t = IntLaurentPoly::from_dense(-1, &[1, -1, 1]);
        let out = sw_table(&t, 12).unwrap();
        let skipped: Vec<&str> = out
            .lines()
            .skip(1)
            .filter(|l| l.ends_with("\t1"))
            .map(|l| l.split('\t').next().unwrap())
            .collect();
        assert_eq!(skipped, ["6", "12"]);
    }
}
