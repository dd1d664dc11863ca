//! Knot presentations: PD codes, braid words and the census CSV.

use std::collections::HashSet;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NotationError {
    #[error("malformed input: {0}")]
    MalformedSyntax(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("braid letter {letter} out of range for {strands} strands")]
    GeneratorOutOfRange { letter: i32, strands: u32 },
    #[error("braid closure has {components} components")]
    NotAKnot { components: usize },
    #[error("duplicate census name {0:?}")]
    DuplicateName(String),
    #[error("census entry {name:?} has non-positive volume {volume}")]
    NonPositiveVolume { name: String, volume: f64 },
}

/// Planar diagram of a knot. Each crossing `[a, b, c, d]` lists edge labels
/// counterclockwise from the incoming under-strand `a`; the under-strand
/// leaves along `c = a + 1 (mod 2n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KnotDiagram {
    crossings: Vec<[u32; 4]>,
    arc_count: u32,
}

impl KnotDiagram {
    /// Validates and builds a diagram. The empty crossing list is the
    /// 0-crossing unknot.
    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self, NotationError> {
        let n = crossings.len() as u32;
        let m = 2 * n;
        let mut seen = vec![0u8; m as usize + 1];
        for x in &crossings {
            for &l in x {
                if l == 0 || l > m {
                    return Err(NotationError::InvalidDiagram(format!(
                        "label {l} outside 1..{m}"
                    )));
                }
                seen[l as usize] += 1;
            }
        }
        if let Some(l) = (1..=m).find(|&l| seen[l as usize] != 2) {
            return Err(NotationError::InvalidDiagram(format!(
                "label {l} appears {} times, expected 2",
                seen[l as usize]
            )));
        }
        let succ = |x: u32| x % m + 1;
        let mut incoming = vec![0u8; m as usize + 1];
        let mut outgoing = vec![0u8; m as usize + 1];
        for x in &crossings {
            let [a, b, c, d] = *x;
            if c != succ(a) {
                return Err(NotationError::InvalidDiagram(format!(
                    "crossing X({a},{b},{c},{d}): under-strand {a} -> {c} breaks label succession (multiple components or relabelled strand)"
                )));
            }
            let forward = b == succ(d);
            let backward = d == succ(b);
            let (inc, out) = match (forward, backward) {
                (true, false) => (d, b),
                (false, true) => (b, d),
                (true, true) => {
                    return Err(NotationError::InvalidDiagram(format!(
                        "crossing X({a},{b},{c},{d}): over-strand orientation is ambiguous"
                    )))
                }
                (false, false) => {
                    return Err(NotationError::InvalidDiagram(format!(
                        "crossing X({a},{b},{c},{d}): over-strand labels are not consecutive"
                    )))
                }
            };
            incoming[a as usize] += 1;
            incoming[inc as usize] += 1;
            outgoing[c as usize] += 1;
            outgoing[out as usize] += 1;
        }
        if let Some(l) = (1..=m).find(|&l| incoming[l as usize] != 1 || outgoing[l as usize] != 1) {
            return Err(NotationError::InvalidDiagram(format!(
                "edge {l} is not entered and left exactly once"
            )));
        }
        Ok(Self {
            crossings,
            arc_count: m,
        })
    }

    pub fn unknot() -> Self {
        Self {
            crossings: Vec::new(),
            arc_count: 0,
        }
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Number of edge labels (`2n`).
    pub fn arc_count(&self) -> u32 {
        self.arc_count
    }

    pub fn is_unknot_diagram(&self) -> bool {
        self.crossings.is_empty()
    }

    /// Crossing sign: `+1` when the over-strand runs from `d` to `b`.
    pub fn sign(&self, i: usize) -> i32 {
        let [_, b, _, d] = self.crossings[i];
        if b == d % self.arc_count + 1 {
            1
        } else {
            -1
        }
    }

    pub fn signs(&self) -> Vec<i32> {
        (0..self.crossings.len()).map(|i| self.sign(i)).collect()
    }

    /// Incoming and outgoing over-strand labels of crossing `i`.
    pub fn over_strand(&self, i: usize) -> (u32, u32) {
        let [_, b, _, d] = self.crossings[i];
        if self.sign(i) == 1 {
            (d, b)
        } else {
            (b, d)
        }
    }

    /// The mirror image: every crossing switched.
    pub fn mirror(&self) -> Self {
        let crossings = (0..self.crossings.len())
            .map(|i| {
                let [a, b, c, d] = self.crossings[i];
                if self.sign(i) == 1 {
                    [d, a, b, c]
                } else {
                    [b, c, d, a]
                }
            })
            .collect();
        Self {
            crossings,
            arc_count: self.arc_count,
        }
    }
}

impl fmt::Display for KnotDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, [a, b, c, d]) in self.crossings.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "X({a},{b},{c},{d})")?;
        }
        Ok(())
    }
}

impl FromStr for KnotDiagram {
    type Err = NotationError;

    fn from_str(s: &str) -> Result<Self, NotationError> {
        parse_pd(s)
    }
}

/// Parses `X(a,b,c,d)` tuples separated by whitespace and/or commas.
pub fn parse_pd(text: &str) -> Result<KnotDiagram, NotationError> {
    let mut crossings = Vec::new();
    let mut rest = text.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('X')
            .and_then(|r| r.trim_start().strip_prefix('('))
            .ok_or_else(|| {
                NotationError::MalformedSyntax(format!("expected X(...) at {:?}", head(rest)))
            })?;
        let close = body
            .find(')')
            .ok_or_else(|| NotationError::MalformedSyntax("unclosed X(".into()))?;
        let labels = body[..close]
            .split(',')
            .map(|t| {
                t.trim().parse::<u32>().map_err(|_| {
                    NotationError::MalformedSyntax(format!("bad label {:?}", t.trim()))
                })
            })
            .collect::<Result<Vec<u32>, _>>()?;
        let tuple: [u32; 4] = labels.try_into().map_err(|v: Vec<u32>| {
            NotationError::MalformedSyntax(format!("crossing with {} labels", v.len()))
        })?;
        crossings.push(tuple);
        rest = body[close + 1..].trim_start_matches(|c: char| c.is_whitespace() || c == ',');
    }
    KnotDiagram::new(crossings)
}

fn head(s: &str) -> String {
    s.chars().take(12).collect()
}

/// Braid word: letter `i` is the generator `sigma_|i|` with sign `sign(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidWord {
    strand_count: u32,
    letters: Vec<i32>,
}

impl BraidWord {
    /// A single strand is accepted only with the empty word (the unknot).
    pub fn new(strand_count: u32, letters: Vec<i32>) -> Result<Self, NotationError> {
        if strand_count == 0 || (strand_count == 1 && !letters.is_empty()) {
            return Err(NotationError::MalformedSyntax(format!(
                "braid on {strand_count} strands"
            )));
        }
        for &l in &letters {
            if l == 0 {
                return Err(NotationError::MalformedSyntax("zero braid letter".into()));
            }
            if l.unsigned_abs() >= strand_count {
                return Err(NotationError::GeneratorOutOfRange {
                    letter: l,
                    strands: strand_count,
                });
            }
        }
        Ok(Self {
            strand_count,
            letters,
        })
    }

    pub fn strand_count(&self) -> u32 {
        self.strand_count
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Number of cycles of the underlying strand permutation.
    pub fn components(&self) -> usize {
        let n = self.strand_count as usize;
        let mut perm: Vec<usize> = (0..n).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            perm.swap(i, i + 1);
        }
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            cycles += 1;
            let mut j = s;
            while !seen[j] {
                seen[j] = true;
                j = perm[j];
            }
        }
        cycles
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.strand_count)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

/// Parses `strands: w1 w2 ...`.
pub fn parse_braid(text: &str) -> Result<BraidWord, NotationError> {
    let (s, word) = text
        .split_once(':')
        .ok_or_else(|| NotationError::MalformedSyntax(format!("missing ':' in {text:?}")))?;
    let strands: u32 = s
        .trim()
        .parse()
        .map_err(|_| NotationError::MalformedSyntax(format!("bad strand count {:?}", s.trim())))?;
    let letters = word
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i32>()
                .map_err(|_| NotationError::MalformedSyntax(format!("bad braid letter {t:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    BraidWord::new(strands, letters)
}

/// Parses a braid file: one `name: strands: letters` line per knot.
pub fn parse_braid_file(text: &str) -> Result<Vec<(String, BraidWord)>, NotationError> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, rest) = line
            .split_once(':')
            .ok_or_else(|| NotationError::MalformedSyntax(format!("missing name in {line:?}")))?;
        out.push((name.trim().to_string(), parse_braid(rest)?));
    }
    Ok(out)
}

/// Diagram of the braid closure.
///
/// Crossings appear in letter order. Strands run upward; a positive letter
/// puts the strand from the lower-left position over. Edges are numbered
/// along the knot starting with the segment that enters the bottom of
/// position 1, after the closure arcs join top to bottom.
pub fn braid_to_diagram(b: &BraidWord) -> Result<KnotDiagram, NotationError> {
    let components = b.components();
    if components != 1 {
        return Err(NotationError::NotAKnot { components });
    }
    let n = b.strand_count as usize;
    if b.letters.len() <= 1 {
        // empty word on one strand, or a single twist on two strands
        return Ok(KnotDiagram::unknot());
    }
    // segment ids: bottom segments 0..n, then two per crossing
    let mut pos_seg: Vec<usize> = (0..n).collect();
    let mut next_id = n;
    // (in_l, in_r, out_l, out_r, sign) per crossing
    let mut xs = Vec::with_capacity(b.letters.len());
    for &l in &b.letters {
        let i = l.unsigned_abs() as usize - 1;
        let (in_l, in_r) = (pos_seg[i], pos_seg[i + 1]);
        let (out_l, out_r) = (next_id, next_id + 1);
        next_id += 2;
        pos_seg[i] = out_l;
        pos_seg[i + 1] = out_r;
        xs.push((in_l, in_r, out_l, out_r, l.signum()));
    }
    // closure: the top segment at position p continues as the bottom one
    let mut alias: Vec<usize> = (0..next_id).collect();
    for (p, &top) in pos_seg.iter().enumerate() {
        alias[p] = top;
    }
    let canon = |s: usize| alias[s];
    // where each segment ends: crossing index and whether it is in_l
    let mut ends = vec![None; next_id];
    for (j, &(in_l, in_r, ..)) in xs.iter().enumerate() {
        ends[canon(in_l)] = Some((j, true));
        ends[canon(in_r)] = Some((j, false));
    }
    let mut label = vec![0u32; next_id];
    let start = canon(0);
    let mut seg = start;
    let mut k = 1u32;
    loop {
        label[seg] = k;
        k += 1;
        let (j, from_left) = ends[seg].expect("every segment ends at a crossing");
        let (_, _, out_l, out_r, _) = xs[j];
        seg = canon(if from_left { out_r } else { out_l });
        if seg == start {
            break;
        }
    }
    let lab = |s: usize| label[canon(s)];
    let crossings = xs
        .iter()
        .map(|&(in_l, in_r, out_l, out_r, sign)| {
            if sign > 0 {
                [lab(in_r), lab(out_r), lab(out_l), lab(in_l)]
            } else {
                [lab(in_l), lab(in_r), lab(out_r), lab(out_l)]
            }
        })
        .collect();
    KnotDiagram::new(crossings)
}

/// One census entry.
#[derive(Clone, Debug, PartialEq)]
pub struct CensusRecord {
    pub name: String,
    pub crossings: u32,
    pub alternating: bool,
    pub volume: f64,
    pub pd: Option<KnotDiagram>,
    pub rep_path: Option<String>,
}

/// Reads the census CSV (`name,crossings,alternating,volume,pd[,rep_path]`,
/// `#` comment lines).
pub fn parse_census<R: Read>(stream: R) -> Result<Vec<CensusRecord>, NotationError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(stream);
    let headers = reader
        .headers()
        .map_err(|e| NotationError::MalformedSyntax(e.to_string()))?
        .clone();
    let expected = ["name", "crossings", "alternating", "volume", "pd"];
    let got: Vec<&str> = headers.iter().collect();
    if got.len() < 5
        || got[..5] != expected
        || (got.len() == 6 && got[5] != "rep_path")
        || got.len() > 6
    {
        return Err(NotationError::MalformedSyntax(format!(
            "census header {got:?}, expected name,crossings,alternating,volume,pd[,rep_path]"
        )));
    }
    let mut out: Vec<CensusRecord> = Vec::new();
    let mut names = HashSet::new();
    for row in reader.records() {
        let row = row.map_err(|e| NotationError::MalformedSyntax(e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |what: &str| NotationError::MalformedSyntax(format!("line {line}: {what}"));
        if row.len() < 5 || row.len() > 6 {
            return Err(bad(&format!("{} fields", row.len())));
        }
        let name = row[0].to_string();
        if name.is_empty() {
            return Err(bad("empty name"));
        }
        let crossings: u32 = row[1].parse().map_err(|_| bad("crossings"))?;
        if crossings < 3 {
            return Err(bad("crossing number below 3"));
        }
        let alternating = match &row[2] {
            "1" => true,
            "0" => false,
            other => return Err(bad(&format!("alternating flag {other:?}"))),
        };
        let volume: f64 = row[3].parse().map_err(|_| bad("volume"))?;
        if volume.is_nan() || volume <= 0.0 {
            return Err(NotationError::NonPositiveVolume { name, volume });
        }
        let pd = if row[4].is_empty() {
            None
        } else {
            Some(parse_pd(&row[4]).map_err(|e| match e {
                NotationError::MalformedSyntax(m) => bad(&m),
                other => other,
            })?)
        };
        let rep_path = row.get(5).filter(|s| !s.is_empty()).map(str::to_string);
        if !names.insert(name.clone()) {
            return Err(NotationError::DuplicateName(name));
        }
        out.push(CensusRecord {
            name,
            crossings,
            alternating,
            volume,
            pd,
            rep_path,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
    pub(crate) const FIGURE_EIGHT: &str = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)";

    #[test]
    fn parses_table_codes() {
        let t = parse_pd(TREFOIL).unwrap();
        assert_eq!(t.crossing_count(), 3);
        assert_eq!(t.arc_count(), 6);
        assert_eq!(t.crossings()[1], [3, 6, 4, 1]);
        let f = parse_pd(FIGURE_EIGHT).unwrap();
        assert_eq!(f.crossing_count(), 4);
        assert_eq!(f.signs().iter().sum::<i32>(), 0);
    }

    #[test]
    fn separators() {
        let a = parse_pd("X(1,4,2,5),X(3,6,4,1), X(5,2,6,3)").unwrap();
        assert_eq!(a, parse_pd(TREFOIL).unwrap());
        assert_eq!(parse_pd("").unwrap(), KnotDiagram::unknot());
    }

    #[test]
    fn one_crossing_rejected() {
        assert!(matches!(
            parse_pd("X(1,1,2,2)"),
            Err(NotationError::InvalidDiagram(_))
        ));
    }

    #[test]
    fn malformed_pd() {
        for s in ["Y(1,2,3,4)", "X(1,2,3)", "X(1,2,3,4", "X(a,b,c,d)"] {
            assert!(
                matches!(parse_pd(s), Err(NotationError::MalformedSyntax(_))),
                "{s}"
            );
        }
    }

    #[test]
    fn invalid_pd() {
        // label 7 out of range, label repeated, two-component Hopf link
        for s in [
            "X(1,4,2,5) X(3,6,4,1) X(5,2,6,7)",
            "X(1,4,2,5) X(3,6,4,1) X(5,2,6,5)",
            "X(1,3,2,4) X(3,1,4,2)",
        ] {
            assert!(
                matches!(parse_pd(s), Err(NotationError::InvalidDiagram(_))),
                "{s}"
            );
        }
    }

    #[test]
    fn mirror_negates_signs() {
        let t = parse_pd(TREFOIL).unwrap();
        let m = t.mirror();
        assert_eq!(m.signs(), t.signs().iter().map(|s| -s).collect::<Vec<_>>());
        assert_eq!(m.mirror(), t);
        assert!(KnotDiagram::new(m.crossings().to_vec()).is_ok());
    }

    #[test]
    fn braid_parsing() {
        assert_eq!(parse_braid("2: 1 1 1").unwrap().letters(), &[1, 1, 1]);
        let b = parse_braid("3: 1 -2 1 -2").unwrap();
        assert_eq!((b.strand_count(), b.letters()), (3, &[1, -2, 1, -2][..]));
        assert_eq!(
            parse_braid("2: 5"),
            Err(NotationError::GeneratorOutOfRange {
                letter: 5,
                strands: 2
            })
        );
        assert!(matches!(
            parse_braid("2 1 1"),
            Err(NotationError::MalformedSyntax(_))
        ));
        assert!(matches!(
            parse_braid("2: 1 x"),
            Err(NotationError::MalformedSyntax(_))
        ));
    }

    #[test]
    fn braid_closures() {
        let t = braid_to_diagram(&parse_braid("2: 1 1 1").unwrap()).unwrap();
        assert_eq!(t.crossing_count(), 3);
        assert_eq!(t.signs(), vec![1, 1, 1]);
        let f = braid_to_diagram(&parse_braid("3: 1 -2 1 -2").unwrap()).unwrap();
        assert_eq!(f.signs(), vec![1, -1, 1, -1]);
        assert_eq!(
            braid_to_diagram(&parse_braid("2: 1 1").unwrap()),
            Err(NotationError::NotAKnot { components: 2 })
        );
        assert!(braid_to_diagram(&parse_braid("1:").unwrap())
            .unwrap()
            .is_unknot_diagram());
        assert!(braid_to_diagram(&parse_braid("2: -1").unwrap())
            .unwrap()
            .is_unknot_diagram());
    }

    #[test]
    fn census_rows() {
        let text = "name,crossings,alternating,volume,pd\n\
                    # comment\n\
                    4_1,4,1,2.029883212819,\"X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)\"\n";
        let rows = parse_census(text.as_bytes()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].name, "4_1");
        assert!(rows[0].alternating);
        assert!((rows[0].volume - 2.029_883_2).abs() < 1e-7);
        assert_eq!(rows[0].pd.as_ref().unwrap().crossing_count(), 4);
        assert_eq!(rows[0].rep_path, None);
    }

    #[test]
    fn census_header_only() {
        let rows =
            parse_census("name,crossings,alternating,volume,pd,rep_path\n".as_bytes()).unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn census_errors() {
        let h = "name,crossings,alternating,volume,pd\n";
        let neg = format!("{h}5_2,5,1,-1.0,\n");
        assert!(matches!(
            parse_census(neg.as_bytes()),
            Err(NotationError::NonPositiveVolume { .. })
        ));
        let dup = format!("{h}5_2,5,1,2.8,\n5_2,5,1,2.8,\n");
        assert_eq!(
            parse_census(dup.as_bytes()),
            Err(NotationError::DuplicateName("5_2".into()))
        );
        for bad in [
            format!("{h}5_2,five,1,2.8,\n"),
            format!("{h}5_2,5,yes,2.8,\n"),
            "name,volume\n".to_string(),
        ] {
            assert!(matches!(
                parse_census(bad.as_bytes()),
                Err(NotationError::MalformedSyntax(_))
            ));
        }
    }

    #[test]
    fn braid_file() {
        let v = parse_braid_file("# x\n3_1: 2: 1 1 1\n4_1: 3: 1 -2 1 -2\n").unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v[1].0, "4_1");
    }
}
