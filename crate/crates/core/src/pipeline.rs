//! Batch screening: ingest code files, screen every code through the
//! enumerator and distillation stack, group by enumerator and report.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Condvar, Mutex};
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::{parse_classical, parse_magma_listing, ClassicalTernaryCode, TERNARY_CODE_HEADER};
use crate::distill::{profile, ratio_to_f64, Classification, RationalRecord};
use crate::enumerators::{
    distance_from_enums, fast_path_bytes, macwilliams, simple_wenum_css_fast, simple_wenum_naive, EnumeratorKind,
    WeightEnumerator, DEFAULT_MEM_CAP, MAX_NAIVE_RANK,
};
use crate::error::{Error, Result};
use crate::stabilizer::{parse_stabilizer, StabilizerCode, LocalRotation, STABILIZER_CODE_HEADER};

const WENUM_HEADER: &str = "WENUM v1";

/// Anything the screen accepts.
#[derive(Clone, Debug, PartialEq)]
pub enum CodeInput {
    /// Self-orthogonal classical code, screened through its CSS code.
    Classical(ClassicalTernaryCode),
    Quantum(StabilizerCode),
    /// `A(z)` alone, for codes known only by their enumerator.
    Enumerator { id: String, a: WeightEnumerator },
}

impl CodeInput {
    pub fn id(&self) -> &str {
        match self {
            CodeInput::Classical(c) => &c.id,
            CodeInput::Quantum(q) => &q.id,
            CodeInput::Enumerator { id, .. } => id,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            CodeInput::Classical(c) => c.n(),
            CodeInput::Quantum(q) => q.n(),
            CodeInput::Enumerator { a, .. } => a.n,
        }
    }
}

/// A malformed entry, located by file and line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestError {
    pub source: String,
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct Ingested {
    pub codes: Vec<CodeInput>,
    pub errors: Vec<IngestError>,
}

fn shift_line(e: Error, offset: usize) -> (usize, String) {
    match e {
        Error::Parse { line, msg } => (line + offset, msg),
        other => (offset + 1, other.to_string()),
    }
}

/// Parses one file's text. Files may concatenate several `TERNARY-CODE`,
/// `STABILIZER-CODE` or `WENUM` documents; anything else is read as a
/// MAGMA-style listing. Classical codes must be self-orthogonal.
pub fn ingest_text(text: &str, source: &str) -> Ingested {
    let stem = Path::new(source).file_stem().and_then(|s| s.to_str()).unwrap_or(source).to_string();
    let lines: Vec<&str> = text.lines().collect();
    let is_header = |l: &str| {
        let t = l.trim();
        t == TERNARY_CODE_HEADER || t == STABILIZER_CODE_HEADER || t == WENUM_HEADER
    };
    let starts: Vec<usize> = (0..lines.len()).filter(|&i| is_header(lines[i])).collect();
    let mut out = Ingested::default();
    let first_content = lines.iter().position(|l| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('#')
    });
    if starts.is_empty() || first_content.is_some_and(|i| i < starts[0]) {
        for entry in parse_magma_listing(text, &stem) {
            match entry.result {
                Ok(c) => out.codes.push(CodeInput::Classical(c)),
                Err(e) => {
                    let (line, message) = shift_line(e, 0);
                    out.errors.push(IngestError { source: source.into(), line, message })
                }
            }
        }
        return out;
    }
    for (idx, &start) in starts.iter().enumerate() {
        let end = starts.get(idx + 1).copied().unwrap_or(lines.len());
        let chunk = lines[start..end].join("\n");
        let header = lines[start].trim();
        let parsed = if header == TERNARY_CODE_HEADER {
            parse_classical(&chunk).and_then(|c| match c.first_non_orthogonal_pair() {
                Some((i, j)) => Err(Error::NotSelfOrthogonal(i, j)),
                None => Ok(CodeInput::Classical(c)),
            })
        } else if header == STABILIZER_CODE_HEADER {
            parse_stabilizer(&chunk).map(CodeInput::Quantum)
        } else {
            WeightEnumerator::parse(&chunk).and_then(|a| {
                if a.kind != EnumeratorKind::A {
                    return Err(Error::parse(2, "only kind=A enumerators can be screened"));
                }
                let id = if starts.len() == 1 { stem.clone() } else { format!("{stem}-{}", idx + 1) };
                Ok(CodeInput::Enumerator { id, a })
            })
        };
        match parsed {
            Ok(c) => out.codes.push(c),
            Err(e) => {
                let (line, message) = shift_line(e, start);
                out.errors.push(IngestError { source: source.into(), line, message })
            }
        }
    }
    out
}

fn collect_files(path: &Path, out: &mut Vec<PathBuf>) -> Result<()> {
    let meta = std::fs::metadata(path).map_err(|e| Error::io(path, e))?;
    if meta.is_file() {
        out.push(path.to_path_buf());
        return Ok(());
    }
    let mut entries: Vec<PathBuf> = std::fs::read_dir(path)
        .map_err(|e| Error::io(path, e))?
        .map(|e| e.map(|e| e.path()).map_err(|err| Error::io(path, err)))
        .collect::<Result<_>>()?;
    entries.sort();
    for p in entries {
        if p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with('.')) {
            continue;
        }
        collect_files(&p, out)?;
    }
    Ok(())
}

/// Reads a file or every file below a directory, in sorted path order.
pub fn ingest(path: impl AsRef<Path>) -> Result<Ingested> {
    let mut files = Vec::new();
    collect_files(path.as_ref(), &mut files)?;
    let mut all = Ingested::default();
    for f in files {
        let text = std::fs::read_to_string(&f).map_err(|e| Error::io(&f, e))?;
        let part = ingest_text(&text, &f.display().to_string());
        all.codes.extend(part.codes);
        all.errors.extend(part.errors);
    }
    if all.codes.is_empty() {
        return Err(Error::InvalidInput(format!("no valid codes found under {}", path.as_ref().display())));
    }
    Ok(all)
}

/// Caps the total fast-path memory held by concurrently running jobs. A job
/// larger than the whole cap is refused; others wait until enough is free.
#[derive(Debug)]
pub struct MemoryGovernor {
    cap: u64,
    used: Mutex<u64>,
    freed: Condvar,
}

pub struct MemoryLease<'a> {
    governor: &'a MemoryGovernor,
    bytes: u64,
}

impl MemoryGovernor {
    pub fn new(cap: u64) -> MemoryGovernor {
        MemoryGovernor { cap, used: Mutex::new(0), freed: Condvar::new() }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn acquire(&self, bytes: u64) -> Result<MemoryLease<'_>> {
        if bytes > self.cap {
            return Err(Error::ResourceLimit(format!("job needs {bytes} bytes, cap is {}", self.cap)));
        }
        let mut used = self.used.lock().expect("governor lock");
        while *used + bytes > self.cap {
            used = self.freed.wait(used).expect("governor lock");
        }
        *used += bytes;
        Ok(MemoryLease { governor: self, bytes })
    }

    pub fn in_use(&self) -> u64 {
        *self.used.lock().expect("governor lock")
    }
}

impl Drop for MemoryLease<'_> {
    fn drop(&mut self) {
        let mut used = self.governor.used.lock().expect("governor lock");
        *used -= self.bytes;
        self.governor.freed.notify_all();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScreenOptions {
    /// Byte cap for fast-path enumeration.
    pub mem_cap: u64,
    /// Record wall-clock times; disable for byte-identical reports.
    pub timing: bool,
}

impl Default for ScreenOptions {
    fn default() -> ScreenOptions {
        ScreenOptions { mem_cap: DEFAULT_MEM_CAP, timing: true }
    }
}

mod ratio_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalRecord::from_ratio(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        RationalRecord::deserialize(d)?.to_ratio().map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
            r.as_ref().map(RationalRecord::from_ratio).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigRational>, D::Error> {
            Option::<RationalRecord>::deserialize(d)?
                .map(|r| r.to_ratio().map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

mod classification_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &Classification, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&c.label())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Classification, D::Error> {
        let s = String::deserialize(d)?;
        Classification::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown classification {s:?}")))
    }
}

/// One screened code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScreeningRecord {
    pub id: String,
    pub n: usize,
    pub k: i64,
    pub distance: Option<usize>,
    #[serde(with = "ratio_serde")]
    pub b_at_minus_half: BigRational,
    pub distills: bool,
    #[serde(with = "classification_serde")]
    pub classification: Classification,
    pub delta: Option<usize>,
    #[serde(with = "ratio_serde::option")]
    pub leading: Option<BigRational>,
    /// Decimal with 9 fractional digits.
    pub threshold: String,
    #[serde(with = "ratio_serde")]
    pub success_at_zero: BigRational,
    pub enumerator_digest: String,
    pub wall_time_ms: u64,
}

impl ScreeningRecord {
    pub fn threshold_value(&self) -> f64 {
        self.threshold.parse().unwrap_or(f64::NAN)
    }
}

/// `A(z)` for a screenable input, using the fast path for classical codes.
pub fn enumerate_a(code: &CodeInput, governor: &MemoryGovernor) -> Result<WeightEnumerator> {
    match code {
        CodeInput::Classical(c) => {
            if c.n() % 2 == 0 {
                return Err(Error::EvenLength(c.n()));
            }
            let _lease = governor.acquire(fast_path_bytes(c.n()))?;
            simple_wenum_css_fast(c, governor.cap())
        }
        CodeInput::Quantum(q) => {
            if q.r() > MAX_NAIVE_RANK {
                return Err(Error::ResourceLimit(format!("{}: 3^{} stabilizer elements", q.id, q.r())));
            }
            simple_wenum_naive(q)
        }
        CodeInput::Enumerator { a, .. } => Ok(a.clone()),
    }
}

fn with_id(id: &str, e: Error) -> Error {
    match e {
        Error::ResourceLimit(m) if !m.starts_with(id) => Error::ResourceLimit(format!("{id}: {m}")),
        other => other,
    }
}

/// Screens one code. Codes must encode exactly one qutrit.
pub fn screen_with(code: &CodeInput, governor: &MemoryGovernor, timing: bool) -> Result<ScreeningRecord> {
    let start = Instant::now();
    let id = code.id().to_string();
    let a = enumerate_a(code, governor).map_err(|e| with_id(&id, e))?;
    if a.k != 1 {
        return Err(Error::Unsupported(format!("{id}: distillation needs k = 1, code has k = {}", a.k)));
    }
    let n = a.n;
    let b = macwilliams(&a, n, a.k)?;
    let distance = distance_from_enums(&a, &b)?;
    let p = profile(&a, &b, n, a.k)?;
    if let (Classification::Order(d), true) = (p.classification, n % 2 == 1) {
        if d < 3 {
            return Err(Error::InconsistentEnumerator(format!("{id}: odd length with noise exponent {d} < 3")));
        }
    }
    Ok(ScreeningRecord {
        id,
        n,
        k: a.k,
        distance,
        b_at_minus_half: p.b_at_minus_half.clone(),
        distills: p.distills,
        classification: p.classification,
        delta: p.delta(),
        leading: p.leading().cloned(),
        threshold: p.threshold.decimal(),
        success_at_zero: p.success_at_zero.clone(),
        enumerator_digest: a.digest(),
        wall_time_ms: if timing { start.elapsed().as_millis() as u64 } else { 0 },
    })
}

pub fn screen(code: &CodeInput) -> Result<ScreeningRecord> {
    screen_with(code, &MemoryGovernor::new(DEFAULT_MEM_CAP), true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumeratorGroup {
    pub digest: String,
    pub ids: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenFailure {
    pub id: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub records: Vec<ScreeningRecord>,
    /// Record count per classification label.
    pub summary: BTreeMap<String, usize>,
    pub distinct_enumerators: usize,
    pub groups: Vec<EnumeratorGroup>,
    pub failures: Vec<ScreenFailure>,
    pub ingest_errors: Vec<IngestError>,
    /// Spearman rank correlation of success probability against threshold.
    pub success_threshold_spearman: Option<f64>,
}

/// Canonical ordering: `n` ascending, threshold descending, then id.
fn canonical_order(a: &ScreeningRecord, b: &ScreeningRecord) -> std::cmp::Ordering {
    a.n.cmp(&b.n)
        .then_with(|| b.threshold_value().total_cmp(&a.threshold_value()))
        .then_with(|| a.id.cmp(&b.id))
}

pub fn dedupe(mut records: Vec<ScreeningRecord>) -> SearchReport {
    records.sort_by(canonical_order);
    let mut summary = BTreeMap::new();
    let mut by_digest: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for r in &records {
        *summary.entry(r.classification.label()).or_insert(0) += 1;
        by_digest.entry(r.enumerator_digest.clone()).or_default().push(r.id.clone());
    }
    let groups: Vec<EnumeratorGroup> = by_digest
        .into_iter()
        .map(|(digest, mut ids)| {
            ids.sort();
            EnumeratorGroup { digest, ids }
        })
        .collect();
    let xs: Vec<f64> = records.iter().map(|r| ratio_to_f64(&r.success_at_zero)).collect();
    let ys: Vec<f64> = records.iter().map(ScreeningRecord::threshold_value).collect();
    SearchReport {
        success_threshold_spearman: spearman(&xs, &ys),
        distinct_enumerators: groups.len(),
        groups,
        summary,
        records,
        failures: Vec::new(),
        ingest_errors: Vec::new(),
    }
}

/// Screens all codes on a pool of `jobs` threads (0 = rayon default).
pub fn search(codes: &[CodeInput], jobs: usize, options: &ScreenOptions) -> Result<SearchReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let governor = MemoryGovernor::new(options.mem_cap);
    let results: Vec<(String, Result<ScreeningRecord>)> = pool.install(|| {
        codes
            .par_iter()
            .map(|c| (c.id().to_string(), screen_with(c, &governor, options.timing)))
            .collect()
    });
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (id, r) in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => failures.push(ScreenFailure { id, message: e.to_string() }),
        }
    }
    failures.sort_by(|a, b| a.id.cmp(&b.id));
    let mut report = dedupe(records);
    report.failures = failures;
    Ok(report)
}

/// Shortens every `[[n,0]]` state at every coordinate and local rotation,
/// keeps one code per distinct `A(z)` and returns the survivors.
pub fn shorten_candidates(states: &[StabilizerCode]) -> Result<Vec<StabilizerCode>> {
    let rotations = LocalRotation::all();
    let mut seen: BTreeMap<Vec<num_bigint::BigInt>, ()> = BTreeMap::new();
    let mut out = Vec::new();
    for state in states {
        for coord in 0..state.n() {
            for rot in &rotations {
                let code = match state.shorten(coord, rot) {
                    Ok(c) => c,
                    Err(Error::DegenerateShortening { .. }) => continue,
                    Err(e) => return Err(e),
                };
                let a = simple_wenum_naive(&code)?;
                if seen.insert(a.coeffs.clone(), ()).is_none() {
                    out.push(code);
                }
            }
        }
    }
    Ok(out)
}

/// Spearman rank correlation with average ranks for ties; `None` for fewer
/// than two points or a constant series.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let rx = ranks(xs);
    let ry = ranks(ys);
    let n = xs.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some(cov / (vx * vy).sqrt())
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &t in &idx[i..=j] {
            out[t] = avg;
        }
        i = j + 1;
    }
    out
}

pub const CSV_HEADER: &str = "id,n,k,distance,b_num,b_den,distills,classification,delta,leading_num,leading_den,threshold,success_num,success_den,enumerator_digest,wall_time_ms";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn report_csv(report: &SearchReport) -> String {
    let mut s = String::new();
    writeln!(s, "{CSV_HEADER}").unwrap();
    let opt = |v: Option<usize>| v.map(|d| d.to_string()).unwrap_or_default();
    for r in &report.records {
        let (ln, ld) = r
            .leading
            .as_ref()
            .map(|l| (l.numer().to_string(), l.denom().to_string()))
            .unwrap_or_default();
        writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&r.id),
            r.n,
            r.k,
            opt(r.distance),
            r.b_at_minus_half.numer(),
            r.b_at_minus_half.denom(),
            r.distills,
            r.classification.label(),
            opt(r.delta),
            ln,
            ld,
            r.threshold,
            r.success_at_zero.numer(),
            r.success_at_zero.denom(),
            r.enumerator_digest,
            r.wall_time_ms
        )
        .unwrap();
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<ReportFormat> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::InvalidInput(format!("unknown report format {s:?}"))),
        }
    }
}

pub fn render_report(report: &SearchReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => report_csv(report),
        ReportFormat::Json => serde_json::to_string_pretty(report).expect("report serialises") + "\n",
    }
}

pub fn write_report(report: &SearchReport, path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_report(report, format)).map_err(|e| Error::io(path, e))
}

pub fn read_report_json(path: impl AsRef<Path>) -> Result<SearchReport> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}
