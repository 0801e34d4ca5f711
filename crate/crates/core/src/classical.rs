//! Classical ternary linear codes.
//!
//! Codes are stored with their generator in reduced row echelon form, so two
//! generator matrices for the same code always produce the same stored value.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::enumerators::{EnumeratorKind, WeightEnumerator};
use crate::error::{Error, Result};
use crate::gf3::{ff_rref, for_each_span_element, FFMatrix, FFVector, PackedTrits};

/// Largest dimension we are willing to enumerate (3^k codewords).
pub const MAX_ENUMERATION_DIM: usize = 30;

pub const TERNARY_CODE_HEADER: &str = "TERNARY-CODE v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalTernaryCode {
    pub id: String,
    generator: FFMatrix,
}

impl ClassicalTernaryCode {
    /// Builds a code from any spanning set; the stored generator is its RREF
    /// with zero rows removed.
    pub fn new(id: impl Into<String>, spanning: &FFMatrix) -> ClassicalTernaryCode {
        let (r, _) = ff_rref(spanning);
        ClassicalTernaryCode { id: id.into(), generator: r.nonzero_rows() }
    }

    /// Like [`new`](Self::new) but fails unless the rows are independent and
    /// there are exactly `k` of them.
    pub fn with_dimension(id: impl Into<String>, generator: &FFMatrix, k: usize) -> Result<ClassicalTernaryCode> {
        let code = ClassicalTernaryCode::new(id, generator);
        if code.k() != k || generator.n_rows() != k {
            return Err(Error::RankMismatch { declared: k, computed: code.k() });
        }
        Ok(code)
    }

    pub fn generator(&self) -> &FFMatrix {
        &self.generator
    }

    pub fn n(&self) -> usize {
        self.generator.n_cols()
    }

    pub fn k(&self) -> usize {
        self.generator.n_rows()
    }

    /// Every pair of generator rows, including each row with itself, is
    /// orthogonal under the Euclidean dot product.
    pub fn is_self_orthogonal(&self) -> bool {
        self.first_non_orthogonal_pair().is_none()
    }

    pub fn first_non_orthogonal_pair(&self) -> Option<(usize, usize)> {
        let rows = self.generator.rows();
        for i in 0..rows.len() {
            for j in i..rows.len() {
                if !rows[i].dot(&rows[j]).is_zero() {
                    return Some((i, j));
                }
            }
        }
        None
    }

    fn check_budget(&self) -> Result<()> {
        if self.k() > MAX_ENUMERATION_DIM {
            return Err(Error::ResourceLimit(format!(
                "{}: enumerating 3^{} codewords exceeds the 3^{} budget",
                self.id,
                self.k(),
                MAX_ENUMERATION_DIM
            )));
        }
        if self.n() > PackedTrits::MAX_LEN {
            return Err(Error::ResourceLimit(format!("{}: length {} exceeds 64", self.id, self.n())));
        }
        Ok(())
    }

    fn packed_rows(&self) -> Vec<PackedTrits> {
        self.generator.rows().iter().map(FFVector::pack).collect()
    }

    /// Calls `visit` once per codeword, zero included.
    pub fn for_each_codeword(&self, visit: impl FnMut(PackedTrits)) -> Result<()> {
        self.check_budget()?;
        for_each_span_element(&self.packed_rows(), PackedTrits::default(), PackedTrits::add, visit);
        Ok(())
    }

    pub fn support_distribution(&self) -> Result<SupportDistribution> {
        let mut counts = BTreeMap::new();
        self.for_each_codeword(|c| *counts.entry(c.support()).or_insert(0u64) += 1)?;
        Ok(SupportDistribution { n: self.n(), counts })
    }

    /// Hamming weight enumerator of the code.
    pub fn weight_enumerator(&self) -> Result<WeightEnumerator> {
        let mut counts = vec![0u64; self.n() + 1];
        self.for_each_codeword(|c| counts[c.weight() as usize] += 1)?;
        Ok(WeightEnumerator::from_counts(&counts, self.n(), self.k() as i64, EnumeratorKind::Classical))
    }

    /// Serializes in the `TERNARY-CODE v1` format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{TERNARY_CODE_HEADER}").unwrap();
        writeln!(s, "n={} k={} id={}", self.n(), self.k(), self.id).unwrap();
        for row in self.generator.rows() {
            writeln!(s, "{row}").unwrap();
        }
        s
    }
}

/// Number of codewords with each exact support set (bit `i` set when
/// coordinate `i` is nonzero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportDistribution {
    pub n: usize,
    pub counts: BTreeMap<u64, u64>,
}

impl SupportDistribution {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, mask: u64) -> u64 {
        self.counts.get(&mask).copied().unwrap_or(0)
    }
}

/// Returns the non-comment, non-blank lines with their 1-based line numbers.
/// Trailing `\r` is stripped so CRLF input parses identically.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.strip_suffix('\r').unwrap_or(l);
        let t = l.trim();
        if t.is_empty() || t.starts_with('#') {
            None
        } else {
            Some((i + 1, l))
        }
    })
}

/// Parses `key=value` tokens from a header line.
pub(crate) fn header_fields(line: &str, lineno: usize) -> Result<BTreeMap<String, String>> {
    line.split_whitespace()
        .map(|tok| {
            tok.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::parse(lineno, format!("expected key=value, got {tok:?}")))
        })
        .collect()
}

pub(crate) fn header_usize(fields: &BTreeMap<String, String>, key: &str, lineno: usize) -> Result<usize> {
    fields
        .get(key)
        .ok_or_else(|| Error::parse(lineno, format!("missing {key}=")))?
        .parse()
        .map_err(|_| Error::parse(lineno, format!("{key} is not a nonnegative integer")))
}

/// Parses a `TERNARY-CODE v1` document.
pub fn parse_classical(text: &str) -> Result<ClassicalTernaryCode> {
    let mut lines = content_lines(text);
    let (l1, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    if header.trim() != TERNARY_CODE_HEADER {
        return Err(Error::parse(l1, format!("expected {TERNARY_CODE_HEADER:?}")));
    }
    let (l2, dims) = lines.next().ok_or_else(|| Error::parse(l1 + 1, "missing dimension line"))?;
    let fields = header_fields(dims, l2)?;
    let n = header_usize(&fields, "n", l2)?;
    let k = header_usize(&fields, "k", l2)?;
    let id = fields.get("id").cloned().unwrap_or_else(|| format!("ternary-{n}-{k}"));
    if k > n {
        return Err(Error::parse(l2, format!("k = {k} exceeds n = {n}")));
    }
    let mut rows = Vec::with_capacity(k);
    for _ in 0..k {
        let (ln, row) = lines
            .next()
            .ok_or_else(|| Error::parse(l2, format!("expected {k} generator rows, found {}", rows.len())))?;
        let v = FFVector::parse_digits(row)
            .ok_or_else(|| Error::parse(ln, format!("row {row:?} has a character outside 0/1/2")))?;
        if v.len() != n {
            return Err(Error::parse(ln, format!("row has {} characters, expected {n}", v.len())));
        }
        rows.push(v);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "unexpected content after generator rows"));
    }
    ClassicalTernaryCode::with_dimension(id, &FFMatrix::new(rows, n)?, k)
}

/// One matrix block recovered from a MAGMA-style listing.
#[derive(Debug)]
pub struct MagmaEntry {
    pub line: usize,
    pub result: Result<ClassicalTernaryCode>,
}

fn digits_of(line: &str) -> Option<Vec<u8>> {
    let cleaned: String = line
        .chars()
        .map(|c| if "[](){}<>,;:|".contains(c) { ' ' } else { c })
        .collect();
    let toks: Vec<&str> = cleaned.split_whitespace().collect();
    if toks.is_empty() {
        return None;
    }
    // A lone run of ternary digits is a compact row.
    if let [t] = toks.as_slice() {
        if t.len() > 1 && t.bytes().all(|b| (b'0'..=b'2').contains(&b)) {
            return Some(t.bytes().map(|b| b - b'0').collect());
        }
    }
    toks.iter().map(|t| t.parse::<u8>().ok()).collect()
}

/// Best-effort reader for MAGMA-style matrix listings.
///
/// Two shapes are recognised: runs of consecutive lines that each hold only
/// digits (separated by spaces, commas or brackets), one matrix row per line;
/// and `Matrix(GF(3), r, c, [ ... ])` calls whose entries are a flat list.
/// Every block is validated (entries in 0..3, rectangular, full rank,
/// self-orthogonal); failures are returned as per-entry errors.
pub fn parse_magma_listing(text: &str, id_prefix: &str) -> Vec<MagmaEntry> {
    let mut entries = Vec::new();
    let lines: Vec<&str> = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
    let mut i = 0;
    let mut block: Vec<(usize, Vec<u8>)> = Vec::new();

    let flush = |block: &mut Vec<(usize, Vec<u8>)>, entries: &mut Vec<MagmaEntry>| {
        if block.is_empty() {
            return;
        }
        let line = block[0].0;
        let id = format!("{id_prefix}-{}", entries.len() + 1);
        let rows: Vec<Vec<u8>> = block.drain(..).map(|(_, r)| r).collect();
        entries.push(MagmaEntry { line, result: matrix_block_to_code(id, rows, line) });
    };

    while i < lines.len() {
        let line = lines[i];
        if let Some(pos) = line.find("Matrix(") {
            flush(&mut block, &mut entries);
            // Gather text until the closing bracket of the flat list.
            let start = i;
            let mut call = line[pos..].to_string();
            while !call.contains(']') && i + 1 < lines.len() {
                i += 1;
                call.push(' ');
                call.push_str(lines[i]);
            }
            let id = format!("{id_prefix}-{}", entries.len() + 1);
            entries.push(MagmaEntry { line: start + 1, result: parse_matrix_call(id, &call, start + 1) });
        } else if let Some(row) = digits_of(line).filter(|r| r.len() > 1) {
            if block.last().is_some_and(|(_, prev)| prev.len() != row.len()) {
                flush(&mut block, &mut entries);
            }
            block.push((i + 1, row));
        } else {
            flush(&mut block, &mut entries);
        }
        i += 1;
    }
    flush(&mut block, &mut entries);
    entries
}

fn parse_matrix_call(id: String, call: &str, line: usize) -> Result<ClassicalTernaryCode> {
    let open = call.find('[').ok_or_else(|| Error::parse(line, "Matrix call without entry list"))?;
    let close = call.find(']').ok_or_else(|| Error::parse(line, "unterminated entry list"))?;
    let head: Vec<usize> = call[..open]
        .split(|c: char| !c.is_ascii_digit())
        .filter_map(|t| t.parse().ok())
        .collect();
    // head is [3 (from GF(3)), rows, cols]
    let (r, c) = match head.as_slice() {
        [3, r, c] => (*r, *c),
        _ => return Err(Error::parse(line, "expected Matrix(GF(3), rows, cols, [...])")),
    };
    let flat = digits_of(&call[open..=close]).ok_or_else(|| Error::parse(line, "non-numeric matrix entry"))?;
    if flat.len() != r * c {
        return Err(Error::parse(line, format!("expected {} entries, found {}", r * c, flat.len())));
    }
    matrix_block_to_code(id, flat.chunks(c).map(<[u8]>::to_vec).collect(), line)
}

fn matrix_block_to_code(id: String, rows: Vec<Vec<u8>>, line: usize) -> Result<ClassicalTernaryCode> {
    if let Some(bad) = rows.iter().flatten().find(|&&d| d > 2) {
        return Err(Error::parse(line, format!("entry {bad} is not in GF(3)")));
    }
    let n = rows[0].len();
    let k = rows.len();
    let m = FFMatrix::new(rows.iter().map(|r| FFVector::from_u8s(r)).collect(), n)?;
    let code = ClassicalTernaryCode::with_dimension(id, &m, k)?;
    if let Some((a, b)) = code.first_non_orthogonal_pair() {
        return Err(Error::NotSelfOrthogonal(a, b));
    }
    Ok(code)
}
