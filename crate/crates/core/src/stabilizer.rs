//! Qutrit stabilizer codes in the symplectic representation.
//!
//! A code on `n` qutrits is an `r x 2n` matrix whose rows `(u|v)` label the
//! generating displacement operators `D(u, v)`. Only trivial-syndrome codes
//! are represented: every generator has eigenvalue `omega^0` on the code space.

use std::fmt::Write as _;

use crate::classical::{content_lines, header_fields, header_usize, ClassicalTernaryCode};
use crate::error::{Error, Result};
use crate::gf3::{
    ff_kernel, ff_rref, symplectic_product, FFMatrix, FFVector, PackedSymplectic, SymplecticVector, Trit,
};

pub const STABILIZER_CODE_HEADER: &str = "STABILIZER-CODE v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerCode {
    pub id: String,
    n: usize,
    h: FFMatrix,
}

impl StabilizerCode {
    /// Builds and validates a code from its `r x 2n` symplectic matrix.
    pub fn new(id: impl Into<String>, n: usize, h: FFMatrix) -> Result<StabilizerCode> {
        let code = StabilizerCode::from_matrix_unchecked(id, n, h)?;
        code.validate()?;
        Ok(code)
    }

    /// Shape checks only; commutation and independence are not verified.
    pub fn from_matrix_unchecked(id: impl Into<String>, n: usize, h: FFMatrix) -> Result<StabilizerCode> {
        if h.n_cols() != 2 * n {
            return Err(Error::InvalidInput(format!(
                "symplectic matrix has {} columns, expected 2n = {}",
                h.n_cols(),
                2 * n
            )));
        }
        Ok(StabilizerCode { id: id.into(), n, h })
    }

    pub fn from_generators(id: impl Into<String>, n: usize, gens: &[SymplecticVector]) -> Result<StabilizerCode> {
        let rows = gens.iter().map(SymplecticVector::to_row).collect();
        StabilizerCode::new(id, n, FFMatrix::new(rows, 2 * n)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.h.n_rows()
    }

    /// Number of encoded qutrits, `n - r`.
    pub fn k(&self) -> usize {
        self.n - self.r()
    }

    pub fn matrix(&self) -> &FFMatrix {
        &self.h
    }

    pub fn generator(&self, i: usize) -> SymplecticVector {
        SymplecticVector::from_row(self.h.row(i))
    }

    pub fn generators(&self) -> Vec<SymplecticVector> {
        self.h.rows().iter().map(SymplecticVector::from_row).collect()
    }

    pub fn packed_generators(&self) -> Vec<PackedSymplectic> {
        assert!(self.n <= 64, "packed representation holds at most 64 qutrits");
        self.generators().iter().map(SymplecticVector::pack).collect()
    }

    /// Rows pairwise commute and are linearly independent.
    pub fn validate(&self) -> Result<()> {
        let gens = self.generators();
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if !symplectic_product(&gens[i], &gens[j])?.is_zero() {
                    return Err(Error::NonCommutingRows(i, j));
                }
            }
        }
        if self.h.rank() != self.r() {
            return Err(Error::DependentRows);
        }
        Ok(())
    }

    /// Whether `chi` commutes with every generator.
    pub fn commutes_with(&self, chi: &SymplecticVector) -> bool {
        self.generators()
            .iter()
            .all(|g| symplectic_product(g, chi).is_ok_and(|t| t.is_zero()))
    }

    /// Whether `chi` lies in the row span of the stabilizer matrix.
    pub fn contains(&self, chi: &SymplecticVector) -> bool {
        self.h.spans(&chi.to_row())
    }

    /// Basis of `S^perp`: all `(x|z)` with `[h_i, (x|z)] = 0` for every row.
    pub fn dual_basis(&self) -> DualBasis {
        // [h, (x|z)] = u.z - x.v, so the constraint matrix is (-V | U).
        let n = self.n;
        let rows = self
            .h
            .rows()
            .iter()
            .map(|row| {
                let g = SymplecticVector::from_row(row);
                g.v.scale(-Trit::ONE).concat(&g.u)
            })
            .collect();
        let constraints = FFMatrix::new(rows, 2 * n).expect("constraint rows have 2n columns");
        DualBasis { n, rows: ff_kernel(&constraints) }
    }

    /// Representatives `(X_bar, Z_bar)` of the logical Paulis for a `k = 1` code.
    ///
    /// Scans the dual basis rows in order: `X_bar` is the first row outside
    /// the stabilizer span and `Z_bar` the first row with nonzero pairing
    /// against it, rescaled so `[X_bar, Z_bar] = 1`.
    pub fn logical_operators(&self) -> Result<LogicalPair> {
        if self.k() != 1 {
            return Err(Error::Unsupported(format!(
                "logical operators need k = 1, code {} has k = {}",
                self.id,
                self.k()
            )));
        }
        let dual = self.dual_basis();
        let candidates: Vec<SymplecticVector> = dual.vectors();
        let xbar = candidates
            .iter()
            .find(|c| !self.contains(c))
            .cloned()
            .ok_or_else(|| Error::InvalidInput("dual equals stabilizer span".into()))?;
        for c in &candidates {
            let pairing = symplectic_product(&xbar, c)?;
            if let Some(inv) = pairing.inv() {
                let zbar = c.scale(inv);
                return Ok(LogicalPair { xbar, zbar });
            }
        }
        Err(Error::InvalidInput(format!("no logical partner found for {}", self.id)))
    }

    /// Shortens a stabilizer state (`k = 0`) at `coord` (0-based): applies
    /// `rotation` to that site, keeps the subgroup acting trivially there and
    /// deletes the site. The result must be an `[[n-1, 1]]` code.
    pub fn shorten(&self, coord: usize, rotation: &LocalRotation) -> Result<StabilizerCode> {
        if self.k() != 0 {
            return Err(Error::InvalidInput(format!("shortening needs a stabilizer state, k = {}", self.k())));
        }
        if coord >= self.n {
            return Err(Error::InvalidInput(format!("coordinate {coord} out of range for n = {}", self.n)));
        }
        let n = self.n;
        let rotated: Vec<SymplecticVector> =
            self.generators().into_iter().map(|g| rotation.apply_at(&g, coord)).collect();
        // Linear map from generator coefficients to the (u, v) pair at coord.
        let site = FFMatrix::new(
            vec![
                FFVector::from_trits(rotated.iter().map(|g| g.u.get(coord)).collect()),
                FFVector::from_trits(rotated.iter().map(|g| g.v.get(coord)).collect()),
            ],
            rotated.len(),
        )?;
        let combos = ff_kernel(&site);
        let rotated_matrix = FFMatrix::new(rotated.iter().map(SymplecticVector::to_row).collect(), 2 * n)?;
        let keep: Vec<usize> = (0..n).filter(|&i| i != coord).collect();
        let cols: Vec<usize> = keep.iter().copied().chain(keep.iter().map(|&i| i + n)).collect();
        let rows: Vec<FFVector> = combos
            .rows()
            .iter()
            .map(|c| rotated_matrix.combine(c))
            .map(|row| FFMatrix::new(vec![row], 2 * n).unwrap().select_columns(&cols).row(0).clone())
            .collect();
        let expected = n.saturating_sub(2);
        if rows.len() != expected {
            return Err(Error::DegenerateShortening { rows: rows.len(), expected });
        }
        let id = format!("{}-s{}r{}", self.id, coord + 1, rotation.index);
        StabilizerCode::new(id, n - 1, FFMatrix::new(rows, 2 * (n - 1))?)
    }

    /// Serializes in the `STABILIZER-CODE v1` format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{STABILIZER_CODE_HEADER}").unwrap();
        writeln!(s, "p=3 n={} r={} id={}", self.n, self.r(), self.id).unwrap();
        for g in self.generators() {
            writeln!(s, "{}|{}", g.u, g.v).unwrap();
        }
        s
    }
}

/// Rows spanning `S^perp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualBasis {
    pub n: usize,
    pub rows: FFMatrix,
}

impl DualBasis {
    pub fn dim(&self) -> usize {
        self.rows.n_rows()
    }

    pub fn vectors(&self) -> Vec<SymplecticVector> {
        self.rows.rows().iter().map(SymplecticVector::from_row).collect()
    }

    pub fn contains(&self, chi: &SymplecticVector) -> bool {
        self.rows.spans(&chi.to_row())
    }

    /// The dual viewed as a (generally non-commuting) generator list, packed.
    pub fn packed(&self) -> Vec<PackedSymplectic> {
        self.vectors().iter().map(SymplecticVector::pack).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalPair {
    pub xbar: SymplecticVector,
    pub zbar: SymplecticVector,
}

impl LogicalPair {
    /// `a X_bar + b Z_bar`, the symplectic label of the logical displacement `D_bar(a, b)`.
    pub fn displacement(&self, a: Trit, b: Trit) -> SymplecticVector {
        self.xbar.scale(a).add(&self.zbar.scale(b))
    }
}

/// A single-site symplectic map `(u, v) -> (a u + b v, c u + d v)` with
/// `ad - bc = 1`, i.e. an element of SL(2, Z_3).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalRotation {
    pub index: usize,
    pub m: [[Trit; 2]; 2],
}

impl LocalRotation {
    pub fn identity() -> LocalRotation {
        LocalRotation { index: 0, m: [[Trit::ONE, Trit::ZERO], [Trit::ZERO, Trit::ONE]] }
    }

    /// All 24 elements of SL(2, Z_3), identity first.
    pub fn all() -> Vec<LocalRotation> {
        let mut out = Vec::with_capacity(24);
        for a in 0..3u8 {
            for b in 0..3u8 {
                for c in 0..3u8 {
                    for d in 0..3u8 {
                        let (a, b, c, d) = (Trit::new(a), Trit::new(b), Trit::new(c), Trit::new(d));
                        if a * d - b * c == Trit::ONE {
                            out.push([[a, b], [c, d]]);
                        }
                    }
                }
            }
        }
        let id = [[Trit::ONE, Trit::ZERO], [Trit::ZERO, Trit::ONE]];
        out.sort_by_key(|m| m != &id);
        out.into_iter().enumerate().map(|(index, m)| LocalRotation { index, m }).collect()
    }

    pub fn apply_at(&self, chi: &SymplecticVector, site: usize) -> SymplecticVector {
        let (u, v) = (chi.u.get(site), chi.v.get(site));
        let mut out = chi.clone();
        out.u.set(site, self.m[0][0] * u + self.m[0][1] * v);
        out.v.set(site, self.m[1][0] * u + self.m[1][1] * v);
        out
    }
}

/// CSS code with both the X block and the Z block equal to the classical generator.
pub fn css_from_classical(c: &ClassicalTernaryCode) -> Result<StabilizerCode> {
    if let Some((i, j)) = c.first_non_orthogonal_pair() {
        return Err(Error::NotSelfOrthogonal(i, j));
    }
    if c.n().is_multiple_of(2) {
        return Err(Error::EvenLength(c.n()));
    }
    let n = c.n();
    let zero = FFVector::zeros(n);
    let rows = c
        .generator()
        .rows()
        .iter()
        .map(|g| g.concat(&zero))
        .chain(c.generator().rows().iter().map(|g| zero.concat(g)))
        .collect();
    StabilizerCode::new(format!("css-{}", c.id), n, FFMatrix::new(rows, 2 * n)?)
}

/// Parses a `STABILIZER-CODE v1` document and validates the code.
pub fn parse_stabilizer(text: &str) -> Result<StabilizerCode> {
    let mut lines = content_lines(text);
    let (l1, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    if header.trim() != STABILIZER_CODE_HEADER {
        return Err(Error::parse(l1, format!("expected {STABILIZER_CODE_HEADER:?}")));
    }
    let (l2, dims) = lines.next().ok_or_else(|| Error::parse(l1 + 1, "missing dimension line"))?;
    let fields = header_fields(dims, l2)?;
    if header_usize(&fields, "p", l2)? != 3 {
        return Err(Error::parse(l2, "only p=3 is supported"));
    }
    let n = header_usize(&fields, "n", l2)?;
    let r = header_usize(&fields, "r", l2)?;
    if r > n {
        return Err(Error::parse(l2, format!("r = {r} exceeds n = {n}")));
    }
    let id = fields.get("id").cloned().unwrap_or_else(|| format!("stabilizer-{n}-{r}"));
    let mut rows = Vec::with_capacity(r);
    for _ in 0..r {
        let (ln, row) = lines
            .next()
            .ok_or_else(|| Error::parse(l2, format!("expected {r} rows, found {}", rows.len())))?;
        let (u, v) = row
            .split_once('|')
            .ok_or_else(|| Error::parse(ln, "row is missing the '|' separator"))?;
        let u = FFVector::parse_digits(u).ok_or_else(|| Error::parse(ln, "u-part has a character outside 0/1/2"))?;
        let v = FFVector::parse_digits(v).ok_or_else(|| Error::parse(ln, "v-part has a character outside 0/1/2"))?;
        if u.len() != n || v.len() != n {
            return Err(Error::parse(ln, format!("row halves have lengths {}|{}, expected {n}", u.len(), v.len())));
        }
        rows.push(u.concat(&v));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "unexpected content after stabilizer rows"));
    }
    StabilizerCode::new(id, n, FFMatrix::new(rows, 2 * n)?)
}

/// Puts the stabilizer matrix in RREF so equal groups compare equal.
pub fn canonical_matrix(code: &StabilizerCode) -> FFMatrix {
    ff_rref(code.matrix()).0.nonzero_rows()
}
