//! Arithmetic over GF(3): scalars, dense vectors and matrices, row reduction,
//! kernels, and the symplectic form on `(u|v)` pairs.
//!
//! Two vector representations live here. [`FFVector`] is a plain byte-per-trit
//! vector used for parsing, linear algebra and anything that is not hot.
//! [`PackedTrits`] stores up to 64 trits as a pair of bit planes and is what the
//! enumeration loops use; the two round-trip exactly.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// An element of GF(3), always reduced to `0..3`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trit(u8);

impl Trit {
    pub const ZERO: Trit = Trit(0);
    pub const ONE: Trit = Trit(1);
    pub const TWO: Trit = Trit(2);

    pub const fn new(value: u8) -> Trit {
        Trit(value % 3)
    }

    pub fn from_i64(value: i64) -> Trit {
        Trit(value.rem_euclid(3) as u8)
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Multiplicative inverse; `None` for zero. In GF(3) every unit is its own inverse.
    pub fn inv(self) -> Option<Trit> {
        match self.0 {
            0 => None,
            v => Some(Trit(v)),
        }
    }

    pub fn from_char(c: char) -> Option<Trit> {
        match c {
            '0' => Some(Trit(0)),
            '1' => Some(Trit(1)),
            '2' => Some(Trit(2)),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        (b'0' + self.0) as char
    }
}

impl Add for Trit {
    type Output = Trit;
    fn add(self, rhs: Trit) -> Trit {
        let s = self.0 + rhs.0;
        Trit(if s >= 3 { s - 3 } else { s })
    }
}

impl Sub for Trit {
    type Output = Trit;
    fn sub(self, rhs: Trit) -> Trit {
        self + (-rhs)
    }
}

impl Neg for Trit {
    type Output = Trit;
    fn neg(self) -> Trit {
        Trit(if self.0 == 0 { 0 } else { 3 - self.0 })
    }
}

impl Mul for Trit {
    type Output = Trit;
    fn mul(self, rhs: Trit) -> Trit {
        let p = self.0 * rhs.0;
        Trit(if p >= 3 { p - 3 } else { p })
    }
}

impl fmt::Display for Trit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A fixed-length vector over GF(3).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FFVector(Vec<Trit>);

impl FFVector {
    pub fn zeros(len: usize) -> FFVector {
        FFVector(vec![Trit::ZERO; len])
    }

    pub fn from_trits(entries: Vec<Trit>) -> FFVector {
        FFVector(entries)
    }

    pub fn from_u8s(values: &[u8]) -> FFVector {
        FFVector(values.iter().map(|&v| Trit::new(v)).collect())
    }

    /// Parses a string of `0`/`1`/`2` characters with no separators.
    pub fn parse_digits(s: &str) -> Option<FFVector> {
        s.chars().map(Trit::from_char).collect::<Option<Vec<_>>>().map(FFVector)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Trit {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: Trit) {
        self.0[i] = value;
    }

    pub fn entries(&self) -> &[Trit] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|t| t.is_zero())
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|t| !t.is_zero()).count()
    }

    pub fn dot(&self, other: &FFVector) -> Trit {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Trit::ZERO, |acc, (&a, &b)| acc + a * b)
    }

    pub fn scale(&self, s: Trit) -> FFVector {
        FFVector(self.0.iter().map(|&t| t * s).collect())
    }

    pub fn add_scaled(&mut self, other: &FFVector, s: Trit) {
        for (a, &b) in self.0.iter_mut().zip(&other.0) {
            *a = *a + b * s;
        }
    }

    pub fn concat(&self, other: &FFVector) -> FFVector {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        FFVector(v)
    }

    pub fn slice(&self, start: usize, end: usize) -> FFVector {
        FFVector(self.0[start..end].to_vec())
    }

    pub fn to_digits(&self) -> String {
        self.0.iter().map(|t| t.to_char()).collect()
    }

    pub fn pack(&self) -> PackedTrits {
        PackedTrits::from_vector(self)
    }
}

impl Add for &FFVector {
    type Output = FFVector;
    fn add(self, rhs: &FFVector) -> FFVector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        FFVector(self.0.iter().zip(&rhs.0).map(|(&a, &b)| a + b).collect())
    }
}

impl fmt::Display for FFVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_digits())
    }
}

/// Up to 64 trits packed into two bit planes: bit `i` of `ones` is set when
/// trit `i` equals 1, bit `i` of `twos` when it equals 2. The planes never
/// overlap.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PackedTrits {
    pub ones: u64,
    pub twos: u64,
}

impl PackedTrits {
    pub const MAX_LEN: usize = 64;

    pub fn from_vector(v: &FFVector) -> PackedTrits {
        assert!(v.len() <= Self::MAX_LEN, "packed vectors hold at most 64 trits");
        let mut p = PackedTrits::default();
        for (i, t) in v.entries().iter().enumerate() {
            match t.value() {
                1 => p.ones |= 1 << i,
                2 => p.twos |= 1 << i,
                _ => {}
            }
        }
        p
    }

    pub fn to_vector(self, len: usize) -> FFVector {
        FFVector(
            (0..len)
                .map(|i| {
                    if self.ones >> i & 1 == 1 {
                        Trit::ONE
                    } else if self.twos >> i & 1 == 1 {
                        Trit::TWO
                    } else {
                        Trit::ZERO
                    }
                })
                .collect(),
        )
    }

    #[inline]
    pub fn support(self) -> u64 {
        self.ones | self.twos
    }

    #[inline]
    pub fn weight(self) -> u32 {
        self.support().count_ones()
    }

    #[inline]
    pub fn neg(self) -> PackedTrits {
        PackedTrits { ones: self.twos, twos: self.ones }
    }

    /// Trit-wise addition mod 3 with eight bitwise operations.
    #[inline]
    pub fn add(self, rhs: PackedTrits) -> PackedTrits {
        let t = (self.ones | rhs.twos) ^ (self.twos | rhs.ones);
        PackedTrits {
            ones: (self.twos | rhs.twos) ^ t,
            twos: (self.ones | rhs.ones) ^ t,
        }
    }

    #[inline]
    pub fn scale(self, s: Trit) -> PackedTrits {
        match s.value() {
            0 => PackedTrits::default(),
            1 => self,
            _ => self.neg(),
        }
    }

    /// Dot product mod 3.
    #[inline]
    pub fn dot(self, rhs: PackedTrits) -> Trit {
        // Products equal to 1 come from (1,1) and (2,2); products equal to 2 from (1,2) and (2,1).
        let p1 = (self.ones & rhs.ones) | (self.twos & rhs.twos);
        let p2 = (self.ones & rhs.twos) | (self.twos & rhs.ones);
        Trit::from_i64(p1.count_ones() as i64 + 2 * p2.count_ones() as i64)
    }
}

/// A symplectic vector `(u|v)` labelling the displacement operator `D(u,v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymplecticVector {
    pub u: FFVector,
    pub v: FFVector,
}

impl SymplecticVector {
    pub fn new(u: FFVector, v: FFVector) -> Result<SymplecticVector> {
        if u.len() != v.len() {
            return Err(Error::InvalidInput(format!(
                "symplectic halves differ in length: {} vs {}",
                u.len(),
                v.len()
            )));
        }
        Ok(SymplecticVector { u, v })
    }

    pub fn zeros(n: usize) -> SymplecticVector {
        SymplecticVector { u: FFVector::zeros(n), v: FFVector::zeros(n) }
    }

    /// Splits a length-`2n` row into its `u` and `v` halves.
    pub fn from_row(row: &FFVector) -> SymplecticVector {
        let n = row.len() / 2;
        SymplecticVector { u: row.slice(0, n), v: row.slice(n, 2 * n) }
    }

    pub fn to_row(&self) -> FFVector {
        self.u.concat(&self.v)
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    /// Number of sites where `(u_i, v_i) != (0, 0)`.
    pub fn weight(&self) -> usize {
        (0..self.n())
            .filter(|&i| !self.u.get(i).is_zero() || !self.v.get(i).is_zero())
            .count()
    }

    pub fn scale(&self, s: Trit) -> SymplecticVector {
        SymplecticVector { u: self.u.scale(s), v: self.v.scale(s) }
    }

    pub fn add(&self, other: &SymplecticVector) -> SymplecticVector {
        SymplecticVector { u: &self.u + &other.u, v: &self.v + &other.v }
    }

    pub fn pack(&self) -> PackedSymplectic {
        PackedSymplectic { u: self.u.pack(), v: self.v.pack() }
    }
}

impl fmt::Display for SymplecticVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.u, self.v)
    }
}

/// Packed form of a [`SymplecticVector`] for `n <= 64`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PackedSymplectic {
    pub u: PackedTrits,
    pub v: PackedTrits,
}

impl PackedSymplectic {
    #[inline]
    pub fn add(self, rhs: PackedSymplectic) -> PackedSymplectic {
        PackedSymplectic { u: self.u.add(rhs.u), v: self.v.add(rhs.v) }
    }

    #[inline]
    pub fn scale(self, s: Trit) -> PackedSymplectic {
        PackedSymplectic { u: self.u.scale(s), v: self.v.scale(s) }
    }

    /// Mask of sites with `(u_i, v_i) != (0, 0)`.
    #[inline]
    pub fn support(self) -> u64 {
        self.u.support() | self.v.support()
    }

    #[inline]
    pub fn weight(self) -> u32 {
        self.support().count_ones()
    }

    #[inline]
    pub fn symplectic(self, rhs: PackedSymplectic) -> Trit {
        self.u.dot(rhs.v) - rhs.u.dot(self.v)
    }

    pub fn unpack(self, n: usize) -> SymplecticVector {
        SymplecticVector { u: self.u.to_vector(n), v: self.v.to_vector(n) }
    }
}

/// `[a, b] = u_a . v_b - u_b . v_a (mod 3)`.
pub fn symplectic_product(a: &SymplecticVector, b: &SymplecticVector) -> Result<Trit> {
    if a.n() != b.n() || a.u.len() != a.v.len() || b.u.len() != b.v.len() {
        return Err(Error::InvalidInput(format!(
            "symplectic product of vectors on {} and {} sites",
            a.n(),
            b.n()
        )));
    }
    Ok(a.u.dot(&b.v) - b.u.dot(&a.v))
}

/// A dense row-major matrix over GF(3).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FFMatrix {
    rows: Vec<FFVector>,
    n_cols: usize,
}

impl FFMatrix {
    pub fn new(rows: Vec<FFVector>, n_cols: usize) -> Result<FFMatrix> {
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n_cols) {
            return Err(Error::InvalidInput(format!(
                "row {} has {} columns, expected {}",
                i,
                r.len(),
                n_cols
            )));
        }
        Ok(FFMatrix { rows, n_cols })
    }

    pub fn from_rows(rows: Vec<FFVector>) -> Result<FFMatrix> {
        let n_cols = rows.first().map_or(0, FFVector::len);
        FFMatrix::new(rows, n_cols)
    }

    /// Builds a matrix from nested integer literals; panics on ragged input.
    pub fn from_u8_rows(rows: &[&[u8]]) -> FFMatrix {
        let n_cols = rows.first().map_or(0, |r| r.len());
        FFMatrix::new(rows.iter().map(|r| FFVector::from_u8s(r)).collect(), n_cols)
            .expect("ragged matrix literal")
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> FFMatrix {
        FFMatrix { rows: vec![FFVector::zeros(n_cols); n_rows], n_cols }
    }

    pub fn identity(n: usize) -> FFMatrix {
        let mut m = FFMatrix::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, Trit::ONE);
        }
        m
    }

    pub fn empty(n_cols: usize) -> FFMatrix {
        FFMatrix { rows: Vec::new(), n_cols }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[FFVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &FFVector {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Trit {
        self.rows[i].get(j)
    }

    pub fn push_row(&mut self, row: FFVector) -> Result<()> {
        if row.len() != self.n_cols {
            return Err(Error::InvalidInput(format!(
                "row has {} columns, expected {}",
                row.len(),
                self.n_cols
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> FFMatrix {
        let rows = (0..self.n_cols)
            .map(|j| FFVector::from_trits(self.rows.iter().map(|r| r.get(j)).collect()))
            .collect();
        FFMatrix { rows, n_cols: self.n_rows() }
    }

    /// `self * v^T`.
    pub fn mul_vec(&self, v: &FFVector) -> FFVector {
        FFVector::from_trits(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    /// `self * other^T`, i.e. the Gram-style product of row sets.
    pub fn mul_transpose(&self, other: &FFMatrix) -> FFMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| FFVector::from_trits(other.rows.iter().map(|s| r.dot(s)).collect()))
            .collect();
        FFMatrix { rows, n_cols: other.n_rows() }
    }

    /// Row-space combination `coeffs . rows`.
    pub fn combine(&self, coeffs: &FFVector) -> FFVector {
        let mut acc = FFVector::zeros(self.n_cols);
        for (r, &c) in self.rows.iter().zip(coeffs.entries()) {
            if !c.is_zero() {
                acc.add_scaled(r, c);
            }
        }
        acc
    }

    pub fn rank(&self) -> usize {
        rref_in_place(&mut self.clone()).len()
    }

    /// Whether `v` lies in the row span.
    pub fn spans(&self, v: &FFVector) -> bool {
        let mut with = self.clone();
        with.rows.push(v.clone());
        with.rank() == self.rank()
    }

    /// Drops zero rows.
    pub fn nonzero_rows(&self) -> FFMatrix {
        FFMatrix {
            rows: self.rows.iter().filter(|r| !r.is_zero()).cloned().collect(),
            n_cols: self.n_cols,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> FFMatrix {
        let rows = self
            .rows
            .iter()
            .map(|r| FFVector::from_trits(cols.iter().map(|&j| r.get(j)).collect()))
            .collect();
        FFMatrix { rows, n_cols: cols.len() }
    }
}

impl fmt::Display for FFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Reduces `m` to reduced row echelon form in place and returns the pivot columns.
fn rref_in_place(m: &mut FFMatrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..m.n_cols {
        if lead == m.rows.len() {
            break;
        }
        let Some(p) = (lead..m.rows.len()).find(|&i| !m.rows[i].get(col).is_zero()) else {
            continue;
        };
        m.rows.swap(lead, p);
        let inv = m.rows[lead].get(col).inv().expect("pivot is nonzero");
        m.rows[lead] = m.rows[lead].scale(inv);
        let pivot_row = m.rows[lead].clone();
        for i in 0..m.rows.len() {
            if i != lead {
                let f = m.rows[i].get(col);
                if !f.is_zero() {
                    m.rows[i].add_scaled(&pivot_row, -f);
                }
            }
        }
        pivots.push(col);
        lead += 1;
    }
    pivots
}

/// Reduced row echelon form and rank. Zero rows are kept at the bottom so the
/// shape is unchanged.
pub fn ff_rref(m: &FFMatrix) -> (FFMatrix, usize) {
    let mut out = m.clone();
    let rank = rref_in_place(&mut out).len();
    (out, rank)
}

/// Basis of `{x : m x^T = 0}`.
///
/// One basis vector per free column of the RREF, in increasing column order,
/// each rescaled so its first nonzero entry is 1.
pub fn ff_kernel(m: &FFMatrix) -> FFMatrix {
    let mut r = m.clone();
    let pivots = rref_in_place(&mut r);
    let n = m.n_cols;
    let mut basis = FFMatrix::empty(n);
    let mut is_pivot = vec![None; n];
    for (row, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(row);
    }
    for free in (0..n).filter(|&c| is_pivot[c].is_none()) {
        let mut x = FFVector::zeros(n);
        x.set(free, Trit::ONE);
        for (row, &pc) in pivots.iter().enumerate() {
            x.set(pc, -r.rows[row].get(free));
        }
        let lead = x.entries().iter().find(|t| !t.is_zero()).copied().unwrap_or(Trit::ONE);
        basis.rows.push(x.scale(lead.inv().unwrap_or(Trit::ONE)));
    }
    basis
}

/// Visits every element of the GF(3) span of `generators` exactly once,
/// including zero. Consecutive elements differ by one generator addition in
/// the common case (base-3 counter with carry), so the walk is amortised O(1)
/// per element.
pub fn for_each_span_element<T, A, F>(generators: &[T], zero: T, add: A, mut visit: F)
where
    T: Copy,
    A: Fn(T, T) -> T,
    F: FnMut(T),
{
    let k = generators.len();
    let mut digits = vec![0u8; k];
    let mut current = zero;
    visit(current);
    loop {
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            current = add(current, generators[i]);
            if digits[i] == 2 {
                digits[i] = 0;
                i += 1;
            } else {
                digits[i] += 1;
                break;
            }
        }
        visit(current);
    }
}
