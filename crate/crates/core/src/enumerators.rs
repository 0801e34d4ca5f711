//! Weight enumerators of qutrit stabilizer codes.
//!
//! `A(z)` counts stabilizer group elements by symplectic support size and
//! `B(z)` does the same for `S^perp`. Two independent routes compute `A`:
//! direct enumeration of the `3^r` group elements, and for CSS codes a
//! subset-lattice transform over support masks of the classical code. `B` is
//! obtained exactly through the MacWilliams transform.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::{content_lines, header_fields, header_usize, ClassicalTernaryCode};
use crate::error::{Error, Result};
use crate::gf3::{for_each_span_element, PackedSymplectic, SymplecticVector};
use crate::poly::IntPoly;
use crate::stabilizer::StabilizerCode;

/// Largest generator count the naive enumerator accepts (3^r elements).
pub const MAX_NAIVE_RANK: usize = 22;
/// Largest generator count for complete enumerators.
pub const MAX_COMPLETE_RANK: usize = 12;
/// Largest length for the subset-transform path (2^n counters).
pub const MAX_FAST_LENGTH: usize = 29;
/// Default cap on the fast path's counter array, in bytes.
pub const DEFAULT_MEM_CAP: u64 = 2 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnumeratorKind {
    /// `A(z)`, the stabilizer group.
    A,
    /// `B(z)`, the dual `S^perp`.
    B,
    Coset,
    Classical,
}

impl EnumeratorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EnumeratorKind::A => "A",
            EnumeratorKind::B => "B",
            EnumeratorKind::Coset => "coset",
            EnumeratorKind::Classical => "classical",
        }
    }

    pub fn parse(s: &str) -> Option<EnumeratorKind> {
        match s {
            "A" => Some(EnumeratorKind::A),
            "B" => Some(EnumeratorKind::B),
            "coset" => Some(EnumeratorKind::Coset),
            "classical" => Some(EnumeratorKind::Classical),
            _ => None,
        }
    }
}

/// Simple weight enumerator `sum_w c_w z^w`; `coeffs[w] = c_w`, length `n + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightEnumerator {
    pub coeffs: Vec<BigInt>,
    pub n: usize,
    /// Encoded qutrits for kinds A/B/coset, classical dimension for kind classical.
    pub k: i64,
    pub kind: EnumeratorKind,
}

impl WeightEnumerator {
    pub fn new(mut coeffs: Vec<BigInt>, n: usize, k: i64, kind: EnumeratorKind) -> Result<WeightEnumerator> {
        if coeffs.len() > n + 1 && coeffs[n + 1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::InvalidInput(format!("enumerator degree exceeds n = {n}")));
        }
        if coeffs.iter().any(Signed::is_negative) {
            return Err(Error::InvalidInput("negative enumerator coefficient".into()));
        }
        coeffs.resize(n + 1, BigInt::zero());
        if matches!(kind, EnumeratorKind::A | EnumeratorKind::B) && !coeffs[0].is_one() {
            return Err(Error::InvalidInput(format!(
                "{} enumerator must have constant term 1, got {}",
                kind.as_str(),
                coeffs[0]
            )));
        }
        Ok(WeightEnumerator { coeffs, n, k, kind })
    }

    pub fn from_counts(counts: &[u64], n: usize, k: i64, kind: EnumeratorKind) -> WeightEnumerator {
        let mut coeffs: Vec<BigInt> = counts.iter().map(|&c| BigInt::from(c)).collect();
        coeffs.resize(n + 1, BigInt::zero());
        WeightEnumerator { coeffs, n, k, kind }
    }

    /// Convenience for literals: `(degree, coefficient)` pairs.
    pub fn from_terms(terms: &[(usize, u64)], n: usize, k: i64, kind: EnumeratorKind) -> Result<WeightEnumerator> {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        for &(d, c) in terms {
            if d > n {
                return Err(Error::InvalidInput(format!("degree {d} exceeds n = {n}")));
            }
            coeffs[d] += c;
        }
        WeightEnumerator::new(coeffs, n, k, kind)
    }

    pub fn coeff(&self, w: usize) -> &BigInt {
        &self.coeffs[w]
    }

    /// Coefficients as `u64`; panics if any does not fit. Test helper.
    pub fn coeffs_u64(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.to_u64().expect("coefficient fits in u64")).collect()
    }

    /// Value at `z = 1`, the number of elements counted.
    pub fn total(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.clone())
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.poly().eval(z)
    }

    /// Value of the `order`-th formal derivative at `z`.
    pub fn derivative_at(&self, order: usize, z: &BigRational) -> BigRational {
        let mut p = self.poly();
        for _ in 0..order {
            p = p.derivative();
        }
        p.eval(z)
    }

    /// Homogeneous evaluation `sum_w c_w x^(n-w) y^w`.
    pub fn eval_homogeneous(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        let mut ypow = BigRational::one();
        let xpows = powers(x, self.n);
        for (w, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += BigRational::from_integer(c.clone()) * &xpows[self.n - w] * &ypow;
            }
            ypow *= y;
        }
        acc
    }

    /// Stable hex digest of the coefficient list.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut h = Sha256::new();
        h.update(format!("n={};", self.n));
        for c in &self.coeffs {
            h.update(c.to_string());
            h.update(";");
        }
        hex::encode(h.finalize())
    }

    /// Serializes in the `WENUM v1` format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "WENUM v1").unwrap();
        writeln!(s, "n={} k={} kind={}", self.n, self.k, self.kind.as_str()).unwrap();
        for (w, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                writeln!(s, "{w} {c}").unwrap();
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<WeightEnumerator> {
        let mut lines = content_lines(text);
        let (l1, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        if header.trim() != "WENUM v1" {
            return Err(Error::parse(l1, "expected \"WENUM v1\""));
        }
        let (l2, dims) = lines.next().ok_or_else(|| Error::parse(l1 + 1, "missing parameter line"))?;
        let fields = header_fields(dims, l2)?;
        let n = header_usize(&fields, "n", l2)?;
        let k: i64 = fields
            .get("k")
            .ok_or_else(|| Error::parse(l2, "missing k="))?
            .parse()
            .map_err(|_| Error::parse(l2, "k is not an integer"))?;
        let kind = fields
            .get("kind")
            .and_then(|s| EnumeratorKind::parse(s))
            .ok_or_else(|| Error::parse(l2, "kind must be one of A, B, coset, classical"))?;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        let mut last: Option<usize> = None;
        for (ln, line) in lines {
            let mut it = line.split_whitespace();
            let (Some(d), Some(c), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::parse(ln, "expected \"<degree> <coefficient>\""));
            };
            let d: usize = d.parse().map_err(|_| Error::parse(ln, "bad degree"))?;
            let c: BigInt = c.parse().map_err(|_| Error::parse(ln, "bad coefficient"))?;
            if d > n {
                return Err(Error::parse(ln, format!("degree {d} exceeds n = {n}")));
            }
            if last.is_some_and(|l| d <= l) {
                return Err(Error::parse(ln, "degrees must be strictly ascending"));
            }
            last = Some(d);
            coeffs[d] = c;
        }
        WeightEnumerator::new(coeffs, n, k, kind).map_err(|e| Error::parse(l2, e.to_string()))
    }
}

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (w, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match w {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}z")?,
                _ => write!(f, "{c}z^{w}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn powers(x: &BigRational, n: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut p = BigRational::one();
    for _ in 0..=n {
        out.push(p.clone());
        p *= x;
    }
    out
}

fn check_packable(code: &StabilizerCode) -> Result<()> {
    if code.n() > 64 {
        return Err(Error::ResourceLimit(format!("{}: n = {} exceeds 64", code.id, code.n())));
    }
    Ok(())
}

fn weight_counts(n: usize, gens: &[PackedSymplectic], offset: PackedSymplectic) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    for_each_span_element(gens, offset, PackedSymplectic::add, |e| counts[e.weight() as usize] += 1);
    counts
}

/// `A(z)` by enumerating every element of the stabilizer group.
pub fn simple_wenum_naive(code: &StabilizerCode) -> Result<WeightEnumerator> {
    check_packable(code)?;
    if code.r() > MAX_NAIVE_RANK {
        return Err(Error::ResourceLimit(format!(
            "{}: naive enumeration of 3^{} elements exceeds the 3^{MAX_NAIVE_RANK} budget",
            code.id,
            code.r()
        )));
    }
    let counts = weight_counts(code.n(), &code.packed_generators(), PackedSymplectic::default());
    Ok(WeightEnumerator::from_counts(&counts, code.n(), code.k() as i64, EnumeratorKind::A))
}

/// `B(z)` by enumerating every element of `S^perp` (3^(n+k) elements).
pub fn dual_wenum_naive(code: &StabilizerCode) -> Result<WeightEnumerator> {
    check_packable(code)?;
    let dual = code.dual_basis();
    if dual.dim() > MAX_NAIVE_RANK {
        return Err(Error::ResourceLimit(format!("{}: dual has 3^{} elements", code.id, dual.dim())));
    }
    let counts = weight_counts(code.n(), &dual.packed(), PackedSymplectic::default());
    Ok(WeightEnumerator::from_counts(&counts, code.n(), code.k() as i64, EnumeratorKind::B))
}

/// Bytes the fast path allocates for a length-`n` code.
pub fn fast_path_bytes(n: usize) -> u64 {
    8u64 << n
}

/// In-place zeta transform over the subset lattice: `f[S] <- sum_{T subset S} f[T]`.
fn zeta_transform(f: &mut [u64]) {
    let len = f.len();
    let mut half = 1;
    while half < len {
        f.par_chunks_mut(2 * half).with_min_len(64.max(4096 / (2 * half))).for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(half);
            for (h, l) in hi.iter_mut().zip(lo.iter()) {
                *h = h.wrapping_add(*l);
            }
        });
        half *= 2;
    }
}

/// Inverse of [`zeta_transform`]. Intermediate values may be negative; all
/// arithmetic is modulo 2^64 and the final values are exact.
fn mobius_transform(f: &mut [u64]) {
    let len = f.len();
    let mut half = 1;
    while half < len {
        f.par_chunks_mut(2 * half).with_min_len(64.max(4096 / (2 * half))).for_each(|chunk| {
            let (lo, hi) = chunk.split_at_mut(half);
            for (h, l) in hi.iter_mut().zip(lo.iter()) {
                *h = h.wrapping_sub(*l);
            }
        });
        half *= 2;
    }
}

/// `A(z)` of the CSS code built from `c`, via the support lattice.
///
/// A CSS group element is a pair `(a|b)` of classical codewords with
/// symplectic support `supp(a) | supp(b)`. With `f` the support distribution,
/// the number of pairs with union exactly `S` is the Möbius inverse of the
/// squared zeta transform of `f`.
pub fn simple_wenum_css_fast(c: &ClassicalTernaryCode, mem_cap: u64) -> Result<WeightEnumerator> {
    if let Some((i, j)) = c.first_non_orthogonal_pair() {
        return Err(Error::NotSelfOrthogonal(i, j));
    }
    let n = c.n();
    if n > MAX_FAST_LENGTH {
        return Err(Error::ResourceLimit(format!("{}: fast path supports n <= {MAX_FAST_LENGTH}, got {n}", c.id)));
    }
    let bytes = fast_path_bytes(n);
    if bytes > mem_cap {
        return Err(Error::ResourceLimit(format!(
            "{}: fast path needs {bytes} bytes, cap is {mem_cap}",
            c.id
        )));
    }
    let dist = c.support_distribution()?;
    let mut f = vec![0u64; 1usize << n];
    for (&mask, &count) in &dist.counts {
        f[mask as usize] = count;
    }
    zeta_transform(&mut f);
    f.par_iter_mut().for_each(|x| *x = x.wrapping_mul(*x));
    mobius_transform(&mut f);

    let coeffs = f
        .par_chunks(1 << n.min(16))
        .enumerate()
        .map(|(block, chunk)| {
            let base = (block << n.min(16)) as u64;
            let mut acc = vec![0u128; n + 1];
            for (i, &g) in chunk.iter().enumerate() {
                acc[(base + i as u64).count_ones() as usize] += g as u128;
            }
            acc
        })
        .reduce(
            || vec![0u128; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let k = n as i64 - 2 * c.k() as i64;
    WeightEnumerator::new(coeffs.into_iter().map(BigInt::from).collect(), n, k, EnumeratorKind::A)
}

/// MacWilliams transform:
/// `B(z) = 3^-(n-k) sum_w a_w (1 - z)^w (1 + 8z)^(n-w)`.
///
/// Negative `k` is allowed, which makes the transform with `k -> -k` its own
/// inverse. Fails if any coefficient is not divisible by `3^(n-k)`.
pub fn macwilliams(a: &WeightEnumerator, n: usize, k: i64) -> Result<WeightEnumerator> {
    if a.n != n {
        return Err(Error::InvalidInput(format!("enumerator has n = {}, expected {n}", a.n)));
    }
    let one_minus = IntPoly::linear(1, -1);
    let one_plus = IntPoly::linear(1, 8);
    let plus_pows: Vec<IntPoly> = {
        let mut v = vec![IntPoly::constant(1)];
        for i in 0..n {
            let next = &v[i] * &one_plus;
            v.push(next);
        }
        v
    };
    let mut total = IntPoly::zero();
    let mut minus_pow = IntPoly::constant(1);
    for w in 0..=n {
        let c = &a.coeffs[w];
        if !c.is_zero() {
            total = &total + &(&minus_pow * &plus_pows[n - w]).scale(c);
        }
        minus_pow = &minus_pow * &one_minus;
    }
    let shift = n as i64 - k;
    let out = if shift >= 0 {
        let d = BigInt::from(3).pow(shift as u32);
        let mut coeffs = Vec::with_capacity(n + 1);
        for w in 0..=n {
            let (q, r) = num_integer::Integer::div_rem(&total.coeff(w), &d);
            if !r.is_zero() {
                return Err(Error::InexactDivision(w));
            }
            coeffs.push(q);
        }
        coeffs
    } else {
        let m = BigInt::from(3).pow((-shift) as u32);
        (0..=n).map(|w| total.coeff(w) * &m).collect()
    };
    let kind = match a.kind {
        EnumeratorKind::A => EnumeratorKind::B,
        EnumeratorKind::B => EnumeratorKind::A,
        other => other,
    };
    let out_k = if a.kind == EnumeratorKind::B { -k } else { k };
    WeightEnumerator::new(out, n, out_k, kind).map_err(|e| Error::InconsistentPair(e.to_string()))
}

/// Minimum distance: lowest degree with a nonzero coefficient in `B - A`.
/// `None` when `B = A` (stabilizer states).
pub fn distance_from_enums(a: &WeightEnumerator, b: &WeightEnumerator) -> Result<Option<usize>> {
    if a.n != b.n {
        return Err(Error::InconsistentPair(format!("lengths {} and {} differ", a.n, b.n)));
    }
    let mut first = None;
    for w in 0..=a.n {
        let d = &b.coeffs[w] - &a.coeffs[w];
        if d.is_negative() {
            return Err(Error::InconsistentPair(format!("B - A has negative coefficient at degree {w}")));
        }
        if first.is_none() && !d.is_zero() {
            first = Some(w);
        }
    }
    Ok(first)
}

/// Index of the symbol `y_{u,v}` in a complete enumerator exponent vector.
pub fn symbol_index(u: u8, v: u8) -> usize {
    3 * u as usize + v as usize
}

/// Complete weight enumerator: one monomial `prod_i y_{u_i, v_i}` per element.
/// Keys are exponent vectors indexed by [`symbol_index`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompleteEnumerator {
    pub n: usize,
    pub terms: BTreeMap<[u16; 9], BigUint>,
}

impl CompleteEnumerator {
    pub fn coefficient(&self, exponents: &[u16; 9]) -> BigUint {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.terms.values().sum()
    }

    /// `y_00 -> 1`, every other symbol `-> z`.
    pub fn specialize_simple(&self, k: i64, kind: EnumeratorKind) -> WeightEnumerator {
        let mut coeffs = vec![BigInt::zero(); self.n + 1];
        for (e, c) in &self.terms {
            coeffs[self.n - e[0] as usize] += BigInt::from(c.clone());
        }
        WeightEnumerator { coeffs, n: self.n, k, kind }
    }

    /// Evaluates with `y_{u,v} = values[u][v]`.
    pub fn eval_f64(&self, values: &[[f64; 3]; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mono: f64 = (0..9).map(|s| values[s / 3][s % 3].powi(e[s] as i32)).product();
                c.to_f64().unwrap_or(f64::INFINITY) * mono
            })
            .sum()
    }
}

fn symbol_counts(e: PackedSymplectic, full: u64) -> [u16; 9] {
    let planes = |p: crate::gf3::PackedTrits| [full & !(p.ones | p.twos), p.ones, p.twos];
    let us = planes(e.u);
    let vs = planes(e.v);
    let mut out = [0u16; 9];
    for a in 0..3 {
        for b in 0..3 {
            out[3 * a + b] = (us[a] & vs[b]).count_ones() as u16;
        }
    }
    out
}

fn complete_over(n: usize, gens: &[PackedSymplectic], offset: PackedSymplectic) -> CompleteEnumerator {
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut terms: BTreeMap<[u16; 9], u64> = BTreeMap::new();
    for_each_span_element(gens, offset, PackedSymplectic::add, |e| {
        *terms.entry(symbol_counts(e, full)).or_default() += 1
    });
    CompleteEnumerator { n, terms: terms.into_iter().map(|(k, v)| (k, BigUint::from(v))).collect() }
}

pub fn complete_wenum(code: &StabilizerCode) -> Result<CompleteEnumerator> {
    check_packable(code)?;
    if code.r() > MAX_COMPLETE_RANK {
        return Err(Error::ResourceLimit(format!(
            "{}: complete enumerator limited to r <= {MAX_COMPLETE_RANK}",
            code.id
        )));
    }
    Ok(complete_over(code.n(), &code.packed_generators(), PackedSymplectic::default()))
}

/// Complete enumerator of the coset `S + logical`.
pub fn complete_coset_wenum(code: &StabilizerCode, logical: &SymplecticVector) -> Result<CompleteEnumerator> {
    check_coset(code, logical)?;
    if code.r() > MAX_COMPLETE_RANK {
        return Err(Error::ResourceLimit(format!(
            "{}: complete enumerator limited to r <= {MAX_COMPLETE_RANK}",
            code.id
        )));
    }
    Ok(complete_over(code.n(), &code.packed_generators(), logical.pack()))
}

fn check_coset(code: &StabilizerCode, logical: &SymplecticVector) -> Result<()> {
    check_packable(code)?;
    if logical.n() != code.n() {
        return Err(Error::InvalidInput(format!(
            "logical acts on {} qutrits, code has {}",
            logical.n(),
            code.n()
        )));
    }
    if !code.commutes_with(logical) {
        return Err(Error::LogicalNotInDual);
    }
    Ok(())
}

/// Simple enumerator of the coset `S + logical`.
pub fn coset_wenum(code: &StabilizerCode, logical: &SymplecticVector) -> Result<WeightEnumerator> {
    check_coset(code, logical)?;
    if code.r() > MAX_NAIVE_RANK {
        return Err(Error::ResourceLimit(format!("{}: coset has 3^{} elements", code.id, code.r())));
    }
    let counts = weight_counts(code.n(), &code.packed_generators(), logical.pack());
    Ok(WeightEnumerator::from_counts(&counts, code.n(), code.k() as i64, EnumeratorKind::Coset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::gf3::{FFVector, Trit};
    use crate::stabilizer::css_from_classical;
    use crate::poly::rational;

    fn rep3() -> StabilizerCode {
        css_from_classical(&catalog::repetition3()).unwrap()
    }

    fn sv(u: &[u8], v: &[u8]) -> SymplecticVector {
        SymplecticVector::new(FFVector::from_u8s(u), FFVector::from_u8s(v)).unwrap()
    }

    #[test]
    fn naive_examples() {
        let trivial = StabilizerCode::new("triv", 1, crate::gf3::FFMatrix::empty(2)).unwrap();
        assert_eq!(simple_wenum_naive(&trivial).unwrap().coeffs_u64(), vec![1, 0]);
        assert_eq!(simple_wenum_naive(&rep3()).unwrap().coeffs_u64(), vec![1, 0, 0, 8]);
    }

    #[test]
    fn fast_matches_naive_on_rep3() {
        let fast = simple_wenum_css_fast(&catalog::repetition3(), DEFAULT_MEM_CAP).unwrap();
        assert_eq!(fast, simple_wenum_naive(&rep3()).unwrap());
    }

    #[test]
    fn fast_path_respects_memory_cap() {
        let err = simple_wenum_css_fast(&catalog::golay_dual(), 1024).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit(_)));
        let e1 = ClassicalTernaryCode::new("e1", &crate::gf3::FFMatrix::from_u8_rows(&[&[1, 0, 0]]));
        assert!(matches!(simple_wenum_css_fast(&e1, DEFAULT_MEM_CAP), Err(Error::NotSelfOrthogonal(..))));
    }

    #[test]
    fn zeta_and_mobius_are_inverse() {
        let orig: Vec<u64> = (0..256u64).map(|i| i * 7 % 13).collect();
        let mut f = orig.clone();
        zeta_transform(&mut f);
        // brute-force check of one entry
        let s = 0b1011_0110usize;
        let expected: u64 = (0..256).filter(|t| t & !s == 0).map(|t| orig[t]).sum();
        assert_eq!(f[s], expected);
        mobius_transform(&mut f);
        assert_eq!(f, orig);
    }

    #[test]
    fn macwilliams_examples() {
        let trivial = WeightEnumerator::from_terms(&[(0, 1)], 1, 1, EnumeratorKind::A).unwrap();
        assert_eq!(macwilliams(&trivial, 1, 1).unwrap().coeffs_u64(), vec![1, 8]);

        let a = WeightEnumerator::from_terms(&[(0, 1), (3, 8)], 3, 1, EnumeratorKind::A).unwrap();
        let b = macwilliams(&a, 3, 1).unwrap();
        assert_eq!(b.coeffs_u64(), vec![1, 0, 24, 56]);
        assert_eq!(b.kind, EnumeratorKind::B);
        assert_eq!(b.total(), BigInt::from(81));

        let back = macwilliams(&b, 3, -1).unwrap();
        assert_eq!(back.coeffs, a.coeffs);

        let bogus = WeightEnumerator::from_terms(&[(0, 1), (1, 1)], 3, 1, EnumeratorKind::A).unwrap();
        assert!(matches!(macwilliams(&bogus, 3, 1), Err(Error::InexactDivision(_))));
    }

    #[test]
    fn distance_examples() {
        let a = WeightEnumerator::from_terms(&[(0, 1), (3, 8)], 3, 1, EnumeratorKind::A).unwrap();
        let b = macwilliams(&a, 3, 1).unwrap();
        assert_eq!(distance_from_enums(&a, &b).unwrap(), Some(2));
        assert_eq!(distance_from_enums(&a, &a).unwrap(), None);
        assert!(matches!(distance_from_enums(&b, &a), Err(Error::InconsistentPair(_))));
    }

    #[test]
    fn complete_examples() {
        let z = StabilizerCode::from_generators("z", 1, &[sv(&[0], &[1])]).unwrap();
        let c = complete_wenum(&z).unwrap();
        assert_eq!(c.terms.len(), 3);
        for v in 0..3u8 {
            let mut e = [0u16; 9];
            e[symbol_index(0, v)] = 1;
            assert_eq!(c.coefficient(&e), BigUint::from(1u8));
        }

        let r = complete_wenum(&rep3()).unwrap();
        let mut xxx = [0u16; 9];
        xxx[symbol_index(1, 0)] = 3;
        assert_eq!(r.coefficient(&xxx), BigUint::from(1u8));
        assert_eq!(r.total(), BigUint::from(9u8));

        let golay = css_from_classical(&catalog::golay_dual()).unwrap();
        let cg = complete_wenum(&golay).unwrap();
        assert_eq!(cg.specialize_simple(1, EnumeratorKind::A), simple_wenum_naive(&golay).unwrap());
        assert!(cg.terms.keys().all(|e| e.iter().sum::<u16>() == 11));
    }

    #[test]
    fn coset_examples() {
        let code = rep3();
        let x = sv(&[1, 2, 0], &[0, 0, 0]);
        assert_eq!(coset_wenum(&code, &x).unwrap().coeffs_u64(), vec![0, 0, 3, 6]);
        let zero = SymplecticVector::zeros(3);
        assert_eq!(coset_wenum(&code, &zero).unwrap().coeffs, simple_wenum_naive(&code).unwrap().coeffs);
        assert!(matches!(coset_wenum(&code, &sv(&[1, 0, 0], &[0, 0, 0])), Err(Error::LogicalNotInDual)));

        let l = code.logical_operators().unwrap();
        let mut sum = vec![BigInt::zero(); 4];
        for a in 0..3 {
            for b in 0..3 {
                let e = coset_wenum(&code, &l.displacement(Trit::new(a), Trit::new(b))).unwrap();
                for (s, c) in sum.iter_mut().zip(&e.coeffs) {
                    *s += c;
                }
            }
        }
        assert_eq!(sum, vec![1, 0, 24, 56].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }

    #[test]
    fn dual_enumeration_matches_macwilliams() {
        for c in catalog::small_self_orthogonal_codes().into_iter().filter(|c| c.n() % 2 == 1 && c.n() <= 9) {
            let code = css_from_classical(&c).unwrap();
            let a = simple_wenum_naive(&code).unwrap();
            let b = macwilliams(&a, code.n(), code.k() as i64).unwrap();
            assert_eq!(b, dual_wenum_naive(&code).unwrap(), "{}", c.id);
        }
    }

    #[test]
    fn wenum_text_round_trip() {
        let a = WeightEnumerator::from_terms(&[(0, 1), (3, 8)], 3, 1, EnumeratorKind::A).unwrap();
        let text = a.to_text();
        assert_eq!(text, "WENUM v1\nn=3 k=1 kind=A\n0 1\n3 8\n");
        assert_eq!(WeightEnumerator::parse(&text).unwrap(), a);
        assert!(WeightEnumerator::parse("WENUM v1\nn=3 k=1 kind=A\n3 8\n0 1\n").is_err());
        assert!(WeightEnumerator::parse("WENUM v1\nn=3 k=1 kind=A\n0 1\n4 8\n").is_err());
        assert!(WeightEnumerator::parse("WENUM v1\nn=3 k=1 kind=Q\n0 1\n").is_err());
        assert!(WeightEnumerator::parse("WENUM v1\nn=3 k=1 kind=A\n0 2\n").is_err());
    }

    #[test]
    fn evaluation_helpers() {
        let a = WeightEnumerator::from_terms(&[(0, 1), (3, 8)], 3, 1, EnumeratorKind::A).unwrap();
        assert_eq!(a.eval(&rational(-1, 2)), BigRational::zero());
        assert_eq!(a.derivative_at(1, &rational(1, 1)), rational(24, 1));
        assert_eq!(a.eval_homogeneous(&rational(1, 1), &rational(-1, 2)), BigRational::zero());
        assert_eq!(a.eval_homogeneous(&rational(2, 1), &rational(1, 1)), rational(16, 1));
    }
}
