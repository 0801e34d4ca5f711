//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! Everything the screening needs is exact: evaluation at rationals, formal
//! derivatives, content/primitive parts, GCDs via primitive pseudo-remainder
//! sequences, and Sturm-sequence root isolation with exact sign tests.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> IntPoly {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> IntPoly {
        IntPoly::new(vec![c.into()])
    }

    /// `a + b x`.
    pub fn linear(a: i64, b: i64) -> IntPoly {
        IntPoly::from_i64s(&[a, b])
    }

    pub fn monomial(c: impl Into<BigInt>, degree: usize) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c.into();
        IntPoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn pow(&self, e: usize) -> IntPoly {
        let mut acc = IntPoly::constant(1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Exact sign of `p(num/den)` for `den > 0`, via the homogenised sum
    /// `sum c_i num^i den^(d-i)`.
    pub fn sign_at(&self, num: &BigInt, den: &BigInt) -> Ordering {
        debug_assert!(den.is_positive());
        if self.is_zero() {
            return Ordering::Equal;
        }
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        // Horner in num with den powers accumulated from the top coefficient down.
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * num + c * &den_pow;
            if i > 0 {
                den_pow *= den;
            }
        }
        acc.sign_ordering()
    }

    pub fn sign_at_rational(&self, x: &BigRational) -> Ordering {
        self.sign_at(x.numer(), x.denom())
    }

    /// Index of the lowest nonzero coefficient (the multiplicity of the root at 0).
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Divides by `x^m`; the caller guarantees the low coefficients vanish.
    pub fn shift_down(&self, m: usize) -> IntPoly {
        debug_assert!(self.coeffs.iter().take(m).all(Zero::is_zero));
        IntPoly::new(self.coeffs.iter().skip(m).cloned().collect())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut g = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            g = -g;
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Exact division by `c`, or `None` if some coefficient is not divisible.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Option<IntPoly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(IntPoly::new(out))
    }

    /// Quotient in `Z[x]` when `divisor` divides `self` exactly, else `None`.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let sd = self.degree().unwrap();
        if sd < dd {
            return None;
        }
        let lc = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); sd - dd + 1];
        for i in (0..=sd - dd).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * c;
            }
            quot[i] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| IntPoly::new(quot))
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`, with the
    /// scale factor applied exactly that many times.
    pub fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree().expect("pseudo-remainder by zero polynomial");
        let Some(da) = self.degree() else {
            return IntPoly::zero();
        };
        if da < db {
            return self.clone();
        }
        let lc = b.leading().unwrap();
        let mut r = self.coeffs.clone();
        for i in (0..=da - db).rev() {
            let c = r[db + i].clone();
            for x in r.iter_mut() {
                *x *= lc;
            }
            if !c.is_zero() {
                for (j, bj) in b.coeffs.iter().enumerate() {
                    r[i + j] -= &c * bj;
                }
            }
        }
        IntPoly::new(r)
    }

    /// Primitive GCD with positive leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    /// `self / gcd(self, self')`: same distinct roots, all simple.
    pub fn squarefree(&self) -> IntPoly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        self.div_exact(&g).expect("gcd divides its argument").primitive()
    }

    /// Sturm chain `p, p', -rem(p, p'), ...`, each term rescaled by a positive
    /// factor so the sign pattern at any point is preserved.
    pub fn sturm_chain(&self) -> Vec<IntPoly> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let a = &chain[n - 2];
            let b = &chain[n - 1];
            if b.degree() == Some(0) {
                break;
            }
            let r = a.pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            // pseudo_rem scales a by lc(b)^m with m = deg a - deg b + 1; when
            // lc(b) < 0 and m is odd that flips the sign, which we undo here.
            let m = a.degree().unwrap() - b.degree().unwrap() + 1;
            let flip = b.leading().unwrap().is_negative() && m % 2 == 1;
            let g = r.content();
            let mut next = IntPoly::new(r.coeffs.iter().map(|c| c / &g).collect());
            if !flip {
                next = -next;
            }
            chain.push(next);
        }
        chain
    }
}

/// Sign variations of a Sturm chain at `x`.
fn sign_variations(chain: &[IntPoly], x: &BigRational) -> usize {
    let signs: Vec<Ordering> = chain
        .iter()
        .map(|p| p.sign_at_rational(x))
        .filter(|s| *s != Ordering::Equal)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of the chain's head in the half-open interval `(lo, hi]`.
pub fn count_roots(chain: &[IntPoly], lo: &BigRational, hi: &BigRational) -> usize {
    sign_variations(chain, lo).saturating_sub(sign_variations(chain, hi))
}

/// Smallest root of `p` in the open interval `(lo, hi)`, bracketed to width
/// below `tol`. Returns the bracketing interval `(a, b)` with the root in `(a, b]`.
pub fn smallest_root_in(p: &IntPoly, lo: &BigRational, hi: &BigRational, tol: &BigRational) -> Option<(BigRational, BigRational)> {
    let sf = p.squarefree();
    let chain = sf.sturm_chain();
    // Exclude a root exactly at hi.
    let open_hi_roots = count_roots(&chain, lo, hi) - usize::from(sf.sign_at_rational(hi) == Ordering::Equal);
    if open_hi_roots == 0 {
        return None;
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let (mut a, mut b) = (lo.clone(), hi.clone());
    // Narrow with Sturm counts until exactly one root remains in (a, b].
    loop {
        if count_roots(&chain, &a, &b) == 1 {
            break;
        }
        let mid = (&a + &b) / &two;
        if count_roots(&chain, &a, &mid) >= 1 {
            b = mid;
        } else {
            a = mid;
        }
        if &b - &a < *tol {
            return Some((a, b));
        }
    }
    // Single simple root in (a, b]: plain exact-sign bisection.
    if sf.sign_at_rational(&b) == Ordering::Equal {
        let lo_edge = &b - tol;
        return Some((if lo_edge > a { lo_edge } else { a }, b));
    }
    let sb = sf.sign_at_rational(&b);
    while &b - &a >= *tol {
        let mid = (&a + &b) / &two;
        let sm = sf.sign_at_rational(&mid);
        if sm == Ordering::Equal {
            return Some((&mid - tol / &two, mid));
        }
        if sm == sb {
            b = mid;
        } else {
            a = mid;
        }
    }
    Some((a, b))
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for BigInt {
    fn sign_ordering(&self) -> Ordering {
        self.cmp(&BigInt::zero())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a}*x")?,
                _ => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
