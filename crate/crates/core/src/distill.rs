//! Strange-state distillation analysis.
//!
//! Noisy strange states are parametrised by the depolarising weight `eps`.
//! Their Wigner function takes the value `x` at the origin and `y` elsewhere,
//! so every quantity of a code reduces to its simple enumerators evaluated
//! homogeneously at `(x, y)`, or at `z = y / x` after clearing denominators.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::enumerators::{macwilliams, WeightEnumerator};
use crate::error::{Error, Result};
use crate::poly::{rational, smallest_root_in, IntPoly};

/// Wigner parameters of the noisy strange state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrangeParams {
    pub epsilon: BigRational,
    /// Wigner value at the phase-space origin.
    pub x: BigRational,
    /// Wigner value at each of the other eight points.
    pub y: BigRational,
}

fn check_unit_interval(eps: &BigRational) -> Result<()> {
    if eps.is_negative() || *eps > BigRational::one() {
        return Err(Error::OutOfRange(format!("epsilon = {eps} is outside [0, 1]")));
    }
    Ok(())
}

/// `3x = -1 + 4 eps / 3` and `6y = 1 - eps / 3`.
pub fn strange_params(eps: &BigRational) -> Result<StrangeParams> {
    check_unit_interval(eps)?;
    let x = (rational(-1, 1) + eps * rational(4, 3)) / rational(3, 1);
    let y = (rational(1, 1) - eps / rational(3, 1)) / rational(6, 1);
    Ok(StrangeParams { epsilon: eps.clone(), x, y })
}

/// `z = y / x = (3 - eps) / (8 eps - 6)`.
pub fn z_of_eps(eps: &BigRational) -> Result<BigRational> {
    let den = eps * rational(8, 1) - rational(6, 1);
    if den.is_zero() {
        return Err(Error::Pole);
    }
    Ok((rational(3, 1) - eps) / den)
}

/// Ratio of integer polynomials in `eps`, kept in lowest terms with a
/// primitive combined content and positive leading denominator coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub numerator: IntPoly,
    pub denominator: IntPoly,
}

impl RationalFunction {
    pub fn new(numerator: IntPoly, denominator: IntPoly) -> Result<RationalFunction> {
        if denominator.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let g = numerator.gcd(&denominator);
        let (mut num, mut den) = if g.degree().unwrap_or(0) > 0 {
            (
                numerator.div_exact(&g).expect("gcd divides numerator"),
                denominator.div_exact(&g).expect("gcd divides denominator"),
            )
        } else {
            (numerator, denominator)
        };
        let mut c = num.content().gcd(&den.content());
        if den.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar_exact(&c).expect("content divides");
            den = den.div_scalar_exact(&c).expect("content divides");
        }
        Ok(RationalFunction { numerator: num, denominator: den })
    }

    /// Value at `eps`, or `None` at a pole.
    pub fn eval(&self, eps: &BigRational) -> Option<BigRational> {
        let d = self.denominator.eval(eps);
        if d.is_zero() {
            return None;
        }
        Some(self.numerator.eval(eps) / d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.numerator, self.denominator)
    }
}

/// `sum_w c_w (3 - eps)^w (8 eps - 6)^(n - w)`: the enumerator at `z(eps)`
/// times `(8 eps - 6)^n`.
fn cleared(e: &WeightEnumerator) -> IntPoly {
    let n = e.n;
    let a = IntPoly::linear(3, -1);
    let b = IntPoly::linear(-6, 8);
    let mut b_pows = vec![IntPoly::constant(1)];
    for i in 0..n {
        let next = &b_pows[i] * &b;
        b_pows.push(next);
    }
    let mut acc = IntPoly::zero();
    let mut a_pow = IntPoly::constant(1);
    for w in 0..=n {
        let c = &e.coeffs[w];
        if !c.is_zero() {
            acc = &acc + &(&a_pow * &b_pows[n - w]).scale(c);
        }
        a_pow = &a_pow * &a;
    }
    acc
}

fn check_pair(a: &WeightEnumerator, b: &WeightEnumerator, n: usize) -> Result<()> {
    if a.n != n || b.n != n {
        return Err(Error::InconsistentPair(format!("enumerators have n = {} and {}, expected {n}", a.n, b.n)));
    }
    Ok(())
}

/// `eps' = 3 (3A(z) + B(z)) / (4 B(z))` with `z = z(eps)`, as an exact
/// rational function of `eps`.
pub fn distillation_map(a: &WeightEnumerator, b: &WeightEnumerator, n: usize) -> Result<RationalFunction> {
    check_pair(a, b, n)?;
    let ah = cleared(a);
    let bh = cleared(b);
    let num = (&ah.scale(&BigInt::from(3)) + &bh).scale(&BigInt::from(3));
    let den = bh.scale(&BigInt::from(4));
    RationalFunction::new(num, den)
}

/// Exact values of both enumerators and their first two derivatives at
/// `z = -1/2`, and the distillation conditions built from them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conditions {
    pub a: [BigRational; 3],
    pub b: [BigRational; 3],
}

impl Conditions {
    /// `B(-1/2) != 0`: the trivial syndrome has nonzero probability at `eps = 0`.
    pub fn success_nonzero(&self) -> bool {
        !self.b[0].is_zero()
    }

    fn combo(&self, i: usize) -> BigRational {
        &self.a[i] * rational(3, 1) + &self.b[i]
    }

    /// `3A(-1/2) + B(-1/2) = 0`: the pure strange state is a fixed point.
    pub fn fixed_point(&self) -> bool {
        self.combo(0).is_zero()
    }

    /// `3A'(-1/2) + B'(-1/2) = 0`: the linear term of `eps'` vanishes.
    pub fn first_order(&self) -> bool {
        self.combo(1).is_zero()
    }

    /// `3A''(-1/2) + B''(-1/2) = 0`: the quadratic term vanishes.
    pub fn second_order(&self) -> bool {
        self.combo(2).is_zero()
    }

    pub fn b_at_minus_half(&self) -> &BigRational {
        &self.b[0]
    }
}

pub fn check_conditions(a: &WeightEnumerator, b: &WeightEnumerator, n: usize) -> Result<Conditions> {
    check_pair(a, b, n)?;
    let z = rational(-1, 2);
    let vals = |e: &WeightEnumerator| [0, 1, 2].map(|d| e.derivative_at(d, &z));
    Ok(Conditions { a: vals(a), b: vals(b) })
}

/// Checks the MacWilliams consequences at `z = -1/2` for a pair with `k`
/// encoded qutrits:
/// `B = 3^k (-1)^n A`,
/// `B' = 3^(k-1) (-1)^(n+1) (3A' + 8nA)`,
/// `B'' = 3^(k-2) (-1)^n (9A'' + 48(n-1)A' + 64(n^2-n)A)`.
pub fn derivative_identities_hold(c: &Conditions, n: usize, k: i64) -> bool {
    let three_pow = |e: i64| {
        let p = BigRational::from_integer(BigInt::from(3).pow(e.unsigned_abs() as u32));
        if e >= 0 {
            p
        } else {
            p.recip()
        }
    };
    let sign = |e: usize| if e.is_multiple_of(2) { rational(1, 1) } else { rational(-1, 1) };
    let nn = rational(n as i64, 1);
    let [a0, a1, a2] = &c.a;
    let [b0, b1, b2] = &c.b;
    let id0 = *b0 == three_pow(k) * sign(n) * a0;
    let id1 = *b1 == three_pow(k - 1) * sign(n + 1) * (a1 * rational(3, 1) + &nn * rational(8, 1) * a0);
    let id2 = *b2
        == three_pow(k - 2)
            * sign(n)
            * (a2 * rational(9, 1)
                + (&nn - rational(1, 1)) * rational(48, 1) * a1
                + (&nn * &nn - &nn) * rational(64, 1) * a0);
    id0 && id1 && id2
}

/// Order of vanishing of `eps'` at `eps = 0` and the coefficient of that power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoiseExponent {
    pub delta: usize,
    pub leading: BigRational,
}

/// Fails with [`Error::NotDistillable`] when the map has a pole at `eps = 0`.
pub fn noise_exponent(map: &RationalFunction) -> Result<NoiseExponent> {
    let d0 = map.denominator.coeff(0);
    if d0.is_zero() {
        return Err(Error::NotDistillable);
    }
    let Some(delta) = map.numerator.order_at_zero() else {
        return Ok(NoiseExponent { delta: 0, leading: BigRational::zero() });
    };
    Ok(NoiseExponent { delta, leading: BigRational::new(map.numerator.coeff(delta), d0) })
}

/// Smallest fixed point of the map in `(0, 3/4)` with its bracketing interval.
#[derive(Clone, Debug, PartialEq)]
pub struct Threshold {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Threshold {
    fn exact(v: BigRational) -> Threshold {
        Threshold { lo: v.clone(), hi: v }
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / rational(2, 1)
    }

    pub fn value(&self) -> f64 {
        ratio_to_f64(&self.midpoint())
    }

    /// Midpoint rounded to 9 fractional digits.
    pub fn decimal(&self) -> String {
        decimal_string(&self.midpoint(), 9)
    }
}

/// Bracket width used by [`threshold`]; well below the reported precision.
pub fn threshold_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1u64 << 40))
}

/// Smallest root of `eps'(eps) - eps` in `(0, 3/4)`; `0` if the map pushes
/// noise up just above `eps = 0`, `3/4` if it contracts on the whole range.
/// Poles of the map inside the range are not treated as crossings.
pub fn threshold(map: &RationalFunction) -> Threshold {
    let g = &map.numerator - &(&map.denominator * &IntPoly::linear(0, 1));
    let Some(m) = g.order_at_zero() else {
        return Threshold::exact(BigRational::zero());
    };
    let gt = g.shift_down(m);
    let d0 = map.denominator.coeff(0);
    // Sign of eps' - eps just above 0. A pole at 0 counts as growth.
    if d0.is_zero() || gt.coeff(0).sign() == d0.sign() {
        return Threshold::exact(BigRational::zero());
    }
    match smallest_root_in(&gt, &BigRational::zero(), &rational(3, 4), &threshold_tolerance()) {
        Some((lo, hi)) => Threshold { lo, hi },
        None => Threshold::exact(rational(3, 4)),
    }
}

/// Numerator of `eps' - eps`, whose sign matches the difference wherever the
/// denominator is positive.
pub fn fixed_point_polynomial(map: &RationalFunction) -> IntPoly {
    &map.numerator - &(&map.denominator * &IntPoly::linear(0, 1))
}

/// Probability of the trivial syndrome, `sum_w b_w x^(n-w) y^w`.
pub fn success_probability(b: &WeightEnumerator, n: usize, k: i64, eps: &BigRational) -> Result<BigRational> {
    if b.n != n {
        return Err(Error::InconsistentEnumerator(format!("enumerator has n = {}, expected {n}", b.n)));
    }
    let expected = BigInt::from(3).pow((n as i64 + k).max(0) as u32);
    if b.total() != expected {
        return Err(Error::InconsistentEnumerator(format!(
            "B(1) = {} but |S^perp| = 3^{}",
            b.total(),
            n as i64 + k
        )));
    }
    let p = strange_params(eps)?;
    let nu = b.eval_homogeneous(&p.x, &p.y);
    if nu.is_negative() || nu > BigRational::one() {
        return Err(Error::InconsistentEnumerator(format!("success probability {nu} is outside [0, 1]")));
    }
    Ok(nu)
}

/// Wigner parameters of the decoded output state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputState {
    pub x: BigRational,
    pub y: BigRational,
    pub epsilon: BigRational,
}

pub fn output_state(a: &WeightEnumerator, b: &WeightEnumerator, eps: &BigRational) -> Result<OutputState> {
    check_pair(a, b, a.n)?;
    let p = strange_params(eps)?;
    let av = a.eval_homogeneous(&p.x, &p.y);
    let bv = b.eval_homogeneous(&p.x, &p.y);
    if bv.is_zero() {
        return Err(Error::ZeroSuccessProbability);
    }
    let x = &av / &bv;
    let y = (&bv - &av) / (&bv * rational(8, 1));
    let epsilon = (&x + &y * rational(2, 1)) * rational(3, 1);
    Ok(OutputState { x, y, epsilon })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Classification {
    None,
    Linear,
    Order(usize),
}

impl Classification {
    pub fn label(&self) -> String {
        match self {
            Classification::None => "none".into(),
            Classification::Linear => "linear".into(),
            Classification::Order(d) => format!("order-{d}"),
        }
    }

    pub fn parse(s: &str) -> Option<Classification> {
        match s {
            "none" => Some(Classification::None),
            "linear" => Some(Classification::Linear),
            _ => s.strip_prefix("order-")?.parse().ok().map(Classification::Order),
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Everything the screen reports about one code.
#[derive(Clone, Debug, PartialEq)]
pub struct DistillationProfile {
    pub map: RationalFunction,
    pub conditions: Conditions,
    pub b_at_minus_half: BigRational,
    pub distills: bool,
    pub classification: Classification,
    /// `None` when the map has a pole at `eps = 0`.
    pub exponent: Option<NoiseExponent>,
    pub threshold: Threshold,
    pub success_at_zero: BigRational,
}

/// `B(-1/2) != 0` and either `delta >= 2`, or `delta = 1` with a leading
/// coefficient below 1.
pub fn classify(b_at_minus_half: &BigRational, exponent: Option<&NoiseExponent>) -> Classification {
    match exponent {
        Some(e) if !b_at_minus_half.is_zero() => match e.delta {
            0 => Classification::None,
            1 if e.leading < BigRational::one() => Classification::Linear,
            1 => Classification::None,
            d => Classification::Order(d),
        },
        _ => Classification::None,
    }
}

/// Runs the full analysis for a `k = 1` pair.
pub fn profile(a: &WeightEnumerator, b: &WeightEnumerator, n: usize, k: i64) -> Result<DistillationProfile> {
    let conditions = check_conditions(a, b, n)?;
    let map = distillation_map(a, b, n)?;
    let exponent = match noise_exponent(&map) {
        Ok(e) => Some(e),
        Err(Error::NotDistillable) => None,
        Err(e) => return Err(e),
    };
    let b_at_minus_half = conditions.b_at_minus_half().clone();
    let classification = classify(&b_at_minus_half, exponent.as_ref());
    let threshold = threshold(&map);
    let success_at_zero = success_probability(b, n, k, &BigRational::zero())?;
    Ok(DistillationProfile {
        distills: classification != Classification::None,
        map,
        conditions,
        b_at_minus_half,
        classification,
        exponent,
        threshold,
        success_at_zero,
    })
}

/// Profile from `A(z)` alone, deriving `B(z)` by MacWilliams.
pub fn profile_from_a(a: &WeightEnumerator) -> Result<DistillationProfile> {
    let b = macwilliams(a, a.n, a.k)?;
    profile(a, &b, a.n, a.k)
}

/// Rational serialised as decimal integer strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRecord {
    pub num: String,
    pub den: String,
}

impl RationalRecord {
    pub fn from_ratio(r: &BigRational) -> RationalRecord {
        RationalRecord { num: r.numer().to_string(), den: r.denom().to_string() }
    }

    pub fn to_ratio(&self) -> Result<BigRational> {
        let num: BigInt = self.num.parse().map_err(|_| Error::InvalidInput(format!("bad numerator {:?}", self.num)))?;
        let den: BigInt = self.den.parse().map_err(|_| Error::InvalidInput(format!("bad denominator {:?}", self.den)))?;
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(BigRational::new(num, den))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub map_numerator: Vec<String>,
    pub map_denominator: Vec<String>,
    pub b_at_minus_half: RationalRecord,
    pub distills: bool,
    pub classification: String,
    pub delta: Option<usize>,
    pub leading: Option<RationalRecord>,
    pub threshold: String,
    pub success_at_zero: RationalRecord,
}

impl DistillationProfile {
    pub fn record(&self) -> ProfileRecord {
        let strings = |p: &IntPoly| p.coeffs().iter().map(ToString::to_string).collect();
        ProfileRecord {
            map_numerator: strings(&self.map.numerator),
            map_denominator: strings(&self.map.denominator),
            b_at_minus_half: RationalRecord::from_ratio(&self.b_at_minus_half),
            distills: self.distills,
            classification: self.classification.label(),
            delta: self.exponent.as_ref().map(|e| e.delta),
            leading: self.exponent.as_ref().map(|e| RationalRecord::from_ratio(&e.leading)),
            threshold: self.threshold.decimal(),
            success_at_zero: RationalRecord::from_ratio(&self.success_at_zero),
        }
    }

    pub fn delta(&self) -> Option<usize> {
        self.exponent.as_ref().map(|e| e.delta)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.exponent.as_ref().map(|e| &e.leading)
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// `r` rounded half-up to `digits` fractional digits.
pub fn decimal_string(r: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    let scaled = r * BigRational::from_integer(scale.clone()) + rational(1, 2);
    let q = scaled.floor().to_integer();
    let neg = q.is_negative();
    let (int, frac) = q.abs().div_rem(&scale);
    let frac = format!("{:0>width$}", frac.to_string(), width = digits as usize);
    format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
}

/// Compares `eps'(eps)` against `eps` exactly.
pub fn compare_to_identity(map: &RationalFunction, eps: &BigRational) -> Option<Ordering> {
    map.eval(eps).map(|v| v.cmp(eps))
}
