//! Dense-matrix cross-checks at small qudit counts.
//!
//! Operators are explicit `p^n x p^n` complex matrices. Every identity checked
//! here holds exactly in infinite precision; residuals only measure rounding.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog;
use crate::distill::{ratio_to_f64, strange_params, success_probability};
use crate::enumerators::{complete_coset_wenum, macwilliams, simple_wenum_naive};
use crate::error::{Error, Result};
use crate::gf3::{for_each_span_element, PackedSymplectic, SymplecticVector, Trit};
use crate::poly::rational;
use crate::stabilizer::StabilizerCode;

/// Largest Hilbert-space dimension the oracle builds.
pub const MAX_DIM: usize = 243;

/// Square complex matrix on `n` qudits of dimension `p`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    pub p: usize,
    pub n: usize,
    pub dim: usize,
    pub data: Vec<Complex64>,
}

fn check_prime(p: usize) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) || (3..p).step_by(2).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
        return Err(Error::InvalidInput(format!("p = {p} is not an odd prime")));
    }
    Ok(())
}

fn dimension(p: usize, n: usize) -> Result<usize> {
    let dim = p.checked_pow(n as u32).filter(|&d| d <= MAX_DIM);
    dim.ok_or_else(|| Error::ResourceLimit(format!("{p}^{n} exceeds the dense limit {MAX_DIM}")))
}

/// `omega^e` for `omega = exp(2 pi i / p)`, with `e` reduced first.
fn omega_pow(p: usize, e: i64) -> Complex64 {
    let r = e.rem_euclid(p as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * r / p as f64)
}

impl DenseOperator {
    pub fn zeros(p: usize, n: usize) -> Result<DenseOperator> {
        let dim = dimension(p, n)?;
        Ok(DenseOperator { p, n, dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] })
    }

    pub fn identity(p: usize, n: usize) -> Result<DenseOperator> {
        let mut m = DenseOperator::zeros(p, n)?;
        for i in 0..m.dim {
            m.data[i * m.dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn mul(&self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        DenseOperator { data: out, ..*self }
    }

    pub fn adjoint(&self) -> DenseOperator {
        let d = self.dim;
        let mut out = self.data.clone();
        for i in 0..d {
            for j in 0..d {
                out[j * d + i] = self.data[i * d + j].conj();
            }
        }
        DenseOperator { data: out, ..*self }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `tr(self * rhs)` without forming the product.
    pub fn trace_product(&self, rhs: &DenseOperator) -> Complex64 {
        let d = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for k in 0..d {
                acc += self.data[i * d + k] * rhs.data[k * d + i];
            }
        }
        acc
    }

    pub fn scale(&self, s: Complex64) -> DenseOperator {
        DenseOperator { data: self.data.iter().map(|x| x * s).collect(), ..*self }
    }

    pub fn add_assign(&mut self, rhs: &DenseOperator) {
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }

    pub fn kron(&self, rhs: &DenseOperator) -> Result<DenseOperator> {
        assert_eq!(self.p, rhs.p);
        let mut out = DenseOperator::zeros(self.p, self.n + rhs.n)?;
        let (da, db) = (self.dim, rhs.dim);
        for i in 0..da {
            for j in 0..da {
                let a = self.data[i * da + j];
                for k in 0..db {
                    for l in 0..db {
                        out.data[(i * db + k) * out.dim + j * db + l] = a * rhs.data[k * db + l];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise distance.
    pub fn max_diff(&self, rhs: &DenseOperator) -> f64 {
        self.data.iter().zip(&rhs.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.max_diff(&self.adjoint())
    }

    /// Tensor power `self^{(x) n}` of a single-qudit operator.
    pub fn tensor_power(&self, n: usize) -> Result<DenseOperator> {
        let mut out = DenseOperator::identity(self.p, 0)?;
        for _ in 0..n {
            out = out.kron(self)?;
        }
        Ok(out)
    }
}

/// Single-qudit `D(u,v) = omega^(-2^-1 uv) X^u Z^v` with `Z|j> = omega^j |j>`.
///
/// The shift is `X|j> = |j-1>`: with this direction the phase convention
/// obeys `D(a) D(b) = omega^(2^-1 [a,b]) D(a+b)`; the opposite shift would
/// need the phase `omega^(+2^-1 uv)` instead.
pub fn heisenberg_weyl(p: usize, u: usize, v: usize) -> Result<DenseOperator> {
    check_prime(p)?;
    if u >= p || v >= p {
        return Err(Error::InvalidInput(format!("({u}, {v}) outside Z_{p}")));
    }
    let half = p.div_ceil(2);
    let mut m = DenseOperator::zeros(p, 1)?;
    for j in 0..p {
        let e = -((half * u * v) as i64) + (v * j) as i64;
        m.data[((j + p - u) % p) * p + j] = omega_pow(p, e);
    }
    Ok(m)
}

/// `D(u, v)` on `n` qudits as the tensor product of single-site operators.
pub fn displacement(p: usize, u: &[usize], v: &[usize]) -> Result<DenseOperator> {
    if u.len() != v.len() {
        return Err(Error::InvalidInput("u and v lengths differ".into()));
    }
    let mut out = DenseOperator::identity(p, 0)?;
    for (&a, &b) in u.iter().zip(v) {
        out = out.kron(&heisenberg_weyl(p, a, b)?)?;
    }
    Ok(out)
}

fn trit_indices(v: &crate::gf3::FFVector) -> Vec<usize> {
    v.entries().iter().map(|t| t.value() as usize).collect()
}

pub fn displacement_of(chi: &SymplecticVector) -> Result<DenseOperator> {
    displacement(3, &trit_indices(&chi.u), &trit_indices(&chi.v))
}

/// `A(0,0) = p^-1 sum_{u,v} D(u,v)` and `A(u,v) = D(u,v) A(0,0) D(u,v)^dagger`.
pub fn phase_point(p: usize, u: usize, v: usize) -> Result<DenseOperator> {
    check_prime(p)?;
    let mut a00 = DenseOperator::zeros(p, 1)?;
    for a in 0..p {
        for b in 0..p {
            a00.add_assign(&heisenberg_weyl(p, a, b)?);
        }
    }
    let a00 = a00.scale(Complex64::new(1.0 / p as f64, 0.0));
    let d = heisenberg_weyl(p, u, v)?;
    Ok(d.mul(&a00).mul(&d.adjoint()))
}

/// Multi-qutrit phase point `A(u_1,v_1) (x) ... (x) A(u_n,v_n)`.
pub fn phase_point_of(chi: &SymplecticVector) -> Result<DenseOperator> {
    let mut out = DenseOperator::identity(3, 0)?;
    for i in 0..chi.n() {
        out = out.kron(&phase_point(3, chi.u.get(i).value() as usize, chi.v.get(i).value() as usize)?)?;
    }
    Ok(out)
}

/// Discrete Wigner function `W(rho; u, v) = tr(rho A(u,v)) / p` of a single qutrit.
pub fn wigner(rho: &DenseOperator) -> Result<[[f64; 3]; 3]> {
    if rho.dim != 3 {
        return Err(Error::InvalidInput("Wigner function needs a single-qutrit operator".into()));
    }
    let mut w = [[0.0; 3]; 3];
    for (u, row) in w.iter_mut().enumerate() {
        for (v, cell) in row.iter_mut().enumerate() {
            *cell = rho.trace_product(&phase_point(3, u, v)?).re / 3.0;
        }
    }
    Ok(w)
}

fn element_operators(gens: &[SymplecticVector], n: usize) -> Vec<SymplecticVector> {
    let packed: Vec<PackedSymplectic> = gens.iter().map(SymplecticVector::pack).collect();
    let mut out = Vec::new();
    for_each_span_element(&packed, PackedSymplectic::default(), PackedSymplectic::add, |e| out.push(e.unpack(n)));
    out
}

/// `|S|^-1 sum_{M in S} M`, the projector onto the trivial-syndrome space.
pub fn projector(code: &StabilizerCode) -> Result<DenseOperator> {
    if code.n() > 5 {
        return Err(Error::ResourceLimit(format!("dense projector needs n <= 5, got {}", code.n())));
    }
    let elems = element_operators(&code.generators(), code.n());
    let mut acc = DenseOperator::zeros(3, code.n())?;
    for e in &elems {
        acc.add_assign(&displacement_of(e)?);
    }
    Ok(acc.scale(Complex64::new(1.0 / elems.len() as f64, 0.0)))
}

/// Noisy strange state `(1 - eps)|S><S| + eps I/3`, `|S> = (|1> - |2>)/sqrt 2`.
pub fn strange_state(eps: f64) -> Result<DenseOperator> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::OutOfRange(format!("epsilon = {eps} is outside [0, 1]")));
    }
    let mut rho = DenseOperator::zeros(3, 1)?;
    let s = [0.0, 1.0 / 2f64.sqrt(), -1.0 / 2f64.sqrt()];
    for i in 0..3 {
        for j in 0..3 {
            let mixed = if i == j { eps / 3.0 } else { 0.0 };
            rho.data[i * 3 + j] = Complex64::new((1.0 - eps) * s[i] * s[j] + mixed, 0.0);
        }
    }
    Ok(rho)
}

/// Random unit-trace positive single-qutrit state.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> DenseOperator {
    let mut m = DenseOperator::zeros(3, 1).expect("3 <= MAX_DIM");
    for x in m.data.iter_mut() {
        *x = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    let rho = m.mul(&m.adjoint());
    let t = rho.trace();
    rho.scale(t.inv())
}

fn wigner_product(w: &[[f64; 3]; 3], chi: &SymplecticVector) -> f64 {
    (0..chi.n()).map(|i| w[chi.u.get(i).value() as usize][chi.v.get(i).value() as usize]).product()
}

/// `|tr(Pi rho^n) - sum_{chi in S^perp} prod_i W(rho; chi_i)|`.
pub fn verify_theorem1(code: &StabilizerCode, rho: &DenseOperator) -> Result<f64> {
    let pi = projector(code)?;
    let lhs = pi.trace_product(&rho.tensor_power(code.n())?);
    let w = wigner(rho)?;
    let rhs: f64 = element_operators(&code.dual_basis().vectors(), code.n()).iter().map(|c| wigner_product(&w, c)).sum();
    Ok((lhs - Complex64::new(rhs, 0.0)).norm())
}

/// Outcome of the exhaustive phase-point check.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AppendixReport {
    pub points: usize,
    pub in_dual: usize,
    pub max_error: f64,
}

/// For every `(u|v)`, checks `tr(Pi A(u,v))` is 1 on `S^perp` and 0 off it;
/// that `D^-1 Pi D` equals `Pi` exactly on `S^perp`; and that the displaced
/// projectors have trace 1 or 0 against `A(0,0)^{(x) n}`.
pub fn verify_appendix_a(code: &StabilizerCode) -> Result<AppendixReport> {
    let n = code.n();
    if n > 4 {
        return Err(Error::ResourceLimit(format!("exhaustive phase-point check needs n <= 4, got {n}")));
    }
    let pi = projector(code)?;
    let a00n = phase_point(3, 0, 0)?.tensor_power(n)?;
    let mut report = AppendixReport::default();
    let total = 9usize.pow(n as u32);
    for idx in 0..total {
        let mut digits = idx;
        let mut trits = Vec::with_capacity(2 * n);
        for _ in 0..2 * n {
            trits.push(Trit::new((digits % 3) as u8));
            digits /= 3;
        }
        let row = crate::gf3::FFVector::from_trits(trits);
        let chi = SymplecticVector::from_row(&row);
        let member = code.commutes_with(&chi);
        let expected = if member { 1.0 } else { 0.0 };
        let t = pi.trace_product(&phase_point_of(&chi)?);
        let d = displacement_of(&chi)?;
        let displaced = d.adjoint().mul(&pi).mul(&d);
        let t00 = displaced.trace_product(&a00n);
        let same = displaced.max_diff(&pi) < 1e-9;
        let mut err = (t - Complex64::new(expected, 0.0)).norm().max((t00 - Complex64::new(expected, 0.0)).norm());
        if same != member {
            err = err.max(1.0);
        }
        report.points += 1;
        report.in_dual += usize::from(member);
        report.max_error = report.max_error.max(err);
    }
    Ok(report)
}

/// Decoded output Wigner function two ways for a `k = 1` code: dense
/// `tr(A_bar(a,b) Pi rho^n) / (p nu)` against coset complete enumerators of
/// `S + D_bar(a,b)` evaluated at the input Wigner function. Returns the
/// largest discrepancy over the nine logical points.
pub fn verify_output_wigner(code: &StabilizerCode, rho: &DenseOperator) -> Result<f64> {
    let logical = code.logical_operators()?;
    let n = code.n();
    let pi = projector(code)?;
    let rho_n = rho.tensor_power(n)?;
    let pi_rho = pi.mul(&rho_n);
    let nu = pi_rho.trace().re;
    let w = wigner(rho)?;
    // Logical D_bar(a,b) = D(a X_bar + b Z_bar) since [X_bar, Z_bar] = 1.
    let mut a00 = DenseOperator::zeros(3, n)?;
    for a in 0..3 {
        for b in 0..3 {
            a00.add_assign(&displacement_of(&logical.displacement(Trit::new(a), Trit::new(b)))?);
        }
    }
    let a00 = a00.scale(Complex64::new(1.0 / 3.0, 0.0));
    let mut worst: f64 = 0.0;
    for a in 0..3u8 {
        for b in 0..3u8 {
            let shift = logical.displacement(Trit::new(a), Trit::new(b));
            let d = displacement_of(&shift)?;
            let abar = d.mul(&a00).mul(&d.adjoint());
            let dense = abar.trace_product(&pi_rho).re / (3.0 * nu);
            let coset = complete_coset_wenum(code, &shift)?;
            let enumerated = coset.eval_f64(&w) / nu;
            worst = worst.max((dense - enumerated).abs());
        }
    }
    Ok(worst)
}

/// Settings for the randomised suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleConfig {
    pub seed: u64,
    pub trials: usize,
    pub min_n: usize,
    pub max_n: usize,
    pub tol: f64,
}

impl Default for OracleConfig {
    fn default() -> OracleConfig {
        OracleConfig { seed: 0, trials: 50, min_n: 2, max_n: 3, tol: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleTrial {
    pub code_id: String,
    pub n: usize,
    pub k: usize,
    pub theorem1_residual: f64,
    pub success_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub config: OracleConfig,
    pub trials: Vec<OracleTrial>,
    pub max_residual: f64,
    pub failures: usize,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Random codes with random states. Each trial also compares the exact
/// success probability against the dense trace for a random strange-state
/// noise level.
pub fn run_suite(config: &OracleConfig) -> Result<OracleReport> {
    if config.min_n == 0 || config.min_n > config.max_n || config.max_n > 4 {
        return Err(Error::InvalidInput(format!(
            "qudit range {}..={} must lie within 1..=4",
            config.min_n, config.max_n
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut trials = Vec::with_capacity(config.trials);
    for _ in 0..config.trials {
        let n = rng.gen_range(config.min_n..=config.max_n);
        let k = rng.gen_range(0..=n.min(2)).min(n);
        let code = loop {
            let c = catalog::random_stabilizer_code(&mut rng, n, Some(k));
            if c.n() == n {
                break c;
            }
        };
        let rho = random_state(&mut rng);
        let theorem1_residual = verify_theorem1(&code, &rho)?;
        let eps_num = rng.gen_range(0..=8i64);
        let eps = rational(eps_num, 8);
        let a = simple_wenum_naive(&code)?;
        let b = macwilliams(&a, n, k as i64)?;
        let exact = ratio_to_f64(&success_probability(&b, n, k as i64, &eps)?);
        let dense = projector(&code)?.trace_product(&strange_state(eps_num as f64 / 8.0)?.tensor_power(n)?).re;
        let success_residual = (exact - dense).abs();
        trials.push(OracleTrial { code_id: code.id.clone(), n, k, theorem1_residual, success_residual });
    }
    let max_residual = trials.iter().map(|t| t.theorem1_residual.max(t.success_residual)).fold(0.0, f64::max);
    let failures = trials.iter().filter(|t| t.theorem1_residual.max(t.success_residual) >= config.tol).count();
    Ok(OracleReport { config: config.clone(), trials, max_residual, failures })
}

/// Wigner parameters `(x, y)` of the strange state as floats.
pub fn strange_wigner_params(eps_num: i64, eps_den: i64) -> Result<(f64, f64)> {
    let p = strange_params(&rational(eps_num, eps_den))?;
    Ok((ratio_to_f64(&p.x), ratio_to_f64(&p.y)))
}
