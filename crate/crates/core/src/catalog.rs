//! Built-in codes and enumerators used by tests, fixtures and the CLI.

use rand::Rng;

use crate::classical::ClassicalTernaryCode;
use crate::enumerators::{EnumeratorKind, WeightEnumerator};
use crate::gf3::{ff_kernel, FFMatrix, FFVector, SymplecticVector, Trit};
use crate::stabilizer::StabilizerCode;

fn code_from_strings(id: &str, rows: &[&str]) -> ClassicalTernaryCode {
    let rows: Vec<FFVector> = rows.iter().map(|r| FFVector::parse_digits(r).expect("digit row")).collect();
    let m = FFMatrix::from_rows(rows).expect("rows of equal length");
    let k = m.n_rows();
    ClassicalTernaryCode::with_dimension(id, &m, k).expect("independent rows")
}

/// The `[3,1]` repetition code.
pub fn repetition3() -> ClassicalTernaryCode {
    code_from_strings("rep3", &["111"])
}

/// The `[4,2,3]` tetracode.
pub fn tetracode() -> ClassicalTernaryCode {
    code_from_strings("tetracode", &["1110", "0121"])
}

/// Remainder of `a` modulo the monic polynomial `m`; ascending coefficients.
fn poly_rem_gf3(a: &[Trit], m: &[Trit]) -> Vec<Trit> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = r[shift + i] - lead * c;
        }
        r.pop();
    }
    r
}

/// Generator polynomial of the ternary `[11,6,5]` quadratic-residue code:
/// the first monic degree-5 divisor of `x^11 - 1` in lexicographic order of
/// its lower coefficients.
pub fn golay_generator_polynomial() -> Vec<Trit> {
    let mut x11 = vec![Trit::ZERO; 12];
    x11[0] = Trit::TWO;
    x11[11] = Trit::ONE;
    for idx in 0..243u32 {
        let mut g: Vec<Trit> = (0..5).map(|i| Trit::new((idx / 3u32.pow(i) % 3) as u8)).collect();
        if g[0].is_zero() {
            continue;
        }
        g.push(Trit::ONE);
        if poly_rem_gf3(&x11, &g).iter().all(|t| t.is_zero()) {
            return g;
        }
    }
    unreachable!("x^11 - 1 has a degree-5 factor over GF(3)")
}

/// The ternary `[11,6,5]` Golay code, generated by cyclic shifts of its
/// generator polynomial.
pub fn golay11() -> ClassicalTernaryCode {
    let g = golay_generator_polynomial();
    let rows = (0..6)
        .map(|s| {
            let mut v = FFVector::zeros(11);
            for (i, &c) in g.iter().enumerate() {
                v.set(s + i, c);
            }
            v
        })
        .collect();
    let m = FFMatrix::new(rows, 11).expect("11 columns");
    ClassicalTernaryCode::with_dimension("golay-11-6", &m, 6).expect("shifts are independent")
}

/// The `[11,5,6]` dual of the ternary Golay code. It is self-orthogonal and
/// its CSS code is the `[[11,1,5]]` Golay code.
pub fn golay_dual() -> ClassicalTernaryCode {
    let dual = ff_kernel(golay11().generator());
    ClassicalTernaryCode::with_dimension("golay-dual", &dual, 5).expect("dual has dimension 5")
}

/// Extended `[12,6,6]` Golay code: the `[11,6]` code with a parity
/// coordinate chosen so that the result is self-dual.
pub fn golay12() -> ClassicalTernaryCode {
    let g = golay11();
    for s in [Trit::ONE, Trit::TWO] {
        let rows = g
            .generator()
            .rows()
            .iter()
            .map(|r| {
                let parity = r.entries().iter().fold(Trit::ZERO, |a, &b| a + b) * s;
                r.concat(&FFVector::from_trits(vec![parity]))
            })
            .collect();
        let c = ClassicalTernaryCode::new("golay-12-6", &FFMatrix::new(rows, 12).expect("12 columns"));
        if c.is_self_orthogonal() {
            return c;
        }
    }
    unreachable!("one parity sign makes the extended code self-dual")
}

/// The `[[12,0,6]]` stabilizer state whose X and Z blocks are both the
/// self-dual extended Golay code.
pub fn golay_state12() -> StabilizerCode {
    let c = golay12();
    let zero = FFVector::zeros(12);
    let rows = c
        .generator()
        .rows()
        .iter()
        .map(|g| g.concat(&zero))
        .chain(c.generator().rows().iter().map(|g| zero.concat(g)))
        .collect();
    StabilizerCode::new("golay-state-12", 12, FFMatrix::new(rows, 24).expect("24 columns"))
        .expect("self-dual code gives a stabilizer state")
}

/// Self-orthogonal `[23,11]` code whose CSS code has the best threshold found
/// among 23-qutrit CSS codes.
pub fn code23() -> ClassicalTernaryCode {
    code_from_strings(
        "code23",
        &[
            "10000000000122002020000",
            "01000000000221121212201",
            "00100000000100001100220",
            "00010000000100001201010",
            "00001000000000200102220",
            "00000100000220021020000",
            "00000010000100201002020",
            "00000001000100101000110",
            "00000000100000200101101",
            "00000000010002120212201",
            "00000000001122112212201",
        ],
    )
}

/// Self-orthogonal `[13,6]` code whose CSS code is a `[[13,1,4]]` code.
pub fn m13() -> ClassicalTernaryCode {
    code_from_strings(
        "m13",
        &["1000000020200", "0100000221120", "0010001201022", "0001001020122", "0000100022111", "0000012120110"],
    )
}

/// `A(z)` of a 29-qutrit code with linear noise suppression. Only the
/// enumerator is known, not a generator matrix.
pub fn enumerator29() -> WeightEnumerator {
    WeightEnumerator::from_terms(
        &[
            (0, 1),
            (6, 40),
            (9, 4280),
            (10, 96),
            (11, 2832),
            (12, 196584),
            (13, 198768),
            (14, 1773408),
            (15, 15542368),
            (16, 91797024),
            (17, 565547232),
            (18, 3037545272),
            (19, 13979050848),
            (20, 55970778960),
            (21, 192507694176),
            (22, 559711606992),
            (23, 1361197350960),
            (24, 2723501140720),
            (25, 4358977591776),
            (26, 5363568387600),
            (27, 4767481212256),
            (28, 2724627154368),
            (29, 751557878400),
        ],
        29,
        1,
        EnumeratorKind::A,
    )
    .expect("valid enumerator")
}

fn pad(c: &ClassicalTernaryCode, extra: usize, id: &str) -> ClassicalTernaryCode {
    let rows = c.generator().rows().iter().map(|r| r.concat(&FFVector::zeros(extra))).collect();
    ClassicalTernaryCode::new(id, &FFMatrix::new(rows, c.n() + extra).expect("padded rows"))
}

fn direct_sum(parts: &[ClassicalTernaryCode], id: &str) -> ClassicalTernaryCode {
    let n: usize = parts.iter().map(ClassicalTernaryCode::n).sum();
    let mut rows = Vec::new();
    let mut offset = 0;
    for p in parts {
        for r in p.generator().rows() {
            rows.push(FFVector::zeros(offset).concat(r).concat(&FFVector::zeros(n - offset - p.n())));
        }
        offset += p.n();
    }
    ClassicalTernaryCode::new(id, &FFMatrix::new(rows, n).expect("direct sum rows"))
}

/// Self-orthogonal classical codes of odd length at most 11 with a range of
/// dimensions, used to cross-check the enumerator paths.
pub fn small_self_orthogonal_codes() -> Vec<ClassicalTernaryCode> {
    let rep = repetition3();
    let tetra = tetracode();
    let gd = golay_dual();
    let golay_sub = ClassicalTernaryCode::new(
        "golay-dual-sub3",
        &FFMatrix::new(gd.generator().rows()[..3].to_vec(), 11).expect("11 columns"),
    );
    vec![
        rep.clone(),
        code_from_strings("w3-5", &["10110"]),
        pad(&tetra, 1, "tetra-5"),
        code_from_strings("w6-7", &["1111110"]),
        direct_sum(&[rep.clone(), rep.clone(), ClassicalTernaryCode::new("z1", &FFMatrix::empty(1))], "rep3x2-7"),
        direct_sum(&[tetra.clone(), rep.clone()], "tetra-rep3-7"),
        code_from_strings("w9-9", &["111111111"]),
        direct_sum(&[rep.clone(), rep.clone(), rep.clone()], "rep3x3-9"),
        pad(&direct_sum(&[tetra.clone(), tetra.clone()], "tt"), 1, "tetra2-9"),
        code_from_strings("w6-11", &["11111100000"]),
        direct_sum(&[tetra.clone(), tetra.clone(), rep.clone()], "tetra2-rep3-11"),
        golay_sub,
        gd,
    ]
}

/// Random vector in the span of `basis`.
fn random_combination<R: Rng + ?Sized>(rng: &mut R, basis: &FFMatrix) -> FFVector {
    let coeffs = FFVector::from_trits((0..basis.n_rows()).map(|_| Trit::new(rng.gen_range(0..3))).collect());
    basis.combine(&coeffs)
}

/// Random valid stabilizer code. The length is drawn from `1..=max_n`; the
/// number of encoded qutrits is `k` if given, otherwise uniform in `0..n`.
pub fn random_stabilizer_code<R: Rng + ?Sized>(rng: &mut R, max_n: usize, k: Option<usize>) -> StabilizerCode {
    let n = rng.gen_range(1..=max_n.max(1));
    let k = k.unwrap_or_else(|| rng.gen_range(0..n)).min(n);
    let r = n - k;
    let mut gens: Vec<SymplecticVector> = Vec::with_capacity(r);
    let mut span = FFMatrix::empty(2 * n);
    while gens.len() < r {
        let constraints = FFMatrix::new(
            gens.iter().map(|g| g.v.scale(Trit::TWO).concat(&g.u)).collect(),
            2 * n,
        )
        .expect("2n columns");
        let complement = ff_kernel(&constraints);
        let cand = random_combination(rng, &complement);
        if cand.is_zero() || span.spans(&cand) {
            continue;
        }
        span.push_row(cand.clone()).expect("2n columns");
        gens.push(SymplecticVector::from_row(&cand));
    }
    StabilizerCode::from_generators(format!("random-{n}-{k}"), n, &gens).expect("commuting independent generators")
}

/// Random self-orthogonal classical code of length `n` and dimension `k`,
/// or `None` if `2k > n` makes that impossible.
pub fn random_self_orthogonal_code<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Option<ClassicalTernaryCode> {
    if 2 * k > n {
        return None;
    }
    'restart: loop {
        let mut rows = FFMatrix::empty(n);
        while rows.n_rows() < k {
            let complement = ff_kernel(&rows);
            let mut found = false;
            for _ in 0..200 {
                let cand = random_combination(rng, &complement);
                if !cand.is_zero() && cand.dot(&cand).is_zero() && !rows.spans(&cand) {
                    rows.push_row(cand).expect("n columns");
                    found = true;
                    break;
                }
            }
            if !found {
                continue 'restart;
            }
        }
        return Some(ClassicalTernaryCode::new(format!("random-so-{n}-{k}"), &rows));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::css_from_classical;
    use rand::SeedableRng;

    #[test]
    fn golay_family() {
        let g = golay11();
        assert_eq!((g.n(), g.k()), (11, 6));
        assert_eq!(g.weight_enumerator().unwrap().coeffs_u64(), vec![1, 0, 0, 0, 0, 132, 132, 0, 330, 110, 0, 24]);
        let d = golay_dual();
        assert!(d.is_self_orthogonal());
        assert_eq!(d.weight_enumerator().unwrap().coeffs_u64(), vec![1, 0, 0, 0, 0, 0, 132, 0, 0, 110, 0, 0]);
        let e = golay12();
        assert_eq!((e.n(), e.k()), (12, 6));
        assert!(e.is_self_orthogonal());
        let w = e.weight_enumerator().unwrap().coeffs_u64();
        assert_eq!(w[..6], [1, 0, 0, 0, 0, 0]);
        assert_eq!(golay_state12().k(), 0);
    }

    #[test]
    fn fixture_codes_are_self_orthogonal() {
        for c in small_self_orthogonal_codes() {
            assert!(c.is_self_orthogonal(), "{}", c.id);
            assert_eq!(c.n() % 2, 1, "{}", c.id);
            assert!(c.n() <= 11);
        }
        assert!(small_self_orthogonal_codes().len() >= 10);
        assert_eq!((code23().n(), code23().k()), (23, 11));
        assert_eq!((m13().n(), m13().k()), (13, 6));
        assert_eq!(enumerator29().total(), num_bigint::BigInt::from(3u8).pow(28));
    }

    #[test]
    fn random_generators_are_valid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let c = random_stabilizer_code(&mut rng, 5, None);
            c.validate().unwrap();
            let c = random_self_orthogonal_code(&mut rng, 7, 2).unwrap();
            assert!(c.is_self_orthogonal());
            assert_eq!(c.k(), 2);
            css_from_classical(&c).unwrap();
        }
        assert!(random_self_orthogonal_code(&mut rng, 5, 3).is_none());
    }
}
