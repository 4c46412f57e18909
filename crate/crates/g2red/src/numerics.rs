//! Root finding and exact real-root counting.
//!
//! Complex roots are found by Aberth-Ehrlich simultaneous iteration with
//! deterministic seeding, then polished by Newton steps in double-double
//! arithmetic so downstream invariants stay accurate even for clustered
//! roots. Real-root counts are exact Sturm sequences over big integers.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dd::{self, CDd, Dd};
use crate::forms::{BinaryForm, Int, Rat};
use crate::{Error, Result};

/// Complex roots of a squarefree form, with conjugate pairing.
#[derive(Clone, Debug)]
pub struct RootSet {
    /// All finite roots of `f(x, 1)`, sorted by (re, im).
    pub roots: Vec<Complex64>,
    /// Indices of the real roots within `roots`.
    pub real_indices: Vec<usize>,
    /// Index pairs (upper, lower half-plane) of conjugate roots.
    pub pair_indices: Vec<(usize, usize)>,
    /// Max of |f(root, 1)| relative to the coefficient scale at the root.
    pub residual_bound: f64,
    /// Multiplicity of the root at infinity (always 0 here; forms with a
    /// vanishing leading coefficient are rejected).
    pub infinity_multiplicity: usize,
}

impl RootSet {
    /// Real roots as f64 values.
    pub fn reals(&self) -> Vec<f64> {
        self.real_indices.iter().map(|&i| self.roots[i].re).collect()
    }

    /// One representative per conjugate pair, in the upper half-plane.
    pub fn pairs(&self) -> Vec<Complex64> {
        self.pair_indices.iter().map(|&(i, _)| self.roots[i]).collect()
    }
}

/// Signature (r, s): real-root count and conjugate-pair count, r + 2s = n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub r: usize,
    pub s: usize,
}

const PAIRING_TOL: f64 = 1e-9;
const ABERTH_SWEEP_CAP: usize = 1000;

/// All complex roots of `f(x, 1)` with residuals polished below `tol`
/// (relative). Requires a squarefree form with nonzero leading coefficient.
pub fn complex_roots(f: &BinaryForm, tol: f64) -> Result<RootSet> {
    if f.lead().is_zero() {
        return Err(Error::RootAtInfinity);
    }
    if f.degree() >= 2 && f.discriminant()?.is_zero() {
        return Err(Error::NonSquarefree);
    }
    let n = f.degree();
    // normalize by the largest |coefficient| so f64 conversion is safe
    let max_c = f
        .coeffs()
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap();
    let scaled: Vec<Rat> = f.coeffs().iter().map(|c| c / &max_c).collect();
    let cf: Vec<f64> = scaled.iter().map(|c| c.to_f64().unwrap()).collect();
    let cdd: Vec<Dd> = scaled.iter().map(Dd::from_rat).collect();

    let mut zs = initial_guesses(&cf, n);
    aberth_sweeps(&cf, &mut zs, tol)?;
    for zk in zs.iter_mut() {
        *zk = polish_dd(&cdd, *zk);
    }
    zs.sort_by(|p, q| {
        p.re.partial_cmp(&q.re)
            .unwrap()
            .then(p.im.partial_cmp(&q.im).unwrap())
    });

    // classify reals and conjugate pairs
    let mut real_indices = Vec::new();
    let mut pair_indices = Vec::new();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] {
            continue;
        }
        let zi = zs[i];
        if zi.im.abs() <= PAIRING_TOL * zi.norm().max(1.0) {
            zs[i] = Complex64::new(zi.re, 0.0);
            real_indices.push(i);
            used[i] = true;
            continue;
        }
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, zj) in zs.iter().enumerate() {
            if j == i || used[j] {
                continue;
            }
            let d = (zj - zi.conj()).norm();
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        if best == usize::MAX || best_d > PAIRING_TOL * zi.norm().max(1.0) * 10.0 {
            return Err(Error::Anomaly(format!(
                "unpaired complex root {zi} (nearest conjugate distance {best_d:.3e})"
            )));
        }
        // symmetrize the pair exactly
        let w = (zs[i] + zs[best].conj()) / 2.0;
        let (up, down) = if w.im > 0.0 { (i, best) } else { (best, i) };
        zs[up] = Complex64::new(w.re, w.im.abs());
        zs[down] = zs[up].conj();
        used[i] = true;
        used[best] = true;
        pair_indices.push((up, down));
    }

    let mut residual: f64 = 0.0;
    for zk in &zs {
        let v = dd::horner(&cdd, CDd::from_c64(*zk)).norm_f64();
        let scale: f64 = cf
            .iter()
            .enumerate()
            .map(|(i, c)| c.abs() * zk.norm().max(1.0).powi(i as i32))
            .sum();
        residual = residual.max(v / scale.max(f64::MIN_POSITIVE));
    }
    if residual > tol.max(1e-13) {
        return Err(Error::NonConvergence(format!(
            "root residual {residual:.3e} above tolerance"
        )));
    }

    Ok(RootSet {
        roots: zs,
        real_indices,
        pair_indices,
        residual_bound: residual,
        infinity_multiplicity: 0,
    })
}

fn initial_guesses(cf: &[f64], n: usize) -> Vec<Complex64> {
    // Fujiwara bound on root magnitudes
    let an = cf[n].abs();
    let mut radius: f64 = 0.0;
    for k in 1..=n {
        let t = (cf[n - k].abs() / an).powf(1.0 / k as f64);
        radius = radius.max(2.0 * t);
    }
    if radius == 0.0 {
        radius = 1.0;
    }
    let offset = 0.3966; // fixed phase so seeds never align with the real axis
    (0..n)
        .map(|j| {
            let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64 + offset;
            radius * 0.9 * Complex64::new(th.cos(), th.sin())
        })
        .collect()
}

fn aberth_sweeps(cf: &[f64], zs: &mut [Complex64], tol: f64) -> Result<()> {
    let n = zs.len();
    let deriv: Vec<f64> = (1..cf.len()).map(|i| cf[i] * i as f64).collect();
    for _ in 0..ABERTH_SWEEP_CAP {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let zk = zs[k];
            let fv = horner_c(cf, zk);
            let dv = horner_c(&deriv, zk);
            let newton = if dv.norm() > 0.0 { fv / dv } else { fv };
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in zs.iter().enumerate() {
                if j != k {
                    s += 1.0 / (zk - zj);
                }
            }
            let denom = 1.0 - newton * s;
            let corr = if denom.norm() > 1e-300 { newton / denom } else { newton };
            zs[k] = zk - corr;
            worst = worst.max(corr.norm() / zs[k].norm().max(1.0));
        }
        if worst <= tol.max(1e-15) {
            return Ok(());
        }
    }
    // Let the double-double polish decide; residuals are re-checked after.
    Ok(())
}

fn horner_c(cf: &[f64], z: Complex64) -> Complex64 {
    let mut v = Complex64::new(0.0, 0.0);
    for c in cf.iter().rev() {
        v = v * z + c;
    }
    v
}

fn polish_dd(cdd: &[Dd], z0: Complex64) -> Complex64 {
    let deriv: Vec<Dd> = (1..cdd.len())
        .map(|i| cdd[i].mul(Dd::from_f64(i as f64)))
        .collect();
    let mut z = CDd::from_c64(z0);
    for _ in 0..8 {
        let fv = dd::horner(cdd, z);
        let dv = dd::horner(&deriv, z);
        if dv.norm_f64() == 0.0 {
            break;
        }
        let step = fv.div(dv);
        z = z.sub(step);
        if step.norm_f64() <= 1e-30 * z.norm_f64().max(1.0) {
            break;
        }
    }
    z.to_c64()
}

/// Interval for exact real-root counting.
#[derive(Clone, Debug)]
pub enum Interval {
    /// The whole real line.
    All,
    /// Half-open interval (a, b].
    HalfOpen(Rat, Rat),
}

/// Exact count of real roots of a squarefree integer polynomial on the
/// interval: the whole line, or (a, b].
pub fn sturm_real_count(p: &[Int], interval: &Interval) -> usize {
    let chain = sturm_chain(p);
    match interval {
        Interval::All => {
            let lo = sign_changes_at_minus_inf(&chain);
            let hi = sign_changes_at_plus_inf(&chain);
            lo - hi
        }
        Interval::HalfOpen(a, b) => {
            let va = sign_changes_at(&chain, a);
            let vb = sign_changes_at(&chain, b);
            va - vb
        }
    }
}

fn primitive_int(p: &[Int]) -> Vec<Int> {
    let mut g = Int::zero();
    for c in p {
        g = g.gcd(c);
    }
    if g.is_zero() || g.is_one() {
        return p.to_vec();
    }
    p.iter().map(|c| c / &g).collect()
}

fn trim(mut p: Vec<Int>) -> Vec<Int> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

/// Sturm chain with primitive-part normalization at every step; the sign
/// pattern is preserved by multiplying only by positive constants.
fn sturm_chain(p: &[Int]) -> Vec<Vec<Int>> {
    let p0 = trim(primitive_int(p));
    let p1: Vec<Int> = (1..p0.len()).map(|i| &p0[i] * Int::from(i as i64)).collect();
    let mut chain = vec![p0, trim(primitive_int(&p1))];
    loop {
        let f = &chain[chain.len() - 2];
        let g = &chain[chain.len() - 1];
        if g.len() <= 1 && g[0].is_zero() {
            chain.pop();
            break;
        }
        let r = neg_rem_positive_scaled(f, g);
        if r.iter().all(|c| c.is_zero()) {
            break;
        }
        chain.push(trim(primitive_int(&r)));
        if chain.last().unwrap().len() == 1 {
            break;
        }
    }
    chain
}

/// `-rem(c^2k * f, g)` for a positive power of the leading coefficient of g,
/// primitive-normalized by the caller.
fn neg_rem_positive_scaled(f: &[Int], g: &[Int]) -> Vec<Int> {
    let dg = g.len() - 1;
    let lg = g.last().unwrap().clone();
    let mut r: Vec<Int> = f.to_vec();
    let mut steps = 0usize;
    while r.len() > dg && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let lr = r.last().unwrap().clone();
        // r <- lg * r - lr * x^(dr-dg) * g
        let mut nr = vec![Int::zero(); dr];
        for (i, c) in r.iter().enumerate().take(dr) {
            nr[i] = c * &lg;
        }
        for (j, c) in g.iter().enumerate().take(dg) {
            nr[dr - dg + j] -= c * &lr;
        }
        r = trim(nr);
        steps += 1;
        if r.iter().all(|c| c.is_zero()) {
            break;
        }
    }
    // r = lg^steps * rem(f, g); we want -rem up to a positive factor
    let scale_negative = steps % 2 == 1 && lg.is_negative();
    if scale_negative {
        r
    } else {
        r.iter().map(|c| -c).collect()
    }
}

fn sign_of(v: &Int) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn count_changes(signs: &[i32]) -> usize {
    let nz: Vec<i32> = signs.iter().cloned().filter(|&s| s != 0).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

fn sign_changes_at(chain: &[Vec<Int>], t: &Rat) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|p| {
            let mut v = Rat::zero();
            for c in p.iter().rev() {
                v = v * t + Rat::from_integer(c.clone());
            }
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .collect();
    count_changes(&signs)
}

fn sign_changes_at_plus_inf(chain: &[Vec<Int>]) -> usize {
    let signs: Vec<i32> = chain.iter().map(|p| sign_of(p.last().unwrap())).collect();
    count_changes(&signs)
}

fn sign_changes_at_minus_inf(chain: &[Vec<Int>]) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|p| {
            let s = sign_of(p.last().unwrap());
            if (p.len() - 1) % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    count_changes(&signs)
}

/// Signature (r, s) of a squarefree form, with r exact via Sturm. A root at
/// infinity (vanishing leading coefficient) counts as a real root.
pub fn signature(f: &BinaryForm) -> Result<Signature> {
    if f.degree() >= 2 && f.discriminant()?.is_zero() {
        return Err(Error::NonSquarefree);
    }
    let n = f.degree();
    let inf = f.infinity_multiplicity();
    if inf > 1 {
        return Err(Error::NonSquarefree);
    }
    let mut den = Int::from(1);
    for c in f.coeffs() {
        den = den.lcm(c.denom());
    }
    let p: Vec<Int> = f
        .coeffs()
        .iter()
        .take(n + 1 - inf)
        .map(|c| c.numer() * &den / c.denom())
        .collect();
    let r = sturm_real_count(&p, &Interval::All) + inf;
    Ok(Signature { r, s: (n - r) / 2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&c| Int::from(c)).collect()
    }

    #[test]
    fn roots_of_unity_style() {
        let f = BinaryForm::from_integers(&[1, 0, 0, 0, 0, 0, 1]);
        let rs = complex_roots(&f, 1e-12).unwrap();
        assert_eq!(rs.roots.len(), 6);
        assert_eq!(rs.real_indices.len(), 0);
        assert_eq!(rs.pair_indices.len(), 3);
        for z in &rs.roots {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            // arguments are odd multiples of pi/6
            let k = z.arg() / (std::f64::consts::PI / 6.0);
            assert!((k - k.round()).abs() < 1e-9);
            assert!((k.round() as i64).rem_euclid(2) == 1);
        }
    }

    #[test]
    fn paper_example_roots() {
        let f = BinaryForm::from_integers(&[3770, -3014, 1489, -458, 96, -12, 1]);
        let rs = complex_roots(&f, 1e-12).unwrap();
        let mut ups: Vec<Complex64> = rs.pairs();
        ups.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let expected = [
            Complex64::new(1.0, 3.0),
            Complex64::new(2.0, 5.0),
            Complex64::new(3.0, 2.0),
        ];
        for (got, want) in ups.iter().zip(expected.iter()) {
            assert!((got - want).norm() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn linear_roots() {
        let f = BinaryForm::from_integers(&[6, -11, 6, -1]); // -(x-1)(x-2)(x-3)
        let rs = complex_roots(&f, 1e-12).unwrap();
        let mut re: Vec<f64> = rs.reals();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((re[0] - 1.0).abs() < 1e-12);
        assert!((re[1] - 2.0).abs() < 1e-12);
        assert!((re[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_leading_zero_and_repeated() {
        let f = BinaryForm::from_integers(&[0, 1, 0, 0, 0, 1, 0]);
        assert!(matches!(complex_roots(&f, 1e-12), Err(Error::RootAtInfinity)));
        let g = BinaryForm::from_integers(&[1, 2, 1]);
        assert!(matches!(complex_roots(&g, 1e-12), Err(Error::NonSquarefree)));
    }

    #[test]
    fn sturm_paper_degree8() {
        // the degree-8 eliminant of the worked example has exactly 6 real roots
        let p = bi(&[
            134002174,
            -176055146,
            54904153,
            10471902,
            -9693795,
            2519358,
            -221877,
            -13194,
            2169,
        ]);
        assert_eq!(sturm_real_count(&p, &Interval::All), 6);
    }

    #[test]
    fn sturm_simple() {
        assert_eq!(sturm_real_count(&bi(&[1, 0, 1]), &Interval::All), 0);
        assert_eq!(sturm_real_count(&bi(&[0, -1, 0, 1]), &Interval::All), 3);
        // interval (0, 2] of x^3 - x: roots {-1, 0, 1}; half-open excludes 0
        let iv = Interval::HalfOpen(Rat::from_integer(0.into()), Rat::from_integer(2.into()));
        assert_eq!(sturm_real_count(&bi(&[0, -1, 0, 1]), &iv), 1);
    }

    #[test]
    fn signature_examples() {
        let f = BinaryForm::from_integers(&[1, 0, 0, 0, 0, 0, 1]);
        let s = signature(&f).unwrap();
        assert_eq!((s.r, s.s), (0, 3));
        // (x^2 - z^2)(x^2 - 4 z^2)(x^2 - 9 z^2)
        let g = BinaryForm::from_integers(&[-36, 0, 49, 0, -14, 0, 1]);
        let s = signature(&g).unwrap();
        assert_eq!((s.r, s.s), (6, 0));
        // x^6 - 5 x^4 z^2 + 3 x^2 z^4 - z^6: via Sturm oracle (2 real roots)
        let h = BinaryForm::from_integers(&[-1, 0, 3, 0, -5, 0, 1]);
        let s = signature(&h).unwrap();
        assert_eq!(s.r + 2 * s.s, 6);
    }

    #[test]
    fn signature_counts_infinity() {
        // x^5 z - x z^5 = x z (x^2-z^2)(x^2+z^2): roots 0, ±1, ±i, infinity
        let f = BinaryForm::from_integers(&[0, -1, 0, 0, 0, 1, 0]);
        let s = signature(&f).unwrap();
        assert_eq!((s.r, s.s), (4, 1));
    }
}
