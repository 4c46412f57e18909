//! The exact `G_f` covariant and the closed-form families with extra
//! automorphisms.
//!
//! `G_f(x, z) = [x f_x(-f_z, f_x) + z f_z(-f_z, f_x)] / (n f)`, a covariant
//! of degree n-1 and order (n-1)(n-2). For totally real forms its unique
//! real quadratic factor is the Julia quadratic, which gives a root-finding
//! route to the zero map that is independent of the weight minimization.
//!
//! The computation is generic over the coefficient ring so the same code
//! runs on rational forms and on forms whose coefficients are polynomials in
//! parameters (generic coefficients, family parameters).

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::forms::{BinaryForm, Int, Rat};
use crate::julia::JuliaQuadratic;
use crate::mpoly::MPoly;
use crate::numerics::complex_roots;
use crate::{Error, Result};

/// Coefficient ring abstraction: exact ring ops plus exact division.
pub trait Ring {
    type El: Clone + PartialEq;
    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn from_i64(&self, v: i64) -> Self::El;
    /// Exact division; `None` if `a` is not divisible by `b`.
    fn exact_div(&self, a: &Self::El, b: &Self::El) -> Option<Self::El>;
}

/// The rationals.
pub struct RatRing;

impl Ring for RatRing {
    type El = Rat;
    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, v: i64) -> Rat {
        Rat::from_integer(Int::from(v))
    }
    fn exact_div(&self, a: &Rat, b: &Rat) -> Option<Rat> {
        if b.is_zero() {
            None
        } else {
            Some(a / b)
        }
    }
}

/// Polynomials in a fixed number of parameters.
pub struct PolyRing {
    pub nvars: usize,
}

impl Ring for PolyRing {
    type El = MPoly;
    fn zero(&self) -> MPoly {
        MPoly::zero(self.nvars)
    }
    fn one(&self) -> MPoly {
        MPoly::from_i64(self.nvars, 1)
    }
    fn add(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a.add(b)
    }
    fn sub(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a.sub(b)
    }
    fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        a.mul(b)
    }
    fn neg(&self, a: &MPoly) -> MPoly {
        a.neg()
    }
    fn is_zero(&self, a: &MPoly) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, v: i64) -> MPoly {
        MPoly::from_i64(self.nvars, v)
    }
    fn exact_div(&self, a: &MPoly, b: &MPoly) -> Option<MPoly> {
        a.exact_div(b)
    }
}

/// Multiply two binary forms given as ascending coefficient slices.
pub fn form_mul<R: Ring>(ring: &R, a: &[R::El], b: &[R::El]) -> Vec<R::El> {
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ring.is_zero(ai) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if ring.is_zero(bj) {
                continue;
            }
            out[i + j] = ring.add(&out[i + j], &ring.mul(ai, bj));
        }
    }
    out
}

fn form_add<R: Ring>(ring: &R, a: &[R::El], b: &[R::El]) -> Vec<R::El> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| ring.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| ring.zero());
            ring.add(&x, &y)
        })
        .collect()
}

/// x-derivative of a degree-n binary form, ascending coefficients.
fn deriv_x<R: Ring>(ring: &R, f: &[R::El]) -> Vec<R::El> {
    (1..f.len())
        .map(|i| ring.mul(&f[i], &ring.from_i64(i as i64)))
        .collect()
}

/// z-derivative of a degree-n binary form, ascending coefficients.
fn deriv_z<R: Ring>(ring: &R, f: &[R::El]) -> Vec<R::El> {
    let n = f.len() - 1;
    (0..n)
        .map(|i| ring.mul(&f[i], &ring.from_i64((n - i) as i64)))
        .collect()
}

/// `g(p(x,z), q(x,z))` for a binary form g of degree m and forms p, q of a
/// common degree k: the result has degree m*k.
fn compose<R: Ring>(ring: &R, g: &[R::El], p: &[R::El], q: &[R::El]) -> Vec<R::El> {
    let m = g.len() - 1;
    // powers of p and q
    let mut p_pows: Vec<Vec<R::El>> = vec![vec![ring.one()]];
    let mut q_pows: Vec<Vec<R::El>> = vec![vec![ring.one()]];
    for i in 1..=m {
        let last = p_pows.last().unwrap().clone();
        p_pows.push(form_mul(ring, &last, p));
        let last = q_pows.last().unwrap().clone();
        q_pows.push(form_mul(ring, &last, q));
    }
    let mut acc = vec![ring.zero()];
    for (i, gi) in g.iter().enumerate() {
        if ring.is_zero(gi) {
            continue;
        }
        let term = form_mul(ring, &p_pows[i], &q_pows[m - i]);
        let term: Vec<R::El> = term.iter().map(|t| ring.mul(t, gi)).collect();
        acc = form_add(ring, &acc, &term);
    }
    acc
}

/// Exact division of binary forms: `num / den` where the quotient has the
/// stated degree. Solves the triangular system anchored at the top nonzero
/// coefficient of `den`, then verifies the full product.
pub fn form_div_exact<R: Ring>(
    ring: &R,
    num: &[R::El],
    den: &[R::El],
    quot_degree: usize,
) -> Option<Vec<R::El>> {
    let j = den.iter().rposition(|c| !ring.is_zero(c))?;
    let mut quot = vec![ring.zero(); quot_degree + 1];
    for k in (j..=j + quot_degree).rev() {
        let mut acc = num.get(k).cloned().unwrap_or_else(|| ring.zero());
        for i in 0..j {
            let idx = k - i;
            if idx > k - j && idx <= quot_degree {
                acc = ring.sub(&acc, &ring.mul(&den[i], &quot[idx]));
            }
        }
        quot[k - j] = ring.exact_div(&acc, &den[j])?;
    }
    // verify num == den * quot everywhere
    let prod = form_mul(ring, den, &quot);
    let maxlen = prod.len().max(num.len());
    for i in 0..maxlen {
        let a = prod.get(i).cloned().unwrap_or_else(|| ring.zero());
        let b = num.get(i).cloned().unwrap_or_else(|| ring.zero());
        if a != b {
            return None;
        }
    }
    Some(quot)
}

/// `G_f` as ascending coefficients over any ring; `None` when the division
/// by `n f` is not exact (repeated roots, or a bug upstream).
pub fn g_covariant_generic<R: Ring>(ring: &R, f: &[R::El]) -> Option<Vec<R::El>> {
    let n = f.len() - 1;
    let fx = deriv_x(ring, f);
    let fz = deriv_z(ring, f);
    let neg_fz: Vec<R::El> = fz.iter().map(|c| ring.neg(c)).collect();
    let comp_x = compose(ring, &fx, &neg_fz, &fx);
    let comp_z = compose(ring, &fz, &neg_fz, &fx);
    // x * comp_x: shift up by one; z * comp_z: degree bump without shift
    let mut num = vec![ring.zero()];
    num.extend(comp_x.iter().cloned());
    let num = form_add(ring, &num, &comp_z);
    let nf: Vec<R::El> = f.iter().map(|c| ring.mul(c, &ring.from_i64(n as i64))).collect();
    let d = (n - 1) * (n - 2);
    form_div_exact(ring, &num, &nf, d)
}

/// The `G_f` covariant of a squarefree rational form of degree >= 3.
#[derive(Clone, Debug)]
pub struct GPoly {
    pub poly: BinaryForm,
    pub source_degree: usize,
}

pub fn g_covariant(f: &BinaryForm) -> Result<GPoly> {
    let n = f.degree();
    if n < 3 {
        return Err(Error::WrongDegree {
            expected: "at least 3".into(),
            got: n,
        });
    }
    let coeffs = g_covariant_generic(&RatRing, f.coeffs())
        .ok_or_else(|| Error::Anomaly("G_f division by n*f not exact".into()))?;
    Ok(GPoly {
        poly: BinaryForm::new(coeffs)?,
        source_degree: n,
    })
}

/// Checks `c_i^sigma = (-1)^(n-1) c_(d-i)`: recomputing G on the
/// coefficient-reversed form must give the sign-adjusted mirror of G(f).
pub fn sigma_symmetry_check(f: &BinaryForm, g: &GPoly) -> bool {
    let n = f.degree();
    let d = (n - 1) * (n - 2);
    let sigma_f = match BinaryForm::new(f.coeffs().iter().rev().cloned().collect()) {
        Ok(v) => v,
        Err(_) => return false,
    };
    let Some(gs) = g_covariant_generic(&RatRing, sigma_f.coeffs()) else {
        return false;
    };
    let sign = if (n - 1) % 2 == 1 { -1 } else { 1 };
    let sign = Rat::from_integer(Int::from(sign));
    (0..=d).all(|i| gs[i] == g.poly.coeff(d - i) * &sign)
}

/// Julia quadratic of a totally real form, extracted as the unique conjugate
/// root pair of `G_f`. The returned quadratic is monic.
pub fn julia_from_g(f: &BinaryForm) -> Result<JuliaQuadratic> {
    let g = g_covariant(f)?;
    let sf = squarefree_part(&g.poly);
    let trimmed = trim_leading_zeros(&sf)?;
    let roots = complex_roots(&trimmed, 1e-10)?;
    let pairs = roots.pairs();
    match pairs.len() {
        1 => {
            let rho = pairs[0];
            Ok(JuliaQuadratic {
                a: 1.0,
                b: -2.0 * rho.re,
                c: rho.norm_sqr(),
            })
        }
        0 => Err(Error::Anomaly(
            "G_f has no conjugate root pair; input not totally real?".into(),
        )),
        k => Err(Error::Anomaly(format!(
            "G_f has {k} conjugate root pairs; input not totally real?"
        ))),
    }
}

fn trim_leading_zeros(f: &BinaryForm) -> Result<BinaryForm> {
    let mut cs = f.coeffs().to_vec();
    while cs.len() > 1 && cs.last().unwrap().is_zero() {
        cs.pop();
    }
    BinaryForm::new(cs)
}

/// Squarefree part of `f(x,1)` (monic-free exact gcd with the derivative),
/// re-homogenized to drop repeated finite roots.
pub fn squarefree_part(f: &BinaryForm) -> BinaryForm {
    let p: Vec<Rat> = f.coeffs().to_vec();
    let dp: Vec<Rat> = (1..p.len())
        .map(|i| &p[i] * Rat::from_integer(Int::from(i as i64)))
        .collect();
    let g = poly_gcd(&p, &dp);
    if g.len() <= 1 {
        return f.clone();
    }
    let q = poly_div_exact(&p, &g).expect("gcd divides");
    BinaryForm::new(q).expect("nonzero quotient")
}

fn poly_trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut a = poly_trim(a.to_vec());
    let mut b = poly_trim(b.to_vec());
    while !(b.len() == 1 && b[0].is_zero()) {
        let r = poly_rem(&a, &b);
        a = b;
        b = poly_trim(r);
    }
    // normalize monic
    let lead = a.last().unwrap().clone();
    if !lead.is_zero() {
        for c in a.iter_mut() {
            *c /= &lead;
        }
    }
    a
}

fn poly_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let q = r.last().unwrap() / lb;
        for (j, c) in b.iter().enumerate() {
            let idx = dr - db + j;
            let sub = &q * c;
            r[idx] -= sub;
        }
        r = poly_trim(r);
        if r.iter().all(|c| c.is_zero()) {
            return vec![Rat::zero()];
        }
    }
    r
}

fn poly_div_exact(a: &[Rat], b: &[Rat]) -> Option<Vec<Rat>> {
    let mut r = poly_trim(a.to_vec());
    let b = poly_trim(b.to_vec());
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    if r.len() <= db {
        return None;
    }
    let mut q = vec![Rat::zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let qc = r.last().unwrap() / lb;
        q[dr - db] = qc.clone();
        for (j, c) in b.iter().enumerate() {
            let sub = &qc * c;
            r[dr - db + j] -= sub;
        }
        r = poly_trim(r);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    if r.iter().all(|c| c.is_zero()) {
        Some(q)
    } else {
        None
    }
}

/// Continued-fraction rational reconstruction with a denominator bound.
pub fn rationalize(x: f64, max_den: u64) -> Option<Rat> {
    use num_traits::ToPrimitive;
    if !x.is_finite() {
        return None;
    }
    // convergents p/q of the continued fraction of x
    let (mut p_prev, mut q_prev) = (Int::one(), Int::zero());
    let (mut p, mut q) = (Int::from(x.floor() as i64), Int::one());
    let mut v = x - x.floor();
    for _ in 0..64 {
        let cand = Rat::new(p.clone(), q.clone());
        if (cand.to_f64().unwrap() - x).abs() <= 1e-9 * x.abs().max(1.0) {
            return Some(cand);
        }
        if v.abs() < 1e-15 {
            break;
        }
        v = 1.0 / v;
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        v -= a;
        let ai = Int::from(a as i64);
        let p_next = &ai * &p + &p_prev;
        let q_next = &ai * &q + &q_prev;
        if q_next > Int::from(max_den) {
            break;
        }
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    None
}

/// Monic quadratic `x^2 + b x z + c z^2` rationalized from a numeric Julia
/// quadratic; `None` when no small-denominator reconstruction exists.
pub fn rationalize_quadratic(q: &JuliaQuadratic, max_den: u64) -> Option<BinaryForm> {
    let b = rationalize(q.b / q.a, max_den)?;
    let c = rationalize(q.c / q.a, max_den)?;
    BinaryForm::new(vec![c, b, Rat::one()]).ok()
}

fn rat_i(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

/// `x^6 - s1 x^4 z^2 + s2 x^2 z^4 - z^6`.
pub fn family_v4(s1: &Rat, s2: &Rat) -> Result<BinaryForm> {
    let f = BinaryForm::new(vec![
        rat_i(-1),
        Rat::zero(),
        s2.clone(),
        Rat::zero(),
        -s1.clone(),
        Rat::zero(),
        Rat::one(),
    ])?;
    if f.discriminant()?.is_zero() {
        return Err(Error::NonSquarefree);
    }
    Ok(f)
}

/// `(x^2 - z^2)(x^2 - a^2 z^2)(a^2 x^2 - z^2) / a^2`, primitive.
pub fn family_d4(alpha: &Rat) -> Result<BinaryForm> {
    if alpha.is_zero() {
        return Err(Error::NonSquarefree);
    }
    let a2 = alpha * alpha;
    let f1 = BinaryForm::new(vec![rat_i(-1), Rat::zero(), Rat::one()])?;
    let f2 = BinaryForm::new(vec![-a2.clone(), Rat::zero(), Rat::one()])?;
    let f3 = BinaryForm::new(vec![rat_i(-1), Rat::zero(), a2.clone()])?;
    let prod = BinaryForm::new(form_mul(
        &RatRing,
        &form_mul(&RatRing, f1.coeffs(), f2.coeffs()),
        f3.coeffs(),
    ))?
    .scale(&(Rat::one() / a2))?;
    if prod.discriminant()?.is_zero() {
        return Err(Error::NonSquarefree);
    }
    Ok(prod.content_and_primitive().1)
}

/// Quintic model of the D4 locus: `x^5 + x^3 z^2 + s x z^4`, Weierstrass
/// points {0, infinity} and the roots of `x^4 + x^2 + s`.
pub fn family_d4_quintic(s: &Rat) -> Result<BinaryForm> {
    let f = BinaryForm::new(vec![
        Rat::zero(),
        s.clone(),
        Rat::zero(),
        Rat::one(),
        Rat::zero(),
        Rat::one(),
    ])?;
    Ok(f)
}

/// `(x^3 - z^3)(x^3 - l^3 z^3)`.
pub fn family_d6(lambda: &Rat) -> Result<BinaryForm> {
    let l3 = lambda * lambda * lambda;
    if l3.is_zero() || l3.is_one() {
        return Err(Error::NonSquarefree);
    }
    BinaryForm::new(vec![
        l3.clone(),
        Rat::zero(),
        Rat::zero(),
        -(Rat::one() + &l3),
        Rat::zero(),
        Rat::zero(),
        Rat::one(),
    ])
}

/// Zero of a numeric quadratic in the upper half-plane.
pub fn quadratic_zero(q: &JuliaQuadratic) -> Complex64 {
    q.upper_root()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::julia::zero_map;

    #[test]
    fn g_degree_bookkeeping() {
        let f = BinaryForm::from_integers(&[-3, 1, 0, 2, 0, 1]); // quintic
        let g = g_covariant(&f).unwrap();
        assert_eq!(g.poly.degree(), 12);
        let f = BinaryForm::from_integers(&[-3, 1, 0, 2, 0, 1, 1]); // sextic
        let g = g_covariant(&f).unwrap();
        assert_eq!(g.poly.degree(), 20);
    }

    #[test]
    fn sigma_symmetry_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut done = 0;
        while done < 10 {
            let deg = if done % 2 == 0 { 5 } else { 6 };
            let cs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
            if cs[0] == 0 || cs[deg] == 0 {
                continue;
            }
            let f = BinaryForm::from_integers(&cs);
            if f.discriminant().unwrap().is_zero() {
                continue;
            }
            let g = g_covariant(&f).unwrap();
            assert!(sigma_symmetry_check(&f, &g), "failed for {f}");
            done += 1;
        }
    }

    #[test]
    fn covariance_under_gl2() {
        // G_(f^M) = (det M)^(n-1) (G_f)^M
        use crate::forms::LinearMap;
        let f = BinaryForm::from_integers(&[2, -1, 3, 1, -2, 1, 1]);
        let m = LinearMap::from_integers(2, 1, 1, 1).unwrap(); // det 1
        let g1 = g_covariant(&f.transform(&m)).unwrap().poly;
        let g2 = g_covariant(&f).unwrap().poly.transform(&m);
        assert_eq!(g1, g2);
        let m2 = LinearMap::from_integers(1, 2, 1, 4).unwrap(); // det 2
        let g1 = g_covariant(&f.transform(&m2)).unwrap().poly;
        let mut g2 = g_covariant(&f).unwrap().poly.transform(&m2);
        let mut pow = Rat::one();
        for _ in 0..5 {
            pow *= rat_i(2);
        }
        g2 = g2.scale(&pow).unwrap();
        assert_eq!(g1, g2);
    }

    #[test]
    fn julia_from_g_matches_zero_map() {
        // a concrete totally real sextic
        let f = BinaryForm::from_integers(&[-36, 0, 49, 0, -14, 0, 1]);
        let jq = julia_from_g(&f).unwrap();
        let z1 = quadratic_zero(&jq);
        let z2 = zero_map(&f).unwrap();
        assert!((z1 - z2).norm() < 1e-7, "{z1} vs {z2}");
    }

    #[test]
    fn d4_family_even() {
        let alpha = Rat::new(Int::from(2), Int::from(1));
        let f = family_d4(&alpha).unwrap();
        assert!(f.even_part().is_some());
    }

    #[test]
    fn d6_family_contains_displayed_factor() {
        // G of (x^3-z^3)(x^3 - l^3 z^3) is divisible by (w z^6 - x^6), w = l^3
        let lam = Rat::new(Int::from(2), Int::from(1));
        let f = family_d6(&lam).unwrap();
        let g = g_covariant(&f).unwrap();
        let w = &lam * &lam * &lam;
        let factor = BinaryForm::new(vec![
            w,
            Rat::zero(),
            Rat::zero(),
            Rat::zero(),
            Rat::zero(),
            Rat::zero(),
            -Rat::one(),
        ])
        .unwrap();
        let q = form_div_exact(&RatRing, g.poly.coeffs(), factor.coeffs(), 14);
        assert!(q.is_some());
    }
}
