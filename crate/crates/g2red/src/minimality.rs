//! Discriminant minimization over Z and height-minimality certificates for
//! even models.
//!
//! A prime power p^30 in the discriminant of a sextic model can be removed
//! by x -> x/p plus content clearing when integrality permits; for models in
//! x^2 the twist x -> x/sqrt(p) removes p^15, and for models in x^3 the
//! analogous twist removes p^10. Each reduction is attempted constructively
//! and accepted only when the cleared model is integral and the valuation
//! strictly drops.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::forms::{BinaryForm, Int, Rat};
use crate::{Error, Result};

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &Int, p: &Int) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let mut v = 0;
    let mut m = n.abs();
    while (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    v
}

/// p-adic valuation of a nonzero rational (may be negative).
pub fn valuation_rat(x: &Rat, p: &Int) -> i64 {
    valuation(x.numer(), p) as i64 - valuation(x.denom(), p) as i64
}

/// Prime factorization outcome; `cofactor` is a residual part the effort
/// bound could not split (always 1 at the scales this crate works at).
#[derive(Clone, Debug)]
pub struct Factorization {
    pub factors: Vec<(Int, u32)>,
    pub cofactor: Int,
}

const TRIAL_BOUND: u64 = 1_000_000;
const RHO_EFFORT: u64 = 10_000_000;

/// Factor |n| by trial division then Pollard rho with Miller-Rabin
/// certification of the pieces.
pub fn factor(n: &Int) -> Factorization {
    assert!(!n.is_zero(), "factor of zero");
    let mut m = n.abs();
    let mut factors: Vec<(Int, u32)> = Vec::new();
    let mut push = |p: Int, factors: &mut Vec<(Int, u32)>| {
        if let Some(e) = factors.iter_mut().find(|(q, _)| *q == p) {
            e.1 += 1;
        } else {
            factors.push((p, 1));
        }
    };
    for p in [2u64, 3, 5] {
        let pb = Int::from(p);
        while (&m % &pb).is_zero() {
            m /= &pb;
            push(pb.clone(), &mut factors);
        }
    }
    let mut d = 7u64;
    let steps = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut si = 0;
    while d <= TRIAL_BOUND && Int::from(d).pow(2) <= m {
        let db = Int::from(d);
        while (&m % &db).is_zero() {
            m /= &db;
            push(db.clone(), &mut factors);
        }
        d += steps[si];
        si = (si + 1) % steps.len();
    }
    // split the remaining cofactor with rho
    let mut stack = vec![m];
    let mut cofactor = Int::one();
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_probable_prime(&c) {
            let mut e = 0u32;
            // c may appear several times only via stack duplicates; count 1
            e += 1;
            if let Some(f) = factors.iter_mut().find(|(q, _)| *q == c) {
                f.1 += e;
            } else {
                factors.push((c, e));
            }
            continue;
        }
        match pollard_rho(&c) {
            Some(div) => {
                let other = &c / &div;
                stack.push(div);
                stack.push(other);
            }
            None => cofactor *= &c,
        }
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Factorization { factors, cofactor }
}

fn is_probable_prime(n: &Int) -> bool {
    if let Some(v) = n.to_u128() {
        return miller_rabin_u128(v);
    }
    // deterministic witnesses are enough below 2^128; larger inputs do not
    // occur at this crate's scales, fall back to a fixed witness set
    let small: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let one = Int::one();
    let nm1 = n - &one;
    let s = valuation(&nm1, &Int::from(2));
    let d = &nm1 >> (s as usize);
    'witness: for &a in &small {
        let ab = Int::from(a);
        if &ab >= n {
            continue;
        }
        let mut x = ab.modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = modpow_u128(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mulmod_u128(a: u128, b: u128, m: u128) -> u128 {
    match a.checked_mul(b) {
        Some(p) => p % m,
        None => {
            let r = (Int::from(a) * Int::from(b)) % Int::from(m);
            r.to_u128().unwrap()
        }
    }
}

fn modpow_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u128(acc, base, m);
        }
        base = mulmod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

fn pollard_rho(n: &Int) -> Option<Int> {
    if (n % Int::from(2)).is_zero() {
        return Some(Int::from(2));
    }
    let nv = n.to_u128();
    let mut c = 1u128;
    for _ in 0..20 {
        if let Some(m) = nv {
            if let Some(d) = rho_u128(m, c) {
                return Some(Int::from(d));
            }
        } else if let Some(d) = rho_big(n, &Int::from(c)) {
            return Some(d);
        }
        c += 1;
    }
    None
}

fn rho_u128(n: u128, c: u128) -> Option<u128> {
    let f = |x: u128| (mulmod_u128(x, x, n) + c) % n;
    let mut x = 2u128;
    let mut y = 2u128;
    let mut d = 1u128;
    let mut count = 0u64;
    while d == 1 {
        if count > RHO_EFFORT {
            return None;
        }
        x = f(x);
        y = f(f(y));
        d = gcd_u128(x.abs_diff(y), n);
        count += 1;
    }
    if d != n {
        Some(d)
    } else {
        None
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn rho_big(n: &Int, c: &Int) -> Option<Int> {
    let f = |x: &Int| (x * x + c) % n;
    let mut x = Int::from(2);
    let mut y = Int::from(2);
    let mut d = Int::one();
    let mut count = 0u64;
    while d.is_one() {
        if count > RHO_EFFORT / 100 {
            return None;
        }
        x = f(&x);
        y = f(&f(&y));
        d = (&x - &y).abs().gcd(n);
        count += 1;
    }
    if &d != n {
        Some(d)
    } else {
        None
    }
}

/// One accepted prime reduction.
#[derive(Clone, Debug)]
pub struct PrimeReduction {
    pub prime: Int,
    pub exponent_removed: u32,
}

fn integral_coeffs(f: &BinaryForm) -> Result<Vec<Int>> {
    if !f.is_integral() {
        return Err(Error::NonIntegral);
    }
    Ok(f.coeffs().iter().map(|c| c.numer().clone()).collect())
}

/// Minimize the discriminant of an integral sextic over Z: for every prime
/// with v_p(disc) >= 30, try x -> x/p and x -> p x with content clearing;
/// accept the move whenever the valuation strictly drops.
pub fn minimize_disc(f: &BinaryForm) -> Result<(BinaryForm, Vec<PrimeReduction>)> {
    let mut cur = f.content_and_primitive().1;
    let _ = integral_coeffs(&cur)?;
    let disc = cur.discriminant()?;
    if disc.is_zero() {
        return Err(Error::NonSquarefree);
    }
    let mut log = Vec::new();
    let fac = factor(disc.numer());
    let mut primes: Vec<Int> = fac.factors.iter().map(|(p, _)| p.clone()).collect();
    primes.sort();
    loop {
        let mut progressed = false;
        for p in &primes {
            loop {
                let d = cur.discriminant()?;
                let v = valuation(d.numer(), p);
                if v < 30 {
                    break;
                }
                let mut best: Option<(u32, BinaryForm)> = None;
                for dir in [true, false] {
                    let m = if dir {
                        // x -> x/p
                        crate::forms::LinearMap::new(
                            Rat::new(Int::one(), p.clone()),
                            Rat::zero(),
                            Rat::zero(),
                            Rat::one(),
                        )
                        .unwrap()
                    } else {
                        crate::forms::LinearMap::new(
                            Rat::from_integer(p.clone()),
                            Rat::zero(),
                            Rat::zero(),
                            Rat::one(),
                        )
                        .unwrap()
                    };
                    let g = cur.transform(&m).content_and_primitive().1;
                    if !g.is_integral() {
                        continue;
                    }
                    let dv = valuation(g.discriminant()?.numer(), p);
                    if dv < v && best.as_ref().map_or(true, |(bv, _)| dv < *bv) {
                        best = Some((dv, g));
                    }
                }
                match best {
                    Some((dv, g)) => {
                        log.push(PrimeReduction {
                            prime: p.clone(),
                            exponent_removed: v - dv,
                        });
                        cur = g;
                        progressed = true;
                    }
                    None => break,
                }
            }
        }
        if !progressed {
            break;
        }
    }
    Ok((cur, log))
}

/// Even-model twist `a_{2k} -> a_{2k} p^{3-k}` followed by content clearing:
/// removes p^15 from the discriminant when integrality permits.
pub fn minimize_disc_even(f: &BinaryForm) -> Result<(BinaryForm, Vec<PrimeReduction>)> {
    if f.even_part().is_none() || f.degree() != 6 {
        return Err(Error::NotEven);
    }
    minimize_disc_power(f, 2, 15)
}

/// Cubic-model analogue `a_{3k} -> a_{3k} p^{2-k}`: removes p^10.
pub fn minimize_disc_cubic(f: &BinaryForm) -> Result<(BinaryForm, Vec<PrimeReduction>)> {
    if f.degree() != 6 || f.coeffs().iter().enumerate().any(|(i, c)| i % 3 != 0 && !c.is_zero()) {
        return Err(Error::WrongShape("expected a polynomial in x^3".into()));
    }
    minimize_disc_power(f, 3, 10)
}

fn minimize_disc_power(
    f: &BinaryForm,
    stride: usize,
    threshold: u32,
) -> Result<(BinaryForm, Vec<PrimeReduction>)> {
    let mut cur = f.content_and_primitive().1;
    let _ = integral_coeffs(&cur)?;
    let disc = cur.discriminant()?;
    if disc.is_zero() {
        return Err(Error::NonSquarefree);
    }
    let n = cur.degree();
    let top = n / stride; // power of the inner variable
    let mut log = Vec::new();
    let fac = factor(disc.numer());
    let primes: Vec<Int> = fac.factors.iter().map(|(p, _)| p.clone()).collect();
    loop {
        let mut progressed = false;
        for p in &primes {
            loop {
                let d = cur.discriminant()?;
                let v = valuation(d.numer(), p);
                if v < threshold {
                    break;
                }
                // twist in both directions: a_{sk} -> a_{sk} p^{(top-k)} and
                // a_{sk} -> a_{sk} p^k, then clear content
                let mut best: Option<(u32, BinaryForm)> = None;
                for dir in [true, false] {
                    let coeffs: Vec<Rat> = cur
                        .coeffs()
                        .iter()
                        .enumerate()
                        .map(|(i, c)| {
                            if c.is_zero() {
                                return Rat::zero();
                            }
                            let k = (i / stride) as u32;
                            let e = if dir { (top as u32) - k } else { k };
                            let mut scale = Rat::one();
                            for _ in 0..e {
                                scale *= Rat::from_integer(p.clone());
                            }
                            c * scale
                        })
                        .collect();
                    let g = BinaryForm::new(coeffs)?.content_and_primitive().1;
                    if !g.is_integral() {
                        continue;
                    }
                    let dv = valuation(g.discriminant()?.numer(), p);
                    if dv < v && best.as_ref().map_or(true, |(bv, _)| dv < *bv) {
                        best = Some((dv, g));
                    }
                }
                match best {
                    Some((dv, g)) => {
                        log.push(PrimeReduction {
                            prime: p.clone(),
                            exponent_removed: v - dv,
                        });
                        cur = g;
                        progressed = true;
                    }
                    None => break,
                }
            }
        }
        if !progressed {
            break;
        }
    }
    Ok((cur, log))
}

/// Per-prime instantiation of the valuation-jump argument showing an even
/// model of shape `x^6 - s1 x^4 + s2 x^2 - 1` (unit outer coefficients) has
/// minimal height among integral models that are polynomials in x^2.
#[derive(Clone, Debug)]
pub struct HeightCertificate {
    /// (prime, constraint text) pairs: the jump vector
    /// (6v+2w, 4v+2w, 2v+2w, 2w) is componentwise nonnegative because
    /// integrality forces 2w >= 0 and 6v+2w >= 0.
    pub jumps: Vec<(Int, String)>,
    pub minimal: bool,
}

/// The certificate is unconditional for the admitted shape; rejects other
/// shapes.
pub fn even_model_is_height_minimal(f: &BinaryForm) -> Result<HeightCertificate> {
    if f.degree() != 6 || f.even_part().is_none() {
        return Err(Error::WrongShape("expected an even sextic".into()));
    }
    let cs = integral_coeffs(f)?;
    if cs[0].abs() != Int::one() || cs[6].abs() != Int::one() {
        return Err(Error::WrongShape(
            "expected unit coefficients at x^6 and z^6".into(),
        ));
    }
    let disc = f.discriminant()?;
    if disc.is_zero() {
        return Err(Error::NonSquarefree);
    }
    let mut jumps = Vec::new();
    let mut seen: Vec<Int> = Vec::new();
    for c in [&cs[2], &cs[4]] {
        if c.is_zero() {
            continue;
        }
        for (p, _) in factor(c).factors {
            if seen.contains(&p) {
                continue;
            }
            seen.push(p.clone());
            jumps.push((
                p.clone(),
                "jumps (6v+2w, 4v+2w, 2v+2w, 2w) >= 0 since 2w >= 0 and 6v+2w >= 0".into(),
            ));
        }
    }
    Ok(HeightCertificate { jumps, minimal: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_and_factor() {
        assert_eq!(valuation(&Int::from(96), &Int::from(2)), 5);
        let f = factor(&Int::from(1250));
        assert_eq!(
            f.factors,
            vec![(Int::from(2), 1), (Int::from(5), 4)]
        );
        assert!(f.cofactor.is_one());
        // a larger semiprime exercised through rho
        let n = Int::from(1_000_003u64) * Int::from(998_244_353u64);
        let f = factor(&n);
        assert_eq!(f.factors.len(), 2);
        assert!(f.cofactor.is_one());
    }

    #[test]
    fn round_trip_p30() {
        let g = BinaryForm::from_integers(&[2, -2, 13, -2, 36, 0, 25]);
        let p = Int::from(3);
        // inflate by x -> p x (multiplies disc by p^30)
        let m = crate::forms::LinearMap::new(
            Rat::from_integer(p.clone()),
            Rat::zero(),
            Rat::zero(),
            Rat::one(),
        )
        .unwrap();
        let inflated = g.transform(&m).content_and_primitive().1;
        let v0 = valuation(g.discriminant().unwrap().numer(), &p);
        let v1 = valuation(inflated.discriminant().unwrap().numer(), &p);
        assert_eq!(v1, v0 + 30);
        let (min, log) = minimize_disc(&inflated).unwrap();
        let v2 = valuation(min.discriminant().unwrap().numer(), &p);
        assert_eq!(v2, v0);
        assert!(log.iter().any(|r| r.prime == p));
    }

    #[test]
    fn even_twist_round_trip() {
        // (1, -33, -33, 1) even model inflated by a_{2k} -> a_{2k} 2^k
        let f = BinaryForm::from_integers(&[1, 0, -66, 0, -132, 0, 8]);
        let p = Int::from(2);
        let v = valuation(f.discriminant().unwrap().numer(), &p);
        assert_eq!(v, 43);
        let (min, log) = minimize_disc_even(&f).unwrap();
        assert_eq!(min, BinaryForm::from_integers(&[1, 0, -33, 0, -33, 0, 1]));
        assert_eq!(log.len(), 1);
        assert_eq!(log[0].exponent_removed, 15);
        // v = 28 >= 15 remains but no integral twist removes it
        let v2 = valuation(min.discriminant().unwrap().numer(), &p);
        assert_eq!(v2, 28);
        let (again, log2) = minimize_disc_even(&min).unwrap();
        assert_eq!(again, min);
        assert!(log2.is_empty());
    }

    #[test]
    fn below_threshold_untouched() {
        let f = BinaryForm::from_integers(&[1, 0, -5, 0, -5, 0, 1]);
        let (min, log) = minimize_disc_even(&f).unwrap();
        assert_eq!(min, f);
        assert!(log.is_empty());
    }

    #[test]
    fn height_certificate() {
        let f = BinaryForm::from_integers(&[-1, 0, 5, 0, -5, 0, 1]);
        let cert = even_model_is_height_minimal(&f).unwrap();
        assert!(cert.minimal);
        let bad = BinaryForm::from_integers(&[-2, 0, 5, 0, -5, 0, 1]);
        assert!(even_model_is_height_minimal(&bad).is_err());
    }
}
