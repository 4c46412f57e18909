//! Fundamental-domain reduction through the zero map, scale substitution,
//! and model normalization.
//!
//! A form is reduced when its zero map lies in the classical fundamental
//! domain F2 = { w : |Re w| <= 1/2, |w| >= 1 }. The Gauss algorithm walks
//! the zero map into F2 with T-shifts and S-inversions; by equivariance the
//! same walk applied inversely to the form produces the reduced model in its
//! modular orbit.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::forms::{BinaryForm, Int, LinearMap, Rat, UnimodularMap};
use crate::julia::{minimize_theta, DEFAULT_TOL};
use crate::minimality::factor;
use crate::{Error, Result};

const BOUNDARY_EPS: f64 = 1e-12;

/// One generator step of the reduction walk, acting on the zero map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    /// `w -> w + k` (the matrix T^k).
    Shift(i64),
    /// `w -> -1/w` (the matrix S).
    Invert,
}

impl Move {
    pub fn matrix(&self) -> UnimodularMap {
        match self {
            Move::Shift(k) => UnimodularMap::translation(*k),
            Move::Invert => UnimodularMap::inversion(),
        }
    }
}

/// Record of a reduction run: `final_map` is the composition of `moves`
/// (last move outermost), `reduced = input^(final_map^-1)`, and
/// `final_zero = final_map . zero(input)` lies in F2.
#[derive(Clone, Debug)]
pub struct ReductionTrace {
    pub input: BinaryForm,
    pub moves: Vec<Move>,
    pub final_map: UnimodularMap,
    pub reduced: BinaryForm,
    pub final_zero: Complex64,
    /// Zero maps after each move, for display.
    pub intermediate_zeros: Vec<Complex64>,
}

/// Walk a point of the upper half-plane into the fundamental domain.
/// Boundary ties resolve toward the Re >= 0 representative.
pub fn to_fundamental_domain(w: Complex64) -> Result<(Complex64, UnimodularMap, Vec<Move>)> {
    if !(w.im > 0.0) {
        return Err(Error::Anomaly(format!("point {w} not in the upper half-plane")));
    }
    let mut cur = w;
    let mut map = UnimodularMap::identity();
    let mut moves = Vec::new();
    for _ in 0..10_000 {
        let k = cur.re.round();
        if k != 0.0 {
            let ki = k as i64;
            cur = Complex64::new(cur.re - k, cur.im);
            let m = Move::Shift(-ki);
            map = m.matrix().compose(&map);
            moves.push(m);
        }
        if cur.norm_sqr() < 1.0 - BOUNDARY_EPS {
            cur = -1.0 / cur;
            let m = Move::Invert;
            map = m.matrix().compose(&map);
            moves.push(m);
        } else {
            break;
        }
    }
    // boundary normalization: prefer Re >= 0 on |Re| = 1/2 and |w| = 1
    if (cur.re + 0.5).abs() <= BOUNDARY_EPS {
        cur = Complex64::new(cur.re + 1.0, cur.im);
        let m = Move::Shift(1);
        map = m.matrix().compose(&map);
        moves.push(m);
    }
    if (cur.norm_sqr() - 1.0).abs() <= 2.0 * BOUNDARY_EPS && cur.re < -BOUNDARY_EPS {
        cur = -1.0 / cur;
        let m = Move::Invert;
        map = m.matrix().compose(&map);
        moves.push(m);
    }
    debug_assert!(in_fundamental_domain(cur));
    Ok((cur, map, moves))
}

/// Membership in the closure of F2 with the working tolerance.
pub fn in_fundamental_domain(w: Complex64) -> bool {
    w.im > 0.0 && w.re.abs() <= 0.5 + 1e-9 && w.norm_sqr() >= 1.0 - 1e-9
}

/// A unimodular premove `q` making `lead(f^q)` nonzero, together with the
/// generator expansion of `q^-1` (the action on the zero-map side);
/// identity for generic input.
fn premove_for_finite_roots(f: &BinaryForm) -> Result<(UnimodularMap, Vec<Move>)> {
    if !f.lead().is_zero() {
        return Ok((UnimodularMap::identity(), Vec::new()));
    }
    if !f.trail().is_zero() {
        // q = S: lead(f^S) = +-trail(f); S^-1 = S in PSL2
        return Ok((UnimodularMap::inversion(), vec![Move::Invert]));
    }
    for k in 1..=(f.degree() as i64) + 1 {
        for kk in [k, -k] {
            // q = [[1,0],[kk,1]]: lead(f^q) = f(1, kk); q^-1 = S T^kk S in PSL2
            let val = f.eval_at_pair(1, kk);
            if !val.is_zero() {
                let q = UnimodularMap::inversion()
                    .compose(&UnimodularMap::translation(-kk))
                    .compose(&UnimodularMap::inversion());
                return Ok((q, vec![Move::Invert, Move::Shift(kk), Move::Invert]));
            }
        }
    }
    Err(Error::ZeroForm)
}

impl BinaryForm {
    /// `f(p, q)` for integers, exact.
    pub fn eval_at_pair(&self, p: i64, q: i64) -> Rat {
        let n = self.degree();
        let mut total = Rat::zero();
        for (i, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut t = Rat::one();
            for _ in 0..i {
                t *= Rat::from_integer(Int::from(p));
            }
            for _ in 0..n - i {
                t *= Rat::from_integer(Int::from(q));
            }
            total += c * t;
        }
        total
    }
}

/// Reduce a form so its zero map lands in F2; the returned trace carries the
/// walk. Forms with a root at infinity are first moved by a unimodular
/// premove (recorded in the trace).
pub fn reduce_form(f: &BinaryForm) -> Result<ReductionTrace> {
    let (q, mut moves) = premove_for_finite_roots(f)?;
    // g = f^(P^-1) with P = q^-1, i.e. g = f^q ... the premove matrices act
    // on the zero map as P = q^(-1)
    let g = f.transform_unimodular(&q);
    let pre_map = q.inverse();

    let res = minimize_theta(&g, DEFAULT_TOL)?;
    let mut zeros = vec![res.zero];
    let (_, walk_map, walk_moves) = to_fundamental_domain(res.zero)?;
    // record intermediate zeros along the walk
    let mut cur = res.zero;
    for m in &walk_moves {
        cur = m.matrix().moebius(cur);
        zeros.push(cur);
    }
    moves.extend(walk_moves);
    let final_map = walk_map.compose(&pre_map);
    let reduced = f.transform_unimodular(&final_map.inverse());

    // re-verify on the reduced model
    let check = minimize_theta(&reduced, DEFAULT_TOL)?;
    if !in_fundamental_domain(check.zero) {
        return Err(Error::Anomaly(format!(
            "zero map of reduced form {} is outside F2",
            check.zero
        )));
    }
    Ok(ReductionTrace {
        input: f.clone(),
        moves,
        final_map,
        reduced,
        final_zero: check.zero,
        intermediate_zeros: zeros,
    })
}

/// Hill-climbing scale substitution: scales `x -> p x` or `x -> x/p` over
/// primes dividing the coefficients (plus all primes below 100), followed by
/// content clearing, accepted while the height strictly drops. Returns the
/// best model and the net scale u (meaning `x -> u x` was applied).
pub fn scale_substitution(f: &BinaryForm) -> Result<(BinaryForm, Rat)> {
    let mut cur = f.content_and_primitive().1;
    if !cur.is_integral() {
        return Err(Error::NonIntegral);
    }
    let mut net = Rat::one();
    loop {
        let height = cur.height()?;
        let mut primes: Vec<Int> = vec![];
        for c in [cur.trail(), cur.lead()] {
            if !c.is_zero() && c.numer().abs() > Int::one() {
                for (p, _) in factor(c.numer()).factors {
                    if !primes.contains(&p) {
                        primes.push(p);
                    }
                }
            }
        }
        for p in [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97] {
            let pb = Int::from(p);
            if cur.coeffs().iter().any(|c| !c.is_zero() && (c.numer() % &pb).is_zero())
                && !primes.contains(&pb)
            {
                primes.push(pb);
            }
        }
        let mut best: Option<(Int, BinaryForm, Rat)> = None;
        for p in &primes {
            for dir in [true, false] {
                let scale = if dir {
                    Rat::from_integer(p.clone())
                } else {
                    Rat::new(Int::one(), p.clone())
                };
                let m = LinearMap::diagonal(scale.clone(), Rat::one()).unwrap();
                let g = cur.transform(&m).content_and_primitive().1;
                let h = g.height()?;
                if h < height && best.as_ref().map_or(true, |(bh, _, _)| h < *bh) {
                    best = Some((h, g, scale));
                }
            }
        }
        match best {
            Some((_, g, scale)) => {
                cur = g;
                net *= scale;
            }
            None => break,
        }
    }
    Ok((cur, net))
}

/// Deterministic model normalization: the primitive representative among
/// `{f, reverse(f)}` minimizing (height, descending coefficient vector).
pub fn normalize_model(f: &BinaryForm) -> BinaryForm {
    let g = f.content_and_primitive().1;
    let r = g.reverse().content_and_primitive().1;
    let key = |v: &BinaryForm| -> (Int, Vec<Int>) {
        (
            v.height().unwrap(),
            v.coeffs().iter().rev().map(|c| c.numer().clone()).collect(),
        )
    };
    if key(&r) < key(&g) {
        r
    } else {
        g
    }
}

/// Full reduction pipeline: fundamental-domain reduction, scale
/// substitution, then model normalization.
pub fn reduce_pipeline(f: &BinaryForm) -> Result<(ReductionTrace, BinaryForm)> {
    let trace = reduce_form(f)?;
    let (scaled, _) = scale_substitution(&trace.reduced.content_and_primitive().1)?;
    let final_model = normalize_model(&scaled);
    Ok((trace, final_model))
}

/// Reduced representative of an even integral form: the zero map is purely
/// imaginary, so the form itself or its reversal is reduced.
pub fn reduce_even_form(f: &BinaryForm) -> Result<BinaryForm> {
    if f.even_part().is_none() {
        return Err(Error::NotEven);
    }
    if !f.is_integral() {
        return Err(Error::NonIntegral);
    }
    let res = minimize_theta(f, DEFAULT_TOL)?;
    let z = res.zero;
    if z.re.abs() > 1e-8 * z.norm().max(1.0) {
        return Err(Error::Anomaly(format!(
            "zero map {z} of an even form is not purely imaginary"
        )));
    }
    if z.norm_sqr() >= 1.0 - BOUNDARY_EPS {
        Ok(f.clone())
    } else {
        Ok(f.reverse())
    }
}

/// Bounded GL2(Q)-orbit height descent: greedily applies primitive integer
/// matrices with entries up to `entry_bound`, keeping the (height, lex)
/// minimum after content clearing and normalization, until a fixpoint.
/// The result is a twist with the same moduli key as the input.
pub fn minimize_height_model(f: &BinaryForm, entry_bound: i64) -> Result<BinaryForm> {
    let mut mats = Vec::new();
    let r = -entry_bound..=entry_bound;
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    if a * d - b * c == 0 {
                        continue;
                    }
                    let g = gcd4(a, b, c, d);
                    if g != 1 {
                        continue;
                    }
                    mats.push(LinearMap::from_integers(a, b, c, d).unwrap());
                }
            }
        }
    }
    let key = |v: &BinaryForm| -> (Int, Vec<Int>) {
        (
            v.height().unwrap(),
            v.coeffs().iter().rev().map(|c| c.numer().clone()).collect(),
        )
    };
    let mut cur = normalize_model(f);
    for _ in 0..16 {
        let mut best = cur.clone();
        let mut best_key = key(&cur);
        for m in &mats {
            let g = normalize_model(&cur.transform(m));
            let k = key(&g);
            if k < best_key {
                best_key = k;
                best = g;
            }
        }
        if best == cur {
            break;
        }
        cur = best;
    }
    Ok(cur)
}

fn gcd4(a: i64, b: i64, c: i64, d: i64) -> i64 {
    let g = a.abs().gcd(&b.abs());
    let g = g.gcd(&c.abs());
    g.gcd(&d.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_domain_walk() {
        let w = Complex64::new(2.12067656802142, 3.26692991594356);
        let (w2, map, moves) = to_fundamental_domain(w).unwrap();
        assert!((w2 - Complex64::new(0.12067656802142, 3.26692991594356)).norm() < 1e-12);
        assert_eq!(moves, vec![Move::Shift(-2)]);
        assert_eq!(map, UnimodularMap::translation(-2));

        let (wi, map, _) = to_fundamental_domain(Complex64::new(0.0, 1.0)).unwrap();
        assert_eq!(map, UnimodularMap::identity());
        assert!((wi - Complex64::new(0.0, 1.0)).norm() < 1e-14);

        let (w3, _, _) = to_fundamental_domain(Complex64::new(0.1, 0.1)).unwrap();
        assert!(in_fundamental_domain(w3));
    }

    #[test]
    fn worked_example_pipeline() {
        let f = BinaryForm::from_integers(&[3770, -3014, 1489, -458, 96, -12, 1]);
        let trace = reduce_form(&f).unwrap();
        assert_eq!(
            trace.reduced,
            BinaryForm::from_integers(&[1250, -250, 325, -10, 36, 0, 1])
        );
        let (scaled, u) = scale_substitution(&trace.reduced).unwrap();
        assert_eq!(scaled, BinaryForm::from_integers(&[2, -2, 13, -2, 36, 0, 25]));
        assert_eq!(u, Rat::from_integer(Int::from(5)));
        let final_model = normalize_model(&scaled);
        assert_eq!(
            final_model,
            BinaryForm::from_integers(&[25, 0, 36, 2, 13, 2, 2])
        );
        assert_eq!(final_model.height().unwrap(), Int::from(36));
    }

    #[test]
    fn already_reduced_identity_trace() {
        let f = BinaryForm::from_integers(&[1, 0, 0, 0, 0, 0, 1]);
        let trace = reduce_form(&f).unwrap();
        assert_eq!(trace.final_map, UnimodularMap::identity());
        assert_eq!(trace.reduced, f);
    }

    #[test]
    fn round_trip_shift() {
        let f = BinaryForm::from_integers(&[1, 0, 0, 0, 0, 0, 1]);
        let g = f.shift(7); // f^(T^7), zero map moves to i - 7
        let trace = reduce_form(&g).unwrap();
        assert_eq!(trace.reduced, f);
    }

    #[test]
    fn idempotent_reduction() {
        let f = BinaryForm::from_integers(&[3770, -3014, 1489, -458, 96, -12, 1]);
        let t1 = reduce_form(&f).unwrap();
        let t2 = reduce_form(&t1.reduced).unwrap();
        assert_eq!(t2.final_map, UnimodularMap::identity());
    }

    #[test]
    fn scale_identity_when_minimal() {
        let f = BinaryForm::from_integers(&[1, 0, 0, 0, 0, 0, 1]);
        let (g, u) = scale_substitution(&f).unwrap();
        assert_eq!(g, f);
        assert!(u.is_one());
    }

    #[test]
    fn scale_descales_constructed_pattern() {
        // g(3x) for g = x^6 + 2x^4 - x^2 + 5, then primitive: descale recovers
        let g = BinaryForm::from_integers(&[5, 0, -1, 0, 2, 0, 1]);
        let m = LinearMap::from_integers(3, 0, 0, 1).unwrap();
        let inflated = g.transform(&m).content_and_primitive().1;
        let (best, _) = scale_substitution(&inflated).unwrap();
        assert_eq!(best.height().unwrap(), g.height().unwrap());
    }

    #[test]
    fn even_form_reduction() {
        // zero map on the imaginary axis, |z| >= 1: unchanged
        let f = BinaryForm::from_integers(&[1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(reduce_even_form(&f).unwrap(), f);
        // Table tuple: result has zero map in F2 either way
        let g = BinaryForm::from_integers(&[1, 0, -5, 0, -5, 0, 1]);
        let red = reduce_even_form(&g).unwrap();
        let z = crate::julia::zero_map(&red).unwrap();
        assert!(in_fundamental_domain(z));
        // a reversal case: small |zero| forces the swap
        let h = BinaryForm::from_integers(&[100, 0, 90, 0, 1, 0, 1]);
        let red = reduce_even_form(&h).unwrap();
        let z0 = crate::julia::zero_map(&h).unwrap();
        if z0.norm() < 1.0 {
            assert_eq!(red, h.reverse());
            let z1 = crate::julia::zero_map(&red).unwrap();
            assert!((z1 - (-1.0 / z0)).norm() < 1e-7);
        }
    }

    #[test]
    fn height_descent_case57() {
        let f = BinaryForm::from_integers(&[1, 0, -33, 0, -33, 0, 1]);
        let best = minimize_height_model(&f, 2).unwrap();
        assert!(best.height().unwrap() <= Int::from(3));
        let k1 = crate::genus2::moduli_key(&crate::genus2::igusa(&f).unwrap()).unwrap();
        let k2 = crate::genus2::moduli_key(&crate::genus2::igusa(&best).unwrap()).unwrap();
        assert_eq!(k1, k2);
    }
}
