//! Igusa-type invariants, canonical moduli keys, and automorphism
//! classification of genus-2 curves `y^2 = f(x)` with `deg f = 6`.
//!
//! The generators are derived once, symbolically, from transvectants of the
//! generic sextic: J2 = (f,f)_6, J4 = (i,i)_4 and J6 = ((i,i)_2, i)_4 with
//! i = (f,f)_4, each content-normalized to primitive integer coefficients,
//! and J10 = disc(f). Correctness is pinned by the weighted transformation
//! law and by J10 vanishing exactly on forms with repeated roots, both
//! enforced in tests, rather than by trusting any printed table of
//! coefficients.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::sync::OnceLock;

use crate::covariants::{form_mul, PolyRing, Ring};
use crate::forms::{BinaryForm, Int, Rat};
use crate::minimality::factor;
use crate::mpoly::MPoly;
use crate::numerics::complex_roots;
use crate::{Error, Result};

/// The four invariants; weights (of the GL2 action) 6, 12, 18, 30.
#[derive(Clone, Debug, PartialEq)]
pub struct Genus2Invariants {
    pub j2: Rat,
    pub j4: Rat,
    pub j6: Rat,
    pub j10: Rat,
}

/// Canonical representative of `(J2 : J4 : J6 : J10)` in weighted projective
/// space: scalings act as `J_k -> mu^{w_k} J_k` with `mu` rational and
/// weights (1, 2, 3, 5); the representative removes every removable prime
/// power and fixes the sign by making the first nonzero entry of weight-odd
/// position (J10, then J2, then J6) positive. Equal keys identify points of
/// the moduli space over the complex numbers on all strata with the given
/// zero pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuliKey {
    pub j: [Int; 4],
    /// bit k set when J_{2k+2...} is zero: bit0=J2, bit1=J4, bit2=J6, bit3=J10
    pub zero_pattern: u8,
}

impl ModuliKey {
    /// Cell encoding `J2|J4|J6|J10` of the canonical representative.
    pub fn cell(&self) -> String {
        format!("{}|{}|{}|{}", self.j[0], self.j[1], self.j[2], self.j[3])
    }

    /// Dedup identity following the absolute-invariant convention used by
    /// the height-database tables: the J2 = 0 stratum is not subdivided, so
    /// every key with J2 = 0 shares one bucket. Tables keyed this way match
    /// the published counts; `ModuliKey` equality itself stays the faithful
    /// moduli identity.
    pub fn database_bucket(&self) -> ModuliKey {
        if !self.j[0].is_zero() {
            return self.clone();
        }
        ModuliKey {
            j: [Int::zero(), Int::zero(), Int::zero(), Int::zero()],
            zero_pattern: 0b0001,
        }
    }
}

/// Automorphism-group label of a genus-2 curve, with the group-ID pair
/// convention used in the tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AutLabel {
    C2,
    V4,
    D4,
    C10,
    D6,
    G24,
    G48,
}

impl AutLabel {
    pub fn from_order(order: usize) -> Option<AutLabel> {
        match order {
            2 => Some(AutLabel::C2),
            4 => Some(AutLabel::V4),
            8 => Some(AutLabel::D4),
            10 => Some(AutLabel::C10),
            12 => Some(AutLabel::D6),
            24 => Some(AutLabel::G24),
            48 => Some(AutLabel::G48),
            _ => None,
        }
    }

    pub fn order(&self) -> usize {
        match self {
            AutLabel::C2 => 2,
            AutLabel::V4 => 4,
            AutLabel::D4 => 8,
            AutLabel::C10 => 10,
            AutLabel::D6 => 12,
            AutLabel::G24 => 24,
            AutLabel::G48 => 48,
        }
    }

    /// Short name: "V4", "D4", ...
    pub fn name(&self) -> &'static str {
        match self {
            AutLabel::C2 => "C2",
            AutLabel::V4 => "V4",
            AutLabel::D4 => "D4",
            AutLabel::C10 => "C10",
            AutLabel::D6 => "D6",
            AutLabel::G24 => "G24",
            AutLabel::G48 => "G48",
        }
    }

    /// Group-ID pair string: "[4,2]", "[8,3]", ...
    pub fn id_pair(&self) -> &'static str {
        match self {
            AutLabel::C2 => "[2,1]",
            AutLabel::V4 => "[4,2]",
            AutLabel::D4 => "[8,3]",
            AutLabel::C10 => "[10,2]",
            AutLabel::D6 => "[12,4]",
            AutLabel::G24 => "[24,8]",
            AutLabel::G48 => "[48,5]",
        }
    }

    pub fn parse(s: &str) -> Option<AutLabel> {
        let t = s.replace(' ', "");
        for l in [
            AutLabel::C2,
            AutLabel::V4,
            AutLabel::D4,
            AutLabel::C10,
            AutLabel::D6,
            AutLabel::G24,
            AutLabel::G48,
        ] {
            if t == l.name() || t == l.id_pair() {
                return Some(l);
            }
        }
        None
    }
}

struct IgusaPolys {
    j2: MPoly,
    j4: MPoly,
    j6: MPoly,
}

static IGUSA: OnceLock<IgusaPolys> = OnceLock::new();

/// r-th transvectant of binary forms over the polynomial ring, given as
/// ascending coefficient vectors of the stated degrees.
fn transvectant(ring: &PolyRing, g: &[MPoly], h: &[MPoly], r: usize) -> Vec<MPoly> {
    let m = g.len() - 1;
    let n = h.len() - 1;
    let mut acc = vec![MPoly::zero(ring.nvars)];
    for k in 0..=r {
        let dg = deriv_many(ring, g, r - k, k);
        let dh = deriv_many(ring, h, k, r - k);
        let prod = form_mul(ring, &dg, &dh);
        let sign = if k % 2 == 1 { -1 } else { 1 };
        let coef = Rat::from_integer(Int::from(sign * binom(r, k)));
        let term: Vec<MPoly> = prod.iter().map(|t| t.mul_rat(&coef)).collect();
        acc = add_forms(ring, &acc, &term);
    }
    let pref = Rat::new(
        factorial(m - r) * factorial(n - r),
        factorial(m) * factorial(n),
    );
    acc.iter().map(|t| t.mul_rat(&pref)).collect()
}

fn factorial(n: usize) -> Int {
    let mut v = Int::one();
    for i in 2..=n {
        v *= Int::from(i as u64);
    }
    v
}

fn binom(n: usize, k: usize) -> i64 {
    let mut v = 1i64;
    for i in 0..k {
        v = v * (n - i) as i64 / (i + 1) as i64;
    }
    v
}

fn add_forms(ring: &PolyRing, a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| ring.zero());
            let y = b.get(i).cloned().unwrap_or_else(|| ring.zero());
            x.add(&y)
        })
        .collect()
}

/// d^(ax+az) of an ascending coefficient vector of a degree-n binary form.
fn deriv_many(ring: &PolyRing, f: &[MPoly], dx: usize, dz: usize) -> Vec<MPoly> {
    let mut cur = f.to_vec();
    for _ in 0..dx {
        cur = (1..cur.len())
            .map(|i| cur[i].mul_rat(&Rat::from_integer(Int::from(i as u64))))
            .collect();
    }
    for _ in 0..dz {
        let n = cur.len() - 1;
        cur = (0..n)
            .map(|i| cur[i].mul_rat(&Rat::from_integer(Int::from((n - i) as u64))))
            .collect();
    }
    let _ = ring;
    cur
}

fn igusa_polys() -> &'static IgusaPolys {
    IGUSA.get_or_init(|| {
        let ring = PolyRing { nvars: 7 };
        let f: Vec<MPoly> = (0..7).map(|i| MPoly::var(7, i)).collect();
        let i4 = transvectant(&ring, &f, &f, 4);
        let a = transvectant(&ring, &f, &f, 6);
        let b = transvectant(&ring, &i4, &i4, 4);
        let ii2 = transvectant(&ring, &i4, &i4, 2);
        let c = transvectant(&ring, &ii2, &i4, 4);
        debug_assert!(a.len() == 1 && b.len() == 1 && c.len() == 1);
        IgusaPolys {
            j2: a[0].primitive_part(),
            j4: b[0].primitive_part(),
            j6: c[0].primitive_part(),
        }
    })
}

/// Exact invariants of a binary sextic.
pub fn igusa(f: &BinaryForm) -> Result<Genus2Invariants> {
    if f.degree() != 6 {
        return Err(Error::WrongDegree {
            expected: "6".into(),
            got: f.degree(),
        });
    }
    let polys = igusa_polys();
    let pt: Vec<Rat> = f.coeffs().to_vec();
    Ok(Genus2Invariants {
        j2: polys.j2.eval(&pt),
        j4: polys.j4.eval(&pt),
        j6: polys.j6.eval(&pt),
        j10: f.discriminant()?,
    })
}

/// Weights of (J2, J4, J6, J10) under `J_k -> mu^{w_k} J_k`.
const MU_WEIGHTS: [i64; 4] = [1, 2, 3, 5];

/// Canonical weighted-projective key for the invariants.
pub fn moduli_key(inv: &Genus2Invariants) -> Result<ModuliKey> {
    let vals = [&inv.j2, &inv.j4, &inv.j6, &inv.j10];
    if vals.iter().all(|v| v.is_zero()) {
        return Err(Error::WrongShape("all invariants zero".into()));
    }
    let mut zero_pattern = 0u8;
    for (k, v) in vals.iter().enumerate() {
        if v.is_zero() {
            zero_pattern |= 1 << k;
        }
    }
    // collect candidate primes: divisors of every denominator and of the
    // gcd of the numerators
    let mut den_lcm = Int::one();
    for v in &vals {
        den_lcm = den_lcm.lcm(v.denom());
    }
    let mut num_gcd = Int::zero();
    for v in &vals {
        num_gcd = num_gcd.gcd(v.numer());
    }
    let mut primes: Vec<Int> = Vec::new();
    if !den_lcm.is_one() {
        for (p, _) in factor(&den_lcm).factors {
            primes.push(p);
        }
    }
    if num_gcd.abs() > Int::one() {
        for (p, _) in factor(&num_gcd).factors {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    // start from the exact rational values and strip mu = p^m per prime
    let mut work: Vec<Rat> = vals.iter().map(|v| (*v).clone()).collect();
    for p in &primes {
        let mut m = i64::MAX;
        for (k, v) in work.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let vp = crate::minimality::valuation_rat(v, p);
            m = m.min(vp.div_euclid(MU_WEIGHTS[k]));
        }
        if m == i64::MAX || m == 0 {
            continue;
        }
        for (k, v) in work.iter_mut().enumerate() {
            if v.is_zero() {
                continue;
            }
            let e = m * MU_WEIGHTS[k];
            let pw = pow_rat(p, e);
            *v = &*v / pw;
        }
    }
    // now every entry is integral (removable denominators were stripped)
    let mut j: Vec<Int> = Vec::with_capacity(4);
    for v in &work {
        if !v.denom().is_one() {
            return Err(Error::Anomaly(format!(
                "canonicalization left a denominator: {v}"
            )));
        }
        j.push(v.numer().clone());
    }
    // sign: mu = -1 flips the odd-weight entries (J2, J6, J10)
    let flip_needed = if !j[3].is_zero() {
        j[3].is_negative()
    } else if !j[0].is_zero() {
        j[0].is_negative()
    } else if !j[2].is_zero() {
        j[2].is_negative()
    } else {
        false
    };
    if flip_needed {
        j[0] = -j[0].clone();
        j[2] = -j[2].clone();
        j[3] = -j[3].clone();
    }
    Ok(ModuliKey {
        j: [j[0].clone(), j[1].clone(), j[2].clone(), j[3].clone()],
        zero_pattern,
    })
}

fn pow_rat(p: &Int, e: i64) -> Rat {
    let mut v = Rat::one();
    let pr = Rat::from_integer(p.clone());
    for _ in 0..e.unsigned_abs() {
        v *= &pr;
    }
    if e < 0 {
        Rat::one() / v
    } else {
        v
    }
}

/// A Möbius transformation acting on the root sphere, stored numerically.
#[derive(Clone, Copy, Debug)]
pub struct MoebiusMap {
    pub m: [[Complex64; 2]; 2],
}

/// A point of the Riemann sphere: a finite complex number or infinity.
#[derive(Clone, Copy, Debug)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    fn chordal(self, other: SpherePoint) -> f64 {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
            (SpherePoint::Infinity, SpherePoint::Finite(q))
            | (SpherePoint::Finite(q), SpherePoint::Infinity) => {
                2.0 / (1.0 + q.norm_sqr()).sqrt()
            }
            (SpherePoint::Finite(p), SpherePoint::Finite(q)) => {
                2.0 * (p - q).norm() / ((1.0 + p.norm_sqr()) * (1.0 + q.norm_sqr())).sqrt()
            }
        }
    }
}

impl MoebiusMap {
    fn apply(&self, p: SpherePoint) -> SpherePoint {
        let (num, den) = match p {
            SpherePoint::Finite(z) => (self.m[0][0] * z + self.m[0][1], self.m[1][0] * z + self.m[1][1]),
            SpherePoint::Infinity => (self.m[0][0], self.m[1][0]),
        };
        if den.norm() <= 1e-13 * num.norm().max(1.0) {
            SpherePoint::Infinity
        } else {
            SpherePoint::Finite(num / den)
        }
    }

    fn compose(&self, o: &MoebiusMap) -> MoebiusMap {
        let a = &self.m;
        let b = &o.m;
        MoebiusMap {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }

    fn inverse(&self) -> MoebiusMap {
        let a = &self.m;
        MoebiusMap {
            m: [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]],
        }
    }

    /// Matrix sending (p1, p2, p3) to (0, 1, infinity).
    fn to_standard(p1: SpherePoint, p2: SpherePoint, p3: SpherePoint) -> MoebiusMap {
        use SpherePoint::*;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match (p1, p2, p3) {
            (Infinity, Finite(b), Finite(c)) => MoebiusMap { m: [[zero, b - c], [one, -c]] },
            (Finite(a), Infinity, Finite(c)) => MoebiusMap { m: [[one, -a], [one, -c]] },
            (Finite(a), Finite(b), Infinity) => MoebiusMap { m: [[one, -a], [zero, b - a]] },
            (Finite(a), Finite(b), Finite(c)) => MoebiusMap {
                m: [[b - c, -a * (b - c)], [b - a, -c * (b - a)]],
            },
            _ => unreachable!("two equal projective points"),
        }
    }
}

/// Root multiset of a sextic on the sphere: finite roots plus the root at
/// infinity when the leading coefficient vanishes.
fn sphere_roots(f: &BinaryForm, tol: f64) -> Result<Vec<SpherePoint>> {
    let n = f.degree();
    let inf = f.infinity_multiplicity();
    if inf > 1 {
        return Err(Error::NonSquarefree);
    }
    let mut cs = f.coeffs().to_vec();
    for _ in 0..inf {
        cs.pop();
    }
    let g = BinaryForm::new(cs)?;
    let mut pts: Vec<SpherePoint> = if g.degree() >= 1 {
        complex_roots(&g, tol)?
            .roots
            .iter()
            .map(|&z| SpherePoint::Finite(z))
            .collect()
    } else {
        Vec::new()
    };
    for _ in 0..inf {
        pts.push(SpherePoint::Infinity);
    }
    if pts.len() != n {
        return Err(Error::Anomaly("root count mismatch".into()));
    }
    Ok(pts)
}

/// All Möbius transformations permuting the 6-root multiset: for each
/// ordered triple of distinct roots, the unique map sending the base triple
/// there is kept when it permutes all roots within tolerance. Each group
/// element is determined by its image triple, so the valid triples count the
/// group exactly.
pub fn reduced_automorphisms(f: &BinaryForm) -> Result<Vec<MoebiusMap>> {
    if f.degree() != 6 {
        return Err(Error::WrongDegree {
            expected: "6".into(),
            got: f.degree(),
        });
    }
    for tol in [1e-7, 1e-9] {
        let pts = sphere_roots(f, 1e-12)?;
        let maps = automorphism_maps(&pts, tol);
        let order = maps.len();
        if group_closed(&pts, &maps, tol) && AutLabel::from_order(2 * order).is_some() {
            return Ok(maps);
        }
    }
    Err(Error::Anomaly(
        "automorphism search failed at both tolerances".into(),
    ))
}

fn automorphism_maps(pts: &[SpherePoint], tol: f64) -> Vec<MoebiusMap> {
    let base = MoebiusMap::to_standard(pts[0], pts[1], pts[2]);
    let n = pts.len();
    let mut maps = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let target = MoebiusMap::to_standard(pts[i], pts[j], pts[k]);
                let m = target.inverse().compose(&base);
                if permutes(pts, &m, tol) {
                    maps.push(m);
                }
            }
        }
    }
    maps
}

fn permutes(pts: &[SpherePoint], m: &MoebiusMap, tol: f64) -> bool {
    let mut used = vec![false; pts.len()];
    for &p in pts {
        let im = m.apply(p);
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, &q) in pts.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = im.chordal(q);
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        if best == usize::MAX || best_d > tol {
            return false;
        }
        used[best] = true;
    }
    true
}

fn group_closed(pts: &[SpherePoint], maps: &[MoebiusMap], tol: f64) -> bool {
    // spot-check closure on a bounded number of products
    let k = maps.len();
    for i in 0..k.min(8) {
        for j in 0..k.min(8) {
            let prod = maps[i].compose(&maps[j]);
            if !permutes(pts, &prod, tol * 10.0) {
                return false;
            }
        }
        let inv = maps[i].inverse();
        if !permutes(pts, &inv, tol * 10.0) {
            return false;
        }
    }
    true
}

/// Automorphism label: |Aut| = 2 |reduced group|.
pub fn aut_label(f: &BinaryForm) -> Result<AutLabel> {
    let maps = reduced_automorphisms(f)?;
    AutLabel::from_order(2 * maps.len()).ok_or_else(|| {
        Error::Anomaly(format!(
            "reduced automorphism group of order {} is outside the genus-2 classification",
            maps.len()
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::LinearMap;

    fn fam(a: i64, b: i64) -> BinaryForm {
        BinaryForm::from_integers(&[1, 0, b, 0, a, 0, 1])
    }

    #[test]
    fn igusa_j10_is_discriminant() {
        let f = fam(1, -7);
        let inv = igusa(&f).unwrap();
        assert_eq!(inv.j10, f.discriminant().unwrap());
        // repeated roots: (1,-1,-1,1) pattern
        let g = BinaryForm::from_integers(&[1, 0, -1, 0, -1, 0, 1]);
        assert!(igusa(&g).unwrap().j10.is_zero());
        // a genuine curve from the tables
        assert!(!igusa(&fam(-5, -5)).unwrap().j10.is_zero());
    }

    #[test]
    fn weighted_transformation_law() {
        let f = BinaryForm::from_integers(&[3, 1, -2, 5, 0, -1, 2]);
        let lam = Rat::new(Int::from(3), Int::from(2));
        let m = LinearMap::new(lam.clone(), Rat::zero(), Rat::zero(), Rat::one()).unwrap();
        let a = igusa(&f).unwrap();
        let b = igusa(&f.transform(&m)).unwrap();
        // det = lam, invariant of weight w scales by lam^w
        let pw = |e: i64| -> Rat {
            let mut v = Rat::one();
            for _ in 0..e {
                v *= &lam;
            }
            v
        };
        assert_eq!(b.j2, a.j2 * pw(6));
        assert_eq!(b.j4, a.j4 * pw(12));
        assert_eq!(b.j6, a.j6 * pw(18));
        assert_eq!(b.j10, a.j10 * pw(30));
    }

    #[test]
    fn moduli_key_scaling_invariance() {
        let f = fam(3, 11);
        let inv = igusa(&f).unwrap();
        let scaled = Genus2Invariants {
            j2: &inv.j2 * Rat::from_integer(Int::from(4)),
            j4: &inv.j4 * Rat::from_integer(Int::from(16)),
            j6: &inv.j6 * Rat::from_integer(Int::from(64)),
            j10: &inv.j10 * Rat::from_integer(Int::from(1024)),
        };
        assert_eq!(moduli_key(&inv).unwrap(), moduli_key(&scaled).unwrap());
        // and with a negative rational mu = -3/2: flips J2, J6, J10
        let neg = Genus2Invariants {
            j2: &inv.j2 * Rat::new(Int::from(-3), Int::from(2)),
            j4: &inv.j4 * Rat::new(Int::from(9), Int::from(4)),
            j6: &inv.j6 * Rat::new(Int::from(-27), Int::from(8)),
            j10: &inv.j10 * Rat::new(Int::from(-243), Int::from(32)),
        };
        assert_eq!(moduli_key(&inv).unwrap(), moduli_key(&neg).unwrap());
    }

    #[test]
    fn moduli_key_gl2_equivariance() {
        let f = fam(-9, 4);
        let m = LinearMap::from_integers(2, 3, 1, 2).unwrap();
        let g = f.transform(&m);
        let k1 = moduli_key(&igusa(&f).unwrap()).unwrap();
        let k2 = moduli_key(&igusa(&g).unwrap()).unwrap();
        assert_eq!(k1, k2);
    }

    #[test]
    fn table_twin_pairs() {
        // height-4 twist pairs share keys
        let pairs: [(BinaryForm, BinaryForm); 2] = [
            (fam(1, -7), BinaryForm::from_integers(&[1, -3, -1, -2, -1, -3, 1])),
            (fam(-33, -33), BinaryForm::from_integers(&[-2, 0, 3, 0, 3, 0, -2])),
        ];
        for (a, b) in &pairs {
            let ka = moduli_key(&igusa(a).unwrap()).unwrap();
            let kb = moduli_key(&igusa(b).unwrap()).unwrap();
            assert_eq!(ka, kb);
        }
    }

    #[test]
    fn aut_labels_from_tables() {
        assert_eq!(aut_label(&fam(1, -7)).unwrap(), AutLabel::V4);
        assert_eq!(aut_label(&fam(-29, -29)).unwrap(), AutLabel::D4);
        assert_eq!(aut_label(&fam(-5, -5)).unwrap(), AutLabel::G48);
        assert_eq!(aut_label(&fam(0, 0)).unwrap(), AutLabel::G24);
    }

    #[test]
    fn aut_label_of_quintic_homogenized() {
        // x^5 - x as a sextic with a root at infinity: octahedral config
        let f = BinaryForm::from_integers(&[0, -1, 0, 0, 0, 1, 0]);
        assert_eq!(aut_label(&f).unwrap(), AutLabel::G48);
    }

    #[test]
    fn reduced_automorphisms_even_generic() {
        let f = fam(2, -7);
        let maps = reduced_automorphisms(&f).unwrap();
        assert_eq!(maps.len(), 2); // identity and x -> -x
    }

    #[test]
    fn d4_d6_families_labelled() {
        use crate::covariants::{family_d4, family_d6};
        let alpha = Rat::new(Int::from(3), Int::from(2));
        let f = family_d4(&alpha).unwrap();
        assert_eq!(aut_label(&f).unwrap(), AutLabel::D4);
        let lam = Rat::new(Int::from(5), Int::from(3));
        let g = family_d6(&lam).unwrap();
        assert_eq!(aut_label(&g).unwrap(), AutLabel::D6);
    }
}
