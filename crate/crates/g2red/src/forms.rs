//! Exact arithmetic on binary forms.
//!
//! A binary form of degree `n` is a homogeneous polynomial
//! `f(x, z) = a_0 z^n + a_1 x z^(n-1) + ... + a_n x^n` with rational
//! coefficients. Coefficients are stored in ascending powers of `x`
//! everywhere in this crate; the text syntax `"a0,a1,...,an"` follows the
//! same order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Binary form with exact rational coefficients, ascending powers of `x`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    coeffs: Vec<Rat>,
}

/// A 2x2 rational matrix with nonzero determinant, acting on forms by
/// substitution `f^M = f(a x + b z, c x + d z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

/// An element of SL2(Z) / {±I}, normalized so that the first nonzero entry
/// of the column (a, c) is positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMap {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

fn rat_i(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

impl BinaryForm {
    /// Build a form from ascending coefficients. The vector length fixes the
    /// degree as `len - 1`; at least one coefficient must be nonzero.
    pub fn new(coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() < 2 {
            return Err(Error::ZeroForm);
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroForm);
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        BinaryForm::new(coeffs.iter().map(|&c| rat_i(c)).collect()).expect("nonzero coefficients")
    }

    pub fn from_ints(coeffs: &[Int]) -> Result<Self> {
        BinaryForm::new(coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^i z^(n-i)`.
    pub fn coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Leading coefficient in `x` (the coefficient of `x^n`).
    pub fn lead(&self) -> &Rat {
        self.coeffs.last().unwrap()
    }

    /// Trailing coefficient (of `z^n`).
    pub fn trail(&self) -> &Rat {
        &self.coeffs[0]
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    /// Degree drop in `x`: number of leading zero coefficients, i.e. the
    /// multiplicity of the root at infinity.
    pub fn infinity_multiplicity(&self) -> usize {
        self.coeffs.iter().rev().take_while(|c| c.is_zero()).count()
    }

    /// `f(-z, x)`: reverses the coefficient vector with alternating signs.
    pub fn reverse(&self) -> BinaryForm {
        let n = self.degree();
        let coeffs = (0..=n)
            .map(|i| {
                let c = self.coeffs[n - i].clone();
                if i % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect();
        BinaryForm { coeffs }
    }

    /// Substitute `x -> -x`.
    pub fn negate_x(&self) -> BinaryForm {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
            .collect();
        BinaryForm { coeffs }
    }

    pub fn scale(&self, c: &Rat) -> Result<BinaryForm> {
        if c.is_zero() {
            return Err(Error::ZeroForm);
        }
        Ok(BinaryForm {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        })
    }

    /// `f(a x + b z, c x + d z)`, expanded exactly.
    pub fn transform(&self, m: &LinearMap) -> BinaryForm {
        let n = self.degree();
        let mut out = vec![Rat::zero(); n + 1];
        // (a x + b z)^i and (c x + d z)^(n-i) by running binomial rows
        let pow_ab = binomial_powers(&m.a, &m.b, n);
        let pow_cd = binomial_powers(&m.c, &m.d, n);
        for (i, ci) in self.coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let t1 = &pow_ab[i];
            let t2 = &pow_cd[n - i];
            for (k1, v1) in t1.iter().enumerate() {
                if v1.is_zero() {
                    continue;
                }
                for (k2, v2) in t2.iter().enumerate() {
                    if v2.is_zero() {
                        continue;
                    }
                    out[k1 + k2] += ci * v1 * v2;
                }
            }
        }
        BinaryForm { coeffs: out }
    }

    pub fn transform_unimodular(&self, m: &UnimodularMap) -> BinaryForm {
        self.transform(&m.to_linear())
    }

    /// Shift `x -> x + k z`.
    pub fn shift(&self, k: i64) -> BinaryForm {
        self.transform(&LinearMap::new(rat_i(1), rat_i(k), rat_i(0), rat_i(1)).unwrap())
    }

    /// Partial derivative with respect to `x` (degree drops by one).
    pub fn deriv_x(&self) -> Vec<Rat> {
        (1..self.coeffs.len())
            .map(|i| &self.coeffs[i] * rat_i(i as i64))
            .collect()
    }

    /// Partial derivative with respect to `z` (degree drops by one).
    pub fn deriv_z(&self) -> Vec<Rat> {
        let n = self.degree();
        (0..n)
            .map(|i| &self.coeffs[i] * rat_i((n - i) as i64))
            .collect()
    }

    /// Discriminant with the normalization pinned by
    /// `disc(f^M) = (det M)^(d(d-1)) disc(f)`. Computed as
    /// `(-1)^(d(d-1)/2) Res(f_x, f_z) / d^(d-2)`, which needs no division by
    /// the leading coefficient and so also covers forms with a root at
    /// infinity.
    pub fn discriminant(&self) -> Result<Rat> {
        let d = self.degree();
        if d < 2 {
            return Err(Error::WrongDegree {
                expected: "at least 2".into(),
                got: d,
            });
        }
        let fx = self.deriv_x();
        let fz = self.deriv_z();
        let res = resultant(&fx, &fz, d - 1, d - 1);
        let mut dd = Int::one();
        for _ in 0..d - 2 {
            dd *= Int::from(d as i64);
        }
        let sign = if (d * (d - 1) / 2) % 2 == 1 { -1 } else { 1 };
        Ok(res * rat_i(sign) / Rat::from_integer(dd))
    }

    /// Content and primitive part: `f = c * g` with `g` integral and
    /// primitive, `c > 0`, and the leading nonzero coefficient of `g`
    /// keeping the sign it has in `f`.
    pub fn content_and_primitive(&self) -> (Rat, BinaryForm) {
        let mut den = Int::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let mut num = Int::zero();
        for c in &self.coeffs {
            num = num.gcd(&(c.numer() * &den / c.denom()));
        }
        let content = Rat::new(num.clone(), den.clone());
        let g = BinaryForm {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c / &content)
                .collect(),
        };
        (content, g)
    }

    /// Max absolute value of the coefficients of an integral form.
    pub fn height(&self) -> Result<Int> {
        if !self.is_integral() {
            return Err(Error::NonIntegral);
        }
        Ok(self
            .coeffs
            .iter()
            .map(|c| c.numer().abs())
            .max()
            .unwrap())
    }

    /// If all odd coefficients vanish, the form `g` with `f(x,z) = g(x^2, z^2)`.
    pub fn even_part(&self) -> Option<BinaryForm> {
        if self.degree() % 2 != 0 {
            return None;
        }
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        Some(BinaryForm {
            coeffs: self.coeffs.iter().step_by(2).cloned().collect(),
        })
    }

    /// Evaluate `f(t, 1)` exactly.
    pub fn eval_rat(&self, t: &Rat) -> Rat {
        let mut v = Rat::zero();
        for c in self.coeffs.iter().rev() {
            v = v * t + c;
        }
        v
    }

    /// Text syntax `a0,a1,...,an`.
    pub fn parse(s: &str) -> Result<Self> {
        let coeffs: Result<Vec<Rat>> = s
            .split(',')
            .map(|t| {
                let t = t.trim();
                parse_rat(t).ok_or_else(|| Error::Parse(format!("bad coefficient '{t}'")))
            })
            .collect();
        BinaryForm::new(coeffs?)
    }
}

fn parse_rat(t: &str) -> Option<Rat> {
    if let Some((n, d)) = t.split_once('/') {
        let n = Int::from_str(n.trim()).ok()?;
        let d = Int::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rat::new(n, d))
    } else {
        Some(Rat::from_integer(Int::from_str(t).ok()?))
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Rows of coefficients of `(p x + q z)^k` for `k = 0..=n`, ascending in `x`.
fn binomial_powers(p: &Rat, q: &Rat, n: usize) -> Vec<Vec<Rat>> {
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(n + 1);
    rows.push(vec![Rat::one()]);
    for k in 1..=n {
        let prev = &rows[k - 1];
        let mut row = vec![Rat::zero(); k + 1];
        for (j, v) in prev.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            row[j] += v * q;
            row[j + 1] += v * p;
        }
        rows.push(row);
    }
    rows
}

/// Resultant of two binary forms given by ascending coefficient vectors,
/// treated as forms of the stated degrees (zero-padded as needed).
pub fn resultant(g: &[Rat], h: &[Rat], m: usize, n: usize) -> Rat {
    let size = m + n;
    let mut mat = vec![vec![Rat::zero(); size]; size];
    // descending coefficient vectors padded to the nominal degrees
    let gd: Vec<Rat> = (0..=m).map(|i| g.get(m - i).cloned().unwrap_or_else(Rat::zero)).collect();
    let hd: Vec<Rat> = (0..=n).map(|i| h.get(n - i).cloned().unwrap_or_else(Rat::zero)).collect();
    for r in 0..n {
        for (j, c) in gd.iter().enumerate() {
            mat[r][r + j] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in hd.iter().enumerate() {
            mat[n + r][r + j] = c.clone();
        }
    }
    det_bareiss(mat)
}

/// Exact determinant by fraction-free Bareiss elimination after clearing
/// denominators.
fn det_bareiss(mat: Vec<Vec<Rat>>) -> Rat {
    let n = mat.len();
    if n == 0 {
        return Rat::one();
    }
    let mut den = Int::one();
    for row in &mat {
        for e in row {
            den = den.lcm(e.denom());
        }
    }
    let mut m: Vec<Vec<Int>> = mat
        .iter()
        .map(|row| row.iter().map(|e| e.numer() * &den / e.denom()).collect())
        .collect();
    let mut sign = 1i64;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Rat::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone() * Int::from(sign);
    let mut scale = Rat::one();
    let denr = Rat::from_integer(den);
    for _ in 0..n {
        scale /= &denr;
    }
    Rat::from_integer(det) * scale
}

impl LinearMap {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if det.is_zero() {
            return Err(Error::SingularMap);
        }
        Ok(LinearMap { a, b, c, d })
    }

    pub fn from_integers(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        LinearMap::new(rat_i(a), rat_i(b), rat_i(c), rat_i(d))
    }

    pub fn det(&self) -> Rat {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn inverse(&self) -> LinearMap {
        let det = self.det();
        LinearMap {
            a: &self.d / &det,
            b: -&self.b / &det,
            c: -&self.c / &det,
            d: &self.a / &det,
        }
    }

    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    pub fn diagonal(u: Rat, v: Rat) -> Result<Self> {
        LinearMap::new(u, Rat::zero(), Rat::zero(), v)
    }
}

impl UnimodularMap {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a.checked_mul(d)
            .zip(b.checked_mul(c))
            .and_then(|(ad, bc)| ad.checked_sub(bc))
            != Some(1)
        {
            return Err(Error::SingularMap);
        }
        let mut m = UnimodularMap { a, b, c, d };
        m.normalize();
        Ok(m)
    }

    pub fn identity() -> Self {
        UnimodularMap { a: 1, b: 0, c: 0, d: 1 }
    }

    /// `x -> x + k z` on the upper half-plane side acts as `w -> w + k`.
    pub fn translation(k: i64) -> Self {
        UnimodularMap { a: 1, b: k, c: 0, d: 1 }
    }

    /// The inversion `w -> -1/w`.
    pub fn inversion() -> Self {
        UnimodularMap { a: 0, b: -1, c: 1, d: 0 }
    }

    fn normalize(&mut self) {
        let flip = if self.a != 0 { self.a < 0 } else { self.c < 0 };
        if flip {
            self.a = -self.a;
            self.b = -self.b;
            self.c = -self.c;
            self.d = -self.d;
        }
    }

    pub fn compose(&self, other: &UnimodularMap) -> Self {
        let mut m = UnimodularMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        };
        m.normalize();
        m
    }

    pub fn inverse(&self) -> Self {
        let mut m = UnimodularMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        };
        m.normalize();
        m
    }

    pub fn to_linear(&self) -> LinearMap {
        LinearMap {
            a: rat_i(self.a),
            b: rat_i(self.b),
            c: rat_i(self.c),
            d: rat_i(self.d),
        }
    }

    /// Möbius action `w -> (a w + b) / (c w + d)`.
    pub fn moebius(&self, w: num_complex::Complex64) -> num_complex::Complex64 {
        let (a, b, c, d) = (self.a as f64, self.b as f64, self.c as f64, self.d as f64);
        (a * w + b) / (c * w + d)
    }
}

impl fmt::Display for UnimodularMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(cs: &[i64]) -> BinaryForm {
        BinaryForm::from_integers(cs)
    }

    #[test]
    fn transform_identity() {
        let q = f(&[1, 0, 1]); // x^2 + z^2
        let id = LinearMap::from_integers(1, 0, 0, 1).unwrap();
        assert_eq!(q.transform(&id), q);
    }

    #[test]
    fn transform_shift_expands() {
        // x^2 - z^2 under x -> x + z gives x^2 + 2xz
        let q = f(&[-1, 0, 1]);
        let m = LinearMap::from_integers(1, 1, 0, 1).unwrap();
        assert_eq!(q.transform(&m), f(&[0, 2, 1]));
    }

    #[test]
    fn discriminant_quadratics() {
        assert!(!f(&[1, 0, 1]).discriminant().unwrap().is_zero());
        // (x + z)^2
        assert!(f(&[1, 2, 1]).discriminant().unwrap().is_zero());
        // b^2 - 4ac convention
        let q = f(&[3, 1, 2]); // 2x^2 + xz + 3z^2
        assert_eq!(q.discriminant().unwrap(), rat_i(1 - 24));
    }

    #[test]
    fn discriminant_repeated_roots_sextic() {
        // (x^2 - z^2)^2 (x^2 + z^2)
        let s = f(&[1, 0, -1, 0, -1, 0, 1]);
        assert!(s.discriminant().unwrap().is_zero());
    }

    #[test]
    fn discriminant_transformation_law() {
        let s = f(&[3, -1, 4, 1, -5, 9, 2]);
        let m = LinearMap::from_integers(2, 1, 3, 2).unwrap(); // det 1
        let d1 = s.discriminant().unwrap();
        let d2 = s.transform(&m).discriminant().unwrap();
        assert_eq!(d1, d2);
        let m2 = LinearMap::from_integers(2, 0, 0, 1).unwrap(); // det 2
        let d3 = s.transform(&m2).discriminant().unwrap();
        let mut pow = Rat::one();
        for _ in 0..30 {
            pow *= rat_i(2);
        }
        assert_eq!(d3, d1 * pow);
    }

    #[test]
    fn content_examples() {
        let (c, g) = f(&[4, 0, 2]).content_and_primitive();
        assert_eq!(c, rat_i(2));
        assert_eq!(g, f(&[2, 0, 1]));

        let q = BinaryForm::parse("1,0,1/3").unwrap(); // (1/3)x^2 + z^2
        let (c, g) = q.content_and_primitive();
        assert_eq!(c, Rat::new(Int::from(1), Int::from(3)));
        assert_eq!(g, f(&[3, 0, 1]));

        let (c, g) = f(&[-9, 0, -6]).content_and_primitive();
        assert_eq!(c, rat_i(3));
        assert_eq!(g, f(&[-3, 0, -2]));
    }

    #[test]
    fn reverse_examples() {
        // x^6 + a z^6 -> a x^6 + z^6
        let s = f(&[7, 0, 0, 0, 0, 0, 1]);
        assert_eq!(s.reverse(), f(&[1, 0, 0, 0, 0, 0, 7]));
        // x^6 + s2 x^2 z^4 - s1 x^4 z^2 - z^6 reversed
        let s = f(&[-1, 0, 5, 0, -3, 0, 1]);
        assert_eq!(s.reverse(), f(&[1, 0, -3, 0, 5, 0, -1]));
        let s = f(&[2, 1, -3, 4, -3, 1, 2]);
        assert_eq!(s.reverse().reverse(), s);
    }

    #[test]
    fn height_and_parse() {
        let s = BinaryForm::parse("25,0,36,2,13,2,2").unwrap();
        assert_eq!(s.height().unwrap(), Int::from(36));
        assert_eq!(f(&[1, 0, 0, 0, 0, 0, 1]).height().unwrap(), Int::from(1));
        assert_eq!(
            f(&[1, 0, -33, 0, -33, 0, 1]).height().unwrap(),
            Int::from(33)
        );
        assert!(BinaryForm::parse("1,1/2,1").unwrap().height().is_err());
    }

    #[test]
    fn even_part_examples() {
        let s = f(&[1, 0, 5, 0, 7, 0, 1]);
        assert_eq!(s.even_part().unwrap(), f(&[1, 5, 7, 1]));
        assert!(f(&[0, 0, 0, 0, 0, 1, 1]).even_part().is_none());
        let s = f(&[1, 0, -5, 0, -5, 0, 1]);
        assert_eq!(s.even_part().unwrap(), f(&[1, -5, -5, 1]));
    }

    #[test]
    fn paper_scale_example_transform() {
        // x^6 + 36 x^4 - 10 x^3 + 325 x^2 - 250 x + 1250 under x -> 5x,
        // then content removal, reaches height 36.
        let s = f(&[1250, -250, 325, -10, 36, 0, 1]);
        let m = LinearMap::from_integers(5, 0, 0, 1).unwrap();
        let (_, g) = s.transform(&m).content_and_primitive();
        assert_eq!(g, f(&[2, -2, 13, -2, 36, 0, 25]));
        assert_eq!(g.height().unwrap(), Int::from(36));
    }

    #[test]
    fn right_action_property() {
        let s = f(&[3, 1, -2, 7, 0, -1, 5]);
        let m = LinearMap::from_integers(1, 2, 1, 3).unwrap();
        let n = LinearMap::from_integers(2, -1, 1, 1).unwrap();
        let lhs = s.transform(&m.compose(&n));
        let rhs = s.transform(&m).transform(&n);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn unimodular_normalization() {
        let m = UnimodularMap::new(-1, 0, 5, -1).unwrap();
        assert!(m.a > 0);
        let m = UnimodularMap::new(0, -1, 1, 0).unwrap();
        assert_eq!((m.a, m.b, m.c, m.d), (0, -1, 1, 0));
        assert!(UnimodularMap::new(1, 1, 1, 1).is_err());
    }
}
