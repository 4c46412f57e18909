//! Sparse multivariate polynomials over exact rationals.
//!
//! Just enough ring structure for exact covariant computations: the
//! coefficients of binary forms whose entries are themselves polynomials in
//! parameters (generic form coefficients, family parameters), with exact
//! division for covariant extraction.

use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

use crate::forms::{Int, Rat};

/// Monomial exponent vector; the variable count is fixed per computation.
pub type Expo = Vec<u32>;

/// Polynomial in several variables with rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    pub nvars: usize,
    terms: BTreeMap<Expo, Rat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn from_i64(nvars: usize, c: i64) -> Self {
        MPoly::constant(nvars, Rat::from_integer(Int::from(c)))
    }

    pub fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = 1;
        let mut p = MPoly::zero(nvars);
        p.terms.insert(e, Rat::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Rat)> {
        self.terms.iter()
    }

    fn insert(&mut self, e: Expo, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let nv = o.get() + &c;
                if nv.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = nv;
                }
            }
        }
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.insert(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Expo = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                r.insert(e, c1 * c2);
            }
        }
        r
    }

    pub fn mul_rat(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Leading term in the BTreeMap (lex) order.
    fn leading(&self) -> Option<(&Expo, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Exact division; `None` when the remainder is nonzero.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        let (dle, dlc) = d.leading().unwrap();
        let dle = dle.clone();
        let dlc = dlc.clone();
        let mut rem = self.clone();
        let mut quo = MPoly::zero(self.nvars);
        while !rem.is_zero() {
            let (rle, rlc) = rem.leading().unwrap();
            if !rle.iter().zip(dle.iter()).all(|(a, b)| a >= b) {
                return None;
            }
            let qe: Expo = rle.iter().zip(dle.iter()).map(|(a, b)| a - b).collect();
            let qc = rlc / &dlc;
            let mut t = MPoly::zero(self.nvars);
            t.terms.insert(qe, qc);
            rem = rem.sub(&t.mul(d));
            quo = quo.add(&t);
        }
        Some(quo)
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut total = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &ex) in e.iter().enumerate() {
                for _ in 0..ex {
                    t *= &point[i];
                }
            }
            total += t;
        }
        total
    }

    /// Evaluate with integer inputs; exact, panics if the result is not an
    /// integer (callers use content-normalized integral polynomials).
    pub fn eval_int(&self, point: &[Int]) -> Int {
        let mut total = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = Int::one();
            for (i, &ex) in e.iter().enumerate() {
                for _ in 0..ex {
                    t *= &point[i];
                }
            }
            total += c * Rat::from_integer(t);
        }
        assert!(total.denom().is_one(), "non-integral evaluation");
        total.numer().clone()
    }

    /// Divide by the positive rational content, making the coefficients
    /// integral and primitive; sign is preserved.
    pub fn primitive_part(&self) -> MPoly {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut den = Int::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut num = Int::zero();
        for c in self.terms.values() {
            num = num.gcd(&(c.numer() * &den / c.denom()));
        }
        let content = Rat::new(num.abs(), den);
        self.mul_rat(&(Rat::one() / content))
    }

    /// Substitute each variable by a rational value partially: keep as poly.
    pub fn rename_into(&self, nvars: usize, map: &[usize]) -> MPoly {
        let mut r = MPoly::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; nvars];
            for (i, &ex) in e.iter().enumerate() {
                ne[map[i]] += ex;
            }
            r.insert(ne, c.clone());
        }
        r
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| if x == 1 { format!("v{i}") } else { format!("v{i}^{x}") })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_exact_div() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let a = x.mul(&x).sub(&y.mul(&y)); // x^2 - y^2
        let b = x.add(&y); // x + y
        let q = a.exact_div(&b).unwrap();
        assert_eq!(q, x.sub(&y));
        let c = x.add(&MPoly::from_i64(2, 1));
        assert!(a.exact_div(&c).is_none());
    }

    #[test]
    fn primitive_part_scales() {
        let x = MPoly::var(1, 0);
        let p = x.mul_rat(&Rat::new(Int::from(2), Int::from(3)))
            .add(&MPoly::constant(1, Rat::new(Int::from(4), Int::from(3))));
        let pp = p.primitive_part();
        assert_eq!(pp, x.add(&MPoly::from_i64(1, 2)));
    }
}
