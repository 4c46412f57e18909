//! Double-double arithmetic for root polishing.
//!
//! A value is represented as an unevaluated sum `hi + lo` of two doubles
//! with |lo| <= ulp(hi)/2, giving roughly 32 significant digits. Only the
//! operations needed for complex Newton iteration on polynomials are
//! provided.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact split of a big rational into hi + lo + (discarded < 1e-32 rel).
    pub fn from_rat(x: &crate::Rat) -> Dd {
        use num_traits::ToPrimitive;
        let hi = x.to_f64().unwrap_or(0.0);
        if !hi.is_finite() {
            return Dd { hi, lo: 0.0 };
        }
        let rest = x - crate::Rat::from_float(hi).unwrap_or_else(|| crate::Rat::from_integer(0.into()));
        let lo = rest.to_f64().unwrap_or(0.0);
        Dd { hi, lo }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from_f64(q1)));
        let q2 = r.hi / o.hi;
        let r2 = r.sub(o.mul(Dd::from_f64(q2)));
        let q3 = r2.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2 + q3);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Complex number with double-double real and imaginary parts.
#[derive(Clone, Copy, Debug)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub const ZERO: CDd = CDd { re: Dd::ZERO, im: Dd::ZERO };

    pub fn from_c64(z: Complex64) -> CDd {
        CDd { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(self, o: CDd) -> CDd {
        CDd { re: self.re.add(o.re), im: self.im.add(o.im) }
    }

    pub fn sub(self, o: CDd) -> CDd {
        CDd { re: self.re.sub(o.re), im: self.im.sub(o.im) }
    }

    pub fn mul(self, o: CDd) -> CDd {
        CDd {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn div(self, o: CDd) -> CDd {
        let d = o.re.mul(o.re).add(o.im.mul(o.im));
        let nre = self.re.mul(o.re).add(self.im.mul(o.im));
        let nim = self.im.mul(o.re).sub(self.re.mul(o.im));
        CDd { re: nre.div(d), im: nim.div(d) }
    }

    pub fn norm_f64(self) -> f64 {
        self.to_c64().norm()
    }
}

/// Evaluate a polynomial with double-double coefficients at a complex point.
pub fn horner(coeffs: &[Dd], z: CDd) -> CDd {
    let mut v = CDd::ZERO;
    for c in coeffs.iter().rev() {
        v = v.mul(z).add(CDd { re: *c, im: Dd::ZERO });
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dd_mul_precision() {
        // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60, captured exactly by hi+lo
        let x = Dd::from_f64(1.0).add(Dd::from_f64((2f64).powi(-30)));
        let y = x.mul(x);
        let expected_lo = (2f64).powi(-60);
        let got = y.sub(Dd::from_f64(1.0)).sub(Dd::from_f64((2f64).powi(-29)));
        assert!((got.to_f64() - expected_lo).abs() < 1e-25);
    }

    #[test]
    fn dd_div_roundtrip() {
        let a = Dd::from_f64(3.0);
        let b = Dd::from_f64(7.0);
        let q = a.div(b);
        let r = q.mul(b).sub(a);
        assert!(r.to_f64().abs() < 1e-30);
    }

    #[test]
    fn from_rat_split() {
        let r = crate::Rat::new(crate::Int::from(1), crate::Int::from(3));
        let d = Dd::from_rat(&r);
        // hi + lo approximates 1/3 to ~1e-32
        let back = d.hi as f64;
        assert!((back - 1.0 / 3.0).abs() < 1e-16);
        assert!(d.lo.abs() > 0.0);
    }
}
