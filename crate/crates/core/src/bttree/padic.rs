use std::fmt;

use crate::arith::{APoly, Poly};
use crate::error::{Error, Result};

/// A truncated element p^shift * unit of k_p, known modulo p^prec.
/// `unit` has degree < (prec - shift) deg p and is prime to p unless it is 0,
/// in which case shift == prec.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    p: APoly,
    shift: i64,
    unit: APoly,
    prec: i64,
}

fn modulus(p: &APoly, len: i64) -> APoly {
    p.pow(len.max(0) as u64)
}

impl PadicScalar {
    fn build(p: &APoly, mut shift: i64, unit: APoly, prec: i64) -> Self {
        let mut unit = unit.rem(&modulus(p, prec - shift));
        if unit.is_zero() {
            return PadicScalar { p: p.clone(), shift: prec, unit, prec };
        }
        while let Some(u) = unit.div_exact(p) {
            unit = u;
            shift += 1;
        }
        PadicScalar { p: p.clone(), shift, unit, prec }
    }

    pub fn zero(p: &APoly, prec: i64) -> Self {
        PadicScalar { p: p.clone(), shift: prec, unit: Poly::zero(p.field()), prec }
    }

    /// The image of a in k_p, known mod p^prec.
    pub fn from_poly(p: &APoly, a: &APoly, prec: i64) -> Self {
        Self::build(p, 0, a.clone(), prec)
    }

    /// num/den in k_p, known mod p^prec.
    pub fn from_rational(p: &APoly, num: &APoly, den: &APoly, prec: i64) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut d = den.clone();
        let mut vd = 0;
        while let Some(x) = d.div_exact(p) {
            d = x;
            vd += 1;
        }
        let n = Self::from_poly(p, num, prec + vd);
        let len = n.prec - n.shift;
        let inv = d.inv_mod(&modulus(p, len)).unwrap_or_else(|| Poly::zero(p.field()));
        Ok(Self::build(p, n.shift - vd, n.unit.mul(&inv), n.prec - vd))
    }

    /// p^k exactly, known mod p^prec.
    pub fn p_power(p: &APoly, k: i64, prec: i64) -> Self {
        Self::build(p, k, Poly::one(p.field()), prec)
    }

    pub fn prime(&self) -> &APoly {
        &self.p
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// The valuation, if it is visible at this precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.shift)
    }

    /// Lower bound for the valuation (the precision when indistinguishable from 0).
    pub fn min_valuation(&self) -> i64 {
        self.shift
    }

    pub fn with_precision(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        Self::build(&self.p, self.shift, self.unit.clone(), prec)
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let s = self.shift.min(o.shift).min(prec);
        let lift = |x: &Self| {
            if x.shift >= prec {
                Poly::zero(self.p.field())
            } else {
                x.unit.mul(&modulus(&self.p, x.shift - s))
            }
        };
        Self::build(&self.p, s, lift(self).add(&lift(o)), prec)
    }

    pub fn neg(&self) -> Self {
        PadicScalar { unit: self.unit.neg(), ..self.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let shift = self.shift + o.shift;
        let prec = (self.shift + o.prec).min(o.shift + self.prec);
        Self::build(&self.p, shift, self.unit.mul(&o.unit), prec)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Precision { needed: self.prec + 1, have: self.prec });
        }
        let len = self.prec - self.shift;
        let u = self.unit.inv_mod(&modulus(&self.p, len)).expect("unit");
        Ok(Self::build(&self.p, -self.shift, u, len - self.shift))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// Digits d_i (deg < deg p) with self = sum_{i = shift}^{prec-1} d_i p^i.
    pub fn digits(&self) -> (i64, Vec<APoly>) {
        let mut out = Vec::new();
        let mut u = self.unit.clone();
        for _ in self.shift..self.prec {
            let (q, r) = u.div_rem(&self.p);
            out.push(r);
            u = q;
        }
        (self.shift, out)
    }

    /// The stored representative, taken as exact and re-read mod p^prec
    /// for a larger prec.
    pub fn lift(&self, prec: i64) -> Self {
        Self::build(&self.p, self.shift, self.unit.clone(), prec.max(self.prec))
    }

    /// The representative sum_{shift <= i < prec} d_i p^i reduced further mod p^n.
    pub fn reduce_mod(&self, n: i64) -> Self {
        if n >= self.prec {
            return self.clone();
        }
        if self.shift >= n {
            return Self::zero(&self.p, n);
        }
        Self::build(&self.p, self.shift, self.unit.clone(), n)
    }

    /// p^shift * unit as an element of A if shift >= 0.
    pub fn to_poly(&self) -> Option<APoly> {
        (self.shift >= 0).then(|| self.unit.mul(&modulus(&self.p, self.shift)))
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (v, ds) = self.digits();
        let ds: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
        write!(f, "{}@{}", ds.join(","), v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Fq;
    use proptest::prelude::*;

    fn p(f: &Fq, s: &str) -> APoly {
        APoly::parse(f, s).unwrap()
    }

    #[test]
    fn valuations_and_digits() {
        let f = Fq::new(3, 1).unwrap();
        let pr = p(&f, "T^2+1");
        let x = PadicScalar::from_poly(&pr, &p(&f, "T^4+2*T^2+1"), 5);
        assert_eq!(x.valuation(), Some(2));
        let (v, ds) = x.digits();
        assert_eq!(v, 2);
        assert!(ds[0].is_one() && ds[1..].iter().all(|d| d.is_zero()));
        let y = PadicScalar::from_rational(&pr, &p(&f, "T"), &pr, 4).unwrap();
        assert_eq!(y.valuation(), Some(-1));
        assert_eq!(y.precision(), 4);
        let z = PadicScalar::from_poly(&pr, &pr.pow(6), 4);
        assert!(z.is_zero());
        assert!(z.inv().is_err());
    }

    proptest! {
        #[test]
        fn field_operations(a in prop::collection::vec(0u32..3, 0..6),
                            b in prop::collection::vec(0u32..3, 1..6)) {
            let f = Fq::new(3, 1).unwrap();
            let pr = p(&f, "T+1");
            let a = Poly::new(&f, a);
            let b = Poly::new(&f, b);
            prop_assume!(!b.is_zero());
            let prec = 6;
            let x = PadicScalar::from_poly(&pr, &a, prec);
            let y = PadicScalar::from_poly(&pr, &b, prec);
            let ab = PadicScalar::from_poly(&pr, &a.mul(&b), prec);
            prop_assert_eq!(x.mul(&y).with_precision(prec), ab);
            let sum = PadicScalar::from_poly(&pr, &a.add(&b), prec);
            prop_assert_eq!(x.add(&y), sum);
            let q = x.div(&y).unwrap();
            let r = PadicScalar::from_rational(&pr, &a, &b, prec).unwrap();
            let common = q.precision().min(r.precision());
            prop_assert_eq!(q.with_precision(common), r.with_precision(common));
        }
    }
}
