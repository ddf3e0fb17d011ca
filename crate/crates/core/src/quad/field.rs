use std::fmt;

use num_bigint::BigUint;

use crate::arith::{APoly, ExtField, Field, Fq, Poly};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// deg D odd.
    Ramified,
    /// deg D even, leading coefficient a non-square.
    Inert,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Ramified => "ramified",
            Case::Inert => "inert",
        })
    }
}

/// Whether k(sqrt D) is imaginary, and how infinity behaves. D must be squarefree.
pub fn is_imaginary(d: &APoly) -> Result<Option<Case>> {
    if d.is_zero() || !d.is_squarefree() {
        return Err(Error::Invalid(format!("D = {d} is not squarefree")));
    }
    Ok(imaginary_case(d))
}

/// Case of an arbitrary nonzero discriminant (squarefree or not).
pub fn imaginary_case(d: &APoly) -> Option<Case> {
    let n = d.deg();
    if n < 0 {
        return None;
    }
    if n % 2 == 1 {
        Some(Case::Ramified)
    } else if !d.field().is_square_elem(*d.lead().unwrap()) {
        Some(Case::Inert)
    } else {
        None
    }
}

/// K = k(sqrt D), D squarefree with infinity not split.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ImagQuadField {
    d: APoly,
    case: Case,
}

impl ImagQuadField {
    pub fn new(d: &APoly) -> Result<Self> {
        match is_imaginary(d)? {
            Some(case) => Ok(ImagQuadField { d: d.clone(), case }),
            None => Err(Error::Invalid(format!("k(sqrt({d})) is not imaginary"))),
        }
    }

    pub fn d(&self) -> &APoly {
        &self.d
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn field(&self) -> &Fq {
        self.d.field()
    }

    pub fn genus(&self) -> usize {
        let n = self.d.deg() as usize;
        match self.case {
            Case::Ramified => (n - 1) / 2,
            Case::Inert => (n - 2) / 2,
        }
    }

    /// Points of y^2 = D(x) over F_{q^i}, including those at infinity.
    pub fn point_count(&self, i: usize) -> u64 {
        let l = ExtField::new(self.field(), i);
        let dl = self.d.map(&l, |&c| l.from_base(c));
        let e = (l.size() - 1u32) >> 1;
        let mut affine = 0u64;
        for x in l.elements() {
            let v = dl.eval(&x);
            if l.is_zero(&v) {
                affine += 1;
            } else if l.is_one(&l.pow(&v, &e)) {
                affine += 2;
            }
        }
        let infinity = match self.case {
            Case::Ramified => 1,
            Case::Inert if i % 2 == 0 => 2,
            Case::Inert => 0,
        };
        affine + infinity
    }

    /// Coefficients a_0..a_{2g} of the L-polynomial, from point counts.
    pub fn l_polynomial(&self) -> Vec<i128> {
        let g = self.genus();
        let q = self.field().q() as i128;
        let s: Vec<i128> =
            (1..=g).map(|i| q.pow(i as u32) + 1 - self.point_count(i) as i128).collect();
        let mut a = vec![1i128];
        for k in 1..=g {
            let sum: i128 = (1..=k).map(|i| a[k - i] * s[i - 1]).sum();
            debug_assert_eq!(sum % k as i128, 0);
            a.push(-sum / k as i128);
        }
        let mut full = a.clone();
        for i in g + 1..=2 * g {
            full.push(q.pow((i - g) as u32) * a[2 * g - i]);
        }
        full
    }

    /// h = #Pic^0 = P(1).
    pub fn class_number(&self) -> u128 {
        let h: i128 = self.l_polynomial().iter().sum();
        h as u128
    }

    /// #Pic(O_K): h times the degree of the place at infinity.
    pub fn class_number_ok(&self) -> u128 {
        match self.case {
            Case::Ramified => self.class_number(),
            Case::Inert => 2 * self.class_number(),
        }
    }
}

/// Hasse-Weil window ((sqrt q - 1)^{2g}, (sqrt q + 1)^{2g}).
pub fn hasse_weil(q: u32, g: usize) -> (f64, f64) {
    let r = (q as f64).sqrt();
    ((r - 1.0).powi(2 * g as i32), (r + 1.0).powi(2 * g as i32))
}

/// The lower bound (q-1)(q^{2g} - 2g q^g + 1) / (2g (q^{g+1} - 1)), rounded up;
/// 1 for g = 0.
pub fn boundh(q: u32, g: usize) -> BigUint {
    if g == 0 {
        return BigUint::from(1u32);
    }
    let q = BigUint::from(q);
    let g_big = BigUint::from(g);
    let qg = q.pow(g as u32);
    let num = (&q - 1u32) * (&qg * &qg + 1u32 - 2u32 * &g_big * &qg);
    let den = 2u32 * &g_big * (&qg * &q - 1u32);
    (num + &den - 1u32) / den
}

/// All imaginary squarefree D of degree exactly n (any leading coefficient).
pub fn imaginary_discriminants(f: &Fq, n: usize) -> Vec<ImagQuadField> {
    let q = f.q() as u64;
    let mut out = Vec::new();
    for lead in 1..f.q() {
        if n % 2 == 0 && f.is_square_elem(lead) {
            continue;
        }
        for idx in 0..q.pow(n as u32) {
            let m = Poly::monic_from_index(f, n, idx);
            let d = m.scale(&lead);
            if d.is_squarefree() {
                out.push(ImagQuadField { case: imaginary_case(&d).unwrap(), d });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(f: &Fq, s: &str) -> APoly {
        APoly::parse(f, s).unwrap()
    }

    #[test]
    fn cases() {
        let f = Fq::new(3, 1).unwrap();
        assert_eq!(is_imaginary(&p(&f, "T^3+2*T")).unwrap(), Some(Case::Ramified));
        assert_eq!(is_imaginary(&p(&f, "2*T^2+1")).unwrap(), Some(Case::Inert));
        assert_eq!(is_imaginary(&p(&f, "T^2+1")).unwrap(), None);
        assert!(is_imaginary(&p(&f, "T^2")).is_err());
    }

    #[test]
    fn class_number_examples() {
        let f = Fq::new(3, 1).unwrap();
        let k = ImagQuadField::new(&p(&f, "T^3+2*T")).unwrap();
        assert_eq!(k.genus(), 1);
        assert_eq!(k.point_count(1), 4);
        assert_eq!(k.l_polynomial(), vec![1, 0, 3]);
        assert_eq!(k.class_number(), 4);
        let k = ImagQuadField::new(&p(&f, "T+1")).unwrap();
        assert_eq!(k.class_number(), 1);
        assert_eq!(boundh(3, 1), BigUint::from(1u32));
    }

    #[test]
    fn class_numbers_respect_bounds() {
        for q in [3u32, 5] {
            let f = Fq::new(q, 1).unwrap();
            for n in 1..=5 {
                for k in imaginary_discriminants(&f, n) {
                    let h = k.class_number();
                    let (lo, hi) = hasse_weil(q, k.genus());
                    assert!(lo <= h as f64 + 1e-9 && h as f64 <= hi + 1e-9, "{k:?} h={h}");
                    assert!(BigUint::from(h) >= boundh(q, k.genus()));
                }
            }
        }
    }
}
