use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use super::field::Field;
use super::text;
use crate::error::{Error, Result};

/// Largest q accepted for non-prime F_q (arithmetic is table driven).
const MAX_TABLE_Q: u32 = 1024;
/// Largest prime accepted; keeps products of two residues well inside u64.
const MAX_P: u32 = 1 << 16;

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    /// Monic defining polynomial over F_p, low degree first; `[0, 1]` for prime fields.
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

/// The field F_q, q = p^e with p odd.
///
/// Elements are `u32` codes: the base-p digits of the residue polynomial in `u`
/// modulo the first monic irreducible of degree e (for e = 1, just the residue).
#[derive(Clone)]
pub struct Fq(Arc<Inner>);

fn registry() -> &'static Mutex<HashMap<(u32, u32), Fq>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), Fq>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits q into (p, e) with q = p^e.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut e = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    if r != 1 || p > u32::MAX as u64 {
        return None;
    }
    Some((p as u32, e))
}

// Small dense polynomials over F_p, used only while building the tables.
fn pmod(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let dm = m.len() - 1;
    let inv_lead = pinv(m[dm], p);
    while r.len() > dm {
        let c = (*r.last().unwrap() as u64 * inv_lead as u64 % p as u64) as u32;
        let shift = r.len() - 1 - dm;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let t = (c as u64 * mi as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn pinv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn digits(mut x: u32, p: u32, len: usize) -> Vec<u32> {
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        v.push(x % p);
        x /= p;
    }
    v
}

fn undigits(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn has_factor_of_degree(f: &[u32], d: usize, p: u32) -> bool {
    // every monic polynomial of degree d
    let count = (p as u64).pow(d as u32);
    (0..count).any(|idx| {
        let mut g = digits(idx as u32, p, d);
        g.push(1);
        pmod(f, &g, p).is_empty()
    })
}

fn first_irreducible(p: u32, e: u32) -> Vec<u32> {
    let e = e as usize;
    let count = (p as u64).pow(e as u32);
    for idx in 0..count {
        let mut f = digits(idx as u32, p, e);
        f.push(1);
        if (1..=e / 2).all(|d| !has_factor_of_degree(&f, d, p)) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Fq {
    /// The field with p^e elements (cached; equal arguments give the same handle).
    pub fn new(p: u32, e: u32) -> Result<Fq> {
        if p == 2 || !is_prime_u32(p) {
            return Err(Error::Invalid(format!("p = {p} must be an odd prime")));
        }
        if p >= MAX_P {
            return Err(Error::Invalid(format!("p = {p} too large")));
        }
        if e == 0 {
            return Err(Error::Invalid("e must be positive".into()));
        }
        let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if e > 1 && q > MAX_TABLE_Q as u64 {
            return Err(Error::Invalid(format!("q = {p}^{e} too large")));
        }
        let mut reg = registry().lock().unwrap();
        if let Some(f) = reg.get(&(p, e)) {
            return Ok(f.clone());
        }
        let f = Fq(Arc::new(Self::build(p, e, q as u32)));
        reg.insert((p, e), f.clone());
        Ok(f)
    }

    /// F_q for a prime power q.
    pub fn from_q(q: u64) -> Result<Fq> {
        let (p, e) =
            prime_power(q).ok_or_else(|| Error::Invalid(format!("{q} is not a prime power")))?;
        Fq::new(p, e)
    }

    fn build(p: u32, e: u32, q: u32) -> Inner {
        if e == 1 {
            let inv = (0..p).map(|a| if a == 0 { 0 } else { pinv(a, p) }).collect();
            return Inner { p, e, q, modulus: vec![0, 1], add: vec![], mul: vec![], inv };
        }
        let modulus = first_irreducible(p, e);
        let n = q as usize;
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        let ds: Vec<Vec<u32>> = (0..q).map(|x| digits(x, p, e as usize)).collect();
        for a in 0..n {
            for b in 0..n {
                let s: Vec<u32> = ds[a].iter().zip(&ds[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * n + b] = undigits(&s, p);
                let mut prod = vec![0u32; 2 * e as usize - 1];
                for (i, &x) in ds[a].iter().enumerate() {
                    for (j, &y) in ds[b].iter().enumerate() {
                        prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                    }
                }
                let r = pmod(&prod, &modulus, p);
                mul[a * n + b] = undigits(&r, p);
            }
        }
        let mut inv = vec![0u32; n];
        for a in 1..n {
            for b in 1..n {
                if mul[a * n + b] == 1 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        Inner { p, e, q, modulus, add, mul, inv }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.0.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    /// Defining polynomial of F_q over F_p (low degree first).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.0.e == 1 {
            let s = a + b;
            if s >= self.0.p {
                s - self.0.p
            } else {
                s
            }
        } else {
            self.0.add[(a * self.0.q + b) as usize]
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.0.e == 1 {
            if a == 0 {
                0
            } else {
                self.0.p - a
            }
        } else {
            let p = self.0.p;
            let mut out = 0;
            let mut scale = 1;
            let mut x = a;
            while x > 0 {
                let d = x % p;
                out += ((p - d) % p) * scale;
                scale *= p;
                x /= p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.0.e == 1 {
            ((a as u64 * b as u64) % self.0.p as u64) as u32
        } else {
            self.0.mul[(a * self.0.q + b) as usize]
        }
    }

    /// Panics on zero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_q");
        self.0.inv[a as usize]
    }

    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Reduction of an integer into the prime subfield.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.0.p as i64) as u32
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.0.q
    }

    pub fn is_square_elem(&self, a: u32) -> bool {
        a == 0 || self.pow(a, (self.0.q as u64 - 1) / 2) == 1
    }

    /// Smallest non-square (by code).
    pub fn nonsquare(&self) -> u32 {
        (1..self.0.q).find(|&a| !self.is_square_elem(a)).expect("odd q has non-squares")
    }

    /// Some square root, if one exists (smallest code).
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        (0..self.0.q).find(|&x| self.mul(x, x) == a)
    }

    pub fn format(&self, a: u32) -> String {
        if self.0.e == 1 {
            return a.to_string();
        }
        let ds = digits(a, self.0.p, self.0.e as usize);
        text::format_sum(
            ds.iter().enumerate().rev().filter(|(_, &d)| d != 0).map(|(i, &d)| (d.to_string(), i)),
            "u",
        )
    }

    /// Parses an element: an integer (reduced mod p) or, for e > 1, an
    /// expression in `u`.
    pub fn parse(&self, s: &str) -> Result<u32> {
        let s = s.trim();
        if let Ok(n) = s.parse::<i64>() {
            return Ok(self.from_int(n));
        }
        if self.0.e == 1 {
            return Err(Error::Parse(format!("bad F_{} element `{s}`", self.0.q)));
        }
        let terms = text::parse_sum(s, "u", &|c| {
            c.parse::<i64>().map_err(|_| Error::Parse(format!("bad coefficient `{c}`")))
        })?;
        let p = self.0.p;
        let e = self.0.e as usize;
        let mut coeffs = vec![0u32; e.max(1)];
        for (c, k) in terms {
            if k >= coeffs.len() {
                coeffs.resize(k + 1, 0);
            }
            coeffs[k] = ((coeffs[k] as i64 + c).rem_euclid(p as i64)) as u32;
        }
        let r = pmod(&coeffs, &self.0.modulus, p);
        let mut r = r;
        r.resize(e, 0);
        Ok(undigits(&r, p))
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.e == other.0.e
    }
}

impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

impl Field for Fq {
    type Elem = u32;

    fn base(&self) -> &Fq {
        self
    }
    fn degree(&self) -> usize {
        1
    }
    fn same_field(&self, other: &Self) -> bool {
        self == other
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_base(&self, c: u32) -> u32 {
        c
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        Fq::add(self, *a, *b)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        Fq::sub(self, *a, *b)
    }
    fn neg(&self, a: &u32) -> u32 {
        Fq::neg(self, *a)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        Fq::mul(self, *a, *b)
    }
    fn inv(&self, a: &u32) -> u32 {
        Fq::inv(self, *a)
    }
    fn frobenius(&self, a: &u32) -> u32 {
        *a
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.0.q)
    }
    fn fmt_elem(&self, a: &u32) -> String {
        self.format(*a)
    }
    fn pth_root(&self, a: &u32) -> u32 {
        Fq::pow(self, *a, (self.0.q / self.0.p) as u64)
    }
    fn mul_slices(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        if self.0.e != 1 {
            let mut out = vec![0u32; a.len() + b.len() - 1];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    out[i + j] = Fq::add(self, out[i + j], Fq::mul(self, x, y));
                }
            }
            return out;
        }
        let p = self.0.p as u64;
        let mut acc = vec![0u64; a.len() + b.len() - 1];
        // p < 2^16, so 2^31 products fit before a reduction is needed
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += x as u64 * y as u64;
            }
            if i % (1 << 20) == (1 << 20) - 1 {
                acc.iter_mut().for_each(|v| *v %= p);
            }
        }
        acc.into_iter().map(|v| (v % p) as u32).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = Fq::new(5, 1).unwrap();
        assert_eq!(f.add(3, 4), 2);
        assert_eq!(f.mul(3, 4), 2);
        assert_eq!(f.inv(2), 3);
        assert_eq!(f.neg(0), 0);
        assert!(f.is_square_elem(4));
        assert!(!f.is_square_elem(2));
    }

    #[test]
    fn rejects_even_and_composite() {
        assert!(Fq::new(2, 1).is_err());
        assert!(Fq::new(9, 1).is_err());
        assert!(Fq::from_q(12).is_err());
    }

    #[test]
    fn f9_is_a_field() {
        let f = Fq::from_q(9).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]); // u^2 + 1 is the first irreducible
        for a in 1..9 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
            assert_eq!(f.add(a, f.neg(a)), 0);
        }
        // multiplicative group is cyclic of order 8
        assert!((1..9).any(|g| (1..8).all(|k| f.pow(g, k) != 1)));
    }

    #[test]
    fn f9_text_round_trip() {
        let f = Fq::from_q(9).unwrap();
        for a in 0..9 {
            assert_eq!(f.parse(&f.format(a)).unwrap(), a);
        }
        assert_eq!(f.format(3), "u");
        assert_eq!(f.format(5), "u+2");
    }

    #[test]
    fn same_handle_for_same_field() {
        assert_eq!(Fq::new(3, 2).unwrap(), Fq::from_q(9).unwrap());
    }
}
