use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::Field;
use super::fq::Fq;
use super::text;
use crate::error::{Error, Result};

/// Dense univariate polynomial over a field handle `K`, low degree first,
/// with no trailing zeros.
#[derive(Clone)]
pub struct Poly<K: Field> {
    field: K,
    c: Vec<K::Elem>,
}

impl<K: Field> Poly<K> {
    pub fn new(field: &K, mut c: Vec<K::Elem>) -> Self {
        while c.last().map_or(false, |x| field.is_zero(x)) {
            c.pop();
        }
        Poly { field: field.clone(), c }
    }

    pub fn zero(field: &K) -> Self {
        Poly { field: field.clone(), c: Vec::new() }
    }

    pub fn one(field: &K) -> Self {
        Poly::constant(field, field.one())
    }

    pub fn constant(field: &K, a: K::Elem) -> Self {
        Poly::new(field, vec![a])
    }

    /// The variable.
    pub fn x(field: &K) -> Self {
        Poly::monomial(field, field.one(), 1)
    }

    pub fn monomial(field: &K, a: K::Elem, k: usize) -> Self {
        let mut c = vec![field.zero(); k];
        c.push(a);
        Poly::new(field, c)
    }

    /// x - a.
    pub fn linear(field: &K, a: &K::Elem) -> Self {
        Poly::new(field, vec![field.neg(a), field.one()])
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn coeffs(&self) -> &[K::Elem] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<K::Elem> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> K::Elem {
        self.c.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with -1 for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn lead(&self) -> Option<&K::Elem> {
        self.c.last()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.field.is_one(&self.c[0])
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.lead().map_or(false, |l| self.field.is_one(l))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&self.field.inv(l)),
        }
    }

    pub fn scale(&self, a: &K::Elem) -> Self {
        let f = &self.field;
        Poly::new(f, self.c.iter().map(|x| f.mul(x, a)).collect())
    }

    /// Multiplication by x^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.field.zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { field: self.field.clone(), c }
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => f.add(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(f, c)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Poly { field: f.clone(), c: self.c.iter().map(|x| f.neg(x)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(&self.field);
        }
        Poly::new(&self.field, self.field.mul_slices(&self.c, &o.c))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Poly::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    /// Euclidean division; panics when `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let f = &self.field;
        let dd = d.degree().expect("polynomial division by zero");
        if self.c.len() <= dd {
            return (Poly::zero(f), self.clone());
        }
        let inv = f.inv(d.lead().unwrap());
        let mut r = self.c.clone();
        let mut q = vec![f.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if f.is_zero(top) {
                continue;
            }
            let c = f.mul(top, &inv);
            for (i, di) in d.c.iter().enumerate() {
                let t = f.mul(&c, di);
                r[k + i] = f.sub(&r[k + i], &t);
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(f, q), Poly::new(f, r))
    }

    pub fn checked_div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.div_rem(d))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, o: &Self) -> bool {
        if self.is_zero() {
            return o.is_zero();
        }
        o.rem(self).is_zero()
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// (g, s, t) with s*self + t*o = g monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lead().cloned() {
            None => (r0, s0, t0),
            Some(l) => {
                let inv = f.inv(&l);
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Inverse modulo m, if it exists.
    pub fn inv_mod(&self, m: &Self) -> Option<Self> {
        let (g, s, _) = self.rem(m).xgcd(m);
        g.is_one().then(|| s.rem(m))
    }

    pub fn mul_mod(&self, o: &Self, m: &Self) -> Self {
        self.mul(o).rem(m)
    }

    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = Poly::one(&self.field).rem(m);
        let b = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul_mod(&acc, m);
            if e.bit(i) {
                acc = acc.mul_mod(&b, m);
            }
        }
        acc
    }

    pub fn eval(&self, x: &K::Elem) -> K::Elem {
        let f = &self.field;
        self.c.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| {
                let k = f.from_base(f.base().from_int(i as i64));
                f.mul(a, &k)
            })
            .collect();
        Poly::new(f, c)
    }

    /// Applies `g` to every coefficient, landing in another field.
    pub fn map<L: Field>(&self, field: &L, g: impl Fn(&K::Elem) -> L::Elem) -> Poly<L> {
        Poly::new(field, self.c.iter().map(g).collect())
    }

    /// Composition self(g).
    pub fn compose(&self, g: &Self) -> Self {
        let f = &self.field;
        self.c.iter().rev().fold(Poly::zero(f), |acc, c| acc.mul(g).add(&Poly::constant(f, c.clone())))
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// Monic squarefree factorization: pairs (g_i, i) with self ~ prod g_i^i.
    pub fn squarefree_factorization(&self) -> Vec<(Self, u32)> {
        assert!(!self.is_zero(), "factorization of zero");
        let f = self.monic();
        let mut out = Vec::new();
        if f.is_constant() {
            return out;
        }
        let p = self.field.characteristic();
        let mut c = f.gcd(&f.derivative());
        let mut w = f.div_exact(&c).unwrap();
        let mut i = 1;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.div_exact(&y).unwrap();
            if !fac.is_one() {
                out.push((fac, i));
            }
            w = y;
            c = c.div_exact(&w).unwrap();
            i += 1;
        }
        if !c.is_one() {
            let root = c.pth_root_poly();
            for (g, e) in root.squarefree_factorization() {
                out.push((g, e * p));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// For a polynomial in x^p, its p-th root.
    fn pth_root_poly(&self) -> Self {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let c = self.c.iter().step_by(p).map(|a| f.pth_root(a)).collect();
        Poly::new(f, c)
    }

    /// x^Q mod self, Q = |K|.
    fn frobenius_x(&self, h: &Self) -> Self {
        h.pow_mod(&self.field.size(), self)
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// (product of all irreducible factors of degree d, d).
    pub fn distinct_degree(&self) -> Vec<(Self, usize)> {
        let f = &self.field;
        let mut out = Vec::new();
        let mut rest = self.monic();
        let x = Poly::x(f);
        let mut h = x.rem(&rest);
        let mut d = 0;
        while rest.deg() >= 2 * (d as i64 + 1) {
            d += 1;
            h = rest.frobenius_x(&h);
            let g = h.sub(&x).gcd(&rest);
            if !g.is_one() {
                rest = rest.div_exact(&g).unwrap();
                h = h.rem(&rest);
                out.push((g, d));
            }
        }
        if rest.deg() > 0 {
            let d = rest.degree().unwrap();
            out.push((rest, d));
        }
        out
    }

    /// Splits a monic squarefree product of degree-d irreducibles.
    pub fn equal_degree(&self, d: usize) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x0ddf_ac70);
        let mut out = Vec::new();
        self.equal_degree_rec(d, &mut rng, &mut out);
        out.sort();
        out
    }

    fn equal_degree_rec(&self, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Self>) {
        let n = self.degree().unwrap_or(0);
        if n <= d {
            if n > 0 {
                out.push(self.monic());
            }
            return;
        }
        let f = &self.field;
        let e = (f.size().pow(d as u32) - 1u32) >> 1;
        loop {
            let a = Poly::new(f, (0..n).map(|_| f.random(rng)).collect());
            if a.is_constant() {
                continue;
            }
            let g = a.gcd(self);
            let g = if !g.is_one() {
                g
            } else {
                let b = a.pow_mod(&e, self).sub(&Poly::one(f));
                b.gcd(self)
            };
            if !g.is_one() && g.deg() < self.deg() {
                let h = self.div_exact(&g).unwrap();
                g.equal_degree_rec(d, rng, out);
                h.equal_degree_rec(d, rng, out);
                return;
            }
        }
    }

    /// Monic irreducible factorization, sorted, with multiplicities.
    pub fn factor(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        for (g, e) in self.squarefree_factorization() {
            for (h, d) in g.distinct_degree() {
                for k in h.equal_degree(d) {
                    out.push((k, e));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Rabin's test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic();
        let x = Poly::x(&self.field);
        let mut h = x.clone();
        let mut powers = vec![x.clone()];
        for _ in 0..n {
            h = f.frobenius_x(&h);
            powers.push(h.clone());
        }
        if powers[n] != x {
            return false;
        }
        prime_divisors(n).into_iter().all(|r| powers[n / r].sub(&x).gcd(&f).is_one())
    }

    /// Distinct roots in K, sorted.
    pub fn roots(&self) -> Vec<K::Elem> {
        if self.deg() < 1 {
            return Vec::new();
        }
        let f = self.monic();
        let x = Poly::x(&self.field);
        let h = f.frobenius_x(&x.rem(&f));
        let g = h.sub(&x).gcd(&f);
        let mut r: Vec<K::Elem> = g
            .equal_degree(1)
            .into_iter()
            .map(|l| self.field.neg(&l.coeff(0)))
            .collect();
        r.sort();
        r
    }

    /// Roots in K with multiplicities, sorted by root.
    pub fn roots_with_multiplicity(&self) -> Vec<(K::Elem, u32)> {
        let mut out = Vec::new();
        for (g, e) in self.squarefree_factorization() {
            for r in g.roots() {
                out.push((r, e));
            }
        }
        out.sort();
        out
    }

    /// Newton interpolation through distinct nodes.
    pub fn interpolate(field: &K, xs: &[K::Elem], ys: &[K::Elem]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let f = field;
        let n = xs.len();
        let mut dd: Vec<K::Elem> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let num = f.sub(&dd[i], &dd[i - 1]);
                let den = f.sub(&xs[i], &xs[i - j]);
                dd[i] = f.div(&num, &den);
            }
        }
        let mut p = Poly::zero(f);
        for k in (0..n).rev() {
            p = p.mul(&Poly::linear(f, &xs[k])).add(&Poly::constant(f, dd[k].clone()));
        }
        p
    }

    pub fn fmt_var(&self, var: &str) -> String {
        let f = &self.field;
        text::format_sum(
            self.c
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, a)| !f.is_zero(a))
                .map(|(i, a)| (f.fmt_elem(a), i)),
            var,
        )
    }
}

/// Resultant via the Euclidean remainder sequence.
pub fn resultant<K: Field>(a: &Poly<K>, b: &Poly<K>) -> K::Elem {
    let f = a.field().clone();
    if a.is_zero() || b.is_zero() {
        return f.zero();
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = f.one();
    loop {
        let da = a.deg() as u64;
        let db = b.deg() as u64;
        if db == 0 {
            return f.mul(&acc, &f.pow_u64(b.lead().unwrap(), da));
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return f.zero();
        }
        let dr = r.deg() as u64;
        if (da * db) % 2 == 1 {
            acc = f.neg(&acc);
        }
        acc = f.mul(&acc, &f.pow_u64(b.lead().unwrap(), da - dr));
        a = b;
        b = r;
    }
}

pub(crate) fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl<K: Field> PartialEq for Poly<K> {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c && self.field.same_field(&o.field)
    }
}

impl<K: Field> Eq for Poly<K> {}

impl<K: Field> Hash for Poly<K> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

/// Degree first, then coefficients from the top down.
impl<K: Field> Ord for Poly<K> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.c
            .len()
            .cmp(&o.c.len())
            .then_with(|| self.c.iter().rev().cmp(o.c.iter().rev()))
    }
}

impl<K: Field> PartialOrd for Poly<K> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl<K: Field> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("x"))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl<'a, K: Field> $tr<&'a Poly<K>> for &'a Poly<K> {
            type Output = Poly<K>;
            fn $m(self, o: &'a Poly<K>) -> Poly<K> {
                Poly::$m(self, o)
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl<K: Field> Neg for &Poly<K> {
    type Output = Poly<K>;
    fn neg(self) -> Poly<K> {
        Poly::neg(self)
    }
}

/// Elements of A = F_q[T].
pub type APoly = Poly<Fq>;

impl Poly<Fq> {
    /// Parses the canonical text form, e.g. `T^3+2*T+1`.
    pub fn parse(field: &Fq, s: &str) -> Result<Self> {
        let mut c: Vec<u32> = Vec::new();
        for t in text::parse_terms(s, "T")? {
            let a = field.parse(t.coeff.as_deref().unwrap_or("1"))?;
            let a = if t.neg { field.neg(a) } else { a };
            if c.len() <= t.exp {
                c.resize(t.exp + 1, 0);
            }
            c[t.exp] = field.add(c[t.exp], a);
        }
        Ok(Poly::new(field, c))
    }

    /// Polynomial from integer coefficients (low degree first), reduced mod p.
    pub fn from_ints(field: &Fq, c: &[i64]) -> Self {
        Poly::new(field, c.iter().map(|&x| field.from_int(x)).collect())
    }

    /// |a| = q^deg a.
    pub fn norm(&self) -> u128 {
        match self.degree() {
            None => 0,
            Some(d) => (self.field.q() as u128).pow(d as u32),
        }
    }

    /// Integer code of a monic polynomial of degree d among all monic ones,
    /// matching the enumeration order.
    pub fn monic_index(&self) -> u64 {
        let q = self.field.q() as u64;
        self.c[..self.c.len() - 1].iter().rev().fold(0, |acc, &x| acc * q + x as u64)
    }

    /// The monic polynomial of degree d with the given enumeration index.
    pub fn monic_from_index(field: &Fq, d: usize, mut idx: u64) -> Self {
        let q = field.q() as u64;
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push((idx % q) as u32);
            idx /= q;
        }
        c.push(1);
        Poly::new(field, c)
    }

    /// All monic polynomials of degree d in increasing order.
    pub fn monics(field: &Fq, d: usize) -> impl Iterator<Item = Self> + '_ {
        let count = (field.q() as u64).pow(d as u32);
        (0..count).map(move |i| Poly::monic_from_index(field, d, i))
    }
}

impl fmt::Display for Poly<Fq> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("T"))
    }
}

impl std::str::FromStr for Poly<Fq> {
    type Err = Error;
    /// Prime-field shortcut: `"3:T^2+1"` parses over F_3.
    fn from_str(s: &str) -> Result<Self> {
        let (q, rest) =
            s.split_once(':').ok_or_else(|| Error::Parse("expected `<q>:<poly>`".into()))?;
        let q: u64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad q `{q}`")))?;
        Poly::parse(&Fq::from_q(q)?, rest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f3() -> Fq {
        Fq::new(3, 1).unwrap()
    }

    fn p(s: &str) -> APoly {
        Poly::parse(&f3(), s).unwrap()
    }

    #[test]
    fn text_round_trip() {
        for s in ["T^3+2*T+1", "0", "1", "T", "2*T^5+T^2+2"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("T^3 - T").to_string(), "T^3+2*T");
        assert_eq!(p("2T+T"), Poly::zero(&f3()));
        let f9 = Fq::from_q(9).unwrap();
        let a = Poly::parse(&f9, "(u+1)*T^2+u").unwrap();
        assert_eq!(a.to_string(), "(u+1)*T^2+(u)");
        assert_eq!(Poly::parse(&f9, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn division_and_gcd() {
        let a = p("T^3+2*T");
        let b = p("T+1");
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert_eq!(a.gcd(&b), b);
        let (g, s, t) = p("T^2+1").xgcd(&p("T+1"));
        assert!(g.is_one());
        assert_eq!(&(&s * &p("T^2+1")) + &(&t * &p("T+1")), g);
    }

    #[test]
    fn factorization() {
        let a = p("T^3+2*T"); // T(T-1)(T+1)
        let fs = a.factor();
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|(g, e)| *e == 1 && g.degree() == Some(1)));
        let b = &p("T^2+1").pow(3) * &p("T");
        let fs = b.factor();
        assert_eq!(fs, vec![(p("T"), 1), (p("T^2+1"), 3)]);
        assert!(p("T^2+1").is_irreducible());
        assert!(!p("T^2+2").is_irreducible());
    }

    #[test]
    fn resultant_matches_root_product() {
        // Res(x^2+1, x+1) = 1 + 1 = 2 over F_3
        assert_eq!(resultant(&p("T^2+1"), &p("T+1")), 2);
        assert_eq!(resultant(&p("T^2+1"), &p("T^2+1")), 0);
    }

    #[test]
    fn interpolation() {
        let f = Fq::new(7, 1).unwrap();
        let a = Poly::from_ints(&f, &[3, 0, 5, 1]);
        let xs: Vec<u32> = (0..4).collect();
        let ys: Vec<u32> = xs.iter().map(|x| a.eval(x)).collect();
        assert_eq!(Poly::interpolate(&f, &xs, &ys), a);
    }

    #[test]
    fn roots_in_prime_field() {
        let a = p("T^3+2*T");
        assert_eq!(a.roots(), vec![0, 1, 2]);
        assert!(p("T^2+1").roots().is_empty());
    }

    proptest! {
        #[test]
        fn ring_laws(a in prop::collection::vec(0u32..5, 0..6),
                     b in prop::collection::vec(0u32..5, 0..6),
                     c in prop::collection::vec(1u32..5, 1..4)) {
            let f = Fq::new(5, 1).unwrap();
            let (a, b, c) = (Poly::new(&f, a), Poly::new(&f, b), Poly::new(&f, c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            let (q, r) = a.div_rem(&c);
            prop_assert_eq!(&(&q * &c) + &r, a.clone());
            prop_assert!(r.deg() < c.deg());
        }

        #[test]
        fn factor_reconstructs(a in prop::collection::vec(0u32..3, 2..9)) {
            let f = f3();
            let a = Poly::new(&f, a);
            prop_assume!(a.deg() >= 1);
            let mut prod = Poly::one(&f);
            for (g, e) in a.factor() {
                prop_assert!(g.is_irreducible());
                prod = &prod * &g.pow(e as u64);
            }
            prop_assert_eq!(prod, a.monic());
        }
    }
}
