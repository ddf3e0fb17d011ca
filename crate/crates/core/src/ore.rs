//! Twisted polynomials sum a_i tau^i over a field containing F_q, with
//! tau * x = x^q * tau.

use std::fmt;

use crate::arith::{text, Field};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct OrePoly<K: Field> {
    field: K,
    c: Vec<K::Elem>,
}

impl<K: Field> OrePoly<K> {
    pub fn new(field: &K, mut c: Vec<K::Elem>) -> Self {
        while c.last().map_or(false, |x| field.is_zero(x)) {
            c.pop();
        }
        OrePoly { field: field.clone(), c }
    }

    pub fn zero(field: &K) -> Self {
        OrePoly { field: field.clone(), c: Vec::new() }
    }

    pub fn one(field: &K) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: &K, a: K::Elem) -> Self {
        Self::new(field, vec![a])
    }

    /// a * tau^k.
    pub fn term(field: &K, a: K::Elem, k: usize) -> Self {
        let mut c = vec![field.zero(); k];
        c.push(a);
        Self::new(field, c)
    }

    pub fn tau(field: &K) -> Self {
        Self::term(field, field.one(), 1)
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn coeffs(&self) -> &[K::Elem] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> K::Elem {
        self.c.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// tau-degree, -1 for zero.
    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().map_or(false, |a| self.field.is_one(a))
    }

    pub fn lead(&self) -> Option<&K::Elem> {
        self.c.last()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.field.same_field(&o.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        Self::new(f, (0..n).map(|i| f.add(&self.coeff(i), &o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let f = &self.field;
        let n = self.c.len().max(o.c.len());
        Self::new(f, (0..n).map(|i| f.sub(&self.coeff(i), &o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.field, self.c.iter().map(|a| self.field.neg(a)).collect())
    }

    /// a * self (scalar on the left).
    pub fn scale_left(&self, a: &K::Elem) -> Self {
        Self::new(&self.field, self.c.iter().map(|x| self.field.mul(a, x)).collect())
    }

    /// Left-scales to a monic polynomial.
    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale_left(&self.field.inv(l)),
        }
    }

    /// Applies x -> x^q to every coefficient.
    pub fn frobenius_coeffs(&self) -> Self {
        Self::new(&self.field, self.c.iter().map(|a| self.field.frobenius(a)).collect())
    }

    /// `twists[k][j]` = c_j^{q^k} for k < count.
    fn twists(&self, count: usize) -> Vec<Vec<K::Elem>> {
        let mut out = Vec::with_capacity(count);
        let mut cur = self.c.clone();
        for _ in 0..count {
            let next = cur.iter().map(|a| self.field.frobenius(a)).collect();
            out.push(std::mem::replace(&mut cur, next));
        }
        out
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.mul(o))
    }

    /// Panics on operands over different fields; see `checked_mul`.
    pub fn mul(&self, o: &Self) -> Self {
        assert!(self.field.same_field(&o.field), "OrePoly operands over different fields");
        let f = &self.field;
        if self.is_zero() || o.is_zero() {
            return Self::zero(f);
        }
        let tw = o.twists(self.c.len());
        let mut out = vec![f.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in tw[i].iter().enumerate() {
                let t = f.mul(a, b);
                out[i + j] = f.add(&out[i + j], &t);
            }
        }
        Self::new(f, out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// (Q, R) with self = Q * g + R and deg R < deg g.
    pub fn right_divide(&self, g: &Self) -> Result<(Self, Self)> {
        self.check(g)?;
        let f = &self.field;
        let dg = g.degree().ok_or(Error::DivisionByZero)?;
        if self.deg() < dg as i64 {
            return Ok((Self::zero(f), self.clone()));
        }
        let span = self.c.len() - dg;
        let tw = g.twists(span);
        let lead_inv: Vec<K::Elem> = tw.iter().map(|t| f.inv(&t[dg])).collect();
        let mut r = self.c.clone();
        let mut q = vec![f.zero(); span];
        for k in (0..span).rev() {
            let top = &r[k + dg];
            if f.is_zero(top) {
                continue;
            }
            let c = f.mul(top, &lead_inv[k]);
            for (j, b) in tw[k].iter().enumerate() {
                let t = f.mul(&c, b);
                r[k + j] = f.sub(&r[k + j], &t);
            }
            q[k] = c;
        }
        r.truncate(dg);
        Ok((Self::new(f, q), Self::new(f, r)))
    }

    pub fn right_rem(&self, g: &Self) -> Result<Self> {
        Ok(self.right_divide(g)?.1)
    }

    /// Monic right gcd: the monic generator d with self, o in C{tau} d.
    pub fn rgcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.right_rem(&b).expect("same field");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// sum a_i x^{q^i}.
    pub fn eval(&self, x: &K::Elem) -> K::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        let mut pw = x.clone();
        for (i, a) in self.c.iter().enumerate() {
            if i > 0 {
                pw = f.frobenius(&pw);
            }
            if !f.is_zero(a) {
                acc = f.add(&acc, &f.mul(a, &pw));
            }
        }
        acc
    }

    /// Monic additive polynomial vanishing exactly on the F_q-span of `basis`.
    /// Fails if the vectors are dependent.
    pub fn kernel_of_basis(field: &K, basis: &[K::Elem]) -> Result<Self> {
        let mut f = Self::one(field);
        let q1 = field.base().q() as u64 - 1;
        for w in basis {
            let v = f.eval(w);
            if field.is_zero(&v) {
                return Err(Error::NotSubspace("basis vectors are F_q-dependent".into()));
            }
            let c = field.pow_u64(&v, q1);
            let step = Self::new(field, vec![field.neg(&c), field.one()]);
            f = step.mul(&f);
        }
        Ok(f)
    }

    /// Kernel polynomial of a finite set that must be an F_q-subspace.
    pub fn kernel_polynomial(field: &K, set: &[K::Elem]) -> Result<Self> {
        let s: std::collections::HashSet<&K::Elem> = set.iter().collect();
        let zero = field.zero();
        if !s.contains(&zero) {
            return Err(Error::NotSubspace("missing 0".into()));
        }
        let q = field.base().q();
        for a in &s {
            for c in 1..q {
                if !s.contains(&field.mul(&field.from_base(c), a)) {
                    return Err(Error::NotSubspace("not closed under scaling".into()));
                }
            }
            for b in &s {
                if !s.contains(&field.add(a, b)) {
                    return Err(Error::NotSubspace("not closed under addition".into()));
                }
            }
        }
        // greedy basis, in input order
        let mut basis: Vec<K::Elem> = Vec::new();
        let mut f = Self::one(field);
        for a in set {
            if !field.is_zero(&f.eval(a)) {
                basis.push(a.clone());
                f = Self::kernel_of_basis(field, &basis)?;
            }
        }
        Ok(f)
    }

    /// Text form in `t`, highest power first; coefficients via `fmt_elem`.
    pub fn to_text(&self) -> String {
        let f = &self.field;
        text::format_sum(
            self.c
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, a)| !f.is_zero(a))
                .map(|(i, a)| (f.fmt_elem(a), i)),
            "t",
        )
    }

    pub fn parse_with<P>(field: &K, s: &str, parse_elem: P) -> Result<Self>
    where
        P: Fn(&str) -> Result<K::Elem>,
    {
        let mut c: Vec<K::Elem> = Vec::new();
        for t in text::parse_terms(s, "t")? {
            let a = parse_elem(t.coeff.as_deref().unwrap_or("1"))?;
            let a = if t.neg { field.neg(&a) } else { a };
            if c.len() <= t.exp {
                c.resize(t.exp + 1, field.zero());
            }
            c[t.exp] = field.add(&c[t.exp], &a);
        }
        Ok(Self::new(field, c))
    }
}

impl<K: Field> PartialEq for OrePoly<K> {
    fn eq(&self, o: &Self) -> bool {
        self.field.same_field(&o.field) && self.c == o.c
    }
}

impl<K: Field> Eq for OrePoly<K> {}

impl<K: Field> fmt::Debug for OrePoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl<K: Field> fmt::Display for OrePoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}
