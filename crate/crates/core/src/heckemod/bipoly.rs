use std::fmt;

use crate::arith::{Field, Poly};

/// Bivariate polynomial sum_i c_i(Y) X^i, no trailing zero c_i.
#[derive(Clone)]
pub struct BiPoly<K: Field> {
    field: K,
    c: Vec<Poly<K>>,
}

impl<K: Field> PartialEq for BiPoly<K> {
    fn eq(&self, o: &Self) -> bool {
        self.c == o.c
    }
}

impl<K: Field> Eq for BiPoly<K> {}

impl<K: Field> BiPoly<K> {
    pub fn new(field: &K, mut c: Vec<Poly<K>>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        BiPoly { field: field.clone(), c }
    }

    pub fn zero(field: &K) -> Self {
        BiPoly { field: field.clone(), c: Vec::new() }
    }

    /// From a dense grid: grid[i][j] is the coefficient of X^i Y^j.
    pub fn from_grid(field: &K, grid: Vec<Vec<K::Elem>>) -> Self {
        BiPoly::new(field, grid.into_iter().map(|row| Poly::new(field, row)).collect())
    }

    pub fn x(field: &K) -> Self {
        BiPoly::new(field, vec![Poly::zero(field), Poly::one(field)])
    }

    pub fn y(field: &K) -> Self {
        BiPoly::new(field, vec![Poly::x(field)])
    }

    pub fn constant(field: &K, a: K::Elem) -> Self {
        BiPoly::new(field, vec![Poly::constant(field, a)])
    }

    /// p(X) as a bivariate polynomial.
    pub fn from_x(p: &Poly<K>) -> Self {
        let f = p.field();
        BiPoly::new(f, p.coeffs().iter().map(|a| Poly::constant(f, a.clone())).collect())
    }

    /// p(Y) as a bivariate polynomial.
    pub fn from_y(p: &Poly<K>) -> Self {
        BiPoly::new(p.field(), vec![p.clone()])
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Coefficient of X^i, a polynomial in Y.
    pub fn coeff_x(&self, i: usize) -> Poly<K> {
        self.c.get(i).cloned().unwrap_or_else(|| Poly::zero(&self.field))
    }

    pub fn coeff(&self, i: usize, j: usize) -> K::Elem {
        self.c.get(i).map(|p| p.coeff(j)).unwrap_or_else(|| self.field.zero())
    }

    pub fn deg_x(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn deg_y(&self) -> i64 {
        self.c.iter().map(|p| p.deg()).max().unwrap_or(-1)
    }

    pub fn total_degree(&self) -> i64 {
        self.c.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(|(i, p)| i as i64 + p.deg()).max().unwrap_or(-1)
    }

    /// grid[i][j] = coefficient of X^i Y^j, padded to the bidegree.
    pub fn grid(&self) -> Vec<Vec<K::Elem>> {
        let dy = self.deg_y().max(-1) + 1;
        self.c.iter().map(|p| (0..dy as usize).map(|j| p.coeff(j)).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        let dy = (self.deg_y() + 1).max(0) as usize;
        let rows = (0..dy)
            .map(|j| Poly::new(&self.field, self.c.iter().map(|p| p.coeff(j)).collect()))
            .collect();
        BiPoly::new(&self.field, rows)
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        BiPoly::new(&self.field, (0..n).map(|i| self.coeff_x(i).add(&o.coeff_x(i))).collect())
    }

    pub fn neg(&self) -> Self {
        BiPoly::new(&self.field, self.c.iter().map(|p| p.neg()).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return BiPoly::zero(&self.field);
        }
        let mut out = vec![Poly::zero(&self.field); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        BiPoly::new(&self.field, out)
    }

    pub fn scale(&self, a: &K::Elem) -> Self {
        BiPoly::new(&self.field, self.c.iter().map(|p| p.scale(a)).collect())
    }

    pub fn mul_y(&self, p: &Poly<K>) -> Self {
        BiPoly::new(&self.field, self.c.iter().map(|c| c.mul(p)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = BiPoly::constant(&self.field, self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// F(a, Y).
    pub fn eval_x(&self, a: &K::Elem) -> Poly<K> {
        self.c.iter().rev().fold(Poly::zero(&self.field), |acc, p| acc.scale(a).add(p))
    }

    /// F(X, b).
    pub fn eval_y(&self, b: &K::Elem) -> Poly<K> {
        Poly::new(&self.field, self.c.iter().map(|p| p.eval(b)).collect())
    }

    pub fn eval(&self, a: &K::Elem, b: &K::Elem) -> K::Elem {
        self.eval_y(b).eval(a)
    }

    /// F(t, t).
    pub fn diagonal(&self) -> Poly<K> {
        let f = &self.field;
        let t = Poly::x(f);
        self.c.iter().rev().fold(Poly::zero(f), |acc, p| acc.mul(&t).add(p))
    }

    pub fn map<L: Field>(&self, field: &L, g: impl Fn(&K::Elem) -> L::Elem) -> BiPoly<L> {
        BiPoly::new(field, self.c.iter().map(|p| p.map(field, &g)).collect())
    }

    pub fn derivative_x(&self) -> Self {
        let f = &self.field;
        BiPoly::new(
            f,
            self.c.iter().enumerate().skip(1).map(|(i, p)| p.scale(&f.from_base(f.base().from_int(i as i64)))).collect(),
        )
    }

    pub fn derivative_y(&self) -> Self {
        BiPoly::new(&self.field, self.c.iter().map(|p| p.derivative()).collect())
    }

    /// Leading coefficient in lex order (X first), i.e. lead of the top c_i.
    fn lead(&self) -> Option<(usize, usize, K::Elem)> {
        let top = self.c.last()?;
        Some((self.c.len() - 1, top.deg() as usize, top.lead().unwrap().clone()))
    }

    /// Division with remainder in lex order X > Y. The remainder is zero
    /// iff d divides self.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let f = &self.field;
        let (dx, dy, dl) = d.lead().expect("division by zero");
        let inv = f.inv(&dl);
        let mut q = BiPoly::zero(f);
        let mut r = BiPoly::zero(f);
        let mut p = self.clone();
        while let Some((px, py, pl)) = p.lead() {
            if px >= dx && py >= dy {
                let c = f.mul(&pl, &inv);
                let mut row = vec![Poly::zero(f); px - dx + 1];
                row[px - dx] = Poly::monomial(f, c, py - dy);
                let t = BiPoly::new(f, row);
                p = p.sub(&t.mul(d));
                q = q.add(&t);
            } else {
                let mut row = vec![Poly::zero(f); px + 1];
                row[px] = Poly::monomial(f, pl, py);
                let t = BiPoly::new(f, row);
                p = p.sub(&t);
                r = r.add(&t);
            }
        }
        (q, r)
    }

    pub fn divides(&self, o: &Self) -> bool {
        !self.is_zero() && o.div_rem(self).1.is_zero()
    }

    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// gcd of the c_i in K[Y], monic.
    pub fn content_y(&self) -> Poly<K> {
        self.c.iter().fold(Poly::zero(&self.field), |acc, p| acc.gcd(p))
    }

    fn div_poly_y(&self, g: &Poly<K>) -> Self {
        BiPoly::new(&self.field, self.c.iter().map(|p| p.div_exact(g).expect("content")).collect())
    }

    /// Scaled so the lex-leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some((_, _, l)) => self.scale(&self.field.inv(&l)),
        }
    }

    /// Pseudo-remainder of self by d as polynomials in X over K[Y].
    fn prem(&self, d: &Self) -> Self {
        let dx = d.deg_x();
        let ld = d.coeff_x(dx as usize);
        let mut r = self.clone();
        while r.deg_x() >= dx && !r.is_zero() {
            let k = (r.deg_x() - dx) as usize;
            let lr = r.coeff_x(r.deg_x() as usize);
            let mut sh = vec![Poly::zero(&self.field); k];
            sh.extend(d.c.iter().cloned());
            let t = BiPoly::new(&self.field, sh).mul_y(&lr);
            r = r.mul_y(&ld).sub(&t);
        }
        r
    }

    /// Monic gcd, by a primitive remainder sequence over K[Y].
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        let ca = self.content_y();
        let cb = o.content_y();
        let cont = ca.gcd(&cb);
        let mut a = self.div_poly_y(&ca);
        let mut b = o.div_poly_y(&cb);
        if a.deg_x() < b.deg_x() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() && b.deg_x() > 0 {
            let r = a.prem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.div_poly_y(&r.content_y()) };
        }
        let g = if b.is_zero() { a } else { BiPoly::from_y(&Poly::one(&self.field)) };
        g.mul_y(&cont).monic()
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() || self.total_degree() <= 0 {
            return BiPoly::constant(&self.field, self.field.one());
        }
        let gx = self.derivative_x();
        let gy = self.derivative_y();
        if gx.is_zero() && gy.is_zero() {
            return self.pth_root().squarefree_part();
        }
        let w = self.gcd(&gx).gcd(&gy);
        let s = self.div_exact(&w).unwrap();
        if w.total_degree() <= 0 {
            return s.monic();
        }
        let rw = w.squarefree_part();
        s.mul(&rw).div_exact(&s.gcd(&rw)).unwrap().monic()
    }

    fn pth_root(&self) -> Self {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let rows = self
            .c
            .iter()
            .step_by(p)
            .map(|c| Poly::new(f, c.coeffs().iter().step_by(p).map(|a| f.pth_root(a)).collect()))
            .collect();
        BiPoly::new(f, rows)
    }

    pub fn fmt_with(&self, fmt_coeff: impl Fn(&K::Elem) -> String) -> String {
        let mut terms = Vec::new();
        for (i, p) in self.c.iter().enumerate().rev() {
            for j in (0..p.coeffs().len()).rev() {
                let a = p.coeff(j);
                if self.field.is_zero(&a) {
                    continue;
                }
                let mono = match (i, j) {
                    (0, 0) => String::new(),
                    (0, j) => mono("Y", j),
                    (i, 0) => mono("X", i),
                    (i, j) => format!("{}*{}", mono("X", i), mono("Y", j)),
                };
                let c = fmt_coeff(&a);
                terms.push(match (mono.is_empty(), c.as_str()) {
                    (true, _) => format!("({c})"),
                    (false, "1") => mono,
                    (false, _) => format!("({c})*{mono}"),
                });
            }
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn mono(v: &str, k: usize) -> String {
    if k == 1 {
        v.to_string()
    } else {
        format!("{v}^{k}")
    }
}

impl<K: Field> fmt::Debug for BiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.field.clone();
        write!(f, "{}", self.fmt_with(|a| field.fmt_elem(a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Fq;
    use proptest::prelude::*;

    fn bp(f: &Fq, grid: &[&[u32]]) -> BiPoly<Fq> {
        BiPoly::from_grid(f, grid.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn basics() {
        let f = Fq::new(3, 1).unwrap();
        let x = BiPoly::x(&f);
        let y = BiPoly::y(&f);
        let d = x.sub(&y);
        assert!(!d.is_symmetric());
        assert!(d.mul(&d).is_symmetric());
        assert_eq!(d.eval(&2, &1), 1);
        assert!(d.diagonal().is_zero());
        let s = x.mul(&y).add(&BiPoly::constant(&f, 1));
        assert_eq!(s.total_degree(), 2);
        assert_eq!(s.transpose(), s);
    }

    #[test]
    fn gcd_and_squarefree() {
        let f = Fq::new(3, 1).unwrap();
        let a = bp(&f, &[&[1, 1], &[0, 0, 1]]); // 1 + Y + X Y^2
        let b = bp(&f, &[&[2], &[1]]); // X + 2
        let c = bp(&f, &[&[0, 1, 1], &[1]]); // Y + Y^2 + X
        let ab = a.mul(&b);
        let ac = a.mul(&c);
        assert_eq!(ab.gcd(&ac), a.monic());
        let sq = a.mul(&a).mul(&b);
        assert_eq!(sq.squarefree_part(), a.mul(&b).monic());
        let cube = b.pow(3).mul(&c);
        assert_eq!(cube.squarefree_part(), b.mul(&c).monic());
        let yfac = BiPoly::from_y(&Poly::from_ints(&f, &[1, 1])).pow(2).mul(&b);
        assert_eq!(yfac.squarefree_part(), BiPoly::from_y(&Poly::from_ints(&f, &[1, 1])).mul(&b).monic());
    }

    proptest! {
        #[test]
        fn division_round_trip(a in prop::collection::vec(prop::collection::vec(0u32..3, 0..4), 1..4),
                               b in prop::collection::vec(prop::collection::vec(0u32..3, 0..4), 1..4)) {
            let f = Fq::new(3, 1).unwrap();
            let a = BiPoly::from_grid(&f, a);
            let b = BiPoly::from_grid(&f, b);
            prop_assume!(!b.is_zero());
            let ab = a.mul(&b);
            prop_assert_eq!(ab.div_exact(&b), Some(a.clone()));
            let (q, r) = a.div_rem(&b);
            prop_assert_eq!(q.mul(&b).add(&r), a);
        }
    }
}
