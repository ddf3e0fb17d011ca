use std::sync::Arc;

use crate::arith::linalg::ColumnSolver;
use crate::arith::{APoly, Embedding, ExtField, Fe, Field, Fq};
use crate::error::{Error, Result};

/// A finite field L with a structure map A -> L, T -> t, whose kernel is
/// generated by the monic prime P (the characteristic).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AField {
    l: ExtField,
    t: Fe,
    p: APoly,
}

impl AField {
    /// The degree-n extension of F_q with t the smallest root of P (deg P | n).
    pub fn new(p: &APoly, n: usize) -> Result<AField> {
        if !p.is_monic() || !p.is_irreducible() {
            return Err(Error::NotIrreducible(p.to_string()));
        }
        let d = p.deg() as usize;
        if n % d != 0 {
            return Err(Error::Invalid(format!("deg {p} = {d} does not divide {n}")));
        }
        let l = ExtField::new(p.field(), n);
        let t = l.roots_of_irreducible(p).into_iter().next().expect("P splits in L");
        Ok(AField { l, t, p: p.clone() })
    }

    /// A/P itself.
    pub fn residue_field(p: &APoly) -> Result<AField> {
        AField::new(p, p.deg().max(1) as usize)
    }

    pub fn from_parts(l: ExtField, t: Fe, p: APoly) -> Result<AField> {
        let pt = p.map(&l, |&c| l.from_base(c)).eval(&t);
        if !l.is_zero(&pt) {
            return Err(Error::Invalid("t is not a root of the characteristic".into()));
        }
        Ok(AField { l, t, p })
    }

    pub fn field(&self) -> &ExtField {
        &self.l
    }

    pub fn base(&self) -> &Fq {
        self.l.base()
    }

    pub fn t(&self) -> &Fe {
        &self.t
    }

    pub fn characteristic(&self) -> &APoly {
        &self.p
    }

    /// [L : F_q].
    pub fn degree(&self) -> usize {
        self.l.n()
    }

    pub fn gamma(&self, a: &APoly) -> Fe {
        let l = &self.l;
        a.coeffs().iter().rev().fold(l.zero(), |acc, &c| l.add(&l.mul(&acc, &self.t), &l.from_base(c)))
    }

    /// The degree-k extension of L with t carried along the canonical embedding.
    pub fn extend(&self, k: usize) -> Result<(AField, Arc<Embedding>)> {
        let big = ExtField::new(self.base(), self.l.n() * k);
        let e = self.l.embedding_into(&big)?;
        Ok((self.base_change(&e), e))
    }

    pub fn base_change(&self, e: &Embedding) -> AField {
        assert!(*e.src() == self.l, "embedding does not start at this field");
        AField { l: e.dst().clone(), t: e.apply(&self.t), p: self.p.clone() }
    }

    /// The residue r with deg r < deg P and c = r(t), if c lies in A/P.
    pub fn to_residue(&self, c: &Fe) -> Option<APoly> {
        let d = self.p.deg() as usize;
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.l.one();
        for _ in 0..d {
            cols.push(cur.0.clone());
            cur = self.l.mul(&cur, &self.t);
        }
        let x = ColumnSolver::new(self.base(), &cols).solve(&c.0)?;
        Some(APoly::new(self.base(), x))
    }

    /// The embedding of L into target sending t to target's t. Needs L
    /// generated by t, i.e. L = A/P.
    pub fn residue_embedding(&self, target: &AField) -> Result<Embedding> {
        if self.p != target.p || self.l.n() != self.p.deg() as usize {
            return Err(Error::FieldMismatch);
        }
        let x = self.to_residue(&self.l.gen()).ok_or(Error::FieldMismatch)?;
        let root = target.gamma(&x);
        Ok(Embedding::from_root(&self.l, &target.l, root))
    }

    /// Smallest d | [L:F_q] with c in F_{q^d}.
    pub fn subfield_degree(&self, c: &Fe) -> usize {
        let n = self.l.n();
        (1..=n).find(|d| n % d == 0 && self.l.in_subfield(c, *d)).unwrap()
    }

    pub fn fmt_elem(&self, c: &Fe) -> String {
        self.l.fmt_elem(c)
    }

    pub fn parse_elem(&self, s: &str) -> Result<Fe> {
        self.l.parse_elem(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_and_residues() {
        let f = Fq::new(3, 1).unwrap();
        let p = APoly::parse(&f, "T^2+1").unwrap();
        let k = AField::new(&p, 4).unwrap();
        assert!(k.field().is_zero(&k.gamma(&p)));
        let a = APoly::parse(&f, "T^3+2*T+1").unwrap();
        let r = k.to_residue(&k.gamma(&a)).unwrap();
        assert_eq!(r, a.rem(&p));
        assert_eq!(k.subfield_degree(k.t()), 2);
        let (big, e) = k.extend(3).unwrap();
        assert_eq!(big.degree(), 12);
        assert_eq!(*big.t(), e.apply(k.t()));
        assert!(AField::new(&p, 3).is_err());
        assert!(AField::new(&APoly::parse(&f, "T^2+2").unwrap(), 2).is_err());
    }
}
