use crate::arith::{legendre, APoly, AbsLog, Fq, Poly};
use crate::error::{Error, Result};

use super::field::{Case, ImagQuadField};
use super::forms::{enumerate_reduced_forms, QuadForm};

/// The order A + f O_K of discriminant f^2 D, f monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadOrder {
    k: ImagQuadField,
    f: APoly,
    d: APoly,
}

impl QuadOrder {
    pub fn new(k: &ImagQuadField, f: &APoly) -> Result<Self> {
        if f.is_zero() || !f.is_monic() {
            return Err(Error::Invalid(format!("conductor {f} must be monic")));
        }
        let d = f.mul(f).mul(k.d());
        Ok(QuadOrder { k: k.clone(), f: f.clone(), d })
    }

    pub fn maximal(k: &ImagQuadField) -> Self {
        Self::new(k, &Poly::one(k.field())).unwrap()
    }

    /// Splits a discriminant d = f^2 D with D squarefree and f monic.
    pub fn from_discriminant(d: &APoly) -> Result<Self> {
        let fld = d.field();
        if d.is_zero() {
            return Err(Error::Invalid("zero discriminant".into()));
        }
        let mut f = Poly::one(fld);
        let mut core = Poly::constant(fld, *d.lead().unwrap());
        for (p, e) in d.monic().factor() {
            f = f.mul(&p.pow(e as u64 / 2));
            if e % 2 == 1 {
                core = core.mul(&p);
            }
        }
        Self::new(&ImagQuadField::new(&core)?, &f)
    }

    pub fn field(&self) -> &ImagQuadField {
        &self.k
    }

    pub fn conductor(&self) -> &APoly {
        &self.f
    }

    pub fn discriminant(&self) -> &APoly {
        &self.d
    }

    pub fn fq(&self) -> &Fq {
        self.k.field()
    }

    /// #Pic(O) = h(O_K) prod_{P^k || f} |P|^{k-1} (|P| - (D/P)).
    pub fn pic_order(&self) -> u128 {
        let mut h = self.k.class_number_ok();
        for (p, k) in self.f.factor() {
            let n = p.norm();
            let chi = legendre(self.k.d(), &p).expect("prime factor") as i128;
            h *= n.pow(k - 1) * (n as i128 - chi) as u128;
        }
        h
    }

    /// The canonical reduced forms, one per class of Pic(O).
    pub fn reduced_forms(&self) -> Result<Vec<QuadForm>> {
        enumerate_reduced_forms(&self.d)
    }

    /// Whether the monic prime p (prime to f) splits in O.
    pub fn splits(&self, p: &APoly) -> Result<bool> {
        if !p.is_monic() || !p.is_irreducible() {
            return Err(Error::NotIrreducible(p.to_string()));
        }
        Ok(legendre(&self.d, p)? == 1)
    }

    /// The class of a prime above the split prime p, as a reduced form (p, b, c).
    pub fn frobenius_class(&self, p: &APoly) -> Result<QuadForm> {
        if !self.splits(p)? {
            return Err(Error::Invalid(format!("{p} does not split in the order of disc {}", self.d)));
        }
        let fld = self.fq();
        let dm = self.d.rem(p);
        // a square root of d mod p, by factoring X^2 - d over A/p
        let b = sqrt_mod_prime(&dm, p).ok_or_else(|| Error::Invalid("no square root".into()))?;
        let four = fld.from_int(4);
        let c = b.mul(&b).sub(&self.d).div_exact(&p.scale(&four)).unwrap();
        QuadForm::new(p.clone(), b, c).reduce()
    }

    /// Whether p splits into principal primes.
    pub fn splits_principally(&self, p: &APoly) -> Result<bool> {
        Ok(self.frobenius_class(p)? == QuadForm::principal(&self.d))
    }

    /// Height of the CM order: log_q |d| = deg d.
    pub fn cm_height(&self) -> AbsLog {
        AbsLog::of(&self.d)
    }

    /// |d|^{1/2} + C_q, with C_q = q for deg d even and sqrt(q)(q+1)/2 for odd.
    pub fn height_bound(&self) -> f64 {
        let q = self.fq().q() as f64;
        let n = self.d.deg() as f64;
        q.powf(n / 2.0) + c_q(self.fq().q(), self.d.deg())
    }

    pub fn case(&self) -> Case {
        self.k.case()
    }
}

fn c_q(q: u32, deg_d: i64) -> f64 {
    let q = q as f64;
    if deg_d % 2 == 0 {
        q
    } else {
        q.sqrt() * (q + 1.0) / 2.0
    }
}

/// log_q B_q: q for deg d even, sqrt(q)(q+1)/2 for deg d odd.
pub fn log_bq(q: u32, deg_d: i64) -> f64 {
    c_q(q, deg_d)
}

/// Estimate for -v_inf(j) of the CM point attached to a reduced form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JValuation {
    /// |z| = 1: |j| <= 1/q, i.e. v_inf(j) >= 1.
    Bounded,
    /// |z| > 1: -v_inf(j) <= |z| log_q B_q.
    Estimate { abs_z: f64, bound: f64 },
}

/// |z| = q^{deg d/2 - deg a} for the CM point of a reduced form of disc d.
pub fn j_valuation_estimate(form: &QuadForm) -> Result<JValuation> {
    if !form.is_reduced() {
        return Err(Error::Invalid(format!("{form} is not reduced")));
    }
    let d = form.disc();
    let q = form.field().q() as f64;
    let e = d.deg() as f64 / 2.0 - form.a.deg() as f64;
    if e == 0.0 {
        return Ok(JValuation::Bounded);
    }
    let abs_z = q.powf(e);
    Ok(JValuation::Estimate { abs_z, bound: abs_z * log_bq(form.field().q(), d.deg()) })
}

/// A root of X^2 - a in A/p, as a polynomial of degree < deg p.
fn sqrt_mod_prime(a: &APoly, p: &APoly) -> Option<APoly> {
    use crate::arith::ExtField;
    use crate::arith::Field;
    let fld = a.field();
    if a.is_zero() {
        return Some(Poly::zero(fld));
    }
    let l = ExtField::new(fld, p.deg() as usize);
    let root = l.roots_of_irreducible(p).into_iter().next()?;
    // A/p ~ L via T -> root
    let img = a.map(&l, |&c| l.from_base(c)).eval(&root);
    let x = Poly::<ExtField>::new(&l, vec![l.neg(&img), l.zero(), l.one()]);
    let s = x.roots().into_iter().next()?;
    // pull back: express s as a polynomial in root
    let n = l.n();
    let mut cols = Vec::with_capacity(n);
    let mut pw = l.one();
    for _ in 0..n {
        cols.push(pw.0.clone());
        pw = l.mul(&pw, &root);
    }
    let solver = crate::arith::linalg::ColumnSolver::new(fld, &cols);
    let c = solver.solve(&s.0)?;
    Some(Poly::new(fld, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::field::imaginary_discriminants;

    fn p(f: &Fq, s: &str) -> APoly {
        APoly::parse(f, s).unwrap()
    }

    #[test]
    fn conductor_formula_matches_forms() {
        for q in [3u32, 5] {
            let f = Fq::new(q, 1).unwrap();
            for n in 1..=3 {
                for k in imaginary_discriminants(&f, n) {
                    for c in Poly::monics(&f, 1) {
                        let o = QuadOrder::new(&k, &c).unwrap();
                        let forms = o.reduced_forms().unwrap();
                        assert_eq!(forms.len() as u128, o.pic_order(), "{}", o.discriminant());
                    }
                }
            }
        }
    }

    #[test]
    fn from_discriminant_splits_conductor() {
        let f = Fq::new(3, 1).unwrap();
        let d = p(&f, "T^3+2*T").mul(&p(&f, "T+1").pow(2));
        let o = QuadOrder::from_discriminant(&d).unwrap();
        assert_eq!(o.conductor(), &p(&f, "T+1"));
        assert_eq!(o.field().d(), &p(&f, "T^3+2*T"));
    }

    #[test]
    fn frobenius_classes() {
        let f = Fq::new(3, 1).unwrap();
        let k = ImagQuadField::new(&p(&f, "T^3+2*T")).unwrap();
        let o = QuadOrder::maximal(&k);
        let mut split = 0;
        for d in 1..=3 {
            for pr in crate::arith::monic_irreducibles(&f, d) {
                if o.splits(&pr).unwrap() {
                    split += 1;
                    let c = o.frobenius_class(&pr).unwrap();
                    assert!(c.is_reduced());
                    assert_eq!(c.disc(), *o.discriminant());
                } else {
                    assert!(o.frobenius_class(&pr).is_err());
                }
            }
        }
        assert!(split > 0);
    }

    #[test]
    fn heights_and_j_estimates() {
        let f = Fq::new(3, 1).unwrap();
        let o = QuadOrder::maximal(&ImagQuadField::new(&p(&f, "T^3+2*T")).unwrap());
        assert!((o.height_bound() - (27f64.sqrt() + 3f64.sqrt() * 2.0)).abs() < 1e-9);
        assert_eq!(o.cm_height(), AbsLog::Deg(3));
        let f9 = Fq::new(3, 2).unwrap();
        let d = APoly::parse(&f9, "T^3+T+1").unwrap();
        let g = QuadForm::principal(&d);
        match j_valuation_estimate(&g).unwrap() {
            JValuation::Estimate { abs_z, bound } => {
                assert!((abs_z - 27.0).abs() < 1e-9);
                assert!((bound - 405.0).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
        let f = Fq::new(3, 1).unwrap();
        let d = p(&f, "2*T^2+1");
        let top = crate::quad::forms::all_reduced_forms(&d)
            .unwrap()
            .into_iter()
            .find(|g| g.a.deg() == 1)
            .unwrap();
        assert_eq!(j_valuation_estimate(&top).unwrap(), JValuation::Bounded);
    }
}
