use crate::arith::linalg::{charpoly, ColumnSolver, Mat};
use crate::arith::{APoly, Embedding, ExtField, Fe, Field};
use crate::error::{Error, Result};
use crate::ore::OrePoly;

use super::afield::AField;

pub type LPoly = OrePoly<ExtField>;

/// phi_T = t + g*tau + delta*tau^2 over an A-field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrinfeldModule {
    base: AField,
    g: Fe,
    delta: Fe,
}

impl DrinfeldModule {
    pub fn new(base: &AField, g: Fe, delta: Fe) -> Result<Self> {
        if base.field().is_zero(&delta) {
            return Err(Error::Degenerate("delta = 0".into()));
        }
        Ok(DrinfeldModule { base: base.clone(), g, delta })
    }

    /// Canonical representative: (j, j^q), or (0, 1) for j = 0.
    pub fn from_j(base: &AField, j: &Fe) -> Self {
        let l = base.field();
        let (g, delta) =
            if l.is_zero(j) { (l.zero(), l.one()) } else { (j.clone(), l.frobenius(j)) };
        DrinfeldModule { base: base.clone(), g, delta }
    }

    pub fn base(&self) -> &AField {
        &self.base
    }

    pub fn field(&self) -> &ExtField {
        self.base.field()
    }

    pub fn g(&self) -> &Fe {
        &self.g
    }

    pub fn delta(&self) -> &Fe {
        &self.delta
    }

    /// j = g^{q+1} / delta.
    pub fn j(&self) -> Fe {
        let l = self.field();
        let gq1 = l.mul(&l.frobenius(&self.g), &self.g);
        l.div(&gq1, &self.delta)
    }

    /// The isomorphic module (c^{q-1} g, c^{q^2-1} delta).
    pub fn twist(&self, c: &Fe) -> Self {
        let l = self.field();
        let cq = l.frobenius(c);
        let cq2 = l.frobenius(&cq);
        let ci = l.inv(c);
        DrinfeldModule {
            base: self.base.clone(),
            g: l.mul(&self.g, &l.mul(&cq, &ci)),
            delta: l.mul(&self.delta, &l.mul(&cq2, &ci)),
        }
    }

    pub fn phi_t(&self) -> LPoly {
        OrePoly::new(self.field(), vec![self.base.t().clone(), self.g.clone(), self.delta.clone()])
    }

    /// phi_a by Horner in phi_T.
    pub fn phi_a(&self, a: &APoly) -> LPoly {
        let l = self.field();
        let pt = self.phi_t();
        let mut acc = OrePoly::zero(l);
        for &c in a.coeffs().iter().rev() {
            acc = acc.mul(&pt).add(&OrePoly::constant(l, l.from_base(c)));
        }
        acc
    }

    /// Height 2 at the characteristic: the tau^{deg P} coefficient of phi_P vanishes.
    pub fn is_supersingular(&self) -> bool {
        let p = self.base.characteristic();
        let phi = self.phi_a(p);
        self.field().is_zero(&phi.coeff(p.deg() as usize))
    }

    pub fn base_change(&self, e: &Embedding) -> Self {
        DrinfeldModule { base: self.base.base_change(e), g: e.apply(&self.g), delta: e.apply(&self.delta) }
    }

    /// Coordinates of phi_T on an F_q-basis of a phi_T-stable subspace.
    pub fn action_matrix(&self, basis: &[Fe]) -> Result<Mat> {
        let l = self.field();
        let cols: Vec<Vec<u32>> = basis.iter().map(|b| b.0.clone()).collect();
        let solver = ColumnSolver::new(l.base(), &cols);
        if solver.rank() != basis.len() {
            return Err(Error::NotSubspace("kernel vectors are F_q-dependent".into()));
        }
        let pt = self.phi_t();
        let mut m = vec![vec![0u32; basis.len()]; basis.len()];
        for (j, b) in basis.iter().enumerate() {
            let img = pt.eval(b);
            let x = solver.solve(&img.0).ok_or(Error::NotStable)?;
            for (i, v) in x.into_iter().enumerate() {
                m[i][j] = v;
            }
        }
        Ok(m)
    }

    /// The isogeny with the given finite phi-stable kernel (an F_q-basis in L).
    pub fn quotient_by_kernel(&self, basis: &[Fe]) -> Result<Isogeny> {
        let l = self.field();
        let m = self.action_matrix(basis)?;
        let degree = charpoly(l.base(), &m);
        if self.base.characteristic().divides(&degree) {
            return Err(Error::CharacteristicKernel);
        }
        let f = OrePoly::kernel_of_basis(l, basis)?;
        let d = basis.len();
        let fphi = f.mul(&self.phi_t());
        let delta2 = fphi.coeff(d + 2);
        let fd1 = if d >= 1 { f.coeff(d - 1) } else { l.zero() };
        let corr = l.mul(&delta2, &l.frobenius(&l.frobenius(&fd1)));
        let g2 = l.sub(&fphi.coeff(d + 1), &corr);
        let target = DrinfeldModule::new(&self.base, g2, delta2)?;
        if !is_isogeny(&f, self, &target) {
            return Err(Error::NotStable);
        }
        Ok(Isogeny { source: self.clone(), target, f, degree })
    }
}

/// f * phi_T == phi'_T * f.
pub fn is_isogeny(f: &LPoly, phi: &DrinfeldModule, phi2: &DrinfeldModule) -> bool {
    phi.base == phi2.base && !f.is_zero() && f.mul(&phi.phi_t()) == phi2.phi_t().mul(f)
}

#[derive(Clone, Debug)]
pub struct Isogeny {
    pub source: DrinfeldModule,
    pub target: DrinfeldModule,
    pub f: LPoly,
    /// Characteristic polynomial of phi_T on the kernel; the N with
    /// ker f = A/N when the kernel is cyclic.
    pub degree: APoly,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Fq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (Fq, AField) {
        let f = Fq::new(3, 1).unwrap();
        let p = APoly::parse(&f, "T^2+1").unwrap();
        (f.clone(), AField::new(&p, 4).unwrap())
    }

    #[test]
    fn j_invariant_basics() {
        let (_, k) = setup();
        let l = k.field();
        let phi = DrinfeldModule::from_j(&k, &l.zero());
        assert_eq!((phi.g().clone(), phi.delta().clone()), (l.zero(), l.one()));
        let phi = DrinfeldModule::from_j(&k, &l.one());
        assert_eq!((phi.g().clone(), phi.delta().clone()), (l.one(), l.one()));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let j = l.random(&mut rng);
            let phi = DrinfeldModule::from_j(&k, &j);
            assert_eq!(phi.j(), j);
            let c = l.random(&mut rng);
            if !l.is_zero(&c) {
                assert_eq!(phi.twist(&c).j(), j);
            }
        }
    }

    #[test]
    fn phi_is_a_ring_map() {
        let (f, k) = setup();
        let l = k.field();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let phi = DrinfeldModule::new(&k, l.random(&mut rng), l.one()).unwrap();
        let a = APoly::parse(&f, "T^2+T+2").unwrap();
        let b = APoly::parse(&f, "2*T^3+T").unwrap();
        let pa = phi.phi_a(&a);
        assert_eq!(pa.degree(), Some(4));
        assert_eq!(pa.coeff(0), k.gamma(&a));
        assert_eq!(phi.phi_a(&a.add(&b)), pa.add(&phi.phi_a(&b)));
        assert_eq!(phi.phi_a(&a.mul(&b)), pa.mul(&phi.phi_a(&b)));
        assert_eq!(phi.phi_a(&APoly::x(&f)), phi.phi_t());
    }

    #[test]
    fn isogeny_predicate() {
        let (_, k) = setup();
        let l = k.field();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let phi = DrinfeldModule::new(&k, l.random(&mut rng), l.gen()).unwrap();
        let one = OrePoly::one(l);
        assert!(is_isogeny(&one, &phi, &phi));
        let other = DrinfeldModule::new(&k, l.add(phi.g(), &l.one()), l.gen()).unwrap();
        assert!(!is_isogeny(&one, &phi, &other));
        assert_eq!(phi.quotient_by_kernel(&[]).unwrap().target, phi);
    }

    #[test]
    fn frobenius_is_an_isogeny_to_the_twisted_module() {
        // with deg P = 1, t is fixed by Frobenius and tau: phi -> phi^(q)
        let f = Fq::new(3, 1).unwrap();
        let k = AField::new(&APoly::parse(&f, "T+1").unwrap(), 3).unwrap();
        let l = k.field();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let phi = DrinfeldModule::new(&k, l.random(&mut rng), l.gen()).unwrap();
        let frob = DrinfeldModule::new(&k, l.frobenius(phi.g()), l.frobenius(phi.delta())).unwrap();
        assert!(is_isogeny(&OrePoly::tau(l), &phi, &frob));
        assert!(!is_isogeny(&OrePoly::tau(l), &phi, &phi) || phi == frob);
    }
}
