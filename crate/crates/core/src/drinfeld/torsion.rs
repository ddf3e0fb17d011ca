use std::sync::Arc;

use num_bigint::BigUint;

use crate::arith::linalg::{nullspace, poly_of_matrix, Mat};
use crate::arith::{APoly, Embedding, Fe, Field, Poly};
use crate::error::{Error, Result};
use crate::ore::OrePoly;

use super::afield::AField;
use super::module::DrinfeldModule;

/// Default bound on [L_K : L] for torsion splitting fields.
pub const DEFAULT_SPLIT_CAP: usize = 12;

/// F_q-dimension of phi[a] over an algebraic closure.
pub fn expected_dimension(phi: &DrinfeldModule, a: &APoly) -> usize {
    let p = phi.base().characteristic();
    let mut rest = a.monic();
    let mut k = 0;
    while p.divides(&rest) && !rest.is_constant() {
        rest = rest.div_exact(p).unwrap();
        k += 1;
    }
    let tame = 2 * rest.deg() as usize;
    if k > 0 && !phi.is_supersingular() {
        tame + k * p.deg() as usize
    } else {
        tame
    }
}

/// Smallest K <= cap such that phi[a] is rational over the degree-K
/// extension of L, with the right gcd of phi_a and tau^{nK} - 1 there.
fn splitting(phi: &DrinfeldModule, a: &APoly, cap: usize) -> Result<(usize, OrePoly<crate::arith::ExtField>)> {
    let l = phi.field();
    let n = l.n();
    let target = expected_dimension(phi, a);
    let pa = phi.phi_a(a);
    let one = OrePoly::one(l);
    if target == 0 {
        return Ok((1, one));
    }
    let shift = OrePoly::term(l, l.one(), n);
    let mut rho = one.clone();
    for k in 1..=cap {
        rho = shift.mul(&rho).right_rem(&pa)?;
        let h = pa.rgcd(&rho.sub(&one));
        if h.deg() as usize == target {
            return Ok((k, h));
        }
    }
    Err(Error::SplittingCap { cap })
}

pub fn splitting_degree(phi: &DrinfeldModule, a: &APoly, cap: usize) -> Result<usize> {
    Ok(splitting(phi, a, cap)?.0)
}

/// phi[a] realized inside its splitting field, with the A-action.
#[derive(Clone, Debug)]
pub struct Torsion {
    pub a: APoly,
    /// [L_K : L].
    pub splitting_degree: usize,
    pub emb: Arc<Embedding>,
    /// The module base-changed to L_K.
    pub module: DrinfeldModule,
    pub basis: Vec<Fe>,
    /// Column j holds the coordinates of phi_T(basis[j]).
    pub action: Mat,
}

impl Torsion {
    pub fn compute(phi: &DrinfeldModule, a: &APoly, cap: usize) -> Result<Torsion> {
        let (k, h) = splitting(phi, a, cap)?;
        Self::in_extension(phi, a, k, &h)
    }

    /// As `compute`, but in the degree-k extension for a k that is known to split phi[a].
    pub fn compute_in(phi: &DrinfeldModule, a: &APoly, k: usize) -> Result<Torsion> {
        let l = phi.field();
        let pa = phi.phi_a(a);
        let shift = OrePoly::term(l, l.one(), l.n() * k);
        let rho = shift.right_rem(&pa)?;
        let h = pa.rgcd(&rho.sub(&OrePoly::one(l)));
        if h.deg() as usize != expected_dimension(phi, a) {
            return Err(Error::Invalid(format!("phi[{a}] is not split in degree {k}")));
        }
        Self::in_extension(phi, a, k, &h)
    }

    fn in_extension(phi: &DrinfeldModule, a: &APoly, k: usize, h: &OrePoly<crate::arith::ExtField>) -> Result<Torsion> {
        let (big, emb) = phi.base().extend(k)?;
        let module = phi.base_change(&emb);
        let lk = big.field();
        let hk = OrePoly::new(lk, h.coeffs().iter().map(|c| emb.apply(c)).collect());
        let basis = if h.deg() <= 0 {
            Vec::new()
        } else {
            let nk = lk.n();
            let mut rows = vec![vec![0u32; nk]; nk];
            for i in 0..nk {
                let mut e = vec![0u32; nk];
                e[i] = 1;
                let img = hk.eval(&Fe(e));
                for (r, v) in img.0.into_iter().enumerate() {
                    rows[r][i] = v;
                }
            }
            nullspace(lk.base(), &rows, nk).into_iter().map(Fe).collect()
        };
        let action = module.action_matrix(&basis)?;
        Ok(Torsion { a: a.clone(), splitting_degree: k, emb, module, basis, action })
    }

    pub fn field(&self) -> &AField {
        self.module.base()
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn size(&self) -> BigUint {
        BigUint::from(self.field().base().q()).pow(self.basis.len() as u32)
    }

    /// The element with the given coordinates.
    pub fn element(&self, coords: &[u32]) -> Fe {
        let l = self.module.field();
        let mut acc = l.zero();
        for (c, b) in coords.iter().zip(&self.basis) {
            if *c != 0 {
                acc = l.add(&acc, &l.mul(&l.from_base(*c), b));
            }
        }
        acc
    }

    /// Coordinate vectors spanning the kernel of b(phi_T) on this module.
    pub fn kernel_of(&self, b: &APoly) -> Mat {
        let m = poly_of_matrix(self.field().base(), b, &self.action);
        nullspace(self.field().base(), &m, self.dimension())
    }

    /// Invariant factors e_1 | e_2 | ... with phi[a] = sum of A/e_i.
    pub fn elementary_divisors(&self) -> Vec<APoly> {
        let f = self.field().base().clone();
        let mut per_prime: Vec<(APoly, Vec<usize>)> = Vec::new();
        for (p, _) in self.a.factor() {
            let dp = p.deg() as usize;
            let mut dims = vec![0usize];
            let mut pw = Poly::one(&f);
            loop {
                pw = pw.mul(&p);
                let d = self.kernel_of(&pw).len();
                if d == *dims.last().unwrap() {
                    break;
                }
                dims.push(d);
            }
            // blocks with exponent >= i
            let counts: Vec<usize> = dims.windows(2).map(|w| (w[1] - w[0]) / dp).collect();
            let nblocks = counts.first().copied().unwrap_or(0);
            let exps: Vec<usize> = (1..=nblocks).map(|j| counts.iter().filter(|&&c| c >= j).count()).collect();
            per_prime.push((p, exps));
        }
        let r = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut out: Vec<APoly> = (0..r)
            .map(|j| {
                per_prime.iter().fold(Poly::one(&f), |acc, (p, e)| {
                    acc.mul(&p.pow(e.get(j).copied().unwrap_or(0) as u64))
                })
            })
            .collect();
        out.reverse();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Fq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_module(k: &AField, seed: u64) -> DrinfeldModule {
        let l = k.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let j = l.random(&mut rng);
            let phi = DrinfeldModule::from_j(k, &j);
            if !l.is_zero(&j) && !phi.is_supersingular() {
                return phi;
            }
        }
    }

    #[test]
    fn prime_torsion_is_a_p_squared() {
        let f = Fq::new(3, 1).unwrap();
        let pc = APoly::parse(&f, "T^2+1").unwrap();
        let k = AField::new(&pc, 2).unwrap();
        let phi = random_module(&k, 11);
        let p = APoly::parse(&f, "T+1").unwrap();
        let t = Torsion::compute(&phi, &p, 24).unwrap();
        assert_eq!(t.dimension(), 2);
        assert_eq!(t.size(), BigUint::from(9u32));
        assert_eq!(t.elementary_divisors(), vec![p.clone(), p.clone()]);
        let pa = t.module.phi_a(&p);
        for b in &t.basis {
            assert!(t.module.field().is_zero(&pa.eval(b)));
        }
        let one = Torsion::compute(&phi, &Poly::one(&f), 24).unwrap();
        assert_eq!(one.dimension(), 0);
        assert!(one.elementary_divisors().is_empty());
    }

    #[test]
    fn characteristic_torsion_drops_rank() {
        let f = Fq::new(3, 1).unwrap();
        let pc = APoly::parse(&f, "T").unwrap();
        let k = AField::new(&pc, 2).unwrap();
        let l = k.field();
        let mut seen = (false, false);
        for j in l.elements() {
            let phi = DrinfeldModule::from_j(&k, &j);
            let t = Torsion::compute(&phi, &pc, 24).unwrap();
            if phi.is_supersingular() {
                assert_eq!(t.dimension(), 0);
                seen.0 = true;
            } else {
                assert_eq!(t.dimension(), 1);
                assert_eq!(t.elementary_divisors(), vec![pc.clone()]);
                seen.1 = true;
            }
        }
        assert!(seen.0 && seen.1);
    }
}
