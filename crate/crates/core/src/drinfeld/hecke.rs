use std::collections::BTreeSet;

use crate::arith::linalg::{mat_vec, span_key, Mat};
use crate::arith::{APoly, Fe};
use crate::error::{Error, Result};

use super::afield::AField;
use super::module::{DrinfeldModule, Isogeny};
use super::torsion::Torsion;

/// T_m(j(phi)): the targets of all cyclic isogenies of degree m.
#[derive(Clone, Debug)]
pub struct HeckeImage {
    pub m: APoly,
    pub torsion: Torsion,
    pub isogenies: Vec<Isogeny>,
    /// j-invariants in the splitting field, sorted, with multiplicity.
    pub values: Vec<Fe>,
}

impl HeckeImage {
    pub fn field(&self) -> &AField {
        self.torsion.field()
    }

    /// The values as elements of the source field; fails if some value is
    /// not rational there.
    pub fn descend(&self) -> Result<Vec<Fe>> {
        let mut out = self
            .values
            .iter()
            .map(|v| self.torsion.emb.descend(v).ok_or(Error::NotRational))
            .collect::<Result<Vec<_>>>()?;
        out.sort();
        Ok(out)
    }
}

fn check_level(phi: &DrinfeldModule, m: &APoly) -> Result<()> {
    if m.is_zero() || !m.is_monic() {
        return Err(Error::Invalid(format!("level {m} must be monic")));
    }
    if !m.is_squarefree() {
        return Err(Error::Invalid(format!("level {m} is not squarefree")));
    }
    if !m.gcd(phi.base().characteristic()).is_one() {
        return Err(Error::Invalid(format!(
            "level {m} meets the characteristic {}",
            phi.base().characteristic()
        )));
    }
    Ok(())
}

/// The |p|+1 cyclic A/p-submodules of phi[p] inside `tor` (coordinate bases).
pub fn lines(tor: &Torsion, p: &APoly) -> Vec<Mat> {
    let f = tor.field().base().clone();
    let q = f.q() as usize;
    let d = p.deg() as usize;
    let vp = tor.kernel_of(p);
    let mut seen: BTreeSet<Mat> = BTreeSet::new();
    let mut out = Vec::new();
    let total = q.pow(vp.len() as u32);
    for idx in 1..total {
        let mut v = vec![0u32; tor.dimension()];
        let mut r = idx;
        for b in &vp {
            let c = (r % q) as u32;
            r /= q;
            for (x, y) in v.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(c, *y));
            }
        }
        let mut gens = vec![v];
        for _ in 1..d {
            let next = mat_vec(&f, &tor.action, gens.last().unwrap());
            gens.push(next);
        }
        let key = span_key(&f, &gens);
        if seen.insert(key.clone()) {
            out.push(key);
        }
    }
    out
}

/// Cyclic A/m-submodules of phi[m] as F_q-bases inside the torsion field.
pub fn cyclic_kernels(tor: &Torsion, m: &APoly) -> Vec<Vec<Fe>> {
    let mut acc: Vec<Mat> = vec![Vec::new()];
    for (p, _) in m.factor() {
        let ls = lines(tor, &p);
        let mut next = Vec::with_capacity(acc.len() * ls.len());
        for a in &acc {
            for l in &ls {
                let mut v = a.clone();
                v.extend(l.iter().cloned());
                next.push(v);
            }
        }
        acc = next;
    }
    acc.into_iter().map(|vs| vs.iter().map(|c| tor.element(c)).collect()).collect()
}

/// Hecke image of j(phi) under T_m, m squarefree and prime to the characteristic.
pub fn hecke_image(phi: &DrinfeldModule, m: &APoly, cap: usize) -> Result<HeckeImage> {
    check_level(phi, m)?;
    let tor = Torsion::compute(phi, m, cap)?;
    finish(tor, m)
}

/// As `hecke_image`, computing inside the degree-k extension, which must split phi[m].
pub fn hecke_image_in(phi: &DrinfeldModule, m: &APoly, k: usize) -> Result<HeckeImage> {
    check_level(phi, m)?;
    let tor = Torsion::compute_in(phi, m, k)?;
    finish(tor, m)
}

fn finish(tor: Torsion, m: &APoly) -> Result<HeckeImage> {
    let mut isogenies = Vec::new();
    for ker in cyclic_kernels(&tor, m) {
        isogenies.push(tor.module.quotient_by_kernel(&ker)?);
    }
    let mut values: Vec<Fe> = isogenies.iter().map(|i| i.target.j()).collect();
    values.sort();
    Ok(HeckeImage { m: m.clone(), torsion: tor, isogenies, values })
}

/// Both sides of T_{p2} o T_{p1} = T_{p1 p2} at j(phi), as sorted multisets
/// inside the splitting field W of phi[p1 p2]. The p2-torsion of every
/// p1-isogenous module is the isogenous image of phi[p2], so it is W-rational
/// as well and no further extension is needed.
pub fn composition_sides(
    phi: &DrinfeldModule,
    p1: &APoly,
    p2: &APoly,
    cap: usize,
) -> Result<(Vec<Fe>, Vec<Fe>)> {
    let m = p1.mul(p2);
    let direct = hecke_image(phi, &m, cap)?;
    let phi_w = direct.torsion.module.clone();
    let first = hecke_image_in(&phi_w, p1, 1)?;
    let mut composed = Vec::new();
    for iso in &first.isogenies {
        let second = hecke_image_in(&iso.target, p2, 1)?;
        composed.extend(second.values);
    }
    composed.sort();
    Ok((composed, direct.values))
}

/// psi(m) = |m| prod (1 + 1/|p|) for squarefree monic m.
pub fn psi_squarefree(m: &APoly) -> u128 {
    m.factor().iter().map(|(p, _)| p.norm() + 1).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{Field, Fq};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ordinary(k: &AField, rng: &mut ChaCha8Rng) -> DrinfeldModule {
        let l = k.field();
        loop {
            let phi = DrinfeldModule::from_j(k, &l.random(rng));
            if !phi.is_supersingular() {
                return phi;
            }
        }
    }

    #[test]
    fn degree_one_images_have_q_plus_one_points() {
        let f = Fq::new(3, 1).unwrap();
        let k = AField::new(&APoly::parse(&f, "T^2+1").unwrap(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..4 {
            let phi = ordinary(&k, &mut rng);
            for p in ["T", "T+1", "T+2"] {
                let p = APoly::parse(&f, p).unwrap();
                let h = hecke_image(&phi, &p, 24).unwrap();
                assert_eq!(h.values.len(), 4);
                for iso in &h.isogenies {
                    assert_eq!(iso.degree, p);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_levels() {
        let f = Fq::new(3, 1).unwrap();
        let k = AField::new(&APoly::parse(&f, "T").unwrap(), 1).unwrap();
        let phi = DrinfeldModule::from_j(&k, &k.field().one());
        assert!(hecke_image(&phi, &APoly::parse(&f, "T").unwrap(), 12).is_err());
        assert!(hecke_image(&phi, &APoly::parse(&f, "T^2+2*T+1").unwrap(), 12).is_err());
    }

    #[test]
    fn composition_of_degree_one_operators() {
        let f = Fq::new(3, 1).unwrap();
        let k = AField::new(&APoly::parse(&f, "T^2+1").unwrap(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let phi = ordinary(&k, &mut rng);
        let p1 = APoly::parse(&f, "T").unwrap();
        let p2 = APoly::parse(&f, "T+2").unwrap();
        let (a, b) = composition_sides(&phi, &p1, &p2, 24).unwrap();
        assert_eq!(a.len(), 16);
        assert_eq!(a, b);
    }

    #[test]
    fn hecke_is_symmetric() {
        let f = Fq::new(3, 1).unwrap();
        let k = AField::new(&APoly::parse(&f, "T^2+1").unwrap(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let phi = ordinary(&k, &mut rng);
        let p = APoly::parse(&f, "T+1").unwrap();
        let h = hecke_image(&phi, &p, 24).unwrap();
        let big = h.field().clone();
        for jp in &h.values {
            let phi2 = DrinfeldModule::from_j(&big, jp);
            let back = hecke_image(&phi2, &p, 24).unwrap();
            let j0 = back.torsion.emb.apply(&h.torsion.emb.apply(&phi.j()));
            assert!(back.values.contains(&j0));
        }
    }
}
