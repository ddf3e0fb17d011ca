use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{APoly, Embedding, ExtField, Fe, Field, Fq, Poly};
use crate::drinfeld::{hecke_image, AField, DrinfeldModule};
use crate::error::{Error, Result};

use super::bipoly::BiPoly;

/// psi(N) = |N| prod_{p | N} (1 + 1/|p|).
pub fn psi(n: &APoly) -> Result<u128> {
    if n.is_zero() || !n.is_monic() {
        return Err(Error::Invalid(format!("psi needs a monic N, got {n}")));
    }
    Ok(n.factor().iter().map(|(p, e)| p.norm().pow(e - 1) * (p.norm() + 1)).product())
}

/// How samples for the interpolation are drawn.
#[derive(Clone, Debug)]
pub struct SampleOptions {
    /// Samples come from the degree-k extension of A/P.
    pub extension: usize,
    /// Bound on the torsion splitting degree over the sample field.
    pub cap: usize,
    pub seed: u64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { extension: 2, cap: 24, seed: 1 }
    }
}

/// Reduction of Phi_m mod P, with coefficients in A/P.
#[derive(Clone, Debug)]
pub struct ModularPolynomial {
    pub m: APoly,
    pub residue: AField,
    pub phi: BiPoly<ExtField>,
    /// Sample j used for interpolation (in the sample field).
    pub samples: Vec<Fe>,
    /// Candidates dropped for supersingularity or splitting degree above the cap.
    pub skipped: usize,
    pub sample_field: AField,
}

fn check_level(m: &APoly, p: &APoly) -> Result<()> {
    if m.is_zero() || !m.is_monic() || !m.is_squarefree() && !m.is_one() {
        return Err(Error::Invalid(format!("level {m} must be monic and squarefree")));
    }
    if !m.gcd(p).is_one() {
        return Err(Error::Invalid(format!("level {m} meets the characteristic {p}")));
    }
    Ok(())
}

/// prod (Y - j') over T_m(j), descended to the field of j.
fn image_polynomial(base: &AField, j: &Fe, m: &APoly, cap: usize) -> Result<Poly<ExtField>> {
    let phi = DrinfeldModule::from_j(base, j);
    if phi.is_supersingular() {
        return Err(Error::Supersingular(base.fmt_elem(j)));
    }
    let h = hecke_image(&phi, m, cap)?;
    let big = h.field().field().clone();
    let mut prod = Poly::one(&big);
    for v in &h.values {
        prod = prod.mul(&Poly::linear(&big, v));
    }
    let c = prod
        .coeffs()
        .iter()
        .map(|c| h.torsion.emb.descend(c).ok_or(Error::NotRational))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(base.field(), c))
}

/// Phi_m over A/P by interpolation through Hecke images of sampled j.
pub fn compute_modular_polynomial(m: &APoly, residue: &AField, opts: &SampleOptions) -> Result<ModularPolynomial> {
    let p = residue.characteristic();
    if residue.degree() != p.deg() as usize {
        return Err(Error::Invalid("modular polynomials live over A/P itself".into()));
    }
    check_level(m, p)?;
    let r = residue.field();
    let (sf, emb) = residue.extend(opts.extension)?;
    if m.is_one() {
        let phi = BiPoly::x(r).sub(&BiPoly::y(r));
        return Ok(ModularPolynomial { m: m.clone(), residue: residue.clone(), phi, samples: Vec::new(), skipped: 0, sample_field: sf });
    }
    let n = psi(m)? as usize;
    let l = sf.field();
    let mut cands: Vec<Fe> = l.elements().collect();
    cands.shuffle(&mut ChaCha8Rng::seed_from_u64(opts.seed));

    let mut got: Vec<(Fe, Poly<ExtField>)> = Vec::new();
    let mut skipped = 0;
    let batch = rayon::current_num_threads().max(1) * 2;
    for chunk in cands.chunks(batch) {
        let res: Vec<(Fe, Result<Poly<ExtField>>)> =
            chunk.par_iter().map(|j| (j.clone(), image_polynomial(&sf, j, m, opts.cap))).collect();
        for (j, r) in res {
            match r {
                Ok(poly) => {
                    if got.len() <= n {
                        got.push((j, poly));
                    }
                }
                Err(Error::Supersingular(_)) | Err(Error::SplittingCap { .. }) => skipped += 1,
                Err(e) => return Err(e),
            }
        }
        if got.len() > n {
            break;
        }
    }
    if got.len() <= n {
        return Err(Error::InsufficientSamples(format!(
            "{} usable samples in a field of size {}, need {}",
            got.len(),
            l.size(),
            n + 1
        )));
    }
    let xs: Vec<Fe> = got.iter().map(|(j, _)| j.clone()).collect();
    let mut grid = vec![vec![r.zero(); n + 1]; n + 1];
    for k in 0..=n {
        let ys: Vec<Fe> = got.iter().map(|(_, poly)| poly.coeff(k)).collect();
        let ck = Poly::interpolate(l, &xs, &ys);
        if ck.deg() > n as i64 {
            return Err(Error::Invalid(format!("coefficient of Y^{k} has degree {} > {n}", ck.deg())));
        }
        for i in 0..=n {
            grid[i][k] = emb.descend(&ck.coeff(i)).ok_or(Error::NotRational)?;
        }
    }
    let phi = BiPoly::from_grid(r, grid);
    Ok(ModularPolynomial { m: m.clone(), residue: residue.clone(), phi, samples: xs, skipped, sample_field: sf })
}

impl ModularPolynomial {
    pub fn psi(&self) -> usize {
        psi(&self.m).unwrap() as usize
    }

    pub fn field(&self) -> &ExtField {
        self.residue.field()
    }

    /// Phi_m with coefficients pushed into an extension of A/P.
    pub fn over(&self, target: &AField) -> Result<BiPoly<ExtField>> {
        let e = self.residue.residue_embedding(target)?;
        Ok(self.phi.map(target.field(), |c| e.apply(c)))
    }

    /// Phi(j, Y) against the Hecke image of j, as polynomials in Y.
    pub fn validate_at(&self, base: &AField, j: &Fe, cap: usize) -> Result<bool> {
        let phi = self.over(base)?;
        let want = image_polynomial(base, j, &self.m, cap)?;
        let lead = phi.eval_x(j);
        let got = match lead.lead() {
            Some(c) => lead.scale(&base.field().inv(c)),
            None => return Ok(false),
        };
        Ok(got == want)
    }

    /// Held-out validation on fresh ordinary j from the sample field.
    pub fn validate_fresh(&self, count: usize, cap: usize, seed: u64) -> Result<usize> {
        let l = self.sample_field.field();
        let mut cands: Vec<Fe> = l.elements().filter(|j| !self.samples.contains(j)).collect();
        cands.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut ok = 0;
        let mut tried = 0;
        for j in cands {
            if tried == count {
                break;
            }
            match self.validate_at(&self.sample_field, &j, cap) {
                Ok(true) => {
                    ok += 1;
                    tried += 1;
                }
                Ok(false) => tried += 1,
                Err(Error::Supersingular(_)) | Err(Error::SplittingCap { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        if tried < count {
            return Err(Error::InsufficientSamples(format!("only {tried} fresh samples")));
        }
        Ok(ok)
    }

    /// Phi(t, t).
    pub fn diagonal(&self) -> Poly<ExtField> {
        self.phi.diagonal()
    }

    /// Coefficients as residues mod P, row-major over (X^i, Y^j).
    pub fn residue_grid(&self) -> Vec<Vec<APoly>> {
        let n = self.phi.deg_x().max(self.phi.deg_y()).max(0) as usize;
        (0..=n)
            .map(|i| (0..=n).map(|j| self.residue.to_residue(&self.phi.coeff(i, j)).unwrap()).collect())
            .collect()
    }

    /// `modpoly|q=..|char=<poly>|m=<poly>|coeffs=<row-major list>`.
    pub fn to_record(&self) -> String {
        let grid = self.residue_grid();
        let coeffs: Vec<String> = grid.iter().flatten().map(|c| c.to_string()).collect();
        format!(
            "modpoly|q={}|char={}|m={}|coeffs={}",
            self.residue.base().q(),
            self.residue.characteristic(),
            self.m,
            coeffs.join(";")
        )
    }

    pub fn from_record(line: &str) -> Result<ModularPolynomial> {
        let mut fields = std::collections::HashMap::new();
        let mut parts = line.trim().split('|');
        if parts.next() != Some("modpoly") {
            return Err(Error::Parse("not a modpoly record".into()));
        }
        for part in parts {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("bad field {part:?}")))?;
            fields.insert(k, v);
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| Error::Parse(format!("missing {k}")));
        let q: u64 = get("q")?.parse().map_err(|_| Error::Parse("bad q".into()))?;
        let f = Fq::from_q(q)?;
        let p = APoly::parse(&f, get("char")?)?;
        let m = APoly::parse(&f, get("m")?)?;
        let residue = AField::residue_field(&p)?;
        let cs = get("coeffs")?
            .split(';')
            .map(|s| APoly::parse(&f, s).map(|a| residue.gamma(&a)))
            .collect::<Result<Vec<_>>>()?;
        let n = (cs.len() as f64).sqrt().round() as usize;
        if n * n != cs.len() {
            return Err(Error::Parse("coefficient list is not square".into()));
        }
        let grid: Vec<Vec<Fe>> = cs.chunks(n).map(|c| c.to_vec()).collect();
        let phi = BiPoly::from_grid(residue.field(), grid);
        let (sf, _) = residue.extend(1)?;
        Ok(ModularPolynomial { m, residue, phi, samples: Vec::new(), skipped: 0, sample_field: sf })
    }
}

/// Roots of Phi_m(t, t) with multiplicity, in the splitting field over A/P.
#[derive(Clone, Debug)]
pub struct FixedPoints {
    pub field: AField,
    pub roots: Vec<(Fe, u32)>,
    pub degree: usize,
}

pub fn fixed_points(phi: &ModularPolynomial) -> Result<FixedPoints> {
    let d = phi.diagonal();
    if d.is_zero() {
        return Err(Error::Degenerate(format!("Phi_{}(t, t) vanishes identically", phi.m)));
    }
    let k = d.factor().iter().map(|(g, _)| g.deg() as usize).fold(1, num_integer::lcm);
    let (big, e) = phi.residue.extend(k)?;
    let dl = d.map(big.field(), |c| e.apply(c));
    let roots = dl.roots_with_multiplicity();
    Ok(FixedPoints { field: big, roots, degree: d.deg() as usize })
}

/// Each fixed point j satisfies j in T_m(j).
pub fn check_fixed_point(phi: &ModularPolynomial, fp: &FixedPoints, j: &Fe, cap: usize) -> Result<bool> {
    let module = DrinfeldModule::from_j(&fp.field, j);
    let h = hecke_image(&module, &phi.m, cap)?;
    Ok(h.values.contains(&h.torsion.emb.apply(j)))
}

/// Chinese remaindering of residue grids mod distinct characteristics.
pub fn crt_lift(polys: &[&ModularPolynomial]) -> Result<(APoly, Vec<Vec<APoly>>)> {
    let f = polys.first().ok_or_else(|| Error::Invalid("nothing to lift".into()))?.residue.base().clone();
    let n = polys.iter().map(|p| p.residue_grid().len()).max().unwrap();
    let mut modulus = Poly::one(&f);
    let mut acc = vec![vec![Poly::zero(&f); n]; n];
    for p in polys {
        let pc = p.residue.characteristic().clone();
        if !modulus.gcd(&pc).is_one() {
            return Err(Error::Invalid(format!("characteristic {pc} repeated")));
        }
        let g = p.residue_grid();
        let inv = modulus.inv_mod(&pc).unwrap();
        for i in 0..n {
            for j in 0..n {
                let r = g.get(i).and_then(|row| row.get(j)).cloned().unwrap_or_else(|| Poly::zero(&f));
                // acc + modulus * ((r - acc) / modulus mod pc)
                let t = r.sub(&acc[i][j]).mul(&inv).rem(&pc);
                acc[i][j] = acc[i][j].add(&modulus.mul(&t));
            }
        }
        modulus = modulus.mul(&pc);
    }
    Ok((modulus, acc))
}

/// Lift from all but the last characteristic and compare with the last.
pub fn consistent_across(polys: &[&ModularPolynomial]) -> Result<bool> {
    let (last, rest) = polys.split_last().ok_or_else(|| Error::Invalid("nothing to compare".into()))?;
    let (_, lifted) = crt_lift(rest)?;
    let g = last.residue_grid();
    let pc = last.residue.characteristic();
    Ok(lifted.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, c)| {
            let want = g.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(|| Poly::zero(c.field()));
            c.rem(pc) == want
        })
    }))
}

/// The embedding of the residue field into the sample field.
pub fn sample_embedding(phi: &ModularPolynomial) -> Result<Embedding> {
    phi.residue.residue_embedding(&phi.sample_field)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(f: &Fq, s: &str) -> APoly {
        APoly::parse(f, s).unwrap()
    }

    #[test]
    fn psi_values() {
        let f = Fq::new(3, 1).unwrap();
        assert_eq!(psi(&p(&f, "T")).unwrap(), 4);
        assert_eq!(psi(&p(&f, "T^2+T")).unwrap(), 16);
        assert_eq!(psi(&p(&f, "T^2+1")).unwrap(), 10);
        assert_eq!(psi(&p(&f, "T^2")).unwrap(), 12);
        assert_eq!(psi(&Poly::one(&f)).unwrap(), 1);
    }

    #[test]
    fn phi_t_in_characteristic_t2_plus_1() {
        let f = Fq::new(3, 1).unwrap();
        let res = AField::residue_field(&p(&f, "T^2+1")).unwrap();
        let m = p(&f, "T");
        let phi = compute_modular_polynomial(&m, &res, &SampleOptions::default()).unwrap();
        assert_eq!((phi.phi.deg_x(), phi.phi.deg_y()), (4, 4));
        assert!(phi.phi.is_symmetric());
        assert_eq!(phi.validate_fresh(5, 24, 77).unwrap(), 5);
        let fp = fixed_points(&phi).unwrap();
        assert!(fp.degree <= 8);
        for (j, _) in &fp.roots {
            assert!(check_fixed_point(&phi, &fp, j, 48).unwrap());
        }
        let rec = phi.to_record();
        let back = ModularPolynomial::from_record(&rec).unwrap();
        assert_eq!(back.phi, phi.phi);
        let one = compute_modular_polynomial(&Poly::one(&f), &res, &SampleOptions::default()).unwrap();
        assert!(fixed_points(&one).is_err());
    }

    #[test]
    fn lift_across_characteristics() {
        let f = Fq::new(3, 1).unwrap();
        let m = p(&f, "T");
        let mut phis = Vec::new();
        for d in 1..=4 {
            for c in crate::arith::monic_irreducibles(&f, d).filter(|c| *c != m) {
                let res = AField::residue_field(&c).unwrap();
                phis.push(compute_modular_polynomial(&m, &res, &SampleOptions::default()).unwrap());
            }
        }
        let refs: Vec<&ModularPolynomial> = phis.iter().collect();
        // too few characteristics to pin down coefficients of degree 36
        assert!(!consistent_across(&refs[..6]).unwrap());
        assert!(consistent_across(&refs[..17]).unwrap());
        let (_, lifted) = crt_lift(&refs[..20]).unwrap();
        assert_eq!(lifted.iter().flatten().map(|c| c.deg()).max(), Some(36));
        assert!(consistent_across(&refs).unwrap());
    }
}
