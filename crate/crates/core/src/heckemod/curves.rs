use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{resultant, Embedding, ExtField, Fe, Field, Poly};
use crate::drinfeld::AField;
use crate::error::{Error, Result};

use super::bipoly::BiPoly;
use super::modpoly::ModularPolynomial;

/// F(t1, t2) = 0 over A/P, stored monic and squarefree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCurve {
    pub residue: AField,
    pub f: BiPoly<ExtField>,
}

impl PlaneCurve {
    pub fn new(residue: &AField, f: &BiPoly<ExtField>) -> Result<PlaneCurve> {
        if f.total_degree() < 1 {
            return Err(Error::Invalid("a plane curve needs a nonconstant polynomial".into()));
        }
        Ok(PlaneCurve { residue: residue.clone(), f: f.squarefree_part() })
    }

    pub fn from_modular(phi: &ModularPolynomial) -> Result<PlaneCurve> {
        Self::new(&phi.residue, &phi.phi)
    }

    /// t2 = a t1 + b.
    pub fn line(residue: &AField, a: &Fe, b: &Fe) -> Result<PlaneCurve> {
        let r = residue.field();
        let f = BiPoly::y(r).sub(&BiPoly::x(r).scale(a)).sub(&BiPoly::constant(r, b.clone()));
        Self::new(residue, &f)
    }

    pub fn degree(&self) -> i64 {
        self.f.total_degree()
    }

    pub fn field(&self) -> &ExtField {
        self.residue.field()
    }

    /// Every component of `other` is a component of self.
    pub fn contains(&self, other: &PlaneCurve) -> bool {
        other.f.divides(&self.f)
    }
}

/// Phi pushed into a working extension of A/P.
struct Setup {
    l: ExtField,
    emb: Embedding,
    phi: BiPoly<ExtField>,
    psi: usize,
}

fn setup(phi: &ModularPolynomial, min_size: u128) -> Result<Setup> {
    let res = &phi.residue;
    let q = (res.base().q() as u128).pow(res.degree() as u32);
    let mut k = 1;
    while q.checked_pow(k as u32).is_some_and(|s| s < min_size) {
        k += 1;
    }
    let (big, _) = res.extend(k)?;
    let emb = res.residue_embedding(&big)?;
    let p = phi.phi.map(big.field(), |c| emb.apply(c));
    let psi = phi.psi();
    if p.deg_x() != psi as i64 || p.coeff_x(psi).deg() != 0 {
        return Err(Error::Invalid(format!("Phi_{} is not monic in X", phi.m)));
    }
    Ok(Setup { l: big.field().clone(), emb, phi: p, psi })
}

impl Setup {
    fn map_curve(&self, x: &PlaneCurve, phi: &ModularPolynomial) -> Result<BiPoly<ExtField>> {
        if x.residue.field() != phi.residue.field() || x.residue.t() != phi.residue.t() {
            return Err(Error::FieldMismatch);
        }
        Ok(x.f.map(&self.l, |c| self.emb.apply(c)))
    }
}

/// H_u(Y) = Res_X(Phi(X, u), F(X, Y)), interpolated from point values.
fn image_row(s: &Setup, f: &BiPoly<ExtField>, u: &Fe, nodes: &[Fe]) -> Poly<ExtField> {
    let a = s.phi.eval_y(u);
    let n = s.psi * f.deg_y().max(0) as usize + 1;
    let ys: Vec<Fe> = nodes[..n].iter().map(|y| resultant(&a, &f.eval_y(y))).collect();
    Poly::interpolate(&s.l, &nodes[..n], &ys)
}

/// Is (u, v) in T_m(F)?
fn point_in_image(s: &Setup, f: &BiPoly<ExtField>, u: &Fe, v: &Fe, nodes: &[Fe]) -> bool {
    let h = image_row(s, f, u, nodes);
    let g = s.phi.eval_y(v);
    if h.is_zero() {
        return true;
    }
    h.gcd(&g).deg() > 0
}

fn nodes(l: &ExtField, n: usize) -> Vec<Fe> {
    l.elements().take(n).collect()
}

/// Points of F over l found from random vertical and horizontal slices.
fn sample_points(f: &BiPoly<ExtField>, l: &ExtField, count: usize, seed: u64) -> Result<Vec<(Fe, Fe)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let tries = 400 * count;
    for i in 0..tries {
        if out.len() == count {
            break;
        }
        let c = l.random(&mut rng);
        if i % 2 == 0 {
            let g = f.eval_x(&c);
            if g.is_zero() {
                out.push((c, l.random(&mut rng)));
            } else if let Some(r) = g.roots().first() {
                out.push((c, r.clone()));
            }
        } else {
            let g = f.eval_y(&c);
            if g.is_zero() {
                out.push((l.random(&mut rng), c));
            } else if let Some(r) = g.roots().first() {
                out.push((r.clone(), c));
            }
        }
    }
    if out.len() < count {
        return Err(Error::InsufficientSamples(format!("found {} of {count} points on the curve", out.len())));
    }
    Ok(out)
}

/// Tests X subset T_m(Y) at `points` random points of X. A failing point is a proof
/// of non-containment; passing all points is evidence of containment.
pub fn contained_in_image(x: &PlaneCurve, y: &PlaneCurve, phi: &ModularPolynomial, points: usize, seed: u64) -> Result<bool> {
    let need = (phi.psi() * y.f.deg_y().max(0) as usize + 1) as u128;
    let s = setup(phi, (need * 8).max(64))?;
    let fx = s.map_curve(x, phi)?;
    let fy = s.map_curve(y, phi)?;
    let ns = nodes(&s.l, need as usize);
    let pts = sample_points(&fx, &s.l, points, seed)?;
    for (u, v) in pts {
        if !point_in_image(&s, &fy, &u, &v, &ns) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether X is contained in T_m(X), tested at random points.
pub fn is_stabilized(x: &PlaneCurve, phi: &ModularPolynomial) -> Result<bool> {
    contained_in_image(x, x, phi, 8, 0x5eed)
}

/// The unreduced image polynomial G with T_m(X) = {G = 0}, by interpolation of
/// G(u, v) = Res_Y(Phi(Y, v), Res_X(Phi(X, u), F(X, Y))).
pub fn hecke_image_polynomial(x: &PlaneCurve, phi: &ModularPolynomial) -> Result<BiPoly<ExtField>> {
    let psi = phi.psi();
    let dx = psi * psi * x.f.deg_x().max(0) as usize;
    let dy = psi * psi * x.f.deg_y().max(0) as usize;
    let row_nodes = psi * x.f.deg_y().max(0) as usize + 1;
    let need = (dx.max(dy).max(row_nodes) + 1) as u128;
    let s = setup(phi, need)?;
    let fx = s.map_curve(x, phi)?;
    let ns = nodes(&s.l, need as usize);
    let rows: Vec<Poly<ExtField>> = {
        use rayon::prelude::*;
        ns[..=dx]
            .par_iter()
            .map(|u| {
                let h = image_row(&s, &fx, u, &ns);
                let vals: Vec<Fe> = ns[..=dy].iter().map(|v| resultant(&s.phi.eval_y(v), &h)).collect();
                Poly::interpolate(&s.l, &ns[..=dy], &vals)
            })
            .collect()
    };
    // interpolate in u, coefficient by coefficient in v
    let mut grid = vec![vec![s.l.zero(); dy + 1]; dx + 1];
    for j in 0..=dy {
        let ys: Vec<Fe> = rows.iter().map(|r| r.coeff(j)).collect();
        let col = Poly::interpolate(&s.l, &ns[..=dx], &ys);
        for (i, row) in grid.iter_mut().enumerate() {
            row[j] = col.coeff(i);
        }
    }
    let g = BiPoly::from_grid(&s.l, grid);
    if g.is_zero() {
        return Err(Error::Degenerate(format!(
            "elimination vanishes identically for {}",
            x.f.fmt_with(|c| x.residue.fmt_elem(c))
        )));
    }
    let r = x.residue.field();
    let mut out = vec![vec![r.zero(); dy + 1]; dx + 1];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, c) in row.iter_mut().enumerate() {
            *c = s.emb.descend(&g.coeff(i, j)).ok_or(Error::NotRational)?;
        }
    }
    Ok(BiPoly::from_grid(r, out))
}

/// T_m(X), squarefree.
pub fn hecke_image_curve(x: &PlaneCurve, phi: &ModularPolynomial) -> Result<PlaneCurve> {
    let g = hecke_image_polynomial(x, phi)?;
    PlaneCurve::new(&x.residue, &g)
}

/// Exact stabilization test: F divides the unreduced image polynomial.
pub fn is_stabilized_exact(x: &PlaneCurve, phi: &ModularPolynomial) -> Result<bool> {
    let g = hecke_image_polynomial(x, phi)?;
    Ok(x.f.divides(&g))
}

/// Bound 2^2 psi(m)^2 deg X on deg T_m(X).
pub fn image_degree_bound(x: &PlaneCurve, phi: &ModularPolynomial) -> i64 {
    4 * (phi.psi() * phi.psi()) as i64 * x.degree()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{APoly, Fq};
    use crate::heckemod::modpoly::{compute_modular_polynomial, SampleOptions};

    fn setup_t() -> (AField, ModularPolynomial) {
        let f = Fq::new(3, 1).unwrap();
        let res = AField::residue_field(&APoly::parse(&f, "T^2+1").unwrap()).unwrap();
        let phi = compute_modular_polynomial(&APoly::parse(&f, "T").unwrap(), &res, &SampleOptions::default()).unwrap();
        (res, phi)
    }

    #[test]
    fn diagonal_and_lines() {
        let (res, phi) = setup_t();
        let r = res.field();
        let diag = PlaneCurve::line(&res, &r.one(), &r.zero()).unwrap();
        assert!(is_stabilized(&diag, &phi).unwrap());
        assert!(is_stabilized_exact(&diag, &phi).unwrap());
        let img = hecke_image_curve(&diag, &phi).unwrap();
        assert!(img.degree() <= image_degree_bound(&diag, &phi));
        assert!(img.contains(&diag));
        let shifted = PlaneCurve::line(&res, &r.one(), &r.one()).unwrap();
        assert!(!is_stabilized(&shifted, &phi).unwrap());
        assert!(!is_stabilized_exact(&shifted, &phi).unwrap());
        // symmetry of T_m
        assert!(contained_in_image(&diag, &img, &phi, 6, 2).unwrap());
        assert!(contained_in_image(&shifted, &hecke_image_curve(&shifted, &phi).unwrap(), &phi, 6, 3).unwrap());
    }

    #[test]
    fn vertical_lines() {
        let (res, phi) = setup_t();
        let r = res.field();
        let d = phi.diagonal();
        let fixed = d.roots();
        let nonfixed = r.elements().find(|c| !r.is_zero(&d.eval(c))).unwrap();
        let vert = |c: &Fe| PlaneCurve::new(&res, &BiPoly::x(r).sub(&BiPoly::constant(r, c.clone()))).unwrap();
        assert!(!is_stabilized(&vert(&nonfixed), &phi).unwrap());
        assert!(!is_stabilized_exact(&vert(&nonfixed), &phi).unwrap());
        for c in fixed {
            assert!(is_stabilized(&vert(&c), &phi).unwrap());
        }
    }
}
