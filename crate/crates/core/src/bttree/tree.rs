use std::fmt;

use crate::arith::{APoly, Poly};
use crate::error::{Error, Result};

use super::padic::PadicScalar;

/// The class of the lattice spanned by the columns of [[p^n, b], [0, 1]],
/// b reduced mod p^n. Equivalently the ball {x : v(x - b) >= n} in k_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeVertex {
    p: APoly,
    n: i64,
    b: PadicScalar,
}

pub type Matrix2 = [[PadicScalar; 2]; 2];

impl TreeVertex {
    pub fn new(p: &APoly, n: i64, b: &PadicScalar) -> Result<Self> {
        if b.prime() != p {
            return Err(Error::Invalid("vertex and scalar primes differ".into()));
        }
        if b.precision() < n {
            return Err(Error::Precision { needed: n, have: b.precision() });
        }
        Ok(TreeVertex { p: p.clone(), n, b: b.reduce_mod(n) })
    }

    /// The standard lattice A_p^2.
    pub fn root(p: &APoly) -> Self {
        TreeVertex { p: p.clone(), n: 0, b: PadicScalar::zero(p, 0) }
    }

    pub fn prime(&self) -> &APoly {
        &self.p
    }

    pub fn level(&self) -> i64 {
        self.n
    }

    pub fn offset(&self) -> &PadicScalar {
        &self.b
    }

    /// [[p^n, b], [0, 1]] with entries known mod p^prec.
    pub fn matrix(&self, prec: i64) -> Matrix2 {
        let p = &self.p;
        [
            [PadicScalar::p_power(p, self.n, prec), self.b.lift(prec)],
            [PadicScalar::zero(p, prec), PadicScalar::p_power(p, 0, prec)],
        ]
    }

    /// Level of the smallest ball containing both.
    fn meet_level(&self, o: &Self) -> i64 {
        let m = self.n.min(o.n);
        let diff = self.b.reduce_mod(m).sub(&o.b.reduce_mod(m));
        m.min(diff.min_valuation())
    }

    /// The vertex where the paths from self and o towards the end at infinity merge.
    pub fn join(&self, o: &Self) -> Self {
        let m = self.meet_level(o);
        TreeVertex { p: self.p.clone(), n: m, b: self.b.reduce_mod(m) }
    }

    pub fn distance(&self, o: &Self) -> u64 {
        assert_eq!(self.p, o.p, "vertices of different trees");
        (self.n + o.n - 2 * self.meet_level(o)) as u64
    }

    pub fn parent(&self) -> Self {
        TreeVertex { p: self.p.clone(), n: self.n - 1, b: self.b.reduce_mod(self.n - 1) }
    }

    /// The |p| vertices one level down.
    pub fn children(&self) -> Vec<Self> {
        let f = self.p.field();
        let d = self.p.deg() as usize;
        let q = f.q() as u64;
        let base = self.b.lift(self.n + 1);
        (0..q.pow(d as u32))
            .map(|idx| {
                let mut c = Vec::with_capacity(d);
                let mut r = idx;
                for _ in 0..d {
                    c.push((r % q) as u32);
                    r /= q;
                }
                let digit = PadicScalar::from_poly(&self.p, &Poly::new(f, c), self.n + 1 - self.n.min(0));
                let step = digit.mul(&PadicScalar::p_power(&self.p, self.n, self.n + 1 + 8));
                TreeVertex { p: self.p.clone(), n: self.n + 1, b: base.add(&step).reduce_mod(self.n + 1) }
            })
            .collect()
    }

    /// Parent first, then children: |p| + 1 vertices.
    pub fn neighbors(&self) -> Vec<Self> {
        let mut out = vec![self.parent()];
        out.extend(self.children());
        out
    }

    /// Text form `p=<poly>;n=<int>;b=<digits>@<valuation>`.
    pub fn to_text(&self) -> String {
        format!("p={};n={};b={}", self.p, self.n, self.b)
    }

    pub fn parse(f: &crate::arith::Fq, s: &str) -> Result<Self> {
        let mut p = None;
        let mut n = None;
        let mut b = None;
        for part in s.split(';') {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("bad vertex field {part:?}")))?;
            match k.trim() {
                "p" => p = Some(APoly::parse(f, v.trim())?),
                "n" => n = Some(v.trim().parse::<i64>().map_err(|e| Error::Parse(e.to_string()))?),
                "b" => b = Some(v.trim().to_string()),
                _ => return Err(Error::Parse(format!("unknown vertex field {k:?}"))),
            }
        }
        let (p, n, b) = match (p, n, b) {
            (Some(p), Some(n), Some(b)) => (p, n, b),
            _ => return Err(Error::Parse("vertex needs p, n and b".into())),
        };
        if !p.is_monic() || !p.is_irreducible() {
            return Err(Error::NotIrreducible(p.to_string()));
        }
        let (digits, v) = b.rsplit_once('@').ok_or_else(|| Error::Parse("b needs <digits>@<valuation>".into()))?;
        let v: i64 = v.trim().parse().map_err(|e: std::num::ParseIntError| Error::Parse(e.to_string()))?;
        let mut acc = PadicScalar::zero(&p, n);
        if !digits.trim().is_empty() {
            for (i, d) in digits.split(',').enumerate() {
                let d = APoly::parse(f, d.trim())?;
                if d.deg() >= p.deg() {
                    return Err(Error::Parse(format!("digit {d} is not reduced mod {p}")));
                }
                let term = PadicScalar::from_poly(&p, &d, n - v - i as i64 + 1)
                    .mul(&PadicScalar::p_power(&p, v + i as i64, n + 1 + (v + i as i64).abs()));
                acc = acc.add(&term.lift(n));
            }
        }
        TreeVertex::new(&p, n, &acc)
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn precision_error(needed: i64, have: i64) -> Error {
    Error::Precision { needed, have }
}

/// The vertex of the lattice spanned by the columns of m.
pub fn vertex_from_matrix(m: &Matrix2) -> Result<TreeVertex> {
    let p = m[0][0].prime().clone();
    let [[a, b], [c, d]] = m.clone();
    // put the bottom entry of smaller valuation in column 2
    let (a, b, c, d) = match (c.valuation(), d.valuation()) {
        (None, None) => return Err(precision_error(c.precision().max(d.precision()) + 1, c.precision().max(d.precision()))),
        (Some(vc), Some(vd)) if vc < vd => (b, a, d, c),
        (Some(_), None) => (b, a, d, c),
        _ => (a, b, c, d),
    };
    let ratio = c.div(&d)?;
    let a1 = a.sub(&ratio.mul(&b));
    let va = a1.valuation().ok_or_else(|| precision_error(a1.precision() + 1, a1.precision()))?;
    let vd = d.valuation().unwrap();
    let unit = d.mul(&PadicScalar::p_power(&p, -vd, d.precision() + 2 * vd.abs() + 1));
    let top = b.div(&unit)?.mul(&PadicScalar::p_power(&p, -vd, b.precision() + 2 * vd.abs() + 1));
    let n = va - vd;
    if top.precision() < n {
        return Err(precision_error(n, top.precision()));
    }
    TreeVertex::new(&p, n, &top)
}

pub fn mat_mul(x: &Matrix2, y: &Matrix2) -> Matrix2 {
    let e = |i: usize, j: usize| x[i][0].mul(&y[0][j]).add(&x[i][1].mul(&y[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// g . v for g in GL_2(k_p), computed at precision prec.
pub fn act(g: &Matrix2, v: &TreeVertex, prec: i64) -> Result<TreeVertex> {
    vertex_from_matrix(&mat_mul(g, &v.matrix(prec)))
}

/// The median of three vertices: the deepest of the pairwise joins.
pub fn center(v1: &TreeVertex, v2: &TreeVertex, v3: &TreeVertex) -> TreeVertex {
    let js = [v1.join(v2), v1.join(v3), v2.join(v3)];
    js.into_iter().max_by_key(|j| j.level()).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TripleInvariant(pub u64, pub u64, pub u64);

pub fn triple_invariant(v1: &TreeVertex, v2: &TreeVertex, v3: &TreeVertex) -> TripleInvariant {
    let c = center(v1, v2, v3);
    TripleInvariant(v1.distance(&c), v2.distance(&c), v3.distance(&c))
}

/// N_1, N_2, N_3 and the pair degrees (N_1N_2, N_1N_3, N_2N_3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveData {
    pub levels: [APoly; 3],
    pub pair_degrees: [APoly; 3],
}

pub fn triple_to_curve_data(f: &crate::arith::Fq, invariants: &[(APoly, TripleInvariant)]) -> Result<CurveData> {
    let mut ns = [Poly::one(f), Poly::one(f), Poly::one(f)];
    for (p, TripleInvariant(a, b, c)) in invariants {
        if !p.is_monic() || !p.is_irreducible() {
            return Err(Error::NotIrreducible(p.to_string()));
        }
        for (n, e) in ns.iter_mut().zip([a, b, c]) {
            *n = n.mul(&p.pow(*e));
        }
    }
    let pairs = [ns[0].mul(&ns[1]), ns[0].mul(&ns[2]), ns[1].mul(&ns[2])];
    Ok(CurveData { levels: ns, pair_degrees: pairs })
}

/// The count (|p| - 1)(|p| + 1)^{n-1} as displayed for two excluded
/// directions, generalized to (|p| + 1 - e)(|p| + 1)^{n-1}.
pub fn count_outgoing_paths(norm_p: u64, n: u32, excluded: u64) -> Result<u128> {
    if excluded > norm_p + 1 {
        return Err(Error::Invalid(format!("{excluded} excluded directions at a vertex of valence {}", norm_p + 1)));
    }
    if n == 0 {
        return Ok(1);
    }
    Ok((norm_p + 1 - excluded) as u128 * (norm_p as u128 + 1).pow(n - 1))
}

/// Number of non-backtracking paths of length n (|p| + 1 - e)|p|^{n-1}.
pub fn count_outgoing_paths_exact(norm_p: u64, n: u32, excluded: u64) -> Result<u128> {
    if excluded > norm_p + 1 {
        return Err(Error::Invalid(format!("{excluded} excluded directions at a vertex of valence {}", norm_p + 1)));
    }
    if n == 0 {
        return Ok(1);
    }
    Ok((norm_p + 1 - excluded) as u128 * (norm_p as u128).pow(n - 1))
}

/// Brute force: walk the tree from v, skipping the first `excluded` neighbors
/// of v, never stepping back.
pub fn enumerate_outgoing_paths(v: &TreeVertex, n: u32, excluded: usize) -> u128 {
    fn walk(prev: &TreeVertex, cur: &TreeVertex, left: u32) -> u128 {
        if left == 0 {
            return 1;
        }
        cur.neighbors().iter().filter(|w| *w != prev).map(|w| walk(cur, w, left - 1)).sum()
    }
    if n == 0 {
        return 1;
    }
    v.neighbors().iter().skip(excluded).map(|w| walk(v, w, n - 1)).sum()
}

/// prod (2 n_p + 1) over the factorization of N.
pub fn endomorphism_count_bound(n: &APoly) -> u128 {
    n.monic().factor().iter().map(|(_, e)| 2 * *e as u128 + 1).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Fq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(f: &Fq, s: &str) -> APoly {
        APoly::parse(f, s).unwrap()
    }

    fn random_vertex(pr: &APoly, rng: &mut ChaCha8Rng) -> TreeVertex {
        let mut v = TreeVertex::root(pr);
        for _ in 0..rng.gen_range(0..3) {
            v = v.parent();
        }
        for _ in 0..rng.gen_range(0..5) {
            let ch = v.children();
            v = ch[rng.gen_range(0..ch.len())].clone();
        }
        v
    }

    fn random_matrix(pr: &APoly, rng: &mut ChaCha8Rng, prec: i64) -> Matrix2 {
        let f = pr.field();
        loop {
            let mut e = || {
                let c: Vec<u32> = (0..4).map(|_| rng.gen_range(0..f.q())).collect();
                let k = rng.gen_range(-1..2);
                PadicScalar::from_poly(pr, &Poly::new(f, c), prec).mul(&PadicScalar::p_power(pr, k, prec + 2))
            };
            let m = [[e(), e()], [e(), e()]];
            let det = m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]));
            if det.valuation().is_some_and(|v| v <= 2) {
                return m;
            }
        }
    }

    #[test]
    fn basic_vertices() {
        let f = Fq::new(3, 1).unwrap();
        let pr = p(&f, "T");
        let id = [
            [PadicScalar::p_power(&pr, 0, 10), PadicScalar::zero(&pr, 10)],
            [PadicScalar::zero(&pr, 10), PadicScalar::p_power(&pr, 0, 10)],
        ];
        assert_eq!(vertex_from_matrix(&id).unwrap(), TreeVertex::root(&pr));
        let mut dg = id.clone();
        dg[0][0] = PadicScalar::p_power(&pr, 1, 10);
        let v1 = vertex_from_matrix(&dg).unwrap();
        assert_eq!((v1.level(), v1.offset().is_zero()), (1, true));
        assert_eq!(TreeVertex::root(&pr).distance(&v1), 1);
        let v2 = v1.children()[0].clone();
        assert_eq!(v2.level(), 2);
        assert_eq!(v2.distance(&TreeVertex::root(&pr)), 2);
        assert_eq!(TreeVertex::root(&pr).neighbors().len(), 4);
        let text = v2.to_text();
        assert_eq!(TreeVertex::parse(&f, &text).unwrap(), v2);
    }

    #[test]
    fn precision_exhaustion_is_reported() {
        let f = Fq::new(3, 1).unwrap();
        let pr = p(&f, "T+1");
        let z = PadicScalar::zero(&pr, 3);
        let m = [[PadicScalar::p_power(&pr, 0, 3), z.clone()], [z.clone(), z]];
        assert!(matches!(vertex_from_matrix(&m), Err(Error::Precision { .. })));
    }

    #[test]
    fn neighbors_form_a_tree() {
        let f = Fq::new(3, 1).unwrap();
        let pr = p(&f, "T^2+1");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let v = random_vertex(&pr, &mut rng);
            let ns = v.neighbors();
            assert_eq!(ns.len(), 10);
            for (i, w) in ns.iter().enumerate() {
                assert_eq!(v.distance(w), 1);
                assert!(w.neighbors().contains(&v));
                for u in &ns[i + 1..] {
                    assert_eq!(w.distance(u), 2);
                }
            }
        }
    }

    #[test]
    fn metric_and_median() {
        let f = Fq::new(3, 1).unwrap();
        let pr = p(&f, "T+2");
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let a = random_vertex(&pr, &mut rng);
            let b = random_vertex(&pr, &mut rng);
            let c = random_vertex(&pr, &mut rng);
            assert_eq!(a.distance(&b), b.distance(&a));
            assert_eq!(a.distance(&b) == 0, a == b);
            assert!(a.distance(&c) <= a.distance(&b) + b.distance(&c));
            let m = center(&a, &b, &c);
            for (x, y) in [(&a, &b), (&a, &c), (&b, &c)] {
                assert_eq!(x.distance(&m) + m.distance(y), x.distance(y));
            }
            assert_eq!(center(&b, &c, &a), m);
            assert_eq!(center(&c, &a, &b), m);
            assert_eq!(center(&b, &a, &c), m);
        }
        let v = random_vertex(&pr, &mut rng);
        assert_eq!(center(&v, &v, &v), v);
        assert_eq!(triple_invariant(&v, &v, &v), TripleInvariant(0, 0, 0));
        let w = v.children()[1].children()[2].clone();
        assert_eq!(center(&v, &w, &v), v);
        assert_eq!(triple_invariant(&v, &w, &w), TripleInvariant(2, 0, 0));
    }

    #[test]
    fn invariants_under_change_of_basis() {
        let f = Fq::new(3, 1).unwrap();
        let pr = p(&f, "T");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let prec = 24;
        for _ in 0..30 {
            let vs: Vec<_> = (0..3).map(|_| random_vertex(&pr, &mut rng)).collect();
            let g = random_matrix(&pr, &mut rng, prec);
            let ws: Vec<_> = vs.iter().map(|v| act(&g, v, prec).unwrap()).collect();
            assert_eq!(vs[0].distance(&vs[1]), ws[0].distance(&ws[1]));
            assert_eq!(triple_invariant(&vs[0], &vs[1], &vs[2]), triple_invariant(&ws[0], &ws[1], &ws[2]));
            // right multiplication by GL_2(A_p) keeps the lattice
            let u = [
                [PadicScalar::p_power(&pr, 0, prec), PadicScalar::from_poly(&pr, &p(&f, "T+2"), prec)],
                [PadicScalar::from_poly(&pr, &p(&f, "T"), prec), PadicScalar::p_power(&pr, 0, prec)],
            ];
            let m = mat_mul(&vs[0].matrix(prec), &u);
            assert_eq!(vertex_from_matrix(&m).unwrap(), vs[0]);
        }
    }

    #[test]
    fn outgoing_paths() {
        let f = Fq::new(3, 1).unwrap();
        let root = TreeVertex::root(&p(&f, "T"));
        assert_eq!(count_outgoing_paths(3, 0, 2).unwrap(), 1);
        assert_eq!(count_outgoing_paths(3, 1, 2).unwrap(), 2);
        assert_eq!(count_outgoing_paths(3, 2, 2).unwrap(), 8);
        assert!(count_outgoing_paths(3, 1, 5).is_err());
        for n in 0..=3 {
            for e in 0..=2 {
                let brute = enumerate_outgoing_paths(&root, n, e as usize);
                assert_eq!(count_outgoing_paths_exact(3, n, e).unwrap(), brute);
                assert!(count_outgoing_paths(3, n, e).unwrap() >= brute);
            }
        }
        assert_eq!(endomorphism_count_bound(&Poly::one(&f)), 1);
        let n = p(&f, "T").pow(2).mul(&p(&f, "T+1"));
        assert_eq!(endomorphism_count_bound(&n), 15);
    }

    #[test]
    fn curve_data() {
        let f = Fq::new(3, 1).unwrap();
        let t = p(&f, "T");
        let cd = triple_to_curve_data(&f, &[]).unwrap();
        assert!(cd.levels.iter().all(|x| x.is_one()));
        let cd = triple_to_curve_data(&f, &[(t.clone(), TripleInvariant(1, 0, 0))]).unwrap();
        assert_eq!(cd.levels, [t.clone(), Poly::one(&f), Poly::one(&f)]);
        assert_eq!(cd.pair_degrees, [t.clone(), t.clone(), Poly::one(&f)]);
        let t1 = p(&f, "T+1");
        let cd = triple_to_curve_data(&f, &[(t.clone(), TripleInvariant(1, 0, 2)), (t1.clone(), TripleInvariant(0, 1, 1))]).unwrap();
        assert_eq!(cd.levels[2], t.pow(2).mul(&t1));
        assert_eq!(cd.pair_degrees[1], t.pow(3).mul(&t1));
    }
}
