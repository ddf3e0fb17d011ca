use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::Field;
use super::fq::Fq;
use super::linalg::{ColumnSolver, Mat};
use super::poly::Poly;
use super::text;
use crate::error::{Error, Result};

/// Element of F_{q^n}: coefficients of the residue polynomial in `x`, length n.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Fe(pub Vec<u32>);

impl Ord for Fe {
    /// Highest coefficient compared first, so the order matches `index_of`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Fe {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct ExtInner {
    base: Fq,
    n: usize,
    modulus: Poly<Fq>,
    /// x^n = sum of `c * x^i` over these (i, c).
    low: Vec<(usize, u32)>,
    /// frob[j] = (x^j)^q.
    frob: Vec<Vec<u32>>,
}

/// F_{q^n} = F_q[x]/(m) with m the first monic irreducible of degree n in
/// the enumeration order of `Poly::monic_from_index`, skipping m(0) = 0.
#[derive(Clone)]
pub struct ExtField(Arc<ExtInner>);

type Key = (u32, u32, usize);

fn field_cache() -> &'static Mutex<HashMap<Key, Arc<OnceLock<ExtField>>>> {
    static C: OnceLock<Mutex<HashMap<Key, Arc<OnceLock<ExtField>>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn embedding_cache() -> &'static Mutex<HashMap<(Key, usize), Arc<OnceLock<Arc<Embedding>>>>> {
    static C: OnceLock<Mutex<HashMap<(Key, usize), Arc<OnceLock<Arc<Embedding>>>>>> =
        OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Irreducibility by gcd(x^{q^i} - x, f) = 1 for i <= n/2, exiting at the
/// first small factor (most candidates fail quickly).
fn is_irreducible_early(f: &Poly<Fq>) -> bool {
    let n = f.deg();
    if n <= 1 {
        return n == 1;
    }
    let x = Poly::x(f.field());
    let q = BigUint::from(f.field().q());
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        h = h.pow_mod(&q, f);
        if !h.sub(&x).gcd(f).is_one() {
            return false;
        }
    }
    true
}

fn first_irreducible(base: &Fq, n: usize) -> Poly<Fq> {
    let q = base.q() as u64;
    let mut idx: u64 = 0;
    loop {
        if n > 1 && idx % q == 0 {
            idx += 1;
            continue;
        }
        let f = Poly::monic_from_index(base, n, idx);
        if is_irreducible_early(&f) {
            return f;
        }
        idx += 1;
    }
}

impl ExtField {
    /// The cached degree-n extension of `base`.
    pub fn new(base: &Fq, n: usize) -> ExtField {
        assert!(n >= 1, "extension degree must be positive");
        let key = (base.p(), base.e(), n);
        let cell = {
            let mut c = field_cache().lock().unwrap();
            c.entry(key).or_insert_with(|| Arc::new(OnceLock::new())).clone()
        };
        cell.get_or_init(|| ExtField::build(base, n)).clone()
    }

    fn build(base: &Fq, n: usize) -> ExtField {
        let modulus = if n == 1 { Poly::x(base) } else { first_irreducible(base, n) };
        let low = (0..n)
            .filter_map(|i| {
                let c = base.neg(modulus.coeff(i));
                (c != 0).then_some((i, c))
            })
            .collect();
        let tmp = ExtField(Arc::new(ExtInner { base: base.clone(), n, modulus, low, frob: Vec::new() }));
        let xq = tmp.pow_u64(&tmp.gen(), base.q() as u64);
        let mut frob = Vec::with_capacity(n);
        let mut cur = tmp.one();
        for _ in 0..n {
            frob.push(cur.0.clone());
            cur = tmp.mul(&cur, &xq);
        }
        let mut inner = Arc::try_unwrap(tmp.0).ok().expect("unshared during construction");
        inner.frob = frob;
        ExtField(Arc::new(inner))
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn modulus(&self) -> &Poly<Fq> {
        &self.0.modulus
    }

    /// The class of x.
    pub fn gen(&self) -> Fe {
        if self.0.n == 1 {
            return self.from_base(self.0.base.neg(self.0.modulus.coeff(0)));
        }
        let mut v = vec![0; self.0.n];
        v[1] = 1;
        Fe(v)
    }

    pub fn to_poly(&self, a: &Fe) -> Poly<Fq> {
        Poly::new(&self.0.base, a.0.clone())
    }

    pub fn from_poly(&self, p: &Poly<Fq>) -> Fe {
        let r = p.rem(&self.0.modulus);
        let mut v = r.into_coeffs();
        v.resize(self.0.n, 0);
        Fe(v)
    }

    /// The F_q value, if `a` lies in the base field.
    pub fn base_value(&self, a: &Fe) -> Option<u32> {
        a.0[1..].iter().all(|&c| c == 0).then_some(a.0[0])
    }

    pub fn index_of(&self, a: &Fe) -> u128 {
        let q = self.0.base.q() as u128;
        a.0.iter().rev().fold(0, |acc, &c| acc * q + c as u128)
    }

    pub fn from_index(&self, mut idx: u128) -> Fe {
        let q = self.0.base.q() as u128;
        let v = (0..self.0.n)
            .map(|_| {
                let c = (idx % q) as u32;
                idx /= q;
                c
            })
            .collect();
        Fe(v)
    }

    /// All elements in increasing order (small fields only).
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        let total = (self.0.base.q() as u128).pow(self.0.n as u32);
        (0..total).map(move |i| self.from_index(i))
    }

    /// Whether `a` lies in the subfield of degree d.
    pub fn in_subfield(&self, a: &Fe, d: usize) -> bool {
        self.frobenius_pow(a, d) == *a
    }

    /// Trace down to the subfield of degree d (d | n).
    pub fn trace_to(&self, a: &Fe, d: usize) -> Fe {
        assert_eq!(self.0.n % d, 0);
        let mut acc = a.clone();
        let mut cur = a.clone();
        for _ in 1..self.0.n / d {
            cur = self.frobenius_pow(&cur, d);
            acc = self.add(&acc, &cur);
        }
        acc
    }

    /// Matrix of y -> a*y on coefficient vectors.
    pub fn mul_matrix(&self, a: &Fe) -> Mat {
        let n = self.0.n;
        let mut cols = Vec::with_capacity(n);
        let mut cur = a.clone();
        let x = self.gen();
        for _ in 0..n {
            cols.push(cur.0.clone());
            cur = self.mul(&cur, &x);
        }
        (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
    }

    /// Matrix of y -> y^q on coefficient vectors.
    pub fn frob_matrix(&self) -> Mat {
        let n = self.0.n;
        (0..n).map(|i| self.0.frob.iter().map(|c| c[i]).collect()).collect()
    }

    pub fn parse_elem(&self, s: &str) -> Result<Fe> {
        let b = &self.0.base;
        let mut p = Poly::zero(b);
        for t in text::parse_terms(s, "x")? {
            let c = b.parse(t.coeff.as_deref().unwrap_or("1"))?;
            let c = if t.neg { b.neg(c) } else { c };
            p = p.add(&Poly::monomial(b, c, t.exp));
        }
        Ok(self.from_poly(&p))
    }

    fn mul_prime(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let n = self.0.n;
        let p = self.0.base.p() as u64;
        if n == 1 {
            return vec![((a[0] as u64 * b[0] as u64) % p) as u32];
        }
        let mut acc = vec![0u64; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as u64;
            for (slot, &y) in acc[i..i + n].iter_mut().zip(b) {
                *slot += x * y as u64;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = acc[k] % p;
            if c == 0 {
                continue;
            }
            for &(i, m) in &self.0.low {
                acc[k - n + i] += c * m as u64;
            }
        }
        acc[..n].iter().map(|&v| (v % p) as u32).collect()
    }

    fn mul_general(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = &self.0.base;
        let n = self.0.n;
        let mut acc = vec![0u32; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] = f.add(acc[i + j], f.mul(x, y));
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = acc[k];
            if c == 0 {
                continue;
            }
            for &(i, m) in &self.0.low {
                acc[k - n + i] = f.add(acc[k - n + i], f.mul(c, m));
            }
        }
        acc.truncate(n);
        acc
    }

    /// The embedding of `self` into `dst` sending x to the smallest root of
    /// `self.modulus()` in `dst` (identity if the fields coincide).
    pub fn embedding_into(&self, dst: &ExtField) -> Result<Arc<Embedding>> {
        if self.0.base != dst.0.base || dst.0.n % self.0.n != 0 {
            return Err(Error::FieldMismatch);
        }
        let key = ((self.0.base.p(), self.0.base.e(), self.0.n), dst.0.n);
        let cell = {
            let mut c = embedding_cache().lock().unwrap();
            c.entry(key).or_insert_with(|| Arc::new(OnceLock::new())).clone()
        };
        Ok(cell.get_or_init(|| Arc::new(Embedding::build(self, dst))).clone())
    }

    /// One root in `self` of an irreducible `f` over F_q whose degree divides n.
    fn some_root(&self, f: &Poly<Fq>) -> Fe {
        let s = f.deg() as usize;
        let g = f.monic().map(self, |&c| self.from_base(c));
        if s == 1 {
            return self.neg(&g.coeff(0));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_7007 ^ s as u64);
        let e = (BigUint::from(self.0.base.q()).pow(s as u32) - 1u32) >> 1;
        let one = Poly::one(self);
        let mut g = g;
        while g.deg() > 1 {
            // random element of the degree-s subfield, where all roots live
            let r = self.random(&mut rng);
            let delta = self.trace_to(&r, s);
            let h = Poly::new(self, vec![delta, self.one()]);
            let w = h.pow_mod(&e, &g).sub(&one);
            let d = w.gcd(&g);
            if d.deg() > 0 && d.deg() < g.deg() {
                let other = g.div_exact(&d).unwrap();
                g = if d.deg() <= other.deg() { d } else { other };
            }
        }
        self.neg(&g.coeff(0))
    }

    /// All roots in `self` of an irreducible `f` over F_q (deg f | n), sorted.
    pub fn roots_of_irreducible(&self, f: &Poly<Fq>) -> Vec<Fe> {
        let s = f.deg() as usize;
        let r = self.some_root(f);
        let mut out = Vec::with_capacity(s);
        let mut cur = r;
        for _ in 0..s {
            out.push(cur.clone());
            cur = self.frobenius(&cur);
        }
        out.sort();
        out
    }
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.base == other.0.base && self.0.n == other.0.n)
    }
}

impl Eq for ExtField {}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.base.q(), self.0.n)
    }
}

impl Field for ExtField {
    type Elem = Fe;

    fn base(&self) -> &Fq {
        &self.0.base
    }
    fn degree(&self) -> usize {
        self.0.n
    }
    fn same_field(&self, other: &Self) -> bool {
        self == other
    }
    fn zero(&self) -> Fe {
        Fe(vec![0; self.0.n])
    }
    fn one(&self) -> Fe {
        self.from_base(1)
    }
    fn from_base(&self, c: u32) -> Fe {
        let mut v = vec![0; self.0.n];
        v[0] = c;
        Fe(v)
    }
    fn is_zero(&self, a: &Fe) -> bool {
        a.0.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        let f = &self.0.base;
        Fe(a.0.iter().zip(&b.0).map(|(&x, &y)| f.add(x, y)).collect())
    }
    fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        let f = &self.0.base;
        Fe(a.0.iter().zip(&b.0).map(|(&x, &y)| f.sub(x, y)).collect())
    }
    fn neg(&self, a: &Fe) -> Fe {
        let f = &self.0.base;
        Fe(a.0.iter().map(|&x| f.neg(x)).collect())
    }
    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        if self.0.base.is_prime_field() {
            Fe(self.mul_prime(&a.0, &b.0))
        } else {
            Fe(self.mul_general(&a.0, &b.0))
        }
    }
    fn inv(&self, a: &Fe) -> Fe {
        assert!(!self.is_zero(a), "inverse of zero in {self:?}");
        let s = self.to_poly(a).inv_mod(&self.0.modulus).expect("modulus is irreducible");
        self.from_poly(&s)
    }
    fn frobenius(&self, a: &Fe) -> Fe {
        let f = &self.0.base;
        let n = self.0.n;
        if f.is_prime_field() {
            let p = f.p() as u64;
            let mut acc = vec![0u64; n];
            for (j, &c) in a.0.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (slot, &v) in acc.iter_mut().zip(&self.0.frob[j]) {
                    *slot += c as u64 * v as u64;
                }
            }
            return Fe(acc.into_iter().map(|v| (v % p) as u32).collect());
        }
        let mut acc = vec![0u32; n];
        for (j, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (slot, &v) in acc.iter_mut().zip(&self.0.frob[j]) {
                *slot = f.add(*slot, f.mul(c, v));
            }
        }
        Fe(acc)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        let q = self.0.base.q();
        Fe((0..self.0.n).map(|_| rng.gen_range(0..q)).collect())
    }
    fn fmt_elem(&self, a: &Fe) -> String {
        let f = &self.0.base;
        if let Some(c) = self.base_value(a) {
            return f.format(c);
        }
        text::format_sum(
            a.0.iter().enumerate().rev().filter(|(_, &c)| c != 0).map(|(i, &c)| (f.format(c), i)),
            "x",
        )
    }
}

/// A fixed F_q-embedding F_{q^s} -> F_{q^n}.
pub struct Embedding {
    src: ExtField,
    dst: ExtField,
    /// Images of x^j, j < s.
    images: Vec<Fe>,
    solver: ColumnSolver,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding({:?} -> {:?})", self.src, self.dst)
    }
}

impl Embedding {
    fn build(src: &ExtField, dst: &ExtField) -> Embedding {
        let root = if src.0.n == dst.0.n {
            dst.gen()
        } else {
            dst.roots_of_irreducible(src.modulus()).into_iter().next().unwrap()
        };
        Embedding::from_root(src, dst, root)
    }

    /// The embedding sending x to `root` (which must be a root of src's modulus).
    pub fn from_root(src: &ExtField, dst: &ExtField, root: Fe) -> Embedding {
        let mut images = Vec::with_capacity(src.0.n);
        let mut cur = dst.one();
        for _ in 0..src.0.n {
            images.push(cur.clone());
            cur = dst.mul(&cur, &root);
        }
        let cols: Vec<Vec<u32>> = images.iter().map(|e| e.0.clone()).collect();
        let solver = ColumnSolver::new(&src.0.base, &cols);
        Embedding { src: src.clone(), dst: dst.clone(), images, solver }
    }

    pub fn src(&self) -> &ExtField {
        &self.src
    }

    pub fn dst(&self) -> &ExtField {
        &self.dst
    }

    pub fn apply(&self, a: &Fe) -> Fe {
        let f = &self.src.0.base;
        let n = self.dst.0.n;
        let mut acc = vec![0u32; n];
        for (c, img) in a.0.iter().zip(&self.images) {
            if *c == 0 {
                continue;
            }
            for (slot, &v) in acc.iter_mut().zip(&img.0) {
                *slot = f.add(*slot, f.mul(*c, v));
            }
        }
        Fe(acc)
    }

    /// Preimage of `b`, if it lies in the image.
    pub fn descend(&self, b: &Fe) -> Option<Fe> {
        self.solver.solve(&b.0).map(Fe)
    }

    /// `other` after `self`.
    pub fn then(&self, other: &Embedding) -> Embedding {
        assert!(self.dst == other.src);
        let root = other.apply(&self.apply(&self.src.gen()));
        Embedding::from_root(&self.src, &other.dst, root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_is_first_irreducible() {
        let f3 = Fq::new(3, 1).unwrap();
        let k = ExtField::new(&f3, 2);
        // x^2+1 is the first monic irreducible quadratic over F_3 with nonzero constant
        assert_eq!(k.modulus().to_string(), "T^2+1");
        let k = ExtField::new(&f3, 3);
        assert_eq!(k.modulus().to_string(), "T^3+2*T+1");
    }

    #[test]
    fn field_axioms_small() {
        let f3 = Fq::new(3, 1).unwrap();
        let k = ExtField::new(&f3, 3);
        let els: Vec<Fe> = k.elements().collect();
        assert_eq!(els.len(), 27);
        for a in &els[1..] {
            assert!(k.is_one(&k.mul(a, &k.inv(a))));
            assert_eq!(k.frobenius(a), k.pow_u64(a, 3));
        }
        let g = k.gen();
        assert!(k.is_one(&k.pow_u64(&g, 26)));
    }

    #[test]
    fn extension_of_nonprime_base() {
        let f9 = Fq::new(3, 2).unwrap();
        let k = ExtField::new(&f9, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let a = k.random(&mut rng);
            if k.is_zero(&a) {
                continue;
            }
            assert!(k.is_one(&k.mul(&a, &k.inv(&a))));
            assert_eq!(k.frobenius(&a), k.pow_u64(&a, 9));
        }
        let s = k.fmt_elem(&k.parse_elem("(u+1)*x+2").unwrap());
        assert_eq!(s, "(u+1)*x+2");
    }

    #[test]
    fn embeddings_are_homomorphisms() {
        let f3 = Fq::new(3, 1).unwrap();
        let k2 = ExtField::new(&f3, 2);
        let k6 = ExtField::new(&f3, 6);
        let e = k2.embedding_into(&k6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let a = k2.random(&mut rng);
            let b = k2.random(&mut rng);
            assert_eq!(e.apply(&k2.mul(&a, &b)), k6.mul(&e.apply(&a), &e.apply(&b)));
            assert_eq!(e.descend(&e.apply(&a)), Some(a));
        }
        assert_eq!(e.descend(&k6.gen()), None);
        assert!(k2.embedding_into(&ExtField::new(&f3, 3)).is_err());
        let k3 = ExtField::new(&f3, 3);
        let e3 = k3.embedding_into(&k6).unwrap();
        let img = e3.apply(&k3.gen());
        assert!(k6.in_subfield(&img, 3));
        assert!(!k6.in_subfield(&img, 1));
    }
}
