use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith::{APoly, Fq, Poly};
use crate::error::{Error, Result};

use super::field::{imaginary_case, Case};

/// The binary quadratic form a X^2 + b XY + c Y^2 over A.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: APoly,
    pub b: APoly,
    pub c: APoly,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

fn four(f: &Fq) -> u32 {
    f.from_int(4)
}

/// Polynomial with coefficient vector given by the base-q digits of idx.
fn poly_from_index(f: &Fq, len: usize, mut idx: u64) -> APoly {
    let q = f.q() as u64;
    let mut c = Vec::with_capacity(len);
    for _ in 0..len {
        c.push((idx % q) as u32);
        idx /= q;
    }
    Poly::new(f, c)
}

impl QuadForm {
    pub fn new(a: APoly, b: APoly, c: APoly) -> Self {
        QuadForm { a, b, c }
    }

    pub fn field(&self) -> &Fq {
        self.a.field()
    }

    /// b^2 - 4ac.
    pub fn disc(&self) -> APoly {
        let f = self.field();
        self.b.mul(&self.b).sub(&self.a.mul(&self.c).scale(&four(f)))
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    /// a monic, deg b < deg a <= deg c, primitive.
    pub fn is_reduced(&self) -> bool {
        self.a.is_monic() && self.b.deg() < self.a.deg() && self.a.deg() <= self.c.deg() && self.is_primitive()
    }

    /// The principal form (1, 0, -d/4).
    pub fn principal(d: &APoly) -> Self {
        let f = d.field();
        let c = d.scale(&f.neg(f.inv(four(f))));
        QuadForm { a: Poly::one(f), b: Poly::zero(f), c }
    }

    /// The form with b replaced by -b (the inverse class).
    pub fn opposite(&self) -> Self {
        QuadForm { a: self.a.clone(), b: self.b.neg(), c: self.c.clone() }
    }

    /// F(alpha X + beta Y, gamma X + delta Y), scaled by 1/det.
    fn transform_const(&self, al: u32, be: u32, ga: u32, de: u32) -> Self {
        let f = self.field();
        let det = f.sub(f.mul(al, de), f.mul(be, ga));
        let s = f.inv(det);
        let two = f.from_int(2);
        let comb = |x: u32, y: u32, z: u32| -> APoly {
            self.a.scale(&x).add(&self.b.scale(&y)).add(&self.c.scale(&z)).scale(&s)
        };
        let a = comb(f.mul(al, al), f.mul(al, ga), f.mul(ga, ga));
        let b = comb(
            f.mul(two, f.mul(al, be)),
            f.add(f.mul(al, de), f.mul(be, ga)),
            f.mul(two, f.mul(ga, de)),
        );
        let c = comb(f.mul(be, be), f.mul(be, de), f.mul(de, de));
        QuadForm { a, b, c }
    }

    /// (u a, b, c / u): equivalent, with det u and scale 1/u.
    fn make_monic(&self) -> Self {
        let f = self.field();
        let l = *self.a.lead().unwrap();
        let u = f.inv(l);
        QuadForm { a: self.a.scale(&u), b: self.b.clone(), c: self.c.scale(&l) }
    }

    /// Translate by X -> X + kY so that deg b < deg a; c recomputed from d.
    fn translate(&self, d: &APoly) -> Self {
        let f = self.field();
        let two_a = self.a.scale(&f.from_int(2));
        let (_, b) = self.b.div_rem(&two_a);
        let c = b.mul(&b).sub(d).div_exact(&self.a.scale(&four(f))).expect("form discriminant mismatch");
        QuadForm { a: self.a.clone(), b, c }
    }

    /// The reduced representative of the class, canonical across the
    /// q+1 reduced forms of a top-degree class when d is inert.
    pub fn reduce(&self) -> Result<Self> {
        let d = self.disc();
        let case = imaginary_case(&d).ok_or_else(|| Error::Degenerate(format!("disc {d} is not imaginary")))?;
        if self.a.is_zero() || self.c.is_zero() && self.b.is_zero() {
            return Err(Error::Degenerate(format!("form {self} is degenerate")));
        }
        let mut g = self.clone();
        loop {
            g = g.make_monic().translate(&d);
            if g.c.deg() < g.a.deg() {
                g = QuadForm { a: g.c.clone(), b: g.b.neg(), c: g.a.clone() };
            } else {
                break;
            }
        }
        if case == Case::Inert && g.a.deg() == g.c.deg() {
            g = g.top_orbit(&d).into_iter().next().unwrap();
        }
        Ok(g)
    }

    /// The reduced forms equivalent to a top-degree reduced form, sorted.
    /// Indexed by the first column (alpha : gamma) in P^1(F_q).
    pub fn top_orbit(&self, d: &APoly) -> Vec<Self> {
        let f = self.field().clone();
        let n = self.a.deg() as usize;
        let mut out = BTreeSet::new();
        let mut firsts: Vec<(u32, u32)> = vec![(1, 0)];
        firsts.extend(f.elements().map(|g| (g, 1)));
        for (al, ga) in firsts {
            let a = self
                .a
                .scale(&f.mul(al, al))
                .add(&self.b.scale(&f.mul(al, ga)))
                .add(&self.c.scale(&f.mul(ga, ga)));
            let l = a.coeff(n);
            debug_assert!(l != 0);
            // choose the second column with det = lead(A)
            let (be, de) = if al != 0 { (0, f.div(l, al)) } else { (f.neg(f.div(l, ga)), 0) };
            let g = self.transform_const(al, be, ga, de).translate(d);
            out.insert(g);
        }
        out.into_iter().collect()
    }

    /// Gauss composition; the result is reduced.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let d = self.disc();
        if other.disc() != d {
            return Err(Error::Invalid("forms have different discriminants".into()));
        }
        let f = self.field().clone();
        let half = f.inv(f.from_int(2));
        let (f1, f2) = if self.a.deg() > other.a.deg() { (other, self) } else { (self, other) };
        let s = f1.b.add(&f2.b).scale(&half);
        let n = f2.b.sub(&s);
        let (d0, y1) = if f1.a.divides(&f2.a) {
            (f1.a.monic(), Poly::zero(&f))
        } else {
            // u a2 + v a1 = d0
            let (g, u, _v) = f2.a.xgcd(&f1.a);
            (g, u)
        };
        let (d1, x2, y2) = if d0.divides(&s) {
            (d0.clone(), Poly::zero(&f), Poly::constant(&f, f.neg(1)))
        } else {
            let (g, x, y) = s.xgcd(&d0);
            (g, x, y.neg())
        };
        let v1 = f1.a.div_exact(&d1).unwrap();
        let v2 = f2.a.div_exact(&d1).unwrap();
        let r = y1.mul(&y2).mul(&n).sub(&x2.mul(&f2.c)).rem(&v1);
        let b3 = f2.b.add(&v2.mul(&r).scale(&f.from_int(2)));
        let a3 = v1.mul(&v2);
        let c3 = b3
            .mul(&b3)
            .sub(&d)
            .div_exact(&a3.scale(&four(&f)))
            .ok_or_else(|| Error::Invalid(format!("composition of {self} and {other} failed")))?;
        QuadForm { a: a3, b: b3, c: c3 }.reduce()
    }

    pub fn inverse(&self) -> Result<Self> {
        self.opposite().reduce()
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let mut base = self.reduce()?;
        let mut acc = QuadForm::principal(&self.disc());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            base = base.compose(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }
}

/// For a monic a: residue r (mod a) -> all b with deg b < deg a and b^2 = r mod a.
type RootTable = HashMap<APoly, Vec<APoly>>;

#[derive(Default)]
struct Tables {
    by_a: HashMap<APoly, Arc<RootTable>>,
}

fn tables() -> &'static Mutex<HashMap<u32, Tables>> {
    static T: OnceLock<Mutex<HashMap<u32, Tables>>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(HashMap::new()))
}

fn root_table(a: &APoly) -> Arc<RootTable> {
    let f = a.field();
    {
        let t = tables().lock().unwrap();
        if let Some(r) = t.get(&f.q()).and_then(|x| x.by_a.get(a)) {
            return r.clone();
        }
    }
    let k = a.deg() as usize;
    let mut map: RootTable = HashMap::new();
    for idx in 0..(f.q() as u64).pow(k as u32) {
        let b = poly_from_index(f, k, idx);
        map.entry(b.mul(&b).rem(a)).or_default().push(b);
    }
    let r = Arc::new(map);
    let mut t = tables().lock().unwrap();
    t.entry(f.q()).or_default().by_a.insert(a.clone(), r.clone());
    r
}

/// All primitive reduced forms of discriminant d (before identifying the
/// q+1 reduced forms of each inert top-degree class).
pub fn all_reduced_forms(d: &APoly) -> Result<Vec<QuadForm>> {
    imaginary_case(d).ok_or_else(|| Error::Invalid(format!("{d} is not an imaginary discriminant")))?;
    let f = d.field();
    let inv4 = f.inv(four(f));
    let top = d.deg() as usize / 2;
    let mut out = Vec::new();
    for k in 0..=top {
        for a in Poly::monics(f, k) {
            let table = root_table(&a);
            let r = d.rem(&a);
            let Some(bs) = table.get(&r) else { continue };
            for b in bs {
                let c = b.mul(b).sub(d).div_exact(&a).unwrap().scale(&inv4);
                let form = QuadForm { a: a.clone(), b: b.clone(), c };
                if form.is_primitive() {
                    debug_assert!(form.is_reduced());
                    out.push(form);
                }
            }
        }
    }
    Ok(out)
}

/// One canonical reduced form per class of discriminant d, sorted.
pub fn enumerate_reduced_forms(d: &APoly) -> Result<Vec<QuadForm>> {
    let all = all_reduced_forms(d)?;
    let inert = imaginary_case(d) == Some(Case::Inert);
    let top = d.deg() / 2;
    let mut out: Vec<QuadForm> = all
        .into_iter()
        .filter(|g| {
            if inert && g.a.deg() == top {
                g.top_orbit(d)[0] == *g
            } else {
                true
            }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Number of classes, counted without building canonical representatives.
pub fn count_classes(d: &APoly) -> Result<u128> {
    let all = all_reduced_forms(d)?;
    let f = d.field();
    if imaginary_case(d) == Some(Case::Inert) {
        let top = d.deg() / 2;
        let n_top = all.iter().filter(|g| g.a.deg() == top).count() as u128;
        let q1 = f.q() as u128 + 1;
        if n_top % q1 != 0 {
            return Err(Error::Invalid(format!("{n_top} top-degree forms for {d}")));
        }
        Ok(all.len() as u128 - n_top + n_top / q1)
    } else {
        Ok(all.len() as u128)
    }
}

/// Pic(O) for the order of discriminant d, via reduced forms and composition.
#[derive(Clone, Debug)]
pub struct FormClassGroup {
    pub d: APoly,
    pub forms: Vec<QuadForm>,
}

impl FormClassGroup {
    pub fn new(d: &APoly) -> Result<Self> {
        Ok(FormClassGroup { d: d.clone(), forms: enumerate_reduced_forms(d)? })
    }

    pub fn order(&self) -> usize {
        self.forms.len()
    }

    pub fn identity(&self) -> QuadForm {
        QuadForm::principal(&self.d)
    }

    pub fn contains(&self, g: &QuadForm) -> bool {
        self.forms.binary_search(g).is_ok()
    }

    pub fn element_order(&self, g: &QuadForm) -> Result<usize> {
        let id = self.identity();
        let mut x = g.reduce()?;
        let mut k = 1;
        while x != id {
            x = x.compose(g)?;
            k += 1;
            if k > self.order() {
                return Err(Error::Invalid(format!("{g} has no finite order")));
            }
        }
        Ok(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::field::imaginary_discriminants;

    fn p(f: &Fq, s: &str) -> APoly {
        APoly::parse(f, s).unwrap()
    }

    #[test]
    fn reduce_small_example() {
        let f = Fq::new(3, 1).unwrap();
        let d = p(&f, "T^3+2*T");
        let forms = enumerate_reduced_forms(&d).unwrap();
        assert_eq!(forms.len(), 4);
        assert!(forms.contains(&QuadForm::principal(&d)));
        for g in &forms {
            assert!(g.is_reduced());
            assert_eq!(g.disc(), d);
            assert_eq!(g.reduce().unwrap(), *g);
        }
    }

    #[test]
    fn counts_match_class_numbers() {
        for q in [3u32, 5] {
            let f = Fq::new(q, 1).unwrap();
            for n in 1..=4 {
                for k in imaginary_discriminants(&f, n) {
                    let c = enumerate_reduced_forms(k.d()).unwrap().len() as u128;
                    assert_eq!(c, k.class_number_ok(), "D = {}", k.d());
                    assert_eq!(count_classes(k.d()).unwrap(), c);
                }
            }
        }
    }

    #[test]
    fn group_axioms() {
        let f = Fq::new(3, 1).unwrap();
        for ds in ["T^3+2*T", "2*T^4+T+1", "T^5+T+1", "2*T^4+2*T^2+T+2"] {
            let d = p(&f, ds);
            let g = FormClassGroup::new(&d).unwrap();
            let id = g.identity();
            for x in &g.forms {
                assert_eq!(x.compose(&id).unwrap(), *x);
                let inv = x.inverse().unwrap();
                assert_eq!(x.compose(&inv).unwrap(), id, "{x} in {d}");
                for y in &g.forms {
                    let xy = x.compose(y).unwrap();
                    assert!(g.contains(&xy), "{x} * {y} = {xy}");
                    assert_eq!(xy, y.compose(x).unwrap());
                }
            }
            let h = g.order();
            for x in g.forms.iter().take(6) {
                for y in g.forms.iter().take(6) {
                    for z in g.forms.iter().take(6) {
                        let l = x.compose(y).unwrap().compose(z).unwrap();
                        let r = x.compose(&y.compose(z).unwrap()).unwrap();
                        assert_eq!(l, r);
                    }
                }
                assert_eq!(h % g.element_order(x).unwrap(), 0);
            }
        }
    }

    #[test]
    fn reduction_is_class_invariant() {
        let f = Fq::new(5, 1).unwrap();
        let d = p(&f, "2*T^4+T^3+3");
        let g = FormClassGroup::new(&d).unwrap();
        for x in &g.forms {
            // X -> X + (T+1) Y, then swap, then scale
            let t = p(&f, "T+1");
            let b = x.b.add(&x.a.mul(&t).scale(&2));
            let c = b.mul(&b).sub(&d).div_exact(&x.a.scale(&4)).unwrap();
            let y = QuadForm::new(c.scale(&3), b.neg(), x.a.scale(&2));
            assert_eq!(y.disc(), d);
            assert_eq!(y.reduce().unwrap(), *x);
        }
    }
}
