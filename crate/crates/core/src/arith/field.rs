use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use rand::Rng;

use super::fq::Fq;

/// A finite field containing a fixed F_q, with elements as plain values.
///
/// Field handles are cheap to clone; elements carry no reference to their field,
/// so every operation goes through the handle.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + Debug + Send + Sync;

    fn base(&self) -> &Fq;
    /// Degree over F_q.
    fn degree(&self) -> usize;
    fn same_field(&self, other: &Self) -> bool;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_base(&self, c: u32) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// x -> x^q.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    fn try_inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if self.is_zero(a) {
            None
        } else {
            Some(self.inv(a))
        }
    }

    fn sqr(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow_u64(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.sqr(&base);
            }
        }
        acc
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.sqr(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Number of elements.
    fn size(&self) -> BigUint {
        BigUint::from(self.base().q()).pow(self.degree() as u32)
    }

    fn characteristic(&self) -> u32 {
        self.base().p()
    }

    fn is_square(&self, a: &Self::Elem) -> bool {
        if self.is_zero(a) {
            return true;
        }
        let e = (self.size() - 1u32) >> 1;
        self.is_one(&self.pow(a, &e))
    }

    /// The inverse of the absolute Frobenius x -> x^p.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let e = self.size() / BigUint::from(self.characteristic());
        self.pow(a, &e)
    }

    /// x -> x^{q^k}.
    fn frobenius_pow(&self, a: &Self::Elem, k: usize) -> Self::Elem {
        let k = k % self.degree().max(1);
        let mut x = a.clone();
        for _ in 0..k {
            x = self.frobenius(&x);
        }
        x
    }

    /// Dense product of coefficient slices (low degree first, both nonempty).
    fn mul_slices(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.mul(x, y);
                out[i + j] = self.add(&out[i + j], &t);
            }
        }
        out
    }

    fn sum<'a, I>(&self, it: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        it.into_iter().fold(self.zero(), |s, x| self.add(&s, x))
    }
}
