use std::collections::HashSet;

use crate::arith::fq::prime_power;
use crate::arith::{APoly, Fq, Poly};
use crate::error::{Error, Result};

use super::modpoly::psi;

/// |G(N)|, |H(N)| and |PSL_2(A/NA)| for squarefree N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupOrders {
    pub g: u128,
    pub h: u128,
    pub psl: u128,
}

impl GroupOrders {
    /// Whether G(N)/H(N) has the order of PSL_2(A/NA).
    pub fn quotient_matches(&self) -> bool {
        self.g % self.h == 0 && self.g / self.h == self.psl
    }
}

fn overflow() -> Error {
    Error::Budget("group order exceeds 128 bits".into())
}

fn prime_factors(n: &APoly) -> Result<Vec<APoly>> {
    if n.is_zero() || !n.is_monic() {
        return Err(Error::Invalid(format!("{n} must be monic")));
    }
    let fs = n.factor();
    if fs.iter().any(|(_, e)| *e > 1) {
        return Err(Error::Invalid(format!("{n} is not squarefree")));
    }
    Ok(fs.into_iter().map(|(p, _)| p).collect())
}

/// Number of x in F_r with x^2 = a, for a in F_q^* and r = q^d.
fn sqrt_count(f: &Fq, a: u32, d: usize) -> u128 {
    if f.p() == 2 {
        return 1;
    }
    // a in F_q^* is a square in F_{q^d} iff d is even or a is a square in F_q
    if d % 2 == 0 || f.is_square_elem(a) {
        2
    } else {
        0
    }
}

pub fn group_orders(n: &APoly) -> Result<GroupOrders> {
    let f = n.field().clone();
    let ps = prime_factors(n)?;
    let q = f.q() as u128;
    let mut sl: u128 = 1;
    let mut psl: u128 = 1;
    for p in &ps {
        let r = p.norm();
        let s = r.checked_mul(r * r - 1).ok_or_else(overflow)?;
        sl = sl.checked_mul(s).ok_or_else(overflow)?;
        psl = psl.checked_mul(s / if r % 2 == 1 { 2 } else { 1 }).ok_or_else(overflow)?;
    }
    let g = sl.checked_mul(q - 1).ok_or_else(overflow)?;
    let h = (1..f.q()).map(|a| ps.iter().map(|p| sqrt_count(&f, a, p.deg() as usize)).product::<u128>()).sum();
    Ok(GroupOrders { g, h, psl })
}

/// |H(N)| by listing the c in (A/NA)^* with c^2 in F_q^*.
pub fn scalar_count_brute(n: &APoly) -> Result<u128> {
    prime_factors(n)?;
    let f = n.field();
    let d = n.deg() as usize;
    let mut count = 0;
    for idx in 0..(f.q() as u64).pow(d as u32) {
        let c = residue_from_index(f, d, idx);
        if c.is_zero() || !c.gcd(n).is_one() {
            continue;
        }
        let s = c.mul(&c).rem(n);
        if s.deg() == 0 {
            count += 1;
        }
    }
    Ok(count)
}

fn residue_from_index(f: &Fq, d: usize, mut idx: u64) -> APoly {
    let q = f.q() as u64;
    let mut c = Vec::with_capacity(d);
    for _ in 0..d {
        c.push((idx % q) as u32);
        idx /= q;
    }
    Poly::new(f, c)
}

/// Every a in F_q^* is a square mod each prime factor of N, checked by listing
/// all squares in each A/p. Prime factors of odd degree are rejected.
pub fn squares_claim(n: &APoly) -> Result<bool> {
    let ps = prime_factors(n)?;
    let f = n.field();
    for p in &ps {
        if p.deg() % 2 == 1 {
            return Err(Error::Invalid(format!("prime factor {p} has odd degree")));
        }
        let d = p.deg() as usize;
        let mut squares = HashSet::new();
        for idx in 0..(f.q() as u64).pow(d as u32) {
            let c = residue_from_index(f, d, idx);
            let s = c.mul(&c).rem(p);
            if s.deg() == 0 {
                squares.insert(s.coeff(0));
            }
        }
        if (1..f.q()).any(|a| !squares.contains(&a)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest index of a proper subgroup of PSL_2(F_r), for prime powers r >= 13.
pub fn minimal_index_bound(r: u64) -> Result<u64> {
    if prime_power(r).is_none() {
        return Err(Error::Invalid(format!("{r} is not a prime power")));
    }
    if r < 13 {
        return Err(Error::Invalid(format!("{r} < 13: small PSL_2 have exceptional subgroups")));
    }
    Ok(r + 1)
}

/// All monic N with psi(N) <= b, by degree then index.
pub fn type_finiteness(f: &Fq, b: u128) -> Result<Vec<APoly>> {
    if b == 0 {
        return Err(Error::Invalid("bound must be positive".into()));
    }
    let q = f.q() as u128;
    let mut out = Vec::new();
    let mut d = 0usize;
    // psi(N) >= |N| = q^deg N
    while q.checked_pow(d as u32).is_some_and(|s| s <= b) {
        for n in Poly::monics(f, d) {
            if psi(&n)? <= b {
                out.push(n);
            }
        }
        d += 1;
    }
    Ok(out)
}

/// |SL_2(F_{q^d})| by counting solutions of ad - bc = 1, for small fields.
pub fn sl2_order_brute(f: &Fq, d: usize) -> u128 {
    use crate::arith::Field;
    let l = crate::arith::ExtField::new(f, d);
    let els: Vec<_> = l.elements().collect();
    let mut count = 0u128;
    for a in &els {
        for b in &els {
            for c in &els {
                if !l.is_zero(a) {
                    // d = (1 + bc)/a
                    count += 1;
                } else if l.is_one(&l.neg(&l.mul(b, c))) {
                    count += els.len() as u128;
                }
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(f: &Fq, s: &str) -> APoly {
        APoly::parse(f, s).unwrap()
    }

    #[test]
    fn orders() {
        let f = Fq::new(3, 1).unwrap();
        let o = group_orders(&p(&f, "T^2+1")).unwrap();
        assert_eq!(o.psl, 360);
        assert!(o.quotient_matches());
        let o = group_orders(&p(&f, "T")).unwrap();
        assert_eq!(o.psl, 12);
        assert!(!o.quotient_matches());
        assert!(group_orders(&p(&f, "T^2")).is_err());
        for n in ["T", "T^2+1", "T^2+T", "T^3+2*T+1", "T^4+2"] {
            let n = p(&f, n);
            if n.is_squarefree() {
                assert_eq!(group_orders(&n).unwrap().h, scalar_count_brute(&n).unwrap(), "{n}");
            }
        }
    }

    #[test]
    fn sl2_brute() {
        for (q, d) in [(3, 1), (5, 1), (3, 2)] {
            let f = Fq::new(q, 1).unwrap();
            let r = (q as u128).pow(d as u32);
            assert_eq!(sl2_order_brute(&f, d), r * (r * r - 1));
        }
    }

    #[test]
    fn squares() {
        let f3 = Fq::new(3, 1).unwrap();
        let f5 = Fq::new(5, 1).unwrap();
        assert!(squares_claim(&p(&f3, "T^2+1")).unwrap());
        assert!(squares_claim(&p(&f5, "T^2+2")).unwrap());
        assert!(squares_claim(&p(&f3, "T")).is_err());
    }

    #[test]
    fn index_table() {
        assert_eq!(minimal_index_bound(13).unwrap(), 14);
        assert_eq!(minimal_index_bound(25).unwrap(), 26);
        assert!(minimal_index_bound(9).is_err());
        assert!(minimal_index_bound(15).is_err());
    }

    #[test]
    fn finiteness() {
        let f = Fq::new(3, 1).unwrap();
        let l = type_finiteness(&f, 4).unwrap();
        let s: Vec<String> = l.iter().map(|n| n.to_string()).collect();
        assert_eq!(s, ["1", "T", "T+1", "T+2"]);
        assert_eq!(type_finiteness(&f, 1).unwrap().len(), 1);
        // 1, three linear, three irreducible quadratics
        assert_eq!(type_finiteness(&f, 10).unwrap().len(), 7);
    }
}
