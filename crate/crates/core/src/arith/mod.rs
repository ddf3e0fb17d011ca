//! Finite fields, polynomials over them and dense linear algebra.

pub mod ext;
pub mod field;
pub mod fq;
pub mod linalg;
pub mod poly;
pub mod text;
pub mod valuation;

pub use ext::{Embedding, ExtField, Fe};
pub use field::Field;
pub use fq::Fq;
pub use poly::{resultant, APoly, Poly};
pub use valuation::{legendre, AbsLog};

/// Number of monic irreducibles of degree d over F_q (necklace count).
pub fn count_irreducible(q: u64, d: u32) -> u128 {
    let mut total: i128 = 0;
    for k in 1..=d {
        if d % k == 0 {
            total += mobius(k as u64) as i128 * (q as i128).pow(d / k);
        }
    }
    (total / d as i128) as u128
}

fn mobius(mut n: u64) -> i32 {
    let mut m = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            m = -m;
        }
        p += 1;
    }
    if n > 1 {
        m = -m;
    }
    m
}

/// Monic irreducible polynomials of degree d in enumeration order.
pub fn monic_irreducibles(field: &Fq, d: usize) -> impl Iterator<Item = APoly> + '_ {
    Poly::monics(field, d).filter(|f| f.is_irreducible())
}

/// Monic irreducibles of degree 1..=max_deg, by degree then enumeration order.
pub fn primes_up_to(field: &Fq, max_deg: usize) -> Vec<APoly> {
    (1..=max_deg).flat_map(|d| monic_irreducibles(field, d).collect::<Vec<_>>()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn necklace_counts_match_enumeration() {
        let f3 = Fq::new(3, 1).unwrap();
        for d in 1..=4 {
            assert_eq!(monic_irreducibles(&f3, d).count() as u128, count_irreducible(3, d as u32));
        }
        assert_eq!(count_irreducible(5, 2), 10);
    }
}
