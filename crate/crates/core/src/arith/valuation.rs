use std::fmt;
use std::ops::Add;

use num_bigint::BigUint;

use super::fq::Fq;
use super::poly::APoly;
use crate::error::{Error, Result};

/// log_q |x| for x in k = F_q(T): an integer degree, or minus infinity for 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AbsLog {
    NegInf,
    Deg(i64),
}

impl AbsLog {
    pub fn of(a: &APoly) -> AbsLog {
        match a.degree() {
            None => AbsLog::NegInf,
            Some(d) => AbsLog::Deg(d as i64),
        }
    }

    /// |num/den|; the denominator must be nonzero.
    pub fn of_ratio(num: &APoly, den: &APoly) -> Result<AbsLog> {
        let d = den.degree().ok_or(Error::DivisionByZero)? as i64;
        Ok(match num.degree() {
            None => AbsLog::NegInf,
            Some(n) => AbsLog::Deg(n as i64 - d),
        })
    }

    pub fn value(self) -> Option<i64> {
        match self {
            AbsLog::NegInf => None,
            AbsLog::Deg(d) => Some(d),
        }
    }
}

impl Add for AbsLog {
    type Output = AbsLog;
    fn add(self, o: AbsLog) -> AbsLog {
        match (self, o) {
            (AbsLog::Deg(a), AbsLog::Deg(b)) => AbsLog::Deg(a + b),
            _ => AbsLog::NegInf,
        }
    }
}

impl fmt::Display for AbsLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsLog::NegInf => write!(f, "-inf"),
            AbsLog::Deg(d) => write!(f, "{d}"),
        }
    }
}

/// Legendre symbol (D/p) for a monic irreducible p.
pub fn legendre(d: &APoly, p: &APoly) -> Result<i8> {
    if !p.is_monic() || !p.is_irreducible() {
        return Err(Error::NotIrreducible(p.to_string()));
    }
    Ok(legendre_unchecked(d, p))
}

/// As `legendre`, trusting the caller that p is monic irreducible.
pub fn legendre_unchecked(d: &APoly, p: &APoly) -> i8 {
    let r = d.rem(p);
    if r.is_zero() {
        return 0;
    }
    let f: &Fq = p.field();
    let e = (BigUint::from(f.q()).pow(p.deg() as u32) - 1u32) >> 1;
    if r.pow_mod(&e, p).is_one() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Poly;

    #[test]
    fn abs_log() {
        let f = Fq::new(3, 1).unwrap();
        let p = |s| Poly::parse(&f, s).unwrap();
        assert_eq!(AbsLog::of(&p("T^2+1")), AbsLog::Deg(2));
        assert_eq!(AbsLog::of(&p("0")), AbsLog::NegInf);
        assert_eq!(AbsLog::of_ratio(&p("T+1"), &p("T^3")).unwrap(), AbsLog::Deg(-2));
        assert!(AbsLog::of_ratio(&p("T"), &p("0")).is_err());
        assert_eq!(AbsLog::Deg(2) + AbsLog::NegInf, AbsLog::NegInf);
    }

    #[test]
    fn legendre_examples() {
        let f = Fq::new(3, 1).unwrap();
        let p = |s| Poly::parse(&f, s).unwrap();
        assert_eq!(legendre(&p("T"), &p("T")).unwrap(), 0);
        assert_eq!(legendre(&p("T+1"), &p("T")).unwrap(), 1);
        assert_eq!(legendre(&p("2"), &p("T")).unwrap(), -1);
        assert!(legendre(&p("T"), &p("T^2+2")).is_err());
    }
}
