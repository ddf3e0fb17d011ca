use std::fmt;

use num_traits::ToPrimitive;

use crate::arith::count_irreducible;
use crate::error::{Error, Result};
use crate::quad::{boundh, hasse_weil, pic_window_constants};

/// The constants the effective bounds depend on.
///
/// The C_i bound genera and extension degrees; B_eps, C_eps bound class
/// numbers from below and above.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantPack {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub b_eps: f64,
    pub c_eps: f64,
    pub eps: f64,
    /// Constant extension degree; t runs over multiples of 2 n_c.
    pub n_c: u32,
    /// Relative slack every strict inequality must clear.
    pub guard: f64,
}

/// Lower bound for h(K) for a genus-g field, from Hasse-Weil and `boundh`.
fn class_number_floor(q: u32, g: usize) -> f64 {
    let hw = hasse_weil(q, g).0;
    let bh = boundh(q, g).to_f64().unwrap_or(f64::INFINITY);
    hw.max(bh).max(1.0)
}

/// B with #Pic(O) >= B (q^g |f|)^{1-eps} for every imaginary order.
///
/// Uses #Pic(O) >= h(K) |f| prod_{p | f} (1 - 1/|p|); each prime with
/// |p|^eps (1 - 1/|p|) < 1 can lower the constant once.
pub fn default_b_eps(q: u32, eps: f64) -> f64 {
    let qf = q as f64;
    let genus_part = (0..=400)
        .map(|g| class_number_floor(q, g) / qf.powf(g as f64 * (1.0 - eps)))
        .fold(f64::INFINITY, f64::min);
    let mut cond_part = 1.0;
    for d in 1..64u32 {
        let x = qf.powi(d as i32);
        let c = x.powf(eps) * (1.0 - 1.0 / x);
        if c >= 1.0 {
            break;
        }
        cond_part *= c.powf(count_irreducible(q as u64, d) as f64);
    }
    genus_part * cond_part
}

impl ConstantPack {
    /// Conservative stand-ins: C4 = 4m, C1 = C2 = 2, C3 = 2m + 2, eps = 1/4.
    pub fn default_for(q: u32, m: u32) -> ConstantPack {
        let eps = 0.25;
        ConstantPack {
            c1: 2.0,
            c2: 2.0,
            c3: 2.0 * m as f64 + 2.0,
            c4: 4.0 * m as f64,
            b_eps: default_b_eps(q, eps),
            c_eps: pic_window_constants(q, 8).1,
            eps,
            n_c: 1,
            guard: 1e-9,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [self.c1, self.c2, self.c3, self.c4, self.b_eps, self.c_eps];
        if pos.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
            return Err(Error::Invalid("pack constants must be positive and finite".into()));
        }
        if !(self.eps > 0.0 && self.eps < 0.5) {
            return Err(Error::Invalid(format!("eps = {} is outside (0, 1/2)", self.eps)));
        }
        if self.n_c == 0 || !(self.guard >= 0.0 && self.guard < 1.0) {
            return Err(Error::Invalid("n_c must be positive and guard in [0, 1)".into()));
        }
        Ok(())
    }

    /// Overrides from `key=value` lines on top of `self`; `#` starts a comment.
    pub fn parse_overrides(&self, text: &str) -> Result<ConstantPack> {
        let mut p = self.clone();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("pack line {}: expected key=value", no + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            let num = || v.parse::<f64>().map_err(|_| Error::Parse(format!("pack line {}: bad number {v:?}", no + 1)));
            match k {
                "C1" => p.c1 = num()?,
                "C2" => p.c2 = num()?,
                "C3" => p.c3 = num()?,
                "C4" => p.c4 = num()?,
                "B_eps" => p.b_eps = num()?,
                "C_eps" => p.c_eps = num()?,
                "eps" => p.eps = num()?,
                "guard" => p.guard = num()?,
                "n_c" => p.n_c = v.parse().map_err(|_| Error::Parse(format!("pack line {}: bad n_c", no + 1)))?,
                _ => return Err(Error::Parse(format!("pack line {}: unknown key {k:?}", no + 1))),
            }
        }
        p.validate()?;
        Ok(p)
    }

    /// lhs > rhs with the guard margin.
    pub fn gt(&self, lhs: f64, rhs: f64) -> bool {
        lhs > rhs + self.guard * rhs.abs().max(lhs.abs()).max(1.0)
    }
}

impl fmt::Display for ConstantPack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "C1={}", self.c1)?;
        writeln!(f, "C2={}", self.c2)?;
        writeln!(f, "C3={}", self.c3)?;
        writeln!(f, "C4={}", self.c4)?;
        writeln!(f, "B_eps={}", self.b_eps)?;
        writeln!(f, "C_eps={}", self.c_eps)?;
        writeln!(f, "eps={}", self.eps)?;
        writeln!(f, "n_c={}", self.n_c)?;
        write!(f, "guard={}", self.guard)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Fq;
    use crate::quad::orders_up_to;

    #[test]
    fn b_eps_is_a_lower_bound() {
        for q in [3u32, 5] {
            let pack = ConstantPack::default_for(q, 1);
            pack.validate().unwrap();
            let f = Fq::new(q, 1).unwrap();
            for o in orders_up_to(&f, 6) {
                let g = o.field().genus() as f64;
                let df = o.conductor().deg() as f64;
                let rhs = pack.b_eps * (q as f64).powf((g + df) * (1.0 - pack.eps));
                assert!(o.pic_order() as f64 >= rhs, "{}", o.discriminant());
            }
        }
    }

    #[test]
    fn round_trip_and_errors() {
        let pack = ConstantPack::default_for(3, 2);
        assert_eq!(pack.c3, 6.0);
        assert_eq!(pack.c4, 8.0);
        let text = pack.to_string();
        let back = ConstantPack::default_for(3, 1).parse_overrides(&text).unwrap();
        assert_eq!(back, pack);
        assert!(pack.parse_overrides("eps=0.5").is_err());
        assert!(pack.parse_overrides("C1=-1").is_err());
        assert!(pack.parse_overrides("C9=1").is_err());
        assert!(pack.parse_overrides("C1").is_err());
        assert_eq!(pack.parse_overrides("# nothing\nC1 = 3 # comment").unwrap().c1, 3.0);
    }
}
