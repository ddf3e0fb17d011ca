use rayon::prelude::*;

use crate::arith::{legendre, monic_irreducibles, Fq, Poly};
use crate::error::{Error, Result};

use super::field::{imaginary_discriminants, ImagQuadField};
use super::order::QuadOrder;

/// Imaginary squarefree D of degree n up to F_q*^2 scaling: leading
/// coefficient 1 or the fixed non-square.
pub fn normalized_fields(f: &Fq, n: usize) -> Vec<ImagQuadField> {
    let ns = f.nonsquare();
    imaginary_discriminants(f, n)
        .into_iter()
        .filter(|k| {
            let l = *k.d().lead().unwrap();
            l == 1 || l == ns
        })
        .collect()
}

/// All imaginary orders with deg(f^2 D) <= max_deg, one per order.
pub fn orders_up_to(f: &Fq, max_deg: usize) -> Vec<QuadOrder> {
    let mut out = Vec::new();
    for n in 1..=max_deg {
        for k in normalized_fields(f, n) {
            for df in 0..=(max_deg - n) / 2 {
                for c in Poly::monics(f, df) {
                    out.push(QuadOrder::new(&k, &c).unwrap());
                }
            }
        }
    }
    out
}

/// Number of CM points (sum of #Pic(O)) over orders with |d| <= t.
pub fn count_cm_points(f: &Fq, t: u128, max_deg: usize) -> Result<u128> {
    if t == 0 {
        return Ok(0);
    }
    let q = f.q() as u128;
    let mut n = 0usize;
    while q.checked_pow(n as u32 + 1).is_some_and(|v| v <= t) {
        n += 1;
    }
    if n > max_deg {
        return Err(Error::Budget(format!("height {t} needs deg d up to {n} > {max_deg}")));
    }
    Ok(orders_up_to(f, n).par_iter().map(|o| o.pic_order()).sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CebotarevCount {
    pub t: usize,
    pub count: u64,
    pub center: f64,
    pub radius: f64,
}

impl CebotarevCount {
    pub fn within(&self) -> bool {
        (self.count as f64 - self.center).abs() < self.radius
    }
}

/// Split primes of degree t in K, against q^t/(2t) +- 4(g+2) q^{t/2}.
pub fn cebotarev_count(k: &ImagQuadField, t: usize) -> Result<CebotarevCount> {
    if t == 0 {
        return Err(Error::Invalid("t must be positive".into()));
    }
    let f = k.field();
    let primes: Vec<_> = monic_irreducibles(f, t).collect();
    let count = primes.par_iter().filter(|p| legendre(k.d(), p).unwrap() == 1).count() as u64;
    Ok(cebotarev_window(k, t, count))
}

/// `count` placed against the window for degree t.
pub fn cebotarev_window(k: &ImagQuadField, t: usize, count: u64) -> CebotarevCount {
    let q = k.field().q() as f64;
    let center = q.powi(t as i32) / (2.0 * t as f64);
    let radius = 4.0 * (k.genus() as f64 + 2.0) * q.powf(t as f64 / 2.0);
    CebotarevCount { t, count, center, radius }
}

/// Lower bound for #Pic(O_K) when deg D = n, from `boundh`, Hasse-Weil and d_inf.
fn lower_pic(q: u32, n: usize) -> f64 {
    let (g, dinf) = if n % 2 == 1 { ((n - 1) / 2, 1.0) } else { ((n - 2) / 2, 2.0) };
    let (lo, _) = super::field::hasse_weil(q, g);
    let b = super::field::boundh(q, g);
    let b: f64 = b.to_string().parse().unwrap_or(f64::INFINITY);
    dinf * lo.max(b)
}

fn upper_pic(q: u32, n: usize) -> f64 {
    let (g, dinf) = if n % 2 == 1 { ((n - 1) / 2, 1.0) } else { ((n - 2) / 2, 2.0) };
    dinf * super::field::hasse_weil(q, g).1
}

/// Constants (B, C) with B |d|^{1/2-eps} <= #Pic(O) <= C |d|^{1/2+eps} for
/// eps = 1/4. B holds for every d; C only for deg d <= max_deg when q = 3.
pub fn pic_window_constants(q: u32, max_deg: usize) -> (f64, f64) {
    let qf = q as f64;
    let b = (1..=64).map(|n| lower_pic(q, n) / qf.powf(n as f64 / 4.0)).fold(f64::INFINITY, f64::min);
    let c = (1..=max_deg.max(1))
        .map(|n| upper_pic(q, n) / qf.powf(3.0 * n as f64 / 4.0))
        .fold(0.0, f64::max);
    (b, c)
}

pub fn pic_in_window(o: &QuadOrder, b: f64, c: f64) -> bool {
    let q = o.fq().q() as f64;
    let n = o.discriminant().deg() as f64;
    let h = o.pic_order() as f64;
    b * q.powf(n / 4.0) <= h * (1.0 + 1e-12) && h <= c * q.powf(3.0 * n / 4.0) * (1.0 + 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::APoly;

    #[test]
    fn cm_point_counts() {
        let f = Fq::new(3, 1).unwrap();
        assert_eq!(count_cm_points(&f, 0, 4).unwrap(), 0);
        assert_eq!(count_cm_points(&f, 3, 4).unwrap(), 6);
        assert_eq!(count_cm_points(&f, 8, 4).unwrap(), 6);
        assert!(count_cm_points(&f, 3u128.pow(6), 4).is_err());
    }

    #[test]
    fn cebotarev_small() {
        let f = Fq::new(3, 1).unwrap();
        let k = ImagQuadField::new(&APoly::parse(&f, "T^3+2*T").unwrap()).unwrap();
        // T, T+1, T+2 all divide D
        let c = cebotarev_count(&k, 1).unwrap();
        assert_eq!(c.count, 0);
        for t in 1..=6 {
            assert!(cebotarev_count(&k, t).unwrap().within());
        }
    }

    #[test]
    fn window_constants_hold() {
        for q in [3u32, 5] {
            let f = Fq::new(q, 1).unwrap();
            let (b, c) = pic_window_constants(q, 5);
            assert!(b > 0.0 && c > 0.0);
            for o in orders_up_to(&f, 5) {
                assert!(pic_in_window(&o, b, c), "{}", o.discriminant());
            }
        }
    }
}
