use crate::error::{Error, Result};

use super::pack::ConstantPack;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveBoundQuery {
    pub q: u32,
    pub n: u32,
    /// Degree of the curve.
    pub d: u32,
    /// [F : k].
    pub m: u32,
    /// Genus of F.
    pub g: u32,
}

impl CurveBoundQuery {
    pub fn validate(&self) -> Result<()> {
        if self.q % 2 == 0 || crate::arith::fq::prime_power(self.q as u64).is_none() {
            return Err(Error::Invalid(format!("q = {} is not an odd prime power", self.q)));
        }
        if self.n == 0 || self.d == 0 || self.m == 0 {
            return Err(Error::Invalid("n, d and m must be positive".into()));
        }
        Ok(())
    }
}

/// CM data for a pair of points: genera g_i and conductor degrees e_i.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CmPair {
    pub g1: u64,
    pub e1: u64,
    pub g2: u64,
    pub e2: u64,
}

/// Smallest t in 2 n_c N with q^t >= floor.
pub fn first_admissible_t(q: u32, floor: f64, n_c: u32) -> u64 {
    let step = 2 * n_c as u64;
    let mut t = step;
    while (q as f64).powi(t as i32) < floor {
        t += step;
    }
    t
}

/// (1/C4) q^t / t - 4 (C1 (g1 + g2) + C2 g + C3 + 2) q^{t/2}, against log_q |f1 f2|.
pub fn split_prime_sides(query: &CurveBoundQuery, pack: &ConstantPack, data: &CmPair, t: u64) -> (f64, f64) {
    let q = query.q as f64;
    let genus = pack.c1 * (data.g1 + data.g2) as f64 + pack.c2 * query.g as f64 + pack.c3;
    let lhs = q.powi(t as i32) / (pack.c4 * t as f64) - 4.0 * (genus + 2.0) * q.powf(t as f64 / 2.0);
    (lhs, (data.e1 + data.e2) as f64)
}

/// B_eps (q^{g_i} |f_i|)^{1-eps}, against 4 m d^2 (q^t + 1)^2, in natural logs.
pub fn class_number_sides(query: &CurveBoundQuery, pack: &ConstantPack, g: u64, e: u64, t: u64) -> (f64, f64) {
    let lq = (query.q as f64).ln();
    let lhs = pack.b_eps.ln() + (1.0 - pack.eps) * (g + e) as f64 * lq;
    let rhs = (4.0 * query.m as f64 * (query.d as f64).powi(2)).ln() + 2.0 * ((query.q as f64).powi(t as i32) + 1.0).ln();
    (lhs, rhs)
}

/// The least admissible t satisfying the split-prime inequality, if any below `t_max`.
pub fn first_split_t(query: &CurveBoundQuery, pack: &ConstantPack, data: &CmPair, t_max: u64) -> Option<u64> {
    let step = 2 * pack.n_c as u64;
    let mut t = first_admissible_t(query.q, 13f64.max(query.d as f64), pack.n_c);
    while t <= t_max {
        let (l, r) = split_prime_sides(query, pack, data, t);
        if pack.gt(l, r) {
            return Some(t);
        }
        t += step;
    }
    None
}

/// A t satisfying both inequalities, if one exists. The class-number side only gets
/// harder as t grows, so the least t of the split-prime side is the one to try.
pub fn witness_t(query: &CurveBoundQuery, pack: &ConstantPack, data: &CmPair) -> Option<u64> {
    let big = (data.g1 + data.e1).max(data.g2 + data.e2);
    let (gi, ei) = if data.g1 + data.e1 >= data.g2 + data.e2 { (data.g1, data.e1) } else { (data.g2, data.e2) };
    let t_max = 2 * big + 64;
    let t = first_split_t(query, pack, data, t_max)?;
    let (l, r) = class_number_sides(query, pack, gi, ei, t);
    pack.gt(l, r).then_some(t)
}

/// The hardest pairs with max_i (g_i + e_i) = big: both coordinates at the max
/// (the sums only grow), one per value of g1 + g2.
fn worst_cases(big: u64) -> impl Iterator<Item = CmPair> {
    (0..=2 * big).map(move |g| {
        let g1 = g.min(big);
        let g2 = g - g1;
        CmPair { g1, e1: big - g1, g2, e2: big - g2 }
    })
}

fn feasible_at(query: &CurveBoundQuery, pack: &ConstantPack, big: u64) -> bool {
    worst_cases(big).all(|d| witness_t(query, pack, &d).is_some())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveBound {
    /// Every CM pair with log_q H_CM > log_b admits a good t.
    pub log_b: u64,
    /// Largest max(g_i + e_i) that fails, if any.
    pub last_failure: Option<u64>,
    pub horizon: u64,
    /// The pair at the threshold together with its t.
    pub witness: (CmPair, u64),
    pub transcript: Vec<String>,
}

/// max_i (g_i + e_i) is at least (log_q H - 2)/2, as deg D <= 2g + 2.
fn min_big_for(log_h: u64) -> u64 {
    log_h.saturating_sub(1) / 2
}

pub fn curve_bound(query: &CurveBoundQuery, pack: &ConstantPack) -> Result<CurveBound> {
    query.validate()?;
    pack.validate()?;
    let mut horizon = 64u64;
    let (fails, horizon) = loop {
        let fails: Vec<bool> = (0..=horizon).map(|b| !feasible_at(query, pack, b)).collect();
        let last = fails.iter().rposition(|&f| f);
        match last {
            Some(l) if l as u64 * 2 >= horizon => {
                if horizon >= 1 << 10 {
                    return Err(Error::Infeasible(format!(
                        "no threshold below max(g+e) = {horizon}: split-prime and class-number inequalities never meet"
                    )));
                }
                horizon *= 2;
            }
            _ => break (fails, horizon),
        }
    };
    // predicate on the log height threshold b: all data with log H > b are fine
    let ok = |b: u64| (min_big_for(b + 1)..=horizon).all(|m| !fails[m as usize]);
    let (mut lo, mut hi) = (0u64, 2 * horizon + 2);
    if !ok(hi) {
        return Err(Error::Infeasible("threshold search did not bracket".into()));
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let log_b = lo;
    // monotonicity of the predicate, sampled
    for b in (0..=2 * horizon + 2).step_by(3) {
        if ok(b) && !ok(b + 1) {
            return Err(Error::Invalid(format!("feasibility is not monotone at b = {b}")));
        }
    }
    let big = min_big_for(log_b + 1);
    let (witness, t) = worst_cases(big)
        .map(|d| (d, witness_t(query, pack, &d).unwrap()))
        .max_by_key(|(_, t)| *t)
        .unwrap();
    let transcript = transcript_for(query, pack, &witness, t);
    Ok(CurveBound { log_b, last_failure: fails.iter().rposition(|&f| f).map(|x| x as u64), horizon, witness: (witness, t), transcript })
}

/// Both inequalities with the numbers substituted.
pub fn transcript_for(query: &CurveBoundQuery, pack: &ConstantPack, data: &CmPair, t: u64) -> Vec<String> {
    let q = query.q;
    let (l, r) = split_prime_sides(query, pack, data, t);
    let (gi, ei) = if data.g1 + data.e1 >= data.g2 + data.e2 { (data.g1, data.e1) } else { (data.g2, data.e2) };
    let (cl, cr) = class_number_sides(query, pack, gi, ei, t);
    vec![
        format!("data: g1={} deg f1={} g2={} deg f2={}", data.g1, data.e1, data.g2, data.e2),
        format!("t={t}: q^t={} >= max(13, d={}): {}", (q as f64).powi(t as i32), query.d, (q as f64).powi(t as i32) >= 13f64.max(query.d as f64)),
        format!(
            "(1/{})*{q}^{t}/{t} - 4*({}*{} + {}*{} + {} + 2)*{q}^{} = {l:.6e} > {r}: {}",
            pack.c4,
            pack.c1,
            data.g1 + data.g2,
            pack.c2,
            query.g,
            pack.c3,
            t as f64 / 2.0,
            pack.gt(l, r)
        ),
        format!(
            "{:.6}*({q}^{gi}*{q}^{ei})^{} = {:.6e} > 4*{}*{}^2*({q}^{t}+1)^2 = {:.6e}: {}",
            pack.b_eps,
            1.0 - pack.eps,
            cl.exp(),
            query.m,
            query.d,
            cr.exp(),
            pack.gt(cl, cr)
        ),
    ]
}

/// Both inequalities at (data, t), evaluated directly rather than in logs.
pub fn verify_witness(query: &CurveBoundQuery, pack: &ConstantPack, data: &CmPair, t: u64) -> bool {
    let q = query.q as f64;
    let qt = q.powi(t as i32);
    if t % (2 * pack.n_c as u64) != 0 || qt < 13f64.max(query.d as f64) {
        return false;
    }
    let (l, r) = split_prime_sides(query, pack, data, t);
    let (gi, ei) = if data.g1 + data.e1 >= data.g2 + data.e2 { (data.g1, data.e1) } else { (data.g2, data.e2) };
    let lhs = pack.b_eps * (q.powi(gi as i32) * q.powi(ei as i32)).powf(1.0 - pack.eps);
    let rhs = 4.0 * query.m as f64 * (query.d as f64).powi(2) * (qt + 1.0).powi(2);
    pack.gt(l, r) && pack.gt(lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn query(d: u32) -> CurveBoundQuery {
        CurveBoundQuery { q: 3, n: 2, d, m: 1, g: 0 }
    }

    #[test]
    fn regression_and_witness() {
        let q = query(2);
        let pack = ConstantPack::default_for(3, 1);
        let b = curve_bound(&q, &pack).unwrap();
        // pack-relative regression values
        assert_eq!(b.log_b, 130);
        assert_eq!(b.last_failure, Some(64));
        let (w, t) = b.witness;
        assert_eq!(t, 22);
        assert!(verify_witness(&q, &pack, &w, t));
        assert_eq!(b.transcript.len(), 4);
        assert!(b.transcript[2].ends_with("true") && b.transcript[3].ends_with("true"));
        // data just below the threshold fail somewhere
        let lf = b.last_failure.unwrap();
        assert!(worst_cases(lf).any(|d| witness_t(&q, &pack, &d).is_none()));
        let again = curve_bound(&q, &pack).unwrap();
        assert_eq!(again, b);
    }

    #[test]
    fn monotone_in_inputs() {
        let pack = ConstantPack::default_for(3, 1);
        let mut prev = 0;
        for d in [1, 2, 4, 8, 16] {
            let b = curve_bound(&query(d), &pack).unwrap().log_b;
            assert!(b >= prev, "d = {d}");
            prev = b;
        }
        let base = curve_bound(&query(2), &pack).unwrap().log_b;
        let bigger_b = ConstantPack { b_eps: pack.b_eps * 50.0, ..pack.clone() };
        assert!(curve_bound(&query(2), &bigger_b).unwrap().log_b <= base);
        for tweak in [
            ConstantPack { c1: pack.c1 * 4.0, ..pack.clone() },
            ConstantPack { c2: pack.c2 * 4.0, ..pack.clone() },
            ConstantPack { c3: pack.c3 * 4.0, ..pack.clone() },
            ConstantPack { c4: pack.c4 * 4.0, ..pack.clone() },
        ] {
            assert!(curve_bound(&query(2), &tweak).unwrap().log_b >= base);
        }
    }

    #[test]
    fn rejects_bad_queries() {
        let pack = ConstantPack::default_for(3, 1);
        assert!(curve_bound(&CurveBoundQuery { q: 4, ..query(2) }, &pack).is_err());
        assert!(curve_bound(&CurveBoundQuery { d: 0, ..query(2) }, &pack).is_err());
        let hopeless = ConstantPack { eps: 0.49, b_eps: 1e-300, ..pack };
        assert!(curve_bound(&query(2), &hopeless).is_err());
    }
}
