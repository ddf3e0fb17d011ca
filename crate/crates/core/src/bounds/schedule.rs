use num_bigint::BigUint;

use crate::arith::{monic_irreducibles, APoly};
use crate::error::{Error, Result};
use crate::quad::QuadOrder;

use super::pack::ConstantPack;

/// Genus of K_i and degree of the conductor f_i for one coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CmDatum {
    pub g: u64,
    pub e: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarietyQuery {
    pub q: u32,
    pub deg_x: u64,
    /// dim X; the schedule has depth - 1 entries.
    pub depth: usize,
    /// [F : k].
    pub fk: u64,
    /// One entry per coordinate, so n = data.len().
    pub data: Vec<CmDatum>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    pub ts: Vec<u64>,
    pub transcript: Vec<String>,
}

const T_LIMIT: u64 = 1 << 20;

fn ln_2qt_2(q: f64, t: u64) -> f64 {
    std::f64::consts::LN_2 + t as f64 * q.ln() + (-(t as f64) * q.ln()).exp().ln_1p()
}

impl VarietyQuery {
    fn n(&self) -> usize {
        self.data.len()
    }

    fn validate(&self) -> Result<()> {
        if self.q % 2 == 0 || crate::arith::fq::prime_power(self.q as u64).is_none() {
            return Err(Error::Invalid(format!("q = {} is not an odd prime power", self.q)));
        }
        if self.depth < 2 {
            return Err(Error::Invalid("depth must be at least 2".into()));
        }
        if self.data.is_empty() || self.deg_x == 0 || self.fk == 0 {
            return Err(Error::Invalid("need CM data, deg X >= 1 and [F:k] >= 1".into()));
        }
        Ok(())
    }

    /// Both sides of the split-prime surplus at t.
    pub fn veq4_sides(&self, pack: &ConstantPack, t: u64) -> (f64, f64) {
        let q = self.q as f64;
        let n = self.n() as i32;
        let gsum: u64 = self.data.iter().map(|d| d.g).sum();
        let esum: u64 = self.data.iter().map(|d| d.e).sum();
        let lhs = q.powi(t as i32) / (2f64.powi(n) * self.fk as f64 * t as f64)
            - 4.0 * (pack.c1 * gsum as f64 + pack.c2 + 2.0) * q.powf(t as f64 / 2.0);
        (lhs, esum as f64)
    }

    /// Lower bound on t_{j+1} ln q from the spacing condition, given t_1..t_j.
    fn veq3_ln(&self, prev: &[u64]) -> f64 {
        let q = self.q as f64;
        let j = prev.len() as i32;
        let n = self.n() as f64;
        let mut s = 2f64.powi(j) * (self.deg_x as f64).ln();
        for (m, &t) in prev.iter().enumerate() {
            s += n * 2f64.powi(j - 1 - m as i32) * ln_2qt_2(q, t);
        }
        s
    }

    /// Both sides of the class-number condition at t_{d-1}, for coordinate i, in logs.
    pub fn veq2_sides(&self, pack: &ConstantPack, i: usize, t: u64) -> (f64, f64) {
        let q = self.q as f64;
        let d = self.data[i];
        let lhs = pack.b_eps.ln() + (1.0 - pack.eps) * (d.g + d.e) as f64 * q.ln();
        let rhs = (self.fk as f64).ln() + 2.0 * t as f64 * q.ln() + self.n() as f64 * ln_2qt_2(q, t);
        (lhs, rhs)
    }
}

/// The lexicographically least schedule t_1 < ... < t_{d-1} in 2 n_c N.
///
/// Each condition bounds t_{j+1} from below in terms of t_1..t_j, except the
/// class-number one, which bounds t_{d-1} from above; so the greedy choice is
/// least and the schedule exists iff the greedy one passes at the end.
pub fn variety_schedule(query: &VarietyQuery, pack: &ConstantPack) -> Result<Schedule> {
    query.validate()?;
    pack.validate()?;
    let q = query.q as f64;
    let step = 2 * pack.n_c as u64;
    let mut ts: Vec<u64> = Vec::new();
    for j in 0..query.depth - 1 {
        let floor_ln = if j == 0 { 13f64.max(query.deg_x as f64).ln() } else { query.veq3_ln(&ts) };
        let mut t = step;
        while (t as f64) * q.ln() < floor_ln * (1.0 - pack.guard) - pack.guard {
            t += step;
        }
        // round-off must not admit a t the exact check rejects
        while !spacing_ok(query, &ts, t) {
            t += step;
        }
        loop {
            if t > T_LIMIT {
                return Err(Error::Infeasible(format!("split-prime surplus fails for every t_{} <= {T_LIMIT}", j + 1)));
            }
            let (l, r) = query.veq4_sides(pack, t);
            if pack.gt(l, r) {
                break;
            }
            t += step;
        }
        ts.push(t);
    }
    let last = *ts.last().unwrap();
    for i in 0..query.n() {
        let (l, r) = query.veq2_sides(pack, i, last);
        if !pack.gt(l, r) {
            return Err(Error::Infeasible(format!(
                "class-number condition fails for coordinate {} at t_{} = {last}: ln lhs = {l:.4} <= ln rhs = {r:.4}",
                i + 1,
                ts.len()
            )));
        }
    }
    let transcript = transcript(query, pack, &ts);
    Ok(Schedule { ts, transcript })
}

/// q^{t_{j+1}} >= (deg X)^{2^j} prod_m (2 q^{t_m} + 2)^{n 2^{j-m}}, in integers.
fn spacing_ok(query: &VarietyQuery, prev: &[u64], t: u64) -> bool {
    let q = BigUint::from(query.q);
    if prev.is_empty() {
        return q.pow(t as u32) >= BigUint::from(13u64.max(query.deg_x));
    }
    let j = prev.len() as u32;
    let mut rhs = BigUint::from(query.deg_x).pow(1 << j);
    for (m, &tm) in prev.iter().enumerate() {
        let base = 2u32 * q.pow(tm as u32) + 2u32;
        rhs *= base.pow(query.n() as u32 * (1 << (j - 1 - m as u32)));
    }
    q.pow(t as u32) >= rhs
}

fn transcript(query: &VarietyQuery, pack: &ConstantPack, ts: &[u64]) -> Vec<String> {
    let q = query.q;
    let mut out = Vec::new();
    for (j, &t) in ts.iter().enumerate() {
        if j == 0 {
            out.push(format!("t_1={t}: {q}^{t} >= max(13, {}): {}", query.deg_x, spacing_ok(query, &[], t)));
        } else {
            out.push(format!(
                "t_{}={t}: {q}^{t} >= {}^{} * prod (2*{q}^t_m+2)^(n 2^(j-m)): {}",
                j + 1,
                query.deg_x,
                1u64 << j,
                spacing_ok(query, &ts[..j], t)
            ));
        }
        let (l, r) = query.veq4_sides(pack, t);
        out.push(format!("  surplus at t_{}: {l:.6e} > {r}: {}", j + 1, pack.gt(l, r)));
    }
    let last = *ts.last().unwrap();
    for i in 0..query.n() {
        let (l, r) = query.veq2_sides(pack, i, last);
        out.push(format!("  class number, coordinate {}: ln {:.6} > ln {:.6}: {}", i + 1, l, r, pack.gt(l, r)));
    }
    out
}

/// Re-checks a schedule against every condition, with exact integers where
/// the condition is integral.
pub fn verify_schedule(query: &VarietyQuery, pack: &ConstantPack, ts: &[u64]) -> bool {
    let step = 2 * pack.n_c as u64;
    if ts.len() + 1 != query.depth || ts.iter().any(|t| *t == 0 || t % step != 0) {
        return false;
    }
    if ts.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    (0..ts.len()).all(|j| spacing_ok(query, &ts[..j], ts[j]))
        && ts.iter().all(|&t| {
            let (l, r) = query.veq4_sides(pack, t);
            pack.gt(l, r)
        })
        && (0..query.n()).all(|i| {
            let (l, r) = query.veq2_sides(pack, i, *ts.last().unwrap());
            pack.gt(l, r)
        })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitPrimes {
    pub t: usize,
    pub primes: Vec<APoly>,
    /// [M : F k] and the constant field degree of the compositum M of the K_i.
    pub n_g: u64,
    pub n_c: u64,
    pub center: f64,
    pub radius: f64,
}

impl SplitPrimes {
    pub fn within(&self) -> bool {
        (self.primes.len() as f64 - self.center).abs() < self.radius
    }
}

/// Rank over F_2 of the classes of the D_i in k^*/k^*2, and whether the
/// constant non-square class lies in their span.
fn square_class_rank(ds: &[&APoly]) -> (usize, bool) {
    let f = ds[0].field();
    let mut primes: Vec<APoly> = Vec::new();
    let mut vecs: Vec<Vec<bool>> = Vec::new();
    for d in ds {
        let fs = d.factor();
        for (p, _) in &fs {
            if !primes.contains(p) {
                primes.push(p.clone());
            }
        }
        let mut v = vec![false; 1];
        v[0] = !f.is_square_elem(*d.lead().unwrap());
        v.extend(primes.iter().map(|p| fs.iter().any(|(r, e)| r == p && e % 2 == 1)));
        vecs.push(v);
    }
    let width = primes.len() + 1;
    for v in vecs.iter_mut() {
        v.resize(width, false);
    }
    let mut rows: Vec<Vec<bool>> = Vec::new();
    let reduce = |rows: &Vec<Vec<bool>>, mut v: Vec<bool>| {
        for r in rows {
            let piv = r.iter().position(|&b| b).unwrap();
            if v[piv] {
                for (a, b) in v.iter_mut().zip(r) {
                    *a ^= *b;
                }
            }
        }
        v
    };
    for v in vecs {
        let v = reduce(&rows, v);
        if let Some(piv) = v.iter().position(|&b| b) {
            for r in rows.iter_mut() {
                if r[piv] {
                    for (a, b) in r.iter_mut().zip(&v) {
                        *a ^= *b;
                    }
                }
            }
            rows.push(v);
            rows.sort_by_key(|r| r.iter().position(|&b| b));
        }
    }
    let mut e0 = vec![false; width];
    e0[0] = true;
    let constant = reduce(&rows, e0).iter().all(|&b| !b);
    (rows.len(), constant)
}

/// Monic primes of degree t split in every order and prime to every conductor.
pub fn split_prime_search(orders: &[QuadOrder], t: usize, require_even: bool, pack: &ConstantPack) -> Result<SplitPrimes> {
    let first = orders.first().ok_or_else(|| Error::Invalid("need at least one order".into()))?;
    let f = first.fq().clone();
    if t == 0 {
        return Err(Error::Invalid("t must be positive".into()));
    }
    if (f.q() as f64).powi(t as i32) > 5e6 {
        return Err(Error::Budget(format!("{}^{t} candidate primes", f.q())));
    }
    let ds: Vec<&APoly> = orders.iter().map(|o| o.field().d()).collect();
    let (k, constant) = square_class_rank(&ds);
    let (n_g, n_c) = if constant { (1u64 << (k - 1), 2u64) } else { (1u64 << k, 1u64) };
    let genus = if k == 1 {
        first.field().genus() as f64
    } else {
        pack.c1 * orders.iter().map(|o| o.field().genus() as f64).sum::<f64>() + pack.c2
    };
    let q = f.q() as f64;
    let center = if t as u64 % n_c == 0 { q.powi(t as i32) / (n_g as f64 * t as f64) } else { 0.0 };
    let radius = 4.0 * (genus + 2.0) * q.powf(t as f64 / 2.0);
    let primes = if require_even && t % 2 == 1 {
        Vec::new()
    } else {
        let mut out = Vec::new();
        for p in monic_irreducibles(&f, t) {
            if orders.iter().any(|o| !o.conductor().gcd(&p).is_one()) {
                continue;
            }
            let mut all = true;
            for o in orders {
                if !o.splits(&p)? {
                    all = false;
                    break;
                }
            }
            if all {
                out.push(p);
            }
        }
        out
    };
    Ok(SplitPrimes { t, primes, n_g, n_c, center, radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Fq;
    use crate::bounds::curve::{first_split_t, CmPair, CurveBoundQuery};
    use crate::quad::{cebotarev_count, ImagQuadField};

    fn pack() -> ConstantPack {
        ConstantPack::default_for(3, 1)
    }

    #[test]
    fn spacing_example() {
        // q^{t_1} = 81, n = 3, deg X = 2: t_2 >= log_3(4 * 164^3) ~ 15.2
        let q = VarietyQuery { q: 3, deg_x: 2, depth: 3, fk: 1, data: vec![CmDatum { g: 0, e: 0 }; 3] };
        assert!(!spacing_ok(&q, &[4], 14));
        assert!(spacing_ok(&q, &[4], 16));
        let big = VarietyQuery { data: vec![CmDatum { g: 600, e: 100 }; 3], ..q };
        let s = variety_schedule(&big, &pack()).unwrap();
        assert!(verify_schedule(&big, &pack(), &s.ts));
        assert!(s.ts.windows(2).all(|w| w[0] < w[1]) && s.ts.iter().all(|t| t % 2 == 0));
        assert!(s.transcript.iter().all(|l| l.ends_with("true")));
        // an earlier entry anywhere breaks it
        for j in 0..s.ts.len() {
            let mut ts = s.ts.clone();
            ts[j] -= 2;
            assert!(!verify_schedule(&big, &pack(), &ts), "{ts:?}");
        }
    }

    #[test]
    fn depth_two_matches_curve_search() {
        let p = pack();
        for (g, e) in [(0, 0), (5, 3), (40, 2)] {
            let vq = VarietyQuery { q: 3, deg_x: 2, depth: 2, fk: 1, data: vec![CmDatum { g, e }, CmDatum { g, e }] };
            // same genus term: C2 g + C3 of the curve form plays the role of C2 here
            let cq = CurveBoundQuery { q: 3, n: 2, d: 2, m: 1, g: 0 };
            let cp = ConstantPack { c3: p.c2, c4: 4.0, ..p.clone() };
            let t_curve = first_split_t(&cq, &cp, &CmPair { g1: g, e1: e, g2: g, e2: e }, 4096).unwrap();
            let t_var = (2..).step_by(2).find(|&t| {
                spacing_ok(&vq, &[], t) && {
                    let (l, r) = vq.veq4_sides(&p, t);
                    p.gt(l, r)
                }
            });
            assert_eq!(Some(t_curve), t_var);
        }
    }

    #[test]
    fn infeasible_reports_condition() {
        let q = VarietyQuery { q: 3, deg_x: 2, depth: 3, fk: 1, data: vec![CmDatum { g: 1, e: 0 }; 3] };
        let e = variety_schedule(&q, &pack()).unwrap_err();
        assert!(e.to_string().contains("class-number"), "{e}");
        assert!(variety_schedule(&VarietyQuery { depth: 1, ..q }, &pack()).is_err());
    }

    #[test]
    fn split_primes_single_order() {
        let f = Fq::new(3, 1).unwrap();
        let k = ImagQuadField::new(&APoly::parse(&f, "T^3+2*T+1").unwrap()).unwrap();
        let cond = APoly::parse(&f, "T^2+1").unwrap();
        let o = QuadOrder::new(&k, &cond).unwrap();
        for t in 1..=6 {
            let s = split_prime_search(&[o.clone()], t, false, &pack()).unwrap();
            let c = cebotarev_count(&k, t).unwrap();
            let dividing = if t == 2 && o.field().d().gcd(&cond).is_one() && QuadOrder::maximal(&k).splits(&cond).unwrap() { 1 } else { 0 };
            assert_eq!(s.primes.len() as u64 + dividing, c.count, "t = {t}");
            if s.center > s.radius {
                assert!(s.within());
            }
        }
        assert!(split_prime_search(&[o], 3, true, &pack()).unwrap().primes.is_empty());
    }

    #[test]
    fn compositum_degrees() {
        let f = Fq::new(3, 1).unwrap();
        let o = |s: &str| QuadOrder::maximal(&ImagQuadField::new(&APoly::parse(&f, s).unwrap()).unwrap());
        // T and 2T differ by the non-square 2: the compositum has constants F_9
        let c = o("T");
        let s = split_prime_search(&[c.clone(), o("2*T")], 3, false, &pack()).unwrap();
        assert_eq!((s.n_g, s.n_c), (2, 2));
        assert!(s.primes.is_empty());
        assert_eq!(s.center, 0.0);
        let s = split_prime_search(&[o("2*T^2+2"), c.clone()], 4, false, &pack()).unwrap();
        assert_eq!((s.n_g, s.n_c), (4, 1));
        let s = split_prime_search(&[c.clone(), c], 4, false, &pack()).unwrap();
        assert_eq!((s.n_g, s.n_c), (2, 1));
    }
}
