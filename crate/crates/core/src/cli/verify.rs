//! The verification suite: one check per property, each returning a verdict
//! and a one-line summary of what was compared.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{monic_irreducibles, APoly, Field, Fq, Poly};
use crate::bounds::{
    curve_bound, variety_schedule, verify_schedule, verify_witness, witness_t, CmDatum, CmPair, ConstantPack,
    CurveBoundQuery, VarietyQuery,
};
use crate::bttree::{center, count_outgoing_paths, count_outgoing_paths_exact, enumerate_outgoing_paths, TreeVertex};
use crate::drinfeld::{composition_sides, hecke_image, AField, DrinfeldModule};
use crate::error::Result;
use crate::heckemod::{
    check_fixed_point, compute_modular_polynomial, fixed_points, group_orders, is_stabilized, scalar_count_brute,
    squares_claim, type_finiteness, BiPoly, ModularPolynomial, PlaneCurve, SampleOptions,
};
use crate::quad::{
    boundh, cebotarev_count, cebotarev_window, count_cm_points, hasse_weil, imaginary_discriminants, QuadOrder,
};

use super::cache::{CacheStore, ClassnumRecord, Kind, PrimesRecord};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Check {
        Check { name, passed, detail }
    }

    fn from_result(name: &'static str, r: Result<(bool, String)>) -> Check {
        match r {
            Ok((passed, detail)) => Check::new(name, passed, detail),
            Err(e) => Check::new(name, false, format!("error: {e}")),
        }
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

/// How a suite run is set up.
pub struct Ctx<'a> {
    pub cache: Option<&'a CacheStore>,
    /// Smaller ranges everywhere.
    pub quick: bool,
    pub split_cap: usize,
    pub sample_extension: usize,
    pub progress: &'a (dyn Fn(&str) + Sync),
}

impl Ctx<'_> {
    fn warn_all(&self, ws: &[String]) {
        for w in ws {
            (self.progress)(&format!("warning: {w}"));
        }
    }

    fn save(&self, kind: Kind, recs: Vec<String>) -> Result<()> {
        if let Some(c) = self.cache {
            let ws = c.merge(kind, &recs)?;
            self.warn_all(&ws);
        }
        Ok(())
    }

    fn opts(&self) -> SampleOptions {
        SampleOptions { extension: self.sample_extension, cap: self.split_cap, seed: 1 }
    }
}

fn fq(q: u64) -> Result<Fq> {
    Fq::from_q(q)
}

fn parse(f: &Fq, s: &str) -> APoly {
    APoly::parse(f, s).expect("literal polynomial")
}

/// #Pic(O) from the L-polynomial and conductor formula against the number of
/// reduced forms, for every imaginary D of degree <= 5 and deg f <= 1.
pub fn class_numbers(ctx: &Ctx) -> Check {
    Check::from_result("class numbers: formula vs reduced forms", (|| {
        let qs: &[u64] = if ctx.quick { &[3] } else { &[3, 5] };
        let max_deg = if ctx.quick { 4 } else { 5 };
        let mut known: HashMap<(u32, String, String), u128> = HashMap::new();
        if let Some(c) = ctx.cache {
            let l = c.load(Kind::Classnum)?;
            ctx.warn_all(&l.warnings);
            for r in l.records.iter().filter_map(|r| ClassnumRecord::parse(r).ok()) {
                known.insert((r.q, r.d, r.f), r.h);
            }
        }
        let mut total = 0usize;
        let mut bad = Vec::new();
        let mut fresh = Vec::new();
        for &q in qs {
            let f = fq(q)?;
            let conductors: Vec<APoly> = (0..=1).flat_map(|d| Poly::monics(&f, d).collect::<Vec<_>>()).collect();
            for n in 1..=max_deg {
                (ctx.progress)(&format!("class numbers: q={q} deg D={n}"));
                let fields = imaginary_discriminants(&f, n);
                let rows: Vec<(String, bool, ClassnumRecord)> = fields
                    .par_iter()
                    .flat_map_iter(|k| conductors.iter().map(move |c| (k, c)))
                    .map(|(k, c)| {
                        let o = QuadOrder::new(k, c).unwrap();
                        let key = (q as u32, k.d().to_string(), c.to_string());
                        let h = known.get(&key).copied().unwrap_or_else(|| o.pic_order());
                        let forms = o.reduced_forms().map(|v| v.len() as u128).unwrap_or(u128::MAX);
                        let rec = ClassnumRecord { q: q as u32, d: key.1, f: key.2, h };
                        (o.discriminant().to_string(), forms == h, rec)
                    })
                    .collect();
                total += rows.len();
                for (d, ok, rec) in rows {
                    if !ok {
                        bad.push(format!("q={q} d={d}"));
                    }
                    fresh.push(rec.to_line());
                }
            }
        }
        ctx.save(Kind::Classnum, fresh)?;
        let detail = format!("q in {qs:?}, deg D <= {max_deg}, deg f <= 1: {total} orders, {} mismatches{}", bad.len(), first(&bad));
        Ok((bad.is_empty(), detail))
    })())
}

fn first(v: &[String]) -> String {
    v.first().map(|s| format!(" (first {s})")).unwrap_or_default()
}

/// Hasse-Weil window and `boundh` for every h, plus h(T^3 - T) = 4 at q = 3.
pub fn class_number_bounds(ctx: &Ctx) -> Check {
    Check::from_result("class number bounds", (|| {
        let qs: &[u64] = if ctx.quick { &[3] } else { &[3, 5] };
        let max_deg = if ctx.quick { 4 } else { 5 };
        let mut total = 0;
        let mut bad = Vec::new();
        for &q in qs {
            let f = fq(q)?;
            for n in 1..=max_deg {
                let fields = imaginary_discriminants(&f, n);
                let fails: Vec<String> = fields
                    .par_iter()
                    .filter_map(|k| {
                        let g = k.genus();
                        let h = k.class_number();
                        let (lo, hi) = hasse_weil(q as u32, g);
                        let ok = lo <= h as f64 * (1.0 + 1e-12)
                            && h as f64 <= hi * (1.0 + 1e-12)
                            && num_bigint::BigUint::from(h) >= boundh(q as u32, g);
                        (!ok).then(|| format!("q={q} D={} h={h}", k.d()))
                    })
                    .collect();
                total += fields.len();
                bad.extend(fails);
            }
        }
        let f3 = fq(3)?;
        let spot = crate::quad::ImagQuadField::new(&parse(&f3, "T^3+2*T"))?.class_number();
        let ok = bad.is_empty() && spot == 4;
        Ok((ok, format!("{total} fields, {} outside the bounds{}; h(T^3+2*T) = {spot}", bad.len(), first(&bad))))
    })())
}

fn ordinary(k: &AField, rng: &mut ChaCha8Rng) -> DrinfeldModule {
    loop {
        let phi = DrinfeldModule::from_j(k, &k.field().random(rng));
        if !phi.is_supersingular() {
            return phi;
        }
    }
}

/// |T_p(j)| = |p| + 1 and T_p1 T_p2 = T_p1p2 at random ordinary j, q = 3, char T^2 + 1.
pub fn hecke_counts(ctx: &Ctx) -> Check {
    Check::from_result("Hecke counts and composition", (|| {
        let f = fq(3)?;
        let pc = parse(&f, "T^2+1");
        let ps: Vec<APoly> = ["T", "T+1", "T+2"].iter().map(|s| parse(&f, s)).collect();
        let per_field = if ctx.quick { 2 } else { 10 };
        let mut rng = ChaCha8Rng::seed_from_u64(0x4ec);
        let mut jobs = Vec::new();
        for n in [2, 4] {
            let k = AField::new(&pc, n)?;
            for _ in 0..per_field {
                jobs.push(ordinary(&k, &mut rng));
            }
        }
        (ctx.progress)(&format!("Hecke: {} modules", jobs.len()));
        let cap = ctx.split_cap;
        let results: Vec<Result<(bool, bool)>> = jobs
            .par_iter()
            .map(|phi| {
                let mut counts = true;
                for p in &ps {
                    counts &= hecke_image(phi, p, cap)?.values.len() as u128 == p.norm() + 1;
                }
                let mut comp = true;
                for i in 0..ps.len() {
                    for j in i + 1..ps.len() {
                        let (a, b) = composition_sides(phi, &ps[i], &ps[j], cap)?;
                        comp &= a == b && a.len() == 16;
                    }
                }
                Ok((counts, comp))
            })
            .collect();
        let results = results.into_iter().collect::<Result<Vec<_>>>()?;
        let counts = results.iter().filter(|r| r.0).count();
        let comps = results.iter().filter(|r| r.1).count();
        let n = results.len();
        Ok((
            counts == n && comps == n,
            format!("{n} ordinary j over F_9, F_81: counts exact for {counts}, compositions exact for {comps}"),
        ))
    })())
}

/// Phi_p mod T^2 + 1 for the three linear p.
pub fn modular_polynomials(ctx: &Ctx) -> Check {
    Check::from_result("modular polynomials", (|| {
        let f = fq(3)?;
        let res = AField::residue_field(&parse(&f, "T^2+1"))?;
        let held_out = if ctx.quick { 4 } else { 10 };
        let mut notes = Vec::new();
        let mut ok = true;
        for ps in ["T", "T+1", "T+2"] {
            (ctx.progress)(&format!("modular polynomial for {ps}"));
            let p = parse(&f, ps);
            let phi = compute_modular_polynomial(&p, &res, &ctx.opts())?;
            let psi = phi.psi() as i64;
            let shape = phi.phi.is_symmetric() && phi.phi.deg_x() == psi && phi.phi.deg_y() == psi && psi == 4;
            let valid = phi.validate_fresh(held_out, ctx.split_cap, 7)?;
            let fp = fixed_points(&phi)?;
            let mut fixed_ok = fp.degree as i64 <= 2 * psi;
            for (j, _) in &fp.roots {
                fixed_ok &= check_fixed_point(&phi, &fp, j, ctx.split_cap)?;
            }
            ok &= shape && valid == held_out && fixed_ok;
            notes.push(format!(
                "{ps}: bidegree ({},{}) symmetric={} held-out {valid}/{held_out} diagonal deg {} roots ok={fixed_ok}",
                phi.phi.deg_x(),
                phi.phi.deg_y(),
                phi.phi.is_symmetric(),
                fp.degree
            ));
        }
        Ok((ok, notes.join("; ")))
    })())
}

fn modpoly_cached(ctx: &Ctx, m: &APoly, res: &AField, fresh: &mut Vec<String>) -> Result<ModularPolynomial> {
    let q = res.base().q();
    if let Some(c) = ctx.cache {
        let (hit, ws) = c.modpoly(q, &res.characteristic().to_string(), &m.to_string())?;
        ctx.warn_all(&ws);
        if let Some(phi) = hit {
            return Ok(phi);
        }
    }
    let phi = compute_modular_polynomial(m, res, &ctx.opts())?;
    fresh.push(phi.to_record());
    Ok(phi)
}

/// Modular curves are stabilized by coprime Hecke operators; random lines and conics are not.
pub fn stabilization(ctx: &Ctx) -> Check {
    Check::from_result("stabilization of modular curves", (|| {
        let f = fq(3)?;
        let res = AField::residue_field(&parse(&f, "T^3+2*T+1"))?;
        let bound = if ctx.quick { 4 } else { 10 };
        let levels = type_finiteness(&f, bound)?;
        let mut fresh = Vec::new();
        let mut phis = Vec::new();
        for m in &levels {
            (ctx.progress)(&format!("stabilization: Phi_{m}"));
            phis.push(modpoly_cached(ctx, m, &res, &mut fresh)?);
        }
        ctx.save(Kind::Modpoly, fresh)?;
        let mut pairs = Vec::new();
        for (a, n) in levels.iter().enumerate() {
            for (b, m) in levels.iter().enumerate() {
                if n.gcd(m).is_one() {
                    pairs.push((a, b));
                }
            }
        }
        (ctx.progress)(&format!("stabilization: {} pairs", pairs.len()));
        let verdicts: Vec<Result<bool>> = pairs
            .par_iter()
            .map(|&(a, b)| is_stabilized(&PlaneCurve::from_modular(&phis[a])?, &phis[b]))
            .collect();
        let mut failed = Vec::new();
        for (&(a, b), v) in pairs.iter().zip(verdicts) {
            if !v? {
                failed.push(format!("X_0({}) under T_{}", levels[a], levels[b]));
            }
        }
        // controls: lines t2 = a t1 + b and conics t2 = a t1^2 + b t1 + c
        let r = res.field();
        let mut rng = ChaCha8Rng::seed_from_u64(0xc0);
        let t = phis.iter().position(|p| p.m == parse(&f, "T")).unwrap();
        let t1 = phis.iter().position(|p| p.m == parse(&f, "T+1")).unwrap();
        let mut controls = 0;
        let mut stabilized = Vec::new();
        for i in 0..6 {
            let a = loop {
                let a = r.random(&mut rng);
                if !r.is_zero(&a) && !r.is_one(&a) {
                    break a;
                }
            };
            let b = r.random(&mut rng);
            let (curve, m) = if i % 2 == 0 {
                (PlaneCurve::line(&res, &a, &b)?, t)
            } else {
                let c = r.random(&mut rng);
                let x = BiPoly::x(r);
                let g = BiPoly::y(r)
                    .sub(&x.mul(&x).scale(&a))
                    .sub(&x.scale(&b))
                    .sub(&BiPoly::constant(r, c));
                (PlaneCurve::new(&res, &g)?, t1)
            };
            controls += 1;
            if is_stabilized(&curve, &phis[m])? {
                stabilized.push(curve.f.fmt_with(|c| res.fmt_elem(c)));
            }
        }
        let ok = failed.is_empty() && stabilized.is_empty();
        Ok((
            ok,
            format!(
                "{} levels with psi <= {bound}, {} coprime pairs, {} not stabilized{}; {controls} controls, {} stabilized{}",
                levels.len(),
                pairs.len(),
                failed.len(),
                first(&failed),
                stabilized.len(),
                first(&stabilized)
            ),
        ))
    })())
}

fn random_vertex(pr: &APoly, rng: &mut ChaCha8Rng) -> TreeVertex {
    let mut v = TreeVertex::root(pr);
    for _ in 0..rng.gen_range(0..3) {
        v = v.parent();
    }
    for _ in 0..rng.gen_range(0..5) {
        let ch = v.children();
        v = ch[rng.gen_range(0..ch.len())].clone();
    }
    v
}

fn tree_metric(pr: &APoly, samples: usize) -> (bool, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ee);
    let mut bad = 0;
    for _ in 0..samples {
        let [a, b, c] = [0, 1, 2].map(|_| random_vertex(pr, &mut rng));
        let mut ok = a.distance(&b) == b.distance(&a)
            && (a.distance(&b) == 0) == (a == b)
            && a.distance(&c) <= a.distance(&b) + b.distance(&c);
        let m = center(&a, &b, &c);
        for (x, y) in [(&a, &b), (&a, &c), (&b, &c)] {
            ok &= x.distance(&m) + m.distance(y) == x.distance(y);
        }
        for perm in [(&b, &c, &a), (&c, &a, &b), (&b, &a, &c), (&a, &c, &b), (&c, &b, &a)] {
            ok &= center(perm.0, perm.1, perm.2) == m;
        }
        bad += usize::from(!ok);
    }
    (bad == 0, bad)
}

/// Paths of length n leaving a vertex away from two fixed directions, for
/// |p| in {3, 9} and n <= 3, against `count` (displayed or exact).
fn tree_check(ctx: &Ctx, name: &'static str, displayed: bool) -> Check {
    Check::from_result(name, (|| {
        let f = fq(3)?;
        let primes: &[&str] = if ctx.quick { &["T"] } else { &["T", "T^2+1"] };
        let mut notes = Vec::new();
        let mut ok = true;
        for ps in primes {
            let pr = parse(&f, ps);
            let (metric, bad) = tree_metric(&pr, if ctx.quick { 30 } else { 150 });
            ok &= metric;
            let norm = pr.norm() as u64;
            let root = TreeVertex::root(&pr);
            let mut mism = Vec::new();
            for n in 0..=3u32 {
                let brute = enumerate_outgoing_paths(&root, n, 2);
                let exact = count_outgoing_paths_exact(norm, n, 2)?;
                let formula = count_outgoing_paths(norm, n, 2)?;
                let agree = if displayed { formula == brute } else { exact == brute && formula >= brute };
                if !agree {
                    mism.push(format!("n={n}: formula {formula}, exact {exact}, enumerated {brute}"));
                }
            }
            ok &= mism.is_empty();
            notes.push(format!(
                "|p|={norm}: metric/median failures {bad}, count mismatches {}{}",
                mism.len(),
                mism.first().map(|m| format!(" ({m})")).unwrap_or_default()
            ));
        }
        Ok((ok, notes.join("; ")))
    })())
}

/// The literal count (|p| - 1)(|p| + 1)^{n-1}.
pub fn tree_displayed_count(ctx: &Ctx) -> Check {
    tree_check(ctx, "tree metric and displayed path count", true)
}

/// The corrected count (|p| - 1)|p|^{n-1}, with the displayed one as an upper bound.
pub fn tree_exact_count(ctx: &Ctx) -> Check {
    tree_check(ctx, "tree metric and path count", false)
}

/// |G/H| = |PSL_2| for even-degree N, an odd-degree control, and the squares claim.
pub fn group_theory(ctx: &Ctx) -> Check {
    Check::from_result("group orders and squares", (|| {
        let mut ok = true;
        let mut tested = 0;
        let qs: &[u64] = if ctx.quick { &[3] } else { &[3, 5] };
        for &q in qs {
            let f = fq(q)?;
            for d in 1..=4 {
                if (q as u128).pow(d as u32) > 81 {
                    break;
                }
                for n in Poly::monics(&f, d) {
                    if !n.is_squarefree() {
                        continue;
                    }
                    let fs = n.factor();
                    if fs.iter().any(|(p, _)| p.deg() % 2 == 1) {
                        continue;
                    }
                    let o = group_orders(&n)?;
                    ok &= o.quotient_matches() && o.h == scalar_count_brute(&n)?;
                    tested += 1;
                }
            }
        }
        let f3 = fq(3)?;
        let control = group_orders(&parse(&f3, "T"))?;
        let control_differs = !control.quotient_matches();
        ok &= control_differs;
        let mut claims = 0;
        let sq: &[u64] = if ctx.quick { &[3] } else { &[3, 5, 9] };
        for &q in sq {
            let f = fq(q)?;
            for d in [2, 4] {
                for p in monic_irreducibles(&f, d).take(6) {
                    ok &= squares_claim(&p)?;
                    claims += 1;
                }
            }
        }
        Ok((
            ok,
            format!(
                "{tested} even-degree N with |A/N| <= 81 match; odd control T: |G/H| {} |PSL| = {}; squares claim on {claims} primes",
                if control_differs { "!=" } else { "==" },
                control.psl
            ),
        ))
    })())
}

/// Split-prime counts inside the window, q = 3, deg D <= 4, t <= 8.
pub fn cebotarev(ctx: &Ctx) -> Check {
    Check::from_result("Cebotarev windows", (|| {
        let f = fq(3)?;
        let (max_deg, max_t) = if ctx.quick { (3, 6) } else { (4, 8) };
        let mut known: HashMap<(String, usize), u64> = HashMap::new();
        if let Some(c) = ctx.cache {
            let l = c.load(Kind::Primes)?;
            ctx.warn_all(&l.warnings);
            for r in l.records.iter().filter_map(|r| PrimesRecord::parse(r).ok()).filter(|r| r.q == 3) {
                known.insert((r.d, r.t), r.count);
            }
        }
        let mut fresh = Vec::new();
        let mut total = 0;
        let mut bad = Vec::new();
        for n in 1..=max_deg {
            for k in imaginary_discriminants(&f, n) {
                for t in 1..=max_t {
                    let c = match known.get(&(k.d().to_string(), t)) {
                        Some(&count) => cebotarev_window(&k, t, count),
                        None => cebotarev_count(&k, t)?,
                    };
                    fresh.push(PrimesRecord { q: 3, d: k.d().to_string(), t, count: c.count }.to_line());
                    total += 1;
                    if !c.within() {
                        bad.push(format!("D={} t={t}: {} vs {:.2} +- {:.2}", k.d(), c.count, c.center, c.radius));
                    }
                }
            }
        }
        ctx.save(Kind::Primes, fresh)?;
        Ok((bad.is_empty(), format!("{total} (D, t) pairs, {} outside{}", bad.len(), first(&bad))))
    })())
}

/// A spread of pairs with max(g_i + e_i) = big.
fn pairs_at(big: u64) -> Vec<CmPair> {
    let mut out = Vec::new();
    for g1 in 0..=big {
        for s in [0, big / 2, big] {
            for g2 in (0..=s).step_by((s as usize / 8).max(1)) {
                out.push(CmPair { g1, e1: big - g1, g2, e2: s - g2 });
            }
        }
    }
    out
}

/// Bound and schedule solvers re-verified by substitution, monotone, and stable.
pub fn bounds_solvers(ctx: &Ctx) -> Check {
    Check::from_result("bound and schedule solvers", (|| {
        let mut ok = true;
        let mut notes = Vec::new();
        let queries = [
            CurveBoundQuery { q: 3, n: 2, d: 2, m: 1, g: 0 },
            CurveBoundQuery { q: 5, n: 2, d: 2, m: 1, g: 0 },
            CurveBoundQuery { q: 3, n: 3, d: 5, m: 2, g: 1 },
        ];
        let mut substituted = 0;
        for (i, qy) in queries.iter().enumerate() {
            let pack = ConstantPack::default_for(qy.q, qy.m);
            let b = curve_bound(qy, &pack)?;
            let (w, t) = b.witness;
            ok &= verify_witness(qy, &pack, &w, t);
            // pairs that can have log H > log_b, a band of heights
            let lo = b.log_b / 2;
            let span = if ctx.quick { 2 } else { 6 };
            for big in lo..lo + span {
                for pair in pairs_at(big) {
                    match witness_t(qy, &pack, &pair) {
                        Some(t) => ok &= verify_witness(qy, &pack, &pair, t),
                        None => ok = false,
                    }
                    substituted += 1;
                }
            }
            ok &= curve_bound(qy, &pack)? == b;
            if i == 0 {
                ok &= b.log_b == 130;
                // larger degree or genus constants never lower the threshold
                let mut prev = 0;
                for d in [1, 2, 4, 8] {
                    let v = curve_bound(&CurveBoundQuery { d, ..qy.clone() }, &pack)?.log_b;
                    ok &= v >= prev;
                    prev = v;
                }
                let bigger = ConstantPack { c1: pack.c1 * 2.0, ..pack.clone() };
                ok &= curve_bound(qy, &bigger)?.log_b >= b.log_b;
            }
            if i == 1 {
                ok &= b.log_b == 82;
            }
            notes.push(format!("q={} d={} log_b={}", qy.q, qy.d, b.log_b));
        }
        let pack = ConstantPack::default_for(3, 1);
        let schedules = [
            VarietyQuery { q: 3, deg_x: 2, depth: 2, fk: 1, data: vec![CmDatum { g: 200, e: 10 }; 2] },
            VarietyQuery { q: 3, deg_x: 2, depth: 3, fk: 1, data: vec![CmDatum { g: 600, e: 100 }; 3] },
            VarietyQuery { q: 3, deg_x: 4, depth: 3, fk: 2, data: vec![CmDatum { g: 900, e: 0 }, CmDatum { g: 700, e: 50 }] },
        ];
        for vq in &schedules {
            let s = variety_schedule(vq, &pack)?;
            ok &= verify_schedule(vq, &pack, &s.ts);
            for j in 0..s.ts.len() {
                let mut ts = s.ts.clone();
                ts[j] -= 2;
                ok &= !verify_schedule(vq, &pack, &ts);
            }
            ok &= variety_schedule(vq, &pack)? == s;
            notes.push(format!("schedule {:?}", s.ts));
        }
        notes.push(format!("{substituted} pairs substituted"));
        Ok((ok, notes.join("; ")))
    })())
}

/// Number of CM points of height <= t against a fitted C t^{7/4}.
pub fn cm_counting(ctx: &Ctx) -> Check {
    Check::from_result("CM point counts", (|| {
        let f = fq(3)?;
        let top = if ctx.quick { 6 } else { 8 };
        let mut pts = Vec::new();
        for k in 1..=top {
            (ctx.progress)(&format!("CM counts: t = 3^{k}"));
            let t = 3u128.pow(k);
            pts.push((t, count_cm_points(&f, t, top as usize)?));
        }
        let exp = 1.75;
        let c = pts[..3].iter().map(|&(t, n)| n as f64 / (t as f64).powf(exp)).fold(0.0, f64::max);
        let over: Vec<String> = pts[3..]
            .iter()
            .filter(|&&(t, n)| n as f64 > c * (t as f64).powf(exp))
            .map(|(t, n)| format!("t={t} count={n}"))
            .collect();
        let (t_max, n_max) = *pts.last().unwrap();
        Ok((
            over.is_empty(),
            format!(
                "C = {c:.4} fitted on t <= 27; t up to {t_max}: count {n_max} <= {:.1}; {} exceed{}",
                c * (t_max as f64).powf(exp),
                over.len(),
                first(&over)
            ),
        ))
    })())
}

pub type Criterion = fn(&Ctx) -> Check;

/// The ten acceptance criteria in order; the tree one uses the displayed count.
pub const ACCEPTANCE: [Criterion; 10] = [
    class_numbers,
    class_number_bounds,
    hecke_counts,
    modular_polynomials,
    stabilization,
    tree_displayed_count,
    group_theory,
    cebotarev,
    bounds_solvers,
    cm_counting,
];

/// The suite behind `verify`: as above, with the corrected tree count.
pub const SUITE: [Criterion; 10] = [
    class_numbers,
    class_number_bounds,
    hecke_counts,
    modular_polynomials,
    stabilization,
    tree_exact_count,
    group_theory,
    cebotarev,
    bounds_solvers,
    cm_counting,
];

pub fn run_all(ctx: &Ctx, checks: &[Criterion]) -> Vec<Check> {
    checks
        .iter()
        .enumerate()
        .map(|(i, c)| {
            (ctx.progress)(&format!("[{}/{}] running", i + 1, checks.len()));
            c(ctx)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::error::Error;

    fn ctx() -> Ctx<'static> {
        Ctx { cache: None, quick: true, split_cap: 24, sample_extension: 2, progress: &|_| {} }
    }

    #[test]
    fn cheap_checks_pass() {
        for c in [class_number_bounds as Criterion, tree_exact_count, group_theory, cebotarev] {
            let r = c(&ctx());
            assert!(r.passed, "{}", r.line());
        }
        assert!(!tree_displayed_count(&ctx()).passed);
    }

    #[test]
    fn errors_become_failures() {
        let c = Check::from_result("x", Err(Error::Invalid("nope".into())));
        assert!(!c.passed);
        assert_eq!(c.line(), "FAIL x: error: invalid input: nope");
    }
}
