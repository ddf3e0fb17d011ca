use std::io::Write;

use crate::arith::{APoly, Fq};
use crate::bounds::{curve_bound, variety_schedule, CmDatum, ConstantPack, CurveBoundQuery, VarietyQuery};
use crate::bttree::{
    center, count_outgoing_paths, count_outgoing_paths_exact, enumerate_outgoing_paths, triple_invariant, TreeVertex,
};
use crate::drinfeld::{hecke_image, AField, DrinfeldModule};
use crate::error::{Error, Result};
use crate::heckemod::{compute_modular_polynomial, ModularPolynomial, SampleOptions};
use crate::quad::{cebotarev_count, cebotarev_window, enumerate_reduced_forms, ImagQuadField, QuadOrder};

use super::cache::{CacheStore, ClassnumRecord, Kind, PrimesRecord};
use super::config::Config;
use super::verify::{run_all, Ctx, SUITE};
use super::{Cli, Command, DiscArgs, Format};

/// An error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub err: Error,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure { code: 1, err }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 1, err: e.into() }
    }
}

trait Usage<T> {
    /// Marks a failure as caused by the arguments.
    fn usage(self) -> std::result::Result<T, Failure>;
}

impl<T> Usage<T> for Result<T> {
    fn usage(self) -> std::result::Result<T, Failure> {
        self.map_err(|err| Failure { code: 2, err })
    }
}

type Out<T> = std::result::Result<T, Failure>;

/// Everything a command needs besides its own arguments.
struct Env<'a> {
    cli: &'a Cli,
    config: Config,
    cache: Option<CacheStore>,
}

impl Env<'_> {
    fn q(&self) -> u32 {
        self.cli.q.unwrap_or(self.config.q)
    }

    fn fq(&self) -> Out<Fq> {
        Fq::from_q(self.q() as u64).usage()
    }

    fn poly(&self, s: &str) -> Out<APoly> {
        APoly::parse(&self.fq()?, s).usage()
    }

    fn prime(&self, s: &str) -> Out<APoly> {
        let p = self.poly(s)?;
        if !p.is_monic() || !p.is_irreducible() {
            return Err(Failure { code: 2, err: Error::NotIrreducible(p.to_string()) });
        }
        Ok(p)
    }

    fn characteristic(&self, flag: &Option<String>) -> Out<APoly> {
        let s = flag.as_ref().or(self.config.characteristic.as_ref()).ok_or(Failure {
            code: 2,
            err: Error::Invalid("no characteristic: pass --char or set `char` in the config".into()),
        })?;
        self.prime(s)
    }

    fn records(&self) -> bool {
        self.cli.format == Format::Records
    }

    fn progress(&self, msg: &str) {
        if self.cli.verbose > 0 || self.config.verbosity > 0 {
            eprintln!("{msg}");
        }
    }

    fn warn(&self, ws: &[String]) {
        for w in ws {
            eprintln!("warning: {w}");
        }
    }

    fn pack(&self, flag: &Option<std::path::PathBuf>, m: u32) -> Out<ConstantPack> {
        let base = ConstantPack::default_for(self.q(), m);
        match flag.as_ref().or(self.config.pack.as_ref()) {
            None => Ok(base),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Failure {
                    code: 2,
                    err: Error::Io(format!("{}: {e}", p.display())),
                })?;
                base.parse_overrides(&text).usage()
            }
        }
    }

    fn opts(&self, seed: u64) -> SampleOptions {
        SampleOptions { extension: self.config.sample_extension, cap: self.config.split_cap, seed }
    }
}

pub fn execute(cli: &Cli, out: &mut (dyn Write + Send)) -> Out<i32> {
    let mut config = match &cli.config {
        Some(p) => Config::load(p).usage()?,
        None => Config::default(),
    };
    if let Some(w) = cli.workers {
        config.workers = Some(w);
    }
    if let Some(d) = &cli.cache_dir {
        config.cache_dir = Some(d.clone());
    }
    if let Some(q) = cli.q {
        config.q = q;
    }
    config.validate().usage()?;
    let cache = match (&config.cache_dir, cli.no_cache) {
        (Some(d), false) => Some(CacheStore::open(d)?),
        _ => None,
    };
    let env = Env { cli, config, cache };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = env.config.workers {
        pool = pool.num_threads(w);
    }
    let pool = pool.build().map_err(|e| Error::Invalid(e.to_string()))?;
    pool.install(|| dispatch(&env, out))
}

fn dispatch(env: &Env, out: &mut (dyn Write + Send)) -> Out<i32> {
    match &env.cli.command {
        Command::Classnum(a) => classnum(env, a, out),
        Command::Forms(a) => forms(env, a, out),
        Command::Hecke { characteristic, ext, j, m } => hecke(env, characteristic, *ext, j, m, out),
        Command::Modpoly { characteristic, m, seed } => modpoly(env, characteristic, m, *seed, out),
        Command::Tree { p, paths, vertices } => tree(env, p, *paths, vertices, out),
        Command::Cebotarev { d, t } => cebotarev(env, d, *t, out),
        Command::Bound { n, d, m, g, pack } => bound(env, *n, *d, *m, *g, pack, out),
        Command::Schedule { deg_x, depth, fk, data, pack } => schedule(env, *deg_x, *depth, *fk, data, pack, out),
        Command::Verify { quick } => verify(env, *quick, out),
    }
}

fn order(env: &Env, a: &DiscArgs) -> Out<QuadOrder> {
    let d = env.poly(&a.d)?;
    let disc = match &a.f {
        Some(f) => d.mul(&env.poly(f)?.pow(2)),
        None => d,
    };
    QuadOrder::from_discriminant(&disc).usage()
}

fn classnum(env: &Env, a: &DiscArgs, out: &mut (dyn Write + Send)) -> Out<i32> {
    let o = order(env, a)?;
    let (d, f) = (o.field().d().to_string(), o.conductor().to_string());
    let q = env.q();
    let mut h = None;
    if let Some(c) = &env.cache {
        let (hit, ws) = c.classnum(q, &d, &f)?;
        env.warn(&ws);
        h = hit;
    }
    let h = match h {
        Some(h) => h,
        None => {
            let h = o.pic_order();
            if let Some(c) = &env.cache {
                let ws = c.merge(Kind::Classnum, &[ClassnumRecord { q, d: d.clone(), f: f.clone(), h }.to_line()])?;
                env.warn(&ws);
            }
            h
        }
    };
    if env.records() {
        writeln!(out, "{}", ClassnumRecord { q, d, f, h }.to_line())?;
    } else {
        writeln!(out, "h={h}")?;
    }
    Ok(0)
}

fn forms(env: &Env, a: &DiscArgs, out: &mut (dyn Write + Send)) -> Out<i32> {
    let o = order(env, a)?;
    let disc = o.discriminant();
    let fs = enumerate_reduced_forms(disc)?;
    for g in &fs {
        if env.records() {
            writeln!(out, "form|q={}|disc={disc}|a={}|b={}|c={}", env.q(), g.a, g.b, g.c)?;
        } else {
            writeln!(out, "{g}")?;
        }
    }
    if !env.records() {
        writeln!(out, "count={}", fs.len())?;
    }
    Ok(0)
}

fn hecke(env: &Env, ch: &Option<String>, ext: Option<usize>, j: &str, m: &str, out: &mut (dyn Write + Send)) -> Out<i32> {
    let p = env.characteristic(ch)?;
    let k = AField::new(&p, ext.unwrap_or(p.deg() as usize)).usage()?;
    let jv = k.parse_elem(j).usage()?;
    let m = env.poly(m)?;
    let phi = DrinfeldModule::from_j(&k, &jv);
    let h = hecke_image(&phi, &m, env.config.split_cap)?;
    let big = h.field();
    // values print in the base field when they all live there
    let (names, degree): (Vec<String>, usize) = match h.descend() {
        Ok(vs) => (vs.iter().map(|v| k.fmt_elem(v)).collect(), k.degree()),
        Err(_) => (h.values.iter().map(|v| big.fmt_elem(v)).collect(), big.degree()),
    };
    if env.records() {
        writeln!(
            out,
            "hecke|q={}|char={p}|ext={}|j={}|m={m}|field_degree={degree}|values={}",
            env.q(),
            k.degree(),
            k.fmt_elem(&jv),
            names.join(";")
        )?;
    } else {
        writeln!(out, "count={} field_degree={degree}", names.len())?;
        for n in names {
            writeln!(out, "{n}")?;
        }
    }
    Ok(0)
}

fn modular_polynomial(env: &Env, p: &APoly, m: &APoly, seed: u64) -> Out<ModularPolynomial> {
    let q = env.q();
    if let Some(c) = &env.cache {
        let (hit, ws) = c.modpoly(q, &p.to_string(), &m.to_string())?;
        env.warn(&ws);
        if let Some(phi) = hit {
            return Ok(phi);
        }
    }
    let res = AField::residue_field(p).usage()?;
    env.progress(&format!("interpolating Phi_{m} mod {p}"));
    let phi = compute_modular_polynomial(m, &res, &env.opts(seed))?;
    if let Some(c) = &env.cache {
        let ws = c.merge(Kind::Modpoly, &[phi.to_record()])?;
        env.warn(&ws);
    }
    Ok(phi)
}

fn modpoly(env: &Env, ch: &Option<String>, m: &str, seed: u64, out: &mut (dyn Write + Send)) -> Out<i32> {
    let p = env.characteristic(ch)?;
    let m = env.poly(m)?;
    let phi = modular_polynomial(env, &p, &m, seed)?;
    if env.records() {
        writeln!(out, "{}", phi.to_record())?;
        return Ok(0);
    }
    writeln!(
        out,
        "Phi_{m} mod {p}: bidegree ({},{}) symmetric={}",
        phi.phi.deg_x(),
        phi.phi.deg_y(),
        phi.phi.is_symmetric()
    )?;
    let grid = phi.residue_grid();
    let cells: Vec<Vec<String>> = grid.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
    let w = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1).max(4);
    let head: Vec<String> = (0..grid.len()).map(|j| format!("{:>w$}", format!("Y^{j}"))).collect();
    writeln!(out, "{:>5} {}", "", head.join(" "))?;
    for (i, row) in cells.iter().enumerate() {
        let r: Vec<String> = row.iter().map(|c| format!("{c:>w$}")).collect();
        writeln!(out, "{:>5} {}", format!("X^{i}"), r.join(" "))?;
    }
    Ok(0)
}

fn tree(env: &Env, p: &str, paths: u32, vertices: &[String], out: &mut (dyn Write + Send)) -> Out<i32> {
    let f = env.fq()?;
    let pr = env.prime(p)?;
    let norm = pr.norm() as u64;
    let root = TreeVertex::root(&pr);
    if !env.records() {
        writeln!(out, "{:>3} {:>12} {:>12} {:>12}", "n", "displayed", "exact", "enumerated")?;
    }
    for n in 0..=paths {
        let shown = count_outgoing_paths(norm, n, 2)?;
        let exact = count_outgoing_paths_exact(norm, n, 2)?;
        let brute = enumerate_outgoing_paths(&root, n, 2);
        if env.records() {
            writeln!(out, "paths|p={pr}|n={n}|displayed={shown}|exact={exact}|enumerated={brute}")?;
        } else {
            writeln!(out, "{n:>3} {shown:>12} {exact:>12} {brute:>12}")?;
        }
    }
    if vertices.len() > 3 {
        return Err(Failure { code: 2, err: Error::Invalid("at most three vertices".into()) });
    }
    let vs: Vec<TreeVertex> = vertices.iter().map(|s| TreeVertex::parse(&f, s)).collect::<Result<_>>().usage()?;
    if vs.iter().any(|v| v.prime() != &pr) {
        return Err(Failure { code: 2, err: Error::Invalid(format!("vertices must live in the tree at {pr}")) });
    }
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            writeln!(out, "d(v{}, v{}) = {}", a + 1, b + 1, vs[a].distance(&vs[b]))?;
        }
    }
    if let [a, b, c] = &vs[..] {
        let t = triple_invariant(a, b, c);
        writeln!(out, "center = {}", center(a, b, c))?;
        writeln!(out, "invariant = ({}, {}, {})", t.0, t.1, t.2)?;
    }
    Ok(0)
}

fn cebotarev(env: &Env, d: &str, tmax: usize, out: &mut (dyn Write + Send)) -> Out<i32> {
    let k = ImagQuadField::new(&env.poly(d)?).usage()?;
    if tmax == 0 {
        return Err(Failure { code: 2, err: Error::Invalid("t must be positive".into()) });
    }
    let q = env.q();
    let ds = k.d().to_string();
    let mut fresh = Vec::new();
    if !env.records() {
        writeln!(out, "{:>3} {:>8} {:>12} {:>12} within", "t", "count", "center", "radius")?;
    }
    for t in 1..=tmax {
        let mut hit = None;
        if let Some(c) = &env.cache {
            let (h, ws) = c.primes(q, &ds, t)?;
            env.warn(&ws);
            hit = h;
        }
        let c = match hit {
            Some(n) => cebotarev_window(&k, t, n),
            None => {
                env.progress(&format!("counting split primes of degree {t}"));
                let c = cebotarev_count(&k, t)?;
                fresh.push(PrimesRecord { q, d: ds.clone(), t, count: c.count }.to_line());
                c
            }
        };
        if env.records() {
            writeln!(
                out,
                "cebotarev|q={q}|D={ds}|t={t}|count={}|center={:.6}|radius={:.6}|within={}",
                c.count,
                c.center,
                c.radius,
                c.within()
            )?;
        } else {
            writeln!(out, "{t:>3} {:>8} {:>12.3} {:>12.3} {}", c.count, c.center, c.radius, c.within())?;
        }
    }
    if let Some(c) = &env.cache {
        let ws = c.merge(Kind::Primes, &fresh)?;
        env.warn(&ws);
    }
    Ok(0)
}

fn bound(env: &Env, n: u32, d: u32, m: u32, g: u32, pack: &Option<std::path::PathBuf>, out: &mut (dyn Write + Send)) -> Out<i32> {
    let query = CurveBoundQuery { q: env.q(), n, d, m, g };
    query.validate().usage()?;
    let pack = pack_or_usage(env, pack, m)?;
    let b = curve_bound(&query, &pack)?;
    let (w, t) = b.witness;
    if env.records() {
        writeln!(
            out,
            "bound|q={}|n={n}|d={d}|m={m}|g={g}|log_b={}|g1={}|e1={}|g2={}|e2={}|t={t}",
            query.q, b.log_b, w.g1, w.e1, w.g2, w.e2
        )?;
        return Ok(0);
    }
    writeln!(out, "log_q B = {}", b.log_b)?;
    match b.last_failure {
        Some(l) => writeln!(out, "last failing max(g_i + deg f_i) = {l}")?,
        None => writeln!(out, "no failing data below the horizon")?,
    }
    writeln!(out, "witness t = {t}")?;
    for l in &b.transcript {
        writeln!(out, "  {l}")?;
    }
    Ok(0)
}

fn pack_or_usage(env: &Env, pack: &Option<std::path::PathBuf>, m: u32) -> Out<ConstantPack> {
    let p = env.pack(pack, m)?;
    if env.cli.verbose > 1 {
        eprintln!("{p}");
    }
    Ok(p)
}

fn parse_data(s: &str) -> Result<Vec<CmDatum>> {
    s.split(',')
        .map(|part| {
            let (g, e) = part.trim().split_once(':').ok_or_else(|| Error::Parse(format!("expected g:e, got {part:?}")))?;
            let num = |v: &str| v.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad number {v:?}")));
            Ok(CmDatum { g: num(g)?, e: num(e)? })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn schedule(
    env: &Env,
    deg_x: u64,
    depth: usize,
    fk: u64,
    data: &str,
    pack: &Option<std::path::PathBuf>,
    out: &mut (dyn Write + Send),
) -> Out<i32> {
    let query = VarietyQuery { q: env.q(), deg_x, depth, fk, data: parse_data(data).usage()? };
    let pack = pack_or_usage(env, pack, fk as u32)?;
    let s = variety_schedule(&query, &pack)?;
    let ts: Vec<String> = s.ts.iter().map(|t| t.to_string()).collect();
    if env.records() {
        writeln!(out, "schedule|q={}|deg_x={deg_x}|depth={depth}|fk={fk}|data={data}|t={}", query.q, ts.join(","))?;
        return Ok(0);
    }
    writeln!(out, "t = {}", ts.join(", "))?;
    for l in &s.transcript {
        writeln!(out, "  {l}")?;
    }
    Ok(0)
}

fn verify(env: &Env, quick: bool, out: &mut (dyn Write + Send)) -> Out<i32> {
    let verbose = env.cli.verbose > 0 || env.config.verbosity > 0;
    let progress = move |m: &str| {
        if verbose || m.starts_with("warning") {
            eprintln!("{m}");
        }
    };
    let ctx = Ctx {
        cache: env.cache.as_ref(),
        quick,
        split_cap: env.config.split_cap,
        sample_extension: env.config.sample_extension,
        progress: &progress,
    };
    let checks = run_all(&ctx, &SUITE);
    for c in &checks {
        if env.records() {
            writeln!(out, "check|name={}|passed={}|detail={}", c.name, c.passed, c.detail.replace('|', "/"))?;
        } else {
            writeln!(out, "{}", c.line())?;
        }
        out.flush()?;
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    if !env.records() {
        writeln!(out, "{passed}/{} checks passed", checks.len())?;
    }
    Ok(if passed == checks.len() { 0 } else { 1 })
}
