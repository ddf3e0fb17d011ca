//! Line-delimited record files, one per kind, each starting with a version header.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::heckemod::ModularPolynomial;

pub const HEADER: &str = "# drinfeld-ao cache v1";
const HEADER_PREFIX: &str = "# drinfeld-ao cache";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Classnum,
    Modpoly,
    Primes,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::Classnum, Kind::Modpoly, Kind::Primes];

    pub fn file_name(self) -> &'static str {
        match self {
            Kind::Classnum => "classnum.txt",
            Kind::Modpoly => "modpoly.txt",
            Kind::Primes => "primes.txt",
        }
    }

    /// A line is accepted only if it parses and prints back to itself.
    fn check(self, line: &str) -> bool {
        match self {
            Kind::Classnum => ClassnumRecord::parse(line).is_ok_and(|r| r.to_line() == line),
            Kind::Primes => PrimesRecord::parse(line).is_ok_and(|r| r.to_line() == line),
            Kind::Modpoly => ModularPolynomial::from_record(line).is_ok_and(|m| m.to_record() == line),
        }
    }
}

fn fields<'a>(line: &'a str, tag: &str) -> Result<Vec<(&'a str, &'a str)>> {
    let mut parts = line.split('|');
    if parts.next() != Some(tag) {
        return Err(Error::Parse(format!("not a {tag} record")));
    }
    parts
        .map(|p| p.split_once('=').ok_or_else(|| Error::Parse(format!("bad field {p:?}"))))
        .collect()
}

fn get<'a>(fs: &[(&'a str, &'a str)], key: &str) -> Result<&'a str> {
    fs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v).ok_or_else(|| Error::Parse(format!("missing {key}")))
}

fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Parse(format!("bad {what} {s:?}")))
}

/// #Pic of the order of conductor f in k(sqrt D).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClassnumRecord {
    pub q: u32,
    pub d: String,
    pub f: String,
    pub h: u128,
}

impl ClassnumRecord {
    pub fn to_line(&self) -> String {
        format!("classnum|q={}|D={}|f={}|h={}", self.q, self.d, self.f, self.h)
    }

    pub fn parse(line: &str) -> Result<Self> {
        let fs = fields(line, "classnum")?;
        Ok(ClassnumRecord {
            q: num(get(&fs, "q")?, "q")?,
            d: get(&fs, "D")?.to_string(),
            f: get(&fs, "f")?.to_string(),
            h: num(get(&fs, "h")?, "h")?,
        })
    }
}

/// Number of monic degree-t primes split in k(sqrt D).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimesRecord {
    pub q: u32,
    pub d: String,
    pub t: usize,
    pub count: u64,
}

impl PrimesRecord {
    pub fn to_line(&self) -> String {
        format!("primes|q={}|D={}|t={}|count={}", self.q, self.d, self.t, self.count)
    }

    pub fn parse(line: &str) -> Result<Self> {
        let fs = fields(line, "primes")?;
        Ok(PrimesRecord {
            q: num(get(&fs, "q")?, "q")?,
            d: get(&fs, "D")?.to_string(),
            t: num(get(&fs, "t")?, "t")?,
            count: num(get(&fs, "count")?, "count")?,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Loaded {
    pub records: Vec<String>,
    pub warnings: Vec<String>,
}

/// A cache directory. All writes go through one lock.
#[derive(Debug)]
pub struct CacheStore {
    dir: PathBuf,
    writer: Mutex<()>,
}

impl CacheStore {
    pub fn open(dir: impl AsRef<Path>) -> Result<CacheStore> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        Ok(CacheStore { dir, writer: Mutex::new(()) })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, kind: Kind) -> PathBuf {
        self.dir.join(kind.file_name())
    }

    /// Valid records in file order. A missing file is an empty store; a
    /// missing or foreign header is an error.
    pub fn load(&self, kind: Kind) -> Result<Loaded> {
        let path = self.path(kind);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Loaded::default()),
            Err(e) => return Err(e.into()),
        };
        if text.is_empty() {
            return Ok(Loaded::default());
        }
        let mut lines: Vec<&str> = text.split('\n').collect();
        let complete = text.ends_with('\n');
        if complete {
            lines.pop();
        }
        let header = lines.first().copied().unwrap_or("");
        if header != HEADER {
            let what = if header.starts_with(HEADER_PREFIX) { "version mismatch" } else { "missing header" };
            return Err(Error::Cache(format!("{}: {what}: found {header:?}, expected {HEADER:?}", path.display())));
        }
        let mut out = Loaded::default();
        let last = lines.len() - 1;
        for (no, line) in lines.iter().enumerate().skip(1) {
            if no == last && !complete {
                out.warnings.push(format!("{}:{}: truncated final line skipped", path.display(), no + 1));
            } else if line.is_empty() || line.starts_with('#') {
                continue;
            } else if kind.check(line) {
                out.records.push(line.to_string());
            } else {
                out.warnings.push(format!("{}:{}: corrupted record skipped", path.display(), no + 1));
            }
        }
        Ok(out)
    }

    /// Merges `new` into the file: deduplicated and sorted. Returns the load warnings.
    pub fn merge(&self, kind: Kind, new: &[String]) -> Result<Vec<String>> {
        for r in new {
            if r.contains('\n') || !kind.check(r) {
                return Err(Error::Cache(format!("refusing to write malformed record {r:?}")));
            }
        }
        let _guard = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        let loaded = self.load(kind)?;
        let all: BTreeSet<&String> = loaded.records.iter().chain(new).collect();
        let path = self.path(kind);
        let tmp = path.with_extension("tmp");
        {
            let mut w = std::io::BufWriter::new(fs::File::create(&tmp)?);
            writeln!(w, "{HEADER}")?;
            for r in all {
                writeln!(w, "{r}")?;
            }
            w.flush()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(loaded.warnings)
    }

    pub fn classnum(&self, q: u32, d: &str, f: &str) -> Result<(Option<u128>, Vec<String>)> {
        let l = self.load(Kind::Classnum)?;
        let h = l
            .records
            .iter()
            .filter_map(|r| ClassnumRecord::parse(r).ok())
            .find(|r| r.q == q && r.d == d && r.f == f)
            .map(|r| r.h);
        Ok((h, l.warnings))
    }

    pub fn modpoly(&self, q: u32, char_p: &str, m: &str) -> Result<(Option<ModularPolynomial>, Vec<String>)> {
        let l = self.load(Kind::Modpoly)?;
        let prefix = format!("modpoly|q={q}|char={char_p}|m={m}|");
        let phi = l.records.iter().find(|r| r.starts_with(&prefix)).map(|r| ModularPolynomial::from_record(r)).transpose()?;
        Ok((phi, l.warnings))
    }

    pub fn primes(&self, q: u32, d: &str, t: usize) -> Result<(Option<u64>, Vec<String>)> {
        let l = self.load(Kind::Primes)?;
        let c = l
            .records
            .iter()
            .filter_map(|r| PrimesRecord::parse(r).ok())
            .find(|r| r.q == q && r.d == d && r.t == t)
            .map(|r| r.count);
        Ok((c, l.warnings))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_classnum(rng: &mut ChaCha8Rng) -> String {
        let q = [3u32, 5, 7, 9][rng.gen_range(0..4)];
        let d: Vec<String> = (0..rng.gen_range(1..6)).map(|i| format!("{}*T^{i}", rng.gen_range(1..q))).collect();
        ClassnumRecord { q, d: d.join("+"), f: "1".into(), h: rng.gen_range(1..1u128 << 40) }.to_line()
    }

    #[test]
    fn empty_store_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let s = CacheStore::open(dir.path()).unwrap();
        for k in Kind::ALL {
            assert_eq!(s.load(k).unwrap(), Loaded::default());
            s.merge(k, &[]).unwrap();
            assert_eq!(s.load(k).unwrap(), Loaded::default());
            assert_eq!(fs::read_to_string(s.path(k)).unwrap(), format!("{HEADER}\n"));
        }
    }

    #[test]
    fn hundred_classnum_records() {
        let dir = tempfile::tempdir().unwrap();
        let s = CacheStore::open(dir.path()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(100);
        let recs: Vec<String> = (0..100).map(|_| random_classnum(&mut rng)).collect();
        s.merge(Kind::Classnum, &recs).unwrap();
        let bytes = fs::read(s.path(Kind::Classnum)).unwrap();
        let mut want = recs.clone();
        want.sort();
        want.dedup();
        assert_eq!(s.load(Kind::Classnum).unwrap().records, want);
        // rewriting the same records is byte-identical, in any order
        want.reverse();
        s.merge(Kind::Classnum, &want).unwrap();
        assert_eq!(fs::read(s.path(Kind::Classnum)).unwrap(), bytes);
    }

    #[test]
    fn damaged_files() {
        let dir = tempfile::tempdir().unwrap();
        let s = CacheStore::open(dir.path()).unwrap();
        let good = ClassnumRecord { q: 3, d: "T^3+2*T".into(), f: "1".into(), h: 4 }.to_line();
        let p = s.path(Kind::Classnum);
        fs::write(&p, format!("{HEADER}\n{good}\nclassnum|q=3|D=T\nclassnum|q=3|D=T|f=1|h=1")).unwrap();
        let l = s.load(Kind::Classnum).unwrap();
        assert_eq!(l.records, [good.clone()]);
        assert_eq!(l.warnings.len(), 2);
        assert!(l.warnings[0].contains("corrupted") && l.warnings[1].contains("truncated"));
        // merging rewrites a clean file
        s.merge(Kind::Classnum, &[]).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), format!("{HEADER}\n{good}\n"));
        assert_eq!(s.classnum(3, "T^3+2*T", "1").unwrap().0, Some(4));

        fs::write(&p, format!("# drinfeld-ao cache v0\n{good}\n")).unwrap();
        assert!(matches!(s.load(Kind::Classnum), Err(Error::Cache(m)) if m.contains("version mismatch")));
        fs::write(&p, format!("{good}\n")).unwrap();
        assert!(s.load(Kind::Classnum).is_err());
        assert!(s.merge(Kind::Primes, &["primes|q=3".into()]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn primes_records_round_trip(q in 2u32..50, t in 1usize..20, count in 0u64..1_000_000, d in "[T0-9^+*]{1,12}") {
            let r = PrimesRecord { q, d, t, count };
            prop_assert_eq!(PrimesRecord::parse(&r.to_line()).unwrap(), r);
        }
    }
}
