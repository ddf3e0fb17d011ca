//! Settings shared by all commands, from a `key = value` file.

use std::path::{Path, PathBuf};

use crate::arith::fq::prime_power;
use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "DRINFELD_AO_CACHE";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub q: u32,
    /// Characteristic prime P of the A-field for reduction work.
    pub characteristic: Option<String>,
    /// Largest degree of a torsion splitting field over the base.
    pub split_cap: usize,
    /// Degree over A/P of the field modular polynomial samples come from.
    pub sample_extension: usize,
    pub cache_dir: Option<PathBuf>,
    pub pack: Option<PathBuf>,
    pub verbosity: u8,
    pub workers: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            q: 3,
            characteristic: None,
            split_cap: 24,
            sample_extension: 2,
            cache_dir: None,
            pack: None,
            verbosity: 0,
            workers: None,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.q % 2 == 0 || prime_power(self.q as u64).is_none() {
            return Err(Error::Invalid(format!("q = {} is not an odd prime power", self.q)));
        }
        if self.split_cap == 0 || self.sample_extension == 0 || self.workers == Some(0) {
            return Err(Error::Invalid("caps and worker counts must be positive".into()));
        }
        Ok(())
    }

    /// Settings from `text` on top of the defaults. Relative paths are taken
    /// relative to `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Config> {
        let mut c = Config::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| Error::Parse(format!("config line {}: {what}", no + 1));
            let (k, v) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
            let (k, v) = (k.trim(), v.trim());
            let int = || v.parse::<usize>().map_err(|_| bad(&format!("bad integer {v:?}")));
            match k {
                "q" => c.q = int()? as u32,
                "char" => c.characteristic = Some(v.to_string()),
                "split_cap" => c.split_cap = int()?,
                "sample_extension" => c.sample_extension = int()?,
                "cache_dir" => c.cache_dir = Some(base.join(v)),
                "pack" => c.pack = Some(base.join(v)),
                "verbosity" => c.verbosity = int()?.min(3) as u8,
                "workers" => c.workers = Some(int()?),
                _ => return Err(bad(&format!("unknown key {k:?}"))),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Config::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reject() {
        let c = Config::parse("q = 5\nchar = T^2+2 # comment\nsplit_cap=12\ncache_dir = c\n", Path::new("/x")).unwrap();
        assert_eq!(c.q, 5);
        assert_eq!(c.characteristic.as_deref(), Some("T^2+2"));
        assert_eq!(c.split_cap, 12);
        assert_eq!(c.cache_dir, Some(PathBuf::from("/x/c")));
        assert_eq!(Config::parse("", Path::new(".")).unwrap(), Config::default());
        for bad in ["q = 4", "q = 6", "split_cap = 0", "colour = red", "q", "q = x"] {
            assert!(Config::parse(bad, Path::new(".")).is_err(), "{bad}");
        }
    }
}
