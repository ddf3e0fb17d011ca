//! The `drinfeld-ao` command line: argument parsing, configuration, caches
//! and the verification suite.

pub mod cache;
pub mod commands;
pub mod config;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use cache::{CacheStore, ClassnumRecord, Kind, PrimesRecord};
pub use config::{Config, CACHE_ENV};
pub use verify::{Check, Ctx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Records,
}

#[derive(Debug, Parser)]
#[command(name = "drinfeld-ao", version, about = "Drinfeld modules, Hecke correspondences and CM points over F_q[T]")]
pub struct Cli {
    /// Key-value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Cache directory.
    #[arg(long, global = true, env = CACHE_ENV)]
    pub cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Worker threads for parallel subtasks.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Size of the constant field.
    #[arg(long, global = true)]
    pub q: Option<u32>,
    /// Progress on stderr; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct DiscArgs {
    /// Squarefree part of the discriminant, or any discriminant.
    #[arg(long = "D")]
    pub d: String,
    /// Conductor; the discriminant is f^2 D.
    #[arg(long)]
    pub f: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// #Pic of an imaginary quadratic order.
    Classnum(DiscArgs),
    /// Reduced binary quadratic forms of a discriminant.
    Forms(DiscArgs),
    /// j-invariants of T_m(j) over an A-field of characteristic P.
    Hecke {
        #[arg(long = "char")]
        characteristic: Option<String>,
        /// Degree of the base field over F_q (default deg P).
        #[arg(long)]
        ext: Option<usize>,
        #[arg(long)]
        j: String,
        #[arg(long)]
        m: String,
    },
    /// The modular polynomial Phi_m reduced mod P.
    Modpoly {
        #[arg(long = "char")]
        characteristic: Option<String>,
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Path counts and vertex invariants in the Bruhat-Tits tree at p.
    Tree {
        #[arg(long)]
        p: String,
        /// Longest path length to tabulate.
        #[arg(long, default_value_t = 3)]
        paths: u32,
        /// Vertices `p=..;n=..;b=..@..`, up to three.
        #[arg(long = "vertex")]
        vertices: Vec<String>,
    },
    /// Split-prime counts of k(sqrt D) against their window.
    Cebotarev {
        #[arg(long = "D")]
        d: String,
        #[arg(long, default_value_t = 6)]
        t: usize,
    },
    /// Height threshold for CM pairs on a plane curve.
    Bound {
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 0)]
        g: u32,
        /// Constant overrides, `key=value` lines.
        #[arg(long)]
        pack: Option<PathBuf>,
    },
    /// The least schedule t_1 < ... < t_{d-1} for a variety.
    Schedule {
        #[arg(long)]
        deg_x: u64,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = 1)]
        fk: u64,
        /// CM data per coordinate as `g:e,g:e,...`.
        #[arg(long)]
        data: String,
        #[arg(long)]
        pack: Option<PathBuf>,
    },
    /// Run the verification suite.
    Verify {
        /// Smaller ranges.
        #[arg(long)]
        quick: bool,
    },
}

/// Parses `args`, runs the command with stdout going to `out`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(&cli, out) {
        Ok(code) => code,
        // reader went away (`| head`)
        Err(f) if matches!(&f.err, crate::error::Error::Io(m) if m.starts_with("Broken pipe")) => 0,
        Err(f) => {
            eprintln!("error[{}]: {}", f.err.kind(), f.err);
            f.code
        }
    }
}
