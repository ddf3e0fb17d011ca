use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_drinfeld-ao");

fn run(args: &[&str], cache: Option<&Path>) -> Output {
    let mut c = Command::new(BIN);
    c.args(args).env_remove("DRINFELD_AO_CACHE");
    if let Some(d) = cache {
        c.env("DRINFELD_AO_CACHE", d);
    }
    c.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classnum_example() {
    let o = run(&["classnum", "--q", "3", "--D", "T^3+2*T"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "h=4\n");
    let o = run(&["--format", "records", "classnum", "--q", "3", "--D", "T^3+2*T", "--f", "T+1"], None);
    // T+1 divides D, so the conductor factor is |T+1| - 0 = 3
    assert_eq!(stdout(&o), "classnum|q=3|D=T^3+2*T|f=T+1|h=12\n");
}

#[test]
fn modpoly_example() {
    let o = run(&["modpoly", "--q", "3", "--char", "T^2+1", "--m", "T"], None);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "Phi_T mod T^2+1: bidegree (4,4) symmetric=true");
    assert_eq!(lines.len(), 7);
    let grid: Vec<Vec<&str>> = lines[2..].iter().map(|l| l.split_whitespace().skip(1).collect()).collect();
    for i in 0..5 {
        for j in 0..5 {
            assert_eq!(grid[i][j], grid[j][i]);
        }
    }
    // the same polynomial as a record parses back
    let r = run(&["--format", "records", "modpoly", "--q", "3", "--char", "T^2+1", "--m", "T"], None);
    let phi = drinfeld_ao::heckemod::ModularPolynomial::from_record(stdout(&r).trim()).unwrap();
    assert!(phi.phi.is_symmetric());
}

#[test]
fn exit_codes() {
    for args in [
        &["bogus"][..],
        &["classnum", "--q", "4", "--D", "T"],
        &["classnum", "--q", "3", "--D", "T^2+1"],
        &["classnum", "--q", "3", "--D", "T^"],
        &["modpoly", "--q", "3", "--m", "T"],
        &["bound", "--q", "3"],
    ] {
        let o = run(args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
    let o = run(&["schedule", "--q", "3", "--deg-x", "2", "--depth", "3", "--data", "1:0,1:0,1:0"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[infeasible]"));
    assert_eq!(run(&["--help"], None).status.code(), Some(0));
}

#[test]
fn deterministic_output() {
    for args in [
        &["hecke", "--q", "3", "--char", "T^2+1", "--ext", "2", "--j", "x+1", "--m", "T"][..],
        &["cebotarev", "--q", "3", "--D", "T^3+2*T", "--t", "5"],
        &["bound", "--q", "3", "--d", "2"],
        &["tree", "--q", "3", "--p", "T^2+1", "--paths", "2"],
        &["forms", "--q", "5", "--D", "2*T^4+T^3+3"],
    ] {
        let a = run(args, None);
        let b = run(args, None);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn bound_regression_and_pack_file() {
    let o = run(&["bound", "--q", "3", "--d", "2"], None);
    assert!(stdout(&o).starts_with("log_q B = 130\n"));
    let dir = tempfile::tempdir().unwrap();
    let pack = dir.path().join("pack.txt");
    fs::write(&pack, "C1 = 8\n").unwrap();
    let o = run(&["bound", "--q", "3", "--d", "2", "--pack", pack.to_str().unwrap()], None);
    let b: u64 = stdout(&o).lines().next().unwrap().trim_start_matches("log_q B = ").parse().unwrap();
    assert!(b >= 130);
    fs::write(&pack, "eps = 2\n").unwrap();
    assert_eq!(run(&["bound", "--q", "3", "--d", "2", "--pack", pack.to_str().unwrap()], None).status.code(), Some(2));
}

#[test]
fn config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ao.conf");
    fs::write(&cfg, "q = 3\nchar = T^2+1\ncache_dir = cache\n").unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "modpoly", "--m", "T+1"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("cache/modpoly.txt")).unwrap();
    assert!(text.starts_with("# drinfeld-ao cache v1\nmodpoly|q=3|char=T^2+1|m=T+1|"));
    fs::write(&cfg, "q = 9\nsplit_cap = 0\n").unwrap();
    assert_eq!(run(&["--config", cfg.to_str().unwrap(), "classnum", "--D", "T"], None).status.code(), Some(2));
}

#[test]
fn cache_never_changes_answers() {
    let dir = tempfile::tempdir().unwrap();
    let plain = run(&["verify", "--quick", "--no-cache"], Some(dir.path()));
    assert_eq!(plain.status.code(), Some(0), "{}", stdout(&plain));
    assert!(!dir.path().join("classnum.txt").exists());
    let cold = run(&["verify", "--quick"], Some(dir.path()));
    let warm = run(&["verify", "--quick"], Some(dir.path()));
    assert_eq!(plain.stdout, cold.stdout);
    assert_eq!(plain.stdout, warm.stdout);
    for f in ["classnum.txt", "modpoly.txt", "primes.txt"] {
        assert!(fs::read_to_string(dir.path().join(f)).unwrap().lines().count() > 1, "{f}");
    }
    let c1 = run(&["classnum", "--q", "3", "--D", "2*T^4+T+1"], Some(dir.path()));
    let c2 = run(&["classnum", "--q", "3", "--D", "2*T^4+T+1", "--no-cache"], None);
    assert_eq!(c1.stdout, c2.stdout);
}

#[test]
fn damaged_cache() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("classnum.txt");
    fs::write(&p, "# drinfeld-ao cache v1\nclassnum|q=3|D=T^3+2*T|f=1|h=9x\nclassnum|q=3|D=T").unwrap();
    let o = run(&["classnum", "--q", "3", "--D", "T^3+2*T"], Some(dir.path()));
    assert_eq!(stdout(&o), "h=4\n");
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("corrupted") && err.contains("truncated"), "{err}");
    fs::write(&p, "# drinfeld-ao cache v7\n").unwrap();
    let o = run(&["classnum", "--q", "3", "--D", "T^3+2*T"], Some(dir.path()));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("version mismatch"));
}
