//! One file per coupling holding the special matrix and the full table as
//! exact surd strings, behind a format-version line and a SHA-256 checksum.
//!
//! ```text
//! su3-rwc-cache 1
//! sha256 <hex digest of everything below this line>
//! coupling 1 1 1 1 3 2 1
//! special
//! sqrt(7/10)<TAB>-sqrt(1/42)
//! 0<TAB>sqrt(10/21)
//! table
//! 2,1 2,0 3,2<TAB>sqrt(7/10)<TAB>0
//! ...
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use su3_rwc_core::arith::SurdSum;
use su3_rwc_core::engine::{rwc_table_with, special_rwc_with, RwcTable, SpecialRwcMatrix};
use su3_rwc_core::gpoly::RhoTriple;
use su3_rwc_core::kernels::Workspace;
use su3_rwc_core::labels::{Coupling, Partition3, Su3Irrep, U2Label};

pub const FORMAT_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "SU3_RWC_CACHE";
pub const DEFAULT_DIR: &str = ".rwc-cache";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("io error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: unsupported cache format `{found}` (expected version {FORMAT_VERSION})")]
    Version { path: PathBuf, found: String },
    #[error("{path}: checksum mismatch")]
    Checksum { path: PathBuf },
    #[error("{path}: {msg}")]
    Parse { path: PathBuf, msg: String },
    #[error(transparent)]
    Engine(#[from] su3_rwc_core::Error),
}

#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskCache { dir: dir.into() }
    }

    /// `$SU3_RWC_CACHE` if set, otherwise `.rwc-cache/` in the working directory.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_DIR)))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, c: &Coupling) -> PathBuf {
        let [m1, m2, m3] = c.target.m;
        self.dir.join(format!("{}_{}_{}_{}_{m1}_{m2}_{m3}.rwc", c.left.lambda, c.left.mu, c.right.lambda, c.right.mu))
    }

    pub fn load(&self, c: &Coupling) -> Result<Option<(SpecialRwcMatrix, RwcTable)>, CacheError> {
        let path = self.path_for(c);
        if !path.exists() {
            return Ok(None);
        }
        let (stored, special, table) = read_file(&path)?;
        if stored != *c {
            return Err(CacheError::Parse { path, msg: format!("holds {stored}, expected {c}") });
        }
        Ok(Some((special, table)))
    }

    pub fn store(&self, special: &SpecialRwcMatrix, table: &RwcTable) -> Result<(), CacheError> {
        let io = |source| CacheError::Io { path: self.dir.clone(), source };
        fs::create_dir_all(&self.dir).map_err(io)?;
        let path = self.path_for(&table.coupling);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, render(special, table)).map_err(|source| CacheError::Io { path: tmp.clone(), source })?;
        fs::rename(&tmp, &path).map_err(|source| CacheError::Io { path, source })
    }

    /// Cached pair, computing and storing it on a miss.
    pub fn get_or_compute(&self, ws: &mut Workspace, c: &Coupling) -> Result<(SpecialRwcMatrix, RwcTable), CacheError> {
        if let Some(hit) = self.load(c)? {
            return Ok(hit);
        }
        let special = special_rwc_with(ws, c)?;
        let table = rwc_table_with(ws, c)?;
        self.store(&special, &table)?;
        Ok((special, table))
    }

    /// Checks every cache file in the directory; returns the files checked
    /// and the failures.
    pub fn verify_all(&self) -> (usize, Vec<CacheError>) {
        let Ok(entries) = fs::read_dir(&self.dir) else { return (0, Vec::new()) };
        let mut n = 0;
        let mut bad = Vec::new();
        for entry in entries.flatten() {
            let path = entry.path();
            if path.extension().and_then(|e| e.to_str()) != Some("rwc") {
                continue;
            }
            n += 1;
            if let Err(e) = read_file(&path) {
                bad.push(e);
            }
        }
        (n, bad)
    }
}

fn digest(body: &str) -> String {
    Sha256::digest(body.as_bytes()).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn pair(l: &U2Label) -> String {
    format!("{},{}", l.q1, l.q2)
}

pub fn render(special: &SpecialRwcMatrix, table: &RwcTable) -> String {
    let c = &table.coupling;
    let mut body = format!(
        "coupling {} {} {} {} {} {} {}\nspecial\n",
        c.left.lambda, c.left.mu, c.right.lambda, c.right.mu, c.target.m[0], c.target.m[1], c.target.m[2]
    );
    for row in &special.entries {
        body += &row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\t");
        body.push('\n');
    }
    body += "table\n";
    for (r, v) in &table.rows {
        let _ = write!(body, "{} {} {}", pair(&r.rho1), pair(&r.rho2), pair(&r.rho));
        for x in v {
            let _ = write!(body, "\t{x}");
        }
        body.push('\n');
    }
    format!("su3-rwc-cache {FORMAT_VERSION}\nsha256 {}\n{body}", digest(&body))
}

fn read_file(path: &Path) -> Result<(Coupling, SpecialRwcMatrix, RwcTable), CacheError> {
    let text = fs::read_to_string(path).map_err(|source| CacheError::Io { path: path.to_owned(), source })?;
    parse(path, &text)
}

pub fn parse(path: &Path, text: &str) -> Result<(Coupling, SpecialRwcMatrix, RwcTable), CacheError> {
    let err = |msg: String| CacheError::Parse { path: path.to_owned(), msg };
    let (head, rest) = text.split_once('\n').ok_or_else(|| err("empty file".into()))?;
    if head.trim() != format!("su3-rwc-cache {FORMAT_VERSION}") {
        return Err(CacheError::Version { path: path.to_owned(), found: head.trim().to_owned() });
    }
    let (sum, body) = rest.split_once('\n').ok_or_else(|| err("missing checksum".into()))?;
    if sum.strip_prefix("sha256 ").map(str::trim) != Some(digest(body).as_str()) {
        return Err(CacheError::Checksum { path: path.to_owned() });
    }
    let mut lines = body.lines();
    let nums: Vec<i64> = lines
        .next()
        .and_then(|l| l.strip_prefix("coupling "))
        .ok_or_else(|| err("missing coupling line".into()))?
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| err(format!("bad integer `{t}`"))))
        .collect::<Result<_, _>>()?;
    let [l1, u1, l2, u2, m1, m2, m3] = nums[..] else {
        return Err(err("coupling line needs seven integers".into()));
    };
    let c = Coupling::new(Su3Irrep::new(l1, u1), Su3Irrep::new(l2, u2), Partition3::new(m1, m2, m3))?
        .ok_or_else(|| err("empty coupling".into()))?;
    if lines.next() != Some("special") {
        return Err(err("missing special section".into()));
    }
    let surd = |s: &str| s.parse::<SurdSum>().map_err(|e| err(e.to_string()));
    let mut entries = Vec::new();
    for _ in 0..c.multiplicity() {
        let line = lines.next().ok_or_else(|| err("short special section".into()))?;
        entries.push(line.split('\t').map(surd).collect::<Result<Vec<_>, _>>()?);
    }
    if lines.next() != Some("table") {
        return Err(err("missing table section".into()));
    }
    let mut rows = Vec::new();
    for line in lines {
        let mut cells = line.split('\t');
        let labels: Vec<U2Label> = cells
            .next()
            .unwrap_or_default()
            .split_whitespace()
            .map(|t| parse_pair(t).ok_or_else(|| err(format!("bad U(2) label `{t}`"))))
            .collect::<Result<_, _>>()?;
        let [r1, r2, r] = labels[..] else {
            return Err(err(format!("bad row `{line}`")));
        };
        let vals = cells.map(surd).collect::<Result<Vec<_>, _>>()?;
        if vals.len() != c.multiplicity() {
            return Err(err(format!("row `{line}` has {} values", vals.len())));
        }
        rows.push((RhoTriple::new(r1, r2, r), vals));
    }
    Ok((c, SpecialRwcMatrix { coupling: c, entries }, RwcTable { coupling: c, rows }))
}

pub fn parse_pair(s: &str) -> Option<U2Label> {
    let (a, b) = s.split_once(',')?;
    Some(U2Label::new(a.trim().parse().ok()?, b.trim().parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c321() -> Coupling {
        Coupling::new(Su3Irrep::new(1, 1), Su3Irrep::new(1, 1), Partition3::new(3, 2, 1)).unwrap().unwrap()
    }

    #[test]
    fn round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path());
        let mut ws = Workspace::new();
        let (s, t) = cache.get_or_compute(&mut ws, &c321()).unwrap();
        let (s2, t2) = cache.load(&c321()).unwrap().unwrap();
        assert_eq!((s, t), (s2, t2));
        assert_eq!(cache.verify_all().0, 1);
    }

    #[test]
    fn corruption_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path());
        cache.get_or_compute(&mut Workspace::new(), &c321()).unwrap();
        let path = cache.path_for(&c321());
        let text = fs::read_to_string(&path).unwrap().replace("sqrt(7/10)", "sqrt(7/11)");
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.load(&c321()), Err(CacheError::Checksum { .. })));
        let (n, bad) = cache.verify_all();
        assert_eq!((n, bad.len()), (1, 1));
    }

    #[test]
    fn old_versions_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path());
        cache.get_or_compute(&mut Workspace::new(), &c321()).unwrap();
        let path = cache.path_for(&c321());
        let text = fs::read_to_string(&path).unwrap().replacen("su3-rwc-cache 1", "su3-rwc-cache 0", 1);
        fs::write(&path, text).unwrap();
        assert!(matches!(cache.load(&c321()), Err(CacheError::Version { .. })));
    }
}
