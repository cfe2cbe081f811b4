//! Output formats shared by the CLI commands.
//!
//! Every command produces a [`Listing`]: a title, label columns and one exact
//! value per row. `exact` and `float` print tab-separated text, `csv` goes
//! through the `csv` crate and `json` nests coefficient tables as
//! coupling, then eta, then rows.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;
use su3_rwc_core::arith::SurdSum;
use su3_rwc_core::engine::RwcTable;
use su3_rwc_core::labels::Coupling;

pub const CONVENTION: &str = "triangular-positive";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Exact,
    Float,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Format::Exact),
            "float" => Ok(Format::Float),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format `{s}` (expected exact, float, json or csv)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Listing {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<(Vec<String>, SurdSum)>,
    /// Set for coefficient tables, whose JSON form is grouped by eta.
    pub table: Option<RwcTable>,
}

impl Listing {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Listing {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            table: None,
        }
    }

    pub fn push(&mut self, labels: Vec<String>, value: SurdSum) {
        self.rows.push((labels, value));
    }

    /// One row per `(eta, rho1, rho2, rho)` entry, eta running fastest.
    pub fn from_table(t: &RwcTable) -> Self {
        let mut l = Listing::new(describe(&t.coupling), &["eta", "rho1", "rho2", "rho"]);
        for (r, v) in &t.rows {
            for (eta, x) in t.coupling.etas().zip(v) {
                l.push(vec![eta.to_string(), r.rho1.to_string(), r.rho2.to_string(), r.rho.to_string()], x.clone());
            }
        }
        l.table = Some(t.clone());
        l
    }
}

/// Coupling header with the target in both notations.
pub fn describe(c: &Coupling) -> String {
    format!(
        "{} x {} -> {} = {}, multiplicity {}, eta {}..{}",
        c.left,
        c.right,
        c.target,
        c.target.su3(),
        c.multiplicity(),
        c.eta_min,
        c.eta_max
    )
}

#[derive(Serialize)]
struct JsonEntry<'a> {
    labels: BTreeMap<&'a str, &'a str>,
    exact: String,
    float: f64,
}

#[derive(Serialize)]
struct JsonListing<'a> {
    title: &'a str,
    convention: &'a str,
    rows: Vec<JsonEntry<'a>>,
}

#[derive(Serialize)]
struct JsonRow {
    rho1: [i64; 2],
    rho2: [i64; 2],
    rho: [i64; 2],
    exact: String,
    float: f64,
}

#[derive(Serialize)]
struct JsonTable {
    convention: &'static str,
    coupling: BTreeMap<String, BTreeMap<i64, Vec<JsonRow>>>,
}

fn table_json(t: &RwcTable) -> JsonTable {
    let mut by_eta: BTreeMap<i64, Vec<JsonRow>> = BTreeMap::new();
    for (r, v) in &t.rows {
        for (eta, x) in t.coupling.etas().zip(v) {
            by_eta.entry(eta).or_default().push(JsonRow {
                rho1: r.rho1.pair(),
                rho2: r.rho2.pair(),
                rho: r.rho.pair(),
                exact: x.to_string(),
                float: x.to_f64(),
            });
        }
    }
    JsonTable { convention: CONVENTION, coupling: BTreeMap::from([(t.coupling.to_string(), by_eta)]) }
}

pub fn render(l: &Listing, format: Format, digits: u32) -> Result<String, String> {
    match format {
        Format::Exact | Format::Float => {
            let mut out = format!("# {}\n# convention {CONVENTION}\n{}\tvalue\n", l.title, l.columns.join("\t"));
            for (labels, v) in &l.rows {
                let value = if format == Format::Exact { v.to_string() } else { v.to_decimal(digits) };
                out += &format!("{}\t{value}\n", labels.join("\t"));
            }
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = l.columns.clone();
            header.extend(["exact".to_owned(), "float".to_owned()]);
            w.write_record(&header).map_err(|e| e.to_string())?;
            for (labels, v) in &l.rows {
                let mut rec = labels.clone();
                rec.extend([v.to_string(), v.to_decimal(digits)]);
                w.write_record(&rec).map_err(|e| e.to_string())?;
            }
            String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
        }
        Format::Json => {
            let text = match &l.table {
                Some(t) => serde_json::to_string_pretty(&table_json(t)),
                None => serde_json::to_string_pretty(&JsonListing {
                    title: &l.title,
                    convention: CONVENTION,
                    rows: l
                        .rows
                        .iter()
                        .map(|(labels, v)| JsonEntry {
                            labels: l
                                .columns
                                .iter()
                                .map(String::as_str)
                                .zip(labels.iter().map(String::as_str))
                                .collect(),
                            exact: v.to_string(),
                            float: v.to_f64(),
                        })
                        .collect(),
                }),
            };
            text.map(|s| s + "\n").map_err(|e| e.to_string())
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionRow {
    pub target: [i64; 3],
    pub su3: [i64; 2],
    pub dim: u64,
    pub multiplicity: u64,
    pub eta_min: i64,
    pub eta_max: i64,
}

/// Targets of a product and the check `dim(lhs) dim(rhs) = sum of mult * dim`.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub lhs: [i64; 2],
    pub rhs: [i64; 2],
    pub product_dim: u64,
    pub targets: Vec<DecompositionRow>,
}

impl Decomposition {
    pub fn total_dim(&self) -> u64 {
        self.targets.iter().map(|t| t.dim * t.multiplicity).sum()
    }

    pub fn render(&self, format: Format) -> Result<String, String> {
        let pair = |p: [i64; 2]| format!("({},{})", p[0], p[1]);
        let part = |m: [i64; 3]| format!("[{},{},{}]", m[0], m[1], m[2]);
        match format {
            Format::Json => serde_json::to_string_pretty(self).map(|s| s + "\n").map_err(|e| e.to_string()),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["target", "su3", "dim", "multiplicity", "eta_min", "eta_max"])
                    .map_err(|e| e.to_string())?;
                for t in &self.targets {
                    let rec = [
                        part(t.target),
                        pair(t.su3),
                        t.dim.to_string(),
                        t.multiplicity.to_string(),
                        t.eta_min.to_string(),
                        t.eta_max.to_string(),
                    ];
                    w.write_record(&rec).map_err(|e| e.to_string())?;
                }
                String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
            }
            Format::Exact | Format::Float => {
                let mut out = format!(
                    "# {} x {}\ntarget\tsu3\tdim\tmultiplicity\teta_min\teta_max\n",
                    pair(self.lhs),
                    pair(self.rhs)
                );
                for t in &self.targets {
                    out += &format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\n",
                        part(t.target),
                        pair(t.su3),
                        t.dim,
                        t.multiplicity,
                        t.eta_min,
                        t.eta_max
                    );
                }
                let terms: Vec<String> =
                    self.targets
                        .iter()
                        .map(|t| {
                            if t.multiplicity == 1 {
                                t.dim.to_string()
                            } else {
                                format!("{}*{}", t.multiplicity, t.dim)
                            }
                        })
                        .collect();
                let ok = if self.total_dim() == self.product_dim { "ok" } else { "MISMATCH" };
                out += &format!(
                    "# dimension check: {} = {} = {} {ok}\n",
                    self.product_dim,
                    terms.join(" + "),
                    self.total_dim()
                );
                Ok(out)
            }
        }
    }
}

/// Reads `exact` output back into a listing without a table attached.
pub fn parse_exact(text: &str) -> Result<Listing, String> {
    let mut lines = text.lines();
    let title = lines.next().and_then(|l| l.strip_prefix("# ")).ok_or("missing title line")?.to_owned();
    if lines.next() != Some(&format!("# convention {CONVENTION}")) {
        return Err("missing convention line".into());
    }
    let mut columns: Vec<String> = lines.next().ok_or("missing header")?.split('\t').map(str::to_owned).collect();
    if columns.pop().as_deref() != Some("value") {
        return Err("header must end in `value`".into());
    }
    let mut l = Listing { title, columns, rows: Vec::new(), table: None };
    for line in lines {
        let mut cells: Vec<String> = line.split('\t').map(str::to_owned).collect();
        let value = cells.pop().ok_or("empty row")?;
        if cells.len() != l.columns.len() {
            return Err(format!("row `{line}` has {} labels", cells.len()));
        }
        l.push(cells, value.parse().map_err(|e| format!("{e}"))?);
    }
    Ok(l)
}
