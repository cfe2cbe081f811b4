use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use su3_rwc::cache::DiskCache;
use su3_rwc::format::{describe, render, Decomposition, DecompositionRow, Format, Listing};
use su3_rwc::oracle::oracle_projector_check;
use su3_rwc::reference::{bundled, classic_transform, compare, parse_reference, Convention, Fit, BUNDLED};
use su3_rwc::verify::{self, SuiteResult};
use su3_rwc_core::arith::{FactorialTable, SurdSum};
use su3_rwc_core::aux::{aux_rwc_closed_with, aux_rwc_recoupled_with, AuxCoupling};
use su3_rwc_core::engine::{racah_column_with, rho_triples, rwc_table_with, special_rwc_with};
use su3_rwc_core::gpoly::k_ranges;
use su3_rwc_core::kernels::Workspace;
use su3_rwc_core::labels::{decompose_product, dim_su3, Coupling, Partition3, Su3Irrep};

#[derive(Parser)]
#[command(name = "su3-rwc", version, about = "Exact SU(3) > U(2) reduced Wigner coefficients with outer multiplicity")]
struct Cli {
    /// Output format.
    #[arg(long, short, global = true, value_enum, default_value_t = OutFormat::Exact)]
    format: OutFormat,
    /// Significant digits for floating point output.
    #[arg(long, global = true, default_value_t = 12)]
    digits: u32,
    /// Cache directory; defaults to $SU3_RWC_CACHE, then `.rwc-cache`.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the disk cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Exact,
    Float,
    Json,
    Csv,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Exact => Format::Exact,
            OutFormat::Float => Format::Float,
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AuxForm {
    Closed,
    Recoupled,
}

#[derive(Subcommand)]
enum Command {
    /// Irreps in a product with their multiplicities.
    Decompose {
        /// First factor as `lambda,mu`.
        #[arg(long, value_parser = irrep)]
        lhs: Su3Irrep,
        /// Second factor as `lambda,mu`.
        #[arg(long, value_parser = irrep)]
        rhs: Su3Irrep,
    },
    /// Coefficient table of one coupling, or its special matrix.
    Rwc {
        #[command(flatten)]
        c: CouplingArgs,
        /// Print the triangular special matrix instead of the table.
        #[arg(long)]
        special: bool,
        /// Keep only this multiplicity copy.
        #[arg(long)]
        eta: Option<i64>,
    },
    /// Auxiliary coefficients built on a symmetric intermediate coupling.
    Aux {
        #[command(flatten)]
        c: CouplingArgs,
        /// Split of the second factor as `l,m`; defaults to the factor itself.
        #[arg(long, value_parser = irrep)]
        split: Option<Su3Irrep>,
        #[arg(long, value_enum, default_value_t = AuxForm::Closed)]
        form: AuxForm,
    },
    /// Recoupling coefficients between intermediate labels and copies.
    Racah {
        #[command(flatten)]
        c: CouplingArgs,
    },
    /// Exact verification suites for all labels up to `--max`.
    Verify {
        #[arg(long, default_value_t = 2)]
        max: i64,
    },
    /// Floating point check against generator matrices in a Gelfand-Tsetlin basis.
    OracleCheck {
        #[command(flatten)]
        c: CouplingArgs,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Compare reference files (all bundled tables by default) with the engine.
    CompareReference {
        /// Reference files in the bundled format.
        paths: Vec<PathBuf>,
        /// A bundled table by name.
        #[arg(long, conflicts_with = "paths")]
        table: Option<String>,
    },
}

#[derive(Args)]
struct CouplingArgs {
    /// First factor as `lambda,mu`.
    #[arg(long, value_parser = irrep)]
    lhs: Su3Irrep,
    /// Second factor as `lambda,mu`.
    #[arg(long, value_parser = irrep)]
    rhs: Su3Irrep,
    /// Target as a partition `m1,m2,m3`.
    #[arg(long, value_parser = partition)]
    target: Partition3,
}

impl CouplingArgs {
    fn coupling(&self) -> Result<Coupling, DomainError> {
        coupling(self.lhs, self.rhs, self.target)
    }
}

fn ints(s: &str, n: usize) -> Result<Vec<i64>, String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| format!("`{t}` is not an integer")))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!("expected {n} comma-separated integers, got `{s}`"));
    }
    if v.iter().any(|&x| x < 0) {
        return Err(format!("labels must be nonnegative: `{s}`"));
    }
    Ok(v)
}

fn irrep(s: &str) -> Result<Su3Irrep, String> {
    let v = ints(s, 2)?;
    Ok(Su3Irrep::new(v[0], v[1]))
}

fn partition(s: &str) -> Result<Partition3, String> {
    let v = ints(s, 3)?;
    let p = Partition3::new(v[0], v[1], v[2]);
    if !p.is_valid() {
        return Err(format!("`{s}` is not a partition"));
    }
    Ok(p)
}

/// Failure on valid input: label outside the domain or an internal error.
struct DomainError(String);

impl<E: std::fmt::Display> From<E> for DomainError {
    fn from(e: E) -> Self {
        DomainError(e.to_string())
    }
}

type Out = Result<String, DomainError>;

fn coupling(lhs: Su3Irrep, rhs: Su3Irrep, target: Partition3) -> Result<Coupling, DomainError> {
    Coupling::new(lhs, rhs, target)?.ok_or_else(|| DomainError(format!("{target} does not occur in {lhs} x {rhs}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cache = match (&cli.no_cache, &cli.cache_dir) {
        (true, _) => None,
        (false, Some(d)) => Some(DiskCache::new(d)),
        (false, None) => Some(DiskCache::from_env()),
    };
    match run(&cli, cache.as_ref()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(DomainError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli, cache: Option<&DiskCache>) -> Out {
    let fmt = Format::from(cli.format);
    let show = |l: &Listing| render(l, fmt, cli.digits).map_err(DomainError);
    match &cli.command {
        Command::Decompose { lhs, rhs } => {
            let mut targets = Vec::new();
            for (t, mult) in decompose_product(*lhs, *rhs) {
                let c = coupling(*lhs, *rhs, t)?;
                let su3 = t.su3();
                targets.push(DecompositionRow {
                    target: t.m,
                    su3: [su3.lambda, su3.mu],
                    dim: dim_su3(su3),
                    multiplicity: mult,
                    eta_min: c.eta_min,
                    eta_max: c.eta_max,
                });
            }
            let d = Decomposition {
                lhs: [lhs.lambda, lhs.mu],
                rhs: [rhs.lambda, rhs.mu],
                product_dim: dim_su3(*lhs) * dim_su3(*rhs),
                targets,
            };
            d.render(fmt).map_err(DomainError)
        }
        Command::Rwc { c, special, eta } => {
            let c = c.coupling()?;
            if let Some(e) = eta {
                if !c.etas().any(|x| x == *e) {
                    return Err(DomainError(format!("eta = {e} outside [{}, {}] for {c}", c.eta_min, c.eta_max)));
                }
            }
            let mut ws = Workspace::new();
            let (m, t) = match cache {
                Some(d) => d.get_or_compute(&mut ws, &c)?,
                None => (special_rwc_with(&mut ws, &c)?, rwc_table_with(&mut ws, &c)?),
            };
            if *special {
                let mut l = Listing::new(format!("{} special matrix", describe(&c)), &["eta", "eta'"]);
                for (j, row) in m.entries.iter().enumerate() {
                    for (k, x) in row.iter().enumerate() {
                        let (ej, ek) = (c.eta_min + j as i64, c.eta_min + k as i64);
                        if eta.is_none_or(|e| e == ej) {
                            l.push(vec![ej.to_string(), ek.to_string()], x.clone());
                        }
                    }
                }
                return show(&l);
            }
            let mut l = Listing::from_table(&t);
            if let Some(e) = eta {
                let e = e.to_string();
                l.rows.retain(|(labels, _)| labels[0] == e);
                l.table = None;
            }
            show(&l)
        }
        Command::Aux { c, split, form } => {
            let sp = split.map_or((c.rhs.lambda, c.rhs.mu), |s| (s.lambda, s.mu));
            let ac = AuxCoupling::with_split(c.lhs, c.rhs, sp, c.target)?;
            let c = c.coupling()?;
            let ft = FactorialTable::default();
            let name = match form {
                AuxForm::Closed => "closed",
                AuxForm::Recoupled => "recoupled",
            };
            let mut l = Listing::new(
                format!("{} auxiliary, split ({},{}), {name} form", describe(&c), sp.0, sp.1),
                &["u", "rho1", "rho2", "rho"],
            );
            for u in ac.labels() {
                for q in rho_triples(&c) {
                    let v = match form {
                        AuxForm::Closed => aux_rwc_closed_with(&ft, &ac, &u, &q)?,
                        AuxForm::Recoupled => aux_rwc_recoupled_with(&ft, &ac, &u, &q)?,
                    };
                    l.push(vec![u.u.to_string(), q.rho1.to_string(), q.rho2.to_string(), q.rho.to_string()], v);
                }
            }
            show(&l)
        }
        Command::Racah { c } => {
            let c = c.coupling()?;
            let mut ws = Workspace::new();
            let mut l = Listing::new(format!("{} recoupling", describe(&c)), &["intermediate", "eta"]);
            for bar in k_ranges(&c) {
                let col = racah_column_with(&mut ws, &c, bar)?;
                for (eta, v) in c.etas().zip(col) {
                    l.push(vec![bar.partition(&c).to_string(), eta.to_string()], v);
                }
            }
            show(&l)
        }
        Command::Verify { max } => {
            if *max < 0 {
                return Err(DomainError("--max must be nonnegative".into()));
            }
            let (s, results) = verify::run_all(*max, cache).map_err(DomainError)?;
            let mut out = format!("sweep: {} couplings with labels <= {max} in {:.2?}\n", s.entries.len(), s.elapsed);
            for r in &results {
                out += &r.line();
                out.push('\n');
            }
            if results.iter().all(SuiteResult::passed) {
                Ok(out)
            } else {
                print!("{out}");
                Err(DomainError("verification failed".into()))
            }
        }
        Command::OracleCheck { c, tol } => {
            let c = c.coupling()?;
            let t = rwc_table_with(&mut Workspace::new(), &c)?;
            let r = oracle_projector_check(&t, *tol).map_err(DomainError)?;
            let out = format!(
                "{c}: multiplicity {} membership {:.2e} orthonormality {:.2e} projector {:.2e} tol {:.0e} {}\n",
                r.multiplicity,
                r.membership,
                r.orthonormality,
                r.projector,
                r.tol,
                if r.passed() { "PASS" } else { "FAIL" }
            );
            if r.passed() {
                Ok(out)
            } else {
                print!("{out}");
                Err(DomainError("oracle residual above tolerance".into()))
            }
        }
        Command::CompareReference { paths, table } => compare_reference(paths, table.as_deref()),
    }
}

fn compare_reference(paths: &[PathBuf], only: Option<&str>) -> Out {
    let mut refs = Vec::new();
    for p in paths {
        let text = std::fs::read_to_string(p).map_err(|e| DomainError(format!("{}: {e}", p.display())))?;
        refs.push(parse_reference(&p.display().to_string(), &text).map_err(DomainError)?);
    }
    if paths.is_empty() {
        for (name, _) in BUNDLED.iter().filter(|(n, _)| only.is_none_or(|o| o == *n)) {
            refs.push(bundled(name).map_err(DomainError)?);
        }
        if refs.is_empty() {
            let names: Vec<&str> = BUNDLED.iter().map(|(k, _)| *k).collect();
            return Err(DomainError(format!(
                "unknown table `{}`; bundled: {}",
                only.unwrap_or_default(),
                names.join(", ")
            )));
        }
    }
    let mut ws = Workspace::new();
    let mut out = String::new();
    let mut failed = Vec::new();
    for r in &refs {
        let rep = compare(r, &mut ws).map_err(DomainError)?;
        let conv = match r.convention {
            Convention::TriangularPositive => "triangular-positive",
            Convention::Classic => "classic",
        };
        let status = if r.verbatim { "verbatim" } else { "corrected" };
        out += &format!(
            "{} ({conv}, {status}): {} entries, {} differ from the engine, {}\n",
            r.name,
            rep.entries(),
            rep.mismatches(),
            if rep.agrees() { "agrees" } else { "disagrees" }
        );
        for t in &rep.targets {
            let fit = match &t.fit {
                Fit::Exact => "identity transform, residual 0".to_owned(),
                Fit::Orthogonal(o) => format!("orthogonal transform {}, residual 0", matrix(o)),
                Fit::None { residual } => format!("no orthogonal fit, residual {residual:.3e}"),
            };
            out += &format!("  {}: {} entries, {} differ, {fit}\n", t.target, t.entries, t.mismatches.len());
            for (rho, copy, printed, engine) in &t.mismatches {
                out += &format!("    copy {copy} {rho}: file {printed}, engine {engine}\n");
            }
        }
        if !rep.agrees() && (!r.verbatim || !paths.is_empty()) {
            failed.push(r.name.clone());
        }
    }
    if paths.is_empty() && only.is_none() {
        let o = classic_transform(&mut ws).map_err(DomainError)?;
        out += &format!("classic to triangular-positive transform, shared by both tables: {}\n", matrix(&o));
    }
    if failed.is_empty() {
        Ok(out)
    } else {
        print!("{out}");
        Err(DomainError(format!("disagreement in {}", failed.join(", "))))
    }
}

fn matrix(o: &[Vec<SurdSum>]) -> String {
    let rows: Vec<String> =
        o.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")).collect();
    format!("[{}]", rows.join("; "))
}
