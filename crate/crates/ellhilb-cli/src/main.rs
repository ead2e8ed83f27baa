use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ellhilb::algebra::TScalar;
use ellhilb::expr::parse_class_expr;
use ellhilb::hilbop::{
    bracket_table, i0_series, li_li_operator, pair_with, q_hilb, q_pt, quantum_divisor, wallcross_log, Divisor,
    OperatorSeries, Variant,
};
use ellhilb::mgn::{self, DRProfile, DrPath, Flavor};
use ellhilb::modforms::{eisenstein, jacobi_a_fourier, jacobi_a_taylor, qjac_fit, theta, FitOutcome, QJacMonomialBasis};
use ellhilb::report::Report;
use ellhilb::series::{PQSeries, ZSeries};
use ellhilb::surface::{builtin_surface, load_surface, SurfaceModel};
use ellhilb::verify;
use ellhilb::Error;

#[derive(Parser)]
#[command(name = "ellhilb", version, about = "Exact series for quantum divisor multiplication on Hilbert schemes of elliptic surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
}

#[derive(Args, Clone)]
struct Common {
    /// Built-in surface name (p1xe, exc) or path to a surface JSON file.
    #[arg(long, default_value = "p1xe")]
    surface: String,
    /// Number of points.
    #[arg(long, default_value_t = 2)]
    n: u32,
    #[arg(long, default_value_t = 4)]
    q_order: u32,
    /// Highest p-exponent kept exactly.
    #[arg(long, default_value_t = 8)]
    p_window: i64,
    #[arg(long)]
    z_order: Option<i64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Heisenberg,
    Lehn,
    Jacobi,
    Wallcross,
    BasicCheck,
    DrOracle,
    ExcConsistency,
    Averaging,
    TCross,
}

#[derive(Clone, Copy, ValueEnum)]
enum OperatorKind {
    /// Two-point operator of the Hilbert scheme.
    Hilb,
    /// Two-point operator of stable pairs.
    Pt,
    /// Quantum multiplication by δ.
    Delta,
    /// The q = 0 extremal operator.
    LiLi,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a special function: G_k, Theta, A_n, wallcross_factor or I0.
    ///
    /// A_n is printed in Fourier form, or in Taylor form when --z-order is
    /// given. wallcross_factor prints log((1-p) Π (1-pq^r)(1-p^{-1}q^r)/(1-q^r)^2).
    Expand {
        target: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite; exit status 0 iff every identity holds.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Largest n for the jacobi suite and largest genus for dr-oracle.
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Bracket table ⟨λ, μ⟩_{d,k} of an operator.
    Table {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        #[arg(long, value_enum, default_value = "hilb")]
        operator: OperatorKind,
        #[command(flatten)]
        common: Common,
    },
    /// Dump an operator matrix.
    Operator {
        #[arg(value_enum)]
        kind: OperatorKind,
        #[command(flatten)]
        common: Common,
    },
    /// Fit (δ ∗ λ, μ) in the dilated quasi-Jacobi ring.
    FitQjac {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        #[arg(long, default_value_t = 6)]
        weight_bound: u32,
        #[arg(long, default_value_t = 2)]
        dilation_bound: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Hodge integral over a double ramification cycle, by both derivations.
    DrOracle {
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        a: Vec<i64>,
        /// unit_point or alpha_beta:i,j (1-based markings).
        #[arg(long, default_value = "unit_point")]
        flavor: String,
        #[command(flatten)]
        common: Common,
    },
}

/// Failure modes of a command, mapped to exit statuses.
enum Failure {
    Usage(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl Common {
    fn validate(&self, needs_level: bool) -> Result<(), Failure> {
        if self.p_window < 1 {
            return Err(usage("--p-window must be positive"));
        }
        if matches!(self.z_order, Some(z) if z < 0) {
            return Err(usage("--z-order must be non-negative"));
        }
        if needs_level && self.n < 1 {
            return Err(usage("--n must be at least 1"));
        }
        Ok(())
    }

    fn surface(&self) -> Result<SurfaceModel, Failure> {
        if Path::new(&self.surface).is_file() {
            let text = fs::read_to_string(&self.surface).map_err(|e| usage(format!("--surface {}: {e}", self.surface)))?;
            let doc: Value = serde_json::from_str(&text).map_err(|e| usage(format!("--surface {}: {e}", self.surface)))?;
            Ok(load_surface(&doc)?)
        } else {
            builtin_surface(&self.surface).map_err(|e| usage(format!("--surface: {e}")))
        }
    }

    fn emit(&self, text: String) -> Result<(), Failure> {
        match &self.output {
            Some(path) => fs::write(path, text).map_err(|e| usage(format!("--output {}: {e}", path.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes()).map_err(|e| usage(e.to_string()))
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn exp_string(e2: i64) -> String {
    if e2 % 2 == 0 {
        (e2 / 2).to_string()
    } else {
        format!("{e2}/2")
    }
}

fn series_text(s: &PQSeries, format: Format) -> String {
    match format {
        Format::Text => format!("{s}\n"),
        Format::Json => pretty(&s.to_json()),
        Format::Tsv => {
            let mut out = String::from("q\tp\tcoeff\n");
            for (d, l) in s.coeffs() {
                for (e2, c) in l.terms() {
                    out.push_str(&format!("{d}\t{}\t{c}\n", exp_string(*e2)));
                }
            }
            out
        }
    }
}

fn zseries_text(z: &ZSeries, format: Format) -> String {
    match format {
        Format::Text => z.coeffs().iter().map(|(j, s)| format!("z^{j}: {s}\n")).collect(),
        Format::Json => {
            let terms: Vec<Value> = z.coeffs().iter().map(|(j, s)| json!({"z": j, "series": s.to_json()})).collect();
            pretty(&json!({"q_order": z.q_order(), "z_order": z.z_order(), "terms": terms}))
        }
        Format::Tsv => {
            let mut out = String::from("z\tq\tcoeff\n");
            for (j, s) in z.coeffs() {
                for (d, l) in s.coeffs() {
                    out.push_str(&format!("{j}\t{d}\t{}\n", l.coeff(0)));
                }
            }
            out
        }
    }
}

fn parse_index(target: &str, prefix: &str) -> Option<u32> {
    target.strip_prefix(prefix).and_then(|r| r.parse().ok())
}

fn cmd_expand(target: &str, c: &Common) -> CmdResult {
    c.validate(false)?;
    let text = if let Some(k) = parse_index(target, "G_") {
        series_text(&eisenstein(k, c.q_order)?, c.format)
    } else if let Some(n) = parse_index(target, "A_") {
        match c.z_order {
            Some(z) => zseries_text(&jacobi_a_taylor(n, c.q_order, z)?, c.format),
            None => series_text(&jacobi_a_fourier(n, c.q_order, c.p_window)?, c.format),
        }
    } else {
        match target {
            "Theta" => series_text(&theta(c.q_order), c.format),
            "wallcross_factor" => series_text(&wallcross_log(c.q_order, c.p_window)?, c.format),
            "I0" => series_text(&i0_series(c.surface()?.d_sigma(), c.q_order), c.format),
            other => return Err(usage(format!("unknown expansion target '{other}' (G_k, Theta, A_n, wallcross_factor, I0)"))),
        }
    };
    c.emit(text)
}

fn report_text(r: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let items: Vec<Value> =
                r.items.iter().map(|i| json!({"name": i.name, "passed": i.passed, "detail": i.detail})).collect();
            pretty(&json!({"passed": r.passed(), "items": items}))
        }
        Format::Tsv => r
            .items
            .iter()
            .map(|i| format!("{}\t{}\t{}\n", if i.passed { "PASS" } else { "FAIL" }, i.name, i.detail))
            .collect(),
        Format::Text => r.to_string(),
    }
}

fn cmd_verify(suite: Suite, n_max: u32, c: &Common) -> CmdResult {
    c.validate(true)?;
    let report = match suite {
        Suite::Heisenberg => verify::fock_suites(&c.surface()?, c.n, c.n as i64),
        Suite::Lehn => verify::lehn(&c.surface()?, c.n, c.p_window)?,
        Suite::Jacobi => verify::jacobi(n_max, c.q_order, c.z_order.unwrap_or(8), c.p_window)?,
        Suite::Wallcross => verify::wallcross(&c.surface()?, c.n, c.q_order, c.p_window)?,
        Suite::BasicCheck => verify::basic_check(c.q_order)?,
        Suite::DrOracle => verify::dr_oracle(n_max.min(3), 3, 3, c.q_order)?,
        Suite::ExcConsistency => verify::exc_consistency(c.n, c.q_order, c.p_window)?,
        Suite::Averaging => verify::averaging(4, 3, c.q_order, c.p_window)?,
        Suite::TCross => {
            let s = c.surface()?;
            let mut r = Report::new();
            for n in 1..=c.n {
                r.extend(ellhilb::hilbop::t_cross_check(&s, n, c.q_order, c.p_window)?);
            }
            r
        }
    };
    c.emit(report_text(&report, c.format))?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn build_operator(kind: OperatorKind, s: &SurfaceModel, c: &Common) -> Result<OperatorSeries, Failure> {
    let variant = if s.equivariant { Variant::Exc } else { Variant::Compact };
    Ok(match kind {
        OperatorKind::Hilb => q_hilb(s, c.n, c.q_order, variant, c.p_window)?,
        OperatorKind::Pt => q_pt(s, c.n, c.q_order, c.p_window)?,
        OperatorKind::Delta => quantum_divisor(s, &Divisor::Delta, c.n, c.q_order, c.p_window)?,
        OperatorKind::LiLi => li_li_operator(s, c.n, c.p_window)?,
    })
}

fn cmd_table(lambda: &str, mu: &str, kind: OperatorKind, c: &Common) -> CmdResult {
    c.validate(true)?;
    let s = c.surface()?;
    let l = parse_class_expr(&s, c.n, lambda).map_err(|e| usage(format!("--lambda: {e}")))?;
    let m = parse_class_expr(&s, c.n, mu).map_err(|e| usage(format!("--mu: {e}")))?;
    let op = build_operator(kind, &s, c)?;
    let table: BTreeMap<(u32, i64), TScalar> = bracket_table(&pair_with(&s, &op, &l, &m)?)?;
    let text = match c.format {
        Format::Json => {
            let rows: Vec<Value> = table.iter().map(|((d, k), v)| json!({"d": d, "k": k, "value": v.to_json()})).collect();
            pretty(&Value::Array(rows))
        }
        Format::Tsv | Format::Text => {
            let mut out = String::from("d\tk\tvalue\n");
            for ((d, k), v) in &table {
                out.push_str(&format!("{d}\t{k}\t{v}\n"));
            }
            out
        }
    };
    c.emit(text)
}

fn cmd_operator(kind: OperatorKind, c: &Common) -> CmdResult {
    c.validate(true)?;
    let s = c.surface()?;
    let op = build_operator(kind, &s, c)?;
    let text = match c.format {
        Format::Json => pretty(&op.to_json(&s)),
        Format::Tsv | Format::Text => {
            let mut out = String::from("row\tcol\tseries\n");
            for (col, entries) in op.columns.iter().enumerate() {
                for (row, series) in entries {
                    out.push_str(&format!(
                        "{}\t{}\t{series}\n",
                        op.basis.monomials[*row].display(&s),
                        op.basis.monomials[col].display(&s)
                    ));
                }
            }
            out
        }
    };
    c.emit(text)
}

fn cmd_fit(lambda: &str, mu: &str, weight_bound: u32, dilation_bound: i64, c: &Common) -> CmdResult {
    c.validate(true)?;
    if dilation_bound < 1 {
        return Err(usage("--dilation-bound must be at least 1"));
    }
    let s = c.surface()?;
    let l = parse_class_expr(&s, c.n, lambda).map_err(|e| usage(format!("--lambda: {e}")))?;
    let m = parse_class_expr(&s, c.n, mu).map_err(|e| usage(format!("--mu: {e}")))?;
    let op = quantum_divisor(&s, &Divisor::Delta, c.n, c.q_order, c.p_window)?;
    let target = pair_with(&s, &op, &l, &m)?;
    let basis = QJacMonomialBasis::new(weight_bound, dilation_bound);
    let outcome = qjac_fit(&target, &basis, c.p_window)?;
    let (value, text, ok) = match &outcome {
        FitOutcome::Fit { coeffs, checked } => {
            let terms: Vec<Value> = coeffs.iter().map(|(mono, r)| json!({"monomial": mono.to_string(), "coeff": r.to_string()})).collect();
            let line = if coeffs.is_empty() {
                "0".to_string()
            } else {
                coeffs.iter().map(|(mono, r)| format!("({r})*{mono}")).collect::<Vec<_>>().join(" + ")
            };
            (
                json!({"fit": true, "checked": checked, "terms": terms}),
                format!("fit ({checked} coefficients checked): {line}\n"),
                true,
            )
        }
        FitOutcome::NoSolution { equations, rank } => (
            json!({"fit": false, "equations": equations, "rank": rank}),
            format!("no fit on this window ({equations} equations, rank {rank})\n"),
            false,
        ),
    };
    c.emit(match c.format {
        Format::Json => pretty(&value),
        _ => text,
    })?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn parse_flavor(src: &str, n: usize) -> Result<Flavor, Failure> {
    if src == "unit_point" {
        return Ok(Flavor::UnitPoint);
    }
    let bad = || usage(format!("--flavor: expected unit_point or alpha_beta:i,j, got '{src}'"));
    let rest = src.strip_prefix("alpha_beta:").ok_or_else(bad)?;
    let (i, j) = rest.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    if i < 1 || j > n || i >= j {
        return Err(usage(format!("--flavor: need 1 <= i < j <= {n}")));
    }
    Ok(Flavor::AlphaBeta(i - 1, j - 1))
}

fn cmd_dr(g: u32, a: &[i64], flavor: &str, c: &Common) -> CmdResult {
    c.validate(false)?;
    let p = DRProfile::new(g, a.to_vec()).map_err(|e| usage(format!("--a: {e}")))?;
    let fl = parse_flavor(flavor, p.n())?;
    let closed = mgn::dr_hodge_closed(&p, fl)?;
    let closed_series = closed.as_series(c.q_order)?;
    let comb = mgn::dr_hodge_combinatorial_flavor(&p, fl, c.q_order)?;
    let diff = &closed_series - &comb;
    let mut paths = BTreeMap::new();
    for (name, path) in [
        ("verbatim", DrPath::Verbatim),
        ("simplified", DrPath::Simplified),
        ("odd_exponent", DrPath::OddExponent),
        ("subset_average", DrPath::SubsetAverage),
    ] {
        paths.insert(name, mgn::dr_scalar(&p, path)?.to_string());
    }
    let text = match c.format {
        Format::Json => pretty(&json!({
            "scalar": closed.scalar.to_string(),
            "derivative_order": closed.derivative_order,
            "eisenstein_weight": closed.eisenstein_weight,
            "closed": closed_series.to_json(),
            "combinatorial": comb.to_json(),
            "unit_point_paths": paths,
            "diff": diff.to_json(),
        })),
        _ => {
            let mut out = format!(
                "closed: ({}) * (q d/dq)^{} G_{}\nclosed series: {closed_series}\ncombinatorial series: {comb}\n",
                closed.scalar, closed.derivative_order, closed.eisenstein_weight
            );
            for (name, v) in &paths {
                out.push_str(&format!("unit_point scalar via {name}: {v}\n"));
            }
            out.push_str(&format!("diff: {diff}\n"));
            out
        }
    };
    c.emit(text)?;
    if diff.is_zero() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Expand { target, common } => cmd_expand(target, common),
        Command::Verify { suite, n_max, common } => cmd_verify(*suite, *n_max, common),
        Command::Table { lambda, mu, operator, common } => cmd_table(lambda, mu, *operator, common),
        Command::Operator { kind, common } => cmd_operator(*kind, common),
        Command::FitQjac { lambda, mu, weight_bound, dilation_bound, common } => {
            cmd_fit(lambda, mu, *weight_bound, *dilation_bound, common)
        }
        Command::DrOracle { g, a, flavor, common } => cmd_dr(*g, a, flavor, common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
