//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ellhilb::fock::{apply_word, FockVector};
use ellhilb::hilbop::{li_li_operator, pair_with, quantum_divisor, Divisor};
use ellhilb::modforms::{qjac_fit, FitOutcome, QJacMonomialBasis};
use ellhilb::report::Report;
use ellhilb::series::PQSeries;
use ellhilb::surface::{builtin_surface, load_surface, rational_base_model, SurfaceModel};
use ellhilb::verify;
use ellhilb::Result;

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_report(r: Report) -> Outcome {
    let passed = r.passed();
    let detail = match r.first_failure() {
        Some(f) => format!("{}: {}", f.name, f.detail),
        None => format!("{} checks", r.items.len()),
    };
    Outcome { passed, detail }
}

fn within(o: Outcome, elapsed: Duration, limit: Duration) -> Outcome {
    if elapsed > limit {
        Outcome { passed: false, detail: format!("{} (took {elapsed:?}, limit {limit:?})", o.detail) }
    } else {
        o
    }
}

fn p1xe() -> SurfaceModel {
    builtin_surface("p1xe").expect("built-in surface")
}

fn display_one() -> Result<Outcome> {
    let start = Instant::now();
    let r = ellhilb::hilbop::basic_check(6)?;
    let item = r.items[0].clone();
    let o = Outcome { passed: item.passed, detail: format!("{} {}", item.name, item.detail) };
    Ok(within(o, start.elapsed(), Duration::from_secs(5)))
}

fn display_two() -> Result<Outcome> {
    // basic_check(6) runs with p-window 12, so k = 1..=12 are all compared
    Ok(from_report(verify::basic_check(6)?))
}

fn li_li() -> Result<Outcome> {
    let s = p1xe();
    let mut r = Report::new();
    for n in [2, 3] {
        let ed = quantum_divisor(&s, &Divisor::Delta, n, 0, 12)?;
        let ll = li_li_operator(&s, n, 12)?;
        let diff = ed.first_difference(&ll);
        r.push(format!("n={n}"), diff.is_none(), format!("{diff:?}"));
    }
    Ok(from_report(r))
}

fn wallcross() -> Result<Outcome> {
    let mut r = verify::wallcross(&p1xe(), 3, 4, 8)?;
    let rational = rational_base_model(1, 8)?;
    let loaded = load_surface(&rational.to_json())?;
    r.extend(verify::wallcross(&loaded, 3, 4, 8)?);
    Ok(from_report(r))
}

fn jacobi() -> Result<Outcome> {
    let mut r = verify::jacobi(4, 6, 8, 8)?;
    // the differential equation is required for n = 1..5
    r.items.retain(|i| !i.name.starts_with("q d/dq A_6"));
    Ok(from_report(r))
}

fn dr_oracle() -> Result<Outcome> {
    let start = Instant::now();
    let o = from_report(verify::dr_oracle(3, 3, 3, 6)?);
    Ok(within(o, start.elapsed(), Duration::from_secs(10)))
}

fn averaging() -> Result<Outcome> {
    Ok(from_report(verify::averaging(4, 3, 5, 10)?))
}

fn fock() -> Result<Outcome> {
    let mut r = Report::new();
    for name in ["p1xe", "exc"] {
        r.extend(verify::fock_suites(&builtin_surface(name)?, 4, 4));
    }
    Ok(from_report(r))
}

fn exc() -> Result<Outcome> {
    Ok(from_report(verify::exc_consistency(2, 4, 8)?))
}

fn fit(target: &PQSeries) -> Result<Option<usize>> {
    let basis = QJacMonomialBasis::new(6, 2);
    Ok(match qjac_fit(target, &basis, 24)? {
        FitOutcome::Fit { checked, .. } => Some(checked),
        FitOutcome::NoSolution { .. } => None,
    })
}

fn quasi_jacobi() -> Result<Outcome> {
    let s = p1xe();
    let ed = quantum_divisor(&s, &Divisor::Delta, 2, 6, 24)?;
    let idx = |n: &str| s.index_of(n).expect("p1xe class");
    let v = FockVector::vacuum();
    let lambda = apply_word(&s, &[(2, idx("sigma"))], &v);
    let mu = apply_word(&s, &[(1, idx("1")), (1, idx("p"))], &v);
    let target = pair_with(&s, &ed, &lambda, &mu)?;
    // a second pair with nonzero quantum corrections
    let x = apply_word(&s, &[(1, idx("sigma")), (1, idx("sigma"))], &v);
    let y = apply_word(&s, &[(1, idx("a")), (1, idx("b"))], &v);
    let witness = pair_with(&s, &ed, &x, &y)?;
    let mut r = Report::new();
    let a = fit(&target)?;
    r.push("(δ * q2(σ), q1(1)q1(p))", a.is_some(), format!("target zero: {}", target.is_zero()));
    let b = fit(&witness)?;
    r.push("(δ * q1(σ)², q1(a)q1(b))", b.is_some() && !witness.is_zero(), format!("{b:?} coefficients checked"));
    Ok(from_report(r))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, fn() -> Result<Outcome>)> = vec![
        ("basic check, display 1", display_one),
        ("basic check, display 2", display_two),
        ("Li-Li specialization", li_li),
        ("wall-crossing", wallcross),
        ("A_n consistency", jacobi),
        ("DR oracle", dr_oracle),
        ("averaging lemma", averaging),
        ("Heisenberg/adjoint/grading", fock),
        ("E x C consistency", exc),
        ("quasi-Jacobi witness", quasi_jacobi),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(run)) {
            Ok(Ok(o)) => o,
            Ok(Err(e)) => Outcome { passed: false, detail: format!("error: {e}") },
            Err(_) => Outcome { passed: false, detail: "panicked".into() },
        };
        all &= outcome.passed;
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {:>2} ({name}): {} [{:.2?}]", i + 1, outcome.detail, start.elapsed());
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
