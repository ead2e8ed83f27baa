//! Named verification suites. Each returns a [`Report`] with one line per
//! identity; failures are recorded, never thrown.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::algebra::TScalar;
use crate::error::Result;
use crate::fock::{
    apply_basis, apply_word, divisor_class, fock_basis, gram_matrix, unit_class, FockMonomial, FockVector, LevelBasis,
};
use crate::hilbop::{self, bracket_table, lehn_divisor, li_li_operator, pair_with, q_hilb, quantum_divisor, Divisor, Variant};
use crate::mgn;
use crate::modforms::{jacobi_a_fourier, jacobi_a_fourier_in_z, jacobi_a_taylor};
use crate::report::Report;
use crate::series::Var;
use crate::surface::{basis_class, builtin_surface, SurfaceModel};

fn all_basis(s: &SurfaceModel, max_level: u32) -> Vec<FockMonomial> {
    (0..=max_level).flat_map(|n| fock_basis(s, n)).collect()
}

fn signed_ops(s: &SurfaceModel, kmax: i64) -> Vec<(i64, usize)> {
    let mut out = Vec::new();
    for k in (-kmax..=kmax).filter(|k| *k != 0) {
        for c in 0..s.dim() {
            out.push((k, c));
        }
    }
    out
}

/// `[q_k(α), q_l(β)] = k δ_{k+l,0} (α, β) Id` as a supercommutator on every
/// basis vector of level `<= max_level`, for `|k|, |l| <= kmax`.
pub fn heisenberg(s: &SurfaceModel, max_level: u32, kmax: i64) -> Report {
    let vectors = all_basis(s, max_level);
    let ops = signed_ops(s, kmax);
    let failures: Vec<String> = vectors
        .par_iter()
        .filter_map(|m| {
            let v = FockVector::from_monomial(m.clone());
            for &(k, a) in &ops {
                for &(l, b) in &ops {
                    let ab = apply_word(s, &[(k, a), (l, b)], &v);
                    let ba = apply_word(s, &[(l, b), (k, a)], &v);
                    let both_odd = s.is_odd(a) && s.is_odd(b);
                    let lhs = if both_odd { &ab + &ba } else { &ab - &ba };
                    let rhs = if k + l == 0 {
                        v.scale(&(s.pairing(a, b) * &TScalar::from_int(k)))
                    } else {
                        FockVector::zero()
                    };
                    if lhs != rhs {
                        return Some(format!(
                            "[q_{k}({}), q_{l}({})] on {}",
                            s.basis[a].name,
                            s.basis[b].name,
                            m.display(s)
                        ));
                    }
                }
            }
            None
        })
        .collect();
    let mut r = Report::new();
    r.push(
        format!("Heisenberg relations on {} (levels <= {max_level}, |k| <= {kmax})", s.name),
        failures.is_empty(),
        failures.first().cloned().unwrap_or_else(|| format!("{} vectors x {} operator pairs", vectors.len(), ops.len() * ops.len())),
    );
    r
}

/// `(q_k(α) v, w) = (-1)^k (v, q_{-k}(α) w)` for all basis `v`, `w` with
/// `level(w) = level(v) + k <= max_level`.
pub fn adjoint(s: &SurfaceModel, max_level: u32) -> Report {
    let bases: Vec<LevelBasis> = (0..=max_level).map(|n| LevelBasis::new(s, n)).collect();
    let grams: Vec<Vec<Vec<TScalar>>> = bases.iter().map(|b| gram_matrix(s, b)).collect();
    let pair_rows = |v: &FockVector, level: usize, w: usize| -> TScalar {
        let mut acc = TScalar::zero();
        for (m, c) in &v.terms {
            let i = bases[level].position(m);
            acc += &(c * &grams[level][i][w]);
        }
        acc
    };
    let mut checked = 0usize;
    let mut failure = None;
    'outer: for m in 0..max_level as usize {
        for k in 1..=(max_level as usize - m) {
            let sign = TScalar::from_int(if k % 2 == 1 { -1 } else { 1 });
            for c in 0..s.dim() {
                let up: Vec<FockVector> = bases[m]
                    .monomials
                    .iter()
                    .map(|x| apply_basis(s, k as i64, c, &FockVector::from_monomial(x.clone())))
                    .collect();
                let down: Vec<FockVector> = bases[m + k]
                    .monomials
                    .iter()
                    .map(|x| apply_basis(s, -(k as i64), c, &FockVector::from_monomial(x.clone())))
                    .collect();
                let bad = (0..bases[m].len()).into_par_iter().find_map_any(|vi| {
                    for wi in 0..bases[m + k].len() {
                        let lhs = pair_rows(&up[vi], m + k, wi);
                        // (v, q_{-k} w) = Σ_j G_m[v][j] (q_{-k} w)_j
                        let mut rhs = TScalar::zero();
                        for (mono, coeff) in &down[wi].terms {
                            rhs += &(&grams[m][vi][bases[m].position(mono)] * coeff);
                        }
                        if lhs != &rhs * &sign {
                            return Some((vi, wi));
                        }
                    }
                    None
                });
                checked += bases[m].len() * bases[m + k].len();
                if let Some((vi, wi)) = bad {
                    failure = Some(format!(
                        "q_{k}({}) between {} and {}",
                        s.basis[c].name,
                        bases[m].monomials[vi].display(s),
                        bases[m + k].monomials[wi].display(s)
                    ));
                    break 'outer;
                }
            }
        }
    }
    let mut r = Report::new();
    r.push(
        format!("adjoint relation with (-1)^k on {} (levels <= {max_level})", s.name),
        failure.is_none(),
        failure.unwrap_or_else(|| format!("{checked} pairings per class")),
    );
    r
}

/// `q_k(α)` shifts the complex degree by `k - 1 + deg α` on every basis
/// vector of level `<= max_level`. On equivariant models the parameter `t`
/// has complex degree 1, so each term's `t`-exponent is counted as well.
pub fn grading(s: &SurfaceModel, max_level: u32, kmax: i64) -> Report {
    let vectors = all_basis(s, max_level);
    let ops = signed_ops(s, kmax);
    let failure = vectors.par_iter().find_map_any(|m| {
        let v = FockVector::from_monomial(m.clone());
        let d0 = m.real_degree(s) as i64;
        for &(k, c) in &ops {
            let want = d0 + 2 * (k - 1) + s.basis[c].deg as i64;
            let image = apply_basis(s, k, c, &v);
            let off = image
                .terms
                .iter()
                .any(|(x, c)| c.terms().keys().any(|e| x.real_degree(s) as i64 + 2 * e != want));
            if off {
                return Some(format!("q_{k}({}) on {}", s.basis[c].name, m.display(s)));
            }
        }
        None
    });
    let mut r = Report::new();
    r.push(
        format!("degree shift k - 1 + deg α on {} (levels <= {max_level})", s.name),
        failure.is_none(),
        failure.unwrap_or_default(),
    );
    r
}

/// The three Fock-space suites on one model.
pub fn fock_suites(s: &SurfaceModel, max_level: u32, kmax: i64) -> Report {
    let mut r = heisenberg(s, max_level, kmax);
    r.extend(adjoint(s, max_level));
    r.extend(grading(s, max_level, kmax));
    r
}

/// Fourier against Taylor for `A_1..A_{n_max}` and the differential equation
/// `q d/dq A_n = p d/dp A_{n+1}` for `n <= n_max + 1`.
pub fn jacobi(n_max: u32, q_order: u32, z_order: i64, p_window: i64) -> Result<Report> {
    let mut r = Report::new();
    for n in 1..=n_max {
        let f = jacobi_a_fourier_in_z(n, q_order, z_order)?;
        let t = jacobi_a_taylor(n, q_order, z_order)?;
        let detail = if f == t {
            String::new()
        } else {
            let j = (-1..=z_order).find(|j| f.coeff(*j) != t.coeff(*j)).unwrap_or(0);
            format!("first mismatch at z^{j}")
        };
        r.push(format!("Fourier = Taylor for A_{n} (q <= {q_order}, z <= {z_order})"), f == t, detail);
    }
    for n in 1..=n_max + 1 {
        let lhs = jacobi_a_fourier(n, q_order, p_window)?.derive(Var::Q);
        let rhs = jacobi_a_fourier(n + 1, q_order, p_window)?.derive(Var::P);
        r.push(format!("q d/dq A_{n} = p d/dp A_{}", n + 1), lhs == rhs, hilbop::first_series_mismatch(&lhs, &rhs));
    }
    Ok(r)
}

/// Classical divisor operators on the unit and the `q = 0` limit of `E_δ`.
pub fn lehn(s: &SurfaceModel, n_max: u32, p_window: i64) -> Result<Report> {
    let mut r = Report::new();
    for n in 1..=n_max {
        let mut ok = true;
        for (i, b) in s.basis.iter().enumerate() {
            if b.deg != 2 || b.odd {
                continue;
            }
            let x = basis_class(i);
            if lehn_divisor(s, &x, n)?.apply(&unit_class(s, n)) != divisor_class(s, &x, n)? {
                ok = false;
            }
        }
        r.push(format!("e_α(1) = D(α) on {} (n={n})", s.name), ok, "");
    }
    if !s.equivariant {
        for n in 2..=n_max {
            let ed = quantum_divisor(s, &Divisor::Delta, n, 0, p_window)?;
            let ll = li_li_operator(s, n, p_window)?;
            let diff = ed.first_difference(&ll);
            r.push(
                format!("E_δ at q = 0 equals the extremal operator on {} (n={n}, p <= {p_window})", s.name),
                diff.is_none(),
                diff.map(|(a, b, _, e2)| format!("row {a}, col {b}, p^({e2}/2)")).unwrap_or_default(),
            );
        }
    }
    Ok(r)
}

pub fn wallcross(s: &SurfaceModel, n_max: u32, q_order: u32, p_window: i64) -> Result<Report> {
    let mut r = Report::new();
    for n in 1..=n_max {
        r.extend(hilbop::wallcross_check(s, n, q_order, p_window)?);
    }
    Ok(r)
}

/// Both displays of the basic check, plus the sign-flipped negative control
/// which is required to fail.
pub fn basic_check(q_order: u32) -> Result<Report> {
    let mut r = hilbop::basic_check(q_order)?;
    let window = 12.max(2 * q_order as i64);
    let flipped = hilbop::basic_check_with(q_order, window, true)?;
    let caught = flipped.items.get(1).map(|i| !i.passed).unwrap_or(false);
    r.push(
        "negative control: reversing e_δ on δ[W] breaks display 2",
        caught,
        flipped.items.get(1).map(|i| i.detail.clone()).unwrap_or_default(),
    );
    Ok(r)
}

pub fn dr_oracle(g_max: u32, n_max: usize, a_max: i64, q_order: u32) -> Result<Report> {
    let profiles = mgn::profiles(g_max, n_max, a_max);
    let results = mgn::oracle_sweep(&profiles, q_order)?;
    let bad: Vec<_> = results.iter().filter(|c| !c.mismatches.is_empty()).collect();
    let mut r = Report::new();
    let worked = mgn::DRProfile::new(1, vec![1, -1])?;
    let g2 = crate::modforms::eisenstein(2, q_order)?;
    let w = mgn::dr_hodge_combinatorial(&worked, q_order)? == g2
        && mgn::dr_hodge_closed(&worked, mgn::Flavor::UnitPoint)?.as_series(q_order)? == g2;
    r.push("g=1, a=(1,-1), unit_point gives G_2", w, "");
    r.push(
        format!("combinatorial = closed, both flavors (g <= {g_max}, n <= {n_max}, |a_i| <= {a_max})"),
        bad.is_empty(),
        bad.first()
            .map(|c| format!("g={}, a={:?}: {:?}", c.profile.g, c.profile.a, c.mismatches))
            .unwrap_or_else(|| format!("{} profiles", results.len())),
    );
    Ok(r)
}

pub fn averaging(r_max: u32, a_max: i64, q_order: u32, p_window: i64) -> Result<Report> {
    let mut r = Report::new();
    for rr in 2..=r_max {
        let mut tuples: Vec<Vec<i64>> = vec![Vec::new()];
        for _ in 0..rr {
            tuples = tuples
                .into_iter()
                .flat_map(|t| (-a_max..=a_max).map(move |x| [t.clone(), vec![x]].concat()))
                .collect();
        }
        tuples.retain(|t| t.iter().sum::<i64>() == 0);
        let bad = tuples
            .par_iter()
            .map(|a| mgn::averaging_check(rr, a, q_order, p_window).map(|ok| (!ok).then(|| a.clone())))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .next();
        r.push(
            format!("averaging lemma r={rr} (|a_i| <= {a_max}, q <= {q_order})"),
            bad.is_none(),
            bad.map(|a| format!("fails at a={a:?}")).unwrap_or_else(|| format!("{} tuples", tuples.len())),
        );
    }
    Ok(r)
}

/// Classes of `E × ℂ` and where they go on `ℙ¹ × E`.
const EXC_TO_P1XE: [(&str, &str); 4] = [("1", "1"), ("alpha", "a"), ("beta", "b"), ("pE", "sigma")];

/// Twice the `E × ℂ` bracket equals the `ℙ¹ × E` bracket for all monomial
/// pairs of total complex degree `2n - 1`.
pub fn exc_consistency(n_max: u32, q_order: u32, p_window: i64) -> Result<Report> {
    let e = builtin_surface("exc")?;
    let s = builtin_surface("p1xe")?;
    let map: Vec<usize> = EXC_TO_P1XE.iter().map(|(_, b)| s.index_of(b).expect("p1xe class")).collect();
    let embed = |m: &FockMonomial| -> FockVector {
        let word: Vec<(i64, usize)> = m.0.iter().map(|(k, c)| (*k as i64, map[*c])).collect();
        apply_word(&s, &word, &FockVector::vacuum())
    };
    let two = TScalar::from_int(2);
    let mut r = Report::new();
    for n in 1..=n_max {
        let qe = q_hilb(&e, n, q_order, Variant::Exc, p_window)?;
        let qs = q_hilb(&s, n, q_order, Variant::Compact, p_window)?;
        let basis = fock_basis(&e, n);
        let target = 2 * (2 * n - 1);
        let mut pairs = 0;
        let mut nonzero = 0;
        let mut failure = None;
        for x in &basis {
            for y in &basis {
                if x.real_degree(&e) + y.real_degree(&e) != target {
                    continue;
                }
                pairs += 1;
                let ex = FockVector::from_monomial(x.clone());
                let ey = FockVector::from_monomial(y.clone());
                let te = bracket_table(&pair_with(&e, &qe, &ex, &ey)?)?;
                let ts = bracket_table(&pair_with(&s, &qs, &embed(x), &embed(y))?)?;
                let doubled: BTreeMap<_, _> = te.iter().map(|(k, v)| (*k, v * &two)).collect();
                if !te.is_empty() {
                    nonzero += 1;
                }
                if doubled != ts && failure.is_none() {
                    let key = doubled
                        .keys()
                        .chain(ts.keys())
                        .find(|k| doubled.get(k) != ts.get(k))
                        .copied();
                    failure = Some(format!("{} | {} at {:?}", x.display(&e), y.display(&e), key));
                }
            }
        }
        r.push(
            format!("2 x bracket on E x C = bracket on P1 x E (n={n}, q <= {q_order})"),
            failure.is_none(),
            failure.unwrap_or_else(|| format!("{pairs} pairs, {nonzero} with nonzero brackets")),
        );
    }
    Ok(r)
}
