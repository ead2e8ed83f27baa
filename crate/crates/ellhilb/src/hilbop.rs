//! Operators on the Fock space built from the Nakajima basis: classical cup
//! products with divisors, the two-point operators of the Hilbert scheme and
//! of stable pairs, quantum divisor multiplication and the checks tying them
//! together.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num::One;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{int, rat, Rational, TScalar};
use crate::error::{Error, Result};
use crate::fock::{
    apply_word, divisor_class, fock_pairing, normal_order, unit_class, FockMonomial, FockVector, LevelBasis,
};
use crate::modforms::jacobi_a_at;
use crate::report::Report;
use crate::series::{LaurentP, PQSeries, Var};
use crate::surface::{basis_class, class_scale, Class, DeltaPart, SurfaceModel, TensorClass};

/// Sparse matrix column: row index to entry.
pub type Column<T> = BTreeMap<usize, T>;

/// A word `q_{k_1}(c_1)…q_{k_r}(c_r)` with a scalar in front.
type Word = (TScalar, Vec<(i64, usize)>);

/// Level-preserving operator with scalar entries.
#[derive(Clone, Debug)]
pub struct ClassicalOp {
    pub basis: Arc<LevelBasis>,
    pub columns: Vec<Column<TScalar>>,
}

impl PartialEq for ClassicalOp {
    fn eq(&self, other: &Self) -> bool {
        self.basis.monomials == other.basis.monomials && self.columns == other.columns
    }
}

impl ClassicalOp {
    pub fn level(&self) -> u32 {
        self.basis.level
    }

    pub fn entry(&self, row: usize, col: usize) -> TScalar {
        self.columns[col].get(&row).cloned().unwrap_or_default()
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (m, c) in &v.terms {
            let col = self.basis.position(m);
            for (row, x) in &self.columns[col] {
                out.add_term(self.basis.monomials[*row].clone(), &(c * x));
            }
        }
        out
    }

    pub fn scale(&self, s: &TScalar) -> ClassicalOp {
        let columns = self.columns.iter().map(|c| scale_column(c, s)).collect();
        ClassicalOp { basis: self.basis.clone(), columns }
    }

    pub fn add(&self, other: &ClassicalOp) -> ClassicalOp {
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut c = a.clone();
                add_column(&mut c, b, &TScalar::one());
                c
            })
            .collect();
        ClassicalOp { basis: self.basis.clone(), columns }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BTreeMap::is_empty)
    }

    pub fn to_series(&self, q_order: u32) -> OperatorSeries {
        let mut op = OperatorSeries::zero(self.basis.clone(), q_order);
        op.add_constant_matrix(&self.columns, &LaurentP::constant(TScalar::one()));
        op.p_only = true;
        op
    }
}

fn scale_column(c: &Column<TScalar>, s: &TScalar) -> Column<TScalar> {
    let mut out = Column::new();
    add_column(&mut out, c, s);
    out
}

fn add_column(acc: &mut Column<TScalar>, c: &Column<TScalar>, s: &TScalar) {
    for (r, x) in c {
        let e = acc.entry(*r).or_default();
        *e += &(x * s);
        if e.is_zero() {
            acc.remove(r);
        }
    }
}

/// Level-preserving operator with `(p, q)`-series entries.
#[derive(Clone, Debug)]
pub struct OperatorSeries {
    pub basis: Arc<LevelBasis>,
    pub q_order: u32,
    pub columns: Vec<Column<PQSeries>>,
    /// Set when the entries do not depend on `p` or `q`.
    pub p_only: bool,
}

impl PartialEq for OperatorSeries {
    fn eq(&self, other: &Self) -> bool {
        self.q_order == other.q_order
            && self.basis.monomials == other.basis.monomials
            && self.columns == other.columns
    }
}

impl OperatorSeries {
    pub fn zero(basis: Arc<LevelBasis>, q_order: u32) -> Self {
        let columns = vec![Column::new(); basis.len()];
        Self { basis, q_order, columns, p_only: false }
    }

    pub fn level(&self) -> u32 {
        self.basis.level
    }

    pub fn entry(&self, row: usize, col: usize) -> PQSeries {
        self.columns[col].get(&row).cloned().unwrap_or_else(|| PQSeries::zero(self.q_order))
    }

    fn add_entry(&mut self, row: usize, col: usize, s: &PQSeries) {
        let q = self.q_order;
        let e = self.columns[col].entry(row).or_insert_with(|| PQSeries::zero(q));
        *e = &*e + s;
        if e.is_zero() {
            self.columns[col].remove(&row);
        }
    }

    fn add_laurent_at(&mut self, row: usize, col: usize, d: u32, l: &LaurentP) {
        if l.is_zero() {
            return;
        }
        let q = self.q_order;
        let e = self.columns[col].entry(row).or_insert_with(|| PQSeries::zero(q));
        e.add_laurent(d, l);
        if e.is_zero() {
            self.columns[col].remove(&row);
        }
    }

    /// Add `l(p) * M` at `q^0`.
    fn add_constant_matrix(&mut self, m: &[Column<TScalar>], l: &LaurentP) {
        self.add_matrix_at(0, m, l);
    }

    /// Add `q^d l(p) * M`.
    fn add_matrix_at(&mut self, d: u32, m: &[Column<TScalar>], l: &LaurentP) {
        if d > self.q_order {
            return;
        }
        for (col, c) in m.iter().enumerate() {
            for (row, x) in c {
                self.add_laurent_at(*row, col, d, &l.scale(x));
            }
        }
    }

    /// Add `q^d s * M(p^m)` for a matrix of Laurent polynomials.
    fn add_laurent_matrix_at(&mut self, d: u32, m: &[Column<LaurentP>], dilation: i64, s: &TScalar) {
        if d > self.q_order {
            return;
        }
        for (col, c) in m.iter().enumerate() {
            for (row, l) in c {
                self.add_laurent_at(*row, col, d, &l.dilate(dilation).scale(s));
            }
        }
    }

    /// Add `f(p, q) * M`.
    fn add_series_matrix(&mut self, m: &[Column<TScalar>], f: &PQSeries) {
        for (col, c) in m.iter().enumerate() {
            for (row, x) in c {
                self.add_entry(*row, col, &f.scale(x));
            }
        }
    }

    pub fn try_add(&self, other: &OperatorSeries) -> Result<OperatorSeries> {
        if self.q_order != other.q_order {
            return Err(Error::TruncationMismatch(self.q_order, other.q_order));
        }
        if self.basis.monomials != other.basis.monomials {
            return Err(Error::LevelMismatch(self.level(), other.level()));
        }
        let mut out = self.clone();
        out.p_only = self.p_only && other.p_only;
        for (col, c) in other.columns.iter().enumerate() {
            for (row, s) in c {
                out.add_entry(*row, col, s);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> OperatorSeries {
        self.map(|s| -s)
    }

    pub fn try_sub(&self, other: &OperatorSeries) -> Result<OperatorSeries> {
        self.try_add(&other.neg())
    }

    fn map<F: Fn(&PQSeries) -> PQSeries>(&self, f: F) -> OperatorSeries {
        let columns = self
            .columns
            .iter()
            .map(|c| c.iter().map(|(r, s)| (*r, f(s))).filter(|(_, s)| !s.is_zero()).collect())
            .collect();
        OperatorSeries { basis: self.basis.clone(), q_order: self.q_order, columns, p_only: self.p_only }
    }

    pub fn derive(&self, var: Var) -> OperatorSeries {
        let mut out = self.map(|s| s.derive(var));
        out.p_only = false;
        out
    }

    pub fn truncate_p(&self, max2: i64) -> OperatorSeries {
        self.map(|s| s.truncate_p(max2))
    }

    pub fn scale(&self, s: &TScalar) -> OperatorSeries {
        self.map(|x| x.scale(s))
    }

    /// Entrywise product with a scalar series, truncated to `p^{max2/2}`.
    pub fn mul_series(&self, f: &PQSeries, max2: i64) -> OperatorSeries {
        let mut out = self.map(|x| x.mul_cut(f, Some(max2)));
        out.p_only = false;
        out
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BTreeMap::is_empty)
    }

    /// Drop the `q^0 p^0` coefficient of every entry.
    pub fn without_unstable(&self) -> OperatorSeries {
        self.map(|x| {
            let mut y = x.clone();
            y.add_term(0, 0, &-x.at(0, 0));
            y
        })
    }

    /// Coefficients of `Op(v)` on the basis rows.
    pub fn apply(&self, v: &FockVector) -> Column<PQSeries> {
        let mut out: Column<PQSeries> = Column::new();
        for (m, c) in &v.terms {
            let col = self.basis.position(m);
            for (row, s) in &self.columns[col] {
                let e = out.entry(*row).or_insert_with(|| PQSeries::zero(self.q_order));
                *e = &*e + &s.scale(c);
            }
        }
        out.retain(|_, s| !s.is_zero());
        out
    }

    /// First entry where two operators differ, as `(row, col, d, e2)`.
    pub fn first_difference(&self, other: &OperatorSeries) -> Option<(usize, usize, u32, i64)> {
        let diff = self.try_sub(other).ok()?;
        for (col, c) in diff.columns.iter().enumerate() {
            if let Some((row, s)) = c.iter().next() {
                let (d, l) = s.coeffs().iter().next()?;
                let e2 = *l.terms().keys().next()?;
                return Some((*row, col, *d, e2));
            }
        }
        None
    }

    pub fn to_json(&self, s: &SurfaceModel) -> Value {
        let mut rows = Vec::new();
        for (col, c) in self.columns.iter().enumerate() {
            for (row, series) in c {
                rows.push(json!({
                    "row": self.basis.monomials[*row].to_json(s),
                    "col": self.basis.monomials[col].to_json(s),
                    "series": series.to_json(),
                }));
            }
        }
        json!({"level": self.level(), "q_order": self.q_order, "rows": rows})
    }
}

fn to_column(basis: &LevelBasis, v: &FockVector) -> Column<TScalar> {
    v.terms.iter().map(|(m, c)| (basis.position(m), c.clone())).collect()
}

/// Matrix of a sum of operator words on a level basis.
fn words_matrix(s: &SurfaceModel, basis: &LevelBasis, words: &[Word]) -> Vec<Column<TScalar>> {
    basis
        .monomials
        .par_iter()
        .map(|m| {
            let v = FockVector::from_monomial(m.clone());
            let mut acc = FockVector::zero();
            for (c, w) in words {
                let r = apply_word(s, w, &v);
                acc.add_scaled(&r, c);
            }
            to_column(basis, &acc)
        })
        .collect()
}

/// Normal-ordered words of `:q_{k_1}…q_{k_r}(T):` scaled by `scale`.
fn tensor_words(s: &SurfaceModel, t: &TensorClass, ks: &[i64], scale: &TScalar, out: &mut Vec<Word>) {
    if ks.contains(&0) {
        return;
    }
    for (comps, c) in &t.terms {
        let word: Vec<(i64, usize)> = ks.iter().copied().zip(comps.iter().copied()).collect();
        let (ordered, neg) = normal_order(s, &word);
        let mut coeff = c * scale;
        if neg {
            coeff = -coeff;
        }
        out.push((coeff, ordered));
    }
}

pub fn level_basis(s: &SurfaceModel, n: u32) -> Arc<LevelBasis> {
    Arc::new(LevelBasis::new(s, n))
}

/// Cup product with `D(α)`: `e_α = -Σ_{m>0} q_m q_{-m}(Δ_*α)`.
pub fn lehn_divisor(s: &SurfaceModel, alpha: &Class, n: u32) -> Result<ClassicalOp> {
    lehn_divisor_on(s, alpha, &level_basis(s, n))
}

fn lehn_divisor_on(s: &SurfaceModel, alpha: &Class, basis: &Arc<LevelBasis>) -> Result<ClassicalOp> {
    let push = s.delta_push(alpha, DeltaPart::Full)?;
    let mut words = Vec::new();
    for m in 1..=basis.level as i64 {
        tensor_words(s, &push, &[m, -m], &TScalar::from_int(-1), &mut words);
    }
    Ok(ClassicalOp { basis: basis.clone(), columns: words_matrix(s, basis, &words) })
}

/// Normal-ordered cubic term `-(1/6) Σ_{i+j+k=0} :q_i q_j q_k(Δ_123):`.
fn cubic_words(s: &SurfaceModel, n: i64) -> Result<Vec<Word>> {
    let d123 = s.small_diagonal()?;
    let scale = TScalar::from_rational(rat(-1, 6));
    let mut words = Vec::new();
    for i in -n..=n {
        for j in -n..=n {
            let k = -i - j;
            if i == 0 || j == 0 || k == 0 || k.abs() > n {
                continue;
            }
            tensor_words(s, &d123, &[i, j, k], &scale, &mut words);
        }
    }
    Ok(words)
}

/// Cup product with `δ`:
/// `e_δ = -(1/6) Σ :q_i q_j q_k(Δ_123): - (1/2) Σ_{m>0} (m-1) q_m q_{-m}(Δ_* K_S)`.
pub fn lehn_delta(s: &SurfaceModel, n: u32) -> Result<ClassicalOp> {
    lehn_delta_on(s, &level_basis(s, n))
}

fn lehn_delta_on(s: &SurfaceModel, basis: &Arc<LevelBasis>) -> Result<ClassicalOp> {
    let n = basis.level as i64;
    let mut words = cubic_words(s, n)?;
    let dk = s.delta_push(&s.classes.k, DeltaPart::Full)?;
    for m in 2..=n {
        tensor_words(s, &dk, &[m, -m], &TScalar::from_rational(rat(-(m - 1), 2)), &mut words);
    }
    Ok(ClassicalOp { basis: basis.clone(), columns: words_matrix(s, basis, &words) })
}

/// Matrix of `q_k q_{-k}(T)` for a two-factor class.
fn qq_matrix(s: &SurfaceModel, basis: &LevelBasis, t: &TensorClass, k: i64) -> Vec<Column<TScalar>> {
    let mut words = Vec::new();
    tensor_words(s, t, &[k, -k], &TScalar::one(), &mut words);
    words_matrix(s, basis, &words)
}

fn slots_product(slots: &[Class]) -> TensorClass {
    let mut partial: Vec<(Vec<usize>, TScalar)> = vec![(Vec::new(), TScalar::one())];
    for c in slots {
        let mut next = Vec::new();
        for (idx, x) in &partial {
            for (i, y) in c {
                let mut idx2 = idx.clone();
                idx2.push(*i);
                next.push((idx2, x * y));
            }
        }
        partial = next;
    }
    let mut out = TensorClass::new(slots.len());
    for (idx, c) in partial {
        out.add_term(idx, &c);
    }
    out
}

/// The class
/// `Σ_i b_i² pr_i*(p) Π_{l≠i} pr_l*(γ) - Σ_{i<j} b_i b_j pr_ij*(Δ^odd_*(γ)) Π_{l≠i,j} pr_l*(γ)`.
pub fn star_class(s: &SurfaceModel, gamma: &Class, b: &[i64]) -> Result<TensorClass> {
    if b.iter().any(|x| *x == 0) {
        return Err(Error::InvalidArgument("star class needs nonzero b_i".into()));
    }
    if !s.equivariant && gamma.keys().any(|i| s.basis[*i].deg != 2) {
        return Err(Error::InvalidArgument("star class needs a degree-2 class".into()));
    }
    let r = b.len();
    let mut out = TensorClass::new(r);
    for i in 0..r {
        let mut slots = vec![gamma.clone(); r];
        slots[i] = s.classes.point.clone();
        out.add_scaled(&slots_product(&slots), &TScalar::from_int(b[i] * b[i]));
    }
    if r >= 2 {
        let odd = s.delta_push(gamma, DeltaPart::Odd)?;
        for i in 0..r {
            for j in i + 1..r {
                for (comps, c) in &odd.terms {
                    let mut slots = vec![gamma.clone(); r];
                    slots[i] = basis_class(comps[0]);
                    slots[j] = basis_class(comps[1]);
                    let scale = c * &TScalar::from_int(-b[i] * b[j]);
                    out.add_scaled(&slots_product(&slots), &scale);
                }
            }
        }
    }
    Ok(out)
}

fn partitions(n: i64, max: i64) -> Vec<Vec<i64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Multisets of nonzero integers summing to zero whose positive part is at
/// most `n`, each with the weight `1/Π mult!` that turns the ordered sum
/// `Σ_b (1/r!)` into a sum over multisets.
fn b_multisets(n: u32) -> Vec<(Vec<i64>, Rational)> {
    let mut out = Vec::new();
    for total in 1..=n as i64 {
        for pos in partitions(total, total) {
            for neg in partitions(total, total) {
                let mut b = pos.clone();
                b.extend(neg.iter().map(|x| -x));
                let mut weight = Rational::one();
                let mut counts: BTreeMap<i64, i64> = BTreeMap::new();
                for x in &b {
                    *counts.entry(*x).or_default() += 1;
                }
                for c in counts.values() {
                    for i in 1..=*c {
                        weight /= int(i);
                    }
                }
                out.push((b, weight));
            }
        }
    }
    out
}

/// Matrices of `:q_{b_1}…q_{b_r}(star^b(γ)):` for every multiset `b`.
struct StarMatrices {
    items: Vec<(Vec<i64>, Rational, Vec<Column<TScalar>>)>,
}

impl StarMatrices {
    fn new(s: &SurfaceModel, basis: &LevelBasis, gamma: &Class) -> Result<Self> {
        let mut items = Vec::new();
        for (b, w) in b_multisets(basis.level) {
            let star = star_class(s, gamma, &b)?;
            let mut words = Vec::new();
            tensor_words(s, &star, &b, &TScalar::one(), &mut words);
            let m = words_matrix(s, basis, &words);
            items.push((b, w, m));
        }
        Ok(Self { items })
    }
}

/// `Π_i (p^{b_i/2} - p^{-b_i/2}) / b_i`.
fn sinh_factor(b: &[i64]) -> LaurentP {
    let mut acc = LaurentP::constant(TScalar::one());
    for x in b {
        let c = TScalar::from_rational(rat(1, *x));
        let f = LaurentP::from_terms([(*x, c.clone()), (-*x, -&c)]);
        acc = &acc * &f;
    }
    acc
}

/// `ω^{(r)}_γ(p)` for each `r`, the part of `ω_γ` with `r` Nakajima factors.
fn omega_by_length(basis: &LevelBasis, stars: &StarMatrices) -> BTreeMap<usize, Vec<Column<LaurentP>>> {
    let mut out: BTreeMap<usize, Vec<Column<LaurentP>>> = BTreeMap::new();
    for (b, w, m) in &stars.items {
        let phi = sinh_factor(b).scale_rational(w);
        let acc = out.entry(b.len()).or_insert_with(|| vec![Column::new(); basis.len()]);
        for (col, c) in m.iter().enumerate() {
            for (row, x) in c {
                let e = acc[col].entry(*row).or_insert_with(LaurentP::zero);
                e.add_assign_ref(&phi.scale(x));
            }
        }
    }
    for m in out.values_mut() {
        for c in m.iter_mut() {
            c.retain(|_, l| !l.is_zero());
        }
    }
    out
}

/// `ω_γ(p^m)` as a `q`-free operator.
pub fn omega_op(s: &SurfaceModel, gamma: &Class, n: u32, m: i64) -> Result<OperatorSeries> {
    if m < 1 {
        return Err(Error::InvalidArgument("p-dilation must be positive".into()));
    }
    let basis = level_basis(s, n);
    let stars = StarMatrices::new(s, &basis, gamma)?;
    let mut op = OperatorSeries::zero(basis.clone(), 0);
    for mat in omega_by_length(&basis, &stars).values() {
        op.add_laurent_matrix_at(0, mat, m, &TScalar::one());
    }
    Ok(op)
}

/// `log(1 - p^k)` expanded up to `p^{window}`.
pub fn log_one_minus_pk(k: i64, window: i64) -> LaurentP {
    let mut l = LaurentP::zero();
    let mut j = 1;
    while k * j <= window {
        l.add_term(2 * k * j, &TScalar::from_rational(rat(-1, j)));
        j += 1;
    }
    l
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Compact,
    Exc,
}

/// Shared pieces of the two-point operators on one level.
struct TwoPointParts {
    basis: Arc<LevelBasis>,
    /// `q_k q_{-k}(Δ_* K_S)` for `k = 1..=n`.
    qq_k: Vec<Vec<Column<TScalar>>>,
    omega: BTreeMap<usize, Vec<Column<LaurentP>>>,
    stars: StarMatrices,
    e_f: ClassicalOp,
}

impl TwoPointParts {
    fn new(s: &SurfaceModel, n: u32) -> Result<Self> {
        let basis = level_basis(s, n);
        let dk = s.delta_push(&s.classes.k, DeltaPart::Full)?;
        let qq_k = (1..=n as i64).map(|k| qq_matrix(s, &basis, &dk, k)).collect();
        let stars = StarMatrices::new(s, &basis, &s.classes.f)?;
        let omega = omega_by_length(&basis, &stars);
        let e_f = lehn_divisor_on(s, &s.classes.f, &basis)?;
        Ok(Self { basis, qq_k, omega, stars, e_f })
    }

    /// `Σ_{md ≤ Q} (q^{md}/(md)) ω_{df}(p^m)`, scaled by `pref`.
    fn add_omega_sum(&self, op: &mut OperatorSeries, pref: &TScalar) {
        let q = op.q_order;
        for m in 1..=q {
            for d in 1..=q / m {
                let base = pref * &TScalar::from_rational(rat(1, (m * d) as i64));
                for (r, mat) in &self.omega {
                    let dpow = TScalar::from_int((d as i64).pow(*r as u32 - 1));
                    op.add_laurent_matrix_at(m * d, mat, m as i64, &(&base * &dpow));
                }
            }
        }
    }
}

fn check_variant(s: &SurfaceModel, variant: Variant) -> Result<()> {
    match (variant, s.equivariant) {
        (Variant::Compact, false) | (Variant::Exc, true) => Ok(()),
        (Variant::Compact, true) => Err(Error::InvalidArgument("compact variant needs a compact model".into())),
        (Variant::Exc, false) => Err(Error::InvalidArgument("exc variant needs the equivariant model".into())),
    }
}

/// The two-point operator of the Hilbert scheme,
/// `Σ_k log((1-p^k)/(1-p)) q_k q_{-k}(Δ_* K_S)
///  - (∫_Σ K_S) Σ_{m,d} (q^{md}/(md)) [ω_{df}(p^m) + (p^{m/2} - p^{-m/2})² e_{df}]`,
/// with all `p`-exponents up to `p_window` exact.
pub fn q_hilb(s: &SurfaceModel, n: u32, q_order: u32, variant: Variant, p_window: i64) -> Result<OperatorSeries> {
    check_variant(s, variant)?;
    let parts = TwoPointParts::new(s, n)?;
    Ok(q_hilb_from(s, &parts, q_order, p_window))
}

fn q_hilb_from(s: &SurfaceModel, parts: &TwoPointParts, q_order: u32, p_window: i64) -> OperatorSeries {
    let mut op = OperatorSeries::zero(parts.basis.clone(), q_order);
    let log1 = log_one_minus_pk(1, p_window);
    for (i, mat) in parts.qq_k.iter().enumerate() {
        let l = &log_one_minus_pk(i as i64 + 1, p_window) - &log1;
        op.add_constant_matrix(mat, &l);
    }
    let pref = s.fiber_prefactor();
    parts.add_omega_sum(&mut op, &pref);
    for m in 1..=q_order {
        for d in 1..=q_order / m {
            let mi = m as i64;
            let sq = LaurentP::from_terms([
                (2 * mi, TScalar::one()),
                (0, TScalar::from_int(-2)),
                (-2 * mi, TScalar::one()),
            ]);
            let c = &pref * &TScalar::from_rational(rat(d as i64, (m * d) as i64));
            op.add_matrix_at(m * d, &parts.e_f.columns, &sq.scale(&c));
        }
    }
    op.truncate_p(2 * p_window)
}

/// The two-point operator of stable pairs,
/// `-Σ_k log(1-p^k) q_k q_{-k}(Δ_* c_1) + d_Σ Σ_{m,d} ω_{df}(p^m) q^{md}/(md)`.
pub fn q_pt(s: &SurfaceModel, n: u32, q_order: u32, p_window: i64) -> Result<OperatorSeries> {
    check_variant(s, Variant::Compact)?;
    let parts = TwoPointParts::new(s, n)?;
    Ok(q_pt_from(s, &parts, q_order, p_window))
}

fn q_pt_from(s: &SurfaceModel, parts: &TwoPointParts, q_order: u32, p_window: i64) -> OperatorSeries {
    let mut op = OperatorSeries::zero(parts.basis.clone(), q_order);
    // Δ_* c_1 = -Δ_* K_S
    for (i, mat) in parts.qq_k.iter().enumerate() {
        op.add_constant_matrix(mat, &log_one_minus_pk(i as i64 + 1, p_window));
    }
    parts.add_omega_sum(&mut op, &TScalar::from_int(s.d_sigma()));
    op.truncate_p(2 * p_window)
}

/// `log((1-p) Π_r (1-p q^r)(1-p^{-1} q^r)/(1-q^r)²)` up to `p^{p_window}`.
pub fn wallcross_log(q_order: u32, p_window: i64) -> Result<PQSeries> {
    let one = TScalar::one();
    let mone = TScalar::from_int(-1);
    let mut prod = PQSeries::one(q_order);
    for r in 1..=q_order {
        let mut f = PQSeries::one(q_order);
        f.add_term(r, 2, &mone);
        f.add_term(r, -2, &mone);
        if 2 * r <= q_order {
            f.add_term(2 * r, 0, &one);
        }
        prod = &prod * &f;
        let mut inv = PQSeries::zero(q_order);
        let mut j = 0;
        while r * j <= q_order {
            inv.add_term(r * j, 0, &TScalar::from_int(j as i64 + 1));
            j += 1;
        }
        prod = &prod * &inv;
    }
    let window = p_window.max(q_order as i64);
    let log_prod = prod.log(window)?;
    let l = &log_prod + &PQSeries::from_laurent(q_order, log_one_minus_pk(1, p_window));
    Ok(l.truncate_p(2 * p_window))
}

/// `Π_{n≥1} (1-q^n)^{-d_Σ}`.
pub fn i0_series(d_sigma: i64, q_order: u32) -> PQSeries {
    let mut acc = PQSeries::one(q_order);
    let k = d_sigma.unsigned_abs() as u32;
    for n in 1..=q_order {
        for _ in 0..k {
            let f = if d_sigma >= 0 {
                let mut inv = PQSeries::zero(q_order);
                let mut j = 0;
                while n * j <= q_order {
                    inv.add_term(n * j, 0, &TScalar::one());
                    j += 1;
                }
                inv
            } else {
                let mut f = PQSeries::one(q_order);
                f.add_term(n, 0, &TScalar::from_int(-1));
                f
            };
            acc = &acc * &f;
        }
    }
    acc
}

/// Data of the wall-crossing: `I_0` and the scalar series multiplying
/// `D(c_1)` in the degree-two part of `I_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallcrossData {
    pub i0: PQSeries,
    pub i1_scalar: PQSeries,
}

pub fn wallcross_data(s: &SurfaceModel, q_order: u32, p_window: i64) -> Result<WallcrossData> {
    check_variant(s, Variant::Compact)?;
    let i0 = i0_series(s.d_sigma(), q_order);
    let i1_scalar = wallcross_log(q_order, p_window)?.mul_cut(&i0, Some(2 * p_window));
    Ok(WallcrossData { i0, i1_scalar })
}

/// Which divisor to multiply by quantum mechanically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divisor {
    Class(Class),
    Delta,
}

fn variant_of(s: &SurfaceModel) -> Variant {
    if s.equivariant {
        Variant::Exc
    } else {
        Variant::Compact
    }
}

/// `E_α = e_α + (α·f) q d/dq Q^Hilb` and `E_δ = e_δ + p d/dp Q^Hilb`.
pub fn quantum_divisor(s: &SurfaceModel, which: &Divisor, n: u32, q_order: u32, p_window: i64) -> Result<OperatorSeries> {
    let qh = q_hilb(s, n, q_order, variant_of(s), p_window)?;
    quantum_divisor_from(s, which, &qh)
}

pub fn quantum_divisor_from(s: &SurfaceModel, which: &Divisor, qh: &OperatorSeries) -> Result<OperatorSeries> {
    let basis = qh.basis.clone();
    match which {
        Divisor::Class(alpha) => {
            let e = lehn_divisor_on(s, alpha, &basis)?.to_series(qh.q_order);
            let af = s.pair_classes(alpha, &s.classes.f);
            e.try_add(&qh.derive(Var::Q).scale(&af))
        }
        Divisor::Delta => {
            let e = lehn_delta_on(s, &basis)?.to_series(qh.q_order);
            e.try_add(&qh.derive(Var::P))
        }
    }
}

/// The `q = 0` operator of the remark after the divisor equation:
/// `-(1/6) Σ :q_i q_j q_k(Δ_123): + Σ_k (k/2 (p^k+1)/(p^k-1) - 1/2 (p+1)/(p-1)) q_k q_{-k}(Δ_* K_S)`,
/// with the rational functions expanded ascending in `p`.
pub fn li_li_operator(s: &SurfaceModel, n: u32, p_window: i64) -> Result<OperatorSeries> {
    let basis = level_basis(s, n);
    let cubic = words_matrix(s, &basis, &cubic_words(s, n as i64)?);
    let mut op = OperatorSeries::zero(basis.clone(), 0);
    op.add_constant_matrix(&cubic, &LaurentP::constant(TScalar::one()));
    let dk = s.delta_push(&s.classes.k, DeltaPart::Full)?;
    for k in 1..=n as i64 {
        // (p^k+1)/(p^k-1) = -1 - 2 Σ_{j≥1} p^{kj}
        let coth = |k: i64| {
            let mut l = LaurentP::constant(TScalar::from_int(-1));
            let mut j = 1;
            while k * j <= p_window {
                l.add_term(2 * k * j, &TScalar::from_int(-2));
                j += 1;
            }
            l
        };
        let c = &coth(k).scale_rational(&rat(k, 2)) - &coth(1).scale_rational(&rat(1, 2));
        op.add_constant_matrix(&qq_matrix(s, &basis, &dk, k), &c);
    }
    Ok(op)
}

/// `(Op λ, μ)` as a series.
pub fn pair_with(s: &SurfaceModel, op: &OperatorSeries, lambda: &FockVector, mu: &FockVector) -> Result<PQSeries> {
    let image = op.apply(lambda);
    let mut out = PQSeries::zero(op.q_order);
    for (row, series) in image {
        let b = FockVector::from_monomial(op.basis.monomials[row].clone());
        let c = fock_pairing(s, &b, mu)?;
        if !c.is_zero() {
            out = &out + &series.scale(&c);
        }
    }
    Ok(out)
}

/// `⟨λ, μ⟩_{d,k}` read off from `(Op λ, μ) = Σ q^d (-p)^k ⟨λ, μ⟩_{d,k}`; the
/// `(0, 0)` coefficient is excluded.
pub fn bracket_table(series: &PQSeries) -> Result<BTreeMap<(u32, i64), TScalar>> {
    let mut out = BTreeMap::new();
    for (d, l) in series.coeffs() {
        for (e2, c) in l.terms() {
            if e2 % 2 != 0 {
                return Err(Error::InvalidArgument("bracket series has a half-integer p-exponent".into()));
            }
            let k = e2 / 2;
            if *d == 0 && k == 0 {
                continue;
            }
            let v = if k % 2 == 0 { c.clone() } else { -c };
            out.insert((*d, k), v);
        }
    }
    Ok(out)
}

/// Bracket table of `(Q^Hilb λ, μ)`.
pub fn bracket_table_for(
    s: &SurfaceModel,
    n: u32,
    lambda: &FockVector,
    mu: &FockVector,
    q_order: u32,
    p_window: i64,
) -> Result<BTreeMap<(u32, i64), TScalar>> {
    for v in [lambda, mu] {
        if let Some(l) = v.level() {
            if l != n {
                return Err(Error::LevelMismatch(l, n));
            }
        }
    }
    let qh = q_hilb(s, n, q_order, variant_of(s), p_window)?;
    bracket_table(&pair_with(s, &qh, lambda, mu)?)
}

/// The operator `T` (or `T̂` when `hat`) in its `A_r(p^{b_S})` form.
fn t_operator(parts: &TwoPointParts, q_order: u32, p_window: i64, hat: bool) -> Result<OperatorSeries> {
    let mut op = OperatorSeries::zero(parts.basis.clone(), q_order);
    let mut cache: HashMap<(u32, i64), PQSeries> = HashMap::new();
    for (b, w, m) in &parts.stars.items {
        let r = b.len();
        let prod_b: i64 = b.iter().product();
        let sign = if r % 2 == 0 { 1 } else { -1 };
        let mut inner = PQSeries::zero(q_order);
        for mask in 0u32..(1 << r) {
            let bs: i64 = (0..r).filter(|i| mask & (1 << i) != 0).map(|i| b[i]).sum();
            let ssign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            let (order, factor) = if hat {
                if bs == 0 {
                    continue;
                }
                (r as u32 - 1, ssign * bs)
            } else {
                (r as u32, ssign)
            };
            let key = (order, bs);
            if !cache.contains_key(&key) {
                cache.insert(key, jacobi_a_at(order, bs, q_order, p_window)?);
            }
            inner = &inner + &cache[&key].scale(&TScalar::from_int(factor));
        }
        let coeff = w * &rat(-sign, 2 * prod_b);
        op.add_series_matrix(m, &inner.scale_rational(&coeff));
    }
    Ok(op.truncate_p(2 * p_window))
}

/// Compare `q d/dq Q^PT` with `d_Σ T` and `p d/dp Q^PT` with `d_Σ T̂`, and
/// check `q d/dq T̂ = p d/dp T`.
pub fn t_cross_check(s: &SurfaceModel, n: u32, q_order: u32, p_window: i64) -> Result<Report> {
    check_variant(s, Variant::Compact)?;
    let parts = TwoPointParts::new(s, n)?;
    let qpt = q_pt_from(s, &parts, q_order, p_window);
    let ds = TScalar::from_int(s.d_sigma());
    let t = t_operator(&parts, q_order, p_window, false)?;
    let that = t_operator(&parts, q_order, p_window, true)?;
    let mut report = Report::new();
    let mut compare = |name: &str, a: &OperatorSeries, b: &OperatorSeries| {
        let diff = a.first_difference(b);
        let detail = match diff {
            None => String::new(),
            Some((r, c, d, e2)) => format!("first mismatch at row {r}, col {c}, q^{d}, p^({e2}/2)"),
        };
        report.push(format!("{name} (n={n})"), diff.is_none(), detail);
    };
    compare("q d/dq Q^PT = d_Σ T", &qpt.derive(Var::Q), &t.scale(&ds));
    // the unstable (q^0, p^0) coefficient is excluded from the two-point
    // series, and T̂ picks up a constant there from A_1's rational term
    compare(
        "p d/dp Q^PT = d_Σ T̂ away from (q^0, p^0)",
        &qpt.derive(Var::P),
        &that.scale(&ds).without_unstable(),
    );
    compare("q d/dq T̂ = p d/dp T", &that.derive(Var::Q), &t.derive(Var::P));
    Ok(report)
}

/// The wall-crossing identity
/// `Q^Hilb - Q^PT = -log((1-p) Π_r …) e_{c_1}` on one level.
pub fn wallcross_check(s: &SurfaceModel, n: u32, q_order: u32, p_window: i64) -> Result<Report> {
    check_variant(s, Variant::Compact)?;
    let parts = TwoPointParts::new(s, n)?;
    let lhs = q_hilb_from(s, &parts, q_order, p_window).try_sub(&q_pt_from(s, &parts, q_order, p_window))?;
    let ec1 = lehn_divisor_on(s, &s.classes.c1, &parts.basis)?.to_series(q_order);
    let wc = wallcross_log(q_order, p_window)?;
    let rhs = ec1.mul_series(&wc, 2 * p_window).neg();
    let diff = lhs.first_difference(&rhs);
    let mut report = Report::new();
    report.push(
        format!("Q^Hilb - Q^PT = -log(WC) e_c1 on {} (n={n}, q<={q_order})", s.name),
        diff.is_none(),
        diff.map(|(r, c, d, e2)| format!("first mismatch at row {r}, col {c}, q^{d}, p^({e2}/2)")).unwrap_or_default(),
    );
    Ok(report)
}

/// `[W] = (q_1(σ) q_1(1) + q_1(a) q_1(b)) v` on `ℙ¹×E`.
pub fn w_cycle(s: &SurfaceModel) -> Result<FockVector> {
    let idx = |name: &str| s.index_of(name).ok_or_else(|| Error::InvalidArgument(format!("model has no class '{name}'")));
    let (one, sigma, a, b) = (idx("1")?, idx("sigma")?, idx("a")?, idx("b")?);
    let mk = |x: usize, y: usize| apply_word(s, &[(1, x), (1, y)], &FockVector::vacuum());
    Ok(&mk(sigma, one) + &mk(a, b))
}

/// Right-hand side `2 Σ_{m,d} (d²/m) q^{md} (1-p^m)²(1-p^{-m})²`.
pub fn display_one_closed_form(q_order: u32) -> PQSeries {
    let mut out = PQSeries::zero(q_order);
    for m in 1..=q_order {
        let mi = m as i64;
        let a = LaurentP::from_terms([(0, TScalar::one()), (2 * mi, TScalar::from_int(-1))]);
        let b = LaurentP::from_terms([(0, TScalar::one()), (-2 * mi, TScalar::from_int(-1))]);
        let poly = &(&a * &a) * &(&b * &b);
        for d in 1..=q_order / m {
            let c = TScalar::from_rational(rat(2 * (d * d) as i64, mi));
            out.add_laurent(m * d, &poly.scale(&c));
        }
    }
    out
}

/// Both identities for `ℙ¹×E` at `n = 2`. With `flip_delta` the class
/// `δ[W]` is formed with the sign of `e_δ` reversed, which must fail.
pub fn basic_check_with(q_order: u32, p_window: i64, flip_delta: bool) -> Result<Report> {
    let s = crate::surface::builtin_surface("p1xe")?;
    let n = 2;
    let parts = TwoPointParts::new(&s, n)?;
    let qh = q_hilb_from(&s, &parts, q_order, p_window);
    let w = w_cycle(&s)?;
    let sigma = class_scale(&s.classes.sigma, &TScalar::one());
    let e_sigma = lehn_divisor_on(&s, &sigma, &parts.basis)?;
    let d_sigma = divisor_class(&s, &sigma, n)?;
    let mut report = Report::new();

    let lhs = pair_with(&s, &qh, &d_sigma, &e_sigma.apply(&w))?;
    let table = bracket_table(&lhs)?;
    let mut resummed = PQSeries::zero(q_order);
    for ((d, k), v) in &table {
        let c = if k % 2 == 0 { v.clone() } else { -v };
        resummed.add_term(*d, 2 * k, &c);
    }
    let expected = display_one_closed_form(q_order).truncate_p(2 * p_window);
    report.push(
        "display 1: <D(σ), D(σ)[W]> = 2Σ (d²/m) q^{md} (1-p^m)²(1-p^{-m})²",
        resummed == expected,
        first_series_mismatch(&resummed, &expected),
    );

    let mut e_delta = lehn_delta_on(&s, &parts.basis)?;
    let delta = e_delta.apply(&unit_class(&s, n));
    if flip_delta {
        e_delta = e_delta.scale(&TScalar::from_int(-1));
    }
    let delta_w = e_delta.apply(&w);
    let series = pair_with(&s, &qh, &delta, &delta_w)?;
    let table = bracket_table(&series)?;
    let mut ok = true;
    let mut detail = String::new();
    for k in 1..=p_window {
        let got = table.get(&(0, k)).cloned().unwrap_or_default();
        let want = TScalar::from_rational(rat(8, k));
        if got != want {
            ok = false;
            detail = format!("first mismatch at (q^0, p^{k}): got {got}, expected {want}");
            break;
        }
    }
    report.push("display 2: <δ, δ[W]>_{0,kA} = 8/k", ok, detail);
    Ok(report)
}

pub fn basic_check(q_order: u32) -> Result<Report> {
    basic_check_with(q_order, 12.max(2 * q_order as i64), false)
}

/// Location and values of the first coefficient where two series differ.
pub fn first_series_mismatch(a: &PQSeries, b: &PQSeries) -> String {
    if a == b {
        return String::new();
    }
    let diff = a - b;
    match diff.coeffs().iter().next() {
        Some((d, l)) => {
            let e2 = *l.terms().keys().next().unwrap();
            format!(
                "first mismatch at (q^{d}, p^({e2}/2)): got {}, expected {}",
                a.at(*d, e2),
                b.at(*d, e2)
            )
        }
        None => "truncation orders differ".into(),
    }
}

/// The basis monomials of a level whose real degree is `deg2`.
pub fn monomials_of_degree(s: &SurfaceModel, basis: &LevelBasis, deg2: u32) -> Vec<FockMonomial> {
    basis.monomials.iter().filter(|m| m.real_degree(s) == deg2).cloned().collect()
}
