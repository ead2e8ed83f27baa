//! Fock space of a surface in the Nakajima basis.
//!
//! Vectors are combinations of creation monomials `q_{k_1}(c_1)…q_{k_l}(c_l) v`
//! kept in canonical order (k descending, then class index ascending). Sorting
//! tracks the sign from exchanging odd classes, so equal vectors compare equal
//! structurally.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::One;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{int, Rational, TScalar};
use crate::error::{Error, Result};
use crate::surface::{basis_class, Class, SurfaceModel};

/// Creation monomial applied to the vacuum; factors are `(k, class index)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockMonomial(pub Vec<(u32, usize)>);

impl FockMonomial {
    pub fn vacuum() -> Self {
        Self(Vec::new())
    }

    pub fn level(&self) -> u32 {
        self.0.iter().map(|f| f.0).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Real cohomological degree `2(n - l) + Σ deg c_i`.
    pub fn real_degree(&self, s: &SurfaceModel) -> u32 {
        let n = self.level();
        let l = self.0.len() as u32;
        2 * (n - l) + self.0.iter().map(|f| s.basis[f.1].deg).sum::<u32>()
    }

    pub fn display(&self, s: &SurfaceModel) -> String {
        if self.0.is_empty() {
            return "v".into();
        }
        self.0
            .iter()
            .map(|(k, c)| format!("q{}({})", k, s.basis[*c].name))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn to_json(&self, s: &SurfaceModel) -> Value {
        Value::Array(self.0.iter().map(|(k, c)| json!([k, s.basis[*c].name])).collect())
    }

    pub fn from_json(v: &Value, s: &SurfaceModel) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Json("monomial must be a list".into()))?;
        let mut factors = Vec::new();
        for f in arr {
            let k = f.get(0).and_then(Value::as_u64).filter(|k| *k > 0);
            let name = f.get(1).and_then(Value::as_str);
            match (k, name.and_then(|n| s.index_of(n))) {
                (Some(k), Some(c)) => factors.push((k as u32, c)),
                _ => return Err(Error::Json(format!("bad monomial factor {f}"))),
            }
        }
        let mut out = FockVector::from_monomial(Self::vacuum());
        for (k, c) in factors.into_iter().rev() {
            out = create(s, k, c, &out);
        }
        match out.terms.into_iter().next() {
            Some((m, c)) if c == TScalar::one() => Ok(m),
            _ => Err(Error::Json("monomial is not in canonical form".into())),
        }
    }
}

/// Finite combination of Nakajima monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockVector {
    pub terms: BTreeMap<FockMonomial, TScalar>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::from_monomial(FockMonomial::vacuum())
    }

    pub fn from_monomial(m: FockMonomial) -> Self {
        let mut v = Self::zero();
        v.add_term(m, &TScalar::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &FockMonomial) -> TScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: FockMonomial, c: &TScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, s: &TScalar) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), &(c * s));
        }
    }

    pub fn scale(&self, s: &TScalar) -> FockVector {
        let mut out = Self::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> FockVector {
        self.scale(&TScalar::from_rational(r.clone()))
    }

    /// Common level of all terms, `None` when empty or mixed.
    pub fn level(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(FockMonomial::level);
        let first = it.next()?;
        it.all(|l| l == first).then_some(first)
    }

    pub fn display(&self, s: &SurfaceModel) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, c)| format!("({}) {}", c, m.display(s)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn to_json(&self, s: &SurfaceModel) -> Value {
        Value::Array(self.terms.iter().map(|(m, c)| json!([m.to_json(s), c.to_json()])).collect())
    }
}

impl std::ops::Add for &FockVector {
    type Output = FockVector;
    fn add(self, rhs: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &TScalar::one());
        out
    }
}

impl std::ops::Sub for &FockVector {
    type Output = FockVector;
    fn sub(self, rhs: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &TScalar::from_int(-1));
        out
    }
}

fn precedes(a: (u32, usize), b: (u32, usize)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Insert `q_k(c)` in front of a canonical monomial. Returns the new monomial
/// and whether the reordering produced a minus sign, or `None` when an odd
/// factor would repeat.
fn insert_factor(s: &SurfaceModel, m: &FockMonomial, k: u32, c: usize) -> Option<(FockMonomial, bool)> {
    let odd = s.is_odd(c);
    let mut pos = 0;
    let mut odd_passed = 0;
    for f in &m.0 {
        if precedes(*f, (k, c)) {
            if odd && s.is_odd(f.1) {
                odd_passed += 1;
            }
            pos += 1;
        } else {
            if odd && *f == (k, c) {
                return None;
            }
            break;
        }
    }
    let mut factors = m.0.clone();
    factors.insert(pos, (k, c));
    Some((FockMonomial(factors), odd_passed % 2 == 1))
}

/// `q_k(e_c)` for `k > 0` on a vector.
pub fn create(s: &SurfaceModel, k: u32, c: usize, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (m, coeff) in &v.terms {
        if let Some((m2, neg)) = insert_factor(s, m, k, c) {
            out.add_term(m2, &if neg { -coeff } else { coeff.clone() });
        }
    }
    out
}

/// `q_{-k}(e_a)` for `k > 0` on one monomial, from
/// `[q_{-k}(α), q_k(β)] = -k (α, β)` and the vacuum being annihilated.
fn annihilate_monomial(s: &SurfaceModel, k: u32, a: usize, m: &FockMonomial, coeff: &TScalar, out: &mut FockVector) {
    let a_odd = s.is_odd(a);
    let mut odd_before = 0;
    for (i, f) in m.0.iter().enumerate() {
        if f.0 == k {
            let pair = s.pairing(a, f.1);
            if !pair.is_zero() {
                let mut c = &(coeff * pair) * &TScalar::from_int(-(k as i64));
                if a_odd && odd_before % 2 == 1 {
                    c = -c;
                }
                let mut rest = m.0.clone();
                rest.remove(i);
                out.add_term(FockMonomial(rest), &c);
            }
        }
        if s.is_odd(f.1) {
            odd_before += 1;
        }
    }
}

pub fn annihilate(s: &SurfaceModel, k: u32, a: usize, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (m, c) in &v.terms {
        annihilate_monomial(s, k, a, m, c, &mut out);
    }
    out
}

/// Apply `q_k(e_c)` to a vector for a single basis class; `q_0 = 0`.
pub fn apply_basis(s: &SurfaceModel, k: i64, c: usize, v: &FockVector) -> FockVector {
    match k {
        0 => FockVector::zero(),
        k if k > 0 => create(s, k as u32, c, v),
        k => annihilate(s, (-k) as u32, c, v),
    }
}

/// `q_k(c)` on `v`, extended linearly in the class.
pub fn nakajima_apply(s: &SurfaceModel, k: i64, c: &Class, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    for (i, coeff) in c {
        out.add_scaled(&apply_basis(s, k, *i, v), coeff);
    }
    out
}

/// Apply the operator word `q_{k_1}(c_1)…q_{k_r}(c_r)`, rightmost first.
pub fn apply_word(s: &SurfaceModel, word: &[(i64, usize)], v: &FockVector) -> FockVector {
    let mut cur = v.clone();
    for &(k, c) in word.iter().rev() {
        if cur.is_zero() {
            break;
        }
        cur = apply_basis(s, k, c, &cur);
    }
    cur
}

/// Normal order a word: creators (k > 0) to the left of annihilators, stable
/// within each group. Returns the reordered word and the Koszul sign.
pub fn normal_order(s: &SurfaceModel, word: &[(i64, usize)]) -> (Vec<(i64, usize)>, bool) {
    let mut neg = false;
    let mut odd_annihilators = 0;
    for &(k, c) in word {
        let odd = s.is_odd(c);
        if k > 0 {
            if odd && odd_annihilators % 2 == 1 {
                neg = !neg;
            }
        } else if odd {
            odd_annihilators += 1;
        }
    }
    let mut out: Vec<_> = word.iter().copied().filter(|f| f.0 > 0).collect();
    out.extend(word.iter().copied().filter(|f| f.0 <= 0));
    (out, neg)
}

/// `(v, w)` for vectors of equal level, through the adjoint rule
/// `(q_k(α) x, y) = (-1)^k (x, q_{-k}(α) y)`.
pub fn fock_pairing(s: &SurfaceModel, v: &FockVector, w: &FockVector) -> Result<TScalar> {
    if let (Some(a), Some(b)) = (v.level(), w.level()) {
        if a != b {
            return Err(Error::LevelMismatch(a, b));
        }
    } else if !v.is_zero() && !w.is_zero() {
        return Err(Error::Inhomogeneous);
    }
    let mut total = TScalar::zero();
    for (m, c) in &v.terms {
        total += &(c * &pair_monomial(s, m, w));
    }
    Ok(total)
}

fn pair_monomial(s: &SurfaceModel, m: &FockMonomial, w: &FockVector) -> TScalar {
    let mut cur = w.clone();
    let mut k_total = 0;
    for &(k, c) in &m.0 {
        cur = annihilate(s, k, c, &cur);
        k_total += k;
        if cur.is_zero() {
            return TScalar::zero();
        }
    }
    let vac = cur.coeff(&FockMonomial::vacuum());
    if k_total % 2 == 1 {
        -vac
    } else {
        vac
    }
}

/// Complex degree of a homogeneous vector; half-integers occur for odd classes.
pub fn fock_degree(s: &SurfaceModel, v: &FockVector) -> Result<Rational> {
    let mut it = v.terms.keys().map(|m| m.real_degree(s));
    let first = it.next().ok_or(Error::Inhomogeneous)?;
    if it.any(|d| d != first) {
        return Err(Error::Inhomogeneous);
    }
    Ok(Rational::new((first as i64).into(), 2.into()))
}

fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
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

/// Non-decreasing class sequences of length `m` with no repeated odd class.
fn class_multisets(s: &SurfaceModel, m: usize, from: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for c in from..s.dim() {
        let next = if s.is_odd(c) { c + 1 } else { c };
        for mut rest in class_multisets(s, m - 1, next) {
            rest.insert(0, c);
            out.push(rest);
        }
    }
    out
}

/// Canonical Nakajima monomials of level `n`, grouped by partition with the
/// largest parts first.
pub fn fock_basis(s: &SurfaceModel, n: u32) -> Vec<FockMonomial> {
    let mut out = Vec::new();
    for lambda in partitions(n, n) {
        let mut groups: Vec<(u32, usize)> = Vec::new();
        for &k in &lambda {
            match groups.last_mut() {
                Some(g) if g.0 == k => g.1 += 1,
                _ => groups.push((k, 1)),
            }
        }
        let mut partial: Vec<Vec<(u32, usize)>> = vec![Vec::new()];
        for (k, mult) in groups {
            let choices = class_multisets(s, mult, 0);
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    choices.iter().map(move |ch| {
                        let mut p2 = p.clone();
                        p2.extend(ch.iter().map(|c| (k, *c)));
                        p2
                    })
                })
                .collect();
        }
        out.extend(partial.into_iter().map(FockMonomial));
    }
    out
}

/// Basis of one level together with its reverse index.
#[derive(Clone, Debug)]
pub struct LevelBasis {
    pub level: u32,
    pub monomials: Vec<FockMonomial>,
    pub index: HashMap<FockMonomial, usize>,
}

impl LevelBasis {
    pub fn new(s: &SurfaceModel, n: u32) -> Self {
        let monomials = fock_basis(s, n);
        let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Self { level: n, monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn position(&self, m: &FockMonomial) -> usize {
        self.index[m]
    }
}

/// Gram matrix `G[i][j] = (b_i, b_j)` of a level basis.
pub fn gram_matrix(s: &SurfaceModel, basis: &LevelBasis) -> Vec<Vec<TScalar>> {
    basis
        .monomials
        .par_iter()
        .map(|mi| {
            basis
                .monomials
                .iter()
                .map(|mj| pair_monomial(s, mi, &FockVector::from_monomial(mj.clone())))
                .collect()
        })
        .collect()
}

/// A weighted partition `((λ_1, δ_1), …)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPartition {
    pub pairs: Vec<(u32, Class)>,
}

impl WeightedPartition {
    pub fn size(&self) -> u32 {
        self.pairs.iter().map(|p| p.0).sum()
    }
}

/// `(1/Πλ_i) q_{λ_1}(δ_1)…q_{λ_l}(δ_l) v`.
pub fn partition_class(s: &SurfaceModel, lambda: &WeightedPartition) -> Result<FockVector> {
    let mut v = FockVector::vacuum();
    let mut prod = 1i64;
    for (k, c) in lambda.pairs.iter().rev() {
        if *k == 0 {
            return Err(Error::InvalidArgument("parts of a weighted partition must be >= 1".into()));
        }
        v = nakajima_apply(s, *k as i64, c, &v);
        prod *= *k as i64;
    }
    Ok(v.scale_rational(&(Rational::one() / int(prod))))
}

fn factorial(n: u32) -> Rational {
    (1..=n as i64).map(int).fold(Rational::one(), |a, b| a * b)
}

/// `q_1(c)^n v / n!`.
fn power_over_factorial(s: &SurfaceModel, c: usize, n: u32) -> FockVector {
    let mut v = FockVector::vacuum();
    for _ in 0..n {
        v = create(s, 1, c, &v);
    }
    v.scale_rational(&(Rational::one() / factorial(n)))
}

/// The unit of `H*(S^[n])`.
pub fn unit_class(s: &SurfaceModel, n: u32) -> FockVector {
    power_over_factorial(s, 0, n)
}

/// The class of a point of `S^[n]`.
pub fn point_class(s: &SurfaceModel, n: u32) -> Result<FockVector> {
    let (&p, c) = s
        .classes
        .point
        .iter()
        .next()
        .filter(|_| s.classes.point.len() == 1)
        .ok_or_else(|| Error::InvalidSurface("point class must be a multiple of a basis class".into()))?;
    let mut v = FockVector::vacuum();
    for _ in 0..n {
        v = create(s, 1, p, &v);
    }
    let scale = TScalar::from_rational(Rational::one() / factorial(n));
    let mut cn = TScalar::one();
    for _ in 0..n {
        cn = &cn * c;
    }
    Ok(v.scale(&(&scale * &cn)))
}

/// The divisor `D(x) = q_1(x) q_1(1)^{n-1} v / (n-1)!`.
pub fn divisor_class(s: &SurfaceModel, x: &Class, n: u32) -> Result<FockVector> {
    if n == 0 {
        return Err(Error::InvalidArgument("D(x) needs n >= 1".into()));
    }
    let base = power_over_factorial(s, 0, n - 1);
    Ok(nakajima_apply(s, 1, x, &base))
}

pub fn class_of(s: &SurfaceModel, name: &str) -> Result<Class> {
    s.index_of(name)
        .map(basis_class)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown class '{name}'")))
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "v");
        }
        let parts: Vec<String> = self.0.iter().map(|(k, c)| format!("q{k}(#{c})")).collect();
        write!(f, "{}", parts.join(" "))
    }
}
