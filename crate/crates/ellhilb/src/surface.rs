//! Graded-commutative models of `H*(S)` with integration, diagonal classes
//! and the distinguished classes of an elliptic surface.
//!
//! Diagonal classes are never written down by hand. They are obtained by
//! solving their integral characterization against the Gram matrix, with
//! Koszul signs `(x⊗y)∪(u⊗w) = (-1)^{|y||u|} (xu)⊗(yw)`, and every solution is
//! re-checked against the defining equations.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::{Rational, TScalar};
use crate::error::{Error, Result};
use crate::linalg;

/// Sparse linear combination of basis classes.
pub type Class = BTreeMap<usize, TScalar>;

pub fn class_add_scaled(acc: &mut Class, x: &Class, s: &TScalar) {
    for (i, c) in x {
        let e = acc.entry(*i).or_default();
        *e += &(c * s);
        if e.is_zero() {
            acc.remove(i);
        }
    }
}

pub fn class_scale(x: &Class, s: &TScalar) -> Class {
    let mut out = Class::new();
    class_add_scaled(&mut out, x, s);
    out
}

pub fn basis_class(i: usize) -> Class {
    Class::from([(i, TScalar::one())])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisClass {
    pub name: String,
    /// Real cohomological degree, `0..=4`.
    pub deg: u32,
    pub odd: bool,
}

/// The distinguished classes every model must provide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distinguished {
    pub one: Class,
    pub f: Class,
    pub sigma: Class,
    pub point: Class,
    pub k: Class,
    pub c1: Class,
}

/// Class in `H*(S^r)`: coefficients on tensor products of basis classes in
/// slot order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorClass {
    pub factors: usize,
    pub terms: BTreeMap<Vec<usize>, TScalar>,
}

impl TensorClass {
    pub fn new(factors: usize) -> Self {
        Self { factors, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, comps: Vec<usize>, c: &TScalar) {
        debug_assert_eq!(comps.len(), self.factors);
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(comps.clone()).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&comps);
        }
    }

    pub fn add_scaled(&mut self, other: &TensorClass, s: &TScalar) {
        assert_eq!(self.factors, other.factors);
        for (k, c) in &other.terms {
            self.add_term(k.clone(), &(c * s));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    pub name: String,
    pub basis: Vec<BasisClass>,
    /// `cup[i][j]` is the product of basis classes `i` and `j`.
    pub cup: Vec<Vec<Class>>,
    /// Value of the integral on each basis class.
    pub integral: Vec<TScalar>,
    pub classes: Distinguished,
    pub g: i64,
    pub ds: i64,
    /// Noncompact model with equivariant parameter `t`.
    pub equivariant: bool,
    gram: Vec<Vec<TScalar>>,
    gram_inv: Vec<Vec<TScalar>>,
}

fn sign(odd: bool) -> TScalar {
    TScalar::from_int(if odd { -1 } else { 1 })
}

impl SurfaceModel {
    /// Assemble a model and verify every structural invariant eagerly.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: &str,
        basis: Vec<BasisClass>,
        cup: Vec<Vec<Class>>,
        integral: Vec<TScalar>,
        classes: Distinguished,
        g: i64,
        ds: i64,
        equivariant: bool,
    ) -> Result<Self> {
        let mut s = Self {
            name: name.to_string(),
            basis,
            cup,
            integral,
            classes,
            g,
            ds,
            equivariant,
            gram: Vec::new(),
            gram_inv: Vec::new(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.basis[i].odd
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn d_sigma(&self) -> i64 {
        2 - 2 * self.g - self.ds
    }

    /// `-∫_Σ K_S`, the prefactor of the fiber-direction part of the
    /// two-point operator; it equals `d_Σ` on compact models.
    pub fn fiber_prefactor(&self) -> TScalar {
        -&self.integrate(&self.cup_classes(&self.classes.k, &self.classes.sigma))
    }

    pub fn cup(&self, x: &Class, y: &Class) -> Class {
        let mut out = Class::new();
        for (i, a) in x {
            for (j, b) in y {
                class_add_scaled(&mut out, &self.cup[*i][*j], &(a * b));
            }
        }
        out
    }

    fn cup_classes(&self, x: &Class, y: &Class) -> Class {
        self.cup(x, y)
    }

    pub fn integrate(&self, x: &Class) -> TScalar {
        let mut out = TScalar::zero();
        for (i, c) in x {
            out += &(c * &self.integral[*i]);
        }
        out
    }

    /// `∫ e_i ∪ e_j`.
    pub fn pairing(&self, i: usize, j: usize) -> &TScalar {
        &self.gram[i][j]
    }

    pub fn pair_classes(&self, x: &Class, y: &Class) -> TScalar {
        self.integrate(&self.cup(x, y))
    }

    /// Parity of a homogeneous class; `None` for zero or mixed parity.
    pub fn parity(&self, x: &Class) -> Option<bool> {
        let mut it = x.keys().map(|i| self.basis[*i].odd);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    fn validate(&mut self) -> Result<()> {
        let n = self.dim();
        let bad = |m: String| Err(Error::InvalidSurface(m));
        if n == 0 {
            return bad("empty basis".into());
        }
        if self.cup.len() != n || self.cup.iter().any(|r| r.len() != n) || self.integral.len() != n {
            return bad("cup table and integral must match the basis size".into());
        }
        for b in &self.basis {
            if b.deg > 4 || b.odd != (b.deg % 2 == 1) {
                return bad(format!("class '{}' has inconsistent degree/parity", b.name));
            }
        }
        let in_range = |c: &Class| c.keys().all(|k| *k < n);
        for row in &self.cup {
            for c in row {
                if !in_range(c) {
                    return bad("cup table references an unknown class".into());
                }
            }
        }
        let d = &self.classes;
        for (label, c) in [("one", &d.one), ("f", &d.f), ("sigma", &d.sigma), ("point", &d.point), ("K", &d.k), ("c1", &d.c1)] {
            if !in_range(c) {
                return bad(format!("distinguished class '{label}' references an unknown class"));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let want = self.basis[i].deg + self.basis[j].deg;
                if self.cup[i][j].keys().any(|k| self.basis[*k].deg != want) {
                    return bad(format!("cup of {i} and {j} is not homogeneous of degree {want}"));
                }
                let s = sign(self.basis[i].odd && self.basis[j].odd);
                if self.cup[i][j] != class_scale(&self.cup[j][i], &s) {
                    return bad(format!(
                        "cup is not graded-commutative on ({}, {})",
                        self.basis[i].name, self.basis[j].name
                    ));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.cup(&self.cup[i][j], &basis_class(k));
                    let right = self.cup(&basis_class(i), &self.cup[j][k]);
                    if left != right {
                        return bad(format!("cup is not associative on ({i}, {j}, {k})"));
                    }
                }
            }
        }
        for i in 0..n {
            if self.cup(&d.one, &basis_class(i)) != basis_class(i) {
                return bad("the class 'one' is not a unit".into());
            }
        }
        self.gram = (0..n)
            .map(|i| (0..n).map(|j| self.integrate(&self.cup[i][j])).collect())
            .collect();
        self.gram_inv = invert_monomial_matrix(&self.gram)?;
        if self.integrate(&d.point) != TScalar::one() {
            return bad("the point class must integrate to 1".into());
        }
        if self.cup(&d.f, &d.sigma) != d.point {
            return bad("fiber and section must meet in a point".into());
        }
        let neg = |c: &Class| class_scale(c, &TScalar::from_int(-1));
        if d.c1 != neg(&d.k) {
            return bad("c1 must equal -K".into());
        }
        if self.equivariant {
            if d.k != neg(&d.f) {
                return bad("equivariant model needs K = -f".into());
            }
        } else {
            if !self.cup(&d.f, &d.f).is_empty() {
                return bad("fiber class must square to zero".into());
            }
            let kf = class_scale(&d.f, &TScalar::from_int(2 * self.g - 2 + self.ds));
            if d.k != kf {
                return bad("K must equal (2g - 2 + dS) f".into());
            }
            if self.cup(&d.sigma, &d.sigma) != class_scale(&d.point, &TScalar::from_int(-self.ds)) {
                return bad("section must have self-intersection -dS".into());
            }
            if self.fiber_prefactor() != TScalar::from_int(self.d_sigma()) {
                return bad("∫_Σ K_S must equal -d_Σ".into());
            }
        }
        Ok(())
    }

    /// Solve for the class `c` in `H*(S^r)` with
    /// `∫_{S^r} c ∪ (x_1⊗…⊗x_r) = rhs(x)` for every basis tuple, then check
    /// every equation exactly.
    fn solve_tensor<F>(&self, r: usize, rhs: F) -> Result<TensorClass>
    where
        F: Fn(&[usize]) -> TScalar,
    {
        let n = self.dim();
        let tuples = all_tuples(n, r);
        let mut out = TensorClass::new(r);
        for x in &tuples {
            let b = rhs(x);
            if b.is_zero() {
                continue;
            }
            // the pairing only couples classes of equal parity, so the Koszul
            // sign of the product depends on x alone
            let mut odd_pairs = 0;
            for k in 0..r {
                for l in k + 1..r {
                    if self.is_odd(x[k]) && self.is_odd(x[l]) {
                        odd_pairs += 1;
                    }
                }
            }
            let b = &b * &sign(odd_pairs % 2 == 1);
            let mut partial: Vec<(Vec<usize>, TScalar)> = vec![(Vec::new(), b)];
            for &xk in x.iter() {
                let mut next = Vec::new();
                for (idx, c) in &partial {
                    for i in 0..n {
                        let h = &self.gram_inv[xk][i];
                        if h.is_zero() {
                            continue;
                        }
                        let mut idx2 = idx.clone();
                        idx2.push(i);
                        next.push((idx2, c * h));
                    }
                }
                partial = next;
            }
            for (idx, c) in partial {
                out.add_term(idx, &c);
            }
        }
        for x in &tuples {
            if self.tensor_pairing(&out, x) != rhs(x) {
                return Err(Error::DegeneratePairing);
            }
        }
        Ok(out)
    }

    /// `∫_{S^r} c ∪ (x_1⊗…⊗x_r)` with Koszul signs.
    pub fn tensor_pairing(&self, c: &TensorClass, x: &[usize]) -> TScalar {
        let mut total = TScalar::zero();
        for (comps, coeff) in &c.terms {
            let mut odd_swaps = 0;
            for k in 0..x.len() {
                for l in k + 1..x.len() {
                    if self.is_odd(x[k]) && self.is_odd(comps[l]) {
                        odd_swaps += 1;
                    }
                }
            }
            let mut term = coeff * &sign(odd_swaps % 2 == 1);
            for (a, b) in comps.iter().zip(x) {
                term = &term * &self.gram[*a][*b];
                if term.is_zero() {
                    break;
                }
            }
            total += &term;
        }
        total
    }

    /// The diagonal class `Δ` in `H*(S×S)`.
    pub fn diagonal(&self) -> Result<TensorClass> {
        self.solve_tensor(2, |x| self.pair_classes(&basis_class(x[0]), &basis_class(x[1])))
    }

    /// The small diagonal `Δ_123` in `H*(S³)`.
    pub fn small_diagonal(&self) -> Result<TensorClass> {
        self.solve_tensor(3, |x| {
            let xy = self.cup[x[0]][x[1]].clone();
            self.integrate(&self.cup(&xy, &basis_class(x[2])))
        })
    }

    /// `Δ_*(γ)`, optionally restricted to its odd⊗odd component.
    pub fn delta_push(&self, gamma: &Class, part: DeltaPart) -> Result<TensorClass> {
        let full = self.solve_tensor(2, |x| {
            let gx = self.cup(gamma, &basis_class(x[0]));
            self.integrate(&self.cup(&gx, &basis_class(x[1])))
        })?;
        Ok(match part {
            DeltaPart::Full => full,
            DeltaPart::Odd => {
                let mut out = TensorClass::new(2);
                for (k, c) in full.terms {
                    if self.is_odd(k[0]) && self.is_odd(k[1]) {
                        out.add_term(k, &c);
                    }
                }
                out
            }
        })
    }

    pub fn to_json(&self) -> Value {
        let class_json = |c: &Class| -> Value {
            Value::Array(c.iter().map(|(k, v)| json!([k, v.to_json()])).collect())
        };
        let mut cup = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if !self.cup[i][j].is_empty() {
                    cup.push(json!([i, j, class_json(&self.cup[i][j])]));
                }
            }
        }
        let integral: Vec<Value> = self
            .integral
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| json!([i, v.to_json()]))
            .collect();
        let d = &self.classes;
        json!({
            "name": self.name,
            "basis": self.basis.iter().map(|b| json!({"name": b.name, "deg": b.deg, "odd": b.odd})).collect::<Vec<_>>(),
            "cup": cup,
            "integral": integral,
            "classes": {
                "one": class_json(&d.one),
                "f": class_json(&d.f),
                "sigma": class_json(&d.sigma),
                "point": class_json(&d.point),
                "K": class_json(&d.k),
                "c1": class_json(&d.c1),
            },
            "g": self.g,
            "dS": self.ds,
            "equivariant": self.equivariant,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaPart {
    Full,
    Odd,
}

fn all_tuples(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..r {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t2 = t.clone();
                    t2.push(i);
                    t2
                })
            })
            .collect();
    }
    out
}

/// Invert a matrix whose nonzero entries are all `c t^k` for one fixed `k`.
fn invert_monomial_matrix(m: &[Vec<TScalar>]) -> Result<Vec<Vec<TScalar>>> {
    let mut shift = None;
    let mut rational = Vec::with_capacity(m.len());
    for row in m {
        let mut r = Vec::with_capacity(row.len());
        for v in row {
            if v.is_zero() {
                r.push(Rational::zero());
                continue;
            }
            let (c, k) = v.as_monomial().ok_or(Error::DegeneratePairing)?;
            if *shift.get_or_insert(k) != k {
                return Err(Error::InvalidSurface("pairing mixes powers of t".into()));
            }
            r.push(c);
        }
        rational.push(r);
    }
    let k = shift.ok_or(Error::DegeneratePairing)?;
    let inv = linalg::inverse(&rational).ok_or(Error::DegeneratePairing)?;
    Ok(inv
        .into_iter()
        .map(|row| row.into_iter().map(|c| TScalar::monomial(c, -k)).collect())
        .collect())
}

fn bc(name: &str, deg: u32) -> BasisClass {
    BasisClass { name: name.into(), deg, odd: deg % 2 == 1 }
}

fn scaled(i: usize, c: TScalar) -> Class {
    class_scale(&basis_class(i), &c)
}

/// Cup table of `H*(E)` on the basis `1, α, β, p_E`.
fn elliptic_curve_table() -> Vec<Vec<Class>> {
    let mut t = vec![vec![Class::new(); 4]; 4];
    for i in 0..4 {
        t[0][i] = basis_class(i);
        t[i][0] = basis_class(i);
    }
    t[1][2] = basis_class(3);
    t[2][1] = scaled(3, TScalar::from_int(-1));
    t
}

/// `ℙ¹ × E` with basis `1, a, b, f, sigma, a', b', p`.
fn p1xe() -> Result<SurfaceModel> {
    // index in the Künneth basis: (ℙ¹ part, E part)
    let layout = [(0, 0), (0, 1), (0, 2), (1, 0), (0, 3), (1, 1), (1, 2), (1, 3)];
    let basis = vec![
        bc("1", 0),
        bc("a", 1),
        bc("b", 1),
        bc("f", 2),
        bc("sigma", 2),
        bc("a'", 3),
        bc("b'", 3),
        bc("p", 4),
    ];
    let lookup: BTreeMap<(usize, usize), usize> =
        layout.iter().enumerate().map(|(i, pe)| (*pe, i)).collect();
    let e_table = elliptic_curve_table();
    let mut cup = vec![vec![Class::new(); 8]; 8];
    for (i, &(h1, e1)) in layout.iter().enumerate() {
        for (j, &(h2, e2)) in layout.iter().enumerate() {
            if h1 + h2 > 1 {
                continue;
            }
            // ℙ¹ classes are even, so the Künneth product carries no sign
            for (k, c) in &e_table[e1][e2] {
                class_add_scaled(&mut cup[i][j], &basis_class(lookup[&(h1 + h2, *k)]), c);
            }
        }
    }
    let mut integral = vec![TScalar::zero(); 8];
    integral[7] = TScalar::one();
    let f = basis_class(3);
    let classes = Distinguished {
        one: basis_class(0),
        f: f.clone(),
        sigma: basis_class(4),
        point: basis_class(7),
        k: class_scale(&f, &TScalar::from_int(-2)),
        c1: class_scale(&f, &TScalar::from_int(2)),
    };
    SurfaceModel::new("p1xe", basis, cup, integral, classes, 0, 0, false)
}

/// `E × ℂ` with basis `1, alpha, beta, pE` and `∫ = (1/t) ∫_E`.
fn exc() -> Result<SurfaceModel> {
    let basis = vec![bc("1", 0), bc("alpha", 1), bc("beta", 1), bc("pE", 2)];
    let mut integral = vec![TScalar::zero(); 4];
    integral[3] = TScalar::monomial(Rational::one(), -1);
    let t = TScalar::t_pow(1);
    let classes = Distinguished {
        one: basis_class(0),
        f: scaled(0, t.clone()),
        sigma: basis_class(3),
        point: scaled(3, t.clone()),
        k: scaled(0, -&t),
        c1: scaled(0, t),
    };
    SurfaceModel::new("exc", basis, elliptic_curve_table(), integral, classes, 0, 0, true)
}

pub fn builtin_surface(name: &str) -> Result<SurfaceModel> {
    match name {
        "p1xe" => p1xe(),
        "exc" => exc(),
        other => Err(Error::UnknownSurface(other.to_string())),
    }
}

fn parse_class(v: &Value, n: usize) -> Result<Class> {
    let arr = v.as_array().ok_or_else(|| Error::Json("class must be a list of [index, scalar]".into()))?;
    let mut out = Class::new();
    for item in arr {
        let pair = item
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| Error::Json("class term must be [index, scalar]".into()))?;
        let i = pair[0].as_u64().ok_or_else(|| Error::Json("class index must be an integer".into()))? as usize;
        if i >= n {
            return Err(Error::InvalidSurface(format!("class index {i} out of range")));
        }
        class_add_scaled(&mut out, &basis_class(i), &TScalar::from_json(&pair[1])?);
    }
    Ok(out)
}

/// Build a model from its JSON description, verifying all invariants.
pub fn load_surface(doc: &Value) -> Result<SurfaceModel> {
    let basis_json = doc
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Json("surface needs a 'basis' list".into()))?;
    let mut basis = Vec::new();
    for b in basis_json {
        let name = b.get("name").and_then(Value::as_str).ok_or_else(|| Error::Json("basis entry needs 'name'".into()))?;
        let deg = b.get("deg").and_then(Value::as_u64).ok_or_else(|| Error::Json("basis entry needs 'deg'".into()))? as u32;
        let odd = b.get("odd").and_then(Value::as_bool).unwrap_or(deg % 2 == 1);
        basis.push(BasisClass { name: name.into(), deg, odd });
    }
    let n = basis.len();
    let mut cup = vec![vec![Class::new(); n]; n];
    for entry in doc.get("cup").and_then(Value::as_array).ok_or_else(|| Error::Json("surface needs a 'cup' list".into()))? {
        let e = entry
            .as_array()
            .filter(|e| e.len() == 3)
            .ok_or_else(|| Error::Json("cup entry must be [i, j, class]".into()))?;
        let i = e[0].as_u64().ok_or_else(|| Error::Json("cup index".into()))? as usize;
        let j = e[1].as_u64().ok_or_else(|| Error::Json("cup index".into()))? as usize;
        if i >= n || j >= n {
            return Err(Error::InvalidSurface(format!("cup index ({i}, {j}) out of range")));
        }
        cup[i][j] = parse_class(&e[2], n)?;
    }
    let mut integral = vec![TScalar::zero(); n];
    for entry in doc.get("integral").and_then(Value::as_array).ok_or_else(|| Error::Json("surface needs an 'integral' list".into()))? {
        let e = entry
            .as_array()
            .filter(|e| e.len() == 2)
            .ok_or_else(|| Error::Json("integral entry must be [i, scalar]".into()))?;
        let i = e[0].as_u64().ok_or_else(|| Error::Json("integral index".into()))? as usize;
        if i >= n {
            return Err(Error::InvalidSurface(format!("integral index {i} out of range")));
        }
        integral[i] = TScalar::from_json(&e[1])?;
    }
    let cls = doc.get("classes").ok_or_else(|| Error::InvalidSurface("missing 'classes'".into()))?;
    let get = |k: &str| -> Result<Class> {
        let v = cls.get(k).ok_or_else(|| Error::InvalidSurface(format!("missing distinguished class '{k}'")))?;
        parse_class(v, n)
    };
    let classes = Distinguished {
        one: get("one")?,
        f: get("f")?,
        sigma: get("sigma")?,
        point: get("point")?,
        k: get("K")?,
        c1: get("c1")?,
    };
    let g = doc.get("g").and_then(Value::as_i64).ok_or_else(|| Error::Json("surface needs integer 'g'".into()))?;
    let ds = doc.get("dS").and_then(Value::as_i64).ok_or_else(|| Error::Json("surface needs integer 'dS'".into()))?;
    let equivariant = doc.get("equivariant").and_then(Value::as_bool).unwrap_or(false);
    let name = doc.get("name").and_then(Value::as_str).unwrap_or("loaded");
    SurfaceModel::new(name, basis, cup, integral, classes, g, ds, equivariant)
}

/// Compact elliptic surface over a rational base with `H² = ⟨f, σ⟩ ⊕ filler`,
/// where the filler is `rank` classes of square `-1` orthogonal to `f`, `σ`.
/// With `ds = 1` and `rank = 8` this is the cohomology of a rational
/// elliptic surface.
pub fn rational_base_model(ds: i64, filler_rank: usize) -> Result<SurfaceModel> {
    let n = 4 + filler_rank;
    let pt = n - 1;
    let mut basis = vec![bc("1", 0), bc("f", 2), bc("sigma", 2)];
    for i in 0..filler_rank {
        basis.push(bc(&format!("e{}", i + 1), 2));
    }
    basis.push(bc("p", 4));
    let mut cup = vec![vec![Class::new(); n]; n];
    for i in 0..n {
        cup[0][i] = basis_class(i);
        cup[i][0] = basis_class(i);
    }
    let mut set = |i: usize, j: usize, v: i64| {
        cup[i][j] = scaled(pt, TScalar::from_int(v));
        cup[j][i] = scaled(pt, TScalar::from_int(v));
    };
    set(1, 2, 1);
    set(2, 2, -ds);
    for i in 0..filler_rank {
        set(3 + i, 3 + i, -1);
    }
    let mut integral = vec![TScalar::zero(); n];
    integral[pt] = TScalar::one();
    let f = basis_class(1);
    let kcoef = ds - 2;
    let classes = Distinguished {
        one: basis_class(0),
        f: f.clone(),
        sigma: basis_class(2),
        point: basis_class(pt),
        k: class_scale(&f, &TScalar::from_int(kcoef)),
        c1: class_scale(&f, &TScalar::from_int(-kcoef)),
    };
    SurfaceModel::new(&format!("rational_ds{ds}"), basis, cup, integral, classes, 0, ds, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> TScalar {
        TScalar::from_int(n)
    }

    #[test]
    fn p1xe_basic_integrals() {
        let m = builtin_surface("p1xe").unwrap();
        let d = &m.classes;
        assert_eq!(m.pair_classes(&d.f, &d.sigma), s(1));
        assert_eq!(m.pair_classes(&d.k, &d.sigma), s(-2));
        assert_eq!(m.d_sigma(), 2);
        assert_eq!(m.fiber_prefactor(), s(2));
        let (a, bp) = (m.index_of("a").unwrap(), m.index_of("b'").unwrap());
        assert_eq!(m.pairing(a, bp), &s(1));
        assert_eq!(m.pairing(bp, a), &s(-1));
        assert_eq!(m.integrate(&d.point), s(1));
        assert_eq!(m.integrate(&d.one), s(0));
        assert!(m.cup(&d.f, &d.f).is_empty());
        let p = m.index_of("p").unwrap();
        assert_eq!(m.cup(&basis_class(a), &basis_class(bp)), basis_class(p));
    }

    #[test]
    fn exc_pairing() {
        let m = builtin_surface("exc").unwrap();
        let inv_t = TScalar::monomial(Rational::one(), -1);
        assert_eq!(m.pairing(0, 3), &inv_t);
        assert_eq!(m.pair_classes(&basis_class(1), &basis_class(2)), inv_t);
        assert_eq!(m.fiber_prefactor(), s(1));
        let k2 = m.cup(&m.classes.k, &m.classes.k);
        assert_eq!(k2, scaled(0, TScalar::t_pow(2)));
    }

    #[test]
    fn unknown_surface() {
        assert_eq!(builtin_surface("k3"), Err(Error::UnknownSurface("k3".into())));
    }

    #[test]
    fn diagonal_defining_property() {
        for name in ["p1xe", "exc"] {
            let m = builtin_surface(name).unwrap();
            let delta = m.diagonal().unwrap();
            for x in 0..m.dim() {
                for y in 0..m.dim() {
                    let lhs = m.tensor_pairing(&delta, &[x, y]);
                    let rhs = m.pair_classes(&basis_class(x), &basis_class(y));
                    assert_eq!(lhs, rhs);
                    // symmetric exactly as the pairing on S is
                    let flip = m.tensor_pairing(&delta, &[y, x]);
                    let sgn = sign(m.is_odd(x) && m.is_odd(y));
                    assert_eq!(lhs, &flip * &sgn);
                }
            }
        }
        let m = builtin_surface("p1xe").unwrap();
        let delta = m.diagonal().unwrap();
        assert_eq!(m.tensor_pairing(&delta, &[7, 0]), s(1));
        for (k, _) in &delta.terms {
            if m.is_odd(k[0]) {
                let degs = (m.basis[k[0]].deg, m.basis[k[1]].deg);
                assert!(degs == (1, 3) || degs == (3, 1), "{degs:?}");
            }
        }
    }

    #[test]
    fn exc_diagonal_is_t_times_curve_diagonal() {
        let m = builtin_surface("exc").unwrap();
        let delta = m.diagonal().unwrap();
        let t = TScalar::t_pow(1);
        let mut want = TensorClass::new(2);
        want.add_term(vec![0, 3], &t);
        want.add_term(vec![3, 0], &t);
        want.add_term(vec![1, 2], &-&t);
        want.add_term(vec![2, 1], &t);
        assert_eq!(delta, want);
        let d123 = m.small_diagonal().unwrap();
        assert!(d123.terms.values().all(|c| c.as_monomial().map(|(_, k)| k) == Some(2)));
    }

    #[test]
    fn small_diagonal_property() {
        let m = builtin_surface("p1xe").unwrap();
        let d = m.small_diagonal().unwrap();
        assert_eq!(m.tensor_pairing(&d, &[7, 0, 0]), s(1));
        assert_eq!(m.tensor_pairing(&d, &[3, 4, 0]), s(1));
    }

    #[test]
    fn delta_push_examples() {
        let m = builtin_surface("p1xe").unwrap();
        let p = basis_class(7);
        let dp = m.delta_push(&p, DeltaPart::Full).unwrap();
        let mut want = TensorClass::new(2);
        want.add_term(vec![7, 7], &s(1));
        assert_eq!(dp, want);
        let odd = m.delta_push(&m.classes.f, DeltaPart::Odd).unwrap();
        assert!(!odd.is_zero());
        for k in odd.terms.keys() {
            assert_eq!((m.basis[k[0]].deg, m.basis[k[1]].deg), (3, 3));
        }
        let e = builtin_surface("exc").unwrap();
        let t2 = TScalar::t_pow(2);
        let odd = e.delta_push(&e.classes.f, DeltaPart::Odd).unwrap();
        let mut want = TensorClass::new(2);
        want.add_term(vec![1, 2], &-&t2);
        want.add_term(vec![2, 1], &t2);
        assert_eq!(odd, want);
    }

    #[test]
    fn json_round_trip_and_rejections() {
        let m = builtin_surface("p1xe").unwrap();
        let back = load_surface(&m.to_json()).unwrap();
        assert_eq!(back, m);
        let mut doc = m.to_json();
        let cup = doc["cup"].as_array_mut().unwrap();
        cup.retain(|e| !(e[0] == 3 && e[1] == 4) && !(e[0] == 4 && e[1] == 3));
        assert!(load_surface(&doc).is_err());
        let mut doc = m.to_json();
        doc["classes"].as_object_mut().unwrap().remove("K");
        assert!(matches!(load_surface(&doc), Err(Error::InvalidSurface(_))));
    }

    #[test]
    fn rational_elliptic_model_loads() {
        let m = rational_base_model(1, 10).unwrap();
        assert_eq!(m.dim(), 14);
        assert_eq!(m.d_sigma(), 1);
        let back = load_surface(&m.to_json()).unwrap();
        assert_eq!(back, m);
        let sigma2 = m.cup(&m.classes.sigma, &m.classes.sigma);
        assert_eq!(sigma2, class_scale(&m.classes.point, &s(-1)));
    }
}
