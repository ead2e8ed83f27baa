//! Truncated series in `q` whose coefficients are Laurent polynomials in
//! `p^{1/2}`, plus a companion type for expansions in `z` where `p = e^z`.
//!
//! Exponents of `p` are stored doubled, so `p^{1/2}` has key `1`. Every
//! series carries its `q` truncation order and mixing orders is an error.
//!
//! A few operations (logarithm, exponential) produce infinite tails in `p`
//! even at fixed `q`-order. They take a `p_window`: the result is exact for
//! every retained coefficient and contains exactly the exponents `<= p_window`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::algebra::{int, rat, Rational, TScalar};
use crate::error::{Error, Result};

/// Laurent polynomial in `p^{1/2}` with `TScalar` coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentP {
    terms: BTreeMap<i64, TScalar>,
}

impl LaurentP {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: TScalar) -> Self {
        Self::monomial(0, c)
    }

    /// `c * p^{e2/2}`.
    pub fn monomial(e2: i64, c: TScalar) -> Self {
        let mut out = Self::zero();
        out.add_term(e2, &c);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, TScalar)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in it {
            out.add_term(e, &c);
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<i64, TScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e2: i64) -> TScalar {
        self.terms.get(&e2).cloned().unwrap_or_default()
    }

    pub fn min_exp2(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp2(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add_term(&mut self, e2: i64, c: &TScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e2).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e2);
        }
    }

    pub fn add_assign_ref(&mut self, other: &LaurentP) {
        for (e, c) in &other.terms {
            self.add_term(*e, c);
        }
    }

    pub fn add_scaled(&mut self, other: &LaurentP, s: &TScalar) {
        if s.is_zero() {
            return;
        }
        for (e, c) in &other.terms {
            self.add_term(*e, &(c * s));
        }
    }

    pub fn scale(&self, s: &TScalar) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, s);
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&TScalar::from_rational(r.clone()))
    }

    /// Product keeping only exponents `<= max2` (no cut when `None`).
    pub fn mul_cut(&self, other: &LaurentP, max2: Option<i64>) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(m) = max2 {
                    if a + b > m {
                        break;
                    }
                }
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }

    pub fn truncate_above(&self, max2: i64) -> Self {
        Self {
            terms: self.terms.range(..=max2).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// Substitute `p -> p^m`.
    pub fn dilate(&self, m: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (e * m, c.clone())))
    }

    /// `p d/dp`.
    pub fn p_derivative(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (*e, c.scale(&rat(*e, 2)))),
        )
    }

    pub fn is_integral(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }
}

impl Add for &LaurentP {
    type Output = LaurentP;
    fn add(self, rhs: &LaurentP) -> LaurentP {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &LaurentP {
    type Output = LaurentP;
    fn sub(self, rhs: &LaurentP) -> LaurentP {
        let mut out = self.clone();
        out.add_scaled(rhs, &TScalar::from_int(-1));
        out
    }
}

impl Mul for &LaurentP {
    type Output = LaurentP;
    fn mul(self, rhs: &LaurentP) -> LaurentP {
        self.mul_cut(rhs, None)
    }
}

impl Neg for &LaurentP {
    type Output = LaurentP;
    fn neg(self) -> LaurentP {
        self.scale(&TScalar::from_int(-1))
    }
}

/// Truncated series in `q` with Laurent-polynomial coefficients in `p^{1/2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PQSeries {
    q_order: u32,
    coeffs: BTreeMap<u32, LaurentP>,
}

/// Which variable a derivation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Q,
    P,
}

/// Binary series arithmetic as one entry point.
#[derive(Clone, Debug)]
pub enum SeriesOperand<'a> {
    Series(&'a PQSeries),
    Scalar(&'a TScalar),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    ScalarMul,
}

pub fn series_arith(op: SeriesOp, a: &PQSeries, b: SeriesOperand<'_>) -> Result<PQSeries> {
    match (op, b) {
        (SeriesOp::ScalarMul, SeriesOperand::Scalar(s)) => Ok(a.scale(s)),
        (SeriesOp::ScalarMul, SeriesOperand::Series(_)) => Err(Error::InvalidArgument(
            "scalar_mul needs a scalar operand".into(),
        )),
        (_, SeriesOperand::Scalar(s)) => {
            let b = PQSeries::constant(a.q_order, s.clone());
            series_arith(op, a, SeriesOperand::Series(&b))
        }
        (SeriesOp::Add, SeriesOperand::Series(b)) => a.try_add(b),
        (SeriesOp::Sub, SeriesOperand::Series(b)) => a.try_sub(b),
        (SeriesOp::Mul, SeriesOperand::Series(b)) => a.try_mul(b),
    }
}

impl PQSeries {
    pub fn zero(q_order: u32) -> Self {
        Self { q_order, coeffs: BTreeMap::new() }
    }

    pub fn one(q_order: u32) -> Self {
        Self::constant(q_order, TScalar::one())
    }

    pub fn constant(q_order: u32, c: TScalar) -> Self {
        Self::monomial(q_order, 0, 0, c)
    }

    /// `c * q^d * p^{e2/2}`; dropped if `d` exceeds the order.
    pub fn monomial(q_order: u32, d: u32, e2: i64, c: TScalar) -> Self {
        let mut out = Self::zero(q_order);
        out.add_term(d, e2, &c);
        out
    }

    /// A `p`-only series (everything at `q^0`).
    pub fn from_laurent(q_order: u32, l: LaurentP) -> Self {
        let mut out = Self::zero(q_order);
        out.set_coeff(0, l);
        out
    }

    pub fn q_order(&self) -> u32 {
        self.q_order
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, LaurentP> {
        &self.coeffs
    }

    pub fn coeff(&self, d: u32) -> LaurentP {
        self.coeffs.get(&d).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, d: u32) -> Option<&LaurentP> {
        self.coeffs.get(&d)
    }

    /// Coefficient of `q^d p^{e2/2}`.
    pub fn at(&self, d: u32, e2: i64) -> TScalar {
        self.coeffs.get(&d).map(|l| l.coeff(e2)).unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn set_coeff(&mut self, d: u32, l: LaurentP) {
        if d > self.q_order || l.is_zero() {
            self.coeffs.remove(&d);
        } else {
            self.coeffs.insert(d, l);
        }
    }

    pub fn add_term(&mut self, d: u32, e2: i64, c: &TScalar) {
        if d > self.q_order || c.is_zero() {
            return;
        }
        let l = self.coeffs.entry(d).or_default();
        l.add_term(e2, c);
        if l.is_zero() {
            self.coeffs.remove(&d);
        }
    }

    /// Add `l * q^d`.
    pub fn add_laurent(&mut self, d: u32, l: &LaurentP) {
        if d > self.q_order {
            return;
        }
        let slot = self.coeffs.entry(d).or_default();
        slot.add_assign_ref(l);
        if slot.is_zero() {
            self.coeffs.remove(&d);
        }
    }

    fn check_order(&self, other: &PQSeries) -> Result<()> {
        if self.q_order != other.q_order {
            return Err(Error::TruncationMismatch(self.q_order, other.q_order));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &PQSeries) -> Result<PQSeries> {
        self.check_order(other)?;
        let mut out = self.clone();
        for (d, l) in &other.coeffs {
            out.add_laurent(*d, l);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &PQSeries) -> Result<PQSeries> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &PQSeries) -> Result<PQSeries> {
        self.check_order(other)?;
        Ok(self.mul_cut(other, None))
    }

    /// Product, keeping only `p`-exponents `<= max2` (doubled).
    pub fn mul_cut(&self, other: &PQSeries, max2: Option<i64>) -> PQSeries {
        let mut out = PQSeries::zero(self.q_order.min(other.q_order));
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                if a + b > out.q_order {
                    break;
                }
                let prod = x.mul_cut(y, max2);
                out.add_laurent(a + b, &prod);
            }
        }
        out
    }

    pub fn scale(&self, s: &TScalar) -> PQSeries {
        let mut out = PQSeries::zero(self.q_order);
        for (d, l) in &self.coeffs {
            out.set_coeff(*d, l.scale(s));
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> PQSeries {
        self.scale(&TScalar::from_rational(r.clone()))
    }

    fn neg_ref(&self) -> PQSeries {
        self.scale(&TScalar::from_int(-1))
    }

    /// Multiply every `q`-coefficient by the same Laurent polynomial.
    pub fn mul_laurent(&self, l: &LaurentP) -> PQSeries {
        let mut out = PQSeries::zero(self.q_order);
        for (d, x) in &self.coeffs {
            out.set_coeff(*d, x * l);
        }
        out
    }

    /// Keep only exponents `<= max2` in every coefficient.
    pub fn truncate_p(&self, max2: i64) -> PQSeries {
        let mut out = PQSeries::zero(self.q_order);
        for (d, l) in &self.coeffs {
            out.set_coeff(*d, l.truncate_above(max2));
        }
        out
    }

    /// Change the truncation order; raising it pads with zeros.
    pub fn with_q_order(&self, q_order: u32) -> PQSeries {
        let mut out = PQSeries::zero(q_order);
        for (d, l) in self.coeffs.range(..=q_order) {
            out.set_coeff(*d, l.clone());
        }
        out
    }

    /// The part of degree `>= d0` in `q`.
    pub fn drop_below_q(&self, d0: u32) -> PQSeries {
        let mut out = PQSeries::zero(self.q_order);
        for (d, l) in self.coeffs.range(d0..) {
            out.set_coeff(*d, l.clone());
        }
        out
    }

    pub fn derive(&self, var: Var) -> PQSeries {
        let mut out = PQSeries::zero(self.q_order);
        for (d, l) in &self.coeffs {
            let c = match var {
                Var::Q => l.scale(&TScalar::from_int(*d as i64)),
                Var::P => l.p_derivative(),
            };
            out.set_coeff(*d, c);
        }
        out
    }

    /// Substitute `q -> q^{m_q}`, `p -> p^{m_p}`.
    pub fn dilate(&self, m_q: u32, m_p: i64) -> PQSeries {
        assert!(m_q >= 1, "q-dilation must be positive");
        let mut out = PQSeries::zero(self.q_order);
        for (d, l) in &self.coeffs {
            let nd = d * m_q;
            if nd > self.q_order {
                break;
            }
            out.set_coeff(nd, l.dilate(m_p));
        }
        out
    }

    pub fn is_p_integral(&self) -> bool {
        self.coeffs.values().all(LaurentP::is_integral)
    }

    pub fn is_p_free(&self) -> bool {
        self.coeffs.values().all(|l| l.terms().keys().all(|e| *e == 0))
    }

    /// Smallest doubled `p`-exponent across all coefficients.
    pub fn min_exp2(&self) -> Option<i64> {
        self.coeffs.values().filter_map(LaurentP::min_exp2).min()
    }

    /// Doubled slack that keeps products exact below a `p` cut: the most
    /// negative exponent reachable with the whole `q` budget.
    fn negative_slack2(&self) -> i64 {
        let mut slack = 0i64;
        for (d, l) in self.coeffs.range(1..) {
            let m = l.min_exp2().unwrap_or(0);
            if m < 0 {
                let need = (-m * self.q_order as i64 + *d as i64 - 1) / *d as i64;
                slack = slack.max(need);
            }
        }
        slack
    }

    fn check_leading(&self) -> Result<()> {
        if let Some(l) = self.coeffs.get(&0) {
            if let Some(e) = l.min_exp2() {
                if e <= 0 {
                    return Err(Error::NonPositiveLeadingExponent(e));
                }
            }
        }
        Ok(())
    }

    /// Sum `sum_m c_m f^m` for `m >= 1` with `f` admissible for log/exp.
    fn power_sum<F>(f: &PQSeries, p_window: i64, coef: F) -> PQSeries
    where
        F: Fn(u64) -> Rational,
    {
        let cut = 2 * p_window + f.negative_slack2();
        let f_cut = f.truncate_p(cut);
        let mut power = f_cut.clone();
        let mut acc = PQSeries::zero(f.q_order);
        let mut m = 1u64;
        while !power.is_zero() {
            let c = coef(m);
            if !c.is_zero() {
                acc = &acc + &power.scale_rational(&c);
            }
            power = power.mul_cut(&f_cut, Some(cut));
            m += 1;
        }
        acc.truncate_p(2 * p_window)
    }

    /// Logarithm of `1 + f`; see the module docs for the `p_window` contract.
    pub fn log(&self, p_window: i64) -> Result<PQSeries> {
        let c0 = self.at(0, 0);
        if c0 != TScalar::one() {
            return Err(Error::LogConstantTerm(c0.to_string()));
        }
        let f = self.try_sub(&PQSeries::one(self.q_order))?;
        f.check_leading()?;
        Ok(Self::power_sum(&f, p_window, |m| {
            let s = if m % 2 == 1 { 1 } else { -1 };
            rat(s, m as i64)
        }))
    }

    pub fn exp(&self, p_window: i64) -> Result<PQSeries> {
        if !self.at(0, 0).is_zero() {
            return Err(Error::ExpConstantTerm);
        }
        self.check_leading()?;
        let body = Self::power_sum(self, p_window, |m| {
            let mut f = Rational::one();
            for i in 1..=m {
                f *= int(i as i64);
            }
            Rational::one() / f
        });
        Ok(&body + &PQSeries::one(self.q_order))
    }

    /// Substitute `p = e^z` and expand to `z^{z_order}`.
    pub fn to_z(&self, z_order: i64) -> ZSeries {
        let mut out = ZSeries::zero(self.q_order, z_order, 0);
        if z_order < 0 {
            return out;
        }
        let mut inv_fact = vec![Rational::one()];
        for j in 1..=z_order {
            let prev = inv_fact.last().unwrap().clone();
            inv_fact.push(prev / int(j));
        }
        for (d, l) in &self.coeffs {
            for (e2, c) in l.terms() {
                let e = rat(*e2, 2);
                let mut epow = Rational::one();
                for j in 0..=z_order {
                    let w = &epow * &inv_fact[j as usize];
                    if !w.is_zero() {
                        let s = c.scale(&w);
                        out.add_term(j, *d, &s);
                    }
                    epow *= &e;
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(d, l)| {
                let inner: Vec<Value> =
                    l.terms().iter().map(|(e, c)| json!([e, c.to_json()])).collect();
                json!([d, inner])
            })
            .collect();
        json!({"q_order": self.q_order, "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<PQSeries> {
        let q_order = v
            .get("q_order")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("series needs integer 'q_order'".into()))?
            as u32;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("series needs 'terms' list".into()))?;
        let mut out = PQSeries::zero(q_order);
        for t in terms {
            let pair = t
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Json("series term must be [d, [...]]".into()))?;
            let d = pair[0]
                .as_u64()
                .ok_or_else(|| Error::Json("q exponent must be a non-negative integer".into()))?
                as u32;
            if d > q_order {
                return Err(Error::Json(format!("q exponent {d} exceeds q_order {q_order}")));
            }
            let inner = pair[1]
                .as_array()
                .ok_or_else(|| Error::Json("p terms must be a list".into()))?;
            for pt in inner {
                let pp = pt
                    .as_array()
                    .filter(|p| p.len() == 2)
                    .ok_or_else(|| Error::Json("p term must be [doubled_exp, scalar]".into()))?;
                let e = pp[0]
                    .as_i64()
                    .ok_or_else(|| Error::Json("p exponent must be an integer".into()))?;
                out.add_term(d, e, &TScalar::from_json(&pp[1])?);
            }
        }
        Ok(out)
    }
}

/// Arithmetic through operators panics on mismatched orders; use the
/// `try_*` methods or [`series_arith`] where that is a recoverable error.
impl Add for &PQSeries {
    type Output = PQSeries;
    fn add(self, rhs: &PQSeries) -> PQSeries {
        self.try_add(rhs).expect("series orders must agree")
    }
}

impl Sub for &PQSeries {
    type Output = PQSeries;
    fn sub(self, rhs: &PQSeries) -> PQSeries {
        self.try_sub(rhs).expect("series orders must agree")
    }
}

impl Mul for &PQSeries {
    type Output = PQSeries;
    fn mul(self, rhs: &PQSeries) -> PQSeries {
        self.try_mul(rhs).expect("series orders must agree")
    }
}

impl Neg for &PQSeries {
    type Output = PQSeries;
    fn neg(self) -> PQSeries {
        self.neg_ref()
    }
}

fn fmt_exp2(e2: i64) -> String {
    if e2 % 2 == 0 {
        format!("{}", e2 / 2)
    } else {
        format!("({e2}/2)")
    }
}

impl fmt::Display for PQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, l) in &self.coeffs {
            for (e2, c) in l.terms() {
                let mut vars = Vec::new();
                match *e2 {
                    0 => {}
                    2 => vars.push("p".to_string()),
                    _ => vars.push(format!("p^{}", fmt_exp2(*e2))),
                }
                match *d {
                    0 => {}
                    1 => vars.push("q".to_string()),
                    _ => vars.push(format!("q^{d}")),
                }
                let vars = vars.join("*");
                let (neg, body) = match c.as_rational() {
                    Some(r) => {
                        let mag = r.abs();
                        let coeff = if mag.is_one() && !vars.is_empty() {
                            String::new()
                        } else if mag.is_integer() || vars.is_empty() {
                            mag.to_string()
                        } else {
                            format!("{mag}*")
                        };
                        (r.is_negative(), format!("{coeff}{vars}"))
                    }
                    None => {
                        let sep = if vars.is_empty() { "" } else { "*" };
                        (false, format!("({c}){sep}{vars}"))
                    }
                };
                if first {
                    write!(f, "{}{body}", if neg { "-" } else { "" })?;
                } else {
                    write!(f, " {} {body}", if neg { "-" } else { "+" })?;
                }
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Expansion in `z` whose coefficients are `q`-series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZSeries {
    q_order: u32,
    z_order: i64,
    pole_order: u32,
    coeffs: BTreeMap<i64, PQSeries>,
}

impl ZSeries {
    pub fn zero(q_order: u32, z_order: i64, pole_order: u32) -> Self {
        assert!(pole_order <= 1, "only simple poles are supported");
        Self { q_order, z_order, pole_order, coeffs: BTreeMap::new() }
    }

    pub fn q_order(&self) -> u32 {
        self.q_order
    }

    pub fn z_order(&self) -> i64 {
        self.z_order
    }

    pub fn pole_order(&self) -> u32 {
        self.pole_order
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, PQSeries> {
        &self.coeffs
    }

    pub fn coeff(&self, j: i64) -> PQSeries {
        self.coeffs.get(&j).cloned().unwrap_or_else(|| PQSeries::zero(self.q_order))
    }

    pub fn add_term(&mut self, j: i64, d: u32, c: &TScalar) {
        let mut s = PQSeries::zero(self.q_order);
        s.add_term(d, 0, c);
        self.add_series(j, &s);
    }

    /// Add `s * z^j`. A `z^{-1}` term is only allowed with a pole.
    pub fn add_series(&mut self, j: i64, s: &PQSeries) {
        assert!(j >= -(self.pole_order as i64), "pole part needs pole_order 1");
        if j > self.z_order {
            return;
        }
        let slot = self
            .coeffs
            .entry(j)
            .or_insert_with(|| PQSeries::zero(self.q_order));
        *slot = &*slot + s;
        if slot.is_zero() {
            self.coeffs.remove(&j);
        }
    }

    /// Attach the simple pole `c / z`.
    pub fn with_pole(mut self, c: TScalar) -> Self {
        self.pole_order = 1;
        self.add_series(-1, &PQSeries::constant(self.q_order, c));
        self
    }

    pub fn try_add(&self, other: &ZSeries) -> Result<ZSeries> {
        if self.q_order != other.q_order {
            return Err(Error::TruncationMismatch(self.q_order, other.q_order));
        }
        let mut out = ZSeries::zero(
            self.q_order,
            self.z_order.min(other.z_order),
            self.pole_order.max(other.pole_order),
        );
        for (j, s) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_series(*j, s);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64) -> TScalar {
        TScalar::from_int(n)
    }

    fn poly(q_order: u32, terms: &[(u32, i64, i64)]) -> PQSeries {
        let mut s = PQSeries::zero(q_order);
        for &(d, e2, c) in terms {
            s.add_term(d, e2, &r(c));
        }
        s
    }

    #[test]
    fn telescoping_product() {
        let n = 6;
        let a = poly(0, &[(0, 0, 1), (0, 2, -1)]);
        let geo = poly(0, &(0..=n).map(|k| (0, 2 * k, 1)).collect::<Vec<_>>());
        assert_eq!(&a * &geo, poly(0, &[(0, 0, 1), (0, 2 * n + 2, -1)]));
    }

    #[test]
    fn truncates_in_q() {
        let q = poly(1, &[(1, 0, 1)]);
        assert!((&q * &q).is_zero());
    }

    #[test]
    fn half_integers_combine() {
        let s = poly(0, &[(0, 1, 1), (0, -1, -1)]);
        assert_eq!(&s * &s, poly(0, &[(0, 2, 1), (0, 0, -2), (0, -2, 1)]));
    }

    #[test]
    fn mismatched_orders_error() {
        let a = PQSeries::one(2);
        let b = PQSeries::one(3);
        assert_eq!(a.try_add(&b), Err(Error::TruncationMismatch(2, 3)));
        assert!(series_arith(SeriesOp::Mul, &a, SeriesOperand::Series(&b)).is_err());
    }

    #[test]
    fn mercator_series() {
        let s = poly(0, &[(0, 0, 1), (0, 2, -1)]).log(4).unwrap();
        let mut want = PQSeries::zero(0);
        for k in 1..=4 {
            want.add_term(0, 2 * k, &TScalar::from_rational(rat(-1, k)));
        }
        assert_eq!(s, want);
    }

    #[test]
    fn log_is_additive() {
        let a = poly(3, &[(0, 0, 1), (1, 0, -1)]);
        let b = poly(3, &[(0, 0, 1), (1, 2, -1)]);
        let lhs = (&a * &b).log(5).unwrap();
        let rhs = &a.log(5).unwrap() + &b.log(5).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn log_combination_coefficients() {
        let one_minus_p = poly(0, &[(0, 0, 1), (0, 2, -1)]);
        let one_minus_p2 = poly(0, &[(0, 0, 1), (0, 4, -1)]);
        let s = (&one_minus_p.log(12).unwrap() - &one_minus_p2.log(12).unwrap())
            .scale(&r(8));
        for k in 1..=12i64 {
            let want = if k % 2 == 1 { rat(-8, k) } else { rat(8, k) };
            assert_eq!(s.at(0, 2 * k), TScalar::from_rational(want));
        }
    }

    #[test]
    fn log_rejects_bad_input() {
        assert!(matches!(poly(0, &[(0, 0, 2)]).log(3), Err(Error::LogConstantTerm(_))));
        assert_eq!(
            poly(1, &[(0, 0, 1), (0, -2, 1)]).log(3),
            Err(Error::NonPositiveLeadingExponent(-2))
        );
        assert_eq!(poly(1, &[(0, 0, 1)]).exp(3), Err(Error::ExpConstantTerm));
    }

    #[test]
    fn exp_round_trips() {
        assert_eq!(PQSeries::zero(3).exp(2).unwrap(), PQSeries::one(3));
        let a = poly(4, &[(0, 0, 1), (1, 0, -1)]);
        assert_eq!(a.log(0).unwrap().exp(0).unwrap(), a);
    }

    #[test]
    fn euler_product_from_exp() {
        let q_order = 7;
        let mut s = PQSeries::zero(q_order);
        for d in 1..=q_order {
            let sigma: i64 = (1..=d).filter(|k| d % k == 0).map(|k| k as i64).sum();
            s.add_term(d, 0, &TScalar::from_rational(rat(-2 * sigma, d as i64)));
        }
        let e = s.exp(0).unwrap();
        let want = [1, -2, -1, 2, 1, 2, -2, 0];
        for (d, w) in want.iter().enumerate() {
            assert_eq!(e.at(d as u32, 0), r(*w), "q^{d}");
        }
    }

    #[test]
    fn derivatives() {
        let s = poly(4, &[(3, 2, 1)]);
        assert_eq!(s.derive(Var::Q), poly(4, &[(3, 2, 3)]));
        let h = poly(0, &[(0, 1, 1)]);
        assert_eq!(
            h.derive(Var::P),
            PQSeries::monomial(0, 0, 1, TScalar::from_rational(rat(1, 2)))
        );
    }

    #[test]
    fn dilations() {
        let a = poly(2, &[(0, 2, 1), (0, -2, -1)]);
        assert_eq!(a.dilate(1, -1), poly(2, &[(0, -2, 1), (0, 2, -1)]));
        assert_eq!(poly(6, &[(1, 0, 1)]).dilate(3, 1), poly(6, &[(3, 0, 1)]));
        assert!(poly(2, &[(1, 0, 1)]).dilate(3, 1).is_zero());
    }

    #[test]
    fn sinh_expansion() {
        let z = poly(0, &[(0, 1, 1), (0, -1, -1)]).to_z(5);
        assert_eq!(z.coeff(0), PQSeries::zero(0));
        assert_eq!(z.coeff(1), PQSeries::one(0));
        assert_eq!(z.coeff(2), PQSeries::zero(0));
        assert_eq!(z.coeff(3), PQSeries::constant(0, TScalar::from_rational(rat(1, 24))));
        assert_eq!(z.coeff(5), PQSeries::constant(0, TScalar::from_rational(rat(1, 1920))));
        let c = PQSeries::one(0).to_z(3);
        assert_eq!(c.coeffs().len(), 1);
    }

    #[test]
    fn display_and_json() {
        let s = poly(4, &[(0, 0, 0), (1, 0, 1), (2, 0, 3)])
            .try_add(&PQSeries::constant(4, TScalar::from_rational(rat(-1, 24))))
            .unwrap();
        assert_eq!(s.to_string(), "-1/24 + q + 3q^2");
        let back = PQSeries::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert_eq!(
            serde_json::to_string(&back.to_json()).unwrap(),
            serde_json::to_string(&s.to_json()).unwrap()
        );
    }

    fn arb_series(q_order: u32) -> impl Strategy<Value = PQSeries> {
        proptest::collection::vec((0u32..=q_order, -6i64..7, -5i64..6), 0..8).prop_map(
            move |v| {
                let mut s = PQSeries::zero(q_order);
                for (d, e2, c) in v {
                    s.add_term(d, e2, &TScalar::from_int(c));
                }
                s
            },
        )
    }

    fn arb_log_input(q_order: u32) -> impl Strategy<Value = PQSeries> {
        (
            proptest::collection::vec((1i64..4, -3i64..4), 0..3),
            proptest::collection::vec((1u32..=q_order, -4i64..5, -3i64..4), 0..4),
        )
            .prop_map(move |(lead, rest)| {
                let mut s = PQSeries::one(q_order);
                for (e, c) in lead {
                    s.add_term(0, 2 * e, &TScalar::from_int(c));
                }
                for (d, e, c) in rest {
                    s.add_term(d, 2 * e, &TScalar::from_int(c));
                }
                s
            })
    }

    proptest! {
        #[test]
        fn leibniz_rule(a in arb_series(4), b in arb_series(4)) {
            for var in [Var::Q, Var::P] {
                let lhs = (&a * &b).derive(var);
                let rhs = &(&a.derive(var) * &b) + &(&a * &b.derive(var));
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn dilation_is_multiplicative(a in arb_series(6), b in arb_series(6), mq in 1u32..3, mp in -2i64..3) {
            prop_assume!(mp != 0);
            prop_assert_eq!((&a * &b).dilate(mq, mp), &a.dilate(mq, mp) * &b.dilate(mq, mp));
        }

        #[test]
        fn log_exp_inverse(a in arb_log_input(3)) {
            // exp needs the log's tail beyond the window: q-degree 3 times
            // the deepest negative exponent 4
            let w = 6;
            let back = a.log(w + 12).unwrap().exp(w).unwrap();
            prop_assert_eq!(back, a.truncate_p(2 * w));
        }

        #[test]
        fn json_round_trip(a in arb_series(5)) {
            prop_assert_eq!(PQSeries::from_json(&a.to_json()).unwrap(), a);
        }

        #[test]
        fn even_products_are_integral(bs in proptest::collection::vec(-4i64..5, 1..4)) {
            // prod (p^{b/2} - p^{-b/2}) over a tuple and its negation sums to integer exponents
            let mut acc = LaurentP::constant(TScalar::one());
            for b in bs.iter().chain(bs.iter()) {
                let f = LaurentP::from_terms([(*b, TScalar::one()), (-*b, TScalar::from_int(-1))]);
                acc = &acc * &f;
            }
            prop_assert!(acc.is_integral());
        }
    }
}
