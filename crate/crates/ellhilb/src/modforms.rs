//! Bernoulli numbers, Eisenstein series, the theta function and the
//! quasi-Jacobi generators `A_n`, plus a fitter expressing a series in the
//! ring they generate.
//!
//! Bernoulli numbers use the generating function `(z/2)(e^z+1)/(e^z-1)`,
//! so `B_1 = 0` and all other values are the classical ones.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use crate::algebra::{int, rat, Rational, TScalar};
use crate::error::{Error, Result};
use crate::linalg::{self, Solution};
use crate::series::{LaurentP, PQSeries, Var, ZSeries};

pub fn binomial(n: u64, k: u64) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut r = Rational::one();
    for i in 0..k {
        r = r * int((n - i) as i64) / int((i + 1) as i64);
    }
    r
}

pub fn factorial(n: u64) -> Rational {
    (1..=n).fold(Rational::one(), |acc, i| acc * int(i as i64))
}

/// `B_n` with the convention `B_1 = 0`.
pub fn bernoulli(n: u32) -> Rational {
    // classical recurrence sum_{k<=m} C(m+1, k) B_k = 0, then reset B_1
    let mut b: Vec<Rational> = vec![Rational::one()];
    for m in 1..=n as u64 {
        let mut s = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += binomial(m + 1, k as u64) * bk;
        }
        b.push(-s / int((m + 1) as i64));
    }
    if n == 1 {
        Rational::zero()
    } else {
        b[n as usize].clone()
    }
}

fn divisor_power_sum(n: u32, power: u32) -> Rational {
    let mut s = Rational::zero();
    for d in 1..=n {
        if n % d == 0 {
            s += int((d as i64).pow(power));
        }
    }
    s
}

/// `G_k = -B_k/(2k) + sum_n sigma_{k-1}(n) q^n` for even `k >= 2`.
pub fn eisenstein(k: u32, q_order: u32) -> Result<PQSeries> {
    eisenstein_with(k, q_order, false)
}

/// As [`eisenstein`]; with `odd_is_zero` an odd `k` yields the zero series
/// instead of an error.
pub fn eisenstein_with(k: u32, q_order: u32, odd_is_zero: bool) -> Result<PQSeries> {
    if k % 2 == 1 && odd_is_zero {
        return Ok(PQSeries::zero(q_order));
    }
    if k % 2 == 1 || k < 2 {
        return Err(Error::InvalidArgument(format!(
            "Eisenstein series needs even weight >= 2, got {k}"
        )));
    }
    let mut g = PQSeries::constant(q_order, (-bernoulli(k) / int(2 * k as i64)).into());
    for n in 1..=q_order {
        g.add_term(n, 0, &divisor_power_sum(n, k - 1).into());
    }
    Ok(g)
}

/// `(q d/dq)^m G_k`, with odd `k` giving zero.
fn eisenstein_derivative(k: u32, m: u32, q_order: u32) -> PQSeries {
    let mut g = eisenstein_with(k, q_order, true).expect("odd weights map to zero");
    for _ in 0..m {
        g = g.derive(Var::Q);
    }
    g
}

/// The normalized theta function
/// `(p^{1/2} - p^{-1/2}) prod_m (1 - p q^m)(1 - p^{-1} q^m)/(1 - q^m)^2`.
/// Every `q`-coefficient is a Laurent polynomial, so no `p` window is needed.
pub fn theta(q_order: u32) -> PQSeries {
    let one = TScalar::one();
    let mone = TScalar::from_int(-1);
    let mut acc = PQSeries::from_laurent(
        q_order,
        LaurentP::from_terms([(1, one.clone()), (-1, mone.clone())]),
    );
    for m in 1..=q_order {
        let mut factor = PQSeries::one(q_order);
        factor.add_term(m, 2, &mone);
        factor.add_term(m, -2, &mone);
        if 2 * m <= q_order {
            factor.add_term(2 * m, 0, &one);
        }
        acc = &acc * &factor;
        // 1/(1 - q^m)^2 = sum_j (j + 1) q^{mj}
        let mut inv = PQSeries::zero(q_order);
        let mut j = 0;
        while m * j <= q_order {
            inv.add_term(m * j, 0, &TScalar::from_int(j as i64 + 1));
            j += 1;
        }
        acc = &acc * &inv;
    }
    acc
}

/// Ascending expansion of `(1/2)(p+1)/(p-1) = -1/2 - p - p^2 - ...` up to `p^window`.
pub fn a1_rational_term(window: i64) -> LaurentP {
    let mut l = LaurentP::constant(TScalar::from_rational(rat(-1, 2)));
    for e in 1..=window {
        l.add_term(2 * e, &TScalar::from_int(-1));
    }
    l
}

/// Fourier expansion of `A_n`. For `n = 1` the rational term is expanded
/// ascending up to `p^{p_window}`; all other coefficients are exact.
pub fn jacobi_a_fourier(n: u32, q_order: u32, p_window: i64) -> Result<PQSeries> {
    if n < 1 {
        return Err(Error::InvalidArgument("A_n needs n >= 1".into()));
    }
    let mut a = PQSeries::constant(q_order, (bernoulli(n) / int(n as i64)).into());
    if n == 1 {
        a = &a + &PQSeries::from_laurent(q_order, a1_rational_term(p_window));
    }
    let sign = if n % 2 == 0 { 1 } else { -1 };
    for k in 1..=q_order {
        for d in 1..=q_order / k {
            let w = -(d as i64).pow(n - 1);
            a.add_term(k * d, 2 * k as i64, &TScalar::from_int(w));
            a.add_term(k * d, -2 * k as i64, &TScalar::from_int(sign * w));
        }
    }
    Ok(a)
}

/// `A_r` evaluated at `p^s`.
///
/// For `s = 0` this is the `z -> 0` value: `B_r/r - 2 sum d^{r-1} q^{kd}`
/// for even `r` and `0` for odd `r >= 3`; `r = 1` has a pole there and is
/// rejected. For `r = 1` and `s < 0` the ascending expansion of
/// `-A_1(p^{-s})` is returned, which is the same function.
pub fn jacobi_a_at(r: u32, s: i64, q_order: u32, p_window: i64) -> Result<PQSeries> {
    if s == 0 {
        return match r {
            1 => Err(Error::InvalidArgument("A_1 has a pole at p = 1".into())),
            _ if r % 2 == 1 => Ok(PQSeries::zero(q_order)),
            _ => {
                let mut a = PQSeries::constant(q_order, (bernoulli(r) / int(r as i64)).into());
                for k in 1..=q_order {
                    for d in 1..=q_order / k {
                        a.add_term(k * d, 0, &TScalar::from_int(-2 * (d as i64).pow(r - 1)));
                    }
                }
                Ok(a)
            }
        };
    }
    let base_window = if r == 1 { (p_window + s.abs() - 1) / s.abs() } else { 0 };
    let base = jacobi_a_fourier(r, q_order, base_window)?;
    if r == 1 && s < 0 {
        Ok((-&base.dilate(1, -s)).truncate_p(2 * p_window))
    } else if r == 1 {
        Ok(base.dilate(1, s).truncate_p(2 * p_window))
    } else {
        Ok(base.dilate(1, s))
    }
}

/// The Fourier expansion of `A_n` rewritten in `z` with `p = e^z`. For
/// `n = 1` the rational term `(1/2)(p+1)/(p-1)` is replaced by its Laurent
/// expansion `1/z + Σ_{m≥1} B_{2m} z^{2m-1}/(2m)!` instead of the ascending
/// `p`-series.
pub fn jacobi_a_fourier_in_z(n: u32, q_order: u32, z_order: i64) -> Result<ZSeries> {
    let mut f = jacobi_a_fourier(n, q_order, 0)?;
    if n == 1 {
        f = &f - &PQSeries::from_laurent(q_order, a1_rational_term(0));
    }
    let mut z = f.to_z(z_order);
    if n == 1 {
        z = z.with_pole(TScalar::one());
        let mut m = 1u32;
        while 2 * m as i64 - 1 <= z_order {
            let c = bernoulli(2 * m) / factorial(2 * m as u64);
            z.add_series(2 * m as i64 - 1, &PQSeries::constant(q_order, c.into()));
            m += 1;
        }
    }
    Ok(z)
}

/// Taylor expansion of `A_n` in `z` with `p = e^z`.
pub fn jacobi_a_taylor(n: u32, q_order: u32, z_order: i64) -> Result<ZSeries> {
    if n < 1 {
        return Err(Error::InvalidArgument("A_n needs n >= 1".into()));
    }
    let mut out = ZSeries::zero(q_order, z_order, 0);
    if n == 1 {
        out = out.with_pole(TScalar::one());
    }
    let minus_two = int(-2);
    for m in 0..n.saturating_sub(1) {
        let term = eisenstein_derivative(n - m, m, q_order)
            .scale_rational(&(&minus_two / factorial(m as u64)));
        out.add_series(m as i64, &term);
    }
    let mut g = 1u32;
    while (2 * g + n) as i64 - 2 <= z_order {
        let e = 2 * g + n - 2;
        let term = eisenstein_derivative(2 * g, n - 1, q_order)
            .scale_rational(&(&minus_two / factorial(e as u64)));
        out.add_series(e as i64, &term);
        g += 1;
    }
    Ok(out)
}

/// A generator of the fitting ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// `A_r(p^s)`
    A { r: u32, s: i64 },
    /// `G_k`
    G(u32),
}

impl Generator {
    pub fn weight(&self) -> u32 {
        match self {
            Generator::A { r, .. } => *r,
            Generator::G(k) => *k,
        }
    }

    fn series(&self, q_order: u32, p_window: i64) -> Result<PQSeries> {
        match self {
            Generator::A { r, s } => jacobi_a_at(*r, *s, q_order, p_window),
            Generator::G(k) => eisenstein(*k, q_order),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::A { r, s: 1 } => write!(f, "A_{r}"),
            Generator::A { r, s } => write!(f, "A_{r}(p^{s})"),
            Generator::G(k) => write!(f, "G_{k}"),
        }
    }
}

/// A product of generators, stored as a sorted multiset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<Generator>);

impl Monomial {
    pub fn weight(&self) -> u32 {
        self.0.iter().map(Generator::weight).sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            let e = j - i;
            parts.push(if e == 1 { self.0[i].to_string() } else { format!("{}^{e}", self.0[i]) });
            i = j;
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Monomials in `A_1..A_3` at `p^s` (`1 <= s <= dilation_bound`), `G_2`
/// and `G_4`, of weight at most `weight_bound`, in graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QJacMonomialBasis {
    pub weight_bound: u32,
    pub dilation_bound: i64,
    pub monomials: Vec<Monomial>,
}

impl QJacMonomialBasis {
    pub fn new(weight_bound: u32, dilation_bound: i64) -> Self {
        let mut gens = Vec::new();
        for s in 1..=dilation_bound {
            for r in 1..=3 {
                gens.push(Generator::A { r, s });
            }
        }
        gens.push(Generator::G(2));
        gens.push(Generator::G(4));
        gens.sort();
        Self::from_generators(&gens, weight_bound, dilation_bound)
    }

    /// All monomials in the given generators with weight `<= weight_bound`.
    pub fn from_generators(gens: &[Generator], weight_bound: u32, dilation_bound: i64) -> Self {
        let mut by_weight: BTreeMap<u32, Vec<Vec<usize>>> = BTreeMap::new();
        fn rec(
            gens: &[Generator],
            start: usize,
            cur: &mut Vec<usize>,
            w: u32,
            bound: u32,
            out: &mut BTreeMap<u32, Vec<Vec<usize>>>,
        ) {
            out.entry(w).or_default().push(cur.clone());
            for i in start..gens.len() {
                let gw = gens[i].weight();
                if w + gw <= bound {
                    cur.push(i);
                    rec(gens, i, cur, w + gw, bound, out);
                    cur.pop();
                }
            }
        }
        rec(gens, 0, &mut Vec::new(), 0, weight_bound, &mut by_weight);
        let mut monomials = Vec::new();
        for (_, mut list) in by_weight {
            list.sort();
            monomials.extend(
                list.into_iter()
                    .map(|idx| Monomial(idx.into_iter().map(|i| gens[i]).collect())),
            );
        }
        Self { weight_bound, dilation_bound, monomials }
    }
}

/// Result of a fit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FitOutcome {
    /// Nonzero coefficients, in basis order, and the number of coefficients
    /// whose residual was checked to vanish.
    Fit { coeffs: Vec<(Monomial, Rational)>, checked: usize },
    NoSolution { equations: usize, rank: usize },
}

/// Express `target` as a combination of `basis` on the window `q <= q_order`,
/// `p <= p_window`.
///
/// Generators are evaluated on a widened `p` window so that products stay
/// exact below `p_window`. When the basis is dependent on the window the
/// solution with free variables zero is returned, which is supported on the
/// graded-lex earliest independent monomials.
pub fn qjac_fit(target: &PQSeries, basis: &QJacMonomialBasis, p_window: i64) -> Result<FitOutcome> {
    if !target.is_p_integral() {
        return Err(Error::InvalidArgument("fit target must have integral p-exponents".into()));
    }
    let q_order = target.q_order();
    let wide = p_window + 2 * q_order as i64 * basis.dilation_bound.max(1);
    let mut cache: BTreeMap<Generator, PQSeries> = BTreeMap::new();
    let mut columns = Vec::with_capacity(basis.monomials.len());
    for m in &basis.monomials {
        let mut acc = PQSeries::one(q_order);
        for g in &m.0 {
            if !cache.contains_key(g) {
                cache.insert(*g, g.series(q_order, wide)?.truncate_p(2 * wide));
            }
            acc = acc.mul_cut(&cache[g], Some(2 * wide));
        }
        columns.push(acc.truncate_p(2 * p_window));
    }
    let target = target.truncate_p(2 * p_window);
    let mut keys = std::collections::BTreeSet::new();
    for s in columns.iter().chain(std::iter::once(&target)) {
        for (d, l) in s.coeffs() {
            for e in l.terms().keys() {
                keys.insert((*d, *e));
            }
        }
    }
    let n = columns.len();
    if keys.len() < n {
        return Err(Error::Underdetermined { equations: keys.len(), unknowns: n });
    }
    let as_rat = |t: TScalar| -> Result<Rational> {
        t.as_rational()
            .ok_or_else(|| Error::InvalidArgument("fit needs t-free coefficients".into()))
    };
    let mut a = Vec::with_capacity(keys.len());
    let mut b = Vec::with_capacity(keys.len());
    for &(d, e) in &keys {
        let mut row = Vec::with_capacity(n);
        for c in &columns {
            row.push(as_rat(c.at(d, e))?);
        }
        a.push(row);
        b.push(as_rat(target.at(d, e))?);
    }
    match linalg::solve(&a, &b, n) {
        Solution::Inconsistent { rank } => Ok(FitOutcome::NoSolution { equations: keys.len(), rank }),
        Solution::Solved { x, .. } => {
            let mut recon = PQSeries::zero(q_order);
            for (c, col) in x.iter().zip(&columns) {
                if !c.is_zero() {
                    recon = &recon + &col.scale_rational(c);
                }
            }
            assert_eq!(recon, target, "fit residual must vanish");
            let coeffs = basis
                .monomials
                .iter()
                .zip(x)
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m.clone(), c))
                .collect();
            Ok(FitOutcome::Fit { coeffs, checked: keys.len() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> TScalar {
        TScalar::from_rational(rat(n, d))
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), int(0));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        for n in [3, 5, 7, 9, 11] {
            assert!(bernoulli(n).is_zero());
        }
    }

    #[test]
    fn eisenstein_expansions() {
        let g2 = eisenstein(2, 4).unwrap();
        let want = [r(-1, 24), r(1, 1), r(3, 1), r(4, 1), r(7, 1)];
        for (d, w) in want.iter().enumerate() {
            assert_eq!(&g2.at(d as u32, 0), w);
        }
        let g4 = eisenstein(4, 2).unwrap();
        assert_eq!(g4.at(0, 0), r(1, 240));
        assert_eq!(g4.at(1, 0), r(1, 1));
        assert_eq!(g4.at(2, 0), r(9, 1));
        assert!(eisenstein(3, 4).is_err());
        assert!(eisenstein_with(3, 4, true).unwrap().is_zero());
        assert_eq!(g2.derive(Var::Q).at(2, 0), r(6, 1));
    }

    #[test]
    fn theta_leading_coefficients() {
        let th = theta(3);
        let half = LaurentP::from_terms([(1, r(1, 1)), (-1, r(-1, 1))]);
        assert_eq!(th.coeff(0), half);
        let cube = &(&half * &half) * &half;
        assert_eq!(th.coeff(1), -&cube);
    }

    #[test]
    fn fourier_coefficients() {
        let a2 = jacobi_a_fourier(2, 3, 0).unwrap();
        assert_eq!(a2.at(0, 0), r(1, 12));
        assert_eq!(a2.coeff(1), LaurentP::from_terms([(2, r(-1, 1)), (-2, r(-1, 1))]));
        assert_eq!(
            PQSeries::from_laurent(3, a2.coeff(1)).dilate(1, 2).coeff(0),
            LaurentP::from_terms([(4, r(-1, 1)), (-4, r(-1, 1))])
        );
        let a1 = jacobi_a_fourier(1, 2, 3).unwrap();
        assert_eq!(a1.coeff(1), LaurentP::from_terms([(2, r(-1, 1)), (-2, r(1, 1))]));
        assert_eq!(
            a1.coeff(0),
            LaurentP::from_terms([(0, r(-1, 2)), (2, r(-1, 1)), (4, r(-1, 1)), (6, r(-1, 1))])
        );
        let a3 = jacobi_a_fourier(3, 2, 0).unwrap();
        assert_eq!(
            a3.coeff(2),
            LaurentP::from_terms([(4, r(-1, 1)), (-4, r(1, 1)), (2, r(-4, 1)), (-2, r(4, 1))])
        );
        assert!(jacobi_a_fourier(0, 2, 0).is_err());
    }

    #[test]
    fn taylor_coefficients() {
        let a1 = jacobi_a_taylor(1, 4, 5).unwrap();
        assert_eq!(a1.pole_order(), 1);
        assert_eq!(a1.coeff(-1), PQSeries::one(4));
        let g2 = eisenstein(2, 4).unwrap();
        assert_eq!(a1.coeff(1), g2.scale_rational(&int(-2)));
        let a2 = jacobi_a_taylor(2, 4, 5).unwrap();
        assert_eq!(a2.pole_order(), 0);
        assert_eq!(a2.coeff(0), g2.scale_rational(&int(-2)));
    }

    #[test]
    fn sinh_of_first_coefficient() {
        let a1 = jacobi_a_fourier(1, 1, 0).unwrap();
        let z = PQSeries::from_laurent(0, a1.coeff(1)).to_z(3);
        assert_eq!(z.coeff(1), PQSeries::constant(0, r(-2, 1)));
        assert_eq!(z.coeff(3), PQSeries::constant(0, r(-1, 3)));
    }

    #[test]
    fn parity_under_inversion() {
        for n in 2..=5 {
            let a = jacobi_a_fourier(n, 5, 0).unwrap();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(a.dilate(1, -1), a.scale(&TScalar::from_int(sign)));
        }
        let a1 = jacobi_a_fourier(1, 5, 0).unwrap().drop_below_q(1);
        assert_eq!(a1.dilate(1, -1), -&a1);
    }

    #[test]
    fn fourier_matches_taylor() {
        for n in 1..=4 {
            let f = jacobi_a_fourier_in_z(n, 4, 6).unwrap();
            let t = jacobi_a_taylor(n, 4, 6).unwrap();
            assert_eq!(f, t, "n = {n}");
        }
    }

    #[test]
    fn differential_equation() {
        for n in 1..=5 {
            let lhs = jacobi_a_fourier(n, 6, 8).unwrap().derive(Var::Q);
            let rhs = jacobi_a_fourier(n + 1, 6, 8).unwrap().derive(Var::P);
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn theta_log_derivative_is_a1() {
        let (q, w) = (5, 10);
        // Theta = -p^{-1/2} (1 - p) U with U = 1 + O(q); log of the rest
        let mut shift = PQSeries::zero(q);
        for (d, l) in theta(q).coeffs() {
            for (e, c) in l.terms() {
                shift.add_term(*d, e + 1, &(-c));
            }
        }
        let wide = w + 2 * q as i64;
        let lhs = shift.log(wide).unwrap().derive(Var::P);
        let lhs = (&lhs + &PQSeries::constant(q, r(-1, 2))).truncate_p(2 * w);
        assert_eq!(lhs, jacobi_a_fourier(1, q, w).unwrap().truncate_p(2 * w));
    }

    #[test]
    fn basis_enumeration() {
        let b = QJacMonomialBasis::new(2, 1);
        let names: Vec<String> = b.monomials.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["1", "A_1", "A_1^2", "A_2", "G_2"]);
        let b = QJacMonomialBasis::new(6, 2);
        let mut seen = std::collections::HashSet::new();
        assert!(b.monomials.iter().all(|m| seen.insert(m.clone())));
        assert!(b.monomials.windows(2).all(|w| w[0].weight() <= w[1].weight()));
    }

    #[test]
    fn identity_fit() {
        let basis = QJacMonomialBasis::from_generators(
            &[Generator::A { r: 1, s: 1 }, Generator::G(2)],
            1,
            1,
        );
        let target = jacobi_a_fourier(1, 4, 12).unwrap().truncate_p(16);
        match qjac_fit(&target, &basis, 8).unwrap() {
            FitOutcome::Fit { coeffs, .. } => {
                assert_eq!(coeffs.len(), 1);
                assert_eq!(coeffs[0].0.to_string(), "A_1");
                assert_eq!(coeffs[0].1, int(1));
            }
            other => panic!("no fit: {other:?}"),
        }
    }

    fn assert_fits(target: &PQSeries, basis: &QJacMonomialBasis, window: i64) -> Vec<String> {
        match qjac_fit(target, basis, window).unwrap() {
            FitOutcome::Fit { coeffs, .. } => {
                coeffs.iter().map(|(m, c)| format!("{c}*{m}")).collect()
            }
            other => panic!("no fit: {other:?}"),
        }
    }

    #[test]
    fn derivatives_stay_in_the_ring() {
        let (q, w) = (5, 10);
        let a1 = jacobi_a_fourier(1, q, w + 2 * q as i64).unwrap();
        let dz = a1.derive(Var::P).truncate_p(2 * w);
        let fit = assert_fits(&dz, &QJacMonomialBasis::new(2, 1), w);
        assert!(fit.iter().any(|t| t.ends_with("A_1^2")), "{fit:?}");
        let dq = a1.derive(Var::Q).truncate_p(2 * w);
        assert_fits(&dq, &QJacMonomialBasis::new(3, 1), w);
    }

    #[test]
    fn fit_reports_underdetermined() {
        let basis = QJacMonomialBasis::new(6, 2);
        let target = PQSeries::one(0);
        assert!(matches!(qjac_fit(&target, &basis, 0), Err(Error::Underdetermined { .. })));
    }
}
