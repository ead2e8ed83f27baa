//! Exact scalars: big rationals and Laurent polynomials in the equivariant
//! parameter `t`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always normalized by `num`.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rational_to_json(r: &Rational) -> Value {
    json!({"n": r.numer().to_string(), "d": r.denom().to_string()})
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    let field = |k: &str| -> Result<BigInt> {
        let s = v
            .get(k)
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Json(format!("rational needs string field '{k}'")))?;
        s.parse::<BigInt>()
            .map_err(|e| Error::Json(format!("bad integer '{s}': {e}")))
    };
    let d = field("d")?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(field("n")?, d))
}

/// Laurent polynomial in `t` with rational coefficients. Zero coefficients
/// are never stored, so structural equality is mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TScalar {
    terms: BTreeMap<i64, Rational>,
}

impl TScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::monomial(r, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// `c * t^k`.
    pub fn monomial(c: Rational, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    /// `t^k`.
    pub fn t_pow(k: i64) -> Self {
        Self::monomial(Rational::one(), k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<i64, Rational> {
        &self.terms
    }

    pub fn coeff(&self, k: i64) -> Rational {
        self.terms.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// The rational value if this scalar has no `t`-dependence.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    /// The pair `(c, k)` if this scalar is the monomial `c t^k`.
    pub fn as_monomial(&self) -> Option<(Rational, i64)> {
        if self.terms.len() == 1 {
            let (k, c) = self.terms.iter().next().unwrap();
            Some((c.clone(), *k))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, k: i64, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Exact division; only monomial divisors are supported so that the
    /// coefficient domain stays a ring.
    pub fn checked_div(&self, other: &TScalar) -> Result<TScalar> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (c, k) = other.as_monomial().ok_or(Error::NonMonomialDivision)?;
        Ok(Self {
            terms: self.terms.iter().map(|(e, v)| (e - k, v / &c)).collect(),
        })
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(k, c)| json!([k, rational_to_json(c)]))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Json("scalar must be a list of [t_exp, rational]".into()))?;
        let mut out = Self::zero();
        for item in arr {
            let pair = item
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Json("scalar term must be [t_exp, rational]".into()))?;
            let k = pair[0]
                .as_i64()
                .ok_or_else(|| Error::Json("t exponent must be an integer".into()))?;
            out.add_term(k, &rational_from_json(&pair[1])?);
        }
        Ok(out)
    }
}

impl From<Rational> for TScalar {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for TScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl AddAssign<&TScalar> for TScalar {
    fn add_assign(&mut self, rhs: &TScalar) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c);
        }
    }
}

impl SubAssign<&TScalar> for TScalar {
    fn sub_assign(&mut self, rhs: &TScalar) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, &-c);
        }
    }
}

impl Add for &TScalar {
    type Output = TScalar;
    fn add(self, rhs: &TScalar) -> TScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &TScalar {
    type Output = TScalar;
    fn sub(self, rhs: &TScalar) -> TScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &TScalar {
    type Output = TScalar;
    fn mul(self, rhs: &TScalar) -> TScalar {
        let mut out = TScalar::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }
}

impl Neg for &TScalar {
    type Output = TScalar;
    fn neg(self) -> TScalar {
        TScalar {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for TScalar {
            type Output = TScalar;
            fn $m(self, rhs: TScalar) -> TScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for TScalar {
    type Output = TScalar;
    fn neg(self) -> TScalar {
        -&self
    }
}

impl fmt::Display for TScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match *k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if *k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Binary arithmetic as a single entry point, mirroring the CLI surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn scalar_arith(op: ArithOp, a: &TScalar, b: &TScalar) -> Result<TScalar> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

pub fn scalar_is_zero(a: &TScalar) -> bool {
    a.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ts(pairs: &[(i64, i64, i64)]) -> TScalar {
        let mut s = TScalar::zero();
        for &(k, n, d) in pairs {
            s.add_term(k, &rat(n, d));
        }
        s
    }

    #[test]
    fn adds_fractions() {
        let r = scalar_arith(ArithOp::Add, &rat(1, 2).into(), &rat(1, 3).into()).unwrap();
        assert_eq!(r, TScalar::from(rat(5, 6)));
    }

    #[test]
    fn divides_by_monomial() {
        let r = scalar_arith(ArithOp::Div, &TScalar::t_pow(2), &TScalar::t_pow(1)).unwrap();
        assert_eq!(r, TScalar::t_pow(1));
        let inv = TScalar::one().checked_div(&TScalar::monomial(rat(2, 1), 1)).unwrap();
        assert_eq!(inv, TScalar::monomial(rat(1, 2), -1));
    }

    #[test]
    fn canonical_class_squared() {
        let k = -TScalar::t_pow(1);
        assert_eq!(scalar_arith(ArithOp::Mul, &k, &k).unwrap(), TScalar::t_pow(2));
    }

    #[test]
    fn division_errors() {
        let two_terms = ts(&[(0, 1, 1), (1, 1, 1)]);
        assert_eq!(
            TScalar::one().checked_div(&two_terms),
            Err(Error::NonMonomialDivision)
        );
        assert_eq!(TScalar::one().checked_div(&TScalar::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn zero_detection() {
        assert!(scalar_is_zero(&TScalar::zero()));
        assert!(scalar_is_zero(&(&TScalar::t_pow(1) - &TScalar::t_pow(1))));
        assert!(!scalar_is_zero(&rat(1, 24).into()));
    }

    #[test]
    fn json_round_trip() {
        let s = ts(&[(-1, 3, 7), (2, -5, 2)]);
        assert_eq!(TScalar::from_json(&s.to_json()).unwrap(), s);
        let r = rat(-12, 30);
        assert_eq!(rational_to_json(&r), json!({"n": "-2", "d": "5"}));
    }

    fn arb_scalar() -> impl Strategy<Value = TScalar> {
        proptest::collection::vec((-3i64..4, -20i64..21, 1i64..9), 0..5)
            .prop_map(|v| ts(&v.iter().map(|&(k, n, d)| (k, n, d)).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&(&a - &b) + &b) == a);
        }

        #[test]
        fn normalization_idempotent(n in -1000i64..1000, d in 1i64..1000) {
            let r = rat(n, d);
            let again = Rational::new(r.numer().clone(), r.denom().clone());
            prop_assert_eq!(&again, &r);
            prop_assert!(r.denom().is_positive());
        }
    }
}
