//! Text expressions for cohomology classes of `S^[n]`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := [rational ['*']] atom
//! atom   := pair+ | 'unit' | 'pointclass' | 'W' | 'delta' | 'D(' name ')'
//!         | 'cup(' divisor ',' expr ')'
//! pair   := '(' part ',' name ')'
//! divisor:= 'delta' | 'D(' name ')'
//! ```
//!
//! A run of pairs denotes the weighted partition class
//! `(1/Πλ_i) q_{λ_1}(δ_1)…v`. Class names are basis names of the surface or
//! one of `one`, `f`, `sigma`, `point`, `K`, `c1`.

use crate::algebra::{Rational, TScalar};
use crate::error::{Error, Result};
use crate::fock::{divisor_class, partition_class, point_class, unit_class, FockVector, WeightedPartition};
use crate::hilbop::{lehn_delta, lehn_divisor, w_cycle};
use crate::surface::{basis_class, Class, SurfaceModel};

/// Parse and evaluate `src` as a class on `S^[n]`.
pub fn parse_class_expr(s: &SurfaceModel, n: u32, src: &str) -> Result<FockVector> {
    let mut p = Parser { s, n, src: src.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    if let Some(l) = v.level() {
        if l != n {
            return Err(Error::LevelMismatch(l, n));
        }
    }
    Ok(v)
}

/// Resolve a class name on the surface.
pub fn named_class(s: &SurfaceModel, name: &str) -> Option<Class> {
    if let Some(i) = s.index_of(name) {
        return Some(basis_class(i));
    }
    let d = &s.classes;
    match name {
        "one" => Some(d.one.clone()),
        "f" => Some(d.f.clone()),
        "sigma" => Some(d.sigma.clone()),
        "point" => Some(d.point.clone()),
        "K" => Some(d.k.clone()),
        "c1" => Some(d.c1.clone()),
        _ => None,
    }
}

enum Div {
    Delta,
    Class(Class),
}

struct Parser<'a> {
    s: &'a SurfaceModel,
    n: u32,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse { pos: start, msg: "expected an integer".into() })
    }

    fn class_name(&mut self) -> Result<Class> {
        let at = {
            self.skip_ws();
            self.pos
        };
        let name = self.ident()?;
        named_class(self.s, &name).ok_or(Error::Parse { pos: at, msg: format!("unknown class '{name}'") })
    }

    fn expr(&mut self) -> Result<FockVector> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FockVector> {
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let num = self.integer()?;
            let mut r = Rational::from_integer(num.into());
            if self.peek() == Some(b'/') {
                self.pos += 1;
                let den = self.integer()?;
                if den == 0 {
                    return Err(self.err("zero denominator"));
                }
                r /= Rational::from_integer(den.into());
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
            return Ok(self.atom()?.scale(&TScalar::from_rational(r)));
        }
        self.atom()
    }

    fn divisor(&mut self) -> Result<Div> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.ident()?.as_str() {
            "delta" => Ok(Div::Delta),
            "D" => {
                self.expect(b'(')?;
                let c = self.class_name()?;
                self.expect(b')')?;
                Ok(Div::Class(c))
            }
            _ => Err(Error::Parse { pos: at, msg: "expected a divisor: delta or D(x)".into() }),
        }
    }

    fn pair(&mut self) -> Result<(u32, Class)> {
        self.expect(b'(')?;
        let at = {
            self.skip_ws();
            self.pos
        };
        let k = self.integer()?;
        if k < 1 {
            return Err(Error::Parse { pos: at, msg: "parts must be >= 1".into() });
        }
        self.expect(b',')?;
        let c = self.class_name()?;
        self.expect(b')')?;
        Ok((k as u32, c))
    }

    fn atom(&mut self) -> Result<FockVector> {
        let (s, n) = (self.s, self.n);
        if self.peek() == Some(b'(') {
            let mut pairs = vec![self.pair()?];
            while self.peek() == Some(b'(') {
                pairs.push(self.pair()?);
            }
            return partition_class(s, &WeightedPartition { pairs });
        }
        let at = self.pos;
        let name = self.ident()?;
        match name.as_str() {
            "unit" => Ok(unit_class(s, n)),
            "pointclass" => point_class(s, n),
            "W" => {
                if n != 2 {
                    return Err(Error::Parse { pos: at, msg: "W is only defined for n = 2".into() });
                }
                w_cycle(s)
            }
            "delta" => Ok(lehn_delta(s, n)?.apply(&unit_class(s, n))),
            "D" => {
                self.expect(b'(')?;
                let c = self.class_name()?;
                self.expect(b')')?;
                divisor_class(s, &c, n)
            }
            "cup" => {
                self.expect(b'(')?;
                let d = self.divisor()?;
                self.expect(b',')?;
                let rhs = self.expr()?;
                self.expect(b')')?;
                match d {
                    Div::Delta => Ok(lehn_delta(s, n)?.apply(&rhs)),
                    Div::Class(c) => Ok(lehn_divisor(s, &c, n)?.apply(&rhs)),
                }
            }
            other => Err(Error::Parse { pos: at, msg: format!("unknown macro '{other}'") }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::fock::apply_word;
    use crate::surface::builtin_surface;

    #[test]
    fn pairs_give_partition_classes() {
        let s = builtin_surface("p1xe").unwrap();
        let v = parse_class_expr(&s, 2, "(2,sigma)").unwrap();
        let raw = apply_word(&s, &[(2, s.index_of("sigma").unwrap())], &FockVector::vacuum());
        assert_eq!(v, raw.scale_rational(&rat(1, 2)));
        let u = parse_class_expr(&s, 2, "1/2 (1,1)(1,1)").unwrap();
        assert_eq!(u, unit_class(&s, 2));
        assert_eq!(parse_class_expr(&s, 2, "unit").unwrap(), u);
    }

    #[test]
    fn macros() {
        let s = builtin_surface("p1xe").unwrap();
        let sigma = named_class(&s, "sigma").unwrap();
        let w = w_cycle(&s).unwrap();
        let lhs = parse_class_expr(&s, 2, "cup(D(sigma), W)").unwrap();
        assert_eq!(lhs, lehn_divisor(&s, &sigma, 2).unwrap().apply(&w));
        assert_eq!(parse_class_expr(&s, 2, "D(sigma)").unwrap(), divisor_class(&s, &sigma, 2).unwrap());
        let d = parse_class_expr(&s, 2, "delta - delta").unwrap();
        assert!(d.is_zero());
        assert_eq!(parse_class_expr(&s, 3, "pointclass").unwrap(), point_class(&s, 3).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let s = builtin_surface("p1xe").unwrap();
        assert!(matches!(parse_class_expr(&s, 2, "(0,sigma)"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_class_expr(&s, 2, "(2,zeta)"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse_class_expr(&s, 2, "(2,sigma) x"), Err(Error::Parse { pos: 10, .. })));
        assert!(matches!(parse_class_expr(&s, 3, "(2,sigma)"), Err(Error::LevelMismatch(2, 3))));
        assert!(parse_class_expr(&s, 3, "W").is_err());
    }
}
