//! Polynomial expressions in `theta`, `i` and named variables, with
//! rational coefficients and rational exponents on single variables.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exact_numbers::{AlgebraicNumber, ComplexScalar, NumberField, Rational};

/// Sparse polynomial: exponent vector ↦ coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub terms: BTreeMap<Vec<Rational>, ComplexScalar>,
    nvars: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprError(pub String);

impl std::fmt::Display for ExprError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn err<T>(msg: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError(msg.into()))
}

impl Expr {
    fn constant(c: ComplexScalar, nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![Rational::zero(); nvars], c);
        }
        Expr { terms, nvars }
    }

    fn var(field: &Arc<NumberField>, j: usize, nvars: usize) -> Self {
        let mut e = vec![Rational::zero(); nvars];
        e[j] = Rational::one();
        Expr { terms: BTreeMap::from([(e, ComplexScalar::one(field))]), nvars }
    }

    fn add(mut self, o: Expr) -> Self {
        for (k, v) in o.terms {
            let sum = match self.terms.remove(&k) {
                Some(a) => a.add(&v),
                None => v,
            };
            if !sum.is_zero() {
                self.terms.insert(k, sum);
            }
        }
        self
    }

    fn neg(mut self) -> Self {
        for v in self.terms.values_mut() {
            *v = v.neg();
        }
        self
    }

    fn mul(&self, o: &Expr) -> Self {
        let mut out = Expr { terms: BTreeMap::new(), nvars: self.nvars };
        for (ka, va) in &self.terms {
            for (kb, vb) in &o.terms {
                let k: Vec<Rational> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out = out.add(Expr { terms: BTreeMap::from([(k, va.mul(vb))]), nvars: self.nvars });
            }
        }
        out
    }

    /// The value if no variable occurs.
    pub fn as_constant(&self, field: &Arc<NumberField>) -> Option<ComplexScalar> {
        match self.terms.len() {
            0 => Some(ComplexScalar::zero(field)),
            1 => {
                let (k, v) = self.terms.iter().next()?;
                k.iter().all(Zero::is_zero).then(|| v.clone())
            }
            _ => None,
        }
    }

    fn pow(&self, e: &Rational, field: &Arc<NumberField>) -> Result<Self, ExprError> {
        if e.is_integer() && !e.is_negative() {
            let k = e.to_integer();
            let mut acc = Expr::constant(ComplexScalar::one(field), self.nvars);
            let mut i = BigInt::zero();
            while i < k {
                acc = acc.mul(self);
                i += 1;
            }
            return Ok(acc);
        }
        // Non-integer or negative powers only of a single monomial with unit
        // coefficient, e.g. t^(1/2) or t^(-1).
        if self.terms.len() == 1 {
            let (k, v) = self.terms.iter().next().unwrap();
            if v.is_real() && v.re.is_one() {
                let k = k.iter().map(|a| a * e).collect();
                return Ok(Expr { terms: BTreeMap::from([(k, v.clone())]), nvars: self.nvars });
            }
        }
        err("fractional or negative powers apply only to a bare variable")
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, ExprError> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = cs[start..i].iter().collect();
            out.push(Tok::Num(digits.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return err(format!("unexpected character '{c}' at column {}", i + 1));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    field: &'a Arc<NumberField>,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(self.term()?);
            } else if self.eat('-') {
                acc = acc.add(self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let Some(c) = d.as_constant(self.field) else {
                    return err("division is only allowed by constants; use a num/den coordinate");
                };
                let inv = c.inverse().map_err(|_| ExprError("division by zero".into()))?;
                acc = acc.mul(&Expr::constant(inv, self.vars.len()));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return base.pow(&e, self.field);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Rational, ExprError> {
        if self.eat('(') {
            let neg = self.eat('-');
            let n = self.integer()?;
            let q = if self.eat('/') { Rational::new(n, self.integer()?) } else { Rational::from_integer(n) };
            if !self.eat(')') {
                return err("expected ')' after exponent");
            }
            return Ok(if neg { -q } else { q });
        }
        let neg = self.eat('-');
        let n = Rational::from_integer(self.integer()?);
        Ok(if neg { -n } else { n })
    }

    fn integer(&mut self) -> Result<BigInt, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                if n.is_zero() && self.toks.get(self.pos - 2) == Some(&Tok::Sym('/')) {
                    return err("zero denominator in exponent");
                }
                Ok(n)
            }
            _ => err("expected an integer"),
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let n = self.vars.len();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                let q = Rational::from_integer(v);
                Ok(Expr::constant(ComplexScalar::real(AlgebraicNumber::from_rational(self.field, q)), n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(j) = self.vars.iter().position(|v| *v == name) {
                    Ok(Expr::var(self.field, j, n))
                } else if name == "theta" {
                    Ok(Expr::constant(ComplexScalar::real(AlgebraicNumber::theta(self.field)), n))
                } else if name == "i" {
                    Ok(Expr::constant(ComplexScalar::i(self.field), n))
                } else {
                    err(format!("unknown identifier '{name}'"))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return err("missing ')'");
                }
                Ok(e)
            }
            Some(t) => err(format!("unexpected token {t:?}")),
            None => err("unexpected end of expression"),
        }
    }
}

/// Parses `src` over `field` with the given variable names.
pub fn parse(src: &str, field: &Arc<NumberField>, vars: &[&str]) -> Result<Expr, ExprError> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0, field, vars };
    if p.toks.is_empty() {
        return err("empty expression");
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return err(format!("trailing input after token {}", p.pos));
    }
    Ok(e)
}

/// A constant: polynomial in `theta`, optionally with `i`.
pub fn parse_scalar(src: &str, field: &Arc<NumberField>) -> Result<ComplexScalar, ExprError> {
    parse(src, field, &[])?.as_constant(field).ok_or_else(|| ExprError("expected a constant".into()))
}

/// Univariate polynomial coefficients, lowest degree first, if all
/// exponents are nonnegative integers.
pub fn univariate_coeffs(e: &Expr, field: &Arc<NumberField>) -> Option<Vec<ComplexScalar>> {
    let mut out: Vec<ComplexScalar> = Vec::new();
    for (k, v) in &e.terms {
        let x = &k[0];
        if !x.is_integer() || x.is_negative() {
            return None;
        }
        let d: usize = x.to_integer().try_into().ok()?;
        if out.len() <= d {
            out.resize(d + 1, ComplexScalar::zero(field));
        }
        out[d] = v.clone();
    }
    if out.is_empty() {
        out.push(ComplexScalar::zero(field));
    }
    Some(out)
}

/// Monomials `(coefficient, exponent)` of a univariate expression.
pub fn univariate_monomials(e: &Expr) -> Vec<(ComplexScalar, Rational)> {
    e.terms.iter().map(|(k, v)| (v.clone(), k[0].clone())).collect()
}

/// Multivariate monomials with nonnegative integer exponents.
pub fn integer_monomials(e: &Expr) -> Option<Vec<(ComplexScalar, Vec<u32>)>> {
    e.terms
        .iter()
        .map(|(k, v)| {
            let ex = k
                .iter()
                .map(|x| if x.is_integer() && !x.is_negative() { x.to_integer().try_into().ok() } else { None })
                .collect::<Option<Vec<u32>>>()?;
            Some((v.clone(), ex))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_over_sqrt2() {
        let k = NumberField::real_quadratic(2).unwrap();
        let a = parse_scalar("theta^2 + 1/2", &k).unwrap();
        assert_eq!(a, ComplexScalar::real(AlgebraicNumber::from_rational(&k, Rational::new(5.into(), 2.into()))));
        let b = parse_scalar("(theta/2)*(1 - i)", &k).unwrap();
        let (re, im) = b.to_f64();
        assert!((re - 0.5f64.sqrt()).abs() < 1e-12 && (im + 0.5f64.sqrt()).abs() < 1e-12);
        assert!(parse_scalar("t", &k).is_err());
        assert!(parse_scalar("1/0", &k).is_err());
    }

    #[test]
    fn polynomials_and_fractional_powers() {
        let k = NumberField::rationals();
        let e = parse("(t + 1)^2", &k, &["t"]).unwrap();
        let c: Vec<String> = univariate_coeffs(&e, &k).unwrap().iter().map(|c| c.to_string()).collect();
        assert_eq!(c, ["1", "2", "1"]);
        let r = parse("t^(1/2) - 3*t^(-1)", &k, &["t"]).unwrap();
        assert!(univariate_coeffs(&r, &k).is_none());
        assert_eq!(univariate_monomials(&r).len(), 2);
        assert!(parse("(t+1)^(1/2)", &k, &["t"]).is_err());
        let g = parse("x*y*(y+1)", &k, &["x", "y"]).unwrap();
        assert_eq!(integer_monomials(&g).unwrap().len(), 2);
    }
}
