//! Exact coefficients: rationals and sparse polynomials in the weight
//! symbol `L` (written λ in documentation).
//!
//! Every algebra in this crate is computed over ℚ[λ]. A concrete weight
//! is applied afterwards with [`WeightPoly::specialize`] or
//! [`Weight::apply`]; since every construction is polynomial in λ, the two
//! orders of evaluation agree.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::syntax::{Cursor, WEIGHT_SYMBOL};

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let mut c = Cursor::new(s);
    let neg = c.eat('-');
    c.skip_ws();
    let r = rational_literal(&mut c)?.ok_or_else(|| c.error("expected a rational"))?;
    c.expect_end()?;
    Ok(if neg { -r } else { r })
}

fn rational_literal(c: &mut Cursor<'_>) -> Result<Option<Rational>> {
    let Some(numer) = c.digits() else {
        return Ok(None);
    };
    let numer: BigInt = numer.parse().expect("digits");
    if c.peek() == Some('/') {
        c.bump();
        let denom = c.digits().ok_or_else(|| c.error("expected denominator"))?;
        let denom: BigInt = denom.parse().expect("digits");
        if denom.is_zero() {
            return Err(c.error("zero denominator"));
        }
        Ok(Some(Rational::new(numer, denom)))
    } else {
        Ok(Some(Rational::from_integer(numer)))
    }
}

/// A polynomial in λ with rational coefficients. Zero coefficients are
/// never stored, so structural equality is polynomial equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightPoly {
    coeffs: BTreeMap<u32, Rational>,
}

impl WeightPoly {
    pub fn zero() -> Self {
        WeightPoly::default()
    }

    pub fn one() -> Self {
        WeightPoly::constant(Rational::one())
    }

    /// The weight symbol λ itself.
    pub fn lambda() -> Self {
        WeightPoly::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        WeightPoly::monomial(c, 0)
    }

    pub fn integer(n: i64) -> Self {
        WeightPoly::constant(Rational::from_integer(n.into()))
    }

    pub fn monomial(c: Rational, exp: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        WeightPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(One::is_one)
    }

    pub fn coeff(&self, exp: u32) -> Rational {
        self.coeffs
            .get(&exp)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms as `(exponent, coefficient)`, ascending by exponent.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &Rational)> + '_ {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Returns the constant if the polynomial has no λ-dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.coeff(0)),
            _ => None,
        }
    }

    fn add_term(&mut self, exp: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Evaluates at λ = `q` (Horner).
    pub fn specialize(&self, q: &Rational) -> Rational {
        let Some(top) = self.degree() else {
            return Rational::zero();
        };
        let mut acc = Rational::zero();
        for e in (0..=top).rev() {
            acc *= q;
            if let Some(c) = self.coeffs.get(&e) {
                acc += c;
            }
        }
        acc
    }

    /// `c·λ^e` as text, with the sign dropped. `None` when the monomial
    /// is just `1`.
    fn monomial_text(exp: u32, c: &Rational) -> Option<String> {
        let c = c.abs();
        let lam = match exp {
            0 => None,
            1 => Some(WEIGHT_SYMBOL.to_string()),
            e => Some(format!("{WEIGHT_SYMBOL}^{e}")),
        };
        match (c.is_one(), lam) {
            (true, None) => None,
            (true, Some(l)) => Some(l),
            (false, None) => Some(c.to_string()),
            (false, Some(l)) => Some(format!("{c}*{l}")),
        }
    }

    fn monomial_latex(exp: u32, c: &Rational) -> Option<String> {
        let c = c.abs();
        let lam = match exp {
            0 => None,
            1 => Some("\\lambda".to_string()),
            e => Some(format!("\\lambda^{{{e}}}")),
        };
        let num = if c.denom().is_one() {
            c.numer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
        };
        match (c.is_one(), lam) {
            (true, None) => None,
            (true, Some(l)) => Some(l),
            (false, None) => Some(num),
            (false, Some(l)) => Some(format!("{num}{l}")),
        }
    }

    fn render_with(&self, mono: fn(u32, &Rational) -> Option<String>) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&mono(e, c).unwrap_or_else(|| "1".to_string()));
        }
        out
    }

    pub fn to_latex(&self) -> String {
        self.render_with(Self::monomial_latex)
    }

    /// Splits a coefficient for printing in front of a basis element:
    /// `(negative, factor)`, where `factor` is `None` for ±1 and is
    /// parenthesized when the polynomial has several terms.
    pub(crate) fn coefficient_parts(&self, latex: bool) -> (bool, Option<String>) {
        if self.coeffs.len() == 1 {
            let (e, c) = self.terms().next().unwrap();
            let text = if latex {
                Self::monomial_latex(e, c)
            } else {
                Self::monomial_text(e, c)
            };
            (c.is_negative(), text)
        } else if latex {
            (false, Some(format!("\\left({}\\right)", self.to_latex())))
        } else {
            (false, Some(format!("({self})")))
        }
    }

    pub(crate) fn parse_sum(c: &mut Cursor<'_>) -> Result<WeightPoly> {
        let mut acc = WeightPoly::zero();
        let mut neg = c.eat('-');
        loop {
            let p = Self::parse_product(c)?;
            acc = if neg { acc - p } else { acc + p };
            if c.eat('+') {
                neg = false;
            } else if c.eat('-') {
                neg = true;
            } else {
                return Ok(acc);
            }
        }
    }

    fn parse_product(c: &mut Cursor<'_>) -> Result<WeightPoly> {
        let mut acc = Self::parse_power(c)?;
        while c.eat('*') {
            acc = acc * Self::parse_power(c)?;
        }
        Ok(acc)
    }

    pub(crate) fn parse_power(c: &mut Cursor<'_>) -> Result<WeightPoly> {
        let base = Self::parse_atom(c)?.ok_or_else(|| c.error("expected a coefficient"))?;
        if c.eat('^') {
            c.skip_ws();
            let exp: u32 = c
                .digits()
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| c.error("expected an exponent"))?;
            Ok(base.pow(exp))
        } else {
            Ok(base)
        }
    }

    /// One coefficient atom, or `None` (cursor untouched apart from
    /// whitespace) when the next token does not start one.
    pub(crate) fn parse_atom(c: &mut Cursor<'_>) -> Result<Option<WeightPoly>> {
        c.skip_ws();
        match c.peek() {
            Some('(') => {
                c.bump();
                let inner = Self::parse_sum(c)?;
                c.expect(')')?;
                Ok(Some(inner))
            }
            Some(ch) if ch.is_ascii_digit() => Ok(rational_literal(c)?.map(WeightPoly::constant)),
            Some(_) if c.rest().starts_with(WEIGHT_SYMBOL) => {
                let save = c.pos();
                if c.identifier() == Some(WEIGHT_SYMBOL) {
                    Ok(Some(WeightPoly::lambda()))
                } else {
                    c.reset(save);
                    Ok(None)
                }
            }
            _ => Ok(None),
        }
    }

    pub fn pow(&self, exp: u32) -> WeightPoly {
        (0..exp).fold(WeightPoly::one(), |acc, _| acc * self)
    }
}

impl FromStr for WeightPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut c = Cursor::new(s);
        let p = WeightPoly::parse_sum(&mut c)?;
        c.expect_end()?;
        Ok(p)
    }
}

impl fmt::Display for WeightPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(Self::monomial_text))
    }
}

impl fmt::Debug for WeightPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightPoly({self})")
    }
}

impl From<Rational> for WeightPoly {
    fn from(c: Rational) -> Self {
        WeightPoly::constant(c)
    }
}

impl From<i64> for WeightPoly {
    fn from(n: i64) -> Self {
        WeightPoly::integer(n)
    }
}

impl AddAssign<&WeightPoly> for WeightPoly {
    fn add_assign(&mut self, rhs: &WeightPoly) {
        for (e, c) in rhs.terms() {
            self.add_term(e, c.clone());
        }
    }
}

impl Add<&WeightPoly> for &WeightPoly {
    type Output = WeightPoly;

    fn add(self, rhs: &WeightPoly) -> WeightPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for WeightPoly {
    type Output = WeightPoly;

    fn add(mut self, rhs: WeightPoly) -> WeightPoly {
        self += &rhs;
        self
    }
}

impl Neg for &WeightPoly {
    type Output = WeightPoly;

    fn neg(self) -> WeightPoly {
        WeightPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for WeightPoly {
    type Output = WeightPoly;

    fn neg(self) -> WeightPoly {
        -&self
    }
}

impl Sub<&WeightPoly> for &WeightPoly {
    type Output = WeightPoly;

    fn sub(self, rhs: &WeightPoly) -> WeightPoly {
        self + &-rhs
    }
}

impl Sub for WeightPoly {
    type Output = WeightPoly;

    fn sub(self, rhs: WeightPoly) -> WeightPoly {
        &self - &rhs
    }
}

impl Mul<&WeightPoly> for &WeightPoly {
    type Output = WeightPoly;

    fn mul(self, rhs: &WeightPoly) -> WeightPoly {
        let mut out = WeightPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul<&WeightPoly> for WeightPoly {
    type Output = WeightPoly;

    fn mul(self, rhs: &WeightPoly) -> WeightPoly {
        &self * rhs
    }
}

impl Mul for WeightPoly {
    type Output = WeightPoly;

    fn mul(self, rhs: WeightPoly) -> WeightPoly {
        &self * &rhs
    }
}

/// The weight used when presenting results: kept symbolic, or fixed to a
/// rational value.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Weight {
    #[default]
    Symbolic,
    Value(Rational),
}

impl Weight {
    pub fn zero() -> Self {
        Weight::Value(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Weight::Value(q) if q.is_zero())
    }

    pub fn apply(&self, p: &WeightPoly) -> WeightPoly {
        match self {
            Weight::Symbolic => p.clone(),
            Weight::Value(q) => WeightPoly::constant(p.specialize(q)),
        }
    }
}

impl FromStr for Weight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == WEIGHT_SYMBOL {
            Ok(Weight::Symbolic)
        } else {
            parse_rational(s).map(Weight::Value)
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Symbolic => f.write_str(WEIGHT_SYMBOL),
            Weight::Value(q) => write!(f, "{q}"),
        }
    }
}
