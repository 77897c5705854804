//! Finite formal linear combinations over ℚ[λ].
//!
//! [`Comb<K>`] is generic over its basis so that forests, tensor pairs and
//! tensor triples share one normalized representation. Coefficients are
//! never zero; the zero element is the empty map.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::forest::{parse_trees, starts_tree, Alphabet, Forest};
use crate::scalar::{parse_rational, Weight, WeightPoly};
use crate::syntax::{Cursor, WEIGHT_SYMBOL};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Comb<K: Ord> {
    terms: BTreeMap<K, WeightPoly>,
}

/// An element of the forest algebra: forest ↦ coefficient.
pub type LinComb = Comb<Forest>;
/// An element of the tensor square, indexed by ordered forest pairs.
pub type TensorComb = Comb<(Forest, Forest)>;
/// An element of the tensor cube, used by coassociativity checks.
pub type Tensor3Comb = Comb<(Forest, Forest, Forest)>;

impl<K: Ord> Default for Comb<K> {
    fn default() -> Self {
        Comb {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Comb<K> {
    pub fn zero() -> Self {
        Comb::default()
    }

    /// A basis element with coefficient 1.
    pub fn of(basis: K) -> Self {
        Comb::term(basis, WeightPoly::one())
    }

    pub fn term(basis: K, coeff: WeightPoly) -> Self {
        let mut c = Comb::zero();
        c.add_term(basis, coeff);
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&K, &WeightPoly)> + '_ {
        self.terms.iter()
    }

    pub fn basis(&self) -> impl Iterator<Item = &K> + '_ {
        self.terms.keys()
    }

    pub fn coeff(&self, basis: &K) -> WeightPoly {
        self.terms.get(basis).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, basis: K, coeff: WeightPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(basis) {
            btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += coeff · other`.
    pub fn add_scaled(&mut self, coeff: &WeightPoly, other: &Comb<K>) {
        if coeff.is_zero() {
            return;
        }
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * coeff);
        }
    }

    pub fn scale(&self, s: &WeightPoly) -> Self {
        let mut out = Comb::zero();
        out.add_scaled(s, self);
        out
    }

    /// Linear extension of a basis-level map.
    pub fn map_linear<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Comb<K2>) -> Comb<K2> {
        let mut out = Comb::zero();
        for (k, c) in &self.terms {
            out.add_scaled(c, &f(k));
        }
        out
    }

    pub fn try_map_linear<K2: Ord + Clone>(
        &self,
        mut f: impl FnMut(&K) -> Result<Comb<K2>>,
    ) -> Result<Comb<K2>> {
        let mut out = Comb::zero();
        for (k, c) in &self.terms {
            out.add_scaled(c, &f(k)?);
        }
        Ok(out)
    }

    /// Applies a weight to every coefficient.
    pub fn specialize(&self, weight: &Weight) -> Self {
        if *weight == Weight::Symbolic {
            return self.clone();
        }
        self.terms
            .iter()
            .map(|(k, c)| (k.clone(), weight.apply(c)))
            .collect()
    }
}

impl<K: Ord + Clone> FromIterator<(K, WeightPoly)> for Comb<K> {
    fn from_iter<I: IntoIterator<Item = (K, WeightPoly)>>(iter: I) -> Self {
        let mut c = Comb::zero();
        for (k, w) in iter {
            c.add_term(k, w);
        }
        c
    }
}

impl<K: Ord + Clone> AddAssign<&Comb<K>> for Comb<K> {
    fn add_assign(&mut self, rhs: &Comb<K>) {
        self.add_scaled(&WeightPoly::one(), rhs);
    }
}

impl<K: Ord + Clone> Add<&Comb<K>> for &Comb<K> {
    type Output = Comb<K>;

    fn add(self, rhs: &Comb<K>) -> Comb<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Ord + Clone> Add for Comb<K> {
    type Output = Comb<K>;

    fn add(mut self, rhs: Comb<K>) -> Comb<K> {
        self += &rhs;
        self
    }
}

impl<K: Ord + Clone> Neg for &Comb<K> {
    type Output = Comb<K>;

    fn neg(self) -> Comb<K> {
        self.scale(&WeightPoly::integer(-1))
    }
}

impl<K: Ord + Clone> Neg for Comb<K> {
    type Output = Comb<K>;

    fn neg(self) -> Comb<K> {
        -&self
    }
}

impl<K: Ord + Clone> Sub<&Comb<K>> for &Comb<K> {
    type Output = Comb<K>;

    fn sub(self, rhs: &Comb<K>) -> Comb<K> {
        let mut out = self.clone();
        out.add_scaled(&WeightPoly::integer(-1), rhs);
        out
    }
}

impl<K: Ord + Clone> Sub for Comb<K> {
    type Output = Comb<K>;

    fn sub(self, rhs: Comb<K>) -> Comb<K> {
        &self - &rhs
    }
}

/// Σ aᵢbⱼ · op(fᵢ, gⱼ) for a = Σ aᵢfᵢ and b = Σ bⱼgⱼ.
pub fn bilinear_extend<A, B, C>(
    a: &Comb<A>,
    b: &Comb<B>,
    mut op: impl FnMut(&A, &B) -> Comb<C>,
) -> Comb<C>
where
    A: Ord + Clone,
    B: Ord + Clone,
    C: Ord + Clone,
{
    let mut out = Comb::zero();
    for (f, ca) in a.terms() {
        for (g, cb) in b.terms() {
            out.add_scaled(&(ca * cb), &op(f, g));
        }
    }
    out
}

/// Fallible variant of [`bilinear_extend`].
pub fn try_bilinear_extend<A, B, C>(
    a: &Comb<A>,
    b: &Comb<B>,
    mut op: impl FnMut(&A, &B) -> Result<Comb<C>>,
) -> Result<Comb<C>>
where
    A: Ord + Clone,
    B: Ord + Clone,
    C: Ord + Clone,
{
    let mut out = Comb::zero();
    for (f, ca) in a.terms() {
        for (g, cb) in b.terms() {
            out.add_scaled(&(ca * cb), &op(f, g)?);
        }
    }
    Ok(out)
}

/// The concatenation product on forests, extended bilinearly.
pub fn concat_product(a: &LinComb, b: &LinComb) -> LinComb {
    bilinear_extend(a, b, |f, g| LinComb::of(f.concat(g)))
}

/// (x⊗y)·(u⊗v) = (x·u)⊗(y·v), extended bilinearly, for a basis product
/// `mul` on forests.
pub fn tensor_product_componentwise(
    a: &TensorComb,
    b: &TensorComb,
    mut mul: impl FnMut(&Forest, &Forest) -> LinComb,
) -> TensorComb {
    bilinear_extend(a, b, |(x, y), (u, v)| tensor(&mul(x, u), &mul(y, v)))
}

/// a ⊗ b for linear combinations.
pub fn tensor(a: &LinComb, b: &LinComb) -> TensorComb {
    bilinear_extend(a, b, |f, g| TensorComb::of((f.clone(), g.clone())))
}

/// Applies linear maps to the two legs of a tensor.
pub fn tensor_map(
    t: &TensorComb,
    mut left: impl FnMut(&Forest) -> LinComb,
    mut right: impl FnMut(&Forest) -> LinComb,
) -> TensorComb {
    t.map_linear(|(x, y)| tensor(&left(x), &right(y)))
}

/// Multiplies the legs of a tensor with a basis product.
pub fn tensor_multiply(
    t: &TensorComb,
    mut mul: impl FnMut(&Forest, &Forest) -> LinComb,
) -> LinComb {
    t.map_linear(|(x, y)| mul(x, y))
}

/// A basis that can be printed and serialized.
pub trait Basis: Ord + Clone {
    fn text(&self) -> String;
    fn latex(&self) -> String;
    /// Whether the basis element is the algebra unit, whose coefficient is
    /// printed on its own.
    fn is_unit(&self) -> bool {
        false
    }
    /// JSON key and value carrying the basis element inside a term.
    fn json_entry(&self) -> (&'static str, Value);
    fn from_json_term(term: &Map<String, Value>, alphabet: &Alphabet) -> Result<Self>;
}

impl Basis for Forest {
    fn text(&self) -> String {
        self.to_string()
    }

    fn latex(&self) -> String {
        self.to_latex()
    }

    fn is_unit(&self) -> bool {
        Forest::is_unit(self)
    }

    fn json_entry(&self) -> (&'static str, Value) {
        ("forest", self.to_json())
    }

    fn from_json_term(term: &Map<String, Value>, alphabet: &Alphabet) -> Result<Self> {
        let v = term
            .get("forest")
            .ok_or_else(|| Error::Json("term is missing \"forest\"".into()))?;
        Forest::from_json(v, alphabet)
    }
}

impl Basis for (Forest, Forest) {
    fn text(&self) -> String {
        format!("{} (x) {}", self.0, self.1)
    }

    fn latex(&self) -> String {
        format!("{} \\otimes {}", self.0.to_latex(), self.1.to_latex())
    }

    fn json_entry(&self) -> (&'static str, Value) {
        ("factors", json!([self.0.to_json(), self.1.to_json()]))
    }

    fn from_json_term(term: &Map<String, Value>, alphabet: &Alphabet) -> Result<Self> {
        let fs = factors(term, 2, alphabet)?;
        let mut it = fs.into_iter();
        Ok((it.next().unwrap(), it.next().unwrap()))
    }
}

impl Basis for (Forest, Forest, Forest) {
    fn text(&self) -> String {
        format!("{} (x) {} (x) {}", self.0, self.1, self.2)
    }

    fn latex(&self) -> String {
        format!(
            "{} \\otimes {} \\otimes {}",
            self.0.to_latex(),
            self.1.to_latex(),
            self.2.to_latex()
        )
    }

    fn json_entry(&self) -> (&'static str, Value) {
        (
            "factors",
            json!([self.0.to_json(), self.1.to_json(), self.2.to_json()]),
        )
    }

    fn from_json_term(term: &Map<String, Value>, alphabet: &Alphabet) -> Result<Self> {
        let fs = factors(term, 3, alphabet)?;
        let mut it = fs.into_iter();
        Ok((it.next().unwrap(), it.next().unwrap(), it.next().unwrap()))
    }
}

fn factors(term: &Map<String, Value>, n: usize, alphabet: &Alphabet) -> Result<Vec<Forest>> {
    let arr = term
        .get("factors")
        .and_then(Value::as_array)
        .filter(|a| a.len() == n)
        .ok_or_else(|| Error::Json(format!("term needs a {n}-element \"factors\" array")))?;
    arr.iter().map(|v| Forest::from_json(v, alphabet)).collect()
}

fn coeff_to_json(c: &WeightPoly) -> Value {
    Value::Object(
        c.terms()
            .map(|(e, r)| (e.to_string(), Value::String(r.to_string())))
            .collect(),
    )
}

fn coeff_from_json(v: &Value) -> Result<WeightPoly> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Json(format!("coefficient must be an object, got {v}")))?;
    let mut out = WeightPoly::zero();
    for (e, r) in obj {
        let exp: u32 = e
            .parse()
            .map_err(|_| Error::Json(format!("bad exponent `{e}`")))?;
        let r = r
            .as_str()
            .ok_or_else(|| Error::Json(format!("coefficient value must be a string, got {r}")))?;
        let r = parse_rational(r).map_err(|e| Error::Json(e.to_string()))?;
        out += &WeightPoly::monomial(r, exp);
    }
    Ok(out)
}

impl<K: Basis> Comb<K> {
    fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        // Highest terms first.
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            let (neg, factor) = c.coefficient_parts(latex);
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let basis = if latex { k.latex() } else { k.text() };
            match (factor, k.is_unit()) {
                (None, _) => out.push_str(&basis),
                (Some(f), true) => out.push_str(&f),
                (Some(f), false) if latex => out.push_str(&format!("{f}\\,{basis}")),
                (Some(f), false) => out.push_str(&format!("{f}*{basis}")),
            }
        }
        out
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    /// `{"terms": [{"coeff": {"<exp>": "<rational>"}, "forest"|"factors": ...}]}`
    /// with terms in printing order.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .rev()
            .map(|(k, c)| {
                let (key, v) = k.json_entry();
                let mut m = Map::new();
                m.insert("coeff".into(), coeff_to_json(c));
                m.insert(key.into(), v);
                Value::Object(m)
            })
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(v: &Value, alphabet: &Alphabet) -> Result<Self> {
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("expected an object with a \"terms\" array".into()))?;
        let mut out = Comb::zero();
        for t in terms {
            let obj = t
                .as_object()
                .ok_or_else(|| Error::Json(format!("term must be an object, got {t}")))?;
            let coeff = coeff_from_json(
                obj.get("coeff")
                    .ok_or_else(|| Error::Json("term is missing \"coeff\"".into()))?,
            )?;
            out.add_term(K::from_json_term(obj, alphabet)?, coeff);
        }
        Ok(out)
    }
}

impl<K: Basis> fmt::Display for Comb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl<K: Basis> fmt::Debug for Comb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Comb({self})")
    }
}

impl LinComb {
    /// Parses `term (('+'|'-') term)*`, where a term is a `*`-separated
    /// product of coefficient factors and at most one forest.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<LinComb> {
        let mut c = Cursor::new(text);
        let mut out = LinComb::zero();
        let mut neg = c.eat('-');
        loop {
            let (coeff, forest) = parse_term(&mut c, alphabet)?;
            let coeff = if neg { -coeff } else { coeff };
            out.add_term(forest, coeff);
            if c.eat('+') {
                neg = false;
            } else if c.eat('-') {
                neg = true;
            } else {
                break;
            }
        }
        c.expect_end()?;
        Ok(out)
    }

    /// Coefficient of the unit forest.
    pub fn unit_coeff(&self) -> WeightPoly {
        self.coeff(&Forest::unit())
    }
}

fn parse_term(c: &mut Cursor<'_>, alphabet: &Alphabet) -> Result<(WeightPoly, Forest)> {
    let mut coeff = WeightPoly::one();
    let mut forest: Option<Forest> = None;
    loop {
        c.skip_ws();
        let is_weight = c.peek_identifier() == Some(WEIGHT_SYMBOL);
        if !is_weight && starts_tree(c) {
            if forest.is_some() {
                return Err(c.error("a term may contain only one forest"));
            }
            forest = parse_trees(c, alphabet)?;
        } else {
            coeff = coeff * WeightPoly::parse_power(c)?;
        }
        if !c.eat('*') {
            break;
        }
    }
    Ok((coeff, forest.unwrap_or_default()))
}
