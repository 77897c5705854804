//! Planar rooted trees and forests with vertices decorated by letters of
//! an alphabet X or by the extra symbol σ.
//!
//! Text syntax:
//!
//! ```text
//! forest := "1" | tree+            trees separated by whitespace
//! tree   := letter                 a single vertex decorated by the letter
//!         | "[" forest? "]"        σ-rooted grafting; "[]" is the σ-vertex
//!         | letter "{" forest "}"  letter-rooted grafting
//! ```
//!
//! The braces form only occurs outside the leaf-decorated forests.
//!
//! Forests are totally ordered by vertex count, then lexicographically by
//! their trees; trees compare by vertex count, then decoration (letters by
//! name, all before σ), then children.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::syntax::{is_identifier, Cursor, WEIGHT_SYMBOL};

/// A letter of the decoration alphabet.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(Arc<str>);

impl Letter {
    pub fn new(name: &str) -> Self {
        Letter(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Vertex decoration: a letter of X, or σ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Decoration {
    Letter(Letter),
    Sigma,
}

impl Decoration {
    pub fn letter(name: &str) -> Self {
        Decoration::Letter(Letter::new(name))
    }

    pub fn is_sigma(&self) -> bool {
        matches!(self, Decoration::Sigma)
    }
}

/// The decoration alphabet X: an ordered, nonempty list of distinct
/// identifiers, none of them the weight symbol `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<Letter>,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet is empty".into()));
        }
        let mut letters: Vec<Letter> = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref();
            if !is_identifier(name) {
                return Err(Error::InvalidAlphabet(format!(
                    "`{name}` is not an identifier"
                )));
            }
            if name == WEIGHT_SYMBOL {
                return Err(Error::InvalidAlphabet(format!(
                    "`{WEIGHT_SYMBOL}` is reserved for the weight"
                )));
            }
            if letters.iter().any(|l| l.name() == name) {
                return Err(Error::InvalidAlphabet(format!("duplicate letter `{name}`")));
            }
            letters.push(Letter::new(name));
        }
        Ok(Alphabet { letters })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn contains(&self, name: &str) -> bool {
        self.letters.iter().any(|l| l.name() == name)
    }

    fn lookup(&self, name: &str) -> Option<&Letter> {
        self.letters.iter().find(|l| l.name() == name)
    }

    /// X̃ = X ∪ {σ}.
    pub fn decorations(&self) -> Vec<Decoration> {
        self.letters
            .iter()
            .cloned()
            .map(Decoration::Letter)
            .chain(std::iter::once(Decoration::Sigma))
            .collect()
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet::new(&["a", "b"]).unwrap()
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let names: Vec<&str> = s.split(',').map(str::trim).collect();
        Alphabet::new(&names)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    // Field order fixes the derived ordering.
    size: usize,
    dec: Decoration,
    children: Forest,
}

impl Tree {
    /// A single vertex •_d.
    pub fn leaf(dec: Decoration) -> Self {
        Tree::graft(Forest::unit(), dec)
    }

    pub fn letter(name: &str) -> Self {
        Tree::leaf(Decoration::letter(name))
    }

    /// B⁺_d(f): a new root decorated by `dec` above the trees of `f`.
    pub fn graft(children: Forest, dec: Decoration) -> Self {
        Tree {
            size: children.size + 1,
            dec,
            children,
        }
    }

    pub fn dec(&self) -> &Decoration {
        &self.dec
    }

    pub fn children(&self) -> &Forest {
        &self.children
    }

    pub fn into_children(self) -> Forest {
        self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_unit()
    }

    pub fn is_sigma_rooted(&self) -> bool {
        self.dec.is_sigma()
    }

    pub fn vertex_count(&self) -> usize {
        self.size
    }

    /// Number of edges on the longest root-to-leaf chain.
    pub fn depth(&self) -> usize {
        self.children
            .trees
            .iter()
            .map(|t| t.depth() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn is_leaf_decorated(&self) -> bool {
        self.is_leaf() || (self.dec.is_sigma() && self.children.is_leaf_decorated())
    }

    pub fn into_forest(self) -> Forest {
        Forest {
            size: self.size,
            trees: vec![self],
        }
    }

    fn write_text(&self, out: &mut String) {
        match (&self.dec, self.is_leaf()) {
            (Decoration::Letter(l), true) => out.push_str(l.name()),
            (Decoration::Letter(l), false) => {
                out.push_str(l.name());
                out.push('{');
                self.children.write_trees(out);
                out.push('}');
            }
            (Decoration::Sigma, _) => {
                out.push('[');
                self.children.write_trees(out);
                out.push(']');
            }
        }
    }

    fn write_latex(&self, out: &mut String) {
        match (&self.dec, self.is_leaf()) {
            (Decoration::Letter(l), true) => {
                out.push_str(&format!("\\bullet_{{{l}}}"));
            }
            (Decoration::Sigma, true) => out.push_str("\\bullet"),
            (dec, false) => {
                match dec {
                    Decoration::Letter(l) => out.push_str(&format!("B^{{+}}_{{{l}}}\\left(")),
                    Decoration::Sigma => out.push_str("B^{+}\\left("),
                }
                self.children.write_latex(out);
                out.push_str("\\right)");
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let d = match &self.dec {
            Decoration::Letter(l) => l.name().to_string(),
            Decoration::Sigma => "@".to_string(),
        };
        json!({ "d": d, "c": self.children.to_json() })
    }

    pub fn from_json(v: &Value, alphabet: &Alphabet) -> Result<Tree> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Json(format!("tree must be an object, got {v}")))?;
        let d = obj
            .get("d")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Json("tree is missing string field \"d\"".into()))?;
        let dec = if d == "@" {
            Decoration::Sigma
        } else {
            let letter = alphabet.lookup(d).ok_or_else(|| Error::UnknownLetter {
                name: d.to_string(),
                pos: 0,
            })?;
            Decoration::Letter(letter.clone())
        };
        let children = match obj.get("c") {
            None => Forest::unit(),
            Some(c) => Forest::from_json(c, alphabet)?,
        };
        Ok(Tree::graft(children, dec))
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_text(&mut s);
        f.write_str(&s)
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A planar rooted forest: a word in trees. The empty forest is the unit 1.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Forest {
    size: usize,
    trees: Vec<Tree>,
}

impl Forest {
    pub fn unit() -> Self {
        Forest::default()
    }

    pub fn from_trees(trees: Vec<Tree>) -> Self {
        Forest {
            size: trees.iter().map(|t| t.size).sum(),
            trees,
        }
    }

    /// •_{x₁}⋯•_{xₙ}.
    pub fn letters(names: &[&str]) -> Self {
        Forest::from_trees(names.iter().map(|n| Tree::letter(n)).collect())
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn into_trees(self) -> Vec<Tree> {
        self.trees
    }

    pub fn is_unit(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn breadth(&self) -> usize {
        self.trees.len()
    }

    pub fn depth(&self) -> usize {
        self.trees.iter().map(Tree::depth).max().unwrap_or(0)
    }

    pub fn vertex_count(&self) -> usize {
        self.size
    }

    pub fn concat(&self, other: &Forest) -> Forest {
        let mut trees = Vec::with_capacity(self.trees.len() + other.trees.len());
        trees.extend_from_slice(&self.trees);
        trees.extend_from_slice(&other.trees);
        Forest {
            size: self.size + other.size,
            trees,
        }
    }

    pub fn push(&mut self, tree: Tree) {
        self.size += tree.size;
        self.trees.push(tree);
    }

    /// B⁺_d(self) as a tree.
    pub fn graft(&self, dec: Decoration) -> Tree {
        Tree::graft(self.clone(), dec)
    }

    /// True iff every vertex with children is decorated by σ.
    pub fn is_leaf_decorated(&self) -> bool {
        self.trees.iter().all(Tree::is_leaf_decorated)
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Forest> {
        let mut c = Cursor::new(text);
        let f = if c.eat('1') {
            Forest::unit()
        } else {
            parse_trees(&mut c, alphabet)?.ok_or_else(|| c.error("expected a forest"))?
        };
        c.expect_end()?;
        Ok(f)
    }

    fn write_trees(&self, out: &mut String) {
        for (i, t) in self.trees.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            t.write_text(out);
        }
    }

    pub fn to_latex(&self) -> String {
        let mut s = String::new();
        self.write_latex(&mut s);
        s
    }

    fn write_latex(&self, out: &mut String) {
        if self.is_unit() {
            out.push('1');
            return;
        }
        for (i, t) in self.trees.iter().enumerate() {
            if i > 0 {
                out.push_str("\\,");
            }
            t.write_latex(out);
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.trees.iter().map(Tree::to_json).collect())
    }

    pub fn from_json(v: &Value, alphabet: &Alphabet) -> Result<Forest> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Json(format!("forest must be an array, got {v}")))?;
        arr.iter()
            .map(|t| Tree::from_json(t, alphabet))
            .collect::<Result<Vec<_>>>()
            .map(Forest::from_trees)
    }
}

impl From<Tree> for Forest {
    fn from(t: Tree) -> Self {
        t.into_forest()
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        let mut s = String::new();
        self.write_trees(&mut s);
        f.write_str(&s)
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn starts_tree(c: &mut Cursor<'_>) -> bool {
    c.skip_ws();
    c.peek() == Some('[') || c.peek_identifier_start()
}

/// Parses a letter at the cursor, validating it against the alphabet.
pub(crate) fn parse_letter(c: &mut Cursor<'_>, alphabet: &Alphabet) -> Result<Letter> {
    c.skip_ws();
    let pos = c.pos();
    let name = c.identifier().ok_or_else(|| c.error("expected a letter"))?;
    if name == WEIGHT_SYMBOL {
        return Err(Error::Syntax {
            pos,
            message: format!("`{WEIGHT_SYMBOL}` is reserved for the weight and cannot be a letter"),
        });
    }
    alphabet
        .lookup(name)
        .cloned()
        .ok_or_else(|| Error::UnknownLetter {
            name: name.to_string(),
            pos,
        })
}

/// Parses a maximal nonempty run of trees; `None` if no tree starts here.
pub(crate) fn parse_trees(c: &mut Cursor<'_>, alphabet: &Alphabet) -> Result<Option<Forest>> {
    let mut f = Forest::unit();
    while starts_tree(c) {
        f.push(parse_tree(c, alphabet)?);
    }
    Ok((!f.is_unit()).then_some(f))
}

/// The inside of a bracket: empty, `1`, or a run of trees.
fn parse_inner(c: &mut Cursor<'_>, alphabet: &Alphabet) -> Result<Forest> {
    if c.eat('1') {
        return Ok(Forest::unit());
    }
    Ok(parse_trees(c, alphabet)?.unwrap_or_default())
}

fn parse_tree(c: &mut Cursor<'_>, alphabet: &Alphabet) -> Result<Tree> {
    if c.eat('[') {
        let inner = parse_inner(c, alphabet)?;
        c.expect(']')?;
        return Ok(Tree::graft(inner, Decoration::Sigma));
    }
    let letter = Decoration::Letter(parse_letter(c, alphabet)?);
    if c.peek() == Some('{') {
        c.bump();
        let inner = parse_inner(c, alphabet)?;
        c.expect('}')?;
        Ok(Tree::graft(inner, letter))
    } else {
        Ok(Tree::leaf(letter))
    }
}

/// Every forest with at most `max_vertices` vertices over X̃, each exactly
/// once, ascending in the canonical order. With `leaf_decorated_only`,
/// letters appear only on leaves.
pub fn enumerate_forests(
    max_vertices: usize,
    alphabet: &Alphabet,
    leaf_decorated_only: bool,
) -> impl Iterator<Item = Forest> {
    let mut gen = ForestGenerator::new(alphabet, leaf_decorated_only);
    (0..=max_vertices).flat_map(move |n| {
        let mut level = gen.forests(n).to_vec();
        level.sort();
        level
    })
}

/// All trees with exactly `n` vertices, ascending.
pub fn enumerate_trees(n: usize, alphabet: &Alphabet, leaf_decorated_only: bool) -> Vec<Tree> {
    let mut gen = ForestGenerator::new(alphabet, leaf_decorated_only);
    let mut trees = gen.trees(n).to_vec();
    trees.sort();
    trees
}

struct ForestGenerator {
    decorations: Vec<Decoration>,
    leaf_decorated_only: bool,
    trees_by_size: Vec<Vec<Tree>>,
    forests_by_size: Vec<Vec<Forest>>,
}

impl ForestGenerator {
    fn new(alphabet: &Alphabet, leaf_decorated_only: bool) -> Self {
        ForestGenerator {
            decorations: alphabet.decorations(),
            leaf_decorated_only,
            trees_by_size: vec![Vec::new()],
            forests_by_size: vec![vec![Forest::unit()]],
        }
    }

    fn trees(&mut self, n: usize) -> &[Tree] {
        while self.trees_by_size.len() <= n {
            let k = self.trees_by_size.len();
            let children: Vec<Forest> = self.forests(k - 1).to_vec();
            let mut level = Vec::new();
            for dec in &self.decorations {
                if k > 1 && self.leaf_decorated_only && !dec.is_sigma() {
                    continue;
                }
                for f in &children {
                    level.push(Tree::graft(f.clone(), dec.clone()));
                }
            }
            self.trees_by_size.push(level);
        }
        &self.trees_by_size[n]
    }

    fn forests(&mut self, n: usize) -> &[Forest] {
        while self.forests_by_size.len() <= n {
            let k = self.forests_by_size.len();
            let mut level = Vec::new();
            // First tree has size j, the remaining forest size k - j.
            for j in 1..=k {
                let firsts = self.trees(j).to_vec();
                let rests = self.forests_by_size[k - j].clone();
                for t in &firsts {
                    for rest in &rests {
                        let mut trees = Vec::with_capacity(rest.breadth() + 1);
                        trees.push(t.clone());
                        trees.extend_from_slice(rest.trees());
                        level.push(Forest::from_trees(trees));
                    }
                }
            }
            self.forests_by_size.push(level);
        }
        &self.forests_by_size[n]
    }
}
