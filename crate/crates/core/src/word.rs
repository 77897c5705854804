//! Bracketed words (the free operated monoid on X) and the isomorphism θ
//! onto leaf-decorated forests.
//!
//! Words share the forest text syntax: `x` is a letter, `[w]` is the
//! bracket ⌊w⌋ and `1` is the empty word. θ is therefore the identity on
//! text.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::forest::{parse_letter, Alphabet, Decoration, Forest, Letter, Tree};
use crate::syntax::Cursor;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WordItem {
    Letter(Letter),
    Bracket(BracketedWord),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BracketedWord {
    items: Vec<WordItem>,
}

impl BracketedWord {
    pub fn unit() -> Self {
        BracketedWord::default()
    }

    pub fn new(items: Vec<WordItem>) -> Self {
        BracketedWord { items }
    }

    pub fn letter(name: &str) -> Self {
        BracketedWord::new(vec![WordItem::Letter(Letter::new(name))])
    }

    /// ⌊self⌋.
    pub fn bracket(self) -> Self {
        BracketedWord::new(vec![WordItem::Bracket(self)])
    }

    pub fn items(&self) -> &[WordItem] {
        &self.items
    }

    pub fn is_unit(&self) -> bool {
        self.items.is_empty()
    }

    pub fn concat(&self, other: &BracketedWord) -> BracketedWord {
        let mut items = self.items.clone();
        items.extend_from_slice(&other.items);
        BracketedWord { items }
    }

    /// Maximal bracket nesting.
    pub fn nesting(&self) -> usize {
        self.items
            .iter()
            .map(|it| match it {
                WordItem::Letter(_) => 0,
                WordItem::Bracket(w) => w.nesting() + 1,
            })
            .max()
            .unwrap_or(0)
    }

    /// Letters plus brackets, counted at every level.
    pub fn len(&self) -> usize {
        self.items
            .iter()
            .map(|it| match it {
                WordItem::Letter(_) => 1,
                WordItem::Bracket(w) => w.len() + 1,
            })
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_unit()
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<BracketedWord> {
        let mut c = Cursor::new(text);
        let w = if c.eat('1') {
            BracketedWord::unit()
        } else {
            let w = parse_items(&mut c, alphabet)?;
            if w.is_unit() {
                return Err(c.error("expected a bracketed word"));
            }
            w
        };
        c.expect_end()?;
        Ok(w)
    }

    pub fn to_latex(&self) -> String {
        if self.is_unit() {
            return "1".to_string();
        }
        self.items
            .iter()
            .map(|it| match it {
                WordItem::Letter(l) => l.to_string(),
                WordItem::Bracket(w) if w.is_unit() => "\\lfloor 1\\rfloor".to_string(),
                WordItem::Bracket(w) => format!("\\lfloor {}\\rfloor", w.to_latex()),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Items as an array: a letter is a string, a bracket is `{"b": [...]}`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.items
                .iter()
                .map(|it| match it {
                    WordItem::Letter(l) => Value::String(l.to_string()),
                    WordItem::Bracket(w) => json!({ "b": w.to_json() }),
                })
                .collect(),
        )
    }

    fn write_text(&self, out: &mut String) {
        for (i, it) in self.items.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            match it {
                WordItem::Letter(l) => out.push_str(l.name()),
                WordItem::Bracket(w) => {
                    out.push('[');
                    w.write_text(out);
                    out.push(']');
                }
            }
        }
    }
}

impl fmt::Display for BracketedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        let mut s = String::new();
        self.write_text(&mut s);
        f.write_str(&s)
    }
}

fn parse_items(c: &mut Cursor<'_>, alphabet: &Alphabet) -> Result<BracketedWord> {
    let mut items = Vec::new();
    loop {
        if c.eat('[') {
            let inner = if c.eat('1') {
                BracketedWord::unit()
            } else {
                parse_items(c, alphabet)?
            };
            c.expect(']')?;
            items.push(WordItem::Bracket(inner));
        } else if c.peek_identifier_start() {
            items.push(WordItem::Letter(parse_letter(c, alphabet)?));
        } else {
            return Ok(BracketedWord { items });
        }
    }
}

/// θ: x ↦ •ₓ, ⌊w⌋ ↦ B⁺_σ(θ(w)), extended multiplicatively.
pub fn theta(w: &BracketedWord) -> Forest {
    Forest::from_trees(
        w.items
            .iter()
            .map(|it| match it {
                WordItem::Letter(l) => Tree::leaf(Decoration::Letter(l.clone())),
                WordItem::Bracket(inner) => Tree::graft(theta(inner), Decoration::Sigma),
            })
            .collect(),
    )
}

/// The inverse of [`theta`], defined on leaf-decorated forests.
pub fn theta_inv(f: &Forest) -> Result<BracketedWord> {
    fn tree_item(t: &Tree, whole: &Forest) -> Result<WordItem> {
        match t.dec() {
            Decoration::Sigma => Ok(WordItem::Bracket(forest_word(t.children(), whole)?)),
            Decoration::Letter(l) if t.is_leaf() => Ok(WordItem::Letter(l.clone())),
            Decoration::Letter(_) => Err(Error::NotInThetaImage(whole.to_string())),
        }
    }
    fn forest_word(f: &Forest, whole: &Forest) -> Result<BracketedWord> {
        f.trees()
            .iter()
            .map(|t| tree_item(t, whole))
            .collect::<Result<Vec<_>>>()
            .map(BracketedWord::new)
    }
    forest_word(f, f)
}

/// All bracketed words with at most `max_len` symbols (see
/// [`BracketedWord::len`]) and nesting at most `max_nesting`.
pub fn enumerate_words(
    max_len: usize,
    max_nesting: usize,
    alphabet: &Alphabet,
) -> Vec<BracketedWord> {
    // by_len[d][n]: words of exactly n symbols with nesting ≤ d.
    let mut by_len: Vec<Vec<Vec<BracketedWord>>> = Vec::new();
    for d in 0..=max_nesting {
        let mut level: Vec<Vec<BracketedWord>> = vec![vec![BracketedWord::unit()]];
        for n in 1..=max_len {
            let mut words = Vec::new();
            // First item uses k symbols, the rest n - k.
            for k in 1..=n {
                let mut firsts: Vec<WordItem> = Vec::new();
                if k == 1 {
                    firsts.extend(alphabet.letters().iter().cloned().map(WordItem::Letter));
                }
                if d > 0 {
                    firsts.extend(by_len[d - 1][k - 1].iter().cloned().map(WordItem::Bracket));
                }
                for first in &firsts {
                    for rest in &level[n - k] {
                        let mut items = vec![first.clone()];
                        items.extend_from_slice(rest.items());
                        words.push(BracketedWord::new(items));
                    }
                }
            }
            level.push(words);
        }
        by_len.push(level);
    }
    by_len
        .pop()
        .unwrap_or_default()
        .into_iter()
        .flatten()
        .collect()
}
