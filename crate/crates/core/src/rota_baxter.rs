//! The free Rota-Baxter algebra of weight λ, realized on Rota-Baxter
//! forests (RBFs): leaf-decorated forests in which no two adjacent trees,
//! at the top level or inside any σ-rooted tree, both have σ-roots.
//!
//! The product is the diamond product ⋄ and the operator is B⁺_σ. The
//! coproduct Δ⋄ is transported from the Connes-Kreimer coproduct through
//! the projection φ onto RBFs: Δ⋄ = (φ ⊗ φ) ∘ Δ ∘ i.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use crate::ck_hopf::{coproduct_forest, graft_lc, GradedAntipode, OperatedTarget, Side};
use crate::error::{Error, Result};
use crate::forest::{enumerate_forests, Alphabet, Decoration, Forest, Letter, Tree};
use crate::lincomb::{LinComb, TensorComb};
use crate::scalar::{Weight, WeightPoly};

/// A forest known to satisfy [`is_rbf`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RBForest(Forest);

impl RBForest {
    pub fn new(f: Forest) -> Result<Self> {
        if is_rbf(&f) {
            Ok(RBForest(f))
        } else {
            Err(Error::NotRbf(f.to_string()))
        }
    }

    pub fn as_forest(&self) -> &Forest {
        &self.0
    }

    pub fn into_forest(self) -> Forest {
        self.0
    }
}

impl TryFrom<Forest> for RBForest {
    type Error = Error;

    fn try_from(f: Forest) -> Result<Self> {
        RBForest::new(f)
    }
}

impl fmt::Display for RBForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for RBForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

pub fn is_rbf(f: &Forest) -> bool {
    let trees = f.trees();
    let alternating = trees
        .windows(2)
        .all(|w| !(w[0].is_sigma_rooted() && w[1].is_sigma_rooted()));
    alternating
        && trees.iter().all(|t| match t.dec() {
            Decoration::Sigma => is_rbf(t.children()),
            Decoration::Letter(_) => t.is_leaf(),
        })
}

fn require_rbf(f: &Forest) -> Result<()> {
    if is_rbf(f) {
        Ok(())
    } else {
        Err(Error::NotRbf(f.to_string()))
    }
}

/// The factors w₁⋯wₘ of a nonunit RBF: its top-level trees, each a letter
/// vertex or a σ-rooted tree, with no two consecutive σ-rooted.
pub fn alternating_decomposition(f: &Forest) -> Result<Vec<Tree>> {
    if f.is_unit() {
        return Err(Error::UnitDecomposition);
    }
    require_rbf(f)?;
    Ok(f.trees().to_vec())
}

/// The least n with the word in the n-th stage of the RBW filtration.
pub fn rb_depth(f: &Forest) -> Result<usize> {
    require_rbf(f)?;
    Ok(rb_depth_unchecked(f))
}

fn rb_depth_unchecked(f: &Forest) -> usize {
    f.trees()
        .iter()
        .filter(|t| t.is_sigma_rooted())
        .map(|t| 1 + rb_depth_unchecked(t.children()))
        .max()
        .unwrap_or(0)
}

thread_local! {
    static DIAMOND_MEMO: RefCell<HashMap<(Tree, Tree), LinComb>> = RefCell::new(HashMap::new());
}

const DIAMOND_MEMO_LIMIT: usize = 1 << 18;

/// u ⋄ v for RBFs u, v. The boundary factors are merged and everything
/// else is concatenated.
pub(crate) fn diamond_basis(u: &Forest, v: &Forest) -> LinComb {
    if u.is_unit() {
        return LinComb::of(v.clone());
    }
    if v.is_unit() {
        return LinComb::of(u.clone());
    }
    let (last, prefix) = u.trees().split_last().unwrap();
    let (first, suffix) = v.trees().split_first().unwrap();
    if !(last.is_sigma_rooted() && first.is_sigma_rooted()) {
        return LinComb::of(u.concat(v));
    }
    let merged = sigma_pair(last, first);
    merged.map_linear(|m| {
        let mut trees = Vec::with_capacity(u.breadth() + v.breadth() - 1);
        trees.extend_from_slice(prefix);
        trees.extend_from_slice(m.trees());
        trees.extend_from_slice(suffix);
        LinComb::of(Forest::from_trees(trees))
    })
}

/// ⌊ā⌋ ⋄ ⌊b̄⌋ = ⌊⌊ā⌋ ⋄ b̄⌋ + ⌊ā ⋄ ⌊b̄⌋⌋ + λ⌊ā ⋄ b̄⌋.
fn sigma_pair(a: &Tree, b: &Tree) -> LinComb {
    let key = (a.clone(), b.clone());
    if let Some(hit) = DIAMOND_MEMO.with(|m| m.borrow().get(&key).cloned()) {
        return hit;
    }
    let a_bar = a.children();
    let b_bar = b.children();
    let a_f = a.clone().into_forest();
    let b_f = b.clone().into_forest();
    debug_assert!(measure(a_bar, &b_f) < measure(&a_f, &b_f));
    debug_assert!(measure(&a_f, b_bar) < measure(&a_f, &b_f));
    let mut inner = diamond_basis(&a_f, b_bar);
    inner += &diamond_basis(a_bar, &b_f);
    inner.add_scaled(&WeightPoly::lambda(), &diamond_basis(a_bar, b_bar));
    let out = graft_lc(&inner, &Decoration::Sigma);
    DIAMOND_MEMO.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() >= DIAMOND_MEMO_LIMIT {
            m.clear();
        }
        m.insert(key, out.clone());
    });
    out
}

/// Termination measure of the diamond recursion: (sum of depths, sum of
/// breadths), compared lexicographically.
fn measure(u: &Forest, v: &Forest) -> (usize, usize) {
    (
        rb_depth_unchecked(u) + rb_depth_unchecked(v),
        u.breadth() + v.breadth(),
    )
}

fn require_rbf_support(a: &LinComb) -> Result<()> {
    a.basis().try_for_each(require_rbf)
}

/// The diamond product, extended bilinearly. Both operands must be
/// supported on RBFs.
pub fn diamond(a: &LinComb, b: &LinComb) -> Result<LinComb> {
    require_rbf_support(a)?;
    require_rbf_support(b)?;
    Ok(diamond_unchecked(a, b))
}

fn diamond_unchecked(a: &LinComb, b: &LinComb) -> LinComb {
    let mut out = LinComb::zero();
    for (f, ca) in a.terms() {
        for (g, cb) in b.terms() {
            out.add_scaled(&(ca * cb), &diamond_basis(f, g));
        }
    }
    out
}

/// φ on one leaf-decorated forest.
pub fn phi_forest(f: &Forest) -> Result<LinComb> {
    if !f.is_leaf_decorated() {
        return Err(Error::PhiUndefined(f.to_string()));
    }
    Ok(phi_unchecked(f))
}

fn phi_unchecked(f: &Forest) -> LinComb {
    f.trees()
        .iter()
        .fold(LinComb::of(Forest::unit()), |acc, t| {
            let pt = match t.dec() {
                Decoration::Sigma => graft_lc(&phi_unchecked(t.children()), &Decoration::Sigma),
                Decoration::Letter(_) => LinComb::of(t.clone().into_forest()),
            };
            diamond_unchecked(&acc, &pt)
        })
}

/// The projection φ from leaf-decorated forests onto RBFs: the operated
/// algebra morphism fixing letters, sending concatenation to ⋄.
pub fn phi(a: &LinComb) -> Result<LinComb> {
    a.try_map_linear(phi_forest)
}

/// Δ⋄ on one RBF.
pub fn coproduct_rb_forest(f: &Forest) -> Result<TensorComb> {
    require_rbf(f)?;
    Ok(phi_tensor(&coproduct_forest(f)))
}

/// (φ ⊗ φ) on a tensor of leaf-decorated forests.
pub(crate) fn phi_tensor(t: &TensorComb) -> TensorComb {
    let mut cache: HashMap<&Forest, LinComb> = HashMap::new();
    let mut out = TensorComb::zero();
    for ((l, r), c) in t.terms() {
        let pl = cache.entry(l).or_insert_with(|| phi_unchecked(l)).clone();
        let pr = cache.entry(r).or_insert_with(|| phi_unchecked(r)).clone();
        for (x, cx) in pl.terms() {
            for (y, cy) in pr.terms() {
                out.add_term((x.clone(), y.clone()), &(c * cx) * cy);
            }
        }
    }
    out
}

/// Δ⋄ = (φ ⊗ φ) ∘ Δ ∘ i.
pub fn coproduct_rb(a: &LinComb) -> Result<TensorComb> {
    a.try_map_linear(coproduct_rb_forest)
}

/// ε⋄: the coefficient of the unit.
pub fn counit_rb(a: &LinComb) -> WeightPoly {
    a.unit_coeff()
}

/// The antipode of (Ш(X), ⋄, Δ⋄) at weight zero.
///
/// Only `Weight::Value(0)` is accepted; the input and all intermediate
/// products and coproducts are specialized at λ = 0.
pub fn antipode_rb(a: &LinComb, weight: &Weight) -> Result<LinComb> {
    antipode_rb_side(a, weight, Side::Left)
}

/// [`antipode_rb`] computed from the right-hand recursion.
pub fn antipode_rb_right(a: &LinComb, weight: &Weight) -> Result<LinComb> {
    antipode_rb_side(a, weight, Side::Right)
}

fn antipode_rb_side(a: &LinComb, weight: &Weight, side: Side) -> Result<LinComb> {
    if !weight.is_zero() {
        return Err(Error::UnsupportedWeight);
    }
    let a = a.specialize(weight);
    require_rbf_support(&a)?;
    let mut s = GradedAntipode::new(
        |f: &Forest| Ok(coproduct_rb_forest(f)?.specialize(weight)),
        |f: &Forest, g: &Forest| Ok(diamond_basis(f, g).specialize(weight)),
        side,
    );
    s.apply(&a)
}

/// RBFs with at most `max_vertices` vertices, ascending.
pub fn enumerate_rbf(max_vertices: usize, alphabet: &Alphabet) -> impl Iterator<Item = Forest> {
    enumerate_forests(max_vertices, alphabet, true).filter(is_rbf)
}

/// (Ш(X), ⋄, B⁺_σ) with x ↦ •ₓ, as a target for the universal fold.
#[derive(Clone, Copy, Debug, Default)]
pub struct RotaBaxterTarget;

impl OperatedTarget for RotaBaxterTarget {
    type Value = LinComb;

    fn unit(&self) -> LinComb {
        LinComb::of(Forest::unit())
    }

    fn mul(&self, a: &LinComb, b: &LinComb) -> LinComb {
        diamond_unchecked(a, b)
    }

    fn op(&self, a: &LinComb) -> LinComb {
        graft_lc(a, &Decoration::Sigma)
    }

    fn letter(&self, x: &Letter) -> LinComb {
        LinComb::of(Tree::leaf(Decoration::Letter(x.clone())).into_forest())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;

    fn al() -> Alphabet {
        Alphabet::new(&["x", "y", "z", "a"]).unwrap()
    }

    fn fo(s: &str) -> Forest {
        Forest::parse(s, &al()).unwrap()
    }

    fn lc(s: &str) -> LinComb {
        LinComb::parse(s, &al()).unwrap()
    }

    #[test]
    fn is_rbf_examples() {
        assert!(is_rbf(&fo("x y")));
        assert!(!is_rbf(&fo("[] []")));
        assert!(is_rbf(&fo("[[x]]")));
        assert!(!is_rbf(&fo("[x [] []]")));
        assert!(!is_rbf(&fo("x{y}")));
        assert!(is_rbf(&Forest::unit()));
    }

    #[test]
    fn decomposition_examples() {
        let d = alternating_decomposition(&fo("[x] y []")).unwrap();
        let shown: Vec<String> = d.iter().map(ToString::to_string).collect();
        assert_eq!(shown, ["[x]", "y", "[]"]);
        assert_eq!(alternating_decomposition(&fo("x")).unwrap().len(), 1);
        assert_eq!(alternating_decomposition(&fo("[[x] y]")).unwrap().len(), 1);
        assert_eq!(
            alternating_decomposition(&Forest::unit()),
            Err(Error::UnitDecomposition)
        );
        assert!(matches!(
            alternating_decomposition(&fo("[] []")),
            Err(Error::NotRbf(_))
        ));
    }

    #[test]
    fn rb_depth_examples() {
        assert_eq!(rb_depth(&fo("x y")).unwrap(), 0);
        assert_eq!(rb_depth(&Forest::unit()).unwrap(), 0);
        assert_eq!(rb_depth(&fo("[]")).unwrap(), 1);
        assert_eq!(rb_depth(&fo("[x []]")).unwrap(), 2);
        assert!(rb_depth(&fo("[] []")).is_err());
    }

    #[test]
    fn diamond_examples() {
        assert_eq!(diamond(&lc("x"), &lc("y")).unwrap(), lc("x y"));
        assert_eq!(diamond(&lc("[]"), &lc("[]")).unwrap(), lc("2*[[]] + L*[]"));
        assert_eq!(
            diamond(&lc("[x]"), &lc("[y]")).unwrap(),
            lc("[x [y]] + [[x] y] + L*[x y]")
        );
        assert_eq!(
            diamond(&lc("x []"), &lc("[] y")).unwrap(),
            lc("2*x [[]] y + L*x [] y")
        );
        assert!(matches!(
            diamond(&lc("[] []"), &lc("x")),
            Err(Error::NotRbf(_))
        ));
        assert_eq!(diamond(&lc("1"), &lc("[x]")).unwrap(), lc("[x]"));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&lc("x")).unwrap(), lc("x"));
        assert_eq!(phi(&lc("[] []")).unwrap(), lc("2*[[]] + L*[]"));
        assert_eq!(phi(&lc("[[] []]")).unwrap(), lc("2*[[[]]] + L*[[]]"));
        assert!(matches!(phi(&lc("x{y}")), Err(Error::PhiUndefined(_))));
    }

    #[test]
    fn coproduct_rb_examples() {
        let t = |pairs: &[(&str, &str)]| -> TensorComb {
            pairs
                .iter()
                .map(|(l, r)| ((fo(l), fo(r)), WeightPoly::one()))
                .collect()
        };
        assert_eq!(
            coproduct_rb(&lc("[]")).unwrap(),
            t(&[("[]", "1"), ("1", "[]")])
        );
        assert_eq!(
            coproduct_rb(&lc("[x]")).unwrap(),
            t(&[("[x]", "1"), ("x", "[]"), ("1", "[x]")])
        );
        let witness = coproduct_rb(&lc("[[x] y [z]]")).unwrap();
        assert_eq!(
            witness.coeff(&(fo("[x z]"), fo("[y]"))),
            WeightPoly::lambda()
        );
        assert!(matches!(coproduct_rb(&lc("[] []")), Err(Error::NotRbf(_))));
    }

    #[test]
    fn counit_examples() {
        assert_eq!(counit_rb(&lc("1")), WeightPoly::one());
        assert_eq!(counit_rb(&lc("[x]")), WeightPoly::zero());
        assert_eq!(counit_rb(&lc("L + [x]")), WeightPoly::lambda());
    }

    #[test]
    fn antipode_examples() {
        let zero = Weight::zero();
        assert_eq!(antipode_rb(&lc("1"), &zero).unwrap(), lc("1"));
        assert_eq!(antipode_rb(&lc("x"), &zero).unwrap(), lc("-x"));
        assert_eq!(antipode_rb(&lc("[x]"), &zero).unwrap(), lc("-[x] + x []"));
        assert_eq!(
            antipode_rb(&lc("[x]"), &Weight::Symbolic),
            Err(Error::UnsupportedWeight)
        );
        assert_eq!(
            antipode_rb(&lc("[x]"), &Weight::Value(rational(1, 2))),
            Err(Error::UnsupportedWeight)
        );
        assert_eq!(
            antipode_rb_right(&lc("[x []] y"), &zero).unwrap(),
            antipode_rb(&lc("[x []] y"), &zero).unwrap()
        );
    }

    #[test]
    fn enumerate_rbf_examples() {
        let a = Alphabet::new(&["a"]).unwrap();
        let one: Vec<String> = enumerate_rbf(1, &a).map(|f| f.to_string()).collect();
        assert_eq!(one, ["1", "a", "[]"]);
        let two: Vec<String> = enumerate_rbf(2, &a).map(|f| f.to_string()).collect();
        assert!(!two.contains(&"[] []".to_string()));
        for s in ["[a]", "[[]]", "a a", "a []", "[] a"] {
            assert!(two.contains(&s.to_string()), "{s}");
        }
        assert_eq!(two.len(), 8);
    }
}
