//! The noncommutative Connes-Kreimer Hopf algebra on decorated planar
//! forests: concatenation product, the cocycle coproduct, its
//! admissible-cut oracle, counit, antipode and the universal fold into
//! operated monoids.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::forest::{Decoration, Forest, Letter, Tree};
use crate::lincomb::{tensor_product_componentwise, LinComb, Tensor3Comb, TensorComb};
use crate::scalar::WeightPoly;

fn concat_basis(f: &Forest, g: &Forest) -> LinComb {
    LinComb::of(f.concat(g))
}

/// Δ on a single tree by the cocycle recursion
/// Δ(B⁺_d(f)) = B⁺_d(f) ⊗ 1 + (id ⊗ B⁺_d) Δ(f).
pub fn coproduct_tree(t: &Tree) -> TensorComb {
    let inner = coproduct_forest(t.children());
    let mut out = TensorComb::of((t.clone().into_forest(), Forest::unit()));
    for ((left, right), c) in inner.terms() {
        let grafted = right.graft(t.dec().clone()).into_forest();
        out.add_term((left.clone(), grafted), c.clone());
    }
    out
}

/// Δ on a forest: Δ(1) = 1 ⊗ 1 and Δ(T₁⋯Tₘ) = Δ(T₁)⋯Δ(Tₘ).
pub fn coproduct_forest(f: &Forest) -> TensorComb {
    f.trees().iter().fold(
        TensorComb::of((Forest::unit(), Forest::unit())),
        |acc, t| tensor_product_componentwise(&acc, &coproduct_tree(t), concat_basis),
    )
}

pub fn coproduct_ck(a: &LinComb) -> TensorComb {
    a.map_linear(coproduct_forest)
}

/// Δ(t) = Σ F ⊗ t/F over the subforests F of `t`, by brute force over
/// vertex subsets.
///
/// A subforest is an antichain of vertices, each taken with all of its
/// descendants; its trees are concatenated in left-to-right order.
/// `t/F` deletes them (and is 1 when the root is chosen).
pub fn coproduct_subforest_oracle(t: &Tree) -> TensorComb {
    let flat = FlatTree::new(t);
    let n = flat.parent.len();
    let mut out = TensorComb::zero();
    for mask in 0u64..(1u64 << n) {
        let chosen: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let is_antichain = chosen
            .iter()
            .all(|&v| chosen.iter().all(|&w| v == w || !flat.is_ancestor(v, w)));
        if !is_antichain {
            continue;
        }
        // Preorder indices of an antichain are in planar left-to-right order.
        let sub = Forest::from_trees(chosen.iter().map(|&v| flat.subtree(v, 0)).collect());
        let removed = |v: usize| mask >> v & 1 == 1;
        let quotient = if removed(0) {
            Forest::unit()
        } else {
            flat.subtree_without(0, &removed).into_forest()
        };
        out.add_term((sub, quotient), WeightPoly::one());
    }
    out
}

/// Preorder vertex table of a tree.
struct FlatTree {
    dec: Vec<Decoration>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl FlatTree {
    fn new(t: &Tree) -> Self {
        let mut flat = FlatTree {
            dec: Vec::new(),
            parent: Vec::new(),
            children: Vec::new(),
        };
        flat.push(t, None);
        assert!(
            flat.dec.len() < 64,
            "oracle supports trees with fewer than 64 vertices"
        );
        flat
    }

    fn push(&mut self, t: &Tree, parent: Option<usize>) -> usize {
        let id = self.dec.len();
        self.dec.push(t.dec().clone());
        self.parent.push(parent);
        self.children.push(Vec::new());
        for c in t.children().trees() {
            let cid = self.push(c, Some(id));
            self.children[id].push(cid);
        }
        id
    }

    fn is_ancestor(&self, a: usize, mut v: usize) -> bool {
        while let Some(p) = self.parent[v] {
            if p == a {
                return true;
            }
            v = p;
        }
        false
    }

    fn subtree(&self, v: usize, _depth: usize) -> Tree {
        self.subtree_without(v, &|_| false)
    }

    fn subtree_without(&self, v: usize, removed: &dyn Fn(usize) -> bool) -> Tree {
        let kids: Vec<Tree> = self.children[v]
            .iter()
            .filter(|&&c| !removed(c))
            .map(|&c| self.subtree_without(c, removed))
            .collect();
        Tree::graft(Forest::from_trees(kids), self.dec[v].clone())
    }
}

/// ε: the coefficient of the unit forest.
pub fn counit_ck(a: &LinComb) -> WeightPoly {
    a.unit_coeff()
}

/// Linear extension of B⁺_d.
pub fn graft_lc(a: &LinComb, dec: &Decoration) -> LinComb {
    a.map_linear(|f| LinComb::of(f.graft(dec.clone()).into_forest()))
}

/// Which side of the convolution identity the antipode recursion solves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// S(F) = −F − Σ S(F′)·F″
    Left,
    /// S(F) = −F − Σ F′·S(F″)
    Right,
}

/// The antipode of a connected graded bialgebra with basis forests graded
/// by vertex count, by recursion over the reduced coproduct.
///
/// Fails with [`Error::NotConnectedGraded`] if a reduced coproduct term
/// does not lower the degree on the recursive side.
pub struct GradedAntipode<D, M> {
    coproduct: D,
    product: M,
    side: Side,
    memo: HashMap<Forest, LinComb>,
}

impl<D, M> GradedAntipode<D, M>
where
    D: FnMut(&Forest) -> Result<TensorComb>,
    M: FnMut(&Forest, &Forest) -> Result<LinComb>,
{
    pub fn new(coproduct: D, product: M, side: Side) -> Self {
        GradedAntipode {
            coproduct,
            product,
            side,
            memo: HashMap::new(),
        }
    }

    /// Starts from previously computed values of the same recursion.
    pub fn with_memo(coproduct: D, product: M, side: Side, memo: HashMap<Forest, LinComb>) -> Self {
        GradedAntipode {
            coproduct,
            product,
            side,
            memo,
        }
    }

    pub fn into_memo(self) -> HashMap<Forest, LinComb> {
        self.memo
    }

    pub fn apply(&mut self, a: &LinComb) -> Result<LinComb> {
        a.try_map_linear(|f| self.basis(f))
    }

    pub fn basis(&mut self, f: &Forest) -> Result<LinComb> {
        if f.is_unit() {
            return Ok(LinComb::of(Forest::unit()));
        }
        if let Some(s) = self.memo.get(f) {
            return Ok(s.clone());
        }
        let n = f.vertex_count();
        let mut reduced = (self.coproduct)(f)?;
        reduced.add_term((f.clone(), Forest::unit()), WeightPoly::integer(-1));
        reduced.add_term((Forest::unit(), f.clone()), WeightPoly::integer(-1));
        let mut out = -LinComb::of(f.clone());
        for ((l, r), c) in reduced.terms() {
            let recursive = match self.side {
                Side::Left => l,
                Side::Right => r,
            };
            if recursive.vertex_count() >= n {
                return Err(Error::NotConnectedGraded(f.to_string()));
            }
            let s = self.basis(recursive)?;
            let mut prod = LinComb::zero();
            for (g, cg) in s.terms() {
                let p = match self.side {
                    Side::Left => (self.product)(g, r)?,
                    Side::Right => (self.product)(l, g)?,
                };
                prod.add_scaled(cg, &p);
            }
            out.add_scaled(&-c, &prod);
        }
        self.memo.insert(f.clone(), out.clone());
        Ok(out)
    }
}

thread_local! {
    // One memo per side.
    static CK_ANTIPODE_MEMO: RefCell<[HashMap<Forest, LinComb>; 2]> = RefCell::default();
}

const CK_ANTIPODE_MEMO_LIMIT: usize = 1 << 16;

fn ck_antipode_side(a: &LinComb, side: Side) -> LinComb {
    let slot = side as usize;
    let memo = CK_ANTIPODE_MEMO.with(|m| std::mem::take(&mut m.borrow_mut()[slot]));
    let mut s = GradedAntipode::with_memo(
        |f: &Forest| Ok(coproduct_forest(f)),
        |f: &Forest, g: &Forest| Ok(concat_basis(f, g)),
        side,
        memo,
    );
    let out = s
        .apply(a)
        .expect("the Connes-Kreimer coproduct is graded by vertex count");
    let mut memo = s.into_memo();
    if memo.len() >= CK_ANTIPODE_MEMO_LIMIT {
        memo.clear();
    }
    CK_ANTIPODE_MEMO.with(|m| m.borrow_mut()[slot] = memo);
    out
}

/// S with S(1) = 1 and S(F) = −F − Σ S(F′)F″ over the reduced coproduct.
pub fn antipode_ck(a: &LinComb) -> LinComb {
    ck_antipode_side(a, Side::Left)
}

/// The antipode computed from the right-hand recursion
/// S(F) = −F − Σ F′S(F″).
pub fn antipode_ck_right(a: &LinComb) -> LinComb {
    ck_antipode_side(a, Side::Right)
}

/// m(S ⊗ id)Δ or m(id ⊗ S)Δ applied to `a`, given a coproduct, an
/// antipode and a product on basis forests.
pub fn convolve_with_antipode(
    delta: &TensorComb,
    antipode: &mut dyn FnMut(&Forest) -> Result<LinComb>,
    product: &mut dyn FnMut(&Forest, &Forest) -> Result<LinComb>,
    side: Side,
) -> Result<LinComb> {
    let mut out = LinComb::zero();
    for ((l, r), c) in delta.terms() {
        let (s, fixed) = match side {
            Side::Left => (antipode(l)?, r),
            Side::Right => (antipode(r)?, l),
        };
        for (g, cg) in s.terms() {
            let p = match side {
                Side::Left => product(g, fixed)?,
                Side::Right => product(fixed, g)?,
            };
            out.add_scaled(&(c * cg), &p);
        }
    }
    Ok(out)
}

/// (Δ ⊗ id)Δ(F), given Δ on basis forests.
pub fn iterate_left(
    delta_f: &TensorComb,
    delta: &mut dyn FnMut(&Forest) -> Result<TensorComb>,
) -> Result<Tensor3Comb> {
    let mut out = Tensor3Comb::zero();
    for ((l, r), c) in delta_f.terms() {
        for ((l1, l2), c2) in delta(l)?.terms() {
            out.add_term((l1.clone(), l2.clone(), r.clone()), c * c2);
        }
    }
    Ok(out)
}

/// (id ⊗ Δ)Δ(F), given Δ on basis forests.
pub fn iterate_right(
    delta_f: &TensorComb,
    delta: &mut dyn FnMut(&Forest) -> Result<TensorComb>,
) -> Result<Tensor3Comb> {
    let mut out = Tensor3Comb::zero();
    for ((l, r), c) in delta_f.terms() {
        for ((r1, r2), c2) in delta(r)?.terms() {
            out.add_term((l.clone(), r1.clone(), r2.clone()), c * c2);
        }
    }
    Ok(out)
}

/// (ε ⊗ id) and (id ⊗ ε) applied to a tensor.
pub fn counit_legs(t: &TensorComb) -> (LinComb, LinComb) {
    let mut left = LinComb::zero();
    let mut right = LinComb::zero();
    for ((l, r), c) in t.terms() {
        if l.is_unit() {
            left.add_term(r.clone(), c.clone());
        }
        if r.is_unit() {
            right.add_term(l.clone(), c.clone());
        }
    }
    (left, right)
}

/// An operated monoid (A, ·, 1, P) together with a map X → A.
pub trait OperatedTarget {
    type Value;

    fn unit(&self) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn op(&self, a: &Self::Value) -> Self::Value;
    fn letter(&self, x: &Letter) -> Self::Value;
}

/// An [`OperatedTarget`] assembled from closures.
pub struct OperatedTargetHooks<A> {
    pub unit: A,
    pub mul: Box<dyn Fn(&A, &A) -> A + Send + Sync>,
    pub op: Box<dyn Fn(&A) -> A + Send + Sync>,
    pub letter: Box<dyn Fn(&Letter) -> A + Send + Sync>,
}

impl<A: Clone> OperatedTarget for OperatedTargetHooks<A> {
    type Value = A;

    fn unit(&self) -> A {
        self.unit.clone()
    }

    fn mul(&self, a: &A, b: &A) -> A {
        (self.mul)(a, b)
    }

    fn op(&self, a: &A) -> A {
        (self.op)(a)
    }

    fn letter(&self, x: &Letter) -> A {
        (self.letter)(x)
    }
}

/// The operated-monoid morphism from leaf-decorated forests determined by
/// `letter`: 1 ↦ unit, •ₓ ↦ letter(x), B⁺_σ(g) ↦ op(g), concatenation ↦ mul.
pub fn evaluate_operated<H: OperatedTarget>(f: &Forest, hooks: &H) -> Result<H::Value> {
    fn tree<H: OperatedTarget>(t: &Tree, hooks: &H, whole: &Forest) -> Result<H::Value> {
        match t.dec() {
            Decoration::Sigma => Ok(hooks.op(&forest(t.children(), hooks, whole)?)),
            Decoration::Letter(x) if t.is_leaf() => Ok(hooks.letter(x)),
            Decoration::Letter(_) => Err(Error::OutsideFreeObject(whole.to_string())),
        }
    }
    fn forest<H: OperatedTarget>(f: &Forest, hooks: &H, whole: &Forest) -> Result<H::Value> {
        let mut trees = f.trees().iter();
        let Some(first) = trees.next() else {
            return Ok(hooks.unit());
        };
        let mut acc = tree(first, hooks, whole)?;
        for t in trees {
            acc = hooks.mul(&acc, &tree(t, hooks, whole)?);
        }
        Ok(acc)
    }
    forest(f, hooks, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::Alphabet;
    use crate::scalar::{rational, Rational};

    fn al() -> Alphabet {
        Alphabet::new(&["x", "y", "z"]).unwrap()
    }

    fn fo(s: &str) -> Forest {
        Forest::parse(s, &al()).unwrap()
    }

    fn lc(s: &str) -> LinComb {
        LinComb::parse(s, &al()).unwrap()
    }

    fn t(pairs: &[(&str, &str)]) -> TensorComb {
        pairs
            .iter()
            .map(|(l, r)| ((fo(l), fo(r)), WeightPoly::one()))
            .collect()
    }

    fn tree(s: &str) -> Tree {
        fo(s).into_trees().pop().unwrap()
    }

    #[test]
    fn coproduct_examples() {
        assert_eq!(coproduct_ck(&lc("x")), t(&[("x", "1"), ("1", "x")]));
        assert_eq!(
            coproduct_ck(&lc("[x]")),
            t(&[("[x]", "1"), ("x", "[]"), ("1", "[x]")])
        );
        assert_eq!(
            coproduct_ck(&lc("x y")),
            t(&[("x y", "1"), ("x", "y"), ("y", "x"), ("1", "x y")])
        );
        assert_eq!(coproduct_ck(&lc("1")), t(&[("1", "1")]));
        assert!(coproduct_ck(&LinComb::zero()).is_zero());
    }

    #[test]
    fn coproduct_on_letter_rooted_tree() {
        // Δ(B⁺_x(•_y)) = x{y} ⊗ 1 + y ⊗ x + 1 ⊗ x{y}
        assert_eq!(
            coproduct_ck(&lc("x{y}")),
            t(&[("x{y}", "1"), ("y", "x"), ("1", "x{y}")])
        );
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            coproduct_subforest_oracle(&tree("x")),
            t(&[("x", "1"), ("1", "x")])
        );
        assert_eq!(
            coproduct_subforest_oracle(&tree("[x]")),
            t(&[("[x]", "1"), ("x", "[]"), ("1", "[x]")])
        );
        assert_eq!(
            coproduct_subforest_oracle(&tree("[x y]")),
            t(&[
                ("[x y]", "1"),
                ("x", "[y]"),
                ("y", "[x]"),
                ("x y", "[]"),
                ("1", "[x y]")
            ])
        );
    }

    #[test]
    fn oracle_matches_recursion_on_a_deep_tree() {
        let tr = tree("[[x] y [z [x]]]");
        assert_eq!(coproduct_subforest_oracle(&tr), coproduct_tree(&tr));
    }

    #[test]
    fn counit_examples() {
        assert_eq!(counit_ck(&lc("1")), WeightPoly::one());
        assert_eq!(counit_ck(&lc("x")), WeightPoly::zero());
        assert_eq!(counit_ck(&lc("3 + 2*[x]")), WeightPoly::integer(3));
    }

    #[test]
    fn antipode_examples() {
        assert_eq!(antipode_ck(&lc("1")), lc("1"));
        assert_eq!(antipode_ck(&lc("x")), lc("-x"));
        assert_eq!(antipode_ck(&lc("[x]")), lc("-[x] + x []"));
        assert_eq!(antipode_ck(&lc("[x]")).to_string(), "-[x] + x []");
        // S is an antimorphism for concatenation: S(xy) = S(y)S(x) = y x.
        assert_eq!(antipode_ck(&lc("x y")), lc("y x"));
        assert_eq!(
            antipode_ck_right(&lc("[x [y]] z")),
            antipode_ck(&lc("[x [y]] z"))
        );
    }

    #[test]
    fn antipode_law_on_a_sample() {
        let f = fo("[x [y]] z");
        let delta = coproduct_forest(&f);
        for side in [Side::Left, Side::Right] {
            let conv = convolve_with_antipode(
                &delta,
                &mut |g| Ok(antipode_ck(&LinComb::of(g.clone()))),
                &mut |a, b| Ok(concat_basis(a, b)),
                side,
            )
            .unwrap();
            assert!(conv.is_zero());
        }
    }

    fn string_hooks() -> OperatedTargetHooks<String> {
        OperatedTargetHooks {
            unit: String::new(),
            mul: Box::new(|a, b| format!("{a}{b}")),
            op: Box::new(|w| format!("B({w})")),
            letter: Box::new(|x| x.to_string()),
        }
    }

    #[test]
    fn fold_examples() {
        assert_eq!(
            evaluate_operated(&fo("[x] y"), &string_hooks()).unwrap(),
            "B(x)y"
        );
        assert_eq!(evaluate_operated(&fo("1"), &string_hooks()).unwrap(), "");
        assert_eq!(
            evaluate_operated(&fo("[]"), &string_hooks()).unwrap(),
            "B()"
        );
        let q = OperatedTargetHooks::<Rational> {
            unit: rational(1, 1),
            mul: Box::new(|a, b| a * b),
            op: Box::new(|a| a.clone()),
            letter: Box::new(|_| rational(1, 1)),
        };
        assert_eq!(evaluate_operated(&fo("[x] y"), &q).unwrap(), rational(1, 1));
        assert!(matches!(
            evaluate_operated(&fo("x{y}"), &string_hooks()),
            Err(Error::OutsideFreeObject(_))
        ));
    }

    #[test]
    fn fold_morphism_laws() {
        let h = string_hooks();
        let f = fo("[x []] y");
        let g = fo("[[z]]");
        let ev = |f: &Forest| evaluate_operated(f, &h).unwrap();
        assert_eq!(ev(&f.concat(&g)), h.mul(&ev(&f), &ev(&g)));
        assert_eq!(ev(&f.graft(Decoration::Sigma).into_forest()), h.op(&ev(&f)));
    }

    #[test]
    fn iterated_coproducts_agree() {
        let delta = coproduct_forest(&fo("[x [y]]"));
        let mut d = |f: &Forest| Ok(coproduct_forest(f));
        assert_eq!(
            iterate_left(&delta, &mut d).unwrap(),
            iterate_right(&delta, &mut d).unwrap()
        );
        let (l, r) = counit_legs(&delta);
        assert_eq!(l, lc("[x [y]]"));
        assert_eq!(r, lc("[x [y]]"));
    }
}
