//! Exhaustive verification suites for the algebraic laws of both
//! structures. Each suite enumerates every input within a vertex bound,
//! evaluates the law exactly and collects the counterexamples.
//!
//! Instances are evaluated on the ambient rayon pool. Reports list
//! failures in enumeration order regardless of scheduling.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::ck_hopf::{
    antipode_ck, antipode_ck_right, convolve_with_antipode, coproduct_forest,
    coproduct_subforest_oracle, counit_legs, evaluate_operated, graft_lc, iterate_left,
    iterate_right, Side,
};
use crate::error::{Error, Result};
use crate::forest::{enumerate_forests, enumerate_trees, Alphabet, Decoration, Forest, Tree};
use crate::lincomb::{tensor_product_componentwise, Basis, Comb, LinComb, TensorComb};
use crate::rota_baxter::{
    antipode_rb, antipode_rb_right, coproduct_rb, coproduct_rb_forest, diamond, enumerate_rbf, phi,
    phi_forest, phi_tensor, RotaBaxterTarget,
};
use crate::scalar::{Weight, WeightPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    CoassocCk,
    CounitCk,
    MultiplicativeCk,
    CocycleCk,
    OracleCk,
    AntipodeCk,
    GradedCk,
    RbIdentity,
    DiamondAssoc,
    Wprod,
    PhiMorphism,
    PhiIdempotent,
    PhiFold,
    Compat,
    RbMultiplicative,
    RbCocycle,
    CoassocRb,
    AntipodeRb0,
    CogradedRb0,
    DegreeDropWitness,
}

impl Suite {
    pub const ALL: [Suite; 20] = [
        Suite::CoassocCk,
        Suite::CounitCk,
        Suite::MultiplicativeCk,
        Suite::CocycleCk,
        Suite::OracleCk,
        Suite::AntipodeCk,
        Suite::GradedCk,
        Suite::RbIdentity,
        Suite::DiamondAssoc,
        Suite::Wprod,
        Suite::PhiMorphism,
        Suite::PhiIdempotent,
        Suite::PhiFold,
        Suite::Compat,
        Suite::RbMultiplicative,
        Suite::RbCocycle,
        Suite::CoassocRb,
        Suite::AntipodeRb0,
        Suite::CogradedRb0,
        Suite::DegreeDropWitness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CoassocCk => "coassoc-ck",
            Suite::CounitCk => "counit-ck",
            Suite::MultiplicativeCk => "multiplicative-ck",
            Suite::CocycleCk => "cocycle-ck",
            Suite::OracleCk => "oracle-ck",
            Suite::AntipodeCk => "antipode-ck",
            Suite::GradedCk => "graded-ck",
            Suite::RbIdentity => "rb-identity",
            Suite::DiamondAssoc => "diamond-assoc",
            Suite::Wprod => "wprod",
            Suite::PhiMorphism => "phi-morphism",
            Suite::PhiIdempotent => "phi-idempotent",
            Suite::PhiFold => "phi-fold",
            Suite::Compat => "compat",
            Suite::RbMultiplicative => "rb-multiplicative",
            Suite::RbCocycle => "rb-cocycle",
            Suite::CoassocRb => "coassoc-rb",
            Suite::AntipodeRb0 => "antipode-rb0",
            Suite::CogradedRb0 => "cograded-rb0",
            Suite::DegreeDropWitness => "degree-drop-witness",
        }
    }

    /// Suites that only make sense at weight zero.
    pub fn requires_weight_zero(self) -> bool {
        matches!(self, Suite::AntipodeRb0 | Suite::CogradedRb0)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub suite: Suite,
    pub instances: usize,
    pub failures: Vec<Failure>,
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub alphabet: Alphabet,
    pub max_vertices: usize,
    /// `None` keeps λ symbolic. A fixed value specializes both sides of
    /// every law before comparing.
    pub weight: Option<Weight>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            alphabet: Alphabet::default(),
            max_vertices: 5,
            weight: None,
        }
    }
}

impl SuiteConfig {
    fn weight(&self) -> Weight {
        self.weight.clone().unwrap_or_default()
    }
}

type Outcome = Option<Failure>;

fn compare<K: Basis + Sync + Send>(
    input: impl FnOnce() -> String,
    expected: &Comb<K>,
    actual: &Comb<K>,
    weight: &Weight,
) -> Outcome {
    let (e, a) = (expected.specialize(weight), actual.specialize(weight));
    (e != a).then(|| Failure {
        input: input(),
        expected: e.to_string(),
        actual: a.to_string(),
    })
}

fn failed(input: String, expected: impl Into<String>, actual: impl Into<String>) -> Outcome {
    Some(Failure {
        input,
        expected: expected.into(),
        actual: actual.into(),
    })
}

fn from_error(input: String, e: Error) -> Outcome {
    failed(input, "a value", format!("error: {e}"))
}

fn run<I: Sync>(suite: Suite, inputs: Vec<I>, check: impl Fn(&I) -> Outcome + Sync) -> CheckReport {
    let start = Instant::now();
    let failures: Vec<Failure> = inputs.par_iter().filter_map(|i| check(i)).collect();
    CheckReport {
        suite,
        instances: inputs.len(),
        failures,
        elapsed: start.elapsed(),
    }
}

fn forests(cfg: &SuiteConfig, max: usize) -> Vec<Forest> {
    enumerate_forests(max, &cfg.alphabet, false).collect()
}

fn leaf_forests(cfg: &SuiteConfig, max: usize) -> Vec<Forest> {
    enumerate_forests(max, &cfg.alphabet, true).collect()
}

fn rbfs(cfg: &SuiteConfig, max: usize) -> Vec<Forest> {
    enumerate_rbf(max, &cfg.alphabet).collect()
}

/// Ordered pairs from `items` with total vertex count ≤ `max`.
fn pairs_within(items: &[Forest], max: usize) -> Vec<(Forest, Forest)> {
    let mut out = Vec::new();
    for f in items {
        for g in items {
            if f.vertex_count() + g.vertex_count() <= max {
                out.push((f.clone(), g.clone()));
            }
        }
    }
    out
}

fn triples_within(items: &[Forest], max: usize) -> Vec<(Forest, Forest, Forest)> {
    let mut out = Vec::new();
    for f in items {
        for g in items {
            if f.vertex_count() + g.vertex_count() > max {
                continue;
            }
            for h in items {
                if f.vertex_count() + g.vertex_count() + h.vertex_count() <= max {
                    out.push((f.clone(), g.clone(), h.clone()));
                }
            }
        }
    }
    out
}

fn of(f: &Forest) -> LinComb {
    LinComb::of(f.clone())
}

fn sigma(f: &Forest) -> Forest {
    f.graft(Decoration::Sigma).into_forest()
}

fn concat_basis(f: &Forest, g: &Forest) -> LinComb {
    LinComb::of(f.concat(g))
}

/// B⁺(F) ⊗ 1 + (id ⊗ B⁺)Δ(F).
fn cocycle_rhs(grafted: &Forest, delta: &TensorComb, dec: &Decoration) -> TensorComb {
    let mut rhs = TensorComb::of((grafted.clone(), Forest::unit()));
    for ((l, r), c) in delta.terms() {
        rhs.add_term((l.clone(), r.graft(dec.clone()).into_forest()), c.clone());
    }
    rhs
}

fn diamond_basis(f: &Forest, g: &Forest) -> LinComb {
    diamond(&of(f), &of(g)).expect("suite operands are RBFs")
}

/// Runs one suite.
///
/// Only the weight-zero suites can fail outright, with
/// [`Error::UnsupportedWeight`], when a nonzero weight is configured.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<CheckReport> {
    let n = cfg.max_vertices;
    let w = cfg.weight();
    if suite.requires_weight_zero() && cfg.weight.as_ref().is_some_and(|w| !w.is_zero()) {
        return Err(Error::UnsupportedWeight);
    }
    let report = match suite {
        Suite::CoassocCk => run(suite, forests(cfg, n), |f| {
            let delta = coproduct_forest(f);
            let mut d = |g: &Forest| Ok(coproduct_forest(g));
            let left = iterate_left(&delta, &mut d).unwrap();
            let right = iterate_right(&delta, &mut d).unwrap();
            compare(|| f.to_string(), &left, &right, &w)
        }),
        Suite::CounitCk => run(suite, forests(cfg, n), |f| {
            let (l, r) = counit_legs(&coproduct_forest(f));
            compare(|| f.to_string(), &of(f), &l, &w)
                .or_else(|| compare(|| f.to_string(), &of(f), &r, &w))
        }),
        Suite::MultiplicativeCk => run(suite, pairs_within(&forests(cfg, n), n), |(f, g)| {
            let lhs = coproduct_forest(&f.concat(g));
            let rhs = tensor_product_componentwise(
                &coproduct_forest(f),
                &coproduct_forest(g),
                concat_basis,
            );
            compare(|| format!("{f} | {g}"), &rhs, &lhs, &w)
        }),
        Suite::CocycleCk => {
            let decs = cfg.alphabet.decorations();
            let inputs: Vec<(Forest, Decoration)> = forests(cfg, n)
                .into_iter()
                .flat_map(|f| decs.iter().map(move |d| (f.clone(), d.clone())))
                .collect();
            run(suite, inputs, |(f, d)| {
                let grafted = f.graft(d.clone()).into_forest();
                let lhs = coproduct_forest(&grafted);
                let rhs = cocycle_rhs(&grafted, &coproduct_forest(f), d);
                compare(|| grafted.to_string(), &rhs, &lhs, &w)
            })
        }
        Suite::OracleCk => {
            let trees: Vec<Tree> = (1..=n)
                .flat_map(|k| enumerate_trees(k, &cfg.alphabet, false))
                .collect();
            run(suite, trees, |t| {
                let fast = coproduct_forest(&t.clone().into_forest());
                let oracle = coproduct_subforest_oracle(t);
                compare(|| t.to_string(), &oracle, &fast, &w)
            })
        }
        Suite::AntipodeCk => run(suite, forests(cfg, n), |f| {
            let delta = coproduct_forest(f);
            let unit = LinComb::term(Forest::unit(), of(f).unit_coeff());
            let left = antipode_ck(&of(f));
            let right = antipode_ck_right(&of(f));
            if let Some(fail) = compare(|| format!("S_left vs S_right at {f}"), &left, &right, &w) {
                return Some(fail);
            }
            for side in [Side::Left, Side::Right] {
                let conv = convolve_with_antipode(
                    &delta,
                    &mut |g| Ok(antipode_ck(&of(g))),
                    &mut |a, b| Ok(concat_basis(a, b)),
                    side,
                )
                .unwrap();
                if let Some(fail) =
                    compare(|| format!("{side:?} convolution at {f}"), &unit, &conv, &w)
                {
                    return Some(fail);
                }
            }
            None
        }),
        Suite::GradedCk => run(suite, forests(cfg, n), |f| {
            coproduct_forest(f)
                .basis()
                .find(|(l, r)| l.vertex_count() + r.vertex_count() != f.vertex_count())
                .map(|(l, r)| Failure {
                    input: f.to_string(),
                    expected: format!("degree {}", f.vertex_count()),
                    actual: format!("{l} (x) {r}"),
                })
        }),
        Suite::RbIdentity => run(suite, pairs_within(&rbfs(cfg, n), 2 * n), |(u, v)| {
            let pu = of(&sigma(u));
            let pv = of(&sigma(v));
            let lhs = diamond(&pu, &pv).unwrap();
            let mut inner = diamond(&of(u), &pv).unwrap();
            inner += &diamond(&pu, &of(v)).unwrap();
            inner.add_scaled(&WeightPoly::lambda(), &diamond(&of(u), &of(v)).unwrap());
            let rhs = graft_lc(&inner, &Decoration::Sigma);
            compare(|| format!("{u} | {v}"), &rhs, &lhs, &w)
        }),
        Suite::DiamondAssoc => run(suite, triples_within(&rbfs(cfg, n), n), |(f, g, h)| {
            let left = diamond(&diamond_basis(f, g), &of(h)).unwrap();
            let right = diamond(&of(f), &diamond_basis(g, h)).unwrap();
            compare(|| format!("{f} | {g} | {h}"), &left, &right, &w)
                .or_else(|| {
                    compare(
                        || format!("1 | {f}"),
                        &of(f),
                        &diamond_basis(&Forest::unit(), f),
                        &w,
                    )
                })
                .or_else(|| {
                    compare(
                        || format!("{f} | 1"),
                        &of(f),
                        &diamond_basis(f, &Forest::unit()),
                        &w,
                    )
                })
        }),
        Suite::Wprod => {
            let pairs: Vec<_> = pairs_within(&rbfs(cfg, n), n)
                .into_iter()
                .filter(|(f, g)| crate::rota_baxter::is_rbf(&f.concat(g)))
                .collect();
            run(suite, pairs, |(f, g)| {
                compare(
                    || format!("{f} | {g}"),
                    &concat_basis(f, g),
                    &diamond_basis(f, g),
                    &w,
                )
            })
        }
        Suite::PhiMorphism => run(suite, pairs_within(&leaf_forests(cfg, n), n), |(f, g)| {
            let phi_fg = phi_forest(&f.concat(g)).unwrap();
            let prod = diamond(&phi_forest(f).unwrap(), &phi_forest(g).unwrap()).unwrap();
            let op = phi_forest(&sigma(f)).unwrap();
            let op_rhs = graft_lc(&phi_forest(f).unwrap(), &Decoration::Sigma);
            compare(|| format!("{f} | {g}"), &prod, &phi_fg, &w)
                .or_else(|| compare(|| format!("B+({f})"), &op_rhs, &op, &w))
        }),
        Suite::PhiIdempotent => run(suite, leaf_forests(cfg, n), |f| {
            let once = phi_forest(f).unwrap();
            let twice = phi(&once).unwrap();
            if crate::rota_baxter::is_rbf(f) {
                if let Some(fail) = compare(|| format!("phi(i({f}))"), &of(f), &once, &w) {
                    return Some(fail);
                }
            }
            compare(|| format!("phi(i(phi({f})))"), &once, &twice, &w)
        }),
        Suite::PhiFold => run(suite, leaf_forests(cfg, n), |f| {
            match evaluate_operated(f, &RotaBaxterTarget) {
                Ok(folded) => compare(|| f.to_string(), &phi_forest(f).unwrap(), &folded, &w),
                Err(e) => from_error(f.to_string(), e),
            }
        }),
        Suite::Compat => run(suite, leaf_forests(cfg, n), |f| {
            let lhs = match coproduct_rb(&phi_forest(f).unwrap()) {
                Ok(t) => t,
                Err(e) => return from_error(f.to_string(), e),
            };
            let rhs = phi_tensor(&coproduct_forest(f));
            compare(|| f.to_string(), &rhs, &lhs, &w)
        }),
        Suite::RbMultiplicative => run(suite, pairs_within(&rbfs(cfg, n), n), |(f, g)| {
            let lhs = coproduct_rb(&diamond_basis(f, g)).unwrap();
            let rhs = tensor_product_componentwise(
                &coproduct_rb_forest(f).unwrap(),
                &coproduct_rb_forest(g).unwrap(),
                diamond_basis,
            );
            compare(|| format!("{f} | {g}"), &rhs, &lhs, &w)
        }),
        Suite::RbCocycle => run(suite, rbfs(cfg, n), |f| {
            let grafted = sigma(f);
            let lhs = coproduct_rb_forest(&grafted).unwrap();
            let rhs = cocycle_rhs(
                &grafted,
                &coproduct_rb_forest(f).unwrap(),
                &Decoration::Sigma,
            );
            compare(|| grafted.to_string(), &rhs, &lhs, &w)
        }),
        Suite::CoassocRb => run(suite, rbfs(cfg, n), |f| {
            let delta = coproduct_rb_forest(f).unwrap();
            let mut d = |g: &Forest| coproduct_rb_forest(g);
            let left = iterate_left(&delta, &mut d).unwrap();
            let right = iterate_right(&delta, &mut d).unwrap();
            let (cl, cr) = counit_legs(&delta);
            compare(|| f.to_string(), &left, &right, &w)
                .or_else(|| compare(|| format!("(e x id) at {f}"), &of(f), &cl, &w))
                .or_else(|| compare(|| format!("(id x e) at {f}"), &of(f), &cr, &w))
        }),
        Suite::AntipodeRb0 => {
            let zero = Weight::zero();
            run(suite, rbfs(cfg, n), move |f| {
                let delta = coproduct_rb_forest(f).unwrap().specialize(&zero);
                let unit = LinComb::term(Forest::unit(), of(f).unit_coeff());
                let left = antipode_rb(&of(f), &zero);
                let right = antipode_rb_right(&of(f), &zero);
                let (left, right) = match (left, right) {
                    (Ok(l), Ok(r)) => (l, r),
                    (Err(e), _) | (_, Err(e)) => return from_error(f.to_string(), e),
                };
                if let Some(fail) =
                    compare(|| format!("S_left vs S_right at {f}"), &left, &right, &zero)
                {
                    return Some(fail);
                }
                for side in [Side::Left, Side::Right] {
                    let conv = convolve_with_antipode(
                        &delta,
                        &mut |g| antipode_rb(&of(g), &zero),
                        &mut |a, b| Ok(diamond_basis(a, b).specialize(&zero)),
                        side,
                    );
                    let conv = match conv {
                        Ok(c) => c,
                        Err(e) => return from_error(f.to_string(), e),
                    };
                    if let Some(fail) = compare(
                        || format!("{side:?} convolution at {f}"),
                        &unit,
                        &conv,
                        &zero,
                    ) {
                        return Some(fail);
                    }
                }
                None
            })
        }
        Suite::CogradedRb0 => {
            let zero = Weight::zero();
            run(suite, rbfs(cfg, n), move |f| {
                coproduct_rb_forest(f)
                    .unwrap()
                    .specialize(&zero)
                    .basis()
                    .find(|(l, r)| l.vertex_count() + r.vertex_count() != f.vertex_count())
                    .map(|(l, r)| Failure {
                        input: f.to_string(),
                        expected: format!("degree {}", f.vertex_count()),
                        actual: format!("{l} (x) {r}"),
                    })
            })
        }
        Suite::DegreeDropWitness => {
            let (f, left, right) = degree_drop_witness(&cfg.alphabet);
            run(suite, vec![f], |f| {
                let delta = coproduct_rb_forest(f).unwrap();
                let coeff = delta.coeff(&(left.clone(), right.clone()));
                let total = left.vertex_count() + right.vertex_count();
                if coeff != WeightPoly::lambda() || total >= f.vertex_count() {
                    failed(
                        f.to_string(),
                        format!("L*{left} (x) {right} of degree < {}", f.vertex_count()),
                        format!("{coeff} at degree {total}"),
                    )
                } else {
                    None
                }
            })
        }
    };
    Ok(report)
}

/// The forest [[x] y [z]] and the expected λ-term [x z] ⊗ [y] of its Δ⋄,
/// with x, y, z the first letters of the alphabet (cycled if fewer than
/// three).
pub fn degree_drop_witness(alphabet: &Alphabet) -> (Forest, Forest, Forest) {
    let letters = alphabet.letters();
    let pick = |i: usize| Tree::leaf(Decoration::Letter(letters[i % letters.len()].clone()));
    let (x, y, z) = (pick(0), pick(1), pick(2));
    let graft1 = |t: &Tree| Tree::graft(t.clone().into_forest(), Decoration::Sigma);
    let f = Forest::from_trees(vec![graft1(&x), y.clone(), graft1(&z)])
        .graft(Decoration::Sigma)
        .into_forest();
    let left = Forest::from_trees(vec![x, z])
        .graft(Decoration::Sigma)
        .into_forest();
    let right = graft1(&y).into_forest();
    (f, left, right)
}
