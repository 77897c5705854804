//! Exact computation in the noncommutative Connes-Kreimer Hopf algebra of
//! decorated planar rooted forests and in the free Rota-Baxter algebra of
//! weight λ on Rota-Baxter forests.

pub mod checks;
pub mod ck_hopf;
pub mod error;
pub mod forest;
pub mod lincomb;
pub mod rota_baxter;
pub mod scalar;
mod syntax;
pub mod word;

pub use error::{Error, Result};
pub use forest::{enumerate_forests, Alphabet, Decoration, Forest, Letter, Tree};
pub use lincomb::{Comb, LinComb, Tensor3Comb, TensorComb};
pub use scalar::{Rational, Weight, WeightPoly};
pub use syntax::WEIGHT_SYMBOL;
pub use word::{theta, theta_inv, BracketedWord};
