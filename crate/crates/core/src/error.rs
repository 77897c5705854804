use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("unknown letter `{name}` at position {pos}")]
    UnknownLetter { name: String, pos: usize },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid JSON: {0}")]
    Json(String),

    /// `theta_inv` applied to a forest with a letter on an internal vertex.
    #[error("not in the image of θ: {0}")]
    NotInThetaImage(String),

    /// The universal fold applied outside the leaf-decorated forests.
    #[error("outside the free object on X: {0}")]
    OutsideFreeObject(String),

    #[error("φ undefined outside 𝐤ℱ_ℓ(X̃): {0}")]
    PhiUndefined(String),

    #[error("operand outside Ш(X): {0}")]
    NotRbf(String),

    #[error("unit has no decomposition")]
    UnitDecomposition,

    #[error("antipode only defined at weight 0")]
    UnsupportedWeight,

    /// The reduced coproduct failed to lower the vertex count, so the
    /// antipode recursion would not terminate.
    #[error("reduced coproduct of {0} is not of lower degree")]
    NotConnectedGraded(String),
}

impl Error {
    /// Domain errors are well-formed inputs outside an operation's domain.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::NotInThetaImage(_)
                | Error::OutsideFreeObject(_)
                | Error::PhiUndefined(_)
                | Error::NotRbf(_)
                | Error::UnitDecomposition
                | Error::NotConnectedGraded(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
