//! Exact probabilistic-entropy and transmission computations over categorical
//! contingency tensors.
//!
//! All probabilities are maximum-likelihood cell frequencies (count / total);
//! there is no smoothing or bias correction. Accumulation runs in double
//! precision over exact integer counts, always in lexicographic cell order,
//! so results are bit-reproducible for a given tensor.

mod tensor;
mod value;

pub use tensor::{Axis, Codebook, ContingencyTensor};
pub use value::{entropy, Distribution, InformationValue};
