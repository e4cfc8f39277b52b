//! Automatic generation of labeled author-name-disambiguation data.
//!
//! Name instances are clustered on high-precision matching rules over three
//! identity features (assigned e-mail addresses, self-citation pairs and
//! shared coauthors). Clusters aggregate their members' features and the
//! rules are reapplied until no cluster can be merged. The resulting labels
//! train pairwise classifiers whose probabilities drive per-block
//! hierarchical agglomerative clustering.

pub mod clustering;
pub mod corpus;
pub mod disambiguator;
pub mod error;
pub mod evaluation;
pub mod matching;
pub mod synth;

pub use error::{Error, Result};
