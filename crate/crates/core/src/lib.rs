//! Topic labeling for collections of article abstracts.
//!
//! The pipeline preprocesses text ([`textprep`]), fits LDA ([`lda`]) and
//! K-Means ([`kmeans`]) models, looks up the top-weighted word of every topic
//! in WordNet ([`wordnet`]) and picks the candidate label with the highest
//! Wu-Palmer similarity ([`labeler`]).

pub mod corpus;
pub mod embedding;
pub mod error;
pub mod kmeans;
pub mod labeler;
pub mod lda;
mod persist;
pub mod phrases;
pub mod textprep;
pub mod vocab;
pub mod wordnet;

pub use error::{Error, Result};
