//! Multimodal sarcasm detection toolkit.
//!
//! The crate covers the full pipeline for detecting sarcasm in social-media
//! posts that pair text with an image:
//!
//! * [`corpus`]: post model, social-media tokenizer, collection quality
//!   filters and summary statistics.
//! * [`featvec`]: block-structured sparse/dense feature vectors.
//! * [`textfeat`]: lexical, subjectivity, n-gram, embedding and readability
//!   features over a post's token stream.
//! * [`visfeat`]: visual semantics (concept one-hots) and dense image
//!   representation vectors, with per-post aggregation over multiple images.
//! * [`svm`]: linear hinge-loss classifier trained by dual coordinate
//!   descent, used for the feature-concatenation fusion method.
//! * [`fusionnet`]: two-branch neural network that fuses a learned text
//!   representation with a fixed image vector.
//! * [`annotate`]: crowd-judgment aggregation, agreement statistics and
//!   gold-set construction.
//! * [`eval`]: balanced splits, accuracy, the platform/feature-set/regime
//!   experiment grid, and a synthetic incongruity corpus generator for
//!   end-to-end checks.
//! * [`reference`]: slow independent reimplementations of the trainers'
//!   math, kept for validation.
//!
//! All randomized behavior takes explicit seeds and is bit-reproducible.

pub mod annotate;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod featvec;
pub mod fusionnet;
pub mod reference;
pub mod svm;
pub mod textfeat;
pub mod visfeat;

pub use error::{Error, Result};
pub use featvec::{Block, BlockValue, FeatureVector, Layout};
