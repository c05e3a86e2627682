//! Steganalysis experimentation toolkit.
//!
//! The crate bundles three groups of functionality:
//!
//! * a continuous grey wolf optimizer with a classic and a Lévy-flight
//!   coefficient schedule ([`gwo`], [`levy`]), plus the benchmark functions
//!   and statistics used to compare the two ([`benchfns`]);
//! * an image pipeline that synthesizes cover images, embeds payloads by
//!   LSB matching ([`stegosim`]), converts them through a fixed colorspace
//!   ensemble ([`colorspace`]) and turns each plane into residual
//!   co-occurrence features ([`featpipe`]);
//! * a linear stego/cover classifier ([`classify`]) and a binary wrapper
//!   feature selector driven by the Lévy-flight optimizer ([`binsel`]).
//!
//! All randomness flows through keyed [`rng::RngStream`] values derived from
//! a single master seed, so results are bit-identical regardless of whether
//! the `parallel` feature (rayon) is enabled and how many worker threads run.

pub mod benchfns;
pub mod binsel;
pub mod classify;
pub mod colorspace;
pub mod error;
pub mod exec;
pub mod featpipe;
pub mod fmt;
pub mod gwo;
pub mod levy;
pub mod rng;
pub mod stegosim;

pub use error::{Error, Result};
