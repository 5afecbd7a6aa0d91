use anyhow::{bail, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

/// The knobs that can change a report's content. Output location, format
/// and thread count are deliberately absent so they do not move the hash.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub degree_bound: usize,
    pub product_bound: usize,
    pub step_limit: usize,
    pub residual_tolerance: f64,
    pub svd_threshold: f64,
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.degree_bound == 0 || self.product_bound == 0 || self.step_limit == 0 {
            bail!("--bound, --product-bound and --steps must be positive");
        }
        if self.product_bound > 4 {
            bail!("--product-bound is at most 4, got {}", self.product_bound);
        }
        if self.product_bound < self.degree_bound {
            bail!("--product-bound {} is below --bound {}", self.product_bound, self.degree_bound);
        }
        if !(self.residual_tolerance > 0.0 && self.residual_tolerance.is_finite()) {
            bail!("--tol must be a positive number");
        }
        if !(self.svd_threshold > 0.0 && self.svd_threshold.is_finite()) {
            bail!("--svd-threshold must be a positive number");
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON encoding, hex.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}
