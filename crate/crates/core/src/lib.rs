//! The Burr III-Weibull distribution: a competing-risk lifetime model with
//! survival `S(x) = (1 - (1 + x^-c)^-k) exp(-(x/λ)^β)` on `x > 0`.

pub mod curves;
pub mod data;
pub mod dist;
pub mod entropy;
pub mod error;
pub mod estimation;
pub mod measures;
pub mod moments;
pub mod order_stats;
pub mod params;
pub mod quad;
pub mod quantile;
pub mod rng;
pub mod sim;
pub mod special;

pub use data::{kevlar_dataset, load_dataset, DataFormat, Dataset};
pub use error::{BwError, Result};
pub use params::{validate_params, BwParams, SubModelParams};
