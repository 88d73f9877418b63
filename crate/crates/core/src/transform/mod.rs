//! Reformulations of a coalition game: the exact-cover BILP, its penalised
//! QUBO, and the equivalent Ising model.
//!
//! Binary solutions are `&[bool]` with entry `k` the selection of column `k`.
//! When printed as text, character `k` is `x_k`, so for two agents `"001"`
//! selects only the grand coalition.

mod bilp;
mod decode;
mod export;
mod ising;
mod qubo;

pub use bilp::{build_bilp, BilpInstance};
pub use decode::{decode_solution, DecodedSolution};
pub use export::{
    read_ising_json, read_qubo_json, read_qubo_text, write_ising_json, write_qubo_json,
    write_qubo_text,
};
pub use ising::{qubo_to_ising, IsingInstance};
pub use qubo::{build_qubo, default_lambda, interaction_count, qubo_energy, QuboInstance};

use crate::error::{Error, Result};

/// Renders a binary solution with character `k` holding `x_k`.
pub fn format_bits(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Config(format!("`{other}` is not a binary digit"))),
        })
        .collect()
}

/// Bits `0..m` of `mask` as a solution vector.
pub fn bits_from_mask(mask: u64, m: usize) -> Vec<bool> {
    (0..m).map(|k| mask >> k & 1 == 1).collect()
}

pub fn mask_from_bits(x: &[bool]) -> u64 {
    assert!(x.len() <= 64, "bit vector too long for a mask");
    x.iter()
        .enumerate()
        .fold(0, |acc, (k, &b)| acc | (u64::from(b) << k))
}
