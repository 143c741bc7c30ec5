//! Semidefinite programs: a small dense interior-point solver, the weighted
//! Lovász number, and the two-copy upper bounds on `Q({Sᵢ}, w)`.
//!
//! Problems are real symmetric and block diagonal. Complex Hermitian data
//! enter through the embedding `H ↦ [[Re H, −Im H], [Im H, Re H]]`.

mod programs;
mod solver;

pub use programs::{
    ladder_sdp, lovasz_theta, q_upper_ppt, q_upper_threehalf, QUpperResult, ThetaResult, PPT_PARAMETER_GUARD,
    THETA_GUARD,
};
pub use solver::{solve_sdp, SdpOptions, SdpSolution, SdpStatus, SDP_DIM_GUARD};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::C64;

/// Coefficient of a symmetric block matrix; an off-diagonal entry sets both
/// `(i, j)` and `(j, i)`. Repeated coordinates add up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SdpEntry {
    pub block: usize,
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdpConstraint {
    pub entries: Vec<SdpEntry>,
    pub rhs: f64,
}

/// `max ⟨C, X⟩ s.t. ⟨Aₖ, X⟩ = bₖ, X ⪰ 0` with `X` block diagonal.
///
/// JSON form: `{"blocks": [n₁, ..], "objective": [entry, ..],
/// "constraints": [{"entries": [entry, ..], "rhs": b}, ..]}` with
/// `entry = {"block", "i", "j", "value"}`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SdpProblem {
    pub blocks: Vec<usize>,
    pub objective: Vec<SdpEntry>,
    pub constraints: Vec<SdpConstraint>,
}

impl SdpProblem {
    pub fn validate(&self) -> Result<()> {
        let check = |e: &SdpEntry| -> Result<()> {
            let n = *self
                .blocks
                .get(e.block)
                .ok_or_else(|| Error::InvalidArgument(format!("block {} does not exist", e.block)))?;
            if e.i >= n || e.j >= n {
                return Err(Error::InvalidArgument(format!(
                    "entry ({}, {}) outside block {} of size {n}",
                    e.i, e.j, e.block
                )));
            }
            if !e.value.is_finite() {
                return Err(Error::InvalidArgument("non-finite SDP coefficient".into()));
            }
            Ok(())
        };
        self.objective.iter().try_for_each(check)?;
        for c in &self.constraints {
            c.entries.iter().try_for_each(check)?;
            if !c.rhs.is_finite() {
                return Err(Error::InvalidArgument("non-finite right-hand side".into()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: SdpProblem = serde_json::from_str(text)?;
        p.validate()?;
        Ok(p)
    }
}

/// Upper-triangle entries of the real embedding of a Hermitian matrix given
/// by its nonzero entries (both triangles present), scaled by `scale`.
pub(crate) fn embed_entries(block: usize, n: usize, entries: &[(usize, usize, C64)], scale: f64) -> Vec<SdpEntry> {
    let mut out = Vec::with_capacity(3 * entries.len());
    for &(i, j, h) in entries {
        let (re, im) = (h.re * scale, h.im * scale);
        if i <= j && re != 0.0 {
            out.push(SdpEntry { block, i, j, value: re });
            out.push(SdpEntry {
                block,
                i: n + i,
                j: n + j,
                value: re,
            });
        }
        if im != 0.0 {
            out.push(SdpEntry {
                block,
                i,
                j: n + j,
                value: -im,
            });
        }
    }
    out
}
