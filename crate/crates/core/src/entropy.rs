//! Entropy rate of a bistochastic matrix and the β privacy levels built on it.
//!
//! A bistochastic matrix has the uniform stationary distribution, so its
//! entropy rate is the plain average of its row entropies. The privacy level
//! of an attribute with `r` categories is that rate divided by `log2 r`, the
//! rate of the uniform matrix.
//!
//! | Function | Formula |
//! |---|---|
//! | [`entropy_rate`] | `H(P) = -(1/r) Σ_uv p_uv log2 p_uv` |
//! | [`beta`] | `H(P) / log2 r` |
//! | [`conservative_beta`] | `Σ_k H(P_k) / Σ_k log2 n_k` |
//! | [`joint_beta`] | `H(P_J) / log2 |joint domain|` |
//! | [`dp_epsilon_bound`] | `ln max_u (max_v p_uv / min_v p_uv)` |

use alloc::string::String;
use alloc::vec::Vec;

use crate::matrix::BistochasticMatrix;
use crate::{Error, Result};

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    let h: f64 = p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * libm::log2(x))
        .sum();
    // avoid returning -0.0 for point masses
    h.max(0.0)
}

/// Entropy rate in bits under the uniform stationary distribution.
///
/// Rows of a matrix with super slack are renormalized to sum to one first.
pub fn entropy_rate(m: &BistochasticMatrix) -> f64 {
    let r = m.size();
    let normalize = !m.is_strict();
    let total: f64 = m
        .entries()
        .iter_rows()
        .map(|row| {
            if normalize {
                let s: f64 = row.iter().sum();
                let scaled: Vec<f64> = row.iter().map(|v| v / s).collect();
                shannon_entropy(&scaled)
            } else {
                shannon_entropy(row)
            }
        })
        .sum();
    total / r as f64
}

/// Maximum number of bits that can be injected into attributes of the given sizes.
pub fn budget_bits(sizes: &[usize]) -> f64 {
    sizes.iter().map(|&n| libm::log2(n as f64)).sum()
}

/// Univariate privacy level `H(P) / log2 r`, clamped to `[0, 1]`.
pub fn beta(m: &BistochasticMatrix) -> Result<f64> {
    ratio(entropy_rate(m), m.size())
}

fn ratio(bits: f64, size: usize) -> Result<f64> {
    if size < 2 {
        return Err(Error::DegenerateSize);
    }
    Ok((bits / libm::log2(size as f64)).clamp(0.0, 1.0))
}

/// Conservative multivariate level: summed entropy rates over summed budgets.
pub fn conservative_beta(ms: &[BistochasticMatrix]) -> Result<f64> {
    if ms.is_empty() {
        return Err(Error::InvalidSize(0));
    }
    if ms.iter().any(|m| m.size() < 2) {
        return Err(Error::DegenerateSize);
    }
    let bits: f64 = ms.iter().map(entropy_rate).sum();
    let budget: f64 = ms.iter().map(|m| libm::log2(m.size() as f64)).sum();
    Ok((bits / budget).clamp(0.0, 1.0))
}

/// Level of a matrix acting on the joint domain of several attributes.
pub fn joint_beta(joint: &BistochasticMatrix, joint_size: usize) -> Result<f64> {
    if joint.size() != joint_size {
        return Err(Error::SizeMismatch {
            expected: joint_size,
            found: joint.size(),
        });
    }
    ratio(entropy_rate(joint), joint_size)
}

/// Smallest ε for which the matrix satisfies the randomized-response DP
/// condition. Infinite when some row mixes zero and positive entries.
pub fn dp_epsilon_bound(m: &BistochasticMatrix) -> f64 {
    let mut worst = 1.0f64;
    for row in m.entries().iter_rows() {
        let max = row.iter().copied().fold(0.0, f64::max);
        let min = row.iter().copied().fold(f64::INFINITY, f64::min);
        if max == 0.0 {
            continue;
        }
        if min == 0.0 {
            return f64::INFINITY;
        }
        worst = worst.max(max / min);
    }
    libm::log(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrivacyMode {
    Univariate,
    Conservative,
    Joint,
}

impl PrivacyMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PrivacyMode::Univariate => "univariate",
            PrivacyMode::Conservative => "conservative",
            PrivacyMode::Joint => "joint",
        }
    }
}

/// Entropy accounting for one attribute (or one joint domain).
#[derive(Debug, Clone, PartialEq)]
pub struct AttributePrivacy {
    pub name: String,
    pub size: usize,
    /// `H(P)` in bits.
    pub entropy_bits: f64,
    /// `H(P*) = log2 size` in bits.
    pub budget_bits: f64,
    pub beta: f64,
}

impl AttributePrivacy {
    pub fn measure(name: impl Into<String>, m: &BistochasticMatrix) -> Result<Self> {
        Ok(Self {
            name: name.into(),
            size: m.size(),
            entropy_bits: entropy_rate(m),
            budget_bits: budget_bits(&[m.size()]),
            beta: beta(m)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrivacyReport {
    pub per_attribute: Vec<AttributePrivacy>,
    pub aggregate_beta: f64,
    pub mode: PrivacyMode,
}

impl PrivacyReport {
    pub fn univariate(name: impl Into<String>, m: &BistochasticMatrix) -> Result<Self> {
        let attr = AttributePrivacy::measure(name, m)?;
        Ok(Self {
            aggregate_beta: attr.beta,
            per_attribute: alloc::vec![attr],
            mode: PrivacyMode::Univariate,
        })
    }

    /// One line per attribute plus the conservative aggregate.
    pub fn conservative<S: AsRef<str>>(names: &[S], ms: &[BistochasticMatrix]) -> Result<Self> {
        if names.len() != ms.len() {
            return Err(Error::LengthMismatch {
                left: names.len(),
                right: ms.len(),
            });
        }
        let per_attribute = names
            .iter()
            .zip(ms)
            .map(|(n, m)| AttributePrivacy::measure(n.as_ref(), m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            per_attribute,
            aggregate_beta: conservative_beta(ms)?,
            mode: PrivacyMode::Conservative,
        })
    }

    pub fn joint(
        name: impl Into<String>,
        m: &BistochasticMatrix,
        joint_size: usize,
    ) -> Result<Self> {
        let aggregate_beta = joint_beta(m, joint_size)?;
        Ok(Self {
            per_attribute: alloc::vec![AttributePrivacy::measure(name, m)?],
            aggregate_beta,
            mode: PrivacyMode::Joint,
        })
    }

    pub fn total_entropy_bits(&self) -> f64 {
        self.per_attribute.iter().map(|a| a.entropy_bits).sum()
    }

    pub fn total_budget_bits(&self) -> f64 {
        self.per_attribute.iter().map(|a| a.budget_bits).sum()
    }
}
