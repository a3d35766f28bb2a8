//! Reproduction of the reference table of privacy levels at 12 categories.
//!
//! Four families, three parameter values each. The reference percentages are
//! printed next to the computed ones, and cells that differ by more than one
//! percentage point are marked `MISMATCH`.

use std::fmt::Write as _;

use bistochastic::constructors::{
    anatomy_matrix, constant_circulant, constant_tridiagonal, dp_matrix,
};
use bistochastic::entropy::beta;
use bistochastic::{AnatomyPartition, BistochasticMatrix};

use crate::error::{CliError, Result};

pub const SIZE: usize = 12;
/// Largest gap, in percentage points, still reported as agreement.
pub const AGREEMENT_POINTS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parametrization {
    DifferentialPrivacy,
    KAnonymity,
    Tridiagonal,
    Circulant,
}

impl Parametrization {
    pub fn label(self) -> &'static str {
        match self {
            Parametrization::DifferentialPrivacy => "differential privacy",
            Parametrization::KAnonymity => "k-anonymity",
            Parametrization::Tridiagonal => "tridiagonal matrix",
            Parametrization::Circulant => "circulant matrix",
        }
    }

    pub fn parameter_name(self) -> &'static str {
        match self {
            Parametrization::DifferentialPrivacy => "eps",
            Parametrization::KAnonymity => "k",
            Parametrization::Tridiagonal => "alpha",
            Parametrization::Circulant => "p11",
        }
    }

    pub fn build(self, parameter: f64) -> bistochastic::Result<BistochasticMatrix> {
        match self {
            Parametrization::DifferentialPrivacy => dp_matrix(SIZE, parameter),
            Parametrization::KAnonymity => {
                anatomy_matrix(&AnatomyPartition::contiguous(SIZE, parameter as usize)?)
            }
            Parametrization::Tridiagonal => constant_tridiagonal(SIZE, parameter),
            Parametrization::Circulant => constant_circulant(SIZE, parameter),
        }
    }
}

/// (family, parameter, reference percentage)
pub const REFERENCE: [(Parametrization, f64, f64); 12] = [
    (Parametrization::DifferentialPrivacy, 5.0, 17.0),
    (Parametrization::DifferentialPrivacy, 3.0, 60.0),
    (Parametrization::DifferentialPrivacy, 1.0, 97.0),
    (Parametrization::KAnonymity, 2.0, 28.0),
    (Parametrization::KAnonymity, 3.0, 56.0),
    (Parametrization::KAnonymity, 6.0, 72.0),
    (Parametrization::Tridiagonal, 0.1, 24.0),
    (Parametrization::Tridiagonal, 0.3, 35.0),
    (Parametrization::Tridiagonal, 0.4, 40.0),
    (Parametrization::Circulant, 0.9, 21.0),
    (Parametrization::Circulant, 0.6, 63.0),
    (Parametrization::Circulant, 0.2, 93.0),
];

#[derive(Debug, Clone, PartialEq)]
pub struct Table1Cell {
    pub family: Parametrization,
    pub parameter: f64,
    pub beta: f64,
    pub reference_percent: f64,
}

impl Table1Cell {
    pub fn computed_percent(&self) -> f64 {
        self.beta * 100.0
    }

    pub fn is_mismatch(&self) -> bool {
        (self.computed_percent() - self.reference_percent).abs() > AGREEMENT_POINTS
    }
}

/// Computes every cell; `gamma` ergodicizes matrices containing zeros first.
pub fn compute(gamma: Option<f64>) -> Result<Vec<Table1Cell>> {
    REFERENCE
        .iter()
        .map(|&(family, parameter, reference_percent)| {
            let ctx = |e| CliError::model(format!("{} {}", family.label(), parameter), e);
            let mut m = family.build(parameter).map_err(ctx)?;
            if let Some(g) = gamma {
                m = m.ergodicize(g).map_err(ctx)?;
            }
            Ok(Table1Cell {
                family,
                parameter,
                beta: beta(&m).map_err(ctx)?,
                reference_percent,
            })
        })
        .collect()
}

pub fn render(cells: &[Table1Cell], precision: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<22}  {:<10}  {:>9}  {:>9}  status",
        "parametrization", "parameter", "computed", "reference"
    );
    for c in cells {
        let _ = writeln!(
            out,
            "{:<22}  {:<10}  {:>9}  {:>9}  {}",
            c.family.label(),
            format!("{}={}", c.family.parameter_name(), c.parameter),
            format!("{:.*}%", precision, c.computed_percent()),
            format!("{}%", c.reference_percent),
            if c.is_mismatch() { "MISMATCH" } else { "ok" }
        );
    }
    out
}
