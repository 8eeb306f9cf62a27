//! Information matrices of designs and the criteria built on their spectra.

use serde::Serialize;

use crate::basis::ModelBasis;
use crate::error::{Error, Result};
use crate::linalg::{ConditionNumber, SymMatrix};
use crate::simplex::{Design, MixturePoint};

/// `M(w) = sum_i w_i f(x_i) f(x_i)^T`.
pub fn information_matrix(d: &Design, b: &ModelBasis) -> Result<SymMatrix> {
    information_matrix_from(d.points(), d.weights(), b)
}

/// Same as [`information_matrix`] for a bare support and weight vector.
pub fn information_matrix_from(
    points: &[MixturePoint],
    weights: &[f64],
    b: &ModelBasis,
) -> Result<SymMatrix> {
    if points.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: points.len(),
            found: weights.len(),
        });
    }
    let mut m = SymMatrix::zeros(b.p());
    let mut f = Vec::with_capacity(b.p());
    for (x, &w) in points.iter().zip(weights) {
        b.eval_into(x, &mut f)?;
        if w != 0.0 {
            m.add_rank_one(w, &f);
        }
    }
    Ok(m)
}

/// Spectral summary of a design's information matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub p: usize,
    pub lambda_max: f64,
    pub lambda_min: f64,
    #[serde(serialize_with = "crate::io::serialize_extended")]
    pub kappa: f64,
    #[serde(serialize_with = "crate::io::serialize_extended")]
    pub log_det: f64,
}

pub fn evaluate(d: &Design, b: &ModelBasis) -> Result<MetricsReport> {
    let m = information_matrix(d, b)?;
    let s = m.spectrum()?;
    Ok(MetricsReport {
        p: b.p(),
        lambda_max: s.lambda_max(),
        lambda_min: s.lambda_min(),
        kappa: s.condition_number().value(),
        log_det: s.log_det(),
    })
}

pub fn design_condition_number(d: &Design, b: &ModelBasis) -> Result<ConditionNumber> {
    Ok(information_matrix(d, b)?.spectrum()?.condition_number())
}

/// `(det M(candidate) / det M(reference))^(1/p)`.
pub fn d_efficiency(candidate: &Design, reference: &Design, b: &ModelBasis) -> Result<f64> {
    let lc = information_matrix(candidate, b)?.spectrum()?.log_det();
    if !lc.is_finite() {
        return Err(Error::SingularDesign("candidate".into()));
    }
    let lr = information_matrix(reference, b)?.spectrum()?.log_det();
    if !lr.is_finite() {
        return Err(Error::SingularDesign("reference".into()));
    }
    Ok(((lc - lr) / b.p() as f64).exp())
}

/// `(kappa(reference_k) / kappa(other))^(1/p)`: the K-reference design's
/// condition number sits in the numerator.
pub fn k_efficiency(reference_k: &Design, other: &Design, b: &ModelBasis) -> Result<f64> {
    let kr = match design_condition_number(reference_k, b)? {
        ConditionNumber::Finite(v) => v,
        ConditionNumber::Infinite => return Err(Error::SingularDesign("reference".into())),
    };
    let ko = match design_condition_number(other, b)? {
        ConditionNumber::Finite(v) => v,
        ConditionNumber::Infinite => return Err(Error::SingularDesign("other".into())),
    };
    Ok((kr / ko).powf(1.0 / b.p() as f64))
}

/// D- and K-efficiency of the closed-form K-optimal second-order design
/// against the equal-weight `{q, 2}` lattice, and the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfficiencyReport {
    pub eff_d_of_k: f64,
    pub eff_k_of_d: f64,
}

pub fn efficiency_comparison(q: usize) -> Result<EfficiencyReport> {
    let b = ModelBasis::second(q)?;
    let k = crate::analytic::k_optimal_second_order(q)?;
    let d = Design::uniform(crate::simplex::simplex_lattice(q, 2)?)?;
    Ok(EfficiencyReport {
        eff_d_of_k: d_efficiency(&k, &d, &b)?,
        eff_k_of_d: k_efficiency(&k, &d, &b)?,
    })
}
