use serde::Serialize;
use thiserror::Error;

use crate::config::StudyParameter;

#[derive(Debug, Error, PartialEq)]
pub enum StudyError {
    #[error("study values must be strictly monotone with at least 3 entries")]
    InvalidValues,
    #[error("study insufficient: only {successful} of {total} rows produced a positive finite error")]
    Insufficient { successful: usize, total: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub value: f64,
    pub error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// Error against a refinement parameter with least-squares fitted rates.
///
/// `fitted_order` is `p` in `error ~ C h^p`, where `h` is the value itself for
/// `fd_step` and its reciprocal for the other parameters, so a positive order
/// always means convergence. `geometric_rate` is `q` in `error ~ C q^n` and is
/// only fitted for basis and quadrature orders.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub parameter: StudyParameter,
    pub rows: Vec<ConvergenceRow>,
    pub fitted_order: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometric_rate: Option<f64>,
}

impl ConvergenceTable {
    pub fn errors(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.error).collect()
    }

    /// True when every successful error is strictly below its predecessor.
    pub fn decreasing(&self) -> bool {
        self.errors().windows(2).all(|w| w[1] < w[0])
    }
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// Evaluates `error` at each value and fits the convergence rates. Rows whose
/// evaluation fails (or yields a nonpositive error) are recorded and left out
/// of the fit.
pub fn convergence_study<F>(
    parameter: StudyParameter,
    values: &[f64],
    mut error: F,
) -> Result<ConvergenceTable, StudyError>
where
    F: FnMut(f64) -> Result<f64, String>,
{
    let up = values.windows(2).all(|w| w[1] > w[0]);
    let down = values.windows(2).all(|w| w[1] < w[0]);
    if values.len() < 3 || !(up || down) {
        return Err(StudyError::InvalidValues);
    }
    let mut rows = Vec::with_capacity(values.len());
    for &v in values {
        let row = match error(v) {
            Ok(e) if e.is_finite() && e > 0.0 => ConvergenceRow {
                value: v,
                error: Some(e),
                failure: None,
            },
            Ok(e) => ConvergenceRow {
                value: v,
                error: None,
                failure: Some(format!("error {e} is not positive and finite")),
            },
            Err(msg) => ConvergenceRow {
                value: v,
                error: None,
                failure: Some(msg),
            },
        };
        rows.push(row);
    }
    let ok: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.error.map(|e| (r.value, e))).collect();
    if ok.len() < 3 {
        return Err(StudyError::Insufficient {
            successful: ok.len(),
            total: values.len(),
        });
    }
    let ln_e: Vec<f64> = ok.iter().map(|(_, e)| e.ln()).collect();
    let ln_v: Vec<f64> = ok.iter().map(|(v, _)| v.ln()).collect();
    let slope = fit_slope(&ln_v, &ln_e);
    let (fitted_order, geometric_rate) = match parameter {
        StudyParameter::FdStep => (slope, None),
        StudyParameter::GridResolution => (-slope, None),
        StudyParameter::BasisOrder | StudyParameter::QuadOrder => {
            let n: Vec<f64> = ok.iter().map(|(v, _)| *v).collect();
            (-slope, Some(fit_slope(&n, &ln_e).exp()))
        }
    };
    Ok(ConvergenceTable {
        parameter,
        rows,
        fitted_order,
        geometric_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_algebraic_order() {
        let t = convergence_study(StudyParameter::FdStep, &[0.1, 0.05, 0.025], |h| Ok(3.0 * h * h)).unwrap();
        assert!((t.fitted_order - 2.0).abs() < 1e-12);
        let t = convergence_study(
            StudyParameter::GridResolution,
            &[16.0, 32.0, 64.0],
            |n| Ok(n.powf(-1.5)),
        )
        .unwrap();
        assert!((t.fitted_order - 1.5).abs() < 1e-12);
        assert!(t.decreasing());
    }

    #[test]
    fn recovers_geometric_rate() {
        let t = convergence_study(StudyParameter::BasisOrder, &[10.0, 20.0, 30.0], |n| Ok(0.5f64.powf(n))).unwrap();
        assert!((t.geometric_rate.unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn too_few_successes() {
        let r = convergence_study(StudyParameter::FdStep, &[0.1, 0.05, 0.025], |h| {
            if h < 0.07 {
                Err("boom".into())
            } else {
                Ok(h)
            }
        });
        assert_eq!(
            r,
            Err(StudyError::Insufficient {
                successful: 1,
                total: 3
            })
        );
        assert_eq!(
            convergence_study(StudyParameter::FdStep, &[0.1, 0.2, 0.15], Ok),
            Err(StudyError::InvalidValues)
        );
    }
}
