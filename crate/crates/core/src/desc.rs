//! Serializable descriptions of domains, quadrature rules and weights.
//! Numbers are stored as `f64`; complex numbers as `[re, im]` pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{build_quadrature, Domain, DomainKind, QuadratureRule};
use crate::poly::Polynomial;
use crate::scalar::{c64, Cplx, Real};
use crate::weights::{GenericWeight, Representation, Weight};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainDesc {
    pub kind: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

impl DomainDesc {
    pub fn from_domain<T: Real>(d: &Domain<T>) -> Self {
        Self {
            kind: d.kind().name().to_string(),
            params: d.params().into_iter().map(Real::as_f64).collect(),
        }
    }

    pub fn to_domain<T: Real>(&self) -> Result<Domain<T>> {
        let kind = DomainKind::from_name(&self.kind)
            .ok_or_else(|| Error::UnsupportedDomain(format!("unknown domain kind {:?}", self.kind)))?;
        let params: Vec<T> = self.params.iter().map(|&p| T::lit(p)).collect();
        Domain::new(kind, &params)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleDesc {
    pub domain: DomainDesc,
    pub order: usize,
}

impl RuleDesc {
    pub fn from_rule<T: Real>(rule: &QuadratureRule<T>) -> Self {
        Self {
            domain: DomainDesc::from_domain(&rule.domain),
            order: rule.order,
        }
    }

    /// Rebuilds the rule; nodes and weights are regenerated, not stored.
    pub fn to_rule<T: Real>(&self) -> Result<QuadratureRule<T>> {
        build_quadrature(&self.domain.to_domain()?, self.order)
    }
}

/// `representation` is one of `holo_modulus_squared` (coefficients of `mu`),
/// `log_harmonic` (coefficients of `H`) or `generic_c1` (named `preset` with
/// `params`). Coefficients are listed from the constant term up.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightDesc {
    pub representation: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coefficients: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    pub domain: DomainDesc,
}

fn pairs<T: Real>(p: &Polynomial<T>) -> Vec<[f64; 2]> {
    p.coeffs().iter().map(|c| [c.re.as_f64(), c.im.as_f64()]).collect()
}

fn polynomial<T: Real>(pairs: &[[f64; 2]]) -> Result<Polynomial<T>> {
    if pairs.is_empty() {
        return Err(Error::Parameter("weight description has no coefficients".into()));
    }
    let coeffs: Vec<Cplx<T>> = pairs.iter().map(|&[re, im]| c64(re, im)).collect();
    Ok(Polynomial::new(coeffs))
}

impl WeightDesc {
    /// `rho = 1` on `domain`.
    pub fn constant(domain: DomainDesc) -> Self {
        Self {
            representation: "holo_modulus_squared".into(),
            coefficients: vec![[1.0, 0.0]],
            preset: None,
            params: vec![],
            domain,
        }
    }

    pub fn from_weight<T: Real>(w: &Weight<T>) -> Self {
        let domain = DomainDesc::from_domain(w.domain());
        let representation = w.representation().name().to_string();
        match w.representation() {
            Representation::HoloModulusSquared(p) | Representation::LogHarmonic(p) => Self {
                representation,
                coefficients: pairs(p),
                preset: None,
                params: vec![],
                domain,
            },
            Representation::GenericC1(g) => Self {
                representation,
                coefficients: vec![],
                preset: Some(g.name().to_string()),
                params: g.params().to_vec(),
                domain,
            },
        }
    }

    pub fn to_weight<T: Real>(&self) -> Result<Weight<T>> {
        let domain = self.domain.to_domain()?;
        match self.representation.as_str() {
            "holo_modulus_squared" => Weight::holo_modulus_squared(polynomial(&self.coefficients)?, domain),
            "log_harmonic" => Ok(Weight::log_harmonic(polynomial(&self.coefficients)?, domain)),
            "generic_c1" => {
                let name = self
                    .preset
                    .as_deref()
                    .ok_or_else(|| Error::Parameter("generic_c1 weight needs a preset name".into()))?;
                Ok(Weight::generic(GenericWeight::preset(name, &self.params)?, domain))
            }
            other => Err(Error::Representation(format!(
                "unknown weight representation {other:?}"
            ))),
        }
    }
}
