use super::{
    hnap_check, sm_check, strict_monotonicity_check, strictly_monotone, um_modulus, umoe_modulus, wm_check,
    CheckConfig, Property, PropertyReport, Verdict,
};
use crate::error::Result;
use crate::norms::AbsoluteSpec;

/// Strongest first: each property implies the ones after it.
const CHAIN: [Property; 4] = [Property::Um, Property::Umoe, Property::Sm, Property::Wm];

#[derive(Clone, Debug)]
pub struct Classification {
    pub reports: Vec<PropertyReport>,
    /// Verdict patterns contradicting the implication chain. These point
    /// at estimator trouble, not at mathematics.
    pub inconsistencies: Vec<String>,
}

impl Classification {
    pub fn get(&self, p: Property) -> Option<&PropertyReport> {
        self.reports.iter().find(|r| r.property == p)
    }
}

pub fn check_property(spec: &AbsoluteSpec, property: Property, grid: &[f64], cfg: &CheckConfig) -> Result<PropertyReport> {
    match property {
        Property::Hnap => hnap_check(spec, cfg),
        Property::Um => um_modulus(spec, grid, cfg),
        Property::Umoe => umoe_modulus(spec, grid, cfg),
        Property::Sm => sm_check(spec, grid, cfg),
        Property::Wm => wm_check(spec, grid, cfg),
        Property::StrictMono if spec.dim() == 2 => strict_monotonicity_check(spec, cfg),
        Property::StrictMono => {
            let mut r = PropertyReport::new(Property::StrictMono, Verdict::Inconclusive);
            r.notes.push(format!(
                "sampled check needs dimension 2; structural answer {}",
                match strictly_monotone(spec) {
                    Some(true) => "strict",
                    Some(false) => "not strict",
                    None => "unknown",
                }
            ));
            Ok(r)
        }
    }
}

pub fn classify_properties(
    spec: &AbsoluteSpec,
    properties: &[Property],
    grid: &[f64],
    cfg: &CheckConfig,
) -> Result<Classification> {
    let reports = properties.iter().map(|p| check_property(spec, *p, grid, cfg)).collect::<Result<Vec<_>>>()?;
    let mut inconsistencies = Vec::new();
    for (i, strong) in CHAIN.iter().enumerate() {
        for weak in &CHAIN[i + 1..] {
            let s = reports.iter().find(|r| r.property == *strong);
            let w = reports.iter().find(|r| r.property == *weak);
            if let (Some(s), Some(w)) = (s, w) {
                if s.verdict.holds() && w.verdict == Verdict::FailsWitnessed {
                    inconsistencies.push(format!("{strong} {} but {weak} {}", s.verdict, w.verdict));
                }
            }
        }
    }
    Ok(Classification { reports, inconsistencies })
}

/// Every checker; the two-dimensional strictness check only in dimension 2.
pub fn classify(spec: &AbsoluteSpec, grid: &[f64], cfg: &CheckConfig) -> Result<Classification> {
    let props: Vec<Property> =
        Property::ALL.into_iter().filter(|p| *p != Property::StrictMono || spec.dim() == 2).collect();
    classify_properties(spec, &props, grid, cfg)
}
