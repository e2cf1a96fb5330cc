use serde::Serialize;

use crate::generate::{CvClass, ReleaseClass};
use crate::metrics::dispersion;
use crate::model::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SizeTier {
    Small,
    Medium,
    Large,
}

impl SizeTier {
    /// small: n <= 50, medium: 50 < n <= 100, large: n > 100.
    pub fn classify(n: usize) -> SizeTier {
        match n {
            0..=50 => SizeTier::Small,
            51..=100 => SizeTier::Medium,
            _ => SizeTier::Large,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SizeTier::Small => "small",
            SizeTier::Medium => "medium",
            SizeTier::Large => "large",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceFeatures {
    pub cv_p: f64,
    /// `(max r - min r) / T`
    pub release_span_fraction: f64,
    /// Share of jobs released in `[0, 0.1 T]`.
    pub release_concentration: f64,
    pub size_tier: SizeTier,
    pub cv_class: CvClass,
    pub release_class: ReleaseClass,
}

pub fn characterize_instance(inst: &Instance) -> InstanceFeatures {
    let ps: Vec<f64> = inst.jobs().iter().map(|j| j.p).collect();
    let cv_p = dispersion(&ps);
    let horizon = inst.horizon();
    let min_r = inst.jobs().iter().map(|j| j.r).fold(f64::INFINITY, f64::min);
    let release_span_fraction = (inst.max_r() - min_r) / horizon;
    let early = inst.jobs().iter().filter(|j| j.r <= 0.1 * horizon).count();
    let release_concentration = early as f64 / inst.n() as f64;
    let release_class = if release_concentration >= 0.8 {
        ReleaseClass::Dense
    } else if release_span_fraction > 0.5 {
        ReleaseClass::Sparse
    } else {
        ReleaseClass::Moderate
    };
    InstanceFeatures {
        cv_p,
        release_span_fraction,
        release_concentration,
        size_tier: SizeTier::classify(inst.n()),
        cv_class: CvClass::classify(cv_p),
        release_class,
    }
}
