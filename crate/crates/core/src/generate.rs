//! Seeded instance generation with controlled processing-time heterogeneity
//! and release-date density.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::dispersion;
use crate::model::{Instance, Job};

/// Coefficient-of-variation class of the processing times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CvClass {
    Low,
    Medium,
    High,
}

impl CvClass {
    pub const ALL: [CvClass; 3] = [CvClass::Low, CvClass::Medium, CvClass::High];

    /// low: cv < 0.3, medium: 0.3 <= cv <= 0.6, high: cv > 0.6.
    pub fn classify(cv: f64) -> CvClass {
        if cv < 0.3 {
            CvClass::Low
        } else if cv <= 0.6 {
            CvClass::Medium
        } else {
            CvClass::High
        }
    }

    fn target(self) -> f64 {
        match self {
            CvClass::Low => 0.15,
            CvClass::Medium => 0.45,
            CvClass::High => 0.9,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CvClass::Low => "low",
            CvClass::Medium => "medium",
            CvClass::High => "high",
        }
    }
}

impl std::str::FromStr for CvClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "low" => Ok(CvClass::Low),
            "medium" => Ok(CvClass::Medium),
            "high" => Ok(CvClass::High),
            other => Err(Error::InvalidInput(format!("unknown cv class '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReleaseClass {
    Sparse,
    Moderate,
    Dense,
}

impl ReleaseClass {
    pub const ALL: [ReleaseClass; 3] = [ReleaseClass::Sparse, ReleaseClass::Moderate, ReleaseClass::Dense];

    /// Release span as a fraction of the horizon.
    fn span_fraction(self) -> f64 {
        match self {
            ReleaseClass::Sparse => 0.6,
            ReleaseClass::Moderate => 0.35,
            ReleaseClass::Dense => 0.08,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ReleaseClass::Sparse => "sparse",
            ReleaseClass::Moderate => "moderate",
            ReleaseClass::Dense => "dense",
        }
    }
}

impl std::str::FromStr for ReleaseClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sparse" => Ok(ReleaseClass::Sparse),
            "moderate" => Ok(ReleaseClass::Moderate),
            "dense" => Ok(ReleaseClass::Dense),
            other => Err(Error::InvalidInput(format!("unknown release class '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub m: usize,
    pub p_min: f64,
    pub p_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cv_target: Option<CvClass>,
    pub release_class: ReleaseClass,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        Self { n, m, p_min: 1.0, p_max: 50.0, cv_target: None, release_class: ReleaseClass::Moderate, seed }
    }

    pub fn with_p_range(mut self, p_min: f64, p_max: f64) -> Self {
        self.p_min = p_min;
        self.p_max = p_max;
        self
    }

    pub fn with_cv(mut self, cv: Option<CvClass>) -> Self {
        self.cv_target = cv;
        self
    }

    pub fn with_release(mut self, class: ReleaseClass) -> Self {
        self.release_class = class;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        if self.m < 1 {
            return Err(Error::InvalidInput("m must be at least 1".into()));
        }
        if !(self.p_min.is_finite() && self.p_min > 0.0) {
            return Err(Error::InvalidInput(format!("p_min must be positive, got {}", self.p_min)));
        }
        if !(self.p_max.is_finite() && self.p_min <= self.p_max) {
            return Err(Error::InvalidInput(format!("p_min ({}) must not exceed p_max ({})", self.p_min, self.p_max)));
        }
        Ok(())
    }

    /// Times are integral when the processing range allows it, else millesimal.
    fn resolution(&self) -> f64 {
        if self.p_min >= 1.0 {
            1.0
        } else {
            1e-3
        }
    }
}

const CV_ATTEMPTS: usize = 64;

/// Draws an instance from `spec`. The result is a pure function of `spec`.
pub fn generate_instance(spec: &GenSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let step = spec.resolution();
    let quantize = |x: f64| (x / step).round() * step;

    let p = match spec.cv_target {
        None => {
            let raw: Vec<f64> = (0..spec.n).map(|_| rng.gen::<f64>()).collect();
            raw.iter()
                .map(|u| quantize(spec.p_min + (spec.p_max - spec.p_min) * u).clamp(spec.p_min, spec.p_max))
                .collect()
        }
        Some(class) => shaped_processing_times(spec, class, &mut rng, &quantize)?,
    };

    let total: f64 = p.iter().sum();
    let s = spec.release_class.span_fraction();
    let span = s / (1.0 - s) * total;
    let w: Vec<f64> = (0..spec.n).map(|_| rng.gen::<f64>()).collect();
    let (lo, hi) = w.iter().fold((f64::MAX, f64::MIN), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    let r: Vec<f64> = w.iter().map(|&x| if hi > lo { quantize((x - lo) / (hi - lo) * span) } else { 0.0 }).collect();

    let jobs = p.into_iter().zip(r).enumerate().map(|(id, (p, r))| Job::new(id, p, r)).collect();
    Instance::new(jobs, spec.m)
}

/// Processing times `p_min + (p_max - p_min) * (u / u_max)^k`, with the exponent
/// found by bisection so the sample CV lands on the class target.
fn shaped_processing_times(
    spec: &GenSpec,
    class: CvClass,
    rng: &mut ChaCha8Rng,
    quantize: &dyn Fn(f64) -> f64,
) -> Result<Vec<f64>> {
    let target = class.target();
    for _ in 0..CV_ATTEMPTS {
        let u: Vec<f64> = (0..spec.n).map(|_| rng.gen_range(1e-6..1.0)).collect();
        let u_max = u.iter().cloned().fold(f64::MIN, f64::max);
        let shape = |k: f64| -> Vec<f64> {
            u.iter().map(|x| spec.p_min + (spec.p_max - spec.p_min) * (x / u_max).powf(k)).collect()
        };
        let cv_at = |k: f64| dispersion(&shape(k));

        let (mut lo, mut hi) = ((1e-4f64).ln(), (1e4f64).ln());
        if cv_at(lo.exp()) > target || cv_at(hi.exp()) < target {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if cv_at(mid.exp()) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let p: Vec<f64> =
            shape((0.5 * (lo + hi)).exp()).into_iter().map(|x| quantize(x).clamp(spec.p_min, spec.p_max)).collect();
        if CvClass::classify(dispersion(&p)) == class {
            return Ok(p);
        }
    }
    Err(Error::InvalidInput(format!(
        "cv class '{}' is unreachable for n={} with p in [{}, {}]",
        class.as_str(),
        spec.n,
        spec.p_min,
        spec.p_max
    )))
}
