use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, Schedule, EPS};

/// How the heterogeneity stride is derived when not given explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KappaRule {
    /// `ceil(log2(max p / min p))`
    #[default]
    Log2,
    /// `ceil(max p / min p)`
    Ratio,
}

/// How the bucket width is derived when not given explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaRule {
    /// Geometric mean of the processing times.
    #[default]
    GeometricMean,
    /// Shortest processing time.
    MinP,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridOptions {
    pub delta: Option<f64>,
    pub kappa: Option<usize>,
    pub delta_rule: DeltaRule,
    pub kappa_rule: KappaRule,
    /// Permit `delta > T` (a single-bucket grid).
    pub allow_coarse: bool,
    /// Reserve the top `psi_j` slice of every bucket. Disabling it is an ablation.
    pub phi: bool,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            delta: None,
            kappa: None,
            delta_rule: DeltaRule::default(),
            kappa_rule: KappaRule::default(),
            allow_coarse: false,
            phi: true,
        }
    }
}

impl GridOptions {
    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn with_kappa(mut self, kappa: usize) -> Self {
        self.kappa = Some(kappa);
        self
    }
}

/// Temporal discretization of `[0, T]` into `B` buckets of width `delta`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucketGrid {
    horizon: f64,
    delta: f64,
    buckets: usize,
    kappa: usize,
    psi: Vec<f64>,
    phi: bool,
}

pub fn geometric_mean_delta(inst: &Instance) -> f64 {
    let mean_ln = inst.jobs().iter().map(|j| j.p.ln()).sum::<f64>() / inst.n() as f64;
    mean_ln.exp()
}

pub fn auto_kappa(inst: &Instance, rule: KappaRule) -> usize {
    let ratio = inst.max_p() / inst.min_p();
    let k = match rule {
        KappaRule::Log2 => (ratio.log2() - EPS).ceil(),
        KappaRule::Ratio => (ratio - EPS).ceil(),
    };
    (k.max(1.0)) as usize
}

/// `floor(T / delta) + 1`.
pub fn bucket_count(horizon: f64, delta: f64) -> usize {
    (horizon / delta + EPS).floor() as usize + 1
}

/// Precision sensitivity: each job's share of the total processing time.
pub fn precision_sensitivity(inst: &Instance) -> Vec<f64> {
    let total = inst.total_processing();
    inst.jobs().iter().map(|j| j.p / total).collect()
}

pub fn build_grid(inst: &Instance, opts: &GridOptions) -> Result<BucketGrid> {
    let horizon = inst.horizon();
    let delta = match opts.delta {
        Some(d) => d,
        None => match opts.delta_rule {
            DeltaRule::GeometricMean => geometric_mean_delta(inst),
            DeltaRule::MinP => inst.min_p(),
        },
    };
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::Config(format!("bucket width must be positive, got {delta}")));
    }
    if delta > horizon && !opts.allow_coarse {
        return Err(Error::Config(format!(
            "bucket width {delta} exceeds the horizon {horizon}; the grid would have a single bucket \
             (pass the coarse-grid override to allow this)"
        )));
    }
    let kappa = match opts.kappa {
        Some(0) => return Err(Error::Config("kappa must be at least 1".into())),
        Some(k) => k,
        None => auto_kappa(inst, opts.kappa_rule),
    };
    Ok(BucketGrid {
        horizon,
        delta,
        buckets: bucket_count(horizon, delta),
        kappa,
        psi: precision_sensitivity(inst),
        phi: opts.phi,
    })
}

impl BucketGrid {
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn buckets(&self) -> usize {
        self.buckets
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn psi(&self) -> &[f64] {
        &self.psi
    }

    pub fn phi_enabled(&self) -> bool {
        self.phi
    }

    pub fn is_exact(&self, b: usize) -> bool {
        b.is_multiple_of(self.kappa)
    }

    pub fn exact_buckets(&self) -> Vec<usize> {
        (0..self.buckets).filter(|&b| self.is_exact(b)).collect()
    }

    pub fn approx_buckets(&self) -> Vec<usize> {
        (0..self.buckets).filter(|&b| !self.is_exact(b)).collect()
    }

    /// Fraction of buckets that are exact anchors.
    pub fn exact_share(&self) -> f64 {
        self.buckets.div_ceil(self.kappa) as f64 / self.buckets as f64
    }

    /// Usable fraction of a bucket for `job`: `1 - psi_j`, or 1 without compression.
    pub fn cap_fraction(&self, job: usize) -> f64 {
        if self.phi {
            1.0 - self.psi[job]
        } else {
            1.0
        }
    }

    pub fn bucket_start(&self, b: usize) -> f64 {
        b as f64 * self.delta
    }

    /// Latest admissible start of `job` inside bucket `b`.
    pub fn window_end(&self, b: usize, job: usize) -> f64 {
        (b as f64 + self.cap_fraction(job)) * self.delta
    }

    /// True when a start at `start` does not fit in bucket `b` for `job`.
    pub(crate) fn overflows(&self, b: usize, job: usize, start: f64) -> bool {
        start > self.window_end(b, job) + EPS || start >= self.bucket_start(b + 1) - EPS
    }

    /// `floor(t / delta)`, tolerant of rounding at bucket boundaries.
    pub fn bucket_index(&self, t: f64) -> usize {
        let idx = (t / self.delta + EPS).floor().max(0.0) as usize;
        idx.min(self.buckets - 1)
    }

    /// The bucket transform: `(floor(t / delta), phi(frac))` with the offset
    /// compressed to `[0, 1 - psi_j]` by clamping.
    pub fn bucket_of(&self, t: f64, job: usize) -> Result<(usize, f64)> {
        if !(t >= -EPS && t <= self.horizon + EPS) {
            return Err(Error::Domain(format!("time {t} lies outside [0, {}]", self.horizon)));
        }
        if job >= self.psi.len() {
            return Err(Error::Domain(format!("no job {job} in this grid")));
        }
        let t = t.max(0.0);
        let idx = self.bucket_index(t);
        let frac = (t / self.delta - idx as f64).clamp(0.0, 1.0);
        Ok((idx, frac.min(self.cap_fraction(job))))
    }

    /// Busy time of all machines falling inside each bucket.
    pub fn load_profile(&self, inst: &Instance, sched: &Schedule) -> Vec<f64> {
        let mut profile = vec![0.0; self.buckets];
        for e in &sched.entries {
            let (start, end) = (e.start, e.start + inst.job(e.job).p);
            let first = self.bucket_index(start);
            for (b, slot) in profile.iter_mut().enumerate().skip(first) {
                let lo = self.bucket_start(b).max(start);
                let hi = self.bucket_start(b + 1).min(end);
                if hi <= lo {
                    break;
                }
                *slot += hi - lo;
            }
        }
        profile
    }
}

/// The bucket difference operator: `profile[b] - profile[b - 1]`.
pub fn bucket_difference(profile: &[f64], b: usize) -> Result<f64> {
    if b == 0 || b >= profile.len() {
        return Err(Error::Domain(format!("difference index {b} must lie in [1, {})", profile.len())));
    }
    Ok(profile[b] - profile[b - 1])
}
