//! Seeded Monte Carlo simulation of the human + aid generative model.
//!
//! Used as an independent check on the closed-form tandem rates: every trial
//! draws the state, the aid's observation and the human's observation, and
//! applies the same decision rules the analytic code integrates over.
//!
//! Trials are cut into fixed-size shards. Shard `i` draws from a ChaCha8
//! stream `i` keyed by the seed, so the output depends on the seed and the
//! trial count only, never on how many threads ran the shards.

use rand::distr::{Distribution, StandardUniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sdt::{dprime_from_rates, OperatingPoint, PayoffContext};
use crate::tandem::{tandem_performance, AidCharacteristics, ContingentCriteria, TandemPerformance};

/// Trials per shard.
pub const SHARD_TRIALS: u64 = 1 << 16;

/// Agreement band, in standard errors, used by [`verify_against_analytic`].
pub const Z_THRESHOLD: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig<T> {
    pub d_h: T,
    pub aid: AidCharacteristics<T>,
    pub criteria: ContingentCriteria<T>,
    pub p_signal: T,
    pub n_trials: u64,
    pub seed: u64,
}

impl<T: Scalar> SimConfig<T> {
    pub fn new(
        d_h: T,
        aid: AidCharacteristics<T>,
        criteria: ContingentCriteria<T>,
        p_signal: T,
        n_trials: u64,
        seed: u64,
    ) -> Result<Self> {
        let config = Self {
            d_h,
            aid,
            criteria,
            p_signal,
            n_trials,
            seed,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::InvalidParameter("n_trials must be at least 1".into()));
        }
        if !(self.d_h > T::zero()) || !self.d_h.is_finite() {
            return Err(Error::DegenerateDetector(self.d_h.to_f64().unwrap_or(f64::NAN)));
        }
        if !(self.p_signal > T::zero() && self.p_signal < T::one()) {
            return Err(Error::InvalidParameter(
                "p_signal must lie strictly inside (0, 1)".into(),
            ));
        }
        let finite = [
            self.aid.dprime_a,
            self.aid.criterion_a,
            self.criteria.ln_beta_alert,
            self.criteria.ln_beta_no_alert,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("simulation parameters must be finite".into()));
        }
        Ok(())
    }

    fn shard_count(&self) -> u64 {
        self.n_trials.div_ceil(SHARD_TRIALS)
    }
}

/// Outcome tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl Counts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn signal_trials(&self) -> u64 {
        self.tp + self.fn_
    }

    pub fn noise_trials(&self) -> u64 {
        self.fp + self.tn
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StandardErrors<T> {
    pub p_tp: Option<T>,
    pub p_fp: Option<T>,
    pub payoff: T,
}

/// Sample correlation between the aid's and the human's observations within
/// each state. Should be zero up to sampling noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservationCorrelation<T> {
    pub signal: Option<T>,
    pub noise: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult<T> {
    pub n_trials: u64,
    pub counts: Counts,
    /// `None` when one of the states never occurred.
    pub empirical_op: Option<OperatingPoint<T>>,
    pub empirical_payoff: T,
    pub standard_errors: StandardErrors<T>,
    pub observation_correlation: ObservationCorrelation<T>,
}

impl<T: Scalar> SimResult<T> {
    /// `d'` recovered from the empirical rates after clamping.
    pub fn empirical_dprime(&self) -> Option<Result<T>> {
        self.empirical_op.map(|op| dprime_from_rates(&op.clamped()))
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments<T> {
    n: u64,
    sx: T,
    sy: T,
    sxx: T,
    syy: T,
    sxy: T,
}

impl<T: Scalar> Moments<T> {
    fn push(&mut self, x: T, y: T) {
        self.n += 1;
        self.sx = self.sx + x;
        self.sy = self.sy + y;
        self.sxx = self.sxx + x * x;
        self.syy = self.syy + y * y;
        self.sxy = self.sxy + x * y;
    }

    fn merge(&mut self, other: &Self) {
        self.n += other.n;
        self.sx = self.sx + other.sx;
        self.sy = self.sy + other.sy;
        self.sxx = self.sxx + other.sxx;
        self.syy = self.syy + other.syy;
        self.sxy = self.sxy + other.sxy;
    }

    fn correlation(&self) -> Option<T> {
        if self.n < 2 {
            return None;
        }
        let n = T::from_u64(self.n)?;
        let cov = self.sxy - self.sx * self.sy / n;
        let vx = self.sxx - self.sx * self.sx / n;
        let vy = self.syy - self.sy * self.sy / n;
        let denom = (vx * vy).sqrt();
        (denom > T::zero()).then(|| cov / denom)
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally<T> {
    counts: Counts,
    signal: Moments<T>,
    noise: Moments<T>,
}

impl<T: Scalar> Tally<T> {
    fn merge(mut self, other: &Self) -> Self {
        self.counts.tp += other.counts.tp;
        self.counts.fp += other.counts.fp;
        self.counts.tn += other.counts.tn;
        self.counts.fn_ += other.counts.fn_;
        self.signal.merge(&other.signal);
        self.noise.merge(&other.noise);
        self
    }
}

fn run_shard<T>(config: &SimConfig<T>, shard: u64) -> Tally<T>
where
    T: Scalar,
    StandardNormal: Distribution<T>,
    StandardUniform: Distribution<T>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(shard);
    let start = shard * SHARD_TRIALS;
    let trials = SHARD_TRIALS.min(config.n_trials - start);

    let half_a = config.aid.dprime_a * T::half();
    let half_h = config.d_h * T::half();
    let c_alert = config.criteria.ln_beta_alert / config.d_h;
    let c_silent = config.criteria.ln_beta_no_alert / config.d_h;

    let mut tally = Tally::<T>::default();
    for _ in 0..trials {
        let signal = rng.random::<T>() < config.p_signal;
        let aid_obs = if signal { half_a } else { -half_a } + rng.sample::<T, _>(StandardNormal);
        let human_obs = if signal { half_h } else { -half_h } + rng.sample::<T, _>(StandardNormal);
        let alert = aid_obs > config.aid.criterion_a;
        let says_signal = human_obs > if alert { c_alert } else { c_silent };
        match (signal, says_signal) {
            (true, true) => tally.counts.tp += 1,
            (true, false) => tally.counts.fn_ += 1,
            (false, true) => tally.counts.fp += 1,
            (false, false) => tally.counts.tn += 1,
        }
        if signal {
            tally.signal.push(aid_obs, human_obs);
        } else {
            tally.noise.push(aid_obs, human_obs);
        }
    }
    tally
}

fn finish<T: Scalar>(config: &SimConfig<T>, ctx: &PayoffContext<T>, tally: Tally<T>) -> SimResult<T> {
    let counts = tally.counts;
    let n = T::from_u64(config.n_trials).expect("trial count fits in scalar");
    let ratio = |k: u64, of: u64| -> Option<T> { (of > 0).then(|| T::from_u64(k).unwrap() / T::from_u64(of).unwrap()) };
    let p_tp = ratio(counts.tp, counts.signal_trials());
    let p_fp = ratio(counts.fp, counts.noise_trials());
    let empirical_op = match (p_tp, p_fp) {
        (Some(tp), Some(fp)) => OperatingPoint::new(tp, fp).ok(),
        _ => None,
    };

    let outcomes = [
        (counts.tp, ctx.j_tp),
        (counts.fn_, ctx.j_fn),
        (counts.fp, ctx.j_fp),
        (counts.tn, ctx.j_tn),
    ];
    let freq = |k: u64| T::from_u64(k).unwrap() / n;
    let mean: T = outcomes.iter().map(|&(k, j)| freq(k) * j).sum();
    let mean_sq: T = outcomes.iter().map(|&(k, j)| freq(k) * j * j).sum();
    let binomial_se = |p: Option<T>, of: u64| p.map(|p| (p * (T::one() - p) / T::from_u64(of).unwrap()).sqrt());

    SimResult {
        n_trials: config.n_trials,
        counts,
        empirical_op,
        empirical_payoff: mean,
        standard_errors: StandardErrors {
            p_tp: binomial_se(p_tp, counts.signal_trials()),
            p_fp: binomial_se(p_fp, counts.noise_trials()),
            payoff: ((mean_sq - mean * mean).max(T::zero()) / n).sqrt(),
        },
        observation_correlation: ObservationCorrelation {
            signal: tally.signal.correlation(),
            noise: tally.noise.correlation(),
        },
    }
}

fn check_context<T: Scalar>(config: &SimConfig<T>, ctx: &PayoffContext<T>) -> Result<()> {
    config.validate()?;
    if config.p_signal != ctx.p_signal {
        return Err(Error::InvalidParameter(
            "simulation prior and payoff-context prior differ".into(),
        ));
    }
    Ok(())
}

/// Runs the simulation, shards in parallel.
pub fn simulate<T>(config: &SimConfig<T>, ctx: &PayoffContext<T>) -> Result<SimResult<T>>
where
    T: Scalar,
    StandardNormal: Distribution<T>,
    StandardUniform: Distribution<T>,
{
    check_context(config, ctx)?;
    let shards: Vec<Tally<T>> = (0..config.shard_count())
        .into_par_iter()
        .map(|i| run_shard(config, i))
        .collect();
    let total = shards.iter().fold(Tally::default(), |acc, t| acc.merge(t));
    Ok(finish(config, ctx, total))
}

/// Same shard plan as [`simulate`], executed on the calling thread.
pub fn simulate_sequential<T>(config: &SimConfig<T>, ctx: &PayoffContext<T>) -> Result<SimResult<T>>
where
    T: Scalar,
    StandardNormal: Distribution<T>,
    StandardUniform: Distribution<T>,
{
    check_context(config, ctx)?;
    let total = (0..config.shard_count())
        .map(|i| run_shard(config, i))
        .fold(Tally::default(), |acc, t| acc.merge(&t));
    Ok(finish(config, ctx, total))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantityCheck<T> {
    pub quantity: String,
    pub analytic: T,
    pub empirical: T,
    pub standard_error: T,
    pub z_score: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport<T> {
    pub passed: bool,
    pub z_threshold: T,
    pub checks: Vec<QuantityCheck<T>>,
}

fn z_score<T: Scalar>(empirical: T, analytic: T, se: T) -> T {
    let diff = empirical - analytic;
    if se > T::zero() {
        diff / se
    } else if diff == T::zero() {
        T::zero()
    } else {
        diff.signum() * T::infinity()
    }
}

/// Compares simulated rates and payoff with an analytic prediction.
///
/// Standard errors come from the analytic probabilities: binomial for the two
/// rates (conditioned on the simulated number of trials in each state) and
/// the per-trial payoff spread for the payoff.
pub fn compare_with_analytic<T: Scalar>(
    result: &SimResult<T>,
    analytic: &TandemPerformance<T>,
    ctx: &PayoffContext<T>,
) -> VerificationReport<T> {
    let mut checks = Vec::with_capacity(3);
    let op = &analytic.operating_point;
    let counts = &result.counts;
    let rate_check = |name: &str, emp: Option<T>, p: T, trials: u64| {
        emp.map(|emp| {
            let se = (p * (T::one() - p) / T::from_u64(trials).unwrap()).sqrt();
            QuantityCheck {
                quantity: name.to_string(),
                analytic: p,
                empirical: emp,
                standard_error: se,
                z_score: z_score(emp, p, se),
            }
        })
    };
    let emp_tp = (counts.signal_trials() > 0)
        .then(|| T::from_u64(counts.tp).unwrap() / T::from_u64(counts.signal_trials()).unwrap());
    let emp_fp = (counts.noise_trials() > 0)
        .then(|| T::from_u64(counts.fp).unwrap() / T::from_u64(counts.noise_trials()).unwrap());
    checks.extend(rate_check("p_tp", emp_tp, op.p_tp.value(), counts.signal_trials()));
    checks.extend(rate_check("p_fp", emp_fp, op.p_fp.value(), counts.noise_trials()));

    let p = ctx.p_signal;
    let q = T::one() - p;
    let outcomes = [
        (p * op.p_tp.value(), ctx.j_tp),
        (p * op.p_tp.complement(), ctx.j_fn),
        (q * op.p_fp.value(), ctx.j_fp),
        (q * op.p_fp.complement(), ctx.j_tn),
    ];
    let mean_sq: T = outcomes.iter().map(|&(w, j)| w * j * j).sum();
    let mean = analytic.expected_payoff;
    let n = T::from_u64(result.n_trials).unwrap();
    let se = ((mean_sq - mean * mean).max(T::zero()) / n).sqrt();
    checks.push(QuantityCheck {
        quantity: "payoff".to_string(),
        analytic: mean,
        empirical: result.empirical_payoff,
        standard_error: se,
        z_score: z_score(result.empirical_payoff, mean, se),
    });

    let z_threshold = T::lit(Z_THRESHOLD);
    VerificationReport {
        passed: checks.iter().all(|c| c.z_score.abs() <= z_threshold),
        z_threshold,
        checks,
    }
}

/// Simulation paired with its closed-form counterpart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verification<T> {
    pub simulation: SimResult<T>,
    pub analytic: TandemPerformance<T>,
    pub report: VerificationReport<T>,
}

/// Simulates `config` and checks it against [`tandem_performance`] for the
/// same parameters.
pub fn verify_against_analytic<T>(config: &SimConfig<T>, ctx: &PayoffContext<T>) -> Result<Verification<T>>
where
    T: Scalar,
    StandardNormal: Distribution<T>,
    StandardUniform: Distribution<T>,
{
    let simulation = simulate(config, ctx)?;
    let analytic = tandem_performance(config.d_h, &config.criteria, &config.aid, ctx)?;
    let report = compare_with_analytic(&simulation, &analytic, ctx);
    Ok(Verification {
        simulation,
        analytic,
        report,
    })
}
