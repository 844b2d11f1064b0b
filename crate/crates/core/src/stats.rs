//! Random-graph fsn histograms and the rounded-Gaussian X distribution.
//!
//! Work is split into fixed batches; batch `i` draws from the ChaCha8 stream
//! `i` of the master seed and results are merged in batch order, so output
//! does not depend on the number of worker threads.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::graph::random_graph_with;
use crate::scalar::{format_rational, to_f64};
use crate::scl::fsn;
use crate::Rational;

const BATCH: usize = 1024;
/// Largest head table the X sampler will build.
const MAX_HEAD: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StatsError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// Runs `f` on a pool with `threads` workers (`None`: the global pool).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, StatsError> {
    match threads {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| StatsError::ThreadPool(e.to_string())),
    }
}

fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `count` draws in batches, batch `i` on stream `i`, in batch order.
fn batched<T: Send>(count: usize, seed: u64, draw: impl Fn(&mut ChaCha8Rng) -> T + Sync) -> Vec<T> {
    let batches = count.div_ceil(BATCH);
    (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream(seed, b as u64);
            let size = BATCH.min(count - b * BATCH);
            (0..size).map(|_| draw(&mut rng)).collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Exact-rational histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub bins: BTreeMap<Rational, u64>,
    pub samples: usize,
    pub seed: u64,
}

impl Histogram {
    pub fn from_values(values: impl IntoIterator<Item = Rational>, seed: u64) -> Self {
        let mut bins = BTreeMap::new();
        let mut samples = 0;
        for v in values {
            *bins.entry(v).or_insert(0) += 1;
            samples += 1;
        }
        Self { bins, samples, seed }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,count\n");
        for (v, c) in &self.bins {
            out.push_str(&format!("{},{c}\n", format_rational(v)));
        }
        out
    }
}

/// fsn of `samples` random graphs `G(n, p)`.
pub fn fsn_histogram(n_vertices: usize, p: f64, samples: usize, seed: u64) -> Result<Histogram, StatsError> {
    if n_vertices == 0 || samples == 0 {
        return Err(StatsError::InvalidParameter("need at least one vertex and one sample".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(StatsError::InvalidParameter(format!("edge probability {p} outside [0, 1]")));
    }
    let values = batched(samples, seed, |rng| {
        let g = random_graph_with(n_vertices, p, rng).expect("parameters were validated");
        fsn(&g).expect("graph is nonempty")
    });
    Ok(Histogram::from_values(values, seed))
}

/// Parameters of the X distribution: `n` is drawn with weight
/// `p(n) = n^((1 − n^β)·d)`, then a Gaussian with mean `μ` and standard
/// deviation `c1·n^c2` is rounded to the nearest point of `(1/n)ℤ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XParams {
    pub d: Rational,
    pub beta: Rational,
    pub mu: Rational,
    pub c1: Rational,
    pub c2: Rational,
}

impl XParams {
    pub fn validate(&self) -> Result<(), StatsError> {
        let one = Rational::from_integer(BigInt::from(1));
        let bad = |m: &str| Err(StatsError::InvalidParameter(m.into()));
        if self.d >= -one {
            return bad("d must be < -1");
        }
        if !self.beta.is_negative() {
            return bad("beta must be < 0");
        }
        if self.c1.is_negative() {
            return bad("c1 must be >= 0");
        }
        if !self.c2.is_negative() {
            return bad("c2 must be < 0");
        }
        Ok(())
    }

    /// Unnormalized weight `p(n)`.
    pub fn weight(&self, n: u64) -> f64 {
        let (d, beta) = (to_f64(&self.d), to_f64(&self.beta));
        let n = n as f64;
        n.powf((1.0 - n.powf(beta)) * d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XSample {
    /// The drawn grid denominator.
    pub n: u64,
    pub value: Rational,
}

/// Exact sampler for `n`: table lookup up to `head`, and beyond it rejection
/// from the envelope `n^a` with `a = (1 − head^β)·d < −1`.
struct DenominatorSampler {
    d: f64,
    beta: f64,
    head: u64,
    cumulative: Vec<f64>,
    exponent: f64,
    tail_scale: f64,
    tail_mass: f64,
}

impl DenominatorSampler {
    fn new(params: &XParams) -> Result<Self, StatsError> {
        let (d, beta) = (to_f64(&params.d), to_f64(&params.beta));
        // Past this point the weight exponent is at most (d − 1)/2 < −1.
        let target = (d + 1.0) / (2.0 * d);
        let needed = target.powf(1.0 / beta).ceil();
        if !needed.is_finite() || needed > MAX_HEAD as f64 {
            return Err(StatsError::InvalidParameter(format!(
                "d = {d} is too close to -1 for beta = {beta}"
            )));
        }
        let head = (needed as u64).max(1000);
        let mut cumulative = Vec::with_capacity(head as usize);
        let mut acc = 0.0;
        for n in 1..=head {
            acc += params.weight(n);
            cumulative.push(acc);
        }
        let exponent = (1.0 - (head as f64).powf(beta)) * d;
        let start = (head + 1) as f64;
        let ratio = (head + 2) as f64 / start;
        let tail_scale = ratio.powf(-exponent);
        let tail_mass = tail_scale * start.powf(exponent + 1.0) / -(exponent + 1.0);
        Ok(Self {
            d,
            beta,
            head,
            cumulative,
            exponent,
            tail_scale,
            tail_mass,
        })
    }

    fn weight(&self, n: u64) -> f64 {
        let n = n as f64;
        n.powf((1.0 - n.powf(self.beta)) * self.d)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let head_mass = *self.cumulative.last().expect("head is nonempty");
        let a = self.exponent;
        loop {
            let u = rng.gen::<f64>() * (head_mass + self.tail_mass);
            if u < head_mass {
                let i = self.cumulative.partition_point(|&c| c <= u);
                return (i as u64 + 1).min(self.head);
            }
            let v: f64 = 1.0 - rng.gen::<f64>();
            let x = (self.head + 1) as f64 * v.powf(1.0 / (a + 1.0));
            if !x.is_finite() || x >= u64::MAX as f64 {
                continue;
            }
            let n = x.floor() as u64;
            let nf = n as f64;
            let envelope = self.tail_scale * ((nf + 1.0).powf(a + 1.0) - nf.powf(a + 1.0)) / (a + 1.0);
            if rng.gen::<f64>() * envelope < self.weight(n) {
                return n;
            }
        }
    }
}

/// Standard normal via the Marsaglia polar method.
fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u = rng.gen::<f64>() * 2.0 - 1.0;
        let v = rng.gen::<f64>() * 2.0 - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

/// Nearest point `k/n` to `x`; ties go away from zero.
pub fn round_to_grid(x: f64, n: u64) -> Rational {
    let k = (x * n as f64).round();
    Rational::new(BigInt::from(k as i64), BigInt::from(n))
}

pub fn sample_x(params: &XParams, count: usize, seed: u64) -> Result<Vec<XSample>, StatsError> {
    params.validate()?;
    if count == 0 {
        return Err(StatsError::InvalidParameter("need at least one sample".into()));
    }
    let sampler = DenominatorSampler::new(params)?;
    let (mu, c1, c2) = (to_f64(&params.mu), to_f64(&params.c1), to_f64(&params.c2));
    Ok(batched(count, seed, |rng| {
        let n = sampler.sample(rng);
        let sd = c1 * (n as f64).powf(c2);
        let x = if sd.is_zero() { mu } else { mu + sd * gaussian(rng) };
        XSample {
            n,
            value: round_to_grid(x, n),
        }
    }))
}
