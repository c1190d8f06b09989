//! Sequential importance sampling estimates of the s-t simple path count.
//!
//! A sample is a random self-avoiding walk from `s`: at each step the next
//! vertex is drawn uniformly from the unvisited out-neighbors of the current
//! vertex. If the walk reaches `t` its probability is `1 / W` where `W` is
//! the product of the candidate-set sizes along the way, and the sample
//! contributes `W`; a walk that strands before `t` contributes `0`. The mean
//! contribution is an unbiased estimate of the number of simple paths.
//!
//! Because every contribution is an integer product, the running sums are
//! kept exactly and the estimate and its sample variance are exact rationals.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexId};
use crate::pruning::prune;

/// Which graph the sampler walks on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// The input graph as given.
    Baseline,
    /// The subgraph induced by the scope intersection.
    Pruned,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Baseline => "baseline",
            Variant::Pruned => "pruned",
        }
    }
}

/// One sampler trajectory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleOutcome {
    pub path: Vec<VertexId>,
    pub reached_t: bool,
    /// Product of the candidate-set sizes, i.e. the reciprocal of the
    /// trajectory's probability.
    pub weight: BigUint,
}

impl SampleOutcome {
    pub fn probability(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(self.weight.clone()))
    }

    /// `1 / probability` for a completed path, zero for a dead end.
    pub fn contribution(&self) -> BigUint {
        if self.reached_t {
            self.weight.clone()
        } else {
            BigUint::zero()
        }
    }
}

#[derive(Clone, Debug)]
enum Weight {
    Small(u128),
    Big(BigUint),
}

impl Weight {
    #[inline]
    fn scale(&mut self, k: usize) {
        match self {
            Weight::Small(w) => match w.checked_mul(k as u128) {
                Some(p) => *w = p,
                None => *self = Weight::Big(BigUint::from(*w) * k),
            },
            Weight::Big(b) => *b *= k,
        }
    }

    fn into_big(self) -> BigUint {
        match self {
            Weight::Small(w) => BigUint::from(w),
            Weight::Big(b) => b,
        }
    }
}

/// Reusable walk state. Visited marks use epoch stamps so a walk costs
/// O(length) rather than O(|V|).
struct Walker<'g> {
    graph: &'g DirectedGraph,
    s: VertexId,
    t: VertexId,
    stamp: Vec<u32>,
    epoch: u32,
    candidates: Vec<VertexId>,
    path: Vec<VertexId>,
}

struct Walk {
    reached_t: bool,
    weight: Weight,
}

impl<'g> Walker<'g> {
    fn new(graph: &'g DirectedGraph, s: VertexId, t: VertexId) -> Self {
        Walker {
            graph,
            s,
            t,
            stamp: vec![0; graph.vertex_count()],
            epoch: 0,
            candidates: Vec::new(),
            path: Vec::new(),
        }
    }

    fn walk<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Walk {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        self.path.clear();

        let mut current = self.s;
        self.stamp[current.index()] = epoch;
        self.path.push(current);
        let mut weight = Weight::Small(1);
        loop {
            self.candidates.clear();
            let stamp = &self.stamp;
            self.candidates.extend(
                self.graph
                    .out_neighbors(current)
                    .iter()
                    .copied()
                    .filter(|w| stamp[w.index()] != epoch),
            );
            if self.candidates.is_empty() {
                return Walk { reached_t: false, weight };
            }
            weight.scale(self.candidates.len());
            current = self.candidates[rng.gen_range(0..self.candidates.len())];
            self.stamp[current.index()] = epoch;
            self.path.push(current);
            if current == self.t {
                return Walk { reached_t: true, weight };
            }
        }
    }
}

fn check_pair(g: &DirectedGraph, s: VertexId, t: VertexId) -> Result<()> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Err(Error::SameEndpoints(s.index()));
    }
    Ok(())
}

/// Draws one sampler trajectory on `g`.
pub fn sample_path<R: Rng + ?Sized>(
    g: &DirectedGraph,
    s: VertexId,
    t: VertexId,
    rng: &mut R,
) -> Result<SampleOutcome> {
    check_pair(g, s, t)?;
    let mut walker = Walker::new(g, s, t);
    let walk = walker.walk(rng);
    Ok(SampleOutcome {
        path: walker.path,
        reached_t: walk.reached_t,
        weight: walk.weight.into_big(),
    })
}

/// Summary of a Monte Carlo run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EstimateReport {
    pub variant: Variant,
    pub n_samples: u64,
    /// Mean contribution.
    pub estimate: BigRational,
    /// Unbiased per-sample variance (divisor `n - 1`); absent when `n = 1`.
    pub sample_variance: Option<BigRational>,
    pub dead_end_samples: u64,
    pub seed: u64,
    pub elapsed: Duration,
    /// Vertices of the pruned graph; `None` for the baseline variant.
    pub pruned_vertices: Option<usize>,
}

impl EstimateReport {
    /// Estimated variance of the mean, `sample_variance / n`.
    pub fn variance_of_mean(&self) -> Option<BigRational> {
        self.sample_variance
            .as_ref()
            .map(|v| v / BigRational::from_integer(BigInt::from(self.n_samples)))
    }

    pub fn estimate_f64(&self) -> f64 {
        ratio_to_f64(&self.estimate)
    }
}

/// Exact running sums of contributions.
#[derive(Default)]
struct Moments {
    n: u64,
    dead_ends: u64,
    sum: BigUint,
    sum_sq: BigUint,
}

impl Moments {
    fn push(&mut self, walk: Walk) {
        self.n += 1;
        if !walk.reached_t {
            self.dead_ends += 1;
            return;
        }
        match walk.weight {
            Weight::Small(w) => {
                self.sum += w;
                if let Ok(w64) = u64::try_from(w) {
                    self.sum_sq += u128::from(w64) * u128::from(w64);
                } else {
                    let b = BigUint::from(w);
                    self.sum_sq += &b * &b;
                }
            }
            Weight::Big(b) => {
                self.sum_sq += &b * &b;
                self.sum += b;
            }
        }
    }

    fn mean(&self) -> BigRational {
        BigRational::new(BigInt::from(self.sum.clone()), BigInt::from(self.n))
    }

    fn sample_variance(&self) -> Option<BigRational> {
        if self.n < 2 {
            return None;
        }
        let n = BigUint::from(self.n);
        // n * sum_sq >= sum^2 by Cauchy-Schwarz
        let numer = &n * &self.sum_sq - &self.sum * &self.sum;
        let denom = &n * (n.clone() - 1u32);
        Some(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }
}

/// Estimates the number of simple s-t paths from `n` independent samples.
/// Deterministic given `seed`.
pub fn estimate_count(
    g: &DirectedGraph,
    s: VertexId,
    t: VertexId,
    n: u64,
    seed: u64,
    variant: Variant,
) -> Result<EstimateReport> {
    check_pair(g, s, t)?;
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut moments = Moments::default();

    let pruned_vertices = match variant {
        Variant::Baseline => {
            let mut walker = Walker::new(g, s, t);
            for _ in 0..n {
                moments.push(walker.walk(&mut rng));
            }
            None
        }
        Variant::Pruned => {
            let pruned = prune(g, s, t)?;
            match pruned.endpoints {
                Some((ls, lt)) => {
                    let mut walker = Walker::new(pruned.graph(), ls, lt);
                    for _ in 0..n {
                        moments.push(walker.walk(&mut rng));
                    }
                }
                // no s-t path exists: every walk strands at s
                None => {
                    moments.n = n;
                    moments.dead_ends = n;
                }
            }
            Some(pruned.vertex_count())
        }
    };

    Ok(EstimateReport {
        variant,
        n_samples: n,
        estimate: moments.mean(),
        sample_variance: moments.sample_variance(),
        dead_end_samples: moments.dead_ends,
        seed,
        elapsed: start.elapsed(),
        pruned_vertices,
    })
}

/// Exact moments of a single sample, from the full sampler decision tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMoments {
    pub expectation: BigRational,
    pub per_sample_variance: BigRational,
    /// Leaves of the decision tree (completed paths and dead ends).
    pub outcome_count: u64,
    /// Sum of leaf probabilities; always exactly one.
    pub total_probability: BigRational,
}

struct Frame {
    candidates: Vec<VertexId>,
    next: usize,
    weight: BigUint,
}

/// Enumerates every trajectory the sampler can take on the chosen graph and
/// returns the exact mean and variance of one sample's contribution.
/// Fails if the tree has more than `node_budget` nodes.
pub fn sampler_exact_moments(
    g: &DirectedGraph,
    s: VertexId,
    t: VertexId,
    variant: Variant,
    node_budget: u64,
) -> Result<ExactMoments> {
    check_pair(g, s, t)?;
    match variant {
        Variant::Baseline => tree_moments(g, s, t, node_budget),
        Variant::Pruned => {
            let pruned = prune(g, s, t)?;
            match pruned.endpoints {
                Some((ls, lt)) => tree_moments(pruned.graph(), ls, lt, node_budget),
                None => Ok(ExactMoments {
                    expectation: BigRational::zero(),
                    per_sample_variance: BigRational::zero(),
                    outcome_count: 1,
                    total_probability: BigRational::one(),
                }),
            }
        }
    }
}

fn tree_moments(
    g: &DirectedGraph,
    s: VertexId,
    t: VertexId,
    node_budget: u64,
) -> Result<ExactMoments> {
    let mut first = BigRational::zero();
    let mut second = BigRational::zero();
    let mut total_probability = BigRational::zero();
    let mut outcome_count = 0u64;
    let mut nodes = 0u64;

    let mut visited = vec![false; g.vertex_count()];
    let candidates_of = |v: VertexId, visited: &[bool]| -> Vec<VertexId> {
        g.out_neighbors(v).iter().copied().filter(|w| !visited[w.index()]).collect()
    };

    let mut leaf = |weight: &BigUint, reached: bool| {
        let p = BigRational::new(BigInt::one(), BigInt::from(weight.clone()));
        let c = if reached {
            BigRational::from_integer(BigInt::from(weight.clone()))
        } else {
            BigRational::zero()
        };
        first += &p * &c;
        second += &p * &c * &c;
        total_probability += p;
        outcome_count += 1;
    };

    visited[s.index()] = true;
    let mut stack = vec![Frame {
        candidates: candidates_of(s, &visited),
        next: 0,
        weight: BigUint::one(),
    }];
    nodes += 1;
    if stack[0].candidates.is_empty() {
        leaf(&stack[0].weight, false);
    }
    // invariant: vertices of the frames on the stack are marked visited,
    // tracked through `trail` since frames hold only their candidate lists
    let mut trail = vec![s];

    while let Some(frame) = stack.last_mut() {
        if frame.next == frame.candidates.len() {
            stack.pop();
            if let Some(v) = trail.pop() {
                visited[v.index()] = false;
            }
            continue;
        }
        let w = frame.candidates[frame.next];
        frame.next += 1;
        let weight = &frame.weight * frame.candidates.len();

        nodes += 1;
        if nodes > node_budget {
            return Err(Error::BudgetExceeded { budget: node_budget });
        }
        if w == t {
            leaf(&weight, true);
            continue;
        }
        visited[w.index()] = true;
        let candidates = candidates_of(w, &visited);
        if candidates.is_empty() {
            leaf(&weight, false);
            visited[w.index()] = false;
            continue;
        }
        trail.push(w);
        stack.push(Frame { candidates, next: 0, weight });
    }

    let variance = &second - &first * &first;
    Ok(ExactMoments {
        expectation: first,
        per_sample_variance: variance,
        outcome_count,
        total_probability,
    })
}

/// Nearest f64 to a (possibly huge) rational.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    let (n, d) = (r.numer(), r.denom());
    if let (Some(a), Some(b)) = (n.to_f64(), d.to_f64()) {
        if a.is_finite() && b.is_finite() && b != 0.0 {
            return a / b;
        }
    }
    // scale both down to 64 significant bits before dividing
    let shift_n = n.bits().saturating_sub(64);
    let shift_d = d.bits().saturating_sub(64);
    let a = (n >> shift_n).to_f64().unwrap_or(f64::NAN);
    let b = (d >> shift_d).to_f64().unwrap_or(f64::NAN);
    (a / b) * 2f64.powi(shift_n as i32 - shift_d as i32)
}
