//! Weight optimization on a fixed support.
//!
//! The K criterion (condition number) is minimized derivative-free: with
//! symmetry reduction the weights are tied within permutation orbits of the
//! support, a two-class problem becomes a golden-section search over the mass
//! of the second class, and anything larger runs a Nelder-Mead search on
//! softmax-parameterized masses from several starts. κ is not convex, so the
//! result is the best local minimum found.
//!
//! The D criterion uses the multiplicative update
//! `w_i <- w_i f(x_i)^T M^-1 f(x_i) / p`, which never decreases `log det M`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::orbit_classes;
use crate::basis::ModelBasis;
use crate::error::{Error, Result};
use crate::linalg::forward_substitute;
use crate::metrics::information_matrix_from;
use crate::simplex::MixturePoint;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MULTISTARTS: usize = 20;
/// Golden-section keeps this far from the ends of the mass interval.
pub const GOLDEN_BRACKET_MARGIN: f64 = 1e-9;
pub const GOLDEN_MAX_ITERATIONS: usize = 200;
pub const MULTIPLICATIVE_MAX_ITERATIONS: usize = 100_000;
/// Final weights below this are set to zero.
pub const WEIGHT_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Criterion {
    K,
    D,
}

impl std::str::FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k" | "K" => Ok(Criterion::K),
            "d" | "D" => Ok(Criterion::D),
            other => Err(Error::InvalidArgument(format!(
                "unknown criterion '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizeSpec {
    pub criterion: Criterion,
    pub support: Vec<MixturePoint>,
    pub basis: ModelBasis,
    /// Weight-space convergence tolerance.
    pub tolerance: f64,
    pub multistarts: usize,
    pub seed: u64,
    pub symmetry_reduction: bool,
}

impl OptimizeSpec {
    pub fn new(criterion: Criterion, support: Vec<MixturePoint>, basis: ModelBasis) -> Self {
        OptimizeSpec {
            criterion,
            support,
            basis,
            tolerance: DEFAULT_TOLERANCE,
            multistarts: DEFAULT_MULTISTARTS,
            seed: 0,
            symmetry_reduction: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.support.is_empty() {
            return Err(Error::InvalidArgument(
                "support must contain at least one point".into(),
            ));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.multistarts == 0 {
            return Err(Error::InvalidArgument(
                "multistarts must be at least 1".into(),
            ));
        }
        for (i, p) in self.support.iter().enumerate() {
            if p.dim() != self.basis.q() {
                return Err(Error::at_point(
                    i,
                    Error::DimensionMismatch {
                        expected: self.basis.q(),
                        found: p.dim(),
                    },
                ));
            }
            if self.support[..i].iter().any(|o| o.approx_eq(p)) {
                return Err(Error::InvalidArgument(format!(
                    "support point {i} is a duplicate"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizeResult {
    pub weights: Vec<f64>,
    #[serde(serialize_with = "crate::io::serialize_extended")]
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    pub starts_used: usize,
}

/// `kappa(M(w))` for K (infinite when singular) or `-log det M(w)` for D.
pub fn objective_value(
    criterion: Criterion,
    weights: &[f64],
    support: &[MixturePoint],
    basis: &ModelBasis,
) -> Result<f64> {
    let m = information_matrix_from(support, weights, basis)?;
    let s = m.spectrum()?;
    Ok(match criterion {
        Criterion::K => s.condition_number().value(),
        Criterion::D => -s.log_det(),
    })
}

pub fn optimize_weights(spec: &OptimizeSpec) -> Result<OptimizeResult> {
    spec.validate()?;

    // Work on a canonically ordered support so the result does not depend on
    // the order the points were given in.
    let mut order: Vec<usize> = (0..spec.support.len()).collect();
    order.sort_by(|&a, &b| {
        spec.support[b]
            .coords()
            .partial_cmp(spec.support[a].coords())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let support: Vec<MixturePoint> = order.iter().map(|&i| spec.support[i].clone()).collect();

    let mut result = match spec.criterion {
        Criterion::D => {
            let n = support.len();
            let trace = multiplicative_d(
                &support,
                &spec.basis,
                &vec![1.0 / n as f64; n],
                spec.tolerance,
                MULTIPLICATIVE_MAX_ITERATIONS,
            )?;
            OptimizeResult {
                weights: trace.weights,
                objective: f64::NAN,
                iterations: trace.iterations,
                converged: trace.converged,
                starts_used: 1,
            }
        }
        Criterion::K => optimize_k(spec, &support)?,
    };

    clamp_and_normalize(&mut result.weights);
    result.objective = objective_value(spec.criterion, &result.weights, &support, &spec.basis)?;
    if result.objective == f64::INFINITY {
        return Err(Error::AllStartsSingular);
    }

    let mut weights = vec![0.0; order.len()];
    for (k, &i) in order.iter().enumerate() {
        weights[i] = result.weights[k];
    }
    result.weights = weights;
    Ok(result)
}

fn clamp_and_normalize(w: &mut [f64]) {
    for v in w.iter_mut() {
        if *v < WEIGHT_CLAMP {
            *v = 0.0;
        }
    }
    let s: f64 = w.iter().sum();
    if s > 0.0 {
        w.iter_mut().for_each(|v| *v /= s);
    }
}

/// Point weights from per-class masses.
fn expand_masses(classes: &[Vec<usize>], masses: &[f64], n: usize) -> Vec<f64> {
    let mut w = vec![0.0; n];
    for (class, &m) in classes.iter().zip(masses) {
        let share = m / class.len() as f64;
        for &i in class {
            w[i] = share;
        }
    }
    w
}

fn optimize_k(spec: &OptimizeSpec, support: &[MixturePoint]) -> Result<OptimizeResult> {
    let n = support.len();
    let classes: Vec<Vec<usize>> = if spec.symmetry_reduction {
        orbit_classes(support)
    } else {
        (0..n).map(|i| vec![i]).collect()
    };
    let k = classes.len();
    let kappa = |masses: &[f64]| -> f64 {
        let w = expand_masses(&classes, masses, n);
        objective_value(Criterion::K, &w, support, &spec.basis).unwrap_or(f64::INFINITY)
    };

    match k {
        1 => {
            let f = kappa(&[1.0]);
            if f == f64::INFINITY {
                return Err(Error::AllStartsSingular);
            }
            Ok(OptimizeResult {
                weights: expand_masses(&classes, &[1.0], n),
                objective: f,
                iterations: 0,
                converged: true,
                starts_used: 1,
            })
        }
        2 => {
            let g = golden_section(
                |t| kappa(&[1.0 - t, t]),
                GOLDEN_BRACKET_MARGIN,
                1.0 - GOLDEN_BRACKET_MARGIN,
                spec.tolerance,
                GOLDEN_MAX_ITERATIONS,
            );
            if g.value == f64::INFINITY {
                return Err(Error::AllStartsSingular);
            }
            Ok(OptimizeResult {
                weights: expand_masses(&classes, &[1.0 - g.x, g.x], n),
                objective: g.value,
                iterations: g.iterations,
                converged: g.converged,
                starts_used: 1,
            })
        }
        _ => {
            let starts = start_masses(k, spec.multistarts, spec.seed);
            let runs: Vec<SoftmaxRun> = starts
                .into_par_iter()
                .map(|m0| softmax_nelder_mead(&kappa, &m0, spec.tolerance))
                .collect();
            // lowest objective wins, earliest start on ties
            let best = runs
                .iter()
                .enumerate()
                .min_by(|(ia, a), (ib, b)| a.value.total_cmp(&b.value).then(ia.cmp(ib)))
                .map(|(_, r)| r)
                .expect("at least one start");
            if best.value == f64::INFINITY {
                return Err(Error::AllStartsSingular);
            }
            Ok(OptimizeResult {
                weights: expand_masses(&classes, &best.masses, n),
                objective: best.value,
                iterations: best.iterations,
                converged: best.converged,
                starts_used: runs.len(),
            })
        }
    }
}

/// The barycenter followed by `count - 1` Dirichlet(1) draws.
fn start_masses(k: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![vec![1.0 / k as f64; k]];
    for _ in 1..count {
        let e: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let s: f64 = e.iter().sum();
        out.push(e.iter().map(|v| v / s).collect());
    }
    out
}

#[derive(Debug, Clone)]
struct SoftmaxRun {
    masses: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
}

fn softmax(z: &[f64]) -> Vec<f64> {
    // z[0] is pinned to zero
    let max = z.iter().copied().fold(0.0, f64::max);
    let mut e: Vec<f64> = std::iter::once(0.0)
        .chain(z.iter().copied())
        .map(|v| (v - max).exp())
        .collect();
    let s: f64 = e.iter().sum();
    e.iter_mut().for_each(|v| *v /= s);
    e
}

fn softmax_nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, start: &[f64], tol: f64) -> SoftmaxRun {
    let floor = 1e-12;
    let z0: Vec<f64> = start[1..]
        .iter()
        .map(|&m| m.max(floor).ln() - start[0].max(floor).ln())
        .collect();
    let obj = |z: &[f64]| f(&softmax(z));
    let spread = |simplex: &[Vec<f64>]| {
        let best = softmax(&simplex[0]);
        simplex[1..]
            .iter()
            .map(|z| {
                softmax(z)
                    .iter()
                    .zip(&best)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    };
    let max_iter = 2000 * (z0.len() + 1);

    let mut run = nelder_mead(&obj, &z0, 1.0, max_iter, |s| spread(s) < tol);
    let mut iterations = run.iterations;
    // restart from the best vertex with a fresh simplex until no progress
    for _ in 0..5 {
        let again = nelder_mead(&obj, &run.x, 0.25, max_iter, |s| spread(s) < tol);
        iterations += again.iterations;
        let improved = again.value < run.value - 1e-12 * run.value.abs();
        let done = again.converged && !improved;
        if again.value <= run.value {
            run = again;
        }
        if done {
            break;
        }
    }
    SoftmaxRun {
        masses: softmax(&run.x),
        value: run.value,
        iterations,
        converged: run.converged,
    }
}

/// Outcome of a one-dimensional or simplex search.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenResult {
    pub x: f64,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `tol`.
pub fn golden_section<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_iter: usize,
) -> GoldenResult {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while hi - lo > tol && iterations < max_iter {
        iterations += 1;
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let (x, value) = if fc <= fd { (c, fc) } else { (d, fd) };
    GoldenResult {
        x,
        value,
        iterations,
        converged: hi - lo <= tol,
    }
}

/// Nelder-Mead with dimension-adaptive coefficients. `done` is checked on the
/// simplex (best vertex first) after each ordering step.
pub fn nelder_mead<F, C>(f: &F, x0: &[f64], step: f64, max_iter: usize, done: C) -> SearchResult
where
    F: Fn(&[f64]) -> f64,
    C: Fn(&[Vec<f64>]) -> bool,
{
    let n = x0.len();
    if n == 0 {
        return SearchResult {
            x: Vec::new(),
            value: f(x0),
            iterations: 0,
            converged: true,
        };
    }
    let nf = n as f64;
    let (alpha, beta, gamma, delta) =
        (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf);
    let delta = if n == 1 { 0.5 } else { delta };

    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut iterations = 0;
    let mut converged = false;

    loop {
        // order by value, stable on index
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        simplex = idx.iter().map(|&i| simplex[i].clone()).collect();
        values = idx.iter().map(|&i| values[i]).collect();

        if done(&simplex) {
            converged = true;
            break;
        }
        if iterations >= max_iter {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / nf)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(alpha);
        let fr = f(&xr);
        if fr < values[0] {
            let xe = along(beta);
            let fe = f(&xe);
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let xc = along(gamma);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = along(-gamma);
            let fc = f(&xc);
            (xc, fc)
        };
        if fc < values[n].min(fr) {
            simplex[n] = xc;
            values[n] = fc;
            continue;
        }
        // shrink toward the best vertex
        for i in 1..=n {
            let shrunk: Vec<f64> = simplex[0]
                .iter()
                .zip(&simplex[i])
                .map(|(b, v)| b + delta * (v - b))
                .collect();
            values[i] = f(&shrunk);
            simplex[i] = shrunk;
        }
    }

    SearchResult {
        x: simplex[0].clone(),
        value: values[0],
        iterations,
        converged,
    }
}

/// Iterates of the multiplicative D algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeTrace {
    pub weights: Vec<f64>,
    /// `log det M` at the starting weights and after every update.
    pub log_dets: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Runs `w_i <- w_i d_i / p` with `d_i = f(x_i)^T M(w)^-1 f(x_i)` until the
/// largest weight change drops below `tol`.
pub fn multiplicative_d(
    support: &[MixturePoint],
    basis: &ModelBasis,
    initial: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<MultiplicativeTrace> {
    if initial.len() != support.len() {
        return Err(Error::DimensionMismatch {
            expected: support.len(),
            found: initial.len(),
        });
    }
    let p = basis.p() as f64;
    let features = support
        .iter()
        .map(|x| basis.eval(x))
        .collect::<Result<Vec<_>>>()?;
    let mut w = initial.to_vec();
    let mut log_dets = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    loop {
        let m = information_matrix_from(support, &w, basis)?;
        let l = m.cholesky().ok_or(Error::AllStartsSingular)?;
        let dim = basis.p();
        log_dets.push((0..dim).map(|i| l[i * dim + i].ln()).sum::<f64>() * 2.0);
        if converged || iterations >= max_iter {
            break;
        }
        let mut next: Vec<f64> = w
            .iter()
            .zip(&features)
            .map(|(&wi, fi)| {
                let y = forward_substitute(&l, fi);
                wi * y.iter().map(|v| v * v).sum::<f64>() / p
            })
            .collect();
        let s: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= s);
        let change = next
            .iter()
            .zip(&w)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        w = next;
        iterations += 1;
        converged = change < tol;
    }

    Ok(MultiplicativeTrace {
        weights: w,
        log_dets,
        iterations,
        converged,
    })
}
