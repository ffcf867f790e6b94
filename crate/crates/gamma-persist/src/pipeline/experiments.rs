use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::barcodes1d::GradedBarcode;
use crate::convolution1d::{distance_bounds, is_a_isomorphic, DecideOptions, DistanceBounds};
use crate::error::{Error, Result};
use crate::foundations::{rat_int, Rat};
use crate::gamma_geometry::Vector;

use super::{distance_function, sublevel_persistence, Mesh, MeshFunction, Metric, PointCloud};

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub epsilon: Rat,
    pub first: GradedBarcode,
    pub second: GradedBarcode,
    pub bounds: DistanceBounds,
    /// The barcodes are `ε`-isomorphic.
    pub pass: bool,
}

pub fn stability_experiment(f1: &MeshFunction, f2: &MeshFunction, opts: &DecideOptions) -> Result<StabilityReport> {
    let epsilon = f1.sup_distance(f2)?;
    let first = sublevel_persistence(f1)?;
    let second = sublevel_persistence(f2)?;
    let pass = is_a_isomorphic(&first, &second, &epsilon, opts)?.decided() == Some(true);
    let bounds = distance_bounds(&first, &second, opts)?;
    Ok(StabilityReport { epsilon, first, second, bounds, pass })
}

#[derive(Debug, Clone)]
pub struct TrialConfig {
    pub trials: usize,
    /// Perturbations are multiples of `1/denominator` of size at most `eps`.
    pub eps: Rat,
    pub denominator: i64,
    pub seed: u64,
}

#[derive(Debug, Clone, Default)]
pub struct TrialsReport {
    pub trials: usize,
    pub passed: usize,
    pub failures: Vec<usize>,
}

fn perturb(f: &MeshFunction, cfg: &TrialConfig, trial: usize) -> MeshFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(trial as u64));
    let den = Rat::from_integer(cfg.denominator.into());
    let k = (&cfg.eps * &den).floor().to_integer();
    let k: i64 = k.try_into().unwrap_or(i64::MAX / 2);
    let values = f.values.iter().map(|v| v + Rat::from_integer(rng.gen_range(-k..=k).into()) / &den).collect();
    MeshFunction { values, ..f.clone() }
}

/// Random vertex perturbations of `f`, each checked against the stability bound.
pub fn perturbation_trials(f: &MeshFunction, cfg: &TrialConfig, opts: &DecideOptions) -> Result<TrialsReport> {
    if !cfg.eps.is_positive() || cfg.denominator <= 0 {
        return Err(Error::Invalid("eps and denominator must be positive".into()));
    }
    let results: Vec<Result<bool>> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| stability_experiment(f, &perturb(f, cfg, i), opts).map(|r| r.pass))
        .collect();
    let mut rep = TrialsReport { trials: cfg.trials, ..Default::default() };
    for (i, r) in results.into_iter().enumerate() {
        if r? {
            rep.passed += 1;
        } else {
            rep.failures.push(i);
        }
    }
    Ok(rep)
}

#[derive(Debug, Clone)]
pub struct Approximation {
    pub function: MeshFunction,
    /// Largest number of bisections applied to one coarse segment.
    pub depth: u32,
    pub max_error: Rat,
}

/// Coarsest dyadic PL interpolant of 1-D samples within `eps` at every sample.
pub fn pl_approximate(samples: &MeshFunction, eps: &Rat) -> Result<Approximation> {
    if !eps.is_positive() {
        return Err(Error::Invalid("eps must be positive".into()));
    }
    if samples.mesh.dim() != 1 {
        return Err(Error::Shape("approximation is implemented on 1-D paths".into()));
    }
    let xs: Vec<Rat> = samples.mesh.vertices().iter().map(|v| v[0].clone()).collect();
    let n = xs.len();
    if n == 0 {
        return Err(Error::Invalid("no samples".into()));
    }
    let ys = &samples.values;
    let err = |i: usize, j: usize, k: usize| {
        let s = (&xs[k] - &xs[i]) / (&xs[j] - &xs[i]);
        (&ys[i] + s * (&ys[j] - &ys[i]) - &ys[k]).abs()
    };
    let mut keep = vec![0];
    let mut depth = 0;
    let mut max_error = Rat::zero();
    let mut stack = vec![(0usize, n - 1, 0u32)];
    let mut done = Vec::new();
    while let Some((i, j, d)) = stack.pop() {
        let worst = (i + 1..j).map(|k| err(i, j, k)).max().unwrap_or_else(Rat::zero);
        if worst > *eps {
            let m = (i + j) / 2;
            stack.push((i, m, d + 1));
            stack.push((m, j, d + 1));
        } else {
            depth = depth.max(d);
            max_error = max_error.max(worst);
            done.push(j);
        }
    }
    if n > 1 {
        keep.extend(done);
        keep.sort_unstable();
    }
    let mesh = Mesh::path(&keep.iter().map(|&i| xs[i].clone()).collect::<Vec<_>>())?;
    let function = MeshFunction { values: keep.iter().map(|&i| ys[i].clone()).collect(), ..MeshFunction::new(mesh.clone(), vec![Rat::zero(); keep.len()])? };
    Ok(Approximation { function, depth, max_error })
}

/// The distance to the square ring `max(|x|,|y|) = r` on the integer grid `[-r-1, r+1]²`.
/// Returns the function and the value at which its hole fills.
pub fn annulus_fixture(r: i64) -> (MeshFunction, Rat) {
    let g: Vec<Rat> = (-r - 1..=r + 1).map(rat_int).collect();
    let mesh = Mesh::grid(&g, &g).expect("increasing grid");
    let ring: Vec<Vector> = mesh
        .vertices()
        .iter()
        .filter(|v| Metric::Linf.dist(v, &[Rat::zero(), Rat::zero()]) == rat_int(r))
        .cloned()
        .collect();
    let cloud = PointCloud::new(ring, None).expect("uniform dimension");
    (distance_function(&cloud, &mesh, Metric::Linf).expect("non-empty ring"), rat_int(r))
}

/// For `f = (f_1,…,f_n)` on one mesh, a corner `y` with `supp ⊂ y + γᵃ` for the product order.
pub fn product_support_corner(fs: &[MeshFunction]) -> Result<Vector> {
    let first = fs.first().ok_or_else(|| Error::Invalid("no components".into()))?;
    if fs.iter().any(|f| f.mesh != first.mesh) {
        return Err(Error::Shape("components live on different meshes".into()));
    }
    fs.iter().map(|f| f.min_value().cloned().ok_or_else(|| Error::Invalid("empty mesh".into()))).collect()
}
