//! Derivative-free search helpers: golden section, monotone bisection and a
//! seeded sample-then-refine maximizer over a box.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Minimizes a unimodal function on `[lo, hi]`; returns `(argmin, min)`.
pub fn golden_min(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    for _ in 0..iters {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        }
    }
    if fa <= fb {
        (a, fa)
    } else {
        (b, fb)
    }
}

/// Largest `t ∈ [lo, hi]` with `feasible(t)`, for a predicate that is true
/// on an initial interval `[lo, t*]` and false after it. `feasible(lo)` is
/// assumed.
pub fn bisect_right_endpoint(mut feasible: impl FnMut(f64) -> bool, lo: f64, hi: f64, iters: usize) -> f64 {
    if feasible(hi) {
        return hi;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..iters {
        let mid = 0.5 * (a + b);
        if feasible(mid) {
            a = mid;
        } else {
            b = mid;
        }
    }
    a
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub samples: usize,
    pub refine_top: usize,
    pub max_refine_evals: usize,
    pub min_step: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { samples: 2000, refine_top: 6, max_refine_evals: 4000, min_step: 1e-13 }
    }
}

/// Maximizes `objective` over the box `bounds`; infeasible points return
/// `None`. Seeds compete with the random samples for the refinement slots
/// and win ties.
pub fn maximize_box(
    bounds: &[(f64, f64)],
    mut objective: impl FnMut(&[f64]) -> Option<f64>,
    rng: &mut ChaCha8Rng,
    cfg: &SearchConfig,
    seeds: &[Vec<f64>],
) -> Option<(Vec<f64>, f64)> {
    let mut pool: Vec<(Vec<f64>, f64)> = Vec::new();
    for s in seeds {
        if let Some(v) = objective(s) {
            pool.push((s.clone(), v));
        }
    }
    for _ in 0..cfg.samples {
        let p: Vec<f64> = bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect();
        if let Some(v) = objective(&p) {
            pool.push((p, v));
        }
    }
    pool.sort_by(|a, b| b.1.total_cmp(&a.1));
    pool.truncate(cfg.refine_top.max(1));
    let mut best: Option<(Vec<f64>, f64)> = None;
    for (start, value) in pool {
        let refined = refine(bounds, &mut objective, start, value, cfg, rng);
        if best.as_ref().is_none_or(|b| refined.1 > b.1) {
            best = Some(refined);
        }
    }
    best
}

fn refine(
    bounds: &[(f64, f64)],
    objective: &mut impl FnMut(&[f64]) -> Option<f64>,
    mut x: Vec<f64>,
    mut fx: f64,
    cfg: &SearchConfig,
    rng: &mut ChaCha8Rng,
) -> (Vec<f64>, f64) {
    let width = bounds.iter().map(|(lo, hi)| hi - lo).fold(0.0, f64::max);
    let mut step = 0.125 * width;
    let mut evals = 0;
    while step > cfg.min_step && evals < cfg.max_refine_evals {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] = (y[i] + dir * step).clamp(bounds[i].0, bounds[i].1);
                evals += 1;
                if let Some(v) = objective(&y) {
                    if v > fx {
                        x = y;
                        fx = v;
                        improved = true;
                        break;
                    }
                }
            }
        }
        // random directions escape curved constraint boundaries
        for _ in 0..2 * x.len() + 4 {
            if improved {
                break;
            }
            let d: Vec<f64> = (0..x.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let len = d.iter().map(|c| c * c).sum::<f64>().sqrt();
            let y: Vec<f64> =
                x.iter().zip(&d).zip(bounds).map(|((xi, di), b)| (xi + step * di / len).clamp(b.0, b.1)).collect();
            evals += 1;
            if let Some(v) = objective(&y) {
                if v > fx {
                    x = y;
                    fx = v;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_kink_and_smooth_minima() {
        let (x, v) = golden_min(|t| (t - 0.3).abs(), -1.0, 2.0, 80);
        assert!((x - 0.3).abs() < 1e-12 && v < 1e-12);
        let (x, _) = golden_min(|t| (t + 0.25) * (t + 0.25), -1.0, 1.0, 80);
        assert!((x + 0.25).abs() < 1e-7);
    }

    #[test]
    fn bisection_locates_threshold() {
        let t = bisect_right_endpoint(|b| b <= 2.0 / 3.0, 0.0, 1.0, 60);
        assert!((t - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(bisect_right_endpoint(|_| true, 0.0, 1.0, 60), 1.0);
    }

    #[test]
    fn box_search_reaches_constrained_corner() {
        // max x + y on the unit disk restricted to x <= 0.5
        let mut r = rng(7);
        let (p, v) = maximize_box(
            &[(-1.0, 1.0), (-1.0, 1.0)],
            |p| (p[0] <= 0.5 && p[0] * p[0] + p[1] * p[1] <= 1.0).then(|| p[0] + p[1]),
            &mut r,
            &SearchConfig::default(),
            &[],
        )
        .unwrap();
        assert!((v - (0.5 + 0.75f64.sqrt())).abs() < 1e-6, "{p:?}");
    }
}
