//! Multi-start ascent over products of unit spheres.
//!
//! Evaluates the heuristic lower estimate of `[S]_alpha`: for a single
//! member the mode subproblem is linear and solved in closed form
//! (higher-order power iteration); for several members we run projected
//! gradient ascent with backtracking. Every restart derives its randomness
//! from `(seed, restart index)`, so results are schedule-independent.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::OptimizerSettings;
use crate::decomposition::{vec_inner, vec_norm, PureTensor};
use crate::tensor::{flatten, DenseTensor, TensorSpace};

/// Smoothing width for the nonsmooth objective at alpha < 1.
const SMOOTH_EPS: f64 = 1e-8;

pub(crate) enum Member {
    Pure(PureTensor),
    Dense(DenseTensor),
}

type Point = Vec<Vec<C64>>;

impl Member {
    pub(crate) fn space(&self) -> &TensorSpace {
        match self {
            Member::Pure(v) => v.space(),
            Member::Dense(t) => t.space(),
        }
    }

    /// `<member, u>` for a pure point `u` given by its factors.
    pub(crate) fn overlap(&self, u: &[Vec<C64>]) -> C64 {
        match self {
            Member::Pure(v) => v
                .factors()
                .iter()
                .zip(u)
                .map(|(f, uf)| vec_inner(f, uf))
                .product(),
            Member::Dense(t) => {
                let dims = t.space().dims();
                let mut idx = vec![0usize; dims.len()];
                let mut acc = C64::new(0.0, 0.0);
                for &z in t.entries() {
                    if z.re != 0.0 || z.im != 0.0 {
                        let mut w = z;
                        for (j, &i) in idx.iter().enumerate() {
                            w *= u[j][i].conj();
                        }
                        acc += w;
                    }
                    advance(&mut idx, dims);
                }
                acc
            }
        }
    }

    /// Vector `g` with `<g, u_mode> = overlap`, i.e. the contraction of the
    /// member against `conj(u)` over every mode except `mode`.
    fn mode_contraction(&self, u: &[Vec<C64>], mode: usize) -> Vec<C64> {
        match self {
            Member::Pure(v) => {
                let scale: C64 = v
                    .factors()
                    .iter()
                    .zip(u)
                    .enumerate()
                    .filter(|(j, _)| *j != mode)
                    .map(|(_, (f, uf))| vec_inner(f, uf))
                    .product();
                v.factors()[mode].iter().map(|z| z * scale).collect()
            }
            Member::Dense(t) => {
                let dims = t.space().dims();
                let mut g = vec![C64::new(0.0, 0.0); dims[mode]];
                let mut idx = vec![0usize; dims.len()];
                for &z in t.entries() {
                    if z.re != 0.0 || z.im != 0.0 {
                        let mut w = z;
                        for (j, &i) in idx.iter().enumerate() {
                            if j != mode {
                                w *= u[j][i].conj();
                            }
                        }
                        g[idx[mode]] += w;
                    }
                    advance(&mut idx, dims);
                }
                g
            }
        }
    }
}

/// Row-major odometer step.
fn advance(idx: &mut [usize], dims: &[usize]) {
    for j in (0..idx.len()).rev() {
        idx[j] += 1;
        if idx[j] < dims[j] {
            return;
        }
        idx[j] = 0;
    }
}

fn normalized(v: &[C64]) -> Option<Vec<C64>> {
    let n = vec_norm(v);
    if n <= 1e-300 {
        return None;
    }
    Some(v.iter().map(|z| z / n).collect())
}

/// Raw measure `(sum_i |<S_i, u>|^alpha)^(1/alpha)` at a point.
pub(crate) fn raw_measure(members: &[Member], u: &Point, alpha: f64) -> f64 {
    members
        .iter()
        .map(|m| m.overlap(u).norm().powf(alpha))
        .sum::<f64>()
        .powf(1.0 / alpha)
}

fn uniform_start(space: &TensorSpace) -> Point {
    space
        .dims()
        .iter()
        .map(|&n| {
            let x = 1.0 / (n as f64).sqrt();
            vec![C64::new(x, 0.0); n]
        })
        .collect()
}

/// Leading left singular vector of each single-mode flattening; for a pure
/// member this reduces to its normalized factors.
fn member_start(m: &Member) -> Option<Point> {
    match m {
        Member::Pure(v) => v.normalized_factors().map(|p| p.factors().to_vec()),
        Member::Dense(t) => {
            let d = t.space().order();
            let mut factors = Vec::with_capacity(d);
            for mode in 0..d {
                let col = if d == 1 {
                    normalized(t.entries())?
                } else {
                    let f = flatten(t, &[mode]).ok()?;
                    let svd = f.matrix.clone().svd(true, false);
                    let u = svd.u?;
                    let mut best = 0usize;
                    for k in 1..svd.singular_values.len() {
                        if svd.singular_values[k] > svd.singular_values[best] {
                            best = k;
                        }
                    }
                    normalized(u.column(best).as_slice())?
                };
                factors.push(col);
            }
            Some(factors)
        }
    }
}

fn random_start(space: &TensorSpace, seed: u64, stream: u64) -> Point {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    space
        .dims()
        .iter()
        .map(|&n| {
            let mut f = Vec::with_capacity(n);
            for _ in 0..n {
                let u1: f64 = rng.random();
                let u2: f64 = rng.random();
                let r = (-2.0 * (1.0 - u1).ln()).sqrt();
                let phi = std::f64::consts::TAU * u2;
                f.push(C64::new(r * phi.cos(), r * phi.sin()));
            }
            normalized(&f).unwrap_or_else(|| {
                let mut e = vec![C64::new(0.0, 0.0); n];
                e[0] = C64::new(1.0, 0.0);
                e
            })
        })
        .collect()
}

/// Higher-order power iteration for a single member: each mode update is
/// the exact maximizer of the linear subproblem, so |<S, u>| is monotone.
fn hopm(member: &Member, mut u: Point, opts: &OptimizerSettings) -> (f64, Point) {
    let d = u.len();
    let mut f = member.overlap(&u).norm();
    let mut small = 0u32;
    for _ in 0..opts.max_iters {
        for mode in 0..d {
            let g = member.mode_contraction(&u, mode);
            match normalized(&g) {
                Some(gu) => u[mode] = gu,
                None => return (f, u), // zero contraction, nothing to gain here
            }
        }
        let f_new = member.overlap(&u).norm();
        let gain = f_new - f;
        f = f_new;
        if gain <= opts.opt_tol * f.max(1e-300) {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (f, u)
}

/// Projected gradient ascent on the product of unit spheres with a
/// backtracking line search; the objective is smoothed when alpha < 1.
fn pga(members: &[Member], mut u: Point, alpha: f64, opts: &OptimizerSettings) -> (f64, Point) {
    let eps2 = if alpha < 1.0 { SMOOTH_EPS * SMOOTH_EPS } else { 0.0 };
    let smoothed = |u: &Point| -> f64 {
        members
            .iter()
            .map(|m| (m.overlap(u).norm_sqr() + eps2).powf(alpha / 2.0))
            .sum()
    };
    let d = u.len();
    let mut f = smoothed(&u);
    let mut eta = 1.0f64;
    let mut small = 0u32;

    'outer: for _ in 0..opts.max_iters {
        // Ascent direction per mode: sum_i alpha (|c_i|^2 + eps^2)^(alpha/2 - 1) conj(c_i) g_i.
        let mut grads: Vec<Vec<C64>> = u.iter().map(|f| vec![C64::new(0.0, 0.0); f.len()]).collect();
        for m in members {
            let c = m.overlap(&u);
            let c2 = c.norm_sqr();
            if c2 + eps2 == 0.0 {
                continue;
            }
            let w = alpha * (c2 + eps2).powf(alpha / 2.0 - 1.0) * c.conj();
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            for (mode, grad) in grads.iter_mut().enumerate() {
                let g = m.mode_contraction(&u, mode);
                for (slot, z) in grad.iter_mut().zip(&g) {
                    *slot += w * z;
                }
            }
        }
        // Quotient out the radial and phase directions (objective-neutral).
        let mut grad_norm2 = 0.0;
        for mode in 0..d {
            let along = vec_inner(&grads[mode], &u[mode]);
            for (slot, z) in grads[mode].iter_mut().zip(&u[mode]) {
                *slot -= along * z;
            }
            grad_norm2 += grads[mode].iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        if grad_norm2.sqrt() <= 1e-15 * (1.0 + f) {
            break;
        }

        let mut accepted = false;
        while eta >= 1e-18 {
            let trial: Point = (0..d)
                .map(|mode| {
                    let stepped: Vec<C64> = u[mode]
                        .iter()
                        .zip(&grads[mode])
                        .map(|(x, g)| x + eta * g)
                        .collect();
                    normalized(&stepped).unwrap_or_else(|| u[mode].clone())
                })
                .collect();
            let ft = smoothed(&trial);
            if ft > f + 1e-18 * (1.0 + f.abs()) {
                let gain = ft - f;
                u = trial;
                f = ft;
                eta = (eta * 1.5).min(1e8);
                accepted = true;
                if gain <= opts.opt_tol * f.max(1e-300) {
                    small += 1;
                    if small >= 2 {
                        break 'outer;
                    }
                } else {
                    small = 0;
                }
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (raw_measure(members, &u, alpha), u)
}

fn ascend(members: &[Member], start: Point, alpha: f64, opts: &OptimizerSettings) -> (f64, Point) {
    if members.len() == 1 {
        // |<S_1, u>|^alpha is a monotone transform of |<S_1, u>|, so the
        // maximizer does not depend on alpha.
        let (value, u) = hopm(&members[0], start, opts);
        (value, u)
    } else {
        pga(members, start, alpha, opts)
    }
}

/// Rotates each factor so its largest-magnitude entry is real positive;
/// changes the point only by mode phases, which no measure can see.
pub(crate) fn canonicalize_phases(u: &mut Point) {
    for f in u.iter_mut() {
        let mut best = 0usize;
        let mut best_mag = -1.0;
        for (i, z) in f.iter().enumerate() {
            let m = z.norm();
            if m > best_mag {
                best_mag = m;
                best = i;
            }
        }
        if best_mag <= 1e-300 {
            continue;
        }
        let rot = (f[best] / best_mag).conj();
        for z in f.iter_mut() {
            *z *= rot;
        }
    }
}

pub(crate) struct BracketOutcome {
    pub value: f64,
    pub witness: Point,
}

/// Best value over the mandatory starts (members normalized factorwise,
/// plus the uniform superposition) and `restarts` seeded random starts,
/// each refined by ascent. Start-point values themselves participate in
/// the maximum, so the result never falls below the best mandatory start.
pub(crate) fn multistart_bracket(
    members: &[Member],
    alpha: f64,
    opts: &OptimizerSettings,
) -> BracketOutcome {
    let space = members[0].space().clone();
    let mut starts: Vec<Point> = members.iter().filter_map(member_start).collect();
    starts.push(uniform_start(&space));
    for k in 0..opts.restarts {
        starts.push(random_start(&space, opts.seed, k as u64 + 1));
    }

    let results: Vec<(usize, f64, Point)> = starts
        .into_par_iter()
        .enumerate()
        .map(|(i, start)| {
            let start_value = raw_measure(members, &start, alpha);
            let (value, point) = ascend(members, start.clone(), alpha, opts);
            if value >= start_value {
                (i, value, point)
            } else {
                (i, start_value, start)
            }
        })
        .collect();

    let (_, _, mut witness) = results
        .into_iter()
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then_with(|| b.0.cmp(&a.0)))
        .expect("at least one start");
    canonicalize_phases(&mut witness);
    // Mode phases leave every |overlap| unchanged; recompute so the stored
    // value is exactly recomputable from the stored witness.
    let value = raw_measure(members, &witness, alpha);
    BracketOutcome { value, witness }
}
