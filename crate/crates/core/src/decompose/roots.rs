//! Aberth-Ehrlich simultaneous root iteration.

use crate::error::{Error, Result};
use crate::C64;

/// Iteration budget shared by all restarts.
pub const ROOT_ITERATIONS: usize = 200;
/// Target backward error `|p(z)| / sum |c_k| |z|^k`.
pub const ROOT_TOL: f64 = 1e-12;

const STAGNATION_WINDOW: usize = 25;

fn horner(coeffs: &[C64], z: C64) -> (C64, C64, f64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    let mut scale = 0.0;
    let r = z.norm();
    for c in coeffs {
        dp = dp * z + p;
        p = p * z + c;
        scale = scale * r + c.norm();
    }
    (p, dp, scale)
}

fn backward_error(coeffs: &[C64], z: C64) -> f64 {
    let (p, _, scale) = horner(coeffs, z);
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

fn initial_points(coeffs: &[C64], rotation: f64, radius_factor: f64) -> Vec<C64> {
    let d = coeffs.len() - 1;
    let center = -coeffs[1] / d as f64;
    let radius = (1..=d).map(|k| coeffs[k].norm().powf(1.0 / k as f64)).fold(0.0, f64::max).max(1e-3) * radius_factor;
    (0..d).map(|j| center + C64::from_polar(radius, std::f64::consts::TAU * j as f64 / d as f64 + rotation)).collect()
}

/// Roots, with multiplicity, of the monic polynomial
/// `coeffs[0] z^d + coeffs[1] z^{d-1} + ... + coeffs[d]`.
///
/// Exact zero roots are split off first. The iteration stops once every
/// root has backward error below [`ROOT_TOL`]; on stagnation it restarts
/// from rotated, enlarged starting circles within the same budget.
pub fn poly_roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    if coeffs.len() < 2 {
        return Err(Error::Precondition("need degree at least one".into()));
    }
    if (coeffs[0] - C64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::Precondition(format!("leading coefficient {} is not 1", coeffs[0])));
    }
    let mut coeffs = coeffs.to_vec();
    let mut roots = Vec::new();
    while coeffs.len() > 1 && coeffs[coeffs.len() - 1] == C64::new(0.0, 0.0) {
        coeffs.pop();
        roots.push(C64::new(0.0, 0.0));
    }
    let d = coeffs.len() - 1;
    if d == 0 {
        return Ok(roots);
    }
    if d == 1 {
        roots.push(-coeffs[1]);
        return Ok(roots);
    }

    let mut z = initial_points(&coeffs, 0.4, 1.0);
    let mut best = z.clone();
    let mut best_err = f64::INFINITY;
    let mut since_improvement = 0;
    let mut restarts = 0;
    for _ in 0..ROOT_ITERATIONS {
        let errs: Vec<f64> = z.iter().map(|&x| backward_error(&coeffs, x)).collect();
        let worst = errs.iter().copied().fold(0.0, f64::max);
        if worst < best_err {
            best_err = worst;
            best = z.clone();
            since_improvement = 0;
        } else {
            since_improvement += 1;
        }
        if worst <= ROOT_TOL {
            break;
        }
        if since_improvement >= STAGNATION_WINDOW || z.iter().any(|x| !x.is_finite()) {
            restarts += 1;
            z = initial_points(&coeffs, 0.4 + 0.9 * restarts as f64, 1.0 + 0.5 * restarts as f64);
            since_improvement = 0;
            continue;
        }
        for i in 0..d {
            if errs[i] <= ROOT_TOL * 1e-2 {
                continue;
            }
            let (p, dp, _) = horner(&coeffs, z[i]);
            let ratio = p / dp;
            let repulsion: C64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
            } else if ratio.is_finite() {
                z[i] -= ratio;
            }
        }
    }
    let final_err = z.iter().map(|&x| backward_error(&coeffs, x)).fold(0.0, f64::max);
    if final_err < best_err {
        best_err = final_err;
        best = z;
    }
    if best_err > ROOT_TOL {
        best.extend(roots);
        return Err(Error::NoConvergence { iterations: ROOT_ITERATIONS, residual: best_err, best });
    }
    roots.extend(best);
    Ok(roots)
}
