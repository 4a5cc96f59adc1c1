use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::feasible::feasible_plan;
use super::srezka::srezka_improve;
use crate::error::{Error, Result};
use crate::expmap::{exp_map_with, Trajectory};
use crate::pmp::{Branch, Covector, SEPARATRIX_TOL};
use crate::se2::{relative_target, wrap, Pose};

/// Point of the unrolled level surface `H = 1`: two half-planes
/// `h1 < 0, h2 = ±1` glued to the half-cylinder `h1² + h2² = 1, h1 >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderPoint {
    pub psi: f64,
    pub h3: f64,
}

impl CylinderPoint {
    pub fn decode(&self) -> Covector {
        let psi = self.psi;
        if psi > FRAC_PI_2 {
            Covector::new(FRAC_PI_2 - psi, 1.0, self.h3)
        } else if psi < -FRAC_PI_2 {
            Covector::new(psi + FRAC_PI_2, -1.0, self.h3)
        } else {
            Covector::new(psi.cos(), psi.sin(), self.h3)
        }
    }

    /// Inverse of [`decode`](Self::decode) for covectors on `H = 1`.
    pub fn encode(h: &Covector) -> Self {
        let psi = if h.h1 >= 0.0 {
            h.h2.atan2(h.h1)
        } else if h.h2 >= 0.0 {
            FRAC_PI_2 - h.h1
        } else {
            h.h1 - FRAC_PI_2
        };
        Self { psi, h3: h.h3 }
    }
}

/// Knobs of the multi-start shooting solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    pub n_psi: usize,
    pub n_h3: usize,
    pub n_t: usize,
    /// Acceptance threshold on the boundary residual.
    pub tol: f64,
    /// Seeds cover `h3 ∈ [-h3_max, h3_max]`.
    pub h3_max: f64,
    /// Seeds cover `psi ∈ [-π - psi_margin, π + psi_margin]`.
    pub psi_margin: f64,
    /// Number of grid points refined.
    pub max_seeds: usize,
    pub max_iterations: usize,
    /// Relative step of the finite-difference Jacobian.
    pub fd_step: f64,
    /// Solutions closer than this in `(psi, h3, T)` are merged.
    pub dedup_radius: f64,
    /// Weight of the heading error against the planar error.
    pub angle_weight: f64,
    pub separatrix_tol: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            n_psi: 32,
            n_h3: 32,
            n_t: 32,
            tol: 1e-6,
            h3_max: 10.0,
            psi_margin: 1.0,
            max_seeds: 96,
            max_iterations: 80,
            fd_step: 1e-7,
            dedup_radius: 1e-4,
            angle_weight: 1.0,
            separatrix_tol: SEPARATRIX_TOL,
        }
    }
}

impl ShootingConfig {
    pub fn with_grid(mut self, n_psi: usize, n_h3: usize, n_t: usize) -> Self {
        self.n_psi = n_psi;
        self.n_h3 = n_h3;
        self.n_t = n_t;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_psi < 8 || self.n_h3 < 8 || self.n_t < 8 {
            return Err(Error::Domain("grid counts must be >= 8".into()));
        }
        if !(self.tol > 0.0 && self.h3_max > 0.0 && self.fd_step > 0.0 && self.angle_weight > 0.0) {
            return Err(Error::Domain(
                "tolerances and scales must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Converged shooting solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShootingSolution {
    pub start: CylinderPoint,
    #[serde(rename = "T")]
    pub total_time: f64,
    pub residual: f64,
    #[serde(skip)]
    pub trajectory: Option<Trajectory>,
}

/// Boundary error of the extremal from `p` run for `total_time`, with the
/// default unit weighting of heading against position.
pub fn shooting_residual(p: &CylinderPoint, total_time: f64, target: &Pose) -> Result<(f64, Pose)> {
    let cfg = ShootingConfig::default();
    let end = endpoint(p, total_time, &cfg)?;
    Ok((scalar_residual(&end, target, cfg.angle_weight), end))
}

fn endpoint(p: &CylinderPoint, total_time: f64, cfg: &ShootingConfig) -> Result<Pose> {
    Ok(exp_map_with(
        &p.decode(),
        total_time,
        Pose::identity(),
        cfg.separatrix_tol,
    )?
    .end_pose)
}

fn scalar_residual(end: &Pose, target: &Pose, w: f64) -> f64 {
    (end.x - target.x).hypot(end.y - target.y) + w * wrap(end.theta - target.theta).abs()
}

fn residual_vector(end: &Pose, target: &Pose, w: f64) -> [f64; 3] {
    [
        end.x - target.x,
        end.y - target.y,
        w * wrap(end.theta - target.theta),
    ]
}

/// Symmetric grid `scale · (2i - (n - 1)) / (n - 1)`, exactly mirror-invariant.
fn symmetric_grid(n: usize, scale: f64) -> Vec<f64> {
    let d = (n - 1) as f64;
    (0..n).map(|i| scale * (2.0 * i as f64 - d) / d).collect()
}

#[derive(Debug, Clone, Copy)]
struct Seed {
    psi: f64,
    h3: f64,
    t: f64,
    residual: f64,
}

/// Multi-start shooting for the extremals from the identity to `target`.
///
/// Returns every converged solution (residual `<= tol`), deduplicated and
/// sorted by ascending time, ties broken by `|h3|` then `psi`.
pub fn solve_bvp(target: &Pose, cfg: &ShootingConfig) -> Result<Vec<ShootingSolution>> {
    cfg.validate()?;
    let plan = feasible_plan(&Pose::identity(), target);
    let t_ub = plan.total_time;

    let identity_residual = scalar_residual(&Pose::identity(), target, cfg.angle_weight);
    if identity_residual <= cfg.tol {
        let start = CylinderPoint {
            psi: FRAC_PI_2,
            h3: 0.0,
        };
        let trajectory = exp_map_with(&start.decode(), 0.0, Pose::identity(), cfg.separatrix_tol)?;
        return Ok(vec![ShootingSolution {
            start,
            total_time: 0.0,
            residual: identity_residual,
            trajectory: Some(trajectory),
        }]);
    }

    let seeds = grid_seeds(target, t_ub, cfg);
    let best_seed = seeds.first().map(|s| s.residual).unwrap_or(f64::INFINITY);

    let refined: Vec<Seed> = seeds
        .par_iter()
        .filter_map(|s| refine(s, target, cfg))
        .collect();

    let best_residual = refined.iter().map(|s| s.residual).fold(best_seed, f64::min);

    let mut converged: Vec<Seed> = refined
        .into_iter()
        .filter(|s| s.residual <= cfg.tol)
        .collect();
    converged.sort_by(solution_order);
    let mut unique: Vec<Seed> = Vec::new();
    for s in converged {
        let dup = unique.iter().any(|u| {
            let d = ((u.psi - s.psi).powi(2) + (u.h3 - s.h3).powi(2) + (u.t - s.t).powi(2)).sqrt();
            d < cfg.dedup_radius
        });
        if !dup {
            unique.push(s);
        }
    }
    if unique.is_empty() {
        return Err(Error::NoConvergence {
            best_residual,
            fallback: Some(plan),
        });
    }
    unique
        .into_iter()
        .map(|s| {
            let start = CylinderPoint {
                psi: s.psi,
                h3: s.h3,
            };
            let trajectory =
                exp_map_with(&start.decode(), s.t, Pose::identity(), cfg.separatrix_tol)?;
            Ok(ShootingSolution {
                start,
                total_time: s.t,
                residual: s.residual,
                trajectory: Some(trajectory),
            })
        })
        .collect()
}

fn solution_order(a: &Seed, b: &Seed) -> std::cmp::Ordering {
    let key = |s: &Seed| (s.t * 1e9).round();
    key(a)
        .total_cmp(&key(b))
        .then(a.h3.abs().total_cmp(&b.h3.abs()))
        .then(a.psi.total_cmp(&b.psi))
}

/// Evaluate the residual on the seed grid and keep the best local minima.
#[allow(clippy::needless_range_loop)]
fn grid_seeds(target: &Pose, t_ub: f64, cfg: &ShootingConfig) -> Vec<Seed> {
    let psis = symmetric_grid(cfg.n_psi, PI + cfg.psi_margin);
    let h3s = symmetric_grid(cfg.n_h3, cfg.h3_max);
    let times: Vec<f64> = (1..=cfg.n_t)
        .map(|l| t_ub * l as f64 / cfg.n_t as f64)
        .collect();
    let nt = cfg.n_t;

    let cells: Vec<(usize, usize)> = (0..cfg.n_psi)
        .flat_map(|i| (0..cfg.n_h3).map(move |j| (i, j)))
        .collect();
    let columns: Vec<Vec<f64>> = cells
        .par_iter()
        .map(|&(i, j)| {
            let h0 = CylinderPoint {
                psi: psis[i],
                h3: h3s[j],
            }
            .decode();
            match exp_map_with(&h0, t_ub, Pose::identity(), cfg.separatrix_tol) {
                Ok(tr) => times
                    .iter()
                    .map(|&t| {
                        tr.pose_at(t)
                            .map(|p| scalar_residual(&p, target, cfg.angle_weight))
                            .unwrap_or(f64::INFINITY)
                    })
                    .collect(),
                Err(_) => vec![f64::INFINITY; nt],
            }
        })
        .collect();
    let at = |i: usize, j: usize, l: usize| columns[i * cfg.n_h3 + j][l];

    let mut seeds = Vec::new();
    for i in 0..cfg.n_psi {
        for j in 0..cfg.n_h3 {
            for l in 0..nt {
                let r = at(i, j, l);
                if !r.is_finite() {
                    continue;
                }
                let mut is_min = true;
                'nb: for di in -1i64..=1 {
                    for dj in -1i64..=1 {
                        for dl in -1i64..=1 {
                            if di == 0 && dj == 0 && dl == 0 {
                                continue;
                            }
                            let (ni, nj, nl) = (i as i64 + di, j as i64 + dj, l as i64 + dl);
                            if ni < 0
                                || nj < 0
                                || nl < 0
                                || ni >= cfg.n_psi as i64
                                || nj >= cfg.n_h3 as i64
                                || nl >= nt as i64
                            {
                                continue;
                            }
                            if at(ni as usize, nj as usize, nl as usize) < r {
                                is_min = false;
                                break 'nb;
                            }
                        }
                    }
                }
                if is_min {
                    seeds.push(Seed {
                        psi: psis[i],
                        h3: h3s[j],
                        t: times[l],
                        residual: r,
                    });
                }
            }
        }
    }
    seeds.sort_by(|a, b| a.residual.total_cmp(&b.residual).then(a.t.total_cmp(&b.t)));
    seeds.truncate(cfg.max_seeds);
    seeds
}

struct Eval {
    r: [f64; 3],
    norm: f64,
    segments: usize,
}

fn evaluate(z: &[f64; 3], target: &Pose, cfg: &ShootingConfig) -> Option<Eval> {
    let h0 = CylinderPoint {
        psi: z[0],
        h3: z[1],
    }
    .decode();
    let tr = exp_map_with(&h0, z[2], Pose::identity(), cfg.separatrix_tol).ok()?;
    let r = residual_vector(&tr.end_pose, target, cfg.angle_weight);
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    norm.is_finite().then_some(Eval {
        r,
        norm,
        segments: tr.segments.len(),
    })
}

/// Levenberg-Marquardt on `(psi, h3, T)` with a forward-difference Jacobian.
#[allow(clippy::needless_range_loop)]
fn refine(seed: &Seed, target: &Pose, cfg: &ShootingConfig) -> Option<Seed> {
    let mut z = [seed.psi, seed.h3, seed.t];
    let mut cur = evaluate(&z, target, cfg)?;
    let mut lambda = 1e-3;
    let h3_limit = 2.0 * cfg.h3_max;
    let goal = 1e-3 * cfg.tol;

    for _ in 0..cfg.max_iterations {
        if cur.norm <= goal {
            break;
        }
        let mut jac = [[0.0; 3]; 3];
        for c in 0..3 {
            let step = cfg.fd_step * z[c].abs().max(1.0);
            let mut zp = z;
            zp[c] += step;
            let ev = evaluate(&zp, target, cfg)?;
            for r in 0..3 {
                jac[r][c] = (ev.r[r] - cur.r[r]) / step;
            }
        }
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for a in 0..3 {
            for b in 0..3 {
                jtj[a][b] = (0..3).map(|r| jac[r][a] * jac[r][b]).sum();
            }
            jtr[a] = (0..3).map(|r| jac[r][a] * cur.r[r]).sum();
        }

        let mut improved = false;
        while lambda < 1e10 {
            let mut m = jtj;
            for (d, row) in m.iter_mut().enumerate() {
                row[d] += lambda * (jtj[d][d] + 1e-9);
            }
            let Some(delta) = solve3(&m, &jtr.map(|v| -v)) else {
                lambda *= 10.0;
                continue;
            };
            let mut scale = 1.0;
            let mut accepted = None;
            for _ in 0..4 {
                let trial = [
                    z[0] + scale * delta[0],
                    (z[1] + scale * delta[1]).clamp(-h3_limit, h3_limit),
                    (z[2] + scale * delta[2]).max(0.0),
                ];
                if let Some(ev) = evaluate(&trial, target, cfg) {
                    if ev.norm < cur.norm {
                        accepted = Some((trial, ev));
                        break;
                    }
                    if ev.segments == cur.segments {
                        break;
                    }
                }
                // The step changed the switching structure without helping: shorten it.
                scale *= 0.5;
            }
            if let Some((trial, ev)) = accepted {
                z = trial;
                cur = ev;
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    let end = exp_map_with(
        &CylinderPoint {
            psi: z[0],
            h3: z[1],
        }
        .decode(),
        z[2],
        Pose::identity(),
        cfg.separatrix_tol,
    )
    .ok()?
    .end_pose;
    Some(Seed {
        psi: z[0],
        h3: z[1],
        t: z[2],
        residual: scalar_residual(&end, target, cfg.angle_weight),
    })
}

fn solve3(m: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let det = |a: &[[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let d = det(m);
    if !d.is_normal() {
        return None;
    }
    let mut x = [0.0; 3];
    for (c, xc) in x.iter_mut().enumerate() {
        let mut mc = *m;
        for r in 0..3 {
            mc[r][c] = b[r];
        }
        *xc = det(&mc) / d;
    }
    Some(x)
}

/// Whether `traj` has the optimal shape: rotations only at the ends and a
/// single forward arc in between whose projection has no cusp.
pub fn has_optimal_structure(traj: &Trajectory) -> bool {
    let segs = &traj.segments;
    if segs.is_empty() {
        return true;
    }
    let first = usize::from(segs[0].kind.is_rotation());
    let last = if segs.len() > first && segs[segs.len() - 1].kind.is_rotation() {
        segs.len() - 1
    } else {
        segs.len()
    };
    let middle = &segs[first..last.max(first)];
    if middle.len() > 1 || middle.iter().any(|s| s.kind.is_rotation()) {
        return false;
    }
    middle.iter().all(|seg| {
        (1..64).all(|i| {
            let dt = seg.duration * i as f64 / 64.0;
            seg.state_after(dt)
                .map(|(_, h)| h.h1 > 0.0)
                .unwrap_or(false)
        })
    })
}

/// Minimal-time extremal from `q0` to `q1` among those found by shooting,
/// restricted to trajectories that pass the optimal-structure test.
pub fn optimal_trajectory(q0: &Pose, q1: &Pose, cfg: &ShootingConfig) -> Result<Trajectory> {
    let target = relative_target(q0, q1);
    let solutions = solve_bvp(&target, cfg)?;
    let best = solutions
        .iter()
        .filter_map(|s| s.trajectory.as_ref())
        .find(|tr| has_optimal_structure(tr) && srezka_improve(tr).is_none());
    match best {
        Some(tr) => tr.left_translated(q0),
        None => Err(Error::NoConvergence {
            best_residual: solutions
                .first()
                .map(|s| s.residual)
                .unwrap_or(f64::INFINITY),
            fallback: Some(feasible_plan(q0, q1)),
        }),
    }
}

/// Kinds of segments in a trajectory, used by reports.
pub fn structure_summary(traj: &Trajectory) -> Vec<Branch> {
    traj.kinds()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cylinder_roundtrip() {
        for psi in [-4.0, -2.0, -1.0, 0.0, 0.7, 1.5, 2.5, 4.1] {
            let p = CylinderPoint { psi, h3: 0.3 };
            let h = p.decode();
            assert!((crate::pmp::hamiltonian(&h) - 1.0).abs() < 1e-15);
            assert!((CylinderPoint::encode(&h).psi - psi).abs() < 1e-15);
        }
    }

    #[test]
    fn residual_examples() {
        let eq = CylinderPoint {
            psi: FRAC_PI_2,
            h3: 0.0,
        };
        let (r, _) = shooting_residual(&eq, 1.0, &Pose::new(0.0, 0.0, 1.0)).unwrap();
        assert!(r < 1e-15);
        let line = CylinderPoint { psi: 0.0, h3: 0.0 };
        let (r, _) = shooting_residual(&line, 2.0, &Pose::new(2.0, 0.0, 0.0)).unwrap();
        assert!(r < 1e-15);
        let (r, _) = shooting_residual(&line, 2.0, &Pose::new(2.0, 0.0, 0.1)).unwrap();
        assert!((r - 0.1).abs() < 1e-15);
    }

    #[test]
    fn grid_is_mirror_symmetric() {
        let g = symmetric_grid(32, PI + 1.0);
        for i in 0..32 {
            assert_eq!(g[i], -g[31 - i]);
        }
    }

    #[test]
    fn optimal_trajectory_is_left_translated() {
        let q0 = Pose::new(1.0, -2.0, 0.7);
        let q1 = q0.compose(&Pose::new(1.2, 0.4, 0.3));
        let tr = optimal_trajectory(&q0, &q1, &ShootingConfig::default()).unwrap();
        assert!(tr.start_pose.distance(&q0) < 1e-15);
        assert!(tr.end_pose.distance(&q1) < 1e-6);
        assert!(has_optimal_structure(&tr));
        assert!(tr.total_time <= feasible_plan(&q0, &q1).total_time);
    }

    #[test]
    fn identity_target_takes_no_time() {
        let sols = solve_bvp(&Pose::identity(), &ShootingConfig::default()).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].total_time, 0.0);
    }

    #[test]
    fn structure_rejects_interior_rotation() {
        let tr = crate::expmap::exp_map(&Covector::new(0.5, 0.8660254037844386, 1.0), 6.0).unwrap();
        assert!(!has_optimal_structure(&tr));
        let tr = crate::expmap::exp_map(&Covector::new(-0.5, 1.0, -0.4), 2.0).unwrap();
        assert!(has_optimal_structure(&tr));
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = ShootingConfig::default().with_grid(4, 32, 32);
        assert!(matches!(
            solve_bvp(&Pose::new(1.0, 0.0, 0.0), &cfg),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn solve3_identity() {
        let m = [[2.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, 0.0, 4.0]];
        assert_eq!(solve3(&m, &[2.0, 3.0, 4.0]).unwrap(), [1.0, 1.0, 1.0]);
        assert!(solve3(&[[0.0; 3]; 3], &[1.0, 1.0, 1.0]).is_none());
    }
}
