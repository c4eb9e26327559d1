//! Mean-squared-error objective over a set of scenes and its gradient in `(k, A, B)`.
//!
//! Each scene's risk is a maximum over cells `k·G·exp(-A·t)·exp(-B·d)`. With
//! the maximizing cell `(t*, d*)` held fixed the risk `P` is smooth, giving
//!
//! ```text
//! ∂P/∂k = G·ω_T·ω_D     ∂P/∂A = -t*·P     ∂P/∂B = -d*·P
//! ```
//!
//! [`loss`] and [`analytic_gradient`] evaluate scenes through
//! [`podar_scene`](crate::podar_scene). [`CompiledProblem`] caches the
//! parameter-free cell geometry and is what the optimizer runs on.

use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::params::PodarParams;
use crate::risk::{attenuation, cell_value, scene_geometry, Scene};

/// The three continuously calibrated parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FitParams {
    pub k: f64,
    pub a: f64,
    pub b: f64,
}

impl FitParams {
    pub const fn new(k: f64, a: f64, b: f64) -> Self {
        Self { k, a, b }
    }

    pub fn with_model(self, horizon: f64, alpha: f64, dt: f64) -> PodarParams {
        PodarParams {
            horizon,
            k: self.k,
            a: self.a,
            b: self.b,
            alpha,
            dt,
        }
    }

    pub fn of(params: &PodarParams) -> Self {
        Self {
            k: params.k,
            a: params.a,
            b: params.b,
        }
    }

    pub(crate) fn to_array(self) -> [f64; 3] {
        [self.k, self.a, self.b]
    }

    pub(crate) fn from_array(v: [f64; 3]) -> Self {
        Self {
            k: v[0],
            a: v[1],
            b: v[2],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gradient {
    pub k: f64,
    pub a: f64,
    pub b: f64,
    /// Set when `k = 0` yet the loss still pulls on `k`: every scene's risk is
    /// zero there, so the maximizing cell is only a tie-break.
    pub boundary: bool,
}

impl Gradient {
    pub fn to_array(&self) -> [f64; 3] {
        [self.k, self.a, self.b]
    }

    pub fn is_finite(&self) -> bool {
        self.k.is_finite() && self.a.is_finite() && self.b.is_finite()
    }
}

fn check_counts(signals: &[f64], scenarios: &[Scene]) -> Result<()> {
    if signals.len() != scenarios.len() {
        return Err(invalid(alloc::format!(
            "{} signals for {} scenarios",
            signals.len(),
            scenarios.len()
        )));
    }
    if scenarios.is_empty() {
        return Err(invalid("no scenarios"));
    }
    Ok(())
}

/// Model risk for every scene.
pub fn predict(params: &PodarParams, scenarios: &[Scene]) -> Result<Vec<f64>> {
    scenarios
        .iter()
        .map(|s| s.evaluate(params).map(|r| r.final_podar))
        .collect()
}

pub(crate) fn mse(predicted: &[f64], observed: &[f64]) -> f64 {
    let sum: f64 = predicted
        .iter()
        .zip(observed)
        .map(|(p, o)| (p - o) * (p - o))
        .sum();
    sum / observed.len() as f64
}

/// Mean squared error between model risk and signal over the scenes.
pub fn loss(params: &PodarParams, signals: &[f64], scenarios: &[Scene]) -> Result<f64> {
    check_counts(signals, scenarios)?;
    Ok(mse(&predict(params, scenarios)?, signals))
}

/// Gradient of [`loss`] in `(k, A, B)`.
pub fn analytic_gradient(
    params: &PodarParams,
    signals: &[f64],
    scenarios: &[Scene],
) -> Result<Gradient> {
    check_counts(signals, scenarios)?;
    params.validate()?;
    // The maximizing cell does not depend on k > 0; evaluating at k = 1 keeps
    // it meaningful at k = 0 too.
    let unit = params.with_k(1.0);
    let (mut gk, mut ga, mut gb) = (0.0, 0.0, 0.0);
    for (scene, &y) in scenarios.iter().zip(signals) {
        let risk = scene.evaluate(&unit)?;
        let cell = risk.argmax_cell();
        let q = cell_value(1.0, cell.damage, cell.omega_t, cell.omega_d);
        let p = cell_value(params.k, cell.damage, cell.omega_t, cell.omega_d);
        let r = p - y;
        gk += r * q;
        ga -= r * cell.time * p;
        gb -= r * cell.distance * p;
    }
    let scale = 2.0 / signals.len() as f64;
    let (k, a, b) = (gk * scale, ga * scale, gb * scale);
    Ok(Gradient {
        k,
        a,
        b,
        boundary: params.k == 0.0 && k != 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    time: f64,
    distance: f64,
    damage: f64,
    log_damage: f64,
}

/// Cell geometry of a fixed scenario set at a fixed horizon, reduced to the
/// cells that can still be a maximum for some `(k, A, B) ≥ 0`.
#[derive(Debug, Clone)]
pub struct CompiledProblem {
    scenes: Vec<Vec<Candidate>>,
    targets: Vec<f64>,
}

impl CompiledProblem {
    pub fn new(
        scenarios: &[Scene],
        signals: &[f64],
        horizon: f64,
        alpha: f64,
        dt: f64,
    ) -> Result<Self> {
        check_counts(signals, scenarios)?;
        FitParams::new(1.0, 0.0, 0.0)
            .with_model(horizon, alpha, dt)
            .validate()?;
        let scenes = scenarios
            .iter()
            .map(|s| {
                let geometry = scene_geometry(&s.host, &s.objects, horizon, dt, alpha)?;
                let steps = geometry[0].len();
                let mut kept: Vec<Candidate> = Vec::new();
                // step-major, object-minor: the same order ties are broken in
                for step in 0..steps {
                    for row in &geometry {
                        let g = row[step];
                        if !(g.damage > 0.0) {
                            continue;
                        }
                        // an earlier cell no farther and no less damaging always wins
                        if kept
                            .iter()
                            .any(|c| c.distance <= g.distance && c.damage >= g.damage)
                        {
                            continue;
                        }
                        kept.push(Candidate {
                            time: g.time,
                            distance: g.distance,
                            damage: g.damage,
                            log_damage: libm::log(g.damage),
                        });
                    }
                }
                Ok(kept)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            scenes,
            targets: signals.to_vec(),
        })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn candidate_count(&self) -> usize {
        self.scenes.iter().map(Vec::len).sum()
    }

    #[inline]
    fn best<'a>(cands: &'a [Candidate], fit: &FitParams) -> Option<&'a Candidate> {
        let mut best: Option<&Candidate> = None;
        let mut best_score = f64::NEG_INFINITY;
        for c in cands {
            let score = c.log_damage - fit.a * c.time - fit.b * c.distance;
            if score > best_score {
                best_score = score;
                best = Some(c);
            }
        }
        best
    }

    /// Loss and gradient at `fit`.
    pub fn evaluate(&self, fit: &FitParams) -> (f64, Gradient) {
        let (mut sum, mut gk, mut ga, mut gb) = (0.0, 0.0, 0.0, 0.0);
        for (cands, &y) in self.scenes.iter().zip(&self.targets) {
            let Some(c) = Self::best(cands, fit) else {
                sum += y * y;
                continue;
            };
            let (wt, wd) = (attenuation(fit.a, c.time), attenuation(fit.b, c.distance));
            let q = cell_value(1.0, c.damage, wt, wd);
            let p = cell_value(fit.k, c.damage, wt, wd);
            let r = p - y;
            sum += r * r;
            gk += r * q;
            ga -= r * c.time * p;
            gb -= r * c.distance * p;
        }
        let n = self.targets.len() as f64;
        let scale = 2.0 / n;
        let (k, a, b) = (gk * scale, ga * scale, gb * scale);
        (
            sum / n,
            Gradient {
                k,
                a,
                b,
                boundary: fit.k == 0.0 && k != 0.0,
            },
        )
    }

    pub fn predictions(&self, fit: &FitParams) -> Vec<f64> {
        self.scenes
            .iter()
            .map(|cands| match Self::best(cands, fit) {
                Some(c) => cell_value(
                    fit.k,
                    c.damage,
                    attenuation(fit.a, c.time),
                    attenuation(fit.b, c.distance),
                ),
                None => 0.0,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec2;
    use crate::object::RoadObject;
    use alloc::vec;
    use approx::assert_relative_eq;

    fn single_scene(x: f64, y: f64) -> Scene {
        Scene::new(
            RoadObject::host(Vec2::ZERO, Vec2::new(25.0, 0.0)),
            vec![RoadObject::static_point("o", Vec2::new(x, y))],
        )
    }

    fn params(k: f64, a: f64, b: f64) -> PodarParams {
        PodarParams::new(3.0, k, a, b).unwrap()
    }

    #[test]
    fn loss_zero_when_signals_match() {
        let scenes = vec![single_scene(50.0, 0.0), single_scene(40.0, 1.8)];
        let p = params(0.001, 1.0, 2.0);
        let signals = predict(&p, &scenes).unwrap();
        assert_eq!(loss(&p, &signals, &scenes).unwrap(), 0.0);
        let g = analytic_gradient(&p, &signals, &scenes).unwrap();
        assert_eq!(g.to_array(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn constant_zero_prediction() {
        let scenes = vec![single_scene(50.0, 0.0), single_scene(40.0, 1.8)];
        assert_eq!(
            loss(&params(0.0, 1.0, 1.0), &[0.0, 1.0], &scenes).unwrap(),
            0.5
        );
    }

    #[test]
    fn doubling_residuals_quadruples_loss() {
        let scenes = vec![single_scene(50.0, 0.0), single_scene(40.0, 1.8)];
        let p = params(0.001, 1.0, 2.0);
        let pred = predict(&p, &scenes).unwrap();
        let sig1: Vec<f64> = pred.iter().map(|v| v + 0.125).collect();
        let sig2: Vec<f64> = pred.iter().map(|v| v + 0.25).collect();
        let (l1, l2) = (
            loss(&p, &sig1, &scenes).unwrap(),
            loss(&p, &sig2, &scenes).unwrap(),
        );
        assert_relative_eq!(l2, 4.0 * l1, max_relative = 1e-12);
    }

    #[test]
    fn count_mismatch() {
        let scenes = vec![single_scene(50.0, 0.0)];
        assert!(loss(&params(1.0, 1.0, 1.0), &[0.0, 1.0], &scenes).is_err());
        assert!(CompiledProblem::new(&scenes, &[], 3.0, 0.7, 0.1).is_err());
    }

    #[test]
    fn zero_time_argmax_has_no_temporal_gradient() {
        // far lateral obstacle that the host moves away from: maximum at t = 0
        let scenes = vec![single_scene(-5.0, 3.0)];
        let p = params(0.001, 0.5, 0.5);
        let g = analytic_gradient(&p, &[0.3], &scenes).unwrap();
        let risk = scenes[0].evaluate(&p).unwrap();
        assert_eq!(risk.argmax_step, 0);
        assert_eq!(g.a, 0.0);
    }

    #[test]
    fn single_scene_gradient_matches_central_difference() {
        let scenes = vec![single_scene(60.0, 1.65)];
        let base = params(0.002, 0.9, 1.7);
        let signals = [0.4];
        let g = analytic_gradient(&base, &signals, &scenes).unwrap();
        let h = 1e-6;
        let fd = |f: &dyn Fn(f64) -> PodarParams, x: f64| {
            (loss(&f(x + h), &signals, &scenes).unwrap()
                - loss(&f(x - h), &signals, &scenes).unwrap())
                / (2.0 * h)
        };
        let dk = fd(&|x| base.with_k(x), base.k);
        let da = fd(&|x| PodarParams { a: x, ..base }, base.a);
        let db = fd(&|x| PodarParams { b: x, ..base }, base.b);
        assert_relative_eq!(g.k, dk, max_relative = 1e-6);
        assert_relative_eq!(g.a, da, max_relative = 1e-6);
        assert_relative_eq!(g.b, db, max_relative = 1e-6);
    }

    #[test]
    fn boundary_flag_at_zero_k() {
        let scenes = vec![single_scene(50.0, 0.0)];
        let g = analytic_gradient(&params(0.0, 1.0, 1.0), &[0.5], &scenes).unwrap();
        assert!(g.boundary);
        assert!(g.k < 0.0);
        let g = analytic_gradient(&params(0.0, 1.0, 1.0), &[0.0], &scenes).unwrap();
        assert!(!g.boundary);
    }

    #[test]
    fn compiled_matches_reference() {
        let scenes = vec![
            single_scene(50.0, 0.0),
            single_scene(75.0, 1.2),
            single_scene(125.0, -2.1),
            single_scene(25.0, 3.0),
        ];
        let signals = [1.0, 0.3, 0.05, 0.2];
        let p = params(0.0015, 0.8, 2.2);
        let compiled = CompiledProblem::new(&scenes, &signals, p.horizon, p.alpha, p.dt).unwrap();
        let (l, g) = compiled.evaluate(&FitParams::of(&p));
        assert_relative_eq!(
            l,
            loss(&p, &signals, &scenes).unwrap(),
            max_relative = 1e-12
        );
        let gr = analytic_gradient(&p, &signals, &scenes).unwrap();
        for (x, y) in g.to_array().iter().zip(gr.to_array()) {
            assert_relative_eq!(*x, y, max_relative = 1e-12);
        }
        assert_eq!(
            compiled.predictions(&FitParams::of(&p)),
            predict(&p, &scenes).unwrap()
        );
        assert!(compiled.candidate_count() < 4 * 31);
    }
}
