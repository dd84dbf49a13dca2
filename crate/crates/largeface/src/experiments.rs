//! The computations behind each subcommand, free of any file output. The CLI
//! writes what these return; the acceptance harness inspects it directly.

use std::f64::consts::PI;

use largeface_core::fragmentation::{count_large_events_sweep, sigma_p, simulate, FragEvent};
use largeface_core::lamination::{
    centroid_from_path, count_large_sweep, extract_dislocations, level_functional, longest_chord_fraction,
    DislocationTree,
};
use largeface_core::sampling::{sample_brownian_excursion, sample_stable_jumps, ExcursionPath};
use largeface_core::stats::{
    ks_distance, ratio_diagnostic, EpsilonSweep, EstimateWithCI, RatioRow, RatioTarget, SweepPoint, Welford,
};
use largeface_core::theory::{
    self, brownian_longest_chord_cdf, delta1_cdf, nu_beta_phi_sample, phi_brownian, phi_stable, stable_face_prefactor,
    stable_face_sample, t1_moment_target, QuadratureSpec, StableChordSetup, TheoryConstants,
};
use largeface_core::{Error, RandomStream};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{
    CountLargeParams, FaceKind, FragmentParams, LongestChordParams, RatioSpec, StableParams, TheoryEval, TheoryParams,
    TriangulateParams,
};
use crate::error::{RunError, RunResult};
use crate::runner::Runner;

pub struct Triangulation {
    pub path: ExcursionPath,
    pub tree: DislocationTree,
}

pub fn triangulate(p: &TriangulateParams) -> RunResult<Triangulation> {
    p.validate()?;
    let path = sample_brownian_excursion(p.n, RandomStream::new(p.seed, p.replicate))?;
    let tree = extract_dislocations(&path);
    Ok(Triangulation { path, tree })
}

impl Triangulation {
    pub fn summary(&self) -> Value {
        json!({
            "records": self.tree.records().len(),
            "ties": self.tree.ties(),
            "area": self.path.area(),
            "max": self.path.max(),
        })
    }
}

/// Sweep results in the grid order the user gave (coarse to fine).
pub struct SweepOutcome {
    pub points: Vec<SweepPoint>,
    pub ratio: Option<Vec<RatioRow>>,
    pub sweep: EpsilonSweep,
}

impl SweepOutcome {
    fn new(sweep: EpsilonSweep, target: Option<RatioTarget>) -> RunResult<Self> {
        let mut points = sweep.aggregate()?;
        points.reverse();
        let ratio = match target {
            Some(t) => {
                let mut rows = ratio_diagnostic(&sweep, &t)?;
                rows.reverse();
                Some(rows)
            }
            None => None,
        };
        Ok(SweepOutcome { points, ratio, sweep })
    }

    pub fn point(&self, eps: f64) -> Option<&SweepPoint> {
        self.points.iter().find(|p| p.eps == eps)
    }

    pub fn ratio_row(&self, eps: f64) -> Option<&RatioRow> {
        self.ratio.as_ref()?.iter().find(|r| r.eps == eps)
    }

    fn summary(&self) -> Value {
        let points: Vec<Value> = self
            .points
            .iter()
            .map(|p| json!({"eps": p.eps, "mean_scaled": p.estimate.mean, "ci_low": p.estimate.ci_low, "ci_high": p.estimate.ci_high}))
            .collect();
        let ratio: Option<Vec<Value>> = self.ratio.as_ref().map(|rows| {
            rows.iter()
                .map(|r| json!({"eps": r.eps, "mean_ratio": r.mean_ratio, "corr": r.corr, "m_effective": r.m_effective, "excluded": r.excluded}))
                .collect()
        });
        json!({"exponent": self.sweep.exponent(), "replicates": self.sweep.replicates(), "sweep": points, "ratio": ratio})
    }
}

/// Large-triangle counts over `replicates` excursions, with the ratio against
/// the limit of each kind. For areas the limit is the per-path
/// `4 ∫ Σ sin(π|I|)` level functional.
pub fn count_large(p: &CountLargeParams, runner: &Runner) -> RunResult<SweepOutcome> {
    p.validate()?;
    let grid = p.eps.ascending()?;
    let psi = p.kind.psi();
    let rows = runner.try_map(p.replicates, |i| -> RunResult<(Vec<u64>, f64)> {
        let path = sample_brownian_excursion(p.n, RandomStream::new(p.seed, i))?;
        let tree = extract_dislocations(&path);
        let counts = count_large_sweep(&tree, &psi, &grid)?;
        let target = match p.kind {
            FaceKind::Area => 4.0 * level_functional(&tree, |x| (PI * x).sin()),
            _ => 0.0,
        };
        Ok((counts, target))
    })?;
    let mut sweep = EpsilonSweep::new(grid, p.kind.exponent())?;
    let mut targets = Vec::with_capacity(rows.len());
    for (counts, t) in rows {
        sweep.push(counts)?;
        targets.push(t);
    }
    let c = TheoryConstants::brownian();
    let target = match p.kind {
        FaceKind::Edge => RatioTarget::Scalar(c.limit_edge),
        FaceKind::Psi1 => RatioTarget::Scalar(c.limit_psi1),
        FaceKind::Area => RatioTarget::PerReplicate(targets),
    };
    SweepOutcome::new(sweep, Some(target))
}

pub fn count_large_summary(o: &SweepOutcome) -> Value {
    o.summary()
}

pub struct ChordSample {
    pub fraction: f64,
    pub length: f64,
    pub degenerate: bool,
}

pub struct ChordOutcome {
    pub samples: Vec<ChordSample>,
    /// Kolmogorov-Smirnov distance to the closed-form law.
    pub ks: f64,
}

/// Brownian chord CDF extended by 0 below 1/3 and 1 from 1/2 on.
pub fn chord_cdf(a: f64) -> f64 {
    if a >= 0.5 {
        1.0
    } else if a <= 0.0 {
        0.0
    } else {
        brownian_longest_chord_cdf(a).unwrap_or(f64::NAN)
    }
}

pub fn longest_chord(p: &LongestChordParams, runner: &Runner) -> RunResult<ChordOutcome> {
    p.validate()?;
    let samples = runner.try_map(p.replicates, |i| -> RunResult<ChordSample> {
        let path = sample_brownian_excursion(p.n, RandomStream::new(p.seed, i))?;
        let c = centroid_from_path(&path);
        let l = longest_chord_fraction(&c.record)?;
        Ok(ChordSample { fraction: l.fraction, length: l.length, degenerate: c.degenerate })
    })?;
    let fractions: Vec<f64> = samples.iter().map(|s| s.fraction).collect();
    let ks = ks_distance(&fractions, chord_cdf)?;
    Ok(ChordOutcome { samples, ks })
}

impl ChordOutcome {
    pub fn min_fraction(&self) -> f64 {
        self.samples.iter().map(|s| s.fraction).fold(f64::INFINITY, f64::min)
    }

    pub fn summary(&self) -> Value {
        let mean: Welford = self.samples.iter().map(|s| s.fraction).collect();
        json!({
            "replicates": self.samples.len(),
            "ks": self.ks,
            "min_fraction": self.min_fraction(),
            "mean_fraction": mean.mean(),
            "degenerate": self.samples.iter().filter(|s| s.degenerate).count(),
        })
    }
}

pub struct FragmentOutcome {
    pub sweep: SweepOutcome,
    /// Replicates whose simulation hit `max_events`; they are left out of the
    /// sweep.
    pub aborted: Vec<u64>,
    /// Events of replicate 0 when requested and not aborted.
    pub first_events: Option<Vec<FragEvent>>,
    /// Per-replicate `Σ(p)` when the ratio target asks for it.
    pub sigma: Option<Vec<f64>>,
    pub warnings: Vec<String>,
}

struct FragmentReplicate {
    counts: Vec<u64>,
    sigma: Option<f64>,
    events: Option<Vec<FragEvent>>,
}

pub fn fragment(p: &FragmentParams, runner: &Runner) -> RunResult<FragmentOutcome> {
    p.validate()?;
    let config = p.model.build()?;
    let exponent = p.model.exponent(&config)?;
    let sigma_exp = match &p.ratio {
        Some(RatioSpec::Sigma { p, .. }) => Some(*p),
        _ => None,
    };
    let want_events = p.events_out.is_some();
    let reps = runner.try_map(p.replicates, |i| -> RunResult<Option<FragmentReplicate>> {
        let sim = match simulate(&config, RandomStream::new(p.seed, i)) {
            Ok(sim) => sim,
            Err(Error::SimulationAborted { .. }) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let counts = count_large_events_sweep(&sim, &config.psi, &config.eps_grid)?;
        let sigma = sigma_exp.map(|q| sigma_p(&sim, q)).transpose()?;
        let events = (want_events && i == 0).then(|| sim.events.clone());
        Ok(Some(FragmentReplicate { counts, sigma, events }))
    })?;

    let mut sweep = EpsilonSweep::new(config.eps_grid.clone(), exponent)?;
    let mut aborted = Vec::new();
    let mut sigmas = Vec::new();
    let mut first_events = None;
    for (i, rep) in reps.into_iter().enumerate() {
        match rep {
            None => aborted.push(i as u64),
            Some(r) => {
                sweep.push(r.counts)?;
                sigmas.extend(r.sigma);
                if r.events.is_some() {
                    first_events = r.events;
                }
            }
        }
    }
    if sweep.replicates() < 2 {
        return Err(Error::SimulationAborted {
            events: config.max_events,
            reason: format!("{} of {} replicates exceeded max_events", aborted.len(), p.replicates),
        }
        .into());
    }
    let target = match &p.ratio {
        None => None,
        Some(RatioSpec::Scalar { value }) => Some(RatioTarget::Scalar(*value)),
        Some(RatioSpec::Sigma { c, .. }) => Some(RatioTarget::PerReplicate(sigmas.iter().map(|s| c * s).collect())),
    };
    let mut warnings: Vec<String> = config.law.lattice_warning().into_iter().collect();
    if !aborted.is_empty() {
        warnings.push(format!("{} replicate(s) exceeded max_events and were excluded: {:?}", aborted.len(), aborted));
    }
    Ok(FragmentOutcome {
        sweep: SweepOutcome::new(sweep, target)?,
        aborted,
        first_events,
        sigma: sigma_exp.map(|_| sigmas),
        warnings,
    })
}

impl FragmentOutcome {
    pub fn summary(&self) -> Value {
        let mut v = self.sweep.summary();
        v["aborted"] = json!(self.aborted);
        v["warnings"] = json!(self.warnings);
        v
    }
}

pub struct StableRow {
    pub t1: f64,
    pub delta1: f64,
    pub jumps: usize,
    t1_power: f64,
    phi: Vec<f64>,
}

pub struct StableOutcome {
    pub rows: Vec<StableRow>,
    pub delta1_ks: f64,
    /// Estimate of `E[T₁^{1-1/β}]` and its closed form.
    pub t1_moment: (EstimateWithCI, f64),
    /// `(p, estimate, Φ_β(p))` for every requested p.
    pub phi: Vec<(f64, EstimateWithCI, f64)>,
}

pub fn stable(p: &StableParams, runner: &Runner) -> RunResult<StableOutcome> {
    p.validate()?;
    let beta = p.beta;
    let rows = runner.try_map(p.replicates, |i| -> RunResult<StableRow> {
        let s = sample_stable_jumps(beta, p.delta, RandomStream::new(p.seed, i))?;
        Ok(StableRow {
            t1: s.t1,
            delta1: s.delta1,
            jumps: s.jumps.len(),
            t1_power: s.t1.powf(1.0 - 1.0 / beta),
            phi: p.phi_p.iter().map(|&q| nu_beta_phi_sample(&s, q)).collect(),
        })
    })?;
    let delta1: Vec<f64> = rows.iter().map(|r| r.delta1).collect();
    let delta1_ks = ks_distance(&delta1, |y| delta1_cdf(beta, y))?;
    let t1: Welford = rows.iter().map(|r| r.t1_power).collect();
    let mut phi = Vec::with_capacity(p.phi_p.len());
    for (k, &q) in p.phi_p.iter().enumerate() {
        let w: Welford = rows.iter().map(|r| r.phi[k]).collect();
        phi.push((q, w.estimate()?, phi_stable(beta, q)?));
    }
    Ok(StableOutcome { delta1_ks, t1_moment: (t1.estimate()?, t1_moment_target(beta)), phi, rows })
}

impl StableOutcome {
    pub fn summary(&self) -> Value {
        let (e, target) = self.t1_moment;
        json!({
            "replicates": self.rows.len(),
            "delta1_ks": self.delta1_ks,
            "t1_moment": {"mean": e.mean, "ci_low": e.ci_low, "ci_high": e.ci_high, "target": target},
            "phi": self.phi.iter().map(|(q, e, t)| json!({"p": q, "mean": e.mean, "ci_low": e.ci_low, "ci_high": e.ci_high, "target": t})).collect::<Vec<_>>(),
        })
    }
}

/// One line of `theory` output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryRecord {
    pub name: String,
    pub inputs: Value,
    pub value: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    /// Quadrature tolerance for integrals, relative CI half-width for Monte
    /// Carlo values, absent for closed forms.
    pub rel_tol: Option<f64>,
}

impl TheoryRecord {
    fn exact(name: &str, inputs: Value, value: f64) -> Self {
        TheoryRecord { name: name.into(), inputs, value, ci_low: None, ci_high: None, rel_tol: None }
    }

    fn monte_carlo(name: &str, inputs: Value, e: &EstimateWithCI) -> Self {
        TheoryRecord {
            name: name.into(),
            inputs,
            value: e.mean,
            ci_low: Some(e.ci_low),
            ci_high: Some(e.ci_high),
            rel_tol: Some(e.rel_half_width()),
        }
    }
}

pub fn theory(p: &TheoryParams, runner: &Runner) -> RunResult<Vec<TheoryRecord>> {
    p.validate()?;
    let quad = QuadratureSpec::with_rel_tol(p.rel_tol);
    let mut out = Vec::new();
    match p.eval {
        TheoryEval::Phi => {
            let q = p.p.unwrap_or_default();
            match p.beta {
                Some(beta) => {
                    out.push(TheoryRecord::exact("phi_stable", json!({"beta": beta, "p": q}), phi_stable(beta, q)?))
                }
                None => out.push(TheoryRecord::exact("phi_brownian", json!({"p": q}), phi_brownian(q)?)),
            }
        }
        TheoryEval::M => {
            let mut r = TheoryRecord::exact("m_brownian", json!({}), theory::m_by_quadrature(&quad)?);
            r.rel_tol = Some(p.rel_tol);
            out.push(r);
        }
        TheoryEval::G1 => {
            let u = p.u.unwrap_or_default();
            if !(u > 0.0 && u <= 0.5) {
                return Err(RunError::config(format!("g1 needs 0 < u ≤ 1/2, got {u}")));
            }
            out.push(TheoryRecord::exact("g1", json!({"u": u}), theory::g1(u)));
        }
        TheoryEval::ChordCdf => {
            for &a in &p.a {
                out.push(TheoryRecord::exact("chord_cdf", json!({"a": a}), brownian_longest_chord_cdf(a)?));
            }
        }
        TheoryEval::StableChordCdf => {
            let beta = p.beta.unwrap_or_default();
            let setup =
                StableChordSetup { beta, a_grid: p.a.clone(), delta: p.delta, estimator: p.estimator.into(), quad };
            setup.validate()?;
            let rows = runner.try_map(p.replicates, |i| setup.sample(RandomStream::new(p.seed, i)))?;
            for point in theory::finish_chord_cdf(&setup, rows.iter())? {
                let inputs = json!({
                    "beta": beta, "a": point.a, "delta": p.delta, "replicates": p.replicates,
                    "seed": p.seed, "estimator": setup.estimator.name(), "clamped": point.clamped,
                });
                out.push(TheoryRecord::monte_carlo("stable_chord_cdf", inputs, &point.estimate));
            }
        }
        TheoryEval::StableFaceConstant => {
            let beta = p.beta.unwrap_or_default();
            let e = stable_face_estimate(beta, p.delta, p.replicates, p.seed, runner)?;
            let inputs = json!({"beta": beta, "delta": p.delta, "replicates": p.replicates, "seed": p.seed});
            out.push(TheoryRecord::monte_carlo("stable_face_constant", inputs, &e));
        }
        TheoryEval::Constants => {
            let c = TheoryConstants::brownian();
            out.push(TheoryRecord::exact("m_brownian", json!({}), c.m_brownian));
            out.push(TheoryRecord::exact("limit_edge", json!({}), c.limit_edge));
            out.push(TheoryRecord::exact("limit_area_mean", json!({}), c.limit_area_mean));
            out.push(TheoryRecord::exact("limit_psi1", json!({}), c.limit_psi1));
            if let Some(beta) = p.beta {
                let (cb, db) = TheoryConstants::stable(beta);
                out.push(TheoryRecord::exact("c_beta", json!({"beta": beta}), cb));
                out.push(TheoryRecord::exact("d_beta", json!({"beta": beta}), db));
            }
        }
    }
    Ok(out)
}

/// `2π(β-1)/Γ(2-β) E[min(T₁-Δ₁, Δ₁)]` over streams `(seed, 0..m)`.
pub fn stable_face_estimate(beta: f64, delta: f64, m: u64, seed: u64, runner: &Runner) -> RunResult<EstimateWithCI> {
    let samples = runner.try_map(m, |i| stable_face_sample(beta, delta, RandomStream::new(seed, i)))?;
    let w: Welford = samples.into_iter().collect();
    Ok(w.estimate()?.scaled(stable_face_prefactor(beta)))
}
