//! Seeded randomized certification of the computed constants.
//!
//! Parameters are drawn from a rational grid so every ratio is computed exactly;
//! randomness only decides where to look. Each sample index has its own stream
//! (see [`Lcg::for_index`]), so results do not depend on evaluation order and a
//! longer run extends a shorter one with the same seed.

use num_traits::{One, Zero};

use crate::argmin::{extreme_optimal_points, extreme_points_of, optimal_set, ProblemInstance};
use crate::error::{Error, Result};
use crate::exact::{add, norm_inf, scale, sub, ExtRational, Rational, Vector};
use crate::geometry::{distance_to_polyhedron, HPolyhedron};
use crate::kkt::minimal_kkt_family;
use crate::moduli::{calmness_with, hoffman_constant, hoffman_terms, lipschitz_usc_with, witness_parameter, DistanceCache};

/// 64-bit linear congruential generator with Knuth's MMIX constants:
/// `state <- state * 6364136223846793005 + 1442695040888963407 (mod 2^64)`,
/// output = the high 32 bits of the new state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;
    /// Stream separation constant (2^64 / golden ratio).
    pub const STREAM_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    /// Independent stream for sample `index`: seeded with
    /// `seed ^ (index + 1) * STREAM_STRIDE` and advanced twice.
    pub fn for_index(seed: u64, index: u64) -> Self {
        let mut lcg = Lcg::new(seed ^ index.wrapping_add(1).wrapping_mul(Self::STREAM_STRIDE));
        lcg.next_u32();
        lcg.next_u32();
        lcg
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self.state.wrapping_mul(Self::MULTIPLIER).wrapping_add(Self::INCREMENT);
        (self.state >> 32) as u32
    }

    /// Uniform integer in `lo..=hi` (modulo reduction).
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + (u64::from(self.next_u32()) % span) as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    pub samples: usize,
    /// Sampled coordinates are `radius * k / grid_denominator` for integer `k`.
    pub grid_denominator: u32,
    pub radius: Rational,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { seed: 7, samples: 1000, grid_denominator: 4, radius: Rational::from_integer(2.into()) }
    }
}

impl SampleConfig {
    pub fn new(seed: u64, samples: usize) -> Self {
        SampleConfig { seed, samples, ..SampleConfig::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 || self.grid_denominator == 0 || self.radius <= Rational::zero() {
            return Err(Error::InvalidArgument(
                "samples and grid denominator must be positive and the radius strictly positive".into(),
            ));
        }
        Ok(())
    }

    fn grid_value(&self, k: i64) -> Rational {
        &self.radius * Rational::new(k.into(), i64::from(self.grid_denominator).into())
    }
}

/// `b = A x0 + s`, which is in `dom F` by construction.
pub fn domain_point_from(inst: &ProblemInstance, x0: &[Rational], slack: &[Rational]) -> Result<Vector> {
    inst.check_parameter(slack)?;
    Ok(add(&inst.rows().mul_vec(x0)?, slack))
}

/// Parameter sample `index`: `x0` from the grid in `[-radius, radius]^n`, slack
/// from the grid in `[0, radius]^m`.
pub fn sample_domain_point(inst: &ProblemInstance, cfg: &SampleConfig, index: u64) -> Vector {
    let mut rng = Lcg::for_index(cfg.seed, index);
    let q = i64::from(cfg.grid_denominator);
    let x0: Vector = (0..inst.n()).map(|_| cfg.grid_value(rng.range(-q, q))).collect();
    let slack: Vector = (0..inst.m()).map(|_| cfg.grid_value(rng.range(0, q))).collect();
    domain_point_from(inst, &x0, &slack).expect("dimensions agree")
}

/// A pair `(b, b̃)` with `x ∈ E^op(b)` and its exact ratio `d(x, F^op(b̃)) / ‖b - b̃‖_∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioSample {
    pub b: Vector,
    pub b_tilde: Vector,
    pub x: Vector,
    pub ratio: Rational,
}

/// A parameter with its optimal set and extreme optimal points.
struct Evaluated {
    b: Vector,
    optimal: HPolyhedron,
    extreme: Vec<Vector>,
}

impl Evaluated {
    fn new(inst: &ProblemInstance, b: Vector) -> Result<Self> {
        let optimal = optimal_set(inst, &b)?;
        let extreme = extreme_points_of(inst, optimal.clone())?;
        Ok(Evaluated { b, optimal, extreme })
    }
}

fn ratio_between(inst: &ProblemInstance, from: &Evaluated, to: &Evaluated) -> Result<Option<RatioSample>> {
    let gap = norm_inf(&sub(&from.b, &to.b));
    let mut best: Option<RatioSample> = None;
    for x in &from.extreme {
        let ratio = if gap.is_zero() {
            Rational::zero()
        } else {
            match distance_to_polyhedron(x, &to.optimal, inst.norm())?.0 {
                ExtRational::Finite(d) => d / &gap,
                ExtRational::Infinity => return Err(Error::ParameterOutsideDomain),
            }
        };
        if best.as_ref().map_or(true, |s| ratio > s.ratio) {
            best = Some(RatioSample { b: from.b.clone(), b_tilde: to.b.clone(), x: x.clone(), ratio });
        }
    }
    Ok(best)
}

/// Largest ratio over `x ∈ E^op(b)`, with `0/0 := 0`.
pub fn pair_ratio(inst: &ProblemInstance, b: &[Rational], b_tilde: &[Rational]) -> Result<Option<RatioSample>> {
    ratio_between(inst, &Evaluated::new(inst, b.to_vec())?, &Evaluated::new(inst, b_tilde.to_vec())?)
}

fn keep_max(best: &mut Option<RatioSample>, candidate: Option<RatioSample>) {
    if let Some(c) = candidate {
        if best.as_ref().map_or(true, |b| c.ratio > b.ratio) {
            *best = Some(c);
        }
    }
}

/// Perturbation directions around a parameter: all nonzero sign patterns in
/// `{-1, 0, 1}^m` for `m <= 6`, otherwise the patterns with at most two nonzeros.
pub fn probe_directions(m: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if m <= 6 {
        let total = 3usize.pow(m as u32);
        for code in 1..total {
            let mut c = code;
            let dir: Vec<i64> = (0..m)
                .map(|_| {
                    let digit = (c % 3) as i64 - 1;
                    c /= 3;
                    digit
                })
                .collect();
            if dir.iter().any(|&v| v != 0) {
                out.push(dir);
            }
        }
    } else {
        for s in 0..m {
            for sign in [1, -1] {
                let mut d = vec![0; m];
                d[s] = sign;
                out.push(d.clone());
                for t in s + 1..m {
                    for sign2 in [1, -1] {
                        let mut e = d.clone();
                        e[t] = sign2;
                        out.push(e);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Step lengths `{1/2, 1/4, 1/8} * radius`.
pub fn probe_scales(cfg: &SampleConfig) -> Vec<Rational> {
    [2, 4, 8].iter().map(|&k| &cfg.radius / Rational::from_integer(k.into())).collect()
}

fn probe_parameters(inst: &ProblemInstance, center: &[Rational], cfg: &SampleConfig) -> Result<Vec<Vector>> {
    let mut out = Vec::new();
    for dir in probe_directions(inst.m()) {
        let dir: Vector = dir.into_iter().map(|v| Rational::from_integer(v.into())).collect();
        for eps in probe_scales(cfg) {
            let b = add(center, &scale(&dir, &eps));
            if inst.in_domain(&b)? {
                out.push(b);
            }
        }
    }
    Ok(out)
}

/// Empirical lower bound on the Hoffman constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalBound {
    pub lower_bound: Rational,
    pub best: Option<RatioSample>,
    /// Best ratio among the random pairs alone.
    pub random_best: Rational,
    /// Best ratio among the witness-guided probes alone.
    pub probe_best: Rational,
    pub pairs_evaluated: usize,
}

/// Maximum exact ratio over random pairs `(b_{2i}, b_{2i+1})` (both orders) and
/// over probes `b* ± ε σ` around the Hoffman witness `b*` (both orders).
pub fn empirical_hoffman_lower_bound(inst: &ProblemInstance, cfg: &SampleConfig) -> Result<EmpiricalBound> {
    inst.require_dual_feasible()?;
    cfg.validate()?;
    let mut random: Option<RatioSample> = None;
    let mut pairs = 0;
    for i in 0..cfg.samples as u64 {
        let b = Evaluated::new(inst, sample_domain_point(inst, cfg, 2 * i))?;
        let b_tilde = Evaluated::new(inst, sample_domain_point(inst, cfg, 2 * i + 1))?;
        keep_max(&mut random, ratio_between(inst, &b, &b_tilde)?);
        keep_max(&mut random, ratio_between(inst, &b_tilde, &b)?);
        pairs += 2;
    }
    let witness = match hoffman_constant(inst)?.certificate {
        crate::moduli::Certificate::Hoffman { parameter, .. } => parameter,
        _ => unreachable!(),
    };
    let mut probes: Option<RatioSample> = None;
    let center = Evaluated::new(inst, witness.clone())?;
    for b in probe_parameters(inst, &witness, cfg)? {
        let b = Evaluated::new(inst, b)?;
        keep_max(&mut probes, ratio_between(inst, &b, &center)?);
        keep_max(&mut probes, ratio_between(inst, &center, &b)?);
        pairs += 2;
    }
    let ratio_of = |s: &Option<RatioSample>| s.as_ref().map_or_else(Rational::zero, |s| s.ratio.clone());
    let (random_best, probe_best) = (ratio_of(&random), ratio_of(&probes));
    let mut best = random;
    keep_max(&mut best, probes);
    Ok(EmpiricalBound { lower_bound: ratio_of(&best), best, random_best, probe_best, pairs_evaluated: pairs })
}

/// Sampling estimate (a lower bound, never exact) of
/// `sup_{b, x ∈ F^op(b)} d(x, F^op(b̄)) / ‖b - b̄‖_∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointwiseEstimate {
    pub estimate: Rational,
    pub best: Option<RatioSample>,
    pub pairs_evaluated: usize,
}

pub fn empirical_hoffman_modulus_at(inst: &ProblemInstance, nominal: &[Rational], cfg: &SampleConfig) -> Result<PointwiseEstimate> {
    inst.require_dual_feasible()?;
    cfg.validate()?;
    inst.check_parameter(nominal)?;
    if !inst.in_domain(nominal)? {
        return Err(Error::ParameterOutsideDomain);
    }
    let mut best = None;
    let mut pairs = 0;
    let center = Evaluated::new(inst, nominal.to_vec())?;
    for i in 0..cfg.samples as u64 {
        let b = Evaluated::new(inst, sample_domain_point(inst, cfg, i))?;
        keep_max(&mut best, ratio_between(inst, &b, &center)?);
        pairs += 1;
    }
    for b in probe_parameters(inst, nominal, cfg)? {
        keep_max(&mut best, ratio_between(inst, &Evaluated::new(inst, b)?, &center)?);
        pairs += 1;
    }
    let estimate = best.as_ref().map_or_else(Rational::zero, |s| s.ratio.clone());
    Ok(PointwiseEstimate { estimate, best, pairs_evaluated: pairs })
}

/// One named check in a [`ValidationReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: &'static str,
    pub observed: Rational,
    pub bound: Rational,
    pub passed: bool,
    pub evaluations: usize,
    pub extremal: Option<RatioSample>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub hoffman: Rational,
    pub checks: Vec<CheckRecord>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `clm(b, x) <= Lipusc(b) <= Hof` on sampled `b` and all `x ∈ E^op(b)`, and
/// `max_{(D,S)} Lipusc(b_{D,S}) = Hof` over the finite witness set.
pub fn check_equality_chain(inst: &ProblemInstance, cfg: &SampleConfig) -> Result<ValidationReport> {
    inst.require_dual_feasible()?;
    cfg.validate()?;
    let hof = hoffman_constant(inst)?.rational();
    let global = minimal_kkt_family(inst)?;
    let mut cache = DistanceCache::default();

    let mut chain_ok = true;
    let mut max_clm = Rational::zero();
    let mut max_lip = Rational::zero();
    let mut evaluations = 0;
    let mut first_failure = String::new();
    for i in 0..cfg.samples as u64 {
        let b = sample_domain_point(inst, cfg, i);
        let lip = lipschitz_usc_with(inst, &global, &b, &mut cache)?.rational();
        for x in extreme_optimal_points(inst, &b)? {
            let clm = calmness_with(inst, &global, &b, &x, &mut cache)?.rational();
            evaluations += 1;
            if !(clm <= lip && lip <= hof) && chain_ok {
                chain_ok = false;
                first_failure = format!("sample {i}: clm {clm}, Lipusc {lip}, Hof {hof}");
            }
            max_clm = max_clm.max(clm);
        }
        max_lip = max_lip.max(lip);
    }
    let chain = CheckRecord {
        name: "chain",
        observed: max_lip.clone(),
        bound: hof.clone(),
        passed: chain_ok,
        evaluations,
        extremal: None,
        detail: if chain_ok {
            format!("max sampled clm {max_clm}, max sampled Lipusc {max_lip}")
        } else {
            first_failure
        },
    };

    let hof_witness = match hoffman_constant(inst)?.certificate {
        crate::moduli::Certificate::Hoffman { s, .. } => s,
        _ => unreachable!(),
    };
    let mut witnesses: Vec<_> = hoffman_terms(inst)?.into_iter().map(|t| t.s).collect();
    witnesses.sort();
    witnesses.dedup();
    // the Hoffman witness goes first so ties report it
    witnesses.retain(|s| *s != hof_witness);
    witnesses.insert(0, hof_witness);
    let mut best = Rational::zero();
    let mut best_b = None;
    for s in &witnesses {
        let b = witness_parameter(inst, s);
        let lip = lipschitz_usc_with(inst, &global, &b, &mut cache)?.rational();
        if best_b.is_none() || lip > best {
            best = lip;
            best_b = Some(b);
        }
    }
    let attained = best == hof;
    let attainment = CheckRecord {
        name: "attainment",
        observed: best,
        bound: hof.clone(),
        passed: attained,
        evaluations: witnesses.len(),
        extremal: None,
        detail: format!(
            "max Lipusc over {} witness parameters, attained at b = ({})",
            witnesses.len(),
            best_b.map(|b| crate::exact::format_vector(&b).join(",")).unwrap_or_default()
        ),
    };
    Ok(ValidationReport { hoffman: hof, checks: vec![chain, attainment] })
}

/// Soundness of the empirical ratios plus the equality chain.
///
/// * `soundness`: every sampled ratio is at most `Hof` (exact comparison);
/// * `probe_attainment`: the best witness-guided probe ratio reaches
///   `(1 - 10^-3) Hof`;
/// * `chain` and `attainment` from [`check_equality_chain`].
pub fn validate(inst: &ProblemInstance, cfg: &SampleConfig) -> Result<ValidationReport> {
    let mut report = check_equality_chain(inst, cfg)?;
    let hof = report.hoffman.clone();
    let bound = empirical_hoffman_lower_bound(inst, cfg)?;
    let soundness = CheckRecord {
        name: "soundness",
        observed: bound.lower_bound.clone(),
        bound: hof.clone(),
        passed: bound.lower_bound <= hof,
        evaluations: bound.pairs_evaluated,
        extremal: bound.best.clone(),
        detail: format!("random pairs best {}, witness probes best {}", bound.random_best, bound.probe_best),
    };
    let threshold = &hof * (Rational::one() - Rational::new(1.into(), 1000.into()));
    let probe = CheckRecord {
        name: "probe_attainment",
        observed: bound.probe_best.clone(),
        bound: threshold.clone(),
        passed: bound.probe_best >= threshold,
        evaluations: bound.pairs_evaluated,
        extremal: None,
        detail: "witness-guided probes against (1 - 1/1000) * Hof".into(),
    };
    report.checks.insert(0, probe);
    report.checks.insert(0, soundness);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio, vector};
    use crate::geometry::Norm;
    use crate::instances;

    #[test]
    fn lcg_reference_values() {
        // state after one step from seed 0 is the increment itself
        let mut g = Lcg::new(0);
        assert_eq!(g.next_u32(), (Lcg::INCREMENT >> 32) as u32);
        let mut g = Lcg::new(1);
        let expected = Lcg::MULTIPLIER.wrapping_add(Lcg::INCREMENT);
        assert_eq!(g.next_u32(), (expected >> 32) as u32);
    }

    #[test]
    fn domain_points() {
        let c = instances::instance_c();
        let b = domain_point_from(&c, &vector(&[0, 0]), &vector(&[0, 1, 0])).unwrap();
        assert_eq!(b, vector(&[0, 1, 0]));
        let cfg = SampleConfig::new(11, 10);
        let first: Vec<_> = (0..10).map(|i| sample_domain_point(&c, &cfg, i)).collect();
        let second: Vec<_> = (0..10).map(|i| sample_domain_point(&c, &cfg, i)).collect();
        assert_eq!(first, second);
        assert!(first.iter().all(|b| c.in_domain(b).unwrap()));
        // zero slack places x0 on every constraint boundary
        let x0 = vector(&[1, -2]);
        let b = domain_point_from(&c, &x0, &vector(&[0, 0, 0])).unwrap();
        assert_eq!(crate::argmin::active_indices(&c, &b, &x0).unwrap().len(), 3);
    }

    #[test]
    fn instance_b_bound() {
        let b = instances::instance_b();
        let r = empirical_hoffman_lower_bound(&b, &SampleConfig::new(3, 200)).unwrap();
        assert!(r.lower_bound <= ratio(1, 2));
        assert_eq!(r.probe_best, ratio(1, 2));
    }

    #[test]
    fn instance_c_probe_reaches_two() {
        let c = instances::instance_c();
        let r = empirical_hoffman_lower_bound(&c, &SampleConfig::new(5, 100)).unwrap();
        assert_eq!(r.lower_bound, int(2));
        let hand = pair_ratio(&c, &vector(&[1, 1, -1]), &vector(&[0, 1, 0])).unwrap().unwrap();
        assert_eq!(hand.ratio, int(2));
    }

    #[test]
    fn zero_over_zero_convention() {
        let a = instances::instance_a();
        let r = pair_ratio(&a, &vector(&[0, 1]), &vector(&[0, 1])).unwrap().unwrap();
        assert_eq!(r.ratio, int(0));
    }

    #[test]
    fn pointwise_estimate() {
        let c = instances::instance_c();
        let cfg = SampleConfig::new(9, 100);
        let e = empirical_hoffman_modulus_at(&c, &vector(&[0, 1, 0]), &cfg).unwrap();
        assert!(e.estimate <= int(2));
        assert!(e.estimate >= int(2), "probe (1,1,-1) realises 2");
        assert_eq!(e, empirical_hoffman_modulus_at(&c, &vector(&[0, 1, 0]), &cfg).unwrap());

        let zero = ProblemInstance::from_i64(&[&[0, 0]], &[0, 0], Norm::LInf).unwrap();
        assert_eq!(empirical_hoffman_modulus_at(&zero, &vector(&[1]), &cfg).unwrap().estimate, int(0));
    }

    #[test]
    fn chain_on_instances() {
        let cfg = SampleConfig::new(7, 40);
        let c = check_equality_chain(&instances::instance_c(), &cfg).unwrap();
        assert!(c.passed(), "{c:?}");
        let attainment = c.check("attainment").unwrap();
        assert_eq!(attainment.observed, int(2));
        assert!(attainment.detail.ends_with("b = (0,1,0)"), "{}", attainment.detail);
        let a = check_equality_chain(&instances::instance_a(), &cfg).unwrap();
        assert_eq!(a.check("attainment").unwrap().observed, int(1));
        let zero = ProblemInstance::from_i64(&[&[0, 0], &[0, 0]], &[0, 0], Norm::LInf).unwrap();
        let z = validate(&zero, &cfg).unwrap();
        assert_eq!(z.hoffman, int(0));
        assert!(z.checks.iter().all(|c| c.observed.is_zero()));
    }

    #[test]
    fn bad_config_is_rejected() {
        let cfg = SampleConfig { samples: 0, ..SampleConfig::default() };
        assert!(matches!(validate(&instances::instance_a(), &cfg), Err(Error::InvalidArgument(_))));
    }
}
