//! Calmness modulus, Lipschitz upper semicontinuity modulus and Hoffman constant
//! of the argmin mapping `b ↦ F^op(b)` under right-hand-side perturbations.
//!
//! All three reduce to end-set distances of hulls built from the rows:
//!
//! * `clm(b, x) = 1 / min_{D ∈ M_{c,b}} d_*(0, end conv{a_t, t ∈ T_b(x); -a_t, t ∈ D})`
//! * `Lipusc(b) = max_{x ∈ E^op(b)} clm(b, x)`
//! * `Hof = max_{D ∈ M_c, D ⊆ S ⊆ T} 1 / d_*(0, end conv{a_t, t ∈ S; -a_t, t ∈ D})`,
//!   attained at `x = 0`, `b_t = 0` on `S` and `1` off `S`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::argmin::{active_indices, extreme_optimal_points, is_optimal, IndexSet, ProblemInstance};
use crate::error::{Error, Result};
use crate::exact::{neg, ExtRational, Rational, Vector};
use crate::geometry::{end_set_distance_capped, VPolytope};
use crate::kkt::{minimal_kkt_at_with, minimal_kkt_family, MinimalKktFamily};
use crate::subsets::Combinations;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModulusKind {
    Calmness,
    LipschitzUsc,
    Hoffman,
}

impl ModulusKind {
    pub fn name(self) -> &'static str {
        match self {
            ModulusKind::Calmness => "calmness",
            ModulusKind::LipschitzUsc => "lipschitz_usc",
            ModulusKind::Hoffman => "hoffman",
        }
    }
}

/// What produced a modulus value; re-evaluating it gives the same value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Minimizing `D ∈ M_{c,b}`; `None` when the family is empty or every
    /// distance is infinite (value 0).
    Calmness { active: IndexSet, minimizer: Option<IndexSet> },
    LipschitzUsc { point: Vector, active: IndexSet, minimizer: Option<IndexSet> },
    Hoffman { d: IndexSet, s: IndexSet, parameter: Vector, point: Vector },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusReport {
    pub kind: ModulusKind,
    pub value: ExtRational,
    pub certificate: Certificate,
}

impl ModulusReport {
    /// The value as a finite rational. Every modulus computed here is finite.
    pub fn rational(&self) -> Rational {
        self.value.finite().cloned().expect("moduli of the argmin mapping are finite")
    }
}

/// Generator set `{a_t, t ∈ s} ∪ {-a_t, t ∈ d}`, deduplicated and sorted.
pub fn hull_generators(inst: &ProblemInstance, s: &IndexSet, d: &IndexSet) -> Vec<Vector> {
    let mut gens: Vec<Vector> = s.indices().iter().map(|&t| inst.row(t).to_vec()).collect();
    gens.extend(d.indices().iter().map(|&t| neg(inst.row(t))));
    gens.sort();
    gens.dedup();
    gens
}

/// `d_*(0, end conv(generators))`; `conv ∅ = ∅` has empty end set, distance `+∞`.
pub fn generator_distance(inst: &ProblemInstance, generators: Vec<Vector>) -> Result<ExtRational> {
    if generators.is_empty() {
        return Ok(ExtRational::Infinity);
    }
    let hull = VPolytope::new(inst.n(), generators)?;
    end_set_distance_capped(&hull, inst.norm(), inst.limits().max_generators)
}

/// Memo of end-set distances keyed by the canonical generator set.
#[derive(Debug, Default)]
pub struct DistanceCache {
    table: HashMap<Vec<Vector>, ExtRational>,
}

impl DistanceCache {
    pub fn distance(&mut self, inst: &ProblemInstance, generators: Vec<Vector>) -> Result<ExtRational> {
        if let Some(v) = self.table.get(&generators) {
            return Ok(v.clone());
        }
        let v = generator_distance(inst, generators.clone())?;
        self.table.insert(generators, v.clone());
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

/// Calmness modulus at `(b, x)` with `x ∈ F^op(b)`.
pub fn calmness_modulus(inst: &ProblemInstance, b: &[Rational], x: &[Rational]) -> Result<ModulusReport> {
    let global = minimal_kkt_family(inst)?;
    calmness_with(inst, &global, b, x, &mut DistanceCache::default())
}

pub(crate) fn calmness_with(
    inst: &ProblemInstance,
    global: &MinimalKktFamily,
    b: &[Rational],
    x: &[Rational],
    cache: &mut DistanceCache,
) -> Result<ModulusReport> {
    let local = minimal_kkt_at_with(inst, global, b)?;
    inst.check_point(x)?;
    if !is_optimal(inst, b, x)? {
        return Err(Error::PointNotOptimal);
    }
    let active = active_indices(inst, b, x)?;
    let (minimizer, distance) = min_distance_over(inst, &local, &active, cache)?;
    Ok(ModulusReport {
        kind: ModulusKind::Calmness,
        value: distance.recip()?,
        certificate: Certificate::Calmness { active, minimizer },
    })
}

fn min_distance_over(
    inst: &ProblemInstance,
    family: &MinimalKktFamily,
    active: &IndexSet,
    cache: &mut DistanceCache,
) -> Result<(Option<IndexSet>, ExtRational)> {
    let mut best: Option<(IndexSet, ExtRational)> = None;
    for d in family.iter() {
        let dist = cache.distance(inst, hull_generators(inst, active, d))?;
        if best.as_ref().map_or(true, |(_, b)| dist < *b) {
            best = Some((d.clone(), dist));
        }
    }
    Ok(match best {
        Some((d, dist)) if dist.is_finite() => (Some(d), dist),
        _ => (None, ExtRational::Infinity),
    })
}

/// Lipschitz upper semicontinuity modulus at `b`: the largest calmness modulus
/// over the extreme optimal points in the row space.
pub fn lipschitz_usc_modulus(inst: &ProblemInstance, b: &[Rational]) -> Result<ModulusReport> {
    let global = minimal_kkt_family(inst)?;
    lipschitz_usc_with(inst, &global, b, &mut DistanceCache::default())
}

pub(crate) fn lipschitz_usc_with(
    inst: &ProblemInstance,
    global: &MinimalKktFamily,
    b: &[Rational],
    cache: &mut DistanceCache,
) -> Result<ModulusReport> {
    let local = minimal_kkt_at_with(inst, global, b)?;
    let points = extreme_optimal_points(inst, b)?;
    let mut best: Option<ModulusReport> = None;
    for x in points {
        let active = active_indices(inst, b, &x)?;
        let (minimizer, distance) = min_distance_over(inst, &local, &active, cache)?;
        let value = distance.recip()?;
        if best.as_ref().map_or(true, |r| value > r.value) {
            best = Some(ModulusReport {
                kind: ModulusKind::LipschitzUsc,
                value,
                certificate: Certificate::LipschitzUsc { point: x, active, minimizer },
            });
        }
    }
    best.ok_or(Error::EmptyOptimalSet)
}

/// One term of the Hoffman maximum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoffmanTerm {
    pub d: IndexSet,
    pub s: IndexSet,
    pub distance: ExtRational,
    pub value: ExtRational,
}

/// Every `(D, S)` term with `D ∈ M_c` and `D ⊆ S ⊆ T`, in (D, S) order.
pub fn hoffman_terms(inst: &ProblemInstance) -> Result<Vec<HoffmanTerm>> {
    let family = minimal_kkt_family(inst)?;
    let mut cache = DistanceCache::default();
    let mut terms = Vec::new();
    for d in family.iter() {
        let rest: Vec<usize> = (0..inst.m()).filter(|&t| !d.contains(t)).collect();
        let mut supersets: Vec<IndexSet> = (0..=rest.len())
            .flat_map(|k| Combinations::new(rest.len(), k))
            .map(|pick| d.union(&IndexSet::new(pick.into_iter().map(|i| rest[i]).collect())))
            .collect();
        supersets.sort();
        for s in supersets {
            let distance = cache.distance(inst, hull_generators(inst, &s, d))?;
            let value = distance.recip()?;
            terms.push(HoffmanTerm { d: d.clone(), s, distance, value });
        }
    }
    Ok(terms)
}

/// Witness parameter `b_{D,S}`: `0` on `S`, `1` off `S`.
pub fn witness_parameter(inst: &ProblemInstance, s: &IndexSet) -> Vector {
    (0..inst.m())
        .map(|t| if s.contains(t) { Rational::zero() } else { Rational::from_integer(1.into()) })
        .collect()
}

/// Global Hoffman constant of the argmin mapping with its `(D*, S*)` witness.
/// Ties keep the smallest `(D, S)` in (cardinality, lexicographic) order.
pub fn hoffman_constant(inst: &ProblemInstance) -> Result<ModulusReport> {
    inst.require_dual_feasible()?;
    inst.limits().check_constraints(inst.m())?;
    let terms = hoffman_terms(inst)?;
    let best = terms
        .into_iter()
        .fold(None::<HoffmanTerm>, |best, t| match best {
            Some(b) if t.value <= b.value => Some(b),
            _ => Some(t),
        })
        .expect("the family of a dual-feasible instance is nonempty");
    let parameter = witness_parameter(inst, &best.s);
    Ok(ModulusReport {
        kind: ModulusKind::Hoffman,
        value: best.value,
        certificate: Certificate::Hoffman {
            d: best.d,
            s: best.s,
            parameter,
            point: vec![Rational::zero(); inst.n()],
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonicalHoffman {
    Zero,
    Infinite,
}

/// Hoffman constant under joint perturbations of `(c, b)`: zero exactly when
/// every row vanishes, infinite otherwise.
pub fn canonical_hoffman(inst: &ProblemInstance) -> CanonicalHoffman {
    if inst.rows().is_zero() {
        CanonicalHoffman::Zero
    } else {
        CanonicalHoffman::Infinite
    }
}
