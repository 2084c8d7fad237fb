//! Behaviour of the argmin mapping along a parameter segment
//! `b_μ = b̄ + μ(b - b̄)`, `μ ∈ [0, 1]`.
//!
//! For each minimal KKT subset `D` the set `{μ : S_D(b_μ) ≠ ∅}` is a closed
//! interval whose endpoints come out of two exact LPs in `(x, μ)`. The family
//! `M_{c,b_μ}` is then piecewise constant, changing only at break steps, and
//! every piece can be served by a single `S_D`.

use num_traits::{One, Zero};

use crate::argmin::{optimal_set, IndexSet, ProblemInstance};
use crate::error::{Error, Result};
use crate::exact::{add, norm_inf, scale, sub, ExtRational, Matrix, Rational, Vector};
use crate::geometry::distance_to_polyhedron;
use crate::kkt::{minimal_kkt_family, MinimalKktFamily};
use crate::lp::{self, LpOutcome, LpProblem};
use crate::moduli::{lipschitz_usc_with, DistanceCache};

/// Closed subinterval `[lower, upper]` of `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lower: Rational,
    pub upper: Rational,
}

impl Interval {
    pub fn contains(&self, mu: &Rational) -> bool {
        self.lower <= *mu && *mu <= self.upper
    }

    pub fn contains_interval(&self, lower: &Rational, upper: &Rational) -> bool {
        self.lower <= *lower && *upper <= self.upper
    }
}

/// One piece `[start, end]` of a connecting subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub start: Rational,
    pub end: Rational,
    /// `M_{c,b_μ}` on the open piece.
    pub family: Vec<IndexSet>,
    /// Chosen member serving the whole closed piece.
    pub chosen: IndexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentAnalysis {
    pub from: Vector,
    pub to: Vector,
    /// Domain interval per member of `M_c`, in family order; `None` when empty.
    pub intervals: Vec<(IndexSet, Option<Interval>)>,
    pub break_steps: Vec<Rational>,
    pub pieces: Vec<Piece>,
}

pub fn point_on_segment(from: &[Rational], to: &[Rational], mu: &Rational) -> Vector {
    add(from, &scale(&sub(to, from), mu))
}

fn check_endpoints(inst: &ProblemInstance, from: &[Rational], to: &[Rational]) -> Result<()> {
    inst.check_parameter(from)?;
    inst.check_parameter(to)?;
    if !inst.in_domain(from)? || !inst.in_domain(to)? {
        return Err(Error::ParameterOutsideDomain);
    }
    Ok(())
}

/// `{μ ∈ [0, 1] : S_D(b_μ) ≠ ∅}` as an exact closed interval, or `None`.
pub fn domain_interval(inst: &ProblemInstance, d: &IndexSet, from: &[Rational], to: &[Rational]) -> Result<Option<Interval>> {
    check_endpoints(inst, from, to)?;
    domain_interval_unchecked(inst, d, from, to)
}

fn domain_interval_unchecked(inst: &ProblemInstance, d: &IndexSet, from: &[Rational], to: &[Rational]) -> Result<Option<Interval>> {
    let n = inst.n();
    let dir = sub(to, from);
    // variables (x, μ): a_t'x - μ dir_t (<= | =) from_t, 0 <= μ <= 1
    let row = |t: usize| {
        let mut r = inst.row(t).to_vec();
        r.push(-dir[t].clone());
        r
    };
    let mut ineq = Vec::new();
    let mut ineq_rhs = Vec::new();
    let mut eq = Vec::new();
    let mut eq_rhs = Vec::new();
    for t in 0..inst.m() {
        if d.contains(t) {
            eq.push(row(t));
            eq_rhs.push(from[t].clone());
        } else {
            ineq.push(row(t));
            ineq_rhs.push(from[t].clone());
        }
    }
    let mut mu_row = vec![Rational::zero(); n + 1];
    mu_row[n] = Rational::one();
    ineq.push(mu_row.clone());
    ineq_rhs.push(Rational::one());
    mu_row[n] = -Rational::one();
    ineq.push(mu_row);
    ineq_rhs.push(Rational::zero());

    let mut objective = vec![Rational::zero(); n + 1];
    objective[n] = Rational::one();
    let mut problem = LpProblem::with_constraints(
        objective,
        Matrix::from_rows(n + 1, &ineq)?,
        ineq_rhs,
        Matrix::from_rows(n + 1, &eq)?,
        eq_rhs,
    )?;
    let lower = match lp::solve(&problem)? {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Infeasible => return Ok(None),
        LpOutcome::Unbounded => unreachable!("μ is boxed"),
    };
    problem.objective[n] = -Rational::one();
    let upper = match lp::solve(&problem)? {
        LpOutcome::Optimal { value, .. } => -value,
        _ => unreachable!("feasible and boxed"),
    };
    Ok(Some(Interval { lower, upper }))
}

fn family_at(intervals: &[(IndexSet, Option<Interval>)], mu: &Rational) -> Vec<IndexSet> {
    intervals
        .iter()
        .filter(|(_, iv)| iv.as_ref().is_some_and(|iv| iv.contains(mu)))
        .map(|(d, _)| d.clone())
        .collect()
}

fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / Rational::from_integer(2.into())
}

fn intervals_for(
    inst: &ProblemInstance,
    global: &MinimalKktFamily,
    from: &[Rational],
    to: &[Rational],
) -> Result<Vec<(IndexSet, Option<Interval>)>> {
    global
        .iter()
        .map(|d| Ok((d.clone(), domain_interval_unchecked(inst, d, from, to)?)))
        .collect()
}

/// Break steps from interval data: interior endpoints at which the family is
/// strictly larger than on an adjacent open piece.
fn break_steps_from(intervals: &[(IndexSet, Option<Interval>)]) -> Vec<Rational> {
    let zero = Rational::zero();
    let one = Rational::one();
    let mut candidates: Vec<Rational> = intervals
        .iter()
        .filter_map(|(_, iv)| iv.as_ref())
        .flat_map(|iv| [iv.lower.clone(), iv.upper.clone()])
        .filter(|mu| *mu > zero && *mu < one)
        .collect();
    candidates.sort();
    candidates.dedup();
    let mut steps = Vec::new();
    for (k, mu) in candidates.iter().enumerate() {
        let left = if k == 0 { &zero } else { &candidates[k - 1] };
        let right = candidates.get(k + 1).unwrap_or(&one);
        let here = family_at(intervals, mu);
        let left_family = family_at(intervals, &midpoint(left, mu));
        let right_family = family_at(intervals, &midpoint(mu, right));
        if here != left_family || here != right_family {
            steps.push(mu.clone());
        }
    }
    steps
}

/// Sorted break steps in `(0, 1)`; empty when `from == to`.
pub fn break_steps(inst: &ProblemInstance, from: &[Rational], to: &[Rational]) -> Result<Vec<Rational>> {
    check_endpoints(inst, from, to)?;
    if from == to {
        return Ok(Vec::new());
    }
    let global = minimal_kkt_family(inst)?;
    Ok(break_steps_from(&intervals_for(inst, &global, from, to)?))
}

/// Break steps, piece families and one chosen `D_k` per piece. The chosen member
/// is the smallest in (cardinality, lexicographic) order and is verified to
/// cover its closed piece.
pub fn connecting_subdivision(inst: &ProblemInstance, from: &[Rational], to: &[Rational]) -> Result<SegmentAnalysis> {
    check_endpoints(inst, from, to)?;
    let global = minimal_kkt_family(inst)?;
    let intervals = intervals_for(inst, &global, from, to)?;
    let steps = if from == to { Vec::new() } else { break_steps_from(&intervals) };
    let mut cuts = vec![Rational::zero()];
    cuts.extend(steps.iter().cloned());
    cuts.push(Rational::one());
    let mut pieces = Vec::new();
    for w in cuts.windows(2) {
        let family = family_at(&intervals, &midpoint(&w[0], &w[1]));
        let chosen = family.first().cloned().ok_or(Error::ParameterOutsideDomain)?;
        let covers = intervals
            .iter()
            .find(|(d, _)| *d == chosen)
            .and_then(|(_, iv)| iv.as_ref())
            .is_some_and(|iv| iv.contains_interval(&w[0], &w[1]));
        assert!(covers, "piece [{}, {}] is not covered by {}", w[0], w[1], chosen);
        pieces.push(Piece { start: w[0].clone(), end: w[1].clone(), family, chosen });
    }
    Ok(SegmentAnalysis { from: from.to_vec(), to: to.to_vec(), intervals, break_steps: steps, pieces })
}

/// Directional error bound along a segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentBound {
    /// `d(x, F^op(b̄)) / ‖b - b̄‖_∞`
    pub ratio: Rational,
    /// `μ_k` values at which the Lipschitz-usc modulus was evaluated.
    pub steps: Vec<Rational>,
    /// Lipschitz-usc modulus at each `b̄ + μ_k(b - b̄)`.
    pub moduli: Vec<Rational>,
    pub bound: Rational,
    pub holds: bool,
}

/// Checks `d(x, F^op(b̄)) / ‖b - b̄‖ <= max_k Lipusc(b̄ + μ_k(b - b̄))` for
/// `x ∈ F^op(b)`, with `μ_k` ranging over `0` and the break steps.
pub fn segment_bound_check(inst: &ProblemInstance, from: &[Rational], to: &[Rational], x: &[Rational]) -> Result<SegmentBound> {
    check_endpoints(inst, from, to)?;
    if from == to {
        return Err(Error::InvalidArgument("segment endpoints must differ".into()));
    }
    inst.check_point(x)?;
    if !crate::argmin::is_optimal(inst, to, x)? {
        return Err(Error::PointNotOptimal);
    }
    let global = minimal_kkt_family(inst)?;
    let intervals = intervals_for(inst, &global, from, to)?;
    let mut steps = vec![Rational::zero()];
    steps.extend(break_steps_from(&intervals));

    let nominal = optimal_set(inst, from)?;
    let distance = match distance_to_polyhedron(x, &nominal, inst.norm())?.0 {
        ExtRational::Finite(v) => v,
        ExtRational::Infinity => unreachable!("from lies in the domain"),
    };
    let ratio = distance / norm_inf(&sub(to, from));

    let mut cache = DistanceCache::default();
    let moduli = steps
        .iter()
        .map(|mu| lipschitz_usc_with(inst, &global, &point_on_segment(from, to, mu), &mut cache).map(|r| r.rational()))
        .collect::<Result<Vec<_>>>()?;
    let bound = moduli.iter().max().cloned().expect("at least μ = 0");
    let holds = ratio <= bound;
    Ok(SegmentBound { ratio, steps, moduli, bound, holds })
}
