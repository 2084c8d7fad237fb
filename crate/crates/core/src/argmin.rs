//! The parametric LP `min c'x  s.t.  a_t'x <= b_t, t ∈ T` and the sets it
//! induces for a right-hand side `b`: the feasible set, the optimal set, the
//! active index set of a point and the extreme optimal points within the row
//! space.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{dot, neg, Matrix, Rational, Vector};
use crate::geometry::{vertices, HPolyhedron, Norm, Vertices, DEFAULT_GENERATOR_CAP};
use crate::lp::{self, LpOutcome};

/// Default cap on the number of constraints for exponential enumerations.
pub const DEFAULT_CONSTRAINT_CAP: usize = 24;

/// Caps on the exponential enumerations (minimal KKT subsets, `(D, S)` sweep,
/// facet enumeration).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_constraints: usize,
    pub max_generators: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits::with_constraint_cap(DEFAULT_CONSTRAINT_CAP)
    }
}

impl Limits {
    /// End-set hulls of an instance have at most `2m` distinct generators, so the
    /// generator cap follows the constraint cap.
    pub fn with_constraint_cap(cap: usize) -> Self {
        Limits { max_constraints: cap, max_generators: (2 * cap).max(DEFAULT_GENERATOR_CAP) }
    }

    pub(crate) fn check_constraints(&self, m: usize) -> Result<()> {
        if m > self.max_constraints {
            return Err(Error::EnumerationCapExceeded { what: "constraint count", limit: self.max_constraints, found: m });
        }
        Ok(())
    }
}

/// Sorted set of constraint indices. Stored 0-based, displayed 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        IndexSet(indices)
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    /// From 1-based labels, as written in reports.
    pub fn from_labels(labels: &[usize]) -> Self {
        IndexSet::new(labels.iter().map(|&l| l - 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        IndexSet::new(self.0.iter().chain(&other.0).copied().collect())
    }
}

/// Cardinality first, then lexicographic.
impl Ord for IndexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

/// Fixed data of the parametric problem: rows `a_t`, objective `c`, and the norm
/// on the variable space. The parameter space always carries ℓ∞.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemInstance {
    rows: Matrix,
    objective: Vector,
    norm: Norm,
    dual_feasible: bool,
    limits: Limits,
}

impl ProblemInstance {
    pub fn new(rows: Matrix, objective: Vector, norm: Norm) -> Result<Self> {
        if rows.nrows() == 0 || rows.ncols() == 0 {
            return Err(Error::InvalidArgument("an instance needs m >= 1 rows and n >= 1 variables".into()));
        }
        if objective.len() != rows.ncols() {
            return Err(Error::dimension("objective c", rows.ncols(), objective.len()));
        }
        let dual_feasible = lp::cone_membership(&rows.to_rows(), &neg(&objective))?.is_some();
        Ok(ProblemInstance { rows, objective, norm, dual_feasible, limits: Limits::default() })
    }

    pub fn from_i64(rows: &[&[i64]], objective: &[i64], norm: Norm) -> Result<Self> {
        ProblemInstance::new(Matrix::from_i64(rows), crate::exact::vector(objective), norm)
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn n(&self) -> usize {
        self.rows.ncols()
    }

    pub fn m(&self) -> usize {
        self.rows.nrows()
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    pub fn row(&self, t: usize) -> &[Rational] {
        self.rows.row(t)
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn norm(&self) -> Norm {
        self.norm
    }

    /// Whether `-c ∈ cone{a_t}`; when false the argmin mapping has empty domain.
    pub fn dual_feasible(&self) -> bool {
        self.dual_feasible
    }

    pub(crate) fn require_dual_feasible(&self) -> Result<()> {
        if self.dual_feasible {
            Ok(())
        } else {
            Err(Error::DualInfeasible)
        }
    }

    pub(crate) fn check_parameter(&self, b: &[Rational]) -> Result<()> {
        if b.len() != self.m() {
            return Err(Error::dimension("parameter b", self.m(), b.len()));
        }
        Ok(())
    }

    pub(crate) fn check_point(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::dimension("point x", self.n(), x.len()));
        }
        Ok(())
    }

    /// Same instance with rows (and any certificates) permuted: row `k` of the
    /// result is row `order[k]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        ProblemInstance::new(self.rows.select_rows(order), self.objective.clone(), self.norm)
            .map(|p| p.with_limits(self.limits))
    }

    /// Rows and objective multiplied by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        let rows: Vec<Vector> = self.rows.rows().map(|r| crate::exact::scale(r, factor)).collect();
        ProblemInstance::new(
            Matrix::from_rows(self.n(), &rows)?,
            crate::exact::scale(&self.objective, factor),
            self.norm,
        )
        .map(|p| p.with_limits(self.limits))
    }

    pub fn in_domain(&self, b: &[Rational]) -> Result<bool> {
        Ok(!feasible_set(self, b)?.is_empty())
    }
}

/// `F(b) = {x : a_t'x <= b_t, t ∈ T}`.
pub fn feasible_set(inst: &ProblemInstance, b: &[Rational]) -> Result<HPolyhedron> {
    inst.check_parameter(b)?;
    let rows = inst.rows.rows().zip(b).map(|(a, bt)| (a.to_vec(), bt.clone())).collect();
    HPolyhedron::new(inst.n(), rows, Vec::new())
}

/// `T_b(x) = {t : a_t'x = b_t}` for a feasible `x`.
pub fn active_indices(inst: &ProblemInstance, b: &[Rational], x: &[Rational]) -> Result<IndexSet> {
    inst.check_parameter(b)?;
    inst.check_point(x)?;
    let mut active = Vec::new();
    for (t, a) in inst.rows.rows().enumerate() {
        let lhs = dot(a, x);
        if lhs > b[t] {
            return Err(Error::InfeasiblePoint(format!("constraint {} is violated", t + 1)));
        }
        if lhs == b[t] {
            active.push(t);
        }
    }
    Ok(IndexSet::new(active))
}

/// Optimal value of the LP at `b`, or `None` when `b ∉ dom F` or the mapping has empty domain.
pub fn optimal_value(inst: &ProblemInstance, b: &[Rational]) -> Result<Option<Rational>> {
    let feasible = feasible_set(inst, b)?;
    if !inst.dual_feasible {
        return Ok(None);
    }
    Ok(match feasible.minimize(&inst.objective)? {
        LpOutcome::Optimal { value, .. } => Some(value),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("bounded whenever -c lies in the cone of the rows"),
    })
}

/// `F^op(b) = F(b) ∩ {c'x = v*}`; empty when `b ∉ dom F` or the instance is dual infeasible.
pub fn optimal_set(inst: &ProblemInstance, b: &[Rational]) -> Result<HPolyhedron> {
    let mut set = feasible_set(inst, b)?;
    match optimal_value(inst, b)? {
        None => Ok(HPolyhedron::empty(inst.n())),
        Some(_) if inst.objective.iter().all(Zero::is_zero) => Ok(set),
        Some(v) => {
            set.add_equality(inst.objective.clone(), v)?;
            Ok(set)
        }
    }
}

/// Exact membership `x ∈ F^op(b)`.
pub fn is_optimal(inst: &ProblemInstance, b: &[Rational], x: &[Rational]) -> Result<bool> {
    inst.check_point(x)?;
    let feasible = feasible_set(inst, b)?;
    if !feasible.contains(x) {
        return Ok(false);
    }
    Ok(match optimal_value(inst, b)? {
        Some(v) => dot(&inst.objective, x) == v,
        None => false,
    })
}

/// `E^op(b) = extr(F^op(b) ∩ span{a_t})`, sorted lexicographically.
pub fn extreme_optimal_points(inst: &ProblemInstance, b: &[Rational]) -> Result<Vec<Vector>> {
    inst.require_dual_feasible()?;
    extreme_points_of(inst, optimal_set(inst, b)?)
}

/// [`extreme_optimal_points`] from an already computed `F^op(b)`.
pub(crate) fn extreme_points_of(inst: &ProblemInstance, mut set: HPolyhedron) -> Result<Vec<Vector>> {
    if set.is_empty() {
        return Err(Error::EmptyOptimalSet);
    }
    for z in inst.rows.null_space_basis() {
        set.add_equality(z, Rational::zero())?;
    }
    match vertices(&set) {
        Vertices::Points(points) => Ok(points),
        Vertices::ContainsLine => unreachable!("the row-space restriction removes every line"),
    }
}
