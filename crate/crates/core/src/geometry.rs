//! Polytope representations, vertex and facet enumeration, end-set distances and
//! exact ℓ1/ℓ∞ projections onto polyhedra.
//!
//! Facets and vertices are found by subset enumeration, which costs
//! `C(points, dim)` rank tests for facets and `C(rows, n)` solves for vertices.
//! That is fine for the small dimensions this crate targets (n ≤ 4, a few dozen
//! rows) and is guarded by [`DEFAULT_GENERATOR_CAP`].

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{dot, neg, primitive_integer, sub, ExtRational, Matrix, Rational, Solve, Vector};
use crate::lp::{self, LpOutcome, LpProblem};
use crate::subsets::Combinations;

/// Default maximum number of distinct generators accepted by [`v_to_h`].
pub const DEFAULT_GENERATOR_CAP: usize = 24;

/// Norm on the variable space. Only the polyhedral pair ℓ1/ℓ∞ is supported so
/// every distance is the value of an exact LP.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Norm {
    L1,
    LInf,
}

impl Norm {
    pub fn dual(self) -> Norm {
        match self {
            Norm::L1 => Norm::LInf,
            Norm::LInf => Norm::L1,
        }
    }

    pub fn of(self, v: &[Rational]) -> Rational {
        match self {
            Norm::L1 => crate::exact::norm_l1(v),
            Norm::LInf => crate::exact::norm_inf(v),
        }
    }

    pub fn parse(text: &str) -> Result<Norm> {
        match text {
            "l1" => Ok(Norm::L1),
            "linf" => Ok(Norm::LInf),
            other => Err(Error::Parse(format!("unknown norm {other:?} (expected \"l1\" or \"linf\")"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Norm::L1 => "l1",
            Norm::LInf => "linf",
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Convex hull of a finite point set, stored deduplicated in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VPolytope {
    dim: usize,
    points: Vec<Vector>,
}

impl VPolytope {
    pub fn new(dim: usize, points: Vec<Vector>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("a V-polytope needs at least one point".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::dimension("V-polytope point", dim, p.len()));
        }
        let points: BTreeSet<Vector> = points.into_iter().collect();
        Ok(VPolytope { dim, points: points.into_iter().collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn scaled(&self, factor: &Rational) -> VPolytope {
        let points = self.points.iter().map(|p| crate::exact::scale(p, factor)).collect();
        VPolytope::new(self.dim, points).expect("scaling preserves shape")
    }
}

/// `{u : w_j'u <= β_j, v_k'u = γ_k}`. May be empty, unbounded or lower dimensional.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HPolyhedron {
    dim: usize,
    inequalities: Vec<(Vector, Rational)>,
    equalities: Vec<(Vector, Rational)>,
}

impl HPolyhedron {
    pub fn new(dim: usize, inequalities: Vec<(Vector, Rational)>, equalities: Vec<(Vector, Rational)>) -> Result<Self> {
        for (w, _) in inequalities.iter().chain(&equalities) {
            if w.len() != dim {
                return Err(Error::dimension("H-polyhedron row", dim, w.len()));
            }
        }
        Ok(HPolyhedron { dim, inequalities, equalities })
    }

    /// The whole space.
    pub fn universe(dim: usize) -> Self {
        HPolyhedron { dim, inequalities: Vec::new(), equalities: Vec::new() }
    }

    /// A canonical empty set, `0'u <= -1`.
    pub fn empty(dim: usize) -> Self {
        HPolyhedron { dim, inequalities: vec![(vec![Rational::zero(); dim], -Rational::from_integer(1.into()))], equalities: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[(Vector, Rational)] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[(Vector, Rational)] {
        &self.equalities
    }

    pub fn add_inequality(&mut self, w: Vector, beta: Rational) -> Result<()> {
        if w.len() != self.dim {
            return Err(Error::dimension("H-polyhedron row", self.dim, w.len()));
        }
        self.inequalities.push((w, beta));
        Ok(())
    }

    pub fn add_equality(&mut self, v: Vector, gamma: Rational) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::dimension("H-polyhedron row", self.dim, v.len()));
        }
        self.equalities.push((v, gamma));
        Ok(())
    }

    pub fn contains(&self, u: &[Rational]) -> bool {
        u.len() == self.dim
            && self.inequalities.iter().all(|(w, b)| dot(w, u) <= *b)
            && self.equalities.iter().all(|(v, g)| dot(v, u) == *g)
    }

    /// LP over this set in `dim + extra` variables; the extra columns are zero in
    /// every constraint of the set.
    fn lp(&self, objective: Vector) -> LpProblem {
        let total = objective.len();
        let pad = |w: &Vector| {
            let mut r = w.clone();
            r.resize(total, Rational::zero());
            r
        };
        let ineq: Vec<Vector> = self.inequalities.iter().map(|(w, _)| pad(w)).collect();
        let eq: Vec<Vector> = self.equalities.iter().map(|(v, _)| pad(v)).collect();
        LpProblem {
            objective,
            inequalities: Matrix::from_rows(total, &ineq).expect("rows padded"),
            ineq_rhs: self.inequalities.iter().map(|(_, b)| b.clone()).collect(),
            equalities: Matrix::from_rows(total, &eq).expect("rows padded"),
            eq_rhs: self.equalities.iter().map(|(_, g)| g.clone()).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        !lp::is_feasible(&self.lp(vec![Rational::zero(); self.dim])).expect("well formed")
    }

    /// Some point of the set, if nonempty.
    pub fn any_point(&self) -> Option<Vector> {
        match lp::solve(&self.lp(vec![Rational::zero(); self.dim])).expect("well formed") {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn minimize(&self, objective: &[Rational]) -> Result<LpOutcome> {
        if objective.len() != self.dim {
            return Err(Error::dimension("objective", self.dim, objective.len()));
        }
        lp::solve(&self.lp(objective.to_vec()))
    }

    /// `self ⊆ other`, decided by maximizing each defining row of `other` over `self`.
    pub fn is_subset_of(&self, other: &HPolyhedron) -> bool {
        if self.is_empty() {
            return true;
        }
        let within = |w: &Vector, bound: &Rational| match self.minimize(&neg(w)).expect("same dimension") {
            LpOutcome::Optimal { value, .. } => -value <= *bound,
            _ => false,
        };
        other.inequalities.iter().all(|(w, b)| within(w, b))
            && other.equalities.iter().all(|(v, g)| within(v, g) && within(&neg(v), &-g))
    }

    pub fn same_set(&self, other: &HPolyhedron) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// Lineality space `{d : w'd = 0 for every row}`.
    fn lineality(&self) -> Vec<Vector> {
        let rows: Vec<Vector> = self.inequalities.iter().chain(&self.equalities).map(|(w, _)| w.clone()).collect();
        Matrix::from_rows(self.dim, &rows).expect("rows checked").null_space_basis()
    }
}

/// Result of [`vertices`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Vertices {
    Points(Vec<Vector>),
    ContainsLine,
}

/// Extreme points by enumerating row subsets that pin down a unique point.
/// Returns them sorted lexicographically; an empty set has no vertices.
pub fn vertices(p: &HPolyhedron) -> Vertices {
    if p.is_empty() {
        return Vertices::Points(Vec::new());
    }
    if !p.lineality().is_empty() {
        return Vertices::ContainsLine;
    }
    let n = p.dim;
    let eq_rows: Vec<Vector> = p.equalities.iter().map(|(v, _)| v.clone()).collect();
    let eq_rank = Matrix::from_rows(n, &eq_rows).expect("rows checked").rank();
    let need = n - eq_rank;
    let mut found = BTreeSet::new();
    for subset in Combinations::new(p.inequalities.len(), need) {
        let mut rows = eq_rows.clone();
        let mut rhs: Vector = p.equalities.iter().map(|(_, g)| g.clone()).collect();
        for &i in &subset {
            rows.push(p.inequalities[i].0.clone());
            rhs.push(p.inequalities[i].1.clone());
        }
        let m = Matrix::from_rows(n, &rows).expect("rows checked");
        if let Solve::Unique(u) = m.solve_unique(&rhs).expect("conformable") {
            if p.contains(&u) {
                found.insert(u);
            }
        }
    }
    Vertices::Points(found.into_iter().collect())
}

/// Canonical form of a hyperplane row: coprime integers, first nonzero coefficient positive.
fn canonical_equality(v: &[Rational], gamma: &Rational) -> (Vector, Rational) {
    let mut full = v.to_vec();
    full.push(gamma.clone());
    let mut full = primitive_integer(&full);
    if full.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        full = neg(&full);
    }
    let gamma = full.pop().expect("nonempty");
    (full, gamma)
}

/// Canonical form of a halfspace row: coprime integers (orientation fixed by `<=`).
fn canonical_inequality(w: &[Rational], beta: &Rational) -> (Vector, Rational) {
    let mut full = w.to_vec();
    full.push(beta.clone());
    let mut full = primitive_integer(&full);
    let beta = full.pop().expect("nonempty");
    (full, beta)
}

/// Facet description of `conv(points)` with the default generator cap.
pub fn v_to_h(p: &VPolytope) -> Result<HPolyhedron> {
    v_to_h_capped(p, DEFAULT_GENERATOR_CAP)
}

/// Minimal H-representation of `conv(points)`: equalities spanning the affine hull
/// followed by one inequality per facet relative to that hull.
pub fn v_to_h_capped(p: &VPolytope, cap: usize) -> Result<HPolyhedron> {
    let pts = &p.points;
    if pts.len() > cap {
        return Err(Error::EnumerationCapExceeded { what: "generator points", limit: cap, found: pts.len() });
    }
    let n = p.dim;
    let base = &pts[0];
    let diffs: Vec<Vector> = pts[1..].iter().map(|q| sub(q, base)).collect();
    let normals = Matrix::from_rows(n, &diffs).expect("same dimension").null_space_basis();
    let affine_dim = n - normals.len();

    let equalities: BTreeSet<(Vector, Rational)> =
        normals.iter().map(|z| canonical_equality(z, &dot(z, base))).collect();

    let mut facets = BTreeSet::new();
    if affine_dim > 0 {
        for subset in Combinations::new(pts.len(), affine_dim) {
            let anchor = &pts[subset[0]];
            let mut rows: Vec<Vector> = subset[1..].iter().map(|&i| sub(&pts[i], anchor)).collect();
            rows.extend(normals.iter().cloned());
            let null = Matrix::from_rows(n, &rows).expect("same dimension").null_space_basis();
            if null.len() != 1 {
                continue;
            }
            let w = &null[0];
            let beta = dot(w, anchor);
            let above = pts.iter().any(|q| dot(w, q) > beta);
            let below = pts.iter().any(|q| dot(w, q) < beta);
            match (above, below) {
                (false, true) => {
                    facets.insert(canonical_inequality(w, &beta));
                }
                (true, false) => {
                    facets.insert(canonical_inequality(&neg(w), &-beta));
                }
                _ => {}
            }
        }
    }
    HPolyhedron::new(n, facets.into_iter().collect(), equalities.into_iter().collect())
}

/// `min ‖y - center‖` over `y` in `set`. Returns the value and a minimizer, or `None` when the set is empty.
fn min_norm(set: &HPolyhedron, center: &[Rational], norm: Norm) -> Option<(Rational, Vector)> {
    let n = set.dim;
    // variables: y (n) then either p (n, per-coordinate bounds) or s (1)
    let extra = match norm {
        Norm::L1 => n,
        Norm::LInf => 1,
    };
    let total = n + extra;
    let mut objective = vec![Rational::zero(); total];
    for o in objective.iter_mut().skip(n) {
        *o = Rational::from_integer(1.into());
    }
    let mut problem = set.lp(objective);
    let mut rows = problem.inequalities.to_rows();
    let mut rhs = problem.ineq_rhs.clone();
    for i in 0..n {
        let bound_col = match norm {
            Norm::L1 => n + i,
            Norm::LInf => n,
        };
        for sign in [1i64, -1] {
            let mut r = vec![Rational::zero(); total];
            r[i] = Rational::from_integer(sign.into());
            r[bound_col] = -Rational::from_integer(1.into());
            rows.push(r);
            rhs.push(if sign == 1 { center[i].clone() } else { -&center[i] });
        }
    }
    problem.inequalities = Matrix::from_rows(total, &rows).expect("rows padded");
    problem.ineq_rhs = rhs;
    match lp::solve(&problem).expect("well formed") {
        LpOutcome::Optimal { point, value } => Some((value, point[..n].to_vec())),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("norm objective is bounded below"),
    }
}

/// `d(x, P)` in the given norm together with a nearest point; `+∞` and no point
/// when `P` is empty.
pub fn distance_to_polyhedron(x: &[Rational], p: &HPolyhedron, norm: Norm) -> Result<(ExtRational, Option<Vector>)> {
    if x.len() != p.dim {
        return Err(Error::dimension("point", p.dim, x.len()));
    }
    Ok(match min_norm(p, x, norm) {
        Some((value, y)) => (ExtRational::Finite(value), Some(y)),
        None => (ExtRational::Infinity, None),
    })
}

/// `d_*(0, end conv V)` where `d_*` is the dual of `variable_norm`.
pub fn end_set_distance(v: &VPolytope, variable_norm: Norm) -> Result<ExtRational> {
    end_set_distance_capped(v, variable_norm, DEFAULT_GENERATOR_CAP)
}

pub fn end_set_distance_capped(v: &VPolytope, variable_norm: Norm, cap: usize) -> Result<ExtRational> {
    Ok(end_set_distance_h(&v_to_h_capped(v, cap)?, variable_norm))
}

/// End-set distance for a polytope given by any H-representation.
///
/// `u ∈ end C` iff `u ∈ C` and some row with positive right side is active at `u`,
/// so the distance is the least dual norm over the faces cut out by those rows.
/// Equalities count as a pair of opposite inequalities.
pub fn end_set_distance_h(c: &HPolyhedron, variable_norm: Norm) -> ExtRational {
    let dual = variable_norm.dual();
    let origin = vec![Rational::zero(); c.dim];
    let mut rows: Vec<(Vector, Rational)> = c.inequalities.clone();
    for (v, g) in &c.equalities {
        rows.push((v.clone(), g.clone()));
        rows.push((neg(v), -g));
    }
    let mut best = ExtRational::Infinity;
    for (w, beta) in rows.into_iter().filter(|(_, b)| b.is_positive()) {
        let mut face = c.clone();
        face.equalities.push((w, beta));
        if let Some((value, _)) = min_norm(&face, &origin, dual) {
            let value = ExtRational::Finite(value);
            if value < best {
                best = value;
            }
        }
    }
    best
}

/// Independent extreme-point filter: `p_i` is extreme iff it is not a convex
/// combination of the other points (LP test).
pub fn extreme_points_by_lp(points: &[Vector]) -> Vec<Vector> {
    let distinct: Vec<Vector> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    distinct
        .iter()
        .enumerate()
        .filter(|(i, p)| {
            let others: Vec<Vector> = distinct
                .iter()
                .enumerate()
                .filter(|(j, _)| j != i)
                .map(|(_, q)| {
                    let mut q = q.clone();
                    q.push(Rational::from_integer(1.into()));
                    q
                })
                .collect();
            let mut target = (*p).clone();
            target.push(Rational::from_integer(1.into()));
            lp::cone_membership(&others, &target).expect("same dimension").is_none()
        })
        .map(|(_, p)| p.clone())
        .collect()
}
