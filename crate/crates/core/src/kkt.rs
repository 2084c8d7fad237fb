//! Minimal KKT index subsets and the polyhedral pieces `S_D`.
//!
//! `D ⊆ T` is a minimal KKT subset when `-c ∈ cone{a_t, t ∈ D}` and no proper
//! subset has that property. By Carathéodory this is the same as: the rows
//! `{a_t, t ∈ D}` are linearly independent and the (then unique) multipliers
//! solving `-c = Σ λ_t a_t` are all strictly positive. The enumeration uses that
//! algebraic test; the subset-removal definition survives only as a test oracle.

use num_traits::{Signed, Zero};

use crate::argmin::{feasible_set, IndexSet, ProblemInstance};
use crate::error::{Error, Result};
use crate::exact::{neg, Matrix, Rational, Solve, Vector};
use crate::geometry::HPolyhedron;
use crate::subsets::Combinations;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyScope {
    /// `M_c`, over every parameter.
    Global,
    /// `M_{c,b}` at one parameter.
    AtParameter(Vector),
}

/// Antichain of minimal KKT subsets, sorted by cardinality then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalKktFamily {
    members: Vec<IndexSet>,
    scope: FamilyScope,
}

impl MinimalKktFamily {
    pub fn members(&self) -> &[IndexSet] {
        &self.members
    }

    pub fn scope(&self) -> &FamilyScope {
        &self.scope
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, d: &IndexSet) -> bool {
        self.members.binary_search(d).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &IndexSet> {
        self.members.iter()
    }
}

/// Multipliers of `-c` on the rows in `d` when they are independent, or `None`.
pub fn kkt_multipliers(inst: &ProblemInstance, d: &IndexSet) -> Option<Vector> {
    let columns: Vec<Vector> = d.indices().iter().map(|&t| inst.row(t).to_vec()).collect();
    let m = Matrix::from_columns(inst.n(), &columns).expect("rows have length n");
    match m.solve_unique(&neg(inst.objective())).expect("conformable") {
        Solve::Unique(lambda) => Some(lambda),
        _ => None,
    }
}

/// Algebraic minimality test: independent rows and strictly positive multipliers.
pub fn is_minimal_kkt(inst: &ProblemInstance, d: &IndexSet) -> bool {
    if d.is_empty() {
        return inst.objective().iter().all(Zero::is_zero);
    }
    if d.len() > inst.n() || crate::exact::rank_of(&rows_of(inst, d), inst.n()) != d.len() {
        return false;
    }
    kkt_multipliers(inst, d).is_some_and(|l| l.iter().all(Signed::is_positive))
}

fn rows_of(inst: &ProblemInstance, d: &IndexSet) -> Vec<Vector> {
    d.indices().iter().map(|&t| inst.row(t).to_vec()).collect()
}

/// `M_c`: every minimal KKT subset of `T`.
pub fn minimal_kkt_family(inst: &ProblemInstance) -> Result<MinimalKktFamily> {
    inst.require_dual_feasible()?;
    inst.limits().check_constraints(inst.m())?;
    let mut members = Vec::new();
    if inst.objective().iter().all(Zero::is_zero) {
        members.push(IndexSet::empty());
    } else {
        for k in 1..=inst.n().min(inst.m()) {
            for subset in Combinations::new(inst.m(), k) {
                let d = IndexSet::new(subset);
                if is_minimal_kkt(inst, &d) {
                    members.push(d);
                }
            }
        }
    }
    members.sort();
    Ok(MinimalKktFamily { members, scope: FamilyScope::Global })
}

/// `S_D(b)`: `a_t'x <= b_t` off `D` and `a_t'x = b_t` on `D`.
pub fn s_d_set(inst: &ProblemInstance, d: &IndexSet, b: &[Rational]) -> Result<HPolyhedron> {
    inst.check_parameter(b)?;
    if let Some(&t) = d.indices().iter().find(|&&t| t >= inst.m()) {
        return Err(Error::InvalidArgument(format!("index {} is outside 1..={}", t + 1, inst.m())));
    }
    let mut ineq = Vec::new();
    let mut eq = Vec::new();
    for t in 0..inst.m() {
        let row = (inst.row(t).to_vec(), b[t].clone());
        if d.contains(t) {
            eq.push(row);
        } else {
            ineq.push(row);
        }
    }
    HPolyhedron::new(inst.n(), ineq, eq)
}

/// `M_{c,b} = {D ∈ M_c : S_D(b) ≠ ∅}`.
pub fn minimal_kkt_at(inst: &ProblemInstance, b: &[Rational]) -> Result<MinimalKktFamily> {
    let global = minimal_kkt_family(inst)?;
    minimal_kkt_at_with(inst, &global, b)
}

/// [`minimal_kkt_at`] reusing an already computed global family.
pub fn minimal_kkt_at_with(inst: &ProblemInstance, global: &MinimalKktFamily, b: &[Rational]) -> Result<MinimalKktFamily> {
    if feasible_set(inst, b)?.is_empty() {
        return Err(Error::ParameterOutsideDomain);
    }
    let mut members = Vec::new();
    for d in global.iter() {
        if !s_d_set(inst, d, b)?.is_empty() {
            members.push(d.clone());
        }
    }
    Ok(MinimalKktFamily { members, scope: FamilyScope::AtParameter(b.to_vec()) })
}

/// Parameter `b^D` with `0` on `D` and `1` elsewhere; `M_{c,b^D} = {D}`.
pub fn isolating_parameter(inst: &ProblemInstance, d: &IndexSet) -> Vector {
    (0..inst.m())
        .map(|t| if d.contains(t) { Rational::zero() } else { Rational::from_integer(1.into()) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::vector;
    use crate::geometry::Norm;
    use crate::instances;

    fn labels(f: &MinimalKktFamily) -> Vec<Vec<usize>> {
        f.iter().map(IndexSet::labels).collect()
    }

    #[test]
    fn global_family_examples() {
        assert_eq!(labels(&minimal_kkt_family(&instances::instance_c()).unwrap()), vec![vec![3], vec![1, 2]]);
        assert_eq!(labels(&minimal_kkt_family(&instances::instance_a()).unwrap()), vec![vec![1], vec![2]]);
        let zero_c = ProblemInstance::from_i64(&[&[1, 0], &[0, 1]], &[0, 0], Norm::LInf).unwrap();
        assert_eq!(minimal_kkt_family(&zero_c).unwrap().members(), &[IndexSet::empty()]);
    }

    #[test]
    fn dual_infeasible_family_errors() {
        let inst = ProblemInstance::from_i64(&[&[1, 0], &[0, 1], &[1, 1]], &[1, 1], Norm::LInf).unwrap();
        assert_eq!(minimal_kkt_family(&inst), Err(Error::DualInfeasible));
    }

    #[test]
    fn family_at_parameter_examples() {
        let c = instances::instance_c();
        assert_eq!(labels(&minimal_kkt_at(&c, &vector(&[0, 1, 0])).unwrap()), vec![vec![3]]);
        assert_eq!(labels(&minimal_kkt_at(&c, &vector(&[0, 0, 1])).unwrap()), vec![vec![1, 2]]);
        assert_eq!(labels(&minimal_kkt_at(&c, &vector(&[0, 0, 0])).unwrap()), vec![vec![3], vec![1, 2]]);
        let inconsistent = ProblemInstance::from_i64(&[&[1], &[-1]], &[0], Norm::LInf).unwrap();
        assert_eq!(minimal_kkt_at(&inconsistent, &vector(&[-1, 0])), Err(Error::ParameterOutsideDomain));
    }

    #[test]
    fn s_d_examples() {
        let c = instances::instance_c();
        let b = vector(&[0, 1, 0]);
        let s3 = s_d_set(&c, &IndexSet::from_labels(&[3]), &b).unwrap();
        assert!(s3.contains(&vector(&[0, 0])));
        assert_eq!(s3.equalities().len(), 1);
        assert!(s_d_set(&c, &IndexSet::from_labels(&[1, 2]), &b).unwrap().is_empty());
        assert_eq!(s_d_set(&c, &IndexSet::empty(), &b).unwrap(), feasible_set(&c, &b).unwrap());
        assert!(s_d_set(&c, &IndexSet::from_labels(&[4]), &b).is_err());
    }

    #[test]
    fn constraint_cap() {
        let inst = instances::instance_c().with_limits(crate::argmin::Limits::with_constraint_cap(2));
        assert!(matches!(minimal_kkt_family(&inst), Err(Error::EnumerationCapExceeded { .. })));
    }
}
