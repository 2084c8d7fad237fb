//! Exact two-phase simplex over the rationals.
//!
//! Problems are stated over free variables as `min c'x  s.t.  Gx <= g, Ex = e`.
//! Internally every variable is split as `x = x⁺ - x⁻`, inequalities receive a
//! slack, and rows with a negative right side (and all equality rows) receive an
//! artificial variable for phase one. Pivoting follows Bland's rule (lowest
//! index entering column, lowest basic index among ratio ties), which both
//! prevents cycling and makes the returned vertex a deterministic function of the
//! input. Arithmetic runs in overflow-checked 128-bit rationals and restarts in
//! arbitrary precision if any operation would overflow.

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{dot, is_zero_vector, Matrix, Rational, Vector};

/// `min objective'x` subject to `inequalities x <= ineq_rhs` and `equalities x = eq_rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub objective: Vector,
    pub inequalities: Matrix,
    pub ineq_rhs: Vector,
    pub equalities: Matrix,
    pub eq_rhs: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { point: Vector, value: Rational },
}

impl LpOutcome {
    pub fn optimal(&self) -> Option<(&Vector, &Rational)> {
        match self {
            LpOutcome::Optimal { point, value } => Some((point, value)),
            _ => None,
        }
    }
}

impl LpProblem {
    /// Problem with no constraints over `n` variables.
    pub fn new(objective: Vector) -> Self {
        let n = objective.len();
        LpProblem {
            objective,
            inequalities: Matrix::zeros(0, n),
            ineq_rhs: Vec::new(),
            equalities: Matrix::zeros(0, n),
            eq_rhs: Vec::new(),
        }
    }

    pub fn with_constraints(
        objective: Vector,
        inequalities: Matrix,
        ineq_rhs: Vector,
        equalities: Matrix,
        eq_rhs: Vector,
    ) -> Result<Self> {
        let p = LpProblem { objective, inequalities, ineq_rhs, equalities, eq_rhs };
        p.validate()?;
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.inequalities.ncols() != n {
            return Err(Error::dimension("inequality rows", n, self.inequalities.ncols()));
        }
        if self.equalities.ncols() != n {
            return Err(Error::dimension("equality rows", n, self.equalities.ncols()));
        }
        if self.ineq_rhs.len() != self.inequalities.nrows() {
            return Err(Error::dimension("inequality right side", self.inequalities.nrows(), self.ineq_rhs.len()));
        }
        if self.eq_rhs.len() != self.equalities.nrows() {
            return Err(Error::dimension("equality right side", self.equalities.nrows(), self.eq_rhs.len()));
        }
        Ok(())
    }
}

/// Solves the problem exactly.
pub fn solve(problem: &LpProblem) -> Result<LpOutcome> {
    problem.validate()?;
    Ok(run(problem, true))
}

/// Phase one only: whether the constraint set is nonempty.
pub fn is_feasible(problem: &LpProblem) -> Result<bool> {
    problem.validate()?;
    Ok(!matches!(run(problem, false), LpOutcome::Infeasible))
}

/// Finds `λ >= 0` with `Σ λ_i generators_i = target`, or `None` when the target
/// is outside the cone. The cone of no generators is `{0}`.
pub fn cone_membership(generators: &[Vector], target: &[Rational]) -> Result<Option<Vector>> {
    let dim = target.len();
    if let Some((i, g)) = generators.iter().enumerate().find(|(_, g)| g.len() != dim) {
        return Err(Error::dimension(format!("cone generator {}", i + 1), dim, g.len()));
    }
    let k = generators.len();
    if k == 0 {
        return Ok(is_zero_vector(target).then(Vec::new));
    }
    let equalities = Matrix::from_columns(dim, generators)?;
    let mut nonneg = Matrix::identity(k);
    for i in 0..k {
        nonneg[(i, i)] = -Rational::one();
    }
    let problem = LpProblem::with_constraints(
        vec![Rational::zero(); k],
        nonneg,
        vec![Rational::zero(); k],
        equalities,
        target.to_vec(),
    )?;
    Ok(match solve(&problem)? {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    })
}

/// Exact field operations used by the tableau. `None` signals overflow of a
/// fixed-width representation; the arbitrary-precision one never fails.
trait Scalar: Clone + Ord + Zero + One {
    fn plus(&self, other: &Self) -> Option<Self>;
    fn minus(&self, other: &Self) -> Option<Self>;
    fn times(&self, other: &Self) -> Option<Self>;
    fn over(&self, other: &Self) -> Option<Self>;

    fn negated(&self) -> Option<Self> {
        Self::zero().minus(self)
    }

    fn is_neg(&self) -> bool {
        *self < Self::zero()
    }

    fn is_pos(&self) -> bool {
        *self > Self::zero()
    }
}

impl Scalar for Rational {
    fn plus(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn minus(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn times(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn over(&self, other: &Self) -> Option<Self> {
        Some(self / other)
    }
}

type Small = Ratio<i128>;

impl Scalar for Small {
    fn plus(&self, other: &Self) -> Option<Self> {
        self.checked_add(other)
    }
    fn minus(&self, other: &Self) -> Option<Self> {
        self.checked_sub(other)
    }
    fn times(&self, other: &Self) -> Option<Self> {
        self.checked_mul(other)
    }
    fn over(&self, other: &Self) -> Option<Self> {
        self.checked_div(other)
    }
}

fn to_small(v: &Rational) -> Option<Small> {
    // keep headroom so that negation and reduction never hit i128::MIN
    let (n, d) = (v.numer().to_i128()?, v.denom().to_i128()?);
    (n > i128::MIN).then(|| Small::new_raw(n, d))
}

fn from_small(v: &Small) -> Rational {
    Rational::new((*v.numer()).into(), (*v.denom()).into())
}

/// The problem data in a concrete scalar type.
struct Data<T> {
    objective: Vec<T>,
    ineq: Vec<Vec<T>>,
    ineq_rhs: Vec<T>,
    eq: Vec<Vec<T>>,
    eq_rhs: Vec<T>,
}

impl<T: Scalar> Data<T> {
    fn convert(problem: &LpProblem, f: impl Fn(&Rational) -> Option<T>) -> Option<Self> {
        let vec = |v: &[Rational]| v.iter().map(&f).collect::<Option<Vec<T>>>();
        Some(Data {
            objective: vec(&problem.objective)?,
            ineq: problem.inequalities.rows().map(vec).collect::<Option<_>>()?,
            ineq_rhs: vec(&problem.ineq_rhs)?,
            eq: problem.equalities.rows().map(vec).collect::<Option<_>>()?,
            eq_rhs: vec(&problem.eq_rhs)?,
        })
    }
}

enum Raw<T> {
    Infeasible,
    Unbounded,
    Optimal(Vec<T>),
}

/// Runs in 128-bit rationals when the data fit and nothing overflows, otherwise
/// in arbitrary precision. Both are exact and take identical pivots.
fn run(problem: &LpProblem, optimize: bool) -> LpOutcome {
    let small = Data::convert(problem, to_small).and_then(|d| Tableau::build(&d)?.run(&d, optimize));
    let raw = match small {
        Some(Raw::Infeasible) => Raw::Infeasible,
        Some(Raw::Unbounded) => Raw::Unbounded,
        Some(Raw::Optimal(x)) => Raw::Optimal(x.iter().map(from_small).collect()),
        None => {
            let d = Data::convert(problem, |v| Some(v.clone())).expect("identity conversion");
            Tableau::build(&d).and_then(|t| t.run(&d, optimize)).expect("arbitrary precision never overflows")
        }
    };
    match raw {
        Raw::Infeasible => LpOutcome::Infeasible,
        Raw::Unbounded => LpOutcome::Unbounded,
        Raw::Optimal(point) => {
            let value = if optimize { dot(&problem.objective, &point) } else { Rational::zero() };
            LpOutcome::Optimal { point, value }
        }
    }
}

/// Column classes of the internal standard form, in index order.
struct Tableau<T> {
    /// constraint rows, each `ncols + 1` long (last entry is the right side)
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    n: usize,
    /// first artificial column; columns at or beyond it are artificial
    first_artificial: usize,
    ncols: usize,
}

impl<T: Scalar> Tableau<T> {
    fn build(data: &Data<T>) -> Option<Self> {
        let n = data.objective.len();
        let p = data.ineq.len();
        let q = data.eq.len();
        let slack0 = 2 * n;
        let first_artificial = slack0 + p;

        let needs_artificial: Vec<bool> =
            data.ineq_rhs.iter().map(Scalar::is_neg).chain(std::iter::repeat(true).take(q)).collect();
        let num_artificial = needs_artificial.iter().filter(|&&b| b).count();
        let ncols = first_artificial + num_artificial;

        let mut rows = Vec::with_capacity(p + q);
        let mut basis = Vec::with_capacity(p + q);
        let mut next_artificial = first_artificial;
        for i in 0..p + q {
            let (coeffs, rhs) = if i < p { (&data.ineq[i], &data.ineq_rhs[i]) } else { (&data.eq[i - p], &data.eq_rhs[i - p]) };
            let flip = rhs.is_neg();
            let mut row = vec![T::zero(); ncols + 1];
            for (j, a) in coeffs.iter().enumerate() {
                let a = if flip { a.negated()? } else { a.clone() };
                row[n + j] = a.negated()?;
                row[j] = a;
            }
            if i < p {
                row[slack0 + i] = if flip { T::one().negated()? } else { T::one() };
            }
            row[ncols] = if flip { rhs.negated()? } else { rhs.clone() };
            if needs_artificial[i] {
                row[next_artificial] = T::one();
                basis.push(next_artificial);
                next_artificial += 1;
            } else {
                basis.push(slack0 + i);
            }
            rows.push(row);
        }
        Some(Tableau { rows, basis, n, first_artificial, ncols })
    }

    fn rhs(&self, i: usize) -> &T {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize, objective: &mut [T]) -> Option<()> {
        let pivot = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.over(&pivot)?;
            }
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut [T]| -> Option<()> {
            if row[c].is_zero() {
                return Some(());
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.minus(&f.times(pv)?)?;
                }
            }
            Some(())
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row)?;
            }
        }
        eliminate(objective)?;
        self.basis[r] = c;
        Some(())
    }

    /// Reduced-cost row for `cost` (length `ncols`), with `-z` in the last slot.
    fn reduced_costs(&self, cost: &[T]) -> Option<Vec<T>> {
        let mut obj: Vec<T> = cost.to_vec();
        obj.push(T::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (v, a) in obj.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *v = v.minus(&cost[b].times(a)?)?;
                }
            }
        }
        Some(obj)
    }

    /// Bland's rule iterations over columns `< limit`. Returns false if unbounded.
    fn iterate(&mut self, objective: &mut [T], limit: usize) -> Option<bool> {
        loop {
            let Some(enter) = (0..limit).find(|&j| objective[j].is_neg()) else {
                return Some(true);
            };
            let mut best: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_pos() {
                    continue;
                }
                let ratio = self.rhs(i).over(a)?;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((leave, _)) => self.pivot(leave, enter, objective)?,
                None => return Some(false),
            }
        }
    }

    fn run(mut self, data: &Data<T>, optimize: bool) -> Option<Raw<T>> {
        if self.first_artificial < self.ncols {
            let mut cost = vec![T::zero(); self.ncols];
            for c in cost.iter_mut().skip(self.first_artificial) {
                *c = T::one();
            }
            let mut obj = self.reduced_costs(&cost)?;
            self.iterate(&mut obj, self.ncols)?;
            // obj[last] holds -(phase one optimum)
            if !obj[self.ncols].is_zero() {
                return Some(Raw::Infeasible);
            }
            self.expel_artificials(&mut obj)?;
        }
        if !optimize {
            return Some(Raw::Optimal(self.point()?));
        }
        let mut cost = vec![T::zero(); self.ncols];
        for (j, c) in data.objective.iter().enumerate() {
            cost[self.n + j] = c.negated()?;
            cost[j] = c.clone();
        }
        let mut obj = self.reduced_costs(&cost)?;
        if !self.iterate(&mut obj, self.first_artificial)? {
            return Some(Raw::Unbounded);
        }
        Some(Raw::Optimal(self.point()?))
    }

    /// Pivots zero-level artificials out of the basis; rows where that is impossible
    /// are linearly redundant and are dropped.
    fn expel_artificials(&mut self, obj: &mut [T]) -> Option<()> {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < self.first_artificial {
                i += 1;
                continue;
            }
            match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j, obj)?;
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
        Some(())
    }

    fn point(&self) -> Option<Vec<T>> {
        let mut x = vec![T::zero(); self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = x[b].plus(self.rhs(i))?;
            } else if b < 2 * self.n {
                x[b - self.n] = x[b - self.n].minus(self.rhs(i))?;
            }
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, vector};

    fn lp(obj: &[i64], g: &[&[i64]], gr: &[i64]) -> LpProblem {
        let n = obj.len();
        let rows: Vec<Vector> = g.iter().map(|r| vector(r)).collect();
        LpProblem::with_constraints(
            vector(obj),
            Matrix::from_rows(n, &rows).unwrap(),
            vector(gr),
            Matrix::zeros(0, n),
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn solve_examples() {
        let out = solve(&lp(&[1], &[&[-1]], &[0])).unwrap();
        assert_eq!(out, LpOutcome::Optimal { point: vector(&[0]), value: int(0) });
        assert_eq!(solve(&lp(&[1], &[&[1], &[-1]], &[-1, -1])).unwrap(), LpOutcome::Infeasible);
        assert_eq!(solve(&LpProblem::new(vector(&[-1]))).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn feasibility_examples() {
        assert!(is_feasible(&lp(&[0], &[&[0]], &[1])).unwrap());
        assert!(!is_feasible(&lp(&[0], &[&[0]], &[-1])).unwrap());
    }

    #[test]
    fn equality_rows_and_redundancy() {
        // x + y = 2, 2x + 2y = 4 (redundant), x <= 1, y <= 3; min -x
        let p = LpProblem::with_constraints(
            vector(&[-1, 0]),
            Matrix::from_i64(&[&[1, 0], &[0, 1]]),
            vector(&[1, 3]),
            Matrix::from_i64(&[&[1, 1], &[2, 2]]),
            vector(&[2, 4]),
        )
        .unwrap();
        assert_eq!(solve(&p).unwrap(), LpOutcome::Optimal { point: vector(&[1, 1]), value: int(-1) });
    }

    #[test]
    fn cone_examples() {
        let gens = vec![vector(&[1, 0]), vector(&[0, 1])];
        assert_eq!(cone_membership(&gens, &vector(&[1, 1])).unwrap(), Some(vector(&[1, 1])));
        assert_eq!(cone_membership(&[vector(&[1, 0])], &vector(&[-1, 0])).unwrap(), None);
        assert_eq!(cone_membership(&[], &vector(&[0, 0])).unwrap(), Some(vec![]));
        assert_eq!(cone_membership(&[], &vector(&[0, 1])).unwrap(), None);
        assert!(cone_membership(&[vector(&[1])], &vector(&[1, 0])).is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let p = LpProblem {
            objective: vector(&[1, 1]),
            inequalities: Matrix::from_i64(&[&[1]]),
            ineq_rhs: vector(&[0]),
            equalities: Matrix::zeros(0, 2),
            eq_rhs: vec![],
        };
        assert!(matches!(solve(&p), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling example under the textbook rule.
        let p = LpProblem::with_constraints(
            vec![crate::exact::ratio(-3, 4), int(150), crate::exact::ratio(-1, 50), int(6)],
            Matrix::from_rows(
                4,
                &[
                    vec![crate::exact::ratio(1, 4), int(-60), crate::exact::ratio(-1, 25), int(9)],
                    vec![crate::exact::ratio(1, 2), int(-90), crate::exact::ratio(-1, 50), int(3)],
                    vector(&[0, 0, 1, 0]),
                    vector(&[-1, 0, 0, 0]),
                    vector(&[0, -1, 0, 0]),
                    vector(&[0, 0, -1, 0]),
                    vector(&[0, 0, 0, -1]),
                ],
            )
            .unwrap(),
            vector(&[0, 0, 1, 0, 0, 0, 0]),
            Matrix::zeros(0, 4),
            vec![],
        )
        .unwrap();
        let (_, value) = solve(&p).unwrap().optimal().map(|(x, v)| (x.clone(), v.clone())).unwrap();
        assert_eq!(value, crate::exact::ratio(-1, 20));
    }

    fn arbitrary_precision(problem: &LpProblem) -> LpOutcome {
        let d = Data::convert(problem, |v| Some(v.clone())).unwrap();
        match Tableau::build(&d).unwrap().run(&d, true).unwrap() {
            Raw::Infeasible => LpOutcome::Infeasible,
            Raw::Unbounded => LpOutcome::Unbounded,
            Raw::Optimal(point) => LpOutcome::Optimal { value: dot(&problem.objective, &point), point },
        }
    }

    #[test]
    fn wide_entries_fall_back_to_arbitrary_precision() {
        let big = |e: u32, k: i64| Rational::from_integer(num_bigint::BigInt::from(10).pow(e) + k);
        for e in [18, 30, 37, 60] {
            // min x + y  s.t.  -K x - (K+1) y <= -1,  -(K+2) x - K y <= -1,  x, y >= 0
            let rows = vec![
                vec![-big(e, 0), -big(e, 1)],
                vec![-big(e, 2), -big(e, 0)],
                vec![-int(1), int(0)],
                vec![int(0), -int(1)],
            ];
            let p = LpProblem::with_constraints(
                vec![int(1), int(1)],
                Matrix::from_rows(2, &rows).unwrap(),
                vec![-int(1), -int(1), int(0), int(0)],
                Matrix::zeros(0, 2),
                vec![],
            )
            .unwrap();
            let fast = solve(&p).unwrap();
            assert_eq!(fast, arbitrary_precision(&p), "exponent {e}");
            let (x, _) = fast.optimal().unwrap();
            assert!(rows.iter().zip([-int(1), -int(1), int(0), int(0)]).all(|(r, b)| dot(r, x) <= b));
        }
    }
}
