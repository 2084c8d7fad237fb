#![allow(dead_code)]

use hoffman::exact::{Rational, Vector};
use hoffman::validator::Lcg;
use hoffman::{Matrix, Norm, ProblemInstance};

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

pub fn ints(v: &[i64]) -> Vector {
    v.iter().map(|&x| int(x)).collect()
}

/// Dual-feasible instance `k` of the fixed sweep: `n <= 3`, `m <= 5`, entries
/// in `[-2, 2]`, `c = -A'λ` with integer `λ >= 0`.
pub fn random_instance(seed: u64, k: u64) -> ProblemInstance {
    let mut rng = Lcg::for_index(seed, k);
    let n = rng.range(1, 3) as usize;
    let m = rng.range(1, 5) as usize;
    let rows: Vec<Vector> = (0..m).map(|_| (0..n).map(|_| int(rng.range(-2, 2))).collect()).collect();
    let lambda: Vec<i64> = (0..m).map(|_| rng.range(0, 2)).collect();
    let c: Vector = (0..n)
        .map(|j| -rows.iter().zip(&lambda).map(|(r, &l)| &r[j] * int(l)).sum::<Rational>())
        .collect();
    let norm = if rng.range(0, 1) == 0 { Norm::LInf } else { Norm::L1 };
    let inst = ProblemInstance::new(Matrix::from_rows(n, &rows).unwrap(), c, norm).unwrap();
    assert!(inst.dual_feasible());
    inst
}

pub fn random_instances(count: u64) -> Vec<ProblemInstance> {
    (0..count).map(|k| random_instance(2024, k)).collect()
}

/// Exact solution of a square system by Gaussian elimination, `None` if singular.
pub fn solve_square(rows: &[Vector], rhs: &[Rational]) -> Option<Vector> {
    let n = rows.len();
    let mut a: Vec<Vector> = rows.iter().zip(rhs).map(|(r, b)| {
        let mut r = r.clone();
        r.push(b.clone());
        r
    }).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != int(0))?;
        a.swap(col, pivot);
        for r in 0..n {
            if r != col && a[r][col] != int(0) {
                let f = &a[r][col] / &a[col][col];
                for j in col..=n {
                    let delta = &f * &a[col][j];
                    a[r][j] -= delta;
                }
            }
        }
    }
    Some((0..n).map(|i| &a[i][n] / &a[i][i]).collect())
}

/// Subsets of `0..m` of size `k`, lexicographic.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}
