//! Exact rational scalars, vectors and matrices plus the elimination kernel
//! (rank, reduced echelon form, null space, unique solves).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Dense exact vector. Lengths are checked by every operation that combines two vectors.
pub type Vector = Vec<Rational>;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn vector(entries: &[i64]) -> Vector {
    entries.iter().map(|&v| int(v)).collect()
}

pub fn zeros(len: usize) -> Vector {
    vec![Rational::zero(); len]
}

/// Parses `p`, `-p`, `p/q` or `-p/q`. Whitespace anywhere, a `+` sign, a signed
/// denominator and `q = 0` are rejected. Non-reduced input such as `2/4` is accepted
/// and normalized.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = |why: &str| Error::Parse(format!("invalid rational {text:?}: {why}"));
    let (negative, body) = match text.strip_prefix('-').or_else(|| text.strip_prefix('\u{2212}')) {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    if !digits(num) {
        return Err(bad("numerator must be a run of decimal digits"));
    }
    let mut numerator: BigInt = num.parse().map_err(|_| bad("numerator"))?;
    if negative {
        numerator = -numerator;
    }
    let denominator: BigInt = match den {
        None => BigInt::one(),
        Some(d) if digits(d) => d.parse().map_err(|_| bad("denominator"))?,
        Some(_) => return Err(bad("denominator must be a run of decimal digits")),
    };
    if denominator.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(Rational::new(numerator, denominator))
}

/// Parses a comma separated list of rationals, e.g. `0,1/2,-3`.
pub fn parse_vector(text: &str) -> Result<Vector> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_rational).collect()
}

pub fn format_vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Decimal rendering with `digits` significant digits (round half away from zero).
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let negative = value.is_negative();
    let abs = value.abs();
    // exponent e with 10^e <= abs < 10^(e+1)
    let mut exp: i64 = (abs.numer().to_string().len() as i64) - (abs.denom().to_string().len() as i64);
    let pow10 = |e: i64| -> Rational {
        let p = num_traits::pow(BigInt::from(10), e.unsigned_abs() as usize);
        if e >= 0 {
            Rational::from_integer(p)
        } else {
            Rational::new(BigInt::one(), p)
        }
    };
    while pow10(exp) > abs {
        exp -= 1;
    }
    while pow10(exp + 1) <= abs {
        exp += 1;
    }
    let shift = digits as i64 - 1 - exp;
    let scaled = &abs * pow10(shift);
    let mut mantissa = (scaled.clone() + Rational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
    if mantissa.to_string().len() > digits {
        // rounding carried into a new digit
        mantissa /= 10;
        exp += 1;
    }
    let mut text = mantissa.to_string();
    let shift = digits as i64 - 1 - exp;
    let body = if (-6..12).contains(&exp) {
        if shift > 0 {
            let shift = shift as usize;
            if text.len() <= shift {
                text = format!("{}{}", "0".repeat(shift - text.len() + 1), text);
            }
            let point = text.len() - shift;
            let (int_part, frac) = text.split_at(point);
            let frac = frac.trim_end_matches('0');
            if frac.is_empty() {
                int_part.to_string()
            } else {
                format!("{int_part}.{frac}")
            }
        } else {
            format!("{}{}", text, "0".repeat((-shift) as usize))
        }
    } else {
        let (lead, rest) = text.split_at(1);
        let rest = rest.trim_end_matches('0');
        if rest.is_empty() {
            format!("{lead}e{exp}")
        } else {
            format!("{lead}.{rest}e{exp}")
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn checked_dot(a: &[Rational], b: &[Rational]) -> Result<Rational> {
    if a.len() != b.len() {
        return Err(Error::dimension("dot product", a.len(), b.len()));
    }
    Ok(dot(a, b))
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(v: &[Rational], s: &Rational) -> Vector {
    v.iter().map(|x| x * s).collect()
}

pub fn neg(v: &[Rational]) -> Vector {
    v.iter().map(|x| -x).collect()
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn norm_inf(v: &[Rational]) -> Rational {
    v.iter().map(Signed::abs).max().unwrap_or_else(Rational::zero)
}

pub fn norm_l1(v: &[Rational]) -> Rational {
    v.iter().map(Signed::abs).fold(Rational::zero(), |a, x| a + x)
}

/// Scales a vector to coprime integer entries; the sign is preserved.
pub fn primitive_integer(v: &[Rational]) -> Vector {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &gcd)).collect()
}

/// Nonnegative rational or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(Rational),
    Infinity,
}

impl ExtRational {
    pub fn zero() -> Self {
        ExtRational::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRational::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(v) => Some(v),
            ExtRational::Infinity => None,
        }
    }

    /// `1/∞ = 0`; the reciprocal of zero is an error.
    pub fn recip(&self) -> Result<ExtRational> {
        match self {
            ExtRational::Infinity => Ok(ExtRational::zero()),
            ExtRational::Finite(v) if v.is_zero() => {
                Err(Error::InvalidArgument("reciprocal of zero".into()))
            }
            ExtRational::Finite(v) => Ok(ExtRational::Finite(v.recip())),
        }
    }

    pub fn decimal(&self, digits: usize) -> String {
        match self {
            ExtRational::Finite(v) => to_decimal(v, digits),
            ExtRational::Infinity => "inf".to_string(),
        }
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
            (ExtRational::Finite(_), ExtRational::Infinity) => Ordering::Less,
            (ExtRational::Infinity, ExtRational::Finite(_)) => Ordering::Greater,
            (ExtRational::Infinity, ExtRational::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for ExtRational {
    fn from(v: Rational) -> Self {
        ExtRational::Finite(v)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(v) => write!(f, "{v}"),
            ExtRational::Infinity => f.write_str("inf"),
        }
    }
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows. `cols` fixes the width so that empty row lists
    /// still carry a column dimension.
    pub fn from_rows(cols: usize, rows: &[Vector]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::dimension(format!("matrix row {}", i + 1), cols, r.len()));
            }
            data.extend(r.iter().cloned());
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    /// Builds a matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Result<Self> {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::dimension(format!("matrix column {}", j + 1), rows, c.len()));
            }
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vector> = rows.iter().map(|r| vector(r)).collect();
        Matrix::from_rows(cols, &rows).expect("ragged integer matrix")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        self.rows().map(<[Rational]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Submatrix made of the listed rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend(self.row(i).iter().cloned());
        }
        Matrix { rows: indices.len(), cols: self.cols, data }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::dimension("matrix-vector product", self.cols, v.len()));
        }
        Ok(self.rows().map(|r| dot(r, v)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Rank over the rationals by fraction-free (Bareiss) elimination on the
    /// row-wise integer-scaled matrix.
    pub fn rank(&self) -> usize {
        let mut work: Vec<Vec<BigInt>> = self
            .rows()
            .map(|r| primitive_integer(r).into_iter().map(|x| x.to_integer()).collect())
            .collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !work[r][col].is_zero()) else {
                continue;
            };
            work.swap(rank, p);
            let pivot = work[rank][col].clone();
            for r in rank + 1..rows {
                let factor = work[r][col].clone();
                for c in col..cols {
                    let v = (&pivot * &work[r][c] - &factor * &work[rank][c]) / &prev;
                    work[r][c] = v;
                }
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form; returns the reduced matrix and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m[(row, col)].recip();
            for c in col..m.cols {
                let v = &m[(row, c)] * &inv;
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    let v = &m[(r, c)] - &factor * &m[(row, c)];
                    m[(r, c)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Basis of `{z : Mz = 0}` read off the reduced echelon form, one vector per
    /// free column, scaled to coprime integers with a positive free coordinate.
    pub fn null_space_basis(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut z = zeros(self.cols);
                z[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    z[p] = -r[(i, f)].clone();
                }
                primitive_integer(&z)
            })
            .collect()
    }

    /// Solves `Mλ = v`, distinguishing inconsistency from non-uniqueness.
    pub fn solve_unique(&self, v: &[Rational]) -> Result<Solve> {
        if v.len() != self.rows {
            return Err(Error::dimension("right-hand side", self.rows, v.len()));
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = v[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(Solve::NoSolution);
        }
        if pivots.len() < self.cols {
            return Ok(Solve::NotUnique);
        }
        Ok(Solve::Unique((0..self.cols).map(|i| r[(i, self.cols)].clone()).collect()))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Outcome of [`Matrix::solve_unique`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solve {
    Unique(Vector),
    NoSolution,
    NotUnique,
}

/// Rank of a list of equally sized vectors.
pub fn rank_of(vectors: &[Vector], dim: usize) -> usize {
    Matrix::from_rows(dim, vectors).map(|m| m.rank()).unwrap_or(0)
}
