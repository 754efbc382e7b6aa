//! Sylvester-matrix resultants and discriminants over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{rat, Polynomial, Rational, RootSpec};

/// Which polynomial's coefficients a row (or a derivative) refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// Coefficients `a_0..a_n` of `f`.
    A,
    /// Coefficients `b_0..b_m` of `g`.
    B,
}

/// The `(m+n)`-square Sylvester matrix of `f` (degree `n`) and `g`
/// (degree `m`). Rows `0..m` hold `f` shifted right by the row index, rows
/// `m..m+n` hold `g` shifted likewise.
#[derive(Clone, Debug, PartialEq)]
pub struct SylvesterMatrix {
    n: usize,
    m: usize,
    rows: Vec<Vec<Rational>>,
}

impl SylvesterMatrix {
    pub fn new(f: &Polynomial, g: &Polynomial) -> Result<Self> {
        let (n, m) = resultant_degrees(f, g)?;
        let size = n + m;
        let mut rows = Vec::with_capacity(size);
        for t in 0..m {
            let mut row = vec![Rational::zero(); size];
            row[t..t + n + 1].clone_from_slice(f.coeffs());
            rows.push(row);
        }
        for t in 0..n {
            let mut row = vec![Rational::zero(); size];
            row[t..t + m + 1].clone_from_slice(g.coeffs());
            rows.push(row);
        }
        Ok(Self { n, m, rows })
    }

    pub fn deg_f(&self) -> usize {
        self.n
    }

    pub fn deg_g(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        self.n + self.m
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<Rational>> {
        self.rows
    }

    /// Number of coefficients on `side` (`n+1` for A, `m+1` for B).
    pub fn coeff_count(&self, side: Side) -> usize {
        match side {
            Side::A => self.n + 1,
            Side::B => self.m + 1,
        }
    }

    /// Rows that carry the coefficients of `side`, each paired with the
    /// column offset of coefficient 0 in that row.
    pub fn rows_for(&self, side: Side) -> impl Iterator<Item = (usize, usize)> {
        let (start, count) = match side {
            Side::A => (0, self.m),
            Side::B => (self.m, self.n),
        };
        (0..count).map(move |t| (start + t, t))
    }

    pub fn determinant(&self) -> Rational {
        bareiss_rational(&self.rows)
    }
}

/// Degrees `(n, m)` after checking that both inputs are usable.
pub(crate) fn resultant_degrees(f: &Polynomial, g: &Polynomial) -> Result<(usize, usize)> {
    let (Some(n), Some(m)) = (f.degree(), g.degree()) else {
        return Err(Error::DegenerateInput(
            "resultant of the zero polynomial".into(),
        ));
    };
    if n == 0 && m == 0 {
        return Err(Error::DegenerateInput("resultant of two constants".into()));
    }
    Ok((n, m))
}

pub fn sylvester_matrix(f: &Polynomial, g: &Polynomial) -> Result<SylvesterMatrix> {
    SylvesterMatrix::new(f, g)
}

fn check_square<T>(rows: &[Vec<T>]) -> Result<()> {
    let size = rows.len();
    match rows.iter().position(|r| r.len() != size) {
        Some(bad_row) => Err(Error::MalformedMatrix {
            rows: size,
            bad_row,
            cols: rows[bad_row].len(),
        }),
        None => Ok(()),
    }
}

/// Exact determinant. Each row is scaled to integers, the integer matrix is
/// reduced with fraction-free (Bareiss) elimination, and the row scales are
/// divided back out.
pub fn determinant(rows: &[Vec<Rational>]) -> Result<Rational> {
    check_square(rows)?;
    Ok(bareiss_rational(rows))
}

fn bareiss_rational(rows: &[Vec<Rational>]) -> Rational {
    let mut scale = BigInt::one();
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let out = row.iter().map(|x| x.numer() * (&l / x.denom())).collect();
            scale *= l;
            out
        })
        .collect();
    Rational::new(bareiss_integer(ints), scale)
}

/// Fraction-free Gaussian elimination; every division is exact.
pub fn bareiss_integer(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            let lead = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let v = &row[j] * &pivot_row[k] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// `R(f, g) = a0^m b0^n prod (alpha_i - beta_j)`, computed as the Sylvester
/// determinant. A constant `g = b0` (with nonconstant `f`) gives `b0^n`.
pub fn resultant(f: &Polynomial, g: &Polynomial) -> Result<Rational> {
    Ok(SylvesterMatrix::new(f, g)?.determinant())
}

/// `a0^m * prod g(z_i)` over the roots of `f` with multiplicity.
pub fn resultant_from_roots(spec_f: &RootSpec, g: &Polynomial) -> Result<Rational> {
    let Some(m) = g.degree() else {
        return Err(Error::DegenerateInput(
            "resultant of the zero polynomial".into(),
        ));
    };
    let lead = num_traits::pow(spec_f.leading.clone(), m);
    Ok(spec_f.roots.iter().fold(lead, |acc, (r, mult)| {
        acc * num_traits::pow(g.evaluate(r), *mult)
    }))
}

/// `D(f) = (-1)^(n(n-1)/2) R(f, f') / a0`.
///
/// This is the usual normalization, under which `z^2 + bz + c` has
/// discriminant `b^2 - 4c`. Downstream recovery only uses zero tests and
/// ratios, which do not depend on the constant.
pub fn discriminant(f: &Polynomial) -> Result<Rational> {
    let n = match f.degree() {
        Some(n) if n >= 2 => n,
        _ => {
            return Err(Error::DegenerateInput(
                "discriminant needs degree at least 2".into(),
            ))
        }
    };
    let r = resultant(f, &f.derivative(1))?;
    let sign = if (n * (n - 1) / 2) % 2 == 0 {
        rat(1)
    } else {
        rat(-1)
    };
    Ok(sign * r / f.coeffs()[0].clone())
}
