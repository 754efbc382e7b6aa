//! Mixed partial derivatives of `R(f, g)` with respect to the coefficients of
//! either polynomial.
//!
//! The resultant is a polynomial in `a_0..a_n, b_0..b_m`, and every entry of
//! the Sylvester matrix is an affine function of a single coefficient, so its
//! partials can be computed two unrelated ways:
//!
//! * [`partial`] perturbs each differentiated coefficient by a formal
//!   infinitesimal and takes one determinant over truncated jets;
//! * [`partial_rowsum`] uses multilinearity in the rows: differentiate one
//!   row per derivative, distinct rows only.
//!
//! The closed forms [`closed_form_partial_b`] and [`closed_form_partial_a`]
//! evaluate the same quantity from root data when the two polynomials share a
//! multiple root.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::jet::{jet_determinant, Jet, JetSpace};
use crate::poly::{factorial, rat, rat_pow, Polynomial, Rational, RootSpec};
use crate::resultant::{determinant, Side, SylvesterMatrix};

/// Which side to differentiate and the multiset of coefficient indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeRequest {
    side: Side,
    indices: Vec<usize>,
}

impl DerivativeRequest {
    pub fn new(side: Side, mut indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::BadRequest(
                "derivative order must be at least 1".into(),
            ));
        }
        indices.sort_unstable();
        Ok(Self { side, indices })
    }

    /// `index` repeated `times` times.
    pub fn pure(side: Side, index: usize, times: usize) -> Result<Self> {
        Self::new(side, vec![index; times])
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Sorted indices.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn order(&self) -> usize {
        self.indices.len()
    }

    pub fn index_sum(&self) -> usize {
        self.indices.iter().sum()
    }

    /// Distinct indices with their repeat counts.
    pub fn counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for &j in &self.indices {
            *out.entry(j).or_insert(0) += 1;
        }
        out
    }

    fn check_bounds(&self, sylvester: &SylvesterMatrix) -> Result<()> {
        let limit = sylvester.coeff_count(self.side);
        match self.indices.iter().find(|&&j| j >= limit) {
            Some(j) => Err(Error::BadRequest(format!(
                "index {j} out of range for side {:?} with {limit} coefficients",
                self.side
            ))),
            None => Ok(()),
        }
    }
}

/// Exact value of the requested mixed partial of `R(f, g)`.
pub fn partial(f: &Polynomial, g: &Polynomial, req: &DerivativeRequest) -> Result<Rational> {
    let sylvester = SylvesterMatrix::new(f, g)?;
    req.check_bounds(&sylvester)?;
    if req.order() > sylvester.rows_for(req.side).count() {
        return Ok(Rational::zero());
    }

    let counts = req.counts();
    let space = JetSpace::new(counts.len(), req.order());
    let mut grid: Vec<Vec<Jet>> = sylvester
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| Jet::constant(&space, x.clone()))
                .collect()
        })
        .collect();
    for (row, offset) in sylvester.rows_for(req.side) {
        for (var, &j) in counts.keys().enumerate() {
            let cell = &mut grid[row][offset + j];
            *cell = Jet::variable(&space, cell.constant_part().clone(), var);
        }
    }
    let det = jet_determinant(grid, &space);

    let exponents: Vec<usize> = counts.values().copied().collect();
    let taylor = det.coeff(&exponents);
    Ok(exponents.iter().fold(taylor, |acc, &c| acc * factorial(c)))
}

/// Every partial of order `1..=order` on `side` from a single jet
/// determinant with one infinitesimal per coefficient. Each entry is the
/// sorted index multiset and its value.
pub fn partials_up_to(
    f: &Polynomial,
    g: &Polynomial,
    side: Side,
    order: usize,
) -> Result<Vec<(Vec<usize>, Rational)>> {
    let sylvester = SylvesterMatrix::new(f, g)?;
    let vars = sylvester.coeff_count(side);
    let space = JetSpace::new(vars, order);
    let mut grid: Vec<Vec<Jet>> = sylvester
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| Jet::constant(&space, x.clone()))
                .collect()
        })
        .collect();
    for (row, offset) in sylvester.rows_for(side) {
        for j in 0..vars {
            let cell = &mut grid[row][offset + j];
            *cell = Jet::variable(&space, cell.constant_part().clone(), j);
        }
    }
    let det = jet_determinant(grid, &space);
    Ok(space
        .monomials()
        .iter()
        .skip(1)
        .map(|exps| {
            let indices: Vec<usize> = exps
                .iter()
                .enumerate()
                .flat_map(|(j, &e)| std::iter::repeat_n(j, e))
                .collect();
            let value = exps
                .iter()
                .fold(det.coeff(exps), |acc, &e| acc * factorial(e));
            (indices, value)
        })
        .collect())
}

/// The same partial as [`partial`], summed over ordered tuples of distinct
/// rows with each row replaced by its derivative.
pub fn partial_rowsum(f: &Polynomial, g: &Polynomial, req: &DerivativeRequest) -> Result<Rational> {
    let sylvester = SylvesterMatrix::new(f, g)?;
    req.check_bounds(&sylvester)?;
    let rows: Vec<(usize, usize)> = sylvester.rows_for(req.side).collect();
    let size = sylvester.size();
    let mut total = Rational::zero();
    let mut work = sylvester.into_rows();
    let mut used = vec![false; rows.len()];
    rowsum_recurse(req.indices(), &rows, size, &mut work, &mut used, &mut total)?;
    Ok(total)
}

fn rowsum_recurse(
    indices: &[usize],
    rows: &[(usize, usize)],
    size: usize,
    work: &mut [Vec<Rational>],
    used: &mut [bool],
    total: &mut Rational,
) -> Result<()> {
    let Some((&j, rest)) = indices.split_first() else {
        *total += determinant(work)?;
        return Ok(());
    };
    for (slot, &(row, offset)) in rows.iter().enumerate() {
        if used[slot] {
            continue;
        }
        let mut unit = vec![Rational::zero(); size];
        unit[offset + j] = Rational::one();
        let saved = std::mem::replace(&mut work[row], unit);
        used[slot] = true;
        rowsum_recurse(rest, rows, size, work, used, total)?;
        used[slot] = false;
        work[row] = saved;
    }
    Ok(())
}

/// All first partials on one side, `[dR/dx_0, .., dR/dx_last]`.
pub fn gradient(f: &Polynomial, g: &Polynomial, side: Side) -> Result<Vec<Rational>> {
    let count = SylvesterMatrix::new(f, g)?.coeff_count(side);
    (0..count)
        .map(|j| partial(f, g, &DerivativeRequest::pure(side, j, 1)?))
        .collect()
}

/// First root, its multiplicity, and the remaining roots.
type RootSplit<'a> = (&'a Rational, usize, &'a [(Rational, usize)]);

fn split_first_root(spec: &RootSpec) -> Result<RootSplit<'_>> {
    match spec.roots.split_first() {
        Some(((w, s), rest)) => Ok((w, *s, rest)),
        None => Err(Error::BadRequest("root spec has no roots".into())),
    }
}

/// Order-`s` partial of `R(f, g)` on side B from root data, where the first
/// root `w` of `spec_f` has multiplicity `s` and is also a root of `g`:
/// `a0^m s! w^(sm - sum j) prod_{other roots z} g(z)`.
pub fn closed_form_partial_b(
    spec_f: &RootSpec,
    g: &Polynomial,
    indices: &[usize],
) -> Result<Rational> {
    let m = g
        .degree()
        .ok_or_else(|| Error::DegenerateInput("g is the zero polynomial".into()))?;
    let (w, s, rest) = split_first_root(spec_f)?;
    if indices.len() != s {
        return Err(Error::BadRequest(format!(
            "closed form needs exactly {s} indices, got {}",
            indices.len()
        )));
    }
    if let Some(j) = indices.iter().find(|&&j| j > m) {
        return Err(Error::BadRequest(format!("index {j} exceeds deg g = {m}")));
    }
    if !g.evaluate(w).is_zero() {
        return Err(Error::BadRequest(format!("{w} is not a root of g")));
    }
    let exponent = (s * m) as i64 - indices.iter().sum::<usize>() as i64;
    let others = rest.iter().fold(Rational::one(), |acc, (z, mult)| {
        acc * num_traits::pow(g.evaluate(z), *mult)
    });
    Ok(num_traits::pow(spec_f.leading.clone(), m) * factorial(s) * rat_pow(w, exponent)? * others)
}

/// Mirror of [`closed_form_partial_b`] for side A: the first root `w` of
/// `spec_g` has multiplicity `p` and is a root of `f`;
/// `(-1)^(mn) b0^n p! w^(pn - sum i) prod_{other roots y} f(y)`.
pub fn closed_form_partial_a(
    spec_g: &RootSpec,
    f: &Polynomial,
    indices: &[usize],
) -> Result<Rational> {
    let n = f
        .degree()
        .ok_or_else(|| Error::DegenerateInput("f is the zero polynomial".into()))?;
    let m = spec_g.degree();
    let (w, p, rest) = split_first_root(spec_g)?;
    if indices.len() != p {
        return Err(Error::BadRequest(format!(
            "closed form needs exactly {p} indices, got {}",
            indices.len()
        )));
    }
    if let Some(i) = indices.iter().find(|&&i| i > n) {
        return Err(Error::BadRequest(format!("index {i} exceeds deg f = {n}")));
    }
    if !f.evaluate(w).is_zero() {
        return Err(Error::BadRequest(format!("{w} is not a root of f")));
    }
    let sign = if (m * n).is_multiple_of(2) {
        rat(1)
    } else {
        rat(-1)
    };
    let exponent = (p * n) as i64 - indices.iter().sum::<usize>() as i64;
    let others = rest.iter().fold(Rational::one(), |acc, (y, mult)| {
        acc * num_traits::pow(f.evaluate(y), *mult)
    });
    Ok(sign
        * num_traits::pow(spec_g.leading.clone(), n)
        * factorial(p)
        * rat_pow(w, exponent)?
        * others)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_i64s(c).unwrap()
    }

    fn spec(roots: &[(i64, usize)]) -> RootSpec {
        RootSpec::monic(roots.iter().map(|&(r, m)| (rat(r), m)).collect()).unwrap()
    }

    fn both(f: &Polynomial, g: &Polynomial, side: Side, idx: &[usize]) -> Rational {
        let req = DerivativeRequest::new(side, idx.to_vec()).unwrap();
        let jet = partial(f, g, &req).unwrap();
        let rows = partial_rowsum(f, g, &req).unwrap();
        assert_eq!(jet, rows, "algorithms disagree for {side:?} {idx:?}");
        jet
    }

    #[test]
    fn double_root_partials() {
        // R as a function of b is (4 b0 + 2 b1 + b2)^2
        let f = p(&[1, -4, 4]);
        let g = p(&[1, 0, -4]);
        assert_eq!(both(&f, &g, Side::B, &[0]), rat(0));
        assert_eq!(both(&f, &g, Side::B, &[2, 2]), rat(2));
        assert_eq!(both(&f, &g, Side::B, &[0, 2]), rat(8));
        assert_eq!(both(&f, &g, Side::B, &[0, 0]), rat(32));
    }

    #[test]
    fn simple_common_root_partials() {
        let f = p(&[1, -4, 3]);
        let g = p(&[1, 1, -2]);
        assert_eq!(both(&f, &g, Side::B, &[2]), rat(10));
        // (-1)^(mn) b0^n w^(n-j) f(-2) with w = 1, f(-2) = 15
        assert_eq!(both(&f, &g, Side::A, &[1]), rat(15));
    }

    #[test]
    fn order_beyond_rows_is_zero() {
        let f = p(&[1, -4, 4]);
        let g = p(&[1, 0, -4]);
        // two rows carry b: a third derivative vanishes
        assert_eq!(both(&f, &g, Side::B, &[0, 1, 2]), rat(0));
        assert_eq!(both(&f, &g, Side::A, &[0, 0, 0]), rat(0));
    }

    #[test]
    fn single_index_is_row_sum() {
        let f = p(&[2, -1, 5]);
        let g = p(&[1, 3, 0, -7]);
        let sylvester = SylvesterMatrix::new(&f, &g).unwrap();
        let size = sylvester.size();
        let mut expected = Rational::zero();
        for (row, offset) in sylvester.rows_for(Side::B) {
            let mut rows = sylvester.rows().to_vec();
            rows[row] = vec![Rational::zero(); size];
            rows[row][offset + 1] = Rational::one();
            expected += determinant(&rows).unwrap();
        }
        assert_eq!(both(&f, &g, Side::B, &[1]), expected);
    }

    #[test]
    fn out_of_range_index() {
        let f = p(&[1, -4, 4]);
        let g = p(&[1, 0, -4]);
        let req = DerivativeRequest::new(Side::B, vec![3]).unwrap();
        assert!(matches!(partial(&f, &g, &req), Err(Error::BadRequest(_))));
        assert!(matches!(
            partial_rowsum(&f, &g, &req),
            Err(Error::BadRequest(_))
        ));
        assert!(DerivativeRequest::new(Side::A, vec![]).is_err());
    }

    #[test]
    fn all_partials_match_single_requests() {
        let f = p(&[2, -1, 0, 5]);
        let g = p(&[1, 3, -7]);
        for side in [Side::A, Side::B] {
            let all = partials_up_to(&f, &g, side, 3).unwrap();
            let expected_count = match side {
                Side::A => 4 + 10 + 20,
                Side::B => 3 + 6 + 10,
            };
            assert_eq!(all.len(), expected_count);
            for (idx, v) in all {
                let req = DerivativeRequest::new(side, idx).unwrap();
                assert_eq!(v, partial(&f, &g, &req).unwrap(), "{req:?}");
            }
        }
    }

    #[test]
    fn gradients() {
        assert_eq!(
            gradient(&p(&[1, -4, 3]), &p(&[1, 1, -2]), Side::B).unwrap(),
            vec![rat(10), rat(10), rat(10)]
        );
        assert_eq!(
            gradient(&p(&[1, -3, 3, -1]), &p(&[1, -2, 1]), Side::B).unwrap(),
            vec![rat(0); 3]
        );
        // proportional to [w^2, w, 1] = [4, 2, 1] with common factor f(-1) = 12
        assert_eq!(
            gradient(&p(&[1, -5, 6]), &p(&[1, -1, -2]), Side::A).unwrap(),
            vec![rat(48), rat(24), rat(12)]
        );
    }

    #[test]
    fn closed_form_b_examples() {
        let g = p(&[1, 0, -4]);
        assert_eq!(
            closed_form_partial_b(&spec(&[(2, 2)]), &g, &[2, 2]).unwrap(),
            rat(2)
        );
        let with_tail = spec(&[(2, 2), (5, 1)]);
        assert_eq!(
            closed_form_partial_b(&with_tail, &g, &[0, 2]).unwrap(),
            rat(168)
        );
        assert_eq!(both(&with_tail.expand(), &g, Side::B, &[0, 2]), rat(168));

        // w = 1 kills the power factor: 2! * g(4)
        let g1 = p(&[1, 2, -3]); // (z - 1)(z + 3)
        let v = closed_form_partial_b(&spec(&[(1, 2), (4, 1)]), &g1, &[0, 1]).unwrap();
        assert_eq!(v, rat(2) * g1.evaluate(&rat(4)));

        assert!(matches!(
            closed_form_partial_b(&spec(&[(2, 2)]), &g, &[2]),
            Err(Error::BadRequest(_))
        ));
        assert!(matches!(
            closed_form_partial_b(&spec(&[(3, 2)]), &g, &[2, 2]),
            Err(Error::BadRequest(_))
        ));
    }

    #[test]
    fn closed_form_a_examples() {
        // p = m = 2 pure power: g = (z-1)^2, f = (z-1)^2 (z-3)
        let f = p(&[1, -5, 7, -3]);
        let spec_g = spec(&[(1, 2)]);
        let v = closed_form_partial_a(&spec_g, &f, &[3, 3]).unwrap();
        assert_eq!(v, both(&f, &spec_g.expand(), Side::A, &[3, 3]));
        assert_eq!(v, rat(2));

        // exponent is p*n - sum(i): w = 2 separates it from p*m - sum(i)
        let f = p(&[1, -5, 6]); // (z-2)(z-3)
        let spec_g = spec(&[(2, 2), (-1, 1)]);
        for idx in [[0, 0], [0, 1], [1, 2], [2, 2]] {
            assert_eq!(
                closed_form_partial_a(&spec_g, &f, &idx).unwrap(),
                both(&f, &spec_g.expand(), Side::A, &idx)
            );
        }
        assert_eq!(
            closed_form_partial_a(&spec_g, &f, &[0, 0]).unwrap(),
            rat(384)
        );
    }
}
