//! Truncated multivariate Taylor jets over the rationals.
//!
//! A [`Jet`] is a polynomial in formal infinitesimals `e_0..e_{k-1}` with
//! every monomial of total degree above the space's order dropped. Ring
//! operations on jets are exact, so evaluating a polynomial function of
//! `x + e` yields its Taylor coefficients up to that order.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::poly::Rational;

#[derive(Debug)]
pub struct JetSpace {
    vars: usize,
    order: usize,
    monomials: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    /// `partners[i]` holds `(j, k)` with monomial i times monomial j equal
    /// to monomial k, for every product that survives truncation.
    partners: Vec<Vec<(usize, usize)>>,
}

impl JetSpace {
    pub fn new(vars: usize, order: usize) -> Arc<Self> {
        let mut monomials = Vec::new();
        for total in 0..=order {
            let mut current = vec![0; vars];
            push_compositions(&mut monomials, &mut current, 0, total);
        }
        let index: HashMap<Vec<usize>, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let partners = monomials
            .iter()
            .map(|a| {
                monomials
                    .iter()
                    .enumerate()
                    .filter_map(|(j, b)| {
                        let sum: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        index.get(&sum).map(|&k| (j, k))
                    })
                    .collect()
            })
            .collect();
        Arc::new(Self {
            vars,
            order,
            monomials,
            index,
            partners,
        })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Exponent vectors in graded order; index 0 is the constant monomial.
    pub fn monomials(&self) -> &[Vec<usize>] {
        &self.monomials
    }

    pub fn monomial_index(&self, exponents: &[usize]) -> Option<usize> {
        self.index.get(exponents).copied()
    }
}

fn push_compositions(out: &mut Vec<Vec<usize>>, current: &mut [usize], pos: usize, left: usize) {
    if pos + 1 >= current.len() {
        if let Some(last) = current.last_mut() {
            *last = left;
            out.push(current.to_vec());
        } else if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for e in (0..=left).rev() {
        current[pos] = e;
        push_compositions(out, current, pos + 1, left - e);
    }
    current[pos] = 0;
}

#[derive(Clone, Debug)]
pub struct Jet {
    space: Arc<JetSpace>,
    coeffs: Vec<Rational>,
}

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) && self.coeffs == other.coeffs
    }
}

impl Jet {
    pub fn zero(space: &Arc<JetSpace>) -> Self {
        Self {
            space: Arc::clone(space),
            coeffs: vec![Rational::zero(); space.len()],
        }
    }

    pub fn constant(space: &Arc<JetSpace>, value: Rational) -> Self {
        let mut out = Self::zero(space);
        out.coeffs[0] = value;
        out
    }

    /// `value + e_var`. With order 0 the infinitesimal is truncated away.
    pub fn variable(space: &Arc<JetSpace>, value: Rational, var: usize) -> Self {
        let mut out = Self::constant(space, value);
        let mut exps = vec![0; space.vars];
        exps[var] = 1;
        if let Some(i) = space.monomial_index(&exps) {
            out.coeffs[i] = Rational::one();
        }
        out
    }

    pub fn space(&self) -> &Arc<JetSpace> {
        &self.space
    }

    pub fn constant_part(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coefficient of `prod e_i^{exponents[i]}`; zero beyond the truncation.
    pub fn coeff(&self, exponents: &[usize]) -> Rational {
        self.space
            .monomial_index(exponents)
            .map(|i| self.coeffs[i].clone())
            .unwrap_or_default()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            space: Arc::clone(&self.space),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Inverse of a unit via the geometric series in the nilpotent part.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let c_inv = self.coeffs[0].recip();
        // self = c (1 + x)  =>  self^-1 = c^-1 sum (-x)^t
        let mut neg_x = self.scale(&-c_inv.clone());
        neg_x.coeffs[0] = Rational::zero();
        let mut term = Self::constant(&self.space, Rational::one());
        let mut sum = term.clone();
        for _ in 0..self.space.order {
            term = &term * &neg_x;
            sum = &sum + &term;
        }
        Some(sum.scale(&c_inv))
    }

    fn check_space(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.space, &other.space),
            "jets from different spaces"
        );
    }

    fn support_len(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// `self -= a * b` without an intermediate allocation.
    pub fn sub_mul_assign(&mut self, a: &Jet, b: &Jet) {
        self.check_space(a);
        self.check_space(b);
        // walk the partner lists of the sparser factor
        let (a, b) = if a.support_len() <= b.support_len() {
            (a, b)
        } else {
            (b, a)
        };
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for &(j, k) in &self.space.partners[i] {
                let y = &b.coeffs[j];
                if !y.is_zero() {
                    self.coeffs[k] -= x * y;
                }
            }
        }
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.check_space(rhs);
        Jet {
            space: Arc::clone(&self.space),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.check_space(rhs);
        Jet {
            space: Arc::clone(&self.space),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet {
            space: Arc::clone(&self.space),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        let mut out = Jet::zero(&self.space);
        out.sub_mul_assign(self, rhs);
        -&out
    }
}

/// Jet with integer coefficients; the working type of [`jet_determinant`].
#[derive(Clone, Debug)]
struct IntJet {
    coeffs: Vec<BigInt>,
}

impl IntJet {
    fn zero(len: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); len],
        }
    }

    fn one(len: usize) -> Self {
        let mut out = Self::zero(len);
        out.coeffs[0] = BigInt::one();
        out
    }

    fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn support_len(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// `self += sign * a * b`.
    fn add_mul(&mut self, space: &JetSpace, a: &IntJet, b: &IntJet, negative: bool) {
        let (a, b) = if a.support_len() <= b.support_len() {
            (a, b)
        } else {
            (b, a)
        };
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for &(j, k) in &space.partners[i] {
                let y = &b.coeffs[j];
                if y.is_zero() {
                    continue;
                }
                if negative {
                    self.coeffs[k] -= x * y;
                } else {
                    self.coeffs[k] += x * y;
                }
            }
        }
    }

    fn mul(&self, space: &JetSpace, other: &IntJet) -> IntJet {
        let mut out = IntJet::zero(self.coeffs.len());
        out.add_mul(space, self, other, false);
        out
    }

    /// `self / unit`, where the quotient is known to have integer
    /// coefficients. Solved degree by degree; monomials are graded.
    fn div_exact(mut self, space: &JetSpace, unit: &IntJet) -> IntJet {
        let c = &unit.coeffs[0];
        if unit.is_constant() {
            for x in &mut self.coeffs {
                *x = &*x / c;
            }
            return self;
        }
        let mut q = IntJet::zero(self.coeffs.len());
        for k in 0..self.coeffs.len() {
            if self.coeffs[k].is_zero() {
                continue;
            }
            let (qk, rem) = self.coeffs[k].div_rem(c);
            debug_assert!(rem.is_zero(), "inexact jet division");
            for &(i, k2) in &space.partners[k] {
                if i != 0 && !unit.coeffs[i].is_zero() {
                    self.coeffs[k2] -= &qk * &unit.coeffs[i];
                }
            }
            q.coeffs[k] = qk;
        }
        q
    }
}

/// Determinant of a square matrix of jets.
///
/// Rows are scaled to integer coefficients and reduced by fraction-free
/// (Bareiss) elimination with unit pivots, sparsest row first. If no unit
/// pivot remains, the leftover block has every entry in the maximal ideal,
/// so its `k x k` determinant has no terms below degree `k`: it is zero when
/// `k` exceeds the truncation order, and is otherwise expanded by minors
/// without division.
pub fn jet_determinant(a: Vec<Vec<Jet>>, space: &Arc<JetSpace>) -> Jet {
    let n = a.len();
    let len = space.len();
    let mut scale = BigInt::one();
    let mut m: Vec<Vec<IntJet>> = a
        .into_iter()
        .map(|row| {
            let lcm = row
                .iter()
                .flat_map(|x| x.coeffs.iter())
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            scale *= &lcm;
            row.into_iter()
                .map(|x| IntJet {
                    coeffs: x
                        .coeffs
                        .iter()
                        .map(|c| c.numer() * (&lcm / c.denom()))
                        .collect(),
                })
                .collect()
        })
        .collect();

    let mut prev = IntJet::one(len);
    let mut negate = false;
    let mut step = 0;
    while step < n {
        let pivot = (step..n)
            .filter_map(|i| {
                let weight: usize = m[i][step..].iter().map(IntJet::support_len).sum();
                (step..n)
                    .filter(|&j| m[i][j].is_unit())
                    .min_by_key(|&j| m[i][j].support_len())
                    .map(|j| (weight, i, j))
            })
            .min()
            .map(|(_, i, j)| (i, j));
        let Some((pi, pj)) = pivot else { break };
        if pi != step {
            m.swap(pi, step);
            negate = !negate;
        }
        if pj != step {
            for row in m.iter_mut() {
                row.swap(pj, step);
            }
            negate = !negate;
        }
        let (top, bottom) = m.split_at_mut(step + 1);
        let pivot_row = &top[step];
        let p = &pivot_row[step];
        for row in bottom.iter_mut() {
            let lead = std::mem::replace(&mut row[step], IntJet::zero(len));
            for j in step + 1..n {
                // (p a_ij - a_i,step a_step,j) / prev
                let mut t = row[j].mul(space, p);
                if !lead.is_zero() {
                    t.add_mul(space, &lead, &pivot_row[j], true);
                }
                row[j] = t.div_exact(space, &prev);
            }
        }
        prev = top[step][step].clone();
        step += 1;
    }

    let k = n - step;
    let det = if k == 0 {
        prev
    } else if k > space.order() {
        IntJet::zero(len)
    } else {
        let block: Vec<Vec<IntJet>> = m[step..].iter().map(|row| row[step..].to_vec()).collect();
        let mut det = expand_by_minors(&block, space);
        for _ in 1..k {
            det = det.div_exact(space, &prev);
        }
        det
    };
    let sign = if negate {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    Jet {
        space: Arc::clone(space),
        coeffs: det
            .coeffs
            .into_iter()
            .map(|c| Rational::new(c * &sign, scale.clone()))
            .collect(),
    }
}

/// Division-free determinant by dynamic programming over column subsets.
fn expand_by_minors(b: &[Vec<IntJet>], space: &JetSpace) -> IntJet {
    let k = b.len();
    let len = space.len();
    let mut dp: Vec<Option<IntJet>> = vec![None; 1 << k];
    dp[0] = Some(IntJet::one(len));
    for mask in 0usize..(1 << k) {
        let Some(partial) = dp[mask].take() else {
            continue;
        };
        let row = mask.count_ones() as usize;
        if row == k {
            dp[mask] = Some(partial);
            continue;
        }
        for col in 0..k {
            if mask & (1 << col) != 0 || b[row][col].is_zero() {
                continue;
            }
            let negative = (mask >> (col + 1)).count_ones() % 2 == 1;
            let slot = dp[mask | (1 << col)].get_or_insert_with(|| IntJet::zero(len));
            slot.add_mul(space, &partial, &b[row][col], negative);
        }
    }
    dp[(1 << k) - 1].take().unwrap_or_else(|| IntJet::zero(len))
}
