//! Exact rational scalars and dense univariate polynomials.
//!
//! Coefficients are stored in descending powers: index `i` holds the
//! coefficient of `z^(n-i)`, so `[1, -3, 0, 4]` is `z^3 - 3z^2 + 4`.
//! The zero polynomial is the empty coefficient list.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact unbounded-precision fraction, always stored reduced with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p` or `p/q` with an optional leading minus.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let bad = || Error::MalformedPolynomial(format!("bad rational token `{token}`"));
    let t = token.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (t, None),
    };
    let digits_ok = |s: &str, allow_minus: bool| {
        let body = if allow_minus {
            s.strip_prefix('-').unwrap_or(s)
        } else {
            s
        };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits_ok(num, true) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = match den {
        Some(d) if digits_ok(d, false) => d.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::MalformedPolynomial(format!(
            "zero denominator in `{token}`"
        )));
    }
    Ok(Rational::new(n, d))
}

/// Integer power with a possibly negative exponent. Errors on `0^(-k)`.
pub fn rat_pow(base: &Rational, exp: i64) -> Result<Rational> {
    if exp >= 0 {
        return Ok(num_traits::pow(base.clone(), exp as usize));
    }
    if base.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(num_traits::pow(base.recip(), exp.unsigned_abs() as usize))
}

pub fn factorial(k: usize) -> Rational {
    (1..=k).fold(Rational::one(), |acc, i| acc * rat(i as i64))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    /// Stores `coeffs` verbatim. A nonempty list must have a nonzero leading
    /// coefficient.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if let Some(lead) = coeffs.first() {
            if lead.is_zero() {
                return Err(Error::MalformedPolynomial(
                    "leading coefficient is zero".into(),
                ));
            }
        }
        Ok(Self { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// Builds a polynomial from a list that may carry leading zeros.
    fn normalized(mut coeffs: Vec<Rational>) -> Self {
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..lead);
        Self { coeffs }
    }

    pub fn from_roots(spec: &RootSpec) -> Self {
        let mut acc = vec![spec.leading.clone()];
        for (root, mult) in &spec.roots {
            for _ in 0..*mult {
                // acc * (z - root)
                let mut next = acc.clone();
                next.push(Rational::zero());
                for (i, c) in acc.iter().enumerate() {
                    next[i + 1] -= c * root;
                }
                acc = next;
            }
        }
        Self { coeffs: acc }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient `a_i` of `z^(n-i)`.
    pub fn coeff(&self, i: usize) -> Option<&Rational> {
        self.coeffs.get(i)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.first()
    }

    pub fn evaluate(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// k-fold formal derivative; zero polynomial when `k > deg`.
    pub fn derivative(&self, k: usize) -> Self {
        let n = match self.degree() {
            Some(n) if k <= n => n,
            _ => return Self::zero(),
        };
        let coeffs = (0..=n - k)
            .map(|i| {
                // z^(n-i) contributes (n-i)!/(n-i-k)! z^(n-i-k)
                let p = n - i;
                let falling = ((p - k + 1)..=p).fold(1i64, |acc, t| acc * t as i64);
                &self.coeffs[i] * rat(falling)
            })
            .collect();
        Self { coeffs }
    }

    /// Returns `h` with `h(y) = f(y - c)`, so every root moves by `+c`.
    pub fn shift(&self, c: &Rational) -> Self {
        // Horner in the polynomial ring: h = (..(a0 (y - c) + a1)(y - c) + ..)
        let mut acc: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let mut next = acc.clone();
            next.push(Rational::zero());
            for (i, v) in acc.iter().enumerate() {
                next[i + 1] -= v * c;
            }
            let last = next.len() - 1;
            next[last] += a;
            acc = next;
        }
        Self::normalized(acc)
    }

    /// The shift that removes the `z^(n-1)` term: `a1 / (n a0)`.
    pub fn depressing_shift(&self) -> Option<Rational> {
        let n = self.degree().filter(|&n| n >= 1)?;
        Some(&self.coeffs[1] / (&self.coeffs[0] * rat(n as i64)))
    }

    /// Splits `f = z^k g` with `g(0) != 0`.
    pub fn trailing_zero_split(&self) -> Result<(usize, Self)> {
        if self.is_zero() {
            return Err(Error::MalformedPolynomial(
                "cannot split the zero polynomial".into(),
            ));
        }
        let k = self.coeffs.iter().rev().take_while(|c| c.is_zero()).count();
        let keep = self.coeffs.len() - k;
        Ok((
            k,
            Self {
                coeffs: self.coeffs[..keep].to_vec(),
            },
        ))
    }

    /// Synthetic division by `(z - r)`: returns quotient and remainder.
    pub fn divide_linear(&self, r: &Rational) -> (Self, Rational) {
        if self.is_zero() {
            return (Self::zero(), Rational::zero());
        }
        let mut q = Vec::with_capacity(self.coeffs.len());
        let mut acc = Rational::zero();
        for c in &self.coeffs {
            acc = acc * r + c;
            q.push(acc.clone());
        }
        let rem = q.pop().unwrap_or_default();
        (Self { coeffs: q }, rem)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Multiplies by `z^k`.
    pub fn shl(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.extend(std::iter::repeat_n(Rational::zero(), k));
        Self { coeffs }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(n) = self.degree() else {
            return write!(f, "0");
        };
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = n - i;
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            if !unit || p == 0 {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match p {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{p}")?,
            }
        }
        Ok(())
    }
}

/// A polynomial given by its leading coefficient and rational roots with
/// multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSpec {
    pub leading: Rational,
    pub roots: Vec<(Rational, usize)>,
}

impl RootSpec {
    pub fn new(leading: Rational, roots: Vec<(Rational, usize)>) -> Result<Self> {
        if leading.is_zero() {
            return Err(Error::MalformedPolynomial(
                "root spec leading coefficient is zero".into(),
            ));
        }
        if let Some((r, _)) = roots.iter().find(|(_, m)| *m == 0) {
            return Err(Error::MalformedPolynomial(format!(
                "root {r} has multiplicity 0"
            )));
        }
        Ok(Self { leading, roots })
    }

    pub fn monic(roots: Vec<(Rational, usize)>) -> Result<Self> {
        Self::new(Rational::one(), roots)
    }

    pub fn degree(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    pub fn expand(&self) -> Polynomial {
        Polynomial::from_roots(self)
    }

    /// Roots listed with repetition, in spec order.
    pub fn flat_roots(&self) -> impl Iterator<Item = &Rational> {
        self.roots
            .iter()
            .flat_map(|(r, m)| std::iter::repeat_n(r, *m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_i64s(c).unwrap()
    }

    fn spec(lead: i64, roots: &[(i64, usize)]) -> RootSpec {
        RootSpec::new(rat(lead), roots.iter().map(|&(r, m)| (rat(r), m)).collect()).unwrap()
    }

    #[test]
    fn construction() {
        let f = p(&[1, -3, 0, 4]);
        assert_eq!(f.degree(), Some(3));
        assert_eq!(p(&[5]).degree(), Some(0));
        assert!(matches!(
            Polynomial::from_i64s(&[0, 1]),
            Err(Error::MalformedPolynomial(_))
        ));
        assert!(Polynomial::new(vec![]).unwrap().is_zero());
    }

    #[test]
    fn from_roots_examples() {
        assert_eq!(spec(1, &[(2, 2), (-1, 1)]).expand(), p(&[1, -3, 0, 4]));
        assert_eq!(spec(1, &[(1, 3), (3, 1)]).expand(), p(&[1, -6, 12, -10, 3]));
        assert_eq!(spec(3, &[]).expand(), p(&[3]));
    }

    #[test]
    fn root_spec_validation() {
        assert!(RootSpec::new(rat(0), vec![]).is_err());
        assert!(RootSpec::monic(vec![(rat(2), 0)]).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let f = p(&[1, -3, 0, 4]);
        assert_eq!(f.evaluate(&rat(2)), rat(0));
        assert_eq!(f.evaluate(&rat(0)), rat(4));
        assert_eq!(p(&[1, 1, -2]).evaluate(&rat(3)), rat(10));
        assert_eq!(Polynomial::zero().evaluate(&rat(7)), rat(0));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[1, -3, 0, 4]).derivative(1), p(&[3, -6, 0]));
        assert_eq!(p(&[1, -6, 12, -10, 3]).derivative(2), p(&[12, -36, 24]));
        assert!(p(&[1, -3, 0, 4]).derivative(4).is_zero());
        assert_eq!(p(&[1, -3, 0, 4]).derivative(3), p(&[6]));
        assert_eq!(p(&[1, -3, 0, 4]).derivative(0), p(&[1, -3, 0, 4]));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(p(&[1, -4, 4]).shift(&rat(-2)), p(&[1, 0, 0]));
        let f = p(&[1, -3, 0, 4]);
        let c = f.depressing_shift().unwrap();
        assert_eq!(c, rat(-1));
        let h = f.shift(&c);
        // f(y + 1) = y^3 - 3y + 2
        assert_eq!(h, p(&[1, 0, -3, 2]));
        assert_eq!(f.shift(&rat(0)), f);
    }

    #[test]
    fn trailing_zero_split_examples() {
        assert_eq!(
            p(&[1, -1, 0, 0]).trailing_zero_split().unwrap(),
            (2, p(&[1, -1]))
        );
        let f = p(&[1, -3, 0, 4]);
        assert_eq!(f.trailing_zero_split().unwrap(), (0, f.clone()));
        assert_eq!(p(&[1, 0]).trailing_zero_split().unwrap(), (1, p(&[1])));
        assert!(Polynomial::zero().trailing_zero_split().is_err());
    }

    #[test]
    fn parse_rational_tokens() {
        assert_eq!(parse_rational("-3/4").unwrap(), frac(-3, 4));
        assert_eq!(parse_rational("6/4").unwrap(), frac(3, 2));
        assert_eq!(parse_rational("12").unwrap(), rat(12));
        for bad in ["", "-", "1/0", "1/-2", "a", "1.5", "--1", "1/"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -3, 0, 4]).to_string(), "z^3 - 3z^2 + 4");
        assert_eq!(p(&[-1, 1]).to_string(), "-z + 1");
        assert_eq!(Polynomial::zero().to_string(), "0");
        let h = Polynomial::new(vec![frac(1, 2), frac(-3, 4)]).unwrap();
        assert_eq!(h.to_string(), "(1/2)z - (3/4)");
    }

    #[test]
    fn rat_pow_negative() {
        assert_eq!(rat_pow(&rat(2), -2).unwrap(), frac(1, 4));
        assert!(rat_pow(&rat(0), -1).is_err());
        assert_eq!(factorial(4), rat(24));
    }
}
