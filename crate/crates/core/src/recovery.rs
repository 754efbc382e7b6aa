//! Multiplicity detection through the chain `R(f, f^(k))` and certified
//! recovery of multiple and common roots as ratios of resultant partials.
//!
//! Every recovery returns a [`RootCertificate`] listing each hypothesis it
//! checked together with the exact value it saw. A certificate is only
//! returned once the recovered root has also been confirmed by evaluating
//! the polynomial and its derivatives directly; otherwise the caller gets
//! [`Error::NotCertified`] naming the first failed condition.

use std::fmt;

use num_traits::Zero;

use crate::calculus::{gradient, partial, DerivativeRequest};
use crate::error::{Error, Result};
use crate::poly::{rat_pow, Polynomial, Rational};
use crate::resultant::{resultant, Side};

#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub name: String,
    pub value: Rational,
    pub passed: bool,
}

impl Condition {
    fn zero(name: impl Into<String>, value: Rational) -> Self {
        let passed = value.is_zero();
        Self {
            name: name.into(),
            value,
            passed,
        }
    }

    fn nonzero(name: impl Into<String>, value: Rational) -> Self {
        let passed = !value.is_zero();
        Self {
            name: name.into(),
            value,
            passed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Unique simple common root of two polynomials from first partials.
    SimpleCommon,
    /// Multiple root from the A-side gradient of `R(f, f^(s-1))`.
    FirstOrder,
    /// Multiple root from order-`s` B-side partials of `R(f, f')`.
    HigherOrder,
    /// Common root of multiplicity `s` in `f` and `p` in `g`.
    PairMultiple,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::SimpleCommon => "simple-common",
            Route::FirstOrder => "first-order",
            Route::HigherOrder => "higher-order",
            Route::PairMultiple => "pair-multiple",
        }
    }

    /// What the route assumes about the roots other than the recovered one.
    pub fn hypothesis(self) -> &'static str {
        match self {
            Route::SimpleCommon => "exactly one common root, simple in both polynomials",
            Route::FirstOrder => "every other root has multiplicity below s",
            Route::HigherOrder => "every other root is simple",
            Route::PairMultiple => "exactly one common root",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootCertificate {
    pub root: Rational,
    pub multiplicity_in_f: usize,
    pub multiplicity_in_g: Option<usize>,
    pub route: Route,
    pub conditions: Vec<Condition>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicityReport {
    /// Power of `z` split off before running the chain.
    pub zero_root_multiplicity: usize,
    /// `f / z^k`, the polynomial the chain was computed on.
    pub reduced: Polynomial,
    /// `(k, R(f, f^(k)))` for `k = 1..` up to the first nonzero value.
    pub chain: Vec<(usize, Rational)>,
    /// Smallest `k` with a nonzero chain value; 1 means squarefree, 0 means
    /// the reduced factor is constant. Only a candidate: a simple root of
    /// `f` that is also a root of `f^(k)`, `k >= 2`, makes the chain
    /// overshoot.
    pub s_max: usize,
}

/// Tracks the conditions evaluated so far and turns a failure into
/// [`Error::NotCertified`].
#[derive(Default)]
struct Checklist {
    conditions: Vec<Condition>,
}

impl Checklist {
    fn require(&mut self, c: Condition) -> Result<()> {
        let passed = c.passed;
        let name = c.name.clone();
        self.conditions.push(c);
        if passed {
            Ok(())
        } else {
            Err(Error::NotCertified {
                condition: name,
                conditions: self.conditions.clone(),
            })
        }
    }

    /// `p^(k)(w) = 0` for `k < mult` and `p^(mult)(w) != 0`.
    fn direct_multiplicity(
        &mut self,
        label: &str,
        p: &Polynomial,
        w: &Rational,
        mult: usize,
    ) -> Result<()> {
        for k in 0..mult {
            let v = p.derivative(k).evaluate(w);
            self.require(Condition::zero(format!("{label}^({k})(w) = 0"), v))?;
        }
        let v = p.derivative(mult).evaluate(w);
        self.require(Condition::nonzero(format!("{label}^({mult})(w) != 0"), v))
    }

    fn finish(self, root: Rational, mf: usize, mg: Option<usize>, route: Route) -> RootCertificate {
        RootCertificate {
            root,
            multiplicity_in_f: mf,
            multiplicity_in_g: mg,
            route,
            conditions: self.conditions,
            verified: true,
        }
    }
}

fn degree_with_nonzero_constant(p: &Polynomial, label: &str) -> Result<usize> {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => {
            return Err(Error::DegenerateInput(format!(
                "{label} must be nonconstant"
            )))
        }
    };
    if p.coeffs()[n].is_zero() {
        return Err(Error::DegenerateInput(format!(
            "{label} has a zero constant term; split off the power of z first"
        )));
    }
    Ok(n)
}

fn ratio(num: &Rational, den: &Rational) -> Result<Rational> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(num / den)
}

fn b(indices: Vec<usize>) -> Result<DerivativeRequest> {
    DerivativeRequest::new(Side::B, indices)
}

fn a(indices: Vec<usize>) -> Result<DerivativeRequest> {
    DerivativeRequest::new(Side::A, indices)
}

/// Runs the chain `R(f, f^(k))`, `k = 1, 2, ..`, on `f` with its power of
/// `z` removed, stopping at the first nonzero value.
pub fn detect_multiplicity(f: &Polynomial) -> Result<MultiplicityReport> {
    if f.degree().unwrap_or(0) == 0 {
        return Err(Error::DegenerateInput(
            "multiplicity detection needs a nonconstant polynomial".into(),
        ));
    }
    let (zero_root_multiplicity, reduced) = f.trailing_zero_split()?;
    let n = reduced.degree().unwrap_or(0);
    let mut chain = Vec::new();
    let mut s_max = 0;
    for k in 1..=n {
        let r = resultant(&reduced, &reduced.derivative(k))?;
        let stop = !r.is_zero();
        chain.push((k, r));
        if stop {
            s_max = k;
            break;
        }
    }
    Ok(MultiplicityReport {
        zero_root_multiplicity,
        reduced,
        chain,
        s_max,
    })
}

/// Unique simple common root `w` of `f` and `g`, read off as
/// `(dR/da_{n-1}) / (dR/da_n)` and cross-checked against
/// `(dR/db_{m-1}) / (dR/db_m)`.
pub fn simple_common_root(f: &Polynomial, g: &Polynomial) -> Result<RootCertificate> {
    let n = degree_with_nonzero_constant(f, "f")?;
    let m = degree_with_nonzero_constant(g, "g")?;
    let mut check = Checklist::default();
    check.require(Condition::zero("R(f, g) = 0", resultant(f, g)?))?;

    let db_m = partial(f, g, &b(vec![m])?)?;
    check.require(Condition::nonzero(format!("dR/db_{m} != 0"), db_m.clone()))?;
    let da_n = partial(f, g, &a(vec![n])?)?;
    check.require(Condition::nonzero(format!("dR/da_{n} != 0"), da_n.clone()))?;

    let w = ratio(&partial(f, g, &a(vec![n - 1])?)?, &da_n)?;
    let w_b = ratio(&partial(f, g, &b(vec![m - 1])?)?, &db_m)?;
    check.require(Condition {
        name: "A-side and B-side ratios agree".into(),
        passed: w_b == w,
        value: w_b,
    })?;

    check.direct_multiplicity("f", f, &w, 1)?;
    check.direct_multiplicity("g", g, &w, 1)?;
    Ok(check.finish(w, 1, Some(1), Route::SimpleCommon))
}

fn check_claimed_multiplicity(n: usize, s: usize) -> Result<()> {
    if s < 2 || s > n {
        return Err(Error::BadRequest(format!(
            "claimed multiplicity {s} must lie in 2..={n}"
        )));
    }
    Ok(())
}

/// Root of multiplicity `s` from the first partials of `R(f, f^(s-1))` with
/// respect to `a_0..a_n` (coefficients of `f^(s-1)` held fixed). The full
/// gradient must be proportional to `[w^n, .., w, 1]`.
pub fn recover_first_order(f: &Polynomial, s: usize) -> Result<RootCertificate> {
    let n = degree_with_nonzero_constant(f, "f")?;
    check_claimed_multiplicity(n, s)?;
    let mut check = Checklist::default();
    for k in 1..s {
        let r = resultant(f, &f.derivative(k))?;
        check.require(Condition::zero(format!("R(f, f^({k})) = 0"), r))?;
    }

    let grad = gradient(f, &f.derivative(s - 1), Side::A)?;
    let den = grad[n].clone();
    check.require(Condition::nonzero(format!("dR/da_{n} != 0"), den.clone()))?;
    let w = ratio(&grad[n - 1], &den)?;

    let proportional = grad
        .iter()
        .enumerate()
        .map(|(j, dj)| rat_pow(&w, (n - j) as i64).map(|wp| *dj == &den * wp))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|ok| ok);
    check.require(Condition {
        name: "gradient proportional to [w^n, ..., w, 1]".into(),
        value: den,
        passed: proportional,
    })?;

    check.direct_multiplicity("f", f, &w, s)?;
    Ok(check.finish(w, s, None, Route::FirstOrder))
}

/// Root of multiplicity `s` from order-`s` partials of `R(f, f')` with
/// respect to the coefficients `b` of `f'`:
/// `w = (d^sR / db_{n-1}^{s-1} db_{n-2}) / (d^sR / db_{n-1}^s)`.
pub fn recover_higher_order(f: &Polynomial, s: usize) -> Result<RootCertificate> {
    let n = degree_with_nonzero_constant(f, "f")?;
    check_claimed_multiplicity(n, s)?;
    let mut check = Checklist::default();
    let r_below = resultant(f, &f.derivative(s - 1))?;
    check.require(Condition::zero(format!("R(f, f^({})) = 0", s - 1), r_below))?;
    let r_at = resultant(f, &f.derivative(s))?;
    check.require(Condition::nonzero(format!("R(f, f^({s})) != 0"), r_at))?;

    let df = f.derivative(1);
    let den = partial(f, &df, &b(vec![n - 1; s])?)?;
    check.require(Condition::nonzero(
        format!("d^{s}R(f, f')/db_{}^{s} != 0", n - 1),
        den.clone(),
    ))?;
    let mut num_idx = vec![n - 1; s - 1];
    num_idx.push(n - 2);
    let num = partial(f, &df, &b(num_idx)?)?;
    let w = ratio(&num, &den)?;

    check.direct_multiplicity("f", f, &w, s)?;
    Ok(check.finish(w, s, None, Route::HigherOrder))
}

/// Common root of multiplicity `s` in `f` and `p` in `g`, from an order-`s`
/// B-side ratio cross-checked against an order-`p` A-side ratio.
pub fn common_multiple_root(
    f: &Polynomial,
    g: &Polynomial,
    s: usize,
    p: usize,
) -> Result<RootCertificate> {
    let n = degree_with_nonzero_constant(f, "f")?;
    let m = degree_with_nonzero_constant(g, "g")?;
    if s == 0 || s > n || p == 0 || p > m {
        return Err(Error::BadRequest(format!(
            "multiplicities s = {s}, p = {p} must lie in 1..={n} and 1..={m}"
        )));
    }
    let mut check = Checklist::default();
    check.require(Condition::zero("R(f, g) = 0", resultant(f, g)?))?;

    let den_b = partial(f, g, &b(vec![m; s])?)?;
    check.require(Condition::nonzero(
        format!("d^{s}R/db_{m}^{s} != 0"),
        den_b.clone(),
    ))?;
    let den_a = partial(f, g, &a(vec![n; p])?)?;
    check.require(Condition::nonzero(
        format!("d^{p}R/da_{n}^{p} != 0"),
        den_a.clone(),
    ))?;

    let mut idx_b = vec![m; s - 1];
    idx_b.push(m - 1);
    let w = ratio(&partial(f, g, &b(idx_b)?)?, &den_b)?;
    let mut idx_a = vec![n; p - 1];
    idx_a.push(n - 1);
    let w_a = ratio(&partial(f, g, &a(idx_a)?)?, &den_a)?;
    check.require(Condition {
        name: "B-side and A-side ratios agree".into(),
        passed: w_a == w,
        value: w_a,
    })?;

    check.direct_multiplicity("f", f, &w, s)?;
    check.direct_multiplicity("g", g, &w, p)?;
    Ok(check.finish(w, s, Some(p), Route::PairMultiple))
}

/// Result of [`analyze`].
#[derive(Clone, Debug, PartialEq)]
pub struct Analysis {
    pub report: MultiplicityReport,
    /// Multiplicity the recovery routes were last run with; `None` when the
    /// reduced factor is squarefree.
    pub attempted_multiplicity: Option<usize>,
    pub first_order: Option<Result<RootCertificate>>,
    pub higher_order: Option<Result<RootCertificate>>,
    /// Set when at least one route certified and all certifying routes agree.
    pub certificate: Option<RootCertificate>,
}

impl Analysis {
    pub fn routes_agree(&self) -> bool {
        match (&self.first_order, &self.higher_order) {
            (Some(Ok(x)), Some(Ok(y))) => x.root == y.root,
            _ => true,
        }
    }

    pub fn both_certified(&self) -> bool {
        matches!(
            (&self.first_order, &self.higher_order),
            (Some(Ok(_)), Some(Ok(_)))
        )
    }

    /// True when there was a multiple-root candidate but nothing certified.
    pub fn uncertified(&self) -> bool {
        self.attempted_multiplicity.is_some() && self.certificate.is_none()
    }
}

/// Splits off zeros, runs the chain, and if it signals a multiple root runs
/// both recovery routes. If neither route certifies at the chain's
/// candidate, smaller multiplicities are tried down to 2.
pub fn analyze(f: &Polynomial) -> Result<Analysis> {
    if f.is_zero() {
        return Err(Error::MalformedPolynomial(
            "cannot analyze the zero polynomial".into(),
        ));
    }
    let report = if f.degree() == Some(0) {
        MultiplicityReport {
            zero_root_multiplicity: 0,
            reduced: f.clone(),
            chain: Vec::new(),
            s_max: 0,
        }
    } else {
        detect_multiplicity(f)?
    };

    let mut out = Analysis {
        attempted_multiplicity: None,
        first_order: None,
        higher_order: None,
        certificate: None,
        report,
    };
    let reduced = out.report.reduced.clone();
    for s in (2..=out.report.s_max).rev() {
        let first = recover_first_order(&reduced, s);
        let higher = recover_higher_order(&reduced, s);
        let any = first.is_ok() || higher.is_ok();
        out.attempted_multiplicity = Some(s);
        out.first_order = Some(first);
        out.higher_order = Some(higher);
        if any {
            break;
        }
    }
    if out.routes_agree() {
        out.certificate = match (&out.higher_order, &out.first_order) {
            (Some(Ok(c)), _) | (_, Some(Ok(c))) => Some(c.clone()),
            _ => None,
        };
    }
    Ok(out)
}
