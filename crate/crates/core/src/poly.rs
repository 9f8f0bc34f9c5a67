//! Polynomials, truncated power series and rational functions in one variable `t`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{hessenberg_eigenvalues, Mat, Scalar};

/// Residual bound `|p(w)| / Σ|c_i||w|^i` for accepting a computed root.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-8;

/// Polynomial with ascending coefficients and no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial {
            coeffs: alloc::vec![T::one()],
        }
    }

    pub fn constant(c: T) -> Self {
        Polynomial::new(alloc::vec![c])
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| T::from_i64(c)).collect())
    }

    /// `c·t^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = alloc::vec![T::zero(); k];
        coeffs.push(c);
        Polynomial::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn add(&self, other: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Polynomial<T> {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, k: &T) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn mul(&self, other: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = alloc::vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }

    pub fn pow(&self, n: u32) -> Polynomial<T> {
        (0..n).fold(Polynomial::one(), |acc, _| acc.mul(self))
    }

    /// `p(σt)`
    pub fn substitute_scale(&self, sigma: &T) -> Polynomial<T> {
        let mut s = T::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.clone() * s.clone());
            s = s * sigma.clone();
        }
        Polynomial::new(out)
    }

    pub fn derivative(&self) -> Polynomial<T> {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn to_complex(&self) -> Polynomial<Complex64> {
        Polynomial::new(self.coeffs.iter().map(T::to_complex).collect())
    }

    /// All complex roots with multiplicity, via companion-matrix eigenvalues.
    pub fn roots(&self) -> Result<Vec<Root>> {
        complex_roots(&self.to_complex())
    }

    /// Polynomial division; `divisor` must be nonzero.
    pub fn divrem(&self, divisor: &Polynomial<T>) -> Result<(Polynomial<T>, Polynomial<T>)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::Precondition("division by zero polynomial".into()))?;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quot = alloc::vec![T::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = rem[k].clone() / lead.clone();
            if !c.is_zero() {
                for (i, d) in divisor.coeffs.iter().enumerate() {
                    rem[k - dd + i] = rem[k - dd + i].clone() - c.clone() * d.clone();
                }
                quot[k - dd] = c;
            }
            rem.pop();
        }
        Ok((Polynomial::new(quot), Polynomial::new(rem)))
    }
}

impl Polynomial<BigRational> {
    /// Greatest common divisor, scaled to constant term 1 when that is nonzero
    /// and to a monic polynomial otherwise.
    pub fn gcd(&self, other: &Polynomial<BigRational>) -> Polynomial<BigRational> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.normalized()
    }

    fn normalized(&self) -> Polynomial<BigRational> {
        match self.coeffs.first() {
            None => self.clone(),
            Some(c0) if !c0.is_zero() => self.scale(&c0.recip()),
            _ => self.scale(&self.coeffs.last().expect("nonzero").recip()),
        }
    }

    /// `p / gcd(p, p')`: the same roots, each simple.
    pub fn squarefree(&self) -> Polynomial<BigRational> {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let (q, _) = self
            .divrem(&self.gcd(&self.derivative()))
            .expect("gcd of a nonzero polynomial");
        q
    }

    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Number of distinct real roots in the half-open interval `(x, ∞)`.
    pub fn count_real_roots_above(&self, x: &BigRational) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let mut seq = alloc::vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].divrem(&seq[n - 1]).expect("nonzero");
            if r.is_zero() {
                break;
            }
            seq.push(r.neg());
        }
        let sign_changes = |vals: Vec<BigRational>| {
            let signs: Vec<bool> = vals
                .into_iter()
                .filter(|v| !v.is_zero())
                .map(|v| v.is_positive())
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let at_x = sign_changes(seq.iter().map(|p| p.eval(x)).collect());
        let at_inf = sign_changes(
            seq.iter()
                .map(|p| p.coeffs.last().cloned().unwrap_or_default())
                .collect(),
        );
        at_x - at_inf
    }
}

impl fmt::Display for Polynomial<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mag_text = if mag.is_integer() {
                alloc::format!("{}", mag.numer())
            } else if i == 0 {
                alloc::format!("{mag}")
            } else {
                alloc::format!("({mag})")
            };
            match i {
                0 => f.write_str(&mag_text)?,
                _ => {
                    if !mag.is_one() {
                        f.write_str(&mag_text)?;
                    }
                    f.write_str("t")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// A computed root with its relative residual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub residual: f64,
}

fn relative_residual(p: &Polynomial<Complex64>, w: Complex64) -> f64 {
    let value = p.eval(&w).norm();
    let r = w.norm();
    let mut scale = 0.0;
    let mut pw = 1.0;
    for c in p.coeffs() {
        scale += c.norm() * pw;
        pw *= r;
    }
    if scale == 0.0 {
        0.0
    } else {
        value / scale
    }
}

fn complex_roots(p: &Polynomial<Complex64>) -> Result<Vec<Root>> {
    let Some(deg) = p.degree() else {
        return Err(Error::Precondition("roots of the zero polynomial".into()));
    };
    let c = p.coeffs();
    let zeros = c.iter().take_while(|x| x.is_zero()).count();
    let mut out: Vec<Root> = (0..zeros)
        .map(|_| Root {
            value: Complex64::zero(),
            residual: 0.0,
        })
        .collect();
    let m = deg - zeros;
    if m == 0 {
        return Ok(out);
    }
    let lead = c[deg];
    let a: Vec<Complex64> = c[zeros..].iter().map(|x| *x / lead).collect();
    let h = Mat::from_fn(m, m, |i, j| {
        if i == 0 {
            -a[m - 1 - j]
        } else if i == j + 1 {
            Complex64::one()
        } else {
            Complex64::zero()
        }
    });
    let dp = p.derivative();
    for w in hessenberg_eigenvalues(h)? {
        let mut best = w;
        let mut best_res = relative_residual(p, w);
        let mut x = w;
        for _ in 0..8 {
            let d = dp.eval(&x);
            if d.norm() == 0.0 {
                break;
            }
            x -= p.eval(&x) / d;
            let r = relative_residual(p, x);
            if r < best_res {
                best = x;
                best_res = r;
            }
        }
        if best_res.is_nan() || best_res > ROOT_RESIDUAL_TOL {
            return Err(Error::Internal(alloc::format!(
                "root {best} has residual {best_res:e} above tolerance"
            )));
        }
        out.push(Root {
            value: best,
            residual: best_res,
        });
    }
    Ok(out)
}

/// Power series truncated after `t^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> PowerSeries<T> {
    pub fn new(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.resize(order + 1, T::zero());
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        PowerSeries::new(alloc::vec![T::one()], order)
    }

    pub fn from_polynomial(p: &Polynomial<T>, order: usize) -> Self {
        PowerSeries::new(p.coeffs().iter().take(order + 1).cloned().collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        PowerSeries::new(self.coeffs.iter().take(order + 1).cloned().collect(), order)
    }

    pub fn add(&self, other: &PowerSeries<T>) -> PowerSeries<T> {
        let n = self.order().min(other.order());
        PowerSeries::new((0..=n).map(|i| self.coeff(i) + other.coeff(i)).collect(), n)
    }

    pub fn mul(&self, other: &PowerSeries<T>) -> PowerSeries<T> {
        let n = self.order().min(other.order());
        let mut out = alloc::vec![T::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        PowerSeries { coeffs: out }
    }

    pub fn inverse(&self) -> Result<PowerSeries<T>> {
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return Err(Error::Precondition(
                "series with zero constant term is not invertible".into(),
            ));
        }
        let n = self.order();
        let inv0 = T::one() / c0;
        let mut out = alloc::vec![inv0.clone()];
        for k in 1..=n {
            let mut s = T::zero();
            for j in 1..=k {
                s = s + self.coeffs[j].clone() * out[k - j].clone();
            }
            out.push(-(s * inv0.clone()));
        }
        Ok(PowerSeries { coeffs: out })
    }

    pub fn div(&self, other: &PowerSeries<T>) -> Result<PowerSeries<T>> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn exp(&self) -> Result<PowerSeries<T>> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Precondition("exp needs zero constant term".into()));
        }
        // n e_n = Σ_{k=1}^n k a_k e_{n−k}
        let n = self.order();
        let mut e = alloc::vec![T::one()];
        for m in 1..=n {
            let mut s = T::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    s = s + T::from_i64(k as i64) * self.coeffs[k].clone() * e[m - k].clone();
                }
            }
            e.push(s / T::from_i64(m as i64));
        }
        Ok(PowerSeries { coeffs: e })
    }

    pub fn log(&self) -> Result<PowerSeries<T>> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Precondition("log needs constant term 1".into()));
        }
        let n = self.order();
        // (log A)' = A'/A
        let deriv: Vec<T> = (1..=n)
            .map(|k| T::from_i64(k as i64) * self.coeffs[k].clone())
            .collect();
        let q = PowerSeries::new(deriv, n.saturating_sub(1)).mul(&self.truncate(n.saturating_sub(1)).inverse()?);
        let mut out = alloc::vec![T::zero()];
        for k in 1..=n {
            out.push(q.coeff(k - 1) / T::from_i64(k as i64));
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// `exp(Σ_{n≥1} c_n tⁿ / n)` with `values[n-1] = c_n`.
    pub fn exp_of_counts(values: &[T], order: usize) -> Result<PowerSeries<T>> {
        if values.len() < order {
            return Err(Error::SequenceTooShort {
                needed: order,
                found: values.len(),
            });
        }
        // n z_n = Σ_{k=1}^n c_k z_{n−k}
        let mut z = alloc::vec![T::one()];
        for m in 1..=order {
            let mut s = T::zero();
            for k in 1..=m {
                s = s + values[k - 1].clone() * z[m - k].clone();
            }
            z.push(s / T::from_i64(m as i64));
        }
        Ok(PowerSeries { coeffs: z })
    }

    /// Inverse of [`PowerSeries::exp_of_counts`]: the `c_n` with `self = exp(Σ c_n tⁿ/n)`.
    pub fn counts(&self) -> Result<Vec<T>> {
        let l = self.log()?;
        Ok((1..=self.order()).map(|k| l.coeff(k) * T::from_i64(k as i64)).collect())
    }

    pub fn max_abs_diff(&self, other: &PowerSeries<T>) -> f64 {
        let n = self.order().max(other.order());
        (0..=n)
            .map(|i| (self.coeff(i) - other.coeff(i)).modulus())
            .fold(0.0, f64::max)
    }
}

/// Quotient of polynomials with constant terms normalized to 1 where possible.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction<T> {
    numerator: Polynomial<T>,
    denominator: Polynomial<T>,
}

impl<T: Scalar> RationalFunction<T> {
    /// Requires `denominator(0) ≠ 0`; both parts are divided by it.
    pub fn new(numerator: Polynomial<T>, denominator: Polynomial<T>) -> Result<Self> {
        let d0 = denominator.coeff(0);
        if d0.is_zero() {
            return Err(Error::Precondition("denominator must not vanish at t = 0".into()));
        }
        let inv = T::one() / d0;
        Ok(RationalFunction {
            numerator: numerator.scale(&inv),
            denominator: denominator.scale(&inv),
        })
    }

    pub fn polynomial(p: Polynomial<T>) -> Self {
        RationalFunction {
            numerator: p,
            denominator: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction::polynomial(Polynomial::one())
    }

    pub fn numerator(&self) -> &Polynomial<T> {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial<T> {
        &self.denominator
    }

    pub fn mul(&self, other: &RationalFunction<T>) -> RationalFunction<T> {
        RationalFunction {
            numerator: self.numerator.mul(&other.numerator),
            denominator: self.denominator.mul(&other.denominator),
        }
    }

    pub fn reciprocal(&self) -> Result<RationalFunction<T>> {
        RationalFunction::new(self.denominator.clone(), self.numerator.clone())
    }

    /// `R(σt)`
    pub fn substitute_scale(&self, sigma: &T) -> RationalFunction<T> {
        RationalFunction {
            numerator: self.numerator.substitute_scale(sigma),
            denominator: self.denominator.substitute_scale(sigma),
        }
    }

    pub fn taylor(&self, order: usize) -> Result<PowerSeries<T>> {
        PowerSeries::from_polynomial(&self.numerator, order)
            .div(&PowerSeries::from_polynomial(&self.denominator, order))
    }

    pub fn is_one(&self) -> bool {
        self.numerator == self.denominator
    }
}

impl RationalFunction<BigRational> {
    /// Cancels the polynomial gcd of numerator and denominator.
    pub fn reduced(&self) -> RationalFunction<BigRational> {
        let g = self.numerator.gcd(&self.denominator);
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let (n, _) = self.numerator.divrem(&g).expect("g nonzero");
        let (d, _) = self.denominator.divrem(&g).expect("g nonzero");
        RationalFunction::new(n, d).expect("gcd has nonzero constant term")
    }
}

/// Splits `p` into `(1 − t)^a (1 + t)^b q`.
fn split_unit_factors(p: &Polynomial<BigRational>) -> (u32, u32, Polynomial<BigRational>) {
    let minus = Polynomial::<BigRational>::from_i64(&[1, -1]);
    let plus = Polynomial::<BigRational>::from_i64(&[1, 1]);
    let mut q = p.clone();
    let mut count = |f: &Polynomial<BigRational>| {
        let mut k = 0;
        while q.degree().unwrap_or(0) > 0 {
            let (quot, rem) = q.divrem(f).expect("nonzero");
            if !rem.is_zero() {
                break;
            }
            q = quot;
            k += 1;
        }
        k
    };
    let a = count(&minus);
    let b = count(&plus);
    (a, b, q)
}

fn format_factors(p: &Polynomial<BigRational>) -> String {
    let (a, b, q) = split_unit_factors(p);
    let mut parts = Vec::new();
    let mut push = |text: String, k: u32| match k {
        0 => {}
        1 => parts.push(alloc::format!("({text})")),
        _ => parts.push(alloc::format!("({text})^{k}")),
    };
    let q_nontrivial = q.degree().unwrap_or(0) > 0;
    if q_nontrivial {
        push(alloc::format!("{q}"), 1);
    }
    push("1 - t".into(), a);
    push("1 + t".into(), b);
    let count = parts.len();
    let mut s: String = parts.concat();
    if !q_nontrivial && !q.coeff(0).is_one() {
        s = if count == 0 {
            alloc::format!("{q}")
        } else {
            alloc::format!("{q}{s}")
        };
    } else if count == 0 {
        s = "1".into();
    }
    s
}

impl fmt::Display for RationalFunction<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.numerator.is_zero() {
            return f.write_str("0");
        }
        let num = format_factors(&self.numerator);
        if self.denominator == Polynomial::one() {
            return f.write_str(&num);
        }
        let den = format_factors(&self.denominator);
        write!(f, "{num}/{den}")
    }
}

/// Rational from a machine integer.
pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Distance tolerance for float root cancellation.
pub const CANCEL_TOL: f64 = 1e-6;

/// Removes pairs of numerator/denominator roots closer than [`CANCEL_TOL`].
/// Returns the surviving roots and the cancelled pairs.
pub fn cancel_close_roots(num: Vec<Root>, den: Vec<Root>) -> (Vec<Root>, Vec<Root>, Vec<(Root, Root)>) {
    let mut den: Vec<Option<Root>> = den.into_iter().map(Some).collect();
    let mut kept = Vec::new();
    let mut cancelled = Vec::new();
    for r in num {
        let hit = den
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.map(|d| (i, (d.value - r.value).norm())))
            .filter(|&(_, dist)| dist < CANCEL_TOL)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match hit {
            Some((i, _)) => {
                let d = den[i].take().expect("present");
                log::debug!("cancelled root pair {} / {}", r.value, d.value);
                cancelled.push((r, d));
            }
            None => kept.push(r),
        }
    }
    (kept, den.into_iter().flatten().collect(), cancelled)
}

/// Absolute value for floats in no_std.
#[cfg(test)]
pub(crate) fn fabs(x: f64) -> f64 {
    num_traits::Float::abs(x)
}
