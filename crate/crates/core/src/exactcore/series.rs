//! Truncated multivariate power series and monomial-shifted Laurent series.
//!
//! A [`PowerSeries`] of order `T` knows every coefficient of total degree at
//! most `T`; products and inverses keep that guarantee. A [`LaurentSeries`]
//! is `u^shift · body` with an integer (possibly negative) shift.

use std::collections::BTreeMap;

use super::ring::{Rational, Ring};
use crate::error::{Error, Result};

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<C> {
    nvars: usize,
    order: u32,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Ring> PowerSeries<C> {
    pub fn zero(nvars: usize, order: u32) -> Self {
        PowerSeries { nvars, order, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, order: u32, c: C) -> Self {
        Self::from_terms(nvars, order, [(vec![0; nvars], c)])
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::constant(nvars, order, C::one())
    }

    /// Collects terms, dropping zeros and anything above the truncation order.
    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, C)>>(nvars: usize, order: u32, terms: I) -> Self {
        let mut s = Self::zero(nvars, order);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    fn add_term(&mut self, e: Vec<u32>, c: C) {
        assert_eq!(e.len(), self.nvars, "exponent length mismatch");
        if degree(&e) > self.order || c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().plus(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowers the truncation order, discarding higher terms.
    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        Self::from_terms(
            self.nvars,
            order,
            self.terms.iter().filter(|(e, _)| degree(e) <= order).map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let order = self.order.min(other.order);
        let mut out = self.truncate(order);
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        PowerSeries {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.negate())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.nvars, order);
        for (ea, ca) in &self.terms {
            let da = degree(ea);
            if da > order {
                continue;
            }
            for (eb, cb) in &other.terms {
                if da + degree(eb) > order {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.times(cb));
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &C) -> Self {
        Self::from_terms(self.nvars, self.order, self.terms.iter().map(|(e, x)| (e.clone(), x.times(c))))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        self.mul_scalar(&C::from_rational(q))
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let c0_inv = c0.inv().ok_or(Error::NotInvertible)?;
        // f = c0 (1 - h), 1/f = c0^{-1} Σ h^k; h has no constant term.
        let h = self.mul_scalar(&c0_inv).neg().add(&Self::one(self.nvars, self.order));
        let mut sum = Self::one(self.nvars, self.order);
        let mut power = Self::one(self.nvars, self.order);
        for _ in 0..self.order {
            power = power.mul(&h);
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power);
        }
        Ok(sum.mul_scalar(&c0_inv))
    }

    /// `f(self)` for a univariate series `f` given by its coefficients; the
    /// constant term of `self` must vanish.
    pub fn compose(&self, f: &[C]) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::InvalidArgument("composition needs an inner series without constant term".into()));
        }
        let n = (self.order as usize + 1).min(f.len());
        let mut acc = Self::zero(self.nvars, self.order);
        for c in f[..n].iter().rev() {
            acc = acc.mul(self).add(&Self::constant(self.nvars, self.order, c.clone()));
        }
        Ok(acc)
    }

    /// `exp(self)` for a series without constant term.
    pub fn exp(&self) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(self.order as usize + 1);
        let mut fact = Rational::from_integer(1.into());
        for k in 0..=self.order {
            if k > 0 {
                fact *= Rational::from_integer(k.into());
            }
            coeffs.push(C::from_rational(&fact.recip()));
        }
        self.compose(&coeffs)
    }

    /// Splits `self = u^m · unit` where `m` is the componentwise minimum
    /// exponent. Fails unless `u^m` itself carries a nonzero coefficient.
    /// The unit is known to order `order - |m|`.
    pub fn factor_monomial(&self) -> Result<(Vec<u32>, Self)> {
        let mut iter = self.terms.keys();
        let first = iter.next().ok_or(Error::NotInvertible)?;
        let mut m = first.clone();
        for e in iter {
            for (mi, ei) in m.iter_mut().zip(e) {
                *mi = (*mi).min(*ei);
            }
        }
        if !self.terms.contains_key(&m) {
            return Err(Error::NotInvertible);
        }
        let dm = degree(&m);
        let body = Self::from_terms(
            self.nvars,
            self.order - dm,
            self.terms.iter().map(|(e, c)| (e.iter().zip(&m).map(|(x, y)| x - y).collect(), c.clone())),
        );
        Ok((m, body))
    }
}

/// `u^shift · body`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSeries<C> {
    shift: Vec<i64>,
    body: PowerSeries<C>,
}

impl<C: Ring> LaurentSeries<C> {
    pub fn new(shift: Vec<i64>, body: PowerSeries<C>) -> Self {
        assert_eq!(shift.len(), body.nvars());
        LaurentSeries { shift, body }
    }

    pub fn from_series(body: PowerSeries<C>) -> Self {
        LaurentSeries { shift: vec![0; body.nvars()], body }
    }

    pub fn shift(&self) -> &[i64] {
        &self.shift
    }

    /// The exponents `e ≥ 0` of the pole monomial `u^{-e}`.
    pub fn pole_exponents(&self) -> Vec<u32> {
        self.shift.iter().map(|&s| if s < 0 { (-s) as u32 } else { 0 }).collect()
    }

    pub fn body(&self) -> &PowerSeries<C> {
        &self.body
    }

    pub fn order(&self) -> u32 {
        self.body.order()
    }

    pub fn mul(&self, other: &Self) -> Self {
        LaurentSeries {
            shift: self.shift.iter().zip(&other.shift).map(|(a, b)| a + b).collect(),
            body: self.body.mul(&other.body),
        }
    }

    pub fn mul_monomial(&self, e: &[i64]) -> Self {
        LaurentSeries { shift: self.shift.iter().zip(e).map(|(a, b)| a + b).collect(), body: self.body.clone() }
    }

    /// Moves the leading monomial of the body into the shift.
    pub fn normalize(&self) -> Result<Self> {
        let (m, body) = self.body.factor_monomial()?;
        Ok(LaurentSeries { shift: self.shift.iter().zip(&m).map(|(s, x)| s + *x as i64).collect(), body })
    }

    pub fn invert(&self) -> Result<Self> {
        let n = self.normalize()?;
        Ok(LaurentSeries { shift: n.shift.iter().map(|s| -s).collect(), body: n.body.invert()? })
    }

    /// The body exponent that corresponds to the Laurent exponent `target`,
    /// or `None` when the coefficient is identically zero.
    pub fn body_exponent(&self, target: &[i64]) -> Option<Vec<u32>> {
        target.iter().zip(&self.shift).map(|(t, s)| u32::try_from(t - s).ok()).collect()
    }

    /// Coefficient of `u^target`; errors when it lies beyond the known order.
    pub fn coeff(&self, target: &[i64]) -> Result<C> {
        match self.body_exponent(target) {
            None => Ok(C::zero()),
            Some(e) => {
                let d = degree(&e);
                if d > self.body.order() {
                    Err(Error::TruncationTooSmall { order: self.body.order(), needed: d })
                } else {
                    Ok(self.body.coeff(&e))
                }
            }
        }
    }
}

/// Inverse of a Laurent series after factoring out its monomial part.
pub fn series_invert<C: Ring>(f: &LaurentSeries<C>) -> Result<LaurentSeries<C>> {
    f.invert()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::{rat, todd_series};

    fn uni(order: u32, coeffs: &[Rational]) -> PowerSeries<Rational> {
        PowerSeries::from_terms(1, order, coeffs.iter().enumerate().map(|(i, c)| (vec![i as u32], c.clone())))
    }

    #[test]
    fn geometric_series() {
        let f = LaurentSeries::from_series(uni(5, &[rat(1, 1), rat(-1, 1)]));
        let g = series_invert(&f).unwrap();
        assert_eq!(g.shift(), &[0]);
        for k in 0..=5 {
            assert_eq!(g.coeff(&[k]).unwrap(), rat(1, 1));
        }
        assert!(matches!(g.coeff(&[6]), Err(Error::TruncationTooSmall { .. })));
    }

    #[test]
    fn invert_one_minus_exp() {
        // 1 - e^{-t} = t - t²/2 + t³/6 - ...
        let t = uni(6, &[rat(0, 1), rat(1, 1)]);
        let one_minus = PowerSeries::one(1, 6).sub(&t.neg().exp().unwrap());
        let inv = series_invert(&LaurentSeries::from_series(one_minus)).unwrap();
        assert_eq!(inv.shift(), &[-1]);
        assert_eq!(inv.pole_exponents(), vec![1]);
        let todd = todd_series(5);
        for k in 0..=5u32 {
            assert_eq!(inv.body().coeff(&[k]), todd.coeff(&[k]));
        }
        assert_eq!(inv.coeff(&[-1]).unwrap(), rat(1, 1));
        assert_eq!(inv.coeff(&[0]).unwrap(), rat(1, 2));
        assert_eq!(inv.coeff(&[1]).unwrap(), rat(1, 12));
    }

    #[test]
    fn invert_two_minus_u() {
        let f = LaurentSeries::from_series(uni(4, &[rat(2, 1), rat(-1, 1)]));
        let g = series_invert(&f).unwrap();
        for k in 0..=4 {
            assert_eq!(g.coeff(&[k]).unwrap(), rat(1, 2i64.pow(k as u32 + 1)));
        }
    }

    #[test]
    fn zero_constant_after_factoring_is_rejected() {
        // u1 + u2 has no dividing leading monomial
        let f = PowerSeries::<Rational>::from_terms(2, 3, [(vec![1, 0], rat(1, 1)), (vec![0, 1], rat(1, 1))]);
        assert_eq!(series_invert(&LaurentSeries::from_series(f)), Err(Error::NotInvertible));
    }

    #[test]
    fn multivariate_inverse_round_trip() {
        let f = PowerSeries::<Rational>::from_terms(
            2,
            6,
            [(vec![0, 0], rat(3, 1)), (vec![1, 0], rat(1, 2)), (vec![1, 1], rat(-2, 1)), (vec![0, 3], rat(1, 1))],
        );
        let g = f.invert().unwrap();
        assert_eq!(f.mul(&g), PowerSeries::one(2, 6));
        assert_eq!(g.invert().unwrap(), f);
    }
}
