//! Sparse multivariate polynomials over a tagged variable bank.

use std::collections::BTreeMap;
use std::fmt;

use num::BigInt;

use super::ring::{Rational, Ring};
use crate::error::{Error, Result};

/// Which family of variables a polynomial is written in. Arithmetic between
/// banks is refused so that ambient coordinates `z`, evaluation variables
/// `y` and derivations `∂` cannot be mixed by accident.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bank {
    /// Ambient coordinates `z_1..z_s`.
    Ambient,
    /// Dual / evaluation variables `y_1..y_s`.
    Dual,
    /// Partial derivatives `∂_1..∂_s`.
    Partial,
}

impl Bank {
    fn symbol(self) -> &'static str {
        match self {
            Bank::Ambient => "z",
            Bank::Dual => "y",
            Bank::Partial => "∂",
        }
    }
}

#[derive(Clone, PartialEq)]
pub struct Polynomial<C> {
    bank: Bank,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

impl<C: Ring> Polynomial<C> {
    pub fn zero(bank: Bank, nvars: usize) -> Self {
        Polynomial { bank, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(bank: Bank, nvars: usize, c: C) -> Self {
        Self::from_terms(bank, nvars, [(vec![0; nvars], c)])
    }

    pub fn one(bank: Bank, nvars: usize) -> Self {
        Self::constant(bank, nvars, C::one())
    }

    /// The variable with index `i` (0-based).
    pub fn var(bank: Bank, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::from_terms(bank, nvars, [(e, C::one())])
    }

    /// `Σ coeffs[i] · var_i`.
    pub fn linear(bank: Bank, coeffs: &[C]) -> Self {
        let n = coeffs.len();
        Self::from_terms(
            bank,
            n,
            coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, c.clone())
            }),
        )
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, C)>>(bank: Bank, nvars: usize, terms: I) -> Self {
        let mut p = Self::zero(bank, nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, e: Vec<u32>, c: C) {
        assert_eq!(e.len(), self.nvars, "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().plus(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn bank(&self) -> Bank {
        self.bank
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == d)
    }

    /// Same coefficients read in another bank.
    pub fn rebank(&self, bank: Bank) -> Self {
        Polynomial { bank, nvars: self.nvars, terms: self.terms.clone() }
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            self.bank == other.bank && self.nvars == other.nvars,
            "polynomial bank mismatch: {:?}[{}] vs {:?}[{}]",
            self.bank,
            self.nvars,
            other.bank,
            other.nvars
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.negate())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(self.bank, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.times(cb));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.bank, self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn mul_scalar(&self, c: &C) -> Self {
        Self::from_terms(self.bank, self.nvars, self.terms.iter().map(|(e, x)| (e.clone(), x.times(c))))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        self.mul_scalar(&C::from_rational(q))
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(self.bank, self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Fallible coefficient conversion.
    pub fn try_map_coeffs<D: Ring, E>(
        &self,
        f: impl Fn(&C) -> std::result::Result<D, E>,
    ) -> std::result::Result<Polynomial<D>, E> {
        let mut out = Polynomial::zero(self.bank, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c)?);
        }
        Ok(out)
    }

    /// `p(-x)`.
    pub fn negate_vars(&self) -> Self {
        Self::from_terms(
            self.bank,
            self.nvars,
            self.terms.iter().map(|(e, c)| {
                let d: u32 = e.iter().sum();
                (e.clone(), if d.is_multiple_of(2) { c.clone() } else { c.negate() })
            }),
        )
    }

    /// Evaluates at a point with coordinates in the coefficient ring.
    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars);
        let mut total = C::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t.times(x);
                }
            }
            total = total.plus(&t);
        }
        total
    }

    pub fn eval_rational(&self, point: &[Rational]) -> C {
        let pt: Vec<C> = point.iter().map(C::from_rational).collect();
        self.eval(&pt)
    }

    /// Substitutes `var_i ↦ images[i]` (polynomials in a possibly different bank).
    pub fn substitute(&self, images: &[Polynomial<C>]) -> Polynomial<C> {
        assert_eq!(images.len(), self.nvars);
        let (bank, n) = images.first().map(|p| (p.bank, p.nvars)).unwrap_or((self.bank, 0));
        let mut out = Polynomial::zero(bank, n);
        for (e, c) in &self.terms {
            let mut t = Polynomial::constant(bank, n, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&img.pow(k));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// `∂/∂var_i`.
    pub fn derivative(&self, i: usize) -> Self {
        Self::from_terms(
            self.bank,
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut e2 = e.clone();
                let k = e2[i];
                e2[i] -= 1;
                (e2, c.scale(&Rational::from_integer(BigInt::from(k))))
            }),
        )
    }

    /// Directional derivative `D_v = Σ v_i ∂_i`.
    pub fn directional_derivative(&self, v: &[Rational]) -> Self {
        let mut out = Self::zero(self.bank, self.nvars);
        for (i, vi) in v.iter().enumerate() {
            if !num::Zero::is_zero(vi) {
                out = out.add(&self.derivative(i).scale(vi));
            }
        }
        out
    }

    /// Drops every term of total degree above `d`.
    pub fn truncate_degree(&self, d: u32) -> Self {
        Self::from_terms(
            self.bank,
            self.nvars,
            self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() <= d).map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    /// Homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self::from_terms(
            self.bank,
            self.nvars,
            self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() == d).map(|(e, c)| (e.clone(), c.clone())),
        )
    }
}

impl<C: Ring + fmt::Display> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let sym = self.bank.symbol();
        let mut first = true;
        // Highest degree first reads more naturally.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (e, c) in terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("{sym}{}", i + 1) } else { format!("{sym}{}^{k}", i + 1) })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("·"))?;
            } else {
                write!(f, "{c}·{}", mono.join("·"))?;
            }
        }
        Ok(())
    }
}

impl<C: Ring> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polynomial").field("bank", &self.bank).field("terms", &self.terms).finish()
    }
}

/// A constant-coefficient differential operator, written as a polynomial in
/// the `∂` bank.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOperator(Polynomial<Rational>);

impl DiffOperator {
    pub fn new(p: Polynomial<Rational>) -> Result<Self> {
        if p.bank() != Bank::Partial {
            return Err(Error::BankMismatch(format!("operator must live in the ∂ bank, got {:?}", p.bank())));
        }
        Ok(DiffOperator(p))
    }

    pub fn identity(nvars: usize) -> Self {
        DiffOperator(Polynomial::one(Bank::Partial, nvars))
    }

    /// The directional derivative `D_v`.
    pub fn directional(v: &[Rational]) -> Self {
        DiffOperator(Polynomial::linear(Bank::Partial, v))
    }

    /// `∏ D_v` over the given vectors.
    pub fn product_of(vectors: &[Vec<Rational>], nvars: usize) -> Self {
        let mut acc = Polynomial::one(Bank::Partial, nvars);
        for v in vectors {
            acc = acc.mul(&Polynomial::linear(Bank::Partial, v));
        }
        DiffOperator(acc)
    }

    pub fn symbol(&self) -> &Polynomial<Rational> {
        &self.0
    }

    pub fn compose(&self, other: &Self) -> Self {
        DiffOperator(self.0.mul(&other.0))
    }

    /// Applies the operator to a polynomial in the ambient or dual bank.
    pub fn apply<C: Ring>(&self, q: &Polynomial<C>) -> Result<Polynomial<C>> {
        if q.bank() == Bank::Partial {
            return Err(Error::BankMismatch("cannot apply an operator to a ∂-bank polynomial".into()));
        }
        if q.nvars() != self.0.nvars() {
            return Err(Error::BankMismatch(format!(
                "operator in {} variables applied to polynomial in {}",
                self.0.nvars(),
                q.nvars()
            )));
        }
        let mut out = Polynomial::zero(q.bank(), q.nvars());
        for (e, c) in self.0.terms() {
            let mut t = q.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.derivative(i);
                }
            }
            out = out.add(&t.scale(c));
        }
        Ok(out)
    }
}

/// `⟨p | q⟩`: apply `p` to `q` and evaluate at the origin.
pub fn pairing(p: &DiffOperator, q: &Polynomial<Rational>) -> Result<Rational> {
    let applied = p.apply(q)?;
    Ok(applied.coeff(&vec![0; q.nvars()]))
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial_rational(n: u32) -> Rational {
        Rational::from_integer((1..=n).fold(BigInt::from(1), |a, k| a * BigInt::from(k)))
    }
    use crate::exactcore::rat;

    fn z(i: usize) -> Polynomial<Rational> {
        Polynomial::var(Bank::Ambient, 2, i)
    }

    fn d(i: usize) -> DiffOperator {
        DiffOperator::new(Polynomial::var(Bank::Partial, 2, i)).unwrap()
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&d(0), &z(0)).unwrap(), rat(1, 1));
        assert_eq!(pairing(&d(0), &z(1)).unwrap(), rat(0, 1));
        assert_eq!(pairing(&d(0).compose(&d(0)), &z(0).pow(2)).unwrap(), rat(2, 1));
    }

    #[test]
    fn pairing_rejects_banks() {
        let p = Polynomial::<Rational>::var(Bank::Partial, 2, 0);
        assert!(matches!(pairing(&d(0), &p), Err(Error::BankMismatch(_))));
        assert!(DiffOperator::new(z(0)).is_err());
        let three = Polynomial::<Rational>::var(Bank::Ambient, 3, 0);
        assert!(pairing(&d(0), &three).is_err());
    }

    #[test]
    fn gram_matrix_is_diagonal_with_factorials() {
        // Monomials of degree 3 in 2 variables.
        let monos: Vec<Vec<u32>> = (0..=3).map(|i| vec![i, 3 - i]).collect();
        for a in &monos {
            let op = DiffOperator::new(Polynomial::from_terms(Bank::Partial, 2, [(a.clone(), rat(1, 1))])).unwrap();
            for b in &monos {
                let q = Polynomial::from_terms(Bank::Ambient, 2, [(b.clone(), rat(1, 1))]);
                let expected = if a == b { factorial_rational(a[0]) * factorial_rational(a[1]) } else { rat(0, 1) };
                assert_eq!(pairing(&op, &q).unwrap(), expected);
            }
        }
    }

    #[test]
    #[should_panic(expected = "bank mismatch")]
    fn mixing_banks_panics() {
        let y = Polynomial::<Rational>::var(Bank::Dual, 2, 0);
        let _ = z(0).add(&y);
    }

    #[test]
    fn negate_and_substitute() {
        let p = z(0).mul(&z(1)).add(&z(0)).add(&Polynomial::constant(Bank::Ambient, 2, rat(3, 1)));
        let q = p.negate_vars();
        assert_eq!(q.eval(&[rat(1, 1), rat(2, 1)]), p.eval(&[rat(-1, 1), rat(-2, 1)]));
        let img = vec![Polynomial::var(Bank::Dual, 1, 0), Polynomial::constant(Bank::Dual, 1, rat(2, 1))];
        let r = p.substitute(&img);
        assert_eq!(r.bank(), Bank::Dual);
        assert_eq!(r.eval(&[rat(5, 1)]), rat(5 * 2 + 5 + 3, 1));
    }
}
