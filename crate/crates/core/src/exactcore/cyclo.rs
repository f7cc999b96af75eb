//! Elements of cyclotomic fields `Q(ζ_m)`, stored as residues modulo the
//! `m`-th cyclotomic polynomial in the power basis of `ζ_m = e^{2πi/m}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num::integer::lcm;
use num::{One, Zero};

use super::ring::{format_rational, Rational, Ring};
use super::series::PowerSeries;
use crate::error::{Error, Result};

// Dense univariate polynomials over Q, ascending coefficients, no trailing zeros.
type UPoly = Vec<Rational>;

fn trim(p: &mut UPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn upoly_mul(a: &[Rational], b: &[Rational]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn upoly_sub(a: &[Rational], b: &[Rational]) -> UPoly {
    let n = a.len().max(b.len());
    let mut out: UPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder of `a / b`, `b` nonzero.
fn upoly_divrem(a: &[Rational], b: &[Rational]) -> (UPoly, UPoly) {
    let mut rem: UPoly = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() / &lead;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &c * bj;
        }
        quot[shift] = c;
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

fn compute_cyclotomic(m: u32) -> UPoly {
    // x^m - 1 divided by Φ_d for every proper divisor d of m.
    let mut num = vec![Rational::zero(); m as usize + 1];
    num[0] = -Rational::one();
    num[m as usize] = Rational::one();
    for d in 1..m {
        if m.is_multiple_of(d) {
            let (q, r) = upoly_divrem(&num, &cyclotomic_polynomial(d));
            debug_assert!(r.is_empty());
            num = q;
        }
    }
    num
}

/// The `m`-th cyclotomic polynomial, ascending coefficients. Memoized.
pub fn cyclotomic_polynomial(m: u32) -> Arc<Vec<Rational>> {
    assert!(m >= 1, "cyclotomic order must be positive");
    static MEMO: OnceLock<Mutex<HashMap<u32, Arc<Vec<Rational>>>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = memo.lock().unwrap().get(&m) {
        return p.clone();
    }
    // Computed outside the lock: the recursion re-enters this function.
    let p = Arc::new(compute_cyclotomic(m));
    memo.lock().unwrap().entry(m).or_insert(p).clone()
}

fn totient_degree(m: u32) -> usize {
    cyclotomic_polynomial(m).len() - 1
}

/// An element of `Q(ζ_m)`.
#[derive(Clone)]
pub struct CycloNum {
    order: u32,
    coords: Vec<Rational>,
}

impl CycloNum {
    /// Builds an element from coordinates in the power basis, reducing
    /// modulo `Φ_m` when more than `φ(m)` coordinates are supplied.
    pub fn new(order: u32, coords: Vec<Rational>) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        Self::reduce(order, coords)
    }

    fn reduce(order: u32, mut poly: UPoly) -> Self {
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        trim(&mut poly);
        if poly.len() > deg {
            poly = upoly_divrem(&poly, &phi).1;
        }
        poly.resize(deg, Rational::zero());
        CycloNum { order, coords: poly }
    }

    pub fn from_rational_in(q: Rational, order: u32) -> Self {
        let mut coords = vec![Rational::zero(); totient_degree(order)];
        coords[0] = q;
        CycloNum { order, coords }
    }

    /// `ζ_m^k` for any integer `k`.
    pub fn root_of_unity(order: u32, k: i64) -> Self {
        let e = k.rem_euclid(order as i64) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        Self::reduce(order, poly)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element is rational.
    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coords[0].clone())
    }

    /// Re-expresses the element in `Q(ζ_target)`; `order` must divide `target`.
    pub fn promote(&self, target: u32) -> Self {
        if target == self.order {
            return self.clone();
        }
        assert!(target.is_multiple_of(self.order), "cannot embed Q(ζ_{}) into Q(ζ_{})", self.order, target);
        let step = (target / self.order) as usize;
        let mut poly = vec![Rational::zero(); (self.coords.len().max(1) - 1) * step + 1];
        for (i, c) in self.coords.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Self::reduce(target, poly)
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conjugate(&self) -> Self {
        let m = self.order as usize;
        let mut poly = vec![Rational::zero(); m];
        for (i, c) in self.coords.iter().enumerate() {
            poly[(m - i) % m] += c;
        }
        Self::reduce(self.order, poly)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm modulo `Φ_m`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi = cyclotomic_polynomial(self.order);
        let mut a: UPoly = self.coords.clone();
        trim(&mut a);
        // Invariant: r0 ≡ s0·a, r1 ≡ s1·a (mod Φ).
        let (mut r0, mut r1) = (phi.to_vec(), a);
        let (mut s0, mut s1): (UPoly, UPoly) = (Vec::new(), vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = upoly_divrem(&r0, &r1);
            let s = upoly_sub(&s0, &upoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r1 is a nonzero constant because Φ_m is irreducible.
        let c = r1[0].recip();
        let inv: UPoly = s1.into_iter().map(|x| x * &c).collect();
        Ok(Self::reduce(self.order, inv))
    }

    fn unify(&self, other: &Self) -> (Self, Self) {
        if self.order == other.order {
            return (self.clone(), other.clone());
        }
        let l = lcm(self.order, other.order);
        (self.promote(l), other.promote(l))
    }

    /// Numerical value, for display only.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let m = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coords.iter().enumerate() {
            let v = rat_to_f64(c);
            let ang = 2.0 * std::f64::consts::PI * k as f64 / m;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }
}

pub(crate) fn rat_to_f64(q: &Rational) -> f64 {
    use num::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coords == other.coords;
        }
        let (a, b) = self.unify(other);
        a.coords == b.coords
    }
}

impl Eq for CycloNum {}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{}", format_rational(&q));
        }
        let mut first = true;
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{}·ζ{}", format_rational(c), self.order)?,
                _ => write!(f, "{}·ζ{}^{}", format_rational(c), self.order, k)?,
            }
        }
        write!(f, ")")
    }
}

impl Zero for CycloNum {
    fn zero() -> Self {
        CycloNum::from_rational_in(Rational::zero(), 1)
    }
    fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

impl One for CycloNum {
    fn one() -> Self {
        CycloNum::from_rational_in(Rational::one(), 1)
    }
}

impl std::ops::Add for CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: Self) -> Self {
        Ring::plus(&self, &rhs)
    }
}

impl std::ops::Mul for CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: Self) -> Self {
        Ring::times(&self, &rhs)
    }
}

impl Ring for CycloNum {
    fn plus(&self, other: &Self) -> Self {
        if self.order == other.order {
            let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
            return CycloNum { order: self.order, coords };
        }
        let (a, b) = self.unify(other);
        a.plus(&b)
    }
    fn minus(&self, other: &Self) -> Self {
        self.plus(&other.negate())
    }
    fn times(&self, other: &Self) -> Self {
        if self.order != other.order {
            let (a, b) = self.unify(other);
            return a.times(&b);
        }
        if self.order == 1 {
            return CycloNum { order: 1, coords: vec![&self.coords[0] * &other.coords[0]] };
        }
        if let Some(q) = other.to_rational() {
            return self.scale(&q);
        }
        if let Some(q) = self.to_rational() {
            return other.scale(&q);
        }
        Self::reduce(self.order, upoly_mul(&self.coords, &other.coords))
    }
    fn negate(&self) -> Self {
        CycloNum { order: self.order, coords: self.coords.iter().map(|c| -c).collect() }
    }
    fn from_rational(q: &Rational) -> Self {
        CycloNum::from_rational_in(q.clone(), 1)
    }
    fn inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
    fn scale(&self, q: &Rational) -> Self {
        CycloNum { order: self.order, coords: self.coords.iter().map(|c| c * q).collect() }
    }
}

/// Checks `n/(1-x^n) = Σ_{i<n} 1/(1-ζ^i x)` in `Q(ζ_n)[[x]]` up to `order`.
pub fn rela4_check(n: u32, order: u32) -> bool {
    assert!(n >= 1);
    let lhs_den =
        PowerSeries::<CycloNum>::from_terms(1, order, [(vec![0], CycloNum::one()), (vec![n], CycloNum::from_int(-1))]);
    let lhs = match lhs_den.invert() {
        Ok(inv) => inv.scale(&Rational::from_integer(n.into())),
        Err(_) => return false,
    };
    let mut rhs = PowerSeries::<CycloNum>::zero(1, order);
    for i in 0..n {
        let den = PowerSeries::from_terms(
            1,
            order,
            [(vec![0], CycloNum::one()), (vec![1], CycloNum::root_of_unity(n, i as i64).negate())],
        );
        match den.invert() {
            Ok(inv) => rhs = rhs.add(&inv),
            Err(_) => return false,
        }
    }
    lhs == rhs
}
