//! Iterated residues of top forms `f·dz₁∧⋯∧dz_s` whose denominators are
//! products of elements of `X`.
//!
//! Every computation happens in a *monomial chart*: for a basis `b` put
//! `w_j = ⟨b_j, z⟩` and substitute `w_j = u^{E_j}` for a fixed exponent
//! matrix `E`. The standard chart has `w_j = u₁⋯u_j`; nested coordinates
//! (see [`crate::wonderful`]) use other matrices. Each pole factor becomes a
//! monomial times a unit, units are inverted as power series, and the
//! residue is the coefficient of `(u₁⋯u_s)^{-1}` after including the
//! Jacobian `dz = det(b)^{-1}·det(E)·(∏w/∏u)·du`.

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exactcore::linalg::{columns_to_matrix, det, inverse, mat_vec, Matrix};
use crate::exactcore::{todd_series, Bank, CycloNum, LaurentSeries, Polynomial, PowerSeries, Rational, Ring};
use crate::matroid::{BasisRef, VectorList};
use crate::partition::TorusPoint;

/// Coefficient fields residues can be computed in.
pub trait Coeff: Ring {
    /// Embeds a root of unity, if it lies in this field.
    fn from_cyclo(z: &CycloNum) -> Option<Self>;
}

impl Coeff for Rational {
    fn from_cyclo(z: &CycloNum) -> Option<Self> {
        z.to_rational()
    }
}

impl Coeff for CycloNum {
    fn from_cyclo(z: &CycloNum) -> Option<Self> {
        Some(z.clone())
    }
}

/// A residue: a polynomial in the dual variables `y`.
pub type ResidueValue<C> = Polynomial<C>;

/// One denominator factor, referring to an element of `X` by position.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    /// The linear form `a(z) = ⟨a, z⟩`.
    Pole(usize),
    /// `1 − ζ·e^{−a(z)}`.
    Discrete { index: usize, zeta: CycloNum },
}

impl Factor {
    fn index(&self) -> usize {
        match self {
            Factor::Pole(i) | Factor::Discrete { index: i, .. } => *i,
        }
    }
}

/// `scalar · [e^{⟨y|z⟩}] · numerator(z) / ∏ factors`.
#[derive(Clone, Debug)]
pub struct RationalFunctionSpec {
    pub list: VectorList,
    pub exponential: bool,
    pub numerator: Option<Polynomial<Rational>>,
    pub scalar: Rational,
    pub factors: Vec<Factor>,
}

impl RationalFunctionSpec {
    /// `1/∏_{i ∈ indices} a_i`.
    pub fn reciprocal(x: &VectorList, indices: &[usize]) -> Self {
        RationalFunctionSpec {
            list: x.clone(),
            exponential: false,
            numerator: None,
            scalar: Rational::one(),
            factors: indices.iter().map(|&i| Factor::Pole(i)).collect(),
        }
    }

    /// `e^{⟨y|z⟩}/d_X(z)` with `d_X = ∏_{a∈X} a`.
    pub fn spline(x: &VectorList) -> Self {
        let all: Vec<usize> = (0..x.len()).collect();
        Self::reciprocal(x, &all).with_exponential()
    }

    /// The form `ω_c = det(c)·dz/∏_{a∈c} a`, normalized so that its residue
    /// at `c` is one.
    pub fn omega(x: &VectorList, c: &BasisRef) -> Self {
        let mut f = Self::reciprocal(x, &c.indices);
        f.scalar = Rational::from_integer(c.det.into());
        f
    }

    /// `e^{⟨y|z⟩}·∏_{a∈X}(1 − e^{−2πi⟨φ,a⟩}e^{−a(z)})^{−1}`.
    pub fn twisted(x: &VectorList, phi: &TorusPoint) -> Self {
        let m = phi.order();
        let factors = (0..x.len())
            .map(|i| Factor::Discrete { index: i, zeta: CycloNum::root_of_unity(m, -phi.exponent(x.vector(i))) })
            .collect();
        RationalFunctionSpec { list: x.clone(), exponential: true, numerator: None, scalar: Rational::one(), factors }
    }

    pub fn with_exponential(mut self) -> Self {
        self.exponential = true;
        self
    }

    pub fn with_numerator(mut self, p: Polynomial<Rational>) -> Self {
        self.numerator = Some(p);
        self
    }
}

/// A monomial chart `w_j = u^{E_j}` attached to a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub basis: Vec<usize>,
    pub exponents: Vec<Vec<u32>>,
}

impl Chart {
    /// The standard chart `w_j = u₁⋯u_j`.
    pub fn standard(b: &BasisRef) -> Self {
        let s = b.indices.len();
        let exponents = (0..s).map(|j| (0..s).map(|i| u32::from(i <= j)).collect()).collect();
        Chart { basis: b.indices.clone(), exponents }
    }
}

/// Default global truncation order `|X| + s`.
pub fn default_truncation(x: &VectorList) -> u32 {
    (x.len() + x.dim()) as u32
}

struct Frame {
    s: usize,
    binv: Matrix,
    det_b: Rational,
}

impl Frame {
    fn new(x: &VectorList, chart: &Chart) -> Result<Self> {
        let s = x.dim();
        if chart.basis.len() != s || chart.exponents.len() != s {
            return Err(Error::NotABasis(chart.basis.clone()));
        }
        let cols: Vec<Vec<Rational>> = chart.basis.iter().map(|&i| x.rational(i)).collect();
        let bmat = columns_to_matrix(&cols, s);
        let det_b = det(&bmat);
        let binv = inverse(&bmat).ok_or_else(|| Error::NotABasis(chart.basis.clone()))?;
        Ok(Frame { s, binv, det_b })
    }

    /// Coordinates of `a` in the basis.
    fn alpha(&self, a: &[Rational]) -> Vec<Rational> {
        mat_vec(&self.binv, a)
    }
}

/// The exponent `m` with `Σ α_j u^{E_j} = u^m·(unit)`.
fn leading_monomial(alpha: &[Rational], chart: &Chart) -> Result<Vec<u32>> {
    let support: Vec<&Vec<u32>> =
        alpha.iter().zip(&chart.exponents).filter(|(a, _)| !a.is_zero()).map(|(_, e)| e).collect();
    let first = support.first().ok_or_else(|| Error::Internal("zero linear form".into()))?;
    let m: Vec<u32> = (0..first.len()).map(|i| support.iter().map(|e| e[i]).min().unwrap()).collect();
    if !support.iter().any(|e| **e == m) {
        return Err(Error::NotAdapted);
    }
    Ok(m)
}

/// `Σ_j α_j u^{E_j − m}` as a series.
fn shifted_form<C: Coeff>(alpha: &[Rational], chart: &Chart, m: &[u32], order: u32) -> PowerSeries<C> {
    PowerSeries::from_terms(
        m.len(),
        order,
        alpha
            .iter()
            .zip(&chart.exponents)
            .filter(|(a, _)| !a.is_zero())
            .map(|(a, e)| (e.iter().zip(m).map(|(x, y)| x - y).collect(), C::from_rational(a))),
    )
}

fn is_pole_like(factor: &Factor) -> bool {
    match factor {
        Factor::Pole(_) => true,
        Factor::Discrete { zeta, .. } => zeta.is_one(),
    }
}

/// The total monomial `u^{−Σ m}` contributed by the pole factors.
fn pole_shift(f: &RationalFunctionSpec, frame: &Frame, chart: &Chart) -> Result<Vec<i64>> {
    let mut shift = vec![0i64; frame.s];
    for factor in &f.factors {
        if is_pole_like(factor) {
            let m = leading_monomial(&frame.alpha(&f.list.rational(factor.index())), chart)?;
            for (s, x) in shift.iter_mut().zip(m) {
                *s -= x as i64;
            }
        }
    }
    Ok(shift)
}

fn expand_factors<C: Coeff>(
    f: &RationalFunctionSpec,
    frame: &Frame,
    chart: &Chart,
    order: u32,
) -> Result<LaurentSeries<C>> {
    let s = frame.s;
    let zero_m = vec![0u32; s];
    let mut body = PowerSeries::<C>::one(s, order);
    let mut shift = vec![0i64; s];
    let todd: Vec<C> = {
        let t = todd_series(order);
        (0..=order).map(|k| C::from_rational(&t.coeff(&[k]))).collect()
    };
    for factor in &f.factors {
        let alpha = frame.alpha(&f.list.rational(factor.index()));
        let full = shifted_form::<C>(&alpha, chart, &zero_m, order);
        if is_pole_like(factor) {
            let m = leading_monomial(&alpha, chart)?;
            let unit = shifted_form::<C>(&alpha, chart, &m, order);
            body = body.mul(&unit.invert()?);
            for (sh, x) in shift.iter_mut().zip(&m) {
                *sh -= *x as i64;
            }
            if matches!(factor, Factor::Discrete { .. }) {
                // 1/(1 − e^{−a}) = a^{−1}·todd(a)
                body = body.mul(&full.compose(&todd)?);
            }
        } else if let Factor::Discrete { zeta, .. } = factor {
            let z = C::from_cyclo(zeta).ok_or_else(|| {
                Error::InvalidArgument(format!("root of unity {zeta} is not in the coefficient field"))
            })?;
            let g = PowerSeries::one(s, order).sub(&full.neg().exp()?.mul_scalar(&z));
            body = body.mul(&g.invert()?);
        }
    }
    if let Some(num) = &f.numerator {
        if num.nvars() != s {
            return Err(Error::BankMismatch("numerator has the wrong number of variables".into()));
        }
        // z_i = Σ_j (B^{-1})_{ji} w_j
        let images: Vec<PowerSeries<C>> = (0..s)
            .map(|i| {
                let col: Vec<Rational> = (0..s).map(|j| frame.binv[j][i].clone()).collect();
                shifted_form::<C>(&col, chart, &zero_m, order)
            })
            .collect();
        let mut acc = PowerSeries::zero(s, order);
        for (e, c) in num.terms() {
            let mut t = PowerSeries::constant(s, order, C::from_rational(c));
            for (img, &k) in images.iter().zip(e) {
                for _ in 0..k {
                    t = t.mul(img);
                }
            }
            acc = acc.add(&t);
        }
        body = body.mul(&acc);
    }
    Ok(LaurentSeries::new(shift, body))
}

/// Calls `f` on every `k ∈ N^s` with `Σ k_j E_j ≤ bound` componentwise.
fn for_each_bounded(exps: &[Vec<u32>], bound: &[i64], f: &mut dyn FnMut(&[u32], &[i64])) {
    fn rec(j: usize, exps: &[Vec<u32>], rem: &mut Vec<i64>, k: &mut Vec<u32>, f: &mut dyn FnMut(&[u32], &[i64])) {
        if j == exps.len() {
            f(k, rem);
            return;
        }
        let saved = rem.clone();
        loop {
            rec(j + 1, exps, rem, k, f);
            for (r, e) in rem.iter_mut().zip(&exps[j]) {
                *r -= *e as i64;
            }
            if rem.iter().any(|&r| r < 0) {
                break;
            }
            k[j] += 1;
        }
        k[j] = 0;
        *rem = saved;
    }
    let mut rem = bound.to_vec();
    let mut k = vec![0; exps.len()];
    rec(0, exps, &mut rem, &mut k, f);
}

/// Residue of the form `f·dz` in the given chart.
pub fn chart_residue<C: Coeff>(
    f: &RationalFunctionSpec,
    chart: &Chart,
    truncation: Option<u32>,
) -> Result<ResidueValue<C>> {
    let x = &f.list;
    let s = x.dim();
    let frame = Frame::new(x, chart)?;
    let emat: Matrix =
        chart.exponents.iter().map(|r| r.iter().map(|&e| Rational::from_integer(e.into())).collect()).collect();
    let det_e = det(&emat);
    if det_e.is_zero() {
        return Err(Error::InvalidArgument("chart exponent matrix is singular".into()));
    }
    // Jacobian monomial ∏w/∏u.
    let mut total_shift: Vec<i64> =
        (0..s).map(|i| chart.exponents.iter().map(|e| e[i] as i64).sum::<i64>() - 1).collect();
    for (t, p) in total_shift.iter_mut().zip(pole_shift(f, &frame, chart)?) {
        *t += p;
    }
    let target: Vec<i64> = total_shift.iter().map(|t| -1 - t).collect();
    let zero = Polynomial::zero(Bank::Dual, s);
    if target.iter().any(|&r| r < 0) {
        return Ok(zero);
    }
    let needed = target.iter().sum::<i64>() as u32;
    let order = match truncation {
        Some(t) if t < needed => return Err(Error::TruncationTooSmall { order: t, needed }),
        Some(t) => t,
        None => default_truncation(x).max(needed),
    };
    let body = expand_factors::<C>(f, &frame, chart, order)?.body().clone();
    let scalar = C::from_rational(&(&f.scalar * det_e / &frame.det_b));

    if !f.exponential {
        let target_u: Vec<u32> = target.iter().map(|&r| r as u32).collect();
        return Ok(Polynomial::constant(Bank::Dual, s, body.coeff(&target_u).times(&scalar)));
    }
    // e^{⟨y|z⟩} = e^{Σ c_j(y) w_j} with c = B^{-1} y.
    let c: Vec<Polynomial<Rational>> = frame.binv.iter().map(|row| Polynomial::linear(Bank::Dual, row)).collect();
    let mut out = zero;
    for_each_bounded(&chart.exponents, &target, &mut |k, rem| {
        let coeff = body.coeff(&rem.iter().map(|&r| r as u32).collect::<Vec<_>>());
        if coeff.is_zero() {
            return;
        }
        let mut mono = Polynomial::one(Bank::Dual, s);
        let mut fact = Rational::one();
        for (cj, &kj) in c.iter().zip(k) {
            mono = mono.mul(&cj.pow(kj));
            for t in 1..=kj {
                fact *= Rational::from_integer(t.into());
            }
        }
        let w = coeff.times(&scalar);
        let term = mono.map_coeffs(|q| C::from_rational(&(q / &fact)).times(&w));
        out = out.add(&term);
    });
    Ok(out)
}

/// `j_b f`: the denominator and numerator of `f` (without the exponential
/// and without the Jacobian) as one Laurent series in the standard chart.
pub fn substitute_jb<C: Coeff>(f: &RationalFunctionSpec, b: &BasisRef, order: u32) -> Result<LaurentSeries<C>> {
    let chart = Chart::standard(b);
    let frame = Frame::new(&f.list, &chart)?;
    expand_factors(f, &frame, &chart, order)
}

/// The image of the linear form `⟨a, z⟩` in the standard chart of `b`, as a
/// polynomial in `u` (ambient bank).
pub fn chart_image(x: &VectorList, b: &BasisRef, a: &[i64]) -> Result<Polynomial<Rational>> {
    let chart = Chart::standard(b);
    let frame = Frame::new(x, &chart)?;
    let alpha = frame.alpha(&crate::exactcore::linalg::to_rational_vec(a));
    Ok(Polynomial::from_terms(Bank::Ambient, x.dim(), alpha.into_iter().zip(chart.exponents).map(|(q, e)| (e, q))))
}

/// `res_b(f·dz)` in the standard chart.
pub fn form_residue(f: &RationalFunctionSpec, b: &BasisRef, truncation: Option<u32>) -> Result<ResidueValue<Rational>> {
    chart_residue(f, &Chart::standard(b), truncation)
}

/// `res_b(ω_c)`.
pub fn omega_residue(x: &VectorList, c: &BasisRef, b: &BasisRef) -> Result<Rational> {
    let r = form_residue(&RationalFunctionSpec::omega(x, c), b, None)?;
    Ok(r.coeff(&vec![0; x.dim()]))
}

/// Positions of `X_φ = {a : ⟨φ,a⟩ ∈ Z}`.
pub fn trivial_positions(x: &VectorList, phi: &TorusPoint) -> Vec<usize> {
    (0..x.len()).filter(|&i| phi.is_trivial_on(x.vector(i))).collect()
}

/// `res_{b,φ}` of `e^{⟨y|z⟩}∏_{a∈X}(1 − e^{−2πi⟨φ,a⟩}e^{−a})^{−1}dz`, with
/// coefficients in `Q(ζ_m)`, `m` the order of `φ`.
pub fn twisted_residue(
    x: &VectorList,
    phi: &TorusPoint,
    b: &BasisRef,
    truncation: Option<u32>,
) -> Result<ResidueValue<CycloNum>> {
    if phi.dim() != x.dim() {
        return Err(Error::InvalidTorusPoint(format!("expected {} coordinates, got {}", x.dim(), phi.dim())));
    }
    if let Some(&i) = b.indices.iter().find(|&&i| !phi.is_trivial_on(x.vector(i))) {
        return Err(Error::InvalidArgument(format!("basis element {} is not in X_φ for φ = {phi}", i + 1)));
    }
    let m = phi.order();
    let r = chart_residue::<CycloNum>(&RationalFunctionSpec::twisted(x, phi), &Chart::standard(b), truncation)?;
    Ok(r.map_coeffs(|c| c.promote(m)))
}
