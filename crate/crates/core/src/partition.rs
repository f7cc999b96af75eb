//! The discrete side: points of the toric arrangement, the quasi-polynomial
//! `P_X` on a big cell, exact evaluation and brute-force oracles.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use num::{BigInt, Integer, One, Signed, Zero};
use serde_json::{json, Map, Value};

use crate::chambers::{Arrangement, CellSignature};
use crate::error::{Error, Result};
use crate::exactcore::linalg::smith_normal_form;
use crate::exactcore::{format_rational, parse_rational, Bank, CycloNum, Polynomial, Rational, Ring};
use crate::matroid::{d, delta, enumerate_bases, hyperplanes, nbc_bases, pairing_int, BasisRef, VectorList};
use crate::residue::{trivial_positions, twisted_residue};

/// A character `λ ↦ e^{2πi⟨φ,λ⟩}` of finite order, stored by its
/// representative `φ ∈ [0,1)^s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    coords: Vec<Rational>,
    order: u32,
}

impl TorusPoint {
    /// Reduces every coordinate into `[0,1)`.
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidTorusPoint("empty coordinate vector".into()));
        }
        let coords: Vec<Rational> = coords.into_iter().map(|c| &c - c.floor()).collect();
        let order = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let order = u32::try_from(order).map_err(|_| Error::InvalidTorusPoint("order too large".into()))?;
        Ok(TorusPoint { coords, order })
    }

    pub fn zero(dim: usize) -> Self {
        TorusPoint { coords: vec![Rational::zero(); dim], order: 1 }
    }

    /// Parses `"p/q,p/q,…"`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(text.split(',').map(|t| parse_rational(t.trim())).collect::<Result<_>>()?)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.order == 1
    }

    /// `-φ` mod `Z^s`.
    pub fn negate(&self) -> Self {
        Self::new(self.coords.iter().map(|c| -c).collect()).expect("nonempty")
    }

    /// `⟨φ, a⟩`.
    pub fn pair(&self, a: &[i64]) -> Rational {
        self.coords.iter().zip(a).map(|(c, &x)| c * Rational::from_integer(x.into())).sum()
    }

    /// `k` with `e^{2πi⟨φ,a⟩} = ζ_m^k`, `m` the order of `φ`, `0 ≤ k < m`.
    pub fn exponent(&self, a: &[i64]) -> i64 {
        let v = self.pair(a) * Rational::from_integer(self.order.into());
        debug_assert!(v.is_integer());
        let k: i64 = v.to_integer().mod_floor(&BigInt::from(self.order)).try_into().expect("small exponent");
        k
    }

    pub fn is_trivial_on(&self, a: &[i64]) -> bool {
        self.pair(a).is_integer()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }
}

impl std::fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

/// `T(b) = {φ : ⟨φ, a⟩ ∈ Z for a ∈ b}` for a basis `b`, via the Smith form
/// of the matrix whose rows are the elements of `b`.
fn basis_torus(x: &VectorList, b: &BasisRef) -> Vec<TorusPoint> {
    let rows: Vec<Vec<i64>> = b.indices.iter().map(|&i| x.vector(i).to_vec()).collect();
    let snf = smith_normal_form(&rows);
    let diag = snf.diagonal();
    let s = x.dim();
    let mut out = Vec::new();
    let mut m = vec![BigInt::zero(); s];
    loop {
        // φ = V · (m_i / d_i)
        let coords: Vec<Rational> =
            (0..s).map(|r| (0..s).map(|c| Rational::new(&snf.v[r][c] * &m[c], diag[c].clone())).sum()).collect();
        out.push(TorusPoint::new(coords).expect("nonempty"));
        let mut k = 0;
        loop {
            if k == s {
                return out;
            }
            m[k] += 1;
            if m[k] < diag[k] {
                break;
            }
            m[k] = BigInt::zero();
            k += 1;
        }
    }
}

/// The points `P(X) = ∪_b T(b)` of the toric arrangement, sorted.
pub fn torus_points(x: &VectorList) -> Result<Vec<TorusPoint>> {
    let mut set = BTreeSet::new();
    for b in enumerate_bases(x)? {
        set.extend(basis_torus(x, &b));
    }
    Ok(set.into_iter().collect())
}

/// `X_φ = {a ∈ X : ⟨φ, a⟩ ∈ Z}`, in the order of `X`.
pub fn x_sub_phi(x: &VectorList, phi: &TorusPoint) -> VectorList {
    let keep = trivial_positions(x, phi);
    VectorList::sublist_of(x.dim(), keep.iter().map(|&i| x.vector(i).to_vec()).collect()).expect("dimensions agree")
}

/// NBC bases of `X_φ`, as bases of `X`.
pub fn trivial_nbc(x: &VectorList, phi: &TorusPoint) -> Result<Vec<BasisRef>> {
    let pos = trivial_positions(x, phi);
    nbc_bases(&x.select(&pos))?
        .into_iter()
        .map(|b| BasisRef::new(x, b.indices.iter().map(|&i| pos[i]).collect()))
        .collect()
}

/// Both sides of `Σ_{φ∈P(X)} d(X_φ) = δ(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaReport {
    pub delta: u64,
    pub per_point: Vec<(TorusPoint, u64)>,
    /// `dim D(X) = d(X)`, the `φ = 0` summand.
    pub dx_dim: u64,
    /// `Σ_{φ≠0} d(X_φ)`.
    pub twisted_dim: u64,
}

impl DeltaReport {
    pub fn total(&self) -> u64 {
        self.per_point.iter().map(|(_, n)| n).sum()
    }
}

pub fn delta_identity_check(x: &VectorList) -> Result<DeltaReport> {
    let delta = delta(x)?;
    let mut per_point = Vec::new();
    for phi in torus_points(x)? {
        let n = d(&x_sub_phi(x, &phi))? as u64;
        per_point.push((phi, n));
    }
    let dx_dim = per_point.iter().filter(|(p, _)| p.is_zero()).map(|(_, n)| n).sum();
    let twisted_dim = per_point.iter().filter(|(p, _)| !p.is_zero()).map(|(_, n)| n).sum();
    let report = DeltaReport { delta, per_point, dx_dim, twisted_dim };
    if report.total() != delta {
        return Err(Error::Internal(format!("Σ d(X_φ) = {} but δ(X) = {delta}", report.total())));
    }
    Ok(report)
}

/// `P_X` on one big cell: `Σ_φ e^{2πi⟨φ,x⟩} q_φ(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiPolynomial {
    pub witness: Vec<Rational>,
    pub terms: Vec<(TorusPoint, Polynomial<CycloNum>)>,
    pub modulus: u32,
}

impl QuasiPolynomial {
    pub fn dim(&self) -> usize {
        self.witness.len()
    }

    /// Exact value at a lattice point.
    pub fn eval(&self, v: &[i64]) -> CycloNum {
        let p: Vec<Rational> = v.iter().map(|&a| Rational::from_integer(a.into())).collect();
        let mut total = CycloNum::zero();
        for (phi, q) in &self.terms {
            let chi = CycloNum::root_of_unity(phi.order(), phi.exponent(v));
            total = total.plus(&chi.times(&q.eval_rational(&p)));
        }
        total
    }

    /// The polynomial agreeing with `self` on `r + M·Z^s`.
    pub fn coset_polynomial(&self, r: &[i64]) -> Result<Polynomial<Rational>> {
        if r.len() != self.dim() {
            return Err(Error::InvalidArgument(format!("residue class needs {} coordinates", self.dim())));
        }
        let mut acc = Polynomial::zero(Bank::Dual, self.dim());
        for (phi, q) in &self.terms {
            let chi = CycloNum::root_of_unity(phi.order(), phi.exponent(r));
            acc = acc.add(&q.map_coeffs(|c| chi.times(c)));
        }
        let mut out = Vec::new();
        for (e, c) in acc.terms() {
            let q = c.to_rational().ok_or_else(|| Error::Internal(format!("coset coefficient {c} is not rational")))?;
            out.push((e.clone(), q));
        }
        Ok(Polynomial::from_terms(Bank::Dual, self.dim(), out))
    }

    /// All residue classes of `(Z/M)^s`, in lexicographic order.
    pub fn residue_classes(&self) -> Vec<Vec<i64>> {
        let m = self.modulus as i64;
        let mut out = vec![vec![]];
        for _ in 0..self.dim() {
            out = out.into_iter().flat_map(|r: Vec<i64>| (0..m).map(move |k| [r.clone(), vec![k]].concat())).collect();
        }
        out
    }

    /// `{"modulus", "cell_witness", "terms": [{"phi", "order", "poly"}], "cosets"?}`.
    pub fn to_json(&self, cosets: Option<&[Vec<i64>]>) -> Result<Value> {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(phi, q)| {
                let poly: Map<String, Value> = q
                    .terms()
                    .map(|(e, c)| {
                        let coords =
                            c.promote(phi.order()).coords().iter().map(|r| json!(format_rational(r))).collect();
                        (exponent_key(e), Value::Array(coords))
                    })
                    .collect();
                json!({ "phi": phi.to_strings(), "order": phi.order(), "poly": poly })
            })
            .collect();
        let mut obj = json!({
            "modulus": self.modulus,
            "cell_witness": self.witness.iter().map(format_rational).collect::<Vec<_>>(),
            "terms": terms,
        });
        if let Some(rs) = cosets {
            let mut map = Map::new();
            for r in rs {
                let p = self.coset_polynomial(r)?;
                let poly: Map<String, Value> =
                    p.terms().map(|(e, c)| (exponent_key(e), json!(format_rational(c)))).collect();
                map.insert(exponent_key_i(r), Value::Object(poly));
            }
            obj["cosets"] = Value::Object(map);
        }
        Ok(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("quasi-polynomial: {what}"));
        let modulus = v["modulus"].as_u64().ok_or_else(|| bad("missing modulus"))? as u32;
        let witness = rational_list(&v["cell_witness"]).ok_or_else(|| bad("bad cell_witness"))??;
        let s = witness.len();
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let phi = TorusPoint::new(rational_list(&t["phi"]).ok_or_else(|| bad("bad phi"))??)?;
            let order = t["order"].as_u64().ok_or_else(|| bad("missing order"))? as u32;
            if order != phi.order() {
                return Err(bad("order does not match phi"));
            }
            let mut poly = Vec::new();
            for (k, c) in t["poly"].as_object().ok_or_else(|| bad("missing poly"))? {
                let e: Vec<u32> = k
                    .split(',')
                    .map(|p| p.trim().parse::<u32>().map_err(|_| bad("bad exponent")))
                    .collect::<Result<_>>()?;
                if e.len() != s {
                    return Err(bad("exponent length"));
                }
                let coords = rational_list(c).ok_or_else(|| bad("bad coefficient"))??;
                poly.push((e, CycloNum::new(order, coords)));
            }
            terms.push((phi, Polynomial::from_terms(Bank::Dual, s, poly)));
        }
        Ok(QuasiPolynomial { witness, terms, modulus })
    }
}

fn exponent_key(e: &[u32]) -> String {
    e.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn exponent_key_i(e: &[i64]) -> String {
    e.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn rational_list(v: &Value) -> Option<Result<Vec<Rational>>> {
    let arr = v.as_array()?;
    Some(
        arr.iter()
            .map(|c| match c {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => parse_rational(&n.to_string()),
                _ => Err(Error::Parse(format!("not a rational: {c}"))),
            })
            .collect(),
    )
}

/// `P_X` for one list, with quasi-polynomials cached per big cell.
#[derive(Debug)]
pub struct PartitionFunction {
    arrangement: Arrangement,
    points: Vec<TorusPoint>,
    truncation: Option<u32>,
    cells: Mutex<BTreeMap<Vec<BasisRef>, QuasiPolynomial>>,
}

impl PartitionFunction {
    pub fn new(x: &VectorList) -> Result<Self> {
        Self::with_truncation(x, None)
    }

    pub fn with_truncation(x: &VectorList, truncation: Option<u32>) -> Result<Self> {
        Ok(PartitionFunction {
            arrangement: Arrangement::new(x)?,
            points: torus_points(x)?,
            truncation,
            cells: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn torus_points(&self) -> &[TorusPoint] {
        &self.points
    }

    pub fn quasipoly(&self, cell: &CellSignature) -> Result<QuasiPolynomial> {
        if let Some(q) = self.cells.lock().unwrap().get(&cell.key) {
            return Ok(q.clone());
        }
        let q = self.assemble(cell)?;
        self.cells.lock().unwrap().insert(cell.key.clone(), q.clone());
        Ok(q)
    }

    fn assemble(&self, cell: &CellSignature) -> Result<QuasiPolynomial> {
        let x = self.arrangement.list();
        let s = x.dim();
        let mut terms = Vec::new();
        let mut modulus = 1u32;
        for phi in &self.points {
            let mut acc = Polynomial::zero(Bank::Dual, s);
            for b in trivial_nbc(x, phi)? {
                if !cell.key.contains(&b) {
                    continue;
                }
                let r = twisted_residue(x, phi, &b, self.truncation)?;
                acc = acc.add(&if b.det < 0 { r.map_coeffs(|c| c.negate()) } else { r });
            }
            if !acc.is_zero() {
                modulus = modulus.lcm(&phi.order());
                terms.push((phi.clone(), acc));
            }
        }
        Ok(QuasiPolynomial { witness: cell.witness.clone(), terms, modulus })
    }

    /// The quasi-polynomial of the cell containing (or adjacent to) `v`.
    pub fn quasipoly_at(&self, v: &[Rational]) -> Result<QuasiPolynomial> {
        self.quasipoly(&self.arrangement.locate_cell(v)?)
    }

    pub fn eval(&self, v: &[i64]) -> Result<BigInt> {
        let p: Vec<Rational> = v.iter().map(|&a| Rational::from_integer(a.into())).collect();
        let cell = match self.arrangement.locate_cell(&p) {
            Ok(c) => c,
            Err(Error::OutsideCone) => return Ok(BigInt::zero()),
            Err(e) => return Err(e),
        };
        let value = self.quasipoly(&cell)?.eval(v);
        match value.to_rational() {
            Some(q) if q.is_integer() && !q.is_negative() => Ok(q.to_integer()),
            _ => Err(Error::Internal(format!("partition value {value} at {v:?} is not a nonnegative integer"))),
        }
    }
}

pub fn quasipoly_on_cell(x: &VectorList, cell: &CellSignature) -> Result<QuasiPolynomial> {
    PartitionFunction::new(x)?.quasipoly(cell)
}

/// `P_X(v)`, the number of ways to write `v` as a nonnegative integer
/// combination of `X`.
pub fn partition_eval(x: &VectorList, v: &[i64]) -> Result<BigInt> {
    PartitionFunction::new(x)?.eval(v)
}

pub fn coset_polynomials(qp: &QuasiPolynomial, r: &[i64]) -> Result<Polynomial<Rational>> {
    qp.coset_polynomial(r)
}

/// An integer functional strictly positive on every element of `X`.
pub fn positive_functional(x: &VectorList) -> Result<Vec<i64>> {
    let ones = vec![1; x.dim()];
    if x.vectors().iter().all(|a| pairing_int(&ones, a) > 0) {
        return Ok(ones);
    }
    // Sum of the supporting facet normals: nonnegative on X, and zero on an
    // element only if it lies on every facet, impossible for a pointed cone.
    let mut l = vec![0i64; x.dim()];
    for h in hyperplanes(x)? {
        let signs: Vec<i64> = x.vectors().iter().map(|a| pairing_int(&h.normal, a).signum()).collect();
        let sign = if signs.iter().all(|&g| g >= 0) {
            1
        } else if signs.iter().all(|&g| g <= 0) {
            -1
        } else {
            continue;
        };
        for (lk, n) in l.iter_mut().zip(&h.normal) {
            *lk += sign * n;
        }
    }
    if x.dim() == 1 {
        // the only hyperplane is {0}; a pointed cone is a half-line
        if let Some(a) = x.vectors().first() {
            l = vec![a[0].signum()];
        }
    }
    if x.vectors().iter().all(|a| pairing_int(&l, a) > 0) {
        Ok(l)
    } else {
        Err(Error::NotPointed)
    }
}

/// `P_X(v)` by dynamic programming over the multiplicities.
pub fn brute_force_partition(x: &VectorList, v: &[i64]) -> Result<BigInt> {
    if v.len() != x.dim() {
        return Err(Error::InvalidArgument(format!("point needs {} coordinates", x.dim())));
    }
    let l = positive_functional(x)?;
    let mut memo = HashMap::new();
    Ok(count_from(x, &l, v.to_vec(), 0, &mut memo))
}

fn count_from(
    x: &VectorList,
    l: &[i64],
    v: Vec<i64>,
    k: usize,
    memo: &mut HashMap<(Vec<i64>, usize), BigInt>,
) -> BigInt {
    if k == x.len() {
        return if v.iter().all(|&c| c == 0) { BigInt::one() } else { BigInt::zero() };
    }
    if pairing_int(l, &v) < 0 {
        return BigInt::zero();
    }
    if let Some(c) = memo.get(&(v.clone(), k)) {
        return c.clone();
    }
    let a = x.vector(k);
    let mut total = BigInt::zero();
    let mut rest = v.clone();
    while pairing_int(l, &rest) >= 0 {
        total += count_from(x, l, rest.clone(), k + 1, memo);
        for (r, &c) in rest.iter_mut().zip(a) {
            *r -= c;
        }
    }
    memo.insert((v, k), total.clone());
    total
}

/// Number of 0/1 vectors `n` with `Σ n_i a_i = v`.
pub fn brute_force_01(x: &VectorList, v: &[i64]) -> u64 {
    let mut count = 0;
    for mask in 0u64..(1u64 << x.len()) {
        let mut sum = vec![0i64; x.dim()];
        for i in (0..x.len()).filter(|&i| mask >> i & 1 == 1) {
            for (s, &c) in sum.iter_mut().zip(x.vector(i)) {
                *s += c;
            }
        }
        if sum == v {
            count += 1;
        }
    }
    count
}
