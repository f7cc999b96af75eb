//! Matroid data of an ordered list of integer vectors: bases, hyperplanes
//! and minimal cocircuits, the broken-circuit statistic, no-broken-circuit
//! bases, the Hilbert series of `D(X)` and the weighted count `δ(X)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcore::linalg::{det_int, primitive_normal, rank_of_vectors, to_rational_vec};
use crate::exactcore::Rational;

/// Ordered list `a_1, …, a_N` of nonzero vectors in `Z^s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VectorList {
    dim: usize,
    vectors: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
struct RawList {
    dim: usize,
    vectors: Vec<Vec<i64>>,
}

impl VectorList {
    /// Validates and builds a top-level list, which must span `Q^dim`.
    pub fn new(dim: usize, vectors: Vec<Vec<i64>>) -> Result<Self> {
        let list = Self::sublist_of(dim, vectors)?;
        if list.rank() != dim {
            return Err(Error::NotSpanning(dim));
        }
        Ok(list)
    }

    /// Builds a list that need not span (sublists, restrictions).
    pub fn sublist_of(dim: usize, vectors: Vec<Vec<i64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { position: i, expected: dim, found: v.len() });
            }
            if v.iter().all(|&x| x == 0) {
                return Err(Error::ZeroVector(i));
            }
        }
        Ok(VectorList { dim, vectors })
    }

    /// Parses `{"dim": s, "vectors": [[…], …]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawList = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.dim, raw.vectors)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("vector lists serialize")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[i64] {
        &self.vectors[i]
    }

    pub fn rational(&self, i: usize) -> Vec<Rational> {
        to_rational_vec(&self.vectors[i])
    }

    pub fn rank(&self) -> usize {
        self.rank_of(&(0..self.len()).collect::<Vec<_>>())
    }

    pub fn rank_of(&self, indices: &[usize]) -> usize {
        let vs: Vec<Vec<Rational>> = indices.iter().map(|&i| self.rational(i)).collect();
        rank_of_vectors(&vs)
    }

    pub fn spans(&self) -> bool {
        self.rank() == self.dim
    }

    /// The sublist at the given positions, in the given order.
    pub fn select(&self, indices: &[usize]) -> VectorList {
        VectorList { dim: self.dim, vectors: indices.iter().map(|&i| self.vectors[i].clone()).collect() }
    }

    /// `X^k`: every vector repeated `k` times in place.
    pub fn repeated(&self, k: usize) -> VectorList {
        let vectors = self.vectors.iter().flat_map(|v| std::iter::repeat_n(v.clone(), k)).collect();
        VectorList { dim: self.dim, vectors }
    }

    /// Sum of the vectors at the given positions.
    pub fn sum_of(&self, indices: &[usize]) -> Vec<i64> {
        let mut out = vec![0; self.dim];
        for &i in indices {
            for (o, x) in out.iter_mut().zip(&self.vectors[i]) {
                *o += x;
            }
        }
        out
    }

    pub fn det_of(&self, indices: &[usize]) -> i64 {
        let cols: Vec<&[i64]> = indices.iter().map(|&i| self.vectors[i].as_slice()).collect();
        det_int(&cols)
    }

    fn require_spanning(&self) -> Result<()> {
        if self.spans() {
            Ok(())
        } else {
            Err(Error::NotSpanning(self.dim))
        }
    }
}

impl fmt::Display for VectorList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vectors
            .iter()
            .map(|v| format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A basis extracted from the list, by strictly increasing positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisRef {
    pub indices: Vec<usize>,
    pub det: i64,
}

impl BasisRef {
    /// Checks that `indices` select a basis of `Q^s` from `x`.
    pub fn new(x: &VectorList, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if indices.len() != x.dim() || indices.iter().any(|&i| i >= x.len()) {
            return Err(Error::NotABasis(indices));
        }
        let det = x.det_of(&indices);
        if det == 0 {
            return Err(Error::NotABasis(indices));
        }
        Ok(BasisRef { indices, det })
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Display label with one-based positions, e.g. `b13`.
    pub fn label(&self) -> String {
        let sep = if self.indices.iter().any(|&i| i >= 9) { "," } else { "" };
        let parts: Vec<String> = self.indices.iter().map(|i| (i + 1).to_string()).collect();
        format!("b{}", parts.join(sep))
    }
}

/// A hyperplane spanned by elements of the list, with its complete sublist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    /// Primitive integer normal, positive leading nonzero entry.
    pub normal: Vec<i64>,
    /// Positions of the elements lying on the hyperplane.
    pub members: Vec<usize>,
}

/// A cocircuit: positions whose removal leaves a non-spanning list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cocircuit {
    pub indices: Vec<usize>,
}

/// Polynomial in `q` with nonnegative integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertSeries {
    pub coeffs: Vec<u64>,
}

impl HilbertSeries {
    fn from_coeffs(mut coeffs: Vec<u64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        HilbertSeries { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, q: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * q + c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    /// `H(q^k)`.
    pub fn substitute_power(&self, k: usize) -> Self {
        let mut out = vec![0; self.degree() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = *c;
        }
        Self::from_coeffs(out)
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            parts.push(match i {
                0 => coef,
                1 => format!("{coef}q"),
                _ => format!("{coef}q^{i}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), &mut f);
}

/// All bases in lexicographic order of positions.
pub fn enumerate_bases(x: &VectorList) -> Result<Vec<BasisRef>> {
    x.require_spanning()?;
    Ok(bases_unchecked(x))
}

/// Bases of `Q^s` contained in `x`; empty when `x` does not span.
pub(crate) fn bases_unchecked(x: &VectorList) -> Vec<BasisRef> {
    let mut out = Vec::new();
    for_each_subset(x.len(), x.dim(), |idx| {
        let det = x.det_of(idx);
        if det != 0 {
            out.push(BasisRef { indices: idx.to_vec(), det });
        }
    });
    out
}

/// Number of bases `d(X)`.
pub fn d(x: &VectorList) -> Result<usize> {
    Ok(enumerate_bases(x)?.len())
}

/// Every hyperplane spanned by elements of `x`, in order of first
/// appearance among `(s-1)`-subsets. In dimension one the only proper
/// subspace is `{0}`, whose complete sublist is empty.
pub fn hyperplanes(x: &VectorList) -> Result<Vec<Hyperplane>> {
    x.require_spanning()?;
    let s = x.dim();
    let mut seen: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
    let mut out = Vec::new();
    for_each_subset(x.len(), s - 1, |idx| {
        let vs: Vec<Vec<i64>> = idx.iter().map(|&i| x.vector(i).to_vec()).collect();
        let Some(normal) = primitive_normal(&vs, s) else { return };
        if seen.insert(normal.clone(), ()).is_some() {
            return;
        }
        let members = (0..x.len()).filter(|&i| pairing_int(&normal, x.vector(i)) == 0).collect();
        out.push(Hyperplane { normal, members });
    });
    Ok(out)
}

pub(crate) fn pairing_int(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One minimal cocircuit per hyperplane: the elements off that hyperplane.
pub fn minimal_cocircuits(x: &VectorList) -> Result<Vec<Cocircuit>> {
    Ok(hyperplanes(x)?
        .into_iter()
        .map(|h| Cocircuit { indices: (0..x.len()).filter(|i| !h.members.contains(i)).collect() })
        .collect())
}

/// The set `B(b)` of elements breaking `b`, and its size `n(b)`.
///
/// `a_i` breaks `b = (a_{i_1}, …, a_{i_s})` if for some `e` with `i ≤ i_e`
/// it lies in the span of `a_{i_e}, …, a_{i_s}`; the spans shrink with `e`,
/// so only the first such `e` needs checking.
pub fn broken_statistic(x: &VectorList, b: &BasisRef) -> (Vec<usize>, usize) {
    let suffix_ranks: Vec<usize> = (0..b.indices.len()).map(|e| x.rank_of(&b.indices[e..])).collect();
    let mut broken = Vec::new();
    for i in 0..x.len() {
        let Some(e) = b.indices.iter().position(|&ie| ie >= i) else { continue };
        let mut with = b.indices[e..].to_vec();
        with.push(i);
        if x.rank_of(&with) == suffix_ranks[e] {
            broken.push(i);
        }
    }
    let n = broken.len();
    (broken, n)
}

pub fn is_nbc(x: &VectorList, b: &BasisRef) -> bool {
    broken_statistic(x, b).1 == x.dim()
}

/// Bases with `n(b) = s`, in lexicographic order.
pub fn nbc_bases(x: &VectorList) -> Result<Vec<BasisRef>> {
    Ok(enumerate_bases(x)?.into_iter().filter(|b| is_nbc(x, b)).collect())
}

/// `H_X(q) = Σ_b q^{N - n(b)}` over all bases.
pub fn hilbert_series(x: &VectorList) -> Result<HilbertSeries> {
    let n = x.len();
    let mut coeffs = vec![0u64; n - x.dim() + 1];
    for b in enumerate_bases(x)? {
        let (_, nb) = broken_statistic(x, &b);
        coeffs[n - nb] += 1;
    }
    Ok(HilbertSeries::from_coeffs(coeffs))
}

/// Hilbert series of `X^k` in closed form, `H_X(q^k)·((q^k-1)/(q-1))^s`.
pub fn hilbert_repeated(x: &VectorList, k: usize) -> Result<HilbertSeries> {
    if k == 0 {
        return Err(Error::InvalidArgument("repetition count must be positive".into()));
    }
    let base = hilbert_series(x)?.substitute_power(k);
    let geometric = HilbertSeries::from_coeffs(vec![1; k]);
    Ok((0..x.dim()).fold(base, |acc, _| acc.mul(&geometric)))
}

/// `δ(X) = Σ_b |det b|`.
pub fn delta(x: &VectorList) -> Result<u64> {
    Ok(enumerate_bases(x)?.iter().map(|b| b.det.unsigned_abs()).sum())
}
