//! Exact geometry of the cone `C(X)`: regular points, point location in big
//! cells, paving of the zonotope `B(X)` and lattice-point counts.

use std::collections::BTreeSet;

use num::{BigInt, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactcore::linalg::{columns_to_matrix, coordinates, dot, inverse, mat_vec, to_rational_vec, Matrix};
use crate::exactcore::{format_rational, Rational};
use crate::matroid::{bases_unchecked, for_each_subset, hyperplanes, is_nbc, BasisRef, VectorList};

/// Precomputed data for repeated geometric queries on one list.
#[derive(Clone, Debug)]
pub struct Arrangement {
    list: VectorList,
    normals: Vec<Vec<Rational>>,
    bases: Vec<BasisRef>,
    inverses: Vec<Matrix>,
    nbc: Vec<bool>,
}

impl Arrangement {
    pub fn new(x: &VectorList) -> Result<Self> {
        let normals = hyperplanes(x)?.into_iter().map(|h| to_rational_vec(&h.normal)).collect();
        let bases = bases_unchecked(x);
        let inverses = bases.iter().map(|b| basis_inverse(x, b)).collect();
        let nbc = bases.iter().map(|b| is_nbc(x, b)).collect();
        Ok(Arrangement { list: x.clone(), normals, bases, inverses, nbc })
    }

    pub fn list(&self) -> &VectorList {
        &self.list
    }

    pub fn normals(&self) -> &[Vec<Rational>] {
        &self.normals
    }

    pub fn bases(&self) -> &[BasisRef] {
        &self.bases
    }

    pub fn nbc_bases(&self) -> Vec<BasisRef> {
        self.bases.iter().zip(&self.nbc).filter(|(_, &n)| n).map(|(b, _)| b.clone()).collect()
    }

    fn position(&self, b: &BasisRef) -> Option<usize> {
        self.bases.binary_search(b).ok()
    }

    /// Coordinates of `p` in the basis `b`.
    pub fn basis_coordinates(&self, b: &BasisRef, p: &[Rational]) -> Vec<Rational> {
        match self.position(b) {
            Some(k) => mat_vec(&self.inverses[k], p),
            None => mat_vec(&basis_inverse(&self.list, b), p),
        }
    }

    pub fn in_basis_cone(&self, b: &BasisRef, p: &[Rational]) -> bool {
        self.basis_coordinates(b, p).iter().all(|t| !t.is_negative())
    }

    /// Closed cone membership `p ∈ C(X)`.
    pub fn in_cone(&self, p: &[Rational]) -> bool {
        self.bases.iter().any(|b| self.in_basis_cone(b, p))
    }

    pub fn on_some_wall(&self, p: &[Rational]) -> bool {
        self.normals.iter().any(|n| dot(n, p).is_zero())
    }

    pub fn is_regular(&self, p: &[Rational]) -> bool {
        !self.on_some_wall(p) && self.in_cone(p)
    }

    /// The deterministic interior probe: `Σa + 2^{-t}(t, t², …, t^s)` for
    /// the first `t = 1, 2, …` giving a regular point.
    pub fn probe(&self) -> Vec<Rational> {
        let s = self.list.dim();
        let base: Vec<Rational> = to_rational_vec(&self.list.sum_of(&(0..self.list.len()).collect::<Vec<_>>()));
        for t in 1i64.. {
            let scale = Rational::new(BigInt::one(), BigInt::from(2).pow(t as u32));
            let q: Vec<Rational> =
                (0..s).map(|i| &base[i] + &scale * Rational::from_integer(BigInt::from(t).pow(i as u32 + 1))).collect();
            if self.is_regular(&q) {
                return q;
            }
        }
        unreachable!("moment-curve probes eventually avoid every wall")
    }

    /// Big cell whose closure contains `p`, approached from the probe side.
    pub fn locate_cell(&self, p: &[Rational]) -> Result<CellSignature> {
        if p.len() != self.list.dim() {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, expected {}",
                p.len(),
                self.list.dim()
            )));
        }
        if !self.in_cone(p) {
            return Err(Error::OutsideCone);
        }
        let q = self.probe();
        let dir: Vec<Rational> = q.iter().zip(p).map(|(a, b)| a - b).collect();
        let mut t_min: Option<Rational> = None;
        for n in &self.normals {
            let den = dot(n, &dir);
            if den.is_zero() {
                continue;
            }
            let t = -dot(n, p) / den;
            if t.is_positive() && t_min.as_ref().is_none_or(|m| &t < m) {
                t_min = Some(t);
            }
        }
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let t = match t_min {
            Some(m) if m < Rational::from_integer(2.into()) => m * half,
            _ => Rational::one(),
        };
        let witness: Vec<Rational> = p.iter().zip(&dir).map(|(a, d)| a + &t * d).collect();
        Ok(self.signature_of(witness))
    }

    fn signature_of(&self, witness: Vec<Rational>) -> CellSignature {
        let mut key = Vec::new();
        let mut nbc = Vec::new();
        for (k, b) in self.bases.iter().enumerate() {
            if mat_vec(&self.inverses[k], &witness).iter().all(|t| t.is_positive()) {
                key.push(b.clone());
                if self.nbc[k] {
                    nbc.push(b.clone());
                }
            }
        }
        CellSignature { nbc, key, witness }
    }
}

fn basis_inverse(x: &VectorList, b: &BasisRef) -> Matrix {
    let cols: Vec<Vec<Rational>> = b.indices.iter().map(|&i| x.rational(i)).collect();
    inverse(&columns_to_matrix(&cols, x.dim())).expect("bases are invertible")
}

/// A big cell, described by the cones containing it and an interior point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSignature {
    /// NBC bases whose cones contain the cell.
    pub nbc: Vec<BasisRef>,
    /// All bases whose cones contain the cell; identifies the cell.
    pub key: Vec<BasisRef>,
    /// A regular point inside the cell.
    pub witness: Vec<Rational>,
}

impl CellSignature {
    pub fn witness_strings(&self) -> Vec<String> {
        self.witness.iter().map(format_rational).collect()
    }
}

pub fn is_regular(x: &VectorList, p: &[Rational]) -> Result<bool> {
    Ok(Arrangement::new(x)?.is_regular(p))
}

/// Closed membership of `p` in the cone spanned by the basis `b`.
pub fn cone_membership(x: &VectorList, p: &[Rational], b: &BasisRef) -> bool {
    mat_vec(&basis_inverse(x, b), p).iter().all(|t| !t.is_negative())
}

pub fn locate_cell(x: &VectorList, p: &[Rational]) -> Result<CellSignature> {
    Arrangement::new(x)?.locate_cell(p)
}

/// A parallelepiped `λ + Σ_{i∈b} [0,1]·a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PavingPiece {
    pub lambda: Vec<i64>,
    pub basis: BasisRef,
}

impl PavingPiece {
    /// Coordinates of `p − λ` in the basis.
    fn coords(&self, x: &VectorList, p: &[Rational]) -> Vec<Rational> {
        let shifted: Vec<Rational> =
            p.iter().zip(&self.lambda).map(|(a, &l)| a - Rational::from_integer(l.into())).collect();
        mat_vec(&basis_inverse(x, &self.basis), &shifted)
    }

    pub fn contains(&self, x: &VectorList, p: &[Rational]) -> bool {
        self.coords(x, p).iter().all(|t| !t.is_negative() && *t <= Rational::one())
    }

    pub fn contains_interior(&self, x: &VectorList, p: &[Rational]) -> bool {
        self.coords(x, p).iter().all(|t| t.is_positive() && *t < Rational::one())
    }
}

/// One parallelepiped per basis, tiling `B(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Paving {
    pub pieces: Vec<PavingPiece>,
}

impl Paving {
    pub fn volume(&self) -> u64 {
        self.pieces.iter().map(|p| p.basis.det.unsigned_abs()).sum()
    }
}

/// Paves `B(X)` recursively: with `X = (Z, y)`, the paving of `B(Z)` is
/// kept and, for every hyperplane `H` of `⟨Z⟩` spanned by elements of `Z`
/// and missing `y`, the paving of `B(Z ∩ H)` is translated by
/// `λ_{H,y} = Σ_{x∈Z, φ_H(x)>0} x` and extruded along `y`.
pub fn pave_box(x: &VectorList) -> Result<Paving> {
    if !x.spans() {
        return Err(Error::NotSpanning(x.dim()));
    }
    let all: Vec<usize> = (0..x.len()).collect();
    let mut pieces: Vec<PavingPiece> = pave_positions(x, &all)
        .into_iter()
        .map(|(lambda, mut idx)| {
            idx.sort_unstable();
            let basis = BasisRef::new(x, idx).expect("paving pieces come from bases");
            PavingPiece { lambda, basis }
        })
        .collect();
    pieces.sort_by(|a, b| a.basis.cmp(&b.basis));
    Ok(Paving { pieces })
}

fn pave_positions(x: &VectorList, positions: &[usize]) -> Vec<(Vec<i64>, Vec<usize>)> {
    let Some((&y, z)) = positions.split_last() else {
        return vec![(vec![0; x.dim()], Vec::new())];
    };
    let mut out = pave_positions(x, z);
    let r = x.rank_of(z);
    let yv = x.rational(y);
    if x.rank_of(positions) > r {
        for (_, idx) in out.iter_mut() {
            idx.push(y);
        }
        return out;
    }
    // Hyperplanes of ⟨Z⟩ spanned by elements of Z, as complete subsets.
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut extra = Vec::new();
    for_each_subset(z.len(), r - 1, |sel| {
        let gens: Vec<usize> = sel.iter().map(|&k| z[k]).collect();
        if x.rank_of(&gens) != r - 1 {
            return;
        }
        let mut with_y = gens.clone();
        with_y.push(y);
        if x.rank_of(&with_y) == r - 1 {
            return;
        }
        let members: Vec<usize> = z
            .iter()
            .copied()
            .filter(|&i| {
                let mut with = gens.clone();
                with.push(i);
                x.rank_of(&with) == r - 1
            })
            .collect();
        if !seen.insert(members.clone()) {
            return;
        }
        // φ_H: last coordinate in the basis (gens, y) of ⟨Z⟩.
        let mut cols: Vec<Vec<Rational>> = gens.iter().map(|&i| x.rational(i)).collect();
        cols.push(yv.clone());
        let phi = |v: &[Rational]| coordinates(&cols, v).expect("inside the span").pop().unwrap();
        let lambda = x.sum_of(&z.iter().copied().filter(|&i| phi(&x.rational(i)).is_positive()).collect::<Vec<_>>());
        for (mu, mut idx) in pave_positions(x, &members) {
            idx.push(y);
            extra.push((mu.iter().zip(&lambda).map(|(a, b)| a + b).collect(), idx));
        }
    });
    out.extend(extra);
    out
}

/// Bounds of `B(X)` along a linear functional: `(Σ min(0,⟨n,a⟩), Σ max(0,⟨n,a⟩))`.
fn support_range(x: &VectorList, n: &[Rational]) -> (Rational, Rational) {
    let mut lo = Rational::zero();
    let mut hi = Rational::zero();
    for i in 0..x.len() {
        let v = dot(n, &x.rational(i));
        if v.is_negative() {
            lo += v;
        } else {
            hi += v;
        }
    }
    (lo, hi)
}

/// Closed membership in the zonotope `B(X) = Σ [0,1]·a`.
pub fn in_zonotope(x: &VectorList, p: &[Rational]) -> Result<bool> {
    for h in hyperplanes(x)? {
        let n = to_rational_vec(&h.normal);
        let (lo, hi) = support_range(x, &n);
        let v = dot(&n, p);
        if v < lo || v > hi {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A point `x₀` with `⟨n, x₀⟩ ∉ Z` for every hyperplane normal `n`:
/// `x₀ = (1/p₁, …, 1/p_s)` for distinct primes `p_i` larger than every
/// normal coordinate.
pub fn generic_offset(x: &VectorList) -> Result<Vec<Rational>> {
    let bound = hyperplanes(x)?.iter().flat_map(|h| h.normal.iter().map(|c| c.abs())).max().unwrap_or(0).max(1);
    let mut primes = Vec::new();
    let mut n = bound + 1;
    while primes.len() < x.dim() {
        if (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0) && n > 1 {
            primes.push(n);
        }
        n += 1;
    }
    Ok(primes.into_iter().map(|p| Rational::new(1.into(), p.into())).collect())
}

/// `|(B(X) − x₀) ∩ Z^s|` by enumeration over the bounding box; `x₀` must
/// keep every lattice point off the boundary.
pub fn lattice_count_box(x: &VectorList, x0: &[Rational]) -> Result<u64> {
    let s = x.dim();
    if x0.len() != s {
        return Err(Error::InvalidArgument(format!("point has {} coordinates, expected {s}", x0.len())));
    }
    let normals: Vec<Vec<Rational>> = hyperplanes(x)?.into_iter().map(|h| to_rational_vec(&h.normal)).collect();
    if normals.iter().any(|n| dot(n, x0).is_integer()) {
        let shown: Vec<String> = x0.iter().map(format_rational).collect();
        return Err(Error::OnWall(format!("({})", shown.join(","))));
    }
    let ranges: Vec<(i64, i64)> = (0..s)
        .map(|i| {
            let lo: i64 = x.vectors().iter().map(|v| v[i].min(0)).sum();
            let hi: i64 = x.vectors().iter().map(|v| v[i].max(0)).sum();
            let f = |q: Rational| i64::try_from(q.to_integer()).expect("small bounds");
            (
                f((Rational::from_integer(lo.into()) - &x0[i]).floor()),
                f((Rational::from_integer(hi.into()) - &x0[i]).ceil()),
            )
        })
        .collect();
    let bounds: Vec<(Rational, Rational)> = normals.iter().map(|n| support_range(x, n)).collect();
    let mut count = 0;
    let mut z: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let p: Vec<Rational> = z.iter().zip(x0).map(|(&a, b)| Rational::from_integer(a.into()) + b).collect();
        if normals.iter().zip(&bounds).all(|(n, (lo, hi))| {
            let v = dot(n, &p);
            &v > lo && &v < hi
        }) {
            count += 1;
        }
        // odometer
        let mut k = 0;
        loop {
            if k == s {
                return Ok(count);
            }
            z[k] += 1;
            if z[k] <= ranges[k].1 {
                break;
            }
            z[k] = ranges[k].0;
            k += 1;
        }
    }
}
