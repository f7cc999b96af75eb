use std::collections::BTreeMap;

use num::Zero;

use crate::error::Result;
use crate::exactcore::linalg::kernel;
use crate::exactcore::{Bank, DiffOperator, Polynomial, Rational};
use crate::matroid::{minimal_cocircuits, VectorList};

/// Graded basis of `D(X)`: `graded[k]` spans the polynomials of degree `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DXSpace {
    pub graded: Vec<Vec<Polynomial<Rational>>>,
}

impl DXSpace {
    pub fn dims(&self) -> Vec<usize> {
        self.graded.iter().map(|g| g.len()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.graded.iter().map(|g| g.len()).sum()
    }

    pub fn basis(&self) -> impl Iterator<Item = &Polynomial<Rational>> {
        self.graded.iter().flatten()
    }
}

/// Exponent vectors of the degree-`k` monomials in `s` variables, in
/// lexicographically decreasing order.
pub fn monomials(s: usize, k: u32) -> Vec<Vec<u32>> {
    if s == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in monomials(s - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `D_Y = ∏_{a∈Y} D_a` for every minimal cocircuit `Y`.
pub fn cocircuit_operators(x: &VectorList) -> Result<Vec<DiffOperator>> {
    Ok(minimal_cocircuits(x)?
        .into_iter()
        .map(|c| {
            let vs: Vec<Vec<Rational>> = c.indices.iter().map(|&i| x.rational(i)).collect();
            DiffOperator::product_of(&vs, x.dim())
        })
        .collect())
}

/// Whether every cocircuit operator annihilates `p`.
pub fn in_dx(x: &VectorList, p: &Polynomial<Rational>) -> Result<bool> {
    for op in cocircuit_operators(x)? {
        if !op.apply(p)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Solves the cocircuit equations degree by degree up to `N − s`.
pub fn dx_space(x: &VectorList) -> Result<DXSpace> {
    let s = x.dim();
    let ops = cocircuit_operators(x)?;
    let top = (x.len() - s) as u32;
    let mut graded = Vec::new();
    for k in 0..=top {
        let cols = monomials(s, k);
        let images: Vec<Vec<Polynomial<Rational>>> = cols
            .iter()
            .map(|e| {
                let m = Polynomial::from_terms(Bank::Dual, s, [(e.clone(), Rational::from_integer(1.into()))]);
                ops.iter().map(|op| op.apply(&m)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        // One row per (operator, image monomial).
        let mut rows: BTreeMap<(usize, Vec<u32>), Vec<Rational>> = BTreeMap::new();
        for (j, per_op) in images.iter().enumerate() {
            for (o, img) in per_op.iter().enumerate() {
                for (e, c) in img.terms() {
                    rows.entry((o, e.clone())).or_insert_with(|| vec![Rational::zero(); cols.len()])[j] = c.clone();
                }
            }
        }
        let matrix: Vec<Vec<Rational>> = rows.into_values().collect();
        let slice = kernel(&matrix, cols.len())
            .into_iter()
            .map(|v| Polynomial::from_terms(Bank::Dual, s, cols.iter().cloned().zip(v)))
            .collect();
        graded.push(slice);
    }
    Ok(DXSpace { graded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::hilbert_series;

    #[test]
    fn monomial_lists() {
        assert_eq!(monomials(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomials(3, 1).len(), 3);
        assert_eq!(monomials(1, 4), vec![vec![4]]);
    }

    #[test]
    fn examples() {
        let a2 = VectorList::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let d = dx_space(&a2).unwrap();
        assert_eq!(d.dims(), vec![1, 2]);
        let e = VectorList::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(dx_space(&e).unwrap().dims(), vec![1]);
        let k = VectorList::new(1, vec![vec![1], vec![2]]).unwrap();
        assert_eq!(dx_space(&k).unwrap().dims(), vec![1, 1]);
    }

    #[test]
    fn graded_dims_match_hilbert() {
        let lists = [
            VectorList::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]).unwrap(),
            VectorList::new(2, vec![vec![1, 0], vec![1, 0], vec![0, 1], vec![1, -1]]).unwrap(),
            VectorList::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0], vec![0, 1, 1]])
                .unwrap(),
        ];
        for x in lists {
            let h = hilbert_series(&x).unwrap();
            let dims: Vec<u64> = dx_space(&x).unwrap().dims().into_iter().map(|d| d as u64).collect();
            assert_eq!(dims, h.coeffs);
            for p in dx_space(&x).unwrap().basis() {
                assert!(in_dx(&x, p).unwrap());
            }
        }
    }
}
