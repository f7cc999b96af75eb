//! Irreducible complete sets, nested families and residues in nested
//! coordinates.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::exactcore::linalg::{columns_to_matrix, solve};
use crate::exactcore::Rational;
use crate::matroid::{BasisRef, VectorList};
use crate::residue::{chart_residue, Chart, Coeff, RationalFunctionSpec, ResidueValue};

/// A sublist equal to `X ∩ ⟨itself⟩`, by positions in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompleteSet {
    pub indices: Vec<usize>,
    pub rank: usize,
}

impl CompleteSet {
    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &CompleteSet) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    /// Least position, the element `a_S` used for properness.
    pub fn min_element(&self) -> Option<usize> {
        self.indices.first().copied()
    }
}

/// A family of irreducible complete sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedFamily {
    pub members: Vec<CompleteSet>,
}

/// `X ∩ ⟨A⟩`.
pub fn completion(x: &VectorList, a: &[usize]) -> CompleteSet {
    let r = x.rank_of(a);
    let indices = (0..x.len())
        .filter(|&i| {
            let mut with = a.to_vec();
            with.push(i);
            a.contains(&i) || x.rank_of(&with) == r
        })
        .collect();
    CompleteSet { indices, rank: r }
}

/// Irreducible decomposition of a complete set: the connected components
/// of its matroid, found by merging the fundamental circuits of a greedy
/// basis.
pub fn decompose_irreducibles(x: &VectorList, c: &CompleteSet) -> Vec<CompleteSet> {
    let n = c.indices.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut j = i;
        while p[j] != r {
            let next = p[j];
            p[j] = r;
            j = next;
        }
        r
    }

    let mut basis: Vec<usize> = Vec::new();
    let mut dependent = Vec::new();
    for (k, &i) in c.indices.iter().enumerate() {
        let mut with: Vec<usize> = basis.iter().map(|&bk| c.indices[bk]).collect();
        with.push(i);
        if x.rank_of(&with) > basis.len() {
            basis.push(k);
        } else {
            dependent.push(k);
        }
    }
    if !basis.is_empty() {
        // Coordinates in a basis of the span: solve against a square system
        // built from pivot rows.
        let cols: Vec<Vec<Rational>> = basis.iter().map(|&k| x.rational(c.indices[k])).collect();
        let full = columns_to_matrix(&cols, x.dim());
        let rows = pivot_rows(&full, basis.len());
        let square: Vec<Vec<Rational>> = rows.iter().map(|&r| full[r].clone()).collect();
        for &k in &dependent {
            let v = x.rational(c.indices[k]);
            let rhs: Vec<Rational> = rows.iter().map(|&r| v[r].clone()).collect();
            let coeffs = solve(&square, &rhs).expect("pivot rows are independent");
            for (bk, q) in basis.iter().zip(coeffs) {
                if q != Rational::from_integer(0.into()) {
                    let (ra, rb) = (find(&mut parent, k), find(&mut parent, *bk));
                    parent[ra] = rb;
                }
            }
        }
    }

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for k in 0..n {
        let r = find(&mut parent, k);
        match root_of[r] {
            Some(g) => groups[g].push(c.indices[k]),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![c.indices[k]]);
            }
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let rank = x.rank_of(&g);
            CompleteSet { indices: g, rank }
        })
        .collect()
}

/// Row indices of an `r`-element independent set of rows.
fn pivot_rows(m: &[Vec<Rational>], r: usize) -> Vec<usize> {
    let mut chosen: Vec<Vec<Rational>> = Vec::new();
    let mut rows = Vec::new();
    for (i, row) in m.iter().enumerate() {
        let mut with = chosen.clone();
        with.push(row.clone());
        if crate::exactcore::linalg::rank_of_vectors(&with) > chosen.len() {
            chosen.push(row.clone());
            rows.push(i);
            if rows.len() == r {
                break;
            }
        }
    }
    rows
}

pub fn is_irreducible(x: &VectorList, c: &CompleteSet) -> bool {
    decompose_irreducibles(x, c).len() == 1
}

/// The nested family `S_b`: irreducible components of the completions of
/// the tails `{b_i, …, b_s}`.
pub fn mns_from_basis(x: &VectorList, b: &BasisRef) -> NestedFamily {
    let mut members: Vec<CompleteSet> = Vec::new();
    for i in 0..b.indices.len() {
        let tail = completion(x, &b.indices[i..]);
        for comp in decompose_irreducibles(x, &tail) {
            if !members.contains(&comp) {
                members.push(comp);
            }
        }
    }
    NestedFamily { members }
}

/// For a maximal nested family, returns the basis `{a_S}` of minimal
/// elements when they form a basis (the family is then proper).
pub fn is_proper(x: &VectorList, s: &NestedFamily) -> Result<Option<BasisRef>> {
    if s.members.len() != x.dim() {
        return Err(Error::NotMaximal { expected: x.dim(), found: s.members.len() });
    }
    let mins: BTreeSet<usize> = s.members.iter().filter_map(|m| m.min_element()).collect();
    if mins.len() != x.dim() {
        return Ok(None);
    }
    Ok(BasisRef::new(x, mins.into_iter().collect()).ok())
}

/// For each basis element (in basis order) the smallest member of `s`
/// containing it; `b` is adapted when these are distinct and every member
/// is spanned by the basis elements it contains.
fn adapted_members(x: &VectorList, s: &NestedFamily, b: &BasisRef) -> Result<Vec<usize>> {
    let mut assigned = Vec::with_capacity(b.indices.len());
    for &bi in &b.indices {
        let m = s
            .members
            .iter()
            .enumerate()
            .filter(|(_, m)| m.contains(bi))
            .min_by_key(|(_, m)| m.indices.len())
            .map(|(k, _)| k)
            .ok_or(Error::NotAdapted)?;
        if assigned.contains(&m) {
            return Err(Error::NotAdapted);
        }
        assigned.push(m);
    }
    for m in &s.members {
        let inside: Vec<usize> = b.indices.iter().copied().filter(|&i| m.contains(i)).collect();
        if x.rank_of(&inside) != m.rank {
            return Err(Error::NotAdapted);
        }
    }
    Ok(assigned)
}

/// Nested coordinates: `⟨b_i, z⟩ = ∏_{B ⊇ A_i} z_B` with `A_i` the smallest
/// member containing `b_i`, variables ordered like the basis.
pub fn nested_chart(x: &VectorList, s: &NestedFamily, b: &BasisRef) -> Result<Chart> {
    if s.members.len() != x.dim() {
        return Err(Error::NotMaximal { expected: x.dim(), found: s.members.len() });
    }
    let assigned = adapted_members(x, s, b)?;
    let exponents = assigned
        .iter()
        .map(|&ai| assigned.iter().map(|&aj| u32::from(s.members[ai].is_subset(&s.members[aj]))).collect())
        .collect();
    Ok(Chart { basis: b.indices.clone(), exponents })
}

/// Residue of `f·dz` in the nested coordinates of `(s, b)`.
pub fn nested_residue<C: Coeff>(
    f: &RationalFunctionSpec,
    s: &NestedFamily,
    b: &BasisRef,
    truncation: Option<u32>,
) -> Result<ResidueValue<C>> {
    chart_residue(f, &nested_chart(&f.list, s, b)?, truncation)
}

/// All irreducible complete sets, by increasing size then positions.
pub fn irreducible_sets(x: &VectorList) -> Vec<CompleteSet> {
    let mut found: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << x.len()) {
        let a: Vec<usize> = (0..x.len()).filter(|&i| mask >> i & 1 == 1).collect();
        let c = completion(x, &a);
        if c.indices != a {
            continue;
        }
        if is_irreducible(x, &c) && found.insert((c.indices.len(), c.indices.clone())) {
            out.push(c);
        }
    }
    out.sort_by(|a, b| (a.indices.len(), &a.indices).cmp(&(b.indices.len(), &b.indices)));
    out
}

/// Whether every antichain of `family` has a complete union whose
/// irreducible components are exactly the antichain.
pub fn is_nested(x: &VectorList, family: &[CompleteSet]) -> bool {
    let h = family.len();
    for mask in 1u64..(1u64 << h) {
        let chosen: Vec<&CompleteSet> = (0..h).filter(|&i| mask >> i & 1 == 1).map(|i| &family[i]).collect();
        let antichain = chosen
            .iter()
            .enumerate()
            .all(|(i, a)| chosen.iter().enumerate().all(|(j, b)| i == j || (!a.is_subset(b) && !b.is_subset(a))));
        if !antichain || chosen.len() < 2 {
            continue;
        }
        let union: BTreeSet<usize> = chosen.iter().flat_map(|c| c.indices.iter().copied()).collect();
        let union: Vec<usize> = union.into_iter().collect();
        let c = completion(x, &union);
        if c.indices != union {
            return false;
        }
        let mut comps: Vec<Vec<usize>> = decompose_irreducibles(x, &c).into_iter().map(|c| c.indices).collect();
        let mut want: Vec<Vec<usize>> = chosen.iter().map(|c| c.indices.clone()).collect();
        comps.sort();
        want.sort();
        if comps != want {
            return false;
        }
    }
    true
}

/// Every nested family with `s` members (the maximal ones), by brute force
/// over the irreducible sets. Meant for small lists.
pub fn maximal_nested_families(x: &VectorList) -> Vec<NestedFamily> {
    let irr = irreducible_sets(x);
    let mut out = Vec::new();
    crate::matroid::for_each_subset(irr.len(), x.dim(), |idx| {
        let fam: Vec<CompleteSet> = idx.iter().map(|&i| irr[i].clone()).collect();
        if is_nested(x, &fam) {
            out.push(NestedFamily { members: fam });
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::{rat, Bank, Polynomial};
    use crate::matroid::nbc_bases;
    use crate::residue::form_residue;

    fn a2() -> VectorList {
        VectorList::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    fn cs(x: &VectorList, idx: &[usize]) -> CompleteSet {
        CompleteSet { indices: idx.to_vec(), rank: x.rank_of(idx) }
    }

    fn a3_roots() -> VectorList {
        let mut vs = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                let mut v = [0i64; 4];
                v[i] = 1;
                v[j] = -1;
                vs.push(v[..3].to_vec());
            }
        }
        VectorList::new(3, vs).unwrap()
    }

    #[test]
    fn completions() {
        let x = a2();
        assert_eq!(completion(&x, &[0]).indices, vec![0]);
        assert_eq!(completion(&x, &[0, 1]).indices, vec![0, 1, 2]);
        assert_eq!(completion(&x, &[2]).indices, vec![2]);
        assert_eq!(completion(&x, &[]).indices, Vec::<usize>::new());
    }

    #[test]
    fn decompositions() {
        let e2 = VectorList::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(decompose_irreducibles(&e2, &cs(&e2, &[0, 1])), vec![cs(&e2, &[0]), cs(&e2, &[1])]);
        let x = a2();
        assert_eq!(decompose_irreducibles(&x, &cs(&x, &[0, 1, 2])), vec![cs(&x, &[0, 1, 2])]);
    }

    #[test]
    fn a3_irreducibles_match_subsets() {
        // Irreducibles of the A3 root list correspond to subsets of {1..4}
        // with at least two elements: 6 + 4 + 1 = 11.
        let x = a3_roots();
        let irr = irreducible_sets(&x);
        assert_eq!(irr.len(), 11);
        assert_eq!(irr.iter().filter(|c| c.rank == 1).count(), 6);
        assert_eq!(irr.iter().filter(|c| c.rank == 2).count(), 4);
    }

    #[test]
    fn mns_examples() {
        let x = a2();
        let b12 = BasisRef::new(&x, vec![0, 1]).unwrap();
        let b13 = BasisRef::new(&x, vec![0, 2]).unwrap();
        assert_eq!(mns_from_basis(&x, &b12).members, vec![cs(&x, &[0, 1, 2]), cs(&x, &[1])]);
        assert_eq!(mns_from_basis(&x, &b13).members, vec![cs(&x, &[0, 1, 2]), cs(&x, &[2])]);
        let k = VectorList::new(1, vec![vec![1], vec![2]]).unwrap();
        let b = BasisRef::new(&k, vec![1]).unwrap();
        assert_eq!(mns_from_basis(&k, &b).members, vec![cs(&k, &[0, 1])]);
    }

    #[test]
    fn properness() {
        let x = a2();
        let full = cs(&x, &[0, 1, 2]);
        let fam = |i: usize| NestedFamily { members: vec![full.clone(), cs(&x, &[i])] };
        assert_eq!(is_proper(&x, &fam(1)).unwrap().unwrap().indices, vec![0, 1]);
        assert_eq!(is_proper(&x, &fam(0)).unwrap(), None);
        assert_eq!(is_proper(&x, &fam(2)).unwrap().unwrap().indices, vec![0, 2]);
        assert!(matches!(is_proper(&x, &NestedFamily { members: vec![full] }), Err(Error::NotMaximal { .. })));
    }

    #[test]
    fn nested_residues_on_a2() {
        let x = a2();
        let nbc = nbc_bases(&x).unwrap();
        for b in &nbc {
            let s = mns_from_basis(&x, b);
            for c in &nbc {
                let r: Polynomial<Rational> = nested_residue(&RationalFunctionSpec::omega(&x, c), &s, b, None).unwrap();
                let want = if b == c { rat(1, 1) } else { rat(0, 1) };
                assert_eq!(r.coeff(&[0, 0]), want);
            }
            let f = RationalFunctionSpec::spline(&x);
            let nested: Polynomial<Rational> = nested_residue(&f, &s, b, None).unwrap();
            assert_eq!(nested, form_residue(&f, b, None).unwrap());
        }
        let b13 = BasisRef::new(&x, vec![0, 2]).unwrap();
        let r: Polynomial<Rational> =
            nested_residue(&RationalFunctionSpec::spline(&x), &mns_from_basis(&x, &b13), &b13, None).unwrap();
        assert_eq!(r, Polynomial::from_terms(Bank::Dual, 2, [(vec![0, 1], rat(1, 1)), (vec![1, 0], rat(-1, 1))]));
    }

    #[test]
    fn not_adapted() {
        let x = a2();
        let b23 = BasisRef::new(&x, vec![1, 2]).unwrap();
        let s = NestedFamily { members: vec![cs(&x, &[0, 1, 2]), cs(&x, &[0])] };
        assert!(matches!(nested_chart(&x, &s, &b23), Err(Error::NotAdapted)));
    }

    #[test]
    fn proper_families_biject_with_nbc() {
        for x in [a2(), a3_roots()] {
            let nbc = nbc_bases(&x).unwrap();
            let families = maximal_nested_families(&x);
            let proper: BTreeSet<Vec<usize>> =
                families.iter().filter_map(|s| is_proper(&x, s).unwrap()).map(|b| b.indices).collect();
            let want: BTreeSet<Vec<usize>> = nbc.iter().map(|b| b.indices.clone()).collect();
            assert_eq!(proper, want);
            for b in &nbc {
                assert_eq!(is_proper(&x, &mns_from_basis(&x, b)).unwrap().as_ref(), Some(b));
            }
        }
    }
}
