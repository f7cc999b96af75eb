use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactcore::linalg::{columns_to_matrix, coordinates, inverse};
use crate::exactcore::{Bank, DiffOperator, Polynomial, Rational};
use crate::matroid::{nbc_bases, BasisRef, VectorList};
use crate::residue::{form_residue, RationalFunctionSpec};

/// The polynomials `p_b`, one per NBC basis, with
/// `1/d_X = Σ_b p_b(∂) (1/d_b)`.
pub type LocalPieces = BTreeMap<BasisRef, Polynomial<Rational>>;

/// Denominator exponents `m_i` of `∏ a_i^{-m_i}`, with coefficient.
type Fractions = BTreeMap<Vec<u32>, Rational>;

fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * Rational::from_integer(k.into()))
}

/// Finds `a₀` lying in the span of the support elements with larger index,
/// and its coefficients in an independent subset of them.
fn find_relation(x: &VectorList, support: &[usize]) -> Option<(usize, Vec<(usize, Rational)>)> {
    for a0 in 0..x.len() {
        let later: Vec<usize> = support.iter().copied().filter(|&c| c > a0).collect();
        if later.is_empty() {
            continue;
        }
        let mut indep: Vec<usize> = Vec::new();
        for &c in &later {
            let mut with = indep.clone();
            with.push(c);
            if x.rank_of(&with) > indep.len() {
                indep.push(c);
            }
        }
        let cols: Vec<Vec<Rational>> = indep.iter().map(|&c| x.rational(c)).collect();
        if let Some(alpha) = coordinates(&cols, &x.rational(a0)) {
            let rel = indep.into_iter().zip(alpha).filter(|(_, q)| !q.is_zero()).collect();
            return Some((a0, rel));
        }
    }
    None
}

/// `a₀ = Σ α_c c`: the index of `a₀` and the pairs `(c, α_c)`.
type Relation = (usize, Vec<(usize, Rational)>);

/// Rewrites `1/d_X` as a combination of fractions supported on NBC bases.
///
/// A fraction whose support contains elements with larger index spanning
/// some `a₀` is multiplied by `a₀/a₀ = Σ α_c c / a₀`; this trades one power
/// of `c` for one power of `a₀`, strictly lowering `Σ m_i·i` while keeping
/// the support spanning, so the process ends on NBC supports.
fn reduce_fractions(x: &VectorList) -> Result<Fractions> {
    let n = x.len();
    let mut pending: Fractions = BTreeMap::from([(vec![1u32; n], Rational::one())]);
    let mut done: Fractions = BTreeMap::new();
    let mut relations: BTreeMap<Vec<usize>, Option<Relation>> = BTreeMap::new();
    while let Some((m, coeff)) = pending.pop_last() {
        let support: Vec<usize> = (0..n).filter(|&i| m[i] > 0).collect();
        if x.rank_of(&support) < x.dim() {
            // Lower-dimensional support: no contribution to the top part.
            continue;
        }
        let rel = relations.entry(support.clone()).or_insert_with(|| find_relation(x, &support)).clone();
        match rel {
            None => add_to(&mut done, m, coeff),
            Some((a0, alpha)) => {
                for (c, q) in alpha {
                    let mut m2 = m.clone();
                    m2[a0] += 1;
                    m2[c] -= 1;
                    add_to(&mut pending, m2, &coeff * q);
                }
            }
        }
    }
    Ok(done)
}

fn add_to(map: &mut Fractions, m: Vec<u32>, c: Rational) {
    let e = map.entry(m.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        map.remove(&m);
    }
}

fn basis_inverse(x: &VectorList, b: &BasisRef) -> Vec<Vec<Rational>> {
    let cols: Vec<Vec<Rational>> = b.indices.iter().map(|&i| x.rational(i)).collect();
    inverse(&columns_to_matrix(&cols, x.dim())).expect("basis")
}

/// `p_b` by symbolic partial fractions, verified by recombination.
pub fn local_pieces_reduction(x: &VectorList) -> Result<LocalPieces> {
    let s = x.dim();
    let fractions = reduce_fractions(x)?;
    let mut pieces: LocalPieces = nbc_bases(x)?.into_iter().map(|b| (b, Polynomial::zero(Bank::Dual, s))).collect();
    for (m, coeff) in &fractions {
        let idx: Vec<usize> = (0..x.len()).filter(|&i| m[i] > 0).collect();
        let b = BasisRef::new(x, idx.clone())?;
        let binv = basis_inverse(x, &b);
        // 1/w^m = ∏_j (−1)^{m_j−1}/(m_j−1)! ∂_{w_j}^{m_j−1} (1/w_j), and
        // ∂_{w_j} is the derivative along row j of B^{-1}.
        let mut term = Polynomial::constant(Bank::Dual, s, coeff.clone());
        for (j, &i) in idx.iter().enumerate() {
            let k = m[i] - 1;
            let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
            let lin = Polynomial::linear(Bank::Dual, &binv[j]);
            term = term.mul(&lin.pow(k)).scale(&(sign / factorial(k)));
        }
        let slot = pieces
            .get_mut(&b)
            .ok_or_else(|| Error::Internal(format!("reduction ended on a non-NBC support {:?}", b.indices)))?;
        *slot = slot.add(&term);
    }
    verify_recombination(x, &pieces)?;
    Ok(pieces)
}

/// Checks `Σ_b p_b(∂)(1/d_b) = 1/d_X` by expanding every `p_b` in its own
/// basis coordinates and clearing denominators.
fn verify_recombination(x: &VectorList, pieces: &LocalPieces) -> Result<()> {
    let s = x.dim();
    let n = x.len();
    // Fractions Σ coeff / ∏ a_i^{m_i} produced by p_b(∂)(1/d_b).
    let mut fractions: Fractions = BTreeMap::new();
    for (b, p) in pieces {
        // t = B·σ turns p_b(t) into q_b(σ) with σ_j dual to ∂_{w_j}.
        let images: Vec<Polynomial<Rational>> = (0..s)
            .map(|i| {
                let row: Vec<Rational> = b.indices.iter().map(|&c| x.rational(c)[i].clone()).collect();
                Polynomial::linear(Bank::Dual, &row)
            })
            .collect();
        let q = if p.is_zero() { p.clone() } else { p.substitute(&images) };
        for (e, c) in q.terms() {
            let mut m = vec![0u32; n];
            let mut coeff = c.clone();
            for (j, &i) in b.indices.iter().enumerate() {
                m[i] = e[j] + 1;
                let sign = if e[j] % 2 == 0 { Rational::one() } else { -Rational::one() };
                coeff *= sign * factorial(e[j]);
            }
            add_to(&mut fractions, m, coeff);
        }
    }
    let mut max = vec![1u32; n];
    for m in fractions.keys() {
        for (mx, &mi) in max.iter_mut().zip(m) {
            *mx = (*mx).max(mi);
        }
    }
    let forms: Vec<Polynomial<Rational>> = (0..n).map(|i| Polynomial::linear(Bank::Ambient, &x.rational(i))).collect();
    let clear = |m: &[u32]| -> Polynomial<Rational> {
        let mut acc = Polynomial::one(Bank::Ambient, s);
        for (i, f) in forms.iter().enumerate() {
            acc = acc.mul(&f.pow(max[i] - m[i]));
        }
        acc
    };
    let lhs = fractions.iter().fold(Polynomial::zero(Bank::Ambient, s), |acc, (m, c)| acc.add(&clear(m).scale(c)));
    let rhs = clear(&vec![1; n]);
    if lhs != rhs {
        return Err(Error::Internal("partial-fraction recombination failed".into()));
    }
    Ok(())
}

/// `p_b` from residues: `p_b(−y) = det(b)·res_b(e^{⟨y|z⟩}/d_X)`.
pub fn local_pieces_residue(x: &VectorList) -> Result<LocalPieces> {
    local_pieces_residue_at(x, None)
}

pub fn local_pieces_residue_at(x: &VectorList, truncation: Option<u32>) -> Result<LocalPieces> {
    let f = RationalFunctionSpec::spline(x);
    nbc_bases(x)?
        .into_iter()
        .map(|b| {
            let r = form_residue(&f, &b, truncation)?;
            let p = r.negate_vars().scale(&Rational::from_integer(b.det.into()));
            Ok((b, p))
        })
        .collect()
}

/// Checks `D_b p_c = ε·δ_{bc}` with `D_b = ∏_{a∉b} D_a` and returns `ε`.
pub fn dual_system_check(x: &VectorList, pieces: &LocalPieces) -> Result<i32> {
    let s = x.dim();
    let mut eps: Option<Rational> = None;
    for b in pieces.keys() {
        let outside: Vec<Vec<Rational>> = (0..x.len()).filter(|&i| !b.contains(i)).map(|i| x.rational(i)).collect();
        let op = DiffOperator::product_of(&outside, s);
        for (c, p) in pieces {
            let v = op.apply(p)?;
            if v.degree().unwrap_or(0) > 0 {
                return Err(Error::Internal("dual system produced a non-constant".into()));
            }
            let v = v.coeff(&vec![0; s]);
            if b == c {
                if v.abs() != Rational::one() || eps.as_ref().is_some_and(|e| *e != v) {
                    return Err(Error::Internal(format!("dual system diagonal entry {v} at {}", b.label())));
                }
                eps = Some(v);
            } else if !v.is_zero() {
                return Err(Error::Internal(format!(
                    "dual system off-diagonal entry at ({}, {})",
                    b.label(),
                    c.label()
                )));
            }
        }
    }
    Ok(if eps.is_some_and(|e| e.is_negative()) { -1 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::rat;

    fn lin(c: &[i64]) -> Polynomial<Rational> {
        let v: Vec<Rational> = c.iter().map(|&a| rat(a, 1)).collect();
        Polynomial::linear(Bank::Dual, &v)
    }

    fn a2() -> VectorList {
        VectorList::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let x = a2();
        let p = local_pieces_reduction(&x).unwrap();
        let b12 = BasisRef::new(&x, vec![0, 1]).unwrap();
        let b13 = BasisRef::new(&x, vec![0, 2]).unwrap();
        assert_eq!(p[&b12], lin(&[-1, 0]));
        assert_eq!(p[&b13], lin(&[1, -1]));

        let k = VectorList::new(1, vec![vec![1], vec![2]]).unwrap();
        let p = local_pieces_reduction(&k).unwrap();
        assert_eq!(p.values().next().unwrap(), &Polynomial::linear(Bank::Dual, &[rat(-1, 2)]));

        let e = VectorList::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let p = local_pieces_reduction(&e).unwrap();
        assert_eq!(p.values().next().unwrap(), &Polynomial::one(Bank::Dual, 2));
    }

    #[test]
    fn residue_route_matches() {
        let lists = [
            a2(),
            VectorList::new(1, vec![vec![1], vec![2]]).unwrap(),
            VectorList::new(1, vec![vec![2], vec![1], vec![3]]).unwrap(),
            VectorList::new(2, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 0]]).unwrap(),
            VectorList::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]).unwrap(),
            VectorList::new(2, vec![vec![1, 1], vec![1, -1], vec![1, 0], vec![2, 1]]).unwrap(),
        ];
        for x in lists {
            assert_eq!(local_pieces_reduction(&x).unwrap(), local_pieces_residue(&x).unwrap(), "{x}");
        }
    }

    #[test]
    fn dual_signs() {
        let x = a2();
        assert_eq!(dual_system_check(&x, &local_pieces_reduction(&x).unwrap()).unwrap(), -1);
        let e = VectorList::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(dual_system_check(&e, &local_pieces_reduction(&e).unwrap()).unwrap(), 1);
        let k = VectorList::new(1, vec![vec![1], vec![2]]).unwrap();
        assert_eq!(dual_system_check(&k, &local_pieces_reduction(&k).unwrap()).unwrap(), -1);
    }
}
