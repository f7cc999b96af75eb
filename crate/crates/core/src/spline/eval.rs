use std::collections::BTreeMap;
use std::sync::Mutex;

use num::{BigInt, Signed, Zero};

use super::dx::in_dx;
use super::pieces::{local_pieces_reduction, LocalPieces};
use crate::chambers::{Arrangement, CellSignature};
use crate::error::{Error, Result};
use crate::exactcore::{todd_inverse_series, todd_series, Bank, DiffOperator, Polynomial, PowerSeries, Rational};
use crate::matroid::{BasisRef, VectorList};

/// `T_X` with its local pieces and a per-cell polynomial cache.
#[derive(Debug)]
pub struct Spline {
    arrangement: Arrangement,
    pieces: LocalPieces,
    cells: Mutex<BTreeMap<Vec<BasisRef>, Polynomial<Rational>>>,
}

impl Spline {
    pub fn new(x: &VectorList) -> Result<Self> {
        Ok(Self::with_pieces(Arrangement::new(x)?, local_pieces_reduction(x)?))
    }

    pub fn with_pieces(arrangement: Arrangement, pieces: LocalPieces) -> Self {
        Spline { arrangement, pieces, cells: Mutex::new(BTreeMap::new()) }
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    pub fn pieces(&self) -> &LocalPieces {
        &self.pieces
    }

    /// `Σ_{b ∈ cell} |det b|^{-1} p_b(−x)`.
    pub fn piece(&self, cell: &CellSignature) -> Polynomial<Rational> {
        if let Some(p) = self.cells.lock().unwrap().get(&cell.key) {
            return p.clone();
        }
        let s = self.arrangement.list().dim();
        let mut acc = Polynomial::zero(Bank::Dual, s);
        for b in &cell.nbc {
            let p = &self.pieces[b];
            acc = acc.add(&p.negate_vars().scale(&Rational::new(1.into(), BigInt::from(b.det).abs())));
        }
        self.cells.lock().unwrap().insert(cell.key.clone(), acc.clone());
        acc
    }

    /// `T_X(p)` and whether `p` lies in the closed cone.
    pub fn eval_flagged(&self, p: &[Rational]) -> Result<(Rational, bool)> {
        match self.arrangement.locate_cell(p) {
            Ok(cell) => Ok((self.piece(&cell).eval(p), true)),
            Err(Error::OutsideCone) => Ok((Rational::zero(), false)),
            Err(e) => Err(e),
        }
    }

    pub fn eval(&self, p: &[Rational]) -> Result<Rational> {
        Ok(self.eval_flagged(p)?.0)
    }

    /// `B_X(p) = Σ_{S⊆X} (−1)^{|S|} T_X(p − a_S)`.
    pub fn box_eval(&self, p: &[Rational]) -> Result<Rational> {
        let x = self.arrangement.list();
        let n = x.len();
        let mut total = Rational::zero();
        for mask in 0u64..(1u64 << n) {
            let mut q = p.to_vec();
            for i in (0..n).filter(|&i| mask >> i & 1 == 1) {
                for (qk, &a) in q.iter_mut().zip(x.vector(i)) {
                    *qk -= Rational::from_integer(a.into());
                }
            }
            let v = self.eval(&q)?;
            if mask.count_ones() % 2 == 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        Ok(total)
    }
}

/// The local polynomial of `T_X` on a cell.
pub fn t_piece(x: &VectorList, cell: &CellSignature) -> Result<Polynomial<Rational>> {
    Ok(Spline::new(x)?.piece(cell))
}

/// `T_X(p)`; zero outside `C(X)`.
pub fn t_eval(x: &VectorList, p: &[Rational]) -> Result<Rational> {
    Spline::new(x)?.eval(p)
}

pub fn box_eval(x: &VectorList, p: &[Rational]) -> Result<Rational> {
    Spline::new(x)?.box_eval(p)
}

/// `∏_{a∈X} f(D_a)` for a univariate series `f`, truncated at degree `deg`.
fn operator_product(x: &VectorList, f: &PowerSeries<Rational>, deg: u32) -> DiffOperator {
    let s = x.dim();
    let mut acc = Polynomial::one(Bank::Partial, s);
    for i in 0..x.len() {
        let da = Polynomial::linear(Bank::Partial, &x.rational(i));
        let mut factor = Polynomial::zero(Bank::Partial, s);
        let mut power = Polynomial::one(Bank::Partial, s);
        for k in 0..=deg {
            factor = factor.add(&power.scale(&f.coeff(&[k])));
            power = power.mul(&da);
        }
        acc = acc.mul(&factor).truncate_degree(deg);
    }
    DiffOperator::new(acc).expect("∂ bank")
}

fn apply_series(
    x: &VectorList,
    p: &Polynomial<Rational>,
    f: impl Fn(u32) -> PowerSeries<Rational>,
) -> Result<Polynomial<Rational>> {
    if !in_dx(x, p)? {
        return Err(Error::NotInDx);
    }
    let deg = p.degree().unwrap_or(0);
    operator_product(x, &f(deg), deg).apply(p)
}

/// The Todd operator `∏_a D_a/(1 − e^{−D_a})` applied to `p ∈ D(X)`.
pub fn todd_apply(x: &VectorList, p: &Polynomial<Rational>) -> Result<Polynomial<Rational>> {
    apply_series(x, p, todd_series)
}

/// `∏_a (1 − e^{−D_a})/D_a` applied to `p ∈ D(X)`.
pub fn f_apply(x: &VectorList, p: &Polynomial<Rational>) -> Result<Polynomial<Rational>> {
    apply_series(x, p, todd_inverse_series)
}

/// `P_X(v)` for unimodular `X`, as the Todd operator applied to the local
/// piece of `T_X`.
pub fn partition_unimodular(x: &VectorList, v: &[i64]) -> Result<BigInt> {
    let spline = Spline::new(x)?;
    if spline.arrangement().bases().iter().any(|b| b.det.abs() != 1) {
        return Err(Error::NotUnimodular);
    }
    let p: Vec<Rational> = v.iter().map(|&a| Rational::from_integer(a.into())).collect();
    let cell = match spline.arrangement().locate_cell(&p) {
        Ok(c) => c,
        Err(Error::OutsideCone) => return Ok(BigInt::zero()),
        Err(e) => return Err(e),
    };
    let value = todd_apply(x, &spline.piece(&cell))?.eval(&p);
    if !value.is_integer() || value.is_negative() {
        return Err(Error::Internal(format!("Todd evaluation gave {value}")));
    }
    Ok(value.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::rat;

    fn a2() -> VectorList {
        VectorList::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    fn pt(c: &[(i64, i64)]) -> Vec<Rational> {
        c.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn spline_values() {
        assert_eq!(t_eval(&a2(), &pt(&[(2, 1), (1, 1)])).unwrap(), rat(1, 1));
        assert_eq!(t_eval(&a2(), &pt(&[(1, 3), (7, 2)])).unwrap(), rat(1, 3));
        assert_eq!(t_eval(&a2(), &pt(&[(-1, 3), (7, 2)])).unwrap(), rat(0, 1));
        let k = VectorList::new(1, vec![vec![1], vec![2]]).unwrap();
        assert_eq!(t_eval(&k, &pt(&[(5, 1)])).unwrap(), rat(5, 2));
        let b = VectorList::new(2, vec![vec![2, 1], vec![1, 3]]).unwrap();
        assert_eq!(t_eval(&b, &pt(&[(3, 1), (4, 1)])).unwrap(), rat(1, 5));
    }

    #[test]
    fn box_values() {
        let x = a2();
        let s = Spline::new(&x).unwrap();
        assert_eq!(s.box_eval(&pt(&[(1, 2), (1, 2)])).unwrap(), rat(1, 2));
        assert_eq!(s.box_eval(&pt(&[(5, 2), (1, 2)])).unwrap(), rat(0, 1));
        // partition of unity at (0.3, 0.7)
        let mut total = rat(0, 1);
        for i in -3..=1 {
            for j in -3..=1 {
                total += s.box_eval(&[rat(3, 10) - rat(i, 1), rat(7, 10) - rat(j, 1)]).unwrap();
            }
        }
        assert_eq!(total, rat(1, 1));
    }

    #[test]
    fn todd_examples() {
        let x = a2();
        let z2 = Polynomial::var(Bank::Dual, 2, 1);
        let t = todd_apply(&x, &z2).unwrap();
        assert_eq!(t, z2.add(&Polynomial::one(Bank::Dual, 2)));
        assert_eq!(todd_apply(&x, &Polynomial::one(Bank::Dual, 2)).unwrap(), Polynomial::one(Bank::Dual, 2));
        assert_eq!(f_apply(&x, &t).unwrap(), z2);
        let bad = Polynomial::var(Bank::Dual, 2, 0).pow(2);
        assert_eq!(todd_apply(&x, &bad), Err(Error::NotInDx));
    }

    #[test]
    fn unimodular_partition() {
        let x = a2();
        assert_eq!(partition_unimodular(&x, &[2, 1]).unwrap(), BigInt::from(2));
        assert_eq!(partition_unimodular(&x, &[0, 0]).unwrap(), BigInt::from(1));
        assert_eq!(partition_unimodular(&x, &[3, 3]).unwrap(), BigInt::from(4));
        assert_eq!(partition_unimodular(&x, &[-1, 3]).unwrap(), BigInt::from(0));
        let k = VectorList::new(1, vec![vec![1], vec![2]]).unwrap();
        assert_eq!(partition_unimodular(&k, &[3]), Err(Error::NotUnimodular));
    }
}
