//! Dense exact linear algebra over `Q`, plus Smith normal form over `Z`.

use num::{BigInt, One, Signed, Zero};

use super::ring::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn to_rational_vec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()
}

/// Matrix whose columns are the given vectors.
pub fn columns_to_matrix(cols: &[Vec<Rational>], nrows: usize) -> Matrix {
    (0..nrows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut a = m.clone();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[row].clone();
        for (r, target) in a.iter_mut().enumerate() {
            if r != row && !target[col].is_zero() {
                let f = target[col].clone();
                for (t, p) in target.iter_mut().zip(&pivot) {
                    *t -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// Rank of a set of vectors.
pub fn rank_of_vectors(vs: &[Vec<Rational>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    rank(&vs.to_vec())
}

/// Basis of the right kernel `{x : m x = 0}` in reduced form: one vector per
/// free column, with a 1 in that column.
pub fn kernel(m: &Matrix, ncols: usize) -> Vec<Vec<Rational>> {
    if m.is_empty() {
        return (0..ncols)
            .map(|i| (0..ncols).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
    }
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[row][f].clone();
            }
            v
        })
        .collect()
}

pub fn det(m: &Matrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut d = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        d *= &a[col][col];
        let inv = a[col][col].recip();
        let pivot = a[col].clone();
        for target in a.iter_mut().skip(col + 1) {
            if !target[col].is_zero() {
                let f = &target[col] * &inv;
                for (t, p) in target.iter_mut().zip(&pivot).skip(col) {
                    *t -= &f * p;
                }
            }
        }
    }
    d
}

/// Determinant of an integer matrix given by columns.
pub fn det_int(cols: &[&[i64]]) -> i64 {
    let n = cols.len();
    let m: Matrix = (0..n).map(|i| cols.iter().map(|c| Rational::from_integer(c[i].into())).collect()).collect();
    let d = det(&m);
    debug_assert!(d.is_integer());
    i64::try_from(d.to_integer()).expect("determinant overflows i64")
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves the square system `m x = b`.
pub fn solve(m: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let inv = inverse(m)?;
    Some(mat_vec(&inv, b))
}

pub fn mat_vec(m: &Matrix, v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    let ncols = m.first().map_or(0, |r| r.len());
    (0..ncols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Whether `v` lies in the span of `vs`.
pub fn in_span(vs: &[Vec<Rational>], v: &[Rational]) -> bool {
    let r = rank_of_vectors(vs);
    let mut with = vs.to_vec();
    with.push(v.to_vec());
    rank_of_vectors(&with) == r
}

/// Coefficients of `v` in the independent vectors `cols`, or `None` when
/// `v` is outside their span.
pub fn coordinates(cols: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let k = cols.len();
    let aug: Matrix = (0..v.len())
        .map(|i| cols.iter().map(|c| c[i].clone()).chain(std::iter::once(v[i].clone())).collect())
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.contains(&k) {
        return None;
    }
    assert_eq!(pivots.len(), k, "vectors are not independent");
    Some((0..k).map(|j| r[j][k].clone()).collect())
}

/// Integer normal vector of the span of `s - 1` independent vectors in
/// `Z^s`, by signed maximal minors, scaled to be primitive with positive
/// leading nonzero entry.
pub fn primitive_normal(vs: &[Vec<i64>], dim: usize) -> Option<Vec<i64>> {
    assert_eq!(vs.len() + 1, dim);
    let mut n: Vec<i64> = (0..dim)
        .map(|skip| {
            let rows: Vec<usize> = (0..dim).filter(|&r| r != skip).collect();
            let minor: Matrix =
                rows.iter().map(|&r| vs.iter().map(|v| Rational::from_integer(v[r].into())).collect()).collect();
            let d = if minor.is_empty() { Rational::one() } else { det(&minor) };
            let d = i64::try_from(d.to_integer()).expect("minor overflows i64");
            if skip % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    let g = n.iter().fold(0i64, |g, &x| num::integer::gcd(g, x));
    if g == 0 {
        return None;
    }
    let lead_neg = n.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0);
    for x in n.iter_mut() {
        *x /= g;
        if lead_neg {
            *x = -*x;
        }
    }
    Some(n)
}

/// Smith normal form `u · a · v = d` of an integer matrix, `d` diagonal with
/// nonnegative entries each dividing the next, `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: Vec<Vec<BigInt>>,
    pub d: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.len().min(self.d.first().map_or(0, |r| r.len()))).map(|i| self.d[i][i].clone()).collect()
    }
}

fn identity_int(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn smith_normal_form(a: &[Vec<i64>]) -> Smith {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut d: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut u = identity_int(m);
    let mut v = identity_int(n);

    fn row_op(mat: &mut [Vec<BigInt>], target: usize, src: usize, f: &BigInt) {
        // row_target -= f * row_src
        let src_row = mat[src].clone();
        for (x, y) in mat[target].iter_mut().zip(src_row) {
            *x -= f * y;
        }
    }
    fn col_op(mat: &mut [Vec<BigInt>], target: usize, src: usize, f: &BigInt) {
        for row in mat.iter_mut() {
            let y = row[src].clone();
            row[target] -= f * y;
        }
    }
    fn swap_cols(mat: &mut [Vec<BigInt>], i: usize, j: usize) {
        for row in mat.iter_mut() {
            row.swap(i, j);
        }
    }

    for t in 0..m.min(n) {
        // Pivot: smallest nonzero entry in the remaining block.
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..m {
                let q = num::Integer::div_floor(&d[i][t], &d[t][t]);
                if !q.is_zero() {
                    row_op(&mut d, i, t, &q);
                    row_op(&mut u, i, t, &q);
                }
                if !d[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = num::Integer::div_floor(&d[t][j], &d[t][t]);
                if !q.is_zero() {
                    col_op(&mut d, j, t, &q);
                    col_op(&mut v, j, t, &q);
                }
                if !d[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold any offending entry into row t.
            let mut bad = None;
            'outer: for i in t + 1..m {
                for j in t + 1..n {
                    if !(&d[i][j] % &d[t][t]).is_zero() {
                        bad = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_op(&mut d, t, i, &minus_one);
                    row_op(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    finish(u, d, v)
}

fn finish(u: Vec<Vec<BigInt>>, d: Vec<Vec<BigInt>>, v: Vec<Vec<BigInt>>) -> Smith {
    Smith { u, d, v }
}
