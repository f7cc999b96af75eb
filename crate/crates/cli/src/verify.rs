//! The oracle harness behind `vpart verify`.

use std::fmt;

use num::{BigInt, One, Zero};

use vpart::chambers::{generic_offset, lattice_count_box, pave_box, Arrangement};
use vpart::exactcore::{Polynomial, Rational};
use vpart::matroid::{d, delta, hilbert_series, nbc_bases};
use vpart::partition::{
    brute_force_01, brute_force_partition, delta_identity_check, positive_functional, PartitionFunction,
    QuasiPolynomial,
};
use vpart::residue::{default_truncation, form_residue, omega_residue, RationalFunctionSpec};
use vpart::spline::{
    dual_system_check, dx_space, local_pieces_reduction, local_pieces_residue_at, partition_unimodular, Spline,
};
use vpart::wonderful::{mns_from_basis, nested_residue};
use vpart::{Result, VectorList};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:<22} {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn run(name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

/// Every lattice point of `[lo, hi]^s`.
fn lattice_box(s: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..s {
        out = out.into_iter().flat_map(|v: Vec<i64>| (lo..=hi).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out
}

fn box_side(x: &VectorList) -> i64 {
    let m = x.vectors().iter().flatten().map(|c| c.abs()).max().unwrap_or(1);
    match x.dim() {
        1 => 3 * m + 4,
        2 => (3 * m).min(9),
        _ => 4,
    }
}

/// Runs the full invariant suite on `x`.
pub fn verify(x: &VectorList, truncation: Option<u32>) -> Vec<Check> {
    let mut out = Vec::new();
    let pointed = positive_functional(x).is_ok();

    out.push(run("hilbert", || {
        let h = hilbert_series(x)?;
        let n = d(x)?;
        Ok((h.eval(1) as usize == n, format!("H_X(q) = {h}, d(X) = {n}")))
    }));

    out.push(run("dx-dimension", || {
        let h = hilbert_series(x)?;
        let dims: Vec<u64> = dx_space(x)?.dims().into_iter().map(|k| k as u64).collect();
        Ok((dims == h.coeffs, format!("graded dims {dims:?}")))
    }));

    out.push(run("local-pieces", || {
        let a = local_pieces_reduction(x)?;
        let b = local_pieces_residue_at(x, truncation)?;
        Ok((a == b, format!("{} NBC pieces", a.len())))
    }));

    out.push(run("dual-system", || {
        let eps = dual_system_check(x, &local_pieces_reduction(x)?)?;
        Ok((true, format!("sign {eps}")))
    }));

    out.push(run("residue-duality", || {
        let nbc = nbc_bases(x)?;
        let s = x.dim();
        for b in &nbc {
            let family = mns_from_basis(x, b);
            for c in &nbc {
                let want = if b == c { Rational::one() } else { Rational::zero() };
                let direct = omega_residue(x, c, b)?;
                let nested: Polynomial<Rational> =
                    nested_residue(&RationalFunctionSpec::omega(x, c), &family, b, truncation)?;
                if direct != want || nested.coeff(&vec![0; s]) != want {
                    return Ok((false, format!("res_{}(ω_{}) wrong", b.label(), c.label())));
                }
            }
        }
        Ok((true, format!("{} × {} pairs", nbc.len(), nbc.len())))
    }));

    out.push(run("delta-identity", || {
        let report = delta_identity_check(x)?;
        let count = lattice_count_box(x, &generic_offset(x)?)?;
        Ok((count == report.delta, format!("δ(X) = {} = Σ d(X_φ), lattice count {count}", report.delta)))
    }));

    out.push(run("paving", || {
        let p = pave_box(x)?;
        let (n, dl) = (d(x)?, delta(x)?);
        let ok = p.pieces.len() == n && p.volume() == dl;
        Ok((ok, format!("{} pieces, volume {}", p.pieces.len(), p.volume())))
    }));

    out.push(run("partition-of-unity", || {
        let spline = Spline::new(x)?;
        let s = x.dim();
        let p = generic_offset(x)?;
        // λ ranges over the lattice points with p − λ in the bounding box of B(X)
        let lo: Vec<i64> = (0..s).map(|i| x.vectors().iter().map(|v| v[i].min(0)).sum()).collect();
        let hi: Vec<i64> = (0..s).map(|i| x.vectors().iter().map(|v| v[i].max(0)).sum()).collect();
        let mut total = Rational::zero();
        for shift in lattice_box(s, 0, (0..s).map(|i| hi[i] - lo[i]).max().unwrap_or(0) + 1) {
            let q: Vec<Rational> = (0..s).map(|i| &p[i] - Rational::from_integer((shift[i] - hi[i]).into())).collect();
            total += spline.box_eval(&q)?;
        }
        Ok((total == Rational::one(), format!("Σ_λ B_X(x − λ) = {total}")))
    }));

    if !pointed {
        out.push(Check { name: "partition-oracle", passed: true, detail: "skipped: C(X) contains a line".into() });
        return out;
    }

    let side = box_side(x);
    out.push(run("partition-oracle", || {
        let pf = PartitionFunction::with_truncation(x, truncation)?;
        let pts = lattice_box(x.dim(), -1, side);
        for v in &pts {
            let a = pf.eval(v)?;
            let b = brute_force_partition(x, v)?;
            if a != b {
                return Ok((false, format!("P_X({v:?}) = {a}, brute force {b}")));
            }
        }
        Ok((true, format!("{} lattice points in [-1,{side}]^{}", pts.len(), x.dim())))
    }));

    out.push(run("coset-rationality", || {
        let pf = PartitionFunction::with_truncation(x, truncation)?;
        let qp = pf.quasipoly_at(&Arrangement::probe(pf.arrangement()))?;
        let classes = qp.residue_classes();
        for r in classes.iter().take(64) {
            qp.coset_polynomial(r)?;
        }
        let back = QuasiPolynomial::from_json(&qp.to_json(None)?)?;
        Ok((back == qp, format!("modulus {}, {} terms", qp.modulus, qp.terms.len())))
    }));

    out.push(run("discrete-box", || {
        for v in lattice_box(x.dim(), -1, side.min(5)) {
            let mut alt = BigInt::zero();
            for mask in 0u64..(1u64 << x.len()) {
                let mut w = v.clone();
                for i in (0..x.len()).filter(|&i| mask >> i & 1 == 1) {
                    for (wk, &a) in w.iter_mut().zip(x.vector(i)) {
                        *wk -= 2 * a;
                    }
                }
                let p = brute_force_partition(x, &w)?;
                if mask.count_ones() % 2 == 0 {
                    alt += p;
                } else {
                    alt -= p;
                }
            }
            if alt != BigInt::from(brute_force_01(x, &v)) {
                return Ok((false, format!("mismatch at {v:?}")));
            }
        }
        Ok((true, "0/1 counts match the alternating sum".into()))
    }));

    let unimodular = vpart::matroid::enumerate_bases(x).map(|bs| bs.iter().all(|b| b.det.abs() == 1)).unwrap_or(false);
    if unimodular {
        out.push(run("todd-route", || {
            for v in lattice_box(x.dim(), -1, side) {
                if partition_unimodular(x, &v)? != brute_force_partition(x, &v)? {
                    return Ok((false, format!("mismatch at {v:?}")));
                }
            }
            Ok((true, "unimodular Todd evaluation matches brute force".into()))
        }));
    }

    out.push(run("truncation-stability", || {
        let t = truncation.unwrap_or_else(|| default_truncation(x));
        let f = RationalFunctionSpec::spline(x);
        let pieces: Vec<_> = (t..t + 3).map(|k| local_pieces_residue_at(x, Some(k))).collect::<Result<_>>()?;
        let mut ok = pieces.windows(2).all(|w| w[0] == w[1]);
        for b in nbc_bases(x)? {
            let r: Vec<_> = (t..t + 3).map(|k| form_residue(&f, &b, Some(k))).collect::<Result<_>>()?;
            ok &= r.windows(2).all(|w| w[0] == w[1]);
        }
        let arr = Arrangement::new(x)?;
        let cell = arr.locate_cell(&arr.probe())?;
        let qps: Vec<_> = (t..t + 3)
            .map(|k| PartitionFunction::with_truncation(x, Some(k))?.quasipoly(&cell))
            .collect::<Result<_>>()?;
        ok &= qps.windows(2).all(|w| w[0] == w[1]);
        Ok((ok, format!("orders {t}, {}, {}", t + 1, t + 2)))
    }));

    out
}
