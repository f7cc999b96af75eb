//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num::{BigInt, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use vpart::chambers::{generic_offset, in_zonotope, lattice_count_box, pave_box};
use vpart::exactcore::{rat, Bank, Polynomial, Rational};
use vpart::matroid::{delta, hilbert_series, nbc_bases};
use vpart::partition::{brute_force_partition, delta_identity_check, torus_points, trivial_nbc, PartitionFunction};
use vpart::residue::{default_truncation, form_residue, omega_residue, twisted_residue, RationalFunctionSpec};
use vpart::spline::{
    dx_space, f_apply, local_pieces_reduction, local_pieces_residue, local_pieces_residue_at, partition_unimodular,
    t_eval, todd_apply, Spline,
};
use vpart::wonderful::{mns_from_basis, nested_residue};
use vpart::VectorList;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn list(dim: usize, v: &[&[i64]]) -> VectorList {
    VectorList::new(dim, v.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn a2() -> VectorList {
    list(2, &[&[1, 0], &[0, 1], &[1, 1]])
}

fn knap(v: &[i64]) -> VectorList {
    VectorList::new(1, v.iter().map(|&a| vec![a]).collect()).unwrap()
}

fn det2() -> VectorList {
    list(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, 2]])
}

fn corpus() -> Vec<(&'static str, VectorList)> {
    vec![
        ("A2", a2()),
        ("{1,2}", knap(&[1, 2])),
        ("{2}", knap(&[2])),
        ("{1,1}", knap(&[1, 1])),
        ("unimodular 2x4", list(2, &[&[0, 1], &[1, 0], &[1, 1], &[1, 0]])),
        ("det-2 2x4", det2()),
    ]
}

/// Integer determinant by cofactor expansion, independent of the library.
fn det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det(&minor)
            })
            .sum(),
    }
}

/// `|det b|` for every `s`-subset, by plain enumeration.
fn subset_dets(x: &VectorList) -> Vec<i64> {
    let (n, s) = (x.len(), x.dim());
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != s {
            continue;
        }
        let rows: Vec<Vec<i64>> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| x.vector(i).to_vec()).collect();
        let d = det(&rows);
        if d != 0 {
            out.push(d.abs());
        }
    }
    out
}

fn random_list(rng: &mut StdRng) -> VectorList {
    loop {
        let s = rng.gen_range(1..=3);
        let n = rng.gen_range(s..=7);
        let vs: Vec<Vec<i64>> = (0..n).map(|_| (0..s).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        if let Ok(x) = VectorList::new(s, vs) {
            return x;
        }
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn c1_hilbert() -> Outcome {
    let h = hilbert_series(&a2()).map_err(e)?;
    ensure(h.coeffs == vec![1, 2], || format!("A2 gave {h}"))?;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..50 {
        let x = random_list(&mut rng);
        let h = hilbert_series(&x).map_err(e)?;
        let d = subset_dets(&x).len() as u64;
        ensure(h.eval(1) == d, || format!("{x}: H(1) = {} but d = {d}", h.eval(1)))?;
    }
    Ok("H = 1 + 2q on A2; H(1) = d(X) on 50 random lists".into())
}

fn c2_dx() -> Outcome {
    for (name, x) in corpus() {
        let space = dx_space(&x).map_err(e)?;
        let h = hilbert_series(&x).map_err(e)?;
        let dims: Vec<u64> = space.dims().iter().map(|&k| k as u64).collect();
        ensure(space.total_dim() == subset_dets(&x).len(), || format!("{name}: dim {}", space.total_dim()))?;
        ensure(dims == h.coeffs, || format!("{name}: graded {dims:?} vs {h}"))?;
    }
    Ok("graded dimensions match H_X on the corpus".into())
}

fn c3_two_routes() -> Outcome {
    for (name, x) in corpus() {
        let a = local_pieces_reduction(&x).map_err(e)?;
        let b = local_pieces_residue(&x).map_err(e)?;
        ensure(a == b, || format!("{name}: routes differ"))?;
    }
    Ok("partial fractions ≡ residues on the corpus".into())
}

fn c4_duality() -> Outcome {
    let mut pairs = 0;
    for (name, x) in corpus() {
        let nbc = nbc_bases(&x).map_err(e)?;
        for b in &nbc {
            let family = mns_from_basis(&x, b);
            for c in &nbc {
                let want = if b == c { rat(1, 1) } else { rat(0, 1) };
                let direct = omega_residue(&x, c, b).map_err(e)?;
                let nested: Polynomial<Rational> =
                    nested_residue(&RationalFunctionSpec::omega(&x, c), &family, b, None).map_err(e)?;
                ensure(direct == want, || format!("{name}: res_{}(ω_{}) = {direct}", b.label(), c.label()))?;
                ensure(nested.coeff(&vec![0; x.dim()]) == want, || {
                    format!("{name}: nested res_{}(ω_{})", b.label(), c.label())
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} NBC pairs, standard and nested charts"))
}

fn c5_volume() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let spline = Spline::new(&a2()).map_err(e)?;
    for _ in 0..100 {
        let p = [rat(rng.gen_range(0..60), rng.gen_range(1..13)), rat(rng.gen_range(0..60), rng.gen_range(1..13))];
        let v = spline.eval(&p).map_err(e)?;
        let want = p[0].clone().min(p[1].clone());
        ensure(v == want, || format!("T(({},{})) = {v}", p[0], p[1]))?;
    }
    let k = knap(&[1, 2]);
    for n in 0..20 {
        let p = rat(3 * n + 1, 7);
        let v = t_eval(&k, std::slice::from_ref(&p)).map_err(e)?;
        ensure(v == &p / rat(2, 1), || format!("{{1,2}} at {p}: {v}"))?;
    }
    Ok("T = min(x,y) at 100 points; T = x/2 on {1,2}".into())
}

fn c6_oracle() -> Outcome {
    let lists =
        [("A2", a2()), ("{1,2}", knap(&[1, 2])), ("{2}", knap(&[2])), ("{1,1}", knap(&[1, 1])), ("det-2", det2())];
    let mut count = 0;
    for (name, x) in lists {
        let pf = PartitionFunction::new(&x).map_err(e)?;
        let pts: Vec<Vec<i64>> = if x.dim() == 1 {
            (0..=12).map(|n| vec![n]).collect()
        } else {
            (0..=12).flat_map(|i| (0..=12).map(move |j| vec![i, j])).collect()
        };
        for v in pts {
            let p: Vec<Rational> = v.iter().map(|&a| rat(a, 1)).collect();
            if !pf.arrangement().in_cone(&p) {
                continue;
            }
            let a = pf.eval(&v).map_err(e)?;
            let b = brute_force_partition(&x, &v).map_err(e)?;
            ensure(a == b, || format!("{name} at {v:?}: {a} vs {b}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} lattice points agree"))
}

fn c7_cosets() -> Outcome {
    let pf = PartitionFunction::new(&knap(&[1, 2])).map_err(e)?;
    let qp = pf.quasipoly_at(&[rat(1, 1)]).map_err(e)?;
    let lin = |c0: Rational| Polynomial::from_terms(Bank::Dual, 1, [(vec![1], rat(1, 2)), (vec![0], c0)]);
    let even = qp.coset_polynomial(&[0]).map_err(e)?;
    let odd = qp.coset_polynomial(&[1]).map_err(e)?;
    ensure(even == lin(rat(1, 1)), || format!("even coset {even}"))?;
    ensure(odd == lin(rat(1, 2)), || format!("odd coset {odd}"))?;
    Ok(format!("even: {even}; odd: {odd}"))
}

fn c8_delta() -> Outcome {
    for (name, x) in corpus() {
        let sum: u64 = subset_dets(&x).iter().map(|&d| d as u64).sum();
        let dl = delta(&x).map_err(e)?;
        let report = delta_identity_check(&x).map_err(e)?;
        let count = lattice_count_box(&x, &generic_offset(&x).map_err(e)?).map_err(e)?;
        ensure(sum == dl && report.total() == dl && count == dl, || {
            format!("{name}: Σ|det| = {sum}, δ = {dl}, Σ d(X_φ) = {}, count = {count}", report.total())
        })?;
    }
    Ok("Σ|det b| = δ = Σ_φ d(X_φ) = lattice count on the corpus".into())
}

fn c9_paving() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    for (name, x, pieces) in [("A2", a2(), 3), ("{1,2}", knap(&[1, 2]), 2)] {
        let paving = pave_box(&x).map_err(e)?;
        let dl = delta(&x).map_err(e)?;
        ensure(paving.pieces.len() == pieces, || format!("{name}: {} pieces", paving.pieces.len()))?;
        ensure(paving.volume() == dl, || format!("{name}: volume {}", paving.volume()))?;
        let s = x.dim();
        for _ in 0..200 {
            let p: Vec<Rational> = (0..s).map(|_| rat(rng.gen_range(-10..=40), 13)).collect();
            let interiors = paving.pieces.iter().filter(|pc| pc.contains_interior(&x, &p)).count();
            ensure(interiors <= 1, || format!("{name}: {interiors} interiors overlap"))?;
            let inside = in_zonotope(&x, &p).map_err(e)?;
            let covered = paving.pieces.iter().any(|pc| pc.contains(&x, &p));
            ensure(inside == covered, || format!("{name}: coverage mismatch"))?;
        }
    }
    Ok("A2: 3 pieces, {1,2}: 2 pieces; volumes δ; disjoint interiors".into())
}

fn c10_unity() -> Outcome {
    let spline = Spline::new(&a2()).map_err(e)?;
    for i in 0..5 {
        for j in 0..5 {
            let p = [rat(i, 5) + rat(1, 11), rat(j, 5) + rat(1, 13)];
            let mut total = Rational::zero();
            for l1 in -1..=1 {
                for l2 in -1..=1 {
                    total += spline.box_eval(&[&p[0] - rat(l1, 1), &p[1] - rat(l2, 1)]).map_err(e)?;
                }
            }
            ensure(total == rat(1, 1), || format!("Σ at ({},{}) = {total}", p[0], p[1]))?;
        }
    }
    Ok("Σ_λ B(x − λ) = 1 at 25 points".into())
}

fn c11_todd() -> Outcome {
    let x = a2();
    for i in 0..=10 {
        for j in 0..=10 {
            let a = partition_unimodular(&x, &[i, j]).map_err(e)?;
            let b = brute_force_partition(&x, &[i, j]).map_err(e)?;
            ensure(a == b, || format!("({i},{j}): {a} vs {b}"))?;
        }
    }
    for (name, y) in corpus() {
        for p in dx_space(&y).map_err(e)?.basis() {
            let back = f_apply(&y, &todd_apply(&y, p).map_err(e)?).map_err(e)?;
            ensure(&back == p, || format!("{name}: Todd∘F ≠ id on {p}"))?;
        }
    }
    Ok("Todd route = brute force on [0,10]²; Todd∘F = id on D(X) bases".into())
}

fn c12_truncation() -> Outcome {
    let mut checked = 0;
    for (name, x) in corpus() {
        let t = default_truncation(&x);
        let orders = [t, t + 1, t + 2];
        let pieces: Vec<_> =
            orders.iter().map(|&k| local_pieces_residue_at(&x, Some(k))).collect::<Result<_, _>>().map_err(e)?;
        ensure(pieces.windows(2).all(|w| w[0] == w[1]), || format!("{name}: local pieces vary"))?;
        let f = RationalFunctionSpec::spline(&x);
        for b in nbc_bases(&x).map_err(e)? {
            let family = mns_from_basis(&x, &b);
            let mut prev: Option<(Polynomial<Rational>, Polynomial<Rational>)> = None;
            for &k in &orders {
                let r =
                    (form_residue(&f, &b, Some(k)).map_err(e)?, nested_residue(&f, &family, &b, Some(k)).map_err(e)?);
                ensure(prev.as_ref().is_none_or(|p| *p == r), || format!("{name}: residue at {} varies", b.label()))?;
                prev = Some(r);
                checked += 1;
            }
        }
        for phi in torus_points(&x).map_err(e)? {
            for b in trivial_nbc(&x, &phi).map_err(e)? {
                let rs: Vec<_> = orders
                    .iter()
                    .map(|&k| twisted_residue(&x, &phi, &b, Some(k)))
                    .collect::<Result<_, _>>()
                    .map_err(e)?;
                ensure(rs.windows(2).all(|w| w[0] == w[1]), || format!("{name}: twisted residue at {phi} varies"))?;
                checked += 3;
            }
        }
        let values: Vec<Vec<BigInt>> = orders
            .iter()
            .map(|&k| {
                let pf = PartitionFunction::with_truncation(&x, Some(k))?;
                (0..6i64).map(|n| pf.eval(&vec![n; x.dim()])).collect()
            })
            .collect::<Result<_, _>>()
            .map_err(e)?;
        ensure(values.windows(2).all(|w| w[0] == w[1]), || format!("{name}: partition values vary"))?;
    }
    Ok(format!("{checked} residues identical at T, T+1, T+2"))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("1 Hilbert series", c1_hilbert, 1),
        ("2 D(X) dimension", c2_dx, 5),
        ("3 two-route agreement", c3_two_routes, 10),
        ("4 residue duality", c4_duality, 5),
        ("5 volume correctness", c5_volume, 1),
        ("6 partition oracle", c6_oracle, 30),
        ("7 quasi-polynomial cosets", c7_cosets, 5),
        ("8 delta identities", c8_delta, 10),
        ("9 paving", c9_paving, 5),
        ("10 partition of unity", c10_unity, 5),
        ("11 unimodular Todd route", c11_todd, 10),
        ("12 truncation stability", c12_truncation, 20),
    ];
    let mut failed = 0;
    let mut seen = BTreeSet::new();
    for (name, f, budget) in criteria {
        assert!(seen.insert(name));
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (ok, detail) = match outcome {
            Ok(d) if !over => (true, d),
            Ok(d) => (false, format!("{d} (exceeded {budget} s budget)")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!("{} criterion {name}: {detail} [{:.2} s]", if ok { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
