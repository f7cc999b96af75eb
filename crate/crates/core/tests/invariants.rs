use num::Signed;
use proptest::prelude::*;

use vpart::chambers::{pave_box, Arrangement};
use vpart::exactcore::{rat, CycloNum, Rational, Ring};
use vpart::matroid::{d, delta, enumerate_bases, hilbert_repeated, hilbert_series};
use vpart::partition::{
    brute_force_01, brute_force_partition, delta_identity_check, positive_functional, PartitionFunction, TorusPoint,
};
use vpart::spline::{dual_system_check, local_pieces_reduction, local_pieces_residue, todd_apply, Spline};
use vpart::VectorList;

fn small_list() -> impl Strategy<Value = VectorList> {
    (1usize..=2)
        .prop_flat_map(|s| (Just(s), prop::collection::vec(prop::collection::vec(-2i64..=2, s), s..=5)))
        .prop_filter_map("spanning, nonzero", |(s, vs)| VectorList::new(s, vs).ok())
}

fn pointed_list() -> impl Strategy<Value = VectorList> {
    small_list().prop_filter("pointed cone", |x| positive_functional(x).is_ok())
}

fn lattice(s: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..s {
        out = out.into_iter().flat_map(|v: Vec<i64>| (lo..=hi).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out
}

fn as_rational(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&a| rat(a, 1)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn counting_identities(x in small_list()) {
        let h = hilbert_series(&x).unwrap();
        prop_assert_eq!(h.eval(1) as usize, d(&x).unwrap());
        let r = delta_identity_check(&x).unwrap();
        prop_assert_eq!(r.total(), delta(&x).unwrap());
        let paving = pave_box(&x).unwrap();
        prop_assert_eq!(paving.pieces.len(), d(&x).unwrap());
        prop_assert_eq!(paving.volume(), delta(&x).unwrap());
    }

    #[test]
    fn repeated_list_hilbert(x in small_list(), k in 1usize..=2) {
        prop_assume!(x.len() * k <= 8);
        prop_assert_eq!(hilbert_repeated(&x, k).unwrap(), hilbert_series(&x.repeated(k)).unwrap());
    }

    #[test]
    fn local_piece_routes(x in small_list()) {
        let a = local_pieces_reduction(&x).unwrap();
        prop_assert_eq!(&a, &local_pieces_residue(&x).unwrap());
        prop_assert!(dual_system_check(&x, &a).is_ok());
    }

    #[test]
    fn partition_matches_oracle(x in pointed_list()) {
        let pf = PartitionFunction::new(&x).unwrap();
        for v in lattice(x.dim(), -1, 5) {
            prop_assert_eq!(pf.eval(&v).unwrap(), brute_force_partition(&x, &v).unwrap(), "{} at {:?}", x, v);
        }
    }

    #[test]
    fn conjugate_pairing(x in pointed_list()) {
        let pf = PartitionFunction::new(&x).unwrap();
        let qp = pf.quasipoly_at(&Arrangement::probe(pf.arrangement())).unwrap();
        for (phi, q) in &qp.terms {
            let partner = qp.terms.iter().find(|(p, _)| *p == phi.negate());
            let (_, qbar) = partner.expect("−φ term present");
            prop_assert_eq!(q.map_coeffs(CycloNum::conjugate), qbar.clone());
        }
        for r in qp.residue_classes() {
            prop_assert!(qp.coset_polynomial(&r).is_ok());
        }
    }

    #[test]
    fn discrete_box_identity(x in pointed_list()) {
        for v in lattice(x.dim(), -1, 3) {
            let mut alt = num::BigInt::from(0);
            for mask in 0u64..(1 << x.len()) {
                let mut w = v.clone();
                for i in (0..x.len()).filter(|&i| mask >> i & 1 == 1) {
                    for (wk, &a) in w.iter_mut().zip(x.vector(i)) {
                        *wk -= 2 * a;
                    }
                }
                let p = brute_force_partition(&x, &w).unwrap();
                if mask.count_ones() % 2 == 0 { alt += p } else { alt -= p }
            }
            prop_assert_eq!(alt, num::BigInt::from(brute_force_01(&x, &v)));
        }
    }

    #[test]
    fn box_spline_nonnegative(x in small_list(), a in 0i64..40, b in 0i64..40) {
        let spline = Spline::new(&x).unwrap();
        let p: Vec<Rational> = [a, b][..x.dim()].iter().map(|&c| rat(c, 9) - rat(1, 3)).collect();
        prop_assert!(!spline.box_eval(&p).unwrap().is_negative());
    }

    #[test]
    fn torus_point_canonical(n in -50i64..50, m in 1i64..12) {
        let p = TorusPoint::new(vec![rat(n, m)]).unwrap();
        prop_assert!(p.coords()[0] >= rat(0, 1) && p.coords()[0] < rat(1, 1));
        prop_assert_eq!(TorusPoint::new(p.coords().to_vec()).unwrap(), p.clone());
        prop_assert_eq!(p.negate().negate(), p);
    }
}

/// Lattice points on walls get the same value from every adjacent cell.
#[test]
fn wall_agreement() {
    let lists = [
        VectorList::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]).unwrap(),
        VectorList::new(2, vec![vec![2, 1], vec![1, 3], vec![1, 0]]).unwrap(),
        VectorList::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap(),
    ];
    let eps = rat(1, 1000);
    let dirs: [(i64, i64); 8] = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (1, -1), (-1, -1)];
    for x in lists {
        let pf = PartitionFunction::new(&x).unwrap();
        let arr = pf.arrangement();
        let mut shared = 0;
        for v in lattice(2, 0, 6) {
            let p = as_rational(&v);
            if !arr.in_cone(&p) || !arr.on_some_wall(&p) {
                continue;
            }
            let want = brute_force_partition(&x, &v).unwrap();
            let mut cells = std::collections::BTreeSet::new();
            for (dx, dy) in dirs {
                // a skewed offset keeps the perturbed point off the walls
                let q = vec![
                    &p[0] + &eps * rat(2 * dx + dy, 1) / rat(3, 1),
                    &p[1] + &eps * rat(dy * 2 - dx, 1) / rat(5, 1),
                ];
                if !arr.is_regular(&q) {
                    continue;
                }
                let cell = arr.locate_cell(&q).unwrap();
                let value = pf.quasipoly(&cell).unwrap().eval(&v);
                assert_eq!(value, CycloNum::from_rational(&Rational::from_integer(want.clone())), "{x} at {v:?}");
                cells.insert(cell.key);
            }
            if cells.len() > 1 {
                shared += 1;
            }
        }
        assert!(shared > 0, "{x}: no wall point seen from two cells");
    }
}

/// On unimodular lists the quasi-polynomial is the Todd image of the spline piece.
#[test]
fn unimodular_coherence() {
    let lists = [
        VectorList::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap(),
        VectorList::new(2, vec![vec![0, 1], vec![1, 0], vec![1, 1], vec![1, 0]]).unwrap(),
        VectorList::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 1]]).unwrap(),
    ];
    for x in lists {
        assert!(enumerate_bases(&x).unwrap().iter().all(|b| b.det.abs() == 1));
        let pf = PartitionFunction::new(&x).unwrap();
        let spline = Spline::new(&x).unwrap();
        let arr = pf.arrangement();
        for v in lattice(2, 0, 5) {
            let p: Vec<Rational> = as_rational(&v).into_iter().map(|c| c + rat(1, 7)).collect();
            if !arr.is_regular(&p) {
                continue;
            }
            let cell = arr.locate_cell(&p).unwrap();
            let qp = pf.quasipoly(&cell).unwrap();
            assert_eq!(qp.terms.len(), 1);
            assert!(qp.terms[0].0.is_zero());
            let todd = todd_apply(&x, &spline.piece(&cell)).unwrap();
            assert_eq!(qp.terms[0].1, todd.map_coeffs(CycloNum::from_rational));
        }
    }
}
