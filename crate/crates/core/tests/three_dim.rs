use vpart::chambers::{pave_box, Arrangement};
use vpart::matroid::{d, delta, nbc_bases};
use vpart::partition::{brute_force_partition, delta_identity_check, torus_points, PartitionFunction};
use vpart::spline::{dx_space, local_pieces_reduction, local_pieces_residue};
use vpart::wonderful::{is_proper, maximal_nested_families};
use vpart::VectorList;

fn a3() -> VectorList {
    let v = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]];
    VectorList::new(3, v).unwrap()
}

fn skew() -> VectorList {
    VectorList::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 2], vec![0, 1, 1]]).unwrap()
}

#[test]
fn a3_structure() {
    let x = a3();
    assert_eq!(d(&x).unwrap(), 16);
    assert_eq!(nbc_bases(&x).unwrap().len(), 6);
    assert_eq!(dx_space(&x).unwrap().total_dim(), 16);
    assert_eq!(torus_points(&x).unwrap().len(), 1);
    assert_eq!(pave_box(&x).unwrap().volume(), 16);
    let proper: Vec<_> = maximal_nested_families(&x).iter().filter_map(|s| is_proper(&x, s).unwrap()).collect();
    assert_eq!(proper.len(), 6);
}

#[test]
fn three_dim_partition_functions() {
    for x in [a3(), skew()] {
        assert_eq!(local_pieces_reduction(&x).unwrap(), local_pieces_residue(&x).unwrap());
        assert_eq!(delta_identity_check(&x).unwrap().total(), delta(&x).unwrap());
        let pf = PartitionFunction::new(&x).unwrap();
        assert!(pf.arrangement().in_cone(&Arrangement::probe(pf.arrangement())));
        for i in 0..=3 {
            for j in 0..=3 {
                for k in 0..=3 {
                    let v = [i, j, k];
                    assert_eq!(pf.eval(&v).unwrap(), brute_force_partition(&x, &v).unwrap(), "{x} at {v:?}");
                }
            }
        }
    }
}
