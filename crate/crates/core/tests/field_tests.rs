mod common;

use common::{brute_rank, digits};
use proptest::prelude::*;
use quadfourier::field::{
    mat_rank, null_space, span_indices, span_rank, symmetrize, GroupConfig, GroupPoint, LinearForm, Matrix, SymMatrix,
};

#[test]
fn index_examples() {
    let c3 = GroupConfig::new(3).unwrap();
    assert_eq!(c3.index_to_point(0).unwrap(), GroupPoint::from_ints(&[0, 0, 0]));
    assert_eq!(c3.index_to_point(124).unwrap(), GroupPoint::from_ints(&[4, 4, 4]));
    assert_eq!(GroupConfig::new(2).unwrap().index_to_point(7).unwrap(), GroupPoint::from_ints(&[2, 1]));
    assert!(c3.index_to_point(125).is_err());
}

#[test]
fn rank_examples() {
    assert_eq!(mat_rank(&Matrix::zeros(3, 3)), 0);
    assert_eq!(mat_rank(&Matrix::identity(3)), 3);
    assert_eq!(mat_rank(&Matrix::from_ints(&[vec![1, 2], vec![2, 4]]).unwrap()), 1);
}

#[test]
fn symmetrize_examples() {
    let s = symmetrize(&Matrix::from_ints(&[vec![0, 1], vec![0, 0]]).unwrap()).unwrap();
    assert_eq!(s, SymMatrix::from_ints(&[vec![0, 3], vec![3, 0]]).unwrap());
    let m = SymMatrix::from_ints(&[vec![1, 2], vec![2, 4]]).unwrap();
    assert_eq!(symmetrize(m.matrix()).unwrap(), m);
    assert!(symmetrize(&Matrix::zeros(2, 2)).unwrap().is_zero());
}

#[test]
fn null_space_examples() {
    let c = GroupConfig::new(2).unwrap();
    assert_eq!(null_space(&[], &c).unwrap().len(), 2);
    let b = null_space(&[LinearForm::from_ints(&[1, 0])], &c).unwrap();
    assert_eq!(b.len(), 1);
    assert_eq!(b[0].coords[0].value(), 0);
    assert!(null_space(&[LinearForm::from_ints(&[1, 1]), LinearForm::from_ints(&[1, 2])], &c).unwrap().is_empty());
}

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(0i64..5, c), r))
}

proptest! {
    #[test]
    fn rank_equals_transpose_rank(rows in matrix_strategy()) {
        let m = Matrix::from_ints(&rows).unwrap();
        prop_assert_eq!(mat_rank(&m), mat_rank(&m.transpose()));
        prop_assert_eq!(mat_rank(&m), brute_rank(&rows));
    }

    #[test]
    fn rank_nullity(n in 1usize..=4, raw in prop::collection::vec(prop::collection::vec(0i64..5, 4), 0..5)) {
        let c = GroupConfig::new(n).unwrap();
        let forms: Vec<LinearForm> = raw.iter().map(|r| LinearForm::from_ints(&r[..n])).collect();
        let basis = null_space(&forms, &c).unwrap();
        prop_assert_eq!(basis.len() + span_rank(&forms, n), n);
        // The span of the basis is exactly the set of common zeros.
        let zeros: Vec<usize> = (0..c.order())
            .filter(|&x| raw.iter().all(|r| digits(x, n).iter().zip(&r[..n]).map(|(a, b)| a * b).sum::<i64>() % 5 == 0))
            .collect();
        prop_assert_eq!(span_indices(&basis, &c), zeros);
    }

    #[test]
    fn index_round_trip(n in 0usize..=5, seed in any::<u64>()) {
        let c = GroupConfig::new(n).unwrap();
        let i = (seed % c.order() as u64) as usize;
        let p = c.index_to_point(i).unwrap();
        prop_assert_eq!(c.point_to_index(&p).unwrap(), i);
        let d: Vec<i64> = p.coords.iter().map(|v| v.value() as i64).collect();
        prop_assert_eq!(d, digits(i, n));
    }

    #[test]
    fn symmetrize_is_idempotent(rows in prop::collection::vec(prop::collection::vec(0i64..5, 3), 3)) {
        let s = symmetrize(&Matrix::from_ints(&rows).unwrap()).unwrap();
        prop_assert_eq!(symmetrize(s.matrix()).unwrap(), s.clone());
        // Same quadratic form as the original matrix.
        for x in 0..125usize {
            let d = digits(x, 3);
            let direct: i64 = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| rows[i][j] * d[i] * d[j]).sum();
            let pt: Vec<_> = GroupPoint::from_ints(&d).coords;
            prop_assert_eq!(s.quad_form(&pt).value() as i64, direct.rem_euclid(5));
        }
    }
}
