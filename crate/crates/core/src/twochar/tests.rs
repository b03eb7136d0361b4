use super::*;
use crate::algebra::{ground, matrix_algebra, product_algebra};
use crate::bimodule::unit_bimodule;
use crate::exactlin::Field;

const Q: Field = Field::Rationals;

fn klein() -> Group {
    Group::product(&Group::cyclic(2), &Group::cyclic(2))
}

/// Oracle for permutation actions: the number of points fixed by both g and h.
fn common_fixed_points(perms: &[Vec<usize>], g: usize, h: usize) -> i64 {
    (0..perms[0].len()).filter(|&x| perms[g][x] == x && perms[h][x] == x).count() as i64
}

#[test]
fn identity_twist_is_the_unit() {
    let a = product_algebra(Q, 3);
    let m = twisted_bimodule(&a, &Matrix::identity(Q, 3)).unwrap();
    let u = unit_bimodule(&a);
    assert_eq!(m.lambdas(), u.lambdas());
    assert_eq!(m.rhos(), u.rhos());
}

#[test]
fn non_automorphisms_are_rejected() {
    let a = product_algebra(Q, 2);
    let collapse = Matrix::from_i64(Q, &[vec![1, 1], vec![0, 0]]);
    assert!(matches!(twisted_bimodule(&a, &collapse), Err(Error::NotHomomorphism(_))));
    let bad = GroupAction::new(Group::cyclic(2), a.clone(), vec![Matrix::identity(Q, 2); 2]);
    assert!(bad.is_ok());
    let swap = Matrix::from_i64(Q, &[vec![0, 1], vec![1, 0]]);
    let wrong = GroupAction::new(Group::cyclic(3), a, vec![Matrix::identity(Q, 2), swap.clone(), swap]);
    assert!(matches!(wrong, Err(Error::NotHomomorphism(_))));
}

#[test]
fn swap_bimodule_has_order_two() {
    let action = GroupAction::regular(Q, &Group::cyclic(2)).unwrap();
    let s = action.twisted(1);
    let ss = tensor_over(s, s).unwrap();
    let iso = multiplication_iso(&action, 1, 1, &ss).unwrap();
    assert!(iso.is_iso());
    assert!(iso.target.same_as(&unit_bimodule(&action.algebra)));
}

#[test]
fn four_cycle_squares_to_its_square() {
    let action = GroupAction::regular(Q, &Group::cyclic(4)).unwrap();
    let a = action.twisted(1);
    let aa = tensor_over(a, a).unwrap();
    let iso = multiplication_iso(&action, 1, 1, &aa).unwrap();
    assert!(iso.is_iso() && iso.target.same_as(action.twisted(2)));
}

#[test]
fn cells_are_invertible_and_reject_non_commuting_pairs() {
    let action = GroupAction::regular(Q, &klein()).unwrap();
    for (g, h) in action.commuting_pairs() {
        square_cell(&action, g, h).unwrap().validate(&action.group).unwrap();
    }
    let s3 = GroupAction::regular(Q, &Group::symmetric(3)).unwrap();
    let (g, h) = (0..6).flat_map(|g| (0..6).map(move |h| (g, h))).find(|&(g, h)| !s3.group.commute(g, h)).unwrap();
    assert_eq!(square_cell(&s3, g, h).unwrap_err(), Error::NotCommuting(g, h));
}

#[test]
fn trivial_action_on_the_ground_field() {
    let action = GroupAction::new(Group::trivial(), ground(Q), vec![Matrix::identity(Q, 1)]).unwrap();
    assert_eq!(two_character(&square_cell(&action, 0, 0).unwrap()).unwrap(), Q.one());
    assert!(check_modular_invariance(&action, 1, 4, 6).unwrap().passed());
}

#[test]
fn regular_klein_table_matches_fixed_points() {
    let action = GroupAction::regular(Q, &klein()).unwrap();
    let perms: Vec<Vec<usize>> = (0..4).map(|g| (0..4).map(|x| action.group.mul(g, x)).collect()).collect();
    let table = character_table(&action).unwrap();
    assert_eq!(table.len(), 16);
    for (g, h, chi) in table {
        assert_eq!(chi, Q.from_i64(common_fixed_points(&perms, g, h)), "({g}, {h})");
    }
    assert_eq!(two_character(&square_cell(&action, 0, 0).unwrap()).unwrap(), Q.from_i64(4));
}

#[test]
fn non_free_permutation_action_matches_fixed_points() {
    // C2 swapping two of three points, and C2 x C2 on four points by two disjoint swaps
    let c2 = Group::cyclic(2);
    let perms = vec![vec![0, 1, 2], vec![1, 0, 2]];
    let action = GroupAction::permutation(Q, &c2, &perms).unwrap();
    for (g, h, chi) in character_table(&action).unwrap() {
        assert_eq!(chi, Q.from_i64(common_fixed_points(&perms, g, h)));
    }
    // the group element 2a + b swaps points {0, 1} if a = 1 and points {2, 3} if b = 1
    let k = klein();
    let perms: Vec<Vec<usize>> = (0..4)
        .map(|g| {
            let (a, b) = (g / 2, g % 2);
            vec![a, 1 - a, 2 + b, 3 - b]
        })
        .collect();
    let action = GroupAction::permutation(Q, &k, &perms).unwrap();
    for (g, h, chi) in character_table(&action).unwrap() {
        assert_eq!(chi, Q.from_i64(common_fixed_points(&perms, g, h)), "({g}, {h})");
    }
    assert!(check_modular_invariance(&action, 7, 5, 6).unwrap().passed());
}

#[test]
fn moves_follow_the_group_shadow() {
    let action = GroupAction::regular(Q, &Group::cyclic(4)).unwrap();
    let cell = square_cell(&action, 1, 2).unwrap();
    let s = act_s(&action, &cell).unwrap();
    assert_eq!(s.pair, (2, 3));
    let t = act_t(&action, &cell).unwrap();
    assert_eq!(t.pair, (1, 3));
    let s4 = apply_word(&action, &cell, &[Move::S; 4]).unwrap();
    assert_eq!(s4.pair, cell.pair);
    assert_eq!(two_character(&s4).unwrap(), two_character(&cell).unwrap());
}

#[test]
fn t_on_a_horizontal_cell_gives_the_diagonal() {
    let action = GroupAction::regular(Q, &klein()).unwrap();
    for g in 0..4 {
        let t = act_t(&action, &square_cell(&action, g, 0).unwrap()).unwrap();
        assert_eq!(t.pair, (g, g));
        let diag = square_cell(&action, g, g).unwrap();
        assert_eq!(two_character(&t).unwrap(), two_character(&diag).unwrap());
    }
}

#[test]
fn modular_invariance_on_klein_and_cyclic_four() {
    for group in [klein(), Group::cyclic(4)] {
        let action = GroupAction::regular(Q, &group).unwrap();
        let r = check_modular_invariance(&action, 0x2c4a, 20, 6).unwrap();
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn inner_klein_action_on_matrices() {
    // conjugation by diag(1, -1) and by the swap: commuting automorphisms of M2
    let m2 = matrix_algebra(Q, 2);
    let conj = |p: [[i64; 2]; 2]| -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..4)
            .map(|e| {
                let (i, j) = (e / 2, e % 2);
                // p E_ij p^{-1} with p an involution
                let mut out = vec![Q.zero(); 4];
                for r in 0..2 {
                    for c in 0..2 {
                        out[r * 2 + c] = Q.from_i64(p[r][i] * p[j][c]);
                    }
                }
                out
            })
            .collect();
        Matrix::from_columns(Q, 4, &cols)
    };
    let d = conj([[1, 0], [0, -1]]);
    let s = conj([[0, 1], [1, 0]]);
    let ds = &d * &s;
    let action = GroupAction::new(klein(), m2, vec![Matrix::identity(Q, 4), s, d, ds]).unwrap();
    let table = character_table(&action).unwrap();
    assert_eq!(table.len(), 16);
    assert!(check_modular_invariance(&action, 3, 6, 6).unwrap().passed());
}
