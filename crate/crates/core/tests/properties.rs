//! Property tests for the algebraic invariants, on small random matrices and
//! seeded random bimodules over separable algebras.

use proptest::prelude::*;

use morita_core::algebra::{group_algebra, matrix_algebra, product_algebra, truncated_polynomial, Group};
use morita_core::bimodule::{
    associator, external_tensor, intertwiners, random_bimodule, random_bimodule_map, tensor_maps, tensor_over, unit_bimodule,
    RandomSpec,
};
use morita_core::duality::{mate, right_dual, unmate, verify_triangles, DualPair};
use morita_core::exactlin::{inverse, is_invertible, kernel_basis, quotient_by_rows, rank, rref};
use morita_core::shadow::{hh0, shadow_map, shadow_theta};
use morita_core::traces::{euler_char, iterated_trace, random_commuting_twist, twisted_trace, Order, Twist};
use morita_core::twochar::{apply_word, random_word, square_cell, two_character, GroupAction};
use morita_core::{Algebra, Bimodule, BimoduleMap, Field, Matrix, Scalar};

const Q: Field = Field::Rationals;

fn matrix(field: Field, max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-3i64..=3, r * c).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(c).map(<[i64]>::to_vec).collect();
            Matrix::from_i64(field, &rows)
        })
    })
}

fn sized(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
        let rows: Vec<Vec<i64>> = v.chunks(cols).map(<[i64]>::to_vec).collect();
        Matrix::from_i64(Q, &rows)
    })
}

fn suite() -> Vec<Algebra> {
    vec![product_algebra(Q, 2), group_algebra(Q, &Group::cyclic(2)), matrix_algebra(Q, 2)]
}

fn algebra() -> impl Strategy<Value = Algebra> {
    (0..3usize).prop_map(|i| suite()[i].clone())
}

fn module(a: &Algebra, seed: u64) -> Bimodule {
    random_bimodule(a, a, seed, RandomSpec { max_dim: 4, max_summands: 2 }).unwrap()
}

/// Searches the intertwiner space for an invertible map, using combinations
/// with widely spread coefficients so that singular draws are unlikely.
fn has_isomorphism(x: &Bimodule, y: &Bimodule) -> bool {
    if x.dim() != y.dim() {
        return false;
    }
    if x.dim() == 0 {
        return true;
    }
    let basis = intertwiners(x, y).unwrap();
    (1..=4i64).any(|t| {
        let mut m = Matrix::zeros(Q, y.dim(), x.dim());
        for (i, b) in basis.iter().enumerate() {
            m = m.try_add(&b.scale(&Q.from_i64((t * 7 + i as i64).pow(3) % 1009 + 1))).unwrap();
        }
        is_invertible(&m)
    })
}

/// `N` transported along an automorphism `P`, with `η` and `ε` transported to match.
fn transported(pair: &DualPair, p: &Matrix) -> DualPair {
    let n2 = pair.n.change_basis(p).unwrap();
    let to = BimoduleMap::new(&pair.n, &n2, p.clone()).unwrap();
    let from = BimoduleMap::new(&n2, &pair.n, inverse(p).unwrap()).unwrap();
    let id_m = BimoduleMap::identity(&pair.m);
    let mn = tensor_over(&pair.m, &n2).unwrap();
    let nm = tensor_over(&n2, &pair.m).unwrap();
    let coev = tensor_maps(&id_m, &to, &pair.mn, &mn).unwrap().compose(&pair.coev).unwrap();
    let ev = pair.ev.compose(&tensor_maps(&from, &id_m, &nm, &pair.nm).unwrap()).unwrap();
    DualPair { m: pair.m.clone(), n: n2, coev, ev, mn, nm }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn rref_is_idempotent(m in matrix(Q, 5)) {
        let r = rref(&m);
        prop_assert_eq!(rref(&r.matrix).matrix, r.matrix);
    }

    #[test]
    fn rank_nullity(m in matrix(Q, 5), p in prop::sample::select(vec![2u64, 3, 7])) {
        prop_assert_eq!(rank(&m) + kernel_basis(&m).len(), m.cols());
        for v in kernel_basis(&m) {
            prop_assert!(m.mul_vec(&v).iter().all(Scalar::is_zero));
        }
        let fp = Field::prime(p).unwrap();
        let mp = Matrix::new(fp, m.rows(), m.cols(), m.entries().iter().map(|x| x.reduce_mod(p).unwrap()).collect()).unwrap();
        prop_assert_eq!(rank(&mp) + kernel_basis(&mp).len(), mp.cols());
        prop_assert!(rank(&mp) <= rank(&m));
    }

    #[test]
    fn quotient_projection(m in matrix(Q, 5)) {
        let q = quotient_by_rows(&m);
        prop_assert_eq!(rank(&q.projection), q.dim);
        prop_assert_eq!(q.dim + rank(&m), m.cols());
        for i in 0..m.rows() {
            prop_assert!(q.projection.mul_vec(m.row(i)).iter().all(Scalar::is_zero));
        }
        prop_assert!((&q.projection * &q.section).is_identity());
    }

    #[test]
    fn kron_mixed_product(a in sized(2, 3), b in sized(3, 2), c in sized(1, 2), d in sized(2, 2)) {
        prop_assert_eq!((&a * &b).kron(&(&c * &d)), &a.kron(&c) * &b.kron(&d));
        prop_assert_eq!(a.kron(&c).kron(&d), a.kron(&c.kron(&d)));
    }
}

#[test]
fn tensor_algebras_are_associative_and_opposite_distributes() {
    let algebras = [product_algebra(Q, 2), group_algebra(Q, &Group::cyclic(3)), truncated_polynomial(Q, 2)];
    for a in &algebras {
        for b in &algebras {
            // Algebra::new rejects non-associative constants
            let ab = a.tensor(b).unwrap();
            assert!(ab.opposite().same_as(&a.opposite().tensor(&b.opposite()).unwrap()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn tensor_is_balanced(a in algebra(), seed in 0u64..1000) {
        let (m, n) = (module(&a, seed), module(&a, seed + 1));
        let tw = tensor_over(&m, &n).unwrap();
        for b in 0..a.dim() {
            for i in 0..m.dim() {
                for j in 0..n.dim() {
                    let mb = m.rho(b).mul_vec(&m.basis(i));
                    let bn = n.lambda(b).mul_vec(&n.basis(j));
                    prop_assert_eq!(tw.pure_tensor(&mb, &n.basis(j)), tw.pure_tensor(&m.basis(i), &bn));
                }
            }
        }
    }

    #[test]
    fn associator_is_an_isomorphism(a in algebra(), seed in 0u64..1000) {
        let (m, n, p) = (module(&a, seed), module(&a, seed + 1), module(&a, seed + 2));
        let mn = tensor_over(&m, &n).unwrap();
        let mn_p = tensor_over(&mn.result, &p).unwrap();
        let np = tensor_over(&n, &p).unwrap();
        let m_np = tensor_over(&m, &np.result).unwrap();
        let assoc = associator(&mn, &mn_p, &np, &m_np);
        assoc.check().unwrap();
        prop_assert!(assoc.is_iso());
    }

    #[test]
    fn tensoring_maps_is_functorial(a in algebra(), seed in 0u64..1000) {
        let (m, n) = (module(&a, seed), module(&a, seed + 1));
        let tw = tensor_over(&m, &n).unwrap();
        let (f1, f2) = (random_bimodule_map(&m, &m, seed).unwrap(), random_bimodule_map(&m, &m, seed + 7).unwrap());
        let (g1, g2) = (random_bimodule_map(&n, &n, seed + 3).unwrap(), random_bimodule_map(&n, &n, seed + 9).unwrap());
        let whole = tensor_maps(&f2.compose(&f1).unwrap(), &g2.compose(&g1).unwrap(), &tw, &tw).unwrap();
        let parts = tensor_maps(&f2, &g2, &tw, &tw).unwrap().compose(&tensor_maps(&f1, &g1, &tw, &tw).unwrap()).unwrap();
        prop_assert_eq!(whole.matrix, parts.matrix);
        let id = tensor_maps(&BimoduleMap::identity(&m), &BimoduleMap::identity(&n), &tw, &tw).unwrap();
        prop_assert!(id.matrix.is_identity());
    }

    #[test]
    fn right_duals_pass_triangles_and_compose(a in algebra(), seed in 0u64..1000) {
        let (m1, m2) = (module(&a, seed), module(&a, seed + 1));
        let (p1, p2) = (right_dual(&m1).unwrap(), right_dual(&m2).unwrap());
        prop_assert!(verify_triangles(&p1).unwrap().passed());
        let m12 = tensor_over(&m1, &m2).unwrap();
        let p12 = right_dual(&m12.result).unwrap();
        prop_assert!(verify_triangles(&p12).unwrap().passed());
        let n21 = tensor_over(&p2.n, &p1.n).unwrap().result;
        prop_assert_eq!(n21.dim(), p12.n.dim());
        prop_assert!(has_isomorphism(&n21, &p12.n), "no isomorphism N2.N1 -> (M1.M2)*");
    }

    #[test]
    fn theta_is_natural(a in algebra(), seed in 0u64..1000) {
        let (m, n) = (module(&a, seed), module(&a, seed + 1));
        let (mn, nm) = (tensor_over(&m, &n).unwrap(), tensor_over(&n, &m).unwrap());
        let f = random_bimodule_map(&m, &m, seed).unwrap();
        let g = random_bimodule_map(&n, &n, seed + 1).unwrap();
        let (smn, snm) = (hh0(&mn.result).unwrap(), hh0(&nm.result).unwrap());
        let theta = shadow_theta(&mn, &nm).unwrap();
        let fg = shadow_map(&tensor_maps(&f, &g, &mn, &mn).unwrap(), &smn, &smn);
        let gf = shadow_map(&tensor_maps(&g, &f, &nm, &nm).unwrap(), &snm, &snm);
        prop_assert_eq!(&theta * &fg, &gf * &theta);
    }

    #[test]
    fn shadows_are_functorial(a in algebra(), seed in 0u64..1000) {
        let (m, n) = (module(&a, seed), module(&a, seed + 1));
        let (sm, sn) = (hh0(&m).unwrap(), hh0(&n).unwrap());
        let f = random_bimodule_map(&m, &n, seed).unwrap();
        let g = random_bimodule_map(&n, &m, seed + 5).unwrap();
        prop_assert_eq!(shadow_map(&g.compose(&f).unwrap(), &sm, &sm), &shadow_map(&g, &sn, &sm) * &shadow_map(&f, &sm, &sn));
        prop_assert!(shadow_map(&BimoduleMap::identity(&m), &sm, &sm).is_identity());
    }

    #[test]
    fn traces_are_linear_and_independent_of_duality_data(a in algebra(), seed in 0u64..1000, c in -3i64..=3) {
        let (p, m) = (module(&a, seed), module(&a, seed + 1));
        let pm = tensor_over(&p, &m).unwrap();
        let mp = tensor_over(&m, &p).unwrap();
        let phi = random_bimodule_map(&pm.result, &mp.result, seed).unwrap();
        let psi = random_bimodule_map(&pm.result, &mp.result, seed + 11).unwrap();
        let t1 = Twist { source: pm.clone(), target: mp.clone(), map: phi };
        let t2 = Twist { source: pm, target: mp, map: psi };
        let pair = right_dual(&m).unwrap();
        let c = Q.from_i64(c);
        let combined = twisted_trace(&t1.scale(&c).add(&t2).unwrap(), &pair).unwrap().matrix;
        let separate = twisted_trace(&t1, &pair).unwrap().matrix.scale(&c).try_add(&twisted_trace(&t2, &pair).unwrap().matrix).unwrap();
        prop_assert_eq!(combined, separate);

        let q = random_bimodule_map(&pair.n, &pair.n, seed + 13).unwrap().matrix;
        prop_assume!(is_invertible(&q));
        let other = transported(&pair, &q);
        prop_assert!(verify_triangles(&other).unwrap().passed());
        prop_assert_eq!(twisted_trace(&t1, &other).unwrap().matrix, twisted_trace(&t1, &pair).unwrap().matrix);
    }

    #[test]
    fn unmate_inverts_mate(a in algebra(), seed in 0u64..1000) {
        let (p, m, q) = (module(&a, seed), module(&a, seed + 1), module(&a, seed + 2));
        let pm = tensor_over(&p, &m).unwrap();
        let mq = tensor_over(&m, &q).unwrap();
        let phi = random_bimodule_map(&pm.result, &mq.result, seed).unwrap();
        let pair = right_dual(&m).unwrap();
        let mated = mate(&phi, &pm, &mq, &pair).unwrap();
        let np = tensor_over(&pair.n, &p).unwrap();
        let qn = tensor_over(&q, &pair.n).unwrap();
        let (_, _, back) = unmate(&mated, &np, &qn, &pair).unwrap();
        prop_assert_eq!(back.matrix, phi.matrix);
    }

    #[test]
    fn iteration_orders_agree(a in algebra(), seed in 0u64..1000) {
        let t = random_commuting_twist(&a, seed).unwrap();
        let lp = morita_core::duality::left_dual(&t.source.left).unwrap();
        let rp = right_dual(&t.source.right).unwrap();
        prop_assert_eq!(iterated_trace(&t, &lp, &rp, Order::MFirst).unwrap(), iterated_trace(&t, &lp, &rp, Order::NFirst).unwrap());
    }
}

/// `(m ⊗ n) ⊗ (m' ⊗ n') ↦ (m ⊗ m') ⊗ (n ⊗ n')` descends to an isomorphism
/// `(M ⊠ N) ⊙ (M' ⊠ N') → (M ⊙ M') ⊠ (N ⊙ N')`.
#[test]
fn external_tensor_interchanges_with_tensor_over() {
    let (a, b) = (product_algebra(Q, 2), group_algebra(Q, &Group::cyclic(2)));
    let mut nonzero = 0;
    for seed in 0..3 {
        let (m, m2) = (module(&a, seed), module(&a, seed + 10));
        let (n, n2) = (module(&b, seed + 20), module(&b, seed + 30));
        let outer = tensor_over(&external_tensor(&m, &n).unwrap(), &external_tensor(&m2, &n2).unwrap()).unwrap();
        let (mm, nn) = (tensor_over(&m, &m2).unwrap(), tensor_over(&n, &n2).unwrap());
        let target = external_tensor(&mm.result, &nn.result).unwrap();
        let cols: Vec<Vec<Scalar>> = (0..m.dim() * n.dim() * m2.dim() * n2.dim())
            .map(|idx| {
                let (left, right) = (idx / (m2.dim() * n2.dim()), idx % (m2.dim() * n2.dim()));
                let (i, j) = (left / n.dim(), left % n.dim());
                let (i2, j2) = (right / n2.dim(), right % n2.dim());
                let x = mm.projection.column(i * m2.dim() + i2);
                let y = nn.projection.column(j * n2.dim() + j2);
                x.iter().flat_map(|u| y.iter().map(move |v| u * v)).collect()
            })
            .collect();
        let lifted = Matrix::from_columns(Q, target.dim(), &cols);
        let map = &lifted * &outer.section;
        assert_eq!(&map * &outer.projection, lifted, "seed {seed}: map does not descend");
        let f = BimoduleMap::new(&outer.result, &target, map).unwrap();
        assert!(f.is_iso(), "seed {seed}");
        nonzero += usize::from(target.dim() > 0);
    }
    assert!(nonzero > 0);
}

#[test]
fn unit_has_identity_euler_characteristic() {
    for a in suite().into_iter().chain([truncated_polynomial(Q, 2)]) {
        let chi = euler_char(&right_dual(&unit_bimodule(&a)).unwrap()).unwrap();
        assert!(chi.matrix.is_identity(), "{}", a.name());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn moves_preserve_cells_and_characters(seed in 0u64..10_000, pair in 0usize..16) {
        let action = GroupAction::regular(Q, &Group::cyclic(4)).unwrap();
        let (g, h) = (pair / 4, pair % 4);
        let cell = square_cell(&action, g, h).unwrap();
        let moved = apply_word(&action, &cell, &random_word(seed, 6)).unwrap();
        moved.validate(&action.group).unwrap();
        prop_assert_eq!(two_character(&moved).unwrap(), two_character(&cell).unwrap());
    }
}
