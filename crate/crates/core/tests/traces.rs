use morita_core::algebra::{
    group_algebra, matrix_algebra, product_algebra, symmetric_permutation, Group,
};
use morita_core::bimodule::{
    left_module, random_bimodule, random_bimodule_map, tensor_over, unit_bimodule, RandomSpec,
};
use morita_core::duality::right_dual;
use morita_core::traces::{
    character_convention, check_composite, check_composite_euler, check_induction, check_lunts,
    check_main_theorem, check_mate, class_values, euler_char, twisted_trace, CharacterConvention,
    Twist, Verdict,
};
use morita_core::{Algebra, Bimodule, Field, Matrix, Scalar};

const Q: Field = Field::Rationals;

fn permutation_matrix(n: usize, p: &[usize]) -> Matrix {
    let mut m = Matrix::zeros(Q, n, n);
    for (i, &j) in p.iter().enumerate() {
        m.set(j, i, Q.one());
    }
    m
}

/// Action on the sum-zero plane in the basis `e0 - e1`, `e1 - e2`.
fn standard_matrix(p: &[usize]) -> Matrix {
    let image = |b: [i64; 3]| {
        let mut v = [0i64; 3];
        for i in 0..3 {
            v[p[i]] += b[i];
        }
        // v = v0 (e0 - e1) + (v0 + v1) (e1 - e2)
        [v[0], v[0] + v[1]]
    };
    let c1 = image([1, -1, 0]);
    let c2 = image([0, 1, -1]);
    Matrix::from_i64(Q, &[vec![c1[0], c2[0]], vec![c1[1], c2[1]]])
}

fn character_of(a: &Algebra, g: &Group, mats: Vec<Matrix>) -> Vec<Scalar> {
    let v = left_module("V", a, mats).unwrap();
    let chi = euler_char(&right_dual(&v).unwrap()).unwrap();
    let values = class_values(&chi);
    let conv = character_convention().unwrap();
    (0..g.order())
        .map(|x| if conv == CharacterConvention::Direct { values[x].clone() } else { values[g.inverse(x)].clone() })
        .collect()
}

#[test]
fn characters_of_s3_match_matrix_traces() {
    let s3 = Group::symmetric(3);
    let a = group_algebra(Q, &s3);
    let perms: Vec<Vec<usize>> = (0..6).map(|g| symmetric_permutation(3, g)).collect();
    let fixed = |p: &Vec<usize>| (0..3).filter(|&i| p[i] == i).count() as i64;

    let perm = character_of(&a, &s3, perms.iter().map(|p| permutation_matrix(3, p)).collect());
    let std = character_of(&a, &s3, perms.iter().map(|p| standard_matrix(p)).collect());
    for g in 0..6 {
        assert_eq!(perm[g], Q.from_i64(fixed(&perms[g])), "permutation character at {g}");
        assert_eq!(std[g], Q.from_i64(fixed(&perms[g]) - 1), "standard character at {g}");
    }
    // classes of size 1, 3, 2 take the values 2, 0, -1
    let mut by_class: Vec<i64> = s3.conjugacy_classes().iter().map(|c| std[c[0]].to_i64().unwrap()).collect();
    by_class.sort();
    assert_eq!(by_class, vec![-1, 0, 2]);
}

#[test]
fn convention_distinguishes_g_from_its_inverse() {
    let f = Field::prime(7).unwrap();
    let c3 = Group::cyclic(3);
    let a = group_algebra(f, &c3);
    let mats = [1, 2, 4].iter().map(|&x| Matrix::from_i64(f, &[vec![x]])).collect();
    let v = left_module("chi", &a, mats).unwrap();
    let values = class_values(&euler_char(&right_dual(&v).unwrap()).unwrap());
    let expected = match character_convention().unwrap() {
        CharacterConvention::Direct => [1, 2, 4],
        CharacterConvention::Inverse => [1, 4, 2],
    };
    for g in 0..3 {
        assert_eq!(values[g], f.from_i64(expected[g]));
    }
}

/// Brute-force Frobenius formula, kept separate from the library's copy.
fn frobenius(g: &Group, embed: &[usize], chi: &[i64]) -> Vec<Scalar> {
    (0..g.order())
        .map(|x| {
            let mut total = 0;
            for y in 0..g.order() {
                let c = g.mul(g.inverse(y), g.mul(x, y));
                if let Some(h) = embed.iter().position(|&e| e == c) {
                    total += chi[h];
                }
            }
            Q.fraction(total, embed.len() as i64).unwrap()
        })
        .collect()
}

#[test]
fn induction_of_the_sign_from_c2() {
    let s3 = Group::symmetric(3);
    let c2 = Group::cyclic(2);
    // element 2 is the transposition (0 1)
    let embed = [0, 2];
    let rep = vec![Matrix::from_i64(Q, &[vec![1]]), Matrix::from_i64(Q, &[vec![-1]])];
    let report = check_induction(Q, &s3, &c2, &embed, &rep).unwrap();
    assert!(report.passed(), "{report}");

    let kg = group_algebra(Q, &s3);
    let kh = group_algebra(Q, &c2);
    let cols: Vec<Vec<Scalar>> = embed.iter().map(|&e| kg.basis(e)).collect();
    let restrict = morita_core::bimodule::base_change(&kh, &kg, &Matrix::from_columns(Q, 6, &cols)).unwrap();
    let v = left_module("sign", &kh, rep).unwrap();
    let ind = tensor_over(&restrict, &v).unwrap();
    assert_eq!(ind.dim(), 3);
    let chi = euler_char(&right_dual(&ind.result).unwrap()).unwrap();
    let values = class_values(&chi);
    let oracle = frobenius(&s3, &embed, &[1, -1]);
    let conv = character_convention().unwrap();
    for x in 0..6 {
        let y = if conv == CharacterConvention::Direct { x } else { s3.inverse(x) };
        assert_eq!(values[x], oracle[y]);
    }
    // one value per conjugacy class: 3 at the identity, -1 on transpositions, 0 on 3-cycles
    let classes = s3.conjugacy_classes();
    let mut seen: Vec<i64> = classes.iter().map(|c| values[c[0]].to_i64().unwrap()).collect();
    seen.sort();
    assert_eq!(seen, vec![-1, 0, 3]);
}

#[test]
fn trivial_induction_cases() {
    let s3 = Group::symmetric(3);
    let perms: Vec<Vec<usize>> = (0..6).map(|g| symmetric_permutation(3, g)).collect();
    let std: Vec<Matrix> = perms.iter().map(|p| standard_matrix(p)).collect();
    let all: Vec<usize> = (0..6).collect();
    assert!(check_induction(Q, &s3, &s3, &all, &std).unwrap().passed());

    let report = check_induction(Q, &s3, &Group::trivial(), &[0], &[Matrix::identity(Q, 1)]).unwrap();
    assert!(report.passed(), "{report}");
    let kg = group_algebra(Q, &s3);
    let regular = euler_char(&right_dual(&unit_bimodule(&kg).renamed("reg")).unwrap());
    assert!(regular.is_ok());
    assert!(report.notes.iter().any(|n| n.contains("Frobenius oracle 6,0,0,0,0,0")));

    let f3 = Field::prime(3).unwrap();
    let r = check_induction(f3, &s3, &Group::trivial(), &[0], &[Matrix::identity(f3, 1)]).unwrap();
    assert_eq!(r.verdict, Verdict::Refused);
}

#[test]
fn main_theorem_on_separable_algebras() {
    let algebras = [product_algebra(Q, 2), group_algebra(Q, &Group::cyclic(2)), matrix_algebra(Q, 2)];
    let seeds: [&[u64]; 3] = [&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9], &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9], &[0, 1, 2, 3, 4]];
    for (a, s) in algebras.iter().zip(seeds) {
        let r = check_main_theorem(a, s).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.left.len(), s.len());
    }
}

fn random_twist(a: &Algebra, p: &Bimodule, m: &Bimodule, q: &Bimodule, seed: u64) -> Twist {
    let source = tensor_over(p, m).unwrap();
    let target = tensor_over(m, q).unwrap();
    let map = random_bimodule_map(&source.result, &target.result, seed).unwrap();
    let _ = a;
    Twist { source, target, map }
}

#[test]
fn composite_traces_over_c2() {
    let a = group_algebra(Q, &Group::cyclic(2));
    let spec = RandomSpec { max_dim: 4, max_summands: 2 };
    for seed in 0..10 {
        let r = |k: u64| random_bimodule(&a, &a, 10 * seed + k, spec).unwrap();
        let (q1, m1, q2, m2, q3) = (r(0), r(1), r(2), r(3), r(4));
        let f1 = random_twist(&a, &q1, &m1, &q2, seed);
        let f2 = random_twist(&a, &q2, &m2, &q3, seed + 100);
        let report = check_composite(&f1, &right_dual(&m1).unwrap(), &f2, &right_dual(&m2).unwrap()).unwrap();
        assert!(report.passed(), "seed {seed}: {report}");
    }
}

#[test]
fn composite_euler_characteristics() {
    let a = product_algebra(Q, 2);
    let u = unit_bimodule(&a);
    assert!(check_composite_euler(&u, &u).unwrap().passed());
    for seed in 0..4 {
        let m1 = random_bimodule(&a, &a, seed, RandomSpec::default()).unwrap();
        let m2 = random_bimodule(&a, &a, seed + 50, RandomSpec::default()).unwrap();
        assert!(check_composite_euler(&m1, &m2).unwrap().passed());
        let canon1 = Twist::canonical(&m1).unwrap();
        let canon2 = Twist::canonical(&m2).unwrap();
        let r = check_composite(&canon1, &right_dual(&m1).unwrap(), &canon2, &right_dual(&m2).unwrap()).unwrap();
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn mates_have_equal_traces() {
    let a = product_algebra(Q, 2);
    let spec = RandomSpec { max_dim: 4, max_summands: 2 };
    for seed in 0..20 {
        let r = |k: u64| random_bimodule(&a, &a, 7 * seed + k, spec).unwrap();
        let (p, m, q) = (r(0), r(1), r(2));
        let t = random_twist(&a, &p, &m, &q, seed);
        let report = check_mate(&t, &right_dual(&m).unwrap()).unwrap();
        assert!(report.passed(), "seed {seed}: {report}");
    }
    let m = random_bimodule(&a, &a, 3, RandomSpec::default()).unwrap();
    let r = check_mate(&Twist::canonical(&m).unwrap(), &right_dual(&m).unwrap()).unwrap();
    let chi = euler_char(&right_dual(&m).unwrap()).unwrap();
    assert_eq!(r.left, chi.matrix.entries().iter().map(ToString::to_string).collect::<Vec<_>>());
}

#[test]
fn twisted_trace_is_linear() {
    let a = product_algebra(Q, 2);
    let spec = RandomSpec { max_dim: 4, max_summands: 2 };
    for seed in 0..20 {
        let r = |k: u64| random_bimodule(&a, &a, 5 * seed + k, spec).unwrap();
        let (p, m, q) = (r(0), r(1), r(2));
        let pair = right_dual(&m).unwrap();
        let f = random_twist(&a, &p, &m, &q, seed);
        let g = random_twist(&a, &p, &m, &q, seed + 1000);
        let c = Q.fraction(-3, 2).unwrap();
        let lhs = twisted_trace(&f.add(&g.scale(&c)).unwrap(), &pair).unwrap().matrix;
        let tf = twisted_trace(&f, &pair).unwrap().matrix;
        let tg = twisted_trace(&g, &pair).unwrap().matrix;
        assert_eq!(lhs, &tf + &tg.scale(&c));
    }
}

#[test]
fn lunts_examples() {
    let m2 = matrix_algebra(Q, 2);
    let r = check_lunts(&m2, &unit_bimodule(&m2), 4).unwrap();
    assert!(r.passed(), "{r}");
    assert_eq!(r.left, vec!["1".to_string()]);
    let s3 = group_algebra(Q, &Group::symmetric(3));
    let r = check_lunts(&s3, &unit_bimodule(&s3), 4).unwrap();
    assert!(r.passed(), "{r}");
    assert_eq!(r.right, vec!["3".to_string()]);
    let kk = product_algebra(Q, 2);
    for seed in 0..10 {
        let m = random_bimodule(&kk, &kk, seed, RandomSpec::default()).unwrap();
        let r = check_lunts(&kk, &m, 4).unwrap();
        assert!(r.passed(), "seed {seed}: {r}");
    }
    let dual = morita_core::algebra::truncated_polynomial(Q, 2);
    assert_eq!(check_lunts(&dual, &unit_bimodule(&dual), 4).unwrap().verdict, Verdict::Refused);
}
