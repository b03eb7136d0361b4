//! Dual pairs of bimodules, mates, and the dualizability witnesses of an algebra.

use crate::algebra::Algebra;
use crate::bimodule::{
    associator, associator_inverse, external_tensor, hom_left, hom_right, left_unitor,
    left_unitor_inverse, right_unitor, right_unitor_inverse, tensor_maps, tensor_over,
    unit_bimodule, Bimodule, BimoduleMap, TensorWitness,
};
use crate::error::{Error, Result};
use crate::exactlin::{solve, EntryWitness, Matrix, Scalar};

/// `(M, N, η, ε)` with `M` over (A, B), `N` over (B, A),
/// `η: U_A → M ⊙ N` and `ε: N ⊙ M → U_B`.
#[derive(Clone, Debug)]
pub struct DualPair {
    pub m: Bimodule,
    pub n: Bimodule,
    pub coev: BimoduleMap,
    pub ev: BimoduleMap,
    pub mn: TensorWitness,
    pub nm: TensorWitness,
}

/// Outcome of recomputing both triangle composites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleReport {
    /// `M → M` through `(M ⊙ N) ⊙ M`; `None` when it is the identity.
    pub first: Option<EntryWitness>,
    /// `N → N` through `N ⊙ (M ⊙ N)`.
    pub second: Option<EntryWitness>,
}

impl TriangleReport {
    pub fn passed(&self) -> bool {
        self.first.is_none() && self.second.is_none()
    }
}

/// Composite of maps listed in the order they are applied.
pub fn compose_all(steps: &[BimoduleMap]) -> Result<BimoduleMap> {
    let (first, rest) = steps.split_first().expect("at least one map");
    let mut acc = first.clone();
    for s in rest {
        acc = s.compose(&acc)?;
    }
    Ok(acc)
}

impl DualPair {
    /// Assembles a pair from a lift `t ∈ M ⊗ N` of `η(1)` and the evaluation
    /// on `N ⊗ M`, then checks it.
    fn assemble(m: &Bimodule, n: &Bimodule, t: &[Scalar], ev_ambient: &Matrix) -> Result<DualPair> {
        let mn = tensor_over(m, n)?;
        let nm = tensor_over(n, m)?;
        let v = mn.projection.mul_vec(t);
        let cols: Vec<Vec<Scalar>> = mn.result.lambdas().iter().map(|l| l.mul_vec(&v)).collect();
        let ua = unit_bimodule(m.left());
        let ub = unit_bimodule(m.right());
        let coev = BimoduleMap::new_unchecked(&ua, &mn.result, Matrix::from_columns(m.field(), mn.dim(), &cols))?;
        let ev = BimoduleMap::new_unchecked(&nm.result, &ub, ev_ambient * &nm.section)?;
        coev.check().map_err(|e| Error::Internal(format!("coevaluation: {e}")))?;
        ev.check().map_err(|e| Error::Internal(format!("evaluation: {e}")))?;
        let pair = DualPair { m: m.clone(), n: n.clone(), coev, ev, mn, nm };
        let report = verify_triangles(&pair)?;
        if !report.passed() {
            return Err(Error::Internal(format!("triangle identities fail: {report:?}")));
        }
        Ok(pair)
    }
}

/// Recomputes both triangle identities.
pub fn verify_triangles(p: &DualPair) -> Result<TriangleReport> {
    let (m, n) = (&p.m, &p.n);
    let ux = unit_bimodule(m.left());
    let uy = unit_bimodule(m.right());
    let id_m = BimoduleMap::identity(m);
    let id_n = BimoduleMap::identity(n);

    let ux_m = tensor_over(&ux, m)?;
    let mn_m = tensor_over(&p.mn.result, m)?;
    let m_nm = tensor_over(m, &p.nm.result)?;
    let m_uy = tensor_over(m, &uy)?;
    let first = compose_all(&[
        left_unitor_inverse(&ux_m),
        tensor_maps(&p.coev, &id_m, &ux_m, &mn_m)?,
        associator(&p.mn, &mn_m, &p.nm, &m_nm),
        tensor_maps(&id_m, &p.ev, &m_nm, &m_uy)?,
        right_unitor(&m_uy),
    ])?;

    let n_ux = tensor_over(n, &ux)?;
    let n_mn = tensor_over(n, &p.mn.result)?;
    let nm_n = tensor_over(&p.nm.result, n)?;
    let uy_n = tensor_over(&uy, n)?;
    let second = compose_all(&[
        right_unitor_inverse(&n_ux),
        tensor_maps(&id_n, &p.coev, &n_ux, &n_mn)?,
        associator_inverse(&p.nm, &nm_n, &p.mn, &n_mn),
        tensor_maps(&p.ev, &id_n, &nm_n, &uy_n)?,
        left_unitor(&uy_n),
    ])?;

    Ok(TriangleReport {
        first: first.matrix.first_difference(&Matrix::identity(m.field(), m.dim())),
        second: second.matrix.first_difference(&Matrix::identity(n.field(), n.dim())),
    })
}

/// Right dual `N = Hom_B(M, U_B)` of an (A, B)-bimodule `M`, with
/// `ε(f ⊗ m) = f(m)` and `η(1)` solved from the dual-basis equation
/// `Σ m_j · f_k(m) t_jk = m`.
pub fn right_dual(m: &Bimodule) -> Result<DualPair> {
    let (n, system, rhs, ev) = right_dual_system(m)?;
    let t = solve(&system, &rhs)?.ok_or_else(|| Error::NotDualizable(m.name().to_string()))?;
    DualPair::assemble(m, &n, &t, &ev)
}

/// The dual module, the dual-basis system `system · t = rhs` for the lift of
/// `η(1)`, and the evaluation on `N ⊗ M`.
fn right_dual_system(m: &Bimodule) -> Result<(Bimodule, Matrix, Vec<Scalar>, Matrix)> {
    let ub = unit_bimodule(m.right());
    let hom = hom_right(m, &ub)?;
    let n = hom.module.renamed(format!("{}*", m.name()));
    let field = m.field();
    let (d, k) = (m.dim(), n.dim());
    // f_k(e_l) as elements of B
    let values: Vec<Vec<Vec<Scalar>>> =
        hom.maps.iter().map(|f| f.columns()).collect();
    let mut system = Matrix::zeros(field, d * d, d * k);
    let mut rhs = vec![field.zero(); d * d];
    for l in 0..d {
        rhs[l * d + l] = field.one();
        for (kk, vals) in values.iter().enumerate() {
            let act = m.act_right(&vals[l]);
            for j in 0..d {
                for r in 0..d {
                    let x = act.get(r, j);
                    if !x.is_zero() {
                        system.set(l * d + r, j * k + kk, x.clone());
                    }
                }
            }
        }
    }
    let mut ev = Matrix::zeros(field, m.right().dim(), k * d);
    for (kk, vals) in values.iter().enumerate() {
        for (j, v) in vals.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                ev.set(r, kk * d + j, x.clone());
            }
        }
    }
    Ok((n, system, rhs, ev))
}

/// Left dual of an (A, B)-bimodule `M`: the pair `(L, M)` with
/// `L = Hom_A(M, U_A)`, `ε(m ⊗ f) = f(m)` and `η(1) = Σ f_k ⊗ m_j t_kj`.
pub fn left_dual(m: &Bimodule) -> Result<DualPair> {
    let ua = unit_bimodule(m.left());
    let hom = hom_left(m, &ua)?;
    let l = hom.module.renamed(format!("*{}", m.name()));
    let field = m.field();
    let (d, k) = (m.dim(), l.dim());
    let values: Vec<Vec<Vec<Scalar>>> =
        hom.maps.iter().map(|f| f.columns()).collect();
    let mut system = Matrix::zeros(field, d * d, k * d);
    let mut rhs = vec![field.zero(); d * d];
    for e in 0..d {
        rhs[e * d + e] = field.one();
        for (kk, vals) in values.iter().enumerate() {
            let act = m.act_left(&vals[e]);
            for j in 0..d {
                for r in 0..d {
                    let x = act.get(r, j);
                    if !x.is_zero() {
                        system.set(e * d + r, kk * d + j, x.clone());
                    }
                }
            }
        }
    }
    let t = solve(&system, &rhs)?
        .ok_or_else(|| Error::NotDualizable(format!("{} has no left dual", m.name())))?;
    let mut ev = Matrix::zeros(field, m.left().dim(), d * k);
    for (kk, vals) in values.iter().enumerate() {
        for (j, v) in vals.iter().enumerate() {
            for (r, x) in v.iter().enumerate() {
                ev.set(r, j * k + kk, x.clone());
            }
        }
    }
    DualPair::assemble(&l, m, &t, &ev)
}

/// Mate `N ⊙ P → Q ⊙ N` of `φ: P ⊙ M → M ⊙ Q`:
/// `(ε ⊙ 1)(1 ⊙ φ ⊙ 1)(1 ⊙ η)` with unitors and associators made explicit.
pub fn mate(phi: &BimoduleMap, pm: &TensorWitness, mq: &TensorWitness, pair: &DualPair) -> Result<BimoduleMap> {
    let (m, n) = (&pair.m, &pair.n);
    let (p, q) = (&pm.left, &mq.right);
    if !pm.right.same_as(m) || !mq.left.same_as(m) {
        return Err(Error::Dimension("twist does not match the dual pair".into()));
    }
    if phi.source.dim() != pm.dim() || phi.target.dim() != mq.dim() {
        return Err(Error::Dimension("twist does not match its tensor witnesses".into()));
    }
    let ua = unit_bimodule(m.left());
    let ub = unit_bimodule(m.right());
    let np = tensor_over(n, p)?;
    let np_ua = tensor_over(&np.result, &ua)?;
    let np_mn = tensor_over(&np.result, &pair.mn.result)?;
    let np_m = tensor_over(&np.result, m)?;
    let npm_n = tensor_over(&np_m.result, n)?;
    let n_pm = tensor_over(n, &pm.result)?;
    let n_pm_n = tensor_over(&n_pm.result, n)?;
    let n_mq = tensor_over(n, &mq.result)?;
    let n_mq_n = tensor_over(&n_mq.result, n)?;
    let nm = &pair.nm;
    let nm_q = tensor_over(&nm.result, q)?;
    let nmq_n = tensor_over(&nm_q.result, n)?;
    let ub_q = tensor_over(&ub, q)?;
    let ubq_n = tensor_over(&ub_q.result, n)?;
    let qn = tensor_over(q, n)?;
    let id_n = BimoduleMap::identity(n);
    let id_q = BimoduleMap::identity(q);
    let id_np = BimoduleMap::identity(&np.result);
    compose_all(&[
        right_unitor_inverse(&np_ua),
        tensor_maps(&id_np, &pair.coev, &np_ua, &np_mn)?,
        associator_inverse(&np_m, &npm_n, &pair.mn, &np_mn),
        tensor_maps(&associator(&np, &np_m, pm, &n_pm), &id_n, &npm_n, &n_pm_n)?,
        tensor_maps(
            &tensor_maps(&id_n, phi, &n_pm, &n_mq)?,
            &id_n,
            &n_pm_n,
            &n_mq_n,
        )?,
        tensor_maps(&associator_inverse(nm, &nm_q, mq, &n_mq), &id_n, &n_mq_n, &nmq_n)?,
        tensor_maps(&tensor_maps(&pair.ev, &id_q, &nm_q, &ub_q)?, &id_n, &nmq_n, &ubq_n)?,
        tensor_maps(&left_unitor(&ub_q), &id_n, &ubq_n, &qn)?,
    ])
}

/// Inverse of [`mate`]: for `α: N ⊙ P → Q ⊙ N` and a dual pair `(M, N)`, the
/// 2-cell `P ⊙ M → M ⊙ Q` given by `P⊙M → U⊙(P⊙M) → (M⊙N)⊙(P⊙M) →
/// M⊙((N⊙P)⊙M) → M⊙((Q⊙N)⊙M) → M⊙(Q⊙(N⊙M)) → M⊙(Q⊙U) → M⊙Q`,
/// returned with the witnesses of its source and target.
pub fn unmate(
    alpha: &BimoduleMap,
    np: &TensorWitness,
    qn: &TensorWitness,
    pair: &DualPair,
) -> Result<(TensorWitness, TensorWitness, BimoduleMap)> {
    let (m, n) = (&pair.m, &pair.n);
    if !np.left.same_as(n) || !qn.right.same_as(n) {
        return Err(Error::Dimension("cell does not match the dual pair".into()));
    }
    let (p, q) = (&np.right, &qn.left);
    let pm = tensor_over(p, m)?;
    let u_pm = tensor_over(&unit_bimodule(m.left()), &pm.result)?;
    let mn_pm = tensor_over(&pair.mn.result, &pm.result)?;
    let n_pm = tensor_over(n, &pm.result)?;
    let m_npm = tensor_over(m, &n_pm.result)?;
    let np_m = tensor_over(&np.result, m)?;
    let m_np_m = tensor_over(m, &np_m.result)?;
    let qn_m = tensor_over(&qn.result, m)?;
    let m_qn_m = tensor_over(m, &qn_m.result)?;
    let q_nm = tensor_over(q, &pair.nm.result)?;
    let m_q_nm = tensor_over(m, &q_nm.result)?;
    let q_u = tensor_over(q, &pair.ev.target)?;
    let m_qu = tensor_over(m, &q_u.result)?;
    let mq = tensor_over(m, q)?;
    let id_m = BimoduleMap::identity(m);
    let map = compose_all(&[
        left_unitor_inverse(&u_pm),
        tensor_maps(&pair.coev, &BimoduleMap::identity(&pm.result), &u_pm, &mn_pm)?,
        associator(&pair.mn, &mn_pm, &n_pm, &m_npm),
        tensor_maps(&id_m, &associator_inverse(np, &np_m, &pm, &n_pm), &m_npm, &m_np_m)?,
        tensor_maps(&id_m, &tensor_maps(alpha, &id_m, &np_m, &qn_m)?, &m_np_m, &m_qn_m)?,
        tensor_maps(&id_m, &associator(qn, &qn_m, &pair.nm, &q_nm), &m_qn_m, &m_q_nm)?,
        tensor_maps(&id_m, &tensor_maps(&BimoduleMap::identity(q), &pair.ev, &q_nm, &q_u)?, &m_q_nm, &m_qu)?,
        tensor_maps(&id_m, &right_unitor(&q_u), &m_qu, &mq)?,
    ])?;
    Ok((pm, mq, map))
}

/// The 1-dualizability data of an algebra: `C = A` over (k, A ⊗ A^op) with
/// `x·(a ⊗ b°) = b x a`, `E = A` over (A^op ⊗ A, k) with `(b° ⊗ a)·x = a x b`,
/// and the two triangle 2-cells.
#[derive(Clone, Debug)]
pub struct DualizabilityWitness {
    pub algebra: Algebra,
    pub c: Bimodule,
    pub e: Bimodule,
    /// `U_A → (C ⊠ U_A) ⊙ (U_A ⊠ E)`, `a ↦ a·[(1 ⊗ 1) ⊗ (1 ⊗ 1)]`.
    pub triangle: BimoduleMap,
    /// `U_{A^op} → (U_{A^op} ⊠ C) ⊙ (E ⊠ U_{A^op})`.
    pub triangle_op: BimoduleMap,
}

impl DualizabilityWitness {
    pub fn triangles_invertible(&self) -> bool {
        self.triangle.is_iso() && self.triangle_op.is_iso()
    }
}

/// `C` on its own; shared with the umbra construction.
pub fn witness_c(a: &Algebra) -> Bimodule {
    let n = a.dim();
    let k = crate::algebra::ground(a.field());
    let env = a.enveloping();
    let rho = (0..n * n)
        .map(|ij| a.left_matrix(ij % n) * a.right_matrix(ij / n))
        .collect();
    Bimodule::new_unchecked(format!("C({})", a.name()), &k, &env, vec![Matrix::identity(a.field(), n)], rho)
        .expect("C shape")
}

/// `E` on its own.
pub fn witness_e(a: &Algebra) -> Bimodule {
    let n = a.dim();
    let k = crate::algebra::ground(a.field());
    let opa = a.opposite().tensor(a).expect("same field");
    let lambda = (0..n * n)
        .map(|ij| a.left_matrix(ij % n) * a.right_matrix(ij / n))
        .collect();
    Bimodule::new_unchecked(format!("E({})", a.name()), &opa, &k, lambda, vec![Matrix::identity(a.field(), n)])
        .expect("E shape")
}

/// Builds C, E and the triangle 2-cells; every finite-dimensional algebra qualifies.
pub fn one_dualizability_witness(a: &Algebra) -> Result<DualizabilityWitness> {
    let c = witness_c(a);
    let e = witness_e(a);
    let ua = unit_bimodule(a);
    let op = a.opposite();
    let uop = unit_bimodule(&op);
    let one = crate::algebra::kron_vec(a.unit(), a.unit());
    let triangle = unit_triangle(&ua, &external_tensor(&c, &ua)?, &external_tensor(&ua, &e)?, &one)?;
    let triangle_op =
        unit_triangle(&uop, &external_tensor(&uop, &c)?, &external_tensor(&e, &uop)?, &one)?;
    Ok(DualizabilityWitness { algebra: a.clone(), c, e, triangle, triangle_op })
}

/// The map `a ↦ a·[one ⊗ one]` from `u` into `x ⊙ y`, checked to be a bimodule map.
fn unit_triangle(u: &Bimodule, x: &Bimodule, y: &Bimodule, one: &[Scalar]) -> Result<BimoduleMap> {
    let tw = tensor_over(x, y)?;
    let v = tw.pure_tensor(one, one);
    let cols: Vec<Vec<Scalar>> = tw.result.lambdas().iter().map(|l| l.mul_vec(&v)).collect();
    let matrix = Matrix::from_columns(u.field(), tw.dim(), &cols);
    BimoduleMap::new(u, &tw.result, matrix)
        .map_err(|e| Error::Internal(format!("triangle 2-cell: {e}")))
}

/// Which of the four equivalent 2-dualizability conditions hold, with the duals found.
#[derive(Clone, Debug)]
pub struct TwoDualizability {
    pub witness: DualizabilityWitness,
    pub c_right: Option<DualPair>,
    pub c_left: Option<DualPair>,
    pub e_right: Option<DualPair>,
    pub e_left: Option<DualPair>,
    pub separable: bool,
}

impl TwoDualizability {
    /// C and E left; C left and right; C and E right; E left and right.
    pub fn conditions(&self) -> [bool; 4] {
        let (cr, cl, er, el) = (
            self.c_right.is_some(),
            self.c_left.is_some(),
            self.e_right.is_some(),
            self.e_left.is_some(),
        );
        [cl && el, cl && cr, cr && er, el && er]
    }

    /// The conditions agree with each other and with separability.
    pub fn consistent(&self) -> bool {
        let c = self.conditions();
        c.iter().all(|&x| x == c[0]) && c[0] == self.separable
    }

    pub fn holds(&self) -> bool {
        self.c_right.is_some() && self.e_right.is_some()
    }

    /// Name of the first missing dual, for refusals.
    pub fn failure(&self) -> Option<String> {
        if self.c_right.is_none() {
            Some("C has no right dual (algebra is not separable)".into())
        } else if self.e_right.is_none() {
            Some("E has no right dual".into())
        } else {
            None
        }
    }
}

pub fn is_two_dualizable(a: &Algebra) -> Result<TwoDualizability> {
    let witness = one_dualizability_witness(a)?;
    let attempt = |r: Result<DualPair>| match r {
        Ok(p) => Ok(Some(p)),
        Err(Error::NotDualizable(_)) => Ok(None),
        Err(e) => Err(e),
    };
    Ok(TwoDualizability {
        c_right: attempt(right_dual(&witness.c))?,
        c_left: attempt(left_dual(&witness.c))?,
        e_right: attempt(right_dual(&witness.e))?,
        e_left: attempt(left_dual(&witness.e))?,
        separable: a.is_separable(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        ground, group_algebra, matrix_algebra, product_algebra, truncated_polynomial, Group,
    };
    use crate::exactlin::Field;

    const Q: Field = Field::Rationals;

    /// k^n as a (k, k)-bimodule.
    pub(crate) fn vector_space(n: usize) -> Bimodule {
        let k = ground(Q);
        let id = Matrix::identity(Q, n);
        Bimodule::new(format!("k^{n}"), &k, &k, vec![id.clone()], vec![id]).unwrap()
    }

    #[test]
    fn right_dual_of_units() {
        for a in [ground(Q), product_algebra(Q, 2), matrix_algebra(Q, 2), truncated_polynomial(Q, 2)] {
            let p = right_dual(&unit_bimodule(&a)).unwrap();
            assert_eq!(p.n.dim(), a.dim());
            assert!(verify_triangles(&p).unwrap().passed());
        }
    }

    #[test]
    fn left_dual_of_units() {
        let a = group_algebra(Q, &Group::symmetric(3));
        let p = left_dual(&unit_bimodule(&a)).unwrap();
        assert!(p.n.same_as(&unit_bimodule(&a)));
        assert!(verify_triangles(&p).unwrap().passed());
    }

    #[test]
    fn vector_space_dual() {
        let p = right_dual(&vector_space(3)).unwrap();
        assert_eq!(p.n.dim(), 3);
    }

    #[test]
    fn negated_coevaluation_fails_with_witness() {
        let mut p = right_dual(&vector_space(2)).unwrap();
        p.coev = p.coev.scale(&Q.from_i64(-1));
        let r = verify_triangles(&p).unwrap();
        assert!(!r.passed());
        let w = r.first.unwrap();
        assert_eq!((w.left.as_str(), w.right.as_str()), ("-1", "1"));
    }

    #[test]
    fn column_module_over_matrix_algebra() {
        let m2 = matrix_algebra(Q, 2);
        let k = ground(Q);
        let lambda = (0..4)
            .map(|ij| {
                let mut e = Matrix::zeros(Q, 2, 2);
                e.set(ij / 2, ij % 2, Q.one());
                e
            })
            .collect();
        let col = Bimodule::new("Q^2", &m2, &k, lambda, vec![Matrix::identity(Q, 2)]).unwrap();
        let p = right_dual(&col).unwrap();
        assert!(verify_triangles(&p).unwrap().passed());
        assert!(left_dual(&col).is_ok());
    }

    #[test]
    fn witnesses_of_one_dualizability() {
        let w = one_dualizability_witness(&ground(Q)).unwrap();
        assert!(w.triangle.matrix.is_identity() && w.triangle_op.matrix.is_identity());
        let kk = product_algebra(Q, 2);
        let w = one_dualizability_witness(&kk).unwrap();
        assert_eq!((w.c.dim(), w.c.right().dim()), (2, 4));
        w.c.validate().unwrap();
        w.e.validate().unwrap();
        assert!(w.triangles_invertible());
        assert!(one_dualizability_witness(&matrix_algebra(Q, 2)).unwrap().triangles_invertible());
        assert!(one_dualizability_witness(&truncated_polynomial(Q, 2)).unwrap().triangles_invertible());
    }

    #[test]
    fn two_dualizability_matches_separability() {
        for (a, expect) in [
            (ground(Q), true),
            (matrix_algebra(Q, 2), true),
            (product_algebra(Q, 2), true),
            (truncated_polynomial(Q, 2), false),
        ] {
            let t = is_two_dualizable(&a).unwrap();
            assert_eq!(t.holds(), expect, "{}", a.name());
            assert!(t.consistent(), "{}", a.name());
        }
    }

    #[test]
    fn mate_over_the_ground_field_is_the_transpose() {
        let m = vector_space(2);
        let pair = right_dual(&m).unwrap();
        let u = unit_bimodule(&ground(Q));
        let um = tensor_over(&u, &m).unwrap();
        let mu = tensor_over(&m, &u).unwrap();
        let x = Matrix::from_i64(Q, &[vec![1, 2], vec![3, 4]]);
        let xm = BimoduleMap::new(&m, &m, x.clone()).unwrap();
        let phi = compose_all(&[left_unitor(&um), xm, right_unitor_inverse(&mu)]).unwrap();
        let f = mate(&phi, &um, &mu, &pair).unwrap();
        let nu = tensor_over(&pair.n, &u).unwrap();
        let un = tensor_over(&u, &pair.n).unwrap();
        let plain = compose_all(&[right_unitor_inverse(&nu), f, left_unitor(&un)]).unwrap();
        assert_eq!(plain.matrix, x.transpose());
    }

    #[test]
    fn mate_of_a_unitor_is_a_unitor() {
        let a = product_algebra(Q, 2);
        let u = unit_bimodule(&a);
        let pair = right_dual(&u).unwrap();
        let p = crate::bimodule::random_bimodule(&a, &a, 3, Default::default()).unwrap();
        let pu = tensor_over(&p, &u).unwrap();
        let up = tensor_over(&u, &p).unwrap();
        let phi = compose_all(&[right_unitor(&pu), left_unitor_inverse(&up)]).unwrap();
        let f = mate(&phi, &pu, &up, &pair).unwrap();
        // N ≅ U_A by evaluation at 1
        let hom = hom_right(&u, &u).unwrap();
        let cols: Vec<Vec<Scalar>> = hom.maps.iter().map(|g| g.mul_vec(a.unit())).collect();
        let iso = BimoduleMap::new(&pair.n, &u, Matrix::from_columns(Q, 2, &cols)).unwrap();
        let np = tensor_over(&pair.n, &p).unwrap();
        let pn = tensor_over(&p, &pair.n).unwrap();
        let expect = compose_all(&[
            tensor_maps(&iso, &BimoduleMap::identity(&p), &np, &up).unwrap(),
            left_unitor(&up),
            right_unitor_inverse(&pu),
            tensor_maps(&BimoduleMap::identity(&p), &iso.inverse().unwrap(), &pu, &pn).unwrap(),
        ])
        .unwrap();
        assert_eq!(f.matrix, expect.matrix);
    }

    #[test]
    fn other_solutions_of_the_dual_basis_system_give_the_same_traces() {
        use crate::bimodule::{random_bimodule, RandomSpec};
        use crate::exactlin::kernel_basis;
        use crate::traces::euler_char;
        let a = group_algebra(Q, &Group::cyclic(2));
        let mut nontrivial = 0;
        for seed in 0..4 {
            let m = random_bimodule(&a, &a, seed, RandomSpec::default()).unwrap();
            let (n, system, rhs, ev) = right_dual_system(&m).unwrap();
            let t = solve(&system, &rhs).unwrap().unwrap();
            let kernel = kernel_basis(&system);
            nontrivial += usize::from(!kernel.is_empty());
            let shifted: Vec<Scalar> = t
                .iter()
                .enumerate()
                .map(|(i, x)| kernel.iter().enumerate().fold(x.clone(), |acc, (c, v)| &acc + &(&Q.from_i64(c as i64 + 1) * &v[i])))
                .collect();
            let first = DualPair::assemble(&m, &n, &t, &ev).unwrap();
            let second = DualPair::assemble(&m, &n, &shifted, &ev).unwrap();
            assert_eq!(first.coev.matrix, second.coev.matrix);
            assert_eq!(euler_char(&first).unwrap().matrix, euler_char(&second).unwrap().matrix);
        }
        assert!(nontrivial > 0, "every system had a unique solution");
    }
}
