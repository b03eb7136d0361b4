use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exactlin::{quotient_by_rows, Matrix, Scalar};

use super::{Bimodule, BimoduleMap};

/// `M ⊙ N = (M ⊗ N) / (m·b ⊗ n − m ⊗ b·n)` with its structure maps.
/// `projection` maps `M ⊗ N` (index `i * dim N + j`) onto the result and
/// `section` is the canonical splitting from the quotient convention.
#[derive(Clone, Debug)]
pub struct TensorWitness {
    pub left: Bimodule,
    pub right: Bimodule,
    pub result: Bimodule,
    pub projection: Matrix,
    pub section: Matrix,
}

impl TensorWitness {
    /// Class of `m ⊗ n` in the result.
    pub fn pure_tensor(&self, m: &[Scalar], n: &[Scalar]) -> Vec<Scalar> {
        self.projection.mul_vec(&crate::algebra::kron_vec(m, n))
    }

    pub fn dim(&self) -> usize {
        self.result.dim()
    }
}

const CACHE_LIMIT: usize = 2048;

type Cache = Mutex<HashMap<(usize, usize), TensorWitness>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Tensor product over the middle algebra. Balancing is imposed for a
/// generating set of the middle algebra, which is enough by linearity.
///
/// Results are memoized by the identity of the two factors; a cached entry
/// holds both factors, so their addresses cannot be reused while it lives.
pub fn tensor_over(m: &Bimodule, n: &Bimodule) -> Result<TensorWitness> {
    let key = (Arc::as_ptr(&m.0) as usize, Arc::as_ptr(&n.0) as usize);
    if let Some(tw) = cache().lock().unwrap().get(&key) {
        return Ok(tw.clone());
    }
    let tw = compute_tensor(m, n)?;
    let mut c = cache().lock().unwrap();
    if c.len() >= CACHE_LIMIT {
        c.clear();
    }
    c.insert(key, tw.clone());
    Ok(tw)
}

fn compute_tensor(m: &Bimodule, n: &Bimodule) -> Result<TensorWitness> {
    if !m.right().same_as(n.left()) {
        return Err(Error::AlgebraMismatch(format!(
            "cannot tensor {} over {} with {} over {}",
            m.name(),
            m.right().name(),
            n.name(),
            n.left().name()
        )));
    }
    let field = m.field();
    let (p, q) = (m.dim(), n.dim());
    let ip = Matrix::identity(field, p);
    let iq = Matrix::identity(field, q);
    let mut relations = Matrix::zeros(field, 0, p * q);
    for &g in m.right().generators() {
        let k = &m.rho(g).kron(&iq) - &ip.kron(n.lambda(g));
        relations = relations.vstack(&k.transpose());
    }
    let quot = quotient_by_rows(&relations);
    let (pi, sigma) = (quot.projection, quot.section);
    let lambda = m
        .lambdas()
        .iter()
        .map(|l| &(&pi * &l.kron(&iq)) * &sigma)
        .collect();
    let rho = n
        .rhos()
        .iter()
        .map(|r| &(&pi * &ip.kron(r)) * &sigma)
        .collect();
    let result = Bimodule::new_unchecked(
        format!("({}.{})", m.name(), n.name()),
        m.left(),
        n.right(),
        lambda,
        rho,
    )?;
    Ok(TensorWitness { left: m.clone(), right: n.clone(), result, projection: pi, section: sigma })
}

/// `f ⊙ g` between two tensor products.
pub fn tensor_maps(
    f: &BimoduleMap,
    g: &BimoduleMap,
    source: &TensorWitness,
    target: &TensorWitness,
) -> Result<BimoduleMap> {
    if f.source.dim() != source.left.dim()
        || g.source.dim() != source.right.dim()
        || f.target.dim() != target.left.dim()
        || g.target.dim() != target.right.dim()
    {
        return Err(Error::Dimension("maps do not match the tensor factors".into()));
    }
    let matrix = &(&target.projection * &f.matrix.kron(&g.matrix)) * &source.section;
    BimoduleMap::new_unchecked(&source.result, &target.result, matrix)
}

/// `U_A ⊙ M → M`, `a ⊗ m ↦ a·m`.
pub fn left_unitor(tw: &TensorWitness) -> BimoduleMap {
    let m = &tw.right;
    let mut act = Matrix::zeros(m.field(), m.dim(), 0);
    for l in m.lambdas() {
        act = act.hstack(l);
    }
    BimoduleMap::new_unchecked(&tw.result, m, &act * &tw.section).expect("unitor shape")
}

/// `M → U_A ⊙ M`, `m ↦ 1 ⊗ m`.
pub fn left_unitor_inverse(tw: &TensorWitness) -> BimoduleMap {
    let m = &tw.right;
    let field = m.field();
    let unit = Matrix::from_columns(field, tw.left.dim(), &[m.left().unit().clone()]);
    let lift = unit.kron(&Matrix::identity(field, m.dim()));
    BimoduleMap::new_unchecked(m, &tw.result, &tw.projection * &lift).expect("unitor shape")
}

/// `M ⊙ U_B → M`, `m ⊗ b ↦ m·b`.
pub fn right_unitor(tw: &TensorWitness) -> BimoduleMap {
    let m = &tw.left;
    let field = m.field();
    let nb = tw.right.dim();
    let mut act = Matrix::zeros(field, m.dim(), m.dim() * nb);
    for j in 0..m.dim() {
        for (i, r) in m.rhos().iter().enumerate() {
            for k in 0..m.dim() {
                act.set(k, j * nb + i, r.get(k, j).clone());
            }
        }
    }
    BimoduleMap::new_unchecked(&tw.result, m, &act * &tw.section).expect("unitor shape")
}

/// `M → M ⊙ U_B`, `m ↦ m ⊗ 1`.
pub fn right_unitor_inverse(tw: &TensorWitness) -> BimoduleMap {
    let m = &tw.left;
    let field = m.field();
    let unit = Matrix::from_columns(field, tw.right.dim(), &[m.right().unit().clone()]);
    let lift = Matrix::identity(field, m.dim()).kron(&unit);
    BimoduleMap::new_unchecked(m, &tw.result, &tw.projection * &lift).expect("unitor shape")
}

/// `(X ⊙ Y) ⊙ Z → X ⊙ (Y ⊙ Z)`, computed on representatives.
pub fn associator(
    xy: &TensorWitness,
    xy_z: &TensorWitness,
    yz: &TensorWitness,
    x_yz: &TensorWitness,
) -> BimoduleMap {
    let field = xy.left.field();
    let iz = Matrix::identity(field, yz.right.dim());
    let ix = Matrix::identity(field, xy.left.dim());
    let lift = &xy.section.kron(&iz) * &xy_z.section;
    let push = &x_yz.projection * &ix.kron(&yz.projection);
    BimoduleMap::new_unchecked(&xy_z.result, &x_yz.result, &push * &lift).expect("associator shape")
}

/// `X ⊙ (Y ⊙ Z) → (X ⊙ Y) ⊙ Z`.
pub fn associator_inverse(
    xy: &TensorWitness,
    xy_z: &TensorWitness,
    yz: &TensorWitness,
    x_yz: &TensorWitness,
) -> BimoduleMap {
    let field = xy.left.field();
    let iz = Matrix::identity(field, yz.right.dim());
    let ix = Matrix::identity(field, xy.left.dim());
    let lift = &ix.kron(&yz.section) * &x_yz.section;
    let push = &xy_z.projection * &xy.projection.kron(&iz);
    BimoduleMap::new_unchecked(&x_yz.result, &xy_z.result, &push * &lift).expect("associator shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{product_algebra, Algebra};
    use crate::bimodule::{ideal_basis, unit_bimodule, Coordinates};
    use crate::exactlin::Field;

    const Q: Field = Field::Rationals;

    fn unit_iso(kk: &Algebra) {
        let u = unit_bimodule(kk);
        let tw = tensor_over(&u, &u).unwrap();
        assert_eq!(tw.dim(), u.dim());
        let l = left_unitor(&tw);
        l.check().unwrap();
        assert!(l.is_iso());
        assert!(l.compose(&left_unitor_inverse(&tw)).unwrap().matrix.is_identity());
        let r = right_unitor(&tw);
        r.check().unwrap();
        assert!(r.compose(&right_unitor_inverse(&tw)).unwrap().matrix.is_identity());
    }

    #[test]
    fn unitors_are_isomorphisms() {
        unit_iso(&product_algebra(Q, 2));
        unit_iso(&crate::algebra::matrix_algebra(Q, 2));
    }

    #[test]
    fn orthogonal_idempotents_kill_the_tensor() {
        let kk = product_algebra(Q, 2);
        let u = unit_bimodule(&kk);
        let g = crate::algebra::ground(Q);
        // e1 A over (k, A) and A e2 over (A, k)
        let b1 = ideal_basis(&kk, &kk.element(&[1, 0]), true);
        let c1 = Coordinates::new(&b1);
        let rho = (0..2).map(|j| c1.express(&(kk.right_matrix(j) * &b1))).collect();
        let e1a = Bimodule::new("e1A", &g, &kk, vec![Matrix::identity(Q, 1)], rho).unwrap();
        let b2 = ideal_basis(&kk, &kk.element(&[0, 1]), false);
        let c2 = Coordinates::new(&b2);
        let lambda = (0..2).map(|i| c2.express(&(kk.left_matrix(i) * &b2))).collect();
        let ae2 = Bimodule::new("Ae2", &kk, &g, lambda, vec![Matrix::identity(Q, 1)]).unwrap();
        assert_eq!(tensor_over(&e1a, &ae2).unwrap().dim(), 0);
        assert!(tensor_over(&u, &ae2).is_ok());
        assert!(tensor_over(&ae2, &ae2).is_err());
    }

    #[test]
    fn balancing_on_pure_tensors() {
        let kk = product_algebra(Q, 2);
        let u = unit_bimodule(&kk);
        let tw = tensor_over(&u, &u).unwrap();
        for b in 0..2 {
            for m in 0..2 {
                for n in 0..2 {
                    let mb = u.rho(b).mul_vec(&u.basis(m));
                    let bn = u.lambda(b).mul_vec(&u.basis(n));
                    assert_eq!(tw.pure_tensor(&mb, &u.basis(n)), tw.pure_tensor(&u.basis(m), &bn));
                }
            }
        }
    }
}
