//! Shadows as zeroth Hochschild homology, the cyclicity isomorphism, and the
//! degree-bounded Hochschild complex.

mod hochschild;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::bimodule::{Bimodule, BimoduleMap, TensorWitness};
use crate::error::{Error, Result};
use crate::exactlin::{is_invertible, kernel_matrix, quotient_by_rows, Matrix};

pub use hochschild::{
    chain_cap, graded_euler, hochschild, GradedEuler, HochschildComplex, SparseMatrix,
    DEFAULT_CHAIN_CAP, DEFAULT_N_MAX,
};

/// `⟨M⟩ = M / span{a·m − m·a}` with projection and canonical section.
#[derive(Clone, Debug)]
pub struct ShadowSpace {
    pub source: Bimodule,
    pub dim: usize,
    pub projection: Matrix,
    pub section: Matrix,
}

/// Zeroth Hochschild homology of an (A, A)-bimodule. Memoized per module value.
pub fn hh0(m: &Bimodule) -> Result<ShadowSpace> {
    type Cache = Mutex<HashMap<usize, ShadowSpace>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = m.address();
    if let Some(s) = cache.lock().unwrap().get(&key) {
        return Ok(s.clone());
    }
    let s = compute_hh0(m)?;
    let mut c = cache.lock().unwrap();
    if c.len() >= 2048 {
        c.clear();
    }
    c.insert(key, s.clone());
    Ok(s)
}

fn compute_hh0(m: &Bimodule) -> Result<ShadowSpace> {
    if !m.left().same_as(m.right()) {
        return Err(Error::AlgebraMismatch(format!(
            "shadow of {} needs equal left and right algebras",
            m.name()
        )));
    }
    let mut relations = Matrix::zeros(m.field(), 0, m.dim());
    for &g in m.left().generators() {
        relations = relations.vstack(&(m.lambda(g) - m.rho(g)).transpose());
    }
    let q = quotient_by_rows(&relations);
    Ok(ShadowSpace { source: m.clone(), dim: q.dim, projection: q.projection, section: q.section })
}

/// `⟨f⟩: ⟨M⟩ → ⟨M'⟩` induced by a bimodule map.
pub fn shadow_map(f: &BimoduleMap, source: &ShadowSpace, target: &ShadowSpace) -> Matrix {
    &(&target.projection * &f.matrix) * &source.section
}

/// `θ: ⟨M ⊙ N⟩ → ⟨N ⊙ M⟩`, induced by `m ⊗ n ↦ n ⊗ m`. Checked to be
/// well defined (the swap kills the kernel of the source projection) and invertible.
pub fn shadow_theta(mn: &TensorWitness, nm: &TensorWitness) -> Result<Matrix> {
    if !mn.left.same_as(&nm.right) || !mn.right.same_as(&nm.left) {
        return Err(Error::Dimension("theta needs M.N and N.M".into()));
    }
    let field = mn.left.field();
    let (p, q) = (mn.left.dim(), mn.right.dim());
    let mut swap = Matrix::zeros(field, p * q, p * q);
    for i in 0..p {
        for j in 0..q {
            swap.set(j * p + i, i * q + j, field.one());
        }
    }
    let src = hh0(&mn.result)?;
    let tgt = hh0(&nm.result)?;
    let down = &src.projection * &mn.projection;
    let across = &(&tgt.projection * &nm.projection) * &swap;
    if !(&across * &kernel_matrix(&down)).is_zero() {
        return Err(Error::Internal("theta is not well defined".into()));
    }
    let theta = &(&across * &mn.section) * &src.section;
    if !is_invertible(&theta) {
        return Err(Error::Internal("theta is not invertible".into()));
    }
    Ok(theta)
}
