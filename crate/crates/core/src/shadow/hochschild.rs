use std::collections::BTreeMap;

use crate::algebra::Algebra;
use crate::bimodule::Bimodule;
use crate::error::{Error, Result};
use crate::exactlin::{quotient, Field, Scalar};

/// Degree bound used when none is given.
pub const DEFAULT_N_MAX: usize = 4;
/// Largest chain space accepted unless overridden by `MORITA_CHAIN_CAP`.
pub const DEFAULT_CHAIN_CAP: usize = 20_000;
/// Prime used for modular rank estimates over the rationals.
const RANK_PRIME: u64 = 2_147_483_647;

/// Current chain-space cap, honouring the `MORITA_CHAIN_CAP` override.
pub fn chain_cap() -> usize {
    std::env::var("MORITA_CHAIN_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CHAIN_CAP)
}

/// Column-sparse matrix; `columns[j]` lists the nonzero `(row, value)` pairs
/// in increasing row order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<Vec<(usize, Scalar)>>,
}

impl SparseMatrix {
    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self, field: Field) -> crate::exactlin::Matrix {
        let mut m = crate::exactlin::Matrix::zeros(field, self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                m.set(*i, j, v.clone());
            }
        }
        m
    }

    /// Whether `self ∘ first` vanishes, computed exactly.
    pub fn kills(&self, first: &SparseMatrix) -> bool {
        first.columns.iter().all(|col| {
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, a) in col {
                for (i, b) in &self.columns[*k] {
                    let e = acc.entry(*i).or_insert_with(|| a.field().zero());
                    e.mul_add_assign(a, b);
                }
            }
            acc.values().all(Scalar::is_zero)
        })
    }
}

/// The normalized Hochschild complex `C_n = M ⊗ Ā^{⊗n}` with `Ā = A / k·1`,
/// which has the same homology as the full bar complex `M ⊗ A^{⊗n}`.
/// Basis index of `m ⊗ ā_{t_1} ⊗ … ⊗ ā_{t_n}` is `m·|Ā|^n + Σ t_k |Ā|^{n−k}`.
#[derive(Clone, Debug)]
pub struct HochschildComplex {
    pub algebra: Algebra,
    pub coefficients: Bimodule,
    pub n_max: usize,
    /// `dim C_0 ..= dim C_{n_max}`.
    pub chain_dims: Vec<usize>,
    /// `d_1 ..= d_{n_max}`; `differentials[n - 1]` is `d_n: C_n → C_{n−1}`.
    pub differentials: Vec<SparseMatrix>,
    /// `rank d_1 ..= rank d_{n_max}`.
    pub ranks: Vec<usize>,
    /// `dim HH_0 .. dim HH_{n_max−1}`.
    pub dims: Vec<usize>,
}

/// Builds the complex up to `C_{n_max}`, checks `d∘d = 0`, and computes
/// homology dimensions in degrees below `n_max`.
pub fn hochschild(a: &Algebra, m: &Bimodule, n_max: usize) -> Result<HochschildComplex> {
    if n_max == 0 {
        return Err(Error::Dimension("n_max must be at least 1".into()));
    }
    if !m.left().same_as(a) || !m.right().same_as(a) {
        return Err(Error::AlgebraMismatch(format!("{} is not an ({}, {})-bimodule", m.name(), a.name(), a.name())));
    }
    let cap = chain_cap();
    let full = (a.dim() as u128).pow(n_max as u32) * m.dim() as u128;
    if full > cap as u128 {
        return Err(Error::ResourceCap { dim: usize::try_from(full).unwrap_or(usize::MAX), cap });
    }
    let field = a.field();
    let bar = quotient(field, a.dim(), &[a.unit().clone()]);
    let abar = bar.dim;
    let lift: Vec<usize> = (0..abar)
        .map(|t| (0..a.dim()).find(|&j| !bar.section.get(j, t).is_zero()).expect("unit vector"))
        .collect();
    let sparse = |v: &[Scalar]| -> Vec<(usize, Scalar)> {
        v.iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(i, s)| (i, s.clone())).collect()
    };
    let merge: Vec<Vec<Vec<(usize, Scalar)>>> = (0..abar)
        .map(|s| (0..abar).map(|t| sparse(&bar.projection.mul_vec(a.product(lift[s], lift[t])))).collect())
        .collect();
    let right: Vec<Vec<Vec<(usize, Scalar)>>> =
        lift.iter().map(|&j| m.rho(j).columns().iter().map(|c| sparse(c)).collect()).collect();
    let left: Vec<Vec<Vec<(usize, Scalar)>>> =
        lift.iter().map(|&j| m.lambda(j).columns().iter().map(|c| sparse(c)).collect()).collect();

    let chain_dims: Vec<usize> = (0..=n_max).map(|n| m.dim() * abar.pow(n as u32)).collect();
    let mut differentials = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let words = abar.pow(n as u32);
        let lower = words / abar.max(1);
        let mut columns = Vec::with_capacity(chain_dims[n]);
        for idx in 0..chain_dims[n] {
            let (mi, w) = (idx / words, idx % words);
            let t: Vec<usize> = (0..n).map(|k| w / abar.pow((n - 1 - k) as u32) % abar).collect();
            let word = |ts: &mut dyn Iterator<Item = usize>| ts.fold(0, |acc, x| acc * abar + x);
            let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
            let mut add = |i: usize, v: Scalar| {
                let e = acc.entry(i).or_insert_with(|| field.zero());
                *e = &*e + &v;
            };
            let tail = word(&mut t[1..].iter().copied());
            for (mj, v) in &right[t[0]][mi] {
                add(mj * lower + tail, v.clone());
            }
            for i in 1..n {
                for (s, v) in &merge[t[i - 1]][t[i]] {
                    let it = t[..i - 1].iter().copied().chain([*s]).chain(t[i + 1..].iter().copied());
                    let v = if i % 2 == 1 { -v } else { v.clone() };
                    add(mi * lower + word(&mut it.into_iter()), v);
                }
            }
            let head = word(&mut t[..n - 1].iter().copied());
            for (mj, v) in &left[t[n - 1]][mi] {
                let v = if n % 2 == 1 { -v } else { v.clone() };
                add(mj * lower + head, v);
            }
            columns.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        differentials.push(SparseMatrix { rows: chain_dims[n - 1], cols: chain_dims[n], columns });
    }
    for n in 1..n_max {
        if !differentials[n - 1].kills(&differentials[n]) {
            return Err(Error::Internal(format!("d_{n} d_{} is not zero", n + 1)));
        }
    }
    let ranks = certified_ranks(field, &chain_dims, &differentials);
    let dims = (0..n_max)
        .map(|n| {
            let below = if n == 0 { 0 } else { ranks[n - 1] };
            chain_dims[n] - below - ranks[n]
        })
        .collect();
    Ok(HochschildComplex {
        algebra: a.clone(),
        coefficients: m.clone(),
        n_max,
        chain_dims,
        differentials,
        ranks,
        dims,
    })
}

/// Ranks of all differentials. Over a prime field they are computed directly.
/// Over the rationals a rank mod a large prime is a lower bound for the true
/// rank; it is accepted when it is forced (full rank, or a neighbouring
/// modular homology group vanishes) and recomputed exactly otherwise.
fn certified_ranks(field: Field, chain: &[usize], ds: &[SparseMatrix]) -> Vec<usize> {
    if let Field::Prime(p) = field {
        return parallel(ds, |d| modular_rank(d, p).expect("entries already in F_p"));
    }
    let modular = parallel(ds, |d| modular_rank(d, RANK_PRIME));
    let n_max = ds.len();
    let hh = |n: usize| -> Option<usize> {
        let below = if n == 0 { Some(0) } else { modular[n - 1] };
        let above = if n < n_max { modular[n]? } else { return None };
        Some(chain[n] - below? - above)
    };
    (1..=n_max)
        .map(|n| {
            let d = &ds[n - 1];
            match modular[n - 1] {
                Some(r) if r == d.rows.min(d.cols) || hh(n) == Some(0) || hh(n - 1) == Some(0) => r,
                _ => exact_rank(d, field),
            }
        })
        .collect()
}

fn parallel<T: Send>(ds: &[SparseMatrix], f: impl Fn(&SparseMatrix) -> T + Sync) -> Vec<T> {
    std::thread::scope(|s| {
        let handles: Vec<_> = ds.iter().map(|d| s.spawn(|| f(d))).collect();
        handles.into_iter().map(|h| h.join().expect("rank worker")).collect()
    })
}

/// Rank over `F_p`; `None` if some entry does not reduce.
fn modular_rank(d: &SparseMatrix, p: u64) -> Option<usize> {
    let columns: Vec<Vec<(usize, u64)>> = d
        .columns
        .iter()
        .map(|c| {
            c.iter()
                .map(|(i, v)| match v.reduce_mod(p)? {
                    Scalar::P { value, .. } => Some((*i, value)),
                    Scalar::Q(_) => None,
                })
                .collect()
        })
        .collect::<Option<_>>()?;
    let inv = |x: u64| crate::exactlin::Field::Prime(p).from_i64(x as i64).inverse().map(|s| match s {
        Scalar::P { value, .. } => value,
        Scalar::Q(_) => unreachable!(),
    });
    // pivots[i]: reduced vector with leading entry 1 at row i
    let mut pivots: Vec<Option<Vec<(usize, u64)>>> = vec![None; d.rows];
    let mut dense = vec![0u64; d.rows];
    let mut rank = 0;
    for col in columns {
        if col.is_empty() {
            continue;
        }
        let mut lo = d.rows;
        for (i, v) in &col {
            dense[*i] = *v;
            lo = lo.min(*i);
        }
        let mut found = None;
        for i in lo..d.rows {
            let c = dense[i];
            if c == 0 {
                continue;
            }
            match &pivots[i] {
                Some(row) => {
                    for (k, v) in row {
                        dense[*k] = (dense[*k] + (p - c) * v) % p;
                    }
                }
                None if found.is_none() => found = Some(i),
                None => {}
            }
        }
        if let Some(i) = found {
            let s = inv(dense[i]).expect("nonzero");
            let row: Vec<(usize, u64)> =
                (i..d.rows).filter(|&k| dense[k] != 0).map(|k| (k, dense[k] * s % p)).collect();
            pivots[i] = Some(row);
            rank += 1;
        }
        dense.iter_mut().for_each(|x| *x = 0);
    }
    Some(rank)
}

/// Exact rank by the same column elimination over `Scalar`.
fn exact_rank(d: &SparseMatrix, field: Field) -> usize {
    let mut pivots: Vec<Option<Vec<(usize, Scalar)>>> = vec![None; d.rows];
    let mut rank = 0;
    for col in &d.columns {
        let mut dense: BTreeMap<usize, Scalar> = col.iter().cloned().collect();
        let mut found = None;
        while let Some((&i, c)) = dense.iter().find(|(i, v)| !v.is_zero() && pivots[**i].is_some() ) {
            let c = c.clone();
            for (k, v) in pivots[i].as_ref().unwrap() {
                let e = dense.entry(*k).or_insert_with(|| field.zero());
                *e = &*e - &(&c * v);
            }
            dense.retain(|_, v| !v.is_zero());
        }
        if let Some((&i, c)) = dense.iter().find(|(_, v)| !v.is_zero()) {
            found = Some((i, c.inverse().expect("nonzero")));
        }
        if let Some((i, s)) = found {
            let row = dense.iter().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (*k, v * &s)).collect();
            pivots[i] = Some(row);
            rank += 1;
        }
    }
    rank
}

/// Truncated alternating sum of Hochschild dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedEuler {
    pub value: i64,
    /// True iff the last two computed dimensions vanish.
    pub stabilized: bool,
    pub dims: Vec<usize>,
}

pub fn graded_euler(a: &Algebra, m: &Bimodule, n_max: usize) -> Result<GradedEuler> {
    let dims = hochschild(a, m, n_max)?.dims;
    let value = dims.iter().enumerate().map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
    let stabilized = dims.iter().rev().take(2).all(|&d| d == 0);
    Ok(GradedEuler { value, stabilized, dims })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ground, group_algebra, linear_quiver, matrix_algebra, truncated_polynomial, Group};
    use crate::bimodule::{random_bimodule, unit_bimodule, RandomSpec};
    use crate::exactlin::{rank, Matrix};

    const Q: Field = Field::Rationals;

    #[test]
    fn ground_field_is_concentrated_in_degree_zero() {
        let k = ground(Q);
        let m = random_bimodule(&k, &k, 3, RandomSpec::default()).unwrap();
        assert_eq!(hochschild(&k, &m, 3).unwrap().dims, vec![m.dim(), 0, 0]);
    }

    #[test]
    fn dual_numbers_are_periodic() {
        let a = truncated_polynomial(Q, 2);
        let h = hochschild(&a, &unit_bimodule(&a), 4).unwrap();
        assert_eq!(h.dims, vec![2, 1, 1, 1]);
        let e = graded_euler(&a, &unit_bimodule(&a), 4).unwrap();
        assert!(!e.stabilized);
    }

    #[test]
    fn periodic_oracle_over_small_primes() {
        // small resolution of A = k[x]/x^2: after applying A (x)_{A^e} -, odd
        // differentials are x - x = 0 and even ones are x + x = 2x
        for p in [2u64, 3, 5] {
            let f = Field::Prime(p);
            let a = truncated_polynomial(f, 2);
            let mut two_x = Matrix::zeros(f, 2, 2);
            two_x.set(1, 0, f.from_i64(2));
            let r = |n: usize| if n == 0 || n % 2 == 1 { 0 } else { rank(&two_x) };
            let oracle: Vec<usize> = (0..4).map(|n| 2 - r(n) - r(n + 1)).collect();
            assert_eq!(hochschild(&a, &unit_bimodule(&a), 4).unwrap().dims, oracle, "p = {p}");
        }
    }

    #[test]
    fn separable_algebras_vanish_above_zero() {
        let m2 = matrix_algebra(Q, 2);
        assert_eq!(hochschild(&m2, &unit_bimodule(&m2), 3).unwrap().dims, vec![1, 0, 0]);
        let s3 = group_algebra(Q, &Group::symmetric(3));
        let h = hochschild(&s3, &unit_bimodule(&s3), 4).unwrap();
        assert_eq!(h.dims, vec![3, 0, 0, 0]);
        let e = graded_euler(&m2, &unit_bimodule(&m2), 4).unwrap();
        assert_eq!((e.value, e.stabilized), (1, true));
    }

    #[test]
    fn path_algebra_euler() {
        let a2 = linear_quiver(Q, 2);
        let e = graded_euler(&a2, &unit_bimodule(&a2), 3).unwrap();
        assert_eq!((e.value, e.stabilized), (2, true));
    }

    #[test]
    fn differentials_square_to_zero_and_match_dense_ranks() {
        let a = group_algebra(Q, &Group::cyclic(2));
        let m = random_bimodule(&a, &a, 4, RandomSpec::default()).unwrap();
        let h = hochschild(&a, &m, 3).unwrap();
        for (d, r) in h.differentials.iter().zip(&h.ranks) {
            assert_eq!(rank(&d.to_dense(Q)), *r);
            assert_eq!(exact_rank(d, Q), *r);
        }
        let d1 = h.differentials[0].to_dense(Q);
        let d2 = h.differentials[1].to_dense(Q);
        assert!((&d1 * &d2).is_zero());
    }

    #[test]
    fn chain_cap_is_enforced() {
        let s3 = group_algebra(Q, &Group::symmetric(3));
        assert!(matches!(
            hochschild(&s3, &unit_bimodule(&s3), 6),
            Err(Error::ResourceCap { cap: DEFAULT_CHAIN_CAP, .. })
        ));
        assert!(hochschild(&s3, &unit_bimodule(&s3), 0).is_err());
    }
}
