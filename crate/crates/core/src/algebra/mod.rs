//! Finite-dimensional unital associative algebras given by structure constants.

mod group;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, rank, solve, Field, Matrix, Scalar};

pub use group::{symmetric_permutation, Group};

/// Algebra element as a coordinate vector in the algebra's basis.
pub type Element = Vec<Scalar>;

/// A unital associative algebra. Cloning is cheap; the data is shared.
#[derive(Clone)]
pub struct Algebra(Arc<Inner>);

struct Inner {
    name: String,
    field: Field,
    dim: usize,
    // c[i][j] = e_i e_j
    products: Vec<Vec<Element>>,
    unit: Element,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
    generators: OnceLock<Vec<usize>>,
}

impl Algebra {
    /// Validates associativity on all basis triples and the unit on all basis elements.
    pub fn new(
        name: impl Into<String>,
        field: Field,
        products: Vec<Vec<Element>>,
        unit: Element,
    ) -> Result<Algebra> {
        let dim = unit.len();
        if products.len() != dim
            || products.iter().any(|r| r.len() != dim || r.iter().any(|p| p.len() != dim))
        {
            return Err(Error::Dimension("structure constants do not match the unit".into()));
        }
        if unit.iter().chain(products.iter().flatten().flatten()).any(|s| s.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let alg = Algebra::assemble(name.into(), field, products, unit);
        alg.verify()?;
        Ok(alg)
    }

    fn assemble(name: String, field: Field, products: Vec<Vec<Element>>, unit: Element) -> Algebra {
        let dim = unit.len();
        let left = (0..dim)
            .map(|i| Matrix::from_columns(field, dim, &products[i]))
            .collect();
        let right = (0..dim)
            .map(|j| {
                let cols: Vec<Element> = (0..dim).map(|i| products[i][j].clone()).collect();
                Matrix::from_columns(field, dim, &cols)
            })
            .collect();
        Algebra(Arc::new(Inner {
            name,
            field,
            dim,
            products,
            unit,
            left,
            right,
            generators: OnceLock::new(),
        }))
    }

    fn verify(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = &self.0.products[i][j];
                for k in 0..n {
                    let lhs = self.right_matrix(k).mul_vec(ij);
                    let rhs = self.left_matrix(i).mul_vec(&self.0.products[j][k]);
                    if lhs != rhs {
                        return Err(Error::NotAssociative(i, j, k));
                    }
                }
            }
        }
        for i in 0..n {
            let e = self.basis(i);
            if self.mul(&self.0.unit, &e) != e || self.mul(&e, &self.0.unit) != e {
                return Err(Error::BadUnit(i));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    /// Identity of the shared data, used as a memoization key.
    pub(crate) fn address(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn field(&self) -> Field {
        self.0.field
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn unit(&self) -> &Element {
        &self.0.unit
    }

    /// `e_i e_j` in coordinates.
    pub fn product(&self, i: usize, j: usize) -> &Element {
        &self.0.products[i][j]
    }

    pub fn basis(&self, i: usize) -> Element {
        let mut v = vec![self.field().zero(); self.dim()];
        v[i] = self.field().one();
        v
    }

    pub fn zero(&self) -> Element {
        vec![self.field().zero(); self.dim()]
    }

    pub fn element(&self, coords: &[i64]) -> Element {
        assert_eq!(coords.len(), self.dim());
        coords.iter().map(|&c| self.field().from_i64(c)).collect()
    }

    /// Matrix of `x ↦ e_i x`.
    pub fn left_matrix(&self, i: usize) -> &Matrix {
        &self.0.left[i]
    }

    /// Matrix of `x ↦ x e_j`.
    pub fn right_matrix(&self, j: usize) -> &Matrix {
        &self.0.right[j]
    }

    /// Matrix of `x ↦ a x`.
    pub fn left_mult(&self, a: &[Scalar]) -> Matrix {
        combine(self.field(), self.dim(), a, &self.0.left)
    }

    /// Matrix of `x ↦ x b`.
    pub fn right_mult(&self, b: &[Scalar]) -> Matrix {
        combine(self.field(), self.dim(), b, &self.0.right)
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Element {
        self.left_mult(a).mul_vec(b)
    }

    /// A small set of basis indices generating the algebra, chosen greedily in
    /// basis order. Balancing and intertwining conditions only need these.
    pub fn generators(&self) -> &[usize] {
        self.0.generators.get_or_init(|| {
            let n = self.dim();
            let mut gens: Vec<usize> = Vec::new();
            let mut span = Matrix::from_columns(self.field(), n, std::slice::from_ref(&self.0.unit));
            for i in 0..n {
                if rank(&span) == n {
                    break;
                }
                let probe = span.hstack(&Matrix::from_columns(self.field(), n, &[self.basis(i)]));
                if rank(&probe) == rank(&span) {
                    continue;
                }
                gens.push(i);
                span = self.closure(&gens);
            }
            gens
        })
    }

    /// Column basis of the subalgebra generated by the given basis elements.
    fn closure(&self, gens: &[usize]) -> Matrix {
        let n = self.dim();
        let field = self.field();
        let mut basis = crate::exactlin::column_space(&Matrix::from_columns(field, n, std::slice::from_ref(&self.0.unit)));
        loop {
            let mut cols = basis.clone();
            for &g in gens {
                cols = cols.hstack(&(self.left_matrix(g) * &basis));
            }
            let next = crate::exactlin::column_space(&cols);
            if next.cols() == basis.cols() {
                return basis;
            }
            basis = next;
        }
    }

    /// Same space, reversed multiplication.
    pub fn opposite(&self) -> Algebra {
        let n = self.dim();
        let products = (0..n)
            .map(|i| (0..n).map(|j| self.0.products[j][i].clone()).collect())
            .collect();
        Algebra::assemble(
            format!("{}^op", self.name()),
            self.field(),
            products,
            self.0.unit.clone(),
        )
    }

    /// `self ⊗ other`, basis `e_i ⊗ f_k` at index `i * dim(other) + k`.
    pub fn tensor(&self, other: &Algebra) -> Result<Algebra> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        let (n, m) = (self.dim(), other.dim());
        let mut products = Vec::with_capacity(n * m);
        for i in 0..n {
            for k in 0..m {
                let mut row = Vec::with_capacity(n * m);
                for j in 0..n {
                    for l in 0..m {
                        row.push(kron_vec(&self.0.products[i][j], &other.0.products[k][l]));
                    }
                }
                products.push(row);
            }
        }
        let unit = kron_vec(&self.0.unit, &other.0.unit);
        Ok(Algebra::assemble(
            format!("{}(x){}", self.name(), other.name()),
            self.field(),
            products,
            unit,
        ))
    }

    /// `A ⊗ A^op`.
    pub fn enveloping(&self) -> Algebra {
        self.tensor(&self.opposite()).expect("same field")
    }

    /// Basis of the center.
    pub fn center(&self) -> Vec<Element> {
        let n = self.dim();
        let mut stacked = Matrix::zeros(self.field(), 0, n);
        for &g in self.generators() {
            stacked = stacked.vstack(&(self.left_matrix(g) - self.right_matrix(g)));
        }
        kernel_basis(&stacked)
    }

    /// An element `e ∈ A ⊗ A` with `(a ⊗ 1) e = e (1 ⊗ a)` for all `a` and
    /// `μ(e) = 1`, or `None` when no such element exists.
    pub fn separability_idempotent(&self) -> Option<Element> {
        let n = self.dim();
        let field = self.field();
        let id = Matrix::identity(field, n);
        let mut system = Matrix::zeros(field, 0, n * n);
        for &g in self.generators() {
            let lhs = self.left_matrix(g).kron(&id);
            let rhs = id.kron(self.right_matrix(g));
            system = system.vstack(&(&lhs - &rhs));
        }
        system = system.vstack(&self.multiplication_matrix());
        let mut b = vec![field.zero(); n * n * self.generators().len()];
        b.extend(self.0.unit.iter().cloned());
        solve(&system, &b).expect("shapes agree")
    }

    /// The linear map `μ: A ⊗ A → A`.
    pub fn multiplication_matrix(&self) -> Matrix {
        let n = self.dim();
        let cols: Vec<Element> = (0..n * n)
            .map(|ij| self.0.products[ij / n][ij % n].clone())
            .collect();
        Matrix::from_columns(self.field(), n, &cols)
    }

    pub fn is_separable(&self) -> bool {
        self.separability_idempotent().is_some()
    }

    /// Checks that `h` (columns are images of basis vectors) is a unital
    /// algebra homomorphism `self → target`.
    pub fn check_homomorphism(&self, target: &Algebra, h: &Matrix) -> Result<()> {
        if h.rows() != target.dim() || h.cols() != self.dim() {
            return Err(Error::Dimension("homomorphism matrix shape".into()));
        }
        if h.mul_vec(self.unit()) != *target.unit() {
            return Err(Error::NotHomomorphism("unit is not preserved".into()));
        }
        let images = h.columns();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if h.mul_vec(self.product(i, j)) != target.mul(&images[i], &images[j]) {
                    return Err(Error::NotHomomorphism(format!(
                        "h(e{i} e{j}) != h(e{i}) h(e{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Same constants and unit (names are ignored).
    pub fn same_as(&self, other: &Algebra) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.field() == other.field()
                && self.0.unit == other.0.unit
                && self.0.products == other.0.products)
    }
}

fn combine(field: Field, n: usize, coeffs: &[Scalar], mats: &[Matrix]) -> Matrix {
    let mut out = Matrix::zeros(field, n, n);
    for (c, m) in coeffs.iter().zip(mats) {
        if !c.is_zero() {
            out = &out + &m.scale(c);
        }
    }
    out
}

pub(crate) fn kron_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({}, dim {} over {})", self.name(), self.dim(), self.field())
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for Algebra {}

/// The ground field as a one-dimensional algebra.
pub fn ground(field: Field) -> Algebra {
    Algebra::new("k", field, vec![vec![vec![field.one()]]], vec![field.one()]).unwrap()
}

/// `k^n` with componentwise multiplication.
pub fn product_algebra(field: Field, n: usize) -> Algebra {
    let products = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = vec![field.zero(); n];
                    if i == j {
                        v[i] = field.one();
                    }
                    v
                })
                .collect()
        })
        .collect();
    let name = if n == 2 { "kxk".to_string() } else { format!("k^{n}") };
    Algebra::new(name, field, products, vec![field.one(); n]).unwrap()
}

pub fn group_algebra(field: Field, group: &Group) -> Algebra {
    let n = group.order();
    let products = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut v = vec![field.zero(); n];
                    v[group.mul(a, b)] = field.one();
                    v
                })
                .collect()
        })
        .collect();
    let mut unit = vec![field.zero(); n];
    unit[group.identity()] = field.one();
    Algebra::new(format!("k[{}]", group.name()), field, products, unit).unwrap()
}

/// Group algebra straight from a multiplication table, validating the group axioms.
pub fn group_algebra_from_table(field: Field, table: Vec<Vec<usize>>) -> Result<Algebra> {
    Ok(group_algebra(field, &Group::from_table("G", table)?))
}

/// `M_n(k)` with basis `e_{ij}` at index `i * n + j`.
pub fn matrix_algebra(field: Field, n: usize) -> Algebra {
    assert!(n >= 1);
    let d = n * n;
    let products = (0..d)
        .map(|ij| {
            (0..d)
                .map(|kl| {
                    let (i, j, k, l) = (ij / n, ij % n, kl / n, kl % n);
                    let mut v = vec![field.zero(); d];
                    if j == k {
                        v[i * n + l] = field.one();
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut unit = vec![field.zero(); d];
    for i in 0..n {
        unit[i * n + i] = field.one();
    }
    Algebra::new(format!("M{n}"), field, products, unit).unwrap()
}

/// `k[x]/x^n` with basis `1, x, ..., x^{n-1}`.
pub fn truncated_polynomial(field: Field, n: usize) -> Algebra {
    assert!(n >= 1);
    let products = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut v = vec![field.zero(); n];
                    if i + j < n {
                        v[i + j] = field.one();
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut unit = vec![field.zero(); n];
    unit[0] = field.one();
    Algebra::new(format!("k[x]/x^{n}"), field, products, unit).unwrap()
}

/// Path algebra of an acyclic quiver. Paths are composed left to right
/// (`p·q` is `p` followed by `q`); the basis lists vertex idempotents first,
/// then paths by length.
pub fn path_algebra(field: Field, vertices: usize, arrows: &[(usize, usize)]) -> Result<Algebra> {
    if arrows.iter().any(|&(s, t)| s >= vertices || t >= vertices) {
        return Err(Error::Dimension("arrow endpoint out of range".into()));
    }
    // paths as (source, target, arrow list)
    let mut paths: Vec<(usize, usize, Vec<usize>)> =
        (0..vertices).map(|v| (v, v, Vec::new())).collect();
    let mut frontier: Vec<(usize, usize, Vec<usize>)> = arrows
        .iter()
        .enumerate()
        .map(|(a, &(s, t))| (s, t, vec![a]))
        .collect();
    let mut length = 1;
    while !frontier.is_empty() {
        if length > arrows.len() {
            return Err(Error::CyclicQuiver);
        }
        paths.extend(frontier.iter().cloned());
        let mut next = Vec::new();
        for (s, t, p) in &frontier {
            for (a, &(s2, t2)) in arrows.iter().enumerate() {
                if s2 == *t {
                    let mut q = p.clone();
                    q.push(a);
                    next.push((*s, t2, q));
                }
            }
        }
        frontier = next;
        length += 1;
    }
    let n = paths.len();
    let index_of = |s: usize, t: usize, p: &[usize]| {
        paths.iter().position(|(s2, t2, q)| *s2 == s && *t2 == t && q == p)
    };
    let mut products = Vec::with_capacity(n);
    for (s1, t1, p1) in &paths {
        let mut row = Vec::with_capacity(n);
        for (s2, t2, p2) in &paths {
            let mut v = vec![field.zero(); n];
            if t1 == s2 {
                let mut q = p1.clone();
                q.extend(p2);
                let i = index_of(*s1, *t2, &q).expect("composite path is listed");
                v[i] = field.one();
            }
            row.push(v);
        }
        products.push(row);
    }
    let mut unit = vec![field.zero(); n];
    for u in unit.iter_mut().take(vertices) {
        *u = field.one();
    }
    Algebra::new(format!("path({vertices}v,{}a)", arrows.len()), field, products, unit)
}

/// Linear quiver `A_n`: `0 → 1 → … → n-1`.
pub fn linear_quiver(field: Field, n: usize) -> Algebra {
    let arrows: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    path_algebra(field, n, &arrows)
        .expect("linear quiver is acyclic")
        .renamed(format!("A{n}"))
}

impl Algebra {
    /// Same algebra under a new display name.
    pub fn renamed(&self, name: impl Into<String>) -> Algebra {
        Algebra::assemble(name.into(), self.field(), self.0.products.clone(), self.0.unit.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    #[test]
    fn ground_and_product() {
        assert_eq!(ground(Q).dim(), 1);
        let a = product_algebra(Q, 2);
        assert_eq!(a.unit(), &a.element(&[1, 1]));
    }

    #[test]
    fn rejects_non_associative() {
        // (e0 e0) e0 = e1 e0 = 0 but e0 (e0 e0) = e0 e1 = e0
        let z = || vec![Q.zero(); 3];
        let e = |i: usize| {
            let mut v = z();
            v[i] = Q.one();
            v
        };
        let products = vec![
            vec![e(1), e(0), e(0)],
            vec![z(), e(1), e(1)],
            vec![e(0), e(1), e(2)],
        ];
        assert!(matches!(Algebra::new("bad", Q, products, e(2)), Err(Error::NotAssociative(..))));
    }

    #[test]
    fn rejects_bad_unit() {
        let products = vec![vec![vec![Q.one()]]];
        assert_eq!(Algebra::new("bad", Q, products, vec![Q.from_i64(2)]).unwrap_err(), Error::BadUnit(0));
    }

    #[test]
    fn group_algebras() {
        assert!(group_algebra(Q, &Group::trivial()).same_as(&ground(Q)));
        let c2 = group_algebra(Q, &Group::cyclic(2));
        assert_eq!(c2.mul(&c2.basis(1), &c2.basis(1)), c2.basis(0));
        assert_eq!(group_algebra(Q, &Group::symmetric(3)).dim(), 6);
        assert!(group_algebra_from_table(Q, vec![vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn matrix_algebra_center() {
        assert!(matrix_algebra(Q, 1).same_as(&ground(Q)));
        let m2 = matrix_algebra(Q, 2);
        assert_eq!(m2.unit(), &m2.element(&[1, 0, 0, 1]));
        let c = m2.center();
        assert_eq!(c, vec![m2.element(&[1, 0, 0, 1])]);
    }

    #[test]
    fn path_algebra_dims() {
        assert!(path_algebra(Q, 1, &[]).unwrap().same_as(&ground(Q)));
        assert_eq!(linear_quiver(Q, 2).dim(), 3);
        assert_eq!(linear_quiver(Q, 3).dim(), 6);
        assert_eq!(path_algebra(Q, 2, &[(0, 1), (1, 0)]).unwrap_err(), Error::CyclicQuiver);
    }

    #[test]
    fn opposite_and_tensor() {
        let s3 = group_algebra(Q, &Group::symmetric(3));
        assert!(s3.opposite().opposite().same_as(&s3));
        let c2 = group_algebra(Q, &Group::cyclic(2));
        assert!(c2.opposite().same_as(&c2));
        let m2 = matrix_algebra(Q, 2);
        assert!(!m2.opposite().same_as(&m2));
        assert!(ground(Q).tensor(&m2).unwrap().same_as(&m2));
        assert!(m2.tensor(&ground(Q)).unwrap().same_as(&m2));
        let big = m2.tensor(&m2).unwrap();
        assert_eq!(big.dim(), 16);
        big.verify().unwrap();
        assert_eq!(product_algebra(Q, 2).enveloping().dim(), 4);
        assert!(ground(Q).enveloping().same_as(&ground(Q)));
        assert!(ground(Q).tensor(&ground(Field::Prime(5))).is_err());
    }

    #[test]
    fn separability_examples() {
        assert_eq!(ground(Q).separability_idempotent(), Some(vec![Q.one()]));
        let kk = product_algebra(Q, 2);
        let expect: Element = [1, 0, 0, 1].iter().map(|&x| Q.from_i64(x)).collect();
        assert_eq!(kk.separability_idempotent(), Some(expect));
        assert_eq!(truncated_polynomial(Q, 2).separability_idempotent(), None);
    }

    #[test]
    fn generators_are_small() {
        assert_eq!(group_algebra(Q, &Group::cyclic(4)).generators(), &[1]);
        assert_eq!(group_algebra(Q, &Group::symmetric(3)).generators().len(), 2);
    }
}
