//! Bimodules over pairs of algebras, their maps, hom-modules and tensor products.

mod random;
mod tensor;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::exactlin::{inverse, kernel_basis, rank, rref, Field, Matrix, Scalar};

pub use random::{idempotent_catalogue, random_bimodule, random_invertible, RandomSpec};
pub use tensor::{
    associator, associator_inverse, left_unitor, left_unitor_inverse, right_unitor,
    right_unitor_inverse, tensor_maps, tensor_over, TensorWitness,
};

/// An (A, B)-bimodule: `λ_i` is the action of the i-th basis element of A,
/// `ρ_j` the action of the j-th basis element of B. Both act on column
/// vectors, so `ρ` reverses products: `ρ_{b b'} = ρ_{b'} ρ_b`.
#[derive(Clone)]
pub struct Bimodule(Arc<Inner>);

struct Inner {
    name: String,
    left: Algebra,
    right: Algebra,
    dim: usize,
    lambda: Vec<Matrix>,
    rho: Vec<Matrix>,
}

impl Bimodule {
    /// Identity of the shared data, used as a memoization key.
    pub(crate) fn address(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Validated constructor: λ unital homomorphism, ρ unital anti-homomorphism, actions commute.
    pub fn new(
        name: impl Into<String>,
        left: &Algebra,
        right: &Algebra,
        lambda: Vec<Matrix>,
        rho: Vec<Matrix>,
    ) -> Result<Bimodule> {
        let m = Bimodule::new_unchecked(name, left, right, lambda, rho)?;
        m.validate()?;
        Ok(m)
    }

    /// Shape checks only; used for modules that are correct by construction.
    pub(crate) fn new_unchecked(
        name: impl Into<String>,
        left: &Algebra,
        right: &Algebra,
        lambda: Vec<Matrix>,
        rho: Vec<Matrix>,
    ) -> Result<Bimodule> {
        if left.field() != right.field() {
            return Err(Error::FieldMismatch);
        }
        let field = left.field();
        if lambda.len() != left.dim() || rho.len() != right.dim() {
            return Err(Error::Dimension("one action matrix per basis element".into()));
        }
        let dim = lambda.first().or(rho.first()).map_or(0, Matrix::rows);
        for a in lambda.iter().chain(&rho) {
            if a.field() != field {
                return Err(Error::FieldMismatch);
            }
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::Dimension("action matrices must be square of equal size".into()));
            }
        }
        Ok(Bimodule(Arc::new(Inner {
            name: name.into(),
            left: left.clone(),
            right: right.clone(),
            dim,
            lambda,
            rho,
        })))
    }

    /// Re-checks the bimodule axioms on all basis elements.
    pub fn validate(&self) -> Result<()> {
        let (a, b) = (self.left(), self.right());
        let id = Matrix::identity(self.field(), self.dim());
        if self.act_left(a.unit()) != id {
            return Err(Error::InvalidBimodule("left action is not unital".into()));
        }
        if self.act_right(b.unit()) != id {
            return Err(Error::InvalidBimodule("right action is not unital".into()));
        }
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                if &self.0.lambda[i] * &self.0.lambda[j] != self.act_left(a.product(i, j)) {
                    return Err(Error::InvalidBimodule(format!(
                        "left action fails on (e{i}, e{j})"
                    )));
                }
            }
        }
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                if &self.0.rho[j] * &self.0.rho[i] != self.act_right(b.product(i, j)) {
                    return Err(Error::InvalidBimodule(format!(
                        "right action fails on (e{i}, e{j})"
                    )));
                }
            }
        }
        for (i, l) in self.0.lambda.iter().enumerate() {
            for (j, r) in self.0.rho.iter().enumerate() {
                if l * r != r * l {
                    return Err(Error::InvalidBimodule(format!(
                        "left e{i} and right e{j} do not commute"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn renamed(&self, name: impl Into<String>) -> Bimodule {
        Bimodule(Arc::new(Inner {
            name: name.into(),
            left: self.0.left.clone(),
            right: self.0.right.clone(),
            dim: self.0.dim,
            lambda: self.0.lambda.clone(),
            rho: self.0.rho.clone(),
        }))
    }

    pub fn left(&self) -> &Algebra {
        &self.0.left
    }

    pub fn right(&self) -> &Algebra {
        &self.0.right
    }

    pub fn field(&self) -> Field {
        self.0.left.field()
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn lambda(&self, i: usize) -> &Matrix {
        &self.0.lambda[i]
    }

    pub fn rho(&self, j: usize) -> &Matrix {
        &self.0.rho[j]
    }

    pub fn lambdas(&self) -> &[Matrix] {
        &self.0.lambda
    }

    pub fn rhos(&self) -> &[Matrix] {
        &self.0.rho
    }

    /// Matrix of `m ↦ a m`.
    pub fn act_left(&self, a: &[Scalar]) -> Matrix {
        combine(self.field(), self.dim(), a, &self.0.lambda)
    }

    /// Matrix of `m ↦ m b`.
    pub fn act_right(&self, b: &[Scalar]) -> Matrix {
        combine(self.field(), self.dim(), b, &self.0.rho)
    }

    pub fn basis(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field().zero(); self.dim()];
        v[i] = self.field().one();
        v
    }

    /// Same underlying data (names ignored).
    pub fn same_as(&self, other: &Bimodule) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.dim() == other.dim()
                && self.left().same_as(other.left())
                && self.right().same_as(other.right())
                && self.0.lambda == other.0.lambda
                && self.0.rho == other.0.rho)
    }

    /// `P · M · P⁻¹` on every action matrix: the same module in the basis given by
    /// the columns of `P⁻¹`.
    pub fn change_basis(&self, p: &Matrix) -> Result<Bimodule> {
        let pinv = inverse(p).ok_or_else(|| Error::Dimension("base change is singular".into()))?;
        let conj = |m: &Matrix| &(p * m) * &pinv;
        Bimodule::new_unchecked(
            self.name(),
            self.left(),
            self.right(),
            self.0.lambda.iter().map(conj).collect(),
            self.0.rho.iter().map(conj).collect(),
        )
    }

    /// Direct sum `self ⊕ other`; coordinates of `self` come first.
    pub fn direct_sum(&self, other: &Bimodule) -> Result<Bimodule> {
        self.same_algebras(other)?;
        let block = |x: &Matrix, y: &Matrix| {
            let (p, q) = (x.rows(), y.rows());
            x.hstack(&Matrix::zeros(self.field(), p, q))
                .vstack(&Matrix::zeros(self.field(), q, p).hstack(y))
        };
        Bimodule::new_unchecked(
            format!("{}+{}", self.name(), other.name()),
            self.left(),
            self.right(),
            self.0.lambda.iter().zip(&other.0.lambda).map(|(x, y)| block(x, y)).collect(),
            self.0.rho.iter().zip(&other.0.rho).map(|(x, y)| block(x, y)).collect(),
        )
    }

    fn same_algebras(&self, other: &Bimodule) -> Result<()> {
        if !self.left().same_as(other.left()) || !self.right().same_as(other.right()) {
            return Err(Error::AlgebraMismatch(format!(
                "{} and {} are over different algebras",
                self.name(),
                other.name()
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Bimodule({}, dim {} over ({}, {}))",
            self.name(),
            self.dim(),
            self.left().name(),
            self.right().name()
        )
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

/// Coordinates with respect to a column basis of a subspace.
pub(crate) struct Coordinates {
    rows: Vec<usize>,
    left_inverse: Matrix,
}

impl Coordinates {
    /// `basis` must have independent columns.
    pub(crate) fn new(basis: &Matrix) -> Coordinates {
        // pivot rows of the transpose pick an invertible square block
        let r = rref(&basis.transpose());
        let rows = r.pivots.clone();
        let cols: Vec<usize> = (0..basis.cols()).collect();
        let block = basis.select(&rows, &cols);
        let left_inverse = inverse(&block).expect("independent columns");
        Coordinates { rows, left_inverse }
    }

    /// Coordinates of each column of `m`, assumed to lie in the span.
    pub(crate) fn express(&self, m: &Matrix) -> Matrix {
        let cols: Vec<usize> = (0..m.cols()).collect();
        &self.left_inverse * &m.select(&self.rows, &cols)
    }
}

/// `U_A`: the algebra acting on itself from both sides. Repeated calls for
/// the same algebra value return the same shared module.
pub fn unit_bimodule(a: &Algebra) -> Bimodule {
    type Units = Mutex<HashMap<usize, Bimodule>>;
    static UNITS: OnceLock<Units> = OnceLock::new();
    let units = UNITS.get_or_init(|| Mutex::new(HashMap::new()));
    let key = a.address();
    if let Some(u) = units.lock().unwrap().get(&key) {
        return u.clone();
    }
    let u = build_unit(a);
    let mut map = units.lock().unwrap();
    if map.len() >= 512 {
        map.clear();
    }
    map.insert(key, u.clone());
    u
}

fn build_unit(a: &Algebra) -> Bimodule {
    let lambda = (0..a.dim()).map(|i| a.left_matrix(i).clone()).collect();
    let rho = (0..a.dim()).map(|j| a.right_matrix(j).clone()).collect();
    Bimodule::new_unchecked(format!("U({})", a.name()), a, a, lambda, rho).expect("regular actions")
}

/// A map of (A, B)-bimodules, `matrix` of shape `target.dim × source.dim`.
#[derive(Clone, Debug)]
pub struct BimoduleMap {
    pub source: Bimodule,
    pub target: Bimodule,
    pub matrix: Matrix,
}

impl BimoduleMap {
    /// Checks that `matrix` intertwines both actions.
    pub fn new(source: &Bimodule, target: &Bimodule, matrix: Matrix) -> Result<BimoduleMap> {
        let f = BimoduleMap::new_unchecked(source, target, matrix)?;
        f.check()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        source: &Bimodule,
        target: &Bimodule,
        matrix: Matrix,
    ) -> Result<BimoduleMap> {
        source.same_algebras(target)?;
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::Dimension(format!(
                "map matrix {}x{} for {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source.dim(),
                target.dim()
            )));
        }
        Ok(BimoduleMap { source: source.clone(), target: target.clone(), matrix })
    }

    pub fn check(&self) -> Result<()> {
        let f = &self.matrix;
        for (i, (l, l2)) in self.source.lambdas().iter().zip(self.target.lambdas()).enumerate() {
            if f * l != l2 * f {
                return Err(Error::NotIntertwiner(format!("left action of e{i}")));
            }
        }
        for (j, (r, r2)) in self.source.rhos().iter().zip(self.target.rhos()).enumerate() {
            if f * r != r2 * f {
                return Err(Error::NotIntertwiner(format!("right action of e{j}")));
            }
        }
        Ok(())
    }

    pub fn identity(m: &Bimodule) -> BimoduleMap {
        BimoduleMap {
            source: m.clone(),
            target: m.clone(),
            matrix: Matrix::identity(m.field(), m.dim()),
        }
    }

    pub fn zero(source: &Bimodule, target: &Bimodule) -> BimoduleMap {
        BimoduleMap::new_unchecked(
            source,
            target,
            Matrix::zeros(source.field(), target.dim(), source.dim()),
        )
        .expect("zero map")
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &BimoduleMap) -> Result<BimoduleMap> {
        if first.target.dim() != self.source.dim() {
            return Err(Error::Dimension("composable maps required".into()));
        }
        BimoduleMap::new_unchecked(&first.source, &self.target, &self.matrix * &first.matrix)
    }

    pub fn add(&self, other: &BimoduleMap) -> Result<BimoduleMap> {
        BimoduleMap::new_unchecked(&self.source, &self.target, self.matrix.try_add(&other.matrix)?)
    }

    pub fn scale(&self, s: &Scalar) -> BimoduleMap {
        BimoduleMap { matrix: self.matrix.scale(s), ..self.clone() }
    }

    pub fn is_iso(&self) -> bool {
        self.matrix.is_square() && rank(&self.matrix) == self.matrix.rows()
    }

    pub fn inverse(&self) -> Option<BimoduleMap> {
        let inv = inverse(&self.matrix)?;
        Some(BimoduleMap { source: self.target.clone(), target: self.source.clone(), matrix: inv })
    }
}

/// Basis of the space of bimodule maps `m → n`, as matrices.
pub fn intertwiners(m: &Bimodule, n: &Bimodule) -> Result<Vec<Matrix>> {
    m.same_algebras(n)?;
    let field = m.field();
    let (p, q) = (m.dim(), n.dim());
    let ip = Matrix::identity(field, p);
    let iq = Matrix::identity(field, q);
    // row-major vec(F): vec(F X) = (I ⊗ Xᵀ) vec F, vec(Y F) = (Y ⊗ I) vec F
    let mut system = Matrix::zeros(field, 0, p * q);
    for &g in m.left().generators() {
        system = system.vstack(&(&iq.kron(&m.lambda(g).transpose()) - &n.lambda(g).kron(&ip)));
    }
    for &g in m.right().generators() {
        system = system.vstack(&(&iq.kron(&m.rho(g).transpose()) - &n.rho(g).kron(&ip)));
    }
    Ok(kernel_basis(&system)
        .into_iter()
        .map(|v| Matrix::new(field, q, p, v).expect("shape"))
        .collect())
}

/// Seeded random element of the intertwiner space: integer coefficients in
/// `[-3, 3]` on the canonical basis of intertwiners.
pub fn random_bimodule_map(m: &Bimodule, n: &Bimodule, seed: u64) -> Result<BimoduleMap> {
    let basis = intertwiners(m, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = m.field();
    let mut matrix = Matrix::zeros(field, n.dim(), m.dim());
    for b in &basis {
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 {
            matrix = &matrix + &b.scale(&field.from_i64(c));
        }
    }
    BimoduleMap::new_unchecked(m, n, matrix)
}

/// Right-B-linear maps `M → N` as an (A', A)-bimodule, where `M` is over
/// (A, B) and `N` over (A', B): `(a'·f·a)(m) = a'·f(a·m)`. Basis vectors are
/// the canonical kernel basis; `maps()` gives them as `N.dim × M.dim` matrices.
pub fn hom_right(m: &Bimodule, n: &Bimodule) -> Result<HomModule> {
    if !m.right().same_as(n.right()) {
        return Err(Error::AlgebraMismatch("hom_right needs a common right algebra".into()));
    }
    let gens: Vec<(Matrix, Matrix)> = m
        .right()
        .generators()
        .iter()
        .map(|&g| (m.rho(g).clone(), n.rho(g).clone()))
        .collect();
    let space = MapSpace::new(m, n, &gens);
    let lambda = (0..n.left().dim())
        .map(|i| space.action(|f| n.lambda(i) * f))
        .collect();
    let rho = (0..m.left().dim())
        .map(|j| space.action(|f| f * m.lambda(j)))
        .collect();
    let module = Bimodule::new_unchecked(
        format!("Hom_r({},{})", m.name(), n.name()),
        n.left(),
        m.left(),
        lambda,
        rho,
    )?;
    Ok(HomModule { module, maps: space.maps, coords: space.coords })
}

/// Left-A-linear maps `M → N` as a (B, B')-bimodule, where `M` is over
/// (A, B) and `N` over (A, B'): `(b·f·b')(m) = f(m·b)·b'`.
pub fn hom_left(m: &Bimodule, n: &Bimodule) -> Result<HomModule> {
    if !m.left().same_as(n.left()) {
        return Err(Error::AlgebraMismatch("hom_left needs a common left algebra".into()));
    }
    let gens: Vec<(Matrix, Matrix)> = m
        .left()
        .generators()
        .iter()
        .map(|&g| (m.lambda(g).clone(), n.lambda(g).clone()))
        .collect();
    let space = MapSpace::new(m, n, &gens);
    let lambda = (0..m.right().dim())
        .map(|i| space.action(|f| f * m.rho(i)))
        .collect();
    let rho = (0..n.right().dim())
        .map(|j| space.action(|f| n.rho(j) * f))
        .collect();
    let module = Bimodule::new_unchecked(
        format!("Hom_l({},{})", m.name(), n.name()),
        m.right(),
        n.right(),
        lambda,
        rho,
    )?;
    Ok(HomModule { module, maps: space.maps, coords: space.coords })
}

/// A hom-bimodule with the maps its basis vectors stand for.
#[derive(Clone, Debug)]
pub struct HomModule {
    pub module: Bimodule,
    pub maps: Vec<Matrix>,
    coords: Vec<usize>,
}

impl HomModule {
    /// Coordinates of a map lying in the hom-space.
    pub fn coordinates(&self, f: &Matrix) -> Vec<Scalar> {
        let flat = f.entries();
        self.coords.iter().map(|&c| flat[c].clone()).collect()
    }

    /// The map with the given coordinates.
    pub fn map(&self, coords: &[Scalar]) -> Matrix {
        let first = &self.maps[0];
        let mut out = Matrix::zeros(first.field(), first.rows(), first.cols());
        for (c, f) in coords.iter().zip(&self.maps) {
            if !c.is_zero() {
                out = &out + &f.scale(c);
            }
        }
        out
    }
}

/// Maps `F: M → N` with `F X = Y F` for each listed pair, in the canonical kernel basis.
struct MapSpace {
    field: Field,
    maps: Vec<Matrix>,
    // the kernel basis has a 1 at coords[k] in vector k and 0 at the other coords
    coords: Vec<usize>,
}

impl MapSpace {
    fn new(m: &Bimodule, n: &Bimodule, pairs: &[(Matrix, Matrix)]) -> MapSpace {
        let field = m.field();
        let (p, q) = (m.dim(), n.dim());
        let ip = Matrix::identity(field, p);
        let iq = Matrix::identity(field, q);
        let mut system = Matrix::zeros(field, 0, p * q);
        for (x, y) in pairs {
            system = system.vstack(&(&iq.kron(&x.transpose()) - &y.kron(&ip)));
        }
        let r = rref(&system);
        let mut is_pivot = vec![false; p * q];
        for &c in &r.pivots {
            is_pivot[c] = true;
        }
        let coords: Vec<usize> = (0..p * q).filter(|&c| !is_pivot[c]).collect();
        let maps = kernel_basis(&system)
            .into_iter()
            .map(|v| Matrix::new(field, q, p, v).expect("shape"))
            .collect();
        MapSpace { field, maps, coords }
    }

    fn action(&self, act: impl Fn(&Matrix) -> Matrix) -> Matrix {
        let k = self.maps.len();
        let mut out = Matrix::zeros(self.field, k, k);
        for (j, f) in self.maps.iter().enumerate() {
            let g = act(f);
            let flat = g.entries();
            for (i, &c) in self.coords.iter().enumerate() {
                out.set(i, j, flat[c].clone());
            }
        }
        out
    }
}

/// `M ⊠ N` over (A ⊗ C, B ⊗ D) with Kronecker actions.
pub fn external_tensor(m: &Bimodule, n: &Bimodule) -> Result<Bimodule> {
    if m.field() != n.field() {
        return Err(Error::FieldMismatch);
    }
    let left = m.left().tensor(n.left())?;
    let right = m.right().tensor(n.right())?;
    let lambda = external_actions(m.lambdas(), n.lambdas());
    let rho = external_actions(m.rhos(), n.rhos());
    Bimodule::new_unchecked(format!("{}[x]{}", m.name(), n.name()), &left, &right, lambda, rho)
}

fn external_actions(xs: &[Matrix], ys: &[Matrix]) -> Vec<Matrix> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            out.push(x.kron(y));
        }
    }
    out
}

/// `B_h` over (B, A) for a unital homomorphism `h: A → B`: the space B with
/// A left A-module given by the action matrices of the basis elements,
/// viewed as an (A, k)-bimodule. For a group algebra this is a representation.
pub fn left_module(name: impl Into<String>, a: &Algebra, lambda: Vec<Matrix>) -> Result<Bimodule> {
    let k = crate::algebra::ground(a.field());
    let dim = lambda.first().map_or(0, Matrix::rows);
    Bimodule::new(name, a, &k, lambda, vec![Matrix::identity(a.field(), dim)])
}

/// its left regular action and `m·a = m h(a)`.
pub fn base_change(a: &Algebra, b: &Algebra, h: &Matrix) -> Result<Bimodule> {
    a.check_homomorphism(b, h)?;
    let lambda = (0..b.dim()).map(|i| b.left_matrix(i).clone()).collect();
    let rho = h.columns().iter().map(|img| b.right_mult(img)).collect();
    Bimodule::new_unchecked(format!("{}_h", b.name()), b, a, lambda, rho)
}

/// The subspace `A e ⊆ A` or `e A ⊆ A` as a column basis.
pub(crate) fn ideal_basis(a: &Algebra, e: &Element, right_ideal: bool) -> Matrix {
    let mult = if right_ideal { a.left_mult(e) } else { a.right_mult(e) };
    crate::exactlin::column_space(&mult)
}
