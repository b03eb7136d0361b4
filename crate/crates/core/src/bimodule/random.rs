use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::exactlin::{is_invertible, Field, Matrix};

use super::{ideal_basis, unit_bimodule, Bimodule, Coordinates};

/// Shape limits for [`random_bimodule`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub max_dim: usize,
    pub max_summands: usize,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec { max_dim: 8, max_summands: 2 }
    }
}

/// Idempotents used to build projective pieces: the unit, idempotent basis
/// elements, and for group bases the averages over cyclic subgroups together
/// with their complements.
pub fn idempotent_catalogue(a: &Algebra) -> Vec<Element> {
    let field = a.field();
    let mut out: Vec<Element> = vec![a.unit().clone()];
    let push = |e: Element, out: &mut Vec<Element>| {
        if e.iter().any(|s| !s.is_zero()) && !out.contains(&e) {
            out.push(e);
        }
    };
    for i in 0..a.dim() {
        if a.product(i, i) == &a.basis(i) {
            push(a.basis(i), &mut out);
        }
    }
    if let Some(table) = group_table(a) {
        let id = a.unit().iter().position(|s| !s.is_zero()).unwrap();
        for g in 0..a.dim() {
            let mut powers = vec![id];
            let mut x = g;
            while x != id {
                powers.push(x);
                x = table[x][g];
            }
            let order = powers.len() as i64;
            if order == 1 {
                continue;
            }
            let Ok(inv) = field.fraction(1, order) else { continue };
            let mut e = a.zero();
            for &p in &powers {
                e[p] = &e[p] + &inv;
            }
            let complement: Element = a.unit().iter().zip(&e).map(|(u, x)| u - x).collect();
            push(e, &mut out);
            push(complement, &mut out);
        }
    }
    out
}

/// Multiplication table when every product of basis elements is a basis element.
fn group_table(a: &Algebra) -> Option<Vec<Vec<usize>>> {
    let single = |v: &Element| {
        let nz: Vec<usize> = (0..v.len()).filter(|&i| !v[i].is_zero()).collect();
        (nz.len() == 1 && v[nz[0]].is_one()).then(|| nz[0])
    };
    single(a.unit())?;
    (0..a.dim())
        .map(|i| (0..a.dim()).map(|j| single(a.product(i, j))).collect())
        .collect()
}

/// The projective (A, B)-bimodule `A e ⊗_k f B`.
pub(crate) fn projective_piece(a: &Algebra, b: &Algebra, e: &Element, f: &Element) -> Bimodule {
    let field = a.field();
    let ae = ideal_basis(a, e, false);
    let fb = ideal_basis(b, f, true);
    let ca = Coordinates::new(&ae);
    let cb = Coordinates::new(&fb);
    let ib = Matrix::identity(field, fb.cols());
    let ia = Matrix::identity(field, ae.cols());
    let lambda = (0..a.dim())
        .map(|i| ca.express(&(a.left_matrix(i) * &ae)).kron(&ib))
        .collect();
    let rho = (0..b.dim())
        .map(|j| ia.kron(&cb.express(&(b.right_matrix(j) * &fb))))
        .collect();
    Bimodule::new_unchecked(format!("Ae.fB({})", ae.cols() * fb.cols()), a, b, lambda, rho)
        .expect("piece shape")
}

/// Random invertible integer matrix with determinant ±1 (a product of unitriangular factors).
pub fn random_invertible(field: Field, n: usize, rng: &mut impl Rng) -> Matrix {
    let mut lower = Matrix::identity(field, n);
    let mut upper = Matrix::identity(field, n);
    for i in 0..n {
        for j in 0..i {
            lower.set(i, j, field.from_i64(rng.gen_range(-1..=1)));
            upper.set(j, i, field.from_i64(rng.gen_range(-1..=1)));
        }
    }
    let p = &lower * &upper;
    debug_assert!(is_invertible(&p));
    p
}

/// Seeded random bimodule: a direct sum of projective pieces `A e ⊗ f B`
/// (and `U_A` when A = B), expressed in a random integral basis.
pub fn random_bimodule(a: &Algebra, b: &Algebra, seed: u64, spec: RandomSpec) -> Result<Bimodule> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pieces: Vec<Bimodule> = Vec::new();
    if a.same_as(b) {
        pieces.push(unit_bimodule(a));
    }
    for e in idempotent_catalogue(a) {
        for f in idempotent_catalogue(b) {
            let p = projective_piece(a, b, &e, &f);
            if p.dim() > 0 {
                pieces.push(p);
            }
        }
    }
    pieces.retain(|p| p.dim() <= spec.max_dim);
    pieces.sort_by_key(Bimodule::dim);
    if pieces.is_empty() {
        return Err(Error::Dimension(format!("no piece fits in dimension {}", spec.max_dim)));
    }
    let count = rng.gen_range(1..=spec.max_summands.max(1));
    let mut total: Option<Bimodule> = None;
    for _ in 0..count {
        let used = total.as_ref().map_or(0, Bimodule::dim);
        let fitting: Vec<&Bimodule> = pieces.iter().filter(|p| used + p.dim() <= spec.max_dim).collect();
        let Some(p) = fitting.choose(&mut rng) else { break };
        total = Some(match total {
            None => (*p).clone(),
            Some(t) => t.direct_sum(p)?,
        });
    }
    let m = total.expect("at least one piece fits");
    let p = random_invertible(a.field(), m.dim(), &mut rng);
    Ok(m.change_basis(&p)?.renamed(format!("R{seed}[{}]", m.dim())))
}
