use crate::error::{Error, Result};

use super::matrix::Matrix;
use super::scalar::{Field, Scalar};

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Matrices with fewer entries than this go straight to exact elimination.
const MODULAR_THRESHOLD: usize = 2048;

/// Reduced row-echelon form. Large rational matrices go through the certified
/// multi-modular route, since exact elimination suffers from coefficient
/// growth; the rref of a row space is unique, so the result is the same.
pub fn rref(m: &Matrix) -> Rref {
    if m.field() == Field::Rationals && m.rows() * m.cols() >= MODULAR_THRESHOLD {
        if let Some(r) = super::modular::modular_rref(m) {
            return r;
        }
    }
    plain_rref(m)
}

/// Gauss-Jordan elimination. The pivot of each column is the first row at or
/// below the current one with a nonzero entry; no other pivoting is done.
fn plain_rref(m: &Matrix) -> Rref {
    let (rows, cols) = (m.rows(), m.cols());
    let mut data: Vec<Vec<Scalar>> = (0..rows).map(|i| m.row(i).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !data[i][c].is_zero()) else {
            continue;
        };
        data.swap(r, p);
        let inv = data[r][c].inverse().expect("nonzero pivot");
        if !inv.is_one() {
            for v in data[r][c..].iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
        }
        let pivot_row = std::mem::take(&mut data[r]);
        let support: Vec<usize> = (c..cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in data.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = -&row[c];
            for &j in &support {
                row[j].mul_add_assign(&f, &pivot_row[j]);
            }
        }
        data[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: Matrix::from_rows(m.field(), cols, &data), pivots }
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).rank()
}

/// Canonical null-space basis: one vector per free column, in increasing
/// column order, with that free variable set to 1 and the others to 0.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Scalar>> {
    let r = rref(m);
    let field = m.field();
    let free = non_pivots(m.cols(), &r.pivots);
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); m.cols()];
            v[f] = field.one();
            for (k, &p) in r.pivots.iter().enumerate() {
                v[p] = -r.matrix.get(k, f);
            }
            v
        })
        .collect()
}

/// Kernel basis as the columns of a matrix.
pub fn kernel_matrix(m: &Matrix) -> Matrix {
    Matrix::from_columns(m.field(), m.cols(), &kernel_basis(m))
}

fn non_pivots(n: usize, pivots: &[usize]) -> Vec<usize> {
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..n).filter(|&j| !is_pivot[j]).collect()
}

/// One solution of `m x = b` with every free coordinate zero, or `None` if inconsistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            m.rows()
        )));
    }
    let rhs = Matrix::from_columns(m.field(), m.rows(), &[b.to_vec()]);
    Ok(solve_matrix(m, &rhs)?.map(|x| x.column(0)))
}

/// Solves `m X = b` for all columns of `b` at once, with free coordinates zero.
pub fn solve_matrix(m: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    if b.rows() != m.rows() {
        return Err(Error::Dimension(format!("{} vs {} rows", b.rows(), m.rows())));
    }
    if b.field() != m.field() {
        return Err(Error::FieldMismatch);
    }
    let n = m.cols();
    let r = rref(&m.hstack(b));
    if r.pivots.iter().any(|&p| p >= n) {
        return Ok(None);
    }
    let mut x = Matrix::zeros(m.field(), n, b.cols());
    for (k, &p) in r.pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(p, j, r.matrix.get(k, n + j).clone());
        }
    }
    Ok(Some(x))
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    if !m.is_square() {
        return None;
    }
    let x = solve_matrix(m, &Matrix::identity(m.field(), m.rows())).ok()??;
    if rank(m) == m.rows() {
        Some(x)
    } else {
        None
    }
}

pub fn is_invertible(m: &Matrix) -> bool {
    m.is_square() && rank(m) == m.rows()
}

/// Quotient of `k^ambient` by the span of `subspace`, with a projection onto
/// and a section from the quotient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientSpace {
    pub dim: usize,
    pub projection: Matrix,
    pub section: Matrix,
}

/// The quotient basis is the set of standard coordinates that are not pivots
/// of the subspace's rref; the section sends quotient coordinate `t` to the
/// `t`-th such standard vector.
pub fn quotient(field: Field, ambient: usize, subspace: &[Vec<Scalar>]) -> QuotientSpace {
    let span = Matrix::from_rows(field, ambient, subspace);
    quotient_by_rows(&span)
}

/// Quotient of `k^cols` by the row space of `span`.
pub fn quotient_by_rows(span: &Matrix) -> QuotientSpace {
    let field = span.field();
    let ambient = span.cols();
    let r = rref(span);
    let free = non_pivots(ambient, &r.pivots);
    let q = free.len();
    let mut projection = Matrix::zeros(field, q, ambient);
    let mut section = Matrix::zeros(field, ambient, q);
    for (t, &j) in free.iter().enumerate() {
        projection.set(t, j, field.one());
        section.set(j, t, field.one());
    }
    for (k, &p) in r.pivots.iter().enumerate() {
        for (t, &j) in free.iter().enumerate() {
            let v = r.matrix.get(k, j);
            if !v.is_zero() {
                projection.set(t, p, -v);
            }
        }
    }
    QuotientSpace { dim: q, projection, section }
}

/// Row-reduced basis of the span of the columns of `m`, returned as columns.
pub fn column_space(m: &Matrix) -> Matrix {
    let r = rref(&m.transpose());
    let rows: Vec<usize> = (0..r.rank()).collect();
    let all: Vec<usize> = (0..m.rows()).collect();
    r.matrix.select(&rows, &all).transpose()
}

/// True when every column of `b` lies in the column span of `a`.
pub fn columns_in_span(a: &Matrix, b: &Matrix) -> bool {
    rank(&a.hstack(b)) == rank(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Q.from_i64(x)).collect()
    }

    #[test]
    fn modular_rref_matches_plain_elimination() {
        // 120 x 40 with rank 25: rows are integer combinations of 25 base rows,
        // plus one row whose entries are fractions
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 7) as i64 - 3
        };
        let base: Vec<Vec<i64>> = (0..25).map(|_| (0..40).map(|_| next()).collect()).collect();
        let mut rows: Vec<Vec<Scalar>> = (0..119)
            .map(|_| {
                let c: Vec<i64> = (0..25).map(|_| next()).collect();
                (0..40).map(|j| Q.from_i64((0..25).map(|k| c[k] * base[k][j]).sum())).collect()
            })
            .collect();
        rows.push(base[0].iter().map(|&x| Q.fraction(x, 3).unwrap()).collect());
        let m = Matrix::from_rows(Q, 40, &rows);
        let guided = super::super::modular::modular_rref(&m).expect("modular route applies");
        assert_eq!(guided, plain_rref(&m));
        assert_eq!(guided.rank(), 25);
        assert_eq!(rref(&m), guided);
    }

    #[test]
    fn rref_trivial_cases() {
        let id = Matrix::identity(Q, 3);
        let r = rref(&id);
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        let z = Matrix::zeros(Q, 2, 5);
        let r = rref(&z);
        assert_eq!(r.matrix, z);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rank_of_dependent_rows() {
        assert_eq!(rank(&Matrix::from_i64(Q, &[vec![1, 2], vec![2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Matrix::identity(Q, 4)).is_empty());
        let k = kernel_basis(&Matrix::zeros(Q, 2, 3));
        assert_eq!(k, vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]);
        assert_eq!(kernel_basis(&Matrix::from_i64(Q, &[vec![1, 2]])), vec![v(&[-2, 1])]);
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(Q, 3);
        assert_eq!(solve(&id, &v(&[1, -2, 5])).unwrap(), Some(v(&[1, -2, 5])));
        assert_eq!(solve(&Matrix::zeros(Q, 1, 1), &v(&[1])).unwrap(), None);
        let d = Matrix::from_i64(Q, &[vec![2, 0], vec![0, 3]]);
        assert_eq!(solve(&d, &v(&[4, 6])).unwrap(), Some(v(&[2, 2])));
        assert!(solve(&d, &v(&[1])).is_err());
    }

    #[test]
    fn solve_sets_free_variables_to_zero() {
        let m = Matrix::from_i64(Q, &[vec![1, 1, 0]]);
        assert_eq!(solve(&m, &v(&[3])).unwrap(), Some(v(&[3, 0, 0])));
    }

    #[test]
    fn quotient_examples() {
        let q = quotient(Q, 3, &[]);
        assert_eq!(q.dim, 3);
        assert!(q.projection.is_identity());
        let q = quotient(Q, 2, &[v(&[1, 0])]);
        assert_eq!(q.projection, Matrix::from_i64(Q, &[vec![0, 1]]));
        let q = quotient(Q, 3, &[v(&[1, 1, 0]), v(&[0, 1, 1])]);
        assert_eq!(q.dim, 1);
        assert!((&q.projection * &q.section).is_identity());
        assert!(q.projection.mul_vec(&v(&[1, 1, 0])).iter().all(Scalar::is_zero));
        assert!(q.projection.mul_vec(&v(&[0, 1, 1])).iter().all(Scalar::is_zero));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_i64(Q, &[vec![2, 1], vec![7, 4]]);
        let inv = inverse(&m).unwrap();
        assert!((&m * &inv).is_identity());
        assert!(inverse(&Matrix::from_i64(Q, &[vec![1, 2], vec![2, 4]])).is_none());
    }

    #[test]
    fn prime_field_rank_differs() {
        let m = Matrix::from_i64(Field::Prime(3), &[vec![1, 2], vec![2, 1]]);
        assert_eq!(rank(&m), 1);
        assert_eq!(rank(&Matrix::from_i64(Q, &[vec![1, 2], vec![2, 1]])), 2);
    }
}
