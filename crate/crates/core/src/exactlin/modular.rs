//! Certified multi-modular rref over the rationals.
//!
//! The rref is computed mod several primes, lifted by CRT and rational
//! reconstruction, and accepted only if the kernel it describes is killed by
//! the original matrix. That check is a certificate: rank mod p never exceeds
//! the rational rank, so a verified kernel of the modular dimension is the
//! whole rational kernel, and the candidate has the right row space.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::Matrix;
use super::reduce::Rref;
use super::scalar::{is_prime, Field, Rational, Scalar};

/// Largest number of primes tried before giving up.
const MAX_PRIMES: usize = 24;

fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(MAX_PRIMES);
        let mut p = (1u64 << 31) - 1;
        while out.len() < MAX_PRIMES {
            if is_prime(p) {
                out.push(p);
            }
            p -= 2;
        }
        out
    })
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Rref mod `p` of the rows `use_rows` of `m`, as dense rows, pivot columns,
/// and the rows that produced a pivot; `None` if an entry does not reduce.
fn rref_mod(m: &Matrix, use_rows: &[usize], p: u64) -> Option<(Vec<Vec<u64>>, Vec<usize>, Vec<usize>)> {
    let cols = m.cols();
    // echelon rows indexed by pivot column, each with a leading 1
    let mut echelon: Vec<Option<Vec<u64>>> = vec![None; cols];
    let mut rank = 0;
    let mut acc = vec![0u64; cols];
    let mut producing = Vec::new();
    for &i in use_rows {
        if rank == cols {
            break;
        }
        let mut lo = cols;
        for (j, x) in m.row(i).iter().enumerate() {
            if !x.is_zero() {
                let Scalar::Q(r) = x else { return None };
                acc[j] = r.residue(p)?;
                lo = lo.min(j);
            }
        }
        for c in lo..cols {
            let v = acc[c];
            if v == 0 {
                continue;
            }
            match &echelon[c] {
                Some(row) => {
                    let f = p - v;
                    for k in c..cols {
                        if row[k] != 0 {
                            acc[k] = (acc[k] + f * row[k]) % p;
                        }
                    }
                }
                None => {
                    let inv = inv_mod(v, p);
                    let mut row = vec![0u64; cols];
                    for k in c..cols {
                        row[k] = acc[k] * inv % p;
                    }
                    echelon[c] = Some(row);
                    producing.push(i);
                    rank += 1;
                    break;
                }
            }
        }
        acc.iter_mut().for_each(|x| *x = 0);
    }
    let pivots: Vec<usize> = (0..cols).filter(|&c| echelon[c].is_some()).collect();
    let mut rows: Vec<Vec<u64>> = pivots.iter().map(|&c| echelon[c].take().unwrap()).collect();
    // back substitution
    for k in (0..rows.len()).rev() {
        let c = pivots[k];
        let (above, rest) = rows.split_at_mut(k);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            let v = row[c];
            if v != 0 {
                let f = p - v;
                for j in c..cols {
                    if pivot_row[j] != 0 {
                        row[j] = (row[j] + f * pivot_row[j]) % p;
                    }
                }
            }
        }
    }
    Some((rows, pivots, producing))
}

/// `n / d` with `n ≡ d·u (mod m)` and `|n|, d ≤ sqrt(m / 2)`, if one exists.
fn reconstruct(u: &BigInt, m: &BigInt, bound: &BigInt) -> Option<Rational> {
    if u <= bound {
        return Some(Rational::from_bigints(u.clone(), BigInt::one()));
    }
    let neg = m - u;
    if &neg <= bound {
        return Some(Rational::from_bigints(-neg, BigInt::one()));
    }
    let (mut r0, mut r1) = (m.clone(), u.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::from_bigints(r1, t1))
}

/// Integer multiple of a rational vector with the denominators cleared.
fn integral(v: &[(usize, &Rational)]) -> Vec<(usize, BigInt)> {
    let lcm = v.iter().fold(BigInt::one(), |l, (_, r)| l.lcm(&r.numer_denom().1));
    v.iter()
        .map(|(j, r)| {
            let (n, d) = r.numer_denom();
            (*j, n * (&lcm / d))
        })
        .collect()
}

/// Whether `m` kills the canonical kernel of the candidate rref `rows`.
/// Rows and kernel vectors are scaled to integers so the check needs no gcds.
fn kills_kernel(m: &Matrix, rows: &[Vec<Scalar>], pivots: &[usize]) -> bool {
    let cols = m.cols();
    let mut is_pivot = vec![false; cols];
    pivots.iter().for_each(|&p| is_pivot[p] = true);
    let free: Vec<usize> = (0..cols).filter(|&j| !is_pivot[j]).collect();
    let rat = |x: &Scalar| match x {
        Scalar::Q(r) => r.clone(),
        Scalar::P { .. } => unreachable!("rational matrix"),
    };
    let int_rows: Vec<Vec<(usize, BigInt)>> = (0..m.rows())
        .map(|i| {
            let nz: Vec<(usize, Rational)> =
                m.row(i).iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, rat(x))).collect();
            integral(&nz.iter().map(|(j, r)| (*j, r)).collect::<Vec<_>>())
        })
        .collect();
    free.iter().all(|&f| {
        // kernel vector: 1 at f, -rows[k][f] at pivot k
        let one = Rational::from_int(1);
        let negs: Vec<(usize, Rational)> = pivots
            .iter()
            .enumerate()
            .filter(|(k, _)| !rows[*k][f].is_zero())
            .map(|(k, &p)| (p, rat(&-&rows[k][f])))
            .collect();
        let mut entries: Vec<(usize, &Rational)> = vec![(f, &one)];
        entries.extend(negs.iter().map(|(p, r)| (*p, r)));
        let mut v: Vec<Option<BigInt>> = vec![None; cols];
        for (j, x) in integral(&entries) {
            v[j] = Some(x);
        }
        int_rows.iter().all(|row| {
            let mut s = BigInt::zero();
            for (j, x) in row {
                if let Some(y) = &v[*j] {
                    s += x * y;
                }
            }
            s.is_zero()
        })
    })
}

/// Exact rref of a rational matrix, or `None` if the modular route fails.
pub(crate) fn modular_rref(m: &Matrix) -> Option<Rref> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots: Option<Vec<usize>> = None;
    let mut residues: Vec<Vec<BigInt>> = Vec::new();
    let mut modulus = BigInt::one();
    // once a prime has found independent rows, later primes only reduce those;
    // the exact check below still uses every row
    let mut use_rows: Vec<usize> = (0..rows).collect();
    for &p in primes() {
        let Some((r, piv, producing)) = rref_mod(m, &use_rows, p) else { continue };
        match &pivots {
            Some(old) if old.len() > piv.len() || (old.len() == piv.len() && *old < piv) => continue,
            Some(old) if *old == piv => {
                let mp = modulus.mod_floor(&BigInt::from(p)).to_u64().unwrap();
                let inv = inv_mod(mp, p);
                for (acc, new) in residues.iter_mut().flat_map(|r| r.iter_mut()).zip(r.iter().flatten()) {
                    let a = acc.mod_floor(&BigInt::from(p)).to_u64().unwrap();
                    let t = (new + p - a) % p * inv % p;
                    *acc += &modulus * t;
                }
                modulus *= p;
            }
            _ => {
                // first prime, or a better one: restart from it
                pivots = Some(piv);
                use_rows = producing;
                residues = r.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect();
                modulus = BigInt::from(p);
            }
        }
        let piv = pivots.as_ref().unwrap();
        let bound = (&modulus >> 1usize).sqrt();
        let candidate: Option<Vec<Vec<Scalar>>> = residues
            .iter()
            .map(|row| row.iter().map(|u| reconstruct(u, &modulus, &bound).map(Scalar::Q)).collect())
            .collect();
        if let Some(cand) = candidate {
            if kills_kernel(m, &cand, piv) {
                let zero = vec![Field::Rationals.zero(); cols];
                let full: Vec<Vec<Scalar>> =
                    (0..rows).map(|i| cand.get(i).cloned().unwrap_or_else(|| zero.clone())).collect();
                return Some(Rref { matrix: Matrix::from_rows(Field::Rationals, cols, &full), pivots: piv.clone() });
            }
        }
    }
    None
}
