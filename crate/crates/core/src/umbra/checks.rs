//! Exact checks of the penumbra squares, the umbra square, and the dual-pair lemma.

use crate::bimodule::{random_bimodule_map, Bimodule};
use crate::duality::DualPair;
use crate::error::Result;
use crate::exactlin::Matrix;
use crate::traces::{TheoremReport, Verdict};

use super::{symmetry, Functor, UmbraData};

use Functor::{Csh, Dsh, Esh, Sh};

/// One named square: both composites as matrices.
struct Square {
    name: &'static str,
    left: Matrix,
    right: Matrix,
}

/// Combines squares into one report; the witness names the first failing square.
fn report(theorem: &str, instance: String, squares: Vec<Square>) -> TheoremReport {
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut failure = None;
    for sq in &squares {
        let r = TheoremReport::compare_matrices(theorem, instance.clone(), &sq.left, &sq.right);
        left.extend(r.left);
        right.extend(r.right);
        if failure.is_none() && r.verdict != Verdict::Pass {
            failure = Some(format!("{}: {}", sq.name, r.witness.unwrap_or_default()));
        }
    }
    TheoremReport {
        theorem: theorem.into(),
        instance,
        left,
        right,
        verdict: if failure.is_none() { Verdict::Pass } else { Verdict::Fail },
        witness: failure,
        notes: squares.iter().map(|s| s.name.to_string()).collect(),
    }
}

fn id(u: &UmbraData, f: Functor, chain: &[Bimodule]) -> Result<Matrix> {
    Ok(Matrix::identity(u.field(), u.dim(f, chain)?))
}

fn c(xs: &[&Bimodule]) -> Vec<Bimodule> {
    xs.iter().map(|&x| x.clone()).collect()
}

/// Evaluates the eight penumbra squares and the naturality of the two
/// splitting maps `spl` and `uspl` in random endomorphisms of `M` and `N`.
pub fn check_penumbra_axioms(u: &UmbraData, m: &Bimodule, n: &Bimodule, p: &Bimodule) -> Result<TheoremReport> {
    let un = u.unit();
    let (mm, nn, pp) = (c(&[m]), c(&[n]), c(&[p]));
    let (mn, np, nm, pn) = (c(&[m, n]), c(&[n, p]), c(&[n, m]), c(&[p, n]));
    let mut squares = Vec::new();

    squares.push(Square {
        name: "csh(MN) sh(P)",
        left: &id(u, Sh, &mm)?.kron(&u.join(Dsh, Sh, &nn, &pp)?) * &u.split(Csh, &mm, &nn)?.kron(&id(u, Sh, &pp)?),
        right: &u.split(Sh, &mm, &np)? * &u.join(Csh, Sh, &mn, &pp)?,
    });
    squares.push(Square {
        name: "dsh(M) csh(NP)",
        left: &u.join(Dsh, Sh, &mm, &nn)?.kron(&id(u, Dsh, &pp)?) * &id(u, Dsh, &mm)?.kron(&u.split(Csh, &nn, &pp)?),
        right: &u.split(Dsh, &mn, &pp)? * &u.join(Dsh, Csh, &mm, &np)?,
    });
    squares.push(Square {
        name: "csh(MNP)",
        left: &id(u, Sh, &mm)?.kron(&u.split(Dsh, &nn, &pp)?) * &u.split(Csh, &mm, &np)?,
        right: &u.split(Sh, &mm, &nn)?.kron(&id(u, Dsh, &pp)?) * &u.split(Csh, &mn, &pp)?,
    });
    squares.push(Square {
        name: "dsh(P) csh(N) sh(M)",
        left: &u.join(Dsh, Sh, &pn, &mm)? * &u.join(Dsh, Csh, &pp, &nn)?.kron(&id(u, Sh, &mm)?),
        right: &u.join(Dsh, Sh, &pp, &nm)? * &id(u, Dsh, &pp)?.kron(&u.join(Csh, Sh, &nn, &mm)?),
    });

    let um = c(&[&un, m]);
    let mu = c(&[m, &un]);
    let ii = c(&[&un]);
    squares.push(Square {
        name: "left unit of sh",
        left: &(&u.unitor(Sh, &um, 0)? * &u.join(Csh, Sh, &ii, &mm)?) * &u.iunit()?.kron(&id(u, Sh, &mm)?),
        right: id(u, Sh, &mm)?,
    });
    squares.push(Square {
        name: "right unit of dsh",
        left: &(&u.unitor(Dsh, &mu, 1)? * &u.join(Dsh, Csh, &mm, &ii)?) * &id(u, Dsh, &mm)?.kron(&u.iunit()?),
        right: id(u, Dsh, &mm)?,
    });
    squares.push(Square {
        name: "right counit of sh",
        left: &id(u, Sh, &mm)?.kron(&u.ounit()?) * &u.split(Sh, &mm, &ii)?,
        right: u.unitor(Sh, &mu, 1)?,
    });
    squares.push(Square {
        name: "left counit of dsh",
        left: &u.ounit()?.kron(&id(u, Dsh, &mm)?) * &u.split(Dsh, &ii, &mm)?,
        right: u.unitor(Dsh, &um, 0)?,
    });

    let f = random_bimodule_map(m, m, 0x5eed)?;
    let g = random_bimodule_map(n, n, 0x5eed + 1)?;
    let fg = |func: Functor| -> Result<Matrix> { Ok(&u.apply(func, &mn, 1, &g)? * &u.apply(func, &mn, 0, &f)?) };
    squares.push(Square {
        name: "naturality of spl",
        left: &u.split(Csh, &mm, &nn)? * &fg(Csh)?,
        right: &u.apply(Sh, &mm, 0, &f)?.kron(&u.apply(Dsh, &nn, 0, &g)?) * &u.split(Csh, &mm, &nn)?,
    });
    squares.push(Square {
        name: "naturality of uspl",
        left: &u.join(Dsh, Sh, &mm, &nn)? * &u.apply(Dsh, &mm, 0, &f)?.kron(&u.apply(Sh, &nn, 0, &g)?),
        right: &fg(Esh)? * &u.join(Dsh, Sh, &mm, &nn)?,
    });

    let instance = format!("{}; {}, {}, {}", u.algebra.name(), m.name(), n.name(), p.name());
    Ok(report("penumbra squares", instance, squares))
}

/// The reference map `csh(M ⊙ N ⊙ P) → esh(P ⊙ N ⊙ M)`: the closing `Č` is
/// evaluated against `C`, the word is cut once between N and M by the E
/// coevaluation, and the three factors are laid out in reverse order.
pub fn twisting_map(u: &UmbraData, m: &Bimodule, n: &Bimodule, p: &Bimodule) -> Result<Matrix> {
    let src = u.value(Csh, &c(&[m, n, p]))?;
    let out = u.value(Esh, &c(&[p, n, m]))?;
    let field = u.field();
    let k = u.algebra.dim();
    let de = u.e_dual.dim();
    Ok(u.assemble(&[&src], &[&out], |ws| {
        let w = &ws[0];
        let kappa = u.ev_c.mul_vec(&w[3]);
        let mut terms = Vec::new();
        for (idx, s) in kappa.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
            let (alpha, beta) = (idx / k, idx % k);
            for (t, y, z) in &u.coev_e {
                let zv = u.e_dual.lambda(beta).mul_vec(&super::unit_vector(field, de, *z));
                let pv = p.rho(alpha).mul_vec(&w[2]);
                let nv = n.rho(*y).mul_vec(&w[1]);
                terms.push((s * t, vec![vec![zv, pv, nv, w[0].clone()]]));
            }
        }
        terms
    }))
}

/// Both composites of the umbra square `csh(M ⊙ N ⊙ P) → esh(P ⊙ N ⊙ M)`,
/// each compared with the twisting map.
pub fn check_umbra_square(u: &UmbraData, m: &Bimodule, n: &Bimodule, p: &Bimodule) -> Result<TheoremReport> {
    let field = u.field();
    let (mm, nn, pp) = (c(&[m]), c(&[n]), c(&[p]));
    let (mn, nm, np, pn) = (c(&[m, n]), c(&[n, m]), c(&[n, p]), c(&[p, n]));
    let left = &(&(&u.join(Dsh, Sh, &pp, &nm)? * &symmetry(field, u.dim(Sh, &nm)?, u.dim(Dsh, &pp)?))
        * &u.theta(Sh, &mm, &nn)?.kron(&id(u, Dsh, &pp)?))
        * &u.split(Csh, &mn, &pp)?;
    let right = &(&(&u.join(Dsh, Sh, &pn, &mm)? * &symmetry(field, u.dim(Sh, &mm)?, u.dim(Dsh, &pn)?))
        * &id(u, Sh, &mm)?.kron(&u.theta(Dsh, &nn, &pp)?))
        * &u.split(Csh, &mm, &np)?;
    let reference = twisting_map(u, m, n, p)?;
    let instance = format!("{}; {}, {}, {}", u.algebra.name(), m.name(), n.name(), p.name());
    Ok(report(
        "umbra square",
        instance,
        vec![
            Square { name: "left route = right route", left: left.clone(), right: right.clone() },
            Square { name: "left route = twisting map", left, right: reference.clone() },
            Square { name: "right route = twisting map", left: right, right: reference },
        ],
    ))
}

/// For a dual pair `(N, M)`, builds the coevaluation `I → sh(N) ⊗ dsh(M)` and
/// evaluation `dsh(M) ⊗ sh(N) → I` and checks both triangle identities.
pub fn check_penumbra_dual(u: &UmbraData, pair: &DualPair) -> Result<TheoremReport> {
    let (n, m) = (&pair.m, &pair.n);
    let un = u.unit();
    let coev = &(&u.split(Csh, &c(&[n]), &c(&[m]))? * &u.apply_coev(Csh, &c(&[&un]), 0, pair)?) * &u.iunit()?;
    let ev = &(&u.ounit()? * &u.apply_ev(Esh, &c(&[m, n]), 0, pair)?) * &u.join(Dsh, Sh, &c(&[m]), &c(&[n]))?;
    let sn = id(u, Sh, &c(&[n]))?;
    let dm = id(u, Dsh, &c(&[m]))?;
    let first = &sn.kron(&ev) * &coev.kron(&sn);
    let second = &ev.kron(&dm) * &dm.kron(&coev);
    let instance = format!("{}; ({}, {})", u.algebra.name(), n.name(), m.name());
    let mut r = report(
        "penumbra dual pair",
        instance,
        vec![
            Square { name: "triangle on sh(N)", left: first, right: sn },
            Square { name: "triangle on dsh(M)", left: second, right: dm },
        ],
    );
    r.notes.push(format!("dim sh(N) = {}, dim dsh(M) = {}", u.dim(Sh, &c(&[n]))?, u.dim(Dsh, &c(&[m]))?));
    Ok(r)
}
