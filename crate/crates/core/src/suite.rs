//! Seeded batches of the exact checks. Each batch returns one report per
//! instance; `summarize` folds them into a single verdict.

use crate::algebra::Algebra;
use crate::bimodule::{random_bimodule, random_bimodule_map, tensor_over, unit_bimodule, Bimodule, RandomSpec};
use crate::duality::{right_dual, verify_triangles};
use crate::error::{Error, Result};
use crate::traces::{check_composite, check_composite_euler, check_lunts, check_mate, TheoremReport, Twist, Verdict};
use crate::umbra::{build_umbra, check_penumbra_axioms, check_penumbra_dual, check_umbra_square};

/// Size of the seeded modules used by every batch.
pub const SMALL: RandomSpec = RandomSpec { max_dim: 4, max_summands: 2 };

/// The seeded `A`-`A`-bimodule used throughout the batches.
pub fn seeded_module(a: &Algebra, seed: u64) -> Result<Bimodule> {
    random_bimodule(a, a, seed, SMALL)
}

/// A random twist `P ⊙ M → M ⊙ Q`.
pub fn random_twist(p: &Bimodule, m: &Bimodule, q: &Bimodule, seed: u64) -> Result<Twist> {
    let source = tensor_over(p, m)?;
    let target = tensor_over(m, q)?;
    let map = random_bimodule_map(&source.result, &target.result, seed)?;
    Ok(Twist { source, target, map })
}

/// Aggregate verdict of a batch: any failure fails it, all refusals skip it.
pub fn summarize(parts: &[TheoremReport]) -> (Verdict, Option<String>) {
    if let Some(f) = parts.iter().find(|r| r.verdict == Verdict::Fail) {
        return (Verdict::Fail, Some(format!("{}: {}", f.instance, f.witness.clone().unwrap_or_default())));
    }
    if parts.is_empty() {
        return (Verdict::Refused, Some("no instances".into()));
    }
    if parts.iter().all(|r| r.verdict == Verdict::Refused) {
        return (Verdict::Refused, parts[0].witness.clone());
    }
    (Verdict::Pass, None)
}

fn refuse_unless_separable(theorem: &str, a: &Algebra) -> Option<Vec<TheoremReport>> {
    (!a.is_separable()).then(|| {
        vec![TheoremReport::refused(
            theorem,
            a.name().to_string(),
            format!("{} is not separable; trace theorems are only checked for strict 2-dualizable algebras", a.name()),
        )]
    })
}

/// Both triangle identities of the computed right dual of `m`. A module that
/// is not projective on the right is reported as refused.
pub fn check_triangles(m: &Bimodule) -> Result<TheoremReport> {
    const NAME: &str = "triangles";
    let instance = m.name().to_string();
    let pair = match right_dual(m) {
        Err(Error::NotDualizable(why)) => return Ok(TheoremReport::refused(NAME, instance, why)),
        other => other?,
    };
    let t = verify_triangles(&pair)?;
    let side = |w: &Option<crate::exactlin::EntryWitness>| w.as_ref().map_or("identity".to_string(), ToString::to_string);
    let left = vec![side(&t.first), side(&t.second)];
    let right = vec!["identity".to_string(); 2];
    let witness = match (&t.first, &t.second) {
        (Some(w), _) => Some(format!("first triangle, {w}")),
        (None, Some(w)) => Some(format!("second triangle, {w}")),
        _ => None,
    };
    let verdict = if witness.is_none() { Verdict::Pass } else { Verdict::Fail };
    let notes = vec![format!("dim M = {}, dim N = {}", pair.m.dim(), pair.n.dim())];
    Ok(TheoremReport { theorem: NAME.into(), instance, left, right, verdict, witness, notes })
}

/// Triangles for the unit and for seeded modules.
pub fn triangles_batch(a: &Algebra, seeds: &[u64]) -> Result<Vec<TheoremReport>> {
    let mut out = vec![check_triangles(&unit_bimodule(a))?];
    for &s in seeds {
        out.push(check_triangles(&seeded_module(a, s)?)?);
    }
    Ok(out)
}

/// Pasted twists against composed traces, and the Euler specialization.
pub fn composite_batch(a: &Algebra, seeds: &[u64]) -> Result<Vec<TheoremReport>> {
    if let Some(r) = refuse_unless_separable("composite", a) {
        return Ok(r);
    }
    let mut out = Vec::new();
    for &s in seeds {
        let r = |k: u64| seeded_module(a, 10 * s + k);
        let (q1, m1, q2, m2, q3) = (r(0)?, r(1)?, r(2)?, r(3)?, r(4)?);
        let f1 = random_twist(&q1, &m1, &q2, s)?;
        let f2 = random_twist(&q2, &m2, &q3, s + 100)?;
        let mut rep = check_composite(&f1, &right_dual(&m1)?, &f2, &right_dual(&m2)?)?;
        rep.instance = format!("seed {s}: {}", rep.instance);
        out.push(rep);
        let mut euler = check_composite_euler(&m1, &m2)?;
        euler.instance = format!("seed {s}: {}", euler.instance);
        out.push(euler);
    }
    Ok(out)
}

/// Right traces against left traces of mates.
pub fn mate_batch(a: &Algebra, seeds: &[u64]) -> Result<Vec<TheoremReport>> {
    if let Some(r) = refuse_unless_separable("mate", a) {
        return Ok(r);
    }
    let mut out = Vec::new();
    for &s in seeds {
        let r = |k: u64| seeded_module(a, 7 * s + k);
        let (p, m, q) = (r(0)?, r(1)?, r(2)?);
        let t = random_twist(&p, &m, &q, s)?;
        let mut rep = check_mate(&t, &right_dual(&m)?)?;
        rep.instance = format!("seed {s}: {}", rep.instance);
        out.push(rep);
    }
    Ok(out)
}

/// Graded Hochschild Euler characteristic against the scalar trace, on the
/// unit and on seeded modules.
pub fn lunts_batch(a: &Algebra, seeds: &[u64], n_max: usize) -> Result<Vec<TheoremReport>> {
    let mut out = vec![check_lunts(a, &unit_bimodule(a), n_max)?];
    if out[0].verdict == Verdict::Refused {
        return Ok(out);
    }
    for &s in seeds {
        out.push(check_lunts(a, &seeded_module(a, s)?, n_max)?);
    }
    Ok(out)
}

fn triple(a: &Algebra, s: u64) -> Result<(Bimodule, Bimodule, Bimodule)> {
    Ok((seeded_module(a, 3 * s)?, seeded_module(a, 3 * s + 1)?, seeded_module(a, 3 * s + 2)?))
}

fn refused_umbra(theorem: &str, a: &Algebra, e: Error) -> Result<Vec<TheoremReport>> {
    match e {
        Error::Refused(why) => Ok(vec![TheoremReport::refused(theorem, a.name().to_string(), why)]),
        other => Err(other),
    }
}

/// The umbra square on the unit triple and on seeded triples.
pub fn umbra_batch(a: &Algebra, seeds: &[u64]) -> Result<Vec<TheoremReport>> {
    let u = match build_umbra(a) {
        Ok(u) => u,
        Err(e) => return refused_umbra("umbra square", a, e),
    };
    let un = u.unit();
    let mut out = vec![check_umbra_square(&u, &un, &un, &un)?];
    for &s in seeds {
        let (m, n, p) = triple(a, s)?;
        out.push(check_umbra_square(&u, &m, &n, &p)?);
    }
    Ok(out)
}

/// The penumbra squares on seeded triples and the dual-pair triangles on the
/// middle module of each triple.
pub fn penumbra_batch(a: &Algebra, seeds: &[u64]) -> Result<Vec<TheoremReport>> {
    let u = match build_umbra(a) {
        Ok(u) => u,
        Err(e) => return refused_umbra("penumbra squares", a, e),
    };
    let un = u.unit();
    let mut out = vec![check_penumbra_axioms(&u, &un, &un, &un)?, check_penumbra_dual(&u, &right_dual(&un)?)?];
    for &s in seeds {
        let (m, n, p) = triple(a, s)?;
        out.push(check_penumbra_axioms(&u, &m, &n, &p)?);
        out.push(check_penumbra_dual(&u, &right_dual(&n)?)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{product_algebra, truncated_polynomial};
    use crate::exactlin::Field;

    #[test]
    fn summary_prefers_failures_then_refusals() {
        let pass = TheoremReport { verdict: Verdict::Pass, ..TheoremReport::refused("t", "a".into(), "r".into()) };
        let skip = TheoremReport::refused("t", "b".into(), "why".into());
        let mut fail = pass.clone();
        fail.verdict = Verdict::Fail;
        fail.witness = Some("entry 0".into());
        assert_eq!(summarize(&[pass.clone(), skip.clone()]).0, Verdict::Pass);
        assert_eq!(summarize(std::slice::from_ref(&skip)), (Verdict::Refused, Some("why".into())));
        assert_eq!(summarize(&[pass, fail, skip]).1.unwrap(), "a: entry 0");
        assert_eq!(summarize(&[]).0, Verdict::Refused);
    }

    #[test]
    fn batches_pass_on_a_product_and_skip_the_dual_numbers() {
        let kk = product_algebra(Field::Rationals, 2);
        for parts in [triangles_batch(&kk, &[0, 1]).unwrap(), composite_batch(&kk, &[0]).unwrap(), mate_batch(&kk, &[0]).unwrap()] {
            assert_eq!(summarize(&parts).0, Verdict::Pass, "{:?}", summarize(&parts));
        }
        let d = truncated_polynomial(Field::Rationals, 2);
        assert_eq!(summarize(&mate_batch(&d, &[0]).unwrap()).0, Verdict::Refused);
        assert_eq!(summarize(&umbra_batch(&d, &[0]).unwrap()).0, Verdict::Refused);
        assert_eq!(summarize(&lunts_batch(&d, &[0], 3).unwrap()).0, Verdict::Refused);
    }
}
