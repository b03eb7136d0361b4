//! Euler characteristics, twisted traces, iterated traces, and exact checkers
//! for the trace identities.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::algebra::{group_algebra, Algebra, Group};
use crate::bimodule::{
    associator, associator_inverse, base_change, left_module, left_unitor, left_unitor_inverse,
    random_bimodule, random_bimodule_map, right_unitor, right_unitor_inverse, tensor_maps,
    tensor_over, unit_bimodule, Bimodule, BimoduleMap, RandomSpec, TensorWitness,
};
use crate::duality::{compose_all, left_dual, mate, right_dual, witness_c, witness_e, DualPair};
use crate::error::{Error, Result};
use crate::exactlin::{Field, Matrix, Scalar};
use crate::shadow::{graded_euler, hh0, shadow_map, shadow_theta, ShadowSpace};

/// A linear map between shadows.
#[derive(Clone, Debug)]
pub struct TraceMap {
    pub source: ShadowSpace,
    pub target: ShadowSpace,
    pub matrix: Matrix,
}

impl TraceMap {
    /// `next ∘ self`.
    pub fn then(&self, next: &TraceMap) -> Result<TraceMap> {
        if !self.target.source.same_as(&next.source.source) {
            return Err(Error::Dimension(format!(
                "cannot compose a map into <{}> with a map out of <{}>",
                self.target.source.name(),
                next.source.source.name()
            )));
        }
        Ok(TraceMap {
            source: self.source.clone(),
            target: next.target.clone(),
            matrix: &next.matrix * &self.matrix,
        })
    }
}

/// A 2-cell `φ: X ⊙ Y → Z ⊙ W` with the tensor witnesses of its source and
/// target. A right twist has the form `P ⊙ M → M ⊙ Q`, a left twist `N ⊙ P → Q ⊙ N`.
#[derive(Clone, Debug)]
pub struct Twist {
    pub source: TensorWitness,
    pub target: TensorWitness,
    pub map: BimoduleMap,
}

impl Twist {
    /// Checked constructor from the four factors and a matrix.
    pub fn new(x: &Bimodule, y: &Bimodule, z: &Bimodule, w: &Bimodule, matrix: Matrix) -> Result<Twist> {
        let source = tensor_over(x, y)?;
        let target = tensor_over(z, w)?;
        let map = BimoduleMap::new(&source.result, &target.result, matrix)?;
        Ok(Twist { source, target, map })
    }

    /// The canonical right twist `U_A ⊙ M → M → M ⊙ U_B`.
    pub fn canonical(m: &Bimodule) -> Result<Twist> {
        let source = tensor_over(&unit_bimodule(m.left()), m)?;
        let target = tensor_over(m, &unit_bimodule(m.right()))?;
        let map = right_unitor_inverse(&target).compose(&left_unitor(&source))?;
        Ok(Twist { source, target, map })
    }

    pub fn scale(&self, c: &Scalar) -> Twist {
        Twist { map: self.map.scale(c), ..self.clone() }
    }

    pub fn add(&self, other: &Twist) -> Result<Twist> {
        Ok(Twist { map: self.map.add(&other.map)?, ..self.clone() })
    }
}

fn identity(m: &Bimodule) -> BimoduleMap {
    BimoduleMap::identity(m)
}

/// `⟨up⟩ ∘ θ ∘ ⟨down⟩` where `down` ends in `X ⊙ Y` and `up` starts at `Y ⊙ X`.
fn through_theta(down: &BimoduleMap, xy: &TensorWitness, yx: &TensorWitness, up: &BimoduleMap) -> Result<TraceMap> {
    let source = hh0(&down.source)?;
    let target = hh0(&up.target)?;
    let mid = shadow_map(down, &source, &hh0(&xy.result)?);
    let theta = shadow_theta(xy, yx)?;
    let top = shadow_map(up, &hh0(&yx.result)?, &target);
    Ok(TraceMap { source, target, matrix: &(&top * &theta) * &mid })
}

/// `χ(M): ⟨U_A⟩ → ⟨M ⊙ N⟩ → ⟨N ⊙ M⟩ → ⟨U_B⟩` for a dual pair over (A, B).
pub fn euler_char(pair: &DualPair) -> Result<TraceMap> {
    through_theta(&pair.coev, &pair.mn, &pair.nm, &pair.ev)
}

/// Trace `⟨P⟩ → ⟨Q⟩` of a right twist `φ: P ⊙ M → M ⊙ Q` along a dual pair for `M`:
/// `P → P⊙U → P⊙(M⊙N) → (P⊙M)⊙N → (M⊙Q)⊙N`, then θ, then
/// `N⊙(M⊙Q) → (N⊙M)⊙Q → U⊙Q → Q`.
pub fn twisted_trace(t: &Twist, pair: &DualPair) -> Result<TraceMap> {
    let (p, q) = (&t.source.left, &t.target.right);
    if !t.source.right.same_as(&pair.m) || !t.target.left.same_as(&pair.m) {
        return Err(Error::Dimension("twist is not of the form P.M -> M.Q for the pair".into()));
    }
    let n = &pair.n;
    let ua = unit_bimodule(pair.m.left());
    let ub = unit_bimodule(pair.m.right());
    let p_ua = tensor_over(p, &ua)?;
    let p_mn = tensor_over(p, &pair.mn.result)?;
    let pm_n = tensor_over(&t.source.result, n)?;
    let mq_n = tensor_over(&t.target.result, n)?;
    let n_mq = tensor_over(n, &t.target.result)?;
    let nm_q = tensor_over(&pair.nm.result, q)?;
    let ub_q = tensor_over(&ub, q)?;
    let down = compose_all(&[
        right_unitor_inverse(&p_ua),
        tensor_maps(&identity(p), &pair.coev, &p_ua, &p_mn)?,
        associator_inverse(&t.source, &pm_n, &pair.mn, &p_mn),
        tensor_maps(&t.map, &identity(n), &pm_n, &mq_n)?,
    ])?;
    let up = compose_all(&[
        associator_inverse(&pair.nm, &nm_q, &t.target, &n_mq),
        tensor_maps(&pair.ev, &identity(q), &nm_q, &ub_q)?,
        left_unitor(&ub_q),
    ])?;
    through_theta(&down, &mq_n, &n_mq, &up)
}

/// Mirror trace `⟨P⟩ → ⟨Q⟩` of a left twist `ψ: N ⊙ P → Q ⊙ N`, where `N` is
/// the second member of the pair: `P → U⊙P → (M⊙N)⊙P → M⊙(N⊙P) → M⊙(Q⊙N)`,
/// then θ, then `(Q⊙N)⊙M → Q⊙(N⊙M) → Q⊙U → Q`.
pub fn left_twisted_trace(t: &Twist, pair: &DualPair) -> Result<TraceMap> {
    let (p, q) = (&t.source.right, &t.target.left);
    if !t.source.left.same_as(&pair.n) || !t.target.right.same_as(&pair.n) {
        return Err(Error::Dimension("twist is not of the form N.P -> Q.N for the pair".into()));
    }
    let m = &pair.m;
    let ua = unit_bimodule(m.left());
    let ub = unit_bimodule(m.right());
    let ua_p = tensor_over(&ua, p)?;
    let mn_p = tensor_over(&pair.mn.result, p)?;
    let m_np = tensor_over(m, &t.source.result)?;
    let m_qn = tensor_over(m, &t.target.result)?;
    let qn_m = tensor_over(&t.target.result, m)?;
    let q_nm = tensor_over(q, &pair.nm.result)?;
    let q_ub = tensor_over(q, &ub)?;
    let down = compose_all(&[
        left_unitor_inverse(&ua_p),
        tensor_maps(&pair.coev, &identity(p), &ua_p, &mn_p)?,
        associator(&pair.mn, &mn_p, &t.source, &m_np),
        tensor_maps(&identity(m), &t.map, &m_np, &m_qn)?,
    ])?;
    let up = compose_all(&[
        associator(&t.target, &qn_m, &pair.nm, &q_nm),
        tensor_maps(&identity(q), &pair.ev, &q_nm, &q_ub)?,
        right_unitor(&q_ub),
    ])?;
    through_theta(&down, &m_qn, &qn_m, &up)
}

/// Matrix trace of an endomorphism of a shadow.
pub fn scalar_trace(f: &TraceMap) -> Result<Scalar> {
    if !f.source.source.same_as(&f.target.source) {
        return Err(Error::Dimension("scalar trace needs an endomorphism".into()));
    }
    Ok(f.matrix.trace())
}

/// Which factor of `φ: M ⊙ N → N ⊙ M` is traced out first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Order {
    /// Left-twisted trace along `M`, giving `⟨N⟩ → ⟨N⟩`.
    MFirst,
    /// Right-twisted trace along `N`, giving `⟨M⟩ → ⟨M⟩`.
    NFirst,
}

/// `None` when A is 2-dualizable, otherwise the name of the failed witness.
/// Memoized per algebra; an entry keeps its algebra alive.
pub fn two_dualizability_failure(a: &Algebra) -> Result<Option<String>> {
    type Cache = Mutex<HashMap<usize, (Algebra, Option<String>)>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some((_, f)) = cache.lock().unwrap().get(&a.address()) {
        return Ok(f.clone());
    }
    // only the right duals of C and E decide the verdict, so the triangle
    // 2-cells of the full witness are not built here
    let has_right_dual = |m: &Bimodule| match right_dual(m) {
        Ok(_) => Ok(true),
        Err(Error::NotDualizable(_)) => Ok(false),
        Err(e) => Err(e),
    };
    let failure = if !has_right_dual(&witness_c(a))? {
        Some("C has no right dual (algebra is not separable)".to_string())
    } else if !has_right_dual(&witness_e(a))? {
        Some("E has no right dual".to_string())
    } else {
        None
    };
    let mut c = cache.lock().unwrap();
    if c.len() >= 256 {
        c.clear();
    }
    c.insert(a.address(), (a.clone(), failure.clone()));
    Ok(failure)
}

pub(crate) fn require_two_dualizable(a: &Algebra) -> Result<()> {
    match two_dualizability_failure(a)? {
        None => Ok(()),
        Some(w) => Err(Error::Refused(format!("{} is not 2-dualizable: {w}", a.name()))),
    }
}

/// Scalar trace of `φ: M ⊙ N → N ⊙ M` traced along one factor, then the other.
/// `left_pair` is a left-dual pair `(L, M)`, `right_pair` a dual pair `(N, N*)`.
pub fn iterated_trace(phi: &Twist, left_pair: &DualPair, right_pair: &DualPair, order: Order) -> Result<Scalar> {
    let a = phi.source.left.left();
    require_two_dualizable(a)?;
    match order {
        Order::MFirst => scalar_trace(&left_twisted_trace(phi, left_pair)?),
        Order::NFirst => scalar_trace(&twisted_trace(phi, right_pair)?),
    }
}

/// Pass, fail, or refused because a precondition of the theorem does not hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Refused,
}

/// Outcome of one theorem check. `left` and `right` are the two sides,
/// rendered exactly; the verdict is `Pass` iff they are equal entry by entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub instance: String,
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub verdict: Verdict,
    /// First disagreement on failure, or the reason for a refusal.
    pub witness: Option<String>,
    pub notes: Vec<String>,
}

impl TheoremReport {
    pub(crate) fn compare(theorem: &str, instance: String, left: Vec<String>, right: Vec<String>) -> TheoremReport {
        let witness = if left.len() != right.len() {
            Some(format!("{} values against {}", left.len(), right.len()))
        } else {
            left.iter()
                .zip(&right)
                .enumerate()
                .find(|(_, (l, r))| l != r)
                .map(|(i, (l, r))| format!("entry {i}: {l} vs {r}"))
        };
        let verdict = if witness.is_none() { Verdict::Pass } else { Verdict::Fail };
        TheoremReport { theorem: theorem.into(), instance, left, right, verdict, witness, notes: vec![] }
    }

    pub(crate) fn compare_matrices(theorem: &str, instance: String, left: &Matrix, right: &Matrix) -> TheoremReport {
        let mut r = TheoremReport::compare(theorem, instance, entries(left), entries(right));
        if left.rows() != right.rows() || left.cols() != right.cols() {
            r.verdict = Verdict::Fail;
            r.witness = Some(format!(
                "shapes {}x{} vs {}x{}",
                left.rows(),
                left.cols(),
                right.rows(),
                right.cols()
            ));
        } else if let Some(w) = left.first_difference(right) {
            r.witness = Some(w.to_string());
        }
        r
    }

    /// A refusal carrying the reason.
    pub fn refused(theorem: &str, instance: String, reason: String) -> TheoremReport {
        TheoremReport {
            theorem: theorem.into(),
            instance,
            left: vec![],
            right: vec![],
            verdict: Verdict::Refused,
            witness: Some(reason),
            notes: vec![],
        }
    }

    /// Turns a `Refused` error into a refusal report and passes other results through.
    pub(crate) fn or_refused(theorem: &str, instance: &str, r: Result<TheoremReport>) -> Result<TheoremReport> {
        match r {
            Err(Error::Refused(why)) => Ok(TheoremReport::refused(theorem, instance.into(), why)),
            other => other,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub(crate) fn note(mut self, n: impl Into<String>) -> TheoremReport {
        self.notes.push(n.into());
        self
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Refused => "SKIP",
        };
        write!(f, "{v} {} [{}]", self.theorem, self.instance)?;
        if let Some(w) = &self.witness {
            write!(f, ": {w}")?;
        }
        Ok(())
    }
}

fn entries(m: &Matrix) -> Vec<String> {
    m.entries().iter().map(ToString::to_string).collect()
}

/// Seeded instance `(M, N, φ: M ⊙ N → N ⊙ M)` over `a`.
pub fn random_commuting_twist(a: &Algebra, seed: u64) -> Result<Twist> {
    let m = random_bimodule(a, a, 2 * seed, RandomSpec::default())?;
    let n = random_bimodule(a, a, 2 * seed + 1, RandomSpec::default())?;
    let mn = tensor_over(&m, &n)?;
    let nm = tensor_over(&n, &m)?;
    let map = random_bimodule_map(&mn.result, &nm.result, seed)?;
    Ok(Twist { source: mn, target: nm, map })
}

/// Both iteration orders agree on seeded random `φ: M ⊙ N → N ⊙ M`.
pub fn check_main_theorem(a: &Algebra, seeds: &[u64]) -> Result<TheoremReport> {
    const NAME: &str = "main_theorem";
    let instance = format!("{} seeds {:?}", a.name(), seeds);
    let run = || -> Result<TheoremReport> {
        require_two_dualizable(a)?;
        let (mut left, mut right) = (vec![], vec![]);
        for &s in seeds {
            let t = random_commuting_twist(a, s)?;
            let lp = left_dual(&t.source.left)?;
            let rp = right_dual(&t.source.right)?;
            left.push(iterated_trace(&t, &lp, &rp, Order::MFirst)?.to_string());
            right.push(iterated_trace(&t, &lp, &rp, Order::NFirst)?.to_string());
        }
        let mut r = TheoremReport::compare(NAME, instance.clone(), left, right);
        if let Some(w) = &mut r.witness {
            let i: usize = w.split(':').next().and_then(|e| e.trim_start_matches("entry ").parse().ok()).unwrap_or(0);
            *w = format!("seed {}: {w}", seeds.get(i).copied().unwrap_or_default());
        }
        Ok(r)
    };
    TheoremReport::or_refused(NAME, &instance, run())
}

/// The pasted twist `Q₁⊙(M₁⊙M₂) → (M₁⊙M₂)⊙Q₃` of `f₁: Q₁⊙M₁ → M₁⊙Q₂` and
/// `f₂: Q₂⊙M₂ → M₂⊙Q₃`.
pub fn paste(f1: &Twist, f2: &Twist) -> Result<Twist> {
    let (q1, m1, q2) = (&f1.source.left, &f1.source.right, &f1.target.right);
    let (m2, q3) = (&f2.source.right, &f2.target.right);
    if !f2.source.left.same_as(q2) || !f1.target.left.same_as(m1) || !f2.target.left.same_as(m2) {
        return Err(Error::Dimension("twists do not chain".into()));
    }
    let m12 = tensor_over(m1, m2)?;
    let q1_m12 = tensor_over(q1, &m12.result)?;
    let q1m1_m2 = tensor_over(&f1.source.result, m2)?;
    let m1q2_m2 = tensor_over(&f1.target.result, m2)?;
    let m1_q2m2 = tensor_over(m1, &f2.source.result)?;
    let m1_m2q3 = tensor_over(m1, &f2.target.result)?;
    let m12_q3 = tensor_over(&m12.result, q3)?;
    let map = compose_all(&[
        associator_inverse(&f1.source, &q1m1_m2, &m12, &q1_m12),
        tensor_maps(&f1.map, &identity(m2), &q1m1_m2, &m1q2_m2)?,
        associator(&f1.target, &m1q2_m2, &f2.source, &m1_q2m2),
        tensor_maps(&identity(m1), &f2.map, &m1_q2m2, &m1_m2q3)?,
        associator_inverse(&m12, &m12_q3, &f2.target, &m1_m2q3),
    ])?;
    Ok(Twist { source: q1_m12, target: m12_q3, map })
}

/// The trace of the pasted twist along `M₁ ⊙ M₂` equals `tr(f₂) ∘ tr(f₁)`.
/// The composite is dualized directly, which is valid because traces do not
/// depend on the choice of duality data.
pub fn check_composite(f1: &Twist, pair1: &DualPair, f2: &Twist, pair2: &DualPair) -> Result<TheoremReport> {
    let pasted = paste(f1, f2)?;
    let pair = right_dual(&pasted.source.right)?;
    let lhs = twisted_trace(&pasted, &pair)?;
    let rhs = twisted_trace(f1, pair1)?.then(&twisted_trace(f2, pair2)?)?;
    let instance = format!("{} then {}", pair1.m.name(), pair2.m.name());
    Ok(TheoremReport::compare_matrices("composite", instance, &lhs.matrix, &rhs.matrix))
}

/// `χ(M₁ ⊙ M₂) = χ(M₂) ∘ χ(M₁)`.
pub fn check_composite_euler(m1: &Bimodule, m2: &Bimodule) -> Result<TheoremReport> {
    let m12 = tensor_over(m1, m2)?;
    let lhs = euler_char(&right_dual(&m12.result)?)?;
    let rhs = euler_char(&right_dual(m1)?)?.then(&euler_char(&right_dual(m2)?)?)?;
    let instance = format!("{} then {}", m1.name(), m2.name());
    Ok(TheoremReport::compare_matrices("composite_euler", instance, &lhs.matrix, &rhs.matrix))
}

/// The right trace of `φ` equals the left trace of its mate.
pub fn check_mate(t: &Twist, pair: &DualPair) -> Result<TheoremReport> {
    let mated = mate(&t.map, &t.source, &t.target, pair)?;
    let source = tensor_over(&pair.n, &t.source.left)?;
    let target = tensor_over(&t.target.right, &pair.n)?;
    let star = Twist { source, target, map: mated };
    let lhs = twisted_trace(t, pair)?;
    let rhs = left_twisted_trace(&star, pair)?;
    Ok(TheoremReport::compare_matrices("mate", pair.m.name().to_string(), &lhs.matrix, &rhs.matrix))
}

/// Whether the Euler characteristic of a representation reads off `χ_V(g)` or
/// `χ_V(g⁻¹)` on the class of `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CharacterConvention {
    Direct,
    Inverse,
}

impl fmt::Display for CharacterConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CharacterConvention::Direct => "[g] -> chi(g)",
            CharacterConvention::Inverse => "[g] -> chi(g^-1)",
        })
    }
}

/// Value of a map out of `⟨k[G]⟩` on the class of each group element.
pub fn class_values(f: &TraceMap) -> Vec<Scalar> {
    let s = &f.source;
    (0..s.source.dim())
        .map(|g| {
            let v = f.matrix.mul_vec(&s.projection.column(g));
            v.first().cloned().unwrap_or_else(|| s.source.field().zero())
        })
        .collect()
}

/// Determined once by computing χ of `C₃ → F₇^×, g ↦ 2`: the two conventions
/// give 2 and 4 on the generator.
pub fn character_convention() -> Result<CharacterConvention> {
    static CONVENTION: OnceLock<CharacterConvention> = OnceLock::new();
    if let Some(c) = CONVENTION.get() {
        return Ok(*c);
    }
    let f = Field::prime(7)?;
    let c3 = Group::cyclic(3);
    let a = group_algebra(f, &c3);
    let mats = (0..3).map(|g| Matrix::new(f, 1, 1, vec![f.from_i64([1, 2, 4][g])]).expect("1x1")).collect();
    let v = left_module("chi2", &a, mats)?;
    let values = class_values(&euler_char(&right_dual(&v)?)?);
    let c = if values[1] == f.from_i64(2) {
        CharacterConvention::Direct
    } else if values[1] == f.from_i64(4) {
        CharacterConvention::Inverse
    } else {
        return Err(Error::Internal(format!("character of C3 gives {}", values[1])));
    };
    Ok(*CONVENTION.get_or_init(|| c))
}

/// Frobenius formula `Ind χ(g) = |H|⁻¹ Σ_{x : x⁻¹gx ∈ H} χ(x⁻¹gx)`.
pub fn induced_character(g: &Group, embed: &[usize], chi: &[Scalar], field: Field) -> Result<Vec<Scalar>> {
    let inv_h = field.fraction(1, embed.len() as i64)?;
    Ok((0..g.order())
        .map(|x| {
            let mut sum = field.zero();
            for y in 0..g.order() {
                let conj = g.mul(g.mul(g.inverse(y), x), y);
                if let Some(h) = embed.iter().position(|&e| e == conj) {
                    sum = &sum + &chi[h];
                }
            }
            &sum * &inv_h
        })
        .collect())
}

/// Induction along `H ⊆ G`: `χ(k[G] ⊙ V) = χ(V) ∘ χ(k[G])`, and the left side
/// matches the Frobenius formula under the detected character convention.
/// `embed[h]` is the image of `h` in `G`; `rep[h]` is the action of `h` on `V`.
pub fn check_induction(field: Field, g: &Group, h: &Group, embed: &[usize], rep: &[Matrix]) -> Result<TheoremReport> {
    const NAME: &str = "induction";
    let instance = format!("Ind from {} to {}", h.name(), g.name());
    if field.characteristic() != 0 && (g.order() as u64).is_multiple_of(field.characteristic()) {
        return Ok(TheoremReport::refused(
            NAME,
            instance,
            format!("characteristic {} divides |{}| = {}", field.characteristic(), g.name(), g.order()),
        ));
    }
    if !g.is_subgroup(embed) || embed.len() != h.order() {
        return Err(Error::NotHomomorphism("embedding is not onto a subgroup".into()));
    }
    for x in 0..h.order() {
        for y in 0..h.order() {
            if embed[h.mul(x, y)] != g.mul(embed[x], embed[y]) {
                return Err(Error::NotHomomorphism(format!("embedding fails on {x} * {y}")));
            }
        }
    }
    let kg = group_algebra(field, g);
    let kh = group_algebra(field, h);
    let cols: Vec<Vec<Scalar>> = embed.iter().map(|&e| kg.basis(e)).collect();
    let hom = Matrix::from_columns(field, kg.dim(), &cols);
    let restrict = base_change(&kh, &kg, &hom)?;
    let v = left_module("V", &kh, rep.to_vec())?;
    let ind = tensor_over(&restrict, &v)?;
    let lhs = euler_char(&right_dual(&ind.result)?)?;
    let rhs = euler_char(&right_dual(&restrict)?)?.then(&euler_char(&right_dual(&v)?)?)?;
    let report = TheoremReport::compare_matrices(NAME, instance, &lhs.matrix, &rhs.matrix);
    let convention = character_convention()?;
    let chi: Vec<Scalar> = rep.iter().map(Matrix::trace).collect();
    let oracle = induced_character(g, embed, &chi, field)?;
    let values = class_values(&lhs);
    let mismatch = (0..g.order()).find(|&x| {
        let y = if convention == CharacterConvention::Direct { x } else { g.inverse(x) };
        values[x] != oracle[y]
    });
    let mut report = report.note(format!("convention {convention}"));
    report = report.note(format!(
        "Frobenius oracle {}",
        oracle.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
    ));
    if let Some(x) = mismatch {
        report.verdict = Verdict::Fail;
        report.witness = Some(format!("element {x}: trace gives {}, Frobenius formula {}", values[x], oracle[x]));
    }
    Ok(report)
}

/// `Σ(−1)^i dim HH_i(A; M)` against the scalar trace of `χ(M)` on `⟨U_A⟩`.
pub fn check_lunts(a: &Algebra, m: &Bimodule, n_max: usize) -> Result<TheoremReport> {
    const NAME: &str = "lunts";
    let instance = format!("{} with {} up to degree {n_max}", a.name(), m.name());
    if !a.is_separable() {
        return Ok(TheoremReport::refused(
            NAME,
            instance,
            format!("{} is not separable; trace theorems are only checked for strict 2-dualizable algebras", a.name()),
        ));
    }
    let run = || -> Result<TheoremReport> {
        let e = graded_euler(a, m, n_max)?;
        let chi = euler_char(&right_dual(m)?)?;
        let tr = scalar_trace(&chi)?;
        let report = TheoremReport::compare(NAME, instance.clone(), vec![a.field().from_i64(e.value).to_string()], vec![tr.to_string()]);
        Ok(report.note(format!("HH dims {:?}, stabilized {}", e.dims, e.stabilized)))
    };
    TheoremReport::or_refused(NAME, &instance, run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ground, matrix_algebra, product_algebra};
    use crate::bimodule::random_bimodule;

    const Q: Field = Field::Rationals;

    fn vector_space(n: usize) -> Bimodule {
        let k = ground(Q);
        Bimodule::new(format!("k^{n}"), &k, &k, vec![Matrix::identity(Q, n)], vec![Matrix::identity(Q, n)]).unwrap()
    }

    #[test]
    fn dimension_is_a_trace() {
        for n in 1..=5 {
            let chi = euler_char(&right_dual(&vector_space(n)).unwrap()).unwrap();
            assert_eq!(scalar_trace(&chi).unwrap(), Q.from_i64(n as i64));
        }
    }

    #[test]
    fn unit_has_identity_character() {
        for a in [product_algebra(Q, 2), matrix_algebra(Q, 2)] {
            let chi = euler_char(&right_dual(&unit_bimodule(&a)).unwrap()).unwrap();
            assert!(chi.matrix.is_identity());
        }
    }

    #[test]
    fn canonical_twist_gives_the_euler_characteristic() {
        let a = product_algebra(Q, 2);
        let m = random_bimodule(&a, &a, 7, RandomSpec::default()).unwrap();
        let pair = right_dual(&m).unwrap();
        let t = Twist::canonical(&m).unwrap();
        assert_eq!(twisted_trace(&t, &pair).unwrap().matrix, euler_char(&pair).unwrap().matrix);
    }

    #[test]
    fn scalar_traces() {
        let s = hh0(&unit_bimodule(&product_algebra(Q, 2))).unwrap();
        let f = |m: Matrix| TraceMap { source: s.clone(), target: s.clone(), matrix: m };
        assert_eq!(scalar_trace(&f(Matrix::from_i64(Q, &[vec![2, 0], vec![0, 3]]))).unwrap(), Q.from_i64(5));
        assert_eq!(scalar_trace(&f(Matrix::from_i64(Q, &[vec![0, 1], vec![0, 0]]))).unwrap(), Q.zero());
        let t = hh0(&unit_bimodule(&ground(Q))).unwrap();
        let g = TraceMap { source: s.clone(), target: t, matrix: Matrix::zeros(Q, 1, 2) };
        assert!(scalar_trace(&g).is_err());
    }

    #[test]
    fn iterated_trace_of_identity_and_unitor() {
        let a = product_algebra(Q, 2);
        let u = unit_bimodule(&a);
        let uu = tensor_over(&u, &u).unwrap();
        let t = Twist { source: uu.clone(), target: uu.clone(), map: BimoduleMap::identity(&uu.result) };
        let (lp, rp) = (left_dual(&u).unwrap(), right_dual(&u).unwrap());
        for o in [Order::MFirst, Order::NFirst] {
            assert_eq!(iterated_trace(&t, &lp, &rp, o).unwrap(), Q.from_i64(2));
        }
        let m2 = matrix_algebra(Q, 2);
        let u = unit_bimodule(&m2);
        let uu = tensor_over(&u, &u).unwrap();
        let t = Twist { source: uu.clone(), target: uu.clone(), map: BimoduleMap::identity(&uu.result) };
        let (lp, rp) = (left_dual(&u).unwrap(), right_dual(&u).unwrap());
        for o in [Order::MFirst, Order::NFirst] {
            assert_eq!(iterated_trace(&t, &lp, &rp, o).unwrap(), Q.one());
        }
    }

    #[test]
    fn main_theorem_small() {
        assert!(check_main_theorem(&product_algebra(Q, 2), &[0, 1, 2]).unwrap().passed());
        assert!(check_main_theorem(&ground(Q), &[0]).unwrap().passed());
        let dual = crate::algebra::truncated_polynomial(Q, 2);
        assert_eq!(check_main_theorem(&dual, &[0]).unwrap().verdict, Verdict::Refused);
    }

    #[test]
    fn mate_over_the_ground_field() {
        let v = vector_space(2);
        let x = Matrix::from_i64(Q, &[vec![1, 2], vec![3, 4]]);
        let canonical = Twist::canonical(&v).unwrap();
        let map = &right_unitor_inverse(&canonical.target).matrix * &(&x * &left_unitor(&canonical.source).matrix);
        let t = Twist { map: BimoduleMap::new(&canonical.source.result, &canonical.target.result, map).unwrap(), ..canonical };
        let r = check_mate(&t, &right_dual(&v).unwrap()).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.left, vec!["5".to_string()]);
    }

    #[test]
    fn character_convention_is_stable() {
        let c = character_convention().unwrap();
        assert_eq!(character_convention().unwrap(), c);
    }
}
