//! The four penumbra functors of a separable algebra and their structure maps,
//! built from the dualizability witnesses C, E and their right duals.
//!
//! Write `B = A ⊗ A^op`. A (k, B)- or (B, k)-bimodule is the same thing as an
//! (A, A)-bimodule, and under that dictionary `X ⊙ (M ⊠ U) ⊙ Y` is the zeroth
//! Hochschild homology of `X ⊙ M ⊙ Y` over A. C and E become `U_A` and drop
//! out, so with `Č`, `Ě` the right duals of C and E:
//!
//! * `sh(M)  = HH₀(M)`,       from `C ⊙ M ⊙ E`
//! * `csh(M) = HH₀(M ⊙ Č)`,   from `C ⊙ M ⊙ Č`
//! * `dsh(M) = HH₀(Ě ⊙ M ⊙ Č)`, from `Ě ⊙ M ⊙ Č`
//! * `esh(M) = HH₀(Ě ⊙ M)`,   from `Ě ⊙ M ⊙ E`
//!
//! Elements are cyclic words with one letter per factor. Splitting maps insert
//! the coevaluation of `(E, Ě)` and cut a word in two; the other splitting maps
//! join two words with the evaluation of `(C, Č)`. E is used with its two
//! tensor factors swapped so that both witnesses live over the same `B`.

mod checks;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{ground, kron_vec, Algebra};
use crate::bimodule::{external_tensor, tensor_over, unit_bimodule, Bimodule, BimoduleMap, TensorWitness};
use crate::duality::{one_dualizability_witness, right_dual, DualPair, DualizabilityWitness};
use crate::error::{Error, Result};
use crate::exactlin::{inverse, Field, Matrix, Scalar};
use crate::shadow::{hh0, ShadowSpace};

pub use checks::{check_penumbra_axioms, check_penumbra_dual, check_umbra_square, twisting_map};

/// Which of the four functors: `Sh = C(−)E`, `Dsh = Ě(−)Č`, `Csh = C(−)Č`, `Esh = Ě(−)E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Functor {
    Sh,
    Dsh,
    Csh,
    Esh,
}

impl Functor {
    /// Starts with an `Ě` letter.
    fn opens_dual(self) -> bool {
        matches!(self, Functor::Dsh | Functor::Esh)
    }

    /// Ends with a `Č` letter.
    fn closes_dual(self) -> bool {
        matches!(self, Functor::Dsh | Functor::Csh)
    }

    fn from_ends(opens_dual: bool, closes_dual: bool) -> Functor {
        match (opens_dual, closes_dual) {
            (false, false) => Functor::Sh,
            (true, true) => Functor::Dsh,
            (false, true) => Functor::Csh,
            (true, false) => Functor::Esh,
        }
    }
}

/// One letter vector per factor of a cyclic word.
type Word = Vec<Vec<Scalar>>;
/// A sum of pure tensors across several output values.
type Terms = Vec<(Scalar, Vec<Word>)>;

/// A functor applied to a composable chain `M₁ ⊙ … ⊙ M_r`, as a quotient of the
/// tensor product of its letters.
#[derive(Clone, Debug)]
pub struct Value {
    pub functor: Functor,
    pub chain: Vec<Bimodule>,
    letters: Vec<Bimodule>,
    /// Left-nested products: `steps[k]` is `(L₀ ⊙ … ⊙ L_k) ⊙ L_{k+1}`.
    steps: Vec<TensorWitness>,
    shadow: ShadowSpace,
    /// Each basis vector as a sum of pure tensors of letter basis vectors.
    expansions: Vec<Vec<(Scalar, Vec<usize>)>>,
}

impl Value {
    pub fn dim(&self) -> usize {
        self.shadow.dim
    }

    /// Offset of the first chain letter.
    fn offset(&self) -> usize {
        usize::from(self.functor.opens_dual())
    }

    fn project(&self, word: &[Vec<Scalar>]) -> Vec<Scalar> {
        let mut z = word[0].clone();
        for (tw, v) in self.steps.iter().zip(&word[1..]) {
            z = tw.projection.mul_vec(&kron_vec(&z, v));
        }
        self.shadow.projection.mul_vec(&z)
    }

    fn expand(&self, i: usize) -> Vec<(Scalar, Vec<usize>)> {
        let top = self.shadow.section.column(i);
        let mut terms: Vec<(Scalar, Vec<usize>)> =
            top.into_iter().enumerate().filter(|(_, s)| !s.is_zero()).map(|(j, s)| (s, vec![j])).collect();
        for k in (0..self.steps.len()).rev() {
            let tw = &self.steps[k];
            let width = self.letters[k + 1].dim();
            let mut next: HashMap<Vec<usize>, Scalar> = HashMap::new();
            for (s, key) in &terms {
                for (amb, v) in tw.section.column(key[0]).iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    let mut k2 = Vec::with_capacity(key.len() + 1);
                    k2.push(amb / width);
                    k2.push(amb % width);
                    k2.extend_from_slice(&key[1..]);
                    let c = s * v;
                    match next.get_mut(&k2) {
                        Some(acc) => *acc = &*acc + &c,
                        None => {
                            next.insert(k2, c);
                        }
                    }
                }
            }
            let mut sorted: Vec<(Scalar, Vec<usize>)> =
                next.into_iter().filter(|(_, s)| !s.is_zero()).map(|(k, s)| (s, k)).collect();
            sorted.sort_by(|a, b| a.1.cmp(&b.1));
            terms = sorted;
        }
        terms
    }
}

fn unit_vector(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[i] = field.one();
    v
}

/// The umbra of a separable algebra: witnesses, dual pairs, and the letters
/// and elements that the structure maps are built from.
#[derive(Debug)]
pub struct UmbraData {
    pub algebra: Algebra,
    pub witness: DualizabilityWitness,
    /// E with its tensor factors swapped, over (A ⊗ A^op, k).
    pub e_swapped: Bimodule,
    /// `(C, Č)` and `(E, Ě)` over `A ⊗ A^op`.
    pub c_pair: DualPair,
    pub e_pair: DualPair,
    /// `Č` and `Ě` as (A, A)-bimodules.
    pub c_dual: Bimodule,
    pub e_dual: Bimodule,
    /// Coevaluation of `(C, Č)` as terms `s · (u ⊗ w)`, `u ∈ A`, `w ∈ Č`.
    pub coev_c: Vec<(Scalar, usize, usize)>,
    /// Column `w` is `ev(w ⊗ 1) ∈ A ⊗ A^op`, index `α · n + β` for `e_α ⊗ e_β°`.
    pub ev_c: Matrix,
    /// Coevaluation of `(E, Ě)` at `1` as terms `s · (y ⊗ z)`, `y ∈ A`, `z ∈ Ě`.
    pub coev_e: Vec<(Scalar, usize, usize)>,
    /// `ev(z ⊗ y)` at column `z · n + y`.
    pub ev_e: Matrix,
    /// `ψ: Č ⊙ Ě → U_A` on `Č ⊗ Ě` (column `w · dim Ě + z`), contracted from the two evaluations.
    pub psi: Matrix,
    /// `ψ⁻¹(1)` as terms `s · (w ⊗ z)`.
    pub tau: Vec<(Scalar, usize, usize)>,
    values: Mutex<HashMap<(Functor, Vec<usize>), Arc<Value>>>,
}

/// `E` over (A ⊗ A^op, k) with `(a ⊗ b°)·x = a x b`.
fn swapped_e(a: &Algebra) -> Bimodule {
    let n = a.dim();
    let lambda = (0..n * n).map(|ij| a.left_matrix(ij / n) * a.right_matrix(ij % n)).collect();
    Bimodule::new_unchecked(
        format!("E'({})", a.name()),
        &a.enveloping(),
        &ground(a.field()),
        lambda,
        vec![Matrix::identity(a.field(), n)],
    )
    .expect("E shape")
}

/// A (B, k)-bimodule `Y` as the (A, A)-bimodule `a·y·a' = (a ⊗ a'°)·y`.
fn from_left_action(y: &Bimodule, a: &Algebra) -> Result<Bimodule> {
    let n = a.dim();
    let one = a.unit();
    let lambda = (0..n).map(|i| y.act_left(&kron_vec(&a.basis(i), one))).collect();
    let rho = (0..n).map(|i| y.act_left(&kron_vec(one, &a.basis(i)))).collect();
    Bimodule::new(y.name(), a, a, lambda, rho)
}

/// A (k, B)-bimodule `X` as the (A, A)-bimodule `a'·x·a = x·(a ⊗ a'°)`.
fn from_right_action(x: &Bimodule, a: &Algebra) -> Result<Bimodule> {
    let n = a.dim();
    let one = a.unit();
    let lambda = (0..n).map(|i| x.act_right(&kron_vec(one, &a.basis(i)))).collect();
    let rho = (0..n).map(|i| x.act_right(&kron_vec(&a.basis(i), one))).collect();
    Bimodule::new(x.name(), a, a, lambda, rho)
}

/// Nonzero entries of a vector of `left ⊗ right`, as `(s, i, j)`.
fn pure_terms(v: &[Scalar], right_dim: usize) -> Vec<(Scalar, usize, usize)> {
    v.iter()
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(k, s)| (s.clone(), k / right_dim, k % right_dim))
        .collect()
}

/// Refuses unless C and E have right duals, which holds exactly for separable algebras.
fn dual_or_refuse(m: &Bimodule, a: &Algebra) -> Result<DualPair> {
    right_dual(m).map_err(|e| match e {
        Error::NotDualizable(_) => {
            Error::Refused(format!("{} is not 2-dualizable: {} has no right dual", a.name(), m.name()))
        }
        other => other,
    })
}

/// Builds the umbra of `a`. Memoized per algebra; refuses non-separable algebras.
pub fn build_umbra(a: &Algebra) -> Result<Arc<UmbraData>> {
    type Cache = Mutex<HashMap<usize, (Algebra, Arc<UmbraData>)>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some((_, u)) = cache.lock().unwrap().get(&a.address()) {
        return Ok(u.clone());
    }
    let u = Arc::new(compute_umbra(a)?);
    let mut c = cache.lock().unwrap();
    if c.len() >= 64 {
        c.clear();
    }
    c.insert(a.address(), (a.clone(), u.clone()));
    Ok(u)
}

fn compute_umbra(a: &Algebra) -> Result<UmbraData> {
    let field = a.field();
    let n = a.dim();
    let witness = one_dualizability_witness(a)?;
    let e_swapped = swapped_e(a);
    let c_pair = dual_or_refuse(&witness.c, a)?;
    let e_pair = dual_or_refuse(&e_swapped, a)?;
    let c_dual = from_left_action(&c_pair.n, a)?.renamed(format!("C*({})", a.name()));
    let e_dual = from_right_action(&e_pair.n, a)?.renamed(format!("E*({})", a.name()));
    let (dc, de) = (c_dual.dim(), e_dual.dim());

    let t_c = c_pair.mn.section.mul_vec(&c_pair.coev.matrix.column(0));
    let coev_c = pure_terms(&t_c, dc);
    let ev_cols: Vec<Vec<Scalar>> = (0..dc)
        .map(|w| c_pair.ev.matrix.mul_vec(&c_pair.nm.pure_tensor(&unit_vector(field, dc, w), a.unit())))
        .collect();
    let ev_c = Matrix::from_columns(field, n * n, &ev_cols);

    let unit_b = kron_vec(a.unit(), a.unit());
    let t_e = e_pair.mn.section.mul_vec(&e_pair.coev.matrix.mul_vec(&unit_b));
    let coev_e = pure_terms(&t_e, de);
    let mut ev_e = Matrix::zeros(field, 1, de * n);
    for z in 0..de {
        for y in 0..n {
            let v = e_pair.nm.pure_tensor(&unit_vector(field, de, z), &unit_vector(field, n, y));
            ev_e.set(0, z * n + y, e_pair.ev.matrix.mul_vec(&v)[0].clone());
        }
    }

    // ψ(w ⊗ z) = Σ α · ev(z ⊗ β) over ev(w ⊗ 1) = Σ α ⊗ β°
    let mut psi = Matrix::zeros(field, n, dc * de);
    for w in 0..dc {
        for (idx, s) in ev_c.column(w).iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let (alpha, beta) = (idx / n, idx % n);
            for z in 0..de {
                let l = ev_e.get(0, z * n + beta);
                if !l.is_zero() {
                    let cur = psi.get(alpha, w * de + z).clone();
                    psi.set(alpha, w * de + z, &cur + &(s * l));
                }
            }
        }
    }
    let tw = tensor_over(&c_dual, &e_dual)?;
    let descended = &psi * &tw.section;
    if (&descended * &tw.projection).first_difference(&psi).is_some() {
        return Err(Error::Internal("ψ does not descend to C* ⊙ E*".into()));
    }
    let ua = unit_bimodule(a);
    let psi_map = BimoduleMap::new(&tw.result, &ua, descended)
        .map_err(|e| Error::Internal(format!("ψ is not a bimodule map: {e}")))?;
    let inv = inverse(&psi_map.matrix).ok_or_else(|| Error::Internal("ψ is not invertible".into()))?;
    let tau = pure_terms(&tw.section.mul_vec(&inv.mul_vec(a.unit())), de);

    Ok(UmbraData {
        algebra: a.clone(),
        witness,
        e_swapped,
        c_pair,
        e_pair,
        c_dual,
        e_dual,
        coev_c,
        ev_c,
        coev_e,
        ev_e,
        psi,
        tau,
        values: Mutex::new(HashMap::new()),
    })
}

impl UmbraData {
    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn unit(&self) -> Bimodule {
        unit_bimodule(&self.algebra)
    }

    /// `f(M₁ ⊙ … ⊙ M_r)` for a nonempty chain of (A, A)-bimodules.
    pub fn value(&self, f: Functor, chain: &[Bimodule]) -> Result<Arc<Value>> {
        if chain.is_empty() {
            return Err(Error::Dimension("empty chain".into()));
        }
        for m in chain {
            if !m.left().same_as(&self.algebra) || !m.right().same_as(&self.algebra) {
                return Err(Error::AlgebraMismatch(format!("{} is not over {}", m.name(), self.algebra.name())));
            }
        }
        let key = (f, chain.iter().map(Bimodule::address).collect::<Vec<_>>());
        if let Some(v) = self.values.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let mut letters = Vec::with_capacity(chain.len() + 2);
        if f.opens_dual() {
            letters.push(self.e_dual.clone());
        }
        letters.extend(chain.iter().cloned());
        if f.closes_dual() {
            letters.push(self.c_dual.clone());
        }
        let mut steps = Vec::with_capacity(letters.len() - 1);
        let mut z = letters[0].clone();
        for l in &letters[1..] {
            let tw = tensor_over(&z, l)?;
            z = tw.result.clone();
            steps.push(tw);
        }
        let shadow = hh0(&z)?;
        let mut v = Value { functor: f, chain: chain.to_vec(), letters, steps, shadow, expansions: vec![] };
        v.expansions = (0..v.dim()).map(|i| v.expand(i)).collect();
        let v = Arc::new(v);
        self.values.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    pub fn dim(&self, f: Functor, chain: &[Bimodule]) -> Result<usize> {
        Ok(self.value(f, chain)?.dim())
    }

    /// Matrix of the map `⊗ inputs → ⊗ outputs` given on pure tensors of letters.
    /// Bases of tensor products are Kronecker ordered; no values means `I`.
    fn assemble(&self, inputs: &[&Value], outputs: &[&Value], f: impl Fn(&[Word]) -> Terms) -> Matrix {
        let field = self.field();
        let rows: usize = outputs.iter().map(|v| v.dim()).product();
        let cols: usize = inputs.iter().map(|v| v.dim()).product();
        let mut columns = Vec::with_capacity(cols);
        for c in 0..cols {
            let mut idx = Vec::with_capacity(inputs.len());
            let mut rest = c;
            for v in inputs.iter().rev() {
                idx.push(rest % v.dim());
                rest /= v.dim();
            }
            idx.reverse();
            let mut acc = vec![field.zero(); rows];
            let mut combos: Vec<(Scalar, Vec<Word>)> = vec![(field.one(), vec![])];
            for (v, &i) in inputs.iter().zip(&idx) {
                let mut next = Vec::new();
                for (s, words) in &combos {
                    for (t, letters) in &v.expansions[i] {
                        let word: Word = letters
                            .iter()
                            .zip(&v.letters)
                            .map(|(&l, m)| unit_vector(field, m.dim(), l))
                            .collect();
                        let mut w2 = words.clone();
                        w2.push(word);
                        next.push((s * t, w2));
                    }
                }
                combos = next;
            }
            for (s, words) in &combos {
                for (t, outs) in f(words) {
                    let mut vec = vec![field.one()];
                    for (v, w) in outputs.iter().zip(&outs) {
                        vec = kron_vec(&vec, &v.project(w));
                    }
                    let coef = s * &t;
                    for (a, x) in acc.iter_mut().zip(&vec) {
                        if !x.is_zero() {
                            a.mul_add_assign(&coef, x);
                        }
                    }
                }
            }
            columns.push(acc);
        }
        Matrix::from_columns(field, rows, &columns)
    }

    /// Cuts `f(first ⊙ second)` into `f₁(first) ⊗ f₂(second)` with the E
    /// coevaluation: `spl` for `Csh`, `ruspl` for `Sh`, `luspl` for `Dsh`.
    pub fn split(&self, f: Functor, first: &[Bimodule], second: &[Bimodule]) -> Result<Matrix> {
        let whole: Vec<Bimodule> = first.iter().chain(second).cloned().collect();
        let src = self.value(f, &whole)?;
        let out1 = self.value(Functor::from_ends(f.opens_dual(), false), first)?;
        let out2 = self.value(Functor::from_ends(true, f.closes_dual()), second)?;
        let cut = src.offset() + first.len();
        let field = self.field();
        let de = self.e_dual.dim();
        Ok(self.assemble(&[&src], &[&out1, &out2], |ws| {
            let w = &ws[0];
            self.coev_e
                .iter()
                .map(|(s, y, z)| {
                    let mut left: Word = w[..cut].to_vec();
                    left[cut - 1] = src.letters[cut - 1].rho(*y).mul_vec(&left[cut - 1]);
                    let mut right: Word = vec![unit_vector(field, de, *z)];
                    right.extend_from_slice(&w[cut..]);
                    (s.clone(), vec![left, right])
                })
                .collect()
        }))
    }

    /// Joins `f(first) ⊗ g(second)` into one word with the C evaluation:
    /// `rspl` for `(Dsh, Csh)`, `lspl` for `(Csh, Sh)`, `uspl` for `(Dsh, Sh)`.
    pub fn join(&self, f: Functor, g: Functor, first: &[Bimodule], second: &[Bimodule]) -> Result<Matrix> {
        if !f.closes_dual() || g.opens_dual() {
            return Err(Error::Dimension(format!("cannot join {f:?} with {g:?}")));
        }
        let whole: Vec<Bimodule> = first.iter().chain(second).cloned().collect();
        let in1 = self.value(f, first)?;
        let in2 = self.value(g, second)?;
        let out = self.value(Functor::from_ends(f.opens_dual(), g.closes_dual()), &whole)?;
        let n = self.algebra.dim();
        let last = in1.letters.len() - 2;
        Ok(self.assemble(&[&in1, &in2], &[&out], |ws| {
            let (w1, w2) = (&ws[0], &ws[1]);
            let kappa = self.ev_c.mul_vec(&w1[w1.len() - 1]);
            kappa
                .iter()
                .enumerate()
                .filter(|(_, s)| !s.is_zero())
                .map(|(idx, s)| {
                    let (alpha, beta) = (idx / n, idx % n);
                    let mut word: Word = w1[..w1.len() - 1].to_vec();
                    word.extend(w2.iter().cloned());
                    word[last] = out.letters[last].rho(alpha).mul_vec(&word[last]);
                    word[0] = out.letters[0].lambda(beta).mul_vec(&word[0]);
                    (s.clone(), vec![word])
                })
                .collect()
        }))
    }

    /// `I → csh(U_A)`.
    pub fn iunit(&self) -> Result<Matrix> {
        let out = self.value(Functor::Csh, &[self.unit()])?;
        let (field, n, dc) = (self.field(), self.algebra.dim(), self.c_dual.dim());
        Ok(self.assemble(&[], &[&out], |_| {
            self.coev_c
                .iter()
                .map(|(s, u, w)| (s.clone(), vec![vec![unit_vector(field, n, *u), unit_vector(field, dc, *w)]]))
                .collect()
        }))
    }

    /// `esh(U_A) → I`.
    pub fn ounit(&self) -> Result<Matrix> {
        let src = self.value(Functor::Esh, &[self.unit()])?;
        let field = self.field();
        let n = self.algebra.dim();
        Ok(self.assemble(&[&src], &[], |ws| {
            let (z, u) = (&ws[0][0], &ws[0][1]);
            let mut total = field.zero();
            for (j, zj) in z.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
                for (i, ui) in u.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
                    total = &total + &(&(zj * ui) * self.ev_e.get(0, j * n + i));
                }
            }
            vec![(total, vec![])]
        }))
    }

    /// The shadow isomorphism `f(first ⊙ second) → f(second ⊙ first)` for
    /// `Sh` (the cyclic swap) and `Dsh` (contract the old `Č Ě` pair with ψ,
    /// open a new one with `ψ⁻¹(1)`).
    pub fn theta(&self, f: Functor, first: &[Bimodule], second: &[Bimodule]) -> Result<Matrix> {
        if !matches!(f, Functor::Sh | Functor::Dsh) {
            return Err(Error::Dimension(format!("{f:?} is not a shadow")));
        }
        let fs: Vec<Bimodule> = first.iter().chain(second).cloned().collect();
        let sf: Vec<Bimodule> = second.iter().chain(first).cloned().collect();
        let src = self.value(f, &fs)?;
        let out = self.value(f, &sf)?;
        let (field, dc, de) = (self.field(), self.c_dual.dim(), self.e_dual.dim());
        let o = src.offset();
        let (p, q) = (first.len(), second.len());
        Ok(self.assemble(&[&src], &[&out], |ws| {
            let w = &ws[0];
            let firsts = &w[o..o + p];
            let seconds = &w[o + p..o + p + q];
            if f == Functor::Sh {
                let word: Word = seconds.iter().chain(firsts).cloned().collect();
                return vec![(field.one(), vec![word])];
            }
            let psi = self.psi.mul_vec(&kron_vec(&w[o + p + q], &w[0]));
            let mut moved: Word = seconds.to_vec();
            let last = moved.len() - 1;
            moved[last] = out.letters[o + last].act_right(&psi).mul_vec(&moved[last]);
            self.tau
                .iter()
                .map(|(s, cw, ez)| {
                    let mut word: Word = vec![unit_vector(field, de, *ez)];
                    word.extend(moved.iter().cloned());
                    word.extend(firsts.iter().cloned());
                    word.push(unit_vector(field, dc, *cw));
                    (s.clone(), vec![word])
                })
                .collect()
        }))
    }

    /// Unit isomorphism removing the `U_A` at `pos` of the chain, merged into a neighbour.
    pub fn unitor(&self, f: Functor, chain: &[Bimodule], pos: usize) -> Result<Matrix> {
        if chain.len() < 2 || !chain[pos].same_as(&self.unit()) {
            return Err(Error::Dimension("unitor needs a unit factor and a neighbour".into()));
        }
        let mut rest = chain.to_vec();
        rest.remove(pos);
        let src = self.value(f, chain)?;
        let out = self.value(f, &rest)?;
        let at = src.offset() + pos;
        let into_next = pos + 1 < chain.len();
        Ok(self.assemble(&[&src], &[&out], |ws| {
            let mut word = ws[0].clone();
            let u = word.remove(at);
            if into_next {
                word[at] = src.letters[at + 1].act_left(&u).mul_vec(&word[at]);
            } else {
                word[at - 1] = src.letters[at - 1].act_right(&u).mul_vec(&word[at - 1]);
            }
            vec![(self.field().one(), vec![word])]
        }))
    }

    /// `f` applied to a bimodule map on the chain factor at `pos`.
    pub fn apply(&self, f: Functor, chain: &[Bimodule], pos: usize, map: &BimoduleMap) -> Result<Matrix> {
        if !map.source.same_as(&chain[pos]) {
            return Err(Error::Dimension("map source is not the chain factor".into()));
        }
        let mut target = chain.to_vec();
        target[pos] = map.target.clone();
        let src = self.value(f, chain)?;
        let out = self.value(f, &target)?;
        let at = src.offset() + pos;
        Ok(self.assemble(&[&src], &[&out], |ws| {
            let mut word = ws[0].clone();
            word[at] = map.matrix.mul_vec(&word[at]);
            vec![(self.field().one(), vec![word])]
        }))
    }

    /// `f(η)` for a dual pair `(N, M)`: the unit factor at `pos` becomes `N ⊙ M`.
    pub fn apply_coev(&self, f: Functor, chain: &[Bimodule], pos: usize, pair: &DualPair) -> Result<Matrix> {
        if !chain[pos].same_as(&self.unit()) {
            return Err(Error::Dimension("coevaluation needs a unit factor".into()));
        }
        let mut target = chain[..pos].to_vec();
        target.push(pair.m.clone());
        target.push(pair.n.clone());
        target.extend_from_slice(&chain[pos + 1..]);
        let src = self.value(f, chain)?;
        let out = self.value(f, &target)?;
        let at = src.offset() + pos;
        let (field, dm, dn) = (self.field(), pair.m.dim(), pair.n.dim());
        Ok(self.assemble(&[&src], &[&out], |ws| {
            let w = &ws[0];
            let image = pair.mn.section.mul_vec(&pair.coev.matrix.mul_vec(&w[at]));
            pure_terms(&image, dn)
                .into_iter()
                .map(|(s, i, j)| {
                    let mut word: Word = w[..at].to_vec();
                    word.push(unit_vector(field, dm, i));
                    word.push(unit_vector(field, dn, j));
                    word.extend_from_slice(&w[at + 1..]);
                    (s, vec![word])
                })
                .collect()
        }))
    }

    /// `f(ε)` for a dual pair `(N, M)`: the factors `M, N` at `pos, pos + 1` become `U_A`.
    pub fn apply_ev(&self, f: Functor, chain: &[Bimodule], pos: usize, pair: &DualPair) -> Result<Matrix> {
        if !chain[pos].same_as(&pair.n) || !chain[pos + 1].same_as(&pair.m) {
            return Err(Error::Dimension("evaluation needs the factors M, N".into()));
        }
        let mut target = chain[..pos].to_vec();
        target.push(self.unit());
        target.extend_from_slice(&chain[pos + 2..]);
        let src = self.value(f, chain)?;
        let out = self.value(f, &target)?;
        let at = src.offset() + pos;
        Ok(self.assemble(&[&src], &[&out], |ws| {
            let w = &ws[0];
            let u = pair.ev.matrix.mul_vec(&pair.nm.pure_tensor(&w[at], &w[at + 1]));
            let mut word: Word = w[..at].to_vec();
            word.push(u);
            word.extend_from_slice(&w[at + 2..]);
            vec![(self.field().one(), vec![word])]
        }))
    }

    /// The literal composite `C ⊙ (M ⊠ U_{A^op}) ⊙ E` over `A ⊗ A^op` and the
    /// natural map `HH₀(M) → C ⊙ (M ⊠ U) ⊙ E`, `[m] ↦ 1 ⊗ (m ⊗ 1) ⊗ 1`.
    pub fn shadow_comparison(&self, m: &Bimodule) -> Result<Matrix> {
        let a = &self.algebra;
        let uop = unit_bimodule(&a.opposite());
        let mu = external_tensor(m, &uop)?;
        let first = tensor_over(&self.witness.c, &mu)?;
        let second = tensor_over(&first.result, &self.e_swapped)?;
        let sh = hh0(m)?;
        let cols: Vec<Vec<Scalar>> = (0..sh.dim)
            .map(|i| {
                let v = sh.section.column(i);
                let inner = first.pure_tensor(a.unit(), &kron_vec(&v, a.unit()));
                second.pure_tensor(&inner, a.unit())
            })
            .collect();
        Ok(Matrix::from_columns(self.field(), second.dim(), &cols))
    }

    /// Dimension of the literal composite `Ě ⊙ (M ⊠ U_{A^op}) ⊙ Č`.
    pub fn literal_dual_shadow_dim(&self, m: &Bimodule) -> Result<usize> {
        let uop = unit_bimodule(&self.algebra.opposite());
        let mu = external_tensor(m, &uop)?;
        let first = tensor_over(&self.e_pair.n, &mu)?;
        Ok(tensor_over(&first.result, &self.c_pair.n)?.dim())
    }
}

/// `V ⊗ W → W ⊗ V`.
pub fn symmetry(field: Field, v: usize, w: usize) -> Matrix {
    let mut s = Matrix::zeros(field, v * w, v * w);
    for i in 0..v {
        for j in 0..w {
            s.set(j * v + i, i * w + j, field.one());
        }
    }
    s
}
