//! 2-characters of group actions on separable algebras by automorphisms,
//! the S and T moves on commuting-pair cells, and modular-invariance checks.
//!
//! A cell fills a square with horizontal 1-cell `F` and vertical 1-cell `V`
//! and is a 2-cell `φ: F ⊙ V → V ⊙ F`. Its group shadow is the pair
//! `(g, h)` with `F ≅ A_{α_g}` and `V ≅ A_{α_h}`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Algebra, Group};
use crate::bimodule::{associator_inverse, tensor_maps, tensor_over, Bimodule, BimoduleMap, TensorWitness};
use crate::duality::{compose_all, left_dual, right_dual, unmate};
use crate::error::{Error, Result};
use crate::exactlin::{is_invertible, Matrix, Scalar};
use crate::traces::{iterated_trace, require_two_dualizable, Order, TheoremReport, Twist};

/// A group acting on an algebra by unital automorphisms, `α_g ∘ α_h = α_{gh}`.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub group: Group,
    pub algebra: Algebra,
    /// `α_g` as matrices whose columns are images of basis vectors.
    pub automorphisms: Vec<Matrix>,
    twisted: Vec<Bimodule>,
}

impl GroupAction {
    /// Validates that every `α_g` is an invertible unital homomorphism and
    /// that the composition law holds exactly.
    pub fn new(group: Group, algebra: Algebra, automorphisms: Vec<Matrix>) -> Result<GroupAction> {
        if automorphisms.len() != group.order() {
            return Err(Error::Dimension(format!(
                "{} automorphisms for a group of order {}",
                automorphisms.len(),
                group.order()
            )));
        }
        let twisted = automorphisms
            .iter()
            .enumerate()
            .map(|(g, a)| Ok(twisted_bimodule(&algebra, a)?.renamed(format!("A_{g}"))))
            .collect::<Result<Vec<_>>>()?;
        if !automorphisms[group.identity()].is_identity() {
            return Err(Error::NotHomomorphism("the identity does not act trivially".into()));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                if &automorphisms[g] * &automorphisms[h] != automorphisms[group.mul(g, h)] {
                    return Err(Error::NotHomomorphism(format!("a_{g} a_{h} != a_{}", group.mul(g, h))));
                }
            }
        }
        Ok(GroupAction { group, algebra, automorphisms, twisted })
    }

    /// `G` permuting the coordinates of `k^|G|` by left multiplication.
    pub fn regular(field: crate::exactlin::Field, group: &Group) -> Result<GroupAction> {
        let n = group.order();
        let perms: Vec<Vec<usize>> = (0..n).map(|g| (0..n).map(|x| group.mul(g, x)).collect()).collect();
        GroupAction::permutation(field, group, &perms)
    }

    /// `G` acting on `k^n` by `α_g(e_x) = e_{σ_g(x)}`.
    pub fn permutation(field: crate::exactlin::Field, group: &Group, perms: &[Vec<usize>]) -> Result<GroupAction> {
        let n = perms.first().map_or(0, Vec::len);
        let algebra = crate::algebra::product_algebra(field, n);
        let automorphisms = perms
            .iter()
            .map(|p| {
                let mut m = Matrix::zeros(field, n, n);
                for (x, &y) in p.iter().enumerate() {
                    m.set(y, x, field.one());
                }
                m
            })
            .collect();
        GroupAction::new(group.clone(), algebra, automorphisms)
    }

    /// The twisted bimodule `A_{α_g}`; the same object on every call.
    pub fn twisted(&self, g: usize) -> &Bimodule {
        &self.twisted[g]
    }

    /// Commuting pairs `(g, h)` in lexicographic order.
    pub fn commuting_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.group.order();
        (0..n).flat_map(|g| (0..n).map(move |h| (g, h))).filter(|&(g, h)| self.group.commute(g, h)).collect()
    }
}

/// `A_α`: the regular bimodule with right action twisted, `a · x · b = a x α(b)`.
pub fn twisted_bimodule(a: &Algebra, alpha: &Matrix) -> Result<Bimodule> {
    a.check_homomorphism(a, alpha)?;
    if !is_invertible(alpha) {
        return Err(Error::NotHomomorphism("not invertible, so not an automorphism".into()));
    }
    let lambda = (0..a.dim()).map(|i| a.left_matrix(i).clone()).collect();
    let rho = (0..a.dim()).map(|j| a.right_mult(&alpha.column(j))).collect();
    Bimodule::new(format!("{}_a", a.name()), a, a, lambda, rho)
}

/// The canonical iso `A_{α_g} ⊙ A_{α_h} → A_{α_{gh}}`, `x ⊗ y ↦ x α_g(y)`.
fn multiplication_iso(action: &GroupAction, g: usize, h: usize, tw: &TensorWitness) -> Result<BimoduleMap> {
    let a = &action.algebra;
    let n = a.dim();
    let alpha = &action.automorphisms[g];
    let cols: Vec<Vec<Scalar>> =
        (0..n * n).map(|ij| a.mul(&a.basis(ij / n), &alpha.column(ij % n))).collect();
    let lifted = Matrix::from_columns(a.field(), n, &cols);
    let map = &lifted * &tw.section;
    if &map * &tw.projection != lifted {
        return Err(Error::Internal("multiplication does not descend to the tensor product".into()));
    }
    BimoduleMap::new(&tw.result, action.twisted(action.group.mul(g, h)), map)
}

/// A 2-cell `φ: F ⊙ V → V ⊙ F` between invertible bimodules, with its group shadow.
#[derive(Clone, Debug)]
pub struct SquareCell {
    /// `(g, h)` with `F ≅ A_{α_g}` and `V ≅ A_{α_h}`.
    pub pair: (usize, usize),
    pub horizontal: Bimodule,
    pub vertical: Bimodule,
    pub phi: Twist,
}

impl SquareCell {
    /// Checks the shape of `φ`, that it is invertible, and that the pair commutes.
    pub fn validate(&self, group: &Group) -> Result<()> {
        let (g, h) = self.pair;
        if !group.commute(g, h) {
            return Err(Error::NotCommuting(g, h));
        }
        let t = &self.phi;
        if !t.source.left.same_as(&self.horizontal)
            || !t.source.right.same_as(&self.vertical)
            || !t.target.left.same_as(&self.vertical)
            || !t.target.right.same_as(&self.horizontal)
        {
            return Err(Error::Dimension("cell is not of the form F.V -> V.F".into()));
        }
        if !t.map.is_iso() {
            return Err(Error::Internal("cell is not invertible".into()));
        }
        Ok(())
    }
}

/// The cell of a commuting pair: `A_g ⊙ A_h ≅ A_{gh} = A_{hg} ≅ A_h ⊙ A_g`.
pub fn square_cell(action: &GroupAction, g: usize, h: usize) -> Result<SquareCell> {
    if !action.group.commute(g, h) {
        return Err(Error::NotCommuting(g, h));
    }
    let (f, v) = (action.twisted(g), action.twisted(h));
    let source = tensor_over(f, v)?;
    let target = tensor_over(v, f)?;
    let down = multiplication_iso(action, g, h, &source)?;
    let up = multiplication_iso(action, h, g, &target)?
        .inverse()
        .ok_or_else(|| Error::Internal("multiplication iso is not invertible".into()))?;
    let map = up.compose(&down)?;
    Ok(SquareCell { pair: (g, h), horizontal: f.clone(), vertical: v.clone(), phi: Twist { source, target, map } })
}

/// The iterated trace of the cell; both trace orders are computed and must agree.
pub fn two_character(cell: &SquareCell) -> Result<Scalar> {
    let left = left_dual(&cell.horizontal)?;
    let right = right_dual(&cell.vertical)?;
    let m_first = iterated_trace(&cell.phi, &left, &right, Order::MFirst)?;
    let n_first = iterated_trace(&cell.phi, &left, &right, Order::NFirst)?;
    if m_first != n_first {
        return Err(Error::Internal(format!("trace orders disagree: {m_first} != {n_first}")));
    }
    Ok(m_first)
}

/// One generator of the modular group acting on cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Move {
    S,
    T,
}

/// `T`: the vertical 1-cell absorbs the companion of `F`,
/// `F ⊙ (V ⊙ F) → (F ⊙ V) ⊙ F → (V ⊙ F) ⊙ F`. Shadow `(g, h) ↦ (g, hg)`.
pub fn act_t(action: &GroupAction, cell: &SquareCell) -> Result<SquareCell> {
    let f = &cell.horizontal;
    let (fv, vf) = (&cell.phi.source, &cell.phi.target);
    let f_vf = tensor_over(f, &vf.result)?;
    let fv_f = tensor_over(&fv.result, f)?;
    let vf_f = tensor_over(&vf.result, f)?;
    let map = compose_all(&[
        associator_inverse(fv, &fv_f, vf, &f_vf),
        tensor_maps(&cell.phi.map, &BimoduleMap::identity(f), &fv_f, &vf_f)?,
    ])?;
    let (g, h) = cell.pair;
    Ok(SquareCell {
        pair: (g, action.group.mul(h, g)),
        horizontal: f.clone(),
        vertical: vf.result.clone(),
        phi: Twist { source: f_vf, target: vf_f, map },
    })
}

/// `S`: bends `F` around through its conjoint `L` (the left dual of `F`),
/// `V ⊙ L → L ⊙ V`. Shadow `(g, h) ↦ (h, g⁻¹)`.
pub fn act_s(action: &GroupAction, cell: &SquareCell) -> Result<SquareCell> {
    let pair = left_dual(&cell.horizontal)?;
    let (source, target, map) = unmate(&cell.phi.map, &cell.phi.source, &cell.phi.target, &pair)?;
    let (g, h) = cell.pair;
    Ok(SquareCell {
        pair: (h, action.group.inverse(g)),
        horizontal: cell.vertical.clone(),
        vertical: pair.m.clone(),
        phi: Twist { source, target, map },
    })
}

/// Applies a word of moves left to right.
pub fn apply_word(action: &GroupAction, cell: &SquareCell, word: &[Move]) -> Result<SquareCell> {
    word.iter().try_fold(cell.clone(), |c, mv| match mv {
        Move::S => act_s(action, &c),
        Move::T => act_t(action, &c),
    })
}

/// A seeded word in `S` and `T` of length 1 to `max_len`.
pub fn random_word(seed: u64, max_len: usize) -> Vec<Move> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.gen_range(1..=max_len.max(1));
    (0..len).map(|_| if rng.gen_bool(0.5) { Move::S } else { Move::T }).collect()
}

/// One row `(g, h, χ(g, h))` per commuting pair.
pub fn character_table(action: &GroupAction) -> Result<Vec<(usize, usize, Scalar)>> {
    action
        .commuting_pairs()
        .into_iter()
        .map(|(g, h)| Ok((g, h, two_character(&square_cell(action, g, h)?)?)))
        .collect()
}

/// Expected group shadow after a word.
fn shadow_after(group: &Group, pair: (usize, usize), word: &[Move]) -> (usize, usize) {
    word.iter().fold(pair, |(g, h), mv| match mv {
        Move::S => (h, group.inverse(g)),
        Move::T => (g, group.mul(h, g)),
    })
}

/// For every commuting pair: `χ` is unchanged by `S`, by `T`, by `S⁴`, and by
/// `words` seeded random words of length at most `max_len`. Every cell
/// produced along the way is validated and its group shadow checked.
pub fn check_modular_invariance(action: &GroupAction, seed: u64, words: usize, max_len: usize) -> Result<TheoremReport> {
    const NAME: &str = "modular_invariance";
    let instance = format!("{} on {}, {words} words of length <= {max_len}", action.group.name(), action.algebra.name());
    let run = || -> Result<TheoremReport> {
        require_two_dualizable(&action.algebra)?;
        let s4 = [Move::S; 4];
        let mut probes: Vec<Vec<Move>> = vec![vec![Move::S], vec![Move::T], s4.to_vec()];
        probes.extend((0..words).map(|i| random_word(seed.wrapping_add(i as u64), max_len)));
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for (g, h) in action.commuting_pairs() {
            let cell = square_cell(action, g, h)?;
            cell.validate(&action.group)?;
            let chi = two_character(&cell)?;
            for word in &probes {
                let moved = apply_word(action, &cell, word)?;
                moved.validate(&action.group)?;
                let expected = shadow_after(&action.group, (g, h), word);
                if moved.pair != expected {
                    return Err(Error::Internal(format!("shadow {:?} != {:?}", moved.pair, expected)));
                }
                left.push(chi.to_string());
                right.push(two_character(&moved)?.to_string());
            }
        }
        let r = TheoremReport::compare(NAME, instance.clone(), left, right);
        Ok(r.note(format!(
            "{} commuting pairs; probes per pair: S, T, S^4 and {words} random words",
            action.commuting_pairs().len()
        )))
    };
    TheoremReport::or_refused(NAME, &instance, run())
}

#[cfg(test)]
mod tests;
