//! Reflection functors `Σ_i` and `Σ_i⁻¹` and the brick recursion.
//!
//! `Σ_i` is defined on modules without an `S_i` quotient (surjective in-map)
//! and replaces `M_i` by `Ker(M_{i,in})`; `Σ_i⁻¹` is defined on modules
//! without an `S_i` submodule (injective out-map) and replaces `M_i` by
//! `CoKer(M_{i,out})`. Both preserve the composite `M_{i,out} ∘ M_{i,in}`.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cartan::Root;
use crate::cone::Sign;
use crate::error::{Error, Result};
use crate::field::{Field, Tower};
use crate::linalg::{self, Matrix};
use crate::roots::{positive_expression, PositiveExpression, SignedWord};
use crate::species::{sgn, Species, SpeciesModule};

type Module<F> = SpeciesModule<<F as Field>::Elt>;

/// `M` has no submodule isomorphic to `S_i`.
pub fn no_sub<F: Tower>(s: &Species<F>, m: &Module<F>, i: usize) -> bool {
    linalg::rank(s.field(), &s.out_map(m, i)) == m.dims()[i]
}

/// `M` has no quotient isomorphic to `S_i`.
pub fn no_quot<F: Tower>(s: &Species<F>, m: &Module<F>, i: usize) -> bool {
    linalg::rank(s.field(), &s.in_map(m, i)) == m.dims()[i]
}

/// Replaces vertex `i` by a space of dimension `new_in.rows()` with the given
/// in- and out-maps, splitting them into edge maps.
fn rebuild<F: Tower>(
    s: &Species<F>,
    m: &Module<F>,
    i: usize,
    new_in: &Matrix<F::Elt>,
    new_out: &Matrix<F::Elt>,
) -> Module<F> {
    let f = s.field();
    let k = new_in.rows();
    let mut out = m.clone();
    out.set_dim(i, k);
    let mut offset = 0;
    for j in s.cartan().neighbors(i) {
        let w = s.edge(i, j).width() * m.dims()[j];
        let block = new_in.block(0, offset, k, w);
        out.set_map(i, j, if sgn(i, j) > 0 { block } else { block.map(|x| f.neg(x)) });
        let h = new_out.block(offset, 0, w, k);
        out.set_map(j, i, s.wedge(j, i, &h, k, m.dims()[j]));
        offset += w;
    }
    out
}

fn check_post<F: Tower>(s: &Species<F>, before: &Module<F>, after: &Module<F>, i: usize) -> Result<()> {
    if !s.check_preprojective(after) {
        return Err(Error::Postcondition(format!("reflection at vertex {} broke the preprojective relation", i + 1)));
    }
    if after.dim_vector() != s.cartan().reflect_root(i, &before.dim_vector()) {
        return Err(Error::Postcondition(format!("reflection at vertex {} has the wrong dimension vector", i + 1)));
    }
    Ok(())
}

fn reflect<F: Tower>(s: &Species<F>, m: &Module<F>, i: usize, sign: Sign, twist: bool) -> Result<Module<F>> {
    let f = s.field();
    let d = s.boundary_dim(m, i);
    let min = s.in_map(m, i);
    let mout = s.out_map(m, i);
    let mut composite = linalg::mul(f, &mout, &min);
    if twist {
        composite = composite.map(|x| f.neg(x));
    }
    let undefined = || Error::FunctorUndefined { vertex: i + 1 };
    let (new_in, new_out) = match sign {
        Sign::Plus => {
            if linalg::rank(f, &min) != m.dims()[i] {
                return Err(undefined());
            }
            let k = Matrix::from_columns(&linalg::kernel(f, &min), d);
            let x = linalg::solve(f, &k, &composite)
                .ok_or_else(|| Error::Postcondition("M_out ∘ M_in does not factor through the kernel".into()))?;
            (x, k)
        }
        Sign::Minus => {
            if linalg::rank(f, &mout) != m.dims()[i] {
                return Err(undefined());
            }
            let p = Matrix::from_rows(linalg::left_kernel(f, &mout), d);
            let y = linalg::solve_left(f, &p, &composite)
                .ok_or_else(|| Error::Postcondition("M_out ∘ M_in does not factor through the cokernel".into()))?;
            (p, y)
        }
    };
    Ok(rebuild(s, m, i, &new_in, &new_out))
}

/// `Σ_i M`; requires [`no_quot`].
pub fn sigma_plus<F: Tower>(s: &Species<F>, m: &Module<F>, i: usize) -> Result<Module<F>> {
    apply_step(s, m, i, Sign::Plus)
}

/// `Σ_i⁻¹ M`; requires [`no_sub`].
pub fn sigma_minus<F: Tower>(s: &Species<F>, m: &Module<F>, i: usize) -> Result<Module<F>> {
    apply_step(s, m, i, Sign::Minus)
}

pub fn apply_step<F: Tower>(s: &Species<F>, m: &Module<F>, i: usize, sign: Sign) -> Result<Module<F>> {
    let out = reflect(s, m, i, sign, false)?;
    check_post(s, m, &out, i)?;
    Ok(out)
}

/// The variant with the factorized map negated; kept to show it fails.
#[cfg(test)]
pub(crate) fn apply_step_twisted<F: Tower>(s: &Species<F>, m: &Module<F>, i: usize, sign: Sign) -> Result<Module<F>> {
    let out = reflect(s, m, i, sign, true)?;
    check_post(s, m, &out, i)?;
    Ok(out)
}

/// `Σ^{±_r}_{i_r} ⋯ Σ^{±_1}_{i_1} S_j`.
pub fn apply_signed_word<F: Tower>(s: &Species<F>, w: &SignedWord) -> Result<Module<F>> {
    if w.seed() >= s.rank() || w.steps().iter().any(|&(i, _)| i >= s.rank()) {
        return Err(Error::InvalidInput(format!("word {w} uses a vertex outside rank {}", s.rank())));
    }
    let mut m = s.simple(w.seed());
    for &(i, sign) in w.steps() {
        m = apply_step(s, &m, i, sign)?;
    }
    Ok(m)
}

/// One isomorphism class of bricks with the first signed word reaching it.
#[derive(Clone, Debug)]
pub struct Brick<E> {
    pub word: SignedWord,
    pub module: SpeciesModule<E>,
}

#[derive(Clone, Debug)]
pub struct BrickSearch<E> {
    pub expression: PositiveExpression,
    pub bricks: Vec<Brick<E>>,
    /// Number of sign vectors whose product is well-defined.
    pub well_defined: u64,
}

impl<E: Clone> BrickSearch<E> {
    pub fn to_json<F: Tower<Elt = E>>(&self, s: &Species<F>) -> Value {
        json!({
            "root": self.expression.root().to_string(),
            "expression": self.expression.to_string(),
            "well_defined_sign_vectors": self.well_defined,
            "sign_vectors": 1u64 << self.expression.len(),
            "bricks": self.bricks.iter().map(|b| json!({
                "word": b.word.to_string(),
                "dims": b.module.dims(),
                "module": s.module_to_json(&b.module),
            })).collect::<Vec<_>>(),
        })
    }
}

/// All bricks of dimension `β` up to isomorphism, using the greedy positive expression.
pub fn bricks_of_dimension<F: Tower>(s: &Species<F>, beta: &Root) -> Result<BrickSearch<F::Elt>> {
    let expr = positive_expression(s.cartan(), beta)?;
    bricks_along(s, &expr)
}

/// All bricks of dimension `expr.root()`, walking the given positive expression.
///
/// Signed prefixes are merged by isomorphism class after every step, since
/// whether the next functor is defined depends only on the class.
pub fn bricks_along<F: Tower>(s: &Species<F>, expr: &PositiveExpression) -> Result<BrickSearch<F::Elt>> {
    let mut level: Vec<(Brick<F::Elt>, u64)> =
        vec![(Brick { word: SignedWord::new(expr.seed(), Vec::new()), module: s.simple(expr.seed()) }, 1)];
    for &i in expr.steps() {
        let candidates: Vec<(Brick<F::Elt>, u64)> = level
            .par_iter()
            .flat_map_iter(|(b, mult)| {
                [Sign::Plus, Sign::Minus].into_iter().filter_map(move |sign| {
                    let module = apply_step(s, &b.module, i, sign).ok()?;
                    let mut steps = b.word.steps().to_vec();
                    steps.push((i, sign));
                    Some((Brick { word: SignedWord::new(b.word.seed(), steps), module }, *mult))
                })
            })
            .collect();
        let mut next: Vec<(Brick<F::Elt>, u64)> = Vec::new();
        for (cand, mult) in candidates {
            match next.iter_mut().find(|(b, _)| s.is_isomorphic(&b.module, &cand.module).value) {
                Some((_, m)) => *m += mult,
                None => next.push((cand, mult)),
            }
        }
        level = next;
    }
    Ok(BrickSearch {
        expression: expr.clone(),
        well_defined: level.iter().map(|(_, m)| m).sum(),
        bricks: level.into_iter().map(|(b, _)| b).collect(),
    })
}
