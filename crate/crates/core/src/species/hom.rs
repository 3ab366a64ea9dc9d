//! `Hom` and `Ext` between modules, computed two independent ways.
//!
//! The three-term complex `V → W → V` gives `h⁰`, `h¹`, `h²`. The direct
//! route restricts scalars to `κ` and solves for intertwiners of the
//! generator actions and the arrow actions.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{sgn, Species, SpeciesModule};
use crate::field::{trace_unchecked, Tower};
use crate::linalg::{self, Matrix};

/// One matrix per ordered edge `(j, i)`.
pub type EdgeMaps<E> = BTreeMap<(usize, usize), Matrix<E>>;

/// Endomorphism or Hom spaces with at most this many elements are scanned in full.
pub const EXHAUSTIVE_LIMIT: u128 = 4096;
/// Number of random elements tried when a space is too large to scan.
pub const RANDOM_TRIALS: usize = 50;
const TRIAL_SEED: u64 = 0x5eed;

/// The complex `V --d⁰--> W --d¹--> V` in `κ`-coordinates.
#[derive(Clone, Debug)]
pub struct HomComplex<E> {
    pub v_dim: usize,
    pub w_dim: usize,
    pub d0: Matrix<E>,
    pub d1: Matrix<E>,
    pub rank_d0: usize,
    pub rank_d1: usize,
}

impl<E> HomComplex<E> {
    pub fn h0(&self) -> usize {
        self.v_dim - self.rank_d0
    }

    pub fn h1(&self) -> usize {
        self.w_dim - self.rank_d1 - self.rank_d0
    }

    pub fn h2(&self) -> usize {
        self.v_dim - self.rank_d1
    }
}

/// How a yes/no answer about a Hom space was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum IsoPolicy {
    /// Decided by a dimension count or an explicit witness.
    Certificate,
    /// Every element of the space was inspected.
    Exhaustive,
    /// Only random elements were inspected and no witness turned up.
    Random { trials: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub value: bool,
    pub policy: IsoPolicy,
}

impl Verdict {
    fn certain(value: bool) -> Self {
        Verdict { value, policy: IsoPolicy::Certificate }
    }

    pub fn is_certain(&self) -> bool {
        !matches!(self.policy, IsoPolicy::Random { .. })
    }
}

/// A module with scalars restricted to `κ`.
#[derive(Clone, Debug)]
pub struct KappaRep<E> {
    /// `d_i·m_i` per vertex.
    pub dims: Vec<usize>,
    /// Multiplication by the chosen generator of `κ(d_i)`.
    pub gens: Vec<Matrix<E>>,
    /// `(j, i, ψ)` with `ψ(v) = M_{j←i}(a ⊗ v)`, one entry per arrow `a`.
    pub arrows: Vec<(usize, usize, Matrix<E>)>,
}

/// A `κ`-basis of `Hom(M, N)`, each element given vertexwise as `κ`-matrices.
#[derive(Clone, Debug)]
pub struct HomSpace<E> {
    pub basis: Vec<Vec<Matrix<E>>>,
}

impl<E> HomSpace<E> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// The three numbers in `h⁰(M,N) − h¹(M,N) + h⁰(N,M) = (dim M, dim N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerCheck {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub h0_reverse: usize,
    pub h0_direct: usize,
    pub form: i64,
}

impl EulerCheck {
    pub fn holds(&self) -> bool {
        self.h0 as i64 - self.h1 as i64 + self.h0_reverse as i64 == self.form
            && self.h2 == self.h0_reverse
            && self.h0 == self.h0_direct
    }
}

type Module<F> = SpeciesModule<<F as crate::field::Field>::Elt>;

impl<F: Tower> Species<F> {
    /// `1 ⊗ F` on `E(j←i) ⊗ -` for a `κ(d_i)`-matrix `F : M_i → N_i`.
    fn tensor_one(&self, j: usize, i: usize, fi: &Matrix<F::Elt>) -> Matrix<F::Elt> {
        let f = self.field();
        let e = self.edge(j, i);
        let ew = e.basis.len();
        let (dj, dij) = (self.cartan().d(j), self.cartan().d_pair(i, j));
        let (ni, mi) = (fi.rows(), fi.cols());
        let mut out = Matrix::zeros(f, e.width() * ni, e.width() * mi);
        for kp in 0..ew {
            for k in 0..ew {
                let c = f.mul(&e.dual[kp], &e.basis[k]);
                for r in 0..ni {
                    for l in 0..mi {
                        let x = &fi[(r, l)];
                        if f.is_zero(x) {
                            continue;
                        }
                        let t = trace_unchecked(f, dj, dij, &f.mul(&c, x));
                        for a in 0..e.arrows {
                            out[((a * ew + kp) * ni + r, (a * ew + k) * mi + l)] = t.clone();
                        }
                    }
                }
            }
        }
        out
    }

    /// `d⁰(f)_{j←i} = N_{j←i}(1 ⊗ f_i) − f_j M_{j←i}`.
    pub fn d0_apply(
        &self,
        m: &Module<F>,
        n: &Module<F>,
        fs: &[Matrix<F::Elt>],
    ) -> BTreeMap<(usize, usize), Matrix<F::Elt>> {
        let f = self.field();
        self.edge_keys()
            .map(|(j, i)| {
                let left = linalg::mul(f, n.map(j, i), &self.tensor_one(j, i, &fs[i]));
                let right = linalg::mul(f, &fs[j], m.map(j, i));
                ((j, i), linalg::sub(f, &left, &right))
            })
            .collect()
    }

    /// `d¹(g)_i = Σ_j sgn(j,i)(N_{i←j} g_{j←i}^∨ + g_{i←j} M_{j←i}^∨)`.
    pub fn d1_apply(
        &self,
        m: &Module<F>,
        n: &Module<F>,
        g: &BTreeMap<(usize, usize), Matrix<F::Elt>>,
    ) -> Vec<Matrix<F::Elt>> {
        let f = self.field();
        (0..self.rank())
            .map(|i| {
                let mut acc = Matrix::zeros(f, n.dims()[i], m.dims()[i]);
                for j in self.cartan().neighbors(i) {
                    let a = linalg::mul(f, n.map(i, j), &self.vee(j, i, &g[&(j, i)], m.dims()[i], n.dims()[j]));
                    let b = linalg::mul(f, &g[&(i, j)], &self.vee(j, i, m.map(j, i), m.dims()[i], m.dims()[j]));
                    let term = linalg::add(f, &a, &b);
                    acc = if sgn(j, i) > 0 { linalg::add(f, &acc, &term) } else { linalg::sub(f, &acc, &term) };
                }
                acc
            })
            .collect()
    }

    /// `κ`-basis of `V = ⊕_i Hom_{κ(d_i)}(M_i, N_i)`.
    pub fn v_basis(&self, m: &Module<F>, n: &Module<F>) -> Vec<Vec<Matrix<F::Elt>>> {
        let f = self.field();
        let zero: Vec<Matrix<F::Elt>> =
            (0..self.rank()).map(|i| Matrix::zeros(f, n.dims()[i], m.dims()[i])).collect();
        let mut out = Vec::new();
        for i in 0..self.rank() {
            let w = f.subfield_basis(self.cartan().d(i)).expect("subfield degrees divide the field degree");
            for r in 0..n.dims()[i] {
                for c in 0..m.dims()[i] {
                    for ws in &w {
                        let mut v = zero.clone();
                        v[i][(r, c)] = ws.clone();
                        out.push(v);
                    }
                }
            }
        }
        out
    }

    /// `κ`-basis of `W = ⊕_{j←i} Hom_{κ(d_j)}(E(j←i) ⊗ M_i, N_j)`.
    pub fn w_basis(&self, m: &Module<F>, n: &Module<F>) -> Vec<EdgeMaps<F::Elt>> {
        let f = self.field();
        let zero: BTreeMap<_, _> = self
            .edge_keys()
            .map(|(j, i)| ((j, i), Matrix::zeros(f, n.dims()[j], self.edge(j, i).width() * m.dims()[i])))
            .collect();
        let mut out = Vec::new();
        for (&(j, i), z) in &zero {
            let w = f.subfield_basis(self.cartan().d(j)).expect("subfield degrees divide the field degree");
            for r in 0..z.rows() {
                for c in 0..z.cols() {
                    for ws in &w {
                        let mut g = zero.clone();
                        g.get_mut(&(j, i)).expect("key from the same map")[(r, c)] = ws.clone();
                        out.push(g);
                    }
                }
            }
        }
        out
    }

    fn flatten<'a>(&self, mats: impl Iterator<Item = &'a Matrix<F::Elt>>) -> Vec<F::Elt>
    where
        F::Elt: 'a,
    {
        mats.flat_map(|g| g.entries()).flat_map(|x| self.field().ambient_coords(x)).collect()
    }

    pub fn hom_complex(&self, m: &Module<F>, n: &Module<F>) -> HomComplex<F::Elt> {
        let f = self.field();
        let vb = self.v_basis(m, n);
        let wb = self.w_basis(m, n);
        let d0_cols: Vec<Vec<F::Elt>> =
            vb.iter().map(|v| self.flatten(self.d0_apply(m, n, v).values())).collect();
        let d1_cols: Vec<Vec<F::Elt>> = wb.iter().map(|g| self.flatten(self.d1_apply(m, n, g).iter())).collect();
        let zero = self.zero_v(m, n);
        let w_amb = self.flatten(self.d0_apply(m, n, &zero).values()).len();
        let v_amb = self.flatten(zero.iter()).len();
        let d0 = Matrix::from_columns(&d0_cols, w_amb);
        let d1 = Matrix::from_columns(&d1_cols, v_amb);
        let rank_d0 = linalg::rank(f, &d0);
        let rank_d1 = linalg::rank(f, &d1);
        HomComplex { v_dim: vb.len(), w_dim: wb.len(), d0, d1, rank_d0, rank_d1 }
    }

    fn zero_v(&self, m: &Module<F>, n: &Module<F>) -> Vec<Matrix<F::Elt>> {
        (0..self.rank()).map(|i| Matrix::zeros(self.field(), n.dims()[i], m.dims()[i])).collect()
    }

    /// `(h⁰, h¹, h²)` of the complex for `(M, N)`.
    pub fn hom_ext_dims(&self, m: &Module<F>, n: &Module<F>) -> (usize, usize, usize) {
        let c = self.hom_complex(m, n);
        (c.h0(), c.h1(), c.h2())
    }

    pub fn kappa_rep(&self, m: &Module<F>) -> KappaRep<F::Elt> {
        let f = self.field();
        let c = self.cartan();
        let bases: Vec<Vec<F::Elt>> = (0..self.rank())
            .map(|i| f.subfield_basis(c.d(i)).expect("subfield degrees divide the field degree"))
            .collect();
        let dims: Vec<usize> = (0..self.rank()).map(|i| c.d(i) * m.dims()[i]).collect();
        let coords = |d: usize, x: &F::Elt| f.subfield_coords(d, x).expect("entries lie in their subfield");
        let gens = (0..self.rank())
            .map(|i| {
                let d = c.d(i);
                let u = f.generator(d).expect("subfield degrees divide the field degree");
                let mut g = Matrix::zeros(f, dims[i], dims[i]);
                for (s, ws) in bases[i].iter().enumerate() {
                    for (sp, x) in coords(d, &f.mul(&u, ws)).into_iter().enumerate() {
                        for l in 0..m.dims()[i] {
                            g[(l * d + sp, l * d + s)] = x.clone();
                        }
                    }
                }
                g
            })
            .collect();
        let mut arrows = Vec::new();
        for (j, i) in self.edge_keys() {
            let (di, dj) = (c.d(i), c.d(j));
            for a in 0..self.edge(j, i).arrows {
                let mut psi = Matrix::zeros(f, dims[j], dims[i]);
                for l in 0..m.dims()[i] {
                    for (s, ws) in bases[i].iter().enumerate() {
                        let v = self.edge_apply(m, j, i, a, ws, l);
                        for (lp, y) in v.iter().enumerate() {
                            for (sp, x) in coords(dj, y).into_iter().enumerate() {
                                psi[(lp * dj + sp, l * di + s)] = x;
                            }
                        }
                    }
                }
                arrows.push((j, i, psi));
            }
        }
        KappaRep { dims, gens, arrows }
    }

    /// `Hom(M, N)` as intertwiners of the `κ`-representations.
    pub fn hom_space(&self, m: &Module<F>, n: &Module<F>) -> HomSpace<F::Elt> {
        let f = self.field();
        let (km, kn) = (self.kappa_rep(m), self.kappa_rep(n));
        let r = self.rank();
        let mut offsets = vec![0; r + 1];
        for i in 0..r {
            offsets[i + 1] = offsets[i] + kn.dims[i] * km.dims[i];
        }
        let unknowns = offsets[r];
        let unpack = |x: &[F::Elt]| -> Vec<Matrix<F::Elt>> {
            (0..r)
                .map(|i| {
                    let (rows, cols) = (kn.dims[i], km.dims[i]);
                    let part = &x[offsets[i]..offsets[i + 1]];
                    Matrix::from_rows((0..rows).map(|t| part[t * cols..(t + 1) * cols].to_vec()).collect(), cols)
                })
                .collect()
        };
        let residual = |fs: &[Matrix<F::Elt>]| -> Vec<F::Elt> {
            let mut out = Vec::new();
            for i in 0..r {
                let d = linalg::sub(f, &linalg::mul(f, &fs[i], &km.gens[i]), &linalg::mul(f, &kn.gens[i], &fs[i]));
                out.extend(d.entries().cloned());
            }
            for ((j, i, pm), (_, _, pn)) in km.arrows.iter().zip(&kn.arrows) {
                let d = linalg::sub(f, &linalg::mul(f, &fs[*j], pm), &linalg::mul(f, pn, &fs[*i]));
                out.extend(d.entries().cloned());
            }
            out
        };
        let mut columns = Vec::with_capacity(unknowns);
        let mut unit = vec![f.zero(); unknowns];
        for u in 0..unknowns {
            unit[u] = f.one();
            columns.push(residual(&unpack(&unit)));
            unit[u] = f.zero();
        }
        let eq_rows = residual(&unpack(&unit)).len();
        let system = Matrix::from_columns(&columns, eq_rows);
        let basis = linalg::kernel(f, &system).iter().map(|x| unpack(x)).collect();
        HomSpace { basis }
    }

    fn combine(&self, space: &HomSpace<F::Elt>, coeffs: &[F::Elt]) -> Vec<Matrix<F::Elt>> {
        let f = self.field();
        let mut acc: Vec<Matrix<F::Elt>> =
            space.basis[0].iter().map(|b| Matrix::zeros(f, b.rows(), b.cols())).collect();
        for (c, b) in coeffs.iter().zip(&space.basis) {
            if f.is_zero(c) {
                continue;
            }
            for (a, bi) in acc.iter_mut().zip(b) {
                *a = linalg::add(f, a, &linalg::scale(f, c, bi));
            }
        }
        acc
    }

    fn is_iso(&self, h: &[Matrix<F::Elt>]) -> bool {
        h.iter().all(|x| linalg::is_invertible(self.field(), x))
    }

    /// Searches `space` for an element satisfying `good`; `all` asks whether
    /// every nonzero element does instead.
    fn scan(&self, space: &HomSpace<F::Elt>, all: bool) -> Verdict {
        let f = self.field();
        let k = space.dim();
        let kappa = f.subfield_elements(1);
        let size = f.subfield_order(1).and_then(|q| q.checked_pow(k as u32));
        if let (Some(kappa), Some(size)) = (kappa, size) {
            if size <= EXHAUSTIVE_LIMIT {
                let mut idx = vec![0usize; k];
                loop {
                    let mut t = 0;
                    while t < k && idx[t] == kappa.len() - 1 {
                        idx[t] = 0;
                        t += 1;
                    }
                    if t == k {
                        break;
                    }
                    idx[t] += 1;
                    let coeffs: Vec<F::Elt> = idx.iter().map(|&x| kappa[x].clone()).collect();
                    let iso = self.is_iso(&self.combine(space, &coeffs));
                    if all != iso {
                        return Verdict { value: !all, policy: IsoPolicy::Exhaustive };
                    }
                }
                return Verdict { value: all, policy: IsoPolicy::Exhaustive };
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(TRIAL_SEED);
        for _ in 0..RANDOM_TRIALS {
            let coeffs: Vec<F::Elt> = (0..k).map(|_| f.random_in(1, &mut rng)).collect();
            if coeffs.iter().all(|c| f.is_zero(c)) {
                continue;
            }
            if all != self.is_iso(&self.combine(space, &coeffs)) {
                return Verdict::certain(!all);
            }
        }
        Verdict { value: all, policy: IsoPolicy::Random { trials: RANDOM_TRIALS } }
    }

    /// Whether `End(M)` is a division ring.
    pub fn is_brick(&self, m: &Module<F>) -> Verdict {
        if m.is_zero() {
            return Verdict::certain(false);
        }
        let end = self.hom_space(m, m);
        if end.dim() == 1 {
            return Verdict::certain(true);
        }
        self.scan(&end, true)
    }

    pub fn is_isomorphic(&self, m: &Module<F>, n: &Module<F>) -> Verdict {
        if m.dims() != n.dims() {
            return Verdict::certain(false);
        }
        if m.is_zero() {
            return Verdict::certain(true);
        }
        let hom = self.hom_space(m, n);
        if hom.dim() == 0 || hom.dim() != self.hom_space(m, m).dim() {
            return Verdict::certain(false);
        }
        self.scan(&hom, false)
    }

    pub fn euler_check(&self, m: &Module<F>, n: &Module<F>) -> EulerCheck {
        let c = self.hom_complex(m, n);
        EulerCheck {
            h0: c.h0(),
            h1: c.h1(),
            h2: c.h2(),
            h0_reverse: self.hom_space(n, m).dim(),
            h0_direct: self.hom_space(m, n).dim(),
            form: self.cartan().bilinear(&m.dim_vector(), &n.dim_vector()),
        }
    }
}
