//! Modules over the preprojective algebra of a species.
//!
//! A module assigns to each vertex `i` a `κ(d_i)`-vector space `M_i` of
//! dimension `m_i`, and to each ordered edge `j ← i` a `κ(d_j)`-linear map
//! `M_{j←i} : E(j←i) ⊗ M_i → M_j`. It is stored as an `m_j × (q·e·m_i)`
//! matrix over `κ(d_j)`, where `q` is the number of arrows and `e` the size
//! of the species basis `b^{ji}`; column `(a·e + k)·m_i + l` holds the image
//! of `a·b^{ji}_k ⊗ e_l`.
//!
//! The in-map at `i` collects `sgn(i,j)·M_{i←j}` and the out-map collects the
//! adjoints `M_{j←i}^∨`; the preprojective relation says `in ∘ out = 0`.

mod hom;
mod random;

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::cartan::{CartanData, Root};
use crate::error::{Error, Result};
use crate::field::{dual_basis, species_basis, trace_unchecked, GaloisField, Rationals, Tower};
use crate::linalg::{self, Matrix};

pub use hom::{EulerCheck, HomComplex, KappaRep, HomSpace, IsoPolicy, Verdict, EXHAUSTIVE_LIMIT, RANDOM_TRIALS};
pub use random::{euler_trials, random_module, EulerReport};

/// The bimodule `E(j←i)` in coordinates.
#[derive(Clone, Debug)]
pub struct Edge<E> {
    /// Number of arrows `q = −d_i A_ij / d_ij`.
    pub arrows: usize,
    /// `b^{ji}_k`: a `κ(d_j)`-basis of `κ(d_ij)` inside `κ(d_i)`.
    pub basis: Vec<E>,
    /// The basis dual to `basis` under `tr_{κ(d_ij)/κ(d_j)}`.
    pub dual: Vec<E>,
}

impl<E> Edge<E> {
    /// `q·|b^{ji}|`, the `κ(d_j)`-dimension of `E(j←i)`, which is `−A_ji`.
    pub fn width(&self) -> usize {
        self.arrows * self.basis.len()
    }
}

/// A Cartan datum together with a scalar tower and the species bases.
#[derive(Clone, Debug)]
pub struct Species<F: Tower> {
    cartan: CartanData,
    field: F,
    edges: BTreeMap<(usize, usize), Edge<F::Elt>>,
}

/// `sgn(i, j) = +1` iff `i < j`.
pub fn sgn(i: usize, j: usize) -> i64 {
    if i < j {
        1
    } else {
        -1
    }
}

impl Species<GaloisField> {
    /// The species over `F_{p^L}` for the datum's prime.
    pub fn finite(cartan: &CartanData) -> Result<Self> {
        let p = cartan
            .prime()
            .ok_or_else(|| Error::InvalidInput(format!("Cartan datum {:?} has no prime", cartan.name())))?;
        Self::new(cartan.clone(), GaloisField::new(p, cartan.field_degree())?)
    }
}

impl Species<Rationals> {
    /// The species over `ℚ`; requires a symmetric datum.
    pub fn rational(cartan: &CartanData) -> Result<Self> {
        if cartan.field_degree() != 1 {
            return Err(Error::InvalidCartan("rational backend requires every d_i = 1".into()));
        }
        Self::new(cartan.clone(), Rationals)
    }
}

impl<F: Tower> Species<F> {
    pub fn new(cartan: CartanData, field: F) -> Result<Self> {
        if !field.degree().is_multiple_of(cartan.field_degree()) {
            return Err(Error::Field(format!(
                "field of degree {} has no subfield of degree {}",
                field.degree(),
                cartan.field_degree()
            )));
        }
        let n = cartan.rank();
        let mut edges = BTreeMap::new();
        for i in 0..n {
            for j in cartan.neighbors(i) {
                let (di, dj) = (cartan.d(i), cartan.d(j));
                let basis = species_basis(&field, di, dj)?;
                let dual = dual_basis(&field, dj, cartan.d_pair(i, j), &basis)?;
                edges.insert((j, i), Edge { arrows: cartan.arrow_count(i, j), basis, dual });
            }
        }
        Ok(Species { cartan, field, edges })
    }

    pub fn cartan(&self) -> &CartanData {
        &self.cartan
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    /// The data of `E(j←i)`.
    pub fn edge(&self, j: usize, i: usize) -> &Edge<F::Elt> {
        &self.edges[&(j, i)]
    }

    /// Ordered pairs `(j, i)` with an edge `j ← i`.
    pub fn edge_keys(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.keys().copied()
    }

    fn width(&self, j: usize, i: usize) -> usize {
        self.edges[&(j, i)].width()
    }

    pub fn zero_module(&self, dims: Vec<usize>) -> SpeciesModule<F::Elt> {
        let maps = self
            .edges
            .keys()
            .map(|&(j, i)| ((j, i), Matrix::zeros(&self.field, dims[j], self.width(j, i) * dims[i])))
            .collect();
        SpeciesModule { dims, maps }
    }

    /// The simple module `S_i`.
    pub fn simple(&self, i: usize) -> SpeciesModule<F::Elt> {
        let mut dims = vec![0; self.rank()];
        dims[i] = 1;
        self.zero_module(dims)
    }

    /// Checks shapes and that every entry of `M_{j←i}` lies in `κ(d_j)`.
    pub fn check_shape(&self, m: &SpeciesModule<F::Elt>) -> Result<()> {
        if m.dims.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!("{} dims for rank {}", m.dims.len(), self.rank())));
        }
        for (&(j, i), g) in &m.maps {
            let Some(edge) = self.edges.get(&(j, i)) else {
                return Err(Error::InvalidInput(format!("no edge {}<-{}", j + 1, i + 1)));
            };
            let shape = (m.dims[j], edge.width() * m.dims[i]);
            if (g.rows(), g.cols()) != shape {
                return Err(Error::DimensionMismatch(format!(
                    "map {}<-{} is {}×{}, expected {}×{}",
                    j + 1,
                    i + 1,
                    g.rows(),
                    g.cols(),
                    shape.0,
                    shape.1
                )));
            }
            let dj = self.cartan.d(j);
            if !g.entries().all(|x| self.field.contains(dj, x)) {
                return Err(Error::InvalidInput(format!("map {}<-{} has entries outside κ({dj})", j + 1, i + 1)));
            }
        }
        if m.maps.len() != self.edges.len() {
            return Err(Error::InvalidInput("module is missing edge maps".into()));
        }
        Ok(())
    }

    /// The adjoint `g ↦ g^∨` turning `g : E(j←i) ⊗ M_i → N_j` into
    /// `M_i → E(i←j) ⊗ N_j`, where `g` has `n_j` rows.
    pub fn vee(&self, j: usize, i: usize, g: &Matrix<F::Elt>, m_i: usize, n_j: usize) -> Matrix<F::Elt> {
        let f = &self.field;
        let e = &self.edges[&(j, i)];
        let er = &self.edges[&(i, j)];
        let (ew, erw) = (e.basis.len(), er.basis.len());
        let di = self.cartan.d(i);
        let dij = self.cartan.d_pair(i, j);
        let mut h = Matrix::zeros(f, e.arrows * erw * n_j, m_i);
        for a in 0..e.arrows {
            for kp in 0..erw {
                for lp in 0..n_j {
                    for l in 0..m_i {
                        let mut acc = f.zero();
                        for k in 0..ew {
                            let x = &g[(lp, (a * ew + k) * m_i + l)];
                            if !f.is_zero(x) {
                                acc = f.add(&acc, &f.mul(&f.mul(&er.dual[kp], &e.dual[k]), x));
                            }
                        }
                        h[((a * erw + kp) * n_j + lp, l)] = trace_unchecked(f, di, dij, &acc);
                    }
                }
            }
        }
        h
    }

    /// Inverse of [`Species::vee`].
    pub fn wedge(&self, j: usize, i: usize, h: &Matrix<F::Elt>, m_i: usize, n_j: usize) -> Matrix<F::Elt> {
        let f = &self.field;
        let e = &self.edges[&(j, i)];
        let er = &self.edges[&(i, j)];
        let (ew, erw) = (e.basis.len(), er.basis.len());
        let dj = self.cartan.d(j);
        let dij = self.cartan.d_pair(i, j);
        let mut g = Matrix::zeros(f, n_j, e.arrows * ew * m_i);
        for a in 0..e.arrows {
            for k in 0..ew {
                for lp in 0..n_j {
                    for l in 0..m_i {
                        let mut acc = f.zero();
                        for kp in 0..erw {
                            let x = &h[((a * erw + kp) * n_j + lp, l)];
                            if !f.is_zero(x) {
                                acc = f.add(&acc, &f.mul(&f.mul(&e.basis[k], x), &er.basis[kp]));
                            }
                        }
                        g[(lp, (a * ew + k) * m_i + l)] = trace_unchecked(f, dj, dij, &acc);
                    }
                }
            }
        }
        g
    }

    /// `dim_{κ(d_i)} M_{∂i} = Σ_j −A_ij m_j`.
    pub fn boundary_dim(&self, m: &SpeciesModule<F::Elt>, i: usize) -> usize {
        self.cartan.neighbors(i).iter().map(|&j| self.width(i, j) * m.dims[j]).sum()
    }

    /// `M_{i,in} : M_{∂i} → M_i`.
    pub fn in_map(&self, m: &SpeciesModule<F::Elt>, i: usize) -> Matrix<F::Elt> {
        let f = &self.field;
        let blocks: Vec<Matrix<F::Elt>> = self
            .cartan
            .neighbors(i)
            .iter()
            .map(|&j| {
                let g = &m.maps[&(i, j)];
                if sgn(i, j) > 0 {
                    g.clone()
                } else {
                    g.map(|x| f.neg(x))
                }
            })
            .collect();
        linalg::hstack(f, m.dims[i], &blocks)
    }

    /// `M_{i,out} : M_i → M_{∂i}`.
    pub fn out_map(&self, m: &SpeciesModule<F::Elt>, i: usize) -> Matrix<F::Elt> {
        let blocks: Vec<Matrix<F::Elt>> = self
            .cartan
            .neighbors(i)
            .iter()
            .map(|&j| self.vee(j, i, &m.maps[&(j, i)], m.dims[i], m.dims[j]))
            .collect();
        linalg::vstack(&self.field, m.dims[i], &blocks)
    }

    /// `M_{i,in} ∘ M_{i,out}`, an `m_i × m_i` matrix over `κ(d_i)`.
    pub fn relation(&self, m: &SpeciesModule<F::Elt>, i: usize) -> Matrix<F::Elt> {
        linalg::mul(&self.field, &self.in_map(m, i), &self.out_map(m, i))
    }

    pub fn check_preprojective(&self, m: &SpeciesModule<F::Elt>) -> bool {
        (0..self.rank()).all(|i| linalg::is_zero(&self.field, &self.relation(m, i)))
    }

    /// Shape checks plus the preprojective relation.
    pub fn validate(&self, m: &SpeciesModule<F::Elt>) -> Result<()> {
        self.check_shape(m)?;
        if !self.check_preprojective(m) {
            return Err(Error::InvalidInput("module violates the preprojective relation".into()));
        }
        Ok(())
    }

    /// Image of `a·c ⊗ e_l` under `M_{j←i}`, for `c ∈ κ(d_i)`, as a vector over `κ(d_j)`.
    pub fn edge_apply(&self, m: &SpeciesModule<F::Elt>, j: usize, i: usize, a: usize, c: &F::Elt, l: usize) -> Vec<F::Elt> {
        let f = &self.field;
        let e = &self.edges[&(j, i)];
        let ew = e.basis.len();
        let g = &m.maps[&(j, i)];
        let dj = self.cartan.d(j);
        let dij = self.cartan.d_pair(i, j);
        let mut out = vec![f.zero(); m.dims[j]];
        for k in 0..ew {
            let x = trace_unchecked(f, dj, dij, &f.mul(&e.dual[k], c));
            if f.is_zero(&x) {
                continue;
            }
            let col = (a * ew + k) * m.dims[i] + l;
            for (r, o) in out.iter_mut().enumerate() {
                *o = f.add(o, &f.mul(&x, &g[(r, col)]));
            }
        }
        out
    }

    pub fn module_to_json(&self, m: &SpeciesModule<F::Elt>) -> Value {
        let mut maps = Map::new();
        for (&(j, i), g) in &m.maps {
            let rows: Vec<Value> = (0..g.rows())
                .map(|r| Value::Array(g.row(r).iter().map(|x| self.field.elt_to_json(x)).collect()))
                .collect();
            maps.insert(format!("{}<-{}", j + 1, i + 1), Value::Array(rows));
        }
        json!({ "dims": m.dims, "maps": maps })
    }

    /// Reads a module; edges missing from `"maps"` are zero.
    pub fn module_from_json(&self, v: &Value) -> Result<SpeciesModule<F::Elt>> {
        let bad = |msg: &str| Error::InvalidInput(format!("module JSON: {msg}"));
        let dims: Vec<usize> = v
            .get("dims")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing \"dims\""))?
            .iter()
            .map(|x| x.as_u64().map(|x| x as usize).ok_or_else(|| bad("dims must be nonnegative integers")))
            .collect::<Result<_>>()?;
        if dims.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!("{} dims for rank {}", dims.len(), self.rank())));
        }
        let mut m = self.zero_module(dims);
        if let Some(maps) = v.get("maps") {
            let maps = maps.as_object().ok_or_else(|| bad("\"maps\" must be an object"))?;
            for (key, rows) in maps {
                let (j, i) = key
                    .split_once("<-")
                    .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                    .filter(|&(a, b)| a >= 1 && b >= 1)
                    .ok_or_else(|| bad(&format!("bad map key {key:?}")))?;
                let (j, i) = (j - 1, i - 1);
                if !self.edges.contains_key(&(j, i)) {
                    return Err(bad(&format!("no edge {key}")));
                }
                let cols = self.width(j, i) * m.dims[i];
                let rows = rows.as_array().ok_or_else(|| bad("map must be a list of rows"))?;
                let parsed: Vec<Vec<F::Elt>> = rows
                    .iter()
                    .map(|r| {
                        r.as_array()
                            .ok_or_else(|| bad("row must be a list"))?
                            .iter()
                            .map(|x| self.field.elt_from_json(x))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<_>>()?;
                if parsed.len() != m.dims[j] || parsed.iter().any(|r| r.len() != cols) {
                    return Err(Error::DimensionMismatch(format!("map {key} must be {}×{cols}", m.dims[j])));
                }
                m.maps.insert((j, i), Matrix::from_rows(parsed, cols));
            }
        }
        self.check_shape(&m)?;
        Ok(m)
    }
}

/// A module over the preprojective algebra; see the module docs for layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpeciesModule<E> {
    dims: Vec<usize>,
    maps: BTreeMap<(usize, usize), Matrix<E>>,
}

impl<E: Clone> SpeciesModule<E> {
    /// Dimensions `m_i` over `κ(d_i)`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_vector(&self) -> Root {
        Root::new(self.dims.iter().map(|&m| m as i64).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&m| m == 0)
    }

    /// The matrix of `M_{j←i}`.
    pub fn map(&self, j: usize, i: usize) -> &Matrix<E> {
        &self.maps[&(j, i)]
    }

    pub fn set_map(&mut self, j: usize, i: usize, g: Matrix<E>) {
        self.maps.insert((j, i), g);
    }

    pub(crate) fn set_dim(&mut self, i: usize, m: usize) {
        self.dims[i] = m;
    }
}
