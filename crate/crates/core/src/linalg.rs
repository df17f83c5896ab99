//! Exact linear maps between finite-dimensional coordinate spaces.
//!
//! Maps are stored as sparse columns; column `j` is the image of basis
//! vector `j`. Tensor products use the row-major convention
//! `(i ⊗ j) ↦ i * dim(B) + j`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;

use crate::error::{decode_index, encode_index, Error, Result, Witness};
use crate::scalar::Scalar;

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(Vec<(usize, Scalar)>);

impl SparseVec {
    pub fn new() -> SparseVec {
        SparseVec(Vec::new())
    }

    pub fn unit(j: usize) -> SparseVec {
        SparseVec(vec![(j, Scalar::one())])
    }

    /// Builds from arbitrary entries; duplicates are summed.
    pub fn from_entries(mut entries: Vec<(usize, Scalar)>) -> SparseVec {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(entries.len());
        for (i, s) in entries {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc += &s,
                _ => out.push((i, s)),
            }
        }
        out.retain(|e| !e.1.is_zero());
        SparseVec(out)
    }

    pub fn from_dense(v: &[Scalar]) -> SparseVec {
        SparseVec(v.iter().enumerate().filter(|e| !e.1.is_zero()).map(|(i, s)| (i, s.clone())).collect())
    }

    pub fn to_dense(&self, n: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); n];
        for (i, s) in &self.0 {
            out[*i] = s.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &(usize, Scalar)> {
        self.0.iter()
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.0.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.0[k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    /// Index of the first nonzero entry.
    pub fn lead(&self) -> Option<usize> {
        self.0.first().map(|e| e.0)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().map(|e| e.0)
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(i, s)| (*i, s * c)).collect())
    }

    pub fn conj(&self) -> SparseVec {
        SparseVec(self.0.iter().map(|(i, s)| (*i, s.conj())).collect())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Scalar, other: &SparseVec) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut p, mut q) = (0, 0);
        while p < a.len() || q < b.len() {
            if q == b.len() || (p < a.len() && a[p].0 < b[q].0) {
                out.push(a[p].clone());
                p += 1;
            } else if p == a.len() || b[q].0 < a[p].0 {
                out.push((b[q].0, c * &b[q].1));
                q += 1;
            } else {
                let s = &a[p].1 + &(c * &b[q].1);
                if !s.is_zero() {
                    out.push((a[p].0, s));
                }
                p += 1;
                q += 1;
            }
        }
        SparseVec(out)
    }

    /// Tensor product with the row-major index convention.
    pub fn kron(&self, other: &SparseVec, other_dim: usize) -> SparseVec {
        let mut out = Vec::with_capacity(self.0.len() * other.0.len());
        for (i, a) in &self.0 {
            for (j, b) in &other.0 {
                out.push((i * other_dim + j, a * b));
            }
        }
        SparseVec(out)
    }
}

impl fmt::Debug for SparseVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter().map(|(i, s)| (i, s))).finish()
    }
}

/// Dense scratch vector that remembers which slots it touched.
struct Acc {
    vals: Vec<Scalar>,
    hit: Vec<bool>,
    touched: Vec<usize>,
}

impl Acc {
    fn new(n: usize) -> Acc {
        Acc { vals: vec![Scalar::zero(); n], hit: vec![false; n], touched: Vec::new() }
    }

    fn add_scaled(&mut self, c: &Scalar, v: &SparseVec) {
        for (i, s) in v.iter() {
            self.vals[*i].add_mul(c, s);
            if !self.hit[*i] {
                self.hit[*i] = true;
                self.touched.push(*i);
            }
        }
    }

    fn take(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let v = std::mem::take(&mut self.vals[i]);
            if !v.is_zero() {
                out.push((i, v));
            }
            self.hit[i] = false;
        }
        self.touched.clear();
        SparseVec(out)
    }
}

/// Above this many column-times-row operations, composition fans out over
/// columns on the rayon pool.
const PAR_THRESHOLD: usize = 1 << 14;

/// Linear map `dom -> cod` over Q(i).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinMap {
    cod: usize,
    dom: usize,
    cols: Vec<SparseVec>,
}

impl LinMap {
    pub fn zero(cod: usize, dom: usize) -> LinMap {
        LinMap { cod, dom, cols: vec![SparseVec::new(); dom] }
    }

    pub fn identity(n: usize) -> LinMap {
        LinMap { cod: n, dom: n, cols: (0..n).map(SparseVec::unit).collect() }
    }

    pub fn from_columns(cod: usize, cols: Vec<SparseVec>) -> Result<LinMap> {
        if let Some(bad) = cols.iter().find(|c| c.max_index().is_some_and(|m| m >= cod)) {
            return Err(Error::DimMismatch(format!(
                "column entry {} outside codomain of dimension {cod}",
                bad.max_index().unwrap_or(0)
            )));
        }
        Ok(LinMap { cod, dom: cols.len(), cols })
    }

    /// Row-major dense constructor; `rows.len()` must equal `cod`.
    pub fn from_rows(cod: usize, dom: usize, rows: &[Vec<Scalar>]) -> Result<LinMap> {
        if rows.len() != cod || rows.iter().any(|r| r.len() != dom) {
            return Err(Error::DimMismatch(format!("expected a {cod}x{dom} matrix")));
        }
        Ok(LinMap::from_fn(cod, dom, |r, c| rows[r][c].clone()))
    }

    pub fn from_fn(cod: usize, dom: usize, f: impl Fn(usize, usize) -> Scalar) -> LinMap {
        let cols = (0..dom)
            .map(|c| SparseVec((0..cod).map(|r| (r, f(r, c))).filter(|e| !e.1.is_zero()).collect()))
            .collect();
        LinMap { cod, dom, cols }
    }

    /// Integer-entry convenience constructor, row-major.
    pub fn from_ints(cod: usize, dom: usize, rows: &[&[i64]]) -> LinMap {
        assert_eq!(rows.len(), cod);
        LinMap::from_fn(cod, dom, |r, c| Scalar::from_int(rows[r][c]))
    }

    /// Map whose column `j` is `cols[j]`, given densely.
    pub fn from_dense_columns(cod: usize, cols: &[Vec<Scalar>]) -> LinMap {
        LinMap { cod, dom: cols.len(), cols: cols.iter().map(|c| SparseVec::from_dense(c)).collect() }
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.cols[c].get(r)
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        let mut rows = vec![vec![Scalar::zero(); self.dom]; self.cod];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, s) in col.iter() {
                rows[*r][c] = s.clone();
            }
        }
        rows
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(SparseVec::nnz).sum()
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = Acc::new(self.cod);
        for (j, s) in v.iter() {
            acc.add_scaled(s, &self.cols[*j]);
        }
        acc.take()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinMap) -> Result<LinMap> {
        if self.dom != inner.cod {
            return Err(Error::DimMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                self.cod, self.dom, inner.cod, inner.dom
            )));
        }
        let work: usize = inner.nnz().saturating_mul(1 + self.nnz() / self.dom.max(1));
        let col = |acc: &mut Acc, c: &SparseVec| {
            for (k, s) in c.iter() {
                acc.add_scaled(s, &self.cols[*k]);
            }
            acc.take()
        };
        let cols = if work > PAR_THRESHOLD {
            inner.cols.par_iter().map_init(|| Acc::new(self.cod), |acc, c| col(acc, c)).collect()
        } else {
            let mut acc = Acc::new(self.cod);
            inner.cols.iter().map(|c| col(&mut acc, c)).collect()
        };
        Ok(LinMap { cod: self.cod, dom: inner.dom, cols })
    }

    pub fn kron(&self, other: &LinMap) -> LinMap {
        let mut cols = Vec::with_capacity(self.dom * other.dom);
        for a in &self.cols {
            for b in &other.cols {
                cols.push(a.kron(b, other.cod));
            }
        }
        LinMap { cod: self.cod * other.cod, dom: self.dom * other.dom, cols }
    }

    pub fn scale(&self, c: &Scalar) -> LinMap {
        LinMap { cod: self.cod, dom: self.dom, cols: self.cols.iter().map(|v| v.scale(c)).collect() }
    }

    pub fn conj(&self) -> LinMap {
        LinMap { cod: self.cod, dom: self.dom, cols: self.cols.iter().map(SparseVec::conj).collect() }
    }

    pub fn transpose(&self) -> LinMap {
        let mut cols = vec![Vec::new(); self.cod];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, s) in col.iter() {
                cols[*r].push((c, s.clone()));
            }
        }
        LinMap { cod: self.dom, dom: self.cod, cols: cols.into_iter().map(SparseVec).collect() }
    }

    fn zip(&self, other: &LinMap, sign: &Scalar) -> Result<LinMap> {
        if self.cod != other.cod || self.dom != other.dom {
            return Err(Error::DimMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.cod, self.dom, other.cod, other.dom
            )));
        }
        let cols = self.cols.iter().zip(&other.cols).map(|(a, b)| a.add_scaled(sign, b)).collect();
        Ok(LinMap { cod: self.cod, dom: self.dom, cols })
    }

    pub fn try_add(&self, other: &LinMap) -> Result<LinMap> {
        self.zip(other, &Scalar::one())
    }

    pub fn try_sub(&self, other: &LinMap) -> Result<LinMap> {
        self.zip(other, &Scalar::from_int(-1))
    }

    /// Restricts the domain to the listed basis vectors, in order.
    pub fn select_columns(&self, idx: &[usize]) -> LinMap {
        LinMap { cod: self.cod, dom: idx.len(), cols: idx.iter().map(|&j| self.cols[j].clone()).collect() }
    }

    pub fn rank(&self) -> usize {
        Echelon::from_map(self).rank()
    }

    pub fn is_invertible(&self) -> bool {
        self.cod == self.dom && self.rank() == self.dom
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::span(self.dom, Echelon::from_map(self).kernel.clone())
    }

    pub fn image(&self) -> Subspace {
        Subspace::span(self.cod, self.cols.iter().cloned())
    }

    pub fn invert(&self) -> Result<LinMap> {
        if self.cod != self.dom {
            return Err(Error::Singular);
        }
        let e = Echelon::from_map(self);
        if e.rank() != self.dom {
            return Err(Error::Singular);
        }
        Ok(e.left_solve(&LinMap::identity(self.dom)))
    }
}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LinMap {}x{}", self.cod, self.dom)?;
        for row in self.to_rows() {
            let cells: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Mul for &LinMap {
    type Output = LinMap;
    /// Composition; panics on a dimension mismatch.
    #[track_caller]
    fn mul(self, rhs: &LinMap) -> LinMap {
        match self.compose(rhs) {
            Ok(x) => x,
            Err(e) => panic!("{e}"),
        }
    }
}

impl Add for &LinMap {
    type Output = LinMap;
    fn add(self, rhs: &LinMap) -> LinMap {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &LinMap {
    type Output = LinMap;
    fn sub(self, rhs: &LinMap) -> LinMap {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &LinMap {
    type Output = LinMap;
    fn neg(self) -> LinMap {
        self.scale(&Scalar::from_int(-1))
    }
}

/// `maps[0] ∘ maps[1] ∘ … ∘ maps[n-1]`, evaluated right to left.
#[track_caller]
pub fn chain(maps: &[&LinMap]) -> LinMap {
    let (last, rest) = maps.split_last().expect("empty chain");
    let mut acc = (*last).clone();
    for m in rest.iter().rev() {
        acc = *m * &acc;
    }
    acc
}

/// `maps[0] ⊗ maps[1] ⊗ …`.
pub fn kron_all(maps: &[&LinMap]) -> LinMap {
    let (first, rest) = maps.split_first().expect("empty tensor product");
    rest.iter().fold((*first).clone(), |acc, m| acc.kron(m))
}

/// Reorders tensor factors: output factor `k` is input factor `perm[k]`.
/// `dims` are the input factor dimensions.
pub fn permutation_map(dims: &[usize], perm: &[usize]) -> Result<LinMap> {
    let mut seen = vec![false; dims.len()];
    if perm.len() != dims.len() || perm.iter().any(|&p| p >= dims.len() || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::DimMismatch(format!("{perm:?} is not a permutation of {} factors", dims.len())));
    }
    let out_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let n: usize = dims.iter().product();
    let cols = (0..n)
        .map(|j| {
            let idx = decode_index(dims, j);
            let out: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
            SparseVec::unit(encode_index(&out_dims, &out))
        })
        .collect();
    Ok(LinMap { cod: n, dom: n, cols })
}

/// The flip `V ⊗ W -> W ⊗ V`.
pub fn swap(v: usize, w: usize) -> LinMap {
    permutation_map(&[v, w], &[1, 0]).expect("valid permutation")
}

/// Column echelon form of a list of vectors, remembering how each stored
/// row was obtained from the inputs.
#[derive(Clone)]
pub struct Echelon {
    dim: usize,
    n_inputs: usize,
    pivot_of: Vec<Option<usize>>,
    rows: Vec<SparseVec>,
    combos: Vec<SparseVec>,
    /// Inputs that were independent of their predecessors, in order.
    pub pivot_inputs: Vec<usize>,
    /// One kernel vector per dependent input, expressed over the inputs.
    pub kernel: Vec<SparseVec>,
}

impl Echelon {
    pub fn new(dim: usize) -> Echelon {
        Echelon {
            dim,
            n_inputs: 0,
            pivot_of: vec![None; dim],
            rows: Vec::new(),
            combos: Vec::new(),
            pivot_inputs: Vec::new(),
            kernel: Vec::new(),
        }
    }

    pub fn from_map(f: &LinMap) -> Echelon {
        let mut e = Echelon::new(f.cod);
        for c in &f.cols {
            e.push(c);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v`; returns the remainder, the multiples of stored rows
    /// that were removed, and (if `track`) the matching input combination.
    fn reduce(&self, v: &SparseVec, track: Option<usize>) -> (SparseVec, Vec<(usize, Scalar)>, SparseVec) {
        let mut acc = Acc::new(self.dim);
        acc.add_scaled(&Scalar::one(), v);
        let mut combo = Acc::new(track.unwrap_or(0));
        let mut used = Vec::new();
        let start = v.lead().unwrap_or(self.dim);
        for i in start..self.dim {
            if acc.vals[i].is_zero() {
                continue;
            }
            if let Some(k) = self.pivot_of[i] {
                let c = acc.vals[i].clone();
                acc.add_scaled(&-&c, &self.rows[k]);
                if track.is_some() {
                    combo.add_scaled(&-&c, &self.combos[k]);
                }
                used.push((k, c));
            }
        }
        (acc.take(), used, combo.take())
    }

    /// Adds the next input vector. Returns `true` if it was independent.
    pub fn push(&mut self, v: &SparseVec) -> bool {
        let id = self.n_inputs;
        self.n_inputs += 1;
        let (rem, _, combo) = self.reduce(v, Some(self.n_inputs));
        let combo = combo.add_scaled(&Scalar::one(), &SparseVec::unit(id));
        match rem.lead() {
            None => {
                self.kernel.push(combo);
                false
            }
            Some(p) => {
                let inv = rem.get(p).inv().expect("nonzero pivot");
                self.pivot_of[p] = Some(self.rows.len());
                self.rows.push(rem.scale(&inv));
                self.combos.push(combo.scale(&inv));
                self.pivot_inputs.push(id);
                true
            }
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v, None).0.is_zero()
    }

    /// Input combination `x` with `sum x_j input_j = v`, if `v` is spanned.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        let (rem, used, _) = self.reduce(v, None);
        if !rem.is_zero() {
            return None;
        }
        let mut acc = Acc::new(self.n_inputs);
        for (k, c) in &used {
            acc.add_scaled(c, &self.combos[*k]);
        }
        Some(acc.take())
    }

    /// Given `g` on the inputs (column `j` = image of input `j`), returns
    /// the map `x` on the ambient space with `x(input_j) = g_j` on stored
    /// rows and `x = 0` on the standard complement. Does not check kernels.
    fn left_solve(&self, g: &LinMap) -> LinMap {
        let images: Vec<SparseVec> = self.combos.iter().map(|c| g.apply(c)).collect();
        let col = |w: usize| {
            let (_, used, _) = self.reduce(&SparseVec::unit(w), None);
            let mut acc = Acc::new(g.cod);
            for (k, c) in &used {
                acc.add_scaled(c, &images[*k]);
            }
            acc.take()
        };
        let cols = if self.dim * g.cod > PAR_THRESHOLD {
            (0..self.dim).into_par_iter().map(col).collect()
        } else {
            (0..self.dim).map(col).collect()
        };
        LinMap { cod: g.cod, dom: self.dim, cols }
    }
}

/// Finds `x` with `x ∘ f = g`. Fails with a kernel vector of `f` that `g`
/// does not annihilate.
pub fn factor_through(f: &LinMap, g: &LinMap) -> Result<LinMap> {
    if f.dom != g.dom {
        return Err(Error::DimMismatch(format!("factor_through: domains {} and {}", f.dom, g.dom)));
    }
    let e = Echelon::from_map(f);
    for k in &e.kernel {
        let r = g.apply(k);
        if !r.is_zero() {
            return Err(Error::NoFactor(Box::new(Witness::vector(&[f.dom], k.clone(), r))));
        }
    }
    Ok(e.left_solve(g))
}

/// Finds `x` with `f ∘ x = g`, or the index of a column of `g` outside the
/// image of `f`.
pub fn lift_through(f: &LinMap, g: &LinMap) -> std::result::Result<LinMap, usize> {
    assert_eq!(f.cod, g.cod, "lift_through: codomain mismatch");
    let e = Echelon::from_map(f);
    let mut cols = Vec::with_capacity(g.dom);
    for (j, c) in g.cols.iter().enumerate() {
        cols.push(e.express(c).ok_or(j)?);
    }
    Ok(LinMap { cod: f.dom, dom: g.dom, cols })
}

/// Subspace of a coordinate space, kept in reduced row echelon form so
/// that equal subspaces compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<SparseVec>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) {:?}", self.basis.len(), self.ambient, self.basis)
    }
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace { ambient, basis: (0..ambient).map(SparseVec::unit).collect() }
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Subspace {
        let mut e = Echelon::new(ambient);
        for v in vectors {
            e.push(&v);
        }
        let mut rows = e.rows;
        rows.sort_by_key(|r| r.lead());
        // Back-substitute so every pivot column is a unit column.
        for k in (0..rows.len()).rev() {
            let p = rows[k].lead().expect("nonzero row");
            for r in 0..k {
                let c = rows[r].get(p);
                if !c.is_zero() {
                    rows[r] = rows[r].add_scaled(&-&c, &rows[k]);
                }
            }
        }
        Subspace { ambient, basis: rows }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.lead().expect("nonzero row")).collect()
    }

    /// Inclusion map `S -> ambient`.
    pub fn inclusion(&self) -> LinMap {
        LinMap { cod: self.ambient, dom: self.dim(), cols: self.basis.clone() }
    }

    /// Left inverse of the inclusion: reads off pivot coordinates.
    pub fn coordinates(&self) -> LinMap {
        let mut cols = vec![SparseVec::new(); self.ambient];
        for (k, p) in self.pivots().into_iter().enumerate() {
            cols[p] = SparseVec::unit(k);
        }
        LinMap { cod: self.dim(), dom: self.ambient, cols }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        let coords = self.coordinates().apply(v);
        self.inclusion().apply(&coords) == *v
    }

    /// First basis vector of `self` outside `other`.
    pub fn first_outside(&self, other: &Subspace) -> Option<SparseVec> {
        self.basis.iter().find(|b| !other.contains(b)).cloned()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.first_outside(other).is_none()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let q = other.quotient();
        let k = (&q.proj * &self.inclusion()).kernel();
        Subspace::span(self.ambient, k.basis.iter().map(|v| self.inclusion().apply(v)))
    }

    pub fn image_under(&self, f: &LinMap) -> Subspace {
        Subspace::span(f.cod, self.basis.iter().map(|b| f.apply(b)))
    }

    /// `self ⊗ other` inside the tensor product of the ambient spaces.
    pub fn tensor(&self, other: &Subspace) -> Subspace {
        let mut v = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                v.push(a.kron(b, other.ambient));
            }
        }
        Subspace::span(self.ambient * other.ambient, v)
    }

    /// Quotient by `self`, with the complement spanned by the standard
    /// vectors at non-pivot positions.
    pub fn quotient(&self) -> Quotient {
        let pivots = self.pivots();
        let mut is_pivot = vec![false; self.ambient];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.ambient).filter(|&i| !is_pivot[i]).collect();
        let mut pos = vec![usize::MAX; self.ambient];
        for (k, &w) in free.iter().enumerate() {
            pos[w] = k;
        }
        let restrict = |v: &SparseVec| {
            SparseVec(v.iter().filter(|(i, _)| !is_pivot[*i]).map(|(i, s)| (pos[*i], s.clone())).collect())
        };
        let mut cols = vec![SparseVec::new(); self.ambient];
        for &w in &free {
            cols[w] = SparseVec::unit(pos[w]);
        }
        for (b, &p) in self.basis.iter().zip(&pivots) {
            cols[p] = restrict(b).scale(&Scalar::from_int(-1));
        }
        let proj = LinMap { cod: free.len(), dom: self.ambient, cols };
        let section = LinMap { cod: self.ambient, dom: free.len(), cols: free.iter().map(|&w| SparseVec::unit(w)).collect() };
        Quotient { proj, section }
    }
}

/// Projection onto `V / S` and a linear section of it.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub proj: LinMap,
    pub section: LinMap,
}

/// Additive map that is either linear or antilinear. An antilinear map acts
/// as `v ↦ matrix · conj(v)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Semilinear {
    pub matrix: LinMap,
    pub anti: bool,
}

impl Semilinear {
    pub fn linear(matrix: LinMap) -> Semilinear {
        Semilinear { matrix, anti: false }
    }

    pub fn antilinear(matrix: LinMap) -> Semilinear {
        Semilinear { matrix, anti: true }
    }

    pub fn cod(&self) -> usize {
        self.matrix.cod()
    }

    pub fn dom(&self) -> usize {
        self.matrix.dom()
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        if self.anti {
            self.matrix.apply(&v.conj())
        } else {
            self.matrix.apply(v)
        }
    }

    /// `self ∘ inner`. Two antilinear maps compose to a linear one.
    pub fn compose(&self, inner: &Semilinear) -> Result<Semilinear> {
        let m = if self.anti { self.matrix.compose(&inner.matrix.conj())? } else { self.matrix.compose(&inner.matrix)? };
        Ok(Semilinear { matrix: m, anti: self.anti != inner.anti })
    }

    /// Tensor product; both factors must have the same kind.
    pub fn kron(&self, other: &Semilinear) -> Result<Semilinear> {
        if self.anti != other.anti {
            return Err(Error::DimMismatch("tensor of a linear and an antilinear map".into()));
        }
        Ok(Semilinear { matrix: self.matrix.kron(&other.matrix), anti: self.anti })
    }

    pub fn image_of(&self, s: &Subspace) -> Subspace {
        Subspace::span(self.cod(), s.basis().iter().map(|b| self.apply(b)))
    }
}

impl Mul for &Semilinear {
    type Output = Semilinear;
    fn mul(self, rhs: &Semilinear) -> Semilinear {
        self.compose(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl From<LinMap> for Semilinear {
    fn from(m: LinMap) -> Semilinear {
        Semilinear::linear(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cod: usize, dom: usize, rows: &[&[i64]]) -> LinMap {
        LinMap::from_ints(cod, dom, rows)
    }

    #[test]
    fn compose_and_kron_small() {
        let a = m(2, 2, &[&[1, 2], &[3, 4]]);
        let b = m(2, 2, &[&[0, 1], &[1, 0]]);
        assert_eq!(&a * &b, m(2, 2, &[&[2, 1], &[4, 3]]));
        let k = a.kron(&b);
        assert_eq!(k.get(0, 1), Scalar::from_int(1));
        assert_eq!(k.get(3, 2), Scalar::from_int(4));
        assert_eq!(k.get(2, 1), Scalar::from_int(3));
    }

    #[test]
    fn swap_moves_factors() {
        let s = swap(2, 3);
        // e_1 ⊗ e_2 = index 5  ->  e_2 ⊗ e_1 = index 2*2+1 = 5
        assert_eq!(s.apply(&SparseVec::unit(5)), SparseVec::unit(5));
        // e_0 ⊗ e_1 = 1 -> e_1 ⊗ e_0 = 2
        assert_eq!(s.apply(&SparseVec::unit(1)), SparseVec::unit(2));
        assert_eq!(&swap(3, 2) * &s, LinMap::identity(6));
        assert!(permutation_map(&[2, 2], &[0, 0]).is_err());
    }

    #[test]
    fn kernel_image_invert() {
        let f = m(2, 3, &[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(f.rank(), 1);
        assert_eq!(f.kernel().dim(), 2);
        assert_eq!(f.image(), Subspace::span(2, [SparseVec::from_dense(&[1.into(), 2.into()])]));
        let g = m(2, 2, &[&[2, 1], &[1, 1]]);
        let gi = g.invert().unwrap();
        assert_eq!(&g * &gi, LinMap::identity(2));
        assert!(f.invert().is_err());
        assert!(m(2, 2, &[&[1, 1], &[1, 1]]).invert().is_err());
    }

    #[test]
    fn factor_through_reports_kernel_witness() {
        let f = m(1, 2, &[&[1, 1]]);
        let g = m(1, 2, &[&[3, 3]]);
        let x = factor_through(&f, &g).unwrap();
        assert_eq!(&x * &f, g);
        let bad = m(1, 2, &[&[1, 0]]);
        match factor_through(&f, &bad) {
            Err(Error::NoFactor(w)) => {
                assert!(f.apply(&w.input).is_zero());
                assert!(!bad.apply(&w.input).is_zero());
            }
            other => panic!("expected NoFactor, got {other:?}"),
        }
    }

    #[test]
    fn quotient_kills_subspace() {
        let s = Subspace::span(3, [SparseVec::from_dense(&[1.into(), 1.into(), 0.into()])]);
        let q = s.quotient();
        assert_eq!(q.proj.cod(), 2);
        assert!((&q.proj * &s.inclusion()).is_zero());
        assert_eq!(&q.proj * &q.section, LinMap::identity(2));
    }

    #[test]
    fn subspace_ops() {
        let e = |v: &[i64]| SparseVec::from_dense(&v.iter().map(|&x| Scalar::from_int(x)).collect::<Vec<_>>());
        let a = Subspace::span(3, [e(&[1, 0, 0]), e(&[0, 1, 0])]);
        let b = Subspace::span(3, [e(&[0, 1, 0]), e(&[0, 0, 1])]);
        assert_eq!(a.intersect(&b), Subspace::span(3, [e(&[0, 1, 0])]));
        assert_eq!(a.sum(&b), Subspace::full(3));
        assert!(!a.is_subspace_of(&b));
        assert_eq!(a.first_outside(&b), Some(e(&[1, 0, 0])));
        // Same span from different generators compares equal.
        assert_eq!(a, Subspace::span(3, [e(&[1, 1, 0]), e(&[1, -1, 0])]));
    }

    #[test]
    fn semilinear_composition_rules() {
        let i = Scalar::i();
        let l = LinMap::from_fn(1, 1, |_, _| i.clone());
        let anti = Semilinear::antilinear(LinMap::identity(1));
        let lin = Semilinear::linear(l);
        // conj(i * conj(v)) = -i v  → linear with matrix -i
        let c = &anti * &(&lin * &anti);
        assert!(!c.anti);
        assert_eq!(c.matrix.get(0, 0), -&i);
        assert!((&anti * &lin).anti);
        assert!(lin.kron(&anti).is_err());
    }
}
