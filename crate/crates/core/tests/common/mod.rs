//! A deliberately naive evaluator used as an oracle. Tensors are maps
//! from multi-indices to scalars and structure maps are applied one slot
//! group at a time by looping over structure constants. Nothing here goes
//! through `LinMap` composition or Kronecker products.

#![allow(dead_code)]

use std::collections::BTreeMap;

use mbqg_core::calculus::FirstOrderCalculus;
use mbqg_core::group::GroupData;
use mbqg_core::report::WitnessData;
use mbqg_core::{LinMap, Scalar, SparseVec};

pub type T = BTreeMap<Vec<usize>, Scalar>;

/// Structure constants read entry by entry: `cols[j]` is the image of the
/// `j`-th input multi-index as a list of (output multi-index, coefficient).
pub struct Op {
    arity_in: usize,
    arity_out: usize,
    dims_in: Vec<usize>,
    dims_out: Vec<usize>,
    table: Vec<Vec<(Vec<usize>, Scalar)>>,
}

fn split(mut j: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = j % dims[k];
        j /= dims[k];
    }
    out
}

pub fn flat(idx: &[usize], dims: &[usize]) -> usize {
    idx.iter().zip(dims).fold(0, |acc, (i, d)| acc * d + i)
}

impl Op {
    pub fn new(m: &LinMap, dims_in: &[usize], dims_out: &[usize]) -> Op {
        assert_eq!(dims_in.iter().product::<usize>(), m.dom());
        assert_eq!(dims_out.iter().product::<usize>(), m.cod());
        let table = (0..m.dom())
            .map(|j| {
                (0..m.cod())
                    .filter_map(|i| {
                        let c = m.get(i, j);
                        (!c.is_zero()).then(|| (split(i, dims_out), c))
                    })
                    .collect()
            })
            .collect();
        Op {
            arity_in: dims_in.len(),
            arity_out: dims_out.len(),
            dims_in: dims_in.to_vec(),
            dims_out: dims_out.to_vec(),
            table,
        }
    }

    /// Applies the map to slots `at .. at + arity_in` of every term.
    pub fn at(&self, at: usize, t: &T) -> T {
        let mut out = T::new();
        for (idx, c) in t {
            let j = flat(&idx[at..at + self.arity_in], &self.dims_in);
            for (img, k) in &self.table[j] {
                let mut key = idx[..at].to_vec();
                key.extend(img);
                key.extend(&idx[at + self.arity_in..]);
                let e = out.entry(key).or_insert_with(|| Scalar::from_int(0));
                *e += &(c * k);
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn arity_out(&self) -> usize {
        self.arity_out
    }
}

/// The group's structure constants.
pub struct Brute {
    pub n: usize,
    pub m: Op,
    pub phi: Op,
    pub kappa: Op,
    pub eps: Op,
    pub sigma: Op,
}

impl Brute {
    pub fn new(g: &GroupData) -> Brute {
        let n = g.alg.mult.cod();
        Brute {
            n,
            m: Op::new(&g.alg.mult, &[n, n], &[n]),
            phi: Op::new(&g.phi, &[n], &[n, n]),
            kappa: Op::new(&g.kappa, &[n], &[n]),
            eps: Op::new(&g.eps, &[n], &[]),
            sigma: Op::new(&g.sigma, &[n, n], &[n, n]),
        }
    }

    /// `ψ`, written out by hand.
    pub fn psi(&self, at: usize, t: &T) -> T {
        t.iter()
            .map(|(idx, c)| {
                let mut k = idx.clone();
                k.swap(at, at + 1);
                (k, c.clone())
            })
            .collect()
    }
}

/// A calculus' structure constants.
pub struct BruteCalc {
    pub q: usize,
    pub mgl: Op,
    pub mgr: Op,
    pub d: Op,
}

impl BruteCalc {
    pub fn new(c: &FirstOrderCalculus) -> BruteCalc {
        let (n, q) = (c.n, c.gdim);
        BruteCalc { q, mgl: Op::new(&c.mgl, &[n, q], &[q]), mgr: Op::new(&c.mgr, &[q, n], &[q]), d: Op::new(&c.d, &[n], &[q]) }
    }

    /// `a ⊗ b ↦ a·db`
    pub fn iota_l(&self, t: &T) -> T {
        self.mgl.at(0, &self.d.at(1, t))
    }

    /// `a ⊗ b ↦ da·b`
    pub fn iota_r(&self, t: &T) -> T {
        self.mgr.at(0, &self.d.at(0, t))
    }
}

pub fn basis(idx: &[usize]) -> T {
    T::from([(idx.to_vec(), Scalar::from_int(1))])
}

pub fn from_sparse(v: &SparseVec, dims: &[usize]) -> T {
    v.iter().map(|(j, c)| (split(*j, dims), c.clone())).collect()
}

pub fn to_sparse(t: &T, dims: &[usize]) -> SparseVec {
    SparseVec::from_entries(t.iter().map(|(k, c)| (flat(k, dims), c.clone())).collect())
}

pub fn sub(a: &T, b: &T) -> T {
    let mut out = a.clone();
    for (k, c) in b {
        let e = out.entry(k.clone()).or_insert_with(|| Scalar::from_int(0));
        *e -= c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn add(a: &T, b: &T) -> T {
    let mut out = a.clone();
    for (k, c) in b {
        let e = out.entry(k.clone()).or_insert_with(|| Scalar::from_int(0));
        *e += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn conj(t: &T) -> T {
    t.iter().map(|(k, c)| (k.clone(), c.conj())).collect()
}

/// The witness' input and residual as tensors.
pub fn witness_parts(w: &WitnessData, dims_in: &[usize], dims_out: &[usize]) -> (T, T) {
    (from_sparse(&w.input_vec().unwrap(), dims_in), from_sparse(&w.residual_vec().unwrap(), dims_out))
}
