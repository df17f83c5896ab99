//! First-order differential calculi, flip-over operators and the braided
//! covariance identities they satisfy.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result, Witness};
use crate::group::MultiBraidedGroup;
use crate::id;
use crate::linalg::{factor_through, LinMap, SparseVec, Subspace};
use crate::report::{Memo, Report};

/// A bimodule `Γ` over `A` with a differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FirstOrderCalculus {
    /// Dimension of the algebra.
    pub n: usize,
    pub gdim: usize,
    /// `A ⊗ Γ -> Γ`
    pub mgl: LinMap,
    /// `Γ ⊗ A -> Γ`
    pub mgr: LinMap,
    /// `A -> Γ`
    pub d: LinMap,
}

impl FirstOrderCalculus {
    pub fn new(n: usize, gdim: usize, mgl: LinMap, mgr: LinMap, d: LinMap) -> Result<FirstOrderCalculus> {
        let want = [("mgl", &mgl, gdim, n * gdim), ("mgr", &mgr, gdim, gdim * n), ("d", &d, gdim, n)];
        for (name, m, cod, dom) in want {
            if m.cod() != cod || m.dom() != dom {
                return Err(Error::DimMismatch(format!(
                    "{name} is {}x{}, expected {cod}x{dom}",
                    m.cod(),
                    m.dom()
                )));
            }
        }
        Ok(FirstOrderCalculus { n, gdim, mgl, mgr, d })
    }

    /// The calculus with `Γ = 0`.
    pub fn zero(n: usize) -> FirstOrderCalculus {
        FirstOrderCalculus { n, gdim: 0, mgl: LinMap::zero(0, 0), mgr: LinMap::zero(0, 0), d: LinMap::zero(0, n) }
    }

    /// `ι_l = mgl(id⊗d)`, `a ⊗ b ↦ a·db`.
    pub fn iota_l(&self) -> LinMap {
        ch!(self.mgl, kr!(id(self.n), self.d))
    }

    /// `ι_r = mgr(d⊗id)`, `a ⊗ b ↦ da·b`.
    pub fn iota_r(&self) -> LinMap {
        ch!(self.mgr, kr!(self.d, id(self.n)))
    }

    /// Quotient of the calculus by a sub-bimodule `sub`.
    pub fn quotient(&self, sub: &Subspace) -> Result<FirstOrderCalculus> {
        let (n, q) = (self.n, self.gdim);
        let left = sub.tensor_left(n).image_under(&self.mgl);
        let right = sub.tensor_right(n).image_under(&self.mgr);
        for s in [left, right] {
            if let Some(v) = s.first_outside(sub) {
                let res = sub.quotient().proj.apply(&v);
                return Err(Error::NotBimodule("sub-bimodule".into(), Box::new(Witness::vector(&[q], v, res))));
            }
        }
        let quo = sub.quotient();
        let (p, s) = (&quo.proj, &quo.section);
        FirstOrderCalculus::new(
            n,
            p.cod(),
            ch!(p, self.mgl, kr!(id(n), s)),
            ch!(p, self.mgr, kr!(s, id(n))),
            ch!(p, self.d),
        )
    }
}

impl Subspace {
    /// `A ⊗ self` for an `n`-dimensional `A`.
    pub fn tensor_left(&self, n: usize) -> Subspace {
        Subspace::full(n).tensor(self)
    }

    /// `self ⊗ A` for an `n`-dimensional `A`.
    pub fn tensor_right(&self, n: usize) -> Subspace {
        self.tensor(&Subspace::full(n))
    }
}

/// Witness for a map `f` that misses part of its codomain.
pub fn surjectivity_gap(f: &LinMap) -> Option<Witness> {
    let img = f.image();
    if img.dim() == f.cod() {
        return None;
    }
    let v = (0..f.cod()).map(SparseVec::unit).find(|e| !img.contains(e)).expect("proper image");
    let res = img.quotient().proj.apply(&v);
    Some(Witness::vector(&[f.cod()], v, res))
}

pub fn check_surjective(r: &mut Report, key: &str, f: &LinMap) -> bool {
    match surjectivity_gap(f) {
        None => {
            r.pass(key, "");
            true
        }
        Some(w) => {
            r.fail(key, Some(&w), "map is not surjective");
            false
        }
    }
}

/// Leibniz rule, `d(1) = 0`, bimodule laws and surjectivity of `ι_l`, `ι_r`.
pub fn check_calculus_into(alg: &Algebra, c: &FirstOrderCalculus, r: &mut Report) -> bool {
    let (n, q) = (c.n, c.gdim);
    if alg.dim() != n {
        r.fail("SHAPES", None, format!("calculus over dim {n}, algebra has dim {}", alg.dim()));
        return false;
    }
    let (m, u) = (&alg.mult, &alg.unit);
    let (mgl, mgr, d) = (&c.mgl, &c.mgr, &c.d);
    let mut ok = r.eq("LEIBNIZ", &ch!(d, m), &(&c.iota_l() + &c.iota_r()), &[n, n]);
    ok &= r.eq("D_UNIT", &ch!(d, u), &LinMap::zero(q, 1), &[1]);
    ok &= r.eq("BIMODULE_L_ASSOC", &ch!(mgl, kr!(m, id(q))), &ch!(mgl, kr!(id(n), mgl)), &[n, n, q]);
    ok &= r.eq("BIMODULE_R_ASSOC", &ch!(mgr, kr!(id(q), m)), &ch!(mgr, kr!(mgr, id(n))), &[q, n, n]);
    ok &= r.eq("BIMODULE_MIXED", &ch!(mgr, kr!(mgl, id(n))), &ch!(mgl, kr!(id(n), mgr)), &[n, q, n]);
    ok &= r.eq("BIMODULE_L_UNIT", &ch!(mgl, kr!(u, id(q))), &id(q), &[q]);
    ok &= r.eq("BIMODULE_R_UNIT", &ch!(mgr, kr!(id(q), u)), &id(q), &[q]);
    ok &= check_surjective(r, "IOTA_L_SURJ", &c.iota_l());
    ok &= check_surjective(r, "IOTA_R_SURJ", &c.iota_r());
    ok
}

pub fn check_calculus(alg: &Algebra, c: &FirstOrderCalculus) -> Report {
    let mut r = Report::new("calculus");
    check_calculus_into(alg, c, &mut r);
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `Γ ⊗ A -> A ⊗ Γ`
    Left,
    /// `A ⊗ Γ -> Γ ⊗ A`
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipOver {
    pub side: Side,
    pub map: LinMap,
    pub inverse: LinMap,
}

/// Solves the defining equation of the flip-over operator for `braid`:
/// left `ℓ(ι_l⊗id) = (id⊗ι_l)(β⊗id)(id⊗β)`, right
/// `r(id⊗ι_r) = (ι_r⊗id)(id⊗β)(β⊗id)`.
pub fn solve_flip(c: &FirstOrderCalculus, braid: &LinMap, side: Side) -> Result<FlipOver> {
    let n = c.n;
    let (f, g, iota, name) = match side {
        Side::Left => {
            let il = c.iota_l();
            let g = ch!(kr!(id(n), il), kr!(braid, id(n)), kr!(id(n), braid));
            (kr!(il, id(n)), g, il, "left")
        }
        Side::Right => {
            let ir = c.iota_r();
            let g = ch!(kr!(ir, id(n)), kr!(id(n), braid), kr!(braid, id(n)));
            (kr!(id(n), ir), g, ir, "right")
        }
    };
    if surjectivity_gap(&iota).is_some() {
        return Err(Error::NotSurjective(format!("iota ({name})")));
    }
    let map = factor_through(&f, &g).map_err(|e| match e {
        Error::NoFactor(w) => Error::NotCovariant(format!("{name} flip"), w),
        other => other,
    })?;
    let inverse = map.invert().map_err(|_| Error::FlipNotBijective(name.into()))?;
    Ok(FlipOver { side, map, inverse })
}

type FlipSlot = std::result::Result<Arc<FlipOver>, Error>;

/// Left and right flip-over operators for the braids `σₙ` over a window
/// of shifts. Shifts with equal braids share one solve.
#[derive(Clone, Debug)]
pub struct FlipTable {
    lo: i64,
    braids: Vec<LinMap>,
    left: Vec<FlipSlot>,
    right: Vec<FlipSlot>,
    class: Vec<usize>,
}

impl FlipTable {
    pub fn solve(g: &MultiBraidedGroup, c: &FirstOrderCalculus, lo: i64, hi: i64) -> FlipTable {
        let mut by_braid: HashMap<LinMap, (FlipSlot, FlipSlot)> = HashMap::new();
        let (mut braids, mut left, mut right) = (Vec::new(), Vec::new(), Vec::new());
        for s in lo..=hi {
            let b = g.sigma_n(s);
            let (l, r) = by_braid
                .entry(b.clone())
                .or_insert_with(|| {
                    (
                        solve_flip(c, &b, Side::Left).map(Arc::new),
                        solve_flip(c, &b, Side::Right).map(Arc::new),
                    )
                })
                .clone();
            braids.push(b);
            left.push(l);
            right.push(r);
        }
        let mut t = FlipTable { lo, braids, left, right, class: Vec::new() };
        t.reclass();
        t
    }

    fn reclass(&mut self) {
        type Key = (LinMap, Option<LinMap>, Option<LinMap>);
        let mut seen: HashMap<Key, usize> = HashMap::new();
        self.class = (0..self.braids.len())
            .map(|i| {
                let key = (
                    self.braids[i].clone(),
                    self.left[i].as_ref().ok().map(|f| f.map.clone()),
                    self.right[i].as_ref().ok().map(|f| f.map.clone()),
                );
                let k = seen.len();
                *seen.entry(key).or_insert(k)
            })
            .collect();
    }

    fn idx(&self, s: i64) -> usize {
        let i = s - self.lo;
        assert!(i >= 0 && (i as usize) < self.braids.len(), "shift {s} outside flip window");
        i as usize
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.lo + self.braids.len() as i64 - 1)
    }

    pub fn braid(&self, s: i64) -> &LinMap {
        &self.braids[self.idx(s)]
    }

    pub fn left(&self, s: i64) -> Option<&FlipOver> {
        self.left[self.idx(s)].as_deref().ok()
    }

    pub fn right(&self, s: i64) -> Option<&FlipOver> {
        self.right[self.idx(s)].as_deref().ok()
    }

    pub fn left_result(&self, s: i64) -> &FlipSlot {
        &self.left[self.idx(s)]
    }

    pub fn right_result(&self, s: i64) -> &FlipSlot {
        &self.right[self.idx(s)]
    }

    pub fn class(&self, s: i64) -> usize {
        self.class[self.idx(s)]
    }

    pub fn all_left(&self) -> bool {
        self.left.iter().all(|f| f.is_ok())
    }

    pub fn all_right(&self) -> bool {
        self.right.iter().all(|f| f.is_ok())
    }

    /// Replaces one left flip. Used to build deliberately broken tables.
    pub fn replace_left(&mut self, s: i64, map: LinMap) {
        let i = self.idx(s);
        let inverse = map.invert().unwrap_or_else(|_| LinMap::zero(map.dom(), map.cod()));
        self.left[i] = Ok(Arc::new(FlipOver { side: Side::Left, map, inverse }));
        self.reclass();
    }

    /// Replaces one right flip.
    pub fn replace_right(&mut self, s: i64, map: LinMap) {
        let i = self.idx(s);
        let inverse = map.invert().unwrap_or_else(|_| LinMap::zero(map.dom(), map.cod()));
        self.right[i] = Ok(Arc::new(FlipOver { side: Side::Right, map, inverse }));
        self.reclass();
    }
}

/// Per-equation memo tables keyed by flip classes.
#[derive(Default)]
pub(crate) struct Memos(HashMap<&'static str, Memo>);

impl Memos {
    pub(crate) fn eq(
        &mut self,
        r: &mut Report,
        name: &'static str,
        suffix: &str,
        class: Vec<usize>,
        build: impl FnOnce() -> (LinMap, LinMap, Vec<usize>),
    ) -> bool {
        r.eq_memo(self.0.entry(name).or_default(), class, format!("{name}{suffix}"), build)
    }
}

fn skip_missing(r: &mut Report, key: String, slot: &FlipSlot) {
    if let Err(e) = slot {
        r.skip(key, format!("flip unavailable: {e}"));
    }
}

/// Subspace of `V` invariant under the given maps `V -> V`... expressed as
/// a containment witness check. Used for `ker ℓσ` as a sub-bimodule.
fn kernel_is_subbimodule(r: &mut Report, key: String, k: &Subspace, left: &LinMap, right: &LinMap, n: usize) {
    let l = k.tensor_left(n).image_under(left);
    let rr = k.tensor_right(n).image_under(right);
    let both = l.sum(&rr);
    r.subspace_le(key, &both, k);
}

/// Identities satisfied by a single flip-over operator and its partner
/// braid, for every shift in `[-k, k]`.
pub fn check_flip_identities(g: &MultiBraidedGroup, c: &FirstOrderCalculus, t: &FlipTable, k: i64, r: &mut Report) {
    let (n, q) = (c.n, c.gdim);
    let (m, u) = (g.m(), g.unit());
    let (mgl, mgr, d) = (&c.mgl, &c.mgr, &c.d);
    let (il, ir) = (c.iota_l(), c.iota_r());
    let mut memo = Memos::default();
    for s in -k..=k {
        let sfx = format!("_n{s}");
        let cls = vec![t.class(s)];
        let a = t.braid(s).clone();
        match t.left_result(s) {
            Ok(lf) => {
                let l = &lf.map;
                memo.eq(r, "EQ_216", &sfx, cls.clone(), || {
                    (ch!(l, kr!(il, id(n))), ch!(kr!(id(n), il), kr!(a, id(n)), kr!(id(n), a)), vec![n, n, n])
                });
                memo.eq(r, "EQ_216_IOTA_R", &sfx, cls.clone(), || {
                    (ch!(l, kr!(ir, id(n))), ch!(kr!(id(n), ir), kr!(a, id(n)), kr!(id(n), a)), vec![n, n, n])
                });
                memo.eq(r, "EQ_218_THETA", &sfx, cls.clone(), || (ch!(l, kr!(id(q), u)), kr!(u, id(q)), vec![q]));
                memo.eq(r, "EQ_218_D", &sfx, cls.clone(), || {
                    (ch!(l, kr!(d, id(n))), ch!(kr!(id(n), d), a), vec![n, n])
                });
                memo.eq(r, "EQ_220", &sfx, cls.clone(), || {
                    (
                        ch!(kr!(id(n), l), kr!(l, id(n)), kr!(id(q), a)),
                        ch!(kr!(a, id(q)), kr!(id(n), l), kr!(l, id(n))),
                        vec![q, n, n],
                    )
                });
                memo.eq(r, "EQ_221", &sfx, cls.clone(), || {
                    (ch!(kr!(id(n), mgl), kr!(a, id(q)), kr!(id(n), l)), ch!(l, kr!(mgl, id(n))), vec![n, q, n])
                });
                memo.eq(r, "EQ_222", &sfx, cls.clone(), || {
                    (ch!(kr!(id(n), mgr), kr!(l, id(n)), kr!(id(q), a)), ch!(l, kr!(mgr, id(n))), vec![q, n, n])
                });
                memo.eq(r, "EQ_223", &sfx, cls.clone(), || {
                    (ch!(kr!(m, id(q)), kr!(id(n), l), kr!(l, id(n))), ch!(l, kr!(id(q), m)), vec![q, n, n])
                });
                check_surjective(r, &format!("LFLIP_SURJ{sfx}"), l);
                kernel_is_subbimodule(
                    r,
                    format!("LFLIP_KER_SUBBIMODULE{sfx}"),
                    &l.kernel(),
                    &kr!(mgl, id(n)),
                    &kr!(id(q), m),
                    n,
                );
                memo.eq(r, "FLIP_INV_L", &sfx, cls.clone(), || {
                    let rinv = solve_flip(c, &g.sigma_n_inv(s), Side::Right)
                        .map(|f| f.map)
                        .unwrap_or_else(|_| LinMap::zero(q * n, n * q));
                    (lf.inverse.clone(), rinv, vec![n, q])
                });
            }
            slot => {
                for key in ["EQ_216", "EQ_218_D", "EQ_220", "EQ_221", "EQ_222", "EQ_223"] {
                    skip_missing(r, format!("{key}{sfx}"), slot);
                }
            }
        }
        match t.right_result(s) {
            Ok(rf) => {
                let rs = &rf.map;
                memo.eq(r, "EQ_217", &sfx, cls.clone(), || {
                    (ch!(rs, kr!(id(n), ir)), ch!(kr!(ir, id(n)), kr!(id(n), a), kr!(a, id(n))), vec![n, n, n])
                });
                memo.eq(r, "EQ_217_IOTA_L", &sfx, cls.clone(), || {
                    (ch!(rs, kr!(id(n), il)), ch!(kr!(il, id(n)), kr!(id(n), a), kr!(a, id(n))), vec![n, n, n])
                });
                memo.eq(r, "EQ_226_THETA", &sfx, cls.clone(), || (ch!(rs, kr!(u, id(q))), kr!(id(q), u), vec![q]));
                memo.eq(r, "EQ_226_D", &sfx, cls.clone(), || {
                    (ch!(rs, kr!(id(n), d)), ch!(kr!(d, id(n)), a), vec![n, n])
                });
                memo.eq(r, "EQ_227", &sfx, cls.clone(), || {
                    (
                        ch!(kr!(id(q), a), kr!(rs, id(n)), kr!(id(n), rs)),
                        ch!(kr!(rs, id(n)), kr!(id(n), rs), kr!(a, id(q))),
                        vec![n, n, q],
                    )
                });
                memo.eq(r, "EQ_228", &sfx, cls.clone(), || {
                    (ch!(kr!(id(q), m), kr!(rs, id(n)), kr!(id(n), rs)), ch!(rs, kr!(m, id(q))), vec![n, n, q])
                });
                memo.eq(r, "EQ_229", &sfx, cls.clone(), || {
                    (ch!(kr!(mgr, id(n)), kr!(id(q), a), kr!(rs, id(n))), ch!(rs, kr!(id(n), mgr)), vec![n, q, n])
                });
                memo.eq(r, "EQ_230", &sfx, cls.clone(), || {
                    (ch!(kr!(mgl, id(n)), kr!(id(n), rs), kr!(a, id(q))), ch!(rs, kr!(id(n), mgl)), vec![n, n, q])
                });
                check_surjective(r, &format!("RFLIP_SURJ{sfx}"), rs);
                kernel_is_subbimodule(
                    r,
                    format!("RFLIP_KER_SUBBIMODULE{sfx}"),
                    &rs.kernel(),
                    &kr!(m, id(q)),
                    &kr!(id(q), mgr),
                    n,
                );
                memo.eq(r, "FLIP_INV_R", &sfx, cls.clone(), || {
                    let linv = solve_flip(c, &g.sigma_n_inv(s), Side::Left)
                        .map(|f| f.map)
                        .unwrap_or_else(|_| LinMap::zero(n * q, q * n));
                    (rf.inverse.clone(), linv, vec![q, n])
                });
            }
            slot => {
                for key in ["EQ_217", "EQ_226_D", "EQ_227", "EQ_228", "EQ_229", "EQ_230"] {
                    skip_missing(r, format!("{key}{sfx}"), slot);
                }
            }
        }
        if let (Some(lf), Some(rf)) = (t.left(s), t.right(s)) {
            let (l, rs) = (&lf.map, &rf.map);
            memo.eq(r, "EQ_232", &sfx, cls.clone(), || {
                (
                    ch!(kr!(id(n), rs), kr!(a, id(q)), kr!(id(n), l)),
                    ch!(kr!(l, id(n)), kr!(id(q), a), kr!(rs, id(n))),
                    vec![n, q, n],
                )
            });
        }
    }
}

/// Identities relating flips for different braids of the family: the
/// composition laws, mixed braid relations, the `τ` flips expressed
/// through `σ` flips, coproduct and antipode twisting.
pub fn check_multi_covariance(g: &MultiBraidedGroup, c: &FirstOrderCalculus, t: &FlipTable, k: i64, r: &mut Report) {
    let (n, q) = (c.n, c.gdim);
    let (phi, eps, kappa) = (g.phi(), g.eps(), g.kappa());
    let mut memo = Memos::default();
    let have_left = (-3 * k..=3 * k).all(|s| t.left(s).is_some());
    let have_right = (-3 * k..=3 * k).all(|s| t.right(s).is_some());

    for a in -k..=k {
        for b in -k..=k {
            for cc in -k..=k {
                let sfx = format!("_a{a}_b{b}_c{cc}");
                let e = a - b + cc;
                let cls = vec![t.class(a), t.class(b), t.class(cc), t.class(e)];
                let (x, y, z) = (t.braid(a), t.braid(b), t.braid(cc));
                if have_left {
                    let (la, lb, lc, le) = (t.left(a).unwrap(), t.left(b).unwrap(), t.left(cc).unwrap(), t.left(e).unwrap());
                    memo.eq(r, "EQ_234", &sfx, cls.clone(), || {
                        (le.map.clone(), ch!(la.map, lb.inverse, lc.map), vec![q, n])
                    });
                    memo.eq(r, "EQ_235", &sfx, cls.clone(), || {
                        (
                            ch!(kr!(id(n), la.map), kr!(lb.map, id(n)), kr!(id(q), z)),
                            ch!(kr!(z, id(q)), kr!(id(n), lb.map), kr!(la.map, id(n))),
                            vec![q, n, n],
                        )
                    });
                }
                if have_right {
                    let (ra, rb, rc, re) =
                        (t.right(a).unwrap(), t.right(b).unwrap(), t.right(cc).unwrap(), t.right(e).unwrap());
                    memo.eq(r, "EQ_236", &sfx, cls.clone(), || {
                        (re.map.clone(), ch!(ra.map, rb.inverse, rc.map), vec![n, q])
                    });
                    memo.eq(r, "EQ_237", &sfx, cls.clone(), || {
                        (
                            ch!(kr!(id(q), x), kr!(rb.map, id(n)), kr!(id(n), rc.map)),
                            ch!(kr!(rc.map, id(n)), kr!(id(n), rb.map), kr!(x, id(q))),
                            vec![n, n, q],
                        )
                    });
                }
                if have_left && have_right {
                    let (ra, lc) = (t.right(a).unwrap(), t.left(cc).unwrap());
                    memo.eq(r, "EQ_238", &sfx, cls.clone(), || {
                        (
                            ch!(kr!(id(n), ra.map), kr!(y, id(q)), kr!(id(n), lc.map)),
                            ch!(kr!(lc.map, id(n)), kr!(id(q), y), kr!(ra.map, id(n))),
                            vec![n, q, n],
                        )
                    });
                }
            }
        }
    }
    if !have_left {
        r.skip("EQ_234", "left flips unavailable");
    }
    if !have_right {
        r.skip("EQ_236", "right flips unavailable");
    }

    let cls01 = vec![t.class(0), t.class(1)];
    let tau_inv = &g.tau_inv;
    if have_left {
        let (ls, lt) = (t.left(1).unwrap(), t.left(0).unwrap());
        memo.eq(r, "EQ_239", "", cls01.clone(), || {
            (
                lt.map.clone(),
                ch!(kr!(id(n), id(q), eps), kr!(id(n), ls.inverse), kr!(phi, id(q)), ls.map),
                vec![q, n],
            )
        });
        memo.eq(r, "EQ_240", "", cls01.clone(), || {
            (
                lt.inverse.clone(),
                ch!(kr!(eps, id(q), id(n)), kr!(ls.map, id(n)), kr!(id(q), phi), ls.inverse),
                vec![n, q],
            )
        });
        memo.eq(r, "EQ_240_RFLIP", "", cls01.clone(), || {
            let rt = solve_flip(c, tau_inv, Side::Right).map(|f| f.map).unwrap_or_else(|_| LinMap::zero(q * n, n * q));
            (lt.inverse.clone(), rt, vec![n, q])
        });
        memo.eq(r, "EQ_241", "", cls01.clone(), || (ch!(kr!(eps, id(q)), lt.map), kr!(id(q), eps), vec![q, n]));
    }
    if have_right {
        let (rs, rt) = (t.right(1).unwrap(), t.right(0).unwrap());
        memo.eq(r, "EQ_243", "", cls01.clone(), || {
            (
                rt.map.clone(),
                ch!(kr!(eps, id(q), id(n)), kr!(rs.inverse, id(n)), kr!(id(q), phi), rs.map),
                vec![n, q],
            )
        });
        memo.eq(r, "EQ_244", "", cls01.clone(), || {
            (
                rt.inverse.clone(),
                ch!(kr!(id(n), id(q), eps), kr!(id(n), rs.map), kr!(phi, id(q)), rs.inverse),
                vec![q, n],
            )
        });
        memo.eq(r, "EQ_244_LFLIP", "", cls01.clone(), || {
            let lt = solve_flip(c, tau_inv, Side::Left).map(|f| f.map).unwrap_or_else(|_| LinMap::zero(n * q, q * n));
            (rt.inverse.clone(), lt, vec![q, n])
        });
        memo.eq(r, "EQ_245", "", cls01.clone(), || (ch!(kr!(id(q), eps), rt.map), kr!(eps, id(q)), vec![n, q]));
    }

    for a in -k..=k {
        for b in -k..=k {
            let sfx = format!("_n{a}_m{b}");
            let cls = vec![t.class(a), t.class(b), t.class(a + b)];
            if have_left {
                let (ln, lm, lnm) = (t.left(a).unwrap(), t.left(b).unwrap(), t.left(a + b).unwrap());
                memo.eq(r, "EQ_242", &sfx, cls.clone(), || {
                    (
                        ch!(kr!(id(n), ln.map), kr!(lm.map, id(n)), kr!(id(q), phi)),
                        ch!(kr!(phi, id(q)), lnm.map),
                        vec![q, n],
                    )
                });
            }
            if have_right {
                let (rn, rm, rnm) = (t.right(a).unwrap(), t.right(b).unwrap(), t.right(a + b).unwrap());
                memo.eq(r, "EQ_246", &sfx, cls.clone(), || {
                    (
                        ch!(kr!(rn.map, id(n)), kr!(id(n), rm.map), kr!(phi, id(q))),
                        ch!(kr!(id(q), phi), rnm.map),
                        vec![n, q],
                    )
                });
            }
        }
    }
    for s in -k..=k {
        let sfx = format!("_n{s}");
        let cls = vec![t.class(s), t.class(-s)];
        if have_left {
            let (l, lm) = (t.left(s).unwrap(), t.left(-s).unwrap());
            memo.eq(r, "EQ_247", &sfx, cls.clone(), || {
                (ch!(l.map, kr!(id(q), kappa)), ch!(kr!(kappa, id(q)), lm.map), vec![q, n])
            });
        }
        if have_right {
            let (rr, rm) = (t.right(s).unwrap(), t.right(-s).unwrap());
            memo.eq(r, "EQ_248", &sfx, cls.clone(), || {
                (ch!(rr.map, kr!(kappa, id(q))), ch!(kr!(id(q), kappa), rm.map), vec![n, q])
            });
        }
    }
}
