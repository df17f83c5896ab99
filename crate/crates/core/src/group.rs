//! Multi-braided quantum groups: structure maps, the derived braidings
//! `τ` and `σₙ`, the simplified algebra `A₀`, its antipode `κ₀`, the
//! adjoint coaction, and braid systems.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use crate::algebra::{check_algebra_into, Algebra};
use crate::error::{Error, Result};
use crate::id;
use crate::linalg::{swap, LinMap};
use crate::report::{map_residual, Memo, Report};

/// Shifts with `|n|` up to this bound are cached.
pub const SIGMA_CACHE_BOUND: i64 = 16;

/// Raw structure maps of a candidate multi-braided group. Nothing is
/// assumed about them beyond matching shapes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupData {
    pub alg: Algebra,
    /// `n -> n²`
    pub phi: LinMap,
    /// `n -> 1`
    pub eps: LinMap,
    pub kappa: LinMap,
    /// `n² -> n²`
    pub sigma: LinMap,
}

impl GroupData {
    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn validate_shapes(&self) -> Result<()> {
        let n = self.dim();
        let want = [
            ("coproduct", &self.phi, n * n, n),
            ("counit", &self.eps, 1, n),
            ("antipode", &self.kappa, n, n),
            ("sigma", &self.sigma, n * n, n * n),
        ];
        for (name, m, cod, dom) in want {
            if m.cod() != cod || m.dom() != dom {
                return Err(Error::DimMismatch(format!(
                    "{name} is {}x{}, expected {cod}x{dom}",
                    m.cod(),
                    m.dom()
                )));
            }
        }
        Ok(())
    }
}

/// Computes `τ` from both defining expressions and insists they agree:
/// `(ε⊗id²)(σ⁻¹⊗id)(id⊗φ)σ = (id²⊗ε)(id⊗σ⁻¹)(φ⊗id)σ`.
pub fn derive_tau(g: &GroupData, sigma_inv: &LinMap) -> Result<LinMap> {
    let n = g.dim();
    let (phi, eps, s) = (&g.phi, &g.eps, &g.sigma);
    let t1 = ch!(kr!(eps, id(n), id(n)), kr!(sigma_inv, id(n)), kr!(id(n), phi), s);
    let t2 = ch!(kr!(id(n), id(n), eps), kr!(id(n), sigma_inv), kr!(phi, id(n)), s);
    if let Some(w) = map_residual(&t1, &t2, &[n, n]).expect("same shape") {
        return Err(Error::TauMismatch(Box::new(w)));
    }
    if !t1.is_invertible() {
        return Err(Error::TauSingular);
    }
    Ok(t1)
}

/// A multi-braided group together with its derived maps.
#[derive(Debug)]
pub struct MultiBraidedGroup {
    pub data: GroupData,
    pub kappa_inv: LinMap,
    pub sigma_inv: LinMap,
    pub tau: LinMap,
    pub tau_inv: LinMap,
    paranoid: bool,
    sigma_cache: Vec<OnceLock<LinMap>>,
    m0: OnceLock<LinMap>,
    ad: OnceLock<LinMap>,
}

impl MultiBraidedGroup {
    pub fn new(data: GroupData) -> Result<MultiBraidedGroup> {
        data.validate_shapes()?;
        let kappa_inv = data.kappa.invert().map_err(|_| Error::NotInvertible("kappa".into()))?;
        let sigma_inv = data.sigma.invert().map_err(|_| Error::NotInvertible("sigma".into()))?;
        let tau = derive_tau(&data, &sigma_inv)?;
        let tau_inv = tau.invert().map_err(|_| Error::TauSingular)?;
        let slots = (2 * SIGMA_CACHE_BOUND + 1) as usize;
        Ok(MultiBraidedGroup {
            data,
            kappa_inv,
            sigma_inv,
            tau,
            tau_inv,
            paranoid: false,
            sigma_cache: (0..slots).map(|_| OnceLock::new()).collect(),
            m0: OnceLock::new(),
            ad: OnceLock::new(),
        })
    }

    /// Disables caching of derived maps; every request recomputes.
    pub fn with_paranoid(mut self, on: bool) -> MultiBraidedGroup {
        self.paranoid = on;
        self
    }

    pub fn paranoid(&self) -> bool {
        self.paranoid
    }

    pub fn dim(&self) -> usize {
        self.data.dim()
    }
    pub fn m(&self) -> &LinMap {
        &self.data.alg.mult
    }
    pub fn unit(&self) -> &LinMap {
        &self.data.alg.unit
    }
    pub fn phi(&self) -> &LinMap {
        &self.data.phi
    }
    pub fn eps(&self) -> &LinMap {
        &self.data.eps
    }
    pub fn kappa(&self) -> &LinMap {
        &self.data.kappa
    }
    pub fn sigma(&self) -> &LinMap {
        &self.data.sigma
    }

    /// `σₙ = (στ⁻¹)ⁿ⁻¹σ`.
    pub fn sigma_n(&self, n: i64) -> LinMap {
        if self.paranoid || n.abs() > SIGMA_CACHE_BOUND {
            return self.sigma_n_fresh(n);
        }
        self.sigma_cache[(n + SIGMA_CACHE_BOUND) as usize].get_or_init(|| self.sigma_n_fresh(n)).clone()
    }

    pub fn sigma_n_fresh(&self, n: i64) -> LinMap {
        let step = if n >= 1 { &self.data.sigma * &self.tau_inv } else { &self.tau * &self.sigma_inv };
        pow(&step, (n - 1).unsigned_abs()).compose(&self.data.sigma).expect("square maps")
    }

    /// The second expression `σ(τ⁻¹σ)ⁿ⁻¹`.
    pub fn sigma_n_alt(&self, n: i64) -> LinMap {
        let step = if n >= 1 { &self.tau_inv * &self.data.sigma } else { &self.sigma_inv * &self.tau };
        self.data.sigma.compose(&pow(&step, (n - 1).unsigned_abs())).expect("square maps")
    }

    /// Inverse of `σₙ`, which is `σ⁻¹(τσ⁻¹)ⁿ⁻¹`.
    pub fn sigma_n_inv(&self, n: i64) -> LinMap {
        let step = if n >= 1 { &self.tau * &self.sigma_inv } else { &self.data.sigma * &self.tau_inv };
        self.sigma_inv.compose(&pow(&step, (n - 1).unsigned_abs())).expect("square maps")
    }

    /// Product of `A₀`: `m₀ = mτ⁻¹σ`.
    pub fn m0(&self) -> LinMap {
        let f = || ch!(self.m(), self.tau_inv, self.sigma());
        if self.paranoid {
            return f();
        }
        self.m0.get_or_init(f).clone()
    }

    pub fn simplified_algebra(&self) -> Algebra {
        Algebra { unit: self.unit().clone(), mult: self.m0() }
    }

    /// Antipode of `A₀`, `κ₀ = (ε⊗κ)σφ = (κ⊗ε)σφ`.
    pub fn kappa0(&self) -> Result<LinMap> {
        let n = self.dim();
        let a = ch!(kr!(self.eps(), self.kappa()), self.sigma(), self.phi());
        let b = ch!(kr!(self.kappa(), self.eps()), self.sigma(), self.phi());
        match map_residual(&a, &b, &[n]).expect("same shape") {
            None => Ok(a),
            Some(w) => Err(Error::Kappa0Mismatch(Box::new(w))),
        }
    }

    /// Adjoint coaction `ad = (id⊗m)(id⊗κ⊗id)(τ⊗id)(id⊗φ)φ`.
    pub fn ad(&self) -> LinMap {
        let n = self.dim();
        let f = || {
            ch!(
                kr!(id(n), self.m()),
                kr!(id(n), self.kappa(), id(n)),
                kr!(self.tau, id(n)),
                kr!(id(n), self.phi()),
                self.phi()
            )
        };
        if self.paranoid {
            return f();
        }
        self.ad.get_or_init(f).clone()
    }

    /// Groups the shifts `lo..=hi` by exact equality of `σₙ`.
    pub fn braid_classes(&self, lo: i64, hi: i64) -> BraidClasses {
        let mut seen: HashMap<LinMap, usize> = HashMap::new();
        let mut class = Vec::new();
        for n in lo..=hi {
            let s = self.sigma_n(n);
            let k = seen.len();
            class.push(*seen.entry(s).or_insert(k));
        }
        BraidClasses { lo, class }
    }
}

/// Equality classes of the maps `σₙ` over a window of shifts.
#[derive(Clone, Debug)]
pub struct BraidClasses {
    lo: i64,
    class: Vec<usize>,
}

impl BraidClasses {
    pub fn of(&self, n: i64) -> usize {
        self.class[(n - self.lo) as usize]
    }

    pub fn distinct(&self) -> usize {
        self.class.iter().max().map_or(0, |m| m + 1)
    }
}

fn pow(m: &LinMap, k: u64) -> LinMap {
    let mut acc = LinMap::identity(m.dom());
    for _ in 0..k {
        acc = m * &acc;
    }
    acc
}

/// Options shared by the checkers.
#[derive(Clone, Copy, Debug)]
pub struct CheckOpts {
    /// Shift window `[-range, range]` for `σₙ`-indexed identities.
    pub range: i64,
    pub paranoid: bool,
}

impl Default for CheckOpts {
    fn default() -> CheckOpts {
        CheckOpts { range: 2, paranoid: false }
    }
}

/// Shift label used in report keys: `n1`, `n-2`.
pub fn shift(prefix: &str, n: i64) -> String {
    format!("{prefix}{n}")
}

/// Full group-level verification. Returns the report and, when the data
/// admits `τ`, the derived group.
pub fn check_group(data: &GroupData, opts: CheckOpts) -> (Report, Option<MultiBraidedGroup>) {
    let mut r = Report::new("group");
    if let Err(e) = data.validate_shapes() {
        r.fail("SHAPES", None, e.to_string());
        return (r, None);
    }
    let n = data.dim();
    let (m, u, phi, eps, kappa, s) = (&data.alg.mult, &data.alg.unit, &data.phi, &data.eps, &data.kappa, &data.sigma);
    let one = id(1);

    check_algebra_into(&data.alg, "ALG_", &mut r);
    r.eq("COASSOC", &ch!(kr!(phi, id(n)), phi), &ch!(kr!(id(n), phi), phi), &[n]);
    r.eq("COUNIT_L", &ch!(kr!(eps, id(n)), phi), &id(n), &[n]);
    r.eq("COUNIT_R", &ch!(kr!(id(n), eps), phi), &id(n), &[n]);
    r.eq("ANTIPODE_L", &ch!(m, kr!(kappa, id(n)), phi), &ch!(u, eps), &[n]);
    r.eq("ANTIPODE_R", &ch!(m, kr!(id(n), kappa), phi), &ch!(u, eps), &[n]);
    r.eq("PHI_UNIT", &ch!(phi, u), &kr!(u, u), &[1]);
    r.eq("EPS_UNIT", &ch!(eps, u), &one, &[1]);
    let kappa_ok = r.outcome("KAPPA_INVERTIBLE", &kappa.invert());
    let sigma_inv = s.invert();
    r.outcome("SIGMA_INVERTIBLE", &sigma_inv);
    r.eq(
        "SIGMA_YB",
        &ch!(kr!(s, id(n)), kr!(id(n), s), kr!(s, id(n))),
        &ch!(kr!(id(n), s), kr!(s, id(n)), kr!(id(n), s)),
        &[n, n, n],
    );
    r.eq("HEX_L", &ch!(kr!(id(n), m), kr!(s, id(n)), kr!(id(n), s)), &ch!(s, kr!(m, id(n))), &[n, n, n]);
    r.eq("HEX_R", &ch!(kr!(m, id(n)), kr!(id(n), s), kr!(s, id(n))), &ch!(s, kr!(id(n), m)), &[n, n, n]);
    r.eq("PHI_MULT", &ch!(phi, m), &ch!(kr!(m, m), kr!(id(n), s, id(n)), kr!(phi, phi)), &[n, n]);
    r.eq("UNIT_SIGMA_L", &ch!(s, kr!(u, id(n))), &kr!(id(n), u), &[n]);
    r.eq("UNIT_SIGMA_R", &ch!(s, kr!(id(n), u)), &kr!(u, id(n)), &[n]);
    r.eq("EPS_SIGMA_L", &ch!(kr!(eps, id(n)), s), &kr!(id(n), eps), &[n, n]);
    r.eq("EPS_SIGMA_R", &ch!(kr!(id(n), eps), s), &kr!(eps, id(n)), &[n, n]);

    let Ok(sigma_inv) = sigma_inv else {
        r.skip("TAU_OK", "sigma is not invertible");
        return (r, None);
    };
    let tau = derive_tau(data, &sigma_inv);
    r.outcome("TAU_OK", &tau);
    let Ok(tau) = tau else {
        return (r, None);
    };
    let t = &tau;
    r.eq("EPS_MULT", &ch!(eps, m), &ch!(kr!(eps, eps), sigma_inv, t), &[n, n]);
    r.eq("EPS_SIGMA", &ch!(kr!(eps, eps), sigma_inv, t), &kr!(eps, eps), &[n, n]);
    r.eq("EPS_TAU_L", &ch!(kr!(eps, id(n)), t), &kr!(id(n), eps), &[n, n]);
    r.eq("EPS_TAU_R", &ch!(kr!(id(n), eps), t), &kr!(eps, id(n)), &[n, n]);

    let sys = BraidSystem { dim: n, elements: vec![s.clone(), tau.clone()] };
    let mut sub = Report::new("group");
    check_braid_system_into(&sys, &data.alg, "SYS_", &mut sub);
    let sys_ok = sub.is_ok();
    r.extend(sub);
    if sys_ok {
        r.pass("SYS_OK", "{sigma, tau} is a braid system");
    } else {
        r.fail("SYS_OK", None, "see SYS_ entries");
    }

    if !kappa_ok {
        return (r, None);
    }
    let g = match MultiBraidedGroup::new(data.clone()) {
        Ok(g) => g.with_paranoid(opts.paranoid),
        Err(e) => {
            r.fail("DERIVED", e.witness(), e.to_string());
            return (r, None);
        }
    };
    check_derived(&g, opts, &mut r);
    (r, Some(g))
}

/// Checks on the derived maps of a group that admits them.
fn check_derived(g: &MultiBraidedGroup, opts: CheckOpts, r: &mut Report) {
    let n = g.dim();
    let k = opts.range;
    let wide = k.max(4);

    for s in -wide..=wide {
        r.eq(shift("SIGMA_N_AGREE_n", s), &g.sigma_n(s), &g.sigma_n_alt(s), &[n, n]);
        if g.paranoid {
            r.eq(shift("SIGMA_N_FRESH_n", s), &g.sigma_n(s), &g.sigma_n_fresh(s), &[n, n]);
        }
    }
    r.eq("SIGMA_1", &g.sigma_n(1), g.sigma(), &[n, n]);
    r.eq("SIGMA_0_IS_TAU", &g.sigma_n(0), &g.tau, &[n, n]);
    let ts = &g.tau * &g.sigma_inv;
    r.eq("SIGMA_M2_FORMULA", &g.sigma_n(-2), &ch!(ts, ts, g.tau), &[n, n]);

    // Classical-limit observations: these hold exactly when σ = τ.
    let classical = g.tau == *g.sigma();
    r.observe("SIGMA_EQ_TAU", classical, "");
    for s in -wide..=wide {
        r.observe(shift("SIGMA_N_EQ_SIGMA_n", s), g.sigma_n(s) == *g.sigma(), "");
    }
    r.observe("A0_EQ_A", g.m0() == *g.m(), "");

    let a0 = g.simplified_algebra();
    check_algebra_into(&a0, "A0_", r);
    match g.kappa0() {
        Ok(k0) => {
            r.pass("KAPPA0_AGREE", "");
            let (eps, phi, u, m0) = (g.eps(), g.phi(), g.unit(), g.m0());
            r.eq("KAPPA0_EPS", &ch!(eps, k0), eps, &[n]);
            r.eq("KAPPA0_ANTIPODE_L", &ch!(m0, kr!(k0, id(n)), phi), &ch!(u, eps), &[n]);
            r.eq("KAPPA0_ANTIPODE_R", &ch!(m0, kr!(id(n), k0), phi), &ch!(u, eps), &[n]);
        }
        Err(e) => {
            r.fail("KAPPA0_AGREE", e.witness(), e.to_string());
        }
    }
    check_ad(g, k, r);
    explore_kappa_shifts(g, k, r);
}

fn check_ad(g: &MultiBraidedGroup, k: i64, r: &mut Report) {
    let n = g.dim();
    let (m, phi, eps, kappa, tau, u) = (g.m(), g.phi(), g.eps(), g.kappa(), &g.tau, g.unit());
    let ad = g.ad();
    // Form of ad used in the twisting proofs.
    let alt = ch!(kr!(id(n), m), kr!(tau, id(n)), kr!(kappa, id(n), id(n)), kr!(phi, id(n)), phi);
    r.eq("EQ_B1", &ad, &alt, &[n]);
    r.eq("EQ_B3", &ch!(kr!(id(n), eps), ad), &id(n), &[n]);
    r.eq("EQ_B4", &ch!(kr!(id(n), phi), ad), &ch!(kr!(ad, id(n)), ad), &[n]);
    r.eq("LEM_B2_COUNIT", &ch!(kr!(eps, id(n)), ad), &ch!(u, eps), &[n]);
    let m_id_kappa = ch!(m, kr!(id(n), kappa));
    r.eq(
        "LEM_B2_SECOND",
        &ch!(kr!(id(n), m_id_kappa, id(n)), kr!(ad, phi), phi),
        &ch!(kr!(id(n), kappa, id(n)), kr!(tau, id(n)), kr!(id(n), phi), phi),
        &[n],
    );
    let classes = g.braid_classes(-k, k);
    let mut memo7 = Memo::new();
    let mut memo8 = Memo::new();
    for a in -k..=k {
        for b in -k..=k {
            let key = format!("_n{a}_m{b}");
            r.eq_memo(&mut memo7, vec![classes.of(a), classes.of(b)], format!("EQ_B7{key}"), || {
                let (sn, sm) = (g.sigma_n(a), g.sigma_n(b));
                (
                    ch!(kr!(id(n), ad), sm),
                    ch!(kr!(sm, id(n)), kr!(id(n), sn), kr!(ad, id(n))),
                    vec![n, n],
                )
            });
            r.eq_memo(&mut memo8, vec![classes.of(a), classes.of(b)], format!("EQ_B8{key}"), || {
                let (sn, sm) = (g.sigma_n(a), g.sigma_n(b));
                (
                    ch!(kr!(ad, id(n)), sn),
                    ch!(kr!(id(n), sm), kr!(sn, id(n)), kr!(id(n), ad)),
                    vec![n, n],
                )
            });
        }
    }
}

/// Records which shifts relate `σₙ` to the antipode. Nothing here is
/// asserted; the findings go to the observation list.
fn explore_kappa_shifts(g: &MultiBraidedGroup, k: i64, r: &mut Report) {
    let n = g.dim();
    let kappa = g.kappa();
    let patterns: [(&str, LinMap, LinMap); 3] = [
        ("KAPPA_SHIFT_BOTH", kr!(kappa, kappa), kr!(kappa, kappa)),
        ("KAPPA_SHIFT_LEFT", kr!(kappa, id(n)), kr!(id(n), kappa)),
        ("KAPPA_SHIFT_RIGHT", kr!(id(n), kappa), kr!(kappa, id(n))),
    ];
    for (name, inner, outer) in &patterns {
        for a in -k..=k {
            let lhs = ch!(g.sigma_n(a), inner);
            let hits: Vec<String> =
                (-k..=k).filter(|&b| lhs == ch!(outer, g.sigma_n(b))).map(|b| b.to_string()).collect();
            r.observe(
                format!("{name}_n{a}"),
                !hits.is_empty(),
                format!("sigma_n{a} intertwines with sigma_k for k in [{}]", hits.join(",")),
            );
        }
    }
}

/// A finite set of braidings over one carrier space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidSystem {
    pub dim: usize,
    pub elements: Vec<LinMap>,
}

/// Per element: invertibility and both hexagons with the algebra's
/// product. Per ordered triple `(α, β, γ)`:
/// `(id⊗α)(β⊗id)(id⊗γ) = (γ⊗id)(id⊗β)(α⊗id)`.
pub fn check_braid_system_into(t: &BraidSystem, alg: &Algebra, prefix: &str, r: &mut Report) {
    let n = t.dim;
    let m = &alg.mult;
    for (i, s) in t.elements.iter().enumerate() {
        r.outcome(format!("{prefix}INV_{i}"), &s.invert());
        r.eq(
            format!("{prefix}HEX_L_{i}"),
            &ch!(kr!(id(n), m), kr!(s, id(n)), kr!(id(n), s)),
            &ch!(s, kr!(m, id(n))),
            &[n, n, n],
        );
        r.eq(
            format!("{prefix}HEX_R_{i}"),
            &ch!(kr!(m, id(n)), kr!(id(n), s), kr!(s, id(n))),
            &ch!(s, kr!(id(n), m)),
            &[n, n, n],
        );
    }
    let e = &t.elements;
    for (a, x) in e.iter().enumerate() {
        for (b, y) in e.iter().enumerate() {
            for (c, z) in e.iter().enumerate() {
                r.eq(
                    format!("{prefix}MIXED_{a}_{b}_{c}"),
                    &ch!(kr!(id(n), x), kr!(y, id(n)), kr!(id(n), z)),
                    &ch!(kr!(z, id(n)), kr!(id(n), y), kr!(x, id(n))),
                    &[n, n, n],
                );
            }
        }
    }
}

pub fn check_braid_system(t: &BraidSystem, alg: &Algebra) -> Report {
    let mut r = Report::new("braid-system");
    check_braid_system_into(t, alg, "", &mut r);
    r
}

/// Result of closing a braid system under `(α, β, γ) ↦ αβ⁻¹γ`.
#[derive(Clone, Debug)]
pub struct Completion {
    pub system: BraidSystem,
    /// Set when the size bound stopped the closure early.
    pub truncated: bool,
}

#[allow(clippy::needless_range_loop)]
pub fn complete_braid_system(t: &BraidSystem, max_elems: usize) -> Result<Completion> {
    let mut elems: Vec<LinMap> = Vec::new();
    let mut seen: HashSet<LinMap> = HashSet::new();
    for s in &t.elements {
        if seen.insert(s.clone()) {
            elems.push(s.clone());
        }
    }
    let mut invs: Vec<LinMap> = elems.iter().map(|s| s.invert()).collect::<Result<_>>()?;
    let mut done = 0;
    // Every triple involving at least one element at index >= done is new.
    while done < elems.len() {
        let len = elems.len();
        let mut fresh = Vec::new();
        for a in 0..len {
            for b in 0..len {
                for c in 0..len {
                    if a < done && b < done && c < done {
                        continue;
                    }
                    let d = ch!(elems[a], invs[b], elems[c]);
                    if seen.insert(d.clone()) {
                        fresh.push(d);
                    }
                }
            }
        }
        done = len;
        for d in fresh {
            if elems.len() >= max_elems {
                return Ok(Completion { system: BraidSystem { dim: t.dim, elements: elems }, truncated: true });
            }
            invs.push(d.invert()?);
            elems.push(d);
        }
    }
    Ok(Completion { system: BraidSystem { dim: t.dim, elements: elems }, truncated: false })
}

/// The flip `ψ` on `A ⊗ A`.
pub fn psi(n: usize) -> LinMap {
    swap(n, n)
}

/// Witness-producing check that a braid system closes within `max_elems`.
pub fn require_closed(c: &Completion) -> Result<()> {
    if c.truncated {
        return Err(Error::Truncated(c.system.elements.len()));
    }
    Ok(())
}
