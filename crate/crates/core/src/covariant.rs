//! Left and right group covariance of a calculus: the actions, invariant
//! forms, the classifying ideals, module trivializations and the
//! reconstruction of a calculus from an ideal.

use crate::calculus::{surjectivity_gap, FirstOrderCalculus, FlipTable, Memos};
use crate::error::{Error, Result, Witness};
use crate::group::MultiBraidedGroup;
use crate::id;
use crate::linalg::{factor_through, LinMap, SparseVec, Subspace};
use crate::report::{map_residual, Report};

/// Data of a left-covariant calculus. Maps into `Γ_inv` are in the pivot
/// coordinates of `inv`.
#[derive(Clone, Debug)]
pub struct LeftCovariant {
    /// `ℓ_Γ: Γ -> A⊗Γ`
    pub action: LinMap,
    /// Projection `P = mgl(κ⊗id)ℓ_Γ` onto left-invariant forms.
    pub p: LinMap,
    pub inv: Subspace,
    /// `π: A -> Γ_inv`
    pub pi: LinMap,
    /// `R = ker π ∩ ker ε`
    pub ideal: Subspace,
    /// `σ_*: Γ_inv⊗A -> A⊗Γ_inv`
    pub sigma_star: LinMap,
    /// `∘: Γ_inv⊗A -> Γ_inv`
    pub circ: LinMap,
}

impl LeftCovariant {
    pub fn k(&self) -> usize {
        self.inv.dim()
    }

    pub fn incl(&self) -> LinMap {
        self.inv.inclusion()
    }

    /// `π` as a map into `Γ`.
    pub fn pi_gamma(&self) -> LinMap {
        &self.incl() * &self.pi
    }
}

/// Data of a right-covariant calculus, mirroring [`LeftCovariant`].
#[derive(Clone, Debug)]
pub struct RightCovariant {
    /// `ϱ_Γ: Γ -> Γ⊗A`
    pub action: LinMap,
    /// `Q = mgr(id⊗κ)ϱ_Γ`
    pub q: LinMap,
    pub inv: Subspace,
    /// `ς: A -> invΓ`
    pub varsigma: LinMap,
    /// `K = ker ς ∩ ker ε`
    pub ideal: Subspace,
    /// `*σ: A⊗invΓ -> invΓ⊗A`
    pub star_sigma: LinMap,
    /// `•: A⊗invΓ -> invΓ`
    pub bullet: LinMap,
}

impl RightCovariant {
    pub fn k(&self) -> usize {
        self.inv.dim()
    }

    pub fn incl(&self) -> LinMap {
        self.inv.inclusion()
    }

    pub fn varsigma_gamma(&self) -> LinMap {
        &self.incl() * &self.varsigma
    }
}

fn kernel_of_eps(g: &MultiBraidedGroup) -> Subspace {
    g.eps().kernel()
}

fn inconsistent(what: &str, e: Error) -> Error {
    Error::Inconsistent(what.into(), e.witness().cloned().map(Box::new))
}

/// Solves `ℓ_Γ ι_l = (m⊗ι_l)(id⊗σ⊗id)(φ⊗φ)` and derives the left-invariant
/// structure.
pub fn solve_left_action(g: &MultiBraidedGroup, c: &FirstOrderCalculus) -> Result<LeftCovariant> {
    let n = g.dim();
    let q = c.gdim;
    let (m, phi, eps, kappa, sigma) = (g.m(), g.phi(), g.eps(), g.kappa(), g.sigma());
    let il = c.iota_l();
    if surjectivity_gap(&il).is_some() {
        return Err(Error::NotSurjective("iota_l".into()));
    }
    let rhs = ch!(kr!(m, il), kr!(id(n), sigma, id(n)), kr!(phi, phi));
    let action = factor_through(&il, &rhs).map_err(|e| match e {
        Error::NoFactor(w) => Error::NotLeftCovariant(w),
        other => other,
    })?;
    let p = ch!(c.mgl, kr!(kappa, id(q)), action);
    let inv = p.image();
    let pi = ch!(inv.coordinates(), p, c.d);
    let ideal = pi.kernel().intersect(&eps.kernel());
    let sigma_star =
        factor_through(&kr!(pi, id(n)), &ch!(kr!(id(n), pi), g.tau)).map_err(|e| inconsistent("sigma_star", e))?;
    let circ_rhs = (&(&pi * &g.m0()) - &kr!(eps, pi)).clone();
    let circ = factor_through(&kr!(pi, id(n)), &circ_rhs).map_err(|e| inconsistent("circ", e))?;
    Ok(LeftCovariant { action, p, inv, pi, ideal, sigma_star, circ })
}

/// Solves `ϱ_Γ ι_r = (ι_r⊗m)(id⊗σ⊗id)(φ⊗φ)` and derives the
/// right-invariant structure.
pub fn solve_right_action(g: &MultiBraidedGroup, c: &FirstOrderCalculus) -> Result<RightCovariant> {
    let n = g.dim();
    let q = c.gdim;
    let (m, phi, eps, kappa, sigma) = (g.m(), g.phi(), g.eps(), g.kappa(), g.sigma());
    let ir = c.iota_r();
    if surjectivity_gap(&ir).is_some() {
        return Err(Error::NotSurjective("iota_r".into()));
    }
    let rhs = ch!(kr!(ir, m), kr!(id(n), sigma, id(n)), kr!(phi, phi));
    let action = factor_through(&ir, &rhs).map_err(|e| match e {
        Error::NoFactor(w) => Error::NotRightCovariant(w),
        other => other,
    })?;
    let qm = ch!(c.mgr, kr!(id(q), kappa), action);
    let inv = qm.image();
    let varsigma = ch!(inv.coordinates(), qm, c.d);
    let ideal = varsigma.kernel().intersect(&eps.kernel());
    let star_sigma = factor_through(&kr!(id(n), varsigma), &ch!(kr!(varsigma, id(n)), g.tau))
        .map_err(|e| inconsistent("star_sigma", e))?;
    let bullet_rhs = &(&varsigma * &g.m0()) - &kr!(varsigma, eps);
    let bullet = factor_through(&kr!(id(n), varsigma), &bullet_rhs).map_err(|e| inconsistent("bullet", e))?;
    Ok(RightCovariant { action, q: qm, inv, varsigma, ideal, star_sigma, bullet })
}

/// `{θ : act(θ) = 1⊗θ}` for a left action, `{θ : act(θ) = θ⊗1}` for a right one.
fn fixed_points(act: &LinMap, embed: &LinMap) -> Subspace {
    (act - embed).kernel()
}

fn flip_class(t: &FlipTable, shifts: &[i64]) -> Vec<usize> {
    shifts.iter().map(|&s| t.class(s)).collect()
}

/// Every identity of the left-covariant structure. Flip-dependent
/// identities use the table `t` over `[-k, k]`.
pub fn check_left_covariance(
    g: &MultiBraidedGroup,
    c: &FirstOrderCalculus,
    lc: &LeftCovariant,
    t: &FlipTable,
    k: i64,
    r: &mut Report,
) {
    let (n, q, kk) = (g.dim(), c.gdim, lc.k());
    let (m, u, phi, eps, kappa, sigma) = (g.m(), g.unit(), g.phi(), g.eps(), g.kappa(), g.sigma());
    let (mgl, mgr, d) = (&c.mgl, &c.mgr, &c.d);
    let (l, p) = (&lc.action, &lc.p);
    let (il, ir) = (c.iota_l(), c.iota_r());
    let incl = lc.incl();
    let pig = lc.pi_gamma();
    let tau = &g.tau;
    let m0 = g.m0();

    r.eq("EQ_32", &ch!(l, il), &ch!(kr!(m, il), kr!(id(n), sigma, id(n)), kr!(phi, phi)), &[n, n]);
    r.eq("EQ_33", &ch!(l, d), &ch!(kr!(id(n), d), phi), &[n]);
    r.eq("EQ_34", &ch!(l, mgl), &ch!(kr!(m, mgl), kr!(id(n), sigma, id(q)), kr!(phi, l)), &[n, q]);
    r.eq("EQ_35", &ch!(l, ir), &ch!(kr!(m, ir), kr!(id(n), sigma, id(n)), kr!(phi, phi)), &[n, n]);
    r.eq("EQ_36", &ch!(kr!(eps, id(q)), l), &id(q), &[q]);
    r.eq("EQ_37", &ch!(kr!(phi, id(q)), l), &ch!(kr!(id(n), l), l), &[q]);

    match t.left(1) {
        Some(ls) => {
            let xi = ch!(kr!(m, mgr), kr!(kappa, ch!(l, mgr), kappa), kr!(l, phi));
            r.eq("EQ_38", &ls.map, &xi, &[q, n]);
            r.eq(
                "EQ_39",
                &ch!(kr!(m, mgr), kr!(id(n), ls.map, id(n)), kr!(l, phi)),
                &ch!(l, mgr),
                &[q, n],
            );
        }
        None => {
            r.fail("EQ_38", None, "left covariant calculus without a left sigma flip");
            r.skip("EQ_39", "left sigma flip unavailable");
        }
    }
    let mut memo = Memos::default();
    for a in -k..=k {
        for b in -k..=k {
            let (Some(lm), Some(lnm)) = (t.left(b), t.left(a + b)) else {
                r.skip(format!("EQ_310_n{a}_m{b}"), "flip unavailable");
                continue;
            };
            let sa = t.braid(a);
            memo.eq(r, "EQ_310", &format!("_n{a}_m{b}"), flip_class(t, &[a, b, a + b]), || {
                (
                    ch!(kr!(sa, id(q)), kr!(id(n), lm.map), kr!(l, id(n))),
                    ch!(kr!(id(n), l), lnm.map),
                    vec![q, n],
                )
            });
        }
    }
    if let (Some(lt), Some(ls)) = (t.left(0), t.left(1)) {
        r.eq(
            "EQ_311",
            &lt.map,
            &ch!(kr!(eps, id(n), id(q)), kr!(g.sigma_inv, id(q)), kr!(id(n), l), ls.map),
            &[q, n],
        );
    }

    let fixed = fixed_points(l, &kr!(u, id(q)));
    r.subspace_eq("EQ_312", &fixed, &lc.inv);
    r.eq("EQ_313", &(p * p), p, &[q]);
    r.eq("EQ_314", &ch!(p, il), &ch!(kr!(eps, ch!(p, d)), g.sigma_inv, tau), &[n, n]);
    match surjectivity_gap(&lc.pi) {
        None => r.pass("PI_SURJ", ""),
        Some(w) => r.fail("PI_SURJ", Some(&w), "pi misses invariant forms"),
    };
    let sstar_g = ch!(kr!(id(n), incl), lc.sigma_star);
    for s in -k..=k {
        let Some(ls) = t.left(s) else {
            r.skip(format!("EQ_315_n{s}"), "flip unavailable");
            continue;
        };
        memo.eq(r, "EQ_315", &format!("_n{s}"), flip_class(t, &[s]), || {
            (ch!(ls.map, kr!(pig, id(n))), ch!(kr!(id(n), pig), tau), vec![n, n])
        });
        memo.eq(r, "SIGMA_STAR_INDEP", &format!("_n{s}"), flip_class(t, &[s]), || {
            (ch!(ls.map, kr!(incl, id(n))), sstar_g.clone(), vec![kk, n])
        });
    }
    r.eq("P_A_THETA", &ch!(p, mgl, kr!(id(n), incl)), &kr!(eps, incl), &[n, kk]);
    r.eq("EQ_319", &ch!(p, mgr, kr!(pig, id(n))), &(&(&pig * &m0) - &kr!(eps, pig)), &[n, n]);
    let ker_eps = kernel_of_eps(g);
    r.subspace_le("R_IN_KER_EPS", &lc.ideal, &ker_eps);
    r.subspace_le("R_IDEAL", &lc.ideal.tensor_right(n).image_under(&m0), &lc.ideal);
    r.subspace_eq("EQ_320", &lc.ideal.tensor_right(n).image_under(tau), &lc.ideal.tensor_left(n));
    let keinc = ker_eps.inclusion();
    r.eq(
        "EQ_321",
        &ch!(lc.circ, kr!(lc.pi, id(n)), kr!(keinc, id(n))),
        &ch!(lc.pi, m0, kr!(keinc, id(n))),
        &[ker_eps.dim(), n],
    );
    r.eq(
        "EQ_321_P",
        &ch!(incl, lc.circ, kr!(lc.pi, id(n)), kr!(keinc, id(n))),
        &ch!(p, mgr, kr!(pig, id(n)), kr!(keinc, id(n))),
        &[ker_eps.dim(), n],
    );
    dim_law(r, "DIM_LAW", kk, ker_eps.dim(), lc.ideal.dim());
    let (ss, circ) = (&lc.sigma_star, &lc.circ);
    r.eq(
        "EQ_332",
        &ch!(ss, kr!(circ, id(n))),
        &ch!(kr!(id(n), circ), kr!(ss, id(n)), kr!(id(kk), tau)),
        &[kk, n, n],
    );
    r.eq("EQ_333", &ch!(kr!(m, id(kk)), kr!(id(n), ss), kr!(ss, id(n))), &ch!(ss, kr!(id(kk), m)), &[kk, n, n]);
    r.eq(
        "EQ_334",
        &ch!(lc.pi, m),
        &ch!(&kr!(eps, lc.pi) + &ch!(circ, kr!(lc.pi, id(n))), g.sigma_inv, tau),
        &[n, n],
    );

    // Left trivialization Γ ≅ A⊗Γ_inv.
    let fwd = ch!(kr!(id(n), ch!(lc.inv.coordinates(), p)), l);
    let bwd = ch!(mgl, kr!(id(n), incl));
    r.eq("LTRIV_BWD_FWD", &(&bwd * &fwd), &id(q), &[q]);
    r.eq("LTRIV_FWD_BWD", &(&fwd * &bwd), &id(n * kk), &[n, kk]);
    r.eq("EQ_316", &ch!(kr!(id(n), fwd), l), &ch!(kr!(phi, id(kk)), fwd), &[q]);
    r.eq("EQ_317", &ch!(fwd, d), &ch!(kr!(id(n), lc.pi), phi), &[n]);
    r.eq("EQ_318", &ch!(fwd, mgl), &ch!(kr!(m, id(kk)), kr!(id(n), fwd)), &[n, q]);
    r.eq(
        "EQ_322",
        &ch!(fwd, mgr),
        &ch!(kr!(m, circ), kr!(id(n), ss, id(n)), kr!(id(n), id(kk), phi), kr!(fwd, id(n))),
        &[q, n],
    );

    // Right trivialization Γ ≅ Γ_inv⊗A.
    let rt = ch!(mgr, kr!(incl, id(n)));
    let ss_inv = match ss.invert() {
        Ok(x) => {
            r.pass("SIGMA_STAR_INVERTIBLE", "");
            x
        }
        Err(_) => {
            r.fail("SIGMA_STAR_INVERTIBLE", None, Error::SigmaStarSingular.to_string());
            return;
        }
    };
    match rt.invert() {
        Ok(_) => r.pass("EQ_323", ""),
        Err(_) => r.fail("EQ_323", None, "restricted right multiplication is not bijective"),
    };
    let formula = ch!(kr!(circ, kappa), kr!(id(kk), ch!(phi, g.kappa_inv)), ss_inv);
    let rbwd = &formula * &fwd;
    r.eq("EQ_324", &(&rbwd * &rt), &id(kk * n), &[kk, n]);
    r.eq("EQ_324_INV", &(&rt * &rbwd), &id(q), &[q]);
    r.eq("EQ_325", &ch!(rbwd, mgr), &ch!(kr!(id(kk), m), kr!(rbwd, id(n))), &[q, n]);
    r.eq("EQ_326", &ch!(kr!(id(n), rbwd), l), &ch!(kr!(ss, id(n)), kr!(id(kk), phi), rbwd), &[q]);
    r.eq(
        "EQ_327",
        &ch!(rbwd, mgl),
        &ch!(
            kr!(ch!(circ, kr!(id(kk), g.kappa_inv)), m),
            kr!(id(kk), ch!(g.sigma_inv, phi), id(n)),
            kr!(ss_inv, id(n)),
            kr!(id(n), rbwd)
        ),
        &[n, q],
    );
    let minus_d = ch!(rbwd, d).scale(&crate::Scalar::from_int(-1));
    r.eq("EQ_328", &minus_d, &ch!(kr!(ch!(lc.pi, g.kappa_inv), id(n)), g.sigma_inv, phi), &[n]);
    r.eq("EQ_328_ALT", &minus_d, &ch!(kr!(lc.pi, kappa), phi, g.kappa_inv), &[n]);
}

/// Every identity of the right-covariant structure.
pub fn check_right_covariance(
    g: &MultiBraidedGroup,
    c: &FirstOrderCalculus,
    rc: &RightCovariant,
    t: &FlipTable,
    k: i64,
    r: &mut Report,
) {
    let (n, q, kk) = (g.dim(), c.gdim, rc.k());
    let (m, u, phi, eps, kappa, sigma) = (g.m(), g.unit(), g.phi(), g.eps(), g.kappa(), g.sigma());
    let (mgl, mgr, d) = (&c.mgl, &c.mgr, &c.d);
    let (rho, qm) = (&rc.action, &rc.q);
    let (il, ir) = (c.iota_l(), c.iota_r());
    let incl = rc.incl();
    let vsg = rc.varsigma_gamma();
    let tau = &g.tau;
    let m0 = g.m0();

    r.eq("EQ_31", &ch!(rho, ir), &ch!(kr!(ir, m), kr!(id(n), sigma, id(n)), kr!(phi, phi)), &[n, n]);
    r.eq("EQ_A1", &ch!(rho, il), &ch!(kr!(il, m), kr!(id(n), sigma, id(n)), kr!(phi, phi)), &[n, n]);
    r.eq("EQ_A2", &ch!(rho, mgr), &ch!(kr!(mgr, m), kr!(id(q), sigma, id(n)), kr!(rho, phi)), &[q, n]);
    r.eq("EQ_A3", &ch!(rho, d), &ch!(kr!(d, id(n)), phi), &[n]);
    r.eq("EQ_A4", &ch!(kr!(id(q), eps), rho), &id(q), &[q]);
    r.eq("EQ_A5", &ch!(kr!(rho, id(n)), rho), &ch!(kr!(id(q), phi), rho), &[q]);
    match t.right(1) {
        Some(rs) => {
            let xi = ch!(kr!(mgl, m), kr!(kappa, ch!(rho, mgl), kappa), kr!(phi, rho));
            r.eq("EQ_A6", &rs.map, &xi, &[n, q]);
            r.eq(
                "EQ_A7",
                &ch!(rho, mgl),
                &ch!(kr!(mgl, m), kr!(id(n), rs.map, id(n)), kr!(phi, rho)),
                &[n, q],
            );
        }
        None => {
            r.fail("EQ_A6", None, "right covariant calculus without a right sigma flip");
            r.skip("EQ_A7", "right sigma flip unavailable");
        }
    }
    let mut memo = Memos::default();
    for a in -k..=k {
        for b in -k..=k {
            let (Some(rm), Some(rnm)) = (t.right(b), t.right(a + b)) else {
                r.skip(format!("EQ_A8_n{a}_m{b}"), "flip unavailable");
                continue;
            };
            let sa = t.braid(a);
            memo.eq(r, "EQ_A8", &format!("_n{a}_m{b}"), flip_class(t, &[a, b, a + b]), || {
                (
                    ch!(kr!(rho, id(n)), rnm.map),
                    ch!(kr!(id(q), sa), kr!(rm.map, id(n)), kr!(id(n), rho)),
                    vec![n, q],
                )
            });
        }
    }
    let fixed = fixed_points(rho, &kr!(id(q), u));
    r.subspace_eq("EQ_A9", &fixed, &rc.inv);
    r.eq("EQ_A9_IDEMPOTENT", &(qm * qm), qm, &[q]);
    r.eq("EQ_A10", &ch!(qm, ir), &ch!(kr!(ch!(qm, d), eps), g.sigma_inv, tau), &[n, n]);
    r.eq("EQ_A11", &vsg, &ch!(mgr, kr!(d, kappa), phi), &[n]);
    for s in -k..=k {
        let Some(rs) = t.right(s) else {
            r.skip(format!("EQ_A12_n{s}"), "flip unavailable");
            continue;
        };
        memo.eq(r, "EQ_A12", &format!("_n{s}"), flip_class(t, &[s]), || {
            (ch!(rs.map, kr!(id(n), vsg)), ch!(kr!(vsg, id(n)), tau), vec![n, n])
        });
        let ssg = ch!(kr!(incl, id(n)), rc.star_sigma);
        memo.eq(r, "STAR_SIGMA_INDEP", &format!("_n{s}"), flip_class(t, &[s]), || {
            (ch!(rs.map, kr!(id(n), incl)), ssg, vec![n, kk])
        });
    }
    let (ss, bullet) = (&rc.star_sigma, &rc.bullet);
    r.eq("EQ_A19", &ch!(incl, bullet), &ch!(qm, mgl, kr!(id(n), incl)), &[n, kk]);
    r.eq(
        "EQ_A20",
        &ch!(bullet, kr!(id(n), rc.varsigma)),
        &(&(&rc.varsigma * &m0) - &kr!(rc.varsigma, eps)),
        &[n, n],
    );
    let ker_eps = kernel_of_eps(g);
    r.subspace_le("K_IN_KER_EPS", &rc.ideal, &ker_eps);
    r.subspace_le("K_IDEAL", &rc.ideal.tensor_left(n).image_under(&m0), &rc.ideal);
    r.subspace_eq("EQ_A25", &rc.ideal.tensor_left(n).image_under(tau), &rc.ideal.tensor_right(n));
    dim_law(r, "DIM_LAW_R", kk, ker_eps.dim(), rc.ideal.dim());

    // Right trivialization Γ ≅ invΓ⊗A.
    let rbwd = ch!(mgr, kr!(incl, id(n)));
    let rfwd = ch!(kr!(ch!(rc.inv.coordinates(), qm), id(n)), rho);
    r.eq("EQ_A14", &(&rfwd * &rbwd), &id(kk * n), &[kk, n]);
    r.eq("EQ_A14_INV", &(&rbwd * &rfwd), &id(q), &[q]);
    r.eq("EQ_A16", &ch!(rfwd, mgr), &ch!(kr!(id(kk), m), kr!(rfwd, id(n))), &[q, n]);
    r.eq("EQ_A16_ACTION", &ch!(kr!(rfwd, id(n)), rho), &ch!(kr!(id(kk), phi), rfwd), &[q]);
    r.eq("EQ_A17", &ch!(rfwd, d), &ch!(kr!(rc.varsigma, id(n)), phi), &[n]);
    r.eq(
        "EQ_A18",
        &ch!(rfwd, mgl),
        &ch!(kr!(bullet, m), kr!(id(n), ss, id(n)), kr!(phi, id(kk), id(n)), kr!(id(n), rfwd)),
        &[n, q],
    );

    // Left trivialization Γ ≅ A⊗invΓ.
    let ss_inv = match ss.invert() {
        Ok(x) => {
            r.pass("STAR_SIGMA_INVERTIBLE", "");
            x
        }
        Err(_) => {
            r.fail("STAR_SIGMA_INVERTIBLE", None, Error::SigmaStarSingular.to_string());
            return;
        }
    };
    let lt_inv = ch!(kr!(kappa, bullet), kr!(ch!(phi, g.kappa_inv), id(kk)), ss_inv);
    let lt = ch!(kr!(bullet, id(n)), kr!(id(n), ss), kr!(phi, id(kk)));
    r.eq("LTRIV_R_INVERSE", &(&lt_inv * &lt), &id(n * kk), &[n, kk]);
    let lfwd = &lt_inv * &rfwd;
    r.eq(
        "EQ_A21",
        &ch!(lfwd, mgr),
        &ch!(
            kr!(m, ch!(bullet, kr!(g.kappa_inv, id(kk)))),
            kr!(id(n), ch!(g.sigma_inv, phi), id(kk)),
            kr!(id(n), ss_inv),
            kr!(lfwd, id(n))
        ),
        &[q, n],
    );
    r.eq("EQ_A22", &ch!(lfwd, mgl), &ch!(kr!(m, id(kk)), kr!(id(n), lfwd)), &[n, q]);
    r.eq("EQ_A23", &ch!(kr!(lfwd, id(n)), rho), &ch!(kr!(id(n), ss), kr!(phi, id(kk)), lfwd), &[q]);
    let minus_d = ch!(lfwd, d).scale(&crate::Scalar::from_int(-1));
    r.eq("EQ_A24", &minus_d, &ch!(kr!(kappa, rc.varsigma), phi, g.kappa_inv), &[n]);
    r.eq("EQ_A24_ALT", &minus_d, &ch!(kr!(id(n), ch!(rc.varsigma, g.kappa_inv)), g.sigma_inv, phi), &[n]);
}

fn dim_law(r: &mut Report, key: &str, inv: usize, ker: usize, ideal: usize) {
    if inv + ideal == ker {
        r.pass(key, format!("{inv} = {ker} - {ideal}"));
    } else {
        r.fail(key, None, format!("dim of invariant forms {inv}, expected {ker} - {ideal}"));
    }
}

/// Which one-sided ideal condition a subspace of `ker ε` should satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealSide {
    /// Right `A₀`-ideal with `τ(R⊗A) = A⊗R`; classifies left-covariant calculi.
    Right,
    /// Left `A₀`-ideal with `τ(A⊗K) = K⊗A`; classifies right-covariant calculi.
    Left,
}

fn ideal_invalid(what: &str, w: Option<Witness>) -> Error {
    Error::IdealInvalid(what.into(), w.map(Box::new))
}

fn gap(a: &Subspace, b: &Subspace) -> Option<Witness> {
    let v = a.first_outside(b)?;
    let res = b.quotient().proj.apply(&v);
    Some(Witness::vector(&[a.ambient()], v, res))
}

/// Checks that `s` lies in `ker ε`, is an `A₀`-ideal on the given side and
/// is `τ`-stable.
pub fn validate_ideal(g: &MultiBraidedGroup, s: &Subspace, side: IdealSide) -> Result<()> {
    let n = g.dim();
    if s.ambient() != n {
        return Err(Error::DimMismatch(format!("ideal lives in dimension {}, algebra has {n}", s.ambient())));
    }
    if let Some(w) = gap(s, &kernel_of_eps(g)) {
        return Err(ideal_invalid("not contained in ker eps", Some(w)));
    }
    let m0 = g.m0();
    let (prod, lhs, rhs) = match side {
        IdealSide::Right => (s.tensor_right(n), s.tensor_right(n), s.tensor_left(n)),
        IdealSide::Left => (s.tensor_left(n), s.tensor_left(n), s.tensor_right(n)),
    };
    if let Some(w) = gap(&prod.image_under(&m0), s) {
        return Err(ideal_invalid("not closed under the A0 product", Some(w)));
    }
    let moved = lhs.image_under(&g.tau);
    if let Some(w) = gap(&moved, &rhs).or_else(|| gap(&rhs, &moved)) {
        return Err(ideal_invalid("not tau-stable", Some(w)));
    }
    Ok(())
}

/// Smallest one-sided `A₀`-ideal containing the generators, then
/// validated.
pub fn close_ideal(g: &MultiBraidedGroup, gens: &[SparseVec], side: IdealSide) -> Result<Subspace> {
    let n = g.dim();
    let ker = kernel_of_eps(g);
    for v in gens {
        if v.max_index().is_some_and(|i| i >= n) {
            return Err(Error::DimMismatch(format!("generator does not fit in dimension {n}")));
        }
        if !ker.contains(v) {
            let res = g.eps().apply(v);
            return Err(ideal_invalid("generator not in ker eps", Some(Witness::vector(&[n], v.clone(), res))));
        }
    }
    let m0 = g.m0();
    let mut s = Subspace::span(n, gens.iter().cloned());
    loop {
        let prod = match side {
            IdealSide::Right => s.tensor_right(n),
            IdealSide::Left => s.tensor_left(n),
        };
        let next = s.sum(&prod.image_under(&m0));
        if next.dim() == s.dim() {
            break;
        }
        s = next;
    }
    validate_ideal(g, &s, side)?;
    Ok(s)
}

/// `a ↦ [a - ε(a)1]` into `ker ε / s`.
fn quotient_projection(g: &MultiBraidedGroup, s: &Subspace) -> LinMap {
    let n = g.dim();
    let ker = kernel_of_eps(g);
    let coords = ker.coordinates();
    let s_in_ker = s.image_under(&coords);
    let proj = s_in_ker.quotient().proj;
    ch!(proj, coords, &id(n) - &(g.unit() * g.eps()))
}

/// The left-covariant calculus `Γ = A⊗(ker ε / R)` determined by a valid
/// ideal `R`.
pub fn reconstruct_left(g: &MultiBraidedGroup, ideal: &Subspace) -> Result<FirstOrderCalculus> {
    validate_ideal(g, ideal, IdealSide::Right)?;
    let n = g.dim();
    let (m, phi, eps) = (g.m(), g.phi(), g.eps());
    let pi = quotient_projection(g, ideal);
    let kk = pi.cod();
    let circ = factor_through(&kr!(pi, id(n)), &ch!(pi, &g.m0() - &kr!(eps, id(n))))
        .map_err(|e| ideal_invalid("product does not descend", e.witness().cloned()))?;
    let ss = factor_through(&kr!(pi, id(n)), &ch!(kr!(id(n), pi), g.tau))
        .map_err(|e| ideal_invalid("tau does not descend", e.witness().cloned()))?;
    let d = ch!(kr!(id(n), pi), phi);
    let mgl = kr!(m, id(kk));
    let mgr = ch!(kr!(m, circ), kr!(id(n), ss, id(n)), kr!(id(n), id(kk), phi));
    FirstOrderCalculus::new(n, n * kk, mgl, mgr, d)
}

/// The right-covariant calculus `Γ = (ker ε / K)⊗A` determined by a valid
/// ideal `K`.
pub fn reconstruct_right(g: &MultiBraidedGroup, ideal: &Subspace) -> Result<FirstOrderCalculus> {
    validate_ideal(g, ideal, IdealSide::Left)?;
    let n = g.dim();
    let (m, phi, eps) = (g.m(), g.phi(), g.eps());
    let vs = quotient_projection(g, ideal);
    let kk = vs.cod();
    let bullet = factor_through(&kr!(id(n), vs), &(&(&vs * &g.m0()) - &kr!(vs, eps)))
        .map_err(|e| ideal_invalid("product does not descend", e.witness().cloned()))?;
    let ss = factor_through(&kr!(id(n), vs), &ch!(kr!(vs, id(n)), g.tau))
        .map_err(|e| ideal_invalid("tau does not descend", e.witness().cloned()))?;
    let d = ch!(kr!(vs, id(n)), phi);
    let mgr = kr!(id(kk), m);
    let mgl = ch!(kr!(bullet, m), kr!(id(n), ss, id(n)), kr!(phi, id(kk), id(n)));
    FirstOrderCalculus::new(n, kk * n, mgl, mgr, d)
}

/// An invertible `T: Γ₁ -> Γ₂` intertwining both multiplications and the
/// differentials. `T` is forced by `T ι_l = ι_l'`.
pub fn find_isomorphism(c1: &FirstOrderCalculus, c2: &FirstOrderCalculus) -> Result<LinMap> {
    if c1.n != c2.n || c1.gdim != c2.gdim {
        return Err(Error::Inconsistent(format!("dimensions differ: {} vs {}", c1.gdim, c2.gdim), None));
    }
    let (n, q) = (c1.n, c1.gdim);
    let t = factor_through(&c1.iota_l(), &c2.iota_l())?;
    let tinv = t.invert().map_err(|_| Error::Inconsistent("intertwiner is singular".into(), None))?;
    let checks = [
        (&t * &c1.d, c2.d.clone(), vec![n]),
        (&t * &c1.mgl, ch!(c2.mgl, kr!(id(n), t)), vec![n, q]),
        (&t * &c1.mgr, ch!(c2.mgr, kr!(t, id(n))), vec![q, n]),
        (&t * &tinv, id(q), vec![q]),
    ];
    for (a, b, dims) in checks {
        if let Some(w) = map_residual(&a, &b, &dims).map_err(|e| Error::Inconsistent(e, None))? {
            return Err(Error::Inconsistent("intertwiner fails".into(), Some(Box::new(w))));
        }
    }
    Ok(t)
}

/// Round trips ideal -> calculus -> ideal and calculus -> ideal -> calculus
/// for a left-covariant calculus.
pub fn check_round_trips(g: &MultiBraidedGroup, c: &FirstOrderCalculus, lc: &LeftCovariant, r: &mut Report) {
    match reconstruct_left(g, &lc.ideal) {
        Ok(c2) => {
            match find_isomorphism(c, &c2) {
                Ok(_) => r.pass("ROUNDTRIP_CALCULUS", ""),
                Err(e) => r.fail("ROUNDTRIP_CALCULUS", e.witness(), e.to_string()),
            };
            match solve_left_action(g, &c2) {
                Ok(lc2) => {
                    r.subspace_eq("ROUNDTRIP_IDEAL", &lc2.ideal, &lc.ideal);
                }
                Err(e) => r.fail("ROUNDTRIP_IDEAL", e.witness(), e.to_string()),
            }
        }
        Err(e) => {
            r.fail("ROUNDTRIP_CALCULUS", e.witness(), e.to_string());
        }
    }
}

/// Right-handed counterpart of [`check_round_trips`].
pub fn check_round_trips_right(g: &MultiBraidedGroup, c: &FirstOrderCalculus, rc: &RightCovariant, r: &mut Report) {
    match reconstruct_right(g, &rc.ideal) {
        Ok(c2) => {
            match find_isomorphism(c, &c2) {
                Ok(_) => r.pass("ROUNDTRIP_CALCULUS_R", ""),
                Err(e) => r.fail("ROUNDTRIP_CALCULUS_R", e.witness(), e.to_string()),
            };
            match solve_right_action(g, &c2) {
                Ok(rc2) => {
                    r.subspace_eq("ROUNDTRIP_IDEAL_R", &rc2.ideal, &rc.ideal);
                }
                Err(e) => r.fail("ROUNDTRIP_IDEAL_R", e.witness(), e.to_string()),
            }
        }
        Err(e) => {
            r.fail("ROUNDTRIP_CALCULUS_R", e.witness(), e.to_string());
        }
    }
}
