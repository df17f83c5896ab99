//! Bicovariant calculi, the adjoint criterion for an ideal, and antipodal
//! (κ-) covariance with the operator `ϰ`.

use crate::calculus::{FirstOrderCalculus, FlipTable, Memos};
use crate::covariant::{validate_ideal, IdealSide, LeftCovariant, RightCovariant};
use crate::error::{Error, Result, Witness};
use crate::group::MultiBraidedGroup;
use crate::id;
use crate::linalg::{factor_through, LinMap, Subspace};
use crate::report::Report;
use crate::Scalar;

fn neg(m: &LinMap) -> LinMap {
    m.scale(&Scalar::from_int(-1))
}

/// Compatibility of the two actions and their restrictions to invariant
/// forms, for shifts in `[-k, k]`.
#[allow(clippy::too_many_arguments)]
pub fn check_bicovariance(
    g: &MultiBraidedGroup,
    c: &FirstOrderCalculus,
    lc: &LeftCovariant,
    rc: &RightCovariant,
    t: &FlipTable,
    k: i64,
    r: &mut Report,
) {
    let (n, q) = (c.n, c.gdim);
    let (l, rho) = (&lc.action, &rc.action);
    let (kappa, tau) = (g.kappa(), &g.tau);
    let ad = g.ad();
    let pig = lc.pi_gamma();
    let vsg = rc.varsigma_gamma();

    r.eq("EQ_41", &ch!(kr!(id(n), rho), l), &ch!(kr!(l, id(n)), rho), &[q]);
    r.eq("EQ_43A", &ch!(rho, pig), &ch!(kr!(pig, id(n)), ad), &[n]);
    r.eq("EQ_43B", &ch!(l, vsg), &ch!(kr!(id(n), vsg), tau, kr!(kappa, kappa), ad, g.kappa_inv), &[n]);

    let mut memo = Memos::default();
    for a in -k..=k {
        for b in -k..=k {
            let sfx = format!("_n{a}_m{b}");
            let sa = g.sigma_n(a);
            let cls = vec![t.class(a), t.class(b), t.class(a + b)];
            match (t.right(a + b), t.right(b)) {
                (Some(rab), Some(rb)) => {
                    memo.eq(r, "EQ_44A", &sfx, cls.clone(), || {
                        (
                            ch!(kr!(l, id(n)), rab.map),
                            ch!(kr!(id(n), rb.map), kr!(sa, id(q)), kr!(id(n), l)),
                            vec![n, q],
                        )
                    });
                }
                _ => r.skip(format!("EQ_44A{sfx}"), "right flip unavailable"),
            }
            match (t.left(a + b), t.left(b)) {
                (Some(lab), Some(lb)) => {
                    memo.eq(r, "EQ_44B", &sfx, cls.clone(), || {
                        (
                            ch!(kr!(id(n), rho), lab.map),
                            ch!(kr!(lb.map, id(n)), kr!(id(q), sa), kr!(rho, id(n))),
                            vec![q, n],
                        )
                    });
                }
                _ => r.skip(format!("EQ_44B{sfx}"), "left flip unavailable"),
            }
        }
    }

    let full = Subspace::full(n);
    for s in -k..=k {
        let sfx = format!("_n{s}");
        let cls = vec![t.class(s)];
        match t.right(s) {
            Some(rs) => {
                let lhs = full.tensor(&lc.inv).image_under(&rs.map);
                let rhs = lc.inv.tensor(&full);
                r.subspace_eq(format!("EQ_45A{sfx}"), &lhs, &rhs);
                memo.eq(r, "EQ_46A", &sfx, cls.clone(), || {
                    (ch!(rs.map, kr!(id(n), pig)), ch!(kr!(pig, id(n)), tau), vec![n, n])
                });
            }
            None => {
                r.skip(format!("EQ_45A{sfx}"), "right flip unavailable");
                r.skip(format!("EQ_46A{sfx}"), "right flip unavailable");
            }
        }
        match t.left(s) {
            Some(ls) => {
                let lhs = rc.inv.tensor(&full).image_under(&ls.map);
                let rhs = full.tensor(&rc.inv);
                r.subspace_eq(format!("EQ_45B{sfx}"), &lhs, &rhs);
                memo.eq(r, "EQ_46B", &sfx, cls.clone(), || {
                    (ch!(ls.map, kr!(vsg, id(n))), ch!(kr!(id(n), vsg), tau), vec![n, n])
                });
            }
            None => {
                r.skip(format!("EQ_45B{sfx}"), "left flip unavailable");
                r.skip(format!("EQ_46B{sfx}"), "left flip unavailable");
            }
        }
    }
}

/// The two conditions on a left-covariant ideal `R` that characterize
/// bicovariance: `ad(R) ⊆ R⊗A` and `τ(A⊗R) = R⊗A`. Returns whether both
/// hold.
pub fn ideal_bicovariance_test(g: &MultiBraidedGroup, ideal: &Subspace, r: &mut Report) -> bool {
    let n = g.dim();
    if !r.outcome("IDEAL_VALID", &validate_ideal(g, ideal, IdealSide::Right)) {
        r.skip("EQ_47", "ideal invalid");
        r.skip("EQ_48", "ideal invalid");
        return false;
    }
    let full = Subspace::full(n);
    let r_a = ideal.tensor(&full);
    let ok47 = r.subspace_le("EQ_47", &ideal.image_under(&g.ad()), &r_a);
    let ok48 = r.subspace_eq("EQ_48", &full.tensor(ideal).image_under(&g.tau), &r_a);
    ok47 && ok48
}

/// The map `ϖ: Γ_inv -> Γ_inv⊗A` with `ϖπ = (π⊗id)ad`, in coordinates.
pub fn varpi(g: &MultiBraidedGroup, lc: &LeftCovariant) -> Result<LinMap> {
    let n = g.dim();
    factor_through(&lc.pi, &ch!(kr!(lc.pi, id(n)), g.ad())).map_err(|e| match e {
        Error::NoFactor(w) => Error::AdNotDescending(w),
        other => other,
    })
}

/// Right action built from the adjoint coaction:
/// `ϱ = (id²⊗m)(id⊗σ⊗id)(ϖ⊗φ)` on `Γ_inv⊗A`, transported to `Γ` along
/// `θ⊗a ↦ θa`.
pub fn right_action_from_ad(g: &MultiBraidedGroup, c: &FirstOrderCalculus, lc: &LeftCovariant) -> Result<LinMap> {
    let (n, kk) = (g.dim(), lc.k());
    let w = varpi(g, lc)?;
    let rt = ch!(c.mgr, kr!(lc.incl(), id(n)));
    let rt_inv = rt.invert().map_err(|_| Error::Inconsistent("right trivialization".into(), None))?;
    let xi = ch!(kr!(id(kk), id(n), g.m()), kr!(id(kk), g.sigma(), id(n)), kr!(w, g.phi()));
    Ok(ch!(kr!(rt, id(n)), xi, rt_inv))
}

/// Records the construction of the right action from `ad` and compares it
/// with the solved one when available.
pub fn check_right_from_ad(
    g: &MultiBraidedGroup,
    c: &FirstOrderCalculus,
    lc: &LeftCovariant,
    rc: Option<&RightCovariant>,
    r: &mut Report,
) -> Option<LinMap> {
    let (n, q) = (c.n, c.gdim);
    match varpi(g, lc) {
        Ok(w) => {
            r.eq("EQ_410", &(&w * &lc.pi), &ch!(kr!(lc.pi, id(n)), g.ad()), &[n]);
        }
        Err(e) => {
            r.fail("EQ_410", e.witness(), e.to_string());
            return None;
        }
    }
    let xi = match right_action_from_ad(g, c, lc) {
        Ok(x) => x,
        Err(e) => {
            r.fail("EQ_49", e.witness(), e.to_string());
            return None;
        }
    };
    let (m, phi, sigma) = (g.m(), g.phi(), g.sigma());
    r.eq(
        "AD_RIGHT_A2",
        &ch!(xi, c.mgr),
        &ch!(kr!(c.mgr, m), kr!(id(q), sigma, id(n)), kr!(xi, phi)),
        &[q, n],
    );
    r.eq("AD_RIGHT_A3", &ch!(xi, c.d), &ch!(kr!(c.d, id(n)), phi), &[n]);
    match rc {
        Some(rc) => {
            r.eq("EQ_49", &xi, &rc.action, &[q]);
        }
        None => r.fail("EQ_49", None, "right action from ad exists but the calculus has no solved right action"),
    }
    Some(xi)
}

/// Antipodal operator `ϰ: Γ -> Γ`.
#[derive(Clone, Debug)]
pub struct KappaData {
    pub varkappa: LinMap,
    pub inverse: LinMap,
}

/// `ι_r(κ⊗κ)σ₋₂`, the map whose kernel must match that of `ι_l`.
pub fn kappa_target(g: &MultiBraidedGroup, c: &FirstOrderCalculus) -> LinMap {
    let kappa = g.kappa();
    ch!(c.iota_r(), kr!(kappa, kappa), g.sigma_n(-2))
}

/// Decides κ-covariance by comparing `ker ι_l` with
/// `ker ι_r(κ⊗κ)σ₋₂`, and builds `ϰ` from `ϰι_l = ι_r(κ⊗κ)σ₋₂`.
pub fn solve_kappa(g: &MultiBraidedGroup, c: &FirstOrderCalculus) -> Result<KappaData> {
    let n = c.n;
    let il = c.iota_l();
    let target = kappa_target(g, c);
    let (k1, k2) = (il.kernel(), target.kernel());
    if let Some(v) = k1.first_outside(&k2) {
        let res = target.apply(&v);
        return Err(Error::NotKappaCovariant(Box::new(Witness::vector(&[n, n], v, res))));
    }
    if let Some(v) = k2.first_outside(&k1) {
        let res = il.apply(&v);
        return Err(Error::NotKappaCovariant(Box::new(Witness::vector(&[n, n], v, res))));
    }
    let varkappa = factor_through(&il, &target)?;
    let inverse = varkappa.invert().map_err(|_| Error::Inconsistent("varkappa not bijective".into(), None))?;
    Ok(KappaData { varkappa, inverse })
}

/// Identities of `ϰ`: the defining relations, twisting with flips, and
/// when both actions exist, the bicovariant relations.
#[allow(clippy::too_many_arguments)]
pub fn check_kappa_covariance(
    g: &MultiBraidedGroup,
    c: &FirstOrderCalculus,
    kd: &KappaData,
    lc: Option<&LeftCovariant>,
    rc: Option<&RightCovariant>,
    t: &FlipTable,
    k: i64,
    r: &mut Report,
) {
    let (n, q) = (c.n, c.gdim);
    let (kappa, tau) = (g.kappa(), &g.tau);
    let (mgl, mgr, d) = (&c.mgl, &c.mgr, &c.d);
    let vk = &kd.varkappa;
    let (il, ir) = (c.iota_l(), c.iota_r());
    let sm2 = g.sigma_n(-2);
    let si = &g.sigma_inv;

    r.eq("SIGMA_M2_FORM", &sm2, &ch!(tau, si, tau, si, tau), &[n, n]);
    r.eq("EQ_51", &(vk * &il), &kappa_target(g, c), &[n, n]);
    r.eq("EQ_52", &(d * kappa), &(vk * d), &[n]);
    r.eq("EQ_53", &(vk * &ir), &ch!(il, kr!(kappa, kappa), sm2), &[n, n]);

    for s in -k..=k {
        let sfx = format!("_n{s}");
        match (t.left(s), t.left(-s)) {
            (Some(a), Some(b)) => {
                r.eq(format!("EQ_55{sfx}"), &ch!(a.map, kr!(vk, id(n))), &ch!(kr!(id(n), vk), b.map), &[q, n]);
            }
            _ => r.skip(format!("EQ_55{sfx}"), "left flip unavailable"),
        }
        match (t.right(s), t.right(-s)) {
            (Some(a), Some(b)) => {
                r.eq(format!("EQ_57{sfx}"), &ch!(a.map, kr!(id(n), vk)), &ch!(kr!(vk, id(n)), b.map), &[n, q]);
            }
            _ => r.skip(format!("EQ_57{sfx}"), "right flip unavailable"),
        }
    }
    match t.left(-2) {
        Some(l2) => {
            r.eq("EQ_56", &(vk * mgr), &ch!(mgl, kr!(kappa, vk), l2.map), &[q, n]);
        }
        None => r.skip("EQ_56", "left flip unavailable"),
    }
    match t.right(-2) {
        Some(r2) => {
            r.eq("EQ_58", &(vk * mgl), &ch!(mgr, kr!(vk, kappa), r2.map), &[n, q]);
        }
        None => r.skip("EQ_58", "right flip unavailable"),
    }

    let (Some(lc), Some(rc)) = (lc, rc) else {
        for key in ["EQ_59", "EQ_510", "EQ_511", "EQ_512_L", "EQ_512_R", "EQ_513A", "EQ_513B"] {
            r.skip(key, "calculus is not bicovariant");
        }
        for key in ["EQ_514A", "EQ_514B", "EQ_515A", "EQ_515B", "EQ_516A", "EQ_516B"] {
            r.skip(key, "calculus is not bicovariant");
        }
        return;
    };
    let (l, rho) = (&lc.action, &rc.action);
    match (t.left(1), t.right(1)) {
        (Some(ls), Some(rs)) => {
            r.eq("EQ_59", &(l * vk), &ch!(kr!(kappa, vk), ls.map, rho), &[q]);
            r.eq("EQ_510", &(rho * vk), &ch!(kr!(vk, kappa), rs.map, l), &[q]);
        }
        _ => {
            r.skip("EQ_59", "flip unavailable");
            r.skip("EQ_510", "flip unavailable");
        }
    }
    r.eq(
        "EQ_511",
        &ch!(mgl, kr!(id(n), mgr), kr!(kappa, id(q), kappa), kr!(id(n), rho), l),
        &neg(vk),
        &[q],
    );
    r.subspace_eq("EQ_512_L", &lc.inv.image_under(vk), &rc.inv);
    r.subspace_eq("EQ_512_R", &rc.inv.image_under(vk), &lc.inv);

    let k0 = match g.kappa0() {
        Ok(x) => x,
        Err(e) => {
            r.fail("EQ_513A", e.witness(), e.to_string());
            return;
        }
    };
    let pig = lc.pi_gamma();
    let vsg = rc.varsigma_gamma();
    r.eq("EQ_513A", &(vk * &pig), &(&vsg * &k0), &[n]);
    r.eq("EQ_513B", &(vk * &vsg), &(&pig * &k0), &[n]);
    let (circ_g, bullet_g) = (&lc.incl() * &lc.circ, &rc.incl() * &rc.bullet);
    r.eq(
        "EQ_514A",
        &ch!(vk, circ_g, kr!(lc.pi, id(n))),
        &ch!(bullet_g, kr!(k0, ch!(rc.varsigma, k0)), tau),
        &[n, n],
    );
    r.eq(
        "EQ_514B",
        &ch!(vk, bullet_g, kr!(id(n), rc.varsigma)),
        &ch!(circ_g, kr!(ch!(lc.pi, k0), k0), tau),
        &[n, n],
    );
    r.subspace_eq("EQ_515A", &lc.ideal.image_under(&k0), &rc.ideal);
    r.subspace_eq("EQ_515B", &rc.ideal.image_under(&k0), &lc.ideal);
    r.eq("EQ_516A", &ch!(vk, mgl, kr!(id(n), pig)), &ch!(mgr, kr!(ch!(vsg, k0), kappa), tau), &[n, n]);
    r.eq("EQ_516B", &ch!(vk, mgr, kr!(vsg, id(n))), &ch!(mgl, kr!(kappa, ch!(pig, k0)), tau), &[n, n]);
}

/// Outcome of the two independent decisions for a left-covariant calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decisions {
    pub kappa_covariant: bool,
    pub bicovariant: bool,
}

/// Records that κ-covariance and bicovariance agree.
pub fn kappa_iff_bicovariant(d: Decisions, r: &mut Report) -> bool {
    let note = format!("kappa-covariant: {}, bicovariant: {}", d.kappa_covariant, d.bicovariant);
    if d.kappa_covariant == d.bicovariant {
        r.pass("KAPPA_IFF_BICOV", note);
        true
    } else {
        r.fail("KAPPA_IFF_BICOV", None, note);
        false
    }
}

/// Records that the adjoint criterion on the ideal agrees with
/// solvability of the right action.
pub fn ad_criterion(ideal_ok: bool, right_solved: bool, r: &mut Report) -> bool {
    let note = format!("ideal criterion: {ideal_ok}, right action solved: {right_solved}");
    if ideal_ok == right_solved {
        r.pass("AD_CRITERION", note);
        true
    } else {
        r.fail("AD_CRITERION", None, note);
        false
    }
}
