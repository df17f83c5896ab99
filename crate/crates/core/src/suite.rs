//! Runs every checker against a bundle and assembles one report.
//!
//! `check` asserts identities only. Whether a calculus is left, right,
//! bi-, antipode or star covariant is a finding, so those decisions go to
//! the observation list; what must hold is that the independent decision
//! procedures agree. A targeted covariance run instead asserts the
//! requested decision and fails when it is negative.

use rayon::prelude::*;

use crate::bicov::{
    ad_criterion, check_bicovariance, check_kappa_covariance, check_right_from_ad, ideal_bicovariance_test,
    kappa_iff_bicovariant, solve_kappa, Decisions,
};
use crate::bundle::Bundle;
use crate::calculus::{check_calculus_into, check_flip_identities, check_multi_covariance, FirstOrderCalculus, FlipTable};
use crate::covariant::{
    check_left_covariance, check_right_covariance, check_round_trips, check_round_trips_right, close_ideal,
    reconstruct_left, solve_left_action, solve_right_action, IdealSide,
};
use crate::error::{Error, Result};
use crate::group::{check_group, CheckOpts, MultiBraidedGroup};
use crate::linalg::Semilinear;
use crate::report::{Report, Status};
use crate::star::{check_star_covariance, check_star_flip_compat, check_star_group, star_criterion, star_direct, star_from_ideal};

/// Which covariance decision a targeted run asserts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Left,
    Right,
    Bi,
    Kappa,
    Star,
    Braided,
}

impl Mode {
    pub fn key(self) -> &'static str {
        match self {
            Mode::Left => "LEFT_COVARIANT",
            Mode::Right => "RIGHT_COVARIANT",
            Mode::Bi => "BICOVARIANT",
            Mode::Kappa => "KAPPA_COVARIANT",
            Mode::Star => "STAR_COVARIANT",
            Mode::Braided => "BRAIDED_COVARIANT",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOpts {
    /// Shift window for `σₙ`-indexed identities.
    pub range: i64,
    pub paranoid: bool,
}

impl Default for SuiteOpts {
    fn default() -> SuiteOpts {
        SuiteOpts { range: 2, paranoid: false }
    }
}

#[derive(Clone, Copy)]
enum Target {
    Section(usize),
    Ideal(usize),
}

struct Ctx<'a> {
    g: &'a MultiBraidedGroup,
    /// Present only when the star structure passed its own checks.
    star: Option<&'a Semilinear>,
    star_given: bool,
    mode: Option<Mode>,
    k: i64,
}

impl Ctx<'_> {
    fn wants(&self, m: Mode) -> bool {
        self.mode.is_none_or(|x| x == m)
    }

    /// Records a decision: asserted in the matching targeted run,
    /// observed otherwise.
    fn decide(&self, r: &mut Report, m: Mode, res: &Result<()>) {
        let start = r.entries.len();
        if let Err(e) = res {
            r.fail(m.key(), e.witness(), format!("{}: {e}", e.kind()));
        } else {
            r.pass(m.key(), "");
        }
        if self.mode != Some(m) {
            r.demote_from(start);
        }
    }
}

/// Full verification of a bundle (`mode = None`) or a targeted covariance
/// decision. Input problems come back as `Err`; everything else is in the
/// report.
pub fn run(b: &Bundle, mode: Option<Mode>, opts: SuiteOpts) -> Result<Report> {
    b.validate()?;
    let data = b.group_data()?;
    let star = b.star()?;
    if mode == Some(Mode::Star) && star.is_none() {
        return Err(Error::Input("bundle has no star structure".into()));
    }
    let (mut report, g) = check_group(&data, CheckOpts { range: opts.range, paranoid: opts.paranoid });
    let Some(g) = g else { return Ok(report) };

    let mut star_ok = false;
    if let Some(s) = &star {
        let mut sr = Report::new("star");
        star_ok = check_star_group(&g, s, opts.range, &mut sr);
        report.extend(sr);
    }
    let ctx = Ctx {
        g: &g,
        star: star.as_ref().filter(|_| star_ok),
        star_given: star.is_some(),
        mode,
        k: opts.range,
    };
    let targets: Vec<Target> =
        (0..b.calculi.len()).map(Target::Section).chain((0..b.ideals.len()).map(Target::Ideal)).collect();
    let parts = targets.par_iter().map(|t| analyze_target(b, &ctx, *t)).collect::<Result<Vec<Report>>>()?;
    for p in parts {
        report.extend(p);
    }
    Ok(report)
}

fn analyze_target(b: &Bundle, ctx: &Ctx, t: Target) -> Result<Report> {
    match t {
        Target::Section(i) => {
            let mut r = Report::new(format!("calculus:{}", b.calculi[i].name));
            let c = b.calculus(i)?;
            analyze(ctx, &c, &mut r);
            Ok(r)
        }
        Target::Ideal(i) => {
            let mut r = Report::new(format!("ideal:{}", b.ideals[i].name));
            let gens = b.ideal_generators(i)?;
            let ideal = close_ideal(ctx.g, &gens, IdealSide::Right);
            if !r.outcome("IDEAL_INPUT", &ideal) {
                return Ok(r);
            }
            let c = reconstruct_left(ctx.g, &ideal.expect("checked"));
            if !r.outcome("RECONSTRUCT", &c) {
                return Ok(r);
            }
            let c = c.expect("checked");
            r.pass("GAMMA_DIM", format!("gdim {}", c.gdim));
            analyze(ctx, &c, &mut r);
            Ok(r)
        }
    }
}

fn first_flip_error(t: &FlipTable) -> Result<()> {
    let (lo, hi) = t.window();
    for s in lo..=hi {
        for slot in [t.left_result(s), t.right_result(s)] {
            if let Err(e) = slot {
                return Err(e.clone());
            }
        }
    }
    Ok(())
}

/// Every check applicable to one calculus, filtered by the run's mode.
pub fn analyze_calculus(g: &MultiBraidedGroup, star: Option<&Semilinear>, c: &FirstOrderCalculus, mode: Option<Mode>, range: i64) -> Report {
    let ctx = Ctx { g, star, star_given: star.is_some(), mode, k: range };
    let mut r = Report::new("calculus");
    analyze(&ctx, c, &mut r);
    r
}

fn analyze(ctx: &Ctx, c: &FirstOrderCalculus, r: &mut Report) {
    let (g, k) = (ctx.g, ctx.k);
    if !check_calculus_into(&g.data.alg, c, r) {
        if let Some(m) = ctx.mode {
            r.fail(m.key(), None, "input is not a first-order calculus");
        }
        return;
    }
    let t = FlipTable::solve(g, c, -3 * k, 3 * k);
    if ctx.wants(Mode::Braided) {
        ctx.decide(r, Mode::Braided, &first_flip_error(&t));
        check_flip_identities(g, c, &t, k, r);
        check_multi_covariance(g, c, &t, k, r);
    }

    let lc = solve_left_action(g, c);
    let rc = solve_right_action(g, c);
    let (lco, rco) = (lc.as_ref().ok(), rc.as_ref().ok());

    if ctx.wants(Mode::Left) {
        ctx.decide(r, Mode::Left, &lc.as_ref().map(|_| ()).map_err(Clone::clone));
        if let Some(lc) = lco {
            check_left_covariance(g, c, lc, &t, k, r);
            check_round_trips(g, c, lc, r);
        }
    }
    if ctx.wants(Mode::Right) {
        ctx.decide(r, Mode::Right, &rc.as_ref().map(|_| ()).map_err(Clone::clone));
        if let Some(rc) = rco {
            check_right_covariance(g, c, rc, &t, k, r);
            check_round_trips_right(g, c, rc, r);
        }
    }
    if ctx.wants(Mode::Bi) {
        let both = match (&lc, &rc) {
            (Ok(_), Ok(_)) => Ok(()),
            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
        };
        ctx.decide(r, Mode::Bi, &both);
        if let (Some(lc), Some(rc)) = (lco, rco) {
            check_bicovariance(g, c, lc, rc, &t, k, r);
        }
        if let Some(lc) = lco {
            let start = r.entries.len();
            let ideal_ok = ideal_bicovariance_test(g, &lc.ideal, r);
            // A negative ad test is the decision itself, not a failure.
            if !ideal_ok && r.entries[start].status == Status::Pass {
                r.demote_from(start + 1);
            }
            ad_criterion(ideal_ok, rco.is_some(), r);
            if ideal_ok {
                check_right_from_ad(g, c, lc, rco, r);
            }
        }
    }
    let kd = (ctx.wants(Mode::Kappa) || ctx.wants(Mode::Star)).then(|| solve_kappa(g, c));
    if let (true, Some(kd)) = (ctx.wants(Mode::Kappa), &kd) {
        ctx.decide(r, Mode::Kappa, &kd.as_ref().map(|_| ()).map_err(Clone::clone));
        if let Ok(kd) = kd {
            check_kappa_covariance(g, c, kd, lco, rco, &t, k, r);
        }
        if lco.is_some() {
            kappa_iff_bicovariant(Decisions { kappa_covariant: kd.is_ok(), bicovariant: rco.is_some() }, r);
        }
    }
    if ctx.wants(Mode::Star) && ctx.star_given {
        let Some(star) = ctx.star else {
            if ctx.mode == Some(Mode::Star) {
                r.fail(Mode::Star.key(), None, "the star structure fails its own axioms");
            }
            return;
        };
        let direct = star_direct(c, star);
        ctx.decide(r, Mode::Star, &direct.as_ref().map(|_| ()).map_err(Clone::clone));
        if let Some(lc) = lco {
            let from_ideal = star_from_ideal(g, c, lc, star);
            star_criterion(&direct, &from_ideal, c.gdim, r);
            if let Ok(sc) = &from_ideal {
                let kd = kd.as_ref().and_then(|x| x.as_ref().ok());
                check_star_covariance(g, c, lc, rco, kd, star, sc, &t, r);
                check_star_flip_compat(g, c, star, &sc.gamma, &t, k, r);
            }
        }
    }
}
