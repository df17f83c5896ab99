//! Small groups used throughout the tests, the shipped bundles and the
//! acceptance suite, plus deliberately broken variants.

use crate::algebra::Algebra;
use crate::calculus::FirstOrderCalculus;
use crate::group::{psi, BraidSystem, GroupData};
use crate::linalg::{LinMap, Semilinear, SparseVec};
use crate::scalar::Scalar;

/// A group with an optional star structure and some named ideals.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub group: GroupData,
    pub star: Option<Semilinear>,
    /// Generators of right `A₀`-ideals (left-covariant calculi).
    pub ideals: Vec<(String, Vec<SparseVec>)>,
}

fn v(entries: &[(usize, i64)]) -> SparseVec {
    SparseVec::from_entries(entries.iter().map(|&(i, c)| (i, Scalar::from_int(c))).collect())
}

/// Linear map from images of basis vectors given as sparse integer lists.
fn cols(cod: usize, images: &[&[(usize, i64)]]) -> LinMap {
    LinMap::from_columns(cod, images.iter().map(|c| v(c)).collect()).expect("fixture columns fit")
}

fn diag(d: &[i64]) -> LinMap {
    let n = d.len();
    LinMap::from_fn(n, n, |i, j| if i == j { Scalar::from_int(d[i]) } else { Scalar::from_int(0) })
}

fn conj_star(n: usize) -> Semilinear {
    Semilinear::antilinear(LinMap::identity(n))
}

/// Dimension one: everything is the identity of the ground field.
pub fn fix1() -> Fixture {
    let one = LinMap::identity(1);
    let group = GroupData {
        alg: Algebra::new(one.clone(), one.clone()).expect("shape"),
        phi: one.clone(),
        eps: one.clone(),
        kappa: one.clone(),
        sigma: one,
    };
    Fixture { name: "fix_1", group, star: Some(conj_star(1)), ideals: vec![("zero".into(), vec![])] }
}

/// Functions on a finite abelian group `Z/k` with the plain flip.
pub fn cyclic(k: usize) -> GroupData {
    let mult = LinMap::from_fn(k, k * k, |i, j| Scalar::from_int(i64::from(j / k == i && j % k == i)));
    let unit = LinMap::from_fn(k, 1, |_, _| Scalar::from_int(1));
    let phi = LinMap::from_fn(k * k, k, |row, x| Scalar::from_int(i64::from((row / k + row % k) % k == x)));
    let eps = LinMap::from_fn(1, k, |_, x| Scalar::from_int(i64::from(x == 0)));
    let kappa = LinMap::from_fn(k, k, |i, j| Scalar::from_int(i64::from(i == (k - j) % k)));
    GroupData { alg: Algebra::new(unit, mult).expect("shape"), phi, eps, kappa, sigma: psi(k) }
}

/// Functions on `Z/2`, basis `δ_e, δ_g`.
pub fn k2() -> Fixture {
    Fixture {
        name: "fix_k2",
        group: cyclic(2),
        star: Some(conj_star(2)),
        ideals: vec![("zero".into(), vec![]), ("ker_eps".into(), vec![v(&[(1, 1)])])],
    }
}

/// Functions on `Z/3`. The ideal spanned by `δ₂` is not stable under `*κ`.
pub fn z3() -> Fixture {
    Fixture {
        name: "fix_z3",
        group: cyclic(3),
        star: Some(conj_star(3)),
        ideals: vec![
            ("zero".into(), vec![]),
            ("delta2".into(), vec![v(&[(2, 1)])]),
            ("delta1".into(), vec![v(&[(1, 1)])]),
            ("ker_eps".into(), vec![v(&[(1, 1)]), v(&[(2, 1)])]),
        ],
    }
}

/// The graded flip on a `Z/2`-graded space whose basis vectors have the
/// given parities.
pub fn graded_flip(parity: &[bool]) -> LinMap {
    let n = parity.len();
    LinMap::from_fn(n * n, n * n, |row, col| {
        let (i, j) = (col / n, col % n);
        if row == j * n + i {
            Scalar::from_int(if parity[i] && parity[j] { -1 } else { 1 })
        } else {
            Scalar::from_int(0)
        }
    })
}

/// Grassmann line, basis `1, θ` with `θ² = 0`, primitive `θ` and the
/// graded flip.
pub fn gr_group() -> GroupData {
    let mult = cols(2, &[&[(0, 1)], &[(1, 1)], &[(1, 1)], &[]]);
    let unit = cols(2, &[&[(0, 1)]]);
    let phi = cols(4, &[&[(0, 1)], &[(2, 1), (1, 1)]]);
    let eps = cols(1, &[&[(0, 1)], &[]]);
    GroupData {
        alg: Algebra::new(unit, mult).expect("shape"),
        phi,
        eps,
        kappa: diag(&[1, -1]),
        sigma: graded_flip(&[false, true]),
    }
}

/// Grassmann line with `θ* = θ`.
pub fn gr() -> Fixture {
    Fixture {
        name: "fix_gr",
        group: gr_group(),
        star: Some(conj_star(2)),
        ideals: vec![("zero".into(), vec![]), ("ker_eps".into(), vec![v(&[(1, 1)])])],
    }
}

/// Star on the Grassmann line with `θ* = sign·θ`.
pub fn gr_star(sign: i64) -> Semilinear {
    Semilinear::antilinear(diag(&[1, sign]))
}

/// Sweedler's four-dimensional Hopf algebra, basis `1, g, x, gx` with
/// `g² = 1`, `x² = 0`, `xg = -gx`, and the plain flip.
pub fn h4_group() -> GroupData {
    // Product of basis elements b_i b_j, column i*4+j.
    let prod: [&[(usize, i64)]; 16] = [
        &[(0, 1)],
        &[(1, 1)],
        &[(2, 1)],
        &[(3, 1)],
        &[(1, 1)],
        &[(0, 1)],
        &[(3, 1)],
        &[(2, 1)],
        &[(2, 1)],
        &[(3, -1)],
        &[],
        &[],
        &[(3, 1)],
        &[(2, -1)],
        &[],
        &[],
    ];
    let mult = cols(4, &prod);
    let unit = cols(4, &[&[(0, 1)]]);
    // φ(1)=1⊗1, φ(g)=g⊗g, φ(x)=x⊗1+g⊗x, φ(gx)=gx⊗g+1⊗gx.
    let phi = cols(16, &[&[(0, 1)], &[(5, 1)], &[(8, 1), (6, 1)], &[(13, 1), (3, 1)]]);
    let eps = cols(1, &[&[(0, 1)], &[(0, 1)], &[], &[]]);
    let kappa = cols(4, &[&[(0, 1)], &[(1, 1)], &[(3, -1)], &[(2, 1)]]);
    GroupData { alg: Algebra::new(unit, mult).expect("shape"), phi, eps, kappa, sigma: psi(4) }
}

pub fn h4() -> Fixture {
    Fixture {
        name: "fix_h4",
        group: h4_group(),
        star: Some(Semilinear::antilinear(diag(&[1, 1, 1, -1]))),
        ideals: vec![
            ("zero".into(), vec![]),
            ("r1".into(), vec![v(&[(2, 1)]), v(&[(3, 1)])]),
            ("r2".into(), vec![v(&[(0, 1), (1, -1)]), v(&[(2, 1), (3, -1)])]),
            ("r3".into(), vec![v(&[(2, 1), (3, -1)])]),
            ("r4".into(), vec![v(&[(2, 1), (3, 1)])]),
            ("ker_eps".into(), vec![v(&[(0, 1), (1, -1)]), v(&[(2, 1)]), v(&[(3, 1)])]),
        ],
    }
}

/// Every well-formed fixture.
pub fn all() -> Vec<Fixture> {
    vec![fix1(), k2(), gr(), z3(), h4()]
}

/// `Z/2` with `δ_e·δ_g` changed to `2δ_g`.
pub fn k2_bad_mult() -> GroupData {
    let mut g = cyclic(2);
    g.alg.mult = LinMap::from_ints(2, 4, &[&[1, 0, 0, 0], &[0, 2, 0, 1]]);
    g
}

/// Grassmann line with the unsigned flip in place of the graded one.
pub fn gr_unsigned() -> GroupData {
    let mut g = gr_group();
    g.sigma = psi(2);
    g
}

/// The system `{ψ, 2ψ}` over `Z/2`.
pub fn k2_scaled_system() -> BraidSystem {
    let p = psi(2);
    BraidSystem { dim: 2, elements: vec![p.clone(), p.scale(&Scalar::from_int(2))] }
}

/// A one-dimensional calculus over `Z/2`: `ω = δ_e dδ_g`, with
/// `δ_e ω = ω = ω δ_g` and `dδ_g = ω = -dδ_e`. Leibniz holds but it is
/// not left covariant.
pub fn k2_one_edge() -> FirstOrderCalculus {
    FirstOrderCalculus::new(
        2,
        1,
        LinMap::from_ints(1, 2, &[&[1, 0]]),
        LinMap::from_ints(1, 2, &[&[0, 1]]),
        LinMap::from_ints(1, 2, &[&[-1, 1]]),
    )
    .expect("shape")
}
