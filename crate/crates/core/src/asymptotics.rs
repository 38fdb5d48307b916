//! Binary entropy, the scaled root `r(x)`, the exponent `ψ`, its fixed-`(n,k)`
//! companion `φ`, and the combine function `F(x,y)`.
//!
//! All logarithms are base 2. Derivatives are taken by finite differences.

use serde::{Deserialize, Serialize};

use crate::report::{BoundReport, Relation};
use crate::sphere::{self, SphereParams};
use crate::{Error, Result};

/// `2·log₂3`, the slope of `ψ` at the origin.
pub fn two_log2_3() -> f64 {
    2.0 * 3f64.log2()
}

const FD_STEP: f64 = 1e-4;

fn in_unit(x: f64, hi: f64, what: &str) -> Result<()> {
    if !(0.0..=hi).contains(&x) {
        return Err(Error::domain(format!("{what}: x = {x} outside [0, {hi}]")));
    }
    Ok(())
}

/// Entropy with `H(0) = H(1) = 0`; inputs are clamped to `[0,1]`.
fn h2(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 || x == 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// `H(x) = −x log₂x − (1−x) log₂(1−x)`.
pub fn entropy(x: f64) -> Result<f64> {
    in_unit(x, 1.0, "entropy")?;
    Ok(h2(x))
}

fn r_raw(x: f64) -> f64 {
    // (3 − √(1 + 8(1−2x)²))/8 with the cancellation removed
    let s = (1.0 + 8.0 * (1.0 - 2.0 * x).powi(2)).sqrt();
    4.0 * x * (1.0 - x) / (3.0 + s)
}

/// `r(x) = (3 − √(1 + 8(1−2x)²))/8`, so that `r(k/n) = t₁(n,k)/n`.
pub fn r_of_x(x: f64) -> Result<f64> {
    in_unit(x, 0.5, "r(x)")?;
    Ok(r_raw(x))
}

fn psi_raw(x: f64) -> f64 {
    let r = r_raw(x);
    let inner = if x == 0.0 { 0.0 } else { (x - r) / (1.0 - 2.0 * r) };
    h2(2.0 * r) + 4.0 * r + 2.0 * (1.0 - 2.0 * r) * h2(inner) - 2.0 * h2(x)
}

pub fn psi_value(x: f64) -> Result<f64> {
    in_unit(x, 0.5, "psi")?;
    Ok(psi_raw(x))
}

/// Finite-difference derivatives of `ψ`, one-sided at the interval ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeChecks {
    pub step: f64,
    pub first: f64,
    pub second: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiEvaluation {
    pub x: f64,
    pub r: f64,
    pub psi: f64,
    pub derivative_checks: DerivativeChecks,
}

pub fn psi(x: f64) -> Result<PsiEvaluation> {
    in_unit(x, 0.5, "psi")?;
    let h = FD_STEP;
    let centre = x.clamp(h, 0.5 - h);
    let (lo, mid, hi) = (psi_raw(centre - h), psi_raw(centre), psi_raw(centre + h));
    Ok(PsiEvaluation {
        x,
        r: r_raw(x),
        psi: psi_raw(x),
        derivative_checks: DerivativeChecks {
            step: h,
            first: (hi - lo) / (2.0 * h) + (x - centre) * (hi - 2.0 * mid + lo) / (h * h),
            second: (hi - 2.0 * mid + lo) / (h * h),
        },
    })
}

fn phi_raw(y: f64, a: f64) -> f64 {
    h2(2.0 * y) + 4.0 * y + 2.0 * (1.0 - 2.0 * y) * h2((a - y) / (1.0 - 2.0 * y)) - 2.0 * h2(a)
}

/// `φ(y) = H(2y) + 4y + 2(1−2y)·H((a−y)/(1−2y)) − 2H(a)` with `a = k/n`.
pub fn phi(y: f64, p: SphereParams) -> Result<f64> {
    let a = p.density();
    if !(0.0..=a).contains(&y) || 2.0 * y >= 1.0 && y > 0.0 {
        return Err(Error::domain(format!("phi: y = {y} outside [0, k/n = {a}]")));
    }
    Ok(phi_raw(y, a))
}

/// Closed form of `φ′(y)` at density `a`.
pub fn phi_prime(y: f64, a: f64) -> f64 {
    let u = (a - y) / (1.0 - 2.0 * y);
    2.0 * ((1.0 - 2.0 * y) / (2.0 * y)).log2() + 4.0
        - 4.0 * h2(u)
        - 2.0 * (1.0 - 2.0 * a) / (1.0 - 2.0 * y) * ((1.0 - a - y) / (a - y)).log2()
}

/// `F(x,y) = 8xy / (4√(xy) − (√x − √y)²)` on `x > 0`, `x/9 ≤ y ≤ 9x`.
pub fn f_combine(x: f64, y: f64) -> Result<f64> {
    let in_domain = x > 0.0 && y * 9.0 >= x && y <= 9.0 * x;
    if !in_domain {
        return Err(Error::domain(format!(
            "F(x,y) needs x > 0 and x/9 <= y <= 9x, got ({x}, {y})"
        )));
    }
    if y * 9.0 == x || y == 9.0 * x {
        return Ok(x.max(y));
    }
    // 4√(xy) − (√x − √y)² = 6√(xy) − x − y
    Ok(8.0 * x * y / (6.0 * (x * y).sqrt() - x - y))
}

fn grid(step: f64, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=count).map(move |i| lo + i as f64 * step)
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0 && step <= 0.1) {
        return Err(Error::domain(format!("grid step {step} outside (0, 0.1]")));
    }
    Ok(())
}

/// Concavity of `ψ` on a grid, the flat end at `1/2` and the slope at `0`.
pub fn psi_concavity_check(grid_step: f64) -> Result<BoundReport> {
    check_step(grid_step)?;
    let mut rep = BoundReport::new(format!("psi concavity, step {grid_step}"));
    let h = grid_step;
    let mut worst = f64::NEG_INFINITY;
    let mut worst_at = 0.0;
    for x in grid(h, h, 0.5 - h) {
        let d2 = psi_raw(x + h) - 2.0 * psi_raw(x) + psi_raw(x - h);
        if d2 > worst {
            worst = d2;
            worst_at = x;
        }
    }
    rep.float(
        "max second difference of psi",
        worst,
        Relation::Lt,
        0.0,
        0.0,
        "psi-strictly-concave",
    );
    rep.note(format!("largest second difference at x = {worst_at}"));

    // ψ is symmetric about 1/2, so the derivative there is probed one-sidedly
    let h_end = 1e-6;
    let slope_half = (psi_raw(0.5) - psi_raw(0.5 - h_end)) / h_end;
    rep.float(
        "|psi'(1/2)| by one-sided difference",
        slope_half.abs(),
        Relation::Lt,
        1e-3,
        0.0,
        "psi-flat-at-half",
    );
    // ψ″(1/2) ≈ −11.54, so ψ′(0.4999) ≈ 1.15e-3: this one is report-only
    let x = 0.4999;
    let slope_end = (psi_raw(x + 1e-5) - psi_raw(x - 1e-5)) / 2e-5;
    rep.soft(
        "|psi'(0.4999)|",
        slope_end.abs(),
        Relation::Lt,
        1e-3,
        0.0,
        "psi-flat-at-half",
    );

    let x0 = 1e-4;
    let slope_origin = (psi_raw(x0) - psi_raw(0.0)) / x0;
    rep.float(
        "psi'(1e-4) against 2 log2 3",
        (slope_origin - two_log2_3()).abs(),
        Relation::Le,
        5e-3,
        0.0,
        "psi-slope-at-origin",
    );
    rep.note(format!("one-sided psi'(1e-4) = {slope_origin}"));
    Ok(rep)
}

/// `ψ(x) < min(2 log₂3 · x, 1)` strictly inside `(0, 1/2)`, equality at the ends.
pub fn psi_linear_bound_check(grid_step: f64) -> Result<BoundReport> {
    check_step(grid_step)?;
    let mut rep = BoundReport::new(format!("psi linear bound, step {grid_step}"));
    let cap = |x: f64| (two_log2_3() * x).min(1.0);
    let mut worst = f64::NEG_INFINITY;
    for x in grid(grid_step, grid_step, 0.5 - grid_step) {
        if x <= 0.0 || x >= 0.5 {
            continue;
        }
        worst = worst.max(psi_raw(x) - cap(x));
    }
    rep.float(
        "max of psi(x) - min(2 log2 3 x, 1) on the interior",
        worst,
        Relation::Lt,
        0.0,
        0.0,
        "ball-exponent-below-bonami",
    );
    rep.float("psi(0)", psi_raw(0.0), Relation::Eq, cap(0.0), 1e-12, "ball-exponent-endpoints");
    rep.float("psi(1/2)", psi_raw(0.5), Relation::Eq, cap(0.5), 1e-12, "ball-exponent-endpoints");
    Ok(rep)
}

/// The quadratic identity for `r`, the product identity, and `r′`.
pub fn r_identity_check(grid_step: f64) -> Result<BoundReport> {
    check_step(grid_step)?;
    let mut rep = BoundReport::new(format!("r(x) identities, step {grid_step}"));
    let (mut quad, mut prod, mut deriv) = (0.0f64, 0.0f64, 0.0f64);
    let h = 1e-6;
    for x in grid(grid_step, 0.0, 0.5) {
        let r = r_raw(x);
        quad = quad.max((0.5 * (3.0 * r - 4.0 * r * r) - x * (1.0 - x)).abs());
        prod = prod.max((2.0 * (x - r) * (1.0 - x - r) - r * (1.0 - 2.0 * r)).abs());
        let (lo, hi) = ((x - h).max(0.0), (x + h).min(0.5));
        let fd = (r_raw(hi) - r_raw(lo)) / (hi - lo);
        let closed = (2.0 - 4.0 * x) / (3.0 - 8.0 * r);
        deriv = deriv.max((fd - closed).abs());
    }
    rep.float("max |(3r - 4r^2)/2 - x(1-x)|", quad, Relation::Le, 1e-10, 0.0, "r-quadratic-identity");
    rep.float("max |2(x-r)(1-x-r) - r(1-2r)|", prod, Relation::Le, 1e-10, 0.0, "r-product-identity");
    rep.float("max |r' - (2-4x)/(3-8r)|", deriv, Relation::Le, 1e-4, 0.0, "r-derivative");
    let r0 = r_raw(h) / h;
    rep.float("r'(0)", r0, Relation::Approx, 2.0 / 3.0, 1e-4, "r-derivative-at-origin");
    Ok(rep)
}

/// Closed-form `φ′` against finite differences, plus a report of `max |φ′|`
/// over `a ∈ (0, 1/2]`, `y ∈ [a/3, 11a/12]`.
pub fn phi_derivative_report(grid_step: f64) -> Result<BoundReport> {
    check_step(grid_step)?;
    let mut rep = BoundReport::new(format!("phi derivative, step {grid_step}"));
    let mut worst_fd = 0.0f64;
    let mut largest = 0.0f64;
    let mut at = (0.0, 0.0);
    for a in grid(grid_step, grid_step, 0.5) {
        for j in 0..=20 {
            let y = a / 3.0 + (11.0 * a / 12.0 - a / 3.0) * j as f64 / 20.0;
            let closed = phi_prime(y, a);
            let h = 1e-6 * a;
            let fd = (phi_raw(y + h, a) - phi_raw(y - h, a)) / (2.0 * h);
            worst_fd = worst_fd.max((closed - fd).abs() / closed.abs().max(1.0));
            if closed.abs() > largest {
                largest = closed.abs();
                at = (y, a);
            }
        }
    }
    rep.float("phi' closed form vs finite difference", worst_fd, Relation::Le, 1e-4, 0.0, "phi-derivative");
    rep.note(format!("max |phi'| = {largest} at (y, a) = ({}, {})", at.0, at.1));
    Ok(rep)
}

/// `φ(t₁/n) = ψ(k/n)` and `r(k/n) = t₁/n` at one `(n,k)` with `k ≤ n/2`.
pub fn phi_anchor_check(p: SphereParams) -> Result<BoundReport> {
    if !p.in_half_range() {
        return Err(Error::domain("phi anchor needs k <= n/2"));
    }
    let mut rep = BoundReport::new(format!("phi anchor at (n,k) = ({}, {})", p.n(), p.k()));
    let y = sphere::t1(p) / p.n() as f64;
    rep.float("phi(t1/n) = psi(k/n)", phi(y, p)?, Relation::Approx, psi_value(p.density())?, 1e-10, "phi-anchor");
    rep.float("r(k/n) = t1/n", r_of_x(p.density())?, Relation::Approx, y, 1e-9, "r-scaled-root");
    Ok(rep)
}

/// For one `(n,k)`: the identity `(n−2t₁)/n = F(1, y/x)` behind the
/// coordinate-split recursion, and domain membership of `(1, y/x)`.
pub fn combine_identity_check(p: SphereParams) -> Result<BoundReport> {
    let mut rep = BoundReport::new(format!("combine identity at (n,k) = ({}, {})", p.n(), p.k()));
    if p.k() == 0 {
        return Ok(BoundReport::not_applicable(rep.subject, "needs k >= 1"));
    }
    let (n, k) = (p.n() as f64, p.k() as f64);
    let t = sphere::t1(p);
    let ratio = (k * (n - k - t)).powi(2) / ((n - k) * (k - t)).powi(2);
    let lhs = (n - 2.0 * t) * k * k / (n * (k - t).powi(2));
    rep.float("y/x", ratio, Relation::Gt, 1.0 / 9.0, 0.0, "combine-domain");
    rep.float("y/x", ratio, Relation::Lt, 9.0, 0.0, "combine-domain");
    let rhs = f_combine(1.0, ratio)?;
    rep.float("(n-2t1)k^2/(n(k-t1)^2) = F(1, y/x)", lhs, Relation::Approx, rhs, 1e-10, "combine-identity");
    Ok(rep)
}
