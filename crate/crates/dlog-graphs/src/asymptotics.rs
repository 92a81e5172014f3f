//! Theoretical statistics for random functional graphs, random
//! permutations, and random binary functional graphs of size `n`.
//!
//! The longest-cycle coefficient is the Shepp-Lloyd integral
//! `lambda = int_0^inf [1 - exp(-E1(v))] dv` (with `E1` the exponential
//! integral), evaluated here by adaptive quadrature rather than hard-coded,
//! so the printed decimals in the literature serve purely as checks.

use crate::{Error, Result};
use std::f64::consts::{E, LN_2, PI};
use std::sync::OnceLock;

/// Euler's constant, to full double precision.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Which theoretical model a prediction belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Model {
    Random,
    Permutation,
    Binary,
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Random => "random",
            Model::Permutation => "permutation",
            Model::Binary => "binary",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "random" => Ok(Model::Random),
            "permutation" => Ok(Model::Permutation),
            "binary" => Ok(Model::Binary),
            other => Err(format!(
                "unknown model {other:?} (expected random, permutation or binary)"
            )),
        }
    }
}

/// Expected values of every measured statistic for one model at size `n`.
///
/// `avg_cycle` and `avg_tail` are per-node expectations (the length seen
/// from a random node of the graph).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Prediction {
    pub model: Model,
    pub n: u64,
    pub components: f64,
    pub cyclic_nodes: f64,
    pub tail_nodes: f64,
    pub terminal_nodes: f64,
    pub image_nodes: f64,
    pub avg_cycle: f64,
    pub avg_tail: f64,
    pub max_cycle: f64,
    pub max_tail: f64,
}

/// Asymptotic statistics of a random functional graph on `n` nodes.
pub fn predict_random(n: u64) -> Prediction {
    let nf = n as f64;
    let cyclic = (PI * nf / 2.0).sqrt() - 1.0 / 3.0;
    Prediction {
        model: Model::Random,
        n,
        components: ((2.0 * nf).ln() + EULER_GAMMA) / 2.0,
        cyclic_nodes: cyclic,
        tail_nodes: nf - cyclic,
        terminal_nodes: nf / E,
        image_nodes: (1.0 - 1.0 / E) * nf,
        avg_cycle: (PI * nf / 8.0).sqrt(),
        avg_tail: (PI * nf / 8.0).sqrt(),
        max_cycle: max_cycle_coefficient() * nf.sqrt(),
        max_tail: (2.0 * PI * nf).sqrt() * LN_2,
    }
}

/// Statistics of a random permutation on `n` nodes (every node cyclic).
pub fn predict_permutation(n: u64) -> Prediction {
    let nf = n as f64;
    Prediction {
        model: Model::Permutation,
        n,
        components: harmonic_number(n),
        cyclic_nodes: nf,
        tail_nodes: 0.0,
        terminal_nodes: 0.0,
        image_nodes: nf,
        avg_cycle: (nf + 1.0) / 2.0,
        avg_tail: 0.0,
        max_cycle: golomb_dickman_cached() * nf,
        max_tail: 0.0,
    }
}

/// Asymptotic statistics of a random binary functional graph on `n` nodes.
///
/// Rejects odd `n`: a graph whose in-degrees are all 0 or 2 has exactly
/// `n/2` image nodes, so none exists on an odd node count.
pub fn predict_binary(n: u64) -> Result<Prediction> {
    if !n.is_multiple_of(2) {
        return Err(Error::OddSize(n));
    }
    let nf = n as f64;
    let cyclic = (PI * nf / 2.0).sqrt() - 1.0;
    Ok(Prediction {
        model: Model::Binary,
        n,
        components: ((2.0 * nf).ln() + EULER_GAMMA) / 2.0,
        cyclic_nodes: cyclic,
        tail_nodes: nf - cyclic,
        terminal_nodes: nf / 2.0,
        image_nodes: nf / 2.0,
        avg_cycle: (PI * nf / 8.0).sqrt(),
        avg_tail: (PI * nf / 8.0).sqrt(),
        max_cycle: max_cycle_coefficient() * nf.sqrt(),
        max_tail: (2.0 * PI * nf).sqrt() * LN_2 - 3.0 + 2.0 * LN_2,
    })
}

/// Prediction for the model matching class `m`, when one exists.
///
/// `m = 0` denotes the combined census over all bases and is compared to
/// the random-mapping model.
pub fn predict_for_class(m: u64, n: u64) -> Option<Prediction> {
    match m {
        0 => Some(predict_random(n)),
        1 => Some(predict_permutation(n)),
        2 => predict_binary(n).ok(),
        _ => None,
    }
}

/// The longest-cycle integral constant (the Golomb-Dickman constant),
/// evaluated to an absolute error of at most `tolerance`.
///
/// The inner exponential integral uses a power series for small arguments
/// and a continued fraction for large ones; the outer integral is adaptive
/// Simpson quadrature on `[0, V]` plus an analytic bound for the tail
/// beyond `V`.
pub fn golomb_dickman(tolerance: f64) -> Result<f64> {
    if tolerance.is_nan() || tolerance < 1e-10 {
        return Err(Error::ToleranceTooTight(tolerance));
    }
    // tail: int_V^inf [1 - exp(-E1)] dv differs from int_V^inf E1 dv
    //       = exp(-V) - V*E1(V) by less than int E1^2/2, which is far
    //       below any supported tolerance at V = 30
    let cutoff = 30.0f64;
    let tail = (-cutoff).exp() - cutoff * exp_integral_e1(cutoff);
    let integrand = |v: f64| {
        if v <= 0.0 {
            1.0
        } else {
            1.0 - (-exp_integral_e1(v)).exp()
        }
    };
    let head = adaptive_simpson(&integrand, 0.0, cutoff, tolerance / 2.0)?;
    Ok(head + tail)
}

fn golomb_dickman_cached() -> f64 {
    static LAMBDA: OnceLock<f64> = OnceLock::new();
    *LAMBDA.get_or_init(|| golomb_dickman(1e-10).expect("fixed-tolerance quadrature cannot fail"))
}

/// `sqrt(pi/2) * lambda`, the coefficient of `sqrt(n)` in the expected
/// longest cycle of a random mapping (~0.78248).
pub fn max_cycle_coefficient() -> f64 {
    (PI / 2.0).sqrt() * golomb_dickman_cached()
}

/// `sqrt(2 pi) * ln 2`, the coefficient of `sqrt(n)` in the expected
/// longest tail of a random mapping (~1.73746).
pub fn max_tail_coefficient() -> f64 {
    (2.0 * PI).sqrt() * LN_2
}

/// `-3 + 2 ln 2`, the additive constant in the binary longest-tail form
/// (~-1.61371).
pub fn binary_max_tail_constant() -> f64 {
    -3.0 + 2.0 * LN_2
}

/// The exponential integral `E1(x) = int_x^inf e^-u / u du` for `x > 0`.
fn exp_integral_e1(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= 4.0 {
        // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^(k+1) x^k / (k * k!)
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            term *= -x / k as f64;
            let delta = -term / k as f64;
            sum += delta;
            if delta.abs() < 1e-18 * (1.0 + sum.abs()) {
                break;
            }
        }
        -EULER_GAMMA - x.ln() + sum
    } else {
        // modified Lentz continued fraction:
        // E1(x) = e^-x / (x + 1 - 1/(x + 3 - 4/(x + 5 - 9/(...))))
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for k in 1..200u32 {
            let a = -((k * k) as f64);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let delta = c * d;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        (-x).exp() * h
    }
}

/// Adaptive Simpson quadrature with the standard 1/15 error estimate.
fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, eps: f64) -> Result<f64> {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: u32,
    ) -> Result<f64> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let err = left + right - whole;
        if err.abs() <= 15.0 * eps {
            return Ok(left + right + err / 15.0);
        }
        if depth == 0 {
            return Err(Error::NoConvergence { tol: eps });
        }
        Ok(recurse(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)?
            + recurse(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)?)
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, eps, 60)
}

/// The harmonic number `H_n = sum_{i=1}^n 1/i`.
///
/// Compensated summation up to 10^6 keeps the float error near machine
/// epsilon; beyond that the Euler-Maclaurin form
/// `ln n + gamma + 1/2n - 1/12n^2` is accurate to well under 1e-12.
pub fn harmonic_number(n: u64) -> f64 {
    if n <= 1_000_000 {
        // Kahan summation, small terms first
        let mut sum = 0.0f64;
        let mut carry = 0.0f64;
        for i in (1..=n).rev() {
            let y = 1.0 / i as f64 - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        sum
    } else {
        let nf = n as f64;
        nf.ln() + EULER_GAMMA + 1.0 / (2.0 * nf) - 1.0 / (12.0 * nf * nf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // independently computed at 30-digit precision (0.6243299885435508709...)
    const LAMBDA_REF: f64 = 0.624_329_988_543_550_9;

    #[test]
    fn golomb_dickman_converges() {
        let lam = golomb_dickman(1e-7).unwrap();
        assert!((lam - LAMBDA_REF).abs() < 1e-7, "lambda = {lam}");
        let tight = golomb_dickman(1e-10).unwrap();
        assert!((tight - LAMBDA_REF).abs() < 1e-10, "lambda = {tight}");
    }

    #[test]
    fn golomb_dickman_halving_tolerance_is_monotone() {
        let mut tol = 1e-5;
        while tol >= 2e-10 {
            let coarse = golomb_dickman(tol).unwrap();
            let fine = golomb_dickman(tol / 2.0).unwrap();
            assert!((coarse - fine).abs() < tol, "tol={tol}: {coarse} vs {fine}");
            tol /= 2.0;
        }
    }

    #[test]
    fn golomb_dickman_rejects_unreachable_tolerance() {
        assert!(matches!(
            golomb_dickman(1e-12),
            Err(Error::ToleranceTooTight(_))
        ));
        assert!(matches!(
            golomb_dickman(f64::NAN),
            Err(Error::ToleranceTooTight(_))
        ));
    }

    #[test]
    fn derived_constants_match_printed_values() {
        assert!((max_cycle_coefficient() - 0.78248).abs() < 5e-5);
        assert!((max_tail_coefficient() - 1.73746).abs() < 5e-5);
        assert!((binary_max_tail_constant() - -1.61371).abs() < 5e-5);
    }

    #[test]
    fn exp_integral_reference_values() {
        for (x, want) in [
            (0.5, 0.559_773_594_776_160_2),
            (1.0, 0.219_383_934_395_520_3),
            (5.0, 1.148_295_591_275_326e-3),
            (10.0, 4.156_968_929_685_325e-6),
        ] {
            let got = exp_integral_e1(x);
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "E1({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic_number(1), 1.0);
        assert_eq!(harmonic_number(2), 1.5);
        // H_100042, summed independently at 30-digit precision
        assert!((harmonic_number(100_042) - 12.090_566_039_589_005).abs() < 1e-9);
    }

    #[test]
    fn harmonic_crossover_agreement() {
        let exact = harmonic_number(1_000_000);
        let nf = 1_000_000.0f64;
        let asymptotic = nf.ln() + EULER_GAMMA + 1.0 / (2.0 * nf) - 1.0 / (12.0 * nf * nf);
        assert!(
            (exact - asymptotic).abs() < 1e-10,
            "exact {exact} vs asymptotic {asymptotic}"
        );
        // reference: H_1e6 = 14.392726722865723631...
        assert!((exact - 14.392_726_722_865_724).abs() < 1e-10);
    }

    #[test]
    fn random_prediction_values() {
        let p = predict_random(100_042);
        assert!((p.components - 6.391_854_111_128_197).abs() < 1e-9);
        assert!((p.cyclic_nodes - 396.082_617_563_215_5).abs() < 1e-6);
        assert!((p.avg_tail - 198.207_975_448_274_4).abs() < 1e-6);
        assert!((p.max_cycle - 247.494_366_081_723_2).abs() < 1e-4);
        assert!((p.max_tail - 549.549_197_385_865_2).abs() < 1e-6);
        assert_eq!(p.cyclic_nodes + p.tail_nodes, 100_042.0);

        let p = predict_random(106_260);
        assert!((p.image_nodes - 67_169.130_581_122_54).abs() < 1e-4);
        assert!((p.image_nodes + p.terminal_nodes - 106_260.0).abs() < 1e-9);
    }

    #[test]
    fn permutation_prediction_values() {
        let p = predict_permutation(100_042);
        assert!((p.components - 12.090_566_039_589_005).abs() < 1e-9);
        assert_eq!(p.avg_cycle, 50_021.5);
        assert!((p.max_cycle - 62_459.220_713_873_92).abs() < 2e-3);
        assert_eq!(p.cyclic_nodes, 100_042.0);
        assert_eq!(p.image_nodes, 100_042.0);
        assert_eq!(p.tail_nodes, 0.0);
        assert_eq!(p.terminal_nodes, 0.0);
        assert_eq!(p.avg_tail, 0.0);
        assert_eq!(p.max_tail, 0.0);
    }

    #[test]
    fn binary_prediction_values() {
        let p = predict_binary(100_042).unwrap();
        assert!((p.cyclic_nodes - 395.415_950_896_548_9).abs() < 1e-6);
        assert!((p.max_tail - 547.935_491_746_985).abs() < 1e-6);
        assert_eq!(p.image_nodes, 50_021.0);
        assert_eq!(p.terminal_nodes, 50_021.0);
        assert!(matches!(predict_binary(100_043), Err(Error::OddSize(_))));
    }

    #[test]
    fn random_and_binary_differ_only_where_stated() {
        for n in [100u64, 2026, 100_042, 106_260] {
            let r = predict_random(n);
            let b = predict_binary(n).unwrap();
            assert_eq!(r.components, b.components);
            assert_eq!(r.avg_cycle, b.avg_cycle);
            assert_eq!(r.avg_tail, b.avg_tail);
            assert_eq!(r.max_cycle, b.max_cycle);
            // second-order cyclic terms: -1/3 (random) vs -1 (binary)
            assert!((r.cyclic_nodes - b.cyclic_nodes - (1.0 - 1.0 / 3.0)).abs() < 1e-9);
            // max tail differs by the additive constant -3 + 2 ln 2
            assert!((b.max_tail - r.max_tail - binary_max_tail_constant()).abs() < 1e-9);
            assert_eq!(b.terminal_nodes, n as f64 / 2.0);
            assert_eq!(b.image_nodes, n as f64 / 2.0);
        }
    }

    #[test]
    fn class_model_mapping() {
        assert_eq!(predict_for_class(0, 10).unwrap().model, Model::Random);
        assert_eq!(predict_for_class(1, 10).unwrap().model, Model::Permutation);
        assert_eq!(predict_for_class(2, 10).unwrap().model, Model::Binary);
        assert!(predict_for_class(2, 11).is_none());
        assert!(predict_for_class(7, 10).is_none());
    }
}
