//! Exact finite-`n` ground truth from truncated exponential generating
//! functions with rational coefficients.
//!
//! The binary-graph grammar (a graph is a set of components, a component
//! is a cycle of nodes each carrying one attached binary tree) gives
//!
//! ```text
//! b = z + (1/2) z b^2                    binary trees
//! f = 1/(1 - z b) = (1 - 2z^2)^(-1/2)    binary functional graphs
//! c = ln 1/(1 - z b)                     components
//! ```
//!
//! and pushing a marking variable through the same grammar yields the mean
//! generating functions evaluated here. `n! [z^n]` of a series is the
//! number of labeled structures of size `n`, so every mean is an exact
//! rational, which is what the asymptotics and the graph engine are
//! validated against.

use crate::{Error, Result};
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// A truncated power series with exact rational coefficients.
///
/// Index = power of `z`; every arithmetic operation is exact through the
/// common truncation order of its operands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigRational::one();
        s
    }

    /// The series `z` (truncated at `order >= 1`).
    pub fn z(order: usize) -> Self {
        assert!(order >= 1);
        let mut s = Self::zero(order);
        s.coeffs[1] = BigRational::one();
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty());
        PowerSeries { coeffs }
    }

    /// Truncation order `N`; coefficients `0..=N` are exact.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn same_order(&self, other: &Self) {
        assert_eq!(
            self.order(),
            other.order(),
            "series arithmetic requires equal truncation orders"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_order(other);
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_order(other);
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_order(other);
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        PowerSeries { coeffs: out }
    }

    /// Multiply by `z` (shift up one power, dropping the top coefficient).
    pub fn shift_up(&self) -> Self {
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        out[1..=n].clone_from_slice(&self.coeffs[..n]);
        PowerSeries { coeffs: out }
    }

    /// `1 / self`; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Self {
        assert!(!self.coeffs[0].is_zero(), "reciprocal needs c0 != 0");
        let n = self.order();
        let inv0 = self.coeffs[0].recip();
        let mut out = vec![BigRational::zero(); n + 1];
        out[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out[k] = -(acc * &inv0);
        }
        PowerSeries { coeffs: out }
    }

    /// `ln(self)`; requires constant term 1.
    pub fn ln(&self) -> Self {
        assert!(self.coeffs[0].is_one(), "ln needs c0 = 1");
        // k l_k = k f_k - sum_{j=1}^{k-1} j l_j f_{k-j}
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        for k in 1..=n {
            let mut acc = &self.coeffs[k] * BigInt::from(k);
            for (j, lj) in out.iter().enumerate().take(k).skip(1) {
                if !lj.is_zero() && !self.coeffs[k - j].is_zero() {
                    acc -= lj * BigInt::from(j) * &self.coeffs[k - j];
                }
            }
            out[k] = acc / BigInt::from(k);
        }
        PowerSeries { coeffs: out }
    }

    /// `exp(self)`; requires constant term 0.
    pub fn exp(&self) -> Self {
        assert!(self.coeffs[0].is_zero(), "exp needs c0 = 0");
        // k e_k = sum_{j=1}^{k} j c_j e_{k-j}
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        out[0] = BigRational::one();
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !out[k - j].is_zero() {
                    acc += &self.coeffs[j] * BigInt::from(j) * &out[k - j];
                }
            }
            out[k] = acc / BigInt::from(k);
        }
        PowerSeries { coeffs: out }
    }

    /// `sqrt(self)`; requires constant term 1.
    pub fn sqrt(&self) -> Self {
        assert!(self.coeffs[0].is_one(), "sqrt needs c0 = 1");
        // 2 s_k = f_k - sum_{j=1}^{k-1} s_j s_{k-j}
        let n = self.order();
        let mut out = vec![BigRational::zero(); n + 1];
        out[0] = BigRational::one();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for k in 1..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..k {
                if !out[j].is_zero() && !out[k - j].is_zero() {
                    acc -= &out[j] * &out[k - j];
                }
            }
            out[k] = acc * &half;
        }
        PowerSeries { coeffs: out }
    }

    /// Integer power by repeated multiplication.
    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = PowerSeries::one(self.order());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// The binary-tree series `b(z) = z + (1/2) z b(z)^2`, truncated at
/// `order`, by direct coefficient recursion.
///
/// `n! [z^n] b` counts labeled binary trees of size `n` (a tree is a node,
/// or a node with an unordered pair of subtrees); only odd orders carry
/// mass.
pub fn solve_binary_tree_series(order: usize) -> PowerSeries {
    assert!(order >= 1);
    let mut b = vec![BigRational::zero(); order + 1];
    b[1] = BigRational::one();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for n in 2..=order {
        // [z^n] (1/2) z b^2 = (1/2) sum_{i+j = n-1} b_i b_j
        let mut acc = BigRational::zero();
        for i in 1..n - 1 {
            if !b[i].is_zero() && !b[n - 1 - i].is_zero() {
                acc += &b[i] * &b[n - 1 - i];
            }
        }
        b[n] = acc * &half;
    }
    PowerSeries::from_coeffs(b)
}

/// `f(z) = 1/(1 - z b(z))`, the binary-functional-graph series.
pub fn binary_graph_series(order: usize) -> PowerSeries {
    let zb = solve_binary_tree_series(order).shift_up();
    PowerSeries::one(order).sub(&zb).reciprocal()
}

/// Number of functions on `n` labeled nodes whose in-degrees are all 0 or
/// 2, as an exact integer: `n! [z^n] f`.
pub fn binary_graph_count(n: u64) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let f = binary_graph_series(n as usize);
    let count = BigRational::from_integer(factorial(n)) * f.coeff(n as usize);
    debug_assert!(count.is_integer());
    count.to_integer()
}

/// The refined asymptotic form of the coefficient `[z^n] f`, namely
/// `2^(n/2) (4n - 1) / (4n sqrt(pi n / 2))` — a convergence diagnostic
/// only; exact coefficients supersede it wherever an oracle equality is
/// asserted.
pub fn binary_graph_coefficient_asymptotic(n: u64) -> f64 {
    let nf = n as f64;
    2f64.powf(nf / 2.0) * (4.0 * nf - 1.0) / (4.0 * nf * (std::f64::consts::PI * nf / 2.0).sqrt())
}

/// Statistics with an exact mean generating function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanStatistic {
    Components,
    CyclicNodes,
    TerminalNodes,
}

/// Exact mean of `statistic` over all binary functional graphs on `n`
/// labeled nodes: `[z^n] Xi / [z^n] f` with
///
/// ```text
/// Xi_components = 1/(1-zb) ln 1/(1-zb)
/// Xi_cyclic     = zb / (1-zb)^2
/// Xi_terminal   = z^2 / (1-2z^2)^(3/2)
/// ```
pub fn exact_mean(statistic: MeanStatistic, n: u64) -> Result<BigRational> {
    check_even_size(n)?;
    let order = n as usize;
    let f = binary_graph_series(order);
    let xi = match statistic {
        MeanStatistic::Components => f.mul(&f.ln()),
        MeanStatistic::CyclicNodes => {
            let zb = solve_binary_tree_series(order).shift_up();
            zb.mul(&f.pow(2))
        }
        MeanStatistic::TerminalNodes => {
            // z^2 (1 - 2z^2)^(-3/2) = z^2 f^3
            f.pow(3).shift_up().shift_up()
        }
    };
    Ok(xi.coeff(order) / f.coeff(order))
}

/// Exact mean of the longest tail over all binary functional graphs on `n`
/// labeled nodes.
///
/// `b_h` is the series of binary trees of height at most `h`
/// (`b_0 = z`, `b_{h+1} = z + (1/2) z b_h^2`) and `f_h = 1/(1 - z b_h)`
/// collects graphs whose attached trees all have height at most `h` —
/// equivalently, maximum tail length at most `h + 1` under the edge-count
/// tail convention. Calibrated against exhaustive enumeration, the mean is
///
/// ```text
/// E[max tail] = 1 + sum_{h >= 0} ([z^n]f - [z^n]f_h) / [z^n]f
/// ```
///
/// (the leading 1 because every binary graph on n >= 2 nodes has a tree
/// node at tail length 1, so P(max tail > 0) = 1).
pub fn exact_mean_max_tail(n: u64) -> Result<BigRational> {
    check_even_size(n)?;
    let order = n as usize;
    let f = binary_graph_series(order);
    let total = f.coeff(order).clone();
    let one = PowerSeries::one(order);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));

    let mut b_h = PowerSeries::z(order);
    let mut sum = BigRational::zero();
    loop {
        let f_h = one.sub(&b_h.shift_up()).reciprocal();
        let gap = &total - f_h.coeff(order);
        if gap.is_zero() {
            break;
        }
        debug_assert!(gap.is_positive());
        sum += gap / &total;
        // b_{h+1} = z + (1/2) z b_h^2
        b_h = PowerSeries::z(order).add(&b_h.pow(2).shift_up().scale(&half));
    }
    Ok(sum + BigRational::one())
}

/// The bounded-height tree series `b^[h]` (`b^[0] = z`), exposed for the
/// recursion identity checks.
pub fn bounded_height_tree_series(h: u32, order: usize) -> PowerSeries {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut b_h = PowerSeries::z(order);
    for _ in 0..h {
        b_h = PowerSeries::z(order).add(&b_h.pow(2).shift_up().scale(&half));
    }
    b_h
}

/// The tree, component, and graph series of the general `m`-ary grammar.
#[derive(Debug, Clone)]
pub struct MarySeries {
    /// `t = z + z t^m / m!`
    pub trees: PowerSeries,
    /// `c = ln (1 - z t^(m-1) / (m-1)!)^(-1)`
    pub components: PowerSeries,
    /// `f = e^c`; `n! [z^n] f` counts `m`-ary functional graphs
    pub graphs: PowerSeries,
}

/// Solve the `m`-ary grammar at truncation `order`.
///
/// `m = 1` reproduces permutations (`f = 1/(1-z)`); `m = 2` coincides with
/// the dedicated binary series.
pub fn mary_series(m: u32, order: usize) -> MarySeries {
    assert!(m >= 1, "arity must be at least 1");
    assert!(order >= 1);
    let z = PowerSeries::z(order);
    let inv_mfact = BigRational::new(BigInt::one(), factorial(m as u64));
    // fixed point of t = z + z t^m / m!; each pass fixes at least one more
    // coefficient, so `order` passes suffice
    let mut t = z.clone();
    for _ in 0..order {
        let next = z.add(&t.pow(m).shift_up().scale(&inv_mfact));
        if next == t {
            break;
        }
        t = next;
    }
    let inv_m1fact = BigRational::new(BigInt::one(), factorial((m - 1) as u64));
    let u = PowerSeries::one(order).sub(&t.pow(m - 1).shift_up().scale(&inv_m1fact));
    let c = u.reciprocal().ln();
    let f = c.exp();
    MarySeries {
        trees: t,
        components: c,
        graphs: f,
    }
}

fn check_even_size(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::SizeTooSmall { n, min: 2 });
    }
    if !n.is_multiple_of(2) {
        return Err(Error::OddSize(n));
    }
    Ok(())
}

/// `n! [z^n] s` as an exact rational (an integer for counting series).
pub fn labeled_count(s: &PowerSeries, n: usize) -> BigRational {
    s.coeff(n) * BigRational::from_integer(factorial(n as u64))
}

/// Convert an exact rational to `f64` (for convergence diagnostics).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn binary_tree_counts() {
        let b = solve_binary_tree_series(9);
        assert_eq!(labeled_count(&b, 1), rat(1, 1));
        assert_eq!(labeled_count(&b, 2), rat(0, 1));
        assert_eq!(labeled_count(&b, 3), rat(3, 1));
        // parity: even coefficients all vanish
        for k in (2..=8).step_by(2) {
            assert!(b.coeff(k).is_zero(), "b[{k}] nonzero");
        }
    }

    #[test]
    fn binary_graph_counts() {
        assert_eq!(binary_graph_count(0), BigInt::from(1));
        assert_eq!(binary_graph_count(2), BigInt::from(2));
        assert_eq!(binary_graph_count(4), BigInt::from(36));
        assert_eq!(binary_graph_count(6), BigInt::from(1800));
        assert_eq!(binary_graph_count(8), BigInt::from(176_400));
        for n in (1..=15).step_by(2) {
            assert_eq!(binary_graph_count(n), BigInt::zero(), "odd n={n}");
        }
    }

    #[test]
    fn closed_form_route_agrees() {
        // f = (1 - 2z^2)^(-1/2): same coefficients as 1/(1 - z b)
        let order = 24;
        let two_z_sq = PowerSeries::z(order).pow(2).scale(&rat(2, 1));
        let closed = PowerSeries::one(order).sub(&two_z_sq).sqrt().reciprocal();
        assert_eq!(closed, binary_graph_series(order));
    }

    #[test]
    fn exact_means_small_n() {
        assert_eq!(exact_mean(MeanStatistic::Components, 4).unwrap(), rat(4, 3));
        assert_eq!(
            exact_mean(MeanStatistic::CyclicNodes, 4).unwrap(),
            rat(5, 3)
        );
        for n in [2u64, 4, 6, 8] {
            assert_eq!(
                exact_mean(MeanStatistic::TerminalNodes, n).unwrap(),
                BigRational::from_integer(BigInt::from(n / 2)),
                "terminal mean at n={n}"
            );
        }
        assert_eq!(
            exact_mean(MeanStatistic::Components, 6).unwrap(),
            rat(23, 15)
        );
        assert_eq!(
            exact_mean(MeanStatistic::CyclicNodes, 6).unwrap(),
            rat(11, 5)
        );
    }

    #[test]
    fn exact_mean_rejects_bad_sizes() {
        assert!(matches!(
            exact_mean(MeanStatistic::Components, 5),
            Err(Error::OddSize(5))
        ));
        assert!(matches!(
            exact_mean(MeanStatistic::Components, 0),
            Err(Error::SizeTooSmall { .. })
        ));
        assert!(matches!(exact_mean_max_tail(7), Err(Error::OddSize(7))));
    }

    #[test]
    fn max_tail_means() {
        // calibrated against exhaustive enumeration
        assert_eq!(exact_mean_max_tail(2).unwrap(), rat(1, 1));
        assert_eq!(exact_mean_max_tail(4).unwrap(), rat(4, 3));
        assert_eq!(exact_mean_max_tail(6).unwrap(), rat(9, 5));
        assert_eq!(exact_mean_max_tail(8).unwrap(), rat(79, 35));
    }

    #[test]
    fn graphs_with_tail_at_least_two() {
        // 4! ([z^4]f - [z^4]f_0) = 24 (3/2 - 1) = 12
        let order = 4;
        let f = binary_graph_series(order);
        let f0 = PowerSeries::one(order)
            .sub(&bounded_height_tree_series(0, order).shift_up())
            .reciprocal();
        assert_eq!(f.coeff(4), &rat(3, 2));
        let diff = (f.coeff(4) - f0.coeff(4)) * BigRational::from_integer(factorial(4));
        assert_eq!(diff, rat(12, 1));
    }

    #[test]
    fn height_recursion_identity() {
        // b - b^[h+1] = (1/2) z (b - b^[h]) (b + b^[h])
        let order = 32;
        let b = solve_binary_tree_series(order);
        let half = rat(1, 2);
        for h in 0..6 {
            let bh = bounded_height_tree_series(h, order);
            let bh1 = bounded_height_tree_series(h + 1, order);
            let lhs = b.sub(&bh1);
            let rhs = b.sub(&bh).mul(&b.add(&bh)).shift_up().scale(&half);
            assert_eq!(lhs, rhs, "h={h}");
        }
    }

    #[test]
    fn mary_specializations() {
        let order = 12;
        // m = 2 coincides with the dedicated binary machinery
        let m2 = mary_series(2, order);
        assert_eq!(m2.trees, solve_binary_tree_series(order));
        assert_eq!(m2.graphs, binary_graph_series(order));

        // m = 1: permutations, f = 1/(1-z), i.e. n! [z^n]f = n!
        let m1 = mary_series(1, order);
        for n in 0..=order {
            assert_eq!(m1.graphs.coeff(n), &BigRational::one(), "n={n}");
        }
        // t = z/(1-z)
        for n in 1..=order {
            assert_eq!(m1.trees.coeff(n), &BigRational::one());
        }

        // m = 3, n = 3: only the three constant maps
        let m3 = mary_series(3, 6);
        assert_eq!(labeled_count(&m3.graphs, 3), rat(3, 1));
    }

    #[test]
    fn asymptotic_coefficient_ratio_tends_to_one() {
        // diagnostic form vs exact coefficients: relative gap shrinks
        let f = binary_graph_series(64);
        let mut prev_gap = f64::INFINITY;
        for n in [16u64, 32, 64] {
            let exact = rational_to_f64(f.coeff(n as usize));
            let approx = binary_graph_coefficient_asymptotic(n);
            let gap = ((approx / exact) - 1.0).abs();
            assert!(gap < prev_gap, "gap not shrinking at n={n}");
            prev_gap = gap;
        }
        assert!(prev_gap < 1e-5);
    }

    #[test]
    fn series_algebra_round_trips() {
        let order = 16;
        let f = binary_graph_series(order);
        assert_eq!(f.mul(&f.reciprocal()), PowerSeries::one(order));
        assert_eq!(f.ln().exp(), f);
        assert_eq!(f.sqrt().pow(2), f);
    }
}
