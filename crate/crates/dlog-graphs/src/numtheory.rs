//! Number-theoretic groundwork: modular exponentiation, factorization,
//! multiplicative orders, the `m`-class structure of a prime, and
//! construction of the full transition table `x -> g^x mod p`.
//!
//! The supported moduli are primes `3 <= p <= 2^31 - 1`, so every product
//! of two residues fits in 64 bits. The factorization routines accept any
//! 64-bit integer (trial division with a deterministic Miller-Rabin and
//! Pollard-Brent fallback), which keeps `euler_phi` usable on its own.

use crate::{Error, Result};

/// Largest prime modulus the crate supports.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// `base^exponent mod p` by binary exponentiation.
///
/// Rejects `p < 2`. The base must already be reduced (`0 <= base < p`).
pub fn mod_pow(base: u64, exponent: u64, p: u64) -> Result<u64> {
    if p < 2 {
        return Err(Error::ModulusTooSmall(p));
    }
    debug_assert!(base < p, "base must be reduced mod p");
    Ok(mod_pow_raw(base, exponent, p))
}

fn mod_pow_raw(mut base: u64, mut exponent: u64, p: u64) -> u64 {
    let mut acc: u64 = 1 % p;
    base %= p;
    while exponent > 0 {
        if exponent & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exponent >>= 1;
    }
    acc
}

/// `a * b mod p` via a 128-bit intermediate; valid for any `p < 2^64`.
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Deterministic Miller-Rabin for 64-bit integers.
///
/// The witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is known
/// to be exact for all n < 3.3 * 10^24, which covers u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow_raw(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Canonical factorization of `n` as ascending `(prime, exponent)` pairs.
///
/// `n = 1` yields the empty list. Trial division handles everything the
/// sweep needs (the experiment's moduli are near 10^5); Pollard-Brent picks
/// up 64-bit stragglers so the function is total on `n >= 1`.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut n = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for q in std::iter::once(2u64).chain((3..=0xFFFF).step_by(2)) {
        if q * q > n {
            break;
        }
        if n.is_multiple_of(q) {
            let mut e = 0;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            factors.push((q, e));
        }
    }
    if n > 1 {
        let mut rest = Vec::new();
        split_into_primes(n, &mut rest);
        rest.sort_unstable();
        for q in rest {
            match factors.last_mut() {
                Some((p, e)) if *p == q => *e += 1,
                _ => factors.push((q, 1)),
            }
        }
    }
    factors
}

/// Recursively split `n` (which has no factors below 2^16) into primes.
fn split_into_primes(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_into_primes(d, out);
    split_into_primes(n / d, out);
}

/// Brent's variant of Pollard's rho; returns a nontrivial divisor of
/// composite odd `n`.
fn pollard_brent(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime(n) && n % 2 == 1);
    let mut c: u64 = 1;
    loop {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let mut x: u64 = 2;
        let mut y: u64 = 2;
        let mut d: u64 = 1;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
            count += 1;
            if count > 1 << 24 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Euler's totient, multiplicative over `factorize(n)`.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// All divisors of the number described by `factors`, ascending.
fn divisors_of(factors: &[(u64, u32)]) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, e) in factors {
        let prev = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..prev {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// A prime modulus together with the divisor lattice of `p - 1` and the
/// class count `phi((p-1)/m)` for every divisor `m`.
///
/// The count is the number of bases `g` whose graph is `m`-ary; summed over
/// all divisors it recovers `p - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeContext {
    p: u64,
    factors: Vec<(u64, u32)>,
    divisors: Vec<u64>,
    class_counts: Vec<u64>,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 {
            return Err(Error::ModulusTooSmall(p));
        }
        if p > MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let factors = factorize(p - 1);
        let divisors = divisors_of(&factors);
        let class_counts: Vec<u64> = divisors.iter().map(|&m| euler_phi((p - 1) / m)).collect();
        debug_assert_eq!(class_counts.iter().sum::<u64>(), p - 1);
        Ok(PrimeContext {
            p,
            factors,
            divisors,
            class_counts,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of graph nodes, `p - 1`.
    pub fn n(&self) -> u64 {
        self.p - 1
    }

    /// Ascending `(prime, exponent)` factorization of `p - 1`.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// All divisors of `p - 1`, ascending (always contains 1 and `p - 1`).
    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    /// Number of `m`-ary graphs, `phi((p-1)/m)`. Errors when `m` does not
    /// divide `p - 1`.
    pub fn count_m_ary(&self, m: u64) -> Result<u64> {
        match self.divisors.binary_search(&m) {
            Ok(i) => Ok(self.class_counts[i]),
            Err(_) => Err(Error::NotADivisor { m, n: self.p - 1 }),
        }
    }

    /// `(m, count)` pairs over all divisors of `p - 1`.
    pub fn class_counts(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.divisors
            .iter()
            .copied()
            .zip(self.class_counts.iter().copied())
    }

    fn check_residue(&self, g: u64) -> Result<()> {
        if g == 0 || g >= self.p {
            return Err(Error::ResidueOutOfRange { g, max: self.p - 1 });
        }
        Ok(())
    }
}

/// Least `k >= 1` with `g^k = 1 mod p`, by dividing prime factors out of
/// `p - 1` (never by iterating the powers of `g`).
pub fn multiplicative_order(g: u64, ctx: &PrimeContext) -> Result<u64> {
    ctx.check_residue(g)?;
    let p = ctx.p();
    let mut order = p - 1;
    for &(q, _) in ctx.factors() {
        while order.is_multiple_of(q) && mod_pow_raw(g, order / q, p) == 1 {
            order /= q;
        }
    }
    debug_assert_eq!(mod_pow_raw(g, order, p), 1);
    Ok(order)
}

/// The divisor `m` for which the graph of `x -> g^x` is `m`-ary.
///
/// Writing `g = r^a` for a primitive root `r`, the class is
/// `m = gcd(a, p-1)`; since `ord(g) = (p-1)/gcd(a, p-1)` this is computed
/// as `(p-1) / ord(g)` without ever touching a discrete logarithm.
pub fn classify_m(g: u64, ctx: &PrimeContext) -> Result<u64> {
    Ok(ctx.n() / multiplicative_order(g, ctx)?)
}

/// Barrett reduction for a fixed modulus `p < 2^32`: one 128-bit multiply
/// and a conditional subtract instead of a hardware division. This is the
/// sweep's innermost primitive (~10^10 reductions per full run).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Reducer {
    p: u64,
    magic: u64, // floor(2^64 / p)
}

impl Reducer {
    pub(crate) fn new(p: u64) -> Self {
        debug_assert!((2..1 << 32).contains(&p));
        Reducer {
            p,
            magic: ((1u128 << 64) / p as u128) as u64,
        }
    }

    /// `a * b mod p` for reduced inputs.
    #[inline]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        let x = a * b; // < p^2 < 2^64
        let q = ((x as u128 * self.magic as u128) >> 64) as u64;
        let mut r = x - q * self.p; // q <= x/p, so r < 2p
        if r >= self.p {
            r -= self.p;
        }
        r
    }
}

/// The full table of `f(x) = g^x mod p` on `x in 1..=p-1`.
///
/// Entries are stored as `u32` (the modulus bound keeps every residue below
/// 2^32), with `table()[x - 1] = f(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMap {
    p: u64,
    g: u64,
    next: Vec<u32>,
}

impl TransitionMap {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    /// Node count `p - 1`.
    pub fn n(&self) -> usize {
        self.next.len()
    }

    /// `table()[x - 1] = f(x)`, every entry in `1..=p-1`.
    pub fn table(&self) -> &[u32] {
        &self.next
    }

    /// `f(x)` for `x in 1..=p-1`.
    pub fn apply(&self, x: u64) -> u64 {
        self.next[(x - 1) as usize] as u64
    }
}

/// Build the transition table for `g` with `p - 2` sequential modular
/// multiplications starting from `f(1) = g`.
pub fn build_map(g: u64, ctx: &PrimeContext) -> Result<TransitionMap> {
    ctx.check_residue(g)?;
    let p = ctx.p();
    let n = (p - 1) as usize;
    let red = Reducer::new(p);
    let mut next = Vec::with_capacity(n);
    let mut power = g;
    next.push(g as u32);
    for _ in 1..n {
        power = red.mul(power, g);
        next.push(power as u32);
    }
    Ok(TransitionMap { p, g, next })
}

/// Reusable buffer for [`build_map_into`], letting sweep workers keep one
/// allocation across all of their graphs.
pub fn build_map_into(g: u64, ctx: &PrimeContext, next: &mut Vec<u32>) -> Result<()> {
    ctx.check_residue(g)?;
    let p = ctx.p();
    let n = (p - 1) as usize;
    let red = Reducer::new(p);
    next.clear();
    next.reserve(n);
    let mut power = g;
    next.push(g as u32);
    for _ in 1..n {
        power = red.mul(power, g);
        next.push(power as u32);
    }
    Ok(())
}
