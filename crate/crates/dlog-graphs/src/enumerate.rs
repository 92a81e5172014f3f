//! Brute-force enumeration of every `m`-ary function on a tiny node set.
//!
//! Walks the full space of functions `{1..n} -> {1..n}` whose in-degrees
//! are all 0 or `m` (backtracking with in-degree pruning), analyzes each
//! graph, and returns exact rational means of every statistic. This is the
//! independent oracle the generating-function machinery is checked against.

use crate::graph::{analyze_with, StatSums, Workspace};
use crate::{Error, Result};
use num::{BigInt, BigRational};

/// Largest node count accepted (the space grows like `n^n`).
pub const MAX_ENUM_NODES: u64 = 8;

/// Exact census of all `m`-ary functional graphs on `n` labeled nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratedStats {
    pub n: u64,
    pub m: u64,
    /// Number of graphs enumerated.
    pub count: u64,
    /// Field-by-field totals over all graphs.
    pub sums: StatSums,
}

impl EnumeratedStats {
    fn mean(&self, total: u128) -> BigRational {
        BigRational::new(BigInt::from(total), BigInt::from(self.count))
    }

    pub fn mean_components(&self) -> BigRational {
        self.mean(self.sums.components as u128)
    }
    pub fn mean_cyclic_nodes(&self) -> BigRational {
        self.mean(self.sums.cyclic_nodes as u128)
    }
    pub fn mean_tail_nodes(&self) -> BigRational {
        self.mean(self.sums.tail_nodes as u128)
    }
    pub fn mean_image_nodes(&self) -> BigRational {
        self.mean(self.sums.image_nodes as u128)
    }
    pub fn mean_terminal_nodes(&self) -> BigRational {
        self.mean(self.sums.terminal_nodes as u128)
    }
    pub fn mean_fixed_points(&self) -> BigRational {
        self.mean(self.sums.fixed_points as u128)
    }
    pub fn mean_max_cycle(&self) -> BigRational {
        self.mean(self.sums.max_cycle as u128)
    }
    pub fn mean_max_tail(&self) -> BigRational {
        self.mean(self.sums.max_tail as u128)
    }
    /// Mean of the per-node average cycle length (`sum_cycle / n` per graph).
    pub fn mean_avg_cycle(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.sums.sum_cycle_over_nodes),
            BigInt::from(self.count as u128 * self.n as u128),
        )
    }
    /// Mean of the per-node average tail length.
    pub fn mean_avg_tail(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.sums.sum_tail_over_nodes),
            BigInt::from(self.count as u128 * self.n as u128),
        )
    }
}

/// Enumerate every function on `{1..n}` with in-degrees in `{0, m}` and
/// accumulate exact statistics. Rejects `n > 8`.
pub fn exhaustive_enumerate(n: u64, m: u64) -> Result<EnumeratedStats> {
    if n == 0 || n > MAX_ENUM_NODES {
        return Err(Error::EnumerationTooLarge {
            n,
            max: MAX_ENUM_NODES,
        });
    }
    assert!(m >= 1, "arity must be at least 1");
    let n = n as usize;
    let m32 = m as u32;

    let mut table = vec![0u32; n];
    let mut indeg = vec![0u32; n];
    let mut ws = Workspace::new();
    let mut out = EnumeratedStats {
        n: n as u64,
        m,
        count: 0,
        sums: StatSums::default(),
    };

    // deficit = sum over partially-filled nodes of (m - indeg); every one
    // of those nodes must still receive edges, so prune when the remaining
    // positions cannot cover it
    #[allow(clippy::too_many_arguments)]
    fn assign(
        pos: usize,
        deficit: u32,
        n: usize,
        m: u32,
        table: &mut [u32],
        indeg: &mut [u32],
        ws: &mut Workspace,
        out: &mut EnumeratedStats,
    ) {
        let remaining = (n - pos) as u32;
        if deficit > remaining {
            return;
        }
        if pos == n {
            out.count += 1;
            let stats = analyze_with(ws, table).expect("enumerated table is total");
            out.sums.add(&stats);
            return;
        }
        for target in 0..n {
            if indeg[target] == m {
                continue;
            }
            indeg[target] += 1;
            table[pos] = (target + 1) as u32;
            let d = if indeg[target] == 1 {
                deficit + m - 1
            } else {
                deficit - 1
            };
            assign(pos + 1, d, n, m, table, indeg, ws, out);
            indeg[target] -= 1;
        }
    }

    assign(0, 0, n, m32, &mut table, &mut indeg, &mut ws, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{BigInt, BigRational};

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn binary_census_n4() {
        let e = exhaustive_enumerate(4, 2).unwrap();
        assert_eq!(e.count, 36);
        assert_eq!(e.mean_components(), rat(4, 3));
        assert_eq!(e.mean_cyclic_nodes(), rat(5, 3));
        assert_eq!(e.mean_terminal_nodes(), rat(2, 1));
        assert_eq!(e.mean_image_nodes(), rat(2, 1));
        assert_eq!(e.mean_max_tail(), rat(4, 3));
    }

    #[test]
    fn binary_census_n2() {
        let e = exhaustive_enumerate(2, 2).unwrap();
        assert_eq!(e.count, 2);
        assert_eq!(e.mean_max_cycle(), rat(1, 1));
        assert_eq!(e.mean_max_tail(), rat(1, 1));
    }

    #[test]
    fn permutation_census_n3() {
        let e = exhaustive_enumerate(3, 1).unwrap();
        assert_eq!(e.count, 6);
        assert_eq!(e.mean_components(), rat(11, 6)); // H_3
        assert_eq!(e.mean_avg_cycle(), rat(2, 1)); // (n+1)/2
        assert_eq!(e.mean_tail_nodes(), rat(0, 1));
        assert_eq!(e.mean_terminal_nodes(), rat(0, 1));
    }

    #[test]
    fn ternary_census_n3() {
        // only the three constant maps have in-degrees in {0, 3}
        let e = exhaustive_enumerate(3, 3).unwrap();
        assert_eq!(e.count, 3);
        assert_eq!(e.mean_max_tail(), rat(1, 1));
    }

    #[test]
    fn rejects_oversized_inputs() {
        assert!(matches!(
            exhaustive_enumerate(9, 2),
            Err(Error::EnumerationTooLarge { .. })
        ));
        assert!(matches!(
            exhaustive_enumerate(0, 2),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn odd_binary_sizes_are_empty() {
        for n in [1u64, 3, 5] {
            let e = exhaustive_enumerate(n, 2).unwrap();
            assert_eq!(e.count, 0, "n={n}");
        }
    }
}
