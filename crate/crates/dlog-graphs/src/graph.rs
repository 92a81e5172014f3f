//! Linear-time measurement of a single functional graph.
//!
//! A transition table `t` with `t[x - 1] = f(x)` and every entry in
//! `1..=n` describes a functional graph on `n` nodes. [`analyze`] measures
//! it in O(n) time and O(n) auxiliary space:
//!
//! 1. count in-degrees (image nodes have in-degree >= 1),
//! 2. peel zero-in-degree nodes until only cyclic nodes remain,
//! 3. walk each cycle once for component count, cycle lengths, the longest
//!    cycle and fixed points,
//! 4. breadth-first over reversed edges from each cycle (cyclic nodes sit
//!    at depth 0) for tail-length sums, the longest tail, and component
//!    sizes,
//! 5. `sum_cycle_over_nodes` is cycle length times component size, summed
//!    over components.
//!
//! [`naive_analyze`] recomputes every statistic by walking the rho path
//! from each start node with no shared bookkeeping; it is the quadratic
//! reference oracle the linear engine is property-tested against.

use crate::{Error, Result};

/// Every measured statistic of one functional graph.
///
/// Tail length counts edges to the first cyclic node (0 for cyclic nodes);
/// cycle length counts edges, which equals nodes on the cycle. The two
/// `sum_*` fields are exact integer sums over all nodes: each node sees its
/// component's full cycle length, and its own edge-distance to the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GraphStats {
    pub n: u64,
    pub components: u64,
    pub cyclic_nodes: u64,
    pub tail_nodes: u64,
    pub image_nodes: u64,
    pub terminal_nodes: u64,
    pub fixed_points: u64,
    pub sum_cycle_over_nodes: u64,
    pub sum_tail_over_nodes: u64,
    pub max_cycle: u64,
    pub max_tail: u64,
}

impl GraphStats {
    /// Per-node average cycle length, `sum_cycle_over_nodes / n`.
    pub fn avg_cycle(&self) -> f64 {
        self.sum_cycle_over_nodes as f64 / self.n as f64
    }

    /// Per-node average tail length, `sum_tail_over_nodes / n`.
    pub fn avg_tail(&self) -> f64 {
        self.sum_tail_over_nodes as f64 / self.n as f64
    }
}

/// Scratch space for [`analyze_with`], reusable across graphs so the sweep
/// hot loop performs no allocation.
#[derive(Debug, Default)]
pub struct Workspace {
    indeg: Vec<u32>,
    offsets: Vec<u32>,
    targets: Vec<u32>,
    cursor: Vec<u32>,
    queue: Vec<u32>,
    state: Vec<u8>,
}

const UNSEEN: u8 = 0;
const ON_CYCLE: u8 = 1;
const IN_TREE: u8 = 2;

impl Workspace {
    pub fn new() -> Self {
        Workspace::default()
    }

    fn reset(&mut self, n: usize) {
        self.indeg.clear();
        self.indeg.resize(n, 0);
        self.offsets.clear();
        self.offsets.resize(n + 1, 0);
        self.targets.clear();
        self.targets.resize(n, 0);
        self.cursor.clear();
        self.cursor.resize(n, 0);
        self.queue.clear();
        self.queue.reserve(n);
        self.state.clear();
        self.state.resize(n, UNSEEN);
    }
}

/// Measure a functional graph, allocating a fresh workspace.
pub fn analyze(table: &[u32]) -> Result<GraphStats> {
    analyze_with(&mut Workspace::new(), table)
}

/// Measure the graph of a [`crate::numtheory::TransitionMap`].
pub fn analyze_map(map: &crate::numtheory::TransitionMap) -> Result<GraphStats> {
    analyze(map.table())
}

/// Measure a functional graph using caller-provided scratch space.
pub fn analyze_with(ws: &mut Workspace, table: &[u32]) -> Result<GraphStats> {
    let n = table.len();
    if n == 0 {
        return Ok(GraphStats::default());
    }
    if n > u32::MAX as usize {
        return Err(Error::TableTooLarge(n));
    }
    ws.reset(n);
    let Workspace {
        indeg,
        offsets,
        targets,
        cursor,
        queue,
        state,
    } = ws;

    // in-degrees, fixed points, entry validation in one pass
    let mut fixed_points = 0u64;
    for (i, &v) in table.iter().enumerate() {
        if v == 0 || v as usize > n {
            return Err(Error::BadTableEntry {
                x: i + 1,
                value: v as u64,
                n,
            });
        }
        indeg[(v - 1) as usize] += 1;
        if v as usize == i + 1 {
            fixed_points += 1;
        }
    }

    // reverse-edge CSR: offsets by prefix sum, then bucket fill
    let mut acc = 0u32;
    for i in 0..n {
        offsets[i] = acc;
        cursor[i] = acc;
        acc += indeg[i];
    }
    offsets[n] = acc;
    for (i, &v) in table.iter().enumerate() {
        let t = (v - 1) as usize;
        targets[cursor[t] as usize] = i as u32;
        cursor[t] += 1;
    }

    let image_nodes = indeg.iter().filter(|&&d| d > 0).count() as u64;
    let terminal_nodes = n as u64 - image_nodes;

    // peel terminal layers until only cyclic nodes remain
    for (i, &d) in indeg.iter().enumerate() {
        if d == 0 {
            queue.push(i as u32);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head] as usize;
        head += 1;
        let y = (table[x] - 1) as usize;
        indeg[y] -= 1;
        if indeg[y] == 0 {
            queue.push(y as u32);
        }
    }
    let tail_nodes = queue.len() as u64;
    let cyclic_nodes = n as u64 - tail_nodes;

    // walk each cycle, then sweep its trees breadth-first over reverse
    // edges; `cursor` is re-purposed as the per-node depth array (each
    // entry is written before it is read within a component)
    let depth = cursor;
    let mut components = 0u64;
    let mut max_cycle = 0u64;
    let mut max_tail = 0u64;
    let mut sum_cycle = 0u64;
    let mut sum_tail = 0u64;
    for start in 0..n {
        if indeg[start] == 0 || state[start] != UNSEEN {
            continue;
        }
        components += 1;
        queue.clear();
        let mut cycle_len = 0u64;
        let mut x = start;
        loop {
            state[x] = ON_CYCLE;
            depth[x] = 0;
            queue.push(x as u32);
            cycle_len += 1;
            x = (table[x] - 1) as usize;
            if x == start {
                break;
            }
        }
        max_cycle = max_cycle.max(cycle_len);

        let mut comp_size = cycle_len;
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head] as usize;
            head += 1;
            let d = depth[v];
            for &w in &targets[offsets[v] as usize..offsets[v + 1] as usize] {
                let w = w as usize;
                if state[w] == UNSEEN {
                    state[w] = IN_TREE;
                    depth[w] = d + 1;
                    sum_tail += (d + 1) as u64;
                    max_tail = max_tail.max((d + 1) as u64);
                    comp_size += 1;
                    queue.push(w as u32);
                }
            }
        }
        sum_cycle += cycle_len * comp_size;
    }

    let stats = GraphStats {
        n: n as u64,
        components,
        cyclic_nodes,
        tail_nodes,
        image_nodes,
        terminal_nodes,
        fixed_points,
        sum_cycle_over_nodes: sum_cycle,
        sum_tail_over_nodes: sum_tail,
        max_cycle,
        max_tail,
    };
    // every node is visited exactly once by peel + reverse sweep
    assert_eq!(stats.cyclic_nodes + stats.tail_nodes, stats.n);
    debug_assert_eq!(stats.image_nodes + stats.terminal_nodes, stats.n);
    debug_assert!(stats.components <= stats.cyclic_nodes);
    debug_assert!(stats.fixed_points <= stats.cyclic_nodes);
    debug_assert!(stats.max_cycle <= stats.cyclic_nodes);
    debug_assert!(stats.sum_cycle_over_nodes <= stats.n * stats.max_cycle);
    debug_assert!(stats.sum_tail_over_nodes <= stats.n * stats.max_tail);
    Ok(stats)
}

/// Quadratic reference analyzer: follows the rho path from every start
/// node independently and recomputes each statistic from scratch.
///
/// Intended for tables up to a few thousand nodes; it exists so the linear
/// engine has an independent oracle to be tested against.
pub fn naive_analyze(table: &[u32]) -> Result<GraphStats> {
    let n = table.len();
    if n == 0 {
        return Ok(GraphStats::default());
    }
    if n > 1 << 16 {
        return Err(Error::TableTooLarge(n));
    }
    for (i, &v) in table.iter().enumerate() {
        if v == 0 || v as usize > n {
            return Err(Error::BadTableEntry {
                x: i + 1,
                value: v as u64,
                n,
            });
        }
    }
    let step = |x: usize| (table[x] - 1) as usize;

    // stamped visit positions: scratch only, carries nothing between starts
    let mut stamp = vec![usize::MAX; n];
    let mut pos = vec![0usize; n];
    let mut cycle_seen = vec![false; n];

    let mut components = 0u64;
    let mut cyclic_nodes = 0u64;
    let mut fixed_points = 0u64;
    let mut sum_cycle = 0u64;
    let mut sum_tail = 0u64;
    let mut max_cycle = 0u64;
    let mut max_tail = 0u64;

    for start in 0..n {
        let mut x = start;
        let mut i = 0usize;
        while stamp[x] != start {
            stamp[x] = start;
            pos[x] = i;
            x = step(x);
            i += 1;
        }
        let tail = pos[x] as u64;
        let cycle = i as u64 - tail;
        if tail == 0 {
            cyclic_nodes += 1;
        }
        if step(start) == start {
            fixed_points += 1;
        }
        sum_tail += tail;
        sum_cycle += cycle;
        max_tail = max_tail.max(tail);
        max_cycle = max_cycle.max(cycle);

        // identify the component by the smallest node on its cycle
        let mut c = start;
        for _ in 0..tail {
            c = step(c);
        }
        let mut rep = c;
        let mut y = step(c);
        while y != c {
            rep = rep.min(y);
            y = step(y);
        }
        if !cycle_seen[rep] {
            cycle_seen[rep] = true;
            components += 1;
        }
    }

    let mut is_image = vec![false; n];
    for &v in table {
        is_image[(v - 1) as usize] = true;
    }
    let image_nodes = is_image.iter().filter(|&&b| b).count() as u64;

    Ok(GraphStats {
        n: n as u64,
        components,
        cyclic_nodes,
        tail_nodes: n as u64 - cyclic_nodes,
        image_nodes,
        terminal_nodes: n as u64 - image_nodes,
        fixed_points,
        sum_cycle_over_nodes: sum_cycle,
        sum_tail_over_nodes: sum_tail,
        max_cycle,
        max_tail,
    })
}

/// Exact integer totals of [`GraphStats`] fields over a set of graphs.
///
/// The two path-length sums use 128-bit accumulators (a single graph's
/// `sum_cycle_over_nodes` can reach `n^2`); everything here is plain
/// addition, so merging is associative and commutative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub struct StatSums {
    pub graphs: u64,
    pub components: u64,
    pub cyclic_nodes: u64,
    pub tail_nodes: u64,
    pub image_nodes: u64,
    pub terminal_nodes: u64,
    pub fixed_points: u64,
    pub sum_cycle_over_nodes: u128,
    pub sum_tail_over_nodes: u128,
    pub max_cycle: u64,
    pub max_tail: u64,
}

impl StatSums {
    pub fn add(&mut self, s: &GraphStats) {
        self.graphs += 1;
        self.components += s.components;
        self.cyclic_nodes += s.cyclic_nodes;
        self.tail_nodes += s.tail_nodes;
        self.image_nodes += s.image_nodes;
        self.terminal_nodes += s.terminal_nodes;
        self.fixed_points += s.fixed_points;
        self.sum_cycle_over_nodes += s.sum_cycle_over_nodes as u128;
        self.sum_tail_over_nodes += s.sum_tail_over_nodes as u128;
        self.max_cycle += s.max_cycle;
        self.max_tail += s.max_tail;
    }

    pub fn merge(&mut self, other: &StatSums) {
        self.graphs += other.graphs;
        self.components += other.components;
        self.cyclic_nodes += other.cyclic_nodes;
        self.tail_nodes += other.tail_nodes;
        self.image_nodes += other.image_nodes;
        self.terminal_nodes += other.terminal_nodes;
        self.fixed_points += other.fixed_points;
        self.sum_cycle_over_nodes += other.sum_cycle_over_nodes;
        self.sum_tail_over_nodes += other.sum_tail_over_nodes;
        self.max_cycle += other.max_cycle;
        self.max_tail += other.max_tail;
    }
}
