//! Labeled graphs on six vertices, shared by the sampler and acceptance tests.
#![allow(dead_code)]

use rrg_core::graph::RegularGraph;

/// Bit index of the unordered pair {u, v} among the 15 pairs on 6 vertices.
pub fn pair_bit(u: usize, v: usize) -> u32 {
    let (a, b) = (u.min(v), u.max(v));
    let mut k = 0;
    for i in 0..6 {
        for j in i + 1..6 {
            if (i, j) == (a, b) {
                return k;
            }
            k += 1;
        }
    }
    unreachable!()
}

pub fn pairs6() -> Vec<(usize, usize)> {
    (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).collect()
}

/// All labeled simple d-regular graphs on 6 vertices, as edge bitmasks.
pub fn enumerate_regular6(d: usize) -> Vec<u32> {
    let pairs = pairs6();
    (0u32..1 << 15)
        .filter(|mask| {
            let mut deg = [0; 6];
            for (k, &(u, v)) in pairs.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    deg[u] += 1;
                    deg[v] += 1;
                }
            }
            deg.iter().all(|&x| x == d)
        })
        .collect()
}

pub fn mask_of(g: &RegularGraph) -> u32 {
    g.edges().iter().map(|&(u, v)| 1 << pair_bit(u, v)).sum()
}
