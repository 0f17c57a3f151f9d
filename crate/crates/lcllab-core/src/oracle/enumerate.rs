//! Exhaustive small-graph enumeration: all labeled connected graphs on up to
//! 8 nodes, and the canonical (isomorphism-reduced) lists used by the
//! deduplicated sweeps.

use std::collections::HashSet;

use crate::graph::{Graph, NodeId};

use super::OracleError;

pub(crate) const MAX_ENUM_NODES: usize = 8;

/// Adjacency rows as bitmasks, enough for 8 nodes.
type Rows = [u8; MAX_ENUM_NODES];

fn edge_bits(n: usize) -> usize {
    n * (n - 1) / 2
}

fn mask_to_rows(n: usize, mask: u32) -> Rows {
    let mut rows = [0u8; MAX_ENUM_NODES];
    let mut bit = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if mask >> bit & 1 == 1 {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
            bit += 1;
        }
    }
    rows
}

fn rows_connected(n: usize, rows: &Rows) -> bool {
    let full = if n == 8 { 0xffu8 } else { (1u8 << n) - 1 };
    let mut seen = 1u8;
    loop {
        let mut next = seen;
        for v in 0..n {
            if seen >> v & 1 == 1 {
                next |= rows[v];
            }
        }
        if next == seen {
            return seen == full;
        }
        seen = next;
    }
}

fn rows_to_graph(n: usize, rows: &Rows) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rows[i] >> j & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("enumerated graphs are simple and connected")
}

/// Streams every labeled simple connected graph on `n` nodes.
pub fn enumerate_connected_graphs(
    n: usize,
) -> Result<impl Iterator<Item = Graph>, OracleError> {
    if n == 0 || n > MAX_ENUM_NODES {
        return Err(OracleError::TooLarge {
            n,
            max: MAX_ENUM_NODES,
        });
    }
    let total: u64 = 1u64 << edge_bits(n);
    Ok((0..total).filter_map(move |mask| {
        let rows = mask_to_rows(n, mask as u32);
        rows_connected(n, &rows).then(|| rows_to_graph(n, &rows))
    }))
}

/// Applies `scan` to every labeled connected graph on `n` nodes, partitioned
/// across worker threads, and returns the number of graphs visited together
/// with everything the scans emitted. Graphs are built transiently, so the
/// full labeled universe is never materialized.
pub fn scan_connected_graphs<E, F>(n: usize, scan: F) -> Result<(u64, Vec<E>), OracleError>
where
    E: Send,
    F: Fn(&Graph) -> Result<Vec<E>, OracleError> + Sync,
{
    use rayon::prelude::*;

    if n == 0 || n > MAX_ENUM_NODES {
        return Err(OracleError::TooLarge {
            n,
            max: MAX_ENUM_NODES,
        });
    }
    let total: u64 = 1u64 << edge_bits(n);
    const CHUNK: u64 = 1 << 14;
    let chunks = total.div_ceil(CHUNK);
    let parts: Vec<(u64, Vec<E>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut count = 0u64;
            let mut items = Vec::new();
            for mask in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let rows = mask_to_rows(n, mask as u32);
                if !rows_connected(n, &rows) {
                    continue;
                }
                count += 1;
                let g = rows_to_graph(n, &rows);
                items.extend(scan(&g)?);
            }
            Ok((count, items))
        })
        .collect::<Result<_, OracleError>>()?;
    let mut count = 0;
    let mut items = Vec::new();
    for (c, part) in parts {
        count += c;
        items.extend(part);
    }
    Ok((count, items))
}

/// Number of labeled connected graphs on `n` nodes by the inclusion-exclusion
/// recurrence, the independent count the enumerator is tested against.
pub fn labeled_connected_count(n: usize) -> u64 {
    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let mut r = 1u64;
        for i in 0..k {
            r = r * (n - i) / (i + 1);
        }
        r
    }
    let mut c = vec![0u64; n + 1];
    for m in 1..=n {
        let mut total = 1u64 << edge_bits(m);
        for k in 1..m {
            total -= binom(m as u64 - 1, k as u64 - 1) * c[k] * (1u64 << edge_bits(m - k));
        }
        c[m] = total;
    }
    c[n]
}

/// Canonical key: the lexicographically smallest upper-triangle bit string of
/// the adjacency matrix over all vertex orderings consistent with an
/// iterated-refinement coloring. The coloring is isomorphism-invariant, so
/// equal keys characterize isomorphic graphs.
pub(crate) fn canonical_key(n: usize, rows: &Rows) -> u64 {
    // Refine colors by (color, sorted neighbor colors) until stable.
    let mut colors: Vec<u64> = (0..n).map(|v| rows[v].count_ones() as u64).collect();
    for _ in 0..n {
        let mut sigs: Vec<(u64, Vec<u64>)> = (0..n)
            .map(|v| {
                let mut nbr: Vec<u64> = (0..n)
                    .filter(|&w| rows[v] >> w & 1 == 1)
                    .map(|w| colors[w])
                    .collect();
                nbr.sort_unstable();
                (colors[v], nbr)
            })
            .collect();
        let mut palette: Vec<(u64, Vec<u64>)> = sigs.clone();
        palette.sort();
        palette.dedup();
        let next: Vec<u64> = sigs
            .drain(..)
            .map(|s| palette.binary_search(&s).unwrap() as u64)
            .collect();
        if next == colors {
            break;
        }
        colors = next;
    }

    // Vertices must be placed in color order; ties explored by backtracking
    // with prefix pruning against the best key found so far.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| colors[v]);
    let sorted_colors: Vec<u64> = order.iter().map(|&v| colors[v]).collect();

    let mut best: Option<Vec<u8>> = None;
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut bits: Vec<u8> = Vec::with_capacity(edge_bits(n));

    fn place(
        n: usize,
        rows: &Rows,
        colors: &[u64],
        sorted_colors: &[u64],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        bits: &mut Vec<u8>,
        best: &mut Option<Vec<u8>>,
    ) {
        let pos = perm.len();
        if pos == n {
            if best.as_ref().map_or(true, |b| bits[..] < b[..]) {
                *best = Some(bits.clone());
            }
            return;
        }
        for v in 0..n {
            if used[v] || colors[v] != sorted_colors[pos] {
                continue;
            }
            let start = bits.len();
            for &u in perm.iter() {
                bits.push(rows[u] >> v & 1);
            }
            // Prune: compare this prefix against the best key.
            let keep = match best {
                Some(b) => bits[..] <= b[..bits.len()],
                None => true,
            };
            if keep {
                perm.push(v);
                used[v] = true;
                place(n, rows, colors, sorted_colors, perm, used, bits, best);
                used[v] = false;
                perm.pop();
            }
            bits.truncate(start);
        }
    }

    place(
        n,
        rows,
        &colors,
        &sorted_colors,
        &mut perm,
        &mut used,
        &mut bits,
        &mut best,
    );
    let best = best.expect("at least one ordering exists");
    best.iter().fold(0u64, |acc, &b| acc << 1 | u64::from(b))
}

/// One representative per isomorphism class of simple graphs on `n` nodes
/// (connected or not), grown by vertex extension from the classes on `n - 1`.
fn all_graphs_canonical(n: usize) -> Vec<Rows> {
    let mut level: Vec<Rows> = vec![[0u8; MAX_ENUM_NODES]];
    for k in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for rows in &level {
            for subset in 0u16..(1 << (k - 1)) {
                let mut cand = *rows;
                cand[k - 1] = subset as u8;
                for w in 0..k - 1 {
                    if subset >> w & 1 == 1 {
                        cand[w] |= 1 << (k - 1);
                    }
                }
                if seen.insert(canonical_key(k, &cand)) {
                    next.push(cand);
                }
            }
        }
        level = next;
    }
    level
}

/// All connected graphs on `n` nodes up to isomorphism.
pub fn connected_graphs_canonical(n: usize) -> Result<Vec<Graph>, OracleError> {
    if n == 0 || n > MAX_ENUM_NODES {
        return Err(OracleError::TooLarge {
            n,
            max: MAX_ENUM_NODES,
        });
    }
    Ok(all_graphs_canonical(n)
        .into_iter()
        .filter(|rows| rows_connected(n, rows))
        .map(|rows| rows_to_graph(n, &rows))
        .collect())
}

/// Whether two graphs are isomorphic; small-n canonical-key comparison.
pub fn graphs_isomorphic(a: &Graph, b: &Graph) -> Result<bool, OracleError> {
    let n = a.node_count();
    if n != b.node_count() {
        return Ok(false);
    }
    if n > MAX_ENUM_NODES {
        return Err(OracleError::TooLarge {
            n,
            max: MAX_ENUM_NODES,
        });
    }
    let to_rows = |g: &Graph| {
        let mut rows = [0u8; MAX_ENUM_NODES];
        for v in g.nodes() {
            for &NodeId(w) in g.neighbors(v) {
                rows[v.0] |= 1 << w;
            }
        }
        rows
    };
    Ok(canonical_key(n, &to_rows(a)) == canonical_key(n, &to_rows(b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labeled_counts_match_inclusion_exclusion() {
        // 1, 1, 4, 38, 728, 26704 labeled connected graphs on 1..=6 nodes.
        for n in 1..=6 {
            let streamed = enumerate_connected_graphs(n).unwrap().count() as u64;
            assert_eq!(streamed, labeled_connected_count(n), "n = {n}");
        }
        assert_eq!(labeled_connected_count(3), 4);
        assert_eq!(labeled_connected_count(4), 38);
        assert_eq!(labeled_connected_count(7), 1_866_256);
    }

    #[test]
    fn rejects_oversized() {
        assert!(matches!(
            enumerate_connected_graphs(9),
            Err(OracleError::TooLarge { .. })
        ));
        assert!(connected_graphs_canonical(9).is_err());
    }

    #[test]
    fn canonical_counts_match_known_values() {
        // Connected graphs up to isomorphism: 1, 1, 2, 6, 21, 112, 853.
        let expect = [1usize, 1, 2, 6, 21, 112, 853];
        for (i, &want) in expect.iter().enumerate() {
            let n = i + 1;
            assert_eq!(connected_graphs_canonical(n).unwrap().len(), want, "n = {n}");
        }
    }

    #[test]
    fn canonical_trees_on_8_nodes() {
        let trees: Vec<Graph> = connected_graphs_canonical(8)
            .unwrap()
            .into_iter()
            .filter(|g| !g.has_cycle())
            .collect();
        assert_eq!(trees.len(), 23);
        assert_eq!(connected_graphs_canonical(8).unwrap().len(), 11117);
    }

    #[test]
    fn canonical_key_invariant_under_relabeling() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]).unwrap();
        // Relabel by a fixed permutation.
        let perm = [3usize, 0, 5, 1, 4, 2];
        let edges: Vec<(usize, usize)> = (0..6)
            .flat_map(|u| {
                g.neighbors(NodeId(u))
                    .iter()
                    .filter(move |w| w.0 > u)
                    .map(move |w| (perm[u], perm[w.0]))
                    .collect::<Vec<_>>()
            })
            .collect();
        let h = Graph::from_edges(6, &edges).unwrap();
        assert!(graphs_isomorphic(&g, &h).unwrap());
        let p6 = Graph::path(6);
        assert!(!graphs_isomorphic(&g, &p6).unwrap());
    }
}
