//! Boundaries of unions of unit lattice cells.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

/// Cell `(i, j)` is the square `[i, i + 1] x [j, j + 1]`.
pub type Cell = (i64, i64);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CellError {
    #[error("cell set is empty")]
    Empty,
    #[error("cells touch only diagonally at lattice point {0:?}")]
    Pinched((i64, i64)),
    #[error("cell set has {0} boundary cycles; expected one")]
    NotSimplyConnected(usize),
}

/// Counter-clockwise lattice boundary of a simply connected, 4-connected
/// cell union, with collinear vertices removed.
pub fn boundary_cycle(cells: &BTreeSet<Cell>) -> Result<Vec<(i64, i64)>, CellError> {
    if cells.is_empty() {
        return Err(CellError::Empty);
    }
    // Directed unit edges with the union on their left.
    let mut next: BTreeMap<(i64, i64), (i64, i64)> = BTreeMap::new();
    let mut add = |a: (i64, i64), b: (i64, i64)| -> Result<(), CellError> {
        match next.insert(a, b) {
            Some(_) => Err(CellError::Pinched(a)),
            None => Ok(()),
        }
    };
    for &(i, j) in cells {
        if !cells.contains(&(i, j - 1)) {
            add((i, j), (i + 1, j))?;
        }
        if !cells.contains(&(i + 1, j)) {
            add((i + 1, j), (i + 1, j + 1))?;
        }
        if !cells.contains(&(i, j + 1)) {
            add((i + 1, j + 1), (i, j + 1))?;
        }
        if !cells.contains(&(i - 1, j)) {
            add((i, j + 1), (i, j))?;
        }
    }
    let total = next.len();
    let start = *next.keys().next().unwrap();
    let mut cycle = Vec::with_capacity(total);
    let mut cur = start;
    loop {
        cycle.push(cur);
        cur = next[&cur];
        if cur == start {
            break;
        }
    }
    if cycle.len() != total {
        let mut seen: BTreeSet<(i64, i64)> = cycle.iter().copied().collect();
        let mut cycles = 1;
        for &k in next.keys() {
            if seen.insert(k) {
                cycles += 1;
                let mut c = next[&k];
                while c != k {
                    seen.insert(c);
                    c = next[&c];
                }
            }
        }
        return Err(CellError::NotSimplyConnected(cycles));
    }
    Ok(simplify(&cycle))
}

/// Drops vertices where the boundary goes straight on.
fn simplify(cycle: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let n = cycle.len();
    let mut out: Vec<(i64, i64)> = (0..n)
        .filter(|&k| {
            let (p, c, q) = (cycle[(k + n - 1) % n], cycle[k], cycle[(k + 1) % n]);
            (c.0 - p.0) * (q.1 - c.1) - (c.1 - p.1) * (q.0 - c.0) != 0
        })
        .map(|k| cycle[k])
        .collect();
    // Start at the lowest-leftmost corner for a canonical order.
    let first = (0..out.len()).min_by_key(|&k| (out[k].1, out[k].0)).unwrap();
    out.rotate_left(first);
    out
}

/// 4-connected component of `allowed` containing `seed`, limited to the
/// box `lo..=hi`. Returns `None` if the component reaches the box edge.
pub fn component(
    seed: Cell,
    allowed: impl Fn(Cell) -> bool,
    lo: Cell,
    hi: Cell,
) -> Option<BTreeSet<Cell>> {
    let mut seen = BTreeSet::new();
    let mut stack = alloc::vec![seed];
    seen.insert(seed);
    while let Some((i, j)) = stack.pop() {
        if i <= lo.0 || j <= lo.1 || i >= hi.0 || j >= hi.1 {
            return None;
        }
        for c in [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)] {
            if !seen.contains(&c) && allowed(c) {
                seen.insert(c);
                stack.push(c);
            }
        }
    }
    Some(seen)
}
