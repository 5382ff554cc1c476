use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CellClass, DiskGrid};
use crate::inner::LogModulus;

/// Disjoint-set forest with path halving and union by rank.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra as usize].cmp(&self.rank[rb as usize]) {
            std::cmp::Ordering::Less => self.parent[ra as usize] = rb,
            std::cmp::Ordering::Greater => self.parent[rb as usize] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb as usize] = ra;
                self.rank[ra as usize] += 1;
            }
        }
    }
}

/// Components of the cells selected by `mask`. Labels are numbered in order of
/// each component's lowest cell index. Returns per-cell labels and the count.
pub fn label_mask(mask: &[bool], edges: &[[u32; 2]]) -> (Vec<Option<u32>>, usize) {
    let mut uf = UnionFind::new(mask.len());
    for &[a, b] in edges {
        if mask[a as usize] && mask[b as usize] {
            uf.union(a, b);
        }
    }
    let mut ids = vec![u32::MAX; mask.len()];
    let mut labels = vec![None; mask.len()];
    let mut count = 0u32;
    for i in 0..mask.len() {
        if !mask[i] {
            continue;
        }
        let r = uf.find(i as u32) as usize;
        if ids[r] == u32::MAX {
            ids[r] = count;
            count += 1;
        }
        labels[i] = Some(ids[r]);
    }
    (labels, count as usize)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentStats {
    pub cells: usize,
    /// Smallest `log|u|` sampled at a cell center of the component.
    pub min_log_modulus: f64,
    /// Bounding annulus `r_inner <= |z| <= r_outer`.
    pub r_inner: f64,
    pub r_outer: f64,
    /// Number of known zeros lying in a cell of the component.
    pub zeros: usize,
    pub contains_zero: bool,
    pub touches_rim: bool,
}

/// Component labels over IN cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentMap {
    pub labels: Vec<Option<u32>>,
    pub components: Vec<ComponentStats>,
}

impl ComponentMap {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Labels the IN cells by edge adjacency and fills per-component statistics.
/// `zeros` are the known zeros of the function inside the grid.
pub fn label_components(
    grid: &DiskGrid,
    classes: &[CellClass],
    edges: &[[u32; 2]],
    logs: &[LogModulus],
    zeros: &[Complex64],
) -> ComponentMap {
    let mask: Vec<bool> = classes.iter().map(|c| *c == CellClass::In).collect();
    let (labels, count) = label_mask(&mask, edges);
    let mut components = vec![
        ComponentStats {
            cells: 0,
            min_log_modulus: f64::INFINITY,
            r_inner: f64::INFINITY,
            r_outer: 0.0,
            zeros: 0,
            contains_zero: false,
            touches_rim: false,
        };
        count
    ];
    for (i, l) in labels.iter().enumerate() {
        let Some(l) = l else { continue };
        let g = grid.geometry(i);
        let c = &mut components[*l as usize];
        c.cells += 1;
        c.min_log_modulus = c.min_log_modulus.min(logs[i].value);
        c.r_inner = c.r_inner.min(g.r_in);
        c.r_outer = c.r_outer.max(g.r_out);
        c.touches_rim |= grid.touches_rim(i);
    }
    for z in zeros {
        let mut hit: Vec<u32> = grid.locate(*z).iter().filter_map(|&i| labels[i]).collect();
        hit.sort_unstable();
        hit.dedup();
        for l in hit {
            let c = &mut components[l as usize];
            c.zeros += 1;
            c.contains_zero = true;
        }
    }
    ComponentMap { labels, components }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyReport {
    /// No non-IN pocket is cut off from the rim by the component.
    pub simply_connected: Vec<bool>,
    pub zero_or_rim: Vec<bool>,
}

impl TopologyReport {
    pub fn all_pass(&self) -> bool {
        self.simply_connected.iter().all(|b| *b) && self.zero_or_rim.iter().all(|b| *b)
    }
}

/// Hole detection by labeling the complement of the IN cells: a complement
/// component that never reaches the rim is a pocket, and the IN components
/// that separate it from the rim on their own are not simply connected.
pub fn topology_checks(
    grid: &DiskGrid,
    map: &ComponentMap,
    classes: &[CellClass],
    edges: &[[u32; 2]],
) -> TopologyReport {
    let n = classes.len();
    let rest: Vec<bool> = classes.iter().map(|c| *c != CellClass::In).collect();
    let (holes, count) = label_mask(&rest, edges);
    let mut reaches_rim = vec![false; count];
    for i in 0..n {
        if let Some(h) = holes[i] {
            reaches_rim[h as usize] |= grid.touches_rim(i);
        }
    }
    let mut simply = vec![true; map.len()];
    if reaches_rim.iter().any(|r| !r) {
        let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &[a, b] in edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for i in 0..n {
            if let Some(h) = holes[i] {
                if !reaches_rim[h as usize] {
                    members[h as usize].push(i);
                }
            }
        }
        for cells in members.iter().filter(|m| !m.is_empty()) {
            let mut around: Vec<u32> = cells
                .iter()
                .flat_map(|&i| adj[i].iter().filter_map(|&j| map.labels[j as usize]))
                .collect();
            around.sort_unstable();
            around.dedup();
            if around.len() == 1 {
                simply[around[0] as usize] = false;
                continue;
            }
            let seed = cells[0];
            for &c in &around {
                if !escapes(grid, &adj, &map.labels, c, seed) {
                    simply[c as usize] = false;
                }
            }
        }
    }
    let zero_or_rim = map
        .components
        .iter()
        .map(|c| c.contains_zero || c.touches_rim)
        .collect();
    TopologyReport {
        simply_connected: simply,
        zero_or_rim,
    }
}

/// Whether the rim is reachable from `seed` while avoiding component `c`.
fn escapes(grid: &DiskGrid, adj: &[Vec<u32>], labels: &[Option<u32>], c: u32, seed: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![seed];
    seen[seed] = true;
    while let Some(i) = stack.pop() {
        if grid.touches_rim(i) {
            return true;
        }
        for &j in &adj[i] {
            let j = j as usize;
            if !seen[j] && labels[j] != Some(c) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fake_logs(n: usize) -> Vec<LogModulus> {
        vec![LogModulus { value: -1.0, bound: 0.0 }; n]
    }

    #[test]
    fn all_out_is_empty() {
        let grid = DiskGrid::new(1, 0.9).unwrap();
        let classes = vec![CellClass::Out; grid.len()];
        let map = label_components(&grid, &classes, &grid.edges(), &fake_logs(grid.len()), &[]);
        assert!(map.is_empty());
        assert!(topology_checks(&grid, &map, &classes, &grid.edges()).all_pass());
    }

    #[test]
    fn annulus_fixture_is_not_simply_connected() {
        let grid = DiskGrid::new(2, 0.95).unwrap();
        let classes: Vec<CellClass> = (0..grid.len())
            .map(|i| {
                let g = grid.geometry(i);
                if g.r_in >= 0.3 && g.r_out <= 0.7 {
                    CellClass::In
                } else {
                    CellClass::Out
                }
            })
            .collect();
        let edges = grid.edges();
        let map = label_components(&grid, &classes, &edges, &fake_logs(grid.len()), &[]);
        assert_eq!(map.len(), 1);
        let topo = topology_checks(&grid, &map, &classes, &edges);
        assert_eq!(topo.simply_connected, vec![false]);
        assert_eq!(topo.zero_or_rim, vec![false]);
    }

    #[test]
    fn nested_fixture_blames_only_the_ring() {
        let grid = DiskGrid::new(2, 0.95).unwrap();
        let classes: Vec<CellClass> = (0..grid.len())
            .map(|i| {
                let g = grid.geometry(i);
                let ring = g.r_in >= 0.5 && g.r_out <= 0.8;
                let core = g.r_out <= 0.2;
                if ring || core {
                    CellClass::In
                } else {
                    CellClass::Out
                }
            })
            .collect();
        let edges = grid.edges();
        let zeros = [Complex64::new(0.0, 0.0)];
        let map = label_components(&grid, &classes, &edges, &fake_logs(grid.len()), &zeros);
        assert_eq!(map.len(), 2);
        let topo = topology_checks(&grid, &map, &classes, &edges);
        // the core contains cell 0 and is labeled first
        assert_eq!(topo.simply_connected, vec![true, false]);
        assert!(map.components[0].contains_zero);
    }

    #[test]
    fn union_find_merges() {
        let mut uf = UnionFind::new(6);
        uf.union(0, 1);
        uf.union(2, 3);
        uf.union(1, 3);
        assert_eq!(uf.find(0), uf.find(2));
        assert_ne!(uf.find(0), uf.find(4));
    }
}
