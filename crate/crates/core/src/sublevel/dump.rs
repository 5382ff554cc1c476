use serde::{Deserialize, Serialize};

use super::{CellClass, DiskGrid};

/// Classes of one ring's cells in storage order, run-length encoded as
/// `<count><symbol>` pairs with symbols `I`, `O`, `U`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingDump {
    pub r0: f64,
    pub r1: f64,
    pub sectors: u64,
    pub cells: usize,
    pub runs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDump {
    pub level: u32,
    pub r_max: f64,
    pub depth: u32,
    pub cells: usize,
    pub rings: Vec<RingDump>,
}

pub fn dump_grid(grid: &DiskGrid, classes: &[CellClass]) -> GridDump {
    let mut rings: Vec<RingDump> = grid
        .rings()
        .iter()
        .map(|r| RingDump {
            r0: r.r0,
            r1: r.r1,
            sectors: r.sectors,
            cells: 0,
            runs: String::new(),
        })
        .collect();
    let mut run: Option<(usize, char, usize)> = None;
    let flush = |rings: &mut Vec<RingDump>, run: Option<(usize, char, usize)>| {
        if let Some((k, sym, n)) = run {
            rings[k].runs.push_str(&format!("{n}{sym}"));
        }
    };
    for (c, class) in grid.cells().iter().zip(classes) {
        let k = c.ring as usize;
        let sym = class.symbol();
        rings[k].cells += 1;
        match run {
            Some((rk, rs, n)) if rk == k && rs == sym => run = Some((rk, rs, n + 1)),
            _ => {
                flush(&mut rings, run);
                run = Some((k, sym, 1));
            }
        }
    }
    flush(&mut rings, run);
    GridDump {
        level: grid.level(),
        r_max: grid.r_max(),
        depth: grid.depth(),
        cells: grid.len(),
        rings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_cover_every_cell() {
        let grid = DiskGrid::new(1, 0.9).unwrap();
        let classes: Vec<CellClass> = (0..grid.len())
            .map(|i| if grid.geometry(i).r_out <= 0.5 { CellClass::In } else { CellClass::Out })
            .collect();
        let d = dump_grid(&grid, &classes);
        assert_eq!(d.rings.iter().map(|r| r.cells).sum::<usize>(), grid.len());
        let first = &d.rings[0];
        assert_eq!(first.runs, format!("{}I", first.cells));
        let total: usize = d
            .rings
            .iter()
            .flat_map(|r| {
                r.runs
                    .split(|c: char| c.is_ascii_alphabetic())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().unwrap())
                    .collect::<Vec<_>>()
            })
            .sum();
        assert_eq!(total, grid.len());
    }
}
