use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;

use super::{check_eta, UnionFind};
use crate::error::{Error, Result};
use crate::geometry::DiskPoint;
use crate::inner::{certified_radius, eval_log_modulus_bounded, InnerSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImageFormat {
    Ppm,
    Svg,
}

impl std::str::FromStr for ImageFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ppm" => Ok(ImageFormat::Ppm),
            "svg" => Ok(ImageFormat::Svg),
            other => Err(Error::InvalidArgument(format!("unknown image format {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageSpec {
    pub width: usize,
    pub height: usize,
    pub format: ImageFormat,
    /// Leaf tolerance for `log|u|` at pixel centers.
    pub tol: f64,
}

impl Default for ImageSpec {
    fn default() -> Self {
        ImageSpec {
            width: 512,
            height: 512,
            format: ImageFormat::Ppm,
            tol: 1e-6,
        }
    }
}

/// Pixel value outside the closed disk.
pub const OUTSIDE: u8 = u8::MAX;
/// Pixel value beyond the certified evaluation radius.
pub const UNSAMPLED: u8 = u8::MAX - 1;

/// Per-pixel nesting depth of the sublevel sets.
///
/// Pixel `(i, j)` has center `((2i + 1 - W)/W, (H - 2j - 1)/H)`. `level[p]` is
/// the index of the smallest `η` with `|u| < η` at the center (ascending
/// `etas`), `etas.len()` when none holds, or one of [`OUTSIDE`],
/// [`UNSAMPLED`]. `component[p]` numbers the 4-connected pixel components of
/// `{|u| < η}` at that level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRaster {
    pub width: usize,
    pub height: usize,
    pub etas: Vec<f64>,
    pub level: Vec<u8>,
    pub component: Vec<u32>,
}

impl LevelRaster {
    pub fn center(&self, i: usize, j: usize) -> Complex64 {
        pixel_center(i, j, self.width, self.height)
    }
}

fn pixel_center(i: usize, j: usize, w: usize, h: usize) -> Complex64 {
    Complex64::new(
        (2.0 * i as f64 + 1.0 - w as f64) / w as f64,
        (h as f64 - 2.0 * j as f64 - 1.0) / h as f64,
    )
}

pub fn render_levels(
    u: &InnerSpec,
    etas: &[f64],
    width: usize,
    height: usize,
    tol: f64,
) -> Result<LevelRaster> {
    if width == 0 || height == 0 || width > 8192 || height > 8192 {
        return Err(Error::InvalidArgument(format!("image size {width}x{height}")));
    }
    let mut etas = etas.to_vec();
    for &e in &etas {
        check_eta(e)?;
    }
    if etas.len() > 64 {
        return Err(Error::InvalidArgument("at most 64 levels".into()));
    }
    etas.sort_by(f64::total_cmp);
    etas.dedup();
    let logs: Vec<f64> = etas.iter().map(|e| e.ln()).collect();
    let limit = if u.has_infinite_leaf() {
        certified_radius(u, tol) * (1.0 - 1e-9)
    } else {
        1.0
    };
    let level: Vec<u8> = (0..width * height)
        .into_par_iter()
        .map(|p| {
            let z = pixel_center(p % width, p / width, width, height);
            if z.norm() >= 1.0 {
                return Ok(OUTSIDE);
            }
            if z.norm() > limit || etas.is_empty() {
                return Ok(if etas.is_empty() { 0 } else { UNSAMPLED });
            }
            let l = eval_log_modulus_bounded(u, DiskPoint::from_complex(z)?, tol)?.value;
            Ok(logs.iter().position(|&t| l < t).unwrap_or(etas.len()) as u8)
        })
        .collect::<Result<_>>()?;
    let mut component = vec![0u32; width * height];
    for k in 0..etas.len() {
        let inside = |p: usize| (level[p] as usize) <= k;
        let mut uf = UnionFind::new(width * height);
        for j in 0..height {
            for i in 0..width {
                let p = j * width + i;
                if !inside(p) {
                    continue;
                }
                if i + 1 < width && inside(p + 1) {
                    uf.union(p as u32, p as u32 + 1);
                }
                if j + 1 < height && inside(p + width) {
                    uf.union(p as u32, (p + width) as u32);
                }
            }
        }
        let mut ids = std::collections::HashMap::new();
        for p in 0..width * height {
            if inside(p) {
                let n = ids.len() as u32;
                let id = *ids.entry(uf.find(p as u32)).or_insert(n);
                if level[p] as usize == k {
                    component[p] = id;
                }
            }
        }
    }
    Ok(LevelRaster {
        width,
        height,
        etas,
        level,
        component,
    })
}

const FAMILIES: [[u8; 3]; 6] = [
    [33, 102, 172],
    [214, 96, 77],
    [27, 120, 55],
    [118, 42, 131],
    [191, 129, 45],
    [1, 133, 113],
];

fn pixel_rgb(r: &LevelRaster, p: usize, i: usize, j: usize) -> [u8; 3] {
    let z = r.center(i, j);
    let edge = 2.0 / r.width.min(r.height) as f64;
    match r.level[p] {
        OUTSIDE => [255, 255, 255],
        _ if z.norm() > 1.0 - edge => [40, 40, 40],
        UNSAMPLED => [200, 200, 200],
        k if k as usize >= r.etas.len() => [250, 250, 246],
        k => {
            let base = FAMILIES[r.component[p] as usize % FAMILIES.len()];
            // deeper levels darker, outer levels fade toward white
            let t = 0.75 * k as f64 / r.etas.len().max(1) as f64;
            let mix = |c: u8| (c as f64 + (255.0 - c as f64) * t).round() as u8;
            [mix(base[0]), mix(base[1]), mix(base[2])]
        }
    }
}

fn ppm(r: &LevelRaster) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", r.width, r.height).into_bytes();
    for j in 0..r.height {
        for i in 0..r.width {
            out.extend_from_slice(&pixel_rgb(r, j * r.width + i, i, j));
        }
    }
    out
}

fn svg(r: &LevelRaster) -> Vec<u8> {
    let (w, h) = (r.width, r.height);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" shape-rendering=\"crispEdges\">"
    );
    let _ = writeln!(s, "<rect width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>");
    for j in 0..h {
        let mut i = 0;
        while i < w {
            let c = pixel_rgb(r, j * w + i, i, j);
            let mut k = i + 1;
            while k < w && pixel_rgb(r, j * w + k, k, j) == c {
                k += 1;
            }
            if c != [255, 255, 255] && c != [40, 40, 40] {
                let _ = writeln!(
                    s,
                    "<rect x=\"{i}\" y=\"{j}\" width=\"{}\" height=\"1\" fill=\"#{:02x}{:02x}{:02x}\"/>",
                    k - i,
                    c[0],
                    c[1],
                    c[2]
                );
            }
            i = k;
        }
    }
    let _ = writeln!(
        s,
        "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#282828\" stroke-width=\"1\"/>",
        w as f64 / 2.0,
        h as f64 / 2.0,
        w.min(h) as f64 / 2.0 - 0.5
    );
    s.push_str("</svg>\n");
    s.into_bytes()
}

/// Image bytes of the nested sublevel sets `{|u| < η}` for `etas`, each
/// component in its own color family.
pub fn render(u: &InnerSpec, etas: &[f64], spec: &ImageSpec) -> Result<Vec<u8>> {
    let r = render_levels(u, etas, spec.width, spec.height, spec.tol)?;
    Ok(match spec.format {
        ImageFormat::Ppm => ppm(&r),
        ImageFormat::Svg => svg(&r),
    })
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_image(path: &Path, bytes: &[u8]) -> Result<()> {
    crate::report::write_atomic(path, bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::horodisk;

    #[test]
    fn atomic_raster_matches_horodisks() {
        let etas = [0.2, 0.5, 0.8];
        let r = render_levels(&InnerSpec::s(), &etas, 160, 160, 1e-9).unwrap();
        let disks: Vec<_> = etas.iter().map(|e| horodisk(*e).unwrap()).collect();
        let (mut agree, mut total) = (0usize, 0usize);
        for j in 0..160 {
            for i in 0..160 {
                let p = j * 160 + i;
                if r.level[p] == OUTSIDE {
                    continue;
                }
                let z = r.center(i, j);
                let want = disks.iter().position(|d| d.contains(z)).unwrap_or(3) as u8;
                total += 1;
                agree += (want == r.level[p]) as usize;
            }
        }
        assert!(agree as f64 >= 0.999 * total as f64, "{agree}/{total}");
    }

    #[test]
    fn empty_levels_draw_only_the_outline() {
        let bytes = render(
            &InnerSpec::s(),
            &[],
            &ImageSpec {
                width: 32,
                height: 32,
                format: ImageFormat::Ppm,
                tol: 1e-6,
            },
        )
        .unwrap();
        let body = &bytes[b"P6\n32 32\n255\n".len()..];
        assert_eq!(body.len(), 32 * 32 * 3);
        let colors: std::collections::BTreeSet<[u8; 3]> =
            body.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
        assert!(colors.iter().all(|c| [[255, 255, 255], [40, 40, 40], [250, 250, 246]].contains(c)));
    }

    #[test]
    fn squared_atomic_is_point_symmetric() {
        let u = InnerSpec::compose(InnerSpec::s(), InnerSpec::monomial(2));
        let r = render_levels(&u, &[(-2.0f64).exp(), 0.5], 96, 96, 1e-9).unwrap();
        for j in 0..96 {
            for i in 0..96 {
                assert_eq!(r.level[j * 96 + i], r.level[(95 - j) * 96 + (95 - i)]);
            }
        }
        let deepest: std::collections::BTreeSet<u32> =
            (0..96 * 96).filter(|&p| r.level[p] == 0).map(|p| r.component[p]).collect();
        assert_eq!(deepest.len(), 2);
    }
}
