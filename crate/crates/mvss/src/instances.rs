//! Generators for test and demonstration instances.

use std::collections::{BTreeMap, BTreeSet};

use mvss_core::complex::{build_vietoris_rips, Cover, FilteredComplex, Simplex};
use mvss_core::cover::{cube_cover, validate_cover};
use mvss_core::Grade;
use rand::Rng;

/// A complex with vertex coordinates (possibly empty) and a cover.
#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub complex: FilteredComplex,
    pub points: Vec<Vec<f64>>,
    pub cover: Cover,
}

/// Lower-star complex of a list of top simplices: every face gets the
/// largest vertex grade.
pub fn lower_star(tops: &[Vec<u32>], vertex_grade: impl Fn(u32) -> Grade) -> FilteredComplex {
    let mut all: BTreeSet<Vec<u32>> = BTreeSet::new();
    for t in tops {
        let mut t = t.clone();
        t.sort_unstable();
        let k = t.len();
        for mask in 1u32..(1 << k) {
            all.insert((0..k).filter(|i| mask >> i & 1 == 1).map(|i| t[i]).collect());
        }
    }
    let simplices = all
        .into_iter()
        .map(|s| {
            let g = s.iter().map(|&v| vertex_grade(v)).max().unwrap_or(0);
            (Simplex::new(s).expect("sorted and distinct"), g)
        })
        .collect();
    FilteredComplex::new(simplices).expect("lower-star grading is monotone")
}

/// Octahedron refined `rounds` times by midpoint subdivision, projected to
/// the unit sphere. Returns vertex coordinates and triangles.
pub fn octahedral_sphere(rounds: usize) -> (Vec<[f64; 3]>, Vec<[u32; 3]>) {
    let mut pts: Vec<[f64; 3]> = vec![
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let mut tris: Vec<[u32; 3]> = Vec::new();
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                tris.push([x, y, z]);
            }
        }
    }
    for _ in 0..rounds {
        let mut mid: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        let mut next = Vec::with_capacity(tris.len() * 4);
        let mut midpoint = |a: u32, b: u32, pts: &mut Vec<[f64; 3]>| -> u32 {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                let (p, q) = (pts[a as usize], pts[b as usize]);
                let m = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0, (p[2] + q[2]) / 2.0];
                let n = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
                pts.push([m[0] / n, m[1] / n, m[2] / n]);
                (pts.len() - 1) as u32
            })
        };
        for [a, b, c] in tris {
            let ab = midpoint(a, b, &mut pts);
            let bc = midpoint(b, c, &mut pts);
            let ca = midpoint(c, a, &mut pts);
            next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        tris = next;
    }
    (pts, tris)
}

/// Cover of the sphere by the eight coordinate octants, thickened by `epsilon`.
pub fn octant_cover(points: &[Vec<f64>], epsilon: f64) -> Cover {
    cube_cover(points, &[-2.0, -2.0, -2.0], 2.0, epsilon).expect("valid octant parameters")
}

/// Sphere at grade 0 except for a disc of radius `radius` around
/// `(1,1,1)/√3`, whose vertices enter at grade `m`; covered by octants.
pub fn hotspot_sphere(rounds: usize, radius: f64, m: Grade, epsilon: f64) -> Instance {
    let (pts, tris) = octahedral_sphere(rounds);
    let c = 1.0 / 3f64.sqrt();
    let hot: Vec<bool> = pts
        .iter()
        .map(|p| ((p[0] - c).powi(2) + (p[1] - c).powi(2) + (p[2] - c).powi(2)).sqrt() < radius)
        .collect();
    let tops: Vec<Vec<u32>> = tris.iter().map(|t| t.to_vec()).collect();
    let complex = lower_star(&tops, |v| if hot[v as usize] { m } else { 0 });
    let points: Vec<Vec<f64>> = pts.iter().map(|p| p.to_vec()).collect();
    let cover = octant_cover(&points, epsilon);
    Instance {
        name: format!("hotspot-sphere-r{rounds}"),
        complex,
        points,
        cover,
    }
}

/// The sphere golden instance: three subdivision rounds, hotspot grade `m`.
pub fn golden_sphere(m: Grade) -> Instance {
    hotspot_sphere(3, 0.3, m, 0.25)
}

/// Cycle on `n` vertices with the given vertex grades; edge `{i, i+1}`
/// gets the larger of its endpoint grades raised to `edge_floor[i]`.
pub fn cycle(vertex_grades: &[Grade], edge_floor: &[Grade]) -> FilteredComplex {
    let n = vertex_grades.len() as u32;
    let mut s: Vec<(Simplex, Grade)> = (0..n).map(|v| (Simplex::new(vec![v]).unwrap(), vertex_grades[v as usize])).collect();
    for i in 0..n {
        let j = (i + 1) % n;
        let g = vertex_grades[i as usize].max(vertex_grades[j as usize]).max(edge_floor.get(i as usize).copied().unwrap_or(0));
        s.push((Simplex::from_unsorted(vec![i, j]).unwrap(), g));
    }
    FilteredComplex::new(s).expect("cycle grades are monotone")
}

/// Cyclic arcs `[start, start + len]` (inclusive, mod `n`).
pub fn arc_cover(n: usize, arcs: &[(usize, usize)]) -> Cover {
    Cover::new(
        arcs.iter()
            .map(|&(start, len)| (0..=len).map(|k| ((start + k) % n) as u32).collect())
            .collect(),
    )
}

/// `k` arcs of a cycle on `n` vertices, consecutive arcs sharing `overlap` vertices.
pub fn even_arcs(n: usize, k: usize, overlap: usize) -> Cover {
    let arcs: Vec<(usize, usize)> = (0..k).map(|i| (i * n / k, (i + 1) * n / k - i * n / k + overlap - 1)).collect();
    arc_cover(n, &arcs)
}

/// Triangulated grid `rows x cols`; periodic directions wrap around.
/// Vertex `(i, j)` has id `i * cols + j`.
pub fn grid(rows: usize, cols: usize, wrap_rows: bool, wrap_cols: bool, grade: impl Fn(usize, usize) -> Grade) -> FilteredComplex {
    let id = |i: usize, j: usize| (i % rows * cols + j % cols) as u32;
    let ri = if wrap_rows { rows } else { rows - 1 };
    let cj = if wrap_cols { cols } else { cols - 1 };
    let mut tops = Vec::new();
    for i in 0..ri {
        for j in 0..cj {
            let (a, b, c, d) = (id(i, j), id(i, j + 1), id(i + 1, j), id(i + 1, j + 1));
            tops.push(vec![a, b, d]);
            tops.push(vec![a, c, d]);
        }
    }
    lower_star(&tops, |v| grade(v as usize / cols, v as usize % cols))
}

/// Patches `rows(I) x cols(J)` for every pair of row and column ranges.
/// Ranges are inclusive and taken mod the grid size.
pub fn block_cover(rows: usize, cols: usize, row_ranges: &[(usize, usize)], col_ranges: &[(usize, usize)]) -> Cover {
    let mut patches = Vec::new();
    for &(r0, rl) in row_ranges {
        for &(c0, cl) in col_ranges {
            let mut p = BTreeSet::new();
            for a in 0..=rl {
                for b in 0..=cl {
                    p.insert((((r0 + a) % rows) * cols + (c0 + b) % cols) as u32);
                }
            }
            patches.push(p);
        }
    }
    Cover::new(patches)
}

/// Splits `0..n` into `k` cyclic ranges overlapping by one.
pub fn cyclic_ranges(n: usize, k: usize) -> Vec<(usize, usize)> {
    (0..k).map(|i| (i * n / k, (i + 1) * n / k - i * n / k)).collect()
}

/// A V-shaped profile around a cycle: `k` plateaus of height `peaks[s]`
/// and `plateau` vertices, the stretch after plateau `s` dipping to
/// `valleys[s]` over `dip` vertices. Returns vertex grades and the start of
/// each plateau.
pub fn v_profile(peaks: &[Grade], valleys: &[Grade], plateau: usize, dip: usize) -> (Vec<Grade>, Vec<usize>) {
    let k = peaks.len();
    let mut g = Vec::new();
    let mut starts = Vec::new();
    for s in 0..k {
        starts.push(g.len());
        g.extend(std::iter::repeat_n(peaks[s], plateau));
        let (a, b, v) = (peaks[s], peaks[(s + 1) % k], valleys[s].min(peaks[s]).min(peaks[(s + 1) % k]));
        let down = dip / 2;
        let up = dip - down;
        for t in 1..=down {
            g.push(a - (a - v) * t as Grade / down as Grade);
        }
        for t in 1..=up {
            let val = v + (b - v) * (t - 1) as Grade / up as Grade;
            g.push(val);
        }
    }
    (g, starts)
}

/// Persistently acyclic cyclic cover: arc `s` runs from plateau `s`
/// through the dip to plateau `s + 1`.
pub fn v_cycle(peaks: &[Grade], valleys: &[Grade], plateau: usize, dip: usize) -> Instance {
    let (g, starts) = v_profile(peaks, valleys, plateau, dip);
    let n = g.len();
    let complex = cycle(&g, &[]);
    let arcs: Vec<(usize, usize)> = starts.iter().map(|&s| (s, plateau + dip + plateau - 1)).collect();
    Instance {
        name: format!("v-cycle-{}", peaks.len()),
        complex,
        points: Vec::new(),
        cover: arc_cover(n, &arcs),
    }
}

/// Annulus `rows x n` graded by `i + profile(j)` and covered by angular sectors
/// aligned with the profile's plateaus.
pub fn v_annulus(rows: usize, peaks: &[Grade], valleys: &[Grade], plateau: usize, dip: usize) -> Instance {
    let (g, starts) = v_profile(peaks, valleys, plateau, dip);
    let n = g.len();
    let complex = grid(rows, n, false, true, |i, j| i as Grade + g[j]);
    let ranges: Vec<(usize, usize)> = starts.iter().map(|&s| (s, plateau + dip + plateau - 1)).collect();
    Instance {
        name: format!("v-annulus-{rows}x{n}"),
        complex,
        points: Vec::new(),
        cover: block_cover(rows, n, &[(0, rows - 1)], &ranges),
    }
}

/// Random point cloud with a thickened cube cover of 2 to 6 patches whose
/// Rips complex has at most `max_simplices` simplices.
pub fn random_rips_instance<R: Rng>(rng: &mut R, max_simplices: usize) -> Instance {
    loop {
        let d = rng.gen_range(2..=3);
        let n = rng.gen_range(5..=12);
        let points: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
        let max_grade = rng.gen_range(2..=6);
        let step = rng.gen_range(0.05..0.12);
        let Ok(complex) = build_vietoris_rips(&points, step, max_grade, 3) else { continue };
        if complex.len() > max_simplices || complex.len() < 8 {
            continue;
        }
        let side = rng.gen_range(0.3..0.7);
        let origin: Vec<f64> = (0..d).map(|_| -rng.gen_range(0.0..side)).collect();
        let epsilon = step * max_grade as f64 * rng.gen_range(1.01..2.0);
        let cover = cube_cover(&points, &origin, side, epsilon).expect("positive side");
        if !(2..=6).contains(&cover.len()) || !validate_cover(&complex, &cover).passed() {
            continue;
        }
        return Instance {
            name: format!("rips-{n}pts-{d}d"),
            complex,
            points,
            cover,
        };
    }
}
