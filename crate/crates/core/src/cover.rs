//! Cover generators: thickened cube, Voronoi and geodesic-Voronoi partitions.
//!
//! Vertex `i` of a point-cloud complex is the `i`-th point. Every generator
//! first assigns each point to exactly one home cell (ties to the lowest
//! index), then thickens.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::complex::{distance, Cover, FilteredComplex, Simplex};
use crate::error::{Error, Result};

/// How to partition before thickening.
#[derive(Debug, Clone, PartialEq)]
pub enum Partition {
    Cube { origin: Vec<f64>, side: f64 },
    Voronoi { landmarks: Vec<Vec<f64>> },
    Geodesic { landmarks: Vec<u32> },
}

/// A partition together with its thickening radius. Geodesic covers ignore
/// `epsilon` and grow by one hop instead.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionSpec {
    pub variant: Partition,
    pub epsilon: f64,
}

impl PartitionSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0) {
            return Err(Error::NegativeEpsilon);
        }
        match &self.variant {
            Partition::Cube { side, .. } if !(*side > 0.0) => Err(Error::NonPositiveSide),
            Partition::Voronoi { landmarks } => {
                if landmarks.is_empty() {
                    return Err(Error::NoLandmarks);
                }
                for (i, a) in landmarks.iter().enumerate() {
                    if landmarks[..i].contains(a) {
                        return Err(Error::DuplicateLandmarks);
                    }
                }
                Ok(())
            }
            Partition::Geodesic { landmarks } => {
                if landmarks.is_empty() {
                    return Err(Error::NoLandmarks);
                }
                let set: BTreeSet<_> = landmarks.iter().collect();
                if set.len() != landmarks.len() {
                    return Err(Error::DuplicateLandmarks);
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Builds the cover. Point-based variants need `points`; the geodesic
    /// variant needs the complex.
    pub fn build(&self, points: &[Vec<f64>], x: &FilteredComplex) -> Result<Cover> {
        match &self.variant {
            Partition::Cube { origin, side } => cube_cover(points, origin, *side, self.epsilon),
            Partition::Voronoi { landmarks } => voronoi_cover(points, landmarks, self.epsilon),
            Partition::Geodesic { landmarks } => geodesic_voronoi_cover(x, landmarks),
        }
    }
}

/// Default thickening for Rips complexes: twice the longest admissible edge, so every simplex fits in a thickened home patch.
pub fn default_epsilon(step: f64, max_grade: crate::Grade) -> f64 {
    2.0 * step * max_grade as f64
}

fn cube_index(p: &[f64], origin: &[f64], side: f64) -> Vec<i64> {
    p.iter()
        .enumerate()
        .map(|(k, x)| libm::floor((x - origin.get(k).copied().unwrap_or(0.0)) / side) as i64)
        .collect()
}

fn cube_distance(p: &[f64], cell: &[i64], origin: &[f64], side: f64) -> f64 {
    let mut s = 0.0;
    for (k, x) in p.iter().enumerate() {
        let lo = origin.get(k).copied().unwrap_or(0.0) + cell[k] as f64 * side;
        let hi = lo + side;
        let d = if *x < lo {
            lo - x
        } else if *x > hi {
            x - hi
        } else {
            0.0
        };
        s += d * d;
    }
    libm::sqrt(s)
}

fn check_points(points: &[Vec<f64>]) -> Result<()> {
    let first = points.first().ok_or(Error::EmptyPointCloud)?;
    if points.iter().any(|p| p.len() != first.len()) {
        return Err(Error::RaggedPoints);
    }
    Ok(())
}

/// One patch per occupied axis-parallel cube, ordered lexicographically by
/// cube index: its points plus every point closer than `epsilon` to it.
pub fn cube_cover(points: &[Vec<f64>], origin: &[f64], side: f64, epsilon: f64) -> Result<Cover> {
    check_points(points)?;
    if !(side > 0.0) {
        return Err(Error::NonPositiveSide);
    }
    if !(epsilon >= 0.0) {
        return Err(Error::NegativeEpsilon);
    }
    let mut cells: BTreeMap<Vec<i64>, BTreeSet<u32>> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        cells.entry(cube_index(p, origin, side)).or_default().insert(i as u32);
    }
    let patches = cells
        .into_iter()
        .map(|(cell, mut home)| {
            for (i, p) in points.iter().enumerate() {
                if cube_distance(p, &cell, origin, side) < epsilon {
                    home.insert(i as u32);
                }
            }
            home
        })
        .collect();
    Ok(Cover::new(patches))
}

/// One patch per landmark. Distance to a cell is bounded below by the
/// bisector margin `(d(x, l) - d_min) / 2`, so patches only grow.
pub fn voronoi_cover(points: &[Vec<f64>], landmarks: &[Vec<f64>], epsilon: f64) -> Result<Cover> {
    check_points(points)?;
    if landmarks.is_empty() {
        return Err(Error::NoLandmarks);
    }
    if !(epsilon >= 0.0) {
        return Err(Error::NegativeEpsilon);
    }
    let mut patches = alloc::vec![BTreeSet::new(); landmarks.len()];
    for (i, p) in points.iter().enumerate() {
        let d: Vec<f64> = landmarks.iter().map(|l| distance(p, l)).collect();
        let (home, dmin) = d.iter().enumerate().fold((0, f64::INFINITY), |acc, (k, &v)| if v < acc.1 { (k, v) } else { acc });
        for (k, &dk) in d.iter().enumerate() {
            if k == home || libm::fmax(0.0, (dk - dmin) / 2.0) < epsilon {
                patches[k].insert(i as u32);
            }
        }
    }
    Ok(Cover::new(patches))
}

/// One patch per landmark vertex: hop-distance Voronoi cells of the
/// 1-skeleton, each grown by its immediate neighbours.
pub fn geodesic_voronoi_cover(x: &FilteredComplex, landmarks: &[u32]) -> Result<Cover> {
    if landmarks.is_empty() {
        return Err(Error::NoLandmarks);
    }
    let adj = x.adjacency();
    let mut dist: Vec<BTreeMap<u32, usize>> = Vec::new();
    for &l in landmarks {
        if !adj.contains_key(&l) {
            return Err(Error::UnknownLandmark(l));
        }
        let mut d = BTreeMap::new();
        d.insert(l, 0usize);
        let mut queue = VecDeque::from([l]);
        while let Some(u) = queue.pop_front() {
            let du = d[&u];
            for &w in &adj[&u] {
                if !d.contains_key(&w) {
                    d.insert(w, du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist.push(d);
    }
    let mut cells = alloc::vec![BTreeSet::new(); landmarks.len()];
    for &v in adj.keys() {
        let home = (0..landmarks.len())
            .filter_map(|k| dist[k].get(&v).map(|&d| (d, k)))
            .min()
            .ok_or(Error::Unreachable(v))?
            .1;
        cells[home].insert(v);
    }
    let patches = cells
        .into_iter()
        .map(|cell| {
            let mut grown = cell.clone();
            for v in &cell {
                grown.extend(adj[v].iter().copied());
            }
            grown
        })
        .collect();
    Ok(Cover::new(patches))
}

/// Outcome of checking that every simplex lies in some induced patch.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoverReport {
    pub uncovered: Vec<Simplex>,
    /// Patch vertices that are not vertices of the complex.
    pub foreign_vertices: Vec<u32>,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.uncovered.is_empty() && self.foreign_vertices.is_empty()
    }
}

pub fn validate_cover(x: &FilteredComplex, cover: &Cover) -> CoverReport {
    let verts: BTreeSet<u32> = x.vertices().into_iter().collect();
    let mut foreign: BTreeSet<u32> = BTreeSet::new();
    for p in cover.patches() {
        foreign.extend(p.difference(&verts));
    }
    let uncovered = x
        .simplices()
        .iter()
        .filter(|(s, _)| !cover.patches().iter().any(|p| s.vertices().iter().all(|v| p.contains(v))))
        .map(|(s, _)| s.clone())
        .collect();
    CoverReport {
        uncovered,
        foreign_vertices: foreign.into_iter().collect(),
    }
}
