//! Filtered simplicial complexes, covers, nerves and the blowup complex.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::{GradedChain, GradedMatrix};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::Grade;

/// A simplex as a strictly increasing, nonempty vertex list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    pub fn new(vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidSimplex("empty vertex list".into()));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSimplex(format!("{vertices:?} is not strictly increasing")));
        }
        Ok(Simplex(vertices))
    }

    /// Sorts and deduplicates first.
    pub fn from_unsorted(mut vertices: Vec<u32>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        Simplex::new(vertices)
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces; face `i` omits vertex `i` and carries sign `(-1)^i`.
    pub fn faces(&self) -> impl Iterator<Item = (usize, Simplex)> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            (i, Simplex(v))
        })
    }
}

/// Simplices with integer grades, closed under faces with monotone grades.
///
/// Simplices are stored sorted by `(dimension, grade, vertices)`, so the
/// simplices of each dimension appear in filtration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredComplex {
    simplices: Vec<(Simplex, Grade)>,
    index: BTreeMap<Simplex, usize>,
    dim_start: Vec<usize>,
}

impl Default for FilteredComplex {
    fn default() -> Self {
        FilteredComplex {
            simplices: Vec::new(),
            index: BTreeMap::new(),
            dim_start: alloc::vec![0],
        }
    }
}

impl FilteredComplex {
    /// Validates face closure, grade monotonicity and uniqueness.
    pub fn new(simplices: Vec<(Simplex, Grade)>) -> Result<Self> {
        let mut grades: BTreeMap<Simplex, Grade> = BTreeMap::new();
        for (s, g) in &simplices {
            if grades.insert(s.clone(), *g).is_some() {
                return Err(Error::DuplicateSimplex(s.0.clone()));
            }
        }
        for (s, g) in &simplices {
            for (_, face) in s.faces() {
                match grades.get(&face) {
                    None => {
                        return Err(Error::MissingFace {
                            simplex: s.0.clone(),
                            face: face.0,
                        })
                    }
                    Some(&fg) if fg > *g => {
                        return Err(Error::NonMonotone {
                            simplex: s.0.clone(),
                            face: face.0,
                            grade: *g,
                            face_grade: fg,
                        })
                    }
                    _ => {}
                }
            }
        }
        Ok(Self::from_valid(simplices))
    }

    /// Convenience constructor from raw vertex lists.
    pub fn from_lists(simplices: &[(&[u32], Grade)]) -> Result<Self> {
        let v = simplices
            .iter()
            .map(|(s, g)| Ok((Simplex::from_unsorted(s.to_vec())?, *g)))
            .collect::<Result<Vec<_>>>()?;
        FilteredComplex::new(v)
    }

    fn from_valid(mut simplices: Vec<(Simplex, Grade)>) -> Self {
        simplices.sort_by(|a, b| (a.0.dim(), a.1, &a.0).cmp(&(b.0.dim(), b.1, &b.0)));
        let index = simplices.iter().enumerate().map(|(i, (s, _))| (s.clone(), i)).collect();
        let top = simplices.last().map_or(0, |s| s.0.dim() + 1);
        let mut dim_start = alloc::vec![0; top + 1];
        for d in 0..=top {
            dim_start[d] = simplices.partition_point(|s| s.0.dim() < d);
        }
        FilteredComplex {
            simplices,
            index,
            dim_start,
        }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Top dimension, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.last().map(|s| s.0.dim())
    }

    pub fn simplices(&self) -> &[(Simplex, Grade)] {
        &self.simplices
    }

    pub fn simplex(&self, i: usize) -> &Simplex {
        &self.simplices[i].0
    }

    pub fn grade(&self, i: usize) -> Grade {
        self.simplices[i].1
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn contains(&self, vertices: &[u32]) -> bool {
        self.index.contains_key(&Simplex(vertices.to_vec()))
    }

    /// Global index range of the `q`-simplices.
    pub fn dim_range(&self, q: usize) -> core::ops::Range<usize> {
        if q + 1 >= self.dim_start.len() {
            return self.simplices.len()..self.simplices.len();
        }
        self.dim_start[q]..self.dim_start[q + 1]
    }

    pub fn count(&self, q: usize) -> usize {
        self.dim_range(q).len()
    }

    pub fn vertices(&self) -> Vec<u32> {
        self.dim_range(0).map(|i| self.simplices[i].0 .0[0]).collect()
    }

    /// Grades of the `q`-simplices in storage order.
    pub fn grades_of_dim(&self, q: usize) -> Arc<[Grade]> {
        self.dim_range(q).map(|i| self.simplices[i].1).collect()
    }

    /// Largest grade present, 0 for the empty complex.
    pub fn max_grade(&self) -> Grade {
        self.simplices.iter().map(|s| s.1).max().unwrap_or(0)
    }

    /// Boundary operator `C_q -> C_{q-1}`. Rows and columns are indexed by
    /// position within their dimension; column degrees are the grades.
    pub fn boundary_matrix(&self, q: usize, field: &FieldSpec) -> GradedMatrix {
        let rows: Arc<[Grade]> = if q == 0 { Arc::from([]) } else { self.grades_of_dim(q - 1) };
        let lo = if q == 0 { 0 } else { self.dim_range(q - 1).start };
        let cols = self
            .dim_range(q)
            .map(|i| {
                let s = &self.simplices[i].0;
                let entries = s
                    .faces()
                    .map(|(k, face)| (self.index[&face] - lo, field.sign(k)))
                    .collect();
                GradedChain::from_entries(self.simplices[i].1, entries, field)
            })
            .collect();
        GradedMatrix::new(rows, cols).expect("boundary of a valid complex is homogeneous")
    }

    /// Full subcomplex induced on a vertex set, with the map from its
    /// simplex indices to indices in `self`.
    pub fn induced(&self, vertices: &BTreeSet<u32>) -> (FilteredComplex, Vec<usize>) {
        let kept: Vec<usize> = (0..self.len())
            .filter(|&i| self.simplices[i].0 .0.iter().all(|v| vertices.contains(v)))
            .collect();
        let sub = Self::from_valid(kept.iter().map(|&i| self.simplices[i].clone()).collect());
        let embed = sub.simplices.iter().map(|(s, _)| self.index[s]).collect();
        (sub, embed)
    }

    /// Re-grades every simplex; used to build level-set style complexes.
    pub fn map_grades(&self, mut f: impl FnMut(&Simplex, Grade) -> Grade) -> Result<Self> {
        FilteredComplex::new(self.simplices.iter().map(|(s, g)| (s.clone(), f(s, *g))).collect())
    }

    /// 1-skeleton adjacency lists keyed by vertex id.
    pub fn adjacency(&self) -> BTreeMap<u32, Vec<u32>> {
        let mut adj: BTreeMap<u32, Vec<u32>> = self.vertices().into_iter().map(|v| (v, Vec::new())).collect();
        for i in self.dim_range(1) {
            let v = &self.simplices[i].0 .0;
            adj.get_mut(&v[0]).unwrap().push(v[1]);
            adj.get_mut(&v[1]).unwrap().push(v[0]);
        }
        for l in adj.values_mut() {
            l.sort_unstable();
        }
        adj
    }
}

/// Vietoris-Rips complex with grade `ceil(diam / step)`, truncated at
/// `max_grade` and `max_dim`.
pub fn build_vietoris_rips(points: &[Vec<f64>], step: f64, max_grade: Grade, max_dim: usize) -> Result<FilteredComplex> {
    if points.is_empty() {
        return Err(Error::EmptyPointCloud);
    }
    if !(step > 0.0) {
        return Err(Error::NonPositiveStep);
    }
    let d = points[0].len();
    if points.iter().any(|p| p.len() != d) {
        return Err(Error::RaggedPoints);
    }
    let n = points.len();
    let mut edge_grade = alloc::vec![alloc::vec![None::<Grade>; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let g = libm::ceil(distance(&points[i], &points[j]) / step);
            if g <= max_grade as f64 {
                edge_grade[i][j] = Some(g as Grade);
                edge_grade[j][i] = Some(g as Grade);
            }
        }
    }
    let mut out: Vec<(Simplex, Grade)> = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    for v in 0..n {
        stack.push(v as u32);
        expand_clique(&edge_grade, &mut stack, 0, max_dim, &mut out);
        stack.pop();
    }
    Ok(FilteredComplex::from_valid(out))
}

fn expand_clique(edges: &[Vec<Option<Grade>>], clique: &mut Vec<u32>, grade: Grade, max_dim: usize, out: &mut Vec<(Simplex, Grade)>) {
    out.push((Simplex(clique.clone()), grade));
    if clique.len() > max_dim {
        return;
    }
    let last = *clique.last().unwrap() as usize;
    for w in last + 1..edges.len() {
        let mut g = grade;
        let mut ok = true;
        for &u in clique.iter() {
            match edges[u as usize][w] {
                Some(e) => g = g.max(e),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            clique.push(w as u32);
            expand_clique(edges, clique, g, max_dim, out);
            clique.pop();
        }
    }
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

/// A family of vertex subsets; patch `i` induces the full subcomplex on `patches[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cover {
    patches: Vec<BTreeSet<u32>>,
}

impl Cover {
    pub fn new(patches: Vec<BTreeSet<u32>>) -> Self {
        Cover { patches }
    }

    pub fn from_lists(patches: &[&[u32]]) -> Self {
        Cover {
            patches: patches.iter().map(|p| p.iter().copied().collect()).collect(),
        }
    }

    pub fn patches(&self) -> &[BTreeSet<u32>] {
        &self.patches
    }

    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    /// Vertex set `∩_{j∈J} U_j`.
    pub fn intersection(&self, patches: &[usize]) -> Result<BTreeSet<u32>> {
        let (&first, rest) = patches.split_first().ok_or(Error::EmptyPatchSet)?;
        let mut acc = self.patches.get(first).ok_or(Error::UnknownPatch(first))?.clone();
        for &j in rest {
            let p = self.patches.get(j).ok_or(Error::UnknownPatch(j))?;
            acc.retain(|v| p.contains(v));
        }
        Ok(acc)
    }

    /// Patch sizes, intersection counts and total overlap.
    pub fn stats(&self, x: &FilteredComplex) -> CoverStats {
        let mut sizes = Vec::new();
        for p in &self.patches {
            sizes.push(x.induced(p).0.len());
        }
        let mut membership: BTreeMap<u32, usize> = BTreeMap::new();
        for p in &self.patches {
            for v in p {
                *membership.entry(*v).or_default() += 1;
            }
        }
        let overlap = membership.values().filter(|&&c| c > 1).count();
        CoverStats {
            patch_simplices: sizes,
            shared_vertices: overlap,
        }
    }
}

/// Per-patch simplex counts and the number of vertices in more than one patch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverStats {
    pub patch_simplices: Vec<usize>,
    pub shared_vertices: usize,
}

/// Full subcomplex on `∩_{j∈J} U_j` with inherited grades. May be empty.
pub fn patch_intersection(x: &FilteredComplex, cover: &Cover, patches: &[usize]) -> Result<FilteredComplex> {
    Ok(x.induced(&cover.intersection(patches)?).0)
}

/// Nerve of a cover: vertices are patch indices, a set `J` is a simplex iff
/// the intersection of its patches contains a vertex of `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NerveComplex {
    complex: FilteredComplex,
    /// Vertex set of the intersection for each nerve simplex, by complex index.
    intersections: Vec<BTreeSet<u32>>,
    counts: Vec<usize>,
}

impl NerveComplex {
    pub fn complex(&self) -> &FilteredComplex {
        &self.complex
    }

    /// `K_i`, the number of `i`-simplices.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, i: usize) -> usize {
        self.counts.get(i).copied().unwrap_or(0)
    }

    pub fn dim(&self) -> Option<usize> {
        self.complex.dim()
    }

    pub fn intersection(&self, simplex: usize) -> &BTreeSet<u32> {
        &self.intersections[simplex]
    }

    /// Patch index lists of all nerve simplices in complex order.
    pub fn simplices(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.complex.simplices().iter().map(|s| s.0.vertices())
    }
}

/// Nerve with every simplex at grade 0.
pub fn nerve(x: &FilteredComplex, cover: &Cover) -> NerveComplex {
    build_nerve(x, cover, |_| 0)
}

/// Nerve where `J` enters at the first grade its intersection is nonempty.
/// Matches `X` as a persistence module when every intersection is
/// persistently acyclic.
pub fn persistent_nerve(x: &FilteredComplex, cover: &Cover) -> NerveComplex {
    let vgrade: BTreeMap<u32, Grade> = x.dim_range(0).map(|i| (x.simplex(i).vertices()[0], x.grade(i))).collect();
    build_nerve(x, cover, |verts| verts.iter().map(|v| vgrade[v]).min().unwrap_or(0))
}

fn build_nerve(x: &FilteredComplex, cover: &Cover, grade: impl Fn(&BTreeSet<u32>) -> Grade) -> NerveComplex {
    let xv: BTreeSet<u32> = x.vertices().into_iter().collect();
    let mut found: Vec<(Simplex, Grade, BTreeSet<u32>)> = Vec::new();
    let mut stack: Vec<u32> = Vec::new();
    fn rec(
        cover: &Cover,
        start: usize,
        current: &BTreeSet<u32>,
        stack: &mut Vec<u32>,
        found: &mut Vec<(Simplex, Grade, BTreeSet<u32>)>,
        grade: &dyn Fn(&BTreeSet<u32>) -> Grade,
    ) {
        for j in start..cover.len() {
            let inter: BTreeSet<u32> = current.intersection(&cover.patches[j]).copied().collect();
            if inter.is_empty() {
                continue;
            }
            stack.push(j as u32);
            found.push((Simplex(stack.clone()), grade(&inter), inter.clone()));
            rec(cover, j + 1, &inter, stack, found, grade);
            stack.pop();
        }
    }
    rec(cover, 0, &xv, &mut stack, &mut found, &grade);
    let by_simplex: BTreeMap<Simplex, BTreeSet<u32>> = found.iter().map(|f| (f.0.clone(), f.2.clone())).collect();
    let complex = FilteredComplex::from_valid(found.into_iter().map(|f| (f.0, f.1)).collect());
    let intersections = complex.simplices().iter().map(|(s, _)| by_simplex[s].clone()).collect();
    let top = complex.dim().map_or(0, |d| d + 1);
    let counts = (0..top).map(|i| complex.count(i)).collect();
    NerveComplex {
        complex,
        intersections,
        counts,
    }
}

/// Blowup complex `∪_J (∩_{j∈J} U_j) × Δ^J`, with each product cell
/// triangulated by the staircase triangulation. Vertex `(v, j)` gets id
/// `v * |cover| + j`; a simplex is a chain of such pairs increasing in both
/// coordinates whose `v`'s span a simplex lying in every listed patch.
pub fn blowup_complex(x: &FilteredComplex, cover: &Cover) -> FilteredComplex {
    let np = cover.len() as u32;
    let verts = x.vertices();
    let mut out: Vec<(Simplex, Grade)> = Vec::new();
    let mut chain: Vec<(u32, u32)> = Vec::new();
    for &v in &verts {
        for j in 0..np {
            if cover.patches[j as usize].contains(&v) {
                chain.push((v, j));
                extend_chain(x, cover, &verts, &mut chain, &mut out);
                chain.pop();
            }
        }
    }
    let _ = np;
    FilteredComplex::from_valid(out)
}

fn extend_chain(x: &FilteredComplex, cover: &Cover, verts: &[u32], chain: &mut Vec<(u32, u32)>, out: &mut Vec<(Simplex, Grade)>) {
    let np = cover.len() as u32;
    let mut vs: Vec<u32> = chain.iter().map(|c| c.0).collect();
    vs.dedup();
    let idx = x.index_of(&Simplex(vs.clone())).expect("chain vertices form a simplex");
    out.push((Simplex(chain.iter().map(|&(v, j)| v * np + j).collect()), x.grade(idx)));
    let &(lv, lj) = chain.last().unwrap();
    for &v in verts.iter().filter(|&&v| v >= lv) {
        let mut nv = vs.clone();
        if v != lv {
            nv.push(v);
            if !x.contains(&nv) {
                continue;
            }
        }
        for j in lj..np {
            if v == lv && j == lj {
                continue;
            }
            let patch = &cover.patches[j as usize];
            if !nv.iter().all(|u| patch.contains(u)) {
                continue;
            }
            if !chain.iter().all(|&(_, pj)| nv.iter().all(|u| cover.patches[pj as usize].contains(u))) {
                continue;
            }
            chain.push((v, j));
            extend_chain(x, cover, verts, chain, out);
            chain.pop();
        }
    }
}
