//! Single-matrix persistence and per-patch initialisation of the first page.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{free_kernel, reduce_graded, Death, GradedChain, GradedMatrix, Interval, PresentedModule};
use crate::complex::FilteredComplex;
use crate::field::FieldSpec;
use crate::Grade;

/// One bar of a barcode: homology degree and half-open interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bar {
    pub dim: usize,
    pub birth: Grade,
    pub death: Death,
}

impl Bar {
    pub fn contains(&self, s: Grade) -> bool {
        self.birth <= s && self.death.after(s)
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.dim, self.birth, self.death)
    }
}

/// Multiset of bars, kept sorted by `(dim, birth, death)` so that equality
/// is multiset equality.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl Barcode {
    /// Drops null bars and sorts.
    pub fn new(bars: impl IntoIterator<Item = Bar>) -> Self {
        let mut bars: Vec<Bar> = bars.into_iter().filter(|b| b.death != Death::Finite(b.birth)).collect();
        bars.sort();
        Barcode { bars }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Number of degree-`dim` bars alive at grade `s`.
    pub fn betti(&self, dim: usize, s: Grade) -> usize {
        self.bars.iter().filter(|b| b.dim == dim && b.contains(s)).count()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.bars.iter().map(|b| b.dim).max()
    }

    /// Largest finite endpoint, 0 when there is none.
    pub fn max_grade(&self) -> Grade {
        self.bars
            .iter()
            .map(|b| b.death.finite().unwrap_or(b.birth).max(b.birth))
            .max()
            .unwrap_or(0)
    }

    pub fn restrict(&self, dim: usize) -> Vec<Interval> {
        self.bars
            .iter()
            .filter(|b| b.dim == dim)
            .map(|b| Interval {
                birth: b.birth,
                death: b.death,
            })
            .collect()
    }
}

impl fmt::Display for Barcode {
    /// One `q birth death` line per bar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bars {
            writeln!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Persistence by reducing each boundary matrix separately.
pub fn standard_persistence(x: &FilteredComplex, field: &FieldSpec) -> Barcode {
    let top = match x.dim() {
        Some(d) => d,
        None => return Barcode::default(),
    };
    let mut bars = Vec::new();
    for q in 0..=top {
        let mut killed: Vec<bool> = alloc::vec![false; x.count(q)];
        let up = reduce_graded(&x.boundary_matrix(q + 1, field), field, false);
        let qs = x.dim_range(q);
        for (col, piv) in up.pivots.iter().enumerate() {
            if let Some(row) = piv {
                killed[*row] = true;
                bars.push(Bar {
                    dim: q,
                    birth: x.grade(qs.start + row),
                    death: Death::Finite(up.reduced[col].degree),
                });
            }
        }
        let here = reduce_graded(&x.boundary_matrix(q, field), field, false);
        for (i, piv) in here.pivots.iter().enumerate() {
            if piv.is_none() && !killed[i] {
                bars.push(Bar {
                    dim: q,
                    birth: x.grade(qs.start + i),
                    death: Death::Infinite,
                });
            }
        }
    }
    Barcode::new(bars)
}

/// First-page data of one intersection complex in one chain degree.
#[derive(Debug, Clone)]
pub struct NodeState {
    pub p: usize,
    pub q: usize,
    /// Free cycle basis, over the `q`-simplices.
    pub z1: GradedMatrix,
    /// Reduced nonzero boundary columns, over the `q`-simplices.
    pub b1: GradedMatrix,
    /// Preboundaries over the `(q+1)`-simplices: `∂ i1[j] = b1[j]`.
    pub i1: GradedMatrix,
    /// `H_q` of the complex as a presented module.
    pub e: PresentedModule,
}

/// Cycles, boundaries and preboundaries of `c` in degree `q`, and the
/// resulting homology module. `p` only labels the node.
pub fn node_init(c: &FilteredComplex, p: usize, q: usize, field: &FieldSpec) -> NodeState {
    let rows: Arc<[Grade]> = c.grades_of_dim(q);
    let z1 = free_kernel(&c.boundary_matrix(q, field), field);
    let up = c.boundary_matrix(q + 1, field);
    let red = reduce_graded(&up, field, true);
    let mut b = Vec::new();
    let mut pre = Vec::new();
    for (j, col) in red.reduced.iter().enumerate() {
        if !col.is_zero() {
            b.push(col.clone());
            pre.push(GradedChain::from_entries(col.degree, red.ops[j].clone(), field));
        }
    }
    let e = PresentedModule::new(rows.clone(), z1.columns(), &b, field).expect("boundaries are cycles");
    NodeState {
        p,
        q,
        z1,
        b1: GradedMatrix::new(rows, b).expect("reduced boundaries stay sorted"),
        i1: GradedMatrix::new(up.column_degrees(), pre).expect("preboundaries stay sorted"),
        e,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bar(dim: usize, birth: Grade, death: Option<Grade>) -> Bar {
        Bar {
            dim,
            birth,
            death: death.map_or(Death::Infinite, Death::Finite),
        }
    }

    fn triangle_boundary() -> FilteredComplex {
        FilteredComplex::from_lists(&[(&[0], 0), (&[1], 0), (&[2], 0), (&[0, 1], 1), (&[1, 2], 1), (&[0, 2], 2)]).unwrap()
    }

    #[test]
    fn single_vertex() {
        let x = FilteredComplex::from_lists(&[(&[0], 0)]).unwrap();
        assert_eq!(standard_persistence(&x, &FieldSpec::gf2()).bars(), &[bar(0, 0, None)]);
    }

    #[test]
    fn triangle_boundary_bars() {
        for p in [2, 3, 5] {
            let b = standard_persistence(&triangle_boundary(), &FieldSpec::new(p).unwrap());
            assert_eq!(b.bars(), &[bar(0, 0, Some(1)), bar(0, 0, Some(1)), bar(0, 0, None), bar(1, 2, None)]);
        }
    }

    #[test]
    fn node_init_preboundaries() {
        let x = FilteredComplex::from_lists(&[
            (&[0], 0),
            (&[1], 0),
            (&[2], 0),
            (&[0, 1], 1),
            (&[1, 2], 1),
            (&[0, 2], 2),
            (&[0, 1, 2], 4),
        ])
        .unwrap();
        let f = FieldSpec::new(5).unwrap();
        for q in 0..3 {
            let n = node_init(&x, 1, q, &f);
            let d = x.boundary_matrix(q + 1, &f);
            let img = d.compose(&n.i1, &f);
            assert_eq!(img, n.b1.columns());
        }
        let n1 = node_init(&x, 1, 1, &f);
        assert_eq!(
            n1.e.intervals(),
            &[Interval {
                birth: 2,
                death: Death::Finite(4)
            }]
        );
        assert!(node_init(&x, 1, 2, &f).e.is_zero());
        assert_eq!(node_init(&x, 1, 0, &f).e.sorted_intervals().len(), 3);
    }
}
