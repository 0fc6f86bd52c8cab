use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::chain::{combine, write_with_shifts, Combo, GradedChain};
use crate::error::{Error, Result};
use crate::field::{Coeff, FieldSpec};
use crate::Grade;

/// Homogeneous columns sorted by non-decreasing degree over rows of known degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMatrix {
    row_degrees: Arc<[Grade]>,
    columns: Vec<GradedChain>,
}

impl GradedMatrix {
    /// Validates sortedness and homogeneity (every row degree at most the column degree).
    pub fn new(row_degrees: Arc<[Grade]>, columns: Vec<GradedChain>) -> Result<Self> {
        if columns.windows(2).any(|w| w[0].degree > w[1].degree) {
            return Err(Error::UnsortedColumns);
        }
        for (j, col) in columns.iter().enumerate() {
            for &(r, _) in col.entries() {
                let rd = *row_degrees.get(r).ok_or_else(|| {
                    Error::invariant("algebra", alloc::format!("row {r} out of range in column {j}"))
                })?;
                if rd > col.degree {
                    return Err(Error::NonHomogeneous {
                        column: j,
                        row: r,
                        row_degree: rd,
                        degree: col.degree,
                    });
                }
            }
        }
        Ok(GradedMatrix {
            row_degrees,
            columns,
        })
    }

    /// Sorts columns stably by degree first. Returns the matrix and, for each
    /// new column position, the index of the input column it came from.
    pub fn from_unsorted(row_degrees: Arc<[Grade]>, columns: Vec<GradedChain>) -> Result<(Self, Vec<usize>)> {
        let mut order: Vec<usize> = (0..columns.len()).collect();
        order.sort_by_key(|&i| columns[i].degree);
        let mut slots: Vec<Option<GradedChain>> = columns.into_iter().map(Some).collect();
        let sorted = order.iter().map(|&i| slots[i].take().unwrap()).collect();
        Ok((GradedMatrix::new(row_degrees, sorted)?, order))
    }

    pub fn empty(row_degrees: Arc<[Grade]>) -> Self {
        GradedMatrix {
            row_degrees,
            columns: Vec::new(),
        }
    }

    pub fn row_degrees(&self) -> &Arc<[Grade]> {
        &self.row_degrees
    }

    pub fn columns(&self) -> &[GradedChain] {
        &self.columns
    }

    pub fn into_columns(self) -> Vec<GradedChain> {
        self.columns
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn nrows(&self) -> usize {
        self.row_degrees.len()
    }

    /// Column degrees, which are the row degrees of the kernel's ambient module.
    pub fn column_degrees(&self) -> Arc<[Grade]> {
        self.columns.iter().map(|c| c.degree).collect()
    }

    /// `self * other`, where `other`'s rows index `self`'s columns.
    pub fn compose(&self, other: &GradedMatrix, field: &FieldSpec) -> Vec<GradedChain> {
        other
            .columns
            .iter()
            .map(|c| combine(c.degree, c.entries(), &self.columns, field))
            .collect()
    }

    /// One column per line: `deg=<d> : row:coeff*t^shift ...`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for col in &self.columns {
            write_with_shifts(&mut s, col, &self.row_degrees).unwrap();
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for GradedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// Result of left-to-right graded column reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// Reduced columns, in the input order.
    pub reduced: Vec<GradedChain>,
    /// Pivot row of each reduced column, `None` for zero columns.
    pub pivots: Vec<Option<usize>>,
    /// Column `j` of the reduced matrix equals `sum_i ops[j][i] * input[i]`,
    /// with `ops[j]` containing `(j, 1)`. Empty when operations were not tracked.
    pub ops: Vec<Combo>,
}

impl Reduction {
    /// Replays the operation log on the original columns.
    pub fn replay(&self, original: &[GradedChain], field: &FieldSpec) -> Vec<GradedChain> {
        self.ops
            .iter()
            .zip(original)
            .map(|(op, col)| combine(col.degree, op, original, field))
            .collect()
    }
}

/// Left-to-right reduction choosing the lowest pivot. Each column is only
/// reduced by columns to its left, whose degrees never exceed its own.
pub fn reduce_graded(m: &GradedMatrix, field: &FieldSpec, track_ops: bool) -> Reduction {
    reduce_sorted(m.columns.clone(), field, track_ops)
}

fn reduce_sorted(mut cols: Vec<GradedChain>, field: &FieldSpec, track_ops: bool) -> Reduction {
    let n = cols.len();
    let mut pivots: Vec<Option<usize>> = alloc::vec![None; n];
    let mut ops: Vec<Combo> = Vec::new();
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for j in 0..n {
        debug_assert!(j == 0 || cols[j - 1].degree <= cols[j].degree);
        let mut op: Vec<(usize, Coeff)> = if track_ops { alloc::vec![(j, 1)] } else { Vec::new() };
        loop {
            let Some((row, c)) = cols[j].lowest() else { break };
            let Some(&i) = owner.get(&row) else {
                owner.insert(row, j);
                pivots[j] = Some(row);
                break;
            };
            let pc = cols[i].coeff(row);
            let k = field.neg(field.mul(c, field.inv(pc)));
            let (left, right) = cols.split_at_mut(j);
            right[0].add_scaled(&left[i], k, field);
            if track_ops {
                add_combo(&mut op, &ops[i], k, field);
            }
        }
        if track_ops {
            ops.push(op);
        }
    }
    Reduction {
        reduced: cols,
        pivots,
        ops,
    }
}

pub(crate) fn add_combo(acc: &mut Combo, other: &[(usize, Coeff)], k: Coeff, field: &FieldSpec) {
    if k == 0 {
        return;
    }
    let mut out = Vec::with_capacity(acc.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < acc.len() || j < other.len() {
        if j == other.len() || (i < acc.len() && acc[i].0 < other[j].0) {
            out.push(acc[i]);
            i += 1;
        } else if i == acc.len() || other[j].0 < acc[i].0 {
            out.push((other[j].0, field.mul(k, other[j].1)));
            j += 1;
        } else {
            let v = field.add(acc[i].1, field.mul(k, other[j].1));
            if v != 0 {
                out.push((acc[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    *acc = out;
}

fn sorted_order(items: &[GradedChain]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by_key(|&i| items[i].degree);
    order
}

fn remap_combo(combo: &[(usize, Coeff)], order: &[usize]) -> Combo {
    let mut out: Combo = combo.iter().map(|&(i, c)| (order[i], c)).collect();
    out.sort_by_key(|e| e.0);
    out
}

/// Reduces a generating set of a free graded submodule to a basis with
/// distinct pivots. Returns the basis, sorted by degree, with each element
/// expressed as a combination of the input items.
pub fn reduce_generating_set(items: &[GradedChain], field: &FieldSpec) -> Vec<(GradedChain, Combo)> {
    let order = sorted_order(items);
    let cols = order.iter().map(|&i| items[i].clone()).collect();
    let red = reduce_sorted(cols, field, true);
    red.reduced
        .into_iter()
        .zip(red.ops)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, op)| (c, remap_combo(&op, &order)))
        .collect()
}

/// Basis of the graded kernel of the map sending basis vector `i` to
/// `items[i]`: each element is a degree together with a combination of items.
pub(crate) fn kernel_combos(items: &[GradedChain], field: &FieldSpec) -> Vec<(Grade, Combo)> {
    let order = sorted_order(items);
    let cols = order.iter().map(|&i| items[i].clone()).collect();
    let red = reduce_sorted(cols, field, true);
    red.reduced
        .iter()
        .zip(red.ops.iter())
        .filter(|(c, _)| c.is_zero())
        .map(|(c, op)| (c.degree, remap_combo(op, &order)))
        .collect()
}

/// Free kernel of a graded matrix, as columns over the matrix's column space.
pub fn free_kernel(m: &GradedMatrix, field: &FieldSpec) -> GradedMatrix {
    let red = reduce_graded(m, field, true);
    let cols = red
        .reduced
        .iter()
        .zip(red.ops)
        .filter(|(c, _)| c.is_zero())
        .map(|(c, op)| GradedChain::from_entries(c.degree, op, field))
        .collect();
    GradedMatrix {
        row_degrees: m.column_degrees(),
        columns: cols,
    }
}

/// Basis of `span(a) ∩ span(b)`, each element with its combination over `a`.
pub fn intersect(a: &[GradedChain], b: &[GradedChain], field: &FieldSpec) -> Vec<(GradedChain, Combo)> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut items: Vec<GradedChain> = a.to_vec();
    items.extend(b.iter().cloned());
    let gens: Vec<(GradedChain, Combo)> = kernel_combos(&items, field)
        .into_iter()
        .map(|(deg, combo)| {
            let on_a: Combo = combo.into_iter().filter(|e| e.0 < a.len()).collect();
            (combine(deg, &on_a, a, field), on_a)
        })
        .collect();
    let chains: Vec<GradedChain> = gens.iter().map(|g| g.0.clone()).collect();
    reduce_generating_set(&chains, field)
        .into_iter()
        .map(|(c, combo)| {
            let mut over_a = Combo::new();
            for (i, k) in combo {
                add_combo(&mut over_a, &gens[i].1, k, field);
            }
            (c, over_a)
        })
        .collect()
}

/// A basis with distinct pivot rows, supporting exact division.
#[derive(Debug, Clone, Default)]
pub struct Basis {
    elems: Vec<GradedChain>,
    owner: BTreeMap<usize, usize>,
}

impl Basis {
    /// Fails if two elements share a pivot or an element is zero.
    pub fn new(elems: Vec<GradedChain>) -> Result<Self> {
        let mut owner = BTreeMap::new();
        for (i, e) in elems.iter().enumerate() {
            let (row, _) = e
                .lowest()
                .ok_or_else(|| Error::invariant("algebra", "zero element in basis"))?;
            if owner.insert(row, i).is_some() {
                return Err(Error::invariant("algebra", "basis elements share a pivot"));
            }
        }
        Ok(Basis { elems, owner })
    }

    pub fn elems(&self) -> &[GradedChain] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Coordinates of `x` in the basis; `x = sum c_i t^(deg x - deg b_i) b_i`.
    pub fn divide(&self, x: &GradedChain, field: &FieldSpec) -> Result<Combo> {
        let mut rem = x.clone();
        let mut coords: Vec<(usize, Coeff)> = Vec::new();
        while let Some((row, c)) = rem.lowest() {
            let i = *self.owner.get(&row).ok_or(Error::NotInSpan)?;
            let b = &self.elems[i];
            if b.degree > x.degree {
                return Err(Error::NotInSpan);
            }
            let k = field.mul(c, field.inv(b.coeff(row)));
            rem.add_scaled(b, field.neg(k), field);
            coords.push((i, k));
        }
        let mut out = Combo::new();
        coords.sort_by_key(|e| e.0);
        for (i, k) in coords {
            add_combo(&mut out, &[(i, k)], 1, field);
        }
        Ok(out)
    }

    pub fn contains(&self, x: &GradedChain, field: &FieldSpec) -> bool {
        self.divide(x, field).is_ok()
    }
}
