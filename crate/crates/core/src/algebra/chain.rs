use alloc::vec::Vec;
use core::fmt;

use crate::field::{Coeff, FieldSpec};
use crate::Grade;

/// A k-linear combination of indexed items, sorted by index with no zeros.
pub type Combo = Vec<(usize, Coeff)>;

/// A homogeneous element of a free graded `k[t]`-module.
///
/// `entries` holds `(row, coefficient)` pairs sorted by row. The entry on row
/// `i` stands for `coefficient * t^(degree - rowDegree(i))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedChain {
    pub degree: Grade,
    entries: Vec<(usize, Coeff)>,
}

impl GradedChain {
    pub fn zero(degree: Grade) -> Self {
        GradedChain {
            degree,
            entries: Vec::new(),
        }
    }

    /// Builds a chain from unsorted entries, merging repeated rows.
    pub fn from_entries(degree: Grade, mut entries: Vec<(usize, Coeff)>, field: &FieldSpec) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut out: Vec<(usize, Coeff)> = Vec::with_capacity(entries.len());
        for (r, c) in entries {
            let c = c % field.characteristic();
            match out.last_mut() {
                Some(last) if last.0 == r => last.1 = field.add(last.1, c),
                _ => out.push((r, c)),
            }
        }
        out.retain(|e| e.1 != 0);
        GradedChain {
            degree,
            entries: out,
        }
    }

    /// Single basis vector `e_row` placed in `degree`.
    pub fn unit(degree: Grade, row: usize) -> Self {
        GradedChain {
            degree,
            entries: alloc::vec![(row, 1)],
        }
    }

    #[inline]
    pub fn entries(&self) -> &[(usize, Coeff)] {
        &self.entries
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Lowest nonzero entry (largest row index).
    #[inline]
    pub fn lowest(&self) -> Option<(usize, Coeff)> {
        self.entries.last().copied()
    }

    pub fn coeff(&self, row: usize) -> Coeff {
        match self.entries.binary_search_by_key(&row, |e| e.0) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    /// Exponent of `t` on `row` given its degree.
    pub fn shift(&self, row_degree: Grade) -> Option<Grade> {
        self.degree.checked_sub(row_degree)
    }

    /// `self += c * other`. The caller guarantees `other.degree <= self.degree`.
    pub fn add_scaled(&mut self, other: &GradedChain, c: Coeff, field: &FieldSpec) {
        debug_assert!(other.degree <= self.degree);
        if c == 0 || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, field.mul(c, b[j].1)));
                j += 1;
            } else {
                let v = field.add(a[i].1, field.mul(c, b[j].1));
                if v != 0 {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        self.entries = out;
    }

    pub fn scale(&mut self, c: Coeff, field: &FieldSpec) {
        if c == 0 {
            self.entries.clear();
            return;
        }
        for e in &mut self.entries {
            e.1 = field.mul(e.1, c);
        }
    }

    /// The same element multiplied by `t^(degree - self.degree)`.
    pub fn at_degree(&self, degree: Grade) -> Self {
        debug_assert!(degree >= self.degree);
        GradedChain {
            degree,
            entries: self.entries.clone(),
        }
    }

    /// Keeps only rows accepted by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(usize) -> bool) -> Self {
        GradedChain {
            degree: self.degree,
            entries: self.entries.iter().copied().filter(|e| keep(e.0)).collect(),
        }
    }

    /// Re-indexes rows; `map` must be injective on the support.
    pub fn map_rows(&self, mut map: impl FnMut(usize) -> usize, field: &FieldSpec) -> Self {
        let entries = self.entries.iter().map(|&(r, c)| (map(r), c)).collect();
        GradedChain::from_entries(self.degree, entries, field)
    }
}

/// `sum c_i * items[i]` placed in `degree`.
pub fn combine(degree: Grade, combo: &[(usize, Coeff)], items: &[GradedChain], field: &FieldSpec) -> GradedChain {
    let mut out = GradedChain::zero(degree);
    for &(i, c) in combo {
        out.add_scaled(&items[i], c, field);
    }
    out
}

impl fmt::Display for GradedChain {
    /// Debug dump format: `deg=<d> : row:coeff*t^shift ...`. Without the row
    /// degrees at hand the shift is printed relative to degree zero rows.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg={} :", self.degree)?;
        for (r, c) in &self.entries {
            write!(f, " {r}:{c}")?;
        }
        Ok(())
    }
}

/// Writes `deg=<d> : row:coeff*t^shift ...` with shifts resolved against `row_degrees`.
pub(crate) fn write_with_shifts(
    out: &mut impl fmt::Write,
    chain: &GradedChain,
    row_degrees: &[Grade],
) -> fmt::Result {
    write!(out, "deg={} :", chain.degree)?;
    for &(r, c) in chain.entries() {
        let shift = chain.degree.saturating_sub(row_degrees[r]);
        write!(out, " {r}:{c}*t^{shift}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_scaled_cancels() {
        let f = FieldSpec::new(3).unwrap();
        let mut a = GradedChain::from_entries(2, alloc::vec![(0, 1), (4, 2)], &f);
        let b = GradedChain::from_entries(1, alloc::vec![(0, 2), (4, 1), (5, 1)], &f);
        a.add_scaled(&b, 1, &f);
        assert_eq!(a.entries(), &[(5, 1)]);
        assert_eq!(a.degree, 2);
    }

    #[test]
    fn from_entries_merges_and_drops_zeros() {
        let f = FieldSpec::gf2();
        let a = GradedChain::from_entries(0, alloc::vec![(3, 1), (1, 1), (3, 1)], &f);
        assert_eq!(a.entries(), &[(1, 1)]);
    }
}
