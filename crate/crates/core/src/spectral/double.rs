use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::GradedChain;
use crate::complex::{nerve, Cover, FilteredComplex, NerveComplex};
use crate::cover::validate_cover;
use crate::error::{Error, Result};
use crate::field::{Coeff, FieldSpec};
use crate::Grade;

/// The intersection complex of one nerve simplex `J`, placed in column `|J|`.
#[derive(Debug, Clone)]
pub struct Block {
    pub patches: Vec<u32>,
    pub complex: FilteredComplex,
    /// Index in `X` of each simplex of `complex`; strictly increasing.
    pub embed: Vec<usize>,
    /// Block of `J \ j_i` for each position `i`; empty in column 1.
    pub faces: Vec<usize>,
}

impl Block {
    pub fn column(&self) -> usize {
        self.patches.len()
    }
}

/// Mayer-Vietoris double complex of a covered filtered complex.
///
/// Total-complex chains are [`GradedChain`]s over one global index space:
/// row `offset(b) + i` is simplex `i` of block `b`. The vertical
/// differential on column `p` is `(-1)^p ∂`; the horizontal one sends
/// `(J, σ)` to `Σ_i (-1)^i (J \ j_i, σ)`.
#[derive(Debug, Clone)]
pub struct DoubleComplex {
    x: FilteredComplex,
    cover: Cover,
    nerve: NerveComplex,
    field: FieldSpec,
    blocks: Vec<Block>,
    offsets: Vec<usize>,
    degrees: Arc<[Grade]>,
}

impl DoubleComplex {
    /// Fails with `InvalidCover` when some simplex of `X` lies in no patch.
    pub fn assemble(x: &FilteredComplex, cover: &Cover, field: &FieldSpec) -> Result<Self> {
        let report = validate_cover(x, cover);
        if !report.passed() {
            return Err(Error::InvalidCover(report.uncovered.len() + report.foreign_vertices.len()));
        }
        let nerve = nerve(x, cover);
        let nc = nerve.complex();
        let mut blocks = Vec::with_capacity(nc.len());
        for i in 0..nc.len() {
            let patches = nc.simplex(i).vertices().to_vec();
            let (complex, embed) = x.induced(nerve.intersection(i));
            let faces = nc
                .simplex(i)
                .faces()
                .map(|(_, f)| nc.index_of(&f).expect("nerve is closed under faces"))
                .collect();
            blocks.push(Block {
                patches,
                complex,
                embed,
                faces,
            });
        }
        let mut offsets = Vec::with_capacity(blocks.len() + 1);
        let mut degrees = Vec::new();
        offsets.push(0);
        for b in &blocks {
            degrees.extend(b.embed.iter().map(|&s| x.grade(s)));
            offsets.push(degrees.len());
        }
        Ok(DoubleComplex {
            x: x.clone(),
            cover: cover.clone(),
            nerve,
            field: *field,
            blocks,
            offsets,
            degrees: degrees.into(),
        })
    }

    pub fn complex(&self) -> &FilteredComplex {
        &self.x
    }

    pub fn cover(&self) -> &Cover {
        &self.cover
    }

    pub fn nerve(&self) -> &NerveComplex {
        &self.nerve
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Row degrees of the total complex.
    pub fn degrees(&self) -> &Arc<[Grade]> {
        &self.degrees
    }

    pub fn offset(&self, block: usize) -> usize {
        self.offsets[block]
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Largest column index `p`.
    pub fn max_p(&self) -> usize {
        self.blocks.iter().map(Block::column).max().unwrap_or(0)
    }

    /// Largest simplex dimension.
    pub fn max_q(&self) -> usize {
        self.x.dim().unwrap_or(0)
    }

    /// `(block, local simplex index)` of a global row.
    pub fn locate(&self, row: usize) -> (usize, usize) {
        let b = self.offsets.partition_point(|&o| o <= row) - 1;
        (b, row - self.offsets[b])
    }

    /// Node `(p, q)` of a global row.
    pub fn node_of(&self, row: usize) -> (usize, usize) {
        let (b, l) = self.locate(row);
        (self.blocks[b].column(), self.blocks[b].complex.simplex(l).dim())
    }

    pub fn column_of(&self, row: usize) -> usize {
        let (b, _) = self.locate(row);
        self.blocks[b].column()
    }

    /// Blocks of column `p`, in nerve order.
    pub fn blocks_in_column(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.blocks.len()).filter(move |&b| self.blocks[b].column() == p)
    }

    /// Global rows of node `(p, q)`, ascending.
    pub fn node_rows(&self, p: usize, q: usize) -> Vec<usize> {
        let mut rows = Vec::new();
        for b in self.blocks_in_column(p) {
            let r = self.blocks[b].complex.dim_range(q);
            rows.extend(r.map(|l| self.offsets[b] + l));
        }
        rows
    }

    /// Vertical differential of one basis row.
    pub fn d0_row(&self, row: usize, out: &mut Vec<(usize, Coeff)>) {
        let (b, l) = self.locate(row);
        let blk = &self.blocks[b];
        let s = blk.complex.simplex(l);
        let col_sign = self.field.sign(blk.column());
        for (i, face) in s.faces() {
            let fl = blk.complex.index_of(&face).expect("closed under faces");
            out.push((self.offsets[b] + fl, self.field.mul(col_sign, self.field.sign(i))));
        }
    }

    /// Horizontal differential of one basis row.
    pub fn d1_row(&self, row: usize, out: &mut Vec<(usize, Coeff)>) {
        let (b, l) = self.locate(row);
        let blk = &self.blocks[b];
        let xs = blk.embed[l];
        for (i, &fb) in blk.faces.iter().enumerate() {
            let fl = self.blocks[fb].embed.binary_search(&xs).expect("intersections shrink along faces");
            out.push((self.offsets[fb] + fl, self.field.sign(i)));
        }
    }

    fn apply(&self, c: &GradedChain, vertical: bool, horizontal: bool) -> GradedChain {
        let mut out = Vec::new();
        let mut tmp = Vec::new();
        for &(r, k) in c.entries() {
            tmp.clear();
            if vertical {
                self.d0_row(r, &mut tmp);
            }
            if horizontal {
                self.d1_row(r, &mut tmp);
            }
            out.extend(tmp.iter().map(|&(t, v)| (t, self.field.mul(k, v))));
        }
        GradedChain::from_entries(c.degree, out, &self.field)
    }

    pub fn d0(&self, c: &GradedChain) -> GradedChain {
        self.apply(c, true, false)
    }

    pub fn d1(&self, c: &GradedChain) -> GradedChain {
        self.apply(c, false, true)
    }

    /// Total differential `d0 + d1`.
    pub fn total(&self, c: &GradedChain) -> GradedChain {
        self.apply(c, true, true)
    }

    /// Component of a chain in column `p`.
    pub fn component(&self, c: &GradedChain, p: usize) -> GradedChain {
        c.restrict(|r| self.column_of(r) == p)
    }

    /// Largest column touched by a chain, 0 for the zero chain.
    pub fn max_column(&self, c: &GradedChain) -> usize {
        c.entries().iter().map(|&(r, _)| self.column_of(r)).max().unwrap_or(0)
    }

    /// Sums the column-1 part into `C_*(X)`. Rows of the result are indices
    /// of `n`-simplices of `X` within their dimension.
    pub fn augment(&self, c: &GradedChain, n: usize) -> GradedChain {
        let start = self.x.dim_range(n).start;
        let mut out = Vec::new();
        for &(r, k) in c.entries() {
            let (b, l) = self.locate(r);
            let blk = &self.blocks[b];
            if blk.column() == 1 && blk.complex.simplex(l).dim() == n {
                out.push((blk.embed[l] - start, k));
            }
        }
        GradedChain::from_entries(c.degree, out, &self.field)
    }

    /// Checks `d0 d0 = 0`, `d1 d1 = 0` and `d0 d1 + d1 d0 = 0` on every basis row.
    pub fn check_identities(&self) -> Result<()> {
        for row in 0..self.len() {
            let e = GradedChain::unit(self.degrees[row], row);
            let (v, h) = (self.d0(&e), self.d1(&e));
            if !self.d0(&v).is_zero() {
                return Err(Error::invariant("spectral", format!("d0 d0 != 0 on row {row}")));
            }
            if !self.d1(&h).is_zero() {
                return Err(Error::invariant("spectral", format!("d1 d1 != 0 on row {row}")));
            }
            let mut anti = self.d0(&h);
            anti.add_scaled(&self.d1(&v), 1, &self.field);
            if !anti.is_zero() {
                return Err(Error::invariant("spectral", format!("d0 d1 + d1 d0 != 0 on row {row}")));
            }
        }
        Ok(())
    }
}
