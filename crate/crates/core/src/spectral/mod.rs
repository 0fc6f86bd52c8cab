//! The Mayer-Vietoris spectral sequence of a cover.
//!
//! Column `p` of the double complex holds the chains of all `p`-fold
//! intersections, and homology degree is `n = p + q - 1`. Page `r` stores
//! at every node an adapted basis of `E^r = Z^r / B^r`, where each
//! generator carries a staircase in the total complex and each relation a
//! witness. `d^r` has bidegree `(-r, r - 1)`.

mod double;
mod dump;
mod page;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

pub use double::{Block, DoubleComplex};
pub use dump::{differential_matrix, dump_page, DifferentialEntry};
pub use page::{
    check_page, compute_d1, compute_differentials, compute_dr, init_page, turn_page, Differentials, Generator, NodeData,
    NodeDifferential, Page, Relation,
};

use crate::algebra::{present, reduce_graded, GradedChain};
use crate::error::{Error, Result};
use crate::parallel::Executor;
use crate::persistence::{Bar, Barcode};

/// True when no `d^{r'}` with `r' >= r` can connect two nonzero nodes, so
/// every later page equals this one.
pub fn has_collapsed(page: &Page) -> bool {
    let nonzero: Vec<(usize, usize)> = page.nonzero_nodes().collect();
    let r = page.r;
    !nonzero.iter().any(|&(p, q)| {
        nonzero
            .iter()
            .any(|&(tp, tq)| tp < p && p - tp >= r && tq + 1 == q + (p - tp))
    })
}

/// Associated-graded barcode: the union of all `E^r_{p,q}` intervals placed
/// in degree `p + q - 1`.
pub fn read_off(page: &Page) -> Result<Barcode> {
    if !has_collapsed(page) {
        return Err(Error::NotCollapsed(page.r));
    }
    let mut bars = Vec::new();
    for (&(p, q), node) in &page.nodes {
        for g in &node.gens {
            bars.push(Bar {
                dim: p + q - 1,
                birth: g.interval.birth,
                death: g.interval.death,
            });
        }
    }
    Ok(Barcode::new(bars))
}

/// Every page computed until collapse.
#[derive(Debug, Clone)]
pub struct Run {
    pub pages: Vec<Page>,
    pub differentials: Vec<Differentials>,
}

impl Run {
    pub fn last(&self) -> &Page {
        self.pages.last().expect("a run has at least one page")
    }

    /// Index of the collapsed page.
    pub fn collapse_page(&self) -> usize {
        self.last().r
    }
}

/// Initialises page one and turns pages until collapse. With `keep_all`
/// unset only the final page is retained.
pub fn run_to_collapse<E: Executor>(dc: &DoubleComplex, exec: &E, keep_all: bool) -> Result<Run> {
    let mut page = init_page(dc, exec)?;
    let mut pages = Vec::new();
    let mut differentials = Vec::new();
    while !has_collapsed(&page) {
        let d = compute_differentials(dc, &page, exec)?;
        let next = turn_page(dc, &page, &d, exec)?;
        if keep_all {
            pages.push(page);
        }
        differentials.push(d);
        page = next;
    }
    pages.push(page);
    Ok(Run { pages, differentials })
}

/// Turns a collapsed page until every staircase is a total cycle. Returns
/// the completed page and the differentials evaluated on the way.
pub fn complete_staircases<E: Executor>(dc: &DoubleComplex, page: &Page, exec: &E) -> Result<(Page, Vec<Differentials>)> {
    if !has_collapsed(page) {
        return Err(Error::NotCollapsed(page.r));
    }
    let mut cur = page.clone();
    let mut diffs = Vec::new();
    while cur.r < dc.max_p() {
        let d = compute_differentials(dc, &cur, exec)?;
        let next = turn_page(dc, &cur, &d, exec)?;
        if !next.same_modules(&cur) {
            return Err(Error::invariant("spectral", "collapsed page changed when turned"));
        }
        diffs.push(d);
        cur = next;
    }
    Ok((cur, diffs))
}

/// Exact barcode of `H_*(X)`: each `E^∞` generator is completed to a total
/// cycle, pushed to `C_*(X)` through column 1, and the resulting cycles are
/// presented modulo the boundaries of `X`.
pub fn global_reconcile<E: Executor>(dc: &DoubleComplex, page: &Page, exec: &E) -> Result<Barcode> {
    let (done, _) = complete_staircases(dc, page, exec)?;
    reconcile_completed(dc, &done)
}

/// The reconciliation step of [`global_reconcile`] on a page whose
/// staircases are already total cycles.
pub fn reconcile_completed(dc: &DoubleComplex, done: &Page) -> Result<Barcode> {
    let field = dc.field();
    let x = dc.complex();
    let mut cycles: BTreeMap<usize, Vec<GradedChain>> = BTreeMap::new();
    for (&(p, q), node) in &done.nodes {
        for g in &node.gens {
            if !dc.total(&g.staircase).is_zero() {
                return Err(Error::invariant("spectral", "staircase completion failed"));
            }
            let n = p + q - 1;
            cycles.entry(n).or_default().push(dc.augment(&g.staircase, n));
        }
    }
    let mut bars = Vec::new();
    for (n, zs) in cycles {
        let up = reduce_graded(&x.boundary_matrix(n + 1, field), field, false);
        let bnd: Vec<GradedChain> = up.reduced.into_iter().filter(|c| !c.is_zero()).collect();
        let mut gens = zs;
        gens.extend(bnd.iter().cloned());
        let pres = present(&gens, &bnd, field)?;
        for (_, iv, _) in pres.generators {
            bars.push(Bar {
                dim: n,
                birth: iv.birth,
                death: iv.death,
            });
        }
    }
    Ok(Barcode::new(bars))
}

/// Number of bars of degree `n` alive at grade `s` in the associated graded.
pub fn page_betti(page: &Page, n: usize, s: crate::Grade) -> usize {
    page.nodes
        .iter()
        .filter(|(&(p, q), _)| p + q - 1 == n)
        .map(|(_, node)| node.gens.iter().filter(|g| g.interval.contains(s)).count())
        .sum()
}

