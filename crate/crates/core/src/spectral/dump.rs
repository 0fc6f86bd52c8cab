use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use super::double::DoubleComplex;
use super::page::{Differentials, Page};
use crate::algebra::{add_combo, reduce_generating_set, Basis, Combo, Death, GradedChain};
use crate::error::Result;
use crate::field::Coeff;
use crate::Grade;

/// `d^r(g_source)` has coefficient `coeff * t^shift` on target generator `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DifferentialEntry {
    pub source: usize,
    pub target: usize,
    pub coeff: Coeff,
    pub shift: Grade,
}

/// Matrix of `d^r` out of node `(p, q)` in the adapted bases of source and
/// target. Terms killed by the target's relations are omitted.
pub fn differential_matrix(dc: &DoubleComplex, page: &Page, diffs: &Differentials, node: (usize, usize)) -> Result<Vec<DifferentialEntry>> {
    let field = dc.field();
    let Some(nd) = diffs.nodes.get(&node) else { return Ok(Vec::new()) };
    let Some(t) = nd.target.and_then(|t| page.nodes.get(&t)) else { return Ok(Vec::new()) };
    let tp = node.0 - page.r;
    let ng = t.gens.len();
    let mut items: Vec<GradedChain> = t.gens.iter().map(|g| g.chain.clone()).collect();
    items.extend(t.rels.iter().map(|b| b.chain.clone()));
    let reduced = reduce_generating_set(&items, field);
    let basis = Basis::new(reduced.iter().map(|b| b.0.clone()).collect())?;
    let mut out = Vec::new();
    for (i, w) in nd.omegas.iter().enumerate() {
        let w = dc.component(w, tp);
        if w.is_zero() {
            continue;
        }
        let mut over_items = Combo::new();
        for (k, c) in basis.divide(&w, field)? {
            add_combo(&mut over_items, &reduced[k].1, c, field);
        }
        for (j, c) in over_items {
            if j >= ng {
                continue;
            }
            let iv = t.gens[j].interval;
            if let Death::Finite(d) = iv.death {
                if w.degree >= d {
                    continue;
                }
            }
            out.push(DifferentialEntry {
                source: i,
                target: j,
                coeff: c,
                shift: w.degree - iv.birth,
            });
        }
    }
    Ok(out)
}

/// Text form of a page: one `E[p,q] r=<r>: [b,d) ...` line per node in the
/// box (`0` for the zero module), then one `d[p,q->p',q'] r=<r>:` line per
/// nonzero differential listing `source->target:coeff*t^shift` terms.
pub fn dump_page(dc: &DoubleComplex, page: &Page, diffs: Option<&Differentials>) -> Result<String> {
    let r = page.r;
    let mut s = String::new();
    for (&(p, q), node) in &page.nodes {
        let _ = write!(s, "E[{p},{q}] r={r}:");
        if node.is_zero() {
            s.push_str(" 0");
        }
        for iv in node.intervals() {
            let _ = write!(s, " {iv}");
        }
        s.push('\n');
    }
    if let Some(d) = diffs {
        for (&(p, q), nd) in &d.nodes {
            let entries = differential_matrix(dc, page, d, (p, q))?;
            if entries.is_empty() {
                continue;
            }
            let (tp, tq) = nd.target.expect("nonzero differential has a target");
            let _ = write!(s, "d[{p},{q}->{tp},{tq}] r={r}:");
            for e in entries {
                let _ = write!(s, " {}->{}:{}*t^{}", e.source, e.target, e.coeff, e.shift);
            }
            s.push('\n');
        }
    }
    Ok(s)
}
