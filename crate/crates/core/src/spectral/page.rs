use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use super::double::DoubleComplex;
use crate::algebra::{combine, present, reduce_generating_set, Basis, GradedChain, Interval};
use crate::error::{Error, Result};
use crate::parallel::Executor;
use crate::persistence::node_init;

/// Adapted generator of `E^r_{p,q}`.
///
/// `chain` lives in node `(p, q)`. `staircase` is a total chain in columns
/// `<= p` whose column-`p` part is `chain` and whose total differential
/// lies in columns `<= p - r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub chain: GradedChain,
    pub interval: Interval,
    pub staircase: GradedChain,
}

/// Basis element of `B^r_{p,q}`: `chain` is the column-`p` part of
/// `D(witness)`, `D(witness)` lies in columns `<= p`, and `witness` lies in
/// columns `<= p + r - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub chain: GradedChain,
    pub witness: GradedChain,
}

/// One node of a page: `E^r = (span(gens) + span(rels)) / span(rels)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodeData {
    pub gens: Vec<Generator>,
    pub rels: Vec<Relation>,
}

impl NodeData {
    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn intervals(&self) -> Vec<Interval> {
        let mut v: Vec<Interval> = self.gens.iter().map(|g| g.interval).collect();
        v.sort();
        v
    }

    fn rel_basis(&self) -> Result<Basis> {
        Basis::new(self.rels.iter().map(|r| r.chain.clone()).collect())
    }
}

/// All nodes `(p, q)` of one page, `1 <= p <= max_p`, `0 <= q <= max_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    pub nodes: BTreeMap<(usize, usize), NodeData>,
}

impl Page {
    pub fn node(&self, p: usize, q: usize) -> Option<&NodeData> {
        self.nodes.get(&(p, q))
    }

    /// Intervals of `E^r_{p,q}`, empty outside the box.
    pub fn intervals(&self, p: usize, q: usize) -> Vec<Interval> {
        self.node(p, q).map(NodeData::intervals).unwrap_or_default()
    }

    /// Number of free summands of `E^r_{p,q}`, plus all torsion summands.
    pub fn rank(&self, p: usize, q: usize) -> usize {
        self.node(p, q).map_or(0, |n| n.gens.len())
    }

    pub fn nonzero_nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes.iter().filter(|(_, n)| !n.is_zero()).map(|(k, _)| *k)
    }

    /// Same modules and relation bases, ignoring staircases and witnesses.
    pub fn same_modules(&self, other: &Page) -> bool {
        self.nodes.len() == other.nodes.len()
            && self.nodes.iter().zip(&other.nodes).all(|((ka, a), (kb, b))| {
                ka == kb
                    && a.gens.len() == b.gens.len()
                    && a.gens.iter().zip(&b.gens).all(|(x, y)| x.chain == y.chain && x.interval == y.interval)
                    && a.rels.iter().map(|r| &r.chain).eq(b.rels.iter().map(|r| &r.chain))
            })
    }
}

/// Page one: local persistent homology of every intersection complex.
pub fn init_page<E: Executor>(dc: &DoubleComplex, exec: &E) -> Result<Page> {
    let field = dc.field();
    let per_block = exec.map(dc.blocks().len(), |b| {
        let blk = &dc.blocks()[b];
        let p = blk.column();
        let off = dc.offset(b);
        let c = &blk.complex;
        let mut out = Vec::new();
        for q in 0..=c.dim().unwrap_or(0) {
            let st = node_init(c, p, q, field);
            let pres = present(st.z1.columns(), st.b1.columns(), field)?;
            let lo = off + c.dim_range(q).start;
            let hi = off + c.dim_range(q + 1).start;
            let sign = field.sign(p);
            let gens = pres
                .generators
                .into_iter()
                .map(|(z, interval, _)| {
                    let chain = z.map_rows(|r| lo + r, field);
                    Generator {
                        staircase: chain.clone(),
                        chain,
                        interval,
                    }
                })
                .collect::<Vec<_>>();
            let rels = pres
                .relations
                .into_iter()
                .map(|(bch, combo)| {
                    let mut y = combine(bch.degree, &combo, st.i1.columns(), field).map_rows(|r| hi + r, field);
                    y.scale(sign, field);
                    Relation {
                        chain: bch.map_rows(|r| lo + r, field),
                        witness: y,
                    }
                })
                .collect::<Vec<_>>();
            out.push((q, gens, rels));
        }
        Ok::<_, Error>((p, out))
    });
    let mut nodes: BTreeMap<(usize, usize), NodeData> = BTreeMap::new();
    for p in 1..=dc.max_p() {
        for q in 0..=dc.max_q() {
            nodes.insert((p, q), NodeData::default());
        }
    }
    for res in per_block {
        let (p, parts) = res?;
        for (q, gens, rels) in parts {
            let n = nodes.get_mut(&(p, q)).expect("node inside the box");
            n.gens.extend(gens);
            n.rels.extend(rels);
        }
    }
    for n in nodes.values_mut() {
        // Blocks occupy disjoint rows, so concatenated bases keep distinct pivots.
        n.rels.sort_by_key(|r| r.chain.degree);
    }
    Ok(Page { r: 1, nodes })
}

/// `d^r` data of one node: for each generator the column-`(p-r)` part of
/// the total differential of its staircase.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodeDifferential {
    pub target: Option<(usize, usize)>,
    pub omegas: Vec<GradedChain>,
    /// Horizontal `(sender block, receiver block)` pairs used to evaluate the omegas.
    pub channels: BTreeSet<(usize, usize)>,
}

/// All `d^r` on one page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Differentials {
    pub r: usize,
    pub nodes: BTreeMap<(usize, usize), NodeDifferential>,
}

impl Differentials {
    pub fn channels(&self) -> BTreeSet<(usize, usize)> {
        self.nodes.values().flat_map(|n| n.channels.iter().copied()).collect()
    }
}

/// Evaluates `d^r` on every node of `page`.
pub fn compute_differentials<E: Executor>(dc: &DoubleComplex, page: &Page, exec: &E) -> Result<Differentials> {
    let keys: Vec<(usize, usize)> = page.nodes.keys().copied().collect();
    let r = page.r;
    let results = exec.map(keys.len(), |k| {
        let (p, q) = keys[k];
        let node = &page.nodes[&(p, q)];
        let mut nd = NodeDifferential {
            target: (p > r).then(|| (p - r, q + r - 1)),
            ..Default::default()
        };
        let low = p.saturating_sub(r);
        for (i, g) in node.gens.iter().enumerate() {
            let dx = dc.total(&g.staircase);
            let top = dc.max_column(&dx);
            if top > low {
                return Err(Error::invariant(
                    "spectral",
                    format!("staircase of generator {i} at ({p},{q}) r={r} has differential in column {top}"),
                ));
            }
            if low >= 1 {
                for &(row, _) in g.staircase.entries() {
                    let (b, _) = dc.locate(row);
                    if dc.blocks()[b].column() == low + 1 {
                        for &f in &dc.blocks()[b].faces {
                            nd.channels.insert((b, f));
                        }
                    }
                }
            }
            nd.omegas.push(if low >= 1 { dx } else { GradedChain::zero(g.chain.degree) });
        }
        Ok(((p, q), nd))
    });
    let mut nodes = BTreeMap::new();
    for res in results {
        let (k, v) = res?;
        nodes.insert(k, v);
    }
    Ok(Differentials { r, nodes })
}

/// `d^1`, the differential induced by the horizontal maps.
pub fn compute_d1<E: Executor>(dc: &DoubleComplex, page: &Page, exec: &E) -> Result<Differentials> {
    if page.r != 1 {
        return Err(Error::invariant("spectral", format!("d1 requested on page {}", page.r)));
    }
    compute_differentials(dc, page, exec)
}

/// `d^r` for `r >= 2`.
pub fn compute_dr<E: Executor>(dc: &DoubleComplex, page: &Page, exec: &E) -> Result<Differentials> {
    if page.r < 2 {
        return Err(Error::invariant("spectral", "d^r requested on page 1"));
    }
    compute_differentials(dc, page, exec)
}

/// Passes from `E^r` to `E^{r+1}` by taking homology with respect to `d^r`.
pub fn turn_page<E: Executor>(dc: &DoubleComplex, page: &Page, diffs: &Differentials, exec: &E) -> Result<Page> {
    let keys: Vec<(usize, usize)> = page.nodes.keys().copied().collect();
    let r = page.r;
    let results = exec.map(keys.len(), |k| turn_node(dc, page, diffs, keys[k]).map(|n| (keys[k], n)));
    let mut nodes = BTreeMap::new();
    for res in results {
        let (key, n) = res?;
        nodes.insert(key, n);
    }
    Ok(Page { r: r + 1, nodes })
}

fn turn_node(dc: &DoubleComplex, page: &Page, diffs: &Differentials, (p, q): (usize, usize)) -> Result<NodeData> {
    let field = dc.field();
    let r = page.r;
    let node = &page.nodes[&(p, q)];
    let omegas = &diffs.nodes[&(p, q)].omegas;
    let empty = NodeData::default();
    let target = diffs.nodes[&(p, q)].target.and_then(|t| page.nodes.get(&t)).unwrap_or(&empty);
    // Incoming d^r comes from (p + r, q - r + 1).
    let incoming: Vec<(&GradedChain, &GradedChain)> = if q + 1 >= r {
        let s = (p + r, q + 1 - r);
        match (page.nodes.get(&s), diffs.nodes.get(&s)) {
            (Some(sn), Some(sd)) => sn
                .gens
                .iter()
                .zip(&sd.omegas)
                .filter(|(_, w)| !w.is_zero())
                .map(|(g, w)| (w, &g.staircase))
                .collect(),
            _ => Vec::new(),
        }
    } else {
        Vec::new()
    };

    let tbasis = target.rel_basis()?;
    let own = node.rel_basis()?;
    let outgoing_zero: Option<Vec<_>> = omegas
        .iter()
        .map(|w| {
            let w = dc.component(w, p.saturating_sub(r));
            tbasis.divide(&w, field).ok()
        })
        .collect();
    if let Some(coords) = outgoing_zero {
        if incoming.iter().all(|(w, _)| own.contains(&dc.component(w, p), field)) {
            let gens = node
                .gens
                .iter()
                .zip(coords)
                .map(|(g, c)| {
                    let mut st = g.staircase.clone();
                    for (j, k) in c {
                        st.add_scaled(&target.rels[j].witness, field.neg(k), field);
                    }
                    Generator {
                        staircase: st,
                        ..g.clone()
                    }
                })
                .collect();
            return Ok(NodeData {
                gens,
                rels: node.rels.clone(),
            });
        }
    }

    // Cycles of d^r: combinations of generators whose image lands in the target's B^r.
    let n = node.gens.len();
    let low = p.saturating_sub(r);
    let mut items: Vec<GradedChain> = omegas.iter().map(|w| dc.component(w, low)).collect();
    items.extend(target.rels.iter().map(|b| b.chain.clone()));
    let mut zset: Vec<(GradedChain, GradedChain)> = Vec::new();
    for (deg, combo) in crate::algebra::kernel_combos(&items, field) {
        let mut chain = GradedChain::zero(deg);
        let mut st = GradedChain::zero(deg);
        for &(i, c) in &combo {
            if i < n {
                chain.add_scaled(&node.gens[i].chain, c, field);
                st.add_scaled(&node.gens[i].staircase, c, field);
            } else {
                st.add_scaled(&target.rels[i - n].witness, c, field);
            }
        }
        zset.push((chain, st));
    }

    // B^{r+1} = B^r + image of the incoming d^r.
    let mut bitems: Vec<(GradedChain, GradedChain)> = node.rels.iter().map(|b| (b.chain.clone(), b.witness.clone())).collect();
    bitems.extend(incoming.iter().map(|(w, st)| (dc.component(w, p), (*st).clone())));
    let bchains: Vec<GradedChain> = bitems.iter().map(|b| b.0.clone()).collect();
    let bwit: Vec<GradedChain> = bitems.iter().map(|b| b.1.clone()).collect();
    let bbasis: Vec<(GradedChain, GradedChain)> = reduce_generating_set(&bchains, field)
        .into_iter()
        .map(|(c, combo)| {
            let w = combine(c.degree, &combo, &bwit, field);
            (c, w)
        })
        .collect();
    for (c, w) in &bbasis {
        zset.push((c.clone(), dc.total(w)));
    }

    let zchains: Vec<GradedChain> = zset.iter().map(|z| z.0.clone()).collect();
    let zst: Vec<GradedChain> = zset.iter().map(|z| z.1.clone()).collect();
    let bch: Vec<GradedChain> = bbasis.iter().map(|b| b.0.clone()).collect();
    let bw: Vec<GradedChain> = bbasis.iter().map(|b| b.1.clone()).collect();
    let pres = present(&zchains, &bch, field).map_err(|e| match e {
        Error::NotInSpan => Error::invariant("spectral", format!("B not contained in Z at ({p},{q}) r={}", r + 1)),
        e => e,
    })?;
    let gens = pres
        .generators
        .into_iter()
        .map(|(chain, interval, combo)| Generator {
            staircase: combine(chain.degree, &combo, &zst, field),
            chain,
            interval,
        })
        .collect();
    let rels = pres
        .relations
        .into_iter()
        .map(|(chain, combo)| Relation {
            witness: combine(chain.degree, &combo, &bw, field),
            chain,
        })
        .collect();
    Ok(NodeData { gens, rels })
}

/// Checks the staircase and witness conditions on every node.
pub fn check_page(dc: &DoubleComplex, page: &Page) -> Result<()> {
    let r = page.r;
    for (&(p, q), node) in &page.nodes {
        let fail = |what: &str| Err(Error::invariant("spectral", format!("{what} at ({p},{q}) r={r}")));
        for g in &node.gens {
            if dc.component(&g.staircase, p) != g.chain || dc.max_column(&g.staircase) > p {
                return fail("staircase does not lead with its generator");
            }
            if g.chain.entries().iter().any(|&(row, _)| dc.node_of(row) != (p, q)) {
                return fail("generator outside its node");
            }
            if dc.max_column(&dc.total(&g.staircase)) > p.saturating_sub(r) {
                return fail("staircase differential too high");
            }
        }
        for b in &node.rels {
            let dy = dc.total(&b.witness);
            if dc.component(&dy, p) != b.chain || dc.max_column(&dy) > p {
                return fail("relation witness does not bound its relation");
            }
            if dc.max_column(&b.witness) > p + r - 1 {
                return fail("relation witness too far right");
            }
        }
        // B^r ⊆ Z^r: each relation is the leading part of a total cycle D(witness).
        if node.rel_basis().is_err() {
            return fail("relation basis lost distinct pivots");
        }
    }
    Ok(())
}
