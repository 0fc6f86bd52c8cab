//! Task decomposition over nerve simplices and message accounting.
//!
//! The ledger is derived from the data each page turn actually reads, so it
//! does not depend on how tasks are scheduled. A message is the first use of
//! a horizontal channel from a block to one of its codimension-one faces;
//! later reads over the same channel reuse the data already delivered.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::complex::NerveComplex;
use crate::error::Result;
use crate::spectral::{complete_staircases, compute_differentials, has_collapsed, init_page, turn_page, Differentials, DoubleComplex, Page, Run};

/// Evaluates `f(0), ..., f(n-1)` and returns the results in index order.
pub trait Executor: Sync {
    fn map<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync;
}

/// Runs every task on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn map<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync,
    {
        (0..n).map(f).collect()
    }
}

/// One task per nerve simplex, ordered lexicographically by patch list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskPlan {
    pub tasks: Vec<Vec<u32>>,
    /// Task id of each nerve simplex, indexed like the nerve complex.
    pub task_of: Vec<usize>,
    /// `stencils[r-1][t]`: tasks within `r` face or coface steps of task `t`.
    pub stencils: Vec<Vec<BTreeSet<usize>>>,
}

impl TaskPlan {
    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    /// Stencil of `task` at page `r`, saturating at the last computed page.
    pub fn stencil(&self, r: usize, task: usize) -> &BTreeSet<usize> {
        let i = r.clamp(1, self.stencils.len().max(1)) - 1;
        &self.stencils[i][task]
    }
}

pub fn plan_tasks(nerve: &NerveComplex, max_page: usize) -> TaskPlan {
    let nc = nerve.complex();
    let mut order: Vec<usize> = (0..nc.len()).collect();
    order.sort_by(|&a, &b| nc.simplex(a).vertices().cmp(nc.simplex(b).vertices()));
    let mut task_of = alloc::vec![0; nc.len()];
    for (t, &i) in order.iter().enumerate() {
        task_of[i] = t;
    }
    let tasks: Vec<Vec<u32>> = order.iter().map(|&i| nc.simplex(i).vertices().to_vec()).collect();
    let mut adj: Vec<BTreeSet<usize>> = alloc::vec![BTreeSet::new(); tasks.len()];
    for i in 0..nc.len() {
        for (_, f) in nc.simplex(i).faces() {
            let j = nc.index_of(&f).expect("nerve is closed under faces");
            adj[task_of[i]].insert(task_of[j]);
            adj[task_of[j]].insert(task_of[i]);
        }
    }
    let mut stencils = Vec::new();
    let mut cur: Vec<BTreeSet<usize>> = adj.clone();
    for _ in 0..max_page.max(1) {
        stencils.push(cur.clone());
        cur = cur
            .iter()
            .enumerate()
            .map(|(t, s)| {
                let mut n: BTreeSet<usize> = s.iter().flat_map(|&u| adj[u].iter().copied()).collect();
                n.extend(s.iter().copied());
                n.remove(&t);
                n
            })
            .collect();
    }
    TaskPlan {
        tasks,
        task_of,
        stencils,
    }
}

/// Messages keyed by `(page, sender task, receiver task)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MessageLedger {
    entries: BTreeMap<(usize, usize, usize), usize>,
    seen: BTreeSet<(usize, usize)>,
}

impl MessageLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records the channels read while evaluating one page's differentials.
    pub fn record(&mut self, plan: &TaskPlan, diffs: &Differentials) {
        for (b, f) in diffs.channels() {
            let key = (plan.task_of[b], plan.task_of[f]);
            if self.seen.insert(key) {
                *self.entries.entry((diffs.r, key.0, key.1)).or_default() += 1;
            }
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize, usize), usize)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn per_page(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for (&(r, _, _), &c) in &self.entries {
            *m.entry(r).or_default() += c;
        }
        m
    }

    /// Every receiver is a face of its sender and inside the sender's stencil.
    pub fn is_local(&self, plan: &TaskPlan) -> bool {
        self.entries.keys().all(|&(r, s, t)| {
            let (a, b) = (&plan.tasks[s], &plan.tasks[t]);
            b.len() + 1 == a.len() && b.iter().all(|v| a.contains(v)) && plan.stencil(r, s).contains(&t)
        })
    }
}

/// `Σ_{i=1}^{r} K_i 2^i` with `r` the nerve dimension.
pub fn message_bound(nerve: &NerveComplex) -> usize {
    let r = nerve.dim().unwrap_or(0);
    (1..=r).map(|i| nerve.count(i) << i).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageStats {
    pub per_page: BTreeMap<usize, usize>,
    pub total: usize,
    pub bound: usize,
    pub passed: bool,
}

pub fn message_stats(ledger: &MessageLedger, nerve: &NerveComplex) -> MessageStats {
    let total = ledger.total();
    let bound = message_bound(nerve);
    MessageStats {
        per_page: ledger.per_page(),
        total,
        bound,
        passed: total <= bound,
    }
}

/// Output of a planned execution.
#[derive(Debug, Clone)]
pub struct Execution {
    pub run: Run,
    /// The collapsed page turned until every staircase is a total cycle.
    pub completed: Option<Page>,
    pub ledger: MessageLedger,
}

/// Runs page initialisation and page turns with a barrier between pages,
/// recording messages as they are read. `complete` additionally finishes
/// every staircase, as needed by the exact readout.
pub fn execute_plan<E: Executor>(plan: &TaskPlan, dc: &DoubleComplex, exec: &E, keep_pages: bool, complete: bool) -> Result<Execution> {
    let mut ledger = MessageLedger::new();
    let mut page = init_page(dc, exec)?;
    let mut pages = Vec::new();
    let mut differentials = Vec::new();
    while !has_collapsed(&page) {
        let d = compute_differentials(dc, &page, exec)?;
        ledger.record(plan, &d);
        let next = turn_page(dc, &page, &d, exec)?;
        if keep_pages {
            pages.push(page);
        }
        differentials.push(d);
        page = next;
    }
    let completed = if complete {
        let (done, extra) = complete_staircases(dc, &page, exec)?;
        for d in &extra {
            ledger.record(plan, d);
        }
        Some(done)
    } else {
        None
    };
    pages.push(page);
    Ok(Execution {
        run: Run { pages, differentials },
        completed,
        ledger,
    })
}
