//! End-to-end computation shared by the command line and the tests.

use anyhow::{bail, Result};
use mvss_core::complex::{Cover, FilteredComplex};
use mvss_core::cover::validate_cover;
use mvss_core::parallel::{execute_plan, message_stats, plan_tasks, MessageLedger, MessageStats, TaskPlan};
use mvss_core::persistence::Barcode;
use mvss_core::spectral::{dump_page, read_off, reconcile_completed, DoubleComplex};
use mvss_core::FieldSpec;

use crate::executor::Threaded;

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub field: FieldSpec,
    pub workers: usize,
    pub exact: bool,
    pub keep_pages: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            field: FieldSpec::gf2(),
            workers: 1,
            exact: false,
            keep_pages: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    /// Associated-graded barcode.
    pub graded: Barcode,
    /// Extension-exact barcode, when requested.
    pub exact: Option<Barcode>,
    /// Page dumps in order, when requested; the last one is the collapsed page.
    pub dumps: Vec<String>,
    pub collapse_page: usize,
    pub plan: TaskPlan,
    pub ledger: MessageLedger,
    pub stats: MessageStats,
}

/// Validates the cover, then runs the spectral sequence to collapse.
pub fn compute(x: &FilteredComplex, cover: &Cover, opts: &Options) -> Result<Outcome> {
    let report = validate_cover(x, cover);
    if !report.passed() {
        bail!(
            "cover validation failed: {} uncovered simplices, {} foreign vertices; first uncovered: {:?}",
            report.uncovered.len(),
            report.foreign_vertices.len(),
            report.uncovered.first().map(|s| s.vertices().to_vec())
        );
    }
    let dc = DoubleComplex::assemble(x, cover, &opts.field)?;
    let exec = Threaded::new(opts.workers)?;
    let plan = plan_tasks(dc.nerve(), dc.max_p().max(1));
    let ex = execute_plan(&plan, &dc, &exec, opts.keep_pages, opts.exact)?;
    let last = ex.run.last();
    let graded = read_off(last)?;
    let exact = match &ex.completed {
        Some(done) => Some(reconcile_completed(&dc, done)?),
        None => None,
    };
    let mut dumps = Vec::new();
    if opts.keep_pages {
        for (i, page) in ex.run.pages.iter().enumerate() {
            dumps.push(dump_page(&dc, page, ex.run.differentials.get(i))?);
        }
    }
    let stats = message_stats(&ex.ledger, dc.nerve());
    Ok(Outcome {
        graded,
        exact,
        dumps,
        collapse_page: last.r,
        plan,
        ledger: ex.ledger,
        stats,
    })
}
