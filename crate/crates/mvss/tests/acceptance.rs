//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line.

mod common;

use std::time::Instant;

use common::*;
use mvss::executor::Threaded;
use mvss::instances::{golden_sphere, hotspot_sphere, random_rips_instance, v_cycle};
use mvss::pipeline::{compute, Options};
use mvss_core::algebra::{reduce_graded, Death, GradedChain, GradedMorphism, Interval, PresentedModule};
use mvss_core::complex::{blowup_complex, nerve, persistent_nerve, Cover, FilteredComplex};
use mvss_core::parallel::{execute_plan, message_bound, plan_tasks};
use mvss_core::persistence::{standard_persistence, Bar, Barcode};
use mvss_core::spectral::{
    check_page, compute_differentials, global_reconcile, has_collapsed, page_betti, run_to_collapse, turn_page, DoubleComplex, Page,
};
use mvss_core::parallel::Serial;
use mvss_core::{FieldSpec, Grade};
use rand::Rng;

fn iv(b: Grade, d: Option<Grade>) -> Interval {
    Interval {
        birth: b,
        death: d.map_or(Death::Infinite, Death::Finite),
    }
}

fn bar(dim: usize, b: Grade, d: Option<Grade>) -> Bar {
    Bar {
        dim,
        birth: b,
        death: d.map_or(Death::Infinite, Death::Finite),
    }
}

#[test]
fn criterion_1_golden_sphere() {
    let start = Instant::now();
    let inst = golden_sphere(5);
    let f = FieldSpec::gf2();
    let dc = DoubleComplex::assemble(&inst.complex, &inst.cover, &f).unwrap();
    let run = run_to_collapse(&dc, &Serial, true).unwrap();
    let e1 = &run.pages[0];
    let row0: Vec<usize> = (1..=4).map(|p| e1.rank(p, 0)).collect();
    let free = (1..=4).all(|p| e1.intervals(p, 0).iter().all(|i| *i == iv(0, None)));
    let a = row0 == [8, 24, 24, 6] && free && e1.intervals(1, 1) == [iv(0, Some(5))];
    let last = run.last();
    let mut others_zero = true;
    for (&(p, q), n) in &last.nodes {
        if q <= 1 && !matches!((p, q), (1, 0) | (3, 0)) {
            others_zero &= n.is_zero();
        }
    }
    let b = last.r == 3
        && last.intervals(1, 0) == [iv(0, None)]
        && last.intervals(3, 0) == [iv(5, None)]
        && others_zero
        && !has_collapsed(&run.pages[1]);
    let expected = Barcode::new([bar(0, 0, None), bar(2, 5, None)]);
    let oracle = standard_persistence(&inst.complex, &f);
    let exact = global_reconcile(&dc, last, &Serial).unwrap();
    let graded = mvss_core::spectral::read_off(last).unwrap();
    let c = oracle == expected && exact == expected && graded == expected;
    let elapsed = start.elapsed();
    let ok = a && b && c && elapsed.as_secs_f64() < 30.0;
    println!(
        "criterion 1: {} (E1 row0 {:?}, E1[1,1] {:?}, collapse r={}, barcode {:?}, {:.2?})",
        verdict(ok),
        row0,
        e1.intervals(1, 1),
        last.r,
        exact.bars(),
        elapsed
    );
    assert!(a, "E1 ranks");
    assert!(b, "collapse page and E3");
    assert!(c, "barcode");
    assert!(ok, "runtime");
}

fn pointwise_equal(a: &Barcode, b: &Barcode) -> bool {
    let top = a.max_grade().max(b.max_grade()) + 1;
    let dims = a.max_dim().max(b.max_dim()).unwrap_or(0);
    (0..=dims).all(|n| (0..=top).all(|s| a.betti(n, s) == b.betti(n, s)))
}

#[test]
fn criterion_2_oracle_equivalence() {
    let start = Instant::now();
    let mut r = rng(2024);
    let (mut total, mut betti_ok, mut exact_ok, mut deep) = (0, 0, 0, 0);
    for i in 0..120 {
        let f = if i % 2 == 0 { FieldSpec::gf2() } else { FieldSpec::new(5).unwrap() };
        let inst = random_rips_instance(&mut r, 200);
        assert!(inst.complex.len() <= 200 && inst.complex.dim().unwrap() <= 3);
        assert!((2..=6).contains(&inst.cover.len()));
        let oracle = standard_persistence(&inst.complex, &f);
        let dc = DoubleComplex::assemble(&inst.complex, &inst.cover, &f).unwrap();
        let run = run_to_collapse(&dc, &Serial, false).unwrap();
        let last = run.last();
        if last.r > 2 {
            deep += 1;
        }
        let top = oracle.max_grade() + 1;
        let dims = dc.max_q() + dc.max_p();
        let pw = (0..=dims).all(|n| (0..=top).all(|s| page_betti(last, n, s) == oracle.betti(n, s)));
        let graded = mvss_core::spectral::read_off(last).unwrap();
        let exact = global_reconcile(&dc, last, &Serial).unwrap();
        total += 1;
        betti_ok += (pw && pointwise_equal(&graded, &oracle)) as usize;
        exact_ok += (exact == oracle) as usize;
    }
    // Structured instances with nontrivial higher differentials.
    for i in 0..24 {
        let f = if i % 2 == 0 { FieldSpec::gf2() } else { FieldSpec::new(5).unwrap() };
        let inst = match i % 3 {
            0 => hotspot_sphere(2, r.gen_range(0.2..0.6), r.gen_range(1..8), 0.45),
            1 => hotspot_sphere(3, r.gen_range(0.15..0.5), r.gen_range(1..8), [0.25, 0.35][i % 2]),
            _ => {
                let k = r.gen_range(3..=5);
                let peaks: Vec<Grade> = (0..k).map(|_| r.gen_range(2..7)).collect();
                let valleys: Vec<Grade> = (0..k).map(|_| r.gen_range(0..2)).collect();
                v_cycle(&peaks, &valleys, r.gen_range(1..3), r.gen_range(1..3))
            }
        };
        let oracle = standard_persistence(&inst.complex, &f);
        let dc = DoubleComplex::assemble(&inst.complex, &inst.cover, &f).unwrap();
        let last = run_to_collapse(&dc, &Serial, false).unwrap().pages.pop().unwrap();
        deep += (last.r > 2) as usize;
        let graded = mvss_core::spectral::read_off(&last).unwrap();
        let exact = global_reconcile(&dc, &last, &Serial).unwrap();
        total += 1;
        betti_ok += pointwise_equal(&graded, &oracle) as usize;
        exact_ok += (exact == oracle) as usize;
    }
    let elapsed = start.elapsed();
    let ok = betti_ok == total && exact_ok == total && deep > 0 && elapsed.as_secs() < 120;
    println!(
        "criterion 2: {} ({total} instances, pointwise {betti_ok}/{total}, exact {exact_ok}/{total}, {deep} collapsing after page 2, {:.2?})",
        verdict(ok),
        elapsed
    );
    assert!(ok);
}

#[test]
fn criterion_3_homology_nerve_lemma() {
    let f = FieldSpec::gf2();
    let instances = nerve_lemma_instances();
    let mut passed = 0;
    let mut failures = Vec::new();
    for inst in &instances {
        let n = nerve(&inst.complex, &inst.cover);
        let acyclic = acyclic_at_end(&intersection_barcodes(&inst.complex, &inst.cover, &n, &f));
        let out = compute(
            &inst.complex,
            &inst.cover,
            &Options {
                exact: true,
                ..Default::default()
            },
        )
        .unwrap();
        let nb = standard_persistence(n.complex(), &f);
        let ok = acyclic && out.exact.as_ref() == Some(&nb) && out.graded == nb && out.collapse_page == 2;
        if ok {
            passed += 1;
        } else {
            failures.push(inst.name.clone());
        }
    }
    let ok = passed == instances.len() && instances.len() >= 20;
    println!("criterion 3: {} ({passed}/{} instances, failures {failures:?})", verdict(ok), instances.len());
    assert!(ok);
}

#[test]
fn criterion_4_persistent_nerve_lemma() {
    let f = FieldSpec::gf2();
    let instances = persistent_nerve_instances(44);
    let mut passed = 0;
    let mut failures = Vec::new();
    for inst in &instances {
        let n = persistent_nerve(&inst.complex, &inst.cover);
        let pa = persistently_acyclic(&intersection_barcodes(&inst.complex, &inst.cover, &n, &f));
        let out = compute(
            &inst.complex,
            &inst.cover,
            &Options {
                exact: true,
                ..Default::default()
            },
        )
        .unwrap();
        let nb = standard_persistence(n.complex(), &f);
        let ok = pa && out.exact.as_ref() == Some(&nb) && standard_persistence(&inst.complex, &f) == nb;
        if ok {
            passed += 1;
        } else {
            failures.push(inst.name.clone());
        }
    }
    let ok = passed == instances.len() && instances.len() >= 20;
    println!("criterion 4: {} ({passed}/{} instances, failures {failures:?})", verdict(ok), instances.len());
    assert!(ok);
}

/// Dense rank of a matrix over GF(p), rows of column vectors.
fn dense_rank(mut cols: Vec<Vec<u32>>, f: &FieldSpec) -> usize {
    let mut rank = 0;
    let nrows = cols.first().map_or(0, Vec::len);
    for row in 0..nrows {
        let Some(piv) = (rank..cols.len()).find(|&c| cols[c][row] != 0) else { continue };
        cols.swap(rank, piv);
        let inv = f.inv(cols[rank][row]);
        for c in 0..cols.len() {
            if c != rank && cols[c][row] != 0 {
                let k = f.neg(f.mul(cols[c][row], inv));
                for r in 0..nrows {
                    let v = f.add(cols[c][r], f.mul(k, cols[rank][r]));
                    cols[c][r] = v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_interval<R: Rng>(r: &mut R) -> Interval {
    let b = r.gen_range(0..6);
    if r.gen_bool(0.3) {
        iv(b, None)
    } else {
        iv(b, Some(b + r.gen_range(1..6)))
    }
}

#[test]
fn criterion_5_algebra_oracle() {
    let mut r = rng(5);
    let mut checked = 0;
    let mut mismatches = 0;
    while checked < 500 {
        let f = [2, 3, 5, 7][checked % 4];
        let f = FieldSpec::new(f).unwrap();
        let ns = r.gen_range(1..=6);
        let nt = r.gen_range(1..=12 - ns);
        let src: Vec<Interval> = (0..ns).map(|_| random_interval(&mut r)).collect();
        let tgt: Vec<Interval> = (0..nt).map(|_| random_interval(&mut r)).collect();
        let mut coef = vec![vec![0u32; nt]; ns];
        for i in 0..ns {
            for j in 0..nt {
                if tgt[j].birth <= src[i].birth && tgt[j].death <= src[i].death && r.gen_bool(0.5) {
                    coef[i][j] = r.gen_range(1..f.characteristic());
                }
            }
        }
        let images: Vec<GradedChain> = (0..ns)
            .map(|i| GradedChain::from_entries(src[i].birth, (0..nt).filter(|&j| coef[i][j] != 0).map(|j| (j, coef[i][j])).collect(), &f))
            .collect();
        let m = GradedMorphism::new(PresentedModule::from_intervals(&src), PresentedModule::from_intervals(&tgt), images, &f).unwrap();
        let ker = m.kernel_module(&f).unwrap();
        let img = m.image_module(&f).unwrap();
        let cok = m.cokernel_module(&f).unwrap();
        for s in 0..13 {
            let alive_s: Vec<usize> = (0..ns).filter(|&i| src[i].contains(s)).collect();
            let alive_t: Vec<usize> = (0..nt).filter(|&j| tgt[j].contains(s)).collect();
            let cols: Vec<Vec<u32>> = alive_s.iter().map(|&i| alive_t.iter().map(|&j| coef[i][j]).collect()).collect();
            let rank = if alive_t.is_empty() { 0 } else { dense_rank(cols, &f) };
            let good = ker.dim_at(s) == alive_s.len() - rank && img.dim_at(s) == rank && cok.dim_at(s) == alive_t.len() - rank;
            mismatches += (!good) as usize;
        }
        checked += 1;
    }
    // The surjection k[t] -> k[t]/t^m.
    let f = FieldSpec::gf2();
    let m = 4;
    let map = GradedMorphism::new(
        PresentedModule::from_intervals(&[iv(0, None)]),
        PresentedModule::from_intervals(&[iv(0, Some(m))]),
        vec![GradedChain::unit(0, 0)],
        &f,
    )
    .unwrap();
    let special = map.kernel_module(&f).unwrap().sorted_intervals() == [iv(m, None)]
        && map.image_module(&f).unwrap().sorted_intervals() == [iv(0, Some(m))]
        && map.cokernel_module(&f).unwrap().is_zero();
    let ok = mismatches == 0 && special;
    println!(
        "criterion 5: {} ({checked} random morphisms, {mismatches} degree mismatches, k[t]->k[t]/t^m {})",
        verdict(ok),
        verdict(special)
    );
    assert!(ok);
}

fn reduces_to_zero(items: &[GradedChain], basis_of: &[GradedChain], f: &FieldSpec) -> bool {
    let basis = mvss_core::algebra::Basis::new(
        mvss_core::algebra::reduce_generating_set(basis_of, f)
            .into_iter()
            .map(|b| b.0)
            .collect(),
    )
    .unwrap();
    items.iter().all(|x| basis.contains(x, f))
}

fn check_structure(x: &FilteredComplex, cover: &Cover, f: &FieldSpec) -> Result<(), String> {
    let dc = DoubleComplex::assemble(x, cover, f).map_err(|e| e.to_string())?;
    dc.check_identities().map_err(|e| e.to_string())?;
    for q in 0..=x.dim().unwrap_or(0) + 1 {
        let red = reduce_graded(&x.boundary_matrix(q, f), f, true);
        let m = mvss_core::algebra::GradedMatrix::new(x.grades_of_dim(q.saturating_sub(1)), red.reduced.clone());
        if q > 0 {
            let again = reduce_graded(&m.unwrap(), f, false);
            if again.reduced != red.reduced {
                return Err("reduction not idempotent".into());
            }
        }
        if red.replay(x.boundary_matrix(q, f).columns(), f) != red.reduced {
            return Err("ops log replay differs".into());
        }
    }
    let run = run_to_collapse(&dc, &Serial, true).map_err(|e| e.to_string())?;
    for (i, page) in run.pages.iter().enumerate() {
        check_page(&dc, page).map_err(|e| e.to_string())?;
        if let Some(next) = run.pages.get(i + 1) {
            for (k, n) in &page.nodes {
                let nn = &next.nodes[k];
                let mut zr: Vec<GradedChain> = n.gens.iter().map(|g| g.chain.clone()).collect();
                zr.extend(n.rels.iter().map(|b| b.chain.clone()));
                let znext: Vec<GradedChain> = nn.gens.iter().map(|g| g.chain.clone()).chain(nn.rels.iter().map(|b| b.chain.clone())).collect();
                if !reduces_to_zero(&znext, &zr, f) {
                    return Err(format!("Z not monotone at {k:?}"));
                }
                let br: Vec<GradedChain> = n.rels.iter().map(|b| b.chain.clone()).collect();
                let bnext: Vec<GradedChain> = nn.rels.iter().map(|b| b.chain.clone()).collect();
                if !br.is_empty() && !reduces_to_zero(&br, &bnext, f) {
                    return Err(format!("B not monotone at {k:?}"));
                }
            }
        }
    }
    let last: &Page = run.last();
    let d = compute_differentials(&dc, last, &Serial).map_err(|e| e.to_string())?;
    let next = turn_page(&dc, last, &d, &Serial).map_err(|e| e.to_string())?;
    if !next.same_modules(last) {
        return Err("turning a collapsed page changed it".into());
    }
    Ok(())
}

#[test]
fn criterion_6_structural_invariants() {
    let mut instances: Vec<(String, FilteredComplex, Cover, FieldSpec)> = Vec::new();
    let g = golden_sphere(5);
    instances.push((g.name, g.complex, g.cover, FieldSpec::gf2()));
    let g = golden_sphere(5);
    instances.push(("sphere-gf3".into(), g.complex, g.cover, FieldSpec::new(3).unwrap()));
    let mut r = rng(6);
    for i in 0..30 {
        let inst = random_rips_instance(&mut r, 200);
        let f = if i % 3 == 0 { FieldSpec::new(3).unwrap() } else { FieldSpec::gf2() };
        instances.push((inst.name, inst.complex, inst.cover, f));
    }
    for inst in nerve_lemma_instances().into_iter().chain(persistent_nerve_instances(6)) {
        instances.push((inst.name, inst.complex, inst.cover, FieldSpec::new(5).unwrap()));
    }
    let mut failures = Vec::new();
    for (name, x, c, f) in &instances {
        if let Err(e) = check_structure(x, c, f) {
            failures.push(format!("{name}: {e}"));
        }
    }
    let ok = failures.is_empty();
    println!("criterion 6: {} ({} instances, failures {failures:?})", verdict(ok), instances.len());
    assert!(ok);
}

#[test]
fn criterion_7_parallel_determinism() {
    let mut instances = vec![golden_sphere(5)];
    let mut r = rng(7);
    for _ in 0..6 {
        instances.push(random_rips_instance(&mut r, 200));
    }
    instances.extend(nerve_lemma_instances().into_iter().step_by(2));
    let mut failures = Vec::new();
    let mut max_ratio: f64 = 0.0;
    for inst in &instances {
        let mut reference = None;
        for w in [1, 2, 4, 8] {
            let opts = Options {
                workers: w,
                exact: true,
                keep_pages: true,
                ..Default::default()
            };
            let out = compute(&inst.complex, &inst.cover, &opts).unwrap();
            if !out.stats.passed || !out.ledger.is_local(&out.plan) {
                failures.push(format!("{} w={w}: ledger {} > {}", inst.name, out.stats.total, out.stats.bound));
            }
            if out.stats.bound > 0 {
                max_ratio = max_ratio.max(out.stats.total as f64 / out.stats.bound as f64);
            }
            let key = (out.graded.clone(), out.exact.clone(), out.dumps.clone(), out.ledger.clone());
            match &reference {
                None => reference = Some(key),
                Some(k) if *k != key => failures.push(format!("{} w={w}: output differs", inst.name)),
                _ => {}
            }
        }
    }
    // Triangle nerve: three patches with a common vertex.
    let x = FilteredComplex::from_lists(&[(&[0], 0), (&[1], 0), (&[2], 0), (&[0, 1], 0), (&[0, 2], 0), (&[1, 2], 0), (&[0, 1, 2], 0)]).unwrap();
    let cover = Cover::from_lists(&[&[0, 1, 2], &[0, 1, 2], &[0, 1, 2]]);
    let n = nerve(&x, &cover);
    let dc = DoubleComplex::assemble(&x, &cover, &FieldSpec::gf2()).unwrap();
    let plan = plan_tasks(&n, 3);
    let ex = execute_plan(&plan, &dc, &Threaded::new(4).unwrap(), false, true).unwrap();
    let micro = message_bound(&n) == 10 && ex.ledger.total() <= 10 && n.counts() == [3, 3, 1];
    let ok = failures.is_empty() && micro;
    println!(
        "criterion 7: {} ({} instances x 4 worker counts, max ledger/bound {:.2}, triangle bound {} total {}, failures {failures:?})",
        verdict(ok),
        instances.len(),
        max_ratio,
        message_bound(&n),
        ex.ledger.total()
    );
    assert!(ok);
}

#[test]
fn criterion_8_blowup() {
    let f = FieldSpec::gf2();
    let instances = blowup_instances(8);
    let mut passed = 0;
    let mut failures = Vec::new();
    for inst in &instances {
        let b = blowup_complex(&inst.complex, &inst.cover);
        if standard_persistence(&b, &f) == standard_persistence(&inst.complex, &f) {
            passed += 1;
        } else {
            failures.push(inst.name.clone());
        }
    }
    let ok = passed == instances.len() && instances.len() >= 10;
    println!("criterion 8: {} ({passed}/{} instances, failures {failures:?})", verdict(ok), instances.len());
    assert!(ok);
}
