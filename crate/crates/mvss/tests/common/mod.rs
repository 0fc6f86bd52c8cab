#![allow(dead_code)]

use mvss::instances::*;
use mvss_core::complex::{patch_intersection, Cover, FilteredComplex, NerveComplex};
use mvss_core::persistence::{standard_persistence, Barcode};
use mvss_core::{FieldSpec, Grade};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Barcode of every nerve simplex's intersection complex.
pub fn intersection_barcodes(x: &FilteredComplex, cover: &Cover, nerve: &NerveComplex, f: &FieldSpec) -> Vec<Barcode> {
    nerve
        .simplices()
        .map(|j| {
            let js: Vec<usize> = j.iter().map(|&v| v as usize).collect();
            standard_persistence(&patch_intersection(x, cover, &js).unwrap(), f)
        })
        .collect()
}

/// Every intersection is persistently acyclic: a single infinite H0 bar.
pub fn persistently_acyclic(bars: &[Barcode]) -> bool {
    bars.iter().all(|b| b.len() == 1 && b.bars()[0].dim == 0 && b.bars()[0].death.finite().is_none())
}

/// Every intersection is acyclic at its final grade.
pub fn acyclic_at_end(bars: &[Barcode]) -> bool {
    bars.iter()
        .all(|b| b.bars().iter().filter(|bar| bar.death.finite().is_none()).count() == 1 && b.bars().iter().all(|bar| bar.dim == 0 || bar.death.finite().is_some()))
}

fn flat(x: FilteredComplex) -> FilteredComplex {
    x.map_grades(|_, _| 0).unwrap()
}

/// Grade-0 instances with contractible intersections.
pub fn nerve_lemma_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for (n, k) in [(9, 3), (12, 3), (12, 4), (15, 5), (18, 6), (10, 3), (20, 4), (16, 4), (24, 6), (14, 7)] {
        out.push(Instance {
            name: format!("cycle-{n}-arcs-{k}"),
            complex: cycle(&vec![0; n], &[]),
            points: Vec::new(),
            cover: even_arcs(n, k, 2),
        });
    }
    for (rows, n, k) in [(2, 9, 3), (3, 12, 4), (3, 15, 5), (4, 12, 3)] {
        let x = grid(rows, n, false, true, |_, _| 0);
        out.push(Instance {
            name: format!("annulus-{rows}x{n}-sectors-{k}"),
            complex: x,
            points: Vec::new(),
            cover: block_cover(rows, n, &[(0, rows - 1)], &cyclic_ranges(n, k)),
        });
    }
    for (a, b, ka, kb) in [(9, 9, 3, 3), (9, 12, 3, 4), (12, 12, 4, 4), (12, 9, 4, 3)] {
        let x = grid(a, b, true, true, |_, _| 0);
        let ra = cyclic_ranges(a, ka);
        out.push(Instance {
            name: format!("torus-{a}x{b}-blocks-{ka}x{kb}"),
            complex: x,
            points: Vec::new(),
            cover: block_cover(a, b, &ra, &cyclic_ranges(b, kb)),
        });
    }
    for (rounds, eps) in [(2, 0.45), (3, 0.25), (3, 0.35)] {
        let inst = hotspot_sphere(rounds, 0.0, 0, eps);
        out.push(Instance {
            name: format!("octant-sphere-r{rounds}-eps{eps}"),
            complex: flat(inst.complex),
            ..inst
        });
    }
    out
}

/// Graded instances with persistently acyclic intersections.
pub fn persistent_nerve_instances(seed: u64) -> Vec<Instance> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for i in 0..14 {
        let k = r.gen_range(3..=5);
        let peaks: Vec<Grade> = (0..k).map(|_| r.gen_range(3..=9)).collect();
        let valleys: Vec<Grade> = (0..k).map(|_| r.gen_range(0..=3)).collect();
        let plateau = r.gen_range(1..=2);
        let dip = r.gen_range(2..=4);
        if i % 2 == 0 {
            out.push(v_cycle(&peaks, &valleys, plateau, dip));
        } else {
            out.push(v_annulus(r.gen_range(2..=3), &peaks, &valleys, plateau, dip));
        }
    }
    for inst in nerve_lemma_instances().into_iter().step_by(3) {
        out.push(inst);
    }
    out
}

/// Small covered instances for the blowup check.
pub fn blowup_instances(seed: u64) -> Vec<Instance> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    out.push(Instance {
        name: "hexagon-three-arcs".into(),
        complex: cycle(&[0, 0, 1, 0, 2, 0], &[0, 1, 0, 3, 0, 2]),
        points: Vec::new(),
        cover: even_arcs(6, 3, 2),
    });
    out.push(Instance {
        name: "hexagon-two-arcs".into(),
        complex: cycle(&[0; 6], &[1, 1, 1, 1, 1, 4]),
        points: Vec::new(),
        cover: mvss::instances::arc_cover(6, &[(0, 3), (3, 3)]),
    });
    out.push(v_cycle(&[5, 4, 6], &[1, 0, 2], 1, 2));
    out.push(v_annulus(2, &[3, 5, 4], &[0, 1, 0], 1, 2));
    while out.len() < 14 {
        let inst = random_rips_instance(&mut r, 60);
        if inst.cover.len() <= 4 {
            out.push(inst);
        }
    }
    out
}

pub fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
