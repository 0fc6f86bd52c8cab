use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::chain::{combine, Combo, GradedChain};
use super::matrix::{add_combo, intersect, kernel_combos, reduce_generating_set, Basis};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::Grade;

/// Death of a bar. `Infinite` orders above every finite grade.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Death {
    Finite(Grade),
    Infinite,
}

impl Death {
    pub fn finite(self) -> Option<Grade> {
        match self {
            Death::Finite(d) => Some(d),
            Death::Infinite => None,
        }
    }

    /// Whether grade `s` lies strictly before this death.
    pub fn after(self, s: Grade) -> bool {
        match self {
            Death::Finite(d) => s < d,
            Death::Infinite => true,
        }
    }
}

impl fmt::Display for Death {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Death::Finite(d) => write!(f, "{d}"),
            Death::Infinite => f.write_str("inf"),
        }
    }
}

/// Half-open interval `[birth, death)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    pub birth: Grade,
    pub death: Death,
}

impl Interval {
    pub fn contains(&self, s: Grade) -> bool {
        self.birth <= s && self.death.after(s)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.birth, self.death)
    }
}

/// Normal form of `span(generators) / span(relations)`.
///
/// Every generator is paired with at most one relation, and a paired
/// relation equals `t^(death - birth)` times its generator. Null classes
/// (death equal to birth) are dropped.
#[derive(Debug, Clone)]
pub struct Presentation {
    /// Adapted generators: chain, interval, and the combination of input
    /// generators producing it.
    pub generators: Vec<(GradedChain, Interval, Combo)>,
    /// Reduced basis of the relation submodule with combinations of input relations.
    pub relations: Vec<(GradedChain, Combo)>,
}

/// Computes the normal form of the quotient of the submodule generated by
/// `gens` by the submodule generated by `rels`. Fails with `NotInSpan` when
/// a relation does not lie in the span of the generators.
pub fn present(gens: &[GradedChain], rels: &[GradedChain], field: &FieldSpec) -> Result<Presentation> {
    let zbasis = reduce_generating_set(gens, field);
    let bbasis = reduce_generating_set(rels, field);
    let zchains: Vec<GradedChain> = zbasis.iter().map(|z| z.0.clone()).collect();
    let zb = Basis::new(zchains.clone())?;
    // Relations in generator coordinates. Rows are ordered like zbasis,
    // i.e. by non-decreasing degree, so a pivot row never has lower degree
    // than the rows above it in its column.
    let mut coords = Vec::with_capacity(bbasis.len());
    for (b, _) in &bbasis {
        let c = zb.divide(b, field)?;
        coords.push(GradedChain::from_entries(b.degree, c, field));
    }
    let reduced = reduce_generating_set(&coords, field);
    let mut paired: Vec<Option<usize>> = alloc::vec![None; zchains.len()];
    for (j, (col, _)) in reduced.iter().enumerate() {
        let (row, _) = col.lowest().expect("nonzero reduced column");
        paired[row] = Some(j);
    }
    let mut generators = Vec::new();
    for (i, (z, zcombo)) in zbasis.iter().enumerate() {
        match paired[i] {
            None => generators.push((
                z.clone(),
                Interval {
                    birth: z.degree,
                    death: Death::Infinite,
                },
                zcombo.clone(),
            )),
            Some(j) => {
                let col = &reduced[j].0;
                if col.degree == z.degree {
                    continue;
                }
                let inv = field.inv(col.coeff(i));
                let mut over_z: Combo = col.entries().to_vec();
                for e in &mut over_z {
                    e.1 = field.mul(e.1, inv);
                }
                let chain = combine(z.degree, &over_z, &zchains, field);
                let mut over_input = Combo::new();
                for &(k, c) in &over_z {
                    add_combo(&mut over_input, &zbasis[k].1, c, field);
                }
                generators.push((
                    chain,
                    Interval {
                        birth: z.degree,
                        death: Death::Finite(col.degree),
                    },
                    over_input,
                ));
            }
        }
    }
    Ok(Presentation {
        generators,
        relations: bbasis,
    })
}

/// A finitely presented graded `k[t]`-module inside a free ambient module.
///
/// Stored as a segregated pair of bases: adapted generators with their
/// intervals, and a reduced relation basis. The module is
/// `(span(generators) + span(relations)) / span(relations)`.
#[derive(Debug, Clone)]
pub struct PresentedModule {
    ambient: Arc<[Grade]>,
    generators: Vec<GradedChain>,
    intervals: Vec<Interval>,
    relations: Vec<GradedChain>,
}

impl PresentedModule {
    /// Presents `span(gens) / span(rels)` over an ambient free module with the
    /// given row degrees. Relations outside the generator span are an error.
    pub fn new(ambient: Arc<[Grade]>, gens: &[GradedChain], rels: &[GradedChain], field: &FieldSpec) -> Result<Self> {
        for c in gens.iter().chain(rels) {
            check_homogeneous(c, &ambient)?;
        }
        let pres = present(gens, rels, field)?;
        let (generators, intervals) = pres.generators.into_iter().map(|(c, iv, _)| (c, iv)).unzip();
        Ok(PresentedModule {
            ambient,
            generators,
            intervals,
            relations: pres.relations.into_iter().map(|r| r.0).collect(),
        })
    }

    /// `⊕ t^b k[t] / t^d`, one ambient row per interval.
    pub fn from_intervals(intervals: &[Interval]) -> Self {
        let ambient: Arc<[Grade]> = intervals.iter().map(|iv| iv.birth).collect();
        let mut generators = Vec::new();
        let mut kept = Vec::new();
        let mut relations = Vec::new();
        for (i, iv) in intervals.iter().enumerate() {
            if let Death::Finite(d) = iv.death {
                assert!(d >= iv.birth, "interval death before birth");
                relations.push(GradedChain::unit(d, i));
                if d == iv.birth {
                    continue;
                }
            }
            generators.push(GradedChain::unit(iv.birth, i));
            kept.push(*iv);
        }
        relations.sort_by_key(|r| r.degree);
        PresentedModule {
            ambient,
            generators,
            intervals: kept,
            relations,
        }
    }

    pub fn zero(ambient: Arc<[Grade]>) -> Self {
        PresentedModule {
            ambient,
            generators: Vec::new(),
            intervals: Vec::new(),
            relations: Vec::new(),
        }
    }

    pub fn ambient(&self) -> &Arc<[Grade]> {
        &self.ambient
    }

    pub fn generators(&self) -> &[GradedChain] {
        &self.generators
    }

    pub fn relations(&self) -> &[GradedChain] {
        &self.relations
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Dimension over `k` of the degree-`s` slice.
    pub fn dim_at(&self, s: Grade) -> usize {
        self.intervals.iter().filter(|iv| iv.contains(s)).count()
    }

    /// Intervals sorted, the canonical comparison form.
    pub fn sorted_intervals(&self) -> Vec<Interval> {
        let mut v = self.intervals.clone();
        v.sort();
        v
    }

    /// Generators of the cycle module `span(generators) + span(relations)`.
    fn cycle_generators(&self) -> Vec<GradedChain> {
        let mut v = self.generators.clone();
        v.extend(self.relations.iter().cloned());
        v
    }
}

fn check_homogeneous(c: &GradedChain, ambient: &[Grade]) -> Result<()> {
    for &(r, _) in c.entries() {
        let rd = *ambient
            .get(r)
            .ok_or_else(|| Error::invariant("algebra", alloc::format!("row {r} outside ambient module")))?;
        if rd > c.degree {
            return Err(Error::NonHomogeneous {
                column: 0,
                row: r,
                row_degree: rd,
                degree: c.degree,
            });
        }
    }
    Ok(())
}

/// Degree-0 morphism between presented modules, given by the images of the
/// source's adapted generators in the target's ambient coordinates.
#[derive(Debug, Clone)]
pub struct GradedMorphism {
    source: PresentedModule,
    target: PresentedModule,
    images: Vec<GradedChain>,
}

impl GradedMorphism {
    /// Checks that degrees are preserved, that images lie in the target, and
    /// that every relation of the source maps into the target's relations.
    pub fn new(source: PresentedModule, target: PresentedModule, images: Vec<GradedChain>, field: &FieldSpec) -> Result<Self> {
        if images.len() != source.generators.len() {
            return Err(Error::IllDefinedMorphism(alloc::format!(
                "{} images for {} generators",
                images.len(),
                source.generators.len()
            )));
        }
        let cycles = Basis::new(reduce_generating_set(&target.cycle_generators(), field).into_iter().map(|c| c.0).collect())?;
        let rels = Basis::new(target.relations.clone())?;
        for (i, (img, iv)) in images.iter().zip(&source.intervals).enumerate() {
            if img.degree != iv.birth {
                return Err(Error::IllDefinedMorphism(alloc::format!(
                    "image {i} has degree {} but its generator has degree {}",
                    img.degree,
                    iv.birth
                )));
            }
            check_homogeneous(img, &target.ambient)?;
            if !cycles.contains(img, field) {
                return Err(Error::IllDefinedMorphism(alloc::format!("image {i} leaves the target module")));
            }
            if let Death::Finite(d) = iv.death {
                if !rels.contains(&img.at_degree(d), field) {
                    return Err(Error::IllDefinedMorphism(alloc::format!(
                        "relation of generator {i} does not map to a relation"
                    )));
                }
            }
        }
        Ok(GradedMorphism { source, target, images })
    }

    pub fn identity(m: &PresentedModule) -> Self {
        GradedMorphism {
            source: m.clone(),
            target: m.clone(),
            images: m.generators.clone(),
        }
    }

    pub fn zero(source: PresentedModule, target: PresentedModule) -> Self {
        let images = source.intervals.iter().map(|iv| GradedChain::zero(iv.birth)).collect();
        GradedMorphism { source, target, images }
    }

    pub fn source(&self) -> &PresentedModule {
        &self.source
    }

    pub fn target(&self) -> &PresentedModule {
        &self.target
    }

    pub fn images(&self) -> &[GradedChain] {
        &self.images
    }

    /// Source generator coordinates, the ambient of kernel presentations.
    fn source_coordinates(&self) -> Arc<[Grade]> {
        self.source.intervals.iter().map(|iv| iv.birth).collect()
    }

    /// `f(M) / (f(M) ∩ P)`, in the target's ambient coordinates.
    pub fn image_module(&self, field: &FieldSpec) -> Result<PresentedModule> {
        let rels: Vec<GradedChain> = intersect(&self.images, &self.target.relations, field)
            .into_iter()
            .map(|r| r.0)
            .collect();
        PresentedModule::new(self.target.ambient.clone(), &self.images, &rels, field)
    }

    /// `N / (P + f(M))`.
    pub fn cokernel_module(&self, field: &FieldSpec) -> Result<PresentedModule> {
        let mut rels = self.target.relations.clone();
        rels.extend(self.images.iter().cloned());
        PresentedModule::new(self.target.ambient.clone(), &self.target.cycle_generators(), &rels, field)
    }

    /// Kernel as a module presented in source generator coordinates; its
    /// generators are the embedding into the source.
    ///
    /// Step one takes the kernel of `M ⊕ P → N, (m, p) ↦ f(m) - p` and
    /// projects to `M`. Step two finds the relations of the source that lie
    /// in that submodule.
    pub fn kernel_module(&self, field: &FieldSpec) -> Result<PresentedModule> {
        let coords = self.source_coordinates();
        let n = self.images.len();
        let mut items = self.images.clone();
        items.extend(self.target.relations.iter().cloned());
        let k_gens: Vec<GradedChain> = kernel_combos(&items, field)
            .into_iter()
            .map(|(deg, combo)| {
                let on_m: Combo = combo.into_iter().filter(|e| e.0 < n).collect();
                GradedChain::from_entries(deg, on_m, field)
            })
            .collect();
        let k_basis: Vec<GradedChain> = reduce_generating_set(&k_gens, field).into_iter().map(|c| c.0).collect();
        let q: Vec<GradedChain> = self
            .source
            .intervals
            .iter()
            .enumerate()
            .filter_map(|(i, iv)| iv.death.finite().map(|d| GradedChain::unit(d, i)))
            .collect();
        let rels: Vec<GradedChain> = intersect(&k_basis, &q, field).into_iter().map(|r| r.0).collect();
        PresentedModule::new(coords, &k_basis, &rels, field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(b: Grade, d: Option<Grade>) -> Interval {
        Interval {
            birth: b,
            death: d.map_or(Death::Infinite, Death::Finite),
        }
    }

    #[test]
    fn presentation_of_free_mod_shifted() {
        let f = FieldSpec::gf2();
        let amb: Arc<[Grade]> = Arc::from([0u32]);
        let m = PresentedModule::new(amb, &[GradedChain::unit(0, 0)], &[GradedChain::unit(4, 0)], &f).unwrap();
        assert_eq!(m.intervals(), &[iv(0, Some(4))]);
        assert_eq!(m.dim_at(3), 1);
        assert_eq!(m.dim_at(4), 0);
    }

    #[test]
    fn null_classes_are_dropped() {
        let m = PresentedModule::from_intervals(&[iv(2, Some(2)), iv(1, None)]);
        assert_eq!(m.intervals(), &[iv(1, None)]);
    }

    #[test]
    fn relation_outside_span_is_rejected() {
        let f = FieldSpec::gf2();
        let amb: Arc<[Grade]> = Arc::from([0u32, 0]);
        let r = PresentedModule::new(amb, &[GradedChain::unit(0, 0)], &[GradedChain::unit(1, 1)], &f);
        assert_eq!(r.unwrap_err(), Error::NotInSpan);
    }

    #[test]
    fn surjection_onto_truncated_module() {
        // k[t] -> k[t]/t^m, generator to generator
        let f = FieldSpec::gf2();
        let m = 5;
        let src = PresentedModule::from_intervals(&[iv(0, None)]);
        let tgt = PresentedModule::from_intervals(&[iv(0, Some(m))]);
        let map = GradedMorphism::new(src, tgt, alloc::vec![GradedChain::unit(0, 0)], &f).unwrap();
        assert_eq!(map.kernel_module(&f).unwrap().sorted_intervals(), alloc::vec![iv(m, None)]);
        assert_eq!(map.image_module(&f).unwrap().sorted_intervals(), alloc::vec![iv(0, Some(m))]);
        assert!(map.cokernel_module(&f).unwrap().is_zero());
    }

    #[test]
    fn inclusion_of_shifted_free_module() {
        // t^2 k[t] -> k[t]
        let f = FieldSpec::gf2();
        let src = PresentedModule::from_intervals(&[iv(2, None)]);
        let tgt = PresentedModule::from_intervals(&[iv(0, None)]);
        let map = GradedMorphism::new(src, tgt, alloc::vec![GradedChain::unit(2, 0)], &f).unwrap();
        assert_eq!(map.cokernel_module(&f).unwrap().sorted_intervals(), alloc::vec![iv(0, Some(2))]);
        assert!(map.kernel_module(&f).unwrap().is_zero());
    }

    #[test]
    fn truncation_map_kernel() {
        // k[t]/t^3 -> k[t]/t^1: kernel [1,3)
        let f = FieldSpec::gf2();
        let src = PresentedModule::from_intervals(&[iv(0, Some(3))]);
        let tgt = PresentedModule::from_intervals(&[iv(0, Some(1))]);
        let map = GradedMorphism::new(src, tgt, alloc::vec![GradedChain::unit(0, 0)], &f).unwrap();
        assert_eq!(map.kernel_module(&f).unwrap().sorted_intervals(), alloc::vec![iv(1, Some(3))]);
    }

    #[test]
    fn identity_and_zero_morphisms() {
        let f = FieldSpec::new(5).unwrap();
        let m = PresentedModule::from_intervals(&[iv(0, Some(4)), iv(1, None), iv(2, Some(3))]);
        let id = GradedMorphism::identity(&m);
        assert_eq!(id.image_module(&f).unwrap().sorted_intervals(), m.sorted_intervals());
        assert!(id.kernel_module(&f).unwrap().is_zero());
        assert!(id.cokernel_module(&f).unwrap().is_zero());
        let z = GradedMorphism::zero(m.clone(), m.clone());
        assert!(z.image_module(&f).unwrap().is_zero());
        assert_eq!(z.cokernel_module(&f).unwrap().sorted_intervals(), m.sorted_intervals());
        assert_eq!(z.kernel_module(&f).unwrap().sorted_intervals(), m.sorted_intervals());
    }

    #[test]
    fn ill_defined_morphism_is_rejected() {
        // k[t]/t^2 -> k[t]: the relation t^2 g cannot map to zero
        let f = FieldSpec::gf2();
        let src = PresentedModule::from_intervals(&[iv(0, Some(2))]);
        let tgt = PresentedModule::from_intervals(&[iv(0, None)]);
        assert!(matches!(
            GradedMorphism::new(src, tgt, alloc::vec![GradedChain::unit(0, 0)], &f),
            Err(Error::IllDefinedMorphism(_))
        ));
    }
}
