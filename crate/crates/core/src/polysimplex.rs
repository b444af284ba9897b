//! The category of extended colored poly-simplices.
//!
//! A poly-simplex is a finite product of standard simplices; its carrier is
//! the product of the vertex sets `[n_i] = {0, .., n_i}`. An extended
//! poly-simplex additionally carries one positive (possibly infinite) color
//! per factor and a nonnegative orthant rank `s`. Morphisms are stored as
//! explicit tables — a factor assignment, per-factor vertex maps, and an
//! orthant index map — so that composition, classification and equality are
//! all decidable by table comparison. The induced carrier map is derived,
//! never stored.

use crate::error::{descriptor_err, domain_err, Result};
use crate::rat::ExtRat;
use std::collections::BTreeSet;

/// Shape datum `n`: a tuple of positive integers, one per simplex factor.
/// The empty tuple is the one-point poly-simplex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolySimplex {
    n: Vec<u32>,
}

impl PolySimplex {
    pub fn new(n: Vec<u32>) -> Result<Self> {
        if n.iter().any(|&ni| ni == 0) {
            return descriptor_err("poly-simplex factors must have n_i >= 1 (use the empty tuple for the point)");
        }
        Ok(PolySimplex { n })
    }

    /// The one-point poly-simplex (zero factors).
    pub fn point() -> Self {
        PolySimplex { n: Vec::new() }
    }

    pub fn factors(&self) -> &[u32] {
        &self.n
    }

    pub fn factor_count(&self) -> usize {
        self.n.len()
    }

    /// `|n| = n_1 + ... + n_p`.
    pub fn total(&self) -> u32 {
        self.n.iter().sum()
    }

    pub fn carrier_size(&self) -> u64 {
        self.n.iter().map(|&ni| (ni + 1) as u64).product()
    }

    /// All carrier tuples in lexicographic order.
    pub fn carrier(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for &ni in &self.n {
            let mut next = Vec::with_capacity(out.len() * (ni as usize + 1));
            for prefix in &out {
                for j in 0..=ni {
                    let mut t = prefix.clone();
                    t.push(j);
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }

    pub fn contains_tuple(&self, pt: &[u32]) -> bool {
        pt.len() == self.n.len() && pt.iter().zip(&self.n).all(|(&j, &ni)| j <= ni)
    }
}

/// Number of coordinates in which two carrier tuples differ.
pub fn hamming(a: &[u32], b: &[u32]) -> u32 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u32
}

/// `[n, r, s]`: a poly-simplex with one color per factor and an orthant rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtendedPolySimplex {
    base: PolySimplex,
    colors: Vec<ExtRat>,
    s: u32,
}

impl ExtendedPolySimplex {
    pub fn new(base: PolySimplex, colors: Vec<ExtRat>, s: u32) -> Result<Self> {
        if colors.len() != base.factor_count() {
            return descriptor_err("color tuple length must match factor count");
        }
        for c in &colors {
            if !c.is_nonnegative() || c.is_zero() {
                return descriptor_err("colors must be positive rationals or inf");
            }
        }
        Ok(ExtendedPolySimplex { base, colors, s })
    }

    /// The point with orthant rank `s` (degenerate shape, no factors).
    pub fn point(s: u32) -> Self {
        ExtendedPolySimplex {
            base: PolySimplex::point(),
            colors: Vec::new(),
            s,
        }
    }

    pub fn base(&self) -> &PolySimplex {
        &self.base
    }

    pub fn colors(&self) -> &[ExtRat] {
        &self.colors
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn factor_count(&self) -> usize {
        self.base.factor_count()
    }

    /// `|n| + s`.
    pub fn dimension(&self) -> u32 {
        self.base.total() + self.s
    }

    /// Factors sorted by `(n_i, r_i)`, with the permutation that sorts them:
    /// `perm[k]` is the original index of the k-th canonical factor. Shape
    /// equality up to factor reordering compares canonical forms.
    pub fn canonical_form(&self) -> (ExtendedPolySimplex, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.factor_count()).collect();
        perm.sort_by(|&a, &b| {
            (self.base.n[a], &self.colors[a]).cmp(&(self.base.n[b], &self.colors[b]))
        });
        let shape = ExtendedPolySimplex {
            base: PolySimplex {
                n: perm.iter().map(|&i| self.base.n[i]).collect(),
            },
            colors: perm.iter().map(|&i| self.colors[i].clone()).collect(),
            s: self.s,
        };
        (shape, perm)
    }

    /// Equality of shapes up to factor permutation.
    pub fn shape_equivalent(&self, other: &ExtendedPolySimplex) -> bool {
        self.canonical_form().0 == other.canonical_form().0
    }
}

/// Per-target-factor vertex data of a morphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ComponentMap {
    /// Target factor hit by a source factor: the full vertex table
    /// `j -> table[j]`, injective.
    Embed(Vec<u32>),
    /// Target factor not hit: the single vertex every point lands on.
    Collapse(u32),
}

/// A morphism of extended poly-simplices, in tabular normal form.
///
/// `f[i]` is the target factor assigned to source factor `i` (`None` when the
/// source factor is outside the defining subset `J`); `cmaps[l]` is the vertex
/// data at target factor `l`; `g` maps orthant indices, with `g[0] = 0` and
/// every positive target index hit at most once.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PSMorphism {
    source: ExtendedPolySimplex,
    target: ExtendedPolySimplex,
    f: Vec<Option<usize>>,
    cmaps: Vec<ComponentMap>,
    g: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorphismClass {
    General,
    Injective,
    Isomorphism,
}

impl PSMorphism {
    pub fn new(
        source: ExtendedPolySimplex,
        target: ExtendedPolySimplex,
        f: Vec<Option<usize>>,
        cmaps: Vec<ComponentMap>,
        g: Vec<u32>,
    ) -> Result<Self> {
        let p = source.factor_count();
        let p_t = target.factor_count();
        if f.len() != p {
            return descriptor_err("factor assignment length must equal source factor count");
        }
        if cmaps.len() != p_t {
            return descriptor_err("component map count must equal target factor count");
        }
        let mut hit = vec![None; p_t];
        for (i, fi) in f.iter().enumerate() {
            if let Some(l) = *fi {
                if l >= p_t {
                    return descriptor_err("factor assignment out of range");
                }
                if hit[l].is_some() {
                    return descriptor_err("factor assignment must be injective");
                }
                hit[l] = Some(i);
                if source.colors[i] != target.colors[l] {
                    return descriptor_err("color mismatch: assigned factors must have equal colors");
                }
            }
        }
        for (l, cm) in cmaps.iter().enumerate() {
            match (cm, hit[l]) {
                (ComponentMap::Embed(table), Some(i)) => {
                    let ni = source.base.n[i];
                    if table.len() != ni as usize + 1 {
                        return descriptor_err("vertex table length must be n_i + 1");
                    }
                    let mut seen = BTreeSet::new();
                    for &v in table {
                        if v > target.base.n[l] || !seen.insert(v) {
                            return descriptor_err("vertex tables must be injective into [n'_l]");
                        }
                    }
                }
                (ComponentMap::Collapse(v), None) => {
                    if *v > target.base.n[l] {
                        return descriptor_err("collapse vertex out of range");
                    }
                }
                (ComponentMap::Embed(_), None) => {
                    return descriptor_err("unassigned target factor must carry a collapse map");
                }
                (ComponentMap::Collapse(_), Some(_)) => {
                    return descriptor_err("assigned target factor must carry a vertex table");
                }
            }
        }
        if g.len() != source.s as usize + 1 {
            return descriptor_err("orthant map length must be s + 1");
        }
        if g[0] != 0 {
            return descriptor_err("orthant map must send 0 to 0");
        }
        let mut seen = BTreeSet::new();
        for &v in &g {
            if v > target.s {
                return descriptor_err("orthant map value out of range");
            }
            if v != 0 && !seen.insert(v) {
                return descriptor_err("positive orthant indices may have at most one preimage");
            }
        }
        Ok(PSMorphism {
            source,
            target,
            f,
            cmaps,
            g,
        })
    }

    pub fn identity(shape: &ExtendedPolySimplex) -> Self {
        let f = (0..shape.factor_count()).map(Some).collect();
        let cmaps = shape
            .base
            .factors()
            .iter()
            .map(|&ni| ComponentMap::Embed((0..=ni).collect()))
            .collect();
        let g = (0..=shape.s).collect();
        PSMorphism {
            source: shape.clone(),
            target: shape.clone(),
            f,
            cmaps,
            g,
        }
    }

    pub fn source(&self) -> &ExtendedPolySimplex {
        &self.source
    }

    pub fn target(&self) -> &ExtendedPolySimplex {
        &self.target
    }

    pub fn factor_assignment(&self) -> &[Option<usize>] {
        &self.f
    }

    pub fn component_maps(&self) -> &[ComponentMap] {
        &self.cmaps
    }

    pub fn orthant_map(&self) -> &[u32] {
        &self.g
    }

    /// The induced carrier map.
    pub fn apply(&self, pt: &[u32]) -> Result<Vec<u32>> {
        if !self.source.base.contains_tuple(pt) {
            return domain_err("tuple does not lie in the source carrier");
        }
        let mut hit = vec![None; self.target.factor_count()];
        for (i, fi) in self.f.iter().enumerate() {
            if let Some(l) = *fi {
                hit[l] = Some(i);
            }
        }
        let mut out = Vec::with_capacity(self.target.factor_count());
        for (l, cm) in self.cmaps.iter().enumerate() {
            out.push(match cm {
                ComponentMap::Embed(table) => table[pt[hit[l].unwrap()] as usize],
                ComponentMap::Collapse(v) => *v,
            });
        }
        Ok(out)
    }

    /// Orthant index map as a function.
    pub fn apply_orthant(&self, k: u32) -> Result<u32> {
        self.g
            .get(k as usize)
            .copied()
            .ok_or_else(|| crate::error::Error::Domain("orthant index out of range".into()))
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &PSMorphism) -> Result<PSMorphism> {
        if other.target != self.source {
            return domain_err("morphisms are not composable: endpoints differ");
        }
        let f: Vec<Option<usize>> = other
            .f
            .iter()
            .map(|fi| fi.and_then(|m| self.f[m]))
            .collect();
        let mut mid_hit = vec![None; self.source.factor_count()];
        for (k, fk) in other.f.iter().enumerate() {
            if let Some(m) = *fk {
                mid_hit[m] = Some(k);
            }
        }
        let mut cmaps = Vec::with_capacity(self.target.factor_count());
        let mut outer_hit = vec![None; self.target.factor_count()];
        for (m, fm) in self.f.iter().enumerate() {
            if let Some(l) = *fm {
                outer_hit[l] = Some(m);
            }
        }
        for (l, outer) in self.cmaps.iter().enumerate() {
            cmaps.push(match (outer, outer_hit[l]) {
                (ComponentMap::Collapse(v), None) => ComponentMap::Collapse(*v),
                (ComponentMap::Embed(outer_table), Some(m)) => match (&other.cmaps[m], mid_hit[m]) {
                    (ComponentMap::Embed(inner_table), Some(_)) => ComponentMap::Embed(
                        inner_table
                            .iter()
                            .map(|&j| outer_table[j as usize])
                            .collect(),
                    ),
                    (ComponentMap::Collapse(v), None) => {
                        ComponentMap::Collapse(outer_table[*v as usize])
                    }
                    _ => unreachable!("validated morphism data"),
                },
                _ => unreachable!("validated morphism data"),
            });
        }
        let g = other.g.iter().map(|&k| self.g[k as usize]).collect();
        PSMorphism::new(
            other.source.clone(),
            self.target.clone(),
            f,
            cmaps,
            g,
        )
    }

    fn carrier_map_injective(&self) -> bool {
        self.source.factor_count() == 0 || self.f.iter().all(Option::is_some)
    }

    fn orthant_map_injective(&self) -> bool {
        // Positive values are pairwise distinct by construction, so the only
        // possible collision is a positive index mapping to 0.
        self.g.iter().skip(1).all(|&v| v != 0)
    }

    pub fn classify(&self) -> MorphismClass {
        let inj = self.carrier_map_injective() && self.orthant_map_injective();
        if !inj {
            return MorphismClass::General;
        }
        let bij = self.source.base.carrier_size() == self.target.base.carrier_size()
            && self.source.s == self.target.s;
        if bij {
            MorphismClass::Isomorphism
        } else {
            MorphismClass::Injective
        }
    }

    pub fn inverse(&self) -> Result<PSMorphism> {
        if self.classify() != MorphismClass::Isomorphism {
            return domain_err("only isomorphisms are invertible");
        }
        let mut f_inv = vec![None; self.target.factor_count()];
        let mut cmaps_inv: Vec<Option<ComponentMap>> = vec![None; self.source.factor_count()];
        for (i, fi) in self.f.iter().enumerate() {
            let l = fi.unwrap();
            f_inv[l] = Some(i);
            if let ComponentMap::Embed(table) = &self.cmaps[l] {
                let mut inv_table = vec![0; table.len()];
                for (j, &v) in table.iter().enumerate() {
                    inv_table[v as usize] = j as u32;
                }
                cmaps_inv[i] = Some(ComponentMap::Embed(inv_table));
            }
        }
        let cmaps_inv = cmaps_inv.into_iter().map(Option::unwrap).collect();
        let mut g_inv = vec![0; self.g.len()];
        for (k, &v) in self.g.iter().enumerate() {
            g_inv[v as usize] = k as u32;
        }
        PSMorphism::new(
            self.target.clone(),
            self.source.clone(),
            f_inv,
            cmaps_inv,
            g_inv,
        )
    }

    /// The pair (per-target-factor vertex image, orthant image) that keys the
    /// face hit by this morphism when it is injective.
    pub fn image_key(&self) -> (Vec<BTreeSet<u32>>, BTreeSet<u32>) {
        let subsets = self
            .cmaps
            .iter()
            .map(|cm| match cm {
                ComponentMap::Embed(table) => table.iter().copied().collect(),
                ComponentMap::Collapse(v) => std::iter::once(*v).collect(),
            })
            .collect();
        let t = self.g.iter().skip(1).copied().filter(|&v| v != 0).collect();
        (subsets, t)
    }
}

/// A face of an extended poly-simplex: the face shape together with the
/// canonical injective morphism into the ambient shape (order-preserving on
/// each factor, vertices sorted).
#[derive(Clone, Debug)]
pub struct Face {
    pub shape: ExtendedPolySimplex,
    pub embedding: PSMorphism,
}

/// All faces, one per pair (family of nonempty vertex subsets per factor,
/// subset of orthant indices). Count: `prod(2^(n_l+1) - 1) * 2^s`.
pub fn enumerate_faces(shape: &ExtendedPolySimplex) -> Vec<Face> {
    let p = shape.factor_count();
    let mut subset_choices: Vec<Vec<Vec<u32>>> = Vec::with_capacity(p);
    for &nl in shape.base.factors() {
        let mut choices = Vec::new();
        for mask in 1u64..(1u64 << (nl + 1)) {
            let subset: Vec<u32> = (0..=nl).filter(|&j| mask >> j & 1 == 1).collect();
            choices.push(subset);
        }
        subset_choices.push(choices);
    }
    let mut families = vec![Vec::new()];
    for choices in &subset_choices {
        let mut next = Vec::with_capacity(families.len() * choices.len());
        for family in &families {
            for c in choices {
                let mut fam = family.clone();
                fam.push(c.clone());
                next.push(fam);
            }
        }
        families = next;
    }
    let mut faces = Vec::new();
    for family in &families {
        for t_mask in 0u64..(1u64 << shape.s) {
            let t: Vec<u32> = (1..=shape.s).filter(|&k| t_mask >> (k - 1) & 1 == 1).collect();
            faces.push(face_for(shape, family, &t));
        }
    }
    faces
}

/// Build the canonical face for given vertex subsets (one nonempty sorted
/// subset per ambient factor) and orthant subset.
pub fn face_for(shape: &ExtendedPolySimplex, family: &[Vec<u32>], t: &[u32]) -> Face {
    let mut n_face = Vec::new();
    let mut colors_face = Vec::new();
    let mut f = Vec::new();
    let mut cmaps = Vec::with_capacity(shape.factor_count());
    for (l, subset) in family.iter().enumerate() {
        if subset.len() >= 2 {
            n_face.push(subset.len() as u32 - 1);
            colors_face.push(shape.colors[l].clone());
            f.push(Some(l));
            cmaps.push(ComponentMap::Embed(subset.clone()));
        } else {
            cmaps.push(ComponentMap::Collapse(subset[0]));
        }
    }
    let face_shape = ExtendedPolySimplex::new(
        PolySimplex::new(n_face).unwrap(),
        colors_face,
        t.len() as u32,
    )
    .unwrap();
    let mut g = vec![0];
    g.extend_from_slice(t);
    let embedding = PSMorphism::new(face_shape.clone(), shape.clone(), f, cmaps, g).unwrap();
    Face {
        shape: face_shape,
        embedding,
    }
}

/// Reconstruct tabular morphism data from a carrier map and an orthant map.
///
/// Succeeds only when the given maps actually come from a morphism; the
/// construction probes the map on the full carrier and cross-checks.
pub fn morphism_from_maps(
    source: &ExtendedPolySimplex,
    target: &ExtendedPolySimplex,
    carrier_map: impl Fn(&[u32]) -> Vec<u32>,
    g: Vec<u32>,
) -> Result<PSMorphism> {
    let base_pt: Vec<u32> = vec![0; source.factor_count()];
    let base_img = carrier_map(&base_pt);
    if !target.base.contains_tuple(&base_img) {
        return descriptor_err("carrier map leaves the target carrier");
    }
    let mut f: Vec<Option<usize>> = vec![None; source.factor_count()];
    let mut cmaps: Vec<ComponentMap> = base_img
        .iter()
        .map(|&v| ComponentMap::Collapse(v))
        .collect();
    for i in 0..source.factor_count() {
        let mut table = vec![base_img.clone()];
        for j in 1..=source.base.factors()[i] {
            let mut pt = base_pt.clone();
            pt[i] = j;
            let img = carrier_map(&pt);
            if !target.base.contains_tuple(&img) {
                return descriptor_err("carrier map leaves the target carrier");
            }
            table.push(img);
        }
        // Which target factor varies with source factor i, if any.
        let mut varying = None;
        for l in 0..target.factor_count() {
            if table.iter().any(|img| img[l] != base_img[l]) {
                if varying.is_some() {
                    return descriptor_err("carrier map is not a morphism: one source factor moves two target factors");
                }
                varying = Some(l);
            }
        }
        if let Some(l) = varying {
            f[i] = Some(l);
            cmaps[l] = ComponentMap::Embed(table.iter().map(|img| img[l]).collect());
        }
    }
    let m = PSMorphism::new(source.clone(), target.clone(), f, cmaps, g)?;
    for pt in source.base.carrier() {
        if m.apply(&pt)? != carrier_map(&pt) {
            return descriptor_err("carrier map is not a morphism: probe tables do not reproduce it");
        }
    }
    Ok(m)
}

/// A finite metric space with integer distances, given as a full matrix.
#[derive(Clone, Debug)]
pub struct IntegerMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<u32>>,
}

impl IntegerMetricSpace {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<u32>>) -> Result<Self> {
        let n = labels.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return descriptor_err("distance matrix shape must match label count");
        }
        for a in 0..n {
            if dist[a][a] != 0 {
                return descriptor_err("distance matrix must have zero diagonal");
            }
            for b in 0..n {
                if dist[a][b] != dist[b][a] {
                    return descriptor_err("distance matrix must be symmetric");
                }
                if a != b && dist[a][b] == 0 {
                    return descriptor_err("distinct points must have positive distance");
                }
                for c in 0..n {
                    if dist[a][c] > dist[a][b] + dist[b][c] {
                        return descriptor_err("triangle inequality fails");
                    }
                }
            }
        }
        Ok(IntegerMetricSpace { labels, dist })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dist(&self, a: usize, b: usize) -> u32 {
        self.dist[a][b]
    }
}

/// Recognize a metric space as a poly-simplex carrier with the
/// count-of-differing-components metric. Returns the shape together with the
/// carrier tuple assigned to each label (in label order), or `None` when no
/// such structure exists. The returned labeling is verified to be a full
/// isometry before it is returned.
pub fn factorize_metric(m: &IntegerMetricSpace) -> Option<(PolySimplex, Vec<Vec<u32>>)> {
    let n = m.len();
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some((PolySimplex::point(), vec![Vec::new()]));
    }
    // Base point 0; its distance-1 neighbors split into one clique per
    // factor (same-coordinate neighbors are mutually at distance 1,
    // different-coordinate neighbors at distance 2).
    let neighbors: Vec<usize> = (1..n).filter(|&y| m.dist(0, y) == 1).collect();
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for &y in &neighbors {
        match cliques
            .iter_mut()
            .find(|c| c.iter().all(|&w| m.dist(y, w) == 1))
        {
            Some(c) => c.push(y),
            None => cliques.push(vec![y]),
        }
    }
    let shape = PolySimplex::new(cliques.iter().map(|c| c.len() as u32).collect()).ok()?;
    if shape.carrier_size() != n as u64 {
        return None;
    }
    // Coordinate of y in factor i: the clique member one step closer than
    // the base point, or 0 when there is none.
    let mut labeling = Vec::with_capacity(n);
    for y in 0..n {
        let dy = m.dist(0, y);
        let mut tuple = Vec::with_capacity(cliques.len());
        for clique in &cliques {
            let closer: Vec<u32> = clique
                .iter()
                .enumerate()
                .filter(|&(_, &w)| m.dist(y, w) + 1 == dy)
                .map(|(v, _)| v as u32 + 1)
                .collect();
            match closer.len() {
                0 => tuple.push(0),
                1 => tuple.push(closer[0]),
                _ => return None,
            }
        }
        labeling.push(tuple);
    }
    // Verify: bijective onto the carrier and a full isometry.
    let distinct: BTreeSet<&Vec<u32>> = labeling.iter().collect();
    if distinct.len() != n {
        return None;
    }
    for a in 0..n {
        if !shape.contains_tuple(&labeling[a]) {
            return None;
        }
        for b in 0..n {
            if m.dist(a, b) != hamming(&labeling[a], &labeling[b]) {
                return None;
            }
        }
    }
    Some((shape, labeling))
}
