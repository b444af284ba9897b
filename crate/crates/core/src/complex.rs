//! The dual intersection complex: canonical polyhedra glued along face
//! embeddings, and the descent quotient for pairs that are only poly-stable
//! after an étale cover.
//!
//! Each stratum contributes a canonical polyhedron, stored in one reference
//! chart; chart independence is a verified statement (see [`chart_change`]),
//! not part of the representation. A point of the complex is a stratum id
//! plus coordinates, two points being equal when a common smaller face maps
//! onto both. Descent data identifies strata in classes via chart
//! isomorphisms; the quotient keeps one representative per class and the
//! (possibly several) descended face incidences.

use crate::error::{descriptor_err, domain_err, Error, Result};
use crate::geometry::{contains, realize_morphism, Containment, RealizationPoint};
use crate::polysimplex::{
    morphism_from_maps, ComponentMap, MorphismClass, PSMorphism,
};
use crate::strata::{
    restriction_maps, validate_descriptor, CombinatorialChartData, PairDescriptor, StratumRecord,
};
use crate::rat::ExtRat;
use std::collections::{BTreeMap, BTreeSet};

/// The geometric face attached to a stratum, in its reference chart.
#[derive(Clone, Debug)]
pub struct CanonicalPolyhedron {
    pub stratum: String,
    pub chart: CombinatorialChartData,
}

impl CanonicalPolyhedron {
    pub fn dimension(&self) -> u32 {
        self.chart.shape().dimension()
    }
}

/// A point of the complex: coordinates in the canonical polyhedron of a
/// stratum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComplexPoint {
    pub stratum: String,
    pub point: RealizationPoint,
}

/// The dual complex of a validated descriptor: one face per stratum,
/// injective face embeddings for every order relation.
#[derive(Clone, Debug)]
pub struct StrictDualComplex {
    descriptor: PairDescriptor,
    /// `(x, y)` with `x <= y` maps to the embedding `chart(y) -> chart(x)`.
    embeddings: BTreeMap<(String, String), PSMorphism>,
}

impl StrictDualComplex {
    /// Validate the descriptor and precompute all face embeddings.
    pub fn build(descriptor: PairDescriptor) -> Result<Self> {
        let report = validate_descriptor(&descriptor);
        if !report.is_valid() {
            let axioms: BTreeSet<&str> =
                report.violations.iter().map(|v| v.axiom).collect();
            return descriptor_err(format!(
                "descriptor fails validation ({})",
                axioms.into_iter().collect::<Vec<_>>().join(", ")
            ));
        }
        let mut embeddings = BTreeMap::new();
        let ids: Vec<String> = descriptor.stratum_ids().iter().map(|s| s.to_string()).collect();
        for x in &ids {
            for y in &ids {
                if descriptor.leq(x, y)? {
                    let maps = restriction_maps(&descriptor, x, y)?;
                    embeddings.insert((x.clone(), y.clone()), maps.morphism);
                }
            }
        }
        Ok(StrictDualComplex {
            descriptor,
            embeddings,
        })
    }

    pub fn descriptor(&self) -> &PairDescriptor {
        &self.descriptor
    }

    pub fn face(&self, x: &str) -> Result<CanonicalPolyhedron> {
        let st = self.descriptor.stratum(x)?;
        Ok(CanonicalPolyhedron {
            stratum: st.id.clone(),
            chart: st.chart.clone(),
        })
    }

    /// The embedding of the face of `y` into the face of `x`, for `x <= y`.
    pub fn face_embedding(&self, x: &str, y: &str) -> Result<&PSMorphism> {
        self.embeddings
            .get(&(x.to_string(), y.to_string()))
            .ok_or_else(|| Error::Domain(format!("{x:?} is not below {y:?}")))
    }

    /// Strata whose faces make up the intersection of the faces of `x` and
    /// `y`: the common upper bounds.
    pub fn face_intersection(&self, x: &str, y: &str) -> Result<BTreeSet<String>> {
        let mut out = BTreeSet::new();
        for z in self.descriptor.stratum_ids() {
            if self.descriptor.leq(x, z)? && self.descriptor.leq(y, z)? {
                out.insert(z.to_string());
            }
        }
        Ok(out)
    }

    /// The unique stratum whose open face contains the point.
    pub fn open_face_of(&self, p: &ComplexPoint) -> Result<String> {
        let st = self.descriptor.stratum(&p.stratum)?;
        if contains(st.chart.shape(), &p.point)? == Containment::Outside {
            return domain_err("point lies outside its face");
        }
        let support = p.point.support();
        for y in self.descriptor.upper_set(&p.stratum)? {
            if self.descriptor.face_key_of(&p.stratum, y)? == support {
                return Ok(y.to_string());
            }
        }
        domain_err("no face matches the support pattern (invalid complex)")
    }

    /// Whether two points of the complex are identified by the gluing: some
    /// common upper stratum carries a point mapping onto both.
    pub fn points_equal(&self, p: &ComplexPoint, q: &ComplexPoint) -> Result<bool> {
        for z in self.face_intersection(&p.stratum, &q.stratum)? {
            let into_p = self.face_embedding(&p.stratum, &z)?;
            let into_q = self.face_embedding(&q.stratum, &z)?;
            if let Some(c) = unrealize(into_p, &p.point)? {
                if let Some(c2) = unrealize(into_q, &q.point)? {
                    if c == c2 {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }

    /// All representations of a point: for every stratum whose face contains
    /// it, the coordinates there. Includes the point itself.
    pub fn representations(&self, p: &ComplexPoint) -> Result<Vec<ComplexPoint>> {
        let z = self.open_face_of(p)?;
        let into_p = self.face_embedding(&p.stratum, &z)?;
        let c = unrealize(into_p, &p.point)?
            .ok_or_else(|| Error::Domain("open-face preimage missing (invalid complex)".into()))?;
        let mut out = Vec::new();
        for y in self.descriptor.stratum_ids() {
            if self.descriptor.leq(y, &z)? {
                let emb = self.face_embedding(y, &z)?;
                out.push(ComplexPoint {
                    stratum: y.to_string(),
                    point: realize_morphism(emb, &c)?,
                });
            }
        }
        Ok(out)
    }
}

/// Invert the realization of an injective morphism on a target point:
/// reconstructs the candidate preimage coordinates and verifies them.
pub fn unrealize(f: &PSMorphism, pt: &RealizationPoint) -> Result<Option<RealizationPoint>> {
    let source = f.source();
    let mut x = Vec::with_capacity(source.factor_count());
    for (i, fi) in f.factor_assignment().iter().enumerate() {
        let l = match fi {
            Some(l) => *l,
            None => return domain_err("cannot invert a morphism with a dropped factor"),
        };
        match &f.component_maps()[l] {
            ComponentMap::Embed(table) => {
                x.push(
                    table
                        .iter()
                        .map(|&j| pt.x()[l][j as usize].clone())
                        .collect::<Vec<ExtRat>>(),
                );
            }
            ComponentMap::Collapse(_) => unreachable!("assigned factor carries a table"),
        }
        let _ = i;
    }
    let mut y = vec![ExtRat::zero(); source.s() as usize];
    for (k, &gk) in f.orthant_map().iter().enumerate().skip(1) {
        if gk != 0 {
            y[k - 1] = pt.y()[gk as usize - 1].clone();
        }
    }
    let candidate = if pt.closure_mode() {
        RealizationPoint::new_closure(x, y)
    } else {
        match RealizationPoint::new(x, y) {
            Ok(c) => c,
            Err(_) => return Ok(None),
        }
    };
    match realize_morphism(f, &candidate) {
        Ok(img) if img == *pt => Ok(Some(candidate)),
        _ => Ok(None),
    }
}

/// The chart-change isomorphism between two charts of the same stratum,
/// derived from the two labelings.
pub fn chart_change(
    stratum: &StratumRecord,
    c: &CombinatorialChartData,
    c2: &CombinatorialChartData,
) -> Result<PSMorphism> {
    for chart in [c, c2] {
        if chart.x_labels() != stratum.a_x || chart.h_labels() != stratum.a_h {
            return domain_err("chart does not belong to the stratum");
        }
    }
    let blocks: BTreeSet<_> = c.gamma().iter().collect();
    let blocks2: BTreeSet<_> = c2.gamma().iter().collect();
    if blocks != blocks2 {
        return descriptor_err("charts of one stratum must carry the same divisor partition");
    }
    let mut g = vec![0u32];
    for block in c.gamma() {
        let pos = c2.gamma().iter().position(|b| b == block).unwrap();
        g.push(pos as u32 + 1);
    }
    let m = morphism_from_maps(
        c.shape(),
        c2.shape(),
        |tuple| {
            let label = c.label_of(tuple).expect("carrier tuple");
            c2.tuple_of(label).expect("same label set").clone()
        },
        g,
    )?;
    if m.classify() != MorphismClass::Isomorphism {
        return descriptor_err("chart change did not produce an isomorphism");
    }
    Ok(m)
}

/// Strata identification induced by an étale cover: classes of strata with
/// chart isomorphisms as witnesses.
#[derive(Clone, Debug)]
pub struct DescentData {
    pub base: StrictDualComplex,
    pub classes: Vec<Vec<String>>,
    /// Witness isomorphism `chart(a) -> chart(b)` per same-class ordered
    /// pair `(a, b)`; identities may be omitted.
    pub witnesses: BTreeMap<(String, String), PSMorphism>,
}

impl DescentData {
    fn witness(&self, a: &str, b: &str) -> Result<PSMorphism> {
        if a == b {
            let st = self.base.descriptor().stratum(a)?;
            return Ok(PSMorphism::identity(st.chart.shape()));
        }
        self.witnesses
            .get(&(a.to_string(), b.to_string()))
            .cloned()
            .ok_or_else(|| Error::Descriptor(format!("missing witness {a:?} -> {b:?}")))
    }
}

/// The coequalizer: faces are the descent classes; every face relation of
/// the base descends to a (possibly multi-valued) incidence between class
/// representatives.
#[derive(Clone, Debug)]
pub struct GluedComplex {
    descent: DescentData,
    reps: Vec<String>,
    class_of: BTreeMap<String, usize>,
    order: BTreeSet<(usize, usize)>,
    /// Descended embeddings `chart(rep(Q)) -> chart(rep(P))` for `P <= Q`;
    /// several when a face meets a class more than once.
    embeddings: BTreeMap<(usize, usize), Vec<PSMorphism>>,
}

pub fn coequalize(descent: DescentData) -> Result<GluedComplex> {
    let desc = descent.base.descriptor();
    let mut class_of = BTreeMap::new();
    for (ci, class) in descent.classes.iter().enumerate() {
        if class.is_empty() {
            return descriptor_err("empty descent class");
        }
        for id in class {
            desc.stratum(id)?;
            if class_of.insert(id.clone(), ci).is_some() {
                return descriptor_err(format!("stratum {id:?} appears in two classes"));
            }
        }
    }
    for id in desc.stratum_ids() {
        if !class_of.contains_key(id) {
            return descriptor_err(format!("stratum {id:?} belongs to no class"));
        }
    }
    // Witness groupoid: every same-class ordered pair has an isomorphism
    // witness with the right endpoints, and composition is closed.
    for class in &descent.classes {
        for a in class {
            for b in class {
                let w = descent.witness(a, b)?;
                let (sa, sb) = (desc.stratum(a)?, desc.stratum(b)?);
                if w.source() != sa.chart.shape() || w.target() != sb.chart.shape() {
                    return descriptor_err(format!("witness {a:?} -> {b:?} has wrong endpoints"));
                }
                if w.classify() != MorphismClass::Isomorphism {
                    return descriptor_err(format!("witness {a:?} -> {b:?} is not an isomorphism"));
                }
                for cc in class {
                    let wbc = descent.witness(b, cc)?;
                    let wac = descent.witness(a, cc)?;
                    if wbc.compose(&w)? != wac {
                        return descriptor_err(format!(
                            "witnesses are not closed under composition on ({a:?}, {b:?}, {cc:?})"
                        ));
                    }
                }
            }
        }
    }
    let reps: Vec<String> = descent
        .classes
        .iter()
        .map(|c| c.iter().min().unwrap().clone())
        .collect();
    // Quotient order: existential lift, then partial-order sanity.
    let k = descent.classes.len();
    let mut order = BTreeSet::new();
    for (i, _) in descent.classes.iter().enumerate() {
        order.insert((i, i));
    }
    for x in desc.stratum_ids() {
        for y in desc.stratum_ids() {
            if desc.leq(x, y)? {
                order.insert((class_of[x], class_of[y]));
            }
        }
    }
    for p in 0..k {
        for q in 0..k {
            if p != q && order.contains(&(p, q)) && order.contains(&(q, p)) {
                return descriptor_err("descent collapses the order: quotient is not antisymmetric");
            }
            for r in 0..k {
                if order.contains(&(p, q)) && order.contains(&(q, r)) && !order.contains(&(p, r)) {
                    return descriptor_err(
                        "order does not lift: a quotient chain has no upstairs witness",
                    );
                }
            }
        }
    }
    // Descend the embeddings through the witnesses.
    let mut embeddings: BTreeMap<(usize, usize), Vec<PSMorphism>> = BTreeMap::new();
    for x in desc.stratum_ids() {
        for y in desc.stratum_ids() {
            if !desc.leq(x, y)? {
                continue;
            }
            let (p, q) = (class_of[x], class_of[y]);
            let emb = descent.base.face_embedding(x, y)?;
            // chart(rep q) -> chart(y) -> chart(x) -> chart(rep p)
            let w_in = descent.witness(&reps[q], y)?;
            let w_out = descent.witness(x, &reps[p])?;
            let descended = w_out.compose(&emb.compose(&w_in)?)?;
            let entry = embeddings.entry((p, q)).or_default();
            if !entry.contains(&descended) {
                entry.push(descended);
            }
        }
    }
    Ok(GluedComplex {
        descent,
        reps,
        class_of,
        order,
        embeddings,
    })
}

impl GluedComplex {
    pub fn descent(&self) -> &DescentData {
        &self.descent
    }

    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn representative(&self, class: usize) -> &str {
        &self.reps[class]
    }

    pub fn class_of(&self, stratum: &str) -> Result<usize> {
        self.class_of
            .get(stratum)
            .copied()
            .ok_or_else(|| Error::Domain(format!("unknown stratum {stratum:?}")))
    }

    pub fn members(&self, class: usize) -> Vec<&str> {
        self.class_of
            .iter()
            .filter(|(_, &c)| c == class)
            .map(|(id, _)| id.as_str())
            .collect()
    }

    pub fn leq(&self, p: usize, q: usize) -> bool {
        self.order.contains(&(p, q))
    }

    /// The descended face incidences `chart(rep(q)) -> chart(rep(p))`.
    pub fn incidences(&self, p: usize, q: usize) -> &[PSMorphism] {
        self.embeddings
            .get(&(p, q))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// The projection: coordinates of a base point in its class
    /// representative's chart.
    pub fn project(&self, p: &ComplexPoint) -> Result<(usize, RealizationPoint)> {
        let class = self.class_of(&p.stratum)?;
        let w = self.descent.witness(&p.stratum, &self.reps[class])?;
        Ok((class, realize_morphism(&w, &p.point)?))
    }

    /// Equality in the quotient: the equivalence generated by the base glue
    /// relation and the witness identifications.
    pub fn points_equal(&self, p: &ComplexPoint, q: &ComplexPoint) -> Result<bool> {
        let orbit_p = self.orbit(p)?;
        if orbit_p.contains(q) {
            return Ok(true);
        }
        let orbit_q = self.orbit(q)?;
        Ok(orbit_p.intersection(&orbit_q).next().is_some())
    }

    /// All base points identified with `p` in the quotient.
    fn orbit(&self, p: &ComplexPoint) -> Result<BTreeSet<ComplexPoint>> {
        let mut seen = BTreeSet::new();
        let mut frontier = vec![p.clone()];
        while let Some(cur) = frontier.pop() {
            if !seen.insert(cur.clone()) {
                continue;
            }
            // Base glue: every representation on every containing face.
            for rep in self.descent.base.representations(&cur)? {
                if !seen.contains(&rep) {
                    frontier.push(rep);
                }
            }
            // Witness translates within the class.
            let class = self.class_of(&cur.stratum)?;
            for other in self.descent.classes[class].clone() {
                let w = self.descent.witness(&cur.stratum, &other)?;
                let moved = ComplexPoint {
                    stratum: other.clone(),
                    point: realize_morphism(&w, &cur.point)?,
                };
                if !seen.contains(&moved) {
                    frontier.push(moved);
                }
            }
        }
        Ok(seen)
    }
}
