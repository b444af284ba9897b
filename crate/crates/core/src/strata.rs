//! Stratification descriptors of poly-stable pairs.
//!
//! A pair is described combinatorially: the irreducible components of the
//! special fiber (of the ambient space and of the divisor, each divisor
//! component sitting inside exactly one ambient component), a finite poset of
//! strata, and per stratum a combinatorial chart — a colored poly-simplex
//! labeling of the components through the stratum plus a block partition of
//! the divisor components through it. Standard pairs get their descriptor
//! synthesized; arbitrary descriptors are validated axiom by axiom.
//!
//! Axioms are referred to by short code names (`StrataForm`, `BijThm`, ...)
//! in validation reports so that callers can match on them.

use crate::error::{descriptor_err, domain_err, Error, Result};
use crate::polysimplex::{
    enumerate_faces, factorize_metric, hamming, morphism_from_maps, ExtendedPolySimplex,
    IntegerMetricSpace, PSMorphism, PolySimplex,
};
use crate::rat::{ExtRat, Rat};
use num::Signed;
use std::collections::{BTreeMap, BTreeSet};

pub type Label = String;

/// The irreducible components of the special fiber of a pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentTable {
    x_components: Vec<Label>,
    h_components: Vec<Label>,
    container: BTreeMap<Label, Label>,
}

impl ComponentTable {
    pub fn new(
        x_components: Vec<Label>,
        h_components: Vec<Label>,
        container: BTreeMap<Label, Label>,
    ) -> Result<Self> {
        let xset: BTreeSet<_> = x_components.iter().collect();
        let hset: BTreeSet<_> = h_components.iter().collect();
        if xset.len() != x_components.len() || hset.len() != h_components.len() {
            return descriptor_err("component labels must be pairwise distinct");
        }
        if xset.intersection(&hset).next().is_some() {
            return descriptor_err("ambient and divisor component labels must be disjoint");
        }
        for h in &h_components {
            match container.get(h) {
                Some(x) if xset.contains(x) => {}
                _ => {
                    return descriptor_err(format!(
                        "divisor component {h:?} must lie in exactly one ambient component"
                    ))
                }
            }
        }
        if container.len() != h_components.len() {
            return descriptor_err("container map must be defined exactly on the divisor components");
        }
        Ok(ComponentTable {
            x_components,
            h_components,
            container,
        })
    }

    pub fn x_components(&self) -> &[Label] {
        &self.x_components
    }

    pub fn h_components(&self) -> &[Label] {
        &self.h_components
    }

    pub fn container(&self, h: &str) -> Option<&Label> {
        self.container.get(h)
    }
}

/// A combinatorial chart at a stratum: a poly-simplex labeling `alpha` of the
/// ambient components through the stratum and a numbering `gamma` of the
/// divisor block partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialChartData {
    shape: ExtendedPolySimplex,
    alpha: BTreeMap<Vec<u32>, Label>,
    gamma: Vec<BTreeSet<Label>>,
}

impl CombinatorialChartData {
    pub fn new(
        shape: ExtendedPolySimplex,
        alpha: BTreeMap<Vec<u32>, Label>,
        gamma: Vec<BTreeSet<Label>>,
    ) -> Result<Self> {
        if gamma.len() != shape.s() as usize {
            return descriptor_err("divisor block count must equal the orthant rank of the chart shape");
        }
        let carrier: BTreeSet<Vec<u32>> = shape.base().carrier().into_iter().collect();
        let keys: BTreeSet<Vec<u32>> = alpha.keys().cloned().collect();
        if carrier != keys {
            return descriptor_err("chart labeling must be defined exactly on the carrier");
        }
        let values: BTreeSet<&Label> = alpha.values().collect();
        if values.len() != alpha.len() {
            return descriptor_err("chart labeling must be injective");
        }
        Ok(CombinatorialChartData {
            shape,
            alpha,
            gamma,
        })
    }

    pub fn shape(&self) -> &ExtendedPolySimplex {
        &self.shape
    }

    pub fn alpha(&self) -> &BTreeMap<Vec<u32>, Label> {
        &self.alpha
    }

    pub fn label_of(&self, tuple: &[u32]) -> Option<&Label> {
        self.alpha.get(tuple)
    }

    pub fn tuple_of(&self, label: &str) -> Option<&Vec<u32>> {
        self.alpha
            .iter()
            .find(|(_, v)| v.as_str() == label)
            .map(|(k, _)| k)
    }

    /// Blocks of the divisor partition in chart numbering (block `k`
    /// corresponds to orthant index `k + 1`).
    pub fn gamma(&self) -> &[BTreeSet<Label>] {
        &self.gamma
    }

    /// Labels carried by the chart (the ambient components through the
    /// stratum).
    pub fn x_labels(&self) -> BTreeSet<Label> {
        self.alpha.values().cloned().collect()
    }

    pub fn h_labels(&self) -> BTreeSet<Label> {
        self.gamma.iter().flatten().cloned().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StratumKind {
    /// A stratum of the ambient space.
    X,
    /// A stratum of the divisor.
    H,
}

/// One stratum: its defining component set `A` (split into ambient and
/// divisor part) and a chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumRecord {
    pub id: String,
    pub kind: StratumKind,
    pub a_x: BTreeSet<Label>,
    pub a_h: BTreeSet<Label>,
    pub chart: CombinatorialChartData,
}

impl StratumRecord {
    /// Codimension as read off the defining data; equals the chart dimension
    /// for valid descriptors.
    pub fn codim(&self) -> u32 {
        self.chart.shape().dimension()
    }
}

/// A violation found by [`validate_descriptor`], keyed by a short axiom code.
#[derive(Clone, Debug)]
pub struct Violation {
    pub axiom: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, axiom: &'static str, detail: impl Into<String>) {
        self.violations.push(Violation {
            axiom,
            detail: detail.into(),
        });
    }
}

/// Combinatorial model of a (strictly) poly-stable pair: components, strata
/// and their closure order.
#[derive(Clone, Debug)]
pub struct PairDescriptor {
    components: ComponentTable,
    strata: Vec<StratumRecord>,
    index: BTreeMap<String, usize>,
    /// Reflexive-transitive closure of the input relation, as index pairs
    /// `(x, y)` with `x <= y` (x in the closure of y).
    order: BTreeSet<(usize, usize)>,
}

impl PairDescriptor {
    /// Assemble a descriptor from raw parts. The order relation is closed
    /// reflexively and transitively; deeper axioms are checked by
    /// [`validate_descriptor`].
    pub fn from_parts(
        components: ComponentTable,
        strata: Vec<StratumRecord>,
        order_pairs: &[(String, String)],
    ) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, st) in strata.iter().enumerate() {
            if index.insert(st.id.clone(), i).is_some() {
                return descriptor_err(format!("duplicate stratum id {:?}", st.id));
            }
        }
        let n = strata.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in order_pairs {
            let ia = *index
                .get(a)
                .ok_or_else(|| Error::Descriptor(format!("unknown stratum id {a:?} in order")))?;
            let ib = *index
                .get(b)
                .ok_or_else(|| Error::Descriptor(format!("unknown stratum id {b:?} in order")))?;
            leq[ia][ib] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        let order = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| i != j || true).map(move |j| (i, j)))
            .filter(|&(i, j)| leq[i][j])
            .collect();
        Ok(PairDescriptor {
            components,
            strata,
            index,
            order,
        })
    }

    pub fn components(&self) -> &ComponentTable {
        &self.components
    }

    pub fn strata(&self) -> &[StratumRecord] {
        &self.strata
    }

    pub fn stratum(&self, id: &str) -> Result<&StratumRecord> {
        self.index
            .get(id)
            .map(|&i| &self.strata[i])
            .ok_or_else(|| Error::Domain(format!("unknown stratum id {id:?}")))
    }

    pub fn stratum_ids(&self) -> Vec<&str> {
        self.strata.iter().map(|s| s.id.as_str()).collect()
    }

    pub fn leq(&self, x: &str, y: &str) -> Result<bool> {
        let ix = *self
            .index
            .get(x)
            .ok_or_else(|| Error::Domain(format!("unknown stratum id {x:?}")))?;
        let iy = *self
            .index
            .get(y)
            .ok_or_else(|| Error::Domain(format!("unknown stratum id {y:?}")))?;
        Ok(self.order.contains(&(ix, iy)))
    }

    /// All `y >= x`, in stratum list order.
    pub fn upper_set(&self, x: &str) -> Result<Vec<&str>> {
        let ix = *self
            .index
            .get(x)
            .ok_or_else(|| Error::Domain(format!("unknown stratum id {x:?}")))?;
        Ok(self
            .strata
            .iter()
            .enumerate()
            .filter(|(j, _)| self.order.contains(&(ix, *j)))
            .map(|(_, s)| s.id.as_str())
            .collect())
    }

    /// The face of `chart(x)` that a stratum `y >= x` occupies: per chart
    /// factor the vertex subset spanned by the components through `y`, plus
    /// the orthant indices of the divisor blocks met by `y`. Errors when the
    /// data does not describe a face (a validation matter).
    pub fn face_key_of(&self, x: &str, y: &str) -> Result<(Vec<Vec<u32>>, Vec<u32>)> {
        if !self.leq(x, y)? {
            return domain_err(format!("{x:?} is not below {y:?}"));
        }
        let sx = self.stratum(x)?;
        let sy = self.stratum(y)?;
        let p = sx.chart.shape().factor_count();
        let mut subsets: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); p];
        for w in &sy.a_x {
            let tuple = sx.chart.tuple_of(w).ok_or_else(|| {
                Error::Descriptor(format!(
                    "component {w:?} of stratum {y:?} is not labeled in the chart of {x:?}"
                ))
            })?;
            for (i, &v) in tuple.iter().enumerate() {
                subsets[i].insert(v);
            }
        }
        let product: usize = subsets.iter().map(|s| s.len()).product();
        if product != sy.a_x.len() {
            return descriptor_err(format!(
                "components of {y:?} do not span a face of the chart of {x:?}"
            ));
        }
        let mut t = BTreeSet::new();
        for block in sy.chart.gamma() {
            let mut hits = (0..sx.chart.gamma().len())
                .filter(|&k| block.is_subset(&sx.chart.gamma()[k]));
            let k = hits.next().ok_or_else(|| {
                Error::Descriptor(format!(
                    "divisor block of {y:?} lies in no block of {x:?}"
                ))
            })?;
            if hits.next().is_some() {
                return descriptor_err(format!(
                    "divisor block of {y:?} lies in two blocks of {x:?}"
                ));
            }
            t.insert(k as u32 + 1);
        }
        if t.len() != sy.chart.gamma().len() {
            return descriptor_err(format!(
                "divisor block map of {y:?} into {x:?} is not injective"
            ));
        }
        Ok((
            subsets
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect(),
            t.into_iter().collect(),
        ))
    }
}

fn subset_part(subsets: &[Vec<u32>]) -> String {
    subsets
        .iter()
        .map(|s| {
            s.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(".")
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// Deterministic stratum id for a standard pair, from the per-factor vertex
/// subsets and the divisor index subset.
pub fn standard_stratum_id(subsets: &[Vec<u32>], t: &[u32]) -> String {
    let mut id = format!("x[{}]", subset_part(subsets));
    if !t.is_empty() {
        id.push_str(&format!(
            "d[{}]",
            t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".")
        ));
    }
    id
}

/// Component label of the ambient component indexed by a carrier tuple.
pub fn standard_x_label(tuple: &[u32]) -> Label {
    format!(
        "X({})",
        tuple
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

/// Component label of the divisor component indexed by a carrier tuple and a
/// divisor coordinate `i` in `1..=s`.
pub fn standard_h_label(tuple: &[u32], i: u32) -> Label {
    format!(
        "H({}|{})",
        tuple
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(","),
        i
    )
}

/// Nonempty subsets of `{0..n}` in a fixed deterministic order.
fn nonempty_subsets(n: u32) -> Vec<Vec<u32>> {
    (1u64..(1u64 << (n + 1)))
        .map(|mask| (0..=n).filter(|&j| mask >> j & 1 == 1).collect())
        .collect()
}

/// Build the full stratification descriptor of the standard pair with torus
/// shape `n`, torus colors `r`, ambient ball dimension `d` and divisor rank
/// `s <= d`. Strata correspond to one nonempty vertex subset per factor plus
/// a subset of the divisor indices; the order is reverse inclusion of the
/// defining component sets.
pub fn standard_descriptor(n: &[u32], r: &[Rat], d: u32, s: u32) -> Result<PairDescriptor> {
    if s > d {
        return descriptor_err("divisor rank s must not exceed the ball dimension d");
    }
    if n.len() != r.len() {
        return descriptor_err("torus shape and color tuples must have equal length");
    }
    for ri in r {
        if !ri.is_positive() {
            return descriptor_err("torus colors must be positive elements of the value group");
        }
    }
    let base = PolySimplex::new(n.to_vec())?;
    let colors: Vec<ExtRat> = r.iter().cloned().map(ExtRat::Finite).collect();

    let carrier = base.carrier();
    let x_components: Vec<Label> = carrier.iter().map(|t| standard_x_label(t)).collect();
    let mut h_components = Vec::new();
    let mut container = BTreeMap::new();
    for i in 1..=s {
        for t in &carrier {
            let h = standard_h_label(t, i);
            container.insert(h.clone(), standard_x_label(t));
            h_components.push(h);
        }
    }
    let components = ComponentTable::new(x_components, h_components, container)?;

    // All subset families, odometer order over the factors.
    let mut families: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    for &ni in n {
        let choices = nonempty_subsets(ni);
        let mut next = Vec::with_capacity(families.len() * choices.len());
        for fam in &families {
            for c in &choices {
                let mut f = fam.clone();
                f.push(c.clone());
                next.push(f);
            }
        }
        families = next;
    }

    let mut strata = Vec::new();
    let mut order_pairs = Vec::new();
    let mut keys: Vec<(Vec<Vec<u32>>, Vec<u32>)> = Vec::new();
    for family in &families {
        for t_mask in 0u64..(1u64 << s) {
            let t: Vec<u32> = (1..=s).filter(|&k| t_mask >> (k - 1) & 1 == 1).collect();
            strata.push(standard_stratum(&base, &colors, family, &t)?);
            keys.push((family.clone(), t.clone()));
        }
    }
    for (i, (fam_i, t_i)) in keys.iter().enumerate() {
        for (j, (fam_j, t_j)) in keys.iter().enumerate() {
            if i == j {
                continue;
            }
            // strata[i] <= strata[j] iff A_j is contained in A_i.
            let sub = fam_j
                .iter()
                .zip(fam_i)
                .all(|(sj, si)| sj.iter().all(|v| si.contains(v)))
                && t_j.iter().all(|v| t_i.contains(v));
            if sub {
                order_pairs.push((strata[i].id.clone(), strata[j].id.clone()));
            }
        }
    }
    PairDescriptor::from_parts(components, strata, &order_pairs)
}

fn standard_stratum(
    base: &PolySimplex,
    colors: &[ExtRat],
    family: &[Vec<u32>],
    t: &[u32],
) -> Result<StratumRecord> {
    // Component tuples through the stratum: the product of the subsets.
    let mut tuples: Vec<Vec<u32>> = vec![Vec::new()];
    for subset in family {
        let mut next = Vec::with_capacity(tuples.len() * subset.len());
        for prefix in &tuples {
            for &v in subset {
                let mut t2 = prefix.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        tuples = next;
    }
    let a_x: BTreeSet<Label> = tuples.iter().map(|t| standard_x_label(t)).collect();
    let mut a_h = BTreeSet::new();
    for &i in t {
        for tup in &tuples {
            a_h.insert(standard_h_label(tup, i));
        }
    }

    // Chart: keep the factors with at least two chosen vertices.
    let mut n_chart = Vec::new();
    let mut colors_chart = Vec::new();
    let mut kept = Vec::new();
    for (i, subset) in family.iter().enumerate() {
        if subset.len() >= 2 {
            n_chart.push(subset.len() as u32 - 1);
            colors_chart.push(colors[i].clone());
            kept.push(i);
        }
    }
    let shape = ExtendedPolySimplex::new(
        PolySimplex::new(n_chart)?,
        colors_chart,
        t.len() as u32,
    )?;
    let mut alpha = BTreeMap::new();
    for chart_tuple in shape.base().carrier() {
        let mut full = Vec::with_capacity(family.len());
        let mut kept_pos = 0;
        for (i, subset) in family.iter().enumerate() {
            if kept.contains(&i) {
                full.push(subset[chart_tuple[kept_pos] as usize]);
                kept_pos += 1;
            } else {
                full.push(subset[0]);
            }
        }
        alpha.insert(chart_tuple, standard_x_label(&full));
    }
    let gamma = t
        .iter()
        .map(|&i| tuples.iter().map(|tup| standard_h_label(tup, i)).collect())
        .collect();
    let chart = CombinatorialChartData::new(shape, alpha, gamma)?;
    let _ = base;
    Ok(StratumRecord {
        id: standard_stratum_id(family, t),
        kind: if t.is_empty() {
            StratumKind::X
        } else {
            StratumKind::H
        },
        a_x,
        a_h,
        chart,
    })
}

/// Check every descriptor axiom, reporting violations by axiom code.
pub fn validate_descriptor(desc: &PairDescriptor) -> ValidationReport {
    let mut report = ValidationReport::default();
    let xset: BTreeSet<&Label> = desc.components.x_components.iter().collect();
    let hset: BTreeSet<&Label> = desc.components.h_components.iter().collect();

    for st in &desc.strata {
        // Component sets well formed.
        if st.a_x.is_empty() {
            report.push("StrataForm", format!("stratum {:?} lies in no ambient component", st.id));
        }
        for w in &st.a_x {
            if !xset.contains(w) {
                report.push("StrataForm", format!("stratum {:?} cites unknown ambient component {w:?}", st.id));
            }
        }
        for v in &st.a_h {
            if !hset.contains(v) {
                report.push("StrataForm", format!("stratum {:?} cites unknown divisor component {v:?}", st.id));
            }
        }
        // Nonemptiness criterion: either no divisor part, or the ambient
        // part consists exactly of the containers of the divisor part.
        if !st.a_h.is_empty() {
            let containers: BTreeSet<Label> = st
                .a_h
                .iter()
                .filter_map(|v| desc.components.container(v).cloned())
                .collect();
            if containers != st.a_x {
                report.push(
                    "StrataForm",
                    format!(
                        "stratum {:?}: ambient part must equal the containers of its divisor part",
                        st.id
                    ),
                );
            }
        }
        // Well-stratified: divisor strata and ambient strata are disjoint,
        // i.e. the kind tag matches the presence of a divisor part.
        let expected = if st.a_h.is_empty() {
            StratumKind::X
        } else {
            StratumKind::H
        };
        if st.kind != expected {
            report.push(
                "WellStrat",
                format!("stratum {:?} kind tag contradicts its divisor part", st.id),
            );
        }
        validate_chart(desc, st, &mut report);
    }

    // Antisymmetry of the closed order.
    for &(i, j) in &desc.order {
        if i != j && desc.order.contains(&(j, i)) {
            report.push(
                "StrataForm",
                format!(
                    "order is not antisymmetric between {:?} and {:?}",
                    desc.strata[i].id, desc.strata[j].id
                ),
            );
        }
    }
    // Order implies reverse inclusion of defining sets.
    for &(i, j) in &desc.order {
        let (sx, sy) = (&desc.strata[i], &desc.strata[j]);
        if !sy.a_x.is_subset(&sx.a_x) || !sy.a_h.is_subset(&sx.a_h) {
            report.push(
                "StrataForm",
                format!(
                    "{:?} <= {:?} but the defining sets do not reverse-include",
                    sx.id, sy.id
                ),
            );
        }
    }

    for st in &desc.strata {
        validate_upper_set(desc, st, &mut report);
    }
    validate_divisor_maps(desc, &mut report);
    report
}

fn validate_chart(desc: &PairDescriptor, st: &StratumRecord, report: &mut ValidationReport) {
    let chart = &st.chart;
    if chart.x_labels() != st.a_x {
        report.push(
            "ChartIsom",
            format!("chart of {:?} does not label exactly its ambient components", st.id),
        );
        return;
    }
    // Codimension from the defining data: each factor of the chart
    // contributes its vertex count minus one, each divisor block one.
    if chart.shape().dimension() != st.codim() {
        report.push("DimensionProp", format!("chart dimension mismatch at {:?}", st.id));
    }
    // The chart labeling must induce a poly-simplex metric of the chart's own
    // shape; recognized independently through the metric factorizer.
    let labels: Vec<&Label> = chart.alpha.values().collect();
    let tuples: Vec<&Vec<u32>> = chart.alpha.keys().collect();
    let dist = tuples
        .iter()
        .map(|a| tuples.iter().map(|b| hamming(a, b)).collect())
        .collect();
    match IntegerMetricSpace::new(
        labels.iter().map(|l| (*l).clone()).collect(),
        dist,
    )
    .ok()
    .and_then(|m| factorize_metric(&m))
    {
        Some((shape, _)) => {
            let mut got = shape.factors().to_vec();
            let mut want = chart.shape().base().factors().to_vec();
            got.sort_unstable();
            want.sort_unstable();
            if got != want {
                report.push(
                    "IsomorphIsometric",
                    format!("chart labeling of {:?} is not isometric to its shape", st.id),
                );
            }
        }
        None => report.push(
            "IsomorphIsometric",
            format!("chart labeling of {:?} induces no poly-simplex metric", st.id),
        ),
    }
    // Divisor blocks partition the divisor components through the stratum,
    // and each block meets each ambient component in exactly one divisor
    // component.
    let mut seen: BTreeSet<&Label> = BTreeSet::new();
    for block in chart.gamma() {
        if block.is_empty() {
            report.push("BijThm", format!("empty divisor block at {:?}", st.id));
        }
        for v in block {
            if !seen.insert(v) {
                report.push(
                    "BijThm",
                    format!("divisor component {v:?} appears in two blocks at {:?}", st.id),
                );
            }
        }
        for w in &st.a_x {
            let count = block
                .iter()
                .filter(|v| desc.components.container(v) == Some(w))
                .count();
            if count != 1 {
                report.push(
                    "BijThm",
                    format!(
                        "divisor block at {:?} meets ambient component {w:?} in {count} components instead of one",
                        st.id
                    ),
                );
            }
        }
    }
    let all: BTreeSet<&Label> = st.a_h.iter().collect();
    if seen != all {
        report.push(
            "BijThm",
            format!("divisor blocks at {:?} do not partition its divisor components", st.id),
        );
    }
}

fn validate_upper_set(desc: &PairDescriptor, st: &StratumRecord, report: &mut ValidationReport) {
    let faces = enumerate_faces(st.chart.shape());
    let ys = match desc.upper_set(&st.id) {
        Ok(v) => v,
        Err(_) => return,
    };
    if ys.len() != faces.len() {
        report.push(
            "FaceEmbStr",
            format!(
                "stratum {:?} has {} strata above it but its chart has {} faces",
                st.id,
                ys.len(),
                faces.len()
            ),
        );
    }
    let mut keys = BTreeSet::new();
    for y in &ys {
        match desc.face_key_of(&st.id, y) {
            Ok(key) => {
                // Dimension must match the face the key selects.
                let sy = desc.stratum(y).unwrap();
                let face_dim: u32 = key.0.iter().map(|s| s.len() as u32 - 1).sum::<u32>()
                    + key.1.len() as u32;
                if face_dim != sy.codim() {
                    report.push(
                        "DimensionProp",
                        format!("face of {:?} at {:?} has mismatched dimension", st.id, y),
                    );
                }
                if !keys.insert(key) {
                    report.push(
                        "FaceEmbStr",
                        format!("two strata above {:?} occupy the same face", st.id),
                    );
                }
                // The derived embedding must exist and respect colors.
                if let Err(e) = restriction_maps(desc, &st.id, y) {
                    report.push(
                        "ColorChangeProp",
                        format!("restriction from {:?} to {y:?} fails: {e}", st.id),
                    );
                }
            }
            Err(e) => report.push("FaceEmbStr", format!("{e}")),
        }
    }
}

fn validate_divisor_maps(desc: &PairDescriptor, report: &mut ValidationReport) {
    // Cocycle of the block-coarsening maps on all chains x <= y <= z.
    let ids = desc.stratum_ids();
    for x in &ids {
        for y in &ids {
            if !desc.leq(x, y).unwrap_or(false) {
                continue;
            }
            let rxy = match restriction_maps(desc, x, y) {
                Ok(r) => r,
                Err(_) => continue,
            };
            for z in &ids {
                if !desc.leq(y, z).unwrap_or(false) {
                    continue;
                }
                let (ryz, rxz) = match (restriction_maps(desc, y, z), restriction_maps(desc, x, z)) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => continue,
                };
                let composed: Vec<usize> =
                    ryz.j_map.iter().map(|&k| rxy.j_map[k]).collect();
                if composed != rxz.j_map {
                    report.push(
                        "DivInjection",
                        format!("block map cocycle fails on the chain {x:?} <= {y:?} <= {z:?}"),
                    );
                }
            }
        }
    }
}

/// Structure maps attached to a relation `x <= y`: component inclusions, the
/// derived injective poly-simplex morphism `chart(y) -> chart(x)`, the block
/// coarsening map `j` and its partial inverse `k`.
#[derive(Clone, Debug)]
pub struct RestrictionMaps {
    pub x_inclusion: BTreeSet<Label>,
    pub h_inclusion: BTreeSet<Label>,
    pub morphism: PSMorphism,
    /// Block index of `chart(x)` containing each block of `chart(y)`.
    pub j_map: Vec<usize>,
    /// Blocks of `chart(x)` meeting the divisor components through `y`,
    /// mapped to the block of `chart(y)` cut out by intersection.
    pub k_map: BTreeMap<usize, usize>,
}

pub fn restriction_maps(desc: &PairDescriptor, x: &str, y: &str) -> Result<RestrictionMaps> {
    if !desc.leq(x, y)? {
        return domain_err(format!("{x:?} is not below {y:?}"));
    }
    let sx = desc.stratum(x)?;
    let sy = desc.stratum(y)?;
    if !sy.a_x.is_subset(&sx.a_x) || !sy.a_h.is_subset(&sx.a_h) {
        return descriptor_err(format!("components of {y:?} do not restrict to {x:?}"));
    }
    // j: each block of chart(y) sits inside exactly one block of chart(x).
    let mut j_map = Vec::with_capacity(sy.chart.gamma().len());
    for block in sy.chart.gamma() {
        let mut hits =
            (0..sx.chart.gamma().len()).filter(|&k| block.is_subset(&sx.chart.gamma()[k]));
        let k = hits
            .next()
            .ok_or_else(|| Error::Descriptor(format!("divisor block of {y:?} lies in no block of {x:?}")))?;
        if hits.next().is_some() {
            return descriptor_err(format!("divisor block of {y:?} lies in two blocks of {x:?}"));
        }
        j_map.push(k);
    }
    let mut distinct = BTreeSet::new();
    if !j_map.iter().all(|k| distinct.insert(*k)) {
        return descriptor_err(format!("block coarsening from {y:?} into {x:?} is not injective"));
    }
    // k: intersect the blocks of chart(x) with the divisor components of y.
    let mut k_map = BTreeMap::new();
    for (k, block) in sx.chart.gamma().iter().enumerate() {
        let cut: BTreeSet<Label> = block.intersection(&sy.a_h).cloned().collect();
        if cut.is_empty() {
            continue;
        }
        let pos = sy
            .chart
            .gamma()
            .iter()
            .position(|b| *b == cut)
            .ok_or_else(|| {
                Error::Descriptor(format!(
                    "block of {x:?} does not cut out a block of {y:?}"
                ))
            })?;
        k_map.insert(k, pos);
    }
    // The injective morphism chart(y) -> chart(x) through the labelings.
    let mut g = vec![0u32];
    g.extend(j_map.iter().map(|&k| k as u32 + 1));
    let morphism = morphism_from_maps(
        sy.chart.shape(),
        sx.chart.shape(),
        |tuple| {
            let label = sy.chart.label_of(tuple).expect("carrier tuple");
            sx.chart
                .tuple_of(label)
                .expect("restricted component is labeled below")
                .clone()
        },
        g,
    )?;
    Ok(RestrictionMaps {
        x_inclusion: sy.a_x.clone(),
        h_inclusion: sy.a_h.clone(),
        morphism,
        j_map,
        k_map,
    })
}

/// The unique minimum of the descriptor (or of an upper set of it), if any.
pub fn least_stratum<'a>(
    desc: &'a PairDescriptor,
    restrict_to: Option<&[&str]>,
) -> Result<Option<&'a str>> {
    let ids: Vec<&str> = match restrict_to {
        Some(ids) => ids.to_vec(),
        None => desc.stratum_ids(),
    };
    for candidate in &ids {
        let mut is_min = true;
        for other in &ids {
            if !desc.leq(candidate, other)? {
                is_min = false;
                break;
            }
        }
        if is_min {
            return Ok(Some(desc.stratum(candidate)?.id.as_str()));
        }
    }
    Ok(None)
}
