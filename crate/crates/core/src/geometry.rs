//! Geometric realizations of extended poly-simplices.
//!
//! The realization of `[n, r, s]` is the product of the simplices
//! `{x_{i0} + ... + x_{in_i} = r_i}` with the orthant `R^s_{>=0}`. A factor
//! with color infinity realizes as the degenerate simplex: tuples in the
//! compactified half line with at least one infinite coordinate and no sum
//! constraint. Morphisms realize by coordinate pulling; collapsed factors pin
//! the full color mass on their collapse vertex.

use crate::error::{descriptor_err, domain_err, Result};
use crate::polysimplex::{ComponentMap, ExtendedPolySimplex, PSMorphism};
use crate::rat::{ExtRat, Rat};
use num::Signed;

/// A candidate point of a realization, with exact extended coordinates.
///
/// `x[i][j]` are the simplex coordinates of factor `i`, `y` the orthant
/// coordinates. In standard mode the orthant coordinates are finite; closure
/// mode admits infinite ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealizationPoint {
    x: Vec<Vec<ExtRat>>,
    y: Vec<ExtRat>,
    closure_mode: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Outside,
    Boundary,
    Interior,
}

impl RealizationPoint {
    pub fn new(x: Vec<Vec<ExtRat>>, y: Vec<ExtRat>) -> Result<Self> {
        if y.iter().any(ExtRat::is_infinite) {
            return descriptor_err("orthant coordinates must be finite in standard mode");
        }
        Ok(RealizationPoint {
            x,
            y,
            closure_mode: false,
        })
    }

    pub fn new_closure(x: Vec<Vec<ExtRat>>, y: Vec<ExtRat>) -> Self {
        RealizationPoint {
            x,
            y,
            closure_mode: true,
        }
    }

    /// Convenience: all-rational coordinates, standard mode.
    pub fn from_rats(x: Vec<Vec<Rat>>, y: Vec<Rat>) -> Self {
        RealizationPoint {
            x: x.into_iter()
                .map(|f| f.into_iter().map(ExtRat::Finite).collect())
                .collect(),
            y: y.into_iter().map(ExtRat::Finite).collect(),
            closure_mode: false,
        }
    }

    pub fn x(&self) -> &[Vec<ExtRat>] {
        &self.x
    }

    pub fn y(&self) -> &[ExtRat] {
        &self.y
    }

    pub fn closure_mode(&self) -> bool {
        self.closure_mode
    }

    fn shape_matches(&self, shape: &ExtendedPolySimplex) -> bool {
        self.x.len() == shape.factor_count()
            && self
                .x
                .iter()
                .zip(shape.base().factors())
                .all(|(xi, &ni)| xi.len() == ni as usize + 1)
            && self.y.len() == shape.s() as usize
    }

    /// The support pattern: per factor the set of vertices with nonzero
    /// coordinate, plus the set of nonzero orthant indices (1-based).
    pub fn support(&self) -> (Vec<Vec<u32>>, Vec<u32>) {
        let subsets = self
            .x
            .iter()
            .map(|xi| {
                xi.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, _)| j as u32)
                    .collect()
            })
            .collect();
        let t = self
            .y
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, _)| k as u32 + 1)
            .collect();
        (subsets, t)
    }
}

/// Membership of a point in the realization of `shape`, distinguishing the
/// open interior from the boundary.
pub fn contains(shape: &ExtendedPolySimplex, pt: &RealizationPoint) -> Result<Containment> {
    if !pt.shape_matches(shape) {
        return domain_err("point shape does not match the poly-simplex");
    }
    for (xi, ri) in pt.x.iter().zip(shape.colors()) {
        if xi.iter().any(|v| !v.is_nonnegative()) {
            return Ok(Containment::Outside);
        }
        if ri.is_infinite() {
            if !xi.iter().any(ExtRat::is_infinite) {
                return Ok(Containment::Outside);
            }
        } else {
            if xi.iter().any(ExtRat::is_infinite) {
                return Ok(Containment::Outside);
            }
            let sum = xi.iter().fold(ExtRat::zero(), |acc, v| acc.add(v));
            if sum != *ri {
                return Ok(Containment::Outside);
            }
        }
    }
    if pt.y.iter().any(|v| !v.is_nonnegative()) {
        return Ok(Containment::Outside);
    }
    let interior = pt
        .x
        .iter()
        .all(|xi| xi.iter().all(|v| !v.is_zero()))
        && pt.y.iter().all(|v| !v.is_zero());
    Ok(if interior {
        Containment::Interior
    } else {
        Containment::Boundary
    })
}

/// The realization of a morphism, applied to a point of the source.
pub fn realize_morphism(f: &PSMorphism, pt: &RealizationPoint) -> Result<RealizationPoint> {
    if contains(f.source(), pt)? == Containment::Outside {
        return domain_err("point lies outside the source realization");
    }
    let target = f.target();
    let mut hit = vec![None; target.factor_count()];
    for (i, fi) in f.factor_assignment().iter().enumerate() {
        if let Some(l) = *fi {
            hit[l] = Some(i);
        }
    }
    let mut x = Vec::with_capacity(target.factor_count());
    for (l, cm) in f.component_maps().iter().enumerate() {
        let nl = target.base().factors()[l] as usize;
        let mut u = vec![ExtRat::zero(); nl + 1];
        match cm {
            ComponentMap::Embed(table) => {
                let i = hit[l].unwrap();
                for (jp, &j) in table.iter().enumerate() {
                    u[j as usize] = pt.x[i][jp].clone();
                }
            }
            ComponentMap::Collapse(v) => {
                u[*v as usize] = target.colors()[l].clone();
            }
        }
        x.push(u);
    }
    let mut y = vec![ExtRat::zero(); target.s() as usize];
    for (k, &gk) in f.orthant_map().iter().enumerate().skip(1) {
        if gk != 0 {
            y[gk as usize - 1] = pt.y[k - 1].clone();
        }
    }
    Ok(RealizationPoint {
        x,
        y,
        closure_mode: pt.closure_mode,
    })
}

/// Exhaustive rational grid on a realization with finite colors: per factor
/// all coordinate tuples in `(1/denom) * Z` summing to the color, and every
/// combination of the supplied orthant values. Used by sampling-based checks.
pub fn grid_points(
    shape: &ExtendedPolySimplex,
    denom: u32,
    y_values: &[Rat],
) -> Result<Vec<RealizationPoint>> {
    fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
        if parts == 0 {
            return if total == 0 { vec![Vec::new()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        for first in 0..=total {
            for rest in compositions(total - first, parts - 1) {
                let mut c = vec![first];
                c.extend(rest);
                out.push(c);
            }
        }
        out
    }
    let mut factor_choices: Vec<Vec<Vec<Rat>>> = Vec::new();
    for (ri, &ni) in shape.colors().iter().zip(shape.base().factors()) {
        let r = ri
            .as_finite()
            .ok_or_else(|| crate::error::Error::Domain("grid needs finite colors".into()))?;
        let step = r / Rat::from_integer(denom.into());
        let choices = compositions(denom, ni as usize + 1)
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|k| &step * Rat::from_integer(k.into()))
                    .collect()
            })
            .collect();
        factor_choices.push(choices);
    }
    let mut xs: Vec<Vec<Vec<Rat>>> = vec![Vec::new()];
    for choices in &factor_choices {
        let mut next = Vec::with_capacity(xs.len() * choices.len());
        for prefix in &xs {
            for c in choices {
                let mut p = prefix.clone();
                p.push(c.clone());
                next.push(p);
            }
        }
        xs = next;
    }
    let mut ys: Vec<Vec<Rat>> = vec![Vec::new()];
    for _ in 0..shape.s() {
        let mut next = Vec::with_capacity(ys.len() * y_values.len());
        for prefix in &ys {
            for v in y_values {
                let mut p = prefix.clone();
                p.push(v.clone());
                next.push(p);
            }
        }
        ys = next;
    }
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in &xs {
        for y in &ys {
            out.push(RealizationPoint::from_rats(x.clone(), y.clone()));
        }
    }
    Ok(out)
}

/// A globally represented affine linear function `lambda + sum a_ij x_ij +
/// sum b_k y_k` with natural coefficients and nonnegative rational constant,
/// normalized so every factor has a zero coefficient somewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLinearFunction {
    lambda: Rat,
    a: Vec<Vec<u64>>,
    b: Vec<u64>,
}

impl AffineLinearFunction {
    /// Build and normalize for the given shape: per factor, the minimal
    /// coefficient is absorbed into the constant via the simplex relation
    /// `x_{i0} + ... + x_{in_i} = r_i`.
    pub fn new(
        shape: &ExtendedPolySimplex,
        lambda: Rat,
        mut a: Vec<Vec<u64>>,
        b: Vec<u64>,
    ) -> Result<Self> {
        if lambda.is_negative() {
            return descriptor_err("affine constant must be nonnegative");
        }
        if a.len() != shape.factor_count()
            || a.iter()
                .zip(shape.base().factors())
                .any(|(ai, &ni)| ai.len() != ni as usize + 1)
            || b.len() != shape.s() as usize
        {
            return descriptor_err("affine coefficient shape mismatch");
        }
        let mut lambda = lambda;
        for (ai, ri) in a.iter_mut().zip(shape.colors()) {
            let m = *ai.iter().min().unwrap_or(&0);
            if m > 0 {
                match ri.as_finite() {
                    Some(r) => {
                        for v in ai.iter_mut() {
                            *v -= m;
                        }
                        lambda += r * Rat::from_integer(m.into());
                    }
                    None => {
                        return descriptor_err(
                            "normalization over an infinite color would leave the value group",
                        )
                    }
                }
            }
        }
        Ok(AffineLinearFunction { lambda, a, b })
    }

    pub fn constant(shape: &ExtendedPolySimplex, lambda: Rat) -> Result<Self> {
        let a = shape
            .base()
            .factors()
            .iter()
            .map(|&ni| vec![0; ni as usize + 1])
            .collect();
        let b = vec![0; shape.s() as usize];
        AffineLinearFunction::new(shape, lambda, a, b)
    }

    pub fn lambda(&self) -> &Rat {
        &self.lambda
    }

    pub fn a(&self) -> &[Vec<u64>] {
        &self.a
    }

    pub fn b(&self) -> &[u64] {
        &self.b
    }
}

pub fn eval_affine(h: &AffineLinearFunction, pt: &RealizationPoint) -> Result<ExtRat> {
    if pt.x.len() != h.a.len()
        || pt
            .x
            .iter()
            .zip(&h.a)
            .any(|(xi, ai)| xi.len() != ai.len())
        || pt.y.len() != h.b.len()
    {
        return domain_err("affine function shape does not match the point");
    }
    let mut acc = ExtRat::Finite(h.lambda.clone());
    for (xi, ai) in pt.x.iter().zip(&h.a) {
        for (v, &c) in xi.iter().zip(ai) {
            acc = acc.add(&v.mul_nat(c));
        }
    }
    for (v, &c) in pt.y.iter().zip(&h.b) {
        acc = acc.add(&v.mul_nat(c));
    }
    Ok(acc)
}

/// Precomposition with the realization of a morphism:
/// `eval(pullback(f, h), pt) = eval(h, realize(f, pt))`.
pub fn pullback_affine(f: &PSMorphism, h: &AffineLinearFunction) -> Result<AffineLinearFunction> {
    let source = f.source();
    let target = f.target();
    if h.a.len() != target.factor_count() || h.b.len() != target.s() as usize {
        return domain_err("affine function does not live on the morphism target");
    }
    let mut lambda = h.lambda.clone();
    let mut a: Vec<Vec<u64>> = source
        .base()
        .factors()
        .iter()
        .map(|&ni| vec![0; ni as usize + 1])
        .collect();
    let mut hit = vec![None; target.factor_count()];
    for (i, fi) in f.factor_assignment().iter().enumerate() {
        if let Some(l) = *fi {
            hit[l] = Some(i);
        }
    }
    for (l, cm) in f.component_maps().iter().enumerate() {
        match cm {
            ComponentMap::Embed(table) => {
                let i = hit[l].unwrap();
                for (jp, &j) in table.iter().enumerate() {
                    a[i][jp] += h.a[l][j as usize];
                }
            }
            ComponentMap::Collapse(v) => {
                let coeff = h.a[l][*v as usize];
                if coeff > 0 {
                    match target.colors()[l].as_finite() {
                        Some(r) => lambda += r * Rat::from_integer(coeff.into()),
                        None => {
                            return descriptor_err(
                                "pullback across a collapsed infinite-color factor leaves the value group",
                            )
                        }
                    }
                }
            }
        }
    }
    let mut b = vec![0; source.s() as usize];
    for (k, &gk) in f.orthant_map().iter().enumerate().skip(1) {
        if gk != 0 {
            b[k - 1] = h.b[gk as usize - 1];
        }
    }
    AffineLinearFunction::new(source, lambda, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysimplex::PolySimplex;
    use crate::rat::{rat, rat_int};

    fn shape(n: &[u32], r: &[&str], s: u32) -> ExtendedPolySimplex {
        ExtendedPolySimplex::new(
            PolySimplex::new(n.to_vec()).unwrap(),
            r.iter().map(|v| v.parse().unwrap()).collect(),
            s,
        )
        .unwrap()
    }

    #[test]
    fn interior_boundary_outside() {
        let e = shape(&[1], &["1"], 0);
        let inside = RealizationPoint::from_rats(vec![vec![rat(1, 2), rat(1, 2)]], vec![]);
        assert_eq!(contains(&e, &inside).unwrap(), Containment::Interior);
        let edge = RealizationPoint::from_rats(vec![vec![rat_int(0), rat_int(1)]], vec![]);
        assert_eq!(contains(&e, &edge).unwrap(), Containment::Boundary);
        let off = RealizationPoint::from_rats(vec![vec![rat(1, 2), rat_int(1)]], vec![]);
        assert_eq!(contains(&e, &off).unwrap(), Containment::Outside);
    }

    #[test]
    fn degenerate_membership() {
        let e = shape(&[1], &["inf"], 0);
        let pt = RealizationPoint::new(
            vec![vec![ExtRat::Infinity, ExtRat::from_int(3)]],
            vec![],
        )
        .unwrap();
        assert_ne!(contains(&e, &pt).unwrap(), Containment::Outside);
        let finite = RealizationPoint::from_rats(vec![vec![rat_int(1), rat_int(3)]], vec![]);
        assert_eq!(contains(&e, &finite).unwrap(), Containment::Outside);
    }

    #[test]
    fn realize_collapse_pins_color() {
        let src = ExtendedPolySimplex::point(0);
        let tgt = shape(&[1], &["5/2"], 0);
        let m = PSMorphism::new(
            src.clone(),
            tgt.clone(),
            vec![],
            vec![ComponentMap::Collapse(0)],
            vec![0],
        )
        .unwrap();
        let img = realize_morphism(&m, &RealizationPoint::from_rats(vec![], vec![])).unwrap();
        assert_eq!(
            img,
            RealizationPoint::from_rats(vec![vec![rat(5, 2), rat_int(0)]], vec![])
        );
    }

    #[test]
    fn realize_embedding_pulls_coordinates() {
        let m = PSMorphism::new(
            shape(&[1], &["1"], 0),
            shape(&[2], &["1"], 0),
            vec![Some(0)],
            vec![ComponentMap::Embed(vec![0, 2])],
            vec![0],
        )
        .unwrap();
        let pt = RealizationPoint::from_rats(vec![vec![rat(1, 3), rat(2, 3)]], vec![]);
        let img = realize_morphism(&m, &pt).unwrap();
        assert_eq!(
            img,
            RealizationPoint::from_rats(vec![vec![rat(1, 3), rat_int(0), rat(2, 3)]], vec![])
        );
    }

    #[test]
    fn affine_eval_and_normalization() {
        let e = shape(&[1], &["1"], 1);
        let h = AffineLinearFunction::new(&e, rat_int(1), vec![vec![2, 3]], vec![3]).unwrap();
        // min coefficient 2 is absorbed: lambda = 1 + 2*1 = 3, a = (0, 1)
        assert_eq!(h.lambda(), &rat_int(3));
        assert_eq!(h.a(), &[vec![0, 1]]);
        let pt = RealizationPoint::from_rats(vec![vec![rat(1, 2), rat(1, 2)]], vec![rat_int(2)]);
        assert_eq!(
            eval_affine(&h, &pt).unwrap(),
            ExtRat::Finite(rat(19, 2)) // 3 + 1/2 + 6
        );
    }

    #[test]
    fn affine_on_orthant_only() {
        let e = ExtendedPolySimplex::point(1);
        let h = AffineLinearFunction::new(&e, rat_int(1), vec![], vec![3]).unwrap();
        let pt = RealizationPoint::from_rats(vec![], vec![rat_int(2)]);
        assert_eq!(eval_affine(&h, &pt).unwrap(), ExtRat::from_int(7));
    }

    #[test]
    fn pullback_matches_composition() {
        // collapse point -> [(1)] and an embedding [(1)] -> [(2)]
        let tgt = shape(&[2], &["1"], 1);
        let m = PSMorphism::new(
            shape(&[1], &["1"], 1),
            tgt.clone(),
            vec![Some(0)],
            vec![ComponentMap::Embed(vec![1, 2])],
            vec![0, 1],
        )
        .unwrap();
        let h = AffineLinearFunction::new(&tgt, rat(1, 2), vec![vec![1, 0, 4]], vec![2]).unwrap();
        let hb = pullback_affine(&m, &h).unwrap();
        for (x0, x1) in [(rat_int(0), rat_int(1)), (rat_int(1), rat_int(0)), (rat(1, 4), rat(3, 4))] {
            let pt = RealizationPoint::from_rats(vec![vec![x0, x1]], vec![rat(7, 3)]);
            assert_eq!(
                eval_affine(&hb, &pt).unwrap(),
                eval_affine(&h, &realize_morphism(&m, &pt).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn pullback_of_collapsed_coordinate_feeds_constant() {
        let tgt = shape(&[1], &["3"], 0);
        let m = PSMorphism::new(
            ExtendedPolySimplex::point(0),
            tgt.clone(),
            vec![],
            vec![ComponentMap::Collapse(0)],
            vec![0],
        )
        .unwrap();
        let h = AffineLinearFunction::new(&tgt, rat_int(0), vec![vec![1, 0]], vec![]).unwrap();
        let hb = pullback_affine(&m, &h).unwrap();
        assert_eq!(hb.lambda(), &rat_int(3));
    }
}
