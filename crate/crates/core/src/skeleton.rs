//! The exact non-archimedean engine for standard pairs: polynomials with
//! valued coefficients, shifted-monomial seminorm points, tropicalization
//! and its section, the deformation flow, reduction strata, banded
//! approximation levels, and closure membership.
//!
//! Coordinates of a model with factor sizes `n = (n_1..n_p)`, relation
//! constants `a`, and `d` disc coordinates (the first `s` cut out the
//! divisor) are written `T_{i0}..T_{in_i}` per factor (subject to
//! `∏_j T_{ij} = a_i`) and `T_1..T_d`.

use crate::error::{domain_err, Result};
use crate::field::Coeff;
use crate::geometry::{contains, Containment, RealizationPoint};
use crate::polysimplex::{ExtendedPolySimplex, PolySimplex};
use crate::rat::{rat_int, ExtRat, Rat};
use crate::strata::standard_stratum_id;
use num::Zero;
use std::collections::BTreeMap;

/// The ambient model: factor sizes, relation constants, disc coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardPairModel {
    n: Vec<u32>,
    a: Vec<Coeff>,
    d: u32,
    s: u32,
    closure: bool,
}

impl StandardPairModel {
    /// A standard model: every relation constant has finite positive
    /// valuation.
    pub fn new(n: Vec<u32>, a: Vec<Coeff>, d: u32, s: u32) -> Result<Self> {
        let model = StandardPairModel::new_closure(n, a, d, s)?;
        for ai in &model.a {
            if ai.is_zero() {
                return domain_err("relation constants must be nonzero outside closure mode");
            }
        }
        Ok(StandardPairModel {
            closure: false,
            ..model
        })
    }

    /// Closure mode: relation constants may vanish (infinite color).
    pub fn new_closure(n: Vec<u32>, a: Vec<Coeff>, d: u32, s: u32) -> Result<Self> {
        if a.len() != n.len() {
            return domain_err("one relation constant per factor");
        }
        if s > d {
            return domain_err("divisor coordinates exceed disc coordinates");
        }
        for ai in &a {
            match ai.val() {
                ExtRat::Finite(v) if v.is_zero() || v.is_negative_check() => {
                    return domain_err("relation constants must have positive valuation")
                }
                _ => {}
            }
        }
        Ok(StandardPairModel {
            n,
            a,
            d,
            s,
            closure: true,
        })
    }

    pub fn n(&self) -> &[u32] {
        &self.n
    }

    pub fn a(&self) -> &[Coeff] {
        &self.a
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn closure_mode(&self) -> bool {
        self.closure
    }

    /// The colors `r_i = val(a_i)`.
    pub fn r(&self) -> Vec<ExtRat> {
        self.a.iter().map(Coeff::val).collect()
    }

    /// The tropicalization range: the extended poly-simplex with this
    /// model's factor sizes, colors, and `s` orthant coordinates.
    pub fn shape(&self) -> Result<ExtendedPolySimplex> {
        ExtendedPolySimplex::new(PolySimplex::new(self.n.clone())?, self.r(), self.s)
    }
}

trait RatSignCheck {
    fn is_negative_check(&self) -> bool;
}

impl RatSignCheck for Rat {
    fn is_negative_check(&self) -> bool {
        use num::Signed;
        self.is_negative()
    }
}

/// A monomial exponent vector: per-factor torus exponents and disc
/// exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    pub tor: Vec<Vec<u32>>,
    pub disc: Vec<u32>,
}

impl Monomial {
    pub fn unit(model: &StandardPairModel) -> Monomial {
        Monomial {
            tor: model.n.iter().map(|&ni| vec![0; ni as usize + 1]).collect(),
            disc: vec![0; model.d as usize],
        }
    }

    fn matches(&self, model: &StandardPairModel) -> bool {
        self.tor.len() == model.n.len()
            && self
                .tor
                .iter()
                .zip(&model.n)
                .all(|(e, &ni)| e.len() == ni as usize + 1)
            && self.disc.len() == model.d as usize
    }
}

/// A polynomial with [`Coeff`] coefficients in normal form: no monomial is
/// divisible by the full product `T_{i0}⋯T_{in_i}` of any factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuedPolynomial {
    terms: BTreeMap<Monomial, Coeff>,
}

impl ValuedPolynomial {
    pub fn zero() -> Self {
        ValuedPolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(model: &StandardPairModel, c: Coeff) -> Self {
        ValuedPolynomial::from_terms(model, vec![(Monomial::unit(model), c)])
            .expect("unit monomial is always valid")
    }

    /// The torus coordinate `T_{ij}` (factor `i`, vertex `j`, 0-based).
    pub fn var_torus(model: &StandardPairModel, i: usize, j: usize) -> Result<Self> {
        let mut m = Monomial::unit(model);
        if i >= m.tor.len() || j >= m.tor[i].len() {
            return domain_err("torus coordinate out of range");
        }
        m.tor[i][j] = 1;
        ValuedPolynomial::from_terms(model, vec![(m, Coeff::one())])
    }

    /// The disc coordinate `T_j` (1-based; divisor when `j ≤ s`).
    pub fn var_disc(model: &StandardPairModel, j: usize) -> Result<Self> {
        let mut m = Monomial::unit(model);
        if j == 0 || j > m.disc.len() {
            return domain_err("disc coordinate out of range");
        }
        m.disc[j - 1] = 1;
        ValuedPolynomial::from_terms(model, vec![(m, Coeff::one())])
    }

    /// Build from raw terms, rewriting into normal form: each occurrence of
    /// a full factor product is replaced by the relation constant.
    pub fn from_terms(
        model: &StandardPairModel,
        raw: Vec<(Monomial, Coeff)>,
    ) -> Result<Self> {
        let mut terms: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (mut m, mut c) in raw {
            if !m.matches(model) {
                return domain_err("monomial does not match the model shape");
            }
            for (i, exps) in m.tor.iter_mut().enumerate() {
                let k = *exps.iter().min().expect("factor has vertices");
                if k > 0 {
                    for e in exps.iter_mut() {
                        *e -= k;
                    }
                    c = c.mul(&model.a[i].pow(k));
                }
            }
            if c.is_zero() {
                continue;
            }
            let entry = terms.entry(m).or_insert_with(Coeff::zero);
            *entry = entry.add(&c);
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(ValuedPolynomial { terms })
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ValuedPolynomial) -> ValuedPolynomial {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(Coeff::zero);
            *entry = entry.add(c);
        }
        terms.retain(|_, c| !c.is_zero());
        ValuedPolynomial { terms }
    }

    pub fn neg(&self) -> ValuedPolynomial {
        ValuedPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &ValuedPolynomial) -> ValuedPolynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, model: &StandardPairModel, other: &ValuedPolynomial) -> Result<ValuedPolynomial> {
        let mut raw = Vec::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = Monomial {
                    tor: m1
                        .tor
                        .iter()
                        .zip(&m2.tor)
                        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                        .collect(),
                    disc: m1.disc.iter().zip(&m2.disc).map(|(x, y)| x + y).collect(),
                };
                raw.push((m, c1.mul(c2)));
            }
        }
        ValuedPolynomial::from_terms(model, raw)
    }

    pub fn scale(&self, c: &Coeff) -> ValuedPolynomial {
        if c.is_zero() {
            return ValuedPolynomial::zero();
        }
        let mut terms: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (m, q) in &self.terms {
            let v = q.mul(c);
            if !v.is_zero() {
                terms.insert(m.clone(), v);
            }
        }
        ValuedPolynomial { terms }
    }
}

/// One disc coordinate of a point: center and radius valuation. Normal
/// form stores center 0 whenever the disc already contains 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscCoord {
    pub c: Coeff,
    pub u: ExtRat,
}

impl DiscCoord {
    pub fn new(c: Coeff, u: ExtRat) -> DiscCoord {
        let mut dc = DiscCoord { c, u };
        dc.normalize();
        dc
    }

    fn normalize(&mut self) {
        if self.u <= self.c.val() {
            self.c = Coeff::zero();
        }
    }

    /// The valuation of the coordinate at this point: `min(val c, u)`.
    pub fn value(&self) -> ExtRat {
        ExtRat::min(&self.c.val(), &self.u)
    }

    pub fn gauss() -> DiscCoord {
        DiscCoord {
            c: Coeff::zero(),
            u: ExtRat::zero(),
        }
    }
}

/// A shifted-monomial point: torus monomial weights summing to the colors,
/// plus a disc (center, radius valuation) per disc coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletalPoint {
    v: Vec<Vec<Rat>>,
    coords: Vec<DiscCoord>,
}

impl SkeletalPoint {
    pub fn new(model: &StandardPairModel, v: Vec<Vec<Rat>>, coords: Vec<DiscCoord>) -> Result<Self> {
        use num::Signed;
        if v.len() != model.n.len() || coords.len() != model.d as usize {
            return domain_err("point shape does not match the model");
        }
        for (i, vi) in v.iter().enumerate() {
            if vi.len() != model.n[i] as usize + 1 {
                return domain_err("torus weight count does not match the factor");
            }
            if vi.iter().any(Rat::is_negative) {
                return domain_err("torus weights must be nonnegative");
            }
            let sum: Rat = vi.iter().sum();
            if ExtRat::Finite(sum) != model.a[i].val() {
                return domain_err("torus weights must sum to the factor color");
            }
        }
        let coords: Vec<DiscCoord> = coords
            .into_iter()
            .map(|dc| DiscCoord::new(dc.c, dc.u))
            .collect();
        for (j, dc) in coords.iter().enumerate() {
            if !dc.u.is_nonnegative() || matches!(dc.c.val(), ExtRat::Finite(ref w) if w.is_negative())
            {
                return domain_err("disc centers and radii must have nonnegative valuation");
            }
            if !model.closure && (j as u32) < model.s && dc.value().is_infinite() {
                return domain_err("divisor coordinate vanishes identically at the point");
            }
        }
        Ok(SkeletalPoint { v, coords })
    }

    pub fn v(&self) -> &[Vec<Rat>] {
        &self.v
    }

    pub fn coords(&self) -> &[DiscCoord] {
        &self.coords
    }
}

fn binom_rat(e: u32, k: u32) -> Rat {
    let mut out = rat_int(1);
    for i in 0..k {
        out *= rat_int((e - i) as i64);
        out /= rat_int((i + 1) as i64);
    }
    out
}

/// Evaluate the valuation of a term map at torus weights `v` and disc
/// parameters `discs`: exact Taylor re-expansion around the disc centers,
/// then the minimum of `val(coefficient) + Σ exponents · weights`.
fn eval_terms(
    v: &[Vec<Rat>],
    discs: &[DiscCoord],
    terms: &BTreeMap<Monomial, Coeff>,
) -> ExtRat {
    // Group the re-expanded terms by (torus monomial, shifted-disc exponent)
    // so that cancellation between equal monomials is exact.
    let mut expanded: BTreeMap<(Vec<Vec<u32>>, Vec<u32>), Coeff> = BTreeMap::new();
    for (m, c) in terms {
        let mut parts: Vec<(Vec<u32>, Coeff)> = vec![(Vec::new(), c.clone())];
        for (j, &mu) in m.disc.iter().enumerate() {
            let mut next = Vec::new();
            for (kappa, coef) in parts {
                if discs[j].c.is_zero() {
                    let mut k2 = kappa.clone();
                    k2.push(mu);
                    next.push((k2, coef));
                    continue;
                }
                for kj in 0..=mu {
                    let scale = discs[j].c.pow(mu - kj).scale(&binom_rat(mu, kj));
                    let term = coef.mul(&scale);
                    if term.is_zero() {
                        continue;
                    }
                    let mut k2 = kappa.clone();
                    k2.push(kj);
                    next.push((k2, term));
                }
            }
            parts = next;
        }
        for (kappa, coef) in parts {
            let key = (m.tor.clone(), kappa);
            let entry = expanded.entry(key).or_insert_with(Coeff::zero);
            *entry = entry.add(&coef);
        }
    }
    let mut best = ExtRat::Infinity;
    for ((tor, kappa), coef) in &expanded {
        if coef.is_zero() {
            continue;
        }
        let mut weight = Rat::zero();
        for (ti, vi) in tor.iter().zip(v) {
            for (&e, w) in ti.iter().zip(vi) {
                weight += rat_int(e as i64) * w;
            }
        }
        let mut value = coef.val().add(&ExtRat::Finite(weight));
        for (&kj, dc) in kappa.iter().zip(discs) {
            value = value.add(&dc.u.mul_nat(kj as u64));
        }
        best = ExtRat::min(&best, &value);
    }
    best
}

/// The valuation `val |f(x)| = −log|f(x)|` of a polynomial at a point.
pub fn seminorm_eval(
    model: &StandardPairModel,
    x: &SkeletalPoint,
    f: &ValuedPolynomial,
) -> Result<ExtRat> {
    for m in f.terms.keys() {
        if !m.matches(model) {
            return domain_err("polynomial does not match the model shape");
        }
    }
    Ok(eval_terms(&x.v, &x.coords, &f.terms))
}

/// The coordinate record of a point: torus weights and the valuations of
/// the divisor coordinates, as a realization point of the model's shape.
pub fn trop(model: &StandardPairModel, x: &SkeletalPoint) -> Result<RealizationPoint> {
    let xs: Vec<Vec<ExtRat>> = x
        .v
        .iter()
        .map(|vi| vi.iter().map(|w| ExtRat::Finite(w.clone())).collect())
        .collect();
    let mut y = Vec::new();
    for dc in &x.coords[..model.s as usize] {
        let val = dc.value();
        if val.is_infinite() && !model.closure {
            return domain_err("divisor coordinate vanishes identically at the point");
        }
        y.push(val);
    }
    if model.closure {
        Ok(RealizationPoint::new_closure(xs, y))
    } else {
        RealizationPoint::new(xs, y)
    }
}

/// The monomial-point section of [`trop`]: centers 0, divisor radii from
/// the orthant coordinates, Gauss discs on the remaining coordinates.
pub fn sigma(model: &StandardPairModel, w: &RealizationPoint) -> Result<SkeletalPoint> {
    let shape = model.shape()?;
    if contains(&shape, w)? == Containment::Outside {
        return domain_err("point lies outside the model's poly-simplex");
    }
    let mut v = Vec::new();
    for wi in w.x() {
        let mut vi = Vec::new();
        for c in wi {
            match c.as_finite() {
                Some(q) => vi.push(q.clone()),
                None => return domain_err("degenerate torus coordinates have no section"),
            }
        }
        v.push(vi);
    }
    let mut coords = Vec::new();
    for yj in w.y() {
        coords.push(DiscCoord::new(Coeff::zero(), yj.clone()));
    }
    for _ in model.s..model.d {
        coords.push(DiscCoord::gauss());
    }
    SkeletalPoint::new(model, v, coords)
}

/// The retraction onto the skeleton: `tau = sigma ∘ trop`.
pub fn tau(model: &StandardPairModel, x: &SkeletalPoint) -> Result<SkeletalPoint> {
    sigma(model, &trop(model, x)?)
}

/// Whether a point lies on the skeleton (is fixed by the retraction).
pub fn is_skeleton_point(model: &StandardPairModel, x: &SkeletalPoint) -> Result<bool> {
    Ok(tau(model, x)? == *x)
}

/// The deformation at parameter `τ ∈ [0, ∞]` (`τ = −log t`): torus weights
/// unchanged, divisor radii shrunk to `min(u, τ + val c)`, remaining disc
/// radii shrunk to `min(u, τ)`.
pub fn flow(model: &StandardPairModel, x: &SkeletalPoint, t: &ExtRat) -> Result<SkeletalPoint> {
    if !t.is_nonnegative() {
        return domain_err("flow parameter must be nonnegative");
    }
    let mut coords = Vec::new();
    for (j, dc) in x.coords.iter().enumerate() {
        let u = if (j as u32) < model.s {
            ExtRat::min(&dc.u, &t.add(&dc.c.val()))
        } else {
            ExtRat::min(&dc.u, t)
        };
        coords.push(DiscCoord::new(dc.c.clone(), u));
    }
    SkeletalPoint::new(model, x.v.clone(), coords)
}

/// The parameter `τ*` above which the flow fixes the point; the trajectory
/// is injective on `[0, τ*]`.
pub fn flow_injectivity_window(model: &StandardPairModel, x: &SkeletalPoint) -> ExtRat {
    let mut out = ExtRat::zero();
    for (j, dc) in x.coords.iter().enumerate() {
        let threshold = if (j as u32) < model.s {
            match (dc.c.val(), &dc.u) {
                // Center 0: the radius update is min(u, τ + ∞) = u, fixed.
                (ExtRat::Infinity, _) => ExtRat::zero(),
                (ExtRat::Finite(_), ExtRat::Infinity) => ExtRat::Infinity,
                (ExtRat::Finite(vc), ExtRat::Finite(u)) => ExtRat::Finite(u - vc),
            }
        } else {
            dc.u.clone()
        };
        out = ExtRat::max(&out, &threshold);
    }
    out
}

/// The per-term exponents in the unit-group directions: one direction per
/// torus coordinate `T_{ij}` with `j ≥ 1` (the vertex-0 coordinate absorbs
/// the relation, cleared by `clear[i]`), one per disc coordinate.
fn direction_exponents(model: &StandardPairModel, clear: &[u32], m: &Monomial) -> Vec<u32> {
    let mut dirs = Vec::new();
    for (i, ti) in m.tor.iter().enumerate() {
        for &e in &ti[1..] {
            dirs.push(e + clear[i] - ti[0]);
        }
    }
    dirs.extend_from_slice(&m.disc);
    let _ = model;
    dirs
}

/// Per-factor clearing exponents: the largest vertex-0 exponent of any
/// term, so every direction exponent is nonnegative.
fn clearing_exponents(model: &StandardPairModel, terms: &BTreeMap<Monomial, Coeff>) -> Vec<u32> {
    let mut clear = vec![0u32; model.n.len()];
    for m in terms.keys() {
        for (i, ti) in m.tor.iter().enumerate() {
            clear[i] = clear[i].max(ti[0]);
        }
    }
    clear
}

/// Rewrite a polynomial into the chart where every non-divisor disc
/// coordinate `T_j` is replaced by `1 − S_j`; returns the rewritten terms
/// (the `disc` exponents beyond `s` now refer to `S_j`) and the point's
/// disc parameters in the same chart.
fn to_unit_chart(
    model: &StandardPairModel,
    x: &SkeletalPoint,
    f: &ValuedPolynomial,
) -> Result<(BTreeMap<Monomial, Coeff>, Vec<DiscCoord>)> {
    let mut raw: Vec<(Monomial, Coeff)> = Vec::new();
    for (m, c) in &f.terms {
        let mut parts: Vec<(Vec<u32>, Coeff)> = vec![(m.disc[..model.s as usize].to_vec(), c.clone())];
        for &mu in &m.disc[model.s as usize..] {
            let mut next = Vec::new();
            for (exps, coef) in parts {
                // (1 − S)^mu = Σ_k binom(mu,k) (−1)^k S^k
                for k in 0..=mu {
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    let q = binom_rat(mu, k) * rat_int(sign);
                    let term = coef.scale(&q);
                    if term.is_zero() {
                        continue;
                    }
                    let mut e2 = exps.clone();
                    e2.push(k);
                    next.push((e2, term));
                }
            }
            parts = next;
        }
        for (exps, coef) in parts {
            raw.push((
                Monomial {
                    tor: m.tor.clone(),
                    disc: exps,
                },
                coef,
            ));
        }
    }
    let rewritten = ValuedPolynomial::from_terms(model, raw)?;
    let mut discs = x.coords[..model.s as usize].to_vec();
    for dc in &x.coords[model.s as usize..] {
        discs.push(DiscCoord::new(Coeff::one().sub(&dc.c), dc.u.clone()));
    }
    Ok((rewritten.terms, discs))
}

fn odometer(bounds: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        let mut next = Vec::new();
        for prefix in out {
            for k in 0..=b {
                let mut p = prefix.clone();
                p.push(k);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// The valuation of `f` at the unit-group translate of `x` with parameter
/// `τ`: minimum over direction multi-indices `ν` of the seminorm of the
/// `ν`-th Hasse derivative plus `|ν|·τ`.
pub fn star_eval(
    model: &StandardPairModel,
    x: &SkeletalPoint,
    t: &ExtRat,
    f: &ValuedPolynomial,
) -> Result<ExtRat> {
    if !t.is_nonnegative() {
        return domain_err("flow parameter must be nonnegative");
    }
    let (terms, discs) = to_unit_chart(model, x, f)?;
    if t.is_infinite() {
        // t = 0 in multiplicative form: the translate is the identity.
        return Ok(eval_terms(&x.v, &discs, &terms));
    }
    let clear = clearing_exponents(model, &terms);
    let mut bounds: Vec<u32> = Vec::new();
    for m in terms.keys() {
        let dirs = direction_exponents(model, &clear, m);
        if bounds.is_empty() {
            bounds = dirs;
        } else {
            for (b, e) in bounds.iter_mut().zip(dirs) {
                *b = (*b).max(e);
            }
        }
    }
    let mut best = ExtRat::Infinity;
    for nu in odometer(&bounds) {
        let mut h: BTreeMap<Monomial, Coeff> = BTreeMap::new();
        for (m, c) in &terms {
            let dirs = direction_exponents(model, &clear, m);
            if dirs.iter().zip(&nu).any(|(&e, &k)| k > e) {
                continue;
            }
            let mut q = rat_int(1);
            for (&e, &k) in dirs.iter().zip(&nu) {
                q *= binom_rat(e, k);
            }
            let coef = c.scale(&q);
            if coef.is_zero() {
                continue;
            }
            let entry = h.entry(m.clone()).or_insert_with(Coeff::zero);
            *entry = entry.add(&coef);
        }
        let total: u64 = nu.iter().map(|&k| k as u64).sum();
        let value = eval_terms(&x.v, &discs, &h).add(&t.mul_nat(total));
        best = ExtRat::min(&best, &value);
    }
    Ok(best)
}

/// Independent check of [`star_eval`]: substitute a fresh valuation-`τ`
/// unit `1 + θ` into every unit-group direction, expand the product
/// symbolically, and take the minimum over `θ`-exponents of the coefficient
/// seminorm plus `|κ|·τ`.
pub fn generic_unit_oracle(
    model: &StandardPairModel,
    x: &SkeletalPoint,
    t: &ExtRat,
    f: &ValuedPolynomial,
) -> Result<ExtRat> {
    if !t.is_nonnegative() {
        return domain_err("flow parameter must be nonnegative");
    }
    let (terms, discs) = to_unit_chart(model, x, f)?;
    if t.is_infinite() {
        return Ok(eval_terms(&x.v, &discs, &terms));
    }
    let clear = clearing_exponents(model, &terms);
    let mut grouped: BTreeMap<Vec<u32>, BTreeMap<Monomial, Coeff>> = BTreeMap::new();
    for (m, c) in &terms {
        let dirs = direction_exponents(model, &clear, m);
        // Expand ∏_dir (1 + θ_dir)^{e_dir} by repeated multiplication.
        let mut expansion: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        expansion.insert(vec![0; dirs.len()], rat_int(1));
        for (pos, &e) in dirs.iter().enumerate() {
            for _ in 0..e {
                let mut next: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
                for (kappa, q) in &expansion {
                    *next.entry(kappa.clone()).or_insert_with(Rat::zero) += q;
                    let mut k2 = kappa.clone();
                    k2[pos] += 1;
                    *next.entry(k2).or_insert_with(Rat::zero) += q;
                }
                expansion = next;
            }
        }
        for (kappa, q) in expansion {
            let coef = c.scale(&q);
            if coef.is_zero() {
                continue;
            }
            let slot = grouped.entry(kappa).or_default();
            let entry = slot.entry(m.clone()).or_insert_with(Coeff::zero);
            *entry = entry.add(&coef);
        }
    }
    let mut best = ExtRat::Infinity;
    for (kappa, h) in &grouped {
        let total: u64 = kappa.iter().map(|&k| k as u64).sum();
        let value = eval_terms(&x.v, &discs, h).add(&t.mul_nat(total));
        best = ExtRat::min(&best, &value);
    }
    Ok(best)
}

/// The stratum of the model's standard descriptor containing the reduction
/// of the point, plus whether the point is generic over its stratum (every
/// disc coordinate a center-0 disc).
pub fn reduction_stratum(model: &StandardPairModel, x: &SkeletalPoint) -> Result<(String, bool)> {
    let mut subsets = Vec::new();
    for vi in &x.v {
        let si: Vec<u32> = vi
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(j, _)| j as u32)
            .collect();
        subsets.push(si);
    }
    let t: Vec<u32> = x.coords[..model.s as usize]
        .iter()
        .enumerate()
        .filter(|(_, dc)| dc.value() > ExtRat::zero())
        .map(|(j, _)| j as u32 + 1)
        .collect();
    let generic = x.coords.iter().all(|dc| dc.c.is_zero());
    Ok((standard_stratum_id(&subsets, &t), generic))
}

/// Whether the point lies in the level-`ε` band: every divisor coordinate
/// valuation at most `ε` (valuations, so small `ε` means a thin band).
pub fn in_band(model: &StandardPairModel, x: &SkeletalPoint, eps_val: &Rat) -> bool {
    x.coords[..model.s as usize]
        .iter()
        .all(|dc| dc.value() <= ExtRat::Finite(eps_val.clone()))
}

/// Whether the point lies on the level-`ε` skeleton: a retraction fixed
/// point inside the level band.
pub fn is_skeleton_of_level(
    model: &StandardPairModel,
    x: &SkeletalPoint,
    eps_val: &Rat,
) -> Result<bool> {
    Ok(is_skeleton_point(model, x)? && in_band(model, x, eps_val))
}

/// The inclusion of the level-`ε` annulus simplex into the level-`ε'` one:
/// `(x_0, x_1) ↦ (x_0 + ε' − ε, x_1)` on `Δ((1), (ε), 0)`.
pub fn level_inclusion(
    eps_val: &Rat,
    eps2_val: &Rat,
    p: &RealizationPoint,
) -> Result<RealizationPoint> {
    use num::Signed;
    if (eps2_val - eps_val).is_negative() {
        return domain_err("target level must be at least the source level");
    }
    let shape = ExtendedPolySimplex::new(
        PolySimplex::new(vec![1])?,
        vec![ExtRat::Finite(eps_val.clone())],
        0,
    )?;
    if contains(&shape, p)? == Containment::Outside {
        return domain_err("point lies outside the source annulus simplex");
    }
    let x0 = p.x()[0][0].add(&ExtRat::Finite(eps2_val - eps_val));
    RealizationPoint::new(vec![vec![x0, p.x()[0][1].clone()]], vec![])
}

/// Membership of an extended coordinate record in the closure: finite
/// orthant coordinates land in the open part, an infinite one lands in the
/// boundary divisor part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    InS,
    InSH,
    Outside,
}

pub fn closure_membership(model: &StandardPairModel, p: &RealizationPoint) -> Result<Membership> {
    let shape = model.shape()?;
    if p.y().len() != model.s as usize {
        return domain_err("orthant coordinate count does not match the model");
    }
    if contains(&shape, p)? == Containment::Outside {
        return Ok(Membership::Outside);
    }
    if p.y().iter().any(ExtRat::is_infinite) {
        Ok(Membership::InSH)
    } else {
        Ok(Membership::InS)
    }
}
