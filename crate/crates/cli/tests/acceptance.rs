//! Acceptance gate: one check per release criterion, each printing a single
//! PASS/FAIL line. All arithmetic is exact; any mismatch fails the build.

use polyskel::complex::{
    chart_change, coequalize, ComplexPoint, DescentData, StrictDualComplex,
};
use polyskel::field::Coeff;
use polyskel::geometry::{grid_points, realize_morphism, RealizationPoint};
use polyskel::polysimplex::{enumerate_faces, face_for, PSMorphism};
use polyskel::rat::{rat, rat_int, ExtRat, Rat};
use polyskel::skeleton::{
    closure_membership, flow, generic_unit_oracle, in_band, is_skeleton_of_level, level_inclusion,
    reduction_stratum, seminorm_eval, sigma, star_eval, tau, trop, DiscCoord, Membership, Monomial,
    SkeletalPoint, StandardPairModel, ValuedPolynomial,
};
use polyskel::strata::{
    standard_descriptor, standard_stratum_id, CombinatorialChartData, PairDescriptor,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;

fn run_criterion(
    failures: &mut Vec<String>,
    number: u32,
    name: &str,
    body: impl FnOnce() -> Result<(), String>,
) {
    match body() {
        Ok(()) => println!("[PASS] criterion {number}: {name}"),
        Err(msg) => {
            println!("[FAIL] criterion {number}: {name}: {msg}");
            failures.push(format!("criterion {number} ({name}): {msg}"));
        }
    }
}

fn check(ok: bool, msg: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

/// Independent enumerator of strata identifiers: every choice of one
/// nonempty vertex subset per relation factor together with a subset of the
/// divisor branches.
fn brute_force_ids(n: &[u32], s: u32) -> BTreeSet<String> {
    let mut families: Vec<Vec<Vec<u32>>> = vec![Vec::new()];
    for &ni in n {
        let mut next = Vec::new();
        for mask in 1u64..(1u64 << (ni + 1)) {
            let subset: Vec<u32> = (0..=ni).filter(|&j| mask >> j & 1 == 1).collect();
            for fam in &families {
                let mut f = fam.clone();
                f.push(subset.clone());
                next.push(f);
            }
        }
        families = next;
    }
    let mut out = BTreeSet::new();
    for fam in &families {
        for t_mask in 0u64..(1u64 << s) {
            let t: Vec<u32> = (1..=s).filter(|&k| t_mask >> (k - 1) & 1 == 1).collect();
            out.insert(standard_stratum_id(fam, &t));
        }
    }
    out
}

fn corpus() -> Vec<PairDescriptor> {
    vec![
        standard_descriptor(&[2], &[rat_int(1)], 1, 1).unwrap(),
        standard_descriptor(&[2], &[rat_int(1)], 0, 0).unwrap(),
        standard_descriptor(&[1], &[rat_int(1)], 0, 0).unwrap(),
        standard_descriptor(&[1, 1], &[rat_int(1), rat_int(2)], 2, 1).unwrap(),
        standard_descriptor(&[1], &[rat_int(2)], 2, 2).unwrap(),
    ]
}

fn criterion_1() -> Result<(), String> {
    let big = standard_descriptor(&[2], &[rat_int(1)], 1, 1).map_err(|e| e.to_string())?;
    check(big.strata().len() == 14, "expected 14 strata on ((2),(1),1,1)")?;
    let small = standard_descriptor(&[2], &[rat_int(1)], 0, 0).map_err(|e| e.to_string())?;
    check(small.strata().len() == 7, "expected 7 strata on ((2),(1),0,0)")?;
    for (desc, n, s) in [(&big, vec![2u32], 1u32), (&small, vec![2], 0)] {
        let ids: BTreeSet<String> = desc.stratum_ids().iter().map(|s| s.to_string()).collect();
        check(
            ids == brute_force_ids(&n, s),
            "descriptor ids differ from the brute-force enumeration",
        )?;
    }
    Ok(())
}

fn criterion_2() -> Result<(), String> {
    for desc in corpus() {
        for st in desc.strata() {
            let shape = st.chart.shape();
            let faces = enumerate_faces(shape);
            let upper = desc.upper_set(&st.id).map_err(|e| e.to_string())?;
            check(
                upper.len() == faces.len(),
                &format!("|upper set| != |faces| at {}", st.id),
            )?;
            let mut images = BTreeSet::new();
            for y in &upper {
                let (fam, t) = desc.face_key_of(&st.id, y).map_err(|e| e.to_string())?;
                let face = face_for(shape, &fam, &t);
                check(
                    face.shape.dimension() == desc.stratum(y).map_err(|e| e.to_string())?.codim(),
                    &format!("face dimension mismatch for {} above {}", y, st.id),
                )?;
                images.insert(face.embedding.image_key());
            }
            check(
                images.len() == upper.len(),
                &format!("face assignment not injective at {}", st.id),
            )?;
        }
    }
    Ok(())
}

/// A second chart of the same stratum: the labeling composed with the
/// per-factor vertex reversal (a shape automorphism), divisor blocks kept.
fn reversed_chart(c: &CombinatorialChartData) -> CombinatorialChartData {
    let carrier = c.shape().base().carrier();
    let n = c.shape().base().factors().to_vec();
    let mut alpha = BTreeMap::new();
    for tuple in &carrier {
        let mirrored: Vec<u32> = tuple.iter().zip(&n).map(|(&v, &ni)| ni - v).collect();
        alpha.insert(tuple.clone(), c.label_of(&mirrored).unwrap().clone());
    }
    CombinatorialChartData::new(c.shape().clone(), alpha, c.gamma().to_vec()).unwrap()
}

fn criterion_3() -> Result<(), String> {
    let desc = standard_descriptor(&[2], &[rat_int(1)], 1, 1).map_err(|e| e.to_string())?;
    for st in desc.strata() {
        let c0 = st.chart.clone();
        let c1 = reversed_chart(&c0);
        let c2 = c1.clone();
        let h01 = chart_change(st, &c0, &c1).map_err(|e| e.to_string())?;
        let h12 = chart_change(st, &c1, &c2).map_err(|e| e.to_string())?;
        let h02 = chart_change(st, &c0, &c2).map_err(|e| e.to_string())?;
        check(
            h12.compose(&h01).map_err(|e| e.to_string())? == h02,
            &format!("cocycle identity fails at {}", st.id),
        )?;
        check(
            chart_change(st, &c0, &c0).map_err(|e| e.to_string())?
                == PSMorphism::identity(c0.shape()),
            &format!("self chart change is not the identity at {}", st.id),
        )?;
    }
    Ok(())
}

fn criterion_4() -> Result<(), String> {
    let desc = standard_descriptor(&[2], &[rat_int(1)], 0, 0).map_err(|e| e.to_string())?;
    let complex = StrictDualComplex::build(desc).map_err(|e| e.to_string())?;
    let desc = complex.descriptor();
    let ids: Vec<String> = desc.stratum_ids().iter().map(|s| s.to_string()).collect();
    let mut points: Vec<ComplexPoint> = Vec::new();
    let mut by_stratum: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for id in &ids {
        let shape = desc.stratum(id).map_err(|e| e.to_string())?.chart.shape().clone();
        for p in grid_points(&shape, 4, &[]).map_err(|e| e.to_string())? {
            by_stratum.entry(id.clone()).or_default().push(points.len());
            points.push(ComplexPoint {
                stratum: id.clone(),
                point: p,
            });
        }
    }
    let m = points.len();
    let mut eq = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            eq[i][j] = complex
                .points_equal(&points[i], &points[j])
                .map_err(|e| e.to_string())?;
        }
    }
    for i in 0..m {
        check(eq[i][i], "points_equal is not reflexive")?;
        for j in 0..m {
            check(eq[i][j] == eq[j][i], "points_equal is not symmetric")?;
        }
    }
    for i in 0..m {
        for j in 0..m {
            if !eq[i][j] {
                continue;
            }
            for k in 0..m {
                if eq[j][k] {
                    check(eq[i][k], "points_equal is not transitive")?;
                }
            }
        }
    }
    // Pointwise intersection of two faces equals the union of their common
    // upper faces, sampled on the same grid.
    for x in &ids {
        for y in &ids {
            let mut lhs = BTreeSet::new();
            for &i in &by_stratum[x] {
                if by_stratum[y].iter().any(|&j| eq[i][j]) {
                    lhs.insert(i);
                }
            }
            let mut rhs = BTreeSet::new();
            for z in &ids {
                if !(desc.leq(x, z).map_err(|e| e.to_string())?
                    && desc.leq(y, z).map_err(|e| e.to_string())?)
                {
                    continue;
                }
                let emb = complex.face_embedding(x, z).map_err(|e| e.to_string())?;
                for &k in &by_stratum[z] {
                    let image =
                        realize_morphism(emb, &points[k].point).map_err(|e| e.to_string())?;
                    for &i in &by_stratum[x] {
                        if points[i].point == image {
                            rhs.insert(i);
                        }
                    }
                }
            }
            check(
                lhs == rhs,
                &format!("grid intersection of {x} and {y} differs from the common upper faces"),
            )?;
        }
    }
    Ok(())
}

fn nodal_glued() -> Result<polyskel::complex::GluedComplex, String> {
    let desc = standard_descriptor(&[1], &[rat_int(1)], 0, 0).map_err(|e| e.to_string())?;
    let base = StrictDualComplex::build(desc).map_err(|e| e.to_string())?;
    let point_shape = base
        .descriptor()
        .stratum("x[0]")
        .map_err(|e| e.to_string())?
        .chart
        .shape()
        .clone();
    let mut witnesses = BTreeMap::new();
    witnesses.insert(
        ("x[0]".to_string(), "x[1]".to_string()),
        PSMorphism::identity(&point_shape),
    );
    witnesses.insert(
        ("x[1]".to_string(), "x[0]".to_string()),
        PSMorphism::identity(&point_shape),
    );
    coequalize(DescentData {
        base,
        classes: vec![
            vec!["x[0]".to_string(), "x[1]".to_string()],
            vec!["x[0.1]".to_string()],
        ],
        witnesses,
    })
    .map_err(|e| e.to_string())
}

fn criterion_5() -> Result<(), String> {
    let glued = nodal_glued()?;
    check(glued.class_count() == 2, "expected exactly two classes")?;
    let vc = glued.class_of("x[0]").map_err(|e| e.to_string())?;
    let ec = glued.class_of("x[0.1]").map_err(|e| e.to_string())?;
    check(
        glued.members(vc).len() == 2 && glued.members(ec).len() == 1,
        "class sizes differ from one doubled vertex and one edge",
    )?;
    check(
        glued.incidences(ec, vc).len() == 2,
        "the loop edge must meet its vertex class twice",
    )?;
    let vertex = |id: &str| ComplexPoint {
        stratum: id.to_string(),
        point: RealizationPoint::from_rats(vec![], vec![]),
    };
    // The fiber over the glued vertex is the union of the two open vertex
    // faces of the base.
    check(
        glued
            .points_equal(&vertex("x[0]"), &vertex("x[1]"))
            .map_err(|e| e.to_string())?,
        "the two base vertices must project to the same point",
    )?;
    let edge_shape = glued
        .descent()
        .base
        .descriptor()
        .stratum("x[0.1]")
        .map_err(|e| e.to_string())?
        .chart
        .shape()
        .clone();
    let interior: Vec<ComplexPoint> = grid_points(&edge_shape, 4, &[])
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|p| p.support().0[0].len() == 2)
        .map(|p| ComplexPoint {
            stratum: "x[0.1]".to_string(),
            point: p,
        })
        .collect();
    for (i, p) in interior.iter().enumerate() {
        for (j, q) in interior.iter().enumerate() {
            check(
                glued.points_equal(p, q).map_err(|e| e.to_string())? == (i == j),
                "projection is not injective on the open edge",
            )?;
        }
        for v in ["x[0]", "x[1]"] {
            check(
                !glued.points_equal(p, &vertex(v)).map_err(|e| e.to_string())?,
                "an interior edge point must not hit the vertex class",
            )?;
        }
    }
    Ok(())
}

fn annulus_model() -> StandardPairModel {
    StandardPairModel::new(vec![1], vec![Coeff::t_pow(rat_int(1))], 0, 0).unwrap()
}

fn disc_model() -> StandardPairModel {
    StandardPairModel::new(vec![], vec![], 2, 1).unwrap()
}

fn mixed_model() -> StandardPairModel {
    StandardPairModel::new(vec![1], vec![Coeff::t_pow(rat_int(2))], 2, 1).unwrap()
}

fn sample_coeff(rng: &mut ChaCha8Rng, allow_zero: bool) -> Coeff {
    loop {
        let mut c = Coeff::zero();
        for _ in 0..rng.gen_range(0..3) {
            let q = rat(rng.gen_range(-5..=5), rng.gen_range(1..=3));
            let e = rat(rng.gen_range(0..=6), rng.gen_range(1..=2));
            c = c.add(&Coeff::term(q, e));
        }
        if allow_zero || !c.is_zero() {
            return c;
        }
    }
}

fn sample_poly(rng: &mut ChaCha8Rng, model: &StandardPairModel) -> ValuedPolynomial {
    let mut raw = Vec::new();
    for _ in 0..rng.gen_range(1..=4) {
        let mut m = Monomial::unit(model);
        for ti in m.tor.iter_mut() {
            for e in ti.iter_mut() {
                *e = rng.gen_range(0..=2);
            }
        }
        for e in m.disc.iter_mut() {
            *e = rng.gen_range(0..=2);
        }
        raw.push((m, sample_coeff(rng, true)));
    }
    ValuedPolynomial::from_terms(model, raw).unwrap()
}

fn sample_weights(rng: &mut ChaCha8Rng, model: &StandardPairModel) -> Vec<Vec<Rat>> {
    let mut v = Vec::new();
    for (i, &ni) in model.n().iter().enumerate() {
        let r = model.a()[i].val().as_finite().unwrap().clone();
        let mut cuts: Vec<Rat> = (0..ni).map(|_| &r * rat(rng.gen_range(0..=4), 4)).collect();
        cuts.sort();
        let mut vi = Vec::new();
        let mut prev = rat_int(0);
        for c in cuts {
            vi.push(&c - &prev);
            prev = c;
        }
        vi.push(&r - &prev);
        v.push(vi);
    }
    v
}

fn sample_point(rng: &mut ChaCha8Rng, model: &StandardPairModel) -> SkeletalPoint {
    let v = sample_weights(rng, model);
    let mut coords = Vec::new();
    for j in 0..model.d() {
        let u = if rng.gen_bool(0.3) {
            ExtRat::Infinity
        } else {
            ExtRat::Finite(rat(rng.gen_range(0..=6), rng.gen_range(1..=2)))
        };
        let c = if rng.gen_bool(0.5) {
            Coeff::zero()
        } else {
            let mut c = sample_coeff(rng, false);
            if let ExtRat::Finite(vc) = c.val() {
                if vc < rat_int(0) {
                    c = c.mul(&Coeff::t_pow(-vc));
                }
            }
            c
        };
        if j < model.s() && c.is_zero() && u.is_infinite() {
            coords.push(DiscCoord::new(c, ExtRat::Finite(rat_int(3))));
        } else {
            coords.push(DiscCoord::new(c, u));
        }
    }
    SkeletalPoint::new(model, v, coords).unwrap()
}

fn criterion_6() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for model in [annulus_model(), disc_model(), mixed_model()] {
        for _ in 0..500 {
            let x = sample_point(&mut rng, &model);
            let f = sample_poly(&mut rng, &model);
            let g = sample_poly(&mut rng, &model);
            let vf = seminorm_eval(&model, &x, &f).map_err(|e| e.to_string())?;
            let vg = seminorm_eval(&model, &x, &g).map_err(|e| e.to_string())?;
            let prod = f.mul(&model, &g).map_err(|e| e.to_string())?;
            let vp = seminorm_eval(&model, &x, &prod).map_err(|e| e.to_string())?;
            check(vp == vf.add(&vg), "valuation is not multiplicative")?;
            let vs = seminorm_eval(&model, &x, &f.add(&g)).map_err(|e| e.to_string())?;
            let floor = ExtRat::min(&vf, &vg);
            check(
                ExtRat::min(&vs, &floor) == floor,
                "ultrametric lower bound violated",
            )?;
            if vf != vg {
                check(vs == floor, "ultrametric equality for distinct valuations violated")?;
            }
        }
    }
    Ok(())
}

fn sample_shape_point(rng: &mut ChaCha8Rng, model: &StandardPairModel) -> RealizationPoint {
    let v = sample_weights(rng, model);
    let x = v
        .into_iter()
        .map(|vi| vi.into_iter().map(ExtRat::Finite).collect())
        .collect();
    let y = (0..model.s())
        .map(|_| ExtRat::Finite(rat(rng.gen_range(0..=6), rng.gen_range(1..=2))))
        .collect();
    RealizationPoint::new(x, y).unwrap()
}

fn criterion_7() -> Result<(), String> {
    let model = mixed_model();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let grid = [
        ExtRat::Infinity,
        ExtRat::from_int(5),
        ExtRat::from_int(2),
        ExtRat::from_int(1),
        ExtRat::Finite(rat(1, 2)),
        ExtRat::zero(),
    ];
    for _ in 0..200 {
        let w = sample_shape_point(&mut rng, &model);
        let section = sigma(&model, &w).map_err(|e| e.to_string())?;
        check(
            trop(&model, &section).map_err(|e| e.to_string())? == w,
            "trop does not invert sigma",
        )?;
        for t in &grid {
            check(
                flow(&model, &section, t).map_err(|e| e.to_string())? == section,
                "flow moves a skeleton point",
            )?;
        }
        let x = sample_point(&mut rng, &model);
        let r = tau(&model, &x).map_err(|e| e.to_string())?;
        check(
            tau(&model, &r).map_err(|e| e.to_string())? == r,
            "retraction is not idempotent",
        )?;
        check(
            flow(&model, &x, &ExtRat::Infinity).map_err(|e| e.to_string())? == x,
            "flow at the initial parameter is not the identity",
        )?;
        check(
            flow(&model, &x, &ExtRat::zero()).map_err(|e| e.to_string())? == r,
            "flow at the terminal parameter is not the retraction",
        )?;
    }
    Ok(())
}

fn criterion_8() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let taus = [
        ExtRat::zero(),
        ExtRat::Finite(rat(1, 2)),
        ExtRat::from_int(1),
        ExtRat::from_int(2),
        ExtRat::from_int(5),
        ExtRat::Infinity,
    ];
    let mut total = 0;
    for model in [annulus_model(), disc_model(), mixed_model()] {
        for _ in 0..80 {
            let x = sample_point(&mut rng, &model);
            let t = taus[rng.gen_range(0..taus.len())].clone();
            let f = sample_poly(&mut rng, &model);
            let moved = flow(&model, &x, &t).map_err(|e| e.to_string())?;
            let direct = seminorm_eval(&model, &moved, &f).map_err(|e| e.to_string())?;
            let star = star_eval(&model, &x, &t, &f).map_err(|e| e.to_string())?;
            let oracle = generic_unit_oracle(&model, &x, &t, &f).map_err(|e| e.to_string())?;
            check(
                direct == star && star == oracle,
                "flowed seminorm, star product, and substitution oracle disagree",
            )?;
            total += 1;
        }
    }
    check(total >= 200, "too few sampled triples")?;
    Ok(())
}

fn criterion_9() -> Result<(), String> {
    let model = mixed_model();
    let shape = model.shape().map_err(|e| e.to_string())?;
    let mut saw_interior = false;
    for w in grid_points(&shape, 3, &[rat_int(0), rat_int(1), rat_int(2)])
        .map_err(|e| e.to_string())?
    {
        let x = sigma(&model, &w).map_err(|e| e.to_string())?;
        let (id, generic) = reduction_stratum(&model, &x).map_err(|e| e.to_string())?;
        let (fam, t) = w.support();
        check(
            id == standard_stratum_id(&fam, &t) && generic,
            "reduction does not land in the open face's stratum",
        )?;
        if fam[0].len() == 2 && t.len() == 1 {
            saw_interior = true;
            check(
                id == standard_stratum_id(&[vec![0, 1]], &[1]),
                "interior point does not reduce to the minimal stratum",
            )?;
        }
    }
    check(saw_interior, "grid missed the interior")?;
    Ok(())
}

fn criterion_10() -> Result<(), String> {
    // Level shifts compose along three nested annulus levels.
    let (e1, e2, e3) = (rat_int(1), rat_int(2), rat_int(5));
    let level_shape = polyskel::polysimplex::ExtendedPolySimplex::new(
        polyskel::polysimplex::PolySimplex::new(vec![1]).map_err(|e| e.to_string())?,
        vec![ExtRat::Finite(e1.clone())],
        0,
    )
    .map_err(|e| e.to_string())?;
    for p in grid_points(&level_shape, 4, &[]).map_err(|e| e.to_string())? {
        let via = level_inclusion(
            &e2,
            &e3,
            &level_inclusion(&e1, &e2, &p).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        let direct = level_inclusion(&e1, &e3, &p).map_err(|e| e.to_string())?;
        check(via == direct, "level shifts do not compose")?;
        check(
            level_inclusion(&e1, &e1, &p).map_err(|e| e.to_string())? == p,
            "trivial level shift is not the identity",
        )?;
    }
    // Restriction identity: membership at a small level is membership at a
    // larger level cut down to the small band.
    let model = mixed_model();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..200 {
        let x = sample_point(&mut rng, &model);
        for (lo, hi) in [(&e1, &e2), (&e1, &e3), (&e2, &e3)] {
            let small = is_skeleton_of_level(&model, &x, lo).map_err(|e| e.to_string())?;
            let large = is_skeleton_of_level(&model, &x, hi).map_err(|e| e.to_string())?;
            check(
                small == (large && in_band(&model, &x, lo)),
                "level restriction identity violated",
            )?;
        }
    }
    Ok(())
}

fn criterion_11() -> Result<(), String> {
    let model =
        StandardPairModel::new_closure(vec![], vec![], 2, 2).map_err(|e| e.to_string())?;
    let values = [
        ExtRat::zero(),
        ExtRat::from_int(1),
        ExtRat::Finite(rat(5, 2)),
        ExtRat::Infinity,
    ];
    for y0 in &values {
        for y1 in &values {
            let p = RealizationPoint::new_closure(vec![], vec![y0.clone(), y1.clone()]);
            let got = closure_membership(&model, &p).map_err(|e| e.to_string())?;
            let want = if y0.is_infinite() || y1.is_infinite() {
                Membership::InSH
            } else {
                Membership::InS
            };
            check(got == want, "closure classification differs on the quarter plane")?;
        }
    }
    let outside = RealizationPoint::new_closure(
        vec![],
        vec![ExtRat::Finite(rat_int(-1)), ExtRat::zero()],
    );
    check(
        closure_membership(&model, &outside).map_err(|e| e.to_string())? == Membership::Outside,
        "negative coordinates must fall outside",
    )?;
    Ok(())
}

fn run_cli(args: &[&str], input: &std::path::Path, output: &std::path::Path) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_polyskel"))
        .args(args)
        .arg("--input")
        .arg(input)
        .arg("--output")
        .arg(output)
        .status()
        .map_err(|e| e.to_string())?;
    check(status.success(), &format!("command {args:?} failed"))
}

fn criterion_12() -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = dir.path().join("pair.json");
    std::fs::write(
        &input,
        r#"{"kind": "standard", "n": [2], "r": ["1"], "d": 1, "s": 1}"#,
    )
    .map_err(|e| e.to_string())?;
    let out1 = dir.path().join("complex1.json");
    let out2 = dir.path().join("complex2.json");
    run_cli(&["complex"], &input, &out1)?;
    run_cli(&["complex"], &input, &out2)?;
    let bytes1 = std::fs::read(&out1).map_err(|e| e.to_string())?;
    check(
        bytes1 == std::fs::read(&out2).map_err(|e| e.to_string())?,
        "reruns are not byte-identical",
    )?;
    // Round trip: feed the exported face lattice's descriptor back in and
    // rebuild; ids, faces, and embeddings must reproduce exactly.
    let doc: serde_json::Value = serde_json::from_slice(&bytes1).map_err(|e| e.to_string())?;
    let reinput = dir.path().join("reparsed.json");
    std::fs::write(
        &reinput,
        serde_json::to_vec(&doc["descriptor"]).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let out3 = dir.path().join("complex3.json");
    run_cli(&["complex"], &reinput, &out3)?;
    check(
        bytes1 == std::fs::read(&out3).map_err(|e| e.to_string())?,
        "reparsed descriptor does not rebuild the same lattice",
    )?;
    // A sampled-output command is deterministic too.
    let task = dir.path().join("flow.json");
    std::fs::write(
        &task,
        r#"{"model": {"n": [1], "a": ["t^2"], "d": 2, "s": 1},
            "point": {"v": [["1", "1"]], "coords": [{"c": "t^2", "u": "inf"}, {"c": "0", "u": "inf"}]},
            "taus": ["inf", "3", "1", "0"]}"#,
    )
    .map_err(|e| e.to_string())?;
    let csv1 = dir.path().join("flow1.csv");
    let csv2 = dir.path().join("flow2.csv");
    run_cli(&["--format", "csv", "skeleton", "flow"], &task, &csv1)?;
    run_cli(&["--format", "csv", "skeleton", "flow"], &task, &csv2)?;
    check(
        std::fs::read(&csv1).map_err(|e| e.to_string())?
            == std::fs::read(&csv2).map_err(|e| e.to_string())?,
        "trajectory reruns are not byte-identical",
    )?;
    Ok(())
}

#[test]
fn acceptance() {
    let mut failures = Vec::new();
    run_criterion(&mut failures, 1, "strata counts", criterion_1);
    run_criterion(&mut failures, 2, "stratum-face correspondence", criterion_2);
    run_criterion(&mut failures, 3, "chart cocycles", criterion_3);
    run_criterion(&mut failures, 4, "gluing soundness", criterion_4);
    run_criterion(&mut failures, 5, "coequalizer", criterion_5);
    run_criterion(&mut failures, 6, "seminorm laws", criterion_6);
    run_criterion(&mut failures, 7, "retraction laws", criterion_7);
    run_criterion(&mut failures, 8, "flow oracle", criterion_8);
    run_criterion(&mut failures, 9, "reduction strata", criterion_9);
    run_criterion(&mut failures, 10, "level approximation", criterion_10);
    run_criterion(&mut failures, 11, "closure classification", criterion_11);
    run_criterion(&mut failures, 12, "CLI determinism and round-trip", criterion_12);
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
