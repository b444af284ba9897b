use criterion::{black_box, criterion_group, criterion_main, Criterion};
use polyskel::complex::StrictDualComplex;
use polyskel::field::Coeff;
use polyskel::rat::{rat_int, ExtRat};
use polyskel::skeleton::{
    seminorm_eval, star_eval, DiscCoord, Monomial, SkeletalPoint, StandardPairModel,
    ValuedPolynomial,
};
use polyskel::strata::standard_descriptor;

fn descriptor_build(c: &mut Criterion) {
    c.bench_function("standard_descriptor_14", |b| {
        b.iter(|| standard_descriptor(black_box(&[2]), &[rat_int(1)], 1, 1).unwrap())
    });
    c.bench_function("standard_descriptor_large", |b| {
        b.iter(|| {
            standard_descriptor(black_box(&[2, 1]), &[rat_int(1), rat_int(2)], 2, 2).unwrap()
        })
    });
}

fn complex_build(c: &mut Criterion) {
    let desc = standard_descriptor(&[2], &[rat_int(1)], 1, 1).unwrap();
    c.bench_function("strict_dual_complex_14", |b| {
        b.iter(|| StrictDualComplex::build(black_box(desc.clone())).unwrap())
    });
}

fn eval_setup() -> (StandardPairModel, SkeletalPoint, ValuedPolynomial) {
    let model = StandardPairModel::new(vec![1], vec![Coeff::t_pow(rat_int(2))], 2, 1).unwrap();
    let x = SkeletalPoint::new(
        &model,
        vec![vec![rat_int(1), rat_int(1)]],
        vec![
            DiscCoord::new(Coeff::t_pow(rat_int(2)), ExtRat::Infinity),
            DiscCoord::new(Coeff::t_pow(rat_int(1)), ExtRat::from_int(4)),
        ],
    )
    .unwrap();
    let mut m = Monomial::unit(&model);
    m.tor[0][1] = 2;
    m.disc = vec![2, 1];
    let f = ValuedPolynomial::from_terms(
        &model,
        vec![
            (m, Coeff::one()),
            (Monomial::unit(&model), Coeff::t_pow(rat_int(3)).neg()),
        ],
    )
    .unwrap();
    (model, x, f)
}

fn seminorms(c: &mut Criterion) {
    let (model, x, f) = eval_setup();
    c.bench_function("seminorm_eval", |b| {
        b.iter(|| seminorm_eval(&model, black_box(&x), &f).unwrap())
    });
    let t = ExtRat::from_int(1);
    c.bench_function("star_eval", |b| {
        b.iter(|| star_eval(&model, black_box(&x), &t, &f).unwrap())
    });
}

criterion_group!(benches, descriptor_build, complex_build, seminorms);
criterion_main!(benches);
