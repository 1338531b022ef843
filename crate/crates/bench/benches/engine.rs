//! Benchmarks for the hot paths: canonicalization, exterior algebra, the
//! Hamiltonian solver, pullback, and the homotopy operator.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use multisym::action::poincare_antiderivative;
use multisym::exterior::{interior_product, k_subsets};
use multisym::msgeom::{hamiltonian_vector_field, MultisymplecticStructure};
use multisym::submfd::classify_dimension;
use multisym::symexpr::parse;
use multisym::{Chart, DifferentialForm, MultivectorField, ScalarExpr, SmoothMap, ZeroCtx};

fn ctx() -> ZeroCtx {
    ZeroCtx::default()
}

fn bench_normalize(c: &mut Criterion) {
    let chart = Chart::new("M", &["x", "y", "z"]).unwrap();
    let e = parse(
        "((x + y)^4 - (x - y)^4)/(x*y) + sin(x)^2 + cos(x)^2 + exp(x)*exp(-x)",
        &chart,
    )
    .unwrap();
    c.bench_function("normalize quartic with kernels", |b| {
        b.iter(|| black_box(&e).normalize().unwrap())
    });
    c.bench_function("differentiate and normalize", |b| {
        b.iter(|| black_box(&e).differentiate("x").unwrap())
    });
}

fn bench_exterior(c: &mut Criterion) {
    let names = ["x1", "x2", "x3", "x4", "x5"];
    let chart = Chart::new("C5", &names).unwrap();
    let coeff = parse("x1*x2 + x3^2 - x4*x5", &chart).unwrap();
    let terms = k_subsets(5, 2)
        .into_iter()
        .map(|i| (i.indices().to_vec(), coeff.clone()))
        .collect();
    let alpha = DifferentialForm::new(&chart, 2, terms).unwrap();
    let beta = alpha.clone();
    c.bench_function("wedge 2-forms on dim 5", |b| {
        b.iter(|| black_box(&alpha).wedge(black_box(&beta)).unwrap())
    });
    c.bench_function("exterior derivative on dim 5", |b| {
        b.iter(|| black_box(&alpha).d().unwrap())
    });
    let field = MultivectorField::from_components(
        &chart,
        &names
            .iter()
            .map(|n| ScalarExpr::sym(n))
            .collect::<Vec<_>>(),
    )
    .unwrap();
    c.bench_function("interior product on dim 5", |b| {
        b.iter(|| interior_product(black_box(&field), black_box(&alpha)).unwrap())
    });
}

fn bench_solver(c: &mut Criterion) {
    // symplectic R^6
    let names = ["q1", "q2", "q3", "p1", "p2", "p3"];
    let chart = Chart::new("T3", &names).unwrap();
    let terms = (0..3)
        .map(|i| (vec![i as u32 + 1, i as u32 + 4], ScalarExpr::one()))
        .collect();
    let omega = DifferentialForm::new(&chart, 2, terms).unwrap();
    let ms = MultisymplecticStructure::new(omega, None, &ctx()).unwrap();
    let h = parse("(q1^2 + q2^2 + q3^2 + p1^2 + p2^2 + p3^2)/2 + q1*p2", &chart).unwrap();
    let zeta = DifferentialForm::from_scalar(&chart, &h).unwrap();
    c.bench_function("hamiltonian solve on symplectic R^6", |b| {
        b.iter(|| hamiltonian_vector_field(black_box(&ms), black_box(&zeta), &ctx()).unwrap())
    });
}

fn bench_pullback(c: &mut Criterion) {
    let xy = Chart::new("C", &["x", "y"]).unwrap();
    let polar = Chart::new("P", &["r", "t"]).unwrap();
    let map = SmoothMap::new(
        &polar,
        &xy,
        vec![
            parse("r*cos(t)", &polar).unwrap(),
            parse("r*sin(t)", &polar).unwrap(),
        ],
    )
    .unwrap();
    let alpha = DifferentialForm::new(
        &xy,
        2,
        vec![(vec![1, 2], parse("x^2 + y^2", &xy).unwrap())],
    )
    .unwrap();
    c.bench_function("pullback along the polar map", |b| {
        b.iter(|| black_box(&map).pullback(black_box(&alpha)).unwrap())
    });
}

fn bench_homotopy(c: &mut Criterion) {
    let names = ["x1", "x2", "x3", "x4", "x5", "x6"];
    let chart = Chart::new("C6", &names).unwrap();
    let coeff = parse("x1*x2 - x3*x6", &chart).unwrap();
    let alpha = DifferentialForm::new(
        &chart,
        3,
        vec![(vec![1, 2, 3], coeff.clone()), (vec![4, 5, 6], coeff)],
    )
    .unwrap()
    .d()
    .unwrap();
    c.bench_function("homotopy antiderivative on dim 6", |b| {
        b.iter(|| poincare_antiderivative(black_box(&alpha), &[], &ctx()).unwrap())
    });
}

fn bench_dimension(c: &mut Criterion) {
    c.bench_function("dimension classification sweep m<=12", |b| {
        b.iter(|| {
            for m in 2..=12u64 {
                for k in 1..m {
                    black_box(classify_dimension(m, k, 3.min(m), m - 1).unwrap());
                }
            }
        })
    });
}

criterion_group!(
    benches,
    bench_normalize,
    bench_exterior,
    bench_solver,
    bench_pullback,
    bench_homotopy,
    bench_dimension
);
criterion_main!(benches);
