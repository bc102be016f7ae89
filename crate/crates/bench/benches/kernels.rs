use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64 as C64;

use ptscarf::model::{scarf2_potentials, ScarfModel};
use ptscarf::nu::{nu_energy, Branch, NUProblem};
use ptscarf::oracle::discretize_schrodinger;
use ptscarf::stencil::{Acc, BandedOp};
use ptscarf::Grid;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn flagship_potential(x: f64) -> C64 {
    let s = x.cosh().recip();
    let t = x.tanh();
    c(-s * s, -s * t)
}

fn dense_eigensolve(cr: &mut Criterion) {
    let mut group = cr.benchmark_group("dense-eigensolve");
    group.sample_size(10);
    for n in [129usize, 257, 513] {
        let grid = Grid::new(12.0, n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &grid, |b, grid| {
            let op = discretize_schrodinger(flagship_potential, grid, Acc::Two).unwrap();
            b.iter(|| op.eigenvalues().unwrap());
        });
    }
    group.finish();
}

fn closed_form_levels(cr: &mut Criterion) {
    let prob = NUProblem::from_couplings(c(-1.0, 0.0), c(0.0, -1.0), 1.0).unwrap();
    cr.bench_function("closed-form-levels-n8-both-branches", |b| {
        b.iter(|| {
            let mut acc = c(0.0, 0.0);
            for branch in [Branch::K1, Branch::K2] {
                for n in 0..=8 {
                    acc += nu_energy(&prob, branch, n).unwrap();
                }
            }
            acc
        });
    });
}

fn potential_sampling(cr: &mut Criterion) {
    let model = ScarfModel::new(1.0, 1.0).unwrap();
    let grid = Grid::new(12.0, 2001).unwrap();
    let xs = grid.points();
    cr.bench_function("scarf2-sampling-2001", |b| {
        b.iter(|| {
            let mut acc = c(0.0, 0.0);
            for &x in &xs {
                let (v1, v2) = scarf2_potentials(&model, x);
                acc += v1 + v2;
            }
            acc
        });
    });
}

fn banded_apply(cr: &mut Criterion) {
    let grid = Grid::new(12.0, 2001).unwrap();
    let xs = grid.interior_points();
    let u: Vec<C64> = xs.iter().map(|&x| flagship_potential(x)).collect();
    let op = BandedOp::schrodinger(&u, grid.h(), Acc::Four).unwrap();
    let psi: Vec<C64> = xs
        .iter()
        .map(|&x| c((-x * x / 8.0).exp(), 0.0))
        .collect();
    cr.bench_function("banded-apply-1999-o4", |b| {
        b.iter(|| op.apply(&psi));
    });
}

criterion_group!(
    kernels,
    dense_eigensolve,
    closed_form_levels,
    potential_sampling,
    banded_apply
);
criterion_main!(kernels);
