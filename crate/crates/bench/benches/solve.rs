use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use holefem::{
    assemble_blog, assemble_stiffness, generate_disk_mesh, solve_corrected, CorrectionSetup, CouplingMode, Cutoff,
    CutoffKind, Degree,
};
use holefem_bench::disk_space;

const DEGREES: [Degree; 3] = [Degree::P1, Degree::P2, Degree::P3];

fn mesh(c: &mut Criterion) {
    let mut group = c.benchmark_group("mesh");
    for level in [4, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(level), &level, |b, &l| b.iter(|| generate_disk_mesh(l)));
    }
    group.finish();
}

fn assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("assembly");
    for degree in DEGREES {
        let space = disk_space(5, degree);
        group.bench_function(BenchmarkId::new("stiffness", degree), |b| b.iter(|| assemble_stiffness(&space)));
        let cutoff = Cutoff::new(CutoffKind::Exp);
        group.bench_function(BenchmarkId::new("blog", degree), |b| b.iter(|| assemble_blog(&space, &cutoff)));
    }
    group.finish();
}

fn corrected_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_corrected");
    group.sample_size(10);
    for degree in DEGREES {
        let space = disk_space(5, degree);
        let load = vec![0.0; space.num_dofs()];
        for mode in [CouplingMode::None, CouplingMode::Point, CouplingMode::Average] {
            let setup = CorrectionSetup::new(1e-10, CutoffKind::Exp, mode).unwrap();
            group.bench_function(BenchmarkId::new(mode.name(), degree), |b| {
                b.iter(|| solve_corrected(&space, &setup, &load, |_| 1.0).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, mesh, assembly, corrected_solve);
criterion_main!(benches);
