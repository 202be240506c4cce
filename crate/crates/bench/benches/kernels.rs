use std::hint::black_box;
use std::sync::Arc;

use cayley_ising::configurations::{conditional_hamiltonian, generate};
use cayley_ising::contours::extract_contours;
use cayley_ising::gibbs::exact_gibbs;
use cayley_ising::{
    Boundary, ConfigKind, Configuration, CouplingConstants, Couplings, GibbsSpec, IndexedVolume, PeriodicFieldConstants,
    Spin, TreeParams,
};
use criterion::{criterion_group, criterion_main, Criterion};

fn energy_tables(c: &mut Criterion) {
    let constant = Couplings::from(CouplingConstants::from_ints(-1, 0, -1));
    let periodic = Couplings::from(PeriodicFieldConstants::from_ints(4, 1, -1, 1));
    c.bench_function("energy_table constant k=3", |b| b.iter(|| black_box(&constant).energy_table(3)));
    c.bench_function("energy_table periodic k=2", |b| b.iter(|| black_box(&periodic).energy_table(2)));
}

fn contours(c: &mut Criterion) {
    let params = TreeParams::new(2, 4).unwrap();
    let volume = Arc::new(IndexedVolume::new(params));
    let size = volume.len() as u32;
    let masks: Vec<u64> = (0..64u64).map(|i| i.wrapping_mul(0x9e37_79b9_7f4a_7c15) & ((1 << size) - 1)).collect();
    let configs: Vec<Configuration> = masks
        .iter()
        .map(|&m| Configuration::from_mask(volume.clone(), m, Boundary::Plus).unwrap())
        .collect();
    c.bench_function("extract_contours n=4, 64 configurations", |b| {
        b.iter(|| configs.iter().map(|s| extract_contours(s).unwrap().len()).sum::<usize>())
    });

    let j = Couplings::from(CouplingConstants::from_ints(-1, 0, -1));
    let alt = generate(&ConfigKind::Alternating(Spin::Plus), TreeParams::new(2, 6).unwrap()).unwrap();
    c.bench_function("conditional_hamiltonian n=6", |b| b.iter(|| conditional_hamiltonian(black_box(&alt), &j).unwrap()));
}

fn gibbs(c: &mut Criterion) {
    let spec = GibbsSpec::new(TreeParams::new(2, 2).unwrap(), CouplingConstants::from_ints(-1, 0, -1), 1.0, Boundary::Plus);
    let mut group = c.benchmark_group("exact_gibbs");
    group.sample_size(20);
    group.bench_function("n=2 (2^10 configurations)", |b| b.iter(|| exact_gibbs(black_box(&spec), &[]).unwrap()));
    group.finish();
}

criterion_group!(benches, energy_tables, contours, gibbs);
criterion_main!(benches);
