//! Closed forms against their oracles on fixed inputs.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use mrb_bench::{amiv_moments, capacity_model, interval_family, refuted_binary_iv, refuted_moments};
use mrb_core::amiv::{amiv_mrb, CutoffMode};
use mrb_core::artstein::{find_discordant_collections, InequalityTable};
use mrb_core::binaryiv::{mrb_binary_iv, supported_combos};
use mrb_core::intersect::{construct_pointid_instrument, mrb_intersection, outer_set};
use mrb_core::lattice::find_minimal_relaxations;
use mrb_core::oracles::{oracle_amiv_bounds, oracle_binaryiv_grid, oracle_mrb_by_instrument_sweep, OracleConfig};

fn intersect(c: &mut Criterion) {
    let m = refuted_moments();
    c.bench_function("intersect/mrb_closed_form", |b| b.iter(|| mrb_intersection(black_box(&m))));
    c.bench_function("intersect/point_identifying_instrument", |b| {
        b.iter(|| outer_set(&m, &construct_pointid_instrument(black_box(&m), 0.45).unwrap()).unwrap())
    });
    let cfg = OracleConfig::default();
    c.bench_function("intersect/instrument_sweep_oracle", |b| {
        b.iter(|| oracle_mrb_by_instrument_sweep(black_box(&m), &cfg).unwrap())
    });
}

fn binary_iv(c: &mut Criterion) {
    let d = refuted_binary_iv();
    c.bench_function("binary_iv/case_table", |b| b.iter(|| mrb_binary_iv(black_box(&d)).unwrap()));
    let combo = supported_combos()[1];
    let mut g = c.benchmark_group("binary_iv");
    g.sample_size(10);
    g.bench_function("atom_program_grid_0.1", |b| b.iter(|| oracle_binaryiv_grid(black_box(&d), combo, 0.1).unwrap()));
    g.finish();
}

fn amiv(c: &mut Criterion) {
    let m = amiv_moments();
    c.bench_function("amiv/closed_form", |b| b.iter(|| amiv_mrb(black_box(&m), CutoffMode::Joint)));
    let mut g = c.benchmark_group("amiv");
    g.sample_size(10);
    g.bench_function("constructive_oracle", |b| b.iter(|| oracle_amiv_bounds(black_box(&m), None, 0.05).unwrap()));
    g.finish();
}

fn lattice(c: &mut Criterion) {
    for n in [6usize, 12, 18] {
        let fam = interval_family(n);
        c.bench_function(&format!("lattice/minimal_relaxations_{n}"), |b| {
            b.iter(|| find_minimal_relaxations(black_box(&fam)).unwrap())
        });
    }
}

fn artstein(c: &mut Criterion) {
    let model = capacity_model();
    c.bench_function("artstein/sharp_set", |b| {
        b.iter(|| {
            let t = InequalityTable::build(black_box(&model)).unwrap();
            t.outer_set(&(1..=model.full_mask()).collect::<Vec<_>>()).unwrap()
        })
    });
    c.bench_function("artstein/discordance_search", |b| {
        b.iter(|| find_discordant_collections(black_box(&model)).unwrap())
    });
}

criterion_group!(benches, intersect, binary_iv, amiv, lattice, artstein);
criterion_main!(benches);
