//! Throughput of the exhaustive kernels: Smith normal form, filtration
//! enumeration, heart classification and Ext over `ℤ/n`.

use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tstruct_core::matrix::smith_normal_form;
use tstruct_core::module::{ext, module_catalog, Base, FgModule};
use tstruct_core::poset::connected_posets_up_to_iso;
use tstruct_core::verify::random_matrix;
use tstruct_core::{enumerate_filtrations, module_verdict, Limits, PrimePoset, RingSpec};

fn snf(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let matrices: Vec<_> = (0..64).map(|_| random_matrix(&mut rng, 6, 20)).collect();
    c.bench_function("snf/64 random up to 6x6", |b| {
        b.iter(|| {
            for a in &matrices {
                black_box(smith_normal_form(a));
            }
        })
    });
}

fn enumeration(c: &mut Criterion) {
    let posets: Vec<Arc<PrimePoset>> = connected_posets_up_to_iso(4).unwrap().into_iter().map(Arc::new).collect();
    c.bench_function("enumerate/connected 4-element posets, width 4", |b| {
        b.iter(|| {
            let mut n = 0usize;
            for p in &posets {
                n += enumerate_filtrations(p, 0, 4, &Limits::default()).unwrap().count();
            }
            black_box(n)
        })
    });
}

fn classification(c: &mut Criterion) {
    let v = Arc::new(
        PrimePoset::new(&["p1", "p2", "m"], &[("p1", "m"), ("p2", "m")], Default::default()).unwrap(),
    );
    let ups = v.enumerate_sp_subsets(&Limits::default()).unwrap();
    let ring = RingSpec::abstract_poset(Arc::clone(&v), ups, true).unwrap();
    let filtrations: Vec<_> = enumerate_filtrations(&v, -1, 2, &Limits::default()).unwrap().collect();
    c.bench_function("module_verdict/V-poset, window -1..2", |b| {
        b.iter(|| {
            for phi in &filtrations {
                black_box(module_verdict(&ring, phi).unwrap());
            }
        })
    });
    let integers = RingSpec::dedekind_integers(&[2, 3, 5]).unwrap();
    let spec = Arc::new(integers.spectrum());
    let filtrations: Vec<_> = enumerate_filtrations(&spec, 0, 2, &Limits::default()).unwrap().collect();
    c.bench_function("module_verdict/Z marked at 2, 3, 5, window 0..2", |b| {
        b.iter(|| {
            for phi in &filtrations {
                black_box(module_verdict(&integers, phi).unwrap());
            }
        })
    });
}

fn ext_groups(c: &mut Criterion) {
    let base = Base::Zmod(72);
    let catalog = module_catalog(base, &[2, 3], 72).unwrap();
    let target = FgModule::from_cyclics(base, &[6, 12]).unwrap();
    c.bench_function("ext/Z/72 catalog against Z/6 + Z/12, i = 0..3", |b| {
        b.iter_batched(
            || catalog.clone(),
            |modules| {
                for m in &modules {
                    for i in 0..3 {
                        black_box(ext(i, m, &target).unwrap());
                    }
                }
            },
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, snf, enumeration, classification, ext_groups);
criterion_main!(benches);
