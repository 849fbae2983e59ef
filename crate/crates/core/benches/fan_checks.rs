use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vtoric::gamma_cone::ValuationMode;
use vtoric::projective::{generated_fan, generated_fan_with, WeightedConfig};
use vtoric::{Exec, Scalar, ValueGroup};

/// Points of a `side × side` grid with random heights in `[0, 4]`.
fn grid_config(side: i64, seed: u64) -> WeightedConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::new();
    let mut heights = Vec::new();
    for x in 0..side {
        for y in 0..side {
            points.push(vec![x, y]);
            heights.push(Some(Scalar::frac(rng.gen_range(0..=16), 4)));
        }
    }
    WeightedConfig::new(ValueGroup::rationals(), ValuationMode::Dense, 2, points, heights).unwrap()
}

fn fan_checks(c: &mut Criterion) {
    let mut group = c.benchmark_group("fan_checks");
    group.sample_size(10);
    for side in [3, 4] {
        let cfg = grid_config(side, 11);
        let fan = generated_fan(&cfg).unwrap();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let name = format!("{exec:?}");
            group.bench_with_input(BenchmarkId::new(format!("validate/{name}"), side), &fan, |b, f| {
                b.iter(|| f.validate_with(exec))
            });
            group.bench_with_input(BenchmarkId::new(format!("is_complete/{name}"), side), &fan, |b, f| {
                b.iter(|| f.is_complete_with(exec).unwrap())
            });
            group.bench_with_input(BenchmarkId::new(format!("generated_fan/{name}"), side), &cfg, |b, cfg| {
                b.iter(|| generated_fan_with(cfg, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, fan_checks);
criterion_main!(benches);
