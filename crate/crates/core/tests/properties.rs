use depthsep::ann::{random_network, Network};
use depthsep::bounds::shallow_deep_table;
use depthsep::calculus::{compose, parallelize};
use depthsep::json::{from_json, to_json};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pair(seed: u64) -> (Network, Network) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_network(&mut rng, None, None);
    let f = random_network(&mut rng, Some(g.output_dim()), None);
    (f, g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn calculus_realization_laws(seed in any::<u64>(), xs in prop::collection::vec(-3.0f64..3.0, 12)) {
        let (f, g) = pair(seed);
        let x = &xs[..g.input_dim()];
        let fg = compose(&f, &g).unwrap();
        let chained = f.realize(&g.realize(x).unwrap()).unwrap();
        let direct = fg.realize(x).unwrap();
        prop_assert_eq!(direct.len(), f.output_dim());
        for (a, b) in direct.iter().zip(&chained) {
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{} vs {}", a, b);
        }
        prop_assert_eq!(fg.depth(), f.depth() + g.depth() - 1);

        // Depth-matched copy of f for the parallel law.
        let p = parallelize(&[&fg, &fg]).unwrap();
        let joint = [x, x].concat();
        prop_assert_eq!(p.realize(&joint).unwrap(), [direct.clone(), direct].concat());

        let back = from_json(&to_json(&fg)).unwrap();
        prop_assert_eq!(&back, &fg);
        prop_assert_eq!(Network::from_vector(&fg.dims(), &fg.vectorize()).unwrap(), fg);
    }

    #[test]
    fn table_columns_monotone(c in 1.0f64..1e6, delta in 0.05f64..=1.0, mut ds in prop::collection::vec(1u64..1_000_000_000, 2..40)) {
        ds.sort_unstable();
        ds.dedup();
        let t = shallow_deep_table(c, delta, &ds).unwrap();
        for w in t.rows.windows(2) {
            prop_assert!(w[0].deep_budget_log < w[1].deep_budget_log);
            prop_assert!(w[0].shallow_floor_log <= w[1].shallow_floor_log);
        }
        if let Some(d) = t.crossover {
            for r in t.rows.iter().filter(|r| r.d >= d) {
                prop_assert!(r.shallow_exceeds, "d = {} at or past d* = {}", r.d, d);
            }
        }
    }
}
