use depthsep::calculus::affine_net;
use depthsep::constructions::{target_net, target_psi};
use depthsep::measures::{l2_error_mc, l2_error_separable, log_normalization_const, target_raw};
use depthsep::Matrix;

// Gauss–Legendre nodes and weights on [-1, 1] by Newton on P_n.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// target_net(2, 2, 4) has every kink at an integer (a = 2, R = 4, M = 2), so
/// a composite rule with unit panels on [-12, 12] is exact up to rounding on
/// each panel. The full network is integrated on the tensor grid.
#[test]
fn separable_matches_tensor_grid_in_two_dimensions() {
    let (net, spec) = target_net(2, 2, 4.0).unwrap();
    let psi = target_psi(&spec).unwrap();
    let sep = l2_error_separable(&psi, spec.scale(), 2).unwrap().value;

    let gl = gauss_legendre(20);
    let mut rule = Vec::new();
    for panel in -12..12 {
        let mid = panel as f64 + 0.5;
        for &(x, w) in &gl {
            let t = mid + 0.5 * x;
            rule.push((t, 0.5 * w * (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt()));
        }
    }
    let k = (-0.5 * log_normalization_const(2).unwrap()).exp();
    let mut sum = 0.0;
    for &(x1, w1) in &rule {
        for &(x2, w2) in &rule {
            let x = [x1, x2];
            let e = net.realize(&x).unwrap()[0] - k * target_raw(2, &x);
            sum += w1 * w2 * e * e;
        }
    }
    let grid = sum.sqrt();
    assert!((grid - sep).abs() <= 1e-8, "tensor grid {grid} vs separable {sep}");
}

#[test]
fn zero_network_recovers_unit_norm() {
    for d in [1usize, 3, 5] {
        let zero = affine_net(Matrix::zeros(1, d), vec![0.0]).unwrap();
        let e = l2_error_mc(&zero, d, 400_000, 3).unwrap();
        let se = e.std_error.unwrap();
        assert!((e.value - 1.0).abs() <= 3.0 * se, "d={d}: {} ± {se}", e.value);
    }
}

#[test]
fn mc_is_deterministic_given_seed() {
    let (net, _) = target_net(3, 2, 4.0).unwrap();
    let a = l2_error_mc(&net, 3, 50_000, 11).unwrap();
    let b = l2_error_mc(&net, 3, 50_000, 11).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    assert_eq!(a.std_error.unwrap().to_bits(), b.std_error.unwrap().to_bits());
    let c = l2_error_mc(&net, 3, 50_000, 12).unwrap();
    assert_ne!(a.value.to_bits(), c.value.to_bits());
}

#[test]
fn tripling_samples_shrinks_std_error() {
    let (net, _) = target_net(3, 4, 9.0).unwrap();
    let expected = 1.0 / 3f64.sqrt();
    let mut ratios = Vec::new();
    for seed in 0..10 {
        let small = l2_error_mc(&net, 3, 30_000, seed).unwrap().std_error.unwrap();
        let big = l2_error_mc(&net, 3, 90_000, 100 + seed).unwrap().std_error.unwrap();
        ratios.push(big / small);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!((mean / expected - 1.0).abs() <= 0.25, "mean ratio {mean}, per seed {ratios:?}");
}
