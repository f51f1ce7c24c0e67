//! Goodness of fit of generated shortcut lengths against `P(d) ∝ d^-α`.

use costgreedy::topology::{
    generate_graph, harmonic_normalizer, CostGraph, GraphSpec, ShortcutLaw,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Pearson statistic of the observed ring offsets of every shortcut, and its p-value.
fn chi_square(g: &CostGraph) -> (f64, f64, u64) {
    let n = g.n();
    let mut counts = vec![0u64; n as usize];
    for x in g.vertices() {
        for y in g.shortcuts(x) {
            counts[g.distance(x, y) as usize] += 1;
        }
    }
    assert_eq!(counts[0], 0, "self-loop generated");
    let total: u64 = counts.iter().sum();
    let h = harmonic_normalizer(n, g.alpha());
    let stat: f64 = (1..n as usize)
        .map(|d| {
            let expected = total as f64 * (d as f64).powf(-g.alpha()) / h;
            let diff = counts[d] as f64 - expected;
            diff * diff / expected
        })
        .sum();
    let dof = (n - 2) as f64;
    let p = 1.0 - ChiSquared::new(dof).unwrap().cdf(stat);
    (stat, p, total)
}

fn graph(n: u32, alpha: f64, q: u32, seed: u64) -> CostGraph {
    generate_graph(&GraphSpec {
        n,
        alpha,
        shortcuts: ShortcutLaw::Constant(q),
        seed,
    })
    .unwrap()
}

#[test]
fn harmonic_lengths_fit() {
    let g = graph(64, 1.0, 1563, 11);
    let (stat, p, total) = chi_square(&g);
    assert!(total >= 100_000);
    assert!(p > 0.001, "chi2 = {stat}, p = {p}");
}

#[test]
fn uniform_lengths_fit() {
    let g = graph(32, 0.0, 3200, 12);
    let (stat, p, _) = chi_square(&g);
    assert!(p > 0.001, "chi2 = {stat}, p = {p}");
}

#[test]
fn steep_lengths_fit() {
    // alpha = 2 puts little mass on long offsets; keep n small so every bin is populated
    let g = graph(16, 2.0, 6250, 13);
    let (stat, p, _) = chi_square(&g);
    assert!(p > 0.001, "chi2 = {stat}, p = {p}");
}

#[test]
fn wrong_exponent_is_rejected() {
    // lengths drawn with alpha = 1 tested against alpha = 2
    let g = graph(64, 1.0, 1563, 14);
    let shortcuts: Vec<Vec<u32>> = g
        .vertices()
        .map(|x| g.shortcuts(x).map(|y| y.0).collect())
        .collect();
    let relabeled = CostGraph::from_shortcuts(64, 2.0, 0, &shortcuts).unwrap();
    let (_, p, _) = chi_square(&relabeled);
    assert!(p < 1e-6);
}
