//! Mean cost against `log n * E[log d]` across sizes.

use costgreedy::costs::CostModel;
use costgreedy::oracle::verify_scaling;
use costgreedy::topology::ShortcutLaw;
use costgreedy::weights::EstimationConfig;

fn cfg() -> EstimationConfig {
    EstimationConfig {
        rounds: 4,
        seed: 17,
        ..Default::default()
    }
}

#[test]
fn ratio_is_flat_at_fixed_degree() {
    let sizes = [1 << 9, 1 << 10, 1 << 11, 1 << 12];
    let r = verify_scaling(
        &sizes,
        Some(&ShortcutLaw::Constant(1)),
        &CostModel::Exponential { rate: 1.0 },
        &cfg(),
        10,
    )
    .unwrap();
    assert!(r.pass(), "{r:?}");
}

#[test]
fn ratio_drifts_when_degree_grows_with_n() {
    let sizes = [1 << 8, 1 << 10, 1 << 12];
    let r = verify_scaling(
        &sizes,
        None,
        &CostModel::Exponential { rate: 1.0 },
        &cfg(),
        10,
    )
    .unwrap();
    assert!(
        r.points.windows(2).all(|p| p[1].ratio < p[0].ratio),
        "{r:?}"
    );
}
