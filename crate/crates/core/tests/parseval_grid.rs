//! Three-way agreement of the quadratic-sum identity across the shipped grid
//! and all four expansion variants.

use charlier_core::expansion::{parseval_triple, ExpansionVariant};
use charlier_core::verify::default_grid;

#[test]
fn three_way_agreement_on_the_grid() {
    let variants = [
        ExpansionVariant::FullF,
        ExpansionVariant::MinusPoisson,
        ExpansionVariant::MinusP1,
        ExpansionVariant::MinusP2,
    ];
    let mut worst = 0.0f64;
    for params in default_grid() {
        assert!(params.theta() <= 0.5);
        for variant in variants {
            let rep = parseval_triple(&params, variant).unwrap();
            assert!(
                rep.max_rel_disagreement <= 1e-6,
                "n = {}, {variant:?}: {rep:?}",
                params.n()
            );
            worst = worst.max(rep.max_rel_disagreement);
        }
    }
    println!("worst three-way disagreement over the grid: {worst:.3e}");
}
