//! Layer decomposition and both ways of combining layer values.

use racs_shapley::exact::exact_vector;
use racs_shapley::game::{BernoulliGame, Method};
use racs_shapley::layered::{
    decompose_layers, layer_shapley, second_order_diagnostic, shapley_layered,
    worst_case_relative_error, LayerVariant,
};
use racs_shapley::racs::Target;

fn main() -> racs_shapley::error::Result<()> {
    let probs = [0.05, 0.95, 0.95];
    let d = decompose_layers(&probs)?;
    for (k, layer) in d.layers.iter().enumerate() {
        println!(
            "layer {}: n_k = {}, r_k = {:.2}, value {:.6}",
            k + 1,
            layer.n_k,
            layer.r_k,
            layer_shapley(layer)
        );
    }
    println!("depths {:?}", d.depth);

    let exact = exact_vector(&BernoulliGame::from_f64(&probs)?, Method::ExactEnum)?;
    println!("\nexact                 {:.6?}", exact.values());
    for variant in [LayerVariant::Literal, LayerVariant::Unweighted] {
        for target in [None, Some(Target::Te), Some(Target::One)] {
            let v = shapley_layered(&probs, variant, target)?;
            println!(
                "{:<10} {:<10} {:.6?}",
                format!("{variant:?}"),
                format!("{target:?}"),
                v.values()
            );
        }
    }

    println!();
    for i in 0..probs.len() {
        let diag = second_order_diagnostic(&probs, i)?;
        println!(
            "player {}: linearized {:+.6}  isolation {:+.6}  pairwise {:+.6}  worst-case rel {:.6}",
            i + 1,
            diag.linearized,
            diag.isolation,
            diag.pairwise,
            worst_case_relative_error(&probs, i)?
        );
    }
    Ok(())
}
