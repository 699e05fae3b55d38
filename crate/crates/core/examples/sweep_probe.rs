use reversedq_core::agent::{run_learning, AgentConfig, VariantPreset};
use reversedq_core::envs::{BdclConfig, BdclEnv, ChainConfig, ChainEnv, Environment};
use reversedq_core::mdp::{backward_induction, evaluate_uniform_policy};
use std::time::Instant;

fn main() {
    let bdcl = BdclEnv::new(BdclConfig::new(5, 5, 0.02, 0)).unwrap();
    let bdcl_model = bdcl.to_model();
    let chain = ChainEnv::new(ChainConfig::new(20, 50, 0.9)).unwrap();
    let chain_model = chain.to_model();

    for (name, env, model, episodes, seeds) in [
        ("bdcl", &bdcl as &dyn std::any::Any, &bdcl_model, 500usize, 20u64),
        ("chain", &chain as &dyn std::any::Any, &chain_model, 1200, 5),
    ] {
        let solution = backward_induction(model).unwrap();
        let v_star = solution.values[[0, model.initial_state()]];
        let v_rand = evaluate_uniform_policy(model);
        println!("== {name}: V* = {v_star:.4}, V_random = {v_rand:.4}");
        for preset in VariantPreset::ALL {
            let config = AgentConfig::preset(preset, model.horizon(), model.num_states());
            let t = Instant::now();
            let mut finals = Vec::new();
            for seed in 0..seeds {
                let run = if let Some(e) = env.downcast_ref::<BdclEnv<f64>>() {
                    run_learning(e, model, &config, episodes, seed).unwrap().0
                } else {
                    let e = env.downcast_ref::<ChainEnv<f64>>().unwrap();
                    run_learning(e, model, &config, episodes, seed).unwrap().0
                };
                let total: f64 = run.returns.iter().sum();
                finals.push(100.0 * (total - episodes as f64 * v_rand)
                    / (episodes as f64 * (v_star - v_rand)));
            }
            let mean = finals.iter().sum::<f64>() / finals.len() as f64;
            let var = finals.iter().map(|x| (x - mean).powi(2)).sum::<f64>()
                / (finals.len() as f64 - 1.0);
            let half = 2.09 * (var / finals.len() as f64).sqrt();
            println!("  {:24} scaled {:7.2} ± {:5.2}   ({:?})", preset.name(), mean, half, t.elapsed());
        }
    }
}
