use reversedq_core::agent::{run_learning, AgentConfig, VariantPreset};
use reversedq_core::envs::{ChainConfig, ChainEnv, Environment};

fn main() {
    let env = ChainEnv::new(ChainConfig::new(20, 50, 0.9)).unwrap();
    let model = env.to_model();
    let config = AgentConfig::preset(VariantPreset::Randomizedq, 50, 20);
    println!(
        "stage_initial={} stage_growth={} eta={} n0={}",
        config.stage_initial, config.stage_growth, config.mixing_rate, config.prior_transitions
    );
    let (run, state) = run_learning(&env, &model, &config, 300, 0).unwrap();
    let blocks: Vec<f64> = run
        .returns
        .chunks(50)
        .map(|b| b.iter().sum::<f64>() / b.len() as f64)
        .collect();
    println!("block returns: {blocks:?}");
    println!(
        "policy_q[0][0] = {:?}, visits[0][0] = {:?}, stage_next[0][0] = {:?}",
        state.policy_q.slice(ndarray::s![0, 0, ..]),
        state.visits.slice(ndarray::s![0, 0, ..]),
        state.stage_next.slice(ndarray::s![0, 0, ..])
    );
    println!(
        "exploit_value[0..3][0..4]:\n{:?}",
        state.exploit_value.slice(ndarray::s![0..3, 0..4])
    );
}
