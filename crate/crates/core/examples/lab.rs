// Standalone reimplementation of the learner with toggles, for bisecting
// dynamics discrepancies. Not part of the library.
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

#[derive(Clone, Copy)]
struct Knobs {
    backward: bool,
    per_step: bool,   // explore aggregate timing
    reset: bool,      // staged reset of explore ensemble
    informed: bool,   // init scale 1 vs 2
    exploit_eta: bool, // exploit coeff eta vs 1-eta
    min_rule: bool,   // policy q monotone min
    stage_start: u32, // initial stage threshold
    stage_rho_pow: i32, // rho = (1+1/H)^pow
    read_taken: bool, // line-14 aggregate read at a_i instead of a_temp
    vt_max_a: bool,   // exploit value relay via max over actions
    clip_mode: bool,  // policy update clips at the init bound instead of the old value
    blend_vr: bool,   // blend explore term reads the explore VALUE (max_a) instead of the aggregate at a_i
    stage_policy: bool, // staged timing also defers the policy-table update
    stage_vt: bool,     // staged timing also defers the exploit-value relay
}

fn beta(a: f64, b: f64, rng: &mut ChaCha8Rng) -> f64 {
    rand_distr::Beta::new(a, b).unwrap().sample(rng)
}

// chain env: returns (final scaled reward)
fn run_chain(k: Knobs, episodes: usize, seed: u64) -> f64 {
    let (s_n, h_n, p) = (20usize, 50usize, 0.9);
    let eta = 1.0 / ((h_n as f64).sqrt() + 1.0);
    let n0 = 1.0 / s_n as f64;
    let j_n = 10;
    let scale = if k.informed { 1.0 } else { 2.0 };
    let v0: Vec<f64> = (0..=h_n).map(|h| scale * (h_n - h) as f64).collect();
    let rho = (1.0 + 1.0 / h_n as f64).powi(k.stage_rho_pow);

    let mut q = vec![0.0; h_n * s_n * 2];
    let mut qe = vec![0.0; j_n * h_n * s_n * 2]; // exploit ens
    let mut qr = vec![0.0; j_n * h_n * s_n * 2]; // explore ens
    let mut qra = vec![0.0; h_n * s_n * 2]; // explore aggregate
    let mut vt = vec![0.0; (h_n + 1) * s_n]; // exploit value
    let mut vr = vec![0.0; (h_n + 1) * s_n]; // explore value
    let mut n = vec![0u32; h_n * s_n * 2];
    let mut stage = vec![k.stage_start; h_n * s_n * 2];
    let idx = |h: usize, s: usize, a: usize| (h * s_n + s) * 2 + a;
    let jdx = |j: usize, h: usize, s: usize, a: usize| ((j * h_n + h) * s_n + s) * 2 + a;
    for h in 0..h_n {
        for s in 0..s_n {
            for a in 0..2 {
                q[idx(h, s, a)] = v0[h + 1];
                qra[idx(h, s, a)] = v0[h + 1];
                for j in 0..j_n {
                    qe[jdx(j, h, s, a)] = v0[h + 1];
                    qr[jdx(j, h, s, a)] = v0[h + 1];
                }
            }
        }
    }
    for h in 0..=h_n {
        for s in 0..s_n {
            vt[h * s_n + s] = v0[h];
            vr[h * s_n + s] = v0[h];
        }
    }

    let mut env_rng = ChaCha8Rng::seed_from_u64(seed);
    env_rng.set_stream(0);
    let mut w_rng = ChaCha8Rng::seed_from_u64(seed);
    w_rng.set_stream(1);

    let mut total = 0.0;
    for _ep in 0..episodes {
        let mut s = 0usize;
        let mut path = Vec::with_capacity(h_n + 1);
        let mut rew = Vec::with_capacity(h_n);
        for h in 0..h_n {
            let a = if q[idx(h, s, 0)] >= q[idx(h, s, 1)] { 0 } else { 1 };
            let r = if s == 0 { 0.05 } else if s == s_n - 1 { 1.0 } else { 0.0 };
            let dir: isize = if a == 1 { 1 } else { -1 };
            let eff = if env_rng.random::<f64>() < p { dir } else { -dir };
            let next = (s as isize + eff).clamp(0, s_n as isize - 1) as usize;
            path.push((s, a));
            rew.push(r);
            total += r;
            s = next;
        }
        path.push((s, 0));

        let order: Vec<usize> = if k.backward { (0..h_n).rev().collect() } else { (0..h_n).collect() };
        for i in order {
            let (si, ai) = path[i];
            let (sn, _) = path[i + 1];
            let r = rew[i];
            let nv = n[idx(i, si, ai)];
            let bshape = (nv as f64 + n0) / 1.0;
            for j in 0..j_n {
                let we = beta((h_n + 1) as f64, bshape, &mut w_rng);
                let wr = beta(1.0, bshape, &mut w_rng);
                let e = &mut qe[jdx(j, i, si, ai)];
                *e = (1.0 - we) * *e + we * (r + vt[(i + 1) * s_n + sn]);
                let e = &mut qr[jdx(j, i, si, ai)];
                *e = (1.0 - wr) * *e + wr * (r + vr[(i + 1) * s_n + sn]);
            }
            let a_temp = if q[idx(i, si, 0)] >= q[idx(i, si, 1)] { 0 } else { 1 };
            let j_temp = (0..j_n).fold(0, |b, j| if qr[jdx(j, i, si, ai)] > qr[jdx(b, i, si, ai)] { j } else { b });
            let max_qe_atemp = if k.vt_max_a {
                (0..j_n).flat_map(|j| (0..2).map(move |a| (j, a))).map(|(j, a)| qe[jdx(j, i, si, a)]).fold(f64::MIN, f64::max)
            } else {
                (0..j_n).map(|j| qe[jdx(j, i, si, a_temp)]).fold(f64::MIN, f64::max)
            };
            let crossed = nv + 1 >= stage[idx(i, si, ai)];
            if k.per_step || crossed || !k.stage_vt {
                vt[i * s_n + si] = v0[i].min(max_qe_atemp);
            }
            if k.per_step || crossed {
                let read_a = if k.read_taken { ai } else { a_temp };
                qra[idx(i, si, ai)] = qr[jdx(j_temp, i, si, read_a)];
                vr[i * s_n + si] = qra[idx(i, si, 0)].max(qra[idx(i, si, 1)]);
            }
            if crossed && !k.per_step {
                if k.reset {
                    for j in 0..j_n {
                        qr[jdx(j, i, si, ai)] = v0[i + 1];
                    }
                }
                stage[idx(i, si, ai)] = ((stage[idx(i, si, ai)] as f64) * rho).ceil() as u32;
            }
            let max_qe_ai = (0..j_n).map(|j| qe[jdx(j, i, si, ai)]).fold(f64::MIN, f64::max);
            if k.per_step || crossed || !k.stage_policy {
                let ce = if k.exploit_eta { eta } else { 1.0 - eta };
                let explore_term = if k.blend_vr { vr[i * s_n + si] } else { qra[idx(i, si, ai)] };
                let blend = ce * max_qe_ai + eta * explore_term;
                let e = &mut q[idx(i, si, ai)];
                *e = if k.clip_mode { v0[i + 1].min(blend) } else if k.min_rule { e.min(blend) } else { blend };
            }
            n[idx(i, si, ai)] = nv + 1;
        }
    }
    total
}


// BDCL env. states: start 0, sink 1, lock1 2, lock2 3.
fn run_bdcl(k: Knobs, episodes: usize, seed: u64, struct_seed: u64) -> f64 {
    let (s_n, h_n, a_n, p_fail) = (4usize, 5usize, 5usize, 0.02);
    let eta = 1.0 / ((h_n as f64).sqrt() + 1.0);
    let n0 = 1.0 / s_n as f64;
    let j_n = 10;
    let scale = if k.informed { 1.0 } else { 2.0 };
    let v0: Vec<f64> = (0..=h_n).map(|h| scale * (h_n - h) as f64).collect();
    let rho = (1.0 + 1.0 / h_n as f64).powi(k.stage_rho_pow);
    let mut srng = ChaCha8Rng::seed_from_u64(struct_seed);
    let mut prog = [[0usize; 4]; 2];
    for lock in 0..2 {
        for h in 0..h_n - 1 {
            prog[lock][h] = srng.random_range(0..a_n);
        }
    }
    let step = |h: usize, s: usize, a: usize, rng: &mut ChaCha8Rng| -> (usize, f64) {
        let r = match s {
            1 => 1.0 / (8.0 * h_n as f64),
            2 if h == h_n - 1 => 0.25,
            3 if h == h_n - 1 => 1.0,
            _ => 0.0,
        };
        let intended = match s {
            0 => if a <= (a_n - 1) / 2 { 2 } else { 3 },
            1 => 1,
            lock => {
                if h == h_n - 1 || a == prog[lock - 2][h] { lock } else { 1 }
            }
        };
        let next = if rng.random::<f64>() < p_fail { 1 } else { intended };
        (next, r)
    };

    let cells = h_n * s_n * a_n;
    let mut q = vec![0.0; cells];
    let mut qe = vec![0.0; j_n * cells];
    let mut qr = vec![0.0; j_n * cells];
    let mut qra = vec![0.0; cells];
    let mut vt = vec![0.0; (h_n + 1) * s_n];
    let mut vr = vec![0.0; (h_n + 1) * s_n];
    let mut n = vec![0u32; cells];
    let start = if k.stage_start == 0 { h_n as u32 } else { k.stage_start };
    let mut stage = vec![start; cells];
    let idx = |h: usize, s: usize, a: usize| (h * s_n + s) * a_n + a;
    let jdx = |j: usize, h: usize, s: usize, a: usize| j * cells + (h * s_n + s) * a_n + a;
    for h in 0..h_n {
        for s in 0..s_n {
            for a in 0..a_n {
                q[idx(h, s, a)] = v0[h + 1];
                qra[idx(h, s, a)] = v0[h + 1];
                for j in 0..j_n {
                    qe[jdx(j, h, s, a)] = v0[h + 1];
                    qr[jdx(j, h, s, a)] = v0[h + 1];
                }
            }
        }
    }
    for h in 0..=h_n {
        for s in 0..s_n {
            vt[h * s_n + s] = v0[h];
            vr[h * s_n + s] = v0[h];
        }
    }
    let mut env_rng = ChaCha8Rng::seed_from_u64(seed);
    env_rng.set_stream(0);
    let mut w_rng = ChaCha8Rng::seed_from_u64(seed);
    w_rng.set_stream(1);

    let argmax = |row: &dyn Fn(usize) -> f64, n_items: usize| -> usize {
        let mut b = 0;
        for i in 1..n_items {
            if row(i) > row(b) {
                b = i;
            }
        }
        b
    };

    let mut total = 0.0;
    for _ep in 0..episodes {
        let mut s = 0usize;
        let mut path = Vec::with_capacity(h_n + 1);
        let mut rew = Vec::with_capacity(h_n);
        for h in 0..h_n {
            let a = argmax(&|x| q[idx(h, s, x)], a_n);
            let (next, r) = step(h, s, a, &mut env_rng);
            path.push((s, a));
            rew.push(r);
            total += r;
            s = next;
        }
        path.push((s, 0));
        let order: Vec<usize> = if k.backward { (0..h_n).rev().collect() } else { (0..h_n).collect() };
        for i in order {
            let (si, ai) = path[i];
            let (sn, _) = path[i + 1];
            let r = rew[i];
            let nv = n[idx(i, si, ai)];
            let bshape = nv as f64 + n0;
            for j in 0..j_n {
                let we = beta((h_n + 1) as f64, bshape, &mut w_rng);
                let wr = beta(1.0, bshape, &mut w_rng);
                let e = &mut qe[jdx(j, i, si, ai)];
                *e = (1.0 - we) * *e + we * (r + vt[(i + 1) * s_n + sn]);
                let e = &mut qr[jdx(j, i, si, ai)];
                *e = (1.0 - wr) * *e + wr * (r + vr[(i + 1) * s_n + sn]);
            }
            let ens_max_at = |a: usize| (0..j_n).map(|j| qe[jdx(j, i, si, a)]).fold(f64::MIN, f64::max);
            let a_temp = if k.vt_max_a {
                argmax(&|x| ens_max_at(x), a_n)
            } else {
                argmax(&|x| q[idx(i, si, x)], a_n)
            };
            let j_temp = (0..j_n).fold(0, |b, j| if qr[jdx(j, i, si, ai)] > qr[jdx(b, i, si, ai)] { j } else { b });
            let crossed = nv + 1 >= stage[idx(i, si, ai)];
            if k.per_step || crossed || !k.stage_vt {
                vt[i * s_n + si] = v0[i].min(ens_max_at(a_temp));
            }
            if k.per_step || crossed {
                let read_a = if k.read_taken { ai } else { a_temp };
                qra[idx(i, si, ai)] = qr[jdx(j_temp, i, si, read_a)];
                vr[i * s_n + si] = (0..a_n).map(|a| qra[idx(i, si, a)]).fold(f64::MIN, f64::max);
            }
            if crossed && !k.per_step {
                if k.reset {
                    for j in 0..j_n {
                        qr[jdx(j, i, si, ai)] = v0[i + 1];
                    }
                }
                stage[idx(i, si, ai)] = ((stage[idx(i, si, ai)] as f64) * rho).ceil() as u32;
            }
            if k.per_step || crossed || !k.stage_policy {
                let ce = if k.exploit_eta { eta } else { 1.0 - eta };
                let explore_term = if k.blend_vr { vr[i * s_n + si] } else { qra[idx(i, si, ai)] };
                let blend = ce * ens_max_at(ai) + eta * explore_term;
                let e = &mut q[idx(i, si, ai)];
                *e = if k.clip_mode { v0[i + 1].min(blend) } else if k.min_rule { e.min(blend) } else { blend };
            }
            n[idx(i, si, ai)] = nv + 1;
        }
    }
    total
}

fn main() {
    let reversed = Knobs { backward: true, per_step: true, reset: false, informed: true, exploit_eta: true, min_rule: true, stage_start: 1, stage_rho_pow: 1, read_taken: false, vt_max_a: false, clip_mode: false, blend_vr: false, stage_policy: false, stage_vt: false };
    let episodes = 1200;
    let v_star = 23.673591;
    let v_rand = 0.552718;
    let scaled = |tot: f64| 100.0 * (tot / episodes as f64 - v_rand) / (v_star - v_rand);

    let presets: Vec<(&str, Knobs)> = vec![
        ("randomizedq", Knobs { backward: false, per_step: false, reset: true, informed: false, exploit_eta: false, ..reversed }),
        ("rq-backward", Knobs { backward: true, per_step: false, reset: true, informed: false, exploit_eta: false, ..reversed }),
        ("rq-init", Knobs { backward: false, per_step: false, reset: true, informed: true, exploit_eta: false, ..reversed }),
        ("rq-update", Knobs { backward: false, per_step: true, reset: false, informed: false, exploit_eta: true, ..reversed }),
        ("reversedq", reversed),
    ];
    for stage_start in [0u32] {
        println!("== chain FINAL: ens-relay, blend-vr, staged policy, stage_start H");
        let _ = stage_start;
        for (name, k) in &presets {
            let k = Knobs { vt_max_a: true, min_rule: true, blend_vr: true, stage_start: 0, stage_policy: true, stage_vt: false, ..*k };
            let vals: Vec<f64> = (0..5).map(|seed| scaled(run_chain(k, episodes, seed))).collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            println!("  {name:14} {mean:6.2}");
        }
    }
    // BDCL references: V* and V_rand computed by the exact solvers.
    let (bv_star, bv_rand) = (0.9273363839146346, 0.07359716738381164);
    let bscaled = |tot: f64| 100.0 * (tot / 500.0 - bv_rand) / (bv_star - bv_rand);
    for stage_start in [0u32] {
        println!("== bdcl FINAL: ens-relay, blend-vr, staged policy, stage_start H");
        let _ = stage_start;
        for (name, k) in &presets {
            let k = Knobs { vt_max_a: true, min_rule: true, blend_vr: true, stage_start: 0, stage_policy: true, stage_vt: false, ..*k };
            let vals: Vec<f64> = (0..20).map(|seed| bscaled(run_bdcl(k, 500, seed, 0))).collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let var = vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 19.0;
            let lows: Vec<String> = vals.iter().map(|v| format!("{v:.0}")).collect();
            println!("  {name:14} {mean:6.2} ± {:5.2}  [{}]", 2.09 * (var / 20.0).sqrt(), lows.join(","));
        }
    }
}
