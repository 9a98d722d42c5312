//! Sweep scenarios: the explicit product of a config plus the seeded
//! random registry.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::SweepConfig;

/// One parameter point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub id: u64,
    pub fn_label: String,
    pub eta_label: String,
    pub alpha: f64,
    pub k: f64,
    pub r: f64,
    pub a: f64,
    pub b: f64,
    /// Hölder p; q = p/(p − 1)
    pub holder_p: f64,
}

impl Scenario {
    pub fn holder_q(&self) -> f64 {
        self.holder_p / (self.holder_p - 1.0)
    }
}

/// Product scenarios first (ids from 1), then `random_scenarios` generated
/// ones.
pub fn scenarios(cfg: &SweepConfig) -> Vec<Scenario> {
    let mut out = Vec::with_capacity(cfg.product_len() + cfg.random_scenarios);
    let holders = cfg.holder_values();
    for f in &cfg.functions {
        for e in &cfg.etas {
            for &alpha in &cfg.alphas {
                for &k in &cfg.ks {
                    for &r in &cfg.rs {
                        for &[a, b] in &cfg.intervals {
                            for &holder_p in &holders {
                                out.push(Scenario {
                                    id: out.len() as u64 + 1,
                                    fn_label: f.clone(),
                                    eta_label: e.clone(),
                                    alpha,
                                    k,
                                    r,
                                    a,
                                    b,
                                    holder_p,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    let first = out.len() as u64 + 1;
    out.extend(random_scenarios(cfg.random_scenarios, cfg.seed, first));
    out
}

fn rounded(rng: &mut ChaCha8Rng, lo: f64, hi: f64, digits: i32) -> f64 {
    let scale = 10f64.powi(digits);
    (rng.gen_range(lo..=hi) * scale).round() / scale
}

fn coeff_label(coeffs: &[f64]) -> String {
    let parts: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
    format!("poly({})", parts.join(";"))
}

/// The randomized η-convex registry.
///
/// Convex bases (positive-coefficient quadratics and quartics, exp) are
/// paired with η(u, v) = u − v + c, c ∈ [0, 1]. About one scenario in seven
/// is −|x − c| with η(u, v) = −u − v. Parameters: α ∈ [0.25, 3],
/// k ∈ [0.5, 2] with α/k ≥ 0.2, r ∈ [−0.5, 2], a ∈ [0.1, 1.5],
/// b − a ∈ [0.2, 2], q ∈ {1.5, 2, 3}. Values are rounded to four decimals
/// so that the CSV reproduces the inputs exactly.
pub fn random_scenarios(n: usize, seed: u64, first_id: u64) -> Vec<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let a = rounded(&mut rng, 0.1, 1.5, 4);
        let b = a + rounded(&mut rng, 0.2, 2.0, 4);
        let family = rng.gen_range(0..7);
        let (fn_label, eta_label) = match family {
            0 | 1 => {
                let c = [rounded(&mut rng, 0.1, 2.0, 3), rounded(&mut rng, 0.0, 2.0, 3), rounded(&mut rng, 0.1, 2.0, 3)];
                (coeff_label(&c), None)
            }
            2 | 3 => {
                let c = [
                    rounded(&mut rng, 0.1, 2.0, 3),
                    rounded(&mut rng, 0.0, 1.0, 3),
                    rounded(&mut rng, 0.0, 1.0, 3),
                    rounded(&mut rng, 0.0, 1.0, 3),
                    rounded(&mut rng, 0.05, 1.0, 3),
                ];
                (coeff_label(&c), None)
            }
            4 | 5 => ("exp".to_string(), None),
            _ => {
                let c = rounded(&mut rng, a, b, 4);
                (format!("vabs({c})"), Some("neg_sum".to_string()))
            }
        };
        let eta_label = eta_label.unwrap_or_else(|| format!("diff_plus({})", rounded(&mut rng, 0.0, 1.0, 3)));
        let (alpha, k) = loop {
            let alpha = rounded(&mut rng, 0.25, 3.0, 4);
            let k = rounded(&mut rng, 0.5, 2.0, 4);
            if alpha / k >= 0.2 {
                break (alpha, k);
            }
        };
        let r = rounded(&mut rng, -0.5, 2.0, 4);
        let q = [1.5, 2.0, 3.0][rng.gen_range(0..3)];
        out.push(Scenario {
            id: first_id + i as u64,
            fn_label,
            eta_label,
            alpha,
            k,
            r,
            a,
            b,
            holder_p: q / (q - 1.0),
        });
    }
    out
}
