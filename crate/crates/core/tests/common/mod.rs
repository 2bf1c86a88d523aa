//! Helpers shared by the integration test targets.

use config_models_core::rewrite::{normalize, normalize_with_policy, RawTerm};
use config_models_core::scalar::scalar;
use config_models_core::PdAlgebra;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Draws a random linear combination of raw (unreduced) terms on `n` points.
fn random_terms(rng: &mut ChaCha8Rng, dim: usize, n: usize) -> Vec<RawTerm> {
    let n_terms = rng.gen_range(1..=3);
    (0..n_terms)
        .map(|_| {
            let tuple: Vec<usize> = (0..n).map(|_| rng.gen_range(0..dim)).collect();
            let word_len = rng.gen_range(0..=3.min(n * (n - 1) / 2));
            let word: Vec<(usize, usize)> = (0..word_len)
                .map(|_| {
                    let i = rng.gen_range(0..n);
                    let mut j = rng.gen_range(0..n);
                    while j == i {
                        j = rng.gen_range(0..n);
                    }
                    (i, j)
                })
                .collect();
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-3..=3);
            }
            RawTerm::new(tuple, word, scalar(c))
        })
        .collect()
}

/// Rewrites random inputs with the default strategy and with `rounds`
/// randomized strategies each, and demands identical normal forms; also
/// checks that normal forms are fixed points. Returns the number of trials
/// run, or a description of the first disagreement.
pub fn random_confluence_trials(
    pd: &PdAlgebra,
    n: usize,
    trials: usize,
    rounds: usize,
    seed: u64,
) -> Result<usize, String> {
    let alg = pd.algebra();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let terms = random_terms(&mut rng, alg.dim(), n);
        let reference = normalize(alg, terms.clone());
        for round in 0..rounds {
            let mut strategy_rng =
                ChaCha8Rng::seed_from_u64(seed ^ (trial as u64) << 16 ^ round as u64);
            let alternative = normalize_with_policy(alg, terms.clone(), &mut |k| {
                strategy_rng.gen_range(0..k)
            });
            if alternative != reference {
                return Err(format!(
                    "strategy disagreement on {} (trial {trial}, round {round})",
                    pd.name()
                ));
            }
        }
        // Normal forms are fixed points of the rewriting system.
        let replay: Vec<RawTerm> = reference
            .iter()
            .map(|((word, tuple), coeff)| {
                RawTerm::new(tuple.clone(), word.clone(), coeff.clone())
            })
            .collect();
        if normalize(alg, replay) != reference {
            return Err(format!(
                "normal form is not a fixed point on {} (trial {trial})",
                pd.name()
            ));
        }
    }
    Ok(trials)
}

/// Prints the acceptance line for one check and hands the flag back.
#[allow(dead_code)] // each integration target compiles this module separately
pub fn report(ok: bool, line: &str) -> bool {
    println!("[{}] {}", if ok { "PASS" } else { "FAIL" }, line);
    ok
}
