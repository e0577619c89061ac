//! Ergodic/transient split for the explicit automata plus escape words for E2.

use mmqfa::automata::{build_aplus, build_kcycles};
use mmqfa::subspace::{decompose, escape_word, DEFAULT_TOL};

fn main() -> mmqfa::Result<()> {
    let cases = [
        (build_aplus(), vec!["a"]),
        (build_aplus(), vec!["a", "b"]),
        (build_kcycles(2)?, vec!["b1", "b2"]),
    ];
    for (auto, gens) in cases {
        let spec = &auto.qfa;
        let words: Vec<_> = gens.iter().map(|g| spec.alphabet.parse(g)).collect::<Result<_, _>>()?;
        let pair = decompose(spec, &words, DEFAULT_TOL)?;
        println!(
            "{} with {:?}: dim E1 = {}, dim E2 = {}",
            auto.name,
            gens,
            pair.e1.len(),
            pair.e2.len()
        );
        for v in pair.e2.vectors() {
            match escape_word(spec, &words, v, 1e-3, 50 * spec.dim())? {
                Some(e) => println!("  escape of length {} leaves norm {:.2e}", e.word.len(), e.residual_norm),
                None => println!("  no escape found"),
            }
        }
    }
    Ok(())
}
