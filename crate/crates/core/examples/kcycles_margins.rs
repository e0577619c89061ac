//! Recognition margins of the k parallel cycles automata for k = 2..5.

use mmqfa::alphabet::enumerate_words;
use mmqfa::automata::build_kcycles;

fn main() -> mmqfa::Result<()> {
    for k in 2..=5 {
        let auto = build_kcycles(k)?;
        let len = if k <= 4 { 4 } else { 3 };
        let words = enumerate_words(auto.qfa.alphabet.len(), len);
        let (m, worst) = auto.qfa.worst_case(&auto.oracle, &words)?;
        println!(
            "k={k}: {} states, margin {m:.9} vs k/(2k-1) = {:.9}, worst word {}",
            auto.qfa.dim(),
            auto.claimed_probability,
            auto.qfa.alphabet.display(&worst)
        );
    }
    Ok(())
}
