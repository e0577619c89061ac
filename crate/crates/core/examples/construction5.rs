//! The four-state automaton for {ε} ∪ a+b(a|b)*: one representative word per case.

use mmqfa::alphabet::enumerate_words;
use mmqfa::automata::build_construction5;

fn main() -> mmqfa::Result<()> {
    let auto = build_construction5();
    let qfa = &auto.qfa;
    for (case, text) in [("empty", ""), ("b(a|b)*", "bab"), ("a+", "aaa"), ("a+b(a|b)*", "aabba")] {
        let w = qfa.alphabet.parse(text)?;
        let p = qfa.correct_probability(&auto.oracle, &w)?;
        println!("{case:<10} {:<6} correct with {p:.10}", qfa.alphabet.display(&w).to_string());
    }
    let words = enumerate_words(2, 6);
    println!("margin (len <= 6): {:.10}", qfa.recognition_margin(&auto.oracle, &words)?);
    println!("closed form:       {:.10}", auto.claimed_probability);
    Ok(())
}
