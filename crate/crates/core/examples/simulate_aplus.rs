//! Runs the a+ automaton on a few words and over every word up to length 6.

use mmqfa::alphabet::enumerate_words;
use mmqfa::automata::build_aplus;

fn main() -> mmqfa::Result<()> {
    let auto = build_aplus();
    let qfa = &auto.qfa;
    for text in ["", "a", "aaa", "b", "ab", "aab", "ba"] {
        let w = qfa.alphabet.parse(text)?;
        let r = qfa.run(&w)?;
        println!(
            "{:>4}  p_acc {:.7}  p_rej {:.7}  in L: {}",
            qfa.alphabet.display(&w).to_string(),
            r.p_acc,
            r.p_rej,
            auto.oracle.contains(&w)
        );
    }
    let words = enumerate_words(qfa.alphabet.len(), 6);
    let (m, worst) = qfa.worst_case(&auto.oracle, &words)?;
    println!("margin over {} words: {m:.10} (worst {})", words.len(), qfa.alphabet.display(&worst));
    println!("claimed: {:.10}", auto.claimed_probability);
    Ok(())
}
