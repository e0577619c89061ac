//! Runs the detector over the language catalog.

use mmqfa::automata::Language;
use mmqfa::detector::analyze;

fn main() -> mmqfa::Result<()> {
    let langs = [
        Language::APlus,
        Language::AStarBStar,
        Language::L1(2),
        Language::L1(3),
        Language::EpsAPlusB,
        Language::EndsInA,
        Language::SigmaStar,
    ];
    for lang in langs {
        let report = analyze(&lang.dfa(), 3)?;
        let kinds: Vec<String> = report.witnesses.iter().map(|w| w.kind.to_string()).collect();
        println!(
            "{:<14} bound {:.7}  rfa {:<5} qfa {:<5} [{}]",
            lang.to_string(),
            report.bound,
            report.rfa_recognizable,
            report.qfa_recognizable,
            kinds.join(", ")
        );
    }
    Ok(())
}
