//! Writes the explicit QFAs and catalog DFAs as JSON into a directory
//! (default `crates/core/data`).

use std::path::PathBuf;

use mmqfa::automata::{build_aplus, build_construction5, build_kcycles, Language};

fn main() -> mmqfa::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data"));
    std::fs::create_dir_all(&dir)?;
    let mut qfas = vec![("aplus", build_aplus()), ("construction5", build_construction5())];
    for k in 2..=4 {
        qfas.push((["kcycles2", "kcycles3", "kcycles4"][k - 2], build_kcycles(k)?));
    }
    for (name, auto) in &qfas {
        auto.qfa.save(dir.join(format!("{name}.json")))?;
    }
    let dfas = [
        ("aplus_dfa", Language::APlus),
        ("astar_bstar_dfa", Language::AStarBStar),
        ("l1_k2_dfa", Language::L1(2)),
        ("l1_k3_dfa", Language::L1(3)),
        ("eps_aplus_b_dfa", Language::EpsAPlusB),
        ("ends_in_a_dfa", Language::EndsInA),
        ("sigma_star_dfa", Language::SigmaStar),
    ];
    for (name, lang) in dfas {
        lang.dfa().save(dir.join(format!("{name}.json")))?;
    }
    println!("wrote {} files to {}", qfas.len() + dfas.len(), dir.display());
    Ok(())
}
