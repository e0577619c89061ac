//! Prints the summary table. Uses fewer restarts than the CLI default unless
//! a count is given.

use mmqfa::reproduce::{reproduce, ReproduceOptions};

fn main() -> mmqfa::Result<()> {
    let restarts = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    let r = reproduce(&ReproduceOptions { restarts, ..ReproduceOptions::default() })?;
    print!("{}", r.table());
    println!("all rows pass: {}", r.all_pass());
    Ok(())
}
