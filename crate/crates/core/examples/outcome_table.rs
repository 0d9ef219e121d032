//! Prints the six-case outcome table the assistant uses to score a frontier
//! cell, with exact and displayed expected scores.
//!
//! ```bash
//! cargo run -p treasure-hunter --example outcome_table
//! ```

use treasure_hunter::advisor::{case_probs, expected_score, format_2dp, CaseId};

fn main() {
    let labels = [
        "wumpus certain",
        "pit certain",
        "safe",
        "pit possible, no wumpus",
        "wumpus possible, no pit",
        "both possible",
    ];
    println!(
        "{:<4} {:<26} {:>8} {:>8} {:>8} {:>8} {:>10}  exact",
        "case", "judgment", "P(W)", "P(P)", "P(G)", "P(N)", "E[score]"
    );
    for (case, label) in CaseId::ALL.into_iter().zip(labels) {
        let p = case_probs(case);
        let e = expected_score(&p);
        println!(
            "{:<4} {:<26} {:>8} {:>8} {:>8} {:>8} {:>10}  {}",
            case,
            label,
            p.wumpus.to_string(),
            p.pit.to_string(),
            p.gold.to_string(),
            p.nothing.to_string(),
            format_2dp(e),
            e
        );
    }
    println!("\nthe -10 for uncovering a cell is paid whichever cell is chosen, so it is left out");
}
