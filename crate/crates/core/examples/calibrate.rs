//! Re-runs the membership-function search and prints the winning rule bases.
//!
//! ```text
//! cargo run --release -p gdm-core --example calibrate -- [preference|feedback] [samples] [seed]
//! ```

use gdm_core::calibrate::{calibrate_feedback, calibrate_preference, SearchConfig};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let which = args.first().map(String::as_str).unwrap_or("preference");
    let mut cfg = SearchConfig::default();
    if let Some(n) = args.get(1).and_then(|s| s.parse().ok()) {
        cfg.samples = n;
    }
    if let Some(seed) = args.get(2).and_then(|s| s.parse().ok()) {
        cfg.seed = seed;
    }
    let result = match which {
        "preference" => calibrate_preference(&cfg),
        "feedback" => calibrate_feedback(&cfg),
        other => {
            eprintln!("unknown family `{other}`");
            std::process::exit(2);
        }
    };
    match result {
        Some(cal) => {
            eprintln!("squared error {:.6}", cal.error);
            for (x, y, got, want) in &cal.fit {
                eprintln!("  ({x}, {y}) -> {got:.4} (target {want})");
            }
            print!("{}", cal.rule_base.to_toml_string());
        }
        None => {
            eprintln!("no admissible candidate found");
            std::process::exit(1);
        }
    }
}
