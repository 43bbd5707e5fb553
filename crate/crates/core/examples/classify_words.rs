//! Classify a handful of equations by their content.
//!
//! Run with `cargo run --example classify_words`.

use std::collections::BTreeSet;

use wordsolve::{classify, Word};

fn main() {
    let symbols: BTreeSet<String> = ["g", "h"].iter().map(|s| s.to_string()).collect();
    let words = [
        ("content x1", "g x1 h", 2),
        ("[x1,x2]", "g x1 x2 x1^-1 h x2^-1", 2),
        ("[x1,x2]^3", "x1 x2 x1^-1 x2^-1 x1 x2 x1^-1 x2^-1 x1 x2 x1^-1 x2^-1", 2),
        ("[[x1,x2],x1]", "x1 x2 x1^-1 x2^-1 x1 x2 x1 x2^-1 x1^-1 x1^-1", 2),
        ("singular", "g x1 h x1^-1", 1),
    ];
    for (label, text, n) in words {
        let w = Word::parse(text, n, &symbols).expect("valid word");
        let report = classify(&w);
        println!("{label:>14}: {text}");
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    }
}
