//! Polarity and rule-based sentiment for a few posts.
//!
//! ```text
//! cargo run --example score_sentiment [-- "text to score" ...]
//! ```

use buzzcast::sentiment::Analyzers;

fn main() {
    let analyzers = Analyzers::bundled();
    let mut texts: Vec<String> = std::env::args().skip(1).collect();
    if texts.is_empty() {
        texts = [
            "good",
            "GOOD!!!",
            "not good",
            "The defense is very good but the offense is terrible",
            "Can't wait for the Super Bowl!",
            "",
        ]
        .map(String::from)
        .to_vec();
    }
    println!(
        "{:>9} {:>9} {:>9}  text",
        "polarity", "subject.", "compound"
    );
    for t in &texts {
        let s = analyzers.score(t);
        println!(
            "{:>9.4} {:>9.4} {:>9.4}  {t:?}",
            s.polarity, s.subjectivity, s.compound
        );
    }
}
