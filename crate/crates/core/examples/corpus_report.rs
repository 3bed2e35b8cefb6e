//! Sizes, counts and timings for every bundled specification.

use gr1kit::{corpus, pipeline, report::SpecReport};

fn main() {
    for name in corpus::names() {
        let (mut s, strategy) = pipeline::run(name).unwrap();
        println!("{}\n", SpecReport::new(&mut s, &strategy, true));
    }
}
