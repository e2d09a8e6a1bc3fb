//! Regenerates `fixtures/synthetic312.csv`:
//!
//!     cargo run -p scimap --example synthetic312 > fixtures/synthetic312.csv

fn main() -> scimap::Result<()> {
    let corpus = scimap::synth::synthetic312();
    scimap::synth::write_scopus_csv(&corpus, &mut std::io::stdout().lock())
}
