//! Print a synthetic chunk-annotated corpus: `synth_corpus <seed> <sentences>`.

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let seed = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let n = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(100);
    print!("{}", gatemplate_testkit::synth::conll(seed, n));
}
