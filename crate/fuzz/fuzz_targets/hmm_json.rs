#![no_main]

use libfuzzer_sys::fuzz_target;
use seqhmm::hmm::{posterior, viterbi, DiscreteHmm};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(model) = DiscreteHmm::from_json(text) {
        assert_eq!(DiscreteHmm::from_json(&model.to_json()).unwrap(), model);
        let obs: Vec<usize> = (0..8).map(|t| t % model.n_symbols()).collect();
        let _ = posterior(&model, &obs);
        let _ = viterbi(&model, &obs);
    }
});
