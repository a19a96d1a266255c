#![no_main]

use libfuzzer_sys::fuzz_target;
use seqhmm::profile::{profile_expected_counts, ProfileHmm, Space};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = ProfileHmm::from_json(text) {
        assert_eq!(ProfileHmm::from_json(&p.to_json()).unwrap(), p);
        if p.length() <= 64 {
            let x: Vec<usize> = (0..p.length()).map(|i| i % p.alphabet_size()).collect();
            let _ = profile_expected_counts(&p, &x, Space::Log);
        }
    }
});
