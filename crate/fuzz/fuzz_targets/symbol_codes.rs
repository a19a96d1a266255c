#![no_main]

use libfuzzer_sys::fuzz_target;
use seqhmm::alphabet::{RESIDUES, STRUCTURES};

fuzz_target!(|data: &[u8]| {
    for alphabet in [RESIDUES, STRUCTURES] {
        let width = alphabet.min_code_width();
        for chunk in data.chunks(width) {
            let bits: Vec<u8> = chunk.iter().map(|b| b & 1).collect();
            if let Ok(c) = alphabet.decode(&bits) {
                assert_eq!(alphabet.encode(c, bits.len()).unwrap(), bits);
            }
        }
    }
});
