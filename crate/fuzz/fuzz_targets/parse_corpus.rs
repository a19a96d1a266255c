#![no_main]

use libfuzzer_sys::fuzz_target;
use seqhmm::dataset::{parse_corpus, ParseMode};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for mode in [ParseMode::Strict, ParseMode::Lenient, ParseMode::Repair] {
        if let Ok(parsed) = parse_corpus(text, mode) {
            // whatever parses must survive a trip through both writers
            let corpus = parsed.corpus;
            for out in [corpus.to_assignment_text(), corpus.to_record_text()] {
                let again = parse_corpus(&out, ParseMode::Strict).expect("writer output parses");
                assert_eq!(again.corpus, corpus);
            }
        }
    }
});
