#![no_main]

use libfuzzer_sys::fuzz_target;
use seqhmm::ann::{predict_ann, AnnModel};
use seqhmm::seqstruct::ModelDirection;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(model) = AnnModel::from_json(text) {
        if model.net.weights().iter().map(|w| w.as_slice().len()).sum::<usize>() > 1 << 16 {
            return;
        }
        let input = match model.direction {
            ModelDirection::StructureHidden => "ACDEFGHIKLMNPQRSTVWY",
            ModelDirection::SequenceHidden => "HGIEBTSU",
        };
        let out = predict_ann(&model, input).expect("valid observed string");
        assert_eq!(out.len(), input.len());
    }
});
