#![no_main]
use kinelink::synth::GroundTruth;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(truth) = GroundTruth::from_json(s) {
        assert_eq!(GroundTruth::from_json(&truth.to_json()).unwrap(), truth);
    }
});
