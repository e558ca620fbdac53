#![no_main]
use kinelink::synth::CohortSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = CohortSpec::from_json(s) {
        assert_eq!(CohortSpec::from_json(&spec.to_json()).unwrap(), spec);
    }
});
