#![no_main]
use kinelink::signal::ClassifierModel;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(model) = ClassifierModel::from_json(s) {
        assert_eq!(ClassifierModel::from_json(&model.to_json()).unwrap(), model);
    }
});
