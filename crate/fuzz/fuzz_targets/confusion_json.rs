#![no_main]
use kinelink::signal::ConfusionMatrix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(cm) = serde_json::from_slice::<ConfusionMatrix>(data) {
        for row in cm.rows() {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        }
    }
});
