#![no_main]
use kinelink::signal::MotionTrace;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(trace) = MotionTrace::read_csv(data, 0.02) {
        let mut out = Vec::new();
        trace.write_csv(&mut out).unwrap();
        let again = MotionTrace::read_csv(out.as_slice(), 0.02).unwrap();
        assert_eq!(again.samples().len(), trace.samples().len());
    }
});
