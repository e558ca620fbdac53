#![no_main]
use kinelink::signal::KeypointTrace;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(trace) = KeypointTrace::read_jsonl(data, 30.0) {
        let mut out = Vec::new();
        trace.write_jsonl(&mut out).unwrap();
        let again = KeypointTrace::read_jsonl(out.as_slice(), 30.0).unwrap();
        assert_eq!(again.frames().len(), trace.frames().len());
    }
});
