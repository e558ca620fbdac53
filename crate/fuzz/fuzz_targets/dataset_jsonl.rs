#![no_main]
use kinelink::{Channel, Dataset};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    for channel in [Channel::Motion, Channel::Visual] {
        if let Ok(ds) = Dataset::read_jsonl(channel, data) {
            let mut out = Vec::new();
            ds.write_jsonl(&mut out).unwrap();
            assert_eq!(Dataset::read_jsonl(channel, out.as_slice()).unwrap(), ds);
        }
    }
});
