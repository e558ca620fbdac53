#![no_main]
use kinelink::WildcardIndex;
use libfuzzer_sys::fuzz_target;

const CAP: u64 = 64 << 20;

fuzz_target!(|data: &[u8]| {
    if let Ok(index) = WildcardIndex::read_snapshot(data, CAP) {
        let mut first = Vec::new();
        index.write_snapshot(&mut first).unwrap();
        let reloaded = WildcardIndex::read_snapshot(first.as_slice(), CAP).unwrap();
        let mut second = Vec::new();
        reloaded.write_snapshot(&mut second).unwrap();
        assert_eq!(first, second);
    }
});
